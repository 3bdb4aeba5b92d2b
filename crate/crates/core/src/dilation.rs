//! Zero-mean projections, dilations and the Fourier coefficients of the
//! `Γ₁` generators.
//!
//! A point of `Γ_n` with parameter `γ` (or `δ`) satisfies
//! `f^n(x) = f^1(nx)`, so its zero-mean part is `g_n = h(n·)` where `h` is
//! the zero-mean part of the generator on `Γ₁`. Writing
//! `h = Σ_k A_k cos(kx)` gives `g_n = Σ_k A_k cos(nkx)`.

use std::f64::consts::{PI, SQRT_2};

use crate::analytic::{inner_with_constant, norm_squared, sinc};
use crate::biorthogonal::FucikSystem;
use crate::eigenfunction::{reduce_even_periodic, Eigenfunction};
use crate::error::{domain, Result};
use crate::spectrum::{dilation_params, Branch, DilationParams, FucikPoint};

pub use crate::analytic::RESONANCE_REL_WINDOW;

/// Default truncation for coefficient series.
pub const DEFAULT_KMAX: u32 = 200;

/// `g = f − (√2/π)⟨f, φ₀⟩`, the projection onto zero-mean functions.
#[derive(Debug, Clone)]
pub struct ZeroMeanProjection {
    pub base: Eigenfunction,
    pub mean_term: f64,
}

impl ZeroMeanProjection {
    pub fn eval(&self, x: f64) -> f64 {
        self.base.eval(x) - self.mean_term
    }

    /// `‖g‖² = ‖f‖² − (2/π)⟨f, φ₀⟩²`.
    pub fn norm_squared(&self) -> f64 {
        let c = inner_with_constant(self.base.point());
        norm_squared(self.base.point()) - 2.0 / PI * c * c
    }
}

pub fn project_zero_mean(p: &FucikPoint) -> Result<ZeroMeanProjection> {
    if p.is_trivial() {
        return domain("zero-mean projection needs n >= 1");
    }
    Ok(ZeroMeanProjection {
        base: Eigenfunction::new(*p),
        mean_term: SQRT_2 / PI * inner_with_constant(p),
    })
}

/// `(T_k h)(x) = h*(kx)` with `h*` the even `2π`-periodic extension.
pub fn dilate<H: Fn(f64) -> f64>(h: H, k: u32, x: f64) -> f64 {
    if k == 1 {
        return h(x);
    }
    h(reduce_even_periodic(f64::from(k) * x).0)
}

/// Cosine coefficient `A_k = (2/π)∫₀^π h cos(kx)` of the alpha-branch
/// generator with parameter `γ ≥ 1`. The beta branch differs by the sign
/// `(−1)^{k+1}`, see [`signed_fourier_coefficient`].
pub fn fourier_coefficient(gamma: f64, k: u32) -> Result<f64> {
    if !(gamma >= 1.0) || !gamma.is_finite() {
        return domain(format!("dilation parameter must be a finite value >= 1, got {gamma}"));
    }
    if k == 0 {
        return domain("coefficient index must be >= 1");
    }
    let kf = f64::from(k);
    if gamma == 1.0 {
        return Ok(if k == 1 { 1.0 } else { 0.0 });
    }
    let k2 = kf * kf;
    if k >= 2 && (gamma == k2 || (gamma - k2).abs() <= RESONANCE_REL_WINDOW * k2) {
        return Ok(1.0 / (2.0 * kf * (2.0 * kf - 1.0)));
    }
    let g = gamma.sqrt();
    let d = 2.0 * g - 1.0;
    let u = PI * (g - kf) / (2.0 * g);
    if k == 1 {
        // (k²(2g−1)² − γ) = (g − 1)(3g − 1) cancels the leading (g − 1)
        return Ok(4.0 * g * g * g * sinc(u) / ((1.0 + g) * (3.0 * g - 1.0) * d));
    }
    Ok(4.0 * g * g * g * (g - 1.0) * sinc(u) / ((kf + g) * (k2 * d * d - gamma) * d))
}

/// `A_k` with the branch sign applied.
pub fn signed_fourier_coefficient(params: DilationParams, k: u32) -> Result<f64> {
    let a = fourier_coefficient(params.value(), k)?;
    Ok(match params.branch() {
        Branch::BetaDominant if k.is_multiple_of(2) => -a,
        _ => a,
    })
}

/// Uniform cap `c_k` on the perturbation constants `C_{n,k}`.
pub fn perturbation_bound(k: u32) -> f64 {
    assert!(k >= 1, "perturbation bound index starts at 1");
    if k == 1 {
        (12.0 + PI * PI) / 36.0
    } else {
        let kf = f64::from(k);
        2.0 / (4.0 * kf * kf - 1.0)
    }
}

/// Coefficients of one `g_n` in the dilated cosine system.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierRow {
    pub n: u32,
    /// `A_{n,k}` for `k = 1..=kmax`, branch sign included.
    pub coefficients: Vec<f64>,
    pub c_bounds: Vec<f64>,
}

impl FourierRow {
    /// `C_{n,1} = A_{n,1} − 1`, `C_{n,k} = A_{n,k}` for `k ≥ 2`.
    pub fn perturbation(&self, k: u32) -> f64 {
        let a = self.coefficients[(k - 1) as usize];
        if k == 1 {
            a - 1.0
        } else {
            a
        }
    }

    /// Indices `k` with `|C_{n,k}| > c_k`.
    pub fn violations(&self) -> Vec<u32> {
        (1..=self.coefficients.len() as u32)
            .filter(|&k| self.perturbation(k).abs() > self.c_bounds[(k - 1) as usize])
            .collect()
    }

    /// `(π/2) Σ_k A_k²`, the truncated Parseval sum.
    pub fn parseval_partial(&self) -> f64 {
        PI / 2.0 * self.coefficients.iter().map(|a| a * a).sum::<f64>()
    }

    /// `g_n(x)` reassembled from the truncated series.
    pub fn eval(&self, x: f64) -> f64 {
        let nx = f64::from(self.n) * x;
        self.coefficients
            .iter()
            .enumerate()
            .map(|(i, a)| a * ((i as f64 + 1.0) * nx).cos())
            .sum()
    }
}

pub fn fourier_row(p: &FucikPoint, kmax: u32) -> Result<FourierRow> {
    let params = dilation_params(p)?;
    let coefficients = (1..=kmax)
        .map(|k| signed_fourier_coefficient(params, k))
        .collect::<Result<Vec<_>>>()?;
    Ok(FourierRow {
        n: p.n(),
        coefficients,
        c_bounds: (1..=kmax).map(perturbation_bound).collect(),
    })
}

/// Sup over `grid` midpoints of `|g_n − Σ_{k≤K} A_{n,k} cos(nk·)|`.
pub fn representation_residual(p: &FucikPoint, kmax: u32, grid_size: usize) -> Result<f64> {
    let g = project_zero_mean(p)?;
    let row = fourier_row(p, kmax)?;
    Ok(crate::eigenfunction::midpoint_grid(grid_size)
        .map(|x| (g.eval(x) - row.eval(x)).abs())
        .fold(0.0, f64::max))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Certificate {
    pub kmax: u32,
    /// `c_1 + Σ_{k=2}^{K} c_k`.
    pub partial: f64,
    /// `Σ_{k>K} c_k = 1/(2K + 1)`, exact by telescoping.
    pub tail: f64,
    pub total: f64,
    pub lt_one: bool,
}

pub fn certificate_sum(kmax: u32) -> Result<Certificate> {
    if kmax < 2 {
        return domain("certificate needs kmax >= 2");
    }
    // smallest terms first
    let partial = (1..=kmax).rev().map(perturbation_bound).sum::<f64>();
    let tail = 1.0 / (2.0 * f64::from(kmax) + 1.0);
    let total = partial + tail;
    Ok(Certificate {
        kmax,
        partial,
        tail,
        total,
        lt_one: total < 1.0,
    })
}

/// `(12+π²)/36 + 1/3`.
pub fn certificate_limit() -> f64 {
    (12.0 + PI * PI) / 36.0 + 1.0 / 3.0
}

/// First monotone comparison function; `B₁(γ)/6` bounds `|C_{n,1}|`.
pub fn b1(gamma: f64) -> f64 {
    let g = gamma.sqrt();
    (g - 1.0) * ((12.0 + PI * PI) * gamma + (18.0 - PI * PI) * g - 6.0)
        / ((g + 1.0) * (2.0 * g - 1.0) * (3.0 * g - 1.0))
}

/// Second comparison function; `4·B₂(γ; k)` bounds `|C_{n,k}|`, `k ≥ 2`.
pub fn b2(gamma: f64, k: u32) -> f64 {
    let g = gamma.sqrt();
    let kf = f64::from(k);
    let d = 2.0 * g - 1.0;
    g * g * g * (g - 1.0) / ((kf + g) * (kf * kf * d * d - gamma) * d)
}

pub fn b1_limit() -> f64 {
    (12.0 + PI * PI) / 6.0
}

pub fn b2_limit(k: u32) -> f64 {
    let kf = f64::from(k);
    1.0 / (2.0 * (4.0 * kf * kf - 1.0))
}

#[derive(Debug, Clone, PartialEq)]
pub struct MonotonicityReport {
    pub k: u32,
    pub b1_increasing: bool,
    pub b2_increasing: bool,
    pub b1_below_limit: bool,
    pub b2_below_limit: bool,
    pub b1_values: Vec<f64>,
    pub b2_values: Vec<f64>,
}

impl MonotonicityReport {
    pub fn passed(&self) -> bool {
        self.b1_increasing && self.b2_increasing && self.b1_below_limit && self.b2_below_limit
    }
}

fn strictly_increasing(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[0] < w[1])
}

pub fn monotonicity_report(k: u32, gamma_grid: &[f64]) -> Result<MonotonicityReport> {
    if k == 0 {
        return domain("k must be >= 1");
    }
    if let Some(&g) = gamma_grid.iter().find(|&&g| !(g > 1.0)) {
        return domain(format!("grid points must exceed 1, got {g}"));
    }
    if !strictly_increasing(gamma_grid) {
        return domain("grid must be strictly increasing");
    }
    let b1_values: Vec<f64> = gamma_grid.iter().map(|&g| b1(g)).collect();
    let b2_values: Vec<f64> = gamma_grid.iter().map(|&g| b2(g, k)).collect();
    Ok(MonotonicityReport {
        k,
        b1_increasing: strictly_increasing(&b1_values),
        b2_increasing: strictly_increasing(&b2_values),
        b1_below_limit: b1_values.iter().all(|&v| v < b1_limit()),
        b2_below_limit: b2_values.iter().all(|&v| v < b2_limit(k)),
        b1_values,
        b2_values,
    })
}

/// True iff `B₁` and `B₂(·; k)` strictly increase along the grid and stay
/// below their `γ → ∞` limits.
pub fn bound_monotonicity_check(k: u32, gamma_grid: &[f64]) -> Result<bool> {
    Ok(monotonicity_report(k, gamma_grid)?.passed())
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeanCoefficientSum {
    pub partial: f64,
    /// `⟨f^n, φ₀⟩²` for `n = 1..=N`.
    pub terms: Vec<f64>,
    /// `8(s − n)²/(2s − n)²`, `s = max(√α, √β)`.
    pub closed_terms: Vec<f64>,
}

impl MeanCoefficientSum {
    pub fn max_term_mismatch(&self) -> f64 {
        self.terms
            .iter()
            .zip(&self.closed_terms)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

pub fn mean_coefficient_sum(system: &FucikSystem, n_max: u32) -> Result<MeanCoefficientSum> {
    let mut terms = Vec::with_capacity(n_max as usize);
    let mut closed_terms = Vec::with_capacity(n_max as usize);
    for n in 1..=n_max {
        let p = system.point(n)?;
        let c = inner_with_constant(&p);
        terms.push(c * c);
        let nf = f64::from(n);
        let s = p.dominant_sqrt();
        let r = (s - nf) / (2.0 * s - nf);
        closed_terms.push(8.0 * r * r);
    }
    Ok(MeanCoefficientSum {
        partial: terms.iter().sum(),
        terms,
        closed_terms,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::{integrate, QuadratureSpec};
    use crate::spectrum::{point_from_alpha, point_from_beta};
    use proptest::prelude::*;

    fn spec() -> QuadratureSpec {
        QuadratureSpec::default()
    }

    /// `(2/π)∫₀^π h cos(kx)` by quadrature, generator built independently.
    fn coefficient_by_quadrature(params: DilationParams, k: u32) -> f64 {
        let g = project_zero_mean(&params.generator().unwrap()).unwrap();
        let kf = f64::from(k);
        2.0 / PI
            * integrate(|x| g.eval(x) * (kf * x).cos(), g.base.joints(), (0.0, PI), &spec())
                .unwrap()
                .value
    }

    #[test]
    fn projection_examples() {
        let d = project_zero_mean(&FucikPoint::diagonal(3)).unwrap();
        assert_eq!(d.mean_term, 0.0);
        assert!((d.eval(0.4) - (1.2f64).cos()).abs() < 1e-15);
        let p = point_from_alpha(1, 4.0).unwrap();
        let g = project_zero_mean(&p).unwrap();
        assert!((g.mean_term + 4.0 / (3.0 * PI)).abs() < 1e-15);
        for q in [p, point_from_beta(3, 20.0).unwrap(), point_from_alpha(5, 40.0).unwrap()] {
            let g = project_zero_mean(&q).unwrap();
            let mean = integrate(|x| g.eval(x), g.base.joints(), (0.0, PI), &spec()).unwrap();
            assert!(mean.value.abs() <= 1e-10);
        }
        assert!(project_zero_mean(&FucikPoint::trivial()).is_err());
    }

    #[test]
    fn dilation_examples() {
        assert!(dilate(f64::cos, 3, PI / 6.0).abs() < 1e-15);
        assert_eq!(dilate(|x| x * x, 1, 2.5), 6.25);
        let g = project_zero_mean(&point_from_alpha(1, 4.0).unwrap()).unwrap();
        let base = integrate(|x| g.eval(x).powi(2), g.base.joints(), (0.0, PI), &spec()).unwrap();
        for k in [2u32, 3, 5] {
            // joints of the dilated function: preimages of the generator's joint
            let j = g.base.joints()[0];
            let kf = f64::from(k);
            let mut breaks = Vec::new();
            for i in 0..=k {
                let c = 2.0 * PI * f64::from(i) / kf;
                breaks.extend([(c - j) / kf, (c + j) / kf]);
            }
            let dil = integrate(|x| dilate(|y| g.eval(y), k, x).powi(2), &breaks, (0.0, PI), &spec())
                .unwrap();
            assert!((dil.value - base.value).abs() <= 1e-9, "k={k}");
        }
    }

    #[test]
    fn coefficient_examples() {
        assert_eq!(fourier_coefficient(1.0, 1).unwrap(), 1.0);
        assert_eq!(fourier_coefficient(1.0, 2).unwrap(), 0.0);
        assert!((fourier_coefficient(4.0, 2).unwrap() - 1.0 / 12.0).abs() < 1e-16);
        let a = fourier_coefficient(4.0, 3).unwrap();
        let q = coefficient_by_quadrature(DilationParams::Gamma(4.0), 3);
        assert!((a - q).abs() <= 1e-10);
        assert!(fourier_coefficient(0.5, 1).is_err());
    }

    #[test]
    fn printed_form_agrees_off_resonance() {
        for gamma in [1.1f64, 2.0, 3.7, 10.0] {
            let g: f64 = gamma.sqrt();
            for k in 1..=8u32 {
                let kf = f64::from(k);
                let printed = 8.0 * gamma * gamma * (1.0 - g) * (kf * PI / (2.0 * g)).cos()
                    / (PI * (kf * kf - gamma) * (kf * kf * (2.0 * g - 1.0).powi(2) - gamma) * (2.0 * g - 1.0));
                let a = fourier_coefficient(gamma, k).unwrap();
                assert!((a - printed).abs() <= 1e-13, "γ={gamma} k={k}");
            }
        }
    }

    #[test]
    fn coefficients_match_quadrature_on_both_branches() {
        for v in [1.1, 2.0, 4.0, 9.0] {
            for params in [DilationParams::Gamma(v), DilationParams::Delta(v)] {
                for k in 1..=6u32 {
                    let a = signed_fourier_coefficient(params, k).unwrap();
                    let q = coefficient_by_quadrature(params, k);
                    assert!((a - q).abs() <= 1e-10, "{params:?} k={k}: {a} vs {q}");
                }
            }
        }
    }

    #[test]
    fn bound_examples() {
        assert!((perturbation_bound(1) - 0.607_489).abs() < 1e-6);
        assert_eq!(perturbation_bound(2), 2.0 / 15.0);
        assert_eq!(perturbation_bound(10), 2.0 / 399.0);
    }

    #[test]
    fn certificate_examples() {
        let c = certificate_sum(2).unwrap();
        assert!((c.partial - ((12.0 + PI * PI) / 36.0 + 2.0 / 15.0)).abs() < 1e-15);
        assert!((c.total - certificate_limit()).abs() < 1e-15);
        let big = certificate_sum(10_000).unwrap();
        assert!(big.lt_one);
        assert!((big.total - 0.940_822_3).abs() <= 1e-6);
        assert!(certificate_sum(1).is_err());
        // telescoping tail against brute force
        let brute: f64 = (2..=200_000u32).rev().map(perturbation_bound).sum();
        assert!((brute + 1.0 / 400_001.0 - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn comparison_limits_reinstate_constants() {
        assert!((b1_limit() / 6.0 - perturbation_bound(1)).abs() < 1e-15);
        for k in 2..=6 {
            assert!((4.0 * b2_limit(k) - perturbation_bound(k)).abs() < 1e-15);
        }
        assert!((b1(1e12) - b1_limit()).abs() < 1e-5);
        assert!((b2(1e12, 3) - b2_limit(3)).abs() < 1e-7);
    }

    #[test]
    fn monotonicity_for_k_at_least_two() {
        let grid = [1.001, 1.01, 1.1, 2.0, 10.0, 100.0, 1e4];
        for k in 2..=6 {
            assert!(bound_monotonicity_check(k, &grid).unwrap(), "k={k}");
        }
        let r = monotonicity_report(1, &grid).unwrap();
        assert!(r.b1_increasing);
        // B₂(γ; 1) = g³/((1+g)(3g−1)(2g−1)) falls from 1/4 to 1/6
        assert!(!r.b2_increasing);
        assert!(bound_monotonicity_check(2, &[1.0, 2.0]).is_err());
        assert!(bound_monotonicity_check(2, &[3.0, 2.0]).is_err());
    }

    #[test]
    fn mean_sum_examples() {
        let d = FucikSystem::diagonal(6);
        assert_eq!(mean_coefficient_sum(&d, 6).unwrap().partial, 0.0);
        let s = FucikSystem::diagonal(4).with_point(point_from_alpha(1, 4.0).unwrap()).unwrap();
        assert!((mean_coefficient_sum(&s, 4).unwrap().partial - 8.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn parseval_and_representation() {
        let p = point_from_beta(2, 4.0 * 3.0).unwrap();
        let g = project_zero_mean(&p).unwrap();
        let target = g.norm_squared();
        let row = fourier_row(&p, DEFAULT_KMAX).unwrap();
        let mut prev = 0.0;
        let mut acc = 0.0;
        for a in &row.coefficients {
            acc += PI / 2.0 * a * a;
            assert!(acc >= prev && acc <= target + 1e-12);
            prev = acc;
        }
        assert!(target - acc < 1e-6);
        let tail = 1.0 / (2.0 * f64::from(DEFAULT_KMAX) + 1.0);
        assert!(representation_residual(&p, DEFAULT_KMAX, 1000).unwrap() <= tail + 1e-8);
    }

    proptest! {
        #[test]
        fn coefficients_respect_caps(gamma in 1.0f64..200.0, k in 1u32..=40) {
            let a = fourier_coefficient(gamma, k).unwrap();
            let c = if k == 1 { a - 1.0 } else { a };
            prop_assert!(c.abs() <= perturbation_bound(k));
        }

        #[test]
        fn first_coefficient_at_most_one(gamma in 1.0f64..1e4) {
            prop_assert!(fourier_coefficient(gamma, 1).unwrap() <= 1.0);
        }

        #[test]
        fn certificate_below_one(kmax in 2u32..5000) {
            prop_assert!(certificate_sum(kmax).unwrap().lt_one);
        }
    }
}
