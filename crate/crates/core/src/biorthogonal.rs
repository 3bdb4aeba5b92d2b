//! Fučík systems and their biorthogonal duals.
//!
//! `ψ_m = Σ_{k | m} C^m_k φ_k`. Since `⟨f^k, φ_l⟩ = 0` unless `k | l`, the
//! coefficients follow from a sweep over the divisors of `m` in descending
//! order: `C^m_m = 1/⟨f^m, φ_m⟩` and
//! `C^m_k = −⟨f^k, φ_k⟩⁻¹ Σ_{l ∈ d(k,m)} C^m_l ⟨f^k, φ_l⟩`
//! with `d(k,m) = {l : l | m, k | l, l > k}`.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_1_SQRT_2, PI};

use nalgebra::{DMatrix, SymmetricEigen};

use crate::analytic::{inner_with_constant, inner_with_cos, inner_with_self_mode, norm_squared};
use crate::eigenfunction::Eigenfunction;
use crate::error::{domain, Error, Result};
use crate::quadrature::{integrate_many, merge_breakpoints, QuadratureSpec};
use crate::spectrum::{Branch, DilationParams, FucikPoint};

/// One point of `Γ_n` per `n = 0..=n_max`; index 0 is the constant mode.
#[derive(Debug, Clone, PartialEq)]
pub struct FucikSystem {
    points: Vec<FucikPoint>,
}

impl FucikSystem {
    /// `α(n) = β(n) = n²`, i.e. the cosine basis.
    pub fn diagonal(n_max: u32) -> Self {
        let mut points = vec![FucikPoint::trivial()];
        points.extend((1..=n_max).map(FucikPoint::diagonal));
        FucikSystem { points }
    }

    /// `points[n]` must lie on `Γ_n`.
    pub fn from_points(points: Vec<FucikPoint>) -> Result<Self> {
        if points.is_empty() {
            return domain("a system needs at least the constant mode");
        }
        for (i, p) in points.iter().enumerate() {
            if p.n() as usize != i {
                return domain(format!("entry {i} lies on Γ_{} instead of Γ_{i}", p.n()));
            }
        }
        Ok(FucikSystem { points })
    }

    /// `params[n − 1]` fixes the point of `Γ_n`.
    pub fn from_params(params: &[DilationParams]) -> Result<Self> {
        let mut points = vec![FucikPoint::trivial()];
        for (i, prm) in params.iter().enumerate() {
            points.push(prm.point(i as u32 + 1)?);
        }
        Ok(FucikSystem { points })
    }

    /// Replaces the entry of index `p.n()`, extending diagonally if needed.
    pub fn with_point(mut self, p: FucikPoint) -> Result<Self> {
        if p.is_trivial() {
            return domain("the constant mode is fixed");
        }
        let n = p.n() as usize;
        while self.points.len() <= n {
            let next = self.points.len() as u32;
            self.points.push(FucikPoint::diagonal(next));
        }
        self.points[n] = p;
        Ok(self)
    }

    pub fn perturb(self, n: u32, param: f64, branch: Branch) -> Result<Self> {
        let p = FucikPoint::from_dilation(n, param, branch)?;
        self.with_point(p)
    }

    pub fn n_max(&self) -> u32 {
        (self.points.len() - 1) as u32
    }

    pub fn point(&self, n: u32) -> Result<FucikPoint> {
        self.points
            .get(n as usize)
            .copied()
            .ok_or_else(|| Error::Domain(format!("system defined only up to n = {}", self.n_max())))
    }

    pub fn points(&self) -> &[FucikPoint] {
        &self.points
    }

    fn require(&self, n: u32) -> Result<()> {
        if n > self.n_max() {
            return domain(format!(
                "system defined only up to n = {}, requested {n}",
                self.n_max()
            ));
        }
        Ok(())
    }
}

/// `ψ_m` as cosine coefficients on the divisors of `m`.
#[derive(Debug, Clone, PartialEq)]
pub struct BiorthogonalElement {
    pub m: u32,
    pub coeffs: BTreeMap<u32, f64>,
}

impl BiorthogonalElement {
    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs
            .iter()
            .map(|(&k, c)| c * (f64::from(k) * x).cos())
            .sum()
    }

    /// `⟨f, ψ_m⟩` from closed-form products.
    pub fn inner_with(&self, p: &FucikPoint) -> f64 {
        self.coeffs
            .iter()
            .map(|(&k, c)| c * inner_with_cos(p, k).value)
            .sum()
    }
}

/// Divisors of `m` in ascending order.
pub fn divisors(m: u32) -> Vec<u32> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= m {
        if m.is_multiple_of(d) {
            small.push(d);
            if d * d != m {
                large.push(m / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

fn self_product(p: &FucikPoint) -> Result<f64> {
    let v = inner_with_self_mode(p);
    if !(v.abs() >= 1e-300) {
        return Err(Error::Numerical(format!(
            "⟨f, φ_n⟩ vanishes for n = {}",
            p.n()
        )));
    }
    Ok(v)
}

pub fn biorthogonal_element(system: &FucikSystem, m: u32) -> Result<BiorthogonalElement> {
    if m == 0 {
        return domain("ψ₀ has no finite form; use psi0_partial_sum");
    }
    system.require(m)?;
    let divs = divisors(m);
    let mut coeffs = BTreeMap::new();
    for &k in divs.iter().rev() {
        let pk = system.point(k)?;
        let diag = self_product(&pk)?;
        if k == m {
            coeffs.insert(k, 1.0 / diag);
            continue;
        }
        let s: f64 = divs
            .iter()
            .filter(|&&l| l > k && l % k == 0)
            .map(|&l| coeffs[&l] * inner_with_cos(&pk, l).value)
            .sum();
        coeffs.insert(k, -s / diag);
    }
    Ok(BiorthogonalElement { m, coeffs })
}

/// `ψ_1, …, ψ_N`.
pub fn biorthogonal_elements(system: &FucikSystem, n: u32) -> Result<Vec<BiorthogonalElement>> {
    (1..=n).map(|m| biorthogonal_element(system, m)).collect()
}

/// `⟨f^n, ψ_m⟩` for `1 ≤ n, m ≤ N` from closed-form products.
pub fn biorthogonality_matrix(system: &FucikSystem, n: u32) -> Result<DMatrix<f64>> {
    system.require(n)?;
    let psi = biorthogonal_elements(system, n)?;
    let mut out = DMatrix::zeros(n as usize, n as usize);
    for i in 1..=n {
        let p = system.point(i)?;
        for (j, e) in psi.iter().enumerate() {
            out[(i as usize - 1, j)] = e.inner_with(&p);
        }
    }
    Ok(out)
}

/// Same matrix with every entry integrated numerically.
pub fn biorthogonality_matrix_quadrature(
    system: &FucikSystem,
    n: u32,
    spec: &QuadratureSpec,
) -> Result<DMatrix<f64>> {
    system.require(n)?;
    let psi = biorthogonal_elements(system, n)?;
    let mut out = DMatrix::zeros(n as usize, n as usize);
    for i in 1..=n {
        let e = Eigenfunction::new(system.point(i)?);
        let row = integrate_many(
            psi.len(),
            |x, o| {
                let f = e.eval(x);
                for (slot, el) in o.iter_mut().zip(&psi) {
                    *slot = f * el.eval(x);
                }
            },
            e.joints(),
            (0.0, PI),
            spec,
        )?;
        for (j, est) in row.iter().enumerate() {
            out[(i as usize - 1, j)] = est.value;
        }
    }
    Ok(out)
}

/// `max |M − I|` entrywise.
pub fn identity_deviation(m: &DMatrix<f64>) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((m[(i, j)] - target).abs());
        }
    }
    worst
}

#[derive(Debug, Clone, PartialEq)]
pub struct Psi0Partial {
    pub k: u32,
    /// Coefficients on `φ₀, φ₁, …, φ_K`.
    pub coeffs: Vec<f64>,
    /// `Σ_{K < n ≤ n_max} ⟨f^n, φ₀⟩²` over the available prefix.
    pub tail_indicator: f64,
    /// Ratio of the last two dyadic blocks of `⟨f^n, φ₀⟩²`, if defined.
    pub block_ratio: Option<f64>,
    /// Set when the blocks do not shrink fast enough to suggest a finite sum.
    pub warning: bool,
}

impl Psi0Partial {
    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| if k == 0 { c * FRAC_1_SQRT_2 } else { c * (k as f64 * x).cos() })
            .sum()
    }

    /// `⟨f, ψ₀^K⟩` from closed-form products.
    pub fn inner_with(&self, p: &FucikPoint) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| c * inner_with_cos(p, k as u32).value)
            .sum()
    }
}

/// Ratio threshold above which dyadic blocks are flagged.
pub const BLOCK_RATIO_WARN: f64 = 0.75;

/// `(2/π)(φ₀ − Σ_{n≤K} ⟨f^n, φ₀⟩ ψ_n)`.
pub fn psi0_partial_sum(system: &FucikSystem, k: u32) -> Result<Psi0Partial> {
    system.require(k)?;
    let scale = 2.0 / PI;
    let mut coeffs = vec![0.0; k as usize + 1];
    coeffs[0] = scale;
    for n in 1..=k {
        let mean = inner_with_constant(&system.point(n)?);
        if mean == 0.0 {
            continue;
        }
        for (j, c) in biorthogonal_element(system, n)?.coeffs {
            coeffs[j as usize] -= scale * mean * c;
        }
    }
    let sq: Vec<f64> = system
        .points()
        .iter()
        .skip(1)
        .map(|p| inner_with_constant(p).powi(2))
        .collect();
    let tail_indicator = sq.iter().skip(k as usize).sum();
    let block_ratio = dyadic_block_ratio(&sq);
    Ok(Psi0Partial {
        k,
        coeffs,
        tail_indicator,
        block_ratio,
        warning: block_ratio.is_some_and(|r| r >= BLOCK_RATIO_WARN),
    })
}

/// `terms[n − 1]` grouped into blocks `[2^j, 2^{j+1})`; ratio of the last
/// complete block to the one before it.
pub(crate) fn dyadic_block_ratio(terms: &[f64]) -> Option<f64> {
    let mut blocks = Vec::new();
    let mut lo = 1usize;
    while 2 * lo - 1 <= terms.len() {
        blocks.push(terms[lo - 1..2 * lo - 1].iter().sum::<f64>());
        lo *= 2;
    }
    match blocks.as_slice() {
        [.., a, b] if *a > 0.0 => Some(b / a),
        [.., a, b] if *a == 0.0 && *b == 0.0 => Some(0.0),
        [.., _, _] => Some(f64::INFINITY),
        _ => None,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GramReport {
    pub matrix: DMatrix<f64>,
    pub min_eigenvalue: f64,
    pub max_eigenvalue: f64,
}

/// Tolerance for the numerically filled Gram entries.
pub const GRAM_QUAD_TOL: f64 = 1e-10;

/// Spectrum of `⟨f^i, f^j⟩`, `0 ≤ i, j ≤ N`. Diagonal and `f⁰` entries are
/// closed-form; the rest are integrated.
pub fn gram_condition(system: &FucikSystem, n: u32, spec: &QuadratureSpec) -> Result<GramReport> {
    system.require(n)?;
    let size = n as usize + 1;
    let spec = QuadratureSpec::new(spec.abs_tol.max(GRAM_QUAD_TOL), spec.nodes_per_segment, spec.max_refinements)?;
    let funcs: Vec<Eigenfunction> = (0..=n)
        .map(|i| system.point(i).map(Eigenfunction::new))
        .collect::<Result<_>>()?;
    let mut g = DMatrix::zeros(size, size);
    for i in 0..size {
        g[(i, i)] = norm_squared(funcs[i].point());
        if i > 0 {
            let v = inner_with_constant(funcs[i].point());
            g[(0, i)] = v;
            g[(i, 0)] = v;
        }
    }
    for i in 1..size {
        let others = &funcs[i + 1..];
        if others.is_empty() {
            continue;
        }
        let breaks = merge_breakpoints(
            std::iter::once(funcs[i].joints()).chain(others.iter().map(|e| e.joints())),
        );
        let fi = &funcs[i];
        let row = integrate_many(
            others.len(),
            |x, o| {
                let a = fi.eval(x);
                for (slot, e) in o.iter_mut().zip(others) {
                    *slot = a * e.eval(x);
                }
            },
            &breaks,
            (0.0, PI),
            &spec,
        )?;
        for (off, est) in row.iter().enumerate() {
            let j = i + 1 + off;
            g[(i, j)] = est.value;
            g[(j, i)] = est.value;
        }
    }
    let eig = SymmetricEigen::try_new(g.clone(), f64::EPSILON, 10_000)
        .ok_or_else(|| Error::Numerical("Gram eigen-decomposition did not converge".into()))?;
    let min_eigenvalue = eig.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
    let max_eigenvalue = eig.eigenvalues.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(GramReport {
        matrix: g,
        min_eigenvalue,
        max_eigenvalue,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrum::{point_from_alpha, point_from_beta};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn spec() -> QuadratureSpec {
        QuadratureSpec::default()
    }

    fn random_system(n_max: u32, seed: u64) -> FucikSystem {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let params: Vec<DilationParams> = (0..n_max)
            .map(|_| {
                let v = rng.gen_range(1.0..=4.0);
                if rng.gen_bool(0.5) {
                    DilationParams::Gamma(v)
                } else {
                    DilationParams::Delta(v)
                }
            })
            .collect();
        FucikSystem::from_params(&params).unwrap()
    }

    #[test]
    fn divisor_lists() {
        assert_eq!(divisors(1), vec![1]);
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(divisors(49), vec![1, 7, 49]);
    }

    #[test]
    fn system_construction() {
        let s = FucikSystem::diagonal(3);
        assert_eq!(s.n_max(), 3);
        assert!(s.point(0).unwrap().is_trivial());
        assert!(s.point(4).is_err());
        let s = s.with_point(point_from_alpha(5, 30.0).unwrap()).unwrap();
        assert_eq!(s.n_max(), 5);
        assert!(s.point(4).unwrap().is_diagonal());
        assert!(FucikSystem::from_points(vec![FucikPoint::diagonal(1)]).is_err());
    }

    #[test]
    fn diagonal_dual_is_scaled_cosine() {
        let s = FucikSystem::diagonal(12);
        for m in 1..=12 {
            let e = biorthogonal_element(&s, m).unwrap();
            for (&k, &c) in &e.coeffs {
                let want = if k == m { 2.0 / PI } else { 0.0 };
                assert!((c - want).abs() < 1e-15);
            }
        }
        assert!(identity_deviation(&biorthogonality_matrix(&s, 12).unwrap()) <= 1e-12);
    }

    #[test]
    fn prime_index_support() {
        let s = random_system(13, 7);
        for m in [2u32, 3, 5, 7, 11, 13] {
            let e = biorthogonal_element(&s, m).unwrap();
            assert_eq!(e.coeffs.keys().copied().collect::<Vec<_>>(), vec![1, m]);
        }
    }

    #[test]
    fn psi4_against_quadrature() {
        let s = FucikSystem::diagonal(8)
            .perturb(1, 2.5, Branch::AlphaDominant)
            .unwrap()
            .perturb(2, 1.7, Branch::BetaDominant)
            .unwrap()
            .perturb(4, 3.2, Branch::AlphaDominant)
            .unwrap();
        let q = biorthogonality_matrix_quadrature(&s, 8, &spec()).unwrap();
        for n in 1..=8usize {
            let want = if n == 4 { 1.0 } else { 0.0 };
            assert!((q[(n - 1, 3)] - want).abs() <= 1e-9, "n={n}");
        }
    }

    #[test]
    fn random_system_matrix() {
        let s = random_system(6, 11);
        assert!(identity_deviation(&biorthogonality_matrix(&s, 6).unwrap()) <= 1e-9);
    }

    #[test]
    fn upper_triangular_precursor() {
        let s = random_system(10, 3);
        for n in 2..=10 {
            for m in 1..n {
                assert_eq!(inner_with_cos(&s.point(n).unwrap(), m).value, 0.0);
            }
        }
    }

    #[test]
    fn psi0_examples() {
        let d = psi0_partial_sum(&FucikSystem::diagonal(8), 8).unwrap();
        assert_eq!(d.coeffs[0], 2.0 / PI);
        assert!(d.coeffs[1..].iter().all(|&c| c == 0.0));
        assert!(!d.warning);

        let s = FucikSystem::diagonal(4).with_point(point_from_alpha(1, 4.0).unwrap()).unwrap();
        let k1 = psi0_partial_sum(&s, 1).unwrap();
        let k2 = psi0_partial_sum(&s, 2).unwrap();
        assert_eq!(k1.coeffs[..2], k2.coeffs[..2]);
        assert_eq!(k2.coeffs[2], 0.0);

        let r = random_system(10, 5);
        let p = psi0_partial_sum(&r, 6).unwrap();
        assert!((p.inner_with(&r.point(0).unwrap()) - 1.0).abs() < 1e-12);
        for n in 1..=6 {
            assert!(p.inner_with(&r.point(n).unwrap()).abs() < 1e-12, "n={n}");
        }
    }

    #[test]
    fn psi0_flags_slow_decay() {
        // γ_n = 4 for every n keeps ⟨f^n, φ₀⟩² constant
        let s = FucikSystem::from_params(&vec![DilationParams::Gamma(4.0); 16]).unwrap();
        let p = psi0_partial_sum(&s, 4).unwrap();
        assert!(p.warning);
        assert!((p.tail_indicator - 12.0 * 8.0 / 9.0).abs() < 1e-12);
        let fast: Vec<DilationParams> = (1..=16)
            .map(|n: u32| DilationParams::Gamma(1.0 + 1.0 / f64::from(n * n)))
            .collect();
        assert!(!psi0_partial_sum(&FucikSystem::from_params(&fast).unwrap(), 4).unwrap().warning);
    }

    #[test]
    fn gram_examples() {
        let d = gram_condition(&FucikSystem::diagonal(8), 8, &spec()).unwrap();
        assert!((d.min_eigenvalue - PI / 2.0).abs() < 1e-9);
        let near: Vec<DilationParams> = (1..=8)
            .map(|n: u32| DilationParams::Gamma(1.0 + 1.0 / f64::from(n * n)))
            .collect();
        let g = gram_condition(&FucikSystem::from_params(&near).unwrap(), 8, &spec()).unwrap();
        assert!(g.min_eigenvalue > 0.1);
        let strong: Vec<DilationParams> =
            (1..=8).map(|n: u32| DilationParams::Gamma(f64::from(n))).collect();
        let g = gram_condition(&FucikSystem::from_params(&strong).unwrap(), 8, &spec()).unwrap();
        assert!(g.min_eigenvalue > 0.0);
    }

    #[test]
    fn gram_closed_form_entries_match_quadrature() {
        let p = point_from_beta(3, 20.0).unwrap();
        let s = FucikSystem::diagonal(3).with_point(p).unwrap();
        let g = gram_condition(&s, 3, &spec()).unwrap();
        assert!((g.matrix[(3, 3)] - norm_squared(&p)).abs() < 1e-15);
        assert!((g.matrix[(0, 3)] - inner_with_constant(&p)).abs() < 1e-15);
        // cos x is orthogonal to f³ since 3 does not divide 1
        assert!(g.matrix[(1, 3)].abs() < 1e-10);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn duality_and_support(seed in any::<u64>(), n in 1u32..=12) {
            let s = random_system(12, seed);
            let e = biorthogonal_element(&s, n).unwrap();
            for &k in e.coeffs.keys() {
                prop_assert_eq!(n % k, 0);
            }
            let top = e.coeffs[&n] * inner_with_self_mode(&s.point(n).unwrap());
            prop_assert!((top - 1.0).abs() <= 1e-12);
            prop_assert!(!e.coeffs.contains_key(&0));
            for j in 1..=12 {
                let v = e.inner_with(&s.point(j).unwrap());
                let want = if j == n { 1.0 } else { 0.0 };
                prop_assert!((v - want).abs() <= 1e-9);
            }
        }
    }
}
