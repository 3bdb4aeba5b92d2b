//! Basis-criterion prefixes and expansions in a Fučík system.
//!
//! For `n ≥ 1` the coefficient is `c_n = ⟨ξ, ψ_n⟩`. The constant mode uses
//! the partial dual `ψ₀^K`, giving
//! `b₀(K) = (2/π)(⟨ξ, φ₀⟩ − Σ_{n≤K} ⟨f^n, φ₀⟩ c_n)`.
//! The truncation of order `K` is `b₀(K) f⁰ + Σ_{n=1}^{K} c_n f^n`.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fmt;

use crate::analytic::inner_with_constant;
use crate::biorthogonal::{biorthogonal_elements, dyadic_block_ratio, FucikSystem};
use crate::eigenfunction::Eigenfunction;
use crate::error::{domain, Result};
use crate::quadrature::{integrate_many, merge_breakpoints, QuadratureSpec};
use crate::spectrum::Branch;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    /// Dyadic blocks of the terms shrink; consistent with a finite sum.
    CertifiedPrefix,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::CertifiedPrefix => "certified_prefix",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BasisCertificate {
    /// `Σ_{n≤N} (s_n − n)²/n²`, `s_n = max(√α(n), √β(n))`.
    pub partial_sum: f64,
    pub terms: Vec<f64>,
    /// Same terms as `(√γ_n − 1)²` (or `δ_n`).
    pub terms_from_params: Vec<f64>,
    /// `(s_n − n)²/(2s_n − n)²`.
    pub equivalent_terms: Vec<f64>,
    /// `max_n ((2s_n − n)/n)²`; the two forms differ by at most this factor.
    pub equivalence_factor: f64,
    /// Smallest `C` with `s_n ≤ n + C n^{(1−ε)/2}` on the prefix.
    pub corollary_constant: f64,
    pub epsilon: f64,
    pub verdict: Verdict,
}

impl BasisCertificate {
    pub fn max_term_mismatch(&self) -> f64 {
        self.terms
            .iter()
            .zip(&self.terms_from_params)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    pub fn equivalent_sum(&self) -> f64 {
        self.equivalent_terms.iter().sum()
    }
}

/// Block ratio below which the terms are taken as summable-looking.
pub const CERTIFY_BLOCK_RATIO: f64 = 0.75;

pub fn criterion_check(system: &FucikSystem, n: u32, epsilon: f64) -> Result<BasisCertificate> {
    if n > system.n_max() {
        return domain(format!("system defined only up to n = {}", system.n_max()));
    }
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return domain(format!("epsilon must lie in (0, 1), got {epsilon}"));
    }
    let mut terms = Vec::with_capacity(n as usize);
    let mut terms_from_params = Vec::with_capacity(n as usize);
    let mut equivalent_terms = Vec::with_capacity(n as usize);
    let mut equivalence_factor: f64 = 1.0;
    let mut corollary_constant: f64 = 0.0;
    for i in 1..=n {
        let p = system.point(i)?;
        let nf = f64::from(i);
        let s = p.alpha().sqrt().max(p.beta().sqrt());
        terms.push((s - nf) * (s - nf) / (nf * nf));
        let param = match p.branch() {
            Branch::BetaDominant => p.beta() / (nf * nf),
            _ => p.alpha() / (nf * nf),
        };
        let r = param.sqrt() - 1.0;
        terms_from_params.push(r * r);
        let d = 2.0 * s - nf;
        equivalent_terms.push((s - nf) * (s - nf) / (d * d));
        equivalence_factor = equivalence_factor.max((d / nf) * (d / nf));
        corollary_constant = corollary_constant.max((s - nf) / nf.powf((1.0 - epsilon) / 2.0));
    }
    let verdict = if dyadic_block_ratio(&terms).is_none_or(|r| r < CERTIFY_BLOCK_RATIO) {
        Verdict::CertifiedPrefix
    } else {
        Verdict::Inconclusive
    };
    Ok(BasisCertificate {
        partial_sum: terms.iter().sum(),
        terms,
        terms_from_params,
        equivalent_terms,
        equivalence_factor,
        corollary_constant,
        epsilon,
        verdict,
    })
}

/// A function to expand.
pub enum Target {
    /// Coefficients on `φ₀ = √2/2, φ₁ = cos x, …`.
    Cosine(Vec<f64>),
    /// Black box, smooth between `breakpoints`.
    Function {
        f: Box<dyn Fn(f64) -> f64>,
        breakpoints: Vec<f64>,
    },
}

impl fmt::Debug for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Target::Cosine(c) => f.debug_tuple("Cosine").field(c).finish(),
            Target::Function { breakpoints, .. } => f
                .debug_struct("Function")
                .field("breakpoints", breakpoints)
                .finish_non_exhaustive(),
        }
    }
}

impl Target {
    /// `x − π/2`.
    pub fn sawtooth() -> Self {
        Target::Function {
            f: Box::new(|x| x - PI / 2.0),
            breakpoints: Vec::new(),
        }
    }

    /// The constant `1 = √2 φ₀`.
    pub fn constant() -> Self {
        Target::Cosine(vec![std::f64::consts::SQRT_2])
    }

    /// `φ_m`.
    pub fn mode(m: u32) -> Self {
        let mut c = vec![0.0; m as usize + 1];
        c[m as usize] = 1.0;
        Target::Cosine(c)
    }

    /// `Σ a_n f^n` over the listed `(n, a_n)`.
    pub fn combination(system: &FucikSystem, terms: &[(u32, f64)]) -> Result<Self> {
        let parts: Vec<(Eigenfunction, f64)> = terms
            .iter()
            .map(|&(n, a)| system.point(n).map(|p| (Eigenfunction::new(p), a)))
            .collect::<Result<_>>()?;
        let breakpoints = merge_breakpoints(parts.iter().map(|(e, _)| e.joints()));
        Ok(Target::Function {
            f: Box::new(move |x| parts.iter().map(|(e, a)| a * e.eval(x)).sum()),
            breakpoints,
        })
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self {
            Target::Cosine(c) => c
                .iter()
                .enumerate()
                .map(|(k, a)| if k == 0 { a * FRAC_1_SQRT_2 } else { a * (k as f64 * x).cos() })
                .sum(),
            Target::Function { f, .. } => f(x),
        }
    }

    fn breakpoints(&self) -> &[f64] {
        match self {
            Target::Cosine(_) => &[],
            Target::Function { breakpoints, .. } => breakpoints,
        }
    }

    /// `⟨ξ, φ_k⟩` for `k = 0..=n`.
    pub fn cosine_products(&self, n: u32, spec: &QuadratureSpec) -> Result<Vec<f64>> {
        match self {
            Target::Cosine(c) => Ok((0..=n as usize)
                .map(|k| c.get(k).copied().unwrap_or(0.0) * PI / 2.0)
                .collect()),
            Target::Function { f, breakpoints } => {
                let est = integrate_many(
                    n as usize + 1,
                    |x, o| {
                        let v = f(x);
                        o[0] = v * FRAC_1_SQRT_2;
                        for (k, slot) in o.iter_mut().enumerate().skip(1) {
                            *slot = v * (k as f64 * x).cos();
                        }
                    },
                    breakpoints,
                    (0.0, PI),
                    spec,
                )?;
                Ok(est.into_iter().map(|e| e.value).collect())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExpansionResult {
    /// `c_0 = b₀(N)`, then `c_n = ⟨ξ, ψ_n⟩` for `n = 1..=N`.
    pub coefficients: Vec<f64>,
    /// `‖ξ − (b₀(K) f⁰ + Σ_{n=1}^{K} c_n f^n)‖` for `K = 0..=N`.
    pub residual_l2: Vec<f64>,
    /// `b₀(K)` for `K = 0..=N`.
    pub b0_trace: Vec<f64>,
}

pub fn expand(
    system: &FucikSystem,
    target: &Target,
    n: u32,
    spec: &QuadratureSpec,
) -> Result<ExpansionResult> {
    if n > system.n_max() {
        return domain(format!("system defined only up to n = {}", system.n_max()));
    }
    let products = target.cosine_products(n, spec)?;
    let psi = biorthogonal_elements(system, n)?;
    let mut coefficients = vec![0.0; n as usize + 1];
    for (i, e) in psi.iter().enumerate() {
        coefficients[i + 1] = e.coeffs.iter().map(|(&k, c)| c * products[k as usize]).sum();
    }
    let b0_trace = b0_sequence(system, products[0], &coefficients)?;
    coefficients[0] = b0_trace[n as usize];

    let funcs: Vec<Eigenfunction> = (0..=n)
        .map(|i| system.point(i).map(Eigenfunction::new))
        .collect::<Result<_>>()?;
    let breaks = merge_breakpoints(
        std::iter::once(target.breakpoints()).chain(funcs.iter().map(|e| e.joints())),
    );
    let squares = integrate_many(
        n as usize + 1,
        |x, o| {
            let xi = target.eval(x);
            let f0 = funcs[0].eval(x);
            let mut partial = 0.0;
            for (k, slot) in o.iter_mut().enumerate() {
                if k > 0 {
                    partial += coefficients[k] * funcs[k].eval(x);
                }
                let r = xi - b0_trace[k] * f0 - partial;
                *slot = r * r;
            }
        },
        &breaks,
        (0.0, PI),
        spec,
    )?;
    Ok(ExpansionResult {
        coefficients,
        residual_l2: squares.into_iter().map(|e| e.value.max(0.0).sqrt()).collect(),
        b0_trace,
    })
}

fn b0_sequence(system: &FucikSystem, mean: f64, coefficients: &[f64]) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(coefficients.len());
    let mut acc = mean;
    out.push(2.0 / PI * acc);
    for (k, c) in coefficients.iter().enumerate().skip(1) {
        acc -= inner_with_constant(&system.point(k as u32)?) * c;
        out.push(2.0 / PI * acc);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct B0Report {
    /// `b₀(k)`, `k = 0..=N`.
    pub values: Vec<f64>,
    /// `|b₀(k) − b₀(k−1)| = (2/π)|⟨f^k, φ₀⟩ c_k|`, `k = 1..=N`.
    pub increments: Vec<f64>,
    /// `(2/π)(Σ_{n≤k} ⟨f^n, φ₀⟩²)^{1/2}(Σ_{n≤k} c_n²)^{1/2}`, bounding
    /// `|b₀(k) − b₀(0)|`.
    pub cauchy_schwarz: Vec<f64>,
}

impl B0Report {
    pub fn bounds_hold(&self) -> bool {
        let b0 = self.values[0];
        self.values
            .iter()
            .skip(1)
            .zip(&self.cauchy_schwarz)
            .all(|(v, cs)| (v - b0).abs() <= cs * (1.0 + 1e-12) + 1e-15)
    }
}

pub fn b0_convergence_report(
    system: &FucikSystem,
    target: &Target,
    n: u32,
    spec: &QuadratureSpec,
) -> Result<B0Report> {
    if n > system.n_max() {
        return domain(format!("system defined only up to n = {}", system.n_max()));
    }
    let products = target.cosine_products(n, spec)?;
    let psi = biorthogonal_elements(system, n)?;
    let mut coefficients = vec![0.0; n as usize + 1];
    for (i, e) in psi.iter().enumerate() {
        coefficients[i + 1] = e.coeffs.iter().map(|(&k, c)| c * products[k as usize]).sum();
    }
    let values = b0_sequence(system, products[0], &coefficients)?;
    let increments = values.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
    let mut means = 0.0;
    let mut coefs = 0.0;
    let mut cauchy_schwarz = Vec::with_capacity(n as usize);
    for k in 1..=n {
        means += inner_with_constant(&system.point(k)?).powi(2);
        coefs += coefficients[k as usize].powi(2);
        cauchy_schwarz.push(2.0 / PI * (means * coefs).sqrt());
    }
    Ok(B0Report {
        values,
        increments,
        cauchy_schwarz,
    })
}
