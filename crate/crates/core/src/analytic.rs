//! Closed-form inner products, norms and distances.
//!
//! `⟨f, φ_m⟩` vanishes unless `n | m`. For `n | m` there is a generic
//! formula with a removable `0/0` at the resonances `α = m²` (alpha branch)
//! and `β = m²` (beta branch), where a separate resonant value applies. The
//! quotients `cos(mπ/(2s))/(m² − s²)` and `cos(nπ/(2s))/(s − n)` are
//! evaluated through `sin(u)/u` with `u = π(s − m)/(2s)`, which is exact
//! algebra and has no cancellation near the singular points.

use std::f64::consts::{PI, SQRT_2};
use std::fmt;

use crate::eigenfunction::Eigenfunction;
use crate::error::Result;
use crate::quadrature::{integrate, QuadratureSpec};
use crate::spectrum::{Branch, FucikPoint};

/// Relative window around `m²` inside which the resonant formula is used.
pub const RESONANCE_REL_WINDOW: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CaseTag {
    /// `n = 0` or `m = 0`.
    Trivial0,
    DivisibleGeneric,
    DivisibleResonantAlpha,
    DivisibleResonantBeta,
    NonDivisible,
    /// `α = β = m² = n²`, i.e. `f = φ_n`.
    Diagonal,
}

impl CaseTag {
    pub fn as_str(self) -> &'static str {
        match self {
            CaseTag::Trivial0 => "trivial0",
            CaseTag::DivisibleGeneric => "divisible_generic",
            CaseTag::DivisibleResonantAlpha => "divisible_resonant_alpha",
            CaseTag::DivisibleResonantBeta => "divisible_resonant_beta",
            CaseTag::NonDivisible => "non_divisible",
            CaseTag::Diagonal => "diagonal",
        }
    }
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalarProductCase {
    pub tag: CaseTag,
    pub value: f64,
}

/// `sin(u)/u`.
pub(crate) fn sinc(u: f64) -> f64 {
    if u.abs() < 1e-8 {
        1.0 - u * u / 6.0
    } else {
        u.sin() / u
    }
}

/// `cos(mπ/(2s)) / (m² − s²)`, finite at `s = m`.
pub(crate) fn cos_over_gap(m: f64, s: f64) -> f64 {
    let u = PI * (s - m) / (2.0 * s);
    -sinc(u) * PI / (2.0 * s * (m + s))
}

/// `cos(nπ/(2s)) / (s − n)`, finite at `s = n`.
pub(crate) fn cos_over_offset(n: f64, s: f64) -> f64 {
    let u = PI * (s - n) / (2.0 * s);
    sinc(u) * PI / (2.0 * s)
}

fn near(value: f64, target: f64) -> bool {
    value == target || (value - target).abs() <= RESONANCE_REL_WINDOW * target
}

fn parity_sign(k: u32) -> f64 {
    if k.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// `s = √α` on the alpha branch, `√β` on the beta branch.
fn dominant(p: &FucikPoint) -> f64 {
    match p.branch() {
        Branch::BetaDominant => p.beta().sqrt(),
        _ => p.alpha().sqrt(),
    }
}

/// `⟨f, φ₀⟩` with `φ₀ ≡ √2/2`.
pub fn inner_with_constant(p: &FucikPoint) -> f64 {
    let nf = f64::from(p.n());
    match p.branch() {
        Branch::Trivial => PI / 2.0,
        Branch::AlphaDominant => {
            let sa = p.alpha().sqrt();
            -2.0 * SQRT_2 * (sa - nf) / (2.0 * sa - nf)
        }
        Branch::BetaDominant => {
            let sb = p.beta().sqrt();
            2.0 * SQRT_2 * (sb - nf) / (2.0 * sb - nf)
        }
    }
}

/// `⟨f, φ_n⟩` for `n ≥ 1`. Equals `π/2` on the diagonal and never vanishes.
pub fn inner_with_self_mode(p: &FucikPoint) -> f64 {
    if p.is_trivial() {
        return PI / 2.0;
    }
    if p.is_diagonal() {
        return PI / 2.0;
    }
    let nf = f64::from(p.n());
    let s = dominant(p);
    let s2 = s * s;
    4.0 * s2 * s2 / ((2.0 * s - nf) * (3.0 * s - nf) * (s + nf)) * cos_over_offset(nf, s)
}

/// Resonant value `πn²/(4m(2m − n))`, signed on the beta branch.
pub fn resonant_value(n: u32, m: u32, branch: Branch) -> f64 {
    let (nf, mf) = (f64::from(n), f64::from(m));
    let magnitude = PI * nf * nf / (4.0 * mf * (2.0 * mf - nf));
    match branch {
        Branch::BetaDominant => parity_sign(m / n + 1) * magnitude,
        _ => magnitude,
    }
}

/// Generic divisible-case formula expressed in the dominant parameter.
/// Requires `n | m`, `n ≥ 1`; finite (and continuous) through `s = m`.
pub fn divisible_generic(p: &FucikPoint, m: u32) -> f64 {
    let n = p.n();
    debug_assert!(n >= 1 && m >= n && m.is_multiple_of(n));
    if m == n {
        return inner_with_self_mode(p);
    }
    let (nf, mf) = (f64::from(n), f64::from(m));
    let s = dominant(p);
    let s2 = s * s;
    let d = 2.0 * s - nf;
    let magnitude =
        4.0 * s2 * s2 * nf * nf * (nf - s) / ((mf * mf * d * d - nf * nf * s2) * d) * cos_over_gap(mf, s);
    match p.branch() {
        Branch::BetaDominant => parity_sign(m / n + 1) * magnitude,
        _ => magnitude,
    }
}

/// The two-parameter form `(β − α)√β n cos(m l₂/2) / ((m² − α)(m² − β))`
/// (alpha branch, with `(−1)^{m/n}`) or `(β − α)√α n cos(m l₁/2) / (…)`
/// (beta branch). Evaluated literally; only meaningful off resonance.
pub fn divisible_generic_two_parameter(p: &FucikPoint, m: u32) -> f64 {
    let n = p.n();
    let (nf, mf) = (f64::from(n), f64::from(m));
    let (a, b) = (p.alpha(), p.beta());
    let m2 = mf * mf;
    let common = (b - a) * nf / ((m2 - a) * (m2 - b));
    match p.branch() {
        Branch::BetaDominant => common * a.sqrt() * (mf * p.l1() / 2.0).cos(),
        _ => parity_sign(m / n) * common * b.sqrt() * (mf * p.l2() / 2.0).cos(),
    }
}

/// `⟨f^n, φ_m⟩` with the case that produced it.
pub fn inner_with_cos(p: &FucikPoint, m: u32) -> ScalarProductCase {
    let n = p.n();
    if n == 0 {
        let value = if m == 0 { PI / 2.0 } else { 0.0 };
        return ScalarProductCase {
            tag: CaseTag::Trivial0,
            value,
        };
    }
    if m == 0 {
        return ScalarProductCase {
            tag: CaseTag::Trivial0,
            value: inner_with_constant(p),
        };
    }
    if !m.is_multiple_of(n) {
        return ScalarProductCase {
            tag: CaseTag::NonDivisible,
            value: 0.0,
        };
    }
    if m == n && p.is_diagonal() {
        return ScalarProductCase {
            tag: CaseTag::Diagonal,
            value: PI / 2.0,
        };
    }
    let m2 = f64::from(m) * f64::from(m);
    match p.branch() {
        Branch::AlphaDominant if m != n && near(p.alpha(), m2) => ScalarProductCase {
            tag: CaseTag::DivisibleResonantAlpha,
            value: resonant_value(n, m, Branch::AlphaDominant),
        },
        Branch::BetaDominant if m != n && near(p.beta(), m2) => ScalarProductCase {
            tag: CaseTag::DivisibleResonantBeta,
            value: resonant_value(n, m, Branch::BetaDominant),
        },
        _ => ScalarProductCase {
            tag: CaseTag::DivisibleGeneric,
            value: divisible_generic(p, m),
        },
    }
}

/// `‖f‖²`.
pub fn norm_squared(p: &FucikPoint) -> f64 {
    if p.is_trivial() {
        return PI / 2.0;
    }
    let nf = f64::from(p.n());
    match p.branch() {
        Branch::BetaDominant => {
            let sb = p.beta().sqrt();
            PI / 2.0 - PI * nf * (sb - nf) / ((2.0 * sb - nf) * (2.0 * sb - nf))
        }
        _ => {
            let sa = p.alpha().sqrt();
            PI / 2.0 - PI * nf * (sa - nf) / ((2.0 * sa - nf) * (2.0 * sa - nf))
        }
    }
}

/// `‖f − φ_n‖²` for `n ≥ 1`.
pub fn distance_squared_to_cos(p: &FucikPoint) -> f64 {
    if p.is_trivial() || p.is_diagonal() {
        return 0.0;
    }
    let nf = f64::from(p.n());
    let s = match p.branch() {
        Branch::BetaDominant => p.beta().sqrt(),
        _ => p.alpha().sqrt(),
    };
    let s2 = s * s;
    let d = 2.0 * s - nf;
    PI - PI * nf * (s - nf) / (d * d)
        - 8.0 * s2 * s2 / (d * (3.0 * s - nf) * (s + nf)) * cos_over_offset(nf, s)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistanceBounds {
    pub lower: f64,
    /// `(12+π²)π/9 · (s−n)²/(2s−n)²`, the sharper step of the chain.
    pub upper_sharp: f64,
    /// `(12+π²)π/9 · (s−n)²/n²`.
    pub upper: f64,
}

/// Bracket for `‖f − φ_n‖²`; degenerates to zeros on the diagonal.
pub fn distance_bounds(p: &FucikPoint) -> DistanceBounds {
    if p.is_trivial() || p.is_diagonal() {
        return DistanceBounds {
            lower: 0.0,
            upper_sharp: 0.0,
            upper: 0.0,
        };
    }
    let nf = f64::from(p.n());
    let s = dominant(p);
    let t = s - nf;
    let d = 2.0 * s - nf;
    let c = (12.0 + PI * PI) * PI / 9.0;
    DistanceBounds {
        lower: PI * (4.0 * s * s + 5.0 * s * nf - 2.0 * nf * nf) * t * t
            / ((s + nf) * d * d * (3.0 * s - nf)),
        upper_sharp: c * t * t / (d * d),
        upper: c * t * t / (nf * nf),
    }
}

/// `φ_m` as a function; `φ₀ ≡ √2/2`.
pub fn cosine_mode(m: u32) -> impl Fn(f64) -> f64 {
    move |x: f64| {
        if m == 0 {
            std::f64::consts::FRAC_1_SQRT_2
        } else {
            (f64::from(m) * x).cos()
        }
    }
}

/// `⟨f, φ_m⟩` by segment-aware quadrature.
pub fn inner_by_quadrature(p: &FucikPoint, m: u32, spec: &QuadratureSpec) -> Result<f64> {
    let e = Eigenfunction::new(*p);
    let phi = cosine_mode(m);
    Ok(integrate(|x| e.eval(x) * phi(x), e.joints(), (0.0, PI), spec)?.value)
}

/// `‖f − φ_n‖²` by quadrature.
pub fn distance_by_quadrature(p: &FucikPoint, spec: &QuadratureSpec) -> Result<f64> {
    let e = Eigenfunction::new(*p);
    let phi = cosine_mode(p.n());
    Ok(integrate(|x| (e.eval(x) - phi(x)).powi(2), e.joints(), (0.0, PI), spec)?.value)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleComparison {
    pub case: ScalarProductCase,
    pub quadrature: f64,
    pub delta: f64,
}

/// Closed form against quadrature for `⟨f, φ_m⟩`.
pub fn inner_oracle_delta(p: &FucikPoint, m: u32, spec: &QuadratureSpec) -> Result<OracleComparison> {
    let case = inner_with_cos(p, m);
    let quadrature = inner_by_quadrature(p, m, spec)?;
    Ok(OracleComparison {
        case,
        quadrature,
        delta: (case.value - quadrature).abs(),
    })
}
