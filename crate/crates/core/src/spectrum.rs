//! The non-trivial Neumann Fučík spectrum.
//!
//! Every non-trivial point lies on one of the hyperbola-type curves
//!
//! ```text
//! Γ_n = { (α, β) : n/(2√α) + n/(2√β) = 1 },   n ≥ 1,
//! ```
//!
//! which are explicit: `β = n²α / (2√α − n)²` and symmetrically in `α`.
//! A [`FucikPoint`] is a validated point on one of these curves (or the
//! constant mode `n = 0`, where `α = β = 0` by convention).

use std::f64::consts::PI;
use std::fmt;
use std::io::Write;

use crate::error::{domain, Error, Result};
use crate::output::fmt_f64;

/// Absolute tolerance on `n/(2√α) + n/(2√β) − 1`.
pub const CURVE_TOL: f64 = 1e-12;

/// Which of the two piecewise representations a point uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    /// `α ≥ n² ≥ β`; the diagonal point `α = β = n²` belongs here.
    AlphaDominant,
    /// `β > n² > α`.
    BetaDominant,
    /// The constant mode `n = 0`.
    Trivial,
}

impl Branch {
    pub fn as_str(self) -> &'static str {
        match self {
            Branch::AlphaDominant => "alpha",
            Branch::BetaDominant => "beta",
            Branch::Trivial => "trivial",
        }
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Branch {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "alpha" | "a" | "alpha_dominant" | "alphadominant" => Ok(Branch::AlphaDominant),
            "beta" | "b" | "beta_dominant" | "betadominant" => Ok(Branch::BetaDominant),
            "trivial" => Ok(Branch::Trivial),
            other => domain(format!("unknown branch `{other}` (expected alpha or beta)")),
        }
    }
}

/// A point `(α, β)` of the curve `Γ_n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FucikPoint {
    n: u32,
    alpha: f64,
    beta: f64,
    branch: Branch,
}

fn partner(n: u32, value: f64) -> f64 {
    let nf = f64::from(n);
    let d = 2.0 * value.sqrt() - nf;
    nf * nf * value / (d * d)
}

fn check_open_domain(n: u32, name: &str, value: f64) -> Result<()> {
    let nf = f64::from(n);
    if !value.is_finite() {
        return domain(format!("{name} must be finite, got {value}"));
    }
    if value <= nf * nf / 4.0 {
        return domain(format!(
            "{name} = {value} must exceed n²/4 = {} on Γ_{n}",
            nf * nf / 4.0
        ));
    }
    Ok(())
}

impl FucikPoint {
    /// The constant mode `φ₀` (`n = 0`, `α = β = 0`).
    pub fn trivial() -> Self {
        FucikPoint {
            n: 0,
            alpha: 0.0,
            beta: 0.0,
            branch: Branch::Trivial,
        }
    }

    /// The classical eigenvalue `(n², n²)`; `n = 0` gives the trivial point.
    pub fn diagonal(n: u32) -> Self {
        if n == 0 {
            return Self::trivial();
        }
        let sq = f64::from(n) * f64::from(n);
        FucikPoint {
            n,
            alpha: sq,
            beta: sq,
            branch: Branch::AlphaDominant,
        }
    }

    /// The point of `Γ_n` with the given `α`.
    pub fn from_alpha(n: u32, alpha: f64) -> Result<Self> {
        if n == 0 {
            return if alpha == 0.0 {
                Ok(Self::trivial())
            } else {
                domain(format!("n = 0 requires alpha = 0, got {alpha}"))
            };
        }
        check_open_domain(n, "alpha", alpha)?;
        Self::from_pair(n, alpha, partner(n, alpha))
    }

    /// The point of `Γ_n` with the given `β`. The supplied `β` is kept
    /// bit-exact so resonances `β = m²` survive construction.
    pub fn from_beta(n: u32, beta: f64) -> Result<Self> {
        if n == 0 {
            return if beta == 0.0 {
                Ok(Self::trivial())
            } else {
                domain(format!("n = 0 requires beta = 0, got {beta}"))
            };
        }
        check_open_domain(n, "beta", beta)?;
        let alpha = partner(n, beta);
        check_open_domain(n, "alpha", alpha)?;
        Self::from_pair(n, alpha, beta)
    }

    /// Projection-parameter constructor: `α = n²γ` on the alpha branch,
    /// `β = n²δ` on the beta branch.
    pub fn from_dilation(n: u32, param: f64, branch: Branch) -> Result<Self> {
        if n == 0 {
            return Ok(Self::trivial());
        }
        if !(param >= 1.0) || !param.is_finite() {
            return domain(format!("dilation parameter must be a finite value >= 1, got {param}"));
        }
        let sq = f64::from(n) * f64::from(n);
        match branch {
            Branch::AlphaDominant => Self::from_alpha(n, sq * param),
            Branch::BetaDominant => Self::from_beta(n, sq * param),
            Branch::Trivial => domain("trivial branch requires n = 0"),
        }
    }

    fn from_pair(n: u32, alpha: f64, beta: f64) -> Result<Self> {
        let sq = f64::from(n) * f64::from(n);
        let branch = if alpha >= sq && beta <= sq {
            Branch::AlphaDominant
        } else if beta > sq && alpha < sq {
            Branch::BetaDominant
        } else if alpha >= beta {
            // rounding right next to the diagonal
            Branch::AlphaDominant
        } else {
            Branch::BetaDominant
        };
        let p = FucikPoint {
            n,
            alpha,
            beta,
            branch,
        };
        let r = p.curve_residual();
        if !(r.abs() <= CURVE_TOL) {
            return Err(Error::Domain(format!(
                "({alpha}, {beta}) misses Γ_{n} by {r:e}"
            )));
        }
        Ok(p)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn branch(&self) -> Branch {
        self.branch
    }

    /// Length `π/√α` of a positive bump (infinite for `n = 0`).
    pub fn l1(&self) -> f64 {
        PI / self.alpha.sqrt()
    }

    /// Length `π/√β` of a negative bump (infinite for `n = 0`).
    pub fn l2(&self) -> f64 {
        PI / self.beta.sqrt()
    }

    /// Period `l = l1 + l2 = 2π/n`.
    pub fn period(&self) -> f64 {
        self.l1() + self.l2()
    }

    pub fn is_trivial(&self) -> bool {
        self.n == 0
    }

    /// `α = β = n²` (the trivial point counts as diagonal).
    pub fn is_diagonal(&self) -> bool {
        self.alpha == self.beta
    }

    /// `max(√α, √β)`.
    pub fn dominant_sqrt(&self) -> f64 {
        self.alpha.sqrt().max(self.beta.sqrt())
    }

    /// `n/(2√α) + n/(2√β) − 1`; zero for the trivial point.
    pub fn curve_residual(&self) -> f64 {
        if self.n == 0 {
            return 0.0;
        }
        let nf = f64::from(self.n);
        nf / (2.0 * self.alpha.sqrt()) + nf / (2.0 * self.beta.sqrt()) - 1.0
    }

    /// The mirrored point `(β, α)`, which lies on the same curve.
    pub fn swapped(&self) -> Result<Self> {
        match self.branch {
            Branch::Trivial => Ok(*self),
            _ if self.is_diagonal() => Ok(*self),
            Branch::AlphaDominant => Self::from_beta(self.n, self.alpha),
            Branch::BetaDominant => Self::from_alpha(self.n, self.beta),
        }
    }
}

/// Free-function form of [`FucikPoint::from_alpha`].
pub fn point_from_alpha(n: u32, alpha: f64) -> Result<FucikPoint> {
    FucikPoint::from_alpha(n, alpha)
}

/// Free-function form of [`FucikPoint::from_beta`].
pub fn point_from_beta(n: u32, beta: f64) -> Result<FucikPoint> {
    FucikPoint::from_beta(n, beta)
}

/// Projection of a point of `Γ_n` onto `Γ_1` along the ray through the origin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DilationParams {
    /// Alpha branch: `α = n²γ`, `β = n²γ/(2√γ − 1)²`.
    Gamma(f64),
    /// Beta branch: `β = n²δ`, `α = n²δ/(2√δ − 1)²`.
    Delta(f64),
}

impl DilationParams {
    pub fn value(&self) -> f64 {
        match *self {
            DilationParams::Gamma(v) | DilationParams::Delta(v) => v,
        }
    }

    pub fn branch(&self) -> Branch {
        match self {
            DilationParams::Gamma(_) => Branch::AlphaDominant,
            DilationParams::Delta(_) => Branch::BetaDominant,
        }
    }

    /// Rebuild the point of `Γ_n` with these parameters.
    pub fn point(&self, n: u32) -> Result<FucikPoint> {
        FucikPoint::from_dilation(n, self.value(), self.branch())
    }

    /// The generator point on `Γ_1`.
    pub fn generator(&self) -> Result<FucikPoint> {
        self.point(1)
    }
}

pub fn dilation_params(p: &FucikPoint) -> Result<DilationParams> {
    let sq = f64::from(p.n()) * f64::from(p.n());
    match p.branch() {
        Branch::Trivial => domain("dilation parameters need n >= 1"),
        Branch::AlphaDominant => Ok(DilationParams::Gamma(p.alpha() / sq)),
        Branch::BetaDominant => Ok(DilationParams::Delta(p.beta() / sq)),
    }
}

/// `count` points of `Γ_n` with `α` evenly spaced over `alpha_range`.
pub fn curve_samples(n: u32, count: usize, alpha_range: (f64, f64)) -> Result<Vec<FucikPoint>> {
    let (lo, hi) = alpha_range;
    if n == 0 {
        return domain("curve samples need n >= 1");
    }
    if count < 2 {
        return domain(format!("need at least two samples, got {count}"));
    }
    if !(lo < hi) {
        return domain(format!("empty alpha range [{lo}, {hi}]"));
    }
    check_open_domain(n, "alpha range start", lo)?;
    check_open_domain(n, "alpha range end", hi)?;
    let last = (count - 1) as f64;
    (0..count)
        .map(|i| {
            let alpha = if i == count - 1 {
                hi
            } else {
                lo + (hi - lo) * (i as f64 / last)
            };
            FucikPoint::from_alpha(n, alpha)
        })
        .collect()
}

/// Writes `n,alpha,beta,l1,l2,branch` rows.
pub fn write_curve_csv<W: Write>(out: &mut W, points: &[FucikPoint]) -> std::io::Result<()> {
    writeln!(out, "n,alpha,beta,l1,l2,branch")?;
    for p in points {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            p.n(),
            fmt_f64(p.alpha()),
            fmt_f64(p.beta()),
            fmt_f64(p.l1()),
            fmt_f64(p.l2()),
            p.branch()
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * (1.0 + b.abs())
    }

    #[test]
    fn alpha_four_on_first_curve() {
        let p = point_from_alpha(1, 4.0).unwrap();
        assert!(close(p.beta(), 4.0 / 9.0, 1e-15));
        assert!(close(p.l1(), PI / 2.0, 1e-15));
        assert!(close(p.l2(), 1.5 * PI, 1e-15));
        assert_eq!(p.branch(), Branch::AlphaDominant);
        assert!(p.curve_residual().abs() <= CURVE_TOL);
    }

    #[test]
    fn diagonal_points() {
        let p = point_from_alpha(3, 9.0).unwrap();
        assert_eq!(p.beta(), 9.0);
        assert!(p.is_diagonal());
        assert_eq!(p.branch(), Branch::AlphaDominant);
        let q = point_from_beta(2, 4.0).unwrap();
        assert_eq!(q.alpha(), 4.0);
        assert_eq!(q.branch(), Branch::AlphaDominant);
    }

    #[test]
    fn figure_one_left_parameters() {
        let p = point_from_alpha(3, 5.0).unwrap();
        let expected = 45.0 / (2.0 * 5f64.sqrt() - 3.0).powi(2);
        assert!(close(p.beta(), expected, 1e-15));
        assert_eq!(p.branch(), Branch::BetaDominant);
        assert!(p.curve_residual().abs() <= CURVE_TOL);
    }

    #[test]
    fn beta_constructor_inverts_alpha_example() {
        let p = point_from_beta(1, 4.0 / 9.0).unwrap();
        assert!(close(p.alpha(), 4.0, 1e-14));
        assert_eq!(p.beta(), 4.0 / 9.0);
    }

    #[test]
    fn domain_errors() {
        assert!(matches!(point_from_beta(1, 0.2), Err(Error::Domain(_))));
        assert!(matches!(point_from_alpha(2, 1.0), Err(Error::Domain(_))));
        assert!(matches!(point_from_alpha(0, 1.0), Err(Error::Domain(_))));
        assert!(matches!(point_from_alpha(1, f64::NAN), Err(Error::Domain(_))));
        assert!(point_from_alpha(0, 0.0).unwrap().is_trivial());
    }

    #[test]
    fn dilation_examples() {
        let p = point_from_alpha(2, 16.0).unwrap();
        assert!(close(p.beta(), 16.0 / 9.0, 1e-14));
        assert_eq!(dilation_params(&p).unwrap(), DilationParams::Gamma(4.0));

        let d = dilation_params(&FucikPoint::diagonal(5)).unwrap();
        assert_eq!(d, DilationParams::Gamma(1.0));

        let q = point_from_beta(1, 9.0).unwrap();
        assert!(close(q.alpha(), 9.0 / 25.0, 1e-15));
        assert_eq!(dilation_params(&q).unwrap(), DilationParams::Delta(9.0));

        assert!(dilation_params(&FucikPoint::trivial()).is_err());
    }

    #[test]
    fn samples() {
        let s = curve_samples(1, 3, (1.0, 4.0)).unwrap();
        assert_eq!(s.len(), 3);
        assert_eq!((s[0].alpha(), s[0].beta()), (1.0, 1.0));
        let s = curve_samples(2, 2, (4.0, 16.0)).unwrap();
        assert_eq!((s[0].alpha(), s[0].beta()), (4.0, 4.0));
        assert!(close(s[1].beta(), 16.0 / 9.0, 1e-14));
        assert!(curve_samples(1, 2, (0.1, 4.0)).is_err());
        assert!(curve_samples(1, 1, (1.0, 4.0)).is_err());
    }

    #[test]
    fn csv_header_and_precision() {
        let mut buf = Vec::new();
        write_curve_csv(&mut buf, &[FucikPoint::diagonal(1)]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("n,alpha,beta,l1,l2,branch"));
        let row: Vec<&str> = lines.next().unwrap().split(',').collect();
        assert_eq!(row[1], "1.0000000000000000e0");
        assert_eq!(row[5], "alpha");
        assert_eq!(row[3].parse::<f64>().unwrap(), PI);
    }

    #[test]
    fn swapped_point_mirrors() {
        let p = point_from_alpha(1, 4.0).unwrap();
        let s = p.swapped().unwrap();
        assert_eq!(s.branch(), Branch::BetaDominant);
        assert_eq!(s.beta(), 4.0);
        assert!(close(s.alpha(), 4.0 / 9.0, 1e-14));
    }
}
