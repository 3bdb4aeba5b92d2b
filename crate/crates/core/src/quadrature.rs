//! Segment-aware composite Gauss–Legendre quadrature.
//!
//! This is the independent oracle for every closed form in the crate. The
//! integration interval is cut at the supplied breakpoints (the joints of
//! the eigenfunctions, where second derivatives jump) and each smooth piece
//! gets a fixed Gauss–Legendre rule. Refinement level `r` splits every piece
//! into `2^r` equal parts; the result is accepted once two successive levels
//! differ by less than half the absolute tolerance, and that difference is
//! reported as the error estimate.

use std::f64::consts::PI;

use crate::error::{domain, Error, Result};

/// Environment variable overriding the default absolute tolerance.
pub const TOL_ENV: &str = "FUCIK_QUAD_TOL";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub abs_tol: f64,
    pub nodes_per_segment: usize,
    pub max_refinements: u32,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            abs_tol: 1e-12,
            nodes_per_segment: 32,
            max_refinements: 12,
        }
    }
}

impl QuadratureSpec {
    pub fn new(abs_tol: f64, nodes_per_segment: usize, max_refinements: u32) -> Result<Self> {
        if !(abs_tol > 0.0) || !abs_tol.is_finite() {
            return domain(format!("quadrature tolerance must be positive, got {abs_tol}"));
        }
        if nodes_per_segment < 2 {
            return domain(format!(
                "need at least two nodes per segment, got {nodes_per_segment}"
            ));
        }
        if max_refinements == 0 {
            return domain("max_refinements must be at least 1");
        }
        Ok(QuadratureSpec {
            abs_tol,
            nodes_per_segment,
            max_refinements,
        })
    }

    /// Defaults, with the tolerance taken from `FUCIK_QUAD_TOL` when set.
    pub fn from_env() -> Result<Self> {
        let mut spec = Self::default();
        if let Ok(raw) = std::env::var(TOL_ENV) {
            let tol: f64 = raw
                .trim()
                .parse()
                .map_err(|_| Error::Domain(format!("{TOL_ENV}={raw} is not a number")))?;
            spec = Self::new(tol, spec.nodes_per_segment, spec.max_refinements)?;
        }
        Ok(spec)
    }
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Newton iteration on the three-term Legendre recurrence.
    pub fn new(order: usize) -> Self {
        assert!(order >= 1, "Gauss-Legendre order must be positive");
        let mut nodes = vec![0.0; order];
        let mut weights = vec![0.0; order];
        let nf = order as f64;
        for i in 0..order.div_ceil(2) {
            let mut z = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 1.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(order, z);
                dp = d;
                let dz = p / d;
                z -= dz;
                if dz.abs() <= 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(order, z);
            if d.is_finite() && d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - z * z) * dp * dp);
            nodes[i] = -z;
            nodes[order - 1 - i] = z;
            weights[i] = w;
            weights[order - 1 - i] = w;
        }
        GaussLegendre { nodes, weights }
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, a: f64, b: f64, f: F) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let s: f64 = self
            .nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(mid + half * x))
            .sum();
        half * s
    }
}

fn legendre_with_derivative(order: usize, z: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = z;
    for j in 2..=order {
        let jf = j as f64;
        let p2 = ((2.0 * jf - 1.0) * z * p1 - (jf - 1.0) * p0) / jf;
        p0 = p1;
        p1 = p2;
    }
    if order == 1 {
        p0 = 1.0;
    }
    let d = order as f64 * (z * p1 - p0) / (z * z - 1.0);
    (p1, d)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub est_error: f64,
}

/// Sorted, de-duplicated cut points `a = c_0 < … < c_s = b`.
fn cut_points(breakpoints: &[f64], (a, b): (f64, f64)) -> Result<Vec<f64>> {
    if !(a < b) || !a.is_finite() || !b.is_finite() {
        return domain(format!("invalid integration interval [{a}, {b}]"));
    }
    let mut cuts: Vec<f64> = breakpoints
        .iter()
        .copied()
        .filter(|&x| x > a && x < b)
        .collect();
    cuts.push(a);
    cuts.push(b);
    cuts.sort_by(|x, y| x.partial_cmp(y).unwrap());
    cuts.dedup();
    Ok(cuts)
}

/// Merges breakpoint lists into one sorted list.
pub fn merge_breakpoints<'a, I: IntoIterator<Item = &'a [f64]>>(lists: I) -> Vec<f64> {
    let mut all: Vec<f64> = lists.into_iter().flatten().copied().collect();
    all.sort_by(|x, y| x.partial_cmp(y).unwrap());
    all.dedup();
    all
}

/// Integrates `count` integrands at once. `f(x, out)` writes the value of
/// every integrand at `x` into `out`. All components share the refinement
/// schedule; the loop stops when every component has converged.
pub fn integrate_many<F>(
    count: usize,
    mut f: F,
    breakpoints: &[f64],
    interval: (f64, f64),
    spec: &QuadratureSpec,
) -> Result<Vec<Estimate>>
where
    F: FnMut(f64, &mut [f64]),
{
    let cuts = cut_points(breakpoints, interval)?;
    let rule = GaussLegendre::new(spec.nodes_per_segment);
    let mut scratch = vec![0.0; count];

    let mut level = |r: u32| -> Vec<f64> {
        let parts = 1usize << r;
        let mut acc = vec![0.0; count];
        for w in cuts.windows(2) {
            let (lo, hi) = (w[0], w[1]);
            let step = (hi - lo) / parts as f64;
            for p in 0..parts {
                let a = lo + step * p as f64;
                let b = if p + 1 == parts { hi } else { a + step };
                let half = 0.5 * (b - a);
                let mid = 0.5 * (a + b);
                for (&x, &wt) in rule.nodes().iter().zip(rule.weights()) {
                    f(mid + half * x, &mut scratch);
                    for (s, v) in acc.iter_mut().zip(&scratch) {
                        *s += half * wt * v;
                    }
                }
            }
        }
        acc
    };

    let mut prev = level(0);
    let mut last_diff = f64::INFINITY;
    for r in 1..=spec.max_refinements {
        let cur = level(r);
        let diffs: Vec<f64> = cur.iter().zip(&prev).map(|(c, p)| (c - p).abs()).collect();
        let worst = diffs.iter().copied().fold(0.0, f64::max);
        if worst < 0.5 * spec.abs_tol {
            return Ok(cur
                .into_iter()
                .zip(diffs)
                .map(|(value, est_error)| Estimate { value, est_error })
                .collect());
        }
        last_diff = worst;
        prev = cur;
    }
    Err(Error::QuadratureNonConvergence {
        refinements: spec.max_refinements,
        last_difference: last_diff,
        tolerance: spec.abs_tol,
    })
}

/// Integrates a single function that is smooth between `breakpoints`.
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    breakpoints: &[f64],
    interval: (f64, f64),
    spec: &QuadratureSpec,
) -> Result<Estimate> {
    let mut out = integrate_many(1, |x, o| o[0] = f(x), breakpoints, interval, spec)?;
    Ok(out.pop().unwrap())
}

/// `∫₀^π f·g` for two functions with known breakpoints.
pub fn inner_product<F: Fn(f64) -> f64, G: Fn(f64) -> f64>(
    f: F,
    f_breaks: &[f64],
    g: G,
    g_breaks: &[f64],
    spec: &QuadratureSpec,
) -> Result<Estimate> {
    let breaks = merge_breakpoints([f_breaks, g_breaks]);
    integrate(|x| f(x) * g(x), &breaks, (0.0, PI), spec)
}
