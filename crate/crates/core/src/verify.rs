//! Invariant battery behind `fucik verify`.

use std::f64::consts::PI;

use crate::analytic::{distance_bounds, distance_squared_to_cos, inner_oracle_delta, inner_with_self_mode, norm_squared};
use crate::biorthogonal::{biorthogonality_matrix, gram_condition, identity_deviation, FucikSystem};
use crate::dilation::{bound_monotonicity_check, certificate_limit, certificate_sum, fourier_row};
use crate::eigenfunction::{ode_residual, symmetry_check, Eigenfunction};
use crate::error::Result;
use crate::expansion::{expand, Target};
use crate::quadrature::QuadratureSpec;
use crate::spectrum::{Branch, DilationParams, FucikPoint};

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

const GAMMAS: [f64; 4] = [1.1, 2.0, 4.0, 9.0];

fn grid_points(n_max: u32) -> Result<Vec<FucikPoint>> {
    let mut out = Vec::new();
    for n in 1..=n_max {
        out.push(FucikPoint::diagonal(n));
        for &g in &GAMMAS {
            out.push(FucikPoint::from_dilation(n, g, Branch::AlphaDominant)?);
            out.push(FucikPoint::from_dilation(n, g, Branch::BetaDominant)?);
        }
    }
    Ok(out)
}

fn check(name: &'static str, passed: bool, detail: String) -> Check {
    Check { name, passed, detail }
}

/// Mixed-branch test system with `γ_n` cycling through `[1, 4]`.
fn mixed_system(n_max: u32) -> Result<FucikSystem> {
    let params: Vec<DilationParams> = (1..=n_max)
        .map(|n| {
            let v = 1.0 + 3.0 * ((f64::from(n) * 0.618_033_988_75).fract());
            if n % 2 == 0 {
                DilationParams::Delta(v)
            } else {
                DilationParams::Gamma(v)
            }
        })
        .collect();
    FucikSystem::from_params(&params)
}

pub fn run_battery(spec: &QuadratureSpec) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let points = grid_points(6)?;

    let worst = points.iter().map(|p| p.curve_residual().abs()).fold(0.0, f64::max);
    out.push(check("curve residual <= 1e-12", worst <= 1e-12, format!("max {worst:.3e}")));

    let mut worst: f64 = 0.0;
    let mut neumann = true;
    for p in &points {
        let e = Eigenfunction::new(*p);
        worst = worst.max(ode_residual(&e, 1000));
        neumann &= e.eval_derivative(0.0) == 0.0 && e.eval_derivative(PI) == 0.0;
    }
    out.push(check("ODE residual <= 1e-9", worst <= 1e-9, format!("max {worst:.3e}")));
    out.push(check("Neumann derivatives exactly 0", neumann, String::new()));

    let mut worst: f64 = 0.0;
    for p in points.iter().filter(|p| !p.is_diagonal()) {
        worst = worst.max(symmetry_check(p, 1000)?.max());
    }
    out.push(check("symmetry identities <= 1e-10", worst <= 1e-10, format!("max {worst:.3e}")));

    let mut worst: f64 = 0.0;
    for p in &points {
        for m in 0..=3 * p.n() {
            worst = worst.max(inner_oracle_delta(p, m, spec)?.delta);
        }
    }
    out.push(check("inner products vs quadrature <= 1e-10", worst <= 1e-10, format!("max {worst:.3e}")));

    let mut bracket = true;
    let mut ident: f64 = 0.0;
    for p in points.iter().filter(|p| !p.is_diagonal()) {
        let d = distance_squared_to_cos(p);
        let b = distance_bounds(p);
        bracket &= b.lower <= d && d <= b.upper;
        ident = ident.max((d - (norm_squared(p) + PI / 2.0 - 2.0 * inner_with_self_mode(p))).abs());
    }
    out.push(check("distance bracket", bracket, String::new()));
    out.push(check("distance representation identity <= 1e-10", ident <= 1e-10, format!("max {ident:.3e}")));

    let c = certificate_sum(10_000)?;
    let ok = c.lt_one && (c.total - 0.940_822_3).abs() <= 1e-6 && (c.total - certificate_limit()).abs() <= 1e-12;
    out.push(check("certificate sum < 1", ok, format!("total {:.10}", c.total)));

    let mut violations = 0usize;
    for p in points.iter() {
        violations += fourier_row(p, 40)?.violations().len();
    }
    out.push(check("coefficient caps", violations == 0, format!("{violations} violations")));

    let grid = [1.001, 1.01, 1.1, 2.0, 10.0, 100.0, 1e4];
    let mut mono = true;
    for k in 2..=6 {
        mono &= bound_monotonicity_check(k, &grid)?;
    }
    out.push(check("comparison functions increasing (k = 2..6)", mono, String::new()));

    let sys = mixed_system(12)?;
    let dev = identity_deviation(&biorthogonality_matrix(&sys, 12)?);
    out.push(check("biorthogonality <= 1e-9", dev <= 1e-9, format!("max {dev:.3e}")));

    let g = gram_condition(&sys, 8, spec)?;
    out.push(check(
        "Gram smallest eigenvalue > 0",
        g.min_eigenvalue > 0.0,
        format!("{:.6e}", g.min_eigenvalue),
    ));

    let a: Vec<(u32, f64)> = (0..=8).map(|n| (n, 1.0 / (1.0 + f64::from(n)))).collect();
    let target = Target::combination(&sys, &a)?;
    let r = expand(&sys, &target, 8, spec)?;
    let worst = a
        .iter()
        .map(|&(n, an)| (r.coefficients[n as usize] - an).abs())
        .fold(0.0, f64::max);
    out.push(check("expansion round trip <= 1e-9", worst <= 1e-9, format!("max {worst:.3e}")));

    Ok(out)
}
