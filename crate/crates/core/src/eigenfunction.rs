//! Normalized Fučík eigenfunctions as explicit piecewise cosines.
//!
//! On `[0, π]` the eigenfunction of a point of `Γ_n` consists of `n + 1`
//! segments. Segment `i` is a cosine bump centred at the extremum `iπ/n`;
//! even segments are positive bumps of frequency `√α`, odd segments are
//! negative bumps of frequency `√β`. The joints between bumps are zeros
//! of the function where both neighbouring pieces have matching slope.
//!
//! On the alpha branch the positive bumps carry amplitude `√β/√α`, on the
//! beta branch the negative bumps carry `√α/√β`; the other sign has unit
//! amplitude so that `‖f‖∞ = 1`. Outside `[0, π]` the even `2π`-periodic
//! extension is used.

use std::f64::consts::{FRAC_1_SQRT_2, PI, TAU};
use std::io::Write;

use crate::output::fmt_f64;
use crate::spectrum::{Branch, FucikPoint};

/// One piece `sign · amplitude · cos(frequency · (x − center))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub start: f64,
    pub end: f64,
    pub amplitude: f64,
    pub frequency: f64,
    pub center: f64,
    pub sign: f64,
}

impl Segment {
    #[inline]
    pub fn value(&self, x: f64) -> f64 {
        self.sign * self.amplitude * (self.frequency * (x - self.center)).cos()
    }

    #[inline]
    pub fn derivative(&self, x: f64) -> f64 {
        -self.sign * self.amplitude * self.frequency * (self.frequency * (x - self.center)).sin()
    }

    #[inline]
    pub fn second_derivative(&self, x: f64) -> f64 {
        -self.frequency * self.frequency * self.value(x)
    }
}

/// Maps `x` into `[0, π]` through the even `2π`-periodic extension.
/// The second component is the sign picked up by first derivatives.
pub fn reduce_even_periodic(x: f64) -> (f64, f64) {
    if (0.0..=PI).contains(&x) {
        return (x, 1.0);
    }
    if (-PI..0.0).contains(&x) {
        return (-x, -1.0);
    }
    let y = x.rem_euclid(TAU);
    if y > PI {
        (TAU - y, -1.0)
    } else {
        (y, 1.0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Eigenfunction {
    point: FucikPoint,
    /// `0`, the interior joints, then `π`.
    breakpoints: Vec<f64>,
    segments: Vec<Segment>,
}

impl Eigenfunction {
    pub fn new(point: FucikPoint) -> Self {
        if point.is_trivial() {
            return Eigenfunction {
                point,
                breakpoints: vec![0.0, PI],
                segments: vec![Segment {
                    start: 0.0,
                    end: PI,
                    amplitude: FRAC_1_SQRT_2,
                    frequency: 0.0,
                    center: 0.0,
                    sign: 1.0,
                }],
            };
        }

        let n = point.n();
        let sa = point.alpha().sqrt();
        let sb = point.beta().sqrt();
        let (pos_amp, neg_amp) = match point.branch() {
            Branch::AlphaDominant => (sb / sa, 1.0),
            Branch::BetaDominant => (1.0, sa / sb),
            Branch::Trivial => unreachable!(),
        };
        let half_pos = 0.5 * point.l1();
        let half_neg = 0.5 * point.l2();

        let nf = f64::from(n);
        let mut breakpoints = Vec::with_capacity(n as usize + 2);
        breakpoints.push(0.0);
        let mut segments = Vec::with_capacity(n as usize + 1);
        for i in 0..=n {
            // i/n == 1 exactly for the last bump, so its centre is exactly π.
            let center = PI * (f64::from(i) / nf);
            let positive = i % 2 == 0;
            let end = if i == n {
                PI
            } else if positive {
                center + half_pos
            } else {
                center + half_neg
            };
            let start = *breakpoints.last().unwrap();
            breakpoints.push(end);
            segments.push(Segment {
                start,
                end,
                amplitude: if positive { pos_amp } else { neg_amp },
                frequency: if positive { sa } else { sb },
                center,
                sign: if positive { 1.0 } else { -1.0 },
            });
        }
        Eigenfunction {
            point,
            breakpoints,
            segments,
        }
    }

    pub fn point(&self) -> &FucikPoint {
        &self.point
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    /// Interior joints only.
    pub fn joints(&self) -> &[f64] {
        &self.breakpoints[1..self.breakpoints.len() - 1]
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    fn segment_at(&self, y: f64) -> &Segment {
        let idx = self.joints().partition_point(|&b| b < y);
        &self.segments[idx]
    }

    pub fn eval(&self, x: f64) -> f64 {
        let (y, _) = reduce_even_periodic(x);
        self.segment_at(y).value(y)
    }

    pub fn eval_derivative(&self, x: f64) -> f64 {
        let (y, s) = reduce_even_periodic(x);
        s * self.segment_at(y).derivative(y)
    }

    pub fn eval_second_derivative(&self, x: f64) -> f64 {
        let (y, _) = reduce_even_periodic(x);
        self.segment_at(y).second_derivative(y)
    }
}

pub fn build(p: FucikPoint) -> Eigenfunction {
    Eigenfunction::new(p)
}

/// Nodes `(i + ½)π/grid`, which never land on `0` or `π`.
pub fn midpoint_grid(grid_size: usize) -> impl Iterator<Item = f64> {
    let h = PI / grid_size as f64;
    (0..grid_size).map(move |i| (i as f64 + 0.5) * h)
}

/// Max of `|−f″ − αf⁺ + βf⁻|` over a half-step offset grid.
pub fn ode_residual(e: &Eigenfunction, grid_size: usize) -> f64 {
    let (a, b) = (e.point().alpha(), e.point().beta());
    midpoint_grid(grid_size)
        .map(|x| {
            let f = e.eval(x);
            let rhs = a * f.max(0.0) - b * (-f).max(0.0);
            (-e.eval_second_derivative(x) - rhs).abs()
        })
        .fold(0.0, f64::max)
}

/// Deviations of the mirror identities of a point and its swap `(β, α)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymmetryReport {
    /// `max |f_{α,β}(x) + f_{β,α}(x − π/n)|`.
    pub shift: f64,
    /// `max |f_{α,β}(x) + f_{β,α}(π − x)|`, odd `n` only.
    pub reflection: Option<f64>,
}

impl SymmetryReport {
    pub fn max(&self) -> f64 {
        self.shift.max(self.reflection.unwrap_or(0.0))
    }
}

pub fn symmetry_check(p: &FucikPoint, grid_size: usize) -> crate::Result<SymmetryReport> {
    if p.is_trivial() {
        return Err(crate::Error::Domain("symmetry relations need n >= 1".into()));
    }
    let f = Eigenfunction::new(*p);
    let g = Eigenfunction::new(p.swapped()?);
    let shift_by = PI / f64::from(p.n());
    let mut shift = 0.0f64;
    let mut reflection = 0.0f64;
    for x in midpoint_grid(grid_size) {
        let fx = f.eval(x);
        shift = shift.max((fx + g.eval(x - shift_by)).abs());
        reflection = reflection.max((fx + g.eval(PI - x)).abs());
    }
    Ok(SymmetryReport {
        shift,
        reflection: (p.n() % 2 == 1).then_some(reflection),
    })
}

/// Writes `x,f,fprime` on `grid_size` evenly spaced nodes of `[0, π]`.
pub fn write_eval_csv<W: Write>(out: &mut W, e: &Eigenfunction, grid_size: usize) -> std::io::Result<()> {
    writeln!(out, "x,f,fprime")?;
    let last = grid_size.saturating_sub(1).max(1) as f64;
    for i in 0..grid_size {
        let x = if i + 1 == grid_size && grid_size > 1 {
            PI
        } else {
            PI * (i as f64 / last)
        };
        writeln!(
            out,
            "{},{},{}",
            fmt_f64(x),
            fmt_f64(e.eval(x)),
            fmt_f64(e.eval_derivative(x))
        )?;
    }
    Ok(())
}
