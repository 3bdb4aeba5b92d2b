//! Test-side oracles, built without the library's eigenfunction or
//! quadrature code.
#![allow(dead_code)]

use std::f64::consts::PI;

/// One bump of the eigenfunction: `sign · amp · cos(freq (x − centre))` on
/// `[start, end]`.
#[derive(Debug, Clone, Copy)]
pub struct Piece {
    pub start: f64,
    pub end: f64,
    pub centre: f64,
    pub amp: f64,
    pub freq: f64,
    pub sign: f64,
}

/// Eigenfunction assembled by walking bump lengths from `x = 0`.
#[derive(Debug, Clone)]
pub struct OracleEigen {
    pub pieces: Vec<Piece>,
}

impl OracleEigen {
    /// `(α, β)` on `Γ_n`, `n ≥ 1`; starts with a positive half bump.
    pub fn new(alpha: f64, beta: f64) -> Self {
        let (sa, sb) = (alpha.sqrt(), beta.sqrt());
        let (l1, l2) = (PI / sa, PI / sb);
        // sup norm 1 and matching slopes at the joints
        let (amp_pos, amp_neg) = if sa >= sb { (sb / sa, 1.0) } else { (1.0, sa / sb) };
        let mut pieces = vec![Piece {
            start: 0.0,
            end: (l1 / 2.0).min(PI),
            centre: 0.0,
            amp: amp_pos,
            freq: sa,
            sign: 1.0,
        }];
        let mut at = l1 / 2.0;
        let mut positive = false;
        while at < PI - 1e-12 {
            let len = if positive { l1 } else { l2 };
            pieces.push(Piece {
                start: at,
                end: (at + len).min(PI),
                centre: at + len / 2.0,
                amp: if positive { amp_pos } else { amp_neg },
                freq: if positive { sa } else { sb },
                sign: if positive { 1.0 } else { -1.0 },
            });
            at += len;
            positive = !positive;
        }
        OracleEigen { pieces }
    }

    pub fn eval(&self, x: f64) -> f64 {
        let p = self
            .pieces
            .iter()
            .find(|p| x <= p.end)
            .unwrap_or_else(|| self.pieces.last().unwrap());
        p.sign * p.amp * (p.freq * (x - p.centre)).cos()
    }

    pub fn breaks(&self) -> Vec<f64> {
        self.pieces.iter().map(|p| p.end).collect()
    }
}

const GL5_NODES: [f64; 5] = [
    -0.906_179_845_938_664,
    -0.538_469_310_105_683_1,
    0.0,
    0.538_469_310_105_683_1,
    0.906_179_845_938_664,
];
const GL5_WEIGHTS: [f64; 5] = [
    0.236_926_885_056_189_1,
    0.478_628_670_499_366_5,
    0.568_888_888_888_888_9,
    0.478_628_670_499_366_5,
    0.236_926_885_056_189_1,
];

/// Composite five-point Gauss rule over `[0, π]`, `panels` panels between
/// consecutive cut points.
pub fn oracle_integrate<F: Fn(f64) -> f64>(f: F, breaks: &[f64], panels: usize) -> f64 {
    let mut cuts: Vec<f64> = breaks.iter().copied().filter(|&b| b > 0.0 && b < PI).collect();
    cuts.push(0.0);
    cuts.push(PI);
    cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    cuts.dedup();
    let mut total = 0.0;
    for w in cuts.windows(2) {
        let h = (w[1] - w[0]) / panels as f64;
        for p in 0..panels {
            let a = w[0] + h * p as f64;
            let mid = a + h / 2.0;
            let mut s = 0.0;
            for (x, wt) in GL5_NODES.iter().zip(GL5_WEIGHTS) {
                s += wt * f(mid + h / 2.0 * x);
            }
            total += s * h / 2.0;
        }
    }
    total
}

pub const PANELS: usize = 96;

/// `⟨f, cos(m·)⟩`, with `cos(0·)` replaced by `√2/2`.
pub fn oracle_inner(e: &OracleEigen, m: u32) -> f64 {
    let mf = f64::from(m);
    let phi = move |x: f64| if m == 0 { std::f64::consts::FRAC_1_SQRT_2 } else { (mf * x).cos() };
    oracle_integrate(|x| e.eval(x) * phi(x), &e.breaks(), PANELS)
}

/// `‖f − cos(n·)‖²`.
pub fn oracle_distance(e: &OracleEigen, n: u32) -> f64 {
    let nf = f64::from(n);
    oracle_integrate(|x| (e.eval(x) - (nf * x).cos()).powi(2), &e.breaks(), PANELS)
}

/// Partner of `α` on `Γ_n`.
pub fn partner(n: u32, a: f64) -> f64 {
    let nf = f64::from(n);
    let s = a.sqrt();
    nf * nf * a / ((2.0 * s - nf) * (2.0 * s - nf))
}
