//! `fucik` command line.
//!
//! Exit codes: 0 success, 1 failed `verify` check, 2 domain error,
//! 3 quadrature non-convergence, 64 usage error, 70 other numerical
//! failure, 74 I/O error.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::analytic::{
    distance_bounds, distance_by_quadrature, distance_squared_to_cos, inner_oracle_delta, norm_squared,
};
use crate::biorthogonal::{biorthogonal_element, biorthogonality_matrix, FucikSystem};
use crate::dilation::{certificate_sum, perturbation_bound, signed_fourier_coefficient};
use crate::eigenfunction::{write_eval_csv, Eigenfunction};
use crate::error::Error;
use crate::expansion::{expand, Target};
use crate::output::fmt_f64;
use crate::quadrature::QuadratureSpec;
use crate::spectrum::{curve_samples, write_curve_csv, Branch, DilationParams, FucikPoint};
use crate::verify::run_battery;

pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_DOMAIN: i32 = 2;
pub const EXIT_QUADRATURE: i32 = 3;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_NUMERICAL: i32 = 70;
pub const EXIT_IO: i32 = 74;

#[derive(Debug, Parser)]
#[command(name = "fucik", version, about = "Neumann Fučík eigenfunctions: spectrum, inner products, bases, expansions")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,

    /// Absolute quadrature tolerance (default 1e-12, or FUCIK_QUAD_TOL).
    #[arg(long, global = true)]
    pub quad_tol: Option<f64>,

    /// Gauss–Legendre nodes per segment.
    #[arg(long, global = true)]
    pub quad_nodes: Option<usize>,

    /// Write CSV here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Also write a gnuplot script that plots the CSV.
    #[arg(long, global = true)]
    pub plot_script: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample the curve Γ_n.
    Spectrum {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 100)]
        count: usize,
        /// Lower end of the α range (default 0.3 n²).
        #[arg(long)]
        alpha_min: Option<f64>,
        /// Upper end of the α range (default 10 n²).
        #[arg(long)]
        alpha_max: Option<f64>,
    },
    /// Tabulate an eigenfunction and its derivative.
    Eval {
        #[command(flatten)]
        point: PointArgs,
        #[arg(long, default_value_t = 500)]
        grid: usize,
    },
    /// ⟨f^n, φ_m⟩ in closed form and by quadrature.
    Inner {
        #[command(flatten)]
        point: PointArgs,
        #[arg(long)]
        m: Vec<u32>,
        /// All m from 0 to this value.
        #[arg(long)]
        m_max: Option<u32>,
    },
    /// Norm, distance to cos(nx) and its bracket.
    Dist {
        #[command(flatten)]
        point: PointArgs,
    },
    /// Generator coefficients against their caps, and the sum certificate.
    Bounds {
        #[arg(long, default_value_t = 50)]
        kmax: u32,
        #[arg(long, default_value_t = 4.0)]
        gamma: f64,
        #[arg(long, default_value = "alpha")]
        branch: Branch,
    },
    /// Biorthogonal coefficients C^m_k, or the biorthogonality matrix.
    Biorth {
        #[command(flatten)]
        system: SystemArgs,
        /// Emit ψ_1..ψ_M coefficients.
        #[arg(long, default_value_t = 12)]
        m: u32,
        /// Emit the N×N matrix ⟨f^n, ψ_m⟩ instead.
        #[arg(long)]
        matrix: Option<u32>,
    },
    /// Expand a target in the system.
    Expand {
        #[command(flatten)]
        system: SystemArgs,
        /// sawtooth | constant | mode:<m>
        #[arg(long, conflicts_with = "coeffs")]
        target: Option<String>,
        /// CSV with `k,coef` rows (coefficients on φ_k, φ₀ = √2/2).
        #[arg(long)]
        coeffs: Option<PathBuf>,
        #[arg(long, default_value_t = 12)]
        n: u32,
    },
    /// Run the invariant battery.
    Verify,
}

#[derive(Debug, Args)]
pub struct PointArgs {
    #[arg(long)]
    pub n: u32,
    #[arg(long, conflicts_with_all = ["beta", "gamma"])]
    pub alpha: Option<f64>,
    #[arg(long, conflicts_with = "gamma")]
    pub beta: Option<f64>,
    /// Dilation parameter; with --branch beta it is δ.
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long, default_value = "alpha")]
    pub branch: Branch,
}

impl PointArgs {
    fn point(&self) -> crate::Result<FucikPoint> {
        match (self.alpha, self.beta, self.gamma) {
            (Some(a), _, _) => FucikPoint::from_alpha(self.n, a),
            (_, Some(b), _) => FucikPoint::from_beta(self.n, b),
            (_, _, Some(g)) => FucikPoint::from_dilation(self.n, g, self.branch),
            _ if self.n == 0 => Ok(FucikPoint::trivial()),
            _ => Ok(FucikPoint::diagonal(self.n)),
        }
    }
}

#[derive(Debug, Args)]
pub struct SystemArgs {
    /// Cosine system (the default when nothing else is given).
    #[arg(long, conflicts_with_all = ["gamma_list", "perturb"])]
    pub diagonal: bool,
    /// CSV with `n,gamma,branch` rows; missing n stay diagonal.
    #[arg(long)]
    pub gamma_list: Option<PathBuf>,
    /// `n:gamma[:branch]`, repeatable.
    #[arg(long)]
    pub perturb: Vec<String>,
    /// Highest index of the system.
    #[arg(long)]
    pub nmax: Option<u32>,
}

impl SystemArgs {
    fn system(&self, needed: u32) -> Result<FucikSystem, CliError> {
        let mut sys = FucikSystem::diagonal(self.nmax.unwrap_or(needed).max(needed));
        let mut entries: Vec<(u32, f64, Branch)> = Vec::new();
        if let Some(path) = &self.gamma_list {
            entries.extend(read_gamma_list(path)?);
        }
        for spec in &self.perturb {
            entries.push(parse_perturb(spec)?);
        }
        for (n, g, b) in entries {
            sys = sys.perturb(n, g, b)?;
        }
        Ok(sys)
    }
}

fn parse_perturb(s: &str) -> Result<(u32, f64, Branch), CliError> {
    let parts: Vec<&str> = s.split(':').collect();
    let bad = || CliError::Usage(format!("--perturb expects n:gamma[:branch], got {s:?}"));
    if !(2..=3).contains(&parts.len()) {
        return Err(bad());
    }
    let n = parts[0].trim().parse().map_err(|_| bad())?;
    let g = parts[1].trim().parse().map_err(|_| bad())?;
    let b = match parts.get(2) {
        Some(t) => t.trim().parse().map_err(|_| bad())?,
        None => Branch::AlphaDominant,
    };
    Ok((n, g, b))
}

fn read_gamma_list(path: &Path) -> Result<Vec<(u32, f64, Branch)>, CliError> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let mut out = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
        let field = |i: usize| rec.get(i).unwrap_or("");
        let n = field(0)
            .parse()
            .map_err(|_| CliError::Usage(format!("bad n {:?} in {}", field(0), path.display())))?;
        let g = field(1)
            .parse()
            .map_err(|_| CliError::Usage(format!("bad gamma {:?} in {}", field(1), path.display())))?;
        let b = if field(2).is_empty() {
            Branch::AlphaDominant
        } else {
            field(2).parse().map_err(|e: Error| CliError::Usage(e.to_string()))?
        };
        out.push((n, g, b));
    }
    Ok(out)
}

fn read_coeffs(path: &Path) -> Result<Vec<f64>, CliError> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let mut coeffs = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
        let k: usize = rec
            .get(0)
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| CliError::Usage(format!("bad k in {}", path.display())))?;
        let c: f64 = rec
            .get(1)
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| CliError::Usage(format!("bad coef in {}", path.display())))?;
        if coeffs.len() <= k {
            coeffs.resize(k + 1, 0.0);
        }
        coeffs[k] += c;
    }
    Ok(coeffs)
}

fn parse_target(s: &str) -> Result<Target, CliError> {
    match s {
        "sawtooth" => Ok(Target::sawtooth()),
        "constant" => Ok(Target::constant()),
        _ => match s.strip_prefix("mode:").map(str::parse::<u32>) {
            Some(Ok(m)) => Ok(Target::mode(m)),
            _ => Err(CliError::Usage(format!(
                "unknown target {s:?}; expected sawtooth, constant or mode:<m>"
            ))),
        },
    }
}

#[derive(Debug)]
enum CliError {
    Lib(Error),
    Usage(String),
    Io(String),
    VerifyFailed,
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Lib(Error::Domain(_)) => EXIT_DOMAIN,
            CliError::Lib(Error::QuadratureNonConvergence { .. }) => EXIT_QUADRATURE,
            CliError::Lib(Error::Numerical(_)) => EXIT_NUMERICAL,
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Io(_) => EXIT_IO,
            CliError::VerifyFailed => EXIT_VERIFY_FAILED,
        }
    }
}

fn quad_spec(cfg: &RunConfig) -> Result<QuadratureSpec, CliError> {
    let base = QuadratureSpec::from_env()?;
    Ok(QuadratureSpec::new(
        cfg.quad_tol.unwrap_or(base.abs_tol),
        cfg.quad_nodes.unwrap_or(base.nodes_per_segment),
        base.max_refinements,
    )?)
}

/// Parses `argv` (program name first), runs, and returns the exit code.
pub fn run<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cfg = match RunConfig::try_parse_from(argv) {
        Ok(cfg) => cfg,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let mut stdout = std::io::stdout().lock();
    match execute(&cfg, &mut stdout) {
        Ok(()) => 0,
        Err(e) => {
            match &e {
                CliError::Lib(err) => eprintln!("error: {err}"),
                CliError::Usage(msg) => eprintln!("usage error: {msg}"),
                CliError::Io(msg) => eprintln!("i/o error: {msg}"),
                CliError::VerifyFailed => eprintln!("verify: at least one check failed"),
            }
            e.exit_code()
        }
    }
}

/// Runs a parsed configuration, writing CSV to `--out` or `stdout`.
fn execute(cfg: &RunConfig, stdout: &mut dyn std::io::Write) -> Result<(), CliError> {
    let spec = quad_spec(cfg)?;
    let mut buf = String::new();
    let mut failed = false;
    let mut plot: Option<String> = None;
    match &cfg.command {
        Command::Spectrum { n, count, alpha_min, alpha_max } => {
            let sq = f64::from(*n) * f64::from(*n);
            let pts = curve_samples(
                *n,
                *count,
                (alpha_min.unwrap_or(0.3 * sq), alpha_max.unwrap_or(10.0 * sq)),
            )?;
            let mut bytes = Vec::new();
            write_curve_csv(&mut bytes, &pts).map_err(|e| CliError::Io(e.to_string()))?;
            buf = String::from_utf8(bytes).expect("ascii csv");
            plot = Some(format!("set xlabel 'alpha'\nset ylabel 'beta'\nplot DATA using 2:3 with lines title 'Gamma_{n}'\n"));
        }
        Command::Eval { point, grid } => {
            let e = Eigenfunction::new(point.point()?);
            let mut bytes = Vec::new();
            write_eval_csv(&mut bytes, &e, *grid).map_err(|e| CliError::Io(e.to_string()))?;
            buf = String::from_utf8(bytes).expect("ascii csv");
            plot = Some("set xlabel 'x'\nplot DATA using 1:2 with lines title 'f', DATA using 1:3 with lines title \"f'\"\n".into());
        }
        Command::Inner { point, m, m_max } => {
            let p = point.point()?;
            let mut ms = m.clone();
            if let Some(top) = m_max {
                ms.extend(0..=*top);
            }
            if ms.is_empty() {
                return Err(CliError::Usage("inner needs --m or --m-max".into()));
            }
            buf.push_str("n,m,alpha,beta,case,analytic,quadrature,delta\n");
            for mm in ms {
                let r = inner_oracle_delta(&p, mm, &spec)?;
                writeln!(
                    buf,
                    "{},{},{},{},{},{},{},{}",
                    p.n(),
                    mm,
                    fmt_f64(p.alpha()),
                    fmt_f64(p.beta()),
                    r.case.tag,
                    fmt_f64(r.case.value),
                    fmt_f64(r.quadrature),
                    fmt_f64(r.delta)
                )
                .unwrap();
            }
        }
        Command::Dist { point } => {
            let p = point.point()?;
            if p.is_trivial() {
                return Err(Error::Domain("distance to cos(nx) needs n >= 1".into()).into());
            }
            let b = distance_bounds(&p);
            buf.push_str("n,alpha,beta,norm_sq,dist_sq,dist_sq_quadrature,lower,upper\n");
            writeln!(
                buf,
                "{},{},{},{},{},{},{},{}",
                p.n(),
                fmt_f64(p.alpha()),
                fmt_f64(p.beta()),
                fmt_f64(norm_squared(&p)),
                fmt_f64(distance_squared_to_cos(&p)),
                fmt_f64(distance_by_quadrature(&p, &spec)?),
                fmt_f64(b.lower),
                fmt_f64(b.upper)
            )
            .unwrap();
        }
        Command::Bounds { kmax, gamma, branch } => {
            let params = match branch {
                Branch::AlphaDominant => DilationParams::Gamma(*gamma),
                Branch::BetaDominant => DilationParams::Delta(*gamma),
                Branch::Trivial => return Err(CliError::Usage("bounds needs branch alpha or beta".into())),
            };
            let cert = certificate_sum(*kmax)?;
            buf.push_str("k,A_k,c_k,|A_k|<=c_k\n");
            for k in 1..=*kmax {
                let a = signed_fourier_coefficient(params, k)?;
                let c = perturbation_bound(k);
                // k = 1 compares the perturbation A_1 − 1
                let ok = if k == 1 { (a - 1.0).abs() <= c } else { a.abs() <= c };
                writeln!(buf, "{k},{},{},{ok}", fmt_f64(a), fmt_f64(c)).unwrap();
            }
            buf.push_str("sum_ck,tail_bound,certificate_lt_1\n");
            writeln!(buf, "{},{},{}", fmt_f64(cert.partial), fmt_f64(cert.tail), cert.lt_one).unwrap();
        }
        Command::Biorth { system, m, matrix } => {
            if let Some(n) = matrix {
                let sys = system.system(*n)?;
                let mat = biorthogonality_matrix(&sys, *n)?;
                buf.push('n');
                for j in 1..=*n {
                    write!(buf, ",psi_{j}").unwrap();
                }
                buf.push('\n');
                for i in 0..*n as usize {
                    write!(buf, "{}", i + 1).unwrap();
                    for j in 0..*n as usize {
                        write!(buf, ",{}", fmt_f64(mat[(i, j)])).unwrap();
                    }
                    buf.push('\n');
                }
            } else {
                let sys = system.system(*m)?;
                buf.push_str("m,k,C_m_k\n");
                for mm in 1..=*m {
                    for (k, c) in biorthogonal_element(&sys, mm)?.coeffs {
                        writeln!(buf, "{mm},{k},{}", fmt_f64(c)).unwrap();
                    }
                }
            }
        }
        Command::Expand { system, target, coeffs, n } => {
            let sys = system.system(*n)?;
            let t = match (target, coeffs) {
                (_, Some(path)) => Target::Cosine(read_coeffs(path)?),
                (Some(name), None) => parse_target(name)?,
                (None, None) => return Err(CliError::Usage("expand needs --target or --coeffs".into())),
            };
            let r = expand(&sys, &t, *n, &spec)?;
            buf.push_str("n,c_n,residual_after_n\n");
            for (k, (c, res)) in r.coefficients.iter().zip(&r.residual_l2).enumerate() {
                writeln!(buf, "{k},{},{}", fmt_f64(*c), fmt_f64(*res)).unwrap();
            }
        }
        Command::Verify => {
            let checks = run_battery(&spec)?;
            let width = checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
            for c in &checks {
                let status = if c.passed { "PASS" } else { "FAIL" };
                writeln!(buf, "{status}  {:<width$}  {}", c.name, c.detail).unwrap();
                failed |= !c.passed;
            }
        }
    }

    match &cfg.out {
        Some(path) => fs::write(path, &buf).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?,
        None => stdout
            .write_all(buf.as_bytes())
            .map_err(|e| CliError::Io(e.to_string()))?,
    }
    if let Some(script) = &cfg.plot_script {
        let body = plot.ok_or_else(|| CliError::Usage("--plot-script applies to spectrum and eval".into()))?;
        let data = cfg
            .out
            .as_ref()
            .map(|p| p.display().to_string())
            .unwrap_or_else(|| "data.csv".into());
        let text = format!(
            "# gnuplot\nset datafile separator ','\nset key autotitle columnhead\nDATA = '{data}'\n{body}"
        );
        fs::write(script, text).map_err(|e| CliError::Io(format!("{}: {e}", script.display())))?;
    }
    if failed {
        return Err(CliError::VerifyFailed);
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> Result<String, i32> {
        let cfg = RunConfig::try_parse_from(std::iter::once("fucik").chain(args.iter().copied()))
            .map_err(|_| EXIT_USAGE)?;
        let mut out = Vec::new();
        execute(&cfg, &mut out).map_err(|e| e.exit_code())?;
        Ok(String::from_utf8(out).unwrap())
    }

    #[test]
    fn perturb_syntax() {
        assert_eq!(parse_perturb("3:2.5").unwrap(), (3, 2.5, Branch::AlphaDominant));
        assert_eq!(parse_perturb("2:4:beta").unwrap(), (2, 4.0, Branch::BetaDominant));
        assert!(parse_perturb("2").is_err());
        assert!(parse_perturb("x:1").is_err());
    }

    #[test]
    fn eval_rows() {
        let out = run_capture(&["eval", "--n", "3", "--alpha", "5", "--grid", "500"]).unwrap();
        let lines: Vec<&str> = out.lines().collect();
        assert_eq!(lines[0], "x,f,fprime");
        assert_eq!(lines.len(), 501);
    }

    #[test]
    fn inner_row() {
        let out = run_capture(&["inner", "--n", "1", "--alpha", "4", "--m", "2"]).unwrap();
        let row: Vec<&str> = out.lines().nth(1).unwrap().split(',').collect();
        assert_eq!(row[4], "divisible_resonant_alpha");
        let analytic: f64 = row[5].parse().unwrap();
        let delta: f64 = row[7].parse().unwrap();
        assert!((analytic - std::f64::consts::PI / 24.0).abs() < 1e-15);
        assert!(delta <= 1e-10);
    }

    #[test]
    fn bounds_certificate_line() {
        let out = run_capture(&["bounds", "--kmax", "50"]).unwrap();
        assert!(out.lines().last().unwrap().ends_with(",true"));
        assert_eq!(out.lines().filter(|l| l.ends_with(",false")).count(), 0);
    }

    #[test]
    fn error_codes() {
        assert_eq!(run_capture(&["eval", "--n", "2", "--alpha", "0.5"]).unwrap_err(), EXIT_DOMAIN);
        assert_eq!(run_capture(&["frobnicate"]).unwrap_err(), EXIT_USAGE);
        assert_eq!(
            run_capture(&["expand", "--target", "wobble"]).unwrap_err(),
            EXIT_USAGE
        );
        assert_eq!(
            run_capture(&["inner", "--n", "3", "--gamma", "2", "--m", "6", "--quad-nodes", "2", "--quad-tol", "1e-15"])
                .unwrap_err(),
            EXIT_QUADRATURE
        );
    }

    #[test]
    fn deterministic_output() {
        let args = ["biorth", "--perturb", "1:2.5", "--perturb", "2:3:beta", "--m", "6"];
        assert_eq!(run_capture(&args).unwrap(), run_capture(&args).unwrap());
    }
}
