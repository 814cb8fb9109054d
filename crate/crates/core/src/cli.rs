//! Command-line front end. [`run`] parses arguments, dispatches, and
//! returns the process exit code: 0 on success, 1 when a verification
//! fails, 2 on invalid input.
//!
//! Complex vectors on the command line are written `"re,im re,im …"`.
//! Arguments taking JSON accept the text itself or `@path`.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use num_rational::Rational64;
use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::automorph::{
    ell_aut_eval, from_lemma_template, make_moebius_aut, make_unitary_aut, BallAutomorphism,
    BallData, CMatrix, EllipsoidAutomorphism, LemmaTemplate, PhiIIParams, STEIN_TOL,
};
use crate::domains::{classify, minkowski_sym, sample_interior, EllipsoidParams};
use crate::error::Error;
use crate::exact::{parse_rational, Turn};
use crate::propermaps::{
    build_special, build_standard, count_preimages, eval_proper, exists_proper, verify_boundary, ProperMapSpec,
    SymMap, DEDUPE_TOL,
};
use crate::symmetric::{fiber, power_map, symmetrize, CVec, SymPoint};

#[derive(Debug, Parser)]
#[command(name = "symell", version, about = "Computations on symmetrized ellipsoids")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Symmetrize a point of ℂⁿ.
    Sym {
        /// Inline vector "re,im re,im …".
        #[arg(long, conflicts_with = "z_file", required_unless_present = "z_file")]
        z: Option<String>,
        /// File holding an inline vector or a JSON array of [re, im] pairs.
        #[arg(long)]
        z_file: Option<PathBuf>,
    },
    /// Root multiset of tⁿ − s₁tⁿ⁻¹ + … + (−1)ⁿsₙ.
    Fiber {
        #[arg(long)]
        s: String,
    },
    /// Minkowski functional of 𝔼_{p,n}.
    Mu(DomainPoint),
    /// Interior, Boundary or Exterior, followed by μ.
    Classify {
        #[command(flatten)]
        point: DomainPoint,
        /// Half-width of the boundary band around μ = 1.
        #[arg(long, default_value_t = 1e-9)]
        band: f64,
    },
    /// The polynomial map P_l with πₙ(zˡ) = P_l(πₙ(z)).
    Powermap {
        #[arg(long)]
        l: u32,
        #[arg(long)]
        s: String,
    },
    /// Ball and ellipsoid automorphisms.
    Aut {
        #[command(subcommand)]
        action: AutAction,
    },
    /// Proper holomorphic maps between symmetrized ellipsoids.
    Proper {
        #[command(subcommand)]
        action: ProperAction,
    },
    /// CSV of μ over an affine plane x·d₁ + y·d₂ + base, x, y ∈ [−range, range].
    Slice {
        #[arg(long, value_parser = parse_rational_arg)]
        p: Rational64,
        #[arg(long)]
        n: usize,
        /// Base point; defaults to the origin.
        #[arg(long)]
        base: Option<String>,
        /// First direction; defaults to (1, 0, …).
        #[arg(long)]
        dir1: Option<String>,
        /// Second direction; defaults to (i, 0, …).
        #[arg(long)]
        dir2: Option<String>,
        #[arg(long, default_value_t = 2.0)]
        range: f64,
        /// Nodes per axis.
        #[arg(long, default_value_t = 41)]
        grid: usize,
    },
}

#[derive(Debug, Args)]
struct DomainPoint {
    #[arg(long, value_parser = parse_rational_arg)]
    p: Rational64,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    s: String,
}

#[derive(Debug, Subcommand)]
enum AutAction {
    /// Build an automorphism and print it as JSON.
    Make {
        /// Center a of a Möbius automorphism of the ball.
        #[arg(long, group = "source")]
        center: Option<String>,
        /// Unitary factor as JSON rows of [re, im]; defaults to the identity.
        #[arg(long)]
        unitary: Option<String>,
        /// A normal-form template {"form": …, "m": …, "l": …}.
        #[arg(long, group = "source")]
        template: Option<String>,
        /// An ellipsoid automorphism {"family": …}; printed normalized.
        #[arg(long, group = "source")]
        ellipsoid: Option<String>,
    },
    /// Evaluate a ball automorphism at z or an ellipsoid automorphism at s.
    Eval {
        #[arg(long, group = "map", required = true)]
        aut: Option<String>,
        #[arg(long, group = "map")]
        ellipsoid: Option<String>,
        /// Point (z for ball maps, s for ellipsoid maps).
        #[arg(long)]
        at: String,
    },
    /// Print the constraint residuals of (a, Q, R); exit 1 above tolerance.
    Verify {
        #[arg(long)]
        aut: String,
        #[arg(long, default_value_t = STEIN_TOL)]
        tol: f64,
    },
}

#[derive(Debug, Subcommand)]
enum ProperAction {
    /// Whether a proper map 𝔼_{p,n} → 𝔼_{q,n} exists.
    Exists {
        #[arg(long, value_parser = parse_rational_arg)]
        p: Rational64,
        #[arg(long, value_parser = parse_rational_arg)]
        q: Rational64,
    },
    /// Print a map spec: P_{p/q}∘ψ, or with --special P_m∘φ_III∘P_2∘φ_II.
    Build {
        #[arg(long, value_parser = parse_rational_arg, required_unless_present = "special")]
        p: Option<Rational64>,
        #[arg(long, value_parser = parse_rational_arg, required_unless_present = "special")]
        q: Option<Rational64>,
        #[arg(long, required_unless_present = "special")]
        n: Option<usize>,
        /// Automorphism ψ of the source; defaults to the identity.
        #[arg(long)]
        psi: Option<String>,
        #[arg(long, conflicts_with_all = ["p", "q", "n", "psi"])]
        special: bool,
        #[arg(long, default_value_t = 1)]
        m: u32,
        /// ζ_III as a rational turn.
        #[arg(long, default_value = "0")]
        zeta_iii: String,
        /// φ_II parameters as JSON; defaults to the identity.
        #[arg(long)]
        phi2: Option<String>,
    },
    /// Apply a map spec to a point s of the source.
    Eval {
        #[arg(long)]
        spec: String,
        #[arg(long)]
        s: String,
    },
    /// Boundary, interior and compactness checks; exit 1 on failure.
    Verify {
        #[arg(long)]
        spec: String,
        #[arg(long, default_value_t = 500)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
    /// Number of preimages of a target (a seeded interior point if omitted).
    Multiplicity {
        #[arg(long)]
        spec: String,
        #[arg(long)]
        t: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEDUPE_TOL)]
        dedupe_tol: f64,
    },
}

/// Errors of a command, split by exit code.
enum Failure {
    Invalid(String),
    Failed(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NonConvergence { .. } | Error::InconsistentPreimage { .. } => Failure::Failed(e.to_string()),
            _ => Failure::Invalid(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Invalid(e.to_string())
    }
}

type CmdResult = std::result::Result<i32, Failure>;

fn parse_rational_arg(text: &str) -> std::result::Result<Rational64, String> {
    parse_rational(text).map_err(|e| e.to_string())
}

/// Parses `"re,im re,im …"`; a bare `re` is accepted as real.
pub fn parse_complex_list(text: &str) -> crate::error::Result<Vec<Complex64>> {
    let bad = |tok: &str| Error::InvalidInput(format!("bad complex number {tok:?}"));
    let values = text
        .split_whitespace()
        .map(|tok| {
            let (re, im) = tok.split_once(',').unwrap_or((tok, "0"));
            match (re.trim().parse::<f64>(), im.trim().parse::<f64>()) {
                (Ok(re), Ok(im)) => Ok(Complex64::new(re, im)),
                _ => Err(bad(tok)),
            }
        })
        .collect::<crate::error::Result<Vec<_>>>()?;
    if values.is_empty() {
        return Err(Error::InvalidInput("empty vector".into()));
    }
    Ok(values)
}

fn round_sig(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

/// Inverse of [`parse_complex_list`], rounded to 12 significant digits;
/// parts below `1e-12` times the largest modulus print as 0.
pub fn format_complex_list(values: &[Complex64]) -> String {
    let scale = values.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let clean = |x: f64| {
        let x = if x.abs() <= 1e-12 * scale { 0.0 } else { round_sig(x) };
        // Folds −0 into 0.
        x + 0.0
    };
    values
        .iter()
        .map(|z| format!("{},{}", clean(z.re), clean(z.im)))
        .collect::<Vec<_>>()
        .join(" ")
}

fn read_json<T: DeserializeOwned>(arg: &str) -> std::result::Result<T, Failure> {
    let text = match arg.strip_prefix('@') {
        Some(path) => std::fs::read_to_string(path)?,
        None => arg.to_string(),
    };
    serde_json::from_str(&text).map_err(|e| Failure::Invalid(format!("bad JSON: {e}")))
}

fn write_json<T: Serialize>(out: &mut dyn Write, value: &T) -> std::result::Result<(), Failure> {
    let text = serde_json::to_string_pretty(value).map_err(|e| Failure::Invalid(e.to_string()))?;
    writeln!(out, "{text}")?;
    Ok(())
}

fn sym_point(text: &str) -> std::result::Result<SymPoint, Failure> {
    Ok(SymPoint::new(parse_complex_list(text)?)?)
}

fn cvec(text: &str) -> std::result::Result<CVec, Failure> {
    Ok(CVec::new(parse_complex_list(text)?)?)
}

fn read_vector_file(path: &PathBuf) -> std::result::Result<CVec, Failure> {
    let text = std::fs::read_to_string(path)?;
    if text.trim_start().starts_with('[') {
        serde_json::from_str(&text).map_err(|e| Failure::Invalid(format!("bad JSON: {e}")))
    } else {
        cvec(&text)
    }
}

fn cmd_sym(z: Option<String>, z_file: Option<PathBuf>, out: &mut dyn Write) -> CmdResult {
    let z = match (z, z_file) {
        (Some(text), _) => cvec(&text)?,
        (None, Some(path)) => read_vector_file(&path)?,
        (None, None) => return Err(Failure::Invalid("--z or --z-file is required".into())),
    };
    writeln!(out, "{}", format_complex_list(symmetrize(&z).coords()))?;
    Ok(0)
}

fn domain_point(d: &DomainPoint) -> std::result::Result<(SymPoint, EllipsoidParams), Failure> {
    Ok((sym_point(&d.s)?, EllipsoidParams::new(d.p, d.n)?))
}

fn cmd_aut(action: AutAction, out: &mut dyn Write) -> CmdResult {
    match action {
        AutAction::Make {
            center,
            unitary,
            template,
            ellipsoid,
        } => {
            if let Some(t) = template {
                let t: LemmaTemplate = read_json(&t)?;
                write_json(out, &from_lemma_template(&t))?;
            } else if let Some(e) = ellipsoid {
                let e: EllipsoidAutomorphism = read_json(&e)?;
                write_json(out, &e)?;
            } else {
                let a = match center {
                    Some(c) => cvec(&c)?,
                    None => return Err(Failure::Invalid("one of --center, --template, --ellipsoid".into())),
                };
                let n = a.dim();
                let u = match unitary {
                    Some(u) => {
                        let rows: Vec<Vec<[f64; 2]>> = read_json(&u)?;
                        if rows.len() != n || rows.iter().any(|r| r.len() != n) {
                            return Err(Failure::Invalid("unitary factor must be n x n".into()));
                        }
                        CMatrix::from_row_iterator(n, n, rows.into_iter().flatten().map(|[re, im]| Complex64::new(re, im)))
                    }
                    None => CMatrix::identity(n, n),
                };
                let phi = if a.norm() == 0.0 {
                    make_unitary_aut(u)?
                } else {
                    make_moebius_aut(&a, u)?
                };
                write_json(out, &phi)?;
            }
            Ok(0)
        }
        AutAction::Eval { aut, ellipsoid, at } => {
            let values = parse_complex_list(&at)?;
            let image = match (aut, ellipsoid) {
                (Some(a), _) => {
                    let phi: BallAutomorphism = read_json(&a)?;
                    phi.eval(&CVec::new(values)?)?.into_vec()
                }
                (None, Some(e)) => {
                    let psi: EllipsoidAutomorphism = read_json(&e)?;
                    ell_aut_eval(&psi, &SymPoint::new(values)?)?.into_vec()
                }
                (None, None) => return Err(Failure::Invalid("--aut or --ellipsoid is required".into())),
            };
            writeln!(out, "{}", format_complex_list(&image))?;
            Ok(0)
        }
        AutAction::Verify { aut, tol } => {
            if !(tol > 0.0) {
                return Err(Failure::Invalid("tol must be positive".into()));
            }
            let data: BallData = read_json(&aut)?;
            let residuals = data.into_unchecked()?.stein_residuals();
            let pass = residuals.max() <= tol;
            write_json(
                out,
                &serde_json::json!({ "residuals": residuals, "max": residuals.max(), "tol": tol, "pass": pass }),
            )?;
            Ok(if pass { 0 } else { 1 })
        }
    }
}

/// A seeded interior point of the target with a simple fiber.
fn generic_target(spec: &ProperMapSpec, seed: u64, dedupe_tol: f64) -> std::result::Result<usize, Failure> {
    let candidates = sample_interior(&spec.target(), seed, 16)?;
    let mut last = None;
    for t in &candidates {
        match count_preimages(spec, t, dedupe_tol) {
            Err(e @ Error::DegenerateTarget { .. }) => last = Some(e),
            other => return Ok(other?),
        }
    }
    Err(last.expect("at least one candidate").into())
}

fn cmd_proper(action: ProperAction, out: &mut dyn Write) -> CmdResult {
    match action {
        ProperAction::Exists { p, q } => {
            if p <= Rational64::from(0) || q <= Rational64::from(0) {
                return Err(Failure::Invalid("p and q must be positive".into()));
            }
            writeln!(out, "{}", exists_proper(p, q))?;
            Ok(0)
        }
        ProperAction::Build {
            p,
            q,
            n,
            psi,
            special,
            m,
            zeta_iii,
            phi2,
        } => {
            let spec = if special {
                let zeta: Turn = zeta_iii.parse()?;
                let phi2 = match phi2 {
                    Some(j) => read_json::<PhiIIParams>(&j)?,
                    None => PhiIIParams::identity(),
                };
                build_special(m, zeta, phi2)?
            } else {
                let (p, q, n) = (p.expect("required"), q.expect("required"), n.expect("required"));
                let psi = match psi {
                    Some(j) => read_json(&j)?,
                    None => EllipsoidAutomorphism::identity(EllipsoidParams::new(p, n)?),
                };
                build_standard(p, q, n, psi)?
            };
            write_json(out, &spec)?;
            Ok(0)
        }
        ProperAction::Eval { spec, s } => {
            let spec: ProperMapSpec = read_json(&spec)?;
            let t = eval_proper(&spec, &sym_point(&s)?)?;
            writeln!(out, "{}", format_complex_list(t.coords()))?;
            Ok(0)
        }
        ProperAction::Verify {
            spec,
            samples,
            seed,
            tol,
        } => {
            let spec: ProperMapSpec = read_json(&spec)?;
            let report = verify_boundary(&spec, samples, seed, tol)?;
            write_json(out, &report)?;
            Ok(if report.pass { 0 } else { 1 })
        }
        ProperAction::Multiplicity {
            spec,
            t,
            seed,
            dedupe_tol,
        } => {
            let spec: ProperMapSpec = read_json(&spec)?;
            let count = match t {
                Some(t) => count_preimages(&spec, &sym_point(&t)?, dedupe_tol)?,
                None => generic_target(&spec, seed, dedupe_tol)?,
            };
            writeln!(out, "{count}")?;
            Ok(0)
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_slice(
    p: Rational64,
    n: usize,
    base: Option<String>,
    dir1: Option<String>,
    dir2: Option<String>,
    range: f64,
    grid: usize,
    out: &mut dyn Write,
) -> CmdResult {
    let params = EllipsoidParams::new(p, n)?;
    if grid < 2 || !(range > 0.0) {
        return Err(Failure::Invalid("grid must be >= 2 and range positive".into()));
    }
    let unit = |z: Complex64| {
        let mut v = vec![Complex64::new(0.0, 0.0); n];
        v[0] = z;
        v
    };
    let vector = |arg: Option<String>, default: Vec<Complex64>| -> std::result::Result<Vec<Complex64>, Failure> {
        let v = match arg {
            Some(text) => parse_complex_list(&text)?,
            None => default,
        };
        if v.len() != n {
            return Err(Failure::Invalid(format!("vectors must have {n} entries")));
        }
        Ok(v)
    };
    let base = vector(base, vec![Complex64::new(0.0, 0.0); n])?;
    let d1 = vector(dir1, unit(Complex64::new(1.0, 0.0)))?;
    let d2 = vector(dir2, unit(Complex64::new(0.0, 1.0)))?;
    writeln!(out, "x,y,mu")?;
    let step = 2.0 * range / (grid - 1) as f64;
    for i in 0..grid {
        let y = -range + step * i as f64;
        for j in 0..grid {
            let x = -range + step * j as f64;
            let coords = (0..n).map(|k| base[k] + d1[k] * x + d2[k] * y).collect();
            let mu = minkowski_sym(&SymPoint::new(coords)?, &params)?;
            writeln!(out, "{x},{y},{mu}")?;
        }
    }
    Ok(0)
}

fn dispatch(command: Command, out: &mut dyn Write) -> CmdResult {
    match command {
        Command::Sym { z, z_file } => cmd_sym(z, z_file, out),
        Command::Fiber { s } => {
            let roots = fiber(&sym_point(&s)?)?;
            writeln!(out, "{}", format_complex_list(roots.roots()))?;
            Ok(0)
        }
        Command::Mu(d) => {
            let (s, params) = domain_point(&d)?;
            writeln!(out, "{:.12}", minkowski_sym(&s, &params)?)?;
            Ok(0)
        }
        Command::Classify { point, band } => {
            let (s, params) = domain_point(&point)?;
            let c = classify(&s, &params, band)?;
            writeln!(out, "{:?} {:.12}", c.region, c.mu)?;
            Ok(0)
        }
        Command::Powermap { l, s } => {
            let t = power_map(&sym_point(&s)?, l)?;
            writeln!(out, "{}", format_complex_list(t.coords()))?;
            Ok(0)
        }
        Command::Aut { action } => cmd_aut(action, out),
        Command::Proper { action } => cmd_proper(action, out),
        Command::Slice {
            p,
            n,
            base,
            dir1,
            dir2,
            range,
            grid,
        } => cmd_slice(p, n, base, dir1, dir2, range, grid, out),
    }
}

/// Runs the command line `args` (including the program name) and returns
/// the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(Failure::Invalid(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
        Err(Failure::Failed(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            1
        }
    }
}
