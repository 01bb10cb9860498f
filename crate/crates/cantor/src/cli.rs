//! Command-line front end: JSON/CSV pipelines over the library.
//!
//! Every input argument accepts either inline JSON or a path to a JSON file.
//! Outputs go to `--out` (written once, via a temporary file and rename) or
//! to standard output.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use num_traits::Signed;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::cbsets::{self, CbTree};
use crate::covering::{self, OracleSpec};
use crate::creals::CReal;
use crate::elementary;
use crate::error::{Error, Result};
use crate::func::{ClosureFn, FnHandle, Polynomial, RealFn};
use crate::interval::RationalInterval;
use crate::opensets::{self, OpenSet};
use crate::rational::{self as rq, Rational};
use crate::schwarz::{self, LocalPiece, Reconciled, SeparatedTree, ThirdsTree};
use crate::trigseries::{self, PiScaled, SmoothedFn, TrigSeries};

#[derive(Parser, Debug)]
#[command(name = "cantor", version, about = "Exact-arithmetic uniqueness machinery for trigonometric series")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Working precision: enclosures of width < 2^-m.
    #[arg(long = "precision", global = true, default_value_t = 40)]
    pub precision: u32,
    /// Tolerance as "p/q" or a decimal.
    #[arg(long, global = true, default_value = "1/1000000")]
    pub tol: String,
    /// Search depth / iteration cap.
    #[arg(long = "depth-cap", global = true, default_value_t = 20)]
    pub depth_cap: usize,
    /// Sequence-index stage for Cantor–Bendixson trees.
    #[arg(long, global = true, default_value_t = 6)]
    pub stage: usize,
    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Enclose the partial sum F on a π-scaled grid (CSV u,lo,hi).
    Eval(GridArgs),
    /// Enclose the smoothed function G on a π-scaled grid (CSV u,lo,hi).
    Smooth(GridArgs),
    /// Symmetric-derivative probes of G on the interior grid points.
    Probe {
        #[command(flatten)]
        grid: GridArgs,
        /// 2 for the second symmetric derivative, 1 for the first.
        #[arg(long, default_value_t = 2)]
        order: u32,
    },
    /// Fullness rank of an open set or a Cantor–Bendixson complement.
    Rank {
        #[arg(long)]
        input: String,
    },
    /// Finite subcover from a neighbourhood oracle.
    Cover {
        #[arg(long)]
        oracle: String,
        /// Ambient interval "lo,hi" for uniform-radius oracles.
        #[arg(long, default_value = "0,1")]
        interval: String,
    },
    /// A point of a thirds tree apart from every listed value.
    Avoid {
        /// JSON list of rationals.
        #[arg(long)]
        input: String,
        #[arg(long, default_value = "0,1")]
        interval: String,
    },
    /// Nested trisection for (ρ, z); CSV trace.
    Trisect {
        #[arg(long)]
        g: String,
        #[arg(long)]
        x: String,
        #[arg(long)]
        eps: String,
        #[arg(long, default_value_t = 20)]
        steps: usize,
    },
    /// Values of the enumeration of a tree.
    CbIndex {
        #[arg(long)]
        tree: String,
        /// Comma-separated indices or a range "a..b".
        #[arg(long)]
        index: String,
    },
    /// Distance from a rational to the closed set of a tree.
    CbDistance {
        #[arg(long)]
        tree: String,
        #[arg(long)]
        x: String,
    },
    /// Ambient interval minus closed balls around an enumeration prefix.
    Residual {
        #[arg(long)]
        input: String,
    },
    /// Uniqueness pipeline for a series vanishing off an exceptional set.
    Demo {
        #[arg(long)]
        series: String,
        #[arg(long, default_value = r#"{"type":"none"}"#)]
        exceptional: String,
        /// Odd number of π-scaled grid points.
        #[arg(long, default_value_t = 33)]
        grid: usize,
    },
}

#[derive(Args, Debug, Clone)]
pub struct GridArgs {
    #[arg(long)]
    pub series: String,
    /// Odd number of equispaced π-scaled points in [-1, 1].
    #[arg(long, default_value_t = 9)]
    pub grid: usize,
}

/// What a command produced, and whether it counts as a failure.
pub struct Outcome {
    pub body: String,
    pub failure: Option<Error>,
}

impl Outcome {
    fn ok(body: String) -> Self {
        Outcome { body, failure: None }
    }
}

/// Inline JSON or the contents of a file.
pub fn read_input(arg: &str) -> Result<String> {
    let t = arg.trim_start();
    if t.starts_with('{') || t.starts_with('[') || t.starts_with('"') {
        return Ok(arg.to_string());
    }
    std::fs::read_to_string(arg).map_err(|e| Error::Parse(format!("cannot read {arg}: {e}")))
}

fn parse_json<T: for<'de> Deserialize<'de>>(arg: &str) -> Result<T> {
    serde_json::from_str(&read_input(arg)?).map_err(|e| Error::Parse(e.to_string()))
}

fn parse_pair(s: &str) -> Result<(Rational, Rational)> {
    let (a, b) = s.split_once(',').ok_or_else(|| Error::Parse(format!("expected \"lo,hi\", got {s:?}")))?;
    let p = (rq::parse(a.trim())?, rq::parse(b.trim())?);
    if p.0 >= p.1 {
        return Err(Error::BadAmbient);
    }
    Ok(p)
}

/// Writes `body` to `path` through a sibling temporary file.
pub fn write_atomic(path: &Path, body: &str) -> std::io::Result<()> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    std::fs::write(&tmp, body)?;
    std::fs::rename(&tmp, path)
}

/// `n` equispaced points of `[-1, 1]`.
pub fn pi_grid(n: usize) -> Result<Vec<Rational>> {
    if n < 3 || n.is_multiple_of(2) {
        return Err(Error::Precondition(format!("grid size must be odd and >= 3, got {n}")));
    }
    let step = rq::rat(2, n as i64 - 1);
    Ok((0..n).map(|i| rq::int(-1) + &step * rq::int(i as i64)).collect())
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}

/// Parses and runs; returns the process exit code.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let out = cli.global.out.clone();
    match run(&cli) {
        Ok(o) => {
            let written = match &out {
                Some(p) => write_atomic(p, &o.body),
                None => {
                    print!("{}", o.body);
                    Ok(())
                }
            };
            if let Err(e) = written {
                eprintln!("error: cannot write output: {e}");
                return 2;
            }
            match o.failure {
                Some(e) => {
                    eprintln!("error: {e}");
                    e.exit_code()
                }
                None => 0,
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    let g = &cli.global;
    let tol = rq::parse(&g.tol)?;
    if !tol.is_positive() {
        return Err(Error::Precondition("--tol must be positive".into()));
    }
    match &cli.command {
        Command::Eval(a) => grid_csv(a, g.precision, trigseries::eval_partial),
        Command::Smooth(a) => grid_csv(a, g.precision, trigseries::smooth_eval),
        Command::Probe { grid, order } => cmd_probe(grid, *order, &tol, g.depth_cap),
        Command::Rank { input } => cmd_rank(input, g.stage, g.depth_cap),
        Command::Cover { oracle, interval } => cmd_cover(oracle, interval, g.depth_cap),
        Command::Avoid { input, interval } => cmd_avoid(input, interval, g.precision),
        Command::Trisect { g: gspec, x, eps, steps } => cmd_trisect(gspec, x, eps, *steps),
        Command::CbIndex { tree, index } => cmd_cb_index(tree, index),
        Command::CbDistance { tree, x } => {
            let t: CbTree = parse_json(tree)?;
            let d = cbsets::cb_distance(&t, &CReal::from_rational(rq::parse(x)?), g.precision);
            Ok(Outcome::ok(to_json(&d)))
        }
        Command::Residual { input } => {
            let r: ResidualInput = parse_json(input)?;
            let f = r.f.iter().map(|s| rq::parse(s)).collect::<Result<Vec<_>>>()?;
            let amb = (rq::parse(&r.ambient[0])?, rq::parse(&r.ambient[1])?);
            Ok(Outcome::ok(to_json(&cbsets::residual_set(&f, &r.c, &amb)?)))
        }
        Command::Demo { series, exceptional, grid } => {
            let s: TrigSeries = parse_json(series)?;
            let x: Exceptional = parse_json(exceptional)?;
            let report = uniqueness_demo(&s, &x, *grid, g.precision, &tol, g.stage, g.depth_cap)?;
            let failure = report.failed_stage.clone().map(|st| Error::ToleranceNotMet(format!("demo failed at stage {st}")));
            Ok(Outcome { body: to_json(&report), failure })
        }
    }
}

fn grid_csv(a: &GridArgs, m: u32, f: fn(&TrigSeries, &PiScaled, u32) -> RationalInterval) -> Result<Outcome> {
    let s: TrigSeries = parse_json(&a.series)?;
    let mut out = String::from("u,lo,hi\n");
    for u in pi_grid(a.grid)? {
        let e = f(&s, &PiScaled::new(u.clone())?, m);
        out += &format!("{},{},{}\n", rq::fmt(&u), rq::fmt(&e.lo), rq::fmt(&e.hi));
    }
    Ok(Outcome::ok(out))
}

fn cmd_probe(a: &GridArgs, order: u32, tol: &Rational, k: usize) -> Result<Outcome> {
    let s: TrigSeries = parse_json(&a.series)?;
    let pts = pi_grid(a.grid)?;
    let mut out = String::from("u,converged,lo,hi\n");
    let mut failed = None;
    for u in &pts[1..pts.len() - 1] {
        let x = PiScaled::new(u.clone())?;
        let r = match order {
            2 => trigseries::d2_probe(&s, &x, tol, k.max(2))?,
            1 => trigseries::d1_probe(&s, &x, tol, k.max(2))?,
            _ => return Err(Error::Precondition("--order must be 1 or 2".into())),
        };
        if !r.converged && failed.is_none() {
            failed = Some(Error::ToleranceNotMet(format!("probe at u = {} did not converge", rq::fmt(u))));
        }
        let e = &r.limit_enclosure;
        out += &format!("{},{},{},{}\n", rq::fmt(u), r.converged, rq::fmt(&e.lo), rq::fmt(&e.hi));
    }
    Ok(Outcome { body: out, failure: failed })
}

fn cmd_rank(input: &str, stage: usize, max_rank: usize) -> Result<Outcome> {
    let text = read_input(input)?;
    let v: serde_json::Value = serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))?;
    let report = if v.get("components").is_some() {
        let g: OpenSet = serde_json::from_value(v).map_err(|e| Error::Parse(e.to_string()))?;
        opensets::fullness_rank(&g, max_rank)
    } else {
        let t: CbTree = serde_json::from_value(v).map_err(|e| Error::Parse(e.to_string()))?;
        cbsets::cb_fullness(&t, stage, max_rank)
    };
    Ok(Outcome::ok(to_json(&report)))
}

/// Points sampled when verifying a certificate over an interval.
pub const SWEEP_POINTS: usize = 10_000;
/// Enumeration indices checked when verifying a located cover.
pub const ENUM_CHECK: u64 = 200;

fn cmd_cover(oracle: &str, interval: &str, cap: usize) -> Result<Outcome> {
    let spec: OracleSpec = parse_json(oracle)?;
    match spec {
        OracleSpec::UniformRadius { r } => {
            if !r.is_positive() {
                return Err(Error::Precondition("radius must be positive".into()));
            }
            let amb = parse_pair(interval)?;
            let cert = covering::heine_borel_subcover(&amb, &covering::uniform_radius(r), cap)?;
            let failure = cert
                .grid_sweep(&amb.0, &amb.1, SWEEP_POINTS)
                .map(|x| Error::ToleranceNotMet(format!("certificate misses {}", rq::fmt(&x))));
            Ok(Outcome { body: to_json(&cert), failure })
        }
        OracleSpec::Cbset { tree, r } => {
            let r = rq::parse(r.as_deref().unwrap_or("1/16"))?;
            let cert = covering::located_subcover(&tree, &tree.ambient(), &covering::uniform_radius(r), cap)?;
            let failure = (0..ENUM_CHECK)
                .map(|n| cbsets::cb_index(&tree, n))
                .find(|x| !cert.covers(x))
                .map(|x| Error::ToleranceNotMet(format!("certificate misses enumerated point {}", rq::fmt(&x))));
            Ok(Outcome { body: to_json(&cert), failure })
        }
    }
}

fn cmd_avoid(input: &str, interval: &str, m: u32) -> Result<Outcome> {
    let vals: Vec<String> = parse_json(input)?;
    let f = vals.iter().map(|s| rq::parse(s).map(CReal::from_rational)).collect::<Result<Vec<_>>>()?;
    let (lo, hi) = parse_pair(interval)?;
    let av = schwarz::diagonal_avoid(Arc::new(ThirdsTree { lo, hi }), &f)?;
    let failure = (!schwarz::check_avoidance(&av, &f, m.max(80)))
        .then(|| Error::ToleranceNotMet("avoidance witnesses did not verify".into()));
    let x = av.x.approx(m);
    let body = json!({
        "x": x,
        "path": av.path,
        "witnesses": av.witnesses.iter().map(|w| json!({"index": w.index, "side": w.side, "w": rq::fmt(&w.w)})).collect::<Vec<_>>(),
    });
    Ok(Outcome { body: to_json(&body), failure })
}

/// `G` for the trisection, on `[a, b]` in real coordinates.
#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum GSpec {
    Polynomial { coeffs: Vec<String>, interval: [String; 2] },
    Smoothed { series: TrigSeries, interval: [String; 2] },
}

impl GSpec {
    pub fn build(&self) -> Result<(FnHandle, Rational, Rational)> {
        let (h, iv): (FnHandle, _) = match self {
            GSpec::Polynomial { coeffs, interval } => {
                let c = coeffs.iter().map(|s| rq::parse(s)).collect::<Result<Vec<_>>>()?;
                (Arc::new(Polynomial::new(c)), interval)
            }
            GSpec::Smoothed { series, interval } => (Arc::new(SmoothedFn(series.clone())), interval),
        };
        let (a, b) = (rq::parse(&iv[0])?, rq::parse(&iv[1])?);
        if a >= b {
            return Err(Error::BadAmbient);
        }
        Ok((h, a, b))
    }
}

fn cmd_trisect(gspec: &str, x: &str, eps: &str, steps: usize) -> Result<Outcome> {
    let spec: GSpec = parse_json(gspec)?;
    let (g, a, b) = spec.build()?;
    let eps = RationalInterval::point(rq::parse(eps)?);
    let cert = schwarz::rho_z_search(&g, &a, &b, &rq::parse(x)?, &eps, steps)?;
    Ok(Outcome::ok(cert.to_csv()))
}

fn cmd_cb_index(tree: &str, index: &str) -> Result<Outcome> {
    let t: CbTree = parse_json(tree)?;
    let idx: Vec<u64> = if let Some((a, b)) = index.split_once("..") {
        let (a, b) = (parse_u64(a)?, parse_u64(b)?);
        (a..b).collect()
    } else {
        index.split(',').map(parse_u64).collect::<Result<_>>()?
    };
    let rows: Vec<_> = idx.iter().map(|&n| json!({"index": n, "value": rq::fmt(&cbsets::cb_index(&t, n))})).collect();
    Ok(Outcome::ok(to_json(&rows)))
}

fn parse_u64(s: &str) -> Result<u64> {
    s.trim().parse().map_err(|_| Error::Parse(format!("bad index {s:?}")))
}

#[derive(Deserialize)]
struct ResidualInput {
    f: Vec<String>,
    c: Vec<u32>,
    #[serde(default = "default_ambient")]
    ambient: [String; 2],
}

fn default_ambient() -> [String; 2] {
    ["-1".into(), "1".into()]
}

/// Exceptional sets for the uniqueness demo, in π-scaled coordinates.
#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum Exceptional {
    None,
    Finite { points: Vec<String> },
    Cbset { tree: CbTree },
    Enumeration { points: Vec<String> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageReport {
    pub name: String,
    pub ok: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DemoReport {
    pub stages: Vec<StageReport>,
    pub admissible_points: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_coefficient: Option<String>,
    pub pass: bool,
    pub failed_stage: Option<String>,
}

/// `G(πu)` as a function of `u`.
fn smoothed_in_u(s: &TrigSeries) -> ClosureFn {
    let g = SmoothedFn(s.clone());
    ClosureFn::new(
        move |u, bits| {
            let k = rq::bits_above(&u.mag()) + 4;
            let x = u * &elementary::pi_interval(bits + k + 4);
            g.eval(&x, bits + 2)
        },
        None,
    )
}

/// The pipeline behind `demo`.
///
/// 1. Admissible points: the grid minus points not certified apart from the
///    exceptional set, plus (for enumerations) a diagonal-avoidance point.
/// 2. `F` must vanish there: every enclosure straddles 0.
/// 3. `G` must be affine on the widest complementary piece.
/// 4. Recovered coefficients must all be within `tol` of 0.
pub fn uniqueness_demo(
    s: &TrigSeries,
    x: &Exceptional,
    grid: usize,
    m: u32,
    tol: &Rational,
    stage: usize,
    depth_cap: usize,
) -> Result<DemoReport> {
    let mut stages = Vec::new();
    let fail = |stages: Vec<StageReport>, n: usize, name: &str| DemoReport {
        stages,
        admissible_points: n,
        max_coefficient: None,
        pass: false,
        failed_stage: Some(name.to_string()),
    };

    let pts = pi_grid(grid)?;
    let (admissible, pieces) = admissible_points(x, &pts, stage)?;
    let n = admissible.len();
    let mut bad = None;
    for u in &admissible {
        let e = trigseries::eval_partial(s, &PiScaled::new(u.clone())?, m);
        if e.lo.is_positive() || e.hi.is_negative() {
            bad = Some((u.clone(), e));
            break;
        }
    }
    match bad {
        Some((u, e)) => {
            stages.push(StageReport {
                name: "vanishing".into(),
                ok: false,
                detail: format!("F({}·π) ∈ {} excludes 0", rq::fmt(&u), e),
            });
            return Ok(fail(stages, n, "vanishing"));
        }
        None => stages.push(StageReport { name: "vanishing".into(), ok: true, detail: format!("{n} admissible points") }),
    }

    let (p, q) = pieces
        .iter()
        .max_by(|a, b| (&a.1 - &a.0).cmp(&(&b.1 - &b.0)))
        .cloned()
        .ok_or_else(|| Error::Precondition("exceptional set leaves no complementary piece".into()))?;
    let gu = smoothed_in_u(s);
    let gs = SmoothedFn(s.clone());
    let oracle = |t: &Rational| local_piece(&gs, &gu, t, &p, &q);
    let pad = (&q - &p) / rq::int(8);
    let span = (&p + &pad, &q - &pad);
    match schwarz::piecewise_linear_reconcile(&gu, &oracle, (&span.0, &span.1), depth_cap)? {
        Reconciled::Linear { slope, intercept } => stages.push(StageReport {
            name: "reconcile".into(),
            ok: true,
            detail: format!(
                "G affine on [{}, {}]: slope {}, intercept {}",
                rq::fmt(&span.0),
                rq::fmt(&span.1),
                rq::fmt(&slope),
                rq::fmt(&intercept)
            ),
        }),
        Reconciled::MismatchAt(e) => {
            stages.push(StageReport { name: "reconcile".into(), ok: false, detail: format!("break inside {e:?}") });
            return Ok(fail(stages, n, "reconcile"));
        }
    }

    let rec = trigseries::recover_coefficients(s, tol)?;
    let max = rec.max_magnitude();
    let ok = max <= *tol;
    stages.push(StageReport {
        name: "coefficients".into(),
        ok,
        detail: format!("max |coefficient| <= {}", rq::fmt(&max)),
    });
    Ok(DemoReport {
        stages,
        admissible_points: n,
        max_coefficient: Some(rq::fmt(&max)),
        pass: ok,
        failed_stage: (!ok).then(|| "coefficients".to_string()),
    })
}

/// Local affine piece of `G(πu)` at `t`, with slope and intercept rounded to
/// 2^-40 and radius half the distance to the piece ends.
fn local_piece(g: &SmoothedFn, gu: &ClosureFn, t: &Rational, p: &Rational, q: &Rational) -> LocalPiece {
    let radius = rq::min(&(t - p), &(q - t)) / rq::int(2);
    let x = elementary::pi_interval(80).scale(t);
    let d = g.derivative(1, &x, 64).expect("series derivatives");
    let slope = rq::floor_dyadic(&(d.mid() * elementary::pi_interval(80).mid()), 40);
    let v = gu.eval(&RationalInterval::point(t.clone()), 64).mid();
    let intercept = rq::floor_dyadic(&(v - &slope * t), 40);
    LocalPiece { radius, slope, intercept }
}

type Pieces = Vec<(Rational, Rational)>;

/// Grid points certified apart from the exceptional set, and the open
/// complementary pieces in `(-1, 1)`.
fn admissible_points(x: &Exceptional, grid: &[Rational], stage: usize) -> Result<(Vec<Rational>, Pieces)> {
    let amb = opensets::unit_ambient();
    let between = |pts: &[Rational]| -> Result<Pieces> {
        let mut cuts: Vec<Rational> = pts.iter().filter(|u| u.abs() < rq::int(1)).cloned().collect();
        cuts.push(amb.0.clone());
        cuts.push(amb.1.clone());
        cuts.sort();
        cuts.dedup();
        Ok(cuts.windows(2).map(|w| (w[0].clone(), w[1].clone())).collect())
    };
    let parse_all = |v: &[String]| v.iter().map(|s| rq::parse(s)).collect::<Result<Vec<_>>>();
    match x {
        Exceptional::None => Ok((grid.to_vec(), vec![amb])),
        Exceptional::Finite { points } => {
            let e = parse_all(points)?;
            Ok((grid.iter().filter(|u| !e.contains(u)).cloned().collect(), between(&e)?))
        }
        Exceptional::Enumeration { points } => {
            let e = parse_all(points)?;
            let mut adm: Vec<Rational> = grid.iter().filter(|u| !e.contains(u)).cloned().collect();
            let f: Vec<CReal> = e.iter().cloned().map(CReal::from_rational).collect();
            let tree: Arc<dyn SeparatedTree> = Arc::new(ThirdsTree { lo: amb.0.clone(), hi: amb.1.clone() });
            let av = schwarz::diagonal_avoid(tree, &f)?;
            if !schwarz::check_avoidance(&av, &f, 80) {
                return Err(Error::ToleranceNotMet("avoidance point failed verification".into()));
            }
            adm.push(av.node.0.clone());
            Ok((adm, between(&e)?))
        }
        Exceptional::Cbset { tree } => {
            if tree.a < amb.0 || tree.b > amb.1 {
                return Err(Error::Precondition("tree interval must lie in [-1, 1]".into()));
            }
            let tol = rq::pow2(-60);
            let adm = grid.iter().filter(|u| cbsets::distance_to(tree, u, &tol).lo.is_positive()).cloned().collect();
            let g = cbsets::cb_complement_stage(tree, stage);
            let mut pieces: Pieces = g.components().to_vec();
            if amb.0 < tree.a {
                pieces.push((amb.0.clone(), tree.a.clone()));
            }
            if tree.b < amb.1 {
                pieces.push((tree.b.clone(), amb.1.clone()));
            }
            Ok((adm, pieces))
        }
    }
}
