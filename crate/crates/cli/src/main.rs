//! Command-line front end for the certificate and analysis operations:
//! power-sum surface construction, perturbed-Fermat hyperbolicity checks,
//! zero-sum partition detection, Grassmannian stratum scans, jet-differential
//! algebra, and value-distribution profiles.
//!
//! Reports are single-line JSON records on stdout (one object per line, each
//! echoing the effective run configuration); diagnostics go to stderr.
//! Exit codes: 0 success or certified, 2 rejected with a witness, 3
//! undecided at the precision cap, 1 usage or input error.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::Write;
use std::path::PathBuf;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde_json::{json, Value};

use hypjet_core::borel::find_borel_partition;
use hypjet_core::grassmann::{prop4_threshold_scan, StratumVerdict};
use hypjet_core::hypersurf::{
    check_diagonal_conditions, check_perturbed_fermat, construct_power_sum_surface,
    PerturbedFermatSurface, Verdict,
};
use hypjet_core::jet::{wronskian_series, CurveGerm};
use hypjet_core::nevanlinna::{
    characteristic, curvature_identity_check, defect_estimate, disc_grid, EllipticModel,
    HolomorphicSample, MeromorphicSample,
};
use hypjet_core::rational::{format_rational, parse_rational, Rational};
use hypjet_core::textio::{format_jet, format_poly, parse_jet, parse_poly};
use hypjet_core::univar::UniPoly;
use hypjet_core::{Polynomial, TruncatedSeries, VarSet};

const EXIT_OK: i32 = 0;
const EXIT_USAGE: i32 = 1;
const EXIT_REJECTED: i32 = 2;
const EXIT_UNKNOWN: i32 = 3;

#[derive(Parser)]
#[command(
    name = "hypjet",
    version,
    about = "Certificates and analysis for hyperbolic hypersurfaces, jet differentials, \
             and value-distribution profiles",
    after_help = "Exit codes: 0 success or certified; 2 rejected with a witness; \
                  3 undecided at the precision cap; 1 usage or input error.\n\
                  HYPJET_PRECISION sets the default precision cap in bits."
)]
struct Cli {
    /// RNG seed for seeded constructions; echoed into every report.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Ball-precision cap in bits; the retry ladder doubles from 256 up to
    /// the cap. Defaults to HYPJET_PRECISION or 4096.
    #[arg(long, global = true)]
    precision: Option<usize>,

    /// Truncation order for series-valued inputs and outputs.
    #[arg(long, global = true)]
    truncation: Option<usize>,

    /// Also write the JSON report lines to this file.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    /// Stderr chatter: 0 silent, 1 progress, 2 detail.
    #[arg(long, global = true)]
    verbosity: Option<u8>,

    /// key=value file supplying defaults for seed, precision, truncation,
    /// output, and verbosity; explicit flags win.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Render aligned tables on stdout instead of JSON lines. File output,
    /// if requested, stays JSON.
    #[arg(long, global = true)]
    human: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build certified objects.
    #[command(subcommand)]
    Construct(ConstructCmd),
    /// Hyperbolicity certificate checks.
    #[command(subcommand)]
    Check(CheckCmd),
    /// Partition analysis for zero-sum series collections.
    #[command(subcommand)]
    Borel(BorelCmd),
    /// Stratum codimension scans over block partitions.
    #[command(subcommand)]
    Grassmann(GrassmannCmd),
    /// Jet-differential algebra operations.
    #[command(subcommand)]
    Jet(JetCmd),
    /// Value-distribution profiles and curvature checks.
    #[command(subcommand)]
    Nev(NevCmd),
}

#[derive(Subcommand)]
enum ConstructCmd {
    /// Draw a power-sum surface: 4n-3 seeded rational forms, each raised
    /// to the exponent 1 + N(N-2), with its emptiness certificate.
    PowerSum(PowerSumArgs),
}

#[derive(Args)]
struct PowerSumArgs {
    /// Surface dimension (at least 2).
    #[arg(long)]
    n: usize,
    /// Also emit the fully expanded defining polynomial (dimension <= 3).
    #[arg(long)]
    emit_poly: bool,
}

#[derive(Subcommand)]
enum CheckCmd {
    /// Check the distinct-roots and nonzero-Hessian conditions for a
    /// perturbed Fermat surface x0^n + x1^n + x2^n + x3^n + x3^2 g.
    Surface(SurfaceArgs),
    /// Same check for the diagonal family g = a0 x0^2 + a1 x1^2 + a2 x2^2,
    /// decided from the coefficients directly.
    Diagonal(DiagonalArgs),
}

#[derive(Args)]
struct SurfaceArgs {
    /// Fermat degree (at least 11).
    #[arg(long)]
    n: usize,
    /// Quadratic perturbation g in variables x0..x3, e.g. "x0^2 + 2*x1*x2".
    #[arg(long, allow_hyphen_values = true)]
    g: String,
}

#[derive(Args)]
struct DiagonalArgs {
    /// Fermat degree (at least 11).
    #[arg(long)]
    n: usize,
    /// Rational coefficient a0 (e.g. "2" or "-1/3").
    #[arg(long, allow_hyphen_values = true)]
    a0: String,
    /// Rational coefficient a1.
    #[arg(long, allow_hyphen_values = true)]
    a1: String,
    /// Rational coefficient a2.
    #[arg(long, allow_hyphen_values = true)]
    a2: String,
}

#[derive(Subcommand)]
enum BorelCmd {
    /// Detect a proportionality partition of series summing to zero:
    /// blocks of constant-multiple members, each block summing to zero.
    Partition(PartitionArgs),
}

#[derive(Args)]
struct PartitionArgs {
    /// Semicolon-separated series, each a comma list of rational
    /// coefficients from degree zero, padded to the truncation order.
    #[arg(long, allow_hyphen_values = true)]
    series: String,
}

#[derive(Subcommand)]
enum GrassmannCmd {
    /// Enumerate every block partition of the given forms and plane
    /// dimension, reporting stratum codimension against the ambient count.
    Scan(ScanArgs),
}

#[derive(Args)]
struct ScanArgs {
    /// Ambient projective dimension (at least 3).
    #[arg(long)]
    m: usize,
    /// Number of hyperplane forms (at least 2).
    #[arg(long, alias = "N")]
    forms: usize,
}

#[derive(Subcommand)]
enum JetCmd {
    /// Wronskian of truncated series, with its vanishing status.
    Wronskian(JetWronskianArgs),
    /// Pull a jet differential back along a curve germ.
    Pullback(JetPullbackArgs),
    /// Total derivative of a jet differential.
    Derive(JetDeriveArgs),
}

#[derive(Args)]
struct JetWronskianArgs {
    /// Semicolon-separated series, each a comma list of rational
    /// coefficients from degree zero.
    #[arg(long, allow_hyphen_values = true)]
    series: String,
}

#[derive(Args)]
struct JetPullbackArgs {
    /// Number of coordinates z1..zn.
    #[arg(long)]
    n: usize,
    /// Jet differential, e.g. "z1*(d z2) - (d2 z1)*(d z2)^2".
    #[arg(long, allow_hyphen_values = true)]
    expr: String,
    /// Germ components as semicolon-separated coefficient lists.
    #[arg(long, allow_hyphen_values = true)]
    germ: String,
}

#[derive(Args)]
struct JetDeriveArgs {
    /// Number of coordinates z1..zn.
    #[arg(long)]
    n: usize,
    /// Jet differential in z1..zn.
    #[arg(long, allow_hyphen_values = true)]
    expr: String,
}

#[derive(Subcommand)]
enum NevCmd {
    /// Characteristic profile T(r) = A(r) + N(r) over a radius grid.
    Profile(ProfileArgs),
    /// Proximity/characteristic profile for a linear map into an elliptic
    /// curve, against a translated theta divisor.
    Defect(DefectArgs),
    /// Pointwise residual of the curvature identity for a holomorphic map.
    Curvature(CurvatureArgs),
}

#[derive(Args)]
struct ProfileArgs {
    /// Function spec "rational:<num>;<den>" with comma coefficient lists
    /// from degree zero ("rational:<num>/<den>" works when no coefficient
    /// itself contains a slash); the denominator defaults to 1.
    #[arg(long, allow_hyphen_values = true)]
    f: String,
    /// Optional target a: profile 1/(F - a) instead of F.
    #[arg(long, allow_hyphen_values = true)]
    target: Option<String>,
    /// Smallest radius for log grids.
    #[arg(long, default_value_t = 1.0)]
    rmin: f64,
    /// Largest radius for log grids.
    #[arg(long, default_value_t = 1000.0)]
    rmax: f64,
    /// Radius grid: "log:K" for K log-spaced radii in [rmin, rmax], or an
    /// increasing comma list.
    #[arg(long, default_value = "log:32")]
    grid: String,
    /// Quadrature nodes per circle.
    #[arg(long, default_value_t = 256)]
    nodes: usize,
}

#[derive(Args)]
struct DefectArgs {
    /// Lattice parameter with positive imaginary part, e.g. "i" or
    /// "0.3+1.2i".
    #[arg(long, default_value = "i", allow_hyphen_values = true)]
    tau: String,
    /// Speed of the linear map zeta -> c zeta; must be nonzero.
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    c: String,
    /// Divisor point on the curve.
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    divisor: String,
    /// Radius grid: "log:K" or an increasing comma list.
    #[arg(long, default_value = "5,10,20,40")]
    grid: String,
    /// Smallest radius for log grids.
    #[arg(long, default_value_t = 1.0)]
    rmin: f64,
    /// Largest radius for log grids.
    #[arg(long, default_value_t = 40.0)]
    rmax: f64,
    /// Quadrature nodes per circle.
    #[arg(long, default_value_t = 512)]
    nodes: usize,
}

#[derive(Args)]
struct CurvatureArgs {
    /// Map under test: "coordinate", "square", or "exp:K" for the K-term
    /// exponential series.
    #[arg(long, default_value = "coordinate")]
    w: String,
    /// Disc radius for the evaluation grid.
    #[arg(long, default_value_t = 1.0)]
    radius: f64,
    /// Grid points per axis.
    #[arg(long, default_value_t = 25)]
    per_axis: usize,
    /// Finite-difference step, in (0, 0.1).
    #[arg(long, default_value_t = 1e-3)]
    step: f64,
}

/// Effective run configuration, echoed verbatim into every report line.
#[derive(Clone, serde::Serialize)]
struct RunConfig {
    seed: u64,
    precision: usize,
    truncation: usize,
    output: Option<String>,
    verbosity: u8,
}

impl RunConfig {
    fn resolve(cli: &Cli) -> anyhow::Result<Self> {
        let file = match &cli.config {
            Some(path) => load_config_file(path)?,
            None => BTreeMap::new(),
        };
        let from_file = |key: &str| file.get(key).cloned();
        let parse_field = |key: &str| -> anyhow::Result<Option<u64>> {
            from_file(key)
                .map(|v| {
                    v.parse::<u64>()
                        .map_err(|e| anyhow!("config key {key}={v:?}: {e}"))
                })
                .transpose()
        };
        let env_precision = match std::env::var("HYPJET_PRECISION") {
            Ok(v) => Some(
                v.parse::<usize>()
                    .map_err(|e| anyhow!("HYPJET_PRECISION={v:?}: {e}"))?,
            ),
            Err(_) => None,
        };
        Ok(RunConfig {
            seed: cli.seed.or(parse_field("seed")?).unwrap_or(0),
            precision: cli
                .precision
                .or(parse_field("precision")?.map(|v| v as usize))
                .or(env_precision)
                .unwrap_or(4096),
            truncation: cli
                .truncation
                .or(parse_field("truncation")?.map(|v| v as usize))
                .unwrap_or(24),
            output: cli
                .output
                .as_ref()
                .map(|p| p.display().to_string())
                .or(from_file("output")),
            verbosity: cli
                .verbosity
                .or(parse_field("verbosity")?.map(|v| v as u8))
                .unwrap_or(1),
        })
    }

    /// Doubling precision ladder from 256 bits capped at the configured
    /// maximum (a cap below 256 gives the single rung [cap]).
    fn ladder(&self) -> Vec<usize> {
        let cap = self.precision.max(64);
        let mut rungs = Vec::new();
        let mut p = 256usize.min(cap);
        loop {
            rungs.push(p);
            if p.saturating_mul(2) > cap {
                return rungs;
            }
            p *= 2;
        }
    }

    fn note(&self, level: u8, msg: impl AsRef<str>) {
        if self.verbosity >= level {
            eprintln!("hypjet: {}", msg.as_ref());
        }
    }
}

fn load_config_file(path: &PathBuf) -> anyhow::Result<BTreeMap<String, String>> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading config file {}", path.display()))?;
    let mut map = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| anyhow!("config line {}: expected key=value", lineno + 1))?;
        map.insert(key.trim().to_string(), value.trim().to_string());
    }
    Ok(map)
}

/// Report sink: JSON lines on stdout (or aligned tables under --human),
/// with an optional JSON copy to a file. Every line carries the config
/// echo; each line is written with a single call so concurrent writers
/// could never interleave partial records.
struct Reporter {
    human: bool,
    file: Option<File>,
    config: Value,
}

impl Reporter {
    fn new(cfg: &RunConfig, human: bool) -> anyhow::Result<Self> {
        let file = match &cfg.output {
            Some(path) => Some(
                File::create(path).with_context(|| format!("creating output file {path}"))?,
            ),
            None => None,
        };
        Ok(Reporter {
            human,
            file,
            config: serde_json::to_value(cfg)?,
        })
    }

    fn record(&mut self, kind: &str, value: Value) -> anyhow::Result<()> {
        let obj = self.with_envelope(kind, value)?;
        if self.human {
            let mut block = format!("== {kind}\n");
            let map = obj.as_object().expect("envelope is an object");
            let width = map
                .keys()
                .filter(|k| *k != "kind")
                .map(|k| k.len())
                .max()
                .unwrap_or(0);
            for (key, val) in map {
                if key == "kind" {
                    continue;
                }
                block.push_str(&format!("  {key:<width$}  {}\n", human_value(val)));
            }
            write_stdout(&block)?;
        } else {
            write_stdout(&format!("{}\n", Value::Object(obj.as_object().unwrap().clone())))?;
        }
        self.copy_to_file(&obj)
    }

    /// One report line per row in JSON mode; a single aligned table under
    /// --human. Rows must be objects containing the given columns.
    fn rows(&mut self, kind: &str, columns: &[&str], rows: &[Value]) -> anyhow::Result<()> {
        if self.human {
            let mut cells: Vec<Vec<String>> = Vec::with_capacity(rows.len() + 1);
            cells.push(columns.iter().map(|c| c.to_string()).collect());
            for row in rows {
                let obj = row.as_object().expect("row is an object");
                cells.push(
                    columns
                        .iter()
                        .map(|c| obj.get(*c).map_or_else(|| "-".into(), human_value))
                        .collect(),
                );
            }
            let widths: Vec<usize> = (0..columns.len())
                .map(|i| cells.iter().map(|r| r[i].len()).max().unwrap_or(0))
                .collect();
            let mut block = format!("== {kind}\n");
            for row in &cells {
                block.push_str("  ");
                for (i, cell) in row.iter().enumerate() {
                    block.push_str(&format!("{cell:<w$}  ", w = widths[i]));
                }
                block.truncate(block.trim_end_matches(' ').len());
                block.push('\n');
            }
            write_stdout(&block)?;
            for row in rows {
                let obj = self.with_envelope(kind, row.clone())?;
                self.copy_to_file(&obj)?;
            }
        } else {
            for row in rows {
                self.record(kind, row.clone())?;
            }
        }
        Ok(())
    }

    fn with_envelope(&self, kind: &str, value: Value) -> anyhow::Result<Value> {
        let Value::Object(mut map) = value else {
            bail!("report payload must be a JSON object");
        };
        map.insert("kind".into(), Value::String(kind.into()));
        map.insert("config".into(), self.config.clone());
        Ok(Value::Object(map))
    }

    fn copy_to_file(&mut self, obj: &Value) -> anyhow::Result<()> {
        if let Some(f) = &mut self.file {
            f.write_all(format!("{obj}\n").as_bytes())
                .context("writing output file")?;
        }
        Ok(())
    }
}

fn write_stdout(s: &str) -> anyhow::Result<()> {
    let mut out = std::io::stdout();
    out.write_all(s.as_bytes())?;
    out.flush()?;
    Ok(())
}

fn human_value(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        other => other.to_string(),
    }
}

fn main() {
    std::process::exit(run());
}

fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            return code;
        }
    };
    let cfg = match RunConfig::resolve(&cli) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("hypjet: error: {e:#}");
            return EXIT_USAGE;
        }
    };
    let mut reporter = match Reporter::new(&cfg, cli.human) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("hypjet: error: {e:#}");
            return EXIT_USAGE;
        }
    };
    match dispatch(&cli.command, &cfg, &mut reporter) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("hypjet: error: {e:#}");
            EXIT_USAGE
        }
    }
}

fn dispatch(cmd: &Command, cfg: &RunConfig, rep: &mut Reporter) -> anyhow::Result<i32> {
    match cmd {
        Command::Construct(ConstructCmd::PowerSum(args)) => construct_power_sum(args, cfg, rep),
        Command::Check(CheckCmd::Surface(args)) => check_surface(args, cfg, rep),
        Command::Check(CheckCmd::Diagonal(args)) => check_diagonal(args, cfg, rep),
        Command::Borel(BorelCmd::Partition(args)) => borel_partition(args, cfg, rep),
        Command::Grassmann(GrassmannCmd::Scan(args)) => grassmann_scan(args, cfg, rep),
        Command::Jet(JetCmd::Wronskian(args)) => jet_wronskian(args, cfg, rep),
        Command::Jet(JetCmd::Pullback(args)) => jet_pullback(args, cfg, rep),
        Command::Jet(JetCmd::Derive(args)) => jet_derive(args, cfg, rep),
        Command::Nev(NevCmd::Profile(args)) => nev_profile(args, cfg, rep),
        Command::Nev(NevCmd::Defect(args)) => nev_defect(args, cfg, rep),
        Command::Nev(NevCmd::Curvature(args)) => nev_curvature(args, cfg, rep),
    }
}

fn verdict_exit(v: Verdict) -> i32 {
    match v {
        Verdict::Certified => EXIT_OK,
        Verdict::Rejected => EXIT_REJECTED,
        Verdict::Unknown => EXIT_UNKNOWN,
    }
}

fn construct_power_sum(
    args: &PowerSumArgs,
    cfg: &RunConfig,
    rep: &mut Reporter,
) -> anyhow::Result<i32> {
    cfg.note(1, format!("constructing power-sum surface at n={} seed={}", args.n, cfg.seed));
    let surface = construct_power_sum_surface(args.n, cfg.seed)?;
    let forms: Vec<Vec<String>> = (0..surface.num_forms())
        .map(|j| surface.forms().form(j).iter().map(format_rational).collect())
        .collect();
    let mut payload = json!({
        "n": args.n,
        "num_forms": surface.num_forms(),
        "power": surface.power(),
        "scan_threshold": surface.scan().threshold,
        "uniformly_empty": surface.scan().uniformly_empty,
        "forms": forms,
    });
    if args.emit_poly {
        let poly = surface
            .defining_polynomial()
            .context("expanding the defining polynomial")?;
        payload["polynomial"] = Value::String(format_poly(&poly));
    }
    rep.record("power-sum-surface", payload)?;
    Ok(EXIT_OK)
}

fn check_surface(args: &SurfaceArgs, cfg: &RunConfig, rep: &mut Reporter) -> anyhow::Result<i32> {
    let vars = VarSet::xs(4);
    let g: Polynomial<Rational> =
        parse_poly(&args.g, &vars).with_context(|| format!("parsing --g {:?}", args.g))?;
    let surface = PerturbedFermatSurface::new(args.n, &g)?;
    let ladder = cfg.ladder();
    cfg.note(1, format!("checking collapse patterns at n={} on ladder {ladder:?}", args.n));
    let report = check_perturbed_fermat(&surface, &ladder)?;
    let code = verdict_exit(report.verdict);
    rep.record(
        "surface-check",
        json!({
            "n": args.n,
            "g": format_poly(&g),
            "report": serde_json::to_value(&report)?,
        }),
    )?;
    Ok(code)
}

fn check_diagonal(args: &DiagonalArgs, cfg: &RunConfig, rep: &mut Reporter) -> anyhow::Result<i32> {
    let a = [
        parse_rational(&args.a0).with_context(|| format!("parsing --a0 {:?}", args.a0))?,
        parse_rational(&args.a1).with_context(|| format!("parsing --a1 {:?}", args.a1))?,
        parse_rational(&args.a2).with_context(|| format!("parsing --a2 {:?}", args.a2))?,
    ];
    let ladder = cfg.ladder();
    cfg.note(1, format!("checking diagonal conditions at n={} on ladder {ladder:?}", args.n));
    let report = check_diagonal_conditions(args.n, &a, &ladder)?;
    let code = verdict_exit(report.verdict);
    rep.record(
        "diagonal-check",
        json!({
            "n": args.n,
            "a": a.iter().map(format_rational).collect::<Vec<_>>(),
            "report": serde_json::to_value(&report)?,
        }),
    )?;
    Ok(code)
}

fn borel_partition(
    args: &PartitionArgs,
    cfg: &RunConfig,
    rep: &mut Reporter,
) -> anyhow::Result<i32> {
    let series = parse_series_list(&args.series, cfg.truncation)?;
    cfg.note(1, format!("analysing {} series through order {}", series.len(), cfg.truncation));

    // Surface the zero-sum precondition as a witness instead of an input
    // error: the collective sum must vanish for any partition to exist.
    let mut total = TruncatedSeries::zero(cfg.truncation);
    for s in &series {
        total = total.add(s);
    }
    if !total.is_zero_through_order() {
        let order = (0..=total.order())
            .find(|&t| total.coeff(t) != Rational::from_integer(0.into()))
            .expect("a nonzero series has a nonzero coefficient");
        rep.record(
            "borel-partition",
            json!({
                "verdict": "Rejected",
                "witness": format!(
                    "collective sum has nonzero coefficient {} at order {order}",
                    format_rational(&total.coeff(order))
                ),
            }),
        )?;
        return Ok(EXIT_REJECTED);
    }

    match find_borel_partition(&series)? {
        Some(partition) => {
            let blocks: Vec<Value> = partition
                .blocks
                .iter()
                .map(|b| {
                    json!({
                        "indices": b.indices,
                        "representative": b.representative,
                        "constants": b
                            .constants
                            .iter()
                            .map(|(i, c)| json!([i, format_rational(c)]))
                            .collect::<Vec<_>>(),
                        "identically_zero": b.identically_zero,
                    })
                })
                .collect();
            let verified = partition.verify(&series);
            rep.record(
                "borel-partition",
                json!({
                    "verdict": "Certified",
                    "q": partition.q(),
                    "blocks": blocks,
                    "verified_through_order": partition.verified_through_order,
                    "reverified": verified,
                }),
            )?;
            Ok(if verified { EXIT_OK } else { EXIT_REJECTED })
        }
        None => {
            rep.record(
                "borel-partition",
                json!({
                    "verdict": "Rejected",
                    "witness": "no grouping into proportional zero-sum blocks exists",
                }),
            )?;
            Ok(EXIT_REJECTED)
        }
    }
}

fn grassmann_scan(args: &ScanArgs, cfg: &RunConfig, rep: &mut Reporter) -> anyhow::Result<i32> {
    cfg.note(1, format!("scanning partitions of {} forms at m={}", args.forms, args.m));
    let scan = prop4_threshold_scan(args.m, args.forms)?;
    let rows: Vec<Value> = scan
        .cases
        .iter()
        .map(|c| serde_json::to_value(c).map_err(Into::into))
        .collect::<anyhow::Result<_>>()?;
    rep.rows(
        "stratum-case",
        &["k", "m", "block_sizes", "codimension", "ambient_dimension", "verdict"],
        &rows,
    )?;
    let witness = scan
        .cases
        .iter()
        .find(|c| c.verdict == StratumVerdict::PossiblyNonempty);
    rep.record(
        "scan-summary",
        json!({
            "m": scan.m,
            "forms": scan.n_forms,
            "threshold": scan.threshold,
            "uniformly_empty": scan.uniformly_empty,
            "cases": scan.cases.len(),
            "witness": witness.map(|c| json!({
                "k": c.k,
                "block_sizes": c.block_sizes,
                "codimension": c.codimension,
                "ambient_dimension": c.ambient_dimension,
            })),
        }),
    )?;
    Ok(if scan.uniformly_empty { EXIT_OK } else { EXIT_REJECTED })
}

fn jet_wronskian(
    args: &JetWronskianArgs,
    cfg: &RunConfig,
    rep: &mut Reporter,
) -> anyhow::Result<i32> {
    let series = parse_series_list(&args.series, cfg.truncation)?;
    cfg.note(1, format!("Wronskian of {} series", series.len()));
    let w = wronskian_series(&series)?;
    rep.record(
        "wronskian",
        json!({
            "entries": series.len(),
            "order": w.order(),
            "coefficients": series_coeffs(&w),
            "is_zero_through_order": w.is_zero_through_order(),
        }),
    )?;
    Ok(EXIT_OK)
}

fn jet_pullback(
    args: &JetPullbackArgs,
    cfg: &RunConfig,
    rep: &mut Reporter,
) -> anyhow::Result<i32> {
    let jd = parse_jet(&args.expr, args.n).with_context(|| format!("parsing --expr {:?}", args.expr))?;
    let comps = parse_series_list(&args.germ, cfg.truncation)?;
    if comps.len() != args.n {
        bail!("germ has {} components, expected n={}", comps.len(), args.n);
    }
    let germ = CurveGerm::new(comps)?;
    cfg.note(1, format!("pulling back a jet differential with {} terms", jd.num_terms()));
    let pulled = jd.pullback(&germ)?;
    rep.record(
        "jet-pullback",
        json!({
            "n": args.n,
            "expr": format_jet(&jd),
            "weight": jd.weight_homogeneous(),
            "order": pulled.order(),
            "coefficients": series_coeffs(&pulled),
        }),
    )?;
    Ok(EXIT_OK)
}

fn jet_derive(args: &JetDeriveArgs, cfg: &RunConfig, rep: &mut Reporter) -> anyhow::Result<i32> {
    let jd = parse_jet(&args.expr, args.n).with_context(|| format!("parsing --expr {:?}", args.expr))?;
    cfg.note(1, format!("differentiating a jet differential with {} terms", jd.num_terms()));
    let derived = jd.total_derivative();
    rep.record(
        "jet-derivative",
        json!({
            "n": args.n,
            "expr": format_jet(&jd),
            "weight": jd.weight_homogeneous(),
            "derivative": format_jet(&derived),
            "derivative_weight": derived.weight_homogeneous(),
        }),
    )?;
    Ok(EXIT_OK)
}

fn nev_profile(args: &ProfileArgs, cfg: &RunConfig, rep: &mut Reporter) -> anyhow::Result<i32> {
    let base = parse_sample(&args.f)?;
    let sample = match &args.target {
        Some(spec) => {
            let a = parse_complex(spec).map_err(|e| anyhow!("parsing --target: {e}"))?;
            base.shifted_reciprocal(a)?
        }
        None => base,
    };
    let grid = parse_grid(&args.grid, args.rmin, args.rmax)?;
    cfg.note(
        1,
        format!("profiling {} over {} radii at {} nodes", sample.label(), grid.len(), args.nodes),
    );
    let profile = characteristic(&sample, &grid, args.nodes)?;
    let rows: Vec<Value> = profile
        .records
        .iter()
        .map(|r| serde_json::to_value(r).map_err(Into::into))
        .collect::<anyhow::Result<_>>()?;
    rep.rows(
        "profile-record",
        &["r", "A_term", "N_term", "T", "m", "ratio", "quad_error"],
        &rows,
    )?;
    rep.record(
        "profile-summary",
        json!({
            "f": sample.label(),
            "radii": profile.records.len(),
            "nodes": profile.nodes,
            "degree_check": serde_json::to_value(&profile.degree_check)?,
        }),
    )?;
    Ok(EXIT_OK)
}

fn nev_defect(args: &DefectArgs, cfg: &RunConfig, rep: &mut Reporter) -> anyhow::Result<i32> {
    let tau = parse_complex(&args.tau).map_err(|e| anyhow!("parsing --tau: {e}"))?;
    let c = parse_complex(&args.c).map_err(|e| anyhow!("parsing --c: {e}"))?;
    let divisor = parse_complex(&args.divisor).map_err(|e| anyhow!("parsing --divisor: {e}"))?;
    let model = EllipticModel::new(tau, divisor)?;
    let grid = parse_grid(&args.grid, args.rmin, args.rmax)?;
    cfg.note(
        1,
        format!("defect profile at tau={tau} c={c} over {} radii at {} nodes", grid.len(), args.nodes),
    );
    let profile = defect_estimate(&model, c, &grid, args.nodes)?;
    let rows: Vec<Value> = profile
        .records
        .iter()
        .map(|r| serde_json::to_value(r).map_err(Into::into))
        .collect::<anyhow::Result<_>>()?;
    rep.rows("defect-record", &["r", "m", "T", "ratio", "quad_error"], &rows)?;
    rep.record(
        "defect-summary",
        json!({
            "tau": [tau.re, tau.im],
            "c": [c.re, c.im],
            "divisor": [divisor.re, divisor.im],
            "growth_exponent": profile.growth_exponent,
            "nodes": profile.nodes,
            "nudged": profile.nudged,
        }),
    )?;
    Ok(EXIT_OK)
}

fn nev_curvature(args: &CurvatureArgs, cfg: &RunConfig, rep: &mut Reporter) -> anyhow::Result<i32> {
    let w = parse_map(&args.w)?;
    let grid = disc_grid(args.radius, args.per_axis);
    cfg.note(1, format!("curvature residual for {} on {} points", w.label(), grid.len()));
    let report = curvature_identity_check(&w, args.step, &grid)?;
    rep.record(
        "curvature-check",
        json!({
            "w": w.label(),
            "radius": args.radius,
            "report": serde_json::to_value(&report)?,
        }),
    )?;
    Ok(EXIT_OK)
}

fn parse_series_list(spec: &str, truncation: usize) -> anyhow::Result<Vec<TruncatedSeries<Rational>>> {
    let mut out = Vec::new();
    for (idx, chunk) in spec.split(';').enumerate() {
        let mut coeffs = parse_coeff_list(chunk)
            .with_context(|| format!("series {idx} ({chunk:?})"))?;
        if coeffs.len() > truncation + 1 {
            bail!(
                "series {idx} has {} coefficients but the truncation order is {truncation}",
                coeffs.len() - 1
            );
        }
        coeffs.resize(truncation + 1, Rational::from_integer(0.into()));
        out.push(TruncatedSeries::from_coeffs(coeffs)?);
    }
    Ok(out)
}

fn parse_coeff_list(spec: &str) -> anyhow::Result<Vec<Rational>> {
    spec.split(',')
        .map(|tok| parse_rational(tok).map_err(|e| anyhow!("coefficient {tok:?}: {e}")))
        .collect()
}

fn series_coeffs(s: &TruncatedSeries<Rational>) -> Vec<String> {
    (0..=s.order()).map(|t| format_rational(&s.coeff(t))).collect()
}

/// "rational:<num>;<den>" with comma coefficient lists; a single "/" may
/// replace ";" when no coefficient itself contains a slash; the denominator
/// defaults to 1.
fn parse_sample(spec: &str) -> anyhow::Result<MeromorphicSample> {
    let rest = spec
        .strip_prefix("rational:")
        .ok_or_else(|| anyhow!("function spec must start with \"rational:\", got {spec:?}"))?;
    let (num_s, den_s) = if let Some((a, b)) = rest.split_once(';') {
        (a, b)
    } else if rest.matches('/').count() == 1 {
        rest.split_once('/').expect("exactly one slash")
    } else if rest.contains('/') {
        bail!(
            "ambiguous spec {rest:?}: separate numerator and denominator with ';' \
             when coefficients contain '/'"
        );
    } else {
        (rest, "1")
    };
    let num = UniPoly::new(parse_coeff_list(num_s).context("numerator")?);
    let den = UniPoly::new(parse_coeff_list(den_s).context("denominator")?);
    Ok(MeromorphicSample::rational(&num, &den)?)
}

fn parse_map(spec: &str) -> anyhow::Result<HolomorphicSample> {
    if let Some(k) = spec.strip_prefix("exp:") {
        let terms: usize = k.parse().map_err(|e| anyhow!("exp term count {k:?}: {e}"))?;
        if terms < 2 {
            bail!("exp series needs at least 2 terms");
        }
        return Ok(HolomorphicSample::exp_series(terms));
    }
    match spec {
        "coordinate" => Ok(HolomorphicSample::coordinate()),
        "square" => Ok(HolomorphicSample::coordinate_square()),
        other => bail!("unknown map {other:?}: expected coordinate, square, or exp:K"),
    }
}

fn parse_grid(spec: &str, rmin: f64, rmax: f64) -> anyhow::Result<Vec<f64>> {
    if let Some(k) = spec.strip_prefix("log:") {
        let count: usize = k.parse().map_err(|e| anyhow!("grid count {k:?}: {e}"))?;
        if count < 2 {
            bail!("log grid needs at least 2 radii");
        }
        if !(rmin > 0.0) || !(rmax > rmin) {
            bail!("log grid needs 0 < rmin < rmax, got rmin={rmin} rmax={rmax}");
        }
        return Ok((0..count)
            .map(|i| rmin * (rmax / rmin).powf(i as f64 / (count - 1) as f64))
            .collect());
    }
    let grid: Vec<f64> = spec
        .split(',')
        .map(|tok| {
            tok.trim()
                .parse::<f64>()
                .map_err(|e| anyhow!("radius {tok:?}: {e}"))
        })
        .collect::<anyhow::Result<_>>()?;
    if grid.is_empty() || grid[0] <= 0.0 || grid.windows(2).any(|w| w[0] >= w[1]) {
        bail!("grid must be a strictly increasing list of positive radii");
    }
    Ok(grid)
}

/// Accepts "a", "bi", "i", "-i", and "a+bi" forms, e.g. "2", "1.5-0.5i".
fn parse_complex(spec: &str) -> Result<Complex64, String> {
    let t: String = spec.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        return Err("empty complex literal".into());
    }
    let parse_part = |s: &str, what: &str| -> Result<f64, String> {
        s.parse::<f64>().map_err(|e| format!("{what} {s:?}: {e}"))
    };
    let bytes = t.as_bytes();
    let mut split = None;
    for i in (1..bytes.len()).rev() {
        if (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'e' | b'E') {
            split = Some(i);
            break;
        }
    }
    let (re_str, im_str) = match split {
        Some(i) if t.ends_with('i') => (&t[..i], &t[i..]),
        _ if t.ends_with('i') => ("", t.as_str()),
        _ => (t.as_str(), ""),
    };
    let re = if re_str.is_empty() {
        0.0
    } else {
        parse_part(re_str, "real part")?
    };
    let im = if im_str.is_empty() {
        0.0
    } else {
        match &im_str[..im_str.len() - 1] {
            "" | "+" => 1.0,
            "-" => -1.0,
            body => parse_part(body, "imaginary part")?,
        }
    };
    Ok(Complex64::new(re, im))
}
