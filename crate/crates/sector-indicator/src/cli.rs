//! Batch command-line front end: evaluate transforms and inversions, test
//! growth-set membership, compute convexity bounds, run the Polya baseline,
//! and gate the named verification suites.
//!
//! Exit codes: 0 success (all cases pass), 1 computation or verification
//! failure, 2 invalid input. Outputs are deterministic: identical flags give
//! byte-identical JSON/CSV.

use std::io::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::functions::{catalog_lookup, AnalyticFunctionModel, GrowthEnvelope, OneVarModel};
use crate::geometry::{build_lambda, GammaContour, SectorPair};
use crate::indicator::{convexity_bound, estimate_indicator_1d, membership_test, GrowthGrid};
use crate::inversion::{invert_2d, invert_2d_deformed, ContourSpec, InversionPlan};
use crate::polya::{borel_eval, inferred_type_radius, parse_series_text, polya_reconstruct, PowerSeriesET};
use crate::quadrature::QuadratureConfig;
use crate::transform::ConcatenatedLaplace;

/// Environment variable capping the rayon worker count.
pub const THREADS_ENV: &str = "SECTOR_INDICATOR_THREADS";

#[derive(Parser, Debug)]
#[command(
    name = "sector-indicator",
    version,
    about = "Sectorial Laplace transforms, contour inversion and growth indicators"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Componentwise trigonometric-convexity bound C1, C2.
    Bound(BoundArgs),
    /// Evaluate the two-dimensional concatenated Laplace transform.
    Transform(TransformArgs),
    /// Reconstruct the source function by contour inversion.
    Invert(InvertArgs),
    /// Growth-set membership test for a slope vector.
    Member(MemberArgs),
    /// One-variable directional growth estimate.
    Indicator(IndicatorArgs),
    /// Borel transform evaluation and Polya circle reconstruction.
    Polya(PolyaArgs),
    /// Run a named verification suite and emit CSV + JSON results.
    Verify(VerifyArgs),
}

#[derive(Args, Debug)]
struct SectorArgs {
    /// First sector half-angle in radians.
    #[arg(long, default_value_t = std::f64::consts::FRAC_PI_4)]
    alpha1: f64,
    /// Second sector half-angle in radians.
    #[arg(long, default_value_t = std::f64::consts::FRAC_PI_4)]
    alpha2: f64,
}

#[derive(Args, Debug)]
struct QuadArgs {
    #[arg(long, default_value_t = 1e-10)]
    rel_tol: f64,
    #[arg(long, default_value_t = 1e-12)]
    abs_tol: f64,
    #[arg(long, default_value_t = 15)]
    panel_nodes: usize,
    #[arg(long, default_value_t = 4096)]
    max_panels: usize,
    #[arg(long, default_value_t = 5.0)]
    tail_margin: f64,
}

impl QuadArgs {
    fn config(&self) -> QuadratureConfig {
        QuadratureConfig {
            rel_tol: self.rel_tol,
            abs_tol: self.abs_tol,
            panel_nodes: self.panel_nodes,
            max_panels: self.max_panels,
            tail_margin: self.tail_margin,
        }
    }
}

#[derive(Args, Debug)]
struct EnvelopeOverrides {
    /// Override the first-variable plus-ray slope.
    #[arg(long, allow_hyphen_values = true)]
    a1p: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    a1m: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    a2p: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    a2m: Option<f64>,
}

impl EnvelopeOverrides {
    fn apply(&self, mut env: GrowthEnvelope) -> GrowthEnvelope {
        if let Some(v) = self.a1p {
            env.a1_plus = v;
        }
        if let Some(v) = self.a1m {
            env.a1_minus = v;
        }
        if let Some(v) = self.a2p {
            env.a2_plus = v;
        }
        if let Some(v) = self.a2m {
            env.a2_minus = v;
        }
        env
    }
}

#[derive(Args, Debug)]
struct BoundArgs {
    #[arg(long)]
    alpha1: f64,
    #[arg(long)]
    alpha2: f64,
    #[arg(long, allow_hyphen_values = true)]
    theta1: f64,
    #[arg(long, allow_hyphen_values = true)]
    theta2: f64,
    #[arg(long, allow_hyphen_values = true)]
    a1p: f64,
    #[arg(long, allow_hyphen_values = true)]
    a1m: f64,
    #[arg(long, allow_hyphen_values = true)]
    a2p: f64,
    #[arg(long, allow_hyphen_values = true)]
    a2m: f64,
}

#[derive(Args, Debug)]
struct TransformArgs {
    /// Catalog function id: exp:a_re,a_im,b_re,b_im or cossqrt.
    #[arg(long)]
    function: String,
    /// First transform argument as re,im.
    #[arg(long, allow_hyphen_values = true)]
    omega1: String,
    /// Second transform argument as re,im.
    #[arg(long, allow_hyphen_values = true)]
    omega2: String,
    #[command(flatten)]
    sectors: SectorArgs,
    #[command(flatten)]
    envelope: EnvelopeOverrides,
    #[command(flatten)]
    quad: QuadArgs,
}

#[derive(Args, Debug)]
struct InvertArgs {
    #[arg(long)]
    function: String,
    /// Evaluation point as re,im (or r,theta with --polar).
    #[arg(long, allow_hyphen_values = true)]
    z1: String,
    #[arg(long, allow_hyphen_values = true)]
    z2: String,
    /// Interpret --z1/--z2 as polar r,theta pairs.
    #[arg(long, default_value_t = false)]
    polar: bool,
    /// Integrate over deformed contours matching arg z1, arg z2.
    #[arg(long, default_value_t = false)]
    deformed: bool,
    /// Support-line offset for the deformed contours.
    #[arg(long, default_value_t = 0.1)]
    delta: f64,
    /// Override contour vertices (defaults depend on the type constants).
    #[arg(long, allow_hyphen_values = true)]
    p1: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    p2: Option<f64>,
    #[arg(long, default_value_t = 1e-2)]
    z_min: f64,
    #[command(flatten)]
    sectors: SectorArgs,
    #[command(flatten)]
    envelope: EnvelopeOverrides,
    #[command(flatten)]
    quad: QuadArgs,
}

#[derive(Args, Debug)]
struct GridArgs {
    #[arg(long, default_value_t = 0.5)]
    r0: f64,
    #[arg(long, default_value_t = 1.3)]
    ratio: f64,
    #[arg(long, default_value_t = 20)]
    count: usize,
    /// Number of equally spaced ray-pair directions in (0, pi/2).
    #[arg(long, default_value_t = 8)]
    directions: usize,
}

impl GridArgs {
    fn grid(&self) -> GrowthGrid {
        GrowthGrid {
            r0: self.r0,
            ratio: self.ratio,
            count: self.count,
            directions: (1..=self.directions)
                .map(|d| d as f64 * std::f64::consts::FRAC_PI_2 / (self.directions as f64 + 1.0))
                .collect(),
        }
    }
}

#[derive(Args, Debug)]
struct MemberArgs {
    #[arg(long)]
    function: String,
    #[arg(long, allow_hyphen_values = true)]
    theta1: f64,
    #[arg(long, allow_hyphen_values = true)]
    theta2: f64,
    #[arg(long, allow_hyphen_values = true)]
    nu1: f64,
    #[arg(long, allow_hyphen_values = true)]
    nu2: f64,
    #[command(flatten)]
    sectors: SectorArgs,
    #[command(flatten)]
    grid: GridArgs,
}

#[derive(Args, Debug)]
struct IndicatorArgs {
    /// Catalog id; the first-variable section at z2 = 0 is measured.
    #[arg(long)]
    function: String,
    /// Ray angle in radians.
    #[arg(long, allow_hyphen_values = true)]
    theta: f64,
    #[command(flatten)]
    sectors: SectorArgs,
    #[command(flatten)]
    grid: GridArgs,
}

#[derive(Args, Debug)]
struct PolyaArgs {
    /// Plain-text series file: one coefficient per line as "re im".
    #[arg(long)]
    series: PathBuf,
    /// Override the inferred type radius.
    #[arg(long)]
    type_radius: Option<f64>,
    /// Evaluate the Borel transform at this point (re,im).
    #[arg(long, allow_hyphen_values = true)]
    omega: Option<String>,
    /// Reconstruct the function at this point (re,im).
    #[arg(long, allow_hyphen_values = true)]
    z: Option<String>,
    /// Reconstruction circle center (re,im).
    #[arg(long, default_value = "0,0", allow_hyphen_values = true)]
    center: String,
    /// Reconstruction circle radius; defaults to type radius + 1.
    #[arg(long)]
    radius: Option<f64>,
    #[command(flatten)]
    quad: QuadArgs,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Suite name: sharpness | roundtrip | convexity | branch | polya.
    suite: String,
    #[arg(long, default_value = "exp:1,0,1,0")]
    function: String,
    /// Deflate the convexity constants by this fraction (convexity suite).
    #[arg(long, default_value_t = 0.0)]
    deflate: f64,
    /// Output base path; <base>.csv and <base>.json are written.
    #[arg(long)]
    output: Option<PathBuf>,
    /// What to print on stdout: json summary or csv table.
    #[arg(long, default_value = "json")]
    format: String,
    #[command(flatten)]
    sectors: SectorArgs,
    #[command(flatten)]
    quad: QuadArgs,
}

fn parse_complex(s: &str) -> Result<Complex64> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 2 {
        return Err(Error::InvalidInput(format!("expected 're,im', got '{s}'")));
    }
    let re: f64 = parts[0]
        .trim()
        .parse()
        .map_err(|e| Error::InvalidInput(format!("bad real part '{}': {e}", parts[0])))?;
    let im: f64 = parts[1]
        .trim()
        .parse()
        .map_err(|e| Error::InvalidInput(format!("bad imaginary part '{}': {e}", parts[1])))?;
    Ok(Complex64::new(re, im))
}

fn parse_point(s: &str, polar: bool) -> Result<Complex64> {
    let v = parse_complex(s)?;
    if polar {
        Ok(Complex64::from_polar(v.re, v.im))
    } else {
        Ok(v)
    }
}

fn lookup(function: &str, sectors: &SectorArgs) -> Result<(AnalyticFunctionModel, GrowthEnvelope)> {
    let sp = SectorPair::new(sectors.alpha1, sectors.alpha2)?;
    catalog_lookup(function, sp)
}

#[derive(Serialize)]
struct ComplexOut {
    re: f64,
    im: f64,
}

impl From<Complex64> for ComplexOut {
    fn from(z: Complex64) -> Self {
        Self { re: z.re, im: z.im }
    }
}

/// One row of a verification suite.
#[derive(Serialize, Clone)]
pub struct CaseRow {
    pub case_id: String,
    pub inputs: String,
    pub expected: String,
    pub actual: String,
    pub error: f64,
    pub pass: bool,
}

#[derive(Serialize)]
struct SuiteSummary {
    suite: String,
    function: String,
    total: usize,
    passed: usize,
    failed: usize,
    pass: bool,
    cases: Vec<CaseRow>,
}

fn rows_to_csv(rows: &[CaseRow]) -> String {
    let mut out = String::from("case_id,inputs,expected,actual,error,pass\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.case_id, r.inputs, r.expected, r.actual, r.error, r.pass
        ));
    }
    out
}

fn fmt_c(z: Complex64) -> String {
    format!("{}{}{}i", z.re, if z.im < 0.0 { "" } else { "+" }, z.im)
}

/// Entry point used by the binary; returns the process exit code.
pub fn run() -> i32 {
    match run_with_args(std::env::args().collect()) {
        Ok(code) => code,
        Err((code, message)) => {
            eprintln!("error: {message}");
            code
        }
    }
}

/// Testable entry point: full argv including the program name.
pub fn run_with_args(argv: Vec<String>) -> std::result::Result<i32, (i32, String)> {
    init_thread_pool();
    let argv = merge_config_args(argv).map_err(|e| (2, e.to_string()))?;
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            // clap renders --help/--version through the same path
            let code = if e.exit_code() == 0 { 0 } else { 2 };
            let _ = e.print();
            return Ok(code);
        }
    };
    match dispatch(cli) {
        Ok(code) => Ok(code),
        Err(e) => Err((exit_code_for(&e), e.to_string())),
    }
}

fn init_thread_pool() {
    if let Ok(raw) = std::env::var(THREADS_ENV) {
        if let Ok(n) = raw.trim().parse::<usize>() {
            if n >= 1 {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
        }
    }
}

fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::InvalidInput(_)
        | Error::InvalidSectorAngle(_)
        | Error::DegenerateAngle(_)
        | Error::RayOutsideSector { .. }
        | Error::OutOfSector(_)
        | Error::OutsideDomain { .. }
        | Error::AngleMismatch { .. }
        | Error::ZeroModulus
        | Error::EmptySamples
        | Error::ConvergenceRadius { .. }
        | Error::ZTooSmall { .. }
        | Error::PreconditionViolated { .. }
        | Error::NoIntersection { .. } => 2,
        Error::Overflow(_)
        | Error::NonNegativeDecay(_)
        | Error::BudgetExceeded { .. }
        | Error::UnsupportedSource => 1,
    }
}

/// Splice `key = value` lines from a `--config` file into the argv as
/// `--key value` pairs, keeping explicit flags authoritative.
fn merge_config_args(mut argv: Vec<String>) -> Result<Vec<String>> {
    let mut config_path = None;
    let mut i = 0;
    while i < argv.len() {
        if argv[i] == "--config" {
            if i + 1 >= argv.len() {
                return Err(Error::InvalidInput("--config needs a file path".into()));
            }
            config_path = Some(PathBuf::from(argv.remove(i + 1)));
            argv.remove(i);
        } else if let Some(p) = argv[i].strip_prefix("--config=") {
            config_path = Some(PathBuf::from(p));
            argv.remove(i);
        } else {
            i += 1;
        }
    }
    let Some(path) = config_path else {
        return Ok(argv);
    };
    let text = std::fs::read_to_string(&path)
        .map_err(|e| Error::InvalidInput(format!("cannot read config {}: {e}", path.display())))?;
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(Error::InvalidInput(format!(
                "config line {}: expected 'key = value', got '{line}'",
                lineno + 1
            )));
        };
        let key = key.trim();
        let value = value.trim();
        if key.is_empty() || value.is_empty() {
            return Err(Error::InvalidInput(format!(
                "config line {}: empty key or value",
                lineno + 1
            )));
        }
        let flag = format!("--{key}");
        if !argv.iter().any(|a| a == &flag || a.starts_with(&format!("{flag}="))) {
            argv.push(flag);
            argv.push(value.to_string());
        }
    }
    Ok(argv)
}

fn print_json<T: Serialize>(value: &T) {
    println!("{}", serde_json::to_string(value).expect("serializable output"));
}

fn dispatch(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Bound(a) => cmd_bound(&a),
        Command::Transform(a) => cmd_transform(&a),
        Command::Invert(a) => cmd_invert(&a),
        Command::Member(a) => cmd_member(&a),
        Command::Indicator(a) => cmd_indicator(&a),
        Command::Polya(a) => cmd_polya(&a),
        Command::Verify(a) => cmd_verify(&a),
    }
}

fn cmd_bound(a: &BoundArgs) -> Result<i32> {
    let c = convexity_bound(
        &[a.alpha1, a.alpha2],
        &[a.theta1, a.theta2],
        &[a.a1p, a.a2p],
        &[a.a1m, a.a2m],
    )?;
    #[derive(Serialize)]
    struct Out {
        #[serde(rename = "C1")]
        c1: f64,
        #[serde(rename = "C2")]
        c2: f64,
    }
    print_json(&Out { c1: c[0], c2: c[1] });
    Ok(0)
}

fn cmd_transform(a: &TransformArgs) -> Result<i32> {
    let (model, env) = lookup(&a.function, &a.sectors)?;
    let env = a.envelope.apply(env);
    let t = ConcatenatedLaplace::new(model, env, a.quad.config())?;
    let w1 = parse_complex(&a.omega1)?;
    let w2 = parse_complex(&a.omega2)?;
    let (b1, b2) = t.branch_select(w1, w2)?;
    let r = t.eval_on_branch(w1, w2, b1, b2)?;
    #[derive(Serialize)]
    struct Out {
        function: String,
        omega1: ComplexOut,
        omega2: ComplexOut,
        branch: String,
        value: ComplexOut,
        err_est: f64,
        provenance: Provenance,
    }
    #[derive(Serialize)]
    struct Provenance {
        alpha1: f64,
        alpha2: f64,
        a1_plus: f64,
        a1_minus: f64,
        a2_plus: f64,
        a2_minus: f64,
        scale: f64,
    }
    print_json(&Out {
        function: a.function.clone(),
        omega1: w1.into(),
        omega2: w2.into(),
        branch: format!("{b1}{b2}"),
        value: r.value.into(),
        err_est: r.err_est,
        provenance: Provenance {
            alpha1: a.sectors.alpha1,
            alpha2: a.sectors.alpha2,
            a1_plus: env.a1_plus,
            a1_minus: env.a1_minus,
            a2_plus: env.a2_plus,
            a2_minus: env.a2_minus,
            scale: env.scale,
        },
    });
    Ok(0)
}

fn cmd_invert(a: &InvertArgs) -> Result<i32> {
    let (model, env) = lookup(&a.function, &a.sectors)?;
    let env = a.envelope.apply(env);
    let (h1, h2) = (model.h1, model.h2);
    let t = ConcatenatedLaplace::new(model, env, a.quad.config())?;
    let z1 = parse_point(&a.z1, a.polar)?;
    let z2 = parse_point(&a.z2, a.polar)?;
    let g1 = match a.p1 {
        Some(p) => GammaContour::new(p, a.sectors.alpha1, h1)?,
        None => GammaContour::with_default_vertex(a.sectors.alpha1, h1)?,
    };
    let g2 = match a.p2 {
        Some(p) => GammaContour::new(p, a.sectors.alpha2, h2)?,
        None => GammaContour::with_default_vertex(a.sectors.alpha2, h2)?,
    };
    let plan = InversionPlan {
        contour1: ContourSpec::Gamma(g1),
        contour2: ContourSpec::Gamma(g2),
        z_min: a.z_min,
        cfg: a.quad.config(),
    };

    #[derive(Serialize)]
    struct Out {
        function: String,
        z1: ComplexOut,
        z2: ComplexOut,
        contour: &'static str,
        value: ComplexOut,
        err_est: f64,
        #[serde(skip_serializing_if = "Option::is_none")]
        apriori_bound: Option<f64>,
        provenance: Provenance,
    }
    #[derive(Serialize)]
    struct Provenance {
        p1: f64,
        p2: f64,
        alpha1: f64,
        alpha2: f64,
        h1: f64,
        h2: f64,
        #[serde(skip_serializing_if = "Option::is_none")]
        c1: Option<f64>,
        #[serde(skip_serializing_if = "Option::is_none")]
        c2: Option<f64>,
        #[serde(skip_serializing_if = "Option::is_none")]
        delta: Option<f64>,
    }

    let mut provenance = Provenance {
        p1: g1.vertex,
        p2: g2.vertex,
        alpha1: a.sectors.alpha1,
        alpha2: a.sectors.alpha2,
        h1,
        h2,
        c1: None,
        c2: None,
        delta: None,
    };

    let (value, err_est, apriori, contour) = if a.deformed {
        let theta1 = z1.arg();
        let theta2 = z2.arg();
        let c = convexity_bound(
            &[a.sectors.alpha1, a.sectors.alpha2],
            &[theta1, theta2],
            &[env.a1_plus, env.a2_plus],
            &[env.a1_minus, env.a2_minus],
        )?;
        let l1 = build_lambda(&g1, theta1, c[0], a.delta)?;
        let l2 = build_lambda(&g2, theta2, c[1], a.delta)?;
        let d = invert_2d_deformed(&t, &plan, &l1, &l2, z1, z2)?;
        provenance.c1 = Some(c[0]);
        provenance.c2 = Some(c[1]);
        provenance.delta = Some(a.delta);
        (d.value, d.err_est, Some(d.apriori_bound), "lambda")
    } else {
        let r = invert_2d(&t, &plan, z1, z2)?;
        (r.value, r.err_est, None, "gamma")
    };

    print_json(&Out {
        function: a.function.clone(),
        z1: z1.into(),
        z2: z2.into(),
        contour,
        value: value.into(),
        err_est,
        apriori_bound: apriori,
        provenance,
    });
    Ok(0)
}

fn cmd_member(a: &MemberArgs) -> Result<i32> {
    let (model, _) = lookup(&a.function, &a.sectors)?;
    let grid = a.grid.grid();
    let v = membership_test(&model, (a.theta1, a.theta2), (a.nu1, a.nu2), &grid)?;
    #[derive(Serialize)]
    struct Out {
        function: String,
        theta1: f64,
        theta2: f64,
        nu1: f64,
        nu2: f64,
        accepted: bool,
        residual_slope: f64,
        residual_offset: f64,
        slope_tol: f64,
    }
    print_json(&Out {
        function: a.function.clone(),
        theta1: a.theta1,
        theta2: a.theta2,
        nu1: a.nu1,
        nu2: a.nu2,
        accepted: v.accepted,
        residual_slope: v.residual_slope,
        residual_offset: v.residual_offset,
        slope_tol: v.slope_tol,
    });
    Ok(0)
}

fn cmd_indicator(a: &IndicatorArgs) -> Result<i32> {
    let (model, _) = lookup(&a.function, &a.sectors)?;
    // first-variable section at z2 = 0
    let section = OneVarModel {
        label: format!("{}|z2=0", a.function),
        eval: {
            let m = model.clone();
            std::sync::Arc::new(move |z| m.eval_unchecked(z, Complex64::default()))
        },
        log_magnitude: {
            let m = model.clone();
            std::sync::Arc::new(move |r, theta| m.log_magnitude_unchecked(r, theta, 0.0, 0.0))
        },
    };
    // catalog sections at z2 = 0 extend to entire functions, so any ray goes
    let slope = estimate_indicator_1d(&section, a.theta, &a.grid.grid())?;
    #[derive(Serialize)]
    struct Out {
        function: String,
        theta: f64,
        indicator: f64,
    }
    print_json(&Out { function: a.function.clone(), theta: a.theta, indicator: slope });
    Ok(0)
}

fn cmd_polya(a: &PolyaArgs) -> Result<i32> {
    let text = std::fs::read_to_string(&a.series)
        .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", a.series.display())))?;
    let coefficients = parse_series_text(&text)?;
    let sigma = a.type_radius.unwrap_or_else(|| inferred_type_radius(&coefficients));
    let series = PowerSeriesET::new(coefficients, sigma)?;
    if a.omega.is_none() && a.z.is_none() {
        return Err(Error::InvalidInput("need at least one of --omega or --z".into()));
    }

    #[derive(Serialize)]
    struct BorelOut {
        omega: ComplexOut,
        value: ComplexOut,
        tail_estimate: f64,
    }
    #[derive(Serialize)]
    struct ReconOut {
        z: ComplexOut,
        center: ComplexOut,
        radius: f64,
        value: ComplexOut,
        err_est: f64,
    }
    #[derive(Serialize)]
    struct Out {
        series_order: usize,
        type_radius: f64,
        #[serde(skip_serializing_if = "Option::is_none")]
        borel: Option<BorelOut>,
        #[serde(skip_serializing_if = "Option::is_none")]
        reconstruction: Option<ReconOut>,
    }

    let mut out =
        Out { series_order: series.order(), type_radius: sigma, borel: None, reconstruction: None };
    if let Some(w) = &a.omega {
        let w = parse_complex(w)?;
        let b = borel_eval(&series, w)?;
        out.borel =
            Some(BorelOut { omega: w.into(), value: b.value.into(), tail_estimate: b.tail_estimate });
    }
    if let Some(z) = &a.z {
        let z = parse_complex(z)?;
        let center = parse_complex(&a.center)?;
        let radius = a.radius.unwrap_or(sigma + 1.0);
        let cfg = a.quad.config();
        let g = |w: Complex64| borel_eval(&series, w).map(|b| b.value).unwrap_or_default();
        let r = polya_reconstruct(g, center, radius, z, &cfg)?;
        out.reconstruction = Some(ReconOut {
            z: z.into(),
            center: center.into(),
            radius,
            value: r.value.into(),
            err_est: r.err_est,
        });
    }
    print_json(&out);
    Ok(0)
}

fn cmd_verify(a: &VerifyArgs) -> Result<i32> {
    let rows = match a.suite.as_str() {
        "sharpness" => suite_sharpness(a)?,
        "roundtrip" => suite_roundtrip(a)?,
        "convexity" => suite_convexity(a)?,
        "branch" => suite_branch(a)?,
        "polya" => suite_polya(a)?,
        other => {
            return Err(Error::InvalidInput(format!(
                "unknown suite '{other}' (expected sharpness | roundtrip | convexity | branch | polya)"
            )))
        }
    };
    let passed = rows.iter().filter(|r| r.pass).count();
    let summary = SuiteSummary {
        suite: a.suite.clone(),
        function: a.function.clone(),
        total: rows.len(),
        passed,
        failed: rows.len() - passed,
        pass: passed == rows.len(),
        cases: rows.clone(),
    };
    let csv = rows_to_csv(&rows);
    let json = serde_json::to_string_pretty(&summary).expect("serializable summary");
    let base = a
        .output
        .clone()
        .unwrap_or_else(|| PathBuf::from(format!("verify_{}", a.suite)));
    write_output(&base.with_extension("csv"), &csv)?;
    write_output(&base.with_extension("json"), &json)?;
    match a.format.as_str() {
        "csv" => print!("{csv}"),
        "json" => println!("{json}"),
        other => return Err(Error::InvalidInput(format!("unknown format '{other}'"))),
    }
    Ok(if summary.pass { 0 } else { 1 })
}

fn write_output(path: &std::path::Path, contents: &str) -> Result<()> {
    let mut f = std::fs::File::create(path)
        .map_err(|e| Error::InvalidInput(format!("cannot create {}: {e}", path.display())))?;
    f.write_all(contents.as_bytes())
        .map_err(|e| Error::InvalidInput(format!("cannot write {}: {e}", path.display())))?;
    Ok(())
}

fn suite_sharpness(a: &VerifyArgs) -> Result<Vec<CaseRow>> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let alpha = std::f64::consts::FRAC_PI_4;
    let c = convexity_bound(&[alpha, alpha], &[0.0, 0.0], &[s, s], &[s, s])?;
    let mut rows = Vec::new();
    for (j, cj) in c.iter().enumerate() {
        rows.push(CaseRow {
            case_id: format!("c{}", j + 1),
            inputs: format!("alpha=pi/4;theta=0;A=sqrt2/2"),
            expected: "1".into(),
            actual: format!("{cj}"),
            error: (cj - 1.0).abs(),
            pass: (cj - 1.0).abs() <= 1e-12,
        });
    }
    let (model, _) = lookup(&a.function, &a.sectors)?;
    let grid = GrowthGrid::default();
    let accept = membership_test(&model, (0.0, 0.0), (1.0, 1.0), &grid)?;
    rows.push(CaseRow {
        case_id: "member_1_1".into(),
        inputs: "theta=(0,0);nu=(1,1)".into(),
        expected: "accepted".into(),
        actual: if accept.accepted { "accepted".into() } else { "rejected".into() },
        error: accept.residual_slope.abs(),
        pass: accept.accepted,
    });
    let reject = membership_test(&model, (0.0, 0.0), (0.95, 1.0), &grid)?;
    rows.push(CaseRow {
        case_id: "member_095_1".into(),
        inputs: "theta=(0,0);nu=(0.95,1)".into(),
        expected: "rejected".into(),
        actual: if reject.accepted { "accepted".into() } else { "rejected".into() },
        error: reject.residual_slope,
        pass: !reject.accepted,
    });
    Ok(rows)
}

fn suite_roundtrip(a: &VerifyArgs) -> Result<Vec<CaseRow>> {
    let (model, env) = lookup(&a.function, &a.sectors)?;
    let t = ConcatenatedLaplace::new(model, env, a.quad.config())?;
    let plan = InversionPlan::for_source(&t)?;
    let radii = [0.5, 1.5, 3.0];
    let th1m = a.sectors.alpha1 - 0.1;
    let th2m = a.sectors.alpha2 - 0.1;
    let angles1 = [-th1m, 0.0, th1m];
    let angles2 = [-th2m, 0.0, th2m];
    let mut points = Vec::new();
    for &r1 in &radii {
        for &t1 in &angles1 {
            for &r2 in &radii {
                for &t2 in &angles2 {
                    points.push((Complex64::from_polar(r1, t1), Complex64::from_polar(r2, t2)));
                }
            }
        }
    }
    let rows: Vec<Result<CaseRow>> = points
        .par_iter()
        .enumerate()
        .map(|(i, &(z1, z2))| {
            let expected = t.source().evaluate(z1, z2)?;
            let got = invert_2d(&t, &plan, z1, z2)?;
            let rel = (got.value - expected).norm() / expected.norm().max(1.0);
            Ok(CaseRow {
                case_id: format!("rt_{i:03}"),
                inputs: format!("z1={};z2={}", fmt_c(z1), fmt_c(z2)),
                expected: fmt_c(expected),
                actual: fmt_c(got.value),
                error: rel,
                pass: rel <= 1e-6,
            })
        })
        .collect();
    rows.into_iter().collect()
}

fn suite_convexity(a: &VerifyArgs) -> Result<Vec<CaseRow>> {
    let (model, env) = lookup(&a.function, &a.sectors)?;
    let grid = GrowthGrid::default();
    let thetas = [(0.0, 0.0), (std::f64::consts::FRAC_PI_8, 0.0), (-0.3, 0.2)];
    let mut rows = Vec::new();
    for (t1, t2) in thetas {
        let c = convexity_bound(
            &[a.sectors.alpha1, a.sectors.alpha2],
            &[t1, t2],
            &[env.a1_plus, env.a2_plus],
            &[env.a1_minus, env.a2_minus],
        )?;
        let scale = 1.0 - a.deflate;
        for eps in [0.0, 0.05, 0.1] {
            let nu = (c[0] * scale + eps, c[1] * scale + eps);
            let v = membership_test(&model, (t1, t2), nu, &grid)?;
            // with undeflated constants every row must accept
            rows.push(CaseRow {
                case_id: format!("theta=({t1},{t2});eps={eps}"),
                inputs: format!("nu=({},{});deflate={}", nu.0, nu.1, a.deflate),
                expected: "accepted".into(),
                actual: if v.accepted { "accepted".into() } else { "rejected".into() },
                error: v.residual_slope,
                pass: v.accepted,
            });
        }
    }
    Ok(rows)
}

fn suite_branch(a: &VerifyArgs) -> Result<Vec<CaseRow>> {
    let (model, env) = lookup(&a.function, &a.sectors)?;
    let t = ConcatenatedLaplace::new(model, env, a.quad.config())?;
    let points: Vec<(Complex64, Complex64)> = vec![
        (Complex64::new(-3.0, 0.0), Complex64::new(-3.0, 0.0)),
        (Complex64::new(-2.5, 0.0), Complex64::new(-4.0, 0.0)),
        (Complex64::new(-3.0, 0.3), Complex64::new(-3.0, -0.3)),
        (Complex64::new(-4.0, 0.5), Complex64::new(-2.8, 0.2)),
        (Complex64::new(-2.6, -0.2), Complex64::new(-3.5, 0.4)),
        (Complex64::new(-5.0, 1.0), Complex64::new(-5.0, -1.0)),
        (Complex64::new(-3.2, -0.6), Complex64::new(-2.9, -0.1)),
        (Complex64::new(-4.5, 0.2), Complex64::new(-4.5, 0.2)),
        (Complex64::new(-2.4, 0.1), Complex64::new(-6.0, 0.8)),
        (Complex64::new(-7.0, -0.5), Complex64::new(-3.1, 0.6)),
    ];
    let rows: Vec<Result<CaseRow>> = points
        .par_iter()
        .enumerate()
        .map(|(i, &(w1, w2))| {
            let dev = t.branch_consistency(w1, w2)?;
            Ok(CaseRow {
                case_id: format!("branch_{i:02}"),
                inputs: format!("w1={};w2={}", fmt_c(w1), fmt_c(w2)),
                expected: "deviation <= 1e-7".into(),
                actual: format!("{dev}"),
                error: dev,
                pass: dev <= 1e-7,
            })
        })
        .collect();
    rows.into_iter().collect()
}

fn suite_polya(a: &VerifyArgs) -> Result<Vec<CaseRow>> {
    let cfg = a.quad.config();
    let series = PowerSeriesET::exponential(Complex64::new(2.0, 0.0), 60);
    let mut rows = Vec::new();
    for w in [
        Complex64::new(3.0, 0.0),
        Complex64::new(-4.0, 1.0),
        Complex64::new(0.0, 5.0),
        Complex64::new(6.0, -2.0),
    ] {
        let got = borel_eval(&series, w)?.value;
        let expected = Complex64::new(1.0, 0.0) / (w - Complex64::new(2.0, 0.0));
        let err = (got - expected).norm();
        rows.push(CaseRow {
            case_id: format!("borel_w={}", fmt_c(w)),
            inputs: format!("omega={}", fmt_c(w)),
            expected: fmt_c(expected),
            actual: fmt_c(got),
            error: err,
            pass: err <= 1e-8,
        });
    }
    let g = |w: Complex64| borel_eval(&series, w).map(|b| b.value).unwrap_or_default();
    let e2 = Complex64::new(std::f64::consts::E * std::f64::consts::E, 0.0);
    let mut values = Vec::new();
    for radius in [2.5, 3.0, 5.0] {
        let r = polya_reconstruct(g, Complex64::default(), radius, Complex64::new(1.0, 0.0), &cfg)?;
        let err = (r.value - e2).norm() / e2.norm();
        rows.push(CaseRow {
            case_id: format!("reconstruct_r={radius}"),
            inputs: format!("z=1;radius={radius}"),
            expected: fmt_c(e2),
            actual: fmt_c(r.value),
            error: err,
            pass: err <= 1e-6,
        });
        values.push(r.value);
    }
    let spread = values
        .iter()
        .map(|v| (v - values[0]).norm())
        .fold(0.0f64, f64::max);
    rows.push(CaseRow {
        case_id: "radius_independence".into(),
        inputs: "radii=2.5,3,5".into(),
        expected: "spread <= 1e-8".into(),
        actual: format!("{spread}"),
        error: spread,
        pass: spread <= 1e-8,
    });
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_parsing() {
        assert_eq!(parse_complex("1,-2").unwrap(), Complex64::new(1.0, -2.0));
        assert!(parse_complex("1").is_err());
        assert!(parse_complex("a,b").is_err());
        let p = parse_point("2,0.5", true).unwrap();
        assert!((p - Complex64::from_polar(2.0, 0.5)).norm() < 1e-15);
    }

    #[test]
    fn config_merge_prefers_explicit_flags() {
        let dir = std::env::temp_dir().join("si-config-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("cfg.txt");
        std::fs::write(&path, "theta1 = 0.5\nnu1 = 2.0\n").unwrap();
        let argv: Vec<String> = [
            "prog",
            "member",
            "--theta1",
            "0.1",
            "--config",
            path.to_str().unwrap(),
        ]
        .iter()
        .map(|s| s.to_string())
        .collect();
        let merged = merge_config_args(argv).unwrap();
        // explicit --theta1 kept, config nu1 appended, --config stripped
        assert!(merged.iter().any(|a| a == "--theta1"));
        assert_eq!(merged.iter().filter(|a| *a == "--theta1").count(), 1);
        assert!(merged.iter().any(|a| a == "--nu1"));
        assert!(!merged.iter().any(|a| a.starts_with("--config")));
    }

    #[test]
    fn unknown_config_key_is_rejected_by_clap() {
        let dir = std::env::temp_dir().join("si-config-test2");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("cfg.txt");
        std::fs::write(&path, "bogus_key = 1\n").unwrap();
        let argv: Vec<String> = [
            "prog",
            "bound",
            "--alpha1",
            "0.785",
            "--alpha2",
            "0.785",
            "--theta1",
            "0",
            "--theta2",
            "0",
            "--a1p",
            "0.7",
            "--a1m",
            "0.7",
            "--a2p",
            "0.7",
            "--a2m",
            "0.7",
            "--config",
            path.to_str().unwrap(),
        ]
        .iter()
        .map(|s| s.to_string())
        .collect();
        let code = run_with_args(argv).unwrap();
        assert_eq!(code, 2);
    }
}
