//! `g2geom`: runs verification suites, evaluates residuals of cycles and
//! sections, applies fiberwise transforms and splits forms into irreducible parts.
//!
//! Exit codes: 0 pass, 1 check failure, 2 usage or configuration error.

use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use g2geom::exalg::json::FormJson;
use g2geom::fourier::Fibration;
use g2geom::g2::{g2_frame, standard_decomposition};
use g2geom::io::{residual_norms, residuals_vanish, transform, ObjectJson};
use g2geom::spin7::{spin7_decomposition, spin7_frame};
use g2geom::verify::{run_suite, SuiteConfig};

/// Environment variable naming a JSON suite configuration.
const CONFIG_ENV: &str = "G2GEOM_CONFIG";

#[derive(Parser)]
#[command(name = "g2geom", version, about = "Verification and transforms for flat G2 and Spin(7) geometry")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run verification suites and report every check.
    Verify(VerifyArgs),
    /// Fiberwise transform of a cycle, section or flat torus object.
    Transform {
        #[arg(long, value_enum)]
        fibration: FibrationArg,
        /// JSON input file, `-` for stdin.
        #[arg(long)]
        input: PathBuf,
        /// Output file; stdout if absent.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Residual norms of a cycle or section; fails unless all vanish.
    Residual {
        #[arg(long, value_enum)]
        kind: KindArg,
        #[arg(long)]
        input: PathBuf,
        /// Tolerance for sampled data; polynomial data must vanish exactly.
        #[arg(long, default_value_t = 1e-9)]
        tol_abs: f64,
    },
    /// Split a constant-coefficient form into irreducible components.
    Decompose {
        #[arg(long, value_enum)]
        space: SpaceArg,
        #[arg(long)]
        degree: usize,
        #[arg(long)]
        input: PathBuf,
    },
}

#[derive(clap::Args)]
struct VerifyArgs {
    /// JSON suite configuration; flags override its fields.
    #[arg(long, env = CONFIG_ENV)]
    config: Option<PathBuf>,
    /// Suites to run (repeatable or comma separated); all if absent.
    #[arg(long, value_delimiter = ',')]
    suite: Vec<String>,
    #[arg(long)]
    tol_abs: Option<f64>,
    #[arg(long)]
    tol_rel: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Grid resolutions for sampled checks.
    #[arg(long, value_delimiter = ',')]
    grid: Vec<usize>,
    /// Random cases per property check.
    #[arg(long)]
    samples: Option<usize>,
    /// Write the JSON report here.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Print the JSON report instead of the text summary.
    #[arg(long)]
    json: bool,
    /// Record per-check wall-clock time.
    #[arg(long)]
    timings: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum FibrationArg {
    CoassociativeT4,
    AssociativeT3,
}

impl From<FibrationArg> for Fibration {
    fn from(f: FibrationArg) -> Self {
        match f {
            FibrationArg::CoassociativeT4 => Fibration::CoassociativeT4,
            FibrationArg::AssociativeT3 => Fibration::AssociativeT3,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    AssocSection,
    CoassocSection,
    CoassocSemiflat,
    AssocSemiflat,
}

impl KindArg {
    fn tag(self) -> &'static str {
        match self {
            KindArg::AssocSection => "assoc-section",
            KindArg::CoassocSection => "coassoc-section",
            KindArg::CoassocSemiflat => "coassoc-semiflat",
            KindArg::AssocSemiflat => "assoc-semiflat",
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SpaceArg {
    G2,
    Spin7,
}

enum Failure {
    /// Checks ran and at least one failed.
    Check,
    Usage(String),
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn read_input(path: &Path) -> Result<String, Failure> {
    if path == Path::new("-") {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        return Ok(s);
    }
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn write_output(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, format!("{text}\n")).map_err(|e| Failure::Usage(format!("{}: {e}", p.display()))),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("values serialize")
}

fn suite_config(args: &VerifyArgs) -> Result<SuiteConfig, Failure> {
    let mut cfg = match &args.config {
        Some(p) => SuiteConfig::from_json(&read_input(p)?)?,
        None => SuiteConfig::default(),
    };
    if !args.suite.is_empty() {
        cfg.suites = args.suite.clone();
    }
    if !args.grid.is_empty() {
        cfg.grid = args.grid.clone();
    }
    cfg.tol_abs = args.tol_abs.unwrap_or(cfg.tol_abs);
    cfg.tol_rel = args.tol_rel.unwrap_or(cfg.tol_rel);
    cfg.seed = args.seed.unwrap_or(cfg.seed);
    cfg.samples = args.samples.unwrap_or(cfg.samples);
    cfg.report = args.report.clone().or(cfg.report);
    cfg.timings |= args.timings;
    cfg.validate()?;
    Ok(cfg)
}

fn verify(args: &VerifyArgs) -> Result<(), Failure> {
    let cfg = suite_config(args)?;
    let report = run_suite(&cfg)?;
    if let Some(p) = &cfg.report {
        write_output(Some(p), &report.to_json())?;
    }
    if args.json {
        println!("{}", report.to_json());
    } else {
        print!("{}", report.to_text());
    }
    if report.passed {
        Ok(())
    } else {
        Err(Failure::Check)
    }
}

fn transform_cmd(fibration: Fibration, input: &Path, output: Option<&Path>) -> Result<(), Failure> {
    let parsed = ObjectJson::parse(&read_input(input)?)?;
    let obj = parsed.decode()?;
    let out = transform(fibration, &obj)?;
    let result = json!({
        "fibration": fibration,
        "input_kind": parsed.kind(),
        "residuals": {
            "input": residual_norms(&obj)?,
            "output": residual_norms(&out)?,
        },
        "output": ObjectJson::encode(&out),
    });
    write_output(output, &pretty(&result))
}

/// Parses `text`, filling in or checking the `kind` tag against `kind`.
fn tagged(text: &str, kind: &str) -> Result<ObjectJson, Failure> {
    let mut v: Value = serde_json::from_str(text)?;
    let obj = v
        .as_object_mut()
        .ok_or_else(|| Failure::Usage("input must be a JSON object".into()))?;
    match obj.get("kind").and_then(Value::as_str) {
        None => {
            obj.insert("kind".into(), Value::from(kind));
        }
        Some(k) if k == kind => {}
        Some(k) => return Err(Failure::Usage(format!("input has kind '{k}', expected '{kind}'"))),
    }
    Ok(serde_json::from_value(v)?)
}

fn residual_cmd(kind: KindArg, input: &Path, tol: f64) -> Result<(), Failure> {
    if !(tol.is_finite() && tol >= 0.0) {
        return Err(Failure::Usage(format!("tolerance must be non-negative, got {tol}")));
    }
    let obj = tagged(&read_input(input)?, kind.tag())?.decode()?;
    let vanishes = residuals_vanish(&obj, tol)?;
    let result = json!({
        "kind": kind.tag(),
        "residuals": residual_norms(&obj)?,
        "tolerance": tol,
        "vanishes": vanishes,
    });
    println!("{}", pretty(&result));
    if vanishes {
        Ok(())
    } else {
        Err(Failure::Check)
    }
}

fn decompose_cmd(space: SpaceArg, degree: usize, input: &Path) -> Result<(), Failure> {
    let form: FormJson = serde_json::from_str(&read_input(input)?)?;
    if form.degree != degree {
        return Err(Failure::Usage(format!("input has degree {}, expected {degree}", form.degree)));
    }
    let (frame, split) = match space {
        SpaceArg::G2 => (g2_frame(), standard_decomposition(degree)?),
        SpaceArg::Spin7 => (spin7_frame(), spin7_decomposition(degree)?),
    };
    let a = form.to_form(|name| (name == frame.name()).then(|| frame.clone()))?;
    let components: Vec<Value> = split
        .split(&a)?
        .iter()
        .map(|c| {
            json!({
                "label": c.label,
                "form": FormJson::from_form(&c.form),
            })
        })
        .collect();
    let result = json!({
        "space": frame.name(),
        "degree": degree,
        "dims": split.dims(),
        "components": components,
    });
    println!("{}", pretty(&result));
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Verify(args) => verify(args),
        Command::Transform {
            fibration,
            input,
            output,
        } => transform_cmd((*fibration).into(), input, output.as_deref()),
        Command::Residual { kind, input, tol_abs } => residual_cmd(*kind, input, *tol_abs),
        Command::Decompose { space, degree, input } => decompose_cmd(*space, *degree, input),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
