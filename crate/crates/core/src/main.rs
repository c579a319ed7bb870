use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::Value;

use polyhull::factor::DEFAULT_MAX_DEGREE;
use polyhull::hull::{ProblemSpec, Tolerances};
use polyhull::parse::{parse_in, Alphabet};
use polyhull::poly::BiPoly;
use polyhull::polyhedron::PolyhedronSpec;
use polyhull::report::{self, Options, Report};

/// Polynomial hulls of graphs over the distinguished boundary of a
/// polynomial polyhedron {|p1| < 1, |p2| < 1}.
#[derive(Parser, Debug)]
#[command(name = "polyhull", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Hypothesis checks on (p1, p2): non-degeneracy, properness, contractibility.
    Check(Common),
    /// Δ numerator and its factorization.
    Delta(WithData),
    /// Full classification and approximation verdict.
    Hull(HullArgs),
    /// Numeric oracles against a classification (recomputed or from a prior report).
    Verify(VerifyArgs),
    /// Sample the distinguished boundary as CSV.
    SampleGamma(Common),
}

#[derive(Args, Debug, Clone)]
struct Common {
    #[arg(long)]
    p1: Option<String>,
    #[arg(long)]
    p2: Option<String>,
    /// Numeric tolerance for witnesses and constancy tests.
    #[arg(long)]
    tol: Option<f64>,
    /// Margin δ for interior witnesses.
    #[arg(long = "delta-margin")]
    delta_margin: Option<f64>,
    /// Grid size per axis for Γ sampling.
    #[arg(long)]
    samples: Option<usize>,
    /// Total degree of separating polynomials.
    #[arg(long = "sep-degree")]
    sep_degree: Option<u32>,
    #[arg(long)]
    seed: Option<u64>,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    json: Option<PathBuf>,
    /// Write the Γ sample cloud as CSV here.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Omit the timestamp so reports are byte-identical across runs.
    #[arg(long = "no-timestamp")]
    no_timestamp: bool,
}

#[derive(Args, Debug)]
struct WithData {
    #[command(flatten)]
    common: Common,
    /// Data polynomial in w1, w2.
    #[arg(long = "P")]
    data: Option<String>,
}

#[derive(Args, Debug)]
struct HullArgs {
    #[command(flatten)]
    inner: WithData,
    /// Classify even when a hypothesis check fails.
    #[arg(long = "override-hypotheses")]
    override_hypotheses: bool,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[command(flatten)]
    inner: WithData,
    /// Prior JSON report supplying p1, p2, P, tolerances and seed.
    #[arg(long)]
    report: Option<PathBuf>,
}

fn max_degree() -> Result<u32> {
    match std::env::var("POLYHULL_MAX_DEGREE") {
        Ok(v) => v.trim().parse().with_context(|| format!("POLYHULL_MAX_DEGREE={v} is not a non-negative integer")),
        Err(_) => Ok(DEFAULT_MAX_DEGREE),
    }
}

fn options(c: &Common) -> Result<Options> {
    let mut o = Options::default();
    let defaults = Tolerances::default();
    o.tolerances = Tolerances {
        numeric_tol: c.tol.unwrap_or(defaults.numeric_tol),
        boundary_margin: c.delta_margin.unwrap_or(defaults.boundary_margin),
        max_degree: max_degree()?,
        ..defaults
    };
    if !(o.tolerances.numeric_tol > 0.0) || !(o.tolerances.boundary_margin > 0.0) {
        bail!("--tol and --delta-margin must be positive");
    }
    o.samples = c.samples.unwrap_or(o.samples);
    if o.samples == 0 {
        bail!("--samples must be positive");
    }
    o.sep_degree = c.sep_degree.unwrap_or(o.sep_degree);
    if o.sep_degree == 0 {
        bail!("--sep-degree must be positive");
    }
    o.seed = c.seed.unwrap_or(0);
    o.timestamp = !c.no_timestamp;
    Ok(o)
}

fn parse_arg(name: &str, text: Option<&str>, alphabet: Alphabet) -> Result<BiPoly> {
    let text = text.with_context(|| format!("--{name} is required"))?;
    parse_in(text, alphabet).with_context(|| format!("cannot parse --{name} \"{text}\""))
}

fn polyhedron(c: &Common) -> Result<PolyhedronSpec> {
    let p1 = parse_arg("p1", c.p1.as_deref(), Alphabet::Z)?;
    let p2 = parse_arg("p2", c.p2.as_deref(), Alphabet::Z)?;
    Ok(PolyhedronSpec::new(p1, p2)?)
}

fn problem(w: &WithData, opts: &Options) -> Result<ProblemSpec> {
    let poly = polyhedron(&w.common)?;
    let data = parse_arg("P", w.data.as_deref(), Alphabet::W)?;
    Ok(ProblemSpec::new(poly.p1, poly.p2, data)?.with_tolerances(opts.tolerances).with_seed(opts.seed))
}

fn emit(report: &Report, c: &Common) -> Result<()> {
    let json = report.to_json();
    match &c.json {
        Some(path) => fs::write(path, json + "\n").with_context(|| format!("writing {}", path.display()))?,
        None => println!("{json}"),
    }
    Ok(())
}

fn write_csv(spec: &PolyhedronSpec, opts: &Options, path: &PathBuf) -> Result<()> {
    let (csv, _) = report::gamma_csv(spec, opts)?;
    fs::write(path, csv).with_context(|| format!("writing {}", path.display()))
}

/// Fills missing p1/p2/P/seed/tolerance flags from a prior report.
fn merge_prior(args: &mut VerifyArgs) -> Result<()> {
    let Some(path) = &args.report else { return Ok(()) };
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let v: Value = serde_json::from_str(&text).with_context(|| format!("{} is not JSON", path.display()))?;
    let get = |ptr: &str| v.pointer(ptr).and_then(Value::as_str).map(str::to_owned);
    let c = &mut args.inner.common;
    c.p1 = c.p1.take().or_else(|| get("/input/p1"));
    c.p2 = c.p2.take().or_else(|| get("/input/p2"));
    args.inner.data = args.inner.data.take().or_else(|| get("/input/P"));
    c.seed = c.seed.or_else(|| v.pointer("/seed").and_then(Value::as_u64));
    c.tol = c.tol.or_else(|| v.pointer("/input/tolerances/numericTol").and_then(Value::as_f64));
    c.delta_margin = c.delta_margin.or_else(|| v.pointer("/input/tolerances/boundaryMargin").and_then(Value::as_f64));
    c.samples = c.samples.or_else(|| v.pointer("/input/samples").and_then(Value::as_u64).map(|s| s as usize));
    c.sep_degree = c.sep_degree.or_else(|| v.pointer("/input/sepDegree").and_then(Value::as_u64).map(|s| s as u32));
    Ok(())
}

fn run(cli: Cli) -> Result<u8> {
    let (report, common) = match cli.command {
        Command::Check(c) => {
            let opts = options(&c)?;
            let spec = polyhedron(&c)?;
            if let Some(path) = &c.csv {
                write_csv(&spec, &opts, path)?;
            }
            (report::check_report(&spec, &opts), c)
        }
        Command::Delta(w) => {
            let opts = options(&w.common)?;
            let spec = problem(&w, &opts)?;
            (report::delta_report(&spec, &opts), w.common)
        }
        Command::Hull(h) => {
            let mut opts = options(&h.inner.common)?;
            opts.override_hypotheses = h.override_hypotheses;
            let spec = problem(&h.inner, &opts)?;
            if let Some(path) = &h.inner.common.csv {
                write_csv(&spec.polyhedron(), &opts, path)?;
            }
            (report::hull_report(&spec, &opts), h.inner.common)
        }
        Command::Verify(mut v) => {
            merge_prior(&mut v)?;
            let opts = options(&v.inner.common)?;
            let spec = problem(&v.inner, &opts)?;
            let report = report::verify_report(&spec, &opts);
            if let Some(prior) = &v.report {
                let text = fs::read_to_string(prior)?;
                let prior: Value = serde_json::from_str(&text)?;
                let was = prior.pointer("/classification/kind").and_then(Value::as_str);
                let now = report.classification.as_ref().map(|c| c.name());
                if was.is_some() && was != now {
                    eprintln!("warning: classification changed from {:?} to {:?}", was, now);
                }
            }
            (report, v.inner.common)
        }
        Command::SampleGamma(c) => {
            let opts = options(&c)?;
            let spec = polyhedron(&c)?;
            let (csv, failures) = report::gamma_csv(&spec, &opts)?;
            match &c.csv {
                Some(path) => fs::write(path, csv).with_context(|| format!("writing {}", path.display()))?,
                None => print!("{csv}"),
            }
            if failures > 0 {
                eprintln!("warning: {failures} fiber solve(s) failed");
            }
            return Ok(0);
        }
    };
    emit(&report, &common)?;
    for e in &report.errors {
        eprintln!("error: {e}");
    }
    Ok(report::exit_code(&report))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
