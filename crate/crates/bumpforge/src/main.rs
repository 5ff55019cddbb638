use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64 as C64;
use serde::Serialize;

use bumpforge::cli_io::document::load_domain_arg;
use bumpforge::cli_io::parse_expression;
use bumpforge::cli_io::print_expression;
use bumpforge::cli_io::schema::{xi_to_text, Certificate};
use bumpforge::cli_io::slice::{export_slice, SliceSpec};
use bumpforge::exceptional::{ClassVerdict, ExceptionalError};
use bumpforge::pipeline::{
    analyze, bump, validate_domain, zmodel_from_certificate, BumpOptions, ModelDomain, PipelineError,
};
use bumpforge::polyalg::{infer_weights, rat, WeightSignature};
use bumpforge::verifier::{verify_certificate, VerificationReport, VerifyOptions};

// stdout writes that tolerate a closed pipe
macro_rules! out {
    ($($arg:tt)*) => {{
        use std::io::Write;
        let _ = writeln!(std::io::stdout().lock(), $($arg)*);
    }};
}

const OK: u8 = 0;
const NOT_APPLICABLE: u8 = 1;
const FAIL: u8 = 2;
const INPUT: u8 = 3;

#[derive(Parser)]
#[command(name = "bumpforge", version, about = "Bump construction and verification for weighted model domains in C^3")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Relative slack for strict inequalities.
    #[arg(long, global = true, default_value_t = 1e-10)]
    tol: f64,
    /// Sample count for sampled checks.
    #[arg(long, global = true, default_value_t = 20_000)]
    samples: usize,
    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Args)]
struct DomainArgs {
    /// Expression, expression file, or JSON domain document.
    domain: String,
    /// Weights `m1,m2`.
    #[arg(long, value_parser = parse_weights)]
    weights: Option<(u32, u32)>,
    /// Guess the weights from the support when none are given.
    #[arg(long)]
    infer_weights: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Exceptional curves, invariants and classification.
    Analyze(DomainArgs),
    /// Construct and self-verify a bump certificate.
    Bump {
        #[command(flatten)]
        domain: DomainArgs,
        #[arg(long)]
        out: Option<String>,
    },
    /// Re-verify a certificate.
    Verify { cert: String },
    /// Tabulate rho, G and rho - G along a ray or plane through 0.
    Slice {
        cert: String,
        /// Ray direction `a,b` (complex entries like `1+2*i`).
        #[arg(long, conflicts_with_all = ["u", "v"])]
        ray: Option<String>,
        /// First spanning vector of a plane.
        #[arg(long, requires = "v")]
        u: Option<String>,
        #[arg(long, requires = "u")]
        v: Option<String>,
        /// Ray length, or half-width of the plane square; defaults to 90% of the safe size.
        #[arg(long)]
        extent: Option<f64>,
        #[arg(long, default_value_t = 200)]
        resolution: usize,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        out: Option<String>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

fn parse_weights(s: &str) -> Result<(u32, u32), String> {
    let (a, b) = s.split_once(',').ok_or("expected m1,m2")?;
    Ok((a.trim().parse().map_err(|e| format!("{e}"))?, b.trim().parse().map_err(|e| format!("{e}"))?))
}

struct Failure(u8, String);

fn pipeline_code(e: &PipelineError) -> u8 {
    match e {
        PipelineError::NotApplicable { .. }
        | PipelineError::OrderCondition(_)
        | PipelineError::Exceptional(ExceptionalError::InfiniteType(_))
        | PipelineError::Exceptional(ExceptionalError::Unrepresentable(_)) => NOT_APPLICABLE,
        PipelineError::NotRealValued
        | PipelineError::PluriharmonicInP
        | PipelineError::QWeightTooLow(_)
        | PipelineError::EmptyModel
        | PipelineError::NotPsh { .. }
        | PipelineError::Weights(_)
        | PipelineError::Schema(_) => INPUT,
        _ => FAIL,
    }
}

fn load_domain(args: &DomainArgs, json: bool) -> Result<ModelDomain, Failure> {
    let loaded = load_domain_arg(&args.domain).map_err(|e| Failure(INPUT, e.to_string()))?;
    let (m1, m2) = match (args.weights, loaded.weights) {
        (Some(w), _) => w,
        (None, Some([a, b])) => (a, b),
        (None, None) if args.infer_weights => {
            let inf = infer_weights(&loaded.poly).map_err(|e| Failure(INPUT, e.to_string()))?;
            if !json {
                eprintln!(
                    "note: inferred weights ({}, {}); pass --weights to fix them",
                    inf.weights.m1, inf.weights.m2
                );
            }
            (inf.weights.m1, inf.weights.m2)
        }
        (None, None) => return Err(Failure(INPUT, "weights required: pass --weights m1,m2 or --infer-weights".into())),
    };
    let w = WeightSignature::new(m1, m2).map_err(|e| Failure(INPUT, e.to_string()))?;
    validate_domain(&loaded.text, &loaded.poly, w).map_err(|e| Failure(pipeline_code(&e), e.to_string()))
}

#[derive(Serialize)]
struct CurveRow {
    xi: String,
    lines: usize,
    mu: u32,
    two_m: u32,
    two_m_over_nu: String,
    order_condition: bool,
    warnings: Vec<String>,
}

#[derive(Serialize)]
struct AnalyzeOutput {
    weights: [u32; 2],
    sigma: [u32; 2],
    p: String,
    q: String,
    classification: String,
    curves: Vec<CurveRow>,
    degenerate_samples: usize,
    samples: usize,
    failure_witness: Option<[f64; 4]>,
}

fn run_analyze(cli: &Cli, args: &DomainArgs) -> Result<u8, Failure> {
    let d = load_domain(args, cli.json)?;
    let a = analyze(&d, cli.seed).map_err(|e| Failure(pipeline_code(&e), e.to_string()))?;
    let out = AnalyzeOutput {
        weights: [d.w.m1, d.w.m2],
        sigma: [d.w.sigma1, d.w.sigma2],
        p: print_expression(&d.p),
        q: print_expression(&d.q),
        classification: a.classification.verdict.to_string(),
        curves: a
            .curves
            .iter()
            .zip(&a.invariants)
            .map(|(c, i)| CurveRow {
                xi: xi_to_text(&c.xi),
                lines: c.lines.len(),
                mu: i.mu,
                two_m: i.two_m,
                two_m_over_nu: rat(i.two_m as i64, d.w.nu as i64).to_string(),
                order_condition: i.order_ok,
                warnings: i.warnings.clone(),
            })
            .collect(),
        degenerate_samples: a.classification.degenerate_samples,
        samples: a.classification.samples,
        failure_witness: a.classification.failure_witness,
    };
    if cli.json {
        out!("{}", serde_json::to_string_pretty(&out).expect("plain data"));
    } else {
        out!("weights ({}, {}), sigma ({}, {})", out.weights[0], out.weights[1], out.sigma[0], out.sigma[1]);
        out!("P = {}", out.p);
        out!("Q = {}", out.q);
        for c in &out.curves {
            out!(
                "curve xi = {}: {} line(s), mu = {}, 2M = {} (2M/nu = {}), order condition {}",
                c.xi,
                c.lines,
                c.mu,
                c.two_m,
                c.two_m_over_nu,
                if c.order_condition { "holds" } else { "fails" }
            );
            for w in &c.warnings {
                out!("  warning: {w}");
            }
        }
        out!("{}", out.classification);
        if let Some(w) = out.failure_witness {
            out!("witness {w:?}");
        }
    }
    Ok(if a.classification.verdict == ClassVerdict::NotApplicable { NOT_APPLICABLE } else { OK })
}

fn print_report(cli: &Cli, rep: &VerificationReport) {
    if cli.json {
        out!("{}", serde_json::to_string_pretty(rep).expect("plain data"));
        return;
    }
    for c in &rep.checks {
        out!(
            "{:<13} {} margin {:+.3e} ({} samples) {}",
            c.name,
            if c.passed { "PASS" } else { "FAIL" },
            c.margin,
            c.samples,
            c.detail
        );
        if let Some(w) = c.witness {
            out!("              witness z = ({:+.6e}{:+.6e}i, {:+.6e}{:+.6e}i)", w[0], w[1], w[2], w[3]);
        }
    }
    let verdict = if rep.not_applicable {
        "NOT_APPLICABLE"
    } else if rep.passed {
        "PASS"
    } else {
        "FAIL"
    };
    out!("{verdict} in {:.1}s (seed {})", rep.seconds, rep.seed);
}

fn report_code(rep: &VerificationReport) -> u8 {
    if rep.not_applicable {
        NOT_APPLICABLE
    } else if rep.passed {
        OK
    } else {
        FAIL
    }
}

fn write_out(path: Option<&str>, body: &str) -> Result<(), Failure> {
    match path {
        Some(p) => std::fs::write(p, body).map_err(|e| Failure(FAIL, format!("writing {p}: {e}"))),
        None => {
            out!("{body}");
            Ok(())
        }
    }
}

fn run_bump(cli: &Cli, args: &DomainArgs, out: Option<&str>) -> Result<u8, Failure> {
    let d = load_domain(args, cli.json)?;
    let opts = BumpOptions { seed: cli.seed, verify_samples: cli.samples, tol: cli.tol };
    let cert = bump(&d, &opts).map_err(|e| Failure(pipeline_code(&e), e.to_string()))?;
    let passed = cert.verification.as_ref().is_some_and(|v| v.passed);
    write_out(out, &cert.to_json())?;
    if out.is_some() && !cli.json {
        out!(
            "{}: delta {:.4e}, R {}, K {}, self-check {}",
            cert.classification,
            cert.bump.delta,
            cert.radius,
            cert.coordinate_change.k,
            if passed { "PASS" } else { "FAIL" }
        );
    }
    Ok(if passed { OK } else { FAIL })
}

fn read_cert(path: &str) -> Result<Certificate, Failure> {
    let body = std::fs::read_to_string(path).map_err(|e| Failure(INPUT, format!("reading {path}: {e}")))?;
    Certificate::from_json(&body).map_err(|e| Failure(INPUT, e.to_string()))
}

fn run_verify(cli: &Cli, path: &str) -> Result<u8, Failure> {
    let cert = read_cert(path)?;
    let rep = verify_certificate(&cert, &VerifyOptions { samples: cli.samples, seed: cli.seed, tol: cli.tol });
    print_report(cli, &rep);
    Ok(report_code(&rep))
}

fn parse_vector(s: &str) -> Result<[C64; 2], Failure> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 2 {
        return Err(Failure(INPUT, format!("expected two entries in `{s}`")));
    }
    let mut out = [C64::new(0.0, 0.0); 2];
    for (k, p) in parts.iter().enumerate() {
        let poly = parse_expression(p).map_err(|e| Failure(INPUT, e.to_string()))?;
        if poly.terms().any(|(e, _)| e.iter().any(|x| *x > 0)) {
            return Err(Failure(INPUT, format!("`{p}` is not a constant")));
        }
        out[k] = poly.eval([C64::new(0.0, 0.0); 2]);
    }
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn run_slice(
    path: &str,
    ray: Option<&str>,
    u: Option<&str>,
    v: Option<&str>,
    extent: Option<f64>,
    resolution: usize,
    format: Format,
    out: Option<&str>,
) -> Result<u8, Failure> {
    let cert = read_cert(path)?;
    let (_, model) = zmodel_from_certificate(&cert).map_err(|e| Failure(INPUT, e.to_string()))?;
    let spec = match (ray, u, v) {
        (_, Some(u), Some(v)) => {
            let (u, v) = (parse_vector(u)?, parse_vector(v)?);
            let reach = bumpforge::sampling::norm(u) + bumpforge::sampling::norm(v);
            let extent = extent.unwrap_or(0.9 * model.radius / reach.max(f64::MIN_POSITIVE));
            SliceSpec::Plane { u, v, extent, resolution }
        }
        (r, _, _) => {
            let direction = parse_vector(r.unwrap_or("1,1"))?;
            SliceSpec::Ray { direction, t_max: extent.unwrap_or(0.9 * model.radius), resolution }
        }
    };
    let table = export_slice(&model, &spec).map_err(|e| Failure(INPUT, e.to_string()))?;
    let body = match format {
        Format::Csv => table.to_csv().map_err(|e| Failure(FAIL, e.to_string()))?,
        Format::Json => table.to_json(),
    };
    write_out(out, body.trim_end())?;
    Ok(OK)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { INPUT } else { OK };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let res = match &cli.command {
        Command::Analyze(args) => run_analyze(&cli, args),
        Command::Bump { domain, out } => run_bump(&cli, domain, out.as_deref()),
        Command::Verify { cert } => run_verify(&cli, cert),
        Command::Slice { cert, ray, u, v, extent, resolution, format, out } => {
            run_slice(cert, ray.as_deref(), u.as_deref(), v.as_deref(), *extent, *resolution, *format, out.as_deref())
        }
    };
    match res {
        Ok(c) => ExitCode::from(c),
        Err(Failure(c, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(c)
        }
    }
}
