use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use s3_sga::classical::{self, Method, MotionReport, PhaseState, Vec4};
use s3_sga::operators::Representation;
use s3_sga::verify::{self, SuiteOptions};
use s3_sga::Error;

/// Spectrum generating algebra so(4,2) of the free particle on S³.
#[derive(Parser)]
#[command(name = "s3-sga", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the operator-identity suite on the representation truncated at level N.
    Verify(VerifyArgs),
    /// Print the Hamiltonian spectrum with degeneracies.
    Spectrum(SpectrumArgs),
    /// Build the energy eigenstate A+_{μ1}…A+_{μn}|0⟩ as a harmonic polynomial.
    Eigenstates(EigenstateArgs),
    /// Integrate the classical motion and check its constants of motion.
    Simulate(SimulateArgs),
    /// Compare finite-difference Poisson brackets with the Dirac brackets.
    BracketOracle(OracleArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Args)]
struct Output {
    /// Write the result here instead of stdout.
    #[arg(long, short)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Args)]
struct VerifyArgs {
    /// Truncation level N (at least 2).
    #[arg(long, default_value_t = 6)]
    level: usize,
    /// Constant shift c in T~_ab = T_ab + c g_ab.
    #[arg(long, default_value_t = 2.0, allow_negative_numbers = true)]
    c: f64,
    /// Override a tolerance: NAME=VALUE, where NAME is a prefix of check names.
    #[arg(long = "tol", value_parser = parse_override)]
    tolerances: Vec<(String, f64)>,
    /// Record wall-clock seconds per check.
    #[arg(long)]
    timings: bool,
    #[command(flatten)]
    out: Output,
}

#[derive(Args)]
struct SpectrumArgs {
    #[arg(long, default_value_t = 6)]
    level: usize,
    #[command(flatten)]
    out: Output,
}

#[derive(Args)]
struct EigenstateArgs {
    /// Truncation level; must exceed the number of indices.
    #[arg(long, default_value_t = 6)]
    level: usize,
    /// Vector indices μ in 1..=4, comma separated; empty for the ground state.
    #[arg(long, value_delimiter = ',', num_args = 0..)]
    indices: Vec<usize>,
    #[command(flatten)]
    out: Output,
}

#[derive(Args)]
struct SimulateArgs {
    /// Initial position x1,x2,x3,x4.
    #[arg(long, value_parser = parse_vec4, default_value = "1,0,0,0", allow_hyphen_values = true)]
    x0: Vec4,
    /// Initial momentum p1,p2,p3,p4.
    #[arg(long, value_parser = parse_vec4, default_value = "0,1,0,0", allow_hyphen_values = true)]
    p0: Vec4,
    /// End time; defaults to ten periods π/√H.
    #[arg(long)]
    t_end: Option<f64>,
    /// Step size; defaults to a thousandth of a period.
    #[arg(long)]
    dt: Option<f64>,
    /// Sample the closed-form solution instead of integrating.
    #[arg(long)]
    analytic: bool,
    /// Write the constants-of-motion report here as JSON.
    #[arg(long)]
    report: Option<PathBuf>,
    #[arg(long = "tol", value_parser = parse_override)]
    tolerances: Vec<(String, f64)>,
    /// Trajectory destination (csv or json; text prints the report only).
    #[command(flatten)]
    out: Output,
}

#[derive(Args)]
struct OracleArgs {
    /// Number of random ambient states.
    #[arg(long, default_value_t = 20)]
    states: usize,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// Central-difference step.
    #[arg(long, default_value_t = classical::ORACLE_STEP)]
    step: f64,
    #[arg(long = "tol", value_parser = parse_override)]
    tolerances: Vec<(String, f64)>,
    #[command(flatten)]
    out: Output,
}

fn parse_override(s: &str) -> Result<(String, f64), String> {
    let (name, value) = s.rsplit_once('=').ok_or("expected NAME=VALUE")?;
    let value: f64 = value.trim().parse().map_err(|e| format!("bad tolerance `{value}`: {e}"))?;
    Ok((name.trim().to_string(), value))
}

fn parse_vec4(s: &str) -> Result<Vec4, String> {
    let parts: Vec<f64> = s
        .split(',')
        .map(|v| v.trim().parse::<f64>().map_err(|e| format!("bad number `{v}`: {e}")))
        .collect::<Result<_, _>>()?;
    parts.try_into().map_err(|p: Vec<f64>| format!("expected 4 comma-separated numbers, got {}", p.len()))
}

/// Failure modes mapped onto exit codes.
enum Failure {
    Usage(String),
    Checks,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn emit(out: &Output, body: &str) -> Result<(), Failure> {
    match &out.output {
        Some(path) => write_file(path, body),
        None => {
            io::stdout().write_all(body.as_bytes())?;
            Ok(())
        }
    }
}

fn write_file(path: &Path, body: &str) -> Result<(), Failure> {
    fs::write(path, body).map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))
}

fn unsupported(out: &Output, what: &str) -> Failure {
    let name = match out.format {
        Format::Json => "json",
        Format::Csv => "csv",
        Format::Text => "text",
    };
    Failure::Usage(format!("{what} output does not support --format {name}"))
}

fn json<T: Serialize>(value: &T) -> Result<String, Failure> {
    serde_json::to_string_pretty(value)
        .map(|s| s + "\n")
        .map_err(|e| Failure::Usage(e.to_string()))
}

fn verdict(pass: bool) -> Result<(), Failure> {
    if pass {
        Ok(())
    } else {
        Err(Failure::Checks)
    }
}

fn cmd_verify(args: &VerifyArgs) -> Result<(), Failure> {
    let opts = SuiteOptions {
        c: args.c,
        timings: args.timings,
        ..SuiteOptions::default()
    };
    let mut report = verify::verify_level(args.level, opts)?;
    report.override_tolerances(&args.tolerances)?;
    let body = match args.out.format {
        Format::Json => report.to_json()?,
        Format::Text => report.to_text(),
        Format::Csv => return Err(unsupported(&args.out, "verify")),
    };
    emit(&args.out, &body)?;
    verdict(report.pass)
}

fn cmd_spectrum(args: &SpectrumArgs) -> Result<(), Failure> {
    let rep = Representation::build(args.level)?;
    let rows = verify::spectrum_table(&rep)?;
    let body = match args.out.format {
        Format::Json => json(&rows)?,
        Format::Csv => {
            let mut s = String::from("n,E,degeneracy,measured,residual\n");
            for r in &rows {
                s += &format!("{},{:?},{},{:?},{:?}\n", r.level, r.exact, r.degeneracy, r.measured, r.residual);
            }
            s
        }
        Format::Text => {
            let mut s = format!("{:>3} {:>8} {:>11} {:>22} {:>10}\n", "n", "E", "degeneracy", "measured", "residual");
            for r in &rows {
                s += &format!(
                    "{:>3} {:>8} {:>11} {:>22.15} {:>10.2e}\n",
                    r.level, r.exact, r.degeneracy, r.measured, r.residual
                );
            }
            s
        }
    };
    emit(&args.out, &body)?;
    verdict(rows.iter().all(|r| r.multiplicity == r.degeneracy && r.residual <= verify::TOL_ALGEBRA))
}

#[derive(Serialize)]
struct Term {
    exponents: [u32; 4],
    re: f64,
    im: f64,
}

#[derive(Serialize)]
struct EigenstateJson<'a> {
    indices: &'a [usize],
    degree: usize,
    energy: usize,
    terms: Vec<Term>,
}

fn cmd_eigenstates(args: &EigenstateArgs) -> Result<(), Failure> {
    let rep = Representation::build(args.level)?;
    let poly = verify::build_eigenstates(&rep, &args.indices)?;
    let n = args.indices.len();
    let scale = poly.max_abs().max(f64::MIN_POSITIVE);
    let terms: Vec<Term> = poly
        .terms()
        .filter(|(_, c)| c.norm() > 1e-12 * scale)
        .map(|(e, c)| Term {
            exponents: *e,
            re: c.re,
            im: c.im,
        })
        .collect();
    let body = match args.out.format {
        Format::Json => json(&EigenstateJson {
            indices: &args.indices,
            degree: n,
            energy: n * (n + 2),
            terms,
        })?,
        Format::Csv => {
            let mut s = String::from("e1,e2,e3,e4,re,im\n");
            for t in &terms {
                let [a, b, c, d] = t.exponents;
                s += &format!("{a},{b},{c},{d},{:?},{:?}\n", t.re, t.im);
            }
            s
        }
        Format::Text => {
            let mut s = format!("degree {n}, energy {}, {} terms\n", n * (n + 2), terms.len());
            for t in &terms {
                let mono: Vec<String> = t
                    .exponents
                    .iter()
                    .enumerate()
                    .filter(|(_, e)| **e > 0)
                    .map(|(i, e)| if *e == 1 { format!("x{}", i + 1) } else { format!("x{}^{e}", i + 1) })
                    .collect();
                let mono = if mono.is_empty() { "1".to_string() } else { mono.join(" ") };
                s += &format!("  ({:+.12e} {:+.12e}i) {mono}\n", t.re, t.im);
            }
            s
        }
    };
    emit(&args.out, &body)
}

fn cmd_simulate(args: &SimulateArgs) -> Result<(), Failure> {
    let (norm_defect, orth_defect) = classical::constraint_defects(&args.x0, &args.p0);
    if norm_defect > 1e-9 || orth_defect > 1e-9 {
        eprintln!(
            "warning: initial state is off the constraint surface (|x.x - 1| = {norm_defect:e}, |x.p| = {orth_defect:e}); projecting"
        );
    }
    let state = PhaseState::projected(args.x0, args.p0)?;
    let hamiltonian = state.hamiltonian();
    let period = classical::period(hamiltonian);
    let t_end = match (args.t_end, period) {
        (Some(t), _) => t,
        (None, Some(p)) => 10.0 * p,
        (None, None) => 1.0,
    };
    let dt = match (args.dt, period) {
        (Some(dt), _) => dt,
        (None, Some(p)) => p / 1000.0,
        (None, None) => t_end / 100.0,
    };
    let traj = if args.analytic {
        classical::analytic_trajectory(&state, t_end, dt)?
    } else {
        classical::integrate(&state, t_end, dt)?
    };
    let mut report = classical::check_motion_constants(&traj);
    report.override_tolerances(&args.tolerances)?;
    match args.out.format {
        Format::Csv => emit(&args.out, &traj.to_csv())?,
        Format::Json => emit(&args.out, &traj.to_json()?)?,
        Format::Text if args.out.output.is_some() => return Err(unsupported(&args.out, "trajectory file")),
        Format::Text => {}
    }
    if let Some(path) = &args.report {
        write_file(path, &report.to_json()?)?;
    }
    let method = match traj.method {
        Method::Analytic => "analytic",
        Method::Rk4 => "rk4",
    };
    let summary = format!(
        "{method}: {} samples, H = {hamiltonian}, t_end = {t_end}, dt = {dt}\n{}",
        traj.len(),
        report.to_text()
    );
    // keep stdout clean when it carries the trajectory
    if args.out.output.is_none() && !matches!(args.out.format, Format::Text) {
        eprint!("{summary}");
    } else {
        print!("{summary}");
    }
    if let MotionReport::Degenerate { .. } = report {
        return Ok(());
    }
    verdict(report.pass())
}

fn cmd_bracket_oracle(args: &OracleArgs) -> Result<(), Failure> {
    let states = classical::random_ambient_states(args.states, args.seed);
    let mut report = classical::check_bracket_oracle(&states, args.step)?;
    report.override_tolerances(&args.tolerances)?;
    let body = match args.out.format {
        Format::Json => report.to_json()?,
        Format::Text => report.to_text(),
        Format::Csv => return Err(unsupported(&args.out, "bracket-oracle")),
    };
    emit(&args.out, &body)?;
    verdict(report.pass)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Verify(a) => cmd_verify(a),
        Command::Spectrum(a) => cmd_spectrum(a),
        Command::Eigenstates(a) => cmd_eigenstates(a),
        Command::Simulate(a) => cmd_simulate(a),
        Command::BracketOracle(a) => cmd_bracket_oracle(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Checks) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
