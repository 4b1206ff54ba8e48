//! Command-line front end. Every subcommand delegates to one library pipeline.
//!
//! Exit codes: `0` success or Member, `2` verified NonMember or a violated condition,
//! `1` errors and Inconclusive verdicts.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::certificates::{
    build_schlafli_certificate, evaluate_schlafli_exact, schlafli_graph_28, verify_schlafli_certificate, SCHLAFLI_ANCHOR,
};
use crate::error::{Error, Result};
use crate::frames::{canonicalize_signs, etf_28_7, etf_to_srg, simplex_etf};
use crate::io::{
    certificate_metadata, dense_to_csv, graph_to_json, moments_sidecar, rational_to_csv, read_json, read_matrix_csv,
    read_vector_system, sidecar_path, vector_system_to_json, witness_block_size, witness_sidecar, write_json,
    MatrixData,
};
use crate::membership::{
    cross_section, cut_membership, e2_membership, e4_feasibility, e4_membership, random_directions, MembershipVerdict,
    RayOptions, Status, DEFAULT_ANGLES, DEFAULT_MAX_ITER,
};
use crate::pseudomoments::{etf_degree4, laurent_moments, validate_degree4, validate_string_moments, Degree4Moments};
use crate::witnesses::{etf_witness, moments_to_witness, validate_witness, BlockWitness};

/// Default numerical tolerance (overridden by `ELLIPTOPE4_TOL`, then by `--tol`).
pub const DEFAULT_TOL: f64 = 1e-8;

/// Environment variable overriding the default tolerance.
pub const TOL_ENV: &str = "ELLIPTOPE4_TOL";

#[derive(Parser, Debug)]
#[command(name = "elliptope4", version, about = "Degree-4 pseudomoments, Gram-vector witnesses and E₄ certificates")]
struct Cli {
    /// Numerical tolerance (default 1e-8, or $ELLIPTOPE4_TOL).
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Construct vector systems.
    #[command(subcommand)]
    Frame(FrameCmd),
    /// Construct degree-4 pseudomoment matrices.
    #[command(subcommand)]
    Moments(MomentsCmd),
    /// Construct block witnesses.
    #[command(subcommand)]
    Witness(WitnessCmd),
    /// Validate matrices and certificates.
    #[command(subcommand)]
    Verify(VerifyCmd),
    /// Membership oracles.
    #[command(subcommand)]
    Check(CheckCmd),
    /// Boundary radii of C, E₄ and E₂ in a random 2-plane through I_N.
    CrossSection(CrossSectionArgs),
}

#[derive(Args, Debug)]
struct Output {
    /// Output file (stdout when omitted).
    #[arg(long = "out", short = 'o')]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum FrameCmd {
    /// Simplex ETF of N vectors in R^{N−1}.
    Simplex {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        output: Output,
    },
    /// The sign-canonical 28-vector ETF in R⁷ (and its Schläfli graph).
    Etf287 {
        /// Also write the 27-vertex graph JSON here.
        #[arg(long)]
        graph: Option<PathBuf>,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Subcommand, Debug)]
enum MomentsCmd {
    /// ETF pseudomoments for a frame file.
    Etf {
        #[arg(long)]
        frame: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// Laurent's parity pseudomoments of degree D on N variables.
    Laurent {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Subcommand, Debug)]
enum WitnessCmd {
    /// Block witness from a degree-4 matrix extending Gram(frame).
    FromMoments {
        /// Degree-4 matrix CSV (pair-major).
        moments: PathBuf,
        #[arg(long)]
        frame: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// Closed-form witness of an ETF.
    Etf {
        #[arg(long)]
        frame: PathBuf,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Subcommand, Debug)]
enum VerifyCmd {
    /// Check the degree-4 pseudomoment conditions of a pair-major CSV.
    Degree4 { moments: PathBuf },
    /// Check membership in B(N, r); with --frame also check vᵀMv = N².
    Witness {
        witness: PathBuf,
        /// Block size (read from the JSON sidecar when omitted).
        #[arg(long)]
        r: Option<usize>,
        #[arg(long)]
        frame: Option<PathBuf>,
    },
    /// Build and exactly verify the Schläfli inequality certificate.
    Schlafli {
        /// Proof bundle path (stdout when omitted).
        #[command(flatten)]
        output: Output,
        /// Also export the 784×784 rational certificate as CSV (+ JSON metadata sidecar).
        #[arg(long)]
        certificate: Option<PathBuf>,
        /// Report LDL progress on stderr.
        #[arg(long)]
        progress: bool,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SetArg {
    Cut,
    E2,
    E4,
}

#[derive(Subcommand, Debug)]
enum CheckCmd {
    /// Test X = Gram(frame) (or a Gram CSV) for membership in C, E₂ or E₄.
    Membership {
        #[arg(long, value_enum)]
        set: SetArg,
        #[arg(long, conflicts_with = "gram", required_unless_present = "gram")]
        frame: Option<PathBuf>,
        #[arg(long)]
        gram: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_MAX_ITER)]
        max_iter: usize,
    },
}

#[derive(Args, Debug)]
struct CrossSectionArgs {
    #[arg(long, default_value_t = 5)]
    n: usize,
    /// Seed of the xorshift generator drawing the two directions.
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_ANGLES)]
    angles: usize,
    #[arg(long, default_value_t = 2000)]
    max_iter: usize,
    #[command(flatten)]
    output: Output,
}

/// Outcome of a subcommand before mapping to an exit code.
enum Outcome {
    Success,
    Violation(String),
    Inconclusive(String),
}

/// Parse `args` (including the program name) and run; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let tol = match resolve_tol(cli.tol) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {e}");
            return 1;
        }
    };
    match dispatch(cli.command, tol) {
        Ok(Outcome::Success) => 0,
        Ok(Outcome::Violation(msg)) => {
            eprintln!("{msg}");
            2
        }
        Ok(Outcome::Inconclusive(msg)) => {
            eprintln!("{msg}");
            1
        }
        Err(e @ Error::MaximalEtf { .. }) => {
            eprintln!("{e}");
            2
        }
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

fn resolve_tol(flag: Option<f64>) -> Result<f64> {
    let tol = match (flag, std::env::var(TOL_ENV)) {
        (Some(t), _) => t,
        (None, Ok(s)) => s.trim().parse().map_err(|_| Error::Parse(format!("{TOL_ENV}={s:?} is not a number")))?,
        (None, Err(_)) => DEFAULT_TOL,
    };
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::Invalid(format!("tolerance must be positive, got {tol}")));
    }
    Ok(tol)
}

fn emit(output: &Output, text: &str) -> Result<()> {
    match &output.out {
        Some(p) => {
            if p.as_os_str().is_empty() {
                return Err(Error::Invalid("empty output path".into()));
            }
            std::fs::write(p, text)?;
        }
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn emit_json(output: &Output, value: &serde_json::Value) -> Result<()> {
    emit(output, &(serde_json::to_string_pretty(value)? + "\n"))
}

/// Write the sidecar next to `-o` (nothing when printing to stdout).
fn emit_sidecar(output: &Output, value: &serde_json::Value) -> Result<()> {
    match &output.out {
        Some(p) => write_json(value, sidecar_path(p)),
        None => Ok(()),
    }
}

fn read_moments(path: &Path) -> Result<Degree4Moments> {
    match read_matrix_csv(path)? {
        MatrixData::Exact(m) => Degree4Moments::from_exact(m),
        MatrixData::Float(m) => Degree4Moments::new(m),
    }
}

fn moments_csv(y: &Degree4Moments) -> String {
    match y.exact() {
        Some(e) => rational_to_csv(e),
        None => dense_to_csv(y.matrix()),
    }
}

fn dispatch(command: Command, tol: f64) -> Result<Outcome> {
    match command {
        Command::Frame(FrameCmd::Simplex { n, output }) => {
            emit_json(&output, &vector_system_to_json(&simplex_etf(n)?))?;
        }
        Command::Frame(FrameCmd::Etf287 { graph, output }) => {
            let sys = canonicalize_signs(&etf_28_7(), SCHLAFLI_ANCHOR, 1e-10)?;
            if let Some(path) = graph {
                let (g, params) = etf_to_srg(&sys, SCHLAFLI_ANCHOR, 1e-10)?;
                eprintln!("graph on {} vertices: {params:?}", g.n);
                write_json(&graph_to_json(&g), path)?;
            }
            emit_json(&output, &vector_system_to_json(&sys))?;
        }
        Command::Moments(MomentsCmd::Etf { frame, output }) => {
            let sys = read_vector_system(frame)?;
            let y = etf_degree4(&sys, tol)?;
            emit(&output, &moments_csv(&y))?;
            emit_sidecar(&output, &moments_sidecar(y.n()))?;
        }
        Command::Moments(MomentsCmd::Laurent { n, d, output }) => {
            let z = laurent_moments(n, d)?;
            let report = validate_string_moments(&z, tol)?;
            let text = match &z.exact {
                Some(e) => rational_to_csv(e),
                None => dense_to_csv(&z.z),
            };
            emit(&output, &text)?;
            let indexing = if d == 4 { "pair-major" } else { "string-lex" };
            emit_sidecar(&output, &json!({ "N": n, "d": d, "indexing": indexing }))?;
            if !report.passed {
                return Ok(Outcome::Violation(format!("Laurent moments fail validation: {:?}", report.conditions)));
            }
        }
        Command::Witness(WitnessCmd::FromMoments { moments, frame, output }) => {
            let sys = read_vector_system(frame)?;
            let w = moments_to_witness(&read_moments(&moments)?, &sys, tol)?;
            emit(&output, &dense_to_csv(&w.m))?;
            emit_sidecar(&output, &witness_sidecar(w.n(), w.r()))?;
        }
        Command::Witness(WitnessCmd::Etf { frame, output }) => {
            let sys = read_vector_system(frame)?;
            let w = etf_witness(&sys, tol)?;
            emit(&output, &dense_to_csv(&w.m))?;
            emit_sidecar(&output, &witness_sidecar(w.n(), w.r()))?;
        }
        Command::Verify(VerifyCmd::Degree4 { moments }) => {
            let report = validate_degree4(&read_moments(&moments)?, tol)?;
            println!("{}", serde_json::to_string_pretty(&report)?);
            if !report.passed {
                return Ok(Outcome::Violation(format!("degree-4 conditions violated (worst {:e})", report.worst_violation)));
            }
        }
        Command::Verify(VerifyCmd::Witness { witness, r, frame }) => {
            let r = match r {
                Some(r) => r,
                None => witness_block_size(&read_json(sidecar_path(&witness))?)?,
            };
            let w = BlockWitness::new(read_matrix_csv(&witness)?.to_dense(), r)?;
            let report = validate_witness(&w, tol)?;
            let mut doc = serde_json::to_value(&report)?;
            let mut ok = report.passed;
            if let Some(frame) = frame {
                let sys = read_vector_system(frame)?;
                let value = w.objective(&sys)?;
                let target = (sys.n() * sys.n()) as f64;
                let certifies = (value - target).abs() <= tol.max(1e-8) * target;
                doc["objective"] = json!(value);
                doc["certifies"] = json!(certifies);
                ok &= certifies;
            }
            println!("{}", serde_json::to_string_pretty(&doc)?);
            if !ok {
                return Ok(Outcome::Violation("witness check failed".into()));
            }
        }
        Command::Verify(VerifyCmd::Schlafli { output, certificate, progress }) => {
            let graph = schlafli_graph_28()?;
            let cert = build_schlafli_certificate(&graph)?;
            if let Some(path) = certificate {
                std::fs::write(&path, rational_to_csv(&cert.a))?;
                write_json(&certificate_metadata(&cert), sidecar_path(&path))?;
            }
            let bundle = verify_schlafli_certificate(&cert, |done, total| {
                if progress {
                    eprintln!("ldl {done}/{total}");
                }
            })?;
            let z = canonicalize_signs(&etf_28_7(), SCHLAFLI_ANCHOR, 1e-10)?;
            let zg = z.exact_gram().ok_or_else(|| Error::Invalid("etf_28_7 lacks an exact Gram".into()))?;
            let pi: Vec<usize> = (0..28).collect();
            let at_z = evaluate_schlafli_exact(zg, &pi, &cert.signs())?;
            let mut doc = bundle.to_json();
            doc["value_at_etf"] = json!(at_z.lhs_exact);
            emit_json(&output, &doc)?;
        }
        Command::Check(CheckCmd::Membership { set, frame, gram, max_iter }) => {
            let (sys, x) = match (frame, gram) {
                (Some(f), _) => {
                    let sys = read_vector_system(f)?;
                    let x = sys.gram();
                    (Some(sys), x)
                }
                (None, Some(g)) => (None, read_matrix_csv(g)?.to_dense()),
                (None, None) => return Err(Error::Invalid("one of --frame or --gram is required".into())),
            };
            let verdict = match (set, &sys) {
                (SetArg::E2, _) => e2_membership(&x, tol)?,
                (SetArg::Cut, _) => cut_membership(&x, tol.max(1e-9), max_iter)?,
                (SetArg::E4, Some(sys)) => e4_feasibility(sys, tol.max(1e-9), max_iter)?,
                (SetArg::E4, None) => e4_membership(&x, tol.max(1e-9), max_iter)?,
            };
            return Ok(report_verdict(&verdict));
        }
        Command::CrossSection(args) => {
            let (a1, a2) = random_directions(args.n, args.seed)?;
            let opts = RayOptions { tol: tol.max(1e-7), max_iter: args.max_iter, ..RayOptions::default() };
            let cs = cross_section(&a1, &a2, args.angles, &opts)?;
            emit(&args.output, &cs.to_csv())?;
            let nest = cs.nesting_violation();
            eprintln!("nesting violation {nest:e}");
        }
    }
    Ok(Outcome::Success)
}

fn report_verdict(v: &MembershipVerdict) -> Outcome {
    let head = format!("{} after {} iterations ({:.3?})", v.label(), v.iterations, v.runtime);
    match &v.status {
        Status::Member(_) => {
            println!("{head}");
            Outcome::Success
        }
        Status::NonMember { gap, separator } => {
            println!("{head}; gap {gap:e}");
            if let Some(s) = separator {
                println!("separator bound {}; W =\n{}", s.bound, dense_to_csv(&s.w).trim_end());
            }
            Outcome::Violation(format!("non-member (gap {gap:e})"))
        }
        Status::Inconclusive { residuals } => {
            println!("{head}");
            let r: Vec<String> = residuals.iter().map(|(k, x)| format!("{k} = {x:e}")).collect();
            Outcome::Inconclusive(format!("inconclusive: {}", r.join(", ")))
        }
    }
}
