//! `gic`: build, verify and solve generalized index coding problems.
//!
//! Every command prints one JSON document on stdout. Exit status: 0 for an
//! affirmative answer, 1 for a certified negative one, 2 for bad input and 3
//! when a search budget runs out.

mod io;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Result};
use clap::{Args, Parser, Subcommand};
use gic_core::catalog::{self, NAMES};
use gic_core::{
    candidate_space, count_solutions, decoding_matrix, gic_from_matroid, gic_from_polymatroid, is_perfect, mu,
    solve_perfect_scalar_binary, verify_code, CodeJson, Error, MatrixJson, ProblemJson, RepresentationJson,
    SearchConfig, Verdict,
};
use serde::Serialize;
use serde_json::json;

use crate::io::{Bundle, Structure};

#[derive(Parser)]
#[command(name = "gic", version, about = "Generalized index coding from matroids and discrete polymatroids")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Input {
    /// Input JSON file; `-` reads standard input.
    #[arg(long, short, default_value = "-")]
    input: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Build the problem of a matroid or discrete polymatroid.
    Construct {
        #[command(flatten)]
        input: Input,
        /// Write the receiver provenance to this file.
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Message dimension of the emitted problem.
        #[arg(long, default_value_t = 1)]
        n: usize,
    },
    /// Check which receivers can decode under a code.
    Verify {
        #[command(flatten)]
        input: Input,
        /// Code file; defaults to the `code` member of the input.
        #[arg(long)]
        code: Option<PathBuf>,
        /// Include a decoding matrix for every receiver that can decode.
        #[arg(long)]
        decoders: bool,
        /// Seed of the randomized decoding checks.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Search for a perfect scalar binary linear code.
    Solve {
        #[command(flatten)]
        input: Input,
        /// Maximum number of candidates examined.
        #[arg(long, default_value_t = 1 << 24)]
        budget: u64,
        /// Search the whole space instead of fixing the invertible block to the identity.
        #[arg(long)]
        no_normalize: bool,
        /// Count the perfect codes instead of stopping at the first.
        #[arg(long)]
        count: bool,
        /// Write the code found to this file.
        #[arg(long)]
        emit_witness: Option<PathBuf>,
        /// Worker threads.
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Search for a representation over GF(q).
    Repcheck {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 2)]
        q: u32,
        /// Maximum number of partial assignments examined.
        #[arg(long, default_value_t = 1 << 24)]
        budget: u64,
    },
    /// The largest number of receivers sharing a Has-set.
    Mu {
        #[command(flatten)]
        input: Input,
    },
    /// Print a bundled instance.
    Examples {
        /// One of eg1, eg3, eg4, u23, u24, hamming.
        name: String,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Status {
    Yes = 0,
    No = 1,
    Budget = 3,
}

struct Reply {
    doc: String,
    status: Status,
}

impl Reply {
    fn new<T: Serialize>(doc: &T, status: Status) -> Result<Self> {
        Ok(Reply { doc: serde_json::to_string(doc)?, status })
    }
}

#[derive(Serialize)]
struct VerifyReply {
    passed: bool,
    perfect: bool,
    length: usize,
    mu: usize,
    receivers: Vec<bool>,
    failing: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    decoders: Option<Vec<Option<Vec<Vec<u32>>>>>,
}

#[derive(Serialize)]
struct SolveReply {
    verdict: &'static str,
    candidates_tested: u64,
    normalized: bool,
    free_entries: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    code: Option<CodeJson>,
}

#[derive(Serialize)]
struct RepcheckReply {
    representable: bool,
    q: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    matrix: Option<MatrixJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    representation: Option<RepresentationJson>,
}

fn construct(input: &Input, trace: Option<&PathBuf>, n: usize) -> Result<Reply> {
    let doc = io::read_document(&input.input)?;
    let c = match io::structure_from(&doc)? {
        Structure::Matroid(m) => gic_from_matroid(&m)?,
        Structure::Polymatroid(d) => gic_from_polymatroid(&d)?,
    };
    if let Some(path) = trace {
        io::write_json(path, &c.trace)?;
    }
    let problem = match n {
        0 => bail!("--n must be positive"),
        1 => c.problem,
        n => c.problem.vectorize(n)?,
    };
    Reply::new(&ProblemJson::from(&problem), Status::Yes)
}

fn verify(input: &Input, code: Option<&PathBuf>, decoders: bool, seed: u64) -> Result<Reply> {
    let doc = io::read_document(&input.input)?;
    let p = io::problem_from(&doc)?;
    let code = match code {
        Some(path) => io::code_from(&io::read_document(path)?, &p)?,
        None => match io::embedded_code(&doc, &p)? {
            Some(code) => code,
            None => bail!("no code given: pass --code or a document with a \"code\" member"),
        },
    };
    let report = verify_code(&p, &code)?;
    let decoders = decoders.then(|| {
        (0..p.receivers().len()).map(|i| decoding_matrix(&p, &code, i, seed).ok().map(|m| m.to_columns())).collect()
    });
    let reply = VerifyReply {
        passed: report.passed(),
        perfect: is_perfect(&p, &code)?,
        length: code.length(),
        mu: mu(&p),
        failing: report.failing(),
        receivers: report.receivers,
        decoders,
    };
    let status = if reply.passed { Status::Yes } else { Status::No };
    Reply::new(&reply, status)
}

fn solve(input: &Input, cfg: SearchConfig, count: bool, witness: Option<&PathBuf>) -> Result<Reply> {
    let p = io::problem_from(&io::read_document(&input.input)?)?;
    if count {
        let space = candidate_space(&p, cfg.normalize_y_block)?;
        let normalized = !space.identity_rows.is_empty();
        let free_entries = space.free_entries();
        return match count_solutions(&p, &cfg) {
            Ok(n) => {
                let doc = json!({ "count": n, "normalized": normalized, "free_entries": free_entries });
                Reply::new(&doc, if n > 0 { Status::Yes } else { Status::No })
            }
            Err(Error::SearchBudgetExceeded { budget }) => {
                let doc = json!({ "count": null, "budget_exceeded": budget, "free_entries": free_entries });
                Reply::new(&doc, Status::Budget)
            }
            Err(e) => Err(e.into()),
        };
    }
    let out = solve_perfect_scalar_binary(&p, &cfg)?;
    let (verdict, code, status) = match &out.verdict {
        Verdict::Found(code) => ("found", Some(CodeJson::from(code)), Status::Yes),
        Verdict::NoneExists => ("none_exists", None, Status::No),
        Verdict::BudgetExceeded => ("budget_exceeded", None, Status::Budget),
    };
    if let (Some(path), Some(code)) = (witness, &code) {
        io::write_json(path, code)?;
    }
    let reply = SolveReply {
        verdict,
        candidates_tested: out.candidates_tested,
        normalized: out.normalized,
        free_entries: out.free_entries,
        code,
    };
    Reply::new(&reply, status)
}

fn repcheck(input: &Input, q: u32, budget: u64) -> Result<Reply> {
    let modulus = io::modulus(q)?;
    let budget = io::require_positive("budget", budget)?;
    let structure = io::structure_from(&io::read_document(&input.input)?)?;
    let search = match structure {
        Structure::Matroid(m) => m.find_representation(modulus, budget).map(|r| {
            r.found().map(|a| RepcheckReply {
                representable: true,
                q,
                matrix: Some(MatrixJson::from(&a)),
                representation: None,
            })
        }),
        Structure::Polymatroid(d) => d.find_representation(modulus, budget).map(|r| {
            r.found().map(|rep| RepcheckReply {
                representable: true,
                q,
                matrix: None,
                representation: Some(RepresentationJson::from(&rep)),
            })
        }),
    };
    match search {
        Ok(Some(reply)) => Reply::new(&reply, Status::Yes),
        Ok(None) => {
            Reply::new(&RepcheckReply { representable: false, q, matrix: None, representation: None }, Status::No)
        }
        Err(Error::SearchBudgetExceeded { budget }) => {
            Reply::new(&json!({ "representable": null, "q": q, "budget_exceeded": budget }), Status::Budget)
        }
        Err(e) => Err(e.into()),
    }
}

fn examples(name: &str) -> Result<Reply> {
    if !NAMES.contains(&name) {
        bail!("unknown example {name:?}; expected one of {}", NAMES.join(", "));
    }
    Reply::new(&Bundle::from(&catalog::instance(name)?), Status::Yes)
}

fn run(cli: Cli) -> Result<Reply> {
    match cli.command {
        Command::Construct { input, trace, n } => construct(&input, trace.as_ref(), n),
        Command::Verify { input, code, decoders, seed } => verify(&input, code.as_ref(), decoders, seed),
        Command::Solve { input, budget, no_normalize, count, emit_witness, jobs } => {
            let budget = io::require_positive("budget", budget)?;
            if jobs == Some(0) {
                bail!("--jobs must be positive");
            }
            let cfg = SearchConfig { normalize_y_block: !no_normalize, budget, jobs };
            solve(&input, cfg, count, emit_witness.as_ref())
        }
        Command::Repcheck { input, q, budget } => repcheck(&input, q, budget),
        Command::Mu { input } => {
            let p = io::problem_from(&io::read_document(&input.input)?)?;
            Reply::new(&json!({ "mu": mu(&p), "receivers": p.receivers().len() }), Status::Yes)
        }
        Command::Examples { name } => examples(&name),
    }
}

/// A closed pipe downstream is not an error worth reporting.
fn emit(doc: &str) {
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{doc}").and_then(|()| out.flush());
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(reply) => {
            emit(&reply.doc);
            ExitCode::from(reply.status as u8)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            emit(&json!({ "error": format!("{e:#}") }).to_string());
            ExitCode::from(2)
        }
    }
}
