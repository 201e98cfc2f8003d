use std::fs;
use std::io::{self, Read, Write};
use std::process::ExitCode;

use brunnian::band::{milnor_link, realize, BandSumPresentation};
use brunnian::classifier::{c2_classify, cn_equivalent, is_brunnian, trivialize, Status, Verdict};
use brunnian::diagram::{
    parse_pd, random_reidemeister, reidemeister_simplify, LinkDiagram, SimplifyVerdict,
    DEFAULT_BUDGET,
};
use brunnian::milnor::mu_vector;
use clap::{Parser, Subcommand};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

const EXIT_NO: u8 = 1;
const EXIT_INCONCLUSIVE: u8 = 2;
const EXIT_USAGE: u8 = 64;
const EXIT_FORMAT: u8 = 65;

/// Band calculus, Milnor invariants and C_n classification of Brunnian links.
///
/// Path arguments accept `-` for standard input or output.
#[derive(Parser, Debug)]
#[command(name = "brunnian", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write the chord presentation of the n-component Milnor link.
    GenMilnor {
        n: usize,
        #[arg(default_value = "-")]
        output: String,
    },
    /// Turn a chord presentation into a PD diagram.
    Realize {
        input: String,
        #[arg(default_value = "-")]
        output: String,
        /// Random Reidemeister moves applied to the result.
        #[arg(long, default_value_t = 0)]
        noise: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Print the distinct-index μ̄-invariants of one length.
    Invariants {
        input: String,
        #[arg(long)]
        length: usize,
    },
    /// Decide whether every proper sublink is trivial.
    IsBrunnian {
        input: String,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: usize,
    },
    /// Decide C_n-equivalence of two Brunnian links.
    Compare {
        left: String,
        right: String,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: usize,
    },
    /// Decide C_2-equivalence by linking numbers.
    C2Compare { left: String, right: String },
    /// Reduce a diagram with Reidemeister moves.
    Simplify {
        input: String,
        #[arg(default_value = "-")]
        output: String,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: usize,
    },
    /// Print chord deletions trivializing a normal-form presentation.
    Trivialize { input: String },
}

/// A failure reported as JSON on stderr.
struct Failure(Value);

impl Failure {
    fn from_error<E: serde::Serialize>(e: E) -> Failure {
        Failure(serde_json::to_value(e).expect("errors serialize"))
    }

    fn message(kind: &str, message: impl ToString) -> Failure {
        Failure(json!({ "error": kind, "message": message.to_string() }))
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(Failure(payload)) => {
            eprintln!("{payload}");
            ExitCode::from(EXIT_FORMAT)
        }
    }
}

fn run(command: Command) -> Result<u8, Failure> {
    match command {
        Command::GenMilnor { n, output } => {
            let p = milnor_link(n).map_err(Failure::from_error)?;
            write_output(&output, &p.to_json())?;
            Ok(0)
        }
        Command::Realize {
            input,
            output,
            noise,
            seed,
        } => {
            let p = read_presentation(&input)?;
            let mut d = realize(&p).map_err(Failure::from_error)?;
            if noise > 0 {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                d = random_reidemeister(&d, noise, &mut rng);
            }
            write_output(&output, &d.to_pd_string())?;
            Ok(0)
        }
        Command::Invariants { input, length } => {
            let d = read_diagram(&input)?;
            let report = mu_vector(&d, length).map_err(Failure::from_error)?;
            write_output("-", &report.to_json())?;
            Ok(0)
        }
        Command::IsBrunnian { input, budget } => {
            let d = read_diagram(&input)?;
            emit_verdict(&is_brunnian(&d, budget))
        }
        Command::Compare {
            left,
            right,
            budget,
        } => {
            let (a, b) = (read_diagram(&left)?, read_diagram(&right)?);
            let v = cn_equivalent(&a, &b, budget).map_err(Failure::from_error)?;
            emit_verdict(&v)
        }
        Command::C2Compare { left, right } => {
            let (a, b) = (read_diagram(&left)?, read_diagram(&right)?);
            let v = c2_classify(&a, &b).map_err(Failure::from_error)?;
            emit_verdict(&v)
        }
        Command::Simplify {
            input,
            output,
            budget,
        } => {
            let d = read_diagram(&input)?;
            let (out, verdict) = reidemeister_simplify(&d, budget);
            write_output(&output, &out.to_pd_string())?;
            Ok(match verdict {
                SimplifyVerdict::MinimalReached => 0,
                SimplifyVerdict::BudgetExhausted => {
                    eprintln!("{}", json!({ "verdict": verdict }));
                    EXIT_INCONCLUSIVE
                }
            })
        }
        Command::Trivialize { input } => {
            let p = read_presentation(&input)?;
            let cert = trivialize(&p).map_err(Failure::from_error)?;
            write_output("-", &cert.to_json())?;
            Ok(0)
        }
    }
}

fn emit_verdict(v: &Verdict) -> Result<u8, Failure> {
    write_output("-", &v.to_json())?;
    Ok(match v.status {
        Status::Yes => 0,
        Status::No => EXIT_NO,
        Status::Inconclusive => EXIT_INCONCLUSIVE,
    })
}

fn read_input(path: &str) -> Result<String, Failure> {
    let mut text = String::new();
    let result = if path == "-" {
        io::stdin().read_to_string(&mut text).map(|_| ())
    } else {
        fs::read_to_string(path).map(|t| text = t)
    };
    result
        .map_err(|e| Failure(json!({ "error": "Io", "path": path, "message": e.to_string() })))?;
    Ok(text)
}

fn write_output(path: &str, text: &str) -> Result<(), Failure> {
    let result = if path == "-" {
        let mut out = io::stdout().lock();
        out.write_all(text.as_bytes()).and_then(|_| out.flush())
    } else {
        fs::write(path, text)
    };
    result.map_err(|e| Failure(json!({ "error": "Io", "path": path, "message": e.to_string() })))
}

fn read_diagram(path: &str) -> Result<LinkDiagram, Failure> {
    parse_pd(&read_input(path)?).map_err(|e| Failure::message("PdFormat", e))
}

fn read_presentation(path: &str) -> Result<BandSumPresentation, Failure> {
    let p: BandSumPresentation =
        serde_json::from_str(&read_input(path)?).map_err(|e| Failure::message("JsonFormat", e))?;
    p.validate().map_err(Failure::from_error)?;
    Ok(p)
}
