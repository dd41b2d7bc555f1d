use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use sheetcalc::borelideals::enumerate_ideals;
use sheetcalc::chevalley::LieAlgebra;
use sheetcalc::gammamap::rk_space;
use sheetcalc::{CartanType, RootSystem};
use sheetcalc_cli::{parse_type, run_theorem, VerificationReport, THEOREMS};

#[derive(Parser)]
#[command(
    name = "sheetcalc",
    version,
    about = "Exact checks for harmonic polynomials, sheets and standard identities"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Dimensions, exponents and root counts of a Cartan type.
    Info {
        #[arg(value_name = "TYPE")]
        cartan_type: String,
        #[arg(long)]
        json: bool,
    },
    /// Run a verification suite.
    Verify {
        /// One of al1, al2, al3, sheets, gamma, minors, harmonic, ideals, casimir-wedge, all.
        theorem: String,
        #[arg(long = "type", value_name = "TYPE")]
        cartan_type: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// Dimension (and optionally a basis) of R^k.
    Rk {
        #[arg(long = "type", value_name = "TYPE")]
        cartan_type: String,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        dump: bool,
    },
    /// List the ideals of the positive roots of a given size.
    Ideals {
        #[arg(long = "type", value_name = "TYPE")]
        cartan_type: String,
        #[arg(long)]
        size: usize,
        #[arg(long)]
        json: bool,
    },
}

fn usage(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(2)
}

fn cartan(s: &str) -> Result<CartanType, ExitCode> {
    parse_type(s).map_err(usage)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) | Err(code) => code,
    }
}

fn run(cmd: Command) -> Result<ExitCode, ExitCode> {
    match cmd {
        Command::Info { cartan_type, json } => {
            let rs = RootSystem::new(cartan(&cartan_type)?);
            let info = json!({
                "type": rs.cartan_type().to_string(),
                "rank": rs.rank(),
                "dim": rs.dim(),
                "positive_roots": rs.r(),
                "exponents": rs.exponents(),
                "degrees": rs.degrees(),
                "highest_root": rs.highest_root().coords(),
                "cartan_matrix": rs.cartan_matrix(),
            });
            if json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&info).expect("serializable")
                );
            } else {
                println!("type {}", rs.cartan_type());
                println!("rank {}", rs.rank());
                println!("dim {}", rs.dim());
                println!("positive roots {}", rs.r());
                println!("exponents {:?}", rs.exponents());
                println!("degrees {:?}", rs.degrees());
                println!("highest root {}", rs.highest_root());
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify {
            theorem,
            cartan_type,
            seed,
            trials,
            json,
        } => {
            let t = cartan(&cartan_type)?;
            let list: Vec<&str> = if theorem == "all" {
                THEOREMS.to_vec()
            } else if THEOREMS.contains(&theorem.as_str()) {
                vec![theorem.as_str()]
            } else {
                return Err(usage(format!(
                    "unknown theorem {theorem:?}; expected one of {} or all",
                    THEOREMS.join(", ")
                )));
            };
            let mut reports: Vec<VerificationReport> = Vec::new();
            for thm in list {
                let rep = run_theorem(thm, t, seed, trials).map_err(usage)?;
                if !json {
                    print!("{}", rep.render());
                }
                reports.push(rep);
            }
            if json {
                let text = if theorem == "all" {
                    serde_json::to_string_pretty(&reports)
                } else {
                    serde_json::to_string_pretty(&reports[0])
                };
                println!("{}", text.expect("serializable"));
            }
            if reports.iter().any(VerificationReport::failed) {
                Ok(ExitCode::from(1))
            } else {
                Ok(ExitCode::SUCCESS)
            }
        }
        Command::Rk {
            cartan_type,
            k,
            dump,
        } => {
            let g = LieAlgebra::new(RootSystem::new(cartan(&cartan_type)?));
            let space = rk_space(&g, k);
            println!("dim {}", space.dim());
            if dump {
                for p in space.basis() {
                    println!("{p}");
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Ideals {
            cartan_type,
            size,
            json,
        } => {
            let rs = RootSystem::new(cartan(&cartan_type)?);
            let ideals = enumerate_ideals(&rs, size);
            if json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&ideals).expect("serializable")
                );
            } else {
                println!("{} ideals of size {size}", ideals.len());
                for i in &ideals {
                    let roots: Vec<String> = i.roots.iter().map(ToString::to_string).collect();
                    println!(
                        "{{{}}} weight {:?} {}",
                        roots.join(", "),
                        i.weight,
                        if i.abelian { "abelian" } else { "non-abelian" }
                    );
                }
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}
