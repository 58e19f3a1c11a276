use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use qatl_core::checker::{check, dump_request, CheckRequest, Engine, Verdict};
use qatl_core::hardness::{build_hardness_game, hardness_formula, parse_tm};
use qatl_core::model::load_model;
use qatl_core::parity::{default_cap, parse_game_dump, solve_bracketed};
use qatl_core::samples;

#[derive(Parser)]
#[command(name = "qatl", version, about = "Model checker for QATL and QATL* over one-counter game models")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum EngineArg {
    Game,
    Refeval,
}

#[derive(Subcommand)]
enum Command {
    /// Check a formula at a configuration of a model.
    Check {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        formula: String,
        #[arg(long)]
        state: String,
        #[arg(long, default_value_t = 0)]
        counter: u64,
        /// First truncation cap; doubled until the verdict is certain.
        #[arg(long)]
        cap: Option<u64>,
        #[arg(long)]
        cap_limit: Option<u64>,
        #[arg(long, value_enum, default_value = "game")]
        engine: EngineArg,
        /// Build the constructions exactly as drawn, without the position-0 checks.
        #[arg(long)]
        literal_figures: bool,
        /// Print the game before truncation.
        #[arg(long)]
        dump_game: bool,
        /// Expand weights above 1 into unit chains before solving.
        #[arg(long)]
        succinct: bool,
    },
    /// Solve a one-counter parity game given in dump format.
    SolveArena {
        file: PathBuf,
        #[arg(long)]
        cap: Option<u64>,
    },
    /// Print the reachability game that simulates a Turing machine on a word.
    GenHardness {
        #[arg(long)]
        tm: PathBuf,
        #[arg(long, default_value = "")]
        word: String,
        #[arg(long)]
        tape: usize,
    },
    /// Print the bundled vending-machine model and formulas.
    Examples,
}

/// Failures, mapped to exit codes from 10 up.
enum Failure {
    Usage(String),
    Io(PathBuf, std::io::Error),
    Input(String),
}

impl Failure {
    fn report(self) -> ExitCode {
        let (code, msg) = match self {
            Failure::Usage(m) => (10, m),
            Failure::Io(p, e) => (11, format!("{}: {e}", p.display())),
            Failure::Input(m) => (12, m),
        };
        eprintln!("error: {msg}");
        ExitCode::from(code)
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Io(path.to_path_buf(), e))
}

fn input<E: std::fmt::Display>(what: &str) -> impl FnOnce(E) -> Failure + '_ {
    move |e| Failure::Input(format!("{what}: {e}"))
}

fn verdict_code(v: Verdict) -> ExitCode {
    ExitCode::from(v.exit_code() as u8)
}

fn run(cli: Cli) -> Result<ExitCode, Failure> {
    match cli.command {
        Command::Check { model, formula, state, counter, cap, cap_limit, engine, literal_figures, dump_game, succinct } => {
            let m = load_model(&read(&model)?).map_err(input(&model.display().to_string()))?;
            let req = CheckRequest {
                model: &m,
                formula,
                state,
                counter,
                cap,
                cap_limit,
                engine: match engine {
                    EngineArg::Game => Engine::Game,
                    EngineArg::Refeval => Engine::Refeval,
                },
                literal_figures,
                dump_game: false,
                expand_succinct: succinct,
            };
            if dump_game {
                print!("{}", dump_request(&req).map_err(input("check"))?);
            }
            let report = check(&req).map_err(input("check"))?;
            println!("{}", serde_json::to_string(&report).expect("reports serialize"));
            println!("{:?} at ({}, {}) with cap {}", report.verdict, req.state, req.counter, report.cap);
            for w in &report.warnings {
                println!("warning: {w}");
            }
            Ok(verdict_code(report.verdict))
        }
        Command::SolveArena { file, cap } => {
            let parsed = parse_game_dump(&read(&file)?).map_err(input(&file.display().to_string()))?;
            let g = parsed.game;
            let (start, _) = default_cap(&g);
            let cap = cap.unwrap_or(start);
            let v: Verdict = solve_bracketed(&g, cap).map_err(input("solve"))?.into();
            let record = serde_json::json!({
                "verdict": v,
                "cap": cap,
                "vertices": g.vertex_count(),
                "edges": g.edge_count(),
                "colors": g.color_count(),
            });
            println!("{record}");
            println!("{v:?} from entry v{} with cap {cap}", g.entry);
            Ok(verdict_code(v))
        }
        Command::GenHardness { tm, word, tape } => {
            let t = parse_tm(&read(&tm)?).map_err(input(&tm.display().to_string()))?;
            let g = build_hardness_game(&t, &word, tape).map_err(input("gen-hardness"))?;
            print!("{}", g.model.to_text());
            eprintln!(
                "check with: --state {} --counter 0 --formula '{}'",
                g.model.state_name(g.start),
                hardness_formula()
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Examples => {
            print!("{}", samples::VENDING_MODEL);
            println!();
            for (f, gloss) in samples::VENDING_FORMULAS {
                println!("# {gloss}");
                println!("{f}");
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return Failure::Usage("bad arguments".into()).report();
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(f) => f.report(),
    }
}
