use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Parser, Subcommand, ValueEnum};

use sessub::charform::{char_formula, Mode};
use sessub::exec::with_large_stack;
use sessub::generator::{gen_norec, gen_random, gen_super, gen_unfolded_pair, GenParams};
use sessub::harness::{emit_csv, emit_json, run_bench, run_check, Algorithm, BenchConfig, Family};
use sessub::lambda::{lsubtype, parse_ltype, LMode};
use sessub::mu::{print_formula, Style};
use sessub::safety::{safe_by_subtyping, safe_explore};
use sessub::types::{build_lts, dual_type, Alphabet, ChoiceKind, SizeMetrics};
use sessub::{parse_type, print_type, Execution, SessionType};

/// Session type subtyping, duality and safety.
#[derive(Parser)]
#[command(name = "sessub", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Decide LHS <= RHS.
    Check {
        #[arg(long, default_value = "all")]
        algo: AlgoArg,
        /// Per-algorithm timeout in milliseconds.
        #[arg(long)]
        timeout: Option<u64>,
        #[arg(long)]
        json: bool,
        lhs: String,
        rhs: String,
    },
    /// Print the dual type.
    Dual { file: String },
    /// Print nummsg and the unfolding measure.
    Metrics { file: String },
    /// Print the transition system.
    Lts { file: String },
    /// Print the characteristic formula.
    Formula {
        #[arg(long, default_value = "sub")]
        mode: ModeArg,
        #[arg(long)]
        dummy_fixpoints: bool,
        #[arg(long)]
        mcrl2: bool,
        file: String,
    },
    /// Decide whether LHS || RHS is safe.
    Safe {
        #[arg(long, default_value = "explore")]
        method: MethodArg,
        #[arg(long, default_value = "kps")]
        algo: AlgoArg,
        lhs: String,
        rhs: String,
    },
    /// Generate a type (or a pair, for `unfolded`).
    Gen {
        #[arg(long, default_value = "random")]
        family: String,
        #[arg(long, default_value_t = 10)]
        size: usize,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Time the algorithms on generated families and write a CSV.
    Bench {
        #[arg(long, default_value = "super-send", value_delimiter = ',')]
        families: Vec<String>,
        #[arg(long, default_value = "2,4", value_delimiter = ',')]
        sizes: Vec<usize>,
        #[arg(long, default_value = "all", value_delimiter = ',')]
        algos: Vec<String>,
        /// Per-run timeout in milliseconds.
        #[arg(long, default_value_t = 10_000)]
        timeout: u64,
        #[arg(long, default_value_t = 3)]
        reps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        sequential: bool,
        #[arg(long)]
        csv: PathBuf,
    },
    /// Lambda-type subtyping.
    Lambda {
        #[command(subcommand)]
        cmd: LambdaCmd,
    },
}

#[derive(Subcommand)]
enum LambdaCmd {
    /// Decide LHS <= RHS.
    Check {
        #[arg(long, default_value = "direct")]
        mode: LModeArg,
        lhs: String,
        rhs: String,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgoArg {
    Gh,
    Kps,
    CfSub,
    CfSup,
    All,
}

impl AlgoArg {
    fn algos(self) -> Vec<Algorithm> {
        match self {
            AlgoArg::Gh => vec![Algorithm::Gh],
            AlgoArg::Kps => vec![Algorithm::Kps],
            AlgoArg::CfSub => vec![Algorithm::CfSub],
            AlgoArg::CfSup => vec![Algorithm::CfSup],
            AlgoArg::All => Algorithm::ALL.to_vec(),
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Sub,
    Sup,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Explore,
    Subtyping,
}

#[derive(Clone, Copy, ValueEnum)]
enum LModeArg {
    Direct,
    ViaTop,
    ViaBot,
}

const USAGE: u8 = 2;

struct Fail(u8, String);

fn usage(msg: impl std::fmt::Display) -> Fail {
    Fail(USAGE, msg.to_string())
}

/// A path to an existing file is read; anything else is taken as the text.
fn source(arg: &str) -> Result<String, Fail> {
    let path = std::path::Path::new(arg);
    if path.is_file() {
        std::fs::read_to_string(path).map_err(|e| usage(format!("{arg}: {e}")))
    } else {
        Ok(arg.to_string())
    }
}

fn load(arg: &str) -> Result<SessionType, Fail> {
    parse_type(&source(arg)?).map_err(|e| usage(format!("{arg}: {e}")))
}

fn verdict_code(b: bool) -> u8 {
    if b {
        0
    } else {
        1
    }
}

fn run(cli: Cli) -> Result<u8, Fail> {
    match cli.cmd {
        Cmd::Check {
            algo,
            timeout,
            json,
            lhs,
            rhs,
        } => {
            let (t, u) = (load(&lhs)?, load(&rhs)?);
            let reports = run_check(
                &t,
                &u,
                &algo.algos(),
                timeout.map(Duration::from_millis),
                Execution::available(),
            )
            .map_err(|e| Fail(101, e.to_string()))?;
            if json {
                emit_json(&reports, std::io::stdout().lock()).map_err(|e| Fail(101, e.to_string()))?;
            } else {
                for r in &reports {
                    println!("{}\t{}\t{}ns", r.algorithm, r.verdict.as_str(), r.wall_nanos);
                }
            }
            match reports.iter().find_map(|r| r.verdict.value()) {
                Some(b) => Ok(verdict_code(b)),
                None => Ok(3),
            }
        }
        Cmd::Dual { file } => {
            println!("{}", print_type(&dual_type(&load(&file)?)));
            Ok(0)
        }
        Cmd::Metrics { file } => {
            let m = SizeMetrics::of(&load(&file)?);
            println!("nummsg {}\nunfold {}", m.nummsg, m.unfold);
            Ok(0)
        }
        Cmd::Lts { file } => {
            let lts = build_lts(&load(&file)?);
            for (i, s) in lts.states().iter().enumerate() {
                println!("s{i}: {s}");
            }
            for (i, a, j) in lts.edges() {
                println!("s{i} --{a}--> s{j}");
            }
            Ok(0)
        }
        Cmd::Formula {
            mode,
            dummy_fixpoints,
            mcrl2,
            file,
        } => {
            let t = load(&file)?;
            let mode = match mode {
                ModeArg::Sub => Mode::SubOf,
                ModeArg::Sup => Mode::SupOf,
            };
            let phi = char_formula(&t, mode, &Alphabet::of_types([&t]), dummy_fixpoints);
            let style = if mcrl2 { Style::Mcrl2 } else { Style::Native };
            println!("{}", print_formula(&phi, style));
            Ok(0)
        }
        Cmd::Safe {
            method,
            algo,
            lhs,
            rhs,
        } => {
            let (t, u) = (load(&lhs)?, load(&rhs)?);
            let safe = match method {
                MethodArg::Explore => match safe_explore(&t, &u) {
                    Ok(()) => true,
                    Err(w) => {
                        println!("{w}");
                        false
                    }
                },
                MethodArg::Subtyping => {
                    let algos = algo.algos();
                    let verdicts: Vec<bool> = algos
                        .iter()
                        .map(|&a| with_large_stack(|| safe_by_subtyping(&t, &u, a)))
                        .collect();
                    if verdicts.windows(2).any(|w| w[0] != w[1]) {
                        return Err(Fail(101, "algorithms disagree".into()));
                    }
                    verdicts[0]
                }
            };
            println!("{}", if safe { "safe" } else { "unsafe" });
            Ok(verdict_code(safe))
        }
        Cmd::Gen {
            family,
            size,
            k,
            seed,
        } => {
            let fam = Family::from_id(&family).ok_or_else(|| usage(format!("unknown family `{family}`")))?;
            let p = GenParams::sized(size, seed);
            let k = k.unwrap_or(size).max(1);
            match fam {
                Family::Random => println!("{}", gen_random(&p)),
                Family::Norec => println!("{}", gen_norec(&p)),
                Family::SuperSend => println!("{}", gen_super(k, ChoiceKind::Internal)),
                Family::SuperRecv => println!("{}", gen_super(k, ChoiceKind::External)),
                Family::Unfolded => {
                    let (a, b) = gen_unfolded_pair(&p);
                    println!("{a}\n{b}");
                }
            }
            Ok(0)
        }
        Cmd::Bench {
            families,
            sizes,
            algos,
            timeout,
            reps,
            seed,
            sequential,
            csv,
        } => {
            let families = families
                .iter()
                .map(|f| Family::from_id(f).ok_or_else(|| usage(format!("unknown family `{f}`"))))
                .collect::<Result<Vec<_>, _>>()?;
            let mut list = Vec::new();
            for a in &algos {
                if a == "all" {
                    list.extend(Algorithm::ALL);
                } else {
                    list.push(Algorithm::from_id(a).ok_or_else(|| usage(format!("unknown algorithm `{a}`")))?);
                }
            }
            let cfg = BenchConfig {
                families,
                params: sizes,
                algos: list,
                timeout: Some(Duration::from_millis(timeout)),
                repetitions: reps,
                seed,
                exec: if sequential {
                    Execution::Sequential
                } else {
                    Execution::available()
                },
            };
            let rows = run_bench(&cfg).map_err(|e| Fail(101, e.to_string()))?;
            emit_csv(&rows, &csv).map_err(|e| Fail(101, e.to_string()))?;
            let timeouts = rows.iter().filter(|r| r.verdict.is_none()).count();
            eprintln!("{} rows written to {} ({timeouts} timed out)", rows.len(), csv.display());
            Ok(0)
        }
        Cmd::Lambda {
            cmd: LambdaCmd::Check { mode, lhs, rhs },
        } => {
            let parse = |a: &str| -> Result<_, Fail> {
                parse_ltype(&source(a)?).map_err(|e| usage(format!("{a}: {e}")))
            };
            let (t, u) = (parse(&lhs)?, parse(&rhs)?);
            let mode = match mode {
                LModeArg::Direct => LMode::Direct,
                LModeArg::ViaTop => LMode::ViaTop,
                LModeArg::ViaBot => LMode::ViaBot,
            };
            let b = lsubtype(&t, &u, mode);
            println!("{b}");
            Ok(verdict_code(b))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(Fail(code, msg)) => {
            eprintln!("sessub: {msg}");
            ExitCode::from(code)
        }
    }
}
