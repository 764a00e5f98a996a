//! Command-line front end: solve games, synthesize admissible strategies,
//! grade strategies against the winning criteria, compute values against
//! the uniformly random adversary, run the brute-force oracle, and export
//! GraphViz drawings.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use graph_games::oracle::{dominance_matrix, maximal_positional, DomEntry};
use graph_games::{
    brute_winning_region, check_criteria, classify, parse_game, parse_strategy, render_dot,
    solve, synth_admissible, usg_value, CheckInput, Criterion, CriterionReport, Game, GoalExpr,
    MdpError, OracleError, ParsedStrategy, PositionalStrategy, SolveMode, SynthError,
    ValueMode, ValueVector, Verdict, DEFAULT_BUDGET,
};

#[derive(Parser)]
#[command(name = "ggs", version, about = "Two-player graph games: solving, strategy grading, admissible synthesis, stochastic values")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the winning region and a winning strategy
    Solve {
        file: PathBuf,
        /// Solve cooperatively (both players pursue the goal)
        #[arg(long)]
        cooperative: bool,
        #[arg(long)]
        json: bool,
    },
    /// Synthesize an admissible (best-effort) strategy
    Admissible {
        file: PathBuf,
        /// Run on unsupported goal classes; verdicts state what holds
        #[arg(long)]
        force: bool,
        #[arg(long)]
        json: bool,
    },
    /// Grade a strategy file against the winning criteria
    Check {
        file: PathBuf,
        #[arg(long)]
        strategy: PathBuf,
        /// Comma-separated criterion names (default: all)
        #[arg(long)]
        criteria: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Win probabilities against the uniformly random adversary
    Mdp {
        file: PathBuf,
        /// Force exact rational arithmetic
        #[arg(long, conflicts_with = "tol")]
        exact: bool,
        /// Value iteration with this tolerance
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        json: bool,
    },
    /// Brute-force positional-strategy enumeration
    Oracle {
        file: PathBuf,
        #[arg(long)]
        what: What,
        #[arg(long)]
        budget: Option<u128>,
        #[arg(long)]
        json: bool,
    },
    /// Structural classification of the goal
    Classify {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// GraphViz export (circles: Player 1, boxes: Player 2)
    Dot {
        file: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
}

#[derive(ValueEnum, Clone, Copy)]
enum What {
    Region,
    Dominance,
    Maximal,
}

enum Failure {
    Usage(String),
    Input(String),
    Precondition(String),
    Budget(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Input(_) => 2,
            Failure::Precondition(_) => 3,
            Failure::Budget(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Input(m) | Failure::Precondition(m) | Failure::Budget(m) => m,
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

fn load(path: &Path) -> Result<(Game, GoalExpr, String), Failure> {
    let label = path.display().to_string();
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Input(format!("{label}: {e}")))?;
    let (game, goal) = parse_game(&text).map_err(|e| Failure::Input(format!("{label}:{e}")))?;
    Ok((game, goal, label))
}

fn names(game: &Game, set: impl IntoIterator<Item = usize>) -> Vec<String> {
    set.into_iter().map(|s| game.name(s).to_string()).collect()
}

fn strategy_map(game: &Game, sigma: &PositionalStrategy) -> BTreeMap<String, String> {
    sigma
        .moves()
        .into_iter()
        .map(|(s, t)| (game.name(s).to_string(), game.name(t).to_string()))
        .collect()
}

fn strategy_line(map: &BTreeMap<String, String>) -> String {
    if map.is_empty() {
        return "(no Player-1 states)".into();
    }
    map.iter()
        .map(|(s, t)| format!("{s} -> {t}"))
        .collect::<Vec<_>>()
        .join(", ")
}

fn emit(json: bool, command: &str, game_label: &str, result: Value, human: String) {
    if json {
        let envelope = json!({
            "version": env!("CARGO_PKG_VERSION"),
            "command": command,
            "game": game_label,
            "result": result,
        });
        println!("{}", serde_json::to_string_pretty(&envelope).expect("serializable"));
    } else {
        println!("{human}");
    }
}

fn verdict_json(v: &Verdict) -> Value {
    match v {
        Verdict::Holds { vacuous } => json!({"status": "holds", "vacuous": vacuous}),
        Verdict::Fails { witness } => {
            let continuation = witness.continuation.as_ref().map(|c| {
                json!({"prefix": c.prefix, "cycle": c.cycle})
            });
            json!({"status": "fails", "witness": {"path": witness.path, "continuation": continuation}})
        }
        Verdict::Unsupported { reason } => json!({"status": "unsupported", "reason": reason}),
    }
}

fn verdict_line(v: &Verdict) -> String {
    match v {
        Verdict::Holds { vacuous: false } => "holds".into(),
        Verdict::Holds { vacuous: true } => "holds (vacuously)".into(),
        Verdict::Fails { witness } => {
            let mut out = format!("fails (witness: {}", witness.path.join(" "));
            if let Some(c) = &witness.continuation {
                out.push_str(", then ");
                if !c.prefix.is_empty() {
                    out.push_str(&c.prefix.join(" "));
                    out.push(' ');
                }
                out.push_str(&format!("({})^w", c.cycle.join(" ")));
            }
            out.push(')');
            out
        }
        Verdict::Unsupported { reason } => format!("unsupported: {reason}"),
    }
}

fn report_json(report: &CriterionReport) -> Value {
    let map: serde_json::Map<String, Value> = report
        .verdicts
        .iter()
        .map(|(c, v)| (c.name().to_string(), verdict_json(v)))
        .collect();
    Value::Object(map)
}

fn report_lines(report: &CriterionReport) -> String {
    report
        .verdicts
        .iter()
        .map(|(c, v)| format!("{}: {}", c.name(), verdict_line(v)))
        .collect::<Vec<_>>()
        .join("\n")
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Solve {
            file,
            cooperative,
            json,
        } => {
            let (game, goal, label) = load(&file)?;
            let mode = if cooperative {
                SolveMode::Cooperative
            } else {
                SolveMode::Adversarial
            };
            let solved = solve(&game, &goal, mode).map_err(|e| Failure::Precondition(e.to_string()))?;
            let region = names(&game, solved.region.iter().copied());
            let map = strategy_map(&game, &solved.strategy);
            let mode_name = if cooperative { "cooperative" } else { "adversarial" };
            let human = format!(
                "mode: {mode_name}\nregion: {}\nstrategy: {}",
                region.join(" "),
                strategy_line(&map)
            );
            emit(
                json,
                "solve",
                &label,
                json!({"mode": mode_name, "region": region, "strategy": map}),
                human,
            );
            Ok(())
        }
        Command::Admissible { file, force, json } => {
            let (game, goal, label) = load(&file)?;
            let outcome = synth_admissible(&game, &goal, force).map_err(|e| match e {
                SynthError::Unsupported(_) => Failure::Precondition(e.to_string()),
            })?;
            let cert = &outcome.certificate;
            let result = json!({
                "supported": outcome.supported,
                "strategy": strategy_map(&game, &outcome.strategy),
                "certificate": {
                    "winning_region": names(&game, cert.winning_region.iter().copied()),
                    "winning_strategy": strategy_map(&game, &cert.winning_strategy),
                    "c_winning_region": names(&game, cert.c_winning_region.iter().copied()),
                },
                "verdicts": report_json(&outcome.report),
            });
            let human = format!(
                "strategy: {}\nwinning region: {}\nc-winning region: {}\n{}",
                strategy_line(&strategy_map(&game, &outcome.strategy)),
                names(&game, cert.winning_region.iter().copied()).join(" "),
                names(&game, cert.c_winning_region.iter().copied()).join(" "),
                report_lines(&outcome.report)
            );
            emit(json, "admissible", &label, result, human);
            Ok(())
        }
        Command::Check {
            file,
            strategy,
            criteria,
            json,
        } => {
            let (game, goal, label) = load(&file)?;
            let stext = std::fs::read_to_string(&strategy)
                .map_err(|e| Failure::Input(format!("{}: {e}", strategy.display())))?;
            let parsed = parse_strategy(&stext, &game)
                .map_err(|e| Failure::Input(format!("{}:{e}", strategy.display())))?;
            let which: Vec<Criterion> = match &criteria {
                None => Criterion::ALL.to_vec(),
                Some(list) => list
                    .split(',')
                    .map(|name| {
                        Criterion::from_name(name)
                            .ok_or_else(|| Failure::Usage(format!("unknown criterion `{name}`")))
                    })
                    .collect::<Result<_, _>>()?,
            };
            let report = match &parsed {
                ParsedStrategy::Positional(sigma) => {
                    check_criteria(&CheckInput::plain(&game, &goal, sigma), &which)
                }
                ParsedStrategy::Memory {
                    expansion, sigma, ..
                } => check_criteria(&CheckInput::expanded(expansion, &game, &goal, sigma), &which),
            };
            let sigma_map = match &parsed {
                ParsedStrategy::Positional(sigma) => strategy_map(&game, sigma),
                ParsedStrategy::Memory {
                    expansion, sigma, ..
                } => strategy_map(&expansion.game, sigma),
            };
            let result = json!({"strategy": sigma_map, "verdicts": report_json(&report)});
            emit(json, "check", &label, result, report_lines(&report));
            Ok(())
        }
        Command::Mdp {
            file,
            exact,
            tol,
            json,
        } => {
            let (game, goal, label) = load(&file)?;
            // exact rationals up to a size cutoff, value iteration beyond
            let mode = match (exact, tol) {
                (true, _) => ValueMode::Exact,
                (false, Some(t)) => ValueMode::Iterative { tolerance: t },
                (false, None) if game.state_count() <= 200 => ValueMode::Exact,
                (false, None) => ValueMode::Iterative { tolerance: 1e-9 },
            };
            let (values, sigma) = usg_value(&game, &goal, mode).map_err(|e| match e {
                MdpError::CompositeGoal(_) => Failure::Precondition(e.to_string()),
            })?;
            let value_map: serde_json::Map<String, Value> = game
                .states()
                .map(|s| {
                    let v = match &values {
                        ValueVector::Exact(_) => Value::String(values.render(s)),
                        ValueVector::Approx(v) => json!(v[s]),
                    };
                    (game.name(s).to_string(), v)
                })
                .collect();
            let mode_name = match mode {
                ValueMode::Exact => "exact",
                ValueMode::Iterative { .. } => "iterative",
            };
            let map = strategy_map(&game, &sigma);
            let human_values = game
                .states()
                .map(|s| format!("value({}) = {}", game.name(s), values.render(s)))
                .collect::<Vec<_>>()
                .join("\n");
            let human = format!("mode: {mode_name}\n{human_values}\nstrategy: {}", strategy_line(&map));
            emit(
                json,
                "mdp",
                &label,
                json!({"mode": mode_name, "values": value_map, "strategy": map}),
                human,
            );
            Ok(())
        }
        Command::Oracle {
            file,
            what,
            budget,
            json,
        } => {
            let (game, goal, label) = load(&file)?;
            let budget = budget.unwrap_or(DEFAULT_BUDGET);
            let scope = "positional adversaries";
            let map_err = |e: OracleError| match e {
                OracleError::BudgetExceeded { .. } => Failure::Budget(e.to_string()),
            };
            match what {
                What::Region => {
                    let region = brute_winning_region(&game, &goal, SolveMode::Adversarial, budget)
                        .map_err(map_err)?;
                    let region = names(&game, region.iter().copied());
                    let human = format!("scope: {scope}\nregion: {}", region.join(" "));
                    emit(
                        json,
                        "oracle",
                        &label,
                        json!({"what": "region", "scope": scope, "region": region}),
                        human,
                    );
                }
                What::Dominance => {
                    let rel = dominance_matrix(&game, &goal, budget).map_err(map_err)?;
                    let strategies: Vec<BTreeMap<String, String>> = rel
                        .strategies()
                        .iter()
                        .map(|s| strategy_map(&game, s))
                        .collect();
                    let n = strategies.len();
                    let matrix: Vec<Vec<&str>> = (0..n)
                        .map(|i| {
                            (0..n)
                                .map(|j| match rel.entry(i, j) {
                                    DomEntry::Dominates => "dominates",
                                    DomEntry::EqualValued => "equal",
                                    DomEntry::Incomparable => "incomparable",
                                })
                                .collect()
                        })
                        .collect();
                    let mut human = format!("scope: {scope}");
                    for (i, s) in strategies.iter().enumerate() {
                        human.push_str(&format!("\nsigma{i}: {}", strategy_line(s)));
                    }
                    for (i, row) in matrix.iter().enumerate() {
                        for (j, entry) in row.iter().enumerate() {
                            if *entry == "dominates" {
                                human.push_str(&format!("\nsigma{i} dominates sigma{j}"));
                            }
                        }
                    }
                    emit(
                        json,
                        "oracle",
                        &label,
                        json!({"what": "dominance", "scope": scope, "strategies": strategies, "matrix": matrix}),
                        human,
                    );
                }
                What::Maximal => {
                    let maximal = maximal_positional(&game, &goal, budget).map_err(map_err)?;
                    let strategies: Vec<BTreeMap<String, String>> = maximal
                        .iter()
                        .map(|s| strategy_map(&game, s))
                        .collect();
                    let mut human = format!("scope: {scope}");
                    for s in &strategies {
                        human.push_str(&format!("\nmaximal: {}", strategy_line(s)));
                    }
                    emit(
                        json,
                        "oracle",
                        &label,
                        json!({"what": "maximal", "scope": scope, "strategies": strategies}),
                        human,
                    );
                }
            }
            Ok(())
        }
        Command::Classify { file, json } => {
            let (_, goal, label) = load(&file)?;
            let class = classify(&goal);
            let result = serde_json::to_value(class).expect("serializable");
            let human = format!(
                "goal: {goal}\nshrinkable: {}\nextensible: {}\nprefix-independent: {}\nsolver-class: {}",
                three(&result, "shrinkable"),
                three(&result, "extensible"),
                three(&result, "prefix_independent"),
                result["solver_class"].as_str().unwrap_or("?")
            );
            emit(json, "classify", &label, result, human);
            Ok(())
        }
        Command::Dot { file, out } => {
            let (game, _, _) = load(&file)?;
            let dot = render_dot(&game);
            match out {
                Some(path) => std::fs::write(&path, dot)
                    .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?,
                None => print!("{dot}"),
            }
            Ok(())
        }
    }
}

fn three(v: &Value, key: &str) -> String {
    v[key].as_str().unwrap_or("?").to_string()
}
