//! Two-player turn-based games on finite colored graphs.
//!
//! The crate solves games for omega-regular goals, grades strategies along a
//! hierarchy of winning criteria, synthesizes best-effort (admissible)
//! strategies, and computes win probabilities against a uniformly random
//! adversary. A brute-force oracle over positional strategies backs all of
//! it up in tests.

pub mod coop;
pub mod criteria;
pub mod dot;
pub mod fixtures;
pub mod game;
pub mod goal;
pub mod guide;
pub mod mdp;
pub mod monitor;
pub mod oracle;
pub mod parse;
pub mod product;
pub mod random;
pub mod solver;

pub use coop::{coop_winning, cooperative_solve, CoopResult};
pub use dot::render_dot;
pub use criteria::{
    check_criteria, is_admissible, is_c_perfect, is_c_winning, is_cs_winning, is_strongly_winning,
    is_subgame_perfect, is_winning_strategy, synth_admissible, Certificate, CheckInput,
    ContinuationLasso, Criterion, CriterionReport, FailureWitness, SynthError, SynthOutcome,
    Verdict,
};
pub use game::{Color, Game, GameDefect, GameError, Lasso, Path, Player, PositionalStrategy, StateId};
pub use goal::{classify, eval_game_lasso, eval_lasso, ColorLasso, GoalClass, GoalExpr, SolverClass, Three};
pub use mdp::{maximal_end_components, usg_evaluate, usg_value, MdpError, ValueMode, ValueVector};
pub use monitor::{compile_monitor, MemId, Monitor};
pub use oracle::{
    brute_winning_region, fully_dominates, DominanceRelation, OracleError, StrategySpace,
    DEFAULT_BUDGET,
};
pub use parse::{parse_game, parse_strategy, render_game, ParseError, ParsedStrategy};
pub use product::{expand, Expansion, MonitorProduct, MooreKind, MooreMachine};
pub use random::random_game;
pub use solver::{solve, SolveError, SolveMode, SolveResult};
