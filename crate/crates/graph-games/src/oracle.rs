//! Brute-force ground truth on small games.
//!
//! Enumerates positional strategies, evaluates every strategy pair on every
//! start state, and derives winning regions and the dominance order from the
//! raw value tables. Everything here is exponential and budget-guarded; it
//! exists to cross-check the polynomial solvers and the criteria verdicts.
//!
//! Scope caveat: [`dominance_matrix`] quantifies the adversary over
//! positional strategies only, and that genuinely differs from dominance
//! against arbitrary adversaries: a history-dependent adversary can reward
//! one route and punish another after the plays of the two compared
//! strategies diverge, which no single positional adversary can. All
//! dominance outputs carry an explicit scope label; [`fully_dominates`]
//! decides the unrestricted relation for prefix-independent goals.

use std::collections::BTreeSet;

use crate::game::{outcome, Game, Player, PositionalStrategy, StateId};
use crate::goal::{eval_game_lasso, GoalExpr};
use crate::solver::SolveMode;

/// Default cap on `|Σ1| · |Σ2| · |S|` play evaluations.
pub const DEFAULT_BUDGET: u128 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("enumeration needs {needed} play evaluations, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
}

/// Lexicographic enumeration of one player's positional strategies, ordered
/// by (state index, successor index).
pub struct StrategySpace<'a> {
    game: &'a Game,
    owner: Player,
    owned: Vec<StateId>,
    cursor: Option<Vec<usize>>,
}

impl<'a> StrategySpace<'a> {
    pub fn new(game: &'a Game, owner: Player) -> StrategySpace<'a> {
        let owned = game.states_of(owner);
        StrategySpace {
            game,
            owner,
            cursor: Some(vec![0; owned.len()]),
            owned,
        }
    }

    /// Number of strategies in the space (product of out-degrees).
    pub fn total_count(&self) -> u128 {
        self.owned
            .iter()
            .map(|&s| self.game.successors(s).len() as u128)
            .product()
    }
}

impl Iterator for StrategySpace<'_> {
    type Item = PositionalStrategy;

    fn next(&mut self) -> Option<PositionalStrategy> {
        let cursor = self.cursor.as_mut()?;
        let choices: Vec<(StateId, StateId)> = self
            .owned
            .iter()
            .zip(cursor.iter())
            .map(|(&s, &i)| (s, self.game.successors(s)[i]))
            .collect();
        let strategy = PositionalStrategy::new(self.game, self.owner, &choices)
            .expect("enumerated choices are valid");
        // advance like an odometer, least significant digit last
        let mut done = true;
        for (pos, digit) in cursor.iter_mut().enumerate().rev() {
            *digit += 1;
            if *digit < self.game.successors(self.owned[pos]).len() {
                done = false;
                break;
            }
            *digit = 0;
        }
        if done {
            self.cursor = None;
        }
        Some(strategy)
    }
}

/// 1 if the unique play of (sigma, tau) from `s` satisfies the goal.
pub fn val(
    game: &Game,
    goal: &GoalExpr,
    sigma: &PositionalStrategy,
    tau: &PositionalStrategy,
    s: StateId,
) -> bool {
    eval_game_lasso(goal, game, &outcome(game, s, sigma, tau))
}

/// Directional comparison of two Player-1 strategies under the positional
/// adversary scope.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DomEntry {
    /// Strictly better somewhere, at least as good everywhere.
    Dominates,
    /// Same value against every (adversary, start) pair.
    EqualValued,
    /// Neither dominates nor equals.
    Incomparable,
}

/// Full pairwise comparison of the enumerated Player-1 strategies.
#[derive(Debug)]
pub struct DominanceRelation {
    strategies: Vec<PositionalStrategy>,
    /// `tables[i]` holds val(sigma_i, tau, s) for every (tau, s), in
    /// enumeration order.
    tables: Vec<Vec<bool>>,
}

impl DominanceRelation {
    pub fn strategies(&self) -> &[PositionalStrategy] {
        &self.strategies
    }

    /// Scope of adversary quantification; attached to all external outputs.
    pub fn scope(&self) -> &'static str {
        "positional adversaries"
    }

    pub fn entry(&self, i: usize, j: usize) -> DomEntry {
        let (a, b) = (&self.tables[i], &self.tables[j]);
        if a == b {
            DomEntry::EqualValued
        } else if a.iter().zip(b).all(|(&x, &y)| x || !y) {
            DomEntry::Dominates
        } else {
            DomEntry::Incomparable
        }
    }

    pub fn dominates(&self, i: usize, j: usize) -> bool {
        self.entry(i, j) == DomEntry::Dominates
    }

    /// Indices of strategies not dominated by any other.
    pub fn maximal(&self) -> Vec<usize> {
        (0..self.strategies.len())
            .filter(|&i| (0..self.strategies.len()).all(|j| !self.dominates(j, i)))
            .collect()
    }
}

fn check_budget(game: &Game, budget: u128) -> Result<(), OracleError> {
    let needed = StrategySpace::new(game, Player::One).total_count()
        * StrategySpace::new(game, Player::Two).total_count()
        * game.state_count() as u128;
    if needed > budget {
        Err(OracleError::BudgetExceeded { needed, budget })
    } else {
        Ok(())
    }
}

/// Value table of every Player-1 strategy against every positional
/// adversary and start state.
pub fn dominance_matrix(
    game: &Game,
    goal: &GoalExpr,
    budget: u128,
) -> Result<DominanceRelation, OracleError> {
    check_budget(game, budget)?;
    let adversaries: Vec<PositionalStrategy> = StrategySpace::new(game, Player::Two).collect();
    let mut strategies = Vec::new();
    let mut tables = Vec::new();
    for sigma in StrategySpace::new(game, Player::One) {
        let mut table = Vec::with_capacity(adversaries.len() * game.state_count());
        for tau in &adversaries {
            for s in game.states() {
                table.push(val(game, goal, &sigma, tau, s));
            }
        }
        strategies.push(sigma);
        tables.push(table);
    }
    Ok(DominanceRelation { strategies, tables })
}

/// Player-1 strategies that no enumerated strategy dominates.
pub fn maximal_positional(
    game: &Game,
    goal: &GoalExpr,
    budget: u128,
) -> Result<Vec<PositionalStrategy>, OracleError> {
    let rel = dominance_matrix(game, goal, budget)?;
    Ok(rel
        .maximal()
        .into_iter()
        .map(|i| rel.strategies[i].clone())
        .collect())
}

/// Whether some adversary and start state make `a` win while `b` loses.
///
/// The two plays coincide until they reach a state where `a` and `b` move
/// differently; from there the histories differ forever, so one adversary
/// can continue the branches independently. With a prefix-independent goal
/// the shared prefix is irrelevant, and every potential divergence state is
/// itself a start state, so a separation exists exactly when some state
/// where the strategies split is cooperatively winning under `a` and not
/// adversarially winning under `b`.
fn separation(
    game: &Game,
    goal: &GoalExpr,
    a: &PositionalStrategy,
    b: &PositionalStrategy,
    budget: u128,
) -> Result<bool, OracleError> {
    let all: BTreeSet<StateId> = game.states().collect();
    let coop_a = brute_winning_region(
        &game.restrict_player1_edges(&all, a),
        goal,
        SolveMode::Cooperative,
        budget,
    )?;
    let adv_b = brute_winning_region(
        &game.restrict_player1_edges(&all, b),
        goal,
        SolveMode::Adversarial,
        budget,
    )?;
    Ok(game
        .states_of(Player::One)
        .into_iter()
        .any(|u| a.choice(u) != b.choice(u) && coop_a.contains(&u) && !adv_b.contains(&u)))
}

/// Whether `better` dominates `worse` against arbitrary adversaries, not
/// just positional ones: at least as good from every start against every
/// adversary, and strictly better for at least one pair.
///
/// Sound and complete for prefix-independent goals; see [`separation`].
pub fn fully_dominates(
    game: &Game,
    goal: &GoalExpr,
    better: &PositionalStrategy,
    worse: &PositionalStrategy,
    budget: u128,
) -> Result<bool, OracleError> {
    Ok(!separation(game, goal, worse, better, budget)? && separation(game, goal, better, worse, budget)?)
}

/// Winning states by sheer enumeration: adversarial keeps states where some
/// sigma beats every tau, cooperative where some pair wins.
pub fn brute_winning_region(
    game: &Game,
    goal: &GoalExpr,
    mode: SolveMode,
    budget: u128,
) -> Result<BTreeSet<StateId>, OracleError> {
    check_budget(game, budget)?;
    let adversaries: Vec<PositionalStrategy> = StrategySpace::new(game, Player::Two).collect();
    let mut region = BTreeSet::new();
    for sigma in StrategySpace::new(game, Player::One) {
        for s in game.states() {
            if region.contains(&s) {
                continue;
            }
            let won = match mode {
                SolveMode::Adversarial => adversaries.iter().all(|tau| val(game, goal, &sigma, tau, s)),
                SolveMode::Cooperative => adversaries.iter().any(|tau| val(game, goal, &sigma, tau, s)),
            };
            if won {
                region.insert(s);
            }
        }
    }
    Ok(region)
}
