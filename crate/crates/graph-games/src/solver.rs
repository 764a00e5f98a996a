//! Fixpoint solvers: winning regions and positional strategies for the
//! standard goal classes, plus cooperative (coalition) solving.
//!
//! Every solver is deterministic: whenever a player has several good
//! successors, the lowest state index wins. Set-based variants (regions as
//! explicit state sets) are public because the criteria machinery reuses
//! them on product games with reassigned targets.

use std::collections::{BTreeMap, BTreeSet};

use crate::game::{Color, Game, Player, PositionalStrategy, StateId};
use crate::goal::{classify, GoalExpr, SolverClass};

/// Result of an attractor computation: the attracted set and, for the
/// attracting player's states strictly outside the target, one successor
/// that makes progress toward it.
#[derive(Debug, Clone)]
pub struct Attractor {
    pub region: BTreeSet<StateId>,
    pub moves: BTreeMap<StateId, StateId>,
}

/// Least set containing `target` and closed under: a `player` state with
/// some successor inside joins; an opponent state with all of its in-`sub`
/// successors inside joins (vacuously so when it has none).
///
/// Requires `target ⊆ sub`. Only edges staying inside `sub` are considered.
pub fn attractor(
    game: &Game,
    player: Player,
    target: &BTreeSet<StateId>,
    sub: &BTreeSet<StateId>,
) -> Attractor {
    debug_assert!(target.is_subset(sub));
    let mut region = target.clone();
    let mut moves = BTreeMap::new();
    loop {
        let mut changed = false;
        for &s in sub {
            if region.contains(&s) {
                continue;
            }
            let in_sub = || game.successors(s).iter().copied().filter(|t| sub.contains(t));
            if game.owner(s) == player {
                // successors are sorted, so the first hit is the lowest index
                if let Some(t) = in_sub().find(|t| region.contains(t)) {
                    region.insert(s);
                    moves.insert(s, t);
                    changed = true;
                }
            } else if in_sub().all(|t| region.contains(&t)) {
                region.insert(s);
                changed = true;
            }
        }
        if !changed {
            return Attractor { region, moves };
        }
    }
}

/// Region + partial move map of one player, as produced by the set solvers.
#[derive(Debug, Clone)]
pub struct RegionStrategy {
    pub region: BTreeSet<StateId>,
    pub moves: BTreeMap<StateId, StateId>,
}

/// States in `sub` from which `player` can force reaching `target`.
pub fn reach_region(
    game: &Game,
    player: Player,
    target: &BTreeSet<StateId>,
    sub: &BTreeSet<StateId>,
) -> RegionStrategy {
    let a = attractor(game, player, target, sub);
    RegionStrategy {
        region: a.region,
        moves: a.moves,
    }
}

/// States in `sub` from which `player` can keep the play inside `allowed`
/// forever. Moves stay inside the returned region.
pub fn safe_region(
    game: &Game,
    player: Player,
    allowed: &BTreeSet<StateId>,
    sub: &BTreeSet<StateId>,
) -> RegionStrategy {
    let bad: BTreeSet<StateId> = sub.difference(allowed).copied().collect();
    let escape = attractor(game, player.opponent(), &bad, sub);
    let region: BTreeSet<StateId> = sub.difference(&escape.region).copied().collect();
    let mut moves = BTreeMap::new();
    for &s in &region {
        if game.owner(s) == player {
            let t = game
                .successors(s)
                .iter()
                .copied()
                .find(|t| region.contains(t))
                .expect("safe region is player-closed");
            moves.insert(s, t);
        }
    }
    RegionStrategy { region, moves }
}

/// States in `sub` from which `player` can force visiting `recur`
/// infinitely often.
pub fn buchi_region(
    game: &Game,
    player: Player,
    recur: &BTreeSet<StateId>,
    sub: &BTreeSet<StateId>,
) -> RegionStrategy {
    let mut sub = sub.clone();
    loop {
        let target: BTreeSet<StateId> = recur.intersection(&sub).copied().collect();
        let a = attractor(game, player, &target, &sub);
        let escaped: BTreeSet<StateId> = sub.difference(&a.region).copied().collect();
        if escaped.is_empty() {
            let mut moves = a.moves;
            for &s in &target {
                if game.owner(s) == player {
                    let t = game
                        .successors(s)
                        .iter()
                        .copied()
                        .find(|t| sub.contains(t))
                        .expect("winning region is player-closed");
                    moves.insert(s, t);
                }
            }
            return RegionStrategy { region: sub, moves };
        }
        let lost = attractor(game, player.opponent(), &escaped, &sub);
        sub = sub.difference(&lost.region).copied().collect();
    }
}

/// States in `sub` from which `player` can force the play to eventually
/// stay inside `stay` forever.
pub fn cobuchi_region(
    game: &Game,
    player: Player,
    stay: &BTreeSet<StateId>,
    sub: &BTreeSet<StateId>,
) -> RegionStrategy {
    // Iterated rounds: attract to the current safe core, remove, repeat.
    // One round is not enough: removing an attractor strips opponent escape
    // edges, which can make further states safe.
    let mut remaining = sub.clone();
    let mut region = BTreeSet::new();
    let mut moves = BTreeMap::new();
    loop {
        let allowed: BTreeSet<StateId> = stay.intersection(&remaining).copied().collect();
        let core = safe_region(game, player, &allowed, &remaining);
        if core.region.is_empty() {
            return RegionStrategy { region, moves };
        }
        let a = attractor(game, player, &core.region, &remaining);
        moves.extend(a.moves);
        moves.extend(core.moves);
        region.extend(a.region.iter().copied());
        remaining = remaining.difference(&a.region).copied().collect();
    }
}

/// Winning regions and positional strategies of both players in a parity
/// game over `sub`, with explicit priorities (max priority seen infinitely
/// often even: Player 1 wins).
#[derive(Debug, Clone)]
pub struct ParityResult {
    pub region: [BTreeSet<StateId>; 2],
    pub moves: [BTreeMap<StateId, StateId>; 2],
}

fn pidx(p: Player) -> usize {
    match p {
        Player::One => 0,
        Player::Two => 1,
    }
}

/// Zielonka's recursive algorithm.
pub fn parity_regions(game: &Game, priority: &[Color], sub: &BTreeSet<StateId>) -> ParityResult {
    let mut result = ParityResult {
        region: [BTreeSet::new(), BTreeSet::new()],
        moves: [BTreeMap::new(), BTreeMap::new()],
    };
    if sub.is_empty() {
        return result;
    }
    let top = sub.iter().map(|&s| priority[s]).max().unwrap();
    let player = if top % 2 == 0 { Player::One } else { Player::Two };
    let target: BTreeSet<StateId> = sub.iter().copied().filter(|&s| priority[s] == top).collect();
    let a = attractor(game, player, &target, sub);
    let rest: BTreeSet<StateId> = sub.difference(&a.region).copied().collect();
    let inner = parity_regions(game, priority, &rest);
    let me = pidx(player);
    let opp = pidx(player.opponent());
    if inner.region[opp].is_empty() {
        // `player` wins all of `sub`: cycle through the top-priority states.
        result.region[me] = sub.clone();
        result.moves[me] = inner.moves[me].clone();
        result.moves[me].extend(a.moves);
        for &s in &target {
            if game.owner(s) == player {
                let t = game
                    .successors(s)
                    .iter()
                    .copied()
                    .find(|t| sub.contains(t))
                    .expect("subgame is closed");
                result.moves[me].insert(s, t);
            }
        }
        result.moves[opp] = inner.moves[opp].clone();
        return result;
    }
    let b = attractor(game, player.opponent(), &inner.region[opp], sub);
    let rest2: BTreeSet<StateId> = sub.difference(&b.region).copied().collect();
    let outer = parity_regions(game, priority, &rest2);
    result.region[opp] = outer.region[opp].union(&b.region).copied().collect();
    result.moves[opp] = outer.moves[opp].clone();
    result.moves[opp].extend(inner.moves[opp].clone());
    result.moves[opp].extend(b.moves);
    result.region[me] = outer.region[me].clone();
    result.moves[me] = outer.moves[me].clone();
    result
}

/// How a game is solved: against an adversary, or with both players
/// cooperating toward the goal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SolveMode {
    Adversarial,
    Cooperative,
}

/// Winning region plus a witness Player-1 strategy.
#[derive(Debug, Clone)]
pub struct SolveResult {
    pub region: BTreeSet<StateId>,
    pub strategy: PositionalStrategy,
    pub mode: SolveMode,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SolveError {
    #[error("adversarial solving supports only bare-atom goals; {0} is composite")]
    CompositeAdversarial(String),
}

/// Turns a partial move map into a total Player-1 strategy; states without
/// an assigned move fall back to the lowest-index successor.
pub fn total_strategy(game: &Game, moves: &BTreeMap<StateId, StateId>) -> PositionalStrategy {
    let mut sigma = PositionalStrategy::lowest(game, Player::One);
    for (&s, &t) in moves {
        if game.owner(s) == Player::One {
            sigma.set(s, t);
        }
    }
    sigma
}

fn color_states(game: &Game, pred: impl Fn(Color) -> bool) -> BTreeSet<StateId> {
    game.states().filter(|&s| pred(game.color(s))).collect()
}

/// Solves the game for a bare-atom goal against the adversary, or for any
/// goal with both players cooperating.
pub fn solve(game: &Game, goal: &GoalExpr, mode: SolveMode) -> Result<SolveResult, SolveError> {
    match mode {
        SolveMode::Adversarial => {
            let rs = adversarial_region(game, goal, Player::One)?;
            Ok(SolveResult {
                region: rs.region.clone(),
                strategy: total_strategy(game, &rs.moves),
                mode,
            })
        }
        SolveMode::Cooperative => {
            let (region, strategy) = crate::coop::cooperative_solve(game, goal);
            Ok(SolveResult {
                region,
                strategy,
                mode,
            })
        }
    }
}

/// Winning region and move map for `player` under a bare-atom goal.
pub fn adversarial_region(
    game: &Game,
    goal: &GoalExpr,
    player: Player,
) -> Result<RegionStrategy, SolveError> {
    let all: BTreeSet<StateId> = game.states().collect();
    match goal {
        GoalExpr::Ev(c) => Ok(reach_region(game, player, &color_states(game, |x| x == *c), &all)),
        GoalExpr::Safe(set) => Ok(safe_region(
            game,
            player,
            &color_states(game, |x| set.contains(&x)),
            &all,
        )),
        GoalExpr::Buchi(c) => Ok(buchi_region(
            game,
            player,
            &color_states(game, |x| x == *c),
            &all,
        )),
        GoalExpr::CoBuchi(c) => Ok(cobuchi_region(
            game,
            player,
            &color_states(game, |x| x == *c),
            &all,
        )),
        GoalExpr::Parity => {
            let priority: Vec<Color> = game.states().map(|s| game.color(s)).collect();
            let priority = match player {
                Player::One => priority,
                // The opponent of the parity player wins when the maximal
                // recurring color is odd; shifting every color by one turns
                // that into the even condition.
                Player::Two => priority.into_iter().map(|c| c + 1).collect(),
            };
            let res = parity_regions(game, &priority, &all);
            Ok(RegionStrategy {
                region: res.region[0].clone(),
                moves: res.moves[0].clone(),
            })
        }
        GoalExpr::True => Ok(RegionStrategy {
            region: all,
            moves: BTreeMap::new(),
        }),
        GoalExpr::False => Ok(RegionStrategy {
            region: BTreeSet::new(),
            moves: BTreeMap::new(),
        }),
        other => {
            debug_assert_eq!(classify(other).solver_class, SolverClass::Composite);
            Err(SolveError::CompositeAdversarial(other.to_string()))
        }
    }
}

/// The game with every state handed to Player 1 (the two players form a
/// coalition). Structure and colors are unchanged.
pub fn coalition(game: &Game) -> Game {
    let states: Vec<(String, Player, Color)> = game
        .states()
        .map(|s| (game.name(s).to_string(), Player::One, game.color(s)))
        .collect();
    let mut edges = Vec::new();
    for s in game.states() {
        for &t in game.successors(s) {
            edges.push((s, t));
        }
    }
    Game::build(states, edges).expect("coalition preserves validity")
}
