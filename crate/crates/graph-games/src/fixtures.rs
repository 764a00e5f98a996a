//! Small hand-built games used across tests and the guide.
//!
//! Each constructor returns a valid game together with its goal. Sinks that
//! would block are completed with a self-loop carrying the sink's own color,
//! so every fixture satisfies [`crate::game::Game::validate`] except for the
//! explicitly `_as_drawn` variant kept for the validator tests.

use std::collections::BTreeSet;

use crate::game::{Color, Game, Player};
use crate::goal::GoalExpr;

fn game(states: Vec<(&str, Player, Color)>, edges: Vec<(&str, &str)>) -> Game {
    let named: Vec<(String, Player, Color)> = states
        .iter()
        .map(|&(n, p, c)| (n.to_string(), p, c))
        .collect();
    let index = |name: &str| {
        states
            .iter()
            .position(|&(n, _, _)| n == name)
            .unwrap_or_else(|| panic!("unknown fixture state {name}"))
    };
    let idx_edges: Vec<(usize, usize)> = edges.iter().map(|&(a, b)| (index(a), index(b))).collect();
    Game::build(named, idx_edges).expect("fixture must be valid")
}

/// Three-state repeated-visit game in which every state is losing, yet
/// insisting (moving back toward the colored state) is still the best
/// effort. Goal: see color 1 infinitely often.
pub fn persist() -> (Game, GoalExpr) {
    let g = game(
        vec![
            ("s0", Player::One, 1),
            ("s1", Player::Two, 0),
            ("s2", Player::Two, 0),
        ],
        vec![
            ("s0", "s1"),
            ("s0", "s2"),
            ("s1", "s0"),
            ("s1", "s2"),
            ("s2", "s2"),
        ],
    );
    (g, GoalExpr::Buchi(1))
}

/// Reach game where both choices of Player 1 give chance 1 against a random
/// adversary, but only the direct move is winning. Goal: reach color 1.
pub fn direct_or_detour() -> (Game, GoalExpr) {
    let g = game(
        vec![
            ("s0", Player::One, 0),
            ("s1", Player::Two, 0),
            ("s2", Player::Two, 1),
        ],
        vec![
            ("s0", "s1"),
            ("s0", "s2"),
            ("s1", "s1"),
            ("s1", "s2"),
            ("s2", "s2"),
        ],
    );
    (g, GoalExpr::reach(1))
}

/// Chain game whose goal counts two visits of color 1. The goal admits
/// positional winning strategies, but no positional strategy is admissible
/// here: the right move at the only branching state depends on how many
/// 1-colored states were already seen.
pub fn twice_one() -> (Game, GoalExpr) {
    let g = game(
        vec![
            ("s0", Player::Two, 1),
            ("s1", Player::One, 0),
            ("s2", Player::Two, 0),
            ("s3", Player::Two, 1),
            ("s4", Player::Two, 1),
            ("s5", Player::Two, 0),
        ],
        vec![
            ("s0", "s1"),
            ("s1", "s2"),
            ("s1", "s4"),
            ("s2", "s3"),
            ("s2", "s5"),
            ("s3", "s4"),
            ("s4", "s5"),
            ("s5", "s5"),
        ],
    );
    (g, GoalExpr::Count(1, 2))
}

/// Reach game where every strategy of Player 1 is winning, strongly winning
/// and admissible, yet only one of them is optimal against a uniformly
/// random adversary: going via `s1` wins with chance 1/2, via `s2` only 1/3.
/// Goal: reach color 1 (state `s4`).
pub fn lottery() -> (Game, GoalExpr) {
    let g = game(
        vec![
            ("s0", Player::One, 0),
            ("s1", Player::Two, 0),
            ("s2", Player::Two, 0),
            ("s3", Player::Two, 0),
            ("s4", Player::Two, 1),
            ("s5", Player::Two, 0),
            ("s6", Player::Two, 0),
        ],
        vec![
            ("s0", "s1"),
            ("s0", "s2"),
            ("s1", "s3"),
            ("s1", "s4"),
            ("s2", "s4"),
            ("s2", "s5"),
            ("s2", "s6"),
            ("s3", "s3"),
            ("s4", "s4"),
            ("s5", "s5"),
            ("s6", "s6"),
        ],
    );
    (g, GoalExpr::reach(1))
}

/// Two-state game separating winning from strongly winning, and strongly
/// winning from subgame perfect. Goal: the play starts with color 1 and is
/// eventually always color 2.
pub fn win_not_strong() -> (Game, GoalExpr) {
    let g = game(
        vec![("s0", Player::Two, 1), ("s1", Player::One, 2)],
        vec![("s0", "s0"), ("s0", "s1"), ("s1", "s0"), ("s1", "s1")],
    );
    (
        g,
        GoalExpr::and(GoalExpr::First(1), GoalExpr::CoBuchi(2)),
    )
}

/// Game separating c-winning from cs-winning, and cs-winning from c-perfect.
/// Victory needs cooperation: Player 1 must pass through `s1` so that the
/// adversary can hand the play to the absorbing color-2 state. Goal: the
/// play starts with color 1 and is eventually always color 2.
pub fn coop_handoff() -> (Game, GoalExpr) {
    let g = game(
        vec![
            ("s0", Player::One, 1),
            ("s1", Player::Two, 0),
            ("s2", Player::One, 0),
            ("s3", Player::Two, 2),
        ],
        vec![
            ("s0", "s1"),
            ("s0", "s2"),
            ("s1", "s2"),
            ("s1", "s3"),
            ("s2", "s1"),
            ("s2", "s2"),
            ("s3", "s3"),
        ],
    );
    (
        g,
        GoalExpr::and(GoalExpr::First(1), GoalExpr::CoBuchi(2)),
    )
}

/// Fork-shaped game with a positional strongly winning strategy but no
/// positional subgame perfect one: the right move at the second fork depends
/// on which branch was taken at the first. Goal: start with color 0 and see
/// either both 1 and 3 or both 2 and 4.
pub fn two_routes() -> (Game, GoalExpr) {
    let g = game(
        vec![
            ("s0", Player::One, 0),
            ("s1", Player::Two, 1),
            ("s2", Player::Two, 2),
            ("s3", Player::One, 0),
            ("s4", Player::Two, 3),
            ("s5", Player::Two, 4),
        ],
        vec![
            ("s0", "s1"),
            ("s0", "s2"),
            ("s1", "s3"),
            ("s2", "s3"),
            ("s3", "s4"),
            ("s3", "s5"),
            ("s4", "s4"),
            ("s5", "s5"),
        ],
    );
    (g, two_routes_goal())
}

fn two_routes_goal() -> GoalExpr {
    GoalExpr::and(
        GoalExpr::First(0),
        GoalExpr::or(
            GoalExpr::and(GoalExpr::Ev(1), GoalExpr::Ev(3)),
            GoalExpr::and(GoalExpr::Ev(2), GoalExpr::Ev(4)),
        ),
    )
}

/// The fork game of [`two_routes`] with its two leaves left as sinks, which
/// violates the non-blocking requirement. Kept for validator tests.
pub fn two_routes_as_drawn() -> Game {
    Game::new(
        vec![
            ("s0".into(), Player::One, 0),
            ("s1".into(), Player::Two, 1),
            ("s2".into(), Player::Two, 2),
            ("s3".into(), Player::One, 0),
            ("s4".into(), Player::Two, 3),
            ("s5".into(), Player::Two, 4),
        ],
        vec![(0, 1), (0, 2), (1, 3), (2, 3), (3, 4), (3, 5)],
    )
}

/// Safety-flavored companion used by a few tests: Player 1 must keep the
/// play inside colors {0, 1}; one trap state carries color 2.
pub fn stay_low() -> (Game, GoalExpr) {
    let g = game(
        vec![
            ("a", Player::One, 0),
            ("b", Player::Two, 1),
            ("c", Player::Two, 2),
        ],
        vec![
            ("a", "a"),
            ("a", "b"),
            ("b", "a"),
            ("b", "c"),
            ("c", "c"),
        ],
    );
    (g, GoalExpr::Safe(BTreeSet::from([0, 1])))
}

/// Every fixture that is a valid game, paired with its goal and a short
/// label. Handy for sweep-style tests.
pub fn all_valid() -> Vec<(&'static str, Game, GoalExpr)> {
    let mut out = Vec::new();
    let entries: Vec<(&'static str, (Game, GoalExpr))> = vec![
        ("persist", persist()),
        ("direct_or_detour", direct_or_detour()),
        ("twice_one", twice_one()),
        ("lottery", lottery()),
        ("win_not_strong", win_not_strong()),
        ("coop_handoff", coop_handoff()),
        ("two_routes", two_routes()),
        ("stay_low", stay_low()),
    ];
    for (name, (g, f)) in entries {
        out.push((name, g, f));
    }
    out
}
