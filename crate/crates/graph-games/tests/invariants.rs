//! Cross-cutting property sweeps on random games: implication chains,
//! determinacy, region inclusions, the detach construction, classification
//! flags, and format round-trips.

use std::collections::BTreeSet;

use graph_games::oracle::val;
use graph_games::{
    brute_winning_region, check_criteria, classify, cooperative_solve, eval_lasso, expand,
    parse_game, random_game, render_game, solve, CheckInput, ColorLasso, Criterion, GoalExpr,
    MooreKind, MooreMachine, Path, Player, PositionalStrategy, SolveMode, StateId, StrategySpace,
    Three, Verdict, DEFAULT_BUDGET,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn goal_pool() -> Vec<GoalExpr> {
    vec![
        GoalExpr::Ev(1),
        GoalExpr::Safe([0, 1].into()),
        GoalExpr::Buchi(1),
        GoalExpr::CoBuchi(0),
        GoalExpr::Parity,
        GoalExpr::First(1),
        GoalExpr::Count(1, 2),
        GoalExpr::and(GoalExpr::Buchi(1), GoalExpr::Safe([0, 1].into())),
        GoalExpr::or(GoalExpr::Ev(2), GoalExpr::CoBuchi(0)),
        GoalExpr::and(GoalExpr::First(1), GoalExpr::CoBuchi(2)),
        GoalExpr::not(GoalExpr::Buchi(1)),
    ]
}

/// Subgame perfection implies strong winning implies winning, and likewise
/// down the cooperative column, for every strategy the checker supports.
#[test]
fn implication_chains_hold_on_random_games() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for _ in 0..30 {
        let game = random_game(&mut rng, 6, 3);
        for goal in goal_pool() {
            for sigma in StrategySpace::new(&game, Player::One).take(12) {
                let report =
                    check_criteria(&CheckInput::plain(&game, &goal, &sigma), &Criterion::ALL);
                if matches!(report.verdict(Criterion::Winning), Verdict::Unsupported { .. }) {
                    continue;
                }
                let h = |c: Criterion| report.verdict(c).holds();
                assert!(!h(Criterion::SubgamePerfect) || h(Criterion::StronglyWinning), "{goal}");
                assert!(!h(Criterion::StronglyWinning) || h(Criterion::Winning), "{goal}");
                assert!(!h(Criterion::CPerfect) || h(Criterion::CsWinning), "{goal}");
                assert!(!h(Criterion::CsWinning) || h(Criterion::CWinning), "{goal}");
                assert_eq!(
                    h(Criterion::Admissible),
                    h(Criterion::StronglyWinning) && h(Criterion::CsWinning),
                    "{goal}"
                );
            }
        }
    }
}

/// These games are determined: outside Player 1's winning region, Player 2
/// has a positional strategy that defeats every Player-1 strategy.
#[test]
fn games_are_determined_under_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(37);
    for _ in 0..40 {
        let game = random_game(&mut rng, 5, 3);
        for goal in [
            GoalExpr::Ev(1),
            GoalExpr::Safe([0, 1].into()),
            GoalExpr::Buchi(1),
            GoalExpr::CoBuchi(1),
            GoalExpr::Parity,
        ] {
            let region =
                brute_winning_region(&game, &goal, SolveMode::Adversarial, DEFAULT_BUDGET)
                    .unwrap();
            for s in game.states().filter(|s| !region.contains(s)) {
                let refuted = StrategySpace::new(&game, Player::Two).any(|tau| {
                    StrategySpace::new(&game, Player::One)
                        .all(|sigma| !val(&game, &goal, &sigma, &tau, s))
                });
                assert!(refuted, "{goal}: no positional refutation at {}", game.name(s));
            }
        }
    }
}

/// Cooperation only helps: the adversarial winning region is contained in
/// the cooperative one, for solver-handled and composite goals alike.
#[test]
fn cooperative_region_contains_adversarial_region() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    for _ in 0..40 {
        let game = random_game(&mut rng, 6, 3);
        for goal in goal_pool() {
            let adversarial =
                brute_winning_region(&game, &goal, SolveMode::Adversarial, DEFAULT_BUDGET)
                    .unwrap();
            let cooperative =
                brute_winning_region(&game, &goal, SolveMode::Cooperative, DEFAULT_BUDGET)
                    .unwrap();
            assert!(adversarial.is_subset(&cooperative), "{goal}");
            assert_eq!(cooperative, cooperative_solve(&game, &goal).0, "{goal}");
        }
    }
}

/// Detaching a path adds a one-way chain that cannot influence the rest of
/// the game: old states keep their winning status, and for
/// prefix-independent goals the chain entry inherits the status of the
/// state the chain feeds into.
#[test]
fn detach_preserves_winning_status() {
    let mut rng = ChaCha8Rng::seed_from_u64(43);
    for _ in 0..40 {
        let game = random_game(&mut rng, 6, 3);
        // a short random walk to detach
        let mut walk = vec![rng.gen_range(0..game.state_count())];
        for _ in 0..rng.gen_range(1..4) {
            let succ = game.successors(*walk.last().unwrap());
            walk.push(succ[rng.gen_range(0..succ.len())]);
        }
        let rho = Path::new(&game, walk.clone()).unwrap();
        let (detached, chain) = game.detach(&rho).unwrap();

        for goal in [GoalExpr::Buchi(1), GoalExpr::CoBuchi(2), GoalExpr::Parity] {
            for mode in [SolveMode::Adversarial, SolveMode::Cooperative] {
                let before = solve(&game, &goal, mode).unwrap().region;
                let after = solve(&detached, &goal, mode).unwrap().region;
                let old: BTreeSet<StateId> =
                    after.iter().copied().filter(|&s| s < game.state_count()).collect();
                assert_eq!(old, before, "{goal} {mode:?}");
                assert_eq!(
                    after.contains(&chain[0]),
                    before.contains(walk.last().unwrap()),
                    "{goal} {mode:?}: chain entry disagrees with its exit"
                );
            }
        }
    }
}

/// A memory expansion whose memory never changes is the game itself: every
/// criterion verdict agrees with the plain check.
#[test]
fn trivial_memory_expansion_changes_no_verdict() {
    let mut rng = ChaCha8Rng::seed_from_u64(47);
    // color 9 never occurs, so the counter never moves
    let moore = MooreMachine { kind: MooreKind::Count { color: 9, max: 1 } };
    for _ in 0..20 {
        let game = random_game(&mut rng, 5, 3);
        let exp = expand(&game, &moore);
        for goal in [GoalExpr::Buchi(1), GoalExpr::Ev(2), GoalExpr::Safe([0, 1].into())] {
            for sigma in StrategySpace::new(&game, Player::One).take(6) {
                let lifted = PositionalStrategy::new(
                    &exp.game,
                    Player::One,
                    &sigma
                        .moves()
                        .iter()
                        .map(|&(s, t)| (exp.find(s, 0).unwrap(), exp.find(t, 0).unwrap()))
                        .collect::<Vec<_>>(),
                )
                .unwrap();
                let plain =
                    check_criteria(&CheckInput::plain(&game, &goal, &sigma), &Criterion::ALL);
                let expanded = check_criteria(
                    &CheckInput::expanded(&exp, &game, &goal, &lifted),
                    &Criterion::ALL,
                );
                for c in Criterion::ALL {
                    assert_eq!(
                        plain.verdict(c).holds(),
                        expanded.verdict(c).holds(),
                        "{goal} {}",
                        c.name()
                    );
                }
            }
        }
    }
}

/// The classification flags are conservative promises about words: a `yes`
/// on shrinkable or extensible must survive random lasso perturbations.
#[test]
fn classification_flags_are_sound_on_random_lassos() {
    let mut rng = ChaCha8Rng::seed_from_u64(53);
    for goal in goal_pool() {
        let class = classify(&goal);
        for _ in 0..300 {
            let prefix: Vec<u32> =
                (0..rng.gen_range(0..4)).map(|_| rng.gen_range(0..3)).collect();
            let cycle: Vec<u32> =
                (0..rng.gen_range(1..4)).map(|_| rng.gen_range(0..3)).collect();
            let lasso = ColorLasso::new(prefix.clone(), cycle.clone());
            if !eval_lasso(&goal, &lasso) {
                continue;
            }
            if class.shrinkable == Three::Yes {
                let shrunk = if prefix.is_empty() {
                    let mut rotated = cycle.clone();
                    rotated.rotate_left(1);
                    ColorLasso::new(Vec::new(), rotated)
                } else {
                    ColorLasso::new(prefix[1..].to_vec(), cycle.clone())
                };
                assert!(eval_lasso(&goal, &shrunk), "{goal} is not shrinkable");
            }
            if class.extensible == Three::Yes {
                for c in 0..3 {
                    let mut extended = vec![c];
                    extended.extend(prefix.iter().copied());
                    let longer = ColorLasso::new(extended, cycle.clone());
                    assert!(eval_lasso(&goal, &longer), "{goal} is not extensible");
                }
            }
        }
    }
}

/// Rendering a game and parsing it back is the identity on the rendered
/// form, for every fixture and a pile of random games.
#[test]
fn render_parse_round_trips() {
    let mut rng = ChaCha8Rng::seed_from_u64(59);
    let mut cases: Vec<(graph_games::Game, GoalExpr)> = graph_games::fixtures::all_valid()
        .into_iter()
        .map(|(_, g, goal)| (g, goal))
        .collect();
    for i in 0..40 {
        let game = random_game(&mut rng, 8, 4);
        let goal = goal_pool()[i % goal_pool().len()].clone();
        cases.push((game, goal));
    }
    for (game, goal) in cases {
        let text = render_game(&game, &goal);
        let (parsed, parsed_goal) = parse_game(&text).expect("rendered games parse");
        assert_eq!(render_game(&parsed, &parsed_goal), text);
    }
}
