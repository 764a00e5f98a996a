//! Cooperative solving by exists-lasso search.
//!
//! Both players together can realize exactly the ultimately periodic plays,
//! so a state is cooperatively winning iff some lasso from it satisfies the
//! goal. On a monitor product, satisfaction of a lasso only depends on the
//! cycle entry's residual and on the set of colors the cycle visits: the
//! search enumerates candidate cycle color supports, finds cycles through
//! strongly connected components of the support-restricted graph, and takes
//! a backward closure.

use std::collections::{BTreeMap, BTreeSet};

use crate::game::{Color, Game, Lasso, Player, PositionalStrategy, StateId};
use crate::goal::{classify, eval_lasso, ColorLasso, GoalExpr, SolverClass};
use crate::product::MonitorProduct;
use crate::solver::{adversarial_region, coalition, total_strategy};

/// Cooperative analysis of a graph whose states carry residual goals.
///
/// Requires monitor coherence: for every edge, the target's residual must be
/// the source's residual advanced by the source's color. Monitor products
/// (restricted or not) satisfy this by construction.
pub struct CoopResult {
    /// States from which some satisfying lasso exists.
    pub winning: BTreeSet<StateId>,
    /// One deterministic witness lasso per winning state.
    pub witness: BTreeMap<StateId, Lasso>,
}

fn contains_first(goal: &GoalExpr) -> bool {
    match goal {
        GoalExpr::First(_) => true,
        GoalExpr::And(a, b) | GoalExpr::Or(a, b) => contains_first(a) || contains_first(b),
        GoalExpr::Not(a) => contains_first(a),
        _ => false,
    }
}

/// Whether a cycle whose color support is exactly `support` satisfies the
/// residual, regardless of ordering or multiplicity.
fn cycle_sat(residual: &GoalExpr, support: &BTreeSet<Color>) -> bool {
    debug_assert!(
        !contains_first(residual),
        "cycle entries always have a resolved first color"
    );
    let word: Vec<Color> = support.iter().copied().collect();
    eval_lasso(residual, &ColorLasso::new(Vec::new(), word))
}

/// Strongly connected components of the subgraph induced by `sub`,
/// in a deterministic order.
fn sccs(graph: &Game, sub: &BTreeSet<StateId>) -> Vec<Vec<StateId>> {
    // Kosaraju with explicit stacks.
    let mut order = Vec::new();
    let mut seen: BTreeSet<StateId> = BTreeSet::new();
    for &root in sub {
        if seen.contains(&root) {
            continue;
        }
        let mut stack = vec![(root, 0usize)];
        seen.insert(root);
        while let Some((s, i)) = stack.pop() {
            let succ: Vec<StateId> = graph
                .successors(s)
                .iter()
                .copied()
                .filter(|t| sub.contains(t))
                .collect();
            if i < succ.len() {
                stack.push((s, i + 1));
                let t = succ[i];
                if seen.insert(t) {
                    stack.push((t, 0));
                }
            } else {
                order.push(s);
            }
        }
    }
    let mut rev: BTreeMap<StateId, Vec<StateId>> = sub.iter().map(|&s| (s, Vec::new())).collect();
    for &s in sub {
        for &t in graph.successors(s) {
            if sub.contains(&t) {
                rev.get_mut(&t).unwrap().push(s);
            }
        }
    }
    let mut out = Vec::new();
    let mut assigned: BTreeSet<StateId> = BTreeSet::new();
    for &root in order.iter().rev() {
        if assigned.contains(&root) {
            continue;
        }
        let mut comp = Vec::new();
        let mut stack = vec![root];
        assigned.insert(root);
        while let Some(s) = stack.pop() {
            comp.push(s);
            for &p in &rev[&s] {
                if assigned.insert(p) {
                    stack.push(p);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

fn subsets(colors: &[Color]) -> Vec<BTreeSet<Color>> {
    let mut out = Vec::new();
    for mask in 1u64..(1u64 << colors.len()) {
        let set: BTreeSet<Color> = colors
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, &c)| c)
            .collect();
        out.push(set);
    }
    out.sort_by_key(|s| (s.len(), s.iter().copied().collect::<Vec<_>>()));
    out
}

/// Per-state anchor information: a satisfying cycle starts here.
struct Anchor {
    support: BTreeSet<Color>,
    component: Vec<StateId>,
}

/// Cooperative winning states and witness lassos of `graph`, where state
/// `s` must realize `residuals[s]` on the suffix starting with its own
/// color.
pub fn coop_winning(graph: &Game, residuals: &[GoalExpr]) -> CoopResult {
    assert_eq!(residuals.len(), graph.state_count());
    let universe = graph.color_universe();
    let mut anchors: BTreeMap<StateId, Anchor> = BTreeMap::new();
    for support in subsets(&universe) {
        let sub: BTreeSet<StateId> = graph
            .states()
            .filter(|&s| support.contains(&graph.color(s)))
            .collect();
        for comp in sccs(graph, &sub) {
            let nontrivial = comp.len() > 1 || graph.has_edge(comp[0], comp[0]);
            if !nontrivial {
                continue;
            }
            let colors: BTreeSet<Color> = comp.iter().map(|&s| graph.color(s)).collect();
            if colors != support {
                continue;
            }
            for &s in &comp {
                if !anchors.contains_key(&s) && cycle_sat(&residuals[s], &support) {
                    anchors.insert(
                        s,
                        Anchor {
                            support: support.clone(),
                            component: comp.clone(),
                        },
                    );
                }
            }
        }
    }

    // Backward BFS from the anchors gives the winning set and, per state,
    // a deterministic shortest path to its nearest anchor.
    let mut dist: BTreeMap<StateId, usize> = anchors.keys().map(|&s| (s, 0)).collect();
    let mut layer: Vec<StateId> = anchors.keys().copied().collect();
    while !layer.is_empty() {
        let mut next = Vec::new();
        for s in graph.states() {
            if dist.contains_key(&s) {
                continue;
            }
            if graph.successors(s).iter().any(|t| layer.contains(t)) {
                dist.insert(s, dist[&layer.iter().find(|t| graph.has_edge(s, **t)).unwrap()] + 1);
                next.push(s);
            }
        }
        layer = next;
    }

    let winning: BTreeSet<StateId> = dist.keys().copied().collect();
    let mut witness = BTreeMap::new();
    for &s in &winning {
        witness.insert(s, witness_lasso(graph, s, &dist, &anchors));
    }
    CoopResult { winning, witness }
}

fn witness_lasso(
    graph: &Game,
    start: StateId,
    dist: &BTreeMap<StateId, usize>,
    anchors: &BTreeMap<StateId, Anchor>,
) -> Lasso {
    let mut prefix = Vec::new();
    let mut current = start;
    while dist[&current] > 0 {
        prefix.push(current);
        current = graph
            .successors(current)
            .iter()
            .copied()
            .find(|t| dist.get(t) == Some(&(dist[&current] - 1)))
            .expect("distance decreases along some edge");
    }
    let anchor = current;
    let info = &anchors[&anchor];
    let cycle = canonical_cycle(graph, anchor, info);
    Lasso::new(graph, prefix, cycle).expect("witness construction follows edges")
}

/// A cycle at `anchor` inside its component visiting every support color:
/// walk to the lowest state of each color in ascending color order, then
/// return to the anchor.
fn canonical_cycle(graph: &Game, anchor: StateId, info: &Anchor) -> Vec<StateId> {
    let comp: BTreeSet<StateId> = info.component.iter().copied().collect();
    let mut walk = vec![anchor];
    let mut covered: BTreeSet<Color> = [graph.color(anchor)].into_iter().collect();
    for &c in &info.support {
        if covered.contains(&c) {
            continue;
        }
        let here = *walk.last().unwrap();
        let path = shortest_path(graph, &comp, here, |s| graph.color(s) == c)
            .expect("component covers every support color");
        covered.extend(path.iter().map(|&s| graph.color(s)));
        walk.extend(path.into_iter().skip(1));
    }
    if walk.len() == 1 {
        if graph.has_edge(anchor, anchor) {
            return walk;
        }
        // force an actual move before closing the cycle
        let t = graph
            .successors(anchor)
            .iter()
            .copied()
            .find(|t| comp.contains(t))
            .expect("a nontrivial component keeps an internal successor");
        walk.push(t);
    }
    let here = *walk.last().unwrap();
    if here != anchor {
        let back = shortest_path(graph, &comp, here, |s| s == anchor)
            .expect("component is strongly connected");
        walk.extend(back.into_iter().skip(1));
    }
    walk.pop(); // drop the closing anchor: the cycle wraps implicitly
    walk
}

/// Deterministic BFS path inside `sub` from `from` to the first state
/// matching `target`; `None` if unreachable. A path of length 0 is returned
/// when `from` itself matches.
fn shortest_path(
    graph: &Game,
    sub: &BTreeSet<StateId>,
    from: StateId,
    target: impl Fn(StateId) -> bool,
) -> Option<Vec<StateId>> {
    if target(from) {
        return Some(vec![from]);
    }
    let mut parent: BTreeMap<StateId, StateId> = BTreeMap::new();
    let mut queue = std::collections::VecDeque::from([from]);
    let mut seen: BTreeSet<StateId> = [from].into_iter().collect();
    while let Some(s) = queue.pop_front() {
        for &t in graph.successors(s) {
            if !sub.contains(&t) || !seen.insert(t) {
                continue;
            }
            parent.insert(t, s);
            if target(t) {
                let mut path = vec![t];
                let mut cur = t;
                while let Some(&p) = parent.get(&cur) {
                    path.push(p);
                    cur = p;
                }
                path.reverse();
                return Some(path);
            }
            queue.push_back(t);
        }
    }
    None
}

/// Cooperative region and Player-1 strategy of a plain game.
///
/// Bare-atom goals go through the coalition game and the adversarial
/// solvers; composite goals run the exists-lasso search on the monitor
/// product and merge the witness lassos into one positional strategy
/// (earlier start states take priority on conflicts).
pub fn cooperative_solve(game: &Game, goal: &GoalExpr) -> (BTreeSet<StateId>, PositionalStrategy) {
    if classify(goal).solver_class != SolverClass::Composite {
        let cg = coalition(game);
        let rs = adversarial_region(&cg, goal, Player::One)
            .expect("bare atoms are always solvable");
        let full = total_strategy(&cg, &rs.moves);
        let choices: Vec<(StateId, StateId)> = game
            .states_of(Player::One)
            .into_iter()
            .map(|s| (s, full.choice(s).unwrap()))
            .collect();
        let sigma = PositionalStrategy::new(game, Player::One, &choices)
            .expect("coalition strategy projects onto the same edges");
        return (rs.region, sigma);
    }
    let p = MonitorProduct::new(game, goal);
    let res = coop_winning(p.game(), &p.residuals());
    let region: BTreeSet<StateId> = game
        .states()
        .filter(|&s| res.winning.contains(&p.entry(s)))
        .collect();
    let mut sigma = PositionalStrategy::lowest(game, Player::One);
    let mut fixed: BTreeSet<StateId> = BTreeSet::new();
    for &s in &region {
        let lasso = &res.witness[&p.entry(s)];
        let mut walk = lasso.unroll(1);
        walk.push(lasso.cycle()[0]);
        for pair in walk.windows(2) {
            let gs = p.project(pair[0]);
            if game.owner(gs) == Player::One && fixed.insert(gs) {
                sigma.set(gs, p.project(pair[1]));
            }
        }
    }
    (region, sigma)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::solver::{solve, SolveMode};

    fn named(game: &Game, names: &[&str]) -> BTreeSet<StateId> {
        names
            .iter()
            .map(|n| game.state_by_name(n).unwrap())
            .collect()
    }

    #[test]
    fn coop_handoff_region_is_s0() {
        let (game, goal) = fixtures::coop_handoff();
        let r = solve(&game, &goal, SolveMode::Cooperative).unwrap();
        assert_eq!(r.region, named(&game, &["s0"]));
    }

    #[test]
    fn twice_one_coop_region() {
        let (game, goal) = fixtures::twice_one();
        let r = solve(&game, &goal, SolveMode::Cooperative).unwrap();
        assert_eq!(r.region, named(&game, &["s0", "s1", "s2", "s3"]));
    }

    #[test]
    fn bare_atom_coop_goes_through_coalition() {
        let (game, goal) = fixtures::persist();
        let r = solve(&game, &goal, SolveMode::Cooperative).unwrap();
        assert_eq!(r.region, named(&game, &["s0", "s1"]));
        let s0 = game.state_by_name("s0").unwrap();
        let s1 = game.state_by_name("s1").unwrap();
        assert_eq!(r.strategy.choice(s0), Some(s1));
    }

    #[test]
    fn witness_lassos_satisfy_residuals() {
        for (name, game, goal) in fixtures::all_valid() {
            let p = MonitorProduct::new(&game, &goal);
            let res = coop_winning(p.game(), &p.residuals());
            for (&cfg, lasso) in &res.witness {
                assert_eq!(lasso.start(), cfg);
                let colors = ColorLasso::of(p.game(), lasso);
                assert!(
                    eval_lasso(p.residual(cfg), &colors),
                    "witness for {name} at config {cfg} does not satisfy its residual"
                );
            }
        }
    }

    #[test]
    fn coop_region_contains_adversarial_region() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(61);
        for _ in 0..60 {
            let game = crate::random::random_game(&mut rng, 6, 3);
            for goal in [
                GoalExpr::Ev(1),
                GoalExpr::Buchi(2),
                GoalExpr::CoBuchi(0),
                GoalExpr::Parity,
            ] {
                let adv = solve(&game, &goal, SolveMode::Adversarial).unwrap().region;
                let coop = solve(&game, &goal, SolveMode::Cooperative).unwrap().region;
                assert!(adv.is_subset(&coop), "{goal}");
            }
        }
    }

    #[test]
    fn coop_matches_oracle_on_composite_goals() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(67);
        for _ in 0..25 {
            let game = crate::random::random_game(&mut rng, 5, 3);
            for goal in [
                GoalExpr::and(GoalExpr::First(1), GoalExpr::CoBuchi(2)),
                GoalExpr::Count(1, 2),
                GoalExpr::and(GoalExpr::Ev(1), GoalExpr::Ev(2)),
                GoalExpr::not(GoalExpr::Buchi(1)),
            ] {
                let coop = solve(&game, &goal, SolveMode::Cooperative).unwrap().region;
                let brute = crate::oracle::brute_winning_region(
                    &game,
                    &goal,
                    SolveMode::Cooperative,
                    crate::oracle::DEFAULT_BUDGET,
                )
                .unwrap();
                assert_eq!(coop, brute, "coop mismatch for {goal} on {game:?}");
            }
        }
    }

    #[test]
    fn coalition_coop_strategy_realizes_goal_with_cooperation() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(71);
        for _ in 0..40 {
            let game = crate::random::random_game(&mut rng, 6, 3);
            for goal in [GoalExpr::Buchi(1), GoalExpr::Ev(2), GoalExpr::Parity] {
                let r = solve(&game, &goal, SolveMode::Cooperative).unwrap();
                for &s in &r.region {
                    let found = crate::oracle::StrategySpace::new(&game, Player::Two)
                        .any(|tau| crate::oracle::val(&game, &goal, &r.strategy, &tau, s));
                    assert!(found, "coop strategy cannot realize {goal} from {}", game.name(s));
                }
            }
        }
    }
}
