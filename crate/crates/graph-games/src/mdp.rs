//! Win probabilities against a uniformly random adversary.
//!
//! Fixing Player 2 to the uniform distribution over successors turns the
//! game into a Markov decision process for Player 1. This module computes
//! the per-state maximal probability of satisfying a goal together with an
//! optimal positional strategy, and evaluates a given strategy exactly on
//! the induced Markov chain.
//!
//! Infinitary goals reduce to maximal reachability of accepting end
//! components; reachability and safety are solved directly. Values are exact
//! rationals by default (Gaussian elimination) with an optional value
//! iteration mode for approximate answers.

use std::collections::{BTreeMap, BTreeSet};

use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};

use crate::game::{Color, Game, Player, PositionalStrategy, StateId};
use crate::goal::GoalExpr;
use crate::solver::safe_region;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MdpError {
    #[error("stochastic values need a bare reach/safe/buchi/cobuchi/parity goal; {0} is unsupported")]
    CompositeGoal(String),
}

/// How values are computed: exact rational arithmetic or value iteration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ValueMode {
    Exact,
    Iterative { tolerance: f64 },
}

impl Default for ValueMode {
    fn default() -> ValueMode {
        ValueMode::Exact
    }
}

/// Per-state win probabilities, exact or approximate depending on the mode.
#[derive(Debug, Clone, PartialEq)]
pub enum ValueVector {
    Exact(Vec<BigRational>),
    Approx(Vec<f64>),
}

impl ValueVector {
    pub fn len(&self) -> usize {
        match self {
            ValueVector::Exact(v) => v.len(),
            ValueVector::Approx(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn to_f64(&self, s: StateId) -> f64 {
        match self {
            ValueVector::Exact(v) => v[s].to_f64().unwrap_or(f64::NAN),
            ValueVector::Approx(v) => v[s],
        }
    }

    /// Rendering used by the CLI: a fraction in exact mode, a float otherwise.
    pub fn render(&self, s: StateId) -> String {
        match self {
            ValueVector::Exact(v) => v[s].to_string(),
            ValueVector::Approx(v) => format!("{}", v[s]),
        }
    }
}

/// The goal classes with stochastic-value support.
enum Kind {
    Reach(Color),
    Safe(BTreeSet<Color>),
    Buchi(Color),
    CoBuchi(Color),
    Parity,
}

fn kind_of(goal: &GoalExpr) -> Result<Kind, MdpError> {
    match goal {
        GoalExpr::Ev(c) => Ok(Kind::Reach(*c)),
        GoalExpr::Safe(set) => Ok(Kind::Safe(set.clone())),
        GoalExpr::Buchi(c) => Ok(Kind::Buchi(*c)),
        GoalExpr::CoBuchi(c) => Ok(Kind::CoBuchi(*c)),
        GoalExpr::Parity => Ok(Kind::Parity),
        other => Err(MdpError::CompositeGoal(other.to_string())),
    }
}

/// Successors of `s` in the chain induced by `sigma`: the chosen edge at
/// Player-1 states, every edge at Player-2 states.
fn chain_succ(game: &Game, sigma: &PositionalStrategy, s: StateId) -> Vec<StateId> {
    match game.owner(s) {
        Player::One => vec![sigma.choice(s).expect("total strategy")],
        Player::Two => game.successors(s).to_vec(),
    }
}

/// Strongly connected components of the graph on `nodes` whose edges are
/// given by `succ` (targets outside `nodes` are ignored). Kosaraju with
/// explicit stacks; components come back sorted by lowest member.
fn components<F>(nodes: &BTreeSet<StateId>, succ: F) -> Vec<BTreeSet<StateId>>
where
    F: Fn(StateId) -> Vec<StateId>,
{
    let adj: BTreeMap<StateId, Vec<StateId>> = nodes
        .iter()
        .map(|&s| {
            let targets: Vec<StateId> = succ(s).into_iter().filter(|t| nodes.contains(t)).collect();
            (s, targets)
        })
        .collect();
    let mut order = Vec::new();
    let mut seen: BTreeSet<StateId> = BTreeSet::new();
    for &root in nodes {
        if !seen.insert(root) {
            continue;
        }
        let mut stack = vec![(root, 0usize)];
        while let Some((s, i)) = stack.pop() {
            let targets = &adj[&s];
            if i < targets.len() {
                stack.push((s, i + 1));
                let t = targets[i];
                if seen.insert(t) {
                    stack.push((t, 0));
                }
            } else {
                order.push(s);
            }
        }
    }
    let mut rev: BTreeMap<StateId, Vec<StateId>> = nodes.iter().map(|&s| (s, Vec::new())).collect();
    for (&s, targets) in &adj {
        for &t in targets {
            rev.get_mut(&t).unwrap().push(s);
        }
    }
    let mut out = Vec::new();
    let mut assigned: BTreeSet<StateId> = BTreeSet::new();
    for &root in order.iter().rev() {
        if assigned.contains(&root) {
            continue;
        }
        let mut comp = BTreeSet::from([root]);
        assigned.insert(root);
        let mut stack = vec![root];
        while let Some(s) = stack.pop() {
            for &t in &rev[&s] {
                if assigned.insert(t) {
                    comp.insert(t);
                    stack.push(t);
                }
            }
        }
        out.push(comp);
    }
    out.sort();
    out
}

/// Maximal end components of the MDP restricted to `sub`: maximal sets that
/// are strongly connected, where every Player-2 state keeps all of its
/// successors inside (the uniform adversary would otherwise escape) and
/// every Player-1 state keeps at least one.
pub fn maximal_end_components(game: &Game, sub: &BTreeSet<StateId>) -> Vec<BTreeSet<StateId>> {
    let mut out = Vec::new();
    let mut work: Vec<BTreeSet<StateId>> = vec![sub.clone()];
    while let Some(mut cand) = work.pop() {
        loop {
            let bad: Vec<StateId> = cand
                .iter()
                .copied()
                .filter(|&s| match game.owner(s) {
                    Player::Two => !game.successors(s).iter().all(|t| cand.contains(t)),
                    Player::One => !game.successors(s).iter().any(|t| cand.contains(t)),
                })
                .collect();
            if bad.is_empty() {
                break;
            }
            for s in bad {
                cand.remove(&s);
            }
        }
        if cand.is_empty() {
            continue;
        }
        let comps = components(&cand, |s| game.successors(s).to_vec());
        if comps.len() == 1 {
            // closed and strongly connected; keep if it carries a cycle
            let nontrivial = cand.len() > 1 || {
                let s = *cand.iter().next().unwrap();
                game.has_edge(s, s)
            };
            if nontrivial {
                out.push(cand);
            }
            continue;
        }
        work.extend(comps);
    }
    out.sort();
    out
}

fn ratio(n: u64, d: u64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Solves `a x = b` by Gaussian elimination. The caller guarantees a
/// nonsingular matrix (transient-state systems always are).
fn solve_linear(mut a: Vec<Vec<BigRational>>, mut b: Vec<BigRational>) -> Vec<BigRational> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| !a[r][col].is_zero())
            .expect("transient-state system is nonsingular");
        a.swap(col, pivot);
        b.swap(col, pivot);
        let p = a[col][col].clone();
        for c in col..n {
            a[col][c] = &a[col][c] / &p;
        }
        b[col] = &b[col] / &p;
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone();
            for c in col..n {
                a[r][c] = &a[r][c] - &f * &a[col][c];
            }
            b[r] = &b[r] - &f * &b[col];
        }
    }
    b
}

/// Absorption probabilities in the chain induced by `sigma`: states in
/// `good` are absorbing with value 1, states in `dead` absorbing with value
/// 0, everything else is transient or provably value 0.
fn absorption(
    game: &Game,
    sigma: &PositionalStrategy,
    good: &BTreeSet<StateId>,
    dead: &BTreeSet<StateId>,
    mode: ValueMode,
) -> ValueVector {
    let n = game.state_count();
    // states with a chain path to `good` that avoids `dead`
    let mut rev: Vec<Vec<StateId>> = vec![Vec::new(); n];
    for s in game.states() {
        if good.contains(&s) || dead.contains(&s) {
            continue;
        }
        for t in chain_succ(game, sigma, s) {
            rev[t].push(s);
        }
    }
    let mut alive: BTreeSet<StateId> = good.clone();
    let mut queue: Vec<StateId> = good.iter().copied().collect();
    while let Some(s) = queue.pop() {
        for &p in &rev[s] {
            if alive.insert(p) {
                queue.push(p);
            }
        }
    }
    let transient: Vec<StateId> = alive.difference(good).copied().collect();
    let index: BTreeMap<StateId, usize> = transient.iter().enumerate().map(|(i, &s)| (s, i)).collect();
    match mode {
        ValueMode::Exact => {
            let m = transient.len();
            let mut a = vec![vec![BigRational::zero(); m]; m];
            let mut b = vec![BigRational::zero(); m];
            for (i, &s) in transient.iter().enumerate() {
                a[i][i] = BigRational::one();
                let succ = chain_succ(game, sigma, s);
                let p = ratio(1, succ.len() as u64);
                for t in succ {
                    if good.contains(&t) {
                        b[i] = &b[i] + &p;
                    } else if let Some(&j) = index.get(&t) {
                        a[i][j] = &a[i][j] - &p;
                    }
                }
            }
            let x = solve_linear(a, b);
            let mut values = vec![BigRational::zero(); n];
            for &s in good {
                values[s] = BigRational::one();
            }
            for (i, &s) in transient.iter().enumerate() {
                values[s] = x[i].clone();
            }
            ValueVector::Exact(values)
        }
        ValueMode::Iterative { tolerance } => {
            let mut values = vec![0.0f64; n];
            for &s in good {
                values[s] = 1.0;
            }
            loop {
                let mut residual = 0.0f64;
                for &s in &transient {
                    let succ = chain_succ(game, sigma, s);
                    let p = 1.0 / succ.len() as f64;
                    let next: f64 = succ.iter().map(|&t| p * values[t]).sum();
                    residual = residual.max((next - values[s]).abs());
                    values[s] = next;
                }
                // the per-sweep residual undershoots the true error, so stop
                // well below the requested tolerance
                if residual < tolerance / 1024.0 {
                    break;
                }
            }
            ValueVector::Approx(values)
        }
    }
}

/// Maximal probability of reaching `good` while avoiding `dead`, over all
/// Player-1 strategies. Exact mode runs policy iteration with exact chain
/// evaluation; iterative mode runs value iteration from the indicator of
/// `good`. Both converge to the least fixed point, which is the value.
fn max_reach(
    game: &Game,
    good: &BTreeSet<StateId>,
    dead: &BTreeSet<StateId>,
    mode: ValueMode,
) -> ValueVector {
    match mode {
        ValueMode::Exact => {
            let mut sigma = initial_policy(game, good, dead);
            loop {
                let values = match absorption(game, &sigma, good, dead, ValueMode::Exact) {
                    ValueVector::Exact(v) => v,
                    ValueVector::Approx(_) => unreachable!(),
                };
                let mut improved = false;
                for s in game.states_of(Player::One) {
                    if good.contains(&s) || dead.contains(&s) {
                        continue;
                    }
                    let best = game
                        .successors(s)
                        .iter()
                        .copied()
                        .max_by(|&a, &b| values[a].cmp(&values[b]).then(b.cmp(&a)))
                        .unwrap();
                    if values[best] > values[s] {
                        sigma.set(s, best);
                        improved = true;
                    }
                }
                if !improved {
                    // fixed point of the Bellman operator: optimal
                    return ValueVector::Exact(values);
                }
            }
        }
        ValueMode::Iterative { tolerance } => {
            let n = game.state_count();
            let mut values = vec![0.0f64; n];
            for &s in good {
                values[s] = 1.0;
            }
            loop {
                let mut residual = 0.0f64;
                for s in game.states() {
                    if good.contains(&s) || dead.contains(&s) {
                        continue;
                    }
                    let succ = game.successors(s);
                    let next = match game.owner(s) {
                        Player::One => succ
                            .iter()
                            .map(|&t| values[t])
                            .fold(0.0f64, f64::max),
                        Player::Two => {
                            succ.iter().map(|&t| values[t]).sum::<f64>() / succ.len() as f64
                        }
                    };
                    residual = residual.max((next - values[s]).abs());
                    values[s] = next;
                }
                // same margin as the chain evaluation above
                if residual < tolerance / 1024.0 {
                    return ValueVector::Approx(values);
                }
            }
        }
    }
}

/// Starting policy for policy iteration: head toward `good` along shortest
/// graph distances so that the first evaluation is already informative.
fn initial_policy(game: &Game, good: &BTreeSet<StateId>, dead: &BTreeSet<StateId>) -> PositionalStrategy {
    let dist = bfs_distances(game, good, dead, |_, _| true);
    let mut sigma = PositionalStrategy::lowest(game, Player::One);
    for s in game.states_of(Player::One) {
        let best = game
            .successors(s)
            .iter()
            .copied()
            .min_by_key(|&t| (dist.get(&t).copied().unwrap_or(usize::MAX), t))
            .unwrap();
        sigma.set(s, best);
    }
    sigma
}

/// Backward BFS distances to `good` through states outside `dead`; the edge
/// filter restricts which Player-1 edges count.
fn bfs_distances<F>(
    game: &Game,
    good: &BTreeSet<StateId>,
    dead: &BTreeSet<StateId>,
    p1_edge: F,
) -> BTreeMap<StateId, usize>
where
    F: Fn(StateId, StateId) -> bool,
{
    let mut rev: Vec<Vec<StateId>> = vec![Vec::new(); game.state_count()];
    for s in game.states() {
        if good.contains(&s) || dead.contains(&s) {
            continue;
        }
        for &t in game.successors(s) {
            if game.owner(s) == Player::Two || p1_edge(s, t) {
                rev[t].push(s);
            }
        }
    }
    let mut dist: BTreeMap<StateId, usize> = good.iter().map(|&s| (s, 0)).collect();
    let mut frontier: Vec<StateId> = good.iter().copied().collect();
    let mut d = 0;
    while !frontier.is_empty() {
        d += 1;
        let mut next = Vec::new();
        for &s in &frontier {
            for &p in &rev[s] {
                if !dist.contains_key(&p) {
                    dist.insert(p, d);
                    next.push(p);
                }
            }
        }
        frontier = next;
    }
    dist
}

/// Whether the value at `s` counts as positive under the mode's tolerance.
fn positive(values: &ValueVector, s: StateId, tol: f64) -> bool {
    match values {
        ValueVector::Exact(v) => v[s].is_positive(),
        ValueVector::Approx(v) => v[s] > tol,
    }
}

/// Whether `v[t]` attains the maximum successor value at `s`.
fn attains_max(values: &ValueVector, s: StateId, t: StateId, game: &Game, tol: f64) -> bool {
    match values {
        ValueVector::Exact(v) => {
            let best = game.successors(s).iter().map(|&u| &v[u]).max().unwrap();
            &v[t] == best
        }
        ValueVector::Approx(v) => {
            let best = game
                .successors(s)
                .iter()
                .map(|&u| v[u])
                .fold(f64::NEG_INFINITY, f64::max);
            v[t] >= best - tol
        }
    }
}

/// Positional strategy attaining the optimal values: pick value-maximizing
/// successors, breaking ties toward shorter distance to `good` within the
/// value-optimal subgraph (a value-preserving choice could otherwise circle
/// forever), then by state index.
fn extract_strategy(
    game: &Game,
    values: &ValueVector,
    good: &BTreeSet<StateId>,
    dead: &BTreeSet<StateId>,
    tol: f64,
) -> PositionalStrategy {
    let dist = bfs_distances(game, good, dead, |s, t| attains_max(values, s, t, game, tol));
    let mut sigma = PositionalStrategy::lowest(game, Player::One);
    for s in game.states_of(Player::One) {
        if good.contains(&s) || dead.contains(&s) || !positive(values, s, tol) {
            continue;
        }
        let best = game
            .successors(s)
            .iter()
            .copied()
            .filter(|&t| attains_max(values, s, t, game, tol))
            .min_by_key(|&t| (dist.get(&t).copied().unwrap_or(usize::MAX), t))
            .unwrap();
        sigma.set(s, best);
    }
    sigma
}

/// Moves steering every Player-1 state of the end component `mec` toward
/// `target` along in-component shortest paths. Against the uniform
/// adversary the play then visits `target` infinitely often almost surely.
fn steering(game: &Game, mec: &BTreeSet<StateId>, target: StateId) -> BTreeMap<StateId, StateId> {
    let mut rev: BTreeMap<StateId, Vec<StateId>> = mec.iter().map(|&s| (s, Vec::new())).collect();
    for &s in mec {
        for &t in game.successors(s) {
            if mec.contains(&t) {
                rev.get_mut(&t).unwrap().push(s);
            }
        }
    }
    let mut dist: BTreeMap<StateId, usize> = BTreeMap::from([(target, 0)]);
    let mut frontier = vec![target];
    let mut d = 0;
    while !frontier.is_empty() {
        d += 1;
        let mut next = Vec::new();
        for &s in &frontier {
            for &p in &rev[&s] {
                if !dist.contains_key(&p) {
                    dist.insert(p, d);
                    next.push(p);
                }
            }
        }
        frontier = next;
    }
    let mut moves = BTreeMap::new();
    for &s in mec {
        if game.owner(s) != Player::One {
            continue;
        }
        let best = game
            .successors(s)
            .iter()
            .copied()
            .filter(|t| mec.contains(t))
            .min_by_key(|&t| (dist[&t], t))
            .unwrap();
        moves.insert(s, best);
    }
    moves
}

/// Accepting states and the in-component moves that win almost surely from
/// them, for the prefix-independent goal kinds.
fn accepting(game: &Game, kind: &Kind) -> (BTreeSet<StateId>, BTreeMap<StateId, StateId>) {
    let all: BTreeSet<StateId> = game.states().collect();
    let mut good = BTreeSet::new();
    let mut moves = BTreeMap::new();
    let mut adopt = |mec: &BTreeSet<StateId>, target: StateId, good: &mut BTreeSet<StateId>| {
        let steer = steering(game, mec, target);
        for &s in mec {
            if good.insert(s) {
                if let Some(&t) = steer.get(&s) {
                    moves.insert(s, t);
                }
            }
        }
    };
    match kind {
        Kind::Buchi(c) => {
            for mec in maximal_end_components(game, &all) {
                if let Some(&target) = mec.iter().find(|&&s| game.color(s) == *c) {
                    adopt(&mec, target, &mut good);
                }
            }
        }
        Kind::CoBuchi(c) => {
            let sub: BTreeSet<StateId> = game.states().filter(|&s| game.color(s) == *c).collect();
            for mec in maximal_end_components(game, &sub) {
                let target = *mec.iter().next().unwrap();
                adopt(&mec, target, &mut good);
            }
        }
        Kind::Parity => {
            // ascending priorities: nested components keep their smaller
            // even priority, which still wins
            for d in game.color_universe() {
                if d % 2 != 0 {
                    continue;
                }
                let sub: BTreeSet<StateId> = game.states().filter(|&s| game.color(s) <= d).collect();
                for mec in maximal_end_components(game, &sub) {
                    if let Some(&target) = mec.iter().find(|&&s| game.color(s) == d) {
                        adopt(&mec, target, &mut good);
                    }
                }
            }
        }
        Kind::Reach(_) | Kind::Safe(_) => unreachable!("handled directly"),
    }
    (good, moves)
}

/// Target, forbidden set and in-target moves for a goal kind: satisfaction
/// reduces to reaching `good` while avoiding `dead`, and `inner` wins from
/// inside `good`.
fn reduction(
    game: &Game,
    kind: &Kind,
) -> (BTreeSet<StateId>, BTreeSet<StateId>, BTreeMap<StateId, StateId>) {
    match kind {
        Kind::Reach(c) => {
            let good = game.states().filter(|&s| game.color(s) == *c).collect();
            (good, BTreeSet::new(), BTreeMap::new())
        }
        Kind::Safe(set) => {
            let allowed: BTreeSet<StateId> =
                game.states().filter(|&s| set.contains(&game.color(s))).collect();
            let all: BTreeSet<StateId> = game.states().collect();
            let dead: BTreeSet<StateId> = all.difference(&allowed).copied().collect();
            let rs = safe_region(game, Player::One, &allowed, &all);
            (rs.region, dead, rs.moves)
        }
        infinitary => {
            let (good, inner) = accepting(game, infinitary);
            (good, BTreeSet::new(), inner)
        }
    }
}

/// Maximal probability of satisfying `goal` from every state against the
/// uniformly random adversary, together with a positional strategy
/// attaining it everywhere.
pub fn usg_value(
    game: &Game,
    goal: &GoalExpr,
    mode: ValueMode,
) -> Result<(ValueVector, PositionalStrategy), MdpError> {
    let kind = kind_of(goal)?;
    let (good, dead, inner) = reduction(game, &kind);
    let values = max_reach(game, &good, &dead, mode);
    let tol = match mode {
        ValueMode::Exact => 0.0,
        ValueMode::Iterative { tolerance } => tolerance,
    };
    let mut sigma = extract_strategy(game, &values, &good, &dead, tol);
    for (&s, &t) in &inner {
        if game.owner(s) == Player::One {
            sigma.set(s, t);
        }
    }
    Ok((values, sigma))
}

/// Probability of satisfying `goal` from every state in the Markov chain
/// induced by `sigma` under the uniformly random adversary.
pub fn usg_evaluate(
    game: &Game,
    goal: &GoalExpr,
    sigma: &PositionalStrategy,
    mode: ValueMode,
) -> Result<ValueVector, MdpError> {
    let kind = kind_of(goal)?;
    let all: BTreeSet<StateId> = game.states().collect();
    let (good, dead) = match &kind {
        Kind::Reach(c) => {
            let good: BTreeSet<StateId> =
                game.states().filter(|&s| game.color(s) == *c).collect();
            (good, BTreeSet::new())
        }
        Kind::Safe(set) => {
            let inside: BTreeSet<StateId> =
                game.states().filter(|&s| set.contains(&game.color(s))).collect();
            let dead: BTreeSet<StateId> = all.difference(&inside).copied().collect();
            // bottom components of the truncated chain never leave the set
            let comps = components(&inside, |s| chain_succ(game, sigma, s));
            let mut good = BTreeSet::new();
            for comp in comps {
                let bottom = comp
                    .iter()
                    .all(|&s| chain_succ(game, sigma, s).iter().all(|t| comp.contains(t)));
                if bottom {
                    good.extend(comp);
                }
            }
            (good, dead)
        }
        infinitary => {
            let comps = components(&all, |s| chain_succ(game, sigma, s));
            let mut good = BTreeSet::new();
            for comp in comps {
                let bottom = comp
                    .iter()
                    .all(|&s| chain_succ(game, sigma, s).iter().all(|t| comp.contains(t)));
                if !bottom {
                    continue;
                }
                let wins = match infinitary {
                    Kind::Buchi(c) => comp.iter().any(|&s| game.color(s) == *c),
                    Kind::CoBuchi(c) => comp.iter().all(|&s| game.color(s) == *c),
                    Kind::Parity => comp.iter().map(|&s| game.color(s)).max().unwrap() % 2 == 0,
                    Kind::Reach(_) | Kind::Safe(_) => unreachable!(),
                };
                if wins {
                    good.extend(comp);
                }
            }
            (good, BTreeSet::new())
        }
    };
    Ok(absorption(game, sigma, &good, &dead, mode))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::oracle::StrategySpace;
    use crate::random::random_game;
    use crate::solver::{solve, SolveMode};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const TOL: ValueMode = ValueMode::Iterative { tolerance: 1e-9 };

    fn exact(values: &ValueVector) -> &Vec<BigRational> {
        match values {
            ValueVector::Exact(v) => v,
            ValueVector::Approx(_) => panic!("expected exact values"),
        }
    }

    fn named(game: &Game, values: &ValueVector, name: &str) -> BigRational {
        exact(values)[game.state_by_name(name).unwrap()].clone()
    }

    fn sigma_by_name(game: &Game, moves: &[(&str, &str)]) -> PositionalStrategy {
        let pairs: Vec<(StateId, StateId)> = moves
            .iter()
            .map(|(a, b)| {
                (
                    game.state_by_name(a).unwrap(),
                    game.state_by_name(b).unwrap(),
                )
            })
            .collect();
        PositionalStrategy::new(game, Player::One, &pairs).unwrap()
    }

    #[test]
    fn lottery_value_and_optimal_choice() {
        let (game, goal) = fixtures::lottery();
        let (values, sigma) = usg_value(&game, &goal, ValueMode::Exact).unwrap();
        assert_eq!(named(&game, &values, "s0"), ratio(1, 2));
        assert_eq!(named(&game, &values, "s1"), ratio(1, 2));
        assert_eq!(named(&game, &values, "s2"), ratio(1, 3));
        assert_eq!(named(&game, &values, "s4"), BigRational::one());
        assert_eq!(named(&game, &values, "s3"), BigRational::zero());
        let s0 = game.state_by_name("s0").unwrap();
        let s1 = game.state_by_name("s1").unwrap();
        assert_eq!(sigma.choice(s0), Some(s1));
    }

    #[test]
    fn lottery_evaluate_detour_choice() {
        let (game, goal) = fixtures::lottery();
        let sigma = sigma_by_name(&game, &[("s0", "s2")]);
        let values = usg_evaluate(&game, &goal, &sigma, ValueMode::Exact).unwrap();
        assert_eq!(named(&game, &values, "s0"), ratio(1, 3));
        // the absorbing target keeps value 1 under every strategy
        assert_eq!(named(&game, &values, "s4"), BigRational::one());
    }

    #[test]
    fn direct_or_detour_both_choices_optimal() {
        let (game, goal) = fixtures::direct_or_detour();
        let (values, _) = usg_value(&game, &goal, ValueMode::Exact).unwrap();
        for s in game.states() {
            assert_eq!(exact(&values)[s], BigRational::one());
        }
        for target in ["s1", "s2"] {
            let sigma = sigma_by_name(&game, &[("s0", target)]);
            let v = usg_evaluate(&game, &goal, &sigma, ValueMode::Exact).unwrap();
            assert_eq!(named(&game, &v, "s0"), BigRational::one());
        }
    }

    #[test]
    fn persist_buchi_value_is_zero_everywhere() {
        let (game, goal) = fixtures::persist();
        let (values, _) = usg_value(&game, &goal, ValueMode::Exact).unwrap();
        for s in game.states() {
            assert_eq!(exact(&values)[s], BigRational::zero());
        }
        let sigma = sigma_by_name(&game, &[("s0", "s1")]);
        let v = usg_evaluate(&game, &goal, &sigma, ValueMode::Exact).unwrap();
        assert_eq!(named(&game, &v, "s0"), BigRational::zero());
    }

    #[test]
    fn composite_goal_is_rejected() {
        let (game, goal) = fixtures::win_not_strong();
        let err = usg_value(&game, &goal, ValueMode::Exact).unwrap_err();
        assert!(matches!(err, MdpError::CompositeGoal(_)));
        let sigma = PositionalStrategy::lowest(&game, Player::One);
        assert!(usg_evaluate(&game, &goal, &sigma, ValueMode::Exact).is_err());
        assert!(usg_value(&game, &GoalExpr::Count(1, 2), ValueMode::Exact).is_err());
        assert!(usg_value(&game, &GoalExpr::First(1), ValueMode::Exact).is_err());
    }

    #[test]
    fn lottery_end_components_are_the_sinks() {
        let (game, _) = fixtures::lottery();
        let all: BTreeSet<StateId> = game.states().collect();
        let mecs = maximal_end_components(&game, &all);
        let sinks: Vec<BTreeSet<StateId>> = ["s3", "s4", "s5", "s6"]
            .iter()
            .map(|n| BTreeSet::from([game.state_by_name(n).unwrap()]))
            .collect();
        assert_eq!(mecs, sinks);
    }

    #[test]
    fn end_components_are_closed_disjoint_and_connected() {
        let mut rng = ChaCha8Rng::seed_from_u64(501);
        for _ in 0..40 {
            let game = random_game(&mut rng, 8, 3);
            let all: BTreeSet<StateId> = game.states().collect();
            let mecs = maximal_end_components(&game, &all);
            let mut seen: BTreeSet<StateId> = BTreeSet::new();
            for mec in &mecs {
                for &s in mec {
                    assert!(seen.insert(s), "end components must be disjoint");
                    match game.owner(s) {
                        Player::Two => {
                            assert!(game.successors(s).iter().all(|t| mec.contains(t)))
                        }
                        Player::One => {
                            assert!(game.successors(s).iter().any(|t| mec.contains(t)))
                        }
                    }
                }
                let comps = components(mec, |s| game.successors(s).to_vec());
                assert_eq!(comps.len(), 1, "an end component is strongly connected");
            }
        }
    }

    fn supported_goals() -> Vec<GoalExpr> {
        vec![
            GoalExpr::reach(1),
            GoalExpr::Safe(BTreeSet::from([0, 1])),
            GoalExpr::Buchi(1),
            GoalExpr::CoBuchi(0),
            GoalExpr::Parity,
        ]
    }

    #[test]
    fn optimal_strategy_attains_the_value_exactly() {
        let mut rng = ChaCha8Rng::seed_from_u64(502);
        for _ in 0..30 {
            let game = random_game(&mut rng, 7, 3);
            for goal in supported_goals() {
                let (values, sigma) = usg_value(&game, &goal, ValueMode::Exact).unwrap();
                let replay = usg_evaluate(&game, &goal, &sigma, ValueMode::Exact).unwrap();
                assert_eq!(values, replay, "sigma* must attain the value for {goal}");
            }
        }
    }

    #[test]
    fn value_dominates_every_positional_strategy() {
        let mut rng = ChaCha8Rng::seed_from_u64(503);
        for _ in 0..12 {
            let game = random_game(&mut rng, 6, 3);
            for goal in supported_goals() {
                let (values, _) = usg_value(&game, &goal, ValueMode::Exact).unwrap();
                let mut best = vec![BigRational::zero(); game.state_count()];
                for sigma in StrategySpace::new(&game, Player::One) {
                    let v = usg_evaluate(&game, &goal, &sigma, ValueMode::Exact).unwrap();
                    for s in game.states() {
                        assert!(
                            exact(&v)[s] <= exact(&values)[s],
                            "a strategy beat the optimum for {goal}"
                        );
                        if exact(&v)[s] > best[s] {
                            best[s] = exact(&v)[s].clone();
                        }
                    }
                }
                // a positional optimum exists, so the enumeration reaches it
                assert_eq!(best, *exact(&values), "enumeration oracle disagrees for {goal}");
            }
        }
    }

    #[test]
    fn exact_and_iterative_agree_on_fixtures() {
        for (name, game, goal) in fixtures::all_valid() {
            let supported = usg_value(&game, &goal, ValueMode::Exact);
            let Ok((values, sigma)) = supported else {
                continue;
            };
            let (approx, _) = usg_value(&game, &goal, TOL).unwrap();
            for s in game.states() {
                assert!(
                    (values.to_f64(s) - approx.to_f64(s)).abs() < 1e-7,
                    "mode mismatch at {name}/{s}"
                );
            }
            let ev = usg_evaluate(&game, &goal, &sigma, ValueMode::Exact).unwrap();
            let ev_approx = usg_evaluate(&game, &goal, &sigma, TOL).unwrap();
            for s in game.states() {
                assert!((ev.to_f64(s) - ev_approx.to_f64(s)).abs() < 1e-7);
            }
        }
    }

    #[test]
    fn iterative_strategy_is_near_optimal() {
        let mut rng = ChaCha8Rng::seed_from_u64(504);
        for _ in 0..20 {
            let game = random_game(&mut rng, 7, 3);
            for goal in supported_goals() {
                let (values, _) = usg_value(&game, &goal, ValueMode::Exact).unwrap();
                let (_, sigma) = usg_value(&game, &goal, TOL).unwrap();
                let replay = usg_evaluate(&game, &goal, &sigma, ValueMode::Exact).unwrap();
                for s in game.states() {
                    assert!(
                        (values.to_f64(s) - replay.to_f64(s)).abs() < 1e-6,
                        "iterative strategy lost value for {goal}"
                    );
                }
            }
        }
    }

    #[test]
    fn adversarial_winners_have_value_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(505);
        for _ in 0..25 {
            let game = random_game(&mut rng, 7, 3);
            for goal in supported_goals() {
                let solved = solve(&game, &goal, SolveMode::Adversarial).unwrap();
                let (values, _) = usg_value(&game, &goal, ValueMode::Exact).unwrap();
                for &s in &solved.region {
                    assert_eq!(
                        exact(&values)[s],
                        BigRational::one(),
                        "sure winner below value 1 for {goal}"
                    );
                }
            }
        }
    }

    #[test]
    fn direct_or_detour_separates_value_one_from_sure_winning() {
        // both choices at s0 have value 1, yet the adversary can pin the
        // play at s1 forever, so s0 only wins surely via the direct edge
        let (game, goal) = fixtures::direct_or_detour();
        let (values, _) = usg_value(&game, &goal, ValueMode::Exact).unwrap();
        let s1 = game.state_by_name("s1").unwrap();
        assert_eq!(exact(&values)[s1], BigRational::one());
        let solved = solve(&game, &goal, SolveMode::Adversarial).unwrap();
        assert!(!solved.region.contains(&s1));
    }

    #[test]
    fn safety_value_of_stay_low() {
        let (game, goal) = fixtures::stay_low();
        let (values, sigma) = usg_value(&game, &goal, ValueMode::Exact).unwrap();
        let replay = usg_evaluate(&game, &goal, &sigma, ValueMode::Exact).unwrap();
        assert_eq!(values, replay);
        for s in game.states() {
            let v = &exact(&values)[s];
            assert!(*v >= BigRational::zero() && *v <= BigRational::one());
        }
    }

    #[test]
    fn render_formats_fractions_and_floats() {
        let (game, goal) = fixtures::lottery();
        let (values, _) = usg_value(&game, &goal, ValueMode::Exact).unwrap();
        let s0 = game.state_by_name("s0").unwrap();
        let s4 = game.state_by_name("s4").unwrap();
        assert_eq!(values.render(s0), "1/2");
        assert_eq!(values.render(s4), "1");
        let (approx, _) = usg_value(&game, &goal, TOL).unwrap();
        assert!(approx.render(s0).starts_with("0.49999") || approx.render(s0) == "0.5");
    }
}
