//! Winning-criteria checks and admissible-strategy synthesis.
//!
//! Every criterion quantifies over histories; the monitor product turns
//! those quantifications into questions about product configurations, so no
//! path enumeration ever happens. A configuration is *winning* when Player 1
//! can force the goal from it, and *cooperatively winning* when some
//! continuation satisfies the goal; the criteria compare those sets against
//! what the checked strategy still allows.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::coop::{coop_winning, cooperative_solve, CoopResult};
use crate::game::{Color, Game, Lasso, Player, PositionalStrategy, StateId};
use crate::goal::{classify, GoalExpr, SolverClass, Three};
use crate::product::{Expansion, MonitorProduct};
use crate::solver::{cobuchi_region, parity_regions, solve, total_strategy, SolveMode};

/// The path-quantified criteria plus admissibility.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Criterion {
    /// Wins from every winning state.
    Winning,
    /// Wins from every consistent winning history.
    StronglyWinning,
    /// Wins from every winning history.
    SubgamePerfect,
    /// Keeps a satisfying play available from every cooperatively winning
    /// state.
    CWinning,
    /// ... from every consistent cooperatively winning history.
    CsWinning,
    /// ... from every cooperatively winning history.
    CPerfect,
    /// Not dominated by any other strategy; equivalent to strongly winning
    /// plus cs-winning.
    Admissible,
}

impl Criterion {
    pub const ALL: [Criterion; 7] = [
        Criterion::Winning,
        Criterion::StronglyWinning,
        Criterion::SubgamePerfect,
        Criterion::CWinning,
        Criterion::CsWinning,
        Criterion::CPerfect,
        Criterion::Admissible,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Criterion::Winning => "winning",
            Criterion::StronglyWinning => "strongly-winning",
            Criterion::SubgamePerfect => "subgame-perfect",
            Criterion::CWinning => "c-winning",
            Criterion::CsWinning => "cs-winning",
            Criterion::CPerfect => "c-perfect",
            Criterion::Admissible => "admissible",
        }
    }

    pub fn from_name(name: &str) -> Option<Criterion> {
        Criterion::ALL.into_iter().find(|c| c.name() == name)
    }
}

/// A violating continuation: an ultimately periodic play starting at the
/// last state of the witness path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContinuationLasso {
    pub prefix: Vec<String>,
    pub cycle: Vec<String>,
}

/// Evidence for a `fails` verdict, in original-game state names.
///
/// The finite `path` reaches the offending history; for the universally
/// quantified criteria a `continuation` shows a consistent play from there
/// that violates the goal (replay `path` minus its last state, then the
/// continuation, through `eval_lasso`). Existential criteria have no finite
/// disproof, so they carry the path only.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FailureWitness {
    pub path: Vec<String>,
    pub continuation: Option<ContinuationLasso>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    /// `vacuous` marks an empty quantification domain.
    Holds { vacuous: bool },
    Fails { witness: FailureWitness },
    Unsupported { reason: String },
}

impl Verdict {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds { .. })
    }
}

/// Per-criterion verdicts for one strategy.
#[derive(Debug, Clone)]
pub struct CriterionReport {
    pub verdicts: BTreeMap<Criterion, Verdict>,
}

impl CriterionReport {
    pub fn verdict(&self, c: Criterion) -> &Verdict {
        &self.verdicts[&c]
    }
}

/// What to check: a game, a goal, and a total Player-1 strategy.
///
/// Memory strategies are passed as positional strategies on a Moore
/// expansion of the game; `entries` then lists the expansion's start states
/// and `original` maps expansion states back to the game they came from for
/// witness reporting.
pub struct CheckInput<'a> {
    pub game: &'a Game,
    pub goal: &'a GoalExpr,
    pub sigma: &'a PositionalStrategy,
    pub entries: Vec<StateId>,
    pub original: Option<(&'a Game, &'a [StateId])>,
}

impl<'a> CheckInput<'a> {
    pub fn plain(game: &'a Game, goal: &'a GoalExpr, sigma: &'a PositionalStrategy) -> CheckInput<'a> {
        CheckInput {
            game,
            goal,
            sigma,
            entries: game.states().collect(),
            original: None,
        }
    }

    pub fn expanded(
        expansion: &'a Expansion,
        original: &'a Game,
        goal: &'a GoalExpr,
        sigma: &'a PositionalStrategy,
    ) -> CheckInput<'a> {
        CheckInput {
            game: &expansion.game,
            goal,
            sigma,
            entries: expansion.entries.clone(),
            original: Some((original, &expansion.project)),
        }
    }

    fn state_name(&self, s: StateId) -> String {
        match self.original {
            Some((og, project)) => og.name(project[s]).to_string(),
            None => self.game.name(s).to_string(),
        }
    }
}

fn contains_first(goal: &GoalExpr) -> bool {
    match goal {
        GoalExpr::First(_) => true,
        GoalExpr::And(a, b) | GoalExpr::Or(a, b) => contains_first(a) || contains_first(b),
        GoalExpr::Not(a) => contains_first(a),
        _ => false,
    }
}

fn subst_first(goal: &GoalExpr, f: Color) -> GoalExpr {
    match goal {
        GoalExpr::First(c) => {
            if *c == f {
                GoalExpr::True
            } else {
                GoalExpr::False
            }
        }
        GoalExpr::And(a, b) => GoalExpr::and(subst_first(a, f), subst_first(b, f)),
        GoalExpr::Or(a, b) => GoalExpr::or(subst_first(a, f), subst_first(b, f)),
        GoalExpr::Not(a) => GoalExpr::not(subst_first(a, f)),
        other => other.clone(),
    }
}

fn subst_atom(goal: &GoalExpr, atom: &GoalExpr, value: bool) -> GoalExpr {
    if goal == atom {
        return if value { GoalExpr::True } else { GoalExpr::False };
    }
    match goal {
        GoalExpr::And(a, b) => GoalExpr::and(subst_atom(a, atom, value), subst_atom(b, atom, value)),
        GoalExpr::Or(a, b) => GoalExpr::or(subst_atom(a, atom, value), subst_atom(b, atom, value)),
        GoalExpr::Not(a) => GoalExpr::not(subst_atom(a, atom, value)),
        other => other.clone(),
    }
}

fn infinitary_atoms(goal: &GoalExpr, out: &mut BTreeSet<GoalExpr>) {
    match goal {
        GoalExpr::Buchi(_) | GoalExpr::CoBuchi(_) | GoalExpr::Parity => {
            out.insert(goal.clone());
        }
        GoalExpr::And(a, b) | GoalExpr::Or(a, b) => {
            infinitary_atoms(a, out);
            infinitary_atoms(b, out);
        }
        GoalExpr::Not(a) => infinitary_atoms(a, out),
        _ => {}
    }
}

/// Truth of a formula without infinitary atoms at one configuration,
/// reading the current color as part of the prefix. All these predicates
/// stabilize along a play, so their limit is the play's verdict.
fn eval_finitary(goal: &GoalExpr, p: &MonitorProduct, cfg: StateId) -> bool {
    let mem = p.memory(cfg);
    let col = p.game().color(cfg);
    let mon = p.monitor();
    match goal {
        GoalExpr::True => true,
        GoalExpr::False => false,
        GoalExpr::Ev(c) => mon.ev_seen(mem, *c) || col == *c,
        GoalExpr::Count(c, k) => mon.count_seen(mem, *c, *k) + u32::from(col == *c) >= *k,
        GoalExpr::Safe(set) => !mon.safe_violated(mem, set) && set.contains(&col),
        GoalExpr::And(a, b) => eval_finitary(a, p, cfg) && eval_finitary(b, p, cfg),
        GoalExpr::Or(a, b) => eval_finitary(a, p, cfg) || eval_finitary(b, p, cfg),
        GoalExpr::Not(a) => !eval_finitary(a, p, cfg),
        GoalExpr::First(_) | GoalExpr::Buchi(_) | GoalExpr::CoBuchi(_) | GoalExpr::Parity => {
            unreachable!("substituted away before finitary evaluation")
        }
    }
}

/// Winning configurations of a monitor product plus Player-1 moves.
pub(crate) struct ConfigAnalysis {
    pub region: BTreeSet<StateId>,
    pub moves: BTreeMap<StateId, StateId>,
}

/// Adversarially winning configurations of the product.
///
/// Configurations are grouped by the play's first color (invariant along
/// any play once a `first` tracker exists). Within a group the goal reduces
/// to a boolean combination of stabilizing prefix predicates and at most
/// one infinitary atom: zero atoms become a "stabilize inside the true
/// set" coBüchi condition, one atom becomes a three-priority (or native
/// parity) game via case split on the atom.
pub(crate) fn winning_configs(p: &MonitorProduct) -> Result<ConfigAnalysis, String> {
    let pg = p.game();
    let goal = p.monitor().goal().clone();
    let mut groups: BTreeMap<Option<Color>, BTreeSet<StateId>> = BTreeMap::new();
    if contains_first(&goal) {
        for cfg in pg.states() {
            groups
                .entry(Some(p.first_color(pg, cfg)))
                .or_default()
                .insert(cfg);
        }
    } else {
        groups.insert(None, pg.states().collect());
    }

    let mut region = BTreeSet::new();
    let mut moves = BTreeMap::new();
    for (f, domain) in &groups {
        let phi = match f {
            Some(f) => subst_first(&goal, *f).simplify(),
            None => goal.clone(),
        };
        let mut atoms = BTreeSet::new();
        infinitary_atoms(&phi, &mut atoms);
        if atoms.len() > 1 {
            return Err(format!(
                "goal mixes {} independent infinitary conditions; only one is supported",
                atoms.len()
            ));
        }
        if let Some(atom) = atoms.first() {
            let psi1 = subst_atom(&phi, atom, true).simplify();
            let psi0 = subst_atom(&phi, atom, false).simplify();
            let mut priority = vec![0; pg.state_count()];
            for &cfg in domain {
                let v1 = eval_finitary(&psi1, p, cfg);
                let v0 = eval_finitary(&psi0, p, cfg);
                let col = pg.color(cfg);
                priority[cfg] = match atom {
                    // win iff (GF c and v1) or (FG not-c and v0)
                    GoalExpr::Buchi(c) => {
                        let b = col == *c;
                        match (v1, v0) {
                            (true, true) => 2,
                            (true, false) => if b { 2 } else { 1 },
                            (false, true) => if b { 3 } else { 2 },
                            (false, false) => if b { 3 } else { 1 },
                        }
                    }
                    // win iff (FG c and v1) or (GF not-c and v0): the
                    // Buchi table over the atom "not-c infinitely often"
                    GoalExpr::CoBuchi(c) => {
                        let b = col != *c;
                        match (v0, v1) {
                            (true, true) => 2,
                            (true, false) => if b { 2 } else { 1 },
                            (false, true) => if b { 3 } else { 2 },
                            (false, false) => if b { 3 } else { 1 },
                        }
                    }
                    // win iff parity agrees with the stabilized verdict pair
                    GoalExpr::Parity => match (v1, v0) {
                        (true, true) => 0,
                        (false, false) => 1,
                        (true, false) => col,
                        (false, true) => col + 1,
                    },
                    _ => unreachable!("only infinitary atoms are collected"),
                };
            }
            let pr = parity_regions(pg, &priority, domain);
            region.extend(pr.region[0].iter().copied());
            moves.extend(pr.moves[0].clone());
        } else {
            let verdict: BTreeSet<StateId> = domain
                .iter()
                .copied()
                .filter(|&cfg| eval_finitary(&phi, p, cfg))
                .collect();
            let rs = cobuchi_region(pg, Player::One, &verdict, domain);
            region.extend(rs.region.iter().copied());
            moves.extend(rs.moves);
        }
    }
    Ok(ConfigAnalysis { region, moves })
}

/// Layered multi-source BFS; returns the path to the target with the
/// smallest (distance, state id).
fn bfs_path(graph: &Game, sources: &[StateId], targets: &BTreeSet<StateId>) -> Option<Vec<StateId>> {
    let mut parent: BTreeMap<StateId, Option<StateId>> = BTreeMap::new();
    let mut dist: BTreeMap<StateId, usize> = BTreeMap::new();
    let mut queue = VecDeque::new();
    for &s in sources {
        if !parent.contains_key(&s) {
            parent.insert(s, None);
            dist.insert(s, 0);
            queue.push_back(s);
        }
    }
    while let Some(s) = queue.pop_front() {
        for &t in graph.successors(s) {
            if !parent.contains_key(&t) {
                parent.insert(t, Some(s));
                dist.insert(t, dist[&s] + 1);
                queue.push_back(t);
            }
        }
    }
    let best = targets
        .iter()
        .filter(|t| dist.contains_key(t))
        .min_by_key(|&&t| (dist[&t], t))?;
    let mut path = vec![*best];
    let mut cur = *best;
    while let Some(p) = parent[&cur] {
        path.push(p);
        cur = p;
    }
    path.reverse();
    Some(path)
}

struct Engine<'a> {
    input: &'a CheckInput<'a>,
    product: MonitorProduct,
    restriction: Game,
    entry_cfgs: Vec<StateId>,
    win_cfg: Result<BTreeSet<StateId>, String>,
    coop_cfg: CoopResult,
    /// Configurations with a sigma-consistent satisfying continuation.
    sat: BTreeSet<StateId>,
    /// Cooperative analysis of the negated residuals in the restriction:
    /// sigma-consistent violating continuations.
    viol: CoopResult,
    reach_sigma: BTreeSet<StateId>,
    reach_all: BTreeSet<StateId>,
}

impl<'a> Engine<'a> {
    fn new(input: &'a CheckInput<'a>) -> Engine<'a> {
        let product = MonitorProduct::new(input.game, input.goal);
        let restriction = product.restrict(input.game, input.sigma);
        let entry_cfgs: Vec<StateId> = input.entries.iter().map(|&s| product.entry(s)).collect();
        let win_cfg = winning_configs(&product).map(|an| an.region);
        let residuals = product.residuals();
        let negated: Vec<GoalExpr> = residuals
            .iter()
            .map(|r| GoalExpr::not(r.clone()).simplify())
            .collect();
        let coop_cfg = coop_winning(product.game(), &residuals);
        let sat = coop_winning(&restriction, &residuals).winning;
        let viol = coop_winning(&restriction, &negated);
        let reach = |g: &Game| -> BTreeSet<StateId> {
            let mut seen: BTreeSet<StateId> = entry_cfgs.iter().copied().collect();
            let mut stack: Vec<StateId> = entry_cfgs.clone();
            while let Some(s) = stack.pop() {
                for &t in g.successors(s) {
                    if seen.insert(t) {
                        stack.push(t);
                    }
                }
            }
            seen
        };
        let reach_sigma = reach(&restriction);
        let reach_all = reach(product.game());
        Engine {
            input,
            product,
            restriction,
            entry_cfgs,
            win_cfg,
            coop_cfg,
            sat,
            viol,
            reach_sigma,
            reach_all,
        }
    }

    fn names(&self, cfgs: &[StateId]) -> Vec<String> {
        cfgs.iter()
            .map(|&c| self.input.state_name(self.product.project(c)))
            .collect()
    }

    fn continuation_from(&self, lasso: &Lasso) -> ContinuationLasso {
        ContinuationLasso {
            prefix: self.names(lasso.prefix()),
            cycle: self.names(lasso.cycle()),
        }
    }

    /// Winning criterion: no winning start may admit a consistent
    /// violating play.
    fn check_winning(&self) -> Verdict {
        let win = match &self.win_cfg {
            Ok(w) => w,
            Err(reason) => return Verdict::Unsupported { reason: reason.clone() },
        };
        let winning_entries: Vec<StateId> = self
            .entry_cfgs
            .iter()
            .copied()
            .filter(|c| win.contains(c))
            .collect();
        let failing = winning_entries
            .iter()
            .copied()
            .find(|c| self.viol.winning.contains(c));
        match failing {
            None => Verdict::Holds {
                vacuous: winning_entries.is_empty(),
            },
            Some(cfg) => {
                let lasso = &self.viol.witness[&cfg];
                let mut head: Vec<StateId> = lasso.prefix().to_vec();
                head.push(lasso.cycle()[0]);
                Verdict::Fails {
                    witness: FailureWitness {
                        path: self.names(&head),
                        continuation: Some(ContinuationLasso {
                            prefix: Vec::new(),
                            cycle: self.names(lasso.cycle()),
                        }),
                    },
                }
            }
        }
    }

    /// Shared by the strongly-winning and subgame-perfect checks, which
    /// differ only in which histories count: sigma-consistent ones or all.
    fn check_universal_paths(&self, consistent_only: bool) -> Verdict {
        let win = match &self.win_cfg {
            Ok(w) => w,
            Err(reason) => return Verdict::Unsupported { reason: reason.clone() },
        };
        let reachable = if consistent_only {
            &self.reach_sigma
        } else {
            &self.reach_all
        };
        let marked: BTreeSet<StateId> = reachable.intersection(win).copied().collect();
        let failing: BTreeSet<StateId> = marked
            .intersection(&self.viol.winning)
            .copied()
            .collect();
        if failing.is_empty() {
            return Verdict::Holds {
                vacuous: marked.is_empty(),
            };
        }
        let graph = if consistent_only {
            &self.restriction
        } else {
            self.product.game()
        };
        let path = bfs_path(graph, &self.entry_cfgs, &failing)
            .expect("failing configurations are reachable");
        let lasso = &self.viol.witness[path.last().unwrap()];
        Verdict::Fails {
            witness: FailureWitness {
                path: self.names(&path),
                continuation: Some(self.continuation_from(lasso)),
            },
        }
    }

    /// c-winning criterion: every cooperatively winning start keeps a
    /// consistent satisfying play.
    fn check_c_winning(&self) -> Verdict {
        let cw_entries: Vec<StateId> = self
            .entry_cfgs
            .iter()
            .copied()
            .filter(|c| self.coop_cfg.winning.contains(c))
            .collect();
        let failing = cw_entries.iter().copied().find(|c| !self.sat.contains(c));
        match failing {
            None => Verdict::Holds {
                vacuous: cw_entries.is_empty(),
            },
            Some(cfg) => Verdict::Fails {
                witness: FailureWitness {
                    path: self.names(&[cfg]),
                    continuation: None,
                },
            },
        }
    }

    /// Shared by cs-winning and c-perfect: cooperatively winning histories
    /// (consistent or all) must keep a consistent satisfying play.
    fn check_existential_paths(&self, consistent_only: bool) -> Verdict {
        let reachable = if consistent_only {
            &self.reach_sigma
        } else {
            &self.reach_all
        };
        let marked: BTreeSet<StateId> = reachable
            .intersection(&self.coop_cfg.winning)
            .copied()
            .collect();
        let failing: BTreeSet<StateId> = marked
            .iter()
            .copied()
            .filter(|c| !self.sat.contains(c))
            .collect();
        if failing.is_empty() {
            return Verdict::Holds {
                vacuous: marked.is_empty(),
            };
        }
        let graph = if consistent_only {
            &self.restriction
        } else {
            self.product.game()
        };
        let path = bfs_path(graph, &self.entry_cfgs, &failing)
            .expect("failing configurations are reachable");
        Verdict::Fails {
            witness: FailureWitness {
                path: self.names(&path),
                continuation: None,
            },
        }
    }

    fn check(&self, criterion: Criterion) -> Verdict {
        match criterion {
            Criterion::Winning => self.check_winning(),
            Criterion::StronglyWinning => self.check_universal_paths(true),
            Criterion::SubgamePerfect => self.check_universal_paths(false),
            Criterion::CWinning => self.check_c_winning(),
            Criterion::CsWinning => self.check_existential_paths(true),
            Criterion::CPerfect => self.check_existential_paths(false),
            Criterion::Admissible => {
                let strong = self.check_universal_paths(true);
                let cs = self.check_existential_paths(true);
                match (strong, cs) {
                    (Verdict::Unsupported { reason }, _) | (_, Verdict::Unsupported { reason }) => {
                        Verdict::Unsupported { reason }
                    }
                    (Verdict::Holds { vacuous: a }, Verdict::Holds { vacuous: b }) => {
                        Verdict::Holds { vacuous: a && b }
                    }
                    (Verdict::Fails { witness }, _) | (_, Verdict::Fails { witness }) => {
                        Verdict::Fails { witness }
                    }
                }
            }
        }
    }
}

/// Checks the requested criteria for one strategy.
pub fn check_criteria(input: &CheckInput, which: &[Criterion]) -> CriterionReport {
    let engine = Engine::new(input);
    CriterionReport {
        verdicts: which.iter().map(|&c| (c, engine.check(c))).collect(),
    }
}

pub fn is_winning_strategy(game: &Game, goal: &GoalExpr, sigma: &PositionalStrategy) -> Verdict {
    single(game, goal, sigma, Criterion::Winning)
}

pub fn is_strongly_winning(game: &Game, goal: &GoalExpr, sigma: &PositionalStrategy) -> Verdict {
    single(game, goal, sigma, Criterion::StronglyWinning)
}

pub fn is_subgame_perfect(game: &Game, goal: &GoalExpr, sigma: &PositionalStrategy) -> Verdict {
    single(game, goal, sigma, Criterion::SubgamePerfect)
}

pub fn is_c_winning(game: &Game, goal: &GoalExpr, sigma: &PositionalStrategy) -> Verdict {
    single(game, goal, sigma, Criterion::CWinning)
}

pub fn is_cs_winning(game: &Game, goal: &GoalExpr, sigma: &PositionalStrategy) -> Verdict {
    single(game, goal, sigma, Criterion::CsWinning)
}

pub fn is_c_perfect(game: &Game, goal: &GoalExpr, sigma: &PositionalStrategy) -> Verdict {
    single(game, goal, sigma, Criterion::CPerfect)
}

pub fn is_admissible(game: &Game, goal: &GoalExpr, sigma: &PositionalStrategy) -> Verdict {
    single(game, goal, sigma, Criterion::Admissible)
}

fn single(game: &Game, goal: &GoalExpr, sigma: &PositionalStrategy, c: Criterion) -> Verdict {
    let input = CheckInput::plain(game, goal, sigma);
    check_criteria(&input, &[c]).verdicts.remove(&c).unwrap()
}

/// Evidence that the synthesized strategy came out of the three-step
/// procedure: the winning region and strategy of step 1 and the
/// cooperatively winning region of the edge-restricted game of step 3.
#[derive(Debug, Clone)]
pub struct Certificate {
    pub winning_region: BTreeSet<StateId>,
    pub winning_strategy: PositionalStrategy,
    pub c_winning_region: BTreeSet<StateId>,
}

#[derive(Debug, Clone)]
pub struct SynthOutcome {
    pub strategy: PositionalStrategy,
    pub certificate: Certificate,
    pub report: CriterionReport,
    /// Whether the goal class carries the correctness guarantee. `false`
    /// only under `force`; the report then states what actually holds.
    pub supported: bool,
}

#[derive(Debug, thiserror::Error)]
pub enum SynthError {
    #[error("admissible synthesis does not cover this goal: {0}")]
    Unsupported(String),
}

fn synthesis_supported(goal: &GoalExpr) -> bool {
    let class = classify(goal);
    class.prefix_independent == Three::Yes
        || matches!(class.solver_class, SolverClass::Reachability | SolverClass::Safety)
}

/// Winning region plus one positional winning strategy, or a reason why a
/// positional one is not available directly.
fn step_one(game: &Game, goal: &GoalExpr) -> Result<(BTreeSet<StateId>, PositionalStrategy), String> {
    if classify(goal).solver_class != SolverClass::Composite {
        let r = solve(game, goal, SolveMode::Adversarial).map_err(|e| e.to_string())?;
        return Ok((r.region, r.strategy));
    }
    let p = MonitorProduct::new(game, goal);
    if p.monitor().mem_count() > 1 {
        return Err("a winning strategy for this goal may need memory".to_string());
    }
    // trivial monitor: configurations are exactly the states
    let an = winning_configs(&p)?;
    let region: BTreeSet<StateId> = game
        .states()
        .filter(|&s| an.region.contains(&p.entry(s)))
        .collect();
    let moves: BTreeMap<StateId, StateId> = an
        .moves
        .iter()
        .map(|(&c, &t)| (p.project(c), p.project(t)))
        .collect();
    Ok((region, total_strategy(game, &moves)))
}

/// Brute-force fallback for `force` mode: the oracle's winning region plus
/// the first enumerated positional strategy winning from all of it.
fn step_one_brute(game: &Game, goal: &GoalExpr) -> Result<(BTreeSet<StateId>, PositionalStrategy), String> {
    let region =
        crate::oracle::brute_winning_region(game, goal, SolveMode::Adversarial, crate::oracle::DEFAULT_BUDGET)
            .map_err(|e| e.to_string())?;
    let sigma = crate::oracle::StrategySpace::new(game, Player::One)
        .find(|sigma| {
            region.iter().all(|&s| {
                crate::oracle::StrategySpace::new(game, Player::Two)
                    .all(|tau| crate::oracle::val(game, goal, sigma, &tau, s))
            })
        })
        .ok_or_else(|| "no positional winning strategy exists".to_string())?;
    Ok((region, sigma))
}

/// The three-step procedure: solve adversarially, pin Player 1 to the
/// winning strategy inside the winning region, then solve the rest
/// cooperatively.
pub fn synth_admissible(game: &Game, goal: &GoalExpr, force: bool) -> Result<SynthOutcome, SynthError> {
    let supported = synthesis_supported(goal);
    if !supported && !force {
        return Err(SynthError::Unsupported(format!(
            "{goal} is neither prefix-independent nor a reachability or safety goal; \
             rerun with force to get unverified best-effort output"
        )));
    }
    let (w, sigma_w) = match step_one(game, goal) {
        Ok(x) => x,
        Err(_) if force => step_one_brute(game, goal).map_err(SynthError::Unsupported)?,
        Err(reason) => return Err(SynthError::Unsupported(reason)),
    };
    let restricted = game.restrict_player1_edges(&w, &sigma_w);
    let (c_region, strategy) = cooperative_solve(&restricted, goal);
    let strategy = PositionalStrategy::new(game, Player::One, &strategy.moves())
        .expect("restricted-game edges exist in the original game");
    let report = check_criteria(
        &CheckInput::plain(game, goal, &strategy),
        &[
            Criterion::Winning,
            Criterion::StronglyWinning,
            Criterion::CWinning,
            Criterion::CsWinning,
            Criterion::Admissible,
        ],
    );
    Ok(SynthOutcome {
        strategy,
        certificate: Certificate {
            winning_region: w,
            winning_strategy: sigma_w,
            c_winning_region: c_region,
        },
        report,
        supported,
    })
}
