//! Game graphs, paths, lassos and positional strategies.
//!
//! A game is a finite directed graph whose states are partitioned between
//! Player 1 and Player 2 and labeled with natural-number colors. The owner
//! of the current state picks the successor; the objective (a [`crate::goal::GoalExpr`])
//! talks about the resulting infinite color sequence.

use std::collections::BTreeSet;
use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

/// Dense index of a state inside a [`Game`].
pub type StateId = usize;

/// Color of a state (a natural number).
pub type Color = u32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Player {
    One,
    Two,
}

impl Player {
    pub fn opponent(self) -> Player {
        match self {
            Player::One => Player::Two,
            Player::Two => Player::One,
        }
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Player::One => write!(f, "1"),
            Player::Two => write!(f, "2"),
        }
    }
}

/// A finite two-player turn-based colored game graph.
///
/// States are identified by dense indices; textual names live in a separate
/// name table so that solvers can use plain array indexing. A structurally
/// well-formed game is non-blocking (every state has at least one successor);
/// use [`Game::validate`] to check that after raw construction.
#[derive(Debug, Clone)]
pub struct Game {
    owners: Vec<Player>,
    colors: Vec<Color>,
    succ: Vec<Vec<StateId>>,
    names: Vec<String>,
    by_name: HashMap<String, StateId>,
}

/// A single structural defect reported by [`Game::validate`].
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GameDefect {
    #[error("blocking state {0}")]
    BlockingState(String),
    #[error("edge {0} -> {1} references a missing state")]
    DanglingEdge(String, String),
    #[error("duplicate state name {0}")]
    DuplicateName(String),
    #[error("duplicate edge {0} -> {1}")]
    DuplicateEdge(String, String),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GameError {
    #[error("invalid game: {}", format_defects(.0))]
    Invalid(Vec<GameDefect>),
    #[error("not a path in the game: {0}")]
    NotAPath(String),
    #[error("invalid strategy: {0}")]
    BadStrategy(String),
}

fn format_defects(defects: &[GameDefect]) -> String {
    defects
        .iter()
        .map(|d| d.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

impl Game {
    /// Raw constructor. Accepts structurally broken inputs so that
    /// [`Game::validate`] has something to report on; callers that need a
    /// guaranteed-good game should use [`Game::build`].
    pub fn new(states: Vec<(String, Player, Color)>, edges: Vec<(StateId, StateId)>) -> Game {
        let mut by_name = HashMap::new();
        let mut names = Vec::new();
        let mut owners = Vec::new();
        let mut colors = Vec::new();
        for (idx, (name, owner, color)) in states.into_iter().enumerate() {
            by_name.entry(name.clone()).or_insert(idx);
            names.push(name);
            owners.push(owner);
            colors.push(color);
        }
        let n = names.len();
        let mut succ = vec![Vec::new(); n];
        for (from, to) in edges {
            if from < n {
                succ[from].push(to);
            } else {
                // Keep the dangling edge somewhere visible for validate().
                succ.push(vec![to]);
            }
        }
        for list in &mut succ {
            list.sort_unstable();
        }
        Game {
            owners,
            colors,
            succ,
            names,
            by_name,
        }
    }

    /// Validating constructor: returns the game only if all invariants hold.
    pub fn build(
        states: Vec<(String, Player, Color)>,
        edges: Vec<(StateId, StateId)>,
    ) -> Result<Game, GameError> {
        // Duplicate names must be caught before indices get merged.
        let mut seen = BTreeSet::new();
        let mut defects = Vec::new();
        for (name, _, _) in &states {
            if !seen.insert(name.clone()) {
                defects.push(GameDefect::DuplicateName(name.clone()));
            }
        }
        let game = Game::new(states, edges);
        defects.extend(game.defects());
        if defects.is_empty() {
            Ok(game)
        } else {
            Err(GameError::Invalid(defects))
        }
    }

    pub fn state_count(&self) -> usize {
        self.names.len()
    }

    pub fn states(&self) -> impl Iterator<Item = StateId> {
        0..self.state_count()
    }

    pub fn owner(&self, s: StateId) -> Player {
        self.owners[s]
    }

    pub fn color(&self, s: StateId) -> Color {
        self.colors[s]
    }

    pub fn successors(&self, s: StateId) -> &[StateId] {
        &self.succ[s]
    }

    pub fn has_edge(&self, from: StateId, to: StateId) -> bool {
        from < self.state_count() && self.succ[from].binary_search(&to).is_ok()
    }

    pub fn name(&self, s: StateId) -> &str {
        &self.names[s]
    }

    pub fn state_by_name(&self, name: &str) -> Option<StateId> {
        self.by_name.get(name).copied()
    }

    /// All states owned by `player`, in index order.
    pub fn states_of(&self, player: Player) -> Vec<StateId> {
        self.states().filter(|&s| self.owner(s) == player).collect()
    }

    /// Every distinct color occurring in the game, sorted.
    pub fn color_universe(&self) -> Vec<Color> {
        let set: BTreeSet<Color> = self.colors.iter().copied().collect();
        set.into_iter().collect()
    }

    /// Checks the structural invariants: non-blocking, no dangling edges,
    /// no duplicate edges. Returns every violation found.
    pub fn validate(&self) -> Result<(), Vec<GameDefect>> {
        let defects = self.defects();
        if defects.is_empty() {
            Ok(())
        } else {
            Err(defects)
        }
    }

    fn defects(&self) -> Vec<GameDefect> {
        let n = self.state_count();
        let mut defects = Vec::new();
        for s in 0..self.succ.len() {
            let from_name = if s < n {
                self.names[s].clone()
            } else {
                format!("#{s}")
            };
            for window in self.succ[s].windows(2) {
                if window[0] == window[1] {
                    defects.push(GameDefect::DuplicateEdge(
                        from_name.clone(),
                        self.display_target(window[0]),
                    ));
                }
            }
            for &t in &self.succ[s] {
                if t >= n || s >= n {
                    defects.push(GameDefect::DanglingEdge(
                        from_name.clone(),
                        self.display_target(t),
                    ));
                }
            }
        }
        for s in 0..n {
            if self.succ[s].is_empty() {
                defects.push(GameDefect::BlockingState(self.names[s].clone()));
            }
        }
        defects
    }

    fn display_target(&self, t: StateId) -> String {
        if t < self.state_count() {
            self.names[t].clone()
        } else {
            format!("#{t}")
        }
    }

    /// Forward-reachable states from `from`. If `restriction` is given,
    /// states owned by the strategy's owner only use the strategy's edge.
    pub fn reachable(
        &self,
        from: &BTreeSet<StateId>,
        restriction: Option<&PositionalStrategy>,
    ) -> BTreeSet<StateId> {
        let mut seen: BTreeSet<StateId> = from.clone();
        let mut queue: Vec<StateId> = from.iter().copied().collect();
        while let Some(s) = queue.pop() {
            let step: Vec<StateId> = match restriction {
                Some(strategy) if self.owner(s) == strategy.owner() => {
                    strategy.choice(s).into_iter().collect()
                }
                _ => self.succ[s].clone(),
            };
            for t in step {
                if seen.insert(t) {
                    queue.push(t);
                }
            }
        }
        seen
    }

    /// The detach construction: grafts a fresh one-way copy of `rho` onto the
    /// game. For `rho = s0 ... sn` it adds Player-2 states `s0' ... s(n-1)'`
    /// chained together and ending in the original `sn`, each copying the
    /// color of the state it mirrors. Old states and edges are untouched and
    /// cannot reach the new chain.
    ///
    /// Returns the new game together with the ids of the chain states, in
    /// path order (the entry of the chain is the first element).
    pub fn detach(&self, rho: &Path) -> Result<(Game, Vec<StateId>), GameError> {
        if rho.len() < 2 {
            return Err(GameError::NotAPath(
                "detach needs a path with at least one edge".into(),
            ));
        }
        rho.check(self)?;
        let mut game = self.clone();
        let n = rho.len() - 1; // number of fresh states
        let mut fresh = Vec::with_capacity(n);
        for i in 0..n {
            let orig = rho.states()[i];
            let name = game.fresh_name(game.names[orig].clone());
            let id = game.names.len();
            game.by_name.insert(name.clone(), id);
            game.names.push(name);
            game.owners.push(Player::Two);
            game.colors.push(game.colors[orig]);
            game.succ.push(Vec::new());
            fresh.push(id);
        }
        for i in 0..n {
            let target = if i + 1 < n {
                fresh[i + 1]
            } else {
                rho.states()[n]
            };
            game.succ[fresh[i]].push(target);
        }
        Ok((game, fresh))
    }

    fn fresh_name(&self, base: String) -> String {
        let mut k = 0;
        loop {
            let candidate = format!("{base}_d{k}");
            if !self.by_name.contains_key(&candidate) {
                return candidate;
            }
            k += 1;
        }
    }

    /// A copy of the game where every Player-1 edge `(s, t)` with
    /// `s ∈ keep_from` and `t != strategy(s)` is removed.
    pub fn restrict_player1_edges(
        &self,
        keep_from: &BTreeSet<StateId>,
        strategy: &PositionalStrategy,
    ) -> Game {
        let mut game = self.clone();
        for &s in keep_from {
            if game.owner(s) == Player::One {
                if let Some(t) = strategy.choice(s) {
                    game.succ[s] = vec![t];
                }
            }
        }
        game
    }
}

/// A nonempty finite path: consecutive states are connected by edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Path(Vec<StateId>);

impl Path {
    pub fn new(game: &Game, states: Vec<StateId>) -> Result<Path, GameError> {
        let path = Path(states);
        path.check(game)?;
        Ok(path)
    }

    fn check(&self, game: &Game) -> Result<(), GameError> {
        if self.0.is_empty() {
            return Err(GameError::NotAPath("empty path".into()));
        }
        for &s in &self.0 {
            if s >= game.state_count() {
                return Err(GameError::NotAPath(format!("unknown state #{s}")));
            }
        }
        for pair in self.0.windows(2) {
            if !game.has_edge(pair[0], pair[1]) {
                return Err(GameError::NotAPath(format!(
                    "no edge {} -> {}",
                    game.name(pair[0]),
                    game.name(pair[1])
                )));
            }
        }
        Ok(())
    }

    pub fn states(&self) -> &[StateId] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false // a Path is nonempty by construction
    }

    pub fn first(&self) -> StateId {
        self.0[0]
    }

    pub fn last(&self) -> StateId {
        *self.0.last().unwrap()
    }

    pub fn display(&self, game: &Game) -> String {
        self.0
            .iter()
            .map(|&s| game.name(s).to_string())
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// An ultimately periodic play: a (possibly empty) finite prefix followed by
/// a nonempty cycle repeated forever. Every play of a pair of positional
/// strategies has this shape.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lasso {
    prefix: Vec<StateId>,
    cycle: Vec<StateId>,
}

impl Lasso {
    pub fn new(game: &Game, prefix: Vec<StateId>, cycle: Vec<StateId>) -> Result<Lasso, GameError> {
        if cycle.is_empty() {
            return Err(GameError::NotAPath("lasso cycle must be nonempty".into()));
        }
        let lasso = Lasso { prefix, cycle };
        lasso.check(game)?;
        Ok(lasso)
    }

    fn check(&self, game: &Game) -> Result<(), GameError> {
        let mut unrolled = self.prefix.clone();
        unrolled.extend_from_slice(&self.cycle);
        unrolled.extend_from_slice(&self.cycle);
        Path::new(game, unrolled)?;
        Ok(())
    }

    pub fn prefix(&self) -> &[StateId] {
        &self.prefix
    }

    pub fn cycle(&self) -> &[StateId] {
        &self.cycle
    }

    pub fn start(&self) -> StateId {
        *self.prefix.first().unwrap_or(&self.cycle[0])
    }

    /// Prefix followed by `copies` unrollings of the cycle, as a plain path.
    pub fn unroll(&self, copies: usize) -> Vec<StateId> {
        let mut out = self.prefix.clone();
        for _ in 0..copies {
            out.extend_from_slice(&self.cycle);
        }
        out
    }

    pub fn display(&self, game: &Game) -> String {
        let fmt = |slice: &[StateId]| {
            slice
                .iter()
                .map(|&s| game.name(s).to_string())
                .collect::<Vec<_>>()
                .join(" ")
        };
        if self.prefix.is_empty() {
            format!("({})^w", fmt(&self.cycle))
        } else {
            format!("{} ({})^w", fmt(&self.prefix), fmt(&self.cycle))
        }
    }
}

/// A total positional strategy for one player: one chosen successor per
/// owned state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PositionalStrategy {
    owner: Player,
    choice: Vec<Option<StateId>>,
}

impl PositionalStrategy {
    pub fn new(
        game: &Game,
        owner: Player,
        choices: &[(StateId, StateId)],
    ) -> Result<PositionalStrategy, GameError> {
        let mut choice = vec![None; game.state_count()];
        for &(s, t) in choices {
            if s >= game.state_count() || game.owner(s) != owner {
                return Err(GameError::BadStrategy(format!(
                    "state #{s} is not owned by player {owner}"
                )));
            }
            if !game.has_edge(s, t) {
                return Err(GameError::BadStrategy(format!(
                    "no edge {} -> {}",
                    game.name(s),
                    game.name(t)
                )));
            }
            if choice[s].is_some() {
                return Err(GameError::BadStrategy(format!(
                    "two choices for state {}",
                    game.name(s)
                )));
            }
            choice[s] = Some(t);
        }
        for s in game.states() {
            if game.owner(s) == owner && choice[s].is_none() {
                return Err(GameError::BadStrategy(format!(
                    "no choice for state {}",
                    game.name(s)
                )));
            }
        }
        Ok(PositionalStrategy { owner, choice })
    }

    /// Strategy that picks the lowest-index successor at every owned state.
    /// This is the tie-break default used throughout the solvers.
    pub fn lowest(game: &Game, owner: Player) -> PositionalStrategy {
        let choices: Vec<(StateId, StateId)> = game
            .states_of(owner)
            .into_iter()
            .map(|s| (s, game.successors(s)[0]))
            .collect();
        PositionalStrategy::new(game, owner, &choices).expect("non-blocking game")
    }

    pub fn owner(&self) -> Player {
        self.owner
    }

    pub fn choice(&self, s: StateId) -> Option<StateId> {
        self.choice.get(s).copied().flatten()
    }

    /// Replaces the choice at `s`; the caller must keep the edge valid.
    pub fn set(&mut self, s: StateId, t: StateId) {
        if s >= self.choice.len() {
            self.choice.resize(s + 1, None);
        }
        self.choice[s] = Some(t);
    }

    /// (state, successor) pairs in state order.
    pub fn moves(&self) -> Vec<(StateId, StateId)> {
        self.choice
            .iter()
            .enumerate()
            .filter_map(|(s, t)| t.map(|t| (s, t)))
            .collect()
    }
}

/// The unique play from `start` when Player 1 follows `sigma` and Player 2
/// follows `tau`, folded into a lasso at the first repeated state.
pub fn outcome(
    game: &Game,
    start: StateId,
    sigma: &PositionalStrategy,
    tau: &PositionalStrategy,
) -> Lasso {
    let mut pos = vec![usize::MAX; game.state_count()];
    let mut walk = Vec::new();
    let mut current = start;
    loop {
        if pos[current] != usize::MAX {
            let at = pos[current];
            return Lasso {
                prefix: walk[..at].to_vec(),
                cycle: walk[at..].to_vec(),
            };
        }
        pos[current] = walk.len();
        walk.push(current);
        let next = match game.owner(current) {
            Player::One => sigma.choice(current),
            Player::Two => tau.choice(current),
        };
        current = next.expect("strategies must be total");
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn validate_accepts_nonblocking_game() {
        let (game, _) = fixtures::persist();
        assert!(game.validate().is_ok());
    }

    #[test]
    fn validate_reports_blocking_singleton() {
        let game = Game::new(vec![("s".into(), Player::One, 0)], vec![]);
        let defects = game.validate().unwrap_err();
        assert_eq!(defects, vec![GameDefect::BlockingState("s".into())]);
    }

    #[test]
    fn validate_names_every_sink_as_drawn() {
        // Fork-shaped game entered with its two leaf states left as sinks.
        let game = fixtures::two_routes_as_drawn();
        let defects = game.validate().unwrap_err();
        assert!(defects.contains(&GameDefect::BlockingState("s4".into())));
        assert!(defects.contains(&GameDefect::BlockingState("s5".into())));
        assert_eq!(defects.len(), 2);
    }

    #[test]
    fn validate_reports_dangling_and_duplicate() {
        let game = Game::new(
            vec![("a".into(), Player::One, 0)],
            vec![(0, 1), (0, 0), (0, 0)],
        );
        let defects = game.validate().unwrap_err();
        assert!(defects
            .iter()
            .any(|d| matches!(d, GameDefect::DanglingEdge(_, _))));
        assert!(defects
            .iter()
            .any(|d| matches!(d, GameDefect::DuplicateEdge(_, _))));
    }

    #[test]
    fn build_rejects_duplicate_names() {
        let err = Game::build(
            vec![
                ("a".into(), Player::One, 0),
                ("a".into(), Player::Two, 1),
            ],
            vec![(0, 0), (1, 1)],
        )
        .unwrap_err();
        match err {
            GameError::Invalid(defects) => {
                assert!(defects.contains(&GameDefect::DuplicateName("a".into())))
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn outcome_folds_cooperative_cycle() {
        let (game, _) = fixtures::persist();
        let s0 = game.state_by_name("s0").unwrap();
        let s1 = game.state_by_name("s1").unwrap();
        let sigma = PositionalStrategy::new(&game, Player::One, &[(s0, s1)]).unwrap();
        let s2 = game.state_by_name("s2").unwrap();
        let tau = PositionalStrategy::new(&game, Player::Two, &[(s1, s0), (s2, s2)]).unwrap();
        let lasso = outcome(&game, s0, &sigma, &tau);
        assert!(lasso.prefix().is_empty());
        assert_eq!(lasso.cycle(), &[s0, s1]);
    }

    #[test]
    fn outcome_self_loop_is_fixed_point() {
        let game = Game::build(
            vec![("a".into(), Player::One, 0), ("b".into(), Player::Two, 0)],
            vec![(0, 0), (0, 1), (1, 1)],
        )
        .unwrap();
        let sigma = PositionalStrategy::new(&game, Player::One, &[(0, 0)]).unwrap();
        let tau = PositionalStrategy::new(&game, Player::Two, &[(1, 1)]).unwrap();
        let lasso = outcome(&game, 0, &sigma, &tau);
        assert!(lasso.prefix().is_empty());
        assert_eq!(lasso.cycle(), &[0]);
    }

    #[test]
    fn outcome_with_prefix() {
        let (game, _) = fixtures::direct_or_detour();
        let s0 = game.state_by_name("s0").unwrap();
        let s1 = game.state_by_name("s1").unwrap();
        let s2 = game.state_by_name("s2").unwrap();
        let sigma = PositionalStrategy::new(&game, Player::One, &[(s0, s1)]).unwrap();
        let tau = PositionalStrategy::new(&game, Player::Two, &[(s1, s1), (s2, s2)]).unwrap();
        let lasso = outcome(&game, s0, &sigma, &tau);
        assert_eq!(lasso.prefix(), &[s0]);
        assert_eq!(lasso.cycle(), &[s1]);
    }

    #[test]
    fn outcome_is_deterministic() {
        let (game, _) = fixtures::persist();
        let sigma = PositionalStrategy::lowest(&game, Player::One);
        let tau = PositionalStrategy::lowest(&game, Player::Two);
        for s in game.states() {
            assert_eq!(outcome(&game, s, &sigma, &tau), outcome(&game, s, &sigma, &tau));
            let lasso = outcome(&game, s, &sigma, &tau);
            assert!(lasso.prefix().len() + lasso.cycle().len() <= game.state_count() + 1);
            // unrolling twice is still a path of the game
            Path::new(&game, lasso.unroll(2)).unwrap();
        }
    }

    #[test]
    fn detach_adds_chain_of_player2_states() {
        let (game, _) = fixtures::persist();
        let s0 = game.state_by_name("s0").unwrap();
        let s1 = game.state_by_name("s1").unwrap();
        let rho = Path::new(&game, vec![s0, s1]).unwrap();
        let (detached, fresh) = game.detach(&rho).unwrap();
        assert_eq!(fresh.len(), 1);
        let copy = fresh[0];
        assert_eq!(detached.owner(copy), Player::Two);
        assert_eq!(detached.color(copy), game.color(s0));
        assert_eq!(detached.successors(copy), &[s1]);
        // all original edges intact
        for s in game.states() {
            assert_eq!(detached.successors(s), game.successors(s));
        }
        // new states unreachable from old ones
        let from_old: BTreeSet<StateId> = game.states().collect();
        let reach = detached.reachable(&from_old, None);
        assert!(!reach.contains(&copy));
    }

    #[test]
    fn detach_rejects_single_state_path() {
        let (game, _) = fixtures::persist();
        let s0 = game.state_by_name("s0").unwrap();
        let rho = Path::new(&game, vec![s0]).unwrap();
        assert!(game.detach(&rho).is_err());
    }

    #[test]
    fn detach_rejects_non_path() {
        let (game, _) = fixtures::persist();
        let s2 = game.state_by_name("s2").unwrap();
        let s0 = game.state_by_name("s0").unwrap();
        assert!(Path::new(&game, vec![s2, s0]).is_err());
    }

    #[test]
    fn reachable_with_and_without_restriction() {
        let (game, _) = fixtures::persist();
        let s0 = game.state_by_name("s0").unwrap();
        let s1 = game.state_by_name("s1").unwrap();
        let s2 = game.state_by_name("s2").unwrap();
        assert_eq!(
            game.reachable(&BTreeSet::from([s2]), None),
            BTreeSet::from([s2])
        );
        assert_eq!(
            game.reachable(&BTreeSet::from([s0]), None),
            BTreeSet::from([s0, s1, s2])
        );
        let sigma = PositionalStrategy::new(&game, Player::One, &[(s0, s1)]).unwrap();
        assert_eq!(
            game.reachable(&BTreeSet::from([s0]), Some(&sigma)),
            BTreeSet::from([s0, s1, s2])
        );
    }
}
