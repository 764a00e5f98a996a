//! Product constructions: game × goal monitor, and game × strategy memory.
//!
//! The monitor product turns questions about histories into questions about
//! its states. A configuration (s, m) stands for all histories ending in s
//! whose strict prefix drove the monitor to m; by monitor coherence, such a
//! history is winning exactly when Player 1 can ensure the residual at m on
//! the continuation starting with s's own color.

use std::collections::BTreeSet;
use std::collections::HashMap;

use crate::game::{Color, Game, Player, PositionalStrategy, StateId};
use crate::goal::GoalExpr;
use crate::monitor::{compile_monitor, MemId, Monitor};

/// The game unfolded against the goal monitor.
///
/// Memory convention: the memory of a configuration has consumed the colors
/// of the strict predecessors only, not the current state's color. The entry
/// configuration of a state s is therefore (s, initial memory).
pub struct MonitorProduct {
    product: Game,
    monitor: Monitor,
    configs: Vec<(StateId, MemId)>,
    entry: Vec<StateId>,
}

impl MonitorProduct {
    pub fn new(game: &Game, goal: &GoalExpr) -> MonitorProduct {
        let universe: BTreeSet<Color> = game.color_universe().into_iter().collect();
        let monitor = compile_monitor(goal, &universe);
        let m0 = monitor.initial();

        let mut configs: Vec<(StateId, MemId)> = Vec::new();
        let mut index: HashMap<(StateId, MemId), StateId> = HashMap::new();
        let mut entry = Vec::with_capacity(game.state_count());
        for s in game.states() {
            let id = configs.len();
            configs.push((s, m0));
            index.insert((s, m0), id);
            entry.push(id);
        }
        let mut frontier: Vec<StateId> = (0..configs.len()).collect();
        let mut succ: Vec<Vec<StateId>> = Vec::new();
        while let Some(cfg) = frontier.pop() {
            while succ.len() <= cfg {
                succ.push(Vec::new());
            }
            if !succ[cfg].is_empty() {
                continue;
            }
            let (s, m) = configs[cfg];
            let m2 = monitor.step(m, game.color(s));
            let mut row = Vec::new();
            for &t in game.successors(s) {
                let id = match index.get(&(t, m2)) {
                    Some(&id) => id,
                    None => {
                        let id = configs.len();
                        configs.push((t, m2));
                        index.insert((t, m2), id);
                        frontier.push(id);
                        id
                    }
                };
                row.push(id);
            }
            succ[cfg] = row;
        }

        let states: Vec<(String, Player, Color)> = configs
            .iter()
            .map(|&(s, m)| (format!("{}@{m}", game.name(s)), game.owner(s), game.color(s)))
            .collect();
        let mut edges = Vec::new();
        for (cfg, row) in succ.iter().enumerate() {
            for &t in row {
                edges.push((cfg, t));
            }
        }
        let product = Game::build(states, edges).expect("product of a valid game is valid");
        MonitorProduct {
            product,
            monitor,
            configs,
            entry,
        }
    }

    /// The product game itself (configurations as states).
    pub fn game(&self) -> &Game {
        &self.product
    }

    pub fn monitor(&self) -> &Monitor {
        &self.monitor
    }

    pub fn config(&self, cfg: StateId) -> (StateId, MemId) {
        self.configs[cfg]
    }

    /// Base-game state of a configuration.
    pub fn project(&self, cfg: StateId) -> StateId {
        self.configs[cfg].0
    }

    pub fn memory(&self, cfg: StateId) -> MemId {
        self.configs[cfg].1
    }

    /// Configuration standing for the one-state history `s`.
    pub fn entry(&self, s: StateId) -> StateId {
        self.entry[s]
    }

    pub fn entries(&self) -> &[StateId] {
        &self.entry
    }

    /// Goal residual of a configuration (under its memory).
    pub fn residual(&self, cfg: StateId) -> &GoalExpr {
        self.monitor.residual(self.configs[cfg].1)
    }

    /// Residuals of all configurations, in configuration order.
    pub fn residuals(&self) -> Vec<GoalExpr> {
        self.configs
            .iter()
            .map(|&(_, m)| self.monitor.residual(m).clone())
            .collect()
    }

    /// First color of the history a configuration stands for: recorded by
    /// the monitor, or the current color if nothing was read yet. Constant
    /// along every product play.
    pub fn first_color(&self, game: &Game, cfg: StateId) -> Color {
        let (s, m) = self.configs[cfg];
        self.monitor.first_color(m).unwrap_or_else(|| game.color(s))
    }

    /// The product with Player-1 configurations restricted to `sigma`
    /// (a positional strategy on the base game).
    pub fn restrict(&self, game: &Game, sigma: &PositionalStrategy) -> Game {
        let keep: BTreeSet<StateId> = self
            .product
            .states()
            .filter(|&cfg| game.owner(self.project(cfg)) == Player::One)
            .collect();
        let lifted = self.lift(game, sigma);
        self.product.restrict_player1_edges(&keep, &lifted)
    }

    /// Lifts a base-game Player-1 strategy to the product.
    pub fn lift(&self, game: &Game, sigma: &PositionalStrategy) -> PositionalStrategy {
        let mut choices = Vec::new();
        for cfg in self.product.states() {
            let (s, m) = self.configs[cfg];
            if game.owner(s) == Player::One {
                let t = sigma.choice(s).expect("strategy must be total");
                let m2 = self.monitor.step(m, game.color(s));
                let target = self
                    .product
                    .states()
                    .find(|&c| self.configs[c] == (t, m2))
                    .expect("successor configuration exists");
                choices.push((cfg, target));
            }
        }
        PositionalStrategy::new(&self.product, Player::One, &choices)
            .expect("lifted strategy is valid")
    }
}

/// Deterministic strategy memory updated by the states of the play,
/// including the current one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MooreKind {
    /// Counts occurrences of a color, saturating at `max`.
    Count { color: Color, max: u32 },
    /// Records whether a given state was visited.
    Seen { state: StateId },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MooreMachine {
    pub kind: MooreKind,
}

impl MooreMachine {
    pub fn initial(&self) -> u32 {
        0
    }

    pub fn step(&self, game: &Game, mem: u32, s: StateId) -> u32 {
        match &self.kind {
            MooreKind::Count { color, max } => {
                if game.color(s) == *color {
                    (mem + 1).min(*max)
                } else {
                    mem
                }
            }
            MooreKind::Seen { state } => {
                if s == *state {
                    1
                } else {
                    mem
                }
            }
        }
    }
}

/// The game unfolded against a Moore memory: states are (state, memory)
/// pairs reachable from the entry set. A positional strategy on the
/// expansion is a finite-memory strategy of the base game.
#[derive(Debug, Clone)]
pub struct Expansion {
    pub game: Game,
    /// Expanded state of the one-state history `s`, per base state.
    pub entries: Vec<StateId>,
    /// Base-game state of each expanded state.
    pub project: Vec<StateId>,
    pairs: Vec<(StateId, u32)>,
}

impl Expansion {
    pub fn pair(&self, expanded: StateId) -> (StateId, u32) {
        self.pairs[expanded]
    }

    pub fn find(&self, s: StateId, mem: u32) -> Option<StateId> {
        self.pairs.iter().position(|&p| p == (s, mem))
    }
}

pub fn expand(game: &Game, moore: &MooreMachine) -> Expansion {
    let mut pairs: Vec<(StateId, u32)> = Vec::new();
    let mut index: HashMap<(StateId, u32), StateId> = HashMap::new();
    let mut entries = Vec::with_capacity(game.state_count());
    for s in game.states() {
        let mem = moore.step(game, moore.initial(), s);
        let id = match index.get(&(s, mem)) {
            Some(&id) => id,
            None => {
                let id = pairs.len();
                pairs.push((s, mem));
                index.insert((s, mem), id);
                id
            }
        };
        entries.push(id);
    }
    let mut frontier: Vec<StateId> = (0..pairs.len()).collect();
    let mut succ: Vec<Vec<StateId>> = Vec::new();
    while let Some(x) = frontier.pop() {
        while succ.len() <= x {
            succ.push(Vec::new());
        }
        if !succ[x].is_empty() {
            continue;
        }
        let (s, mem) = pairs[x];
        let mut row = Vec::new();
        for &t in game.successors(s) {
            let m2 = moore.step(game, mem, t);
            let id = match index.get(&(t, m2)) {
                Some(&id) => id,
                None => {
                    let id = pairs.len();
                    pairs.push((t, m2));
                    index.insert((t, m2), id);
                    frontier.push(id);
                    id
                }
            };
            row.push(id);
        }
        succ[x] = row;
    }
    let states: Vec<(String, Player, Color)> = pairs
        .iter()
        .map(|&(s, mem)| (format!("{}@{mem}", game.name(s)), game.owner(s), game.color(s)))
        .collect();
    let mut edges = Vec::new();
    for (x, row) in succ.iter().enumerate() {
        for &t in row {
            edges.push((x, t));
        }
    }
    let expanded = Game::build(states, edges).expect("expansion of a valid game is valid");
    let project = pairs.iter().map(|&(s, _)| s).collect();
    Expansion {
        game: expanded,
        entries,
        project,
        pairs,
    }
}
