//! Deterministic prefix monitors for goals.
//!
//! A monitor abstracts everything a goal wants to know about the finite
//! prefix read so far: the first color, which colors have occurred, how
//! often a counted color occurred (saturating), and whether a safety set
//! was already violated. Infinitary atoms need no memory. Each memory
//! state carries a residual goal: the original goal rewritten under the
//! abstracted prefix. This turns questions about histories into questions
//! about (state, memory) pairs of a product game.

use std::collections::BTreeSet;
use std::collections::HashMap;

use crate::game::Color;
use crate::goal::GoalExpr;

/// Index of a monitor memory state.
pub type MemId = usize;

/// One prefix-tracking component of the monitor memory.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Tracker {
    /// Records the first color read (shared by all `First` atoms).
    First,
    /// Seen-bit for one color.
    Ev(Color),
    /// Saturating occurrence counter for one color, capped at `k`.
    Count(Color, u32),
    /// Violated-bit for one safety color set.
    Safe(BTreeSet<Color>),
}

/// Deterministic automaton over colors with a residual goal per memory.
#[derive(Debug, Clone)]
pub struct Monitor {
    goal: GoalExpr,
    universe: Vec<Color>,
    trackers: Vec<Tracker>,
    /// Concrete tracker values per memory state.
    memories: Vec<Vec<u32>>,
    /// `delta[mem][color-index-in-universe]`.
    delta: Vec<Vec<MemId>>,
    residuals: Vec<GoalExpr>,
}

/// Builds the monitor for `goal` over the given color universe.
///
/// The universe must cover every color the monitored game can produce;
/// colors mentioned by the goal are added automatically.
pub fn compile_monitor(goal: &GoalExpr, color_universe: &BTreeSet<Color>) -> Monitor {
    let mut universe: BTreeSet<Color> = color_universe.clone();
    universe.extend(goal.colors());
    let universe: Vec<Color> = universe.into_iter().collect();

    let mut trackers = BTreeSet::new();
    collect_trackers(goal, &mut trackers);
    let trackers: Vec<Tracker> = trackers.into_iter().collect();

    let initial: Vec<u32> = trackers.iter().map(|_| 0).collect();
    let mut index: HashMap<Vec<u32>, MemId> = HashMap::new();
    let mut memories = vec![initial.clone()];
    index.insert(initial, 0);
    let mut delta: Vec<Vec<MemId>> = Vec::new();
    let mut frontier = vec![0];
    while let Some(mem) = frontier.pop() {
        while delta.len() <= mem {
            delta.push(Vec::new());
        }
        if !delta[mem].is_empty() {
            continue;
        }
        let mut row = Vec::with_capacity(universe.len());
        for &c in &universe {
            let next: Vec<u32> = trackers
                .iter()
                .zip(&memories[mem])
                .map(|(t, &v)| step_tracker(t, v, c, &universe))
                .collect();
            let id = match index.get(&next) {
                Some(&id) => id,
                None => {
                    let id = memories.len();
                    index.insert(next.clone(), id);
                    memories.push(next);
                    frontier.push(id);
                    id
                }
            };
            row.push(id);
        }
        delta[mem] = row;
    }

    let residuals = memories
        .iter()
        .map(|vals| residual_of(goal, &trackers, vals, &universe).simplify())
        .collect();

    Monitor {
        goal: goal.clone(),
        universe,
        trackers,
        memories,
        delta,
        residuals,
    }
}

fn collect_trackers(goal: &GoalExpr, out: &mut BTreeSet<Tracker>) {
    match goal {
        GoalExpr::First(_) => {
            out.insert(Tracker::First);
        }
        GoalExpr::Ev(c) => {
            out.insert(Tracker::Ev(*c));
        }
        GoalExpr::Count(c, k) => {
            out.insert(Tracker::Count(*c, *k));
        }
        GoalExpr::Safe(set) => {
            out.insert(Tracker::Safe(set.clone()));
        }
        GoalExpr::And(a, b) | GoalExpr::Or(a, b) => {
            collect_trackers(a, out);
            collect_trackers(b, out);
        }
        GoalExpr::Not(a) => collect_trackers(a, out),
        GoalExpr::Buchi(_) | GoalExpr::CoBuchi(_) | GoalExpr::Parity | GoalExpr::True
        | GoalExpr::False => {}
    }
}

fn step_tracker(tracker: &Tracker, value: u32, color: Color, universe: &[Color]) -> u32 {
    match tracker {
        Tracker::First => {
            if value != 0 {
                value
            } else {
                let idx = universe
                    .iter()
                    .position(|&c| c == color)
                    .expect("color outside monitor universe");
                idx as u32 + 1
            }
        }
        Tracker::Ev(c) => {
            if value == 1 || color == *c {
                1
            } else {
                0
            }
        }
        Tracker::Count(c, k) => {
            if color == *c {
                (value + 1).min(*k)
            } else {
                value
            }
        }
        Tracker::Safe(set) => {
            if value == 1 || !set.contains(&color) {
                1
            } else {
                0
            }
        }
    }
}

fn residual_of(goal: &GoalExpr, trackers: &[Tracker], values: &[u32], universe: &[Color]) -> GoalExpr {
    let lookup = |t: &Tracker| -> u32 {
        let idx = trackers.iter().position(|x| x == t).expect("tracker present");
        values[idx]
    };
    match goal {
        GoalExpr::First(c) => match lookup(&Tracker::First) {
            0 => goal.clone(),
            v => {
                if universe[(v - 1) as usize] == *c {
                    GoalExpr::True
                } else {
                    GoalExpr::False
                }
            }
        },
        GoalExpr::Ev(c) => {
            if lookup(&Tracker::Ev(*c)) == 1 {
                GoalExpr::True
            } else {
                goal.clone()
            }
        }
        GoalExpr::Count(c, k) => {
            let seen = lookup(&Tracker::Count(*c, *k));
            if seen >= *k {
                GoalExpr::True
            } else {
                GoalExpr::Count(*c, *k - seen)
            }
        }
        GoalExpr::Safe(set) => {
            if lookup(&Tracker::Safe(set.clone())) == 1 {
                GoalExpr::False
            } else {
                goal.clone()
            }
        }
        GoalExpr::And(a, b) => GoalExpr::and(
            residual_of(a, trackers, values, universe),
            residual_of(b, trackers, values, universe),
        ),
        GoalExpr::Or(a, b) => GoalExpr::or(
            residual_of(a, trackers, values, universe),
            residual_of(b, trackers, values, universe),
        ),
        GoalExpr::Not(a) => GoalExpr::not(residual_of(a, trackers, values, universe)),
        other => other.clone(),
    }
}

impl Monitor {
    pub fn goal(&self) -> &GoalExpr {
        &self.goal
    }

    pub fn initial(&self) -> MemId {
        0
    }

    pub fn mem_count(&self) -> usize {
        self.memories.len()
    }

    pub fn universe(&self) -> &[Color] {
        &self.universe
    }

    pub fn step(&self, mem: MemId, color: Color) -> MemId {
        let idx = self
            .universe
            .iter()
            .position(|&c| c == color)
            .expect("color outside monitor universe");
        self.delta[mem][idx]
    }

    pub fn step_word(&self, mem: MemId, colors: &[Color]) -> MemId {
        colors.iter().fold(mem, |m, &c| self.step(m, c))
    }

    /// The goal rewritten under the prefix abstracted by `mem`.
    pub fn residual(&self, mem: MemId) -> &GoalExpr {
        &self.residuals[mem]
    }

    /// First color read, if any was recorded for this memory.
    pub fn first_color(&self, mem: MemId) -> Option<Color> {
        let idx = self.trackers.iter().position(|t| *t == Tracker::First)?;
        match self.memories[mem][idx] {
            0 => None,
            v => Some(self.universe[(v - 1) as usize]),
        }
    }

    pub fn ev_seen(&self, mem: MemId, c: Color) -> bool {
        self.tracker_value(mem, &Tracker::Ev(c)) == Some(1)
    }

    pub fn count_seen(&self, mem: MemId, c: Color, k: u32) -> u32 {
        self.tracker_value(mem, &Tracker::Count(c, k)).unwrap_or(0)
    }

    pub fn safe_violated(&self, mem: MemId, set: &BTreeSet<Color>) -> bool {
        self.tracker_value(mem, &Tracker::Safe(set.clone())) == Some(1)
    }

    fn tracker_value(&self, mem: MemId, t: &Tracker) -> Option<u32> {
        let idx = self.trackers.iter().position(|x| x == t)?;
        Some(self.memories[mem][idx])
    }
}
