//! The goal language and its evaluation on lassos.
//!
//! A goal denotes a set of infinite color sequences. The language is closed
//! under boolean operators over the atoms below; every goal in it can be
//! evaluated on an ultimately periodic word, which is all the solvers and
//! the brute-force oracle need.
//!
//! Parity convention: the maximum color occurring infinitely often must be
//! even for Player 1 to win. The literature uses both conventions; this
//! crate commits to max-even everywhere, including the CLI.

use std::collections::BTreeSet;
use std::fmt;

use crate::game::{Color, Game, Lasso};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GoalExpr {
    /// The first color of the play is `c`.
    First(Color),
    /// Color `c` occurs at least once. `reach` is sugar for this.
    Ev(Color),
    /// Every color of the play stays within the given set.
    Safe(BTreeSet<Color>),
    /// Color `c` occurs infinitely often.
    Buchi(Color),
    /// From some point on, every color is `c`.
    CoBuchi(Color),
    /// The maximum color occurring infinitely often is even.
    Parity,
    /// Color `c` occurs at least `k` times (`k >= 1`).
    Count(Color, u32),
    And(Box<GoalExpr>, Box<GoalExpr>),
    Or(Box<GoalExpr>, Box<GoalExpr>),
    Not(Box<GoalExpr>),
    /// Constant goals; produced by residual simplification, not by the parser.
    True,
    False,
}

impl GoalExpr {
    pub fn reach(c: Color) -> GoalExpr {
        GoalExpr::Ev(c)
    }

    pub fn and(a: GoalExpr, b: GoalExpr) -> GoalExpr {
        GoalExpr::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: GoalExpr, b: GoalExpr) -> GoalExpr {
        GoalExpr::Or(Box::new(a), Box::new(b))
    }

    pub fn not(a: GoalExpr) -> GoalExpr {
        GoalExpr::Not(Box::new(a))
    }

    /// All colors mentioned by the expression.
    pub fn colors(&self) -> BTreeSet<Color> {
        let mut out = BTreeSet::new();
        self.collect_colors(&mut out);
        out
    }

    fn collect_colors(&self, out: &mut BTreeSet<Color>) {
        match self {
            GoalExpr::First(c) | GoalExpr::Ev(c) | GoalExpr::Buchi(c) | GoalExpr::CoBuchi(c) => {
                out.insert(*c);
            }
            GoalExpr::Count(c, _) => {
                out.insert(*c);
            }
            GoalExpr::Safe(set) => out.extend(set.iter().copied()),
            GoalExpr::And(a, b) | GoalExpr::Or(a, b) => {
                a.collect_colors(out);
                b.collect_colors(out);
            }
            GoalExpr::Not(a) => a.collect_colors(out),
            GoalExpr::Parity | GoalExpr::True | GoalExpr::False => {}
        }
    }

    /// Constant-folds boolean structure. Keeps atoms untouched.
    pub fn simplify(&self) -> GoalExpr {
        match self {
            GoalExpr::And(a, b) => match (a.simplify(), b.simplify()) {
                (GoalExpr::False, _) | (_, GoalExpr::False) => GoalExpr::False,
                (GoalExpr::True, x) | (x, GoalExpr::True) => x,
                (x, y) => GoalExpr::and(x, y),
            },
            GoalExpr::Or(a, b) => match (a.simplify(), b.simplify()) {
                (GoalExpr::True, _) | (_, GoalExpr::True) => GoalExpr::True,
                (GoalExpr::False, x) | (x, GoalExpr::False) => x,
                (x, y) => GoalExpr::or(x, y),
            },
            GoalExpr::Not(a) => match a.simplify() {
                GoalExpr::True => GoalExpr::False,
                GoalExpr::False => GoalExpr::True,
                x => GoalExpr::not(x),
            },
            other => other.clone(),
        }
    }
}

impl fmt::Display for GoalExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GoalExpr::First(c) => write!(f, "first({c})"),
            GoalExpr::Ev(c) => write!(f, "ev({c})"),
            GoalExpr::Safe(set) => {
                let items: Vec<String> = set.iter().map(|c| c.to_string()).collect();
                write!(f, "safe({})", items.join(","))
            }
            GoalExpr::Buchi(c) => write!(f, "buchi({c})"),
            GoalExpr::CoBuchi(c) => write!(f, "cobuchi({c})"),
            GoalExpr::Parity => write!(f, "parity"),
            GoalExpr::Count(c, k) => write!(f, "count({c},{k})"),
            GoalExpr::And(a, b) => write!(f, "and({a},{b})"),
            GoalExpr::Or(a, b) => write!(f, "or({a},{b})"),
            GoalExpr::Not(a) => write!(f, "not({a})"),
            GoalExpr::True => write!(f, "true"),
            GoalExpr::False => write!(f, "false"),
        }
    }
}

/// An ultimately periodic color word `prefix . cycle^w`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColorLasso {
    pub prefix: Vec<Color>,
    pub cycle: Vec<Color>,
}

impl ColorLasso {
    pub fn new(prefix: Vec<Color>, cycle: Vec<Color>) -> ColorLasso {
        assert!(!cycle.is_empty(), "lasso cycle must be nonempty");
        ColorLasso { prefix, cycle }
    }

    pub fn of(game: &Game, lasso: &Lasso) -> ColorLasso {
        ColorLasso {
            prefix: lasso.prefix().iter().map(|&s| game.color(s)).collect(),
            cycle: lasso.cycle().iter().map(|&s| game.color(s)).collect(),
        }
    }

    fn first(&self) -> Color {
        *self.prefix.first().unwrap_or(&self.cycle[0])
    }

    fn count(&self, c: Color) -> Option<u32> {
        // None encodes "infinitely many".
        if self.cycle.contains(&c) {
            None
        } else {
            Some(self.prefix.iter().filter(|&&x| x == c).count() as u32)
        }
    }
}

/// Whether the infinite color word denoted by `lasso` satisfies `goal`.
pub fn eval_lasso(goal: &GoalExpr, lasso: &ColorLasso) -> bool {
    match goal {
        GoalExpr::First(c) => lasso.first() == *c,
        GoalExpr::Ev(c) => lasso.prefix.contains(c) || lasso.cycle.contains(c),
        GoalExpr::Safe(set) => {
            lasso.prefix.iter().all(|c| set.contains(c))
                && lasso.cycle.iter().all(|c| set.contains(c))
        }
        GoalExpr::Buchi(c) => lasso.cycle.contains(c),
        GoalExpr::CoBuchi(c) => lasso.cycle.iter().all(|x| x == c),
        GoalExpr::Parity => lasso.cycle.iter().max().map(|m| m % 2 == 0).unwrap_or(false),
        GoalExpr::Count(c, k) => match lasso.count(*c) {
            None => true,
            Some(n) => n >= *k,
        },
        GoalExpr::And(a, b) => eval_lasso(a, lasso) && eval_lasso(b, lasso),
        GoalExpr::Or(a, b) => eval_lasso(a, lasso) || eval_lasso(b, lasso),
        GoalExpr::Not(a) => !eval_lasso(a, lasso),
        GoalExpr::True => true,
        GoalExpr::False => false,
    }
}

/// Convenience: evaluate a game lasso directly.
pub fn eval_game_lasso(goal: &GoalExpr, game: &Game, lasso: &Lasso) -> bool {
    eval_lasso(goal, &ColorLasso::of(game, lasso))
}

/// Three-valued classification flag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Three {
    Yes,
    No,
    Unknown,
}

/// Which dedicated solver, if any, handles the goal adversarially.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SolverClass {
    Reachability,
    Safety,
    Buchi,
    CoBuchi,
    Parity,
    Composite,
}

/// Structural classification of a goal.
///
/// A goal is shrinkable when dropping the first color of a winning word
/// keeps it winning, extensible when prepending any color does, and
/// prefix-independent when both hold. The flags are computed by a
/// conservative algebra: `Unknown` never lies, it only gives up.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct GoalClass {
    pub shrinkable: Three,
    pub extensible: Three,
    pub prefix_independent: Three,
    pub solver_class: SolverClass,
}

pub fn classify(goal: &GoalExpr) -> GoalClass {
    let (shrinkable, extensible) = flags(goal);
    let prefix_independent = match (shrinkable, extensible) {
        (Three::Yes, Three::Yes) => Three::Yes,
        (Three::No, _) | (_, Three::No) => Three::No,
        _ => Three::Unknown,
    };
    let solver_class = match goal {
        GoalExpr::Ev(_) => SolverClass::Reachability,
        GoalExpr::Safe(_) => SolverClass::Safety,
        GoalExpr::Buchi(_) => SolverClass::Buchi,
        GoalExpr::CoBuchi(_) => SolverClass::CoBuchi,
        GoalExpr::Parity => SolverClass::Parity,
        _ => SolverClass::Composite,
    };
    GoalClass {
        shrinkable,
        extensible,
        prefix_independent,
        solver_class,
    }
}

fn flags(goal: &GoalExpr) -> (Three, Three) {
    match goal {
        GoalExpr::Buchi(_) | GoalExpr::CoBuchi(_) | GoalExpr::Parity => (Three::Yes, Three::Yes),
        GoalExpr::True | GoalExpr::False => (Three::Yes, Three::Yes),
        GoalExpr::Ev(_) | GoalExpr::Count(_, _) => (Three::No, Three::Yes),
        GoalExpr::Safe(_) => (Three::Yes, Three::No),
        GoalExpr::First(_) => (Three::No, Three::No),
        GoalExpr::And(a, b) | GoalExpr::Or(a, b) => {
            let (sa, ea) = flags(a);
            let (sb, eb) = flags(b);
            let both = |x: Three, y: Three| {
                if x == Three::Yes && y == Three::Yes {
                    Three::Yes
                } else {
                    Three::Unknown
                }
            };
            (both(sa, sb), both(ea, eb))
        }
        GoalExpr::Not(a) => match flags(a) {
            // complement of a prefix-independent set is prefix-independent
            (Three::Yes, Three::Yes) => (Three::Yes, Three::Yes),
            _ => (Three::Unknown, Three::Unknown),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn lasso(prefix: &[Color], cycle: &[Color]) -> ColorLasso {
        ColorLasso::new(prefix.to_vec(), cycle.to_vec())
    }

    #[test]
    fn atoms_on_small_lassos() {
        let w = lasso(&[0, 0], &[1, 2]);
        assert!(eval_lasso(&GoalExpr::First(0), &w));
        assert!(eval_lasso(&GoalExpr::Ev(2), &w));
        assert!(!eval_lasso(&GoalExpr::Ev(3), &w));
        assert!(eval_lasso(&GoalExpr::Buchi(1), &w));
        assert!(!eval_lasso(&GoalExpr::Buchi(0), &w));
        assert!(!eval_lasso(&GoalExpr::CoBuchi(1), &w));
        assert!(eval_lasso(&GoalExpr::CoBuchi(7), &lasso(&[1], &[7])));
        assert!(eval_lasso(&GoalExpr::Parity, &w));
        assert!(!eval_lasso(&GoalExpr::Parity, &lasso(&[], &[1])));
        assert!(eval_lasso(
            &GoalExpr::Safe(BTreeSet::from([0, 1, 2])),
            &w
        ));
        assert!(!eval_lasso(&GoalExpr::Safe(BTreeSet::from([0, 1])), &w));
    }

    #[test]
    fn count_on_lassos() {
        // cycle contains the color: infinitely many occurrences
        assert!(eval_lasso(&GoalExpr::Count(1, 5), &lasso(&[], &[0, 1])));
        // only prefix occurrences count otherwise
        assert!(eval_lasso(&GoalExpr::Count(1, 2), &lasso(&[1, 1], &[0])));
        assert!(!eval_lasso(&GoalExpr::Count(1, 2), &lasso(&[1], &[0])));
    }

    #[test]
    fn count_play_with_two_ones() {
        // colors 0 0 1 1 0^w : at least two occurrences of color 1
        let w = lasso(&[0, 0, 1, 1], &[0]);
        assert!(eval_lasso(&GoalExpr::Count(1, 2), &w));
    }

    #[test]
    fn not_is_complement() {
        let goals = [
            GoalExpr::First(1),
            GoalExpr::Buchi(0),
            GoalExpr::Count(1, 2),
            GoalExpr::and(GoalExpr::Ev(1), GoalExpr::Safe(BTreeSet::from([0, 1]))),
        ];
        let w = lasso(&[0, 1], &[0, 2]);
        for g in goals {
            assert_eq!(
                eval_lasso(&GoalExpr::not(g.clone()), &w),
                !eval_lasso(&g, &w)
            );
        }
    }

    #[test]
    fn classify_atoms() {
        let c = classify(&GoalExpr::Buchi(1));
        assert_eq!(c.prefix_independent, Three::Yes);
        assert_eq!(c.solver_class, SolverClass::Buchi);

        let c = classify(&GoalExpr::and(GoalExpr::First(1), GoalExpr::CoBuchi(2)));
        assert_ne!(c.prefix_independent, Three::Yes);
        assert_eq!(c.solver_class, SolverClass::Composite);

        let c = classify(&GoalExpr::not(GoalExpr::Buchi(1)));
        assert_eq!(c.prefix_independent, Three::Yes);

        assert_eq!(classify(&GoalExpr::Ev(0)).solver_class, SolverClass::Reachability);
        assert_eq!(
            classify(&GoalExpr::Safe(BTreeSet::from([0]))).solver_class,
            SolverClass::Safety
        );
    }

    fn random_goal(rng: &mut ChaCha8Rng, depth: u32) -> GoalExpr {
        let pick = if depth == 0 { rng.gen_range(0..7) } else { rng.gen_range(0..10) };
        match pick {
            0 => GoalExpr::First(rng.gen_range(0..3)),
            1 => GoalExpr::Ev(rng.gen_range(0..3)),
            2 => {
                let set: BTreeSet<Color> = (0..3).filter(|_| rng.gen_bool(0.6)).collect();
                GoalExpr::Safe(set)
            }
            3 => GoalExpr::Buchi(rng.gen_range(0..3)),
            4 => GoalExpr::CoBuchi(rng.gen_range(0..3)),
            5 => GoalExpr::Parity,
            6 => GoalExpr::Count(rng.gen_range(0..3), rng.gen_range(1..3)),
            7 => GoalExpr::and(random_goal(rng, depth - 1), random_goal(rng, depth - 1)),
            8 => GoalExpr::or(random_goal(rng, depth - 1), random_goal(rng, depth - 1)),
            _ => GoalExpr::not(random_goal(rng, depth - 1)),
        }
    }

    fn enumerate_words(max_len: usize, colors: Color) -> Vec<ColorLasso> {
        // every prefix/cycle split of every word up to max_len
        let mut out = Vec::new();
        let mut words: Vec<Vec<Color>> = vec![vec![]];
        for _ in 0..max_len {
            let mut next = Vec::new();
            for w in &words {
                for c in 0..colors {
                    let mut w2 = w.clone();
                    w2.push(c);
                    next.push(w2);
                }
            }
            for w in &next {
                for split in 0..w.len() {
                    out.push(ColorLasso::new(w[..split].to_vec(), w[split..].to_vec()));
                }
            }
            words = next;
        }
        out
    }

    #[test]
    fn eval_agrees_on_rotation_and_unrolling() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let words = enumerate_words(4, 3);
        for _ in 0..60 {
            let g = random_goal(&mut rng, 2);
            for w in &words {
                let v = eval_lasso(&g, w);
                // rotate the cycle one step into the prefix
                let mut prefix = w.prefix.clone();
                prefix.push(w.cycle[0]);
                let mut cycle = w.cycle[1..].to_vec();
                cycle.push(w.cycle[0]);
                assert_eq!(v, eval_lasso(&g, &ColorLasso::new(prefix, cycle)), "rotation changed verdict for {g} on {w:?}");
                // double the cycle
                let mut doubled = w.cycle.clone();
                doubled.extend_from_slice(&w.cycle);
                assert_eq!(v, eval_lasso(&g, &ColorLasso::new(w.prefix.clone(), doubled)));
            }
        }
    }

    #[test]
    fn classify_is_sound_on_short_words() {
        // Brute-force check of the shrinkable/extensible verdicts: whenever
        // the algebra answers Yes, no short counterexample may exist.
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let words = enumerate_words(4, 3);
        for _ in 0..80 {
            let g = random_goal(&mut rng, 2);
            let flags = classify(&g);
            for w in &words {
                for c in 0..3 {
                    let mut prefix = vec![c];
                    prefix.extend_from_slice(&w.prefix);
                    let extended = ColorLasso::new(prefix, w.cycle.clone());
                    let long = eval_lasso(&g, &extended);
                    let short = eval_lasso(&g, w);
                    if flags.shrinkable == Three::Yes && long {
                        assert!(short, "shrinkable=yes refuted for {g}");
                    }
                    if flags.extensible == Three::Yes && short {
                        assert!(long, "extensible=yes refuted for {g}");
                    }
                }
            }
        }
    }
}
