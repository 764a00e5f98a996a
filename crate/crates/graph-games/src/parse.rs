//! Text formats: game files and strategy files.
//!
//! A game file is line oriented: `state` declarations, `edge` declarations,
//! exactly one `goal` declaration, `#` comments and blank lines. Tokens are
//! separated by single spaces; tabs are rejected. A strategy file lists
//! `move` lines, optionally under a `memory` header that turns the strategy
//! into one over the memory expansion of the game.

use std::collections::BTreeSet;

use crate::game::{Color, Game, GameError, Player, PositionalStrategy, StateId};
use crate::goal::GoalExpr;
use crate::product::{expand, Expansion, MooreKind, MooreMachine};

/// A parse or semantic error with a 1-based position.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{line}:{column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

fn err<T>(line: usize, column: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError {
        line,
        column,
        message: message.into(),
    })
}

fn valid_name(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Splits a line into `(column, token)` pairs, enforcing single spaces.
fn tokens(line: &str, lineno: usize) -> Result<Vec<(usize, String)>, ParseError> {
    if let Some(at) = line.find('\t') {
        return err(lineno, at + 1, "tab character; use single spaces");
    }
    if let Some(at) = line.find('\r') {
        return err(lineno, at + 1, "carriage return; use plain newlines");
    }
    let mut out = Vec::new();
    let mut col = 1;
    for piece in line.split(' ') {
        if piece.is_empty() {
            return err(lineno, col, "tokens must be separated by single spaces");
        }
        out.push((col, piece.to_string()));
        col += piece.len() + 1;
    }
    Ok(out)
}

fn parse_nat(s: &str, line: usize, col: usize) -> Result<u32, ParseError> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return err(line, col, format!("expected a natural number, found `{s}`"));
    }
    s.parse::<u32>()
        .map_err(|_| ParseError {
            line,
            column: col,
            message: format!("number `{s}` is too large"),
        })
}

/// Recursive-descent goal parser over a single spaceless token.
struct ExprParser<'a> {
    text: &'a str,
    pos: usize,
    line: usize,
    base: usize,
}

impl<'a> ExprParser<'a> {
    fn col(&self) -> usize {
        self.base + self.pos
    }

    fn rest(&self) -> &'a str {
        &self.text[self.pos..]
    }

    fn eat(&mut self, c: char) -> Result<(), ParseError> {
        if self.rest().starts_with(c) {
            self.pos += c.len_utf8();
            Ok(())
        } else {
            err(self.line, self.col(), format!("expected `{c}`"))
        }
    }

    fn nat(&mut self) -> Result<u32, ParseError> {
        let digits: String = self.rest().chars().take_while(|c| c.is_ascii_digit()).collect();
        let col = self.col();
        if digits.is_empty() {
            return err(self.line, col, "expected a natural number");
        }
        self.pos += digits.len();
        parse_nat(&digits, self.line, col)
    }

    fn expr(&mut self) -> Result<GoalExpr, ParseError> {
        let word: String = self
            .rest()
            .chars()
            .take_while(|c| c.is_ascii_lowercase())
            .collect();
        let col = self.col();
        self.pos += word.len();
        match word.as_str() {
            "parity" => Ok(GoalExpr::Parity),
            "reach" | "ev" => {
                self.eat('(')?;
                let c = self.nat()?;
                self.eat(')')?;
                Ok(GoalExpr::Ev(c))
            }
            "buchi" => {
                self.eat('(')?;
                let c = self.nat()?;
                self.eat(')')?;
                Ok(GoalExpr::Buchi(c))
            }
            "cobuchi" => {
                self.eat('(')?;
                let c = self.nat()?;
                self.eat(')')?;
                Ok(GoalExpr::CoBuchi(c))
            }
            "first" => {
                self.eat('(')?;
                let c = self.nat()?;
                self.eat(')')?;
                Ok(GoalExpr::First(c))
            }
            "safe" => {
                self.eat('(')?;
                let mut set = BTreeSet::new();
                set.insert(self.nat()?);
                while self.rest().starts_with(',') {
                    self.pos += 1;
                    set.insert(self.nat()?);
                }
                self.eat(')')?;
                Ok(GoalExpr::Safe(set))
            }
            "count" => {
                self.eat('(')?;
                let c = self.nat()?;
                self.eat(',')?;
                let kcol = self.col();
                let k = self.nat()?;
                self.eat(')')?;
                if k == 0 {
                    return err(self.line, kcol, "count threshold must be at least 1");
                }
                Ok(GoalExpr::Count(c, k))
            }
            "and" | "or" => {
                self.eat('(')?;
                let a = self.expr()?;
                self.eat(',')?;
                let b = self.expr()?;
                self.eat(')')?;
                Ok(if word == "and" {
                    GoalExpr::and(a, b)
                } else {
                    GoalExpr::or(a, b)
                })
            }
            "not" => {
                self.eat('(')?;
                let a = self.expr()?;
                self.eat(')')?;
                Ok(GoalExpr::not(a))
            }
            _ => err(self.line, col, format!("unknown goal operator `{word}`")),
        }
    }
}

fn parse_goal_token(token: &str, line: usize, base: usize) -> Result<GoalExpr, ParseError> {
    let mut p = ExprParser {
        text: token,
        pos: 0,
        line,
        base,
    };
    let goal = p.expr()?;
    if p.pos != token.len() {
        return err(line, p.col(), "trailing characters after goal expression");
    }
    Ok(goal)
}

/// Parses a game file into a validated game and its goal.
pub fn parse_game(text: &str) -> Result<(Game, GoalExpr), ParseError> {
    let mut states: Vec<(String, Player, Color)> = Vec::new();
    let mut decl_line: Vec<usize> = Vec::new();
    let mut edges: Vec<(String, String, usize, usize)> = Vec::new();
    let mut goal: Option<GoalExpr> = None;
    let mut line_count = 0;
    for (i, raw) in text.split('\n').enumerate() {
        let lineno = i + 1;
        line_count = lineno;
        if raw.trim_end_matches('\r').is_empty() || raw.starts_with('#') {
            continue;
        }
        let toks = tokens(raw, lineno)?;
        match toks[0].1.as_str() {
            "state" => {
                if toks.len() != 4 {
                    return err(lineno, toks[0].0, "expected `state NAME player=P color=N`");
                }
                let (ncol, name) = (&toks[1].0, &toks[1].1);
                if !valid_name(name) {
                    return err(lineno, *ncol, format!("invalid state name `{name}`"));
                }
                if states.iter().any(|(n, _, _)| n == name) {
                    return err(lineno, *ncol, format!("duplicate state `{name}`"));
                }
                let (pcol, ptok) = (&toks[2].0, &toks[2].1);
                let player = match ptok.as_str() {
                    "player=1" => Player::One,
                    "player=2" => Player::Two,
                    _ => return err(lineno, *pcol, "expected `player=1` or `player=2`"),
                };
                let (ccol, ctok) = (&toks[3].0, &toks[3].1);
                let color = match ctok.strip_prefix("color=") {
                    Some(num) => parse_nat(num, lineno, ccol + 6)?,
                    None => return err(lineno, *ccol, "expected `color=N`"),
                };
                states.push((name.clone(), player, color));
                decl_line.push(lineno);
            }
            "edge" => {
                if toks.len() != 3 {
                    return err(lineno, toks[0].0, "expected `edge FROM TO`");
                }
                for (col, name) in &toks[1..=2] {
                    if !valid_name(name) {
                        return err(lineno, *col, format!("invalid state name `{name}`"));
                    }
                }
                edges.push((toks[1].1.clone(), toks[2].1.clone(), lineno, toks[1].0));
            }
            "goal" => {
                if toks.len() != 2 {
                    return err(lineno, toks[0].0, "expected `goal EXPR` with no spaces inside EXPR");
                }
                if goal.is_some() {
                    return err(lineno, toks[0].0, "more than one goal declaration");
                }
                goal = Some(parse_goal_token(&toks[1].1, lineno, toks[1].0)?);
            }
            other => {
                return err(
                    lineno,
                    toks[0].0,
                    format!("expected `state`, `edge`, `goal` or a `#` comment, found `{other}`"),
                )
            }
        }
    }
    let goal = match goal {
        Some(g) => g,
        None => return err(line_count.max(1), 1, "missing goal declaration"),
    };
    let find = |name: &str| states.iter().position(|(n, _, _)| n == name);
    let mut resolved: Vec<(StateId, StateId)> = Vec::new();
    let mut seen_edges: BTreeSet<(StateId, StateId)> = BTreeSet::new();
    for (from, to, lineno, col) in &edges {
        let Some(a) = find(from) else {
            return err(*lineno, *col, format!("unknown state `{from}`"));
        };
        let Some(b) = find(to) else {
            return err(*lineno, *col, format!("unknown state `{to}`"));
        };
        if !seen_edges.insert((a, b)) {
            return err(*lineno, *col, format!("duplicate edge {from} -> {to}"));
        }
        resolved.push((a, b));
    }
    for (s, (name, _, _)) in states.iter().enumerate() {
        if !resolved.iter().any(|&(a, _)| a == s) {
            return err(decl_line[s], 1, format!("blocking state `{name}` has no outgoing edge"));
        }
    }
    let game = match Game::build(states, resolved) {
        Ok(game) => game,
        Err(GameError::Invalid(defects)) => {
            return err(1, 1, format!("invalid game: {defects:?}"))
        }
        Err(other) => return err(1, 1, other.to_string()),
    };
    Ok((game, goal))
}

/// Renders a game and goal in the file grammar. Parsing the result yields
/// an identical game; constant goals (`true`/`false`) are not renderable.
pub fn render_game(game: &Game, goal: &GoalExpr) -> String {
    let mut out = String::new();
    for s in game.states() {
        out.push_str(&format!(
            "state {} player={} color={}\n",
            game.name(s),
            game.owner(s),
            game.color(s)
        ));
    }
    for s in game.states() {
        for &t in game.successors(s) {
            out.push_str(&format!("edge {} {}\n", game.name(s), game.name(t)));
        }
    }
    out.push_str(&format!("goal {goal}\n"));
    out
}

/// A strategy read from a file: positional, or a strategy over the memory
/// expansion of the game (total on the expansion's Player-1 states).
#[derive(Debug, Clone)]
pub enum ParsedStrategy {
    Positional(PositionalStrategy),
    Memory {
        moore: MooreMachine,
        expansion: Expansion,
        sigma: PositionalStrategy,
    },
}

enum RawMove {
    Plain(String, String, usize, usize),
    AtMemory(String, u32, String, usize, usize),
}

/// Parses a strategy file against `game`.
pub fn parse_strategy(text: &str, game: &Game) -> Result<ParsedStrategy, ParseError> {
    let mut moore: Option<(MooreMachine, usize)> = None;
    let mut moves: Vec<RawMove> = Vec::new();
    let mut line_count = 0;
    for (i, raw) in text.split('\n').enumerate() {
        let lineno = i + 1;
        line_count = lineno;
        if raw.trim_end_matches('\r').is_empty() || raw.starts_with('#') {
            continue;
        }
        let toks = tokens(raw, lineno)?;
        match toks[0].1.as_str() {
            "memory" => {
                if moore.is_some() {
                    return err(lineno, toks[0].0, "more than one memory declaration");
                }
                if !moves.is_empty() {
                    return err(lineno, toks[0].0, "memory declaration must precede moves");
                }
                let kind = match toks.get(1).map(|(_, t)| t.as_str()) {
                    Some("count") => {
                        if toks.len() != 4 {
                            return err(lineno, toks[0].0, "expected `memory count COLOR MAX`");
                        }
                        let color = parse_nat(&toks[2].1, lineno, toks[2].0)?;
                        let max = parse_nat(&toks[3].1, lineno, toks[3].0)?;
                        if max == 0 {
                            return err(lineno, toks[3].0, "memory bound must be at least 1");
                        }
                        MooreKind::Count { color, max }
                    }
                    Some("seen") => {
                        if toks.len() != 3 {
                            return err(lineno, toks[0].0, "expected `memory seen STATE`");
                        }
                        let name = &toks[2].1;
                        let Some(state) = game.state_by_name(name) else {
                            return err(lineno, toks[2].0, format!("unknown state `{name}`"));
                        };
                        MooreKind::Seen { state }
                    }
                    _ => return err(lineno, toks[0].0, "expected `memory count ...` or `memory seen ...`"),
                };
                moore = Some((MooreMachine { kind }, lineno));
            }
            "move" => {
                if toks.len() != 4 || toks[2].1 != "->" {
                    return err(lineno, toks[0].0, "expected `move FROM -> TO`");
                }
                let (scol, src) = (toks[1].0, toks[1].1.clone());
                let dst = toks[3].1.clone();
                if !valid_name(&dst) {
                    return err(lineno, toks[3].0, format!("invalid state name `{dst}`"));
                }
                match src.split_once('@') {
                    Some((name, mem)) => {
                        if !valid_name(name) {
                            return err(lineno, scol, format!("invalid state name `{name}`"));
                        }
                        let mem = parse_nat(mem, lineno, scol + name.len() + 1)?;
                        moves.push(RawMove::AtMemory(name.to_string(), mem, dst, lineno, scol));
                    }
                    None => {
                        if !valid_name(&src) {
                            return err(lineno, scol, format!("invalid state name `{src}`"));
                        }
                        moves.push(RawMove::Plain(src, dst, lineno, scol));
                    }
                }
            }
            other => {
                return err(
                    lineno,
                    toks[0].0,
                    format!("expected `memory`, `move` or a `#` comment, found `{other}`"),
                )
            }
        }
    }
    let eof = line_count.max(1);
    match moore {
        None => {
            let mut pairs: Vec<(StateId, StateId)> = Vec::new();
            for m in &moves {
                let RawMove::Plain(src, dst, lineno, col) = m else {
                    let RawMove::AtMemory(_, _, _, lineno, col) = m else {
                        unreachable!()
                    };
                    return err(*lineno, *col, "`state@memory` moves need a memory declaration");
                };
                let Some(a) = game.state_by_name(src) else {
                    return err(*lineno, *col, format!("unknown state `{src}`"));
                };
                let Some(b) = game.state_by_name(dst) else {
                    return err(*lineno, *col, format!("unknown state `{dst}`"));
                };
                if game.owner(a) != Player::One {
                    return err(*lineno, *col, format!("state `{src}` is not a Player-1 state"));
                }
                if !game.has_edge(a, b) {
                    return err(*lineno, *col, format!("no edge {src} -> {dst}"));
                }
                if pairs.iter().any(|&(s, _)| s == a) {
                    return err(*lineno, *col, format!("two moves for state `{src}`"));
                }
                pairs.push((a, b));
            }
            for s in game.states_of(Player::One) {
                if !pairs.iter().any(|&(a, _)| a == s) {
                    return err(eof, 1, format!("missing move for state `{}`", game.name(s)));
                }
            }
            let sigma = PositionalStrategy::new(game, Player::One, &pairs)
                .expect("checked pair by pair");
            Ok(ParsedStrategy::Positional(sigma))
        }
        Some((moore, _)) => {
            let expansion = expand(game, &moore);
            let mut pairs: Vec<(StateId, StateId)> = Vec::new();
            for m in &moves {
                let RawMove::AtMemory(src, mem, dst, lineno, col) = m else {
                    let RawMove::Plain(_, _, lineno, col) = m else { unreachable!() };
                    return err(*lineno, *col, "moves must use `state@memory` under a memory declaration");
                };
                let Some(a) = game.state_by_name(src) else {
                    return err(*lineno, *col, format!("unknown state `{src}`"));
                };
                let Some(b) = game.state_by_name(dst) else {
                    return err(*lineno, *col, format!("unknown state `{dst}`"));
                };
                if game.owner(a) != Player::One {
                    return err(*lineno, *col, format!("state `{src}` is not a Player-1 state"));
                }
                if !game.has_edge(a, b) {
                    return err(*lineno, *col, format!("no edge {src} -> {dst}"));
                }
                let Some(x) = expansion.find(a, *mem) else {
                    return err(*lineno, *col, format!("`{src}@{mem}` is not a reachable memory configuration"));
                };
                let m2 = moore.step(game, *mem, b);
                let y = expansion
                    .find(b, m2)
                    .expect("successor configuration exists in the expansion");
                if pairs.iter().any(|&(s, _)| s == x) {
                    return err(*lineno, *col, format!("two moves for `{src}@{mem}`"));
                }
                pairs.push((x, y));
            }
            for x in expansion.game.states_of(Player::One) {
                if !pairs.iter().any(|&(a, _)| a == x) {
                    let (s, mem) = expansion.pair(x);
                    return err(eof, 1, format!("missing move for `{}@{mem}`", game.name(s)));
                }
            }
            let sigma = PositionalStrategy::new(&expansion.game, Player::One, &pairs)
                .expect("checked pair by pair");
            Ok(ParsedStrategy::Memory {
                moore,
                expansion,
                sigma,
            })
        }
    }
}
