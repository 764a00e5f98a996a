//! GraphViz export of game graphs.

use crate::game::{Game, Player};

/// Renders the game as a GraphViz digraph: circles for Player-1 states,
/// boxes for Player-2 states, the color as a label suffix. Output is
/// deterministic: states and edges come out in index order.
pub fn render_dot(game: &Game) -> String {
    let mut out = String::from("digraph game {\n");
    for s in game.states() {
        let shape = match game.owner(s) {
            Player::One => "circle",
            Player::Two => "box",
        };
        out.push_str(&format!(
            "  \"{name}\" [shape={shape}, label=\"{name} [{color}]\"];\n",
            name = game.name(s),
            color = game.color(s)
        ));
    }
    for s in game.states() {
        for &t in game.successors(s) {
            out.push_str(&format!("  \"{}\" -> \"{}\";\n", game.name(s), game.name(t)));
        }
    }
    out.push_str("}\n");
    out
}
