//! The user guide, one module per chapter.
//!
//! The chapter sources live in `book/src` at the repository root and double
//! as an mdBook; including them here makes every code example in the guide
//! a runnable doc test.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/games-and-strategies.md")]
pub mod games_and_strategies {}

#[doc = include_str!("../../../book/src/goals.md")]
pub mod goals {}

#[doc = include_str!("../../../book/src/winning-criteria.md")]
pub mod winning_criteria {}

#[doc = include_str!("../../../book/src/admissible-strategies.md")]
pub mod admissible_strategies {}

#[doc = include_str!("../../../book/src/stochastic-values.md")]
pub mod stochastic_values {}

#[doc = include_str!("../../../book/src/oracle-testing.md")]
pub mod oracle_testing {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
