//! The user guide, compiled as documentation so `cargo test --doc` runs
//! every code snippet in the book.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/diagrams.md")]
pub mod diagrams {}

#[doc = include_str!("../../../book/src/bracket.md")]
pub mod bracket_chapter {}

#[doc = include_str!("../../../book/src/moves.md")]
pub mod moves_chapter {}

#[doc = include_str!("../../../book/src/obstruction.md")]
pub mod obstruction_chapter {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli_chapter {}
