//! Keeps the book honest: each chapter of `book/src` is included as a doc
//! comment on an empty module, so `cargo test --doc -p cghist-guide`
//! compiles and runs every fenced code block exactly as printed. One
//! module per chapter, so a failure points at the chapter it came from.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/states-and-grids.md")]
pub mod states_and_grids {}

#[doc = include_str!("../../../book/src/propagators.md")]
pub mod propagators {}

#[doc = include_str!("../../../book/src/decoherence-functional.md")]
pub mod decoherence_functional {}

#[doc = include_str!("../../../book/src/closed-forms.md")]
pub mod closed_forms {}

#[doc = include_str!("../../../book/src/oracles.md")]
pub mod oracles {}

#[doc = include_str!("../../../book/src/command-line.md")]
pub mod command_line {}
