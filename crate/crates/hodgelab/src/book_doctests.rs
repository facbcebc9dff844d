//! Runs every Rust code block in the book as a doc-test, keeping the guide
//! and the library in sync. `cargo test --doc` exercises them; mdBook renders
//! the same files.

#[doc = include_str!("../../../book/src/introduction.md")]
mod introduction {}

#[doc = include_str!("../../../book/src/hilbert-complexes.md")]
mod hilbert_complexes {}

#[doc = include_str!("../../../book/src/hodge-decomposition.md")]
mod hodge_decomposition {}

#[doc = include_str!("../../../book/src/cochain-projections.md")]
mod cochain_projections {}

#[doc = include_str!("../../../book/src/two-rods.md")]
mod two_rods {}

#[doc = include_str!("../../../book/src/error-estimators.md")]
mod error_estimators {}

#[doc = include_str!("../../../book/src/cli.md")]
mod cli {}
