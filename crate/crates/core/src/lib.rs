//! Block designs whose varieties are the edges of a complete graph.
//!
//! * [`graph`]: `K_n` and the lexicographic edge numbering.
//! * [`subgraph`]: canonical path/cycle words and their streaming enumeration.
//! * [`design`]: designs as block multisets, exact parameters, verification.
//! * [`constructions`]: KP and KC designs, the `K_5` 3-design, pair-count witness.
//! * [`exploded`]: `j`-exploded designs.
//! * [`io`]: the design file format and bundled example designs.

pub mod arith;
pub mod block;
pub mod constructions;
pub mod design;
pub mod exploded;
pub mod graph;
pub mod io;
pub mod selftest;
pub mod subgraph;

pub use block::Block;
pub use constructions::{Family, DEFAULT_MAX_BLOCKS};
pub use design::{BalanceReport, Design, DesignParams, TDesignReport, Verdict};
