//! Exact path-width computation.
//!
//! A path decomposition is kept as the sequence of introduce/forget events it
//! performs. Given any valid decomposition of width `l`, [`reducer`] runs a
//! dynamic program over compressed *skeletons* of partial decompositions and
//! decides whether the graph has path-width at most `k`, producing a witness
//! when it does. [`pipeline`] supplies the initial decomposition recursively,
//! contracting a large matching or stripping simplicial vertices from the
//! augmented graph, and then lets the reducer make it exact.
//!
//! [`oracle`] holds brute-force ground truth (vertex separation over subsets
//! and plain enumeration of decompositions) that shares no code with the
//! dynamic program.
//!
//! The crate is `no_std` with `alloc`. The `parallel` feature pulls in rayon
//! and evaluates each reducer layer in parallel; results do not depend on it.

#![cfg_attr(not(feature = "std"), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod decomposition;
pub mod generate;
pub mod graph;
pub mod oracle;
pub mod pipeline;
pub mod reducer;
pub mod skeleton;

pub use decomposition::{Event, PathDecomposition, Tag, Violation};
pub use graph::{ContractionMap, Graph, GraphError, Matching};
pub use pipeline::{solve, SolveConfig, SolveError, SolveTrace};
pub use reducer::{decrease_pathwidth, min_pathwidth_given, Mode, ReducerConfig, ReducerReport, Strategy};
pub use skeleton::{Skeleton, SimplifyRule};

/// Vertex identifier. Graphs always use `0..n`.
pub type Vertex = usize;
