//! Exact variable-order minimization for ordered binary decision diagrams
//! (OBDDs) and zero-suppressed decision diagrams (ZDDs).
//!
//! The crate is organized bottom-up:
//!
//! * [`boolfn`]: truth tables, the expression parser and restrictions.
//! * [`diagram`]: reduced diagrams for a fixed variable order.
//! * [`fs_engine`]: the subset dynamic program over folded truth tables.
//! * [`qsearch`]: minimum finding with exact classical simulation and
//!   query-complexity accounting.
//! * [`dnc`]: the divide-and-conquer drivers and their composition chain.
//! * [`params`]: complexity recurrences and the parameter solver.
//! * [`oracle`]: brute force over all `n!` orders.
//! * [`cli`]: the command-line front end.
//!
//! Variables are 0-based in the API (`x1` is variable `0`) and 1-based in
//! every user-facing text format.

pub mod boolfn;
pub mod cli;
pub mod diagram;
pub mod dnc;
pub mod error;
pub mod fs_engine;
pub mod oracle;
pub mod params;
pub mod qsearch;
pub mod subset;

pub use boolfn::{parse_expression, Assignment, TruthTable};
pub use diagram::{build_diagram, Diagram, DiagramKind, NodeRef, VariableOrder};
pub use dnc::{opt_obdd, opt_obdd_composed, DncConfig, DncLevel, DncStats};
pub use error::{Error, Result};
pub use fs_engine::{fold, fs_star, fs_star_truncated, initial_state, min_obdd_fs, FsState};
pub use qsearch::{find_min, QueryStats, SearchMode};

/// Variable index, 0-based.
pub type Var = usize;
