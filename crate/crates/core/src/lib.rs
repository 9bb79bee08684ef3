//! Exact computations with Koszul complexes `K_n(m)` over `Q[t1..tn]` and
//! `F2[t1..tn]`, unital chain maps `K_n(m) -> K_n(0)`, their ranks over the
//! fraction field, and instance checks of the injectivity certificates that
//! give the lower bound `rk >= 2(n + floor(n/3))`.

pub mod bareiss;
pub mod cancellation;
pub mod certificates;
pub mod chain_map;
pub mod error;
pub mod field;
pub mod graph;
pub mod hb_model;
pub mod koszul;
pub mod linalg;
pub mod par;
pub mod poly;
pub mod sampling;

pub use chain_map::{ChainMap, Grading, Homotopy, RankMethod, RankOptions};
pub use error::{Error, Result};
pub use koszul::{ComplexDescriptor, IndexSet, KElem};
pub use par::Execution;
pub use poly::{Char, GradedDegree, Mono, Poly};
