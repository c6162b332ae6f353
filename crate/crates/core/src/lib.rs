//! Exact enumeration of colorings of `[n]`, its subsets and `Z_n` that avoid
//! rainbow arithmetic progressions, together with the closed forms they are
//! checked against.
//!
//! - [`numbers`]: structures, progressions, primality and multiplicative order.
//! - [`colorings`]: colorings, templates, rainbow detection, `R(P)` and the
//!   rainbow hypergraph's degree statistics.
//! - [`search`]: the brute-force oracle (counts, exact-color counts,
//!   anti-van der Waerden numbers, pair statistics).
//! - [`formulas`]: closed-form counts and bounds.
//! - [`orbits`]: doubling/negation orbits of `Z_p`.

pub mod colorings;
pub mod error;
pub mod formulas;
pub mod numbers;
pub mod orbits;
pub mod search;

pub use error::{Error, Result};
pub use numbers::{ApTriple, Structure, StructureKind};
pub use search::{CountReport, Method, SearchConfig};
