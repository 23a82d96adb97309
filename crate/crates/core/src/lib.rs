//! Cover calculus on finite metric spaces.
//!
//! Every construction here comes with a verifier that re-checks its output
//! from the definitions: stars, multiplicity, Lebesgue numbers, disjointness,
//! coarsely n-to-1 certificates, Ostrand colorings and chain metrics.
//!
//! Everything is finite, so asymptotic statements are swept over explicit
//! scales. Parallel evaluation (feature `parallel`, on by default) always
//! produces the same results as sequential evaluation.

pub mod chain;
pub mod cli;
pub mod cover;
pub mod dimension;
pub mod disjointness;
pub mod error;
pub mod fuzz;
pub mod generate;
pub mod io;
pub mod maps;
pub mod metrization;
pub mod par;
pub mod space;

pub use chain::BasisChain;
pub use cover::Cover;
pub use error::{Error, Result};
pub use space::FiniteMetricSpace;
