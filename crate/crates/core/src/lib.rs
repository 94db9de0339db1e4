//! Approximate two-level logic synthesis under an error-rate constraint.
//!
//! A multi-output SOP cover is rewritten by inserting expanded cubes and
//! removing cubes, trading a bounded number of erroneous input combinations
//! (EICs) for fewer literals, then cleaned up by an error-free minimizer.

pub mod cover;
pub mod cube;
pub mod engine;
pub mod error;
pub mod error_model;
pub mod insertion;
pub mod minimize;
pub mod pla;
pub mod removal;
pub mod solution;

pub use cover::Cover;
pub use cube::{Cube, Literal, LiteralRule, Minterm};
pub use engine::{approximate, approximate_noe, Approximation, EngineConfig};
pub use error::{Error, Result};
pub use error_model::{exhaustive_error_rate, noe_from_er, sampled_error_rate, EicSet};
pub use minimize::{minimize, Minimizer, MinimizerPath};
pub use pla::{parse_pla, parse_pla_with, write_pla, ParseOptions, PlaDocument};
pub use solution::{update_solution, Solution};
