//! Gene-pool optimal mixing (GOMEA), the (1+1) EA and a (mu+1) GA with
//! deterministic crowding on concatenated trap functions.
//!
//! The crate is organized bottom-up:
//!
//! * [`bits`] and [`rng`]: genomes and seeded random streams;
//! * [`problems`]: standard, generalized and tailed traps, evaluation
//!   counting, optimal regions and `p*`;
//! * [`fos`]: family-of-subsets linkage models;
//! * [`algorithms`]: the three search algorithms;
//! * [`bounds`]: closed-form runtime bounds and population sizes;
//! * [`harness`]: initializers, replicated experiments and CSV output;
//! * [`cli`]: the `gomea-trap` command-line front end.

pub mod algorithms;
pub mod bits;
pub mod bounds;
pub mod cli;
pub mod error;
pub mod fos;
pub mod harness;
pub mod problems;
pub mod rng;

pub use bits::BitString;
pub use error::{Error, Result};
pub use fos::{truthful_mp_fos, Fos};
pub use problems::{ProblemInstance, Shape, TrapParams};
pub use rng::RandomStream;
