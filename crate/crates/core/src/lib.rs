pub mod combinatorics;
pub mod complex;
pub mod error;
pub mod expansion;
pub mod linalg;
pub mod local_spectral;
pub mod level_set;
pub mod operator;
pub mod strips;
pub mod unique_games;
pub mod walk;

pub use complex::{Complex, Face, Link};
pub use error::{HdxError, Result};
pub use operator::Operator;
