//! Point interactions in two and three dimensions.
//!
//! The s-wave continuum eigenfunctions of a free particle with a point
//! interaction at the origin are mixtures of the regular and irregular free
//! solutions. Demanding that eigenfunctions of different energies be
//! orthogonal fixes the mixing angle as a one-parameter family of functions
//! of the wavenumber. This crate evaluates those states, computes the
//! regularized overlaps that produce the orthogonality condition, solves the
//! condition numerically, builds the associated bound states and checks all
//! of it against finite-range wells taken to zero range.
//!
//! Units are `hbar = 2m = 1` everywhere, so `E = k^2`.

pub mod cli;
pub mod error;
pub mod oracle_well;
pub mod overlap;
pub mod quad;
pub mod roots;
pub mod specfun;
pub mod states;

pub use error::{Error, Result};
pub use oracle_well::{ConvergenceTable, LimitRow, SquareWell};
pub use overlap::{OverlapBreakdown, PhaseSolution, QuadratureConfig};
pub use specfun::{CylFamily, CylKind, CylOrder};
pub use states::{BoundState, Coupling, Dimension, Phase, ScatteringState};
