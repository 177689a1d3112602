//! Toolkit for lattice sphere coverings at desk scale (dimensions up to ~8):
//! robust-covering certification, Monte Carlo estimation of uncovered
//! density, and the randomized dimension-lifting construction that builds
//! higher-dimensional coverings out of low-dimensional robust ones.

pub mod constants;
pub mod density;
pub mod error;
pub mod io;
pub mod lattice;
pub mod lemmas;
pub mod lift;
pub mod robust;

pub use density::{DensityEstimate, ProductBody};
pub use error::{Error, Result};
pub use lattice::{Lattice, LatticePoint, RadiusBracket};
pub use lift::{LiftedLattice, PipelineConfig, PipelineResult, RobustCovering};
pub use robust::{Parallelepiped, RobustnessCertificate, Verdict};
