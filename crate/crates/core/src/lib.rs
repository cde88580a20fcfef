//! Classification of cubic crystal neighborhoods (BCC vs FCC) from the
//! persistent homology of their Vietoris–Rips filtrations.
//!
//! The pipeline runs in four stages:
//!
//! 1. [`pointcloud`] and [`corpus`] build noisy, sparse lattice samples and
//!    cut them into atomic neighborhoods.
//! 2. [`rips`] computes persistence diagrams in dimensions 0 and 1.
//! 3. [`metrics`] compares diagrams with the cardinality-penalized distance
//!    `d_p^c`, or with Wasserstein and bottleneck distances.
//! 4. [`classifier`] turns distances to labeled references into features
//!    and cross-validates a decision tree on them; [`stats`] models how the
//!    number of holes grows with the number of atoms.
//!
//! ```
//! use topoclass::metrics::{dpc_distance, DpcParams};
//! use topoclass::rips::PersistenceDiagram;
//!
//! let x = PersistenceDiagram::from_pairs(1, &[(0.0, 1.0)])?;
//! let y = PersistenceDiagram::from_pairs(1, &[(0.0, 1.0), (0.0, 2.0)])?;
//! let d = dpc_distance(&x, &y, &DpcParams::new(1.0, 0.5)?)?;
//! assert_eq!(d, 0.25);
//! # Ok::<(), topoclass::Error>(())
//! ```

pub mod classifier;
pub mod corpus;
pub mod error;
pub mod io;
pub mod metrics;
pub mod pointcloud;
pub mod rips;
pub mod stats;

pub use error::{Error, Result};
pub use pointcloud::{PointCloud, Structure};
pub use rips::{PersistenceDiagram, PersistencePair};

/// Chapters of the guide in `book/`, compiled so their examples stay
/// current.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/point-clouds.md")]
    mod point_clouds {}
    #[doc = include_str!("../../../book/src/rips.md")]
    mod rips {}
    #[doc = include_str!("../../../book/src/dpc.md")]
    mod dpc {}
    #[doc = include_str!("../../../book/src/cardinality.md")]
    mod cardinality {}
    #[doc = include_str!("../../../book/src/classification.md")]
    mod classification {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
