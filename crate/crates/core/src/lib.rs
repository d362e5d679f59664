//! Rigorous Monte-Carlo confidence intervals for percolation thresholds on
//! the simple cubic lattice.
//!
//! The crate is organised around the pieces of the certification pipeline:
//!
//! * [`lattice`] builds block and double-cube geometries and draws seeded,
//!   threshold-coupled occupancy samples.
//! * [`cluster`] labels open clusters with a union-find and answers
//!   "unique largest cluster" queries.
//! * [`events`] detects the two block events: two disjoint open arms from the
//!   centre of a block to its surface (lower bound) and uniquely joined
//!   largest clusters in a double cube (upper bound). [`oracle`] holds slow,
//!   independent reference detectors for small instances.
//! * [`upsilon`], [`transfer`] and [`certificate`] reproduce the exact
//!   integer argument that blocks open with probability below 3/100 cannot
//!   percolate.
//! * [`stats`] does exact binomial tail arithmetic and certification plans.
//! * [`runner`] orchestrates seeded, resumable experiments and renders the
//!   final confidence interval.
//!
//! Runnable walkthroughs of each capability live under `examples/`.

pub mod certificate;
pub mod cluster;
pub mod error;
pub mod events;
pub mod lattice;
pub mod oracle;
pub mod runner;
pub mod stats;
pub mod symmetry;
pub mod transfer;
pub mod upsilon;

pub use error::{Error, Result};
pub use lattice::{BlockGeometry, Grid, Kind, OccupancySample, RectGeometry, Region};
