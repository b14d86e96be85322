//! Persistent homology transform (PHT) of embedded simplicial complexes.
//!
//! The crate is organized bottom-up:
//!
//! * [`complex`]: embedded simplicial complexes, subcomplexes, covers, and
//!   directional sublevel sets.
//! * [`persistence`]: lower-star filtrations, barcodes over the two-element
//!   field, Betti curves and the bottleneck distance.
//! * [`pht`]: direction grids, the transform itself, a bottleneck-based
//!   distance between transforms and SVG heatmaps.
//! * [`glue`]: reassembling the transform of a shape from a closed cover,
//!   either through the degree-0 Čech complex or through the full
//!   Čech–simplicial double complex.
//! * [`sample`]: point sampling on model manifolds, Čech complexes of ball
//!   unions and the approximation report.

pub mod complex;
pub mod glue;
pub mod linalg;
pub mod persistence;
pub mod pht;
pub mod sample;
mod union_find;

pub use complex::{Cover, Direction, EmbeddedComplex, Subcomplex};
pub use persistence::{Barcode, Filtration, Interval};
pub use pht::{DirectionGrid, PhtSample};
