//! Construction and analysis of distance-regular graphs.
//!
//! The pipeline runs from a [`Graph`] through exact all-pairs distances
//! ([`DistanceData`]), the intersection numbers `p^h_{ij}`
//! ([`IntersectionData`]), the primitive idempotents and dual eigenvalue
//! sequences of the Bose–Mesner algebra ([`SpectralData`]), to the
//! Q-polynomial deciders in [`qpoly`] and the connectivity certificates in
//! [`subconstituent`].

pub mod analysis;
pub mod catalogue;
pub mod distance;
pub mod error;
pub mod families;
pub mod graph;
pub mod graph6;
pub mod invariants;
pub mod iso;
pub mod qpoly;
pub mod spectral;
pub mod subconstituent;

pub use distance::DistanceData;
pub use error::Error;
pub use families::FamilySpec;
pub use graph::Graph;
pub use invariants::{check_distance_regular, classify, IntersectionData};
pub use spectral::SpectralData;
