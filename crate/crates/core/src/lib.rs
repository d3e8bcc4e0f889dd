//! Invariants of reductive groups presented by root data with a finite
//! Galois twist: character groups, Picard groups, fundamental groups and the
//! two-term dual fundamental complex, together with the exact sequences that
//! relate them.
//!
//! The crate is layered bottom-up:
//!
//! * [`exactalg`]: Hermite/Smith normal forms, integer solving, kernels.
//! * [`abgrp`]: finitely generated abelian groups as cokernel presentations.
//! * [`gammamod`]: modules over a finite group and their group cohomology.
//! * [`homcx`]: bounded complexes, cones, truncations, long exact sequences.
//! * [`rootdata`]: root data, the pairing map and the basic invariants.
//! * [`tres`]: resolutions by tori, the dual fundamental complex and its
//!   exact sequences.
//! * [`cech`]: the cosimplicial complex `F(X) + F(G)^i` and its homotopy.
//! * [`catalogio`]: the shipped catalog, fixtures and result records.

pub mod abgrp;
pub mod catalogio;
pub mod cech;
pub mod error;
pub mod exactalg;
pub mod gammamod;
pub mod homcx;
pub mod report;
pub mod rootdata;
pub mod tres;

pub use abgrp::{AbHom, FgAbelianGroup, GroupElement, Invariants};
pub use error::{Error, Result};
pub use exactalg::IntMatrix;
pub use gammamod::{FiniteGroup, GammaHom, GammaModule};
pub use homcx::{BoundedComplex, ChainMap};
pub use rootdata::{CatalogSpec, ReductiveDatum, RootDatum};
pub use tres::{SesData, TResolutionData};
