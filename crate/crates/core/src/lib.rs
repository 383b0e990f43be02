//! Finite T0 spaces as primitive-ideal spectra of AF algebras.
//!
//! The crate covers the whole round trip at desk scale: posets and their
//! topology ([`poset`]), quotients of covered spaces ([`quotient`]), Bratteli
//! diagrams and their ideal theory ([`bratteli`]), the construction of a
//! diagram from a poset ([`construction`]), symbolic operator algebras
//! ([`algebra`]), the Behncke–Leptin classification by defectors
//! ([`behncke_leptin`]) and order-complex homology ([`homology`]).

pub mod algebra;
pub mod behncke_leptin;
pub mod bratteli;
pub mod config;
pub mod construction;
pub mod error;
pub mod generate;
pub mod homology;
pub mod poset;
pub mod quotient;
pub mod report;
pub mod text;

pub use error::{Error, Result};
pub use poset::{ElemSet, Poset, SubsetFamily};
