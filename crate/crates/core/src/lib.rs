//! Exact-arithmetic engine for the double complex of a finite groupoid
//! presentation: simplicial cochains on each nerve level, the two
//! differentials `d` and `∂`, the total differential `δ = (−1)^p d + ∂`,
//! and everything built on top of it — integral/rational/finite/circle
//! coefficient cohomology via Smith normal form, circle-bundle and gerbe
//! cocycles with their Chern and Dixmier–Douady classes, central
//! extensions, flatness and holonomy, prequantization, and Morita
//! comparisons between presentations.
//!
//! All arithmetic is exact (`BigInt`/`BigRational`); there is no floating
//! point anywhere. All containers are ordered so that reports and
//! generator choices are deterministic across runs.

pub mod cochain;
pub mod cohomology;
pub mod complex;
pub mod extension;
pub mod gerbe;
pub mod groupoid;
pub mod io;
pub mod matrix;
pub mod morita;
pub mod prequant;
pub mod ring;
pub mod snf;
pub mod space;
pub mod tau;

#[cfg(test)]
pub(crate) mod testkit;

pub use cochain::{Cochain, TotalCochain};
pub use cohomology::{CohomologyClass, CohomologyGroup};
pub use complex::{Simplex, SimplicialComplex, SimplicialMap, Vertex};
pub use gerbe::{BundleCocycle, GerbeCocycle, PseudoConnection, PseudoCurvature};
pub use groupoid::FiniteGroupoid;
pub use io::Workspace;
pub use morita::{Bitorsor, DegreeComparison, MoritaMorphism, MorphismKind};
pub use ring::Ring;
pub use snf::SmithDecomposition;
pub use space::{CoveredComplex, SemiSimplicialSpace, SpaceMap};
pub use tau::{tau_maps, TauReport};

/// Failure classes, separated so the command-line layer can map them to
/// distinct exit codes: parse (2), validation / unresolved reference (3),
/// mathematical failure (1).
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("validation error: {0}")]
    Validation(String),
    #[error("unresolved reference: {0}")]
    Unresolved(String),
    #[error("{0}")]
    Math(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn math(msg: impl Into<String>) -> Self {
        Error::Math(msg.into())
    }
    pub fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }
}
