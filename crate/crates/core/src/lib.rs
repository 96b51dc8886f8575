//! Exact and certified computations around real C*-algebras: character
//! tables and types of finite-group representations, real Wedderburn
//! decompositions, graded KO/KU/KSp/KSC calculus, cyclic group cohomology,
//! simplicial Real spaces and their Brauer groups, rank-one compact groups,
//! and an orientifold duality catalog.

pub mod catalog;
pub mod chartab;
pub mod cyccoh;
pub mod groups;
pub mod intlinalg;
pub mod kcalc;
pub mod multiplicity;
pub mod ratlinalg;
pub mod realrep;
pub mod realspace;
pub mod weyl;

pub use multiplicity::Multiplicity;

/// Any error raised by the library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Linalg(#[from] intlinalg::LinalgError),
    #[error(transparent)]
    Group(#[from] groups::GroupError),
    #[error(transparent)]
    CharTable(#[from] chartab::CharTableError),
    #[error(transparent)]
    RealRep(#[from] realrep::RealRepError),
    #[error(transparent)]
    K(#[from] kcalc::KError),
    #[error(transparent)]
    Cyclic(#[from] cyccoh::CycError),
    #[error(transparent)]
    Space(#[from] realspace::SpaceError),
    #[error(transparent)]
    Weyl(#[from] weyl::WeylError),
    #[error(transparent)]
    Catalog(#[from] catalog::CatalogError),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
