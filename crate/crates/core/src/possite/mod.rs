//! Finite poset sites with the up-set topology and sheaves on them.

mod complex;
mod constructions;
pub mod models;
mod sheaf;
mod site;

pub use complex::{induced_on_cohomology, push_cochain, site_complex, unnormalized_site_complex, SiteCochain, SiteComplex};
pub use constructions::{
    contracted_product, evaluation_morphism, internal_hom_torsor, invariants_sheaf, pushforward, stalkwise_local_vanishing,
    Cover, LocalVanishingReport,
};
pub use sheaf::{EquivariantSheaf, GTorsorCocycle, Sections, SheafMorphism};
pub use site::{MonotoneMap, PosetSite};

use crate::abgroup::AbGroupError;
use crate::gcoh::GcohError;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SiteError {
    #[error("point index {index} out of range")]
    PointIndex { index: usize },
    #[error("unknown point {name:?}")]
    UnknownPoint { name: String },
    #[error("duplicate point {name:?}")]
    DuplicatePoint { name: String },
    #[error("order is not reflexive at {point}")]
    NotReflexive { point: String },
    #[error("{a} <= {b} and {b} <= {a} for distinct points")]
    NotAntisymmetric { a: String, b: String },
    #[error("{a} <= {b} <= {c} but not {a} <= {c}")]
    NotTransitive { a: String, b: String, c: String },
    #[error("{a} and {b} are not comparable as {a} < {b}")]
    NotComparable { a: String, b: String },
    #[error("{label:?} is not a strict chain")]
    NotAChain { label: String },
    #[error("value on {label} has {found} coordinates, expected {expected}")]
    ValueLength { label: String, expected: usize, found: usize },
    #[error("set is not up-closed: contains {a} but not {b} >= {a}")]
    NotUpClosed { a: String, b: String },
    #[error("map is not monotone on {a} <= {b}")]
    NotMonotone { a: String, b: String },
    #[error("expected {expected} stalks, found {found}")]
    StalkCount { expected: usize, found: usize },
    #[error("restriction {a}<={b} is missing")]
    RestrictionMissing { a: String, b: String },
    #[error("restriction {a}<={b}: {source}")]
    Restriction { a: String, b: String, source: AbGroupError },
    #[error("restrictions are not functorial along {a} <= {b} <= {c}")]
    Functoriality { a: String, b: String, c: String },
    #[error("action table has the wrong shape")]
    ActionShape,
    #[error("action at {point}: {source}")]
    Action { point: String, source: GcohError },
    #[error("restriction {a}<={b} does not commute with the action of element {g}")]
    Equivariance { a: String, b: String, g: usize },
    #[error("morphism does not commute with restriction {a}<={b}")]
    MorphismRestriction { a: String, b: String },
    #[error("morphism does not commute with the action of element {g} at {point}")]
    MorphismAction { point: String, g: usize },
    #[error("objects live on different sites")]
    SiteMismatch,
    #[error("objects carry different groups")]
    GroupMismatch,
    #[error("coefficient sheaf must carry the trivial action")]
    NontrivialCoefficients,
    #[error("transitions violate the cocycle law on {a} <= {b} <= {c}")]
    TorsorCocycle { a: String, b: String, c: String },
    #[error("deck map of element {g} is not an order automorphism")]
    DeckNotAutomorphism { g: usize },
    #[error("deck map of element {g} moves {point} to a different fibre")]
    DeckNotOverMap { g: usize, point: String },
    #[error("deck maps are not an action at ({g}, {h})")]
    DeckNotAction { g: usize, h: usize },
    #[error("sheaf is not invariant under deck element {g} at {point}")]
    NotDeckInvariant { g: usize, point: String },
    #[error("chosen lifts do not lie over their points")]
    BadLift,
    #[error("map is not a covering over {a} <= {b}")]
    NotACovering { a: String, b: String },
}
