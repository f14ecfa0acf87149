//! Finite relation algebras and their networks.
//!
//! An algebra is given by its atoms, the converse map, the identity atoms
//! and the atom composition table ([`RelationAlgebra`]). On top of that the
//! crate provides
//!
//! - networks with path consistency and an atomic-refinement solver
//!   ([`network`]),
//! - finite square representations, model checking and table derivation
//!   ([`representation`]),
//! - the translation between networks and relational structures over the
//!   atom signature ([`structure`]),
//! - forbidden-substructure bounds for the atomic networks ([`bounds`]),
//! - the amalgamation property of atomic networks, checked exhaustively on
//!   2-point diagrams, and seeded growth of generic networks
//!   ([`amalgamation`]).

pub mod algebra;
pub mod amalgamation;
pub mod bounds;
mod canon;
pub mod cli;
pub mod corpus;
pub mod element;
pub mod error;
mod lexer;
pub mod network;
pub mod representation;
pub mod structure;

pub use algebra::{Law, RelationAlgebra, ValidationReport, Violation};
pub use amalgamation::{
    amalgamate, decide_amalgamation_property, enumerate_atomic_networks, grow_limit, AmalgamationDiagram,
    ApVerdict, DecideOptions, GrowOptions,
};
pub use bounds::{check_membership, generate_bounds, BoundSet, Family};
pub use element::Element;
pub use error::{Error, ParseError, ParseErrorKind, Result};
pub use network::{is_atomic, normalize, path_consistency, refine_solve, Network};
pub use representation::{derive_algebra, model_check, ConcreteRepresentation};
pub use structure::{net_to_struct, struct_to_net, LabeledStructure};
