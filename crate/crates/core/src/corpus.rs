//! The bundled algebras, representation and networks from `corpus/`.

use crate::algebra::RelationAlgebra;
use crate::representation::ConcreteRepresentation;

pub const POINT_RA: &str = include_str!("../../../corpus/point.ra");
pub const LEFT_LINEAR_RA: &str = include_str!("../../../corpus/leftlinear.ra");
pub const B9_RA: &str = include_str!("../../../corpus/b9.ra");
pub const B9_REP: &str = include_str!("../../../corpus/b9.rep");
pub const B9_N_NET: &str = include_str!("../../../corpus/b9_n.net");
pub const CYCLE3_NET: &str = include_str!("../../../corpus/cycle3.net");
pub const CHAIN3_NET: &str = include_str!("../../../corpus/chain3.net");

pub fn point_algebra() -> RelationAlgebra {
    RelationAlgebra::parse(POINT_RA).expect("bundled point.ra parses")
}

pub fn left_linear() -> RelationAlgebra {
    RelationAlgebra::parse(LEFT_LINEAR_RA).expect("bundled leftlinear.ra parses")
}

pub fn b9_algebra() -> RelationAlgebra {
    RelationAlgebra::parse(B9_RA).expect("bundled b9.ra parses")
}

pub fn b9_representation() -> ConcreteRepresentation {
    ConcreteRepresentation::parse(B9_REP).expect("bundled b9.rep parses")
}
