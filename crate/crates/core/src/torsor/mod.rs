//! Multipointed torsors in the finite model: groupoids with one base object
//! per branch, torsors with marked points, the hom/torsor dictionary, and
//! the patching and pushout checks over a graph of groups.

mod groupoid;
mod multipointed;
mod patching;
mod verify;

pub use groupoid::{Arrow, GroupoidFunctor, ModelGroupoid};
pub use multipointed::{hom_from_torsor, torsor_from_hom, torsor_morphisms, MultipointedTorsor, TorsorMorphism};
pub use patching::{
    induced_problem, normalized_global_torsors, solve_patching, GlobalTorsor, LocalStructure, PatchingProblem,
    PatchingSolution, TwoFiberObject,
};
pub use verify::{round_trip_check, verify_groupoid_pushout, verify_setoid_equivalence, PushoutReport, SetoidReport};

use thiserror::Error;

use crate::gog::GogError;
use crate::graph::{GraphError, VertexKind};
use crate::group::GroupError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TorsorError {
    #[error("a groupoid needs at least one object")]
    NoObjects,
    #[error("groupoid object labels must be distinct")]
    DuplicateObject,
    #[error("{0}")]
    Shape(String),
    #[error("values do not respect composition of {a:?} and {b:?}")]
    NotAFunctor { a: Arrow, b: Arrow },
    #[error("torsor and groupoid disagree on the acting group or objects")]
    ActionMismatch,
    #[error("action table is not a group action")]
    NotAnAction,
    #[error("left and right actions do not commute")]
    ActionsDoNotCommute,
    #[error("right action is not free and transitive")]
    NotATorsor,
    #[error("branch {branch}: the {side:?}-side restriction is not isomorphic to the branch datum")]
    Incompatible { branch: String, side: VertexKind },
    #[error("internal consistency failure: {0}")]
    Internal(String),
    #[error(transparent)]
    Gog(#[from] GogError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Group(#[from] GroupError),
}
