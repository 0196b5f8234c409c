//! Equivariant sheaves over towers of finite groups, with exact rational coefficients.

pub mod check;
pub mod diagram;
pub mod error;
pub mod group;
pub mod io;
pub mod linalg;
pub mod random;
pub mod rep;
pub mod sheaf;
pub mod tower;
pub mod weyl;

pub use error::{Error, Result};
pub use group::{FiniteGroup, GroupHom, Permutation, Subgroup};
pub use linalg::{Matrix, Subspace, Q};
pub use rep::{EquivariantMap, GroupRep, QModule};
pub use sheaf::{FiniteEqSheaf, SheafMap};
pub use tower::{BasicOpen, FiniteGSpace, GroupTower, PointThread, Projection, SpaceTower};
