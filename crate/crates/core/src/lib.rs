pub mod buildings;
pub mod complex;
pub mod corpus;
pub mod coxeter;
pub mod equivariant;
pub mod error;
pub mod group_ring;
pub mod hecke;
pub mod homology;
pub mod linalg;
pub mod verify;
