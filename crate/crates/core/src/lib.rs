//! Exact computations on the grid quiver: B-orbits of its restricted
//! representation variety, their degeneration order, and linear degenerations
//! of type-A Schubert varieties realised as quiver Grassmannians.

#![no_std]
extern crate alloc;

pub mod decomposition;
pub mod degeneration_lab;
pub mod error;
pub mod exact_linalg;
pub mod grid_quiver;
pub mod orbit_poset;
pub mod parametrizations;
pub mod schubert;

pub use decomposition::{decompose, rank_vector, Decomposer, RankVector};
pub use error::{Error, Result};
pub use exact_linalg::{MatrixQ, UpperTriangular, Q};
pub use grid_quiver::{
    assemble_canonical, enumerate_indecomposables, Decomposition, DimGrid, GridShape, HeightVector, MapTuple,
};
pub use parametrizations::{degenerates, same_orbit, sw_array, SwArray, SwTable};
pub use schubert::Permutation;
