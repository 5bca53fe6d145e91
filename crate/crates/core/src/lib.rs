//! Homotopy classification of maps into spheres for low-dimensional
//! complexes: `[X, S^n]` for `dim X ≤ n + 1` with its group extension, and
//! the second cohomotopy set `[X, S^2]` for `dim X ≤ 4`.

pub mod abelian;
pub mod model;
pub mod simplicial;
pub mod steenrod;
pub mod cohomotopy;
pub mod torsor;
pub mod cli;
