//! Spherical-harmonic representation, grid transforms, and the scalar
//! operators (Laplacian, Jacobian, norms, projections) on the unit sphere.

pub mod field;
pub mod grid;
pub mod legendre;
pub mod modes;
pub mod ops;
pub mod transform;

pub use field::{GridScalar, SpectralScalar};
pub use grid::{make_grid, GaussGrid};
pub use modes::{HarmonicIndex, ModeOrdering, Parity};
pub use ops::{
    apply_laplacian, h_inner, invert_laplacian, jacobian, mode_field, project_modes,
    spectral_norm, weighted_inner, NormOrder, ProjectPart,
};
pub use transform::{Transform, TransformScratch};
