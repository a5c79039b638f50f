//! Pseudo-spectral solver for the 2D Navier-Stokes equations on the rotating
//! unit sphere, driven by a time-periodic deterministic force plus a random
//! kick force at integer times, together with a verification lab that checks
//! the computable identities, energy bounds, contraction/squeezing constants,
//! absorbing-ball radii, zonal stability and mixing behaviour of the system.
//!
//! Layout:
//! - [`spectral`]: harmonic representation, Gauss grids, transforms, operators
//! - [`dynamics`]: the deterministic flow S_t in vorticity form
//! - [`kicks`]: the random kick process and the kicked Markov chain
//! - [`lab`]: ensembles, estimators and verification experiments
//! - [`cli`]: configuration, experiment registry, persistence, CSV output

pub mod cli;
pub mod dynamics;
pub mod error;
pub mod kicks;
pub mod lab;
pub mod spectral;

pub use error::{Error, Result};
