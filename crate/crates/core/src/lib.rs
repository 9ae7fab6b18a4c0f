//! Linear and nonlinear von Neumann dynamics of a qutrit on its 8-dimensional
//! generalized Bloch vector.

pub mod analysis;
pub mod error;
pub mod evolution;
pub mod identities;
pub mod ode;
pub mod random;
pub mod state_space;
pub mod stationary;
pub mod su3;

pub use error::{Error, Result};
pub use su3::{CMat3, Vec8};
