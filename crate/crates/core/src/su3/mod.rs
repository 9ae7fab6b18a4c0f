//! su(3) algebra on real 8-vectors and complex 3×3 matrices.

pub mod cmat3;
pub mod cubic;
pub mod expm;
pub mod structure;
pub mod vec8;

pub use cmat3::CMat3;
pub use cubic::{cubic_roots, power_coefficients, power_coefficients_closed, CubicRoots};
pub use expm::{exp_lambda, matrix_exp, matrix_exp_bounded, LambdaBranch};
pub use structure::{
    bloch_to_density, cubic_invariant, density_to_bloch, gell_mann, lambda_dot, star_product,
    wedge_product, StructureConstants, SQRT3,
};
pub use vec8::Vec8;
