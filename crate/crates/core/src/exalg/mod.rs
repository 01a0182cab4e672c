//! Sparse exterior algebra on flat framed spaces.

pub mod action;
pub mod blade;
mod fiber;
mod form;
mod frame;
pub mod json;
mod polyform;
mod vector_valued;

pub use fiber::{fiber_integrate, fiber_integrate_poly};
pub use form::Form;
pub use frame::{permutation_sign, CoordFrame};
pub use polyform::{exp_trunc, Polyform};
pub use vector_valued::{substitute, VectorValuedForm};

use crate::scalar::Scalar;
use std::sync::Arc;

/// Basis vector e_i of length n.
pub fn basis_vector<T: Scalar>(n: usize, i: usize) -> Vec<T> {
    let mut v = vec![T::zero(); n];
    v[i] = T::one();
    v
}

/// All forms e_I of degree k, in `blades_of_grade` order.
pub fn basis_forms<T: Scalar>(frame: &Arc<CoordFrame>, k: usize) -> Vec<Form<T>> {
    blade::blades_of_grade(frame.dim(), k)
        .into_iter()
        .map(|b| Form::monomial(frame, &blade::indices(b), T::one()))
        .collect()
}
