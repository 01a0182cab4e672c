//! Principal symbols of linearized operators as finite cochain complexes.

use serde::Serialize;

use crate::linalg::{self, Mat};
use crate::scalar::Q;

/// 0 → V₀ → V₁ → … → V_m → 0 with exact rational maps d_i : V_i → V_{i+1}.
#[derive(Clone, Debug)]
pub struct SymbolComplex {
    pub dims: Vec<usize>,
    pub maps: Vec<Mat<Q>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SymbolReport {
    pub dims: Vec<usize>,
    pub ranks: Vec<usize>,
    /// d_{i+1} ∘ d_i = 0 for every i.
    pub is_complex: bool,
    /// Dimension of cohomology at each V_i.
    pub cohomology: Vec<usize>,
    pub exact: bool,
}

impl SymbolComplex {
    pub fn analyze(&self) -> SymbolReport {
        let ranks: Vec<usize> = self.maps.iter().map(|m| linalg::rank(m, 0.0)).collect();
        let is_complex = self
            .maps
            .windows(2)
            .all(|w| linalg::is_zero_mat(&linalg::matmul(&w[1], &w[0]), 0.0));
        let cohomology: Vec<usize> = (0..self.dims.len())
            .map(|i| {
                let out = ranks.get(i).copied().unwrap_or(0);
                let inc = if i == 0 { 0 } else { ranks[i - 1] };
                self.dims[i] - out - inc
            })
            .collect();
        let exact = is_complex && cohomology.iter().all(|&h| h == 0);
        SymbolReport {
            dims: self.dims.clone(),
            ranks,
            is_complex,
            cohomology,
            exact,
        }
    }
}
