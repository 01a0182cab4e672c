use std::sync::Arc;

use num_traits::{One, Zero};

use crate::error::{GeomError, Result};
use crate::scalar::Q;

/// Flat coordinate frame with identity metric, an orientation and per-coordinate covolumes.
#[derive(Debug, Clone, PartialEq)]
pub struct CoordFrame {
    name: String,
    labels: Vec<String>,
    orientation: Vec<usize>,
    covolume: Vec<Q>,
}

impl CoordFrame {
    pub fn new(
        name: impl Into<String>,
        labels: Vec<String>,
        orientation: Vec<usize>,
        covolume: Vec<Q>,
    ) -> Result<Self> {
        let dim = labels.len();
        if dim > 31 {
            return Err(GeomError::InvalidFrame(format!("dimension {dim} exceeds 31")));
        }
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(GeomError::InvalidFrame(format!("duplicate label {l}")));
            }
        }
        let mut seen = vec![false; dim];
        if orientation.len() != dim {
            return Err(GeomError::InvalidFrame("orientation length".into()));
        }
        for &o in &orientation {
            if o >= dim || seen[o] {
                return Err(GeomError::InvalidFrame("orientation is not a permutation".into()));
            }
            seen[o] = true;
        }
        if covolume.len() != dim || covolume.iter().any(|c| c <= &Q::zero()) {
            return Err(GeomError::InvalidFrame("covolumes must be positive".into()));
        }
        Ok(Self {
            name: name.into(),
            labels,
            orientation,
            covolume,
        })
    }

    /// Frame with the given labels, identity orientation and unit covolumes.
    pub fn standard(name: &str, labels: &[&str]) -> Arc<Self> {
        let dim = labels.len();
        Arc::new(
            Self::new(
                name,
                labels.iter().map(|s| s.to_string()).collect(),
                (0..dim).collect(),
                vec![Q::one(); dim],
            )
            .expect("standard frame"),
        )
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn orientation(&self) -> &[usize] {
        &self.orientation
    }

    /// Sign of the orientation permutation relative to increasing index order.
    pub fn orientation_sign(&self) -> i32 {
        permutation_sign(&self.orientation)
    }

    pub fn covolume(&self, i: usize) -> &Q {
        &self.covolume[i]
    }

    pub fn covolumes(&self) -> &[Q] {
        &self.covolume
    }

    /// Copy of this frame with new covolumes.
    pub fn with_covolumes(&self, covolume: Vec<Q>) -> Result<Arc<Self>> {
        Ok(Arc::new(Self::new(
            self.name.clone(),
            self.labels.clone(),
            self.orientation.clone(),
            covolume,
        )?))
    }

    /// Total covolume of the whole frame.
    pub fn total_covolume(&self) -> Q {
        self.covolume.iter().fold(Q::one(), |acc, c| acc * c)
    }
}

/// Sign of a sequence of distinct integers as a permutation of its sorted order.
pub fn permutation_sign(seq: &[usize]) -> i32 {
    let mut inv = 0usize;
    for i in 0..seq.len() {
        for j in i + 1..seq.len() {
            if seq[i] > seq[j] {
                inv += 1;
            }
        }
    }
    if inv.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_frames() {
        let labels = vec!["a".to_string(), "a".to_string()];
        assert!(CoordFrame::new("f", labels, vec![0, 1], vec![Q::one(), Q::one()]).is_err());
        let labels = vec!["a".to_string(), "b".to_string()];
        assert!(CoordFrame::new("f", labels.clone(), vec![0, 0], vec![Q::one(), Q::one()]).is_err());
        assert!(CoordFrame::new("f", labels, vec![1, 0], vec![Q::one(), Q::zero()]).is_err());
    }

    #[test]
    fn orientation_sign() {
        let labels = vec!["a".to_string(), "b".to_string(), "c".to_string()];
        let f = CoordFrame::new("f", labels, vec![1, 0, 2], vec![Q::one(); 3]).unwrap();
        assert_eq!(f.orientation_sign(), -1);
        assert_eq!(permutation_sign(&[2, 0, 1]), 1);
    }
}
