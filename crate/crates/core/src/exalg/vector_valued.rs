use std::sync::Arc;

use crate::error::{GeomError, Result};
use crate::exalg::form::Form;
use crate::exalg::frame::CoordFrame;
use crate::scalar::{Scalar, Q};

/// Tangent-vector-valued form: one component form per basis direction.
#[derive(Clone, Debug, PartialEq)]
pub struct VectorValuedForm<T: Scalar = Q> {
    components: Vec<Form<T>>,
}

impl<T: Scalar> VectorValuedForm<T> {
    pub fn new(components: Vec<Form<T>>) -> Result<Self> {
        let Some(first) = components.first() else {
            return Err(GeomError::InvalidFrame("empty vector-valued form".into()));
        };
        if components.len() != first.dim() {
            return Err(GeomError::InvalidFrame("one component per direction".into()));
        }
        for c in &components {
            first.same_frame(c)?;
            if c.degree() != first.degree() {
                return Err(GeomError::WrongDegree {
                    expected: first.degree(),
                    got: c.degree(),
                });
            }
        }
        Ok(Self { components })
    }

    pub fn zero(frame: &Arc<CoordFrame>, degree: usize) -> Self {
        Self {
            components: (0..frame.dim()).map(|_| Form::zero(frame, degree)).collect(),
        }
    }

    pub fn component(&self, a: usize) -> &Form<T> {
        &self.components[a]
    }

    pub fn components(&self) -> &[Form<T>] {
        &self.components
    }

    pub fn degree(&self) -> usize {
        self.components[0].degree()
    }

    pub fn frame(&self) -> &Arc<CoordFrame> {
        self.components[0].frame()
    }

    /// Pairing with a vector v: Σ_a v_a · component_a.
    pub fn pair(&self, v: &[T]) -> Form<T> {
        let mut acc = Form::zero(self.frame(), self.degree());
        for (c, x) in self.components.iter().zip(v) {
            if !x.is_zero() {
                acc = &acc + &c.scale(x);
            }
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(Form::is_zero)
    }

    /// For degree-1 values: the matrix m[a][b] = coefficient of dx^b in component a.
    pub fn as_matrix(&self) -> Vec<Vec<T>> {
        assert_eq!(self.degree(), 1, "matrix view needs 1-form components");
        self.components.iter().map(Form::to_vector).collect()
    }
}

/// τ(h₁, …, h_k) = Σ τ(e_{a₁}, …, e_{a_k}) h₁^{a₁} ∧ … ∧ h_k^{a_k} for a k-form τ
/// with constant coefficients.
pub fn substitute<T: Scalar>(tau: &Form<T>, h: &[&VectorValuedForm<T>]) -> Form<T> {
    assert_eq!(h.len(), tau.degree(), "one argument per slot");
    let frame = h[0].frame();
    let degree: usize = h.iter().map(|x| x.degree()).sum();
    let perms = permutations(h.len());
    let mut acc = Form::zero(frame, degree);
    for (idx, w) in tau.iter() {
        for p in &perms {
            let s = crate::exalg::permutation_sign(p);
            let mut t = Form::constant(frame, if s < 0 { -w.clone() } else { w.clone() });
            for (slot, &q) in p.iter().enumerate() {
                t = t.wedge(h[slot].component(idx[q]));
                if t.is_zero() {
                    break;
                }
            }
            if !t.is_zero() {
                acc = &acc + &t;
            }
        }
    }
    acc
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(k - 1) {
        for pos in 0..k {
            let mut q = p.clone();
            q.insert(pos, k - 1);
            out.push(q);
        }
    }
    out
}
