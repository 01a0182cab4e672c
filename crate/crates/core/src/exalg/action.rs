//! Infinitesimal action of so(n) on forms and the stabilizer algebra of a form.

use crate::exalg::blade;
use crate::exalg::form::Form;
use crate::linalg::{self, Mat};
use num_traits::Zero;

use crate::scalar::{qi, Scalar, Q};

/// Basis of so(n): E_{ij} − E_{ji} for i < j.
pub fn so_basis(n: usize) -> Vec<Mat<Q>> {
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let mut m = linalg::zeros(n, n);
            m[i][j] = qi(1);
            m[j][i] = qi(-1);
            out.push(m);
        }
    }
    out
}

/// Derivation action of a matrix on a form: A·dx^i = Σ_j A[i][j] dx^j on each factor.
pub fn act<T: Scalar>(a: &Mat<T>, f: &Form<T>) -> Form<T> {
    let frame = f.frame();
    let mut out = Form::zero(frame, f.degree());
    for (b, c) in f.terms() {
        let idx = blade::indices(*b);
        for (pos, &i) in idx.iter().enumerate() {
            for (j, aij) in a[i].iter().enumerate() {
                if aij.is_zero() {
                    continue;
                }
                let mut new_idx = idx.clone();
                new_idx[pos] = j;
                let term = Form::monomial(frame, &new_idx, c.clone() * aij.clone());
                if !term.is_zero() {
                    out = &out + &term;
                }
            }
        }
    }
    out
}

/// Matrix of the derivation action on degree-k forms in the `blades_of_grade` basis.
pub fn action_matrix<T: Scalar>(a: &Mat<T>, frame: &std::sync::Arc<crate::exalg::CoordFrame>, k: usize) -> Mat<T> {
    let blades = blade::blades_of_grade(frame.dim(), k);
    let cols: Vec<Vec<T>> = blades
        .iter()
        .map(|&b| {
            let e = Form::monomial(frame, &blade::indices(b), T::one());
            act(a, &e).to_vector()
        })
        .collect();
    linalg::transpose(&cols)
}

/// Basis of {A ∈ so(n) : A·form = 0}.
pub fn stabilizer_algebra(form: &Form<Q>) -> Vec<Mat<Q>> {
    stabilizer_of_all(std::slice::from_ref(form))
}

/// Common stabilizer of several forms on the same frame.
pub fn stabilizer_of_all(forms: &[Form<Q>]) -> Vec<Mat<Q>> {
    let n = forms[0].dim();
    let basis = so_basis(n);
    // columns: images of basis elements, stacked over all forms
    let mut rows: Mat<Q> = Vec::new();
    for f in forms {
        let images: Vec<Vec<Q>> = basis.iter().map(|e| act(e, f).to_vector()).collect();
        rows.extend(linalg::transpose(&images));
    }
    let null = linalg::nullspace(&rows, basis.len(), 0.0);
    null.into_iter()
        .map(|coeffs| {
            let mut m = linalg::zeros(n, n);
            for (c, e) in coeffs.iter().zip(&basis) {
                if !c.is_zero() {
                    m = linalg::add_mat(&m, &linalg::scale_mat(e, c));
                }
            }
            m
        })
        .collect()
}

pub fn commutator<T: Scalar>(a: &Mat<T>, b: &Mat<T>) -> Mat<T> {
    linalg::sub_mat(&linalg::matmul(a, b), &linalg::matmul(b, a))
}

/// Whether the span of `basis` is closed under commutators (exact).
pub fn is_closed_under_bracket(basis: &[Mat<Q>]) -> bool {
    let flat: Vec<Vec<Q>> = basis.iter().map(|m| m.concat()).collect();
    let r = linalg::rank(&flat, 0.0);
    for i in 0..basis.len() {
        for j in i + 1..basis.len() {
            let c = commutator(&basis[i], &basis[j]).concat();
            let mut ext = flat.clone();
            ext.push(c);
            if linalg::rank(&ext, 0.0) != r {
                return false;
            }
        }
    }
    true
}

/// ι_β γ defined by ⟨ι_β γ, δ⟩ = ⟨γ, β ∧ δ⟩.
pub fn contract<T: Scalar>(beta: &Form<T>, gamma: &Form<T>) -> Form<T> {
    let frame = gamma.frame();
    if beta.degree() > gamma.degree() {
        return Form::zero(frame, 0);
    }
    let k = gamma.degree() - beta.degree();
    let mut terms = Vec::new();
    for b in blade::blades_of_grade(frame.dim(), k) {
        let e = Form::monomial(frame, &blade::indices(b), T::one());
        let c = gamma.inner(&beta.wedge(&e));
        if !c.is_zero() {
            terms.push((blade::indices(b), c));
        }
    }
    Form::from_terms(frame, k, terms).expect("valid terms")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exalg::CoordFrame;

    #[test]
    fn volume_form_stabilizer_is_whole_so3() {
        let f = CoordFrame::standard("r3", &["x1", "x2", "x3"]);
        let vol = Form::monomial(&f, &[0, 1, 2], qi(1));
        let stab = stabilizer_algebra(&vol);
        assert_eq!(stab.len(), 3);
        assert!(is_closed_under_bracket(&stab));
    }

    #[test]
    fn contraction_of_one_form_is_interior() {
        let f = CoordFrame::standard("r3", &["x1", "x2", "x3"]);
        let g = Form::monomial(&f, &[0, 1], qi(1));
        let b = Form::monomial(&f, &[0], qi(1));
        assert_eq!(contract(&b, &g), g.interior_basis(0));
    }
}
