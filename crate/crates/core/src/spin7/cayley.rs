//! The natural 4-form on the moduli space of the flat Cayley fiber T⁴ ⊂ T⁸ with
//! an abelian flat connection. A tangent vector is a harmonic 1-form on the fiber
//! (deformation of the connection) plus a parallel spinor (normal deformation).

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::cycles::quaternion::Quaternion;
use crate::error::{GeomError, Result};
use crate::exalg::{CoordFrame, Form};
use crate::linalg;
use crate::scalar::{qi, Q};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CayleyTangent {
    /// Coefficients of dy⁰..dy³ on the fiber.
    #[serde(with = "crate::scalar::q_list")]
    pub one_form: Vec<Q>,
    /// Components (1, i, j, k).
    #[serde(with = "crate::scalar::q_list")]
    pub spinor: Vec<Q>,
}

impl CayleyTangent {
    pub fn new(one_form: Vec<Q>, spinor: Vec<Q>) -> Result<Self> {
        for v in [&one_form, &spinor] {
            if v.len() != 4 {
                return Err(GeomError::Arity { expected: 4, got: v.len() });
            }
        }
        Ok(Self { one_form, spinor })
    }

    pub fn one_form(a: Vec<Q>) -> Result<Self> {
        Self::new(a, vec![qi(0); 4])
    }

    pub fn spinor(s: Vec<Q>) -> Result<Self> {
        Self::new(vec![qi(0); 4], s)
    }

    fn as_vector(&self) -> Vec<Q> {
        self.one_form.iter().chain(&self.spinor).cloned().collect()
    }
}

/// The fiber span(∂y⁰..∂y³) with lattice covolumes, oriented so that Θ_Z restricts
/// to its volume form (the opposite of dy⁰¹²³).
#[derive(Clone, Debug)]
pub struct CayleyFiber {
    frame: Arc<CoordFrame>,
}

impl CayleyFiber {
    pub fn new(covolumes: Vec<Q>) -> Result<Self> {
        let frame = CoordFrame::new(
            "cayley-fiber",
            ["y0", "y1", "y2", "y3"].iter().map(|s| s.to_string()).collect(),
            vec![1, 0, 2, 3],
            covolumes,
        )?;
        Ok(Self { frame: Arc::new(frame) })
    }

    pub fn unit() -> Self {
        Self::new(vec![qi(1); 4]).expect("unit lattice")
    }

    pub fn frame(&self) -> &Arc<CoordFrame> {
        &self.frame
    }

    pub fn covolume(&self) -> Q {
        self.frame.total_covolume()
    }

    /// Self-dual basis identified with i, j, k.
    fn self_dual_basis(&self) -> [Form<Q>; 3] {
        let f = &self.frame;
        let m = |i: usize, j: usize, c: i64| Form::monomial(f, &[i, j], qi(c));
        [&m(0, 1, 1) - &m(2, 3, 1), &m(0, 2, 1) + &m(1, 3, 1), &m(0, 3, 1) - &m(1, 2, 1)]
    }
}

/// α ∧ β + ⋆(α ∧ β) as an imaginary quaternion, through dy⁰¹ − dy²³ ↦ i,
/// dy⁰² + dy¹³ ↦ j, dy⁰³ − dy¹² ↦ k.
pub fn hat_lift(fiber: &CayleyFiber, a: &[Q], b: &[Q]) -> Result<(Form<Q>, Quaternion<Q>)> {
    let f = fiber.frame();
    for v in [a, b] {
        if v.len() != 4 {
            return Err(GeomError::Arity { expected: 4, got: v.len() });
        }
    }
    let ab = Form::from_vector(f, 1, a).wedge(&Form::from_vector(f, 1, b));
    let lift = &ab + &ab.hodge();
    let basis = fiber.self_dual_basis();
    // the basis is orthogonal with |ω_a|² = 2
    let c: Vec<Q> = basis.iter().map(|w| lift.inner(w) / qi(2)).collect();
    let rebuilt = basis.iter().zip(&c).fold(Form::zero(f, 2), |acc, (w, x)| &acc + &w.scale(x));
    if rebuilt != lift {
        return Err(GeomError::NotInComponent("self-dual".into()));
    }
    Ok((lift, Quaternion::new(qi(0), c[0].clone(), c[1].clone(), c[2].clone())))
}

fn moduli_form(fiber: &CayleyFiber) -> Result<Form<Q>> {
    let frame = CoordFrame::standard("cayley-moduli", &["a0", "a1", "a2", "a3", "s0", "s1", "s2", "s3"]);
    let vol = fiber.covolume();
    let mut terms: Vec<(Vec<usize>, Q)> = Vec::new();
    // four 1-forms: ∫_C dy^{abcd}
    terms.push((vec![0, 1, 2, 3], Form::monomial(fiber.frame(), &[0, 1, 2, 3], qi(1)).integrate()));
    // two 1-forms and two spinors: −∫_C ⟨e_m, (dyᵃ∧dyᵇ)^ · e_n⟩ Θ_Z
    for a in 0..4 {
        for b in a + 1..4 {
            let (_, u) = hat_lift(fiber, &unit(a), &unit(b))?;
            for m in 0..4 {
                for n in m + 1..4 {
                    let v = Quaternion::<Q>::basis(m).dot(&(u.clone() * Quaternion::basis(n)));
                    if v != qi(0) {
                        terms.push((vec![a, b, 4 + m, 4 + n], -v * &vol));
                    }
                }
            }
        }
    }
    // four spinors: −∫_C det(1, i, j, k) Θ_Z
    terms.push((vec![4, 5, 6, 7], -vol.clone()));
    Form::from_terms(&frame, 4, terms)
}

fn unit(i: usize) -> Vec<Q> {
    (0..4).map(|j| qi((i == j) as i64)).collect()
}

/// Θ on the moduli space evaluated on four tangent vectors. Slot patterns with an
/// odd number of 1-form entries get 0.
pub fn cayley_moduli_four_form(fiber: &CayleyFiber, t: [&CayleyTangent; 4]) -> Result<Q> {
    let form = moduli_form(fiber)?;
    let vs: Vec<Vec<Q>> = t.iter().map(|x| x.as_vector()).collect();
    if let Some(v) = vs.iter().find(|v| v.len() != 8) {
        return Err(GeomError::Arity { expected: 8, got: v.len() });
    }
    form.evaluate(&vs)
}

/// det of four quaternions read as columns in R⁴.
pub fn spinor_det(s: [&[Q]; 4]) -> Q {
    let cols: Vec<Vec<Q>> = s.iter().map(|v| v.to_vec()).collect();
    linalg::det(&linalg::transpose(&cols))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q;

    fn one(i: usize) -> CayleyTangent {
        CayleyTangent::one_form(unit(i)).unwrap()
    }

    fn spin(i: usize) -> CayleyTangent {
        CayleyTangent::spinor(unit(i)).unwrap()
    }

    #[test]
    fn hat_lift_is_self_dual() {
        let fib = CayleyFiber::unit();
        let (lift, u) = hat_lift(&fib, &[qi(1), qi(2), qi(0), qi(-1)], &[qi(0), qi(1), qi(3), qi(1)]).unwrap();
        assert_eq!(lift.hodge(), lift);
        assert_eq!(*u.re(), qi(0));
    }

    #[test]
    fn four_one_forms_give_covolume() {
        let fib = CayleyFiber::new(vec![qi(2), qi(1), q(1, 3), qi(3)]).unwrap();
        let v = cayley_moduli_four_form(&fib, [&one(0), &one(1), &one(2), &one(3)]).unwrap();
        assert_eq!(v, -qi(2));
    }

    #[test]
    fn four_spinors_give_minus_det() {
        let fib = CayleyFiber::unit();
        let v = cayley_moduli_four_form(&fib, [&spin(0), &spin(1), &spin(2), &spin(3)]).unwrap();
        let d = spinor_det([&unit(0), &unit(1), &unit(2), &unit(3)]);
        assert_eq!(v, -d);
        assert_eq!(v, qi(-1));
    }

    #[test]
    fn mixed_two_two() {
        let fib = CayleyFiber::unit();
        // (dy⁰¹)^ = i and ⟨i, i·1⟩ = 1
        let v = cayley_moduli_four_form(&fib, [&one(0), &one(1), &spin(1), &spin(0)]).unwrap();
        assert_eq!(v, qi(-1));
        let w = cayley_moduli_four_form(&fib, [&one(0), &spin(1), &one(1), &spin(0)]).unwrap();
        assert_eq!(w, -v);
    }

    #[test]
    fn repeated_argument_and_odd_patterns_vanish() {
        let fib = CayleyFiber::unit();
        let mixed = CayleyTangent::new(unit(2), unit(3)).unwrap();
        assert_eq!(cayley_moduli_four_form(&fib, [&mixed, &one(0), &mixed, &spin(1)]).unwrap(), qi(0));
        assert_eq!(cayley_moduli_four_form(&fib, [&one(0), &spin(1), &spin(2), &spin(3)]).unwrap(), qi(0));
        assert_eq!(cayley_moduli_four_form(&fib, [&one(0), &one(1), &one(2), &spin(3)]).unwrap(), qi(0));
    }
}
