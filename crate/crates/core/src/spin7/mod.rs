//! The flat Spin(7) structure on R⁸ = H ⊕ H.
//!
//! Coordinates are ordered x0, x1, x2, x3, y0, y1, y2, y3 with orientation
//! dx⁰¹²³dy⁰¹²³.

mod cayley;
mod decompose;
mod reduction;

use std::sync::{Arc, OnceLock};

use serde::Serialize;

use crate::error::{GeomError, Result};
use crate::exalg::{basis_vector, substitute, CoordFrame, Form, VectorValuedForm};
use crate::g2::symbol::SymbolComplex;
use crate::g2::Plane;
use crate::linalg;
use crate::scalar::{q, qi, Field, Scalar, Q};

pub use cayley::{cayley_moduli_four_form, hat_lift, spinor_det, CayleyFiber, CayleyTangent};
pub use decompose::{decompose_s7, spin7_decomposition};
pub use reduction::{
    characteristic_numbers, cy4_forms, fiber_index, hodge_type_count, reduction_check, HodgeTypeCount, ReductionKind,
    ReductionReport,
};

pub const X0: usize = 0;
pub const X1: usize = 1;
pub const X2: usize = 2;
pub const X3: usize = 3;
pub const Y0: usize = 4;
pub const Y1: usize = 5;
pub const Y2: usize = 6;
pub const Y3: usize = 7;

pub fn spin7_frame() -> Arc<CoordFrame> {
    static FRAME: OnceLock<Arc<CoordFrame>> = OnceLock::new();
    FRAME
        .get_or_init(|| CoordFrame::standard("spin7", &["x0", "x1", "x2", "x3", "y0", "y1", "y2", "y3"]))
        .clone()
}

fn two(frame: &Arc<CoordFrame>, pairs: [[usize; 2]; 2]) -> Form<Q> {
    &Form::monomial(frame, &pairs[0], qi(1)) + &Form::monomial(frame, &pairs[1], qi(1))
}

/// Θ_Z = −dy⁰¹²³ − dx⁰¹²³ − (dx¹⁰+dx²³)(dy¹⁰+dy²³) − (dx²⁰+dx³¹)(dy²⁰+dy³¹)
/// − (dx³⁰+dx¹²)(dy³⁰+dy¹²) on a frame with the Spin(7) ordering.
pub fn theta_z_on(frame: &Arc<CoordFrame>) -> Form<Q> {
    let mut acc = &Form::monomial(frame, &[Y0, Y1, Y2, Y3], qi(-1)) - &Form::monomial(frame, &[X0, X1, X2, X3], qi(1));
    let blocks = [
        [[X1, X0], [X2, X3]],
        [[X2, X0], [X3, X1]],
        [[X3, X0], [X1, X2]],
    ];
    for [a, b] in blocks {
        let dx = two(frame, [a, b]);
        let dy = two(frame, [[a[0] + 4, a[1] + 4], [b[0] + 4, b[1] + 4]]);
        acc = &acc - &dx.wedge(&dy);
    }
    acc
}

/// Θ_Z on the standard frame.
pub fn theta_z() -> Form<Q> {
    static THETA: OnceLock<Form<Q>> = OnceLock::new();
    THETA.get_or_init(|| theta_z_on(&spin7_frame())).clone()
}

fn check_frame<T: Scalar>(f: &Form<T>, degree: usize) -> Result<()> {
    if f.dim() != 8 {
        return Err(GeomError::FrameMismatch("spin7".into(), f.frame().name().into()));
    }
    if f.degree() != degree {
        return Err(GeomError::WrongDegree { expected: degree, got: f.degree() });
    }
    Ok(())
}

/// χ_Z with ⟨χ_Z, e_a⟩ = ι_{e_a}Θ_Z.
pub fn chi_z() -> VectorValuedForm<Q> {
    let th = theta_z();
    VectorValuedForm::new((0..8).map(|a| th.interior(&basis_vector::<Q>(8, a))).collect()).expect("eight components")
}

/// φ̂ with components ⋆(φ ∧ χ_a).
pub fn hat4(phi: &Form<Q>) -> Result<VectorValuedForm<Q>> {
    check_frame(phi, 4)?;
    let chi = chi_z();
    let frame = phi.frame();
    VectorValuedForm::new(
        chi.components()
            .iter()
            .map(|c| phi.wedge(&c.reindex(frame, &(0..8).collect::<Vec<_>>())).hodge())
            .collect(),
    )
}

/// Q(φ₁, φ₂, φ₃, φ₄) = ∫ Θ_Z(φ̂₁, φ̂₂, φ̂₃, φ̂₄) ∧ Θ_Z over the torus of the frame.
pub fn quartic_tensor(phi: [&Form<Q>; 4]) -> Result<Q> {
    let h = phi.iter().map(|p| hat4(p)).collect::<Result<Vec<_>>>()?;
    let frame = phi[0].frame();
    let th = theta_z_on(frame);
    let refs: Vec<&VectorValuedForm<Q>> = h.iter().collect();
    Ok(substitute(&th, &refs).wedge(&th).integrate())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CayleyVerdict {
    /// Θ_Z evaluated on the spanning vectors.
    pub value: f64,
    pub volume: f64,
    /// Signed ratio value / volume.
    pub ratio: f64,
    /// |ratio| = 1 (within tolerance, or exactly for tolerance 0).
    pub cayley: bool,
    /// Sign of the ratio: +1 when the spanning order agrees with the calibrated orientation.
    pub orientation: i8,
}

/// Compares Θ_Z on a 4-plane in R⁸ with its volume.
pub fn calibrate_cayley<T: Field>(plane: &Plane<T>, tol: f64) -> Result<CayleyVerdict> {
    if plane.dim() != 4 {
        return Err(GeomError::Arity { expected: 4, got: plane.dim() });
    }
    if let Some(v) = plane.vectors.iter().find(|v| v.len() != 8) {
        return Err(GeomError::Arity { expected: 8, got: v.len() });
    }
    let gram = plane.gram();
    let gdet = linalg::det(&gram);
    let scale: f64 = (0..4).map(|i| gram[i][i].approx()).product();
    if gdet.is_zero() || gdet.magnitude() <= tol * scale {
        return Err(GeomError::Degenerate);
    }
    let value = theta_z().map(T::from_q).evaluate(&plane.vectors)?;
    let r2 = value.clone() * value.clone() / gdet.clone();
    let cayley = (r2 - T::one()).magnitude() <= 2.0 * tol;
    let value = value.approx();
    let volume = gdet.approx().sqrt();
    let ratio = value / volume;
    Ok(CayleyVerdict {
        value,
        volume,
        ratio,
        cayley,
        orientation: if ratio > 0.0 {
            1
        } else if ratio < 0.0 {
            -1
        } else {
            0
        },
    })
}

/// ⋆F + Θ_Z ∧ F, the linearization of the deformed equation.
pub fn dt8_linear_residual<T: Scalar>(f: &Form<T>) -> Result<Form<T>> {
    check_frame(f, 2)?;
    let th = theta_z().map(T::from_q).reindex(f.frame(), &(0..8).collect::<Vec<_>>());
    f.hodge().try_add(&th.try_wedge(f)?)
}

/// ⋆F + Θ_Z ∧ F + F³/6 for an abelian curvature F.
pub fn deformed_dt8_residual<T: Scalar>(f: &Form<T>) -> Result<Form<T>> {
    let lin = dt8_linear_residual(f)?;
    let cube = f.try_wedge(f)?.try_wedge(f)?;
    lin.try_add(&cube.scale(&T::from_q(&q(1, 6))))
}

/// Symbol complex 0 → Λ⁰ → Λ¹ → Λ²₇ → 0 at ξ with maps ξ∧ and π₇(ξ ∧ ·), the
/// latter written in coordinates of a basis of Λ²₇.
pub fn spin7_symbol_complex(xi: &[Q]) -> Result<SymbolComplex> {
    if xi.len() != 8 {
        return Err(GeomError::Arity { expected: 8, got: xi.len() });
    }
    let frame = spin7_frame();
    let xi_form = Form::from_vector(&frame, 1, xi);
    let d0 = crate::g2::decompose::linear_map_matrix(&frame, 0, |a| xi_form.wedge(a));
    let wedge = crate::g2::decompose::linear_map_matrix(&frame, 1, |a| xi_form.wedge(a));
    let seven = spin7_decomposition(2)?.basis("7")?.to_vec();
    // Bᵀ has the same kernel on Λ² as the orthogonal projector onto span B
    let d1 = linalg::matmul(&seven, &wedge);
    Ok(SymbolComplex {
        dims: vec![1, 8, 7],
        maps: vec![d0, d1],
    })
}
