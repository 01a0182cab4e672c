//! The flat G2 structure on R⁷ = Im H ⊕ H.
//!
//! Coordinates are ordered x1, x2, x3, y0, y1, y2, y3 with orientation
//! dx¹²³dy⁰¹²³.

mod calibrate;
pub(crate) mod decompose;
mod dt;
pub mod symbol;

use std::sync::{Arc, OnceLock};

use crate::exalg::{basis_vector, CoordFrame, Form, VectorValuedForm};
use crate::scalar::{qi, Field, Scalar, Q};

pub use calibrate::{calibrate_plane, CalibrationVerdict, PlaneKind, Plane};
pub use decompose::{decompose, g2_decomposition, standard_decomposition, Component, Decomposition};
pub use dt::{deformed_dt_residual, dt_residual, dt_symbol_complex};

pub const X1: usize = 0;
pub const X2: usize = 1;
pub const X3: usize = 2;
pub const Y0: usize = 3;
pub const Y1: usize = 4;
pub const Y2: usize = 5;
pub const Y3: usize = 6;

pub fn g2_frame() -> Arc<CoordFrame> {
    static FRAME: OnceLock<Arc<CoordFrame>> = OnceLock::new();
    FRAME
        .get_or_init(|| CoordFrame::standard("g2", &["x1", "x2", "x3", "y0", "y1", "y2", "y3"]))
        .clone()
}

/// Sum of signed monomials on `frame`.
pub(crate) fn form_from(frame: &Arc<CoordFrame>, degree: usize, terms: &[(i64, &[usize])]) -> Form<Q> {
    Form::from_terms(frame, degree, terms.iter().map(|(c, idx)| (idx.to_vec(), qi(*c))))
        .expect("valid monomials")
}

/// Ω = dx¹²³ − dx¹(dy²³+dy¹⁰) − dx²(dy³¹+dy²⁰) − dx³(dy¹²+dy³⁰) on any frame whose
/// first seven coordinates carry the G2 ordering.
pub fn omega_on(frame: &Arc<CoordFrame>) -> Form<Q> {
    form_from(
        frame,
        3,
        &[
            (1, &[X1, X2, X3]),
            (-1, &[X1, Y2, Y3]),
            (-1, &[X1, Y1, Y0]),
            (-1, &[X2, Y3, Y1]),
            (-1, &[X2, Y2, Y0]),
            (-1, &[X3, Y1, Y2]),
            (-1, &[X3, Y3, Y0]),
        ],
    )
}

/// Θ = dy⁰¹²³ + dx²³(dy²³+dy¹⁰) + dx³¹(dy³¹+dy²⁰) + dx¹²(dy¹²+dy³⁰).
pub fn theta_on(frame: &Arc<CoordFrame>) -> Form<Q> {
    form_from(
        frame,
        4,
        &[
            (1, &[Y0, Y1, Y2, Y3]),
            (1, &[X2, X3, Y2, Y3]),
            (1, &[X2, X3, Y1, Y0]),
            (1, &[X3, X1, Y3, Y1]),
            (1, &[X3, X1, Y2, Y0]),
            (1, &[X1, X2, Y1, Y2]),
            (1, &[X1, X2, Y3, Y0]),
        ],
    )
}

/// The calibration pair (Ω, Θ) on a seven-dimensional frame.
#[derive(Clone, Debug, PartialEq)]
pub struct G2Structure {
    pub frame: Arc<CoordFrame>,
    pub omega: Form<Q>,
    pub theta: Form<Q>,
}

impl G2Structure {
    pub fn standard() -> Self {
        Self::on_frame(&g2_frame())
    }

    pub fn on_frame(frame: &Arc<CoordFrame>) -> Self {
        Self {
            frame: frame.clone(),
            omega: omega_on(frame),
            theta: theta_on(frame),
        }
    }

    /// Copy with the sign of the `term`-th monomial of Ω flipped.
    pub fn with_flipped_omega_term(&self, term: usize) -> Self {
        let terms: Vec<(Vec<usize>, Q)> = self
            .omega
            .iter()
            .enumerate()
            .map(|(i, (idx, c))| (idx, if i == term { -c.clone() } else { c.clone() }))
            .collect();
        Self {
            frame: self.frame.clone(),
            omega: Form::from_terms(&self.frame, 3, terms).expect("valid terms"),
            theta: self.theta.clone(),
        }
    }

    /// Cross product defined by ⟨u×v, w⟩ = Ω(u, v, w).
    pub fn cross<T: Field>(&self, u: &[T], v: &[T]) -> Vec<T> {
        let om: Form<T> = self.omega.map(T::from_q);
        // ι_v ι_u Ω is the 1-form w ↦ Ω(u, v, w)
        om.interior(u).interior(v).to_vector()
    }

    /// χ with ⟨χ, e_a⟩ = ι_{e_a}Θ.
    pub fn chi(&self) -> VectorValuedForm<Q> {
        let n = self.frame.dim();
        VectorValuedForm::new(
            (0..n)
                .map(|a| self.theta.interior(&basis_vector::<Q>(n, a)))
                .collect(),
        )
        .expect("seven components")
    }

    pub fn omega_as<T: Scalar>(&self) -> Form<T> {
        self.omega.map(T::from_q)
    }

    pub fn theta_as<T: Scalar>(&self) -> Form<T> {
        self.theta.map(T::from_q)
    }
}
