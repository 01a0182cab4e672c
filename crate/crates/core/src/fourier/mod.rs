//! Fiberwise Fourier–Mukai transform for flat torus fibrations of R⁷.
//!
//! Two fibrations are supported. In the coassociative one the fiber is the
//! y-torus T⁴ over the x-base; W has coordinates (x1, x2, x3, y_0..y_3). In the
//! associative one the fiber is the x-torus T³ over the y-base; W has
//! coordinates (x_1, x_2, x_3, y0..y3). In both cases W uses the G2 index
//! layout, so the standard Ω and Θ serve as Ω_W and Θ_W.

mod connection;
mod torus;

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::cycles::semiflat::{check_base_only, SemiFlatAssocCycle, SemiFlatCoassocCycle};
use crate::error::{GeomError, Result};
use crate::exalg::{exp_trunc, fiber_integrate_poly, CoordFrame, Form, Polyform};
use crate::g2::{G2Structure, X1, X2};
use crate::scalar::{qi, Scalar, Q};

pub use connection::{compatible_base_curvature, section_curvature, transform_section, ConnectionOnW};
pub use torus::{transform_flat_torus, FlatConnection, FlatTorusObject, TorusPoint};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Fibration {
    /// T⁴ fibers (y-coordinates) over the x-base.
    CoassociativeT4,
    /// T³ fibers (x-coordinates) over the y-base.
    AssociativeT3,
}

impl Fibration {
    pub fn fiber_dim(self) -> usize {
        match self {
            Fibration::CoassociativeT4 => 4,
            Fibration::AssociativeT3 => 3,
        }
    }

    /// G2-frame indices of the fiber coordinates, in orientation order.
    pub fn fiber_coords(self) -> Vec<usize> {
        match self {
            Fibration::CoassociativeT4 => vec![3, 4, 5, 6],
            Fibration::AssociativeT3 => vec![0, 1, 2],
        }
    }
}

/// Frames of a fibration: M, W and the fiber product M ×_B W.
#[derive(Clone, Debug)]
pub struct DualFrames {
    pub fibration: Fibration,
    pub m: Arc<CoordFrame>,
    pub w: Arc<CoordFrame>,
    pub product: Arc<CoordFrame>,
    /// Index in `product` of each M coordinate.
    pub lift: Vec<usize>,
    /// Product indices of the fiber coordinates, in orientation order.
    pub fiber: Vec<usize>,
    /// Product indices of the dual fiber coordinates, paired with `fiber`.
    pub dual_fiber: Vec<usize>,
}

impl DualFrames {
    /// Frames with the given fiber covolumes; the dual covolumes are their reciprocals.
    pub fn new(fibration: Fibration, fiber_covolumes: &[Q]) -> Result<Self> {
        let k = fibration.fiber_dim();
        if fiber_covolumes.len() != k {
            return Err(GeomError::Arity { expected: k, got: fiber_covolumes.len() });
        }
        if fiber_covolumes.iter().any(|c| *c <= qi(0)) {
            return Err(GeomError::InvalidFrame("covolumes must be positive".into()));
        }
        let dual: Vec<Q> = fiber_covolumes.iter().map(|c| qi(1) / c.clone()).collect();
        let ones = |n: usize| vec![qi(1); n];
        let labels = |v: &[&str]| v.iter().map(|s| s.to_string()).collect::<Vec<_>>();
        let frame = |name: &str, l: &[&str], cov: Vec<Q>| {
            CoordFrame::new(name, labels(l), (0..l.len()).collect(), cov).map(Arc::new)
        };
        match fibration {
            Fibration::CoassociativeT4 => {
                let mcov = [ones(3), fiber_covolumes.to_vec()].concat();
                let wcov = [ones(3), dual.clone()].concat();
                let pcov = [ones(3), fiber_covolumes.to_vec(), dual].concat();
                Ok(Self {
                    fibration,
                    m: frame("m-t4", &["x1", "x2", "x3", "y0", "y1", "y2", "y3"], mcov)?,
                    w: frame("w-t4", &["x1", "x2", "x3", "y_0", "y_1", "y_2", "y_3"], wcov)?,
                    product: frame(
                        "mw-t4",
                        &["x1", "x2", "x3", "y0", "y1", "y2", "y3", "y_0", "y_1", "y_2", "y_3"],
                        pcov,
                    )?,
                    lift: (0..7).collect(),
                    fiber: vec![3, 4, 5, 6],
                    dual_fiber: vec![7, 8, 9, 10],
                })
            }
            Fibration::AssociativeT3 => {
                let mcov = [fiber_covolumes.to_vec(), ones(4)].concat();
                let wcov = [dual.clone(), ones(4)].concat();
                let pcov = [dual, ones(4), fiber_covolumes.to_vec()].concat();
                Ok(Self {
                    fibration,
                    m: frame("m-t3", &["x1", "x2", "x3", "y0", "y1", "y2", "y3"], mcov)?,
                    w: frame("w-t3", &["x_1", "x_2", "x_3", "y0", "y1", "y2", "y3"], wcov)?,
                    // dual fiber first so that integrating out the fiber leaves W in order
                    product: frame(
                        "mw-t3",
                        &["x_1", "x_2", "x_3", "y0", "y1", "y2", "y3", "x1", "x2", "x3"],
                        pcov,
                    )?,
                    lift: vec![7, 8, 9, 3, 4, 5, 6],
                    fiber: vec![7, 8, 9],
                    dual_fiber: vec![0, 1, 2],
                })
            }
        }
    }

    pub fn unit(fibration: Fibration) -> Self {
        Self::new(fibration, &vec![qi(1); fibration.fiber_dim()]).expect("unit lattice")
    }

    pub fn g2_m(&self) -> G2Structure {
        G2Structure::on_frame(&self.m)
    }

    pub fn g2_w(&self) -> G2Structure {
        G2Structure::on_frame(&self.w)
    }
}

/// Σ_j (fiber coordinate)_j ∧ (dual fiber coordinate)_j.
pub fn poincare_curvature(frames: &DualFrames) -> Form<Q> {
    frames
        .fiber
        .iter()
        .zip(&frames.dual_fiber)
        .fold(Form::zero(&frames.product, 2), |acc, (&a, &b)| {
            &acc + &Form::monomial(&frames.product, &[a, b], qi(1))
        })
}

/// ∫_{M/B} p*(φ) ∧ e^F.
pub fn transform_polyform<T: Scalar>(frames: &DualFrames, a: &Polyform<T>) -> Result<Polyform<T>> {
    if a.frame().dim() != 7 {
        return Err(GeomError::FrameMismatch(frames.m.name().into(), a.frame().name().into()));
    }
    let f = Polyform::from_form(poincare_curvature(frames).map(T::from_q));
    let ef = exp_trunc(&f, frames.product.dim())?;
    let mut lifted = Polyform::zero(&frames.product);
    for part in a.parts() {
        let moved = part.reindex(&frames.product, &frames.lift).map(|c| c.rename_vars(&frames.lift));
        lifted.add_form(&moved)?;
    }
    fiber_integrate_poly(&lifted.try_wedge(&ef)?, &frames.fiber, &frames.w)
}

pub fn transform_form<T: Scalar>(frames: &DualFrames, a: &Form<T>) -> Result<Polyform<T>> {
    transform_polyform(frames, &Polyform::from_form(a.clone()))
}

/// e^Θ = 1 + Θ (Θ∧Θ vanishes in dimension 7).
pub fn exp_theta(g: &G2Structure) -> Polyform<Q> {
    exp_trunc(&Polyform::from_form(g.theta.clone()), 7).expect("even degree")
}

/// ⋆e^Θ = vol + Ω.
pub fn star_exp_theta(g: &G2Structure) -> Polyform<Q> {
    exp_theta(g).hodge()
}

/// Swaps graph and fiber-connection data; the dual of the dual is the input.
pub fn transform_semiflat_coassoc(c: &SemiFlatCoassocCycle) -> Result<SemiFlatCoassocCycle> {
    c.validate()?;
    let all: Vec<_> = c.graph.iter().chain(&c.base_connection).chain(&c.fiber_connection).collect();
    check_base_only(&all, &[X1, X2])?;
    Ok(SemiFlatCoassocCycle {
        layout: c.layout.flip(),
        graph: c.fiber_connection.clone(),
        base_connection: c.base_connection.clone(),
        fiber_connection: c.graph.clone(),
    })
}

pub fn transform_semiflat_assoc(c: &SemiFlatAssocCycle) -> Result<SemiFlatAssocCycle> {
    c.validate()?;
    let all: Vec<_> = c
        .graph
        .iter()
        .chain(std::iter::once(&c.base_connection))
        .chain(&c.fiber_connection)
        .collect();
    check_base_only(&all, &[X1])?;
    Ok(SemiFlatAssocCycle {
        layout: c.layout.flip(),
        graph: c.fiber_connection.clone(),
        base_connection: c.base_connection.clone(),
        fiber_connection: c.graph.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cycles::semiflat::{Layout, COASSOCIATIVITY, SELF_DUALITY};
    use crate::cycles::Func;
    use crate::poly::Poly;

    #[test]
    fn t4_transform_of_exp_theta() {
        let fr = DualFrames::unit(Fibration::CoassociativeT4);
        let (gm, gw) = (fr.g2_m(), fr.g2_w());
        assert_eq!(transform_polyform(&fr, &exp_theta(&gm)).unwrap(), exp_theta(&gw));
        assert_eq!(transform_polyform(&fr, &star_exp_theta(&gm)).unwrap(), star_exp_theta(&gw));
    }

    #[test]
    fn t3_transform_exchanges_exp_theta_and_its_dual() {
        let fr = DualFrames::unit(Fibration::AssociativeT3);
        let (gm, gw) = (fr.g2_m(), fr.g2_w());
        assert_eq!(transform_polyform(&fr, &exp_theta(&gm)).unwrap(), star_exp_theta(&gw));
        assert_eq!(transform_polyform(&fr, &star_exp_theta(&gm)).unwrap(), exp_theta(&gw));
    }

    #[test]
    fn transform_of_one_is_dual_fiber_volume() {
        let fr = DualFrames::unit(Fibration::CoassociativeT4);
        let r = transform_form(&fr, &Form::constant(&fr.m, qi(1))).unwrap();
        assert_eq!(r.part(4), Form::monomial(&fr.w, &[3, 4, 5, 6], qi(1)));
    }

    #[test]
    fn curvature_powers() {
        let fr = DualFrames::unit(Fibration::CoassociativeT4);
        let f = Polyform::from_form(poincare_curvature(&fr));
        let e = exp_trunc(&f, 11).unwrap();
        assert_eq!(e.part(8), Form::monomial(&fr.product, &[3, 7, 4, 8, 5, 9, 6, 10], qi(1)));
        assert!(e.part(10).is_zero());
    }

    #[test]
    fn covolume_scaling() {
        let fr = DualFrames::new(Fibration::CoassociativeT4, &[qi(2), qi(1), qi(1), qi(3)]).unwrap();
        let top = Form::monomial(&fr.m, &[3, 4, 5, 6], qi(1));
        assert_eq!(transform_form(&fr, &top).unwrap().part(0), Form::constant(&fr.w, qi(6)));
        assert_eq!(fr.w.covolume(3), &crate::scalar::q(1, 2));
    }

    #[test]
    fn semiflat_example() {
        let p = |x: Poly| Func::Poly(x);
        let z = || p(Poly::default());
        let c = SemiFlatCoassocCycle::primal(p(Poly::var(X1)), p(Poly::var(X2)), z(), z(), z(), z());
        let t = transform_semiflat_coassoc(&c).unwrap();
        assert_eq!(t.layout, Layout::Dual);
        assert!(t.graph.iter().all(Func::is_zero));
        assert_eq!(t.fiber_connection, c.graph);
        let r = t.residual().unwrap();
        assert!(r.group_vanishes(COASSOCIATIVITY, 0.0) && r.group_vanishes(SELF_DUALITY, 0.0));
        assert_eq!(transform_semiflat_coassoc(&t).unwrap(), c);
    }

    #[test]
    fn fiber_dependent_cycle_rejected() {
        let p = |x: Poly| Func::Poly(x);
        let z = || p(Poly::default());
        let c = SemiFlatCoassocCycle::primal(p(Poly::var(4)), z(), z(), z(), z(), z());
        assert!(matches!(transform_semiflat_coassoc(&c), Err(GeomError::NotSemiFlat(_))));
    }
}
