use std::sync::Arc;

use crate::error::{GeomError, Result};
use crate::exalg::blade::{self, Blade};
use crate::exalg::form::Form;
use crate::exalg::frame::{permutation_sign, CoordFrame};
use crate::exalg::polyform::Polyform;
use crate::scalar::Scalar;

/// Integration along a torus fiber.
///
/// `fiber` lists the fiber coordinates in their orientation order. A term
/// β ∧ dy^{fiber} maps to β times the fiber covolume; terms of lower fiber
/// degree are dropped. The remaining coordinates, in increasing order, become
/// coordinates 0.. of `target`.
pub fn fiber_integrate<T: Scalar>(
    a: &Form<T>,
    fiber: &[usize],
    target: &Arc<CoordFrame>,
) -> Result<Form<T>> {
    let src = a.frame();
    let n = src.dim();
    if fiber.iter().any(|&i| i >= n) {
        return Err(GeomError::InvalidFrame("fiber coordinate out of range".into()));
    }
    let (_, fiber_mask): (i32, Blade) = blade::blade_of(fiber)
        .ok_or_else(|| GeomError::InvalidFrame("repeated fiber coordinate".into()))?;
    let rest: Vec<usize> = (0..n).filter(|i| fiber_mask & (1 << i) == 0).collect();
    if rest.len() != target.dim() {
        return Err(GeomError::FrameMismatch(
            src.name().to_string(),
            target.name().to_string(),
        ));
    }
    for (_, c) in a.iter() {
        if let Some(&v) = fiber.iter().find(|&&v| c.depends_on(v)) {
            return Err(GeomError::FiberDependence(src.label(v).to_string()));
        }
    }
    let orient = permutation_sign(fiber);
    let covol = fiber
        .iter()
        .fold(T::one(), |acc, &i| acc * T::from_q(src.covolume(i)));
    if a.degree() < fiber.len() {
        return Ok(Form::zero(target, 0));
    }
    let mut terms = Vec::new();
    for (b, c) in a.terms() {
        if b & fiber_mask != fiber_mask {
            continue;
        }
        let base = b & !fiber_mask;
        // e_b = s · e_base ∧ e_{fiber sorted}
        let (s, _) = blade::wedge_blades(base, fiber_mask).expect("disjoint");
        let idx: Vec<usize> = blade::indices(base)
            .into_iter()
            .map(|i| rest.binary_search(&i).expect("base index"))
            .collect();
        let v = c.clone() * covol.clone();
        terms.push((idx, if s * orient < 0 { -v } else { v }));
    }
    Form::from_terms(target, a.degree() - fiber.len(), terms)
}

pub fn fiber_integrate_poly<T: Scalar>(
    a: &Polyform<T>,
    fiber: &[usize],
    target: &Arc<CoordFrame>,
) -> Result<Polyform<T>> {
    let mut out = Polyform::zero(target);
    for f in a.parts() {
        if f.degree() >= fiber.len() {
            out.add_form(&fiber_integrate(f, fiber, target)?)?;
        }
    }
    Ok(out)
}
