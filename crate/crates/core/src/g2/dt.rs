use crate::error::{GeomError, Result};
use crate::exalg::Form;
use crate::g2::decompose::linear_map_matrix;
use crate::g2::symbol::SymbolComplex;
use crate::g2::G2Structure;
use crate::scalar::{q, Scalar, Q};

fn check_curvature<T: Scalar>(g: &G2Structure, f: &Form<T>) -> Result<()> {
    if f.degree() != 2 {
        return Err(GeomError::WrongDegree { expected: 2, got: f.degree() });
    }
    if f.dim() != g.frame.dim() {
        return Err(GeomError::FrameMismatch(g.frame.name().into(), f.frame().name().into()));
    }
    Ok(())
}

/// F ∧ Θ; vanishes exactly for G2-instanton curvature.
pub fn dt_residual<T: Scalar>(g: &G2Structure, f: &Form<T>) -> Result<Form<T>> {
    check_curvature(g, f)?;
    let theta = g.theta_as::<T>().reindex(f.frame(), &(0..f.dim()).collect::<Vec<_>>());
    f.try_wedge(&theta)
}

/// F ∧ Θ + F³/6, the deformed Donaldson-Thomas 6-form.
pub fn deformed_dt_residual<T: Scalar>(g: &G2Structure, f: &Form<T>) -> Result<Form<T>> {
    let lin = dt_residual(g, f)?;
    let cube = f.try_wedge(f)?.try_wedge(f)?;
    lin.try_add(&cube.scale(&T::from_q(&q(1, 6))))
}

/// Symbol complex 0 → Λ⁰ → Λ¹ → Λ⁶ → Λ⁷ → 0 at covector ξ, maps ξ∧, ξ∧Θ∧, ξ∧.
pub fn dt_symbol_complex(g: &G2Structure, xi: &[Q]) -> Result<SymbolComplex> {
    let n = g.frame.dim();
    if xi.len() != n {
        return Err(GeomError::Arity { expected: n, got: xi.len() });
    }
    let xi_form = Form::from_vector(&g.frame, 1, xi);
    let xi_theta = xi_form.wedge(&g.theta);
    let d0 = linear_map_matrix(&g.frame, 0, |a| xi_form.wedge(a));
    let d1 = linear_map_matrix(&g.frame, 1, |a| xi_theta.wedge(a));
    let d2 = linear_map_matrix(&g.frame, 6, |a| xi_form.wedge(a));
    Ok(SymbolComplex {
        dims: vec![1, 7, 7, 1],
        maps: vec![d0, d1, d2],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::g2::{g2_frame, X1, X2, Y0, Y1};
    use crate::scalar::qi;

    #[test]
    fn instanton_in_fourteen_has_zero_residual() {
        let g = G2Structure::standard();
        let f = g2_frame();
        // dx¹² − dy⁰¹ ... pick an element of Λ²₁₄ from the decomposition
        let d = crate::g2::g2_decomposition(&g, 2).unwrap();
        let b = &d.basis_forms("14").unwrap()[0];
        assert!(dt_residual(&g, b).unwrap().is_zero());
        let s = Form::monomial(&f, &[X1, X2], qi(1));
        assert!(!dt_residual(&g, &s).unwrap().is_zero());
        let _ = (Y0, Y1);
    }

    #[test]
    fn symbol_complex_is_exact_for_nonzero_covector() {
        let g = G2Structure::standard();
        let xi: Vec<Q> = [1, 0, 2, 0, -1, 0, 3].iter().map(|&x| qi(x)).collect();
        let r = dt_symbol_complex(&g, &xi).unwrap().analyze();
        assert!(r.is_complex);
        assert!(r.exact, "{r:?}");
        assert_eq!(r.ranks, vec![1, 6, 1]);
    }
}
