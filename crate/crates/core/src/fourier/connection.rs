use std::sync::Arc;

use rayon::prelude::*;

use crate::cycles::func::{Func, Grid};
use crate::cycles::section::{graph_plane, JetPoint, SectionCycle, SectionKind};
use crate::error::{GeomError, Result};
use crate::exalg::{permutation_sign, CoordFrame, Form};
use crate::g2::G2Structure;
use crate::linalg::{self, Mat};
use crate::fourier::{DualFrames, Fibration};
use crate::poly::{exterior_derivative, Poly};
use crate::scalar::Scalar;

/// Abelian connection d + Σ_c A_c dw^c on W; one coefficient per W coordinate.
#[derive(Clone, Debug, PartialEq)]
pub struct ConnectionOnW {
    pub frame: Arc<CoordFrame>,
    pub coeffs: Vec<Func>,
    curvature: Curvature,
}

#[derive(Clone, Debug, PartialEq)]
enum Curvature {
    Exact(Form<Poly>),
    Sampled { layout: Grid, forms: Vec<Form<f64>> },
}

impl ConnectionOnW {
    pub fn new(frame: &Arc<CoordFrame>, coeffs: Vec<Func>) -> Result<Self> {
        if coeffs.len() != frame.dim() {
            return Err(GeomError::Arity {
                expected: frame.dim(),
                got: coeffs.len(),
            });
        }
        let curvature = match Func::common_layout(&coeffs)? {
            None => {
                let a = coeffs.iter().enumerate().fold(Form::zero(frame, 1), |acc, (c, f)| match f {
                    Func::Poly(p) => &acc + &Form::monomial(frame, &[c], p.clone()),
                    Func::Grid(_) => unreachable!("layout checked"),
                });
                Curvature::Exact(exterior_derivative(&a))
            }
            Some(layout) => {
                let n = frame.dim();
                // ∂_v A_c for every pair
                let derivs: Vec<Vec<Vec<f64>>> = coeffs
                    .iter()
                    .map(|f| match f {
                        Func::Grid(g) => layout.axes.iter().map(|&v| g.derivative(v).values).collect(),
                        Func::Poly(_) => unreachable!("layout checked"),
                    })
                    .collect();
                let forms = (0..layout.len())
                    .into_par_iter()
                    .map(|node| {
                        let mut f = Form::<f64>::zero(frame, 2);
                        for c in 0..n {
                            for (k, &v) in layout.axes.iter().enumerate() {
                                let d = derivs[c][k][node];
                                if d != 0.0 && v != c {
                                    f = &f + &Form::monomial(frame, &[v, c], d);
                                }
                            }
                        }
                        f
                    })
                    .collect();
                Curvature::Sampled { layout, forms }
            }
        };
        Ok(Self {
            frame: frame.clone(),
            coeffs,
            curvature,
        })
    }

    /// dA with polynomial coefficients, if the connection is polynomial.
    pub fn exact_curvature(&self) -> Option<&Form<Poly>> {
        match &self.curvature {
            Curvature::Exact(f) => Some(f),
            Curvature::Sampled { .. } => None,
        }
    }

    /// Curvature 2-forms at the grid nodes (finite differences), if sampled.
    pub fn sampled_curvature(&self) -> Option<(&Grid, &[Form<f64>])> {
        match &self.curvature {
            Curvature::Exact(_) => None,
            Curvature::Sampled { layout, forms } => Some((layout, forms)),
        }
    }

    /// Curvature evaluated at an ambient point (polynomial) or at a grid node.
    pub fn curvature_at(&self, point: &[f64]) -> Form<f64> {
        match &self.curvature {
            Curvature::Exact(f) => f.map(|p| p.eval(point)),
            Curvature::Sampled { layout, forms } => {
                let mut flat = 0;
                for (a, &ax) in layout.axes.iter().enumerate() {
                    let i = ((point[ax] / layout.spacing(a)).round() as i64).rem_euclid(layout.shape[a] as i64);
                    flat = flat * layout.shape[a] + i as usize;
                }
                forms[flat].clone()
            }
        }
    }
}

/// D′ = d + Σ a_i dx^i + Σ f^k dy_k (associative sections, T⁴ fibration) or
/// d + Σ a_j dy^j + Σ g^b dx_b (coassociative sections, T³ fibration).
pub fn transform_section(s: &SectionCycle) -> Result<ConnectionOnW> {
    s.validate()?;
    let frames = match s.kind {
        SectionKind::AssociativeSection => DualFrames::unit(Fibration::CoassociativeT4),
        SectionKind::CoassociativeSection => DualFrames::unit(Fibration::AssociativeT3),
    };
    let coeffs: Vec<Func> = match s.kind {
        SectionKind::AssociativeSection => s.connection.iter().chain(&s.components).cloned().collect(),
        SectionKind::CoassociativeSection => s.components.iter().chain(&s.connection).cloned().collect(),
    };
    ConnectionOnW::new(&frames.w, coeffs)
}

/// Curvature on W of the transformed connection at one point, from the jet of the
/// section and the base curvature `da` (components (da)_{ij}, i < j, over the base
/// coordinates). Associative: F = da + Σ f^k_{x^i} dx^i∧dy_k. Coassociative:
/// F = da + Σ g^b_{y^μ} dy^μ∧dx_b.
pub fn section_curvature<T: Scalar>(frame: &Arc<CoordFrame>, jet: &JetPoint<T>, da: &[T]) -> Result<Form<T>> {
    let (base, npairs): (Vec<usize>, usize) = match jet.kind {
        SectionKind::AssociativeSection => ((0..3).collect(), 3),
        SectionKind::CoassociativeSection => ((3..7).collect(), 6),
    };
    if da.len() != npairs {
        return Err(GeomError::Arity {
            expected: npairs,
            got: da.len(),
        });
    }
    let mut f = Form::zero(frame, 2);
    let mut n = 0;
    for i in 0..base.len() {
        for j in i + 1..base.len() {
            f = &f + &Form::monomial(frame, &[base[i], base[j]], da[n].clone());
            n += 1;
        }
    }
    for i in 0..3 {
        for m in 0..4 {
            let c = jet.partial(i, m).clone();
            let idx = match jet.kind {
                // f^m_{x^i} dx^i ∧ dy_m
                SectionKind::AssociativeSection => [i, 3 + m],
                // g^i_{y^m} dy^m ∧ dx_i
                SectionKind::CoassociativeSection => [3 + m, i],
            };
            f = &f + &Form::monomial(frame, &idx, c);
        }
    }
    Ok(f)
}

/// Base curvature compatible with a coassociative jet: the part of `c` (components
/// over y-pairs (01, 02, 03, 12, 13, 23)) that is self-dual or anti-self-dual for
/// the graph metric h = I + GᵀG, G[b][μ] = g^b_{y^μ}, with the sign given by the
/// orientation Θ induces on the graph. Paired with a residual-free jet the
/// transformed curvature then solves the deformed equation on W.
pub fn compatible_base_curvature(jet: &JetPoint<f64>, c: &[f64]) -> Result<Vec<f64>> {
    if jet.kind != SectionKind::CoassociativeSection {
        return Err(GeomError::Mismatch("expected a coassociative-section jet".into()));
    }
    if c.len() != 6 {
        return Err(GeomError::Arity { expected: 6, got: c.len() });
    }
    let h: Mat<f64> = (0..4)
        .map(|m| {
            (0..4)
                .map(|n| f64::from(u8::from(m == n)) + (0..3).map(|b| jet.partial(b, m) * jet.partial(b, n)).sum::<f64>())
                .collect()
        })
        .collect();
    let hinv = linalg::inverse(&h).ok_or_else(|| GeomError::Mismatch("degenerate graph metric".into()))?;
    let vol = linalg::det(&h).sqrt();
    let plane = graph_plane(jet);
    let o = G2Structure::standard().theta.to_f64().evaluate(&plane.vectors)?.signum();
    let pairs: Vec<(usize, usize)> = (0..4).flat_map(|m| (m + 1..4).map(move |n| (m, n))).collect();
    let mut a = vec![vec![0.0; 4]; 4];
    for (&(m, n), &v) in pairs.iter().zip(c) {
        a[m][n] = v;
        a[n][m] = -v;
    }
    let up = linalg::matmul(&linalg::matmul(&hinv, &a), &hinv);
    Ok(pairs
        .iter()
        .zip(c)
        .map(|(&(m, n), &v)| {
            let mut star = 0.0;
            for p in 0..4 {
                for q in 0..4 {
                    if [p, q].iter().all(|x| *x != m && *x != n) && p != q {
                        star += 0.5 * up[p][q] * f64::from(permutation_sign(&[p, q, m, n]));
                    }
                }
            }
            0.5 * (v + o * vol * star)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cycles::quaternion::Quaternion;
    use crate::cycles::section::solve_first_partial;
    use crate::g2::deformed_dt_residual;
    use crate::scalar::{qi, Q};

    type H = Quaternion<Q>;

    #[test]
    fn conforming_associative_jet_gives_deformed_instanton() {
        let fr = DualFrames::unit(Fibration::CoassociativeT4);
        let g = fr.g2_w();
        let p2 = H::new(qi(1), qi(-2), qi(0), qi(1));
        let p3 = H::new(qi(0), qi(1), qi(3), qi(-1));
        let p1 = solve_first_partial(&p2, &p3).unwrap();
        let jet = JetPoint::new(SectionKind::AssociativeSection, [p1, p2.clone(), p3.clone()]);
        let f = section_curvature(&fr.w, &jet, &[qi(0), qi(0), qi(0)]).unwrap();
        assert!(deformed_dt_residual(&g, &f).unwrap().is_zero());
        let f = section_curvature(&fr.w, &jet, &[qi(1), qi(0), qi(0)]).unwrap();
        assert!(!deformed_dt_residual(&g, &f).unwrap().is_zero());
        let bad = JetPoint::new(SectionKind::AssociativeSection, [H::one(), p2, p3]);
        let f = section_curvature(&fr.w, &bad, &[qi(0), qi(0), qi(0)]).unwrap();
        assert!(!deformed_dt_residual(&g, &f).unwrap().is_zero());
    }

    #[test]
    fn coassociative_jet_with_compatible_base_curvature() {
        let fr = DualFrames::unit(Fibration::AssociativeT3);
        let g = fr.g2_w();
        let p2 = Quaternion::<f64>::new(0.3, -0.2, 0.5, 0.1);
        let p3 = Quaternion::<f64>::new(-0.4, 0.2, 0.1, 0.7);
        let p1 = solve_first_partial(&p2, &p3).unwrap();
        let jet = JetPoint::new(SectionKind::CoassociativeSection, [p1, p2, p3]);
        assert!(crate::cycles::coassoc_section_residual(&jet).unwrap().max_abs() < 1e-12);
        let c = [0.7, -1.1, 0.4, 0.9, 0.2, -0.5];
        let da = compatible_base_curvature(&jet, &c).unwrap();
        let f = section_curvature(&fr.w, &jet, &da).unwrap();
        assert!(deformed_dt_residual(&g, &f).unwrap().max_abs() < 1e-9);
        let f = section_curvature(&fr.w, &jet, &c).unwrap();
        assert!(deformed_dt_residual(&g, &f).unwrap().max_abs() > 1e-3);
    }

    #[test]
    fn polynomial_transformed_section_curvature() {
        // f = x1·i + x2·j + x3·k scaled by 2, a = 0
        let z = || Func::Poly(Poly::default());
        let s = SectionCycle {
            kind: SectionKind::AssociativeSection,
            components: vec![
                z(),
                Func::Poly(Poly::monomial(&[(0, 1)], qi(2))),
                Func::Poly(Poly::monomial(&[(1, 1)], qi(2))),
                Func::Poly(Poly::monomial(&[(2, 1)], qi(2))),
            ],
            connection: vec![z(), z(), z()],
        };
        let c = transform_section(&s).unwrap();
        let f = c.exact_curvature().unwrap();
        assert_eq!(f.coeff(&[0, 4]), Poly::constant(qi(2)));
        assert_eq!(f.len(), 3);
    }

    #[test]
    fn sampled_curvature_matches_difference_quotients() {
        let fr = DualFrames::unit(Fibration::CoassociativeT4);
        let grid = |f: fn(&[f64]) -> f64| Func::Grid(Grid::sample(&[0, 1, 2], &[8, 8, 8], &[1.0; 3], 7, f).unwrap());
        let zero = || grid(|_| 0.0);
        let mut coeffs: Vec<Func> = (0..7).map(|_| zero()).collect();
        coeffs[4] = grid(|p| (std::f64::consts::TAU * p[0]).sin());
        let c = ConnectionOnW::new(&fr.w, coeffs).unwrap();
        let (_, forms) = c.sampled_curvature().unwrap();
        let h = 1.0 / 8.0;
        let expected = ((std::f64::consts::TAU * h).sin() - (std::f64::consts::TAU * -h).sin()) / (2.0 * h);
        assert!((forms[0].coeff(&[0, 4]) - expected).abs() < 1e-12);
    }
}
