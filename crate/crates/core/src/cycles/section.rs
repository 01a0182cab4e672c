//! Graphs of sections of flat torus fibrations and their first-order residuals.
//!
//! An associative section is f = (f⁰, f¹, f², f³) : R³ → H over the base
//! x1, x2, x3; a coassociative section is g = (g¹, g², g³) : H → R³ over the
//! base y0..y3. In both cases the jet is three quaternions: ∂f/∂x^i, or the
//! gradients ∇g^b = (∂g^b/∂y⁰, …, ∂g^b/∂y³).

use serde::{Deserialize, Serialize};

use crate::cycles::func::{Func, Grid};
use crate::cycles::quaternion::{triple_cross, Quaternion};
use crate::error::{GeomError, Result};
use crate::g2::{Plane, X1, Y0};
use crate::linalg;
use crate::poly::Poly;
use crate::scalar::{Field, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SectionKind {
    AssociativeSection,
    CoassociativeSection,
}

/// First partial derivatives of a section at one point.
#[derive(Clone, Debug, PartialEq)]
pub struct JetPoint<T> {
    pub kind: SectionKind,
    pub partials: [Quaternion<T>; 3],
}

impl<T: Scalar> JetPoint<T> {
    pub fn new(kind: SectionKind, partials: [Quaternion<T>; 3]) -> Self {
        Self { kind, partials }
    }

    pub fn zero(kind: SectionKind) -> Self {
        Self::new(kind, [Quaternion::zero(), Quaternion::zero(), Quaternion::zero()])
    }

    /// Component m of ∂f/∂x^i (associative) or ∂g^i/∂y^m (coassociative), i = 0..3.
    pub fn partial(&self, i: usize, m: usize) -> &T {
        &self.partials[i].0[m]
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U + Copy) -> JetPoint<U> {
        JetPoint {
            kind: self.kind,
            partials: [self.partials[0].map(f), self.partials[1].map(f), self.partials[2].map(f)],
        }
    }
}

/// −p₁·i − p₂·j − p₃·k with right multiplication.
pub fn linear_part<T: Scalar>(p: &[Quaternion<T>; 3]) -> Quaternion<T> {
    -(p[0].clone() * Quaternion::i() + p[1].clone() * Quaternion::j() + p[2].clone() * Quaternion::k())
}

/// p₁×p₂×p₃ − (−p₁·i − p₂·j − p₃·k).
fn residual<T: Scalar>(p: &[Quaternion<T>; 3]) -> Quaternion<T> {
    triple_cross(&p[0], &p[1], &p[2]) - linear_part(p)
}

pub fn assoc_section_residual<T: Scalar>(j: &JetPoint<T>) -> Result<Quaternion<T>> {
    if j.kind != SectionKind::AssociativeSection {
        return Err(GeomError::Mismatch("expected an associative-section jet".into()));
    }
    Ok(residual(&j.partials))
}

pub fn coassoc_section_residual<T: Scalar>(j: &JetPoint<T>) -> Result<Quaternion<T>> {
    if j.kind != SectionKind::CoassociativeSection {
        return Err(GeomError::Mismatch("expected a coassociative-section jet".into()));
    }
    Ok(residual(&j.partials))
}

/// The linear side written out component by component, f^m_{x^i} = partial(i-1, m).
pub fn linear_part_expanded<T: Scalar>(j: &JetPoint<T>) -> Quaternion<T> {
    let f = |i: usize, m: usize| j.partial(i - 1, m).clone();
    Quaternion::new(
        f(1, 1) + f(2, 2) + f(3, 3),
        -f(1, 0) + f(2, 3) - f(3, 2),
        -f(1, 3) - f(2, 0) + f(3, 1),
        f(1, 2) - f(2, 1) - f(3, 0),
    )
}

/// Tangent plane of the graph: ∂x^i + Σ_k f^k_{x^i}∂y^k, or ∂y^a + Σ_b g^b_{y^a}∂x^b.
pub fn graph_plane<T: Field>(j: &JetPoint<T>) -> Plane<T> {
    let vectors = match j.kind {
        SectionKind::AssociativeSection => (0..3)
            .map(|i| {
                let mut v = vec![T::zero(); 7];
                v[X1 + i] = T::one();
                for k in 0..4 {
                    v[Y0 + k] = j.partial(i, k).clone();
                }
                v
            })
            .collect(),
        SectionKind::CoassociativeSection => (0..4)
            .map(|a| {
                let mut v = vec![T::zero(); 7];
                v[Y0 + a] = T::one();
                for b in 0..3 {
                    v[X1 + b] = j.partial(b, a).clone();
                }
                v
            })
            .collect(),
    };
    Plane::new(vectors)
}

/// Given p₂, p₃, the p₁ making the residual vanish (the residual is affine in p₁),
/// or None if the linear system is singular.
pub fn solve_first_partial<T: Field>(p2: &Quaternion<T>, p3: &Quaternion<T>) -> Option<Quaternion<T>> {
    let zero = Quaternion::zero();
    let offset = residual(&[zero, p2.clone(), p3.clone()]);
    let cols: Vec<Vec<T>> = (0..4)
        .map(|n| {
            let e = Quaternion::basis(n);
            (residual(&[e, p2.clone(), p3.clone()]) - offset.clone()).to_vec()
        })
        .collect();
    let m = linalg::transpose(&cols);
    let rhs: Vec<T> = offset.0.iter().map(|x| -x.clone()).collect();
    linalg::solve(&m, &rhs).map(|v| Quaternion::from_slice(&v))
}

/// A section over its base together with a flat-connection candidate.
#[derive(Clone, Debug, PartialEq)]
pub struct SectionCycle {
    pub kind: SectionKind,
    /// f⁰..f³ (functions of x1..x3) or g¹..g³ (functions of y0..y3).
    pub components: Vec<Func>,
    /// a₁..a₃ on the base (associative) or a₀..a₃ (coassociative).
    pub connection: Vec<Func>,
}

/// Residual fields of a section cycle.
#[derive(Clone, Debug, PartialEq)]
pub struct SectionResidual {
    /// Quaternion components of p₁×p₂×p₃ − linear part.
    pub section: [Func; 4],
    /// (da)_{ij} for i < j in base coordinates.
    pub flatness: Vec<Func>,
}

impl SectionResidual {
    pub fn section_sup(&self) -> f64 {
        self.section.iter().map(Func::sup_norm).fold(0.0, f64::max)
    }

    pub fn flatness_sup(&self) -> f64 {
        self.flatness.iter().map(Func::sup_norm).fold(0.0, f64::max)
    }
}

impl SectionCycle {
    pub fn base_coords(&self) -> Vec<usize> {
        match self.kind {
            SectionKind::AssociativeSection => (0..3).map(|i| X1 + i).collect(),
            SectionKind::CoassociativeSection => (0..4).map(|a| Y0 + a).collect(),
        }
    }

    pub fn validate(&self) -> Result<Option<Grid>> {
        let (nc, na) = match self.kind {
            SectionKind::AssociativeSection => (4, 3),
            SectionKind::CoassociativeSection => (3, 4),
        };
        if self.components.len() != nc || self.connection.len() != na {
            return Err(GeomError::Mismatch(format!(
                "expected {nc} section components and {na} connection coefficients"
            )));
        }
        Func::common_layout(self.components.iter().chain(&self.connection))
    }

    /// Jet matrix entries as functions: entry (i, m) as in `JetPoint::partial`.
    fn jet_funcs(&self) -> Vec<Vec<Func>> {
        let base = self.base_coords();
        match self.kind {
            SectionKind::AssociativeSection => (0..3)
                .map(|i| (0..4).map(|m| self.components[m].derivative(base[i])).collect())
                .collect(),
            SectionKind::CoassociativeSection => (0..3)
                .map(|b| (0..4).map(|m| self.components[b].derivative(base[m])).collect())
                .collect(),
        }
    }

    pub fn residual(&self) -> Result<SectionResidual> {
        let layout = self.validate()?;
        let jets = self.jet_funcs();
        let section: [Func; 4] = match layout {
            None => {
                let as_poly = |f: &Func| match f {
                    Func::Poly(p) => p.clone(),
                    Func::Grid(_) => unreachable!("validated"),
                };
                let p: Vec<Quaternion<Poly>> = jets
                    .iter()
                    .map(|row| Quaternion::from_slice(&row.iter().map(as_poly).collect::<Vec<_>>()))
                    .collect();
                let r = residual(&[p[0].clone(), p[1].clone(), p[2].clone()]);
                r.0.map(Func::Poly)
            }
            Some(grid) => {
                let vals = |f: &Func| match f {
                    Func::Grid(g) => g.values.clone(),
                    Func::Poly(_) => unreachable!("validated"),
                };
                let cols: Vec<Vec<Vec<f64>>> = jets.iter().map(|row| row.iter().map(vals).collect()).collect();
                let mut out = [vec![], vec![], vec![], vec![]];
                for n in 0..grid.len() {
                    let q = |i: usize| Quaternion::new(cols[i][0][n], cols[i][1][n], cols[i][2][n], cols[i][3][n]);
                    let r = residual(&[q(0), q(1), q(2)]);
                    for c in 0..4 {
                        out[c].push(r.0[c]);
                    }
                }
                out.map(|values| Func::Grid(Grid { values, ..grid.clone() }))
            }
        };
        Ok(SectionResidual {
            section,
            flatness: self.flatness()?,
        })
    }

    fn flatness(&self) -> Result<Vec<Func>> {
        let base = self.base_coords();
        let mut out = Vec::new();
        for i in 0..base.len() {
            for j in i + 1..base.len() {
                let c = self.connection[j]
                    .derivative(base[i])
                    .try_sub(&self.connection[i].derivative(base[j]))?;
                out.push(c);
            }
        }
        Ok(out)
    }
}
