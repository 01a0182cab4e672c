use serde::Serialize;

use crate::error::{GeomError, Result};
use crate::g2::G2Structure;
use crate::linalg;

use crate::scalar::Field;

/// A k-plane in R⁷ spanned by `vectors` (not necessarily orthonormal).
#[derive(Clone, Debug, PartialEq)]
pub struct Plane<T> {
    pub vectors: Vec<Vec<T>>,
}

impl<T: Field> Plane<T> {
    pub fn new(vectors: Vec<Vec<T>>) -> Self {
        Self { vectors }
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn gram(&self) -> linalg::Mat<T> {
        let v = &self.vectors;
        v.iter()
            .map(|a| v.iter().map(|b| linalg::dot(a, b)).collect())
            .collect()
    }

    fn to_f64(&self) -> Vec<Vec<f64>> {
        self.vectors
            .iter()
            .map(|v| v.iter().map(Field::approx).collect())
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PlaneKind {
    Associative,
    Coassociative,
    Neither,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CalibrationVerdict {
    pub dimension: usize,
    /// Ω or Θ evaluated on the spanning vectors.
    pub value: f64,
    /// Volume of the parallelepiped spanned by the vectors.
    pub volume: f64,
    /// Signed ratio value / volume.
    pub ratio: f64,
    /// |ratio| = 1 (within tolerance, or exactly for tolerance 0).
    pub calibrated_by_ratio: bool,
    /// Norm of the χ-restriction (3-planes) or Ω-restriction (4-planes) on an orthonormal frame.
    pub residual_norm: f64,
    pub calibrated_by_residual: bool,
    pub kind: PlaneKind,
}

/// Orthonormal frame by Gram-Schmidt.
fn orthonormalize(vs: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = Vec::new();
    for v in vs {
        let mut w = v.clone();
        for u in &out {
            let c: f64 = w.iter().zip(u).map(|(a, b)| a * b).sum();
            for (x, y) in w.iter_mut().zip(u) {
                *x -= c * y;
            }
        }
        let n = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        out.push(w.into_iter().map(|x| x / n).collect());
    }
    out
}

fn triples(k: usize) -> Vec<[usize; 3]> {
    let mut out = Vec::new();
    for i in 0..k {
        for j in i + 1..k {
            for l in j + 1..k {
                out.push([i, j, l]);
            }
        }
    }
    out
}

/// Classifies a 3- or 4-plane. With `tol = 0` and exact scalars every test is exact.
pub fn calibrate_plane<T: Field>(g: &G2Structure, plane: &Plane<T>, tol: f64) -> Result<CalibrationVerdict> {
    let k = plane.dim();
    if k != 3 && k != 4 {
        return Err(GeomError::Arity { expected: 3, got: k });
    }
    if plane.vectors.iter().any(|v| v.len() != g.frame.dim()) {
        return Err(GeomError::Arity {
            expected: g.frame.dim(),
            got: plane.vectors.iter().map(Vec::len).find(|&l| l != g.frame.dim()).unwrap_or(0),
        });
    }
    let gram = plane.gram();
    let gdet = linalg::det(&gram);
    let scale: f64 = (0..k).map(|i| gram[i][i].approx()).product();
    if gdet.magnitude() <= tol * scale || gdet.is_zero() {
        return Err(GeomError::Degenerate);
    }
    let value = if k == 3 {
        g.omega_as::<T>().evaluate(&plane.vectors)?
    } else {
        g.theta_as::<T>().evaluate(&plane.vectors)?
    };
    let r2 = value.clone() * value.clone() / gdet.clone();
    let calibrated_by_ratio = (r2 - T::one()).magnitude() <= 2.0 * tol;

    // residual: χ on 3-planes, Ω on 4-planes
    let raw: Vec<T> = if k == 3 {
        g.chi()
            .components()
            .iter()
            .map(|c| c.map(T::from_q).evaluate(&plane.vectors))
            .collect::<Result<_>>()?
    } else {
        let om = g.omega_as::<T>();
        triples(4)
            .iter()
            .map(|t| om.evaluate(&t.iter().map(|&i| plane.vectors[i].clone()).collect::<Vec<_>>()))
            .collect::<Result<_>>()?
    };
    let on = orthonormalize(&plane.to_f64());
    let residual_norm = if k == 3 {
        g.chi()
            .components()
            .iter()
            .map(|c| c.to_f64().evaluate(&on).map(|x| x * x))
            .sum::<Result<f64>>()?
            .sqrt()
    } else {
        let om = g.omega.to_f64();
        triples(4)
            .iter()
            .map(|t| om.evaluate(&t.iter().map(|&i| on[i].clone()).collect::<Vec<_>>()).map(|x| x * x))
            .sum::<Result<f64>>()?
            .sqrt()
    };
    let calibrated_by_residual = if tol == 0.0 {
        raw.iter().all(|x| x.is_zero())
    } else {
        residual_norm <= tol
    };

    let value_f = value.approx();
    let volume = gdet.approx().sqrt();
    let kind = match (k, calibrated_by_ratio) {
        (3, true) => PlaneKind::Associative,
        (4, true) => PlaneKind::Coassociative,
        _ => PlaneKind::Neither,
    };
    Ok(CalibrationVerdict {
        dimension: k,
        value: value_f,
        volume,
        ratio: value_f / volume,
        calibrated_by_ratio,
        residual_norm,
        calibrated_by_residual,
        kind,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exalg::basis_vector;
    use crate::g2::{X1, X2, X3, Y0, Y1, Y2, Y3};
    use crate::scalar::{qi, Q};

    fn e(i: usize) -> Vec<Q> {
        basis_vector(7, i)
    }

    #[test]
    fn coordinate_associative_planes() {
        let g = G2Structure::standard();
        let v = calibrate_plane(&g, &Plane::new(vec![e(X1), e(X2), e(X3)]), 0.0).unwrap();
        assert_eq!(v.kind, PlaneKind::Associative);
        assert!(v.calibrated_by_residual);
        assert_eq!(v.ratio, 1.0);
        let v = calibrate_plane(&g, &Plane::new(vec![e(X1), e(Y1), e(Y0)]), 0.0).unwrap();
        assert_eq!(v.ratio, -1.0);
        assert_eq!(v.kind, PlaneKind::Associative);
    }

    #[test]
    fn coassociative_fiber() {
        let g = G2Structure::standard();
        let v = calibrate_plane(&g, &Plane::new(vec![e(Y0), e(Y1), e(Y2), e(Y3)]), 0.0).unwrap();
        assert_eq!(v.kind, PlaneKind::Coassociative);
        assert!(v.calibrated_by_residual);
    }

    #[test]
    fn generic_plane_is_neither() {
        let g = G2Structure::standard();
        let mut a = e(X1);
        a[Y0] = qi(1);
        let v = calibrate_plane(&g, &Plane::new(vec![a, e(X2), e(Y1)]), 0.0).unwrap();
        assert_eq!(v.kind, PlaneKind::Neither);
        assert!(!v.calibrated_by_residual);
    }

    #[test]
    fn degenerate_rejected() {
        let g = G2Structure::standard();
        let p = Plane::new(vec![e(X1), e(X1), e(X2)]);
        assert_eq!(calibrate_plane(&g, &p, 0.0), Err(GeomError::Degenerate));
    }

    #[test]
    fn float_tolerance_on_rotated_plane() {
        let g = G2Structure::standard();
        let (c, s) = (0.3f64.cos(), 0.3f64.sin());
        // rotation in the x2-x3 plane preserves span
        let mut u = vec![0.0; 7];
        u[X2] = c;
        u[X3] = s;
        let mut w = vec![0.0; 7];
        w[X2] = -s;
        w[X3] = c;
        let mut x = vec![0.0; 7];
        x[X1] = 2.0;
        let v = calibrate_plane(&g, &Plane::new(vec![x, u, w]), 1e-9).unwrap();
        assert_eq!(v.kind, PlaneKind::Associative);
        assert!(v.calibrated_by_residual);
    }
}
