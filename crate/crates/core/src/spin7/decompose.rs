use std::sync::OnceLock;

use nalgebra::DMatrix;

use crate::error::{GeomError, Result};
use crate::exalg::action::{act, stabilizer_algebra};
use crate::exalg::{basis_forms, Form};
use crate::g2::decompose::{eigenspace, linear_map_matrix};
use crate::g2::{Component, Decomposition};
use crate::linalg::{self, Mat};
use crate::scalar::{qi, to_f64, Q};
use crate::spin7::{spin7_frame, theta_z};

/// Eigenvalues closer than this are one cluster.
const CLUSTER_TOL: f64 = 1e-8;

/// B(X, Y) = −tr(XY), positive on so(n).
fn trace_form(a: &Mat<Q>, b: &Mat<Q>) -> Q {
    let n = a.len();
    let mut acc = qi(0);
    for i in 0..n {
        for j in 0..n {
            acc -= &a[i][j] * &b[j][i];
        }
    }
    acc
}

fn orthogonal_basis(mats: Vec<Mat<Q>>) -> Vec<Mat<Q>> {
    let mut out: Vec<Mat<Q>> = Vec::new();
    for m in mats {
        let mut w = m;
        for u in &out {
            let c = trace_form(&w, u) / trace_form(u, u);
            w = linalg::sub_mat(&w, &linalg::scale_mat(u, &c));
        }
        out.push(w);
    }
    out
}

/// Quadratic Casimir Σ ρ(X_i)² / B(X_i, X_i) on Λᵏ for a B-orthogonal basis X_i
/// of the stabilizer. Each column is built by acting twice on a monomial.
fn casimir(degree: usize) -> Mat<Q> {
    let frame = spin7_frame();
    let basis = orthogonal_basis(stabilizer_algebra(&theta_z()));
    let monomials = basis_forms::<Q>(&frame, degree);
    let cols: Vec<Vec<Q>> = monomials
        .iter()
        .map(|e| {
            let mut acc = Form::zero(&frame, degree);
            for x in &basis {
                let twice = act(x, &act(x, e));
                acc = &acc + &twice.scale(&(qi(1) / trace_form(x, x)));
            }
            acc.to_vector()
        })
        .collect();
    linalg::transpose(&cols)
}

/// Nearest fraction with denominator at most 720 within the cluster tolerance.
fn rationalize(x: f64) -> Option<Q> {
    (1..=720i64).find_map(|d| {
        let n = (x * d as f64).round();
        ((x - n / d as f64).abs() < CLUSTER_TOL).then(|| crate::scalar::q(n as i64, d))
    })
}

/// Distinct eigenvalues with multiplicities of a symmetric rational matrix.
fn eigen_clusters(m: &Mat<Q>) -> Result<Vec<(Q, usize)>> {
    let n = m.len();
    let dm = DMatrix::from_fn(n, n, |i, j| to_f64(&m[i][j]));
    let mut vals: Vec<f64> = dm.symmetric_eigen().eigenvalues.iter().copied().collect();
    vals.sort_by(|a, b| a.total_cmp(b));
    let mut clusters: Vec<(f64, usize)> = Vec::new();
    for v in vals {
        match clusters.last_mut() {
            Some((c, k)) if (v - *c).abs() < CLUSTER_TOL * (1.0 + c.abs()) => *k += 1,
            _ => clusters.push((v, 1)),
        }
    }
    clusters
        .into_iter()
        .map(|(v, k)| {
            rationalize(v)
                .map(|r| (r, k))
                .ok_or_else(|| GeomError::Mismatch(format!("irrational Casimir eigenvalue {v}")))
        })
        .collect()
}

fn build(degree: usize) -> Result<Decomposition> {
    let frame = spin7_frame();
    match degree {
        2 => {
            // β ↦ ⋆(Θ_Z ∧ β) is 3 on Λ²₇ and −1 on Λ²₂₁
            let th = theta_z();
            let m = linear_map_matrix(&frame, 2, |b| th.wedge(b).hodge());
            let seven = eigenspace(&m, &qi(3));
            let twenty_one = eigenspace(&m, &qi(-1));
            if seven.len() != 7 || twenty_one.len() != 21 {
                return Err(GeomError::Mismatch(format!(
                    "eigenspace dimensions {} and {}",
                    seven.len(),
                    twenty_one.len()
                )));
            }
            Decomposition::from_bases(&frame, 2, vec![("7".into(), seven), ("21".into(), twenty_one)])
        }
        4 => {
            let c = casimir(4);
            let mut parts = Vec::new();
            for (lambda, mult) in eigen_clusters(&c)? {
                let space = eigenspace(&c, &lambda);
                if space.len() != mult {
                    return Err(GeomError::Mismatch(format!(
                        "eigenvalue {lambda}: exact kernel {} against multiplicity {mult}",
                        space.len()
                    )));
                }
                parts.push((mult.to_string(), space));
            }
            parts.sort_by_key(|(_, b)| b.len());
            let dims: Vec<usize> = parts.iter().map(|(_, b)| b.len()).collect();
            if dims != [1, 7, 27, 35] {
                return Err(GeomError::Mismatch(format!("Casimir eigenspace dimensions {dims:?}")));
            }
            Decomposition::from_bases(&frame, 4, parts)
        }
        d => Err(GeomError::UnsupportedDegree(d)),
    }
}

/// Splitting of Λ² into 7 + 21 and of Λ⁴ into 1 + 7 + 27 + 35 on the standard frame.
pub fn spin7_decomposition(degree: usize) -> Result<&'static Decomposition> {
    static CACHE: [OnceLock<Decomposition>; 2] = [OnceLock::new(), OnceLock::new()];
    let cell = match degree {
        2 => &CACHE[0],
        4 => &CACHE[1],
        d => return Err(GeomError::UnsupportedDegree(d)),
    };
    if let Some(d) = cell.get() {
        return Ok(d);
    }
    let d = build(degree)?;
    Ok(cell.get_or_init(|| d))
}

/// Components of a 2- or 4-form on the standard Spin(7) frame.
pub fn decompose_s7(a: &Form<Q>) -> Result<Vec<Component>> {
    if a.dim() != 8 {
        return Err(GeomError::FrameMismatch("spin7".into(), a.frame().name().into()));
    }
    spin7_decomposition(a.degree())?.split(a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spin7::{X0, X1, Y0, Y2};

    #[test]
    fn dimensions() {
        assert_eq!(spin7_decomposition(2).unwrap().dims(), vec![7, 21]);
        let d = spin7_decomposition(4).unwrap();
        assert_eq!(d.dims(), vec![1, 7, 27, 35]);
        assert_eq!(d.labels(), vec!["1", "7", "27", "35"]);
        assert!(matches!(spin7_decomposition(3), Err(GeomError::UnsupportedDegree(3))));
    }

    #[test]
    fn theta_z_is_singlet() {
        let parts = decompose_s7(&theta_z()).unwrap();
        assert_eq!(parts[0].form, theta_z());
        assert!(parts[1..].iter().all(|c| c.form.is_zero()));
    }

    #[test]
    fn anti_self_dual_is_35() {
        let d = spin7_decomposition(4).unwrap();
        let f = spin7_frame();
        let a = &Form::monomial(&f, &[X0, X1, Y0, Y2], qi(3)) + &Form::monomial(&f, &[0, 2, 3, 7], qi(-2));
        let asd = &a - &a.hodge();
        assert!(d.contains("35", &asd).unwrap());
        for b in d.basis_forms("35").unwrap() {
            assert_eq!(b.hodge(), b.scale(&qi(-1)));
        }
        for label in ["1", "7", "27"] {
            for b in d.basis_forms(label).unwrap() {
                assert_eq!(b.hodge(), b);
            }
        }
    }

    #[test]
    fn stabilizer_lies_in_21() {
        let d = spin7_decomposition(2).unwrap();
        let f = spin7_frame();
        for x in stabilizer_algebra(&theta_z()) {
            let terms = (0..8).flat_map(|i| (i + 1..8).map(move |j| (i, j)));
            let b = terms.fold(Form::zero(&f, 2), |acc, (i, j)| &acc + &Form::monomial(&f, &[i, j], x[i][j].clone()));
            assert!(d.contains("21", &b).unwrap());
        }
    }
}
