use std::sync::{Arc, OnceLock};

use crate::error::{GeomError, Result};
use crate::exalg::{basis_forms, CoordFrame, Form};
use crate::g2::G2Structure;
use crate::linalg::{self, Mat};
use crate::scalar::{qi, Q};

/// One irreducible summand of a form.
#[derive(Clone, Debug, PartialEq)]
pub struct Component {
    pub label: String,
    pub form: Form<Q>,
}

#[derive(Clone, Debug)]
struct Summand {
    label: String,
    basis: Vec<Vec<Q>>,
    projector: Mat<Q>,
}

/// Orthogonal splitting of Λᵏ into labelled summands with exact projectors.
#[derive(Clone, Debug)]
pub struct Decomposition {
    frame: Arc<CoordFrame>,
    degree: usize,
    summands: Vec<Summand>,
}

impl Decomposition {
    /// Builds the splitting from spanning bases; the bases must be mutually
    /// orthogonal and together span Λᵏ.
    pub fn from_bases(frame: &Arc<CoordFrame>, degree: usize, parts: Vec<(String, Vec<Vec<Q>>)>) -> Result<Self> {
        let total: usize = parts.iter().map(|(_, b)| b.len()).sum();
        let n = basis_forms::<Q>(frame, degree).len();
        if total != n {
            return Err(GeomError::Mismatch(format!(
                "summand dimensions add to {total}, expected {n}"
            )));
        }
        let summands = parts
            .into_iter()
            .map(|(label, basis)| Summand {
                projector: linalg::projector(&basis),
                label,
                basis,
            })
            .collect();
        Ok(Self {
            frame: frame.clone(),
            degree,
            summands,
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn labels(&self) -> Vec<&str> {
        self.summands.iter().map(|s| s.label.as_str()).collect()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.summands.iter().map(|s| s.basis.len()).collect()
    }

    /// Basis vectors (coefficient vectors in the monomial basis) of a summand.
    pub fn basis(&self, label: &str) -> Result<&[Vec<Q>]> {
        Ok(&self.summand(label)?.basis)
    }

    pub fn basis_forms(&self, label: &str) -> Result<Vec<Form<Q>>> {
        Ok(self
            .summand(label)?
            .basis
            .iter()
            .map(|v| Form::from_vector(&self.frame, self.degree, v))
            .collect())
    }

    /// Orthogonal projector onto a summand, acting on coefficient vectors.
    pub fn projector(&self, label: &str) -> Result<&Mat<Q>> {
        Ok(&self.summand(label)?.projector)
    }

    fn summand(&self, label: &str) -> Result<&Summand> {
        self.summands
            .iter()
            .find(|s| s.label == label)
            .ok_or_else(|| GeomError::Unknown {
                kind: "component",
                name: label.to_string(),
            })
    }

    pub fn project(&self, label: &str, a: &Form<Q>) -> Result<Form<Q>> {
        self.check(a)?;
        let s = self.summand(label)?;
        Ok(Form::from_vector(&self.frame, self.degree, &linalg::matvec(&s.projector, &a.to_vector())))
    }

    /// Splits `a` into its components, in summand order.
    pub fn split(&self, a: &Form<Q>) -> Result<Vec<Component>> {
        self.check(a)?;
        let v = a.to_vector();
        Ok(self
            .summands
            .iter()
            .map(|s| Component {
                label: s.label.clone(),
                form: Form::from_vector(&self.frame, self.degree, &linalg::matvec(&s.projector, &v)),
            })
            .collect())
    }

    pub fn contains(&self, label: &str, a: &Form<Q>) -> Result<bool> {
        Ok(&self.project(label, a)? == a)
    }

    fn check(&self, a: &Form<Q>) -> Result<()> {
        if a.frame().name() != self.frame.name() || a.dim() != self.frame.dim() {
            return Err(GeomError::FrameMismatch(
                self.frame.name().to_string(),
                a.frame().name().to_string(),
            ));
        }
        if a.degree() != self.degree {
            return Err(GeomError::WrongDegree {
                expected: self.degree,
                got: a.degree(),
            });
        }
        Ok(())
    }
}

/// Matrix of a linear map between form spaces in monomial bases.
pub(crate) fn linear_map_matrix(
    frame: &Arc<CoordFrame>,
    from: usize,
    f: impl Fn(&Form<Q>) -> Form<Q>,
) -> Mat<Q> {
    let cols: Vec<Vec<Q>> = basis_forms::<Q>(frame, from).iter().map(|e| f(e).to_vector()).collect();
    linalg::transpose(&cols)
}

/// Eigenspace {v : m v = λ v}.
pub(crate) fn eigenspace(m: &Mat<Q>, lambda: &Q) -> Vec<Vec<Q>> {
    let n = m.len();
    let shifted = linalg::sub_mat(m, &linalg::scale_mat(&linalg::identity(n), lambda));
    linalg::nullspace(&shifted, n, 0.0)
}

fn build(g: &G2Structure, degree: usize) -> Result<Decomposition> {
    let frame = &g.frame;
    match degree {
        1 => {
            let n = frame.dim();
            let basis = (0..n).map(|i| crate::exalg::basis_vector::<Q>(n, i)).collect();
            Decomposition::from_bases(frame, 1, vec![("7".into(), basis)])
        }
        2 => {
            // β ↦ ⋆(Ω ∧ β) is −2 on Λ²₇ and +1 on Λ²₁₄
            let m = linear_map_matrix(frame, 2, |b| g.omega.wedge(b).hodge());
            let seven = eigenspace(&m, &qi(-2));
            let fourteen = eigenspace(&m, &qi(1));
            if seven.len() != 7 || fourteen.len() != 14 {
                return Err(GeomError::Mismatch(format!(
                    "eigenspace dimensions {} and {}",
                    seven.len(),
                    fourteen.len()
                )));
            }
            Decomposition::from_bases(frame, 2, vec![("7".into(), seven), ("14".into(), fourteen)])
        }
        3 => {
            let one = vec![g.omega.to_vector()];
            let mut rows = linear_map_matrix(frame, 3, |b| b.wedge(&g.omega));
            rows.extend(linear_map_matrix(frame, 3, |b| b.wedge(&g.theta)));
            let n = basis_forms::<Q>(frame, 3).len();
            let twenty_seven = linalg::nullspace(&rows, n, 0.0);
            let mut both = one.clone();
            both.extend(twenty_seven.iter().cloned());
            let seven = linalg::orthogonal_complement(&both, n);
            if twenty_seven.len() != 27 || seven.len() != 7 {
                return Err(GeomError::Mismatch(format!(
                    "component dimensions {} and {}",
                    seven.len(),
                    twenty_seven.len()
                )));
            }
            Decomposition::from_bases(
                frame,
                3,
                vec![("1".into(), one), ("7".into(), seven), ("27".into(), twenty_seven)],
            )
        }
        d => Err(GeomError::UnsupportedDegree(d)),
    }
}

/// Splitting of Λᵏ (k = 1, 2, 3) for a G2 structure.
pub fn g2_decomposition(g: &G2Structure, degree: usize) -> Result<Decomposition> {
    build(g, degree)
}

pub fn standard_decomposition(degree: usize) -> Result<&'static Decomposition> {
    static CACHE: [OnceLock<Decomposition>; 3] = [OnceLock::new(), OnceLock::new(), OnceLock::new()];
    if !(1..=3).contains(&degree) {
        return Err(GeomError::UnsupportedDegree(degree));
    }
    let cell = &CACHE[degree - 1];
    if let Some(d) = cell.get() {
        return Ok(d);
    }
    let d = build(&G2Structure::standard(), degree)?;
    Ok(cell.get_or_init(|| d))
}

/// Components of a form on the standard G2 frame.
pub fn decompose(a: &Form<Q>) -> Result<Vec<Component>> {
    if a.dim() != 7 {
        return Err(GeomError::FrameMismatch("g2".into(), a.frame().name().into()));
    }
    standard_decomposition(a.degree())?.split(a)
}
