//! Natural 3- and 4-forms on the moduli spaces of the flat models on T⁷ and
//! T³ × T⁴, compared with the calibration forms of the dual flat manifolds.

use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::cycles::quaternion::Quaternion;
use crate::error::{GeomError, Result};
use crate::exalg::{blade, permutation_sign, CoordFrame, Form};
use crate::fourier::{DualFrames, Fibration};
use crate::g2::G2Structure;
use crate::linalg;
use crate::scalar::{format_q, q, qi, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum FlatModel {
    #[serde(rename = "bdl-t7")]
    BundleT7,
    #[serde(rename = "ass-t3xt4")]
    AssociativeT3T4,
    #[serde(rename = "coa-t3xt4")]
    CoassociativeT3T4,
}

impl FlatModel {
    pub const ALL: [FlatModel; 3] = [FlatModel::BundleT7, FlatModel::AssociativeT3T4, FlatModel::CoassociativeT3T4];

    pub fn name(self) -> &'static str {
        match self {
            FlatModel::BundleT7 => "bdl-t7",
            FlatModel::AssociativeT3T4 => "ass-t3xt4",
            FlatModel::CoassociativeT3T4 => "coa-t3xt4",
        }
    }
}

impl FromStr for FlatModel {
    type Err = GeomError;
    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| GeomError::Unknown {
                kind: "model",
                name: s.into(),
            })
    }
}

/// Spinor conventions on Ker D ≅ H for the associative model.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AssConventions {
    /// Clifford action of a 1-form on H by right (true) or left multiplication.
    pub right_multiplication: bool,
    /// Whether the bar in ⟨α·φ̄, η̄⟩ is quaternion conjugation (otherwise identity).
    pub conjugate: bool,
    /// dx^a acts as clifford_signs[a]·(i, j, k)[a].
    pub clifford_signs: [i64; 3],
    /// The m-th spinor tangent direction is spinor_signs[m]·(1, i, j, k)[m].
    pub spinor_signs: [i64; 4],
    /// Orientation of the fiber relative to dx¹²³ (±1).
    pub fiber_orientation: i64,
}

impl Default for AssConventions {
    fn default() -> Self {
        Self {
            right_multiplication: true,
            conjugate: true,
            clifford_signs: [-1, -1, -1],
            spinor_signs: [1, -1, -1, -1],
            fiber_orientation: 1,
        }
    }
}

impl AssConventions {
    pub fn describe(&self) -> Vec<String> {
        vec![
            format!(
                "clifford action: {} multiplication by {:?}·(i,j,k)",
                if self.right_multiplication { "right" } else { "left" },
                self.clifford_signs
            ),
            format!("bar: {}", if self.conjugate { "quaternion conjugation" } else { "identity" }),
            format!("spinor basis: {:?}·(1,i,j,k)", self.spinor_signs),
            format!("fiber orientation: {}·dx123", self.fiber_orientation),
        ]
    }

    /// Every convention set in the search family (left/right, bar or not, all
    /// sign choices), 2·2·8·16·2 = 1024 in total.
    pub fn family() -> Vec<Self> {
        let signs3: Vec<[i64; 3]> = (0..8).map(|b| [0, 1, 2].map(|i| if b >> i & 1 == 1 { -1 } else { 1 })).collect();
        let signs4: Vec<[i64; 4]> = (0..16)
            .map(|b| [0, 1, 2, 3].map(|i| if b >> i & 1 == 1 { -1 } else { 1 }))
            .collect();
        let mut out = Vec::new();
        for right_multiplication in [false, true] {
            for conjugate in [false, true] {
                for c in &signs3 {
                    for s in &signs4 {
                        for fiber_orientation in [1, -1] {
                            out.push(Self {
                                right_multiplication,
                                conjugate,
                                clifford_signs: *c,
                                spinor_signs: *s,
                                fiber_orientation,
                            });
                        }
                    }
                }
            }
        }
        out
    }
}

/// Conventions for the coassociative model.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoaConventions {
    /// [φ, η] = bracket_sign · (AB − BA) with A_{mn} = φ_{mn}.
    pub bracket_sign: i64,
    /// The a-th base direction is base_scale·(dy01+dy23, dy02+dy31, dy03+dy12)[a].
    pub base_scale: Q,
    /// The m-th dual fiber direction is fiber_signs[m]·dy^m.
    pub fiber_signs: [i64; 4],
}

impl Default for CoaConventions {
    fn default() -> Self {
        // the scale makes the bracket and pairing blocks of Ω agree in size
        Self {
            bracket_sign: -1,
            base_scale: q(1, 2),
            fiber_signs: [-1, 1, 1, 1],
        }
    }
}

impl CoaConventions {
    pub fn describe(&self) -> Vec<String> {
        vec![
            format!("so(4) bracket sign: {}", self.bracket_sign),
            format!("H+2 basis scale: {}", format_q(&self.base_scale)),
            format!("dual fiber basis: {:?}·dy^m", self.fiber_signs),
        ]
    }
}

/// a·φ for an imaginary quaternion a under the given side convention.
pub fn clifford(a: &Quaternion<Q>, phi: &Quaternion<Q>, right: bool) -> Quaternion<Q> {
    if right {
        phi.clone() * a.clone()
    } else {
        a.clone() * phi.clone()
    }
}

/// M = λ·T when such λ exists; otherwise the least-squares λ and the residual.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FormComparison {
    /// Rendered as "p/q"; absent when the target is zero.
    pub scale: Option<String>,
    pub exact_multiple: bool,
    pub positive: bool,
    pub residual: f64,
}

impl FormComparison {
    pub fn matches(&self) -> bool {
        self.exact_multiple && self.positive
    }
}

pub fn compare_forms(m: &Form<Q>, t: &Form<Q>) -> FormComparison {
    let tt = t.inner(t);
    if tt == qi(0) {
        return FormComparison {
            scale: None,
            exact_multiple: m.is_zero(),
            positive: false,
            residual: m.max_abs(),
        };
    }
    let lambda = m.inner(t) / tt;
    let diff = m - &t.scale(&lambda);
    FormComparison {
        scale: Some(format_q(&lambda)),
        exact_multiple: diff.is_zero(),
        positive: lambda > qi(0),
        residual: diff.max_abs(),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FlatModuliReport {
    pub model: FlatModel,
    pub omega: Form<Q>,
    pub theta: Form<Q>,
    pub expected: G2Structure,
    pub omega_vs: FormComparison,
    pub theta_vs: FormComparison,
    pub conventions: Vec<String>,
}

impl FlatModuliReport {
    pub fn passes(&self) -> bool {
        self.omega_vs.matches() && self.theta_vs.matches()
    }

    /// The 3-form restricted to the span of the given moduli directions, as
    /// coefficients on the monomials inside that span.
    pub fn omega_restricted(&self, directions: &[usize]) -> Vec<(Vec<usize>, Q)> {
        self.omega
            .iter()
            .filter(|(idx, _)| idx.iter().all(|i| directions.contains(i)))
            .map(|(idx, c)| (idx, c.clone()))
            .collect()
    }
}

fn check_lattice(l: &[Q], n: usize) -> Result<()> {
    if l.len() != n {
        return Err(GeomError::Arity {
            expected: n,
            got: l.len(),
        });
    }
    if l.iter().any(|c| *c <= qi(0)) {
        return Err(GeomError::InvalidFrame("covolumes must be positive".into()));
    }
    Ok(())
}

fn product(l: &[Q]) -> Q {
    l.iter().fold(qi(1), |a, b| a * b)
}

fn from_components(frame: &Arc<CoordFrame>, degree: usize, comps: Vec<(Vec<usize>, Q)>) -> Form<Q> {
    Form::from_terms(frame, degree, comps.into_iter().filter(|(_, v)| *v != qi(0))).expect("sorted indices")
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    blade::blades_of_grade(n, k).into_iter().map(blade::indices).collect()
}

/// Moduli 3- and 4-forms of a flat model on T⁷ = R⁷/⊕c_iZ (coordinates in G2 order),
/// with the given conventions for the T³ × T⁴ models.
pub fn flat_moduli_forms(
    model: FlatModel,
    lattice: &[Q],
    ass: &AssConventions,
    coa: &CoaConventions,
) -> Result<FlatModuliReport> {
    check_lattice(lattice, 7)?;
    let (frame, omega, theta, conventions) = match model {
        FlatModel::BundleT7 => {
            let (f, o, t) = bundle_model(lattice)?;
            (f, o, t, vec!["trace on u(1): identity; tangent space H¹(T) with basis dx^i".to_string()])
        }
        FlatModel::AssociativeT3T4 => {
            let (f, o, t) = ass_model(lattice, ass)?;
            (f, o, t, ass.describe())
        }
        FlatModel::CoassociativeT3T4 => {
            let (f, o, t) = coa_model(lattice, coa)?;
            (f, o, t, coa.describe())
        }
    };
    let expected = G2Structure::on_frame(&frame);
    Ok(FlatModuliReport {
        model,
        omega_vs: compare_forms(&omega, &expected.omega),
        theta_vs: compare_forms(&theta, &expected.theta),
        omega,
        theta,
        expected,
        conventions,
    })
}

/// Ω(α,β,γ) = ∫ α∧β∧γ∧Θ and Θ(α,β,γ,δ) = ∫ α∧β∧γ∧δ∧Ω on constant 1-forms.
fn bundle_model(lattice: &[Q]) -> Result<(Arc<CoordFrame>, Form<Q>, Form<Q>)> {
    let g = G2Structure::on_frame(&crate::g2::g2_frame().with_covolumes(lattice.to_vec())?);
    let dual: Vec<Q> = lattice.iter().map(|c| qi(1) / c).collect();
    let labels = ["x_1", "x_2", "x_3", "y_0", "y_1", "y_2", "y_3"].map(String::from).to_vec();
    let frame = Arc::new(CoordFrame::new("t7-dual", labels, (0..7).collect(), dual)?);
    let eval = |k: usize, weight: &Form<Q>| {
        let comps = subsets(7, k)
            .into_iter()
            .map(|idx| {
                let v = Form::monomial(&g.frame, &idx, qi(1)).wedge(weight).integrate();
                (idx, v)
            })
            .collect();
        from_components(&frame, k, comps)
    };
    Ok((frame.clone(), eval(3, &g.theta), eval(4, &g.omega)))
}

fn ass_model(lattice: &[Q], c: &AssConventions) -> Result<(Arc<CoordFrame>, Form<Q>, Form<Q>)> {
    let frame = DualFrames::new(Fibration::AssociativeT3, &lattice[..3])?.w;
    let vol_a = product(&lattice[..3]);
    let cl: Vec<Quaternion<Q>> = (0..3)
        .map(|a| Quaternion::basis(a + 1).scale(&qi(c.clifford_signs[a])))
        .collect();
    let spin: Vec<Quaternion<Q>> = (0..4).map(|m| Quaternion::basis(m).scale(&qi(c.spinor_signs[m]))).collect();
    let bar = |p: &Quaternion<Q>| if c.conjugate { p.conj() } else { p.clone() };
    let eps = qi(c.fiber_orientation);

    let mut om = Vec::new();
    for idx in subsets(7, 3) {
        let base: Vec<usize> = idx.iter().copied().filter(|&i| i < 3).collect();
        let v = match base.len() {
            // ∫_A α∧β∧γ
            3 => eps.clone() * &vol_a,
            // −∫_A ⟨α·φ̄, η̄⟩ Ω, with Ω|_A the volume form
            1 => {
                let (m, n) = (idx[1] - 3, idx[2] - 3);
                -clifford(&cl[idx[0]], &bar(&spin[m]), c.right_multiplication).dot(&bar(&spin[n])) * &vol_a
            }
            _ => qi(0),
        };
        om.push((idx, v));
    }
    let mut th = Vec::new();
    for idx in subsets(7, 4) {
        let base: Vec<usize> = idx.iter().copied().filter(|&i| i < 3).collect();
        let v = match base.len() {
            // ∫_A ⟨φ̄, ⋆(α∧β)·η̄⟩ Ω
            2 => {
                let (a, b) = (idx[0], idx[1]);
                let d = 3 - a - b;
                let s = qi(permutation_sign(&[a, b, d]) as i64) * &eps;
                let star = cl[d].scale(&s);
                let (m, n) = (idx[2] - 3, idx[3] - 3);
                bar(&spin[m]).dot(&clifford(&star, &bar(&spin[n]), c.right_multiplication)) * &vol_a
            }
            // ∫_A det(φ, η, ξ, ζ) Ω
            0 => linalg::det(&spin.iter().map(|p| p.to_vec()).collect::<Vec<_>>()) * &vol_a,
            _ => qi(0),
        };
        th.push((idx, v));
    }
    Ok((frame.clone(), from_components(&frame, 3, om), from_components(&frame, 4, th)))
}

fn coa_model(lattice: &[Q], c: &CoaConventions) -> Result<(Arc<CoordFrame>, Form<Q>, Form<Q>)> {
    let frame = DualFrames::new(Fibration::CoassociativeT4, &lattice[3..])?.w;
    let fiber = CoordFrame::new(
        "t4",
        ["y0", "y1", "y2", "y3"].map(String::from).to_vec(),
        vec![0, 1, 2, 3],
        lattice[3..].to_vec(),
    )
    .map(Arc::new)?;
    let two = |a: usize, b: usize, d: usize, e: usize| {
        &Form::monomial(&fiber, &[a, b], qi(1)) + &Form::monomial(&fiber, &[d, e], qi(1))
    };
    let w: Vec<Form<Q>> = [two(0, 1, 2, 3), two(0, 2, 3, 1), two(0, 3, 1, 2)]
        .iter()
        .map(|f| f.scale(&c.base_scale))
        .collect();
    let dy: Vec<Form<Q>> = (0..4).map(|m| Form::monomial(&fiber, &[m], qi(c.fiber_signs[m]))).collect();
    let bracket = |a: &Form<Q>, b: &Form<Q>| {
        let ma = two_form_matrix(a);
        let mb = two_form_matrix(b);
        let comm = linalg::sub_mat(&linalg::matmul(&ma, &mb), &linalg::matmul(&mb, &ma));
        let terms = subsets(4, 2).into_iter().map(|p| (p.clone(), comm[p[0]][p[1]].clone() * qi(c.bracket_sign)));
        Form::from_terms(&fiber, 2, terms).expect("pairs")
    };

    let mut om = Vec::new();
    for idx in subsets(7, 3) {
        let nb = idx.iter().filter(|&&i| i < 3).count();
        let v = match nb {
            3 => bracket(&w[0], &w[1]).wedge(&w[2]).integrate(),
            1 => -w[idx[0]].wedge(&dy[idx[1] - 3]).wedge(&dy[idx[2] - 3]).integrate(),
            _ => qi(0),
        };
        om.push((idx, v));
    }
    let mut th = Vec::new();
    for idx in subsets(7, 4) {
        let nb = idx.iter().filter(|&&i| i < 3).count();
        let v = match nb {
            0 => -dy[0].wedge(&dy[1]).wedge(&dy[2]).wedge(&dy[3]).integrate(),
            2 => bracket(&w[idx[0]], &w[idx[1]])
                .wedge(&dy[idx[2] - 3])
                .wedge(&dy[idx[3] - 3])
                .integrate(),
            _ => qi(0),
        };
        th.push((idx, v));
    }
    Ok((frame.clone(), from_components(&frame, 3, om), from_components(&frame, 4, th)))
}

fn two_form_matrix(a: &Form<Q>) -> linalg::Mat<Q> {
    let n = a.dim();
    let mut m = linalg::zeros(n, n);
    for (idx, v) in a.iter() {
        m[idx[0]][idx[1]] = v.clone();
        m[idx[1]][idx[0]] = -v.clone();
    }
    m
}
