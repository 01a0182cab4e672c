use std::str::FromStr;

use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::error::{GeomError, Result};
use crate::exalg::action::{stabilizer_algebra, stabilizer_of_all};
use crate::exalg::Form;
use crate::g2::G2Structure;
use crate::linalg;
use crate::scalar::{q, qi, Q};
use crate::spin7::{spin7_decomposition, spin7_frame, theta_z, X0, Y0};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReductionKind {
    G2Circle,
    Cy4,
}

impl FromStr for ReductionKind {
    type Err = GeomError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "g2-circle" => Ok(Self::G2Circle),
            "cy4" => Ok(Self::Cy4),
            other => Err(GeomError::Unknown {
                kind: "reduction",
                name: other.to_string(),
            }),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum ReductionReport {
    /// Largest coefficient of (Ω ∧ dt − Θ) − Θ_Z, with x1..x3, y0..y3 placed at
    /// positions 1..7 of R⁸ and t = x0.
    G2Circle {
        #[serde(with = "crate::scalar::q_str")]
        mismatch: Q,
    },
    /// Checks on γ = −ω²/2 + Re Ω_Z.
    Cy4 {
        stabilizer_dim: usize,
        /// Dimension of the common stabilizer of ω, Re Ω_Z and Im Ω_Z.
        su4_dim: usize,
        #[serde(with = "crate::scalar::q_str")]
        self_duality_defect: Q,
        /// γ ∧ γ as a multiple of the volume form.
        #[serde(with = "crate::scalar::q_str")]
        normalization: Q,
    },
}

impl ReductionReport {
    pub fn passes(&self) -> bool {
        match self {
            Self::G2Circle { mismatch } => *mismatch == qi(0),
            Self::Cy4 {
                stabilizer_dim,
                su4_dim,
                self_duality_defect,
                normalization,
            } => *stabilizer_dim == 21 && *su4_dim == 15 && *self_duality_defect == qi(0) && *normalization == qi(14),
        }
    }
}

fn max_abs(f: &Form<Q>) -> Q {
    f.iter().map(|(_, c)| c.abs()).max().unwrap_or_else(|| qi(0))
}

/// (ω, Re Ω_Z, Im Ω_Z, γ) for ω = Σ dxʲ ∧ dyʲ, Ω_Z = (dx⁰ + i dy⁰) ∧ … ∧ (dx³ + i dy³)
/// and γ = −ω²/2 + Re Ω_Z.
pub fn cy4_forms() -> [Form<Q>; 4] {
    let f = spin7_frame();
    let omega = (0..4).fold(Form::zero(&f, 2), |acc, j| &acc + &Form::monomial(&f, &[X0 + j, Y0 + j], qi(1)));
    // expand the product over subsets S of {0..3} taking i·dyʲ for j ∈ S
    let mut re = Form::zero(&f, 4);
    let mut im = Form::zero(&f, 4);
    for s in 0u32..16 {
        let term = (0..4).fold(Form::constant(&f, qi(1)), |acc, j| {
            let i = if s >> j & 1 == 1 { Y0 + j } else { X0 + j };
            acc.wedge(&Form::monomial(&f, &[i], qi(1)))
        });
        let k = s.count_ones();
        // i^k
        let sign = if k % 4 < 2 { qi(1) } else { qi(-1) };
        if k % 2 == 0 {
            re = &re + &term.scale(&sign);
        } else {
            im = &im + &term.scale(&sign);
        }
    }
    let gamma = &omega.wedge(&omega).scale(&q(-1, 2)) + &re;
    [omega, re, im, gamma]
}

pub fn reduction_check(kind: ReductionKind) -> ReductionReport {
    match kind {
        ReductionKind::G2Circle => {
            let g = G2Structure::standard();
            let f = spin7_frame();
            let map: Vec<usize> = (1..8).collect();
            let dt = Form::monomial(&f, &[X0], qi(1));
            let lifted = &g.omega.reindex(&f, &map).wedge(&dt) - &g.theta.reindex(&f, &map);
            ReductionReport::G2Circle {
                mismatch: max_abs(&(&lifted - &theta_z())),
            }
        }
        ReductionKind::Cy4 => {
            let [omega, re, im, gamma] = cy4_forms();
            let vol = gamma.wedge(&gamma).coeff(&(0..8).collect::<Vec<_>>());
            ReductionReport::Cy4 {
                stabilizer_dim: stabilizer_algebra(&gamma).len(),
                su4_dim: stabilizer_of_all(&[omega, re, im]).len(),
                self_duality_defect: max_abs(&(&gamma - &gamma.hodge())),
                normalization: vol,
            }
        }
    }
}

/// Dimension bookkeeping for Λ⁴₃₅ = Λ^{3,1}_prim ⊕ Λ^{1,1}_prim ⊕ Λ^{1,3}_prim under
/// the flat Calabi-Yau structure.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HodgeTypeCount {
    /// Rank of ω ∧ su(4) inside Λ⁴, su(4) read as real primitive (1,1)-forms.
    pub prim_11: usize,
    /// Whether ω ∧ su(4) is anti-self-dual, i.e. lies in Λ⁴₃₅.
    pub prim_11_in_35: bool,
    /// Real dimension of Λ^{3,1}_prim ⊕ Λ^{1,3}_prim from the complex counts.
    pub prim_31_13: usize,
    pub dim_35: usize,
}

impl HodgeTypeCount {
    pub fn balanced(&self) -> bool {
        self.prim_11_in_35 && self.prim_11 + self.prim_31_13 == self.dim_35
    }
}

fn binom(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

pub fn hodge_type_count() -> Result<HodgeTypeCount> {
    let f = spin7_frame();
    let [omega, re, im, _] = cy4_forms();
    let su4 = stabilizer_of_all(&[omega.clone(), re, im]);
    let images: Vec<Vec<Q>> = su4
        .iter()
        .map(|x| {
            let beta = (0..8)
                .flat_map(|i| (i + 1..8).map(move |j| (i, j)))
                .fold(Form::zero(&f, 2), |acc, (i, j)| &acc + &Form::monomial(&f, &[i, j], x[i][j].clone()));
            omega.wedge(&beta)
        })
        .map(|g| g.to_vector())
        .collect();
    let prim_11 = linalg::rank(&images, 0.0);
    let asd = images.iter().all(|v| {
        let g = Form::from_vector(&f, 4, v);
        g.hodge() == g.scale(&qi(-1))
    });
    // complex dimension of Λ^{p,q}_prim on C⁴ is C(4,p)C(4,q) − C(4,p−1)C(4,q−1)
    let prim31 = binom(4, 3) * binom(4, 1) - binom(4, 2) * binom(4, 0);
    Ok(HodgeTypeCount {
        prim_11,
        prim_11_in_35: asd,
        prim_31_13: 2 * prim31,
        dim_35: spin7_decomposition(4)?.basis("35")?.len(),
    })
}

/// Signature τ and Euler characteristic χ of a compact complex surface.
pub fn characteristic_numbers(surface: &str) -> Result<(i64, i64)> {
    match surface.to_ascii_lowercase().as_str() {
        "t4" => Ok((0, 0)),
        "k3" => Ok((-16, 24)),
        other => Err(GeomError::Unknown {
            kind: "surface",
            name: other.to_string(),
        }),
    }
}

/// 3τ + 2χ, which vanishes for a Cayley fiber.
pub fn fiber_index(surface: &str) -> Result<i64> {
    let (tau, chi) = characteristic_numbers(surface)?;
    Ok(3 * tau + 2 * chi)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circle_reduction_exact() {
        let r = reduction_check(ReductionKind::G2Circle);
        assert!(r.passes(), "{r:?}");
    }

    #[test]
    fn cy4_candidate_is_spin7_form() {
        let r = reduction_check(ReductionKind::Cy4);
        assert!(r.passes(), "{r:?}");
    }

    #[test]
    fn hodge_types_fill_35() {
        let h = hodge_type_count().unwrap();
        assert_eq!((h.prim_11, h.prim_31_13, h.dim_35), (15, 20, 35));
        assert!(h.balanced());
    }

    #[test]
    fn fiber_index_vanishes() {
        assert_eq!(fiber_index("T4").unwrap(), 0);
        assert_eq!(fiber_index("k3").unwrap(), 0);
        assert_eq!(characteristic_numbers("k3").unwrap(), (-16, 24));
        assert!(fiber_index("p2").is_err());
        assert!("cy3".parse::<ReductionKind>().is_err());
    }
}
