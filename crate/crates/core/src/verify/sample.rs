//! Seeded generators for the randomized checks.

use std::f64::consts::TAU;
use std::sync::Arc;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::cycles::func::{Func, Grid};
use crate::cycles::quaternion::Quaternion;
use crate::cycles::section::{solve_first_partial, JetPoint, SectionKind};
use crate::cycles::semiflat::{SemiFlatAssocCycle, SemiFlatCoassocCycle};
use crate::exalg::{basis_forms, CoordFrame, Form};
use crate::g2::{X1, X2};
use crate::poly::Poly;
use crate::scalar::{q, qi, Q};

pub type SampleRng = ChaCha8Rng;

/// Independent stream `stream` of the generator seeded with `seed`.
pub fn rng(seed: u64, stream: u64) -> SampleRng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

/// n/d with |n| ≤ 6 and 1 ≤ d ≤ 4.
pub fn rational(r: &mut SampleRng) -> Q {
    q(r.gen_range(-6..=6), r.gen_range(1..=4))
}

pub fn rational_vec(r: &mut SampleRng, n: usize) -> Vec<Q> {
    (0..n).map(|_| rational(r)).collect()
}

pub fn nonzero_rational_vec(r: &mut SampleRng, n: usize) -> Vec<Q> {
    loop {
        let v = rational_vec(r, n);
        if v.iter().any(|x| *x != qi(0)) {
            return v;
        }
    }
}

pub fn positive_rational(r: &mut SampleRng) -> Q {
    q(r.gen_range(1..=6), r.gen_range(1..=4))
}

/// Random k-form with every monomial present with probability `density`.
pub fn form(r: &mut SampleRng, frame: &Arc<CoordFrame>, degree: usize, density: f64) -> Form<Q> {
    basis_forms::<Q>(frame, degree).iter().fold(Form::zero(frame, degree), |acc, e| {
        if r.gen_bool(density) {
            &acc + &e.scale(&rational(r))
        } else {
            acc
        }
    })
}

/// Nonzero integer combination of the given forms.
pub fn combination(r: &mut SampleRng, basis: &[Form<Q>]) -> Form<Q> {
    loop {
        let f = basis
            .iter()
            .fold(Form::zero(basis[0].frame(), basis[0].degree()), |acc, b| {
                &acc + &b.scale(&qi(r.gen_range(-3..=3)))
            });
        if !f.is_zero() {
            return f;
        }
    }
}

pub fn quaternion(r: &mut SampleRng) -> Quaternion<f64> {
    Quaternion::new(
        r.gen_range(-1.0..1.0),
        r.gen_range(-1.0..1.0),
        r.gen_range(-1.0..1.0),
        r.gen_range(-1.0..1.0),
    )
}

/// Largest admissible first partial of a conforming jet. The curvature is cubic in
/// the jet, so rounding grows like |p1|³ and nearly singular solves are skipped.
pub const MAX_SOLVED_PARTIAL: f64 = 10.0;

/// A jet whose first partial solves the section equation, or a random one.
pub fn jet(r: &mut SampleRng, kind: SectionKind, conforming: bool) -> JetPoint<f64> {
    loop {
        let p2 = quaternion(r);
        let p3 = quaternion(r);
        let p1 = if conforming {
            match solve_first_partial(&p2, &p3) {
                Some(p) if p.max_abs() < MAX_SOLVED_PARTIAL => p,
                _ => continue,
            }
        } else {
            quaternion(r)
        };
        return JetPoint::new(kind, [p1, p2, p3]);
    }
}

pub fn base_curvature(r: &mut SampleRng, n: usize) -> Vec<f64> {
    (0..n).map(|_| r.gen_range(-1.0..1.0)).collect()
}

/// Real and imaginary parts of Σ c_k z^k, z = x1 + i·x2, as polynomials.
fn holomorphic(r: &mut SampleRng, degree: u32) -> (Poly, Poly) {
    let (x, y) = (Poly::var(X1), Poly::var(X2));
    let (mut zr, mut zi) = (Poly::constant(qi(1)), Poly::default());
    let (mut re, mut im) = (Poly::default(), Poly::default());
    for _ in 0..=degree {
        let (a, b) = (Poly::constant(rational(r)), Poly::constant(rational(r)));
        re = re + a.clone() * zr.clone() - b.clone() * zi.clone();
        im = im + a * zi.clone() + b * zr.clone();
        let next_r = zr.clone() * x.clone() - zi.clone() * y.clone();
        zi = zr * y.clone() + zi * x.clone();
        zr = next_r;
    }
    (re, im)
}

fn poly_in_base(r: &mut SampleRng, degree: u32) -> Poly {
    let mut p = Poly::default();
    for i in 0..=degree {
        for j in 0..=degree - i {
            if r.gen_bool(0.6) {
                p = p + Poly::monomial(&[(X1, i), (X2, j)], rational(r));
            }
        }
    }
    p
}

/// Polynomial semi-flat coassociative cycle over (x1, x2). Conforming cases have
/// a holomorphic graph, an anti-holomorphic fiber connection and a gradient base
/// connection; the others perturb one randomly chosen field.
pub fn semiflat_coassoc(r: &mut SampleRng, conforming: bool) -> SemiFlatCoassocCycle {
    let (g0, g1) = holomorphic(r, 3);
    let (c0, c1) = holomorphic(r, 3);
    let phi = poly_in_base(r, 3);
    let mut f = [g0, g1, phi.derivative(X1), phi.derivative(X2), c0, -c1];
    if !conforming {
        loop {
            let k = r.gen_range(0..6);
            let noise = poly_in_base(r, 2);
            if noise.degree() >= 1 {
                f[k] = f[k].clone() + noise;
                break;
            }
        }
    }
    let [b0, b3, a1, a2, d1, d2] = f.map(Func::Poly);
    SemiFlatCoassocCycle::primal(b0, b3, a1, a2, d1, d2)
}

/// A trigonometric polynomial on the unit circle.
#[derive(Clone, Debug)]
pub struct Trig {
    pub constant: f64,
    /// (frequency, cos coefficient, sin coefficient)
    pub modes: Vec<(u32, f64, f64)>,
}

impl Trig {
    pub fn random(r: &mut SampleRng) -> Self {
        Self {
            constant: r.gen_range(-1.0..1.0),
            modes: (1..=2).map(|k| (k, r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0))).collect(),
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.modes.iter().fold(self.constant, |acc, &(k, a, b)| {
            let t = TAU * k as f64 * x;
            acc + a * t.cos() + b * t.sin()
        })
    }

    pub fn sample(&self, n: usize) -> Func {
        Func::Grid(Grid::sample(&[X1], &[n], &[1.0], 7, |p| self.eval(p[0])).expect("valid grid"))
    }
}

/// Data (B², B³, a, D⁰, D¹) of an associative semi-flat pair along x1.
#[derive(Clone, Debug)]
pub struct AssocPairData(pub [Trig; 5]);

impl AssocPairData {
    pub fn random(r: &mut SampleRng) -> Self {
        Self([0; 5].map(|_| Trig::random(r)))
    }

    pub fn sample(&self, n: usize) -> SemiFlatAssocCycle {
        let [b2, b3, a, d0, d1] = self.0.clone().map(|t| t.sample(n));
        SemiFlatAssocCycle::primal(b2, b3, a, d0, d1)
    }
}
