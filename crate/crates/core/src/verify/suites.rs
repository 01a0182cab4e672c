use std::collections::BTreeMap;

use num_traits::Signed;
use rand::Rng;

use crate::cycles::semiflat::{COASSOCIATIVITY, FLATNESS, SELF_DUALITY};
use crate::cycles::{
    assoc_section_residual, chern_simons, coassoc_section_residual, graph_plane, zero_reference, JetPoint, Quaternion,
    SectionKind,
};
use crate::error::Result;
use crate::exalg::action::{is_closed_under_bracket, stabilizer_algebra};
use crate::exalg::{basis_vector, Form};
use crate::fourier::{
    compatible_base_curvature, exp_theta, section_curvature, star_exp_theta, transform_flat_torus, transform_polyform,
    transform_semiflat_assoc, transform_semiflat_coassoc, DualFrames, Fibration, FlatConnection, FlatTorusObject,
    TorusPoint,
};
use crate::g2::{
    calibrate_plane, deformed_dt_residual, dt_symbol_complex, g2_frame, standard_decomposition, G2Structure, Plane,
    PlaneKind,
};
use crate::linalg::{self, Mat};
use crate::moduli::{
    cubic_tensor, flat_moduli_forms, q_pairing, symmetric_report, yukawa_suite, AssConventions, CoaConventions,
    FlatModel,
};
use crate::scalar::{to_f64, Q};
use crate::spin7::{
    calibrate_cayley, cayley_moduli_four_form, characteristic_numbers, dt8_linear_residual, fiber_index,
    hodge_type_count, quartic_tensor, reduction_check, spin7_decomposition, spin7_frame, spin7_symbol_complex,
    spinor_det, theta_z, CayleyFiber, CayleyTangent, ReductionKind,
};
use crate::verify::sample::{self, SampleRng};
use crate::verify::{CheckRecord, Status, SuiteConfig, Timer};
use crate::qi;

/// Time steps of the Chern-Simons path integral.
const CS_TIME_STEPS: usize = 16;
/// Smallest observed convergence order accepted for a second-order scheme.
const MIN_ORDER: f64 = 1.8;

pub(crate) fn global_conventions() -> Vec<String> {
    vec![
        "G2 frame (x1, x2, x3, y0, y1, y2, y3), orientation dx123 dy0123".into(),
        "Spin(7) frame (x0..x3, y0..y3), orientation dx0123 dy0123".into(),
        "Hodge star from α ∧ ⋆β = ⟨α, β⟩ vol".into(),
        "quaternion units act by right multiplication on sections".into(),
    ]
}

struct Outcome {
    pass: bool,
    residuals: Vec<(&'static str, f64)>,
    tolerance: f64,
    samples: Option<usize>,
    conventions: Vec<String>,
    detail: Option<String>,
}

impl Outcome {
    fn exact(pass: bool, residual: f64) -> Self {
        Self {
            pass,
            residuals: vec![("max", residual)],
            tolerance: 0.0,
            samples: None,
            conventions: Vec::new(),
            detail: None,
        }
    }

    fn named(pass: bool, name: &'static str, value: f64) -> Self {
        Self {
            residuals: vec![(name, value)],
            ..Self::exact(pass, value)
        }
    }

    fn within(residual: f64, tol: f64) -> Self {
        Self {
            tolerance: tol,
            ..Self::exact(residual <= tol, residual)
        }
    }

    fn samples(mut self, n: usize) -> Self {
        self.samples = Some(n);
        self
    }

    fn residual(mut self, name: &'static str, v: f64) -> Self {
        self.residuals.push((name, v));
        self
    }

    fn detail(mut self, d: impl Into<String>) -> Self {
        self.detail = Some(d.into());
        self
    }

    fn conventions(mut self, c: Vec<String>) -> Self {
        self.conventions = c;
        self
    }
}

struct Runner<'a> {
    suite: &'static str,
    cfg: &'a SuiteConfig,
    rng: SampleRng,
    out: Vec<CheckRecord>,
}

impl Runner<'_> {
    fn check(&mut self, name: &str, anchor: &str, f: impl FnOnce(&mut SampleRng, &SuiteConfig) -> Result<Outcome>) {
        let timer = Timer::start(self.cfg.timings);
        let result = f(&mut self.rng, self.cfg);
        let runtime_ms = timer.stop();
        let rec = match result {
            Ok(o) => CheckRecord {
                id: format!("{}/{name}", self.suite),
                suite: self.suite.into(),
                anchor: anchor.into(),
                status: if o.pass { Status::Pass } else { Status::Fail },
                residuals: o.residuals.into_iter().map(|(k, v)| (k.to_string(), v)).collect(),
                tolerance: o.tolerance,
                samples: o.samples,
                conventions: o.conventions,
                detail: o.detail,
                runtime_ms,
            },
            Err(e) => CheckRecord {
                id: format!("{}/{name}", self.suite),
                suite: self.suite.into(),
                anchor: anchor.into(),
                status: Status::Fail,
                residuals: BTreeMap::new(),
                tolerance: 0.0,
                samples: None,
                conventions: Vec::new(),
                detail: Some(format!("error: {e}")),
                runtime_ms,
            },
        };
        self.out.push(rec);
    }
}

pub(crate) fn run(suite: &'static str, stream: u64, cfg: &SuiteConfig) -> Vec<CheckRecord> {
    let mut r = Runner {
        suite,
        cfg,
        rng: sample::rng(cfg.seed, stream),
        out: Vec::new(),
    };
    match suite {
        "g2-identities" => g2_identities(&mut r),
        "spin7-identities" => spin7_identities(&mut r),
        "decompositions" => decompositions(&mut r),
        "yukawa" => yukawa(&mut r),
        "moduli-flat" => moduli_flat(&mut r),
        "fourier" => fourier(&mut r),
        "sections" => sections(&mut r),
        "chern-simons" => chern_simons_suite(&mut r),
        _ => unreachable!("suite names are validated"),
    }
    r.out
}

fn unit(n: usize, i: usize) -> Vec<Q> {
    basis_vector(n, i)
}

fn qabs(x: &Q) -> f64 {
    to_f64(x).abs()
}

fn g2_identities(r: &mut Runner) {
    let fault = r.cfg.fault.flip_omega_term;
    let perturb = move |g: G2Structure| match fault {
        Some(k) => g.with_flipped_omega_term(k),
        None => g,
    };
    let g = perturb(G2Structure::standard());

    r.check("hodge-omega", "⋆Ω = Θ", |_, _| {
        let d = &g.omega.hodge() - &g.theta;
        Ok(Outcome::exact(d.is_zero(), d.max_abs()))
    });
    r.check("omega-wedge-theta", "Ω ∧ Θ = 7 vol on the lattice torus", |_, cfg| {
        let frame = g2_frame().with_covolumes(cfg.lattice.clone())?;
        let gl = perturb(G2Structure::on_frame(&frame));
        let top = gl.omega.wedge(&gl.theta);
        let d = &top - &Form::volume(&frame).scale(&qi(7));
        let integral = top.integrate() - frame.total_covolume() * qi(7);
        Ok(Outcome::exact(d.is_zero() && integral == qi(0), d.max_abs()).residual("integral", qabs(&integral)))
    });
    r.check("stabilizer", "stab(Ω) is a 14-dimensional subalgebra", |_, _| {
        let s = stabilizer_algebra(&g.omega);
        let closed = is_closed_under_bracket(&s);
        Ok(Outcome::exact(s.len() == 14 && closed, (s.len() as f64 - 14.0).abs())
            .detail(format!("dimension {}, closed {closed}", s.len())))
    });
    r.check("cross-product-basis", "⟨u × v, w⟩ = Ω(u, v, w) on basis triples", |_, _| {
        let mut worst = qi(0);
        for i in 0..7 {
            for j in 0..7 {
                let c = g.cross(&unit(7, i), &unit(7, j));
                for (k, ck) in c.iter().enumerate() {
                    let v = g.omega.evaluate(&[unit(7, i), unit(7, j), unit(7, k)])?;
                    let d = (ck - v).abs();
                    if d > worst {
                        worst = d;
                    }
                }
            }
        }
        Ok(Outcome::exact(worst == qi(0), to_f64(&worst)))
    });
    r.check("cross-product-norm", "|u × v|² = |u|²|v|² − ⟨u, v⟩²", |rng, cfg| {
        let mut worst = qi(0);
        for _ in 0..cfg.samples {
            let (u, v) = (sample::rational_vec(rng, 7), sample::rational_vec(rng, 7));
            let c = g.cross(&u, &v);
            let lhs = linalg::dot(&c, &c);
            let uv = linalg::dot(&u, &v);
            let rhs = linalg::dot(&u, &u) * linalg::dot(&v, &v) - &uv * &uv;
            let d = (lhs - rhs).abs();
            if d > worst {
                worst = d;
            }
        }
        Ok(Outcome::exact(worst == qi(0), to_f64(&worst)).samples(cfg.samples))
    });
    r.check("chi-associative", "χ(u, v, u × v) = 0", |rng, cfg| {
        let chi = g.chi();
        let mut worst = qi(0);
        for _ in 0..cfg.samples {
            let (u, v) = (sample::rational_vec(rng, 7), sample::rational_vec(rng, 7));
            let w = g.cross(&u, &v);
            for c in chi.components() {
                let x = c.evaluate(&[u.clone(), v.clone(), w.clone()])?.abs();
                if x > worst {
                    worst = x;
                }
            }
        }
        Ok(Outcome::exact(worst == qi(0), to_f64(&worst)).samples(cfg.samples))
    });
    r.check("coordinate-calibrated-planes", "x-plane associative, y-plane coassociative", |_, _| {
        let a = calibrate_plane(&g, &Plane::new((0..3).map(|i| unit(7, i)).collect()), 0.0)?;
        let c = calibrate_plane(&g, &Plane::new((3..7).map(|i| unit(7, i)).collect()), 0.0)?;
        let pass = a.kind == PlaneKind::Associative && c.kind == PlaneKind::Coassociative;
        Ok(Outcome::exact(pass, (1.0 - a.ratio.abs()).abs().max((1.0 - c.ratio.abs()).abs()))
            .detail(format!("ratios {} and {}", a.ratio, c.ratio)))
    });
    r.check("dt-symbol-complex", "symbol of the linearized deformed DT complex is exact", |rng, cfg| {
        let mut bad = 0;
        for _ in 0..cfg.samples {
            let xi = sample::nonzero_rational_vec(rng, 7);
            if !dt_symbol_complex(&g, &xi)?.analyze().exact {
                bad += 1;
            }
        }
        Ok(Outcome::exact(bad == 0, bad as f64).samples(cfg.samples))
    });
}

fn spin7_identities(r: &mut Runner) {
    let th = theta_z();
    r.check("theta-z-self-dual", "⋆Θ_Z = Θ_Z", |_, _| {
        let d = &th.hodge() - &th;
        Ok(Outcome::exact(d.is_zero(), d.max_abs()))
    });
    r.check("theta-z-square", "Θ_Z ∧ Θ_Z = 14 vol", |_, _| {
        let d = &th.wedge(&th) - &Form::volume(&spin7_frame()).scale(&qi(14));
        Ok(Outcome::exact(d.is_zero(), d.max_abs()))
    });
    r.check("stabilizer", "stab(Θ_Z) is a 21-dimensional subalgebra", |_, _| {
        let s = stabilizer_algebra(&th);
        let closed = is_closed_under_bracket(&s);
        Ok(Outcome::exact(s.len() == 21 && closed, (s.len() as f64 - 21.0).abs()))
    });
    r.check("g2-circle-reduction", "Θ_Z = Ω ∧ dt − Θ", |_, _| {
        let rep = reduction_check(ReductionKind::G2Circle);
        let crate::spin7::ReductionReport::G2Circle { mismatch } = &rep else {
            unreachable!()
        };
        Ok(Outcome::exact(rep.passes(), qabs(mismatch))
            .conventions(vec!["R⁷ coordinates placed at 1..7 of R⁸, t = x0".into()]))
    });
    r.check("cy4-reduction", "−ω²/2 + Re Ω_Z is a Spin(7) form", |_, _| {
        let rep = reduction_check(ReductionKind::Cy4);
        Ok(Outcome::exact(rep.passes(), if rep.passes() { 0.0 } else { 1.0 })
            .detail(serde_json::to_string(&rep).unwrap_or_default()))
    });
    r.check("hodge-type-count", "Λ⁴₃₅ = Λ³¹ ⊕ Λ¹¹ ⊕ Λ¹³ primitive, by dimension", |_, _| {
        let h = hodge_type_count()?;
        Ok(Outcome::exact(h.balanced(), (h.prim_11 + h.prim_31_13) as f64 - h.dim_35 as f64)
            .detail(format!("{} + {} against {}", h.prim_11, h.prim_31_13, h.dim_35)))
    });
    r.check("fiber-index", "3τ + 2χ = 0 for T⁴ and K3", |_, _| {
        let t4 = fiber_index("t4")?;
        let k3 = fiber_index("k3")?;
        let pass = t4 == 0 && k3 == 0 && characteristic_numbers("k3")? == (-16, 24);
        Ok(Outcome::exact(pass, t4.abs().max(k3.abs()) as f64))
    });
    r.check("cayley-planes", "coordinate planes calibrated by Θ_Z", |_, _| {
        let e = |i: usize| unit(8, i);
        let y = calibrate_cayley(&Plane::new((4..8).map(e).collect()), 0.0)?;
        let x = calibrate_cayley(&Plane::new((0..4).map(e).collect()), 0.0)?;
        let mixed = calibrate_cayley(&Plane::new(vec![e(0), e(1), e(6), e(7)]), 0.0)?;
        let tilted: Vec<Q> = e(7).iter().zip(e(2)).map(|(a, b)| a + b).collect();
        let t = calibrate_cayley(&Plane::new(vec![e(0), e(1), e(6), tilted]), 0.0)?;
        let pass = y.cayley && y.orientation == -1 && x.cayley && x.orientation == -1 && mixed.cayley && !t.cayley;
        Ok(Outcome::exact(pass, (t.ratio - 0.5f64.sqrt()).abs()).detail(format!(
            "ratios y {} x {} mixed {} tilted {}",
            y.ratio, x.ratio, mixed.ratio, t.ratio
        )))
    });
    r.check("dt8-linear-21", "⋆F + Θ_Z ∧ F = 0 on Λ²₂₁", |rng, cfg| {
        let basis = spin7_decomposition(2)?.basis_forms("21")?;
        let mut worst = 0.0f64;
        for _ in 0..cfg.samples {
            worst = worst.max(dt8_linear_residual(&sample::combination(rng, &basis))?.max_abs());
        }
        Ok(Outcome::exact(worst == 0.0, worst).samples(cfg.samples))
    });
    r.check("symbol-complex", "0 → Λ⁰ → Λ¹ → Λ²₇ → 0 exact at ξ ≠ 0", |rng, cfg| {
        let mut bad = 0;
        for _ in 0..cfg.samples {
            let xi = sample::nonzero_rational_vec(rng, 8);
            if !spin7_symbol_complex(&xi)?.analyze().exact {
                bad += 1;
            }
        }
        Ok(Outcome::exact(bad == 0, bad as f64).samples(cfg.samples))
    });
    r.check("cayley-moduli-form", "four spinors give −det, four 1-forms give the fiber integral", |rng, _| {
        let cov: Vec<Q> = (0..4).map(|_| sample::positive_rational(rng)).collect();
        let fib = CayleyFiber::new(cov)?;
        let ones: Vec<CayleyTangent> = (0..4).map(|i| CayleyTangent::one_form(unit(4, i))).collect::<Result<_>>()?;
        let spins: Vec<Vec<Q>> = (0..4).map(|_| sample::rational_vec(rng, 4)).collect();
        let st: Vec<CayleyTangent> = spins.iter().map(|s| CayleyTangent::spinor(s.clone())).collect::<Result<_>>()?;
        let a = cayley_moduli_four_form(&fib, [&ones[0], &ones[1], &ones[2], &ones[3]])?;
        let b = cayley_moduli_four_form(&fib, [&st[0], &st[1], &st[2], &st[3]])?;
        let det = spinor_det([&spins[0], &spins[1], &spins[2], &spins[3]]) * fib.covolume();
        let da = &a + fib.covolume();
        let db = &b + &det;
        Ok(Outcome::exact(da == qi(0) && db == qi(0), qabs(&da).max(qabs(&db)))
            .conventions(vec!["fiber oriented by Θ_Z, opposite to dy0123".into()]))
    });
}

/// P² = P, P_a P_b = 0 for a ≠ b, Σ P = I.
fn projector_defect(ps: &[&Mat<Q>]) -> usize {
    let n = ps[0].len();
    let mut bad = 0;
    let mut sum = linalg::zeros::<Q>(n, n);
    for (a, pa) in ps.iter().enumerate() {
        sum = linalg::add_mat(&sum, pa);
        for (b, pb) in ps.iter().enumerate() {
            let prod = linalg::matmul(pa, pb);
            let ok = if a == b {
                prod == **pa
            } else {
                linalg::is_zero_mat(&prod, 0.0)
            };
            bad += usize::from(!ok);
        }
    }
    bad + usize::from(sum != linalg::identity(n))
}

fn decompositions(r: &mut Runner) {
    type Source = fn() -> Result<&'static crate::g2::Decomposition>;
    let cases: [(&str, Source, &[usize]); 4] = [
        ("g2-lambda2", || standard_decomposition(2), &[7, 14]),
        ("g2-lambda3", || standard_decomposition(3), &[1, 7, 27]),
        ("spin7-lambda2", || spin7_decomposition(2), &[7, 21]),
        ("spin7-lambda4", || spin7_decomposition(4), &[1, 7, 27, 35]),
    ];
    for (name, source, dims) in cases {
        r.check(&format!("{name}-dims"), &format!("summand dimensions {dims:?}"), |_, _| {
            let d = source()?;
            Ok(Outcome::exact(d.dims() == dims, 0.0).detail(format!("{:?}", d.dims())))
        });
        r.check(&format!("{name}-projectors"), "idempotent, mutually orthogonal, complete", |_, _| {
            let d = source()?;
            let ps: Vec<&Mat<Q>> = d.labels().iter().map(|l| d.projector(l)).collect::<Result<_>>()?;
            let bad = projector_defect(&ps);
            Ok(Outcome::exact(bad == 0, bad as f64))
        });
    }
    r.check("fourteen-wedge-theta", "β ∧ Θ = 0 for β ∈ Λ²₁₄", |rng, cfg| {
        let g = G2Structure::standard();
        let basis = standard_decomposition(2)?.basis_forms("14")?;
        let mut worst = 0.0f64;
        for b in &basis {
            worst = worst.max(b.wedge(&g.theta).max_abs());
        }
        for _ in 0..cfg.samples {
            worst = worst.max(sample::combination(rng, &basis).wedge(&g.theta).max_abs());
        }
        Ok(Outcome::exact(worst == 0.0, worst).samples(cfg.samples))
    });
    r.check("spin7-35-anti-self-dual", "Λ⁴₃₅ = Λ⁴₋", |_, _| {
        let d = spin7_decomposition(4)?;
        let bad = d
            .basis_forms("35")?
            .iter()
            .filter(|b| b.hodge() != b.scale(&qi(-1)))
            .count();
        Ok(Outcome::exact(bad == 0, bad as f64))
    });
}

/// C(Ω, Ω, Ω) on the unit torus, frozen from a direct evaluation.
pub(crate) const PREPOTENTIAL: i64 = -2688;

fn yukawa(r: &mut Runner) {
    let g = G2Structure::standard();
    r.check("prepotential", "C(Ω, Ω, Ω) on the unit torus", |_, _| {
        let f = cubic_tensor(&g, [&g.omega, &g.omega, &g.omega])?;
        let d = f - qi(PREPOTENTIAL);
        Ok(Outcome::exact(d == qi(0), qabs(&d)))
    });
    r.check("ratio-constant", "G(φ) / ∫ φ ∧ ⋆φ is one constant on Λ³₂₇", |rng, cfg| {
        let basis = standard_decomposition(3)?.basis_forms("27")?;
        let mut ratios = Vec::new();
        for _ in 0..cfg.samples {
            let phi = sample::combination(rng, &basis);
            ratios.push(yukawa_suite(&g, &phi)?.ratio.expect("nonzero class"));
        }
        let (lo, hi) = (ratios.iter().min().expect("samples"), ratios.iter().max().expect("samples"));
        Ok(Outcome::exact(lo == hi, qabs(&(hi - lo)))
            .samples(cfg.samples)
            .detail(format!("ratio {}", crate::scalar::format_q(hi))))
    });
    r.check("cubic-symmetry", "C is symmetric in its three arguments", |rng, cfg| {
        let frame = g2_frame();
        let n = cfg.samples.min(5);
        let mut worst = qi(0);
        for _ in 0..n {
            let f: Vec<Form<Q>> = (0..3).map(|_| sample::form(rng, &frame, 3, 0.3)).collect();
            let rep = symmetric_report([&f[0], &f[1], &f[2]], |a| cubic_tensor(&g, a))?;
            worst = worst.max(rep.symmetry_defect);
        }
        Ok(Outcome::exact(worst == qi(0), to_f64(&worst)).samples(n))
    });
    r.check("pairing-symmetry", "∫ β₁ ∧ β₂ ∧ Ω is symmetric", |rng, cfg| {
        let frame = g2_frame();
        let mut worst = qi(0);
        for _ in 0..cfg.samples {
            let (a, b) = (sample::form(rng, &frame, 2, 0.5), sample::form(rng, &frame, 2, 0.5));
            worst = worst.max((q_pairing(&g, &a, &b)? - q_pairing(&g, &b, &a)?).abs());
        }
        Ok(Outcome::exact(worst == qi(0), to_f64(&worst)).samples(cfg.samples))
    });
    r.check("quartic-vanishes-on-27", "Q(φ, ·, ·, ·) = 0 for φ ∈ Λ⁴₂₇", |rng, cfg| {
        let basis = spin7_decomposition(4)?.basis_forms("27")?;
        let frame = spin7_frame();
        let n = cfg.samples.min(8);
        let mut worst = qi(0);
        for i in 0..n {
            let mut args: Vec<Form<Q>> = (0..3).map(|_| sample::form(rng, &frame, 4, 0.2)).collect();
            args.insert(i % 4, sample::combination(rng, &basis));
            let v = quartic_tensor([&args[0], &args[1], &args[2], &args[3]])?.abs();
            worst = worst.max(v);
        }
        Ok(Outcome::exact(worst == qi(0), to_f64(&worst)).samples(n))
    });
}

fn moduli_flat(r: &mut Runner) {
    for model in FlatModel::ALL {
        let name = model.name();
        let report = flat_moduli_forms(model, &r.cfg.lattice, &AssConventions::default(), &CoaConventions::default());
        for (form, anchor) in [("omega", "moduli 3-form is a positive multiple of Ω"), ("theta", "moduli 4-form is a positive multiple of Θ")] {
            let report = report.clone();
            r.check(&format!("{name}-{form}"), anchor, |_, _| {
                let rep = report?;
                let cmp = if form == "omega" { &rep.omega_vs } else { &rep.theta_vs };
                let d = format!(
                    "scale {}, exact multiple {}, positive {}",
                    cmp.scale.as_deref().unwrap_or("none"),
                    cmp.exact_multiple,
                    cmp.positive
                );
                Ok(Outcome::exact(cmp.matches(), cmp.residual)
                    .detail(d)
                    .conventions(rep.conventions.clone()))
            });
        }
        if model == FlatModel::AssociativeT3T4 {
            r.check("ass-t3xt4-omega-on-cycles", "the 3-form vanishes on pure cycle directions", |_, _| {
                let rep = report?;
                let left = rep.omega_restricted(&[3, 4, 5, 6]);
                Ok(Outcome::exact(left.is_empty(), left.len() as f64))
            });
        }
    }
}

fn fourier(r: &mut Runner) {
    r.check("t4-exp-theta", "F(e^Θ) = e^Θ and F(⋆e^Θ) = ⋆e^Θ on the dual", |_, cfg| {
        let fr = DualFrames::new(Fibration::CoassociativeT4, &cfg.lattice[3..])?;
        let (gm, gw) = (fr.g2_m(), fr.g2_w());
        let a = transform_polyform(&fr, &exp_theta(&gm))? == exp_theta(&gw);
        let b = transform_polyform(&fr, &star_exp_theta(&gm))? == star_exp_theta(&gw);
        Ok(Outcome::exact(a && b, f64::from(u8::from(!a) + u8::from(!b))))
    });
    r.check("t3-exp-theta", "F(e^Θ) = ⋆e^Θ and F(⋆e^Θ) = e^Θ on the dual", |_, cfg| {
        let fr = DualFrames::new(Fibration::AssociativeT3, &cfg.lattice[..3])?;
        let (gm, gw) = (fr.g2_m(), fr.g2_w());
        let a = transform_polyform(&fr, &exp_theta(&gm))? == star_exp_theta(&gw);
        let b = transform_polyform(&fr, &star_exp_theta(&gm))? == exp_theta(&gw);
        Ok(Outcome::exact(a && b, f64::from(u8::from(!a) + u8::from(!b))))
    });
    r.check("flat-torus-involution", "transforming twice is the identity", |rng, cfg| {
        let mut bad = 0;
        for _ in 0..cfg.samples {
            let x = if rng.gen_bool(0.5) {
                FlatTorusObject::Point(TorusPoint::new(sample::rational_vec(rng, 7), cfg.lattice.clone())?)
            } else {
                FlatTorusObject::Connection(FlatConnection::new(sample::rational_vec(rng, 7), cfg.lattice.clone())?)
            };
            bad += usize::from(transform_flat_torus(&transform_flat_torus(&x)?)? != x);
        }
        Ok(Outcome::exact(bad == 0, bad as f64).samples(cfg.samples))
    });
    r.check(
        "semiflat-condition-swap",
        "coassociativity and self-duality trade places, flatness is kept",
        |rng, cfg| {
            let mut bad = 0;
            let mut conforming = 0;
            for i in 0..cfg.samples {
                let c = sample::semiflat_coassoc(rng, i % 2 == 0);
                let t = transform_semiflat_coassoc(&c)?;
                let (a, b) = (c.residual()?, t.residual()?);
                let v = |rep: &crate::cycles::ResidualReport, g| rep.group_vanishes(g, 0.0);
                let ok = v(&a, COASSOCIATIVITY) == v(&b, SELF_DUALITY)
                    && v(&a, SELF_DUALITY) == v(&b, COASSOCIATIVITY)
                    && v(&a, FLATNESS) == v(&b, FLATNESS);
                bad += usize::from(!ok);
                conforming += usize::from([COASSOCIATIVITY, SELF_DUALITY, FLATNESS].iter().all(|g| v(&a, g)));
                bad += usize::from(transform_semiflat_coassoc(&t)? != c);
            }
            Ok(Outcome::exact(bad == 0, bad as f64)
                .samples(cfg.samples)
                .detail(format!("{conforming} conforming inputs")))
        },
    );
}

/// Real part of the associative-section residual along f = t(x¹i + x²j + x³k).
pub(crate) fn diagonal_residual(t: f64) -> f64 {
    let jet = diagonal_jet(t);
    *assoc_section_residual(&jet).expect("associative jet").re()
}

pub(crate) fn diagonal_jet(t: f64) -> JetPoint<f64> {
    let b = |n: usize| Quaternion::<f64>::basis(n).scale(&t);
    JetPoint::new(SectionKind::AssociativeSection, [b(1), b(2), b(3)])
}

/// Bisection for a sign change of `f` on [lo, hi].
pub(crate) fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> Option<f64> {
    let (mut flo, fhi) = (f(lo), f(hi));
    if flo * fhi > 0.0 {
        return None;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm == 0.0 || hi - lo < f64::EPSILON * mid.abs() {
            return Some(mid);
        }
        if flo * fm < 0.0 {
            hi = mid;
        } else {
            lo = mid;
            flo = fm;
        }
    }
    Some(0.5 * (lo + hi))
}

fn sections(r: &mut Runner) {
    let conv = || {
        vec![
            "section residual p1 × p2 × p3 − (−p1 i − p2 j − p3 k)".to_string(),
            "transformed curvature F = da + Σ ∂f/∂x dx ∧ dy on W".to_string(),
        ]
    };
    r.check(
        "section-transform",
        "deformed DT on W iff section equation and flat base connection",
        |rng, cfg| {
            let fr = DualFrames::unit(Fibration::CoassociativeT4);
            let gw = fr.g2_w();
            let tol = cfg.tol_abs;
            let (mut bad, mut worst_conforming) = (0, 0.0f64);
            for i in 0..cfg.samples.max(4) {
                let conforming = i % 2 == 0;
                let flat = i % 4 < 2;
                let jet = sample::jet(rng, SectionKind::AssociativeSection, conforming);
                let da = if flat { vec![0.0; 3] } else { sample::base_curvature(rng, 3) };
                let sec = assoc_section_residual(&jet)?.max_abs();
                let f = section_curvature(&fr.w, &jet, &da)?;
                let res = deformed_dt_residual(&gw, &f)?.max_abs();
                let rhs = sec <= tol && da.iter().all(|x| x.abs() <= tol);
                bad += usize::from((res <= tol) != rhs);
                if rhs {
                    worst_conforming = worst_conforming.max(res);
                }
            }
            let mut o = Outcome::within(worst_conforming, tol)
                .residual("mismatches", bad as f64)
                .samples(cfg.samples.max(4))
                .conventions(conv());
            o.pass &= bad == 0;
            Ok(o)
        },
    );
    r.check("diagonal-family", "R(t) = t³ − 3t vanishes at √3 and the transform is deformed DT", |_, cfg| {
        let t = bisect(diagonal_residual, 1.0, 2.0).expect("sign change on [1, 2]");
        let jet = diagonal_jet(t);
        let fr = DualFrames::unit(Fibration::CoassociativeT4);
        let f = section_curvature(&fr.w, &jet, &[0.0; 3])?;
        let res = deformed_dt_residual(&fr.g2_w(), &f)?.max_abs();
        let plane = calibrate_plane(&G2Structure::standard(), &graph_plane(&jet), cfg.tol_abs)?;
        let mut o = Outcome::within(res, cfg.tol_abs)
            .residual("root", (t - 3f64.sqrt()).abs())
            .detail(format!("root {t}, graph plane {:?}", plane.kind));
        o.pass &= plane.kind == PlaneKind::Associative;
        Ok(o)
    });
    r.check(
        "coassoc-section-transform",
        "coassociative section with compatible base curvature is deformed DT on W",
        |rng, cfg| {
            let fr = DualFrames::unit(Fibration::AssociativeT3);
            let gw = fr.g2_w();
            let mut worst = 0.0f64;
            for _ in 0..cfg.samples {
                let jet = sample::jet(rng, SectionKind::CoassociativeSection, true);
                let sec = coassoc_section_residual(&jet)?.max_abs();
                let da = compatible_base_curvature(&jet, &sample::base_curvature(rng, 6))?;
                let f = section_curvature(&fr.w, &jet, &da)?;
                worst = worst.max(deformed_dt_residual(&gw, &f)?.max_abs()).max(sec);
            }
            Ok(Outcome::within(worst, cfg.tol_abs).samples(cfg.samples).conventions(conv()))
        },
    );
}

fn chern_simons_suite(r: &mut Runner) {
    let mut grids = r.cfg.grid.clone();
    grids.sort_unstable();
    grids.dedup();
    if grids.len() == 1 {
        grids.push(2 * grids[0]);
    }
    let finest = *grids.last().expect("grid");
    let pairs = r.cfg.samples.max(20);
    let data: Vec<sample::AssocPairData> = (0..pairs).map(|_| sample::AssocPairData::random(&mut r.rng)).collect();
    let cs_pair = |d: &sample::AssocPairData, n: usize| -> Result<(f64, f64)> {
        let m = d.sample(n);
        let w = transform_semiflat_assoc(&m)?;
        Ok((
            chern_simons(&m, &zero_reference(&m), CS_TIME_STEPS)?,
            chern_simons(&w, &zero_reference(&w), CS_TIME_STEPS)?,
        ))
    };
    r.check("difference-constant", "CS_M − CS_W is the same for every pair", |_, cfg| {
        let mut diffs = Vec::new();
        let mut scale = 0.0f64;
        let mut calibrated = 0;
        for d in &data {
            let (m, w) = cs_pair(d, finest)?;
            diffs.push(m - w);
            scale = scale.max(m.abs());
            calibrated += usize::from(d.sample(finest).residual()?.group_vanishes(crate::cycles::semiflat::ASSOCIATIVITY, 1e-12));
        }
        let lo = diffs.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = diffs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let spread = (hi - lo) / scale.max(1.0);
        let mut o = Outcome::within(spread, cfg.tol_rel)
            .samples(pairs)
            .detail(format!("difference in [{lo:e}, {hi:e}] at grid {finest}; {calibrated} calibrated pairs"))
            .conventions(vec![
                "straight-line path from the zero pair".into(),
                format!("{CS_TIME_STEPS} trapezoid steps in time"),
            ]);
        o.pass &= calibrated == 0;
        Ok(o)
    });
    r.check("second-order-convergence", "CS_M converges at second order under refinement", |_, _| {
        let reference = cs_pair(&data[0], 8 * finest)?.0;
        let errs: Vec<f64> = grids
            .iter()
            .map(|&n| cs_pair(&data[0], n).map(|(m, _)| (m - reference).abs()))
            .collect::<Result<_>>()?;
        let orders: Vec<f64> = grids
            .windows(2)
            .zip(errs.windows(2))
            .map(|(n, e)| (e[0] / e[1]).ln() / (n[1] as f64 / n[0] as f64).ln())
            .collect();
        let worst = orders.iter().copied().fold(f64::INFINITY, f64::min);
        Ok(Outcome::named(worst >= MIN_ORDER, "order", worst).detail(format!("errors {errs:?}, orders {orders:?}")))
    });
}
