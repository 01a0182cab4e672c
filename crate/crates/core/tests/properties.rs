use std::sync::Arc;

use proptest::prelude::*;

use g2geom::cycles::{
    assoc_section_residual, solve_first_partial, triple_cross, JetPoint, Quaternion, SectionKind,
};
use g2geom::exalg::{basis_forms, CoordFrame, Form};
use g2geom::fourier::{transform_flat_torus, FlatConnection, FlatTorusObject, TorusPoint};
use g2geom::g2::{g2_frame, standard_decomposition, G2Structure};
use g2geom::linalg::dot;
use g2geom::moduli::{cubic_tensor, symmetric_report};
use g2geom::spin7::{quartic_tensor, spin7_frame};
use g2geom::{q, qi, Q};

type H = Quaternion<Q>;

fn rational() -> impl Strategy<Value = Q> {
    (-12i64..=12, 1i64..=6).prop_map(|(n, d)| q(n, d))
}

fn positive() -> impl Strategy<Value = Q> {
    (1i64..=12, 1i64..=6).prop_map(|(n, d)| q(n, d))
}

fn vector(n: usize) -> impl Strategy<Value = Vec<Q>> {
    prop::collection::vec(rational(), n)
}

fn quaternion() -> impl Strategy<Value = H> {
    vector(4).prop_map(|v| Quaternion::from_slice(&v))
}

/// Random constant-coefficient k-form with a few nonzero terms.
fn form(frame: Arc<CoordFrame>, degree: usize) -> impl Strategy<Value = Form<Q>> {
    let n = basis_forms::<Q>(&frame, degree).len();
    prop::collection::vec((0..n, rational()), 1..6).prop_map(move |terms| {
        let basis = basis_forms::<Q>(&frame, degree);
        terms
            .iter()
            .fold(Form::zero(&frame, degree), |acc, (i, c)| &acc + &basis[*i].scale(c))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cross_product_laws(u in vector(7), v in vector(7)) {
        let g = G2Structure::standard();
        let c = g.cross(&u, &v);
        prop_assert_eq!(dot(&c, &u), qi(0));
        prop_assert_eq!(dot(&c, &v), qi(0));
        let uv = dot(&u, &v);
        prop_assert_eq!(dot(&c, &c), dot(&u, &u) * dot(&v, &v) - &uv * &uv);
        let neg: Vec<Q> = g.cross(&v, &u).iter().map(|x| -x).collect();
        prop_assert_eq!(c, neg);
    }

    #[test]
    fn double_cross_is_clifford(u in vector(7), v in vector(7)) {
        // u × (u × v) = −|u|² v + ⟨u, v⟩ u
        let g = G2Structure::standard();
        let lhs = g.cross(&u, &g.cross(&u, &v));
        let (uu, uv) = (dot(&u, &u), dot(&u, &v));
        let rhs: Vec<Q> = u.iter().zip(&v).map(|(a, b)| -(&uu * b) + &uv * a).collect();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn quaternion_norm_is_multiplicative(a in quaternion(), b in quaternion()) {
        prop_assert_eq!((a.clone() * b.clone()).norm_sq(), a.norm_sq() * b.norm_sq());
    }

    #[test]
    fn triple_cross_is_alternating_and_orthogonal(a in quaternion(), b in quaternion(), c in quaternion()) {
        let t = triple_cross(&a, &b, &c);
        prop_assert_eq!(triple_cross(&b, &a, &c), -t.clone());
        prop_assert_eq!(triple_cross(&a, &c, &b), -t.clone());
        for x in [&a, &b, &c] {
            prop_assert_eq!(t.dot(x), qi(0));
        }
    }

    #[test]
    fn solved_jets_satisfy_the_section_equation(p2 in quaternion(), p3 in quaternion()) {
        if let Some(p1) = solve_first_partial(&p2, &p3) {
            let jet = JetPoint::new(SectionKind::AssociativeSection, [p1, p2, p3]);
            prop_assert!(assoc_section_residual(&jet).unwrap().is_zero());
        }
    }

    #[test]
    fn hodge_star_is_an_isometric_involution(a in form(g2_frame(), 3), b in form(g2_frame(), 3)) {
        prop_assert_eq!(a.hodge().hodge(), a.clone());
        let lhs = a.wedge(&b.hodge());
        prop_assert_eq!(lhs, Form::volume(&g2_frame()).scale(&a.inner(&b)));
    }

    #[test]
    fn components_sum_back_and_are_orthogonal(a in form(g2_frame(), 2), b in form(g2_frame(), 3)) {
        for x in [a, b] {
            let parts = standard_decomposition(x.degree()).unwrap().split(&x).unwrap();
            let sum = parts.iter().fold(Form::zero(x.frame(), x.degree()), |acc, c| &acc + &c.form);
            prop_assert_eq!(&sum, &x);
            for (i, p) in parts.iter().enumerate() {
                for r in &parts[i + 1..] {
                    prop_assert_eq!(p.form.inner(&r.form), qi(0));
                }
            }
        }
    }

    #[test]
    fn flat_torus_transform_is_an_involution(
        coords in vector(7),
        lattice in prop::collection::vec(positive(), 7),
    ) {
        let p = FlatTorusObject::Point(TorusPoint::new(coords.clone(), lattice.clone()).unwrap());
        prop_assert_eq!(transform_flat_torus(&transform_flat_torus(&p).unwrap()).unwrap(), p);
        let a = FlatTorusObject::Connection(FlatConnection::new(coords, lattice).unwrap());
        prop_assert_eq!(transform_flat_torus(&transform_flat_torus(&a).unwrap()).unwrap(), a);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn cubic_coupling_is_symmetric(a in form(g2_frame(), 3), b in form(g2_frame(), 3), c in form(g2_frame(), 3)) {
        let g = G2Structure::standard();
        let rep = symmetric_report([&a, &b, &c], |x| cubic_tensor(&g, x)).unwrap();
        prop_assert_eq!(rep.symmetry_defect, qi(0));
    }

    #[test]
    fn quartic_coupling_is_symmetric(
        a in form(spin7_frame(), 4),
        b in form(spin7_frame(), 4),
        c in form(spin7_frame(), 4),
        d in form(spin7_frame(), 4),
    ) {
        let v = quartic_tensor([&a, &b, &c, &d]).unwrap();
        for perm in [[1, 0, 2, 3], [0, 2, 1, 3], [0, 1, 3, 2], [3, 2, 1, 0]] {
            let args = [&a, &b, &c, &d];
            prop_assert_eq!(quartic_tensor(perm.map(|i| args[i])).unwrap(), v.clone());
        }
    }
}
