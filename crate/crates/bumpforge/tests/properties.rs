use bumpforge::cli_io::{parse_expression, print_expression};
use bumpforge::fsbump::PeriodicQuinticSpline;
use bumpforge::fsbump::{bumped_laplacian, circle_profile, Profile, RadialProfile};
use bumpforge::pipeline::{roots, symmetrize, to_z};
use bumpforge::polyalg::compiled::PolyJet;
use bumpforge::polyalg::{
    pluriharmonic_strip, pullback, weighted_decompose, CRat, LinePoly, MixedPolynomial, WeightSignature,
};
use num_complex::Complex64 as C64;
use proptest::prelude::*;

fn real_poly(max_exp: u32, max_terms: usize) -> impl Strategy<Value = MixedPolynomial> {
    prop::collection::vec(
        ([0..=max_exp, 0..=max_exp, 0..=max_exp, 0..=max_exp], -9i64..=9, 1i64..=6, -9i64..=9),
        1..=max_terms,
    )
    .prop_map(|terms| {
        let mut p = MixedPolynomial::zero();
        for (e, re, den, im) in terms {
            let m = MixedPolynomial::monomial(e, CRat::new(CRat::from_frac(re, den).re, CRat::from_frac(im, den).re));
            p = p.add(&m.add(&m.conj()));
        }
        p
    })
}

fn weights() -> impl Strategy<Value = WeightSignature> {
    (1u32..=4, 1u32..=4).prop_map(|(a, b)| WeightSignature::new(2 * a, 2 * b).unwrap())
}

fn point() -> impl Strategy<Value = [C64; 2]> {
    [-1.0f64..1.0, -1.0f64..1.0, -1.0f64..1.0, -1.0f64..1.0].prop_map(|x| [C64::new(x[0], x[1]), C64::new(x[2], x[3])])
}

fn close(a: C64, b: C64, scale: f64) -> bool {
    (a - b).norm() <= 1e-10 * (1.0 + scale)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn decomposition_sums_back(p in real_poly(3, 5), w in weights()) {
        let parts = weighted_decompose(&p, &w);
        let mut sum = MixedPolynomial::zero();
        for c in &parts {
            for (e, _) in c.part.terms() {
                prop_assert_eq!(w.weighted_degree(e), c.eta.clone());
            }
            sum = sum.add(&c.part);
        }
        prop_assert_eq!(sum, p);
        prop_assert!(parts.windows(2).all(|x| x[0].eta < x[1].eta));
    }

    #[test]
    fn pullback_is_multiplicative(p in real_poly(2, 3), q in real_poly(2, 3), w in weights()) {
        prop_assert_eq!(pullback(&p.mul(&q), &w), pullback(&p, &w).mul(&pullback(&q, &w)));
    }

    #[test]
    fn symmetrize_inverts_pullback(p in real_poly(3, 5), w in weights()) {
        prop_assert_eq!(symmetrize(&pullback(&p, &w), &w).unwrap(), p);
    }

    #[test]
    fn strip_identity(p in real_poly(3, 6), d in 1u32..=12) {
        let (q, rho) = pluriharmonic_strip(&p, d);
        prop_assert!(q.terms().all(|(e, _)| e[1] == 0 && e[3] == 0));
        prop_assert_eq!(rho.add(&q.re()), p);
        prop_assert!(rho.is_real_valued());
    }

    #[test]
    fn print_parse_round_trip(p in real_poly(3, 6)) {
        let text = print_expression(&p);
        prop_assert_eq!(parse_expression(&text).unwrap(), p);
    }

    #[test]
    fn jet_product_rule(p in real_poly(2, 3), q in real_poly(2, 3), z in point()) {
        let (jp, jq, jpq) = (PolyJet::new(&p).jet(z), PolyJet::new(&q).jet(z), PolyJet::new(&p.mul(&q)).jet(z));
        let prod = jp.mul(&jq);
        let scale = p.max_abs_coeff() * q.max_abs_coeff() * 100.0;
        prop_assert!((prod.v - jpq.v).abs() <= 1e-10 * (1.0 + scale));
        for j in 0..2 {
            prop_assert!(close(prod.g[j], jpq.g[j], scale));
            for k in 0..2 {
                prop_assert!(close(prod.m[j][k], jpq.m[j][k], scale));
            }
        }
    }

    #[test]
    fn roots_map_back(w in weights(), z in point()) {
        let rs = roots(&w, z);
        prop_assert_eq!(rs.len() as u32, w.sigma1 * w.sigma2);
        for (t, dt) in rs {
            let back = to_z(&w, t);
            prop_assert!(close(back[0], z[0], 1.0) && close(back[1], z[1], 1.0));
            // dt_j/dz_j * dz_j/dt_j = 1
            let dz = [t[0].powu(w.sigma1 - 1) * w.sigma1 as f64, t[1].powu(w.sigma2 - 1) * w.sigma2 as f64];
            for j in 0..2 {
                if t[j].norm() > 1e-6 {
                    prop_assert!(close(dt[j] * dz[j], C64::new(1.0, 0.0), 1.0));
                }
            }
        }
    }

    #[test]
    fn spline_interpolates_nodes(vals in prop::collection::vec(-5.0f64..5.0, 8..64)) {
        let s = PeriodicQuinticSpline::interpolate(&vals);
        let n = vals.len();
        for (j, v) in vals.iter().enumerate() {
            let (y, _, _) = s.eval(std::f64::consts::TAU * j as f64 / n as f64);
            prop_assert!((y - v).abs() <= 1e-9 * (1.0 + v.abs()));
        }
    }

    #[test]
    fn bumped_laplacian_is_affine_in_delta(h in 0.01f64..1.0, a in 0.0f64..2.0, b in 0.0f64..2.0, theta in 0.0f64..6.3) {
        let mut u = LinePoly::default();
        u.add_term((3, 3), CRat::from_int(1));
        u.add_term((4, 2), CRat::from_frac(9, 16));
        u.add_term((2, 4), CRat::from_frac(9, 16));
        let circle = circle_profile(&u, 6).unwrap();
        let prof = RadialProfile { degree: 6, h: Profile::Constant(h) };
        let f = |d: f64| bumped_laplacian(&circle, &prof, d, theta);
        prop_assert!((f(a) + f(b) - 2.0 * f(0.5 * (a + b))).abs() <= 1e-9);
        prop_assert!((f(0.0) - circle.value(theta)).abs() <= 1e-12);
    }
}
