mod common;

use bumpforge::levi::{check_psh, hessian, Region, Verdict};
use bumpforge::polyalg::compiled::PolyJet;
use common::{fd_levi_oracle, matrix_distance, matrix_norm, random_real_poly};
use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

#[test]
fn closed_form_hessians() {
    // |z1|^4 + 2|z1 z2|^2 + |z2|^4 = (|z1|^2 + |z2|^2)^2
    let p = bumpforge::cli_io::parse_expression("|z1|^4 + 2*|z1*z2|^2 + |z2|^4").unwrap();
    let z = [c(0.3, -0.7), c(1.1, 0.2)];
    let s = z[0].norm_sqr() + z[1].norm_sqr();
    let m = hessian(&p).at(z);
    for j in 0..2 {
        for k in 0..2 {
            let delta = if j == k { 2.0 * s } else { 0.0 };
            let want = c(delta, 0.0) + 2.0 * z[k] * z[j].conj();
            assert!((m[j][k] - want).norm() < 1e-13, "{j}{k}: {} vs {}", m[j][k], want);
        }
    }
    // Re(z1^2 conj z2) is pluriharmonic in z1 only along the diagonal entry
    let p = bumpforge::cli_io::parse_expression("Re(z1^2*conj(z2))").unwrap();
    let m = hessian(&p).at(z);
    assert!(m[0][0].norm() < 1e-15 && m[1][1].norm() < 1e-15);
    assert!((m[0][1] - z[0]).norm() < 1e-14);
}

#[test]
fn analytic_matches_finite_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..10 {
        let p = random_real_poly(&mut rng, 10, 6);
        let h = hessian(&p);
        let jet = PolyJet::new(&p);
        for _ in 0..100 {
            let z = [
                c(rng.gen_range(-0.7..0.7), rng.gen_range(-0.7..0.7)),
                c(rng.gen_range(-0.7..0.7), rng.gen_range(-0.7..0.7)),
            ];
            let exact = h.at(z);
            let fd = fd_levi_oracle(|x| p.eval(x).re, z, 2e-3);
            assert!(matrix_distance(&exact, &fd) <= 1e-6 * matrix_norm(&exact).max(1e-9));
            assert!(matrix_distance(&exact, &jet.jet(z).m) <= 1e-12 * (1.0 + matrix_norm(&exact)));
        }
    }
}

#[test]
fn psh_verdicts() {
    let good = bumpforge::cli_io::parse_expression("|z1|^6*|z2|^2 + |z1|^8 + (15/7)*|z1|^2*Re(z1^6)").unwrap();
    let rep = check_psh(&good, &Region::Sphere, 4000, 3, 1e-10).unwrap();
    assert_ne!(rep.verdict, Verdict::Fail);
    let bad = bumpforge::cli_io::parse_expression("|z1|^6*|z2|^2 + |z1|^8 + 4*|z1|^2*Re(z1^6)").unwrap();
    let rep = check_psh(&bad, &Region::Sphere, 4000, 3, 1e-10).unwrap();
    assert_eq!(rep.verdict, Verdict::Fail);
    let w = rep.witness.unwrap();
    let z = [c(w[0], w[1]), c(w[2], w[3])];
    assert!(bumpforge::jet::levi_eigs(&hessian(&bad).at(z)).0 < 0.0);
}
