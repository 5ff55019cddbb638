#![allow(dead_code)]

use std::collections::BTreeMap;

use bumpforge::cli_io::parse_expression;
use bumpforge::cli_io::schema::Certificate;
use bumpforge::pipeline::{bump, validate_domain, BumpOptions, ModelDomain};
use bumpforge::polyalg::{MixedPolynomial, WeightSignature};
use num_complex::Complex64 as C64;

pub const ALMOST: &str = "|z1|^6*|z2|^2 + |z1|^8 + (15/7)*|z1|^2*Re(z1^6) + |z2|^10";
pub const H_EXT: &str = "|z1|^4 + 2*|z1*z2|^2 + |z2|^4";
pub const WEIGHTED: &str = "|z2|^8 + |z2|^4*|z1|^2 + |z1|^6";

pub fn domain(text: &str, m: (u32, u32)) -> ModelDomain {
    let full = parse_expression(text).unwrap();
    validate_domain(text, &full, WeightSignature::new(m.0, m.1).unwrap()).unwrap()
}

pub fn almost() -> ModelDomain {
    domain(ALMOST, (8, 8))
}

pub fn h_ext() -> ModelDomain {
    domain(H_EXT, (4, 4))
}

pub fn weighted() -> ModelDomain {
    domain(WEIGHTED, (4, 8))
}

pub fn certificate(d: &ModelDomain, seed: u64) -> Certificate {
    bump(d, &BumpOptions { seed, verify_samples: 4000, tol: 1e-10 }).unwrap()
}

/// Curve-solver fixtures with known pullback degree at most 12.
pub fn solver_fixtures() -> Vec<(&'static str, (u32, u32))> {
    vec![
        (ALMOST, (8, 8)),
        (H_EXT, (4, 4)),
        ("|z2|^8 + |z2|^4*|z1|^2", (4, 8)),
        ("|z1 - z2|^2*|z1|^2 + |z1 - z2|^4", (4, 4)),
        ("|z1^2 - z2^3|^2", (4, 6)),
        ("|z1 - i*z2|^2*|z1 + z2|^2", (4, 4)),
        ("|z1|^2*|z2|^2", (4, 4)),
        ("|z2|^2*|z1|^4 + |z2|^6", (6, 6)),
        ("|z1^3 - 2*z2^2|^2", (6, 4)),
        ("|z1|^2*|z1 - 3*z2|^2 + |z1 - 3*z2|^4 + |2*z1 - z2|^2*|z1 - 3*z2|^2", (4, 4)),
    ]
}

/// Mixed coefficients of `P(omega tau^s1, tau^s2)` (or of the axis restrictions), computed in floating point.
fn mixed_defect(p: &MixedPolynomial, w: &WeightSignature, point: Option<C64>) -> f64 {
    let (s1, s2) = (w.sigma1, w.sigma2);
    let mut acc: BTreeMap<(u32, u32), C64> = BTreeMap::new();
    let mut total = 0.0;
    for (e, c) in p.terms() {
        let c = c.to_c64();
        total += c.norm();
        let (coef, pq) = match point {
            None => {
                if e[2] + e[3] > 0 {
                    continue;
                }
                (c, (s1 * e[0], s1 * e[1]))
            }
            Some(om) => (c * om.powu(e[0]) * om.conj().powu(e[1]), (s1 * e[0] + s2 * e[2], s1 * e[1] + s2 * e[3])),
        };
        *acc.entry(pq).or_insert(C64::new(0.0, 0.0)) += coef;
    }
    let d: f64 = acc.iter().filter(|((a, b), _)| *a > 0 && *b > 0).map(|(_, v)| v.norm_sqr()).sum();
    d.sqrt() / total.max(f64::MIN_POSITIVE)
}

/// Harmonicity defect of `P` along `z1^s2 = xi z2^s1`; `None` is the axis `z2 = 0`.
pub fn curve_defect(p: &MixedPolynomial, w: &WeightSignature, xi: Option<C64>) -> f64 {
    match xi {
        None => mixed_defect(p, w, None),
        Some(x) => {
            let om = if x.norm() == 0.0 { x } else { x.powf(1.0 / w.sigma2 as f64) };
            mixed_defect(p, w, Some(om))
        }
    }
}

/// Brute-force curve finder: local minima of the defect on a polar grid in `xi` and `1/xi`,
/// refined by compass search, kept when the defect is below 1e-9 of its maximum on the
/// circle through the point.
pub fn grid_oracle(p: &MixedPolynomial, w: &WeightSignature) -> Vec<Option<C64>> {
    let mut found: Vec<Option<C64>> = Vec::new();
    let push = |found: &mut Vec<Option<C64>>, x: Option<C64>| {
        let dup = found.iter().any(|y| match (y, &x) {
            (None, None) => true,
            (Some(a), Some(b)) => (a - b).norm() < 1e-6 * (1.0 + b.norm()),
            _ => false,
        });
        if !dup {
            found.push(x);
        }
    };
    if curve_defect(p, w, None) < 1e-12 {
        push(&mut found, None);
    }
    if curve_defect(p, w, Some(C64::new(0.0, 0.0))) < 1e-12 {
        push(&mut found, Some(C64::new(0.0, 0.0)));
    }
    let f = |x: C64| curve_defect(p, w, Some(x));
    let (nr, nt) = (48usize, 96usize);
    let node = |i: usize, j: usize| {
        let r = 10f64.powf(-1.3 + 1.6 * i as f64 / (nr - 1) as f64);
        C64::from_polar(r, std::f64::consts::TAU * j as f64 / nt as f64)
    };
    for inverted in [false, true] {
        let g = |x: C64| if inverted { f(1.0 / x) } else { f(x) };
        let vals: Vec<Vec<f64>> = (0..nr).map(|i| (0..nt).map(|j| g(node(i, j))).collect()).collect();
        for i in 0..nr {
            for j in 0..nt {
                let v = vals[i][j];
                let mut is_min = true;
                for di in [-1i64, 0, 1] {
                    for dj in [-1i64, 0, 1] {
                        let ii = i as i64 + di;
                        if (di, dj) == (0, 0) || ii < 0 || ii >= nr as i64 {
                            continue;
                        }
                        let jj = (j as i64 + dj).rem_euclid(nt as i64) as usize;
                        is_min &= v <= vals[ii as usize][jj];
                    }
                }
                if !is_min {
                    continue;
                }
                let ring = |x: C64| {
                    (0..32)
                        .map(|k| g(x * C64::from_polar(1.0, std::f64::consts::TAU * k as f64 / 32.0)))
                        .fold(0.0, f64::max)
                };
                let mut x = node(i, j);
                let scale = ring(x);
                if v > 0.2 * scale {
                    continue;
                }
                let mut step = 0.1 * x.norm();
                let mut best = g(x);
                let mut iters = 0;
                while step > 1e-13 * x.norm().max(1e-3) && iters < 5000 && best > 1e-14 * scale {
                    iters += 1;
                    let mut moved = false;
                    for d in [C64::new(1.0, 0.0), C64::new(-1.0, 0.0), C64::new(0.0, 1.0), C64::new(0.0, -1.0)] {
                        let y = x + d * step;
                        let gy = g(y);
                        if gy < best {
                            best = gy;
                            x = y;
                            moved = true;
                        }
                    }
                    if !moved {
                        step /= 2.0;
                    }
                }
                if best < 1e-9 * ring(x) {
                    push(&mut found, Some(if inverted { 1.0 / x } else { x }));
                }
            }
        }
    }
    found
}

pub fn same_curve_sets(a: &[Option<C64>], b: &[Option<C64>]) -> bool {
    let close = |x: &Option<C64>, y: &Option<C64>| match (x, y) {
        (None, None) => true,
        (Some(p), Some(q)) => (p - q).norm() < 1e-6 * (1.0 + q.norm()),
        _ => false,
    };
    a.len() == b.len() && a.iter().all(|x| b.iter().any(|y| close(x, y)))
}

/// Real-valued random polynomial of total degree at most `deg`.
pub fn random_real_poly(rng: &mut impl rand::Rng, deg: u32, terms: usize) -> MixedPolynomial {
    use bumpforge::polyalg::CRat;
    let mut p = MixedPolynomial::zero();
    for _ in 0..terms {
        let mut e = [0u32; 4];
        let d = rng.gen_range(1..=deg);
        for _ in 0..d {
            e[rng.gen_range(0..4)] += 1;
        }
        let c = CRat::from_frac(rng.gen_range(-9..=9), rng.gen_range(1..=7));
        let ci = CRat::from_frac(rng.gen_range(-9..=9), rng.gen_range(1..=7));
        let coeff = CRat::new(c.re.clone(), ci.re.clone());
        let m = MixedPolynomial::monomial(e, coeff);
        p = p.add(&m.add(&m.conj()));
    }
    p
}

/// Levi matrix of a real function from Richardson-extrapolated central differences
/// of the real 4x4 Hessian in `(x1, y1, x2, y2)`.
pub fn fd_levi_oracle(f: impl Fn([C64; 2]) -> f64, z: [C64; 2], h: f64) -> [[C64; 2]; 2] {
    let at = |x: [f64; 4]| f([C64::new(x[0], x[1]), C64::new(x[2], x[3])]);
    let base = [z[0].re, z[0].im, z[1].re, z[1].im];
    let second = |a: usize, b: usize, h: f64| {
        let shifted = |sa: f64, sb: f64| {
            let mut x = base;
            x[a] += sa * h;
            x[b] += sb * h;
            at(x)
        };
        (shifted(1.0, 1.0) - shifted(1.0, -1.0) - shifted(-1.0, 1.0) + shifted(-1.0, -1.0)) / (4.0 * h * h)
    };
    let rich = |a: usize, b: usize| (4.0 * second(a, b, h / 2.0) - second(a, b, h)) / 3.0;
    let mut m = [[C64::new(0.0, 0.0); 2]; 2];
    for j in 0..2 {
        for k in 0..2 {
            let (xj, yj, xk, yk) = (2 * j, 2 * j + 1, 2 * k, 2 * k + 1);
            m[j][k] = C64::new(rich(xj, xk) + rich(yj, yk), rich(xj, yk) - rich(yj, xk)) * 0.25;
        }
    }
    m
}

pub fn matrix_distance(a: &[[C64; 2]; 2], b: &[[C64; 2]; 2]) -> f64 {
    let mut s = 0.0;
    for j in 0..2 {
        for k in 0..2 {
            s += (a[j][k] - b[j][k]).norm_sqr();
        }
    }
    s.sqrt()
}

pub fn matrix_norm(a: &[[C64; 2]; 2]) -> f64 {
    matrix_distance(a, &[[C64::new(0.0, 0.0); 2]; 2])
}

fn random_coefficient(rng: &mut impl rand::Rng) -> (String, bumpforge::polyalg::CRat) {
    use bumpforge::polyalg::CRat;
    let n = rng.gen_range(1..=12i64);
    let d = rng.gen_range(1..=9i64);
    match rng.gen_range(0..4) {
        0 => (format!("{n}"), CRat::from_int(n)),
        1 => (format!("({n}/{d})"), CRat::from_frac(n, d)),
        2 => (format!("({n}/{d})*i"), &CRat::from_frac(n, d) * &CRat::i()),
        _ => (format!("{n}.25"), CRat::from_frac(4 * n + 1, 4)),
    }
}

fn random_linear(rng: &mut impl rand::Rng) -> (String, MixedPolynomial) {
    let (ca, a) = random_coefficient(rng);
    let (cb, b) = random_coefficient(rng);
    let p = MixedPolynomial::z1().scale(&a).add(&MixedPolynomial::z2().scale(&b));
    (format!("{ca}*z1 + {cb}*z2"), p)
}

/// Random expression text paired with the polynomial built directly through the algebra API.
pub fn random_expression(rng: &mut impl rand::Rng, depth: u32) -> (String, MixedPolynomial) {
    let leaf = depth == 0 || rng.gen_bool(0.3);
    if leaf {
        return match rng.gen_range(0..5) {
            0 => ("z1".into(), MixedPolynomial::z1()),
            1 => ("z2".into(), MixedPolynomial::z2()),
            2 => ("conj(z1)".into(), MixedPolynomial::z1().conj()),
            3 => {
                let (t, c) = random_coefficient(rng);
                (t, MixedPolynomial::constant(c))
            }
            _ => {
                let (t, l) = random_linear(rng);
                let k = 2 * rng.gen_range(1..=2u32);
                (format!("|{t}|^{k}"), l.mul(&l.conj()).pow(k / 2))
            }
        };
    }
    let (a, pa) = random_expression(rng, depth - 1);
    let (b, pb) = random_expression(rng, depth - 1);
    match rng.gen_range(0..7) {
        0 => (format!("{a} + {b}"), pa.add(&pb)),
        1 => (format!("({a}) - ({b})"), pa.sub(&pb)),
        2 => (format!("({a})*({b})"), pa.mul(&pb)),
        3 => (format!("Re({a})"), pa.re()),
        4 => (format!("Im({a})"), pa.im()),
        5 => (format!("conj({a})"), pa.conj()),
        _ => (format!("({a})^2"), pa.pow(2)),
    }
}
