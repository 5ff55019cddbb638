//! Restrictions of mixed polynomials to complex lines and weighted curves.

use std::collections::BTreeMap;

use num_complex::Complex64;
use num_traits::Zero;

use super::coeff::CRat;
use super::poly::MixedPolynomial;
use super::WeightSignature;

/// Polynomial in `t, conj(t)`, keyed by `(p, q)` for `t^p conj(t)^q`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct LinePoly {
    pub terms: BTreeMap<(u32, u32), CRat>,
}

impl LinePoly {
    pub fn add_term(&mut self, k: (u32, u32), c: CRat) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(k).or_default();
        *slot += &c;
        if slot.is_zero() {
            self.terms.remove(&k);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// No term carries both `t` and `conj(t)`.
    pub fn is_harmonic(&self) -> bool {
        self.terms.keys().all(|(p, q)| *p == 0 || *q == 0)
    }

    pub fn mixed_terms(&self) -> impl Iterator<Item = (&(u32, u32), &CRat)> {
        self.terms.iter().filter(|((p, q), _)| *p > 0 && *q > 0)
    }

    /// Lowest total degree present, ignoring the constant term.
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().filter(|(p, q)| p + q > 0).map(|(p, q)| p + q).min()
    }

    /// As a polynomial in the `z1` slot.
    pub fn to_mixed(&self) -> MixedPolynomial {
        MixedPolynomial::from_terms(self.terms.iter().map(|((p, q), c)| ([*p, *q, 0, 0], c.clone())))
    }

    pub fn from_mixed_z1(p: &MixedPolynomial) -> Self {
        let mut out = LinePoly::default();
        for (e, c) in p.terms() {
            out.add_term((e[0], e[1]), c.clone());
        }
        out
    }
}

/// A complex line in `C^2`.
#[derive(Clone, Debug)]
pub enum Line {
    /// `{z1 = xi z2}`, parametrised by `t = z2`.
    Slope(CRat),
    /// `{z2 = 0}`, parametrised by `t = z1`.
    Axis2,
    /// `{base + t dir}`.
    Affine { base: [CRat; 2], dir: [CRat; 2] },
}

/// Substitute `z_j -> q_j(t)` where each `q_j` lives in the `z1` slot.
fn compose_univariate(p: &MixedPolynomial, q: [&MixedPolynomial; 2]) -> LinePoly {
    let qb = [q[0].conj(), q[1].conj()];
    let mut out = MixedPolynomial::zero();
    for (e, c) in p.terms() {
        let t = q[0].pow(e[0]).mul(&qb[0].pow(e[1])).mul(&q[1].pow(e[2])).mul(&qb[1].pow(e[3]));
        out = out.add(&t.scale(c));
    }
    LinePoly::from_mixed_z1(&out)
}

/// Exact substitution of a line parametrisation.
pub fn restrict_to_line(p: &MixedPolynomial, line: &Line) -> LinePoly {
    let t = MixedPolynomial::z1();
    match line {
        Line::Slope(xi) => {
            let z1 = t.scale(xi);
            compose_univariate(p, [&z1, &t])
        }
        Line::Axis2 => {
            let zero = MixedPolynomial::zero();
            compose_univariate(p, [&t, &zero])
        }
        Line::Affine { base, dir } => {
            let z1 = MixedPolynomial::constant(base[0].clone()).add(&t.scale(&dir[0]));
            let z2 = MixedPolynomial::constant(base[1].clone()).add(&t.scale(&dir[1]));
            compose_univariate(p, [&z1, &z2])
        }
    }
}

/// Floating restriction to `{base + t dir}`; coefficients of `t^p conj(t)^q`.
pub fn restrict_affine_f64(
    p: &MixedPolynomial,
    base: [Complex64; 2],
    dir: [Complex64; 2],
) -> BTreeMap<(u32, u32), Complex64> {
    // (b + d t)^n as coefficients in t
    fn binom_expand(b: Complex64, d: Complex64, n: u32) -> Vec<Complex64> {
        let mut c = vec![Complex64::new(1.0, 0.0)];
        for _ in 0..n {
            let mut nc = vec![Complex64::new(0.0, 0.0); c.len() + 1];
            for (k, v) in c.iter().enumerate() {
                nc[k] += v * b;
                nc[k + 1] += v * d;
            }
            c = nc;
        }
        c
    }
    let mut out: BTreeMap<(u32, u32), Complex64> = BTreeMap::new();
    for (e, c) in p.terms() {
        let h1 = binom_expand(base[0], dir[0], e[0]);
        let a1 = binom_expand(base[0].conj(), dir[0].conj(), e[1]);
        let h2 = binom_expand(base[1], dir[1], e[2]);
        let a2 = binom_expand(base[1].conj(), dir[1].conj(), e[3]);
        let mut hol = vec![Complex64::new(0.0, 0.0); h1.len() + h2.len() - 1];
        for (i, x) in h1.iter().enumerate() {
            for (j, y) in h2.iter().enumerate() {
                hol[i + j] += x * y;
            }
        }
        let mut anti = vec![Complex64::new(0.0, 0.0); a1.len() + a2.len() - 1];
        for (i, x) in a1.iter().enumerate() {
            for (j, y) in a2.iter().enumerate() {
                anti[i + j] += x * y;
            }
        }
        let cc = c.to_c64();
        for (i, x) in hol.iter().enumerate() {
            for (j, y) in anti.iter().enumerate() {
                *out.entry((i as u32, j as u32)).or_insert(Complex64::new(0.0, 0.0)) += cc * x * y;
            }
        }
    }
    out
}

/// Lowest positive degree whose coefficients are not negligible.
pub fn float_order(coeffs: &BTreeMap<(u32, u32), Complex64>, rel_tol: f64) -> Option<u32> {
    let scale = coeffs.iter().filter(|((p, q), _)| p + q > 0).map(|(_, c)| c.norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        return None;
    }
    coeffs.iter().filter(|((p, q), c)| p + q > 0 && c.norm() > rel_tol * scale).map(|((p, q), _)| p + q).min()
}

/// Point of the projective `xi`-line: a finite slope or the axis `{z2 = 0}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum CurveXi {
    Finite(CRat),
    Infinity,
}

impl CurveXi {
    pub fn is_axis(&self) -> bool {
        match self {
            CurveXi::Finite(x) => x.is_zero(),
            CurveXi::Infinity => true,
        }
    }

    pub fn to_c64(&self) -> Option<Complex64> {
        match self {
            CurveXi::Finite(x) => Some(x.to_c64()),
            CurveXi::Infinity => None,
        }
    }
}

/// Restriction of `p` to the weighted curve `z1^s2 = xi z2^s1` through its pullback line.
///
/// For finite nonzero `xi` the curve is traced by `t -> (w^s1 t^s1, t^s2)` with
/// `w^(s1 s2) = xi`; each coefficient of `t^p conj(t)^q` is returned divided by the
/// nonzero factor `w^(s1 r) conj(w)^(s1 r')` common to its class, which keeps it in `Q(i)[xi]`.
pub fn restrict_to_curve(p: &MixedPolynomial, w: &WeightSignature, xi: &CurveXi) -> LinePoly {
    let (s1, s2) = (w.sigma1, w.sigma2);
    let mut out = LinePoly::default();
    match xi {
        CurveXi::Infinity => {
            for (e, c) in p.terms() {
                if e[2] == 0 && e[3] == 0 {
                    out.add_term((s1 * e[0], s1 * e[1]), c.clone());
                }
            }
        }
        CurveXi::Finite(x) if x.is_zero() => {
            for (e, c) in p.terms() {
                if e[0] == 0 && e[1] == 0 {
                    out.add_term((s2 * e[2], s2 * e[3]), c.clone());
                }
            }
        }
        CurveXi::Finite(x) => {
            let xb = x.conj();
            for (e, c) in p.terms() {
                let pp = s1 * e[0] + s2 * e[2];
                let qq = s1 * e[1] + s2 * e[3];
                let i = e[0] / s2;
                let j = e[1] / s2;
                let f = &x.pow(i) * &xb.pow(j);
                out.add_term((pp, qq), c * &f);
            }
        }
    }
    out
}

/// Mixed-class equations of [`restrict_to_curve`] as lists `(coefficient, i, j)` for `xi^i conj(xi)^j`.
pub fn curve_equations(p: &MixedPolynomial, w: &WeightSignature) -> Vec<Vec<(Complex64, u32, u32)>> {
    let (s1, s2) = (w.sigma1, w.sigma2);
    let mut classes: BTreeMap<(u32, u32), Vec<(Complex64, u32, u32)>> = BTreeMap::new();
    for (e, c) in p.terms() {
        let pp = s1 * e[0] + s2 * e[2];
        let qq = s1 * e[1] + s2 * e[3];
        if pp == 0 || qq == 0 || pp > qq {
            continue;
        }
        classes.entry((pp, qq)).or_default().push((c.to_c64(), e[0] / s2, e[1] / s2));
    }
    classes.into_values().filter(|v| v.iter().any(|(c, _, _)| !c.is_zero())).collect()
}
