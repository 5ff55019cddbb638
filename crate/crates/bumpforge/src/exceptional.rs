//! Exceptional harmonic curves, classification and per-curve invariants.

use std::collections::BTreeMap;

use num_complex::Complex64 as C64;
use num_traits::One;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::frame::LineFrame;
use crate::levi::{compiled_hessian, degeneracy_ratio, point_to_array};
use crate::polyalg::line::{curve_equations, float_order, restrict_affine_f64};
use crate::polyalg::{
    rat_int, restrict_to_curve, weighted_decompose, CRat, CurveXi, MixedPolynomial, Rat, WeightSignature,
};
use crate::sampling::{sample, weighted_sphere_point};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExceptionalError {
    #[error("polynomial is not weighted homogeneous of weight 1")]
    NotWeightedHomogeneous,
    #[error("no component up to pullback degree {0} is non-harmonic on the curve")]
    InfiniteType(u32),
    #[error("subdivision exceeded {0} boxes; the harmonic set may not be finite")]
    SolverBudget(usize),
    #[error("harmonic curve near xi = {0} has no exact rational parameter")]
    Unrepresentable(String),
    #[error("curve with xi = {0} carries {1} pullback lines, expected {2}")]
    LineCount(String, usize, usize),
}

/// One member of E(P) with its pullback lines.
#[derive(Clone, Debug, PartialEq)]
pub struct ExceptionalCurve {
    pub xi: CurveXi,
    /// Slope of line 0 (exact when a rational root exists); zero for the axes.
    pub omega0: CRat,
    pub lines: Vec<LineFrame>,
    /// Deck element `(l, m)` carrying line 0 to line `k`.
    pub deck: Vec<(u32, u32)>,
}

impl ExceptionalCurve {
    /// Min sine distance from `t` to any of the pullback lines.
    pub fn sine_distance(&self, t: [C64; 2]) -> f64 {
        self.lines.iter().map(|l| l.sine_distance(t)).fold(f64::INFINITY, f64::min)
    }

    /// Index of the nearest pullback line and `|s1|/|s2|` in its frame.
    pub fn nearest_line(&self, t: [C64; 2]) -> (usize, f64) {
        let mut best = (0, f64::INFINITY);
        for (k, l) in self.lines.iter().enumerate() {
            let r = l.ratio(t);
            if r < best.1 {
                best = (k, r);
            }
        }
        best
    }
}

/// `(l, m)` with `sigma2 l - sigma1 m = k (mod sigma1 sigma2)`.
pub fn deck_element(w: &WeightSignature, k: u32) -> (u32, u32) {
    let big = w.sigma1 * w.sigma2;
    for l in 0..w.sigma1 {
        for m in 0..w.sigma2 {
            let v = (w.sigma2 * l + big * w.sigma1 - w.sigma1 * m) % big;
            if v == k % big {
                return (l, m);
            }
        }
    }
    unreachable!("sigma1 and sigma2 are coprime")
}

pub fn root_of_unity(n: u32, k: i64) -> C64 {
    C64::from_polar(1.0, std::f64::consts::TAU * k as f64 / n as f64)
}

/// Exact `L`-th root of a rational complex number if one with small denominators exists,
/// otherwise a close rational approximation of the principal root.
pub fn line_slope(xi: &CRat, l: u32) -> CRat {
    if l == 1 {
        return xi.clone();
    }
    let z = xi.to_c64().powf(1.0 / l as f64);
    let cand = CRat::approximate(z, 10_000);
    if &cand.pow(l) == xi {
        return cand;
    }
    CRat::approximate(z, 1_000_000_000_000)
}

pub fn build_curve(xi: CurveXi, w: &WeightSignature) -> ExceptionalCurve {
    match &xi {
        CurveXi::Infinity => {
            ExceptionalCurve { xi, omega0: CRat::zero(), lines: vec![LineFrame::Axis2], deck: vec![(0, 0)] }
        }
        CurveXi::Finite(x) if x.is_zero() => ExceptionalCurve {
            xi,
            omega0: CRat::zero(),
            lines: vec![LineFrame::Slope(C64::new(0.0, 0.0))],
            deck: vec![(0, 0)],
        },
        CurveXi::Finite(x) => {
            let big = w.lines_per_curve();
            let omega0 = line_slope(x, big);
            let w0 = omega0.to_c64();
            let mut lines = Vec::new();
            let mut deck = Vec::new();
            for k in 0..big {
                let (l, m) = deck_element(w, k);
                let rot = root_of_unity(w.sigma1, l as i64) * root_of_unity(w.sigma2, -(m as i64));
                lines.push(LineFrame::Slope(w0 * rot));
                deck.push((l, m));
            }
            ExceptionalCurve { xi, omega0, lines, deck }
        }
    }
}

fn check_weight_one(p: &MixedPolynomial, w: &WeightSignature) -> Result<(), ExceptionalError> {
    let comps = weighted_decompose(p, w);
    if comps.len() != 1 || !comps[0].eta.is_one() {
        return Err(ExceptionalError::NotWeightedHomogeneous);
    }
    Ok(())
}

/// One class equation `sum c xi^i conj(xi)^j = 0`.
struct ClassEq {
    terms: Vec<(C64, u32, u32)>,
}

impl ClassEq {
    fn eval(&self, x: C64) -> C64 {
        let xb = x.conj();
        self.terms.iter().map(|(c, i, j)| c * x.powu(*i) * xb.powu(*j)).sum()
    }

    /// Taylor bound on `|E(x) - E(c)|` for `|x - c| <= rho`.
    fn variation(&self, c: C64, rho: f64) -> f64 {
        let deg = self.terms.iter().map(|(_, i, j)| (*i).max(*j)).max().unwrap_or(0) as usize;
        let mut coef = vec![vec![C64::new(0.0, 0.0); deg + 1]; deg + 1];
        let cb = c.conj();
        for (k, i, j) in &self.terms {
            let (i, j) = (*i as usize, *j as usize);
            for a in 0..=i {
                for b in 0..=j {
                    if a + b == 0 {
                        continue;
                    }
                    let bin = binom(i, a) * binom(j, b);
                    coef[a][b] += k * bin * c.powu((i - a) as u32) * cb.powu((j - b) as u32);
                }
            }
        }
        let mut s = 0.0;
        for (a, row) in coef.iter().enumerate() {
            for (b, v) in row.iter().enumerate() {
                if a + b > 0 {
                    s += v.norm() * rho.powi((a + b) as i32);
                }
            }
        }
        s
    }
}

fn binom(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, x| acc * (n - x) as f64 / (x + 1) as f64)
}

pub const BOX_BUDGET: usize = 400_000;
const LEAF_WIDTH: f64 = 1e-7;

/// Leaf boxes of `[-1,1]^2` not excluded for the system.
fn subdivide(eqs: &[ClassEq]) -> Result<Vec<C64>, ExceptionalError> {
    let mut stack = vec![(C64::new(0.0, 0.0), 1.0f64)];
    let mut leaves = Vec::new();
    let mut visited = 0usize;
    while let Some((c, r)) = stack.pop() {
        visited += 1;
        if visited > BOX_BUDGET {
            return Err(ExceptionalError::SolverBudget(BOX_BUDGET));
        }
        let rho = r * std::f64::consts::SQRT_2;
        let excluded = eqs.iter().any(|e| e.eval(c).norm() > e.variation(c, rho) * (1.0 + 1e-12) + 1e-300);
        if excluded {
            continue;
        }
        if 2.0 * r <= LEAF_WIDTH {
            leaves.push(c);
            continue;
        }
        let h = r / 2.0;
        for (dx, dy) in [(-h, -h), (h, -h), (-h, h), (h, h)] {
            stack.push((c + C64::new(dx, dy), h));
        }
    }
    Ok(leaves)
}

fn class_system(p: &MixedPolynomial, w: &WeightSignature) -> Vec<ClassEq> {
    curve_equations(p, w).into_iter().map(|terms| ClassEq { terms }).collect()
}

/// Candidate slopes `xi` with `|xi| <= sqrt(2)` from one chart, rationally reconstructed,
/// together with the surviving leaf centres.
fn chart_candidates(p: &MixedPolynomial, w: &WeightSignature) -> Result<(Vec<CRat>, Vec<C64>), ExceptionalError> {
    let eqs = class_system(p, w);
    if eqs.is_empty() {
        return Ok((Vec::new(), Vec::new()));
    }
    let leaves = subdivide(&eqs)?;
    let mut out: Vec<CRat> = Vec::new();
    for c in &leaves {
        let q = CRat::approximate(*c, 10_000);
        if (q.to_c64() - c).norm() > 1e-6 || q.is_zero() {
            continue;
        }
        if !out.contains(&q) {
            out.push(q);
        }
    }
    Ok((out, leaves))
}

/// Every surviving leaf must sit next to a confirmed curve.
fn check_leaves(leaves: &[C64], confirmed: &[C64]) -> Result<(), ExceptionalError> {
    for l in leaves {
        if l.norm() < 1e-6 {
            continue;
        }
        if !confirmed.iter().any(|x| (x - l).norm() <= 1e-5 * (1.0 + x.norm())) {
            return Err(ExceptionalError::Unrepresentable(format!("{:.9}{:+.9}i", l.re, l.im)));
        }
    }
    Ok(())
}

fn is_exceptional(p: &MixedPolynomial, w: &WeightSignature, xi: &CurveXi) -> bool {
    restrict_to_curve(p, w, xi).is_harmonic()
}

/// E(P): curves `z1^sigma2 = xi z2^sigma1` on which the weight-one part is harmonic.
///
/// Nonzero finite slopes come from subdivision on two charts (`xi` and `1/xi`, the latter
/// through the variable swap); every candidate is confirmed exactly, and a harmonic curve
/// without a rational parameter is an error.
pub fn find_exceptional(p: &MixedPolynomial, w: &WeightSignature) -> Result<Vec<ExceptionalCurve>, ExceptionalError> {
    check_weight_one(p, w)?;
    let mut xis: Vec<CurveXi> = Vec::new();
    let zero = CurveXi::Finite(CRat::zero());
    if is_exceptional(p, w, &zero) {
        xis.push(zero);
    }
    let (cands, leaves) = chart_candidates(p, w)?;
    let mut found = Vec::new();
    for c in cands {
        let xi = CurveXi::Finite(c.clone());
        if is_exceptional(p, w, &xi) {
            found.push(c.to_c64());
            if !xis.contains(&xi) {
                xis.push(xi);
            }
        }
    }
    check_leaves(&leaves, &found)?;
    let sw = w.swapped();
    let ps = p.swap_variables();
    let (cands, leaves) = chart_candidates(&ps, &sw)?;
    let mut found = Vec::new();
    for c in cands {
        let Some(inv) = c.inv() else { continue };
        let xi = CurveXi::Finite(inv);
        if is_exceptional(p, w, &xi) {
            found.push(c.to_c64());
            if !xis.contains(&xi) {
                xis.push(xi);
            }
        }
    }
    check_leaves(&leaves, &found)?;
    if is_exceptional(p, w, &CurveXi::Infinity) {
        xis.push(CurveXi::Infinity);
    }
    xis.sort_by(|a, b| xi_key(a).partial_cmp(&xi_key(b)).unwrap_or(std::cmp::Ordering::Equal));
    let curves: Vec<_> = xis.into_iter().map(|x| build_curve(x, w)).collect();
    for c in &curves {
        let want = if c.xi.is_axis() { 1 } else { w.lines_per_curve() as usize };
        if c.lines.len() != want {
            return Err(ExceptionalError::LineCount(xi_text(&c.xi), c.lines.len(), want));
        }
    }
    Ok(curves)
}

fn xi_key(x: &CurveXi) -> (u8, f64, f64) {
    match x {
        CurveXi::Finite(c) => {
            let z = c.to_c64();
            (0, z.re, z.im)
        }
        CurveXi::Infinity => (1, 0.0, 0.0),
    }
}

pub fn xi_text(x: &CurveXi) -> String {
    match x {
        CurveXi::Finite(c) => format!("{c}"),
        CurveXi::Infinity => "infinity".into(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ClassVerdict {
    HExtendible,
    AlmostHExtendible,
    NotApplicable,
}

impl std::fmt::Display for ClassVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ClassVerdict::HExtendible => "H_EXTENDIBLE",
            ClassVerdict::AlmostHExtendible => "ALMOST_H_EXTENDIBLE",
            ClassVerdict::NotApplicable => "NOT_APPLICABLE",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WedgeAperture {
    pub inner: f64,
    pub outer: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    pub verdict: ClassVerdict,
    pub separating_wedge: Option<Vec<WedgeAperture>>,
    pub failure_witness: Option<[f64; 4]>,
    pub degenerate_samples: usize,
    pub samples: usize,
}

#[derive(Clone, Copy, Debug)]
pub struct SeparationOptions {
    pub samples: usize,
    pub seed: u64,
    /// Threshold on `det / trace^2` of the Levi matrix.
    pub tol: f64,
    /// Admissible sine distance of a degenerate point from the nearest pullback line.
    pub epsilon: f64,
}

impl Default for SeparationOptions {
    fn default() -> Self {
        SeparationOptions { samples: 20_000, seed: 7, tol: 1e-9, epsilon: 0.25 }
    }
}

/// Principal preimage of `z` under `(t1, t2) -> (t1^sigma1, t2^sigma2)`.
pub fn principal_root(w: &WeightSignature, z: [C64; 2]) -> [C64; 2] {
    let r = |x: C64, s: u32| {
        if s == 1 || x == C64::new(0.0, 0.0) {
            x
        } else {
            x.powf(1.0 / s as f64)
        }
    };
    [r(z[0], w.sigma1), r(z[1], w.sigma2)]
}

pub fn separation_check(
    p: &MixedPolynomial,
    w: &WeightSignature,
    curves: &[ExceptionalCurve],
    opts: &SeparationOptions,
) -> Classification {
    if curves.is_empty() {
        return Classification {
            verdict: ClassVerdict::HExtendible,
            separating_wedge: None,
            failure_witness: None,
            degenerate_samples: 0,
            samples: 0,
        };
    }
    let h = compiled_hessian(p);
    let pts = sample(opts.samples, opts.seed, |rng| weighted_sphere_point(w, rng));
    let mut degenerate = 0usize;
    let mut witness = None;
    for z in pts {
        if degeneracy_ratio(&h, z) > opts.tol {
            continue;
        }
        degenerate += 1;
        let t = principal_root(w, z);
        let d = curves.iter().map(|c| c.sine_distance(t)).fold(f64::INFINITY, f64::min);
        if d > opts.epsilon && witness.is_none() {
            witness = Some(point_to_array(z));
        }
    }
    match witness {
        Some(wz) => Classification {
            verdict: ClassVerdict::NotApplicable,
            separating_wedge: None,
            failure_witness: Some(wz),
            degenerate_samples: degenerate,
            samples: opts.samples,
        },
        None => Classification {
            verdict: ClassVerdict::AlmostHExtendible,
            separating_wedge: Some(
                curves.iter().map(|_| WedgeAperture { inner: opts.epsilon, outer: 2.0 * opts.epsilon }).collect(),
            ),
            failure_witness: None,
            degenerate_samples: degenerate,
            samples: opts.samples,
        },
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurveInvariants {
    pub mu: u32,
    pub two_m: u32,
    /// Generic normal-line order of the remainder `Q`; `None` means constant.
    pub order_q: Option<u32>,
    pub order_pq: Option<u32>,
    pub order_ok: bool,
    pub warnings: Vec<String>,
}

/// Base point, tangent and normal of the curve at parameter `s`.
fn curve_point(curve: &ExceptionalCurve, w: &WeightSignature, s: C64) -> ([C64; 2], [C64; 2]) {
    let zero = C64::new(0.0, 0.0);
    let one = C64::new(1.0, 0.0);
    let (x, tan) = match &curve.xi {
        CurveXi::Infinity => ([s, zero], [one, zero]),
        CurveXi::Finite(c) if c.is_zero() => ([zero, s], [zero, one]),
        CurveXi::Finite(_) => {
            let a = curve.omega0.to_c64().powu(w.sigma1);
            let (s1, s2) = (w.sigma1, w.sigma2);
            ([a * s.powu(s1), s.powu(s2)], [a * s1 as f64 * s.powu(s1 - 1), s2 as f64 * s.powu(s2 - 1)])
        }
    };
    let n = [tan[1].conj(), -tan[0].conj()];
    let nn = (n[0].norm_sqr() + n[1].norm_sqr()).sqrt();
    (x, [n[0] / nn, n[1] / nn])
}

fn normal_order(p: &MixedPolynomial, x: [C64; 2], n: [C64; 2]) -> Option<u32> {
    if p.is_zero() {
        return None;
    }
    let mut coeffs = restrict_affine_f64(p, x, n);
    coeffs.remove(&(0, 0));
    float_order(&coeffs, 1e-9)
}

fn majority(values: &[Option<u32>]) -> (Option<u32>, bool) {
    let mut counts: BTreeMap<Option<u32>, usize> = BTreeMap::new();
    for v in values {
        *counts.entry(*v).or_default() += 1;
    }
    let unanimous = counts.len() == 1;
    let best = counts.iter().max_by_key(|(k, c)| (**c, std::cmp::Reverse(**k))).map(|(k, _)| *k).unwrap_or(None);
    (best, unanimous)
}

/// Lowest pullback degree whose component restricts non-harmonically to the curve.
pub fn two_m(rho: &MixedPolynomial, w: &WeightSignature, xi: &CurveXi) -> Option<u32> {
    for comp in weighted_decompose(rho, w) {
        if comp.eta < Rat::one() {
            continue;
        }
        if !restrict_to_curve(&comp.part, w, xi).is_harmonic() {
            let n = &comp.eta * rat_int(w.nu as i64);
            return Some(n.to_integer().try_into().unwrap_or(u32::MAX));
        }
    }
    None
}

pub const BASE_POINTS: usize = 17;

/// Generic normal order `mu`, the pullback degree `2M` and the order condition.
pub fn curve_invariants(
    p: &MixedPolynomial,
    q: &MixedPolynomial,
    w: &WeightSignature,
    curve: &ExceptionalCurve,
    seed: u64,
) -> Result<CurveInvariants, ExceptionalError> {
    let full = p.add(q);
    let two_m = two_m(&full, w, &curve.xi).ok_or_else(|| ExceptionalError::InfiniteType(full.total_degree() * w.nu))?;
    let mut warnings = Vec::new();
    let mut count = BASE_POINTS;
    let (mu, oq, opq) = loop {
        let params = sample(count, seed, |rng| {
            use rand::Rng;
            let r = 0.5 + rng.gen::<f64>();
            crate::sampling::phase(rng) * r
        });
        let mut mus = Vec::new();
        let mut oqs = Vec::new();
        let mut opqs = Vec::new();
        for s in params {
            let (x, n) = curve_point(curve, w, s);
            mus.push(normal_order(p, x, n));
            oqs.push(normal_order(q, x, n));
            opqs.push(normal_order(&full, x, n));
        }
        let (mu, unanimous) = majority(&mus);
        if unanimous || count > BASE_POINTS {
            if !unanimous {
                warnings.push(format!("normal orders disagree across {count} base points; majority taken"));
            }
            break (mu, majority(&oqs).0, majority(&opqs).0);
        }
        count = 3 * BASE_POINTS;
    };
    let mu = mu.unwrap_or(0);
    let order_ok = oq.map_or(true, |o| mu <= o);
    Ok(CurveInvariants { mu, two_m, order_q: oq, order_pq: opq, order_ok, warnings })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyalg::{rat, rat_int};

    fn almost_p() -> MixedPolynomial {
        MixedPolynomial::modulus_term(3, 1, rat_int(1))
            .add(&MixedPolynomial::modulus_term(4, 0, rat_int(1)))
            .add(&MixedPolynomial::modulus_term(1, 0, rat(15, 7)).mul(&MixedPolynomial::z1().pow(6).re()))
    }

    #[test]
    fn deck_elements_cover_lines() {
        let w = WeightSignature::new(4, 6).unwrap();
        let mut seen: Vec<u32> = (0..6)
            .map(|k| {
                let (l, m) = deck_element(&w, k);
                (w.sigma2 * l + 6 * 3 - w.sigma1 * m) % 6
            })
            .collect();
        seen.sort();
        assert_eq!(seen, vec![0, 1, 2, 3, 4, 5]);
    }

    #[test]
    fn example_curve_is_the_axis() {
        let w = WeightSignature::new(8, 8).unwrap();
        let curves = find_exceptional(&almost_p(), &w).unwrap();
        assert_eq!(curves.len(), 1);
        assert_eq!(curves[0].xi, CurveXi::Finite(CRat::zero()));
        let q = MixedPolynomial::modulus_term(0, 5, rat_int(1));
        let inv = curve_invariants(&almost_p(), &q, &w, &curves[0], 1).unwrap();
        assert_eq!((inv.mu, inv.two_m), (6, 10));
        assert!(inv.order_ok);
        assert_eq!(inv.order_q, None);
    }

    #[test]
    fn both_axes() {
        let w = WeightSignature::new(8, 8).unwrap();
        let p = MixedPolynomial::modulus_term(2, 2, rat_int(1));
        let xs: Vec<_> = find_exceptional(&p, &w).unwrap().into_iter().map(|c| c.xi).collect();
        assert_eq!(xs, vec![CurveXi::Finite(CRat::zero()), CurveXi::Infinity]);
    }

    #[test]
    fn weighted_axis_curve() {
        let w = WeightSignature::new(4, 8).unwrap();
        let p = MixedPolynomial::modulus_term(0, 4, rat_int(1)).add(&MixedPolynomial::modulus_term(1, 2, rat_int(1)));
        let curves = find_exceptional(&p, &w).unwrap();
        assert_eq!(curves.len(), 1);
        assert_eq!(curves[0].xi, CurveXi::Infinity);
        let q = MixedPolynomial::modulus_term(3, 0, rat_int(1));
        let inv = curve_invariants(&p, &q, &w, &curves[0], 1).unwrap();
        assert_eq!(inv.two_m, 12);
        assert_eq!(inv.mu, 4);
        let err = curve_invariants(&p, &MixedPolynomial::zero(), &w, &curves[0], 1);
        assert!(matches!(err, Err(ExceptionalError::InfiniteType(_))));
    }

    #[test]
    fn irrational_curves_are_reported() {
        let w = WeightSignature::new(4, 4).unwrap();
        let inner = MixedPolynomial::z1().pow(2).sub(&MixedPolynomial::z2().pow(2).scale(&CRat::from_int(2)));
        let p = inner.mul(&inner.conj());
        assert!(matches!(find_exceptional(&p, &w), Err(ExceptionalError::Unrepresentable(_))));
        let inner = MixedPolynomial::z1().pow(2).sub(&MixedPolynomial::z2().pow(2).scale(&CRat::from_int(4)));
        let p = inner.mul(&inner.conj());
        assert_eq!(find_exceptional(&p, &w).unwrap().len(), 2);
    }

    #[test]
    fn cusp_is_not_applicable() {
        let w = WeightSignature::new(4, 6).unwrap();
        let inner = MixedPolynomial::z1().pow(2).sub(&MixedPolynomial::z2().pow(3));
        let p = inner.mul(&inner.conj());
        let curves = find_exceptional(&p, &w).unwrap();
        assert_eq!(curves.len(), 1);
        assert_eq!(curves[0].xi, CurveXi::Finite(CRat::one()));
        assert_eq!(curves[0].lines.len(), 6);
        let c = separation_check(&p, &w, &curves, &SeparationOptions { samples: 2000, ..Default::default() });
        assert_eq!(c.verdict, ClassVerdict::NotApplicable);
        assert!(c.failure_witness.is_some());
    }

    #[test]
    fn example_is_almost_h_extendible() {
        let w = WeightSignature::new(8, 8).unwrap();
        let curves = find_exceptional(&almost_p(), &w).unwrap();
        let c = separation_check(&almost_p(), &w, &curves, &SeparationOptions::default());
        assert_eq!(c.verdict, ClassVerdict::AlmostHExtendible);
    }

    #[test]
    fn rejects_mixed_weights() {
        let w = WeightSignature::new(8, 8).unwrap();
        let p = almost_p().add(&MixedPolynomial::modulus_term(0, 5, rat_int(1)));
        assert_eq!(find_exceptional(&p, &w), Err(ExceptionalError::NotWeightedHomogeneous));
    }
}
