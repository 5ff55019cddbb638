//! Exact algebra for real-valued polynomials in `z1, conj(z1), z2, conj(z2)`.

pub mod coeff;
pub mod compiled;
pub mod line;
pub mod poly;

use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use coeff::{rat, rat_int, CRat, Rat};
pub use line::{restrict_to_curve, restrict_to_line, CurveXi, Line, LinePoly};
pub use poly::{Exp, Kind, MixedPolynomial, Var};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PolyError {
    #[error("weights must be positive integers, got ({0}, {1})")]
    BadWeights(u32, u32),
    #[error("no weight pair up to degree {0} makes the lowest component non-pluriharmonic")]
    NoCandidate(u32),
}

/// Multitype tail `(m1, m2)` with the derived pullback exponents.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WeightSignature {
    pub m1: u32,
    pub m2: u32,
    pub nu: u32,
    pub sigma1: u32,
    pub sigma2: u32,
}

impl WeightSignature {
    pub fn new(m1: u32, m2: u32) -> Result<Self, PolyError> {
        if m1 == 0 || m2 == 0 {
            return Err(PolyError::BadWeights(m1, m2));
        }
        let nu = m1.lcm(&m2);
        Ok(WeightSignature { m1, m2, nu, sigma1: nu / m1, sigma2: nu / m2 })
    }

    pub fn swapped(&self) -> Self {
        WeightSignature::new(self.m2, self.m1).expect("swapped weights stay valid")
    }

    /// `(a1 + b1)/m1 + (a2 + b2)/m2`.
    pub fn weighted_degree(&self, e: &Exp) -> Rat {
        rat((e[0] + e[1]) as i64, self.m1 as i64) + rat((e[2] + e[3]) as i64, self.m2 as i64)
    }

    /// Number of pullback lines over one curve with finite nonzero slope.
    pub fn lines_per_curve(&self) -> u32 {
        self.sigma1 * self.sigma2
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct WeightedComponent {
    pub eta: Rat,
    pub part: MixedPolynomial,
}

/// Split into weighted-homogeneous pieces, sorted by weighted degree.
pub fn weighted_decompose(p: &MixedPolynomial, w: &WeightSignature) -> Vec<WeightedComponent> {
    let mut out: std::collections::BTreeMap<Rat, MixedPolynomial> = Default::default();
    for (e, c) in p.terms() {
        out.entry(w.weighted_degree(e)).or_default().add_term(*e, c.clone());
    }
    out.into_iter().map(|(eta, part)| WeightedComponent { eta, part }).collect()
}

/// `p o Psi` with `Psi(t) = (t1^sigma1, t2^sigma2)`.
pub fn pullback(p: &MixedPolynomial, w: &WeightSignature) -> MixedPolynomial {
    let (s1, s2) = (w.sigma1, w.sigma2);
    MixedPolynomial::from_terms(p.terms().map(|(e, c)| ([e[0] * s1, e[1] * s1, e[2] * s2, e[3] * s2], c.clone())))
}

/// Remove pluriharmonic terms of degree `1..=max_degree`.
///
/// Returns `(q, rho)` with `q` holomorphic and `rho = p - Re(q)`.
pub fn pluriharmonic_strip(p: &MixedPolynomial, max_degree: u32) -> (MixedPolynomial, MixedPolynomial) {
    let mut q = MixedPolynomial::zero();
    for (e, c) in p.terms() {
        let d: u32 = e.iter().sum();
        if d == 0 || d > max_degree || e[1] != 0 || e[3] != 0 {
            continue;
        }
        q.add_term(*e, c.scale(&rat_int(2)));
    }
    let rho = p.sub(&q.re());
    (q, rho)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Confidence {
    NonAuthoritative,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct InferredWeights {
    pub weights: WeightSignature,
    pub confidence: Confidence,
}

/// Heuristic weights from the lower envelope of the support.
///
/// A pair qualifies when every term has weighted degree at least one, the weight-one
/// part contains a non-pluriharmonic term, and that part involves both variables.
/// Among qualifying pairs the one whose weight-one part has most terms wins, then the
/// lexicographically smallest.
pub fn infer_weights(p: &MixedPolynomial) -> Result<InferredWeights, PolyError> {
    let bound = p.total_degree().max(2);
    let mut best: Option<(usize, (u32, u32))> = None;
    for m1 in 1..=bound {
        for m2 in 1..=bound {
            let w = WeightSignature::new(m1, m2)?;
            let mut ok = true;
            let mut count = 0usize;
            let mut mixed = false;
            let (mut has1, mut has2) = (false, false);
            for (e, _) in p.terms() {
                if e.iter().sum::<u32>() == 0 {
                    continue;
                }
                let eta = w.weighted_degree(e);
                if eta < Rat::one() {
                    ok = false;
                    break;
                }
                if eta.is_one() {
                    count += 1;
                    mixed |= !MixedPolynomial::is_pluriharmonic_term(e);
                    has1 |= e[0] + e[1] > 0;
                    has2 |= e[2] + e[3] > 0;
                }
            }
            if !ok || !mixed || !(has1 && has2) {
                continue;
            }
            let better = match best {
                None => true,
                Some((c, _)) => count > c,
            };
            if better {
                best = Some((count, (m1, m2)));
            }
        }
    }
    match best {
        Some((_, (m1, m2))) => {
            Ok(InferredWeights { weights: WeightSignature::new(m1, m2)?, confidence: Confidence::NonAuthoritative })
        }
        None => Err(PolyError::NoCandidate(bound)),
    }
}

/// Component of weighted degree exactly `eta` (possibly zero).
pub fn component_of(p: &MixedPolynomial, w: &WeightSignature, eta: &Rat) -> MixedPolynomial {
    p.filter(|e| &w.weighted_degree(e) == eta)
}

pub fn is_zero_rat(r: &Rat) -> bool {
    r.is_zero()
}

/// One representative per conjugate pair `(e, conj_exp(e))`, with its coefficient and
/// whether the exponent is self-conjugate.
pub fn conj_pairs(p: &MixedPolynomial) -> Vec<(Exp, CRat, bool)> {
    p.terms().filter(|(e, _)| **e <= poly::conj_exp(e)).map(|(e, c)| (*e, c.clone(), *e == poly::conj_exp(e))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn almost() -> MixedPolynomial {
        let z1 = MixedPolynomial::z1();
        MixedPolynomial::modulus_term(3, 1, rat_int(1))
            .add(&MixedPolynomial::modulus_term(4, 0, rat_int(1)))
            .add(&MixedPolynomial::modulus_term(1, 0, rat(15, 7)).mul(&z1.pow(6).re()))
            .add(&MixedPolynomial::modulus_term(0, 5, rat_int(1)))
    }

    #[test]
    fn weights_bookkeeping() {
        let w = WeightSignature::new(4, 6).unwrap();
        assert_eq!((w.nu, w.sigma1, w.sigma2), (12, 3, 2));
        assert!(WeightSignature::new(0, 3).is_err());
    }

    #[test]
    fn decompose_example() {
        let w = WeightSignature::new(8, 8).unwrap();
        let comps = weighted_decompose(&almost(), &w);
        assert_eq!(comps.len(), 2);
        assert_eq!(comps[0].eta, rat_int(1));
        assert_eq!(comps[1].eta, rat(10, 8));
        assert_eq!(comps[1].part, MixedPolynomial::modulus_term(0, 5, rat_int(1)));
        let sum = comps[0].part.add(&comps[1].part);
        assert_eq!(sum, almost());
    }

    #[test]
    fn decompose_single_components() {
        let w = WeightSignature::new(4, 6).unwrap();
        let c = weighted_decompose(&MixedPolynomial::modulus_term(2, 0, rat_int(1)), &w);
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].eta, rat_int(1));
        let w = WeightSignature::new(4, 8).unwrap();
        let p = MixedPolynomial::modulus_term(0, 4, rat_int(1)).add(&MixedPolynomial::modulus_term(1, 2, rat_int(1)));
        let c = weighted_decompose(&p, &w);
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].eta, rat_int(1));
    }

    #[test]
    fn infer_examples() {
        let w = infer_weights(&almost()).unwrap();
        assert_eq!((w.weights.m1, w.weights.m2), (8, 8));
        assert_eq!(w.confidence, Confidence::NonAuthoritative);
        let p = MixedPolynomial::modulus_term(2, 0, rat_int(1)).add(&MixedPolynomial::modulus_term(0, 3, rat_int(1)));
        let w = infer_weights(&p).unwrap();
        assert_eq!((w.weights.m1, w.weights.m2), (4, 6));
        let re = MixedPolynomial::z1().pow(2).re();
        assert!(matches!(infer_weights(&re), Err(PolyError::NoCandidate(_))));
    }

    #[test]
    fn strip_examples() {
        let t1 = MixedPolynomial::z1();
        let t2 = MixedPolynomial::z2();
        let hol = t1.pow(3).mul(&t2.pow(3));
        let p = MixedPolynomial::modulus_term(2, 0, rat_int(1)).add(&hol.re());
        let (q, rho) = pluriharmonic_strip(&p, 6);
        assert_eq!(q, hol);
        assert_eq!(rho, MixedPolynomial::modulus_term(2, 0, rat_int(1)));

        let (q, rho) = pluriharmonic_strip(&almost(), 10);
        assert!(q.is_zero());
        assert_eq!(rho, almost());

        let p = MixedPolynomial::modulus_term(0, 5, rat_int(1)).add(&t2.pow(8).re());
        let (q, rho) = pluriharmonic_strip(&p, 8);
        assert_eq!(q, t2.pow(8));
        assert_eq!(rho, MixedPolynomial::modulus_term(0, 5, rat_int(1)));
    }

    #[test]
    fn pullback_examples() {
        let w = WeightSignature::new(4, 6).unwrap();
        let p = MixedPolynomial::modulus_term(1, 1, rat_int(1));
        let pb = pullback(&p, &w);
        assert_eq!(pb, MixedPolynomial::modulus_term(3, 2, rat_int(1)));
        assert_eq!(pb.total_degree(), 10);
        let w = WeightSignature::new(8, 8).unwrap();
        assert_eq!(pullback(&almost(), &w), almost());
        let w = WeightSignature::new(4, 8).unwrap();
        assert_eq!(
            pullback(&MixedPolynomial::modulus_term(3, 0, rat_int(1)), &w),
            MixedPolynomial::modulus_term(6, 0, rat_int(1))
        );
    }

    #[test]
    fn weight_one_restriction_along_axis_vanishes() {
        let w = WeightSignature::new(8, 8).unwrap();
        let p = weighted_decompose(&almost(), &w)[0].part.clone();
        let r = restrict_to_line(&p, &Line::Slope(CRat::zero()));
        assert!(r.is_zero());
        let r = restrict_to_curve(&p, &w, &CurveXi::Finite(CRat::zero()));
        assert!(r.is_zero());
    }
}
