use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use num_traits::{One, Zero};

use super::coeff::{rat, rat_int, CRat, Rat};

/// Exponent quadruple `(a1, b1, a2, b2)` for `z1^a1 conj(z1)^b1 z2^a2 conj(z2)^b2`.
pub type Exp = [u32; 4];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Var {
    Z1,
    Z2,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Holo,
    Anti,
}

/// Polynomial in `z1, conj(z1), z2, conj(z2)` with exact complex rational coefficients.
///
/// Terms are kept in exponent order and zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct MixedPolynomial {
    terms: BTreeMap<Exp, CRat>,
}

pub fn conj_exp(e: &Exp) -> Exp {
    [e[1], e[0], e[3], e[2]]
}

impl MixedPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: CRat) -> Self {
        let mut p = Self::zero();
        p.add_term([0, 0, 0, 0], c);
        p
    }

    pub fn monomial(e: Exp, c: CRat) -> Self {
        let mut p = Self::zero();
        p.add_term(e, c);
        p
    }

    pub fn z1() -> Self {
        Self::monomial([1, 0, 0, 0], CRat::one())
    }

    pub fn z2() -> Self {
        Self::monomial([0, 0, 1, 0], CRat::one())
    }

    /// `|z1|^(2p) |z2|^(2q)` with coefficient `c`.
    pub fn modulus_term(p: u32, q: u32, c: Rat) -> Self {
        Self::monomial([p, p, q, q], CRat::real(c))
    }

    pub fn from_terms<I: IntoIterator<Item = (Exp, CRat)>>(it: I) -> Self {
        let mut p = Self::zero();
        for (e, c) in it {
            p.add_term(e, c);
        }
        p
    }

    pub fn add_term(&mut self, e: Exp, c: CRat) {
        if c.is_zero() {
            return;
        }
        let remove = match self.terms.get_mut(&e) {
            Some(slot) => {
                *slot += &c;
                slot.is_zero()
            }
            None => {
                self.terms.insert(e, c);
                false
            }
        };
        if remove {
            self.terms.remove(&e);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exp, &CRat)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: &Exp) -> CRat {
        self.terms.get(e).cloned().unwrap_or_default()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    pub fn is_real_valued(&self) -> bool {
        self.terms.iter().all(|(e, c)| self.coeff(&conj_exp(e)) == c.conj())
    }

    /// True when every term has total degree `d`.
    pub fn is_homogeneous_of(&self, d: u32) -> bool {
        self.terms.keys().all(|e| e.iter().sum::<u32>() == d)
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (e, c) in &o.terms {
            r.add_term(*e, c.clone());
        }
        r
    }

    pub fn sub(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (e, c) in &o.terms {
            r.add_term(*e, -c.clone());
        }
        r
    }

    pub fn neg(&self) -> Self {
        Self { terms: self.terms.iter().map(|(e, c)| (*e, -c.clone())).collect() }
    }

    pub fn scale(&self, s: &CRat) -> Self {
        let mut r = Self::zero();
        for (e, c) in &self.terms {
            r.add_term(*e, c * s);
        }
        r
    }

    pub fn scale_rat(&self, s: &Rat) -> Self {
        self.scale(&CRat::real(s.clone()))
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut r = Self::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let e = [e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2], e1[3] + e2[3]];
                r.add_term(e, c1 * c2);
            }
        }
        r
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::constant(CRat::one());
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Complex conjugate: swaps holomorphic and antiholomorphic exponents.
    pub fn conj(&self) -> Self {
        Self { terms: self.terms.iter().map(|(e, c)| (conj_exp(e), c.conj())).collect() }
    }

    pub fn re(&self) -> Self {
        self.add(&self.conj()).scale_rat(&rat(1, 2))
    }

    pub fn im(&self) -> Self {
        // (p - conj p) / (2i) = -(i/2)(p - conj p)
        self.sub(&self.conj()).scale(&CRat::new(Rat::zero(), rat(-1, 2)))
    }

    /// Formal Wirtinger derivative.
    pub fn wirtinger(&self, v: Var, k: Kind) -> Self {
        let slot = match (v, k) {
            (Var::Z1, Kind::Holo) => 0,
            (Var::Z1, Kind::Anti) => 1,
            (Var::Z2, Kind::Holo) => 2,
            (Var::Z2, Kind::Anti) => 3,
        };
        let mut r = Self::zero();
        for (e, c) in &self.terms {
            if e[slot] == 0 {
                continue;
            }
            let mut ne = *e;
            ne[slot] -= 1;
            r.add_term(ne, c.scale(&rat_int(e[slot] as i64)));
        }
        r
    }

    /// Exchange the roles of `z1` and `z2`.
    pub fn swap_variables(&self) -> Self {
        Self { terms: self.terms.iter().map(|(e, c)| ([e[2], e[3], e[0], e[1]], c.clone())).collect() }
    }

    /// Substitute `z = A s` with `A` a 2x2 complex rational matrix.
    pub fn linear_substitute(&self, a: &[[CRat; 2]; 2]) -> Self {
        let z1 = Self::from_terms([([1, 0, 0, 0], a[0][0].clone()), ([0, 0, 1, 0], a[0][1].clone())]);
        let z2 = Self::from_terms([([1, 0, 0, 0], a[1][0].clone()), ([0, 0, 1, 0], a[1][1].clone())]);
        let z1b = z1.conj();
        let z2b = z2.conj();
        let mut cache: BTreeMap<(usize, u32), Self> = BTreeMap::new();
        let mut power = |idx: usize, k: u32| -> Self {
            cache.entry((idx, k)).or_insert_with(|| [&z1, &z1b, &z2, &z2b][idx].pow(k)).clone()
        };
        let mut r = Self::zero();
        for (e, c) in &self.terms {
            let t = power(0, e[0]).mul(&power(1, e[1])).mul(&power(2, e[2])).mul(&power(3, e[3]));
            r = r.add(&t.scale(c));
        }
        r
    }

    /// Split by total degree.
    pub fn homogeneous_parts(&self) -> BTreeMap<u32, Self> {
        let mut out: BTreeMap<u32, Self> = BTreeMap::new();
        for (e, c) in &self.terms {
            out.entry(e.iter().sum()).or_default().add_term(*e, c.clone());
        }
        out
    }

    pub fn filter<F: Fn(&Exp) -> bool>(&self, keep: F) -> Self {
        Self { terms: self.terms.iter().filter(|(e, _)| keep(e)).map(|(e, c)| (*e, c.clone())).collect() }
    }

    /// Drop terms whose coefficient magnitude is below `tol` times the largest one.
    pub fn chop(&self, tol: f64) -> Self {
        let mags: Vec<f64> = self.terms.values().map(|c| c.to_c64().norm()).collect();
        let top = mags.iter().cloned().fold(0.0, f64::max);
        Self {
            terms: self
                .terms
                .iter()
                .zip(mags)
                .filter(|(_, m)| *m > tol * top)
                .map(|((e, c), _)| (*e, c.clone()))
                .collect(),
        }
    }

    pub fn eval(&self, z: [Complex64; 2]) -> Complex64 {
        let zb = [z[0].conj(), z[1].conj()];
        let mut s = Complex64::new(0.0, 0.0);
        for (e, c) in &self.terms {
            s += c.to_c64() * z[0].powu(e[0]) * zb[0].powu(e[1]) * z[1].powu(e[2]) * zb[1].powu(e[3]);
        }
        s
    }

    pub fn eval_exact(&self, z: [&CRat; 2]) -> CRat {
        let zb = [z[0].conj(), z[1].conj()];
        let mut s = CRat::zero();
        for (e, c) in &self.terms {
            let t = &(&(&z[0].pow(e[0]) * &zb[0].pow(e[1])) * &z[1].pow(e[2])) * &zb[1].pow(e[3]);
            s += &(c * &t);
        }
        s
    }

    /// Terms with no antiholomorphic (or no holomorphic) factor.
    pub fn is_pluriharmonic_term(e: &Exp) -> bool {
        (e[1] == 0 && e[3] == 0) || (e[0] == 0 && e[2] == 0)
    }

    pub fn pluriharmonic_part(&self) -> Self {
        self.filter(|e| Self::is_pluriharmonic_term(e) && e.iter().sum::<u32>() > 0)
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.terms.values().map(|c| c.to_c64().norm()).fold(0.0, f64::max)
    }
}

impl fmt::Display for MixedPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::cli_io::parser::print_expression(self))
    }
}

pub fn one_half() -> Rat {
    rat(1, 2)
}

pub fn is_one(c: &CRat) -> bool {
    c.re.is_one() && c.im.is_zero()
}
