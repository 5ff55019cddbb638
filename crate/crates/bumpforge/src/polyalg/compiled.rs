//! Floating evaluation of mixed polynomials and their Levi jets.

use num_complex::Complex64 as C64;

use super::poly::{Kind, MixedPolynomial, Var};
use crate::jet::Jet;

#[derive(Clone, Debug, Default)]
pub struct CompiledPoly {
    terms: Vec<([u32; 4], C64)>,
    maxe: [u32; 4],
}

fn powers(x: C64, n: u32, out: &mut Vec<C64>) {
    out.clear();
    let mut acc = C64::new(1.0, 0.0);
    out.push(acc);
    for _ in 0..n {
        acc *= x;
        out.push(acc);
    }
}

impl CompiledPoly {
    pub fn new(p: &MixedPolynomial) -> Self {
        let mut maxe = [0u32; 4];
        let terms: Vec<_> = p
            .terms()
            .map(|(e, c)| {
                for i in 0..4 {
                    maxe[i] = maxe[i].max(e[i]);
                }
                (*e, c.to_c64())
            })
            .collect();
        CompiledPoly { terms, maxe }
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn eval(&self, z: [C64; 2]) -> C64 {
        if self.terms.is_empty() {
            return C64::new(0.0, 0.0);
        }
        let mut tabs: [Vec<C64>; 4] = Default::default();
        let vals = [z[0], z[0].conj(), z[1], z[1].conj()];
        for i in 0..4 {
            powers(vals[i], self.maxe[i], &mut tabs[i]);
        }
        let mut s = C64::new(0.0, 0.0);
        for (e, c) in &self.terms {
            s += c * tabs[0][e[0] as usize] * tabs[1][e[1] as usize] * tabs[2][e[2] as usize] * tabs[3][e[3] as usize];
        }
        s
    }

    /// Sum of absolute term magnitudes; a rounding scale for [`Self::eval`].
    pub fn abs_eval(&self, z: [C64; 2]) -> f64 {
        let r = [z[0].norm(), z[1].norm()];
        self.terms
            .iter()
            .map(|(e, c)| c.norm() * r[0].powi((e[0] + e[1]) as i32) * r[1].powi((e[2] + e[3]) as i32))
            .sum()
    }
}

/// Value, gradient and Levi matrix of a real-valued polynomial.
#[derive(Clone, Debug, Default)]
pub struct PolyJet {
    p: CompiledPoly,
    d1: CompiledPoly,
    d2: CompiledPoly,
    h11: CompiledPoly,
    h12: CompiledPoly,
    h22: CompiledPoly,
}

impl PolyJet {
    pub fn new(p: &MixedPolynomial) -> Self {
        let d1 = p.wirtinger(Var::Z1, Kind::Holo);
        let d2 = p.wirtinger(Var::Z2, Kind::Holo);
        PolyJet {
            p: CompiledPoly::new(p),
            h11: CompiledPoly::new(&d1.wirtinger(Var::Z1, Kind::Anti)),
            h12: CompiledPoly::new(&d1.wirtinger(Var::Z2, Kind::Anti)),
            h22: CompiledPoly::new(&d2.wirtinger(Var::Z2, Kind::Anti)),
            d1: CompiledPoly::new(&d1),
            d2: CompiledPoly::new(&d2),
        }
    }

    pub fn value(&self, z: [C64; 2]) -> f64 {
        self.p.eval(z).re
    }

    pub fn abs_value(&self, z: [C64; 2]) -> f64 {
        self.p.abs_eval(z)
    }

    pub fn jet(&self, z: [C64; 2]) -> Jet {
        let h12 = self.h12.eval(z);
        Jet {
            v: self.p.eval(z).re,
            g: [self.d1.eval(z), self.d2.eval(z)],
            m: [[C64::new(self.h11.eval(z).re, 0.0), h12], [h12.conj(), C64::new(self.h22.eval(z).re, 0.0)]],
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyalg::coeff::rat_int;

    #[test]
    fn compiled_matches_direct() {
        let p = MixedPolynomial::modulus_term(3, 1, rat_int(1)).add(&MixedPolynomial::z1().pow(6).re());
        let c = CompiledPoly::new(&p);
        let z = [C64::new(0.4, -0.3), C64::new(-1.2, 0.5)];
        assert!((c.eval(z) - p.eval(z)).norm() < 1e-12);
    }
}
