//! Complex Hessians and sampled plurisubharmonicity checks.

use num_complex::Complex64 as C64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::frame::LineFrame;
use crate::jet::{levi_eigs, Jet};
use crate::polyalg::compiled::{CompiledPoly, PolyJet};
use crate::polyalg::{Kind, MixedPolynomial, Var};
use crate::sampling::{self, log_uniform, par_min, phase, unit_sphere};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LeviError {
    #[error("sampling region is empty")]
    RegionEmpty,
    #[error("input is not homogeneous")]
    NotHomogeneous,
}

/// Mixed second Wirtinger derivatives `h_jk = d^2 p / dz_j dconj(z_k)`.
#[derive(Clone, Debug, PartialEq)]
pub struct HessianField {
    pub h11: MixedPolynomial,
    pub h12: MixedPolynomial,
    pub h22: MixedPolynomial,
}

pub fn hessian(p: &MixedPolynomial) -> HessianField {
    let d1 = p.wirtinger(Var::Z1, Kind::Holo);
    let d2 = p.wirtinger(Var::Z2, Kind::Holo);
    HessianField {
        h11: d1.wirtinger(Var::Z1, Kind::Anti),
        h12: d1.wirtinger(Var::Z2, Kind::Anti),
        h22: d2.wirtinger(Var::Z2, Kind::Anti),
    }
}

impl HessianField {
    pub fn h21(&self) -> MixedPolynomial {
        self.h12.conj()
    }

    pub fn at(&self, z: [C64; 2]) -> [[C64; 2]; 2] {
        let h12 = self.h12.eval(z);
        [[self.h11.eval(z), h12], [h12.conj(), self.h22.eval(z)]]
    }

    /// `sum_jk h_jk v_j conj(v_k)` with its imaginary part.
    pub fn levi(&self, z: [C64; 2], v: [C64; 2]) -> C64 {
        let m = self.at(z);
        let mut s = C64::new(0.0, 0.0);
        for j in 0..2 {
            for k in 0..2 {
                s += m[j][k] * v[j] * v[k].conj();
            }
        }
        s
    }

    pub fn determinant(&self) -> MixedPolynomial {
        self.h11.mul(&self.h22).sub(&self.h12.mul(&self.h12.conj()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

/// Sampling region in `C^2`. Cones and shells are sampled on the unit sphere.
#[derive(Clone, Copy, Debug)]
pub enum Region {
    Ball {
        radius: f64,
    },
    Sphere,
    /// `0 < |s1| < aperture |s2|`.
    Cone {
        frame: LineFrame,
        aperture: f64,
    },
    /// `inner |s2| < |s1| < outer |s2|`.
    Shell {
        frame: LineFrame,
        inner: f64,
        outer: f64,
    },
}

impl Region {
    fn validate(&self) -> Result<bool, LeviError> {
        match *self {
            Region::Ball { radius } if !(radius > 0.0) => Err(LeviError::RegionEmpty),
            Region::Cone { aperture, .. } if !(aperture > 0.0) => Err(LeviError::RegionEmpty),
            Region::Shell { inner, outer, .. } if !(outer > inner) || inner < 0.0 => Err(LeviError::RegionEmpty),
            Region::Shell { inner, outer, .. } => Ok(outer - inner > 1e-12 * outer),
            _ => Ok(true),
        }
    }

    pub fn sample(&self, rng: &mut ChaCha8Rng) -> [C64; 2] {
        match *self {
            Region::Ball { radius } => {
                let u = unit_sphere(rng);
                sampling::scale(u, log_uniform(rng, radius * 1e-6, radius))
            }
            Region::Sphere => unit_sphere(rng),
            Region::Cone { frame, aperture } => {
                let ratio = if rng.gen_bool(0.5) {
                    log_uniform(rng, aperture * 1e-6, aperture)
                } else {
                    aperture * rng.gen::<f64>().max(1e-12)
                };
                wedge_point(&frame, ratio, rng)
            }
            Region::Shell { frame, inner, outer } => {
                let ratio = inner + (outer - inner) * rng.gen::<f64>();
                wedge_point(&frame, ratio.max(1e-300), rng)
            }
        }
    }
}

/// Unit vector with `|s1| = ratio |s2|` and random phases.
pub fn wedge_point(frame: &LineFrame, ratio: f64, rng: &mut ChaCha8Rng) -> [C64; 2] {
    let s2 = phase(rng);
    let s1 = phase(rng) * ratio;
    let t = frame.from_frame([s1, s2]);
    let n = sampling::norm(t);
    sampling::scale(t, 1.0 / n)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PshReport {
    pub verdict: Verdict,
    pub min_scaled_eigenvalue: f64,
    pub witness: Option<[f64; 4]>,
    pub samples: usize,
    pub seed: u64,
    pub tol: f64,
}

pub fn point_to_array(z: [C64; 2]) -> [f64; 4] {
    [z[0].re, z[0].im, z[1].re, z[1].im]
}

pub fn array_to_point(a: [f64; 4]) -> [C64; 2] {
    [C64::new(a[0], a[1]), C64::new(a[2], a[3])]
}

/// Scale `||z||^{2(k-1)}` for homogeneous degree-`2k` input, else 1.
pub fn levi_scale(p: &MixedPolynomial) -> impl Fn([C64; 2]) -> f64 + Sync {
    let d = p.total_degree();
    let homogeneous = d >= 2 && p.is_homogeneous_of(d);
    move |z| {
        if homogeneous {
            sampling::norm(z).powi(d as i32 - 2)
        } else {
            1.0
        }
    }
}

/// Minimum over region samples of `lambda_min(jet(z)) / scale(z)`.
pub fn min_scaled_eigenvalue<J, S>(jet: J, scale: S, region: &Region, n: usize, seed: u64) -> Option<(f64, [C64; 2])>
where
    J: Fn([C64; 2]) -> Jet + Sync,
    S: Fn([C64; 2]) -> f64 + Sync,
{
    par_min(n, seed, |rng| {
        let z = region.sample(rng);
        let s = scale(z);
        let (lo, _) = levi_eigs(&jet(z).m);
        Some((lo / s, z))
    })
}

pub fn check_psh_fn<J, S>(
    jet: J,
    scale: S,
    region: &Region,
    n: usize,
    seed: u64,
    tol: f64,
) -> Result<PshReport, LeviError>
where
    J: Fn([C64; 2]) -> Jet + Sync,
    S: Fn([C64; 2]) -> f64 + Sync,
{
    let resolved = region.validate()?;
    let (m, z) = min_scaled_eigenvalue(jet, scale, region, n, seed).ok_or(LeviError::RegionEmpty)?;
    let verdict = if m.is_nan() || m < -tol {
        Verdict::Fail
    } else if !resolved {
        Verdict::Inconclusive
    } else {
        Verdict::Pass
    };
    Ok(PshReport {
        verdict,
        min_scaled_eigenvalue: m,
        witness: (verdict == Verdict::Fail).then(|| point_to_array(z)),
        samples: n,
        seed,
        tol,
    })
}

pub fn check_psh(p: &MixedPolynomial, region: &Region, n: usize, seed: u64, tol: f64) -> Result<PshReport, LeviError> {
    let pj = PolyJet::new(p);
    check_psh_fn(|z| pj.jet(z), levi_scale(p), region, n, seed, tol)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LowerBound {
    pub bound: f64,
    pub raw_minimum: f64,
    pub argmin: [f64; 4],
}

/// Fitted `B = max(0, min lambda_min / ||z||^{2(k-1)})` for homogeneous degree-`2k` input.
pub fn strict_psh_lower_bound(
    p: &MixedPolynomial,
    region: &Region,
    n: usize,
    seed: u64,
) -> Result<LowerBound, LeviError> {
    let d = p.total_degree();
    if d < 2 || d % 2 != 0 || !p.is_homogeneous_of(d) {
        return Err(LeviError::NotHomogeneous);
    }
    region.validate()?;
    let pj = PolyJet::new(p);
    let (m, z) = min_scaled_eigenvalue(|z| pj.jet(z), levi_scale(p), region, n, seed).ok_or(LeviError::RegionEmpty)?;
    Ok(LowerBound { bound: m.max(0.0), raw_minimum: m, argmin: point_to_array(z) })
}

/// `det / trace^2` of the Levi matrix; small values mark Levi-degenerate points.
pub fn degeneracy_ratio(h: &[CompiledPoly; 3], z: [C64; 2]) -> f64 {
    let a = h[0].eval(z).re;
    let b = h[1].eval(z);
    let d = h[2].eval(z).re;
    let tr = a + d;
    if tr <= 0.0 {
        return 0.0;
    }
    let (lo, hi) = levi_eigs(&[[C64::new(a, 0.0), b], [b.conj(), C64::new(d, 0.0)]]);
    (lo * hi) / (tr * tr)
}

pub fn compiled_hessian(p: &MixedPolynomial) -> [CompiledPoly; 3] {
    let h = hessian(p);
    [CompiledPoly::new(&h.h11), CompiledPoly::new(&h.h12), CompiledPoly::new(&h.h22)]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyalg::rat_int;

    #[test]
    fn hessian_of_moduli() {
        let p = MixedPolynomial::modulus_term(4, 0, rat_int(1)).add(&MixedPolynomial::modulus_term(2, 1, rat_int(1)));
        let h = hessian(&p);
        let want11 =
            MixedPolynomial::modulus_term(3, 0, rat_int(16)).add(&MixedPolynomial::modulus_term(1, 1, rat_int(4)));
        assert_eq!(h.h11, want11);
        assert_eq!(h.h22, MixedPolynomial::modulus_term(2, 0, rat_int(1)));
        assert_eq!(h.h12, MixedPolynomial::monomial([1, 2, 1, 0], crate::polyalg::CRat::from_int(2)));
        assert_eq!(h.determinant(), MixedPolynomial::modulus_term(5, 0, rat_int(16)));
    }

    #[test]
    fn unit_ball_checks() {
        let p = MixedPolynomial::modulus_term(1, 0, rat_int(1)).add(&MixedPolynomial::modulus_term(0, 1, rat_int(1)));
        let r = check_psh(&p, &Region::Ball { radius: 1.0 }, 500, 1, 1e-12).unwrap();
        assert_eq!(r.verdict, Verdict::Pass);
        assert!((r.min_scaled_eigenvalue - 1.0).abs() < 1e-12);
        let r = check_psh(&p.neg(), &Region::Ball { radius: 1.0 }, 500, 1, 1e-12).unwrap();
        assert_eq!(r.verdict, Verdict::Fail);
        assert!(r.witness.is_some());
        assert!(matches!(check_psh(&p, &Region::Ball { radius: 0.0 }, 10, 1, 1e-12), Err(LeviError::RegionEmpty)));
    }

    #[test]
    fn lower_bounds_on_cones() {
        let one = rat_int(1);
        let q = MixedPolynomial::modulus_term(2, 0, one.clone())
            .add(&MixedPolynomial::modulus_term(1, 1, rat_int(2)))
            .add(&MixedPolynomial::modulus_term(0, 2, one.clone()));
        assert!(strict_psh_lower_bound(&q, &Region::Sphere, 2000, 2).unwrap().bound > 0.0);
        let z14 = MixedPolynomial::modulus_term(2, 0, one);
        assert_eq!(strict_psh_lower_bound(&z14, &Region::Sphere, 2000, 2).unwrap().bound, 0.0);
    }
}
