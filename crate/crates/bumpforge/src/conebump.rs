//! Cone bumps near a line along which a homogeneous polynomial is harmonic.
//!
//! Everything is expressed in the frame `s = (s1, s2)` of the line, where the line is
//! `{s1 = 0}`. The bump is `H(s) = F(s1^a s2^b)` for a radial profile `F`.

use num_complex::Complex64 as C64;
use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::frame::LineFrame;
use crate::fsbump::{circle_profile, construct_radial_bump, FsError, Profile, RadialBump, RadialProfile, DELTAS};
use crate::jet::Jet;
use crate::levi::{check_psh, min_scaled_eigenvalue, Region, Verdict};
use crate::polyalg::compiled::PolyJet;
use crate::polyalg::{CRat, LinePoly, MixedPolynomial};
use crate::sampling::{self, par_min};

pub const SHELL_TS: [f64; 3] = [0.5, 0.25, 0.125];
const SHELL_SAMPLES: usize = 3000;
const MIN_SIGMA: f64 = 1.0 / 1024.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConeError {
    #[error("polynomial vanishes identically")]
    EmptyBlock,
    #[error("polynomial is not harmonic along the line")]
    NotHarmonicAlongLine,
    #[error("lowest block is not plurisubharmonic (min scaled eigenvalue {0})")]
    BlockNotPsh(f64),
    #[error("lowest block is not of the form U(s1^a s2^b)")]
    NotFactorable,
    #[error("polynomial is not strictly plurisubharmonic on any punctured cone around the line")]
    NotStrictlyPsh,
    #[error("shell positivity failed down to aperture {sigma} (best margin {margin})")]
    ShellVerificationFailed { sigma: f64, margin: f64 },
    #[error(transparent)]
    Fs(#[from] FsError),
}

/// Exact line data for the frame substitution.
#[derive(Clone, Debug, PartialEq)]
pub enum ConeLine {
    Slope(CRat),
    Axis2,
}

impl ConeLine {
    pub fn frame(&self) -> LineFrame {
        match self {
            ConeLine::Slope(w) => LineFrame::Slope(w.to_c64()),
            ConeLine::Axis2 => LineFrame::Axis2,
        }
    }

    /// `p` written in frame coordinates.
    pub fn in_frame(&self, p: &MixedPolynomial) -> MixedPolynomial {
        match self {
            ConeLine::Slope(w) => p.linear_substitute(&[[CRat::one(), w.clone()], [CRat::zero(), CRat::one()]]),
            ConeLine::Axis2 => p.swap_variables(),
        }
    }
}

/// Smallest `s1`-degree `mu` among non-pluriharmonic terms and the block of that degree.
pub fn lowest_block(p: &MixedPolynomial) -> Result<(u32, MixedPolynomial), ConeError> {
    let body = p.filter(|e| !MixedPolynomial::is_pluriharmonic_term(e));
    if body.is_zero() {
        return Err(ConeError::EmptyBlock);
    }
    let mu = body.terms().map(|(e, _)| e[0] + e[1]).min().unwrap();
    if mu == 0 {
        return Err(ConeError::NotHarmonicAlongLine);
    }
    Ok((mu, body.filter(|e| e[0] + e[1] == mu)))
}

/// `Q(s) = U(s1^a s2^b)` with `U` homogeneous of degree `2m`.
#[derive(Clone, Debug, PartialEq)]
pub struct BidegreeFactorization {
    pub u: LinePoly,
    pub a: u32,
    pub b: u32,
    pub two_m: u32,
}

pub fn factor_bidegree(q: &MixedPolynomial) -> Result<BidegreeFactorization, ConeError> {
    let mut it = q.terms();
    let (e0, _) = it.next().ok_or(ConeError::EmptyBlock)?;
    let (d1, d2) = (e0[0] + e0[1], e0[2] + e0[3]);
    if d1 % 2 != 0 || d2 % 2 != 0 || d1 == 0 || d2 == 0 {
        return Err(ConeError::NotFactorable);
    }
    let (p, qq) = (d1 / 2, d2 / 2);
    let g = p.gcd(&qq);
    let (a, b) = (p / g, qq / g);
    let mut u = LinePoly::default();
    for (e, c) in q.terms() {
        if e[0] % a != 0 || e[1] % a != 0 {
            return Err(ConeError::NotFactorable);
        }
        let (i, j) = (e[0] / a, e[1] / a);
        if e[2] != b * i || e[3] != b * j || i + j != 2 * g {
            return Err(ConeError::NotFactorable);
        }
        u.add_term((i, j), c.clone());
    }
    Ok(BidegreeFactorization { u, a, b, two_m: 2 * g })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ConeMode {
    HGood,
    HBad,
}

#[derive(Clone, Debug)]
pub struct ConeBump {
    pub frame: LineFrame,
    pub mu: u32,
    pub two_k: u32,
    pub factor: BidegreeFactorization,
    pub mode: ConeMode,
    pub profile: RadialProfile,
    /// Present for `HBad`.
    pub radial: Option<RadialBump>,
    pub sigma: f64,
    pub c: f64,
    /// `(t, B(t))` with `B(t)` the smallest value over the tested deltas.
    pub shell_constants: Vec<(f64, f64)>,
}

/// Jet of `F(s1^a s2^b)` in `t` coordinates.
pub fn cone_jet(frame: &LineFrame, a: u32, b: u32, f: &RadialProfile, t: [C64; 2]) -> Jet {
    let s = frame.to_frame(t);
    let pw = |x: C64, n: u32| {
        if n == 0 {
            C64::new(1.0, 0.0)
        } else {
            x.powu(n)
        }
    };
    let x = pw(s[0], a) * pw(s[1], b);
    let dxs = [
        C64::new(a as f64, 0.0) * pw(s[0], a - 1) * pw(s[1], b),
        C64::new(b as f64, 0.0) * pw(s[0], a) * pw(s[1], b - 1),
    ];
    let m = frame.forms();
    let dx = [dxs[0] * m[0][0] + dxs[1] * m[1][0], dxs[0] * m[0][1] + dxs[1] * m[1][1]];
    let (v, fx, fxx) = f.wirtinger(x);
    Jet::compose_holo(v, fx, fxx, dx)
}

pub fn cone_value(frame: &LineFrame, a: u32, b: u32, f: &RadialProfile, t: [C64; 2]) -> f64 {
    let s = frame.to_frame(t);
    f.value(s[0].powu(a) * s[1].powu(b))
}

impl ConeBump {
    pub fn jet(&self, t: [C64; 2]) -> Jet {
        cone_jet(&self.frame, self.factor.a, self.factor.b, &self.profile, t)
    }

    pub fn value(&self, t: [C64; 2]) -> f64 {
        cone_value(&self.frame, self.factor.a, self.factor.b, &self.profile, t)
    }

    /// `|s1|^mu |s2|^{2k - mu}`.
    pub fn decay_weight(&self, t: [C64; 2]) -> f64 {
        let s = self.frame.to_frame(t);
        s[0].norm().powi(self.mu as i32) * s[1].norm().powi((self.two_k - self.mu) as i32)
    }
}

/// Smallest scaled Levi eigenvalue of `Pi - delta H` on a cone shell, per delta.
pub fn shell_minima(
    pi: &PolyJet,
    two_k: u32,
    h: &(dyn Fn([C64; 2]) -> Jet + Sync),
    frame: &LineFrame,
    sigma: f64,
    t: f64,
    deltas: &[f64],
    n: usize,
    seed: u64,
) -> Vec<f64> {
    let region = Region::Shell { frame: *frame, inner: t * sigma, outer: sigma };
    let scale = |z: [C64; 2]| sampling::norm(z).powi(two_k as i32 - 2);
    deltas
        .iter()
        .map(|d| {
            min_scaled_eigenvalue(|z| pi.jet(z).sub(&h(z).scale(*d)), scale, &region, n, seed)
                .map(|(m, _)| m)
                .unwrap_or(f64::NEG_INFINITY)
        })
        .collect()
}

fn fit_decay(bump: &ConeBump, n: usize, seed: u64) -> f64 {
    let region = Region::Cone { frame: bump.frame, aperture: bump.sigma };
    par_min(n, seed, |rng| {
        let t = region.sample(rng);
        let d = bump.decay_weight(t);
        (d > 0.0).then(|| (bump.value(t) / d, ()))
    })
    .map(|(m, _)| m)
    .unwrap_or(0.0)
}

/// Build the cone bump for `pi` (homogeneous of degree `2k` in `t`) near `line`.
///
/// `exact` is false when the line slope is a rational approximation; tiny spurious
/// coefficients are then chopped before extracting the lowest block.
pub fn build_cone_bump(
    pi: &MixedPolynomial,
    line: &ConeLine,
    exact: bool,
    grid_multiple: usize,
    seed: u64,
) -> Result<ConeBump, ConeError> {
    let two_k = pi.total_degree();
    let mut pf = line.in_frame(pi);
    if !exact {
        pf = pf.chop(1e-9);
    }
    let (mu, q) = lowest_block(&pf)?;
    let psh =
        check_psh(&q, &Region::Sphere, 2000, seed, 1e-9 * q.max_abs_coeff()).map_err(|_| ConeError::EmptyBlock)?;
    if psh.verdict == Verdict::Fail {
        return Err(ConeError::BlockNotPsh(psh.min_scaled_eigenvalue));
    }
    let factor = factor_bidegree(&q)?;
    debug_assert_eq!(factor.two_m * factor.a, mu);
    debug_assert_eq!(factor.two_m * (factor.a + factor.b), two_k);
    let circle = circle_profile(&factor.u, factor.two_m)?;
    let (mode, profile, radial) = if circle.zeros.is_empty() {
        let m = factor.two_m as f64 / 2.0;
        let kappa = circle.gamma / 4.0 / (2.0 * m * m);
        (ConeMode::HGood, RadialProfile { degree: factor.two_m, h: Profile::Constant(kappa) }, None)
    } else {
        let rb = construct_radial_bump(&circle, grid_multiple)?;
        (ConeMode::HBad, rb.profile.clone(), Some(rb))
    };
    let frame = line.frame();
    let pj = PolyJet::new(pi);
    let (a, b) = (factor.a, factor.b);
    let hj = |t: [C64; 2]| cone_jet(&frame, a, b, &profile, t);
    let mut sigma = 0.5;
    let mut best = f64::NEG_INFINITY;
    let mut base_ok = false;
    while sigma >= MIN_SIGMA {
        let base = shell_minima(&pj, two_k, &hj, &frame, sigma, SHELL_TS[2], &[0.0], SHELL_SAMPLES, seed);
        base_ok |= base[0] > 0.0;
        let mut shell = Vec::new();
        let mut ok = base[0] > 0.0;
        if ok {
            for t in SHELL_TS {
                let m = shell_minima(&pj, two_k, &hj, &frame, sigma, t, &DELTAS, SHELL_SAMPLES, seed);
                let worst = m.iter().cloned().fold(f64::INFINITY, f64::min);
                best = best.max(worst);
                shell.push((t, worst));
                ok &= worst > 0.0;
            }
        }
        if ok {
            let mut bump =
                ConeBump { frame, mu, two_k, factor, mode, profile, radial, sigma, c: 0.0, shell_constants: shell };
            bump.c = 0.99 * fit_decay(&bump, 4000, seed);
            return Ok(bump);
        }
        sigma /= 2.0;
    }
    if !base_ok {
        return Err(ConeError::NotStrictlyPsh);
    }
    Err(ConeError::ShellVerificationFailed { sigma: MIN_SIGMA, margin: best })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConeReport {
    pub decay_margin: f64,
    /// `(t, delta, min scaled eigenvalue)`.
    pub shell: Vec<(f64, f64, f64)>,
    pub passed: bool,
}

/// Re-check decay and shell positivity on fresh samples.
pub fn verify_cone_bump(pi: &MixedPolynomial, bump: &ConeBump, deltas: &[f64], n: usize, seed: u64) -> ConeReport {
    let decay = fit_decay(bump, n, seed);
    let pj = PolyJet::new(pi);
    let hj = |t: [C64; 2]| bump.jet(t);
    let mut shell = Vec::new();
    let mut passed = decay - bump.c > 0.0;
    for t in SHELL_TS {
        let m = shell_minima(&pj, bump.two_k, &hj, &bump.frame, bump.sigma, t, deltas, n, seed);
        for (d, v) in deltas.iter().zip(m) {
            passed &= v > 0.0 || (*d == 0.0 && v >= 0.0);
            shell.push((t, *d, v));
        }
    }
    ConeReport { decay_margin: decay - bump.c, shell, passed }
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
    fn lowest_block_examples() {
        let (mu, q) = lowest_block(&almost_p()).unwrap();
        assert_eq!(mu, 6);
        assert_eq!(q, MixedPolynomial::modulus_term(3, 1, rat_int(1)));
        let p = MixedPolynomial::modulus_term(2, 2, rat_int(1));
        assert_eq!(lowest_block(&p).unwrap().0, 4);
        assert_eq!(lowest_block(&MixedPolynomial::zero()).unwrap_err(), ConeError::EmptyBlock);
        // |z2|^8 + |z2|^4 |z1|^2 near z2 = 0 after the swap
        let w = MixedPolynomial::modulus_term(0, 4, rat_int(1)).add(&MixedPolynomial::modulus_term(1, 2, rat_int(1)));
        let (mu, q) = lowest_block(&w.swap_variables()).unwrap();
        assert_eq!(mu, 4);
        assert_eq!(q, MixedPolynomial::modulus_term(2, 1, rat_int(1)));
    }

    #[test]
    fn factorization_examples() {
        let f = factor_bidegree(&MixedPolynomial::modulus_term(3, 1, rat_int(1))).unwrap();
        assert_eq!((f.a, f.b, f.two_m), (3, 1, 2));
        assert_eq!(f.u.terms.keys().cloned().collect::<Vec<_>>(), vec![(1, 1)]);
        let f = factor_bidegree(&MixedPolynomial::modulus_term(1, 1, rat_int(1))).unwrap();
        assert_eq!((f.a, f.b, f.two_m), (1, 1, 2));
        let bad = MixedPolynomial::monomial([2, 0, 0, 2], CRat::one()).re().mul(&MixedPolynomial::modulus_term(
            1,
            0,
            rat_int(1),
        ));
        assert_eq!(factor_bidegree(&bad).unwrap_err(), ConeError::NotFactorable);
    }

    #[test]
    fn example_cone_is_hgood_with_half() {
        let b = build_cone_bump(&almost_p(), &ConeLine::Slope(CRat::zero()), true, 1, 3).unwrap();
        assert_eq!(b.mode, ConeMode::HGood);
        match b.profile.h {
            Profile::Constant(k) => assert!((k - 0.5).abs() < 1e-14),
            _ => unreachable!(),
        }
        assert!((b.c - 0.495).abs() < 1e-9);
        let rep = verify_cone_bump(&almost_p(), &b, &[0.0, 1.0, 0.5, 0.125], 3000, 99);
        assert!(rep.passed, "{rep:?}");
        let mut t = b.clone();
        t.c *= 2.0;
        assert!(verify_cone_bump(&almost_p(), &t, &DELTAS, 2000, 5).decay_margin < 0.0);
    }

    #[test]
    fn cone_jet_matches_differences() {
        let b = build_cone_bump(&almost_p(), &ConeLine::Slope(CRat::zero()), true, 1, 3).unwrap();
        let t = [C64::new(0.03, 0.01), C64::new(0.8, -0.2)];
        let j = b.jet(t);
        let h = 1e-5;
        let f = |z: [C64; 2]| b.value(z);
        for a in 0..2 {
            let mut p = t;
            let mut m = t;
            let (mut pi, mut mi) = (t, t);
            p[a] += h;
            m[a] -= h;
            pi[a] += C64::new(0.0, h);
            mi[a] -= C64::new(0.0, h);
            let lap = (f(p) + f(m) + f(pi) + f(mi) - 4.0 * f(t)) / (h * h);
            assert!((j.m[a][a].re - lap / 4.0).abs() < 1e-6 * (1.0 + lap.abs()));
        }
    }

    #[test]
    fn rank_one_pullback_is_refused() {
        // |t1^6 - t2^6|^2 near t1 = t2
        let d = MixedPolynomial::z1().pow(6).sub(&MixedPolynomial::z2().pow(6));
        let p = d.mul(&d.conj());
        let err = build_cone_bump(&p, &ConeLine::Slope(CRat::one()), true, 1, 1).unwrap_err();
        assert!(matches!(err, ConeError::NotStrictlyPsh | ConeError::NotFactorable), "{err:?}");
    }
}
