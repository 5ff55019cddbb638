//! Angular bump profiles `F(x) = |x|^n h(arg x)` that lower a subharmonic
//! homogeneous polynomial of one variable without destroying subharmonicity.

pub mod spline;

use std::f64::consts::TAU;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::jet::D2;
use crate::polyalg::LinePoly;
use crate::smooth::cap;
pub use spline::PeriodicQuinticSpline;

pub const DELTAS: [f64; 3] = [1.0, 0.5, 0.125];
pub const CONSTRUCTION_GRID: usize = 4096;
pub const VERIFICATION_GRID: usize = 8192;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FsError {
    #[error("polynomial is not homogeneous of degree {0}")]
    NotHomogeneous(u32),
    #[error("polynomial is harmonic; nothing to bump")]
    Harmonic,
    #[error("laplacian is negative at theta = {theta} (value {value})")]
    NotSubharmonic { theta: f64, value: f64 },
    #[error("no cap parameters passed verification")]
    SearchFailed,
}

/// Laplacian of a homogeneous `u` on the unit circle, `L(theta) = sum a_k e^{i k theta}`.
#[derive(Clone, Debug)]
pub struct CircleProfile {
    pub degree: u32,
    pub u: LinePoly,
    pub modes: Vec<(i32, C64)>,
    pub zeros: Vec<f64>,
    pub gamma: f64,
    pub scale: f64,
}

impl CircleProfile {
    pub fn eval(&self, theta: f64) -> (f64, f64, f64) {
        let (mut v, mut d, mut dd) = (0.0, 0.0, 0.0);
        for (k, a) in &self.modes {
            let e = a * C64::from_polar(1.0, *k as f64 * theta);
            let k = *k as f64;
            v += e.re;
            d -= k * e.im;
            dd -= k * k * e.re;
        }
        (v, d, dd)
    }

    pub fn value(&self, theta: f64) -> f64 {
        self.eval(theta).0
    }
}

fn grid(n: usize) -> impl Iterator<Item = f64> {
    (0..n).map(move |j| TAU * j as f64 / n as f64)
}

/// Periodic distance on the circle.
pub fn circle_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d)
}

fn refine_zero(c: &CircleProfile, mut th: f64, h: f64) -> f64 {
    let start = th;
    for _ in 0..60 {
        let (_, d, dd) = c.eval(th);
        if dd <= 0.0 {
            break;
        }
        let step = d / dd;
        th -= step;
        if (th - start).abs() > 2.0 * h {
            th = start;
            break;
        }
        if step.abs() < 1e-15 {
            break;
        }
    }
    th.rem_euclid(TAU)
}

/// Exact trigonometric modes of `u` and the zeros of its Laplacian on the circle.
pub fn circle_profile(u: &LinePoly, degree: u32) -> Result<CircleProfile, FsError> {
    if u.terms.keys().any(|(p, q)| p + q != degree) {
        return Err(FsError::NotHomogeneous(degree));
    }
    if u.is_harmonic() {
        return Err(FsError::Harmonic);
    }
    let mut modes: std::collections::BTreeMap<i32, C64> = Default::default();
    for ((p, q), c) in u.mixed_terms() {
        *modes.entry(*p as i32 - *q as i32).or_default() += c.to_c64() * (4.0 * (*p * *q) as f64);
    }
    let modes: Vec<(i32, C64)> = modes.into_iter().filter(|(_, a)| a.norm() > 0.0).collect();
    if modes.is_empty() {
        return Err(FsError::Harmonic);
    }
    let scale: f64 = modes.iter().map(|(_, a)| a.norm()).sum();
    let mut prof = CircleProfile { degree, u: u.clone(), modes, zeros: vec![], gamma: 0.0, scale };
    let n = VERIFICATION_GRID;
    let vals: Vec<f64> = grid(n).map(|t| prof.value(t)).collect();
    let (jmin, vmin) = vals.iter().enumerate().fold((0, f64::INFINITY), |m, (j, v)| if *v < m.1 { (j, *v) } else { m });
    if vmin < -1e-12 * scale {
        let th = refine_zero(&prof, TAU * jmin as f64 / n as f64, TAU / n as f64);
        return Err(FsError::NotSubharmonic { theta: th, value: prof.value(th).min(vmin) });
    }
    let h = TAU / n as f64;
    let mut zeros: Vec<f64> = Vec::new();
    for j in 0..n {
        let (l, r) = (vals[(j + n - 1) % n], vals[(j + 1) % n]);
        if vals[j] <= l && vals[j] <= r && vals[j] <= 1e-6 * scale {
            let th = refine_zero(&prof, TAU * j as f64 / n as f64, h);
            if prof.value(th).abs() <= 1e-9 * scale && zeros.iter().all(|z| circle_distance(*z, th) > 1e-7) {
                zeros.push(th);
            }
        }
    }
    zeros.sort_by(|a, b| a.partial_cmp(b).unwrap());
    prof.gamma = vals.iter().cloned().fold(f64::INFINITY, f64::min).max(0.0);
    prof.zeros = zeros;
    Ok(prof)
}

/// Angular profile `h(theta)`.
#[derive(Clone, Debug)]
pub enum Profile {
    Constant(f64),
    Spline(PeriodicQuinticSpline),
}

impl Profile {
    pub fn eval(&self, theta: f64) -> (f64, f64, f64) {
        match self {
            Profile::Constant(c) => (*c, 0.0, 0.0),
            Profile::Spline(s) => s.eval(theta),
        }
    }
}

/// `F(x) = |x|^n h(arg x)`.
#[derive(Clone, Debug)]
pub struct RadialProfile {
    pub degree: u32,
    pub h: Profile,
}

impl RadialProfile {
    pub fn value(&self, x: C64) -> f64 {
        let r = x.norm();
        if r == 0.0 {
            return 0.0;
        }
        r.powi(self.degree as i32) * self.h.eval(x.arg()).0
    }

    /// `(F, F_x, F_{x conj x})`.
    pub fn wirtinger(&self, x: C64) -> (f64, C64, f64) {
        let n = self.degree as f64;
        let r = x.norm();
        let th = if r == 0.0 { 0.0 } else { x.arg() };
        let (h, h1, h2) = self.h.eval(th);
        if r == 0.0 {
            let fxx = if self.degree == 2 { 0.25 * (n * n * h + h2) } else { 0.0 };
            return (0.0, C64::new(0.0, 0.0), fxx);
        }
        let rn2 = r.powi(self.degree as i32 - 2);
        let f = rn2 * r * r * h;
        let fx = C64::from_polar(0.5 * rn2 * r, -th) * C64::new(n * h, -h1);
        let fxx = 0.25 * rn2 * (n * n * h + h2);
        (f, fx, fxx)
    }
}

/// Cap parameters: `h = c0 ((1 - amp) + amp sum_k B(dist(theta, theta_k) / width))`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CapParams {
    pub width: f64,
    pub amp: f64,
    pub c0: f64,
}

#[derive(Clone, Debug)]
pub struct RadialBump {
    pub profile: RadialProfile,
    pub c1: f64,
    pub c2: f64,
    pub sigma: f64,
    pub zeros: Vec<f64>,
    pub caps: Option<CapParams>,
}

fn cap_profile(zeros: &[f64], p: &CapParams, theta: f64) -> f64 {
    let s: f64 = zeros.iter().map(|z| cap(D2::cst(circle_distance(theta, *z) / p.width)).v).sum();
    p.c0 * ((1.0 - p.amp) + p.amp * s)
}

/// Grid size: the construction size rounded up to a multiple of `multiple`.
pub fn construction_size(multiple: usize) -> usize {
    let m = multiple.max(1);
    CONSTRUCTION_GRID.div_ceil(m) * m
}

/// Sector half-width around the zeros.
pub fn sector_width(zeros: &[f64]) -> f64 {
    let mut gap = f64::INFINITY;
    for (i, a) in zeros.iter().enumerate() {
        for b in &zeros[i + 1..] {
            gap = gap.min(circle_distance(*a, *b));
        }
    }
    0.2f64.min(gap / 4.0)
}

fn c0_grid() -> Vec<f64> {
    let mut v = vec![1.0, 0.5, 0.25];
    let mut c = 0.1;
    while c > 1e-13 {
        v.push(c);
        v.push(c / 4.0);
        c /= 10.0;
    }
    v
}

/// Raw constants `(C1, C2)` of an assignment on the verification grid, without halving.
fn raw_constants(circle: &CircleProfile, prof: &RadialProfile, sigma: f64, zeros: &[f64]) -> (f64, f64, f64, f64) {
    let n2 = (prof.degree as f64).powi(2);
    let (mut c1, mut c2) = (f64::INFINITY, f64::INFINITY);
    let (mut hmin, mut hmax) = (f64::INFINITY, f64::NEG_INFINITY);
    for th in grid(VERIFICATION_GRID) {
        let l = circle.value(th);
        let (h, _, h2) = prof.h.eval(th);
        hmin = hmin.min(h);
        hmax = hmax.max(h);
        let x = n2 * h + h2;
        let off = zeros.iter().all(|z| circle_distance(th, *z) > sigma);
        for d in DELTAS {
            c1 = c1.min((l - d * x) / d);
            if off {
                c2 = c2.min(l.min(l - d * x));
            }
        }
    }
    (c1, c2, hmin, hmax)
}

fn finish(circle: &CircleProfile, profile: RadialProfile, sigma: f64, caps: Option<CapParams>) -> Option<RadialBump> {
    let (c1, c2, hmin, hmax) = raw_constants(circle, &profile, sigma, &circle.zeros);
    if !(hmin > 0.0 && hmax <= 1.0 && c1 > 0.0 && c2 > 0.0) {
        return None;
    }
    Some(RadialBump { profile, c1: 0.5 * c1, c2: 0.5 * c2, sigma, zeros: circle.zeros.clone(), caps })
}

/// Constant profile when the Laplacian has no zeros, cap profile otherwise.
pub fn construct_radial_bump(circle: &CircleProfile, grid_multiple: usize) -> Result<RadialBump, FsError> {
    let n = circle.degree;
    if circle.zeros.is_empty() {
        let h = 1f64.min(circle.gamma / (2.0 * (n as f64).powi(2)));
        let prof = RadialProfile { degree: n, h: Profile::Constant(h) };
        let sigma = 0.2;
        return finish(circle, prof, sigma, None).ok_or(FsError::SearchFailed);
    }
    let sigma = sector_width(&circle.zeros);
    let size = construction_size(grid_multiple);
    for width in [sigma / 2.0, sigma / 4.0, sigma / 8.0] {
        for amp in [0.9, 0.5, 0.1] {
            for c0 in c0_grid() {
                let p = CapParams { width, amp, c0 };
                let vals: Vec<f64> = grid(size).map(|t| cap_profile(&circle.zeros, &p, t)).collect();
                let prof = RadialProfile { degree: n, h: Profile::Spline(PeriodicQuinticSpline::interpolate(&vals)) };
                if let Some(b) = finish(circle, prof, sigma, Some(p)) {
                    return Ok(b);
                }
            }
        }
    }
    Err(FsError::SearchFailed)
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct RadialReport {
    pub h_min: f64,
    pub h_max: f64,
    /// `min_{delta, theta} (L - delta X) / delta - C1`.
    pub c1_margin: f64,
    /// `min` over the off-sector grid of `min(L, L - delta X) - C2`.
    pub c2_margin: f64,
    pub zeros_match: bool,
}

impl RadialReport {
    pub fn passed(&self) -> bool {
        self.h_min > 0.0 && self.h_max <= 1.0 && self.c1_margin >= 0.0 && self.c2_margin >= 0.0 && self.zeros_match
    }
}

/// Re-derive both margins of a stored profile on the verification grid.
pub fn verify_radial_bump(circle: &CircleProfile, bump: &RadialBump) -> RadialReport {
    let (c1, c2, h_min, h_max) = raw_constants(circle, &bump.profile, bump.sigma, &circle.zeros);
    let zeros_match = circle.zeros.len() == bump.zeros.len()
        && circle.zeros.iter().all(|z| bump.zeros.iter().any(|w| circle_distance(*z, *w) < 1e-6));
    let c2_margin = if c2.is_finite() { c2 - bump.c2 } else { 0.0 };
    RadialReport { h_min, h_max, c1_margin: c1 - bump.c1, c2_margin, zeros_match }
}

/// `L(theta) - delta X(theta)` at one angle.
pub fn bumped_laplacian(circle: &CircleProfile, prof: &RadialProfile, delta: f64, theta: f64) -> f64 {
    let (h, _, h2) = prof.h.eval(theta);
    circle.value(theta) - delta * ((prof.degree as f64).powi(2) * h + h2)
}
