//! The homogeneous-side bump `G_delta` on the pullback space.
//!
//! ```text
//! G_delta = Pi - delta [c0 B + eps E + sum Psi_jk H_jk] + sum Psi_jk (u_jk - delta F_jk)
//! B = (|t1|^nu + |t2|^nu)(1 - sum Psi_jk),  E = |t|^nu (1 - sum Psi_jk)
//! ```
//! Pieces on line `k` of a curve are the line-0 pieces composed with the inverse deck
//! rotation carrying line 0 to line `k`.

use num_complex::Complex64 as C64;
use rand::Rng;
use thiserror::Error;

use crate::conebump::{build_cone_bump, ConeBump, ConeError, ConeLine};
use crate::exceptional::{root_of_unity, ExceptionalCurve};
use crate::frame::{cutoff_jet, LineFrame};
use crate::fsbump::{circle_profile, construct_radial_bump, FsError, RadialBump, RadialProfile};
use crate::jet::{levi_eigs, Jet};
use crate::levi::{point_to_array, Region};
use crate::polyalg::compiled::PolyJet;
use crate::polyalg::line::restrict_affine_f64;
use crate::polyalg::{restrict_to_line, CRat, CurveXi, Line, LinePoly, MixedPolynomial, WeightSignature};
use crate::sampling::{self, log_uniform, sample, unit_sphere};

pub const PSH_TOL: f64 = 1e-10;
const CONSTRUCTION_SAMPLES: usize = 6000;
const DECAY_SAMPLES: usize = 4000;
const MAX_HALVINGS: usize = 40;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AssemblyError {
    #[error("pullback degree {0} is odd")]
    OddDegree(u32),
    #[error("curve {curve}: {source}")]
    Cone { curve: usize, source: ConeError },
    #[error("curve {curve}: {source}")]
    LineProfile { curve: usize, source: FsError },
    #[error("no positive ambient coefficient keeps the Levi form positive (witness {witness:?})")]
    NoPositiveDelta { witness: [f64; 4] },
    #[error("delta {delta} exceeds the admissible bound {max}")]
    DeltaTooLarge { delta: f64, max: f64 },
    #[error("G is not plurisubharmonic on any dyadic ball (witness {witness:?})")]
    StrictPshFailed { witness: [f64; 4] },
    #[error("no radius gives a positive decay constant (witness {witness:?})")]
    NoPositiveRadius { witness: [f64; 4] },
}

/// Everything needed to evaluate the pieces attached to one curve.
#[derive(Clone, Debug)]
pub struct TCurve {
    pub frame: LineFrame,
    /// Multipliers of `R_k^{-1}` for every pullback line `k`.
    pub rotations: Vec<[C64; 2]>,
    pub alpha: f64,
    pub a: u32,
    pub b: u32,
    pub mu: u32,
    pub cone: RadialProfile,
    pub two_m: u32,
    pub u: Option<LinePiece>,
}

#[derive(Clone, Debug)]
pub struct LinePiece {
    pub u: LinePoly,
    pub jet: PolyJet,
    pub h: RadialProfile,
}

impl LinePiece {
    pub fn new(u: LinePoly, h: RadialProfile) -> Self {
        LinePiece { jet: PolyJet::new(&u.to_mixed()), u, h }
    }
}

impl TCurve {
    pub fn new(
        curve: &ExceptionalCurve,
        w: &WeightSignature,
        alpha: f64,
        a: u32,
        b: u32,
        mu: u32,
        cone: RadialProfile,
        two_m: u32,
    ) -> Self {
        let rotations = curve
            .deck
            .iter()
            .map(|(l, m)| [root_of_unity(w.sigma1, -(*l as i64)), root_of_unity(w.sigma2, -(*m as i64))])
            .collect();
        TCurve { frame: curve.lines[0], rotations, alpha, a, b, mu, cone, two_m, u: None }
    }

    pub fn local(&self, k: usize, t: [C64; 2]) -> [C64; 2] {
        [self.rotations[k][0] * t[0], self.rotations[k][1] * t[1]]
    }

    /// Nearest line and its frame ratio `|s1| / |s2|`.
    pub fn nearest(&self, t: [C64; 2]) -> (usize, f64) {
        let mut best = (0, f64::INFINITY);
        for k in 0..self.rotations.len() {
            let r = self.frame.ratio(self.local(k, t));
            if r < best.1 {
                best = (k, r);
            }
        }
        best
    }

    /// `|s1|^mu |s2|^{nu - mu} + |s2|^{2M}` in the frame of line `k`.
    pub fn decay_weight(&self, nu: u32, k: usize, t: [C64; 2]) -> f64 {
        let s = self.frame.to_frame(self.local(k, t));
        let (x, y) = (s[0].norm(), s[1].norm());
        x.powi(self.mu as i32) * y.powi((nu - self.mu) as i32) + y.powi(self.two_m as i32)
    }
}

/// Jets of the separate pieces at one point.
#[derive(Clone, Copy, Debug)]
pub struct Parts {
    pub pi: Jet,
    pub b: Jet,
    pub e: Jet,
    /// `sum Psi_jk H_jk`.
    pub hc: Jet,
    /// `sum Psi_jk F_jk(s2)`.
    pub wf: Jet,
    /// `sum Psi_jk u_jk(s2)`.
    pub wu: Jet,
    /// `rho_t - Pi`.
    pub higher: f64,
}

impl Parts {
    pub fn h(&self, c0: f64, eps: f64) -> Jet {
        self.b.scale(c0).add(&self.e.scale(eps)).add(&self.hc)
    }

    pub fn g(&self, c0: f64, eps: f64, delta: f64) -> Jet {
        self.pi.sub(&self.h(c0, eps).add(&self.wf).scale(delta)).add(&self.wu)
    }

    /// `rho_t - G_delta` without cancelling the homogeneous part.
    pub fn gap(&self, c0: f64, eps: f64, delta: f64) -> f64 {
        self.higher + delta * (self.h(c0, eps).v + self.wf.v) - self.wu.v
    }
}

/// Evaluator of `G_delta` on the pullback space.
#[derive(Clone, Debug)]
pub struct TModel {
    pub w: WeightSignature,
    pub nu: u32,
    pub pi: PolyJet,
    pub higher: PolyJet,
    sigma_pb: PolyJet,
    norm_pow: PolyJet,
    pub curves: Vec<TCurve>,
    pub c0: f64,
    pub eps: f64,
    pub delta: f64,
}

fn line_jet(f: &RadialProfile, fr: &LineFrame, t: [C64; 2]) -> Jet {
    let forms = fr.forms();
    let x = forms[1][0] * t[0] + forms[1][1] * t[1];
    let (v, fx, fxx) = f.wirtinger(x);
    Jet::compose_holo(v, fx, fxx, forms[1])
}

fn line_poly_jet(u: &PolyJet, fr: &LineFrame, t: [C64; 2]) -> Jet {
    let forms = fr.forms();
    let x = forms[1][0] * t[0] + forms[1][1] * t[1];
    let j = u.jet([x, C64::new(0.0, 0.0)]);
    Jet::compose_holo(j.v, j.g[0], j.m[0][0].re, forms[1])
}

impl TModel {
    pub fn new(w: WeightSignature, pi: &MixedPolynomial, higher: &MixedPolynomial, curves: Vec<TCurve>) -> Self {
        let nu = w.nu;
        let half = nu / 2;
        let sigma_pb = MixedPolynomial::modulus_term(half, 0, crate::polyalg::rat_int(1))
            .add(&MixedPolynomial::modulus_term(0, half, crate::polyalg::rat_int(1)));
        let nrm = MixedPolynomial::modulus_term(1, 0, crate::polyalg::rat_int(1))
            .add(&MixedPolynomial::modulus_term(0, 1, crate::polyalg::rat_int(1)))
            .pow(half);
        TModel {
            w,
            nu,
            pi: PolyJet::new(pi),
            higher: PolyJet::new(higher),
            sigma_pb: PolyJet::new(&sigma_pb),
            norm_pow: PolyJet::new(&nrm),
            curves,
            c0: 0.0,
            eps: 0.0,
            delta: 0.0,
        }
    }

    pub fn parts(&self, t: [C64; 2]) -> Parts {
        let mut cut_sum = Jet::zero();
        let mut hc = Jet::zero();
        let mut wf = Jet::zero();
        let mut wu = Jet::zero();
        for c in &self.curves {
            for (k, rot) in c.rotations.iter().enumerate() {
                let tl = c.local(k, t);
                if c.frame.ratio(tl) >= 2.0 * c.alpha {
                    continue;
                }
                let dt = [rot[0], rot[1]];
                let psi = cutoff_jet(&c.frame, c.alpha, tl).through_diagonal(dt);
                cut_sum = cut_sum.add(&psi);
                let h = crate::conebump::cone_jet(&c.frame, c.a, c.b, &c.cone, tl).through_diagonal(dt);
                hc = hc.add(&psi.mul(&h));
                if let Some(piece) = &c.u {
                    let fj = line_jet(&piece.h, &c.frame, tl).through_diagonal(dt);
                    let ujet = line_poly_jet(&piece.jet, &c.frame, tl).through_diagonal(dt);
                    wf = wf.add(&psi.mul(&fj));
                    wu = wu.add(&psi.mul(&ujet));
                }
            }
        }
        let off = Jet::constant(1.0).sub(&cut_sum);
        Parts {
            pi: self.pi.jet(t),
            b: self.sigma_pb.jet(t).mul(&off),
            e: self.norm_pow.jet(t).mul(&off),
            hc,
            wf,
            wu,
            higher: self.higher.value(t),
        }
    }

    pub fn g_jet(&self, t: [C64; 2]) -> Jet {
        self.parts(t).g(self.c0, self.eps, self.delta)
    }

    pub fn gap(&self, t: [C64; 2]) -> f64 {
        self.parts(t).gap(self.c0, self.eps, self.delta)
    }

    /// `c0 B + eps E + sum Psi H`.
    pub fn h_value(&self, t: [C64; 2]) -> f64 {
        self.parts(t).h(self.c0, self.eps).v
    }

    /// Curve index and line index of an `alpha`-cone containing `t` (scale `factor` on the aperture).
    pub fn in_wedge(&self, t: [C64; 2], factor: f64) -> Option<(usize, usize)> {
        self.curves.iter().enumerate().find_map(|(j, c)| {
            let (k, r) = c.nearest(t);
            (r < factor * c.alpha).then_some((j, k))
        })
    }
}

fn lambda(j: &Jet) -> f64 {
    levi_eigs(&j.m).0
}

fn tol_for(j: &Jet) -> f64 {
    PSH_TOL * j.frob().max(f64::MIN_POSITIVE)
}

/// Sphere points with a share drawn from the cones around every line.
pub fn sphere_with_lines(curves: &[TCurve], n: usize, seed: u64, aperture: f64) -> Vec<[C64; 2]> {
    let frames: Vec<(LineFrame, [C64; 2], f64)> =
        curves.iter().flat_map(|c| c.rotations.iter().map(move |r| (c.frame, *r, aperture * c.alpha))).collect();
    sample(n, seed, |rng| {
        if frames.is_empty() || rng.gen::<f64>() < 0.6 {
            return unit_sphere(rng);
        }
        let (fr, rot, ap) = frames[rng.gen_range(0..frames.len())];
        let tl = Region::Cone { frame: fr, aperture: ap }.sample(rng);
        [tl[0] / rot[0], tl[1] / rot[1]]
    })
}

/// First failing point of `min_i lambda(combo(parts_i)) >= floor_i - tol`.
fn first_failure(parts: &[(Parts, [C64; 2])], combo: impl Fn(&Parts) -> (Jet, f64) + Sync) -> Option<[C64; 2]> {
    use rayon::prelude::*;
    parts
        .par_iter()
        .find_first(|(p, _)| {
            let (j, floor) = combo(p);
            !(lambda(&j) >= floor - tol_for(&j))
        })
        .map(|(_, t)| *t)
}

/// Constructed data per curve.
#[derive(Clone, Debug)]
pub struct CurveBuild {
    pub cone: ConeBump,
    pub alpha: f64,
    pub u: LinePoly,
    pub h: RadialBump,
    pub decay: (f64, f64),
}

#[derive(Clone, Debug)]
pub struct Assembled {
    pub model: TModel,
    pub curves: Vec<CurveBuild>,
    pub delta0: f64,
    pub r0: f64,
    pub outside_decay: (f64, f64),
}

/// Line-0 data for a curve: exact substitution line and whether it is exact.
pub fn cone_line(curve: &ExceptionalCurve, w: &WeightSignature) -> (ConeLine, bool) {
    match &curve.xi {
        CurveXi::Infinity => (ConeLine::Axis2, true),
        CurveXi::Finite(x) => {
            let exact = &curve.omega0.pow(w.lines_per_curve()) == x;
            (ConeLine::Slope(curve.omega0.clone()), exact)
        }
    }
}

/// Degree-`2M` part of `rho_t` along line 0, as a polynomial of `s2`.
pub fn line_terms(rho_t: &MixedPolynomial, curve: &ExceptionalCurve, w: &WeightSignature, two_m: u32) -> LinePoly {
    let (line, exact) = cone_line(curve, w);
    let full = match (&line, exact) {
        (ConeLine::Axis2, _) => restrict_to_line(rho_t, &Line::Axis2),
        (ConeLine::Slope(om), true) => restrict_to_line(rho_t, &Line::Slope(om.clone())),
        (ConeLine::Slope(om), false) => {
            let zero = C64::new(0.0, 0.0);
            let one = C64::new(1.0, 0.0);
            let coeffs = restrict_affine_f64(rho_t, [zero, zero], [om.to_c64(), one]);
            let top = coeffs.values().map(|c| c.norm()).fold(0.0, f64::max);
            let mut lp = LinePoly::default();
            for (k, c) in coeffs {
                if c.norm() > 1e-9 * top {
                    lp.add_term(k, CRat::approximate(c, 1_000_000_000_000));
                }
            }
            lp
        }
    };
    let mut u = LinePoly::default();
    for (k, c) in full.terms {
        if k.0 + k.1 == two_m {
            u.add_term(k, c);
        }
    }
    u
}

fn cones_disjoint(a: &TCurve, ka: usize, b: &TCurve, kb: usize) -> bool {
    // Lines as slopes t1/t2 (None for the axis t2 = 0).
    let slope = |c: &TCurve, k: usize| match c.frame {
        LineFrame::Slope(w) => Some(w / c.rotations[k][0] * c.rotations[k][1]),
        LineFrame::Axis2 => None,
    };
    match (slope(a, ka), slope(b, kb)) {
        (Some(x), Some(y)) => (x - y).norm() > 2.0 * (a.alpha + b.alpha),
        (Some(x), None) => x.norm() + 2.0 * a.alpha < 1.0 / (2.0 * b.alpha),
        (None, Some(y)) => y.norm() + 2.0 * b.alpha < 1.0 / (2.0 * a.alpha),
        (None, None) => false,
    }
}

fn shrink_until_disjoint(curves: &mut [TCurve]) {
    for _ in 0..60 {
        let mut clash = None;
        'outer: for i in 0..curves.len() {
            for j in i..curves.len() {
                for ka in 0..curves[i].rotations.len() {
                    for kb in 0..curves[j].rotations.len() {
                        if i == j && ka >= kb {
                            continue;
                        }
                        if !cones_disjoint(&curves[i], ka, &curves[j], kb) {
                            clash = Some(if curves[i].alpha >= curves[j].alpha { i } else { j });
                            break 'outer;
                        }
                    }
                }
            }
        }
        match clash {
            Some(i) => curves[i].alpha /= 2.0,
            None => return,
        }
    }
}

pub struct AssemblyInput<'a> {
    pub w: WeightSignature,
    pub pi: &'a MixedPolynomial,
    pub rho_t: &'a MixedPolynomial,
    pub curves: &'a [ExceptionalCurve],
    /// Pullback `2M` per curve.
    pub two_m: &'a [u32],
    pub seed: u64,
}

pub fn assemble(input: &AssemblyInput) -> Result<Assembled, AssemblyError> {
    let w = input.w;
    if w.nu % 2 != 0 {
        return Err(AssemblyError::OddDegree(w.nu));
    }
    let higher = input.rho_t.sub(input.pi);
    let mut cones = Vec::new();
    let mut tcurves = Vec::new();
    for (j, curve) in input.curves.iter().enumerate() {
        let (line, exact) = cone_line(curve, &w);
        let cone = build_cone_bump(input.pi, &line, exact, w.lines_per_curve() as usize, input.seed)
            .map_err(|source| AssemblyError::Cone { curve: j, source })?;
        tcurves.push(TCurve::new(
            curve,
            &w,
            cone.sigma / 2.0,
            cone.factor.a,
            cone.factor.b,
            cone.mu,
            cone.profile.clone(),
            input.two_m[j],
        ));
        cones.push(cone);
    }
    shrink_until_disjoint(&mut tcurves);
    let mut model = TModel::new(w, input.pi, &higher, tcurves);

    let pts = sphere_with_lines(&model.curves, CONSTRUCTION_SAMPLES, input.seed, 2.0);
    let parts: Vec<(Parts, [C64; 2])> = {
        use rayon::prelude::*;
        pts.par_iter().map(|t| (model.parts(*t), *t)).collect()
    };

    // ambient coefficient: keep half of the Levi form of Pi
    let keep = |c: f64, eps: f64, frac: f64| {
        first_failure(&parts, |p| (p.pi.sub(&p.b.scale(c).add(&p.e.scale(eps))), frac * lambda(&p.pi)))
    };
    let mut c_ok = 1.0;
    let mut witness = None;
    for _ in 0..MAX_HALVINGS {
        match keep(c_ok, 0.0, 0.5) {
            None => break,
            Some(t) => {
                witness = Some(t);
                c_ok /= 2.0;
            }
        }
    }
    if keep(c_ok, 0.0, 0.5).is_some() {
        return Err(AssemblyError::NoPositiveDelta { witness: point_to_array(witness.unwrap()) });
    }
    if c_ok < 1.0 {
        let (mut lo, mut hi) = (c_ok, 2.0 * c_ok);
        for _ in 0..16 {
            let mid = (lo * hi).sqrt();
            if keep(mid, 0.0, 0.5).is_none() {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        c_ok = lo;
    }
    model.c0 = c_ok;

    let mut eps = 0.0;
    let mut e = c_ok / 2.0;
    for _ in 0..30 {
        if keep(c_ok, e, 0.25).is_none() {
            eps = e;
            break;
        }
        e /= 2.0;
    }
    model.eps = eps;

    // delta0 from Pi - delta H
    let psh_at = |d: f64| first_failure(&parts, |p| (p.pi.sub(&p.h(model.c0, model.eps).scale(d)), 0.0));
    let delta0 = if psh_at(0.5).is_none() {
        0.5
    } else {
        let (mut lo, mut hi) = (0.0, 0.5);
        for _ in 0..16 {
            let mid = 0.5 * (lo + hi);
            if psh_at(mid).is_none() {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        if lo == 0.0 {
            let t = psh_at(hi).unwrap_or([C64::new(0.0, 0.0); 2]);
            return Err(AssemblyError::NoPositiveDelta { witness: point_to_array(t) });
        }
        lo
    };
    model.delta = delta0 / 2.0;

    // line terms
    let mut line_data = Vec::new();
    for (j, curve) in input.curves.iter().enumerate() {
        let u = line_terms(input.rho_t, curve, &w, input.two_m[j]);
        let circle =
            circle_profile(&u, input.two_m[j]).map_err(|source| AssemblyError::LineProfile { curve: j, source })?;
        let h = construct_radial_bump(&circle, w.lines_per_curve() as usize)
            .map_err(|source| AssemblyError::LineProfile { curve: j, source })?;
        model.curves[j].u = Some(LinePiece::new(u.clone(), h.profile.clone()));
        line_data.push((u, h));
    }

    let r0 = fit_r0(&model, input.seed)?;
    let (per_curve, outside) = fit_decay_constants(&model, r0, input.seed)?;

    let curves = cones
        .into_iter()
        .zip(line_data)
        .zip(per_curve)
        .enumerate()
        .map(|(j, ((cone, (u, h)), decay))| CurveBuild { cone, alpha: model.curves[j].alpha, u, h, decay })
        .collect();
    Ok(Assembled { model, curves, delta0, r0, outside_decay: outside })
}

/// Ball points of radius at most `radius`, log-uniform in the radius, with a near-line share.
pub fn ball_with_lines(model: &TModel, n: usize, seed: u64, radius: f64) -> Vec<[C64; 2]> {
    let sph = sphere_with_lines(&model.curves, n, seed, 2.0);
    let radii = sample(n, seed ^ 0x5eed, |rng| log_uniform(rng, radius * 1e-4, radius));
    sph.into_iter().zip(radii).map(|(t, r)| sampling::scale(t, r)).collect()
}

/// Worst point of `lambda_min(G) >= -tol` over `pts`.
pub fn psh_failure(model: &TModel, pts: &[[C64; 2]]) -> Option<([C64; 2], f64)> {
    use rayon::prelude::*;
    pts.par_iter()
        .filter_map(|t| {
            let j = model.g_jet(*t);
            let l = lambda(&j);
            (!(l >= -tol_for(&j))).then_some((*t, l))
        })
        .find_first(|_| true)
}

fn fit_r0(model: &TModel, seed: u64) -> Result<f64, AssemblyError> {
    let mut r0 = 0.5;
    let mut witness = [0.0; 4];
    for _ in 0..MAX_HALVINGS {
        let pts = ball_with_lines(model, CONSTRUCTION_SAMPLES, seed.wrapping_add(1), 2.0 * r0);
        match psh_failure(model, &pts) {
            None => return Ok(r0),
            Some((t, _)) => witness = point_to_array(t),
        }
        r0 /= 2.0;
    }
    Err(AssemblyError::StrictPshFailed { witness })
}

/// Inner-wedge points of line 0 of curve `j` (mapped to line `k` at random), radius at most `r`.
pub fn wedge_points(model: &TModel, j: usize, n: usize, seed: u64, r: f64) -> Vec<[C64; 2]> {
    let c = &model.curves[j];
    sample(n, seed, |rng| {
        let ratio = if rng.gen_bool(0.5) {
            log_uniform(rng, c.alpha * 1e-6, c.alpha)
        } else {
            c.alpha * rng.gen::<f64>().max(1e-12)
        };
        let tl = crate::levi::wedge_point(&c.frame, ratio, rng);
        let k = rng.gen_range(0..c.rotations.len());
        let rot = c.rotations[k];
        let rad = log_uniform(rng, r * 1e-3, r);
        [tl[0] / rot[0] * rad, tl[1] / rot[1] * rad]
    })
}

/// Ball points of radius at most `r` outside every inner wedge.
pub fn outside_points(model: &TModel, n: usize, seed: u64, r: f64) -> Vec<[C64; 2]> {
    ball_with_lines(model, n, seed, r).into_iter().filter(|t| model.in_wedge(*t, 1.0).is_none()).collect()
}

/// `(r, C)` per curve and for the outside region, with `C` excluding `delta`.
pub fn fit_decay_constants(model: &TModel, r0: f64, seed: u64) -> Result<(Vec<(f64, f64)>, (f64, f64)), AssemblyError> {
    let delta = model.delta;
    let mut r = r0;
    let mut witness = [0.0; 4];
    for _ in 0..MAX_HALVINGS {
        let mut ok = true;
        let mut per = Vec::new();
        for j in 0..model.curves.len() {
            let pts = wedge_points(model, j, DECAY_SAMPLES, seed.wrapping_add(2 + j as u64), r);
            let (m, t) = min_ratio(&pts, |t| {
                let (k, _) = model.curves[j].nearest(t);
                model.gap(t) / (delta * model.curves[j].decay_weight(model.nu, k, t))
            });
            ok &= m > 0.0;
            if !(m > 0.0) {
                witness = point_to_array(t);
            }
            per.push((r, 0.9 * m));
        }
        let pts = outside_points(model, DECAY_SAMPLES, seed.wrapping_add(101), r);
        let nu = model.nu as i32;
        let (m, t) = min_ratio(&pts, |t| model.gap(t) / (delta * sampling::norm(t).powi(nu)));
        if !(m > 0.0) {
            witness = point_to_array(t);
        }
        if ok && m > 0.0 {
            return Ok((per, (r, 0.9 * m)));
        }
        r /= 2.0;
    }
    Err(AssemblyError::NoPositiveRadius { witness })
}

pub fn min_ratio(pts: &[[C64; 2]], f: impl Fn([C64; 2]) -> f64 + Sync) -> (f64, [C64; 2]) {
    use rayon::prelude::*;
    pts.par_iter()
        .map(|t| (f(*t), *t))
        .reduce(|| (f64::INFINITY, [C64::new(0.0, 0.0); 2]), |a, b| if b.0 < a.0 || b.0.is_nan() { b } else { a })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exceptional::{curve_invariants, find_exceptional};
    use crate::polyalg::{pluriharmonic_strip, pullback, rat, rat_int};

    fn run(p: &MixedPolynomial, q: &MixedPolynomial, m: (u32, u32)) -> Assembled {
        let w = WeightSignature::new(m.0, m.1).unwrap();
        let pi = pullback(p, &w);
        let full = pullback(&p.add(q), &w);
        let (_, rho_t) = pluriharmonic_strip(&full, full.total_degree());
        let curves = find_exceptional(p, &w).unwrap();
        let two_m: Vec<u32> = curves.iter().map(|c| curve_invariants(p, q, &w, c, 1).unwrap().two_m).collect();
        assemble(&AssemblyInput { w, pi: &pi, rho_t: &rho_t, curves: &curves, two_m: &two_m, seed: 1 }).unwrap()
    }

    #[test]
    fn example_assembles() {
        let p = MixedPolynomial::modulus_term(3, 1, rat_int(1))
            .add(&MixedPolynomial::modulus_term(4, 0, rat_int(1)))
            .add(&MixedPolynomial::modulus_term(1, 0, rat(15, 7)).mul(&MixedPolynomial::z1().pow(6).re()));
        let q = MixedPolynomial::modulus_term(0, 5, rat_int(1));
        let a = run(&p, &q, (8, 8));
        eprintln!(
            "c0 {} eps {} delta0 {} r0 {} alpha {} decay {:?} out {:?}",
            a.model.c0, a.model.eps, a.delta0, a.r0, a.curves[0].alpha, a.curves[0].decay, a.outside_decay
        );
        assert!(a.delta0 > 0.0 && a.model.c0 > 0.0);
        assert!((a.curves[0].decay.1 - 0.45).abs() < 0.02);
        // wedge identity: G = Pi - delta H + U(s2) with Psi = 1
        let pts = wedge_points(&a.model, 0, 200, 9, a.r0);
        for t in pts {
            let g = a.model.g_jet(t).v;
            let s2 = t[1];
            let u = s2.norm().powi(10);
            let f = a.curves[0].h.profile.value(s2);
            let h = crate::conebump::cone_value(&a.model.curves[0].frame, 3, 1, &a.model.curves[0].cone, t);
            let want = a.model.pi.value(t) - a.model.delta * h + u - a.model.delta * f;
            assert!((g - want).abs() <= 1e-10 * (a.model.pi.abs_value(t) + u));
        }
    }

    #[test]
    fn h_extendible_has_no_cone_pieces() {
        let p = MixedPolynomial::modulus_term(2, 0, rat_int(1))
            .add(&MixedPolynomial::modulus_term(1, 1, rat_int(2)))
            .add(&MixedPolynomial::modulus_term(0, 2, rat_int(1)));
        let a = run(&p, &MixedPolynomial::zero(), (4, 4));
        assert!(a.curves.is_empty());
        assert!(a.outside_decay.1 > 0.0);
    }

    #[test]
    fn weighted_fixture_assembles() {
        let p = MixedPolynomial::modulus_term(0, 4, rat_int(1)).add(&MixedPolynomial::modulus_term(1, 2, rat_int(1)));
        let q = MixedPolynomial::modulus_term(3, 0, rat_int(1));
        let a = run(&p, &q, (4, 8));
        eprintln!(
            "c0 {} eps {} delta0 {} r0 {} decay {:?} out {:?}",
            a.model.c0, a.model.eps, a.delta0, a.r0, a.curves[0].decay, a.outside_decay
        );
        assert_eq!(a.curves.len(), 1);
    }
}
