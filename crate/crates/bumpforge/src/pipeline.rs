//! Weighted model domains: validation, analysis, and the bump construction on the
//! original coordinates via the branched cover `Psi(t) = (t1^sigma1, t2^sigma2)`.

use num_complex::Complex64 as C64;
use num_traits::One;
use rand::Rng;
use thiserror::Error;

use crate::assembler::{assemble, AssemblyError, AssemblyInput, LinePiece, TCurve, TModel};
use crate::cli_io::schema::{
    crat_text, decode_line, decode_poly, encode_line, encode_poly, parse_crat, parse_xi, xi_to_text, BumpPayload,
    Certificate, ConePayload, CoordinatePayload, CurvePayload, DecayPayload, DomainPayload, MarginsPayload,
    ProfilePayload, SchemaError, SeedsPayload, WedgePayload, SCHEMA,
};
use crate::conebump::ConeMode;
use crate::exceptional::{
    build_curve, curve_invariants, find_exceptional, root_of_unity, separation_check, ClassVerdict, Classification,
    CurveInvariants, ExceptionalCurve, ExceptionalError, SeparationOptions,
};
use crate::fsbump::{PeriodicQuinticSpline, Profile, RadialBump, RadialProfile};
use crate::jet::{levi_eigs, Jet};
use crate::levi::point_to_array;
use crate::polyalg::compiled::{CompiledPoly, PolyJet};
use crate::polyalg::{
    pluriharmonic_strip, pullback, rat, weighted_decompose, MixedPolynomial, PolyError, Rat, WeightSignature,
};
use crate::sampling::{self, sample};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PipelineError {
    #[error("polynomial is not real-valued")]
    NotRealValued,
    #[error("weight-one part contains pluriharmonic terms")]
    PluriharmonicInP,
    #[error("term of weighted degree {0} <= 1 outside the model part")]
    QWeightTooLow(String),
    #[error("weight-one part is empty")]
    EmptyModel,
    #[error("weight-one part is not plurisubharmonic (witness {witness:?})")]
    NotPsh { witness: [f64; 4] },
    #[error(transparent)]
    Weights(#[from] PolyError),
    #[error("exceptional curves: {0}")]
    Exceptional(#[from] ExceptionalError),
    #[error("classification is NOT_APPLICABLE (witness {witness:?})")]
    NotApplicable { witness: Option<[f64; 4]> },
    #[error("curve {0} fails the order condition mu <= ord Q")]
    OrderCondition(String),
    #[error("assembly: {0}")]
    Assembly(#[from] AssemblyError),
    #[error("monomial with exponents {0:?} is not a product of sigma-th powers")]
    NonLatticeMonomial([u32; 4]),
    #[error("function is not invariant under the deck rotation ({0}, {1})")]
    NotDeckInvariant(u32, u32),
    #[error("no admissible K up to {0}")]
    NoAdmissibleK(f64),
    #[error(transparent)]
    Schema(#[from] SchemaError),
}

/// `Re w + P(z) + Q(z) < 0` with `P` of weight one and `Q` of higher weight.
#[derive(Clone, Debug, PartialEq)]
pub struct ModelDomain {
    pub text: String,
    pub w: WeightSignature,
    pub p: MixedPolynomial,
    pub q: MixedPolynomial,
}

impl ModelDomain {
    pub fn full(&self) -> MixedPolynomial {
        self.p.add(&self.q)
    }
}

const PSH_SAMPLES: usize = 4000;

fn check_weight_one_psh(p: &MixedPolynomial, w: &WeightSignature, seed: u64) -> Result<(), PipelineError> {
    let pj = PolyJet::new(p);
    let pts = sampling::sample_weighted_sphere(w, PSH_SAMPLES, seed);
    for z in pts {
        let j = pj.jet(z);
        if levi_eigs(&j.m).0 < -1e-10 * j.frob() {
            return Err(PipelineError::NotPsh { witness: point_to_array(z) });
        }
    }
    Ok(())
}

/// Split by weight and check the normal-form conditions.
pub fn validate_domain(text: &str, full: &MixedPolynomial, w: WeightSignature) -> Result<ModelDomain, PipelineError> {
    if !full.is_real_valued() {
        return Err(PipelineError::NotRealValued);
    }
    let mut p = MixedPolynomial::zero();
    let mut q = MixedPolynomial::zero();
    for comp in weighted_decompose(full, &w) {
        if comp.eta > Rat::one() {
            q = q.add(&comp.part);
            continue;
        }
        let stray = if comp.eta.is_one() { comp.part.pluriharmonic_part() } else { comp.part.clone() };
        if !stray.is_zero() {
            return Err(PipelineError::QWeightTooLow(comp.eta.to_string()));
        }
        p = comp.part;
    }
    validate_parts(text, p, q, w)
}

/// Validation when `P` and `Q` are given separately.
pub fn validate_parts(
    text: &str,
    p: MixedPolynomial,
    q: MixedPolynomial,
    w: WeightSignature,
) -> Result<ModelDomain, PipelineError> {
    if !p.is_real_valued() || !q.is_real_valued() {
        return Err(PipelineError::NotRealValued);
    }
    if p.is_zero() {
        return Err(PipelineError::EmptyModel);
    }
    if p.terms().any(|(e, _)| !w.weighted_degree(e).is_one()) {
        return Err(PipelineError::QWeightTooLow("P".into()));
    }
    if !p.pluriharmonic_part().is_zero() {
        return Err(PipelineError::PluriharmonicInP);
    }
    if let Some((e, _)) = q.terms().find(|(e, _)| w.weighted_degree(e) <= Rat::one()) {
        return Err(PipelineError::QWeightTooLow(w.weighted_degree(e).to_string()));
    }
    check_weight_one_psh(&p, &w, 17)?;
    Ok(ModelDomain { text: text.to_string(), w, p, q })
}

#[derive(Clone, Debug)]
pub struct Analysis {
    pub curves: Vec<ExceptionalCurve>,
    pub invariants: Vec<CurveInvariants>,
    pub classification: Classification,
}

pub fn analyze(domain: &ModelDomain, seed: u64) -> Result<Analysis, PipelineError> {
    let curves = find_exceptional(&domain.p, &domain.w)?;
    let invariants = curves
        .iter()
        .map(|c| curve_invariants(&domain.p, &domain.q, &domain.w, c, seed))
        .collect::<Result<Vec<_>, _>>()?;
    let classification = separation_check(&domain.p, &domain.w, &curves, &SeparationOptions::default());
    Ok(Analysis { curves, invariants, classification })
}

fn divides(s: u32, a: u32) -> bool {
    a % s == 0
}

/// Branch average of a polynomial on the pullback space, as a polynomial in `z`.
pub fn symmetrize(f: &MixedPolynomial, w: &WeightSignature) -> Result<MixedPolynomial, PipelineError> {
    let (s1, s2) = (w.sigma1, w.sigma2);
    let mut out = MixedPolynomial::zero();
    for (e, c) in f.terms() {
        let d1 = e[0] as i64 - e[1] as i64;
        let d2 = e[2] as i64 - e[3] as i64;
        if d1 % s1 as i64 != 0 || d2 % s2 as i64 != 0 {
            continue;
        }
        if !(divides(s1, e[0]) && divides(s1, e[1]) && divides(s2, e[2]) && divides(s2, e[3])) {
            return Err(PipelineError::NonLatticeMonomial(*e));
        }
        out.add_term([e[0] / s1, e[1] / s1, e[2] / s2, e[3] / s2], c.clone());
    }
    Ok(out)
}

/// Sum over the branches (the pushforward).
pub fn pushforward(f: &MixedPolynomial, w: &WeightSignature) -> Result<MixedPolynomial, PipelineError> {
    Ok(symmetrize(f, w)?.scale_rat(&rat((w.sigma1 * w.sigma2) as i64, 1)))
}

/// Exponent division of a holomorphic polynomial in `t`.
pub fn pushdown_coordinate_change(q: &MixedPolynomial, w: &WeightSignature) -> Result<MixedPolynomial, PipelineError> {
    let mut out = MixedPolynomial::zero();
    for (e, c) in q.terms() {
        if e[1] != 0 || e[3] != 0 || !divides(w.sigma1, e[0]) || !divides(w.sigma2, e[2]) {
            return Err(PipelineError::NonLatticeMonomial(*e));
        }
        out.add_term([e[0] / w.sigma1, 0, e[2] / w.sigma2, 0], c.clone());
    }
    Ok(out)
}

/// All `sigma1 sigma2` preimages of `z` with `dt_j / dz_j`.
pub fn roots(w: &WeightSignature, z: [C64; 2]) -> Vec<([C64; 2], [C64; 2])> {
    let base = |x: C64, s: u32| {
        if s == 1 || x == C64::new(0.0, 0.0) {
            x
        } else {
            x.powf(1.0 / s as f64)
        }
    };
    let (b1, b2) = (base(z[0], w.sigma1), base(z[1], w.sigma2));
    let deriv = |t: C64, x: C64, s: u32| {
        if s == 1 {
            C64::new(1.0, 0.0)
        } else {
            t / (x * s as f64)
        }
    };
    let mut out = Vec::with_capacity((w.sigma1 * w.sigma2) as usize);
    for a in 0..w.sigma1 {
        for b in 0..w.sigma2 {
            let t = [b1 * root_of_unity(w.sigma1, a as i64), b2 * root_of_unity(w.sigma2, b as i64)];
            out.push((t, [deriv(t[0], z[0], w.sigma1), deriv(t[1], z[1], w.sigma2)]));
        }
    }
    out
}

pub fn to_z(w: &WeightSignature, t: [C64; 2]) -> [C64; 2] {
    [t[0].powu(w.sigma1), t[1].powu(w.sigma2)]
}

/// Evaluator of `G`, `H_0`, `v_j` and the hypersurface inequality on the original coordinates.
#[derive(Clone, Debug)]
pub struct ZModel {
    pub t: TModel,
    pub w: WeightSignature,
    pub rho: PolyJet,
    pub f: CompiledPoly,
    pub k: f64,
    pub radius: f64,
    /// `Delta` in the contact exponent `(Delta + 1) / nu`.
    pub delta_exponent: u32,
    pub wedge: Vec<(f64, f64)>,
}

impl ZModel {
    pub fn g_jet(&self, z: [C64; 2]) -> Jet {
        let rs = roots(&self.w, z);
        let n = rs.len() as f64;
        rs.iter().fold(Jet::zero(), |acc, (t, dt)| acc.add(&self.t.g_jet(*t).through_diagonal(*dt))).scale(1.0 / n)
    }

    pub fn g(&self, z: [C64; 2]) -> f64 {
        let rs = roots(&self.w, z);
        rs.iter().map(|(t, _)| self.t.parts(*t).g(self.t.c0, self.t.eps, self.t.delta).v).sum::<f64>() / rs.len() as f64
    }

    /// `rho_tilde - G`.
    pub fn gap(&self, z: [C64; 2]) -> f64 {
        let rs = roots(&self.w, z);
        rs.iter().map(|(t, _)| self.t.gap(*t)).sum::<f64>() / rs.len() as f64
    }

    /// `H_0 = delta * average of (c0 B + eps E + sum Psi H)`.
    pub fn h0(&self, z: [C64; 2]) -> f64 {
        let rs = roots(&self.w, z);
        self.t.delta * rs.iter().map(|(t, _)| self.t.h_value(*t)).sum::<f64>() / rs.len() as f64
    }

    pub fn p_value(&self, z: [C64; 2]) -> f64 {
        self.t.pi.value(roots(&self.w, z)[0].0)
    }

    /// `v_j` at the relevant coordinate of `z`.
    pub fn v(&self, j: usize, z: [C64; 2]) -> f64 {
        let c = &self.t.curves[j];
        let piece = match &c.u {
            Some(p) => p,
            None => return 0.0,
        };
        let (x, s) = match c.frame {
            crate::frame::LineFrame::Axis2 => (z[0], self.w.sigma1),
            _ => (z[1], self.w.sigma2),
        };
        let base = if s == 1 || x == C64::new(0.0, 0.0) { x } else { x.powf(1.0 / s as f64) };
        let up = CompiledPoly::new(&piece.u.to_mixed());
        (0..s)
            .map(|b| {
                let y = base * root_of_unity(s, b as i64);
                up.eval([y, C64::new(0.0, 0.0)]).re - self.t.delta * piece.h.value(y)
            })
            .sum::<f64>()
            / s as f64
    }

    pub fn sigma_z(&self, z: [C64; 2]) -> f64 {
        z[0].norm().powi(self.w.m1 as i32) + z[1].norm().powi(self.w.m2 as i32)
    }

    pub fn rho_tilde(&self, z: [C64; 2]) -> f64 {
        self.rho.value(z) - self.f.eval(z).re
    }

    /// `(Re W + G, threshold)` on the model hypersurface at `(z, Im w = y)`: the inequality holds
    /// when the first is below `-tol * threshold`.
    pub fn hypersurface(&self, z: [C64; 2], y: f64) -> (f64, f64) {
        let rt = self.rho_tilde(z);
        let im = y + self.f.eval(z).im;
        let value = -self.gap(z) + self.k * (rt * rt - im * im);
        let thr = im * im + self.sigma_z(z).powf((self.delta_exponent as f64 + 1.0) / self.w.nu as f64);
        (value, thr)
    }

    /// Curve whose claimed inner wedge contains `z`, if any.
    pub fn wedge_of(&self, z: [C64; 2], outer: bool) -> Option<usize> {
        let t = roots(&self.w, z)[0].0;
        self.t.curves.iter().enumerate().find_map(|(j, c)| {
            let lim = if outer { self.wedge[j].1 } else { self.wedge[j].0 };
            (c.nearest(t).1 < lim).then_some(j)
        })
    }

    /// Largest spread of `G_delta` across the preimages of `z`.
    pub fn deck_spread(&self, z: [C64; 2]) -> f64 {
        let vals: Vec<f64> = roots(&self.w, z).iter().map(|(t, _)| self.t.g_jet(*t).v).collect();
        let lo = vals.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        hi - lo
    }
}

/// Radius of the `t`-ball covering `Psi^{-1}(B(0, r))`.
pub fn t_radius(w: &WeightSignature, r: f64) -> f64 {
    (r.powf(2.0 / w.sigma1 as f64) + r.powf(2.0 / w.sigma2 as f64)).sqrt()
}

fn profile_payload(rb: &RadialProfile, meta: Option<&RadialBump>) -> ProfilePayload {
    match (&rb.h, meta) {
        (Profile::Constant(v), _) => ProfilePayload::Constant { value: *v },
        (Profile::Spline(s), m) => ProfilePayload::Spline {
            values: s.values().to_vec(),
            c1: m.map_or(0.0, |b| b.c1),
            c2: m.map_or(0.0, |b| b.c2),
            sigma: m.map_or(0.0, |b| b.sigma),
            zeros: m.map_or(vec![], |b| b.zeros.clone()),
        },
    }
}

pub fn profile_from_payload(degree: u32, p: &ProfilePayload) -> RadialProfile {
    match p {
        ProfilePayload::Constant { value } => RadialProfile { degree, h: Profile::Constant(*value) },
        ProfilePayload::Spline { values, .. } => {
            RadialProfile { degree, h: Profile::Spline(PeriodicQuinticSpline::interpolate(values)) }
        }
    }
}

/// Stripped defining function on both sides and the coordinate change `f`.
pub struct Stripped {
    pub pi: MixedPolynomial,
    pub rho_t: MixedPolynomial,
    pub q_t: MixedPolynomial,
    pub f: MixedPolynomial,
}

pub fn strip_domain(domain: &ModelDomain) -> Result<Stripped, PipelineError> {
    let w = &domain.w;
    let pi = pullback(&domain.p, w);
    let full = pullback(&domain.full(), w);
    let (q_t, rho_t) = pluriharmonic_strip(&full, full.total_degree());
    let f = pushdown_coordinate_change(&q_t, w)?;
    Ok(Stripped { pi, rho_t, q_t, f })
}

/// Evaluator rebuilt from the certificate alone.
pub fn zmodel_from_certificate(cert: &Certificate) -> Result<(ModelDomain, ZModel), PipelineError> {
    if cert.schema != SCHEMA {
        return Err(SchemaError::Version(cert.schema.clone()).into());
    }
    let w = WeightSignature::new(cert.weights[0], cert.weights[1])?;
    let p = decode_poly(&cert.domain.p)?;
    let q = decode_poly(&cert.domain.q)?;
    let domain = ModelDomain { text: cert.domain.text.clone(), w, p, q };
    let pi = pullback(&domain.p, &w);
    let f = decode_poly(&cert.coordinate_change.f)?;
    let q_t =
        MixedPolynomial::from_terms(f.terms().map(|(e, c)| ([e[0] * w.sigma1, 0, e[2] * w.sigma2, 0], c.clone())));
    let rho_t = pullback(&domain.full(), &w).sub(&q_t.re());
    let mut tcurves = Vec::new();
    let mut wedge = Vec::new();
    for c in &cert.curves {
        let curve = build_curve(parse_xi(&c.xi)?, &w);
        let cone = profile_from_payload(c.cone.two_m, &c.cone.profile);
        let mut tc = TCurve::new(&curve, &w, c.alpha, c.cone.a, c.cone.b, c.mu_pullback, cone, c.two_m);
        tc.u = Some(LinePiece::new(decode_line(&c.u)?, profile_from_payload(c.two_m, &c.h)));
        tcurves.push(tc);
        wedge.push((c.wedge.inner, c.wedge.outer));
    }
    let mut t = TModel::new(w, &pi, &rho_t.sub(&pi), tcurves);
    t.c0 = cert.bump.h0_coeff;
    t.eps = cert.bump.eps;
    t.delta = cert.bump.delta;
    let z = ZModel {
        t,
        w,
        rho: PolyJet::new(&domain.full()),
        f: CompiledPoly::new(&f),
        k: cert.coordinate_change.k,
        radius: cert.radius,
        delta_exponent: cert.delta_exponent,
        wedge,
    };
    Ok((domain, z))
}

#[derive(Clone, Copy, Debug)]
pub struct BumpOptions {
    pub seed: u64,
    pub verify_samples: usize,
    pub tol: f64,
}

impl Default for BumpOptions {
    fn default() -> Self {
        BumpOptions { seed: 1, verify_samples: 4000, tol: 1e-10 }
    }
}

/// Hypersurface samples inside `B(0, r)` in `(w, z)` space.
pub fn hypersurface_points(model: &ZModel, n: usize, seed: u64, r: f64) -> Vec<([C64; 2], f64)> {
    let zs = z_ball_points(model, n, seed, r);
    let ys = sample(n, seed ^ 0xa11ce, |rng| (rng.gen::<f64>(), rng.gen_bool(0.25)));
    zs.into_iter()
        .zip(ys)
        .filter_map(|(z, (u, zero))| {
            let re_w = -model.rho.value(z);
            let room = r * r - sampling::norm(z).powi(2) - re_w * re_w;
            if room <= 0.0 {
                return None;
            }
            let y = if zero { 0.0 } else { (2.0 * u - 1.0) * room.sqrt() };
            Some((z, y))
        })
        .collect()
}

/// Points of `B(0, r)` in `z`, log-uniform in the radius, with a third drawn close to the curves.
pub fn z_ball_points(model: &ZModel, n: usize, seed: u64, r: f64) -> Vec<[C64; 2]> {
    let w = model.w;
    let tr = t_radius(&w, r);
    sample(n, seed, |rng| loop {
        let near = !model.t.curves.is_empty() && rng.gen::<f64>() < 0.34;
        let z = if near {
            let j = rng.gen_range(0..model.t.curves.len());
            let c = &model.t.curves[j];
            let ratio = sampling::log_uniform(rng, c.alpha * 1e-6, c.alpha / 10.0);
            let tl = crate::levi::wedge_point(&c.frame, ratio, rng);
            let rad = sampling::log_uniform(rng, tr * 1e-3, tr);
            to_z(&w, [tl[0] * rad, tl[1] * rad])
        } else {
            let u = sampling::unit_sphere(rng);
            sampling::scale(u, sampling::log_uniform(rng, r * 1e-4, r))
        };
        if sampling::norm(z) < r && z[0] != C64::new(0.0, 0.0) && z[1] != C64::new(0.0, 0.0) {
            return z;
        }
    })
}

/// Smallest `(value + tol * threshold)`-violation-free radius for a given `K`.
fn hypersurface_ok(model: &ZModel, n: usize, seed: u64, tol: f64) -> bool {
    use rayon::prelude::*;
    let pts = hypersurface_points(model, n, seed, model.radius);
    pts.par_iter().all(|(z, y)| {
        let (v, thr) = model.hypersurface(*z, *y);
        v < -tol * thr
    })
}

/// `K` from 1 upward and the largest dyadic radius that passes the hypersurface inequality.
pub fn choose_k(model: &mut ZModel, r_max: f64, seed: u64, tol: f64) -> Result<(f64, f64), PipelineError> {
    let mut k = 1.0;
    for _ in 0..6 {
        let mut r = 1.0f64;
        while r > 1.0 / (4.0 * k) || t_radius(&model.w, r) > r_max {
            r /= 2.0;
        }
        model.k = k;
        for _ in 0..30 {
            model.radius = r;
            if hypersurface_ok(model, 4000, seed, tol) {
                return Ok((k, r));
            }
            r /= 2.0;
        }
        k *= 2.0;
    }
    Err(PipelineError::NoAdmissibleK(k))
}

fn ratio_text(two_m: u32, nu: u32) -> String {
    rat(two_m as i64, nu as i64).to_string()
}

/// Full construction of a certificate for `domain`.
pub fn bump(domain: &ModelDomain, opts: &BumpOptions) -> Result<Certificate, PipelineError> {
    let w = domain.w;
    let analysis = analyze(domain, opts.seed)?;
    if analysis.classification.verdict == ClassVerdict::NotApplicable {
        return Err(PipelineError::NotApplicable { witness: analysis.classification.failure_witness });
    }
    for (c, inv) in analysis.curves.iter().zip(&analysis.invariants) {
        if !inv.order_ok {
            return Err(PipelineError::OrderCondition(xi_to_text(&c.xi)));
        }
    }
    let st = strip_domain(domain)?;
    let two_m: Vec<u32> = analysis.invariants.iter().map(|i| i.two_m).collect();
    let asm = assemble(&AssemblyInput {
        w,
        pi: &st.pi,
        rho_t: &st.rho_t,
        curves: &analysis.curves,
        two_m: &two_m,
        seed: opts.seed,
    })?;
    let delta_exponent = two_m.iter().cloned().chain([w.nu]).max().unwrap();
    let curves: Vec<CurvePayload> = analysis
        .curves
        .iter()
        .zip(&analysis.invariants)
        .zip(&asm.curves)
        .map(|((c, inv), b)| CurvePayload {
            xi: xi_to_text(&c.xi),
            omega0: crat_text(&c.omega0),
            lines: c.lines.len() as u32,
            mu: inv.mu,
            two_m: inv.two_m,
            two_m_over_nu: ratio_text(inv.two_m, w.nu),
            mu_pullback: b.cone.mu,
            alpha: b.alpha,
            wedge: WedgePayload { inner: b.alpha, outer: 2.0 * b.alpha },
            cone: ConePayload {
                a: b.cone.factor.a,
                b: b.cone.factor.b,
                two_m: b.cone.factor.two_m,
                mode: b.cone.mode,
                profile: profile_payload(&b.cone.profile, b.cone.radial.as_ref()),
                sigma: b.cone.sigma,
                c: b.cone.c,
                shell_constants: b.cone.shell_constants.iter().map(|(t, v)| [*t, *v]).collect(),
            },
            u: encode_line(&b.u),
            h: profile_payload(&b.h.profile, Some(&b.h)),
            decay: DecayPayload { r: b.decay.0, c: b.decay.1 },
        })
        .collect();
    let mut cert = Certificate {
        schema: SCHEMA.to_string(),
        domain: DomainPayload { text: domain.text.clone(), p: encode_poly(&domain.p), q: encode_poly(&domain.q) },
        weights: [w.m1, w.m2],
        classification: analysis.classification.verdict.to_string(),
        delta_exponent,
        curves,
        bump: BumpPayload {
            delta0: asm.delta0,
            delta: asm.model.delta,
            h0_coeff: asm.model.c0,
            eps: asm.model.eps,
            r0: asm.r0,
            outside_decay: DecayPayload { r: asm.outside_decay.0, c: asm.outside_decay.1 },
        },
        coordinate_change: CoordinatePayload { f: encode_poly(&st.f), k: 1.0 },
        radius: 0.0,
        margins: MarginsPayload::default(),
        seeds: SeedsPayload { construction: opts.seed, verification: opts.seed.wrapping_add(1000) },
        verification: None,
    };
    let (_, mut zm) = zmodel_from_certificate(&cert)?;
    let r_max = asm.curves.iter().map(|c| c.decay.0).chain([asm.r0, asm.outside_decay.0]).fold(f64::INFINITY, f64::min);
    let (k, r) = choose_k(&mut zm, r_max, opts.seed, opts.tol)?;
    cert.coordinate_change.k = k;
    cert.radius = r;
    let report = crate::verifier::verify_certificate(
        &cert,
        &crate::verifier::VerifyOptions { samples: opts.verify_samples, seed: cert.seeds.verification, tol: opts.tol },
    );
    cert.margins = report.margins();
    cert.verification = Some(report.summary());
    Ok(cert)
}

pub fn curve_from_payload(c: &CurvePayload, w: &WeightSignature) -> Result<ExceptionalCurve, PipelineError> {
    let curve = build_curve(parse_xi(&c.xi)?, w);
    let om = parse_crat(&c.omega0)?;
    if om != curve.omega0 {
        return Err(SchemaError::Field("omega0", format!("{} vs {}", c.omega0, crat_text(&curve.omega0))).into());
    }
    Ok(curve)
}

pub fn cone_mode_text(m: ConeMode) -> &'static str {
    match m {
        ConeMode::HGood => "HGOOD",
        ConeMode::HBad => "HBAD",
    }
}
