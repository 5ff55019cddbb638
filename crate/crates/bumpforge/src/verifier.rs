//! Independent re-verification of a bump certificate.

use std::time::Instant;

use num_complex::Complex64 as C64;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::assembler::{cone_line, line_terms, outside_points, sphere_with_lines, wedge_points, PSH_TOL};
use crate::cli_io::schema::{
    decode_line, encode_line, parse_xi, xi_to_text, Certificate, MarginsPayload, ProfilePayload, VerificationSummary,
};
use crate::conebump::{factor_bidegree, lowest_block, ConeMode};
use crate::exceptional::{curve_invariants, find_exceptional, separation_check, SeparationOptions};
use crate::fsbump::{circle_profile, verify_radial_bump, RadialBump};
use crate::jet::levi_eigs;
use crate::levi::{point_to_array, wedge_point};
use crate::pipeline::{
    curve_from_payload, hypersurface_points, profile_from_payload, roots, strip_domain, t_radius, to_z, validate_parts,
    zmodel_from_certificate, ModelDomain, ZModel,
};
use crate::polyalg::{restrict_to_curve, CRat, CurveXi, Rat};
use crate::sampling::{self, log_uniform, sample};

pub const IDENTITY_SAMPLES: usize = 1000;
const FD_POINTS: usize = 100;

#[derive(Clone, Copy, Debug)]
pub struct VerifyOptions {
    pub samples: usize,
    pub seed: u64,
    pub tol: f64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { samples: 20_000, seed: 1, tol: 1e-10 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    /// Smallest slack found; negative when the check fails.
    pub margin: f64,
    pub witness: Option<[f64; 4]>,
    pub detail: String,
    pub samples: usize,
}

impl CheckResult {
    fn structural(name: &str, failures: Vec<String>) -> Self {
        CheckResult {
            name: name.into(),
            passed: failures.is_empty(),
            margin: if failures.is_empty() { 0.0 } else { -1.0 },
            witness: None,
            detail: failures.join("; "),
            samples: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub passed: bool,
    pub not_applicable: bool,
    pub checks: Vec<CheckResult>,
    pub seed: u64,
    pub samples: usize,
    pub seconds: f64,
    pub levi_negative: usize,
    pub hypersurface_violations: usize,
    pub identity_violations: usize,
    pub decay_violations: usize,
}

impl VerificationReport {
    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn margins(&self) -> MarginsPayload {
        let m = |n: &str| self.check(n).map_or(f64::NAN, |c| c.margin);
        MarginsPayload { psh: m("psh"), hypersurface: m("hypersurface"), decay: m("decay") }
    }

    pub fn summary(&self) -> VerificationSummary {
        VerificationSummary { passed: self.passed, samples: self.samples, seed: self.seed }
    }

    pub fn failed(&self) -> Vec<&str> {
        self.checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect()
    }
}

fn fail_report(opts: &VerifyOptions, start: Instant, name: &str, detail: String) -> VerificationReport {
    VerificationReport {
        passed: false,
        not_applicable: false,
        checks: vec![CheckResult::structural(name, vec![detail])],
        seed: opts.seed,
        samples: 0,
        seconds: start.elapsed().as_secs_f64(),
        levi_negative: 0,
        hypersurface_violations: 0,
        identity_violations: 0,
        decay_violations: 0,
    }
}

/// Run every check on `cert`.
pub fn verify_certificate(cert: &Certificate, opts: &VerifyOptions) -> VerificationReport {
    let start = Instant::now();
    if cert.classification == "NOT_APPLICABLE" {
        let mut r = fail_report(opts, start, "classification", "certificate is NOT_APPLICABLE".into());
        r.not_applicable = true;
        return r;
    }
    let (domain, model) = match zmodel_from_certificate(cert) {
        Ok(x) => x,
        Err(e) => return fail_report(opts, start, "decode", e.to_string()),
    };
    let mut checks = vec![check_domain(cert, &domain), check_curves(cert, &domain, opts.seed)];
    let (psh, negatives) = check_psh(&model, opts);
    checks.push(psh);
    let (ident, ident_bad) = check_identities(&model, opts);
    checks.push(ident);
    checks.push(check_parameters(cert, &model));
    checks.push(check_ambient(&model, opts));
    let (hyp, hyp_bad) = check_hypersurface(&model, opts);
    checks.push(hyp);
    let (dec, dec_bad) = check_decay(cert, &model, opts);
    checks.push(dec);
    checks.push(check_jets(&model, opts.seed));
    VerificationReport {
        passed: checks.iter().all(|c| c.passed),
        not_applicable: false,
        checks,
        seed: opts.seed,
        samples: opts.samples,
        seconds: start.elapsed().as_secs_f64(),
        levi_negative: negatives,
        hypersurface_violations: hyp_bad,
        identity_violations: ident_bad,
        decay_violations: dec_bad,
    }
}

fn check_domain(cert: &Certificate, domain: &ModelDomain) -> CheckResult {
    let mut bad = Vec::new();
    if let Err(e) = validate_parts(&domain.text, domain.p.clone(), domain.q.clone(), domain.w) {
        bad.push(format!("domain: {e}"));
    }
    match strip_domain(domain) {
        Ok(st) => match crate::cli_io::schema::decode_poly(&cert.coordinate_change.f) {
            Ok(f) if f == st.f => {}
            Ok(_) => bad.push("coordinate change differs from the recomputed one".into()),
            Err(e) => bad.push(e.to_string()),
        },
        Err(e) => bad.push(e.to_string()),
    }
    CheckResult::structural("domain", bad)
}

fn profile_sign_ok(p: &ProfilePayload) -> bool {
    match p {
        ProfilePayload::Constant { value } => *value > 0.0 && *value <= 1.0,
        ProfilePayload::Spline { values, .. } => values.iter().all(|v| *v > 0.0 && *v <= 1.0),
    }
}

fn radial_ok(u: &crate::polyalg::LinePoly, degree: u32, p: &ProfilePayload) -> Result<(), String> {
    let circle = circle_profile(u, degree).map_err(|e| e.to_string())?;
    let (c1, c2, sigma, zeros) = match p {
        ProfilePayload::Constant { value } => {
            let limit = circle.gamma / (2.0 * (degree as f64).powi(2));
            if !circle.zeros.is_empty() || !(*value > 0.0) || *value > limit * (1.0 + 1e-9) {
                return Err(format!("constant profile {value} outside (0, {limit}]"));
            }
            return Ok(());
        }
        ProfilePayload::Spline { c1, c2, sigma, zeros, .. } => (*c1, *c2, *sigma, zeros.clone()),
    };
    let bump = RadialBump { profile: profile_from_payload(degree, p), c1, c2, sigma, zeros, caps: None };
    let rep = verify_radial_bump(&circle, &bump);
    if rep.passed() {
        Ok(())
    } else {
        Err(format!("radial profile fails: {rep:?}"))
    }
}

fn check_curves(cert: &Certificate, domain: &ModelDomain, seed: u64) -> CheckResult {
    let w = domain.w;
    let mut bad = Vec::new();
    let found = match find_exceptional(&domain.p, &w) {
        Ok(c) => c,
        Err(e) => return CheckResult::structural("curves", vec![e.to_string()]),
    };
    let mut claimed: Vec<String> = cert.curves.iter().map(|c| c.xi.clone()).collect();
    let mut actual: Vec<String> = found.iter().map(|c| xi_to_text(&c.xi)).collect();
    claimed.sort();
    actual.sort();
    if claimed != actual {
        bad.push(format!("curve set {claimed:?} differs from {actual:?}"));
    }
    let class = separation_check(&domain.p, &w, &found, &SeparationOptions::default());
    if class.verdict.to_string() != cert.classification {
        bad.push(format!("classification {} differs from {}", cert.classification, class.verdict));
    }
    let st = strip_domain(domain).ok();
    let mut delta_exponent = w.nu;
    for c in &cert.curves {
        let curve = match curve_from_payload(c, &w) {
            Ok(x) => x,
            Err(e) => {
                bad.push(format!("{}: {e}", c.xi));
                continue;
            }
        };
        if !restrict_to_curve(&domain.p, &w, &curve.xi).is_harmonic() {
            bad.push(format!("{}: P is not harmonic on the curve", c.xi));
            continue;
        }
        match curve_invariants(&domain.p, &domain.q, &w, &curve, seed) {
            Ok(inv) => {
                if inv.mu != c.mu || inv.two_m != c.two_m || !inv.order_ok {
                    bad.push(format!(
                        "{}: invariants (mu {}, 2M {}) recomputed as ({}, {})",
                        c.xi, c.mu, c.two_m, inv.mu, inv.two_m
                    ));
                }
            }
            Err(e) => bad.push(format!("{}: {e}", c.xi)),
        }
        delta_exponent = delta_exponent.max(c.two_m);
        if c.lines as usize != curve.lines.len() {
            bad.push(format!("{}: line count", c.xi));
        }
        let pi = crate::polyalg::pullback(&domain.p, &w);
        let (line, exact) = cone_line(&curve, &w);
        let mut pf = line.in_frame(&pi);
        if !exact {
            pf = pf.chop(1e-9);
        }
        match lowest_block(&pf).and_then(|(mu, q)| Ok((mu, factor_bidegree(&q)?))) {
            Ok((mu, f)) => {
                if mu != c.mu_pullback || f.a != c.cone.a || f.b != c.cone.b || f.two_m != c.cone.two_m {
                    bad.push(format!("{}: cone data differs from the lowest block", c.xi));
                } else {
                    let mode_ok = matches!(
                        (&c.cone.mode, &c.cone.profile),
                        (ConeMode::HGood, ProfilePayload::Constant { .. })
                            | (ConeMode::HBad, ProfilePayload::Spline { .. })
                    );
                    let r = if !mode_ok {
                        Err("cone mode and profile disagree".to_string())
                    } else {
                        cone_profile_ok(&f.u, f.two_m, &c.cone.profile)
                    };
                    if let Err(e) = r {
                        bad.push(format!("{}: cone {e}", c.xi));
                    }
                }
            }
            Err(e) => bad.push(format!("{}: {e}", c.xi)),
        }
        if !(c.alpha > 0.0) || !(c.cone.sigma > 0.0) || c.alpha > c.cone.sigma / 2.0 * (1.0 + 1e-12) {
            bad.push(format!("{}: aperture {} exceeds half the cone aperture {}", c.xi, c.alpha, c.cone.sigma));
        }
        if let Some(st) = &st {
            let u = line_terms(&st.rho_t, &curve, &w, c.two_m);
            match decode_line(&c.u) {
                Ok(stored) if encode_line(&stored) == encode_line(&u) => {}
                Ok(_) => bad.push(format!("{}: line polynomial differs from the recomputed one", c.xi)),
                Err(e) => bad.push(e.to_string()),
            }
            if !profile_sign_ok(&c.h) {
                bad.push(format!("{}: line profile leaves (0, 1]", c.xi));
            } else if let Err(e) = radial_ok(&u, c.two_m, &c.h) {
                bad.push(format!("{}: line {e}", c.xi));
            }
        }
    }
    if delta_exponent != cert.delta_exponent {
        bad.push(format!("contact exponent {} should be {}", cert.delta_exponent, delta_exponent));
    }
    CheckResult::structural("curves", bad)
}

fn cone_profile_ok(u: &crate::polyalg::LinePoly, two_m: u32, p: &ProfilePayload) -> Result<(), String> {
    match p {
        ProfilePayload::Constant { value } => {
            let circle = circle_profile(u, two_m).map_err(|e| e.to_string())?;
            let m = two_m as f64 / 2.0;
            let limit = circle.gamma / 4.0 / (2.0 * m * m);
            if !circle.zeros.is_empty() || !(*value > 0.0) || *value > limit * (1.0 + 1e-9) {
                return Err(format!("constant {value} outside (0, {limit}]"));
            }
            Ok(())
        }
        ProfilePayload::Spline { .. } if !profile_sign_ok(p) => Err("profile leaves (0, 1]".into()),
        _ => radial_ok(u, two_m, p),
    }
}

fn near_curve_point(model: &ZModel, rng: &mut rand_chacha::ChaCha8Rng, ratio_max: f64, tr: f64) -> [C64; 2] {
    let j = rng.gen_range(0..model.t.curves.len());
    let c = &model.t.curves[j];
    let ratio = log_uniform(rng, ratio_max * 1e-6, ratio_max);
    let tl = wedge_point(&c.frame, ratio, rng);
    let rad = log_uniform(rng, tr * 1e-3, tr * 0.999);
    to_z(&model.w, [tl[0] * rad, tl[1] * rad])
}

fn psh_points(model: &ZModel, n: usize, seed: u64) -> Vec<[C64; 2]> {
    let r = model.radius;
    let tr = t_radius(&model.w, r);
    let has_curves = !model.t.curves.is_empty();
    sample(n, seed, |rng| loop {
        let z = if has_curves && rng.gen::<f64>() < 0.3 {
            let a = model.t.curves.iter().map(|c| c.alpha).fold(f64::INFINITY, f64::min);
            near_curve_point(model, rng, a / 10.0, tr)
        } else {
            sampling::scale(sampling::unit_sphere(rng), log_uniform(rng, r * 1e-4, r))
        };
        if sampling::norm(z) < r && z[0].norm() > 0.0 && z[1].norm() > 0.0 {
            return z;
        }
    })
}

fn check_psh(model: &ZModel, opts: &VerifyOptions) -> (CheckResult, usize) {
    let pts = psh_points(model, opts.samples, opts.seed);
    let vals: Vec<(f64, [C64; 2])> = pts
        .par_iter()
        .map(|z| {
            let j = model.g_jet(*z);
            let f = j.frob().max(f64::MIN_POSITIVE);
            (levi_eigs(&j.m).0 / f, *z)
        })
        .collect();
    let bad = vals.iter().filter(|(l, _)| !(*l >= -opts.tol)).count();
    let worst = vals.iter().cloned().fold((f64::INFINITY, [C64::new(0.0, 0.0); 2]), |a, b| {
        if b.0 < a.0 || b.0.is_nan() {
            b
        } else {
            a
        }
    });
    (
        CheckResult {
            name: "psh".into(),
            passed: bad == 0,
            margin: worst.0 + opts.tol,
            witness: (bad > 0).then(|| point_to_array(worst.1)),
            detail: format!("{bad} Levi-negative samples; min scaled eigenvalue {:.3e}", worst.0),
            samples: pts.len(),
        },
        bad,
    )
}

fn check_identities(model: &ZModel, opts: &VerifyOptions) -> (CheckResult, usize) {
    let tr = t_radius(&model.w, model.radius);
    let n = IDENTITY_SAMPLES;
    let mut pts: Vec<([C64; 2], Option<usize>)> = Vec::new();
    for (j, (inner, _)) in model.wedge.iter().enumerate() {
        let c = &model.t.curves[j];
        let inner = *inner;
        let zs = sample(n, opts.seed ^ (0x1de + j as u64), |rng| {
            let ratio = log_uniform(rng, inner * 1e-3, inner);
            let tl = wedge_point(&c.frame, ratio, rng);
            let k = rng.gen_range(0..c.rotations.len());
            let rot = c.rotations[k];
            let rad = log_uniform(rng, tr * 1e-3, tr * 0.999);
            to_z(&model.w, [tl[0] / rot[0] * rad, tl[1] / rot[1] * rad])
        });
        pts.extend(zs.into_iter().filter(|z| model.wedge_of(*z, false) == Some(j)).map(|z| (z, Some(j))));
    }
    let outer_min = model.wedge.iter().map(|w| w.1).fold(f64::INFINITY, f64::min);
    let off = sample(n, opts.seed ^ 0x0ff, |rng| {
        if !model.t.curves.is_empty() && rng.gen_bool(0.5) {
            let j = rng.gen_range(0..model.t.curves.len());
            let c = &model.t.curves[j];
            let ratio = log_uniform(rng, model.wedge[j].1, (20.0 * model.wedge[j].1).max(1.0));
            let tl = wedge_point(&c.frame, ratio, rng);
            let rad = log_uniform(rng, tr * 1e-3, tr * 0.999);
            to_z(&model.w, [tl[0] * rad, tl[1] * rad])
        } else {
            sampling::scale(sampling::unit_sphere(rng), log_uniform(rng, model.radius * 1e-3, model.radius))
        }
    });
    let _ = outer_min;
    pts.extend(off.into_iter().filter(|z| model.wedge_of(*z, true).is_none()).map(|z| (z, None)));
    let errs: Vec<(f64, [C64; 2])> = pts
        .par_iter()
        .map(|(z, j)| {
            let g = model.g(*z);
            let p = model.p_value(*z);
            let h = model.h0(*z);
            let v = j.map_or(0.0, |j| model.v(j, *z));
            let scale = p.abs() + h.abs() + v.abs() + f64::MIN_POSITIVE;
            ((g - (p - h + v)).abs() / scale, *z)
        })
        .collect();
    let tol = 1e-9;
    let bad = errs.iter().filter(|(e, _)| !(*e <= tol)).count();
    let worst = errs.iter().cloned().fold((0.0, [C64::new(0.0, 0.0); 2]), |a, b| if !(b.0 <= a.0) { b } else { a });
    (
        CheckResult {
            name: "identities".into(),
            passed: bad == 0 && !pts.is_empty(),
            margin: tol - worst.0,
            witness: (bad > 0).then(|| point_to_array(worst.1)),
            detail: format!(
                "{bad} of {} samples off the wedge identities; worst relative error {:.3e}",
                pts.len(),
                worst.0
            ),
            samples: pts.len(),
        },
        bad,
    )
}

fn check_parameters(cert: &Certificate, model: &ZModel) -> CheckResult {
    let mut bad = Vec::new();
    let b = &cert.bump;
    let k = cert.coordinate_change.k;
    if !(k > 0.0) {
        bad.push(format!("K = {k} is not positive"));
    }
    if !(cert.radius > 0.0) || cert.radius > 1.0 / (4.0 * k.abs().max(f64::MIN_POSITIVE)) {
        bad.push(format!("R = {} exceeds 1/(4K)", cert.radius));
    }
    let tr = t_radius(&model.w, cert.radius);
    let mut limit = b.r0.min(b.outside_decay.r);
    for c in &cert.curves {
        limit = limit.min(c.decay.r);
    }
    if tr > limit * (1.0 + 1e-12) {
        bad.push(format!("R = {} reaches past the verified radius {limit}", cert.radius));
    }
    if !(b.delta > 0.0) || b.delta > b.delta0 / 2.0 * (1.0 + 1e-12) {
        bad.push(format!("delta = {} not in (0, delta0/2]", b.delta));
    }
    if !(b.h0_coeff > 0.0) || b.eps < 0.0 {
        bad.push("ambient coefficients".into());
    }
    for c in &cert.curves {
        if !(c.wedge.inner > 0.0 && c.wedge.inner < c.wedge.outer) {
            bad.push(format!("{}: wedge apertures", c.xi));
        }
    }
    CheckResult::structural("parameters", bad)
}

/// `Pi - c0 B - eps E` keeps an eighth of the Levi form of `Pi` on the unit sphere.
fn check_ambient(model: &ZModel, opts: &VerifyOptions) -> CheckResult {
    let t = &model.t;
    let pts = sphere_with_lines(&t.curves, (opts.samples / 4).max(2000), opts.seed ^ 0xab, 2.0);
    let vals: Vec<(f64, [C64; 2])> = pts
        .par_iter()
        .map(|p| {
            let parts = t.parts(*p);
            let j = parts.pi.sub(&parts.b.scale(t.c0).add(&parts.e.scale(t.eps)));
            let base = levi_eigs(&parts.pi.m).0;
            ((levi_eigs(&j.m).0 - 0.125 * base) / j.frob().max(f64::MIN_POSITIVE), *p)
        })
        .collect();
    let bad = vals.iter().filter(|(m, _)| !(*m >= -PSH_TOL)).count();
    let worst = vals.iter().cloned().fold((f64::INFINITY, [C64::new(0.0, 0.0); 2]), |a, b| {
        if b.0 < a.0 || b.0.is_nan() {
            b
        } else {
            a
        }
    });
    CheckResult {
        name: "ambient".into(),
        passed: bad == 0,
        margin: worst.0 + PSH_TOL,
        witness: (bad > 0).then(|| point_to_array(worst.1)),
        detail: format!("{bad} sphere samples where the ambient term takes more than seven eighths of the Levi form"),
        samples: pts.len(),
    }
}

fn check_hypersurface(model: &ZModel, opts: &VerifyOptions) -> (CheckResult, usize) {
    let pts = hypersurface_points(model, opts.samples, opts.seed ^ 0x4ee, model.radius);
    let vals: Vec<(f64, [C64; 2])> = pts
        .par_iter()
        .map(|(z, y)| {
            let (v, thr) = model.hypersurface(*z, *y);
            (-v / thr.max(f64::MIN_POSITIVE) - opts.tol, *z)
        })
        .collect();
    let bad = vals.iter().filter(|(m, _)| !(*m > 0.0)).count();
    let worst = vals.iter().cloned().fold((f64::INFINITY, [C64::new(0.0, 0.0); 2]), |a, b| {
        if b.0 < a.0 || b.0.is_nan() {
            b
        } else {
            a
        }
    });
    (
        CheckResult {
            name: "hypersurface".into(),
            passed: bad == 0 && !pts.is_empty(),
            margin: worst.0,
            witness: (bad > 0).then(|| point_to_array(worst.1)),
            detail: format!("{bad} hypersurface violations in {} samples", pts.len()),
            samples: pts.len(),
        },
        bad,
    )
}

/// Smallest observed `gap / (delta D)` over inner-wedge samples of curve `j`.
pub fn decay_ratio(model: &ZModel, j: usize, n: usize, seed: u64, r: f64) -> (f64, [C64; 2]) {
    let t = &model.t;
    let pts = wedge_points(t, j, n, seed, r);
    crate::assembler::min_ratio(&pts, |p| {
        let (k, _) = t.curves[j].nearest(p);
        t.gap(p) / (t.delta * t.curves[j].decay_weight(t.nu, k, p))
    })
}

fn check_decay(cert: &Certificate, model: &ZModel, opts: &VerifyOptions) -> (CheckResult, usize) {
    let n = opts.samples.clamp(1000, 10_000);
    let t = &model.t;
    let mut bad = 0usize;
    let mut margin = f64::INFINITY;
    let mut witness = None;
    let mut detail = Vec::new();
    let mut total = 0;
    for (j, c) in cert.curves.iter().enumerate() {
        let pts = wedge_points(t, j, n, opts.seed ^ (0xdec + j as u64), c.decay.r);
        total += pts.len();
        let ratios: Vec<f64> = pts
            .par_iter()
            .map(|p| {
                let (k, _) = t.curves[j].nearest(*p);
                t.gap(*p) / (t.delta * t.curves[j].decay_weight(t.nu, k, *p))
            })
            .collect();
        let (m, i) =
            ratios.iter().enumerate().fold(
                (f64::INFINITY, 0),
                |a, (i, v)| {
                    if *v < a.0 || v.is_nan() {
                        (*v, i)
                    } else {
                        a
                    }
                },
            );
        bad += ratios.iter().filter(|v| !(**v >= c.decay.c)).count();
        let slack = m / c.decay.c - 1.0;
        if slack < margin || slack.is_nan() {
            margin = slack;
            witness = pts.get(i).map(|p| point_to_array(*p));
        }
        detail.push(format!("{}: inf {:.4e} vs C {:.4e}", c.xi, m, c.decay.c));
    }
    let od = &cert.bump.outside_decay;
    let pts = outside_points(t, n, opts.seed ^ 0x0d, od.r);
    total += pts.len();
    let nu = t.nu as i32;
    let ratios: Vec<f64> = pts.par_iter().map(|p| t.gap(*p) / (t.delta * sampling::norm(*p).powi(nu))).collect();
    let m = ratios.iter().cloned().fold(f64::INFINITY, |a, v| if v < a || v.is_nan() { v } else { a });
    bad += ratios.iter().filter(|v| !(**v >= od.c)).count();
    let slack = if od.c > 0.0 { m / od.c - 1.0 } else { -1.0 };
    if slack < margin || slack.is_nan() {
        margin = slack;
    }
    detail.push(format!("outside: inf {:.4e} vs C {:.4e}", m, od.c));
    let positive = cert.curves.iter().all(|c| c.decay.c > 0.0) && od.c > 0.0;
    (
        CheckResult {
            name: "decay".into(),
            passed: bad == 0 && positive,
            margin,
            witness: if bad > 0 { witness } else { None },
            detail: format!("{bad} violations; {}", detail.join("; ")),
            samples: total,
        },
        bad,
    )
}

/// Relative error between the analytic Levi matrix of `G` and Richardson-extrapolated central differences.
pub fn fd_levi_error(model: &ZModel, z: [C64; 2]) -> f64 {
    let j = model.g_jet(z);
    let h = 2e-3 * sampling::norm(z);
    let coarse = fd_levi(|p| model.g(p), z, h);
    let fine = fd_levi(|p| model.g(p), z, h / 2.0);
    let mut fd = fine;
    for a in 0..2 {
        for b in 0..2 {
            fd[a][b] = (fine[a][b] * 4.0 - coarse[a][b]) / 3.0;
        }
    }
    let mut err: f64 = 0.0;
    for a in 0..2 {
        for b in 0..2 {
            err = err.max((j.m[a][b] - fd[a][b]).norm());
        }
    }
    err / j.frob().max(f64::MIN_POSITIVE)
}

/// Wirtinger Levi matrix of `f` by central differences with step `h`.
pub fn fd_levi(f: impl Fn([C64; 2]) -> f64, z: [C64; 2], h: f64) -> [[C64; 2]; 2] {
    let dirs = [
        [C64::new(1.0, 0.0), C64::new(0.0, 0.0)],
        [C64::new(0.0, 1.0), C64::new(0.0, 0.0)],
        [C64::new(0.0, 0.0), C64::new(1.0, 0.0)],
        [C64::new(0.0, 0.0), C64::new(0.0, 1.0)],
    ];
    let at =
        |u: &[C64; 2], su: f64, v: &[C64; 2], sv: f64| f([z[0] + u[0] * su + v[0] * sv, z[1] + u[1] * su + v[1] * sv]);
    let f0 = f(z);
    let mut hess = [[0.0; 4]; 4];
    for a in 0..4 {
        for b in a..4 {
            let d = if a == b {
                (at(&dirs[a], h, &dirs[a], 0.0) - 2.0 * f0 + at(&dirs[a], -h, &dirs[a], 0.0)) / (h * h)
            } else {
                (at(&dirs[a], h, &dirs[b], h) - at(&dirs[a], h, &dirs[b], -h) - at(&dirs[a], -h, &dirs[b], h)
                    + at(&dirs[a], -h, &dirs[b], -h))
                    / (4.0 * h * h)
            };
            hess[a][b] = d;
            hess[b][a] = d;
        }
    }
    // indices: x1, y1, x2, y2
    let m11 = 0.25 * (hess[0][0] + hess[1][1]);
    let m22 = 0.25 * (hess[2][2] + hess[3][3]);
    let m12 = C64::new(0.25 * (hess[0][2] + hess[1][3]), 0.25 * (hess[0][3] - hess[1][2]));
    [[C64::new(m11, 0.0), m12], [m12.conj(), C64::new(m22, 0.0)]]
}

fn check_jets(model: &ZModel, seed: u64) -> CheckResult {
    let pts = psh_points(model, FD_POINTS, seed ^ 0xfd);
    let splines = model.t.curves.iter().any(|c| {
        matches!(c.cone.h, crate::fsbump::Profile::Spline(_))
            || c.u.as_ref().is_some_and(|u| matches!(u.h.h, crate::fsbump::Profile::Spline(_)))
    });
    let tol = if splines { 1e-4 } else { 1e-6 };
    // keep clear of the branch locus and of cutoff transitions, where differences are meaningless
    let usable: Vec<[C64; 2]> = pts
        .into_iter()
        .filter(|z| {
            let n = sampling::norm(*z);
            z[0].norm() > 0.05 * n && z[1].norm() > 0.05 * n
        })
        .collect();
    let errs: Vec<(f64, [C64; 2])> = usable.par_iter().map(|z| (fd_levi_error(model, *z), *z)).collect();
    let worst = errs.iter().cloned().fold((0.0, [C64::new(0.0, 0.0); 2]), |a, b| if !(b.0 <= a.0) { b } else { a });
    CheckResult {
        name: "jets".into(),
        passed: worst.0 <= tol,
        margin: tol - worst.0,
        witness: (worst.0 > tol).then(|| point_to_array(worst.1)),
        detail: format!("worst relative Levi error {:.3e} (tolerance {tol:.0e})", worst.0),
        samples: usable.len(),
    }
}

/// Named certificate corruptions that a sound verifier must reject.
pub fn mutations() -> Vec<(&'static str, fn(&mut Certificate))> {
    fn scale_profile(p: &mut ProfilePayload, s: f64) {
        match p {
            ProfilePayload::Constant { value } => *value *= s,
            ProfilePayload::Spline { values, .. } => values.iter_mut().for_each(|v| *v *= s),
        }
    }
    vec![
        ("line profile sign flip", |c| c.curves.iter_mut().for_each(|k| scale_profile(&mut k.h, -1.0))),
        ("line polynomial sign flip", |c| {
            for k in &mut c.curves {
                if let Ok(u) = decode_line(&k.u) {
                    let mut neg = crate::polyalg::LinePoly::default();
                    for (e, v) in &u.terms {
                        neg.add_term(*e, -v.clone());
                    }
                    k.u = encode_line(&neg);
                }
            }
        }),
        ("radius x10", |c| c.radius *= 10.0),
        ("delta x100", |c| c.bump.delta *= 100.0),
        ("decay constant x10", |c| c.curves.iter_mut().for_each(|k| k.decay.c *= 10.0)),
        ("outside decay constant x10", |c| c.bump.outside_decay.c *= 10.0),
        ("inner wedge x3", |c| c.curves.iter_mut().for_each(|k| k.wedge.inner *= 3.0)),
        ("outer wedge /3", |c| c.curves.iter_mut().for_each(|k| k.wedge.outer /= 3.0)),
        ("cone profile x1000", |c| c.curves.iter_mut().for_each(|k| scale_profile(&mut k.cone.profile, 1000.0))),
        ("ambient coefficient x1000", |c| c.bump.h0_coeff *= 1000.0),
        ("K sign flip", |c| c.coordinate_change.k = -c.coordinate_change.k),
        ("curve shift", |c| {
            for k in &mut c.curves {
                k.xi = match parse_xi(&k.xi) {
                    Ok(CurveXi::Infinity) => "1/3".into(),
                    Ok(CurveXi::Finite(x)) => {
                        let third = CRat::real(Rat::new(1.into(), 3.into()));
                        xi_to_text(&CurveXi::Finite(&x + &third))
                    }
                    Err(_) => k.xi.clone(),
                };
            }
        }),
    ]
}

/// Evaluate the model at the preimages of `z` (debug helper).
pub fn branch_values(model: &ZModel, z: [C64; 2]) -> Vec<f64> {
    roots(&model.w, z).iter().map(|(t, _)| model.t.g_jet(*t).v).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fd_levi_quadratic() {
        // |z1|^2 + 3|z2|^2 + 2 Re(z1 conj z2)
        let f = |z: [C64; 2]| z[0].norm_sqr() + 3.0 * z[1].norm_sqr() + 2.0 * (z[0] * z[1].conj()).re;
        let m = fd_levi(f, [C64::new(0.2, 0.1), C64::new(-0.3, 0.4)], 1e-3);
        assert!((m[0][0].re - 1.0).abs() < 1e-6);
        assert!((m[1][1].re - 3.0).abs() < 1e-6);
        assert!((m[0][1] - C64::new(1.0, 0.0)).norm() < 1e-6);
        // Im part: Re(i z1 conj z2) has d2/dz1 dconj(z2) = i/2
        let g = |z: [C64; 2]| (C64::new(0.0, 1.0) * z[0] * z[1].conj()).re;
        let m = fd_levi(g, [C64::new(0.2, 0.1), C64::new(-0.3, 0.4)], 1e-3);
        assert!((m[0][1] - C64::new(0.0, 0.5)).norm() < 1e-6);
    }

    #[test]
    fn mutation_count() {
        assert_eq!(mutations().len(), 12);
    }
}
