//! JSON certificate format `bumpforge-cert/1`.

use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::conebump::ConeMode;
use crate::polyalg::{CRat, CurveXi, LinePoly, MixedPolynomial, Rat};

pub const SCHEMA: &str = "bumpforge-cert/1";

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SchemaError {
    #[error("unsupported schema {0:?}")]
    Version(String),
    #[error("malformed JSON: {0}")]
    Json(String),
    #[error("bad integer {0:?}")]
    Int(String),
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("bad complex rational {0:?}")]
    Complex(String),
    #[error("field {0} is inconsistent: {1}")]
    Field(&'static str, String),
}

/// Integer that falls back to a decimal string when it does not fit in `i64`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum JsonInt {
    Small(i64),
    Big(String),
}

impl JsonInt {
    pub fn from_big(b: &BigInt) -> Self {
        match b.to_i64() {
            Some(v) => JsonInt::Small(v),
            None => JsonInt::Big(b.to_string()),
        }
    }

    pub fn to_big(&self) -> Result<BigInt, SchemaError> {
        match self {
            JsonInt::Small(v) => Ok(BigInt::from(*v)),
            JsonInt::Big(s) => BigInt::from_str(s).map_err(|_| SchemaError::Int(s.clone())),
        }
    }

    fn exponent(&self) -> Result<u32, SchemaError> {
        match self {
            JsonInt::Small(v) if *v >= 0 && *v <= u32::MAX as i64 => Ok(*v as u32),
            other => Err(SchemaError::Int(format!("{other:?}"))),
        }
    }
}

/// `[a1, b1, a2, b2, re_num, re_den, im_num, im_den]`.
pub type TermRow = [JsonInt; 8];

fn rat_parts(r: &Rat) -> (JsonInt, JsonInt) {
    (JsonInt::from_big(r.numer()), JsonInt::from_big(r.denom()))
}

fn make_rat(n: &JsonInt, d: &JsonInt) -> Result<Rat, SchemaError> {
    let d = d.to_big()?;
    if d.is_zero() {
        return Err(SchemaError::ZeroDenominator);
    }
    Ok(Rat::new(n.to_big()?, d))
}

pub fn encode_poly(p: &MixedPolynomial) -> Vec<TermRow> {
    p.terms()
        .map(|(e, c)| {
            let (rn, rd) = rat_parts(&c.re);
            let (im, id) = rat_parts(&c.im);
            [
                JsonInt::Small(e[0] as i64),
                JsonInt::Small(e[1] as i64),
                JsonInt::Small(e[2] as i64),
                JsonInt::Small(e[3] as i64),
                rn,
                rd,
                im,
                id,
            ]
        })
        .collect()
}

pub fn decode_poly(rows: &[TermRow]) -> Result<MixedPolynomial, SchemaError> {
    let mut p = MixedPolynomial::zero();
    for r in rows {
        let e = [r[0].exponent()?, r[1].exponent()?, r[2].exponent()?, r[3].exponent()?];
        p.add_term(e, CRat::new(make_rat(&r[4], &r[5])?, make_rat(&r[6], &r[7])?));
    }
    Ok(p)
}

pub fn encode_line(u: &LinePoly) -> Vec<TermRow> {
    encode_poly(&u.to_mixed())
}

pub fn decode_line(rows: &[TermRow]) -> Result<LinePoly, SchemaError> {
    let p = decode_poly(rows)?;
    if p.terms().any(|(e, _)| e[2] != 0 || e[3] != 0) {
        return Err(SchemaError::Field("u", "line polynomial uses the second slot".into()));
    }
    Ok(LinePoly::from_mixed_z1(&p))
}

/// `"re"` or `"re,im"` with rationals written `n/d`.
pub fn crat_text(c: &CRat) -> String {
    if c.im.is_zero() {
        c.re.to_string()
    } else {
        format!("{},{}", c.re, c.im)
    }
}

pub fn parse_crat(s: &str) -> Result<CRat, SchemaError> {
    let bad = || SchemaError::Complex(s.to_string());
    let mut it = s.split(',');
    let re = Rat::from_str(it.next().ok_or_else(bad)?.trim()).map_err(|_| bad())?;
    let im = match it.next() {
        Some(t) => Rat::from_str(t.trim()).map_err(|_| bad())?,
        None => Rat::zero(),
    };
    if it.next().is_some() {
        return Err(bad());
    }
    Ok(CRat::new(re, im))
}

pub fn xi_to_text(x: &CurveXi) -> String {
    match x {
        CurveXi::Infinity => "inf".into(),
        CurveXi::Finite(c) => crat_text(c),
    }
}

pub fn parse_xi(s: &str) -> Result<CurveXi, SchemaError> {
    if s.trim() == "inf" {
        Ok(CurveXi::Infinity)
    } else {
        Ok(CurveXi::Finite(parse_crat(s)?))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ProfilePayload {
    Constant { value: f64 },
    Spline { values: Vec<f64>, c1: f64, c2: f64, sigma: f64, zeros: Vec<f64> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DomainPayload {
    pub text: String,
    pub p: Vec<TermRow>,
    pub q: Vec<TermRow>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WedgePayload {
    pub inner: f64,
    pub outer: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConePayload {
    pub a: u32,
    pub b: u32,
    pub two_m: u32,
    pub mode: ConeMode,
    pub profile: ProfilePayload,
    pub sigma: f64,
    pub c: f64,
    pub shell_constants: Vec<[f64; 2]>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecayPayload {
    pub r: f64,
    pub c: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurvePayload {
    pub xi: String,
    pub omega0: String,
    pub lines: u32,
    pub mu: u32,
    pub two_m: u32,
    pub two_m_over_nu: String,
    pub mu_pullback: u32,
    pub alpha: f64,
    pub wedge: WedgePayload,
    pub cone: ConePayload,
    pub u: Vec<TermRow>,
    pub h: ProfilePayload,
    pub decay: DecayPayload,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BumpPayload {
    pub delta0: f64,
    pub delta: f64,
    pub h0_coeff: f64,
    pub eps: f64,
    pub r0: f64,
    pub outside_decay: DecayPayload,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoordinatePayload {
    pub f: Vec<TermRow>,
    pub k: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct MarginsPayload {
    pub psh: f64,
    pub hypersurface: f64,
    pub decay: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeedsPayload {
    pub construction: u64,
    pub verification: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationSummary {
    pub passed: bool,
    pub samples: usize,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub schema: String,
    pub domain: DomainPayload,
    pub weights: [u32; 2],
    pub classification: String,
    pub delta_exponent: u32,
    pub curves: Vec<CurvePayload>,
    pub bump: BumpPayload,
    pub coordinate_change: CoordinatePayload,
    pub radius: f64,
    pub margins: MarginsPayload,
    pub seeds: SeedsPayload,
    pub verification: Option<VerificationSummary>,
}

impl Certificate {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }

    pub fn from_json(s: &str) -> Result<Self, SchemaError> {
        let v: serde_json::Value = serde_json::from_str(s).map_err(|e| SchemaError::Json(e.to_string()))?;
        match v.get("schema").and_then(|x| x.as_str()) {
            Some(SCHEMA) => {}
            Some(other) => return Err(SchemaError::Version(other.to_string())),
            None => return Err(SchemaError::Version(String::new())),
        }
        serde_json::from_value(v).map_err(|e| SchemaError::Json(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyalg::{rat, rat_int};

    #[test]
    fn poly_rows_round_trip() {
        let mut p = MixedPolynomial::modulus_term(3, 1, rat(15, 7));
        p.add_term([1, 0, 0, 2], CRat::new(rat(-1, 3), rat(2, 5)));
        let big = Rat::new(BigInt::from(7) << 80usize, BigInt::from(3));
        p.add_term([0, 0, 0, 1], CRat::real(big));
        let rows = encode_poly(&p);
        let json = serde_json::to_string(&rows).unwrap();
        let back: Vec<TermRow> = serde_json::from_str(&json).unwrap();
        assert_eq!(decode_poly(&back).unwrap(), p);
        assert!(json.contains('"'));
    }

    #[test]
    fn complex_text_round_trip() {
        for c in [CRat::from_int(0), CRat::new(rat(-3, 4), rat(5, 2)), CRat::real(rat_int(9))] {
            assert_eq!(parse_crat(&crat_text(&c)).unwrap(), c);
        }
        assert_eq!(parse_xi("inf").unwrap(), CurveXi::Infinity);
        assert!(parse_crat("1/0").is_err());
    }

    #[test]
    fn rejects_other_versions() {
        assert!(matches!(Certificate::from_json(r#"{"schema":"other/2"}"#), Err(SchemaError::Version(_))));
        assert!(matches!(Certificate::from_json("{"), Err(SchemaError::Json(_))));
    }
}
