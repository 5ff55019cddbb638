//! Domain input documents: bare expressions, text files, or JSON.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::parser::{parse_expression, print_expression, ParseError};
use super::schema::{decode_poly, SchemaError, TermRow};
use crate::polyalg::MixedPolynomial;

#[derive(Debug, Error)]
pub enum DocumentError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Schema(#[from] SchemaError),
    #[error("document: {0}")]
    Json(#[from] serde_json::Error),
    #[error("reading {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("document needs exactly one of `expression` and `terms`")]
    Source,
}

/// JSON form of a domain.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expression: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub terms: Option<Vec<TermRow>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<[u32; 2]>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LoadedDomain {
    pub text: String,
    pub poly: MixedPolynomial,
    pub weights: Option<[u32; 2]>,
}

impl DomainDocument {
    pub fn load(&self) -> Result<LoadedDomain, DocumentError> {
        let poly = match (&self.expression, &self.terms) {
            (Some(e), None) => parse_expression(e)?,
            (None, Some(t)) => decode_poly(t)?,
            _ => return Err(DocumentError::Source),
        };
        let text = self.expression.clone().unwrap_or_else(|| print_expression(&poly));
        Ok(LoadedDomain { text, poly, weights: self.weights })
    }
}

/// A command-line domain argument: an existing `.json` file, another existing file holding an
/// expression, or the expression itself.
pub fn load_domain_arg(arg: &str) -> Result<LoadedDomain, DocumentError> {
    let path = std::path::Path::new(arg);
    if path.is_file() {
        let body = std::fs::read_to_string(path).map_err(|source| DocumentError::Io { path: arg.into(), source })?;
        if path.extension().is_some_and(|e| e == "json") {
            let doc: DomainDocument = serde_json::from_str(&body)?;
            return doc.load();
        }
        let text = body.trim().to_string();
        return Ok(LoadedDomain { poly: parse_expression(&text)?, text, weights: None });
    }
    Ok(LoadedDomain { text: arg.to_string(), poly: parse_expression(arg)?, weights: None })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_document_forms() {
        let d: DomainDocument =
            serde_json::from_str(r#"{"expression": "|z1|^4 + |z2|^4", "weights": [4, 4]}"#).unwrap();
        let l = d.load().unwrap();
        assert_eq!(l.weights, Some([4, 4]));
        let d: DomainDocument = serde_json::from_str(r#"{"terms": [[2,2,0,0,1,1,0,1],[0,0,2,2,1,1,0,1]]}"#).unwrap();
        assert_eq!(d.load().unwrap().poly, l.poly);
        let both: DomainDocument = serde_json::from_str(r#"{"expression": "z1", "terms": []}"#).unwrap();
        assert!(matches!(both.load(), Err(DocumentError::Source)));
        assert!(serde_json::from_str::<DomainDocument>(r#"{"expr": "z1"}"#).is_err());
    }
}
