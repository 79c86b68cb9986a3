//! JSON form of states:
//! `{"modes": m, "kind": "pure"|"diagonal", "terms": [{"occ": [...], "re": x, "im": y}]}`,
//! with `"p"` in place of `re`/`im` for diagonal states.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{FockDiagonalState, FockIndex, PureState};
use crate::error::{Error, Result};

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StateDoc {
    modes: usize,
    kind: Kind,
    terms: Vec<TermDoc>,
}

#[derive(Serialize, Deserialize, Clone, Copy, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
enum Kind {
    Pure,
    Diagonal,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TermDoc {
    occ: FockIndex,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    re: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    im: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    p: Option<f64>,
}

/// Either serializable state kind.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyState {
    Pure(PureState),
    Diagonal(FockDiagonalState),
}

impl AnyState {
    pub fn to_json(&self) -> Result<String> {
        let doc = match self {
            AnyState::Pure(s) => StateDoc {
                modes: s.mode_count(),
                kind: Kind::Pure,
                terms: s
                    .iter()
                    .map(|(i, a)| TermDoc {
                        occ: i.clone(),
                        re: Some(a.re),
                        im: Some(a.im),
                        p: None,
                    })
                    .collect(),
            },
            AnyState::Diagonal(s) => StateDoc {
                modes: s.mode_count(),
                kind: Kind::Diagonal,
                terms: s
                    .iter()
                    .map(|(i, p)| TermDoc {
                        occ: i.clone(),
                        re: None,
                        im: None,
                        p: Some(*p),
                    })
                    .collect(),
            },
        };
        Ok(serde_json::to_string(&doc)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let doc: StateDoc = serde_path_to_error::deserialize(de)
            .map_err(|e| Error::Config(format!("state JSON: {}: {}", e.path(), e.inner())))?;
        match doc.kind {
            Kind::Pure => {
                let mut terms = Vec::with_capacity(doc.terms.len());
                for (k, t) in doc.terms.into_iter().enumerate() {
                    if t.p.is_some() {
                        return Err(Error::Config(format!("terms[{k}].p: not allowed in a pure state")));
                    }
                    let re = t.re.ok_or_else(|| Error::Config(format!("terms[{k}].re: missing")))?;
                    terms.push((t.occ, Complex64::new(re, t.im.unwrap_or(0.0))));
                }
                Ok(AnyState::Pure(PureState::new(doc.modes, terms)?))
            }
            Kind::Diagonal => {
                let mut terms = Vec::with_capacity(doc.terms.len());
                for (k, t) in doc.terms.into_iter().enumerate() {
                    if t.re.is_some() || t.im.is_some() {
                        return Err(Error::Config(format!("terms[{k}]: re/im not allowed in a diagonal state")));
                    }
                    let p = t.p.ok_or_else(|| Error::Config(format!("terms[{k}].p: missing")))?;
                    terms.push((t.occ, p));
                }
                Ok(AnyState::Diagonal(FockDiagonalState::new(doc.modes, terms)?))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pure_state_document() {
        let s = AnyState::Pure(PureState::fock(&[1, 0]).unwrap());
        let text = s.to_json().unwrap();
        assert_eq!(text, r#"{"modes":2,"kind":"pure","terms":[{"occ":[1,0],"re":1.0,"im":0.0}]}"#);
        assert_eq!(AnyState::from_json(&text).unwrap(), s);
    }

    #[test]
    fn diagonal_state_document() {
        let text = r#"{"modes":1,"kind":"diagonal","terms":[{"occ":[0],"p":0.25},{"occ":[3],"p":0.75}]}"#;
        let s = AnyState::from_json(text).unwrap();
        assert_eq!(s.to_json().unwrap(), text);
    }

    #[test]
    fn errors_name_the_field() {
        let err = AnyState::from_json(r#"{"modes":1,"kind":"pure","terms":[{"occ":[0],"re":"x"}]}"#)
            .unwrap_err()
            .to_string();
        assert!(err.contains("terms[0].re"), "{err}");
        let err = AnyState::from_json(r#"{"modes":1,"kind":"mixed","terms":[]}"#)
            .unwrap_err()
            .to_string();
        assert!(err.contains("kind"), "{err}");
    }
}
