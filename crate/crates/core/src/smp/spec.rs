use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::code::CodeSpec;
use super::{
    coherent_fingerprint_protocol, trivial_classical_protocol, PairSelection, SmpProtocol, Target,
    DEFAULT_COHERENT_TAIL,
};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ProtocolKind {
    #[serde(rename = "qfp")]
    Qfp,
    #[serde(rename = "classical-trivial")]
    ClassicalTrivial,
}

/// JSON protocol description, e.g.
/// `{"type": "qfp", "n": 4, "m": 12, "mu": 2.0, "code": {"kind": "repetition"}}`.
///
/// `pairs` and `shots` switch evaluation to sampled mode (which then uses
/// `seed`); without them every input pair is evaluated exactly.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProtocolSpec {
    #[serde(rename = "type")]
    pub kind: ProtocolKind,
    pub n: usize,
    #[serde(default)]
    pub m: Option<usize>,
    #[serde(default)]
    pub mu: Option<f64>,
    #[serde(default)]
    pub code: Option<CodeSpec>,
    #[serde(default)]
    pub seed: Option<u64>,
    /// Largest Poisson tail discarded per coherent mode.
    #[serde(default)]
    pub tail: Option<f64>,
    #[serde(default)]
    pub pairs: Option<usize>,
    #[serde(default)]
    pub shots: Option<u64>,
}

impl ProtocolSpec {
    /// Parses a spec; errors name the offending field.
    pub fn from_json(text: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            if path == "." {
                Error::Config(e.inner().to_string())
            } else {
                Error::Config(format!("field `{path}`: {}", e.inner()))
            }
        })
    }

    pub fn build(&self) -> Result<SmpProtocol> {
        let field = |name: &str, e: Error| Error::Config(format!("field `{name}`: {e}"));
        let code_spec = self.code.clone().unwrap_or(match self.kind {
            ProtocolKind::Qfp => CodeSpec::Repetition { factor: None },
            ProtocolKind::ClassicalTrivial => CodeSpec::Identity,
        });
        let code = code_spec.build(self.n, self.m).map_err(|e| field("code", e))?;
        let code: Arc<dyn super::BinaryCode> = Arc::from(code);
        match self.kind {
            ProtocolKind::Qfp => {
                let mu = self
                    .mu
                    .ok_or_else(|| Error::Config("field `mu`: required for qfp".into()))?;
                let tail = self.tail.unwrap_or(DEFAULT_COHERENT_TAIL);
                coherent_fingerprint_protocol(code, mu, tail).map_err(|e| field("mu", e))
            }
            ProtocolKind::ClassicalTrivial => {
                let p = trivial_classical_protocol(code, Target::Equality { n: self.n })
                    .map_err(|e| field("n", e))?;
                if let Some(mu) = self.mu {
                    if (mu - p.mu()).abs() > 1e-9 {
                        return Err(Error::Config(format!(
                            "field `mu`: {mu} differs from the protocol's maximum codeword weight {}",
                            p.mu()
                        )));
                    }
                }
                Ok(p)
            }
        }
    }

    /// Exact evaluation unless `pairs`/`shots` request sampling.
    pub fn selection(&self, seed_override: Option<u64>) -> Result<PairSelection> {
        match (self.pairs, self.shots) {
            (None, None) => Ok(PairSelection::All),
            (Some(pairs), shots) => {
                let seed = seed_override.or(self.seed).ok_or_else(|| {
                    Error::Config("field `seed`: sampled evaluation requires a seed".into())
                })?;
                Ok(PairSelection::Sample {
                    pairs,
                    shots: shots.unwrap_or(1000),
                    seed,
                })
            }
            (None, Some(_)) => Err(Error::Config("field `pairs`: required when `shots` is given".into())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_qfp_spec() {
        let s = ProtocolSpec::from_json(r#"{"type":"qfp","n":4,"m":12,"mu":2.0,"code":{"kind":"repetition"},"seed":1}"#).unwrap();
        let p = s.build().unwrap();
        assert_eq!((p.input_bits(), p.mode_count(), p.mu()), (4, 12, 2.0));
        assert_eq!(s.selection(None).unwrap(), PairSelection::All);
    }

    #[test]
    fn errors_name_fields() {
        let e = ProtocolSpec::from_json(r#"{"type":"qfp","n":"four"}"#).unwrap_err();
        assert!(e.to_string().contains("`n`"), "{e}");
        let e = ProtocolSpec::from_json(r#"{"type":"qfp","n":4,"mu":1,"colour":3}"#).unwrap_err();
        assert!(e.to_string().contains("colour"), "{e}");
        let e = ProtocolSpec::from_json(r#"{"type":"qfp","n":4,"m":10,"mu":1}"#).unwrap().build().unwrap_err();
        assert!(e.to_string().contains("`code`"), "{e}");
        let e = ProtocolSpec::from_json(r#"{"type":"qfp","n":4,"code":{"kind":"repetition","factor":2}}"#)
            .unwrap()
            .build()
            .unwrap_err();
        assert!(e.to_string().contains("`mu`"), "{e}");
        let s = ProtocolSpec::from_json(r#"{"type":"qfp","n":4,"mu":1,"pairs":5}"#).unwrap();
        assert!(s.selection(None).is_err());
        assert!(s.selection(Some(3)).is_ok());
    }

    #[test]
    fn classical_spec_checks_mu() {
        let s = ProtocolSpec::from_json(r#"{"type":"classical-trivial","n":2,"mu":2}"#).unwrap();
        assert_eq!(s.build().unwrap().mu(), 2.0);
        let s = ProtocolSpec::from_json(r#"{"type":"classical-trivial","n":2,"mu":1}"#).unwrap();
        assert!(s.build().is_err());
    }
}
