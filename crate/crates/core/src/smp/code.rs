use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest number of message bits for which codes are enumerated exhaustively
/// (minimum distance computation).
const ENUMERATION_LIMIT: usize = 20;

/// Binary code mapping `n`-bit inputs to `m`-bit codewords.
pub trait BinaryCode: Send + Sync + fmt::Debug {
    fn input_bits(&self) -> usize;
    fn length(&self) -> usize;
    /// Codeword for input `x` (bit `i` of `x` is input bit `i`).
    fn encode(&self, x: u64) -> Vec<bool>;
    /// Minimum Hamming distance between codewords of distinct inputs.
    fn min_distance(&self) -> usize;
    fn describe(&self) -> String;
}

/// Each input bit repeated `factor` times in a contiguous block.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepetitionCode {
    input_bits: usize,
    factor: usize,
}

impl RepetitionCode {
    pub fn new(input_bits: usize, factor: usize) -> Result<Self> {
        if input_bits == 0 || input_bits > 64 {
            return Err(Error::InvalidCode(format!("input length {input_bits} outside 1..=64")));
        }
        if factor == 0 {
            return Err(Error::InvalidCode("repetition factor must be at least 1".into()));
        }
        Ok(RepetitionCode { input_bits, factor })
    }

    pub fn identity(input_bits: usize) -> Result<Self> {
        Self::new(input_bits, 1)
    }
}

impl BinaryCode for RepetitionCode {
    fn input_bits(&self) -> usize {
        self.input_bits
    }

    fn length(&self) -> usize {
        self.input_bits * self.factor
    }

    fn encode(&self, x: u64) -> Vec<bool> {
        (0..self.input_bits)
            .flat_map(|i| std::iter::repeat_n((x >> i) & 1 == 1, self.factor))
            .collect()
    }

    fn min_distance(&self) -> usize {
        self.factor
    }

    fn describe(&self) -> String {
        if self.factor == 1 {
            format!("identity[{}]", self.input_bits)
        } else {
            format!("repetition[{}x{}]", self.input_bits, self.factor)
        }
    }
}

/// Linear code given by a `k × m` generator matrix over GF(2).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearCode {
    generator: Vec<Vec<bool>>,
    min_distance: usize,
}

impl LinearCode {
    /// Rejects generators whose codewords are not all distinct (distance 0).
    pub fn new(generator: Vec<Vec<bool>>) -> Result<Self> {
        let k = generator.len();
        if k == 0 || k > ENUMERATION_LIMIT {
            return Err(Error::InvalidCode(format!(
                "generator must have between 1 and {ENUMERATION_LIMIT} rows, found {k}"
            )));
        }
        let m = generator[0].len();
        if m == 0 || generator.iter().any(|r| r.len() != m) {
            return Err(Error::InvalidCode("generator rows must be non-empty and of equal length".into()));
        }
        let mut code = LinearCode {
            generator,
            min_distance: 0,
        };
        // For a linear code the minimum distance is the minimum weight of a
        // nonzero codeword.
        let d = (1..(1u64 << k))
            .map(|x| code.encode(x).iter().filter(|&&b| b).count())
            .min()
            .unwrap_or(0);
        if d == 0 {
            return Err(Error::InvalidCode("generator matrix is rank deficient".into()));
        }
        code.min_distance = d;
        Ok(code)
    }
}

impl BinaryCode for LinearCode {
    fn input_bits(&self) -> usize {
        self.generator.len()
    }

    fn length(&self) -> usize {
        self.generator[0].len()
    }

    fn encode(&self, x: u64) -> Vec<bool> {
        let mut word = vec![false; self.length()];
        for (i, row) in self.generator.iter().enumerate() {
            if (x >> i) & 1 == 1 {
                for (w, &g) in word.iter_mut().zip(row) {
                    *w ^= g;
                }
            }
        }
        word
    }

    fn min_distance(&self) -> usize {
        self.min_distance
    }

    fn describe(&self) -> String {
        format!(
            "linear[{},{},{}]",
            self.length(),
            self.input_bits(),
            self.min_distance
        )
    }
}

/// JSON description of a code: `{"kind": "repetition", "factor": 3}`,
/// `{"kind": "identity"}` or `{"kind": "linear", "generator": [[1,0,…],…]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum CodeSpec {
    Repetition {
        #[serde(default)]
        factor: Option<usize>,
    },
    Identity,
    Linear {
        generator: Vec<Vec<u8>>,
    },
}

impl CodeSpec {
    /// Builds the code for `n` input bits; `m`, when given, must match the
    /// code length (and fixes the repetition factor if none is given).
    pub fn build(&self, n: usize, m: Option<usize>) -> Result<Box<dyn BinaryCode>> {
        let code: Box<dyn BinaryCode> = match self {
            CodeSpec::Identity => Box::new(RepetitionCode::identity(n)?),
            CodeSpec::Repetition { factor } => {
                let factor = match (factor, m) {
                    (Some(f), _) => *f,
                    (None, Some(m)) if m % n == 0 => m / n,
                    (None, Some(m)) => {
                        return Err(Error::InvalidCode(format!(
                            "m = {m} is not a multiple of n = {n} for a repetition code"
                        )))
                    }
                    (None, None) => 3,
                };
                Box::new(RepetitionCode::new(n, factor)?)
            }
            CodeSpec::Linear { generator } => {
                let rows = generator
                    .iter()
                    .map(|r| {
                        r.iter()
                            .map(|&b| match b {
                                0 => Ok(false),
                                1 => Ok(true),
                                other => Err(Error::InvalidCode(format!("generator entry {other} is not 0 or 1"))),
                            })
                            .collect::<Result<Vec<bool>>>()
                    })
                    .collect::<Result<Vec<_>>>()?;
                Box::new(LinearCode::new(rows)?)
            }
        };
        if code.input_bits() != n {
            return Err(Error::InvalidCode(format!(
                "code encodes {} bits but n = {n}",
                code.input_bits()
            )));
        }
        if let Some(m) = m {
            if code.length() != m {
                return Err(Error::InvalidCode(format!(
                    "code length {} does not match m = {m}",
                    code.length()
                )));
            }
        }
        Ok(code)
    }
}

/// Generator of a `[12, 4, 6]` binary code: the 4-bit column vectors
/// 1, 2, 3, 4, 5, 6, 8, 9, 10, 13, 14, 15.
pub fn code_12_4_6() -> LinearCode {
    let columns = [1u8, 2, 3, 4, 5, 6, 8, 9, 10, 13, 14, 15];
    let generator = (0..4)
        .map(|row| columns.iter().map(|c| (c >> row) & 1 == 1).collect())
        .collect();
    LinearCode::new(generator).expect("valid generator")
}

fn hamming(a: &[bool], b: &[bool]) -> usize {
    a.iter().zip(b).filter(|(x, y)| x != y).count()
}

/// Hamming distance between the codewords of `x` and `y`.
pub fn codeword_distance(code: &dyn BinaryCode, x: u64, y: u64) -> usize {
    hamming(&code.encode(x), &code.encode(y))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_min_distance(code: &dyn BinaryCode) -> usize {
        let n = 1u64 << code.input_bits();
        let mut best = usize::MAX;
        for x in 0..n {
            for y in (x + 1)..n {
                best = best.min(codeword_distance(code, x, y));
            }
        }
        best
    }

    #[test]
    fn repetition_layout() {
        let c = RepetitionCode::new(2, 3).unwrap();
        assert_eq!(c.encode(0b01), vec![true, true, true, false, false, false]);
        assert_eq!(c.length(), 6);
        assert_eq!(brute_min_distance(&c), 3);
    }

    #[test]
    fn linear_code_distance_matches_brute_force() {
        let c = code_12_4_6();
        assert_eq!(c.min_distance(), 6);
        assert_eq!(brute_min_distance(&c), 6);
    }

    #[test]
    fn invalid_codes() {
        assert!(RepetitionCode::new(4, 0).is_err());
        assert!(LinearCode::new(vec![vec![true, false], vec![true, false]]).is_err());
        assert!(LinearCode::new(vec![vec![true, false], vec![true]]).is_err());
        let spec = CodeSpec::Repetition { factor: None };
        assert!(spec.build(4, Some(10)).is_err());
        assert_eq!(spec.build(4, Some(12)).unwrap().min_distance(), 3);
        let spec = CodeSpec::Linear { generator: vec![vec![1, 2]] };
        assert!(spec.build(1, None).is_err());
    }
}
