use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest input length stored as an explicit table (4096 × 4096 entries).
pub const TABLE_INPUT_LIMIT: usize = 12;

/// Explicit truth table of `f : {0,1}ⁿ × {0,1}ⁿ → {0,1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FunctionTable {
    n: usize,
    values: Vec<bool>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TableDoc {
    n: usize,
    values: Vec<Vec<u8>>,
}

impl FunctionTable {
    /// `rows[x][y] = f(x, y)`; the matrix must be `2ⁿ × 2ⁿ`.
    pub fn new(n: usize, rows: &[Vec<bool>]) -> Result<Self> {
        check_table_size(n)?;
        let size = 1usize << n;
        if rows.len() != size || rows.iter().any(|r| r.len() != size) {
            return Err(Error::param("values", format!("table must be {size} x {size}")));
        }
        Ok(FunctionTable {
            n,
            values: rows.iter().flatten().copied().collect(),
        })
    }

    pub fn from_fn(n: usize, f: impl Fn(u64, u64) -> bool) -> Result<Self> {
        check_table_size(n)?;
        let size = 1u64 << n;
        let values = (0..size)
            .flat_map(|x| (0..size).map(move |y| (x, y)))
            .map(|(x, y)| f(x, y))
            .collect();
        Ok(FunctionTable { n, values })
    }

    pub fn constant(n: usize, value: bool) -> Result<Self> {
        Self::from_fn(n, |_, _| value)
    }

    pub fn input_bits(&self) -> usize {
        self.n
    }

    pub fn size(&self) -> usize {
        1 << self.n
    }

    pub fn value(&self, x: u64, y: u64) -> bool {
        self.values[x as usize * self.size() + y as usize]
    }

    pub fn rows(&self) -> Vec<Vec<bool>> {
        self.values.chunks(self.size()).map(<[bool]>::to_vec).collect()
    }

    /// Parses `{"n": 1, "values": [[1,0],[0,1]]}`.
    pub fn from_json(text: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let doc: TableDoc = serde_path_to_error::deserialize(de)
            .map_err(|e| Error::Config(format!("{}: {}", e.path(), e.inner())))?;
        let rows = doc
            .values
            .iter()
            .enumerate()
            .map(|(i, r)| {
                r.iter()
                    .enumerate()
                    .map(|(j, &v)| match v {
                        0 => Ok(false),
                        1 => Ok(true),
                        other => Err(Error::Config(format!("values[{i}][{j}]: {other} is not 0 or 1"))),
                    })
                    .collect::<Result<Vec<bool>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(doc.n, &rows).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        let doc = TableDoc {
            n: self.n,
            values: self
                .rows()
                .iter()
                .map(|r| r.iter().map(|&b| u8::from(b)).collect())
                .collect(),
        };
        serde_json::to_string(&doc).expect("table serializes")
    }
}

fn check_table_size(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::param("n", "must be at least 1"));
    }
    if n > TABLE_INPUT_LIMIT {
        return Err(Error::TooLarge {
            what: "function table input length",
            n,
            limit: TABLE_INPUT_LIMIT,
        });
    }
    Ok(())
}

/// `Eq_n(x, y) = 1` iff `x = y`, as an explicit table.
pub fn equality_function(n: usize) -> Result<FunctionTable> {
    FunctionTable::from_fn(n, |x, y| x == y)
}

/// The function a protocol is meant to compute. Equality is kept implicit
/// so protocols on long inputs can still be evaluated on sampled pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Target {
    Equality { n: usize },
    Table(Arc<FunctionTable>),
}

impl Target {
    pub fn input_bits(&self) -> usize {
        match self {
            Target::Equality { n } => *n,
            Target::Table(t) => t.input_bits(),
        }
    }

    pub fn value(&self, x: u64, y: u64) -> bool {
        match self {
            Target::Equality { .. } => x == y,
            Target::Table(t) => t.value(x, y),
        }
    }

    pub fn name(&self) -> String {
        match self {
            Target::Equality { n } => format!("Eq_{n}"),
            Target::Table(t) => format!("table_{}", t.input_bits()),
        }
    }
}

impl From<FunctionTable> for Target {
    fn from(t: FunctionTable) -> Self {
        Target::Table(Arc::new(t))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn equality_tables() {
        let e1 = equality_function(1).unwrap();
        assert_eq!(e1.rows(), vec![vec![true, false], vec![false, true]]);
        let e2 = equality_function(2).unwrap();
        for x in 0..4 {
            for y in 0..4 {
                assert_eq!(e2.value(x, y), x == y);
            }
        }
        assert!(equality_function(13).is_err());
        assert!(equality_function(0).is_err());
    }

    #[test]
    fn implicit_equality_on_sampled_pairs() {
        let t = Target::Equality { n: 8 };
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..500 {
            let x = rng.random_range(0..256u64);
            let y = if rng.random_bool(0.5) { x } else { rng.random_range(0..256u64) };
            assert_eq!(t.value(x, y), x == y);
            assert!(t.value(x, x));
        }
    }

    #[test]
    fn json_round_trip_and_errors() {
        let t = FunctionTable::from_json(r#"{"n":1,"values":[[1,0],[0,1]]}"#).unwrap();
        assert_eq!(t, equality_function(1).unwrap());
        assert_eq!(FunctionTable::from_json(&t.to_json()).unwrap(), t);
        let err = FunctionTable::from_json(r#"{"n":1,"values":[[1,0],[0,"x"]]}"#).unwrap_err();
        assert!(err.to_string().contains("values"), "{err}");
        assert!(FunctionTable::from_json(r#"{"n":1,"values":[[1,0]]}"#).is_err());
        assert!(FunctionTable::from_json(r#"{"n":1,"values":[[1,0],[0,3]]}"#).is_err());
    }
}
