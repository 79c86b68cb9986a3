use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use rayon::prelude::*;

use super::function::TABLE_INPUT_LIMIT;
use super::SmpProtocol;
use crate::error::{Error, Result};

/// Which input pairs to evaluate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PairSelection {
    /// Every `(x, y)` with exact outcome probabilities (`n ≤ 12`).
    All,
    /// `pairs` random input pairs, each run `shots` times. Pair `i` draws
    /// its inputs and outcomes from its own stream of a ChaCha8 generator
    /// seeded with `seed`, so results do not depend on scheduling. Half of
    /// the pairs (in expectation) have `x = y`.
    Sample { pairs: usize, shots: u64, seed: u64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct PairError {
    pub x: u64,
    pub y: u64,
    pub f: bool,
    /// Exact error probability, or the Monte Carlo estimate in sampled mode.
    pub p_error: f64,
    /// Standard error of the estimate (sampled mode only).
    pub std_error: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ErrorReport {
    pub worst_error: f64,
    /// First pair (in evaluation order) attaining `worst_error`.
    pub worst_pair: (u64, u64),
    pub per_pair: Vec<PairError>,
    pub selection: PairSelection,
}

impl ErrorReport {
    /// Per-pair table with columns `x,y,f,p_error` (plus `std_error` when
    /// sampled), preceded by `#` comment lines with the worst case.
    pub fn to_csv(&self) -> String {
        let sampled = matches!(self.selection, PairSelection::Sample { .. });
        let mut out = String::new();
        match &self.selection {
            PairSelection::All => out.push_str("# mode=exhaustive\n"),
            PairSelection::Sample { pairs, shots, seed } => {
                let _ = writeln!(out, "# mode=sampled pairs={pairs} shots={shots} seed={seed}");
            }
        }
        let _ = writeln!(
            out,
            "# worst_error={} worst_pair=({},{})",
            self.worst_error, self.worst_pair.0, self.worst_pair.1
        );
        out.push_str(if sampled { "x,y,f,p_error,std_error\n" } else { "x,y,f,p_error\n" });
        for e in &self.per_pair {
            let _ = write!(out, "{},{},{},{}", e.x, e.y, u8::from(e.f), e.p_error);
            if let Some(s) = e.std_error {
                let _ = write!(out, ",{s}");
            }
            out.push('\n');
        }
        out
    }
}

/// Worst-case error `max_{x,y} Pr[output ≠ f(x, y)]` of `protocol`.
pub fn evaluate_error(protocol: &SmpProtocol, selection: &PairSelection) -> Result<ErrorReport> {
    let per_pair = match selection {
        PairSelection::All => exhaustive(protocol)?,
        PairSelection::Sample { pairs, shots, seed } => sampled(protocol, *pairs, *shots, *seed)?,
    };
    let mut worst_error = f64::NEG_INFINITY;
    let mut worst_pair = (0, 0);
    for e in &per_pair {
        if e.p_error > worst_error {
            worst_error = e.p_error;
            worst_pair = (e.x, e.y);
        }
    }
    Ok(ErrorReport {
        worst_error: worst_error.max(0.0),
        worst_pair,
        per_pair,
        selection: selection.clone(),
    })
}

fn exhaustive(protocol: &SmpProtocol) -> Result<Vec<PairError>> {
    let n = protocol.input_bits();
    if n > TABLE_INPUT_LIMIT {
        return Err(Error::TooLarge {
            what: "exhaustive evaluation",
            n,
            limit: TABLE_INPUT_LIMIT,
        });
    }
    let alice = protocol.alice_messages()?;
    let bob = protocol.bob_messages()?;
    let size = 1u64 << n;
    (0..size * size)
        .into_par_iter()
        .map(|k| {
            let (x, y) = (k / size, k % size);
            let f = protocol.target().value(x, y);
            let p_error = protocol.error_from_messages(&alice[x as usize], &bob[y as usize], f)?;
            Ok(PairError {
                x,
                y,
                f,
                p_error,
                std_error: None,
            })
        })
        .collect()
}

fn sampled(protocol: &SmpProtocol, pairs: usize, shots: u64, seed: u64) -> Result<Vec<PairError>> {
    if pairs == 0 || shots == 0 {
        return Err(Error::param("pairs/shots", "sampled evaluation needs at least one pair and one shot"));
    }
    let n = protocol.input_bits();
    let mask = if n >= 64 { u64::MAX } else { (1u64 << n) - 1 };
    (0..pairs)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64 + 1);
            let x = rng.random::<u64>() & mask;
            let y = if rng.random_bool(0.5) { x } else { rng.random::<u64>() & mask };
            let f = protocol.target().value(x, y);
            let a = protocol.alice_message(x)?;
            let b = protocol.bob_message(y)?;
            let p = protocol.error_from_messages(&a, &b, f)?;
            let wrong = Binomial::new(shots, p.clamp(0.0, 1.0))
                .map_err(|e| Error::param("p_error", e.to_string()))?
                .sample(&mut rng);
            let est = wrong as f64 / shots as f64;
            Ok(PairError {
                x,
                y,
                f,
                p_error: est,
                std_error: Some((est * (1.0 - est) / shots as f64).sqrt()),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::smp::code::RepetitionCode;
    use crate::smp::{coherent_fingerprint_protocol, trivial_classical_protocol, Target, DEFAULT_COHERENT_TAIL};

    #[test]
    fn deterministic_referee_has_zero_error() {
        let code = Arc::new(RepetitionCode::identity(3).unwrap());
        let p = trivial_classical_protocol(code, Target::Equality { n: 3 }).unwrap();
        let r = evaluate_error(&p, &PairSelection::All).unwrap();
        assert_eq!(r.worst_error, 0.0);
        assert_eq!(r.per_pair.len(), 64);
    }

    #[test]
    fn exhaustive_report_is_independent_of_thread_count() {
        let code = Arc::new(RepetitionCode::new(3, 2).unwrap());
        let p = coherent_fingerprint_protocol(code, 1.5, DEFAULT_COHERENT_TAIL).unwrap();
        let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let four = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
        let a = one.install(|| evaluate_error(&p, &PairSelection::All)).unwrap();
        let b = four.install(|| evaluate_error(&p, &PairSelection::All)).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.to_csv(), b.to_csv());
    }

    #[test]
    fn sampled_mode_is_seeded() {
        let code = Arc::new(RepetitionCode::new(16, 2).unwrap());
        let p = coherent_fingerprint_protocol(code, 4.0, DEFAULT_COHERENT_TAIL).unwrap();
        let sel = PairSelection::Sample { pairs: 20, shots: 1000, seed: 11 };
        let a = evaluate_error(&p, &sel).unwrap();
        let b = evaluate_error(&p, &sel).unwrap();
        assert_eq!(a, b);
        for e in &a.per_pair {
            if e.x == e.y {
                assert_eq!(e.p_error, 0.0);
            }
            assert!(e.std_error.unwrap() <= 0.5 / 1000f64.sqrt() + 1e-12);
        }
        assert!(evaluate_error(&p, &PairSelection::All).is_err());
    }
}
