//! Energy/time tradeoff quantities for optical SMP protocols.
//!
//! For a protocol over `m` modes with maximum mean photon number `µ`, the
//! truncated message space has `log₂ C(a+m, m)` qubits (`a = ⌊µ/δ⌋`), which
//! is at most `min{(µ/δ) log₂(1+m), m log₂(1+µ/δ)}`. Lower bounds on quantum
//! and classical SMP complexity then constrain `µ` and `m` together. Only
//! finite quantities are computed here; asymptotic lower bounds appear as
//! labelled references, never as numbers.

use std::cmp::Ordering;
use std::fmt::Write as _;

use serde::Serialize;

use crate::combinatorics::{count_rank, entropy_bound};
use crate::error::{Error, Result};
use crate::fock::PhotonStatistics;
use crate::smp::{bruteforce_deterministic_cc, equality_function, SmpProtocol, D_CONVENTION};
use crate::truncation::{markov_cutoff, MuConvention};

pub const REPORT_HEADER: &str =
    "n,m,mu,delta,a,log2_rank,term_photon,term_mode,lhs_min,classical_lhs,entropy_bound,D_exact,notes";

/// `µ log₂ m`, `m log₂(1 + µ/δ)` and their minimum.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct QuantumTradeoff {
    pub term_photon: f64,
    pub term_mode: f64,
    pub lhs_min: f64,
}

fn check_common(mu: f64, delta: f64) -> Result<()> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::DeltaOutOfRange(delta));
    }
    if !(mu >= 0.0 && mu.is_finite()) {
        return Err(Error::param("mu", format!("{mu} must be finite and non-negative")));
    }
    Ok(())
}

/// Requires `m ≥ 2` (a single-mode protocol can always be padded with an
/// idle mode).
pub fn quantum_tradeoff_lhs(m: usize, mu: f64, delta: f64) -> Result<QuantumTradeoff> {
    if m < 2 {
        return Err(Error::param("m", format!("{m} < 2; pad the protocol with an extra mode")));
    }
    check_common(mu, delta)?;
    let term_photon = mu * (m as f64).log2();
    let term_mode = m as f64 * (1.0 + mu / delta).log2();
    Ok(QuantumTradeoff {
        term_photon,
        term_mode,
        lhs_min: term_photon.min(term_mode),
    })
}

/// `log₂ C(a+m, m)` with `a = ⌊µ/δ⌋`: bits needed to send a Fock-diagonal
/// message after truncation.
pub fn classical_tradeoff_lhs(m: usize, mu: f64, delta: f64) -> Result<f64> {
    check_common(mu, delta)?;
    let spec = markov_cutoff(mu, delta, m)?;
    Ok(count_rank(m, spec.cutoff).log2_rank)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ComplexityKind {
    /// Deterministic two-way complexity.
    D,
    /// Randomized SMP complexity at error 1/3.
    RParallel,
    /// Quantum SMP complexity at error 1/3.
    QParallel,
}

impl ComplexityKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ComplexityKind::D => "D",
            ComplexityKind::RParallel => "R||",
            ComplexityKind::QParallel => "Q||",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum ReferenceValue {
    /// Computed by exhaustive protocol-tree search.
    Exact(u32),
    /// Growth class with the known result it comes from.
    Asymptotic { class: String, source: String },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComplexityReference {
    pub function: String,
    pub n: usize,
    pub kind: ComplexityKind,
    pub value: ReferenceValue,
}

impl ComplexityReference {
    pub fn label(&self) -> String {
        match &self.value {
            ReferenceValue::Exact(v) => format!("{}({})={v}", self.kind.as_str(), self.function),
            ReferenceValue::Asymptotic { class, source } => {
                format!("{}({})={class} [{source}]", self.kind.as_str(), self.function)
            }
        }
    }
}

/// Known complexities of `Eq_n`: exact `D` for `n ≤ 3` from the brute-force
/// oracle, growth classes otherwise.
pub fn equality_references(n: usize) -> Result<Vec<ComplexityReference>> {
    let function = format!("Eq_{n}");
    let d = if n <= 3 {
        ReferenceValue::Exact(bruteforce_deterministic_cc(&equality_function(n)?)?)
    } else {
        ReferenceValue::Asymptotic {
            class: "Θ(n)".into(),
            source: "fooling-set bound for Equality".into(),
        }
    };
    Ok(vec![
        ComplexityReference {
            function: function.clone(),
            n,
            kind: ComplexityKind::D,
            value: d,
        },
        ComplexityReference {
            function: function.clone(),
            n,
            kind: ComplexityKind::RParallel,
            value: ReferenceValue::Asymptotic {
                class: "Ω(√D)".into(),
                source: "SMP lower bound from deterministic complexity".into(),
            },
        },
        ComplexityReference {
            function,
            n,
            kind: ComplexityKind::QParallel,
            value: ReferenceValue::Asymptotic {
                class: "Ω(log R||)".into(),
                source: "quantum SMP lower bound from randomized SMP".into(),
            },
        },
    ])
}

/// Parameters of one report row. `protocol_modes` records the mode count of
/// the protocol instance the point came from, if any.
#[derive(Clone, Debug, PartialEq)]
pub struct ReportPoint {
    pub n: Option<usize>,
    pub m: usize,
    pub mu: f64,
    pub delta: f64,
    pub protocol_modes: Option<usize>,
    pub label: Option<String>,
}

impl ReportPoint {
    pub fn new(n: Option<usize>, m: usize, mu: f64, delta: f64) -> Self {
        ReportPoint {
            n,
            m,
            mu,
            delta,
            protocol_modes: None,
            label: None,
        }
    }

    /// Point describing a concrete protocol. Alice's message on input 0 is
    /// built to confirm the declared `µ` is respected.
    pub fn from_protocol(protocol: &SmpProtocol, delta: f64) -> Result<Self> {
        let probe = protocol.alice_message(0)?;
        let mean = probe.mean_photon_number();
        if mean > protocol.mu() + 1e-9 {
            return Err(Error::PremiseViolated(format!(
                "message mean photon number {mean} exceeds declared µ = {}",
                protocol.mu()
            )));
        }
        Ok(ReportPoint {
            n: Some(protocol.input_bits()),
            m: protocol.mode_count(),
            mu: protocol.mu(),
            delta,
            protocol_modes: Some(protocol.mode_count()),
            label: Some(protocol.label().to_string()),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TradeoffRow {
    pub n: Option<usize>,
    pub m: usize,
    pub mu: f64,
    pub delta: f64,
    pub a: u64,
    pub log2_rank: f64,
    pub term_photon: f64,
    pub term_mode: f64,
    pub lhs_min: f64,
    pub classical_lhs: f64,
    pub entropy_bound: f64,
    pub d_exact: Option<u32>,
    pub notes: String,
}

impl TradeoffRow {
    pub fn csv_line(&self) -> String {
        let opt = |v: Option<String>| v.unwrap_or_default();
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{}",
            opt(self.n.map(|n| n.to_string())),
            self.m,
            self.mu,
            self.delta,
            self.a,
            self.log2_rank,
            self.term_photon,
            self.term_mode,
            self.lhs_min,
            self.classical_lhs,
            self.entropy_bound,
            opt(self.d_exact.map(|d| d.to_string())),
            self.notes
        )
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TradeoffReport {
    pub rows: Vec<TradeoffRow>,
    pub references: Vec<ComplexityReference>,
}

impl TradeoffReport {
    /// CSV with `#` metadata lines (log base, `µ` convention, `D` convention)
    /// followed by the fixed header and one line per row.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str("# logarithms base 2\n");
        let _ = writeln!(
            out,
            "# mu convention: {} (maximum over inputs and both parties of the mean photon number); a = floor(mu/delta)",
            MuConvention::PerPartyMax.as_str()
        );
        let _ = writeln!(out, "# D convention: {D_CONVENTION}");
        for r in &self.references {
            let _ = writeln!(out, "# reference: n={} {}", r.n, r.label());
        }
        out.push_str(REPORT_HEADER);
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.csv_line());
            out.push('\n');
        }
        out
    }
}

fn cmp_points(a: &ReportPoint, b: &ReportPoint) -> Ordering {
    a.n.cmp(&b.n)
        .then(a.m.cmp(&b.m))
        .then(a.mu.total_cmp(&b.mu))
        .then(a.delta.total_cmp(&b.delta))
}

/// One row per point, sorted by `(n, m, µ, δ)`. Exact `D` values from
/// `references` fill the `D_exact` column for matching `n`; the notes carry
/// the `log₂m / log₂n` trend and any asymptotic references.
pub fn build_report(points: &[ReportPoint], references: &[ComplexityReference]) -> Result<TradeoffReport> {
    let mut points = points.to_vec();
    points.sort_by(cmp_points);
    let mut rows = Vec::with_capacity(points.len());
    for p in &points {
        if let Some(pm) = p.protocol_modes {
            if pm != p.m {
                return Err(Error::ModeMismatch {
                    expected: p.m,
                    found: pm,
                });
            }
        }
        let spec = markov_cutoff(p.mu, p.delta, p.m)?;
        let log2_rank = count_rank(p.m, spec.cutoff).log2_rank;
        let q = quantum_tradeoff_lhs(p.m, p.mu, p.delta)?;
        let classical_lhs = classical_tradeoff_lhs(p.m, p.mu, p.delta)?;
        let entropy = entropy_bound(spec.cutoff, p.m)?.bound;

        let mut notes = Vec::new();
        if let Some(label) = &p.label {
            notes.push(label.replace(',', ";"));
        }
        let mut d_exact = None;
        if let Some(n) = p.n {
            if n >= 2 {
                notes.push(format!("log2m/log2n={:.6}", (p.m as f64).log2() / (n as f64).log2()));
            }
            for r in references.iter().filter(|r| r.n == n) {
                match (&r.value, r.kind) {
                    (ReferenceValue::Exact(v), ComplexityKind::D) => d_exact = Some(*v),
                    (ReferenceValue::Asymptotic { class, .. }, kind) => {
                        notes.push(format!("{}={class}", kind.as_str()))
                    }
                    (ReferenceValue::Exact(v), kind) => notes.push(format!("{}={v}", kind.as_str())),
                }
            }
        }
        rows.push(TradeoffRow {
            n: p.n,
            m: p.m,
            mu: p.mu,
            delta: p.delta,
            a: spec.cutoff,
            log2_rank,
            term_photon: q.term_photon,
            term_mode: q.term_mode,
            lhs_min: q.lhs_min,
            classical_lhs,
            entropy_bound: entropy,
            d_exact,
            notes: notes.join("; "),
        });
    }
    Ok(TradeoffReport {
        rows,
        references: references.to_vec(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quantum_lhs_examples() {
        let q = quantum_tradeoff_lhs(1024, 2.0, 1e-4).unwrap();
        assert_eq!(q.term_photon, 20.0);
        let direct = 1024.0 * 20001f64.log2();
        assert!((q.term_mode - direct).abs() < 1e-9);
        assert!((q.term_mode - 14630.691).abs() < 1e-3);
        assert_eq!(q.lhs_min, 20.0);
        assert_eq!(quantum_tradeoff_lhs(2, 0.0, 1e-4).unwrap().lhs_min, 0.0);
        let q = quantum_tradeoff_lhs(2, 1.0, 1e-4).unwrap();
        assert_eq!((q.term_photon, q.lhs_min), (1.0, 1.0));
        assert!(quantum_tradeoff_lhs(1, 1.0, 1e-4).is_err());
        assert!(quantum_tradeoff_lhs(4, 1.0, 1.0).is_err());
    }

    #[test]
    fn classical_lhs_examples() {
        assert!((classical_tradeoff_lhs(2, 1.0, 0.5).unwrap() - 6f64.log2()).abs() < 1e-12);
        assert_eq!(classical_tradeoff_lhs(1, 0.0, 0.5).unwrap(), 0.0);
        let v = classical_tradeoff_lhs(100, 1.0, 0.01).unwrap();
        assert!((v - 195.85052047908917).abs() < 1e-9);
        assert!(v <= 200.0);
    }

    #[test]
    fn report_rows_sorted_and_consistent() {
        let pts: Vec<_> = (2..=8).rev().map(|m| ReportPoint::new(None, m, 1.0, 1e-4)).collect();
        let r = build_report(&pts, &[]).unwrap();
        assert_eq!(r.rows.len(), 7);
        assert!(r.rows.windows(2).all(|w| w[0].m < w[1].m));
        for row in &r.rows {
            assert!(row.lhs_min <= row.term_photon && row.lhs_min <= row.term_mode);
            assert_eq!(row.d_exact, None);
        }
        let csv = r.to_csv();
        assert_eq!(csv.lines().filter(|l| !l.starts_with('#')).count(), 8);
        assert!(csv.contains(REPORT_HEADER));
    }

    #[test]
    fn exact_d_column() {
        let refs = equality_references(2).unwrap();
        let r = build_report(&[ReportPoint::new(Some(2), 6, 1.0, 1e-4)], &refs).unwrap();
        assert_eq!(r.rows[0].d_exact, Some(3));
        assert!(r.rows[0].notes.contains("R||"));
        let mut bad = ReportPoint::new(Some(2), 6, 1.0, 1e-4);
        bad.protocol_modes = Some(5);
        assert!(build_report(&[bad], &refs).is_err());
    }
}
