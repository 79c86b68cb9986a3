//! Seeded property sweeps over the finite inequalities the library relies on.
//!
//! Each suite evaluates a slack (a quantity that must be non-negative up to
//! a tolerance) on many cases and reports the count, the smallest slack and
//! the first violating case. Random cases come from a ChaCha8 generator with
//! one stream per (suite, case), so results are identical for every thread
//! count.

use std::fmt::Write as _;
use std::str::FromStr;

use num_complex::Complex64;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::combinatorics::{
    binomial_power_bound, ceil_sqrt, count_rank, entropy_bound, log2_big, log_rank_bounds,
};
use crate::error::{Error, Result};
use crate::fock::{random, DenseOperator, FockIndex, PhotonStatistics, PureState};
use crate::smp::{evaluate_error, Message, PairSelection, Referee, SmpProtocol, Target};
use crate::truncation::{
    check_gentle_measurement, check_projector_closeness, markov_cutoff, Truncatable,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Suite {
    FockMetrics,
    Markov,
    Gentle,
    Closeness,
    Lemma3,
    Lemma4,
    LogRank,
    Entropy,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::FockMetrics,
        Suite::Markov,
        Suite::Gentle,
        Suite::Closeness,
        Suite::Lemma3,
        Suite::Lemma4,
        Suite::LogRank,
        Suite::Entropy,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::FockMetrics => "fock-metrics",
            Suite::Markov => "markov",
            Suite::Gentle => "gentle",
            Suite::Closeness => "closeness",
            Suite::Lemma3 => "lemma3",
            Suite::Lemma4 => "lemma4",
            Suite::LogRank => "log-rank",
            Suite::Entropy => "entropy",
        }
    }

    /// Tolerance on the slack when none is injected.
    pub fn default_tolerance(&self) -> f64 {
        match self {
            Suite::Markov => 1e-12,
            Suite::Lemma4 => 0.0,
            _ => 1e-9,
        }
    }

    fn stream(&self) -> u64 {
        *self as u64
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .iter()
            .copied()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = Suite::ALL.iter().map(Suite::name).collect();
                Error::Config(format!("unknown suite `{s}`; expected one of {}", names.join(", ")))
            })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerifyConfig {
    pub seed: u64,
    /// Random cases per randomized check.
    pub samples: usize,
    /// Largest `n` and `m` in the exhaustive binomial-power sweep.
    pub lemma4_max: u32,
    /// Replaces every suite's tolerance; a negative value demands strictly
    /// positive slack and is used to exercise the failure path.
    pub tolerance_override: Option<f64>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            seed: 0,
            samples: 1000,
            lemma4_max: 50,
            tolerance_override: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteResult {
    pub suite: Suite,
    pub cases: u64,
    pub min_slack: f64,
    pub tolerance: f64,
    /// Description of the first case whose slack fell below `−tolerance`.
    pub counterexample: Option<String>,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

/// Accumulates slacks in case order.
struct Tally {
    tolerance: f64,
    cases: u64,
    min_slack: f64,
    counterexample: Option<String>,
}

impl Tally {
    fn new(tolerance: f64) -> Self {
        Tally {
            tolerance,
            cases: 0,
            min_slack: f64::INFINITY,
            counterexample: None,
        }
    }

    fn record(&mut self, slack: f64, describe: impl FnOnce() -> String) {
        self.cases += 1;
        if slack < self.min_slack || slack.is_nan() {
            self.min_slack = slack;
        }
        if (slack.is_nan() || slack < -self.tolerance) && self.counterexample.is_none() {
            self.counterexample = Some(format!("{} (slack {slack:e})", describe()));
        }
    }

    fn extend(&mut self, cases: Vec<(f64, String)>) {
        for (slack, desc) in cases {
            self.record(slack, || desc);
        }
    }

    fn finish(self, suite: Suite) -> SuiteResult {
        SuiteResult {
            suite,
            cases: self.cases,
            min_slack: if self.cases == 0 { 0.0 } else { self.min_slack },
            tolerance: self.tolerance,
            counterexample: self.counterexample,
        }
    }
}

fn case_rng(seed: u64, suite: Suite, case: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream((suite.stream() << 40) | case);
    rng
}

/// Runs the randomized case generator `f` for `samples` cases in parallel,
/// keeping case order.
fn sweep<F>(cfg: &VerifyConfig, suite: Suite, offset: u64, f: F) -> Result<Vec<(f64, String)>>
where
    F: Fn(&mut ChaCha8Rng, u64) -> Result<Vec<(f64, String)>> + Sync,
{
    let chunks: Vec<Vec<(f64, String)>> = (0..cfg.samples as u64)
        .into_par_iter()
        .map(|i| f(&mut case_rng(cfg.seed, suite, offset + i), i))
        .collect::<Result<_>>()?;
    Ok(chunks.into_iter().flatten().collect())
}

/// Random dimension-capped shape: `(modes, max_total)` with
/// `C(max_total + modes, modes) ≤ 32`.
fn small_shape(rng: &mut ChaCha8Rng) -> (usize, u64) {
    let modes = rng.random_range(1..=4usize);
    let max_total = match modes {
        1 => rng.random_range(1..=31),
        2 => rng.random_range(1..=6),
        3 => rng.random_range(1..=3),
        _ => rng.random_range(1..=2),
    };
    (modes, max_total)
}

fn random_density(rng: &mut ChaCha8Rng) -> DenseOperator {
    let (modes, max_total) = small_shape(rng);
    let dim = count_rank(modes, max_total).rank.to_usize().unwrap_or(1);
    let rank = rng.random_range(1..=(dim / 2).max(1));
    let decay = rng.random_range(0.0..0.6);
    random::density_operator(rng, modes, max_total, rank, decay)
}

fn random_pure(rng: &mut ChaCha8Rng) -> PureState {
    let (modes, max_total) = small_shape(rng);
    let support = rng.random_range(1..=12);
    let decay = rng.random_range(0.0..0.8);
    random::pure_state(rng, modes, max_total, support, decay)
}

fn fock_metrics(cfg: &VerifyConfig, tally: &mut Tally) -> Result<()> {
    let cases = sweep(cfg, Suite::FockMetrics, 0, |rng, i| {
        let mut out = Vec::new();
        let a = random_density(rng);
        let modes = a.mode_count();
        let max_total = a.max_total_photons().max(1);
        let rank = rng.random_range(1..=2);
        let b = random::density_operator(rng, modes, max_total, rank, 0.3);
        let c = random::density_operator(rng, modes, max_total, 1, 0.1);
        let tab = a.trace_distance(&b)?;
        let tba = b.trace_distance(&a)?;
        let f = a.fidelity(&b)?;
        out.push((tab, format!("case {i}: T(a,b) ≥ 0")));
        out.push((1.0 - tab, format!("case {i}: T(a,b) ≤ 1")));
        out.push((-(tab - tba).abs(), format!("case {i}: T symmetric")));
        out.push((a.trace_distance(&b)? + b.trace_distance(&c)? - a.trace_distance(&c)?, format!("case {i}: triangle inequality")));
        out.push((tab - (1.0 - f), format!("case {i}: 1 − F ≤ T")));
        out.push(((1.0 - f * f).max(0.0).sqrt() - tab, format!("case {i}: T ≤ √(1 − F²)")));
        out.push((-(1.0 - a.fidelity(&a)?).abs(), format!("case {i}: F(a,a) = 1")));
        let p = random_pure(rng);
        let q = random::pure_state(rng, p.mode_count(), p.max_total_photons().max(1), 4, 0.2);
        let sparse = p.trace_distance(&q)?;
        let dense = p.to_dense()?.trace_distance(&q.to_dense()?)?;
        out.push((-(sparse - dense).abs(), format!("case {i}: pure trace distance matches dense")));
        Ok(out)
    })?;
    tally.extend(cases);
    Ok(())
}

fn markov(cfg: &VerifyConfig, tally: &mut Tally) -> Result<()> {
    let cases = sweep(cfg, Suite::Markov, 0, |rng, i| {
        let state: Box<dyn PhotonStatistics> = match i % 3 {
            0 => Box::new(random_pure(rng)),
            1 => {
                let (modes, max_total) = small_shape(rng);
                Box::new(random::diagonal_state(rng, modes, max_total, 10, 0.3))
            }
            _ => Box::new(random_density(rng)),
        };
        let mean = state.mean_photon_number();
        let mut out = Vec::new();
        for a in [0.5, 1.0, 1.5, 2.0, 3.0, 5.0, 8.0, 13.0, 21.0] {
            let p = state.prob_at_least(a);
            out.push((mean / a - p, format!("case {i}: Pr[N ≥ {a}] = {p} vs mean {mean}")));
        }
        Ok(out)
    })?;
    tally.extend(cases);
    Ok(())
}

fn gentle(cfg: &VerifyConfig, tally: &mut Tally) -> Result<()> {
    let dense = sweep(cfg, Suite::Gentle, 0, |rng, i| {
        let rho = random_density(rng);
        let cutoff = rng.random_range(0..=rho.max_total_photons());
        let slack = check_gentle_measurement(&rho, cutoff)?;
        Ok(vec![(slack, format!("density case {i}: dim {} cutoff {cutoff}", rho.dim()))])
    })?;
    tally.extend(dense);
    let pure = sweep(cfg, Suite::Gentle, 1 << 20, |rng, i| {
        let psi = random_pure(rng);
        let lowest = psi.iter().map(|(i, _)| i.total_photons()).min().unwrap_or(0);
        let cutoff = rng.random_range(lowest..=psi.max_total_photons());
        let t = psi.project_up_to(cutoff)?;
        let f = psi.fidelity(&t.state)?;
        let gap = (f - t.weight.sqrt()).abs();
        Ok(vec![(-gap, format!("pure case {i}: F = {f} vs √w = {}", t.weight.sqrt()))])
    })?;
    tally.extend(pure);
    Ok(())
}

/// Smallest cutoff whose retained weight is at least `1 − delta`.
fn tight_cutoff(state: &impl PhotonStatistics, delta: f64) -> u64 {
    let mut acc = 0.0;
    for (n, p) in state.photon_number_distribution() {
        acc += p;
        if acc >= 1.0 - delta {
            return n;
        }
    }
    state.max_total_photons()
}

fn closeness(cfg: &VerifyConfig, tally: &mut Tally) -> Result<()> {
    let cases = sweep(cfg, Suite::Closeness, 0, |rng, i| {
        let rho = random_density(rng);
        let psi = random_pure(rng);
        let mut out = Vec::new();
        for delta in [0.3, 0.1, 0.02] {
            let c = tight_cutoff(&rho, delta);
            match check_projector_closeness(&rho, c, delta) {
                Ok(s) => out.push((s, format!("density case {i}: δ={delta} cutoff {c}"))),
                Err(Error::PremiseViolated(_)) => {}
                Err(e) => return Err(e),
            }
            let c = tight_cutoff(&psi, delta);
            match check_projector_closeness(&psi, c, delta) {
                Ok(s) => out.push((s, format!("pure case {i}: δ={delta} cutoff {c}"))),
                Err(Error::PremiseViolated(_)) => {}
                Err(e) => return Err(e),
            }
        }
        Ok(out)
    })?;
    tally.extend(cases);
    Ok(())
}

/// Mixes `psi` with a random state so the trace distance to `psi` is at
/// most about `strength`.
fn perturb(rng: &mut ChaCha8Rng, psi: &PureState, strength: f64) -> Result<PureState> {
    let noise = random::pure_state(rng, psi.mode_count(), psi.max_total_photons() + 1, 6, 0.2);
    let terms: Vec<(FockIndex, Complex64)> = psi
        .iter()
        .map(|(i, a)| (i.clone(), *a))
        .chain(noise.iter().map(|(i, a)| (i.clone(), a * strength)))
        .fold(std::collections::BTreeMap::new(), |mut acc, (i, a)| {
            *acc.entry(i).or_insert(Complex64::default()) += a;
            acc
        })
        .into_iter()
        .collect();
    PureState::normalized(psi.mode_count(), terms)
}

fn toy_protocol(alice: Vec<Message>, bob: Vec<Message>, referee: Referee) -> Result<SmpProtocol> {
    let mu = alice
        .iter()
        .chain(&bob)
        .map(|m| m.mean_photon_number())
        .fold(0.0, f64::max);
    SmpProtocol::from_messages("toy", mu, alice, bob, referee, Target::Equality { n: 1 })
}

fn lemma3(cfg: &VerifyConfig, tally: &mut Tally) -> Result<()> {
    let samples = (cfg.samples / 5).max(1);
    let cfg = VerifyConfig { samples, ..cfg.clone() };
    let cases = sweep(&cfg, Suite::Lemma3, 0, |rng, i| {
        let modes = rng.random_range(1..=2usize);
        let max_total = if modes == 1 { 4 } else { 2 };
        let msgs: Vec<Message> = (0..4)
            .map(|_| Message::Pure(random::pure_state(rng, modes, max_total, 5, 0.3)))
            .collect();
        let strength = rng.random_range(0.0..0.5);
        let perturbed: Vec<Message> = msgs
            .iter()
            .map(|m| Ok(Message::Pure(perturb(rng, &m.to_pure()?, strength)?)))
            .collect::<Result<_>>()?;
        let mut t: f64 = 0.0;
        for (a, b) in msgs.iter().zip(&perturbed) {
            t = t.max(a.trace_distance(b)?);
        }
        let mut out = Vec::new();
        let referees = [
            Referee::DifferencePortVacuum,
            Referee::fock_stochastic(|a, b| {
                let d = a.total_photons().abs_diff(b.total_photons());
                1.0 / (1.0 + d as f64)
            }),
        ];
        for (r_idx, referee) in referees.into_iter().enumerate() {
            let before = toy_protocol(msgs[..2].to_vec(), msgs[2..].to_vec(), referee.clone())?;
            let after = before.with_messages("perturbed", perturbed[..2].to_vec(), perturbed[2..].to_vec())?;
            let e0 = evaluate_error(&before, &PairSelection::All)?;
            let e1 = evaluate_error(&after, &PairSelection::All)?;
            out.push((
                e0.worst_error + 2.0 * t - e1.worst_error,
                format!("case {i} referee {r_idx}: error {} → {} with t = {t}", e0.worst_error, e1.worst_error),
            ));
            for (p0, p1) in e0.per_pair.iter().zip(&e1.per_pair) {
                out.push((
                    2.0 * t - (p0.p_error - p1.p_error).abs(),
                    format!("case {i} referee {r_idx} pair ({},{}): per-pair change", p0.x, p0.y),
                ));
            }
        }
        Ok(out)
    })?;
    tally.extend(cases);
    Ok(())
}

fn lemma4(cfg: &VerifyConfig, tally: &mut Tally) -> Result<()> {
    let max = cfg.lemma4_max;
    let cases: Vec<(f64, String)> = (1..=max)
        .into_par_iter()
        .map(|n| {
            (1..=max)
                .map(|m| {
                    let b = binomial_power_bound(n, m)?;
                    let slack = if b.holds() {
                        log2_big(&b.rhs) - log2_big(&b.lhs)
                    } else {
                        -(log2_big(&b.lhs) - log2_big(&b.rhs)).max(f64::MIN_POSITIVE)
                    };
                    Ok((slack, format!("n={n} m={m}: C(n+m,m) = {} vs {}", b.lhs, b.rhs)))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    tally.extend(cases);
    Ok(())
}

fn log_rank(tally: &mut Tally) -> Result<()> {
    let mut points = Vec::new();
    for m in 2..=64usize {
        for mu in [0.5, 1.0, 2.0, 4.0, 8.0] {
            for delta in [1e-1, 1e-2, 1e-4] {
                points.push((m, mu, delta));
            }
        }
    }
    let cases: Vec<(f64, String)> = points
        .into_par_iter()
        .map(|(m, mu, delta)| {
            let spec = markov_cutoff(mu, delta, m)?;
            let b = log_rank_bounds(&spec);
            Ok((
                b.slack(),
                format!("m={m} µ={mu} δ={delta} a={}: log2 rank {} vs {}", spec.cutoff, b.actual, b.min_bound()),
            ))
        })
        .collect::<Result<_>>()?;
    tally.extend(cases);
    Ok(())
}

fn entropy(tally: &mut Tally) -> Result<()> {
    let mut ks: Vec<u64> = (1..=10_000u64).map(ceil_sqrt).collect();
    ks.dedup();
    let cases: Vec<(f64, String)> = ks
        .into_par_iter()
        .map(|k| {
            let e = entropy_bound(k, k as usize)?;
            Ok((e.bound - e.log2_rank, format!("a=m={k}: log2 rank {} vs {}", e.log2_rank, e.bound)))
        })
        .collect::<Result<_>>()?;
    tally.extend(cases);
    for (a, m) in [(0u64, 1usize), (5, 1), (1, 5), (30, 7), (7, 30), (200, 3)] {
        let e = entropy_bound(a, m)?;
        tally.record(e.bound - e.log2_rank, || format!("a={a} m={m}"));
    }
    Ok(())
}

pub fn run_suite(suite: Suite, cfg: &VerifyConfig) -> Result<SuiteResult> {
    let mut tally = Tally::new(cfg.tolerance_override.unwrap_or(suite.default_tolerance()));
    match suite {
        Suite::FockMetrics => fock_metrics(cfg, &mut tally)?,
        Suite::Markov => markov(cfg, &mut tally)?,
        Suite::Gentle => gentle(cfg, &mut tally)?,
        Suite::Closeness => closeness(cfg, &mut tally)?,
        Suite::Lemma3 => lemma3(cfg, &mut tally)?,
        Suite::Lemma4 => lemma4(cfg, &mut tally)?,
        Suite::LogRank => log_rank(&mut tally)?,
        Suite::Entropy => entropy(&mut tally)?,
    }
    Ok(tally.finish(suite))
}

pub fn run_suites(suites: &[Suite], cfg: &VerifyConfig) -> Result<Vec<SuiteResult>> {
    suites.iter().map(|&s| run_suite(s, cfg)).collect()
}

/// One line per suite, then an overall verdict.
pub fn summary(results: &[SuiteResult], cfg: &VerifyConfig) -> String {
    let mut out = format!("# verify seed={} samples={}\n", cfg.seed, cfg.samples);
    out.push_str("suite,status,cases,min_slack,tolerance\n");
    for r in results {
        let _ = writeln!(
            out,
            "{},{},{},{:e},{:e}",
            r.suite.name(),
            if r.passed() { "pass" } else { "FAIL" },
            r.cases,
            r.min_slack,
            r.tolerance
        );
    }
    for r in results.iter().filter(|r| !r.passed()) {
        let _ = writeln!(
            out,
            "# counterexample {}: {}",
            r.suite.name(),
            r.counterexample.as_deref().unwrap_or_default()
        );
    }
    let ok = results.iter().all(SuiteResult::passed);
    let _ = writeln!(out, "# overall: {}", if ok { "pass" } else { "FAIL" });
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick() -> VerifyConfig {
        VerifyConfig {
            seed: 5,
            samples: 40,
            lemma4_max: 12,
            tolerance_override: None,
        }
    }

    #[test]
    fn every_suite_passes_on_a_small_run() {
        for r in run_suites(&Suite::ALL, &quick()).unwrap() {
            assert!(r.passed(), "{:?}", r);
            assert!(r.cases > 0, "{:?}", r.suite);
        }
    }

    #[test]
    fn injected_tolerance_produces_counterexample() {
        let cfg = VerifyConfig {
            tolerance_override: Some(-1e6),
            ..quick()
        };
        let r = run_suite(Suite::Markov, &cfg).unwrap();
        assert!(!r.passed());
        assert!(summary(&[r], &cfg).contains("counterexample markov"));
    }

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }
}
