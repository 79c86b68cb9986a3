use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use super::Message;
use crate::combinatorics::binomial;
use crate::error::{Error, Result};
use crate::fock::{check_modes, FockIndex, PureState, SUPPORT_CAP};

/// Stochastic decision on a pair of Fock measurement outcomes: returns the
/// probability of outputting 1.
pub type FockDecision = dyn Fn(&FockIndex, &FockIndex) -> f64 + Send + Sync;

/// Decision rule applied by the referee to the pair of messages. The
/// referee outputs 1 ("accept") with the probability returned by
/// [`Referee::accept_probability`].
#[derive(Clone)]
pub enum Referee {
    /// Interfere mode `i` of Alice with mode `i` of Bob on a balanced
    /// beamsplitter and accept iff every difference port is in vacuum.
    DifferencePortVacuum,
    /// Measure both messages in the Fock basis and accept with the given
    /// probability.
    FockStochastic(Arc<FockDecision>),
}

impl fmt::Debug for Referee {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Referee::DifferencePortVacuum => f.write_str("DifferencePortVacuum"),
            Referee::FockStochastic(_) => f.write_str("FockStochastic(..)"),
        }
    }
}

impl Referee {
    pub fn fock_stochastic(rule: impl Fn(&FockIndex, &FockIndex) -> f64 + Send + Sync + 'static) -> Self {
        Referee::FockStochastic(Arc::new(rule))
    }

    pub fn describe(&self) -> &'static str {
        match self {
            Referee::DifferencePortVacuum => "beamsplitter difference-port vacuum test",
            Referee::FockStochastic(_) => "Fock-basis stochastic decision",
        }
    }

    /// Probability that the referee outputs 1 on messages `a` and `b`.
    pub fn accept_probability(&self, a: &Message, b: &Message) -> Result<f64> {
        check_modes(a.mode_count(), b.mode_count())?;
        let p = match self {
            Referee::DifferencePortVacuum => match (a, b) {
                (Message::Product(pa), Message::Product(pb)) => {
                    let mut p = 1.0;
                    for (fa, fb) in pa.factors().iter().zip(pb.factors()) {
                        p *= vacuum_difference_probability(fa, fb)?;
                    }
                    p
                }
                _ => {
                    let ea = a.ensemble()?;
                    let eb = b.ensemble()?;
                    let mut p = 0.0;
                    for (wa, sa) in &ea {
                        for (wb, sb) in &eb {
                            p += wa * wb * vacuum_difference_probability(sa, sb)?;
                        }
                    }
                    p
                }
            },
            Referee::FockStochastic(rule) => {
                let da = a.fock_distribution()?;
                let db = b.fock_distribution()?;
                let mut p = 0.0;
                for (ia, wa) in &da {
                    for (ib, wb) in &db {
                        let q = rule(ia, ib);
                        if !(0.0..=1.0).contains(&q) {
                            return Err(Error::IncompatibleReferee(format!(
                                "decision probability {q} on ({ia:?}, {ib:?}) is outside [0, 1]"
                            )));
                        }
                        p += wa * wb * q;
                    }
                }
                p
            }
        };
        if !(-1e-9..=1.0 + 1e-9).contains(&p) {
            return Err(Error::IncompatibleReferee(format!(
                "acceptance probability {p} is outside [0, 1]"
            )));
        }
        Ok(p.clamp(0.0, 1.0))
    }
}

fn sqrt_binomial(n: u64, k: u64) -> f64 {
    let c = binomial(n, k);
    crate::combinatorics::big_to_f64(&c).sqrt()
}

/// Probability that every difference port is empty after interfering the
/// `m`-mode kets `a` and `b` mode by mode.
///
/// The amplitude of `|s⟩` on the sum ports with vacuum on the difference
/// ports is `2^{−|s|/2} Σ_{n+k=s} ψ_n φ_k Π_i √C(s_i, n_i)`.
pub fn vacuum_difference_probability(a: &PureState, b: &PureState) -> Result<f64> {
    check_modes(a.mode_count(), b.mode_count())?;
    let pairs = a.support_size().saturating_mul(b.support_size());
    if pairs > SUPPORT_CAP.saturating_mul(16) {
        return Err(Error::SupportCapExceeded {
            size: pairs,
            cap: SUPPORT_CAP.saturating_mul(16),
        });
    }
    let mut sums: BTreeMap<Vec<u32>, Complex64> = BTreeMap::new();
    for (na, amp_a) in a.iter() {
        for (nb, amp_b) in b.iter() {
            let s: Vec<u32> = na
                .occupations()
                .iter()
                .zip(nb.occupations())
                .map(|(x, y)| x + y)
                .collect();
            let mut coeff = 1.0;
            for (&si, &ni) in s.iter().zip(na.occupations()) {
                coeff *= sqrt_binomial(u64::from(si), u64::from(ni));
            }
            let total: u32 = s.iter().sum();
            coeff *= 0.5f64.powf(f64::from(total) / 2.0);
            *sums.entry(s).or_default() += amp_a * amp_b * coeff;
        }
    }
    Ok(sums.values().map(|z| z.norm_sqr()).sum())
}

/// Balanced beamsplitter acting on single-mode kets `a` (first input) and
/// `b` (second input), with `a† → (c† + d†)/√2` and `b† → (c† − d†)/√2`.
/// Returns the two-mode output `(c, d)`, where `d` is the difference port.
pub fn beamsplitter_pair(a: &PureState, b: &PureState) -> Result<PureState> {
    check_modes(1, a.mode_count())?;
    check_modes(1, b.mode_count())?;
    let max_n = a.iter().map(|(i, _)| i.total_photons()).max().unwrap_or(0);
    let max_k = b.iter().map(|(i, _)| i.total_photons()).max().unwrap_or(0);
    let size = ((max_n + max_k + 1) * (max_n + max_k + 2) / 2) as usize;
    if size > SUPPORT_CAP {
        return Err(Error::SupportCapExceeded {
            size,
            cap: SUPPORT_CAP,
        });
    }
    let ln_fact = ln_factorials(max_n + max_k);
    let mut out: BTreeMap<(u32, u32), Complex64> = BTreeMap::new();
    for (na, amp_a) in a.iter() {
        let n = na.total_photons();
        for (nb, amp_b) in b.iter() {
            let k = nb.total_photons();
            let amp = amp_a * amp_b;
            let s = n + k;
            // (c+d)^n (c−d)^k = Σ_q d^q c^{s−q} Σ_j C(n,j) C(k,q−j) (−1)^{q−j}
            for q in 0..=s {
                let p = s - q;
                let mut coeff = 0.0;
                for j in q.saturating_sub(k)..=q.min(n) {
                    let term = crate::combinatorics::big_to_f64(&binomial(n, j))
                        * crate::combinatorics::big_to_f64(&binomial(k, q - j));
                    coeff += if (q - j) % 2 == 0 { term } else { -term };
                }
                if coeff == 0.0 {
                    continue;
                }
                let ln_norm = 0.5
                    * (ln_fact[p as usize] + ln_fact[q as usize]
                        - s as f64 * std::f64::consts::LN_2
                        - ln_fact[n as usize]
                        - ln_fact[k as usize]);
                *out.entry((p as u32, q as u32)).or_default() += amp * coeff * ln_norm.exp();
            }
        }
    }
    let terms: Vec<(FockIndex, Complex64)> = out
        .into_iter()
        .map(|((p, q), z)| Ok((FockIndex::new(vec![p, q])?, z)))
        .collect::<Result<_>>()?;
    PureState::normalized(2, terms)
}

fn ln_factorials(max: u64) -> Vec<f64> {
    let mut v = vec![0.0; max as usize + 1];
    for i in 1..=max as usize {
        v[i] = v[i - 1] + (i as f64).ln();
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{PhotonStatistics, ProductState};

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn single_photon_splits_evenly() {
        let one = PureState::fock(&[1]).unwrap();
        let vac = PureState::vacuum(1);
        let out = beamsplitter_pair(&one, &vac).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((out.amplitude(&FockIndex::new(vec![1, 0]).unwrap()) - c(h)).norm() < 1e-12);
        assert!((out.amplitude(&FockIndex::new(vec![0, 1]).unwrap()) - c(h)).norm() < 1e-12);
        let out = beamsplitter_pair(&vac, &one).unwrap();
        assert!((out.amplitude(&FockIndex::new(vec![0, 1]).unwrap()) - c(-h)).norm() < 1e-12);
    }

    #[test]
    fn hong_ou_mandel_dip() {
        let one = PureState::fock(&[1]).unwrap();
        let out = beamsplitter_pair(&one, &one).unwrap();
        assert!(out.amplitude(&FockIndex::new(vec![1, 1]).unwrap()).norm() < 1e-12);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((out.amplitude(&FockIndex::new(vec![2, 0]).unwrap()) - c(h)).norm() < 1e-12);
        assert!((out.amplitude(&FockIndex::new(vec![0, 2]).unwrap()) - c(-h)).norm() < 1e-12);
    }

    #[test]
    fn equal_coherent_states_leave_difference_port_empty() {
        for &lambda in &[0.1, 0.5, 1.0] {
            let alpha = c(f64::sqrt(lambda));
            let s = PureState::coherent(alpha, 25).state;
            let out = beamsplitter_pair(&s, &s).unwrap();
            let expected = PureState::coherent(alpha * std::f64::consts::SQRT_2, 50)
                .state
                .tensor(&PureState::vacuum(1))
                .unwrap();
            let f = out.overlap(&expected).unwrap().norm();
            assert!((1.0 - f).abs() < 1e-9, "lambda={lambda} fidelity {f}");
        }
    }

    #[test]
    fn vacuum_probability_matches_full_output() {
        let a = PureState::normalized(1, [(FockIndex::new(vec![0]).unwrap(), c(0.6)), (FockIndex::new(vec![2]).unwrap(), Complex64::new(0.3, 0.5))]).unwrap();
        let b = PureState::normalized(1, [(FockIndex::new(vec![1]).unwrap(), c(0.8)), (FockIndex::new(vec![3]).unwrap(), c(-0.4))]).unwrap();
        let out = beamsplitter_pair(&a, &b).unwrap();
        let direct: f64 = out
            .iter()
            .filter(|(i, _)| i.occupations()[1] == 0)
            .map(|(_, z)| z.norm_sqr())
            .sum();
        let fast = vacuum_difference_probability(&a, &b).unwrap();
        assert!((direct - fast).abs() < 1e-12);
        let before = a.tensor(&b).unwrap().photon_number_distribution();
        let after = out.photon_number_distribution();
        for (n, p) in before {
            assert!((after.get(&n).copied().unwrap_or(0.0) - p).abs() < 1e-9);
        }
    }

    #[test]
    fn product_referee_matches_closed_form() {
        let lambda: f64 = 0.4;
        let a = ProductState::coherent(&[c(lambda.sqrt()), c(lambda.sqrt())], 1e-14).unwrap();
        let b = ProductState::coherent(&[c(lambda.sqrt()), c(-lambda.sqrt())], 1e-14).unwrap();
        let r = Referee::DifferencePortVacuum;
        let p = r.accept_probability(&a.clone().into(), &b.clone().into()).unwrap();
        assert!((p - (-2.0 * lambda).exp()).abs() < 1e-9);
        let same = r.accept_probability(&a.clone().into(), &a.clone().into()).unwrap();
        assert!((1.0 - same).abs() < 1e-12);
        let pa = Message::Pure(a.expand().unwrap());
        let pb = Message::Pure(b.expand().unwrap());
        assert!((r.accept_probability(&pa, &pb).unwrap() - p).abs() < 1e-12);
    }
}
