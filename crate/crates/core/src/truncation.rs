//! Photon-number truncation of optical messages.
//!
//! A state whose mean photon number is at most `µ` keeps probability at least
//! `1 − δ` on total photon numbers `≤ a = ⌊µ/δ⌋` (Markov). Projecting onto
//! that finite subspace and renormalizing moves the state by at most `√δ` in
//! trace distance, so every message of a protocol can be replaced by a
//! finite-dimensional one at the cost of `2√δ` extra error.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fock::{DenseOperator, FockDiagonalState, PhotonStatistics, PureState};
use crate::smp::{evaluate_error, Message, PairSelection, SmpProtocol};

/// Default `δ` for truncation runs.
pub const DEFAULT_DELTA: f64 = 1e-4;

/// Which maximum the `µ` of a report refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MuConvention {
    /// Maximum over both parties and all inputs of a single message's mean
    /// photon number.
    PerPartyMax,
}

impl MuConvention {
    pub fn as_str(&self) -> &'static str {
        match self {
            MuConvention::PerPartyMax => "per-party-max",
        }
    }
}

/// Photon-number cutoff derived from a mean-photon budget.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TruncationSpec {
    pub mu: f64,
    pub delta: f64,
    /// `⌊µ/δ⌋`; the retained subspace is total photon number `≤ cutoff`.
    pub cutoff: u64,
    pub modes: usize,
    pub convention: MuConvention,
}

/// Builds the cutoff `a = ⌊µ/δ⌋` for messages over `modes` modes.
pub fn markov_cutoff(mu: f64, delta: f64, modes: usize) -> Result<TruncationSpec> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::DeltaOutOfRange(delta));
    }
    if mu.is_nan() || mu < 0.0 || !mu.is_finite() {
        return Err(Error::param("mu", format!("{mu} must be a finite non-negative number")));
    }
    if modes == 0 {
        return Err(Error::param("modes", "must be at least 1"));
    }
    let ratio = mu / delta;
    if ratio > 9.0e15 {
        return Err(Error::param("mu/delta", format!("{ratio} exceeds the exact integer range")));
    }
    Ok(TruncationSpec {
        mu,
        delta,
        cutoff: floor_ratio(ratio),
        modes,
        convention: MuConvention::PerPartyMax,
    })
}

/// `⌊r⌋`, except that a quotient within a few ulps below an integer (as
/// produced by e.g. `0.3 / 0.1`) rounds up to that integer. Rounding up only
/// enlarges the retained subspace, so the Markov guarantee is unaffected.
fn floor_ratio(ratio: f64) -> u64 {
    let nearest = ratio.round();
    if (ratio - nearest).abs() <= 8.0 * f64::EPSILON * nearest.max(1.0) {
        nearest as u64
    } else {
        ratio.floor() as u64
    }
}

/// Result of projecting a state onto total photon number `≤ cutoff`.
#[derive(Clone, Debug)]
pub struct Truncated<S> {
    /// Renormalized projected state.
    pub state: S,
    /// Retained probability `tr(Pρ)` before renormalization.
    pub weight: f64,
}

/// States that can be projected onto a total-photon-number subspace.
pub trait Truncatable: PhotonStatistics + Sized {
    /// Projects onto total photon number `≤ cutoff`; errors when nothing is
    /// retained.
    fn project_up_to(&self, cutoff: u64) -> Result<Truncated<Self>>;

    /// Trace distance between two states of this kind.
    fn distance_to(&self, other: &Self) -> Result<f64>;
}

impl Truncatable for PureState {
    fn project_up_to(&self, cutoff: u64) -> Result<Truncated<Self>> {
        match self.restrict_up_to(cutoff) {
            (Some(state), weight) if weight > 0.0 => Ok(Truncated { state, weight }),
            _ => Err(Error::VacuousTruncation { cutoff }),
        }
    }

    fn distance_to(&self, other: &Self) -> Result<f64> {
        self.trace_distance(other)
    }
}

impl Truncatable for FockDiagonalState {
    fn project_up_to(&self, cutoff: u64) -> Result<Truncated<Self>> {
        match self.restrict_up_to(cutoff) {
            (Some(state), weight) if weight > 0.0 => Ok(Truncated { state, weight }),
            _ => Err(Error::VacuousTruncation { cutoff }),
        }
    }

    fn distance_to(&self, other: &Self) -> Result<f64> {
        self.trace_distance(other)
    }
}

impl Truncatable for DenseOperator {
    fn project_up_to(&self, cutoff: u64) -> Result<Truncated<Self>> {
        match DenseOperator::project_up_to(self, cutoff) {
            (Some(state), weight) if weight > 0.0 => Ok(Truncated { state, weight }),
            _ => Err(Error::VacuousTruncation { cutoff }),
        }
    }

    fn distance_to(&self, other: &Self) -> Result<f64> {
        self.trace_distance(other)
    }
}

impl Truncatable for Message {
    fn project_up_to(&self, cutoff: u64) -> Result<Truncated<Self>> {
        let (state, weight) = Message::project_up_to(self, cutoff)?;
        Ok(Truncated { state, weight })
    }

    fn distance_to(&self, other: &Self) -> Result<f64> {
        self.trace_distance(other)
    }
}

/// Projects `state` onto the subspace kept by `spec`.
pub fn project_below_cutoff<S: Truncatable>(state: &S, spec: &TruncationSpec) -> Result<Truncated<S>> {
    crate::fock::check_modes(spec.modes, state.mode_count())?;
    state.project_up_to(spec.cutoff)
}

/// `F(ρ, PρP/tr(Pρ)) − √tr(Pρ)` for the projector onto total photon number
/// `≤ cutoff`. The gentle-measurement bound says this is never negative.
pub fn check_gentle_measurement(state: &DenseOperator, cutoff: u64) -> Result<f64> {
    let truncated = Truncatable::project_up_to(state, cutoff)?;
    let fidelity = state.fidelity(&truncated.state)?;
    Ok(fidelity - truncated.weight.sqrt())
}

/// `√δ − T(ρ, PρP/tr(Pρ))`, which is non-negative whenever `tr(Pρ) ≥ 1 − δ`.
///
/// Returns [`Error::PremiseViolated`] if the retained weight is below
/// `1 − δ`; that is not a failure of the bound.
pub fn check_projector_closeness<S: Truncatable>(state: &S, cutoff: u64, delta: f64) -> Result<f64> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::DeltaOutOfRange(delta));
    }
    let truncated = state.project_up_to(cutoff)?;
    if truncated.weight < 1.0 - delta {
        return Err(Error::PremiseViolated(format!(
            "retained weight {} < 1 − δ = {}",
            truncated.weight,
            1.0 - delta
        )));
    }
    Ok(delta.sqrt() - state.distance_to(&truncated.state)?)
}

/// Error bound after replacing every message by one within trace distance
/// `distance`: `ε + 2·distance`.
pub fn error_inflation_bound(original_error: f64, distance: f64) -> f64 {
    original_error + 2.0 * distance
}

/// A protocol whose messages were all truncated, with the accounting needed
/// to check the error budget.
#[derive(Clone, Debug)]
pub struct TransformedProtocol {
    pub protocol: SmpProtocol,
    pub spec: TruncationSpec,
    /// Exact worst-case error of the original protocol.
    pub original_error: f64,
    /// Largest trace distance between an original and a truncated message.
    pub max_trace_distance: f64,
    /// Smallest retained weight over all messages.
    pub min_weight: f64,
    /// `original_error + 2√δ`.
    pub error_bound: f64,
    /// `original_error + 2 · max_trace_distance`.
    pub distance_bound: f64,
}

/// Replaces every message of `protocol` by its projection onto total photon
/// number `≤ ⌊µ/δ⌋`, keeping the referee and target.
///
/// Requires exhaustive enumeration of both parties' inputs, and that every
/// message has mean photon number at most the protocol's declared `µ`.
pub fn transform_protocol(protocol: &SmpProtocol, delta: f64) -> Result<TransformedProtocol> {
    let spec = markov_cutoff(protocol.mu(), delta, protocol.mode_count())?;
    let alice = protocol.alice_messages()?;
    let bob = protocol.bob_messages()?;
    for (party, msgs) in [("alice", &alice), ("bob", &bob)] {
        for (x, m) in msgs.iter().enumerate() {
            let mean = m.mean_photon_number();
            if mean > protocol.mu() + 1e-9 {
                return Err(Error::PremiseViolated(format!(
                    "{party} message for input {x} has mean photon number {mean} > µ = {}",
                    protocol.mu()
                )));
            }
        }
    }

    let mut max_trace_distance: f64 = 0.0;
    let mut min_weight: f64 = 1.0;
    let mut project_all = |msgs: &[Message]| -> Result<Vec<Message>> {
        msgs.iter()
            .map(|m| {
                let t = project_below_cutoff(m, &spec)?;
                let distance = m.truncation_distance(&t.state, t.weight)?;
                max_trace_distance = max_trace_distance.max(distance);
                min_weight = min_weight.min(t.weight);
                Ok(t.state)
            })
            .collect()
    };
    let alice_cut = project_all(&alice)?;
    let bob_cut = project_all(&bob)?;

    let original_error = evaluate_error(protocol, &PairSelection::All)?.worst_error;
    let truncated = protocol.with_messages(
        format!("{} (truncated at a={})", protocol.label(), spec.cutoff),
        alice_cut,
        bob_cut,
    )?;
    Ok(TransformedProtocol {
        protocol: truncated,
        spec,
        original_error,
        max_trace_distance,
        min_weight,
        error_bound: error_inflation_bound(original_error, delta.sqrt()),
        distance_bound: error_inflation_bound(original_error, max_trace_distance),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::FockIndex;
    use num_complex::Complex64;

    #[test]
    fn markov_cutoff_examples() {
        assert_eq!(markov_cutoff(1.0, 1e-4, 1).unwrap().cutoff, 10_000);
        assert_eq!(markov_cutoff(0.0, 0.5, 3).unwrap().cutoff, 0);
        assert_eq!(markov_cutoff(2.5, 0.5, 2).unwrap().cutoff, 5);
        assert_eq!(markov_cutoff(0.3, 0.1, 2).unwrap().cutoff, 3);
        assert_eq!(markov_cutoff(2.9, 1.0 - 1e-9, 1).unwrap().cutoff, 2);
        for bad in [0.0, 1.0, -0.1, 1.5, f64::NAN] {
            assert!(matches!(markov_cutoff(1.0, bad, 1), Err(Error::DeltaOutOfRange(_))));
        }
        assert!(markov_cutoff(-1.0, 0.5, 1).is_err());
    }

    #[test]
    fn markov_cutoff_matches_exact_floor_on_decimal_grid() {
        for mu_tenths in 0..100u64 {
            for delta_thousandths in 1..1000u64 {
                let mu = mu_tenths as f64 / 10.0;
                let delta = delta_thousandths as f64 / 1000.0;
                let exact = (mu_tenths * 100) / delta_thousandths;
                assert_eq!(markov_cutoff(mu, delta, 1).unwrap().cutoff, exact, "mu={mu} delta={delta}");
            }
        }
    }

    #[test]
    fn projection_examples() {
        let spec = markov_cutoff(1.0, 0.5, 2).unwrap();
        let t = project_below_cutoff(&PureState::vacuum(2), &spec).unwrap();
        assert_eq!(t.weight, 1.0);
        assert_eq!(t.state, PureState::vacuum(2));

        let coh = PureState::coherent(Complex64::new(1.0, 0.0), 40).state;
        let spec = markov_cutoff(1.5, 0.5, 1).unwrap();
        assert_eq!(spec.cutoff, 3);
        let t = project_below_cutoff(&coh, &spec).unwrap();
        let poisson_cdf = (-1.0f64).exp() * (1.0 + 1.0 + 0.5 + 1.0 / 6.0);
        assert!((t.weight - 0.98101).abs() < 1e-5);
        assert!((t.weight - poisson_cdf).abs() < 1e-12);

        let spec = markov_cutoff(0.0, 0.5, 1).unwrap();
        assert!(matches!(
            project_below_cutoff(&PureState::fock(&[1]).unwrap(), &spec),
            Err(Error::VacuousTruncation { cutoff: 0 })
        ));
        assert!(matches!(
            project_below_cutoff(&PureState::vacuum(2), &spec),
            Err(Error::ModeMismatch { .. })
        ));
    }

    #[test]
    fn gentle_measurement_on_pure_states() {
        let inside = PureState::fock(&[0, 1]).unwrap().to_dense().unwrap();
        assert!(check_gentle_measurement(&inside, 1).unwrap().abs() < 1e-9);

        let coh = PureState::coherent(Complex64::new(0.8, 0.3), 8).state;
        let rho = coh.to_dense().unwrap();
        let slack = check_gentle_measurement(&rho, 2).unwrap();
        assert!(slack.abs() < 1e-9, "slack {slack}");
    }

    #[test]
    fn projector_closeness_examples() {
        let inside = PureState::fock(&[1]).unwrap();
        assert!((check_projector_closeness(&inside, 1, 0.1).unwrap() - 0.1f64.sqrt()).abs() < 1e-12);

        let coh = PureState::coherent(Complex64::new(1.0, 0.0), 40).state;
        let gap = check_projector_closeness(&coh, 3, 0.02).unwrap();
        let distance = 0.02f64.sqrt() - gap;
        assert!((distance - 0.1378).abs() < 1e-4);
        assert!((distance - (1.0 - coh.weight_up_to(3)).sqrt()).abs() < 1e-9);

        assert!(matches!(
            check_projector_closeness(&coh, 1, 0.02),
            Err(Error::PremiseViolated(_))
        ));
    }

    #[test]
    fn diagonal_truncation_distance_is_discarded_mass() {
        let idx = |n: u32| FockIndex::new(vec![n]).unwrap();
        let d = FockDiagonalState::new(1, [(idx(0), 0.7), (idx(1), 0.2), (idx(5), 0.1)]).unwrap();
        let t = d.project_up_to(1).unwrap();
        assert!((t.weight - 0.9).abs() < 1e-12);
        assert!((d.distance_to(&t.state).unwrap() - 0.1).abs() < 1e-12);
    }
}
