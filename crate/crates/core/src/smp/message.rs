use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::fock::{
    check_modes, DenseOperator, FockDiagonalState, FockIndex, PhotonStatistics, ProductState,
    PureState,
};

/// A message sent by Alice or Bob to the referee.
#[derive(Clone, Debug, PartialEq)]
pub enum Message {
    /// Product of single-mode kets (coherent-state encodings).
    Product(ProductState),
    Pure(PureState),
    /// Mixture of Fock basis kets.
    Diagonal(FockDiagonalState),
}

impl Message {
    pub fn mode_count(&self) -> usize {
        match self {
            Message::Product(s) => s.mode_count(),
            Message::Pure(s) => s.mode_count(),
            Message::Diagonal(s) => s.mode_count(),
        }
    }

    /// Probability discarded when the message's factors were pre-truncated.
    pub fn tail_mass(&self) -> f64 {
        match self {
            Message::Product(s) => s.tail_mass(),
            _ => 0.0,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Message::Product(_) => "product",
            Message::Pure(_) => "pure",
            Message::Diagonal(_) => "diagonal",
        }
    }

    /// Projection onto total photon number `≤ cutoff`, renormalized, with the
    /// retained weight. A product message already inside the subspace is
    /// returned unchanged; otherwise it is expanded into a multimode ket.
    pub fn project_up_to(&self, cutoff: u64) -> Result<(Message, f64)> {
        let vacuous = || Error::VacuousTruncation { cutoff };
        match self {
            Message::Product(s) => {
                if s.max_total_photons() <= cutoff {
                    return Ok((self.clone(), 1.0));
                }
                let weight = s.weight_up_to(cutoff);
                if weight <= 0.0 {
                    return Err(vacuous());
                }
                Ok((Message::Pure(s.expand_up_to(cutoff)?), weight))
            }
            Message::Pure(s) => match s.restrict_up_to(cutoff) {
                (Some(t), w) if w > 0.0 => Ok((Message::Pure(t), w)),
                _ => Err(vacuous()),
            },
            Message::Diagonal(s) => match s.restrict_up_to(cutoff) {
                (Some(t), w) if w > 0.0 => Ok((Message::Diagonal(t), w)),
                _ => Err(vacuous()),
            },
        }
    }

    /// Trace distance between this message and its own truncation with
    /// retained weight `weight`. For pure messages this is `√(1 − weight)`
    /// exactly, which avoids expanding large products.
    pub fn truncation_distance(&self, truncated: &Message, weight: f64) -> Result<f64> {
        match (self, truncated) {
            (Message::Product(_), Message::Product(_)) | (Message::Pure(_), Message::Pure(_))
                if self == truncated =>
            {
                Ok(0.0)
            }
            (Message::Product(_) | Message::Pure(_), Message::Pure(_)) => {
                Ok((1.0 - weight).max(0.0).sqrt())
            }
            _ => self.trace_distance(truncated),
        }
    }

    /// Multimode ket for pure messages (products are expanded).
    pub fn to_pure(&self) -> Result<PureState> {
        match self {
            Message::Product(s) => s.expand(),
            Message::Pure(s) => Ok(s.clone()),
            Message::Diagonal(_) => Err(Error::IncompatibleReferee(
                "a Fock-diagonal message is not a pure state".into(),
            )),
        }
    }

    /// Decomposition into weighted pure states.
    pub fn ensemble(&self) -> Result<Vec<(f64, PureState)>> {
        match self {
            Message::Diagonal(s) => Ok(s
                .iter()
                .map(|(i, p)| (*p, PureState::basis(i.clone())))
                .collect()),
            _ => Ok(vec![(1.0, self.to_pure()?)]),
        }
    }

    /// Outcome distribution of a Fock-basis measurement.
    pub fn fock_distribution(&self) -> Result<Vec<(FockIndex, f64)>> {
        match self {
            Message::Diagonal(s) => Ok(s.iter().map(|(i, p)| (i.clone(), *p)).collect()),
            _ => Ok(self
                .to_pure()?
                .occupation_probabilities()
                .map(|(i, p)| (i.clone(), p))
                .collect()),
        }
    }

    pub fn trace_distance(&self, other: &Message) -> Result<f64> {
        check_modes(self.mode_count(), other.mode_count())?;
        match (self, other) {
            (Message::Product(a), Message::Product(b)) => a.trace_distance(b),
            (Message::Diagonal(a), Message::Diagonal(b)) => a.trace_distance(b),
            (Message::Diagonal(_), _) | (_, Message::Diagonal(_)) => {
                self.to_dense()?.trace_distance(&other.to_dense()?)
            }
            _ => self.to_pure()?.trace_distance(&other.to_pure()?),
        }
    }

    pub fn to_dense(&self) -> Result<DenseOperator> {
        match self {
            Message::Diagonal(s) => s.to_dense(),
            _ => self.to_pure()?.to_dense(),
        }
    }
}

impl PhotonStatistics for Message {
    fn mode_count(&self) -> usize {
        Message::mode_count(self)
    }

    fn photon_number_distribution(&self) -> BTreeMap<u64, f64> {
        match self {
            Message::Product(s) => s.photon_number_distribution(),
            Message::Pure(s) => s.photon_number_distribution(),
            Message::Diagonal(s) => s.photon_number_distribution(),
        }
    }

    fn mean_photon_number(&self) -> f64 {
        match self {
            Message::Product(s) => s.mean_photon_number(),
            Message::Pure(s) => s.mean_photon_number(),
            Message::Diagonal(s) => s.mean_photon_number(),
        }
    }

    fn max_total_photons(&self) -> u64 {
        match self {
            Message::Product(s) => s.max_total_photons(),
            Message::Pure(s) => s.max_total_photons(),
            Message::Diagonal(s) => s.max_total_photons(),
        }
    }
}

impl From<PureState> for Message {
    fn from(s: PureState) -> Self {
        Message::Pure(s)
    }
}

impl From<FockDiagonalState> for Message {
    fn from(s: FockDiagonalState) -> Self {
        Message::Diagonal(s)
    }
}

impl From<ProductState> for Message {
    fn from(s: ProductState) -> Self {
        Message::Product(s)
    }
}
