//! Multimode Fock-space states.
//!
//! Three first-class representations cover every message that appears in the
//! protocols of this crate:
//!
//! * [`PureState`]: a sparse superposition of occupation-number basis kets,
//! * [`FockDiagonalState`]: a probability distribution over basis kets (a
//!   "classical" optical message),
//! * [`ProductState`]: a product of single-mode kets, used for coherent-state
//!   messages whose full multimode expansion would be too large.
//!
//! [`DenseOperator`] is a small dense density matrix (dimension at most
//! [`DENSE_DIMENSION_CAP`]) for checks that need general mixed states.

mod dense;
mod diagonal;
mod json;
mod product;
mod pure;
pub mod random;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use dense::DenseOperator;
pub use diagonal::FockDiagonalState;
pub use json::AnyState;
pub use product::ProductState;
pub use pure::{PureState, TruncatedCoherent};

/// Maximum number of nonzero amplitudes (or weights) held by one sparse state.
pub const SUPPORT_CAP: usize = 1_000_000;

/// Amplitudes with modulus below this are dropped and the state renormalized.
pub const PRUNE_THRESHOLD: f64 = 1e-15;

/// Allowed deviation of Σ|amp|² (or Σp) from one at construction.
pub const NORM_TOLERANCE: f64 = 1e-9;

/// Largest dimension accepted by [`DenseOperator`].
pub const DENSE_DIMENSION_CAP: usize = 256;

/// Occupation numbers `(n₁, …, n_m)` labelling one multimode Fock basis ket.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct FockIndex(Vec<u32>);

impl FockIndex {
    pub fn new(occupations: Vec<u32>) -> Result<Self> {
        if occupations.is_empty() {
            return Err(Error::InvalidIndex("at least one mode is required".into()));
        }
        Ok(FockIndex(occupations))
    }

    pub fn vacuum(modes: usize) -> Self {
        assert!(modes >= 1, "a Fock index needs at least one mode");
        FockIndex(vec![0; modes])
    }

    pub fn mode_count(&self) -> usize {
        self.0.len()
    }

    pub fn occupations(&self) -> &[u32] {
        &self.0
    }

    /// Eigenvalue of the total photon-number operator on this ket.
    pub fn total_photons(&self) -> u64 {
        self.0.iter().map(|&n| u64::from(n)).sum()
    }

    /// Concatenation of two indices (the label of the tensor-product ket).
    pub fn concat(&self, other: &FockIndex) -> FockIndex {
        let mut occ = Vec::with_capacity(self.0.len() + other.0.len());
        occ.extend_from_slice(&self.0);
        occ.extend_from_slice(&other.0);
        FockIndex(occ)
    }

    /// All occupation tuples over `modes` modes with total photon number at
    /// most `cutoff`, in lexicographic order.
    pub fn enumerate_up_to(modes: usize, cutoff: u64) -> Result<Vec<FockIndex>> {
        if modes == 0 {
            return Err(Error::InvalidIndex("at least one mode is required".into()));
        }
        let size = crate::combinatorics::count_rank(modes, cutoff);
        if size.rank > num_bigint::BigUint::from(SUPPORT_CAP) {
            return Err(Error::SupportCapExceeded {
                size: usize::MAX,
                cap: SUPPORT_CAP,
            });
        }
        let mut out = Vec::new();
        let mut current = vec![0u32; modes];
        fill_up_to(&mut current, 0, cutoff, &mut out);
        Ok(out)
    }
}

fn fill_up_to(current: &mut [u32], pos: usize, remaining: u64, out: &mut Vec<FockIndex>) {
    if pos == current.len() {
        out.push(FockIndex(current.to_vec()));
        return;
    }
    for n in 0..=remaining {
        current[pos] = n as u32;
        fill_up_to(current, pos + 1, remaining - n, out);
    }
    current[pos] = 0;
}

impl TryFrom<Vec<u32>> for FockIndex {
    type Error = Error;

    fn try_from(value: Vec<u32>) -> Result<Self> {
        FockIndex::new(value)
    }
}

impl From<FockIndex> for Vec<u32> {
    fn from(value: FockIndex) -> Self {
        value.0
    }
}

impl fmt::Debug for FockIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "|")?;
        for (i, n) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{n}")?;
        }
        write!(f, "⟩")
    }
}

/// Total-photon-number eigenvalue of a basis ket.
pub fn total_photons(index: &FockIndex) -> u64 {
    index.total_photons()
}

/// Photon-number statistics shared by every state representation.
pub trait PhotonStatistics {
    fn mode_count(&self) -> usize;

    /// `Pr[N̂ = n]` for every `n` with nonzero probability.
    fn photon_number_distribution(&self) -> BTreeMap<u64, f64>;

    /// `tr(N̂ ρ)`.
    fn mean_photon_number(&self) -> f64 {
        self.photon_number_distribution()
            .iter()
            .map(|(&n, &p)| n as f64 * p)
            .sum()
    }

    /// `Pr[N̂ ≥ a]`.
    fn prob_at_least(&self, a: f64) -> f64 {
        self.photon_number_distribution()
            .iter()
            .filter(|(&n, _)| n as f64 >= a)
            .map(|(_, &p)| p)
            .sum()
    }

    /// `tr(P ρ)` for the projector onto total photon number `≤ cutoff`.
    fn weight_up_to(&self, cutoff: u64) -> f64 {
        self.photon_number_distribution()
            .range(..=cutoff)
            .map(|(_, &p)| p)
            .sum()
    }

    /// Largest total photon number carrying nonzero probability.
    fn max_total_photons(&self) -> u64 {
        self.photon_number_distribution()
            .iter()
            .rev()
            .find(|(_, &p)| p > 0.0)
            .map(|(&n, _)| n)
            .unwrap_or(0)
    }
}

pub(crate) fn check_modes(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::ModeMismatch { expected, found });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn total_photons_examples() {
        assert_eq!(total_photons(&FockIndex::vacuum(3)), 0);
        assert_eq!(total_photons(&FockIndex::new(vec![2, 3]).unwrap()), 5);
        assert_eq!(total_photons(&FockIndex::new(vec![1, 1, 1, 1]).unwrap()), 4);
    }

    #[test]
    fn empty_index_rejected() {
        assert!(FockIndex::new(vec![]).is_err());
        assert!(serde_json::from_str::<FockIndex>("[]").is_err());
    }

    #[test]
    fn enumeration_is_sorted_and_bounded() {
        let all = FockIndex::enumerate_up_to(3, 4).unwrap();
        assert_eq!(all.len(), 35);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        assert!(all.iter().all(|i| i.total_photons() <= 4));
    }
}
