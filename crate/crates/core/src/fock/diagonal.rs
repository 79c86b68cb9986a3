use std::collections::BTreeMap;

use super::{check_modes, DenseOperator, FockIndex, PhotonStatistics, NORM_TOLERANCE, SUPPORT_CAP};
use crate::error::{Error, Result};

/// A mixture of Fock basis kets, `Σ p_n |n⟩⟨n|`.
#[derive(Clone, Debug, PartialEq)]
pub struct FockDiagonalState {
    modes: usize,
    weights: BTreeMap<FockIndex, f64>,
}

impl FockDiagonalState {
    /// Probabilities must be non-negative and sum to one within
    /// [`NORM_TOLERANCE`]. Zero weights are dropped.
    pub fn new(modes: usize, terms: impl IntoIterator<Item = (FockIndex, f64)>) -> Result<Self> {
        let weights = collect(modes, terms)?;
        let total: f64 = weights.values().sum();
        if (total - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::NotNormalized { norm_sq: total });
        }
        Self::from_map(modes, weights)
    }

    /// Rescales arbitrary non-negative weights to a distribution.
    pub fn normalized(modes: usize, terms: impl IntoIterator<Item = (FockIndex, f64)>) -> Result<Self> {
        Self::from_map(modes, collect(modes, terms)?)
    }

    pub(crate) fn from_map(modes: usize, mut weights: BTreeMap<FockIndex, f64>) -> Result<Self> {
        if modes == 0 {
            return Err(Error::InvalidIndex("at least one mode is required".into()));
        }
        weights.retain(|_, p| *p > 0.0);
        if weights.len() > SUPPORT_CAP {
            return Err(Error::SupportCapExceeded {
                size: weights.len(),
                cap: SUPPORT_CAP,
            });
        }
        let total: f64 = weights.values().sum();
        if total == 0.0 || !total.is_finite() {
            return Err(Error::ZeroNorm);
        }
        for p in weights.values_mut() {
            *p /= total;
        }
        Ok(FockDiagonalState { modes, weights })
    }

    /// Point mass on one basis ket.
    pub fn point(index: FockIndex) -> Self {
        let modes = index.mode_count();
        let mut weights = BTreeMap::new();
        weights.insert(index, 1.0);
        FockDiagonalState { modes, weights }
    }

    pub fn mode_count(&self) -> usize {
        self.modes
    }

    pub fn support_size(&self) -> usize {
        self.weights.len()
    }

    pub fn probability(&self, index: &FockIndex) -> f64 {
        self.weights.get(index).copied().unwrap_or(0.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&FockIndex, &f64)> {
        self.weights.iter()
    }

    pub fn tensor(&self, other: &FockDiagonalState) -> Result<FockDiagonalState> {
        let size = self.weights.len().saturating_mul(other.weights.len());
        if size > SUPPORT_CAP {
            return Err(Error::SupportCapExceeded {
                size,
                cap: SUPPORT_CAP,
            });
        }
        let mut weights = BTreeMap::new();
        for (i, p) in &self.weights {
            for (j, q) in &other.weights {
                weights.insert(i.concat(j), p * q);
            }
        }
        FockDiagonalState::from_map(self.modes + other.modes, weights)
    }

    /// Total-variation distance, which is the trace distance of commuting
    /// diagonal operators.
    pub fn trace_distance(&self, other: &FockDiagonalState) -> Result<f64> {
        check_modes(self.modes, other.modes)?;
        let mut sum = 0.0;
        for (i, p) in &self.weights {
            sum += (p - other.probability(i)).abs();
        }
        for (j, q) in &other.weights {
            if !self.weights.contains_key(j) {
                sum += q;
            }
        }
        Ok((sum / 2.0).min(1.0))
    }

    /// Bhattacharyya coefficient `Σ √(p_n q_n)`.
    pub fn fidelity(&self, other: &FockDiagonalState) -> Result<f64> {
        check_modes(self.modes, other.modes)?;
        let f: f64 = self
            .weights
            .iter()
            .map(|(i, p)| (p * other.probability(i)).sqrt())
            .sum();
        Ok(f.min(1.0))
    }

    pub fn restrict_up_to(&self, cutoff: u64) -> (Option<FockDiagonalState>, f64) {
        let kept: BTreeMap<FockIndex, f64> = self
            .weights
            .iter()
            .filter(|(i, _)| i.total_photons() <= cutoff)
            .map(|(i, p)| (i.clone(), *p))
            .collect();
        let weight: f64 = kept.values().sum();
        if kept.len() == self.weights.len() {
            return (Some(self.clone()), 1.0);
        }
        (FockDiagonalState::from_map(self.modes, kept).ok(), weight)
    }

    pub fn to_dense(&self) -> Result<DenseOperator> {
        DenseOperator::from_diagonal(self)
    }
}

impl PhotonStatistics for FockDiagonalState {
    fn mode_count(&self) -> usize {
        self.modes
    }

    fn photon_number_distribution(&self) -> BTreeMap<u64, f64> {
        let mut dist = BTreeMap::new();
        for (idx, p) in &self.weights {
            *dist.entry(idx.total_photons()).or_insert(0.0) += p;
        }
        dist
    }
}

fn collect(modes: usize, terms: impl IntoIterator<Item = (FockIndex, f64)>) -> Result<BTreeMap<FockIndex, f64>> {
    let mut weights: BTreeMap<FockIndex, f64> = BTreeMap::new();
    for (idx, p) in terms {
        check_modes(modes, idx.mode_count())?;
        if p.is_nan() || p < 0.0 || !p.is_finite() {
            return Err(Error::param("probability", format!("{p} is not a finite non-negative number")));
        }
        *weights.entry(idx).or_default() += p;
    }
    Ok(weights)
}
