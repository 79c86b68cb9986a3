use std::collections::BTreeMap;

use num_complex::Complex64;

use super::{
    check_modes, DenseOperator, FockIndex, PhotonStatistics, NORM_TOLERANCE, PRUNE_THRESHOLD,
    SUPPORT_CAP,
};
use crate::error::{Error, Result};

/// Sparse pure state `Σ c_n |n₁,…,n_m⟩` with `Σ|c_n|² = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    modes: usize,
    amplitudes: BTreeMap<FockIndex, Complex64>,
}

impl PureState {
    /// Builds a state from already-normalized terms. Duplicate indices are
    /// summed; the norm must be one within [`NORM_TOLERANCE`].
    pub fn new(
        modes: usize,
        terms: impl IntoIterator<Item = (FockIndex, Complex64)>,
    ) -> Result<Self> {
        let amplitudes = collect_terms(modes, terms)?;
        let norm_sq = norm_sq(&amplitudes);
        if (norm_sq - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::NotNormalized { norm_sq });
        }
        Self::from_map(modes, amplitudes)
    }

    /// Builds a state from arbitrary nonzero terms, rescaling them to unit norm.
    pub fn normalized(
        modes: usize,
        terms: impl IntoIterator<Item = (FockIndex, Complex64)>,
    ) -> Result<Self> {
        Self::from_map(modes, collect_terms(modes, terms)?)
    }

    /// Prunes, renormalizes and checks the support cap.
    pub(crate) fn from_map(modes: usize, mut amplitudes: BTreeMap<FockIndex, Complex64>) -> Result<Self> {
        if modes == 0 {
            return Err(Error::InvalidIndex("at least one mode is required".into()));
        }
        amplitudes.retain(|_, a| a.norm() >= PRUNE_THRESHOLD);
        if amplitudes.len() > SUPPORT_CAP {
            return Err(Error::SupportCapExceeded {
                size: amplitudes.len(),
                cap: SUPPORT_CAP,
            });
        }
        let norm = norm_sq(&amplitudes).sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::ZeroNorm);
        }
        for a in amplitudes.values_mut() {
            *a /= norm;
        }
        Ok(PureState { modes, amplitudes })
    }

    pub fn basis(index: FockIndex) -> Self {
        let modes = index.mode_count();
        let mut amplitudes = BTreeMap::new();
        amplitudes.insert(index, Complex64::new(1.0, 0.0));
        PureState { modes, amplitudes }
    }

    pub fn vacuum(modes: usize) -> Self {
        Self::basis(FockIndex::vacuum(modes))
    }

    /// Basis ket from a slice of occupations.
    pub fn fock(occupations: &[u32]) -> Result<Self> {
        Ok(Self::basis(FockIndex::new(occupations.to_vec())?))
    }

    /// Single-mode coherent state `|α⟩` truncated to photon numbers `≤ cutoff`
    /// and renormalized.
    pub fn coherent(alpha: Complex64, cutoff: u32) -> TruncatedCoherent {
        let lambda = alpha.norm_sqr();
        let mut amp = Complex64::new((-lambda / 2.0).exp(), 0.0);
        let mut amplitudes = BTreeMap::new();
        for k in 0..=cutoff {
            if k > 0 {
                amp = amp * alpha / (k as f64).sqrt();
            }
            amplitudes.insert(FockIndex(vec![k]), amp);
        }
        let tail_mass = poisson_tail(lambda, cutoff);
        let state = PureState::from_map(1, amplitudes)
            .expect("coherent amplitudes are nonzero at the vacuum");
        TruncatedCoherent {
            state,
            alpha,
            cutoff,
            tail_mass,
        }
    }

    /// Coherent state truncated at the smallest cutoff whose discarded Poisson
    /// mass is below `max_tail`.
    pub fn coherent_with_tail(alpha: Complex64, max_tail: f64) -> Result<TruncatedCoherent> {
        if !(max_tail > 0.0 && max_tail < 1.0) {
            return Err(Error::param("max_tail", "must lie in (0, 1)"));
        }
        let lambda = alpha.norm_sqr();
        let mut cutoff = 0u32;
        while poisson_tail(lambda, cutoff) >= max_tail {
            cutoff += 1;
            if cutoff > 10_000 {
                return Err(Error::param("alpha", "coherent amplitude too large to truncate"));
            }
        }
        Ok(Self::coherent(alpha, cutoff))
    }

    pub fn mode_count(&self) -> usize {
        self.modes
    }

    pub fn support_size(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitude(&self, index: &FockIndex) -> Complex64 {
        self.amplitudes.get(index).copied().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&FockIndex, &Complex64)> {
        self.amplitudes.iter()
    }

    /// `|ψ⟩ ⊗ |φ⟩`, with the modes of `other` appended after those of `self`.
    pub fn tensor(&self, other: &PureState) -> Result<PureState> {
        let size = self.amplitudes.len().saturating_mul(other.amplitudes.len());
        if size > SUPPORT_CAP {
            return Err(Error::SupportCapExceeded {
                size,
                cap: SUPPORT_CAP,
            });
        }
        let mut amplitudes = BTreeMap::new();
        for (i, a) in &self.amplitudes {
            for (j, b) in &other.amplitudes {
                amplitudes.insert(i.concat(j), a * b);
            }
        }
        PureState::from_map(self.modes + other.modes, amplitudes)
    }

    /// `⟨self|other⟩`.
    pub fn overlap(&self, other: &PureState) -> Result<Complex64> {
        check_modes(self.modes, other.modes)?;
        let (small, large, conj_small) = if self.amplitudes.len() <= other.amplitudes.len() {
            (self, other, true)
        } else {
            (other, self, false)
        };
        let mut acc = Complex64::default();
        for (idx, a) in &small.amplitudes {
            if let Some(b) = large.amplitudes.get(idx) {
                acc += if conj_small { a.conj() * b } else { b.conj() * a };
            }
        }
        Ok(acc)
    }

    /// `|⟨ψ|φ⟩|`, clamped to `[0, 1]`.
    pub fn fidelity(&self, other: &PureState) -> Result<f64> {
        Ok(self.overlap(other)?.norm().min(1.0))
    }

    /// `√(1 − |⟨ψ|φ⟩|²)`.
    pub fn trace_distance(&self, other: &PureState) -> Result<f64> {
        let f2 = self.overlap(other)?.norm_sqr().min(1.0);
        Ok((1.0 - f2).max(0.0).sqrt())
    }

    /// Splits off the components with total photon number `≤ cutoff`.
    /// Returns the renormalized retained state (if any) and the retained
    /// probability mass `⟨ψ|P|ψ⟩`.
    pub fn restrict_up_to(&self, cutoff: u64) -> (Option<PureState>, f64) {
        let kept: BTreeMap<FockIndex, Complex64> = self
            .amplitudes
            .iter()
            .filter(|(idx, _)| idx.total_photons() <= cutoff)
            .map(|(i, a)| (i.clone(), *a))
            .collect();
        let weight = norm_sq(&kept);
        if kept.len() == self.amplitudes.len() {
            return (Some(self.clone()), 1.0);
        }
        (PureState::from_map(self.modes, kept).ok(), weight)
    }

    /// Probability of each occupation tuple under a Fock-basis measurement.
    pub fn occupation_probabilities(&self) -> impl Iterator<Item = (&FockIndex, f64)> {
        self.amplitudes.iter().map(|(i, a)| (i, a.norm_sqr()))
    }

    /// `|ψ⟩⟨ψ|` over the support of the state.
    pub fn to_dense(&self) -> Result<DenseOperator> {
        DenseOperator::from_pure(self)
    }
}

impl PhotonStatistics for PureState {
    fn mode_count(&self) -> usize {
        self.modes
    }

    fn photon_number_distribution(&self) -> BTreeMap<u64, f64> {
        let mut dist = BTreeMap::new();
        for (idx, a) in &self.amplitudes {
            *dist.entry(idx.total_photons()).or_insert(0.0) += a.norm_sqr();
        }
        dist
    }

    fn mean_photon_number(&self) -> f64 {
        self.amplitudes
            .iter()
            .map(|(i, a)| i.total_photons() as f64 * a.norm_sqr())
            .sum()
    }
}

/// A single-mode coherent state together with its truncation record.
#[derive(Clone, Debug)]
pub struct TruncatedCoherent {
    pub state: PureState,
    pub alpha: Complex64,
    pub cutoff: u32,
    /// Poisson probability mass above `cutoff` discarded before renormalizing.
    pub tail_mass: f64,
}

/// `Σ_{k > cutoff} e^{−λ} λ^k / k!`, summed directly so that small tails keep
/// full relative precision.
pub fn poisson_tail(lambda: f64, cutoff: u32) -> f64 {
    if lambda == 0.0 {
        return 0.0;
    }
    // log of the first discarded term, e^{−λ} λ^{c+1} / (c+1)!
    let first = cutoff as f64 + 1.0;
    let mut log_term = -lambda + first * lambda.ln() - ln_factorial(cutoff as u64 + 1);
    let mut sum = 0.0;
    let mut k = first;
    loop {
        let term = log_term.exp();
        sum += term;
        if k > lambda && term < sum * 1e-17 {
            break;
        }
        k += 1.0;
        log_term += lambda.ln() - k.ln();
        if k > first + 100_000.0 {
            break;
        }
    }
    sum.min(1.0)
}

fn ln_factorial(n: u64) -> f64 {
    (1..=n).map(|k| (k as f64).ln()).sum()
}

fn collect_terms(
    modes: usize,
    terms: impl IntoIterator<Item = (FockIndex, Complex64)>,
) -> Result<BTreeMap<FockIndex, Complex64>> {
    let mut amplitudes: BTreeMap<FockIndex, Complex64> = BTreeMap::new();
    for (idx, amp) in terms {
        check_modes(modes, idx.mode_count())?;
        if !amp.re.is_finite() || !amp.im.is_finite() {
            return Err(Error::param("amplitude", "must be finite"));
        }
        *amplitudes.entry(idx).or_default() += amp;
    }
    Ok(amplitudes)
}

fn norm_sq(amplitudes: &BTreeMap<FockIndex, Complex64>) -> f64 {
    amplitudes.values().map(|a| a.norm_sqr()).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn idx(v: &[u32]) -> FockIndex {
        FockIndex::new(v.to_vec()).unwrap()
    }

    #[test]
    fn mean_photon_number_examples() {
        assert_eq!(PureState::vacuum(3).mean_photon_number(), 0.0);
        assert_eq!(PureState::fock(&[2, 3]).unwrap().mean_photon_number(), 5.0);

        // Poisson mean oracle, truncated at 20 and renormalized.
        let mut num = 0.0;
        let mut den = 0.0;
        let mut term = (-1.0f64).exp();
        for k in 0..=20 {
            if k > 0 {
                term /= k as f64;
            }
            num += k as f64 * term;
            den += term;
        }
        let expected = num / den;
        let coh = PureState::coherent(c(1.0), 20);
        assert!((coh.state.mean_photon_number() - expected).abs() < 1e-12);
        assert!((coh.state.mean_photon_number() - 1.0).abs() < 1e-6);
    }

    #[test]
    fn photon_number_distribution_examples() {
        let d = PureState::fock(&[1, 0]).unwrap().photon_number_distribution();
        assert_eq!(d.len(), 1);
        assert!((d[&1] - 1.0).abs() < 1e-15);

        let s = 0.5f64.sqrt();
        let bell = PureState::new(2, [(idx(&[0, 0]), c(s)), (idx(&[1, 1]), c(s))]).unwrap();
        let d = bell.photon_number_distribution();
        assert!((d[&0] - 0.5).abs() < 1e-12 && (d[&2] - 0.5).abs() < 1e-12);

        let d = PureState::coherent(c(1.0), 3).state.photon_number_distribution();
        for (n, p) in [(0, 0.375), (1, 0.375), (2, 0.1875), (3, 0.0625)] {
            assert!((d[&n] - p).abs() < 1e-4, "n={n}");
        }
        assert!((d.values().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn tensor_examples() {
        let v = PureState::vacuum(1).tensor(&PureState::vacuum(2)).unwrap();
        assert_eq!(v, PureState::vacuum(3));
        let t = PureState::fock(&[1]).unwrap().tensor(&PureState::fock(&[2]).unwrap()).unwrap();
        assert_eq!(t, PureState::fock(&[1, 2]).unwrap());
    }

    #[test]
    fn overlap_examples() {
        let psi = PureState::coherent(Complex64::new(0.3, 0.4), 10).state;
        assert!((psi.overlap(&psi).unwrap() - c(1.0)).norm() < 1e-12);
        let a = PureState::fock(&[1, 0]).unwrap();
        let b = PureState::fock(&[0, 1]).unwrap();
        assert_eq!(a.overlap(&b).unwrap(), Complex64::default());
        assert_eq!(a.trace_distance(&b).unwrap(), 1.0);
        assert_eq!(a.fidelity(&b).unwrap(), 0.0);
        assert_eq!(a.trace_distance(&a).unwrap(), 0.0);
        assert!(matches!(
            a.overlap(&PureState::vacuum(3)),
            Err(Error::ModeMismatch { .. })
        ));
    }

    #[test]
    fn construction_enforces_norm() {
        assert!(matches!(
            PureState::new(1, [(idx(&[0]), c(0.5))]),
            Err(Error::NotNormalized { .. })
        ));
        assert!(matches!(
            PureState::normalized(1, [(idx(&[0]), c(0.0))]),
            Err(Error::ZeroNorm)
        ));
        assert!(PureState::new(1, [(idx(&[0, 1]), c(1.0))]).is_err());
    }

    #[test]
    fn tiny_amplitudes_are_pruned() {
        let s = PureState::normalized(1, [(idx(&[0]), c(1.0)), (idx(&[5]), c(1e-16))]).unwrap();
        assert_eq!(s.support_size(), 1);
    }

    #[test]
    fn poisson_tail_matches_complement() {
        let direct = 1.0 - (-1.0f64).exp() * (1.0 + 1.0 + 0.5 + 1.0 / 6.0);
        assert!((poisson_tail(1.0, 3) - direct).abs() < 1e-15);
        let coh = PureState::coherent_with_tail(c(0.5), 1e-10).unwrap();
        assert!(coh.tail_mass < 1e-10);
        assert!(poisson_tail(0.25, coh.cutoff - 1) >= 1e-10);
    }
}
