use std::collections::BTreeMap;

use num_complex::Complex64;

use super::{check_modes, FockIndex, PhotonStatistics, PureState, SUPPORT_CAP};
use crate::error::{Error, Result};

/// Product `|φ₁⟩ ⊗ … ⊗ |φ_m⟩` of single-mode kets.
///
/// Coherent-state messages are products over modes; keeping them factored
/// lets the referee evaluate them mode pair by mode pair instead of in the
/// exponentially large joint basis.
#[derive(Clone, Debug, PartialEq)]
pub struct ProductState {
    factors: Vec<PureState>,
    tail_mass: f64,
}

impl ProductState {
    /// `tail_mass` records probability discarded when the factors were
    /// truncated (zero if they are exact).
    pub fn new(factors: Vec<PureState>, tail_mass: f64) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::InvalidIndex("at least one mode is required".into()));
        }
        for f in &factors {
            check_modes(1, f.mode_count())?;
        }
        if !(0.0..=1.0).contains(&tail_mass) {
            return Err(Error::param("tail_mass", "must lie in [0, 1]"));
        }
        Ok(ProductState { factors, tail_mass })
    }

    /// Product of coherent states `⊗ |α_i⟩`, each truncated so that its
    /// discarded Poisson mass stays below `max_tail`.
    pub fn coherent(alphas: &[Complex64], max_tail: f64) -> Result<Self> {
        let mut kept = 1.0;
        let mut factors = Vec::with_capacity(alphas.len());
        for &alpha in alphas {
            let c = PureState::coherent_with_tail(alpha, max_tail)?;
            kept *= 1.0 - c.tail_mass;
            factors.push(c.state);
        }
        Self::new(factors, 1.0 - kept)
    }

    pub fn mode_count(&self) -> usize {
        self.factors.len()
    }

    pub fn factors(&self) -> &[PureState] {
        &self.factors
    }

    /// Probability mass discarded by pre-truncating the factors.
    pub fn tail_mass(&self) -> f64 {
        self.tail_mass
    }

    pub fn overlap(&self, other: &ProductState) -> Result<Complex64> {
        check_modes(self.mode_count(), other.mode_count())?;
        let mut acc = Complex64::new(1.0, 0.0);
        for (a, b) in self.factors.iter().zip(&other.factors) {
            acc *= a.overlap(b)?;
        }
        Ok(acc)
    }

    pub fn trace_distance(&self, other: &ProductState) -> Result<f64> {
        let f2 = self.overlap(other)?.norm_sqr().min(1.0);
        Ok((1.0 - f2).max(0.0).sqrt())
    }

    /// Number of terms in the joint expansion, saturating.
    pub fn expanded_size(&self) -> usize {
        self.factors
            .iter()
            .fold(1usize, |acc, f| acc.saturating_mul(f.support_size()))
    }

    /// Full multimode ket.
    pub fn expand(&self) -> Result<PureState> {
        let size = self.expanded_size();
        if size > SUPPORT_CAP {
            return Err(Error::SupportCapExceeded {
                size,
                cap: SUPPORT_CAP,
            });
        }
        self.expand_up_to(u64::MAX)
    }

    /// Joint expansion restricted to total photon number `≤ cutoff`, then
    /// renormalized.
    pub fn expand_up_to(&self, cutoff: u64) -> Result<PureState> {
        let factors: Vec<Vec<(u32, Complex64)>> = self
            .factors
            .iter()
            .map(|f| f.iter().map(|(i, a)| (i.occupations()[0], *a)).collect())
            .collect();
        let mut out = BTreeMap::new();
        let mut occ = vec![0u32; factors.len()];
        expand_rec(&factors, 0, cutoff, Complex64::new(1.0, 0.0), &mut occ, &mut out)?;
        if out.is_empty() {
            return Err(Error::VacuousTruncation { cutoff });
        }
        PureState::from_map(self.factors.len(), out)
    }
}

fn expand_rec(
    factors: &[Vec<(u32, Complex64)>],
    pos: usize,
    remaining: u64,
    amp: Complex64,
    occ: &mut Vec<u32>,
    out: &mut BTreeMap<FockIndex, Complex64>,
) -> Result<()> {
    if pos == factors.len() {
        if out.len() >= SUPPORT_CAP {
            return Err(Error::SupportCapExceeded {
                size: out.len() + 1,
                cap: SUPPORT_CAP,
            });
        }
        out.insert(FockIndex(occ.clone()), amp);
        return Ok(());
    }
    for &(n, a) in &factors[pos] {
        if u64::from(n) > remaining {
            continue;
        }
        occ[pos] = n;
        expand_rec(factors, pos + 1, remaining - u64::from(n), amp * a, occ, out)?;
    }
    occ[pos] = 0;
    Ok(())
}

impl PhotonStatistics for ProductState {
    fn mode_count(&self) -> usize {
        self.factors.len()
    }

    fn photon_number_distribution(&self) -> BTreeMap<u64, f64> {
        let mut dist: BTreeMap<u64, f64> = BTreeMap::from([(0, 1.0)]);
        for f in &self.factors {
            let fd = f.photon_number_distribution();
            let mut next = BTreeMap::new();
            for (&n, &p) in &dist {
                for (&k, &q) in &fd {
                    *next.entry(n + k).or_insert(0.0) += p * q;
                }
            }
            dist = next;
        }
        dist
    }

    fn mean_photon_number(&self) -> f64 {
        self.factors.iter().map(|f| f.mean_photon_number()).sum()
    }

    fn max_total_photons(&self) -> u64 {
        self.factors.iter().map(|f| f.max_total_photons()).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expansion_agrees_with_tensor_products() {
        let a = PureState::coherent(Complex64::new(0.4, 0.0), 4).state;
        let b = PureState::coherent(Complex64::new(0.0, -0.3), 3).state;
        let prod = ProductState::new(vec![a.clone(), b.clone()], 0.0).unwrap();
        let direct = a.tensor(&b).unwrap();
        assert!((prod.expand().unwrap().overlap(&direct).unwrap().norm() - 1.0).abs() < 1e-12);
        assert!((prod.mean_photon_number() - direct.mean_photon_number()).abs() < 1e-12);
        let pd = prod.photon_number_distribution();
        let dd = direct.photon_number_distribution();
        for (n, p) in dd {
            assert!((pd[&n] - p).abs() < 1e-12);
        }
    }

    #[test]
    fn restricted_expansion_has_retained_weight() {
        let a = PureState::coherent(Complex64::new(1.0, 0.0), 6).state;
        let prod = ProductState::new(vec![a.clone(), a.clone(), a], 0.0).unwrap();
        let w = prod.weight_up_to(4);
        let cut = prod.expand_up_to(4).unwrap();
        assert!(cut.max_total_photons() <= 4);
        let full = prod.expand().unwrap();
        let ov = full.overlap(&cut).unwrap().norm();
        assert!((ov - w.sqrt()).abs() < 1e-12);
    }
}
