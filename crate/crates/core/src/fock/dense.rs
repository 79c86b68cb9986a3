use std::collections::{BTreeMap, BTreeSet};

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{
    check_modes, FockDiagonalState, FockIndex, PhotonStatistics, PureState, DENSE_DIMENSION_CAP,
};
use crate::error::{Error, Result};

/// Eigenvalues of a PSD operator below this are treated as exact zeros when
/// taking square roots.
const SQRT_CLIP: f64 = 1e-14;

/// Dense operator over an explicit list of Fock basis kets.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseOperator {
    basis: Vec<FockIndex>,
    matrix: DMatrix<Complex64>,
}

impl DenseOperator {
    pub fn new(basis: Vec<FockIndex>, matrix: DMatrix<Complex64>) -> Result<Self> {
        let dim = basis.len();
        if dim == 0 {
            return Err(Error::InvalidOperator("empty basis".into()));
        }
        if dim > DENSE_DIMENSION_CAP {
            return Err(Error::DimensionCap {
                dim,
                cap: DENSE_DIMENSION_CAP,
            });
        }
        if matrix.nrows() != dim || matrix.ncols() != dim {
            return Err(Error::InvalidOperator(format!(
                "matrix is {}x{} but basis has {dim} elements",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let modes = basis[0].mode_count();
        for b in &basis {
            check_modes(modes, b.mode_count())?;
        }
        let unique: BTreeSet<&FockIndex> = basis.iter().collect();
        if unique.len() != dim {
            return Err(Error::InvalidOperator("repeated basis element".into()));
        }
        Ok(DenseOperator { basis, matrix })
    }

    /// Like [`DenseOperator::new`] but additionally requires a density
    /// operator: Hermitian, unit trace, eigenvalues ≥ −1e-9.
    pub fn density(basis: Vec<FockIndex>, matrix: DMatrix<Complex64>) -> Result<Self> {
        let op = Self::new(basis, matrix)?;
        op.validate_density(1e-9)?;
        Ok(op)
    }

    pub fn from_pure(state: &PureState) -> Result<Self> {
        let basis: Vec<FockIndex> = state.iter().map(|(i, _)| i.clone()).collect();
        Self::from_pure_in(state, basis)
    }

    /// `|ψ⟩⟨ψ|` expressed in a given basis, which must contain the support.
    pub fn from_pure_in(state: &PureState, basis: Vec<FockIndex>) -> Result<Self> {
        let pos = positions(&basis);
        let mut v = nalgebra::DVector::<Complex64>::zeros(basis.len());
        for (i, a) in state.iter() {
            let k = *pos
                .get(i)
                .ok_or_else(|| Error::InvalidOperator(format!("{i:?} is not in the basis")))?;
            v[k] = *a;
        }
        let m = &v * v.adjoint();
        Self::new(basis, m)
    }

    pub fn from_diagonal(state: &FockDiagonalState) -> Result<Self> {
        let basis: Vec<FockIndex> = state.iter().map(|(i, _)| i.clone()).collect();
        let dim = basis.len();
        if dim > DENSE_DIMENSION_CAP {
            return Err(Error::DimensionCap {
                dim,
                cap: DENSE_DIMENSION_CAP,
            });
        }
        let mut m = DMatrix::<Complex64>::zeros(dim, dim);
        for (k, (_, p)) in state.iter().enumerate() {
            m[(k, k)] = Complex64::new(*p, 0.0);
        }
        Self::new(basis, m)
    }

    pub fn basis(&self) -> &[FockIndex] {
        &self.basis
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn mode_count(&self) -> usize {
        self.basis[0].mode_count()
    }

    pub fn trace(&self) -> Complex64 {
        self.matrix.trace()
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        let n = self.dim();
        (0..n).all(|i| (i..n).all(|j| (self.matrix[(i, j)] - self.matrix[(j, i)].conj()).norm() <= tol))
    }

    pub fn validate_density(&self, tol: f64) -> Result<()> {
        if !self.is_hermitian(tol) {
            return Err(Error::InvalidOperator("not Hermitian".into()));
        }
        let tr = self.trace();
        if (tr.re - 1.0).abs() > tol || tr.im.abs() > tol {
            return Err(Error::InvalidOperator(format!("trace {tr} ≠ 1")));
        }
        let min = hermitian_eigenvalues(&self.matrix)
            .into_iter()
            .fold(f64::INFINITY, f64::min);
        if min < -tol {
            return Err(Error::InvalidOperator(format!("negative eigenvalue {min}")));
        }
        Ok(())
    }

    /// Eigenvalues (ascending) of the Hermitian part.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev = hermitian_eigenvalues(&self.matrix);
        ev.sort_by(f64::total_cmp);
        ev
    }

    /// `½‖ρ − σ‖₁`, computed from the eigenvalues of `ρ − σ` on the union of
    /// the two bases.
    pub fn trace_distance(&self, other: &DenseOperator) -> Result<f64> {
        let (a, b) = self.aligned(other)?;
        let diff = a - b;
        let norm: f64 = hermitian_eigenvalues(&diff).iter().map(|l| l.abs()).sum();
        Ok((norm / 2.0).clamp(0.0, 1.0))
    }

    /// Uhlmann fidelity `‖√ρ √σ‖₁ = tr √(√ρ σ √ρ)`.
    pub fn fidelity(&self, other: &DenseOperator) -> Result<f64> {
        let (a, b) = self.aligned(other)?;
        let prod = sqrt_psd(&a) * sqrt_psd(&b);
        let f: f64 = prod.singular_values().iter().sum();
        Ok(f.clamp(0.0, 1.0))
    }

    /// `P ρ P` for the projector onto total photon number `≤ cutoff`, in the
    /// same basis. Returns the renormalized result (if the retained trace is
    /// positive) and `tr(P ρ)`.
    pub fn project_up_to(&self, cutoff: u64) -> (Option<DenseOperator>, f64) {
        let keep: Vec<bool> = self.basis.iter().map(|b| b.total_photons() <= cutoff).collect();
        let mut m = self.matrix.clone();
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                if !(keep[i] && keep[j]) {
                    m[(i, j)] = Complex64::default();
                }
            }
        }
        let weight = m.trace().re;
        if weight <= 0.0 {
            return (None, weight.max(0.0));
        }
        m /= Complex64::new(weight, 0.0);
        (
            Some(DenseOperator {
                basis: self.basis.clone(),
                matrix: m,
            }),
            weight,
        )
    }

    /// Both operators embedded in the sorted union of their bases.
    fn aligned(&self, other: &DenseOperator) -> Result<(DMatrix<Complex64>, DMatrix<Complex64>)> {
        check_modes(self.mode_count(), other.mode_count())?;
        let union: BTreeSet<&FockIndex> = self.basis.iter().chain(other.basis.iter()).collect();
        let union: Vec<FockIndex> = union.into_iter().cloned().collect();
        if union.len() > DENSE_DIMENSION_CAP {
            return Err(Error::DimensionCap {
                dim: union.len(),
                cap: DENSE_DIMENSION_CAP,
            });
        }
        let pos = positions(&union);
        Ok((self.embed(&pos, union.len()), other.embed(&pos, union.len())))
    }

    fn embed(&self, pos: &BTreeMap<FockIndex, usize>, dim: usize) -> DMatrix<Complex64> {
        let map: Vec<usize> = self.basis.iter().map(|b| pos[b]).collect();
        let mut m = DMatrix::zeros(dim, dim);
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                m[(map[i], map[j])] = self.matrix[(i, j)];
            }
        }
        m
    }
}

impl PhotonStatistics for DenseOperator {
    fn mode_count(&self) -> usize {
        self.basis[0].mode_count()
    }

    fn photon_number_distribution(&self) -> BTreeMap<u64, f64> {
        let mut dist = BTreeMap::new();
        for (k, b) in self.basis.iter().enumerate() {
            *dist.entry(b.total_photons()).or_insert(0.0) += self.matrix[(k, k)].re;
        }
        dist
    }
}

fn positions(basis: &[FockIndex]) -> BTreeMap<FockIndex, usize> {
    basis.iter().enumerate().map(|(k, b)| (b.clone(), k)).collect()
}

fn hermitian_part(m: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    (m + m.adjoint()) * Complex64::new(0.5, 0.0)
}

fn hermitian_eigenvalues(m: &DMatrix<Complex64>) -> Vec<f64> {
    hermitian_part(m).symmetric_eigenvalues().iter().copied().collect()
}

/// Principal square root of a PSD matrix, clipping tiny and negative
/// eigenvalues to zero.
fn sqrt_psd(m: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let eig = hermitian_part(m).symmetric_eigen();
    let roots = eig.eigenvalues.map(|l| {
        if l > SQRT_CLIP {
            Complex64::new(l.sqrt(), 0.0)
        } else {
            Complex64::default()
        }
    });
    let v = &eig.eigenvectors;
    v * DMatrix::from_diagonal(&roots) * v.adjoint()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn idx(v: &[u32]) -> FockIndex {
        FockIndex::new(v.to_vec()).unwrap()
    }

    #[test]
    fn identical_and_orthogonal_states() {
        let a = PureState::fock(&[1]).unwrap().to_dense().unwrap();
        let b = PureState::fock(&[0]).unwrap().to_dense().unwrap();
        assert!(a.trace_distance(&a).unwrap() < 1e-12);
        assert!((a.trace_distance(&b).unwrap() - 1.0).abs() < 1e-12);
        assert!((a.fidelity(&a).unwrap() - 1.0).abs() < 1e-9);
        assert!(a.fidelity(&b).unwrap() < 1e-9);
    }

    #[test]
    fn dimension_cap_enforced() {
        let basis = FockIndex::enumerate_up_to(1, 300).unwrap();
        let m = DMatrix::zeros(301, 301);
        assert!(matches!(DenseOperator::new(basis, m), Err(Error::DimensionCap { .. })));
    }

    #[test]
    fn density_validation() {
        let basis = vec![idx(&[0]), idx(&[1])];
        let bad = DMatrix::from_row_slice(2, 2, &[
            Complex64::new(1.5, 0.0), Complex64::default(),
            Complex64::default(), Complex64::new(-0.5, 0.0),
        ]);
        assert!(DenseOperator::density(basis.clone(), bad).is_err());
        let good = DMatrix::from_diagonal_element(2, 2, Complex64::new(0.5, 0.0));
        assert!(DenseOperator::density(basis, good).is_ok());
    }

    #[test]
    fn projection_weight_and_support() {
        let psi = PureState::coherent(Complex64::new(1.0, 0.0), 6).state;
        let rho = psi.to_dense().unwrap();
        let (cut, w) = rho.project_up_to(3);
        let cut = cut.unwrap();
        assert!((w - psi.weight_up_to(3)).abs() < 1e-12);
        assert!((cut.trace().re - 1.0).abs() < 1e-12);
        assert_eq!(cut.max_total_photons(), 3);
    }
}
