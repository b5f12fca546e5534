use super::linalg::{self, check_entries, CMatrix, CVector, C64, ONE};
use crate::error::{Error, Result};
use crate::tol;

/// Validated mixed state.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    matrix: CMatrix,
}

impl DensityOperator {
    /// Checks Hermiticity, unit trace and positivity.
    pub fn new(matrix: CMatrix) -> Result<Self> {
        if !matrix.is_square() || matrix.nrows() == 0 {
            return Err(Error::ShapeMismatch(format!("{}x{} is not a square operator", matrix.nrows(), matrix.ncols())));
        }
        check_entries(matrix.nrows(), tol::MAX_ENTRIES)?;
        let defect = linalg::hermiticity_defect(&matrix);
        if defect > tol::STATE {
            return Err(Error::NotHermitian(defect));
        }
        let tr = linalg::trace(&matrix);
        if (tr.re - 1.0).abs() > tol::STATE || tr.im.abs() > tol::STATE {
            return Err(Error::InvalidState(format!("trace {tr}")));
        }
        let min = linalg::eigvalsh(&matrix).first().copied().unwrap_or(0.0);
        if min < -tol::STATE {
            return Err(Error::InvalidState(format!("negative eigenvalue {min:e}")));
        }
        Ok(Self { matrix: linalg::hermitize(&matrix) })
    }

    /// Wraps a matrix already known to be a state, e.g. the output of a channel.
    pub(crate) fn from_trusted(matrix: CMatrix) -> Self {
        Self { matrix: linalg::hermitize(&matrix) }
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self { matrix: CMatrix::identity(dim, dim).unscale(dim as f64) }
    }

    /// Diagonal state in the computational basis.
    pub fn diagonal(probs: &[f64]) -> Result<Self> {
        let m = linalg::from_real_diagonal(probs);
        Self::new(m)
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    /// Eigenvalues clamped at zero, ascending.
    pub fn spectrum(&self) -> Vec<f64> {
        linalg::eigvalsh(&self.matrix).into_iter().map(|v| v.max(0.0)).collect()
    }

    pub fn purity(&self) -> f64 {
        linalg::inner(&self.matrix, &self.matrix).re
    }

    pub fn tensor(&self, other: &Self) -> Result<Self> {
        check_entries(self.dim() * other.dim(), tol::MAX_ENTRIES)?;
        Ok(Self { matrix: linalg::kron(&self.matrix, &other.matrix) })
    }

    /// U ρ U†.
    pub fn conjugate(&self, u: &CMatrix) -> Result<Self> {
        if u.nrows() != self.dim() || u.ncols() != self.dim() {
            return Err(Error::ShapeMismatch(format!("{}x{} unitary on dim {}", u.nrows(), u.ncols(), self.dim())));
        }
        Ok(Self::from_trusted(u * &self.matrix * u.adjoint()))
    }

    /// Convex combination t·self + (1-t)·other.
    pub fn mix(&self, other: &Self, t: f64) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::ShapeMismatch("mixing states of different dimension".into()));
        }
        Ok(Self::from_trusted(self.matrix.scale(t) + other.matrix.scale(1.0 - t)))
    }
}

impl From<&PureState> for DensityOperator {
    fn from(psi: &PureState) -> Self {
        Self { matrix: linalg::outer(&psi.vector) }
    }
}

/// Unit vector state.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    vector: CVector,
}

impl PureState {
    pub fn new(vector: CVector) -> Result<Self> {
        if vector.is_empty() {
            return Err(Error::ShapeMismatch("empty vector".into()));
        }
        let norm = vector.norm();
        if (norm - 1.0).abs() > tol::PURE_NORM {
            return Err(Error::InvalidState(format!("norm {norm}")));
        }
        Ok(Self { vector })
    }

    /// Normalizes a nonzero vector.
    pub fn normalized(vector: CVector) -> Result<Self> {
        let norm = vector.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::InvalidState("zero vector".into()));
        }
        Ok(Self { vector: vector.unscale(norm) })
    }

    pub fn basis(dim: usize, index: usize) -> Self {
        let mut v = CVector::zeros(dim);
        v[index] = ONE;
        Self { vector: v }
    }

    /// Normalized superposition from real amplitudes.
    pub fn from_amplitudes(amps: &[f64]) -> Result<Self> {
        Self::normalized(CVector::from_iterator(amps.len(), amps.iter().map(|&a| C64::new(a, 0.0))))
    }

    pub(crate) fn from_trusted(vector: CVector) -> Self {
        Self { vector }
    }

    pub fn dim(&self) -> usize {
        self.vector.len()
    }

    pub fn vector(&self) -> &CVector {
        &self.vector
    }

    pub fn to_density(&self) -> DensityOperator {
        DensityOperator::from(self)
    }

    pub fn tensor(&self, other: &Self) -> Result<Self> {
        let dim = self.dim() * other.dim();
        if dim > tol::MAX_ENTRIES {
            return Err(Error::DimensionLimit { entries: dim, cap: tol::MAX_ENTRIES });
        }
        Ok(Self { vector: linalg::kron_vec(&self.vector, &other.vector) })
    }

    pub fn apply(&self, u: &CMatrix) -> Result<Self> {
        if u.ncols() != self.dim() || u.nrows() != self.dim() {
            return Err(Error::ShapeMismatch(format!("{}x{} operator on dim {}", u.nrows(), u.ncols(), self.dim())));
        }
        Ok(Self { vector: u * &self.vector })
    }
}

/// Ordered tensor factor dimensions of a composite system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompositeLabel {
    factor_dims: Vec<usize>,
}

impl CompositeLabel {
    pub fn new(factor_dims: Vec<usize>) -> Result<Self> {
        if factor_dims.is_empty() || factor_dims.contains(&0) {
            return Err(Error::ShapeMismatch(format!("invalid factor dims {factor_dims:?}")));
        }
        Ok(Self { factor_dims })
    }

    pub fn factor_dims(&self) -> &[usize] {
        &self.factor_dims
    }

    pub fn dim(&self) -> usize {
        self.factor_dims.iter().product()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_invalid_states() {
        assert!(DensityOperator::diagonal(&[0.6, 0.6]).is_err());
        assert!(DensityOperator::diagonal(&[1.2, -0.2]).is_err());
    }

    #[test]
    fn small_negativity_is_tolerated() {
        let m = linalg::from_real_diagonal(&[1.0 + 5e-11, -5e-11]);
        assert!(DensityOperator::new(m).is_ok());
    }

    #[test]
    fn pure_state_norm_checked() {
        let v = CVector::from_vec(vec![ONE, ONE]);
        assert!(PureState::new(v.clone()).is_err());
        assert!((PureState::normalized(v).unwrap().vector().norm() - 1.0).abs() < 1e-15);
    }
}
