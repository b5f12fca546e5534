use super::linalg::{self, check_entries, CMatrix, CVector, C64, ONE, ZERO};
use crate::error::{Error, Result};
use crate::tol;

/// Hermitian observable held as a grouped spectral decomposition.
///
/// Each level owns a set of orthonormal eigenbasis columns. Diagonal
/// Hamiltonians keep the computational basis implicitly, so very large
/// ladders never allocate a dense eigenbasis.
#[derive(Debug, Clone, PartialEq)]
pub struct Hamiltonian {
    dim: usize,
    energies: Vec<f64>,
    members: Vec<Vec<usize>>,
    level_of: Vec<usize>,
    basis: Option<CMatrix>,
    grouping_tol: f64,
}

pub fn default_grouping_tol(spectral_radius: f64) -> f64 {
    1e-9 * (spectral_radius + 1.0)
}

impl Hamiltonian {
    /// Diagonal Hamiltonian in the computational basis.
    pub fn diagonal(energies: &[f64]) -> Result<Self> {
        let radius = energies.iter().fold(0.0f64, |a, e| a.max(e.abs()));
        Self::diagonal_with_tol(energies, default_grouping_tol(radius))
    }

    pub fn diagonal_with_tol(energies: &[f64], grouping_tol: f64) -> Result<Self> {
        if energies.is_empty() {
            return Err(Error::ShapeMismatch("empty spectrum".into()));
        }
        if energies.iter().any(|e| !e.is_finite()) {
            return Err(Error::Domain("non-finite energy".into()));
        }
        Ok(Self::grouped(energies.to_vec(), None, grouping_tol))
    }

    pub fn zero(dim: usize) -> Result<Self> {
        Self::diagonal(&vec![0.0; dim])
    }

    /// Decomposes a dense Hermitian matrix.
    pub fn from_matrix(m: &CMatrix, grouping_tol: Option<f64>) -> Result<Self> {
        if !m.is_square() || m.nrows() == 0 {
            return Err(Error::ShapeMismatch(format!("{}x{} is not a square operator", m.nrows(), m.ncols())));
        }
        check_entries(m.nrows(), tol::MAX_ENTRIES)?;
        let scale = linalg::max_abs(m).max(1.0);
        let defect = linalg::hermiticity_defect(m);
        if defect > tol::MATRIX * scale {
            return Err(Error::NotHermitian(defect));
        }
        let (values, vectors) = linalg::eigh(m);
        let radius = values.iter().fold(0.0f64, |a, e| a.max(e.abs()));
        let tol = grouping_tol.unwrap_or_else(|| default_grouping_tol(radius));
        let off_diagonal = m
            .iter()
            .enumerate()
            .any(|(k, z)| k % m.nrows() != k / m.nrows() && *z != ZERO);
        if off_diagonal {
            Ok(Self::grouped(values, Some(vectors), tol))
        } else {
            let diag: Vec<f64> = (0..m.nrows()).map(|i| m[(i, i)].re).collect();
            Ok(Self::grouped(diag, None, tol))
        }
    }

    /// Builds from per-column eigenvalues and an optional eigenbasis.
    fn grouped(values: Vec<f64>, basis: Option<CMatrix>, grouping_tol: f64) -> Self {
        let dim = values.len();
        let mut order: Vec<usize> = (0..dim).collect();
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]).then(a.cmp(&b)));
        let mut members: Vec<Vec<usize>> = Vec::new();
        let mut last = f64::NEG_INFINITY;
        for &i in &order {
            if members.is_empty() || values[i] - last > grouping_tol {
                members.push(vec![i]);
            } else {
                members.last_mut().expect("nonempty").push(i);
            }
            last = values[i];
        }
        let mut level_of = vec![0; dim];
        let energies = members
            .iter_mut()
            .enumerate()
            .map(|(k, cols)| {
                cols.sort_unstable();
                for &c in cols.iter() {
                    level_of[c] = k;
                }
                cols.iter().map(|&c| values[c]).sum::<f64>() / cols.len() as f64
            })
            .collect();
        Self { dim, energies, members, level_of, basis, grouping_tol }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn grouping_tol(&self) -> f64 {
        self.grouping_tol
    }

    /// Distinct energies, strictly increasing.
    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    pub fn num_levels(&self) -> usize {
        self.energies.len()
    }

    pub fn multiplicity(&self, level: usize) -> usize {
        self.members[level].len()
    }

    /// Eigenbasis columns belonging to `level`, ascending.
    pub fn members(&self, level: usize) -> &[usize] {
        &self.members[level]
    }

    /// Level index of each eigenbasis column.
    pub fn level_of(&self) -> &[usize] {
        &self.level_of
    }

    /// Energy of each eigenbasis column.
    pub fn column_energies(&self) -> Vec<f64> {
        self.level_of.iter().map(|&k| self.energies[k]).collect()
    }

    pub fn is_degenerate(&self) -> bool {
        self.energies.len() < self.dim
    }

    /// True when the eigenbasis is the computational basis.
    pub fn is_diagonal(&self) -> bool {
        self.basis.is_none()
    }

    pub fn spectral_radius(&self) -> f64 {
        self.energies.iter().fold(0.0f64, |a, e| a.max(e.abs()))
    }

    /// Dense eigenbasis, columns ordered as `level_of`.
    pub fn eigenbasis(&self) -> Result<CMatrix> {
        check_entries(self.dim, tol::MAX_ENTRIES)?;
        Ok(match &self.basis {
            Some(b) => b.clone(),
            None => CMatrix::identity(self.dim, self.dim),
        })
    }

    pub fn basis_vector(&self, column: usize) -> CVector {
        match &self.basis {
            Some(b) => b.column(column).into_owned(),
            None => {
                let mut v = CVector::zeros(self.dim);
                v[column] = ONE;
                v
            }
        }
    }

    /// W† A W.
    pub fn to_eigenbasis(&self, op: &CMatrix) -> CMatrix {
        match &self.basis {
            Some(b) => b.adjoint() * op * b,
            None => op.clone(),
        }
    }

    /// W A W†.
    pub fn from_eigenbasis(&self, op: &CMatrix) -> CMatrix {
        match &self.basis {
            Some(b) => b * op * b.adjoint(),
            None => op.clone(),
        }
    }

    pub fn vector_to_eigenbasis(&self, v: &CVector) -> CVector {
        match &self.basis {
            Some(b) => b.adjoint() * v,
            None => v.clone(),
        }
    }

    pub fn vector_from_eigenbasis(&self, v: &CVector) -> CVector {
        match &self.basis {
            Some(b) => b * v,
            None => v.clone(),
        }
    }

    pub fn projector(&self, level: usize) -> Result<CMatrix> {
        check_entries(self.dim, tol::MAX_ENTRIES)?;
        let mut p = CMatrix::zeros(self.dim, self.dim);
        for &c in &self.members[level] {
            p[(c, c)] = ONE;
        }
        Ok(self.from_eigenbasis(&p))
    }

    /// (energy, projector) pairs.
    pub fn levels(&self) -> Result<Vec<(f64, CMatrix)>> {
        (0..self.num_levels()).map(|k| Ok((self.energies[k], self.projector(k)?))).collect()
    }

    pub fn matrix(&self) -> Result<CMatrix> {
        check_entries(self.dim, tol::MAX_ENTRIES)?;
        Ok(self.from_eigenbasis(&linalg::from_real_diagonal(&self.column_energies())))
    }

    /// -H with the same eigenbasis.
    pub fn negated(&self) -> Self {
        let values: Vec<f64> = self.column_energies().iter().map(|e| -e).collect();
        Self::grouped(values, self.basis.clone(), self.grouping_tol)
    }

    /// H_A ⊗ I + I ⊗ H_B, regrouped.
    pub fn tensor_with_limit(&self, other: &Self, cap: usize) -> Result<Self> {
        let dim = self.dim * other.dim;
        let basis = match (&self.basis, &other.basis) {
            (None, None) => {
                if dim > cap {
                    return Err(Error::DimensionLimit { entries: dim, cap });
                }
                None
            }
            _ => {
                check_entries(dim, cap)?;
                Some(linalg::kron(&self.eigenbasis()?, &other.eigenbasis()?))
            }
        };
        let ea = self.column_energies();
        let eb = other.column_energies();
        let values = ea.iter().flat_map(|a| eb.iter().map(move |b| a + b)).collect();
        let radius = self.spectral_radius() + other.spectral_radius();
        let tol = self.grouping_tol.max(other.grouping_tol).max(default_grouping_tol(radius));
        Ok(Self::grouped(values, basis, tol))
    }

    pub fn tensor(&self, other: &Self) -> Result<Self> {
        self.tensor_with_limit(other, tol::MAX_ENTRIES)
    }

    /// Unitary in the computational basis acting as `blocks[k]` on level k,
    /// in the order of `members(k)`.
    pub fn block_operator(&self, blocks: &[CMatrix]) -> Result<CMatrix> {
        if blocks.len() != self.num_levels() {
            return Err(Error::BlockShape(format!("{} blocks for {} levels", blocks.len(), self.num_levels())));
        }
        check_entries(self.dim, tol::MAX_ENTRIES)?;
        let mut inner = CMatrix::zeros(self.dim, self.dim);
        for (k, block) in blocks.iter().enumerate() {
            let cols = &self.members[k];
            if block.nrows() != cols.len() || block.ncols() != cols.len() {
                return Err(Error::BlockShape(format!(
                    "level {k} has rank {} but block is {}x{}",
                    cols.len(),
                    block.nrows(),
                    block.ncols()
                )));
            }
            for (a, &ra) in cols.iter().enumerate() {
                for (b, &cb) in cols.iter().enumerate() {
                    inner[(ra, cb)] = block[(a, b)];
                }
            }
        }
        Ok(self.from_eigenbasis(&inner))
    }

    /// e^{-iHt}.
    pub fn evolution(&self, t: f64) -> Result<CMatrix> {
        let phases: Vec<CMatrix> = self
            .energies
            .iter()
            .enumerate()
            .map(|(k, e)| {
                let n = self.multiplicity(k);
                CMatrix::identity(n, n) * C64::from_polar(1.0, -e * t)
            })
            .collect();
        self.block_operator(&phases)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::random::{random_hermitian, seeded};

    #[test]
    fn tensor_of_diagonals_regroups_sum_set() {
        let a = Hamiltonian::diagonal(&[0.0, 1.0]).unwrap();
        let b = Hamiltonian::diagonal(&[0.0, 1.0, 2.0]).unwrap();
        let t = a.tensor(&b).unwrap();
        assert_eq!(t.energies(), &[0.0, 1.0, 2.0, 3.0]);
        let deg: Vec<usize> = (0..4).map(|k| t.multiplicity(k)).collect();
        assert_eq!(deg, vec![1, 2, 2, 1]);
    }

    #[test]
    fn tensor_spectrum_matches_dense_eigensolver() {
        let mut rng = seeded(11);
        let ha = random_hermitian(3, &mut rng);
        let hb = random_hermitian(4, &mut rng);
        let a = Hamiltonian::from_matrix(&ha, None).unwrap();
        let b = Hamiltonian::from_matrix(&hb, None).unwrap();
        let t = a.tensor(&b).unwrap();
        let dense = linalg::kron(&ha, &CMatrix::identity(4, 4)) + linalg::kron(&CMatrix::identity(3, 3), &hb);
        let oracle = linalg::eigvalsh(&dense);
        let mut ours = t.column_energies();
        ours.sort_by(f64::total_cmp);
        for (x, y) in ours.iter().zip(&oracle) {
            assert!((x - y).abs() < 1e-10);
        }
        assert!(linalg::max_abs(&(t.matrix().unwrap() - dense)) < 1e-10);
    }

    #[test]
    fn projectors_resolve_identity_and_reconstruct() {
        let mut rng = seeded(5);
        let m = random_hermitian(5, &mut rng);
        let h = Hamiltonian::from_matrix(&m, None).unwrap();
        let mut sum = CMatrix::zeros(5, 5);
        let mut recon = CMatrix::zeros(5, 5);
        for (e, p) in h.levels().unwrap() {
            assert!(linalg::max_abs(&(&p * &p - &p)) < 1e-10);
            recon += p.scale(e);
            sum += p;
        }
        assert!(linalg::max_abs(&(sum - CMatrix::identity(5, 5))) < 1e-10);
        assert!(linalg::max_abs(&(recon - m)) < 1e-10);
    }

    #[test]
    fn grouping_merges_near_degenerate() {
        let h = Hamiltonian::diagonal(&[1.0, 0.0, 1.0 + 1e-12, 2.0]).unwrap();
        assert_eq!(h.num_levels(), 3);
        assert_eq!(h.members(1), &[0, 2]);
    }

    #[test]
    fn block_shape_is_checked() {
        let h = Hamiltonian::diagonal(&[0.0, 0.0, 1.0]).unwrap();
        let bad = vec![CMatrix::identity(1, 1), CMatrix::identity(1, 1)];
        assert!(matches!(h.block_operator(&bad), Err(Error::BlockShape(_))));
    }
}
