//! JSON file formats for operators, states, Hamiltonians, channel bundles,
//! gates with exact spectra, random variables and prepartitions.

use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::bounds::GateInstance;
use crate::channels::TepChannel;
use crate::error::{Error, Result};
use crate::iid::{Basis, DiscreteRV, DiscreteRvFile, ExactReal, Prepartition};
use crate::quantum::linalg::{CMatrix, CVector, C64};
use crate::quantum::{DensityOperator, Hamiltonian, PureState};

/// Reads and parses a JSON file; any failure is a schema error naming the path.
pub fn read_json<T: DeserializeOwned>(path: impl AsRef<Path>) -> Result<T> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::Schema(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Schema(format!("{}: {e}", path.display())))
}

pub fn write_json<T: Serialize>(path: impl AsRef<Path>, value: &T) -> Result<()> {
    let path = path.as_ref();
    let text = serde_json::to_string_pretty(value).map_err(|e| Error::Schema(e.to_string()))?;
    fs::write(path, text + "\n").map_err(|e| Error::Schema(format!("{}: {e}", path.display())))
}

/// `{"dim": n, "re": [[...]], "im": [[...]]}`; `im` may be omitted.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixFile {
    pub dim: usize,
    pub re: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub im: Option<Vec<Vec<f64>>>,
}

fn check_rows(name: &str, rows: &[Vec<f64>], dim: usize) -> Result<()> {
    if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
        return Err(Error::Schema(format!("`{name}` must be {dim}x{dim}")));
    }
    Ok(())
}

impl MatrixFile {
    pub fn from_matrix(m: &CMatrix) -> Self {
        let rows = |f: fn(&C64) -> f64| (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| f(&m[(i, j)])).collect()).collect();
        let im: Vec<Vec<f64>> = rows(|z| z.im);
        let real = im.iter().flatten().all(|&x| x == 0.0);
        Self { dim: m.nrows(), re: rows(|z| z.re), im: (!real).then_some(im) }
    }

    pub fn to_matrix(&self) -> Result<CMatrix> {
        check_rows("re", &self.re, self.dim)?;
        if let Some(im) = &self.im {
            check_rows("im", im, self.dim)?;
        }
        Ok(CMatrix::from_fn(self.dim, self.dim, |i, j| {
            C64::new(self.re[i][j], self.im.as_ref().map_or(0.0, |im| im[i][j]))
        }))
    }
}

/// A density matrix (matrix schema) or a pure state with 1-D `re`/`im`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum StateFile {
    Density(MatrixFile),
    Pure {
        dim: usize,
        re: Vec<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        im: Option<Vec<f64>>,
    },
}

impl StateFile {
    pub fn from_density(rho: &DensityOperator) -> Self {
        Self::Density(MatrixFile::from_matrix(rho.matrix()))
    }

    pub fn from_pure(psi: &PureState) -> Self {
        let v = psi.vector();
        let im: Vec<f64> = v.iter().map(|z| z.im).collect();
        let real = im.iter().all(|&x| x == 0.0);
        Self::Pure { dim: v.len(), re: v.iter().map(|z| z.re).collect(), im: (!real).then_some(im) }
    }

    pub fn to_density(&self) -> Result<DensityOperator> {
        match self {
            Self::Density(m) => DensityOperator::new(m.to_matrix()?),
            Self::Pure { .. } => Ok(self.to_pure()?.to_density()),
        }
    }

    /// The pure state, or an error for a density matrix.
    pub fn to_pure(&self) -> Result<PureState> {
        match self {
            Self::Density(_) => Err(Error::Schema("expected a state vector, found a density matrix".into())),
            Self::Pure { dim, re, im } => {
                if re.len() != *dim || im.as_ref().is_some_and(|im| im.len() != *dim) {
                    return Err(Error::Schema(format!("state vector must have {dim} entries")));
                }
                let v = CVector::from_fn(*dim, |i, _| C64::new(re[i], im.as_ref().map_or(0.0, |im| im[i])));
                PureState::new(v)
            }
        }
    }
}

/// A dense Hermitian matrix, or a diagonal one given by `energies` alone.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HamiltonianFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub re: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub im: Option<Vec<Vec<f64>>>,
    /// Distinct levels, ascending.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub energies: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grouping_tol: Option<f64>,
}

impl HamiltonianFile {
    pub fn from_hamiltonian(h: &Hamiltonian) -> Result<Self> {
        let m = MatrixFile::from_matrix(&h.matrix()?);
        Ok(Self {
            dim: Some(m.dim),
            re: Some(m.re),
            im: m.im,
            energies: Some(h.energies().to_vec()),
            grouping_tol: Some(h.grouping_tol()),
        })
    }

    pub fn to_hamiltonian(&self) -> Result<Hamiltonian> {
        match (&self.re, &self.energies) {
            (Some(re), _) => {
                let dim = self.dim.unwrap_or(re.len());
                let m = MatrixFile { dim, re: re.clone(), im: self.im.clone() }.to_matrix()?;
                let h = Hamiltonian::from_matrix(&m, self.grouping_tol)?;
                if let Some(levels) = &self.energies {
                    let ok = levels.len() == h.num_levels()
                        && levels.iter().zip(h.energies()).all(|(a, b)| (a - b).abs() <= h.grouping_tol().max(1e-9));
                    if !ok {
                        return Err(Error::Schema("`energies` disagree with the matrix spectrum".into()));
                    }
                }
                Ok(h)
            }
            (None, Some(e)) => {
                if self.dim.is_some_and(|d| d != e.len()) {
                    return Err(Error::Schema("`dim` disagrees with the number of energies".into()));
                }
                match self.grouping_tol {
                    Some(t) => Hamiltonian::diagonal_with_tol(e, t),
                    None => Hamiltonian::diagonal(e),
                }
            }
            (None, None) => Err(Error::Schema("Hamiltonian needs `re` or `energies`".into())),
        }
    }
}

/// A system–battery unitary with its Hamiltonians and battery state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[allow(non_snake_case)]
pub struct ChannelBundle {
    pub H_S: HamiltonianFile,
    pub H_B: HamiltonianFile,
    pub beta_B: StateFile,
    pub U_SB: MatrixFile,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target_gate: Option<MatrixFile>,
}

impl ChannelBundle {
    pub fn from_channel(ch: &TepChannel, name: Option<String>, target: Option<&CMatrix>) -> Result<Self> {
        Ok(Self {
            H_S: HamiltonianFile::from_hamiltonian(ch.h_s())?,
            H_B: HamiltonianFile::from_hamiltonian(ch.h_b())?,
            beta_B: StateFile::from_density(ch.beta()),
            U_SB: MatrixFile::from_matrix(ch.unitary()),
            name,
            target_gate: target.map(MatrixFile::from_matrix),
        })
    }

    pub fn to_channel(&self) -> Result<TepChannel> {
        TepChannel::new(
            self.H_S.to_hamiltonian()?,
            self.H_B.to_hamiltonian()?,
            self.beta_B.to_density()?,
            self.U_SB.to_matrix()?,
        )
    }

    pub fn target(&self) -> Result<Option<CMatrix>> {
        self.target_gate.as_ref().map(MatrixFile::to_matrix).transpose()
    }
}

/// A gate on a system with an optional exact description of its levels:
/// `basis` names the rationally independent reals, `levels` lists one
/// coefficient vector per distinct energy, ascending.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GateFile {
    pub hamiltonian: HamiltonianFile,
    pub gate: MatrixFile,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub levels: Option<Vec<Vec<String>>>,
}

impl GateFile {
    /// Builds the instance; `basis_override` replaces the file's basis names.
    pub fn to_instance(&self, basis_override: Option<&[String]>) -> Result<GateInstance> {
        let g = GateInstance::new(self.hamiltonian.to_hamiltonian()?, self.gate.to_matrix()?)?;
        let names = basis_override.or(self.basis.as_deref());
        match (names, &self.levels) {
            (Some(names), Some(levels)) => {
                let basis = Basis::new(names)?;
                let exact = levels.iter().map(|c| ExactReal::parse(c, &basis)).collect::<Result<Vec<_>>>()?;
                g.with_exact_levels(basis, exact)
            }
            (None, Some(_)) => Err(Error::Schema("`levels` given without a basis".into())),
            (Some(_), None) => Err(Error::Schema("a basis needs `levels` coefficients".into())),
            (None, None) => Ok(g),
        }
    }
}

pub fn load_rv(path: impl AsRef<Path>) -> Result<DiscreteRV> {
    DiscreteRV::from_file(&read_json::<DiscreteRvFile>(path)?)
}

pub fn load_prepartition(path: impl AsRef<Path>) -> Result<Prepartition> {
    read_json(path)
}
