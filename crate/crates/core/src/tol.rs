//! Numerical tolerances shared across modules.

/// Trace and positivity slack accepted for density operators.
pub const STATE: f64 = 1e-10;
/// Norm slack accepted for pure states.
pub const PURE_NORM: f64 = 1e-12;
/// Hermiticity and unitarity slack for validated matrices.
pub const MATRIX: f64 = 1e-10;
/// Eigenvalues below this contribute nothing to entropies.
pub const ENTROPY_CLAMP: f64 = 1e-14;
/// Relative eigenvalue threshold deciding the support of a state.
pub const SUPPORT: f64 = 1e-12;
/// Eigenvalues of a difference within this band go to the positive part.
pub const JORDAN_HAHN: f64 = 1e-12;
/// Energy-distribution weights below this are dropped.
pub const DISTRIBUTION: f64 = 1e-14;
/// Level population counted as occupied.
pub const OCCUPIED: f64 = 1e-12;
/// Default dense-matrix entry cap.
pub const MAX_ENTRIES: usize = 1 << 20;
