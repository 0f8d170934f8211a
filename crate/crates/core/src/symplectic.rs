//! Dense symplectic linear algebra over covariance matrices.
//!
//! Quadratures are ordered `x1, p1, x2, p2, …, xn, pn` and the vacuum
//! covariance matrix is the identity. With this convention a matrix `σ` is a
//! physical covariance matrix iff all of its symplectic eigenvalues are `≥ 1`.

use nalgebra::{Cholesky, DMatrix, Dyn, Matrix2};
use serde::{Deserialize, Serialize};

use crate::error::{Result, SteerError};

/// Numerical tolerances used across the crate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    /// Absolute slack for symmetry checks and inequality comparisons.
    pub absolute: f64,
    /// Relative mismatch allowed when pairing the doubled symplectic spectrum.
    pub pairing: f64,
    /// Slack on `ν ≥ 1` (validity) and `|ν − 1|` (purity).
    pub validity: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            absolute: 1e-9,
            pairing: 1e-6,
            validity: 1e-8,
        }
    }
}

/// The block-diagonal form `Ω = ω ⊕ … ⊕ ω` with `ω = [[0, 1], [−1, 0]]`.
#[derive(Clone, Debug, PartialEq)]
pub struct SymplecticForm {
    matrix: DMatrix<f64>,
}

impl SymplecticForm {
    pub fn new(n_modes: usize) -> Self {
        let mut matrix = DMatrix::zeros(2 * n_modes, 2 * n_modes);
        for k in 0..n_modes {
            matrix[(2 * k, 2 * k + 1)] = 1.0;
            matrix[(2 * k + 1, 2 * k)] = -1.0;
        }
        SymplecticForm { matrix }
    }

    pub fn n_modes(&self) -> usize {
        self.matrix.nrows() / 2
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }
}

/// Disjoint, non-empty sets of mode indices labelling the parties of a
/// multipartite state. Modes not covered by any part are simply ignored by
/// the operations consuming the partition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModePartition {
    parts: Vec<Vec<usize>>,
}

impl ModePartition {
    pub fn new(parts: Vec<Vec<usize>>, n_modes: usize) -> Result<Self> {
        let mut seen = vec![false; n_modes];
        for (p, part) in parts.iter().enumerate() {
            if part.is_empty() {
                return Err(SteerError::usage(format!("party {p} is empty")));
            }
            for &m in part {
                if m >= n_modes {
                    return Err(SteerError::usage(format!(
                        "mode {m} out of range for {n_modes} modes"
                    )));
                }
                if seen[m] {
                    return Err(SteerError::usage(format!(
                        "mode {m} appears in more than one party"
                    )));
                }
                seen[m] = true;
            }
        }
        Ok(ModePartition { parts })
    }

    /// One party per mode, in order.
    pub fn single_modes(n_modes: usize) -> Self {
        ModePartition {
            parts: (0..n_modes).map(|m| vec![m]).collect(),
        }
    }

    pub fn parts(&self) -> &[Vec<usize>] {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Union of every part except `k`, in party order.
    pub fn rest(&self, k: usize) -> Vec<usize> {
        self.parts
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != k)
            .flat_map(|(_, p)| p.iter().copied())
            .collect()
    }
}

/// A validated `2n × 2n` covariance matrix.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "CovarianceJson", into = "CovarianceJson")]
pub struct CovarianceMatrix {
    matrix: DMatrix<f64>,
}

/// Wire form: `{"n_modes": n, "matrix": [[…], …]}`, row-major.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CovarianceJson {
    pub n_modes: usize,
    pub matrix: Vec<Vec<f64>>,
}

impl TryFrom<CovarianceJson> for CovarianceMatrix {
    type Error = SteerError;

    fn try_from(json: CovarianceJson) -> Result<Self> {
        let dim = 2 * json.n_modes;
        if json.matrix.len() != dim || json.matrix.iter().any(|row| row.len() != dim) {
            return Err(SteerError::usage(format!(
                "matrix must be {dim}x{dim} for n_modes = {}",
                json.n_modes
            )));
        }
        let matrix = DMatrix::from_fn(dim, dim, |i, j| json.matrix[i][j]);
        CovarianceMatrix::new(matrix)
    }
}

impl From<CovarianceMatrix> for CovarianceJson {
    fn from(cm: CovarianceMatrix) -> Self {
        let dim = cm.matrix.nrows();
        CovarianceJson {
            n_modes: dim / 2,
            matrix: (0..dim)
                .map(|i| (0..dim).map(|j| cm.matrix[(i, j)]).collect())
                .collect(),
        }
    }
}

impl CovarianceMatrix {
    /// Validates shape, symmetry and the uncertainty principle with default
    /// tolerances.
    pub fn new(matrix: DMatrix<f64>) -> Result<Self> {
        Self::with_tolerances(matrix, &Tolerances::default())
    }

    pub fn with_tolerances(matrix: DMatrix<f64>, tol: &Tolerances) -> Result<Self> {
        check_shape(&matrix)?;
        let report = validity_report(&matrix, tol)?;
        if !report.valid {
            return Err(SteerError::domain(format!(
                "not a valid covariance matrix (symmetry defect {:e}, min eigenvalue {:e}, min symplectic eigenvalue {})",
                report.symmetry_defect,
                report.min_eigenvalue,
                report
                    .min_symplectic_eigenvalue
                    .map_or("n/a".to_string(), |v| format!("{v:e}")),
            )));
        }
        Ok(Self::from_matrix_unchecked(matrix))
    }

    /// Wraps a matrix already known to be a covariance matrix, symmetrizing
    /// away roundoff.
    pub(crate) fn from_matrix_unchecked(matrix: DMatrix<f64>) -> Self {
        let sym = (&matrix + matrix.transpose()) * 0.5;
        CovarianceMatrix { matrix: sym }
    }

    pub fn vacuum(n_modes: usize) -> Self {
        CovarianceMatrix {
            matrix: DMatrix::identity(2 * n_modes, 2 * n_modes),
        }
    }

    /// `ν · I` on every mode.
    pub fn thermal(n_modes: usize, nu: f64) -> Result<Self> {
        if !(nu >= 1.0) {
            return Err(SteerError::usage(format!(
                "thermal ν must be ≥ 1, got {nu}"
            )));
        }
        Ok(CovarianceMatrix {
            matrix: DMatrix::identity(2 * n_modes, 2 * n_modes) * nu,
        })
    }

    /// Block-diagonal tensor product of the given states, in order.
    pub fn direct_sum(parts: &[CovarianceMatrix]) -> Self {
        let dim: usize = parts.iter().map(|p| p.matrix.nrows()).sum();
        let mut matrix = DMatrix::zeros(dim, dim);
        let mut offset = 0;
        for p in parts {
            let d = p.matrix.nrows();
            matrix
                .view_mut((offset, offset), (d, d))
                .copy_from(&p.matrix);
            offset += d;
        }
        CovarianceMatrix { matrix }
    }

    pub fn n_modes(&self) -> usize {
        self.matrix.nrows() / 2
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.matrix
    }

    /// The 2×2 block coupling modes `i` and `j`.
    pub fn block(&self, i: usize, j: usize) -> Matrix2<f64> {
        self.matrix.fixed_view::<2, 2>(2 * i, 2 * j).into_owned()
    }

    pub fn symplectic_eigenvalues(&self) -> Result<Vec<f64>> {
        symplectic_eigenvalues(&self.matrix)
    }

    pub fn log_det(&self) -> Result<f64> {
        log_det(&self.matrix)
    }

    pub fn is_pure(&self) -> bool {
        is_pure(self, &Tolerances::default())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("covariance matrix serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let raw: CovarianceJson = serde_json::from_str(s)
            .map_err(|e| SteerError::usage(format!("bad state JSON: {e}")))?;
        CovarianceMatrix::try_from(raw)
    }
}

fn check_shape(m: &DMatrix<f64>) -> Result<()> {
    if m.nrows() != m.ncols() || m.nrows() == 0 || !m.nrows().is_multiple_of(2) {
        return Err(SteerError::usage(format!(
            "expected a non-empty 2n×2n matrix, got {}×{}",
            m.nrows(),
            m.ncols()
        )));
    }
    if m.iter().any(|v| !v.is_finite()) {
        return Err(SteerError::domain("matrix has non-finite entries"));
    }
    Ok(())
}

fn symmetry_defect(m: &DMatrix<f64>) -> f64 {
    (m - m.transpose()).amax()
}

fn symmetry_tolerance(m: &DMatrix<f64>, tol: &Tolerances) -> f64 {
    tol.absolute * m.amax().max(1.0)
}

fn cholesky(m: &DMatrix<f64>) -> Result<Cholesky<f64, Dyn>> {
    Cholesky::new(m.clone()).ok_or_else(|| SteerError::domain("matrix is not positive definite"))
}

/// Row/column indices of the quadratures of `modes`, in the given order.
pub fn quadrature_indices(modes: &[usize]) -> Vec<usize> {
    modes.iter().flat_map(|&m| [2 * m, 2 * m + 1]).collect()
}

pub(crate) fn principal_submatrix(m: &DMatrix<f64>, idx: &[usize]) -> DMatrix<f64> {
    DMatrix::from_fn(idx.len(), idx.len(), |i, j| m[(idx[i], idx[j])])
}

pub(crate) fn cross_block(m: &DMatrix<f64>, rows: &[usize], cols: &[usize]) -> DMatrix<f64> {
    DMatrix::from_fn(rows.len(), cols.len(), |i, j| m[(rows[i], cols[j])])
}

/// Checks that `modes` is a non-empty set of distinct in-range indices.
pub(crate) fn check_mode_set(modes: &[usize], n_modes: usize, what: &str) -> Result<()> {
    if modes.is_empty() {
        return Err(SteerError::usage(format!("{what} mode set is empty")));
    }
    let mut seen = vec![false; n_modes];
    for &m in modes {
        if m >= n_modes {
            return Err(SteerError::usage(format!(
                "{what}: mode {m} out of range for {n_modes} modes"
            )));
        }
        if seen[m] {
            return Err(SteerError::usage(format!("{what}: mode {m} repeated")));
        }
        seen[m] = true;
    }
    Ok(())
}

pub(crate) fn check_disjoint(a: &[usize], b: &[usize]) -> Result<()> {
    if let Some(m) = a.iter().find(|m| b.contains(m)) {
        return Err(SteerError::usage(format!("mode {m} appears in both sets")));
    }
    Ok(())
}

/// Symplectic spectrum `ν_1 ≤ … ≤ ν_n` of a symmetric positive-definite
/// `2n × 2n` matrix: the moduli of the eigenvalues `±iν_k` of `ΩM`.
///
/// With `M = L Lᵀ`, `ΩM` is similar to the antisymmetric `Lᵀ Ω L`, whose
/// singular values are the `ν_k`, each appearing twice.
pub fn symplectic_eigenvalues(m: &DMatrix<f64>) -> Result<Vec<f64>> {
    symplectic_eigenvalues_with(m, &Tolerances::default())
}

pub fn symplectic_eigenvalues_with(m: &DMatrix<f64>, tol: &Tolerances) -> Result<Vec<f64>> {
    check_shape(m)?;
    let defect = symmetry_defect(m);
    if defect > symmetry_tolerance(m, tol) {
        return Err(SteerError::domain(format!(
            "matrix is not symmetric (defect {defect:e})"
        )));
    }
    let l = cholesky(m)?.l();
    let omega = SymplecticForm::new(m.nrows() / 2);
    let a = l.transpose() * omega.matrix() * &l;
    let mut sv: Vec<f64> = a.singular_values().iter().copied().collect();
    sv.sort_by(f64::total_cmp);
    let mut out = Vec::with_capacity(sv.len() / 2);
    for pair in sv.chunks_exact(2) {
        let mismatch = (pair[1] - pair[0]).abs() / pair[1].max(f64::MIN_POSITIVE);
        if mismatch > tol.pairing {
            return Err(SteerError::internal(format!(
                "symplectic spectrum pairing failed ({} vs {})",
                pair[0], pair[1]
            )));
        }
        out.push(0.5 * (pair[0] + pair[1]));
    }
    Ok(out)
}

/// `ln det M` from a Cholesky factorization.
pub fn log_det(m: &DMatrix<f64>) -> Result<f64> {
    let chol = cholesky(m)?;
    let l = chol.l_dirty();
    Ok(2.0 * (0..m.nrows()).map(|i| l[(i, i)].ln()).sum::<f64>())
}

/// `det M` for a symmetric positive-definite matrix.
pub fn det_spd(m: &DMatrix<f64>) -> Result<f64> {
    log_det(m).map(f64::exp)
}

/// `σ_kept − Cᵀ σ_removed⁻¹ C`, over the modes not in `removed`, in
/// ascending mode order.
pub fn schur_complement(sigma: &CovarianceMatrix, removed: &[usize]) -> Result<DMatrix<f64>> {
    let n = sigma.n_modes();
    check_mode_set(removed, n, "removed")?;
    if removed.len() == n {
        return Err(SteerError::usage("cannot remove every mode"));
    }
    let kept: Vec<usize> = (0..n).filter(|m| !removed.contains(m)).collect();
    Ok(schur_complement_of(
        sigma.matrix(),
        &quadrature_indices(removed),
        &quadrature_indices(&kept),
    ))
}

/// Schur complement of the `removed` rows/columns within the `kept` ones of
/// an SPD matrix. Indices are raw row indices, not modes.
pub(crate) fn schur_complement_of(
    m: &DMatrix<f64>,
    removed: &[usize],
    kept: &[usize],
) -> DMatrix<f64> {
    let kk = principal_submatrix(m, kept);
    let rr = principal_submatrix(m, removed);
    let rk = cross_block(m, removed, kept);
    let solved = Cholesky::new(rr)
        .expect("principal block of an SPD matrix is SPD")
        .solve(&rk);
    let s = kk - rk.transpose() * solved;
    (&s + s.transpose()) * 0.5
}

/// Reduced state on `kept`, with modes reordered as listed.
pub fn partial_trace(sigma: &CovarianceMatrix, kept: &[usize]) -> Result<CovarianceMatrix> {
    check_mode_set(kept, sigma.n_modes(), "kept")?;
    let idx = quadrature_indices(kept);
    Ok(CovarianceMatrix {
        matrix: principal_submatrix(sigma.matrix(), &idx),
    })
}

/// Largest entry of `|S Ω Sᵀ − Ω|`.
pub fn symplectic_defect(s: &DMatrix<f64>) -> f64 {
    let omega = SymplecticForm::new(s.nrows() / 2);
    (s * omega.matrix() * s.transpose() - omega.matrix()).amax()
}

pub fn is_symplectic(s: &DMatrix<f64>, tol: f64) -> bool {
    s.is_square()
        && s.nrows().is_multiple_of(2)
        && symplectic_defect(s) <= tol * s.amax().powi(2).max(1.0)
}

/// `S σ Sᵀ` for a symplectic `S`.
pub fn apply_symplectic(sigma: &CovarianceMatrix, s: &DMatrix<f64>) -> Result<CovarianceMatrix> {
    let dim = sigma.matrix().nrows();
    if s.nrows() != dim || s.ncols() != dim {
        return Err(SteerError::usage(format!(
            "symplectic matrix must be {dim}×{dim}, got {}×{}",
            s.nrows(),
            s.ncols()
        )));
    }
    let tol = Tolerances::default().absolute;
    if !is_symplectic(s, tol) {
        return Err(SteerError::domain(format!(
            "matrix is not symplectic: ‖SΩSᵀ − Ω‖ = {:e}",
            symplectic_defect(s)
        )));
    }
    Ok(CovarianceMatrix::from_matrix_unchecked(
        s * sigma.matrix() * s.transpose(),
    ))
}

/// `ln det σ`.
pub fn log_det_cm(sigma: &CovarianceMatrix) -> Result<f64> {
    log_det(sigma.matrix())
}

/// `I_{B|A} = M(σ_{AB}) − M(σ_A)` with `B = conditioned`, `A = conditioning`.
pub fn conditional_log_det(
    sigma: &CovarianceMatrix,
    conditioned: &[usize],
    conditioning: &[usize],
) -> Result<f64> {
    let n = sigma.n_modes();
    check_mode_set(conditioned, n, "conditioned")?;
    check_mode_set(conditioning, n, "conditioning")?;
    check_disjoint(conditioned, conditioning)?;
    let joint: Vec<usize> = conditioning.iter().chain(conditioned).copied().collect();
    let m_joint = log_det_cm(&partial_trace(sigma, &joint)?)?;
    let m_cond = log_det_cm(&partial_trace(sigma, conditioning)?)?;
    Ok(m_joint - m_cond)
}

/// All symplectic eigenvalues within `tol.validity` of one.
pub fn is_pure(sigma: &CovarianceMatrix, tol: &Tolerances) -> bool {
    match sigma.symplectic_eigenvalues() {
        Ok(nu) => nu.iter().all(|v| (v - 1.0).abs() <= tol.validity),
        Err(_) => false,
    }
}

/// Diagnostics for a candidate covariance matrix.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ValidityReport {
    pub symmetry_defect: f64,
    pub min_eigenvalue: f64,
    /// `None` when the matrix is not positive definite.
    pub min_symplectic_eigenvalue: Option<f64>,
    pub valid: bool,
    pub pure: bool,
}

pub fn validity_report(m: &DMatrix<f64>, tol: &Tolerances) -> Result<ValidityReport> {
    check_shape(m)?;
    let defect = symmetry_defect(m);
    let sym = (m + m.transpose()) * 0.5;
    let min_eigenvalue = sym
        .clone()
        .symmetric_eigenvalues()
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min);
    let spectrum = if min_eigenvalue > 0.0 {
        symplectic_eigenvalues_with(&sym, tol).ok()
    } else {
        None
    };
    let min_nu = spectrum
        .as_ref()
        .map(|nu| nu.iter().copied().fold(f64::INFINITY, f64::min));
    let symmetric = defect <= symmetry_tolerance(m, tol);
    let valid = symmetric && min_nu.is_some_and(|v| v >= 1.0 - tol.validity);
    let pure = valid
        && spectrum
            .as_ref()
            .is_some_and(|nu| nu.iter().all(|v| (v - 1.0).abs() <= tol.validity));
    Ok(ValidityReport {
        symmetry_defect: defect,
        min_eigenvalue,
        min_symplectic_eigenvalue: min_nu,
        valid,
        pure,
    })
}
