//! Exact linear algebra over an abstract field: matrices, reduced row
//! echelon form, solvers, and canonically presented subspaces.
//!
//! Subspaces are always stored in reduced row echelon form with leading
//! coefficient 1 and zero rows dropped, so equality of subspaces is plain
//! structural equality.

use crate::scalar::Field;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LinalgError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("ambient mismatch: `{0}` vs `{1}`")]
    AmbientMismatch(String, String),
}

/// Dense matrix with entries in `F`, row major.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix<F: Field> {
    pub rows: Vec<Vec<F>>,
    pub ncols: usize,
}

impl<F: Field> Matrix<F> {
    pub fn from_rows(rows: Vec<Vec<F>>) -> Self {
        let ncols = rows.first().map(|r| r.len()).unwrap_or(0);
        assert!(rows.iter().all(|r| r.len() == ncols), "ragged rows");
        Matrix { rows, ncols }
    }

    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        Matrix { rows: vec![vec![F::zero(); ncols]; nrows], ncols }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for k in 0..n {
            m.rows[k][k] = F::one();
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn transpose(&self) -> Matrix<F> {
        let mut t = Matrix::zeros(self.ncols, self.nrows());
        for (r, row) in self.rows.iter().enumerate() {
            for (c, v) in row.iter().enumerate() {
                t.rows[c][r] = v.clone();
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &[F]) -> Result<Vec<F>, LinalgError> {
        if v.len() != self.ncols {
            return Err(LinalgError::DimensionMismatch(format!(
                "matrix has {} columns, vector has {} entries",
                self.ncols,
                v.len()
            )));
        }
        Ok(self
            .rows
            .iter()
            .map(|row| {
                let mut acc = F::zero();
                for (a, b) in row.iter().zip(v) {
                    acc = acc.add(&a.mul(b));
                }
                acc
            })
            .collect())
    }

    /// In-place reduced row echelon form; returns the pivot columns.
    pub fn rref_in_place(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.ncols {
            if row == self.rows.len() {
                break;
            }
            let Some(p) = (row..self.rows.len()).find(|&r| !self.rows[r][col].is_zero()) else {
                continue;
            };
            self.rows.swap(row, p);
            let inv = self.rows[row][col].recip();
            for c in col..self.ncols {
                self.rows[row][c] = self.rows[row][c].mul(&inv);
            }
            for r in 0..self.rows.len() {
                if r != row && !self.rows[r][col].is_zero() {
                    let factor = self.rows[r][col].clone();
                    for c in col..self.ncols {
                        let delta = factor.mul(&self.rows[row][c]);
                        self.rows[r][c] = self.rows[r][c].sub(&delta);
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref_in_place().len()
    }

    /// Basis of the right kernel { x : A·x = 0 }.
    pub fn kernel_basis(&self) -> Vec<Vec<F>> {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        let mut is_pivot = vec![false; self.ncols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::new();
        for free in 0..self.ncols {
            if is_pivot[free] {
                continue;
            }
            let mut v = vec![F::zero(); self.ncols];
            v[free] = F::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = m.rows[r][free].neg();
            }
            basis.push(v);
        }
        basis
    }

    /// Determinant (square matrices), by exact Gaussian elimination.
    pub fn det(&self) -> F {
        assert_eq!(self.nrows(), self.ncols, "determinant of non-square matrix");
        let n = self.ncols;
        let mut m = self.rows.clone();
        let mut det = F::one();
        for col in 0..n {
            let Some(p) = (col..n).find(|&r| !m[r][col].is_zero()) else {
                return F::zero();
            };
            if p != col {
                m.swap(p, col);
                det = det.neg();
            }
            det = det.mul(&m[col][col]);
            let inv = m[col][col].recip();
            for r in col + 1..n {
                if m[r][col].is_zero() {
                    continue;
                }
                let factor = m[r][col].mul(&inv);
                for c in col..n {
                    let delta = factor.mul(&m[col][c]);
                    m[r][c] = m[r][c].sub(&delta);
                }
            }
        }
        det
    }
}

impl<F: Field> fmt::Debug for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.rows {
            writeln!(f, "{}", row.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("\t"))?;
        }
        Ok(())
    }
}

/// Exact solution set of A·x = b.
#[derive(Clone, Debug, PartialEq)]
pub enum LinearSolution<F: Field> {
    Inconsistent,
    Solution { particular: Vec<F>, kernel: Vec<Vec<F>> },
}

impl<F: Field> LinearSolution<F> {
    pub fn unique(&self) -> Option<&Vec<F>> {
        match self {
            LinearSolution::Solution { particular, kernel } if kernel.is_empty() => Some(particular),
            _ => None,
        }
    }
}

/// Solve A·x = b exactly.
pub fn solve_linear<F: Field>(a: &Matrix<F>, b: &[F]) -> Result<LinearSolution<F>, LinalgError> {
    if b.len() != a.nrows() {
        return Err(LinalgError::DimensionMismatch(format!(
            "matrix has {} rows, rhs has {} entries",
            a.nrows(),
            b.len()
        )));
    }
    let mut aug = Matrix::zeros(a.nrows(), a.ncols + 1);
    for (r, row) in a.rows.iter().enumerate() {
        aug.rows[r][..a.ncols].clone_from_slice(row);
        aug.rows[r][a.ncols] = b[r].clone();
    }
    let pivots = aug.rref_in_place();
    if pivots.contains(&a.ncols) {
        return Ok(LinearSolution::Inconsistent);
    }
    let mut particular = vec![F::zero(); a.ncols];
    for (r, &p) in pivots.iter().enumerate() {
        particular[p] = aug.rows[r][a.ncols].clone();
    }
    Ok(LinearSolution::Solution { particular, kernel: a.kernel_basis() })
}

/// Where a subspace lives: an identifier for the graded component plus
/// its dimension. Operations on subspaces refuse mixed ambients.
#[derive(Clone, PartialEq, Eq, Debug, serde::Serialize, serde::Deserialize)]
pub struct Ambient {
    pub id: String,
    pub dim: usize,
}

impl Ambient {
    pub fn new(id: impl Into<String>, dim: usize) -> Self {
        Ambient { id: id.into(), dim }
    }
}

/// A subspace in canonical (reduced row echelon) presentation.
#[derive(Clone, PartialEq, Eq)]
pub struct SubspacePresentation<F: Field> {
    ambient: Ambient,
    basis: Matrix<F>,
}

impl<F: Field> SubspacePresentation<F> {
    pub fn zero(ambient: Ambient) -> Self {
        let dim = ambient.dim;
        SubspacePresentation { ambient, basis: Matrix::zeros(0, dim) }
    }

    pub fn full(ambient: Ambient) -> Self {
        let dim = ambient.dim;
        SubspacePresentation { ambient, basis: Matrix::identity(dim) }
    }

    /// Canonicalize a spanning set.
    pub fn from_spanning(ambient: Ambient, vectors: &[Vec<F>]) -> Result<Self, LinalgError> {
        for v in vectors {
            if v.len() != ambient.dim {
                return Err(LinalgError::DimensionMismatch(format!(
                    "ambient dim {} but vector has {} entries",
                    ambient.dim,
                    v.len()
                )));
            }
        }
        let mut m = Matrix::from_rows(vectors.to_vec());
        m.ncols = ambient.dim;
        m.rref_in_place();
        m.rows.retain(|r| r.iter().any(|v| !v.is_zero()));
        Ok(SubspacePresentation { ambient, basis: m })
    }

    pub fn ambient(&self) -> &Ambient {
        &self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.nrows()
    }

    pub fn basis_rows(&self) -> &[Vec<F>] {
        &self.basis.rows
    }

    fn check_ambient(&self, other: &Self) -> Result<(), LinalgError> {
        if self.ambient != other.ambient {
            return Err(LinalgError::AmbientMismatch(
                self.ambient.id.clone(),
                other.ambient.id.clone(),
            ));
        }
        Ok(())
    }

    pub fn contains_vector(&self, v: &[F]) -> Result<bool, LinalgError> {
        if v.len() != self.ambient.dim {
            return Err(LinalgError::DimensionMismatch(format!(
                "ambient dim {} but vector has {} entries",
                self.ambient.dim,
                v.len()
            )));
        }
        // Reduce v against the echelon basis.
        let mut v = v.to_vec();
        for row in &self.basis.rows {
            let lead = row.iter().position(|x| !x.is_zero()).unwrap();
            if !v[lead].is_zero() {
                let factor = v[lead].clone();
                for c in 0..v.len() {
                    let delta = factor.mul(&row[c]);
                    v[c] = v[c].sub(&delta);
                }
            }
        }
        Ok(v.iter().all(|x| x.is_zero()))
    }

    pub fn contains(&self, other: &Self) -> Result<bool, LinalgError> {
        self.check_ambient(other)?;
        for row in &other.basis.rows {
            if !self.contains_vector(row)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn equals(&self, other: &Self) -> Result<bool, LinalgError> {
        self.check_ambient(other)?;
        Ok(self.basis == other.basis)
    }

    pub fn sum(&self, other: &Self) -> Result<Self, LinalgError> {
        self.check_ambient(other)?;
        let mut rows = self.basis.rows.clone();
        rows.extend(other.basis.rows.iter().cloned());
        SubspacePresentation::from_spanning(self.ambient.clone(), &rows)
    }

    /// Zassenhaus: row reduce [U | U; V | 0]; rows with zero left half
    /// carry an intersection basis in the right half.
    pub fn intersect(&self, other: &Self) -> Result<Self, LinalgError> {
        self.check_ambient(other)?;
        let d = self.ambient.dim;
        let mut rows = Vec::new();
        for u in &self.basis.rows {
            let mut row = u.clone();
            row.extend(u.iter().cloned());
            rows.push(row);
        }
        for v in &other.basis.rows {
            let mut row = v.clone();
            row.extend(std::iter::repeat(F::zero()).take(d));
            rows.push(row);
        }
        if rows.is_empty() {
            return Ok(SubspacePresentation::zero(self.ambient.clone()));
        }
        let mut m = Matrix::from_rows(rows);
        m.ncols = 2 * d;
        m.rref_in_place();
        let mut inter = Vec::new();
        for row in &m.rows {
            if row[..d].iter().all(|x| x.is_zero()) && row[d..].iter().any(|x| !x.is_zero()) {
                inter.push(row[d..].to_vec());
            }
        }
        SubspacePresentation::from_spanning(self.ambient.clone(), &inter)
    }

    /// Coordinates of v in the echelon basis, if v lies in the subspace.
    pub fn coordinates(&self, v: &[F]) -> Result<Option<Vec<F>>, LinalgError> {
        if v.len() != self.ambient.dim {
            return Err(LinalgError::DimensionMismatch(format!(
                "ambient dim {} but vector has {} entries",
                self.ambient.dim,
                v.len()
            )));
        }
        let mut v = v.to_vec();
        let mut coords = Vec::with_capacity(self.basis.nrows());
        for row in &self.basis.rows {
            let lead = row.iter().position(|x| !x.is_zero()).unwrap();
            let factor = v[lead].clone();
            coords.push(factor.clone());
            if !factor.is_zero() {
                for c in 0..v.len() {
                    let delta = factor.mul(&row[c]);
                    v[c] = v[c].sub(&delta);
                }
            }
        }
        if v.iter().all(|x| x.is_zero()) {
            Ok(Some(coords))
        } else {
            Ok(None)
        }
    }
}

impl<F: Field> fmt::Debug for SubspacePresentation<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "subspace of {} (dim {}):", self.ambient.id, self.dim())?;
        write!(f, "{:?}", self.basis)
    }
}
