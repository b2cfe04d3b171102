//! Dense complex matrices and composite Hilbert-space utilities.
//!
//! Conventions used throughout the crate:
//!
//! - qubit basis: `|g⟩` is index 0, `|e⟩` is index 1;
//! - composite order is qubit0 ⊗ qubit1 ⊗ boson, with the last factor varying
//!   fastest;
//! - `σ⁺ = |e⟩⟨g|` and `σ⁻ = |g⟩⟨e|` are matrix units, so `σ⁺σ⁻ = |e⟩⟨e|`;
//! - vectorization is column stacking: `vec(ρ)[i + j·n] = ρ[i, j]`.

use alloc::{format, vec, vec::Vec};
use core::ops::{Add, Index, IndexMut, Mul, Sub};

use faer::{c64, Mat, MatRef, Side};
// shadowed by inherent f64 methods whenever std is linked
#[allow(unused_imports)]
use num_traits::Float;

use crate::{Error, Result};

/// Hermiticity / trace tolerance accepted for density matrices.
pub const STATE_TOLERANCE: f64 = 1e-10;
/// Most negative eigenvalue tolerated in a density matrix.
pub const POSITIVITY_TOLERANCE: f64 = 1e-9;

const ZERO: c64 = c64 { re: 0.0, im: 0.0 };
const ONE: c64 = c64 { re: 1.0, im: 0.0 };

/// Dense complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    inner: Mat<c64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            inner: Mat::zeros(rows, cols),
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { ONE } else { ZERO })
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl FnMut(usize, usize) -> c64) -> Self {
        Self {
            inner: Mat::from_fn(rows, cols, f),
        }
    }

    /// Builds a matrix from row-major entries.
    pub fn from_row_major(rows: usize, cols: usize, entries: &[c64]) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                context: "row-major entries",
                expected: rows * cols,
                found: entries.len(),
            });
        }
        Ok(Self::from_fn(rows, cols, |i, j| entries[i * cols + j]))
    }

    /// Real diagonal matrix.
    pub fn diagonal(values: &[f64]) -> Self {
        let n = values.len();
        Self::from_fn(n, n, |i, j| {
            if i == j {
                c64::new(values[i], 0.0)
            } else {
                ZERO
            }
        })
    }

    /// Rank-one projector `|ψ⟩⟨ψ|` (no normalization applied).
    pub fn outer(ket: &[c64]) -> Self {
        let n = ket.len();
        Self::from_fn(n, n, |i, j| ket[i] * ket[j].conj())
    }

    pub fn from_faer(inner: Mat<c64>) -> Self {
        Self { inner }
    }

    pub fn as_faer(&self) -> MatRef<'_, c64> {
        self.inner.as_ref()
    }

    pub fn rows(&self) -> usize {
        self.inner.nrows()
    }

    pub fn cols(&self) -> usize {
        self.inner.ncols()
    }

    pub fn is_square(&self) -> bool {
        self.rows() == self.cols()
    }

    pub(crate) fn require_square(&self) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows())
        } else {
            Err(Error::NotSquare {
                rows: self.rows(),
                cols: self.cols(),
            })
        }
    }

    /// Entries in row-major order.
    pub fn to_row_major(&self) -> Vec<c64> {
        let mut out = Vec::with_capacity(self.rows() * self.cols());
        for i in 0..self.rows() {
            for j in 0..self.cols() {
                out.push(self[(i, j)]);
            }
        }
        out
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols(), self.rows(), |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols(), self.rows(), |i, j| self[(j, i)])
    }

    pub fn conj(&self) -> Self {
        Self::from_fn(self.rows(), self.cols(), |i, j| self[(i, j)].conj())
    }

    pub fn scale(&self, factor: c64) -> Self {
        Self::from_fn(self.rows(), self.cols(), |i, j| self[(i, j)] * factor)
    }

    pub fn scale_real(&self, factor: f64) -> Self {
        self.scale(c64::new(factor, 0.0))
    }

    pub fn trace(&self) -> c64 {
        let n = self.rows().min(self.cols());
        (0..n).fold(ZERO, |acc, i| acc + self[(i, i)])
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        let mut best = 0.0f64;
        for j in 0..self.cols() {
            for i in 0..self.rows() {
                best = best.max(self[(i, j)].norm());
            }
        }
        best
    }

    /// `max |m − m†|` entrywise; infinite for non-square matrices.
    pub fn hermitian_deviation(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let n = self.rows();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_deviation() <= tol
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        if !self.is_square() {
            return false;
        }
        let product = &self.adjoint() * self;
        (&product - &Self::identity(self.rows())).max_abs() <= tol
    }

    /// `max |a − b|` entrywise; infinite on shape mismatch.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        if self.rows() != other.rows() || self.cols() != other.cols() {
            return f64::INFINITY;
        }
        (self - other).max_abs()
    }

    pub fn commutator(&self, other: &Self) -> Self {
        &(self * other) - &(other * self)
    }

    pub fn anticommutator(&self, other: &Self) -> Self {
        &(self * other) + &(other * self)
    }

    /// Column-stacked vectorization.
    pub fn vectorize(&self) -> Vec<c64> {
        let mut out = Vec::with_capacity(self.rows() * self.cols());
        for j in 0..self.cols() {
            for i in 0..self.rows() {
                out.push(self[(i, j)]);
            }
        }
        out
    }

    /// Inverse of [`ComplexMatrix::vectorize`] for an `n × n` matrix.
    pub fn from_column_stacked(n: usize, data: &[c64]) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::DimensionMismatch {
                context: "column-stacked vector",
                expected: n * n,
                found: data.len(),
            });
        }
        Ok(Self::from_fn(n, n, |i, j| data[i + j * n]))
    }

    /// `y = m · x` for a dense vector.
    pub fn apply(&self, x: &[c64]) -> Result<Vec<c64>> {
        if x.len() != self.cols() {
            return Err(Error::DimensionMismatch {
                context: "matrix-vector product",
                expected: self.cols(),
                found: x.len(),
            });
        }
        let mut y = vec![ZERO; self.rows()];
        for (j, &xj) in x.iter().enumerate() {
            if xj == ZERO {
                continue;
            }
            let col = self.inner.col(j);
            for (i, yi) in y.iter_mut().enumerate() {
                *yi += col[i] * xj;
            }
        }
        Ok(y)
    }

    /// `out = m · x` without allocating; shapes are the caller's contract.
    pub(crate) fn apply_into(&self, x: &[c64], out: &mut [c64]) {
        debug_assert_eq!(x.len(), self.cols());
        debug_assert_eq!(out.len(), self.rows());
        out.iter_mut().for_each(|v| *v = ZERO);
        for (j, &xj) in x.iter().enumerate() {
            if xj == ZERO {
                continue;
            }
            let col = self.inner.col(j);
            for (i, yi) in out.iter_mut().enumerate() {
                *yi += col[i] * xj;
            }
        }
    }

    /// Eigenvalues (ascending) and orthonormal eigenvectors of the Hermitian
    /// part of the matrix.
    pub fn hermitian_eigen(&self) -> Result<(Vec<f64>, ComplexMatrix)> {
        let h = hermitize(self)?;
        let evd = h
            .inner
            .self_adjoint_eigen(Side::Lower)
            .map_err(|_| Error::EigenFailure)?;
        let values = evd.S().column_vector().iter().map(|z| z.re).collect();
        Ok((values, Self::from_faer(evd.U().to_owned())))
    }

    /// Eigenvalues (ascending) of the Hermitian part of the matrix.
    pub fn hermitian_eigenvalues(&self) -> Result<Vec<f64>> {
        let h = hermitize(self)?;
        let values = h
            .inner
            .self_adjoint_eigenvalues(Side::Lower)
            .map_err(|_| Error::EigenFailure)?;
        Ok(values)
    }

    /// Singular values, descending.
    pub fn singular_values(&self) -> Result<Vec<f64>> {
        let mut values = self.inner.singular_values().map_err(|_| Error::EigenFailure)?;
        values.sort_by(|a, b| b.total_cmp(a));
        Ok(values)
    }

    /// Eigenvalues of a general (non-Hermitian) square matrix.
    pub fn eigenvalues(&self) -> Result<Vec<c64>> {
        self.require_square()?;
        self.inner.eigenvalues().map_err(|_| Error::EigenFailure)
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = c64;

    fn index(&self, (i, j): (usize, usize)) -> &c64 {
        &self.inner[(i, j)]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut c64 {
        &mut self.inner[(i, j)]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.cols(), rhs.rows(), "matrix product shape mismatch");
        ComplexMatrix {
            inner: &self.inner * &rhs.inner,
        }
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows(), self.cols()), (rhs.rows(), rhs.cols()));
        ComplexMatrix::from_fn(self.rows(), self.cols(), |i, j| self[(i, j)] + rhs[(i, j)])
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows(), self.cols()), (rhs.rows(), rhs.cols()));
        ComplexMatrix::from_fn(self.rows(), self.cols(), |i, j| self[(i, j)] - rhs[(i, j)])
    }
}

/// Kronecker product `a ⊗ b`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (br, bc) = (b.rows(), b.cols());
    ComplexMatrix::from_fn(a.rows() * br, a.cols() * bc, |i, j| {
        a[(i / br, j / bc)] * b[(i % br, j % bc)]
    })
}

/// `(m + m†) / 2`.
pub fn hermitize(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = m.require_square()?;
    Ok(ComplexMatrix::from_fn(n, n, |i, j| {
        (m[(i, j)] + m[(j, i)].conj()) * 0.5
    }))
}

/// Qubit lowering operator `|g⟩⟨e|`.
pub fn sigma_minus() -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(2, 2);
    m[(0, 1)] = ONE;
    m
}

/// Qubit raising operator `|e⟩⟨g|`.
pub fn sigma_plus() -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(2, 2);
    m[(1, 0)] = ONE;
    m
}

/// `|e⟩⟨e| − |g⟩⟨g|`.
pub fn sigma_z() -> ComplexMatrix {
    ComplexMatrix::diagonal(&[-1.0, 1.0])
}

pub fn sigma_x() -> ComplexMatrix {
    &sigma_plus() + &sigma_minus()
}

/// Pauli Y in the `{|g⟩, |e⟩}` basis. Only its square and its conjugation
/// action enter the concurrence, so the overall sign convention is immaterial.
pub fn sigma_y() -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(2, 2);
    m[(0, 1)] = c64::new(0.0, -1.0);
    m[(1, 0)] = c64::new(0.0, 1.0);
    m
}

/// Truncated boson annihilation operator on `n_max + 1` Fock levels.
pub fn boson_destroy(n_max: usize) -> Result<ComplexMatrix> {
    if n_max == 0 {
        return Err(Error::param("n_max", "boson truncation must be at least 1"));
    }
    let d = n_max + 1;
    let mut m = ComplexMatrix::zeros(d, d);
    for n in 1..d {
        m[(n - 1, n)] = c64::new((n as f64).sqrt(), 0.0);
    }
    Ok(m)
}

/// Ordered list of subsystem dimensions of a composite Hilbert space.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SpaceLayout {
    dims: Vec<usize>,
    total: usize,
}

impl SpaceLayout {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::InvalidLayout("no subsystems".into()));
        }
        if let Some(pos) = dims.iter().position(|&d| d == 0) {
            return Err(Error::InvalidLayout(format!("subsystem {pos} has dimension 0")));
        }
        let total = dims.iter().product();
        Ok(Self { dims, total })
    }

    /// `[2, 2]`: the bare qubit pair.
    pub fn qubit_pair() -> Self {
        Self {
            dims: vec![2, 2],
            total: 4,
        }
    }

    /// `[2, 2, n_max + 1]`: qubit pair plus truncated boson.
    pub fn qubits_and_boson(n_max: usize) -> Result<Self> {
        if n_max == 0 {
            return Err(Error::InvalidLayout("boson dimension must be at least 2".into()));
        }
        Self::new(vec![2, 2, n_max + 1])
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn total_dim(&self) -> usize {
        self.total
    }

    pub fn subsystem_count(&self) -> usize {
        self.dims.len()
    }

    fn check_site(&self, site: usize) -> Result<usize> {
        self.dims.get(site).copied().ok_or(Error::InvalidSubsystem {
            index: site,
            count: self.dims.len(),
        })
    }

    /// Mixed-radix digits of a composite basis index.
    fn digits(&self, mut index: usize, out: &mut [usize]) {
        for (slot, &d) in out.iter_mut().zip(&self.dims).rev() {
            *slot = index % d;
            index /= d;
        }
    }
}

/// Lifts a single-subsystem operator to the full space: identities on every
/// other factor, subsystem order preserved.
pub fn embed(op: &ComplexMatrix, site: usize, layout: &SpaceLayout) -> Result<ComplexMatrix> {
    let d = layout.check_site(site)?;
    if op.rows() != d || op.cols() != d {
        return Err(Error::DimensionMismatch {
            context: "embedded operator",
            expected: d,
            found: if op.rows() != d { op.rows() } else { op.cols() },
        });
    }
    let left: usize = layout.dims[..site].iter().product();
    let right: usize = layout.dims[site + 1..].iter().product();
    Ok(kron(
        &kron(&ComplexMatrix::identity(left), op),
        &ComplexMatrix::identity(right),
    ))
}

/// Trace-one, Hermitian, positive operator on a composite space.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    layout: SpaceLayout,
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    /// Validates and wraps `matrix`.
    pub fn new(layout: SpaceLayout, matrix: ComplexMatrix) -> Result<Self> {
        let state = Self::unchecked(layout, matrix)?;
        state.validate(STATE_TOLERANCE, POSITIVITY_TOLERANCE)?;
        Ok(state)
    }

    /// Hermitizes and trace-normalizes `matrix` before validating it.
    pub fn normalized(layout: SpaceLayout, matrix: ComplexMatrix) -> Result<Self> {
        let h = hermitize(&matrix)?;
        let tr = h.trace().re;
        if !(tr.abs() > f64::MIN_POSITIVE) || !tr.is_finite() {
            return Err(Error::TraceNotOne { trace: tr });
        }
        Self::new(layout, h.scale_real(1.0 / tr))
    }

    /// Dimension checks only; used for intermediate propagation states.
    pub(crate) fn unchecked(layout: SpaceLayout, matrix: ComplexMatrix) -> Result<Self> {
        let n = matrix.require_square()?;
        if n != layout.total_dim() {
            return Err(Error::DimensionMismatch {
                context: "density matrix",
                expected: layout.total_dim(),
                found: n,
            });
        }
        Ok(Self { layout, matrix })
    }

    /// Checks trace, Hermiticity and positivity against explicit tolerances.
    pub fn validate(&self, tol: f64, positivity_tol: f64) -> Result<()> {
        let deviation = self.matrix.hermitian_deviation();
        if deviation > tol {
            return Err(Error::NotHermitian { deviation });
        }
        let tr = self.matrix.trace();
        if (tr.re - 1.0).abs() > tol || tr.im.abs() > tol {
            return Err(Error::TraceNotOne { trace: tr.re });
        }
        let min = self.min_eigenvalue()?;
        if min < -positivity_tol {
            return Err(Error::NotPositive {
                min_eigenvalue: min,
            });
        }
        Ok(())
    }

    /// Pure state `|ψ⟩⟨ψ|` with `ψ` normalized here.
    pub fn pure(layout: SpaceLayout, ket: &[c64]) -> Result<Self> {
        if ket.len() != layout.total_dim() {
            return Err(Error::DimensionMismatch {
                context: "state vector",
                expected: layout.total_dim(),
                found: ket.len(),
            });
        }
        let norm = ket.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::param("ket", "zero vector"));
        }
        let scaled: Vec<c64> = ket.iter().map(|z| z / norm).collect();
        Self::new(layout, ComplexMatrix::outer(&scaled))
    }

    /// Computational basis projector `|index⟩⟨index|`.
    pub fn basis(layout: SpaceLayout, index: usize) -> Result<Self> {
        let n = layout.total_dim();
        if index >= n {
            return Err(Error::InvalidSubsystem { index, count: n });
        }
        let mut m = ComplexMatrix::zeros(n, n);
        m[(index, index)] = ONE;
        Ok(Self { layout, matrix: m })
    }

    /// `I / d`.
    pub fn maximally_mixed(layout: SpaceLayout) -> Self {
        let n = layout.total_dim();
        let matrix = ComplexMatrix::identity(n).scale_real(1.0 / n as f64);
        Self { layout, matrix }
    }

    /// `ρ_A ⊗ ρ_B` on the concatenated layout.
    pub fn product(a: &Self, b: &Self) -> Self {
        let mut dims = a.layout.dims.clone();
        dims.extend_from_slice(&b.layout.dims);
        let total = a.layout.total * b.layout.total;
        Self {
            layout: SpaceLayout { dims, total },
            matrix: kron(&a.matrix, &b.matrix),
        }
    }

    pub fn layout(&self) -> &SpaceLayout {
        &self.layout
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn dim(&self) -> usize {
        self.layout.total
    }

    pub fn trace(&self) -> c64 {
        self.matrix.trace()
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        let values = self.matrix.hermitian_eigenvalues()?;
        Ok(values.first().copied().unwrap_or(0.0))
    }

    /// `Tr[op · ρ]`.
    pub fn expectation(&self, op: &ComplexMatrix) -> Result<c64> {
        if op.rows() != self.dim() || op.cols() != self.dim() {
            return Err(Error::DimensionMismatch {
                context: "observable",
                expected: self.dim(),
                found: op.rows(),
            });
        }
        let n = self.dim();
        let mut acc = ZERO;
        for i in 0..n {
            for k in 0..n {
                acc += op[(i, k)] * self.matrix[(k, i)];
            }
        }
        Ok(acc)
    }

    /// `½ Σ |eig(ρ − σ)|`.
    pub fn trace_distance(&self, other: &Self) -> Result<f64> {
        if self.layout != other.layout {
            return Err(Error::DimensionMismatch {
                context: "trace distance",
                expected: self.dim(),
                found: other.dim(),
            });
        }
        let diff = &self.matrix - &other.matrix;
        let values = diff.hermitian_eigenvalues()?;
        Ok(0.5 * values.iter().map(|v| v.abs()).sum::<f64>())
    }

    /// Reduced state on the subsystems listed in `keep` (kept in layout
    /// order, duplicates ignored).
    pub fn partial_trace(&self, keep: &[usize]) -> Result<Self> {
        let count = self.layout.subsystem_count();
        if keep.is_empty() {
            return Err(Error::InvalidLayout("partial trace must keep at least one subsystem".into()));
        }
        let mut kept = vec![false; count];
        for &k in keep {
            if k >= count {
                return Err(Error::InvalidSubsystem { index: k, count });
            }
            kept[k] = true;
        }
        let kept_dims: Vec<usize> = (0..count)
            .filter(|&s| kept[s])
            .map(|s| self.layout.dims[s])
            .collect();
        let kept_total: usize = kept_dims.iter().product();
        let traced_total = self.layout.total / kept_total;

        // full index for every (kept, traced) pair
        let mut table = vec![0usize; kept_total * traced_total];
        let mut digits = vec![0usize; count];
        for full in 0..self.layout.total {
            self.layout.digits(full, &mut digits);
            let (mut k_idx, mut t_idx) = (0usize, 0usize);
            for (s, &digit) in digits.iter().enumerate() {
                let d = self.layout.dims[s];
                if kept[s] {
                    k_idx = k_idx * d + digit;
                } else {
                    t_idx = t_idx * d + digit;
                }
            }
            table[k_idx * traced_total + t_idx] = full;
        }

        let reduced = ComplexMatrix::from_fn(kept_total, kept_total, |a, b| {
            (0..traced_total).fold(ZERO, |acc, t| {
                acc + self.matrix[(table[a * traced_total + t], table[b * traced_total + t])]
            })
        });
        Ok(Self {
            layout: SpaceLayout::new(kept_dims)?,
            matrix: reduced,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> c64 {
        c64::new(re, im)
    }

    #[test]
    fn kron_of_identities_is_identity() {
        let i4 = kron(&ComplexMatrix::identity(2), &ComplexMatrix::identity(2));
        assert_eq!(i4, ComplexMatrix::identity(4));
    }

    #[test]
    fn lowering_first_qubit_maps_eg_to_gg() {
        let op = kron(&sigma_minus(), &ComplexMatrix::identity(2));
        // |e⟩⊗|g⟩ = index 2
        let eg = [ZERO, ZERO, ONE, ZERO];
        let out = op.apply(&eg).unwrap();
        assert_eq!(out, [ONE, ZERO, ZERO, ZERO]);
    }

    #[test]
    fn embed_dimensions_and_identity() {
        let layout = SpaceLayout::new(vec![2, 2, 3]).unwrap();
        let e = embed(&sigma_minus(), 0, &layout).unwrap();
        assert_eq!((e.rows(), e.cols()), (12, 12));
        for site in 0..3 {
            let d = layout.dims()[site];
            let id = embed(&ComplexMatrix::identity(d), site, &layout).unwrap();
            assert_eq!(id, ComplexMatrix::identity(12));
        }
    }

    #[test]
    fn embed_rejects_wrong_dimension_and_site() {
        let layout = SpaceLayout::new(vec![2, 2, 3]).unwrap();
        assert!(matches!(
            embed(&sigma_minus(), 2, &layout),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(
            embed(&sigma_minus(), 3, &layout),
            Err(Error::InvalidSubsystem { .. })
        ));
    }

    #[test]
    fn boson_destroy_matches_fock_matrix_elements() {
        assert_eq!(
            boson_destroy(1).unwrap(),
            ComplexMatrix::from_row_major(2, 2, &[ZERO, ONE, ZERO, ZERO]).unwrap()
        );
        let a = boson_destroy(4).unwrap();
        let number = &a.adjoint() * &a;
        for n in 0..5 {
            assert!((number[(n, n)] - c(n as f64, 0.0)).norm() < 1e-14);
        }
        assert!(matches!(boson_destroy(0), Err(Error::InvalidParameter { .. })));
    }

    #[test]
    fn truncated_commutator_identity() {
        for n_max in 1..6 {
            let a = boson_destroy(n_max).unwrap();
            let comm = a.commutator(&a.adjoint());
            let d = n_max + 1;
            let mut expected = ComplexMatrix::identity(d);
            expected[(n_max, n_max)] = c(1.0 - d as f64, 0.0);
            assert!(comm.max_abs_diff(&expected) < 1e-12, "n_max = {n_max}");
        }
    }

    #[test]
    fn ladder_product_is_excited_projector() {
        let n = &sigma_plus() * &sigma_minus();
        assert_eq!(n, ComplexMatrix::diagonal(&[0.0, 1.0]));
    }

    #[test]
    fn hermitize_cases() {
        let h = ComplexMatrix::from_row_major(2, 2, &[c(1.0, 0.0), c(0.5, 0.2), c(0.5, -0.2), c(-2.0, 0.0)])
            .unwrap();
        assert_eq!(hermitize(&h).unwrap(), h);
        let anti = h.scale(c(0.0, 1.0));
        assert!(hermitize(&anti).unwrap().max_abs() < 1e-15);
        assert!(matches!(
            hermitize(&ComplexMatrix::zeros(2, 3)),
            Err(Error::NotSquare { .. })
        ));
    }

    #[test]
    fn partial_trace_of_symmetric_bell_state_is_maximally_mixed() {
        // (|eg⟩ + |ge⟩)/√2 in the [2, 2] layout: indices 2 and 1
        let s = core::f64::consts::FRAC_1_SQRT_2;
        let psi = [ZERO, c(s, 0.0), c(s, 0.0), ZERO];
        let rho = DensityMatrix::pure(SpaceLayout::qubit_pair(), &psi).unwrap();
        let reduced = rho.partial_trace(&[0]).unwrap();
        let half = ComplexMatrix::identity(2).scale_real(0.5);
        assert!(reduced.matrix().max_abs_diff(&half) < 1e-15);
    }

    #[test]
    fn partial_trace_rejects_bad_indices() {
        let rho = DensityMatrix::maximally_mixed(SpaceLayout::qubit_pair());
        assert!(matches!(rho.partial_trace(&[]), Err(Error::InvalidLayout(_))));
        assert!(matches!(
            rho.partial_trace(&[2]),
            Err(Error::InvalidSubsystem { index: 2, count: 2 })
        ));
    }

    #[test]
    fn density_matrix_validation() {
        let layout = SpaceLayout::qubit_pair();
        let bad_trace = ComplexMatrix::identity(4);
        assert!(matches!(
            DensityMatrix::new(layout.clone(), bad_trace),
            Err(Error::TraceNotOne { .. })
        ));
        let negative = ComplexMatrix::diagonal(&[1.5, -0.5, 0.0, 0.0]);
        assert!(matches!(
            DensityMatrix::new(layout.clone(), negative),
            Err(Error::NotPositive { .. })
        ));
        let mut skew = ComplexMatrix::diagonal(&[0.5, 0.5, 0.0, 0.0]);
        skew[(0, 1)] = c(0.1, 0.0);
        assert!(matches!(
            DensityMatrix::new(layout, skew),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn vectorization_round_trip() {
        let m = ComplexMatrix::from_fn(3, 3, |i, j| c(i as f64, j as f64));
        let v = m.vectorize();
        assert_eq!(v[1], m[(1, 0)]);
        assert_eq!(v[3], m[(0, 1)]);
        assert_eq!(ComplexMatrix::from_column_stacked(3, &v).unwrap(), m);
    }

    #[test]
    fn layout_rules() {
        assert!(SpaceLayout::new(vec![]).is_err());
        assert!(SpaceLayout::new(vec![2, 0]).is_err());
        assert!(SpaceLayout::qubits_and_boson(0).is_err());
        assert_eq!(SpaceLayout::qubits_and_boson(2).unwrap().total_dim(), 12);
    }
}
