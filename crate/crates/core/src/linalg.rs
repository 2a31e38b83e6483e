//! Dense complex matrices and the handful of operations the witnesses need.
//!
//! Bipartite layout: the composite basis index of `|a b>` is `dim_b * a + b`,
//! so subsystem A is the slow index. For two qutrits `|01>` is index 1 and
//! `|10>` is index 3.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use nalgebra::DMatrix;

use crate::error::{Error, Result};

pub use nalgebra::Complex;

/// Double-precision complex scalar.
pub type C64 = Complex<f64>;

/// Slack on structural invariants (Hermiticity, unit trace).
pub const STRUCTURAL_TOL: f64 = 1e-10;
/// Slack on eigenvalue positivity.
pub const PSD_TOL: f64 = 1e-9;
/// Largest Hermiticity deviation accepted by the Hermitian eigensolver.
pub const HERMITIAN_GATE: f64 = 1e-8;

/// Local dimension of a qutrit.
pub const QUTRIT: usize = 3;
/// Dimension of the two-qutrit space.
pub const TWO_QUTRIT: usize = QUTRIT * QUTRIT;

const EIGEN_MAX_ITER: usize = 10_000;

/// Dense complex matrix stored row-major.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    /// Builds a matrix from row-major entries, rejecting a wrong entry count,
    /// empty dimensions and non-finite values.
    pub fn new(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if rows == 0 || cols == 0 || data.len() != rows * cols {
            return Err(Error::EntryCount {
                rows,
                cols,
                len: data.len(),
            });
        }
        if let Some(k) = data.iter().position(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::NonFinite {
                row: k / cols,
                col: k % cols,
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![C64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Real matrix from row-major entries.
    pub fn from_real(rows: usize, cols: usize, entries: &[f64]) -> Result<Self> {
        Self::new(rows, cols, entries.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    pub fn diagonal(entries: &[C64]) -> Self {
        let n = entries.len();
        Self::from_fn(n, n, |i, j| if i == j { entries[i] } else { C64::new(0.0, 0.0) })
    }

    /// Column vector with a single unit entry.
    pub fn basis_column(dim: usize, index: usize) -> Self {
        Self::from_fn(dim, 1, |i, _| C64::new(if i == index { 1.0 } else { 0.0 }, 0.0))
    }

    /// Projector `|v><v|` onto a (not necessarily normalized) vector.
    pub fn outer(v: &[C64]) -> Self {
        let n = v.len();
        Self::from_fn(n, n, |i, j| v[i] * v[j].conj())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Row-major entries.
    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<C64> {
        self.data
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| z * s).collect(),
        }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(C64::new(s, 0.0))
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    /// Largest entrywise modulus of `self - other`. Panics on a shape mismatch.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest entrywise modulus of `self - self^dagger`.
    pub fn hermiticity_deviation(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let mut worst: f64 = 0.0;
        for i in 0..self.rows {
            for j in i..self.cols {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// `self * m * self^dagger`, the shape of every Kraus term.
    pub fn sandwich(&self, m: &Self) -> Self {
        &(self * m) * &self.adjoint()
    }

    pub(crate) fn to_nalgebra(&self) -> DMatrix<C64> {
        DMatrix::from_row_slice(self.rows, self.cols, &self.data)
    }

    fn require_square(&self, expected: &'static str) -> Result<()> {
        if self.is_square() {
            Ok(())
        } else {
            Err(Error::Shape {
                expected,
                rows: self.rows,
                cols: self.cols,
            })
        }
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, " ")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(f, " {:+.6}{:+.6}i", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;

    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of bounds");
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of bounds");
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.cols, rhs.rows, "inner dimensions differ");
        let mut out = ComplexMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                let row = &rhs.data[k * rhs.cols..(k + 1) * rhs.cols];
                let dst = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
                for (d, b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        out
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch");
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch");
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

/// Kronecker product `a ⊗ b`: entry `(b.rows*i + k, b.cols*j + l)` is
/// `a[i,j] * b[k,l]`.
pub fn tensor(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    ComplexMatrix::from_fn(a.rows * b.rows, a.cols * b.cols, |row, col| {
        a[(row / b.rows, col / b.cols)] * b[(row % b.rows, col % b.cols)]
    })
}

/// Which factor of a bipartite system an operation acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Subsystem {
    A,
    B,
}

/// Validated density matrix on a `dim_a * dim_b` space.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    mat: ComplexMatrix,
    dim_a: usize,
    dim_b: usize,
}

impl DensityMatrix {
    /// Checks Hermiticity, unit trace and positivity before accepting `mat`.
    pub fn new(mat: ComplexMatrix, dim_a: usize, dim_b: usize) -> Result<Self> {
        if !mat.is_square() || mat.rows() != dim_a * dim_b || !matches!(mat.rows(), 3 | 9) {
            return Err(Error::Shape {
                expected: "square 3x3 or 9x9 with rows == dim_a * dim_b",
                rows: mat.rows(),
                cols: mat.cols(),
            });
        }
        let deviation = mat.hermiticity_deviation();
        if deviation > STRUCTURAL_TOL {
            return Err(Error::NotHermitian { deviation });
        }
        let tr = mat.trace();
        if (tr.re - 1.0).abs() > STRUCTURAL_TOL || tr.im.abs() > STRUCTURAL_TOL {
            return Err(Error::NotUnitTrace { re: tr.re, im: tr.im });
        }
        let min_eigenvalue = hermitian_eigenvalues(&mat)?[0];
        if min_eigenvalue < -PSD_TOL {
            return Err(Error::NotPositive { min_eigenvalue });
        }
        Ok(Self { mat, dim_a, dim_b })
    }

    /// Two-qutrit density matrix.
    pub fn bipartite(mat: ComplexMatrix) -> Result<Self> {
        Self::new(mat, QUTRIT, QUTRIT)
    }

    /// Single-qutrit density matrix.
    pub fn qutrit(mat: ComplexMatrix) -> Result<Self> {
        Self::new(mat, QUTRIT, 1)
    }

    /// `rho_a ⊗ rho_b` for two single-qutrit states.
    pub fn product(rho_a: &DensityMatrix, rho_b: &DensityMatrix) -> Result<Self> {
        Self::new(tensor(&rho_a.mat, &rho_b.mat), rho_a.dim(), rho_b.dim())
    }

    /// `I / 9` on two qutrits.
    pub fn maximally_mixed() -> Self {
        Self {
            mat: ComplexMatrix::identity(TWO_QUTRIT).scale_real(1.0 / TWO_QUTRIT as f64),
            dim_a: QUTRIT,
            dim_b: QUTRIT,
        }
    }

    /// Pure state from a ket, normalizing it first.
    pub fn pure(ket: &[C64], dim_a: usize, dim_b: usize) -> Result<Self> {
        let norm = ket.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::Config("zero vector has no pure state".into()));
        }
        let v: Vec<C64> = ket.iter().map(|z| z / norm).collect();
        Self::new(ComplexMatrix::outer(&v), dim_a, dim_b)
    }

    /// Mixture `weight * self + (1 - weight) * other`.
    pub fn mix(&self, other: &DensityMatrix, weight: f64) -> Result<Self> {
        let mat = &self.mat.scale_real(weight) + &other.mat.scale_real(1.0 - weight);
        Self::new(mat, self.dim_a, self.dim_b)
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.mat
    }

    pub fn dim(&self) -> usize {
        self.mat.rows()
    }

    pub fn dim_a(&self) -> usize {
        self.dim_a
    }

    pub fn dim_b(&self) -> usize {
        self.dim_b
    }

    pub fn is_bipartite(&self) -> bool {
        self.dim_a == QUTRIT && self.dim_b == QUTRIT
    }

    fn require_bipartite(&self) -> Result<()> {
        if self.is_bipartite() {
            Ok(())
        } else {
            Err(Error::Shape {
                expected: "two-qutrit 9x9 density matrix",
                rows: self.dim_a,
                cols: self.dim_b,
            })
        }
    }
}

fn require_two_qutrit(m: &ComplexMatrix) -> Result<()> {
    if m.rows() == TWO_QUTRIT && m.cols() == TWO_QUTRIT {
        Ok(())
    } else {
        Err(Error::Shape {
            expected: "9x9",
            rows: m.rows(),
            cols: m.cols(),
        })
    }
}

/// Partial transpose of a 9x9 two-qutrit operator.
///
/// For subsystem B: `out[3i+l, 3j+k] = m[3i+k, 3j+l]`.
pub fn partial_transpose_matrix(m: &ComplexMatrix, subsystem: Subsystem) -> Result<ComplexMatrix> {
    require_two_qutrit(m)?;
    let d = QUTRIT;
    Ok(ComplexMatrix::from_fn(TWO_QUTRIT, TWO_QUTRIT, |row, col| {
        let (i, l) = (row / d, row % d);
        let (j, k) = (col / d, col % d);
        match subsystem {
            Subsystem::B => m[(d * i + k, d * j + l)],
            Subsystem::A => m[(d * j + l, d * i + k)],
        }
    }))
}

pub fn partial_transpose(rho: &DensityMatrix, subsystem: Subsystem) -> Result<ComplexMatrix> {
    rho.require_bipartite()?;
    partial_transpose_matrix(rho.matrix(), subsystem)
}

/// Realignment (reshuffling) of a 9x9 two-qutrit operator:
/// `out[3i+j, 3k+l] = m[3i+k, 3j+l]`.
pub fn realign_matrix(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    require_two_qutrit(m)?;
    let d = QUTRIT;
    Ok(ComplexMatrix::from_fn(TWO_QUTRIT, TWO_QUTRIT, |row, col| {
        let (i, j) = (row / d, row % d);
        let (k, l) = (col / d, col % d);
        m[(d * i + k, d * j + l)]
    }))
}

pub fn realign(rho: &DensityMatrix) -> Result<ComplexMatrix> {
    rho.require_bipartite()?;
    realign_matrix(rho.matrix())
}

/// Singular values in descending order.
pub fn singular_values(m: &ComplexMatrix) -> Vec<f64> {
    let mut sv: Vec<f64> = m.to_nalgebra().singular_values().iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

/// Trace norm as the sum of singular values. Valid for non-normal input,
/// which the realigned matrix generally is.
pub fn trace_norm(m: &ComplexMatrix) -> Result<f64> {
    m.require_square("square matrix")?;
    Ok(singular_values(m).iter().sum())
}

/// Ascending eigenvalues of a Hermitian matrix.
///
/// The input is symmetrized as `(m + m^dagger) / 2` before solving; a
/// deviation above [`HERMITIAN_GATE`] is reported as an error instead.
pub fn hermitian_eigenvalues(m: &ComplexMatrix) -> Result<Vec<f64>> {
    m.require_square("square Hermitian matrix")?;
    let deviation = m.hermiticity_deviation();
    if deviation > HERMITIAN_GATE {
        return Err(Error::NotHermitian { deviation });
    }
    let sym = (&m.to_nalgebra() + m.to_nalgebra().adjoint()) * C64::new(0.5, 0.0);
    let eig = sym
        .try_symmetric_eigen(f64::EPSILON, EIGEN_MAX_ITER)
        .ok_or(Error::NoConvergence)?;
    let mut values: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    values.sort_by(f64::total_cmp);
    Ok(values)
}
