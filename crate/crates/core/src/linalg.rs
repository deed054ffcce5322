//! Dense complex linear algebra kernel.
//!
//! Matrices are [`nalgebra::DMatrix`] over [`Complex64`]; vectors are
//! [`nalgebra::DVector`]. Hermitian eigendecompositions and singular values
//! are delegated to nalgebra, while the pieces whose exact behaviour matters
//! for reproducibility (orthonormalization order, Kronecker block layout) are
//! implemented here.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type ComplexMatrix = DMatrix<Complex64>;
pub type ComplexVector = DVector<Complex64>;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Numerical tolerances used for rank decisions and identity checks.
///
/// `rank_tol` is relative: a column is dropped during orthonormalization when
/// its remaining norm is at most `rank_tol` times the largest input column
/// norm. `eq_tol` is an absolute residual cutoff.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub rank_tol: f64,
    pub eq_tol: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            rank_tol: 1e-10,
            eq_tol: 1e-9,
        }
    }
}

impl Tolerance {
    pub fn new(rank_tol: f64, eq_tol: f64) -> Result<Self> {
        let ok = |x: f64| x.is_finite() && x > 0.0;
        if !ok(rank_tol) || !ok(eq_tol) {
            return Err(Error::BadParams(format!(
                "tolerances must be finite and strictly positive (rank_tol={rank_tol}, eq_tol={eq_tol})"
            )));
        }
        Ok(Self { rank_tol, eq_tol })
    }
}

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Build a matrix from row-major real entries.
pub fn real_matrix(rows: usize, cols: usize, entries: &[f64]) -> ComplexMatrix {
    assert_eq!(
        entries.len(),
        rows * cols,
        "entry count does not match shape"
    );
    ComplexMatrix::from_row_iterator(rows, cols, entries.iter().map(|&x| c(x, 0.0)))
}

pub fn real_vector(entries: &[f64]) -> ComplexVector {
    ComplexVector::from_iterator(entries.len(), entries.iter().map(|&x| c(x, 0.0)))
}

pub fn diag(values: &[f64]) -> ComplexMatrix {
    let n = values.len();
    let mut m = ComplexMatrix::zeros(n, n);
    for (i, &v) in values.iter().enumerate() {
        m[(i, i)] = c(v, 0.0);
    }
    m
}

pub fn identity(n: usize) -> ComplexMatrix {
    ComplexMatrix::identity(n, n)
}

pub fn is_finite(a: &ComplexMatrix) -> bool {
    a.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

pub(crate) fn ensure_finite(a: &ComplexMatrix, what: &str) -> Result<()> {
    if is_finite(a) {
        Ok(())
    } else {
        Err(Error::NonFinite(what.to_owned()))
    }
}

/// Largest absolute entry, `‖A‖_max`.
pub fn max_abs(a: &ComplexMatrix) -> f64 {
    a.iter().fold(0.0, |m, z| m.max(z.norm()))
}

/// Largest absolute entry of `A - B`.
pub fn max_abs_diff(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape());
    a.iter()
        .zip(b.iter())
        .fold(0.0, |m, (x, y)| m.max((x - y).norm()))
}

/// Inner product linear in the first argument: `⟨f, g⟩ = Σ f_k conj(g_k)`.
pub fn inner(f: &ComplexVector, g: &ComplexVector) -> Complex64 {
    g.dotc(f)
}

/// Orthonormal basis of the column space of `spanning`.
///
/// Modified Gram-Schmidt, columns processed left to right, each column
/// orthogonalized twice against the accepted basis. A column whose remaining
/// norm is at most `rank_tol · max_column_norm` is dropped.
pub fn orthonormalize(spanning: &ComplexMatrix, tol: Tolerance) -> Result<ComplexMatrix> {
    let (rows, cols) = spanning.shape();
    if rows == 0 {
        return Err(Error::dims("spanning set has no rows"));
    }
    ensure_finite(spanning, "spanning set")?;

    let max_norm = spanning
        .column_iter()
        .map(|col| col.norm())
        .fold(0.0_f64, f64::max);
    let cutoff = tol.rank_tol * max_norm;

    let mut basis: Vec<ComplexVector> = Vec::with_capacity(cols.min(rows));
    for col in spanning.column_iter() {
        if basis.len() == rows {
            break;
        }
        let mut v: ComplexVector = col.into_owned();
        for _pass in 0..2 {
            for q in &basis {
                let proj = q.dotc(&v);
                v.axpy(-proj, q, ONE);
            }
        }
        let norm = v.norm();
        if norm > cutoff && norm > 0.0 {
            v.unscale_mut(norm);
            basis.push(v);
        }
    }

    if basis.is_empty() {
        return Err(Error::EmptySpan { columns: cols });
    }
    Ok(ComplexMatrix::from_columns(&basis))
}

/// Eigendecomposition of a Hermitian matrix with eigenvalues sorted ascending.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    /// Unitary matrix whose `k`-th column is the eigenvector for `values[k]`.
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    pub fn lambda_min(&self) -> f64 {
        self.values[0]
    }

    pub fn lambda_max(&self) -> f64 {
        *self.values.last().expect("nonempty spectrum")
    }

    /// `U f(Λ) U*` for a real spectral function `f`.
    pub fn map_spectrum(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let mut scaled = self.vectors.clone();
        for (k, mut col) in scaled.column_iter_mut().enumerate() {
            col.scale_mut(f(self.values[k]));
        }
        let mut out = &scaled * self.vectors.adjoint();
        symmetrize_in_place(&mut out);
        out
    }

    pub fn inverse(&self) -> ComplexMatrix {
        self.map_spectrum(|x| 1.0 / x)
    }
}

fn symmetrize_in_place(a: &mut ComplexMatrix) {
    let n = a.nrows();
    for i in 0..n {
        a[(i, i)].im = 0.0;
        for j in (i + 1)..n {
            let avg = (a[(i, j)] + a[(j, i)].conj()) * 0.5;
            a[(i, j)] = avg;
            a[(j, i)] = avg.conj();
        }
    }
}

/// Full eigendecomposition of `(A + A*)/2`, after checking `‖A − A*‖_max ≤ eq_tol`.
pub fn hermitian_eig(a: &ComplexMatrix, tol: Tolerance) -> Result<HermitianEigen> {
    if !a.is_square() || a.nrows() == 0 {
        return Err(Error::dims(format!(
            "expected a nonempty square matrix, got {}x{}",
            a.nrows(),
            a.ncols()
        )));
    }
    ensure_finite(a, "matrix")?;
    let deviation = max_abs_diff(a, &a.adjoint());
    if deviation > tol.eq_tol {
        return Err(Error::NotHermitian {
            deviation,
            tol: tol.eq_tol,
        });
    }
    let mut sym = a.clone();
    symmetrize_in_place(&mut sym);

    let eig = sym.symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let columns: Vec<ComplexVector> = order
        .iter()
        .map(|&k| eig.eigenvectors.column(k).into_owned())
        .collect();
    Ok(HermitianEigen {
        values,
        vectors: ComplexMatrix::from_columns(&columns),
    })
}

/// Smallest and largest eigenvalue of a Hermitian matrix.
pub fn hermitian_eig_extremes(a: &ComplexMatrix, tol: Tolerance) -> Result<(f64, f64)> {
    let eig = hermitian_eig(a, tol)?;
    Ok((eig.lambda_min(), eig.lambda_max()))
}

/// Kronecker product; block `(i, j)` of the result is `A[i, j] · B`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (ra, ca) = a.shape();
    let (rb, cb) = b.shape();
    let mut out = ComplexMatrix::zeros(ra * rb, ca * cb);
    for j in 0..ca {
        for i in 0..ra {
            let aij = a[(i, j)];
            for q in 0..cb {
                for p in 0..rb {
                    out[(i * rb + p, j * cb + q)] = aij * b[(p, q)];
                }
            }
        }
    }
    out
}

/// Kronecker product of column vectors.
pub fn kron_vec(f: &ComplexVector, g: &ComplexVector) -> ComplexVector {
    let mut out = ComplexVector::zeros(f.len() * g.len());
    for (i, fi) in f.iter().enumerate() {
        for (j, gj) in g.iter().enumerate() {
            out[i * g.len() + j] = fi * gj;
        }
    }
    out
}

/// Spectral norm: the largest singular value.
pub fn operator_norm_2(a: &ComplexMatrix) -> f64 {
    if a.is_empty() {
        return 0.0;
    }
    a.singular_values().iter().copied().fold(0.0_f64, f64::max)
}
