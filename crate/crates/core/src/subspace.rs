//! Closed subspaces of `ℂⁿ`, their orthogonal projections and images.

use crate::error::{Error, Result};
use crate::linalg::{
    identity, max_abs_diff, operator_norm_2, orthonormalize, ComplexMatrix, Tolerance,
};

/// A subspace stored through an orthonormal basis (`ambient_dim × rank`).
///
/// The zero subspace is an ordinary value with a basis of zero columns.
#[derive(Debug, Clone, PartialEq)]
pub struct ClosedSubspace {
    basis: ComplexMatrix,
}

impl ClosedSubspace {
    /// Span of the columns of `spanning`, orthonormalized. Columns that deflate
    /// away are dropped; if all do, the result is the zero subspace.
    pub fn span(spanning: &ComplexMatrix, tol: Tolerance) -> Result<Self> {
        let ambient_dim = spanning.nrows();
        if ambient_dim == 0 {
            return Err(Error::dims("subspace ambient dimension must be positive"));
        }
        if spanning.ncols() == 0 {
            return Ok(Self::zero(ambient_dim));
        }
        match orthonormalize(spanning, tol) {
            Ok(basis) => Ok(Self { basis }),
            Err(Error::EmptySpan { .. }) => Ok(Self::zero(ambient_dim)),
            Err(e) => Err(e),
        }
    }

    /// Wrap a basis that is already orthonormal, checking `B*B = I` within `eq_tol`.
    pub fn from_orthonormal(basis: ComplexMatrix, tol: Tolerance) -> Result<Self> {
        if basis.nrows() == 0 || basis.ncols() > basis.nrows() {
            return Err(Error::dims(format!(
                "basis of shape {}x{} cannot be orthonormal",
                basis.nrows(),
                basis.ncols()
            )));
        }
        let gram = basis.adjoint() * &basis;
        let dev = max_abs_diff(&gram, &identity(basis.ncols()));
        if dev > tol.eq_tol {
            return Err(Error::BadParams(format!(
                "basis columns are not orthonormal (max |B*B - I| = {dev:e})"
            )));
        }
        Ok(Self { basis })
    }

    pub fn full(ambient_dim: usize) -> Self {
        Self {
            basis: identity(ambient_dim),
        }
    }

    pub fn zero(ambient_dim: usize) -> Self {
        Self {
            basis: ComplexMatrix::zeros(ambient_dim, 0),
        }
    }

    /// `span{e_k : k ∈ indices}`.
    pub fn coordinate(ambient_dim: usize, indices: &[usize]) -> Self {
        let mut basis = ComplexMatrix::zeros(ambient_dim, indices.len());
        for (col, &k) in indices.iter().enumerate() {
            basis[(k, col)] = crate::linalg::ONE;
        }
        Self { basis }
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.nrows()
    }

    pub fn rank(&self) -> usize {
        self.basis.ncols()
    }

    pub fn is_zero(&self) -> bool {
        self.rank() == 0
    }

    pub fn basis(&self) -> &ComplexMatrix {
        &self.basis
    }

    /// Orthogonal projection `P = B·B*`.
    pub fn projection(&self) -> ComplexMatrix {
        &self.basis * self.basis.adjoint()
    }

    /// The subspace `T·V`, with `T` mapping this space into `ℂ^{rows(T)}`.
    pub fn image_under(&self, t: &ComplexMatrix, tol: Tolerance) -> Result<Self> {
        if t.ncols() != self.ambient_dim() {
            return Err(Error::dims(format!(
                "operator has {} columns, subspace lives in dimension {}",
                t.ncols(),
                self.ambient_dim()
            )));
        }
        Self::span(&(t * &self.basis), tol)
    }

    /// `‖P_self − P_other‖₂`; subspaces are equal when this is small.
    pub fn distance(&self, other: &Self) -> f64 {
        assert_eq!(self.ambient_dim(), other.ambient_dim());
        operator_norm_2(&(self.projection() - other.projection()))
    }

    /// The subspace `V ⊗ W`, with basis `kron(B_V, B_W)`.
    pub fn tensor(&self, other: &Self) -> Self {
        Self {
            basis: crate::linalg::kron(&self.basis, &other.basis),
        }
    }
}

pub fn projection(v: &ClosedSubspace) -> ComplexMatrix {
    v.projection()
}

pub fn image_under(
    t: &ComplexMatrix,
    v: &ClosedSubspace,
    tol: Tolerance,
) -> Result<ClosedSubspace> {
    v.image_under(t, tol)
}

/// Residuals of the two projection swap identities for `T` and `V`:
///
/// * `‖P_V T* − P_V T* P_{TV}‖₂`, which vanishes for every `T`;
/// * `‖P_{TV} T − T P_V‖₂`, which vanishes for unitary `T` and is only
///   reported when `‖T*T − I‖_max ≤ eq_tol`.
pub fn projection_swap_residual(
    t: &ComplexMatrix,
    v: &ClosedSubspace,
    tol: Tolerance,
) -> Result<(f64, Option<f64>)> {
    let n = v.ambient_dim();
    if t.nrows() != n || t.ncols() != n {
        return Err(Error::dims(format!(
            "operator is {}x{}, expected {n}x{n}",
            t.nrows(),
            t.ncols()
        )));
    }
    let pv = v.projection();
    let ptv = v.image_under(t, tol)?.projection();
    let t_adj = t.adjoint();

    let lhs = &pv * &t_adj;
    let general = operator_norm_2(&(&lhs - &lhs * &ptv));

    let unitary = max_abs_diff(&(&t_adj * t), &identity(n)) <= tol.eq_tol;
    let swapped = unitary.then(|| operator_norm_2(&(&ptv * t - t * &pv)));
    Ok((general, swapped))
}
