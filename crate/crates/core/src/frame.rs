//! Generalized fusion systems `{(V_i, Λ_i, v_i)}` on `ℂⁿ`.
//!
//! A system is a finite ordered list of components, each made of a subspace
//! `V_i ⊂ ℂⁿ`, an operator `Λ_i : ℂⁿ → ℂ^{d_i}` and a positive weight `v_i`.
//! Its frame operator is
//!
//! ```text
//! S = Σ v_i² P_{V_i} Λ_i* Λ_i P_{V_i}
//! ```
//!
//! and the system is a frame exactly when `S` is invertible. All sums run in
//! component order so results are reproducible bit for bit on one platform.

use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::{
    hermitian_eig, inner, ComplexMatrix, ComplexVector, HermitianEigen, Tolerance, ZERO,
};
use crate::subspace::ClosedSubspace;

/// Relative eigenvalue threshold separating frames from Bessel-only systems.
pub const DEFAULT_CLASS_TOL: f64 = 1e-8;

/// One triple `(V_i, Λ_i, v_i)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GFusionComponent {
    subspace: ClosedSubspace,
    operator: ComplexMatrix,
    weight: f64,
}

impl GFusionComponent {
    pub fn new(subspace: ClosedSubspace, operator: ComplexMatrix, weight: f64) -> Result<Self> {
        if operator.ncols() != subspace.ambient_dim() {
            return Err(Error::dims(format!(
                "operator has {} columns but the subspace lives in dimension {}",
                operator.ncols(),
                subspace.ambient_dim()
            )));
        }
        if operator.nrows() == 0 {
            return Err(Error::dims("operator must have at least one row"));
        }
        crate::linalg::ensure_finite(&operator, "operator")?;
        if !(weight.is_finite() && weight > 0.0) {
            return Err(Error::NonPositiveWeight { index: 0, weight });
        }
        Ok(Self {
            subspace,
            operator,
            weight,
        })
    }

    pub fn subspace(&self) -> &ClosedSubspace {
        &self.subspace
    }

    pub fn operator(&self) -> &ComplexMatrix {
        &self.operator
    }

    pub fn weight(&self) -> f64 {
        self.weight
    }

    /// Dimension `d_i` of the local space the operator maps into.
    pub fn local_dim(&self) -> usize {
        self.operator.nrows()
    }

    /// `v_i Λ_i P_{V_i}`, the building block of every operator on the system.
    pub fn weighted_analysis_matrix(&self) -> ComplexMatrix {
        (&self.operator * self.subspace.projection()) * crate::linalg::c(self.weight, 0.0)
    }
}

/// A finite g-fusion system on `ℂ^{ambient_dim}`.
#[derive(Debug, Clone, PartialEq)]
pub struct GFusionSystem {
    ambient_dim: usize,
    components: Vec<GFusionComponent>,
}

impl GFusionSystem {
    pub fn new(ambient_dim: usize, components: Vec<GFusionComponent>) -> Result<Self> {
        if ambient_dim == 0 {
            return Err(Error::dims("ambient dimension must be positive"));
        }
        if components.is_empty() {
            return Err(Error::BadParams(
                "a system needs at least one component".into(),
            ));
        }
        for (i, comp) in components.iter().enumerate() {
            if comp.subspace.ambient_dim() != ambient_dim {
                return Err(Error::dims(format!(
                    "component {i} lives in dimension {}, system in {ambient_dim}",
                    comp.subspace.ambient_dim()
                )));
            }
        }
        Ok(Self {
            ambient_dim,
            components,
        })
    }

    /// Build a system from raw `(subspace, operator, weight)` triples,
    /// reporting the offending index on failure.
    pub fn from_parts(
        ambient_dim: usize,
        parts: impl IntoIterator<Item = (ClosedSubspace, ComplexMatrix, f64)>,
    ) -> Result<Self> {
        let components = parts
            .into_iter()
            .enumerate()
            .map(|(i, (v, op, w))| {
                GFusionComponent::new(v, op, w).map_err(|e| match e {
                    Error::NonPositiveWeight { weight, .. } => {
                        Error::NonPositiveWeight { index: i, weight }
                    }
                    Error::DimensionMismatch(m) => {
                        Error::DimensionMismatch(format!("component {i}: {m}"))
                    }
                    other => other,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(ambient_dim, components)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn components(&self) -> &[GFusionComponent] {
        &self.components
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn local_dims(&self) -> Vec<usize> {
        self.components.iter().map(|c| c.local_dim()).collect()
    }

    /// A copy with one more component appended at the end.
    pub fn with_component(&self, comp: GFusionComponent) -> Result<Self> {
        let mut components = self.components.clone();
        components.push(comp);
        Self::new(self.ambient_dim, components)
    }

    fn check_vector(&self, f: &ComplexVector) -> Result<()> {
        if f.len() != self.ambient_dim {
            return Err(Error::dims(format!(
                "vector has length {}, system lives in dimension {}",
                f.len(),
                self.ambient_dim
            )));
        }
        Ok(())
    }

    /// Analysis operator: block `i` is `v_i Λ_i P_{V_i} f`.
    pub fn analysis(&self, f: &ComplexVector) -> Result<CoefficientFamily> {
        self.check_vector(f)?;
        let blocks = self
            .components
            .iter()
            .map(|comp| {
                let basis = comp.subspace.basis();
                let pf = basis * (basis.adjoint() * f);
                (&comp.operator * pf) * crate::linalg::c(comp.weight, 0.0)
            })
            .collect();
        Ok(CoefficientFamily { blocks })
    }

    /// Synthesis operator: `Σ v_i P_{V_i} Λ_i* c_i`.
    pub fn synthesis(&self, coeffs: &CoefficientFamily) -> Result<ComplexVector> {
        coeffs.check_conforms(self)?;
        let mut out = ComplexVector::zeros(self.ambient_dim);
        for (comp, block) in self.components.iter().zip(&coeffs.blocks) {
            let basis = comp.subspace.basis();
            let lifted = comp.operator.adjoint() * block;
            let projected = basis * (basis.adjoint() * lifted);
            out.axpy(
                crate::linalg::c(comp.weight, 0.0),
                &projected,
                crate::linalg::ONE,
            );
        }
        Ok(out)
    }

    /// Frame operator `S = Σ v_i² P_{V_i} Λ_i* Λ_i P_{V_i}`.
    pub fn frame_operator(&self) -> ComplexMatrix {
        let n = self.ambient_dim;
        let mut s = ComplexMatrix::zeros(n, n);
        for comp in &self.components {
            let m = comp.weighted_analysis_matrix();
            s += m.adjoint() * m;
        }
        s
    }

    /// Eigendecomposition of the frame operator.
    pub fn frame_spectrum(&self) -> HermitianEigen {
        hermitian_eig(&self.frame_operator(), Tolerance::default())
            .expect("frame operator is Hermitian by construction")
    }

    /// Tightest frame bounds: the extreme eigenvalues of `S`.
    pub fn optimal_bounds(&self, class_tol: f64) -> FrameBounds {
        let eig = self.frame_spectrum();
        FrameBounds::classify(eig.lambda_min(), eig.lambda_max(), class_tol)
    }

    /// `S⁻¹`, or `NotAFrame` when `λ_min ≤ class_tol · λ_max`.
    pub fn inverse_frame_operator(&self, class_tol: f64) -> Result<ComplexMatrix> {
        let eig = self.frame_spectrum();
        ensure_invertible(&eig, class_tol)?;
        Ok(eig.inverse())
    }

    /// Canonical dual `{(S⁻¹V_i, Λ_i P_{V_i} S⁻¹, v_i)}` with default tolerances.
    pub fn canonical_dual(&self) -> Result<Self> {
        self.canonical_dual_with(DEFAULT_CLASS_TOL, Tolerance::default())
    }

    pub fn canonical_dual_with(&self, class_tol: f64, tol: Tolerance) -> Result<Self> {
        let s_inv = self.inverse_frame_operator(class_tol)?;
        let components = self
            .components
            .iter()
            .map(|comp| {
                Ok(GFusionComponent {
                    subspace: comp.subspace.image_under(&s_inv, tol)?,
                    operator: &comp.operator * comp.subspace.projection() * &s_inv,
                    weight: comp.weight,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(self.ambient_dim, components)
    }

    /// Reconstruct `f` through `Σ v_i² P Λ*Λ P S⁻¹ f` and through the commuted
    /// order `Σ v_i² S⁻¹ P Λ*Λ P f`. Returns the first reconstruction and the
    /// larger of the two relative errors `‖f_rec − f‖ / max(‖f‖, 1)`.
    pub fn reconstruct(&self, f: &ComplexVector, class_tol: f64) -> Result<(ComplexVector, f64)> {
        self.check_vector(f)?;
        let s_inv = self.inverse_frame_operator(class_tol)?;
        let g = &s_inv * f;

        let n = self.ambient_dim;
        let mut rec = ComplexVector::zeros(n);
        let mut commuted = ComplexVector::zeros(n);
        for comp in &self.components {
            let m = comp.weighted_analysis_matrix();
            rec += m.adjoint() * (&m * &g);
            commuted += &s_inv * (m.adjoint() * (&m * f));
        }

        let scale = f.norm().max(1.0);
        let err = ((&rec - f).norm() / scale).max((&commuted - f).norm() / scale);
        Ok((rec, err))
    }

    /// `⟨S f, f⟩` evaluated as `Σ v_i² ‖Λ_i P_{V_i} f‖²`.
    pub fn energy(&self, f: &ComplexVector) -> Result<f64> {
        Ok(self.analysis(f)?.norm_squared())
    }
}

fn ensure_invertible(eig: &HermitianEigen, class_tol: f64) -> Result<()> {
    let (lo, hi) = (eig.lambda_min(), eig.lambda_max());
    if hi <= 0.0 || lo <= class_tol * hi {
        return Err(Error::NotAFrame {
            lambda_min: lo.max(0.0),
        });
    }
    Ok(())
}

/// Pair frame operator `Σ v_i v′_i P_{V_i} Λ_i* Λ′_i P_{V′_i}`.
///
/// Both systems must share the ambient dimension, the number of components
/// and every local dimension `d_i`.
pub fn pair_frame_operator(a: &GFusionSystem, b: &GFusionSystem) -> Result<ComplexMatrix> {
    if a.ambient_dim != b.ambient_dim {
        return Err(Error::dims(format!(
            "ambient dimensions differ ({} vs {})",
            a.ambient_dim, b.ambient_dim
        )));
    }
    if a.len() != b.len() {
        return Err(Error::dims(format!(
            "component counts differ ({} vs {})",
            a.len(),
            b.len()
        )));
    }
    for (index, (ca, cb)) in a.components.iter().zip(&b.components).enumerate() {
        if ca.local_dim() != cb.local_dim() {
            return Err(Error::LocalSpaceMismatch {
                index,
                left: ca.local_dim(),
                right: cb.local_dim(),
            });
        }
    }
    let n = a.ambient_dim;
    let mut s = ComplexMatrix::zeros(n, n);
    for (ca, cb) in a.components.iter().zip(&b.components) {
        s += ca.weighted_analysis_matrix().adjoint() * cb.weighted_analysis_matrix();
    }
    Ok(s)
}

/// Element of `⊕ ℂ^{d_i}`: one local vector per component.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientFamily {
    pub blocks: Vec<ComplexVector>,
}

impl CoefficientFamily {
    pub fn new(blocks: Vec<ComplexVector>) -> Self {
        Self { blocks }
    }

    pub fn zeros(sys: &GFusionSystem) -> Self {
        Self {
            blocks: sys
                .local_dims()
                .into_iter()
                .map(ComplexVector::zeros)
                .collect(),
        }
    }

    pub fn check_conforms(&self, sys: &GFusionSystem) -> Result<()> {
        if self.blocks.len() != sys.len() {
            return Err(Error::dims(format!(
                "{} coefficient blocks for {} components",
                self.blocks.len(),
                sys.len()
            )));
        }
        for (i, (block, comp)) in self.blocks.iter().zip(sys.components()).enumerate() {
            if block.len() != comp.local_dim() {
                return Err(Error::dims(format!(
                    "block {i} has length {}, component maps into dimension {}",
                    block.len(),
                    comp.local_dim()
                )));
            }
        }
        Ok(())
    }

    /// `Σ_i ⟨c_i, d_i⟩`.
    pub fn inner(&self, other: &Self) -> num_complex::Complex64 {
        self.blocks
            .iter()
            .zip(&other.blocks)
            .fold(ZERO, |acc, (x, y)| acc + inner(x, y))
    }

    pub fn norm_squared(&self) -> f64 {
        self.blocks.iter().map(|b| b.norm_squared()).sum()
    }

    /// Concatenate all blocks into one long vector.
    pub fn flatten(&self) -> ComplexVector {
        let total = self.blocks.iter().map(|b| b.len()).sum();
        ComplexVector::from_iterator(total, self.blocks.iter().flat_map(|b| b.iter().copied()))
    }
}

/// How a system behaves with respect to its optimal bounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FrameKind {
    Frame,
    Tight,
    Parseval,
    BesselOnly,
}

impl FrameKind {
    pub fn as_str(self) -> &'static str {
        match self {
            FrameKind::Frame => "frame",
            FrameKind::Tight => "tight",
            FrameKind::Parseval => "parseval",
            FrameKind::BesselOnly => "bessel_only",
        }
    }

    pub fn is_frame(self) -> bool {
        self != FrameKind::BesselOnly
    }
}

impl fmt::Display for FrameKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for FrameKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "frame" => Ok(FrameKind::Frame),
            "tight" => Ok(FrameKind::Tight),
            "parseval" => Ok(FrameKind::Parseval),
            "bessel_only" => Ok(FrameKind::BesselOnly),
            other => Err(Error::BadParams(format!("unknown frame kind {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameBounds {
    pub lower: f64,
    pub upper: f64,
    pub kind: FrameKind,
}

impl FrameBounds {
    /// Classify eigen-extremes. Thresholds are relative to `upper`, except
    /// the Parseval check which compares both bounds against 1 directly.
    pub fn classify(lambda_min: f64, lambda_max: f64, class_tol: f64) -> Self {
        let upper = lambda_max.max(0.0);
        let lower = lambda_min.clamp(0.0, upper);
        let kind = if upper <= 0.0 || lower <= class_tol * upper {
            FrameKind::BesselOnly
        } else if upper - lower <= class_tol * upper {
            if (upper - 1.0).abs() <= class_tol && (lower - 1.0).abs() <= class_tol {
                FrameKind::Parseval
            } else {
                FrameKind::Tight
            }
        } else {
            FrameKind::Frame
        };
        Self { lower, upper, kind }
    }
}
