//! Tensor products of vectors, operators and g-fusion systems, and the
//! numerical checks of the factorization identities they satisfy.
//!
//! `H ⊗ K` is realized as `ℂ^{n·m}` with Kronecker products. The product of
//! systems `Λ` (over `ℂⁿ`) and `Γ` (over `ℂᵐ`) has one component per pair
//! `(i, j)`, stored at position `i·|Γ| + j`:
//!
//! ```text
//! (V_i ⊗ W_j,  Λ_i ⊗ Γ_j,  v_i·w_j)
//! ```
//!
//! With this row-major ordering every factorization below is an entrywise
//! Kronecker identity, not merely one up to a permutation.

use crate::error::{Error, Result};
use crate::frame::{
    pair_frame_operator, CoefficientFamily, FrameBounds, GFusionComponent, GFusionSystem,
    DEFAULT_CLASS_TOL,
};
use crate::linalg::{
    identity, kron, kron_vec, max_abs_diff, operator_norm_2, ComplexMatrix, ComplexVector,
    Tolerance,
};
use crate::random::{gaussian_vector, rng_from_seed, unit_vector};
use crate::report::Report;

pub type TensorVerificationReport = Report;

/// Largest number of entries any single assembled product matrix may hold.
pub const DEFAULT_MAX_ELEMENTS: usize = 1 << 20;

/// Environment variable overriding [`DEFAULT_MAX_ELEMENTS`].
pub const MAX_ELEMENTS_ENV: &str = "GFF_MAX_ELEMENTS";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ElementBudget(pub usize);

impl Default for ElementBudget {
    fn default() -> Self {
        Self(DEFAULT_MAX_ELEMENTS)
    }
}

impl ElementBudget {
    /// Budget from `GFF_MAX_ELEMENTS`, falling back to the default when unset.
    pub fn from_env() -> Result<Self> {
        match std::env::var(MAX_ELEMENTS_ENV) {
            Ok(raw) => raw.trim().parse::<usize>().map(Self).map_err(|_| {
                Error::BadParams(format!("{MAX_ELEMENTS_ENV}={raw:?} is not a count"))
            }),
            Err(_) => Ok(Self::default()),
        }
    }

    fn admit(self, elements: usize) -> Result<()> {
        if elements > self.0 {
            Err(Error::SizeLimit {
                elements,
                budget: self.0,
            })
        } else {
            Ok(())
        }
    }
}

pub fn tensor_vector(f: &ComplexVector, g: &ComplexVector) -> ComplexVector {
    kron_vec(f, g)
}

pub fn tensor_operator(q: &ComplexMatrix, t: &ComplexMatrix) -> ComplexMatrix {
    kron(q, t)
}

/// Two factor systems and their product.
#[derive(Debug, Clone, PartialEq)]
pub struct TensorSystem {
    left: GFusionSystem,
    right: GFusionSystem,
    product: GFusionSystem,
}

impl TensorSystem {
    pub fn left(&self) -> &GFusionSystem {
        &self.left
    }

    pub fn right(&self) -> &GFusionSystem {
        &self.right
    }

    pub fn product(&self) -> &GFusionSystem {
        &self.product
    }

    pub fn into_product(self) -> GFusionSystem {
        self.product
    }

    /// Index of the product component built from `(i, j)`.
    pub fn pair_index(&self, i: usize, j: usize) -> usize {
        i * self.right.len() + j
    }
}

/// Product system `{(V_i ⊗ W_j, Λ_i ⊗ Γ_j, v_i w_j)}` in row-major pair order.
pub fn tensor_system(
    left: &GFusionSystem,
    right: &GFusionSystem,
    budget: ElementBudget,
) -> Result<TensorSystem> {
    let dim = left.ambient_dim() * right.ambient_dim();
    let local_total: usize =
        left.local_dims().iter().sum::<usize>() * right.local_dims().iter().sum::<usize>();
    budget.admit(dim.saturating_mul(local_total))?;
    budget.admit(dim.saturating_mul(dim))?;

    let mut components = Vec::with_capacity(left.len() * right.len());
    for a in left.components() {
        for b in right.components() {
            components.push(GFusionComponent::new(
                a.subspace().tensor(b.subspace()),
                kron(a.operator(), b.operator()),
                a.weight() * b.weight(),
            )?);
        }
    }
    Ok(TensorSystem {
        left: left.clone(),
        right: right.clone(),
        product: GFusionSystem::new(dim, components)?,
    })
}

/// Simple coefficient family `{f_i ⊗ g_j}` over the product system.
pub fn simple_family(
    ts: &TensorSystem,
    left: &CoefficientFamily,
    right: &CoefficientFamily,
) -> Result<CoefficientFamily> {
    left.check_conforms(&ts.left)?;
    right.check_conforms(&ts.right)?;
    let mut blocks = Vec::with_capacity(ts.product.len());
    for f in &left.blocks {
        for g in &right.blocks {
            blocks.push(kron_vec(f, g));
        }
    }
    Ok(CoefficientFamily::new(blocks))
}

fn random_family(rng: &mut crate::random::Rng64, sys: &GFusionSystem) -> CoefficientFamily {
    let fam = CoefficientFamily::new(
        sys.local_dims()
            .into_iter()
            .map(|d| gaussian_vector(rng, d))
            .collect(),
    );
    let norm = fam.norm_squared().sqrt().max(f64::MIN_POSITIVE);
    CoefficientFamily::new(fam.blocks.into_iter().map(|b| b.unscale(norm)).collect())
}

/// Largest discrepancy between two systems compared component by component:
/// projector distance, operator entries and weights.
pub fn system_distance(a: &GFusionSystem, b: &GFusionSystem) -> Result<f64> {
    if a.ambient_dim() != b.ambient_dim() || a.len() != b.len() {
        return Err(Error::dims("systems have different shapes"));
    }
    let mut worst = 0.0_f64;
    for (ca, cb) in a.components().iter().zip(b.components()) {
        if ca.operator().shape() != cb.operator().shape() {
            return Err(Error::dims("component operators have different shapes"));
        }
        worst = worst
            .max(ca.subspace().distance(cb.subspace()))
            .max(max_abs_diff(ca.operator(), cb.operator()))
            .max((ca.weight() - cb.weight()).abs());
    }
    Ok(worst)
}

/// Check the tensor factorization identities on `ts`.
///
/// Residuals are relative where the underlying quantity scales with the
/// systems and absolute where it is already normalized; every threshold is
/// `tol.eq_tol`. Dual-related checks only appear when both factors are
/// frames. Passing `primed` (systems `Λ′`, `Γ′` with the same shapes) adds
/// the pair operator checks and, when `Λ′, Γ′` pair with `Λ, Γ` to the
/// identity, the lower bounds that this pairing forces on both products.
pub fn verify_tensor_identities(
    ts: &TensorSystem,
    primed: Option<&TensorSystem>,
    trials: usize,
    tol: Tolerance,
    seed: u64,
) -> Result<TensorVerificationReport> {
    let eq = tol.eq_tol;
    let mut rng = rng_from_seed(seed);

    let s_l = ts.left.frame_operator();
    let s_r = ts.right.frame_operator();
    let s_p = ts.product.frame_operator();
    let eig_l = ts.left.frame_spectrum();
    let eig_r = ts.right.frame_spectrum();
    let eig_p = ts.product.frame_spectrum();

    let bounds = FrameBounds::classify(eig_p.lambda_min(), eig_p.lambda_max(), DEFAULT_CLASS_TOL);
    let mut report = Report::new(bounds);
    let scale = eig_p.lambda_max().max(f64::MIN_POSITIVE);

    // (a) optimal bounds multiply
    report.check(
        "bound_factorization_lower",
        (eig_p.lambda_min() - eig_l.lambda_min() * eig_r.lambda_min()).abs() / scale,
        eq,
    );
    report.check(
        "bound_factorization_upper",
        (eig_p.lambda_max() - eig_l.lambda_max() * eig_r.lambda_max()).abs() / scale,
        eq,
    );

    // (b) frame operators multiply
    let norm_lr = (operator_norm_2(&s_l) * operator_norm_2(&s_r)).max(f64::MIN_POSITIVE);
    report.check(
        "frame_op_factorization",
        operator_norm_2(&(&s_p - kron(&s_l, &s_r))) / norm_lr,
        eq,
    );

    // (c) synthesis acts factor-wise on simple families; the simple-tensor
    // frame inequality is sampled alongside
    let mut synth = 0.0_f64;
    let mut sandwich = 0.0_f64;
    for _ in 0..trials {
        let fl = random_family(&mut rng, &ts.left);
        let fr = random_family(&mut rng, &ts.right);
        let joint = ts.product.synthesis(&simple_family(ts, &fl, &fr)?)?;
        let split = kron_vec(&ts.left.synthesis(&fl)?, &ts.right.synthesis(&fr)?);
        synth = synth.max((joint - split).norm());

        let f = unit_vector(&mut rng, ts.left.ambient_dim());
        let g = unit_vector(&mut rng, ts.right.ambient_dim());
        let q = ts.product.energy(&kron_vec(&f, &g))?;
        sandwich = sandwich
            .max(eig_p.lambda_min() - q)
            .max(q - eig_p.lambda_max());
    }
    report.check("synthesis_factorization", synth, eq);
    report.check(
        "simple_tensor_sandwich_margin",
        sandwich.max(0.0) / scale,
        eq,
    );

    // (d) canonical dual of the product
    let l_bounds = FrameBounds::classify(eig_l.lambda_min(), eig_l.lambda_max(), DEFAULT_CLASS_TOL);
    let r_bounds = FrameBounds::classify(eig_r.lambda_min(), eig_r.lambda_max(), DEFAULT_CLASS_TOL);
    if l_bounds.kind.is_frame() && r_bounds.kind.is_frame() && bounds.kind.is_frame() {
        let s_p_inv = eig_p.inverse();
        let s_l_inv = eig_l.inverse();
        let s_r_inv = eig_r.inverse();
        let inv_norms = operator_norm_2(&s_l_inv) * operator_norm_2(&s_r_inv);
        report.check(
            "inverse_factorization",
            operator_norm_2(&(&s_p_inv - kron(&s_l_inv, &s_r_inv))) / inv_norms,
            eq,
        );

        let theta = ts
            .product
            .canonical_dual_with(DEFAULT_CLASS_TOL, Tolerance::default())?;
        let s_theta = theta.frame_operator();
        report.check(
            "dual_frame_op_is_inverse",
            operator_norm_2(&(&s_theta - &s_p_inv)),
            eq,
        );

        let (a, b) = (eig_l.lambda_min(), eig_l.lambda_max());
        let (c, d) = (eig_r.lambda_min(), eig_r.lambda_max());
        let eig_theta = theta.frame_spectrum();
        let lower_bound = 1.0 / (b * d);
        let upper_bound = b * d / (a * a * c * c);
        report.info.insert("dual_lower", eig_theta.lambda_min());
        report.info.insert("dual_upper", eig_theta.lambda_max());
        report.info.insert("dual_lower_guaranteed", lower_bound);
        report.info.insert("dual_upper_guaranteed", upper_bound);
        report.check(
            "dual_bounds_margin",
            (lower_bound - eig_theta.lambda_min())
                .max(eig_theta.lambda_max() - upper_bound)
                .max(0.0),
            eq,
        );

        let dual_l = ts
            .left
            .canonical_dual_with(DEFAULT_CLASS_TOL, Tolerance::default())?;
        let dual_r = ts
            .right
            .canonical_dual_with(DEFAULT_CLASS_TOL, Tolerance::default())?;
        let dual_product = tensor_system(&dual_l, &dual_r, ElementBudget(usize::MAX))?;
        report.check(
            "dual_product_factorization",
            system_distance(&theta, &dual_product.product)?,
            eq,
        );
    }

    if let Some(primed) = primed {
        check_pairs(ts, primed, eq, &mut report)?;
    }
    Ok(report)
}

/// (e) pair operator checks and (f) the pairing premise with its lower bounds.
fn check_pairs(
    ts: &TensorSystem,
    primed: &TensorSystem,
    eq: f64,
    report: &mut Report,
) -> Result<()> {
    let s_pair = pair_frame_operator(&ts.product, &primed.product)?;
    let s_pair_l = pair_frame_operator(&ts.left, &primed.left)?;
    let s_pair_r = pair_frame_operator(&ts.right, &primed.right)?;
    let pair_norm = operator_norm_2(&s_pair);
    report.check(
        "pair_op_factorization",
        operator_norm_2(&(&s_pair - kron(&s_pair_l, &s_pair_r))) / (1.0 + pair_norm),
        eq,
    );

    let b1 = ts.product.frame_spectrum().lambda_max();
    let b2 = primed.product.frame_spectrum().lambda_max();
    report.info.insert("pair_norm", pair_norm);
    report.info.insert("pair_norm_bound", (b1 * b2).sqrt());
    report.check(
        "pair_norm_bound_margin",
        (pair_norm - (b1 * b2).sqrt()).max(0.0),
        eq,
    );

    // T_{Λ′} T_Λ* is the pair operator S_{Λ′Λ}
    let premise_l = operator_norm_2(
        &(pair_frame_operator(&primed.left, &ts.left)? - identity(ts.left.ambient_dim())),
    );
    let premise_r = operator_norm_2(
        &(pair_frame_operator(&primed.right, &ts.right)? - identity(ts.right.ambient_dim())),
    );
    if premise_l <= eq && premise_r <= eq {
        report.check("pairing_premise_left", premise_l, eq);
        report.check("pairing_premise_right", premise_r, eq);

        let (b, e) = (
            ts.left.frame_spectrum().lambda_max(),
            ts.right.frame_spectrum().lambda_max(),
        );
        let (d, f) = (
            primed.left.frame_spectrum().lambda_max(),
            primed.right.frame_spectrum().lambda_max(),
        );
        let lo = ts.product.frame_spectrum().lambda_min();
        let lo_primed = primed.product.frame_spectrum().lambda_min();
        report.check(
            "paired_lower_bound_margin",
            (1.0 / (d * f) - lo).max(0.0),
            eq,
        );
        report.check(
            "paired_lower_bound_margin_primed",
            (1.0 / (b * e) - lo_primed).max(0.0),
            eq,
        );
    } else {
        report.info.insert("pairing_premise_left", premise_l);
        report.info.insert("pairing_premise_right", premise_r);
    }
    Ok(())
}
