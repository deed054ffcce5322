//! Verification reports for single systems and tensor products.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::frame::{pair_frame_operator, FrameBounds, GFusionSystem, DEFAULT_CLASS_TOL};
use crate::linalg::{identity, inner, operator_norm_2, ComplexMatrix, Tolerance};
use crate::random::{gaussian_vector, rng_from_seed, unit_vector};

pub const TOOL_VERSION: &str = concat!("gff ", env!("CARGO_PKG_VERSION"));

/// A named residual and the threshold it must not exceed.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub residual: f64,
    pub threshold: f64,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.residual <= self.threshold
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub bounds: FrameBounds,
    pub checks: Vec<Check>,
    /// Quantities reported for context but not gated on.
    pub info: BTreeMap<&'static str, f64>,
}

impl Report {
    pub fn new(bounds: FrameBounds) -> Self {
        Self {
            bounds,
            checks: Vec::new(),
            info: BTreeMap::new(),
        }
    }

    pub fn check(&mut self, name: &'static str, residual: f64, threshold: f64) {
        self.checks.push(Check {
            name,
            residual,
            threshold,
        });
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn residual(&self, name: &str) -> Option<f64> {
        self.get(name).map(|c| c.residual)
    }

    /// True when every residual is within its threshold. NaN residuals fail.
    pub fn pass(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed())
    }

    pub fn to_file(&self, seed: Option<u64>) -> VerifyReportFile {
        VerifyReportFile {
            bounds: BoundsRecord {
                lower: self.bounds.lower,
                upper: self.bounds.upper,
                kind: self.bounds.kind.as_str().to_owned(),
            },
            residuals: self
                .checks
                .iter()
                .map(|c| (c.name.to_owned(), c.residual))
                .collect(),
            thresholds: self
                .checks
                .iter()
                .map(|c| (c.name.to_owned(), c.threshold))
                .collect(),
            info: self
                .info
                .iter()
                .map(|(k, v)| ((*k).to_owned(), *v))
                .collect(),
            pass: self.pass(),
            seed,
            tool_version: TOOL_VERSION.to_owned(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundsRecord {
    pub lower: f64,
    pub upper: f64,
    pub kind: String,
}

/// On-disk form of a [`Report`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReportFile {
    pub bounds: BoundsRecord,
    pub residuals: BTreeMap<String, f64>,
    pub thresholds: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub info: BTreeMap<String, f64>,
    pub pass: bool,
    pub seed: Option<u64>,
    pub tool_version: String,
}

impl VerifyReportFile {
    /// Re-derive `pass` from the residual and threshold maps.
    pub fn consistent(&self) -> bool {
        let derived = self.residuals.len() == self.thresholds.len()
            && self
                .residuals
                .iter()
                .all(|(k, r)| self.thresholds.get(k).is_some_and(|t| r <= t));
        derived == self.pass
    }
}

/// Single-system checks over `trials` random vectors.
///
/// Always checked: energy identity, `S = T T*`, the Loewner sandwich at the
/// optimal bounds and its attainment. For frames additionally the
/// reconstruction formula in both orders and the dual identities.
pub fn verify_system(
    sys: &GFusionSystem,
    trials: usize,
    tol: Tolerance,
    seed: u64,
) -> Result<Report> {
    let eq = tol.eq_tol;
    let mut rng = rng_from_seed(seed);
    let n = sys.ambient_dim();
    let s = sys.frame_operator();
    let eig = sys.frame_spectrum();
    let bounds = FrameBounds::classify(eig.lambda_min(), eig.lambda_max(), DEFAULT_CLASS_TOL);
    let mut report = Report::new(bounds);

    let mut energy = 0.0_f64;
    let mut factor = 0.0_f64;
    let mut sandwich = 0.0_f64;
    for _ in 0..trials {
        let f = gaussian_vector(&mut rng, n);
        let coeffs = sys.analysis(&f)?;
        let sff = inner(&(&s * &f), &f).re;
        energy = energy.max((sff - coeffs.norm_squared()).abs() / (1.0 + f.norm_squared()));
        let tt = sys.synthesis(&coeffs)?;
        factor = factor.max((tt - &s * &f).norm() / (1.0 + f.norm()));

        let u = unit_vector(&mut rng, n);
        let q = sys.energy(&u)?;
        sandwich = sandwich.max(eig.lambda_min() - q).max(q - eig.lambda_max());
    }
    report.check("energy_identity", energy, eq);
    report.check("synthesis_analysis_factorization", factor, eq);
    report.check("loewner_sandwich_margin", sandwich.max(0.0), eq);

    let lo_vec = eig.vectors.column(0).into_owned();
    let hi_vec = eig.vectors.column(n - 1).into_owned();
    let attain = (sys.energy(&lo_vec)? - eig.lambda_min())
        .abs()
        .max((sys.energy(&hi_vec)? - eig.lambda_max()).abs());
    report.check("bounds_attained", attain, eq * eig.lambda_max().max(1.0));

    if bounds.kind.is_frame() {
        let mut recon = 0.0_f64;
        for _ in 0..trials {
            let f = gaussian_vector(&mut rng, n);
            recon = recon.max(sys.reconstruct(&f, DEFAULT_CLASS_TOL)?.1);
        }
        report.check("reconstruction", recon, eq);

        let dual = sys.canonical_dual_with(DEFAULT_CLASS_TOL, Tolerance::default())?;
        let id = identity(n);
        report.check(
            "dual_pair_identity",
            operator_norm_2(&(pair_frame_operator(sys, &dual)? - &id)),
            eq,
        );
        report.check(
            "dual_pair_identity_reversed",
            operator_norm_2(&(pair_frame_operator(&dual, sys)? - &id)),
            eq,
        );
        let s_dual: ComplexMatrix = dual.frame_operator();
        report.check(
            "dual_frame_op_is_inverse",
            operator_norm_2(&(&s_dual * &s - &id)),
            eq,
        );
    }
    Ok(report)
}
