//! Reproducible random systems.
//!
//! The generator is [`ChaCha8Rng`] seeded through `seed_from_u64`, consumed
//! as a single stream in a fixed order. For each component, in order:
//!
//! 1. the subspace rank `r`, uniform in `1..=n`;
//! 2. an `n × r` spanning matrix, entries drawn column by column;
//! 3. the `d_i × n` operator, entries drawn row by row;
//! 4. the weight, uniform in `[lo, hi]`.
//!
//! Every complex entry is a standard complex Gaussian: real part first, then
//! imaginary part, each `N(0, 1/2)`. The spanning matrix is orthonormalized
//! with the default tolerances. ChaCha and the ziggurat normal sampler are
//! platform independent, so a seed names the same system everywhere.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::frame::GFusionSystem;
use crate::linalg::{c, ComplexMatrix, ComplexVector, Tolerance};
use crate::subspace::ClosedSubspace;

pub use rand::SeedableRng;

pub type Rng64 = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> Rng64 {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Debug, Clone, PartialEq)]
pub struct RandomSystemParams {
    pub ambient_dim: usize,
    pub n_components: usize,
    /// One entry per component, or a single entry shared by all.
    pub local_dims: Vec<usize>,
    pub weight_range: (f64, f64),
}

impl RandomSystemParams {
    pub fn new(ambient_dim: usize, n_components: usize, local_dims: Vec<usize>) -> Self {
        Self {
            ambient_dim,
            n_components,
            local_dims,
            weight_range: (0.5, 2.0),
        }
    }

    pub fn weights(mut self, lo: f64, hi: f64) -> Self {
        self.weight_range = (lo, hi);
        self
    }

    fn validate(&self) -> Result<Vec<usize>> {
        if self.ambient_dim == 0 {
            return Err(Error::BadParams(
                "ambient dimension must be at least 1".into(),
            ));
        }
        if self.n_components == 0 {
            return Err(Error::BadParams("need at least one component".into()));
        }
        let dims = match self.local_dims.len() {
            1 => vec![self.local_dims[0]; self.n_components],
            k if k == self.n_components => self.local_dims.clone(),
            k => {
                return Err(Error::BadParams(format!(
                    "{k} local dimensions given for {} components",
                    self.n_components
                )))
            }
        };
        if dims.contains(&0) {
            return Err(Error::BadParams(
                "local dimensions must be at least 1".into(),
            ));
        }
        let (lo, hi) = self.weight_range;
        if !(lo.is_finite() && hi.is_finite() && lo > 0.0 && lo <= hi) {
            return Err(Error::BadParams(format!(
                "weight range must satisfy 0 < lo <= hi, got [{lo}, {hi}]"
            )));
        }
        Ok(dims)
    }
}

/// Standard complex Gaussian scalar.
fn gaussian(rng: &mut impl Rng) -> num_complex::Complex64 {
    let normal = Normal::new(0.0, std::f64::consts::FRAC_1_SQRT_2).expect("valid sigma");
    let re = normal.sample(rng);
    let im = normal.sample(rng);
    c(re, im)
}

/// `rows × cols` Gaussian matrix, entries drawn in column-major order.
pub fn gaussian_matrix(rng: &mut impl Rng, rows: usize, cols: usize) -> ComplexMatrix {
    let entries: Vec<_> = (0..rows * cols).map(|_| gaussian(rng)).collect();
    ComplexMatrix::from_vec(rows, cols, entries)
}

/// `rows × cols` Gaussian matrix, entries drawn in row-major order.
fn gaussian_matrix_rows(rng: &mut impl Rng, rows: usize, cols: usize) -> ComplexMatrix {
    let entries: Vec<_> = (0..rows * cols).map(|_| gaussian(rng)).collect();
    ComplexMatrix::from_row_slice(rows, cols, &entries)
}

pub fn gaussian_vector(rng: &mut impl Rng, n: usize) -> ComplexVector {
    ComplexVector::from_iterator(n, (0..n).map(|_| gaussian(rng)))
}

pub fn unit_vector(rng: &mut impl Rng, n: usize) -> ComplexVector {
    loop {
        let v = gaussian_vector(rng, n);
        let norm = v.norm();
        if norm > 1e-12 {
            return v.unscale(norm);
        }
    }
}

/// Haar-ish unitary from the QR factor of a Gaussian matrix.
pub fn random_unitary(rng: &mut impl Rng, n: usize) -> ComplexMatrix {
    gaussian_matrix(rng, n, n).qr().q()
}

/// Subspace of the given rank spanned by Gaussian vectors.
pub fn random_subspace(rng: &mut impl Rng, n: usize, rank: usize) -> ClosedSubspace {
    ClosedSubspace::span(&gaussian_matrix(rng, n, rank), Tolerance::default())
        .expect("Gaussian spanning set has a valid shape")
}

/// Draw a system from an existing stream.
pub fn random_system_from(
    rng: &mut impl Rng,
    params: &RandomSystemParams,
) -> Result<GFusionSystem> {
    let dims = params.validate()?;
    let n = params.ambient_dim;
    let (lo, hi) = params.weight_range;
    let parts: Vec<_> = dims
        .into_iter()
        .map(|d| {
            let rank = rng.random_range(1..=n);
            let subspace = random_subspace(rng, n, rank);
            let operator = gaussian_matrix_rows(rng, d, n);
            let weight = rng.random_range(lo..=hi);
            (subspace, operator, weight)
        })
        .collect();
    GFusionSystem::from_parts(n, parts)
}

/// Deterministic random system for a seed.
pub fn random_system(seed: u64, params: &RandomSystemParams) -> Result<GFusionSystem> {
    random_system_from(&mut rng_from_seed(seed), params)
}
