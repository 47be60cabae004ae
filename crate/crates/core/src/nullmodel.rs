//! No-cluster reference vectors: the UHD vector in closed form and the UED
//! vector by Monte-Carlo simulation.
//!
//! Under the no-cluster null every observation is equally likely to sit
//! anywhere in the sample space. For the categorical lattice the expected
//! HD vector has the closed form `(n / M) * U*`, where `U*_k` is the k-th
//! elementary symmetric polynomial of `(m_1 - 1, ..., m_p - 1)` and
//! `M = prod m_j`. No comparable closed form exists for Euclidean distances,
//! so the UED vector is estimated from a simulated null sample: by default
//! points drawn uniformly from the observed per-attribute bounding box, or
//! alternatively column permutations of the observed values.

use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::dataset::{MixedDataset, Schema};
use crate::distance::{euclidean_unchecked, Bins};
use crate::error::{Error, Result};
use crate::rng::seeded_rng;
use crate::scalar::Scalar;

/// Elementary symmetric polynomials `e_0..e_k` of `values`, by the one-pass
/// product recurrence over `(1 + v_j x)`.
pub fn elementary_symmetric<R: Scalar>(values: &[R]) -> Vec<R> {
    let mut coeffs = vec![R::zero(); values.len() + 1];
    coeffs[0] = R::one();
    for (j, &v) in values.iter().enumerate() {
        for k in (1..=j + 1).rev() {
            coeffs[k] = coeffs[k] + coeffs[k - 1] * v;
        }
    }
    coeffs
}

/// Exact integer variant of [`elementary_symmetric`]; `None` on overflow.
pub fn elementary_symmetric_exact(values: &[u64]) -> Option<Vec<u128>> {
    let mut coeffs = vec![0u128; values.len() + 1];
    coeffs[0] = 1;
    for (j, &v) in values.iter().enumerate() {
        for k in (1..=j + 1).rev() {
            coeffs[k] = coeffs[k].checked_add(coeffs[k - 1].checked_mul(v as u128)?)?;
        }
    }
    Some(coeffs)
}

/// UHD vector: expected HD counts under the uniform null, `(n / M) * U*`.
/// Independent of the reference position. Every component is positive.
pub fn uhd_vector<R: Scalar>(schema: &Schema, n: usize) -> Vec<R> {
    let diminished: Vec<R> = schema
        .level_counts()
        .iter()
        .map(|&m| R::from_count(m - 1))
        .collect();
    let star = elementary_symmetric(&diminished);
    let lattice: R = schema.lattice_size();
    let scale = R::from_count(n) / lattice;
    star.into_iter().map(|u| u * scale).collect()
}

/// How the continuous part of the null sample is generated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NullMode {
    /// Independent uniform draws over the observed per-attribute bounding
    /// box (the default).
    UniformBox,
    /// Concatenated random permutations of each observed column, truncated
    /// to the requested size.
    Permute,
}

impl std::fmt::Display for NullMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            NullMode::UniformBox => write!(f, "uniform-box"),
            NullMode::Permute => write!(f, "permute"),
        }
    }
}

impl std::str::FromStr for NullMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uniform-box" => Ok(NullMode::UniformBox),
            "permute" => Ok(NullMode::Permute),
            other => Err(Error::InvalidConfig(format!(
                "unknown null mode `{other}` (expected uniform-box or permute)"
            ))),
        }
    }
}

/// Null-sample configuration. `size = None` uses `max(n, 5000)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NullConfig {
    pub mode: NullMode,
    pub size: Option<usize>,
}

impl Default for NullConfig {
    fn default() -> Self {
        Self {
            mode: NullMode::UniformBox,
            size: None,
        }
    }
}

impl NullConfig {
    /// Effective null-sample size for a dataset of `n` rows.
    pub fn resolve_size(&self, n: usize) -> usize {
        self.size.unwrap_or_else(|| n.max(5000))
    }
}

/// Draw a null sample matched to `ds`: categorical attributes uniform over
/// their level sets, continuous attributes per `mode`. A degenerate
/// continuous attribute (observed min = max) stays constant in the sample.
pub fn sample_null<R: Scalar>(
    ds: &MixedDataset<R>,
    n_null: usize,
    mode: NullMode,
    seed: u64,
) -> Result<MixedDataset<R>> {
    if n_null == 0 {
        return Err(Error::InvalidConfig("null sample size must be >= 1".into()));
    }
    if ds.n() == 0 {
        return Err(Error::EmptyDataset);
    }
    let schema = ds.schema();
    let (p, q) = (schema.p(), schema.q());
    let mut rng = seeded_rng(seed);

    let mut cats = Vec::with_capacity(n_null * p);
    for _ in 0..n_null {
        for j in 0..p {
            cats.push(rng.random_range(0..schema.level_count(j)) as u16);
        }
    }

    let mut conts = vec![R::zero(); n_null * q];
    match mode {
        NullMode::UniformBox => {
            let bounds = ds.cont_bounds()?;
            for i in 0..n_null {
                for (k, &(lo, hi)) in bounds.iter().enumerate() {
                    conts[i * q + k] = R::uniform(&mut rng, lo, hi);
                }
            }
        }
        NullMode::Permute => {
            for k in 0..q {
                let observed: Vec<R> = (0..ds.n()).map(|i| ds.cont_row(i)[k]).collect();
                let mut emitted = 0usize;
                while emitted < n_null {
                    let mut block = observed.clone();
                    shuffle(&mut block, &mut rng);
                    for v in block {
                        if emitted == n_null {
                            break;
                        }
                        conts[emitted * q + k] = v;
                        emitted += 1;
                    }
                }
            }
        }
    }
    MixedDataset::new(Arc::clone(schema), cats, conts)
}

/// Fisher-Yates shuffle driven by our seeded RNG.
fn shuffle<T, G: Rng>(items: &mut [T], rng: &mut G) {
    for i in (1..items.len()).rev() {
        let j = rng.random_range(0..=i);
        items.swap(i, j);
    }
}

/// A fresh dataset drawn from the uniform null itself: categorical rows
/// uniform over the lattice, continuous rows uniform over `bounds`. Used by
/// threshold calibration and by null-behavior tests.
pub fn uniform_null_dataset<R: Scalar>(
    schema: &Arc<Schema>,
    n: usize,
    bounds: &[(R, R)],
    seed: u64,
) -> Result<MixedDataset<R>> {
    if n == 0 {
        return Err(Error::InvalidConfig("null dataset size must be >= 1".into()));
    }
    if bounds.len() != schema.q() {
        return Err(Error::LengthMismatch(format!(
            "{} bounds for q={}",
            bounds.len(),
            schema.q()
        )));
    }
    let (p, q) = (schema.p(), schema.q());
    let mut rng = seeded_rng(seed);
    let mut cats = Vec::with_capacity(n * p);
    let mut conts = Vec::with_capacity(n * q);
    for _ in 0..n {
        for j in 0..p {
            cats.push(rng.random_range(0..schema.level_count(j)) as u16);
        }
        for &(lo, hi) in bounds {
            conts.push(R::uniform(&mut rng, lo, hi));
        }
    }
    MixedDataset::new(Arc::clone(schema), cats, conts)
}

/// UED vector: null ED counts in `bins`, rescaled to total mass `n`.
/// Null distances beyond the last edge clamp into the final bin so mass is
/// conserved.
pub fn ued_vector<R: Scalar>(
    null_sample: &MixedDataset<R>,
    cont_ref: &[R],
    bins: &Bins<R>,
    n: usize,
) -> Result<Vec<R>> {
    let q = null_sample.schema().q();
    if cont_ref.len() != q {
        return Err(Error::LengthMismatch(format!(
            "reference has {} continuous values, schema declares {q}",
            cont_ref.len()
        )));
    }
    let mut counts = vec![0u64; bins.count()];
    for i in 0..null_sample.n() {
        let d = euclidean_unchecked(null_sample.cont_row(i), cont_ref);
        counts[bins.index_clamped(d)] += 1;
    }
    let scale = R::from_count(n) / R::from_count(null_sample.n());
    Ok(counts
        .into_iter()
        .map(|c| R::from_u64(c).expect("count fits scalar") * scale)
        .collect())
}

/// The pair of null reference vectors for one reference position.
#[derive(Debug, Clone, PartialEq)]
pub struct NullProfile<R> {
    /// Expected HD counts (closed form), length `p + 1`.
    pub uhd: Vec<R>,
    /// Expected ED counts (Monte-Carlo, rescaled to `n`), length `l`.
    pub ued: Vec<R>,
    /// Lattice size `M`.
    pub lattice_size: R,
    /// Null-sample size behind `ued`.
    pub null_size: usize,
    /// Seed the null sample was drawn with.
    pub seed: u64,
}
