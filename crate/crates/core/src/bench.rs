//! Synthetic mixed-data generation and clustering evaluation metrics.
//!
//! The generator plants `K` clusters: categorical rows keep each attribute
//! at the cluster's center level with probability `center_prob` (the rest
//! spread evenly over the remaining levels), continuous rows are
//! independent normals around centers spaced `center_gap` apart per
//! coordinate. Categorical centers are drawn uniformly over the lattice and
//! redrawn until pairwise Hamming separation reaches `ceil(p / 2)`.
//!
//! Scoring: classification rate under the optimal one-to-one matching
//! between predicted and true clusters, and information gain as the
//! uncertainty coefficient (entropy reduction of the truth given the
//! prediction), both in `[0, 1]`. Unassigned rows (label 0) never match; for
//! information gain they form their own predicted group.

use std::collections::BTreeMap;
use std::sync::Arc;
use std::time::Instant;

use rand::Rng;

use crate::assignment::max_weight_assignment;
use crate::cluster::{run_clustering, ClusterResult, EngineConfig};
use crate::dataset::{CatAttr, MixedDataset, Schema};
use crate::distance::hamming_unchecked;
use crate::error::{Error, Result};
use crate::rng::seeded_rng;
use crate::scalar::Scalar;

/// Synthetic-benchmark configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct SynthConfig<R> {
    /// Number of categorical attributes `p`.
    pub cat_attrs: usize,
    /// Number of continuous attributes `q`.
    pub cont_attrs: usize,
    /// Candidate level counts; each attribute draws its `m_j` uniformly
    /// from this pool.
    pub level_pool: Vec<usize>,
    /// Cluster sizes `n_k`; the cluster count is `sizes.len()`.
    pub sizes: Vec<usize>,
    /// Probability of the center level per categorical attribute.
    pub center_prob: R,
    /// Per-coordinate variance of the continuous noise.
    pub sigma2: R,
    /// Per-coordinate spacing between consecutive continuous centers.
    pub center_gap: R,
    pub seed: u64,
}

impl<R: Scalar> SynthConfig<R> {
    /// Baseline configuration shared by the published table settings:
    /// `p = q = 10`, level pool `{4, 5, 6}`, center probability 0.7,
    /// variance 0.25, center gap 3.
    pub fn table(index: usize) -> Result<Self> {
        let sizes: Vec<usize> = match index {
            1 => vec![100, 75, 25],
            2 => vec![130, 45, 25],
            3 => vec![40, 25, 15, 10, 10],
            4 => vec![35, 25, 20, 10, 10],
            other => {
                return Err(Error::InvalidConfig(format!(
                    "unknown table setting {other} (expected 1..=4)"
                )))
            }
        };
        Ok(Self {
            cat_attrs: 10,
            cont_attrs: 10,
            level_pool: vec![4, 5, 6],
            sizes,
            center_prob: R::from_f64(0.7).expect("fits scalar"),
            sigma2: R::from_f64(0.25).expect("fits scalar"),
            center_gap: R::from_f64(3.0).expect("fits scalar"),
            seed: 0,
        })
    }

    pub fn n(&self) -> usize {
        self.sizes.iter().sum()
    }

    fn validate(&self) -> Result<()> {
        if self.sizes.is_empty() || self.n() == 0 {
            return Err(Error::InvalidConfig("cluster sizes sum to 0".into()));
        }
        if self.cat_attrs + self.cont_attrs == 0 {
            return Err(Error::InvalidConfig("p + q must be >= 1".into()));
        }
        if self.cat_attrs > 0 {
            if self.level_pool.is_empty() {
                return Err(Error::InvalidConfig("empty level pool".into()));
            }
            if let Some(&m) = self.level_pool.iter().find(|&&m| m < 2) {
                return Err(Error::InvalidConfig(format!(
                    "level pool entry {m} below 2"
                )));
            }
            let min_m = *self.level_pool.iter().min().expect("nonempty");
            let lower = R::one() / R::from_count(min_m);
            if !(self.center_prob > lower && self.center_prob <= R::one()) {
                return Err(Error::InvalidConfig(format!(
                    "center probability {} outside (1/{min_m}, 1]",
                    self.center_prob
                )));
            }
        }
        if self.sigma2 < R::zero() {
            return Err(Error::InvalidConfig("variance must be >= 0".into()));
        }
        Ok(())
    }
}

/// A generated dataset with its ground-truth labels (1-based cluster ids).
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledDataset<R> {
    pub data: MixedDataset<R>,
    pub truth: Vec<usize>,
}

/// Generate a labeled synthetic mixed dataset.
pub fn gen_mixed<R: Scalar>(cfg: &SynthConfig<R>) -> Result<LabeledDataset<R>> {
    cfg.validate()?;
    let (p, q) = (cfg.cat_attrs, cfg.cont_attrs);
    let k = cfg.sizes.len();
    let mut rng = seeded_rng(cfg.seed);

    let level_counts: Vec<usize> = (0..p)
        .map(|_| cfg.level_pool[rng.random_range(0..cfg.level_pool.len())])
        .collect();
    let schema = Arc::new(Schema::new(
        level_counts
            .iter()
            .enumerate()
            .map(|(j, &m)| CatAttr {
                name: format!("cat{}", j + 1),
                levels: (1..=m).map(|v| format!("v{v}")).collect(),
            })
            .collect(),
        (0..q).map(|j| format!("cont{}", j + 1)).collect(),
    )?);

    // Categorical centers: uniform lattice draws, redrawn until each new
    // center sits at Hamming distance >= ceil(p/2) from all accepted ones.
    let min_sep = p.div_ceil(2);
    let mut cat_centers: Vec<Vec<u16>> = Vec::with_capacity(k);
    if p > 0 {
        for _ in 0..k {
            let mut attempts = 0;
            loop {
                let candidate: Vec<u16> = level_counts
                    .iter()
                    .map(|&m| rng.random_range(0..m) as u16)
                    .collect();
                if cat_centers
                    .iter()
                    .all(|c| hamming_unchecked(c, &candidate) >= min_sep)
                {
                    cat_centers.push(candidate);
                    break;
                }
                attempts += 1;
                if attempts > 100_000 {
                    return Err(Error::InvalidConfig(
                        "cannot place categorical centers with the required separation"
                            .into(),
                    ));
                }
            }
        }
    }

    let sigma = cfg.sigma2.sqrt();
    let mut cats = Vec::with_capacity(cfg.n() * p);
    let mut conts = Vec::with_capacity(cfg.n() * q);
    let mut truth = Vec::with_capacity(cfg.n());
    for (cluster_idx, &size) in cfg.sizes.iter().enumerate() {
        let cont_center = cfg.center_gap * R::from_count(cluster_idx + 1);
        for _ in 0..size {
            for (j, &m) in level_counts.iter().enumerate() {
                let center = cat_centers[cluster_idx][j];
                let at_center = R::uniform(&mut rng, R::zero(), R::one()) < cfg.center_prob;
                let code = if at_center || m == 1 {
                    center
                } else {
                    // Uniform over the m - 1 non-center levels.
                    let draw = rng.random_range(0..m - 1) as u16;
                    if draw >= center {
                        draw + 1
                    } else {
                        draw
                    }
                };
                cats.push(code);
            }
            for _ in 0..q {
                conts.push(cont_center + sigma * R::std_normal(&mut rng));
            }
            truth.push(cluster_idx + 1);
        }
    }
    Ok(LabeledDataset {
        data: MixedDataset::new(schema, cats, conts)?,
        truth,
    })
}

/// Classification rate: the fraction of rows whose predicted cluster is
/// matched to their true cluster under the optimal one-to-one assignment.
/// Predicted label 0 means unassigned and never matches.
pub fn classification_rate(truth: &[usize], pred: &[usize]) -> Result<f64> {
    if truth.len() != pred.len() {
        return Err(Error::LengthMismatch(format!(
            "truth has {} labels, prediction has {}",
            truth.len(),
            pred.len()
        )));
    }
    if truth.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let truth_ids: BTreeMap<usize, usize> = distinct_index(truth.iter().copied());
    let pred_ids: BTreeMap<usize, usize> =
        distinct_index(pred.iter().copied().filter(|&l| l != 0));
    if pred_ids.is_empty() {
        return Ok(0.0);
    }
    let mut confusion = vec![vec![0u64; truth_ids.len()]; pred_ids.len()];
    for (&t, &g) in truth.iter().zip(pred) {
        if g == 0 {
            continue;
        }
        confusion[pred_ids[&g]][truth_ids[&t]] += 1;
    }
    let (matched, _) = max_weight_assignment(&confusion);
    Ok(matched as f64 / truth.len() as f64)
}

/// Information gain as the uncertainty coefficient:
/// `(H(truth) - H(truth | pred)) / H(truth)` with entropies in bits.
/// Unassigned rows (label 0) form their own predicted group.
pub fn information_gain(truth: &[usize], pred: &[usize]) -> Result<f64> {
    if truth.len() != pred.len() {
        return Err(Error::LengthMismatch(format!(
            "truth has {} labels, prediction has {}",
            truth.len(),
            pred.len()
        )));
    }
    if truth.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let n = truth.len() as f64;
    let truth_entropy = entropy_bits(counts(truth.iter().copied()).values().copied());
    if truth_entropy == 0.0 {
        return Err(Error::InvalidConfig(
            "information gain undefined for single-class truth".into(),
        ));
    }
    let mut per_group: BTreeMap<usize, BTreeMap<usize, u64>> = BTreeMap::new();
    for (&t, &g) in truth.iter().zip(pred) {
        *per_group.entry(g).or_default().entry(t).or_insert(0) += 1;
    }
    let conditional: f64 = per_group
        .values()
        .map(|group| {
            let size: u64 = group.values().sum();
            (size as f64 / n) * entropy_bits(group.values().copied())
        })
        .sum();
    Ok(((truth_entropy - conditional) / truth_entropy).clamp(0.0, 1.0))
}

fn distinct_index<I: Iterator<Item = usize>>(labels: I) -> BTreeMap<usize, usize> {
    let mut map = BTreeMap::new();
    for l in labels {
        let next = map.len();
        map.entry(l).or_insert(next);
    }
    map
}

fn counts<I: Iterator<Item = usize>>(labels: I) -> BTreeMap<usize, u64> {
    let mut map = BTreeMap::new();
    for l in labels {
        *map.entry(l).or_insert(0) += 1;
    }
    map
}

fn entropy_bits<I: Iterator<Item = u64>>(freqs: I) -> f64 {
    let freqs: Vec<u64> = freqs.collect();
    let total: u64 = freqs.iter().sum();
    if total == 0 {
        return 0.0;
    }
    let n = total as f64;
    -freqs
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let f = c as f64 / n;
            f * f.log2()
        })
        .sum::<f64>()
}

/// One benchmark replicate's scores.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchOutcome {
    pub replicate: usize,
    pub setting: String,
    pub cr: f64,
    pub ig: f64,
    pub clusters_found: usize,
    pub runtime_ms: u128,
    /// Scores of a rerun on the categorical portion alone, when requested.
    pub cr_cat: Option<f64>,
    pub ig_cat: Option<f64>,
    /// Scores of a rerun on the continuous portion alone, when requested.
    pub cr_cont: Option<f64>,
    pub ig_cont: Option<f64>,
}

/// Generate one replicate, cluster it, and score the result against the
/// truth. With `per_portion` set, additionally rerun the engine on each
/// single-portion projection of the same data and score those too.
pub fn run_replicate<R: Scalar>(
    replicate: usize,
    setting: &str,
    synth: &SynthConfig<R>,
    engine: &EngineConfig<R>,
    per_portion: bool,
) -> Result<BenchOutcome> {
    let labeled = gen_mixed(synth)?;
    let start = Instant::now();
    let result = run_clustering(&labeled.data, engine)?;
    let runtime_ms = start.elapsed().as_millis();
    let pred = result.labels();
    let cr = classification_rate(&labeled.truth, &pred)?;
    let ig = information_gain(&labeled.truth, &pred)?;

    let mut outcome = BenchOutcome {
        replicate,
        setting: setting.to_owned(),
        cr,
        ig,
        clusters_found: result.clusters.len(),
        runtime_ms,
        cr_cat: None,
        ig_cat: None,
        cr_cont: None,
        ig_cont: None,
    };
    if per_portion && synth.cat_attrs > 0 && synth.cont_attrs > 0 {
        let cat_run: ClusterResult<R> =
            run_clustering(&labeled.data.categorical_only()?, engine)?;
        let cat_pred = cat_run.labels();
        outcome.cr_cat = Some(classification_rate(&labeled.truth, &cat_pred)?);
        outcome.ig_cat = Some(information_gain(&labeled.truth, &cat_pred)?);
        let cont_run: ClusterResult<R> =
            run_clustering(&labeled.data.continuous_only()?, engine)?;
        let cont_pred = cont_run.labels();
        outcome.cr_cont = Some(classification_rate(&labeled.truth, &cont_pred)?);
        outcome.ig_cont = Some(information_gain(&labeled.truth, &cont_pred)?);
    }
    Ok(outcome)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn table1_configuration_generates_expected_counts() {
        let mut cfg = SynthConfig::<f64>::table(1).unwrap();
        cfg.seed = 1;
        let labeled = gen_mixed(&cfg).unwrap();
        assert_eq!(labeled.data.n(), 200);
        assert_eq!(labeled.data.schema().p(), 10);
        assert_eq!(labeled.data.schema().q(), 10);
        let mut counts = [0usize; 3];
        for &t in &labeled.truth {
            counts[t - 1] += 1;
        }
        assert_eq!(counts, [100, 75, 25]);
        for m in labeled.data.schema().level_counts() {
            assert!((4..=6).contains(&m));
        }
    }

    #[test]
    fn zero_variance_pins_rows_to_continuous_centers() {
        let cfg = SynthConfig::<f64> {
            cat_attrs: 2,
            cont_attrs: 3,
            level_pool: vec![3],
            sizes: vec![4, 5],
            center_prob: 0.7,
            sigma2: 0.0,
            center_gap: 3.0,
            seed: 7,
        };
        let labeled = gen_mixed(&cfg).unwrap();
        for (i, &t) in labeled.truth.iter().enumerate() {
            let want = 3.0 * t as f64;
            for &v in labeled.data.cont_row(i) {
                assert_eq!(v, want);
            }
        }
    }

    #[test]
    fn single_cluster_gets_uniform_labels() {
        let cfg = SynthConfig::<f64> {
            cat_attrs: 3,
            cont_attrs: 0,
            level_pool: vec![4],
            sizes: vec![6],
            center_prob: 0.7,
            sigma2: 0.0,
            center_gap: 3.0,
            seed: 2,
        };
        let labeled = gen_mixed(&cfg).unwrap();
        assert!(labeled.truth.iter().all(|&t| t == 1));
    }

    #[test]
    fn gen_mixed_is_deterministic() {
        let mut cfg = SynthConfig::<f64>::table(3).unwrap();
        cfg.seed = 11;
        assert_eq!(gen_mixed(&cfg).unwrap(), gen_mixed(&cfg).unwrap());
    }

    #[test]
    fn categorical_centers_respect_separation() {
        let cfg = SynthConfig::<f64> {
            cat_attrs: 6,
            cont_attrs: 0,
            level_pool: vec![2],
            sizes: vec![3, 3, 3],
            center_prob: 0.9,
            sigma2: 0.0,
            center_gap: 3.0,
            seed: 4,
        };
        // With binary attributes and three far-apart centers, modes of each
        // cluster's rows reconstruct centers at pairwise HD >= 3.
        let labeled = gen_mixed(&cfg).unwrap();
        let mode = |cluster: usize, attr: usize| -> u16 {
            let mut c = [0u32; 2];
            for i in 0..labeled.data.n() {
                if labeled.truth[i] == cluster {
                    c[labeled.data.cat_row(i)[attr] as usize] += 1;
                }
            }
            if c[0] >= c[1] {
                0
            } else {
                1
            }
        };
        let centers: Vec<Vec<u16>> = (1..=3)
            .map(|k| (0..6).map(|j| mode(k, j)).collect())
            .collect();
        for a in 0..3 {
            for b in a + 1..3 {
                let d = hamming_unchecked(&centers[a], &centers[b]);
                assert!(d >= 3, "centers {a} and {b} only {d} apart");
            }
        }
    }

    #[test]
    fn center_level_marginal_frequency() {
        let cfg = SynthConfig::<f64> {
            cat_attrs: 2,
            cont_attrs: 0,
            level_pool: vec![4],
            sizes: vec![10_000],
            center_prob: 0.7,
            sigma2: 0.0,
            center_gap: 3.0,
            seed: 13,
        };
        let labeled = gen_mixed(&cfg).unwrap();
        for j in 0..2 {
            let mut freq = [0u32; 4];
            for i in 0..labeled.data.n() {
                freq[labeled.data.cat_row(i)[j] as usize] += 1;
            }
            let mode = *freq.iter().max().unwrap() as f64 / 10_000.0;
            assert!(
                (mode - 0.7).abs() <= 0.03,
                "attribute {j}: center frequency {mode}"
            );
        }
    }

    #[test]
    fn classification_rate_examples() {
        assert_relative_eq!(
            classification_rate(&[1, 1, 2, 2], &[1, 1, 2, 2]).unwrap(),
            1.0
        );
        assert_relative_eq!(
            classification_rate(&[1, 1, 2, 2], &[2, 2, 1, 1]).unwrap(),
            1.0
        );
        assert_relative_eq!(
            classification_rate(&[1, 1, 2, 2], &[1, 2, 1, 2]).unwrap(),
            0.5
        );
    }

    #[test]
    fn classification_rate_ignores_unassigned() {
        assert_relative_eq!(
            classification_rate(&[1, 1, 2, 2], &[0, 0, 0, 0]).unwrap(),
            0.0
        );
        assert_relative_eq!(
            classification_rate(&[1, 1, 2, 2], &[5, 5, 0, 0]).unwrap(),
            0.5
        );
    }

    #[test]
    fn classification_rate_is_relabeling_invariant() {
        use rand::Rng;
        let mut rng = crate::rng::seeded_rng(3);
        for _ in 0..50 {
            let n = rng.random_range(2..30);
            let truth: Vec<usize> = (0..n).map(|_| rng.random_range(1..4)).collect();
            let pred: Vec<usize> = (0..n).map(|_| rng.random_range(0..4)).collect();
            let base = classification_rate(&truth, &pred).unwrap();
            // Relabel predicted clusters 1..3 -> 7, 5, 9 (0 stays 0).
            let relabel = [0usize, 7, 5, 9];
            let pred2: Vec<usize> = pred.iter().map(|&l| relabel[l]).collect();
            let truth2: Vec<usize> = truth.iter().map(|&l| l + 10).collect();
            assert_relative_eq!(base, classification_rate(&truth2, &pred2).unwrap());
            assert!((0.0..=1.0).contains(&base));
        }
    }

    #[test]
    fn information_gain_examples() {
        assert_relative_eq!(
            information_gain(&[1, 1, 2, 2], &[1, 1, 2, 2]).unwrap(),
            1.0
        );
        assert_relative_eq!(
            information_gain(&[1, 1, 2, 2], &[3, 3, 3, 3]).unwrap(),
            0.0
        );
        let ig = information_gain(&[1, 1, 2, 2], &[1, 1, 1, 2]).unwrap();
        assert_relative_eq!(ig, 0.3112781244591328, max_relative = 1e-12);
    }

    #[test]
    fn information_gain_rejects_single_class_truth() {
        assert!(information_gain(&[1, 1, 1], &[1, 2, 3]).is_err());
    }

    #[test]
    fn metrics_reject_length_mismatch() {
        assert!(classification_rate(&[1, 2], &[1]).is_err());
        assert!(information_gain(&[1, 2], &[1]).is_err());
    }
}
