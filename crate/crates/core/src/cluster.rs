//! Center selection, radius estimation, and the iterative extraction loop.
//!
//! Each iteration works on the rows not yet assigned: it rebuilds the null
//! reference vectors for the current size, calibrates (or reuses) the
//! significance threshold, evaluates the weighted statistic at every
//! remaining row as a candidate center, and stops when the maximum falls
//! below the threshold. Otherwise the maximizing row becomes a cluster
//! center, radii are read off its distance curves, and every row within the
//! radii is extracted before the loop repeats.

use std::collections::HashSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dataset::MixedDataset;
use crate::distance::{euclidean_unchecked, hamming_unchecked, Bins};
use crate::error::{Error, Result};
use crate::nullmodel::{sample_null, uhd_vector, NullConfig, NullMode};
use crate::rng::{derive_seed, STREAM_CALIBRATION, STREAM_NULL_SAMPLE};
use crate::scalar::{median_sorted, sort_scalars, Scalar};
use crate::stat::{
    calibrate_threshold, evaluate_center, order_statistic_rank, CenterEval, StatParams,
    TestResult, Threshold,
};

/// How the two radius conditions combine into cluster membership.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Membership {
    /// Within both radii (the default).
    #[serde(rename = "and")]
    Intersection,
    /// Within either radius.
    #[serde(rename = "or")]
    Union,
}

impl std::fmt::Display for Membership {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Membership::Intersection => write!(f, "and"),
            Membership::Union => write!(f, "or"),
        }
    }
}

impl std::str::FromStr for Membership {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "and" => Ok(Membership::Intersection),
            "or" => Ok(Membership::Union),
            other => Err(Error::InvalidConfig(format!(
                "unknown membership rule `{other}` (expected and or or)"
            ))),
        }
    }
}

/// Full configuration of the extraction loop.
#[derive(Debug, Clone, PartialEq)]
pub struct EngineConfig<R> {
    /// ED bin count `l`.
    pub bins: usize,
    /// Significance level for the threshold.
    pub alpha: R,
    /// Null replicates behind each calibrated threshold.
    pub calib_replicates: usize,
    /// Master seed; the null-sample and calibration streams derive from it
    /// unless overridden below.
    pub seed: u64,
    pub null_seed: Option<u64>,
    pub calib_seed: Option<u64>,
    pub null_mode: NullMode,
    /// Null-sample size for the UED estimate; `None` = `max(n, 5000)`.
    pub null_size: Option<usize>,
    /// Skip Monte-Carlo calibration and compare against this value instead.
    pub fixed_threshold: Option<R>,
    /// Use the symmetric continuous cut-off variant.
    pub cutoff_continuous_minus_one: bool,
    /// Multiplier on the median positive gap in the continuous-radius jump
    /// rule.
    pub jump_factor: R,
    pub membership: Membership,
    /// Stop when fewer rows than this remain.
    pub min_cluster_size: usize,
}

impl<R: Scalar> Default for EngineConfig<R> {
    fn default() -> Self {
        Self {
            bins: 10,
            alpha: R::from_f64(0.05).expect("fits scalar"),
            calib_replicates: 199,
            seed: 0,
            null_seed: None,
            calib_seed: None,
            null_mode: NullMode::UniformBox,
            null_size: None,
            fixed_threshold: None,
            cutoff_continuous_minus_one: false,
            jump_factor: R::from_f64(5.0).expect("fits scalar"),
            membership: Membership::Intersection,
            min_cluster_size: 2,
        }
    }
}

impl<R: Scalar> EngineConfig<R> {
    pub fn stat_params(&self) -> StatParams {
        StatParams {
            bins: self.bins,
            cutoff_continuous_minus_one: self.cutoff_continuous_minus_one,
        }
    }

    pub fn null_config(&self) -> NullConfig {
        NullConfig {
            mode: self.null_mode,
            size: self.null_size,
        }
    }

    /// Seed of the per-iteration UED null samples.
    pub fn effective_null_seed(&self) -> u64 {
        self.null_seed
            .unwrap_or_else(|| derive_seed(self.seed, STREAM_NULL_SAMPLE))
    }

    /// Seed of the threshold-calibration replicates.
    pub fn effective_calib_seed(&self) -> u64 {
        self.calib_seed
            .unwrap_or_else(|| derive_seed(self.seed, STREAM_CALIBRATION))
    }

    fn validate(&self, q: usize) -> Result<()> {
        if q > 0 && self.bins < 2 {
            return Err(Error::InvalidConfig(
                "at least 2 ED bins required when continuous attributes are present".into(),
            ));
        }
        let alpha = self.alpha.to_f64().expect("alpha fits f64");
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::InvalidConfig("alpha must lie in (0, 1)".into()));
        }
        if self.min_cluster_size < 1 {
            return Err(Error::InvalidConfig("min cluster size must be >= 1".into()));
        }
        if !(self.jump_factor > R::zero()) {
            return Err(Error::InvalidConfig("jump factor must be positive".into()));
        }
        match self.fixed_threshold {
            Some(t) if !t.is_finite() => {
                return Err(Error::InvalidConfig("fixed threshold must be finite".into()))
            }
            Some(_) => {}
            None => {
                order_statistic_rank(self.calib_replicates, alpha)?;
            }
        }
        Ok(())
    }
}

/// One extracted cluster, indices referring to the original dataset.
#[derive(Debug, Clone, PartialEq)]
pub struct Cluster<R> {
    pub center_row: usize,
    pub cat_center: Vec<u16>,
    pub cont_center: Vec<R>,
    /// Categorical radius (Hamming distance, inclusive).
    pub radius_cat: usize,
    /// Continuous radius (Euclidean distance, inclusive).
    pub radius_cont: R,
    /// Original row indices, ascending.
    pub members: Vec<usize>,
    pub stat: TestResult<R>,
}

/// Diagnostics captured at the winning center of one extraction iteration:
/// the observed and null distance curves plus the radii read off them.
#[derive(Debug, Clone, PartialEq)]
pub struct IterationRecord<R> {
    /// 1-based iteration number.
    pub iteration: usize,
    /// Rows remaining at the start of the iteration.
    pub n_remaining: usize,
    pub threshold: R,
    /// Winning effective statistic (what was compared to the threshold).
    pub max_statistic: R,
    /// Original index of the winning center row.
    pub center_row: usize,
    pub stat: TestResult<R>,
    pub degenerate_tail: bool,
    pub radius_cat: usize,
    pub radius_cont: R,
    /// Observed HD curve at the center (empty when `p = 0`).
    pub hd_counts: Vec<u64>,
    /// UHD curve for the iteration's `n` (empty when `p = 0`).
    pub uhd: Vec<R>,
    /// Observed ED curve at the center (empty when `q = 0`).
    pub ed_counts: Vec<u64>,
    /// UED curve at the center (empty when `q = 0`).
    pub ued: Vec<R>,
    pub bins: Option<Bins<R>>,
    /// Sorted distances of the iteration's rows to the center.
    pub sorted_eds: Vec<R>,
    /// Original indices removed this iteration.
    pub extracted: Vec<usize>,
}

/// Why the loop stopped.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StopReason<R> {
    /// The maximum statistic fell below the threshold.
    BelowThreshold { max_statistic: R, threshold: R },
    /// Fewer rows than `min_cluster_size` remained.
    TooFewRows { remaining: usize },
    /// Every significant candidate center extracted fewer than
    /// `min_cluster_size` rows. Without this the loop peels chains of
    /// marginal singletons off cluster residue.
    NoViableCluster { max_statistic: R, threshold: R },
}

/// Ordered extraction outcome. Cluster member sets and the unassigned set
/// partition the original row indices exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct ClusterResult<R> {
    /// Original dataset size.
    pub n: usize,
    pub clusters: Vec<Cluster<R>>,
    /// Original indices never assigned, ascending.
    pub unassigned: Vec<usize>,
    pub iterations: Vec<IterationRecord<R>>,
    pub stop: StopReason<R>,
}

impl<R> ClusterResult<R> {
    /// Per-row labels: cluster id in extraction order (1-based), 0 for
    /// unassigned.
    pub fn labels(&self) -> Vec<usize> {
        let mut labels = vec![0usize; self.n];
        for (k, cluster) in self.clusters.iter().enumerate() {
            for &i in &cluster.members {
                labels[i] = k + 1;
            }
        }
        labels
    }
}

/// Categorical radius: the distance at which the HD curve reaches its
/// first interior strict local minimum (the valley floor separating the
/// cluster from the rest); `fallback` (the categorical cut-off) when no
/// interior strict local minimum exists or `p < 2`.
pub fn radius_categorical(hd: &[u64], fallback: usize) -> usize {
    let p = hd.len().saturating_sub(1);
    if p >= 2 {
        for j in 1..p {
            if hd[j] < hd[j - 1].min(hd[j + 1]) {
                return j;
            }
        }
    }
    fallback
}

/// Fraction of the considered distance range a gap must span to count as a
/// cluster boundary.
pub const JUMP_RANGE_FRACTION: f64 = 0.1;

/// Continuous radius via the first-jump rule: among the distances at or
/// below the upper edge of the cut-off bin, the radius is the last value
/// before the first boundary gap; the largest considered value when no gap
/// qualifies; 0 when fewer than two values qualify.
///
/// A gap counts as a boundary when it exceeds `jump_factor` times the
/// median positive gap, at least half of the considered values lie below
/// it, and it spans at least [`JUMP_RANGE_FRACTION`] of the considered
/// range. The last two conditions keep sampling sparsity near the center
/// (which always sits alone at distance 0) and in the shell's own tail from
/// masquerading as the cluster edge.
pub fn radius_continuous<R: Scalar>(
    eds: &[R],
    bins: &Bins<R>,
    cutoff: usize,
    jump_factor: R,
) -> R {
    let limit = bins.upper_edge(cutoff);
    let mut considered: Vec<R> = eds.iter().copied().filter(|&d| d <= limit).collect();
    if considered.len() < 2 {
        return R::zero();
    }
    sort_scalars(&mut considered);
    let gaps: Vec<R> = considered.windows(2).map(|w| w[1] - w[0]).collect();
    let mut positive: Vec<R> = gaps.iter().copied().filter(|&g| g > R::zero()).collect();
    if positive.is_empty() {
        return *considered.last().expect("nonempty");
    }
    sort_scalars(&mut positive);
    let jump_at = jump_factor * median_sorted(&positive);
    let span_at = R::from_f64(JUMP_RANGE_FRACTION).expect("fits scalar")
        * (*considered.last().expect("nonempty") - considered[0]);
    let min_below = considered.len().div_ceil(2);
    for (i, &g) in gaps.iter().enumerate() {
        if i + 1 >= min_below && g > jump_at && g >= span_at {
            return considered[i];
        }
    }
    *considered.last().expect("nonempty")
}

/// Rows of `ds` within the radii of the given center. An absent portion
/// (`p = 0` or `q = 0`) imposes no condition.
pub fn extract<R: Scalar>(
    ds: &MixedDataset<R>,
    cat_center: &[u16],
    cont_center: &[R],
    radius_cat: usize,
    radius_cont: R,
    membership: Membership,
) -> Vec<usize> {
    let p = ds.schema().p();
    let q = ds.schema().q();
    (0..ds.n())
        .filter(|&i| {
            let cat_in =
                (p > 0).then(|| hamming_unchecked(ds.cat_row(i), cat_center) <= radius_cat);
            let cont_in = (q > 0)
                .then(|| euclidean_unchecked(ds.cont_row(i), cont_center) <= radius_cont);
            match membership {
                Membership::Intersection => {
                    cat_in.unwrap_or(true) && cont_in.unwrap_or(true)
                }
                Membership::Union => match (cat_in, cont_in) {
                    (Some(a), Some(b)) => a || b,
                    (Some(a), None) => a,
                    (None, Some(b)) => b,
                    (None, None) => true,
                },
            }
        })
        .collect()
}

/// Evaluate every row of `ds` as a candidate center and return the winner
/// (largest effective statistic, ties broken by smallest row index). The
/// scan is data-parallel; the selection is schedule-independent.
pub fn best_center<R: Scalar>(
    ds: &MixedDataset<R>,
    uhd: Option<&[R]>,
    null_sample: Option<&MixedDataset<R>>,
    params: &StatParams,
) -> Result<CenterEval<R>> {
    if ds.n() == 0 {
        return Err(Error::EmptyDataset);
    }
    let evals: Result<Vec<CenterEval<R>>> = (0..ds.n())
        .into_par_iter()
        .map(|i| evaluate_center(ds, i, uhd, null_sample, params))
        .collect();
    Ok(evals?
        .into_iter()
        .reduce(|best, cand| if cand.effective > best.effective { cand } else { best })
        .expect("nonempty dataset"))
}

/// Run the full iterative extraction loop.
pub fn run_clustering<R: Scalar>(
    ds: &MixedDataset<R>,
    cfg: &EngineConfig<R>,
) -> Result<ClusterResult<R>> {
    let schema = ds.schema();
    let (p, q) = (schema.p(), schema.q());
    cfg.validate(q)?;
    if ds.n() == 0 {
        return Err(Error::EmptyDataset);
    }
    let params = cfg.stat_params();
    let null_cfg = cfg.null_config();
    let null_seed = cfg.effective_null_seed();
    let calib_seed = cfg.effective_calib_seed();

    let mut remaining: Vec<usize> = (0..ds.n()).collect();
    let mut clusters: Vec<Cluster<R>> = Vec::new();
    let mut iterations: Vec<IterationRecord<R>> = Vec::new();
    let mut iteration = 0usize;
    let stop = loop {
        if remaining.len() < cfg.min_cluster_size {
            break StopReason::TooFewRows {
                remaining: remaining.len(),
            };
        }
        iteration += 1;
        let current = ds.subset(&remaining);
        let n_cur = current.n();

        let uhd = if p > 0 {
            Some(uhd_vector::<R>(schema, n_cur))
        } else {
            None
        };
        let null_sample = if q > 0 {
            Some(sample_null(
                &current,
                null_cfg.resolve_size(n_cur),
                null_cfg.mode,
                derive_seed(null_seed, iteration as u64),
            )?)
        } else {
            None
        };

        let threshold = match cfg.fixed_threshold {
            Some(value) => Threshold {
                alpha: cfg.alpha,
                value,
                replicates: 0,
                seed: calib_seed,
            },
            None => {
                let bounds = if q > 0 {
                    current.cont_bounds()?
                } else {
                    Vec::new()
                };
                calibrate_threshold(
                    schema,
                    n_cur,
                    &bounds,
                    &params,
                    &null_cfg,
                    cfg.alpha,
                    cfg.calib_replicates,
                    derive_seed(calib_seed, iteration as u64),
                )?
            }
        };

        let evals: Result<Vec<CenterEval<R>>> = (0..n_cur)
            .into_par_iter()
            .map(|i| evaluate_center(&current, i, uhd.as_deref(), null_sample.as_ref(), &params))
            .collect();
        let mut evals = evals?;
        evals.sort_by(|a, b| {
            b.effective
                .partial_cmp(&a.effective)
                .expect("finite statistic")
                .then(a.row.cmp(&b.row))
        });
        let scan_max = evals[0].effective;
        if scan_max < threshold.value {
            break StopReason::BelowThreshold {
                max_statistic: scan_max,
                threshold: threshold.value,
            };
        }

        // The center is the highest-scoring significant candidate whose
        // extraction reaches min_cluster_size; candidates whose radii catch
        // almost nothing are noise positions, not cluster centers.
        let mut accepted = None;
        for cand in &evals {
            if cand.effective < threshold.value {
                break;
            }
            let cat_center = if p > 0 {
                current.cat_row(cand.row).to_vec()
            } else {
                Vec::new()
            };
            let cont_center = if q > 0 {
                current.cont_row(cand.row).to_vec()
            } else {
                Vec::new()
            };
            let radius_cat = if p > 0 {
                // The radius never undershoots the cut-off: bins up to the
                // cut-off are the cluster side of the test by construction,
                // and count noise in the HD curve can fake a local minimum
                // there.
                let cutoff = cand.result.cutoff_cat.expect("p > 0");
                radius_categorical(&cand.hd_counts, cutoff).max(cutoff)
            } else {
                0
            };
            let mut sorted_eds: Vec<R> = Vec::new();
            let radius_cont = if q > 0 {
                sorted_eds = (0..n_cur)
                    .map(|i| euclidean_unchecked(current.cont_row(i), &cont_center))
                    .collect();
                sort_scalars(&mut sorted_eds);
                radius_continuous(
                    &sorted_eds,
                    cand.bins.as_ref().expect("q > 0"),
                    cand.result.cutoff_cont.expect("q > 0"),
                    cfg.jump_factor,
                )
            } else {
                R::zero()
            };
            let members_local = extract(
                &current,
                &cat_center,
                &cont_center,
                radius_cat,
                radius_cont,
                cfg.membership,
            );
            if !members_local.contains(&cand.row) {
                return Err(Error::Internal(
                    "winning center fell outside its own radii".into(),
                ));
            }
            if members_local.len() >= cfg.min_cluster_size {
                accepted = Some((
                    cand,
                    cat_center,
                    cont_center,
                    radius_cat,
                    radius_cont,
                    sorted_eds,
                    members_local,
                ));
                break;
            }
        }
        let Some((winner, cat_center, cont_center, radius_cat, radius_cont, sorted_eds, members_local)) =
            accepted
        else {
            break StopReason::NoViableCluster {
                max_statistic: scan_max,
                threshold: threshold.value,
            };
        };
        let members: Vec<usize> = members_local.iter().map(|&i| remaining[i]).collect();
        let center_row = remaining[winner.row];

        iterations.push(IterationRecord {
            iteration,
            n_remaining: n_cur,
            threshold: threshold.value,
            max_statistic: winner.effective,
            center_row,
            stat: winner.result.clone(),
            degenerate_tail: winner.degenerate_tail,
            radius_cat,
            radius_cont,
            hd_counts: winner.hd_counts.clone(),
            uhd: uhd.clone().unwrap_or_default(),
            ed_counts: winner.ed_counts.clone(),
            ued: winner.ued.clone(),
            bins: winner.bins.clone(),
            sorted_eds,
            extracted: members.clone(),
        });
        clusters.push(Cluster {
            center_row,
            cat_center,
            cont_center,
            radius_cat,
            radius_cont,
            members: members.clone(),
            stat: winner.result.clone(),
        });

        let removed: HashSet<usize> = members.iter().copied().collect();
        remaining.retain(|i| !removed.contains(i));
    };

    let result = ClusterResult {
        n: ds.n(),
        clusters,
        unassigned: remaining,
        iterations,
        stop,
    };
    check_partition(&result)?;
    Ok(result)
}

/// Cluster members plus unassigned rows must cover each original index
/// exactly once.
fn check_partition<R>(result: &ClusterResult<R>) -> Result<()> {
    let mut seen = vec![false; result.n];
    let assigned = result
        .clusters
        .iter()
        .flat_map(|c| c.members.iter())
        .chain(result.unassigned.iter());
    for &i in assigned {
        if i >= result.n || seen[i] {
            return Err(Error::Internal(format!(
                "row {i} missing or assigned twice in the partition"
            )));
        }
        seen[i] = true;
    }
    if let Some(lost) = seen.iter().position(|&s| !s) {
        return Err(Error::Internal(format!("row {lost} lost during extraction")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::dataset::{CatAttr, Schema};
    use crate::rng::seeded_rng;
    use rand::Rng;

    fn mixed_schema(ms: &[usize], q: usize) -> Arc<Schema> {
        let cats = ms
            .iter()
            .enumerate()
            .map(|(j, &m)| CatAttr {
                name: format!("c{j}"),
                levels: (0..m).map(|v| format!("v{v}")).collect(),
            })
            .collect();
        Arc::new(Schema::new(cats, (0..q).map(|k| format!("z{k}")).collect()).unwrap())
    }

    fn quick_config() -> EngineConfig<f64> {
        EngineConfig {
            calib_replicates: 19,
            null_size: Some(400),
            ..EngineConfig::default()
        }
    }

    #[test]
    fn radius_categorical_first_strict_local_minimum() {
        assert_eq!(radius_categorical(&[10, 6, 2, 5, 1], 3), 2);
        assert_eq!(radius_categorical(&[3, 1, 4, 1, 2], 3), 1);
    }

    #[test]
    fn radius_categorical_falls_back_without_local_minimum() {
        assert_eq!(radius_categorical(&[8, 4, 2, 1], 2), 2);
        // p < 2 always falls back.
        assert_eq!(radius_categorical(&[5, 3], 0), 0);
    }

    #[test]
    fn radius_continuous_detects_first_jump() {
        let bins = Bins::equal_width(2.0, 2).unwrap();
        // Upper edge of bin 0 is 1.0; all five values are considered.
        let eds = [0.10f64, 0.12, 0.15, 0.90, 1.00];
        let r = radius_continuous(&eds, &bins, 0, 5.0);
        assert!((r - 0.15).abs() < 1e-15);
    }

    #[test]
    fn radius_continuous_without_jump_takes_max() {
        let bins = Bins::equal_width(2.0, 2).unwrap();
        let eds = [0.0, 0.25, 0.5, 0.75, 1.0];
        assert_eq!(radius_continuous(&eds, &bins, 0, 5.0), 1.0);
    }

    #[test]
    fn radius_continuous_ignores_sparse_gaps_near_the_center() {
        let bins = Bins::equal_width(20.0, 2).unwrap();
        // A center at 0, an isolated nearest neighbor, then a dense shell:
        // the large leading gaps are not the cluster boundary.
        let mut eds = vec![0.0, 0.9];
        eds.extend((0..60).map(|i| 2.0 + 0.01 * i as f64));
        let r = radius_continuous(&eds, &bins, 0, 5.0);
        assert!((r - 2.59).abs() < 1e-12, "radius {r}");
    }

    #[test]
    fn radius_continuous_degenerate_cases() {
        let bins = Bins::equal_width(2.0, 2).unwrap();
        assert_eq!(radius_continuous(&[0.4], &bins, 0, 5.0), 0.0);
        // Values beyond the cut-off edge are not considered.
        assert_eq!(radius_continuous(&[0.3, 1.7, 1.9], &bins, 0, 5.0), 0.0);
        // All-equal values: no positive gap, radius is the common value.
        assert_eq!(radius_continuous(&[0.2, 0.2, 0.2], &bins, 0, 5.0), 0.2);
    }

    #[test]
    fn extract_is_boundary_inclusive_intersection() {
        let schema = mixed_schema(&[2, 2], 1);
        let ds = MixedDataset::<f64>::new(
            Arc::clone(&schema),
            vec![0, 0, 0, 1, 1, 1, 0, 0],
            vec![0.0, 1.0, 2.0, 1.01],
        )
        .unwrap();
        // Center (0,0)/0.0 with radii (1, 1.0): rows 0 (exact), 1 (at both
        // boundaries), not 2 (HD 2), not 3 (ED 1.01).
        let members = extract(&ds, &[0, 0], &[0.0], 1, 1.0, Membership::Intersection);
        assert_eq!(members, vec![0, 1]);
        let union = extract(&ds, &[0, 0], &[0.0], 1, 1.0, Membership::Union);
        assert_eq!(union, vec![0, 1, 3]);
    }

    #[test]
    fn best_center_breaks_ties_by_row_index() {
        let schema = mixed_schema(&[2, 2], 0);
        // Every row identical: all statistics tie exactly, row 0 must win.
        let ds = MixedDataset::<f64>::new(
            Arc::clone(&schema),
            vec![1, 0, 1, 0, 1, 0, 1, 0],
            vec![],
        )
        .unwrap();
        let uhd = uhd_vector::<f64>(&schema, ds.n());
        let winner = best_center(&ds, Some(&uhd), None, &StatParams::default()).unwrap();
        assert_eq!(winner.row, 0);
    }

    #[test]
    fn best_center_handles_single_row() {
        let schema = mixed_schema(&[3], 0);
        let ds = MixedDataset::<f64>::new(Arc::clone(&schema), vec![2], vec![]).unwrap();
        let uhd = uhd_vector::<f64>(&schema, 1);
        let winner = best_center(&ds, Some(&uhd), None, &StatParams::default()).unwrap();
        assert_eq!(winner.row, 0);
        assert!(winner.effective > 0.0);
    }

    #[test]
    fn duplicated_row_collapses_to_one_cluster() {
        let schema = mixed_schema(&[3, 3], 1);
        let n = 8;
        let cats: Vec<u16> = std::iter::repeat([1u16, 2].into_iter())
            .take(n)
            .flatten()
            .collect();
        let conts = vec![4.5f64; n];
        let ds = MixedDataset::<f64>::new(Arc::clone(&schema), cats, conts).unwrap();
        let result = run_clustering(&ds, &quick_config()).unwrap();
        assert_eq!(result.clusters.len(), 1);
        assert_eq!(result.clusters[0].members.len(), n);
        assert!(result.unassigned.is_empty());
        assert!(matches!(result.stop, StopReason::TooFewRows { remaining: 0 }));
    }

    #[test]
    fn tight_ball_in_scatter_is_found_at_a_ball_row() {
        let schema = mixed_schema(&[4, 4], 2);
        let mut rng = seeded_rng(42);
        let mut cats = Vec::new();
        let mut conts = Vec::new();
        // Rows 0..40: a tight cluster at (1,1)/(0,0); rows 40..80: scatter.
        for _ in 0..40 {
            for center in [1u16, 1] {
                let code = if rng.random_range(0..10) < 9 {
                    center
                } else {
                    rng.random_range(0..4)
                };
                cats.push(code);
            }
            conts.push(rng.random_range(-0.2..0.2));
            conts.push(rng.random_range(-0.2..0.2));
        }
        for _ in 0..40 {
            cats.push(rng.random_range(0..4));
            cats.push(rng.random_range(0..4));
            conts.push(rng.random_range(-8.0..8.0));
            conts.push(rng.random_range(-8.0..8.0));
        }
        let ds = MixedDataset::<f64>::new(Arc::clone(&schema), cats, conts).unwrap();
        let result = run_clustering(&ds, &quick_config()).unwrap();
        assert!(!result.clusters.is_empty());
        assert!(
            result.clusters[0].center_row < 40,
            "winning center {} not inside the ball",
            result.clusters[0].center_row
        );
        let inside = result.clusters[0]
            .members
            .iter()
            .filter(|&&i| i < 40)
            .count();
        assert!(inside >= 30, "only {inside} ball rows captured");
    }

    #[test]
    fn run_clustering_is_deterministic_across_thread_counts() {
        let schema = mixed_schema(&[3, 3], 1);
        let mut rng = seeded_rng(7);
        let n = 30;
        let cats: Vec<u16> = (0..n * 2).map(|_| rng.random_range(0..3)).collect();
        let conts: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..4.0)).collect();
        let ds = MixedDataset::<f64>::new(Arc::clone(&schema), cats, conts).unwrap();
        let cfg = quick_config();
        let run_in_pool = |threads: usize| {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap();
            pool.install(|| run_clustering(&ds, &cfg).unwrap())
        };
        let single = run_in_pool(1);
        let multi = run_in_pool(4);
        assert_eq!(single, multi);
        assert_eq!(single, run_in_pool(1));
    }

    #[test]
    fn partition_and_progress_hold_on_random_data() {
        let schema = mixed_schema(&[3, 2], 1);
        for seed in 0..8 {
            let mut rng = seeded_rng(seed);
            let n = rng.random_range(4..20);
            let cats: Vec<u16> = (0..n)
                .flat_map(|_| [rng.random_range(0..3u16), rng.random_range(0..2u16)])
                .collect();
            let conts: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
            let ds = MixedDataset::<f64>::new(Arc::clone(&schema), cats, conts).unwrap();
            let mut cfg = quick_config();
            cfg.seed = seed;
            cfg.null_size = Some(200);
            let result = run_clustering(&ds, &cfg).unwrap();
            // check_partition ran inside; double-check the label view.
            let labels = result.labels();
            assert_eq!(labels.len(), n);
            assert!(result.iterations.len() <= n);
            for (k, c) in result.clusters.iter().enumerate() {
                assert!(c.members.contains(&c.center_row));
                for &i in &c.members {
                    assert_eq!(labels[i], k + 1);
                }
            }
            for &i in &result.unassigned {
                assert_eq!(labels[i], 0);
            }
        }
    }

    #[test]
    fn pure_categorical_and_pure_continuous_paths_run() {
        // q = 0.
        let schema = mixed_schema(&[3, 3, 3], 0);
        let mut cats = Vec::new();
        for _ in 0..12 {
            cats.extend_from_slice(&[0u16, 1, 2]);
        }
        let mut rng = seeded_rng(3);
        for _ in 0..12 {
            for _ in 0..3 {
                cats.push(rng.random_range(0..3));
            }
        }
        let ds = MixedDataset::<f64>::new(Arc::clone(&schema), cats, vec![]).unwrap();
        let result = run_clustering(&ds, &quick_config()).unwrap();
        assert!(!result.clusters.is_empty());

        // p = 0.
        let schema = mixed_schema(&[], 1);
        let mut conts: Vec<f64> = (0..15).map(|i| 0.01 * i as f64).collect();
        conts.extend((0..15).map(|_| rng.random_range(-30.0..30.0)));
        let ds = MixedDataset::<f64>::new(Arc::clone(&schema), vec![], conts).unwrap();
        let result = run_clustering(&ds, &quick_config()).unwrap();
        assert!(!result.clusters.is_empty());
        assert!(result.clusters[0].members.iter().filter(|&&i| i < 15).count() >= 12);
    }

    #[test]
    fn uniform_null_mostly_yields_no_clusters() {
        // Deterministic mini false-positive check; the acceptance suite
        // runs the full-scale version.
        let schema = mixed_schema(&[3, 3, 3], 2);
        let mut rejections = 0;
        let trials = 20;
        for seed in 0..trials {
            let ds = crate::nullmodel::uniform_null_dataset::<f64>(
                &schema,
                40,
                &[(0.0, 1.0), (0.0, 1.0)],
                derive_seed(900, seed),
            )
            .unwrap();
            let mut cfg = quick_config();
            cfg.seed = derive_seed(901, seed);
            let result = run_clustering(&ds, &cfg).unwrap();
            if !result.clusters.is_empty() {
                rejections += 1;
            }
        }
        assert!(
            rejections <= trials / 4,
            "{rejections} of {trials} uniform-null trials formed clusters"
        );
    }
}
