//! Optimal separation points, the modified chi-square statistics, their
//! weighted combination, and significance-threshold calibration.
//!
//! Bin indices are 0-based throughout: the first HD component is distance 0
//! and the first ED bin is index 0. A cut-off `r` bounds the window
//! `0..=r`; everything after it is pooled into a single tail cell, so a
//! cut-off must always leave a nonempty tail.

use std::sync::Arc;

use rayon::prelude::*;

use crate::dataset::{MixedDataset, Schema};
use crate::distance::{euclidean_unchecked, hd_vector, Bins};
use crate::error::{Error, Result};
use crate::nullmodel::{sample_null, ued_vector, uhd_vector, uniform_null_dataset, NullConfig};
use crate::rng::{derive_seed, STREAM_CALIB_UED};
use crate::scalar::{sort_scalars, Scalar};

/// Expected-count floor for window bins whose Monte-Carlo null mass is zero.
pub const ZERO_NULL_FLOOR: f64 = 0.5;

/// Minimum expected count for a bin to witness a curve crossing. On large
/// lattices the leading UHD components are vanishingly small, and an
/// observed zero there says nothing about where the cluster ends; such
/// cells are skipped in the cut-off scan, mirroring the zero-mass skip on
/// the continuous side.
pub const CROSSING_MIN_EXPECTED: f64 = 0.5;

/// Categorical cut-off: the index before the first distance at which the
/// observed HD curve drops below the null curve; `p - 1` when it never
/// does. Cells with expected count under [`CROSSING_MIN_EXPECTED`] cannot
/// witness the crossing.
pub fn cutoff_categorical<R: Scalar>(hd: &[u64], uhd: &[R]) -> usize {
    let p = hd.len() - 1;
    debug_assert!(p >= 1, "categorical cut-off needs p >= 1");
    debug_assert_eq!(hd.len(), uhd.len());
    let floor = R::from_f64(CROSSING_MIN_EXPECTED).expect("floor fits scalar");
    for j in 1..=p {
        debug_assert!(uhd[j] > R::zero(), "UHD components must be positive");
        if uhd[j] >= floor
            && R::from_u64(hd[j]).expect("count fits scalar") / uhd[j] < R::one()
        {
            return j - 1;
        }
    }
    p - 1
}

/// Continuous cut-off: the first bin index >= 1 at which the observed ED
/// curve drops below the null curve (the crossing bin itself, unlike the
/// categorical rule). Bins with zero null mass are skipped; `l - 2` when no
/// crossing exists, keeping the tail nonempty. `minus_one` switches to the
/// symmetric variant that steps back one bin from the crossing.
pub fn cutoff_continuous<R: Scalar>(ed: &[u64], ued: &[R], minus_one: bool) -> usize {
    let l = ed.len();
    debug_assert!(l >= 2, "continuous cut-off needs l >= 2");
    debug_assert_eq!(ed.len(), ued.len());
    let fallback = l - 2;
    for j in 1..l - 1 {
        if ued[j] > R::zero() && R::from_u64(ed[j]).expect("count fits scalar") / ued[j] < R::one()
        {
            return if minus_one { j - 1 } else { j };
        }
    }
    fallback
}

/// Modified chi-square over the categorical window `0..=cutoff` plus a
/// pooled tail cell. Window denominators are floored at
/// [`ZERO_NULL_FLOOR`]: on large lattices the leading expected counts are
/// effectively zero, and dividing by them turns single coincidental matches
/// into arbitrarily large statistics.
pub fn chisq_categorical<R: Scalar>(hd: &[u64], uhd: &[R], cutoff: usize) -> Result<R> {
    if hd.len() != uhd.len() {
        return Err(Error::LengthMismatch(format!(
            "HD has {} components, UHD has {}",
            hd.len(),
            uhd.len()
        )));
    }
    let p = hd.len() - 1;
    if p == 0 || cutoff > p - 1 {
        return Err(Error::InvalidConfig(
            "categorical cut-off must leave a nonempty tail".into(),
        ));
    }
    let floor = R::from_f64(ZERO_NULL_FLOOR).expect("floor fits scalar");
    let mut window = R::zero();
    let mut sum_obs = R::zero();
    let mut sum_exp = R::zero();
    for j in 0..=cutoff {
        let o = R::from_u64(hd[j]).expect("count fits scalar");
        let e = uhd[j];
        if !(e > R::zero()) {
            return Err(Error::InvalidConfig(
                "UHD components must be positive".into(),
            ));
        }
        let d = o - e;
        window = window + d * d / e.max(floor);
        sum_obs = sum_obs + o;
        sum_exp = sum_exp + e;
    }
    let tail = uhd[cutoff + 1..]
        .iter()
        .fold(R::zero(), |acc, &e| acc + e);
    let d = sum_obs - sum_exp;
    Ok(window + d * d / tail)
}

/// Continuous chi-square outcome. When the pooled null tail carries no mass
/// the statistic is reported as `+inf` with `degenerate_tail` set; `window`
/// keeps the finite in-window part for center ranking.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChiContinuous<R> {
    pub value: R,
    pub window: R,
    pub degenerate_tail: bool,
}

/// Modified chi-square over the ED window `0..=cutoff` plus a pooled tail
/// cell. Window denominators are floored at [`ZERO_NULL_FLOOR`]: the
/// Monte-Carlo null mass comes in atoms of `n / n_null`, and bins holding
/// none or almost none of it cannot support a division.
pub fn chisq_continuous<R: Scalar>(
    ed: &[u64],
    ued: &[R],
    cutoff: usize,
) -> Result<ChiContinuous<R>> {
    if ed.len() != ued.len() {
        return Err(Error::LengthMismatch(format!(
            "ED has {} components, UED has {}",
            ed.len(),
            ued.len()
        )));
    }
    let l = ed.len();
    if l < 2 || cutoff > l - 2 {
        return Err(Error::InvalidConfig(
            "continuous cut-off must leave a nonempty tail".into(),
        ));
    }
    let floor = R::from_f64(ZERO_NULL_FLOOR).expect("floor fits scalar");
    let mut window = R::zero();
    let mut sum_obs = R::zero();
    let mut sum_exp = R::zero();
    for j in 0..=cutoff {
        let o = R::from_u64(ed[j]).expect("count fits scalar");
        let e = ued[j];
        let d = o - e;
        window = window + d * d / e.max(floor);
        sum_obs = sum_obs + o;
        sum_exp = sum_exp + e;
    }
    let tail = ued[cutoff + 1..]
        .iter()
        .fold(R::zero(), |acc, &e| acc + e);
    if tail > R::zero() {
        let d = sum_obs - sum_exp;
        Ok(ChiContinuous {
            value: window + d * d / tail,
            window,
            degenerate_tail: false,
        })
    } else {
        Ok(ChiContinuous {
            value: R::infinity(),
            window,
            degenerate_tail: true,
        })
    }
}

/// Weighted combination `chi_cat / p + chi_cont / q`; an absent portion
/// contributes nothing.
pub fn chisq_weighted<R: Scalar>(chi_cat: R, chi_cont: R, p: usize, q: usize) -> R {
    let mut total = R::zero();
    if p > 0 {
        total = total + chi_cat / R::from_count(p);
    }
    if q > 0 {
        total = total + chi_cont / R::from_count(q);
    }
    total
}

/// Cut-offs and statistics at one reference position.
#[derive(Debug, Clone, PartialEq)]
pub struct TestResult<R> {
    /// Categorical cut-off, `None` when `p = 0`.
    pub cutoff_cat: Option<usize>,
    /// Continuous cut-off (0-based bin index), `None` when `q = 0`.
    pub cutoff_cont: Option<usize>,
    pub chi_cat: R,
    pub chi_cont: R,
    pub chi_weighted: R,
}

/// Statistic-evaluation knobs shared by every center scan.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StatParams {
    /// ED bin count `l` (>= 2 whenever `q >= 1`).
    pub bins: usize,
    /// Use the symmetric continuous cut-off variant.
    pub cutoff_continuous_minus_one: bool,
}

impl Default for StatParams {
    fn default() -> Self {
        Self {
            bins: 10,
            cutoff_continuous_minus_one: false,
        }
    }
}

/// Everything computed for one candidate center row.
#[derive(Debug, Clone, PartialEq)]
pub struct CenterEval<R> {
    /// Row index within the dataset that was scanned.
    pub row: usize,
    pub result: TestResult<R>,
    /// Statistic used for selection and the significance gate: equals
    /// `result.chi_weighted` unless the continuous tail was degenerate, in
    /// which case the finite window part stands in for `chi_cont`.
    pub effective: R,
    pub chi_cont_window: R,
    pub degenerate_tail: bool,
    /// Observed HD counts at this center (empty when `p = 0`).
    pub hd_counts: Vec<u64>,
    /// Observed ED counts at this center (empty when `q = 0`).
    pub ed_counts: Vec<u64>,
    /// UED vector aligned with `ed_counts` (empty when `q = 0`).
    pub ued: Vec<R>,
    /// Bins behind `ed_counts`, `None` when `q = 0`.
    pub bins: Option<Bins<R>>,
}

/// Evaluate the weighted statistic with `row` as the reference position.
/// `uhd` must be the UHD vector for the current `n` when `p > 0`;
/// `null_sample` must be the iteration's null sample when `q > 0`.
pub fn evaluate_center<R: Scalar>(
    ds: &MixedDataset<R>,
    row: usize,
    uhd: Option<&[R]>,
    null_sample: Option<&MixedDataset<R>>,
    params: &StatParams,
) -> Result<CenterEval<R>> {
    let schema = ds.schema();
    let (p, q) = (schema.p(), schema.q());
    let n = ds.n();

    let mut chi_cat = R::zero();
    let mut cutoff_cat = None;
    let mut hd_counts = Vec::new();
    if p > 0 {
        let uhd = uhd.ok_or_else(|| {
            Error::InvalidConfig("UHD vector required when p > 0".into())
        })?;
        hd_counts = hd_vector(ds, ds.cat_row(row))?;
        let r = cutoff_categorical(&hd_counts, uhd);
        chi_cat = chisq_categorical(&hd_counts, uhd, r)?;
        cutoff_cat = Some(r);
    }

    let mut chi_cont = R::zero();
    let mut chi_cont_window = R::zero();
    let mut degenerate_tail = false;
    let mut cutoff_cont = None;
    let mut ed_counts = Vec::new();
    let mut ued = Vec::new();
    let mut bins = None;
    if q > 0 {
        if params.bins < 2 {
            return Err(Error::InvalidConfig(
                "at least 2 ED bins required when q > 0".into(),
            ));
        }
        let null_ds = null_sample.ok_or_else(|| {
            Error::InvalidConfig("null sample required when q > 0".into())
        })?;
        let t = ds.cont_row(row);
        let mut dists = Vec::with_capacity(n);
        let mut d_max = R::zero();
        for i in 0..n {
            let d = euclidean_unchecked(ds.cont_row(i), t);
            if d > d_max {
                d_max = d;
            }
            dists.push(d);
        }
        let b = Bins::equal_width(d_max, params.bins)?;
        let mut counts = vec![0u64; params.bins];
        for &d in &dists {
            counts[b.index_of(d).expect("distance within its own bins")] += 1;
        }
        let nu = ued_vector(null_ds, t, &b, n)?;
        let r = cutoff_continuous(&counts, &nu, params.cutoff_continuous_minus_one);
        let chi = chisq_continuous(&counts, &nu, r)?;
        chi_cont = chi.value;
        chi_cont_window = chi.window;
        degenerate_tail = chi.degenerate_tail;
        cutoff_cont = Some(r);
        ed_counts = counts;
        ued = nu;
        bins = Some(b);
    }

    let chi_weighted = chisq_weighted(chi_cat, chi_cont, p, q);
    let effective = if degenerate_tail {
        chisq_weighted(chi_cat, chi_cont_window, p, q)
    } else {
        chi_weighted
    };
    debug_assert!(effective.is_finite(), "effective statistic must be finite");
    Ok(CenterEval {
        row,
        result: TestResult {
            cutoff_cat,
            cutoff_cont,
            chi_cat,
            chi_cont,
            chi_weighted,
        },
        effective,
        chi_cont_window,
        degenerate_tail,
        hd_counts,
        ed_counts,
        ued,
        bins,
    })
}

/// Largest effective statistic over all rows of `ds` used as candidate
/// centers, processed exactly like a real dataset (own null sample, own
/// bins per center).
pub fn max_effective_statistic<R: Scalar>(
    ds: &MixedDataset<R>,
    params: &StatParams,
    null_cfg: &NullConfig,
    ued_seed: u64,
) -> Result<R> {
    let schema = ds.schema();
    let uhd = if schema.p() > 0 {
        Some(uhd_vector::<R>(schema, ds.n()))
    } else {
        None
    };
    let null_sample = if schema.q() > 0 {
        Some(sample_null(
            ds,
            null_cfg.resolve_size(ds.n()),
            null_cfg.mode,
            ued_seed,
        )?)
    } else {
        None
    };
    let evals: Result<Vec<R>> = (0..ds.n())
        .into_par_iter()
        .map(|i| {
            evaluate_center(ds, i, uhd.as_deref(), null_sample.as_ref(), params)
                .map(|e| e.effective)
        })
        .collect();
    Ok(evals?
        .into_iter()
        .fold(R::neg_infinity(), |a, b| if b > a { b } else { a }))
}

/// Calibrated critical value for the max statistic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Threshold<R> {
    pub alpha: R,
    pub value: R,
    /// Number of null replicates behind the order statistic.
    pub replicates: usize,
    pub seed: u64,
}

/// 1-based order-statistic rank `(B + 1)(1 - alpha)`; errors when it is not
/// attainable as an integer rank.
pub fn order_statistic_rank(replicates: usize, alpha: f64) -> Result<usize> {
    if replicates < 19 {
        return Err(Error::InvalidConfig(
            "calibration needs at least 19 replicates".into(),
        ));
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidConfig("alpha must lie in (0, 1)".into()));
    }
    let exact = (replicates as f64 + 1.0) * (1.0 - alpha);
    let rounded = exact.round();
    if (exact - rounded).abs() > 1e-6 {
        return Err(Error::InvalidConfig(format!(
            "(B + 1)(1 - alpha) = {exact} is not an integer rank; adjust B or alpha"
        )));
    }
    let rank = rounded as usize;
    if rank < 1 || rank > replicates {
        return Err(Error::InvalidConfig(format!(
            "order-statistic rank {rank} outside 1..={replicates}"
        )));
    }
    Ok(rank)
}

/// Monte-Carlo calibration of the significance threshold: draw `replicates`
/// datasets from the uniform null (lattice x `cont_bounds` box), record each
/// one's max effective statistic over its own rows, and return the
/// `(B + 1)(1 - alpha)` order statistic. Replicates are processed with the
/// same machinery as a real dataset; the result is independent of execution
/// order.
pub fn calibrate_threshold<R: Scalar>(
    schema: &Arc<Schema>,
    n: usize,
    cont_bounds: &[(R, R)],
    params: &StatParams,
    null_cfg: &NullConfig,
    alpha: R,
    replicates: usize,
    seed: u64,
) -> Result<Threshold<R>> {
    let rank = order_statistic_rank(replicates, alpha.to_f64().expect("alpha fits f64"))?;
    if n == 0 {
        return Err(Error::EmptyDataset);
    }
    let maxima: Result<Vec<R>> = (0..replicates)
        .into_par_iter()
        .map(|b| {
            let replicate_seed = derive_seed(seed, b as u64);
            let ds = uniform_null_dataset::<R>(schema, n, cont_bounds, replicate_seed)?;
            max_effective_statistic(
                &ds,
                params,
                null_cfg,
                derive_seed(replicate_seed, STREAM_CALIB_UED),
            )
        })
        .collect();
    let mut maxima = maxima?;
    sort_scalars(&mut maxima);
    Ok(Threshold {
        alpha,
        value: maxima[rank - 1],
        replicates,
        seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::CatAttr;
    use approx::assert_relative_eq;

    #[test]
    fn cutoff_categorical_first_crossing_minus_one() {
        // Ratios: j=1: 1.0 (not below), j=2: 0.5 -> cut-off 1.
        assert_eq!(cutoff_categorical(&[3, 4, 1], &[2.0, 4.0, 2.0]), 1);
        // First crossing already at j=1 -> cut-off 0.
        assert_eq!(cutoff_categorical(&[1, 3, 4], &[2.0, 4.0, 2.0]), 0);
    }

    #[test]
    fn cutoff_categorical_fallback_when_curves_equal() {
        assert_eq!(cutoff_categorical(&[2, 4, 2], &[2.0, 4.0, 2.0]), 1);
    }

    #[test]
    fn cutoff_continuous_first_crossing() {
        // 0-based: bin 1 ratio 1.5, bin 2 ratio 0 -> cut-off 2.
        assert_eq!(
            cutoff_continuous(&[5, 3, 0, 1], &[2.0, 2.0, 2.0, 3.0], false),
            2
        );
        // Crossing immediately after the excluded first bin.
        assert_eq!(
            cutoff_continuous(&[4, 1, 9, 9], &[2.0, 2.0, 2.0, 2.0], false),
            1
        );
    }

    #[test]
    fn cutoff_continuous_fallback_and_zero_null_skip() {
        // Observed above null everywhere after bin 0 -> fallback l - 2.
        assert_eq!(
            cutoff_continuous(&[1, 5, 5, 5], &[2.0, 2.0, 2.0, 2.0], false),
            2
        );
        // Zero null bins are skipped in the scan.
        assert_eq!(
            cutoff_continuous(&[5, 0, 3, 1], &[2.0, 0.0, 4.0, 3.0], false),
            2
        );
    }

    #[test]
    fn cutoff_continuous_minus_one_variant() {
        assert_eq!(
            cutoff_continuous(&[5, 3, 0, 1], &[2.0, 2.0, 2.0, 3.0], true),
            1
        );
    }

    #[test]
    fn chisq_categorical_hand_computed() {
        // (3-2)^2/2 + 0 + (7-6)^2/2 = 1.
        let chi = chisq_categorical(&[3, 4, 1], &[2.0, 4.0, 2.0], 1).unwrap();
        assert_relative_eq!(chi, 1.0, max_relative = 1e-12);
    }

    #[test]
    fn chisq_categorical_zero_at_equality() {
        for cutoff in 0..=1 {
            let chi = chisq_categorical(&[2, 4, 2], &[2.0, 4.0, 2.0], cutoff).unwrap();
            assert_eq!(chi, 0.0);
        }
    }

    #[test]
    fn chisq_categorical_point_mass_closed_form() {
        // n=8 rows all at the reference, lattice of size 4: window term
        // (8-2)^2/2 = 18, tail term (8-2)^2/6 = 6.
        let uhd = [2.0, 4.0, 2.0];
        let chi = chisq_categorical(&[8, 0, 0], &uhd, 0).unwrap();
        assert_relative_eq!(chi, 24.0, max_relative = 1e-12);
    }

    #[test]
    fn chisq_categorical_rejects_empty_tail() {
        assert!(chisq_categorical(&[1, 2, 3], &[1.0, 2.0, 3.0], 2).is_err());
    }

    #[test]
    fn chisq_continuous_hand_computed() {
        // 4.5 + 0.5 + 2.0 + (8-6)^2/3 = 25/3.
        let chi = chisq_continuous(&[5, 3, 0, 1], &[2.0, 2.0, 2.0, 3.0], 2).unwrap();
        assert!(!chi.degenerate_tail);
        assert_relative_eq!(chi.value, 25.0 / 3.0, max_relative = 1e-12);
    }

    #[test]
    fn chisq_continuous_zero_at_equality() {
        let chi = chisq_continuous(&[2, 2, 2, 2], &[2.0, 2.0, 2.0, 2.0], 1).unwrap();
        assert_eq!(chi.value, 0.0);
    }

    #[test]
    fn chisq_continuous_zero_null_window_uses_floor() {
        // Window bin with null mass 0 and observed 2 contributes 2^2/0.5 = 8.
        let chi = chisq_continuous(&[2, 2, 0, 2], &[2.0, 0.0, 2.0, 2.0], 1).unwrap();
        let tail_term = (4.0f64 - 2.0).powi(2) / 4.0;
        assert_relative_eq!(chi.value, 8.0 + tail_term, max_relative = 1e-12);
    }

    #[test]
    fn chisq_continuous_degenerate_tail_is_flagged() {
        let chi = chisq_continuous(&[3, 1, 0, 0], &[2.0f64, 1.0, 0.0, 0.0], 1).unwrap();
        assert!(chi.degenerate_tail);
        assert!(chi.value.is_infinite());
        assert_relative_eq!(chi.window, 0.5, max_relative = 1e-12);
    }

    #[test]
    fn chisq_weighted_combines_and_degenerates() {
        let w = chisq_weighted(1.0, 25.0 / 3.0, 2, 4);
        assert_relative_eq!(w, 31.0 / 12.0, max_relative = 1e-12);
        assert_eq!(chisq_weighted(0.0, 0.0, 2, 4), 0.0);
        assert_relative_eq!(chisq_weighted(3.0, 0.0, 3, 0), 1.0, max_relative = 1e-12);
        assert_relative_eq!(chisq_weighted(0.0, 6.0, 0, 3), 2.0, max_relative = 1e-12);
    }

    #[test]
    fn order_statistic_rank_arithmetic() {
        assert_eq!(order_statistic_rank(19, 0.05).unwrap(), 19);
        assert_eq!(order_statistic_rank(199, 0.05).unwrap(), 190);
        assert!(order_statistic_rank(100, 0.05).is_err());
        assert!(order_statistic_rank(10, 0.05).is_err());
    }

    fn small_schema() -> Arc<Schema> {
        Arc::new(
            Schema::new(
                vec![
                    CatAttr {
                        name: "a".into(),
                        levels: vec!["0".into(), "1".into(), "2".into()],
                    },
                    CatAttr {
                        name: "b".into(),
                        levels: vec!["0".into(), "1".into(), "2".into()],
                    },
                ],
                vec!["z".into()],
            )
            .unwrap(),
        )
    }

    #[test]
    fn calibrate_threshold_is_deterministic() {
        let schema = small_schema();
        let params = StatParams::default();
        let null_cfg = NullConfig {
            size: Some(500),
            ..NullConfig::default()
        };
        let a = calibrate_threshold::<f64>(
            &schema, 20, &[(0.0, 1.0)], &params, &null_cfg, 0.05, 19, 77,
        )
        .unwrap();
        let b = calibrate_threshold::<f64>(
            &schema, 20, &[(0.0, 1.0)], &params, &null_cfg, 0.05, 19, 77,
        )
        .unwrap();
        assert_eq!(a.value, b.value);
        assert!(a.value > 0.0);
    }

    #[test]
    fn chisq_zero_only_when_window_matches() {
        // Zero iff window cells and window sums agree; a tail-only
        // discrepancy keeps the statistic at zero.
        let uhd = [2.0, 4.0, 4.0, 2.0];
        let equal_window = [2u64, 4, 2, 4];
        let chi = chisq_categorical(&equal_window, &uhd, 1).unwrap();
        assert_eq!(chi, 0.0);
        // Perturbing a window cell makes it strictly positive.
        let perturbed = [3u64, 3, 2, 4];
        let chi = chisq_categorical(&perturbed, &uhd, 1).unwrap();
        assert!(chi > 0.0);
    }

    #[test]
    fn duplicating_the_reference_never_decreases_chi() {
        // Random datasets on a lattice large enough that the reference row
        // over-occupies its cell; duplicating the reference then inflates
        // the window-0 statistic monotonically.
        use crate::nullmodel::uhd_vector;
        use rand::Rng;
        let schema = Arc::new(
            Schema::new(
                vec![
                    CatAttr {
                        name: "a".into(),
                        levels: (0..4).map(|v| v.to_string()).collect(),
                    },
                    CatAttr {
                        name: "b".into(),
                        levels: (0..4).map(|v| v.to_string()).collect(),
                    },
                    CatAttr {
                        name: "c".into(),
                        levels: (0..4).map(|v| v.to_string()).collect(),
                    },
                ],
                vec![],
            )
            .unwrap(),
        );
        let mut rng = crate::rng::seeded_rng(31);
        for _ in 0..20 {
            let n0 = rng.random_range(5..25);
            let mut cats: Vec<u16> = Vec::new();
            for _ in 0..n0 {
                for _ in 0..3 {
                    cats.push(rng.random_range(0..4u16));
                }
            }
            let reference: Vec<u16> = cats[..3].to_vec();
            let mut previous = f64::NEG_INFINITY;
            for dup in 0..6 {
                let mut all = cats.clone();
                for _ in 0..dup {
                    all.extend_from_slice(&reference);
                }
                let ds =
                    MixedDataset::<f64>::new(Arc::clone(&schema), all, vec![]).unwrap();
                let hd = hd_vector(&ds, &reference).unwrap();
                let uhd = uhd_vector::<f64>(&schema, ds.n());
                let chi = chisq_categorical(&hd, &uhd, 0).unwrap();
                assert!(
                    chi >= previous - 1e-9,
                    "chi dropped from {previous} to {chi} after duplicating"
                );
                previous = chi;
            }
        }
    }
}
