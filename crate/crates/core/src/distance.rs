//! Hamming and Euclidean distances and their frequency vectors.
//!
//! A HD vector counts, for a categorical reference position, how many rows
//! sit at each Hamming distance 0..=p. An ED vector bins the Euclidean
//! distances from a continuous reference position into `l` equal-width
//! intervals over `[0, d_max]`, where `d_max` is the largest observed
//! distance to that reference. The first bin is closed on both sides so the
//! reference itself is always counted; interior bins are `(lo, hi]`.

use crate::dataset::MixedDataset;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Hamming distance: the number of attributes on which two categorical
/// positions differ.
pub fn hamming(a: &[u16], b: &[u16]) -> Result<usize> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch(format!(
            "hamming: {} vs {}",
            a.len(),
            b.len()
        )));
    }
    Ok(hamming_unchecked(a, b))
}

#[inline]
pub(crate) fn hamming_unchecked(a: &[u16], b: &[u16]) -> usize {
    a.iter().zip(b).filter(|(x, y)| x != y).count()
}

/// Euclidean distance between two continuous positions.
pub fn euclidean<R: Scalar>(a: &[R], b: &[R]) -> Result<R> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch(format!(
            "euclidean: {} vs {}",
            a.len(),
            b.len()
        )));
    }
    Ok(euclidean_unchecked(a, b))
}

#[inline]
pub(crate) fn euclidean_unchecked<R: Scalar>(a: &[R], b: &[R]) -> R {
    let mut acc = R::zero();
    for (&x, &y) in a.iter().zip(b) {
        let d = x - y;
        acc = acc + d * d;
    }
    acc.sqrt()
}

/// Equal-width distance bins: `l + 1` ascending edges starting at 0.
///
/// Bin `j` (0-based) covers `(edges[j], edges[j+1]]`, except bin 0 which
/// also includes 0. All edges collapse to 0 when every observed distance is
/// zero; every distance then falls in bin 0.
#[derive(Debug, Clone, PartialEq)]
pub struct Bins<R> {
    edges: Vec<R>,
}

impl<R: Scalar> Bins<R> {
    /// `l` equal-width bins over `[0, d_max]`.
    pub fn equal_width(d_max: R, l: usize) -> Result<Self> {
        if l == 0 {
            return Err(Error::InvalidConfig("bin count must be >= 1".into()));
        }
        if !(d_max >= R::zero()) {
            return Err(Error::InvalidConfig("bin range must be nonnegative".into()));
        }
        let edges = (0..=l)
            .map(|i| d_max * (R::from_count(i) / R::from_count(l)))
            .collect();
        Ok(Self { edges })
    }

    /// Number of bins `l`.
    pub fn count(&self) -> usize {
        self.edges.len() - 1
    }

    pub fn edges(&self) -> &[R] {
        &self.edges
    }

    /// Upper edge of bin `j` (0-based).
    pub fn upper_edge(&self, j: usize) -> R {
        self.edges[j + 1]
    }

    /// Bin index for a distance, or `None` when it exceeds the last edge.
    pub fn index_of(&self, d: R) -> Option<usize> {
        let last = *self.edges.last().expect("at least one edge");
        if d > last {
            return None;
        }
        if d <= self.edges[1] {
            return Some(0);
        }
        // Interior bins are right-closed: find the first edge >= d.
        let mut lo = 1usize;
        let mut hi = self.count();
        while lo < hi {
            let mid = (lo + hi) / 2;
            if self.edges[mid] >= d {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        Some(lo - 1)
    }

    /// Bin index with overflow clamped into the last bin.
    pub fn index_clamped(&self, d: R) -> usize {
        self.index_of(d).unwrap_or(self.count() - 1)
    }
}

/// HD vector: counts of rows at each Hamming distance from `cat_ref`.
pub fn hd_vector<R: Scalar>(ds: &MixedDataset<R>, cat_ref: &[u16]) -> Result<Vec<u64>> {
    let p = ds.schema().p();
    if cat_ref.len() != p {
        return Err(Error::LengthMismatch(format!(
            "reference has {} categorical values, schema declares {p}",
            cat_ref.len()
        )));
    }
    let mut counts = vec![0u64; p + 1];
    for i in 0..ds.n() {
        counts[hamming_unchecked(ds.cat_row(i), cat_ref)] += 1;
    }
    Ok(counts)
}

/// Equal-width bins over the observed distance range from `cont_ref`.
pub fn make_bins<R: Scalar>(ds: &MixedDataset<R>, cont_ref: &[R], l: usize) -> Result<Bins<R>> {
    let q = ds.schema().q();
    if cont_ref.len() != q {
        return Err(Error::LengthMismatch(format!(
            "reference has {} continuous values, schema declares {q}",
            cont_ref.len()
        )));
    }
    let mut d_max = R::zero();
    for i in 0..ds.n() {
        let d = euclidean_unchecked(ds.cont_row(i), cont_ref);
        if d > d_max {
            d_max = d;
        }
    }
    Bins::equal_width(d_max, l)
}

/// ED vector: counts of rows whose distance to `cont_ref` falls in each bin.
/// A distance beyond the last edge signals a bins/data mismatch.
pub fn ed_vector<R: Scalar>(
    ds: &MixedDataset<R>,
    cont_ref: &[R],
    bins: &Bins<R>,
) -> Result<Vec<u64>> {
    let q = ds.schema().q();
    if cont_ref.len() != q {
        return Err(Error::LengthMismatch(format!(
            "reference has {} continuous values, schema declares {q}",
            cont_ref.len()
        )));
    }
    let mut counts = vec![0u64; bins.count()];
    for i in 0..ds.n() {
        let d = euclidean_unchecked(ds.cont_row(i), cont_ref);
        match bins.index_of(d) {
            Some(j) => counts[j] += 1,
            None => {
                return Err(Error::DistanceOutOfRange {
                    distance: d.to_f64().unwrap_or(f64::NAN),
                    edge: bins.edges().last().unwrap().to_f64().unwrap_or(f64::NAN),
                })
            }
        }
    }
    Ok(counts)
}

/// Both frequency vectors for one reference position `(S, T)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceProfile<R> {
    pub cat_ref: Vec<u16>,
    pub cont_ref: Vec<R>,
    pub hd_counts: Vec<u64>,
    pub ed_counts: Vec<u64>,
    pub bins: Bins<R>,
}

impl<R: Scalar> DistanceProfile<R> {
    pub fn compute(
        ds: &MixedDataset<R>,
        cat_ref: &[u16],
        cont_ref: &[R],
        l: usize,
    ) -> Result<Self> {
        let hd_counts = hd_vector(ds, cat_ref)?;
        let bins = make_bins(ds, cont_ref, l)?;
        let ed_counts = ed_vector(ds, cont_ref, &bins)?;
        Ok(Self {
            cat_ref: cat_ref.to_vec(),
            cont_ref: cont_ref.to_vec(),
            hd_counts,
            ed_counts,
            bins,
        })
    }
}
