//! Schema definition, dataset ingestion, and validation for mixed
//! categorical/continuous data.
//!
//! A [`Schema`] declares `p` categorical attributes (each with its full level
//! set) and `q` continuous attributes. The declared level sets define the
//! categorical lattice; they are authoritative even when the data does not
//! use every level. A [`MixedDataset`] stores `n` rows of level codes and
//! finite reals; missing values are rejected at load time.

use std::collections::HashMap;
use std::io::{Read, Write};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// One categorical attribute: a name plus its declared level set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatAttr {
    pub name: String,
    pub levels: Vec<String>,
}

/// Attribute layout of a mixed dataset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Schema {
    cat_attrs: Vec<CatAttr>,
    cont_attrs: Vec<String>,
}

/// On-disk JSON form of a schema.
#[derive(Serialize, Deserialize)]
struct SchemaDoc {
    #[serde(default)]
    categorical: Vec<CatAttr>,
    #[serde(default)]
    continuous: Vec<String>,
}

impl Schema {
    /// Build a schema, enforcing unique names, `m_j >= 2`, and `p + q >= 1`.
    pub fn new(cat_attrs: Vec<CatAttr>, cont_attrs: Vec<String>) -> Result<Self> {
        if cat_attrs.is_empty() && cont_attrs.is_empty() {
            return Err(Error::EmptySchema);
        }
        let mut seen = HashMap::new();
        for name in cat_attrs
            .iter()
            .map(|a| a.name.as_str())
            .chain(cont_attrs.iter().map(|s| s.as_str()))
        {
            if seen.insert(name.to_owned(), ()).is_some() {
                return Err(Error::DuplicateAttribute(name.to_owned()));
            }
        }
        for attr in &cat_attrs {
            if attr.levels.len() < 2 {
                return Err(Error::TooFewLevels {
                    name: attr.name.clone(),
                    levels: attr.levels.len(),
                });
            }
            if attr.levels.len() > u16::MAX as usize {
                return Err(Error::InvalidConfig(format!(
                    "attribute `{}` declares more than {} levels",
                    attr.name,
                    u16::MAX
                )));
            }
            let mut level_seen = HashMap::new();
            for level in &attr.levels {
                if level_seen.insert(level.clone(), ()).is_some() {
                    return Err(Error::SchemaFormat(format!(
                        "attribute `{}` declares level `{}` twice",
                        attr.name, level
                    )));
                }
            }
        }
        Ok(Self {
            cat_attrs,
            cont_attrs,
        })
    }

    /// Number of categorical attributes.
    pub fn p(&self) -> usize {
        self.cat_attrs.len()
    }

    /// Number of continuous attributes.
    pub fn q(&self) -> usize {
        self.cont_attrs.len()
    }

    pub fn cat_attrs(&self) -> &[CatAttr] {
        &self.cat_attrs
    }

    pub fn cont_attrs(&self) -> &[String] {
        &self.cont_attrs
    }

    /// Level count `m_j` of categorical attribute `j`.
    pub fn level_count(&self, j: usize) -> usize {
        self.cat_attrs[j].levels.len()
    }

    /// Per-attribute level counts `(m_1, ..., m_p)`.
    pub fn level_counts(&self) -> Vec<usize> {
        self.cat_attrs.iter().map(|a| a.levels.len()).collect()
    }

    /// Lattice size `M = prod m_j` as a scalar (`1` when `p = 0`).
    pub fn lattice_size<R: Scalar>(&self) -> R {
        self.cat_attrs
            .iter()
            .fold(R::one(), |acc, a| acc * R::from_count(a.levels.len()))
    }

    /// Exact lattice size, or `None` on u128 overflow.
    pub fn lattice_size_exact(&self) -> Option<u128> {
        self.cat_attrs
            .iter()
            .try_fold(1u128, |acc, a| acc.checked_mul(a.levels.len() as u128))
    }

    /// Parse the JSON schema document.
    pub fn from_json(text: &str) -> Result<Self> {
        let doc: SchemaDoc =
            serde_json::from_str(text).map_err(|e| Error::SchemaFormat(e.to_string()))?;
        Self::new(doc.categorical, doc.continuous)
    }

    /// Serialize to the JSON schema document.
    pub fn to_json(&self) -> String {
        let doc = SchemaDoc {
            categorical: self.cat_attrs.clone(),
            continuous: self.cont_attrs.clone(),
        };
        serde_json::to_string_pretty(&doc).expect("schema serializes")
    }

    /// Schema containing only the categorical attributes.
    pub fn categorical_only(&self) -> Result<Schema> {
        Schema::new(self.cat_attrs.clone(), Vec::new())
    }

    /// Schema containing only the continuous attributes.
    pub fn continuous_only(&self) -> Result<Schema> {
        Schema::new(Vec::new(), self.cont_attrs.clone())
    }
}

/// Parse a schema document (see [`Schema::from_json`] for the format).
pub fn parse_schema(text: &str) -> Result<Schema> {
    Schema::from_json(text)
}

/// `n` rows of (categorical level codes, finite continuous values) plus the
/// schema they conform to. Immutable after construction; row order is
/// preserved exactly and all downstream tie-breaking depends on it.
#[derive(Debug, Clone, PartialEq)]
pub struct MixedDataset<R> {
    schema: Arc<Schema>,
    /// `n x p`, row-major level codes.
    cats: Vec<u16>,
    /// `n x q`, row-major continuous values.
    conts: Vec<R>,
    n: usize,
}

impl<R: Scalar> MixedDataset<R> {
    /// Build from raw row-major storage, checking code validity and
    /// finiteness. `n = 0` is allowed here (an empty working set); loaders
    /// reject it.
    pub fn new(schema: Arc<Schema>, cats: Vec<u16>, conts: Vec<R>) -> Result<Self> {
        let (p, q) = (schema.p(), schema.q());
        let n = if p > 0 {
            if cats.len() % p != 0 {
                return Err(Error::LengthMismatch(format!(
                    "categorical storage {} not divisible by p={}",
                    cats.len(),
                    p
                )));
            }
            cats.len() / p
        } else if q > 0 {
            if conts.len() % q != 0 {
                return Err(Error::LengthMismatch(format!(
                    "continuous storage {} not divisible by q={}",
                    conts.len(),
                    q
                )));
            }
            conts.len() / q
        } else {
            0
        };
        if p > 0 && q > 0 && conts.len() != n * q {
            return Err(Error::LengthMismatch(format!(
                "expected {} continuous values, got {}",
                n * q,
                conts.len()
            )));
        }
        for (i, row) in cats.chunks(p.max(1)).enumerate() {
            if p == 0 {
                break;
            }
            for (j, &code) in row.iter().enumerate() {
                if code as usize >= schema.level_count(j) {
                    return Err(Error::UnknownLevel {
                        row: i,
                        attr: schema.cat_attrs()[j].name.clone(),
                        value: format!("#{code}"),
                    });
                }
            }
        }
        if let Some(bad) = conts.iter().position(|v| !v.is_finite()) {
            let (row, j) = (bad / q.max(1), bad % q.max(1));
            return Err(Error::BadNumeric {
                row,
                attr: schema.cont_attrs()[j].clone(),
                value: format!("{}", conts[bad]),
            });
        }
        Ok(Self {
            schema,
            cats,
            conts,
            n,
        })
    }

    pub fn schema(&self) -> &Arc<Schema> {
        &self.schema
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Level codes of row `i`.
    pub fn cat_row(&self, i: usize) -> &[u16] {
        let p = self.schema.p();
        &self.cats[i * p..(i + 1) * p]
    }

    /// Continuous values of row `i`.
    pub fn cont_row(&self, i: usize) -> &[R] {
        let q = self.schema.q();
        &self.conts[i * q..(i + 1) * q]
    }

    /// Copy of the rows selected by `idx`, in the given order.
    pub fn subset(&self, idx: &[usize]) -> MixedDataset<R> {
        let (p, q) = (self.schema.p(), self.schema.q());
        let mut cats = Vec::with_capacity(idx.len() * p);
        let mut conts = Vec::with_capacity(idx.len() * q);
        for &i in idx {
            cats.extend_from_slice(self.cat_row(i));
            conts.extend_from_slice(self.cont_row(i));
        }
        MixedDataset {
            schema: Arc::clone(&self.schema),
            cats,
            conts,
            n: idx.len(),
        }
    }

    /// Per-attribute observed `(min, max)` over the continuous columns.
    pub fn cont_bounds(&self) -> Result<Vec<(R, R)>> {
        if self.n == 0 {
            return Err(Error::EmptyDataset);
        }
        let q = self.schema.q();
        let mut bounds = vec![(R::infinity(), R::neg_infinity()); q];
        for i in 0..self.n {
            for (k, &v) in self.cont_row(i).iter().enumerate() {
                if v < bounds[k].0 {
                    bounds[k].0 = v;
                }
                if v > bounds[k].1 {
                    bounds[k].1 = v;
                }
            }
        }
        Ok(bounds)
    }

    /// Projection onto the categorical attributes only.
    pub fn categorical_only(&self) -> Result<MixedDataset<R>> {
        let schema = Arc::new(self.schema.categorical_only()?);
        MixedDataset::new(schema, self.cats.clone(), Vec::new())
    }

    /// Projection onto the continuous attributes only.
    pub fn continuous_only(&self) -> Result<MixedDataset<R>> {
        let schema = Arc::new(self.schema.continuous_only()?);
        MixedDataset::new(schema, Vec::new(), self.conts.clone())
    }

    /// Write as CSV with a header row, schema column order.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        let header: Vec<&str> = self
            .schema
            .cat_attrs()
            .iter()
            .map(|a| a.name.as_str())
            .chain(self.schema.cont_attrs().iter().map(|s| s.as_str()))
            .collect();
        w.write_record(&header)?;
        for i in 0..self.n {
            let mut rec = Vec::with_capacity(header.len());
            for (j, &code) in self.cat_row(i).iter().enumerate() {
                rec.push(self.schema.cat_attrs()[j].levels[code as usize].clone());
            }
            for v in self.cont_row(i) {
                rec.push(format!("{v}"));
            }
            w.write_record(&rec)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Load a dataset from delimited text. The header must name exactly the
/// schema's attributes (any order); categorical cells are mapped to level
/// codes, continuous cells must parse to finite numbers.
pub fn load_dataset<R: Scalar, Rd: Read>(reader: Rd, schema: &Arc<Schema>) -> Result<MixedDataset<R>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let header = rdr.headers()?.clone();
    let mut col_of = HashMap::new();
    for (idx, name) in header.iter().enumerate() {
        if col_of.insert(name.to_owned(), idx).is_some() {
            return Err(Error::ColumnMismatch(format!("duplicate column `{name}`")));
        }
    }
    let want = schema.p() + schema.q();
    if col_of.len() != want {
        return Err(Error::ColumnMismatch(format!(
            "header has {} column(s), schema declares {}",
            col_of.len(),
            want
        )));
    }
    let locate = |name: &str| -> Result<usize> {
        col_of
            .get(name)
            .copied()
            .ok_or_else(|| Error::ColumnMismatch(format!("missing column `{name}`")))
    };
    let cat_cols: Vec<usize> = schema
        .cat_attrs()
        .iter()
        .map(|a| locate(&a.name))
        .collect::<Result<_>>()?;
    let cont_cols: Vec<usize> = schema
        .cont_attrs()
        .iter()
        .map(|s| locate(s))
        .collect::<Result<_>>()?;
    let level_maps: Vec<HashMap<&str, u16>> = schema
        .cat_attrs()
        .iter()
        .map(|a| {
            a.levels
                .iter()
                .enumerate()
                .map(|(c, l)| (l.as_str(), c as u16))
                .collect()
        })
        .collect();

    let mut cats = Vec::new();
    let mut conts = Vec::new();
    let mut n = 0usize;
    for (row, record) in rdr.records().enumerate() {
        let record = record?;
        if record.len() != header.len() {
            return Err(Error::ColumnMismatch(format!(
                "row {row} has {} field(s), header has {}",
                record.len(),
                header.len()
            )));
        }
        for (j, &col) in cat_cols.iter().enumerate() {
            let cell = &record[col];
            match level_maps[j].get(cell) {
                Some(&code) => cats.push(code),
                None if cell.is_empty() => {
                    return Err(Error::MissingValue {
                        row,
                        attr: schema.cat_attrs()[j].name.clone(),
                    })
                }
                None => {
                    return Err(Error::UnknownLevel {
                        row,
                        attr: schema.cat_attrs()[j].name.clone(),
                        value: cell.to_owned(),
                    })
                }
            }
        }
        for (k, &col) in cont_cols.iter().enumerate() {
            let cell = &record[col];
            if cell.is_empty() {
                return Err(Error::MissingValue {
                    row,
                    attr: schema.cont_attrs()[k].clone(),
                });
            }
            let parsed: f64 = cell.parse().map_err(|_| Error::BadNumeric {
                row,
                attr: schema.cont_attrs()[k].clone(),
                value: cell.to_owned(),
            })?;
            if !parsed.is_finite() {
                return Err(Error::BadNumeric {
                    row,
                    attr: schema.cont_attrs()[k].clone(),
                    value: cell.to_owned(),
                });
            }
            conts.push(R::from_f64(parsed).expect("finite f64 converts"));
        }
        n += 1;
    }
    if n == 0 {
        return Err(Error::EmptyDataset);
    }
    MixedDataset::new(Arc::clone(schema), cats, conts)
}

/// Validation outcome: hard violations plus advisory warnings, with
/// per-attribute usage summaries.
#[derive(Debug, Clone, Default)]
pub struct ValidationReport {
    pub violations: Vec<String>,
    pub warnings: Vec<String>,
    /// Per categorical attribute: observed count of each declared level.
    pub level_usage: Vec<Vec<u64>>,
    /// Per continuous attribute: observed (min, max), `None` when `n = 0`.
    pub cont_ranges: Vec<Option<(f64, f64)>>,
}

impl ValidationReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Check the dataset invariants and summarize attribute usage. Unused
/// declared levels are a warning, not an error: the declared level sets are
/// what define the lattice size.
pub fn validate<R: Scalar>(ds: &MixedDataset<R>) -> ValidationReport {
    let schema = ds.schema();
    let mut report = ValidationReport::default();
    if ds.n() == 0 {
        report.violations.push("empty dataset".to_owned());
    }
    for (j, attr) in schema.cat_attrs().iter().enumerate() {
        let mut usage = vec![0u64; attr.levels.len()];
        for i in 0..ds.n() {
            usage[ds.cat_row(i)[j] as usize] += 1;
        }
        let used = usage.iter().filter(|&&c| c > 0).count();
        if ds.n() > 0 && used < attr.levels.len() {
            report.warnings.push(format!(
                "attribute `{}` uses {used} of {} declared levels; unused levels inflate the lattice size",
                attr.name,
                attr.levels.len()
            ));
        }
        report.level_usage.push(usage);
    }
    for (k, name) in schema.cont_attrs().iter().enumerate() {
        if ds.n() == 0 {
            report.cont_ranges.push(None);
            continue;
        }
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..ds.n() {
            let v = ds.cont_row(i)[k].to_f64().unwrap_or(f64::NAN);
            if !v.is_finite() {
                report
                    .violations
                    .push(format!("attribute `{name}` has a non-finite value in row {i}"));
            }
            lo = lo.min(v);
            hi = hi.max(v);
        }
        report.cont_ranges.push(Some((lo, hi)));
    }
    report
}
