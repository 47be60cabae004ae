//! `cluster` subcommand: run the engine on a CSV dataset, write labels,
//! a run manifest, and optional per-iteration diagnostics.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{bail, Context, Result};

use mixedclust_core::cluster::run_clustering;
use mixedclust_core::dataset::{load_dataset, parse_schema, validate, MixedDataset};
use mixedclust_core::ClusterResult64;

use crate::manifest::{resolve_engine, RunManifest};
use crate::opts::ClusterArgs;

pub fn run(args: ClusterArgs) -> Result<()> {
    let base = match &args.manifest {
        Some(path) => Some(RunManifest::load(path)?),
        None => None,
    };
    let input = args
        .input
        .clone()
        .or_else(|| base.as_ref().map(|m| m.input.clone()))
        .context("--input is required (or supply --manifest)")?;
    let schema_path = args
        .schema
        .clone()
        .or_else(|| base.as_ref().map(|m| m.schema.clone()))
        .context("--schema is required (or supply --manifest)")?;
    let out = args
        .out
        .clone()
        .or_else(|| base.as_ref().map(|m| m.out.clone()))
        .context("--out is required (or supply --manifest)")?;
    let diagnostics = args
        .diagnostics
        .clone()
        .or_else(|| base.as_ref().and_then(|m| m.diagnostics.clone()));
    let cfg = resolve_engine(&args.engine, base.as_ref())?;

    let schema_text = std::fs::read_to_string(&schema_path)
        .with_context(|| format!("cannot read schema file `{}`", schema_path.display()))?;
    let schema = Arc::new(parse_schema(&schema_text)?);
    let file = std::fs::File::open(&input)
        .with_context(|| format!("cannot open data file `{}`", input.display()))?;
    let ds: MixedDataset<f64> = load_dataset(file, &schema)?;

    let report = validate(&ds);
    if !report.is_clean() {
        bail!("dataset validation failed: {}", report.violations.join("; "));
    }
    for warning in &report.warnings {
        eprintln!("warning: {warning}");
    }
    if let Ok(bounds) = ds.cont_bounds() {
        for (k, (lo, hi)) in bounds.iter().enumerate() {
            if lo >= hi {
                eprintln!(
                    "warning: attribute `{}` is constant; it stays constant in the null sample",
                    ds.schema().cont_attrs()[k]
                );
            }
        }
    }

    let result = run_clustering(&ds, &cfg)?;
    eprintln!(
        "{} cluster(s), {} unassigned row(s), {} iteration(s)",
        result.clusters.len(),
        result.unassigned.len(),
        result.iterations.len()
    );

    write_labels(&out, &result)?;
    let manifest = RunManifest {
        command: "cluster".into(),
        input,
        schema: schema_path,
        out: out.clone(),
        diagnostics: diagnostics.clone(),
        rows: ds.n(),
        bins: cfg.bins,
        alpha: cfg.alpha,
        calib_replicates: cfg.calib_replicates,
        seed: cfg.seed,
        null_seed: cfg.effective_null_seed(),
        calib_seed: cfg.effective_calib_seed(),
        null_mode: cfg.null_mode,
        null_size: cfg.null_config().resolve_size(ds.n()),
        fixed_threshold: cfg.fixed_threshold,
        cutoff_continuous_minus_one: cfg.cutoff_continuous_minus_one,
        jump_factor: cfg.jump_factor,
        membership: cfg.membership,
        min_cluster_size: cfg.min_cluster_size,
        threads: args.engine.threads,
    };
    manifest.write(&manifest_path(&out))?;
    if let Some(dir) = &diagnostics {
        write_diagnostics(dir, &result)?;
    }
    Ok(())
}

pub fn manifest_path(out: &Path) -> PathBuf {
    let stem = out
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "run".into());
    out.with_file_name(format!("{stem}.manifest.json"))
}

fn write_labels(path: &Path, result: &ClusterResult64) -> Result<()> {
    let mut w = csv::Writer::from_path(path)
        .with_context(|| format!("cannot write labels file `{}`", path.display()))?;
    w.write_record(["row_id", "cluster_label"])?;
    for (row, label) in result.labels().iter().enumerate() {
        w.write_record([row.to_string(), label.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

/// Per-iteration curve dumps: the observed/null HD and ED curves at each
/// winning center, plus the sorted-distance CDF the continuous radius was
/// read from.
fn write_diagnostics(dir: &Path, result: &ClusterResult64) -> Result<()> {
    std::fs::create_dir_all(dir)
        .with_context(|| format!("cannot create diagnostics dir `{}`", dir.display()))?;

    let mut summary = csv::Writer::from_path(dir.join("iterations.csv"))?;
    summary.write_record([
        "iteration",
        "n_remaining",
        "center_row",
        "cutoff_cat",
        "cutoff_cont",
        "radius_cat",
        "radius_cont",
        "chi_cat",
        "chi_cont",
        "chi_weighted",
        "statistic",
        "threshold",
        "extracted",
    ])?;
    for it in &result.iterations {
        summary.write_record([
            it.iteration.to_string(),
            it.n_remaining.to_string(),
            it.center_row.to_string(),
            opt(it.stat.cutoff_cat),
            opt(it.stat.cutoff_cont),
            it.radius_cat.to_string(),
            format!("{}", it.radius_cont),
            format!("{}", it.stat.chi_cat),
            format!("{}", it.stat.chi_cont),
            format!("{}", it.stat.chi_weighted),
            format!("{}", it.max_statistic),
            format!("{}", it.threshold),
            it.extracted.len().to_string(),
        ])?;

        let tag = format!("iter_{:03}", it.iteration);
        if !it.hd_counts.is_empty() {
            let mut w = csv::Writer::from_path(dir.join(format!("{tag}_hd.csv")))?;
            w.write_record(["distance", "observed", "expected"])?;
            for (j, (&o, &e)) in it.hd_counts.iter().zip(&it.uhd).enumerate() {
                w.write_record([j.to_string(), o.to_string(), format!("{e}")])?;
            }
            w.flush()?;
        }
        if let Some(bins) = &it.bins {
            let mut w = csv::Writer::from_path(dir.join(format!("{tag}_ed.csv")))?;
            w.write_record(["bin", "lower", "upper", "observed", "expected"])?;
            for (j, (&o, &e)) in it.ed_counts.iter().zip(&it.ued).enumerate() {
                w.write_record([
                    j.to_string(),
                    format!("{}", bins.edges()[j]),
                    format!("{}", bins.edges()[j + 1]),
                    o.to_string(),
                    format!("{e}"),
                ])?;
            }
            w.flush()?;

            let mut w = csv::Writer::from_path(dir.join(format!("{tag}_ed_cdf.csv")))?;
            w.write_record(["rank", "distance", "cdf"])?;
            let n = it.sorted_eds.len();
            for (rank, &d) in it.sorted_eds.iter().enumerate() {
                w.write_record([
                    (rank + 1).to_string(),
                    format!("{d}"),
                    format!("{}", (rank + 1) as f64 / n as f64),
                ])?;
            }
            w.flush()?;
        }
    }
    summary.flush()?;
    Ok(())
}

fn opt(v: Option<usize>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}
