//! `bench` subcommand: sweep the synthetic table settings and write a
//! replicate-level report with per-setting mean/std summary rows.

use anyhow::{Context, Result};

use mixedclust_core::bench::{run_replicate, BenchOutcome, SynthConfig};
use mixedclust_core::rng::derive_seed;

use crate::manifest::resolve_engine;
use crate::opts::BenchArgs;

pub fn run(args: BenchArgs) -> Result<()> {
    let base_engine = resolve_engine(&args.engine, None)?;
    let mut w = csv::Writer::from_path(&args.out)
        .with_context(|| format!("cannot write report `{}`", args.out.display()))?;
    w.write_record([
        "replicate",
        "setting",
        "cr",
        "ig",
        "clusters_found",
        "runtime_ms",
        "cr_cat",
        "ig_cat",
        "cr_cont",
        "ig_cont",
    ])?;

    for &table in &args.tables {
        for &variance in &args.variances {
            let setting = format!("table{table}/var={variance}");
            let mut outcomes = Vec::with_capacity(args.replicates);
            for rep in 0..args.replicates {
                let stream = (table as u64) << 32 | rep as u64;
                let mut synth = SynthConfig::<f64>::table(table)?;
                synth.sigma2 = variance;
                synth.seed = derive_seed(base_engine.seed, stream.wrapping_mul(2));
                let mut engine = base_engine.clone();
                engine.seed = derive_seed(base_engine.seed, stream.wrapping_mul(2) + 1);
                let outcome =
                    run_replicate(rep, &setting, &synth, &engine, args.per_portion)?;
                write_row(&mut w, &outcome)?;
                outcomes.push(outcome);
            }
            write_summary(&mut w, &setting, &outcomes)?;
            w.flush()?;
            let crs: Vec<f64> = outcomes.iter().map(|o| o.cr).collect();
            let igs: Vec<f64> = outcomes.iter().map(|o| o.ig).collect();
            eprintln!(
                "{setting}: {} replicate(s), mean CR {:.4}, mean IG {:.4}",
                outcomes.len(),
                mean(&crs),
                mean(&igs)
            );
        }
    }
    Ok(())
}

fn write_row<W: std::io::Write>(w: &mut csv::Writer<W>, o: &BenchOutcome) -> Result<()> {
    w.write_record([
        o.replicate.to_string(),
        o.setting.clone(),
        format!("{}", o.cr),
        format!("{}", o.ig),
        o.clusters_found.to_string(),
        o.runtime_ms.to_string(),
        opt(o.cr_cat),
        opt(o.ig_cat),
        opt(o.cr_cont),
        opt(o.ig_cont),
    ])?;
    Ok(())
}

fn write_summary<W: std::io::Write>(
    w: &mut csv::Writer<W>,
    setting: &str,
    outcomes: &[BenchOutcome],
) -> Result<()> {
    let column = |f: fn(&BenchOutcome) -> f64| -> Vec<f64> { outcomes.iter().map(f).collect() };
    let opt_column =
        |f: fn(&BenchOutcome) -> Option<f64>| -> Vec<f64> { outcomes.iter().filter_map(f).collect() };
    let plain = [
        column(|o| o.cr),
        column(|o| o.ig),
        column(|o| o.clusters_found as f64),
        column(|o| o.runtime_ms as f64),
    ];
    let optional = [
        opt_column(|o| o.cr_cat),
        opt_column(|o| o.ig_cat),
        opt_column(|o| o.cr_cont),
        opt_column(|o| o.ig_cont),
    ];
    for (tag, reduce) in [("mean", mean as fn(&[f64]) -> f64), ("std", std_dev)] {
        let mut record = vec![tag.to_string(), setting.to_string()];
        record.extend(plain.iter().map(|v| format!("{}", reduce(v))));
        record.extend(optional.iter().map(|v| {
            if v.is_empty() {
                String::new()
            } else {
                format!("{}", reduce(v))
            }
        }));
        w.write_record(&record)?;
    }
    Ok(())
}

fn mean(values: &[f64]) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    values.iter().sum::<f64>() / values.len() as f64
}

fn std_dev(values: &[f64]) -> f64 {
    if values.len() < 2 {
        return 0.0;
    }
    let m = mean(values);
    let var = values.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / (values.len() - 1) as f64;
    var.sqrt()
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| format!("{x}")).unwrap_or_default()
}
