//! `synth` subcommand: write a synthetic dataset (data.csv), its truth
//! labels (truth.csv), and the matching schema (schema.json).

use anyhow::{bail, Context, Result};

use mixedclust_core::bench::gen_mixed;
use mixedclust_core::SynthConfig64;

use crate::opts::{env_seed, SynthArgs};

pub fn run(args: SynthArgs) -> Result<()> {
    let cfg = build_config(&args)?;
    let labeled = gen_mixed(&cfg)?;

    std::fs::create_dir_all(&args.out_dir)
        .with_context(|| format!("cannot create `{}`", args.out_dir.display()))?;
    let data_path = args.out_dir.join("data.csv");
    let truth_path = args.out_dir.join("truth.csv");
    let schema_path = args.out_dir.join("schema.json");

    let file = std::fs::File::create(&data_path)
        .with_context(|| format!("cannot write `{}`", data_path.display()))?;
    labeled.data.write_csv(file)?;

    let mut w = csv::Writer::from_path(&truth_path)?;
    w.write_record(["row_id", "true_label"])?;
    for (row, label) in labeled.truth.iter().enumerate() {
        w.write_record([row.to_string(), label.to_string()])?;
    }
    w.flush()?;

    std::fs::write(&schema_path, labeled.data.schema().to_json() + "\n")
        .with_context(|| format!("cannot write `{}`", schema_path.display()))?;

    eprintln!(
        "wrote {} rows ({} clusters) to {}",
        labeled.data.n(),
        cfg.sizes.len(),
        args.out_dir.display()
    );
    Ok(())
}

fn build_config(args: &SynthArgs) -> Result<SynthConfig64> {
    let preset = [args.table1, args.table2, args.table3, args.table4]
        .iter()
        .position(|&on| on)
        .map(|i| i + 1);
    let mut cfg = match preset {
        Some(table) => SynthConfig64::table(table)?,
        None => {
            let sizes = args
                .sizes
                .clone()
                .context("--sizes is required unless a --tableN preset is chosen")?;
            SynthConfig64 {
                cat_attrs: 10,
                cont_attrs: 10,
                level_pool: vec![4, 5, 6],
                sizes,
                center_prob: 0.7,
                sigma2: 0.25,
                center_gap: 3.0,
                seed: 0,
            }
        }
    };
    if let Some(sizes) = &args.sizes {
        cfg.sizes = sizes.clone();
    }
    if let Some(k) = args.k {
        if cfg.sizes.len() != k {
            bail!("--k {} does not match the {} sizes given", k, cfg.sizes.len());
        }
    }
    if let Some(p) = args.p {
        cfg.cat_attrs = p;
    }
    if let Some(q) = args.q {
        cfg.cont_attrs = q;
    }
    if let Some(pool) = &args.level_pool {
        cfg.level_pool = pool.clone();
    }
    if let Some(cp) = args.center_prob {
        cfg.center_prob = cp;
    }
    if let Some(s2) = args.sigma2 {
        cfg.sigma2 = s2;
    }
    if let Some(gap) = args.center_gap {
        cfg.center_gap = gap;
    }
    cfg.seed = args.seed.unwrap_or_else(env_seed);
    Ok(cfg)
}
