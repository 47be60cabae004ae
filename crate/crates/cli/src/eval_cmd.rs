//! `eval` subcommand: classification rate and information gain of a label
//! file against a truth file, aligned on row_id.

use std::path::Path;

use anyhow::{bail, Context, Result};

use mixedclust_core::bench::{classification_rate, information_gain};

use crate::opts::EvalArgs;

pub fn run(args: EvalArgs) -> Result<()> {
    let pred = read_label_file(&args.labels)?;
    let truth = read_label_file(&args.truth)?;
    if pred.len() != truth.len() {
        bail!(
            "row count mismatch: {} labels vs {} truth rows",
            pred.len(),
            truth.len()
        );
    }
    for ((row_p, _), (row_t, _)) in pred.iter().zip(&truth) {
        if row_p != row_t {
            bail!("row_id mismatch: labels has {row_p} where truth has {row_t}");
        }
    }
    let pred_labels: Vec<usize> = pred.into_iter().map(|(_, l)| l).collect();
    let truth_labels: Vec<usize> = truth.into_iter().map(|(_, l)| l).collect();

    let cr = classification_rate(&truth_labels, &pred_labels)?;
    let ig = information_gain(&truth_labels, &pred_labels)?;
    println!("CR {cr}");
    println!("IG {ig}");

    if let Some(out) = &args.out {
        let mut w = csv::Writer::from_path(out)
            .with_context(|| format!("cannot write `{}`", out.display()))?;
        w.write_record(["cr", "ig"])?;
        w.write_record([format!("{cr}"), format!("{ig}")])?;
        w.flush()?;
    }
    Ok(())
}

/// Read (row_id, label) records, sorted by row_id.
fn read_label_file(path: &Path) -> Result<Vec<(usize, usize)>> {
    let mut rdr = csv::Reader::from_path(path)
        .with_context(|| format!("cannot read label file `{}`", path.display()))?;
    let mut rows = Vec::new();
    for record in rdr.records() {
        let record = record?;
        if record.len() != 2 {
            bail!(
                "label file `{}` must have exactly two columns",
                path.display()
            );
        }
        let row: usize = record[0]
            .parse()
            .with_context(|| format!("bad row_id `{}` in `{}`", &record[0], path.display()))?;
        let label: usize = record[1]
            .parse()
            .with_context(|| format!("bad label `{}` in `{}`", &record[1], path.display()))?;
        rows.push((row, label));
    }
    rows.sort_by_key(|&(row, _)| row);
    Ok(rows)
}
