//! Scratch pilot for the synthetic-benchmark settings.

use mixedclust_core::bench::{classification_rate, gen_mixed, information_gain, SynthConfig};
use mixedclust_core::cluster::run_clustering;
use mixedclust_core::rng::derive_seed;
use mixedclust_core::EngineConfig64;
use std::time::Instant;

fn main() {
    if std::env::args().nth(1).as_deref() == Some("null") {
        let trials: usize = std::env::args()
            .nth(2)
            .and_then(|s| s.parse().ok())
            .unwrap_or(20);
        null_fpr(trials);
        return;
    }
    let reps: usize = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(5);
    let table: usize = std::env::args()
        .nth(2)
        .and_then(|s| s.parse().ok())
        .unwrap_or(1);
    let sigma2: f64 = std::env::args()
        .nth(3)
        .and_then(|s| s.parse().ok())
        .unwrap_or(0.25);

    let mut crs = Vec::new();
    let mut igs = Vec::new();
    let total = Instant::now();
    for rep in 0..reps {
        let mut synth = SynthConfig::<f64>::table(table).unwrap();
        synth.sigma2 = sigma2;
        synth.seed = derive_seed(1000, rep as u64);
        let labeled = gen_mixed(&synth).unwrap();
        let cfg = EngineConfig64 {
            seed: derive_seed(2000, rep as u64),
            ..EngineConfig64::default()
        };
        let start = Instant::now();
        let result = run_clustering(&labeled.data, &cfg).unwrap();
        let ms = start.elapsed().as_millis();
        let pred = result.labels();
        let cr = classification_rate(&labeled.truth, &pred).unwrap();
        let ig = information_gain(&labeled.truth, &pred).unwrap();
        crs.push(cr);
        igs.push(ig);
        println!(
            "rep {rep}: cr={cr:.4} ig={ig:.4} clusters={} iters={} {ms} ms stop={:?}",
            result.clusters.len(),
            result.iterations.len(),
            result.stop
        );
        for it in &result.iterations {
            println!(
                "   iter {}: n={} max={:.1} thr={:.1} rc={:?} Rc={} Rd={:.3} |members|={}",
                it.iteration,
                it.n_remaining,
                it.max_statistic,
                it.threshold,
                it.stat.cutoff_cat,
                it.radius_cat,
                it.radius_cont,
                it.extracted.len()
            );
        }
    }
    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    println!(
        "table {table} var {sigma2}: mean CR {:.4}, mean IG {:.4}, total {:?}",
        mean(&crs),
        mean(&igs),
        total.elapsed()
    );
}

fn null_fpr(trials: usize) {
    use mixedclust_core::dataset::{CatAttr, Schema};
    use mixedclust_core::nullmodel::uniform_null_dataset;
    use std::sync::Arc;

    let schema = Arc::new(
        Schema::new(
            (0..5)
                .map(|j| CatAttr {
                    name: format!("c{j}"),
                    levels: (0..4).map(|v| format!("v{v}")).collect(),
                })
                .collect(),
            (0..5).map(|k| format!("z{k}")).collect(),
        )
        .unwrap(),
    );
    let bounds = vec![(0.0f64, 1.0); 5];
    let total = Instant::now();
    let mut positives = 0;
    for trial in 0..trials {
        let ds =
            uniform_null_dataset(&schema, 100, &bounds, derive_seed(7000, trial as u64))
                .unwrap();
        let cfg = EngineConfig64 {
            seed: derive_seed(8000, trial as u64),
            ..EngineConfig64::default()
        };
        let result = run_clustering(&ds, &cfg).unwrap();
        if !result.clusters.is_empty() {
            positives += 1;
            println!("trial {trial}: {} clusters", result.clusters.len());
        }
    }
    println!(
        "null fpr: {positives}/{trials} = {:.3}, total {:?}",
        positives as f64 / trials as f64,
        total.elapsed()
    );
}
