//! Helpers shared by the integration suites.

use std::sync::Arc;

use mixedclust_core::dataset::{CatAttr, MixedDataset, Schema};
use mixedclust_core::rng::seeded_rng;
use mixedclust_core::Scalar;
use rand::Rng;

pub fn schema_of(ms: &[usize], q: usize) -> Arc<Schema> {
    Arc::new(
        Schema::new(
            ms.iter()
                .enumerate()
                .map(|(j, &m)| CatAttr {
                    name: format!("c{j}"),
                    levels: (0..m).map(|v| format!("v{v}")).collect(),
                })
                .collect(),
            (0..q).map(|k| format!("z{k}")).collect(),
        )
        .unwrap(),
    )
}

/// Relabel every categorical attribute through a seeded random bijection;
/// returns the relabeled dataset and the per-attribute code maps.
pub fn relabel(ds: &MixedDataset<f64>, seed: u64) -> (MixedDataset<f64>, Vec<Vec<u16>>) {
    let schema = ds.schema();
    let mut rng = seeded_rng(seed);
    let maps: Vec<Vec<u16>> = schema
        .level_counts()
        .iter()
        .map(|&m| {
            let mut perm: Vec<u16> = (0..m as u16).collect();
            for i in (1..perm.len()).rev() {
                let j = rng.random_range(0..=i);
                perm.swap(i, j);
            }
            perm
        })
        .collect();
    let mut cats = Vec::with_capacity(ds.n() * schema.p());
    for i in 0..ds.n() {
        for (j, &code) in ds.cat_row(i).iter().enumerate() {
            cats.push(maps[j][code as usize]);
        }
    }
    let conts = (0..ds.n()).flat_map(|i| ds.cont_row(i).to_vec()).collect();
    (
        MixedDataset::new(Arc::clone(schema), cats, conts).unwrap(),
        maps,
    )
}

/// Apply a seeded random orthogonal transform plus translation to every
/// continuous row; returns the moved dataset and the point map.
pub fn isometry(
    ds: &MixedDataset<f64>,
    seed: u64,
) -> (MixedDataset<f64>, impl Fn(&[f64]) -> Vec<f64>) {
    let q = ds.schema().q();
    let mut rng = seeded_rng(seed);
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(q);
    while basis.len() < q {
        let mut v: Vec<f64> = (0..q).map(|_| f64::std_normal(&mut rng)).collect();
        for u in &basis {
            let dot: f64 = v.iter().zip(u).map(|(a, b)| a * b).sum();
            for (vi, ui) in v.iter_mut().zip(u) {
                *vi -= dot * ui;
            }
        }
        let norm: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-6 {
            for vi in &mut v {
                *vi /= norm;
            }
            basis.push(v);
        }
    }
    let shift: Vec<f64> = (0..q).map(|_| rng.random_range(-5.0..5.0)).collect();
    let apply = move |z: &[f64]| -> Vec<f64> {
        (0..z.len())
            .map(|r| basis[r].iter().zip(z).map(|(m, x)| m * x).sum::<f64>() + shift[r])
            .collect()
    };
    let mut conts = Vec::with_capacity(ds.n() * q);
    for i in 0..ds.n() {
        conts.extend(apply(ds.cont_row(i)));
    }
    let cats = (0..ds.n()).flat_map(|i| ds.cat_row(i).to_vec()).collect();
    (
        MixedDataset::new(Arc::clone(ds.schema()), cats, conts).unwrap(),
        apply,
    )
}
