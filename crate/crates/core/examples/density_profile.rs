//! Density-integrated efficiency and its invariance under monotone
//! rescaling of the weights.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spnet::density::{monotone_invariance_report, EdgeRanking};
use spnet::matrix::upper_pairs;
use spnet::{density_threshold, Metric, SquareMatrix, WeightedGraph};

type Transform = (&'static str, fn(f64) -> f64);

fn main() -> spnet::Result<()> {
    let n = 12;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut m = SquareMatrix::zeros(n);
    for (i, j) in upper_pairs(n) {
        let w: f64 = rng.random();
        m.set(i, j, w);
        m.set(j, i, w);
    }
    let g = WeightedGraph::new(m)?;

    let sparse = density_threshold(&g, 11)?;
    println!("11 strongest edges: {:?}", sparse.edges());

    let metric = |b: &spnet::BinaryGraph| Metric::GlobalEfficiency.evaluate(b);
    let profile = EdgeRanking::of(&g).profile(metric, Some(&[5, 10, 20, 40, 66]), None)?;
    for (k, v) in profile.densities.iter().zip(&profile.values) {
        println!("k = {k:>2}  E_glob = {v:.4}");
    }
    println!("integrated over that grid: {:.6}", profile.integrated);

    let transforms: [Transform; 4] = [
        ("2w", |w| 2.0 * w),
        ("w^3", |w| w.powi(3)),
        ("exp(w)", f64::exp),
        ("-w", |w| -w),
    ];
    for (name, h) in transforms {
        let r = monotone_invariance_report(&g, h, metric)?;
        println!(
            "{name:<7} {:?}: edge sets match = {}, integrated {:.12} vs {:.12}",
            r.direction,
            r.edge_sets_match(),
            r.original.integrated,
            r.transformed.integrated
        );
    }
    Ok(())
}
