//! Ring lattices, uniform random graphs and edge-count-preserving rewiring.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::BinaryGraph;
use crate::matrix::{pair_count, upper_pairs};

/// Seedable generator used by every stochastic routine in the crate.
pub type SimRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> SimRng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn splitmix(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Seed for replicate `replicate` of grid point `point` under `master`.
/// Independent of evaluation order.
pub fn derive_seed(master: u64, point: usize, replicate: usize) -> u64 {
    let h = splitmix(master);
    let h = splitmix(h ^ (point as u64).wrapping_mul(0xD6E8_FEB8_6659_FD93));
    splitmix(h ^ (replicate as u64).wrapping_mul(0xA076_1D64_78BD_642F))
}

fn check_feasible(n_v: usize, n_e: usize) -> Result<()> {
    if n_v < 3 {
        return Err(Error::Domain(format!("need at least 3 nodes, got {n_v}")));
    }
    if n_e > pair_count(n_v) {
        return Err(Error::Domain(format!(
            "{n_e} edges do not fit on {n_v} nodes (max {})",
            pair_count(n_v)
        )));
    }
    Ok(())
}

/// Edges joining nodes `offset` apart on the ring, ordered so that every
/// prefix keeps node degrees within one of each other: alternate edges of
/// each cycle first (a matching), then the rest.
fn offset_round(n: usize, offset: usize) -> Vec<(usize, usize)> {
    let norm = |a: usize, b: usize| if a < b { (a, b) } else { (b, a) };
    if 2 * offset == n {
        return (0..n / 2).map(|i| norm(i, i + offset)).collect();
    }
    // the offset edges form gcd(n, offset) cycles
    let mut seen = vec![false; n];
    let mut cycles = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut cycle = Vec::new();
        let mut v = start;
        while !seen[v] {
            seen[v] = true;
            cycle.push(norm(v, (v + offset) % n));
            v = (v + offset) % n;
        }
        cycles.push(cycle);
    }
    let mut first = Vec::new();
    let mut leads = Vec::new();
    let mut second = Vec::new();
    for cycle in &cycles {
        let len = cycle.len();
        if len % 2 == 0 {
            first.extend(cycle.iter().step_by(2));
            second.extend(cycle.iter().skip(1).step_by(2));
        } else {
            // Edges 0, 2, .., len-3 match all nodes but the last; the edge
            // at len-2 reaches it, so it leads the second pass
            // (ahead of every other cycle's second-pass edges).
            first.extend(cycle[..len - 1].iter().step_by(2));
            leads.push(cycle[len - 2]);
            second.extend(cycle[1..len - 2].iter().step_by(2).rev());
            second.push(cycle[len - 1]);
        }
    }
    first.extend(leads);
    first.extend(second);
    first
}

/// Regular ring lattice with exactly `n_e` edges, filled in rounds of
/// increasing neighbour offset. A final partial round leaves node degrees
/// differing by at most one whenever that offset's edges form a single cycle
/// or only even cycles (always the case for prime `n_v`, and for 112 nodes at
/// offset 19). When they split into several odd cycles no perfect matching
/// exists inside the round and the spread can reach two.
pub fn ring_lattice(n_v: usize, n_e: usize) -> Result<BinaryGraph> {
    check_feasible(n_v, n_e)?;
    let mut edges = Vec::with_capacity(n_e);
    let mut offset = 1;
    while edges.len() < n_e {
        let round = offset_round(n_v, offset);
        let take = (n_e - edges.len()).min(round.len());
        edges.extend_from_slice(&round[..take]);
        offset += 1;
    }
    BinaryGraph::from_edges(n_v, edges)
}

/// Uniformly random simple graph with exactly `n_e` edges.
pub fn random_graph(n_v: usize, n_e: usize, seed: u64) -> Result<BinaryGraph> {
    check_feasible(n_v, n_e)?;
    let pairs: Vec<(usize, usize)> = upper_pairs(n_v).collect();
    let mut rng = rng_from_seed(seed);
    let mut chosen = sample(&mut rng, pairs.len(), n_e).into_vec();
    chosen.sort_unstable();
    BinaryGraph::from_edges(n_v, chosen.into_iter().map(|k| pairs[k]))
}

/// Performs `steps` rewirings, each deleting a uniformly chosen edge and
/// adding a uniformly chosen absent pair. Edge count and simplicity are kept.
pub fn rewire(g: &BinaryGraph, steps: usize, seed: u64) -> Result<BinaryGraph> {
    if steps == 0 {
        return Ok(g.clone());
    }
    let mut present = g.edges();
    let mut absent: Vec<(usize, usize)> = upper_pairs(g.n())
        .filter(|&(i, j)| !g.has_edge(i, j))
        .collect();
    if present.is_empty() || absent.is_empty() {
        return Err(Error::Domain(
            "rewiring needs at least one edge and one absent pair".into(),
        ));
    }
    let mut rng = rng_from_seed(seed);
    for _ in 0..steps {
        let e = rng.random_range(0..present.len());
        let a = rng.random_range(0..absent.len());
        std::mem::swap(&mut present[e], &mut absent[a]);
    }
    BinaryGraph::from_edges(g.n(), present)?.with_labels(g.node_labels().to_vec())
}
