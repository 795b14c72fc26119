//! Independent reference implementations used as test oracles, plus small
//! random-input helpers. Nothing here calls into the algorithms under test.

#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spnet::{BinaryGraph, SquareMatrix, WeightedGraph};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Erdos-Renyi style graph with edge probability `p`.
pub fn random_binary(rng: &mut ChaCha8Rng, n: usize, p: f64) -> BinaryGraph {
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.random::<f64>() < p {
                edges.push((i, j));
            }
        }
    }
    BinaryGraph::from_edges(n, edges).unwrap()
}

/// Weighted graph where each pair is present with probability `p` and
/// carries a weight drawn uniformly from `[lo, hi)`.
pub fn random_weighted(rng: &mut ChaCha8Rng, n: usize, p: f64, lo: f64, hi: f64) -> WeightedGraph {
    let mut m = SquareMatrix::zeros(n);
    for i in 0..n {
        for j in i + 1..n {
            if rng.random::<f64>() < p {
                let w = rng.random_range(lo..hi);
                m.set(i, j, w);
                m.set(j, i, w);
            }
        }
    }
    WeightedGraph::new(m).unwrap()
}

/// Shortest simple-path lengths by enumerating every simple path from every
/// source. `len(i, j)` gives the length of the edge `i - j` or `None`.
pub fn all_simple_path_distances(
    n: usize,
    len: impl Fn(usize, usize) -> Option<f64>,
) -> Vec<Vec<f64>> {
    let mut best = vec![vec![f64::INFINITY; n]; n];
    for s in 0..n {
        best[s][s] = 0.0;
        let mut on_path = vec![false; n];
        on_path[s] = true;
        walk(s, 0.0, &mut on_path, &mut best[s], &len);
    }
    best
}

fn walk(
    at: usize,
    dist: f64,
    on_path: &mut [bool],
    best: &mut [f64],
    len: &impl Fn(usize, usize) -> Option<f64>,
) {
    for next in 0..on_path.len() {
        if on_path[next] {
            continue;
        }
        if let Some(l) = len(at, next) {
            let d = dist + l;
            if d < best[next] {
                best[next] = d;
            }
            on_path[next] = true;
            walk(next, d, on_path, best, len);
            on_path[next] = false;
        }
    }
}

/// Mean of `1 / d` over ordered pairs, with unreachable pairs counting zero.
pub fn efficiency_from_distances(d: &[Vec<f64>]) -> f64 {
    let n = d.len();
    if n < 2 {
        return 0.0;
    }
    let mut total = 0.0;
    for (i, row) in d.iter().enumerate() {
        for (j, &dij) in row.iter().enumerate() {
            if i != j && dij.is_finite() {
                total += 1.0 / dij;
            }
        }
    }
    total / (n * (n - 1)) as f64
}

pub fn oracle_global_efficiency(g: &BinaryGraph) -> f64 {
    let d = all_simple_path_distances(g.n(), |i, j| g.has_edge(i, j).then_some(1.0));
    efficiency_from_distances(&d)
}

pub fn oracle_weighted_efficiency(g: &WeightedGraph) -> f64 {
    let d = all_simple_path_distances(g.n(), |i, j| {
        let w = g.weight(i, j);
        (w > 0.0).then(|| 1.0 / w)
    });
    efficiency_from_distances(&d)
}

/// Newman modularity straight from the definition
/// `Q = 1/(2m) sum_ij (A_ij - k_i k_j / 2m) [c_i == c_j]`.
pub fn oracle_q(g: &BinaryGraph, assignment: &[usize]) -> f64 {
    let n = g.n();
    let two_m = 2.0 * g.edge_count() as f64;
    let deg: Vec<f64> = (0..n)
        .map(|i| (0..n).filter(|&j| g.has_edge(i, j)).count() as f64)
        .collect();
    let mut q = 0.0;
    for i in 0..n {
        for j in 0..n {
            if assignment[i] == assignment[j] {
                let a = if g.has_edge(i, j) { 1.0 } else { 0.0 };
                q += a - deg[i] * deg[j] / two_m;
            }
        }
    }
    q / two_m
}

/// Every set partition of `0..n` as restricted growth strings.
pub fn set_partitions(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = vec![0; n];
    fn grow(i: usize, max: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i == current.len() {
            out.push(current.clone());
            return;
        }
        for label in 0..=max + 1 {
            current[i] = label;
            grow(i + 1, max.max(label), current, out);
        }
    }
    if n == 0 {
        return vec![vec![]];
    }
    grow(1, 0, &mut current, &mut out);
    out
}

pub fn oracle_max_q(g: &BinaryGraph) -> f64 {
    set_partitions(g.n())
        .iter()
        .map(|a| oracle_q(g, a))
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Benjamini-Hochberg by counting: rank `k` qualifies when at least `k`
/// p-values sit at or below `k alpha / m`; everything at or below the
/// largest qualifying cut is rejected.
pub fn oracle_bh(p: &[f64], alpha: f64) -> Vec<bool> {
    let m = p.len();
    let mut cut = None;
    for k in 1..=m {
        let level = k as f64 / m as f64 * alpha;
        if p.iter().filter(|&&x| x <= level).count() >= k {
            let kth = {
                let mut s = p.to_vec();
                s.sort_by(f64::total_cmp);
                s[k - 1]
            };
            if kth <= level {
                cut = Some(kth);
            }
        }
    }
    match cut {
        Some(c) => p.iter().map(|&x| x <= c).collect(),
        None => vec![false; m],
    }
}

/// Residual sum of squares of an ordinary least-squares fit, by Gaussian
/// elimination on the normal equations.
fn ols_rss(x: &[Vec<f64>], y: &[f64]) -> f64 {
    let k = x[0].len();
    let mut a = vec![vec![0.0; k + 1]; k];
    for (row, &yi) in x.iter().zip(y) {
        for r in 0..k {
            for c in 0..k {
                a[r][c] += row[r] * row[c];
            }
            a[r][k] += row[r] * yi;
        }
    }
    for col in 0..k {
        let pivot = (col..k)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .unwrap();
        a.swap(col, pivot);
        for r in 0..k {
            if r != col {
                let f = a[r][col] / a[col][col];
                let pivot_row = a[col].clone();
                for (x, p) in a[r][col..].iter_mut().zip(&pivot_row[col..]) {
                    *x -= f * p;
                }
            }
        }
    }
    let beta: Vec<f64> = (0..k).map(|r| a[r][k] / a[r][r]).collect();
    x.iter()
        .zip(y)
        .map(|(row, &yi)| {
            let fit: f64 = row.iter().zip(&beta).map(|(a, b)| a * b).sum();
            (yi - fit).powi(2)
        })
        .sum()
}

/// F statistic for the condition factor by comparing the additive
/// subject + condition model with the subject-only model.
pub fn oracle_f(table: &[Vec<f64>]) -> (f64, f64, f64) {
    let n = table.len();
    let j = table[0].len();
    let mut full = Vec::new();
    let mut reduced = Vec::new();
    let mut y = Vec::new();
    for (s, row) in table.iter().enumerate() {
        for (c, &v) in row.iter().enumerate() {
            let mut subj = vec![0.0; n];
            subj[s] = 1.0;
            let mut cond = vec![0.0; j - 1];
            if c > 0 {
                cond[c - 1] = 1.0;
            }
            reduced.push(subj.clone());
            full.push([subj, cond].concat());
            y.push(v);
        }
    }
    let rss_full = ols_rss(&full, &y);
    let rss_reduced = ols_rss(&reduced, &y);
    let d1 = (j - 1) as f64;
    let d2 = ((n - 1) * (j - 1)) as f64;
    ((rss_reduced - rss_full) / d1 / (rss_full / d2), d1, d2)
}

/// Spearman rank correlation with average ranks for ties.
pub fn spearman(x: &[f64], y: &[f64]) -> f64 {
    fn ranks(v: &[f64]) -> Vec<f64> {
        let mut idx: Vec<usize> = (0..v.len()).collect();
        idx.sort_by(|&a, &b| v[a].total_cmp(&v[b]));
        let mut r = vec![0.0; v.len()];
        let mut i = 0;
        while i < idx.len() {
            let mut j = i;
            while j + 1 < idx.len() && v[idx[j + 1]] == v[idx[i]] {
                j += 1;
            }
            let avg = (i + j) as f64 / 2.0 + 1.0;
            for &k in &idx[i..=j] {
                r[k] = avg;
            }
            i = j + 1;
        }
        r
    }
    let (rx, ry) = (ranks(x), ranks(y));
    let n = x.len() as f64;
    let (mx, my) = (rx.iter().sum::<f64>() / n, ry.iter().sum::<f64>() / n);
    let cov: f64 = rx.iter().zip(&ry).map(|(a, b)| (a - mx) * (b - my)).sum();
    let vx: f64 = rx.iter().map(|a| (a - mx).powi(2)).sum();
    let vy: f64 = ry.iter().map(|b| (b - my).powi(2)).sum();
    cov / (vx * vy).sqrt()
}
