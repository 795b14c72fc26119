//! Greedy agglomerative modularity maximization on unweighted graphs.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::BinaryGraph;

/// Assignment of nodes to modules.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Partition {
    /// Module id per node; ids are contiguous from 0 in order of first node.
    pub assignment: Vec<usize>,
    pub module_count: usize,
    /// Newman modularity of the assignment.
    pub q: f64,
}

/// Renumbers arbitrary labels to `0..c` in order of first appearance.
pub fn canonical_assignment(labels: &[usize]) -> Vec<usize> {
    let mut map = BTreeMap::new();
    labels
        .iter()
        .map(|&l| {
            let next = map.len();
            *map.entry(l).or_insert(next)
        })
        .collect()
}

/// Newman modularity `Q = sum_c [ l_c / m - (d_c / 2m)^2 ]`, where `l_c`
/// counts edges inside module `c` and `d_c` is its total degree.
pub fn newman_q(g: &BinaryGraph, assignment: &[usize]) -> Result<f64> {
    let m = g.edge_count();
    if m == 0 {
        return Err(Error::Domain(
            "modularity is undefined without edges".into(),
        ));
    }
    if assignment.len() != g.n() {
        return Err(Error::Validation(format!(
            "assignment covers {} of {} nodes",
            assignment.len(),
            g.n()
        )));
    }
    let modules = assignment.iter().max().map_or(0, |&c| c + 1);
    let mut inside = vec![0usize; modules];
    let mut degree = vec![0usize; modules];
    for (i, j) in g.edges() {
        degree[assignment[i]] += 1;
        degree[assignment[j]] += 1;
        if assignment[i] == assignment[j] {
            inside[assignment[i]] += 1;
        }
    }
    let m = m as f64;
    Ok(inside
        .iter()
        .zip(&degree)
        .map(|(&l, &d)| l as f64 / m - (d as f64 / (2.0 * m)).powi(2))
        .sum())
}

/// Greedy agglomeration from singletons, always merging the connected pair
/// of communities with the largest modularity gain until no merge gains.
///
/// Gains are compared exactly as integers `2m * l_ab - d_a * d_b`, which is
/// proportional to the change in Q. Ties go to the lexicographically
/// smallest pair of community ids (each id is its smallest node).
pub fn greedy_modularity(g: &BinaryGraph) -> Result<Partition> {
    let n = g.n();
    let m = g.edge_count();
    if m == 0 {
        return Err(Error::Domain(
            "greedy modularity needs at least one edge".into(),
        ));
    }
    let two_m = 2 * m as i64;
    let mut degree: Vec<i64> = (0..n).map(|i| g.degree(i) as i64).collect();
    let mut links: Vec<BTreeMap<usize, i64>> = vec![BTreeMap::new(); n];
    for (i, j) in g.edges() {
        links[i].insert(j, 1);
        links[j].insert(i, 1);
    }
    let mut community: Vec<usize> = (0..n).collect();
    let mut members: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();

    loop {
        let mut best: Option<(i64, usize, usize)> = None;
        for a in 0..n {
            for (&b, &l) in links[a].range(a + 1..) {
                let gain = two_m * l - degree[a] * degree[b];
                if gain > 0 && best.is_none_or(|(g, _, _)| gain > g) {
                    best = Some((gain, a, b));
                }
            }
        }
        let Some((_, a, b)) = best else { break };

        // fold community b into a
        let absorbed = std::mem::take(&mut links[b]);
        for (c, l) in absorbed {
            links[c].remove(&b);
            if c != a {
                *links[a].entry(c).or_insert(0) += l;
                *links[c].entry(a).or_insert(0) += l;
            }
        }
        links[a].remove(&b);
        degree[a] += degree[b];
        degree[b] = 0;
        let moved = std::mem::take(&mut members[b]);
        for &v in &moved {
            community[v] = a;
        }
        members[a].extend(moved);
    }

    let assignment = canonical_assignment(&community);
    let module_count = assignment.iter().max().map_or(0, |&c| c + 1);
    let q = newman_q(g, &assignment)?;
    Ok(Partition {
        assignment,
        module_count,
        q,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_triangles() -> BinaryGraph {
        BinaryGraph::from_edges(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap()
    }

    #[test]
    fn separates_disjoint_triangles() {
        let p = greedy_modularity(&two_triangles()).unwrap();
        assert_eq!(p.module_count, 2);
        assert_eq!(p.assignment, vec![0, 0, 0, 1, 1, 1]);
        assert!((p.q - 0.5).abs() < 1e-12);
    }

    #[test]
    fn complete_graph_is_one_module() {
        let p = greedy_modularity(&BinaryGraph::complete(4)).unwrap();
        assert_eq!(p.module_count, 1);
        assert!(p.q.abs() < 1e-12);
    }

    #[test]
    fn isolated_nodes_stay_singletons() {
        let g = BinaryGraph::from_edges(5, [(0, 1), (1, 2), (0, 2)]).unwrap();
        let p = greedy_modularity(&g).unwrap();
        assert_eq!(p.module_count, 3);
        assert_eq!(p.assignment, vec![0, 0, 0, 1, 2]);
    }

    #[test]
    fn edgeless_is_domain_error() {
        assert!(matches!(
            greedy_modularity(&BinaryGraph::empty(4)),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            newman_q(&BinaryGraph::empty(4), &[0; 4]),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn canonical_relabelling() {
        assert_eq!(canonical_assignment(&[7, 7, 2, 9, 2]), vec![0, 0, 1, 2, 1]);
    }
}
