//! Undirected simple graphs over dense integer node ids, plus the degree and
//! distance statistics used to pick the trial-case target nodes.

use std::collections::BTreeMap;
use std::collections::VecDeque;

use crate::error::{Error, Result};

/// An undirected simple graph. Node ids are dense integers `0..node_count`.
///
/// The adjacency is stored symmetrically; `add_edge` rejects self-loops,
/// duplicates and out-of-range endpoints, so a `Graph` built through the
/// public interface is always simple.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<u32>>, // each list kept sorted ascending
}

impl Graph {
    /// Creates an edgeless graph on `n` nodes.
    pub fn new(n: usize) -> Graph {
        Graph {
            adj: vec![Vec::new(); n],
        }
    }

    pub fn node_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|a| a.len()).sum::<usize>() / 2
    }

    pub fn degree(&self, i: u32) -> usize {
        self.adj[i as usize].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adj.iter().map(|a| a.len()).collect()
    }

    /// Neighbors of `i` in ascending id order.
    pub fn neighbors(&self, i: u32) -> &[u32] {
        &self.adj[i as usize]
    }

    pub fn has_edge(&self, i: u32, j: u32) -> bool {
        self.adj
            .get(i as usize)
            .is_some_and(|a| a.binary_search(&j).is_ok())
    }

    pub fn add_edge(&mut self, i: u32, j: u32) -> Result<()> {
        let n = self.adj.len() as u32;
        if i >= n || j >= n {
            return Err(Error::parameter(format!(
                "edge ({i}, {j}) out of range for {n} nodes"
            )));
        }
        if i == j {
            return Err(Error::parameter(format!("self-loop at node {i}")));
        }
        let pos = match self.adj[i as usize].binary_search(&j) {
            Ok(_) => return Err(Error::parameter(format!("duplicate edge ({i}, {j})"))),
            Err(pos) => pos,
        };
        self.adj[i as usize].insert(pos, j);
        let pos = self.adj[j as usize].binary_search(&i).unwrap_err();
        self.adj[j as usize].insert(pos, i);
        Ok(())
    }

    /// Removes an existing edge. Used by generators when repairing or
    /// rewiring; absent edges are an error.
    pub fn remove_edge(&mut self, i: u32, j: u32) -> Result<()> {
        let pos = self.adj[i as usize]
            .binary_search(&j)
            .map_err(|_| Error::parameter(format!("no edge ({i}, {j}) to remove")))?;
        self.adj[i as usize].remove(pos);
        let pos = self.adj[j as usize].binary_search(&i).unwrap();
        self.adj[j as usize].remove(pos);
        Ok(())
    }

    /// Edges in canonical order: `i < j`, sorted by `(i, j)`.
    pub fn edges(&self) -> Vec<(u32, u32)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for (i, nbrs) in self.adj.iter().enumerate() {
            let i = i as u32;
            for &j in nbrs {
                if i < j {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// BFS hop counts from `src`; `u32::MAX` marks unreachable nodes.
    pub fn bfs_distances(&self, src: u32) -> Vec<u32> {
        let n = self.adj.len();
        let mut dist = vec![u32::MAX; n];
        let mut queue = VecDeque::new();
        dist[src as usize] = 0;
        queue.push_back(src);
        while let Some(u) = queue.pop_front() {
            let du = dist[u as usize];
            for &v in &self.adj[u as usize] {
                if dist[v as usize] == u32::MAX {
                    dist[v as usize] = du + 1;
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    pub fn is_connected(&self) -> bool {
        if self.adj.is_empty() {
            return true;
        }
        let dist = self.bfs_distances(0);
        dist.iter().all(|&d| d != u32::MAX)
    }
}

/// Histogram and dispersion statistics of a graph's degree sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct DegreeSummary {
    pub histogram: BTreeMap<usize, usize>,
    pub mean: f64,
    pub std: f64,
    /// Coefficient of variation `std / mean`; small values indicate a
    /// homogeneous network, large values a center-and-periphery structure.
    pub cv: f64,
    /// Gini coefficient of the degree sequence, in `[0, 1)`.
    pub gini: f64,
}

/// Hop-count statistics from one node to all others.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceStats {
    pub node: u32,
    pub mean_dist: f64,
    pub std_dist: f64,
}

/// The three nodes the trial cases hide around: the maximum-degree node and
/// the nodes with the smallest spread and smallest mean of the hop distance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TargetNodes {
    /// Maximum degree.
    pub a: u32,
    /// Minimum standard deviation of the distance to all other nodes.
    pub b: u32,
    /// Minimum mean distance to all other nodes.
    pub c: u32,
}

/// Computes the exact degree histogram, mean, standard deviation, coefficient
/// of variation and Gini coefficient.
pub fn degree_summary(g: &Graph) -> Result<DegreeSummary> {
    let n = g.node_count();
    if n < 2 {
        return Err(Error::parameter(format!(
            "degree summary needs at least 2 nodes, got {n}"
        )));
    }
    let degrees = g.degrees();
    let mut histogram = BTreeMap::new();
    for &d in &degrees {
        *histogram.entry(d).or_insert(0usize) += 1;
    }
    let nf = n as f64;
    let mean = degrees.iter().sum::<usize>() as f64 / nf;
    let var = degrees
        .iter()
        .map(|&d| {
            let e = d as f64 - mean;
            e * e
        })
        .sum::<f64>()
        / nf;
    let std = var.sqrt();
    let cv = if mean > 0.0 { std / mean } else { 0.0 };

    // Gini via the sorted-sequence identity:
    //   G = (2 * sum_i (i+1) d_(i) - (n+1) * sum d) / (n * sum d)
    let mut sorted = degrees.clone();
    sorted.sort_unstable();
    let total: f64 = sorted.iter().sum::<usize>() as f64;
    let gini = if total > 0.0 {
        let weighted: f64 = sorted
            .iter()
            .enumerate()
            .map(|(i, &d)| (i as f64 + 1.0) * d as f64)
            .sum();
        (2.0 * weighted - (nf + 1.0) * total) / (nf * total)
    } else {
        0.0
    };

    Ok(DegreeSummary {
        histogram,
        mean,
        std,
        cv,
        gini,
    })
}

/// Mean and population standard deviation of the BFS hop counts from `node`
/// to the other `|n| - 1` nodes.
pub fn distance_stats(g: &Graph, node: u32) -> Result<DistanceStats> {
    let n = g.node_count();
    if node as usize >= n {
        return Err(Error::parameter(format!(
            "node {node} out of range for {n} nodes"
        )));
    }
    if n < 2 {
        return Err(Error::parameter(format!(
            "distance stats need at least 2 nodes, got {n}"
        )));
    }
    let dist = g.bfs_distances(node);
    if dist.contains(&u32::MAX) {
        return Err(Error::structural(
            "distance stats require a connected graph".to_string(),
        ));
    }
    let others = (n - 1) as f64;
    let sum: f64 = dist.iter().map(|&d| d as f64).sum();
    let mean = sum / others;
    let var = dist
        .iter()
        .enumerate()
        .filter(|&(i, _)| i as u32 != node)
        .map(|(_, &d)| {
            let e = d as f64 - mean;
            e * e
        })
        .sum::<f64>()
        / others;
    Ok(DistanceStats {
        node,
        mean_dist: mean,
        std_dist: var.sqrt(),
    })
}

/// Selects the trial-case target nodes; all ties break to the smallest id.
pub fn select_targets(g: &Graph) -> Result<TargetNodes> {
    let n = g.node_count();
    if n < 2 {
        return Err(Error::parameter(format!(
            "target selection needs at least 2 nodes, got {n}"
        )));
    }
    if !g.is_connected() {
        return Err(Error::structural(
            "target selection requires a connected graph".to_string(),
        ));
    }
    let mut a = 0u32;
    let mut best_deg = g.degree(0);
    for i in 1..n as u32 {
        let d = g.degree(i);
        if d > best_deg {
            best_deg = d;
            a = i;
        }
    }
    let mut b = 0u32;
    let mut c = 0u32;
    let first = distance_stats(g, 0)?;
    let mut best_std = first.std_dist;
    let mut best_mean = first.mean_dist;
    for i in 1..n as u32 {
        let stats = distance_stats(g, i)?;
        if stats.std_dist < best_std {
            best_std = stats.std_dist;
            b = i;
        }
        if stats.mean_dist < best_mean {
            best_mean = stats.mean_dist;
            c = i;
        }
    }
    Ok(TargetNodes { a, b, c })
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn path3() -> Graph {
        let mut g = Graph::new(3);
        g.add_edge(0, 1).unwrap();
        g.add_edge(1, 2).unwrap();
        g
    }

    pub(crate) fn star5() -> Graph {
        let mut g = Graph::new(5);
        for leaf in 1..5 {
            g.add_edge(0, leaf).unwrap();
        }
        g
    }

    pub(crate) fn cycle(n: u32) -> Graph {
        let mut g = Graph::new(n as usize);
        for i in 0..n {
            g.add_edge(i, (i + 1) % n).unwrap();
        }
        g
    }

    pub(crate) fn complete(n: u32) -> Graph {
        let mut g = Graph::new(n as usize);
        for i in 0..n {
            for j in i + 1..n {
                g.add_edge(i, j).unwrap();
            }
        }
        g
    }

    #[test]
    fn edges_are_symmetric_and_simple() {
        let mut g = Graph::new(4);
        g.add_edge(2, 0).unwrap();
        assert!(g.has_edge(0, 2) && g.has_edge(2, 0));
        assert!(g.add_edge(0, 2).is_err());
        assert!(g.add_edge(1, 1).is_err());
        assert!(g.add_edge(0, 4).is_err());
        assert_eq!(g.edges(), vec![(0, 2)]);
    }

    #[test]
    fn degree_summary_regular_graph_has_zero_spread() {
        let s = degree_summary(&complete(4)).unwrap();
        assert_eq!(s.histogram, BTreeMap::from([(3, 4)]));
        assert_eq!(s.mean, 3.0);
        assert_eq!(s.cv, 0.0);
        assert_eq!(s.gini, 0.0);
    }

    #[test]
    fn degree_summary_star() {
        let s = degree_summary(&star5()).unwrap();
        assert_eq!(s.histogram, BTreeMap::from([(1, 4), (4, 1)]));
        assert!((s.mean - 1.6).abs() < 1e-12);
        // hand count: sum |d_i - d_j| over ordered pairs = 24
        assert!((s.gini - 24.0 / (2.0 * 25.0 * 1.6)).abs() < 1e-12);
        assert!(s.gini > 0.0);
    }

    #[test]
    fn distance_stats_examples() {
        let star = star5();
        let s = distance_stats(&star, 0).unwrap();
        assert_eq!((s.mean_dist, s.std_dist), (1.0, 0.0));

        let s = distance_stats(&path3(), 0).unwrap();
        assert!((s.mean_dist - 1.5).abs() < 1e-12);
        assert!((s.std_dist - 0.5).abs() < 1e-12);

        let s = distance_stats(&cycle(4), 2).unwrap();
        assert!((s.mean_dist - 4.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn distance_stats_rejects_disconnected() {
        let g = Graph::new(3);
        assert!(matches!(
            distance_stats(&g, 0),
            Err(Error::Structural(_))
        ));
    }

    #[test]
    fn select_targets_star_and_path() {
        let t = select_targets(&star5()).unwrap();
        assert_eq!((t.a, t.b, t.c), (0, 0, 0));

        let t = select_targets(&path3()).unwrap();
        assert_eq!((t.a, t.b, t.c), (1, 1, 1));
    }

    #[test]
    fn select_targets_ties_break_to_smallest_id() {
        let t = select_targets(&cycle(6)).unwrap();
        assert_eq!((t.a, t.b, t.c), (0, 0, 0));
    }

    #[test]
    fn bfs_matches_floyd_warshall_on_small_graphs() {
        use rand::Rng;
        let mut rng = crate::rng::substream(99, 0);
        for _ in 0..20 {
            let n = rng.random_range(2..=50usize);
            let mut g = Graph::new(n);
            for i in 0..n as u32 {
                for j in i + 1..n as u32 {
                    if rng.random::<f64>() < 0.15 {
                        g.add_edge(i, j).unwrap();
                    }
                }
            }
            // Floyd-Warshall oracle
            const INF: u64 = u64::MAX / 4;
            let mut d = vec![vec![INF; n]; n];
            for (i, row) in d.iter_mut().enumerate() {
                row[i] = 0;
            }
            for (i, j) in g.edges() {
                d[i as usize][j as usize] = 1;
                d[j as usize][i as usize] = 1;
            }
            for k in 0..n {
                for i in 0..n {
                    for j in 0..n {
                        let via = d[i][k] + d[k][j];
                        if via < d[i][j] {
                            d[i][j] = via;
                        }
                    }
                }
            }
            for src in 0..n as u32 {
                let bfs = g.bfs_distances(src);
                for j in 0..n {
                    let expect = d[src as usize][j];
                    if expect >= INF {
                        assert_eq!(bfs[j], u32::MAX);
                    } else {
                        assert_eq!(bfs[j] as u64, expect);
                    }
                }
            }
        }
    }
}
