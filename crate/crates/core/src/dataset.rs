//! Basket-shaped interaction records simulated over a graph, and the hiding
//! step that deletes a node set from them to create the observation the
//! predictor has to explain.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// One interaction record: the set of nodes observed together.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Basket {
    pub index: usize,
    pub members: BTreeSet<u32>,
}

/// An ordered list of baskets over a fixed node universe.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dataset {
    pub baskets: Vec<Basket>,
    /// Node ids are `0..node_universe`.
    pub node_universe: u32,
}

impl Dataset {
    pub fn len(&self) -> usize {
        self.baskets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.baskets.is_empty()
    }
}

/// Which node to hide around and how many nodes to hide in total.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HidingSpec {
    pub center: u32,
    pub k_hidden: usize,
}

/// Ground truth produced by [`hide_nodes`]: what was deleted, which baskets
/// changed, and the observed neighbors of the hidden set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HiddenTruth {
    pub hidden_nodes: BTreeSet<u32>,
    pub modified_baskets: BTreeSet<usize>,
    pub gateway_nodes: BTreeSet<u32>,
}

/// Simulates one basket per node: basket `j` holds every node within
/// `radius` hops of initiator `j`, including `j` itself. Deterministic.
pub fn simulate_baskets(g: &Graph, radius: u32) -> Result<Dataset> {
    if radius < 1 {
        return Err(Error::parameter("basket radius must be at least 1"));
    }
    if !g.is_connected() {
        return Err(Error::structural(
            "basket simulation requires a connected graph",
        ));
    }
    let n = g.node_count();
    let baskets = (0..n as u32)
        .map(|j| {
            let dist = g.bfs_distances(j);
            let members = dist
                .iter()
                .enumerate()
                .filter(|&(_, &d)| d <= radius)
                .map(|(i, _)| i as u32)
                .collect();
            Basket {
                index: j as usize,
                members,
            }
        })
        .collect();
    Ok(Dataset {
        baskets,
        node_universe: n as u32,
    })
}

/// Mean basket size over all initiators, as a fraction of the node count.
pub fn coverage_fraction(g: &Graph, radius: u32) -> Result<f64> {
    let d = simulate_baskets(g, radius)?;
    let n = g.node_count() as f64;
    let total: usize = d.baskets.iter().map(|b| b.members.len()).sum();
    Ok(total as f64 / (n * n))
}

/// Smallest radius whose coverage fraction reaches `min_coverage`.
///
/// Saturates at the graph diameter, where coverage is 1.0, so it terminates
/// for any threshold in `(0, 1]`.
pub fn auto_radius(g: &Graph, min_coverage: f64) -> Result<u32> {
    if !(min_coverage > 0.0 && min_coverage <= 1.0) {
        return Err(Error::parameter(format!(
            "coverage threshold must be in (0, 1], got {min_coverage}"
        )));
    }
    let mut radius = 1;
    loop {
        let c = coverage_fraction(g, radius)?;
        if c >= min_coverage || c >= 1.0 {
            return Ok(radius);
        }
        radius += 1;
    }
}

/// Expands breadth-first from the center (center first, then its neighbors
/// in ascending id, then the 2-hop ring, ...) and truncates to exactly
/// `min(k_hidden, |n|)` nodes.
pub fn build_hidden_set(g: &Graph, spec: &HidingSpec) -> Result<BTreeSet<u32>> {
    let n = g.node_count();
    if spec.center as usize >= n {
        return Err(Error::parameter(format!(
            "center {} out of range for {n} nodes",
            spec.center
        )));
    }
    if spec.k_hidden < 1 {
        return Err(Error::parameter("hidden set size must be at least 1"));
    }
    let want = spec.k_hidden.min(n);
    let mut order = Vec::with_capacity(want);
    let mut seen = vec![false; n];
    let mut queue = std::collections::VecDeque::new();
    seen[spec.center as usize] = true;
    queue.push_back(spec.center);
    while let Some(u) = queue.pop_front() {
        order.push(u);
        if order.len() == want {
            break;
        }
        for &v in g.neighbors(u) {
            if !seen[v as usize] {
                seen[v as usize] = true;
                queue.push_back(v);
            }
        }
    }
    Ok(order.into_iter().collect())
}

/// Deletes `hidden` from every basket, keeping order, indices and emptied
/// baskets, and records the ground truth of the deletion.
pub fn hide_nodes(
    original: &Dataset,
    hidden: &BTreeSet<u32>,
    g: &Graph,
) -> Result<(Dataset, HiddenTruth)> {
    if hidden.is_empty() {
        return Err(Error::parameter("hidden set must not be empty"));
    }
    if let Some(&bad) = hidden.iter().find(|&&x| x >= original.node_universe) {
        return Err(Error::parameter(format!(
            "hidden node {bad} outside the universe of {} nodes",
            original.node_universe
        )));
    }
    if hidden.len() >= original.node_universe as usize {
        return Err(Error::parameter("cannot hide every node in the universe"));
    }
    if g.node_count() as u32 != original.node_universe {
        return Err(Error::structural(format!(
            "graph has {} nodes but the dataset universe is {}",
            g.node_count(),
            original.node_universe
        )));
    }
    let mut baskets = Vec::with_capacity(original.baskets.len());
    let mut modified_baskets = BTreeSet::new();
    for b in &original.baskets {
        let members: BTreeSet<u32> = b.members.difference(hidden).copied().collect();
        if members.len() != b.members.len() {
            modified_baskets.insert(b.index);
        }
        baskets.push(Basket {
            index: b.index,
            members,
        });
    }
    let mut gateway_nodes = BTreeSet::new();
    for &h in hidden {
        for &v in g.neighbors(h) {
            if !hidden.contains(&v) {
                gateway_nodes.insert(v);
            }
        }
    }
    let observed = Dataset {
        baskets,
        node_universe: original.node_universe,
    };
    let truth = HiddenTruth {
        hidden_nodes: hidden.clone(),
        modified_baskets,
        gateway_nodes,
    };
    Ok((observed, truth))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path3() -> Graph {
        let mut g = Graph::new(3);
        g.add_edge(0, 1).unwrap();
        g.add_edge(1, 2).unwrap();
        g
    }

    fn star5() -> Graph {
        let mut g = Graph::new(5);
        for leaf in 1..5 {
            g.add_edge(0, leaf).unwrap();
        }
        g
    }

    fn cycle6() -> Graph {
        let mut g = Graph::new(6);
        for i in 0..6 {
            g.add_edge(i, (i + 1) % 6).unwrap();
        }
        g
    }

    fn set(ids: &[u32]) -> BTreeSet<u32> {
        ids.iter().copied().collect()
    }

    #[test]
    fn one_hop_baskets_on_a_path() {
        let d = simulate_baskets(&path3(), 1).unwrap();
        assert_eq!(d.len(), 3);
        assert_eq!(d.baskets[0].members, set(&[0, 1]));
        assert_eq!(d.baskets[1].members, set(&[0, 1, 2]));
        assert_eq!(d.baskets[2].members, set(&[1, 2]));
    }

    #[test]
    fn saturating_radius_gives_full_baskets() {
        let d = simulate_baskets(&cycle6(), 10).unwrap();
        for b in &d.baskets {
            assert_eq!(b.members.len(), 6);
        }
        assert_eq!(coverage_fraction(&cycle6(), 10).unwrap(), 1.0);
    }

    #[test]
    fn coverage_on_a_cycle() {
        assert!((coverage_fraction(&cycle6(), 1).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn radius_zero_is_rejected() {
        assert!(matches!(
            simulate_baskets(&path3(), 0),
            Err(Error::Parameter(_))
        ));
    }

    #[test]
    fn baskets_grow_monotonically_with_radius() {
        let g = cycle6();
        let d1 = simulate_baskets(&g, 1).unwrap();
        let d2 = simulate_baskets(&g, 2).unwrap();
        for (a, b) in d1.baskets.iter().zip(&d2.baskets) {
            assert!(a.members.is_subset(&b.members));
        }
    }

    #[test]
    fn hidden_set_is_a_truncated_bfs_ball() {
        let hub = HidingSpec {
            center: 0,
            k_hidden: 1,
        };
        assert_eq!(build_hidden_set(&star5(), &hub).unwrap(), set(&[0]));

        let spec = HidingSpec {
            center: 1,
            k_hidden: 3,
        };
        assert_eq!(build_hidden_set(&path3(), &spec).unwrap(), set(&[0, 1, 2]));

        let all = HidingSpec {
            center: 2,
            k_hidden: 99,
        };
        assert_eq!(
            build_hidden_set(&cycle6(), &all).unwrap().len(),
            6,
            "truncation bound is the node count"
        );
    }

    #[test]
    fn hidden_set_truncation_respects_bfs_order() {
        // star: center=leaf 1, k=2 -> {1, hub}; hub discovered before leaves.
        let spec = HidingSpec {
            center: 1,
            k_hidden: 2,
        };
        assert_eq!(build_hidden_set(&star5(), &spec).unwrap(), set(&[0, 1]));
    }

    #[test]
    fn hiding_deletes_members_and_records_truth() {
        let g = path3();
        let original = simulate_baskets(&g, 1).unwrap();
        let (observed, truth) = hide_nodes(&original, &set(&[1]), &g).unwrap();
        assert_eq!(observed.baskets[0].members, set(&[0]));
        assert_eq!(observed.baskets[1].members, set(&[0, 2]));
        assert_eq!(observed.baskets[2].members, set(&[2]));
        assert_eq!(truth.modified_baskets, [0, 1, 2].into_iter().collect());
        assert_eq!(truth.gateway_nodes, set(&[0, 2]));
    }

    #[test]
    fn hiding_a_node_absent_from_baskets_changes_nothing() {
        let g = star5();
        let mut original = simulate_baskets(&g, 1).unwrap();
        // remove node 4 from all baskets so it only exists in the graph
        for b in &mut original.baskets {
            b.members.remove(&4);
        }
        let (observed, truth) = hide_nodes(&original, &set(&[4]), &g).unwrap();
        assert_eq!(observed.baskets, original.baskets);
        assert!(truth.modified_baskets.is_empty());
        assert_eq!(truth.gateway_nodes, set(&[0]));
    }

    #[test]
    fn hiding_rejects_degenerate_sets() {
        let g = path3();
        let original = simulate_baskets(&g, 1).unwrap();
        assert!(hide_nodes(&original, &set(&[]), &g).is_err());
        assert!(hide_nodes(&original, &set(&[0, 1, 2]), &g).is_err());
        assert!(hide_nodes(&original, &set(&[7]), &g).is_err());
    }
}
