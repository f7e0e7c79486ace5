//! k-medoid clustering over the Jaccard closeness matrix. The EM loop
//! alternates assigning nodes to their closest medoid (closeness is
//! maximized, not a distance minimized) and re-electing within each cluster
//! the node with the largest summed closeness to its members.

use std::collections::BTreeMap;

use rand::seq::index::sample;

use crate::cooccurrence::ClosenessMatrix;
use crate::error::{Error, Result};
use crate::rng::substream;

/// A partition of the matrix universe with one medoid per cluster.
#[derive(Debug, Clone, PartialEq)]
pub struct Clustering {
    pub num_clusters: usize,
    /// Medoid node id of each cluster, indexed by cluster.
    pub medoids: Vec<u32>,
    /// Node id to cluster index, covering the whole matrix universe.
    pub assignment: BTreeMap<u32, usize>,
    pub iterations_run: usize,
    /// Total closeness after each update step; non-decreasing.
    pub objective_trace: Vec<f64>,
    /// Nodes that had zero closeness to every medoid in the final
    /// assignment pass and fell back to cluster 0.
    pub zero_closeness_nodes: usize,
}

impl Clustering {
    /// Member node ids of each cluster, ascending within a cluster.
    pub fn members(&self) -> Vec<Vec<u32>> {
        let mut out = vec![Vec::new(); self.num_clusters];
        for (&node, &cluster) in &self.assignment {
            out[cluster].push(node);
        }
        out
    }

    /// Validates the partition invariants against a matrix universe.
    pub fn validate(&self, m: &ClosenessMatrix) -> Result<()> {
        if self.medoids.len() != self.num_clusters {
            return Err(Error::structural("one medoid per cluster required"));
        }
        let mut distinct = self.medoids.clone();
        distinct.sort_unstable();
        distinct.dedup();
        if distinct.len() != self.medoids.len() {
            return Err(Error::structural("medoids must be pairwise distinct"));
        }
        if self.assignment.len() != m.dimension() {
            return Err(Error::structural(format!(
                "{} assigned nodes but the matrix universe has {}",
                self.assignment.len(),
                m.dimension()
            )));
        }
        for &node in m.node_ids() {
            match self.assignment.get(&node) {
                Some(&c) if c < self.num_clusters => {}
                Some(&c) => {
                    return Err(Error::structural(format!(
                        "node {node} assigned to out-of-range cluster {c}"
                    )))
                }
                None => {
                    return Err(Error::structural(format!("node {node} is unassigned")));
                }
            }
        }
        for (cluster, &medoid) in self.medoids.iter().enumerate() {
            if self.assignment.get(&medoid) != Some(&cluster) {
                return Err(Error::structural(format!(
                    "medoid {medoid} is not assigned to its own cluster {cluster}"
                )));
            }
        }
        Ok(())
    }
}

/// Parameters of the clustering run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KMedoidParams {
    pub num_clusters: usize,
    pub seed: u64,
    pub max_iter: usize,
    /// Independent random initializations; the best final objective wins.
    pub restarts: usize,
}

impl Default for KMedoidParams {
    fn default() -> Self {
        KMedoidParams {
            num_clusters: 10,
            seed: 0,
            max_iter: 100,
            restarts: 5,
        }
    }
}

/// Runs k-medoid clustering. Initial medoids are drawn uniformly without
/// replacement; each restart uses its own substream of `params.seed`.
///
/// Tie-breaks are fixed for determinism and anti-cycling: equal closeness to
/// several medoids goes to the lowest cluster index, zero closeness to every
/// medoid goes to cluster 0, and a medoid update keeps the incumbent unless
/// a strictly better candidate exists (then the lowest node id among the
/// best candidates wins).
pub fn kmedoid(m: &ClosenessMatrix, params: &KMedoidParams) -> Result<Clustering> {
    let dim = m.dimension();
    let k = params.num_clusters;
    if k < 1 || k > dim {
        return Err(Error::parameter(format!(
            "cluster count must be in [1, {dim}], got {k}"
        )));
    }
    if params.max_iter < 1 {
        return Err(Error::parameter("max_iter must be at least 1"));
    }
    if params.restarts < 1 {
        return Err(Error::parameter("restarts must be at least 1"));
    }

    let mut best: Option<Clustering> = None;
    let mut best_objective = f64::NEG_INFINITY;
    for restart in 0..params.restarts {
        let mut rng = substream(params.seed, restart as u64);
        let mut medoids: Vec<usize> = sample(&mut rng, dim, k).into_vec();
        medoids.sort_unstable();

        let mut assignment = vec![0usize; dim];
        let mut zero_closeness = 0usize;
        let mut trace = Vec::new();
        let mut iterations = 0;
        for _ in 0..params.max_iter {
            iterations += 1;
            assign(m, &medoids, &mut assignment, &mut zero_closeness);
            let changed = update_medoids(m, &assignment, &mut medoids);
            trace.push(objective_of(m, &medoids, &assignment));
            if !changed {
                break;
            }
        }
        // Make the assignment consistent with the final medoids when the
        // loop exited by budget right after a medoid change.
        assign(m, &medoids, &mut assignment, &mut zero_closeness);

        let objective = objective_of(m, &medoids, &assignment);
        if objective > best_objective {
            best_objective = objective;
            best = Some(Clustering {
                num_clusters: k,
                medoids: medoids.iter().map(|&r| m.node_at(r)).collect(),
                assignment: assignment
                    .iter()
                    .enumerate()
                    .map(|(row, &c)| (m.node_at(row), c))
                    .collect(),
                iterations_run: iterations,
                objective_trace: trace,
                zero_closeness_nodes: zero_closeness,
            });
        }
    }
    Ok(best.expect("at least one restart"))
}

fn assign(
    m: &ClosenessMatrix,
    medoids: &[usize],
    assignment: &mut [usize],
    zero_closeness: &mut usize,
) {
    *zero_closeness = 0;
    let medoid_cluster: BTreeMap<usize, usize> = medoids
        .iter()
        .enumerate()
        .map(|(cluster, &row)| (row, cluster))
        .collect();
    for (row, slot) in assignment.iter_mut().enumerate() {
        if let Some(&cluster) = medoid_cluster.get(&row) {
            *slot = cluster;
            continue;
        }
        let mut best_cluster = 0usize;
        let mut best_closeness = 0.0f64;
        for (cluster, &med) in medoids.iter().enumerate() {
            let j = m.get(row, med);
            if j > best_closeness {
                best_closeness = j;
                best_cluster = cluster;
            }
        }
        if best_closeness == 0.0 {
            *zero_closeness += 1;
        }
        *slot = best_cluster;
    }
}

/// Elects within each cluster the member with maximal summed closeness to
/// the rest of the cluster. Returns whether any medoid changed.
fn update_medoids(m: &ClosenessMatrix, assignment: &[usize], medoids: &mut [usize]) -> bool {
    let k = medoids.len();
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); k];
    for (row, &cluster) in assignment.iter().enumerate() {
        members[cluster].push(row);
    }
    let mut changed = false;
    for (cluster, rows) in members.iter().enumerate() {
        let incumbent = medoids[cluster];
        let score = |candidate: usize| -> f64 {
            rows.iter()
                .filter(|&&r| r != candidate)
                .map(|&r| m.get(candidate, r))
                .sum()
        };
        let incumbent_score = score(incumbent);
        let mut best_row = incumbent;
        let mut best_score = incumbent_score;
        for &r in rows {
            let s = score(r);
            if s > best_score || (s == best_score && best_row != incumbent && r < best_row) {
                best_score = s;
                best_row = r;
            }
        }
        if best_score > incumbent_score {
            medoids[cluster] = best_row;
            changed = true;
        }
    }
    changed
}

fn objective_of(m: &ClosenessMatrix, medoids: &[usize], assignment: &[usize]) -> f64 {
    let mut total = 0.0;
    for (cluster, &med) in medoids.iter().enumerate() {
        let mut sum = 0.0;
        for (row, &c) in assignment.iter().enumerate() {
            if c == cluster && row != med {
                sum += m.get(med, row);
            }
        }
        total += sum;
    }
    total
}

/// Total closeness of a clustering: the sum over clusters of each member's
/// closeness to its medoid, excluding the medoid's self-term.
pub fn objective(cl: &Clustering, m: &ClosenessMatrix) -> Result<f64> {
    cl.validate(m)?;
    let mut total = 0.0;
    for (cluster, &medoid) in cl.medoids.iter().enumerate() {
        let med_row = m
            .row_of(medoid)
            .ok_or_else(|| Error::structural(format!("medoid {medoid} not in the matrix")))?;
        let mut sum = 0.0;
        for (&node, &c) in &cl.assignment {
            if c == cluster && node != medoid {
                let row = m
                    .row_of(node)
                    .ok_or_else(|| Error::structural(format!("node {node} not in the matrix")))?;
                sum += m.get(med_row, row);
            }
        }
        total += sum;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn matrix(ids: &[u32], rows: &[&[f64]]) -> ClosenessMatrix {
        let entries: Vec<f64> = rows.iter().flat_map(|r| r.iter().copied()).collect();
        ClosenessMatrix::from_parts(ids.to_vec(), entries).unwrap()
    }

    /// Two blocks {0,1} and {2,3}: closeness 1 within, 0 across.
    fn two_blocks() -> ClosenessMatrix {
        matrix(
            &[0, 1, 2, 3],
            &[
                &[1.0, 1.0, 0.0, 0.0],
                &[1.0, 1.0, 0.0, 0.0],
                &[0.0, 0.0, 1.0, 1.0],
                &[0.0, 0.0, 1.0, 1.0],
            ],
        )
    }

    #[test]
    fn singleton_clusters_have_zero_objective() {
        let m = two_blocks();
        let cl = kmedoid(
            &m,
            &KMedoidParams {
                num_clusters: 4,
                seed: 0,
                max_iter: 10,
                restarts: 1,
            },
        )
        .unwrap();
        assert_eq!(cl.medoids.len(), 4);
        assert_eq!(objective(&cl, &m).unwrap(), 0.0);
    }

    #[test]
    fn two_disjoint_blocks_are_recovered_for_any_seed() {
        let m = two_blocks();
        for seed in 0..10 {
            let cl = kmedoid(
                &m,
                &KMedoidParams {
                    num_clusters: 2,
                    seed,
                    max_iter: 20,
                    restarts: 1,
                },
            )
            .unwrap();
            let a = cl.assignment[&0];
            assert_eq!(cl.assignment[&1], a);
            let b = cl.assignment[&2];
            assert_eq!(cl.assignment[&3], b);
            assert_ne!(a, b);
            assert!((objective(&cl, &m).unwrap() - 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn one_cluster_medoid_is_the_exhaustive_argmax() {
        use rand::Rng;
        let mut rng = substream(17, 0);
        for _ in 0..20 {
            let dim = rng.random_range(2..=20usize);
            let mut entries = vec![0.0f64; dim * dim];
            for r in 0..dim {
                entries[r * dim + r] = 1.0;
                for s in r + 1..dim {
                    let v: f64 = rng.random();
                    entries[r * dim + s] = v;
                    entries[s * dim + r] = v;
                }
            }
            let ids: Vec<u32> = (0..dim as u32).collect();
            let m = ClosenessMatrix::from_parts(ids, entries).unwrap();
            let cl = kmedoid(
                &m,
                &KMedoidParams {
                    num_clusters: 1,
                    seed: 3,
                    max_iter: 50,
                    restarts: 1,
                },
            )
            .unwrap();
            // exhaustive argmax of the summed closeness
            let mut best_row = 0;
            let mut best = f64::NEG_INFINITY;
            for cand in 0..dim {
                let s: f64 = (0..dim).filter(|&r| r != cand).map(|r| m.get(cand, r)).sum();
                if s > best {
                    best = s;
                    best_row = cand;
                }
            }
            assert_eq!(cl.medoids[0], m.node_at(best_row));
            assert!((objective(&cl, &m).unwrap() - best).abs() < 1e-12);
        }
    }

    #[test]
    fn objective_of_pair_cluster_counts_nonmedoid_terms_once() {
        let m = matrix(
            &[0, 1],
            &[&[1.0, 1.0 / 3.0], &[1.0 / 3.0, 1.0]],
        );
        let cl = Clustering {
            num_clusters: 1,
            medoids: vec![0],
            assignment: [(0, 0), (1, 0)].into_iter().collect(),
            iterations_run: 1,
            objective_trace: vec![],
            zero_closeness_nodes: 0,
        };
        assert!((objective(&cl, &m).unwrap() - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn perfect_block_objective_counts_all_nonmedoid_members() {
        let m = matrix(
            &[0, 1, 2, 3],
            &[
                &[1.0, 1.0, 1.0, 1.0],
                &[1.0, 1.0, 1.0, 1.0],
                &[1.0, 1.0, 1.0, 1.0],
                &[1.0, 1.0, 1.0, 1.0],
            ],
        );
        let cl = kmedoid(
            &m,
            &KMedoidParams {
                num_clusters: 1,
                seed: 0,
                max_iter: 10,
                restarts: 1,
            },
        )
        .unwrap();
        assert!((objective(&cl, &m).unwrap() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn cluster_reduced_to_its_medoid_persists_as_a_singleton() {
        // node 2 has zero closeness to everyone; when it starts as a medoid
        // its cluster keeps only itself
        let m = matrix(
            &[0, 1, 2],
            &[
                &[1.0, 0.9, 0.0],
                &[0.9, 1.0, 0.0],
                &[0.0, 0.0, 1.0],
            ],
        );
        for seed in 0..10 {
            let cl = kmedoid(
                &m,
                &KMedoidParams {
                    num_clusters: 2,
                    seed,
                    max_iter: 20,
                    restarts: 1,
                },
            )
            .unwrap();
            cl.validate(&m).unwrap();
            let members = cl.members();
            assert_eq!(members.iter().filter(|c| c.len() == 1).count(), 1);
        }
    }

    #[test]
    fn rejects_more_clusters_than_nodes() {
        let m = two_blocks();
        let err = kmedoid(
            &m,
            &KMedoidParams {
                num_clusters: 5,
                seed: 0,
                max_iter: 10,
                restarts: 1,
            },
        );
        assert!(matches!(err, Err(Error::Parameter(_))));
    }

    #[test]
    fn deterministic_for_fixed_seed() {
        use rand::Rng;
        let mut rng = substream(23, 0);
        let dim = 30;
        let mut entries = vec![0.0f64; dim * dim];
        for r in 0..dim {
            entries[r * dim + r] = 1.0;
            for s in r + 1..dim {
                let v: f64 = rng.random();
                entries[r * dim + s] = v;
                entries[s * dim + r] = v;
            }
        }
        let m = ClosenessMatrix::from_parts((0..dim as u32).collect(), entries).unwrap();
        let p = KMedoidParams {
            num_clusters: 4,
            seed: 9,
            max_iter: 100,
            restarts: 3,
        };
        let a = kmedoid(&m, &p).unwrap();
        let b = kmedoid(&m, &p).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn objective_trace_is_non_decreasing() {
        use rand::Rng;
        let mut rng = substream(31, 0);
        for trial in 0..10 {
            let dim = rng.random_range(5..=25usize);
            let mut entries = vec![0.0f64; dim * dim];
            for r in 0..dim {
                entries[r * dim + r] = 1.0;
                for s in r + 1..dim {
                    let v: f64 = rng.random();
                    entries[r * dim + s] = v;
                    entries[s * dim + r] = v;
                }
            }
            let m = ClosenessMatrix::from_parts((0..dim as u32).collect(), entries).unwrap();
            let cl = kmedoid(
                &m,
                &KMedoidParams {
                    num_clusters: 3,
                    seed: trial,
                    max_iter: 100,
                    restarts: 1,
                },
            )
            .unwrap();
            for w in cl.objective_trace.windows(2) {
                assert!(w[1] >= w[0] - 1e-9, "trace decreased: {w:?}");
            }
        }
    }
}
