//! The heuristic predictor function. A basket scores highly when, in many
//! clusters, it contains a rarely occurring member; such baskets are the
//! most likely to sit next to an empty spot left by a hidden node.

use crate::clustering::Clustering;
use crate::cooccurrence::FrequencyTable;
use crate::dataset::{Basket, Dataset};
use crate::error::{Error, Result};

/// How a cluster's contribution to a basket score is computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ScoreVariant {
    /// Per cluster, the maximum of `1 / F(node)` over the cluster members
    /// present in the basket (0 when none is). The default.
    #[default]
    InverseFrequency,
    /// Per cluster, the minimum raw frequency `F(node)` over the cluster
    /// members present in the basket (0 when none is). Kept for auditing the
    /// alternative reading of the scoring rule; note it ranks frequent
    /// baskets first instead of rare ones.
    MinFrequency,
}

impl ScoreVariant {
    pub fn name(&self) -> &'static str {
        match self {
            ScoreVariant::InverseFrequency => "inverse-frequency",
            ScoreVariant::MinFrequency => "eq11-literal",
        }
    }
}

/// Baskets ordered by descending score.
#[derive(Debug, Clone, PartialEq)]
pub struct RankedBaskets {
    /// Basket indices, best first; ties broken by ascending index.
    pub order: Vec<usize>,
    /// Scores aligned with `order` (non-increasing).
    pub scores: Vec<f64>,
}

impl RankedBaskets {
    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }
}

/// Scores one basket: the mean over clusters of the cluster term selected by
/// `variant`. Basket members outside the clustering universe contribute
/// nothing.
pub fn basket_score(
    b: &Basket,
    freq: &FrequencyTable,
    cl: &Clustering,
    variant: ScoreVariant,
) -> Result<f64> {
    let k = cl.num_clusters;
    let mut inverse_best = vec![0.0f64; k];
    let mut min_freq: Vec<Option<u32>> = vec![None; k];
    for &node in &b.members {
        let Some(&cluster) = cl.assignment.get(&node) else {
            continue;
        };
        let f = freq.count(node);
        if f == 0 {
            return Err(Error::structural(format!(
                "node {node} is clustered but never occurs in the dataset"
            )));
        }
        let inv = 1.0 / f as f64;
        if inv > inverse_best[cluster] {
            inverse_best[cluster] = inv;
        }
        min_freq[cluster] = Some(match min_freq[cluster] {
            Some(cur) => cur.min(f),
            None => f,
        });
    }
    let sum: f64 = match variant {
        ScoreVariant::InverseFrequency => inverse_best.iter().sum(),
        ScoreVariant::MinFrequency => min_freq
            .iter()
            .map(|t| t.map_or(0.0, |f| f as f64))
            .sum(),
    };
    Ok(sum / k as f64)
}

/// Scores every basket and sorts by descending score, ties by ascending
/// basket index.
pub fn rank_baskets(
    d: &Dataset,
    freq: &FrequencyTable,
    cl: &Clustering,
    variant: ScoreVariant,
) -> Result<RankedBaskets> {
    let mut scores = Vec::with_capacity(d.baskets.len());
    for b in &d.baskets {
        scores.push(basket_score(b, freq, cl, variant)?);
    }
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| {
        scores[b]
            .partial_cmp(&scores[a])
            .expect("finite scores")
            .then(a.cmp(&b))
    });
    let ordered_scores = order.iter().map(|&i| scores[i]).collect();
    Ok(RankedBaskets {
        order,
        scores: ordered_scores,
    })
}

/// Spearman rank correlation between two rankings of the same baskets.
///
/// Both rankings are total orders, so the classic permutation formula
/// applies: `1 - 6 * sum(d^2) / (n (n^2 - 1))`.
pub fn spearman(a: &RankedBaskets, b: &RankedBaskets) -> Result<f64> {
    let n = a.order.len();
    if b.order.len() != n {
        return Err(Error::structural(format!(
            "rankings cover {n} vs {} baskets",
            b.order.len()
        )));
    }
    if n < 2 {
        return Ok(1.0);
    }
    let rank_of = |r: &RankedBaskets| -> Result<Vec<usize>> {
        let mut ranks = vec![usize::MAX; n];
        for (pos, &basket) in r.order.iter().enumerate() {
            if basket >= n || ranks[basket] != usize::MAX {
                return Err(Error::structural("ranking is not a permutation"));
            }
            ranks[basket] = pos;
        }
        Ok(ranks)
    };
    let ra = rank_of(a)?;
    let rb = rank_of(b)?;
    let d2: f64 = ra
        .iter()
        .zip(&rb)
        .map(|(&x, &y)| {
            let d = x as f64 - y as f64;
            d * d
        })
        .sum();
    let nf = n as f64;
    Ok(1.0 - 6.0 * d2 / (nf * (nf * nf - 1.0)))
}
