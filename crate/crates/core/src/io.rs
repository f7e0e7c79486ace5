//! Text codecs for every artifact the pipeline reads or writes. Saved output
//! is canonical (sorted, stable), so identical values always serialize to
//! identical bytes.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::clustering::Clustering;
use crate::dataset::{Basket, Dataset, HiddenTruth};
use crate::error::{Error, Result};
use crate::evaluation::PrecisionCurve;
use crate::graph::Graph;
use crate::predictor::RankedBaskets;

/// Formats a float with 12 significant digits.
pub fn fmt_sig12(x: f64) -> String {
    format!("{x:.11e}")
}

pub fn read_to_string(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(&path.display().to_string(), e))
}

pub fn write_string(path: &Path, content: &str) -> Result<()> {
    fs::write(path, content).map_err(|e| Error::io(&path.display().to_string(), e))
}

// ---------------------------------------------------------------------------
// graph files: `#nodes <n>` header, one `<i>\t<j>` line per edge with i < j,
// sorted by (i, j)

pub fn graph_to_string(g: &Graph) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "#nodes {}", g.node_count());
    for (i, j) in g.edges() {
        let _ = writeln!(out, "{i}\t{j}");
    }
    out
}

pub fn graph_from_string(text: &str, path: &str) -> Result<Graph> {
    let mut lines = text.lines().enumerate();
    let Some((_, header)) = lines.next() else {
        return Err(Error::parse(path, 1, "empty file, expected '#nodes <n>' header"));
    };
    let n: usize = header
        .strip_prefix("#nodes ")
        .and_then(|s| s.trim().parse().ok())
        .ok_or_else(|| Error::parse(path, 1, format!("expected '#nodes <n>' header, got '{header}'")))?;
    let mut g = Graph::new(n);
    for (idx, line) in lines {
        let lineno = idx + 1;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let mut parts = line.split_whitespace();
        let (i, j) = match (parts.next(), parts.next(), parts.next()) {
            (Some(a), Some(b), None) => {
                let i: u32 = a
                    .parse()
                    .map_err(|_| Error::parse(path, lineno, format!("bad node id '{a}'")))?;
                let j: u32 = b
                    .parse()
                    .map_err(|_| Error::parse(path, lineno, format!("bad node id '{b}'")))?;
                (i, j)
            }
            _ => {
                return Err(Error::parse(path, lineno, format!("expected '<i>\\t<j>', got '{line}'")));
            }
        };
        g.add_edge(i, j)
            .map_err(|e| Error::parse(path, lineno, e.to_string()))?;
    }
    Ok(g)
}

pub fn save_graph(path: &Path, g: &Graph) -> Result<()> {
    write_string(path, &graph_to_string(g))
}

pub fn load_graph(path: &Path) -> Result<Graph> {
    graph_from_string(&read_to_string(path)?, &path.display().to_string())
}

// ---------------------------------------------------------------------------
// dataset files: `#nodes <n>` header, one `<index>:<id>,<id>,...` line per
// basket with member ids ascending; an empty basket renders as `<index>:`

pub fn dataset_to_string(d: &Dataset) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "#nodes {}", d.node_universe);
    for b in &d.baskets {
        let ids: Vec<String> = b.members.iter().map(|m| m.to_string()).collect();
        let _ = writeln!(out, "{}:{}", b.index, ids.join(","));
    }
    out
}

pub fn dataset_from_string(text: &str, path: &str) -> Result<Dataset> {
    let mut lines = text.lines().enumerate();
    let Some((_, header)) = lines.next() else {
        return Err(Error::parse(path, 1, "empty file, expected '#nodes <n>' header"));
    };
    let universe: u32 = header
        .strip_prefix("#nodes ")
        .and_then(|s| s.trim().parse().ok())
        .ok_or_else(|| Error::parse(path, 1, format!("expected '#nodes <n>' header, got '{header}'")))?;
    let mut baskets = Vec::new();
    for (idx, line) in lines {
        let lineno = idx + 1;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let Some((index_part, members_part)) = line.split_once(':') else {
            return Err(Error::parse(path, lineno, format!("expected '<index>:<ids>', got '{line}'")));
        };
        let index: usize = index_part
            .trim()
            .parse()
            .map_err(|_| Error::parse(path, lineno, format!("bad basket index '{index_part}'")))?;
        if index != baskets.len() {
            return Err(Error::parse(
                path,
                lineno,
                format!("basket index {index} out of order (expected {})", baskets.len()),
            ));
        }
        let mut members = BTreeSet::new();
        if !members_part.trim().is_empty() {
            for id_str in members_part.split(',') {
                let id: u32 = id_str
                    .trim()
                    .parse()
                    .map_err(|_| Error::parse(path, lineno, format!("bad node id '{id_str}'")))?;
                if id >= universe {
                    return Err(Error::parse(
                        path,
                        lineno,
                        format!("node id {id} outside the universe of {universe} nodes"),
                    ));
                }
                if !members.insert(id) {
                    return Err(Error::parse(path, lineno, format!("duplicate member {id}")));
                }
            }
        }
        baskets.push(Basket { index, members });
    }
    if baskets.is_empty() {
        return Err(Error::parse(path, 1, "dataset contains no baskets"));
    }
    Ok(Dataset {
        baskets,
        node_universe: universe,
    })
}

pub fn save_dataset(path: &Path, d: &Dataset) -> Result<()> {
    write_string(path, &dataset_to_string(d))
}

pub fn load_dataset(path: &Path) -> Result<Dataset> {
    dataset_from_string(&read_to_string(path)?, &path.display().to_string())
}

// ---------------------------------------------------------------------------
// truth files: three lines `hidden=`, `modified=`, `gateways=`, each a
// comma-separated ascending list

pub fn truth_to_string(t: &HiddenTruth) -> String {
    let join_u32 = |s: &BTreeSet<u32>| {
        s.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
    };
    let modified = t
        .modified_baskets
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(",");
    format!(
        "hidden={}\nmodified={}\ngateways={}\n",
        join_u32(&t.hidden_nodes),
        modified,
        join_u32(&t.gateway_nodes)
    )
}

pub fn truth_from_string(text: &str, path: &str) -> Result<HiddenTruth> {
    let mut lines = text.lines();
    let mut field = |prefix: &str, lineno: usize| -> Result<Vec<u64>> {
        let line = lines
            .next()
            .ok_or_else(|| Error::parse(path, lineno, format!("missing '{prefix}=' line")))?;
        let body = line
            .strip_prefix(prefix)
            .and_then(|r| r.strip_prefix('='))
            .ok_or_else(|| Error::parse(path, lineno, format!("expected '{prefix}=<ids>', got '{line}'")))?;
        if body.trim().is_empty() {
            return Ok(Vec::new());
        }
        body.split(',')
            .map(|s| {
                s.trim()
                    .parse::<u64>()
                    .map_err(|_| Error::parse(path, lineno, format!("bad id '{s}'")))
            })
            .collect()
    };
    let hidden = field("hidden", 1)?;
    let modified = field("modified", 2)?;
    let gateways = field("gateways", 3)?;
    Ok(HiddenTruth {
        hidden_nodes: hidden.into_iter().map(|v| v as u32).collect(),
        modified_baskets: modified.into_iter().map(|v| v as usize).collect(),
        gateway_nodes: gateways.into_iter().map(|v| v as u32).collect(),
    })
}

pub fn save_truth(path: &Path, t: &HiddenTruth) -> Result<()> {
    write_string(path, &truth_to_string(t))
}

pub fn load_truth(path: &Path) -> Result<HiddenTruth> {
    truth_from_string(&read_to_string(path)?, &path.display().to_string())
}

// ---------------------------------------------------------------------------
// clustering files: one `<cluster_index>:<medoid>|<member ids ascending>`
// line per cluster

pub fn clustering_to_string(cl: &Clustering) -> String {
    let mut out = String::new();
    let members = cl.members();
    for (cluster, medoid) in cl.medoids.iter().enumerate() {
        let ids: Vec<String> = members[cluster].iter().map(|m| m.to_string()).collect();
        let _ = writeln!(out, "{cluster}:{medoid}|{}", ids.join(","));
    }
    out
}

pub fn clustering_from_string(text: &str, path: &str) -> Result<Clustering> {
    let mut medoids = Vec::new();
    let mut assignment = std::collections::BTreeMap::new();
    for (idx, line) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let parsed = (|| -> Option<(usize, u32, Vec<u32>)> {
            let (cluster, rest) = line.split_once(':')?;
            let (medoid, members) = rest.split_once('|')?;
            let cluster: usize = cluster.trim().parse().ok()?;
            let medoid: u32 = medoid.trim().parse().ok()?;
            let members: Option<Vec<u32>> = if members.trim().is_empty() {
                Some(Vec::new())
            } else {
                members
                    .split(',')
                    .map(|s| s.trim().parse::<u32>().ok())
                    .collect()
            };
            Some((cluster, medoid, members?))
        })();
        let Some((cluster, medoid, members)) = parsed else {
            return Err(Error::parse(
                path,
                lineno,
                format!("expected '<cluster>:<medoid>|<ids>', got '{line}'"),
            ));
        };
        if cluster != medoids.len() {
            return Err(Error::parse(
                path,
                lineno,
                format!("cluster index {cluster} out of order (expected {})", medoids.len()),
            ));
        }
        if !members.contains(&medoid) {
            return Err(Error::parse(
                path,
                lineno,
                format!("medoid {medoid} is not listed among the cluster members"),
            ));
        }
        for &m in &members {
            if assignment.insert(m, cluster).is_some() {
                return Err(Error::parse(
                    path,
                    lineno,
                    format!("node {m} assigned to more than one cluster"),
                ));
            }
        }
        medoids.push(medoid);
    }
    if medoids.is_empty() {
        return Err(Error::parse(path, 1, "clustering file contains no clusters"));
    }
    Ok(Clustering {
        num_clusters: medoids.len(),
        medoids,
        assignment,
        iterations_run: 0,
        objective_trace: Vec::new(),
        zero_closeness_nodes: 0,
    })
}

pub fn save_clustering(path: &Path, cl: &Clustering) -> Result<()> {
    write_string(path, &clustering_to_string(cl))
}

pub fn load_clustering(path: &Path) -> Result<Clustering> {
    clustering_from_string(&read_to_string(path)?, &path.display().to_string())
}

// ---------------------------------------------------------------------------
// ranking files: CSV `rank,basket_index,score`, scores to 12 significant
// digits

pub fn ranking_to_string(r: &RankedBaskets) -> String {
    let mut out = String::from("rank,basket_index,score\n");
    for (pos, (&basket, &score)) in r.order.iter().zip(&r.scores).enumerate() {
        let _ = writeln!(out, "{},{basket},{}", pos + 1, fmt_sig12(score));
    }
    out
}

pub fn ranking_from_string(text: &str, path: &str) -> Result<RankedBaskets> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, "rank,basket_index,score")) => {}
        _ => return Err(Error::parse(path, 1, "expected 'rank,basket_index,score' header")),
    }
    let mut order = Vec::new();
    let mut scores = Vec::new();
    for (idx, line) in lines {
        let lineno = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 3 {
            return Err(Error::parse(path, lineno, format!("expected 3 fields, got '{line}'")));
        }
        let rank: usize = fields[0]
            .parse()
            .map_err(|_| Error::parse(path, lineno, format!("bad rank '{}'", fields[0])))?;
        if rank != order.len() + 1 {
            return Err(Error::parse(path, lineno, format!("rank {rank} out of order")));
        }
        let basket: usize = fields[1]
            .parse()
            .map_err(|_| Error::parse(path, lineno, format!("bad basket index '{}'", fields[1])))?;
        let score: f64 = fields[2]
            .parse()
            .map_err(|_| Error::parse(path, lineno, format!("bad score '{}'", fields[2])))?;
        order.push(basket);
        scores.push(score);
    }
    if order.is_empty() {
        return Err(Error::parse(path, 1, "ranking contains no baskets"));
    }
    Ok(RankedBaskets { order, scores })
}

pub fn save_ranking(path: &Path, r: &RankedBaskets) -> Result<()> {
    write_string(path, &ranking_to_string(r))
}

pub fn load_ranking(path: &Path) -> Result<RankedBaskets> {
    ranking_from_string(&read_to_string(path)?, &path.display().to_string())
}

// ---------------------------------------------------------------------------
// precision files: CSV `m_ret,p` for a single curve, or
// `m_ret,mean_p,min_p,max_p` for a repetition aggregate

pub fn precision_to_string(c: &PrecisionCurve) -> String {
    let mut out = String::from("m_ret,p\n");
    for (i, &p) in c.values.iter().enumerate() {
        let _ = writeln!(out, "{},{}", i + 1, fmt_sig12(p));
    }
    out
}

pub fn precision_bands_to_string(mean: &[f64], min: &[f64], max: &[f64]) -> String {
    let mut out = String::from("m_ret,mean_p,min_p,max_p\n");
    for i in 0..mean.len() {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            i + 1,
            fmt_sig12(mean[i]),
            fmt_sig12(min[i]),
            fmt_sig12(max[i])
        );
    }
    out
}

/// Loads the depth-indexed series of a precision CSV. For aggregate files
/// the mean column is returned.
pub fn precision_series_from_string(text: &str, path: &str) -> Result<Vec<f64>> {
    let mut lines = text.lines().enumerate();
    let header = match lines.next() {
        Some((_, h)) => h,
        None => return Err(Error::parse(path, 1, "empty precision file")),
    };
    if header != "m_ret,p" && header != "m_ret,mean_p,min_p,max_p" {
        return Err(Error::parse(path, 1, format!("unrecognized header '{header}'")));
    }
    let mut values = Vec::new();
    for (idx, line) in lines {
        let lineno = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() < 2 {
            return Err(Error::parse(path, lineno, format!("expected at least 2 fields, got '{line}'")));
        }
        let m: usize = fields[0]
            .parse()
            .map_err(|_| Error::parse(path, lineno, format!("bad depth '{}'", fields[0])))?;
        if m != values.len() + 1 {
            return Err(Error::parse(path, lineno, format!("depth {m} out of order")));
        }
        let p: f64 = fields[1]
            .parse()
            .map_err(|_| Error::parse(path, lineno, format!("bad precision '{}'", fields[1])))?;
        values.push(p);
    }
    if values.is_empty() {
        return Err(Error::parse(path, 1, "precision file contains no rows"));
    }
    Ok(values)
}

pub fn load_precision_series(path: &Path) -> Result<Vec<f64>> {
    precision_series_from_string(&read_to_string(path)?, &path.display().to_string())
}

// ---------------------------------------------------------------------------
// closeness matrix debug dump: CSV with node ids as row and column headers

pub fn closeness_to_csv(m: &crate::cooccurrence::ClosenessMatrix) -> String {
    let mut out = String::from("node");
    for &id in m.node_ids() {
        let _ = write!(out, ",{id}");
    }
    out.push('\n');
    for r in 0..m.dimension() {
        let _ = write!(out, "{}", m.node_at(r));
        for c in 0..m.dimension() {
            let _ = write!(out, ",{}", fmt_sig12(m.get(r, c)));
        }
        out.push('\n');
    }
    out
}
