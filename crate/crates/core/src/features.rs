//! Node features of a text graph.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::TextGraph;

pub const FEATURE_COUNT: usize = 6;

/// Column order of feature vectors, in models and reports.
pub const FEATURE_NAMES: [&str; FEATURE_COUNT] = [
    "degree",
    "prestige",
    "pagerank",
    "positionrank",
    "coreness",
    "clustering",
];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RankParams {
    /// PageRank damping factor.
    pub damping: f64,
    /// PositionRank damping factor.
    pub alpha: f64,
    /// Largest per-node absolute change at which iteration stops.
    pub tolerance: f64,
    pub max_iterations: usize,
}

impl Default for RankParams {
    fn default() -> Self {
        RankParams {
            damping: 0.85,
            alpha: 0.85,
            tolerance: 1e-6,
            max_iterations: 100,
        }
    }
}

impl RankParams {
    pub fn validate(&self) -> Result<()> {
        let open_unit = |x: f64| x > 0.0 && x < 1.0;
        if !open_unit(self.damping) || !open_unit(self.alpha) {
            return Err(Error::InvalidParams(format!(
                "damping ({}) and alpha ({}) must lie in (0, 1)",
                self.damping, self.alpha
            )));
        }
        if !(self.tolerance > 0.0) || !self.tolerance.is_finite() {
            return Err(Error::InvalidParams(format!(
                "tolerance must be positive, got {}",
                self.tolerance
            )));
        }
        if self.max_iterations == 0 {
            return Err(Error::InvalidParams("max_iterations must be at least 1".into()));
        }
        Ok(())
    }
}

/// Outcome of an iterative ranking; `scores` follow the graph's node order.
#[derive(Debug, Clone, PartialEq)]
pub struct RankResult {
    pub scores: Vec<f64>,
    pub iterations: usize,
    /// Largest per-node change in the final iteration.
    pub delta: f64,
    pub converged: bool,
}

fn max_abs_change(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Iterate `step` from `start` until the largest change drops below the
/// tolerance or the iteration budget runs out.
fn iterate(start: Vec<f64>, params: &RankParams, mut step: impl FnMut(&[f64], &mut [f64])) -> RankResult {
    let mut current = start;
    let mut next = vec![0.0; current.len()];
    let mut delta = f64::INFINITY;
    for iteration in 1..=params.max_iterations {
        step(&current, &mut next);
        delta = max_abs_change(&current, &next);
        std::mem::swap(&mut current, &mut next);
        if delta < params.tolerance {
            return RankResult {
                scores: current,
                iterations: iteration,
                delta,
                converged: true,
            };
        }
    }
    RankResult {
        scores: current,
        iterations: params.max_iterations,
        delta,
        converged: false,
    }
}

/// Weighted degree: the sum of incident edge weights.
pub fn degree_centrality(g: &TextGraph) -> Vec<f64> {
    (0..g.len())
        .map(|i| g.neighbors(i).iter().map(|&(_, w)| w as f64).sum())
        .collect()
}

/// Prestige: the dominant eigenvector of the weighted adjacency matrix, by
/// power iteration from a uniform vector with unit Euclidean length after
/// every step.
///
/// The iteration runs on `W + I`, which has the same eigenvectors as `W` but
/// no period-2 oscillation on bipartite graphs such as stars and paths.
pub fn eigenvector_centrality(g: &TextGraph, params: &RankParams) -> RankResult {
    let n = g.len();
    let start = vec![1.0 / (n as f64).sqrt(); n];
    iterate(start, params, |p, next| {
        for (i, slot) in next.iter_mut().enumerate() {
            *slot = p[i] + g.neighbors(i).iter().map(|&(j, w)| w as f64 * p[j]).sum::<f64>();
        }
        let norm = next.iter().map(|x| x * x).sum::<f64>().sqrt();
        next.iter_mut().for_each(|x| *x /= norm);
    })
}

/// TextRank word score `WS(i) = (1-d) + d * sum_j w_ji / O(j) * WS(j)`,
/// where `O(j)` is the weighted degree of `j`, iterated from all ones.
/// Scores are not normalized.
pub fn pagerank_ws(g: &TextGraph, params: &RankParams) -> RankResult {
    let out = degree_centrality(g);
    let d = params.damping;
    iterate(vec![1.0; g.len()], params, |ws, next| {
        for (i, slot) in next.iter_mut().enumerate() {
            let inflow: f64 = g.neighbors(i).iter().map(|&(j, w)| w as f64 / out[j] * ws[j]).sum();
            *slot = (1.0 - d) + d * inflow;
        }
    })
}

/// Positional weight of each node: the sum of inverse token positions.
pub fn position_weights(g: &TextGraph) -> Vec<f64> {
    g.nodes()
        .iter()
        .map(|n| n.positions.iter().map(|&p| 1.0 / p as f64).sum())
        .collect()
}

/// PositionRank `S(i) = (1-a) * p~(i) + a * sum_j w_ji / O(j) * S(j)` with
/// the positional weights normalized to sum to one, iterated from `p~`.
/// Total mass stays at one.
pub fn position_rank(g: &TextGraph, params: &RankParams) -> RankResult {
    let raw = position_weights(g);
    let total: f64 = raw.iter().sum();
    let bias: Vec<f64> = raw.iter().map(|p| p / total).collect();
    let out = degree_centrality(g);
    let a = params.alpha;
    iterate(bias.clone(), params, |s, next| {
        for (i, slot) in next.iter_mut().enumerate() {
            let inflow: f64 = g.neighbors(i).iter().map(|&(j, w)| w as f64 / out[j] * s[j]).sum();
            *slot = (1.0 - a) * bias[i] + a * inflow;
        }
    })
}

/// k-core number of each node on the unweighted graph, by repeatedly
/// removing a node of minimum remaining degree.
pub fn coreness(g: &TextGraph) -> Vec<u32> {
    let n = g.len();
    let mut degree: Vec<usize> = (0..n).map(|i| g.neighbors(i).len()).collect();
    let mut queue: BTreeSet<(usize, usize)> = (0..n).map(|i| (degree[i], i)).collect();
    let mut removed = vec![false; n];
    let mut core = vec![0u32; n];
    let mut k = 0;
    while let Some((d, v)) = queue.pop_first() {
        k = k.max(d);
        core[v] = k as u32;
        removed[v] = true;
        for &(u, _) in g.neighbors(v) {
            if !removed[u] {
                queue.remove(&(degree[u], u));
                degree[u] -= 1;
                queue.insert((degree[u], u));
            }
        }
    }
    core
}

/// Local clustering coefficient on the unweighted graph; nodes with fewer
/// than two neighbours get 0.
pub fn clustering_coefficient(g: &TextGraph) -> Vec<f64> {
    let linked = |a: usize, b: usize| g.neighbors(a).binary_search_by_key(&b, |&(j, _)| j).is_ok();
    (0..g.len())
        .map(|i| {
            let nb = g.neighbors(i);
            let k = nb.len();
            if k < 2 {
                return 0.0;
            }
            let mut links = 0usize;
            for (x, &(a, _)) in nb.iter().enumerate() {
                for &(b, _) in &nb[x + 1..] {
                    if linked(a, b) {
                        links += 1;
                    }
                }
            }
            2.0 * links as f64 / (k * (k - 1)) as f64
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Label {
    Positive,
    Negative,
}

impl Label {
    pub fn is_positive(self) -> bool {
        self == Label::Positive
    }
}

/// The six features of one graph node.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureRecord {
    pub doc_id: String,
    pub stem: String,
    pub degree: f64,
    pub prestige: f64,
    pub pagerank: f64,
    pub positionrank: f64,
    /// Integral for graph nodes; oversampled records may interpolate.
    pub coreness: f64,
    pub clustering: f64,
    /// Earliest token position of the stem; used only to break ranking ties.
    pub first_position: usize,
    pub label: Option<Label>,
    /// Set on records produced by oversampling.
    #[serde(default)]
    pub synthetic: bool,
}

impl FeatureRecord {
    /// Feature values in [`FEATURE_NAMES`] order.
    pub fn features(&self) -> [f64; FEATURE_COUNT] {
        [
            self.degree,
            self.prestige,
            self.pagerank,
            self.positionrank,
            self.coreness,
            self.clustering,
        ]
    }

    /// Overwrite the features from a vector in [`FEATURE_NAMES`] order.
    pub fn set_features(&mut self, values: [f64; FEATURE_COUNT]) {
        [
            self.degree,
            self.prestige,
            self.pagerank,
            self.positionrank,
            self.coreness,
            self.clustering,
        ] = values;
    }

    pub fn is_positive(&self) -> bool {
        self.label.is_some_and(Label::is_positive)
    }
}

/// Feature records of one graph, plus the names of any ranking that hit the
/// iteration limit before converging.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeFeatures {
    pub records: Vec<FeatureRecord>,
    pub unconverged: Vec<&'static str>,
}

/// One record per node, in lexicographic stem order.
pub fn build_feature_records(g: &TextGraph, params: &RankParams) -> Result<NodeFeatures> {
    params.validate()?;
    let degree = degree_centrality(g);
    let prestige = eigenvector_centrality(g, params);
    let pagerank = pagerank_ws(g, params);
    let positionrank = position_rank(g, params);
    let core = coreness(g);
    let clustering = clustering_coefficient(g);

    let unconverged = [
        ("prestige", prestige.converged),
        ("pagerank", pagerank.converged),
        ("positionrank", positionrank.converged),
    ]
    .into_iter()
    .filter(|(_, ok)| !ok)
    .map(|(name, _)| name)
    .collect();

    let records = g
        .nodes()
        .iter()
        .enumerate()
        .map(|(i, node)| FeatureRecord {
            doc_id: g.doc_id().to_string(),
            stem: node.stem.clone(),
            degree: degree[i],
            prestige: prestige.scores[i],
            pagerank: pagerank.scores[i],
            positionrank: positionrank.scores[i],
            coreness: core[i] as f64,
            clustering: clustering[i],
            first_position: node.positions[0],
            label: None,
            synthetic: false,
        })
        .collect();
    Ok(NodeFeatures { records, unconverged })
}
