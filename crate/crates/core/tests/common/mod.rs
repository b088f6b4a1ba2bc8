//! Independent reference computations shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use keytitle::features::FEATURE_COUNT;
use keytitle::graph::TextGraph;
use keytitle::learn::LogisticObjective;
use keytitle::textproc::{CandidateSequence, CandidateToken, Tag};
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn node_name(i: usize) -> String {
    format!("n{i:02}")
}

/// Graph from index triples; `None` when no edge survives.
pub fn graph_from_triples(triples: &[(usize, usize, u32)]) -> Option<TextGraph> {
    let edges: Vec<(String, String, u32)> = triples
        .iter()
        .filter(|(a, b, _)| a != b)
        .map(|&(a, b, w)| (node_name(a), node_name(b), w))
        .collect();
    if edges.is_empty() {
        return None;
    }
    Some(TextGraph::from_edges("g", edges).expect("valid triples"))
}

/// Random graph with up to `max_nodes` nodes and weights in 1..=3.
pub fn random_graph(rng: &mut impl Rng, max_nodes: usize) -> TextGraph {
    loop {
        let n = rng.random_range(2..=max_nodes);
        let p: f64 = rng.random_range(0.15..0.9);
        let mut triples = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                if rng.random::<f64>() < p {
                    triples.push((a, b, rng.random_range(1..=3)));
                }
            }
        }
        if let Some(g) = graph_from_triples(&triples) {
            return g;
        }
    }
}

/// Dense weighted adjacency matrix, built from the edge list only.
pub fn adjacency(g: &TextGraph) -> DMatrix<f64> {
    let n = g.len();
    let mut w = DMatrix::zeros(n, n);
    for (i, j, weight) in g.edges() {
        w[(i, j)] = weight as f64;
        w[(j, i)] = weight as f64;
    }
    w
}

/// Largest k such that the node survives repeated deletion of all nodes with
/// fewer than k remaining neighbours.
pub fn brute_coreness(g: &TextGraph) -> Vec<u32> {
    let n = g.len();
    let w = adjacency(g);
    let mut core = vec![0u32; n];
    for k in 1..n {
        let mut alive = vec![true; n];
        loop {
            let doomed: Vec<usize> = (0..n)
                .filter(|&v| alive[v])
                .filter(|&v| (0..n).filter(|&u| alive[u] && w[(v, u)] > 0.0).count() < k)
                .collect();
            if doomed.is_empty() {
                break;
            }
            for v in doomed {
                alive[v] = false;
            }
        }
        for v in 0..n {
            if alive[v] {
                core[v] = k as u32;
            }
        }
    }
    core
}

/// Fraction of neighbour pairs that are linked, by enumerating every pair.
pub fn brute_clustering(g: &TextGraph) -> Vec<f64> {
    let n = g.len();
    let w = adjacency(g);
    (0..n)
        .map(|i| {
            let nb: Vec<usize> = (0..n).filter(|&j| w[(i, j)] > 0.0).collect();
            if nb.len() < 2 {
                return 0.0;
            }
            let mut pairs = 0;
            let mut linked = 0;
            for a in &nb {
                for b in &nb {
                    if a < b {
                        pairs += 1;
                        if w[(*a, *b)] > 0.0 {
                            linked += 1;
                        }
                    }
                }
            }
            linked as f64 / pairs as f64
        })
        .collect()
}

/// Column-stochastic transition matrix `M[i][j] = w_ij / sum_k w_jk`.
fn transition(g: &TextGraph) -> DMatrix<f64> {
    let w = adjacency(g);
    let n = g.len();
    let out: Vec<f64> = (0..n).map(|j| w.column(j).sum()).collect();
    DMatrix::from_fn(n, n, |i, j| w[(i, j)] / out[j])
}

/// Solve `(I - d M) x = (1 - d) 1` directly.
pub fn pagerank_solve(g: &TextGraph, d: f64) -> Vec<f64> {
    let n = g.len();
    let a = DMatrix::identity(n, n) - transition(g) * d;
    let b = DVector::from_element(n, 1.0 - d);
    a.lu().solve(&b).expect("non-singular").iter().copied().collect()
}

/// Solve `(I - a M) s = (1 - a) p~` directly, with `p_i = sum 1/position`.
pub fn position_rank_solve(g: &TextGraph, alpha: f64) -> Vec<f64> {
    let n = g.len();
    let raw: Vec<f64> = g
        .nodes()
        .iter()
        .map(|node| node.positions.iter().map(|&p| 1.0 / p as f64).sum())
        .collect();
    let total: f64 = raw.iter().sum();
    let lhs = DMatrix::identity(n, n) - transition(g) * alpha;
    let rhs = DVector::from_iterator(n, raw.iter().map(|p| (1.0 - alpha) * p / total));
    lhs.lu().solve(&rhs).expect("non-singular").iter().copied().collect()
}

/// Dense power iteration on `W + I` from a uniform unit vector, run until
/// the change is below 1e-14.
pub fn dense_power_iteration(g: &TextGraph) -> Vec<f64> {
    let n = g.len();
    let m = adjacency(g) + DMatrix::identity(n, n);
    let mut p = DVector::from_element(n, 1.0 / (n as f64).sqrt());
    for _ in 0..1_000_000 {
        let mut next = &m * &p;
        next /= next.norm();
        let change = (&next - &p).amax();
        p = next;
        if change < 1e-14 {
            break;
        }
    }
    p.iter().copied().collect()
}

/// Dominant eigenvector of a connected graph's adjacency matrix from a
/// symmetric eigendecomposition, signed non-negative.
pub fn dominant_eigenvector(g: &TextGraph) -> Vec<f64> {
    let eig = adjacency(g).symmetric_eigen();
    let top = eig.eigenvalues.imax();
    let v = eig.eigenvectors.column(top);
    let sign = if v.sum() < 0.0 { -1.0 } else { 1.0 };
    v.iter().map(|x| sign * x).collect()
}

pub fn is_connected(g: &TextGraph) -> bool {
    let w = adjacency(g);
    let n = g.len();
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(v) = stack.pop() {
        for u in 0..n {
            if w[(v, u)] > 0.0 && !seen[u] {
                seen[u] = true;
                stack.push(u);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

/// Candidate sequence with one token per listed stem.
pub fn sequence(sentences: &[Vec<String>]) -> CandidateSequence {
    let mut tokens = Vec::new();
    let mut position = 0;
    for (s, stems) in sentences.iter().enumerate() {
        for stem in stems {
            position += 1;
            tokens.push(CandidateToken {
                stem: stem.clone(),
                surface: stem.clone(),
                tag: Tag::Noun,
                sentence_index: s,
                token_position: position,
            });
        }
    }
    CandidateSequence {
        doc_id: "seq".into(),
        tokens,
        sentence_count: sentences.len().max(1),
    }
}

/// Pair weights by enumerating the windows of a sentence list.
pub fn brute_window_counts(sentences: &[Vec<String>]) -> BTreeMap<(String, String), u32> {
    let windows: Vec<Vec<usize>> = if sentences.len() <= 1 {
        vec![vec![0]]
    } else {
        (0..sentences.len() - 1).map(|i| vec![i, i + 1]).collect()
    };
    let mut counts = BTreeMap::new();
    for window in windows {
        let stems: BTreeSet<&String> = window.iter().flat_map(|&s| sentences[s].iter()).collect();
        for a in &stems {
            for b in &stems {
                if a < b {
                    *counts.entry(((*a).clone(), (*b).clone())).or_insert(0) += 1;
                }
            }
        }
    }
    counts
}

/// Two-class Gaussian Naive Bayes posterior written out from Bayes' rule.
pub fn gaussian_bayes(priors: [f64; 2], means: &[Vec<f64>], variances: &[Vec<f64>], x: &[f64]) -> f64 {
    let density = |c: usize| -> f64 {
        let mut p = priors[c];
        for j in 0..x.len() {
            let v = variances[c][j];
            p *= (-(x[j] - means[c][j]).powi(2) / (2.0 * v)).exp() / (2.0 * std::f64::consts::PI * v).sqrt();
        }
        p
    };
    let (n, p) = (density(0), density(1));
    p / (n + p)
}

pub fn random_rows(rng: &mut impl Rng, n: usize) -> (Vec<[f64; FEATURE_COUNT]>, Vec<f64>) {
    let x: Vec<[f64; FEATURE_COUNT]> = (0..n)
        .map(|_| std::array::from_fn(|_| rng.random_range(-2.0..2.0)))
        .collect();
    let y = (0..n).map(|i| (i % 2) as f64).collect();
    (x, y)
}

/// Central differences against the analytic gradient, `n_datasets` times.
/// Returns the worst relative error.
pub fn worst_gradient_error(n_datasets: u64) -> f64 {
    let mut worst: f64 = 0.0;
    for seed in 0..n_datasets {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.random_range(5..60);
        let (x, y) = random_rows(&mut rng, n);
        let ridge = rng.random_range(0.0..1.0);
        let objective = LogisticObjective { x: &x, y: &y, ridge };
        let theta: [f64; FEATURE_COUNT + 1] = std::array::from_fn(|_| rng.random_range(-1.5..1.5));
        let g = objective.gradient(&theta);
        for j in 0..theta.len() {
            let h = 1e-5;
            let (mut up, mut down) = (theta, theta);
            up[j] += h;
            down[j] -= h;
            let numeric = (objective.loss(&up) - objective.loss(&down)) / (2.0 * h);
            let rel = (numeric - g[j]).abs() / g[j].abs().max(numeric.abs()).max(1e-3);
            worst = worst.max(rel);
        }
    }
    worst
}
