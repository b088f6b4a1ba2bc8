//! Context-aware co-occurrence graph over candidate stems.
//!
//! Two stems are linked when they occur together in a window of two
//! consecutive sentences; the edge weight counts the windows they share.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::textproc::CandidateSequence;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Node {
    pub stem: String,
    /// Sorted 1-based token positions of every occurrence of the stem.
    pub positions: Vec<usize>,
}

/// Weighted undirected graph without self-loops or isolated nodes.
///
/// Nodes are kept in lexicographic stem order and every edge is stored once,
/// keyed by `(smaller index, larger index)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TextGraph {
    doc_id: String,
    nodes: Vec<Node>,
    edges: BTreeMap<(usize, usize), u32>,
    adjacency: Vec<Vec<(usize, u32)>>,
}

impl TextGraph {
    /// Assemble a graph from named nodes and weighted edges. Repeated edges
    /// accumulate. Fails on self-loops, zero weights, unknown endpoints,
    /// isolated nodes, nodes without positions, or an edgeless graph.
    pub fn from_parts(
        doc_id: impl Into<String>,
        nodes: Vec<(String, Vec<usize>)>,
        edges: impl IntoIterator<Item = (String, String, u32)>,
    ) -> Result<TextGraph> {
        let doc_id = doc_id.into();
        let mut by_stem: BTreeMap<String, Vec<usize>> = BTreeMap::new();
        for (stem, mut positions) in nodes {
            if positions.is_empty() {
                return Err(Error::Input(format!("node `{stem}` has no positions")));
            }
            positions.sort_unstable();
            if by_stem.insert(stem.clone(), positions).is_some() {
                return Err(Error::Input(format!("duplicate node `{stem}`")));
            }
        }
        let index: BTreeMap<&str, usize> = by_stem.keys().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
        let mut weights: BTreeMap<(usize, usize), u32> = BTreeMap::new();
        for (a, b, w) in edges {
            if a == b {
                return Err(Error::Input(format!("self-loop on `{a}`")));
            }
            if w == 0 {
                return Err(Error::Input(format!("zero weight on `{a}`-`{b}`")));
            }
            let (Some(&i), Some(&j)) = (index.get(a.as_str()), index.get(b.as_str())) else {
                return Err(Error::Input(format!("edge `{a}`-`{b}` names an unknown node")));
            };
            *weights.entry((i.min(j), i.max(j))).or_insert(0) += w;
        }
        if weights.is_empty() {
            return Err(Error::EmptyGraph { doc_id });
        }
        let nodes: Vec<Node> = by_stem
            .into_iter()
            .map(|(stem, positions)| Node { stem, positions })
            .collect();
        let graph = Self::assemble(doc_id, nodes, weights);
        if let Some(i) = (0..graph.len()).find(|&i| graph.adjacency[i].is_empty()) {
            return Err(Error::Input(format!("isolated node `{}`", graph.nodes[i].stem)));
        }
        Ok(graph)
    }

    /// Graph with each node's only position equal to its lexicographic rank.
    pub fn from_edges<S: Into<String>>(
        doc_id: impl Into<String>,
        edges: impl IntoIterator<Item = (S, S, u32)>,
    ) -> Result<TextGraph> {
        let edges: Vec<(String, String, u32)> = edges.into_iter().map(|(a, b, w)| (a.into(), b.into(), w)).collect();
        let stems: BTreeSet<&String> = edges.iter().flat_map(|(a, b, _)| [a, b]).collect();
        let nodes = stems
            .into_iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), vec![i + 1]))
            .collect();
        Self::from_parts(doc_id, nodes, edges)
    }

    fn assemble(doc_id: String, nodes: Vec<Node>, edges: BTreeMap<(usize, usize), u32>) -> TextGraph {
        let mut adjacency = vec![Vec::new(); nodes.len()];
        for (&(i, j), &w) in &edges {
            adjacency[i].push((j, w));
            adjacency[j].push((i, w));
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        TextGraph {
            doc_id,
            nodes,
            edges,
            adjacency,
        }
    }

    pub fn doc_id(&self) -> &str {
        &self.doc_id
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges as `(i, j, weight)` with `i < j`, in index order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, u32)> + '_ {
        self.edges.iter().map(|(&(i, j), &w)| (i, j, w))
    }

    /// Neighbours of node `i` with edge weights, sorted by index.
    pub fn neighbors(&self, i: usize) -> &[(usize, u32)] {
        &self.adjacency[i]
    }

    pub fn index_of(&self, stem: &str) -> Option<usize> {
        self.nodes.binary_search_by(|n| n.stem.as_str().cmp(stem)).ok()
    }

    pub fn weight(&self, a: &str, b: &str) -> Option<u32> {
        let (i, j) = (self.index_of(a)?, self.index_of(b)?);
        self.edges.get(&(i.min(j), i.max(j))).copied()
    }

    /// Fraction of possible node pairs that are linked.
    pub fn density(&self) -> f64 {
        let n = self.len() as f64;
        if n < 2.0 {
            return 0.0;
        }
        self.edge_count() as f64 / (n * (n - 1.0) / 2.0)
    }

    /// Same topology with every weight multiplied by `factor`.
    pub fn scaled(&self, factor: u32) -> TextGraph {
        let edges = self.edges.iter().map(|(&k, &w)| (k, w * factor)).collect();
        Self::assemble(self.doc_id.clone(), self.nodes.clone(), edges)
    }

    /// Graphviz rendering, one `--` statement per edge with its weight.
    pub fn to_dot(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "graph {} {{", quote(&self.doc_id));
        for node in &self.nodes {
            let _ = writeln!(out, "  {};", quote(&node.stem));
        }
        for (&(i, j), &w) in &self.edges {
            let _ = writeln!(
                out,
                "  {} -- {} [weight={w}, penwidth={w}];",
                quote(&self.nodes[i].stem),
                quote(&self.nodes[j].stem)
            );
        }
        out.push_str("}\n");
        out
    }
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// The sentence windows of a document: `(s0, s1), (s1, s2), ...`, or just
/// `(s0)` when there is a single sentence.
pub fn sentence_windows(sentence_count: usize) -> Vec<Vec<usize>> {
    if sentence_count <= 1 {
        vec![vec![0]]
    } else {
        (0..sentence_count - 1).map(|i| vec![i, i + 1]).collect()
    }
}

/// Build the co-occurrence graph of a candidate sequence.
///
/// Each distinct pair of stems present in a window gains weight 1 for that
/// window, however often either stem repeats inside it. Stems that never
/// share a window with another stem are left out.
pub fn build_cag(seq: &CandidateSequence) -> Result<TextGraph> {
    let mut per_sentence: Vec<BTreeSet<&str>> = vec![BTreeSet::new(); seq.sentence_count.max(1)];
    let mut positions: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
    for token in &seq.tokens {
        per_sentence[token.sentence_index].insert(&token.stem);
        positions.entry(&token.stem).or_default().push(token.token_position);
    }

    let mut weights: BTreeMap<(&str, &str), u32> = BTreeMap::new();
    for window in sentence_windows(seq.sentence_count) {
        let stems: BTreeSet<&str> = window.iter().flat_map(|&s| per_sentence[s].iter().copied()).collect();
        let stems: Vec<&str> = stems.into_iter().collect();
        for (a, &u) in stems.iter().enumerate() {
            for &v in &stems[a + 1..] {
                *weights.entry((u, v)).or_insert(0) += 1;
            }
        }
    }
    if weights.is_empty() {
        return Err(Error::EmptyGraph {
            doc_id: seq.doc_id.clone(),
        });
    }

    let connected: BTreeSet<&str> = weights.keys().flat_map(|&(u, v)| [u, v]).collect();
    let nodes: Vec<Node> = connected
        .iter()
        .map(|&s| Node {
            stem: s.to_string(),
            positions: positions[s].clone(),
        })
        .collect();
    let index: BTreeMap<&str, usize> = connected.iter().enumerate().map(|(i, &s)| (s, i)).collect();
    let edges = weights
        .into_iter()
        .map(|((u, v), w)| ((index[u], index[v]), w))
        .collect();
    Ok(TextGraph::assemble(seq.doc_id.clone(), nodes, edges))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::textproc::{CandidateToken, Tag};

    /// Sequence with one token per listed stem, positions counting up.
    pub(crate) fn sequence(sentences: &[&[&str]]) -> CandidateSequence {
        let mut tokens = Vec::new();
        let mut pos = 0;
        for (s, stems) in sentences.iter().enumerate() {
            for stem in *stems {
                pos += 1;
                tokens.push(CandidateToken {
                    stem: stem.to_string(),
                    surface: stem.to_string(),
                    tag: Tag::Noun,
                    sentence_index: s,
                    token_position: pos,
                });
            }
        }
        CandidateSequence {
            doc_id: "doc".into(),
            tokens,
            sentence_count: sentences.len(),
        }
    }

    #[test]
    fn three_sentence_windows() {
        let g = build_cag(&sequence(&[
            &["deep", "learn"],
            &["learn", "graph"],
            &["graph", "rock"],
        ]))
        .unwrap();
        assert_eq!(g.edge_count(), 5);
        assert_eq!(g.weight("deep", "learn"), Some(1));
        assert_eq!(g.weight("deep", "graph"), Some(1));
        assert_eq!(g.weight("learn", "graph"), Some(2));
        assert_eq!(g.weight("graph", "learn"), Some(2));
        assert_eq!(g.weight("learn", "rock"), Some(1));
        assert_eq!(g.weight("graph", "rock"), Some(1));
        assert_eq!(g.weight("deep", "rock"), None);
        assert_eq!(g.nodes()[g.index_of("learn").unwrap()].positions, vec![2, 3]);
    }

    #[test]
    fn single_sentence_is_complete() {
        let g = build_cag(&sequence(&[&["a", "b", "c"]])).unwrap();
        assert_eq!(g.edge_count(), 3);
        assert!(g.edges().all(|(_, _, w)| w == 1));
        assert_eq!(g.density(), 1.0);
    }

    #[test]
    fn repeats_in_a_window_count_once() {
        let g = build_cag(&sequence(&[&["a", "b", "a", "b"]])).unwrap();
        assert_eq!(g.weight("a", "b"), Some(1));
        assert_eq!(g.nodes()[0].positions, vec![1, 3]);
    }

    #[test]
    fn single_stem_is_an_empty_graph() {
        assert!(matches!(
            build_cag(&sequence(&[&["a", "a"]])),
            Err(Error::EmptyGraph { .. })
        ));
    }

    #[test]
    fn isolated_stems_are_dropped() {
        // sentence 2 has no candidates, so "z" in sentence 3 is alone in its window
        let g = build_cag(&sequence(&[&["a", "b"], &[], &[], &["z"]])).unwrap();
        assert_eq!(g.len(), 2);
        assert!(g.index_of("z").is_none());
    }

    #[test]
    fn dot_export() {
        let g = TextGraph::from_edges("k3", [("a", "b", 1), ("b", "c", 1), ("a", "c", 1)]).unwrap();
        let dot = g.to_dot();
        assert_eq!(dot.lines().filter(|l| l.contains(" -- ")).count(), 3);
        assert!(dot
            .lines()
            .filter(|l| l.contains(" -- "))
            .all(|l| l.contains("weight=1")));
        assert!(dot.starts_with("graph \"k3\" {"));

        let g = build_cag(&sequence(&[
            &["deep", "learn"],
            &["learn", "graph"],
            &["graph", "rock"],
        ]))
        .unwrap();
        assert!(g.to_dot().contains("\"graph\" -- \"learn\" [weight=2"));
    }

    #[test]
    fn from_parts_rejects_bad_graphs() {
        assert!(TextGraph::from_edges("d", [("a", "a", 1)]).is_err());
        assert!(TextGraph::from_edges("d", [("a", "b", 0)]).is_err());
        assert!(matches!(
            TextGraph::from_edges::<&str>("d", []),
            Err(Error::EmptyGraph { .. })
        ));
        let isolated = TextGraph::from_parts(
            "d",
            vec![("a".into(), vec![1]), ("b".into(), vec![2]), ("c".into(), vec![3])],
            [("a".into(), "b".into(), 1)],
        );
        assert!(isolated.is_err());
    }
}
