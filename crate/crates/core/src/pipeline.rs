//! Document to labelled feature records.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::features::{build_feature_records, FeatureRecord, RankParams};
use crate::graph::{build_cag, TextGraph};
use crate::learn::assign_labels;
use crate::textproc::{Document, TextProcessor};

#[derive(Debug, Clone, Default)]
pub struct Pipeline {
    pub text: TextProcessor,
    pub rank: RankParams,
}

/// Feature records of every usable document in a corpus.
#[derive(Debug, Clone, Default)]
pub struct CorpusRecords {
    /// `(index into the corpus, labelled records)` in corpus order.
    pub documents: Vec<(usize, Vec<FeatureRecord>)>,
    /// Documents that could not be turned into a graph, with the reason.
    pub skipped: Vec<(String, String)>,
}

impl CorpusRecords {
    pub fn record_count(&self) -> usize {
        self.documents.iter().map(|(_, r)| r.len()).sum()
    }
}

impl Pipeline {
    pub fn new(text: TextProcessor, rank: RankParams) -> Self {
        Pipeline { text, rank }
    }

    pub fn graph(&self, doc: &Document) -> Result<TextGraph> {
        let seq = self.text.select_candidates(doc)?;
        build_cag(&seq)
    }

    /// Unlabelled feature records of one document.
    pub fn records(&self, doc: &Document) -> Result<Vec<FeatureRecord>> {
        let graph = self.graph(doc)?;
        let features = build_feature_records(&graph, &self.rank)?;
        if !features.unconverged.is_empty() {
            log::warn!(
                "document `{}`: {} did not converge within {} iterations",
                doc.id,
                features.unconverged.join(", "),
                self.rank.max_iterations
            );
        }
        Ok(features.records)
    }

    /// Feature records labelled against the document's gold keywords.
    pub fn labeled_records(&self, doc: &Document) -> Result<Vec<FeatureRecord>> {
        let records = self.records(doc)?;
        Ok(assign_labels(records, &doc.gold_keywords, &self.text).records)
    }

    /// Labelled records for a whole corpus, in parallel. Documents that fail
    /// candidate selection or graph construction are skipped with a warning;
    /// invalid parameters abort.
    pub fn corpus_records(&self, corpus: &[Document]) -> Result<CorpusRecords> {
        self.rank.validate()?;
        let results: Vec<(usize, Result<Vec<FeatureRecord>>)> = corpus
            .par_iter()
            .enumerate()
            .map(|(i, doc)| (i, self.labeled_records(doc)))
            .collect();
        let mut out = CorpusRecords::default();
        for (i, result) in results {
            match result {
                Ok(records) => out.documents.push((i, records)),
                Err(e @ Error::InvalidParams(_)) => return Err(e),
                Err(e) => {
                    log::warn!("skipping document `{}`: {e}", corpus[i].id);
                    out.skipped.push((corpus[i].id.clone(), e.to_string()));
                }
            }
        }
        Ok(out)
    }
}
