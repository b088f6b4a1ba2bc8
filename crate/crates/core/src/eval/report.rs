use std::fmt::Write;

use serde::Serialize;

/// Precision, recall and F1 of the positive class.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct Prf {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

impl Prf {
    pub fn from_pr(precision: f64, recall: f64) -> Self {
        let f1 = if precision + recall > 0.0 {
            2.0 * precision * recall / (precision + recall)
        } else {
            0.0
        };
        Prf { precision, recall, f1 }
    }
}

/// Ratios with 0 for an empty denominator.
pub fn positive_prf(tp: usize, fp: usize, fn_: usize) -> Prf {
    let ratio = |num: usize, den: usize| if den == 0 { 0.0 } else { num as f64 / den as f64 };
    Prf::from_pr(ratio(tp, tp + fp), ratio(tp, tp + fn_))
}

/// Arithmetic means of per-document values.
pub fn macro_average<'a>(prfs: impl IntoIterator<Item = &'a Prf>) -> Prf {
    let mut n = 0usize;
    let mut sum = Prf::default();
    for p in prfs {
        n += 1;
        sum.precision += p.precision;
        sum.recall += p.recall;
        sum.f1 += p.f1;
    }
    if n == 0 {
        return sum;
    }
    let n = n as f64;
    Prf {
        precision: sum.precision / n,
        recall: sum.recall / n,
        f1: sum.f1 / n,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EvalMode {
    Cv,
    Cross,
    Title,
}

impl EvalMode {
    pub fn name(self) -> &'static str {
        match self {
            EvalMode::Cv => "cv",
            EvalMode::Cross => "cross",
            EvalMode::Title => "title",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DocResult {
    pub doc_id: String,
    pub tp: usize,
    pub fp: usize,
    pub fn_: usize,
    pub prf: Prf,
}

impl DocResult {
    pub fn new(doc_id: impl Into<String>, tp: usize, fp: usize, fn_: usize) -> Self {
        DocResult {
            doc_id: doc_id.into(),
            tp,
            fp,
            fn_,
            prf: positive_prf(tp, fp, fn_),
        }
    }
}

/// Per-document results under one cutoff (`k`) or threshold.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvalBlock {
    /// `@5`, `@lenW`, or `-` for threshold-based modes.
    pub k: String,
    pub documents: Vec<DocResult>,
    pub macro_prf: Prf,
}

impl EvalBlock {
    pub fn new(k: impl Into<String>, documents: Vec<DocResult>) -> Self {
        let macro_prf = macro_average(documents.iter().map(|d| &d.prf));
        EvalBlock {
            k: k.into(),
            documents,
            macro_prf,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvalReport {
    pub mode: EvalMode,
    pub model: String,
    pub corpus: String,
    /// Ordered `key=value` settings.
    pub config: Vec<(String, String)>,
    pub blocks: Vec<EvalBlock>,
    /// Documents left out, with the reason.
    pub skipped: Vec<(String, String)>,
    pub notes: Vec<String>,
}

impl EvalReport {
    pub fn new(mode: EvalMode, model: impl Into<String>, corpus: impl Into<String>) -> Self {
        EvalReport {
            mode,
            model: model.into(),
            corpus: corpus.into(),
            config: Vec::new(),
            blocks: Vec::new(),
            skipped: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn set(&mut self, key: &str, value: impl ToString) {
        self.config.push((key.to_string(), value.to_string()));
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "mode: {}", self.mode.name());
        let _ = writeln!(out, "model: {}", self.model);
        let _ = writeln!(out, "corpus: {}", self.corpus);
        if !self.config.is_empty() {
            let settings: Vec<String> = self.config.iter().map(|(k, v)| format!("{k}={v}")).collect();
            let _ = writeln!(out, "config: {}", settings.join(" "));
        }
        let _ = writeln!(out, "skipped documents: {}", self.skipped.len());
        for note in &self.notes {
            let _ = writeln!(out, "note: {note}");
        }
        for block in &self.blocks {
            let _ = writeln!(out);
            let _ = writeln!(out, "[{} k={}]", self.mode.name(), block.k);
            let _ = writeln!(out, "documents: {}", block.documents.len());
            let _ = writeln!(out, "macro precision: {:.4}", block.macro_prf.precision);
            let _ = writeln!(out, "macro recall:    {:.4}", block.macro_prf.recall);
            let _ = writeln!(out, "macro f1:        {:.4}", block.macro_prf.f1);
        }
        out
    }

    /// One row per document and block, tab separated, with a header.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("doc_id\tk\ttp\tfp\tfn\tP\tR\tF1\n");
        for block in &self.blocks {
            for d in &block.documents {
                let _ = writeln!(
                    out,
                    "{}\t{}\t{}\t{}\t{}\t{:.6}\t{:.6}\t{:.6}",
                    d.doc_id, block.k, d.tp, d.fp, d.fn_, d.prf.precision, d.prf.recall, d.prf.f1
                );
            }
        }
        out
    }
}
