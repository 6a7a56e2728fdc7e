//! Okapi BM25 over an in-memory inverted index.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::memory::ItemId;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Bm25Index {
    pub k1: f64,
    pub b: f64,
    postings: BTreeMap<String, BTreeMap<ItemId, u32>>,
    doc_len: BTreeMap<ItemId, u32>,
    total_len: u64,
}

impl Default for Bm25Index {
    fn default() -> Self {
        Self::new(1.2, 0.75)
    }
}

fn terms(text: &str) -> impl Iterator<Item = String> + '_ {
    text.split(|c: char| !c.is_alphanumeric()).filter(|t| !t.is_empty()).map(str::to_lowercase)
}

impl Bm25Index {
    pub fn new(k1: f64, b: f64) -> Self {
        Self { k1, b, postings: BTreeMap::new(), doc_len: BTreeMap::new(), total_len: 0 }
    }

    /// Indexes a document and returns how many postings lists it touched.
    pub fn add(&mut self, id: ItemId, text: &str) -> usize {
        self.remove(id);
        let mut counts: BTreeMap<String, u32> = BTreeMap::new();
        let mut len = 0;
        for t in terms(text) {
            *counts.entry(t).or_default() += 1;
            len += 1;
        }
        let touched = counts.len();
        for (term, tf) in counts {
            self.postings.entry(term).or_default().insert(id, tf);
        }
        self.doc_len.insert(id, len);
        self.total_len += len as u64;
        touched
    }

    pub fn remove(&mut self, id: ItemId) {
        if let Some(len) = self.doc_len.remove(&id) {
            self.total_len -= len as u64;
            self.postings.retain(|_, docs| {
                docs.remove(&id);
                !docs.is_empty()
            });
        }
    }

    pub fn len(&self) -> usize {
        self.doc_len.len()
    }

    pub fn is_empty(&self) -> bool {
        self.doc_len.is_empty()
    }

    pub fn postings_len(&self, term: &str) -> usize {
        self.postings.get(&term.to_lowercase()).map_or(0, BTreeMap::len)
    }

    /// ln(1 + (N - df + 0.5) / (df + 0.5)), never negative.
    pub fn idf(&self, term: &str) -> f64 {
        let n = self.len() as f64;
        let df = self.postings_len(term) as f64;
        (1.0 + (n - df + 0.5) / (df + 0.5)).ln()
    }

    pub fn search(&self, query: &str, k: usize) -> Vec<(ItemId, f64)> {
        if self.is_empty() {
            return Vec::new();
        }
        let avg = self.total_len as f64 / self.len() as f64;
        let mut scores: BTreeMap<ItemId, f64> = BTreeMap::new();
        let mut seen = std::collections::BTreeSet::new();
        for term in terms(query) {
            if !seen.insert(term.clone()) {
                continue;
            }
            let Some(docs) = self.postings.get(&term) else { continue };
            let idf = self.idf(&term);
            for (&id, &tf) in docs {
                let tf = tf as f64;
                let dl = self.doc_len[&id] as f64;
                let norm = tf + self.k1 * (1.0 - self.b + self.b * dl / avg);
                *scores.entry(id).or_default() += idf * tf * (self.k1 + 1.0) / norm;
            }
        }
        let mut ranked: Vec<(ItemId, f64)> = scores.into_iter().collect();
        ranked.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
        ranked.truncate(k);
        ranked
    }
}
