//! Ranked-retrieval metrics with binary relevance.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{MemError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RankMetrics {
    pub precision: f64,
    pub recall: f64,
    pub mrr: f64,
    pub ndcg: f64,
    pub f1: f64,
}

fn discount(rank0: usize) -> f64 {
    1.0 / ((rank0 + 2) as f64).log2()
}

/// P@k, R@k, MRR over the whole list, NDCG@k with log2 discount, and F1 of P@k and R@k.
pub fn metrics<T: Ord>(ranked: &[T], gold: &BTreeSet<T>, k: usize) -> Result<RankMetrics> {
    if gold.is_empty() {
        return Err(MemError::InvalidArgument("gold set is empty".into()));
    }
    if k == 0 {
        return Err(MemError::InvalidArgument("k must be at least 1".into()));
    }
    let top = &ranked[..ranked.len().min(k)];
    let hits = top.iter().filter(|id| gold.contains(id)).count() as f64;
    let precision = hits / k as f64;
    let recall = hits / gold.len() as f64;
    let mrr = ranked.iter().position(|id| gold.contains(id)).map_or(0.0, |p| 1.0 / (p + 1) as f64);
    let dcg: f64 = top.iter().enumerate().filter(|(_, id)| gold.contains(id)).map(|(i, _)| discount(i)).sum();
    let ideal: f64 = (0..gold.len().min(k)).map(discount).sum();
    let f1 = if precision + recall == 0.0 { 0.0 } else { 2.0 * precision * recall / (precision + recall) };
    Ok(RankMetrics { precision, recall, mrr, ndcg: dcg / ideal, f1 })
}

/// NDCG@k with graded gains: `gains[i]` is the gain of the item ranked i-th,
/// `all_gains` every candidate's gain (for the ideal ordering).
pub fn ndcg_graded(gains: &[f64], all_gains: &[f64], k: usize) -> Result<f64> {
    if k == 0 {
        return Err(MemError::InvalidArgument("k must be at least 1".into()));
    }
    let dcg: f64 = gains.iter().take(k).enumerate().map(|(i, g)| g * discount(i)).sum();
    let mut ideal_order = all_gains.to_vec();
    ideal_order.sort_by(|a, b| b.total_cmp(a));
    let ideal: f64 = ideal_order.iter().take(k).enumerate().map(|(i, g)| g * discount(i)).sum();
    if ideal == 0.0 {
        return Err(MemError::Degenerate("all gains are zero"));
    }
    Ok(dcg / ideal)
}
