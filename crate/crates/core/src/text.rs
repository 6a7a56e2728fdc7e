//! Vector and token helpers shared by retrieval, scheduling and reconsolidation.

use std::collections::BTreeSet;

use crate::error::{MemError, Result};

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub fn cosine(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(MemError::DimensionMismatch { expected: a.len(), got: b.len() });
    }
    let (na, nb) = (norm(a), norm(b));
    if na == 0.0 || nb == 0.0 {
        return Err(MemError::ZeroVector);
    }
    Ok((dot(a, b) / (na * nb)).clamp(-1.0, 1.0))
}

pub fn normalize(v: &mut [f64]) {
    let n = norm(v);
    if n > 0.0 {
        v.iter_mut().for_each(|x| *x /= n);
    }
}

pub fn tokens(text: &str) -> Vec<&str> {
    text.split_whitespace().collect()
}

pub fn token_set(text: &str) -> BTreeSet<String> {
    text.split_whitespace().map(str::to_lowercase).collect()
}

/// |A ∩ B| / |A ∪ B| over lowercase whitespace tokens; two empty texts count as identical.
pub fn jaccard(a: &str, b: &str) -> f64 {
    let (sa, sb) = (token_set(a), token_set(b));
    let union = sa.union(&sb).count();
    if union == 0 {
        return 1.0;
    }
    sa.intersection(&sb).count() as f64 / union as f64
}

pub fn token_count(text: &str) -> usize {
    text.split_whitespace().count()
}
