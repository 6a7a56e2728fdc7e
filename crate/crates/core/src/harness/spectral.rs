//! Algebraic connectivity of weighted co-access graphs.

use std::collections::{BTreeMap, BTreeSet};

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{MemError, Result};
use crate::kg::SynapticGraph;
use crate::memory::ItemId;

/// Weighted Laplacian of an undirected graph on `n` nodes.
pub fn laplacian(n: usize, edges: &[(usize, usize, f64)]) -> Result<DMatrix<f64>> {
    let mut l = DMatrix::<f64>::zeros(n, n);
    for &(a, b, w) in edges {
        if a >= n || b >= n {
            return Err(MemError::InvalidArgument(format!("edge ({a}, {b}) outside {n} nodes")));
        }
        if a == b {
            continue;
        }
        l[(a, b)] -= w;
        l[(b, a)] -= w;
        l[(a, a)] += w;
        l[(b, b)] += w;
    }
    Ok(l)
}

/// Second-smallest Laplacian eigenvalue, clamped at zero against round-off.
pub fn fiedler_value(n: usize, edges: &[(usize, usize, f64)]) -> Result<f64> {
    if n < 2 {
        return Err(MemError::InvalidArgument("Fiedler value needs at least two nodes".into()));
    }
    let eig = SymmetricEigen::new(laplacian(n, edges)?);
    let mut values: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    values.sort_by(f64::total_cmp);
    Ok(values[1].max(0.0))
}

/// Fiedler value of the subgraph induced on `nodes`.
pub fn graph_fiedler(kg: &SynapticGraph, nodes: &BTreeSet<ItemId>) -> Result<f64> {
    let index: BTreeMap<ItemId, usize> = nodes.iter().enumerate().map(|(i, id)| (*id, i)).collect();
    let edges: Vec<(usize, usize, f64)> = kg
        .edges()
        .filter_map(|e| Some((*index.get(&e.src)?, *index.get(&e.dst)?, e.w)))
        .collect();
    fiedler_value(nodes.len(), &edges)
}

/// Nodes of the largest connected component (ties go to the component with the smallest id).
pub fn largest_component(kg: &SynapticGraph) -> BTreeSet<ItemId> {
    let mut seen = BTreeSet::new();
    let mut best = BTreeSet::new();
    for start in kg.nodes() {
        if seen.contains(&start) {
            continue;
        }
        let mut component = BTreeSet::new();
        let mut stack = vec![start];
        while let Some(id) = stack.pop() {
            if !component.insert(id) {
                continue;
            }
            stack.extend(kg.neighbors(id).filter(|n| !component.contains(n)));
        }
        seen.extend(component.iter().copied());
        if component.len() > best.len() {
            best = component;
        }
    }
    best
}
