//! Confidence flowing through support and contradiction relations.

use memcortex::bayes::{pairwise_auc, wald_interval, BeliefGraph, FactId, RelationKind};

fn main() -> memcortex::error::Result<()> {
    // facts 0-2 are true and well attested, 3 is true but shaky, 4-5 are false
    let truth = [true, true, true, true, false, false];
    let mut graph = BeliefGraph::new(&[0.9, 0.85, 0.8, 0.5, 0.55, 0.6])?;
    graph.relate(FactId(0), FactId(3), RelationKind::Supports, 0.8)?;
    graph.relate(FactId(1), FactId(3), RelationKind::Supports, 0.6)?;
    graph.relate(FactId(0), FactId(4), RelationKind::Contradicts, 0.9)?;
    graph.relate(FactId(2), FactId(5), RelationKind::Contradicts, 0.7)?;

    println!("before: {:?}  AUC {:.3}", rounded(&graph.confidences()), pairwise_auc(&graph.confidences(), &truth)?);
    for sweep in 1..=3 {
        graph.propagate(1)?;
        println!("sweep {sweep}: {:?}  AUC {:.3}", rounded(&graph.confidences()), pairwise_auc(&graph.confidences(), &truth)?);
    }
    let (lo, hi) = wald_interval(graph.confidences()[3], 12);
    println!("fact 3 after 12 observations: [{lo:.3}, {hi:.3}]");
    Ok(())
}

fn rounded(xs: &[f64]) -> Vec<f64> {
    xs.iter().map(|x| (x * 1000.0).round() / 1000.0).collect()
}
