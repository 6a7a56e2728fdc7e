//! Two-factor edge learning: repeated coactivation grows weight and shrinks
//! variance, and the consolidation penalty grows with importance.

use memcortex::kg::{KgConfig, SynapticGraph};
use memcortex::memory::ItemId;

fn main() -> memcortex::error::Result<()> {
    let mut kg = SynapticGraph::new(KgConfig::default());
    let (a, b, c) = (ItemId(0), ItemId(1), ItemId(2));
    kg.connect(a, b, 0.5)?;
    kg.connect(a, c, 0.5)?;

    for round in 1..=5 {
        let ab = kg.coactivate(a, b, 0.9, 1.0)?;
        let ac = kg.coactivate(a, c, 0.2, 1.0)?;
        println!("round {round}: a-b w={:.3} σ²={:.3}   a-c w={:.3} σ²={:.3}", ab.w, ab.sigma2, ac.w, ac.sigma2);
    }

    let shift = 0.5;
    println!("EWC penalty for moving a-b by {shift}: {:.4}", kg.ewc_penalty(&[(a, b, shift)])?);
    println!("EWC penalty for moving a-c by {shift}: {:.4}", kg.ewc_penalty(&[(a, c, shift)])?);

    let dropped = kg.decay_edges(0.3, 10.0);
    println!("after ten days of edge decay: {} edges left, {dropped} pruned", kg.edge_count());
    Ok(())
}
