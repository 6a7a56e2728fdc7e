//! Updates to a recalled memory, graded by prediction error: confirm, edit,
//! integrate or split off a new episode. Every change can be rolled back.

use memcortex::memory::{LayerKind, LayerStore, MemoryItem};
use memcortex::recon::{Incoming, ReconConfig, Reconsolidator};

fn main() -> memcortex::error::Result<()> {
    let original = "the staging database lives on host db2 in rack four";
    let updates = [
        original,
        "the staging database lives on host db3 in rack four",
        "the staging database lives on host db2 in rack four and backs up nightly to the cold archive",
        "lunch is served in the atrium on fridays",
    ];
    let mut recon = Reconsolidator::new(ReconConfig::default());
    for text in updates {
        let mut store = LayerStore::new(2);
        let id = store.insert(MemoryItem::new(original, LayerKind::Semantic, vec![1.0, 0.0]), 0.0)?;
        let incoming = Incoming { content: text, contradicts: false, ne_level: 0.5, serotonin_level: 0.5 };
        let event = recon.apply_update(&mut store, id, incoming, |_| true, 30.0)?;
        println!("PE {:.2} -> {:?}: {:?}", event.pe_eff, event.mode, store.get(id).map(|i| i.content.as_str()));
        recon.rollback(&mut store, &event)?;
        assert_eq!(store.get(id).map(|i| i.content.as_str()), Some(original));
    }
    println!("{} events logged", recon.log().len());
    Ok(())
}
