//! The whole engine: store a few memories, recall across layers, let a week
//! pass with reviews and nightly sleep, then snapshot the state.

use memcortex::coordinator::{ContentKind, Draft, EngineConfig, MemoryCoordinator, Query};
use memcortex::memory::{ItemId, SECS_PER_DAY};
use memcortex::rng::Mulberry32;

fn unit(angle: f64) -> Vec<f64> {
    vec![angle.cos(), angle.sin(), 0.0, 0.0]
}

fn main() -> memcortex::error::Result<()> {
    let mut cfg = EngineConfig::new(4);
    cfg.decay_rate = 0.15;
    let mut engine = MemoryCoordinator::new(cfg);
    let memories = [
        ("the deploy key rotates every ninety days", ContentKind::Fact, 0.0, 0.0),
        ("how to restart the ingest workers", ContentKind::Skill, 0.4, 0.0),
        ("yesterday the pager fired twice overnight", ContentKind::Episode, 0.8, -0.7),
        ("prefers terse status updates", ContentKind::Identity, 1.4, 0.2),
    ];
    let mut ids: Vec<ItemId> = Vec::new();
    for (text, kind, angle, valence) in memories {
        ids.push(engine.store(Draft::new(text, kind, unit(angle)).valence(valence))?);
        engine.end_episode();
    }
    engine.link(ids[0], ids[1], 0.8)?;

    let probe = |engine: &mut MemoryCoordinator, text: &str, angle: f64| -> memcortex::error::Result<()> {
        for hit in engine.recall(&Query::new(text, unit(angle)).top(3))? {
            let content = engine.item(hit.id).map_or("?", |i| i.content.as_str());
            println!("  {:.3} {:?} {content}", hit.score, hit.layer);
        }
        Ok(())
    };
    println!("what is the deploy key policy");
    probe(&mut engine, "what is the deploy key policy", 0.1)?;

    let mut rng = Mulberry32::new(42);
    let mut contexts = |_: ItemId, emb: &[f64]| emb.to_vec();
    for _ in 0..7 {
        engine.advance(SECS_PER_DAY)?;
        engine.age(1.0);
        let hits: Vec<ItemId> = engine.recall(&Query::new("deploy key", unit(0.05)).top(2))?.iter().map(|h| h.id).collect();
        engine.reinforce(&hits)?;
        engine.review_pass(10, &mut contexts)?;
        engine.sleep(&mut contexts, &mut rng);
        engine.forget_weak();
    }
    for id in &ids {
        println!("{id}: strength {:.3}", engine.strength(*id).unwrap_or(0.0));
    }
    println!("a week later: when did the pager fire");
    probe(&mut engine, "when did the pager fire", 0.8)?;

    let snapshot = engine.export_json();
    let restored = MemoryCoordinator::import_json(&snapshot)?;
    println!("snapshot of {} bytes restores {} items", snapshot.len(), restored.len());
    Ok(())
}
