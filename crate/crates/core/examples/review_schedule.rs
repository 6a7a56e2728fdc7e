//! Context-aware review scheduling: a review whose context drifted far from
//! the last one re-encodes the card and comes back sooner.

use memcortex::fsrs::{prediction_error, DueQueue, FsrsConfig};
use memcortex::memory::{ItemId, SECS_PER_DAY};

fn main() -> memcortex::error::Result<()> {
    let cfg = FsrsConfig::default();
    let mut queue = DueQueue::new();
    let home = vec![1.0, 0.0, 0.0];
    for (i, id) in [ItemId(0), ItemId(1)].into_iter().enumerate() {
        let due = queue.schedule(id, 2.0 + i as f64, home.clone(), 0.0, &cfg)?;
        println!("{id} first due on day {:.2}", due / SECS_PER_DAY);
    }

    let contexts = [("same room", vec![1.0, 0.0, 0.0]), ("new office", vec![0.0, 1.0, 0.0]), ("opposite", vec![-1.0, 0.0, 0.0])];
    for (label, ctx) in contexts {
        let pe = prediction_error(&home, &ctx)?;
        println!(
            "{label:>10}: PE={pe:.2} re-encode x{:.2} interval x{:.2}",
            cfg.reencode_factor(pe),
            cfg.interval_factor(pe)
        );
    }

    let now = 10.0 * SECS_PER_DAY;
    for id in queue.due(now) {
        let card = queue.card(id).cloned().expect("due card exists");
        let interval = queue.review(id, card.stability * 1.3, &[0.0, 1.0, 0.0], now, &cfg)?;
        println!("reviewed {id} on day 10 in a new context, next review in {interval:.2} days");
    }
    Ok(())
}
