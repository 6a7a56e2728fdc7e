//! Ebbinghaus retrievability next to the three-copy trace of the same memory.

use memcortex::decay::{emotional_stability, retrievability, CopySet};
use memcortex::memory::SECS_PER_HOUR;

fn main() {
    let copies = CopySet::new(1.0, 0.0);
    let vivid = emotional_stability(1.0, -0.8, 3.0);
    println!("{:>6} {:>8} {:>8} {:>8} {:>8} {:>8}  dominant", "hours", "plain", "vivid", "fast", "medium", "deep");
    for hours in [1.0, 6.0, 24.0, 72.0, 168.0, 336.0, 720.0] {
        let [fast, medium, deep] = copies.copies(hours * SECS_PER_HOUR);
        let (_, kind) = copies.strength(hours * SECS_PER_HOUR);
        let days = hours / 24.0;
        println!(
            "{hours:>6} {:>8.4} {:>8.4} {fast:>8.4} {medium:>8.4} {deep:>8.4}  {kind:?}",
            retrievability(1.0, days),
            retrievability(vivid, days),
        );
    }
}
