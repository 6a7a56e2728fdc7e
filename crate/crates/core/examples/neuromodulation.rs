//! Phasic bursts on top of tonic levels, and what the downstream passes see.

use memcortex::neuro::{Channel, EventKind, NeuroState};

fn main() -> memcortex::error::Result<()> {
    let mut neuro = NeuroState::default();
    let show = |label: &str, n: &NeuroState| {
        let [da, ne, ht, ach] = n.levels();
        let out = n.outputs();
        println!(
            "{label:>14}: DA {da:.2} NE {ne:.2} 5HT {ht:.2} ACh {ach:.2} | learning {:.2} patience {:.2}",
            out.learning_rate, out.consolidation_patience
        );
    };
    show("rest", &neuro);
    neuro.fire(EventKind::Reward);
    show("reward", &neuro);
    neuro.fire_named("threat")?;
    show("threat", &neuro);
    for minute in [1, 5, 30] {
        let mut later = neuro.clone();
        later.tick(minute as f64 * 60.0)?;
        show(&format!("+{minute} min"), &later);
    }
    println!("tonic dopamine stays at {:.3}", neuro.tonic(Channel::Dopamine));
    Ok(())
}
