//! One night of replay over a handful of episodes: tagged episodes potentiate
//! their edges, the rest depress, and a failed episode gets linked to the
//! closest rewarding one through a counterfactual.

use memcortex::kg::{KgConfig, SynapticGraph};
use memcortex::memory::ItemId;
use memcortex::rng::Mulberry32;
use memcortex::sleep::{sleep_cycle, Episode, Plasticity, ReplayCandidate, SleepConfig};

fn main() {
    let mut kg = SynapticGraph::new(KgConfig::default());
    for i in 0..5 {
        kg.add_node(ItemId(i));
    }
    for (a, b) in [(1, 2), (2, 3), (3, 4)] {
        kg.connect(ItemId(a), ItemId(b), 0.5).expect("fresh edge");
    }
    let episodes: Vec<Episode> = [
        (0, 0.1, 0.1, 0, [1.0, 0.1]),
        (1, 0.9, 0.9, 2, [1.0, 0.0]),
        (2, 0.6, 1.0, 3, [0.7, 0.7]),
        (3, 0.0, 0.3, 1, [0.0, 1.0]),
        (4, 0.2, 0.6, 1, [-0.5, 0.8]),
    ]
    .into_iter()
    .map(|(id, td, reward, related, emb)| Episode {
        candidate: ReplayCandidate::real(ItemId(id), td, reward, related),
        embedding: emb.to_vec(),
    })
    .collect();

    let cfg = SleepConfig::default();
    for e in &episodes {
        println!("{} TAG={:.3}", e.candidate.episode_id, cfg.tag_score(&e.candidate));
    }
    let report = sleep_cycle(&episodes, &mut kg, &cfg, Plasticity::default(), &mut Mulberry32::new(7));
    println!("{report:?}");
    for e in kg.edges() {
        println!("{}-{} w={:.2}", e.src, e.dst, e.w);
    }
}
