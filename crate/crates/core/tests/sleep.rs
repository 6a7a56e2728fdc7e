use approx::assert_abs_diff_eq;
use memcortex::harness::stats::spearman;
use memcortex::kg::{KgConfig, SynapticGraph};
use memcortex::memory::ItemId;
use memcortex::rng::Mulberry32;
use memcortex::sleep::{
    consolidation_boost, counterfactual_candidates, novelty, sleep_cycle, Episode, Plasticity, ReplayCandidate, SleepConfig,
};
use proptest::prelude::*;

fn episode(id: u32, td: f64, reward: f64, related: usize, emb: [f64; 2]) -> Episode {
    Episode { candidate: ReplayCandidate::real(ItemId(id), td, reward, related), embedding: emb.to_vec() }
}

#[test]
fn tag_score_weights() {
    let cfg = SleepConfig::default();
    let c = ReplayCandidate::real(ItemId(0), -0.5, 1.0, 3);
    assert_abs_diff_eq!(cfg.tag_score(&c), 0.4 * 0.5 + 0.35 + 0.25 * 0.6, epsilon = 1e-12);
    assert_eq!(novelty(9), 1.0);
    assert_eq!(novelty(0), 0.0);
}

#[test]
fn counterfactuals_resample_failed_rewards_only() {
    let cfg = SleepConfig::default();
    let real = [
        ReplayCandidate::real(ItemId(0), 0.1, 0.2, 0),
        ReplayCandidate::real(ItemId(1), 0.1, 0.9, 0),
    ];
    let cf = counterfactual_candidates(&real, &cfg, &mut Mulberry32::new(7));
    assert_eq!(cf.len(), 1);
    assert_eq!(cf[0].episode_id, ItemId(0));
    assert!(cf[0].is_counterfactual);
    assert!((0.7..1.0).contains(&cf[0].reward));
}

#[test]
fn failed_episode_links_to_nearest_salient_one() {
    let mut kg = SynapticGraph::new(KgConfig::default());
    for i in 0..4 {
        kg.add_node(ItemId(i));
    }
    kg.connect(ItemId(1), ItemId(2), 1.0).unwrap();
    let eps = [
        episode(0, 0.0, 0.0, 0, [1.0, 0.1]),
        episode(1, 1.0, 1.0, 1, [1.0, 0.0]),
        episode(2, 1.0, 1.0, 1, [0.0, 1.0]),
        episode(3, 0.0, 0.5, 0, [0.9, 0.2]),
    ];
    let report = sleep_cycle(&eps, &mut kg, &SleepConfig::default(), Plasticity::default(), &mut Mulberry32::new(1));
    assert_eq!(report.new_associations, 1);
    // created at 0.10, one LTP from episode 1, LTD from episode 0 and its counterfactual
    let w = kg.edge(ItemId(0), ItemId(1)).map(|e| e.w).expect("association survives");
    assert_abs_diff_eq!(w, 0.10 + 0.10 - 0.05 - 0.05, epsilon = 1e-12);
    assert!(kg.edge(ItemId(0), ItemId(2)).is_none());
}

#[test]
fn potentiation_and_depression_step_sizes() {
    let mut kg = SynapticGraph::new(KgConfig::default());
    kg.connect(ItemId(0), ItemId(1), 1.0).unwrap();
    kg.connect(ItemId(2), ItemId(3), 1.0).unwrap();
    let eps = [
        episode(0, 1.0, 1.0, 1, [1.0, 0.0]),
        episode(1, 1.0, 1.0, 1, [1.0, 0.0]),
        episode(2, 0.0, 0.9, 1, [0.0, 1.0]),
        episode(3, 0.0, 0.9, 1, [0.0, 1.0]),
    ];
    let p = Plasticity { ltp_scale: 2.0, ltd_scale: 3.0 };
    let report = sleep_cycle(&eps, &mut kg, &SleepConfig::default(), p, &mut Mulberry32::new(1));
    assert_eq!(report.potentiated, vec![ItemId(0), ItemId(1)]);
    assert_eq!(report.depressed, vec![ItemId(2), ItemId(3)]);
    assert_abs_diff_eq!(kg.edge(ItemId(0), ItemId(1)).unwrap().w, 1.0 + 2.0 * 0.2, epsilon = 1e-12);
    assert_abs_diff_eq!(kg.edge(ItemId(2), ItemId(3)).unwrap().w, 1.0 - 2.0 * 0.15, epsilon = 1e-12);
}

#[test]
fn nearer_to_forgetting_gains_more() {
    let rs: Vec<f64> = (0..20).map(|i| i as f64 / 19.0).collect();
    let rel: Vec<f64> = rs.iter().map(|&r| consolidation_boost(2.0, r, 0.4) / 2.0 - 1.0).collect();
    assert!(spearman(&rs, &rel).unwrap() < 0.0);
    assert_abs_diff_eq!(consolidation_boost(2.0, 0.25, 0.4), 2.0 * 1.3, epsilon = 1e-12);
}

proptest! {
    #[test]
    fn every_candidate_is_counted_once(
        spec in prop::collection::vec((0.0f64..1.0, 0.0f64..1.0, 0usize..4, -1.0f64..1.0, -1.0f64..1.0), 1..30),
        seed in any::<u32>(),
    ) {
        let mut kg = SynapticGraph::new(KgConfig::default());
        let eps: Vec<Episode> = spec
            .iter()
            .enumerate()
            .map(|(i, &(td, r, rel, x, y))| episode(i as u32, td, r, rel, [x + 1e-3, y]))
            .collect();
        for i in 0..eps.len() as u32 {
            kg.add_node(ItemId(i));
            if i > 0 {
                kg.connect(ItemId(i - 1), ItemId(i), 0.3).unwrap();
            }
        }
        let before = kg.edge_count();
        let cfg = SleepConfig::default();
        let failed = eps.iter().filter(|e| e.candidate.reward < cfg.failure_below).count();
        let report = sleep_cycle(&eps, &mut kg, &cfg, Plasticity::default(), &mut Mulberry32::new(seed));
        prop_assert_eq!(report.strengthened + report.weakened, eps.len() + failed);
        prop_assert_eq!(report.potentiated.len() + report.depressed.len(), eps.len());
        prop_assert!(kg.edge_count() <= before + report.new_associations);
    }
}
