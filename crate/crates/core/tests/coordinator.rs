use approx::assert_abs_diff_eq;
use memcortex::coordinator::bm25::Bm25Index;
use memcortex::coordinator::{
    ablation_registry, classify_query, Algorithm, ContentKind, Draft, EngineConfig, Flags, MemoryCoordinator, Query, QueryType,
};
use memcortex::error::MemError;
use memcortex::memory::{ItemId, LayerKind};
use proptest::prelude::*;

const DIM: usize = 4;

fn engine() -> MemoryCoordinator {
    MemoryCoordinator::new(EngineConfig::new(DIM))
}

/// Unit vector at angle `theta` from the first axis in the first plane.
fn at_angle(theta: f64) -> Vec<f64> {
    vec![theta.cos(), theta.sin(), 0.0, 0.0]
}

#[test]
fn classifier_pattern_order() {
    assert_eq!(classify_query("when did the build break"), QueryType::Temporal);
    assert_eq!(classify_query("How to install the agent"), QueryType::Procedural);
    assert_eq!(classify_query("what is the cache size"), QueryType::Factual);
    assert_eq!(classify_query("how to fix it before lunch"), QueryType::Temporal);
    assert_eq!(classify_query("cache size"), QueryType::General);
}

#[test]
fn bm25_by_hand() {
    let mut index = Bm25Index::default();
    assert!(index.search("apple", 3).is_empty());
    index.add(ItemId(0), "apple banana apple");
    index.add(ItemId(1), "banana cherry");
    index.add(ItemId(2), "cherry date fig grape");
    assert!(index.search("kiwi", 3).is_empty());

    let (k1, b) = (1.2, 0.75);
    let avg = 9.0 / 3.0;
    let idf = |df: f64| (1.0 + (3.0 - df + 0.5) / (df + 0.5)).ln();
    let part = |tf: f64, dl: f64, df: f64| idf(df) * tf * (k1 + 1.0) / (tf + k1 * (1.0 - b + b * dl / avg));
    let ranked = index.search("apple banana", 3);
    assert_eq!(ranked.len(), 2);
    assert_eq!(ranked[0].0, ItemId(0));
    assert_abs_diff_eq!(ranked[0].1, part(2.0, 3.0, 1.0) + part(1.0, 3.0, 2.0), epsilon = 1e-12);
    assert_abs_diff_eq!(ranked[1].1, part(1.0, 2.0, 2.0), epsilon = 1e-12);
    assert!(index.idf("banana") <= index.idf("apple"));

    let mut single = Bm25Index::default();
    single.add(ItemId(9), "only doc here");
    assert_eq!(single.search("doc", 5)[0].0, ItemId(9));
}

#[test]
fn registry_parsing() {
    let cfg = ablation_registry(&["sleep", "Triple-Copy", "layer:episodic"], DIM).unwrap();
    assert!(!cfg.flags.on(Algorithm::Sleep));
    assert!(!cfg.flags.on(Algorithm::TripleCopy));
    assert!(cfg.flags.on(Algorithm::TwoFactor));
    assert_eq!(cfg.flags.route(LayerKind::Episodic), LayerKind::Semantic);
    assert_eq!(ablation_registry::<&str>(&[], DIM).unwrap().flags, Flags::full());
    assert_eq!(Flags::parse(&["warp_drive"]).unwrap_err(), MemError::UnknownFlag("warp_drive".into()));
    let names: Vec<String> = LayerKind::ALL.iter().map(|l| format!("layer:{}", l.name())).collect();
    assert!(Flags::parse(&names).is_err());
    let bare = Flags::parse(&Algorithm::ALL.map(Algorithm::name)).unwrap();
    assert_eq!(bare, Flags::bare());
    assert_eq!(Flags::parse(&bare.names()).unwrap(), bare);
}

#[test]
fn routed_episode_lands_in_semantic() {
    let cfg = ablation_registry(&["layer:episodic"], DIM).unwrap();
    let mut engine = MemoryCoordinator::new(cfg);
    let id = engine.store(Draft::new("met the vendor", ContentKind::Episode, at_angle(0.1))).unwrap();
    assert_eq!(engine.item(id).unwrap().layer(), LayerKind::Semantic);
}

#[test]
fn boosted_layer_dominates() {
    for distractors in [0usize, 3, 12, 40] {
        let mut e = engine();
        let skill = e.store(Draft::new("restart the worker pool", ContentKind::Skill, at_angle(0.3))).unwrap();
        for i in 0..distractors {
            let kind = [ContentKind::Fact, ContentKind::Episode, ContentKind::Note][i % 3];
            e.store(Draft::new(format!("distractor {i}"), kind, at_angle(0.05 + 0.001 * i as f64))).unwrap();
            e.end_episode();
        }
        let hits = e.recall(&Query::new("how to restart", at_angle(0.0)).top(5)).unwrap();
        assert_eq!(hits[0].id, skill, "with {distractors} distractors");
        assert_eq!(hits[0].layer, LayerKind::Procedural);
    }
}

#[test]
fn recall_checks_dimension() {
    let mut e = engine();
    let err = e.recall(&Query::new("x", vec![1.0])).unwrap_err();
    assert_eq!(err, MemError::DimensionMismatch { expected: DIM, got: 1 });
}

#[test]
fn export_import_round_trip() {
    let mut e = engine();
    for i in 0..6 {
        e.store(Draft::new(format!("fact number {i}"), ContentKind::Fact, at_angle(i as f64 * 0.2))).unwrap();
    }
    e.recall(&Query::new("fact", at_angle(0.1))).unwrap();
    e.store(Draft::new("linked later", ContentKind::Fact, at_angle(0.15))).unwrap();
    let json = e.export_json();
    let back = MemoryCoordinator::import_json(&json).unwrap();
    assert_eq!(back.export_json(), json);
    assert_eq!(back.bm25_search("linked", 1), e.bm25_search("linked", 1));
    assert!(MemoryCoordinator::import_json("{}").is_err());
}

fn contents(e: &MemoryCoordinator, hits: &[memcortex::coordinator::Hit]) -> Vec<String> {
    hits.iter().map(|h| e.item(h.id).unwrap().content.clone()).collect()
}

proptest! {
    #[test]
    fn recall_is_deterministic(angles in prop::collection::vec(0.0f64..3.0, 1..25), q in 0.0f64..3.0, k in 1usize..8) {
        let build = || {
            let mut e = engine();
            for (i, a) in angles.iter().enumerate() {
                e.store(Draft::new(format!("entry {i}"), ContentKind::Fact, at_angle(*a))).unwrap();
            }
            e
        };
        let (mut a, mut b) = (build(), build());
        let query = Query::new("entry", at_angle(q)).top(k);
        let ha = a.recall(&query).unwrap();
        prop_assert_eq!(&ha, &a.recall(&query).unwrap());
        prop_assert_eq!(ha, b.recall(&query).unwrap());
    }

    #[test]
    fn duplicates_do_not_change_results(angles in prop::collection::vec(0.0f64..3.0, 1..15), dups in prop::collection::vec(0usize..15, 0..6), q in 0.0f64..3.0) {
        let mut plain = engine();
        let mut doubled = engine();
        for (i, a) in angles.iter().enumerate() {
            let text = format!("distinct words {i} {}", "x".repeat(i + 1));
            plain.store(Draft::new(text.clone(), ContentKind::Fact, at_angle(*a))).unwrap();
            plain.end_episode();
            doubled.store(Draft::new(text.clone(), ContentKind::Fact, at_angle(*a))).unwrap();
            doubled.end_episode();
            if dups.contains(&i) {
                doubled.store(Draft::new(text, ContentKind::Fact, at_angle(*a))).unwrap();
                doubled.end_episode();
            }
        }
        let query = Query::new("words", at_angle(q)).top(5);
        let a = plain.recall(&query).unwrap();
        let b = doubled.recall(&query).unwrap();
        prop_assert_eq!(contents(&plain, &a), contents(&doubled, &b));
    }

    #[test]
    fn routing_drops_nothing(off in prop::collection::btree_set(0usize..7, 0..6), kinds in prop::collection::vec(0usize..5, 1..30)) {
        let names: Vec<String> = off.iter().map(|i| format!("layer:{}", LayerKind::ALL[*i].name())).collect();
        let mut e = MemoryCoordinator::new(ablation_registry(&names, DIM).unwrap());
        let all = [ContentKind::Fact, ContentKind::Episode, ContentKind::Skill, ContentKind::Identity, ContentKind::Note];
        for (i, k) in kinds.iter().enumerate() {
            let id = e.store(Draft::new(format!("item {i}"), all[*k], at_angle(i as f64 * 0.1))).unwrap();
            let layer = e.item(id).unwrap().layer();
            prop_assert!(e.config().flags.layer_on(layer));
        }
        prop_assert_eq!(e.len(), kinds.len());
    }
}
