use memcortex::coordinator::{ContentKind, Draft, EngineConfig, MemoryCoordinator};
use memcortex::memory::{ItemId, LayerKind, LayerStore, MemoryItem, SimClock, SECS_PER_DAY, WORKING_CAPACITY};
use memcortex::rng::Mulberry32;
use proptest::prelude::*;

fn item(text: &str, layer: LayerKind) -> MemoryItem {
    MemoryItem::new(text, layer, vec![1.0, 0.5])
}

#[test]
fn scan_keeps_insertion_order() {
    let mut store = LayerStore::new(2);
    assert!(store.scan(LayerKind::Episodic, |_| true).is_empty());
    let ids: Vec<ItemId> =
        (0..3).map(|i| store.insert(item(&format!("note {i}"), LayerKind::Episodic), i as f64).unwrap()).collect();
    let got: Vec<ItemId> = store.scan(LayerKind::Episodic, |_| true).iter().map(|i| i.id()).collect();
    assert_eq!(got, ids);
    let old: Vec<ItemId> = store.scan(LayerKind::Episodic, |i| i.created_at < 1.5).iter().map(|i| i.id()).collect();
    let brute: Vec<ItemId> = ids.iter().copied().filter(|id| store.get(*id).unwrap().created_at < 1.5).collect();
    assert_eq!(old, brute);
}

#[test]
fn insert_rejects_bad_items() {
    let mut store = LayerStore::new(2);
    assert!(store.insert(MemoryItem::new("x", LayerKind::Semantic, vec![1.0]), 0.0).is_err());
    assert!(store.insert(MemoryItem::new("  ", LayerKind::Semantic, vec![1.0, 0.0]), 0.0).is_err());
}

#[test]
fn working_layer_spills_oldest() {
    let mut store = LayerStore::new(2);
    let first = store.insert(item("first", LayerKind::Working), 0.0).unwrap();
    for i in 0..WORKING_CAPACITY {
        store.insert(item(&format!("w{i}"), LayerKind::Working), 1.0).unwrap();
    }
    assert_eq!(store.layer_len(LayerKind::Working), WORKING_CAPACITY);
    assert!(!store.is_live(first));
    let spilled = store.scan(LayerKind::ShortTerm, |_| true);
    assert_eq!(spilled.len(), 1);
    assert_eq!(spilled[0].content, "first");
    assert_eq!(spilled[0].provenance, Some(first));
}

#[test]
fn clock_moves_forward_only() {
    let mut clock = SimClock::new();
    clock.advance_days(1.5).unwrap();
    assert_eq!(clock.now(), 1.5 * SECS_PER_DAY);
    assert!(clock.advance(-1.0).is_err());
}

fn unit(rng: &mut Mulberry32, dim: usize) -> Vec<f64> {
    (0..dim).map(|_| rng.normal()).collect()
}

fn scripted_engine(seed: u32) -> MemoryCoordinator {
    let mut rng = Mulberry32::new(seed);
    let mut engine = MemoryCoordinator::new(EngineConfig::new(8));
    let kinds = [ContentKind::Fact, ContentKind::Episode, ContentKind::Skill, ContentKind::Note];
    for i in 0..40 {
        let kind = kinds[rng.below(kinds.len())];
        let draft = Draft::new(format!("item {i} about topic {}", i % 5), kind, unit(&mut rng, 8)).valence(rng.uniform(-1.0, 1.0));
        engine.store(draft).unwrap();
        if i % 7 == 0 {
            let q = memcortex::coordinator::Query::new("what is topic 2", unit(&mut rng, 8));
            let hits: Vec<ItemId> = engine.recall(&q).unwrap().iter().map(|h| h.id).collect();
            engine.reinforce(&hits).unwrap();
        }
    }
    for _ in 0..5 {
        engine.advance(SECS_PER_DAY).unwrap();
        engine.age(1.0);
        let mut ctx = |_: ItemId, e: &[f64]| e.to_vec();
        engine.review_pass(4, &mut ctx).unwrap();
        engine.sleep(&mut ctx, &mut rng);
        engine.consolidate().unwrap();
        engine.forget_weak();
    }
    engine
}

#[test]
fn identical_inputs_identical_stores() {
    assert_eq!(scripted_engine(7).export_json(), scripted_engine(7).export_json());
    assert_ne!(scripted_engine(7).export_json(), scripted_engine(8).export_json());
}

#[test]
fn promotion_conserves_items() {
    let mut engine = MemoryCoordinator::new(EngineConfig::new(2));
    for i in 0..5 {
        engine.store(Draft::new(format!("note {i}"), ContentKind::Note, vec![1.0, i as f64])).unwrap();
    }
    let before = engine.len();
    engine.advance(2.0 * SECS_PER_DAY).unwrap();
    let report = engine.consolidate().unwrap();
    assert_eq!(report.promoted.len(), 5);
    assert!(report.abstracted.is_empty());
    assert_eq!(engine.len(), before);
    assert_eq!(engine.store_ref().layer_len(LayerKind::Episodic), 5);
    for (old, new) in report.promoted {
        assert!(!engine.store_ref().is_live(old));
        assert_eq!(engine.item(new).unwrap().provenance, Some(old));
    }
}

#[derive(Debug, Clone)]
enum Op {
    Insert(usize),
    Move(usize, usize),
    Remove(usize),
}

fn op() -> impl Strategy<Value = Op> {
    prop_oneof![
        (0usize..7).prop_map(Op::Insert),
        (0usize..64, 0usize..7).prop_map(|(i, l)| Op::Move(i, l)),
        (0usize..64).prop_map(Op::Remove),
    ]
}

proptest! {
    #[test]
    fn working_never_over_capacity(ops in prop::collection::vec(op(), 1..120)) {
        let mut store = LayerStore::new(2);
        let mut expected = 0usize;
        for (t, o) in ops.into_iter().enumerate() {
            let live = store.live_ids();
            match o {
                Op::Insert(l) => {
                    store.insert(item(&format!("i{t}"), LayerKind::ALL[l]), t as f64).unwrap();
                    expected += 1;
                }
                Op::Move(i, l) if !live.is_empty() => {
                    store.move_to(live[i % live.len()], LayerKind::ALL[l]).unwrap();
                }
                Op::Remove(i) if !live.is_empty() => {
                    prop_assert!(store.remove(live[i % live.len()]));
                    expected -= 1;
                }
                _ => {}
            }
            prop_assert!(store.layer_len(LayerKind::Working) <= WORKING_CAPACITY);
            prop_assert_eq!(store.len(), expected);
        }
    }
}
