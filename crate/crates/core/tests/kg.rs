use approx::assert_abs_diff_eq;
use memcortex::kg::{canonical, importance_boost, KgConfig, SynapticEdge, SynapticGraph};
use memcortex::memory::ItemId;
use proptest::prelude::*;

fn id(n: u32) -> ItemId {
    ItemId(n)
}

#[test]
fn two_coactivations_by_hand() {
    let cfg = KgConfig::default();
    let mut e = SynapticEdge::new(id(2), id(1), 1.0);
    assert_eq!((e.src, e.dst), (id(1), id(2)));
    e.coactivate(&cfg, 1.0, 1.0).unwrap();
    assert_abs_diff_eq!(e.w, 1.1, epsilon = 1e-12);
    assert_abs_diff_eq!(e.sigma2, 0.85, epsilon = 1e-12);
    e.coactivate(&cfg, 0.5, 1.0).unwrap();
    assert_abs_diff_eq!(e.w, 1.15, epsilon = 1e-12);
    assert_abs_diff_eq!(e.sigma2, 0.85 * (1.0 - 0.15 / 1.1), epsilon = 1e-12);
    assert_eq!(e.k, 2);
    assert!(e.coactivate(&cfg, 1.5, 1.0).is_err());
}

#[test]
fn boost_and_decay_rate_formulas() {
    let mut e = SynapticEdge::new(id(0), id(1), 2.0);
    e.sigma2 = 0.25;
    assert_abs_diff_eq!(importance_boost(1.0, &e, 0.2), 1.0 + 0.2 * 2.0 * 4f64.powf(0.1), epsilon = 1e-12);
    assert_abs_diff_eq!(e.decay_rate(0.3), 0.3 / 1.4, epsilon = 1e-12);
}

#[test]
fn ewc_penalty_weights_by_importance() {
    let mut g = SynapticGraph::new(KgConfig::default());
    g.connect(id(0), id(1), 1.0).unwrap();
    g.edge_mut(id(1), id(0)).unwrap().sigma2 = 0.5;
    let p = g.ewc_penalty(&[(id(0), id(1), 0.2)]).unwrap();
    assert_abs_diff_eq!(p, 0.5 * 0.5 * 2.0 * 0.04, epsilon = 1e-12);
    assert!(g.ewc_penalty(&[(id(0), id(7), 0.1)]).is_err());
}

#[test]
fn prune_and_remove_keep_adjacency_consistent() {
    let mut g = SynapticGraph::new(KgConfig::default());
    g.connect(id(0), id(1), 1.0).unwrap();
    g.connect(id(1), id(2), 0.01).unwrap();
    g.connect(id(2), id(3), 1.0).unwrap();
    assert_eq!(g.prune(), 1);
    assert_eq!(g.degree(id(1)), 1);
    assert!(g.edge(id(2), id(1)).is_none());
    g.remove_node(id(2));
    assert_eq!(g.edge_count(), 1);
    assert_eq!(g.neighbors(id(3)).count(), 0);
    assert_eq!(canonical(id(5), id(4)), (id(4), id(5)));
}

#[test]
fn mature_edge_fades_slower() {
    let mut g = SynapticGraph::new(KgConfig::default());
    g.connect(id(0), id(1), 1.0).unwrap();
    g.connect(id(2), id(3), 1.0).unwrap();
    g.edge_mut(id(0), id(1)).unwrap().sigma2 = 0.1;
    g.decay_edges(0.5, 1.0);
    let (a, b) = (g.edge(id(0), id(1)).unwrap().w, g.edge(id(2), id(3)).unwrap().w);
    assert_abs_diff_eq!(a, (-0.5f64 / 2.0).exp(), epsilon = 1e-12);
    assert_abs_diff_eq!(b, (-0.5f64 / 1.1).exp(), epsilon = 1e-12);
}

#[derive(Debug, Clone)]
enum Op {
    Coactivate(u32, u32, f64, f64),
    Nudge(u32, u32, f64),
    Decay(f64),
}

fn op() -> impl Strategy<Value = Op> {
    prop_oneof![
        (0u32..6, 0u32..6, 0.0f64..=1.0, 0.0f64..=1.0).prop_map(|(a, b, t, m)| Op::Coactivate(a, b, t, m)),
        (0u32..6, 0u32..6, -3.0f64..3.0).prop_map(|(a, b, d)| Op::Nudge(a, b, d)),
        (0.0f64..2.0).prop_map(Op::Decay),
    ]
}

proptest! {
    #[test]
    fn weights_stay_clipped(ops in prop::collection::vec(op(), 1..200)) {
        let mut g = SynapticGraph::new(KgConfig::default());
        for i in 0..6 {
            for j in (i + 1)..6 {
                g.connect(id(i), id(j), 1.0).unwrap();
            }
        }
        for o in ops {
            match o {
                Op::Coactivate(a, b, t, m) if g.edge(id(a), id(b)).is_some() => {
                    g.coactivate(id(a), id(b), t, m).unwrap();
                }
                Op::Nudge(a, b, d) => g.nudge(id(a), id(b), d),
                Op::Decay(r) => { g.decay_edges(r, 1.0); }
                _ => {}
            }
            for e in g.edges() {
                prop_assert!(e.w >= g.cfg.w_min && e.w <= g.cfg.w_max);
            }
        }
    }

    #[test]
    fn maturation_is_monotone(steps in prop::collection::vec((0.0f64..=1.0, 0.0f64..=1.0), 1..300)) {
        let cfg = KgConfig::default();
        let mut e = SynapticEdge::new(id(0), id(1), 0.5);
        for (t, m) in steps {
            let (s, i) = (e.sigma2, e.importance());
            e.coactivate(&cfg, t, m).unwrap();
            prop_assert!(e.sigma2 <= s);
            prop_assert!(e.importance() >= i);
            prop_assert!(e.sigma2 >= cfg.sigma2_min);
        }
    }

    #[test]
    fn lower_variance_keeps_more_weight(w in 0.1f64..5.0, s_a in 0.01f64..1.0, gap in 0.001f64..1.0, rate in 0.01f64..2.0) {
        let mut g = SynapticGraph::new(KgConfig { prune_eps: 0.0, ..KgConfig::default() });
        g.connect(id(0), id(1), w).unwrap();
        g.connect(id(2), id(3), w).unwrap();
        g.edge_mut(id(0), id(1)).unwrap().sigma2 = s_a;
        g.edge_mut(id(2), id(3)).unwrap().sigma2 = s_a + gap;
        g.decay_edges(rate, 1.0);
        prop_assert!(g.edge(id(0), id(1)).unwrap().w >= g.edge(id(2), id(3)).unwrap().w);
    }
}
