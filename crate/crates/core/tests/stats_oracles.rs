mod common;

use std::sync::Arc;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use wnet::graph::UndirectedNetwork;
use wnet::ingest::CountryRegistry;
use wnet::matrix::SquareMatrix;
use wnet::stats::{self, node_stats};

use common::{close, Weights};

fn network(w: &Weights) -> UndirectedNetwork<f64> {
    let n = w.len();
    let m = SquareMatrix::from_fn(n, |i, j| w[i][j]);
    UndirectedNetwork::from_weights(2000, Arc::new(CountryRegistry::numbered(n)), m, 1.0).unwrap()
}

fn graph(seed: u64, n: usize, p: f64, binary: bool) -> Weights {
    common::random_graph(&mut ChaCha8Rng::seed_from_u64(seed), n, p, binary)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn matrix_formulas_match_enumeration(seed in any::<u64>(), n in 1usize..=12, p in 0.0f64..=1.0) {
        let w = graph(seed, n, p, false);
        let t = node_stats(&network(&w));

        prop_assert_eq!(&t.nd, &common::degree(&w));
        for (a, b) in t.ns.iter().zip(common::strength(&w)) {
            prop_assert!((a - b).abs() <= 1e-10);
        }
        for (name, got, want) in [
            ("annd", &t.annd, common::annd(&w)),
            ("anns", &t.anns, common::anns(&w)),
            ("bcc", &t.bcc, common::bcc(&w)),
            ("wcc", &t.wcc, common::wcc(&w)),
        ] {
            for (i, (a, b)) in got.iter().zip(&want).enumerate() {
                prop_assert!(close(*a, *b, 1e-10), "{} node {}: {:?} vs {:?}", name, i, a, b);
            }
        }
    }

    #[test]
    fn unit_weights_collapse_to_binary_suite(seed in any::<u64>(), n in 1usize..=12, p in 0.0f64..=1.0) {
        let t = node_stats(&network(&graph(seed, n, p, true)));
        for i in 0..n {
            prop_assert!((t.ns[i] - t.nd[i] as f64).abs() <= 1e-12);
            prop_assert!(close(t.anns[i], t.annd[i], 1e-12));
            prop_assert!(close(t.wcc[i], t.bcc[i], 1e-12));
        }
    }

    #[test]
    fn relabelling_permutes_statistics(seed in any::<u64>(), n in 2usize..=12, p in 0.0f64..=1.0, rot in 0usize..12) {
        let net = network(&graph(seed, n, p, false));
        // rotation plus reversal gives a nontrivial permutation
        let perm: Vec<usize> = (0..n).map(|i| (n - 1 - i + rot) % n).collect();
        let (a, b) = (node_stats(&net), node_stats(&net.permuted(&perm)));
        for (new, &old) in perm.iter().enumerate() {
            prop_assert_eq!(b.nd[new], a.nd[old]);
            prop_assert!((b.ns[new] - a.ns[old]).abs() <= 1e-12);
            prop_assert!(close(b.annd[new], a.annd[old], 1e-12));
            prop_assert!(close(b.anns[new], a.anns[old], 1e-12));
            prop_assert!(close(b.bcc[new], a.bcc[old], 1e-12));
            prop_assert!(close(b.wcc[new], a.wcc[old], 1e-12));
        }
    }

    #[test]
    fn ranges_and_strength_bound(seed in any::<u64>(), n in 1usize..=12, p in 0.0f64..=1.0) {
        let w = graph(seed, n, p, false);
        let t = node_stats(&network(&w));
        for i in 0..n {
            prop_assert!(t.nd[i] < n);
            prop_assert!(t.ns[i] >= 0.0 && t.ns[i] <= t.nd[i] as f64);
            let all_unit = common::neighbours(&w, i).iter().all(|&j| w[i][j] == 1.0);
            prop_assert_eq!(t.ns[i] == t.nd[i] as f64, all_unit);
            if let Some(b) = t.bcc[i] {
                prop_assert!((0.0..=1.0).contains(&b));
            }
            for v in [t.annd[i], t.anns[i], t.wcc[i]].into_iter().flatten() {
                prop_assert!(v >= 0.0);
            }
            prop_assert_eq!(t.annd[i].is_none(), t.nd[i] == 0);
            prop_assert_eq!(t.bcc[i].is_none(), t.nd[i] <= 1);
            prop_assert_eq!(t.wcc[i].is_none(), t.nd[i] <= 1);
        }
    }
}

#[test]
fn standalone_operations_agree_with_table() {
    let w = graph(7, 10, 0.5, false);
    let net = network(&w);
    let t = node_stats(&net);
    assert_eq!(stats::node_degree(&net), t.nd);
    assert_eq!(stats::node_strength(&net), t.ns);
    assert_eq!(stats::annd(&net), t.annd);
    assert_eq!(stats::anns(&net), t.anns);
    assert_eq!(stats::bcc(&net), t.bcc);
    assert_eq!(stats::wcc(&net), t.wcc);
}

#[test]
fn f32_tracks_f64() {
    let w = graph(11, 12, 0.6, false);
    let n = w.len();
    let m32 = SquareMatrix::from_fn(n, |i, j| w[i][j] as f32);
    let net32 = UndirectedNetwork::from_weights(0, Arc::new(CountryRegistry::numbered(n)), m32, 1.0).unwrap();
    let (t32, t64) = (node_stats(&net32), node_stats(&network(&w)));
    assert_eq!(t32.nd, t64.nd);
    for (a, b) in t32.wcc.iter().zip(&t64.wcc) {
        assert!(close(a.map(f64::from), *b, 1e-5));
    }
}
