mod common;

use std::collections::BTreeSet;

use powerflow_core::{
    classify, globally_reachable_set, star_center, strongly_connected_components,
    RelativeInteractionMatrix, StructureKind,
};
use proptest::prelude::*;

/// Reachability by repeated squaring of the boolean adjacency matrix.
fn closure(adj: &[Vec<bool>]) -> Vec<Vec<bool>> {
    let n = adj.len();
    let mut r: Vec<Vec<bool>> = (0..n)
        .map(|i| (0..n).map(|j| i == j || adj[i][j]).collect())
        .collect();
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if r[i][k] && r[k][j] {
                    r[i][j] = true;
                }
            }
        }
    }
    r
}

/// Components as sorted node sets and the subset of them that are sinks.
fn brute_force(adj: &[Vec<bool>]) -> (BTreeSet<Vec<usize>>, BTreeSet<Vec<usize>>) {
    let n = adj.len();
    let r = closure(adj);
    let mut comps = BTreeSet::new();
    for i in 0..n {
        let comp: Vec<usize> = (0..n).filter(|&j| r[i][j] && r[j][i]).collect();
        comps.insert(comp);
    }
    let sinks = comps
        .iter()
        .filter(|comp| {
            comp.iter().all(|&i| (0..n).all(|j| !adj[i][j] || comp.contains(&j)))
        })
        .cloned()
        .collect();
    (comps, sinks)
}

/// Binary pattern with at least one off-diagonal edge per row, as a valid
/// `C` with uniform row weights.
fn pattern() -> impl Strategy<Value = Vec<Vec<bool>>> {
    (2usize..=5).prop_flat_map(|n| {
        prop::collection::vec(prop::collection::vec(any::<bool>(), n), n).prop_map(move |mut p| {
            for (i, row) in p.iter_mut().enumerate() {
                row[i] = false;
                if !row.iter().any(|&b| b) {
                    row[(i + 1) % n] = true;
                }
            }
            p
        })
    })
}

fn from_pattern(p: &[Vec<bool>]) -> RelativeInteractionMatrix {
    let rows: Vec<Vec<f64>> = p
        .iter()
        .map(|row| {
            let d = row.iter().filter(|&&b| b).count() as f64;
            row.iter().map(|&b| if b { 1.0 / d } else { 0.0 }).collect()
        })
        .collect();
    RelativeInteractionMatrix::from_rows(&rows).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn scc_matches_transitive_closure(p in pattern()) {
        let c = from_pattern(&p);
        let cond = strongly_connected_components(&c);
        let (comps, sinks) = brute_force(&p);

        let got: BTreeSet<Vec<usize>> = cond.components.iter().cloned().collect();
        prop_assert_eq!(&got, &comps);
        let got_sinks: BTreeSet<Vec<usize>> =
            cond.sink_components().into_iter().map(|k| cond.components[k].clone()).collect();
        prop_assert_eq!(&got_sinks, &sinks);

        // reverse topological order, no duplicate condensation edges
        for &(a, b) in &cond.edges {
            prop_assert!(a > b, "edge {a}->{b} goes forward");
        }
        let unique: BTreeSet<_> = cond.edges.iter().collect();
        prop_assert_eq!(unique.len(), cond.edges.len());
        for (k, comp) in cond.components.iter().enumerate() {
            for &i in comp {
                prop_assert_eq!(cond.component_of[i], k);
            }
        }
    }

    #[test]
    fn classify_matches_brute_force_sinks(p in pattern()) {
        let c = from_pattern(&p);
        let s = classify(&c);
        let (comps, sinks) = brute_force(&p);
        let got: BTreeSet<Vec<usize>> = s.sinks().into_iter().collect();
        prop_assert_eq!(&got, &sinks);
        match s.kind() {
            StructureKind::Irreducible { .. } => prop_assert_eq!(comps.len(), 1),
            StructureKind::ReducibleReachable { reachable, .. } => {
                prop_assert!(comps.len() > 1);
                prop_assert!(!reachable.is_empty() && reachable.len() < c.n());
            }
            StructureKind::MultiSink { sinks, non_sink, .. } => {
                prop_assert!(sinks.len() >= 2);
                let total: usize = sinks.iter().map(Vec::len).sum::<usize>() + non_sink.len();
                prop_assert_eq!(total, c.n());
            }
        }
    }

    #[test]
    fn globally_reachable_iff_irreducible(seed in any::<u64>(), n in 2usize..9) {
        let c = common::random_valid(n, &mut common::rng(seed));
        let all = globally_reachable_set(&c).len() == n;
        prop_assert_eq!(all, classify(&c).is_irreducible());
    }

    #[test]
    fn multisink_permutation_gives_block_normal_form(
        seed in any::<u64>(),
        sizes in prop::collection::vec(2usize..4, 2..4),
        extra in 0usize..4,
    ) {
        let mut rng = common::rng(seed);
        let mut blocks = Vec::new();
        let mut next = 0;
        for s in &sizes {
            blocks.push((next..next + s).collect::<Vec<_>>());
            next += s;
        }
        let n = next + extra;
        let c = common::random_with_sinks(n, &blocks, 0.3, &mut rng);
        let structure = classify(&c);
        let StructureKind::MultiSink { sinks, permutation, .. } = structure.kind() else {
            panic!("expected multi-sink, got {:?}", structure.kind());
        };
        prop_assert_eq!(sinks.len(), sizes.len());
        let p = c.permuted(permutation);
        let mut offset = 0;
        for sink in sinks {
            let range = offset..offset + sink.len();
            for i in range.clone() {
                // nothing leaves the block, and the block rows sum to one
                for j in 0..n {
                    if !range.contains(&j) {
                        prop_assert_eq!(p[(i, j)], 0.0);
                    }
                }
                let s: f64 = range.clone().map(|j| p[(i, j)]).sum();
                prop_assert!((s - 1.0).abs() < 1e-12);
            }
            let block = RelativeInteractionMatrix::from_rows(
                &range.clone().map(|i| range.clone().map(|j| p[(i, j)]).collect::<Vec<_>>()).collect::<Vec<_>>(),
            ).unwrap();
            prop_assert!(classify(&block).is_irreducible());
            offset += sink.len();
        }
    }

    #[test]
    fn star_center_has_unit_column(seed in any::<u64>(), n in 3usize..12) {
        let mut rng = common::rng(seed);
        let h = (seed as usize) % n;
        let c = common::random_star(n, h, &mut rng);
        let all: Vec<usize> = (0..n).collect();
        prop_assert_eq!(star_center(&c, &all), Some(h));
        for i in (0..n).filter(|&i| i != h) {
            prop_assert!((c[(i, h)] - 1.0).abs() <= 1e-9);
        }
        // and no false positives on irreducible non-stars
        let other = common::random_irreducible_non_star(n, &mut rng);
        prop_assert_eq!(star_center(&other, &all), None);
    }
}
