mod common;

use std::ops::ControlFlow;

use matfree::matroid::{
    canonical_function, circuits, cog_endpoint_criterion, cog_partition_criterion, cographic_from_graph, complexity,
    connected_graphs, find_homomorphism, graphic_from_graph, odd_girth, Complexity, Graph,
};
use matfree::tester::{count_patterns, for_each_instance, PatternSpec};
use matfree::{BinaryMatroid, GfVec, Homomorphism, LinearMap};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{bits_of, naive_in_span, naive_rank, random_function};

fn random_matroid(rng: &mut ChaCha8Rng, m: usize, k: usize) -> BinaryMatroid {
    let vectors = (0..k)
        .map(|_| GfVec::new(m, rng.gen_range(1..1u64 << m)).unwrap())
        .collect();
    BinaryMatroid::new(m, vectors, None).unwrap()
}

fn random_invertible(rng: &mut ChaCha8Rng, m: usize) -> LinearMap {
    loop {
        let images: Vec<GfVec> = (0..m)
            .map(|_| GfVec::new(m, rng.gen_range(0..1u64 << m)).unwrap())
            .collect();
        let map = LinearMap::new(m, &images).unwrap();
        if map.is_injective() {
            return map;
        }
    }
}

fn random_connected_graph(rng: &mut ChaCha8Rng, v: usize) -> Graph {
    loop {
        let p = rng.gen_range(0.2..0.9);
        let edges: Vec<(usize, usize)> = (0..v)
            .flat_map(|a| (a + 1..v).map(move |b| (a, b)))
            .filter(|_| rng.gen_bool(p))
            .collect();
        if let Ok(g) = Graph::new(v, edges) {
            if g.edge_count() > 0 && g.is_connected() {
                return g;
            }
        }
    }
}

/// Minimal dependent sets by scanning all subsets with an elimination oracle.
fn naive_circuits(m: &BinaryMatroid) -> Vec<Vec<usize>> {
    let bits = bits_of(m.vectors());
    let k = bits.len();
    let rank_of = |mask: u64| {
        let chosen: Vec<u64> = (0..k).filter(|&i| (mask >> i) & 1 == 1).map(|i| bits[i]).collect();
        naive_rank(&chosen)
    };
    let mut out = Vec::new();
    for mask in 1u64..1 << k {
        let size = mask.count_ones() as usize;
        if rank_of(mask) != size - 1 {
            continue;
        }
        let minimal = (0..k)
            .filter(|&i| (mask >> i) & 1 == 1)
            .all(|i| rank_of(mask & !(1 << i)) == size - 1);
        if minimal {
            out.push((0..k).filter(|&i| (mask >> i) & 1 == 1).collect());
        }
    }
    out.sort();
    out
}

fn sorted(mut c: Vec<Vec<usize>>) -> Vec<Vec<usize>> {
    c.sort();
    c
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn circuits_match_subset_oracle(seed in any::<u64>(), m in 1usize..5, k in 1usize..9) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mat = random_matroid(&mut rng, m, k);
        prop_assert_eq!(sorted(circuits(&mat).unwrap()), naive_circuits(&mat));
    }

    #[test]
    fn outputs_are_representation_invariant(seed in any::<u64>(), m in 2usize..6, k in 3usize..9) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mat = random_matroid(&mut rng, m, k);
        let t = random_invertible(&mut rng, m);
        let moved = mat.transformed(&t).unwrap();
        prop_assert_eq!(circuits(&mat).unwrap(), circuits(&moved).unwrap());
        prop_assert_eq!(complexity(&mat, 2).unwrap(), complexity(&moved, 2).unwrap());
        prop_assert_eq!(odd_girth(&mat).unwrap(), odd_girth(&moved).unwrap());
        let c3 = graphic_from_graph(&Graph::cycle(3).unwrap()).unwrap();
        prop_assert_eq!(
            find_homomorphism(&mat, &c3, 1_000_000).unwrap().is_some(),
            find_homomorphism(&moved, &c3, 1_000_000).unwrap().is_some()
        );
        prop_assert_eq!(
            find_homomorphism(&c3, &mat, 1_000_000).unwrap().is_some(),
            find_homomorphism(&c3, &moved, 1_000_000).unwrap().is_some()
        );
        let f = random_function(&mut rng, 2);
        let sigma = PatternSpec::new((0..k).map(|_| rng.gen()).collect()).unwrap();
        prop_assert_eq!(
            count_patterns(&f, &mat, &sigma).unwrap().span_count,
            count_patterns(&f, &moved, &sigma).unwrap().span_count
        );
    }

    #[test]
    fn graphic_matroids_have_complexity_at_most_one(seed in any::<u64>(), v in 2usize..8) {
        let g = random_connected_graph(&mut ChaCha8Rng::seed_from_u64(seed), v);
        let expected = if g.edge_count() >= g.vertices() { 1 } else { 0 };
        prop_assert_eq!(
            complexity(&graphic_from_graph(&g).unwrap(), 1).unwrap(),
            Complexity::Exactly(expected)
        );
    }

    #[test]
    fn homomorphisms_preserve_odd_girth(seed in any::<u64>(), k1 in 2usize..6, k2 in 2usize..7) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m1 = random_matroid(&mut rng, 3, k1);
        let m2_dim = rng.gen_range(2..5);
        let m2 = random_matroid(&mut rng, m2_dim, k2);
        if let Some(h) = find_homomorphism(&m2, &m1, 10_000_000).unwrap() {
            prop_assert!(h.verify(&m2, &m1));
            let as_rank = |g: Option<usize>| g.unwrap_or(usize::MAX);
            prop_assert!(as_rank(odd_girth(&m2).unwrap()) >= as_rank(odd_girth(&m1).unwrap()));
        }
    }
}

#[test]
fn instances_in_canonical_functions_project_to_homomorphisms() {
    let c3 = graphic_from_graph(&Graph::cycle(3).unwrap()).unwrap();
    let k4 = graphic_from_graph(&Graph::complete(4).unwrap()).unwrap();
    let sources = [
        graphic_from_graph(&Graph::cycle(5).unwrap()).unwrap(),
        graphic_from_graph(&Graph::cycle(3).unwrap()).unwrap(),
        graphic_from_graph(&Graph::complete(4).unwrap()).unwrap(),
    ];
    for target in [&c3, &k4] {
        let f = canonical_function(target, target.m() + 1).unwrap();
        let low = (1u64 << target.m()) - 1;
        for source in &sources {
            let sigma = PatternSpec::all_ones(source.k()).unwrap();
            let mut seen = 0;
            for_each_instance(&f, source, &sigma, |inst| {
                let assignment = inst
                    .points
                    .iter()
                    .map(|p| {
                        let x = p.bits() & low;
                        target.vectors().iter().position(|v| v.bits() == x).expect("point on the support")
                    })
                    .collect();
                let h = Homomorphism { assignment };
                assert!(h.verify(source, target));
                seen += 1;
                if seen >= 2000 {
                    ControlFlow::Break(())
                } else {
                    ControlFlow::Continue(())
                }
            })
            .unwrap();
        }
    }
}

#[test]
fn endpoint_criterion_characterizes_cographic_complexity() {
    for v in 2..=6 {
        for g in connected_graphs(v).unwrap() {
            let m = cographic_from_graph(&g).unwrap();
            let c1 = matches!(complexity(&m, 1).unwrap(), Complexity::Exactly(c) if c <= 1);
            let endpoint = (0..g.edge_count()).all(|e| cog_endpoint_criterion(&g, e).unwrap());
            let partition = (0..g.edge_count()).all(|e| cog_partition_criterion(&g, e).unwrap());
            assert_eq!(endpoint, c1, "{:?}", g.edges());
            // Two spanning connected classes in particular join every pair.
            assert!(!partition || c1, "{:?}", g.edges());
        }
    }
}

#[test]
fn cographic_k33_splits_for_every_element() {
    let g = Graph::complete_bipartite(3, 3).unwrap();
    let m = cographic_from_graph(&g).unwrap();
    let bits = bits_of(m.vectors());
    for i in 0..bits.len() {
        let others: Vec<u64> = (0..bits.len()).filter(|&j| j != i).map(|j| bits[j]).collect();
        let found = (0u64..1 << others.len()).any(|sel| {
            let pick = |side: u64| -> Vec<u64> {
                (0..others.len()).filter(|j| (sel >> j) & 1 == side).map(|j| others[j]).collect()
            };
            let (a, b) = (pick(1), pick(0));
            !naive_in_span(bits[i], &a) && !naive_in_span(bits[i], &b)
        });
        assert!(found, "element {i}");
    }
}

#[test]
fn cographic_circuits_are_bonds() {
    // Bonds: minimal edge sets whose removal disconnects the graph.
    for g in [Graph::complete(4).unwrap(), Graph::complete_bipartite(2, 3).unwrap(), Graph::petersen().unwrap()] {
        let m = cographic_from_graph(&g).unwrap();
        let k = g.edge_count();
        let disconnects = |mask: u64| {
            let kept: Vec<(usize, usize)> = (0..k).filter(|&i| (mask >> i) & 1 == 0).map(|i| g.edges()[i]).collect();
            !Graph::new(g.vertices(), kept).unwrap().is_connected()
        };
        let bonds: Vec<Vec<usize>> = if k <= 12 {
            let mut out: Vec<Vec<usize>> = (1u64..1 << k)
                .filter(|&mask| {
                    disconnects(mask) && (0..k).filter(|&i| (mask >> i) & 1 == 1).all(|i| !disconnects(mask & !(1 << i)))
                })
                .map(|mask| (0..k).filter(|&i| (mask >> i) & 1 == 1).collect())
                .collect();
            out.sort();
            out
        } else {
            // Spot check on the largest graph: every circuit is a bond.
            circuits(&m)
                .unwrap()
                .into_iter()
                .filter(|c| {
                    let mask = c.iter().fold(0u64, |acc, &i| acc | (1 << i));
                    disconnects(mask) && c.iter().all(|&i| !disconnects(mask & !(1 << i)))
                })
                .collect()
        };
        assert_eq!(sorted(circuits(&m).unwrap()), bonds);
    }
}
