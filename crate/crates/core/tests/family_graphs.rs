mod common;

use common::*;
use coupled_core::fixtures::{figure1_pair, random_pair, Fixture, RandomKind};
use coupled_core::graphs::{digraph, linked_graph, solution_rank_report, strongly_connected_components, GraphSource};
use coupled_core::linalg::{rank, TolerancePolicy};
use coupled_core::{CFamily, CMatrix, SimilarityWitness};
use proptest::prelude::*;

fn pol() -> TolerancePolicy {
    TolerancePolicy::default()
}

/// Blocks that are zero, generic, or rank deficient, so the digraph has
/// edges and non-edges.
fn structured_family() -> impl Strategy<Value = CFamily> {
    dims_strategy(4, 3).prop_flat_map(|dims| {
        let k = dims.len();
        let shapes: Vec<(usize, usize)> = (0..k * k).map(|t| (dims[t / k], dims[t % k])).collect();
        let blocks: Vec<_> = shapes
            .into_iter()
            .map(|(r, c)| {
                prop_oneof![
                    Just(CMatrix::zeros(r, c)),
                    cmatrix(r, c, gaussian_complex()),
                    low_rank_int(r, c),
                ]
            })
            .collect();
        (Just(dims), blocks).prop_map(|(dims, blocks)| CFamily::new(dims, blocks).unwrap())
    })
}

fn hermitian_family() -> impl Strategy<Value = CFamily> {
    dims_strategy(3, 3).prop_flat_map(|dims| {
        let total: usize = dims.iter().sum();
        (Just(dims), low_rank_int(total, total)).prop_map(|(dims, m)| {
            let h = &m + &m.adjoint();
            CFamily::from_assembled(&h, dims).unwrap()
        })
    })
}

fn reachable(d: &coupled_core::graphs::FamilyDigraph, from: usize) -> Vec<usize> {
    let mut seen = vec![false; d.vertices];
    let mut stack = vec![from];
    seen[from] = true;
    while let Some(v) = stack.pop() {
        for w in d.successors(v) {
            if !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    (0..d.vertices).filter(|&v| seen[v]).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn assemble_is_injective(f in dims_strategy(4, 3).prop_flat_map(|d| cfamily(d, gaussian_complex()))) {
        let g = CFamily::from_assembled(&f.assemble(), f.dims().to_vec()).unwrap();
        prop_assert_eq!(&g, &f);
        let q = f.to_exact();
        prop_assert_eq!(coupled_core::QFamily::from_assembled(&q.assemble(), q.dims().to_vec()).unwrap(), q);
    }

    #[test]
    fn two_cycles_force_square_nonsingular_blocks(f in structured_family()) {
        let d = digraph(&f, &pol());
        for i in 0..f.k() {
            for j in 0..f.k() {
                if d.has_edge(i, j) && d.has_edge(j, i) {
                    prop_assert_eq!(f.dims()[i], f.dims()[j]);
                    prop_assert_eq!(rank(f.block(i, j), &pol()), f.dims()[i]);
                    prop_assert_eq!(rank(f.block(j, i), &pol()), f.dims()[i]);
                }
            }
        }
    }

    #[test]
    fn walks_never_increase_dimension(f in structured_family()) {
        let d = digraph(&f, &pol());
        for i in 0..f.k() {
            for j in reachable(&d, i) {
                prop_assert!(f.dims()[j] <= f.dims()[i]);
            }
        }
    }

    #[test]
    fn scc_parts_partition_vertices(f in structured_family()) {
        let s = strongly_connected_components(&digraph(&f, &pol()));
        let mut all: Vec<usize> = s.parts.concat();
        all.sort();
        prop_assert_eq!(all, (0..f.k()).collect::<Vec<_>>());
        prop_assert_eq!(s.strongly_connected, s.parts.len() == 1);
    }

    #[test]
    fn coupled_normal_blocks_pair_up(f in hermitian_family(), seed in 0u64..1000) {
        prop_assert!(f.is_coupled_normal(&pol()).normal);
        for i in 0..f.k() {
            for j in 0..f.k() {
                prop_assert_eq!(rank(f.block(i, j), &pol()), rank(f.block(j, i), &pol()));
            }
        }
        let d = digraph(&f, &pol());
        for i in 0..f.k() {
            for j in 0..f.k() {
                if f.dims()[i] == f.dims()[j] {
                    prop_assert_eq!(d.has_edge(i, j), d.has_edge(j, i));
                }
            }
        }
        let u = random_pair(RandomKind::CoupledNormalSimilar, f.dims(), seed).unwrap().planted_solution;
        let g = f.apply_coupled_similarity(&SimilarityWitness { transforms: u }, &pol()).unwrap();
        prop_assert!(g.is_coupled_normal(&pol()).normal);
    }
}

#[test]
fn figure_one_edges() {
    let Fixture::Pair { a, b, planted } = figure1_pair(2).unwrap() else { panic!() };
    let da = digraph(&a, &pol());
    let db = digraph(&b, &pol());
    assert_eq!(da.edges, vec![(0, 1), (1, 0)]);
    assert_eq!(db.edges, vec![(0, 2), (2, 0)]);
    assert_eq!(da.edge_list(), "1 2\n2 1\n");
    assert!(!strongly_connected_components(&da).strongly_connected);
    assert!(!strongly_connected_components(&db).strongly_connected);
    let g = linked_graph(&da, &db).unwrap();
    assert!(g.connected);
    assert_eq!(g.edges, vec![(0, 1), (0, 2)]);
    let x = planted.unwrap();
    let rep = solution_rank_report(&a, &b, &x, &pol()).unwrap();
    assert!(rep.is_clean());
    let linked: Vec<_> = rep.constraints.iter().filter(|c| c.source == GraphSource::Linked).collect();
    assert_eq!(linked.len(), 1);
    assert_eq!(linked[0].values, vec![1, 1, 1]);
}

#[test]
fn figure_one_one_dimensional_case() {
    let Fixture::Pair { a, b, .. } = figure1_pair(1).unwrap() else { panic!() };
    assert_eq!(digraph(&a, &pol()).edges, vec![(0, 1), (1, 0)]);
    assert_eq!(digraph(&b, &pol()).edges, vec![(0, 2), (2, 0)]);
}
