mod common;

use geocross::census::{crossing_census_from_graph, CrossingType};
use geocross::drawing::{blowup_drawing_unchecked, random_blowup_config};
use geocross::measures::sample_uniform_sphere;
use geocross::*;
use proptest::prelude::*;

fn p(x: f64, y: f64, z: f64) -> UnitVec {
    UnitVec::normalize(geocross::geom::Vec3::new(x, y, z)).unwrap()
}

fn uniform_points(rng: &mut RngStream, k: usize) -> Vec<UnitVec> {
    (0..k).map(|_| sample_uniform_sphere(rng)).collect()
}

#[test]
fn single_edge_has_no_crossings() {
    let d = BipartiteDrawing::new(vec![p(1.0, 0.0, 0.1)], vec![p(0.0, 1.0, 0.2)]);
    assert_eq!(count_crossings(&d).unwrap(), 0);
    assert_eq!(build_crossing_graph(&d).unwrap().vertex_count(), 1);
}

#[test]
fn convex_k22_has_one_crossing() {
    // a0 a1 b0 b1 in convex position: only a0b0 and a1b1 cross.
    let a = vec![p(1.0, 0.0, 5.0), p(0.0, 1.0, 5.0)];
    let b = vec![p(-1.0, 0.1, 5.0), p(0.0, -1.0, 5.0)];
    let d = BipartiteDrawing::new(a, b);
    let g = build_crossing_graph(&d).unwrap();
    assert_eq!(g.vertex_count(), 4);
    assert_eq!(g.edge_count(), 1);
    assert_eq!(triangle_census(&g, None).unwrap().total, 0);
}

#[test]
fn antipodal_drawings_meet_zarankiewicz() {
    let mut rng = RngStream::new(40, 0);
    let d = loop {
        let (p, q) = (uniform_points(&mut rng, 3), uniform_points(&mut rng, 3));
        if let Ok(d) = antipodal_drawing(&p, &q) {
            break d;
        }
    };
    let g = build_crossing_graph(&d).unwrap();
    assert_eq!(g.edge_count(), 36);
    assert_eq!(u128::from(count_crossings(&d).unwrap()), zarankiewicz(6, 6));
}

#[test]
fn graph_never_joins_edges_sharing_a_vertex() {
    let u = MeasureSpec::Uniform;
    let d = random_bipartite_drawing(&u, &u, 12, &mut RngStream::new(2, 0)).unwrap();
    let g = build_crossing_graph(&d).unwrap();
    for (e, f) in g.edges() {
        let (i1, j1) = d.edge_endpoints(e);
        let (i2, j2) = d.edge_endpoints(f);
        assert!(i1 != i2 && j1 != j2);
    }
    assert_eq!(g.edge_count(), count_crossings(&d).unwrap());
    let v = g.vertex_count() as f64;
    assert_eq!(
        g.edge_density(),
        2.0 * count_crossings(&d).unwrap() as f64 / (v * v)
    );
}

#[test]
fn graph_matches_pairwise_predicate() {
    let u = MeasureSpec::Uniform;
    let d = random_bipartite_drawing(&u, &u, 7, &mut RngStream::new(3, 0)).unwrap();
    let g = build_crossing_graph(&d).unwrap();
    let segs = d.segments().unwrap();
    for e in 0..segs.len() {
        for f in 0..segs.len() {
            let (i1, j1) = d.edge_endpoints(e);
            let (i2, j2) = d.edge_endpoints(f);
            let want = i1 != i2 && j1 != j2 && segments_cross(&segs[e], &segs[f]).unwrap();
            assert_eq!(g.has_edge(e, f), want, "{e} {f}");
        }
    }
}

#[test]
fn base_drawing_has_four_crossings() {
    for k in 0..5 {
        let cfg = random_blowup_config(&mut RngStream::new(k, 0), 1, 1e-4, 0.2).unwrap();
        let d = blowup_drawing_unchecked(&cfg).unwrap();
        assert_eq!(count_crossings(&d).unwrap(), 4);
        let c = crossing_census(&d).unwrap();
        assert_eq!((c.c, c.b, c.n), (4, 0, 0));
    }
}

#[test]
fn classification_examples() {
    let cfg = random_blowup_config(&mut RngStream::new(0, 0), 2, 1e-6, 0.2).unwrap();
    let d = blowup_drawing_unchecked(&cfg).unwrap();
    let meta = d.blowup.as_ref().unwrap();
    // Part A vertices 0,1 are node v1, 2,3 node -v1; part B 0,1 node w1, 4,5 node w2.
    let e = |i: usize, j: usize| i * d.part_b.len() + j;
    assert_eq!(classify_crossing(e(0, 0), e(1, 1), meta), CrossingType::B);
    assert_eq!(classify_crossing(e(0, 0), e(1, 4), meta), CrossingType::N);
    assert_eq!(classify_crossing(e(0, 0), e(4, 0), meta), CrossingType::N);
    assert_eq!(classify_crossing(e(0, 0), e(4, 4), meta), CrossingType::C);
}

#[test]
fn census_paths_agree_and_sum() {
    for (k, n) in [(0, 3), (1, 5), (2, 4)] {
        let cfg = random_blowup_config(&mut RngStream::new(k, 0), n, 1e-6, 0.2).unwrap();
        let d = blowup_drawing_unchecked(&cfg).unwrap();
        let g = build_crossing_graph(&d).unwrap();
        let direct = crossing_census(&d).unwrap();
        let from_graph = crossing_census_from_graph(&g, d.blowup.as_ref().unwrap()).unwrap();
        assert_eq!(direct, from_graph);
        assert_eq!(direct.total, direct.c + direct.b + direct.n);
        assert_eq!(direct.total, count_crossings(&d).unwrap());
        let json: serde_json::Value = serde_json::to_value(&direct).unwrap();
        assert!(json["total"].is_u64());
    }
}

#[test]
fn missing_metadata_is_an_error() {
    let u = MeasureSpec::Uniform;
    let d = random_bipartite_drawing(&u, &u, 3, &mut RngStream::new(0, 0)).unwrap();
    assert!(matches!(
        crossing_census(&d),
        Err(CensusError::MissingBlowup)
    ));
}

#[test]
fn small_blowup_triangle_types_match_enumeration() {
    for n in [2usize, 3, 4] {
        let cfg = random_blowup_config(&mut RngStream::new(n as u64, 0), n, 1e-6, 0.2).unwrap();
        let d = blowup_drawing_unchecked(&cfg).unwrap();
        let g = build_crossing_graph(&d).unwrap();
        let meta = d.blowup.as_ref().unwrap();
        let nodes: Vec<(u8, u8)> = (0..g.vertex_count())
            .map(|e| {
                let (i, j) = d.edge_endpoints(e);
                meta.bundle_of_edge(i, j)
            })
            .collect();
        let brute = common::brute_force_typed_triangles(&g, &nodes);
        for kernel in [TriangleKernel::Merge, TriangleKernel::Bitset] {
            let t = triangle_census_with(&g, Some(meta), kernel).unwrap();
            assert_eq!(t.by_type.len(), 10);
            assert_eq!(t.total, t.by_type.values().sum::<u64>());
            for (key, &v) in &t.by_type {
                assert_eq!(brute.get(key).copied().unwrap_or(0), v, "n={n} {key}");
            }
        }
        let pred = predicted_triangle_census(&base_angles(&cfg).unwrap(), n as u64).unwrap();
        let t = triangle_census(&g, Some(meta)).unwrap();
        assert_eq!(u128::from(t.get("BBB")), pred.bbb_exact);
        assert_eq!(u128::from(t.get("CCB")), pred.ccb_exact);
    }
}

#[test]
fn hom_counts_on_crossing_graph() {
    let u = MeasureSpec::Uniform;
    let d = random_bipartite_drawing(&u, &u, 8, &mut RngStream::new(9, 0)).unwrap();
    let g = build_crossing_graph(&d).unwrap();
    let m = u128::from(g.edge_count());
    assert_eq!(hom_count_small(&PatternGraph::k(2), &g).unwrap(), 2 * m);
    let t = u128::from(common::brute_force_triangles(&g));
    assert_eq!(hom_count_small(&PatternGraph::k(3), &g).unwrap(), 6 * t);
    let p3: u128 = (0..g.vertex_count())
        .map(|v| (g.degree(v) as u128).pow(2))
        .sum();
    assert_eq!(hom_count_small(&PatternGraph::p3(), &g).unwrap(), p3);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn triangle_kernels_match_enumeration(n in 0usize..60, p in 0.0f64..0.6, seed in any::<u64>()) {
        let g = common::random_graph(n, p, &mut common::Lcg(seed));
        let brute = common::brute_force_triangles(&g);
        prop_assert_eq!(triangle_census_with(&g, None, TriangleKernel::Merge).unwrap().total, brute);
        prop_assert_eq!(triangle_census_with(&g, None, TriangleKernel::Bitset).unwrap().total, brute);
    }

    #[test]
    fn graph_rows_are_sorted_and_symmetric(n in 1usize..40, p in 0.0f64..1.0, seed in any::<u64>()) {
        let g = common::random_graph(n, p, &mut common::Lcg(seed));
        for v in 0..n {
            let row = g.neighbors(v);
            prop_assert!(row.windows(2).all(|w| w[0] < w[1]));
            prop_assert!(row.iter().all(|&w| w as usize != v && g.has_edge(w as usize, v)));
        }
    }

    #[test]
    fn crossing_count_is_invariant_under_part_swap(seed in 0u64..1000) {
        let u = MeasureSpec::Uniform;
        let d = random_bipartite_drawing(&u, &u, 5, &mut RngStream::new(seed, 7)).unwrap();
        let swapped = BipartiteDrawing::new(d.part_b.clone(), d.part_a.clone());
        prop_assert_eq!(count_crossings(&d).unwrap(), count_crossings(&swapped).unwrap());
    }
}
