use bipartite_resilience::extremal::{
    best_subnetwork_exact, isolated_left_count, isolation_regime, reduce_exact_cover,
    solve_exact_cover, ExactCoverInstance,
};
use bipartite_resilience::graph::{
    canonical_form, canonical_graph, components, enumerate_half_regular, gen_kdd, gen_kdn,
    gen_star, validate, BipartiteGraph, DegreeConstraint,
};
use bipartite_resilience::infection::{
    cascade_as_threshold, infected_fraction_exact, infected_fraction_mc, run_cascade,
    threshold_fraction_mc, ThresholdDistribution,
};
use bipartite_resilience::percolation::{exact_expectation, Functional, PercParams};
use bipartite_resilience::InfectionParams;
use proptest::prelude::*;
use proptest::sample::subsequence;

fn ip(mu: f64, p: f64) -> InfectionParams {
    InfectionParams::new(mu, p).unwrap()
}

/// Graphs with up to 4 vertices per side and at most `max_edges` edges.
fn small_graph(max_edges: usize) -> impl Strategy<Value = BipartiteGraph> {
    (1..=4usize, 1..=4usize).prop_flat_map(move |(nl, nr)| {
        let all: Vec<(usize, usize)> = (0..nl).flat_map(|l| (0..nr).map(move |r| (l, r))).collect();
        let cap = max_edges.min(all.len());
        subsequence(all, 0..=cap).prop_map(move |e| BipartiteGraph::new(nl, nr, e).unwrap())
    })
}

fn permutation(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..n).collect::<Vec<_>>()).prop_shuffle()
}

/// `E[f]` over edge percolation by a plain loop over all retained edge sets.
fn naive_expectation(g: &BipartiteGraph, p: f64, f: Functional) -> f64 {
    let m = g.edge_count();
    let mut total = 0.0;
    for mask in 0u32..1 << m {
        let kept = mask.count_ones() as i32;
        let weight = p.powi(kept) * (1.0 - p).powi(m as i32 - kept);
        if weight == 0.0 {
            continue;
        }
        let sub = g.edge_subgraph(|e| mask >> e & 1 == 1);
        let n = sub.vertex_count();
        let mut label: Vec<usize> = (0..n).collect();
        // Relabel to the smallest index reachable, to a fixed point.
        loop {
            let mut changed = false;
            for &(l, r) in sub.edges() {
                let (a, b) = (l, sub.right_id(r));
                let low = label[a].min(label[b]);
                if label[a] != low || label[b] != low {
                    label[a] = low;
                    label[b] = low;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        let mut sizes = vec![0usize; n];
        let mut edges = vec![0usize; n];
        for &x in &label {
            sizes[x] += 1;
        }
        for &(l, _) in sub.edges() {
            edges[label[l]] += 1;
        }
        let value: f64 = (0..n)
            .filter(|&c| sizes[c] > 0)
            .map(|c| {
                let s = sizes[c] as f64;
                match f {
                    Functional::EscapeWeight { mu } => s * (1.0 - mu).powi(sizes[c] as i32),
                    Functional::IsolatedCount => (sizes[c] == 1) as u8 as f64,
                    Functional::Susceptibility => s * s / n as f64,
                    Functional::SumSqSizes => s * s,
                    Functional::SumSqEdges => (edges[c] * edges[c]) as f64,
                }
            })
            .sum();
        total += weight * value;
    }
    total
}

fn functionals(mu: f64) -> [Functional; 5] {
    [
        Functional::EscapeWeight { mu },
        Functional::IsolatedCount,
        Functional::Susceptibility,
        Functional::SumSqSizes,
        Functional::SumSqEdges,
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn canonical_form_ignores_labels(
        (g, lp, rp) in (1..=5usize, 1..=2usize)
            .prop_flat_map(|(n, d)| {
                let graphs: Vec<_> = enumerate_half_regular(n, d.min(n)).collect();
                (proptest::sample::select(graphs), permutation(n), permutation(n))
            })
    ) {
        let moved = g.permuted(&lp, &rp).unwrap();
        prop_assert_eq!(canonical_graph(&moved).unwrap(), g);
    }

    #[test]
    fn enumerated_graphs_validate(n in 1..=6usize, d in 1..=3usize) {
        let d = d.min(n);
        for g in enumerate_half_regular(n, d) {
            prop_assert!(validate(&g, DegreeConstraint::new(d)));
            prop_assert!(g.right_degrees().iter().all(|&x| x == d));
        }
    }

    #[test]
    fn components_conserve_vertices_and_edges(g in small_graph(16)) {
        let stats = components(&g);
        prop_assert_eq!(stats.component_sizes.iter().sum::<usize>(), g.vertex_count());
        prop_assert_eq!(stats.component_edge_counts.iter().sum::<usize>(), g.edge_count());
    }

    #[test]
    fn text_format_round_trips(g in small_graph(16)) {
        prop_assert_eq!(g.to_text().parse::<BipartiteGraph>().unwrap(), g);
    }

    #[test]
    fn exact_engine_matches_naive_loop(
        g in small_graph(10),
        pi in 0..5usize,
        mu in 0.0..=1.0f64,
    ) {
        let p = [0.0, 0.1, 0.5, 0.9, 1.0][pi];
        let pp = PercParams::new(p).unwrap();
        for f in functionals(mu) {
            let fast = exact_expectation(&g, pp, f).unwrap();
            let slow = naive_expectation(&g, p, f);
            prop_assert!((fast - slow).abs() <= 1e-12 * slow.abs().max(1.0), "{:?}: {} vs {}", f, fast, slow);
        }
    }

    #[test]
    fn percolation_monotone_in_p(g in small_graph(10)) {
        let at = |p: f64, f| exact_expectation(&g, PercParams::new(p).unwrap(), f).unwrap();
        for i in 0..10 {
            let (a, b) = (i as f64 / 10.0, (i + 1) as f64 / 10.0);
            prop_assert!(at(b, Functional::Susceptibility) >= at(a, Functional::Susceptibility) - 1e-12);
            prop_assert!(at(b, Functional::SumSqSizes) >= at(a, Functional::SumSqSizes) - 1e-12);
            prop_assert!(at(b, Functional::IsolatedCount) <= at(a, Functional::IsolatedCount) + 1e-12);
        }
    }

    #[test]
    fn escape_weight_bounds(g in small_graph(10), mu in 0.0..=1.0f64, p in 0.0..=1.0f64) {
        let v = g.vertex_count() as f64;
        let e = exact_expectation(&g, PercParams::new(p).unwrap(), Functional::EscapeWeight { mu }).unwrap();
        let q = 1.0 - mu;
        prop_assert!(e <= v * q + 1e-12);
        prop_assert!(e >= v * q.powi(g.vertex_count() as i32) - 1e-12);
    }

    #[test]
    fn adding_an_edge_never_helps(
        g in small_graph(9),
        l in 0..4usize,
        r in 0..4usize,
        mu in 0.0..=1.0f64,
        p in 0.0..=1.0f64,
    ) {
        let (l, r) = (l % g.n_left(), r % g.n_right());
        prop_assume!(!g.has_edge(l, r));
        let more = g.with_edge(l, r).unwrap();
        let q = ip(mu, p);
        prop_assert!(infected_fraction_exact(&more, q).unwrap() >= infected_fraction_exact(&g, q).unwrap() - 1e-12);
    }

    #[test]
    fn monotone_in_mu_and_p(
        g in small_graph(10),
        a in 0.0..=1.0f64,
        b in 0.0..=1.0f64,
        c in 0.0..=1.0f64,
    ) {
        let (lo, hi) = (a.min(b), a.max(b));
        let f = |mu, p| infected_fraction_exact(&g, ip(mu, p)).unwrap();
        prop_assert!(f(hi, c) >= f(lo, c) - 1e-12);
        prop_assert!(f(c, hi) >= f(c, lo) - 1e-12);
    }

    #[test]
    fn cascade_order_is_irrelevant(
        (g, nature, transmits, order) in small_graph(16).prop_flat_map(|g| {
            let v = g.vertex_count();
            let e = g.edge_count();
            (
                Just(g),
                proptest::collection::vec(any::<bool>(), v),
                proptest::collection::vec(any::<bool>(), e),
                permutation(v),
            )
        })
    ) {
        let plain = run_cascade(&g, &nature, &transmits, None);
        let shuffled = run_cascade(&g, &nature, &transmits, Some(&order));
        prop_assert_eq!(&plain, &shuffled);
        // Nature's picks are always infected; the rest need an infected neighbor.
        for (v, &by_nature) in nature.iter().take(g.n_left()).enumerate() {
            if by_nature {
                prop_assert!(plain.left[v]);
            }
        }
    }

    #[test]
    fn truncation_above_max_degree_is_invisible(
        g in small_graph(16),
        tail in proptest::collection::vec(0.0..1.0f64, 1..8),
        seed in any::<u64>(),
    ) {
        let total: f64 = tail.iter().sum::<f64>() + 1.0;
        let probs: Vec<f64> = tail.iter().map(|x| x / total).collect();
        let dist = ThresholdDistribution::with_remainder(probs).unwrap();
        let cut = dist.truncated(g.max_degree());
        prop_assert_eq!(
            threshold_fraction_mc(&g, &dist, 200, seed).unwrap(),
            threshold_fraction_mc(&g, &cut, 200, seed).unwrap()
        );
    }

    #[test]
    fn seeded_estimates_repeat(g in small_graph(12), seed in any::<u64>()) {
        let q = ip(0.3, 0.6);
        prop_assert_eq!(
            infected_fraction_mc(&g, q, 500, seed).unwrap(),
            infected_fraction_mc(&g, q, 500, seed).unwrap()
        );
    }
}

fn cover_instance() -> impl Strategy<Value = ExactCoverInstance> {
    (1..=3usize)
        .prop_flat_map(|k| (Just(k), k..=8usize))
        .prop_flat_map(|(k, u)| {
            let set = subsequence((0..u).collect::<Vec<_>>(), 1..=k);
            (Just(k), Just(u), proptest::collection::vec(set, 1..=6))
        })
        .prop_filter("every element covered", |(_, u, sets)| {
            (0..*u).all(|x| sets.iter().any(|s| s.contains(&x)))
        })
        .prop_map(|(k, u, sets)| ExactCoverInstance::new(u, k, sets).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn cover_reduction_is_sound(inst in cover_instance()) {
        let sub = reduce_exact_cover(inst.universe_size, &inst.sets, inst.k).unwrap();
        let res = best_subnetwork_exact(&sub, isolation_regime(sub.graph.vertex_count())).unwrap();
        let isolated = res.minimizers.iter().map(isolated_left_count).max().unwrap();
        let padded = inst.padded();
        let solvable = solve_exact_cover(padded.universe_size, &padded.sets).is_some();
        prop_assert_eq!(sub.certificate == Some(isolated), solvable);
    }
}

#[test]
fn threshold_form_of_the_cascade_matches_exact_values() {
    let graphs = [
        gen_star(4).unwrap(),
        gen_kdd(4, 2).unwrap(),
        gen_kdn(5, 2).unwrap(),
        BipartiteGraph::new(3, 3, [(0, 0), (0, 1), (1, 1), (1, 2), (2, 2), (2, 0)]).unwrap(),
    ];
    for (gi, g) in graphs.iter().enumerate() {
        for (mu, p) in [(0.2, 0.3), (0.5, 0.8), (0.7, 0.4)] {
            let q = ip(mu, p);
            let exact = infected_fraction_exact(g, q).unwrap();
            let dist = cascade_as_threshold(q, g.max_degree());
            let est = threshold_fraction_mc(g, &dist, 100_000, gi as u64).unwrap();
            assert!(
                est.agrees_with(exact, 4.0),
                "graph {gi} mu={mu} p={p}: {} vs {exact}",
                est.mean
            );
        }
    }
}

#[test]
fn canonical_forms_separate_the_enumeration() {
    for (n, d) in [(5, 2), (6, 2), (5, 3)] {
        let forms: Vec<_> = enumerate_half_regular(n, d)
            .map(|g| canonical_form(&g).unwrap())
            .collect();
        let mut unique = forms.clone();
        unique.sort_by_key(|f| format!("{f:?}"));
        unique.dedup();
        assert_eq!(unique.len(), forms.len(), "n={n} d={d}");
    }
}
