mod common;

use common::{complete, gnp_graph, set};
use perturbed_core::budget::SearchBudget;
use perturbed_core::generators::{gen_complete_multipartite, perturb, rng_from_seed};
use perturbed_core::pipeline::{
    absorb, absorbing_covering, build_absorber_local, build_bicanonical_path, choose_z, close_cycle, connect_cliques,
    full_pipeline, is_extendible, layer_audit, leftover_band, required_layer, verify_absorbing, AbsorberGadget,
    ConnectJob, InsertionSlot, LayerPolicy, PipelineError, PipelineParams, Stage, VERIFY_CAP,
};
use perturbed_core::power_structs::{is_power_hamilton_cycle, is_power_path};
use perturbed_core::regularity::Partition;
use perturbed_core::{Layer, LayeredGraph, PowerPath, SetTuple, VertexSet, VertexTuple};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;

/// Complete multipartite Γ with equal parts plus G(n, p).
fn host(parts: usize, size: usize, p: f64, seed: u64) -> (LayeredGraph, Vec<VertexSet>) {
    let c = gen_complete_multipartite(&vec![size; parts]).unwrap();
    (perturb(&c.graph, p, seed).unwrap(), c.classes)
}

fn take(s: &VertexSet, range: std::ops::Range<usize>) -> VertexSet {
    let v = s.to_vec();
    VertexSet::from_slice(s.capacity(), &v[range])
}

fn union_params() -> PipelineParams {
    PipelineParams { layer_policy: LayerPolicy::Union, ..PipelineParams::default() }
}

/// Direct count of |N(v^{≥2i}, V_i)| / |V_i|.
fn margin_oracle(g: &LayeredGraph, v: &[usize], sets: &[VertexSet]) -> Vec<f64> {
    sets.iter()
        .enumerate()
        .map(|(i, s)| {
            if s.is_empty() {
                return 0.0;
            }
            let hits = s.iter().filter(|&u| v[2 * i + 1..].iter().all(|&w| g.has_edge(Layer::Gamma, u, w))).count();
            hits as f64 / s.len() as f64
        })
        .collect()
}

// extendibility

#[test]
fn extendibility_in_complete_graph() {
    let g = complete(12);
    let v = VertexTuple(vec![0, 1, 2, 3]);
    let sets = SetTuple(vec![set(12, &[4, 5, 6]), set(12, &[7, 8])]);
    let c = is_extendible(&g, Layer::Gamma, &v, &sets, 0.9).unwrap();
    assert_eq!(c.margins, vec![1.0, 1.0]);
    assert!(c.is_extendible());
    assert_eq!(c.slack(0), 0);
}

#[test]
fn extendibility_margins_and_errors() {
    // 0..4 is a path 0-1-2-3; 4 sees 1, 2, 3; 5 sees 3 only.
    let g = LayeredGraph::from_edges(6, &[(0, 1), (1, 2), (2, 3), (1, 4), (2, 4), (3, 4), (3, 5)], &[]).unwrap();
    let v = VertexTuple(vec![0, 1, 2, 3]);
    let sets = SetTuple(vec![set(6, &[4, 5]), set(6, &[5])]);
    let c = is_extendible(&g, Layer::Gamma, &v, &sets, 0.5).unwrap();
    assert_eq!(c.margins, vec![0.5, 1.0]);
    assert!(c.is_extendible());
    assert!(!is_extendible(&g, Layer::Gamma, &v, &sets, 0.6).unwrap().is_extendible());
    let empty = SetTuple(vec![set(6, &[4]), VertexSet::new(6)]);
    let c = is_extendible(&g, Layer::Gamma, &v, &empty, 0.1).unwrap();
    assert_eq!(c.margins[1], 0.0);
    assert!(!c.is_extendible());
    assert_eq!(
        is_extendible(&g, Layer::Gamma, &VertexTuple(vec![0, 1, 2]), &sets, 0.5).unwrap_err(),
        PipelineError::LengthMismatch { expected: 4, found: 3 }
    );
}

fn extendibility_case() -> impl Strategy<Value = (u64, usize, Vec<u8>, f64)> {
    (any::<u64>(), 1usize..3, proptest::collection::vec(0u8..4, 30), 0.05f64..0.95)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn margins_match_direct_count((seed, k, labels, rho) in extendibility_case()) {
        let n = 30;
        let g = gnp_graph(n, 0.6, seed);
        let v: Vec<usize> = (0..2 * k).collect();
        let sets: Vec<VertexSet> = (0..k)
            .map(|i| VertexSet::from_iter_cap(n, (2 * k..n).filter(|&u| labels[u] as usize % k == i)))
            .collect();
        let c = is_extendible(&g, Layer::Gamma, &VertexTuple(v.clone()), &SetTuple(sets.clone()), rho).unwrap();
        prop_assert_eq!(&c.margins, &margin_oracle(&g, &v, &sets));
        // Monotone in ρ.
        if c.is_extendible() {
            for lower in [rho / 2.0, rho / 4.0] {
                let again = is_extendible(&g, Layer::Gamma, &VertexTuple(v.clone()), &SetTuple(sets.clone()), lower).unwrap();
                prop_assert!(again.is_extendible());
            }
        }
    }

    #[test]
    fn shrinking_within_slack_keeps_extendibility((seed, k, labels, rho) in extendibility_case(), pick in any::<u64>()) {
        let n = 30;
        let g = gnp_graph(n, 0.7, seed);
        let v = VertexTuple((0..2 * k).collect());
        let sets: Vec<VertexSet> = (0..k)
            .map(|i| VertexSet::from_iter_cap(n, (2 * k..n).filter(|&u| labels[u] as usize % k == i)))
            .collect();
        let c = is_extendible(&g, Layer::Gamma, &v, &SetTuple(sets.clone()), rho).unwrap();
        prop_assume!(c.is_extendible());
        let mut rng = rng_from_seed(pick);
        let shrunk: Vec<VertexSet> = sets
            .iter()
            .enumerate()
            .map(|(i, s)| {
                let mut members = s.to_vec();
                members.shuffle(&mut rng);
                let drop = rng.gen_range(0..=c.slack(i));
                VertexSet::from_slice(n, &members[drop..])
            })
            .collect();
        prop_assert!(is_extendible(&g, Layer::Gamma, &v, &SetTuple(shrunk), rho).unwrap().is_extendible());
    }
}

// layer split

#[test]
fn required_layers_for_k_one() {
    assert_eq!(required_layer(0, 1, 1), Some(Layer::Union));
    assert_eq!(required_layer(1, 2, 1), Some(Layer::Gamma));
    assert_eq!(required_layer(0, 2, 1), Some(Layer::Gamma));
    assert_eq!(required_layer(0, 3, 1), Some(Layer::Gamma));
    assert_eq!(required_layer(1, 4, 1), Some(Layer::Union));
    assert_eq!(required_layer(2, 3, 1), Some(Layer::Union));
    assert_eq!(required_layer(0, 4, 1), None);
    assert_eq!(required_layer(3, 3, 1), None);
    assert_eq!(required_layer(3, 2, 1), None);
}

#[test]
fn skeleton_is_a_spanning_path_of_positions() {
    // Skeleton pairs link positions 2j, 2j+1 and 2j+1, 2j+2k+2: within each
    // residue of the slot index mod k+1 they form one path.
    for k in 1..4 {
        let len = 2 * (k + 1) * 5;
        let skeleton: Vec<(usize, usize)> = (0..len)
            .flat_map(|q: usize| (q.saturating_sub(2 * k + 1)..q).map(move |p| (p, q)))
            .filter(|&(p, q)| required_layer(p, q, k) == Some(Layer::Union))
            .collect();
        assert_eq!(skeleton.len(), len - (k + 1));
        let mut deg = vec![0; len];
        for (p, q) in skeleton {
            deg[p] += 1;
            deg[q] += 1;
        }
        assert!(deg.iter().all(|&d| d <= 2));
    }
}

#[test]
fn layer_audit_rejects_missing_gamma_pairs() {
    // All pairs random: the skeleton is fine, the Γ pairs are not.
    let edges: Vec<_> = (0..8).flat_map(|u| (u + 1..8).map(move |v| (u, v))).collect();
    let g = LayeredGraph::from_edges(8, &[], &edges).unwrap();
    assert!(!layer_audit(&g, &[0, 1, 2, 3, 4, 5, 6, 7], 1));
    assert!(layer_audit(&complete(8), &[0, 1, 2, 3, 4, 5, 6, 7], 1));
}

// bicanonical paths

fn post_validate(g: &LayeredGraph, k: usize, path: &PowerPath, sets: &SetTuple) {
    assert!(is_power_path(g, path.vertices(), 2 * k + 1));
    assert!(path.is_bicanonical(sets).unwrap());
    assert!(layer_audit(g, path.vertices(), k));
    let (s, t) = path.endpoints().unwrap();
    assert!(g.is_clique(Layer::Union, s.as_slice()));
    assert!(g.is_clique(Layer::Union, t.as_slice()));
}

#[test]
fn bicanonical_in_complete_graph_with_union_policy() {
    let g = complete(20);
    let sets = SetTuple((0..5).map(|i| VertexSet::from_iter_cap(20, 4 * i..4 * i + 4)).collect());
    let b = build_bicanonical_path(&g, 1, &sets, &VertexSet::new(20), &VertexSet::new(20), 0.2, &union_params(), 1)
        .unwrap();
    assert_eq!(b.path.len(), 10);
    assert!(b.path.is_bicanonical(&sets).unwrap());
    assert!(b.s_check.is_none() && b.t_check.is_none());
}

#[test]
fn bicanonical_needs_random_edges_inside_classes() {
    let (g, classes) = host(4, 6, 0.0, 0);
    let sets = SetTuple(classes.clone());
    let none = VertexSet::new(g.n());
    let err = build_bicanonical_path(&g, 1, &sets, &none, &none, 0.2, &PipelineParams::default(), 3).unwrap_err();
    assert_eq!(err, PipelineError::NotFound);
    let short = SetTuple(vec![classes[0].clone()]);
    assert!(matches!(
        build_bicanonical_path(&g, 1, &short, &none, &none, 0.2, &PipelineParams::default(), 3),
        Err(PipelineError::InvalidInput(_))
    ));
}

#[test]
fn bicanonical_in_perturbed_blowup() {
    for seed in 0..10 {
        let (g, classes) = host(5, 8, 20.0 / 40.0, seed);
        let sets = SetTuple(classes[..4].to_vec());
        let y = classes[4].clone();
        let b = build_bicanonical_path(&g, 1, &sets, &y, &y, 0.2, &PipelineParams::default(), seed).unwrap();
        post_validate(&g, 1, &b.path, &sets);
        let path_set = b.path.vertex_set(g.n());
        let s = b.path.s().unwrap().rev();
        let expect = SetTuple(vec![y.difference(&path_set), classes[1].difference(&path_set)]);
        let again = is_extendible(&g, Layer::Gamma, &s, &expect, 0.2).unwrap();
        assert_eq!(Some(again), b.s_check);
        assert!(b.t_check.unwrap().is_extendible());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn bicanonical_paths_pass_every_audit(seed in any::<u64>(), k in 1usize..3, ell in 3usize..7) {
        let (g, classes) = host(ell.max(k + 2), 8, 0.6, seed);
        let sets = SetTuple(classes[..ell.max(k + 1)].to_vec());
        let none = VertexSet::new(g.n());
        if let Ok(b) = build_bicanonical_path(&g, k, &sets, &none, &none, 0.2, &PipelineParams::default(), seed) {
            post_validate(&g, k, &b.path, &sets);
        }
    }
}

// connections

fn connect_instance() -> (LayeredGraph, ConnectJob) {
    let g = complete(30);
    let sets = SetTuple((0..6).map(|i| VertexSet::from_iter_cap(30, 8 + 3 * i..11 + 3 * i)).collect());
    (g, ConnectJob { s: VertexTuple(vec![0, 1, 2, 3]), t: VertexTuple(vec![4, 5, 6, 7]), sets })
}

#[test]
fn connect_in_complete_graph() {
    let (g, job) = connect_instance();
    let paths = connect_cliques(&g, 1, std::slice::from_ref(&job), &VertexSet::new(30), &union_params(), 5).unwrap();
    let p = &paths[0];
    assert_eq!(p.len(), 20);
    assert_eq!(p.s().unwrap(), job.s);
    assert_eq!(p.t().unwrap(), job.t);
    let inner = &p.vertices()[4..16];
    assert!(PowerPath::unchecked(inner.to_vec(), 3).is_bicanonical(&job.sets).unwrap());
}

#[test]
fn connect_rejects_bad_jobs() {
    let (g, job) = connect_instance();
    let none = VertexSet::new(30);
    let mut bad = job.clone();
    bad.sets.0[0] = VertexSet::new(30);
    assert_eq!(
        connect_cliques(&g, 1, &[bad], &none, &union_params(), 0).unwrap_err(),
        PipelineError::HypothesisViolated { job: 0 }
    );
    assert!(matches!(
        connect_cliques(&g, 1, &[job.clone(), job.clone()], &none, &union_params(), 0),
        Err(PipelineError::InvalidInput(_))
    ));
    // Everything in the sets already used.
    let used = VertexSet::from_iter_cap(30, 8..30);
    assert_eq!(
        connect_cliques(&g, 1, &[job], &used, &union_params(), 0).unwrap_err(),
        PipelineError::ConnectFailed { job: 0 }
    );
}

#[test]
fn connections_concatenate_associatively() {
    let g = complete(40);
    let a = PowerPath::new(&g, (30..36).chain(0..4).collect(), 3).unwrap();
    let c = PowerPath::new(&g, (4..8).chain(36..40).collect(), 3).unwrap();
    let sets = SetTuple((0..6).map(|i| VertexSet::from_iter_cap(40, 8 + 3 * i..11 + 3 * i)).collect());
    let job = ConnectJob { s: a.t().unwrap(), t: c.s().unwrap(), sets };
    let b = connect_cliques(&g, 1, &[job], &VertexSet::new(40), &union_params(), 2).unwrap().remove(0);
    let left = a.concat(&b).unwrap().concat(&c).unwrap();
    let right = a.concat(&b.concat(&c).unwrap()).unwrap();
    assert_eq!(left, right);
    left.validate(&g).unwrap();
    assert_eq!(left.len(), 6 + 12 + 8 + 4);
}

#[test]
fn two_jobs_avoid_each_other() {
    let (g, classes) = host(6, 10, 0.5, 9);
    let n = g.n();
    let pick = |c: usize, r: std::ops::Range<usize>| classes[c].to_vec()[r].to_vec();
    // Endpoint cliques alternate between two classes, so Γ covers the
    // cross pairs; within-class pairs come from the random layer when present.
    let cliques: Vec<VertexTuple> = (0..4)
        .map(|j| {
            let a = pick(j % 2, 2 * j..2 * j + 2);
            let b = pick(2 + j % 2, 2 * j..2 * j + 2);
            VertexTuple(vec![a[0], b[0], a[1], b[1]])
        })
        .collect();
    if !cliques.iter().all(|c| g.is_clique(Layer::Union, c.as_slice())) {
        return;
    }
    let used = cliques.iter().fold(VertexSet::new(n), |acc, c| acc.union(&c.to_set(n)));
    let sets = SetTuple(vec![
        classes[4].clone(),
        classes[5].clone(),
        classes[4].clone(),
        classes[5].clone(),
        classes[4].clone(),
        classes[5].clone(),
    ]);
    let jobs = [
        ConnectJob { s: cliques[0].clone(), t: cliques[1].clone(), sets: sets.clone() },
        ConnectJob { s: cliques[2].clone(), t: cliques[3].clone(), sets },
    ];
    if let Ok(paths) = connect_cliques(&g, 1, &jobs, &VertexSet::new(n), &PipelineParams::default(), 4) {
        let a = paths[0].vertex_set(n);
        let b = paths[1].vertex_set(n);
        assert!(a.is_disjoint(&b));
        assert!(a.intersection(&used).len() == 8 && b.intersection(&used).len() == 8);
    }
}

// absorbers

struct AbsorberHost {
    g: LayeredGraph,
    x: VertexSet,
    sets: SetTuple,
    y: VertexSet,
}

/// Parts: V_1, V_2 (30 each), X drawn from a third part, Y a fourth part.
fn absorber_host(x_len: usize, seed: u64) -> AbsorberHost {
    let (g, classes) = host(4, 30, 0.5, seed);
    AbsorberHost {
        x: take(&classes[2], 0..x_len),
        sets: SetTuple(vec![classes[0].clone(), classes[1].clone()]),
        y: take(&classes[3], 0..20),
        g,
    }
}

#[test]
fn local_absorber_is_sound() {
    let h = absorber_host(3, 1);
    let q = VertexSet::new(h.g.n());
    let params = PipelineParams::default();
    let a = build_absorber_local(&h.g, 1, &h.x, &h.sets, &h.y, &q, 0.5, &params, 7).unwrap();
    assert!(a.gadget.is_well_formed(&h.g));
    assert!(a.leftover.iter().zip(&a.band).all(|(&o, &(lo, hi))| lo <= o && o <= hi));
    assert!(a.y_used <= a.y_limit);
    assert!(a.s_check.is_extendible() && a.t_check.is_extendible());
    assert!(verify_absorbing(&h.g, &a.gadget, &SearchBudget::default()).unwrap());
    for (i, v) in h.sets.iter().enumerate() {
        assert_eq!(v.difference(&a.gadget.path.vertex_set(h.g.n())).len(), a.leftover[i]);
    }
}

#[test]
fn corrupted_slots_fail_verification() {
    let h = absorber_host(2, 2);
    let q = VertexSet::new(h.g.n());
    let a = build_absorber_local(&h.g, 1, &h.x, &h.sets, &h.y, &q, 0.5, &PipelineParams::default(), 1).unwrap();
    let budget = SearchBudget::default();
    let mut out_of_range = a.gadget.clone();
    out_of_range.slots[0].after = out_of_range.path.len();
    assert!(!verify_absorbing(&h.g, &out_of_range, &budget).unwrap());
    let mut shared = a.gadget.clone();
    shared.slots[1].after = shared.slots[0].after;
    assert!(!verify_absorbing(&h.g, &shared, &budget).unwrap());
    // Strip every edge at one absorbable vertex: it can never be absorbed.
    let lonely = h.x.to_vec()[0];
    let strip = |layer| -> Vec<(usize, usize)> {
        h.g.edges(layer).into_iter().filter(|&(a, b)| a != lonely && b != lonely).collect()
    };
    let g = LayeredGraph::from_edges(h.g.n(), &strip(Layer::Gamma), &strip(Layer::Random)).unwrap();
    assert!(!verify_absorbing(&g, &a.gadget, &budget).unwrap());
}

#[test]
fn verify_trivial_and_too_large() {
    let g = complete(30);
    let path = PowerPath::new(&g, (0..8).collect(), 3).unwrap();
    let empty = AbsorberGadget { path: path.clone(), absorbable: VertexSet::new(30), slots: vec![] };
    assert!(verify_absorbing(&g, &empty, &SearchBudget::default()).unwrap());
    let many = VertexSet::from_iter_cap(30, 8..8 + VERIFY_CAP + 1);
    let slots = many.iter().map(|v| InsertionSlot { vertex: v, after: 0 }).collect();
    let big = AbsorberGadget { path, absorbable: many, slots };
    assert_eq!(
        verify_absorbing(&g, &big, &SearchBudget::default()).unwrap_err(),
        PipelineError::TooLarge { size: VERIFY_CAP + 1, cap: VERIFY_CAP }
    );
}

#[test]
fn absorb_examples() {
    let h = absorber_host(4, 3);
    let n = h.g.n();
    let q = VertexSet::new(n);
    let a = build_absorber_local(&h.g, 1, &h.x, &h.sets, &h.y, &q, 0.5, &PipelineParams::default(), 2).unwrap();
    let same = absorb(&h.g, &a.gadget, &VertexSet::new(n)).unwrap();
    assert_eq!(same, a.gadget.path);
    let full = absorb(&h.g, &a.gadget, &h.x).unwrap();
    assert!(is_power_path(&h.g, full.vertices(), 3));
    assert_eq!(full.vertex_set(n), a.gadget.path.vertex_set(n).union(&h.x));
    assert_eq!(full.endpoints().unwrap(), a.gadget.path.endpoints().unwrap());
    let outsider = set(n, &[h.y.to_vec()[0]]);
    assert_eq!(absorb(&h.g, &a.gadget, &outsider).unwrap_err(), PipelineError::NotSubset);
}

#[test]
fn local_absorber_preconditions() {
    let h = absorber_host(2, 4);
    let q = VertexSet::new(h.g.n());
    let params = PipelineParams::default();
    let err = build_absorber_local(&h.g, 1, &h.x, &h.sets, &h.x, &q, 0.5, &params, 0).unwrap_err();
    assert!(matches!(err, PipelineError::InvalidInput(_)));
    let short = SetTuple(vec![h.sets[0].clone()]);
    assert!(matches!(
        build_absorber_local(&h.g, 1, &h.x, &short, &h.y, &q, 0.5, &params, 0),
        Err(PipelineError::LengthMismatch { .. })
    ));
    // X inside a set's own part has no neighbours there.
    let wrong_x = take(&h.sets[0], 0..1);
    let sets = SetTuple(vec![take(&h.sets[0], 1..30), h.sets[1].clone()]);
    assert!(matches!(
        build_absorber_local(&h.g, 1, &wrong_x, &sets, &h.y, &q, 0.5, &params, 0),
        Err(PipelineError::DegreeCondition { .. })
    ));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn local_absorbers_verify(seed in any::<u64>(), x_len in 1usize..=6) {
        let h = absorber_host(x_len, seed);
        let q = VertexSet::new(h.g.n());
        let a = build_absorber_local(&h.g, 1, &h.x, &h.sets, &h.y, &q, 0.5, &PipelineParams::default(), seed).unwrap();
        prop_assert!(verify_absorbing(&h.g, &a.gadget, &SearchBudget::default()).unwrap());
    }
}

// covering paths

struct CoverHost {
    g: LayeredGraph,
    w: Partition,
    x: VertexSet,
    reduced: LayeredGraph,
}

/// Three parts of `2 * (w + x)` vertices; each part gives two W classes of
/// size `w` and contributes `2x` vertices to X. Classes are ordered a1 b1
/// c1 a2 b2 c2.
fn cover_host(w: usize, x: usize, p: f64, seed: u64) -> CoverHost {
    let (g, parts) = host(3, 2 * (w + x), p, seed);
    let n = g.n();
    let mut classes = Vec::new();
    let mut xs = VertexSet::new(n);
    for piece in 0..2 {
        for part in &parts {
            classes.push(take(part, piece * w..(piece + 1) * w));
        }
    }
    for part in &parts {
        xs.union_with(&take(part, 2 * w..2 * (w + x)));
    }
    let mut rest = VertexSet::full(n);
    for c in &classes {
        rest.difference_with(c);
    }
    let w = Partition::new(n, rest, classes).unwrap();
    let mut reduced = LayeredGraph::empty(6);
    for i in 0..6 {
        for j in i + 1..6 {
            if i % 3 != j % 3 {
                reduced.add_gamma_edge(i, j).unwrap();
            }
        }
    }
    CoverHost { g, w, x: xs, reduced }
}

#[test]
fn choose_z_examples() {
    let h = cover_host(4, 0, 0.0, 0);
    assert_eq!(choose_z(&h.reduced, 1), Some(2));
    assert_eq!(choose_z(&complete(5), 2), Some(3));
    assert_eq!(choose_z(&LayeredGraph::empty(4), 1), None);
}

#[test]
fn covering_path_properties() {
    let h = cover_host(60, 5, 0.5, 1);
    let n = h.g.n();
    let params = PipelineParams::default();
    let z = choose_z(&h.reduced, 1).unwrap();
    let c = absorbing_covering(&h.g, 1, &h.x, &h.w, &h.reduced, z, 0.1, params.gamma, &params, 3).unwrap();
    let path = &c.gadget.path;
    assert!(is_power_path(&h.g, path.vertices(), 3));
    assert!(layer_audit(&h.g, path.vertices(), 1));
    let used = path.vertex_set(n);
    assert!(used.is_disjoint(&h.x));
    assert!(used.is_subset(&h.w.classes.iter().fold(VertexSet::new(n), |a, c| a.union(c))));
    let (lo, hi) = leftover_band(60, params.gamma, params.tol);
    assert_eq!(c.band, (lo, hi));
    for (i, class) in h.w.classes.iter().enumerate() {
        let left = class.difference(&used).len();
        assert_eq!(left, c.leftover[i]);
        assert!(lo <= left && left <= hi);
    }
    // Endpoint properties recomputed from scratch.
    let wz = h.w.classes[z].difference(&used);
    let s_sets = SetTuple(vec![wz.clone(), h.w.classes[1].difference(&used)]);
    let t_sets = SetTuple(vec![wz, h.w.classes[0].difference(&used)]);
    assert!(is_extendible(&h.g, Layer::Gamma, &path.s().unwrap().rev(), &s_sets, params.rho).unwrap().is_extendible());
    assert!(is_extendible(&h.g, Layer::Gamma, &path.t().unwrap(), &t_sets, params.rho).unwrap().is_extendible());
    // Absorbing: every subset splices in.
    let all = absorb(&h.g, &c.gadget, &h.x).unwrap();
    assert_eq!(all.vertex_set(n), used.union(&h.x));
    let half = VertexSet::from_iter_cap(n, h.x.iter().step_by(2));
    let some = absorb(&h.g, &c.gadget, &half).unwrap();
    assert_eq!(some.endpoints().unwrap(), path.endpoints().unwrap());
}

#[test]
fn covering_without_vertices_to_absorb() {
    let h = cover_host(40, 0, 0.5, 2);
    let params = PipelineParams::default();
    let c = absorbing_covering(&h.g, 1, &h.x, &h.w, &h.reduced, 2, 0.1, params.gamma, &params, 1).unwrap();
    assert!(c.gadget.slots.is_empty());
    assert!(c.leftover.iter().all(|&o| (c.band.0..=c.band.1).contains(&o)));
}

#[test]
fn covering_reports_infeasible_sizes() {
    // 4 vertices per class cannot hold the gadgets for 10 vertices per part.
    let h = cover_host(12, 5, 0.5, 3);
    let params = PipelineParams::default();
    let err = absorbing_covering(&h.g, 1, &h.x, &h.w, &h.reduced, 2, 0.1, params.gamma, &params, 1).unwrap_err();
    assert!(matches!(err, PipelineError::InfeasibleParams(_)), "{err:?}");
    let err = absorbing_covering(&h.g, 1, &h.x, &h.w, &h.reduced, 0, 0.1, params.gamma, &params, 1).unwrap_err();
    assert!(matches!(err, PipelineError::InvalidInput(_)));
}

// full pipeline

fn pipeline_host(size: usize, p: f64, seed: u64) -> (LayeredGraph, Partition) {
    let (g, parts) = host(3, size, p, seed);
    let partition = Partition::round_robin(g.n(), &parts, 2).unwrap();
    (g, partition)
}

#[test]
fn close_cycle_checks_the_order() {
    let g = complete(8);
    assert_eq!(close_cycle(&g, (0..8).collect(), 3).unwrap(), (0..8).collect::<Vec<_>>());
    assert!(close_cycle(&g, (0..7).collect(), 3).is_err());
    let c = common::cycle_power(10, 2);
    assert!(close_cycle(&c, (0..10).collect(), 2).is_ok());
    assert!(close_cycle(&c, (0..10).collect(), 3).is_err());
}

#[test]
fn pipeline_rejects_partitions_outside_degree_form() {
    let (g, _) = pipeline_host(20, 0.1, 0);
    // Classes cutting across the parts contain Γ edges.
    let n = g.n();
    let classes: Vec<VertexSet> = (0..6).map(|i| VertexSet::from_iter_cap(n, (0..n).filter(|v| v % 6 == i))).collect();
    let bad = Partition::new(n, VertexSet::new(n), classes).unwrap();
    let f = full_pipeline(&g, 1, &bad, 0.15, &PipelineParams::default(), 0).unwrap_err();
    assert_eq!(f.stage, Stage::Precondition);
    assert_eq!(f.attempts, 1);
}

#[test]
fn pipeline_without_random_edges_fails_at_first_covering() {
    let (g, partition) = pipeline_host(200, 0.0, 0);
    let params = PipelineParams { gamma: 0.05, gamma_reservoir: 0.3, xi: 0.1, ..PipelineParams::default() };
    let f = full_pipeline(&g, 1, &partition, 0.15, &params, 0).unwrap_err();
    assert_eq!(f.stage, Stage::AbsorbingCovering1);
    assert_eq!(f.error, PipelineError::NotFound);
    assert!(f.trace.last().unwrap().starts_with("absorbing_covering_1: failed"));
}

#[test]
fn small_pipeline_runs_are_tagged_or_validated() {
    for seed in 0..3 {
        let (g, partition) = pipeline_host(20, 40.0 / 60.0, seed);
        match full_pipeline(&g, 1, &partition, 0.15, &PipelineParams::default(), seed) {
            Ok(run) => assert!(is_power_hamilton_cycle(&g, &run.order, 3).unwrap()),
            Err(f) => {
                assert!(Stage::ALL.contains(&f.stage));
                assert!(f.attempts >= 1);
                assert!(f.trace.last().unwrap().starts_with(f.stage.name()));
            }
        }
    }
}

/// Large enough for every stage to have room: classes of 920 split into
/// 100 reservoir and 820 main vertices, about 10 left over per class.
fn demo_params() -> PipelineParams {
    PipelineParams { gamma: 0.0122, gamma_reservoir: 0.1, xi: 0.1087, ..PipelineParams::default() }
}

#[test]
fn pipeline_builds_a_hamilton_cube() {
    let (g, partition) = pipeline_host(1840, 0.2, 7);
    let run = full_pipeline(&g, 1, &partition, 0.15, &demo_params(), 11).unwrap();
    assert_eq!(run.order.len(), g.n());
    assert!(is_power_hamilton_cycle(&g, &run.order, 3).unwrap());
    assert_eq!(run.trace.len(), Stage::ALL.len());
    for (line, stage) in run.trace.iter().zip(Stage::ALL) {
        assert!(line.starts_with(stage.name()), "{line}");
    }
    let again = full_pipeline(&g, 1, &partition, 0.15, &demo_params(), 11).unwrap();
    assert_eq!(again, run);
}
