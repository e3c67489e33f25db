use graphcx::chromatic::*;
use graphcx::graphcore::{enumerate_graphs, CanonicalGraph, GraphConstraints, LabeledGraph, Parity};
use graphcx::linalg::{q, qq, GraphVector};
use num_traits::{Signed, Zero};
use rand::prelude::*;

/// Inversion count parity, independent of the cycle-based sign in the library.
fn inversion_sign(p: &[usize]) -> i64 {
    let mut inv = 0;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            inv += (p[i] > p[j]) as usize;
        }
    }
    if inv % 2 == 0 {
        1
    } else {
        -1
    }
}

/// A random trivalent ribbon graph without tadpoles (possibly disconnected).
fn random_ribbon(rng: &mut StdRng, v: usize) -> RibbonGraph {
    loop {
        let mut ends: Vec<usize> = (0..v).flat_map(|x| [x, x, x]).collect();
        ends.shuffle(rng);
        let edges: Vec<(usize, usize)> = ends.chunks(2).map(|c| (c[0], c[1])).collect();
        if edges.iter().any(|&(a, b)| a == b) {
            continue;
        }
        let mut g = RibbonGraph::from_labeled(&LabeledGraph::new(Parity::Odd, v, edges)).unwrap();
        for x in 0..v {
            if rng.gen_bool(0.5) {
                g = g.flip(x);
            }
        }
        return g;
    }
}

/// The same ribbon graph after renaming vertices, reordering edges and swapping edge ends.
fn relabel(rng: &mut StdRng, g: &RibbonGraph) -> RibbonGraph {
    let n = g.num_vertices;
    let m = g.edges.len();
    let mut vp: Vec<usize> = (0..n).collect();
    vp.shuffle(rng);
    let mut ep: Vec<usize> = (0..m).collect();
    ep.shuffle(rng);
    let swap: Vec<bool> = (0..m).map(|_| rng.gen_bool(0.5)).collect();
    let mut edges = vec![(0, 0); m];
    for k in 0..m {
        let (a, b) = g.edges[k];
        edges[ep[k]] = if swap[k] { (vp[b], vp[a]) } else { (vp[a], vp[b]) };
    }
    let half = |h: usize| {
        let (k, end) = (h / 2, h % 2);
        2 * ep[k] + if swap[k] { 1 - end } else { end }
    };
    let mut rotation = vec![[0; 3]; n];
    for x in 0..n {
        let r = g.rotation[x];
        let s = rng.gen_range(0..3);
        rotation[vp[x]] = [half(r[s]), half(r[(s + 1) % 3]), half(r[(s + 2) % 3])];
    }
    RibbonGraph::new(n, edges, rotation).unwrap()
}

#[test]
fn theta_flips() {
    let th = RibbonGraph::from_labeled(&LabeledGraph::new(Parity::Odd, 2, vec![(0, 1); 3])).unwrap();
    let a = th.to_odd().unwrap();
    assert!(!a.is_zero());
    assert_eq!(th.flip(0).to_odd().unwrap(), a.scale(&q(-1)));
    assert_eq!(th.flip(1).flip(1), th);
    assert_eq!(th.f_invariant().total, q(6));
    assert_eq!(th.flip(0).f_invariant().total, q(-6));
}

#[test]
fn planar_k4() {
    // centre 0, outer vertices 1, 2, 3 clockwise
    let edges = vec![(0, 1), (0, 2), (0, 3), (1, 2), (2, 3), (3, 1)];
    let orders = [[1, 2, 3], [2, 0, 3], [3, 0, 1], [1, 0, 2]];
    let g = RibbonGraph::from_neighbour_orders(edges.clone(), &orders).unwrap();
    let seq: Vec<usize> = g.rotation.iter().flatten().copied().collect();
    assert_eq!(seq, vec![0, 2, 4, 6, 1, 11, 8, 3, 7, 10, 5, 9]);
    let expected =
        GraphVector::from_labeled(&LabeledGraph::new(Parity::Odd, 4, edges), q(inversion_sign(&seq))).unwrap();
    assert_eq!(g.to_odd().unwrap(), expected);
    assert_eq!(g.odd_sign(), 1);
    let f = g.f_invariant();
    assert_eq!(f.colorings, 6);
    assert_eq!(f.total.abs(), q(6));
}

#[test]
fn translation_is_well_defined() {
    let mut rng = StdRng::seed_from_u64(41);
    for _ in 0..200 {
        let v = 2 * rng.gen_range(1..=4);
        let g = random_ribbon(&mut rng, v);
        let h = relabel(&mut rng, &g);
        let seq: Vec<usize> = g.rotation.iter().flatten().copied().collect();
        assert_eq!(g.odd_sign(), inversion_sign(&seq));
        assert_eq!(g.to_odd().unwrap(), h.to_odd().unwrap());
        assert_eq!(g.f_invariant(), h.f_invariant());
        let x = rng.gen_range(0..v);
        assert_eq!(g.flip(x).f_invariant().total, -g.f_invariant().total);
        assert_eq!(g.flip(x).to_odd().unwrap(), g.to_odd().unwrap().scale(&q(-1)));
    }
}

#[test]
fn round_trip_through_odd_graphs() {
    let mut rng = StdRng::seed_from_u64(42);
    for _ in 0..100 {
        let v = 2 * rng.gen_range(1..=4);
        let g = random_ribbon(&mut rng, v);
        let odd = g.to_odd().unwrap();
        let mut back = GraphVector::zero(Parity::Odd);
        for (r, c) in to_ribbon(&odd).unwrap() {
            back.add_scaled(&r.to_odd().unwrap(), &c).unwrap();
        }
        assert_eq!(back, odd);
        if !odd.is_zero() {
            assert_eq!(f_odd(&odd).unwrap().total, g.f_invariant().total);
        }
    }
}

#[test]
fn colour_classes() {
    let mut rng = StdRng::seed_from_u64(43);
    for _ in 0..100 {
        let v = 2 * rng.gen_range(1..=4);
        let g = random_ribbon(&mut rng, v);
        let cs = g.colorings();
        assert_eq!(cs.len() % 6, 0);
        // one colouring per class: the first two edges at vertex 0 get colours 0 and 1
        let r = g.rotation[0];
        let per: i64 = cs.iter().filter(|c| c[r[0] / 2] == 0 && c[r[1] / 2] == 1).map(|c| g.coloring_sign(c)).sum();
        let f = g.f_invariant();
        assert_eq!(f.total, q(6 * per));
        assert_eq!(f.per_class, q(per));
    }
}

#[test]
fn uncolourable_and_linear() {
    // Petersen graph
    let mut edges: Vec<(usize, usize)> = (0..5).map(|i| (i, (i + 1) % 5)).collect();
    edges.extend((0..5).map(|i| (i, i + 5)));
    edges.extend((0..5).map(|i| (5 + i, 5 + (i + 2) % 5)));
    let p = RibbonGraph::from_labeled(&LabeledGraph::new(Parity::Odd, 10, edges)).unwrap();
    assert!(p.colorings().is_empty());
    assert!(p.f_invariant().is_zero());

    let th = RibbonGraph::from_labeled(&LabeledGraph::new(Parity::Odd, 2, vec![(0, 1); 3])).unwrap();
    assert_eq!(f_ribbon_vector(&[(th.clone(), q(2))]).total, q(12));
    assert_eq!(f_ribbon_vector(&[(th.clone(), q(1)), (th.flip(0), q(1))]).total, q(0));
    assert!(RibbonGraph::from_labeled(&LabeledGraph::new(Parity::Odd, 3, vec![(0, 1), (1, 2), (2, 0)])).is_err());
}

fn one_four_valent(g: &CanonicalGraph) -> bool {
    let val = g.valences();
    val.iter().filter(|&&k| k == 4).count() == 1 && val.iter().all(|&k| k == 3 || k == 4)
}

#[test]
fn coboundaries_have_no_colouring_value() {
    let c = GraphConstraints::connected();
    let mut seen = 0;
    for (v, e) in [(3, 5), (5, 8), (7, 11)] {
        for g in enumerate_graphs(v, e, Parity::Odd, &c).unwrap().iter().filter(|g| one_four_valent(g)) {
            assert!(f_coboundary_check(g).unwrap().is_zero(), "{g}");
            seen += 1;
        }
    }
    assert!(seen > 20, "{seen}");

    let mut rng = StdRng::seed_from_u64(44);
    let mut tried = 0;
    while tried < 30 {
        let mut ends: Vec<usize> = vec![0; 4];
        ends.extend((1..7).flat_map(|x| [x, x, x]));
        ends.shuffle(&mut rng);
        let edges: Vec<(usize, usize)> = ends.chunks(2).map(|c| (c[0], c[1])).collect();
        if edges.iter().any(|&(a, b)| a == b) {
            continue;
        }
        let Some((g, _)) = LabeledGraph::new(Parity::Odd, 7, edges).canonicalize().unwrap() else { continue };
        if !g.is_connected() {
            continue;
        }
        assert!(f_coboundary_check(&g).unwrap().is_zero(), "{g}");
        tried += 1;
    }

    let k4 = LabeledGraph::new(Parity::Odd, 4, vec![(0, 1), (0, 2), (0, 3), (1, 2), (2, 3), (3, 1)]);
    let k4 = k4.canonicalize().unwrap().unwrap().0;
    assert!(f_coboundary_check(&k4).is_err());
}

#[test]
fn chains() {
    let heptagon = |s: [usize; 3]| {
        let mut edges: Vec<(usize, usize)> = (0..7).map(|i| (i, (i + 1) % 7)).collect();
        edges.extend(s.iter().map(|&a| (a, 7)));
        LabeledGraph::new(Parity::Odd, 8, edges).canonicalize().unwrap().unwrap().0
    };
    let mut l = chain_lengths(&heptagon([0, 1, 2]));
    l.sort();
    assert_eq!(l, vec![1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 5, 5]);
    assert!(in_chain_space(&heptagon([0, 1, 2])));
    assert!(in_chain_space(&heptagon([0, 1, 4])));
    assert!(in_chain_space(&heptagon([0, 2, 4])));
    assert!(!in_chain_space(&heptagon([0, 1, 3])));
}

#[test]
fn loop_seven_partner() {
    let r = l7_pipeline().unwrap();
    // the S-part of [Θ, L_7] is the explicit three-term sum up to a global factor
    assert_eq!(r.w1.len(), 3);
    let lambda = r.w1_scale.clone().expect("W_7^1 is proportional to the explicit one");
    assert!(!lambda.is_zero());
    // the explicit R_7^1 bounds the explicit W_7^1 up to the normalization of δ
    assert_eq!(r.explicit_r_ratio, Some(q(2)));
    assert_eq!(graphcx::calculus::delta(&r.r_scaled).unwrap(), r.w1.scale(&q(-1)));
    assert_eq!(graphcx::calculus::delta(&r.r_solved).unwrap(), r.w1.scale(&q(-1)));
    assert!(r.x5_part.is_zero());
    assert!(r.w2_closed);
    assert!(r.w2.iter().all(|(g, _)| is_trivalent(g)));
    assert!(r.w2_scale.as_ref().is_some_and(|s| !s.is_zero()));
    // the explicit ribbon rewrite is the explicit odd W_7^2 under the anchor rule
    assert_eq!(r.ribbon_sign, Some(q(1)));
    assert_eq!(r.f_explicit_ribbon.total, q(-10));
    assert_eq!(r.f_explicit_ribbon.per_class, qq(-5, 3));
    assert_eq!(r.f_explicit_ribbon.colorings, 42);
    assert_eq!(r.f_w2.total, r.w2_scale.clone().unwrap() * q(-10));
    assert!(r.nonexact());
    let j = r.to_json();
    assert_eq!(j["nonexact"], true);
    assert_eq!(j["f_explicit_ribbon"]["total"], "-10");
}

#[test]
fn explicit_data() {
    assert_eq!(explicit_w1().unwrap().len(), 3);
    assert_eq!(
        explicit_r1()
            .unwrap()
            .coeff(
                &LabeledGraph::new(Parity::Odd, 7, {
                    let mut e: Vec<(usize, usize)> = (0..6).map(|i| (i, (i + 1) % 6)).collect();
                    e.extend([(0, 6), (2, 6), (4, 6)]);
                    e
                })
                .canonicalize()
                .unwrap()
                .unwrap()
                .0
            )
            .abs(),
        qq(1, 3)
    );
    assert_eq!(explicit_w2().unwrap().len(), 3);
    assert_eq!(explicit_w2_ribbon().unwrap().len(), 3);
    assert!(ratio(&explicit_w2().unwrap(), &explicit_w1().unwrap()).is_none());
}
