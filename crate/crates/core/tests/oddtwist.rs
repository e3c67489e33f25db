use graphcx::calculus::*;
use graphcx::graphcore::*;
use graphcx::linalg::*;
use graphcx::oddtwist::*;
use num_traits::Zero;
use rand::prelude::*;

const ODD: Parity = Parity::Odd;

fn vec1(g: &CanonicalGraph) -> GraphVector {
    GraphVector::from_graph(g.clone())
}

fn x(k: usize) -> CanonicalGraph {
    multi_edge(ODD, k).unwrap()
}

fn inv_fact(k: usize) -> Rational {
    (1..=k as i64).fold(q(1), |acc, i| acc / q(i))
}

fn binom(n: usize, k: usize) -> i64 {
    (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i + 1) as i64)
}

fn edges_of(g: &CanonicalGraph) -> usize {
    g.num_edges() + g.num_dotted()
}

fn below(v: &GraphVector, bound: usize) -> GraphVector {
    v.filter(|g| edges_of(g) <= bound)
}

/// `Y_{i,j,n}`: vertex 0 joined to 1 by `i` edges and to 2 by `j` edges, and 1 to 2 by `n` edges.
fn y(i: usize, j: usize, n: usize) -> GraphVector {
    let mut e = vec![(0, 1); i];
    e.extend(vec![(0, 2); j]);
    e.extend(vec![(1, 2); n]);
    GraphVector::from_labeled(&LabeledGraph::new(ODD, 3, e), q(1)).unwrap()
}

fn random_dotted(rng: &mut StdRng, max_v: usize, max_e: usize, max_d: usize) -> GraphVector {
    loop {
        let v = rng.gen_range(2..=max_v);
        let e = rng.gen_range(0..=max_e);
        let b = enumerate_graphs(v, e, ODD, &GraphConstraints::any()).unwrap();
        if b.is_empty() {
            continue;
        }
        let g = b.get(rng.gen_range(0..b.len())).to_labeled();
        let mut pairs: Vec<(usize, usize)> = (0..v).flat_map(|a| (a + 1..v).map(move |b| (a, b))).collect();
        pairs.shuffle(rng);
        let d = rng.gen_range(0..=max_d.min(pairs.len()));
        let lg = LabeledGraph::with_dotted(ODD, v, g.edges, pairs[..d].to_vec());
        let out = GraphVector::from_labeled(&lg, q(rng.gen_range(1..=3))).unwrap();
        if !out.is_zero() {
            return out;
        }
    }
}

fn deg(v: &GraphVector) -> i64 {
    v.iter().next().map(|(g, _)| g.degree()).unwrap_or(0)
}

fn sgn(k: i64) -> Rational {
    if k.rem_euclid(2) == 0 {
        q(1)
    } else {
        q(-1)
    }
}

#[test]
fn m_at_multiplicity_three_is_theta_over_six() {
    let t = TruncationLevel::new(20, 3).unwrap();
    let m = mc_m(&t);
    assert_eq!(m.len(), 1);
    assert_eq!(m.coeff(&theta()), qq(1, 6));
    let t = TruncationLevel::new(20, 7).unwrap();
    let m = mc_m(&t);
    assert_eq!(m.len(), 3);
    assert_eq!(m.coeff(&x(7)), qq(1, 5040));
    assert!(TruncationLevel::new(0, 3).is_err());
}

#[test]
fn even_multi_edges_vanish() {
    for k in (0..12).step_by(2) {
        assert!(multi_edge(ODD, k).is_none(), "X_{k}");
    }
}

#[test]
fn y_symmetries() {
    for i in 0..4 {
        for j in 0..4 {
            for n in 0..4 {
                let a = y(i, j, n);
                assert_eq!(a, y(j, i, n).scale(&sgn(n as i64 + 1)), "Y_{i},{j},{n}");
                assert_eq!(a, y(i, n, j).scale(&sgn(i as i64 + 1)), "Y_{i},{j},{n}");
            }
        }
    }
}

#[test]
fn prelie_of_multi_edges() {
    for m in [1, 3, 5] {
        for n in [1, 3, 5] {
            let lhs = prelie(&vec1(&x(m)), &vec1(&x(n))).unwrap();
            let mut rhs = GraphVector::zero(ODD);
            for i in 0..=m {
                rhs.add_scaled(&y(i, m - i, n), &q(2 * binom(m, i))).unwrap();
            }
            assert_eq!(lhs, rhs, "X_{m} • X_{n}");
        }
    }
}

#[test]
fn m_is_maurer_cartan() {
    let r = check_mc(&TruncationLevel::new(9, 7).unwrap()).unwrap();
    assert!(r.holds(), "{:?}", r.residual);
    assert_eq!(r.verified_through, 8);
    let r = check_mc(&TruncationLevel::new(12, 11).unwrap()).unwrap();
    assert!(r.holds());
    assert!(check_mc(&TruncationLevel::new(3, 3).unwrap()).is_err());
}

#[test]
fn m_prime_squares_to_zero() {
    let t = TruncationLevel::new(10, 9).unwrap();
    let mp = mc_m_prime(&t);
    let sq = prelie(&mp, &mp).unwrap();
    assert!(below(&sq, 10).is_zero());
}

#[test]
fn m_prime_equals_full_exponential_series() {
    let t = TruncationLevel::new(11, 11).unwrap();
    let mut all = GraphVector::zero(ODD);
    for j in 0..=11 {
        if let Some(g) = multi_edge(ODD, j) {
            all.add_term(g, inv_fact(j)).unwrap();
        }
    }
    assert_eq!(all, mc_m_prime(&t));
}

#[test]
fn c_is_twisted_closed() {
    let t = TruncationLevel::new(12, 11).unwrap();
    let c = cocycle_c(&t);
    assert_eq!(c.coeff(&theta()), qq(1, 6));
    assert_eq!(c.coeff(&x(5)), qq(2, 120));
    let d = twisted_delta(&c, &t).unwrap();
    assert_eq!(d.exact_through, 12);
    assert!(d.value.is_zero() || below(&d.value, d.exact_through).is_zero());
    // m itself is not closed
    let dm = twisted_delta(&mc_m(&t), &t).unwrap();
    assert!(!below(&dm.value, dm.exact_through).is_zero());
}

#[test]
fn twisted_delta_of_point_is_m_prime() {
    let t = TruncationLevel::new(9, 9).unwrap();
    let d = twisted_delta(&vec1(&point(ODD)), &t).unwrap();
    assert_eq!(d.value, mc_m_prime(&t));
}

#[test]
fn twisted_delta_squares_to_zero() {
    let t = TruncationLevel::new(8, 9).unwrap();
    let c = GraphConstraints::any();
    for v in 1..=4 {
        for e in 0..=4 {
            for g in enumerate_graphs(v, e, ODD, &c).unwrap().iter() {
                let d1 = twisted_delta(&vec1(g), &t).unwrap().value;
                let d2 = twisted_delta(&d1, &t).unwrap().value;
                assert!(below(&d2, 8).is_zero(), "on {g}");
            }
        }
    }
}

#[test]
fn twisted_delta_rejects_even() {
    let t = TruncationLevel::new(5, 5).unwrap();
    assert!(twisted_delta(&vec1(&point(Parity::Even)), &t).is_err());
}

#[test]
fn delta1_examples() {
    let d = delta1(&vec1(&theta())).unwrap();
    assert_eq!(d, vec1(&zeta()).scale(&q(-6)));
    let d = delta1(&vec1(&x(5))).unwrap();
    let target = canonicalize(&LabeledGraph::with_dotted(ODD, 2, vec![(0, 1); 3], vec![(0, 1)])).unwrap().unwrap();
    assert_eq!(d.coeff(&target.0), q(-20 * target.1 as i64));
    for g in enumerate_graphs(4, 5, ODD, &GraphConstraints::connected().with_max_multiplicity(Some(1))).unwrap().iter()
    {
        assert!(delta1(&vec1(g)).unwrap().is_zero());
    }
}

#[test]
fn delta1_and_p_square_to_zero_and_anticommute() {
    let mut rng = StdRng::seed_from_u64(31);
    for _ in 0..150 {
        let a = random_dotted(&mut rng, 4, 6, 2);
        let d1 = delta1(&a).unwrap();
        assert!(delta1(&d1).unwrap().is_zero());
        let p = bracket_p(&a).unwrap();
        assert!(bracket_p(&p).unwrap().is_zero());
        let anti = delta1(&p).unwrap().add(&bracket_p(&d1).unwrap()).unwrap();
        assert!(anti.is_zero());
    }
}

#[test]
fn dotted_bracket_is_a_graded_lie_bracket() {
    let mut rng = StdRng::seed_from_u64(32);
    for _ in 0..40 {
        let a = random_dotted(&mut rng, 3, 3, 1);
        let b = random_dotted(&mut rng, 3, 3, 1);
        let c = random_dotted(&mut rng, 3, 3, 1);
        let (da, db, dc) = (deg(&a), deg(&b), deg(&c));
        assert_eq!(bracket(&a, &b).unwrap(), bracket(&b, &a).unwrap().scale(&-sgn(da * db)));
        let mut total = bracket(&a, &bracket(&b, &c).unwrap()).unwrap().scale(&sgn(da * dc));
        total.add_assign(&bracket(&b, &bracket(&c, &a).unwrap()).unwrap().scale(&sgn(db * da))).unwrap();
        total.add_assign(&bracket(&c, &bracket(&a, &b).unwrap()).unwrap().scale(&sgn(dc * db))).unwrap();
        assert!(total.is_zero());
    }
}

#[test]
fn delta1_delta_and_p_are_derivations() {
    let mut rng = StdRng::seed_from_u64(33);
    let ops: [(&str, fn(&GraphVector) -> graphcx::Result<GraphVector>); 3] =
        [("δ₁", delta1), ("δ", delta), ("[p,·]", bracket_p)];
    for _ in 0..60 {
        let a = random_dotted(&mut rng, 3, 4, 1);
        let b = random_dotted(&mut rng, 3, 4, 1);
        for (name, op) in ops {
            let lhs = op(&bracket(&a, &b).unwrap()).unwrap();
            let mut rhs = bracket(&op(&a).unwrap(), &b).unwrap();
            rhs.add_assign(&bracket(&a, &op(&b).unwrap()).unwrap().scale(&sgn(deg(&a)))).unwrap();
            assert_eq!(lhs, rhs, "{name}");
        }
        // δ₁ and δ anticommute
        let x = delta1(&delta(&a).unwrap()).unwrap().add(&delta(&delta1(&a).unwrap()).unwrap()).unwrap();
        assert!(x.is_zero());
    }
}

#[test]
fn p_bracket_rules() {
    let p = DottedElement::p();
    assert!(dotted_bracket(&p, &p).unwrap().is_zero());
    let e = DottedElement::from_graphs(vec1(&edge_graph(ODD)));
    assert_eq!(tilde_delta(&p).unwrap().graphs, vec1(&zeta()));
    // δ p is [edge, p]
    assert_eq!(dotted_bracket(&e, &p).unwrap().graphs, vec1(&zeta()));
    let m = DottedElement::from_graphs(mc_m(&TruncationLevel::new(7, 7).unwrap()));
    assert_eq!(dotted_bracket(&m, &p).unwrap(), dotted_bracket(&p, &m).unwrap());
}

#[test]
fn m_tilde_is_maurer_cartan() {
    let t = TruncationLevel::new(8, 7).unwrap();
    let r = check_mc_tilde(&t).unwrap();
    assert_eq!(r.verified_through, 6);
    assert!(r.holds(), "{:?}", r.residual);
    let r = check_mc_tilde(&TruncationLevel::new(12, 13).unwrap()).unwrap();
    assert_eq!(r.verified_through, 11);
    assert!(r.holds());
    // the pieces: δ p = ζ cancels the lowest term of δ₁ m
    let m = mc_m(&t);
    let d1m = delta1(&m).unwrap();
    assert_eq!(d1m.coeff(&zeta()), q(-1));
}

#[test]
fn c_tilde_is_closed_and_projects_to_twice_c() {
    let t = TruncationLevel::new(10, 11).unwrap();
    let ct = cocycle_c_tilde(&t);
    assert_eq!(ct.p_coeff, q(2));
    assert_eq!(project_undotted(&ct), cocycle_c(&t).scale(&q(2)));
    let d = twisted_dotted_delta(&ct, &t).unwrap();
    assert!(below(&d.value.graphs, 9).is_zero(), "{:?}", below(&d.value.graphs, 9));
    // m̃ itself is not closed
    let d = twisted_dotted_delta(&mc_tilde(&t), &t).unwrap();
    assert!(!below(&d.value.graphs, 9).is_zero());
}

#[test]
fn twisted_dotted_delta_squares_to_zero() {
    let t = TruncationLevel::new(7, 9).unwrap();
    let mut rng = StdRng::seed_from_u64(34);
    for _ in 0..40 {
        let a = DottedElement::from_graphs(random_dotted(&mut rng, 3, 3, 1));
        let d1 = twisted_dotted_delta(&a, &t).unwrap().value;
        let d2 = twisted_dotted_delta(&d1, &t).unwrap().value;
        assert!(below(&d2.graphs, 6).is_zero());
    }
    let p = DottedElement::p();
    let d1 = twisted_dotted_delta(&p, &t).unwrap().value;
    let d2 = twisted_dotted_delta(&d1, &t).unwrap().value;
    assert!(below(&d2.graphs, 6).is_zero());
}

#[test]
fn lie_degree_never_decreases() {
    let t = TruncationLevel::new(9, 9).unwrap();
    let mut rng = StdRng::seed_from_u64(35);
    for _ in 0..60 {
        let a = random_dotted(&mut rng, 4, 4, 2);
        let (g, _) = a.iter().next().unwrap();
        let l = lie_degree(g);
        let d = twisted_dotted_delta(&DottedElement::from_graphs(a.clone()), &t).unwrap().value;
        assert!(d.graphs.iter().all(|(h, _)| lie_degree(h) >= l));
        assert!(delta1(&a).unwrap().iter().all(|(h, _)| lie_degree(h) == l));
    }
}

#[test]
fn pair_cell_has_two_dimensional_homology() {
    for w in 2..=14 {
        let cell = PairCell::new(w).unwrap();
        assert_eq!(cell.homology(), (2, 0), "weight {w}");
        for v in cell.expected_cocycles() {
            assert!(cell.matrix.apply(&v).unwrap().iter().all(|c| c.is_zero()));
        }
    }
    assert!(PairCell::new(1).is_err());
}

fn canon_vec(g: &WavedGraph) -> WavedVector {
    let mut v = WavedVector::new();
    let (h, s) = g.canonical().unwrap();
    v.insert(h, s);
    v
}

fn homotopy_identity_holds(g: &WavedGraph) -> bool {
    let v = canon_vec(g);
    let a = waved_apply(&waved_apply(&v, waved_d), waved_h);
    let b = waved_apply(&waved_apply(&v, waved_h), waved_d);
    let mut sum = a;
    for (k, c) in b {
        *sum.entry(k).or_insert(0) += c;
    }
    for (k, c) in &v {
        *sum.entry(*k).or_insert(0) += c;
    }
    sum.values().all(|&c| c == 0)
}

#[test]
fn waved_homotopy_exhaustive() {
    for n in 1..=4 {
        for g in WavedGraph::all(n).unwrap() {
            assert!(homotopy_identity_holds(&g), "hd + dh ≠ -id on {g}");
        }
    }
}

#[test]
fn waved_homotopy_random_larger() {
    let mut rng = StdRng::seed_from_u64(36);
    for n in [5, 6] {
        for _ in 0..12 {
            let bits = rng.gen::<u64>() & ((1 << (n * (n - 1) / 2)) - 1);
            let g = WavedGraph::new(n, bits).unwrap();
            assert!(homotopy_identity_holds(&g), "{g}");
        }
    }
}

#[test]
fn waved_d_squares_to_zero() {
    for n in 1..=4 {
        for g in WavedGraph::all(n).unwrap() {
            let dd = waved_apply(&waved_d(&g), waved_d);
            assert!(dd.is_empty(), "d² on {g}");
        }
    }
}

#[test]
fn waved_h_without_maximum_is_zero() {
    // the cyclic triangle has no maximum
    let g: WavedGraph = "W v3 | 101".parse().unwrap();
    assert!(g.points(0, 1) && g.points(1, 2) && g.points(2, 0));
    assert_eq!(g.maximum(), None);
    assert!(waved_h(&g).is_empty());
    let g: WavedGraph = "W v3 | 111".parse().unwrap();
    assert_eq!(g.maximum(), Some(2));
    assert_eq!(waved_h(&g).len(), 1);
}

#[test]
fn waved_codec() {
    for g in WavedGraph::all(4).unwrap() {
        let s = g.to_string();
        assert_eq!(s.parse::<WavedGraph>().unwrap(), g);
    }
    assert!("W v3 | 10".parse::<WavedGraph>().is_err());
    assert!("W v3 | 1x1".parse::<WavedGraph>().is_err());
    assert!("X v3 | 101".parse::<WavedGraph>().is_err());
    assert!(WavedGraph::new(9, 0).is_err());
}

#[test]
fn g_of_single_waved_edge() {
    let w: WavedGraph = "W v2 | 1".parse().unwrap();
    let t = TruncationLevel::new(10, 3).unwrap();
    let terms = g_map_labeled(&w, &t);
    let coeffs: Vec<(usize, Rational)> = terms.iter().map(|(g, c)| (g.edges.len(), c.clone())).collect();
    assert_eq!(coeffs, vec![(0, q(1)), (1, q(1)), (2, qq(1, 2)), (3, qq(1, 6))]);
    assert!(terms.iter().all(|(g, _)| g.edges.iter().all(|&e| e == (0, 1))));
    // on classes the even multiplicities drop out
    let mut expected = vec1(&edge_graph(ODD));
    expected.add_term(theta(), qq(1, 6)).unwrap();
    assert_eq!(g_map(&w, &t).value, expected);
}

#[test]
fn g_is_a_chain_map() {
    let t = TruncationLevel::new(6, 6).unwrap();
    for n in 1..=3 {
        for w in WavedGraph::all(n).unwrap() {
            let gw = g_map(&w, &t);
            let bound = gw.exact_through - 1;
            let lhs = g_map_vec(&waved_d(&w), &t).value;
            let rhs = twisted_dotted_delta(&DottedElement::from_graphs(gw.value), &t).unwrap().value;
            assert!(rhs.p_coeff.is_zero());
            let diff = below(&lhs.sub(&rhs.graphs).unwrap(), bound);
            assert!(diff.is_zero(), "{w}: {:?}", diff.sorted_terms());
        }
    }
}

#[test]
fn dotted_part_kills_the_image_of_g() {
    let t = TruncationLevel::new(7, 7).unwrap();
    for w in WavedGraph::all(3).unwrap() {
        let gw = g_map(&w, &t).value;
        let s = delta1(&gw).unwrap().add(&bracket_p(&gw).unwrap()).unwrap();
        assert!(below(&s, 6).is_zero());
    }
}

fn all_perms(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in all_perms(n - 1) {
        for k in 0..n {
            let mut q = p.clone();
            q.insert(k, n - 1);
            out.push(q);
        }
    }
    out
}

fn inversions(p: &[usize]) -> i64 {
    let mut s = 1;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                s = -s;
            }
        }
    }
    s
}

/// Vertex `i` of `g` becomes vertex `p[i]`.
fn relabel_waved(g: &WavedGraph, p: &[usize]) -> WavedGraph {
    let n = g.num_vertices();
    let inv: Vec<usize> = (0..n).map(|k| p.iter().position(|&x| x == k).unwrap()).collect();
    WavedGraph::from_fn(n, |i, j| g.points(inv[i], inv[j])).unwrap()
}

#[test]
fn waved_canonical_form_matches_brute_force() {
    for n in 1..=5 {
        let perms = all_perms(n);
        for g in WavedGraph::all(n).unwrap() {
            let odd_aut = perms.iter().any(|p| inversions(p) == -1 && relabel_waved(&g, p) == g);
            let c = g.canonical();
            assert_eq!(c.is_none(), odd_aut, "{g}");
            let Some((h, s)) = c else { continue };
            for p in perms.iter().step_by(7) {
                let (h2, s2) = relabel_waved(&g, p).canonical().unwrap();
                assert_eq!(h2, h);
                assert_eq!(s2, s * inversions(p));
            }
            // h is a relabeling of g
            let seen = perms.iter().find(|p| relabel_waved(&g, p) == h).unwrap();
            assert_eq!(s, inversions(seen));
        }
    }
}
