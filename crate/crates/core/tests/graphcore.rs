use std::collections::{BTreeMap, BTreeSet};

use graphcx::graphcore::*;
use rand::prelude::*;

fn lg(p: Parity, n: usize, edges: &[(usize, usize)]) -> LabeledGraph {
    LabeledGraph::new(p, n, edges.to_vec())
}

fn cycle(p: Parity, n: usize) -> LabeledGraph {
    lg(p, n, &(0..n).map(|i| (i, (i + 1) % n)).collect::<Vec<_>>())
}

fn complete(p: Parity, n: usize) -> LabeledGraph {
    let mut e = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            e.push((i, j));
        }
    }
    lg(p, n, &e)
}

// Brute-force oracle: minimise over all n! relabelings, written independently of the library.

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..n {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

fn parity_of_perm(p: &[usize]) -> i32 {
    let mut inv = 0;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                inv += 1;
            }
        }
    }
    if inv % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Relabel, normalise and sort; returns the encoding and the orientation sign.
fn oracle_relabel(p: Parity, edges: &[(usize, usize)], perm: &[usize]) -> (Vec<(usize, usize)>, i32) {
    let mut sign = 1;
    let mapped: Vec<(usize, usize)> = edges
        .iter()
        .map(|&(a, b)| {
            let (x, y) = (perm[a], perm[b]);
            if x > y && p == Parity::Odd {
                sign = -sign;
            }
            (x.min(y), x.max(y))
        })
        .collect();
    // sign of the sorting permutation, computed by bubble sort swaps
    let mut sorted = mapped.clone();
    let mut swaps = 0;
    for i in 0..sorted.len() {
        for j in 0..sorted.len() - 1 - i {
            if sorted[j] > sorted[j + 1] {
                sorted.swap(j, j + 1);
                swaps += 1;
            }
        }
    }
    match p {
        Parity::Even => {
            if swaps % 2 == 1 {
                sign = -sign
            }
        }
        Parity::Odd => sign *= parity_of_perm(perm),
    }
    (sorted, sign)
}

/// Returns (class encoding, Some(sign) or None for zero).
fn oracle_canon(
    p: Parity,
    n: usize,
    edges: &[(usize, usize)],
    perms: &[Vec<usize>],
) -> (Vec<(usize, usize)>, Option<i32>) {
    let mut best: Option<(Vec<(usize, usize)>, i32)> = None;
    let mut zero = false;
    if p == Parity::Even {
        let mut s: Vec<_> = edges.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();
        s.sort();
        if s.windows(2).any(|w| w[0] == w[1]) {
            zero = true;
        }
    }
    // reversing a tadpole is an automorphism acting by -1
    if p == Parity::Odd && edges.iter().any(|&(a, b)| a == b) {
        zero = true;
    }
    for perm in perms {
        debug_assert_eq!(perm.len(), n);
        let (enc, s) = oracle_relabel(p, edges, perm);
        match &best {
            None => best = Some((enc, s)),
            Some((b, bs)) => {
                if enc < *b {
                    best = Some((enc, s));
                } else if enc == *b && s != *bs {
                    zero = true;
                }
            }
        }
    }
    let (enc, s) = best.unwrap();
    (enc, if zero { None } else { Some(s) })
}

fn is_connected(n: usize, edges: &[(usize, usize)]) -> bool {
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(x) = stack.pop() {
        for &(a, b) in edges {
            for (u, w) in [(a, b), (b, a)] {
                if u == x && !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
    }
    seen.iter().all(|&s| s)
}

fn multisets(
    pairs: &[(usize, usize)],
    k: usize,
    start: usize,
    cur: &mut Vec<(usize, usize)>,
    out: &mut Vec<Vec<(usize, usize)>>,
) {
    if cur.len() == k {
        out.push(cur.clone());
        return;
    }
    for i in start..pairs.len() {
        cur.push(pairs[i]);
        multisets(pairs, k, i, cur, out);
        cur.pop();
    }
}

fn brute_force_count(p: Parity, n: usize, e: usize, c: &GraphConstraints) -> usize {
    let perms = permutations(n);
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in i..n {
            if i != j || c.allow_tadpoles {
                pairs.push((i, j));
            }
        }
    }
    let mut all = Vec::new();
    multisets(&pairs, e, 0, &mut Vec::new(), &mut all);
    let mut classes: BTreeSet<Vec<(usize, usize)>> = BTreeSet::new();
    for edges in all {
        if c.connected && !is_connected(n, &edges) {
            continue;
        }
        if let Some(m) = c.max_edge_multiplicity {
            if edges.iter().any(|x| edges.iter().filter(|y| *y == x).count() > m) {
                continue;
            }
        }
        let mut val = vec![0; n];
        for &(a, b) in &edges {
            val[a] += 1;
            val[b] += 1;
        }
        if val.iter().any(|&x| x < c.min_valence) {
            continue;
        }
        let (enc, sign) = oracle_canon(p, n, &edges, &perms);
        if sign.is_some() {
            classes.insert(enc);
        }
    }
    classes.len()
}

#[test]
fn triangle_even_is_zero() {
    assert!(canonicalize(&cycle(Parity::Even, 3)).unwrap().is_none());
}

#[test]
fn odd_tadpole_is_zero() {
    assert!(canonicalize(&lg(Parity::Odd, 1, &[(0, 0)])).unwrap().is_none());
}

#[test]
fn even_double_edge_is_zero() {
    assert!(canonicalize(&lg(Parity::Even, 2, &[(0, 1), (0, 1)])).unwrap().is_none());
}

#[test]
fn loop_graphs_follow_mod_four_rule() {
    for k in 3..=10 {
        let even = canonicalize(&cycle(Parity::Even, k)).unwrap().is_some();
        let odd = canonicalize(&cycle(Parity::Odd, k)).unwrap().is_some();
        assert_eq!(even, k % 4 == 1, "even L{k}");
        assert_eq!(odd, k % 4 == 3, "odd L{k}");
    }
}

#[test]
fn l5_even_nonzero_with_unit_sign() {
    let (_, s) = canonicalize(&cycle(Parity::Even, 5)).unwrap().unwrap();
    assert!(s == 1 || s == -1);
}

#[test]
fn canonical_representative_is_fixed_point() {
    let mut rng = StdRng::seed_from_u64(7);
    for _ in 0..300 {
        let p = if rng.gen_bool(0.5) { Parity::Even } else { Parity::Odd };
        let n = rng.gen_range(1..=7);
        let e = rng.gen_range(0..=10);
        let edges: Vec<_> = (0..e).map(|_| (rng.gen_range(0..n), rng.gen_range(0..n))).collect();
        if let Some((c, _)) = canonicalize(&lg(p, n, &edges)).unwrap() {
            let (c2, s2) = canonicalize(&c.to_labeled()).unwrap().unwrap();
            assert_eq!(c, c2);
            assert_eq!(s2, 1);
        }
    }
}

#[test]
fn out_of_range_vertex_is_an_error() {
    assert!(canonicalize(&lg(Parity::Even, 2, &[(0, 2)])).is_err());
}

#[test]
fn canonicalize_agrees_with_brute_force_oracle() {
    let mut rng = StdRng::seed_from_u64(11);
    let perm_tables: Vec<Vec<Vec<usize>>> = (0..=6).map(permutations).collect();
    for _ in 0..3000 {
        let p = if rng.gen_bool(0.5) { Parity::Even } else { Parity::Odd };
        let n = rng.gen_range(1..=6);
        let e = rng.gen_range(0..=9);
        let edges: Vec<_> = (0..e).map(|_| (rng.gen_range(0..n), rng.gen_range(0..n))).collect();
        let g = lg(p, n, &edges);
        let lib = canonicalize(&g).unwrap();
        let (_, oracle) = oracle_canon(p, n, &edges, &perm_tables[n]);
        assert_eq!(lib.is_none(), oracle.is_none(), "zero detection on {}", encode_labeled(&g));

        // a random relabeling, edge shuffle and reorientation
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(&mut rng);
        let mut moved: Vec<(usize, usize)> = edges.iter().map(|&(a, b)| (perm[a], perm[b])).collect();
        moved.shuffle(&mut rng);
        for x in moved.iter_mut() {
            if rng.gen_bool(0.5) {
                *x = (x.1, x.0);
            }
        }
        let h = lg(p, n, &moved);
        let lib2 = canonicalize(&h).unwrap();
        let (_, oracle2) = oracle_canon(p, n, &moved, &perm_tables[n]);
        match (lib, lib2) {
            (Some((c1, s1)), Some((c2, s2))) => {
                assert_eq!(c1, c2);
                assert_eq!(s1 * s2, oracle.unwrap() * oracle2.unwrap(), "relative sign on {}", encode_labeled(&g));
            }
            (None, None) => {}
            _ => panic!("relabeling changed zero status"),
        }
    }
}

#[test]
fn distinct_classes_get_distinct_representatives() {
    let perms = permutations(5);
    let mut rng = StdRng::seed_from_u64(3);
    let mut seen: BTreeMap<String, Vec<(usize, usize)>> = BTreeMap::new();
    for _ in 0..2000 {
        let n = 5;
        let e = rng.gen_range(3..=7);
        let edges: Vec<_> = (0..e)
            .map(|_| {
                let a = rng.gen_range(0..n);
                let mut b = rng.gen_range(0..n);
                while b == a {
                    b = rng.gen_range(0..n);
                }
                (a, b)
            })
            .collect();
        // the oracle class key, independent of parity
        let (enc, _) = oracle_canon(Parity::Odd, n, &edges, &perms);
        if let Some((c, _)) = canonicalize(&lg(Parity::Odd, n, &edges)).unwrap() {
            if let Some(prev) = seen.insert(c.key(), enc.clone()) {
                assert_eq!(prev, enc);
            }
        }
    }
}

#[test]
fn automorphism_orders() {
    let edge = canonicalize(&lg(Parity::Even, 2, &[(0, 1)])).unwrap().unwrap().0;
    assert_eq!(automorphism_group(&edge).order, 2);
    let l5 = canonicalize(&cycle(Parity::Even, 5)).unwrap().unwrap().0;
    assert_eq!(automorphism_group(&l5).order, 10);
    let k4 = canonicalize(&complete(Parity::Odd, 4)).unwrap().unwrap().0;
    let grp = automorphism_group(&k4);
    assert_eq!(grp.order, 24);
    assert!(grp.generators.len() <= 4);
}

#[test]
fn automorphism_order_matches_brute_force() {
    let mut rng = StdRng::seed_from_u64(5);
    for _ in 0..200 {
        let n = rng.gen_range(1..=6);
        let e = rng.gen_range(0..=9);
        let edges: Vec<_> = (0..e).map(|_| (rng.gen_range(0..n), rng.gen_range(0..n))).collect();
        // use Even with tadpoles allowed as a carrier; zero classes are skipped
        let Some((c, _)) = canonicalize(&lg(Parity::Odd, n, &edges)).unwrap() else { continue };
        let base = c.to_labeled();
        let mut key: Vec<(usize, usize)> = base.edges.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();
        key.sort();
        let mut count = 0;
        for perm in permutations(n) {
            let mut k2: Vec<(usize, usize)> =
                key.iter().map(|&(a, b)| (perm[a].min(perm[b]), perm[a].max(perm[b]))).collect();
            k2.sort();
            if k2 == key {
                count += 1;
            }
        }
        let grp = automorphism_group(&c);
        assert_eq!(grp.order, count);
        assert!(grp.generators.iter().all(|g| g.sign == 1), "nonzero class has an orientation-reversing automorphism");
    }
}

#[test]
fn enumerate_examples() {
    let c = GraphConstraints::connected();
    assert_eq!(enumerate_graphs(2, 1, Parity::Even, &c).unwrap().len(), 1);
    assert_eq!(enumerate_graphs(3, 3, Parity::Even, &c).unwrap().len(), 0);
    let theta = enumerate_graphs(2, 3, Parity::Odd, &c).unwrap();
    assert_eq!(theta.len(), 1);
    assert_eq!(theta.get(0).key(), "O v2 e3 | 1>2 1>2 1>2");
}

#[test]
fn enumerate_is_sorted_and_indexed() {
    let b = enumerate_graphs(5, 7, Parity::Odd, &GraphConstraints::connected()).unwrap();
    let keys: Vec<String> = b.iter().map(|g| g.key()).collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
    for (i, g) in b.iter().enumerate() {
        assert_eq!(b.index_of(g), Some(i));
    }
}

#[test]
fn enumerate_counts_match_brute_force() {
    let variants = [
        (Parity::Even, GraphConstraints::connected()),
        (Parity::Even, GraphConstraints::any()),
        (Parity::Even, GraphConstraints::connected().with_tadpoles(true)),
        (Parity::Even, GraphConstraints::connected().with_min_valence(3)),
        (Parity::Odd, GraphConstraints::connected()),
        (Parity::Odd, GraphConstraints::any()),
        (Parity::Odd, GraphConstraints::connected().with_max_multiplicity(Some(2))),
        (Parity::Odd, GraphConstraints::connected().with_min_valence(3)),
    ];
    for (p, c) in variants {
        for v in 1..=5 {
            for e in 0..=7 {
                if p == Parity::Odd && !c.connected && v == 5 && e == 7 {
                    continue;
                }
                let lib = enumerate_graphs(v, e, p, &c).unwrap().len();
                let oracle = brute_force_count(p, v, e, &c);
                assert_eq!(lib, oracle, "{p:?} {c:?} v={v} e={e}");
            }
        }
    }
}

#[test]
fn capacity_error_names_the_cell() {
    let err = enumerate_graphs_with_limit(6, 9, Parity::Odd, &GraphConstraints::connected(), 10).unwrap_err();
    match err {
        graphcx::Error::Capacity { v, e, .. } => assert!(v <= 6 && e <= 9),
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn encode_examples() {
    let edge = canonicalize(&lg(Parity::Even, 2, &[(1, 0)])).unwrap().unwrap().0;
    assert_eq!(encode(&edge), "E v2 e1 | 1-2");
    let l5 = canonicalize(&cycle(Parity::Even, 5)).unwrap().unwrap().0;
    assert_eq!(decode(&encode(&l5)).unwrap(), l5);
    let t = decode("E v1 e1 | 1-1").unwrap();
    assert_eq!((t.num_vertices(), t.num_edges()), (1, 1));
    assert!(t.has_tadpole());
}

#[test]
fn decode_reports_positions() {
    match decode("E v2 e1 | 1-3") {
        Err(graphcx::Error::Parse { pos, .. }) => assert_eq!(pos, 12),
        other => panic!("unexpected {other:?}"),
    }
    assert!(matches!(decode("X v2 e1 | 1-2"), Err(graphcx::Error::Parse { pos: 0, .. })));
    assert!(matches!(decode("E v2 e2 | 1-2"), Err(graphcx::Error::Parse { .. })));
    assert!(matches!(decode("O v2 e1 | 1-2"), Err(graphcx::Error::Parse { .. })));
}

#[test]
fn encode_round_trip_over_a_cell() {
    for p in [Parity::Even, Parity::Odd] {
        let b = enumerate_graphs(5, 6, p, &GraphConstraints::connected()).unwrap();
        for g in b.iter() {
            assert_eq!(&decode(&g.key()).unwrap(), g);
        }
    }
}

#[test]
fn dotted_edges_round_trip() {
    let g = LabeledGraph::with_dotted(Parity::Odd, 3, vec![(0, 1), (1, 2), (1, 2)], vec![(0, 2)]);
    let (c, _) = canonicalize(&g).unwrap().unwrap();
    assert_eq!(c.num_dotted(), 1);
    assert_eq!(decode(&c.key()).unwrap(), c);
    let twice = LabeledGraph::with_dotted(Parity::Odd, 2, vec![], vec![(0, 1), (1, 0)]);
    assert!(canonicalize(&twice).unwrap().is_none());
}
