//! Insertion of one graph into a vertex of another, at the level of labeled edge lists.

use std::collections::HashMap;

use crate::graphcore::{canonicalize_raw, CanonicalGraph, Parity};

/// A labeled term: vertex count, solid edges, dotted edges, sign.
pub(crate) type RawTerm = (usize, Vec<(u8, u8)>, Vec<(u8, u8)>, i64);

/// Borrowed view of a labeled graph.
#[derive(Clone, Copy)]
pub(crate) struct Part<'a> {
    pub n: usize,
    pub solid: &'a [(u8, u8)],
    pub dotted: &'a [(u8, u8)],
}

impl<'a> Part<'a> {
    pub fn of(g: &'a CanonicalGraph) -> Self {
        Part { n: g.num_vertices(), solid: g.edges(), dotted: g.dotted() }
    }
}

/// All labeled terms of `a ∘_x b`.
///
/// Vertices are laid out as host vertices before `x`, then the guest, then the
/// remaining host vertices. Host edges keep their positions and come before the
/// guest edges (solid and dotted separately); every half-edge at `x` is
/// reattached to each guest vertex in turn. The orientation of an odd graph is
/// its vertex order followed by its dotted edge order, which gives the sign
/// `(-1)^{(n_b - 1)(n_a - 1 - x) + d_b (n_a - 1)}`.
pub(crate) fn insert_raw(parity: Parity, a: Part<'_>, b: Part<'_>, x: usize, out: &mut Vec<RawTerm>) {
    let (na, nb) = (a.n, b.n);
    let n = na + nb - 1;
    let map_host = |i: u8| -> u8 {
        let i = i as usize;
        if i < x {
            i as u8
        } else {
            (i - 1 + nb) as u8
        }
    };
    // slot = (dotted?, index, head?)
    let mut slots: Vec<(bool, usize, bool)> = Vec::new();
    let place = |list: &[(u8, u8)], dotted: bool, slots: &mut Vec<(bool, usize, bool)>| -> Vec<(u8, u8)> {
        let mut v = Vec::with_capacity(list.len());
        for (k, &(t, h)) in list.iter().enumerate() {
            let tt = if t as usize == x {
                slots.push((dotted, k, false));
                0
            } else {
                map_host(t)
            };
            let hh = if h as usize == x {
                slots.push((dotted, k, true));
                0
            } else {
                map_host(h)
            };
            v.push((tt, hh));
        }
        v
    };
    let mut base_s = place(a.solid, false, &mut slots);
    let mut base_d = place(a.dotted, true, &mut slots);
    let shift = |&(t, h): &(u8, u8)| (t + x as u8, h + x as u8);
    base_s.extend(b.solid.iter().map(shift));
    base_d.extend(b.dotted.iter().map(shift));
    let sign: i64 = match parity {
        Parity::Even => 1,
        Parity::Odd => {
            if ((nb - 1) * (na - 1 - x) + b.dotted.len() * (na - 1)) % 2 == 1 {
                -1
            } else {
                1
            }
        }
    };
    let k = slots.len();
    let mut choice = vec![0usize; k];
    loop {
        let mut s = base_s.clone();
        let mut d = base_d.clone();
        for (c, &(dotted, ei, is_head)) in slots.iter().enumerate() {
            let v = (x + choice[c]) as u8;
            let e = if dotted { &mut d[ei] } else { &mut s[ei] };
            if is_head {
                e.1 = v;
            } else {
                e.0 = v;
            }
        }
        out.push((n, s, d, sign));
        // next assignment in base nb
        let mut i = 0;
        while i < k {
            choice[i] += 1;
            if choice[i] < nb {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
        if i == k {
            break;
        }
    }
}

/// Canonicalize labeled terms and accumulate integer coefficients.
pub(crate) fn accumulate(parity: Parity, terms: &[RawTerm], scale: i64, acc: &mut HashMap<CanonicalGraph, i64>) {
    for (n, s, d, sign) in terms {
        if let Some((g, sg)) = canonicalize_raw(parity, *n, s, d) {
            *acc.entry(g).or_insert(0) += scale * sign * sg as i64;
        }
    }
}

/// `a • b` on basis graphs with integer coefficients.
pub(crate) fn prelie_graphs(
    a: &CanonicalGraph,
    b: &CanonicalGraph,
    acc: &mut HashMap<CanonicalGraph, i64>,
    scale: i64,
) {
    let parity = a.parity();
    let mut terms = Vec::new();
    for x in 0..a.num_vertices() {
        insert_raw(parity, Part::of(a), Part::of(b), x, &mut terms);
    }
    accumulate(parity, &terms, scale, acc);
}

/// `[a, b]` on basis graphs with integer coefficients.
pub(crate) fn bracket_graphs(a: &CanonicalGraph, b: &CanonicalGraph) -> HashMap<CanonicalGraph, i64> {
    let mut acc = HashMap::new();
    prelie_graphs(a, b, &mut acc, 1);
    let s = if (a.degree() * b.degree()).rem_euclid(2) == 1 { 1 } else { -1 };
    prelie_graphs(b, a, &mut acc, s);
    acc.retain(|_, c| *c != 0);
    acc
}
