//! Canonical labeling by equitable partition refinement and backtracking.
//!
//! Every leaf of the search tree is a vertex labeling; the leaf whose relabeled
//! edge lists are lexicographically smallest is the canonical one. Two leaves with
//! the same encoding differ by an automorphism, so comparing their orientation
//! signs detects odd-symmetric (zero) graphs.

use super::Parity;

/// Solid multiplicity weight in the adjacency matrix; dotted edges weigh 1.
const SOLID_WEIGHT: u16 = 64;

pub(crate) struct Canon {
    pub solid: Vec<(u8, u8)>,
    pub dotted: Vec<(u8, u8)>,
    /// +1 or -1, or 0 when the class vanishes.
    pub sign: i8,
}

type Encoding = (Vec<(u8, u8)>, Vec<(u8, u8)>);

struct Search<'a> {
    parity: Parity,
    n: usize,
    solid: &'a [(u8, u8)],
    dotted: &'a [(u8, u8)],
    w: Vec<u16>,
    twin: Vec<u8>,
    prune_twins: bool,
    best: Option<Encoding>,
    best_sign: i8,
    zero: bool,
    /// Labelings of every leaf attaining the current best encoding.
    collect: Option<Vec<(Vec<u8>, i8)>>,
}

pub(crate) fn canonical_form(parity: Parity, n: usize, solid: &[(u8, u8)], dotted: &[(u8, u8)]) -> Canon {
    if n == 0 {
        return Canon { solid: Vec::new(), dotted: Vec::new(), sign: 1 };
    }
    let mut s = Search::new(parity, n, solid, dotted, true);
    s.zero = structurally_zero(parity, solid, dotted);
    if !s.zero {
        s.check_twins();
    }
    s.run();
    let (solid, dotted) = s.best.take().unwrap();
    Canon { solid, dotted, sign: if s.zero { 0 } else { s.best_sign } }
}

/// All labelings reaching the canonical encoding, with their orientation signs.
///
/// Consecutive entries differ by an automorphism; the list has exactly |Aut| entries.
pub(crate) fn best_leaves(parity: Parity, n: usize, solid: &[(u8, u8)], dotted: &[(u8, u8)]) -> Vec<(Vec<u8>, i8)> {
    let mut s = Search::new(parity, n, solid, dotted, false);
    s.collect = Some(Vec::new());
    s.run();
    s.collect.unwrap()
}

/// Orientation sign of `g` relabeled by `lab`, and the relabeled sorted edge lists.
pub(crate) fn relabel(
    parity: Parity,
    solid: &[(u8, u8)],
    dotted: &[(u8, u8)],
    lab: &[u8],
) -> (Vec<(u8, u8)>, Vec<(u8, u8)>, i8) {
    let mut sign = 1i8;
    let mut s = Vec::with_capacity(solid.len());
    for &(a, b) in solid {
        let (x, y) = (lab[a as usize], lab[b as usize]);
        if x > y {
            s.push((y, x));
            if parity == Parity::Odd {
                sign = -sign;
            }
        } else {
            s.push((x, y));
        }
    }
    let mut d = Vec::with_capacity(dotted.len());
    for &(a, b) in dotted {
        let (x, y) = (lab[a as usize], lab[b as usize]);
        d.push((x.min(y), x.max(y)));
    }
    match parity {
        Parity::Even => sign *= sort_with_sign(&mut s),
        Parity::Odd => {
            s.sort_unstable();
            sign *= perm_sign(lab);
        }
    }
    sign *= sort_with_sign(&mut d);
    (s, d, sign)
}

fn structurally_zero(parity: Parity, solid: &[(u8, u8)], dotted: &[(u8, u8)]) -> bool {
    if dotted.iter().any(|&(a, b)| a == b) || has_repeat(dotted) {
        return true;
    }
    match parity {
        Parity::Even => has_repeat(solid),
        Parity::Odd => solid.iter().any(|&(a, b)| a == b),
    }
}

fn has_repeat(edges: &[(u8, u8)]) -> bool {
    let mut v: Vec<(u8, u8)> = edges.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();
    v.sort_unstable();
    v.windows(2).any(|p| p[0] == p[1])
}

/// Sorts in place and returns the sign of the sorting permutation.
pub(crate) fn sort_with_sign<T: Ord + Copy>(v: &mut [T]) -> i8 {
    let mut inv = 0usize;
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            if v[i] > v[j] {
                inv += 1;
            }
        }
    }
    v.sort_unstable();
    if inv.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

pub(crate) fn perm_sign(p: &[u8]) -> i8 {
    let mut seen = [false; 256];
    let mut sign = 1i8;
    for start in 0..p.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            x = p[x] as usize;
            len += 1;
        }
        if len % 2 == 0 {
            sign = -sign;
        }
    }
    sign
}

impl<'a> Search<'a> {
    fn new(parity: Parity, n: usize, solid: &'a [(u8, u8)], dotted: &'a [(u8, u8)], prune_twins: bool) -> Self {
        let mut w = vec![0u16; n * n];
        for &(a, b) in solid {
            let (a, b) = (a as usize, b as usize);
            w[a * n + b] += SOLID_WEIGHT;
            if a != b {
                w[b * n + a] += SOLID_WEIGHT;
            }
        }
        for &(a, b) in dotted {
            let (a, b) = (a as usize, b as usize);
            w[a * n + b] += 1;
            if a != b {
                w[b * n + a] += 1;
            }
        }
        let mut twin: Vec<u8> = (0..n as u8).collect();
        if prune_twins {
            for u in 0..n {
                if twin[u] as usize != u {
                    continue;
                }
                for v in u + 1..n {
                    if twin[v] as usize == v && Self::are_twins(&w, n, u, v) {
                        twin[v] = u as u8;
                    }
                }
            }
        }
        Search { parity, n, solid, dotted, w, twin, prune_twins, best: None, best_sign: 0, zero: false, collect: None }
    }

    fn are_twins(w: &[u16], n: usize, u: usize, v: usize) -> bool {
        if w[u * n + u] != w[v * n + v] {
            return false;
        }
        (0..n).all(|x| x == u || x == v || w[u * n + x] == w[v * n + x])
    }

    /// A twin transposition is an automorphism; if it reverses orientation the graph is zero.
    fn check_twins(&mut self) {
        let id: Vec<u8> = (0..self.n as u8).collect();
        let base = relabel(self.parity, self.solid, self.dotted, &id).2;
        for v in 0..self.n {
            let u = self.twin[v] as usize;
            if u == v {
                continue;
            }
            let mut lab = id.clone();
            lab.swap(u, v);
            if relabel(self.parity, self.solid, self.dotted, &lab).2 != base {
                self.zero = true;
                return;
            }
        }
    }

    fn run(&mut self) {
        let cells = vec![(0..self.n as u8).collect::<Vec<u8>>()];
        self.search(cells);
    }

    fn search(&mut self, mut cells: Vec<Vec<u8>>) {
        self.refine(&mut cells);
        if cells.len() == self.n {
            let mut lab = vec![0u8; self.n];
            for (i, c) in cells.iter().enumerate() {
                lab[c[0] as usize] = i as u8;
            }
            self.leaf(lab);
            return;
        }
        let mut target = usize::MAX;
        for (i, c) in cells.iter().enumerate() {
            if c.len() > 1 && (target == usize::MAX || c.len() < cells[target].len()) {
                target = i;
            }
        }
        let mut tried: Vec<u8> = Vec::new();
        for k in 0..cells[target].len() {
            let u = cells[target][k];
            if self.prune_twins {
                let t = self.twin[u as usize];
                if tried.contains(&t) {
                    continue;
                }
                tried.push(t);
            }
            let mut next = Vec::with_capacity(cells.len() + 1);
            next.extend_from_slice(&cells[..target]);
            next.push(vec![u]);
            next.push(cells[target].iter().copied().filter(|&x| x != u).collect());
            next.extend_from_slice(&cells[target + 1..]);
            self.search(next);
        }
    }

    fn leaf(&mut self, lab: Vec<u8>) {
        let (s, d, sign) = relabel(self.parity, self.solid, self.dotted, &lab);
        let ord = match &self.best {
            None => std::cmp::Ordering::Less,
            Some((bs, bd)) => (&s, &d).cmp(&(bs, bd)),
        };
        match ord {
            std::cmp::Ordering::Less => {
                self.best = Some((s, d));
                self.best_sign = sign;
                if let Some(c) = &mut self.collect {
                    c.clear();
                    c.push((lab, sign));
                }
            }
            std::cmp::Ordering::Equal => {
                if sign != self.best_sign {
                    self.zero = true;
                }
                if let Some(c) = &mut self.collect {
                    c.push((lab, sign));
                }
            }
            std::cmp::Ordering::Greater => {}
        }
    }

    /// Refine to the coarsest equitable partition finer than `cells`.
    fn refine(&self, cells: &mut Vec<Vec<u8>>) {
        let n = self.n;
        let mut cell_of = vec![0u16; n];
        loop {
            for (i, c) in cells.iter().enumerate() {
                for &v in c {
                    cell_of[v as usize] = i as u16;
                }
            }
            let mut changed = false;
            let mut next: Vec<Vec<u8>> = Vec::with_capacity(n);
            for c in cells.iter() {
                if c.len() == 1 {
                    next.push(c.clone());
                    continue;
                }
                let mut sigs: Vec<(Vec<(u16, u16)>, u8)> = c
                    .iter()
                    .map(|&v| {
                        let v = v as usize;
                        let mut sig = Vec::new();
                        sig.push((u16::MAX, self.w[v * n + v]));
                        for u in 0..n {
                            let x = self.w[v * n + u];
                            if u != v && x != 0 {
                                sig.push((cell_of[u], x));
                            }
                        }
                        sig.sort_unstable();
                        (sig, v as u8)
                    })
                    .collect();
                sigs.sort_by(|a, b| a.0.cmp(&b.0));
                let mut start = 0;
                for i in 1..=sigs.len() {
                    if i == sigs.len() || sigs[i].0 != sigs[start].0 {
                        next.push(sigs[start..i].iter().map(|x| x.1).collect());
                        start = i;
                    }
                }
                if !next.is_empty() && sigs.len() != next.last().unwrap().len() {
                    changed = true;
                }
            }
            *cells = next;
            if !changed {
                return;
            }
        }
    }
}
