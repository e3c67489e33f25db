use std::collections::HashSet;

use super::canon;
use super::graph::CanonicalGraph;

/// A vertex permutation preserving the underlying multigraph, with its action
/// (+1 or -1) on the orientation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Automorphism {
    pub perm: Vec<usize>,
    pub sign: i32,
}

#[derive(Debug, Clone)]
pub struct AutomorphismGroup {
    pub generators: Vec<Automorphism>,
    pub order: u64,
}

fn compose(a: &[usize], b: &[usize]) -> Vec<usize> {
    // a after b
    b.iter().map(|&x| a[x]).collect()
}

fn inverse(a: &[u8]) -> Vec<usize> {
    let mut inv = vec![0usize; a.len()];
    for (i, &x) in a.iter().enumerate() {
        inv[x as usize] = i;
    }
    inv
}

/// Automorphism group of the underlying multigraph (dotted edges included).
pub fn automorphism_group(g: &CanonicalGraph) -> AutomorphismGroup {
    let n = g.num_vertices();
    let leaves = canon::best_leaves(g.parity(), n, g.edges(), g.dotted());
    let (base, base_sign) = &leaves[0];
    let base_inv = inverse(base);
    let elements: Vec<Automorphism> = leaves
        .iter()
        .map(|(lab, sign)| {
            let perm: Vec<usize> = (0..n).map(|v| base_inv[lab[v] as usize]).collect();
            Automorphism { perm, sign: (*sign * *base_sign) as i32 }
        })
        .collect();
    let order = elements.len() as u64;

    let mut generators: Vec<Automorphism> = Vec::new();
    let identity: Vec<usize> = (0..n).collect();
    let mut closure: HashSet<Vec<usize>> = HashSet::from([identity]);
    for a in &elements {
        if closure.contains(&a.perm) {
            continue;
        }
        generators.push(a.clone());
        let mut frontier: Vec<Vec<usize>> = closure.iter().cloned().collect();
        while let Some(x) = frontier.pop() {
            for gen in &generators {
                let y = compose(&gen.perm, &x);
                if closure.insert(y.clone()) {
                    frontier.push(y);
                }
            }
        }
    }
    AutomorphismGroup { generators, order }
}
