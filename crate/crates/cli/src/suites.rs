use std::collections::HashMap;

use anyhow::Result;
use clap::ValueEnum;
use graphcx::calculus::labeled::{h_mask, htilde_mask, nabla_mask, num_pairs, Mask};
use graphcx::chromatic::l7_pipeline;
use graphcx::homology::{labeled_nabla_dims, nabla_cohomology_check};
use graphcx::linalg::{q, GraphVector};
use graphcx::oddtwist::*;
use graphcx::rigidity::*;
use serde::Serialize;

use crate::config::RunConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    EvenHomotopy,
    OddMc,
    Waved,
    Dotted,
    Words,
    Moyal,
    L7,
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

fn check(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Check {
    Check { name: name.into(), passed, detail: detail.into() }
}

pub fn run(suite: Suite, cfg: &RunConfig) -> Result<Vec<Check>> {
    match suite {
        Suite::EvenHomotopy => even_homotopy(cfg),
        Suite::OddMc => odd_mc(cfg),
        Suite::Waved => waved(cfg),
        Suite::Dotted => dotted(cfg),
        Suite::Words => words(cfg),
        Suite::Moyal => moyal(cfg),
        Suite::L7 => l7(),
    }
}

fn compose(
    mask: Mask,
    first: impl Fn(Mask) -> Vec<(Mask, i64)>,
    second: impl Fn(Mask) -> Vec<(Mask, i64)>,
) -> HashMap<Mask, i64> {
    let mut acc: HashMap<Mask, i64> = HashMap::new();
    for (m1, s1) in first(mask) {
        for (m2, s2) in second(m1) {
            *acc.entry(m2).or_default() += s1 * s2;
        }
    }
    acc
}

/// `∇h + h∇ = c · id` on every mask of `V_n`.
fn labeled_identity(n: usize, h: &dyn Fn(Mask) -> Vec<(Mask, i64)>, c: i64) -> bool {
    let nab = |m: Mask| nabla_mask(n, m);
    (0..1u64 << num_pairs(n)).all(|mask| {
        let mut acc = compose(mask, h, nab);
        for (k, s) in compose(mask, nab, h) {
            *acc.entry(k).or_default() += s;
        }
        acc.retain(|_, s| *s != 0);
        acc == HashMap::from([(mask, c)])
    })
}

fn even_homotopy(cfg: &RunConfig) -> Result<Vec<Check>> {
    let top = cfg.max_vertices.min(6);
    let mut out = Vec::new();
    let h = |m: Mask| h_mask(m).into_iter().collect::<Vec<_>>();
    for n in 2..=top.min(5) {
        out.push(check(format!("nabla h + h nabla = id on V_{n}"), labeled_identity(n, &h, 1), ""));
        let ht = move |m: Mask| htilde_mask(n, m);
        let c = (n * (n - 1) / 2) as i64;
        out.push(check(format!("nabla h~ + h~ nabla = {c} id on V_{n}"), labeled_identity(n, &ht, c), ""));
    }
    for n in 2..=top {
        let dims = labeled_nabla_dims(n)?;
        out.push(check(format!("H(V_{n}, nabla) = 0"), dims.iter().all(|&d| d == 0), format!("{dims:?}")));
    }
    let r = nabla_cohomology_check(top, cfg.field())?;
    out.push(check(
        "nabla cohomology of graph classes",
        r.holds(),
        format!("all: {:?}; connected: {:?}", r.all_graphs, r.connected),
    ));
    Ok(out)
}

fn odd_mc(cfg: &RunConfig) -> Result<Vec<Check>> {
    let t = cfg.truncation();
    let r = check_mc(&t)?;
    let mut out = vec![check(
        "delta m + 1/2 [m, m] = 0",
        r.holds(),
        format!("verified through {} edges, {} residual terms", r.verified_through, r.residual.len()),
    )];
    let d = twisted_delta(&cocycle_c(&t), &t)?;
    let low = d.value.filter(|g| total_edges(g) <= d.exact_through);
    out.push(check("(delta + [m, .]) c = 0", low.is_zero(), format!("exact through {} edges", d.exact_through)));
    Ok(out)
}

fn waved_identity(g: &WavedGraph) -> bool {
    let mut v = WavedVector::new();
    let (h, s) = g.canonical().expect("tournaments are never zero");
    v.insert(h, s);
    let mut sum = waved_apply(&waved_apply(&v, waved_d), waved_h);
    for (k, c) in waved_apply(&waved_apply(&v, waved_h), waved_d) {
        *sum.entry(k).or_insert(0) += c;
    }
    for (k, c) in &v {
        *sum.entry(*k).or_insert(0) += c;
    }
    sum.values().all(|&c| c == 0)
}

fn waved(cfg: &RunConfig) -> Result<Vec<Check>> {
    let top = cfg.max_vertices.min(MAX_WAVED_VERTICES).min(5);
    let mut out = Vec::new();
    for n in 1..=top {
        let all = WavedGraph::all(n)?;
        let d2 = all.iter().all(|g| waved_apply(&waved_d(g), waved_d).is_empty());
        out.push(check(format!("d^2 = 0, n = {n}"), d2, format!("{} tournaments", all.len())));
        let hd = all.iter().all(waved_identity);
        out.push(check(format!("hd + dh = -id, n = {n}"), hd, ""));
    }
    let t = cfg.truncation();
    let mut ok = true;
    for n in 1..=top.min(3) {
        for w in WavedGraph::all(n)? {
            let gw = g_map(&w, &t);
            let bound = gw.exact_through.saturating_sub(1);
            let lhs = g_map_vec(&waved_d(&w), &t).value;
            let rhs = twisted_dotted_delta(&DottedElement::from_graphs(gw.value), &t)?.value;
            let diff = lhs.sub(&rhs.graphs)?.filter(|g| total_edges(g) <= bound);
            ok &= diff.is_zero() && rhs.p_coeff == q(0);
        }
    }
    out.push(check("g is a chain map below truncation", ok, ""));
    Ok(out)
}

fn dotted(cfg: &RunConfig) -> Result<Vec<Check>> {
    let t = cfg.truncation();
    let r = check_mc_tilde(&t)?;
    let mut out = vec![check(
        "delta~ m~ + 1/2 [m~, m~] = 0",
        r.holds(),
        format!("verified through {} edges", r.verified_through),
    )];
    let ct = cocycle_c_tilde(&t);
    let d = twisted_dotted_delta(&ct, &t)?;
    let low = d.value.graphs.filter(|g| total_edges(g) < d.exact_through);
    out.push(check("c~ is closed", low.is_zero(), format!("exact through {} edges", d.exact_through)));
    out.push(check("c~ projects to 2c", project_undotted(&ct) == cocycle_c(&t).scale(&q(2)), ""));
    let mut pairs = true;
    for w in 2..=cfg.truncation.max_edges.max(2) {
        pairs &= PairCell::new(w)?.homology() == (2, 0);
    }
    out.push(check("pair cells have two-dimensional homology", pairs, ""));
    Ok(out)
}

fn words(cfg: &RunConfig) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for n in 1..=5 {
        let d2 = all_words(n).into_iter().all(|w| word_d(&word_d(&WordVector::from_word(w))).is_zero());
        out.push(check(format!("d^2 = 0, N = {n}"), d2, ""));
        if n <= 4 {
            let h = all_words(n).iter().all(|w| homotopy_defect(w).is_zero());
            out.push(check(format!("hd + dh = id, N = {n}"), h, ""));
        }
        let dim = word_cohomology_dim(n, cfg.field())?;
        out.push(check(format!("H = 0, N = {n}"), dim == 0, format!("dim {dim}")));
    }
    Ok(out)
}

fn moyal(cfg: &RunConfig) -> Result<Vec<Check>> {
    let budget = cfg.truncation.max_edges.min(6);
    let mut out = Vec::new();
    for n in 3..=4 {
        let r = associativity_residuals(n, budget);
        out.push(check(
            format!("associativity in arity {n}, edge budget {budget}"),
            r.is_empty(),
            format!("{} words with residuals", r.len()),
        ));
    }
    let c = moyal_commutator(budget.max(1));
    let lead = c.leading();
    let ok = lead.len() == 1 && lead[0].0.num_edges() == 1 && *lead[0].1 == q(2);
    out.push(check("commutator starts with twice the edge", ok, ""));
    Ok(out)
}

fn l7() -> Result<Vec<Check>> {
    let r = l7_pipeline()?;
    let minus_w1: GraphVector = r.w1.scale(&q(-1));
    Ok(vec![
        check("delta R = -W1", graphcx::calculus::delta(&r.r_scaled)? == minus_w1, ""),
        check("W2 is closed", r.w2_closed, ""),
        check(
            "f of the explicit W2",
            r.f_explicit_ribbon.total == q(-10),
            format!("total {}, per class {}", r.f_explicit_ribbon.total, r.f_explicit_ribbon.per_class),
        ),
        check("W2 is not exact", r.nonexact(), format!("f(W2) = {}", r.f_w2.total)),
    ])
}
