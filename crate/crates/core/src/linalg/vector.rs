use std::collections::HashMap;
use std::fmt::Write;

use num_traits::{One, Zero};

use super::scalar::{parse_rational, q, Rational};
use crate::error::{Error, Result};
use crate::graphcore::{decode_signed, CanonicalGraph, LabeledGraph, Parity};

/// Finite linear combination of canonical graphs with rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphVector {
    parity: Parity,
    terms: HashMap<CanonicalGraph, Rational>,
}

impl GraphVector {
    pub fn zero(parity: Parity) -> Self {
        GraphVector { parity, terms: HashMap::new() }
    }

    pub fn from_graph(g: CanonicalGraph) -> Self {
        let mut v = Self::zero(g.parity());
        v.terms.insert(g, Rational::one());
        v
    }

    pub fn from_terms(parity: Parity, terms: impl IntoIterator<Item = (CanonicalGraph, Rational)>) -> Result<Self> {
        let mut v = Self::zero(parity);
        for (g, c) in terms {
            v.add_term(g, c)?;
        }
        Ok(v)
    }

    /// `c` times a labeled graph, canonicalized (zero classes drop out).
    pub fn from_labeled(g: &LabeledGraph, c: Rational) -> Result<Self> {
        let mut v = Self::zero(g.parity);
        if let Some((cg, s)) = g.canonicalize()? {
            v.add_term(cg, c * q(s as i64))?;
        }
        Ok(v)
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, g: CanonicalGraph, c: Rational) -> Result<()> {
        if g.parity() != self.parity {
            return Err(Error::ParityMismatch { expected: self.parity, found: g.parity() });
        }
        if c.is_zero() {
            return Ok(());
        }
        use std::collections::hash_map::Entry;
        match self.terms.entry(g) {
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
            Entry::Vacant(e) => {
                e.insert(c);
            }
        }
        Ok(())
    }

    pub fn add_assign(&mut self, other: &GraphVector) -> Result<()> {
        self.add_scaled(other, &Rational::one())
    }

    pub fn add_scaled(&mut self, other: &GraphVector, s: &Rational) -> Result<()> {
        if other.parity != self.parity && !other.is_zero() {
            return Err(Error::ParityMismatch { expected: self.parity, found: other.parity });
        }
        for (g, c) in &other.terms {
            self.add_term(g.clone(), c * s)?;
        }
        Ok(())
    }

    pub fn add(&self, other: &GraphVector) -> Result<GraphVector> {
        let mut out = self.clone();
        out.add_assign(other)?;
        Ok(out)
    }

    pub fn sub(&self, other: &GraphVector) -> Result<GraphVector> {
        let mut out = self.clone();
        out.add_scaled(other, &-Rational::one())?;
        Ok(out)
    }

    pub fn scale(&self, s: &Rational) -> GraphVector {
        if s.is_zero() {
            return Self::zero(self.parity);
        }
        GraphVector { parity: self.parity, terms: self.terms.iter().map(|(g, c)| (g.clone(), c * s)).collect() }
    }

    pub fn coeff(&self, g: &CanonicalGraph) -> Rational {
        self.terms.get(g).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&CanonicalGraph, &Rational)> {
        self.terms.iter()
    }

    /// Terms sorted by graph key, for deterministic output.
    pub fn sorted_terms(&self) -> Vec<(CanonicalGraph, Rational)> {
        let mut v: Vec<(String, CanonicalGraph, Rational)> =
            self.terms.iter().map(|(g, c)| (g.key(), g.clone(), c.clone())).collect();
        v.sort_by(|a, b| a.0.cmp(&b.0));
        v.into_iter().map(|(_, g, c)| (g, c)).collect()
    }

    pub fn filter(&self, mut keep: impl FnMut(&CanonicalGraph) -> bool) -> GraphVector {
        GraphVector {
            parity: self.parity,
            terms: self.terms.iter().filter(|(g, _)| keep(g)).map(|(g, c)| (g.clone(), c.clone())).collect(),
        }
    }

    /// The `(v, e)` bidegree if all terms share one.
    pub fn homogeneity(&self) -> Option<(usize, usize)> {
        let mut it = self.terms.keys().map(|g| (g.num_vertices(), g.num_edges() + g.num_dotted()));
        let first = it.next()?;
        it.all(|x| x == first).then_some(first)
    }

    /// One `coefficient<TAB>graph` line per term, sorted by graph key.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (g, c) in self.sorted_terms() {
            writeln!(s, "{c}\t{g}").unwrap();
        }
        s
    }

    pub fn from_text(parity: Parity, text: &str) -> Result<GraphVector> {
        let mut v = Self::zero(parity);
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (c, g) = line
                .split_once('\t')
                .ok_or_else(|| Error::Parse { pos: lineno, msg: "expected `coefficient<TAB>graph`".into() })?;
            let c = parse_rational(c)?;
            if let Some((g, s)) = decode_signed(g)? {
                v.add_term(g, c * q(s as i64))?;
            }
        }
        Ok(v)
    }
}

/// `a + b`.
pub fn vec_add(a: &GraphVector, b: &GraphVector) -> Result<GraphVector> {
    a.add(b)
}

/// `s * a`.
pub fn vec_scale(s: &Rational, a: &GraphVector) -> GraphVector {
    a.scale(s)
}

/// Coefficient of `g` in `a`.
pub fn coeff(a: &GraphVector, g: &CanonicalGraph) -> Rational {
    a.coeff(g)
}
