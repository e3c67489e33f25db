use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{rank, Field, SparseMatrix};

/// An associative word in `a_1, …, a_N`, each letter used once. Letters are
/// stored 1-based, as written.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Word(Vec<u8>);

impl Word {
    pub fn new(letters: Vec<u8>) -> Result<Self> {
        let mut seen = letters.clone();
        seen.sort_unstable();
        if seen.iter().enumerate().any(|(i, &x)| x as usize != i + 1) {
            return Err(Error::Precondition(format!("{letters:?} is not a permutation of 1..={}", letters.len())));
        }
        Ok(Word(letters))
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn arity(&self) -> usize {
        self.0.len()
    }

    pub fn letters(&self) -> &[u8] {
        &self.0
    }

    /// `d_i` for `0 ≤ i ≤ N + 1`.
    pub fn face(&self, i: usize) -> Word {
        let n = self.arity();
        assert!(i <= n + 1);
        let shifted = |x: u8, from: u8| if x >= from { x + 1 } else { x };
        if i == 0 {
            return Word(std::iter::once(1).chain(self.0.iter().map(|&x| x + 1)).collect());
        }
        if i == n + 1 {
            return Word(self.0.iter().copied().chain(std::iter::once(n as u8 + 1)).collect());
        }
        let i = i as u8;
        let mut out = Vec::with_capacity(n + 1);
        for &x in &self.0 {
            out.push(shifted(x, i + 1));
            if x == i {
                out.push(i + 1);
            }
        }
        Word(out)
    }

    /// `W'` if the word is `a_1 W'`, renumbered down.
    pub fn strip_first(&self) -> Option<Word> {
        (self.0.first() == Some(&1)).then(|| Word(self.0[1..].iter().map(|&x| x - 1).collect()))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "∅");
        }
        for x in &self.0 {
            write!(f, "a{x}")?;
        }
        Ok(())
    }
}

/// All `N!` words of arity `n`, in lexicographic order.
pub fn all_words(n: usize) -> Vec<Word> {
    fn rec(prefix: &mut Vec<u8>, left: &mut Vec<u8>, out: &mut Vec<Word>) {
        if left.is_empty() {
            out.push(Word(prefix.clone()));
            return;
        }
        for k in 0..left.len() {
            let x = left.remove(k);
            prefix.push(x);
            rec(prefix, left, out);
            prefix.pop();
            left.insert(k, x);
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut (1..=n as u8).collect(), &mut out);
    out
}

/// Integer combinations of words.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct WordVector(BTreeMap<Word, i64>);

impl WordVector {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_word(w: Word) -> Self {
        let mut v = Self::zero();
        v.add_term(w, 1);
        v
    }

    pub fn add_term(&mut self, w: Word, c: i64) {
        if c == 0 {
            return;
        }
        match self.0.entry(w) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if *e.get() == 0 {
                    e.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &WordVector) -> WordVector {
        let mut out = self.clone();
        for (w, &c) in &other.0 {
            out.add_term(w.clone(), c);
        }
        out
    }

    pub fn scale(&self, c: i64) -> WordVector {
        let mut out = WordVector::zero();
        for (w, &x) in &self.0 {
            out.add_term(w.clone(), c * x);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coeff(&self, w: &Word) -> i64 {
        self.0.get(w).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Word, i64)> {
        self.0.iter().map(|(w, &c)| (w, c))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for WordVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        for (k, (w, c)) in self.0.iter().enumerate() {
            match (k, *c) {
                (0, 1) => write!(f, "{w}")?,
                (0, -1) => write!(f, "-{w}")?,
                (0, c) => write!(f, "{c}{w}")?,
                (_, 1) => write!(f, " + {w}")?,
                (_, -1) => write!(f, " - {w}")?,
                (_, c) if c < 0 => write!(f, " - {}{w}", -c)?,
                (_, c) => write!(f, " + {c}{w}")?,
            }
        }
        Ok(())
    }
}

/// `d = Σ_{i=0}^{N+1} (-1)^i d_i`.
pub fn word_d(x: &WordVector) -> WordVector {
    let mut out = WordVector::zero();
    for (w, c) in x.iter() {
        for i in 0..=w.arity() + 1 {
            out.add_term(w.face(i), if i % 2 == 0 { c } else { -c });
        }
    }
    out
}

/// `h(a_1 W') = W'`, and `h(W) = 0` for words not starting with `a_1`.
pub fn word_homotopy(x: &WordVector) -> WordVector {
    let mut out = WordVector::zero();
    for (w, c) in x.iter() {
        if let Some(s) = w.strip_first() {
            out.add_term(s, c);
        }
    }
    out
}

/// Matrix of `d` from arity `n` to arity `n + 1` in the bases [`all_words`].
pub fn word_d_matrix(n: usize) -> Result<SparseMatrix> {
    let dom = all_words(n);
    let cod = all_words(n + 1);
    let index: BTreeMap<&Word, usize> = cod.iter().enumerate().map(|(i, w)| (w, i)).collect();
    let mut t = Vec::new();
    for (j, w) in dom.iter().enumerate() {
        for (u, c) in word_d(&WordVector::from_word(w.clone())).iter() {
            t.push((index[u], j, c));
        }
    }
    SparseMatrix::from_triplets(cod.len(), dom.len(), t)
}

/// Cohomology dimension in arity `n ≥ 1`. The complex starts in arity 1,
/// since the non-unital associative operad has nothing in arity 0.
pub fn word_cohomology_dim(n: usize, field: Field) -> Result<usize> {
    if n == 0 {
        return Err(Error::Precondition("the word complex starts in arity 1".into()));
    }
    let out = rank(&word_d_matrix(n)?, field);
    let inc = if n >= 2 { rank(&word_d_matrix(n - 1)?, field) } else { 0 };
    Ok((1..=n).product::<usize>() - out - inc)
}

/// `h d W + d h W - W`, with `h` on arity 1 landing in the zero space.
pub fn homotopy_defect(w: &Word) -> WordVector {
    let x = WordVector::from_word(w.clone());
    let hd = word_homotopy(&word_d(&x));
    let dh = if w.arity() >= 2 { word_d(&word_homotopy(&x)) } else { WordVector::zero() };
    hd.add(&dh).add(&x.scale(-1))
}
