//! F2-linear combinations of monomial generators `V^k v^m x`.

use std::collections::BTreeSet;

use crate::grid::GridState;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    pub state: GridState,
    pub k: Vec<u32>,
    pub m: u32,
}

impl Monomial {
    pub fn new(state: GridState, k: Vec<u32>, m: u32) -> Self {
        Monomial { state, k, m }
    }

    pub fn generator(state: GridState, nvars: usize) -> Self {
        Monomial { state, k: vec![0; nvars], m: 0 }
    }

    /// Multiply by `V^k v^m`.
    pub fn shifted(&self, k: &[u32], m: u32) -> Monomial {
        let mut out = self.clone();
        for (a, b) in out.k.iter_mut().zip(k) {
            *a += *b;
        }
        out.m += m;
        out
    }

    pub fn total_k(&self) -> u32 {
        self.k.iter().sum()
    }
}

/// Finite sum of monomials with coefficients in F2, kept in canonical order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct ChainElement {
    terms: BTreeSet<Monomial>,
}

impl ChainElement {
    pub fn zero() -> Self {
        ChainElement::default()
    }

    pub fn from_monomial(m: Monomial) -> Self {
        let mut e = ChainElement::zero();
        e.toggle(m);
        e
    }

    pub fn generator(state: GridState, nvars: usize) -> Self {
        ChainElement::from_monomial(Monomial::generator(state, nvars))
    }

    /// Add one monomial; equal monomials cancel.
    pub fn toggle(&mut self, m: Monomial) {
        if !self.terms.remove(&m) {
            self.terms.insert(m);
        }
    }

    pub fn add_assign(&mut self, other: &ChainElement) {
        for t in &other.terms {
            self.toggle(t.clone());
        }
    }

    pub fn add(&self, other: &ChainElement) -> ChainElement {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Monomial> {
        self.terms.iter()
    }

    pub fn first(&self) -> Option<&Monomial> {
        self.terms.iter().next()
    }

    /// Multiply every term by `V^k v^m`.
    pub fn shifted(&self, k: &[u32], m: u32) -> ChainElement {
        ChainElement { terms: self.terms.iter().map(|t| t.shifted(k, m)).collect() }
    }

    /// Extend a map defined on generators linearly over the polynomial ring.
    pub fn apply<F>(&self, f: F) -> ChainElement
    where
        F: Fn(&GridState) -> ChainElement,
    {
        let mut out = ChainElement::zero();
        for t in &self.terms {
            out.add_assign(&f(&t.state).shifted(&t.k, t.m));
        }
        out
    }

    /// Relabel exponent vectors: entry `i` of the old vector goes to `perm[i]`.
    pub fn relabel_vars(&self, perm: &[usize], nvars: usize) -> ChainElement {
        let mut out = ChainElement::zero();
        for t in &self.terms {
            let mut k = vec![0; nvars];
            for (i, &e) in t.k.iter().enumerate() {
                k[perm[i]] += e;
            }
            out.toggle(Monomial { state: t.state.clone(), k, m: t.m });
        }
        out
    }

    /// Multiply by `V_i + V_j`.
    pub fn times_sum_of_vars(&self, i: usize, j: usize) -> ChainElement {
        let mut out = ChainElement::zero();
        for t in &self.terms {
            for idx in [i, j] {
                let mut u = t.clone();
                u.k[idx] += 1;
                out.toggle(u);
            }
        }
        out
    }
}

impl FromIterator<Monomial> for ChainElement {
    fn from_iter<I: IntoIterator<Item = Monomial>>(iter: I) -> Self {
        let mut e = ChainElement::zero();
        for m in iter {
            e.toggle(m);
        }
        e
    }
}

impl<'a> IntoIterator for &'a ChainElement {
    type Item = &'a Monomial;
    type IntoIter = std::collections::btree_set::Iter<'a, Monomial>;
    fn into_iter(self) -> Self::IntoIter {
        self.terms.iter()
    }
}
