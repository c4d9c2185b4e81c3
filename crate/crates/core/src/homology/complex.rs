//! Bigraded complexes that are free over `F2[V_1..V_N]` or `F2[V_1..V_N, v]`.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use rayon::prelude::*;

use crate::chain::ChainElement;
use crate::cover::{differential4, CoverDiagram};
use crate::error::{Error, Result};
use crate::grid::{differential, enumerate_states, gradings, GridDiagram, GridState, Theory};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Term {
    pub target: usize,
    pub k: Vec<u32>,
    pub m: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub label: String,
    pub maslov: i64,
    pub alexander: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeComplex {
    pub nvars: usize,
    pub has_v: bool,
    pub gens: Vec<Generator>,
    /// Differential of each generator, as a sorted list of distinct terms.
    pub diff: Vec<Vec<Term>>,
}

fn normalize(mut terms: Vec<Term>) -> Vec<Term> {
    terms.sort();
    let mut out: Vec<Term> = Vec::with_capacity(terms.len());
    for t in terms {
        if out.last() == Some(&t) {
            out.pop();
        } else {
            out.push(t);
        }
    }
    out
}

/// Gradings of `V^k v^m g`.
pub fn term_grading(g: &Generator, k: &[u32], m: u32) -> (i64, i64) {
    let sk: i64 = k.iter().map(|&v| v as i64).sum();
    (g.maslov - 2 * sk + 2 * m as i64, g.alexander - sk)
}

impl FreeComplex {
    /// Complex on `states`, with differential given on generators.
    pub fn from_states<G, D>(states: &[GridState], nvars: usize, has_v: bool, grade: G, d: D) -> Self
    where
        G: Fn(&GridState) -> (i64, i64) + Sync,
        D: Fn(&GridState) -> ChainElement + Sync,
    {
        let index: HashMap<&GridState, usize> = states.iter().enumerate().map(|(i, s)| (s, i)).collect();
        let gens = states
            .par_iter()
            .map(|s| {
                let (m, a) = grade(s);
                Generator { label: s.to_string(), maslov: m, alexander: a }
            })
            .collect();
        let diff = states
            .par_iter()
            .map(|s| {
                normalize(
                    d(s).iter()
                        .map(|t| Term { target: index[&t.state], k: t.k.clone(), m: t.m })
                        .collect(),
                )
            })
            .collect();
        FreeComplex { nvars, has_v, gens, diff }
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    /// Checks that the differential has degree (−1, 0).
    pub fn check_homogeneous(&self) -> Result<()> {
        for (i, terms) in self.diff.iter().enumerate() {
            let (m, a) = (self.gens[i].maslov, self.gens[i].alexander);
            for t in terms {
                let (tm, ta) = term_grading(&self.gens[t.target], &t.k, t.m);
                if (tm, ta) != (m - 1, a) {
                    return Err(Error::GradingMismatch(format!(
                        "{} -> {} has degree ({}, {})",
                        self.gens[i].label,
                        self.gens[t.target].label,
                        tm - m,
                        ta - a
                    )));
                }
            }
        }
        Ok(())
    }

    /// Shift every grading by `(dm, da)`.
    pub fn shifted(&self, dm: i64, da: i64) -> FreeComplex {
        let mut c = self.clone();
        for g in &mut c.gens {
            g.maslov += dm;
            g.alexander += da;
        }
        c
    }

    /// Same complex with generators listed in the order `perm` (new i = old perm[i]).
    pub fn permuted(&self, perm: &[usize]) -> FreeComplex {
        let mut inv = vec![0; perm.len()];
        for (i, &p) in perm.iter().enumerate() {
            inv[p] = i;
        }
        FreeComplex {
            nvars: self.nvars,
            has_v: self.has_v,
            gens: perm.iter().map(|&p| self.gens[p].clone()).collect(),
            diff: perm
                .iter()
                .map(|&p| {
                    normalize(
                        self.diff[p]
                            .iter()
                            .map(|t| Term { target: inv[t.target], k: t.k.clone(), m: t.m })
                            .collect(),
                    )
                })
                .collect(),
        }
    }

    /// Add one free variable at index `at` (the promotion to one more variable).
    pub fn promoted(&self, at: usize) -> FreeComplex {
        let mut c = self.clone();
        c.nvars += 1;
        for terms in &mut c.diff {
            for t in terms.iter_mut() {
                t.k.insert(at, 0);
            }
        }
        c
    }

    /// Rename variables: old index `i` becomes `perm[i]` in a ring with `nvars` variables.
    pub fn relabeled(&self, perm: &[usize], nvars: usize) -> FreeComplex {
        let mut c = self.clone();
        c.nvars = nvars;
        for terms in &mut c.diff {
            let re: Vec<Term> = terms
                .iter()
                .map(|t| {
                    let mut k = vec![0; nvars];
                    for (i, &e) in t.k.iter().enumerate() {
                        k[perm[i]] += e;
                    }
                    Term { target: t.target, k, m: t.m }
                })
                .collect();
            *terms = normalize(re);
        }
        c
    }

    /// Mapping cone of `f: a → b`, where `f` lowers the Maslov grading by one
    /// and preserves the Alexander grading. Generators of `a` come first.
    pub fn cone(a: &FreeComplex, b: &FreeComplex, f: &[Vec<Term>]) -> Result<FreeComplex> {
        if a.nvars != b.nvars || a.has_v != b.has_v || f.len() != a.len() {
            return Err(Error::GradingMismatch("cone inputs live over different rings".into()));
        }
        for (i, terms) in f.iter().enumerate() {
            for t in terms {
                let (tm, ta) = term_grading(&b.gens[t.target], &t.k, t.m);
                if (tm, ta) != (a.gens[i].maslov - 1, a.gens[i].alexander) {
                    return Err(Error::GradingMismatch(format!(
                        "map sends {} to {} with degree ({}, {})",
                        a.gens[i].label,
                        b.gens[t.target].label,
                        tm - a.gens[i].maslov,
                        ta - a.gens[i].alexander
                    )));
                }
            }
        }
        let off = a.len();
        let mut gens = a.gens.clone();
        gens.extend(b.gens.iter().cloned());
        let mut diff = Vec::with_capacity(a.len() + b.len());
        for i in 0..a.len() {
            let mut terms = a.diff[i].clone();
            terms.extend(f[i].iter().map(|t| Term { target: t.target + off, k: t.k.clone(), m: t.m }));
            diff.push(normalize(terms));
        }
        for terms in &b.diff {
            diff.push(terms.iter().map(|t| Term { target: t.target + off, k: t.k.clone(), m: t.m }).collect());
        }
        Ok(FreeComplex { nvars: a.nvars, has_v: a.has_v, gens, diff })
    }

    /// Quotient by `V_i = V_j` for all `i, j`: a complex over one variable `U`.
    pub fn collapsed(&self) -> FreeComplex {
        FreeComplex {
            nvars: 1,
            has_v: self.has_v,
            gens: self.gens.clone(),
            diff: self
                .diff
                .iter()
                .map(|terms| {
                    normalize(
                        terms
                            .iter()
                            .map(|t| Term { target: t.target, k: vec![t.k.iter().sum()], m: t.m })
                            .collect(),
                    )
                })
                .collect(),
        }
    }

    /// Cancel every arrow whose coefficient is 1; the result is chain
    /// homotopy equivalent over the polynomial ring.
    pub fn reduced(&self) -> FreeComplex {
        type Poly = BTreeSet<(Vec<u32>, u32)>;
        let n = self.len();
        let unit: Poly = [(vec![0; self.nvars], 0)].into_iter().collect();
        let mut out: Vec<BTreeMap<usize, Poly>> = vec![BTreeMap::new(); n];
        let mut inn: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
        for (i, terms) in self.diff.iter().enumerate() {
            for t in terms {
                out[i].entry(t.target).or_default().insert((t.k.clone(), t.m));
                inn[t.target].insert(i);
            }
        }
        let mut alive = vec![true; n];
        let mul = |p: &Poly, q: &Poly| -> Poly {
            let mut r = Poly::new();
            for (a, am) in p {
                for (b, bm) in q {
                    let k: Vec<u32> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                    let key = (k, am + bm);
                    if !r.remove(&key) {
                        r.insert(key);
                    }
                }
            }
            r
        };
        let mut changed = true;
        while changed {
            changed = false;
            for x in 0..n {
                if !alive[x] {
                    continue;
                }
                let Some(y) = out[x].iter().find(|(_, p)| **p == unit).map(|(&y, _)| y) else {
                    continue;
                };
                changed = true;
                let dx: Vec<(usize, Poly)> =
                    out[x].iter().filter(|(&w, _)| w != y).map(|(&w, p)| (w, p.clone())).collect();
                let preds: Vec<usize> = inn[y].iter().copied().filter(|&z| z != x).collect();
                for z in preds {
                    let czy = out[z][&y].clone();
                    for (w, cxw) in &dx {
                        let prod = mul(&czy, cxw);
                        let e = out[z].entry(*w).or_default();
                        for term in prod {
                            if !e.remove(&term) {
                                e.insert(term);
                            }
                        }
                        if e.is_empty() {
                            out[z].remove(w);
                            inn[*w].remove(&z);
                        } else {
                            inn[*w].insert(z);
                        }
                    }
                }
                for v in [x, y] {
                    alive[v] = false;
                    let targets: Vec<usize> = out[v].keys().copied().collect();
                    for t in targets {
                        inn[t].remove(&v);
                    }
                    out[v].clear();
                    let sources: Vec<usize> = inn[v].iter().copied().collect();
                    for s in sources {
                        out[s].remove(&v);
                    }
                    inn[v].clear();
                }
            }
        }
        let keep: Vec<usize> = (0..n).filter(|&i| alive[i]).collect();
        let mut newidx = vec![usize::MAX; n];
        for (j, &i) in keep.iter().enumerate() {
            newidx[i] = j;
        }
        FreeComplex {
            nvars: self.nvars,
            has_v: self.has_v,
            gens: keep.iter().map(|&i| self.gens[i].clone()).collect(),
            diff: keep
                .iter()
                .map(|&i| {
                    let mut v: Vec<Term> = Vec::new();
                    for (&t, p) in &out[i] {
                        for (k, m) in p {
                            v.push(Term { target: newidx[t], k: k.clone(), m: *m });
                        }
                    }
                    normalize(v)
                })
                .collect(),
        }
    }

    /// Whether `d∘d = 0` holds exactly.
    pub fn squares_to_zero(&self) -> bool {
        (0..self.len()).into_par_iter().all(|i| {
            let mut acc: BTreeSet<Term> = BTreeSet::new();
            for t in &self.diff[i] {
                for u in &self.diff[t.target] {
                    let key = Term {
                        target: u.target,
                        k: t.k.iter().zip(&u.k).map(|(a, b)| a + b).collect(),
                        m: t.m + u.m,
                    };
                    if !acc.remove(&key) {
                        acc.insert(key);
                    }
                }
            }
            acc.is_empty()
        })
    }

    pub fn grading_bounds(&self) -> Option<((i64, i64), (i64, i64))> {
        let ms = self.gens.iter().map(|g| g.maslov);
        let as_ = self.gens.iter().map(|g| g.alexander);
        Some(((ms.clone().min()?, ms.max()?), (as_.clone().min()?, as_.max()?)))
    }
}

/// The inputs accepted by [`build_complex`].
#[derive(Clone, Debug)]
pub enum Source<'a> {
    GridMinus(&'a GridDiagram),
    GridBullet(&'a GridDiagram),
    CoverBullet(&'a CoverDiagram),
    /// `GC•(𝔾₄)[V]` with the new variable at index `at`.
    Promoted { cover: &'a CoverDiagram, at: usize },
    /// Mapping cone of an explicit map between two complexes.
    Cone { a: &'a FreeComplex, b: &'a FreeComplex, map: &'a [Vec<Term>] },
}

pub fn build_complex(src: Source<'_>) -> Result<FreeComplex> {
    let c = match src {
        Source::GridMinus(g) => grid_complex(g, Theory::Minus),
        Source::GridBullet(g) => grid_complex(g, Theory::Bullet),
        Source::CoverBullet(c) => cover_complex(c),
        Source::Promoted { cover, at } => cover_complex(cover).promoted(at),
        Source::Cone { a, b, map } => FreeComplex::cone(a, b, map)?,
    };
    Ok(c)
}

pub fn grid_complex(g: &GridDiagram, theory: Theory) -> FreeComplex {
    let states = enumerate_states(g);
    FreeComplex::from_states(&states, g.n(), theory == Theory::Bullet, |s| gradings(g, s), |s| {
        differential(g, theory, s)
    })
}

pub fn cover_complex(c: &CoverDiagram) -> FreeComplex {
    let g = c.base();
    let states = enumerate_states(g);
    FreeComplex::from_states(&states, g.n(), true, |s| gradings(g, s), |s| differential4(c, s))
}
