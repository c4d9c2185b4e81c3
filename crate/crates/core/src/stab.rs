//! Stabilization of type X:SW and the splitting `GC•(𝔾₄′) = 𝐈₄ ⊕ 𝐍₄`.
//!
//! After stabilizing column `col` (whose X sits in row `r`), columns are
//! rotated so that the new O-marking `O₁` is in column 0. The 2×2
//! destabilization square then occupies columns `n` and `0` and rows `r` and
//! `r+1`: `X₁` at `(n, r+1)`, `O₁` at `(0, r+1)`, `X₂` at `(0, r)`, and the
//! point `c` is the lattice point `(0, r+1)`.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::chain::{ChainElement, Monomial};
use crate::cover::{build_cover, differential4, h_xi, rect_classes_from, CoverDiagram, MValue, RectClass4};
use crate::error::{Error, Result};
use crate::grid::{enumerate_states, gradings, GridDiagram, GridState};
use crate::homology::{cover_complex, FreeComplex, Term};
use crate::verify::{check_identity, check_zero, Witness};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StabLabels {
    /// Grid number of the destabilized diagram.
    pub n: usize,
    /// Column of the destabilized diagram that was stabilized.
    pub col: usize,
    /// Row of the X-marking in that column.
    pub r: usize,
    /// The lattice point `c` in the stabilized diagram.
    pub c: (usize, usize),
    pub o1: usize,
    pub o2: usize,
    pub x1: usize,
    pub x2: usize,
    /// Variable `j` of the destabilized diagram is variable `relabel[j]` here.
    pub relabel: Vec<usize>,
}

impl StabLabels {
    pub fn is_i_state(&self, x: &GridState) -> bool {
        x.row(self.c.0) == self.c.1
    }

    pub fn summand(&self, x: &GridState) -> Summand {
        if self.is_i_state(x) {
            Summand::I
        } else {
            Summand::N
        }
    }

    fn nvars(&self) -> usize {
        self.n + 1
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Summand {
    I,
    N,
}

/// States of the stabilized diagram split by whether they contain `c`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Splitting {
    pub i_states: Vec<GridState>,
    pub n_states: Vec<GridState>,
}

pub fn splitting(gp: &GridDiagram, labels: &StabLabels) -> Splitting {
    let (i_states, n_states) = enumerate_states(gp).into_iter().partition(|x| labels.is_i_state(x));
    Splitting { i_states, n_states }
}

/// Stabilize at the X-marking of column `col`.
pub fn stabilize_xsw(g: &GridDiagram, col: usize) -> Result<(GridDiagram, StabLabels)> {
    let n = g.n();
    if col >= n {
        return Err(Error::InvalidColumn(format!("column {col} of a grid of size {n}")));
    }
    let r = g.x(col);
    let sh = |row: usize| if row > r { row + 1 } else { row };
    let pc = |j: usize| if j <= col { j } else { j + 1 };
    let mut o = vec![0; n + 1];
    let mut x = vec![0; n + 1];
    for j in 0..n {
        o[pc(j)] = sh(g.o(j));
        x[pc(j)] = sh(g.x(j));
    }
    x[col] = r + 1;
    o[col + 1] = r + 1;
    x[col + 1] = r;
    let gp = GridDiagram::new(o, x)?.rotate_columns(col + 1);
    let relabel: Vec<usize> = (0..n).map(|j| (pc(j) + n - col) % (n + 1)).collect();
    let labels = StabLabels {
        n,
        col,
        r,
        c: (0, r + 1),
        o1: 0,
        o2: gp.o_col(r),
        x1: gp.x_col(r + 1),
        x2: 0,
        relabel,
    };
    debug_assert_eq!(labels.x1, n);
    debug_assert_eq!(gp.x(0), r);
    Ok((gp, labels))
}

/// Destabilize at the square whose new O-marking is in column `k`: `O₁`
/// at `(k, R)`, `X₂` directly south of it and `X₁` directly west. The
/// result lists the surviving columns starting after `k`.
pub fn destabilize_at(gp: &GridDiagram, k: usize) -> Result<GridDiagram> {
    let np = gp.n();
    if k >= np {
        return Err(Error::InvalidColumn(format!("column {k} of a grid of size {np}")));
    }
    if np < 3 {
        return Err(Error::InvalidMove("cannot destabilize a grid of size 2".into()));
    }
    let rr = gp.o(k);
    let west = (k + np - 1) % np;
    if gp.x(k) != (rr + np - 1) % np || gp.x(west) != rr {
        return Err(Error::InvalidMove(format!(
            "column {k} is not the O-column of an X:SW destabilization square"
        )));
    }
    let down = |row: usize| if row > rr { row - 1 } else { row };
    let mut o = Vec::with_capacity(np - 1);
    let mut x = Vec::with_capacity(np - 1);
    for step in 1..np {
        let j = (k + step) % np;
        o.push(down(gp.o(j)));
        x.push(down(if j == west { gp.x(k) } else { gp.x(j) }));
    }
    GridDiagram::new(o, x)
}

/// Exact inverse of [`stabilize_xsw`].
pub fn destabilize(gp: &GridDiagram, labels: &StabLabels) -> Result<GridDiagram> {
    let g = destabilize_at(gp, labels.o1)?;
    let n = g.n();
    Ok(g.rotate_columns((n - (labels.col + 1) % n) % n))
}

/// `e₄`: drop `c` from an I-state.
pub fn e4(labels: &StabLabels, xp: &GridState) -> Result<GridState> {
    if !labels.is_i_state(xp) {
        return Err(Error::NotAnIState);
    }
    let rc = labels.c.1;
    let rho = labels
        .relabel
        .iter()
        .map(|&j| {
            let row = xp.row(j);
            (if row > rc { row - 1 } else { row }) as u8
        })
        .collect();
    Ok(GridState::from_vec_unchecked(rho))
}

/// Inverse of [`e4`]: add `c`.
pub fn e4_inverse(labels: &StabLabels, x: &GridState) -> GridState {
    let mut rho = vec![0u8; labels.n + 1];
    rho[labels.c.0] = labels.c.1 as u8;
    for (j, &p) in labels.relabel.iter().enumerate() {
        let row = x.row(j);
        rho[p] = (if row > labels.r { row + 1 } else { row }) as u8;
    }
    GridState::from_vec_unchecked(rho)
}

pub fn e4_elem(labels: &StabLabels, e: &ChainElement) -> Result<ChainElement> {
    let mut out = ChainElement::zero();
    for t in e {
        out.toggle(Monomial::new(e4(labels, &t.state)?, t.k.clone(), t.m));
    }
    Ok(out)
}

/// Differential of `GC•(𝔾₄)[V₁]` in the variable numbering of the stabilized diagram.
pub fn promoted_differential(cg: &CoverDiagram, labels: &StabLabels, x: &GridState) -> ChainElement {
    differential4(cg, x).relabel_vars(&labels.relabel, labels.nvars())
}

fn keep(labels: &StabLabels, e: ChainElement, to: Summand) -> ChainElement {
    e.iter().filter(|t| labels.summand(&t.state) == to).cloned().collect()
}

fn require(labels: &StabLabels, x: &GridState, from: Summand) -> Result<()> {
    match (labels.summand(x), from) {
        (Summand::N, Summand::I) => Err(Error::NotAnIState),
        (Summand::I, Summand::N) => Err(Error::NotAnNState),
        _ => Ok(()),
    }
}

/// Block of `∂₄•` on the stabilized cover from one summand to another.
pub fn d_block(cp: &CoverDiagram, labels: &StabLabels, from: Summand, to: Summand, x: &GridState) -> Result<ChainElement> {
    require(labels, x, from)?;
    Ok(keep(labels, differential4(cp, x), to))
}

/// Block of `H•_{X₂}` from one summand to another.
pub fn h_x2_block(cp: &CoverDiagram, labels: &StabLabels, from: Summand, to: Summand, x: &GridState) -> Result<ChainElement> {
    require(labels, x, from)?;
    Ok(keep(labels, h_xi(cp, labels.x2, x), to))
}

/// `H_{X₂}^{𝐈₄}`: the N → I block of `H•_{X₂}`.
pub fn h_x2_i4(cp: &CoverDiagram, labels: &StabLabels, x: &GridState) -> Result<ChainElement> {
    h_x2_block(cp, labels, Summand::N, Summand::I, x)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum StabHomotopy {
    /// `H•_{O₁}: 𝐈₄ → 𝐍₄`.
    O1,
    /// `H•_{O₁,X₂}: 𝐍₄ → 𝐍₄`.
    O1X2,
}

fn without_v1(labels: &StabLabels, r: &RectClass4) -> Monomial {
    let mut k = r.k();
    k[labels.o1] = 0;
    Monomial::new(r.to4.clone(), k, r.m_value.defined().expect("defined m"))
}

/// Classes through exactly one lift of `O₁`, with `V₁` evaluated to 1.
pub fn stab_homotopy(cp: &CoverDiagram, labels: &StabLabels, which: StabHomotopy, x: &GridState) -> Result<ChainElement> {
    let want = match which {
        StabHomotopy::O1 => Summand::I,
        StabHomotopy::O1X2 => Summand::N,
    };
    if labels.summand(x) != want {
        return Err(Error::WrongSummand);
    }
    let x_ok = |r: &RectClass4| match which {
        StabHomotopy::O1 => r.x_free(),
        StabHomotopy::O1X2 => {
            r.x_mult.iter().enumerate().all(|(j, &v)| if j == labels.x2 { v == 1 } else { v == 0 })
        }
    };
    Ok(rect_classes_from(cp, x)
        .iter()
        .filter(|r| r.m_value != MValue::Undefined && r.o_mult[labels.o1] == 1 && x_ok(r))
        .filter(|r| !labels.is_i_state(&r.to4))
        .map(|r| without_v1(labels, r))
        .collect())
}

/// Whether some lift of `c` lies on the boundary of the class.
pub fn class_touches_c(cp: &CoverDiagram, labels: &StabLabels, r: &RectClass4) -> bool {
    let side = cp.side();
    let np = cp.n();
    let (a, b) = r.sw;
    [(0, 0), (np, 0), (0, np), (np, np)].iter().any(|&(dx, dy)| {
        let px = (labels.c.0 + dx) % side;
        let py = (labels.c.1 + dy) % side;
        let u = (px + side - a) % side;
        let v = (py + side - b) % side;
        u <= r.w && v <= r.h && (u == 0 || u == r.w || v == 0 || v == r.h)
    })
}

fn terms_to(e: &ChainElement, index: &std::collections::HashMap<GridState, usize>) -> Vec<Term> {
    let mut v: Vec<Term> = e.iter().map(|t| Term { target: index[&t.state], k: t.k.clone(), m: t.m }).collect();
    v.sort();
    v
}

/// `Cone(∂_{𝐈₄}^{𝐍₄})`, with the I-generators first.
pub fn cone_of_splitting(gp: &GridDiagram, cp: &CoverDiagram, labels: &StabLabels) -> Result<FreeComplex> {
    let sp = splitting(gp, labels);
    let nv = labels.nvars();
    let a = FreeComplex::from_states(&sp.i_states, nv, true, |s| gradings(gp, s), |s| {
        keep(labels, differential4(cp, s), Summand::I)
    });
    let b = FreeComplex::from_states(&sp.n_states, nv, true, |s| gradings(gp, s), |s| {
        keep(labels, differential4(cp, s), Summand::N)
    });
    let index = sp.n_states.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
    let map: Vec<Vec<Term>> = sp
        .i_states
        .iter()
        .map(|s| terms_to(&keep(labels, differential4(cp, s), Summand::N), &index))
        .collect();
    FreeComplex::cone(&a, &b, &map)
}

/// `Cone(V₁ + V₂)` on `GC•(𝔾₄)[V₁]`, the source shifted by ⟦1,1⟧.
pub fn cone_promoted(g: &GridDiagram, labels: &StabLabels) -> Result<FreeComplex> {
    let nv = labels.nvars();
    let p = cover_complex(&build_cover(g)).relabeled(&labels.relabel, nv);
    let unit = |i: usize| {
        let mut k = vec![0; nv];
        k[i] = 1;
        k
    };
    let map: Vec<Vec<Term>> = (0..p.len())
        .map(|t| {
            let mut v = vec![Term { target: t, k: unit(labels.o1), m: 0 }, Term { target: t, k: unit(labels.o2), m: 0 }];
            v.sort();
            v
        })
        .collect();
    FreeComplex::cone(&p.shifted(-1, -1), &p, &map)
}

/// `∂₄•`, `H•_{X₂}` and the two `O₁` homotopies on every state of the
/// stabilized diagram, computed once.
struct Tables {
    d: HashMap<GridState, ChainElement>,
    h: HashMap<GridState, ChainElement>,
    o1: HashMap<GridState, ChainElement>,
    o1x2: HashMap<GridState, ChainElement>,
}

impl Tables {
    fn new(gp: &GridDiagram, cp: &CoverDiagram, labels: &StabLabels) -> Tables {
        let states = enumerate_states(gp);
        let tab = |f: &(dyn Fn(&GridState) -> Option<ChainElement> + Sync)| -> HashMap<GridState, ChainElement> {
            states.par_iter().filter_map(|x| f(x).map(|e| (x.clone(), e))).collect()
        };
        Tables {
            d: tab(&|x| Some(differential4(cp, x))),
            h: tab(&|x| Some(h_xi(cp, labels.x2, x))),
            o1: tab(&|x| stab_homotopy(cp, labels, StabHomotopy::O1, x).ok()),
            o1x2: tab(&|x| stab_homotopy(cp, labels, StabHomotopy::O1X2, x).ok()),
        }
    }
}

/// Every chain-level identity of the splitting, in a fixed order; `None`
/// marks a pass.
pub fn stabilization_identities(g: &GridDiagram, gp: &GridDiagram, labels: &StabLabels) -> Vec<(String, Option<Witness>)> {
    let cg = build_cover(g);
    let cp = &build_cover(gp);
    let sp = splitting(gp, labels);
    let (is, ns) = (&sp.i_states, &sp.n_states);
    let t = &Tables::new(gp, cp, labels);
    let d = |from, to| {
        move |x: &GridState| {
            require(labels, x, from).expect("summand");
            keep(labels, t.d[x].clone(), to)
        }
    };
    let h = |from, to| {
        move |x: &GridState| {
            require(labels, x, from).expect("summand");
            keep(labels, t.h[x].clone(), to)
        }
    };
    let ho = |which| {
        move |x: &GridState| match which {
            StabHomotopy::O1 => t.o1.get(x),
            StabHomotopy::O1X2 => t.o1x2.get(x),
        }
        .expect("summand")
        .clone()
    };
    let ap = |e: &ChainElement, f: &dyn Fn(&GridState) -> ChainElement| e.apply(f);
    let gen = |x: &GridState| ChainElement::generator(x.clone(), labels.nvars());
    let v1v2 = |x: &GridState| gen(x).times_sum_of_vars(labels.o1, labels.o2);
    use Summand::{I, N};

    let mut out = Vec::new();
    let mut push = |name: &str, w: Option<Witness>| out.push((name.to_string(), w));
    push("d N->I block vanishes", check_zero("d N->I block vanishes", ns, d(N, I)));
    push("H_X2 I->I block vanishes", check_zero("H_X2 I->I block vanishes", is, h(I, I)));
    push(
        "H_X2^I d_I^N = V1 + V2",
        check_identity("H_X2^I d_I^N = V1 + V2", is, |x| ap(&d(I, N)(x), &h(N, I)), v1v2),
    );
    push(
        "d_I^I H_X2^I + H_X2^I d_N^N = 0",
        check_zero("d_I^I H_X2^I + H_X2^I d_N^N = 0", ns, |x| {
            ap(&h(N, I)(x), &d(I, I)).add(&ap(&d(N, N)(x), &h(N, I)))
        }),
    );
    push(
        "d_N^N H_X2^N + H_X2^N d_I^I + H_X2^NN d_I^N = 0",
        check_zero("d_N^N H_X2^N + H_X2^N d_I^I + H_X2^NN d_I^N = 0", is, |x| {
            ap(&h(I, N)(x), &d(N, N)).add(&ap(&d(I, I)(x), &h(I, N))).add(&ap(&d(I, N)(x), &h(N, N)))
        }),
    );
    push(
        "d_I^N H_X2^I + d_N^N H_X2^NN + H_X2^NN d_N^N = V1 + V2",
        check_identity(
            "d_I^N H_X2^I + d_N^N H_X2^NN + H_X2^NN d_N^N = V1 + V2",
            ns,
            |x| ap(&h(N, I)(x), &d(I, N)).add(&ap(&h(N, N)(x), &d(N, N))).add(&ap(&d(N, N)(x), &h(N, N))),
            v1v2,
        ),
    );
    push(
        "H_X2^I H_O1 = Id on I",
        check_identity("H_X2^I H_O1 = Id on I", is, |x| ap(&ho(StabHomotopy::O1)(x), &h(N, I)), gen),
    );
    push(
        "H_O1 H_X2^I + d_N^N H_O1X2 + H_O1X2 d_N^N = Id on N",
        check_identity(
            "H_O1 H_X2^I + d_N^N H_O1X2 + H_O1X2 d_N^N = Id on N",
            ns,
            |x| {
                ap(&h(N, I)(x), &ho(StabHomotopy::O1))
                    .add(&ap(&ho(StabHomotopy::O1X2)(x), &d(N, N)))
                    .add(&ap(&d(N, N)(x), &ho(StabHomotopy::O1X2)))
            },
            gen,
        ),
    );
    push(
        "e4 d_I^I = d[V1] e4",
        check_identity(
            "e4 d_I^I = d[V1] e4",
            is,
            |x| e4_elem(labels, &d(I, I)(x)).expect("I-states"),
            |x| promoted_differential(&cg, labels, &e4(labels, x).expect("I-state")),
        ),
    );
    push(
        "(V1 + V2) e4 = e4 H_X2^I d_I^N",
        check_identity(
            "(V1 + V2) e4 = e4 H_X2^I d_I^N",
            is,
            |x| e4_elem(labels, &v1v2(x)).expect("I-state"),
            |x| e4_elem(labels, &ap(&d(I, N)(x), &h(N, I))).expect("I-states"),
        ),
    );
    let touches = enumerate_states(gp).iter().find_map(|x| {
        crate::cover::h_xi_classes(cp, labels.x2, x)
            .into_iter()
            .find(|r| !class_touches_c(cp, labels, r))
            .map(|r| Witness {
                identity: "H_X2 classes touch c".into(),
                source: x.to_string(),
                target: r.to4.to_string(),
                monomial: format!("rectangle at {:?} of size {}x{}", r.sw, r.w, r.h),
            })
    });
    push("H_X2 classes touch c", touches);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labels_of_stabilized_unknot() {
        let g = GridDiagram::new(vec![0, 1], vec![1, 0]).unwrap();
        let (gp, l) = stabilize_xsw(&g, 0).unwrap();
        assert_eq!(gp.n(), 3);
        assert_eq!(gp.o(l.o1), l.c.1);
        assert_eq!(gp.x(l.x2) + 1, gp.o(l.o1));
        assert_eq!(gp.x(l.x1), l.c.1);
        let sp = splitting(&gp, &l);
        assert_eq!((sp.i_states.len(), sp.n_states.len()), (2, 4));
    }

    #[test]
    fn column_out_of_range() {
        let g = GridDiagram::new(vec![0, 1], vec![1, 0]).unwrap();
        assert!(matches!(stabilize_xsw(&g, 2), Err(Error::InvalidColumn(_))));
    }
}
