//! The 4-fold cover 𝔾₄: a 2n×2n torus carrying four lifts of every marking
//! and of every state point. Rectangles and domains are taken up to the deck
//! translations by `(n,0)` and `(0,n)`.

use std::collections::BTreeMap;

use crate::chain::{ChainElement, Monomial};
use crate::error::{Error, Result};
use crate::grid::{GridDiagram, GridState};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverDiagram {
    base: GridDiagram,
    side: usize,
    o_lifts: Vec<[(usize, usize); 4]>,
    x_lifts: Vec<[(usize, usize); 4]>,
}

pub fn build_cover(g: &GridDiagram) -> CoverDiagram {
    let n = g.n();
    let lift = |c: usize, r: usize| [(c, r), (c + n, r), (c, r + n), (c + n, r + n)];
    CoverDiagram {
        base: g.clone(),
        side: 2 * n,
        o_lifts: (0..n).map(|i| lift(i, g.o(i))).collect(),
        x_lifts: (0..n).map(|i| lift(i, g.x(i))).collect(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MValue {
    Defined(u32),
    Undefined,
}

impl MValue {
    pub fn defined(self) -> Option<u32> {
        match self {
            MValue::Defined(m) => Some(m),
            MValue::Undefined => None,
        }
    }
}

/// Exact quarter-integer, stored as four times its value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Quarter(pub i64);

impl Quarter {
    pub fn as_f64(self) -> f64 {
        self.0 as f64 / 4.0
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RectClass4 {
    /// Canonical lower-left corner: column and row in `[0, n)`.
    pub sw: (usize, usize),
    pub w: usize,
    pub h: usize,
    pub from4: GridState,
    pub to4: GridState,
    pub o_mult: Vec<u8>,
    pub x_mult: Vec<u8>,
    pub m_value: MValue,
}

impl RectClass4 {
    pub fn x_total(&self) -> u32 {
        self.x_mult.iter().map(|&v| v as u32).sum()
    }

    pub fn o_total(&self) -> u32 {
        self.o_mult.iter().map(|&v| v as u32).sum()
    }

    pub fn x_free(&self) -> bool {
        self.x_mult.iter().all(|&v| v == 0)
    }

    pub fn k(&self) -> Vec<u32> {
        self.o_mult.iter().map(|&v| v as u32).collect()
    }
}

/// Integer multiplicities on the squares of the 2n×2n torus, with the
/// endpoints of the domain and the number of rectangle factors it is built from.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Domain4 {
    pub side: usize,
    pub mult: Vec<i32>,
    pub from4: GridState,
    pub to4: GridState,
    pub factors: u32,
}

impl Domain4 {
    pub fn zero(side: usize, from4: GridState, to4: GridState) -> Self {
        Domain4 { side, mult: vec![0; side * side], from4, to4, factors: 0 }
    }

    pub fn at(&self, col: usize, row: usize) -> i32 {
        let s = self.side;
        self.mult[(row % s) * s + col % s]
    }

    fn at_mut(&mut self, col: usize, row: usize) -> &mut i32 {
        let s = self.side;
        &mut self.mult[(row % s) * s + col % s]
    }

    /// Translate by `(dc, dr)` on the cover.
    pub fn translated(&self, dc: usize, dr: usize) -> Domain4 {
        let s = self.side;
        let mut out = self.clone();
        for r in 0..s {
            for c in 0..s {
                *out.at_mut(c + dc, r + dr) = self.at(c, r);
            }
        }
        out
    }

    /// Rows bottom first, so the top row is printed last.
    pub fn dump_matrix(&self) -> Vec<Vec<i32>> {
        (0..self.side).map(|r| (0..self.side).map(|c| self.at(c, r)).collect()).collect()
    }

    /// `m[ψ] = (p_from + p_to − factors)/2`, when that is an integer.
    pub fn m_value(&self, c: &CoverDiagram) -> Option<i64> {
        let p = point_measure(c, &self.from4, self).0 + point_measure(c, &self.to4, self).0;
        let num = p - 4 * self.factors as i64;
        (num % 8 == 0).then_some(num / 8)
    }
}

impl CoverDiagram {
    pub fn base(&self) -> &GridDiagram {
        &self.base
    }

    pub fn side(&self) -> usize {
        self.side
    }

    pub fn n(&self) -> usize {
        self.base.n()
    }

    pub fn o_lifts(&self, i: usize) -> &[(usize, usize); 4] {
        &self.o_lifts[i]
    }

    pub fn x_lifts(&self, i: usize) -> &[(usize, usize); 4] {
        &self.x_lifts[i]
    }

    /// The 4n lattice points over a base state.
    pub fn lift_state(&self, x: &GridState) -> Vec<(usize, usize)> {
        let n = self.n();
        let mut pts = Vec::with_capacity(4 * n);
        for i in 0..n {
            let r = x.row(i);
            for (dc, dr) in [(0, 0), (n, 0), (0, n), (n, n)] {
                pts.push((i + dc, r + dr));
            }
        }
        pts
    }

    /// Whether `(col, row)` of the cover lies over a point of `x`.
    pub fn in_lift(&self, x: &GridState, col: usize, row: usize) -> bool {
        let n = self.n();
        x.row(col % n) == row % n
    }

    /// Project a marking lift back to the base: `(column, row)` mod n.
    pub fn project(&self, p: (usize, usize)) -> (usize, usize) {
        (p.0 % self.n(), p.1 % self.n())
    }

    /// Multiplicities, canonical corner and m for one rectangle on the cover.
    pub fn rect_class(
        &self,
        sw: (usize, usize),
        w: usize,
        h: usize,
        from4: &GridState,
        to4: &GridState,
    ) -> RectClass4 {
        let n = self.n();
        let s = self.side;
        let inside = |p: &(usize, usize)| (p.0 + s - sw.0 % s) % s < w && (p.1 + s - sw.1 % s) % s < h;
        let count = |lifts: &[(usize, usize); 4]| lifts.iter().filter(|p| inside(p)).count() as u8;
        let o_mult = self.o_lifts.iter().map(count).collect();
        let x_mult = self.x_lifts.iter().map(count).collect();
        let m_value = if from4 == to4 {
            MValue::Undefined
        } else {
            let p = rect_point_measure(self, from4, sw, w, h) + rect_point_measure(self, to4, sw, w, h);
            let num = p - 4;
            debug_assert!(num >= 0 && num % 8 == 0, "m must be a nonnegative integer");
            MValue::Defined((num / 8) as u32)
        };
        RectClass4 {
            sw: (sw.0 % n, sw.1 % n),
            w,
            h,
            from4: from4.clone(),
            to4: to4.clone(),
            o_mult,
            x_mult,
            m_value,
        }
    }

    /// The representative of a class as a domain.
    pub fn rect_domain(&self, r: &RectClass4) -> Domain4 {
        let mut d = Domain4::zero(self.side, r.from4.clone(), r.to4.clone());
        for dc in 0..r.w {
            for dr in 0..r.h {
                *d.at_mut(r.sw.0 + dc, r.sw.1 + dr) += 1;
            }
        }
        d.factors = 1;
        d
    }

    /// The class `∂(∂_α ·)` condition summed over the four translates, with
    /// the extra requirement that SW/NE corners lie over `x` and NW/SE corners
    /// over `y`.
    pub fn satisfies_class_boundary(
        &self,
        sw: (usize, usize),
        w: usize,
        h: usize,
        x: &GridState,
        y: &GridState,
    ) -> bool {
        let s = self.side;
        let n = self.n();
        let (a, b) = sw;
        let corner = |dc: usize, dr: usize| ((a + dc) % s, (b + dr) % s);
        let (swp, sep, nwp, nep) = (corner(0, 0), corner(w, 0), corner(0, h), corner(w, h));
        if !(self.in_lift(x, swp.0, swp.1)
            && self.in_lift(x, nep.0, nep.1)
            && self.in_lift(y, nwp.0, nwp.1)
            && self.in_lift(y, sep.0, sep.1))
        {
            return false;
        }
        let mut chain: BTreeMap<(usize, usize), i32> = BTreeMap::new();
        for (tc, tr) in [(0, 0), (n, 0), (0, n), (n, n)] {
            let t = |p: (usize, usize)| ((p.0 + tc) % s, (p.1 + tr) % s);
            *chain.entry(t(sep)).or_default() += 1;
            *chain.entry(t(nwp)).or_default() += 1;
            *chain.entry(t(swp)).or_default() -= 1;
            *chain.entry(t(nep)).or_default() -= 1;
        }
        for p in self.lift_state(y) {
            *chain.entry(p).or_default() -= 1;
        }
        for p in self.lift_state(x) {
            *chain.entry(p).or_default() += 1;
        }
        chain.values().all(|&v| v == 0)
    }
}

fn rect_point_measure(c: &CoverDiagram, w4: &GridState, sw: (usize, usize), w: usize, h: usize) -> i64 {
    let s = c.side;
    let inside = |col: usize, row: usize| (col + s - sw.0 % s) % s < w && (row + s - sw.1 % s) % s < h;
    let mut total = 0;
    for (pc, pr) in c.lift_state(w4) {
        for (dc, dr) in [(0, 0), (s - 1, 0), (0, s - 1), (s - 1, s - 1)] {
            if inside((pc + dc) % s, (pr + dr) % s) {
                total += 1;
            }
        }
    }
    total
}

/// `p_w(ψ)`: sum over the 4n lifted points of the average multiplicity of the
/// four adjacent squares.
pub fn point_measure(c: &CoverDiagram, w4: &GridState, d: &Domain4) -> Quarter {
    let s = c.side;
    let mut total = 0i64;
    for (pc, pr) in c.lift_state(w4) {
        for (dc, dr) in [(0, 0), (s - 1, 0), (0, s - 1), (s - 1, s - 1)] {
            total += d.at(pc + dc, pr + dr) as i64;
        }
    }
    Quarter(total)
}

/// Literal enumeration over every rectangle of the 2n×2n torus.
pub fn enumerate_rect_classes(c: &CoverDiagram, x4: &GridState, y4: &GridState) -> Vec<RectClass4> {
    let s = c.side;
    let mut out = BTreeMap::new();
    for a in 0..s {
        for b in 0..s {
            for w in 1..s {
                for h in 1..s {
                    if c.satisfies_class_boundary((a, b), w, h, x4, y4) {
                        let r = c.rect_class((a, b), w, h, x4, y4);
                        out.insert((r.sw, r.w, r.h), r);
                    }
                }
            }
        }
    }
    out.into_values().collect()
}

/// All classes leaving `x4`, generated from the corner placements: eight per
/// transposition and the n squares returning to `x4`.
pub fn rect_classes_from(c: &CoverDiagram, x4: &GridState) -> Vec<RectClass4> {
    let n = c.n();
    let mut out = Vec::with_capacity(4 * n * n + n);
    for c1 in 0..n {
        for c2 in c1 + 1..n {
            let y = x4.swapped(c1, c2);
            out.extend(classes_between_transposed(c, x4, &y, c1, c2));
        }
    }
    for i in 0..n {
        out.push(c.rect_class((i, x4.row(i)), n, n, x4, x4));
    }
    out
}

fn classes_between_transposed(
    c: &CoverDiagram,
    x: &GridState,
    y: &GridState,
    c1: usize,
    c2: usize,
) -> Vec<RectClass4> {
    let n = c.n();
    let (r1, r2) = (x.row(c1), x.row(c2));
    let mut out = Vec::with_capacity(8);
    for (sw, w0, h0) in [
        ((c1, r1), c2 - c1, (r2 + n - r1) % n),
        ((c2, r2), n - (c2 - c1), (r1 + n - r2) % n),
    ] {
        for w in [w0, w0 + n] {
            for h in [h0, h0 + n] {
                debug_assert!(c.satisfies_class_boundary(sw, w, h, x, y));
                out.push(c.rect_class(sw, w, h, x, y));
            }
        }
    }
    out
}

/// Classes from `x4` to `y4`, by corner placement.
pub fn rect_classes_between(c: &CoverDiagram, x4: &GridState, y4: &GridState) -> Vec<RectClass4> {
    if x4 == y4 {
        let n = c.n();
        return (0..n).map(|i| c.rect_class((i, x4.row(i)), n, n, x4, x4)).collect();
    }
    let d = x4.diff_columns(y4);
    if d.len() != 2 || x4.swapped(d[0], d[1]) != *y4 {
        return Vec::new();
    }
    let mut v = classes_between_transposed(c, x4, y4, d[0], d[1]);
    v.sort();
    v
}

pub trait AsDomain4 {
    fn domain(&self, c: &CoverDiagram) -> Result<Domain4>;
}

impl AsDomain4 for RectClass4 {
    fn domain(&self, c: &CoverDiagram) -> Result<Domain4> {
        if self.m_value == MValue::Undefined {
            return Err(Error::IncomposableFactor);
        }
        Ok(c.rect_domain(self))
    }
}

impl AsDomain4 for Domain4 {
    fn domain(&self, _c: &CoverDiagram) -> Result<Domain4> {
        Ok(self.clone())
    }
}

/// Pointwise sum of the representatives of `a` and then `b`.
pub fn compose_domains<A: AsDomain4, B: AsDomain4>(c: &CoverDiagram, a: &A, b: &B) -> Result<Domain4> {
    let da = a.domain(c)?;
    let db = b.domain(c)?;
    if da.to4 != db.from4 {
        return Err(Error::IncomposableStates(format!(
            "first domain ends at {} but second starts at {}",
            da.to4, db.from4
        )));
    }
    let mut out = da.clone();
    for (o, v) in out.mult.iter_mut().zip(&db.mult) {
        *o += v;
    }
    out.to4 = db.to4.clone();
    out.factors = da.factors + db.factors;
    Ok(out)
}

/// O- and X-multiplicities of an arbitrary domain.
pub fn domain_mults(c: &CoverDiagram, d: &Domain4) -> (Vec<i32>, Vec<i32>) {
    let count = |lifts: &[(usize, usize); 4]| lifts.iter().map(|&(a, b)| d.at(a, b)).sum();
    (c.o_lifts.iter().map(count).collect(), c.x_lifts.iter().map(count).collect())
}

fn monomial_of(r: &RectClass4) -> Monomial {
    Monomial::new(r.to4.clone(), r.k(), r.m_value.defined().expect("defined m"))
}

/// `∂₄•`: classes disjoint from the X-lifts.
pub fn differential4(c: &CoverDiagram, x4: &GridState) -> ChainElement {
    rect_classes_from(c, x4).iter().filter(|r| r.x_free()).map(monomial_of).collect()
}

pub fn differential4_elem(c: &CoverDiagram, e: &ChainElement) -> ChainElement {
    e.apply(|s| differential4(c, s))
}

/// `J₄`: each base state goes to its lift; exponents are untouched.
pub fn j4(e: &ChainElement) -> ChainElement {
    e.clone()
}

/// Classes with `X_i = 1` and every other X-multiplicity zero.
pub fn h_xi_classes(c: &CoverDiagram, i: usize, x4: &GridState) -> Vec<RectClass4> {
    rect_classes_from(c, x4)
        .into_iter()
        .filter(|r| r.m_value != MValue::Undefined)
        .filter(|r| r.x_mult.iter().enumerate().all(|(j, &v)| if j == i { v == 1 } else { v == 0 }))
        .collect()
}

/// `H•_{X_i}`: the homotopy between the two O-variables adjacent to `X_i`.
pub fn h_xi(c: &CoverDiagram, i: usize, x4: &GridState) -> ChainElement {
    h_xi_classes(c, i, x4).iter().map(monomial_of).collect()
}

pub fn h_xi_elem(c: &CoverDiagram, i: usize, e: &ChainElement) -> ChainElement {
    e.apply(|s| h_xi(c, i, s))
}
