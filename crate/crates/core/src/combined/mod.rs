//! Combined diagrams for commutation and switch moves, with pentagon and
//! hexagon counts on the 4-fold cover and the maps they define.
//!
//! Geometry lives on a fine lattice: circle `j` of the grid sits at fine
//! coordinate `4j`. The vertical circle between the two moved columns is
//! `beta`; its replacement `gamma` runs three fine units east of it across
//! the rows of one column and three units west elsewhere, switching sides
//! along short horizontal segments through the crossings `a` (bottom of the
//! east bigon) and `b` (top).

mod region;

use std::collections::{BTreeMap, HashMap, HashSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use region::{Corner, CornerKind, Curve, Region, Space, SwitchCount};
use region::{regions_over, Ends};

use crate::chain::{ChainElement, Monomial};
use crate::cover::{build_cover, differential4, rect_classes_between, CoverDiagram, MValue, RectClass4};
use crate::error::{Error, Result};
use crate::grid::{enumerate_states, gradings, rectangles, GridDiagram, GridState};
use crate::verify::{check_identity, check_zero, format_coefficient, Witness};

pub(crate) const SCALE: i64 = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MoveKind {
    Commutation,
    Switch,
}

/// Pentagon direction: `Forward` runs from a state of `G` to a state of
/// `G'` and has its fifth corner at `a`; `Backward` is the reverse, at `b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    Forward,
    Backward,
}

/// Which diagram a hexagon's endpoints belong to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    G,
    Gp,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PolyKind {
    Pentagon(Direction),
    Hexagon(Side),
}

/// A class of pentagons or hexagons on the cover (or a single one on the base).
#[derive(Clone, Debug)]
pub struct PolyClass {
    pub kind: PolyKind,
    pub region: Region,
    pub from: GridState,
    pub to: GridState,
    /// Straightened rectangle: lower-left corner, width, height (coarse units).
    pub coarse: ((usize, usize), usize, usize),
    /// Marking multiplicities indexed by the columns of `G`.
    pub o_mult: Vec<u8>,
    pub x_mult: Vec<u8>,
    pub m: u32,
    /// Number of whole bigons inside the region.
    pub bigons: usize,
}

pub type PentClass = PolyClass;
pub type HexClass = PolyClass;

impl PolyClass {
    pub fn x_free(&self) -> bool {
        self.x_mult.iter().all(|&v| v == 0)
    }

    pub fn o_total(&self) -> u32 {
        self.o_mult.iter().map(|&v| v as u32).sum()
    }

    pub fn contains_bigon(&self) -> bool {
        self.bigons > 0
    }

    fn monomial(&self) -> Monomial {
        Monomial::new(self.to.clone(), self.o_mult.iter().map(|&v| v as u32).collect(), self.m)
    }
}

#[derive(Clone, Debug)]
pub struct CombinedDiagram {
    g: GridDiagram,
    gp: GridDiagram,
    col: usize,
    v: usize,
    kind: MoveKind,
    /// Fine heights of `a` and `b` on the base.
    pub(crate) h_a: i64,
    pub(crate) h_b: i64,
    o_cells: Vec<(i64, i64)>,
    x_cells: Vec<(i64, i64)>,
    cg: CoverDiagram,
    cgp: CoverDiagram,
    /// Column of `G'` to the column of `G` holding the same marking.
    phys: Vec<usize>,
}

fn in_cyclic_open(p: usize, s: usize, t: usize, n: usize) -> bool {
    let d = (p + n - s) % n;
    d > 0 && d < (t + n - s) % n
}

/// Builds the combined diagram for exchanging columns `col` and `col + 1`.
pub fn build_commutation(g: &GridDiagram, col: usize, kind: MoveKind) -> Result<CombinedDiagram> {
    let n = g.n();
    if col >= n {
        return Err(Error::InvalidColumn(format!("column {col} out of range for n = {n}")));
    }
    let c = col;
    let v = (c + 1) % n;
    let (p, q) = (g.o(c), g.x(c));
    let (s, t) = (g.o(v), g.x(v));
    let shared: Vec<usize> = [p, q].into_iter().filter(|r| *r == s || *r == t).collect();
    // (lo, hi): cyclic row interval holding the markings of column c + 1 and
    // no unshared marking of column c.
    let (lo, hi) = match (kind, shared.len()) {
        (MoveKind::Commutation, 0) => {
            let (ip, iq) = (in_cyclic_open(p, s, t, n), in_cyclic_open(q, s, t, n));
            if ip != iq {
                return Err(Error::IllegalCommutation(format!("markings of columns {c} and {v} interleave")));
            }
            if ip {
                (t, s)
            } else {
                (s, t)
            }
        }
        (MoveKind::Switch, 1) => {
            let r = shared[0];
            let other_c = if p == r { q } else { p };
            let other_v = if s == r { t } else { s };
            if in_cyclic_open(other_c, r, other_v, n) {
                (other_v, r)
            } else {
                (r, other_v)
            }
        }
        (MoveKind::Commutation, k) => {
            return Err(Error::IllegalCommutation(format!("columns {c} and {v} share {k} marking rows")))
        }
        (MoveKind::Switch, k) => {
            return Err(Error::IllegalCommutation(format!(
                "a switch needs exactly one shared row, columns {c} and {v} share {k}"
            )))
        }
    };
    let shared_row = shared.first().copied();
    let h_a = SCALE * lo as i64 + if shared_row == Some(lo) { 2 } else { 1 };
    let h_b = SCALE * hi as i64 + if shared_row == Some(hi) { 2 } else { 3 };
    let base = SCALE * n as i64;
    let cell = |i: usize, row: usize| -> (i64, i64) {
        let vx = SCALE * v as i64;
        let x = if i == c {
            (vx - 2).rem_euclid(base)
        } else if i == v {
            vx + 1
        } else {
            SCALE * i as i64 + 1
        };
        let mut y = SCALE * row as i64 + 1;
        if shared_row == Some(row) {
            let east = i == v;
            let above = if row == lo { east } else { !east };
            y = SCALE * row as i64 + if above { 2 } else { 1 };
        }
        (x, y)
    };
    let gp = g.swap_columns(c);
    let mut phys: Vec<usize> = (0..n).collect();
    phys.swap(c, v);
    let cd = CombinedDiagram {
        g: g.clone(),
        cg: build_cover(g),
        cgp: build_cover(&gp),
        gp,
        col: c,
        v,
        kind,
        h_a,
        h_b,
        o_cells: (0..n).map(|i| cell(i, g.o(i))).collect(),
        x_cells: (0..n).map(|i| cell(i, g.x(i))).collect(),
        phys,
    };
    for cells in [&cd.o_cells, &cd.x_cells] {
        for i in [c, v] {
            let (_, y) = cells[i];
            if cd.bulge(y) != (i == v) {
                return Err(Error::InvalidDiagram(format!("marking of column {i} on the wrong side of gamma")));
            }
        }
    }
    Ok(cd)
}

/// Commutation of rows `row` and `row + 1`, via the transposed diagram.
pub fn build_row_commutation(g: &GridDiagram, row: usize, kind: MoveKind) -> Result<CombinedDiagram> {
    build_commutation(&g.transpose(), row, kind)
}

/// The diagram after exchanging rows `row` and `row + 1`.
pub fn commute_rows(g: &GridDiagram, row: usize, kind: MoveKind) -> Result<GridDiagram> {
    let cd = build_row_commutation(g, row, kind)?;
    Ok(cd.gp().transpose())
}

impl CombinedDiagram {
    pub fn g(&self) -> &GridDiagram {
        &self.g
    }

    pub fn gp(&self) -> &GridDiagram {
        &self.gp
    }

    pub fn n(&self) -> usize {
        self.g.n()
    }

    pub fn col(&self) -> usize {
        self.col
    }

    pub fn kind(&self) -> MoveKind {
        self.kind
    }

    pub fn cover(&self) -> &CoverDiagram {
        &self.cg
    }

    pub fn cover_p(&self) -> &CoverDiagram {
        &self.cgp
    }

    /// Column permutation taking indices of `G'` to indices of `G`.
    pub fn physical(&self) -> &[usize] {
        &self.phys
    }

    /// Fine heights of the crossings `a` and `b`.
    pub fn crossings(&self) -> (i64, i64) {
        (self.h_a, self.h_b)
    }

    fn base_size(&self) -> i64 {
        SCALE * self.n() as i64
    }

    pub fn space(&self, cover: bool) -> Space {
        Space { copies: if cover { 2 } else { 1 }, base: self.base_size() }
    }

    /// Whether fine row (or height) `y` lies in the east bigon.
    pub(crate) fn bulge(&self, y: i64) -> bool {
        let b = self.base_size();
        (y - self.h_a).rem_euclid(b) < (self.h_b - self.h_a).rem_euclid(b)
    }

    pub(crate) fn gamma_offset(&self, y: i64) -> i64 {
        if self.bulge(y) {
            3
        } else {
            -3
        }
    }

    pub(crate) fn is_special_line(&self, x: i64) -> bool {
        x.rem_euclid(self.base_size()) == SCALE * self.v as i64
    }

    /// Fine points of a state and all its lifts in `space`.
    pub fn state_points(&self, x: &GridState, on_gamma: bool, space: Space) -> Vec<(i64, i64)> {
        let s = space.size();
        let mut out = Vec::new();
        for j in 0..self.n() {
            let y = SCALE * x.row(j) as i64;
            let mut px = SCALE * j as i64;
            if on_gamma && j == self.v {
                px += self.gamma_offset(y);
            }
            for (tx, ty) in space.translates() {
                out.push(((px + tx).rem_euclid(s), (y + ty).rem_euclid(s)));
            }
        }
        out
    }

    fn marking_mults(&self, r: &Region, space: Space) -> (Vec<u8>, Vec<u8>) {
        let count = |cells: &[(i64, i64)]| {
            cells
                .iter()
                .map(|&(x, y)| space.translates().iter().filter(|(tx, ty)| r.contains(x + tx, y + ty)).count() as u8)
                .collect()
        };
        (count(&self.o_cells), count(&self.x_cells))
    }

    /// Every bigon between `beta` and `gamma` in `space`, as cell lists.
    pub fn bigons(&self, space: Space) -> Vec<Vec<(i64, i64)>> {
        let b = self.base_size();
        let s = space.size();
        let len = (self.h_b - self.h_a).rem_euclid(b);
        let mut out = Vec::new();
        for (tx, ty) in space.translates() {
            let line = SCALE * self.v as i64 + tx;
            let east: Vec<_> = (0..len)
                .flat_map(|dy| (0..3).map(move |dx| ((line + dx).rem_euclid(s), (self.h_a + ty + dy).rem_euclid(s))))
                .collect();
            let west: Vec<_> = (0..b - len)
                .flat_map(|dy| (1..=3).map(move |dx| ((line - dx).rem_euclid(s), (self.h_b + ty + dy).rem_euclid(s))))
                .collect();
            out.push(east);
            out.push(west);
        }
        out
    }

    /// Markings inside a set of cells: `(O count, X count)`.
    pub fn markings_in(&self, cells: &[(i64, i64)], space: Space) -> (usize, usize) {
        let set: HashSet<_> = cells.iter().copied().collect();
        let s = space.size();
        let count = |ms: &[(i64, i64)]| {
            ms.iter()
                .flat_map(|&(x, y)| space.translates().into_iter().map(move |(tx, ty)| ((x + tx) % s, (y + ty) % s)))
                .filter(|p| set.contains(p))
                .count()
        };
        (count(&self.o_cells), count(&self.x_cells))
    }

    fn gp_to_phys(&self, e: &ChainElement) -> ChainElement {
        e.relabel_vars(&self.phys, self.n())
    }

    /// Differential of `G` on the cover.
    pub fn d(&self, x: &GridState) -> ChainElement {
        differential4(&self.cg, x)
    }

    /// Differential of `G'` on the cover, with variables named by the columns of `G`.
    pub fn d_p(&self, x: &GridState) -> ChainElement {
        self.gp_to_phys(&differential4(&self.cgp, x))
    }
}

fn boundary_chain(from: &[(i64, i64)], to: &[(i64, i64)]) -> BTreeMap<(i64, i64), i32> {
    let mut m = BTreeMap::new();
    for p in from {
        *m.entry(*p).or_insert(0) -= 1;
    }
    for p in to {
        *m.entry(*p).or_insert(0) += 1;
    }
    m.retain(|_, v| *v != 0);
    m
}

/// Polygons of the given kind from `from` to `to`, on the cover or the base torus.
pub fn enumerate_polygons(
    cd: &CombinedDiagram,
    kind: PolyKind,
    from: &GridState,
    to: &GridState,
    cover: bool,
) -> Vec<PolyClass> {
    let space = cd.space(cover);
    let (from_gamma, to_gamma, want) = match kind {
        PolyKind::Pentagon(Direction::Forward) => (false, true, SwitchCount { a: 1, b: 0 }),
        PolyKind::Pentagon(Direction::Backward) => (true, false, SwitchCount { a: 0, b: 1 }),
        PolyKind::Hexagon(Side::G) => (false, false, SwitchCount { a: 1, b: 1 }),
        PolyKind::Hexagon(Side::Gp) => (true, true, SwitchCount { a: 1, b: 1 }),
    };
    let fp = cd.state_points(from, from_gamma, space);
    let tp = cd.state_points(to, to_gamma, space);
    let boundary = boundary_chain(&fp, &tp);
    let from_pts: HashSet<_> = fp.into_iter().collect();
    let to_pts: HashSet<_> = tp.into_iter().collect();
    let curve = |g: bool| if g { Curve::Gamma } else { Curve::Beta };
    let ends = Ends { from_pts: &from_pts, to_pts: &to_pts, from_curve: curve(from_gamma), to_curve: curve(to_gamma), boundary: &boundary };
    // Coarse rectangles between the straightened endpoints, with m.
    let coarse: Vec<((usize, usize), usize, usize, u32)> = if from == to {
        Vec::new()
    } else if cover {
        rect_classes_between(&cd.cg, from, to)
            .into_iter()
            .map(|r| match r.m_value {
                MValue::Defined(m) => (r.sw, r.w, r.h, m),
                MValue::Undefined => unreachable!("distinct endpoints"),
            })
            .collect()
    } else {
        rectangles(&cd.g, from, to).into_iter().map(|r| (r.sw, r.w, r.h, r.m)).collect()
    };
    let bigons = cd.bigons(space);
    let mut out = Vec::new();
    for (sw, w, h, m) in coarse {
        for region in regions_over(cd, space, &ends, sw, w, h, want) {
            let (o_mult, x_mult) = cd.marking_mults(&region, space);
            let nb = bigons.iter().filter(|b| b.iter().all(|&(x, y)| region.contains(x, y))).count();
            out.push(PolyClass {
                kind,
                region,
                from: from.clone(),
                to: to.clone(),
                coarse: (sw, w, h),
                o_mult,
                x_mult,
                m,
                bigons: nb,
            });
        }
    }
    out
}

/// Pentagon classes from `x` (a state of `G`) to `y` (a state of `G'`) for
/// `Forward`, or from `x` in `G'` to `y` in `G` for `Backward`.
pub fn enumerate_pentagons(cd: &CombinedDiagram, x: &GridState, y: &GridState, dir: Direction) -> Vec<PentClass> {
    enumerate_polygons(cd, PolyKind::Pentagon(dir), x, y, true)
}

pub fn enumerate_hexagons(cd: &CombinedDiagram, x: &GridState, y: &GridState, side: Side) -> Vec<HexClass> {
    enumerate_polygons(cd, PolyKind::Hexagon(side), x, y, true)
}

/// Pentagons or hexagons leaving `x`, over all targets.
pub fn polygons_from(cd: &CombinedDiagram, kind: PolyKind, x: &GridState, cover: bool) -> Vec<PolyClass> {
    let n = cd.n();
    (0..n)
        .filter(|&j| j != cd.v)
        .flat_map(|j| enumerate_polygons(cd, kind, x, &x.swapped(j, cd.v), cover))
        .collect()
}

/// The rectangle obtained by replacing every `gamma` (resp. `beta`) arc of
/// the boundary by the parallel `beta` (resp. `gamma`) arc; the region must
/// agree with it outside the bigons.
pub fn straighten(cd: &CombinedDiagram, p: &PolyClass) -> Result<RectClass4> {
    let cover = p.region.space_size == cd.space(true).size();
    if !cover {
        return Err(Error::NotStraightenable("base torus regions are not classes on the cover".into()));
    }
    let space = cd.space(true);
    let on_gamma = matches!(p.kind, PolyKind::Hexagon(Side::Gp));
    let (sw, w, h) = p.coarse;
    let y0 = SCALE * sw.1 as i64;
    let xl = SCALE * sw.0 as i64;
    let xr = xl + SCALE * w as i64;
    let side_x = |line: i64, y: i64| if on_gamma && cd.is_special_line(line) { line + cd.gamma_offset(y) } else { line };
    let rows = SCALE * h as i64;
    let straight = Region {
        space_size: space.size(),
        y0,
        left: (0..rows).map(|dy| side_x(xl, y0 + dy)).collect(),
        right: (0..rows).map(|dy| side_x(xr, y0 + dy)).collect(),
        corners: Vec::new(),
    };
    let in_bigon: HashSet<(i64, i64)> = cd.bigons(space).into_iter().flatten().collect();
    let s = space.size();
    for y in 0..s {
        for x in 0..s {
            if !in_bigon.contains(&(x, y)) && p.region.contains(x, y) != straight.contains(x, y) {
                return Err(Error::NotStraightenable(format!("region and rectangle differ at fine cell ({x}, {y})")));
            }
        }
    }
    let (from, to) = match p.kind {
        PolyKind::Pentagon(_) | PolyKind::Hexagon(_) => (&p.from, &p.to),
    };
    let cover_d = if on_gamma { &cd.cgp } else { &cd.cg };
    Ok(cover_d.rect_class(sw, w, h, from, to))
}

fn poly_map(cd: &CombinedDiagram, kind: PolyKind, x: &GridState) -> ChainElement {
    let mut out = ChainElement::zero();
    for p in polygons_from(cd, kind, x, true) {
        if p.x_free() {
            out.toggle(p.monomial());
        }
    }
    out
}

/// `P` (forward, `G -> G'`) or `P'` (backward, `G' -> G`) on a generator.
pub fn p_map(cd: &CombinedDiagram, dir: Direction, x: &GridState) -> ChainElement {
    poly_map(cd, PolyKind::Pentagon(dir), x)
}

/// `H` (on `G`) or `H'` (on `G'`) on a generator.
pub fn h_map(cd: &CombinedDiagram, side: Side, x: &GridState) -> ChainElement {
    poly_map(cd, PolyKind::Hexagon(side), x)
}

/// `P`, `P'`, `H`, `H'` tabulated on every generator.
pub struct CommutationMaps {
    pub p: HashMap<GridState, ChainElement>,
    pub pp: HashMap<GridState, ChainElement>,
    pub h: HashMap<GridState, ChainElement>,
    pub hp: HashMap<GridState, ChainElement>,
}

impl CommutationMaps {
    pub fn new(cd: &CombinedDiagram) -> Self {
        let states = enumerate_states(cd.g());
        let table = |kind: PolyKind| -> HashMap<GridState, ChainElement> {
            states.par_iter().map(|x| (x.clone(), poly_map(cd, kind, x))).collect()
        };
        CommutationMaps {
            p: table(PolyKind::Pentagon(Direction::Forward)),
            pp: table(PolyKind::Pentagon(Direction::Backward)),
            h: table(PolyKind::Hexagon(Side::G)),
            hp: table(PolyKind::Hexagon(Side::Gp)),
        }
    }
}

fn lookup<'a>(t: &'a HashMap<GridState, ChainElement>) -> impl Fn(&GridState) -> ChainElement + Sync + 'a {
    move |x| t[x].clone()
}

/// Chain-map and homotopy identities for the commutation maps, with count
/// and grading contracts. Each entry is a name and the first failure.
pub fn commutation_identities(cd: &CombinedDiagram) -> Vec<(String, Option<Witness>)> {
    let maps = CommutationMaps::new(cd);
    let states = enumerate_states(cd.g());
    let (p, pp, h, hp) = (lookup(&maps.p), lookup(&maps.pp), lookup(&maps.h), lookup(&maps.hp));
    let d = |x: &GridState| cd.d(x);
    let dp = |x: &GridState| cd.d_p(x);
    let mut out = Vec::new();
    out.push(count_contract(cd));
    out.push(base_lift_check(cd, &states));
    out.push(grading_check(cd, &states));
    out.push((
        "d' P + P d = 0".to_string(),
        check_zero("d' P + P d = 0", &states, |x| p(x).apply(dp).add(&d(x).apply(&p))),
    ));
    out.push((
        "d P' + P' d' = 0".to_string(),
        check_zero("d P' + P' d' = 0", &states, |x| pp(x).apply(d).add(&dp(x).apply(&pp))),
    ));
    let n = cd.n();
    let name = "d H + H d + P' P = Id";
    out.push((
        name.to_string(),
        check_identity(
            name,
            &states,
            |x| h(x).apply(d).add(&d(x).apply(&h)).add(&p(x).apply(&pp)),
            |x| ChainElement::generator(x.clone(), n),
        ),
    ));
    let name = "d' H' + H' d' + P P' = Id";
    out.push((
        name.to_string(),
        check_identity(
            name,
            &states,
            |x| hp(x).apply(dp).add(&dp(x).apply(&hp)).add(&pp(x).apply(&p)),
            |x| ChainElement::generator(x.clone(), n),
        ),
    ));
    out
}

fn witness(identity: &str, from: &GridState, to: &GridState, detail: String) -> Witness {
    Witness { identity: identity.to_string(), source: from.to_string(), target: to.to_string(), monomial: detail }
}

/// Pentagon classes: 1 over an empty base pair, otherwise 3 with exactly 2
/// containing a bigon. Hexagons over a nonempty base pair: 4 classes, 3 with
/// a bigon, at most one X-free.
pub fn count_contract(cd: &CombinedDiagram) -> (String, Option<Witness>) {
    let states = enumerate_states(cd.g());
    let name = "pentagon and hexagon class counts";
    let failure = states
        .par_iter()
        .map(|x| {
            for j in (0..cd.n()).filter(|&j| j != cd.v) {
                let y = x.swapped(j, cd.v);
                for kind in [
                    PolyKind::Pentagon(Direction::Forward),
                    PolyKind::Pentagon(Direction::Backward),
                ] {
                    let base = enumerate_polygons(cd, kind, x, &y, false).len();
                    let lifted = enumerate_polygons(cd, kind, x, &y, true);
                    let with_bigon = lifted.iter().filter(|p| p.contains_bigon()).count();
                    let ok = match base {
                        0 => lifted.len() == 1 && with_bigon == 0,
                        1 => lifted.len() == 3 && with_bigon == 2,
                        _ => false,
                    };
                    if !ok {
                        return Some(witness(
                            name,
                            x,
                            &y,
                            format!("{kind:?}: {base} on the base, {} classes, {with_bigon} with a bigon", lifted.len()),
                        ));
                    }
                }
                for side in [Side::G, Side::Gp] {
                    let kind = PolyKind::Hexagon(side);
                    let base = enumerate_polygons(cd, kind, x, &y, false).len();
                    if base == 0 {
                        continue;
                    }
                    let lifted = enumerate_polygons(cd, kind, x, &y, true);
                    let with_bigon = lifted.iter().filter(|p| p.contains_bigon()).count();
                    let x_free = lifted.iter().filter(|p| p.x_free()).count();
                    if base != 1 || lifted.len() != 4 || with_bigon != 3 || x_free > 1 {
                        return Some(witness(
                            name,
                            x,
                            &y,
                            format!(
                                "{kind:?}: {base} on the base, {} classes, {with_bigon} with a bigon, {x_free} X-free",
                                lifted.len()
                            ),
                        ));
                    }
                }
            }
            None
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .next();
    (name.to_string(), failure)
}

/// Classes whose straightening is shorter than `n` in both directions are
/// exactly the lifts of polygons on the base torus, with the same marking
/// multiplicities and `m` equal to the number of source points inside.
fn base_lift_check(cd: &CombinedDiagram, states: &[GridState]) -> (String, Option<Witness>) {
    let name = "short classes are lifts of base polygons";
    let n = cd.n();
    let kinds = [
        PolyKind::Pentagon(Direction::Forward),
        PolyKind::Pentagon(Direction::Backward),
        PolyKind::Hexagon(Side::G),
        PolyKind::Hexagon(Side::Gp),
    ];
    let failure = states
        .par_iter()
        .map(|x| {
            for kind in kinds {
                for j in (0..n).filter(|&j| j != cd.v) {
                    let y = x.swapped(j, cd.v);
                    let key = |p: &PolyClass| (p.coarse, p.o_mult.clone(), p.x_mult.clone(), p.m, p.region.corners.len());
                    let mut base: Vec<_> = enumerate_polygons(cd, kind, x, &y, false).iter().map(key).collect();
                    let mut short: Vec<_> = enumerate_polygons(cd, kind, x, &y, true)
                        .iter()
                        .filter(|p| p.coarse.1 < n && p.coarse.2 < n)
                        .map(key)
                        .collect();
                    base.sort();
                    short.sort();
                    if base != short {
                        return Some(witness(name, x, &y, format!("{kind:?}: base {base:?}, short lifts {short:?}")));
                    }
                }
            }
            None
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .next();
    (name.to_string(), failure)
}

/// Number of state pairs `(x, y)` differing on the special column and one
/// other, keyed by polygon kind, base count and cover count.
pub fn class_census(cd: &CombinedDiagram) -> BTreeMap<(String, usize, usize), usize> {
    let states = enumerate_states(cd.g());
    let n = cd.n();
    let kinds = [
        PolyKind::Pentagon(Direction::Forward),
        PolyKind::Pentagon(Direction::Backward),
        PolyKind::Hexagon(Side::G),
        PolyKind::Hexagon(Side::Gp),
    ];
    let counts: Vec<(String, usize, usize)> = states
        .par_iter()
        .flat_map_iter(|x| {
            let mut v = Vec::new();
            for kind in kinds {
                for j in (0..n).filter(|&j| j != cd.v) {
                    let y = x.swapped(j, cd.v);
                    let b = enumerate_polygons(cd, kind, x, &y, false).len();
                    let l = enumerate_polygons(cd, kind, x, &y, true).len();
                    v.push((format!("{kind:?}"), b, l));
                }
            }
            v
        })
        .collect();
    let mut out = BTreeMap::new();
    for k in counts {
        *out.entry(k).or_insert(0) += 1;
    }
    out
}

/// `P`, `P'` preserve both gradings; `H`, `H'` raise the Maslov grading by one.
fn grading_check(cd: &CombinedDiagram, states: &[GridState]) -> (String, Option<Witness>) {
    let name = "map gradings";
    let grade = |g: &GridDiagram, t: &Monomial| {
        let (m, a) = gradings(g, &t.state);
        let k = t.total_k() as i64;
        (m - 2 * k + 2 * t.m as i64, a - k)
    };
    let failure = states
        .par_iter()
        .map(|x| {
            let cases: [(PolyKind, &GridDiagram, &GridDiagram, i64); 4] = [
                (PolyKind::Pentagon(Direction::Forward), cd.g(), cd.gp(), 0),
                (PolyKind::Pentagon(Direction::Backward), cd.gp(), cd.g(), 0),
                (PolyKind::Hexagon(Side::G), cd.g(), cd.g(), 1),
                (PolyKind::Hexagon(Side::Gp), cd.gp(), cd.gp(), 1),
            ];
            for (kind, src, dst, shift) in cases {
                let (m0, a0) = gradings(src, x);
                for p in polygons_from(cd, kind, x, true).into_iter().filter(|p| p.x_free()) {
                    let t = p.monomial();
                    if grade(dst, &t) != (m0 + shift, a0) {
                        return Some(witness(name, x, &p.to, format!("{kind:?} {}", format_coefficient(&t))));
                    }
                }
            }
            None
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .next();
    (name.to_string(), failure)
}
