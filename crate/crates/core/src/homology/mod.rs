//! Bigraded homology of free complexes, induced `U` and `v` actions, and
//! table comparison.

mod complex;
pub mod gf2;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use complex::{
    build_complex, cover_complex, grid_complex, term_grading, FreeComplex, Generator, Source, Term,
};

use crate::error::{Error, Result};
use crate::grid::{GridDiagram, Theory};
use gf2::{BitRow, Echelon};

/// Highest power of `U` and `v` whose induced rank is recorded.
pub const MAX_POWER: u32 = 3;

/// Inclusive ranges of Maslov (`d`) and Alexander (`s`) gradings.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Window {
    pub d0: i64,
    pub d1: i64,
    pub s0: i64,
    pub s1: i64,
}

impl Window {
    pub fn new(d0: i64, d1: i64, s0: i64, s1: i64) -> Self {
        Window { d0, d1, s0, s1 }
    }

    pub fn empty() -> Self {
        Window { d0: 0, d1: -1, s0: 0, s1: -1 }
    }

    pub fn is_empty(&self) -> bool {
        self.d0 > self.d1 || self.s0 > self.s1
    }

    pub fn contains(&self, d: i64, s: i64) -> bool {
        (self.d0..=self.d1).contains(&d) && (self.s0..=self.s1).contains(&s)
    }

    /// Smallest window containing both.
    pub fn hull(&self, other: &Window) -> Window {
        if self.is_empty() {
            return *other;
        }
        if other.is_empty() {
            return *self;
        }
        Window {
            d0: self.d0.min(other.d0),
            d1: self.d1.max(other.d1),
            s0: self.s0.min(other.s0),
            s1: self.s1.max(other.s1),
        }
    }

    /// Grid points in `(s, d)` order.
    pub fn points(&self) -> Vec<(i64, i64)> {
        let mut v = Vec::new();
        for s in self.s0..=self.s1 {
            for d in self.d0..=self.d1 {
                v.push((d, s));
            }
        }
        v
    }

    /// Parses `d0:d1,s0:s1`.
    pub fn parse(text: &str) -> Result<Window> {
        let bad = || Error::MalformedInput(format!("window {text:?}; expected d0:d1,s0:s1"));
        let (dpart, spart) = text.split_once(',').ok_or_else(bad)?;
        let range = |p: &str| -> Result<(i64, i64)> {
            let (a, b) = p.split_once(':').ok_or_else(bad)?;
            Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
        };
        let (d0, d1) = range(dpart)?;
        let (s0, s1) = range(spart)?;
        Ok(Window { d0, d1, s0, s1 })
    }
}

impl std::fmt::Display for Window {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{},{}:{}", self.d0, self.d1, self.s0, self.s1)
    }
}

/// The default window: `s` from `min A − 3` to `max A`, `d` from `min M − 8`
/// to `max M + 6`, over the generators of `c`.
pub fn default_window(c: &FreeComplex) -> Window {
    match c.grading_bounds() {
        None => Window::empty(),
        Some(((m0, m1), (a0, a1))) => Window { d0: m0 - 8, d1: m1 + 6, s0: a0 - 3, s1: a1 },
    }
}

/// How homology is computed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Route {
    /// Slices of the complex over the full ring, with `U` acting as one `V_i`.
    Direct,
    /// Slices of the quotient by `V_i = V_j`, then removal of the
    /// `W^{⊗(N−1)}` factor that quotient introduces.
    Collapsed,
}

impl std::str::FromStr for Route {
    type Err = Error;
    fn from_str(s: &str) -> Result<Route> {
        match s {
            "direct" => Ok(Route::Direct),
            "collapsed" => Ok(Route::Collapsed),
            _ => Err(Error::MalformedInput(format!("unknown route {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Action {
    /// Multiplication by `V_i`.
    U(usize),
    V,
}

/// Dimensions and induced action ranks on a window. Maps are keyed by
/// `(s, d)` and `(s, d, power)` and hold only nonzero entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyTable {
    pub theory: String,
    pub window: Window,
    pub dims: BTreeMap<(i64, i64), usize>,
    pub u_ranks: BTreeMap<(i64, i64, u32), usize>,
    pub v_ranks: BTreeMap<(i64, i64, u32), usize>,
}

#[derive(Serialize, Deserialize)]
struct DimEntry {
    d: i64,
    s: i64,
    dim: usize,
}

#[derive(Serialize, Deserialize)]
struct RankEntry {
    d: i64,
    s: i64,
    power: u32,
    rank: usize,
}

#[derive(Serialize, Deserialize)]
struct TableJson {
    theory: String,
    window: Window,
    dims: Vec<DimEntry>,
    u_ranks: Vec<RankEntry>,
    v_ranks: Vec<RankEntry>,
}

impl HomologyTable {
    pub fn dim(&self, d: i64, s: i64) -> usize {
        self.dims.get(&(s, d)).copied().unwrap_or(0)
    }

    pub fn u_rank(&self, d: i64, s: i64, power: u32) -> usize {
        self.u_ranks.get(&(s, d, power)).copied().unwrap_or(0)
    }

    pub fn v_rank(&self, d: i64, s: i64, power: u32) -> usize {
        self.v_ranks.get(&(s, d, power)).copied().unwrap_or(0)
    }

    /// Restriction to a smaller window.
    pub fn restricted(&self, w: Window) -> HomologyTable {
        HomologyTable {
            theory: self.theory.clone(),
            window: w,
            dims: self.dims.iter().filter(|((s, d), _)| w.contains(*d, *s)).map(|(k, v)| (*k, *v)).collect(),
            u_ranks: self.u_ranks.iter().filter(|((s, d, _), _)| w.contains(*d, *s)).map(|(k, v)| (*k, *v)).collect(),
            v_ranks: self.v_ranks.iter().filter(|((s, d, _), _)| w.contains(*d, *s)).map(|(k, v)| (*k, *v)).collect(),
        }
    }

    fn to_json_value(&self) -> TableJson {
        let ranks = |m: &BTreeMap<(i64, i64, u32), usize>| {
            m.iter().map(|(&(s, d, power), &rank)| RankEntry { d, s, power, rank }).collect()
        };
        TableJson {
            theory: self.theory.clone(),
            window: self.window,
            dims: self.dims.iter().map(|(&(s, d), &dim)| DimEntry { d, s, dim }).collect(),
            u_ranks: ranks(&self.u_ranks),
            v_ranks: ranks(&self.v_ranks),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self.to_json_value()).expect("table serializes")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<HomologyTable> {
        let t: TableJson = serde_json::from_value(v.clone()).map_err(|e| Error::MalformedInput(e.to_string()))?;
        let ranks = |r: Vec<RankEntry>| r.into_iter().map(|e| ((e.s, e.d, e.power), e.rank)).collect();
        Ok(HomologyTable {
            theory: t.theory,
            window: t.window,
            dims: t.dims.into_iter().map(|e| ((e.s, e.d), e.dim)).collect(),
            u_ranks: ranks(t.u_ranks),
            v_ranks: ranks(t.v_ranks),
        })
    }

    /// Rows `kind,d,s,power,value` in the same order as the JSON lists.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("kind,d,s,power,value\n");
        for (&(s, d), &dim) in &self.dims {
            let _ = writeln!(out, "dim,{d},{s},,{dim}");
        }
        for (name, m) in [("u_rank", &self.u_ranks), ("v_rank", &self.v_ranks)] {
            for (&(s, d, p), &r) in m {
                let _ = writeln!(out, "{name},{d},{s},{p},{r}");
            }
        }
        out
    }

    /// One line per nonzero group, with its `U` and `v` ranks.
    pub fn to_human(&self) -> String {
        let mut out = format!("{} homology on window {}\n", self.theory, self.window);
        for (&(s, d), &dim) in &self.dims {
            let us: Vec<String> = (1..=MAX_POWER).map(|p| self.u_rank(d, s, p).to_string()).collect();
            let vs: Vec<String> = (1..=MAX_POWER).map(|p| self.v_rank(d, s, p).to_string()).collect();
            let _ = writeln!(out, "  (d={d:>3}, s={s:>3})  dim {dim}  U^a ranks [{}]  v^b ranks [{}]", us.join(" "), vs.join(" "));
        }
        out
    }
}

/// Exponent vectors of length `n` with entries summing to `total`, in
/// lexicographic order.
pub fn compositions(total: u32, n: usize) -> Vec<Vec<u32>> {
    fn rec(rem: u32, n: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if n == 1 {
            cur.push(rem);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for a in 0..=rem {
            cur.push(a);
            rec(rem - a, n - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        if total == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    rec(total, n, &mut Vec::new(), &mut out);
    out
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

type BasisKey = (usize, Vec<u32>, u32);

/// Monomials `V^k v^m g` of bigrading `(d, s)`.
pub fn slice_basis(c: &FreeComplex, d: i64, s: i64) -> Vec<BasisKey> {
    let mut out = Vec::new();
    for (i, g) in c.gens.iter().enumerate() {
        let k = g.alexander - s;
        if k < 0 {
            continue;
        }
        let twice_m = d - g.maslov + 2 * k;
        if twice_m < 0 || twice_m % 2 != 0 || (!c.has_v && twice_m != 0) {
            continue;
        }
        for kv in compositions(k as u32, c.nvars) {
            out.push((i, kv, (twice_m / 2) as u32));
        }
    }
    out
}

struct Slice {
    index: HashMap<BasisKey, usize>,
    basis: Vec<BasisKey>,
    cycles: Vec<BitRow>,
    boundaries: Echelon,
}

impl Slice {
    fn dim(&self) -> usize {
        self.cycles.len() - self.boundaries.rank()
    }
}

fn images(c: &FreeComplex, src: &[BasisKey], target: &HashMap<BasisKey, usize>) -> Vec<Vec<usize>> {
    src.iter()
        .map(|(g, k, m)| {
            let mut hit: BTreeSet<usize> = BTreeSet::new();
            for t in &c.diff[*g] {
                let key = (t.target, k.iter().zip(&t.k).map(|(a, b)| a + b).collect(), m + t.m);
                let j = target[&key];
                if !hit.remove(&j) {
                    hit.insert(j);
                }
            }
            hit.into_iter().collect()
        })
        .collect()
}

fn compute_slice(c: &FreeComplex, d: i64, s: i64) -> Slice {
    let basis = slice_basis(c, d, s);
    let index: HashMap<BasisKey, usize> = basis.iter().cloned().enumerate().map(|(i, b)| (b, i)).collect();
    let below = slice_basis(c, d - 1, s);
    let below_index: HashMap<BasisKey, usize> = below.iter().cloned().enumerate().map(|(i, b)| (b, i)).collect();
    let (ker, _) = gf2::kernel(&images(c, &basis, &below_index), below.len());
    let cycles = ker.iter().map(|v| BitRow::from_indices(basis.len(), v)).collect();
    let above = slice_basis(c, d + 1, s);
    let mut boundaries = Echelon::new();
    for img in images(c, &above, &index) {
        boundaries.insert(BitRow::from_indices(basis.len(), &img));
    }
    Slice { index, basis, cycles, boundaries }
}

fn action_rank(src: &Slice, tgt: &Slice, act: Action, power: u32) -> usize {
    let mut e = tgt.boundaries.clone();
    let before = e.rank();
    for z in &src.cycles {
        let mut row = BitRow::zeros(tgt.basis.len());
        for i in z.ones() {
            let (g, k, m) = &src.basis[i];
            let key = match act {
                Action::U(v) => {
                    let mut k = k.clone();
                    k[v] += power;
                    (*g, k, *m)
                }
                Action::V => (*g, k.clone(), m + power),
            };
            row.flip(tgt.index[&key]);
        }
        e.insert(row);
    }
    e.rank() - before
}

/// Dimension of `H_{d,s}` over the ring of `c`.
pub fn slice_dim(c: &FreeComplex, d: i64, s: i64) -> usize {
    compute_slice(c, d, s).dim()
}

/// Rank of the map on homology induced by `U^power` (as `V_i`) or `v^power`
/// out of `H_{d,s}`.
pub fn induced_action(c: &FreeComplex, act: Action, d: i64, s: i64, power: u32) -> Result<usize> {
    let (td, ts) = match act {
        Action::U(i) => {
            if i >= c.nvars {
                return Err(Error::InvalidColumn(format!("variable {i} of {}", c.nvars)));
            }
            (d - 2 * power as i64, s - power as i64)
        }
        Action::V => {
            if !c.has_v {
                return Err(Error::VNotPresent);
            }
            (d + 2 * power as i64, s)
        }
    };
    Ok(action_rank(&compute_slice(c, d, s), &compute_slice(c, td, ts), act, power))
}

struct RawTable {
    dims: BTreeMap<(i64, i64), usize>,
    u: BTreeMap<(i64, i64, u32), usize>,
    v: BTreeMap<(i64, i64, u32), usize>,
}

/// Dims and ranks at the given points, computing each needed slice once.
fn raw_table(c: &FreeComplex, uvar: usize, points: &[(i64, i64)]) -> RawTable {
    let mut needed: BTreeSet<(i64, i64)> = points.iter().copied().collect();
    for &(d, s) in points {
        for p in 1..=MAX_POWER as i64 {
            needed.insert((d - 2 * p, s - p));
            if c.has_v {
                needed.insert((d + 2 * p, s));
            }
        }
    }
    let needed: Vec<(i64, i64)> = needed.into_iter().collect();
    let slices: HashMap<(i64, i64), Slice> =
        needed.par_iter().map(|&(d, s)| ((d, s), compute_slice(c, d, s))).collect::<Vec<_>>().into_iter().collect();
    let rows: Vec<_> = points
        .par_iter()
        .map(|&(d, s)| {
            let src = &slices[&(d, s)];
            let dim = src.dim();
            let mut u = Vec::new();
            let mut v = Vec::new();
            if dim > 0 {
                for p in 1..=MAX_POWER {
                    let pi = p as i64;
                    u.push((p, action_rank(src, &slices[&(d - 2 * pi, s - pi)], Action::U(uvar), p)));
                    if c.has_v {
                        v.push((p, action_rank(src, &slices[&(d + 2 * pi, s)], Action::V, p)));
                    }
                }
            }
            ((d, s), dim, u, v)
        })
        .collect();
    let mut t = RawTable { dims: BTreeMap::new(), u: BTreeMap::new(), v: BTreeMap::new() };
    for ((d, s), dim, u, v) in rows {
        t.dims.insert((s, d), dim);
        for (p, r) in u {
            t.u.insert((s, d, p), r);
        }
        for (p, r) in v {
            t.v.insert((s, d, p), r);
        }
    }
    t
}

fn nonzero<K: Ord + Copy>(m: BTreeMap<K, usize>) -> BTreeMap<K, usize> {
    m.into_iter().filter(|(_, v)| *v != 0).collect()
}

/// Homology table of `c` on `window`.
pub fn homology_table(c: &FreeComplex, window: Window, route: Route) -> HomologyTable {
    homology_table_with(c, window, route, 0)
}

/// As [`homology_table`], taking `U` to act as `V_uvar` on the direct route.
pub fn homology_table_with(c: &FreeComplex, window: Window, route: Route, uvar: usize) -> HomologyTable {
    let theory = if c.has_v { "bullet" } else { "minus" }.to_string();
    let mut table =
        HomologyTable { theory, window, dims: BTreeMap::new(), u_ranks: BTreeMap::new(), v_ranks: BTreeMap::new() };
    if window.is_empty() || c.is_empty() {
        return table;
    }
    let raw = match route {
        Route::Direct => raw_table(&c.reduced(), uvar, &window.points()),
        Route::Collapsed => collapsed_table(c, window),
    };
    table.dims = nonzero(raw.dims.into_iter().filter(|((s, d), _)| window.contains(*d, *s)).collect());
    table.u_ranks = nonzero(raw.u.into_iter().filter(|((s, d, _), _)| window.contains(*d, *s)).collect());
    table.v_ranks = nonzero(raw.v.into_iter().filter(|((s, d, _), _)| window.contains(*d, *s)).collect());
    table
}

/// Dims-and-ranks table on the direct route.
pub fn homology_dims(c: &FreeComplex, window: Window) -> HomologyTable {
    homology_table(c, window, Route::Direct)
}

/// The quotient by `V_i = V_j` has homology `H ⊗ W^{⊗(N−1)}` with
/// `W = F_(0,0) ⊕ F_(−1,−1)`, so its table at `(d, s)` is
/// `Σ_j C(N−1, j) T(d+j, s+j)`; solve for `T` from the top Alexander grading down.
fn collapsed_table(c: &FreeComplex, w: Window) -> RawTable {
    let q = c.collapsed().reduced();
    let mut out = RawTable { dims: BTreeMap::new(), u: BTreeMap::new(), v: BTreeMap::new() };
    let Some((_, (_, smax))) = q.grading_bounds() else {
        return out;
    };
    if smax < w.s0 {
        return out;
    }
    let dmax = |s: i64| w.d1 + (s - w.s0);
    let mut points = Vec::new();
    for s in w.s0..=smax {
        for d in w.d0..=dmax(s) {
            points.push((d, s));
        }
    }
    let raw = raw_table(&q, 0, &points);
    let n1 = c.nvars.saturating_sub(1) as u64;
    let coeffs: Vec<i64> = (1..=n1).map(|j| binomial(n1, j) as i64).collect();
    let solve = |get: &dyn Fn(i64, i64) -> usize| -> BTreeMap<(i64, i64), usize> {
        let mut t: BTreeMap<(i64, i64), usize> = BTreeMap::new();
        for s in (w.s0..=smax).rev() {
            for d in w.d0..=dmax(s) {
                let mut val = get(d, s) as i64;
                for (j, &cj) in coeffs.iter().enumerate() {
                    let j = j as i64 + 1;
                    val -= cj * t.get(&(s + j, d + j)).copied().unwrap_or(0) as i64;
                }
                assert!(val >= 0, "negative multiplicity {val} at (d={d}, s={s}) while removing the W factor");
                t.insert((s, d), val as usize);
            }
        }
        t
    };
    out.dims = solve(&|d, s| raw.dims.get(&(s, d)).copied().unwrap_or(0));
    for p in 1..=MAX_POWER {
        for ((s, d), r) in solve(&|d, s| raw.u.get(&(s, d, p)).copied().unwrap_or(0)) {
            out.u.insert((s, d, p), r);
        }
        if c.has_v {
            for ((s, d), r) in solve(&|d, s| raw.v.get(&(s, d, p)).copied().unwrap_or(0)) {
                out.v.insert((s, d, p), r);
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Discrepancy {
    pub kind: String,
    pub d: i64,
    pub s: i64,
    pub power: Option<u32>,
    pub left: usize,
    pub right: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub equal: bool,
    pub first_discrepancy: Option<Discrepancy>,
}

/// Entrywise comparison of dims and action ranks.
pub fn compare_modules(a: &HomologyTable, b: &HomologyTable) -> Result<Verdict> {
    if a.window != b.window {
        return Err(Error::WindowMismatch);
    }
    let keys: BTreeSet<(i64, i64)> = a.dims.keys().chain(b.dims.keys()).copied().collect();
    for (s, d) in keys {
        let (l, r) = (a.dim(d, s), b.dim(d, s));
        if l != r {
            return Ok(Verdict {
                equal: false,
                first_discrepancy: Some(Discrepancy { kind: "dim".into(), d, s, power: None, left: l, right: r }),
            });
        }
    }
    for (kind, ma, mb) in [("u_rank", &a.u_ranks, &b.u_ranks), ("v_rank", &a.v_ranks, &b.v_ranks)] {
        let keys: BTreeSet<(i64, i64, u32)> = ma.keys().chain(mb.keys()).copied().collect();
        for key in keys {
            let l = ma.get(&key).copied().unwrap_or(0);
            let r = mb.get(&key).copied().unwrap_or(0);
            if l != r {
                let (s, d, p) = key;
                return Ok(Verdict {
                    equal: false,
                    first_discrepancy: Some(Discrepancy { kind: kind.into(), d, s, power: Some(p), left: l, right: r }),
                });
            }
        }
    }
    Ok(Verdict { equal: true, first_discrepancy: None })
}

/// Base change `H ⊗_{F[U]} F[U, v]` of a table without `v`, where `v^k`
/// raises the Maslov grading by `2k`. `minus` must cover every `d` below the
/// window at which it is nonzero.
pub fn v_promoted(minus: &HomologyTable, window: Window) -> HomologyTable {
    let mut t = HomologyTable {
        theory: "minus[v]".into(),
        window,
        dims: BTreeMap::new(),
        u_ranks: BTreeMap::new(),
        v_ranks: BTreeMap::new(),
    };
    for (d, s) in window.points() {
        let below = |f: &dyn Fn(i64) -> usize| -> usize {
            (0..).map(|k| d - 2 * k).take_while(|&e| e >= minus.window.d0).map(f).sum()
        };
        let dim = below(&|e| minus.dim(e, s));
        if dim == 0 {
            continue;
        }
        t.dims.insert((s, d), dim);
        for p in 1..=MAX_POWER {
            let u = below(&|e| minus.u_rank(e, s, p));
            if u > 0 {
                t.u_ranks.insert((s, d, p), u);
            }
            t.v_ranks.insert((s, d, p), dim);
        }
    }
    t
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VPromotionReport {
    pub window: Window,
    pub promoted: HomologyTable,
    pub bullet: HomologyTable,
    pub verdict: Verdict,
}

impl VPromotionReport {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "window": self.window,
            "promoted": self.promoted.to_json(),
            "bullet": self.bullet.to_json(),
            "verdict": self.verdict,
        })
    }
}

/// Computes `GH⁻(G)[v]` and `GH•(G)` on `window` and compares them.
pub fn vpromotion_compare(g: &GridDiagram, window: Window, route: Route) -> VPromotionReport {
    let minus = grid_complex(g, Theory::Minus);
    let bullet = grid_complex(g, Theory::Bullet);
    let empty = |theory: &str| HomologyTable {
        theory: theory.into(),
        window,
        dims: BTreeMap::new(),
        u_ranks: BTreeMap::new(),
        v_ranks: BTreeMap::new(),
    };
    if window.is_empty() {
        return VPromotionReport {
            window,
            promoted: empty("minus[v]"),
            bullet: empty("bullet"),
            verdict: Verdict { equal: true, first_discrepancy: None },
        };
    }
    let ((m0, _), (_, a1)) = minus.grading_bounds().expect("grid complexes are nonempty");
    let lowest = m0 - 2 * (a1 - window.s0).max(0);
    let wide = Window { d0: lowest.min(window.d0), ..window };
    let promoted = v_promoted(&homology_table(&minus, wide, route), window);
    let bullet = homology_table(&bullet, window, route);
    let verdict = compare_modules(&promoted, &bullet).expect("same window");
    VPromotionReport { window, promoted, bullet, verdict }
}
