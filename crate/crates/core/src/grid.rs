//! Grid diagrams, grid states, gradings, rectangles on the torus and the
//! differentials of GC⁻ and GC•.

use serde::{Deserialize, Serialize};

use crate::chain::{ChainElement, Monomial};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GridDiagram {
    n: usize,
    o: Vec<usize>,
    x: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct GridJson {
    n: i64,
    #[serde(rename = "O")]
    o: Vec<i64>,
    #[serde(rename = "X")]
    x: Vec<i64>,
}

fn check_perm(name: &str, p: &[i64], n: usize) -> Result<Vec<usize>> {
    if p.len() != n {
        return Err(Error::MalformedInput(format!("{name} has length {} but n = {n}", p.len())));
    }
    let mut seen = vec![false; n];
    let mut out = Vec::with_capacity(n);
    for (i, &v) in p.iter().enumerate() {
        if v < 0 || v as usize >= n {
            return Err(Error::InvalidDiagram(format!("{name}[{i}] = {v} is out of range 0..{n}")));
        }
        let v = v as usize;
        if seen[v] {
            return Err(Error::InvalidDiagram(format!(
                "{name} is not a permutation: row {v} appears twice"
            )));
        }
        seen[v] = true;
        out.push(v);
    }
    Ok(out)
}

impl GridDiagram {
    pub fn new(o: Vec<usize>, x: Vec<usize>) -> Result<Self> {
        let n = o.len();
        let oi: Vec<i64> = o.iter().map(|&v| v as i64).collect();
        let xi: Vec<i64> = x.iter().map(|&v| v as i64).collect();
        Self::validate(n as i64, &oi, &xi)
    }

    fn validate(n: i64, o: &[i64], x: &[i64]) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidDiagram(format!("grid number must be at least 2, got {n}")));
        }
        let n = n as usize;
        if n > 64 {
            return Err(Error::InvalidDiagram(format!("grid number {n} exceeds 64")));
        }
        let o = check_perm("O", o, n)?;
        let x = check_perm("X", x, n)?;
        for i in 0..n {
            if o[i] == x[i] {
                return Err(Error::InvalidDiagram(format!(
                    "O and X share the cell in column {i}, row {}",
                    o[i]
                )));
            }
        }
        let g = GridDiagram { n, o, x };
        let comps = g.components();
        if comps != 1 {
            return Err(Error::InvalidDiagram(format!(
                "diagram is a link with {comps} components; only knots are supported"
            )));
        }
        Ok(g)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: GridJson =
            serde_json::from_str(text).map_err(|e| Error::MalformedInput(e.to_string()))?;
        Self::validate(raw.n, &raw.o, &raw.x)
    }

    pub fn to_json(&self) -> String {
        let raw = GridJson {
            n: self.n as i64,
            o: self.o.iter().map(|&v| v as i64).collect(),
            x: self.x.iter().map(|&v| v as i64).collect(),
        };
        serde_json::to_string(&raw).expect("serializable")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Row of the O-marking in column `i`.
    pub fn o(&self, i: usize) -> usize {
        self.o[i]
    }

    /// Row of the X-marking in column `i`.
    pub fn x(&self, i: usize) -> usize {
        self.x[i]
    }

    pub fn o_rows(&self) -> &[usize] {
        &self.o
    }

    pub fn x_rows(&self) -> &[usize] {
        &self.x
    }

    /// Column of the O-marking in row `r`.
    pub fn o_col(&self, r: usize) -> usize {
        self.o.iter().position(|&v| v == r).expect("permutation")
    }

    /// Column of the X-marking in row `r`.
    pub fn x_col(&self, r: usize) -> usize {
        self.x.iter().position(|&v| v == r).expect("permutation")
    }

    /// Number of link components: cycles of `i ↦ O⁻¹(X(i))`.
    pub fn components(&self) -> usize {
        let mut seen = vec![false; self.n];
        let mut count = 0;
        for s in 0..self.n {
            if seen[s] {
                continue;
            }
            count += 1;
            let mut i = s;
            while !seen[i] {
                seen[i] = true;
                i = self.o_col(self.x[i]);
            }
        }
        count
    }

    /// The two O-markings sharing a row or column with the X in column `i`:
    /// `(i, O⁻¹(X(i)))`.
    pub fn consecutive_pair(&self, i: usize) -> (usize, usize) {
        (i, self.o_col(self.x[i]))
    }

    /// Mirror across the diagonal: columns become rows.
    pub fn transpose(&self) -> GridDiagram {
        let mut o = vec![0; self.n];
        let mut x = vec![0; self.n];
        for i in 0..self.n {
            o[self.o[i]] = i;
            x[self.x[i]] = i;
        }
        GridDiagram { n: self.n, o, x }
    }

    /// Cyclically relabel columns so that old column `s` becomes column 0.
    pub fn rotate_columns(&self, s: usize) -> GridDiagram {
        let n = self.n;
        let o = (0..n).map(|j| self.o[(j + s) % n]).collect();
        let x = (0..n).map(|j| self.x[(j + s) % n]).collect();
        GridDiagram { n, o, x }
    }

    /// Cyclically relabel rows so that old row `s` becomes row 0.
    pub fn rotate_rows(&self, s: usize) -> GridDiagram {
        let n = self.n;
        let o = self.o.iter().map(|&r| (r + n - s % n) % n).collect();
        let x = self.x.iter().map(|&r| (r + n - s % n) % n).collect();
        GridDiagram { n, o, x }
    }

    /// Swap the markings of columns `c` and `c+1 (mod n)`.
    pub fn swap_columns(&self, c: usize) -> GridDiagram {
        let d = (c + 1) % self.n;
        let mut g = self.clone();
        g.o.swap(c, d);
        g.x.swap(c, d);
        g
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GridState {
    rho: Vec<u8>,
}

impl GridState {
    pub fn new(rho: Vec<u8>) -> Result<Self> {
        let n = rho.len();
        let mut seen = vec![false; n];
        for &r in &rho {
            if r as usize >= n || seen[r as usize] {
                return Err(Error::MalformedInput(format!("{rho:?} is not a permutation")));
            }
            seen[r as usize] = true;
        }
        Ok(GridState { rho })
    }

    pub fn from_rows(rows: &[usize]) -> Result<Self> {
        Self::new(rows.iter().map(|&r| r as u8).collect())
    }

    pub(crate) fn from_vec_unchecked(rho: Vec<u8>) -> Self {
        GridState { rho }
    }

    pub fn identity(n: usize) -> Self {
        GridState { rho: (0..n as u8).collect() }
    }

    pub fn n(&self) -> usize {
        self.rho.len()
    }

    pub fn rho(&self) -> &[u8] {
        &self.rho
    }

    /// Row of the state point on vertical circle `i`.
    pub fn row(&self, i: usize) -> usize {
        self.rho[i] as usize
    }

    /// Column of the state point on horizontal circle `r`.
    pub fn col_of_row(&self, r: usize) -> usize {
        self.rho.iter().position(|&v| v as usize == r).expect("permutation")
    }

    pub fn contains_point(&self, col: usize, row: usize) -> bool {
        self.rho[col] as usize == row
    }

    pub fn swapped(&self, i: usize, j: usize) -> GridState {
        let mut rho = self.rho.clone();
        rho.swap(i, j);
        GridState { rho }
    }

    /// Columns where the two states differ.
    pub fn diff_columns(&self, other: &GridState) -> Vec<usize> {
        (0..self.n()).filter(|&i| self.rho[i] != other.rho[i]).collect()
    }

    /// Rank of the state in the lexicographic order on permutations.
    pub fn lex_rank(&self) -> usize {
        let n = self.n();
        let mut rank = 0;
        let mut fact = vec![1usize; n + 1];
        for i in 1..=n {
            fact[i] = fact[i - 1] * i;
        }
        for i in 0..n {
            let smaller = self.rho[i + 1..].iter().filter(|&&v| v < self.rho[i]).count();
            rank += smaller * fact[n - 1 - i];
        }
        rank
    }
}

impl std::fmt::Display for GridState {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(")?;
        for (i, r) in self.rho.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{r}")?;
        }
        write!(f, ")")
    }
}

/// All n! states in lexicographic order.
pub fn enumerate_states(g: &GridDiagram) -> Vec<GridState> {
    enumerate_perms(g.n())
}

pub(crate) fn enumerate_perms(n: usize) -> Vec<GridState> {
    let mut cur: Vec<u8> = (0..n as u8).collect();
    let mut out = vec![GridState { rho: cur.clone() }];
    loop {
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| cur[i] < cur[i + 1]) else {
            break;
        };
        let j = (i + 1..n).rev().find(|&j| cur[j] > cur[i]).expect("successor exists");
        cur.swap(i, j);
        cur[i + 1..].reverse();
        out.push(GridState { rho: cur.clone() });
    }
    out
}

/// Number of pairs `(p, q)` with `p` strictly southwest of `q`.
fn sw_pairs(p: &[(i64, i64)], q: &[(i64, i64)]) -> i64 {
    let mut c = 0;
    for a in p {
        for b in q {
            if a.0 < b.0 && a.1 < b.1 {
                c += 1;
            }
        }
    }
    c
}

fn maslov_against(points: &[(i64, i64)], marks: &[(i64, i64)]) -> i64 {
    sw_pairs(points, points) - sw_pairs(points, marks) - sw_pairs(marks, points)
        + sw_pairs(marks, marks)
        + 1
}

fn doubled_points(x: &GridState) -> Vec<(i64, i64)> {
    (0..x.n()).map(|i| (2 * i as i64, 2 * x.row(i) as i64)).collect()
}

fn doubled_marks(rows: &[usize]) -> Vec<(i64, i64)> {
    rows.iter().enumerate().map(|(i, &r)| (2 * i as i64 + 1, 2 * r as i64 + 1)).collect()
}

/// `(M_O, M_X)` computed in the fundamental domain `[0,n)²`.
pub fn maslov_pair(g: &GridDiagram, x: &GridState) -> (i64, i64) {
    let pts = doubled_points(x);
    (maslov_against(&pts, &doubled_marks(&g.o)), maslov_against(&pts, &doubled_marks(&g.x)))
}

/// Maslov and Alexander gradings of a state.
pub fn try_gradings(g: &GridDiagram, x: &GridState) -> Result<(i64, i64)> {
    let (mo, mx) = maslov_pair(g, x);
    let twice_a = mo - mx - (g.n() as i64 - 1);
    if twice_a % 2 != 0 {
        return Err(Error::NonIntegerAlexander);
    }
    Ok((mo, twice_a / 2))
}

pub fn gradings(g: &GridDiagram, x: &GridState) -> (i64, i64) {
    try_gradings(g, x).expect("validated diagrams are knots")
}

/// Gradings of `V^k v^m x`.
pub fn monomial_gradings(g: &GridDiagram, t: &Monomial) -> (i64, i64) {
    let (m, a) = gradings(g, &t.state);
    let k = t.total_k() as i64;
    (m - 2 * k + 2 * t.m as i64, a - k)
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GRect {
    /// Lower-left lattice corner `(column, row)`.
    pub sw: (usize, usize),
    pub w: usize,
    pub h: usize,
    pub from: GridState,
    pub to: GridState,
    pub o_mult: Vec<u8>,
    pub x_mult: Vec<u8>,
    /// Number of points of `from` in the open interior.
    pub m: u32,
    pub is_empty: bool,
}

impl GRect {
    pub fn x_free(&self) -> bool {
        self.x_mult.iter().all(|&v| v == 0)
    }

    /// Whether cell `(col, row)` lies in the rectangle.
    pub fn contains_cell(&self, n: usize, col: usize, row: usize) -> bool {
        (col + n - self.sw.0) % n < self.w && (row + n - self.sw.1) % n < self.h
    }

    pub fn corners(&self, n: usize) -> [(usize, usize); 4] {
        let (a, b) = self.sw;
        [(a, b), ((a + self.w) % n, b), (a, (b + self.h) % n), ((a + self.w) % n, (b + self.h) % n)]
    }
}

fn build_rect(g: &GridDiagram, sw: (usize, usize), w: usize, h: usize, x: &GridState, y: &GridState) -> GRect {
    let n = g.n();
    let inside = |c: usize, r: usize| (c + n - sw.0) % n < w && (r + n - sw.1) % n < h;
    let o_mult = (0..n).map(|i| inside(i, g.o(i)) as u8).collect();
    let x_mult = (0..n).map(|i| inside(i, g.x(i)) as u8).collect();
    let m = (0..n)
        .filter(|&i| {
            let dc = (i + n - sw.0) % n;
            let dr = (x.row(i) + n - sw.1) % n;
            dc > 0 && dc < w && dr > 0 && dr < h
        })
        .count() as u32;
    GRect { sw, w, h, from: x.clone(), to: y.clone(), o_mult, x_mult, m, is_empty: m == 0 }
}

/// Rectangles from `x` to `y`: SW and NE corners in `x`, NW and SE corners in `y`.
pub fn rectangles(g: &GridDiagram, x: &GridState, y: &GridState) -> Vec<GRect> {
    let d = x.diff_columns(y);
    if d.len() != 2 {
        return Vec::new();
    }
    let n = g.n();
    let (c1, c2) = (d[0], d[1]);
    if y.row(c1) != x.row(c2) || y.row(c2) != x.row(c1) {
        return Vec::new();
    }
    let r1 = x.row(c1);
    let r2 = x.row(c2);
    vec![
        build_rect(g, (c1, r1), c2 - c1, (r2 + n - r1) % n, x, y),
        build_rect(g, (c2, r2), n - (c2 - c1), (r1 + n - r2) % n, x, y),
    ]
}

/// All rectangles leaving `x`.
pub fn rectangles_from(g: &GridDiagram, x: &GridState) -> Vec<GRect> {
    let n = g.n();
    let mut out = Vec::with_capacity(n * (n - 1));
    for c1 in 0..n {
        for c2 in c1 + 1..n {
            let y = x.swapped(c1, c2);
            out.extend(rectangles(g, x, &y));
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Theory {
    Minus,
    Bullet,
}

impl std::str::FromStr for Theory {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "minus" => Ok(Theory::Minus),
            "bullet" => Ok(Theory::Bullet),
            _ => Err(Error::MalformedInput(format!("unknown theory {s:?}"))),
        }
    }
}

impl Theory {
    pub fn name(self) -> &'static str {
        match self {
            Theory::Minus => "minus",
            Theory::Bullet => "bullet",
        }
    }
}

/// `∂⁻` (empty X-free rectangles) or `∂•` (X-free rectangles weighted by `v^m`).
pub fn differential(g: &GridDiagram, theory: Theory, x: &GridState) -> ChainElement {
    let mut out = ChainElement::zero();
    for r in rectangles_from(g, x) {
        if !r.x_free() {
            continue;
        }
        let m = match theory {
            Theory::Minus if !r.is_empty => continue,
            Theory::Minus => 0,
            Theory::Bullet => r.m,
        };
        let k = r.o_mult.iter().map(|&v| v as u32).collect();
        out.toggle(Monomial::new(r.to.clone(), k, m));
    }
    out
}

/// Apply a differential to a chain element.
pub fn differential_elem(g: &GridDiagram, theory: Theory, e: &ChainElement) -> ChainElement {
    e.apply(|s| differential(g, theory, s))
}
