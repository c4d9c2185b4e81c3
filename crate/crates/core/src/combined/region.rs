//! Regions on the fine lattice of the combined diagram, bounded above and
//! below by horizontal circles and on the sides by vertical curve paths.

use std::collections::{BTreeMap, HashSet};

use super::{CombinedDiagram, SCALE};

/// The torus a region lives on: the base (`copies = 1`) or the 4-fold cover
/// (`copies = 2`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Space {
    pub copies: i64,
    /// Side length of the base in fine units.
    pub base: i64,
}

impl Space {
    pub fn size(&self) -> i64 {
        self.base * self.copies
    }

    pub fn wrap(&self, v: i64) -> i64 {
        v.rem_euclid(self.size())
    }

    pub fn translates(&self) -> Vec<(i64, i64)> {
        let mut v = Vec::new();
        for i in 0..self.copies {
            for j in 0..self.copies {
                v.push((i * self.base, j * self.base));
            }
        }
        v
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Curve {
    Beta,
    Gamma,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CornerKind {
    /// A point of the source or target state.
    State,
    /// A lift of `a`.
    A,
    /// A lift of `b`.
    B,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Corner {
    pub point: (i64, i64),
    pub kind: CornerKind,
}

/// Cells `(x, y)` with `y0 <= y < y0 + height` and `left <= x < right` in
/// that row; `left`/`right` are unwrapped fine coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Region {
    pub space_size: i64,
    pub y0: i64,
    pub left: Vec<i64>,
    pub right: Vec<i64>,
    pub corners: Vec<Corner>,
}

impl Region {
    pub fn height(&self) -> i64 {
        self.left.len() as i64
    }

    pub fn contains(&self, x: i64, y: i64) -> bool {
        let s = self.space_size;
        let dy = (y - self.y0).rem_euclid(s);
        if dy >= self.height() {
            return false;
        }
        let (l, r) = (self.left[dy as usize], self.right[dy as usize]);
        (x - l).rem_euclid(s) < r - l
    }

    /// Cells covered, as a multiplicity map (every value is 1 for embedded regions).
    pub fn cells(&self) -> BTreeMap<(i64, i64), i32> {
        let s = self.space_size;
        let mut m = BTreeMap::new();
        for (dy, (&l, &r)) in self.left.iter().zip(&self.right).enumerate() {
            for x in l..r {
                *m.entry((x.rem_euclid(s), (self.y0 + dy as i64).rem_euclid(s))).or_insert(0) += 1;
            }
        }
        m
    }

    /// Number of the four cells around a lattice point lying in the region.
    pub fn quadrants(&self, p: (i64, i64)) -> usize {
        let (x, y) = p;
        [(x - 1, y - 1), (x, y - 1), (x - 1, y), (x, y)].iter().filter(|&&(a, b)| self.contains(a, b)).count()
    }

    fn alpha_corners(&self) -> [(i64, i64); 4] {
        let s = self.space_size;
        let h = self.left.len() - 1;
        let top = (self.y0 + self.height()).rem_euclid(s);
        [
            (self.left[0].rem_euclid(s), self.y0),
            (self.right[0].rem_euclid(s), self.y0),
            (self.left[h].rem_euclid(s), top),
            (self.right[h].rem_euclid(s), top),
        ]
    }
}

/// A vertical path on one side of a region.
#[derive(Clone, Debug)]
pub(crate) struct SidePath {
    /// Unwrapped fine x-coordinate of the straight circle this side follows.
    pub line: i64,
    pub start: Curve,
    /// Offsets above `y0` at which the path switches curve, with the crossing kind.
    pub switches: Vec<(i64, CornerKind)>,
}

impl SidePath {
    fn xs(&self, cd: &CombinedDiagram, y0: i64, height: i64) -> Vec<i64> {
        (0..height)
            .map(|dy| {
                let flips = self.switches.iter().filter(|(o, _)| *o <= dy).count();
                let on_gamma = (self.start == Curve::Gamma) ^ (flips % 2 == 1);
                if on_gamma {
                    self.line + cd.gamma_offset(y0 + dy)
                } else {
                    self.line
                }
            })
            .collect()
    }
}

/// Switch requirements: number of `a`-crossings and `b`-crossings on the boundary.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SwitchCount {
    pub a: usize,
    pub b: usize,
}

/// Endpoint data shared by every candidate between two states.
pub(crate) struct Ends<'a> {
    pub from_pts: &'a HashSet<(i64, i64)>,
    pub to_pts: &'a HashSet<(i64, i64)>,
    /// Curve of the special line used by the source and target states.
    pub from_curve: Curve,
    pub to_curve: Curve,
    /// `to − from` as a 0-chain over every lift.
    pub boundary: &'a BTreeMap<(i64, i64), i32>,
}

fn crossing_offsets(cd: &CombinedDiagram, space: Space, y0: i64, height: i64) -> Vec<(i64, CornerKind)> {
    let mut out = Vec::new();
    for t in 0..space.copies {
        for (h, kind) in [(cd.h_a, CornerKind::A), (cd.h_b, CornerKind::B)] {
            let off = (h + t * space.base - y0).rem_euclid(space.size());
            if off > 0 && off < height {
                out.push((off, kind));
            }
        }
    }
    out.sort();
    out
}

fn subsets<T: Clone>(items: &[T]) -> Vec<Vec<T>> {
    (0u32..1 << items.len())
        .map(|mask| items.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, t)| t.clone()).collect())
        .collect()
}

/// All side paths on one side of a coarse rectangle.
fn side_options(
    cd: &CombinedDiagram,
    space: Space,
    line: i64,
    y0: i64,
    height: i64,
    bottom: Curve,
    top: Curve,
) -> Vec<SidePath> {
    let special = cd.is_special_line(line);
    if !special {
        return vec![SidePath { line, start: Curve::Beta, switches: vec![] }];
    }
    let flips_needed = bottom != top;
    subsets(&crossing_offsets(cd, space, y0, height))
        .into_iter()
        .filter(|s| (s.len() % 2 == 1) == flips_needed)
        .map(|switches| SidePath { line, start: bottom, switches })
        .collect()
}

/// Regions whose straightening is the coarse rectangle `(sw, w, h)` and
/// which satisfy the corner, quadrant, disk and class boundary conditions.
pub(crate) fn regions_over(
    cd: &CombinedDiagram,
    space: Space,
    ends: &Ends<'_>,
    sw: (usize, usize),
    w: usize,
    h: usize,
    want: SwitchCount,
) -> Vec<Region> {
    let s = space.size();
    let y0 = SCALE * sw.1 as i64;
    let height = SCALE * h as i64;
    let xl = SCALE * sw.0 as i64;
    let xr = xl + SCALE * w as i64;
    // Left side: bottom corner in the source, top corner in the target; the right side is the reverse.
    let curve_at = |line: i64, c: Curve| if cd.is_special_line(line) { c } else { Curve::Beta };
    let lefts = side_options(cd, space, xl, y0, height, curve_at(xl, ends.from_curve), curve_at(xl, ends.to_curve));
    let rights = side_options(cd, space, xr, y0, height, curve_at(xr, ends.to_curve), curve_at(xr, ends.from_curve));
    let mut out = Vec::new();
    for lp in &lefts {
        for rp in &rights {
            let sw_all: Vec<CornerKind> = lp.switches.iter().chain(&rp.switches).map(|(_, k)| *k).collect();
            let na = sw_all.iter().filter(|k| **k == CornerKind::A).count();
            let nb = sw_all.len() - na;
            if na != want.a || nb != want.b {
                continue;
            }
            let left = lp.xs(cd, y0, height);
            let right = rp.xs(cd, y0, height);
            if left.iter().zip(&right).any(|(l, r)| r <= l || r - l >= s) {
                continue;
            }
            // rows must overlap their neighbours for the region to be a disk
            if (1..left.len()).any(|i| left[i].max(left[i - 1]) >= right[i].min(right[i - 1])) {
                continue;
            }
            let mut region = Region { space_size: s, y0, left, right, corners: Vec::new() };
            let ac = region.alpha_corners();
            if ac.iter().filter(|p| ends.from_pts.contains(p) || ends.to_pts.contains(p)).count() != 4 {
                continue;
            }
            let mut corners: Vec<Corner> = ac.iter().map(|&p| Corner { point: p, kind: CornerKind::State }).collect();
            for path in [lp, rp] {
                for &(off, kind) in &path.switches {
                    corners.push(Corner { point: (path.line.rem_euclid(s), (y0 + off).rem_euclid(s)), kind });
                }
            }
            if corners.iter().any(|c| region.quadrants(c.point) != 1) {
                continue;
            }
            let mut chain: BTreeMap<(i64, i64), i32> = BTreeMap::new();
            for (tx, ty) in space.translates() {
                for (i, sign) in [(0usize, -1), (1, 1), (2, 1), (3, -1)] {
                    let p = ((ac[i].0 + tx).rem_euclid(s), (ac[i].1 + ty).rem_euclid(s));
                    *chain.entry(p).or_insert(0) += sign;
                }
            }
            chain.retain(|_, v| *v != 0);
            if &chain != ends.boundary {
                continue;
            }
            corners.sort();
            region.corners = corners;
            out.push(region);
        }
    }
    out
}
