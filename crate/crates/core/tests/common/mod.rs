#![allow(dead_code)]

use std::path::PathBuf;

use dpgrid::GridDiagram;

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

pub fn fixture(name: &str) -> GridDiagram {
    let text = std::fs::read_to_string(fixture_path(&format!("{name}.json"))).expect("fixture exists");
    GridDiagram::from_json(&text).expect("fixture parses")
}

pub fn u2() -> GridDiagram {
    fixture("U2")
}

pub fn t5() -> GridDiagram {
    fixture("T5")
}

pub fn t6() -> GridDiagram {
    fixture("T6")
}

/// Integer polynomial in `t`, lowest degree first, trimmed.
pub type Poly = Vec<i64>;

pub fn trim(mut p: Poly) -> Poly {
    while p.last() == Some(&0) {
        p.pop();
    }
    p
}

/// Strip the unit `±t^k`: drop leading zeros and make the top coefficient positive.
pub fn normalize(p: &[i64]) -> Poly {
    let p = trim(p.to_vec());
    let start = p.iter().position(|&c| c != 0).unwrap_or(p.len());
    let mut q: Poly = p[start..].to_vec();
    if q.last().is_some_and(|&c| c < 0) {
        q.iter_mut().for_each(|c| *c = -*c);
    }
    q
}

pub fn poly_mul(a: &[i64], b: &[i64]) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

pub fn poly_add(a: &[i64], b: &[i64]) -> Poly {
    let mut out = vec![0; a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] += y;
    }
    trim(out)
}

/// Exact division by `t − 1`, or `None` if there is a remainder.
pub fn div_t_minus_one(p: &[i64]) -> Option<Poly> {
    let p = trim(p.to_vec());
    if p.is_empty() {
        return Some(p);
    }
    let mut q = vec![0; p.len() - 1];
    let mut carry = 0;
    for i in (1..p.len()).rev() {
        carry += p[i];
        q[i - 1] = carry;
    }
    (carry + p[0] == 0).then(|| trim(q))
}
