//! Generator-by-generator checks of chain-level identities, with a minimal
//! witness for the first failure.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::chain::{ChainElement, Monomial};
use crate::grid::GridState;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub identity: String,
    pub source: String,
    pub target: String,
    pub monomial: String,
}

impl std::fmt::Display for Witness {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} fails at {} -> {} with coefficient {}", self.identity, self.source, self.target, self.monomial)
    }
}

/// `V1^2 V3 v` style rendering of an exponent vector; `1` when trivial.
pub fn format_coefficient(t: &Monomial) -> String {
    let mut parts: Vec<String> = t
        .k
        .iter()
        .enumerate()
        .filter(|(_, &e)| e > 0)
        .map(|(i, &e)| if e == 1 { format!("V{i}") } else { format!("V{i}^{e}") })
        .collect();
    match t.m {
        0 => {}
        1 => parts.push("v".into()),
        m => parts.push(format!("v^{m}")),
    }
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join(" ")
    }
}

/// Checks `lhs(x) = rhs(x)` on every source; returns the first failure in
/// source order.
pub fn check_identity<L, R>(name: &str, sources: &[GridState], lhs: L, rhs: R) -> Option<Witness>
where
    L: Fn(&GridState) -> ChainElement + Sync,
    R: Fn(&GridState) -> ChainElement + Sync,
{
    sources
        .par_iter()
        .map(|x| {
            let diff = lhs(x).add(&rhs(x));
            diff.first().map(|t| Witness {
                identity: name.to_string(),
                source: x.to_string(),
                target: t.state.to_string(),
                monomial: format_coefficient(t),
            })
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .next()
}

/// Checks that `f(x)` vanishes on every source.
pub fn check_zero<F>(name: &str, sources: &[GridState], f: F) -> Option<Witness>
where
    F: Fn(&GridState) -> ChainElement + Sync,
{
    check_identity(name, sources, f, |_| ChainElement::zero())
}
