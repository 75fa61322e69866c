//! Deterministic search for integer points where a polynomial is nonzero.

use std::cmp::Reverse;
use std::collections::BTreeMap;

use crate::scalar::{self, Scalar};

use super::polynomial::{Family, Polynomial, Var};

/// Candidate values in search order: `0, 1, -1, 2, -2, ...`.
fn candidate(step: usize) -> Scalar {
    let magnitude = step.div_ceil(2) as i64;
    if step % 2 == 1 {
        scalar::int(magnitude)
    } else {
        scalar::int(-magnitude)
    }
}

/// Variables in the order they are fixed: direction factors (`a`, then `b`)
/// before base coordinates, indices descending within a family. Fixing the
/// high indices first (mostly to 0) leaves witnesses on low basis vectors.
pub fn search_order(p: &Polynomial) -> Vec<Var> {
    let rank = |f: Family| match f {
        Family::A => 0,
        Family::B => 1,
        Family::T => 2,
        Family::Xi => 3,
        Family::Eta => 4,
        Family::Omega => 5,
    };
    let mut vars: Vec<Var> = p.variables().into_iter().collect();
    vars.sort_by_key(|v| (rank(v.family), Reverse(v.index)));
    vars
}

/// An integer point where `p` does not vanish, or `None` iff `p = 0`.
///
/// Variables are fixed one at a time to the first value in `0, 1, -1, 2, ...`
/// that keeps the partially substituted polynomial nonzero. A nonzero
/// polynomial of degree `d` in a variable vanishes identically for at most `d`
/// values of it, so each step tries at most `d + 1` candidates and the point
/// lies in the grid `{-g..g}` with `g <= (d + 1) / 2`. Variables absent from
/// `p` are not listed (their value is irrelevant).
pub fn find_nonvanishing_point(p: &Polynomial) -> Option<BTreeMap<Var, Scalar>> {
    if p.is_zero() {
        return None;
    }
    let mut rest = p.clone();
    let mut point = BTreeMap::new();
    for v in search_order(p) {
        let mut step = 0;
        loop {
            let value = candidate(step);
            let fixed = rest.substitute_values(&BTreeMap::from([(v, value.clone())]));
            if !fixed.is_zero() {
                rest = fixed;
                point.insert(v, value);
                break;
            }
            step += 1;
            debug_assert!(step as u32 <= rest.degree_in(v) + 1);
        }
    }
    debug_assert!(rest.as_constant().is_some());
    Some(point)
}
