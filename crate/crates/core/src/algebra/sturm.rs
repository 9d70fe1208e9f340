//! Exact real-root counting with Sturm sequences.

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::{IntPoly, RatPoly};

pub fn squarefree_part(p: &IntPoly) -> RatPoly {
    let p = p.to_rational();
    if p.degree().unwrap_or(0) == 0 {
        return p;
    }
    let g = p.gcd(&p.derivative());
    p.div_rem(&g).0
}

fn sturm_sequence(p: &RatPoly) -> Vec<RatPoly> {
    let mut seq = vec![p.clone(), p.derivative()];
    while !seq.last().unwrap().is_zero() {
        let n = seq.len();
        let (_, rem) = seq[n - 2].div_rem(&seq[n - 1]);
        seq.push(-&rem);
    }
    seq.pop();
    seq
}

fn sign_changes(signs: impl Iterator<Item = i8>) -> usize {
    let mut last = 0i8;
    let mut changes = 0;
    for s in signs.filter(|&s| s != 0) {
        if last != 0 && s != last {
            changes += 1;
        }
        last = s;
    }
    changes
}

fn sign_of(x: &BigRational) -> i8 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

fn changes_at(seq: &[RatPoly], x: &BigRational) -> usize {
    sign_changes(seq.iter().map(|p| sign_of(&p.eval(x))))
}

fn changes_at_infinity(seq: &[RatPoly], positive: bool) -> usize {
    sign_changes(seq.iter().map(|p| {
        let deg = p.degree().unwrap_or(0);
        let lead = sign_of(p.coeffs().last().expect("nonzero sturm term"));
        if positive || deg % 2 == 0 {
            lead
        } else {
            -lead
        }
    }))
}

/// Number of distinct real roots.
pub fn count_distinct_real_roots(p: &IntPoly) -> usize {
    let sf = squarefree_part(p);
    if sf.degree().unwrap_or(0) == 0 {
        return 0;
    }
    let seq = sturm_sequence(&sf);
    changes_at_infinity(&seq, false) - changes_at_infinity(&seq, true)
}

/// Number of distinct real roots in the open interval `(bound, ∞)`.
pub fn count_roots_above(p: &IntPoly, bound: &BigRational) -> usize {
    let sf = squarefree_part(p);
    if sf.degree().unwrap_or(0) == 0 {
        return 0;
    }
    let seq = sturm_sequence(&sf);
    // Sturm counts roots in (a, b]; there is no root at +∞.
    changes_at(&seq, bound) - changes_at_infinity(&seq, true)
}
