use serde::Serialize;

use crate::error::{MvError, Result};
use crate::mvcore::{eval_at, Algebra, MvElem, Term};
use crate::rat::Rat;

/// A one-variable term sending `x` to `0` and `y` to `1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Separation {
    pub x: Rat,
    pub y: Rat,
    pub term: Term,
    /// Number of doubling or squaring steps.
    pub stages: usize,
    /// `2⌈log₂(1/(y − x))⌉ + 4`.
    pub bound: usize,
    pub at_x: Rat,
    pub at_y: Rat,
}

/// `2⌈log₂(1/gap)⌉ + 4`.
pub fn stage_bound(gap: &Rat) -> usize {
    let mut j = 0;
    let mut scaled = gap.clone();
    while scaled < Rat::one() {
        scaled = scaled.scale(2);
        j += 1;
    }
    2 * j + 4
}

/// Builds the term stage by stage on the interval `[a, b]` of current
/// values: double (`t ⊕ t`) when `a = 0` or `b ≤ 1/2`, square (`t ⊙ t`)
/// when `b = 1` or `a ≥ 1/2`. An interval straddling `1/2` is squared
/// when `b` is at least as far above `1/2` as `a` is below it, and doubled
/// otherwise, so the endpoint closer to its pole gets clipped first.
pub fn separating_term(x: &Rat, y: &Rat) -> Result<Separation> {
    for v in [x, y] {
        if v.is_negative() || *v > Rat::one() {
            return Err(MvError::OutOfUnitInterval(v.to_string()));
        }
    }
    if x >= y {
        return Err(MvError::NotStrictlyOrdered { x: x.to_string(), y: y.to_string() });
    }
    let half = Rat::new(1, 2);
    let bound = stage_bound(&(y - x));
    let (mut a, mut b) = (x.clone(), y.clone());
    let mut term = Term::var("t");
    let mut stages = 0;
    while !(a.is_zero() && b.is_one()) {
        let double = if a.is_zero() {
            true
        } else if b.is_one() {
            false
        } else if b <= half {
            true
        } else if a >= half {
            false
        } else {
            &b - &half < &half - &a
        };
        if double {
            term = Term::double(term);
            a = a.scale(2).min(Rat::one());
            b = b.scale(2).min(Rat::one());
        } else {
            term = Term::square(term);
            a = (a.scale(2) - Rat::one()).max(Rat::zero());
            b = (b.scale(2) - Rat::one()).max(Rat::zero());
        }
        stages += 1;
        if stages > 2 * bound {
            return Err(MvError::failed("separating term construction should terminate", format!("({x}, {y})")));
        }
    }
    let value = |v: &Rat| -> Result<Rat> {
        match eval_at(&Algebra::UnitIntervalQ, &term, "t", &MvElem::Rational(v.clone()))? {
            MvElem::Rational(r) => Ok(r),
            other => unreachable!("unit interval value {other}"),
        }
    };
    let (at_x, at_y) = (value(x)?, value(y)?);
    if !at_x.is_zero() || !at_y.is_one() {
        return Err(MvError::failed("separating term", format!("phi({x}) = {at_x}, phi({y}) = {at_y}")));
    }
    Ok(Separation { x: x.clone(), y: y.clone(), term, stages, bound, at_x, at_y })
}
