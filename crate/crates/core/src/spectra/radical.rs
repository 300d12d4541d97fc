//! Radical membership and the order of an element, by closed forms on
//! structured algebras and by iteration on finite ones.
//!
//! Both rest on two facts: `x` lies in the radical iff `n·x ≤ ¬x` for every
//! `n` (for `x ≠ 0` this forces `n·x < ¬x`, since `n·x = ¬x` would give
//! `(n+1)·x = 1`), and in `Γ(G, u)` we have `n·x = u ∧ nx`, so
//! `ord(x) = min { n : nx ≥ u }` and `x ∈ Rad` iff `(n+1)x ≤ u` for all `n`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::One;
use serde::{Serialize, Serializer};

use crate::error::Result;
use crate::lgroup::{Group, GroupElem};
use crate::mvcore::{Algebra, MvElem};
use crate::rat::Rat;

/// `ord(x)`: the least `n` with `n·x = 1`, if any.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Order {
    Finite(BigInt),
    Infinite,
}

impl Order {
    pub fn is_finite(&self) -> bool {
        matches!(self, Order::Finite(_))
    }

    pub fn finite(n: u64) -> Order {
        Order::Finite(BigInt::from(n))
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(n) => write!(f, "{n}"),
            Order::Infinite => f.write_str("infinite"),
        }
    }
}

impl Serialize for Order {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// `x ∈ Rad(A)`, for an element already known to be valid.
pub(crate) fn in_radical_raw(a: &Algebra, x: &MvElem) -> Result<bool> {
    Ok(match (a, x) {
        (Algebra::FiniteChain(_) | Algebra::UnitIntervalQ, _) => a.is_zero(x),
        (Algebra::Product(fs), MvElem::Tuple(xs)) => {
            for (f, x) in fs.iter().zip(xs) {
                if !in_radical_raw(f, x)? {
                    return Ok(false);
                }
            }
            true
        }
        (Algebra::QuasiConstant { base, .. } | Algebra::FunctionAlgebra { base, .. }, MvElem::Function(xs)) => {
            for x in xs {
                if !in_radical_raw(base, x)? {
                    return Ok(false);
                }
            }
            true
        }
        (Algebra::Gamma { group, unit }, MvElem::Group(g)) => gamma_in_radical(group, unit, g),
        _ => radical_by_iteration(a, x),
    })
}

/// `∀n: n·x ≤ ¬x`, iterating until `n·x` stabilizes. Terminates on finite
/// carriers only.
pub fn radical_by_iteration(a: &Algebra, x: &MvElem) -> bool {
    let nx = a.neg_raw(x);
    let mut acc = x.clone();
    loop {
        if !a.leq_raw(&acc, &nx) {
            return false;
        }
        let next = a.plus_raw(&acc, x);
        if next == acc {
            return true;
        }
        acc = next;
    }
}

/// `(n+1)x ≤ u` for every `n`, with `0 ≤ x ≤ u`.
///
/// Scalars: only `x = 0`. Lexicographic: if the head of `u` vanishes so does
/// the head of `x` and the tail decides; otherwise a vanishing head of `x`
/// suffices, and a positive one must itself be radical in the head (for a
/// positive head strict and non-strict bounds coincide, as equality at some
/// `n` would break at `n+1`). Direct and quasi-constant products go
/// componentwise.
pub(crate) fn gamma_in_radical(g: &Group, u: &GroupElem, x: &GroupElem) -> bool {
    match (g, u, x) {
        (Group::Integers | Group::Rationals, _, _) => g.is_zero_raw(x),
        (Group::Lex(cs), GroupElem::Tuple(us), GroupElem::Tuple(xs)) if cs.len() == 1 => gamma_in_radical(&cs[0], &us[0], &xs[0]),
        (Group::Lex(cs), _, _) if cs.len() >= 2 => {
            let (head, tail) = g.lex_split().expect("two components");
            let (uh, ut) = g.lex_split_elem(u).expect("shape");
            let (xh, xt) = g.lex_split_elem(x).expect("shape");
            if head.is_zero_raw(uh) {
                gamma_in_radical(&tail, &ut, &xt)
            } else if head.is_zero_raw(xh) {
                true
            } else {
                gamma_in_radical(head, uh, xh)
            }
        }
        (Group::Direct(cs), GroupElem::Tuple(us), GroupElem::Tuple(xs)) => {
            cs.iter().zip(us.iter().zip(xs)).all(|(c, (ui, xi))| gamma_in_radical(c, ui, xi))
        }
        (Group::QuasiConstant { base, .. }, GroupElem::Tuple(us), GroupElem::Tuple(xs)) => {
            us.iter().zip(xs).all(|(ui, xi)| gamma_in_radical(base, ui, xi))
        }
        _ => g.is_zero_raw(x),
    }
}

/// `ord(x)` for an element already known to be valid.
pub(crate) fn ord_raw(a: &Algebra, x: &MvElem) -> Result<Order> {
    Ok(match (a, x) {
        (Algebra::FiniteChain(_) | Algebra::UnitIntervalQ, MvElem::Rational(q)) => {
            if q.is_zero() {
                Order::Infinite
            } else {
                Order::Finite(Rat::one().div(q).ceil())
            }
        }
        (Algebra::Product(fs), MvElem::Tuple(xs)) => max_order(fs.iter().zip(xs).map(|(f, x)| ord_raw(f, x)))?,
        (Algebra::QuasiConstant { base, .. } | Algebra::FunctionAlgebra { base, .. }, MvElem::Function(xs)) => {
            max_order(xs.iter().map(|x| ord_raw(base, x)))?
        }
        (Algebra::Gamma { group, unit }, MvElem::Group(g)) => match gamma_ord(group, unit, g) {
            Some(n) => Order::Finite(n),
            None => Order::Infinite,
        },
        _ => ord_by_iteration(a, x, usize::MAX),
    })
}

fn max_order(orders: impl Iterator<Item = Result<Order>>) -> Result<Order> {
    let mut best = Order::Finite(BigInt::one());
    for o in orders {
        best = best.max(o?);
    }
    Ok(best)
}

/// Least `n ≤ limit` with `n·x = 1`, by iterated `⊕`; `Infinite` once the
/// multiples stabilize below `1` or the limit is reached.
pub fn ord_by_iteration(a: &Algebra, x: &MvElem, limit: usize) -> Order {
    let one = a.one();
    let mut acc = x.clone();
    let mut n: u64 = 1;
    loop {
        if acc == one {
            return Order::finite(n);
        }
        let next = a.plus_raw(&acc, x);
        if next == acc || n as usize >= limit {
            return Order::Infinite;
        }
        acc = next;
        n += 1;
    }
}

/// `min { n ≥ 1 : nx ≥ u }` in `Γ(g, u)`, `None` when no such `n` exists.
///
/// Scalars give `⌈u/x⌉`. For a lexicographic product with a positive head
/// `u_h`, let `n₀` be the order of the head `x_h` in `Γ(head, u_h)`. If
/// `n₀·x_h > u_h` the tail is irrelevant and the order is `n₀`; on equality
/// it is `n₀` when `n₀·x_t ≥ u_t` and `n₀ + 1` otherwise, because
/// `(n₀+1)·x_h > u_h` already. A vanishing head of `x` below a positive head
/// of `u` never reaches `u`. Direct products take the largest order over the
/// coordinates where `u` is nonzero.
pub(crate) fn gamma_ord(g: &Group, u: &GroupElem, x: &GroupElem) -> Option<BigInt> {
    match (g, u, x) {
        (Group::Integers | Group::Rationals, _, _) => {
            let (u, x) = (u.as_rat()?, x.as_rat()?);
            if x.is_zero() {
                None
            } else {
                Some(u.div(&x).ceil().max(BigInt::one()))
            }
        }
        (Group::Lex(cs), GroupElem::Tuple(us), GroupElem::Tuple(xs)) if cs.len() == 1 => gamma_ord(&cs[0], &us[0], &xs[0]),
        (Group::Lex(cs), _, _) if cs.len() >= 2 => {
            let (head, tail) = g.lex_split().expect("two components");
            let (uh, ut) = g.lex_split_elem(u).expect("shape");
            let (xh, xt) = g.lex_split_elem(x).expect("shape");
            if head.is_zero_raw(uh) {
                return gamma_ord(&tail, &ut, &xt);
            }
            if head.is_zero_raw(xh) {
                return None;
            }
            let n0 = gamma_ord(head, uh, xh)?;
            let scaled = head.scale_raw(xh, &n0);
            if head.lt_raw(uh, &scaled) || tail.leq_raw(&ut, &tail.scale_raw(&xt, &n0)) {
                Some(n0)
            } else {
                Some(n0 + 1)
            }
        }
        (Group::Direct(cs), GroupElem::Tuple(us), GroupElem::Tuple(xs)) => {
            let mut best = BigInt::one();
            for (c, (ui, xi)) in cs.iter().zip(us.iter().zip(xs)) {
                if !c.is_zero_raw(ui) {
                    best = best.max(gamma_ord(c, ui, xi)?);
                }
            }
            Some(best)
        }
        (Group::QuasiConstant { base, .. }, GroupElem::Tuple(us), GroupElem::Tuple(xs)) => {
            let mut best = BigInt::one();
            for (ui, xi) in us.iter().zip(xs) {
                if !base.is_zero_raw(ui) {
                    best = best.max(gamma_ord(base, ui, xi)?);
                }
            }
            Some(best)
        }
        _ => {
            if g.is_zero_raw(u) {
                Some(BigInt::one())
            } else {
                None
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Config;

    #[test]
    fn chang_orders() {
        let c = Algebra::chang();
        assert_eq!(ord_raw(&c, &MvElem::pair(1, -5)).unwrap(), Order::finite(2));
        assert_eq!(ord_raw(&c, &MvElem::pair(0, 3)).unwrap(), Order::Infinite);
        assert_eq!(ord_raw(&c, &c.one()).unwrap(), Order::finite(1));
        assert_eq!(ord_raw(&c, &c.zero()).unwrap(), Order::Infinite);
    }

    #[test]
    fn komori_order_depends_on_tail_sign() {
        let k = Algebra::komori(3).unwrap();
        assert_eq!(ord_raw(&k, &MvElem::pair(1, 0)).unwrap(), Order::finite(2));
        assert_eq!(ord_raw(&k, &MvElem::pair(1, -1)).unwrap(), Order::finite(3));
        assert_eq!(ord_raw(&k, &MvElem::pair(1, 4)).unwrap(), Order::finite(2));
    }

    #[test]
    fn closed_forms_match_iteration() {
        let cfg = Config::default();
        let mut rng = cfg.rng(5);
        let algebras = [
            Algebra::chang(),
            Algebra::komori(3).unwrap(),
            Algebra::komori(5).unwrap(),
            Algebra::gamma(Group::lex([Group::Integers, Group::Rationals]), GroupElem::tuple([GroupElem::int(2), GroupElem::rat(0, 1)]))
                .unwrap(),
            Algebra::UnitIntervalQ,
        ];
        for a in &algebras {
            for _ in 0..1000 {
                let x = a.sample(&mut rng);
                let closed = ord_raw(a, &x).unwrap();
                // beyond 64 steps a finite order would have shown in the closed form already
                let iter = ord_by_iteration(a, &x, 64);
                if let Order::Finite(n) = &closed {
                    if *n <= BigInt::from(64) {
                        assert_eq!(closed, iter, "{a}: {x}");
                    }
                } else {
                    assert_eq!(iter, Order::Infinite, "{a}: {x}");
                }
                let rad = in_radical_raw(a, &x).unwrap();
                let nx = a.neg_raw(&x);
                let mut acc = x.clone();
                let mut bounded = true;
                for _ in 0..64 {
                    bounded &= a.leq_raw(&acc, &nx);
                    acc = a.plus_raw(&acc, &x);
                }
                if rad {
                    assert!(bounded, "{a}: {x}");
                } else {
                    assert!(!bounded, "{a}: {x}");
                }
            }
        }
    }

    #[test]
    fn finite_radical_by_iteration() {
        let a = Algebra::FiniteChain(5);
        for k in 0..5 {
            let x = MvElem::Rational(Rat::chain_point(k, 5));
            assert_eq!(radical_by_iteration(&a, &x), k == 0);
        }
    }
}
