//! Reference implementations used as oracles. They work on plain integers
//! and share no code with the library beyond converting the final answer.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};

use mvkit::{Algebra, MvElem, Rat, Term};

/// A product of Łukasiewicz chains `Ł_{n₁} × … × Ł_{n_m}`, elements stored
/// as index vectors `k_i ∈ {0, …, n_i − 1}`.
#[derive(Clone, Debug)]
pub struct Chains {
    pub ns: Vec<u64>,
}

pub type Point = Vec<u64>;

impl Chains {
    pub fn new(ns: &[u64]) -> Chains {
        Chains { ns: ns.to_vec() }
    }

    pub fn size(&self) -> u64 {
        self.ns.iter().product()
    }

    /// Elements in lexicographic order of index vectors.
    pub fn elements(&self) -> Vec<Point> {
        let mut out = vec![vec![]];
        for &n in &self.ns {
            out = out.into_iter().flat_map(|p: Point| (0..n).map(move |k| [p.clone(), vec![k]].concat())).collect();
        }
        out
    }

    pub fn plus(&self, x: &Point, y: &Point) -> Point {
        self.ns.iter().zip(x.iter().zip(y)).map(|(n, (a, b))| (a + b).min(n - 1)).collect()
    }

    pub fn neg(&self, x: &Point) -> Point {
        self.ns.iter().zip(x).map(|(n, a)| n - 1 - a).collect()
    }

    /// `x ⊙ ¬y`, coordinatewise truncated difference.
    pub fn minus(&self, x: &Point, y: &Point) -> Point {
        x.iter().zip(y).map(|(a, b)| a.saturating_sub(*b)).collect()
    }

    pub fn leq(&self, x: &Point, y: &Point) -> bool {
        x.iter().zip(y).all(|(a, b)| a <= b)
    }

    pub fn zero(&self) -> Point {
        vec![0; self.ns.len()]
    }

    /// `ord(x)`: least `n` with `n·x = 1`, `None` when infinite.
    pub fn ord(&self, x: &Point) -> Option<u64> {
        let mut n = 1;
        let mut acc = x.clone();
        let one = self.neg(&self.zero());
        while acc != one {
            if n > self.ns.iter().max().copied().unwrap_or(2) {
                return None;
            }
            acc = self.plus(&acc, x);
            n += 1;
        }
        Some(n)
    }

    /// All ideals, as principal ideals `{y : y ≤ n·x for some n}`.
    pub fn ideals(&self) -> BTreeSet<BTreeSet<Point>> {
        let all = self.elements();
        let mut out = BTreeSet::new();
        for x in &all {
            let mut multiple = x.clone();
            for _ in 0..*self.ns.iter().max().unwrap_or(&2) {
                multiple = self.plus(&multiple, x);
            }
            out.insert(all.iter().filter(|y| self.leq(y, &multiple)).cloned().collect());
        }
        out
    }

    /// Prime: for all `x, y`, `x ⊖ y` or `y ⊖ x` is in the ideal.
    pub fn is_prime(&self, ideal: &BTreeSet<Point>) -> bool {
        let all = self.elements();
        ideal.len() < all.len()
            && all.iter().all(|x| all.iter().all(|y| ideal.contains(&self.minus(x, y)) || ideal.contains(&self.minus(y, x))))
    }

    pub fn algebra(&self) -> Algebra {
        if self.ns.len() == 1 {
            Algebra::FiniteChain(self.ns[0])
        } else {
            Algebra::product(self.ns.iter().map(|&n| Algebra::FiniteChain(n)).collect()).unwrap()
        }
    }

    pub fn to_elem(&self, x: &Point) -> MvElem {
        let coords: Vec<MvElem> = self.ns.iter().zip(x).map(|(&n, &k)| MvElem::Rational(Rat::new(k as i64, n as i64 - 1))).collect();
        if coords.len() == 1 {
            coords.into_iter().next().unwrap()
        } else {
            MvElem::Tuple(coords)
        }
    }
}

/// Every multiset of chain sizes `n ≥ 2` (ascending) whose product has at
/// most `max` elements, with at most `factors` factors.
pub fn chain_products(max: u64, factors: usize) -> Vec<Vec<u64>> {
    fn go(start: u64, left: u64, factors: usize, prefix: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if !prefix.is_empty() {
            out.push(prefix.clone());
        }
        if prefix.len() == factors {
            return;
        }
        for n in start..=left {
            prefix.push(n);
            go(n, left / n, factors, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(2, max, factors, &mut Vec::new(), &mut out);
    out
}

/// Exact rational in lowest terms over `i128`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Q(pub i128, pub i128);

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

impl Q {
    pub fn new(n: i128, d: i128) -> Q {
        let g = gcd(n, d).max(1);
        let s = if d < 0 { -1 } else { 1 };
        Q(s * n / g, s * d / g)
    }

    pub fn to_rat(self) -> Rat {
        Rat::new(self.0 as i64, self.1 as i64)
    }
}

/// Evaluates a term on `[0, 1] ∩ ℚ` with `x ⊕ y = min(1, x + y)` and
/// `¬x = 1 − x`, memoised on shared subterms.
pub fn eval_unit(t: &Term, var: &str, x: Q) -> Q {
    fn go(t: &Term, var: &str, x: Q, memo: &mut HashMap<*const Term, Q>) -> Q {
        let key = t as *const Term;
        if let Some(v) = memo.get(&key) {
            return *v;
        }
        let v = match t {
            Term::Var(name) => {
                assert_eq!(name, var, "unexpected variable");
                x
            }
            Term::Zero => Q(0, 1),
            Term::Neg(s) => {
                let Q(n, d) = go(s, var, x, memo);
                Q::new(d - n, d)
            }
            Term::Plus(a, b) => {
                let (Q(n1, d1), Q(n2, d2)) = (go(a, var, x, memo), go(b, var, x, memo));
                let s = Q::new(n1 * d2 + n2 * d1, d1 * d2);
                if s.0 >= s.1 {
                    Q(1, 1)
                } else {
                    s
                }
            }
        };
        memo.insert(key, v);
        v
    }
    go(t, var, x, &mut HashMap::new())
}

/// `2⌈log₂(1/gap)⌉ + 4` computed on integers.
pub fn stage_limit(gap: Q) -> usize {
    let mut j = 0;
    let mut scaled = gap.0;
    while scaled < gap.1 {
        scaled *= 2;
        j += 1;
    }
    2 * j + 4
}
