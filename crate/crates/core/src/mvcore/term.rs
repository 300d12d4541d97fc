use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;
use std::rc::Rc;

use serde::{Serialize, Serializer};

use crate::error::{MvError, Result};
use crate::mvcore::{Algebra, MvElem};

/// MV-term over the primitive basis `{x, 0, ¬, ⊕}`. The derived
/// constructors expand into this basis, so structurally equal terms are
/// equal as syntax trees. Subterms are shared, and evaluation visits a
/// shared operand of `⊕` once.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(String),
    Zero,
    Neg(Rc<Term>),
    Plus(Rc<Term>, Rc<Term>),
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(name.to_string())
    }

    /// `1 = ¬0`.
    pub fn one() -> Term {
        Term::neg(Term::Zero)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn neg(t: Term) -> Term {
        Term::Neg(Rc::new(t))
    }

    pub fn plus(a: Term, b: Term) -> Term {
        Term::Plus(Rc::new(a), Rc::new(b))
    }

    /// `a ⊙ b = ¬(¬a ⊕ ¬b)`.
    pub fn times(a: Term, b: Term) -> Term {
        Term::neg(Term::plus(Term::neg(a), Term::neg(b)))
    }

    /// `t ⊕ t` with one shared operand.
    pub fn double(t: Term) -> Term {
        let t = Rc::new(t);
        Term::Plus(t.clone(), t)
    }

    /// `t ⊙ t` with one shared operand.
    pub fn square(t: Term) -> Term {
        let n = Rc::new(Term::neg(t));
        Term::neg(Term::Plus(n.clone(), n))
    }

    /// `a ⊖ b = a ⊙ ¬b`.
    pub fn minus(a: Term, b: Term) -> Term {
        Term::times(a, Term::neg(b))
    }

    /// `a ∨ b = (a ⊖ b) ⊕ b`.
    pub fn join(a: Term, b: Term) -> Term {
        Term::plus(Term::minus(a, b.clone()), b)
    }

    /// `a ∧ b = a ⊙ (¬a ⊕ b)`.
    pub fn meet(a: Term, b: Term) -> Term {
        Term::times(a.clone(), Term::plus(Term::neg(a), b))
    }

    pub fn vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out, &mut HashSet::new());
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>, seen: &mut HashSet<*const Term>) {
        if !seen.insert(self as *const Term) {
            return;
        }
        match self {
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::Zero => {}
            Term::Neg(t) => t.collect_vars(out, seen),
            Term::Plus(a, b) => {
                a.collect_vars(out, seen);
                b.collect_vars(out, seen);
            }
        }
    }

    /// Number of primitive nodes of the unshared tree (saturating).
    pub fn size(&self) -> u64 {
        match self {
            Term::Var(_) | Term::Zero => 1,
            Term::Neg(t) => t.size().saturating_add(1),
            Term::Plus(a, b) => a.size().saturating_add(b.size()).saturating_add(1),
        }
    }

    /// Operands of `¬(¬a ⊕ ¬b)`, the shape of `a ⊙ b`.
    fn as_times(&self) -> Option<(&Term, &Term)> {
        match self {
            Term::Neg(inner) => match inner.as_ref() {
                Term::Plus(l, r) => match (l.as_ref(), r.as_ref()) {
                    (Term::Neg(a), Term::Neg(b)) => Some((a, b)),
                    _ => None,
                },
                _ => None,
            },
            _ => None,
        }
    }

    fn is_one(&self) -> bool {
        matches!(self, Term::Neg(t) if **t == Term::Zero)
    }

    /// Printer precedence: 1 for `+`, 2 for `*`, 3 for atoms and `~`.
    fn level(&self) -> u8 {
        match self {
            Term::Plus(..) => 1,
            t if t.as_times().is_some() => 2,
            _ => 3,
        }
    }

    fn write_at(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.level() < min {
            f.write_str("(")?;
            self.write_at(f, 1)?;
            return f.write_str(")");
        }
        match self {
            Term::Var(v) => f.write_str(v),
            Term::Zero => f.write_str("0"),
            t if t.is_one() => f.write_str("1"),
            t if t.as_times().is_some() => {
                let (a, b) = t.as_times().expect("checked");
                a.write_at(f, 2)?;
                f.write_str(" * ")?;
                b.write_at(f, 3)
            }
            Term::Neg(t) => {
                f.write_str("~")?;
                t.write_at(f, 3)
            }
            Term::Plus(a, b) => {
                a.write_at(f, 1)?;
                f.write_str(" + ")?;
                b.write_at(f, 2)
            }
        }
    }
}

/// ASCII surface syntax: `+` for `⊕`, `*` for `⊙`, `~` for `¬`. Reparsing
/// the output gives back the same tree.
impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_at(f, 1)
    }
}

impl Serialize for Term {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

pub type Env = BTreeMap<String, MvElem>;

/// Evaluates `t` in `a` by structural recursion on `⊕` and `¬`.
pub fn eval_term(a: &Algebra, t: &Term, env: &Env) -> Result<MvElem> {
    for v in t.vars() {
        let x = env.get(&v).ok_or_else(|| MvError::UnboundVariable(v.clone()))?;
        a.check(x)?;
    }
    Ok(eval_raw(a, t, env))
}

pub(crate) fn eval_raw(a: &Algebra, t: &Term, env: &Env) -> MvElem {
    match t {
        Term::Var(v) => env[v].clone(),
        Term::Zero => a.zero(),
        Term::Neg(s) => a.neg_raw(&eval_raw(a, s, env)),
        Term::Plus(l, r) if Rc::ptr_eq(l, r) => {
            let v = eval_raw(a, l, env);
            a.plus_raw(&v, &v)
        }
        Term::Plus(l, r) => a.plus_raw(&eval_raw(a, l, env), &eval_raw(a, r, env)),
    }
}

/// Single-variable convenience for [`eval_term`].
pub fn eval_at(a: &Algebra, t: &Term, var: &str, x: &MvElem) -> Result<MvElem> {
    eval_term(a, t, &Env::from([(var.to_string(), x.clone())]))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> Term {
        Term::var("x")
    }

    #[test]
    fn axiom_shaped_terms() {
        let a = Algebra::UnitIntervalQ;
        let v = MvElem::rational(2, 7);
        assert_eq!(eval_at(&a, &Term::plus(x(), Term::Zero), "x", &v).unwrap(), v);
        assert_eq!(eval_at(&a, &Term::neg(Term::neg(x())), "x", &v).unwrap(), v);
    }

    #[test]
    fn doubled_square_at_two_thirds() {
        let a = Algebra::UnitIntervalQ;
        let s = Term::times(x(), x());
        let t = Term::plus(s.clone(), s);
        assert_eq!(eval_at(&a, &t, "x", &MvElem::rational(2, 3)).unwrap(), MvElem::rational(2, 3));
    }

    #[test]
    fn shared_constructors_match_plain_ones() {
        assert_eq!(Term::double(x()), Term::plus(x(), x()));
        assert_eq!(Term::square(x()), Term::times(x(), x()));
        let mut t = x();
        for _ in 0..40 {
            t = Term::square(Term::double(t));
        }
        assert_eq!(eval_at(&Algebra::UnitIntervalQ, &t, "x", &MvElem::rational(1, 3)).unwrap(), MvElem::rational(1, 3));
        assert_eq!(t.vars().len(), 1);
    }

    #[test]
    fn unbound_variables_are_reported() {
        let err = eval_term(&Algebra::UnitIntervalQ, &Term::var("y"), &Env::new()).unwrap_err();
        assert_eq!(err, MvError::UnboundVariable("y".into()));
    }

    #[test]
    fn printing() {
        let s = Term::times(x(), x());
        assert_eq!(Term::plus(Term::plus(s.clone(), s.clone()), Term::plus(s.clone(), s)).to_string(), "x * x + x * x + (x * x + x * x)");
        assert_eq!(Term::one().to_string(), "1");
        assert_eq!(Term::neg(Term::plus(x(), Term::Zero)).to_string(), "~(x + 0)");
        assert_eq!(Term::minus(x(), Term::var("y")).to_string(), "x * ~y");
    }
}
