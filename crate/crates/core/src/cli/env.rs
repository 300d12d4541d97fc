//! Resolution of parsed declarations into groups, algebras, terms and
//! elements.

use std::collections::BTreeMap;

use crate::cli::syntax::{AlgExpr, Decl, GroupExpr, IdealExpr, Lit, Pos, SpecFile};
use crate::cli::CliError;
use crate::config::Config;
use crate::error::MvError;
use crate::lgroup::{Group, GroupElem};
use crate::mvcore::{make_algebra, Algebra, MvElem, Term};
use crate::spectra::{self, Ideal};

#[derive(Clone, Debug, Default)]
pub struct Env {
    pub groups: BTreeMap<String, Group>,
    pub algebras: BTreeMap<String, Algebra>,
    pub terms: BTreeMap<String, Term>,
    pub elements: BTreeMap<String, Lit>,
}

fn unknown(name: &str, pos: Pos) -> CliError {
    CliError::UnknownName { name: name.to_string(), line: pos.line, col: pos.col }
}

impl Env {
    /// Declarations are resolved in order, so every reference must point
    /// to an earlier declaration.
    pub fn load(spec: &SpecFile, cfg: &Config) -> Result<Env, CliError> {
        let mut env = Env::default();
        for (decl, pos) in &spec.decls {
            let name = decl.name().to_string();
            if env.has(&name) {
                return Err(CliError::DuplicateName { name, line: pos.line, col: pos.col });
            }
            match decl {
                Decl::Group(_, g) => {
                    let g = env.group(g)?;
                    env.groups.insert(name, g);
                }
                Decl::Algebra(_, a) => {
                    let a = env.algebra(a, cfg)?;
                    env.algebras.insert(name, a);
                }
                Decl::Term(_, t) => {
                    env.terms.insert(name, t.clone());
                }
                Decl::Element(_, x) => {
                    env.elements.insert(name, x.clone());
                }
            }
        }
        Ok(env)
    }

    pub fn has(&self, name: &str) -> bool {
        self.groups.contains_key(name)
            || self.algebras.contains_key(name)
            || self.terms.contains_key(name)
            || self.elements.contains_key(name)
    }

    pub fn group(&self, e: &GroupExpr) -> Result<Group, CliError> {
        let g = match e {
            GroupExpr::Z => Group::Integers,
            GroupExpr::Q => Group::Rationals,
            GroupExpr::Lex(cs) => Group::Lex(cs.iter().map(|c| self.group(c)).collect::<Result<_, _>>()?),
            GroupExpr::Direct(cs) => Group::Direct(cs.iter().map(|c| self.group(c)).collect::<Result<_, _>>()?),
            GroupExpr::Name(n, p) => return self.groups.get(n).cloned().ok_or_else(|| unknown(n, *p)),
        };
        g.validate()?;
        Ok(g)
    }

    pub fn algebra(&self, e: &AlgExpr, cfg: &Config) -> Result<Algebra, CliError> {
        Ok(match e {
            AlgExpr::Chain(n) => Algebra::finite_chain(*n)?,
            AlgExpr::Product(fs) => Algebra::product(fs.iter().map(|f| self.algebra(f, cfg)).collect::<Result<_, _>>()?)?,
            AlgExpr::UnitQ => Algebra::UnitIntervalQ,
            AlgExpr::Gamma(g, u) => {
                let g = self.group(g)?;
                let u = self.group_elem(&g, u)?;
                Algebra::gamma(g, u)?
            }
            AlgExpr::Komori(n) => Algebra::komori(*n)?,
            AlgExpr::Chang => Algebra::chang(),
            AlgExpr::QuasiConst(b, k) => make_algebra(Algebra::QuasiConstant { base: Box::new(self.algebra(b, cfg)?), sites: *k })?,
            AlgExpr::Functions(b, k) => Algebra::functions(self.algebra(b, cfg)?, *k)?,
            AlgExpr::Quotient(b, i) => {
                let base = self.algebra(b, cfg)?;
                let ideal = self.ideal(&base, i)?;
                spectra::quotient(&base, ideal, cfg)?.target
            }
            AlgExpr::Name(n, p) => return self.algebras.get(n).cloned().ok_or_else(|| unknown(n, *p)),
        })
    }

    pub(crate) fn deref<'a>(&'a self, l: &'a Lit) -> Result<&'a Lit, CliError> {
        match l {
            Lit::Name(n, p) => self.elements.get(n).ok_or_else(|| unknown(n, *p)).and_then(|l| self.deref(l)),
            other => Ok(other),
        }
    }

    pub fn group_elem(&self, g: &Group, l: &Lit) -> Result<GroupElem, CliError> {
        let mismatch = || CliError::Mv(MvError::ShapeMismatch { elem: l.to_string(), group: g.to_string() });
        let x = match (g, self.deref(l)?) {
            (Group::Integers, Lit::Num(q)) => GroupElem::Int(q.to_integer().ok_or_else(mismatch)?),
            (Group::Rationals, Lit::Num(q)) => GroupElem::Rat(q.clone()),
            (Group::Lex(cs) | Group::Direct(cs), Lit::Tuple(xs)) if cs.len() == xs.len() => {
                GroupElem::Tuple(cs.iter().zip(xs).map(|(c, x)| self.group_elem(c, x)).collect::<Result<_, _>>()?)
            }
            (Group::QuasiConstant { base, sites, .. }, Lit::Tuple(xs)) if *sites == xs.len() => {
                GroupElem::Tuple(xs.iter().map(|x| self.group_elem(base, x)).collect::<Result<_, _>>()?)
            }
            _ => return Err(mismatch()),
        };
        g.check(&x)?;
        Ok(x)
    }

    pub fn elem(&self, a: &Algebra, l: &Lit) -> Result<MvElem, CliError> {
        let not_in = || CliError::Mv(MvError::not_in(l, a));
        let x = match (a, self.deref(l)?) {
            (Algebra::FiniteChain(_) | Algebra::UnitIntervalQ, Lit::Num(q)) => MvElem::Rational(q.clone()),
            (Algebra::Product(fs), Lit::Tuple(xs)) if fs.len() == xs.len() => {
                MvElem::Tuple(fs.iter().zip(xs).map(|(f, x)| self.elem(f, x)).collect::<Result<_, _>>()?)
            }
            (Algebra::Gamma { group, .. }, l) => MvElem::Group(self.group_elem(group, l).map_err(|_| not_in())?),
            (Algebra::Quotient(q), l) => MvElem::class(q.rep(&self.elem(&q.base, l)?)),
            (Algebra::QuasiConstant { base, sites } | Algebra::FunctionAlgebra { base, sites }, Lit::List(xs)) if *sites == xs.len() => {
                MvElem::Function(xs.iter().map(|x| self.elem(base, x)).collect::<Result<_, _>>()?)
            }
            _ => return Err(not_in()),
        };
        a.check(&x)?;
        Ok(x)
    }

    pub fn ideal(&self, a: &Algebra, e: &IdealExpr) -> Result<Ideal, CliError> {
        Ok(match e {
            IdealExpr::Zero => Ideal::Zero,
            IdealExpr::Radical => Ideal::Radical,
            IdealExpr::Whole => Ideal::Whole,
            IdealExpr::Kernel(ks) => Ideal::kernel(ks.iter().copied()),
            IdealExpr::Tail(k) => Ideal::TailKernel(*k),
            IdealExpr::Site(i, inner) => {
                let base = match a {
                    Algebra::QuasiConstant { base, .. } | Algebra::FunctionAlgebra { base, .. } => base,
                    _ => return Err(CliError::Mv(MvError::InvalidIdeal(format!("{e} needs a function algebra")))),
                };
                Ideal::SitePreimage { site: *i, ideal: Box::new(self.ideal(base, inner)?) }
            }
            IdealExpr::Explicit(xs) => Ideal::explicit(xs.iter().map(|x| self.elem(a, x)).collect::<Result<Vec<_>, _>>()?),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli::syntax::parse_spec;

    fn load(text: &str) -> Result<Env, CliError> {
        Env::load(&parse_spec(text).unwrap(), &Config::default())
    }

    #[test]
    fn resolves_in_order() {
        let env = load("group G = lex(Z, Q)\nalgebra P = gamma(G, (1, 0/1))\nalgebra B = product(chain(2), chain(3))").unwrap();
        let p =
            Algebra::gamma(Group::lex([Group::Integers, Group::Rationals]), GroupElem::tuple([GroupElem::int(1), GroupElem::rat(0, 1)]))
                .unwrap();
        assert_eq!(env.algebras["P"], p);
        assert!(matches!(load("algebra A = product(B)\nalgebra B = chain(2)"), Err(CliError::UnknownName { line: 1, col: 21, .. })));
        assert!(matches!(load("algebra A = chain(2)\ngroup A = Z"), Err(CliError::DuplicateName { .. })));
    }

    #[test]
    fn units_are_validated() {
        let err = load("algebra A = gamma(lex(Z, Z), (0, -1))").unwrap_err();
        assert_eq!(err.kind(), "InvalidUnit");
    }

    #[test]
    fn elements_follow_the_algebra() {
        let env = load("algebra B = product(chain(2), chain(3))\nelement e = (1, 1/2)\nalgebra K = quasiconst(chang, 2)").unwrap();
        let b = &env.algebras["B"];
        assert_eq!(env.elem(b, &Lit::Name("e".into(), Pos { line: 0, col: 0 })).unwrap().to_string(), "(1, 1/2)");
        let f = crate::cli::syntax::parse_lit("[(0, 1), (0, 5)]").unwrap();
        assert_eq!(env.elem(&env.algebras["K"], &f).unwrap().to_string(), "[(0, 1), (0, 5)]");
        let bad = crate::cli::syntax::parse_lit("(1, 1/3)").unwrap();
        assert_eq!(env.elem(b, &bad).unwrap_err().kind(), "ElementNotInAlgebra");
    }
}
