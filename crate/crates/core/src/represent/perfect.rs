//! The equivalence between perfect MV-algebras and ℓ-groups, and the
//! representation of perfect algebras by functions into a lexicographic
//! surrogate.

use serde::Serialize;

use crate::config::Config;
use crate::error::{MvError, Result};
use crate::lgroup::{Group, GroupElem};
use crate::mvcore::{Algebra, MvElem, Strategy};
use crate::represent::embedding::{strategy, verify_algebra_map, ChainInto, Check, Coordinate, Embedding, Mapping, Side};
use crate::spectra::{self, in_radical};

/// A θ-class `[x, y]` of radical pairs, stored by its canonical
/// representative `(x ⊖ y, y ⊖ x)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct DClass {
    pub plus: MvElem,
    pub minus: MvElem,
}

/// `D(A)` for a perfect algebra `A`, together with the isomorphism onto the
/// tail group `G` of `A = Γ(ℤ ×lex G, (1, 0))`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DGroup {
    pub algebra: Algebra,
    /// The group `D(A)` is identified with.
    pub tail: Group,
    pub checks: Vec<Check>,
}

impl DGroup {
    /// Reads off the tail group; only `Ł₂` and `Γ(ℤ ×lex G, (1, 0))` are
    /// recognised.
    pub(crate) fn build(a: &Algebra) -> Result<DGroup> {
        let tail = match a {
            Algebra::FiniteChain(2) => Group::trivial(),
            Algebra::Gamma { group, unit } => match group.lex_split() {
                Some((Group::Integers, tail)) if *unit == group.lex_join_elem(GroupElem::int(1), tail.zero()) => tail,
                _ => return Err(MvError::UnsupportedShape(format!("D of {a}: expected Gamma(Lex(Z, G), (1, 0))"))),
            },
            _ => return Err(MvError::UnsupportedShape(format!("D of {a}"))),
        };
        Ok(DGroup { algebra: a.clone(), tail, checks: Vec::new() })
    }

    /// `[x, y]` for radical `x` and `y`.
    pub fn class(&self, x: &MvElem, y: &MvElem) -> Result<DClass> {
        for z in [x, y] {
            if !in_radical(&self.algebra, z)? {
                return Err(MvError::not_in(z, format!("radical of {}", self.algebra)));
            }
        }
        Ok(self.canonical(x, y))
    }

    fn canonical(&self, x: &MvElem, y: &MvElem) -> DClass {
        let a = &self.algebra;
        DClass { plus: a.minus_raw(x, y), minus: a.minus_raw(y, x) }
    }

    pub fn zero(&self) -> DClass {
        DClass { plus: self.algebra.zero(), minus: self.algebra.zero() }
    }

    pub fn add(&self, c: &DClass, d: &DClass) -> DClass {
        let a = &self.algebra;
        self.canonical(&a.plus_raw(&c.plus, &d.plus), &a.plus_raw(&c.minus, &d.minus))
    }

    /// `−[x, y] = [y, x]`.
    pub fn neg(&self, c: &DClass) -> DClass {
        DClass { plus: c.minus.clone(), minus: c.plus.clone() }
    }

    /// `[x, y] ≤ [x', y']` iff `x ⊕ y' ≤ x' ⊕ y`.
    pub fn leq(&self, c: &DClass, d: &DClass) -> bool {
        let a = &self.algebra;
        a.leq_raw(&a.plus_raw(&c.plus, &d.minus), &a.plus_raw(&d.plus, &c.minus))
    }

    fn tail_of(&self, x: &MvElem) -> GroupElem {
        match (&self.algebra, x) {
            (Algebra::Gamma { group, .. }, MvElem::Group(g)) => group.lex_split_elem(g).expect("lexicographic").1,
            _ => self.tail.zero(),
        }
    }

    fn radical_with_tail(&self, g: &GroupElem) -> MvElem {
        match &self.algebra {
            Algebra::Gamma { group, .. } => MvElem::Group(group.lex_join_elem(GroupElem::int(0), g.clone())),
            a => a.zero(),
        }
    }

    /// `[(0, g), (0, h)] ↦ g − h`.
    pub fn to_tail(&self, c: &DClass) -> GroupElem {
        self.tail.sub_raw(&self.tail_of(&c.plus), &self.tail_of(&c.minus))
    }

    pub fn from_tail(&self, g: &GroupElem) -> DClass {
        let t = &self.tail;
        let plus = t.join_raw(g, &t.zero());
        let minus = t.join_raw(&t.neg_raw(g), &t.zero());
        DClass { plus: self.radical_with_tail(&plus), minus: self.radical_with_tail(&minus) }
    }

    /// `x ∈ Rad A ↦ (0, D[x, 0])` and `x ∈ ¬Rad A ↦ (1, −D[¬x, 0])`.
    pub(crate) fn encode(&self, x: &MvElem) -> (bool, GroupElem) {
        let a = &self.algebra;
        if spectra::in_radical_raw(a, x).unwrap_or(false) {
            (false, self.to_tail(&self.canonical(x, &a.zero())))
        } else {
            let nx = a.neg_raw(x);
            (true, self.tail.neg_raw(&self.to_tail(&self.canonical(&nx, &a.zero()))))
        }
    }

    /// Inverse of [`DGroup::encode`].
    pub(crate) fn decode(&self, co: bool, g: &GroupElem) -> MvElem {
        if co {
            self.algebra.neg_raw(&self.from_tail(&self.tail.neg_raw(g)).plus)
        } else {
            self.from_tail(g).plus
        }
    }

    /// Group laws, `−[x, y] = [y, x]` and the isomorphism onto the tail, on
    /// classes built from seeded radical samples.
    fn verify(&mut self, cfg: &Config) -> Result<()> {
        let mut rng = cfg.rng(0xd0);
        let a = &self.algebra;
        let classes: Vec<DClass> =
            (0..cfg.samples).map(|_| self.canonical(&a.sample_radical(&mut rng), &a.sample_radical(&mut rng))).collect();
        let strategy = strategy(false, cfg);
        let mut laws = Check::new("group laws", strategy);
        let mut iso = Check::new("isomorphism onto the tail group", strategy);
        let n = classes.len();
        for i in 0..n {
            let (c, d, e) = (&classes[i], &classes[(i + 1) % n], &classes[(i * 31 + 7) % n]);
            laws.record(self.add(c, &self.add(d, e)) == self.add(&self.add(c, d), e), || format!("associativity at {c:?}, {d:?}, {e:?}"));
            laws.record(self.add(c, d) == self.add(d, c), || format!("commutativity at {c:?}, {d:?}"));
            laws.record(self.add(c, &self.zero()) == *c, || format!("zero at {c:?}"));
            laws.record(self.add(c, &self.neg(c)) == self.zero(), || format!("inverse at {c:?}"));
            laws.record(self.canonical(&c.plus, &c.minus) == *c, || format!("canonical form of {c:?}"));
            let t = &self.tail;
            let sum = self.to_tail(&self.add(c, d));
            iso.record(sum == t.add_raw(&self.to_tail(c), &self.to_tail(d)), || format!("additivity at {c:?}, {d:?}"));
            iso.record(self.from_tail(&self.to_tail(c)) == *c, || format!("from_tail after to_tail at {c:?}"));
            iso.record(self.leq(c, d) == t.leq_raw(&self.to_tail(c), &self.to_tail(d)), || format!("order at {c:?}, {d:?}"));
            let g = t.sample(&mut rng);
            iso.record(self.to_tail(&self.from_tail(&g)) == g, || format!("to_tail after from_tail at {g}"));
        }
        laws.require("D-group")?;
        iso.require("D-group")?;
        self.checks = vec![laws, iso];
        Ok(())
    }
}

fn require_perfect(a: &Algebra, cfg: &Config) -> Result<()> {
    if spectra::classify(a, cfg)?.is_perfect {
        Ok(())
    } else {
        Err(MvError::NotPerfect(a.to_string()))
    }
}

/// `D(A)`: radical pairs modulo `(x, y) θ (x', y')` iff `x ⊕ y' = x' ⊕ y`.
pub fn d_functor(a: &Algebra, cfg: &Config) -> Result<DGroup> {
    require_perfect(a, cfg)?;
    let mut d = DGroup::build(a)?;
    d.verify(cfg)?;
    Ok(d)
}

/// `G ↦ Γ(ℤ ×lex G, (1, 0))`, which is `Ł₂` for the trivial group.
pub fn g_functor(g: &Group, cfg: &Config) -> Result<Algebra> {
    g.validate()?;
    let a = if g.is_trivial() {
        Algebra::FiniteChain(2)
    } else {
        let lex = Group::lex([Group::Integers, g.clone()]);
        let unit = lex.lex_join_elem(GroupElem::int(1), g.zero());
        Algebra::gamma(lex, unit)?
    };
    if !spectra::classify(&a, cfg)?.is_perfect {
        return Err(MvError::failed("G(G) should be perfect", &a));
    }
    Ok(a)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RoundtripInput {
    Group(Group),
    Algebra(Algebra),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RoundtripReport {
    pub input: RoundtripInput,
    /// The ℓ-group side: `G` itself, or `D(A)` as its tail group.
    pub group: Group,
    /// The perfect side: `G(G)`, or `A` itself.
    pub algebra: Algebra,
    pub checks: Vec<Check>,
}

impl RoundtripReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Checks `D(G(G)) ≅ G` or `G(D(A)) ≅ A` through explicit maps in both
/// directions: additivity (or `⊕`/`¬` preservation) and the two-sided
/// inverse property on seeded samples.
pub fn roundtrip_check(input: &RoundtripInput, cfg: &Config) -> Result<RoundtripReport> {
    let strategy = Strategy::Sampled { count: cfg.samples, seed: cfg.seed };
    let mut hom = Check::new("homomorphism", strategy);
    let mut inverses = Check::new("two-sided inverse", strategy);
    let mut rng = cfg.rng(0xd1);
    let (group, algebra) = match input {
        RoundtripInput::Group(g) => {
            let a = g_functor(g, cfg)?;
            let d = d_functor(&a, cfg)?;
            for _ in 0..cfg.samples {
                let (x, y) = (g.sample(&mut rng), g.sample(&mut rng));
                let lhs = d.from_tail(&g.add_raw(&x, &y));
                let rhs = d.add(&d.from_tail(&x), &d.from_tail(&y));
                hom.record(lhs == rhs, || format!("alpha({x} + {y})"));
                inverses.record(d.to_tail(&d.from_tail(&x)) == x, || format!("beta(alpha({x}))"));
                let c = d.canonical(&a.sample_radical(&mut rng), &a.sample_radical(&mut rng));
                inverses.record(d.from_tail(&d.to_tail(&c)) == c, || format!("alpha(beta({c:?}))"));
            }
            (g.clone(), a)
        }
        RoundtripInput::Algebra(a) => {
            let d = d_functor(a, cfg)?;
            let b = g_functor(&d.tail, cfg)?;
            let forward = |x: &MvElem| -> MvElem {
                let (co, g) = d.encode(x);
                match &b {
                    Algebra::Gamma { group, .. } => MvElem::Group(group.lex_join_elem(GroupElem::int(co as i64), g)),
                    _ => MvElem::rational(co as i64, 1),
                }
            };
            let backward = |y: &MvElem| -> MvElem {
                match y {
                    MvElem::Group(e) => {
                        let Algebra::Gamma { group, .. } = &b else { unreachable!("group element of Γ") };
                        let (head, tail) = group.lex_split_elem(e).expect("lexicographic");
                        d.decode(*head == GroupElem::int(1), &tail)
                    }
                    _ => d.decode(y == &b.one(), &d.tail.zero()),
                }
            };
            for _ in 0..cfg.samples {
                let (x, y) = (a.sample(&mut rng), a.sample(&mut rng));
                let lhs = forward(&a.plus_raw(&x, &y));
                hom.record(lhs == b.plus_raw(&forward(&x), &forward(&y)), || format!("F({x} + {y}) = {lhs}"));
                hom.record(forward(&a.neg_raw(&x)) == b.neg_raw(&forward(&x)), || format!("F(~{x})"));
                inverses.record(backward(&forward(&x)) == x, || format!("G(F({x}))"));
                let z = b.sample(&mut rng);
                inverses.record(forward(&backward(&z)) == z, || format!("F(G({z}))"));
            }
            (d.tail.clone(), a.clone())
        }
    };
    Ok(RoundtripReport { input: input.clone(), group, algebra, checks: vec![hom, inverses] })
}

/// Embeds a perfect `A` into functions `Spec A → Γ(ℤ ×lex S, (1, 0))`, `S`
/// the lexicographic surrogate: each `A/P` is perfect, its D-group is a
/// lexicographic product of scalars included coordinatewise in `S`, and
/// the coordinates are assembled as in the Chang embedding.
pub fn perfect_representation(a: &Algebra, cfg: &Config) -> Result<Embedding> {
    require_perfect(a, cfg)?;
    let surrogate = Group::nonstandard_reals(cfg.surrogate_depth);
    let lex = Group::lex([Group::Integers, surrogate.clone()]);
    let unit = lex.lex_join_elem(GroupElem::int(1), surrogate.zero());
    let primes = spectra::spec(a, cfg)?;
    let target = Algebra::functions(Algebra::gamma(lex.clone(), unit)?, primes.len())?;
    let mut coords = Vec::new();
    for p in &primes {
        let quotient = spectra::quotient(a, p.clone(), cfg)?;
        let mut d = DGroup::build(&quotient.target)?;
        d.verify(cfg)?;
        let levels = d.tail.lex_scalars().ok_or_else(|| MvError::UnsupportedShape(format!("tail group {}", d.tail)))?;
        if levels.len() > cfg.surrogate_depth {
            return Err(MvError::SurrogateTooShallow { depth: cfg.surrogate_depth, needed: levels.len() });
        }
        coords.push(Coordinate { quotient, into: ChainInto::Perfect { d: Box::new(d), target: lex.clone() } });
    }
    let map = Mapping::Coordinates { coords, functions: true };
    let Mapping::Coordinates { coords: cs, .. } = &map else { unreachable!() };
    let f = |x: &MvElem| super::embedding::apply_coordinates(cs, true, x);
    let verification = verify_algebra_map(a, &target, &f, cfg, 0xe1)?;
    for c in &verification {
        c.require("perfect representation")?;
    }
    Ok(Embedding {
        source: Side::Algebra(a.clone()),
        target: Side::Algebra(target),
        coordinates: primes,
        surrogate: Some(surrogate),
        verification,
        map,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> Config {
        Config { samples: 200, ..Config::default() }
    }

    #[test]
    fn d_of_chang_is_the_integers() {
        let d = d_functor(&Algebra::chang(), &cfg()).unwrap();
        assert_eq!(d.tail, Group::Integers);
        let c = d.class(&MvElem::pair(0, 2), &MvElem::pair(0, 5)).unwrap();
        assert_eq!(d.to_tail(&c), GroupElem::int(-3));
        assert_eq!(c, d.class(&MvElem::pair(0, 0), &MvElem::pair(0, 3)).unwrap());
        let x = MvElem::pair(0, 4);
        assert_eq!(d.class(&x, &x).unwrap(), d.zero());
        assert_eq!(d.class(&MvElem::pair(1, 0), &x).unwrap_err().kind(), "ElementNotInAlgebra");
    }

    #[test]
    fn g_of_integers_is_chang() {
        assert_eq!(g_functor(&Group::Integers, &cfg()).unwrap(), Algebra::chang());
        assert_eq!(g_functor(&Group::trivial(), &cfg()).unwrap(), Algebra::FiniteChain(2));
    }

    #[test]
    fn not_perfect_is_rejected() {
        let err = d_functor(&Algebra::komori(3).unwrap(), &cfg()).unwrap_err();
        assert_eq!(err.kind(), "NotPerfect");
    }

    #[test]
    fn roundtrips() {
        for g in [Group::Integers, Group::Rationals, Group::trivial()] {
            let r = roundtrip_check(&RoundtripInput::Group(g), &cfg()).unwrap();
            assert!(r.passed(), "{r:?}");
        }
        let r = roundtrip_check(&RoundtripInput::Algebra(Algebra::chang()), &cfg()).unwrap();
        assert!(r.passed(), "{r:?}");
    }

    #[test]
    fn chang_into_lexicographic_functions() {
        let e = perfect_representation(&Algebra::chang(), &cfg()).unwrap();
        let image = e.apply(&MvElem::pair(1, -3)).unwrap();
        assert_eq!(image.to_string(), "[(1, (-3, 0)), (1, (0, 0))]");
        assert!(e.passed());
    }
}
