//! Concrete MV-algebras and their elements.

use std::collections::BTreeMap;
use std::fmt;

use rand::Rng as _;
use serde::{Serialize, Serializer};

use crate::config::{Config, Rng};
use crate::error::{MvError, Result};
use crate::lgroup::group::write_seq;
use crate::lgroup::{Group, GroupElem};
use crate::rat::Rat;
use crate::spectra::{self, Ideal};

/// Descriptor of a concrete MV-algebra.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Algebra {
    /// Łukasiewicz chain `{0, 1/(n-1), …, 1}`.
    FiniteChain(u64),
    /// Cartesian product with componentwise operations.
    Product(Vec<Algebra>),
    /// `[0, 1] ∩ ℚ` with `x ⊕ y = min(1, x + y)` and `¬x = 1 - x`.
    UnitIntervalQ,
    /// The interval `[0, u]` of an ℓ-group with `x ⊕ y = u ∧ (x + y)` and
    /// `¬x = u - x`.
    Gamma {
        group: Group,
        unit: GroupElem,
    },
    Quotient(Quotient),
    /// Functions `{0..sites} -> base` whose values lie in one class modulo
    /// the radical of `base`.
    QuasiConstant {
        base: Box<Algebra>,
        sites: usize,
    },
    /// All functions `{0..sites} -> base`, pointwise.
    FunctionAlgebra {
        base: Box<Algebra>,
        sites: usize,
    },
}

/// Quotient by an ideal, elements represented by the least member of their
/// class. For finite bases the class table is computed once at
/// construction.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Quotient {
    pub base: Box<Algebra>,
    pub ideal: Ideal,
    reps: BTreeMap<MvElem, MvElem>,
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MvElem {
    Rational(Rat),
    Tuple(Vec<MvElem>),
    /// Element of a function algebra, one value per site.
    Function(Vec<MvElem>),
    Group(GroupElem),
    Class(Box<MvElem>),
}

impl MvElem {
    pub fn rational(n: i64, d: i64) -> MvElem {
        MvElem::Rational(Rat::new(n, d))
    }

    pub fn pair(a: i64, b: i64) -> MvElem {
        MvElem::Group(GroupElem::pair(a, b))
    }

    pub fn tuple(items: impl IntoIterator<Item = MvElem>) -> MvElem {
        MvElem::Tuple(items.into_iter().collect())
    }

    pub fn function(items: impl IntoIterator<Item = MvElem>) -> MvElem {
        MvElem::Function(items.into_iter().collect())
    }

    pub fn class(rep: MvElem) -> MvElem {
        MvElem::Class(Box::new(rep))
    }

    pub fn components(&self) -> Option<&[MvElem]> {
        match self {
            MvElem::Tuple(xs) | MvElem::Function(xs) => Some(xs),
            _ => None,
        }
    }

    pub fn as_rat(&self) -> Option<&Rat> {
        match self {
            MvElem::Rational(q) => Some(q),
            _ => None,
        }
    }

    pub fn as_group(&self) -> Option<&GroupElem> {
        match self {
            MvElem::Group(g) => Some(g),
            _ => None,
        }
    }
}

impl fmt::Display for MvElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MvElem::Rational(q) => write!(f, "{q}"),
            MvElem::Tuple(xs) => write_seq(f, "(", ")", xs),
            MvElem::Function(xs) => write_seq(f, "[", "]", xs),
            MvElem::Group(g) => write!(f, "{g}"),
            MvElem::Class(r) => write!(f, "{r}"),
        }
    }
}

impl fmt::Debug for MvElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MvElem::Class(r) => write!(f, "[{r:?}]/~"),
            other => fmt::Display::fmt(other, f),
        }
    }
}

impl Serialize for MvElem {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl fmt::Display for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Algebra::FiniteChain(n) => write!(f, "chain({n})"),
            Algebra::Product(fs) => write_seq(f, "product(", ")", fs),
            Algebra::UnitIntervalQ => f.write_str("unitQ"),
            Algebra::Gamma { group, unit } => write!(f, "gamma({group}, {unit})"),
            Algebra::Quotient(q) => write!(f, "quotient({}, {})", q.base, q.ideal),
            Algebra::QuasiConstant { base, sites } => write!(f, "quasiconst({base}, {sites})"),
            Algebra::FunctionAlgebra { base, sites } => write!(f, "functions({base}, {sites})"),
        }
    }
}

impl Serialize for Algebra {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Validates a descriptor and returns it unchanged.
pub fn make_algebra(desc: Algebra) -> Result<Algebra> {
    desc.validate()?;
    Ok(desc)
}

impl Algebra {
    pub fn finite_chain(n: u64) -> Result<Algebra> {
        make_algebra(Algebra::FiniteChain(n))
    }

    /// Komori chain of rank `n`: `Γ(ℤ ×lex ℤ, (n-1, 0))`.
    pub fn komori(n: u64) -> Result<Algebra> {
        if n < 2 {
            return Err(MvError::InvalidDescriptor(format!("komori rank must be at least 2, got {n}")));
        }
        let n = i64::try_from(n).map_err(|_| MvError::InvalidDescriptor("komori rank too large".into()))?;
        make_algebra(Algebra::Gamma { group: Group::lex([Group::Integers, Group::Integers]), unit: GroupElem::pair(n - 1, 0) })
    }

    /// Chang's algebra, the Komori chain of rank 2.
    pub fn chang() -> Algebra {
        Algebra::komori(2).expect("rank 2 is valid")
    }

    pub fn gamma(group: Group, unit: GroupElem) -> Result<Algebra> {
        make_algebra(Algebra::Gamma { group, unit })
    }

    pub fn product(factors: Vec<Algebra>) -> Result<Algebra> {
        make_algebra(Algebra::Product(factors))
    }

    pub fn functions(base: Algebra, sites: usize) -> Result<Algebra> {
        make_algebra(Algebra::FunctionAlgebra { base: Box::new(base), sites })
    }

    /// Quotient descriptor. Finite bases accept any ideal; infinite bases
    /// only the trivial ones (use [`spectra::quotient`] for the structured
    /// symbolic quotients).
    pub fn quotient_of(base: Algebra, ideal: Ideal, cfg: &Config) -> Result<Algebra> {
        base.validate()?;
        let ideal = spectra::resolve_ideal(&base, ideal, cfg)?;
        let reps = match &ideal {
            Ideal::Zero | Ideal::Whole => BTreeMap::new(),
            Ideal::Explicit(_) => {
                let carrier = base
                    .elements(cfg.cap)?
                    .ok_or_else(|| MvError::UnsupportedQuotient(format!("explicit ideal on infinite algebra {base}")))?;
                spectra::check_ideal(&base, &ideal, cfg).map_err(|e| MvError::UnsupportedQuotient(e.to_string()))?;
                let mut reps = BTreeMap::new();
                for x in &carrier {
                    if reps.contains_key(x) {
                        continue;
                    }
                    for y in &carrier {
                        if !reps.contains_key(y) && ideal.contains(&base, &base.dist(x, y)?)? {
                            reps.insert(y.clone(), x.clone());
                        }
                    }
                }
                reps
            }
            other => return Err(MvError::UnsupportedQuotient(format!("{other} on {base}; use the structured quotient instead"))),
        };
        Ok(Algebra::Quotient(Quotient { base: Box::new(base), ideal, reps }))
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Algebra::FiniteChain(n) if *n >= 2 => Ok(()),
            Algebra::FiniteChain(n) => Err(MvError::InvalidDescriptor(format!("chain({n}) needs at least 2 elements"))),
            Algebra::Product(fs) if fs.is_empty() => Err(MvError::EmptyProduct),
            Algebra::Product(fs) => fs.iter().try_for_each(Algebra::validate),
            Algebra::UnitIntervalQ => Ok(()),
            Algebra::Gamma { group, unit } => {
                group.validate()?;
                group.check(unit)?;
                if group.lt_raw(&group.zero(), unit) {
                    Ok(())
                } else {
                    Err(MvError::InvalidUnit(unit.to_string()))
                }
            }
            Algebra::Quotient(q) => {
                q.base.validate()?;
                match (&q.ideal, q.reps.is_empty()) {
                    (Ideal::Zero | Ideal::Whole, _) | (Ideal::Explicit(_), false) => Ok(()),
                    _ => Err(MvError::UnsupportedQuotient(format!("{self}"))),
                }
            }
            Algebra::QuasiConstant { base, sites } => {
                base.validate()?;
                if *sites == 0 {
                    return Err(MvError::InvalidDescriptor("a quasi-constant algebra needs at least one site".into()));
                }
                let class = spectra::classify(base, &Config::default()).map_err(|e| MvError::BaseNotSupported(format!("{base}: {e}")))?;
                if class.is_local {
                    Ok(())
                } else {
                    Err(MvError::BaseNotSupported(format!("{base} is not local")))
                }
            }
            Algebra::FunctionAlgebra { base, sites } => {
                base.validate()?;
                if *sites == 0 {
                    return Err(MvError::InvalidDescriptor("a function algebra needs at least one site".into()));
                }
                Ok(())
            }
        }
    }

    pub fn zero(&self) -> MvElem {
        match self {
            Algebra::FiniteChain(_) | Algebra::UnitIntervalQ => MvElem::Rational(Rat::zero()),
            Algebra::Product(fs) => MvElem::Tuple(fs.iter().map(Algebra::zero).collect()),
            Algebra::Gamma { group, .. } => MvElem::Group(group.zero()),
            Algebra::Quotient(q) => MvElem::class(q.rep(&q.base.zero())),
            Algebra::QuasiConstant { base, sites } | Algebra::FunctionAlgebra { base, sites } => {
                MvElem::Function(vec![base.zero(); *sites])
            }
        }
    }

    pub fn one(&self) -> MvElem {
        self.neg_raw(&self.zero())
    }

    pub fn contains(&self, x: &MvElem) -> bool {
        match (self, x) {
            (Algebra::FiniteChain(n), MvElem::Rational(q)) => q.chain_index(*n).is_some(),
            (Algebra::UnitIntervalQ, MvElem::Rational(q)) => !q.is_negative() && *q <= Rat::one(),
            (Algebra::Product(fs), MvElem::Tuple(xs)) => fs.len() == xs.len() && fs.iter().zip(xs).all(|(f, x)| f.contains(x)),
            (Algebra::Gamma { group, unit }, MvElem::Group(g)) => {
                group.contains(g) && group.leq_raw(&group.zero(), g) && group.leq_raw(g, unit)
            }
            (Algebra::Quotient(q), MvElem::Class(r)) => q.base.contains(r) && q.rep(r) == **r,
            (Algebra::FunctionAlgebra { base, sites }, MvElem::Function(xs)) => xs.len() == *sites && xs.iter().all(|x| base.contains(x)),
            (Algebra::QuasiConstant { base, sites }, MvElem::Function(xs)) => {
                xs.len() == *sites
                    && xs.iter().all(|x| base.contains(x))
                    && xs.iter().all(|x| spectra::in_radical_raw(base, &base.dist_raw(x, &xs[0])).unwrap_or(false))
            }
            _ => false,
        }
    }

    pub fn check(&self, x: &MvElem) -> Result<()> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(MvError::not_in(x, self))
        }
    }

    /// `x ⊕ y`.
    pub fn plus(&self, x: &MvElem, y: &MvElem) -> Result<MvElem> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.plus_raw(x, y))
    }

    /// `¬x`.
    pub fn neg(&self, x: &MvElem) -> Result<MvElem> {
        self.check(x)?;
        Ok(self.neg_raw(x))
    }

    /// `x ⊙ y = ¬(¬x ⊕ ¬y)`.
    pub fn times(&self, x: &MvElem, y: &MvElem) -> Result<MvElem> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.times_raw(x, y))
    }

    /// `x ⊖ y = x ⊙ ¬y`.
    pub fn minus(&self, x: &MvElem, y: &MvElem) -> Result<MvElem> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.minus_raw(x, y))
    }

    /// `x ∨ y = (x ⊖ y) ⊕ y`.
    pub fn join(&self, x: &MvElem, y: &MvElem) -> Result<MvElem> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.join_raw(x, y))
    }

    /// `x ∧ y = x ⊙ (¬x ⊕ y)`.
    pub fn meet(&self, x: &MvElem, y: &MvElem) -> Result<MvElem> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.meet_raw(x, y))
    }

    /// Chang distance `d(x, y) = (x ⊖ y) ⊕ (y ⊖ x)`.
    pub fn dist(&self, x: &MvElem, y: &MvElem) -> Result<MvElem> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.dist_raw(x, y))
    }

    /// `x ≤ y` iff `x ⊖ y = 0`.
    pub fn leq(&self, x: &MvElem, y: &MvElem) -> Result<bool> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.leq_raw(x, y))
    }

    /// `n·x = x ⊕ … ⊕ x` (`0` when `n = 0`).
    pub fn multiple(&self, x: &MvElem, n: u64) -> Result<MvElem> {
        self.check(x)?;
        let mut acc = self.zero();
        for _ in 0..n {
            acc = self.plus_raw(&acc, x);
        }
        Ok(acc)
    }

    pub(crate) fn plus_raw(&self, x: &MvElem, y: &MvElem) -> MvElem {
        match (self, x, y) {
            (Algebra::FiniteChain(_) | Algebra::UnitIntervalQ, MvElem::Rational(a), MvElem::Rational(b)) => {
                MvElem::Rational((a + b).min(Rat::one()))
            }
            (Algebra::Product(fs), MvElem::Tuple(xs), MvElem::Tuple(ys)) => {
                MvElem::Tuple(fs.iter().zip(xs.iter().zip(ys)).map(|(f, (a, b))| f.plus_raw(a, b)).collect())
            }
            (Algebra::Gamma { group, unit }, MvElem::Group(a), MvElem::Group(b)) => {
                MvElem::Group(group.meet_raw(unit, &group.add_raw(a, b)))
            }
            (Algebra::Quotient(q), MvElem::Class(a), MvElem::Class(b)) => MvElem::class(q.rep(&q.base.plus_raw(a, b))),
            (Algebra::QuasiConstant { base, .. } | Algebra::FunctionAlgebra { base, .. }, MvElem::Function(xs), MvElem::Function(ys)) => {
                MvElem::Function(xs.iter().zip(ys).map(|(a, b)| base.plus_raw(a, b)).collect())
            }
            _ => unreachable!("operands validated against {self}"),
        }
    }

    pub(crate) fn neg_raw(&self, x: &MvElem) -> MvElem {
        match (self, x) {
            (Algebra::FiniteChain(_) | Algebra::UnitIntervalQ, MvElem::Rational(a)) => MvElem::Rational(&Rat::one() - a),
            (Algebra::Product(fs), MvElem::Tuple(xs)) => MvElem::Tuple(fs.iter().zip(xs).map(|(f, a)| f.neg_raw(a)).collect()),
            (Algebra::Gamma { group, unit }, MvElem::Group(a)) => MvElem::Group(group.sub_raw(unit, a)),
            (Algebra::Quotient(q), MvElem::Class(a)) => MvElem::class(q.rep(&q.base.neg_raw(a))),
            (Algebra::QuasiConstant { base, .. } | Algebra::FunctionAlgebra { base, .. }, MvElem::Function(xs)) => {
                MvElem::Function(xs.iter().map(|a| base.neg_raw(a)).collect())
            }
            _ => unreachable!("operand validated against {self}"),
        }
    }

    pub(crate) fn times_raw(&self, x: &MvElem, y: &MvElem) -> MvElem {
        self.neg_raw(&self.plus_raw(&self.neg_raw(x), &self.neg_raw(y)))
    }

    pub(crate) fn minus_raw(&self, x: &MvElem, y: &MvElem) -> MvElem {
        self.times_raw(x, &self.neg_raw(y))
    }

    pub(crate) fn join_raw(&self, x: &MvElem, y: &MvElem) -> MvElem {
        self.plus_raw(&self.minus_raw(x, y), y)
    }

    pub(crate) fn meet_raw(&self, x: &MvElem, y: &MvElem) -> MvElem {
        self.times_raw(x, &self.plus_raw(&self.neg_raw(x), y))
    }

    pub(crate) fn dist_raw(&self, x: &MvElem, y: &MvElem) -> MvElem {
        self.plus_raw(&self.minus_raw(x, y), &self.minus_raw(y, x))
    }

    pub(crate) fn leq_raw(&self, x: &MvElem, y: &MvElem) -> bool {
        self.minus_raw(x, y) == self.zero()
    }

    pub(crate) fn is_zero(&self, x: &MvElem) -> bool {
        *x == self.zero()
    }

    /// True when the carrier is finite, decided structurally.
    pub fn is_finite(&self) -> bool {
        match self {
            Algebra::FiniteChain(_) => true,
            Algebra::UnitIntervalQ => false,
            Algebra::Product(fs) => fs.iter().all(Algebra::is_finite),
            Algebra::Gamma { group, unit } => interval_is_finite(group, &group.zero(), unit),
            Algebra::Quotient(q) => q.ideal == Ideal::Whole || q.base.is_finite(),
            Algebra::QuasiConstant { base, .. } | Algebra::FunctionAlgebra { base, .. } => base.is_finite(),
        }
    }

    /// The carrier in canonical order: `Ok(None)` when infinite,
    /// `CarrierTooLarge` when finite but larger than `cap`.
    pub fn elements(&self, cap: usize) -> Result<Option<Vec<MvElem>>> {
        if !self.is_finite() {
            return Ok(None);
        }
        let too_large = || MvError::CarrierTooLarge { algebra: self.to_string(), cap };
        let mut out = match self {
            Algebra::FiniteChain(n) => {
                if *n as usize > cap {
                    return Err(too_large());
                }
                (0..*n).map(|k| MvElem::Rational(Rat::chain_point(k, *n))).collect()
            }
            Algebra::Product(fs) => {
                let mut acc: Vec<Vec<MvElem>> = vec![Vec::new()];
                for f in fs {
                    let values = f.elements(cap)?.expect("finite factor");
                    if acc.len().saturating_mul(values.len()) > cap {
                        return Err(too_large());
                    }
                    acc = acc
                        .iter()
                        .flat_map(|prefix| {
                            values.iter().map(move |v| {
                                let mut p = prefix.clone();
                                p.push(v.clone());
                                p
                            })
                        })
                        .collect();
                }
                acc.into_iter().map(MvElem::Tuple).collect()
            }
            Algebra::Gamma { group, unit } => {
                let items = group.interval(&group.zero(), unit, cap).ok_or_else(too_large)?;
                items.into_iter().map(MvElem::Group).collect()
            }
            Algebra::Quotient(q) => match q.ideal {
                Ideal::Whole => vec![MvElem::class(q.base.zero())],
                _ => {
                    let base = q.base.elements(cap)?.expect("finite base");
                    let mut reps: Vec<MvElem> = base.iter().map(|x| q.rep(x)).collect();
                    reps.sort();
                    reps.dedup();
                    reps.into_iter().map(MvElem::class).collect()
                }
            },
            Algebra::QuasiConstant { base, sites } | Algebra::FunctionAlgebra { base, sites } => {
                let values = base.elements(cap)?.expect("finite base");
                let mut acc: Vec<Vec<MvElem>> = vec![Vec::new()];
                for _ in 0..*sites {
                    let mut next = Vec::new();
                    for prefix in &acc {
                        for v in &values {
                            let mut p = prefix.clone();
                            p.push(v.clone());
                            if matches!(self, Algebra::QuasiConstant { .. }) && !spectra::in_radical_raw(base, &base.dist_raw(v, &p[0]))? {
                                continue;
                            }
                            next.push(p);
                        }
                    }
                    if next.len() > cap {
                        return Err(too_large());
                    }
                    acc = next;
                }
                acc.into_iter().map(MvElem::Function).collect()
            }
            Algebra::UnitIntervalQ => unreachable!("infinite"),
        };
        if out.len() > cap {
            return Err(too_large());
        }
        out.sort();
        Ok(Some(out))
    }

    /// Pseudo-random element, biased towards `0`, `1` and radical elements.
    pub fn sample(&self, rng: &mut Rng) -> MvElem {
        match self {
            Algebra::FiniteChain(n) => MvElem::Rational(Rat::chain_point(rng.gen_range(0..*n), *n)),
            Algebra::UnitIntervalQ => match rng.gen_range(0..8) {
                0 => MvElem::Rational(Rat::zero()),
                1 => MvElem::Rational(Rat::one()),
                _ => {
                    let d = rng.gen_range(1..=24i64);
                    MvElem::Rational(Rat::new(rng.gen_range(0..=d), d))
                }
            },
            Algebra::Product(fs) => MvElem::Tuple(fs.iter().map(|f| f.sample(rng)).collect()),
            Algebra::Gamma { group, unit } => match rng.gen_range(0..10) {
                0 => MvElem::Group(group.zero()),
                1 => MvElem::Group(unit.clone()),
                2 => MvElem::Group(gamma_radical_sample(group, unit, rng)),
                3 => MvElem::Group(group.sub_raw(unit, &gamma_radical_sample(group, unit, rng))),
                _ => MvElem::Group(group.sample_between(Some(&group.zero()), Some(unit), rng)),
            },
            Algebra::Quotient(q) => MvElem::class(q.rep(&q.base.sample(rng))),
            Algebra::FunctionAlgebra { base, sites } => MvElem::Function((0..*sites).map(|_| base.sample(rng)).collect()),
            Algebra::QuasiConstant { base, sites } => {
                let anchor = base.sample(rng);
                MvElem::Function(
                    (0..*sites)
                        .map(|_| {
                            let r = base.sample_radical(rng);
                            match rng.gen_range(0..3) {
                                0 => anchor.clone(),
                                1 => base.plus_raw(&anchor, &r),
                                _ => base.minus_raw(&anchor, &r),
                            }
                        })
                        .collect(),
                )
            }
        }
    }

    /// Pseudo-random element of the radical.
    pub fn sample_radical(&self, rng: &mut Rng) -> MvElem {
        match self {
            Algebra::FiniteChain(_) | Algebra::UnitIntervalQ => self.zero(),
            Algebra::Product(fs) => MvElem::Tuple(fs.iter().map(|f| f.sample_radical(rng)).collect()),
            Algebra::Gamma { group, unit } => MvElem::Group(gamma_radical_sample(group, unit, rng)),
            Algebra::Quotient(q) => MvElem::class(q.rep(&q.base.sample_radical(rng))),
            Algebra::QuasiConstant { base, sites } | Algebra::FunctionAlgebra { base, sites } => {
                MvElem::Function((0..*sites).map(|_| base.sample_radical(rng)).collect())
            }
        }
    }

    /// Canonical enumeration when finite and within `cfg.cap`, otherwise
    /// `cfg.samples` seeded samples. The flag is true for the exhaustive case.
    pub fn test_points(&self, cfg: &Config, stream: u64) -> Result<(Vec<MvElem>, bool)> {
        if let Some(all) = self.elements(cfg.cap)? {
            return Ok((all, true));
        }
        let mut rng = cfg.rng(stream);
        Ok(((0..cfg.samples).map(|_| self.sample(&mut rng)).collect(), false))
    }

    pub fn sites(&self) -> Option<usize> {
        match self {
            Algebra::QuasiConstant { sites, .. } | Algebra::FunctionAlgebra { sites, .. } => Some(*sites),
            _ => None,
        }
    }
}

impl Quotient {
    /// Least member of the class of `x`.
    pub fn rep(&self, x: &MvElem) -> MvElem {
        match &self.ideal {
            Ideal::Zero => x.clone(),
            Ideal::Whole => self.base.zero(),
            _ => self.reps.get(x).cloned().unwrap_or_else(|| x.clone()),
        }
    }

    /// Projection of a base element onto its class.
    pub fn project(&self, x: &MvElem) -> MvElem {
        MvElem::class(self.rep(x))
    }
}

/// Whether `[lo, hi]` in `g` is a finite set.
fn interval_is_finite(g: &Group, lo: &GroupElem, hi: &GroupElem) -> bool {
    match (g, lo, hi) {
        (Group::Integers, _, _) => true,
        (Group::Rationals, _, _) => lo == hi,
        (Group::Lex(cs), GroupElem::Tuple(ls), GroupElem::Tuple(hs)) => match cs.len() {
            0 => true,
            1 => interval_is_finite(&cs[0], &ls[0], &hs[0]),
            _ => {
                let (head, tail) = g.lex_split().expect("two components");
                let (lh, lt) = g.lex_split_elem(lo).expect("shape");
                let (hh, ht) = g.lex_split_elem(hi).expect("shape");
                if tail.is_trivial() {
                    interval_is_finite(head, lh, hh)
                } else {
                    lh == hh && interval_is_finite(&tail, &lt, &ht)
                }
            }
        },
        (Group::Direct(cs), GroupElem::Tuple(ls), GroupElem::Tuple(hs)) => {
            cs.iter().zip(ls.iter().zip(hs)).all(|(c, (l, h))| interval_is_finite(c, l, h))
        }
        (Group::QuasiConstant { base, .. }, GroupElem::Tuple(ls), GroupElem::Tuple(hs)) => {
            ls.iter().zip(hs).all(|(l, h)| interval_is_finite(base, l, h))
        }
        _ => false,
    }
}

/// Radical element of `Γ(g, u)`: zero at every level where `u` is positive,
/// with a free non-negative tail below the first such level.
fn gamma_radical_sample(g: &Group, u: &GroupElem, rng: &mut Rng) -> GroupElem {
    match (g, u) {
        (Group::Lex(cs), GroupElem::Tuple(us)) if cs.len() == 1 => GroupElem::Tuple(vec![gamma_radical_sample(&cs[0], &us[0], rng)]),
        (Group::Lex(cs), _) if cs.len() >= 2 => {
            let (head, tail) = g.lex_split().expect("two components");
            let (uh, ut) = g.lex_split_elem(u).expect("shape");
            if head.is_zero_raw(uh) {
                g.lex_join_elem(head.zero(), gamma_radical_sample(&tail, &ut, rng))
            } else {
                g.lex_join_elem(head.zero(), tail.sample_between(Some(&tail.zero()), None, rng))
            }
        }
        (Group::Direct(cs), GroupElem::Tuple(us)) => {
            GroupElem::Tuple(cs.iter().zip(us).map(|(c, ui)| gamma_radical_sample(c, ui, rng)).collect())
        }
        _ => g.zero(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> MvElem {
        MvElem::rational(n, d)
    }

    #[test]
    fn komori_two_is_chang() {
        let c = Algebra::komori(2).unwrap();
        assert_eq!(c, Algebra::Gamma { group: Group::lex([Group::Integers, Group::Integers]), unit: GroupElem::pair(1, 0) });
        assert_eq!(c, Algebra::chang());
    }

    #[test]
    fn two_element_chain() {
        let a = Algebra::finite_chain(2).unwrap();
        assert_eq!(a.elements(64).unwrap().unwrap(), vec![q(0, 1), q(1, 1)]);
        assert!(Algebra::finite_chain(1).is_err());
    }

    #[test]
    fn invalid_units() {
        assert_eq!(Algebra::gamma(Group::Integers, GroupElem::int(0)).unwrap_err().kind(), "InvalidUnit");
        assert_eq!(Algebra::gamma(Group::Integers, GroupElem::int(-1)).unwrap_err().kind(), "InvalidUnit");
        assert_eq!(Algebra::product(vec![]).unwrap_err(), MvError::EmptyProduct);
    }

    #[test]
    fn unit_interval_closed_forms() {
        let a = Algebra::UnitIntervalQ;
        assert_eq!(a.plus(&q(1, 2), &q(7, 10)).unwrap(), q(1, 1));
        assert_eq!(a.neg(&q(3, 10)).unwrap(), q(7, 10));
        assert_eq!(a.times(&q(1, 2), &q(7, 10)).unwrap(), q(1, 5));
        assert_eq!(a.dist(&q(3, 10), &q(7, 10)).unwrap(), q(2, 5));
        assert!(a.leq(&q(3, 10), &q(7, 10)).unwrap());
        assert_eq!(a.neg(&a.zero()).unwrap(), a.one());
    }

    #[test]
    fn chang_arithmetic() {
        let c = Algebra::chang();
        assert_eq!(c.plus(&MvElem::pair(0, 1), &MvElem::pair(0, 2)).unwrap(), MvElem::pair(0, 3));
        assert_eq!(c.neg(&MvElem::pair(0, 3)).unwrap(), MvElem::pair(1, -3));
        assert!(c.leq(&MvElem::pair(0, 5), &MvElem::pair(1, -100)).unwrap());
        assert!(!c.contains(&MvElem::pair(1, 1)));
        assert!(!c.contains(&MvElem::pair(0, -1)));
    }

    #[test]
    fn product_order_is_partial() {
        let a = Algebra::product(vec![Algebra::FiniteChain(2), Algebra::FiniteChain(3)]).unwrap();
        let x = MvElem::tuple([q(1, 1), q(0, 1)]);
        let y = MvElem::tuple([q(0, 1), q(1, 2)]);
        assert!(!a.leq(&x, &y).unwrap());
        assert!(!a.leq(&y, &x).unwrap());
        assert_eq!(a.elements(64).unwrap().unwrap().len(), 6);
    }

    #[test]
    fn cross_algebra_misuse_is_rejected() {
        let a = Algebra::FiniteChain(3);
        let err = a.plus(&q(1, 3), &q(0, 1)).unwrap_err();
        assert_eq!(err.kind(), "ElementNotInAlgebra");
        assert!(Algebra::chang().neg(&q(1, 2)).is_err());
    }

    #[test]
    fn gamma_of_integers_carrier() {
        let g = Algebra::gamma(Group::Integers, GroupElem::int(2)).unwrap();
        let items = g.elements(64).unwrap().unwrap();
        assert_eq!(items.len(), 3);
        assert!(Algebra::chang().elements(64).unwrap().is_none());
    }

    #[test]
    fn samples_are_members() {
        let cfg = Config::default();
        let mut rng = cfg.rng(11);
        for a in [
            Algebra::chang(),
            Algebra::komori(4).unwrap(),
            Algebra::UnitIntervalQ,
            Algebra::gamma(Group::lex([Group::Integers, Group::Rationals]), GroupElem::tuple([GroupElem::int(1), GroupElem::rat(0, 1)]))
                .unwrap(),
        ] {
            for _ in 0..300 {
                let x = a.sample(&mut rng);
                assert!(a.contains(&x), "{x} not in {a}");
                let r = a.sample_radical(&mut rng);
                assert!(a.contains(&r), "{r} not in {a}");
            }
        }
    }
}
