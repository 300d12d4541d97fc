use std::collections::BTreeSet;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::config::{Config, Rng};
use crate::error::{MvError, Result};
use crate::lgroup::group::write_seq;
use crate::mvcore::{Algebra, MvElem};
use crate::spectra::catalog::{shape, Shape};
use crate::spectra::radical::in_radical_raw;

/// An ideal of a concrete MV-algebra.
///
/// Finite algebras always use `Explicit`; the symbolic tags describe ideals
/// of the structured infinite algebras.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Ideal {
    Explicit(BTreeSet<MvElem>),
    Zero,
    Radical,
    Whole,
    /// Elements of a product vanishing on the listed factors.
    ProductKernel(BTreeSet<usize>),
    /// In `Γ(G, u)` with `G` a lexicographic product of scalars: elements
    /// whose first `k` flat coordinates vanish.
    TailKernel(usize),
    /// Functions whose value at `site` lies in `ideal`.
    SitePreimage {
        site: usize,
        ideal: Box<Ideal>,
    },
}

impl fmt::Display for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ideal::Explicit(xs) => write_seq(f, "{", "}", xs),
            Ideal::Zero => f.write_str("zero"),
            Ideal::Radical => f.write_str("radical"),
            Ideal::Whole => f.write_str("whole"),
            Ideal::ProductKernel(s) => write_seq(f, "kernel(", ")", s),
            Ideal::TailKernel(k) => write!(f, "tail({k})"),
            Ideal::SitePreimage { site, ideal } => write!(f, "site({site}, {ideal})"),
        }
    }
}

impl Serialize for Ideal {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl Ideal {
    pub fn explicit(items: impl IntoIterator<Item = MvElem>) -> Ideal {
        Ideal::Explicit(items.into_iter().collect())
    }

    pub fn kernel(indices: impl IntoIterator<Item = usize>) -> Ideal {
        Ideal::ProductKernel(indices.into_iter().collect())
    }

    pub fn is_symbolic(&self) -> bool {
        !matches!(self, Ideal::Explicit(_))
    }

    /// Membership of a valid element.
    pub fn contains(&self, a: &Algebra, x: &MvElem) -> Result<bool> {
        a.check(x)?;
        self.contains_raw(a, x)
    }

    pub(crate) fn contains_raw(&self, a: &Algebra, x: &MvElem) -> Result<bool> {
        Ok(match self {
            Ideal::Explicit(xs) => xs.contains(x),
            Ideal::Zero => a.is_zero(x),
            Ideal::Whole => true,
            Ideal::Radical => in_radical_raw(a, x)?,
            Ideal::ProductKernel(s) => match (a, x) {
                (Algebra::Product(fs), MvElem::Tuple(xs)) => s.iter().all(|&i| fs[i].is_zero(&xs[i])),
                _ => return Err(MvError::InvalidIdeal(format!("{self} needs a product algebra, got {a}"))),
            },
            Ideal::TailKernel(k) => match (a, x) {
                (Algebra::Gamma { group, .. }, MvElem::Group(g)) if group.lex_scalars().is_some() => {
                    group.flatten(g).iter().take(*k).all(|c| c.is_zero())
                }
                _ => return Err(MvError::InvalidIdeal(format!("{self} needs a lexicographic Γ-algebra, got {a}"))),
            },
            Ideal::SitePreimage { site, ideal } => match (a, x) {
                (Algebra::QuasiConstant { base, sites } | Algebra::FunctionAlgebra { base, sites }, MvElem::Function(xs))
                    if site < sites =>
                {
                    ideal.contains_raw(base, &xs[*site])?
                }
                _ => return Err(MvError::InvalidIdeal(format!("{self} needs a function algebra, got {a}"))),
            },
        })
    }

    /// Pseudo-random member of a symbolic ideal.
    pub(crate) fn sample_member(&self, a: &Algebra, rng: &mut Rng) -> Result<MvElem> {
        Ok(match self {
            Ideal::Explicit(xs) => {
                use rand::seq::IteratorRandom;
                xs.iter().choose(rng).cloned().unwrap_or_else(|| a.zero())
            }
            Ideal::Zero => a.zero(),
            Ideal::Whole => a.sample(rng),
            Ideal::Radical => a.sample_radical(rng),
            Ideal::ProductKernel(s) => match a.sample(rng) {
                MvElem::Tuple(mut xs) => {
                    if let Algebra::Product(fs) = a {
                        for &i in s {
                            xs[i] = fs[i].zero();
                        }
                    }
                    MvElem::Tuple(xs)
                }
                other => other,
            },
            Ideal::TailKernel(k) => match (a, a.sample(rng)) {
                (Algebra::Gamma { group, .. }, MvElem::Group(g)) => {
                    let mut coords = group.flatten(&g);
                    coords.iter_mut().take(*k).for_each(|c| *c = crate::rat::Rat::zero());
                    let y = group.unflatten(&coords).expect("same shape");
                    MvElem::Group(group.abs_raw(&y))
                }
                (_, other) => other,
            },
            Ideal::SitePreimage { site, ideal } => match a {
                Algebra::QuasiConstant { base, sites } | Algebra::FunctionAlgebra { base, sites } => {
                    let mut xs: Vec<MvElem> = (0..*sites).map(|_| base.sample_radical(rng)).collect();
                    if matches!(a, Algebra::FunctionAlgebra { .. }) {
                        xs = (0..*sites).map(|_| base.sample(rng)).collect();
                    }
                    xs[*site] = ideal.sample_member(base, rng)?;
                    MvElem::Function(xs)
                }
                _ => a.zero(),
            },
        })
    }
}

/// Checks the ideal laws: `0 ∈ I`, closure under `⊕`, downward closure.
/// Exhaustive on finite carriers, sampled otherwise.
pub fn check_ideal(a: &Algebra, ideal: &Ideal, cfg: &Config) -> Result<()> {
    let invalid = |what: &str, w: String| MvError::InvalidIdeal(format!("{ideal} in {a}: {what} fails at {w}"));
    if !ideal.contains_raw(a, &a.zero())? {
        return Err(invalid("0 ∈ I", a.zero().to_string()));
    }
    if let Some(carrier) = a.elements(cfg.cap)? {
        if let Ideal::Explicit(xs) = ideal {
            if let Some(x) = xs.iter().find(|x| !a.contains(x)) {
                return Err(invalid("membership in the algebra", x.to_string()));
            }
        }
        let members: Vec<&MvElem> =
            carrier.iter().filter_map(|x| ideal.contains_raw(a, x).map(|m| m.then_some(x)).transpose()).collect::<Result<_>>()?;
        for x in &members {
            for y in &members {
                let s = a.plus_raw(x, y);
                if !ideal.contains_raw(a, &s)? {
                    return Err(invalid("closure under ⊕", format!("{x} ⊕ {y} = {s}")));
                }
            }
            for y in &carrier {
                if a.leq_raw(y, x) && !ideal.contains_raw(a, y)? {
                    return Err(invalid("downward closure", format!("{y} ≤ {x}")));
                }
            }
        }
        return Ok(());
    }
    let mut rng = cfg.rng(0x1dea1);
    for _ in 0..cfg.samples {
        let x = ideal.sample_member(a, &mut rng)?;
        let y = ideal.sample_member(a, &mut rng)?;
        if !ideal.contains_raw(a, &x)? {
            return Err(invalid("sampled membership", x.to_string()));
        }
        let s = a.plus_raw(&x, &y);
        if !ideal.contains_raw(a, &s)? {
            return Err(invalid("closure under ⊕", format!("{x} ⊕ {y} = {s}")));
        }
        let z = a.meet_raw(&x, &a.sample(&mut rng));
        if !ideal.contains_raw(a, &z)? {
            return Err(invalid("downward closure", format!("{z} ≤ {x}")));
        }
    }
    Ok(())
}

/// Brings an ideal to the canonical form used for comparisons: explicit
/// sets on finite carriers, normalized tags otherwise. Rejects tags that do
/// not fit the algebra.
pub fn resolve_ideal(a: &Algebra, ideal: Ideal, cfg: &Config) -> Result<Ideal> {
    if let Some(carrier) = a.elements(cfg.cap)? {
        let trivial = matches!(ideal, Ideal::Zero | Ideal::Whole);
        let ideal = match ideal {
            Ideal::Explicit(xs) => Ideal::Explicit(xs),
            symbolic => {
                let mut xs = BTreeSet::new();
                for x in carrier {
                    if symbolic.contains_raw(a, &x)? {
                        xs.insert(x);
                    }
                }
                Ideal::Explicit(xs)
            }
        };
        if !trivial {
            check_ideal(a, &ideal, cfg)?;
        }
        return Ok(ideal);
    }
    let resolved = match (shape(a, cfg)?, ideal) {
        (_, Ideal::Explicit(_)) => {
            return Err(MvError::InvalidIdeal(format!("explicit element lists need a finite algebra, {a} is infinite")))
        }
        (_, i @ (Ideal::Zero | Ideal::Whole)) => i,
        (Shape::Interval, Ideal::Radical) => Ideal::Zero,
        (Shape::GammaLex { levels, .. }, i @ (Ideal::Radical | Ideal::TailKernel(_))) => {
            let k = match i {
                Ideal::TailKernel(k) => k,
                _ => 1,
            };
            tail_ideal(k, levels)
        }
        (Shape::QuasiConst { base, .. }, Ideal::Radical) => {
            if resolve_ideal(base, Ideal::Radical, cfg)? == resolve_ideal(base, Ideal::Zero, cfg)? {
                Ideal::Zero
            } else {
                Ideal::Radical
            }
        }
        (Shape::QuasiConst { base, sites }, Ideal::SitePreimage { site, ideal }) if site < sites => {
            let inner = resolve_ideal(base, *ideal, cfg)?;
            let rad = resolve_ideal(base, Ideal::Radical, cfg)?;
            if inner == Ideal::Whole || inner == resolve_ideal(base, Ideal::Whole, cfg)? {
                Ideal::Whole
            } else if inner == rad {
                resolve_ideal(a, Ideal::Radical, cfg)?
            } else if sites == 1 {
                inner_to_k(inner)
            } else {
                Ideal::SitePreimage { site, ideal: Box::new(inner) }
            }
        }
        (_, other) => return Err(MvError::InvalidIdeal(format!("{other} is not a supported ideal of {a}"))),
    };
    Ok(resolved)
}

fn inner_to_k(inner: Ideal) -> Ideal {
    match inner {
        Ideal::Zero => Ideal::Zero,
        other => Ideal::SitePreimage { site: 0, ideal: Box::new(other) },
    }
}

/// Canonical name of the tail kernel `k` in a lexicographic Γ-algebra with
/// `levels` flat coordinates.
pub(crate) fn tail_ideal(k: usize, levels: usize) -> Ideal {
    match k {
        0 => Ideal::Whole,
        k if k >= levels => Ideal::Zero,
        1 => Ideal::Radical,
        k => Ideal::TailKernel(k),
    }
}

/// Inverse of [`tail_ideal`].
pub(crate) fn tail_index(ideal: &Ideal, levels: usize) -> Option<usize> {
    match ideal {
        Ideal::Whole => Some(0),
        Ideal::Zero => Some(levels),
        Ideal::Radical => Some(1),
        Ideal::TailKernel(k) => Some(*k),
        _ => None,
    }
}

/// Inclusion between two resolved ideals of `a`.
pub fn ideal_subset(a: &Algebra, i: &Ideal, j: &Ideal, cfg: &Config) -> Result<bool> {
    if i == j {
        return Ok(true);
    }
    Ok(match (i, j) {
        (Ideal::Explicit(xs), Ideal::Explicit(ys)) => xs.is_subset(ys),
        (Ideal::Zero, _) | (_, Ideal::Whole) => true,
        (Ideal::Whole, _) | (_, Ideal::Zero) => false,
        (Ideal::ProductKernel(s), Ideal::ProductKernel(t)) => t.is_subset(s),
        _ => match shape(a, cfg)? {
            Shape::GammaLex { levels, .. } => match (tail_index(i, levels), tail_index(j, levels)) {
                (Some(p), Some(q)) => p >= q,
                _ => false,
            },
            Shape::QuasiConst { base, .. } => match (i, j) {
                (Ideal::SitePreimage { .. }, Ideal::Radical) => true,
                (Ideal::SitePreimage { site: s, ideal: p }, Ideal::SitePreimage { site: t, ideal: q }) => {
                    s == t && ideal_subset(base, p, q, cfg)?
                }
                _ => false,
            },
            _ => false,
        },
    })
}

/// Intersection of resolved ideals of a finite algebra.
pub(crate) fn intersect_explicit<'a>(ideals: impl IntoIterator<Item = &'a Ideal>, carrier: &[MvElem]) -> Ideal {
    let mut acc: BTreeSet<MvElem> = carrier.iter().cloned().collect();
    for i in ideals {
        if let Ideal::Explicit(xs) = i {
            acc = acc.intersection(xs).cloned().collect();
        }
    }
    Ideal::Explicit(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn resolving_on_finite_algebras_gives_explicit_sets() {
        let cfg = Config::default();
        let a = Algebra::product(vec![Algebra::FiniteChain(2), Algebra::FiniteChain(3)]).unwrap();
        let k = resolve_ideal(&a, Ideal::kernel([0]), &cfg).unwrap();
        assert_eq!(
            k,
            Ideal::explicit([
                MvElem::tuple([MvElem::rational(0, 1), MvElem::rational(0, 1)]),
                MvElem::tuple([MvElem::rational(0, 1), MvElem::rational(1, 2)]),
                MvElem::tuple([MvElem::rational(0, 1), MvElem::rational(1, 1)]),
            ])
        );
    }

    #[test]
    fn non_ideals_are_rejected() {
        let cfg = Config::default();
        let a = Algebra::FiniteChain(3);
        let bad = Ideal::explicit([MvElem::rational(0, 1), MvElem::rational(1, 2)]);
        let err = resolve_ideal(&a, bad, &cfg).unwrap_err();
        assert_eq!(err.kind(), "InvalidIdeal");
        assert!(err.to_string().contains("⊕"));
    }

    #[test]
    fn tail_names() {
        let cfg = Config::default();
        let c = Algebra::chang();
        assert_eq!(resolve_ideal(&c, Ideal::TailKernel(1), &cfg).unwrap(), Ideal::Radical);
        assert_eq!(resolve_ideal(&c, Ideal::TailKernel(2), &cfg).unwrap(), Ideal::Zero);
        assert_eq!(resolve_ideal(&Algebra::UnitIntervalQ, Ideal::Radical, &cfg).unwrap(), Ideal::Zero);
        assert!(resolve_ideal(&c, Ideal::kernel([0]), &cfg).is_err());
    }

    #[test]
    fn symbolic_ideals_pass_sampled_laws() {
        let cfg = Config { samples: 300, ..Config::default() };
        for i in [Ideal::Zero, Ideal::Radical, Ideal::Whole] {
            check_ideal(&Algebra::chang(), &i, &cfg).unwrap();
            check_ideal(&Algebra::komori(3).unwrap(), &i, &cfg).unwrap();
        }
    }
}
