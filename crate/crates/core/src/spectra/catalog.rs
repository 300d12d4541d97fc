//! Ideal catalogs: complete enumeration for finite algebras and closed
//! symbolic lists for the structured infinite ones.

use std::collections::BTreeSet;

use crate::config::Config;
use crate::error::{MvError, Result};
use crate::lgroup::{Group, Scalar};
use crate::mvcore::{Algebra, MvElem};
use crate::rat::Rat;
use crate::spectra::ideal::{resolve_ideal, tail_ideal, Ideal};

/// The structural cases the spectra module knows how to handle.
pub(crate) enum Shape<'a> {
    Finite,
    /// `[0, 1] ∩ ℚ`.
    Interval,
    /// `Γ(G, (k, 0, …, 0))` with `G` a lexicographic product of `levels`
    /// scalars.
    GammaLex {
        group: &'a Group,
        head: Scalar,
        levels: usize,
        k: Rat,
    },
    QuasiConst {
        base: &'a Algebra,
        sites: usize,
    },
}

pub(crate) fn shape<'a>(a: &'a Algebra, cfg: &Config) -> Result<Shape<'a>> {
    if a.elements(cfg.cap)?.is_some() {
        return Ok(Shape::Finite);
    }
    match a {
        Algebra::UnitIntervalQ => Ok(Shape::Interval),
        Algebra::Gamma { group, unit } => {
            let scalars = group.lex_scalars().ok_or_else(|| unsupported(a))?;
            let coords = group.flatten(unit);
            if scalars.is_empty() || coords.iter().skip(1).any(|c| !c.is_zero()) {
                return Err(unsupported(a));
            }
            Ok(Shape::GammaLex { group, head: scalars[0], levels: scalars.len(), k: coords[0].clone() })
        }
        Algebra::QuasiConstant { base, sites } => match shape(base, cfg)? {
            Shape::Finite => Err(unsupported(a)),
            _ => Ok(Shape::QuasiConst { base, sites: *sites }),
        },
        _ => Err(unsupported(a)),
    }
}

fn unsupported(a: &Algebra) -> MvError {
    MvError::UnsupportedShape(format!("no ideal catalog for {a}"))
}

/// All ideals of a finite algebra, sorted by size then elements.
///
/// Products of finite chains take the structural path (each factor
/// contributes `{0}` or itself); everything else uses the generic closure
/// search.
pub fn enumerate_ideals(a: &Algebra, cfg: &Config) -> Result<Vec<Ideal>> {
    match enumerate_ideals_fast(a, cfg)? {
        Some(ideals) => Ok(ideals),
        None => enumerate_ideals_generic(a, cfg),
    }
}

fn finite_carrier(a: &Algebra, cfg: &Config) -> Result<Vec<MvElem>> {
    a.elements(cfg.cap)?.ok_or_else(|| MvError::UnsupportedShape(format!("ideal enumeration needs a finite algebra, {a} is infinite")))
}

/// Generic search: start from the down-set of each element and close under
/// `⊕` until stable. In a finite algebra every ideal is the down-set of the
/// sum of its elements, so these principal ideals are all of them.
pub fn enumerate_ideals_generic(a: &Algebra, cfg: &Config) -> Result<Vec<Ideal>> {
    let carrier = finite_carrier(a, cfg)?;
    let down = |tops: &BTreeSet<MvElem>| -> BTreeSet<MvElem> {
        carrier.iter().filter(|y| tops.iter().any(|t| a.leq_raw(y, t))).cloned().collect()
    };
    let mut found = BTreeSet::new();
    for x in &carrier {
        let mut current = down(&BTreeSet::from([x.clone()]));
        loop {
            let sums: BTreeSet<MvElem> =
                current.iter().flat_map(|p| current.iter().map(move |q| (p, q))).map(|(p, q)| a.plus_raw(p, q)).collect();
            let next = down(&sums);
            if next == current {
                break;
            }
            current = next;
        }
        found.insert(current);
    }
    Ok(sort_ideals(found.into_iter().map(Ideal::Explicit).collect()))
}

/// Structural path for a finite chain or a product of finite chains;
/// `None` for any other algebra.
pub fn enumerate_ideals_fast(a: &Algebra, cfg: &Config) -> Result<Option<Vec<Ideal>>> {
    let factors = match a {
        Algebra::FiniteChain(_) => 1,
        Algebra::Product(fs) if fs.iter().all(|f| matches!(f, Algebra::FiniteChain(_))) => fs.len(),
        _ => return Ok(None),
    };
    let carrier = finite_carrier(a, cfg)?;
    let mut out = Vec::new();
    for mask in 0..(1u64 << factors) {
        let vanish: Vec<usize> = (0..factors).filter(|i| mask & (1 << i) != 0).collect();
        let members = carrier.iter().filter(|x| match x {
            MvElem::Tuple(xs) => vanish.iter().all(|&i| xs[i].as_rat().is_some_and(Rat::is_zero)),
            MvElem::Rational(q) => vanish.is_empty() || q.is_zero(),
            _ => false,
        });
        out.push(Ideal::Explicit(members.cloned().collect()));
    }
    Ok(Some(sort_ideals(out)))
}

fn sort_ideals(mut ideals: Vec<Ideal>) -> Vec<Ideal> {
    ideals.sort_by(|p, q| match (p, q) {
        (Ideal::Explicit(a), Ideal::Explicit(b)) => (a.len(), a).cmp(&(b.len(), b)),
        _ => p.cmp(q),
    });
    ideals.dedup();
    ideals
}

/// The closed catalog for structured infinite algebras, smallest first.
///
/// `Γ(G, (k, 0, …))` over a lexicographic product of `m` scalars has exactly
/// the tail kernels as ideals (they correspond to the convex subgroups of
/// `G`), `tail(1)` being the radical. `[0,1] ∩ ℚ` is simple. For a
/// quasi-constant algebra over a local base with nonzero radical the catalog
/// lists `zero`, the site preimages of the base ideals strictly inside its
/// radical, `radical` and `whole`: every prime and every maximal ideal, but
/// not the intersections of site preimages.
pub fn symbolic_ideals(a: &Algebra, cfg: &Config) -> Result<Vec<Ideal>> {
    match shape(a, cfg)? {
        Shape::Finite => enumerate_ideals(a, cfg),
        Shape::Interval => Ok(vec![Ideal::Zero, Ideal::Whole]),
        Shape::GammaLex { levels, .. } => Ok((0..=levels).rev().map(|k| tail_ideal(k, levels)).collect()),
        Shape::QuasiConst { base, sites } => {
            if resolve_ideal(base, Ideal::Radical, cfg)? == Ideal::Zero {
                return Ok(vec![Ideal::Zero, Ideal::Whole]);
            }
            let mut out = vec![Ideal::Zero];
            for site in 0..sites {
                for q in symbolic_ideals(base, cfg)? {
                    if matches!(q, Ideal::Radical | Ideal::Whole) {
                        continue;
                    }
                    let p = resolve_ideal(a, Ideal::SitePreimage { site, ideal: Box::new(q) }, cfg)?;
                    if !out.contains(&p) {
                        out.push(p);
                    }
                }
            }
            out.push(Ideal::Radical);
            out.push(Ideal::Whole);
            Ok(out)
        }
    }
}

/// Every ideal the library knows for `a`: the full enumeration when finite,
/// the symbolic catalog otherwise.
pub fn ideals(a: &Algebra, cfg: &Config) -> Result<Vec<Ideal>> {
    symbolic_ideals(a, cfg)
}
