use serde::Serialize;

use crate::config::Config;
use crate::error::{MvError, Result};
use crate::mvcore::{Algebra, MvElem};
use crate::spectra::catalog::{ideals, shape, Shape};
use crate::spectra::ideal::{ideal_subset, intersect_explicit, resolve_ideal, Ideal};
use crate::spectra::quotient::{chain_witness, quotient};
use crate::spectra::radical::{in_radical_raw, ord_raw, Order};

/// How a predicate was decided.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    /// Every element or pair of a finite carrier was checked.
    Exhaustive,
    /// Decided by a structural rule and confirmed on seeded samples.
    RuleSampled,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdealPredicates {
    pub ideal: Ideal,
    pub is_ideal: bool,
    pub is_prime: bool,
    /// A pair with neither `x ⊖ y` nor `y ⊖ x` in the ideal.
    pub prime_witness: Option<(MvElem, MvElem)>,
    pub is_maximal: bool,
    pub mode: Mode,
}

/// Ideal, prime and maximal tests for a (resolved or resolvable) ideal.
///
/// On finite algebras primality is decided over all pairs and cross-checked
/// against totality of the quotient. On symbolic algebras the catalog rule
/// decides (every proper ideal of a chain is prime; in a quasi-constant
/// algebra the site preimages of primes and the radical are prime, and the
/// zero ideal is prime only with a single site) and a sampled witness search
/// must not contradict it.
pub fn ideal_predicates(a: &Algebra, ideal: Ideal, cfg: &Config) -> Result<IdealPredicates> {
    let ideal = resolve_ideal(a, ideal, cfg)?;
    let whole = resolve_ideal(a, Ideal::Whole, cfg)?;
    let proper = ideal != whole;
    let catalog = ideals(a, cfg)?;
    let mut is_maximal = proper;
    for j in &catalog {
        if *j != whole && *j != ideal && ideal_subset(a, &ideal, j, cfg)? {
            is_maximal = false;
        }
    }
    let find_witness = |points: &[MvElem], exhaustive: bool| -> Result<Option<(MvElem, MvElem)>> {
        let splits = |x: &MvElem, y: &MvElem| -> Result<bool> {
            Ok(!ideal.contains_raw(a, &a.minus_raw(x, y))? && !ideal.contains_raw(a, &a.minus_raw(y, x))?)
        };
        if exhaustive {
            for (j, x) in points.iter().enumerate() {
                for y in &points[..j] {
                    if splits(x, y)? {
                        return Ok(Some((x.clone(), y.clone())));
                    }
                }
            }
        } else {
            for w in points.windows(2) {
                if splits(&w[1], &w[0])? {
                    return Ok(Some((w[1].clone(), w[0].clone())));
                }
            }
        }
        Ok(None)
    };
    let (points, exhaustive) = prime_probe_points(a, cfg)?;
    let witness = find_witness(&points, exhaustive)?;
    let (is_prime, mode) = if exhaustive {
        let is_prime = proper && witness.is_none();
        if proper {
            let q = quotient(a, ideal.clone(), cfg)?;
            let is_chain = chain_witness(&q.target, cfg, 0x9e1)?.is_none();
            if is_chain != is_prime {
                return Err(MvError::failed(
                    format!("primality of {ideal} disagrees with totality of {}", q.target),
                    format!("{witness:?}"),
                ));
            }
        }
        (is_prime, Mode::Exhaustive)
    } else {
        let rule = proper && symbolic_prime_rule(a, &ideal, cfg)?;
        if rule && witness.is_some() {
            return Err(MvError::failed(format!("{ideal} should be prime in {a}"), format!("{witness:?}")));
        }
        (rule, Mode::RuleSampled)
    };
    Ok(IdealPredicates { ideal, is_ideal: true, is_prime, prime_witness: if proper { witness } else { None }, is_maximal, mode })
}

/// Sample points for the primality witness search; on quasi-constant
/// algebras half of them come in adjacent pairs of functions that vanish at
/// all but one site, the sites differing, so that pairs separating sites
/// actually occur.
fn prime_probe_points(a: &Algebra, cfg: &Config) -> Result<(Vec<MvElem>, bool)> {
    let (mut points, exhaustive) = a.test_points(cfg, 0x9a1)?;
    if exhaustive {
        return Ok((points, true));
    }
    if let Algebra::QuasiConstant { base, sites } = a {
        let mut rng = cfg.rng(0x9a2);
        for (i, p) in points.iter_mut().enumerate() {
            if i % 4 < 2 {
                let mut xs = vec![base.zero(); *sites];
                xs[i % sites] = base.sample_radical(&mut rng);
                *p = MvElem::Function(xs);
            }
        }
    }
    Ok((points, false))
}

fn symbolic_prime_rule(a: &Algebra, ideal: &Ideal, cfg: &Config) -> Result<bool> {
    Ok(match shape(a, cfg)? {
        Shape::Finite => unreachable!("finite algebras are exhaustive"),
        Shape::Interval | Shape::GammaLex { .. } => true,
        Shape::QuasiConst { base, sites } => match ideal {
            Ideal::Radical => true,
            Ideal::Zero => sites == 1 && symbolic_prime_rule(base, &Ideal::Zero, cfg)?,
            Ideal::SitePreimage { ideal, .. } => symbolic_prime_rule(base, ideal, cfg)?,
            _ => false,
        },
    })
}

/// Prime ideals, from the catalog.
pub fn spec(a: &Algebra, cfg: &Config) -> Result<Vec<Ideal>> {
    let mut out = Vec::new();
    for i in ideals(a, cfg)? {
        if ideal_predicates(a, i.clone(), cfg)?.is_prime {
            out.push(i);
        }
    }
    Ok(out)
}

/// Maximal ideals: proper catalog entries not strictly inside another
/// proper entry.
pub fn max_ideals(a: &Algebra, cfg: &Config) -> Result<Vec<Ideal>> {
    let catalog = ideals(a, cfg)?;
    let whole = resolve_ideal(a, Ideal::Whole, cfg)?;
    let mut out = Vec::new();
    for i in &catalog {
        if *i == whole {
            continue;
        }
        let mut maximal = true;
        for j in &catalog {
            if *j != whole && j != i && ideal_subset(a, i, j, cfg)? {
                maximal = false;
            }
        }
        if maximal {
            out.push(i.clone());
        }
    }
    Ok(out)
}

/// The intersection of all maximal ideals. On finite algebras it is
/// computed as an explicit intersection and checked against the
/// `n·x ≤ ¬x` characterization element by element.
pub fn radical(a: &Algebra, cfg: &Config) -> Result<Ideal> {
    let max = max_ideals(a, cfg)?;
    if let Some(carrier) = a.elements(cfg.cap)? {
        let rad = intersect_explicit(&max, &carrier);
        for x in &carrier {
            let member = rad.contains_raw(a, x)?;
            if member != in_radical_raw(a, x)? {
                return Err(MvError::failed(format!("radical of {a} by intersection vs by multiples"), x));
            }
        }
        return Ok(rad);
    }
    match max.as_slice() {
        [m] => Ok(m.clone()),
        _ => Err(MvError::UnsupportedShape(format!("radical of {a} with {} maximal ideals", max.len()))),
    }
}

/// `ord(x)` with the witnessing multiple: `(n-1)·x` when the order is a
/// finite `n > 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrdReport {
    pub element: MvElem,
    pub order: Order,
    pub below_one: Option<MvElem>,
}

pub fn ord(a: &Algebra, x: &MvElem) -> Result<OrdReport> {
    a.check(x)?;
    let order = ord_raw(a, x)?;
    let below_one = match &order {
        Order::Finite(n) if *n > 1.into() => {
            let n: u64 = n.try_into().map_err(|_| MvError::UnsupportedShape(format!("order {n} too large to unfold")))?;
            Some(a.multiple(x, n - 1)?)
        }
        _ => None,
    };
    Ok(OrdReport { element: x.clone(), order, below_one })
}

/// `x ≠ 0` and `n·x < ¬x` for every `n`.
pub fn is_infinitesimal(a: &Algebra, x: &MvElem) -> Result<bool> {
    a.check(x)?;
    Ok(!a.is_zero(x) && in_radical_raw(a, x)?)
}

/// `x ∈ Rad(A)`.
pub fn in_radical(a: &Algebra, x: &MvElem) -> Result<bool> {
    a.check(x)?;
    in_radical_raw(a, x)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub algebra: Algebra,
    pub is_chain: bool,
    pub is_simple: bool,
    pub is_semisimple: bool,
    pub is_local: bool,
    pub is_perfect: bool,
    pub maximal_ideal_count: usize,
    pub radical: Ideal,
    /// Outcome of the criterion "ord(x) < ∞ or ord(¬x) < ∞ for every x".
    pub ord_criterion: bool,
    /// Element violating the ord criterion, if one was found.
    pub ord_witness: Option<MvElem>,
    /// Element in neither `Rad A` nor `¬Rad A`, if one was found.
    pub perfect_witness: Option<MvElem>,
    pub mode: Mode,
    pub points_checked: usize,
}

/// The five structural flags, each cross-checked.
///
/// Chain: the zero ideal is prime. Simple: the only ideals are `{0}` and
/// `A`. Semisimple: the radical is `{0}`. Local: exactly one maximal ideal,
/// which must agree with the ord criterion on every tested element.
/// Perfect: every tested element lies in `Rad A ∪ ¬Rad A`; on symbolic
/// algebras the structural rule (head unit `1` over ℤ) must agree with the
/// samples.
pub fn classify(a: &Algebra, cfg: &Config) -> Result<Classification> {
    let catalog = ideals(a, cfg)?;
    let zero = resolve_ideal(a, Ideal::Zero, cfg)?;
    let max = max_ideals(a, cfg)?;
    let rad = radical(a, cfg)?;
    let is_chain = ideal_predicates(a, zero.clone(), cfg)?.is_prime;
    let is_simple = catalog.len() == 2;
    let is_semisimple = rad == zero;
    let is_local = max.len() == 1;

    let (points, exhaustive) = a.test_points(cfg, 0xc1a5)?;
    let mut ord_witness = None;
    let mut perfect_witness = None;
    for x in &points {
        let nx = a.neg_raw(x);
        if ord_witness.is_none() && !ord_raw(a, x)?.is_finite() && !ord_raw(a, &nx)?.is_finite() {
            ord_witness = Some(x.clone());
        }
        if perfect_witness.is_none() && !in_radical_raw(a, x)? && !in_radical_raw(a, &nx)? {
            perfect_witness = Some(x.clone());
        }
    }
    let ord_criterion = ord_witness.is_none();
    if ord_criterion != is_local && (exhaustive || !is_local) {
        return Err(MvError::failed(
            format!("locality of {a} ({} maximal ideals) disagrees with the ord criterion", max.len()),
            format!("{ord_witness:?}"),
        ));
    }
    let is_perfect = if exhaustive {
        perfect_witness.is_none()
    } else {
        let rule = perfect_rule(a, cfg)?;
        if rule == perfect_witness.is_some() {
            return Err(MvError::failed(format!("perfectness rule for {a} says {rule}, samples disagree"), format!("{perfect_witness:?}")));
        }
        rule
    };
    Ok(Classification {
        algebra: a.clone(),
        is_chain,
        is_simple,
        is_semisimple,
        is_local,
        is_perfect,
        maximal_ideal_count: max.len(),
        radical: rad,
        ord_criterion,
        ord_witness,
        perfect_witness,
        mode: if exhaustive { Mode::Exhaustive } else { Mode::RuleSampled },
        points_checked: points.len(),
    })
}

fn perfect_rule(a: &Algebra, cfg: &Config) -> Result<bool> {
    Ok(match shape(a, cfg)? {
        Shape::Finite => unreachable!("finite algebras are exhaustive"),
        Shape::Interval => false,
        Shape::GammaLex { head, levels, k, .. } => levels >= 2 && head == crate::lgroup::Scalar::Int && k == crate::rat::Rat::one(),
        Shape::QuasiConst { base, .. } => perfect_rule(base, cfg)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn l2l3() -> Algebra {
        Algebra::product(vec![Algebra::FiniteChain(2), Algebra::FiniteChain(3)]).unwrap()
    }

    #[test]
    fn zero_ideal_of_product_is_not_prime() {
        let cfg = Config::default();
        let p = ideal_predicates(&l2l3(), Ideal::Zero, &cfg).unwrap();
        assert!(!p.is_prime);
        let (x, y) = p.prime_witness.unwrap();
        assert_eq!(x, MvElem::tuple([MvElem::rational(1, 1), MvElem::rational(0, 1)]));
        assert_eq!(y, MvElem::tuple([MvElem::rational(0, 1), MvElem::rational(1, 2)]));
    }

    #[test]
    fn product_spectrum() {
        let cfg = Config::default();
        let a = l2l3();
        assert_eq!(max_ideals(&a, &cfg).unwrap().len(), 2);
        assert_eq!(spec(&a, &cfg).unwrap(), max_ideals(&a, &cfg).unwrap());
        assert_eq!(radical(&a, &cfg).unwrap(), Ideal::explicit([MvElem::tuple([MvElem::rational(0, 1), MvElem::rational(0, 1)])]));
    }

    #[test]
    fn chang_spectrum() {
        let cfg = Config { samples: 300, ..Config::default() };
        let c = Algebra::chang();
        assert_eq!(max_ideals(&c, &cfg).unwrap(), vec![Ideal::Radical]);
        assert_eq!(radical(&c, &cfg).unwrap(), Ideal::Radical);
        assert_eq!(spec(&c, &cfg).unwrap(), vec![Ideal::Zero, Ideal::Radical]);
    }

    #[test]
    fn classifications() {
        let cfg = Config { samples: 300, ..Config::default() };
        let c = classify(&Algebra::chang(), &cfg).unwrap();
        assert!(c.is_chain && !c.is_simple && !c.is_semisimple && c.is_local && c.is_perfect);
        let k = classify(&Algebra::komori(3).unwrap(), &cfg).unwrap();
        assert!(k.is_chain && k.is_local && !k.is_perfect);
        let p = classify(&l2l3(), &cfg).unwrap();
        assert!(p.is_semisimple && !p.is_local && !p.is_simple && !p.is_perfect && !p.is_chain);
        assert!(!p.ord_criterion);
        let u = classify(&Algebra::UnitIntervalQ, &cfg).unwrap();
        assert!(u.is_simple && u.is_semisimple && u.is_local && !u.is_perfect);
    }

    #[test]
    fn orders_and_infinitesimals() {
        let c = Algebra::chang();
        assert_eq!(ord(&c, &MvElem::pair(1, -5)).unwrap().below_one, Some(MvElem::pair(1, -5)));
        assert!(is_infinitesimal(&c, &MvElem::pair(0, 1)).unwrap());
        assert!(!is_infinitesimal(&c, &c.zero()).unwrap());
        assert!(!is_infinitesimal(&Algebra::UnitIntervalQ, &MvElem::rational(1, 1000)).unwrap());
    }
}
