use std::collections::BTreeMap;

use serde::Serialize;

use crate::config::Config;
use crate::error::{MvError, Result};
use crate::lgroup::{xi_map, Group, GroupElem};
use crate::mvcore::{Algebra, MvElem, Strategy};
use crate::rat::Rat;
use crate::represent::perfect::DGroup;
use crate::spectra::{Ideal, QuotientMap};

/// One verified property of a map.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub property: &'static str,
    pub strategy: Strategy,
    /// Number of elements or pairs examined.
    pub checked: usize,
    pub passed: bool,
    pub witness: Option<String>,
}

impl Check {
    pub(crate) fn new(property: &'static str, strategy: Strategy) -> Check {
        Check { property, strategy, checked: 0, passed: true, witness: None }
    }

    /// Counts one case and records the first failure.
    pub(crate) fn record(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok && self.passed {
            self.passed = false;
            self.witness = Some(witness());
        }
    }

    pub(crate) fn require(&self, what: &str) -> Result<()> {
        if self.passed {
            Ok(())
        } else {
            Err(MvError::failed(format!("{what}: {}", self.property), self.witness.as_deref().unwrap_or("")))
        }
    }
}

pub(crate) fn strategy(exhaustive: bool, cfg: &Config) -> Strategy {
    if exhaustive {
        Strategy::Exhaustive
    } else {
        Strategy::Sampled { count: cfg.samples, seed: cfg.seed }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Side {
    Algebra(Algebra),
    Group { group: Group, unit: GroupElem },
}

/// A map that passed every check listed in `verification`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Embedding {
    pub source: Side,
    pub target: Side,
    /// The prime ideal behind each coordinate of the target.
    pub coordinates: Vec<Ideal>,
    /// Stand-in for the ultrapower, when the target uses one.
    pub surrogate: Option<Group>,
    pub verification: Vec<Check>,
    #[serde(skip)]
    pub(crate) map: Mapping,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Mapping {
    /// `x ↦ (into_P(x/P))_P`, as a tuple or as a function on the sites.
    Coordinates { coords: Vec<Coordinate>, functions: bool },
    /// Good-sequence extension of an embedding of `Γ(G, u)`, read through Ξ.
    Group { inner: Box<Embedding>, group: Group, unit: GroupElem },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Coordinate {
    pub quotient: QuotientMap,
    pub into: ChainInto,
}

/// Embedding of one coordinate chain into its slot of the target.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum ChainInto {
    Identity,
    /// Finite chain listed in increasing order, sent onto `Ł_n`.
    Rank(Vec<MvElem>),
    /// Into `Γ(S, (1, 0, …))`: first flatten (or rank) the element, then
    /// divide by the unit head `k` and pad with zeros.
    Surrogate {
        ranks: Option<Vec<MvElem>>,
        group: Option<Group>,
        k: Rat,
        target: Group,
    },
    /// A perfect chain into `Γ(ℤ ×lex S, (1, 0))` via its D-group.
    Perfect {
        d: Box<DGroup>,
        target: Group,
    },
}

fn rank_of(ranks: &[MvElem], y: &MvElem) -> Rat {
    let i = ranks.iter().position(|r| r == y).expect("element of the listed chain");
    Rat::chain_point(i as u64, ranks.len() as u64)
}

fn padded(target: &Group, mut coords: Vec<Rat>) -> GroupElem {
    let n = target.lex_scalars().expect("surrogate is lexicographic").len();
    coords.resize(n, Rat::zero());
    target.unflatten(&coords).expect("surrogate coordinates are rational")
}

impl ChainInto {
    pub(crate) fn apply(&self, y: &MvElem) -> MvElem {
        match self {
            ChainInto::Identity => y.clone(),
            ChainInto::Rank(ranks) => MvElem::Rational(rank_of(ranks, y)),
            ChainInto::Surrogate { ranks, group, k, target } => {
                let coords = match (ranks, group, y) {
                    (Some(ranks), _, _) => vec![rank_of(ranks, y)],
                    (None, _, MvElem::Rational(q)) => vec![q.clone()],
                    (None, Some(g), MvElem::Group(e)) => g.flatten(e).iter().map(|c| c.div(k)).collect(),
                    _ => unreachable!("surrogate embedding built for this chain"),
                };
                MvElem::Group(padded(target, coords))
            }
            ChainInto::Perfect { d, target } => {
                let (co, tail) = d.encode(y);
                let Group::Lex(cs) = target else { unreachable!("perfect target is lexicographic") };
                let tail = padded(&cs[1], d.tail.flatten(&tail));
                MvElem::Group(target.lex_join_elem(GroupElem::int(co as i64), tail))
            }
        }
    }
}

impl Embedding {
    pub fn apply(&self, x: &MvElem) -> Result<MvElem> {
        match (&self.source, &self.map) {
            (Side::Algebra(a), Mapping::Coordinates { coords, functions }) => {
                a.check(x)?;
                Ok(apply_coordinates(coords, *functions, x))
            }
            _ => Err(MvError::UnsupportedShape(format!("{} maps group elements", self.source_name()))),
        }
    }

    pub fn apply_group(&self, g: &GroupElem) -> Result<GroupElem> {
        match (&self.map, &self.target) {
            (Mapping::Group { inner, group, unit }, Side::Group { group: target, .. }) => {
                group.check(g)?;
                let Side::Algebra(t) = &inner.target else { unreachable!("inner embedding is between algebras") };
                let Mapping::Coordinates { coords, functions } = &inner.map else { unreachable!() };
                let up = |x: &GroupElem| -> Result<GroupElem> {
                    let mut total = target.zero();
                    for piece in good_sequence(group, unit, x) {
                        let image = apply_coordinates(coords, *functions, &MvElem::Group(piece));
                        total = target.add_raw(&total, &xi_map(t, &image)?);
                    }
                    Ok(total)
                };
                let zero = group.zero();
                let plus = group.join_raw(g, &zero);
                let minus = group.join_raw(&group.neg_raw(g), &zero);
                Ok(target.sub_raw(&up(&plus)?, &up(&minus)?))
            }
            _ => Err(MvError::UnsupportedShape(format!("{} maps algebra elements", self.source_name()))),
        }
    }

    fn source_name(&self) -> String {
        match &self.source {
            Side::Algebra(a) => a.to_string(),
            Side::Group { group, unit } => format!("({group}, {unit})"),
        }
    }

    pub fn passed(&self) -> bool {
        self.verification.iter().all(|c| c.passed)
    }
}

pub(crate) fn apply_coordinates(coords: &[Coordinate], functions: bool, x: &MvElem) -> MvElem {
    let values = coords.iter().map(|c| c.into.apply(&c.quotient.project_raw(x)));
    if functions {
        MvElem::Function(values.collect())
    } else {
        MvElem::Tuple(values.collect())
    }
}

/// `x = a₁ + … + a_m` with `aᵢ = ((x − (i−1)u) ∨ 0) ∧ u`, for `x ≥ 0` and
/// `u` a strong unit.
pub(crate) fn good_sequence(g: &Group, u: &GroupElem, x: &GroupElem) -> Vec<GroupElem> {
    let zero = g.zero();
    let mut rest = x.clone();
    let mut out = Vec::new();
    while !g.leq_raw(&rest, &zero) {
        out.push(g.meet_raw(&g.join_raw(&rest, &zero), u));
        rest = g.sub_raw(&rest, u);
    }
    out
}

/// Homomorphism and injectivity of `f: source → target`: over all pairs
/// of a finite carrier, or over each sample paired with its successor and
/// with a pseudo-random partner.
pub(crate) fn verify_algebra_map(
    source: &Algebra,
    target: &Algebra,
    f: &dyn Fn(&MvElem) -> MvElem,
    cfg: &Config,
    stream: u64,
) -> Result<Vec<Check>> {
    let (points, exhaustive) = source.test_points(cfg, stream)?;
    let strategy = strategy(exhaustive, cfg);
    let images: Vec<MvElem> = points.iter().map(f).collect();
    let mut hom = Check::new("homomorphism", strategy);
    hom.record(f(&source.zero()) == target.zero(), || "image of 0".into());
    for (x, fx) in points.iter().zip(&images) {
        hom.record(target.contains(fx), || format!("f({x}) = {fx} lies outside {target}"));
        let lhs = f(&source.neg_raw(x));
        hom.record(lhs == target.neg_raw(fx), || format!("f(~{x}) = {lhs}"));
    }
    let n = points.len();
    let pairs: Vec<(usize, usize)> = if exhaustive {
        (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect()
    } else {
        (0..n).flat_map(|i| [(i, (i + 1) % n), (i, (i * 31 + 7) % n)]).collect()
    };
    for (i, j) in pairs {
        let (x, y) = (&points[i], &points[j]);
        let lhs = f(&source.plus_raw(x, y));
        let rhs = target.plus_raw(&images[i], &images[j]);
        hom.record(lhs == rhs, || format!("f({x} + {y}) = {lhs}, f({x}) + f({y}) = {rhs}"));
    }
    let mut injective = Check::new("injectivity", strategy);
    let mut seen: BTreeMap<&MvElem, &MvElem> = BTreeMap::new();
    for (x, fx) in points.iter().zip(&images) {
        let clash = seen.insert(fx, x).filter(|y| *y != x);
        injective.record(clash.is_none(), || format!("{x} and {} both map to {fx}", clash.expect("clash")));
    }
    Ok(vec![hom, injective])
}
