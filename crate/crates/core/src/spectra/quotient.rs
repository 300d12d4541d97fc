use serde::Serialize;

use crate::config::Config;
use crate::error::{MvError, Result};
use crate::lgroup::{Group, Scalar};
use crate::mvcore::{Algebra, MvElem};
use crate::rat::Rat;
use crate::spectra::catalog::{shape, Shape};
use crate::spectra::ideal::{resolve_ideal, tail_index, Ideal};

/// A quotient algebra `A/I` with its projection.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuotientMap {
    pub source: Algebra,
    pub ideal: Ideal,
    pub target: Algebra,
    #[serde(skip)]
    projection: Projection,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Projection {
    Identity,
    /// Least representative of the congruence class.
    Classes,
    /// `x ↦ x₀ / k` into a chain or `[0, 1] ∩ ℚ`.
    Head {
        k: Rat,
    },
    /// Keep the first `keep` flat coordinates.
    Truncate {
        keep: usize,
    },
    /// Project the value at `site` and continue in the base.
    Site {
        site: usize,
        inner: Box<QuotientMap>,
    },
}

impl QuotientMap {
    /// Image of `x ∈ A` in `A/I`.
    pub fn project(&self, x: &MvElem) -> Result<MvElem> {
        self.source.check(x)?;
        Ok(self.project_raw(x))
    }

    pub(crate) fn project_raw(&self, x: &MvElem) -> MvElem {
        match (&self.projection, x) {
            (Projection::Identity, _) => x.clone(),
            (Projection::Classes, _) => match &self.target {
                Algebra::Quotient(q) => q.project(x),
                _ => unreachable!("class projection targets a quotient"),
            },
            (Projection::Head { k }, MvElem::Group(g)) => {
                let Algebra::Gamma { group, .. } = &self.source else { unreachable!("head projection on Γ") };
                MvElem::Rational(group.flatten(g)[0].div(k))
            }
            (Projection::Truncate { keep }, MvElem::Group(g)) => {
                let (Algebra::Gamma { group, .. }, Algebra::Gamma { group: target, .. }) = (&self.source, &self.target) else {
                    unreachable!("truncation between Γ-algebras")
                };
                let coords = group.flatten(g);
                MvElem::Group(target.unflatten(&coords[..*keep]).expect("prefix shape"))
            }
            (Projection::Site { site, inner }, MvElem::Function(xs)) => inner.project_raw(&xs[*site]),
            _ => unreachable!("element validated against {}", self.source),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.projection == Projection::Identity
    }
}

/// `A/I` with its projection.
///
/// Finite algebras use the congruence `d(x, y) ∈ I` directly. For
/// `Γ(G, (k, 0, …))` over a lexicographic product of scalars the quotient by
/// `tail(j)` truncates to the first `j` coordinates; by the radical it is
/// the chain `(x₀, …) ↦ x₀/k`, finite when the head is ℤ and
/// `[0, 1] ∩ ℚ` when it is ℚ. Quotients of quasi-constant algebras factor
/// through the value at a single site.
pub fn quotient(a: &Algebra, ideal: Ideal, cfg: &Config) -> Result<QuotientMap> {
    let ideal = resolve_ideal(a, ideal, cfg)?;
    let make = |target: Algebra, projection: Projection| QuotientMap { source: a.clone(), ideal: ideal.clone(), target, projection };
    if ideal == Ideal::Zero || ideal == zero_ideal(a, cfg)? {
        return Ok(make(a.clone(), Projection::Identity));
    }
    match shape(a, cfg)? {
        Shape::Finite => Ok(make(Algebra::quotient_of(a.clone(), ideal.clone(), cfg)?, Projection::Classes)),
        _ if ideal == Ideal::Whole => Ok(make(Algebra::quotient_of(a.clone(), Ideal::Whole, cfg)?, Projection::Classes)),
        Shape::GammaLex { group, head, levels, k, .. } => {
            let keep = tail_index(&ideal, levels).ok_or_else(|| MvError::InvalidIdeal(format!("{ideal} of {a}")))?;
            if keep == 1 {
                let target = match head {
                    Scalar::Int => {
                        let n = k
                            .to_integer()
                            .and_then(|n| u64::try_from(n + 1).ok())
                            .ok_or_else(|| MvError::UnsupportedShape(format!("unit head {k} too large for a finite chain")))?;
                        Algebra::FiniteChain(n)
                    }
                    Scalar::Rat => Algebra::UnitIntervalQ,
                };
                return Ok(make(target, Projection::Head { k }));
            }
            let prefix = prefix_group(group, keep);
            let mut unit = vec![k.clone()];
            unit.resize(keep, Rat::zero());
            let unit = prefix.unflatten(&unit).expect("prefix unit");
            Ok(make(Algebra::gamma(prefix, unit)?, Projection::Truncate { keep }))
        }
        Shape::QuasiConst { base, .. } => {
            let (site, inner_ideal) = match &ideal {
                Ideal::Radical => (0, Ideal::Radical),
                Ideal::SitePreimage { site, ideal } => (*site, (**ideal).clone()),
                other => return Err(MvError::InvalidIdeal(format!("{other} of {a}"))),
            };
            let inner = quotient(base, inner_ideal, cfg)?;
            Ok(make(inner.target.clone(), Projection::Site { site, inner: Box::new(inner) }))
        }
        Shape::Interval => Err(MvError::InvalidIdeal(format!("{ideal} of {a}"))),
    }
}

fn zero_ideal(a: &Algebra, cfg: &Config) -> Result<Ideal> {
    resolve_ideal(a, Ideal::Zero, cfg)
}

/// Lexicographic product of the first `keep` scalar levels of `g`.
fn prefix_group(g: &Group, keep: usize) -> Group {
    let levels: Vec<Group> = g
        .lex_scalars()
        .expect("lexicographic product of scalars")
        .into_iter()
        .take(keep)
        .map(|s| match s {
            Scalar::Int => Group::Integers,
            Scalar::Rat => Group::Rationals,
        })
        .collect();
    Group::Lex(levels)
}

/// Total order check of a quotient target: exhaustive when finite, sampled
/// otherwise. Returns an incomparable pair on failure.
pub fn chain_witness(a: &Algebra, cfg: &Config, stream: u64) -> Result<Option<(MvElem, MvElem)>> {
    let incomparable = |x: &MvElem, y: &MvElem| !a.leq_raw(x, y) && !a.leq_raw(y, x);
    let (points, exhaustive) = a.test_points(cfg, stream)?;
    if exhaustive {
        for (j, x) in points.iter().enumerate() {
            if let Some(y) = points[..j].iter().find(|y| incomparable(x, y)) {
                return Ok(Some((x.clone(), y.clone())));
            }
        }
    } else if let Some(w) = points.windows(2).find(|w| incomparable(&w[1], &w[0])) {
        return Ok(Some((w[1].clone(), w[0].clone())));
    }
    Ok(None)
}
