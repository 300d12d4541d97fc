//! Quasi-constant function algebras and the representation of local
//! algebras and local unital ℓ-groups by quasi-constant functions.

use serde::Serialize;

use crate::config::Config;
use crate::error::{MvError, Result};
use crate::lgroup::{is_strong_unit, lgroup_is_local, xi, Group, GroupElem};
use crate::mvcore::{eval_at, make_algebra, Algebra, MvElem, Term};
use crate::rat::Rat;
use crate::represent::embedding::{
    apply_coordinates, strategy, verify_algebra_map, ChainInto, Check, Coordinate, Embedding, Mapping, Side,
};
use crate::represent::separate::separating_term;
use crate::spectra::{self, Ideal, Order, QuotientMap};

/// `x ↦ (x/Rad)` read as a rational in `[0, 1]`, for chains and local
/// algebras: by rank on finite chains, through the radical quotient
/// otherwise.
pub(crate) enum StandardPart {
    Ranks(Vec<MvElem>),
    Head(Box<QuotientMap>),
}

/// Elements of a finite chain in increasing order.
pub(crate) fn chain_order(a: &Algebra, mut elems: Vec<MvElem>) -> Result<Vec<MvElem>> {
    let mut incomparable = None;
    elems.sort_by(|x, y| match (a.leq_raw(x, y), a.leq_raw(y, x)) {
        (true, true) => std::cmp::Ordering::Equal,
        (true, false) => std::cmp::Ordering::Less,
        (false, true) => std::cmp::Ordering::Greater,
        (false, false) => {
            incomparable.get_or_insert_with(|| format!("{x} and {y}"));
            std::cmp::Ordering::Equal
        }
    });
    match incomparable {
        Some(w) => Err(MvError::failed(format!("{a} should be a chain"), w)),
        None => Ok(elems),
    }
}

impl StandardPart {
    pub(crate) fn of(a: &Algebra, cfg: &Config) -> Result<StandardPart> {
        if let Some(elems) = a.elements(cfg.cap)? {
            return Ok(StandardPart::Ranks(chain_order(a, elems)?));
        }
        let q = spectra::quotient(a, Ideal::Radical, cfg)?;
        match q.target {
            Algebra::FiniteChain(_) | Algebra::UnitIntervalQ => Ok(StandardPart::Head(Box::new(q))),
            ref t => Err(MvError::UnsupportedShape(format!("{a}/radical = {t} is not a standard chain"))),
        }
    }

    pub(crate) fn value(&self, x: &MvElem) -> Rat {
        match self {
            StandardPart::Ranks(r) => {
                let i = r.iter().position(|y| y == x).expect("element of the chain");
                Rat::chain_point(i as u64, r.len() as u64)
            }
            StandardPart::Head(q) => match q.project_raw(x) {
                MvElem::Rational(v) => v,
                other => unreachable!("standard chain element {other}"),
            },
        }
    }
}

fn require_local(a: &Algebra, cfg: &Config) -> Result<()> {
    if spectra::classify(a, cfg)?.is_local {
        Ok(())
    } else {
        Err(MvError::NotLocal(a.to_string()))
    }
}

/// `K(U^k)`, after checking that `U` is local and confirming on samples
/// that members are closed under `0`, `¬`, `⊕` and that the result is
/// local.
pub fn quasi_constant_algebra(u: &Algebra, sites: usize, cfg: &Config) -> Result<Algebra> {
    if sites == 0 {
        return Err(MvError::InvalidDescriptor("a quasi-constant algebra needs at least one site".into()));
    }
    if !spectra::classify(u, cfg)?.is_local {
        return Err(MvError::BaseNotSupported(format!("{u} is not local")));
    }
    let k = make_algebra(Algebra::QuasiConstant { base: Box::new(u.clone()), sites })?;
    let mut closure = Check::new("closure", strategy(false, cfg));
    let member = |f: &MvElem| is_quasi_constant(u, f, cfg).map(|w| w.member);
    closure.record(member(&k.zero())?, || "0".into());
    let mut rng = cfg.rng(0xc0);
    for _ in 0..cfg.samples {
        let (f, g) = (k.sample(&mut rng), k.sample(&mut rng));
        let sum = k.plus_raw(&f, &g);
        let neg = k.neg_raw(&f);
        closure.record(member(&f)? && member(&g)?, || format!("sample {f} or {g}"));
        closure.record(member(&sum)?, || format!("{f} + {g} = {sum}"));
        closure.record(member(&neg)?, || format!("~{f} = {neg}"));
    }
    closure.require("quasi-constant algebra")?;
    if !spectra::classify(&k, cfg)?.is_local {
        return Err(MvError::failed("quasi-constant algebra should be local", &k));
    }
    Ok(k)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SiteEvidence {
    pub site: usize,
    /// `d(f(site), anchor)`.
    pub distance: MvElem,
    pub in_radical: bool,
}

/// Membership of `f` in `K(U^X)`, anchored at the value on the first site.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuasiConstantWitness {
    pub member: bool,
    pub anchor: MvElem,
    /// The anchor modulo the radical, as a point of `[0, 1]`.
    pub anchor_class: Rat,
    pub evidence: Vec<SiteEvidence>,
}

pub fn is_quasi_constant(u: &Algebra, f: &MvElem, cfg: &Config) -> Result<QuasiConstantWitness> {
    let values = match f {
        MvElem::Function(xs) | MvElem::Tuple(xs) if !xs.is_empty() => xs,
        other => return Err(MvError::not_in(other, format!("functions into {u}"))),
    };
    for x in values {
        u.check(x)?;
    }
    let standard = StandardPart::of(u, cfg).map_err(|e| MvError::BaseNotSupported(e.to_string()))?;
    let anchor = values[0].clone();
    let mut evidence = Vec::new();
    for (site, x) in values.iter().enumerate() {
        let distance = u.dist_raw(x, &anchor);
        let in_radical = spectra::in_radical(u, &distance)?;
        evidence.push(SiteEvidence { site, distance, in_radical });
    }
    Ok(QuasiConstantWitness { member: evidence.iter().all(|e| e.in_radical), anchor_class: standard.value(&anchor), anchor, evidence })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrimeMismatch {
    pub x: MvElem,
    pub p: Ideal,
    pub q: Ideal,
    /// `(x/P)/Rad(A/P)`, which is below the `Q` class.
    pub class_p: Rat,
    pub class_q: Rat,
}

/// The contrapositive: a term separating the two classes sends `x` to an
/// element `φ(x)` with `φ(x)/P` and `¬φ(x)/Q` radical, so that neither
/// `φ(x)` nor `¬φ(x)` has finite order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PropSpecCounterexample {
    pub mismatch: PrimeMismatch,
    pub term: Term,
    pub phi_x: MvElem,
    pub phi_x_mod_p_radical: bool,
    pub neg_phi_x_mod_q_radical: bool,
    pub ord_phi_x: Order,
    pub ord_neg_phi_x: Order,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PropSpecReport {
    pub algebra: Algebra,
    pub is_local: bool,
    pub primes: Vec<Ideal>,
    pub strategy: crate::mvcore::Strategy,
    pub points_checked: usize,
    /// Every checked `x` has the same class over every prime.
    pub holds: bool,
    pub mismatch: Option<PrimeMismatch>,
    pub counterexample: Option<PropSpecCounterexample>,
}

/// Compares `(x/P)/Rad(A/P)` across all pairs of primes. On a local algebra
/// the classes must agree; otherwise the first mismatch is turned into the
/// infinite-order witness of the contrapositive.
pub fn verify_prop_spec(a: &Algebra, cfg: &Config) -> Result<PropSpecReport> {
    let is_local = spectra::classify(a, cfg)?.is_local;
    let primes = spectra::spec(a, cfg)?;
    let mut coords = Vec::new();
    for p in &primes {
        let q = spectra::quotient(a, p.clone(), cfg)?;
        let standard = StandardPart::of(&q.target, cfg)?;
        coords.push((q, standard));
    }
    let (points, exhaustive) = a.test_points(cfg, 0xa0)?;
    let mut mismatch = None;
    'points: for x in &points {
        let classes: Vec<Rat> = coords.iter().map(|(q, s)| s.value(&q.project_raw(x))).collect();
        for i in 0..classes.len() {
            for j in i + 1..classes.len() {
                if classes[i] != classes[j] {
                    let (i, j) = if classes[i] < classes[j] { (i, j) } else { (j, i) };
                    mismatch = Some(PrimeMismatch {
                        x: x.clone(),
                        p: primes[i].clone(),
                        q: primes[j].clone(),
                        class_p: classes[i].clone(),
                        class_q: classes[j].clone(),
                    });
                    break 'points;
                }
            }
        }
    }
    if is_local && mismatch.is_some() {
        return Err(MvError::failed(format!("prime classes of the local algebra {a} should agree"), format!("{mismatch:?}")));
    }
    let counterexample = match &mismatch {
        Some(m) => Some(contrapositive(a, m, &primes, &coords, cfg)?),
        None if !is_local => return Err(MvError::failed(format!("{a} is not local but all prime classes agree"), "no mismatch")),
        None => None,
    };
    Ok(PropSpecReport {
        algebra: a.clone(),
        is_local,
        strategy: strategy(exhaustive, cfg),
        points_checked: points.len(),
        holds: mismatch.is_none(),
        primes,
        mismatch,
        counterexample,
    })
}

fn contrapositive(
    a: &Algebra,
    m: &PrimeMismatch,
    primes: &[Ideal],
    coords: &[(QuotientMap, StandardPart)],
    cfg: &Config,
) -> Result<PropSpecCounterexample> {
    let sep = separating_term(&m.class_p, &m.class_q)?;
    let phi_x = eval_at(a, &sep.term, "t", &m.x)?;
    let neg_phi_x = a.neg_raw(&phi_x);
    let at = |ideal: &Ideal| &coords[primes.iter().position(|p| p == ideal).expect("listed prime")];
    let (qp, sp) = at(&m.p);
    let (qq, sq) = at(&m.q);
    let out = PropSpecCounterexample {
        mismatch: m.clone(),
        term: sep.term,
        phi_x_mod_p_radical: sp.value(&qp.project_raw(&phi_x)).is_zero(),
        neg_phi_x_mod_q_radical: sq.value(&qq.project_raw(&neg_phi_x)).is_zero(),
        ord_phi_x: spectra::ord(a, &phi_x)?.order,
        ord_neg_phi_x: spectra::ord(a, &neg_phi_x)?.order,
        phi_x,
    };
    if !(out.phi_x_mod_p_radical && out.neg_phi_x_mod_q_radical) || out.ord_phi_x.is_finite() || out.ord_neg_phi_x.is_finite() {
        return Err(MvError::failed("contrapositive of the prime-independence argument", format!("{out:?}")));
    }
    let _ = cfg;
    Ok(out)
}

/// How a chain quotient sits inside `Γ(S, (1, 0, …))`.
fn surrogate_chain(c: &Algebra, target: &Group, cfg: &Config) -> Result<ChainInto> {
    let depth = target.lex_scalars().map_or(0, |s| s.len());
    match c {
        Algebra::FiniteChain(_) | Algebra::UnitIntervalQ => {
            Ok(ChainInto::Surrogate { ranks: None, group: None, k: Rat::one(), target: target.clone() })
        }
        Algebra::Gamma { group, unit } => {
            let levels = group.lex_scalars().ok_or_else(|| MvError::UnsupportedShape(format!("chain {c}")))?;
            let u = group.flatten(unit);
            if u[1..].iter().any(|c| !c.is_zero()) {
                return Err(MvError::UnsupportedShape(format!("unit {unit} of {c}")));
            }
            if levels.len() > depth {
                return Err(MvError::SurrogateTooShallow { depth, needed: levels.len() });
            }
            Ok(ChainInto::Surrogate { ranks: None, group: Some(group.clone()), k: u[0].clone(), target: target.clone() })
        }
        _ => match c.elements(cfg.cap)? {
            Some(elems) => {
                Ok(ChainInto::Surrogate { ranks: Some(chain_order(c, elems)?), group: None, k: Rat::one(), target: target.clone() })
            }
            None => Err(MvError::UnsupportedShape(format!("chain {c}"))),
        },
    }
}

/// Embeds a local `A` into `K(Γ(S, (1, 0, …))^Spec A)`: the coordinate at
/// `P` embeds the chain `A/P` into the surrogate. Besides homomorphism and
/// injectivity, every image must be quasi-constant with anchor class equal
/// to `x/Rad(A)`.
pub fn local_representation(a: &Algebra, cfg: &Config) -> Result<Embedding> {
    require_local(a, cfg)?;
    let surrogate = Group::nonstandard_reals(cfg.surrogate_depth);
    let unit = surrogate.basis_vector(0).expect("lexicographic surrogate");
    let base = Algebra::gamma(surrogate.clone(), unit)?;
    let primes = spectra::spec(a, cfg)?;
    let target = make_algebra(Algebra::QuasiConstant { base: Box::new(base.clone()), sites: primes.len() })?;
    let mut coords = Vec::new();
    for p in &primes {
        let quotient = spectra::quotient(a, p.clone(), cfg)?;
        let into = surrogate_chain(&quotient.target, &surrogate, cfg)?;
        coords.push(Coordinate { quotient, into });
    }
    let f = |x: &MvElem| apply_coordinates(&coords, true, x);
    let mut verification = verify_algebra_map(a, &target, &f, cfg, 0xe0)?;
    let standard = StandardPart::of(a, cfg)?;
    let (points, exhaustive) = a.test_points(cfg, 0xe0)?;
    let mut anchored = Check::new("quasi-constant images with the predicted anchor class", strategy(exhaustive, cfg));
    for x in &points {
        let w = is_quasi_constant(&base, &f(x), cfg)?;
        let predicted = standard.value(x);
        anchored.record(w.member && w.anchor_class == predicted, || format!("{x}: {w:?}, expected class {predicted}"));
    }
    verification.push(anchored);
    for c in &verification {
        c.require("local representation")?;
    }
    Ok(Embedding {
        source: Side::Algebra(a.clone()),
        target: Side::Algebra(target),
        coordinates: primes,
        surrogate: Some(surrogate),
        verification,
        map: Mapping::Coordinates { coords, functions: true },
    })
}

/// Transports [`local_representation`] of `Γ(G, u)` to the groups through
/// Ξ, extending from `[0, u]` by good sequences. The image group is the
/// quasi-constant functions into the surrogate with the constant unit.
pub fn group_qc_representation(g: &Group, u: &GroupElem, cfg: &Config) -> Result<Embedding> {
    if is_strong_unit(g, u, cfg)?.is_strong != Some(true) {
        return Err(MvError::InvalidUnit(u.to_string()));
    }
    if !lgroup_is_local(g, u, cfg)? {
        return Err(MvError::NotLocal(format!("({g}, {u})")));
    }
    let inner = local_representation(&Algebra::gamma(g.clone(), u.clone())?, cfg)?;
    let Side::Algebra(t) = &inner.target else { unreachable!("algebra embedding") };
    let (h, v) = xi(t)?;
    let mut e = Embedding {
        source: Side::Group { group: g.clone(), unit: u.clone() },
        target: Side::Group { group: h.clone(), unit: v.clone() },
        coordinates: inner.coordinates.clone(),
        surrogate: inner.surrogate.clone(),
        verification: Vec::new(),
        map: Mapping::Group { inner: Box::new(inner), group: g.clone(), unit: u.clone() },
    };
    let strategy = strategy(false, cfg);
    let mut hom = Check::new("group homomorphism preserving the unit", strategy);
    let mut order = Check::new("order embedding", strategy);
    let mut member = Check::new("quasi-constant images", strategy);
    let image_of_unit = e.apply_group(u)?;
    hom.record(image_of_unit == v, || format!("unit maps to {image_of_unit}"));
    let mut rng = cfg.rng(0xe2);
    let points: Vec<GroupElem> = (0..cfg.samples).map(|_| g.sample(&mut rng)).collect();
    let images = points.iter().map(|x| e.apply_group(x)).collect::<Result<Vec<_>>>()?;
    let n = points.len();
    for i in 0..n {
        let (x, fx) = (&points[i], &images[i]);
        member.record(h.contains(fx), || format!("{x} maps to {fx}"));
        for j in [(i + 1) % n, (i * 31 + 7) % n] {
            let (y, fy) = (&points[j], &images[j]);
            let sum = e.apply_group(&g.add_raw(x, y))?;
            hom.record(sum == h.add_raw(fx, fy), || format!("h({x} + {y}) = {sum}"));
            order.record(g.leq_raw(x, y) == h.leq_raw(fx, fy), || format!("{x} <= {y} vs {fx} <= {fy}"));
            order.record((x == y) == (fx == fy), || format!("{x}, {y} both map to {fx}"));
        }
    }
    e.verification = vec![hom, order, member];
    for c in &e.verification {
        c.require("group representation")?;
    }
    Ok(e)
}
