//! Strong units, the Γ and Ξ functors on structured descriptors, and the
//! correspondence between ideals of `Γ(G, u)` and ℓ-ideals of `G`.

use serde::Serialize;

use crate::config::Config;
use crate::error::{MvError, Result};
use crate::lgroup::{l_ideals, Group, GroupElem, LIdeal};
use crate::mvcore::{Algebra, MvElem};
use crate::rat::Rat;
use crate::spectra::{self, Ideal};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StrongUnitReport {
    pub group: Group,
    pub unit: GroupElem,
    /// `None` when undecided.
    pub is_strong: Option<bool>,
    pub mode: &'static str,
    /// An element no multiple of the unit dominates.
    pub witness: Option<GroupElem>,
    /// Sampled elements for which a dominating multiple was found.
    pub confirmations: usize,
}

/// Decides whether every `|x|` lies below some `n·u`.
///
/// Exact on structured descriptors: a scalar unit must be positive, a
/// lexicographic unit must have a strong head (a vanishing head leaves the
/// first coordinate undominated), and direct or quasi-constant units must be
/// strong in every coordinate. Sampled elements then confirm the verdict by
/// exhibiting a dominating multiple.
pub fn is_strong_unit(g: &Group, u: &GroupElem, cfg: &Config) -> Result<StrongUnitReport> {
    g.validate()?;
    g.check(u)?;
    let verdict = strong_exact(g, u);
    let mut confirmations = 0;
    if verdict.is_ok() {
        let mut rng = cfg.rng(0x5e0);
        for _ in 0..cfg.samples {
            let x = g.abs_raw(&g.sample(&mut rng));
            let mut n = num_bigint::BigInt::from(1);
            while !g.leq_raw(&x, &g.scale_raw(u, &n)) {
                n *= 2;
                if n.bits() > 256 {
                    return Err(MvError::failed(format!("{u} should be a strong unit of {g}"), x));
                }
            }
            confirmations += 1;
        }
    }
    Ok(StrongUnitReport {
        group: g.clone(),
        unit: u.clone(),
        is_strong: Some(verdict.is_ok()),
        mode: "exact",
        witness: verdict.err(),
        confirmations,
    })
}

fn strong_exact(g: &Group, u: &GroupElem) -> std::result::Result<(), GroupElem> {
    match (g, u) {
        (Group::Integers | Group::Rationals, _) => {
            if g.lt_raw(&g.zero(), u) {
                Ok(())
            } else {
                Err(positive_element(g))
            }
        }
        (Group::Lex(cs), GroupElem::Tuple(us)) if cs.len() == 1 => strong_exact(&cs[0], &us[0]).map_err(|w| GroupElem::Tuple(vec![w])),
        (Group::Lex(cs), _) if cs.len() >= 2 => {
            let (head, tail) = g.lex_split().expect("two components");
            let (uh, _) = g.lex_split_elem(u).expect("shape");
            if head.lt_raw(&head.zero(), uh) {
                strong_exact(head, uh).map_err(|w| g.lex_join_elem(w, tail.zero()))
            } else {
                Err(g.lex_join_elem(positive_element(head), tail.zero()))
            }
        }
        (Group::Direct(cs), GroupElem::Tuple(us)) => {
            for (i, (c, ui)) in cs.iter().zip(us).enumerate() {
                if let Err(w) = strong_exact(c, ui) {
                    let mut out: Vec<GroupElem> = cs.iter().map(Group::zero).collect();
                    out[i] = w;
                    return Err(GroupElem::Tuple(out));
                }
            }
            Ok(())
        }
        (Group::QuasiConstant { base, .. }, GroupElem::Tuple(us)) => {
            for ui in us {
                strong_exact(base, ui).map_err(|w| g.constant(&w))?;
            }
            Ok(())
        }
        _ => Ok(()),
    }
}

/// Some strictly positive element (zero only in the trivial group).
fn positive_element(g: &Group) -> GroupElem {
    match g {
        Group::Integers => GroupElem::int(1),
        Group::Rationals => GroupElem::rat(1, 1),
        Group::Lex(cs) if cs.is_empty() => g.zero(),
        Group::Lex(cs) => {
            let mut out: Vec<GroupElem> = cs.iter().map(Group::zero).collect();
            out[0] = positive_element(&cs[0]);
            GroupElem::Tuple(out)
        }
        Group::Direct(cs) => GroupElem::Tuple(cs.iter().map(positive_element).collect()),
        Group::QuasiConstant { base, .. } => g.constant(&positive_element(base)),
    }
}

/// `Γ(G, u)`.
pub fn gamma(g: Group, u: GroupElem) -> Result<Algebra> {
    Algebra::gamma(g, u)
}

/// The unital ℓ-group of a structured algebra, read off its descriptor.
pub fn xi(a: &Algebra) -> Result<(Group, GroupElem)> {
    Ok(match a {
        Algebra::FiniteChain(n) => (Group::Integers, GroupElem::int(*n as i64 - 1)),
        Algebra::UnitIntervalQ => (Group::Rationals, GroupElem::rat(1, 1)),
        Algebra::Gamma { group, unit } => (group.clone(), unit.clone()),
        Algebra::Product(fs) => {
            let parts = fs.iter().map(xi).collect::<Result<Vec<_>>>()?;
            let (gs, us): (Vec<_>, Vec<_>) = parts.into_iter().unzip();
            (Group::Direct(gs), GroupElem::Tuple(us))
        }
        Algebra::FunctionAlgebra { base, sites } => {
            let (g, u) = xi(base)?;
            (Group::Direct(vec![g; *sites]), GroupElem::Tuple(vec![u; *sites]))
        }
        Algebra::QuasiConstant { base, sites } => {
            let (g, u) = xi(base)?;
            let cfg = Config::default();
            let image = gamma(g.clone(), u.clone())?;
            let kernel = ideal_phi(&image, &spectra::radical(&image, &cfg)?, &cfg)?;
            let qc = Group::QuasiConstant { base: Box::new(g), kernel, sites: *sites };
            let unit = qc.constant(&u);
            (qc, unit)
        }
        Algebra::Quotient(_) => return Err(MvError::UnsupportedShape(format!("Ξ of the quotient {a}"))),
    })
}

/// The isomorphism `A → Γ(Ξ(A))`.
pub fn xi_map(a: &Algebra, x: &MvElem) -> Result<GroupElem> {
    a.check(x)?;
    Ok(match (a, x) {
        (Algebra::FiniteChain(n), MvElem::Rational(q)) => GroupElem::Int(q.chain_index(*n).expect("valid element").into()),
        (Algebra::UnitIntervalQ, MvElem::Rational(q)) => GroupElem::Rat(q.clone()),
        (Algebra::Gamma { .. }, MvElem::Group(g)) => g.clone(),
        (Algebra::Product(fs), MvElem::Tuple(xs)) => GroupElem::Tuple(fs.iter().zip(xs).map(|(f, x)| xi_map(f, x)).collect::<Result<_>>()?),
        (Algebra::FunctionAlgebra { base, .. } | Algebra::QuasiConstant { base, .. }, MvElem::Function(xs)) => {
            GroupElem::Tuple(xs.iter().map(|x| xi_map(base, x)).collect::<Result<_>>()?)
        }
        _ => return Err(MvError::UnsupportedShape(format!("Ξ of {a}"))),
    })
}

/// Inverse of [`xi_map`].
pub fn xi_unmap(a: &Algebra, g: &GroupElem) -> Result<MvElem> {
    let out = match (a, g) {
        (Algebra::FiniteChain(n), GroupElem::Int(k)) => {
            let k = u64::try_from(k.clone()).map_err(|_| MvError::not_in(g, a))?;
            if k >= *n {
                return Err(MvError::not_in(g, a));
            }
            MvElem::Rational(Rat::chain_point(k, *n))
        }
        (Algebra::UnitIntervalQ, GroupElem::Rat(q)) => MvElem::Rational(q.clone()),
        (Algebra::Gamma { .. }, _) => MvElem::Group(g.clone()),
        (Algebra::Product(fs), GroupElem::Tuple(gs)) if fs.len() == gs.len() => {
            MvElem::Tuple(fs.iter().zip(gs).map(|(f, g)| xi_unmap(f, g)).collect::<Result<_>>()?)
        }
        (Algebra::FunctionAlgebra { base, .. } | Algebra::QuasiConstant { base, .. }, GroupElem::Tuple(gs)) => {
            MvElem::Function(gs.iter().map(|g| xi_unmap(base, g)).collect::<Result<_>>()?)
        }
        _ => return Err(MvError::not_in(g, a)),
    };
    a.check(&out)?;
    Ok(out)
}

/// `(G, u)` is local iff `Γ(G, u)` is a local MV-algebra.
pub fn lgroup_is_local(g: &Group, u: &GroupElem, cfg: &Config) -> Result<bool> {
    Ok(spectra::classify(&gamma(g.clone(), u.clone())?, cfg)?.is_local)
}

fn gamma_parts(a: &Algebra) -> Result<(&Group, &GroupElem)> {
    match a {
        Algebra::Gamma { group, unit } => Ok((group, unit)),
        other => Err(MvError::NotGammaAlgebra(other.to_string())),
    }
}

/// Probe elements of `g`: signed small multiples of the coordinate vectors
/// plus seeded samples.
fn probes(g: &Group, cfg: &Config, stream: u64) -> Vec<GroupElem> {
    let mut out = Vec::new();
    let mut basis = Vec::new();
    if let Some(scalars) = g.lex_scalars() {
        basis.extend((0..scalars.len()).filter_map(|i| g.basis_vector(i)));
    } else if let Group::Direct(cs) = g {
        for i in 0..cs.len() {
            let mut v: Vec<GroupElem> = cs.iter().map(Group::zero).collect();
            v[i] = positive_element(&cs[i]);
            basis.push(GroupElem::Tuple(v));
        }
    }
    for b in &basis {
        for n in [1i64, -1, 3, -7] {
            out.push(g.scale_raw(b, &n.into()));
        }
    }
    let mut rng = cfg.rng(stream);
    out.extend((0..cfg.samples).map(|_| g.sample(&mut rng)));
    out
}

/// `φ(J) = { x ∈ G : |x| ∧ u ∈ J }`, identified within the ℓ-ideal
/// catalog of `G` as the unique entry agreeing with the defining predicate
/// on every probe and on samples of each candidate.
pub fn ideal_phi(a: &Algebra, j: &Ideal, cfg: &Config) -> Result<LIdeal> {
    let (g, u) = gamma_parts(a)?;
    let j = spectra::resolve_ideal(a, j.clone(), cfg)?;
    let pred = |x: &GroupElem| j.contains_raw(a, &MvElem::Group(g.meet_raw(&g.abs_raw(x), u)));
    let catalog = l_ideals(g)?;
    let mut points = probes(g, cfg, 0xf1);
    let mut rng = cfg.rng(0xf2);
    for h in &catalog {
        points.extend((0..64).map(|_| h.sample_member(g, &mut rng)));
    }
    let mut matches = Vec::new();
    'candidates: for h in catalog {
        for x in &points {
            if pred(x)? != h.contains_raw(g, x) {
                continue 'candidates;
            }
        }
        matches.push(h);
    }
    match matches.as_slice() {
        [h] => Ok(h.clone()),
        _ => Err(MvError::InvalidIdeal(format!("φ({j}) in {g}: {} catalog entries match", matches.len()))),
    }
}

/// `ψ(H) = H ∩ [0, u]`: an explicit set on finite carriers, otherwise the
/// unique catalog ideal of `Γ(G, u)` agreeing with `H` on test points and
/// on samples of each candidate.
pub fn ideal_psi(a: &Algebra, h: &LIdeal, cfg: &Config) -> Result<Ideal> {
    let (g, _) = gamma_parts(a)?;
    h.validate_for(g)?;
    let member = |x: &MvElem| match x {
        MvElem::Group(e) => h.contains_raw(g, e),
        _ => false,
    };
    if let Some(carrier) = a.elements(cfg.cap)? {
        return spectra::resolve_ideal(a, Ideal::Explicit(carrier.into_iter().filter(|x| member(x)).collect()), cfg);
    }
    let catalog = spectra::ideals(a, cfg)?;
    let (mut points, _) = a.test_points(cfg, 0xf3)?;
    let mut rng = cfg.rng(0xf4);
    for i in &catalog {
        for _ in 0..64 {
            points.push(i.sample_member(a, &mut rng)?);
        }
    }
    let mut matches = Vec::new();
    'candidates: for i in catalog {
        for x in &points {
            if i.contains_raw(a, x)? != member(x) {
                continue 'candidates;
            }
        }
        matches.push(i);
    }
    match matches.as_slice() {
        [i] => Ok(i.clone()),
        _ => Err(MvError::InvalidIdeal(format!("ψ({h}) in {a}: {} catalog entries match", matches.len()))),
    }
}

/// Both ideal posets of `Γ(G, u)` and `G` with the maps between them.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Correspondence {
    pub algebra: Algebra,
    pub phi: Vec<(Ideal, LIdeal)>,
    pub psi: Vec<(LIdeal, Ideal)>,
    /// `ψ(φ(J)) = J` for every ideal `J`.
    pub psi_after_phi: bool,
    /// `φ(ψ(H)) = H` for every ℓ-ideal `H`.
    pub phi_after_psi: bool,
    /// `J₁ ⊆ J₂` iff `φ(J₁) ⊆ φ(J₂)`, over all pairs.
    pub order_preserving: bool,
}

impl Correspondence {
    pub fn holds(&self) -> bool {
        self.psi_after_phi && self.phi_after_psi && self.order_preserving && self.phi.len() == self.psi.len()
    }
}

pub fn ideal_correspondence(a: &Algebra, cfg: &Config) -> Result<Correspondence> {
    let (g, _) = gamma_parts(a)?;
    let mv = spectra::ideals(a, cfg)?;
    let lg = l_ideals(g)?;
    let phi: Vec<(Ideal, LIdeal)> = mv.iter().map(|j| Ok((j.clone(), ideal_phi(a, j, cfg)?))).collect::<Result<_>>()?;
    let psi: Vec<(LIdeal, Ideal)> = lg.iter().map(|h| Ok((h.clone(), ideal_psi(a, h, cfg)?))).collect::<Result<_>>()?;
    let mut psi_after_phi = true;
    for (j, h) in &phi {
        psi_after_phi &= ideal_psi(a, h, cfg)? == *j;
    }
    let mut phi_after_psi = true;
    for (h, j) in &psi {
        phi_after_psi &= ideal_phi(a, j, cfg)? == *h;
    }
    let mut order_preserving = true;
    for (j1, h1) in &phi {
        for (j2, h2) in &phi {
            order_preserving &= spectra::ideal_subset(a, j1, j2, cfg)? == h1.is_subset(h2, g);
        }
    }
    Ok(Correspondence { algebra: a.clone(), phi, psi, psi_after_phi, phi_after_psi, order_preserving })
}
