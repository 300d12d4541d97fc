//! Lattice-ordered abelian groups built from ℤ and ℚ by lexicographic and
//! direct products.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rand::Rng as _;
use serde::{Serialize, Serializer};

use crate::config::Rng;
use crate::error::{MvError, Result};
use crate::lgroup::LIdeal;
use crate::rat::Rat;

/// Descriptor of an ordered abelian group.
///
/// `Lex` orders tuples lexicographically and requires every component but
/// the last to be totally ordered (otherwise the order is not a lattice).
/// `Direct` carries the componentwise order; `Direct(vec![])` is the trivial
/// group.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Group {
    Integers,
    Rationals,
    Lex(Vec<Group>),
    Direct(Vec<Group>),
    /// Functions `{0..sites} -> base` whose values pairwise differ by an
    /// element of `kernel`, with pointwise operations and order.
    QuasiConstant {
        base: Box<Group>,
        kernel: LIdeal,
        sites: usize,
    },
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GroupElem {
    Int(BigInt),
    Rat(Rat),
    Tuple(Vec<GroupElem>),
}

impl GroupElem {
    pub fn int(n: i64) -> GroupElem {
        GroupElem::Int(BigInt::from(n))
    }

    pub fn rat(n: i64, d: i64) -> GroupElem {
        GroupElem::Rat(Rat::new(n, d))
    }

    pub fn tuple(items: impl IntoIterator<Item = GroupElem>) -> GroupElem {
        GroupElem::Tuple(items.into_iter().collect())
    }

    /// Pair of integers, the common case for `ℤ ×lex ℤ`.
    pub fn pair(a: i64, b: i64) -> GroupElem {
        GroupElem::tuple([GroupElem::int(a), GroupElem::int(b)])
    }

    pub fn items(&self) -> Option<&[GroupElem]> {
        match self {
            GroupElem::Tuple(items) => Some(items),
            _ => None,
        }
    }

    pub fn as_rat(&self) -> Option<Rat> {
        match self {
            GroupElem::Int(n) => Some(Rat::from_int(n.clone())),
            GroupElem::Rat(q) => Some(q.clone()),
            GroupElem::Tuple(_) => None,
        }
    }
}

impl fmt::Display for GroupElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupElem::Int(n) => write!(f, "{n}"),
            GroupElem::Rat(q) => write!(f, "{q}"),
            GroupElem::Tuple(items) => write_seq(f, "(", ")", items),
        }
    }
}

impl fmt::Debug for GroupElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for GroupElem {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

pub(crate) fn write_seq<T: fmt::Display>(
    f: &mut fmt::Formatter<'_>,
    open: &str,
    close: &str,
    items: impl IntoIterator<Item = T>,
) -> fmt::Result {
    f.write_str(open)?;
    for (i, item) in items.into_iter().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        write!(f, "{item}")?;
    }
    f.write_str(close)
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Group::Integers => f.write_str("Z"),
            Group::Rationals => f.write_str("Q"),
            Group::Lex(cs) => write_seq(f, "lex(", ")", cs),
            Group::Direct(cs) if cs.is_empty() => f.write_str("trivial"),
            Group::Direct(cs) => write_seq(f, "direct(", ")", cs),
            Group::QuasiConstant { base, kernel, sites } => {
                write!(f, "qc({base}, {kernel}, {sites})")
            }
        }
    }
}

impl Serialize for Group {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Scalar kind of one coordinate of a lexicographic product of scalars.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scalar {
    Int,
    Rat,
}

impl Group {
    pub fn lex(components: impl IntoIterator<Item = Group>) -> Group {
        Group::Lex(components.into_iter().collect())
    }

    pub fn direct(components: impl IntoIterator<Item = Group>) -> Group {
        Group::Direct(components.into_iter().collect())
    }

    pub fn trivial() -> Group {
        Group::Direct(Vec::new())
    }

    /// `Lex(ℚ, …, ℚ)` with `depth` levels: the divisible totally ordered
    /// group standing in for an ultrapower of ℝ.
    pub fn nonstandard_reals(depth: usize) -> Group {
        Group::Lex(vec![Group::Rationals; depth.max(1)])
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Group::Integers | Group::Rationals => Ok(()),
            Group::Lex(cs) => {
                for (i, c) in cs.iter().enumerate() {
                    c.validate()?;
                    if i + 1 < cs.len() && !c.is_total() {
                        return Err(MvError::InvalidDescriptor(format!(
                            "component {i} of {self} is not totally ordered, so the lexicographic order is not a lattice"
                        )));
                    }
                }
                Ok(())
            }
            Group::Direct(cs) => cs.iter().try_for_each(Group::validate),
            Group::QuasiConstant { base, kernel, sites } => {
                base.validate()?;
                if *sites == 0 {
                    return Err(MvError::InvalidDescriptor("quasi-constant group needs at least one site".into()));
                }
                kernel.validate_for(base)
            }
        }
    }

    pub fn is_total(&self) -> bool {
        match self {
            Group::Integers | Group::Rationals => true,
            Group::Lex(cs) => cs.iter().all(Group::is_total),
            Group::Direct(cs) => cs.iter().filter(|c| !c.is_trivial()).count() <= 1 && cs.iter().all(Group::is_total),
            Group::QuasiConstant { base, kernel, sites } => {
                base.is_total() && (*sites == 1 || *kernel == LIdeal::Zero || base.is_trivial())
            }
        }
    }

    pub fn is_trivial(&self) -> bool {
        match self {
            Group::Integers | Group::Rationals => false,
            Group::Lex(cs) | Group::Direct(cs) => cs.iter().all(Group::is_trivial),
            Group::QuasiConstant { base, .. } => base.is_trivial(),
        }
    }

    /// Shape and membership check for `x`.
    pub fn check(&self, x: &GroupElem) -> Result<()> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(MvError::ShapeMismatch { elem: x.to_string(), group: self.to_string() })
        }
    }

    pub fn contains(&self, x: &GroupElem) -> bool {
        match (self, x) {
            (Group::Integers, GroupElem::Int(_)) | (Group::Rationals, GroupElem::Rat(_)) => true,
            (Group::Lex(cs) | Group::Direct(cs), GroupElem::Tuple(xs)) => {
                cs.len() == xs.len() && cs.iter().zip(xs).all(|(c, x)| c.contains(x))
            }
            (Group::QuasiConstant { base, kernel, sites }, GroupElem::Tuple(xs)) => {
                xs.len() == *sites
                    && xs.iter().all(|x| base.contains(x))
                    && xs.iter().all(|x| kernel.contains_raw(base, &base.sub_raw(x, &xs[0])))
            }
            _ => false,
        }
    }

    pub fn zero(&self) -> GroupElem {
        match self {
            Group::Integers => GroupElem::Int(BigInt::zero()),
            Group::Rationals => GroupElem::Rat(Rat::zero()),
            Group::Lex(cs) | Group::Direct(cs) => GroupElem::Tuple(cs.iter().map(Group::zero).collect()),
            Group::QuasiConstant { base, sites, .. } => GroupElem::Tuple(vec![base.zero(); *sites]),
        }
    }

    /// Constant function at `value` in a quasi-constant group; the element
    /// itself otherwise.
    pub fn constant(&self, value: &GroupElem) -> GroupElem {
        match self {
            Group::QuasiConstant { sites, .. } => GroupElem::Tuple(vec![value.clone(); *sites]),
            _ => value.clone(),
        }
    }

    pub fn add(&self, x: &GroupElem, y: &GroupElem) -> Result<GroupElem> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.add_raw(x, y))
    }

    pub fn neg(&self, x: &GroupElem) -> Result<GroupElem> {
        self.check(x)?;
        Ok(self.neg_raw(x))
    }

    pub fn sub(&self, x: &GroupElem, y: &GroupElem) -> Result<GroupElem> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.sub_raw(x, y))
    }

    /// Partial-order comparison; `None` for incomparable elements.
    pub fn cmp(&self, x: &GroupElem, y: &GroupElem) -> Result<Option<Ordering>> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.cmp_raw(x, y))
    }

    pub fn leq(&self, x: &GroupElem, y: &GroupElem) -> Result<bool> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.leq_raw(x, y))
    }

    pub fn meet(&self, x: &GroupElem, y: &GroupElem) -> Result<GroupElem> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.meet_raw(x, y))
    }

    pub fn join(&self, x: &GroupElem, y: &GroupElem) -> Result<GroupElem> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.join_raw(x, y))
    }

    /// `|x| = x ∨ -x`.
    pub fn abs(&self, x: &GroupElem) -> Result<GroupElem> {
        self.check(x)?;
        Ok(self.abs_raw(x))
    }

    // Raw operations assume their arguments already passed `check`.

    pub(crate) fn add_raw(&self, x: &GroupElem, y: &GroupElem) -> GroupElem {
        match (x, y) {
            (GroupElem::Int(a), GroupElem::Int(b)) => GroupElem::Int(a + b),
            (GroupElem::Rat(a), GroupElem::Rat(b)) => GroupElem::Rat(a + b),
            (GroupElem::Tuple(xs), GroupElem::Tuple(ys)) => {
                let comps = self.component_groups(xs.len());
                GroupElem::Tuple(comps.iter().zip(xs.iter().zip(ys)).map(|(g, (a, b))| g.add_raw(a, b)).collect())
            }
            _ => unreachable!("operands validated against {self}"),
        }
    }

    pub(crate) fn neg_raw(&self, x: &GroupElem) -> GroupElem {
        match x {
            GroupElem::Int(a) => GroupElem::Int(-a),
            GroupElem::Rat(a) => GroupElem::Rat(-a),
            GroupElem::Tuple(xs) => {
                let comps = self.component_groups(xs.len());
                GroupElem::Tuple(comps.iter().zip(xs).map(|(g, a)| g.neg_raw(a)).collect())
            }
        }
    }

    pub(crate) fn sub_raw(&self, x: &GroupElem, y: &GroupElem) -> GroupElem {
        self.add_raw(x, &self.neg_raw(y))
    }

    /// `n·x` for a (possibly negative) integer `n`.
    pub(crate) fn scale_raw(&self, x: &GroupElem, n: &BigInt) -> GroupElem {
        match x {
            GroupElem::Int(a) => GroupElem::Int(a * n),
            GroupElem::Rat(a) => GroupElem::Rat(a * &Rat::from_int(n.clone())),
            GroupElem::Tuple(xs) => {
                let comps = self.component_groups(xs.len());
                GroupElem::Tuple(comps.iter().zip(xs).map(|(g, a)| g.scale_raw(a, n)).collect())
            }
        }
    }

    pub(crate) fn cmp_raw(&self, x: &GroupElem, y: &GroupElem) -> Option<Ordering> {
        match (self, x, y) {
            (_, GroupElem::Int(a), GroupElem::Int(b)) => Some(a.cmp(b)),
            (_, GroupElem::Rat(a), GroupElem::Rat(b)) => Some(a.cmp(b)),
            (Group::Lex(cs), GroupElem::Tuple(xs), GroupElem::Tuple(ys)) => {
                for ((g, a), b) in cs.iter().zip(xs).zip(ys) {
                    match g.cmp_raw(a, b) {
                        Some(Ordering::Equal) => continue,
                        other => return other,
                    }
                }
                Some(Ordering::Equal)
            }
            (Group::Direct(_) | Group::QuasiConstant { .. }, GroupElem::Tuple(xs), GroupElem::Tuple(ys)) => {
                let comps = self.component_groups(xs.len());
                let mut acc = Ordering::Equal;
                for ((g, a), b) in comps.iter().zip(xs).zip(ys) {
                    match (acc, g.cmp_raw(a, b)?) {
                        (_, Ordering::Equal) => {}
                        (Ordering::Equal, o) => acc = o,
                        (a, o) if a == o => {}
                        _ => return None,
                    }
                }
                Some(acc)
            }
            _ => unreachable!("operands validated against {self}"),
        }
    }

    pub(crate) fn leq_raw(&self, x: &GroupElem, y: &GroupElem) -> bool {
        matches!(self.cmp_raw(x, y), Some(Ordering::Less | Ordering::Equal))
    }

    pub(crate) fn lt_raw(&self, x: &GroupElem, y: &GroupElem) -> bool {
        self.cmp_raw(x, y) == Some(Ordering::Less)
    }

    fn lattice_raw(&self, x: &GroupElem, y: &GroupElem, meet: bool) -> GroupElem {
        let pick = |o: Ordering| if (o == Ordering::Less) == meet { x.clone() } else { y.clone() };
        match (self, x, y) {
            (_, GroupElem::Int(_), GroupElem::Int(_)) | (_, GroupElem::Rat(_), GroupElem::Rat(_)) => {
                pick(self.cmp_raw(x, y).expect("scalars are totally ordered"))
            }
            (Group::Lex(cs), GroupElem::Tuple(xs), GroupElem::Tuple(ys)) => {
                for (i, ((g, a), b)) in cs.iter().zip(xs).zip(ys).enumerate() {
                    match g.cmp_raw(a, b) {
                        Some(Ordering::Equal) => continue,
                        Some(o) => return pick(o),
                        None => {
                            // only the last component may be partially ordered
                            let mut out = xs[..i].to_vec();
                            out.push(g.lattice_raw(a, b, meet));
                            return GroupElem::Tuple(out);
                        }
                    }
                }
                x.clone()
            }
            (Group::Direct(_) | Group::QuasiConstant { .. }, GroupElem::Tuple(xs), GroupElem::Tuple(ys)) => {
                let comps = self.component_groups(xs.len());
                GroupElem::Tuple(comps.iter().zip(xs.iter().zip(ys)).map(|(g, (a, b))| g.lattice_raw(a, b, meet)).collect())
            }
            _ => unreachable!("operands validated against {self}"),
        }
    }

    pub(crate) fn meet_raw(&self, x: &GroupElem, y: &GroupElem) -> GroupElem {
        self.lattice_raw(x, y, true)
    }

    pub(crate) fn join_raw(&self, x: &GroupElem, y: &GroupElem) -> GroupElem {
        self.lattice_raw(x, y, false)
    }

    pub(crate) fn abs_raw(&self, x: &GroupElem) -> GroupElem {
        self.join_raw(x, &self.neg_raw(x))
    }

    /// `x⁺ = x ∨ 0`.
    pub fn positive_part(&self, x: &GroupElem) -> Result<GroupElem> {
        self.check(x)?;
        Ok(self.join_raw(x, &self.zero()))
    }

    /// `x⁻ = −x ∨ 0`, so that `x = x⁺ − x⁻`.
    pub fn negative_part(&self, x: &GroupElem) -> Result<GroupElem> {
        self.check(x)?;
        Ok(self.join_raw(&self.neg_raw(x), &self.zero()))
    }

    pub(crate) fn is_zero_raw(&self, x: &GroupElem) -> bool {
        *x == self.zero()
    }

    /// Group of each tuple coordinate.
    pub(crate) fn component_groups(&self, len: usize) -> Vec<&Group> {
        match self {
            Group::Lex(cs) | Group::Direct(cs) => cs.iter().collect(),
            Group::QuasiConstant { base, .. } => vec![base.as_ref(); len],
            _ => Vec::new(),
        }
    }

    /// Splits a lexicographic product into its first component and the
    /// lexicographic product of the rest.
    pub fn lex_split(&self) -> Option<(&Group, Group)> {
        match self {
            Group::Lex(cs) if cs.len() >= 2 => {
                let tail = if cs.len() == 2 { cs[1].clone() } else { Group::Lex(cs[1..].to_vec()) };
                Some((&cs[0], tail))
            }
            _ => None,
        }
    }

    /// Element counterpart of [`Group::lex_split`].
    pub fn lex_split_elem<'a>(&self, x: &'a GroupElem) -> Option<(&'a GroupElem, GroupElem)> {
        match (self, x) {
            (Group::Lex(cs), GroupElem::Tuple(xs)) if cs.len() >= 2 && xs.len() == cs.len() => {
                let tail = if xs.len() == 2 { xs[1].clone() } else { GroupElem::Tuple(xs[1..].to_vec()) };
                Some((&xs[0], tail))
            }
            _ => None,
        }
    }

    /// Inverse of [`Group::lex_split_elem`].
    pub fn lex_join_elem(&self, head: GroupElem, tail: GroupElem) -> GroupElem {
        match self {
            Group::Lex(cs) if cs.len() == 2 => GroupElem::Tuple(vec![head, tail]),
            Group::Lex(_) => {
                let mut out = vec![head];
                match tail {
                    GroupElem::Tuple(rest) => out.extend(rest),
                    other => out.push(other),
                }
                GroupElem::Tuple(out)
            }
            _ => panic!("lex_join_elem on non-lexicographic group {self}"),
        }
    }

    /// Coordinates of a (possibly nested) lexicographic product of scalars,
    /// or `None` when the group is not of that form.
    pub fn lex_scalars(&self) -> Option<Vec<Scalar>> {
        match self {
            Group::Integers => Some(vec![Scalar::Int]),
            Group::Rationals => Some(vec![Scalar::Rat]),
            Group::Lex(cs) => {
                let mut out = Vec::new();
                for c in cs {
                    out.extend(c.lex_scalars()?);
                }
                Some(out)
            }
            Group::Direct(cs) if cs.is_empty() => Some(Vec::new()),
            Group::Direct(cs) if cs.len() == 1 => cs[0].lex_scalars(),
            _ => None,
        }
    }

    /// Flattens an element of a lexicographic product of scalars.
    pub fn flatten(&self, x: &GroupElem) -> Vec<Rat> {
        fn go(g: &Group, x: &GroupElem, out: &mut Vec<Rat>) {
            match (g, x) {
                (_, GroupElem::Int(n)) => out.push(Rat::from_int(n.clone())),
                (_, GroupElem::Rat(q)) => out.push(q.clone()),
                (_, GroupElem::Tuple(xs)) => {
                    for (c, x) in g.component_groups(xs.len()).into_iter().zip(xs) {
                        go(c, x, out);
                    }
                }
            }
        }
        let mut out = Vec::new();
        go(self, x, &mut out);
        out
    }

    /// Rebuilds an element from flat coordinates; `None` if a coordinate does
    /// not fit its scalar kind or the count is wrong.
    pub fn unflatten(&self, coords: &[Rat]) -> Option<GroupElem> {
        fn go(g: &Group, coords: &mut std::slice::Iter<'_, Rat>) -> Option<GroupElem> {
            match g {
                Group::Integers => coords.next()?.to_integer().map(GroupElem::Int),
                Group::Rationals => coords.next().cloned().map(GroupElem::Rat),
                Group::Lex(cs) | Group::Direct(cs) => cs.iter().map(|c| go(c, coords)).collect::<Option<Vec<_>>>().map(GroupElem::Tuple),
                Group::QuasiConstant { .. } => None,
            }
        }
        let mut it = coords.iter();
        let out = go(self, &mut it)?;
        it.next().is_none().then_some(out)
    }

    /// The element that is `1` in flat coordinate `index` and `0` elsewhere.
    pub fn basis_vector(&self, index: usize) -> Option<GroupElem> {
        let n = self.lex_scalars()?.len();
        let coords: Vec<Rat> = (0..n).map(|i| if i == index { Rat::one() } else { Rat::zero() }).collect();
        self.unflatten(&coords)
    }

    /// Elements `lo <= x <= hi` when there are finitely many and at most
    /// `cap` of them.
    pub fn interval(&self, lo: &GroupElem, hi: &GroupElem, cap: usize) -> Option<Vec<GroupElem>> {
        if !self.leq_raw(lo, hi) {
            return Some(Vec::new());
        }
        match (self, lo, hi) {
            (Group::Integers, GroupElem::Int(a), GroupElem::Int(b)) => {
                let len = (b - a).to_usize()? + 1;
                if len > cap {
                    return None;
                }
                Some((0..len).map(|i| GroupElem::Int(a + BigInt::from(i))).collect())
            }
            (Group::Rationals, _, _) => (lo == hi).then(|| vec![lo.clone()]),
            (Group::Lex(cs), GroupElem::Tuple(ls), GroupElem::Tuple(hs)) => {
                if cs.is_empty() {
                    return Some(vec![lo.clone()]);
                }
                if cs.len() == 1 {
                    let inner = cs[0].interval(&ls[0], &hs[0], cap)?;
                    return Some(inner.into_iter().map(|x| GroupElem::Tuple(vec![x])).collect());
                }
                let (head, tail) = self.lex_split().expect("at least two components");
                let (lh, lt) = self.lex_split_elem(lo).expect("shape");
                let (hh, ht) = self.lex_split_elem(hi).expect("shape");
                let heads = head.interval(lh, hh, cap)?;
                let mut out = Vec::new();
                for h in heads {
                    let tails = if tail.is_trivial() {
                        vec![tail.zero()]
                    } else if h == *lh && h == *hh {
                        tail.interval(&lt, &ht, cap)?
                    } else {
                        // a strictly interior head leaves the tail unbounded
                        return None;
                    };
                    for t in tails {
                        out.push(self.lex_join_elem(h.clone(), t));
                        if out.len() > cap {
                            return None;
                        }
                    }
                }
                Some(out)
            }
            (Group::Direct(cs), GroupElem::Tuple(ls), GroupElem::Tuple(hs)) => {
                let mut out = vec![Vec::new()];
                for ((c, l), h) in cs.iter().zip(ls).zip(hs) {
                    let values = c.interval(l, h, cap)?;
                    let mut next = Vec::with_capacity(out.len() * values.len());
                    for prefix in &out {
                        for v in &values {
                            let mut p: Vec<GroupElem> = prefix.clone();
                            p.push(v.clone());
                            next.push(p);
                        }
                    }
                    if next.len() > cap {
                        return None;
                    }
                    out = next;
                }
                Some(out.into_iter().map(GroupElem::Tuple).collect())
            }
            (Group::QuasiConstant { base, sites, .. }, GroupElem::Tuple(ls), GroupElem::Tuple(hs)) => {
                let direct = Group::Direct(vec![base.as_ref().clone(); *sites]);
                let all = direct.interval(&GroupElem::Tuple(ls.clone()), &GroupElem::Tuple(hs.clone()), cap)?;
                Some(all.into_iter().filter(|x| self.contains(x)).collect())
            }
            _ => None,
        }
    }

    /// Pseudo-random element with `lo <= x <= hi` for the bounds that are
    /// present. Coordinates stay small so that sampled checks exercise the
    /// interesting boundary cases often.
    pub fn sample_between(&self, lo: Option<&GroupElem>, hi: Option<&GroupElem>, rng: &mut Rng) -> GroupElem {
        match self {
            Group::Integers => {
                let lo = lo.map(int_of);
                let hi = hi.map(int_of);
                GroupElem::Int(sample_int(lo, hi, rng))
            }
            Group::Rationals => {
                let lo = lo.and_then(GroupElem::as_rat);
                let hi = hi.and_then(GroupElem::as_rat);
                GroupElem::Rat(sample_rat(lo, hi, rng))
            }
            Group::Lex(cs) if cs.is_empty() => GroupElem::Tuple(Vec::new()),
            Group::Lex(cs) if cs.len() == 1 => {
                let l = lo.map(|x| &x.items().expect("shape")[0]);
                let h = hi.map(|x| &x.items().expect("shape")[0]);
                GroupElem::Tuple(vec![cs[0].sample_between(l, h, rng)])
            }
            Group::Lex(_) => {
                let (head, tail) = self.lex_split().expect("at least two components");
                let lo_parts = lo.map(|x| self.lex_split_elem(x).expect("shape"));
                let hi_parts = hi.map(|x| self.lex_split_elem(x).expect("shape"));
                let lh = lo_parts.as_ref().map(|p| p.0);
                let hh = hi_parts.as_ref().map(|p| p.0);
                // land on a bounding head a quarter of the time so the tail
                // bounds get exercised
                let h = match (lh, hh, rng.gen_range(0..8)) {
                    (Some(l), _, 0 | 1) => l.clone(),
                    (_, Some(h), 2 | 3) => h.clone(),
                    _ => head.sample_between(lh, hh, rng),
                };
                let tail_lo = lo_parts.as_ref().filter(|p| *p.0 == h).map(|p| &p.1);
                let tail_hi = hi_parts.as_ref().filter(|p| *p.0 == h).map(|p| &p.1);
                let t = tail.sample_between(tail_lo, tail_hi, rng);
                self.lex_join_elem(h, t)
            }
            Group::Direct(cs) => GroupElem::Tuple(
                cs.iter()
                    .enumerate()
                    .map(|(i, c)| {
                        let l = lo.map(|x| &x.items().expect("shape")[i]);
                        let h = hi.map(|x| &x.items().expect("shape")[i]);
                        c.sample_between(l, h, rng)
                    })
                    .collect(),
            ),
            Group::QuasiConstant { base, kernel, sites } => {
                let l = lo.map(|x| &x.items().expect("shape")[0]);
                let h = hi.map(|x| &x.items().expect("shape")[0]);
                let anchor = base.sample_between(l, h, rng);
                let mut out = vec![anchor.clone()];
                for i in 1..*sites {
                    let li = lo.map(|x| &x.items().expect("shape")[i]);
                    let hi_i = hi.map(|x| &x.items().expect("shape")[i]);
                    let mut value = anchor.clone();
                    for _ in 0..8 {
                        let delta = kernel.sample_member(base, rng);
                        let cand = base.add_raw(&anchor, &delta);
                        let ok = li.is_none_or(|l| base.leq_raw(l, &cand)) && hi_i.is_none_or(|h| base.leq_raw(&cand, h));
                        if ok {
                            value = cand;
                            break;
                        }
                    }
                    out.push(value);
                }
                GroupElem::Tuple(out)
            }
        }
    }

    pub fn sample(&self, rng: &mut Rng) -> GroupElem {
        self.sample_between(None, None, rng)
    }
}

fn int_of(x: &GroupElem) -> BigInt {
    match x {
        GroupElem::Int(n) => n.clone(),
        other => panic!("expected an integer, got {other}"),
    }
}

fn sample_int(lo: Option<BigInt>, hi: Option<BigInt>, rng: &mut Rng) -> BigInt {
    let spread = |rng: &mut Rng| BigInt::from(rng.gen_range(0..=12u32));
    match (lo, hi) {
        (Some(l), Some(h)) => {
            let width = (&h - &l).to_u64().unwrap_or(u64::MAX);
            if width <= 1_000_000 {
                l + BigInt::from(rng.gen_range(0..=width))
            } else {
                l + spread(rng)
            }
        }
        (Some(l), None) => l + spread(rng),
        (None, Some(h)) => h - spread(rng),
        (None, None) => BigInt::from(rng.gen_range(-12..=12i64)),
    }
}

fn sample_fraction(rng: &mut Rng) -> Rat {
    let d = rng.gen_range(1..=8i64);
    Rat::new(rng.gen_range(0..=d), d)
}

fn sample_rat(lo: Option<Rat>, hi: Option<Rat>, rng: &mut Rng) -> Rat {
    let free = |rng: &mut Rng| {
        let d = rng.gen_range(1..=8i64);
        Rat::new(rng.gen_range(0..=16 * d), d)
    };
    match (lo, hi) {
        (Some(l), Some(h)) => {
            let width = &h - &l;
            &l + &(&width * &sample_fraction(rng))
        }
        (Some(l), None) => &l + &free(rng),
        (None, Some(h)) => &h - &free(rng),
        (None, None) => {
            let d = rng.gen_range(1..=8i64);
            Rat::new(rng.gen_range(-16 * d..=16 * d), d)
        }
    }
}
