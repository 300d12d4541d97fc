use std::collections::BTreeSet;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::config::Rng;
use crate::error::{MvError, Result};
use crate::lgroup::{Group, GroupElem};
use crate::rat::Rat;

/// Symbolic ℓ-ideal (convex ℓ-subgroup) of a structured group.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LIdeal {
    Zero,
    Whole,
    /// In a lexicographic product of scalars: the elements whose first `k`
    /// flat coordinates vanish.
    TailKernel(usize),
    /// In a direct product: the elements vanishing on the given components.
    DirectKernel(BTreeSet<usize>),
}

impl fmt::Display for LIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LIdeal::Zero => f.write_str("zero"),
            LIdeal::Whole => f.write_str("whole"),
            LIdeal::TailKernel(k) => write!(f, "tail({k})"),
            LIdeal::DirectKernel(s) => {
                let items: Vec<String> = s.iter().map(usize::to_string).collect();
                write!(f, "kernel({})", items.join(", "))
            }
        }
    }
}

impl Serialize for LIdeal {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl LIdeal {
    pub fn validate_for(&self, g: &Group) -> Result<()> {
        match self {
            LIdeal::Zero | LIdeal::Whole => Ok(()),
            LIdeal::TailKernel(_) if g.lex_scalars().is_some() => Ok(()),
            LIdeal::DirectKernel(s) => match g {
                Group::Direct(cs) if s.iter().all(|&i| i < cs.len()) => Ok(()),
                _ => Err(MvError::InvalidIdeal(format!("{self} is not an ℓ-ideal of {g}"))),
            },
            _ => Err(MvError::InvalidIdeal(format!("{self} is not an ℓ-ideal of {g}"))),
        }
    }

    /// Rewrites degenerate kernels as `Zero` or `Whole`.
    pub fn normalize(self, g: &Group) -> LIdeal {
        match self {
            LIdeal::TailKernel(0) => LIdeal::Whole,
            LIdeal::TailKernel(k) if g.lex_scalars().is_some_and(|s| k >= s.len()) => LIdeal::Zero,
            LIdeal::DirectKernel(s) if s.is_empty() => LIdeal::Whole,
            LIdeal::DirectKernel(s) => match g {
                Group::Direct(cs) if s.len() >= cs.len() => LIdeal::Zero,
                _ => LIdeal::DirectKernel(s),
            },
            other => other,
        }
    }

    pub fn contains(&self, g: &Group, x: &GroupElem) -> Result<bool> {
        g.check(x)?;
        Ok(self.contains_raw(g, x))
    }

    pub(crate) fn contains_raw(&self, g: &Group, x: &GroupElem) -> bool {
        match self {
            LIdeal::Zero => g.is_zero_raw(x),
            LIdeal::Whole => true,
            LIdeal::TailKernel(k) => g.flatten(x).iter().take(*k).all(Rat::is_zero),
            LIdeal::DirectKernel(s) => match x {
                GroupElem::Tuple(xs) => {
                    let comps = g.component_groups(xs.len());
                    s.iter().all(|&i| comps[i].is_zero_raw(&xs[i]))
                }
                _ => false,
            },
        }
    }

    /// Inclusion between two ℓ-ideals of the same group.
    pub fn is_subset(&self, other: &LIdeal, g: &Group) -> bool {
        let a = self.clone().normalize(g);
        let b = other.clone().normalize(g);
        match (&a, &b) {
            (LIdeal::Zero, _) | (_, LIdeal::Whole) => true,
            (_, LIdeal::Zero) | (LIdeal::Whole, _) => a == b,
            (LIdeal::TailKernel(i), LIdeal::TailKernel(j)) => i >= j,
            (LIdeal::DirectKernel(s), LIdeal::DirectKernel(t)) => t.is_subset(s),
            _ => false,
        }
    }

    /// A pseudo-random member.
    pub fn sample_member(&self, g: &Group, rng: &mut Rng) -> GroupElem {
        match self {
            LIdeal::Zero => g.zero(),
            LIdeal::Whole => g.sample(rng),
            LIdeal::TailKernel(k) => {
                let mut coords = g.flatten(&g.sample(rng));
                coords.iter_mut().take(*k).for_each(|c| *c = Rat::zero());
                g.unflatten(&coords).unwrap_or_else(|| g.zero())
            }
            LIdeal::DirectKernel(s) => match g.sample(rng) {
                GroupElem::Tuple(mut xs) => {
                    let comps = g.component_groups(xs.len());
                    for &i in s {
                        xs[i] = comps[i].zero();
                    }
                    GroupElem::Tuple(xs)
                }
                other => other,
            },
        }
    }
}

/// Every ℓ-ideal of a structured group, sorted from smallest to largest
/// where the order allows.
///
/// For a lexicographic product of scalars the convex subgroups are exactly
/// the tail kernels; for a direct product of scalars they are the products
/// of `{0}` and the whole factor.
pub fn l_ideals(g: &Group) -> Result<Vec<LIdeal>> {
    if g.is_trivial() {
        return Ok(vec![LIdeal::Zero]);
    }
    if let Some(scalars) = g.lex_scalars() {
        let n = scalars.len();
        return Ok((0..=n).rev().map(|k| LIdeal::TailKernel(k).normalize(g)).collect());
    }
    match g {
        Group::Direct(cs) if cs.iter().all(|c| matches!(c, Group::Integers | Group::Rationals)) => {
            let n = cs.len();
            let mut out: Vec<LIdeal> = (0..(1u64 << n))
                .map(|mask| {
                    let kernel: BTreeSet<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
                    LIdeal::DirectKernel(kernel).normalize(g)
                })
                .collect();
            // fewer surviving components first
            out.sort_by_key(|i| match i {
                LIdeal::Zero => (0, BTreeSet::new()),
                LIdeal::DirectKernel(s) => (n - s.len(), s.clone()),
                _ => (n, BTreeSet::new()),
            });
            Ok(out)
        }
        _ => Err(MvError::UnsupportedShape(format!("ℓ-ideal catalog for {g}"))),
    }
}
