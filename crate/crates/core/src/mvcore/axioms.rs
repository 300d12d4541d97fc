//! The six defining equations of MV-algebras, checked on concrete
//! structures.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::config::Rng;
use crate::error::{MvError, Result};
use crate::mvcore::{Algebra, MvElem};

/// Anything with a zero, a sum and a negation that can be tested against
/// the axioms.
pub trait MvStructure {
    fn name(&self) -> String;
    fn zero(&self) -> MvElem;
    fn plus(&self, x: &MvElem, y: &MvElem) -> MvElem;
    fn neg(&self, x: &MvElem) -> MvElem;
    /// `Ok(None)` when the carrier is infinite.
    fn carrier(&self, cap: usize) -> Result<Option<Vec<MvElem>>>;
    fn sample(&self, rng: &mut Rng) -> MvElem;
}

impl MvStructure for Algebra {
    fn name(&self) -> String {
        self.to_string()
    }

    fn zero(&self) -> MvElem {
        Algebra::zero(self)
    }

    fn plus(&self, x: &MvElem, y: &MvElem) -> MvElem {
        self.plus_raw(x, y)
    }

    fn neg(&self, x: &MvElem) -> MvElem {
        self.neg_raw(x)
    }

    fn carrier(&self, cap: usize) -> Result<Option<Vec<MvElem>>> {
        self.elements(cap)
    }

    fn sample(&self, rng: &mut Rng) -> MvElem {
        Algebra::sample(self, rng)
    }
}

/// A finite structure given by its operation tables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CayleyTable {
    pub name: String,
    pub elements: Vec<MvElem>,
    pub zero: MvElem,
    plus: BTreeMap<(MvElem, MvElem), MvElem>,
    neg: BTreeMap<MvElem, MvElem>,
}

impl CayleyTable {
    pub fn of(a: &Algebra, cap: usize) -> Result<CayleyTable> {
        let elements = a.elements(cap)?.ok_or_else(|| MvError::InfiniteCarrierExhaustive(a.to_string()))?;
        let mut plus = BTreeMap::new();
        for x in &elements {
            for y in &elements {
                plus.insert((x.clone(), y.clone()), a.plus_raw(x, y));
            }
        }
        let neg = elements.iter().map(|x| (x.clone(), a.neg_raw(x))).collect();
        Ok(CayleyTable { name: format!("table({a})"), zero: a.zero(), elements, plus, neg })
    }

    /// Overwrites one entry of the `⊕` table (only the ordered pair given).
    pub fn with_plus(mut self, x: MvElem, y: MvElem, value: MvElem) -> CayleyTable {
        self.name = format!("{} with {x} + {y} := {value}", self.name);
        self.plus.insert((x, y), value);
        self
    }
}

impl MvStructure for CayleyTable {
    fn name(&self) -> String {
        self.name.clone()
    }

    fn zero(&self) -> MvElem {
        self.zero.clone()
    }

    fn plus(&self, x: &MvElem, y: &MvElem) -> MvElem {
        self.plus[&(x.clone(), y.clone())].clone()
    }

    fn neg(&self, x: &MvElem) -> MvElem {
        self.neg[x].clone()
    }

    fn carrier(&self, _cap: usize) -> Result<Option<Vec<MvElem>>> {
        Ok(Some(self.elements.clone()))
    }

    fn sample(&self, rng: &mut Rng) -> MvElem {
        use rand::seq::SliceRandom;
        self.elements.choose(rng).cloned().expect("nonempty carrier")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Strategy {
    Exhaustive,
    Sampled { count: usize, seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub x: MvElem,
    pub y: MvElem,
    pub z: MvElem,
    pub lhs: MvElem,
    pub rhs: MvElem,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomResult {
    pub axiom: usize,
    pub equation: &'static str,
    pub passed: bool,
    pub witness: Option<Witness>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub structure: String,
    pub strategy: Strategy,
    pub tuples_checked: usize,
    pub axioms: Vec<AxiomResult>,
}

impl AxiomReport {
    pub fn all_passed(&self) -> bool {
        self.axioms.iter().all(|a| a.passed)
    }
}

pub const EQUATIONS: [&str; 6] =
    ["x + (y + z) = (x + y) + z", "x + y = y + x", "x + 0 = x", "~~x = x", "x + ~0 = ~0", "~(~x + y) + y = ~(~y + x) + x"];

/// Both sides of axiom `i` (1-based) at `(x, y, z)`, through `plus`/`neg`
/// callbacks so the same code serves element and index tables.
fn sides<T: Clone, P: Fn(&T, &T) -> T, N: Fn(&T) -> T>(i: usize, x: &T, y: &T, z: &T, zero: &T, p: &P, n: &N) -> (T, T) {
    match i {
        1 => (p(x, &p(y, z)), p(&p(x, y), z)),
        2 => (p(x, y), p(y, x)),
        3 => (p(x, zero), x.clone()),
        4 => (n(&n(x)), x.clone()),
        5 => (p(x, &n(zero)), n(zero)),
        _ => (p(&n(&p(&n(x), y)), y), p(&n(&p(&n(y), x)), x)),
    }
}

/// Variables each axiom actually uses; fewer variables means fewer tuples
/// in the exhaustive sweep.
const ARITY: [usize; 6] = [3, 2, 1, 1, 1, 2];

/// Checks the six axioms. `Exhaustive` sweeps every tuple of a finite
/// carrier of at most `cap` elements (through an index-based copy of the
/// tables); `Sampled` draws `count` triples from ChaCha8 keyed by `seed`.
/// Witnesses are the first failing tuple in canonical order.
pub fn check_axioms(s: &impl MvStructure, strategy: Strategy, cap: usize) -> Result<AxiomReport> {
    let mut results = Vec::new();
    let tuples_checked;
    match strategy {
        Strategy::Exhaustive => {
            let elems = s.carrier(cap)?.ok_or_else(|| MvError::InfiniteCarrierExhaustive(s.name()))?;
            let n = elems.len();
            let index: BTreeMap<&MvElem, usize> = elems.iter().enumerate().map(|(i, x)| (x, i)).collect();
            let lookup = |x: &MvElem| -> Result<usize> {
                index.get(x).copied().ok_or_else(|| MvError::failed(format!("closure of the operations of {}", s.name()), x))
            };
            let mut plus = vec![0usize; n * n];
            for (i, x) in elems.iter().enumerate() {
                for (j, y) in elems.iter().enumerate() {
                    plus[i * n + j] = lookup(&s.plus(x, y))?;
                }
            }
            let neg: Vec<usize> = elems.iter().map(|x| lookup(&s.neg(x))).collect::<Result<_>>()?;
            let zero = lookup(&s.zero())?;
            let p = |a: &usize, b: &usize| plus[a * n + b];
            let ng = |a: &usize| neg[*a];
            for (k, equation) in EQUATIONS.iter().enumerate() {
                let arity = ARITY[k];
                let ys = if arity >= 2 { n } else { 1 };
                let zs = if arity >= 3 { n } else { 1 };
                let mut witness = None;
                'search: for x in 0..n {
                    for y in 0..ys {
                        for z in 0..zs {
                            let (l, r) = sides(k + 1, &x, &y, &z, &zero, &p, &ng);
                            if l != r {
                                witness = Some(Witness {
                                    x: elems[x].clone(),
                                    y: elems[y].clone(),
                                    z: elems[z].clone(),
                                    lhs: elems[l].clone(),
                                    rhs: elems[r].clone(),
                                });
                                break 'search;
                            }
                        }
                    }
                }
                results.push(AxiomResult { axiom: k + 1, equation, passed: witness.is_none(), witness });
            }
            tuples_checked = n * n * n;
        }
        Strategy::Sampled { count, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let triples: Vec<[MvElem; 3]> = (0..count).map(|_| [s.sample(&mut rng), s.sample(&mut rng), s.sample(&mut rng)]).collect();
            let zero = s.zero();
            let p = |a: &MvElem, b: &MvElem| s.plus(a, b);
            let ng = |a: &MvElem| s.neg(a);
            for (k, equation) in EQUATIONS.iter().enumerate() {
                let mut witness = None;
                for [x, y, z] in &triples {
                    let (l, r) = sides(k + 1, x, y, z, &zero, &p, &ng);
                    if l != r {
                        witness = Some(Witness { x: x.clone(), y: y.clone(), z: z.clone(), lhs: l, rhs: r });
                        break;
                    }
                }
                results.push(AxiomResult { axiom: k + 1, equation, passed: witness.is_none(), witness });
            }
            tuples_checked = count;
        }
    }
    Ok(AxiomReport { structure: s.name(), strategy, tuples_checked, axioms: results })
}
