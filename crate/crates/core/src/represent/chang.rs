use crate::config::Config;
use crate::error::{MvError, Result};
use crate::mvcore::{Algebra, MvElem};
use crate::represent::embedding::{apply_coordinates, verify_algebra_map, ChainInto, Coordinate, Embedding, Mapping, Side};
use crate::represent::quasi::chain_order;
use crate::spectra;

/// `x ↦ (x/P)_{P ∈ Spec A}` into the product of the prime quotients, each
/// of which must be a chain. Finite class quotients are relabelled as
/// `Ł_n` by rank.
pub fn chang_embedding(a: &Algebra, cfg: &Config) -> Result<Embedding> {
    let primes = spectra::spec(a, cfg)?;
    let mut coords = Vec::new();
    let mut factors = Vec::new();
    for (i, p) in primes.iter().enumerate() {
        let quotient = spectra::quotient(a, p.clone(), cfg)?;
        if let Some((x, y)) = spectra::chain_witness(&quotient.target, cfg, 0xb0 + i as u64)? {
            return Err(MvError::failed(format!("{} should be a chain", quotient.target), format!("{x}, {y}")));
        }
        let (factor, into) = match &quotient.target {
            t @ Algebra::Quotient(_) => {
                let elems = t.elements(cfg.cap)?.ok_or_else(|| MvError::UnsupportedShape(t.to_string()))?;
                (Algebra::FiniteChain(elems.len() as u64), ChainInto::Rank(chain_order(t, elems)?))
            }
            t => (t.clone(), ChainInto::Identity),
        };
        factors.push(factor);
        coords.push(Coordinate { quotient, into });
    }
    let target = Algebra::product(factors)?;
    let f = |x: &MvElem| apply_coordinates(&coords, false, x);
    let verification = verify_algebra_map(a, &target, &f, cfg, 0xb0)?;
    for c in &verification {
        c.require("Chang embedding")?;
    }
    Ok(Embedding {
        source: Side::Algebra(a.clone()),
        target: Side::Algebra(target),
        coordinates: primes,
        surrogate: None,
        verification,
        map: Mapping::Coordinates { coords, functions: false },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mvcore::Strategy;

    #[test]
    fn product_of_two_chains() {
        let cfg = Config::default();
        let a = Algebra::product(vec![Algebra::FiniteChain(2), Algebra::FiniteChain(3)]).unwrap();
        let e = chang_embedding(&a, &cfg).unwrap();
        let swapped = Algebra::product(vec![Algebra::FiniteChain(3), Algebra::FiniteChain(2)]).unwrap();
        assert_eq!(e.target, Side::Algebra(swapped));
        assert_eq!(e.verification[0].strategy, Strategy::Exhaustive);
        assert_eq!(e.verification[0].checked, 1 + 2 * 6 + 36);
        let x = MvElem::tuple([MvElem::rational(1, 1), MvElem::rational(1, 2)]);
        assert_eq!(e.apply(&x).unwrap(), MvElem::tuple([MvElem::rational(1, 2), MvElem::rational(1, 1)]));
    }

    #[test]
    fn chains_embed_by_the_identity() {
        let cfg = Config::default();
        let e = chang_embedding(&Algebra::FiniteChain(4), &cfg).unwrap();
        assert_eq!(e.coordinates, vec![spectra::Ideal::explicit([MvElem::rational(0, 1)])]);
        assert_eq!(e.apply(&MvElem::rational(1, 3)).unwrap(), MvElem::tuple([MvElem::rational(1, 3)]));
    }

    #[test]
    fn chang_has_two_coordinates() {
        let cfg = Config { samples: 300, ..Config::default() };
        let e = chang_embedding(&Algebra::chang(), &cfg).unwrap();
        assert_eq!(e.target, Side::Algebra(Algebra::product(vec![Algebra::chang(), Algebra::FiniteChain(2)]).unwrap()));
    }
}
