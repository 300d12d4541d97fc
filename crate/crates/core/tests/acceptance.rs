//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit when
//! any criterion fails. Tolerances are exact equality throughout; the
//! runtime limits are pinned below.

mod common;

use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use common::{chain_products, eval_unit, stage_limit, Chains, Q};
use rand::Rng;

use mvkit::lgroup::ideal_correspondence;
use mvkit::mvcore::{check_axioms, Strategy as Sweep};
use mvkit::represent::{
    chang_embedding, group_qc_representation, is_quasi_constant, local_representation, perfect_representation, quasi_constant_algebra,
    roundtrip_check, separating_term, verify_prop_spec, RoundtripInput, Side,
};
use mvkit::spectra::{self, Order};
use mvkit::{Algebra, Config, Group, GroupElem, MvElem};

const AXIOM_BUDGET: Duration = Duration::from_secs(10);
const SEPARATION_BUDGET: Duration = Duration::from_secs(5);
const SAMPLES: usize = 1000;

type Verdict = Result<String, String>;
type Criterion = (&'static str, fn() -> Verdict);

fn cfg() -> Config {
    Config { samples: SAMPLES, seed: 20240601, ..Config::default() }
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn z() -> Group {
    Group::Integers
}

fn q() -> Group {
    Group::Rationals
}

fn pair(a: i64, b: i64) -> GroupElem {
    GroupElem::tuple([GroupElem::int(a), GroupElem::int(b)])
}

fn perfect_zq() -> Algebra {
    Algebra::gamma(Group::lex([z(), q()]), GroupElem::tuple([GroupElem::int(1), GroupElem::rat(0, 1)])).unwrap()
}

/// Finite algebras with a carrier of at most 64 elements: every product of
/// chains plus finite Γ algebras over ℤ and ℤ².
fn finite_algebras() -> Vec<Algebra> {
    let mut out: Vec<Algebra> = chain_products(64, 6).iter().map(|ns| Chains::new(ns).algebra()).collect();
    out.push(Algebra::gamma(z(), GroupElem::int(4)).unwrap());
    out.push(Algebra::gamma(Group::direct([z(), z()]), pair(1, 2)).unwrap());
    out
}

fn axiom_suite() -> Verdict {
    let start = Instant::now();
    let mut exhaustive = 0;
    for n in 2..=12u64 {
        let a = Algebra::FiniteChain(n);
        let r = check_axioms(&a, Sweep::Exhaustive, 64).map_err(err)?;
        ensure(r.all_passed(), || format!("{a}: {:?}", r.axioms))?;
        let o = Chains::new(&[n]);
        for x in o.elements() {
            for y in o.elements() {
                ensure(a.plus(&o.to_elem(&x), &o.to_elem(&y)).map_err(err)? == o.to_elem(&o.plus(&x, &y)), || {
                    format!("{a}: {x:?} + {y:?}")
                })?;
            }
        }
        exhaustive += 1;
    }
    for n in 2..=12u64 {
        for m in n..=12u64 {
            if n * m > 64 {
                continue;
            }
            let a = Chains::new(&[n, m]).algebra();
            let r = check_axioms(&a, Sweep::Exhaustive, 64).map_err(err)?;
            ensure(r.all_passed(), || format!("{a}: {:?}", r.axioms))?;
            exhaustive += 1;
        }
    }
    let sampled = [Algebra::chang(), Algebra::komori(3).unwrap(), Algebra::komori(4).unwrap(), perfect_zq(), Algebra::UnitIntervalQ];
    for a in &sampled {
        let r = check_axioms(a, Sweep::Sampled { count: SAMPLES, seed: cfg().seed }, 64).map_err(err)?;
        ensure(r.all_passed(), || format!("{a}: {:?}", r.axioms))?;
    }
    let elapsed = start.elapsed();
    ensure(elapsed < AXIOM_BUDGET, || format!("took {elapsed:.2?}, budget {AXIOM_BUDGET:?}"))?;
    Ok(format!("{exhaustive} finite algebras exhaustive, {} algebras x {SAMPLES} samples, {elapsed:.2?}", sampled.len()))
}

fn chang_subdirect() -> Verdict {
    let products = chain_products(64, 6);
    let cfg = cfg();
    for ns in &products {
        let o = Chains::new(ns);
        let a = o.algebra();
        let e = chang_embedding(&a, &cfg).map_err(err)?;
        ensure(e.passed() && e.verification.iter().all(|c| c.strategy == Sweep::Exhaustive), || format!("{a}: {:?}", e.verification))?;
        let Side::Algebra(t) = &e.target else { return Err(format!("{a}: target is not an algebra")) };
        let factors = match t {
            Algebra::Product(fs) => fs.clone(),
            other => vec![other.clone()],
        };
        for f in &factors {
            let xs = f.elements(64).map_err(err)?.ok_or_else(|| format!("{f} is infinite"))?;
            let total = xs.iter().all(|x| xs.iter().all(|y| f.leq(x, y).unwrap() || f.leq(y, x).unwrap()));
            ensure(total, || format!("{a}: coordinate {f} is not totally ordered"))?;
        }
        let all = o.elements();
        let images: Vec<MvElem> = all.iter().map(|x| e.apply(&o.to_elem(x))).collect::<Result<_, _>>().map_err(err)?;
        let mut distinct = images.clone();
        distinct.sort();
        distinct.dedup();
        ensure(distinct.len() == all.len(), || format!("{a}: not injective"))?;
        for (i, x) in all.iter().enumerate() {
            ensure(e.apply(&o.to_elem(&o.neg(x))).map_err(err)? == t.neg(&images[i]).map_err(err)?, || format!("{a}: ¬ at {x:?}"))?;
            for (j, y) in all.iter().enumerate() {
                let lhs = e.apply(&o.to_elem(&o.plus(x, y))).map_err(err)?;
                ensure(lhs == t.plus(&images[i], &images[j]).map_err(err)?, || format!("{a}: ⊕ at {x:?}, {y:?}"))?;
            }
        }
    }
    Ok(format!("{} products of chains, exhaustive", products.len()))
}

fn prime_iff_chain_quotient() -> Verdict {
    let cfg = cfg();
    let mut ideals = 0;
    let algebras = finite_algebras();
    for a in &algebras {
        for i in spectra::ideals(a, &cfg).map_err(err)? {
            let prime = spectra::ideal_predicates(a, i.clone(), &cfg).map_err(err)?.is_prime;
            let t = spectra::quotient(a, i.clone(), &cfg).map_err(err)?.target;
            let xs = t.elements(64).map_err(err)?.ok_or("infinite quotient")?;
            let chain = xs.len() > 1 && xs.iter().all(|x| xs.iter().all(|y| t.leq(x, y).unwrap() || t.leq(y, x).unwrap()));
            ensure(prime == chain, || format!("{a} / {i}: prime {prime}, chain quotient {chain}"))?;
            ideals += 1;
        }
    }
    Ok(format!("{ideals} ideals of {} finite algebras", algebras.len()))
}

fn perfect_round_trips() -> Verdict {
    let cfg = cfg();
    let inputs = [
        RoundtripInput::Group(z()),
        RoundtripInput::Group(q()),
        RoundtripInput::Group(Group::lex([z(), z()])),
        RoundtripInput::Group(Group::lex([q(), q()])),
        RoundtripInput::Algebra(Algebra::chang()),
        RoundtripInput::Algebra(perfect_zq()),
    ];
    for input in &inputs {
        let r = roundtrip_check(input, &cfg).map_err(err)?;
        ensure(r.passed(), || format!("{input:?}: {:?}", r.checks))?;
        ensure(r.checks.iter().any(|c| c.property == "two-sided inverse" && c.checked >= SAMPLES), || {
            format!("{input:?}: too few inverse checks")
        })?;
    }
    Ok(format!("{} round trips x {SAMPLES} samples, two-sided inverses", inputs.len()))
}

fn separating_terms() -> Verdict {
    let start = Instant::now();
    let mut rng = cfg().rng(0x5e9);
    let mut pairs = 0;
    let mut worst = 0;
    while pairs < 200 {
        let (d1, d2) = (rng.gen_range(1..=50i128), rng.gen_range(1..=50i128));
        let (x, y) = (Q::new(rng.gen_range(0..=d1), d1), Q::new(rng.gen_range(0..=d2), d2));
        let (x, y) = match (x.0 * y.1).cmp(&(y.0 * x.1)) {
            std::cmp::Ordering::Less => (x, y),
            std::cmp::Ordering::Greater => (y, x),
            std::cmp::Ordering::Equal => continue,
        };
        let s = separating_term(&x.to_rat(), &y.to_rat()).map_err(err)?;
        let (at_x, at_y) = (eval_unit(&s.term, "t", x), eval_unit(&s.term, "t", y));
        ensure(at_x == Q(0, 1) && at_y == Q(1, 1), || format!("({x:?}, {y:?}): φ gives {at_x:?}, {at_y:?}"))?;
        let limit = stage_limit(Q::new(y.0 * x.1 - x.0 * y.1, x.1 * y.1));
        ensure(s.stages <= limit, || format!("({x:?}, {y:?}): {} stages > {limit}", s.stages))?;
        worst = worst.max(s.stages);
        pairs += 1;
    }
    let elapsed = start.elapsed();
    ensure(elapsed < SEPARATION_BUDGET, || format!("took {elapsed:.2?}, budget {SEPARATION_BUDGET:?}"))?;
    Ok(format!("{pairs} pairs exact, at most {worst} stages, {elapsed:.2?}"))
}

fn ord_criterion(a: &Algebra, points: &[MvElem]) -> Result<bool, String> {
    for x in points {
        let nx = a.neg(x).map_err(err)?;
        if spectra::ord(a, x).map_err(err)?.order == Order::Infinite && spectra::ord(a, &nx).map_err(err)?.order == Order::Infinite {
            return Ok(false);
        }
    }
    Ok(true)
}

fn locality_criteria() -> Verdict {
    let cfg = cfg();
    let finite = finite_algebras();
    for a in &finite {
        let points = a.elements(64).map_err(err)?.unwrap();
        let local = spectra::classify(a, &cfg).map_err(err)?.is_local;
        ensure(local == ord_criterion(a, &points)?, || format!("{a}: classify says local = {local}"))?;
    }
    for ns in chain_products(64, 6) {
        let o = Chains::new(&ns);
        let oracle = o.elements().iter().all(|x| o.ord(x).is_some() || o.ord(&o.neg(x)).is_some());
        let a = o.algebra();
        let points = a.elements(64).map_err(err)?.unwrap();
        ensure(ord_criterion(&a, &points)? == oracle, || format!("{a}: ord disagrees with the integer model"))?;
    }
    let mut symbolic = vec![Algebra::chang()];
    symbolic.extend((3..=5).map(|n| Algebra::komori(n).unwrap()));
    symbolic.push(quasi_constant_algebra(&Algebra::chang(), 3, &cfg).map_err(err)?);
    for a in &symbolic {
        let (points, exhaustive) = a.test_points(&cfg, 0x10c).map_err(err)?;
        ensure(!exhaustive && points.len() == SAMPLES, || format!("{a}: expected {SAMPLES} samples"))?;
        let local = spectra::classify(a, &cfg).map_err(err)?.is_local;
        ensure(local && ord_criterion(a, &points)?, || format!("{a}: classify {local}, criterion disagrees"))?;
    }
    Ok(format!("{} finite algebras exhaustive, {} symbolic x {SAMPLES} samples", finite.len(), symbolic.len()))
}

fn quasi_constant_locality() -> Verdict {
    let cfg = cfg();
    let bases = [Algebra::chang(), Algebra::komori(3).unwrap(), perfect_zq()];
    for u in &bases {
        for k in 1..=3 {
            let a = quasi_constant_algebra(u, k, &cfg).map_err(err)?;
            ensure(spectra::classify(&a, &cfg).map_err(err)?.is_local, || format!("K({u}^{k}) is not local"))?;
        }
    }
    Ok(format!("{} bases x k in 1..=3, closure and locality sampled", bases.len()))
}

fn prime_independence() -> Verdict {
    let cfg = cfg();
    for a in [Algebra::chang(), Algebra::komori(3).unwrap(), Algebra::komori(4).unwrap()] {
        let r = verify_prop_spec(&a, &cfg).map_err(err)?;
        ensure(r.is_local && r.holds && r.points_checked == SAMPLES, || format!("{a}: {r:?}"))?;
    }
    let b = Chains::new(&[2, 3]).algebra();
    let r = verify_prop_spec(&b, &cfg).map_err(err)?;
    let c = r.counterexample.as_ref().ok_or("no counterexample on Ł2 x Ł3")?;
    let infinite = c.ord_phi_x == Order::Infinite && c.ord_neg_phi_x == Order::Infinite;
    ensure(!r.is_local && !r.holds && infinite && c.phi_x_mod_p_radical && c.neg_phi_x_mod_q_radical, || format!("{r:?}"))?;
    ensure(c.mismatch.x.to_string() == "(0, 1/2)", || format!("witness x = {}", c.mismatch.x))?;
    Ok(format!("holds on 3 local algebras; Ł2 x Ł3 witness x = {}, φ = {}", c.mismatch.x, c.term))
}

fn local_representations() -> Verdict {
    let cfg = cfg();
    let mut algebras = vec![Algebra::chang(), Algebra::komori(3).unwrap()];
    algebras.extend((2..=8).map(Algebra::FiniteChain));
    let mut images = 0;
    for a in &algebras {
        let e = local_representation(a, &cfg).map_err(err)?;
        ensure(e.passed() && e.surrogate.is_some(), || format!("{a}: {:?}", e.verification))?;
        let Side::Algebra(Algebra::QuasiConstant { base, .. }) = &e.target else { return Err(format!("{a}: unexpected target")) };
        let (points, _) = a.test_points(&cfg, 0x9c).map_err(err)?;
        for x in &points {
            let w = is_quasi_constant(base, &e.apply(x).map_err(err)?, &cfg).map_err(err)?;
            ensure(w.member, || format!("{a}: image of {x} is not quasi-constant"))?;
            images += 1;
        }
    }
    Ok(format!("{} algebras, {images} images quasi-constant", algebras.len()))
}

fn perfect_representations() -> Verdict {
    let cfg = cfg();
    let deep = Algebra::gamma(Group::lex([z(), Group::lex([z(), z()])]), GroupElem::tuple([GroupElem::int(1), pair(0, 0)])).unwrap();
    let values = "gamma(lex(Z, lex(Q, Q)), (1, (0, 0)))";
    for a in [Algebra::chang(), deep] {
        let e = perfect_representation(&a, &cfg).map_err(err)?;
        ensure(e.passed(), || format!("{a}: {:?}", e.verification))?;
        ensure(e.verification.iter().all(|c| c.strategy == Sweep::Sampled { count: SAMPLES, seed: cfg.seed }), || {
            format!("{a}: sample count")
        })?;
        let Side::Algebra(Algebra::FunctionAlgebra { base, .. }) = &e.target else { return Err(format!("{a}: unexpected target")) };
        ensure(base.to_string() == values, || format!("{a}: values in {base}"))?;
    }
    Ok(format!("chang and the depth-3 perfect algebra into functions valued in {values}"))
}

fn group_representations() -> Verdict {
    let cfg = cfg();
    for (g, u) in [(Group::lex([z(), z()]), pair(2, 0)), (z(), GroupElem::int(1))] {
        let e = group_qc_representation(&g, &u, &cfg).map_err(err)?;
        ensure(e.passed(), || format!("({g}, {u}): {:?}", e.verification))?;
        ensure(
            e.apply_group(&u).map_err(err)?
                == match &e.target {
                    Side::Group { unit, .. } => unit.clone(),
                    _ => return Err("target is not a group".into()),
                },
            || format!("({g}, {u}): unit not preserved"),
        )?;
    }
    Ok("(Z x lex Z, (2, 0)) and (Z, 1): unital order embeddings".into())
}

fn ideal_correspondences() -> Verdict {
    let cfg = cfg();
    let cases = [
        (Algebra::gamma(z(), GroupElem::int(2)).unwrap(), 2),
        (Algebra::gamma(Group::direct([z(), z()]), pair(1, 1)).unwrap(), 4),
        (perfect_zq(), 3),
    ];
    let mut sizes = Vec::new();
    for (a, n) in &cases {
        let c = ideal_correspondence(a, &cfg).map_err(err)?;
        ensure(c.holds() && c.phi.len() == *n, || format!("{a}: {c:?}"))?;
        sizes.push(c.phi.len().to_string());
    }
    Ok(format!("posets of sizes {} mutually inverse and monotone", sizes.join(", ")))
}

fn cli_determinism() -> Verdict {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    let mut files: Vec<_> =
        std::fs::read_dir(&dir).map_err(err)?.map(|e| e.unwrap().path()).filter(|p| p.extension().is_some_and(|e| e == "mv")).collect();
    files.sort();
    ensure(files.len() >= 15, || format!("only {} golden files", files.len()))?;
    for f in &files {
        let text = std::fs::read_to_string(f).map_err(err)?;
        let line = text.lines().find_map(|l| l.strip_prefix("# run:")).ok_or("missing # run: line")?;
        let once = || {
            let out = Command::new(env!("CARGO_BIN_EXE_mvkit")).args(line.split_whitespace()).arg("--file").arg(f).output().unwrap();
            format!("exit: {}\n{}", out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap())
        };
        let (a, b) = (once(), once());
        ensure(a == b, || format!("{}: runs differ", f.display()))?;
        let stored = std::fs::read_to_string(f.with_extension("expected")).unwrap_or_default();
        ensure(a == stored, || format!("{}: differs from the stored report", f.display()))?;
    }
    Ok(format!("{} spec files, two runs byte-identical and equal to the stored reports", files.len()))
}

fn main() {
    let criteria: [Criterion; 13] = [
        ("axiom suite", axiom_suite),
        ("Chang subdirect embedding", chang_subdirect),
        ("prime iff chain quotient", prime_iff_chain_quotient),
        ("perfect equivalence round trips", perfect_round_trips),
        ("separating terms", separating_terms),
        ("locality criteria agreement", locality_criteria),
        ("quasi-constant locality", quasi_constant_locality),
        ("prime independence", prime_independence),
        ("local representation", local_representations),
        ("perfect representation", perfect_representations),
        ("lu-group representation", group_representations),
        ("ideal correspondence", ideal_correspondences),
        ("CLI determinism", cli_determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let verdict = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match verdict {
            Ok(detail) => println!("criterion {:>2} PASS {name}: {detail} [{secs:.2}s]", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL {name}: {why} [{secs:.2}s]", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
