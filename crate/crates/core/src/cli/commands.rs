use serde_json::{json, Value};

use crate::cli::env::Env;
use crate::cli::syntax::{parse_algebra, parse_group, parse_ideal, parse_lit, parse_term, Lit};
use crate::cli::CliError;
use crate::config::Config;
use crate::error::MvError;
use crate::lgroup::{Group, GroupElem};
use crate::mvcore::{check_axioms, eval_term, Algebra, MvElem, Strategy, Term};
use crate::rat::Rat;
use crate::represent::{self, Embedding, RoundtripInput, Side};
use crate::spectra;

/// Every command with its argument synopsis.
pub const COMMANDS: &[(&str, &str)] = &[
    ("classify", "<algebra>"),
    ("ideals", "<algebra>"),
    ("spec", "<algebra>"),
    ("radical", "<algebra>"),
    ("quotient", "<algebra> <ideal>"),
    ("ord", "<algebra> <element>"),
    ("eval", "<algebra> <term> [var=element ...]"),
    ("axioms", "<algebra>"),
    ("embed-chang", "<algebra>"),
    ("dfunctor", "<algebra>"),
    ("gfunctor", "<group>"),
    ("roundtrip", "<group | algebra>"),
    ("qc-member", "<algebra> <function>"),
    ("separate", "<x> <y>"),
    ("local-rep", "<algebra>"),
    ("perfect-rep", "<algebra>"),
    ("group-rep", "<group> <unit>"),
    ("prop-spec", "<algebra>"),
];

pub(crate) struct Outcome {
    pub result: Value,
    pub verified: bool,
    pub surrogate: Option<String>,
}

fn ok(result: Value) -> Result<Outcome, CliError> {
    Ok(Outcome { result, verified: true, surrogate: None })
}

fn value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("results serialize")
}

struct Args<'a> {
    command: &'a str,
    args: &'a [String],
}

impl<'a> Args<'a> {
    fn usage(&self) -> CliError {
        let synopsis = COMMANDS.iter().find(|(c, _)| *c == self.command).map_or("", |(_, s)| s);
        CliError::Usage(format!("mvkit {} {synopsis}", self.command))
    }

    fn exactly(&self, n: usize) -> Result<(), CliError> {
        if self.args.len() == n {
            Ok(())
        } else {
            Err(self.usage())
        }
    }

    fn get(&self, i: usize) -> Result<&'a str, CliError> {
        self.args.get(i).map(String::as_str).ok_or_else(|| self.usage())
    }
}

fn algebra(env: &Env, text: &str, cfg: &Config) -> Result<Algebra, CliError> {
    env.algebra(&parse_algebra(text)?, cfg)
}

fn group(env: &Env, text: &str) -> Result<Group, CliError> {
    env.group(&parse_group(text)?)
}

fn element(env: &Env, a: &Algebra, text: &str) -> Result<MvElem, CliError> {
    env.elem(a, &parse_lit(text)?)
}

fn rational(env: &Env, text: &str) -> Result<Rat, CliError> {
    let lit = parse_lit(text)?;
    match env.deref(&lit)? {
        Lit::Num(q) => Ok(q.clone()),
        other => Err(CliError::Usage(format!("expected a rational number, got `{other}`"))),
    }
}

fn term(env: &Env, text: &str) -> Result<Term, CliError> {
    match env.terms.get(text) {
        Some(t) => Ok(t.clone()),
        None => parse_term(text),
    }
}

fn surrogate_note(e: &Embedding, cfg: &Config) -> Option<String> {
    e.surrogate.as_ref().map(|g| {
        format!("nonstandard reals approximated by {g} ({} rational levels); results hold for this surrogate only", cfg.surrogate_depth)
    })
}

/// The first few source elements with their images.
fn images(e: &Embedding, cfg: &Config) -> Result<Vec<Value>, CliError> {
    const SHOWN: usize = 4;
    let mut out = Vec::new();
    match &e.source {
        Side::Algebra(a) => {
            let (points, _) = a.test_points(cfg, 0x1a6e)?;
            for x in points.iter().take(SHOWN) {
                out.push(json!({ "x": x.to_string(), "image": e.apply(x)?.to_string() }));
            }
        }
        Side::Group { group, unit } => {
            let mut rng = cfg.rng(0x1a6e);
            let mut points = vec![group.zero(), unit.clone()];
            points.extend((0..SHOWN - 2).map(|_| group.sample(&mut rng)));
            for g in &points {
                out.push(json!({ "x": g.to_string(), "image": e.apply_group(g)?.to_string() }));
            }
        }
    }
    Ok(out)
}

fn embedding(e: Embedding, cfg: &Config) -> Result<Outcome, CliError> {
    let mut result = value(&e);
    result["examples"] = Value::Array(images(&e, cfg)?);
    Ok(Outcome { verified: e.passed(), surrogate: surrogate_note(&e, cfg), result })
}

fn axioms_strategy(a: &Algebra, cfg: &Config) -> Result<Strategy, CliError> {
    Ok(match a.elements(cfg.cap) {
        Ok(Some(_)) => Strategy::Exhaustive,
        Ok(None) | Err(MvError::CarrierTooLarge { .. }) => Strategy::Sampled { count: cfg.samples, seed: cfg.seed },
        Err(e) => return Err(e.into()),
    })
}

pub(crate) fn dispatch(command: &str, args: &[String], env: &Env, cfg: &Config) -> Result<Outcome, CliError> {
    let a = Args { command, args };
    match command {
        "classify" => {
            a.exactly(1)?;
            let alg = algebra(env, a.get(0)?, cfg)?;
            ok(value(&spectra::classify(&alg, cfg)?))
        }
        "ideals" => {
            a.exactly(1)?;
            let alg = algebra(env, a.get(0)?, cfg)?;
            let mut rows = Vec::new();
            let mut maximal = 0;
            let mut prime = 0;
            for i in spectra::ideals(&alg, cfg)? {
                let p = spectra::ideal_predicates(&alg, i, cfg)?;
                maximal += p.is_maximal as usize;
                prime += p.is_prime as usize;
                rows.push(value(&p));
            }
            ok(json!({ "algebra": alg.to_string(), "count": rows.len(), "prime": prime, "maximal": maximal, "ideals": rows }))
        }
        "spec" => {
            a.exactly(1)?;
            let alg = algebra(env, a.get(0)?, cfg)?;
            let mut primes = Vec::new();
            for p in spectra::spec(&alg, cfg)? {
                let q = spectra::quotient(&alg, p.clone(), cfg)?;
                primes.push(json!({ "index": primes.len(), "ideal": p.to_string(), "quotient": q.target.to_string() }));
            }
            ok(json!({ "algebra": alg.to_string(), "count": primes.len(), "primes": primes }))
        }
        "radical" => {
            a.exactly(1)?;
            let alg = algebra(env, a.get(0)?, cfg)?;
            let rad = spectra::radical(&alg, cfg)?;
            let (points, exhaustive) = alg.test_points(cfg, 0x7ad)?;
            let mut infinitesimals = 0;
            for x in &points {
                infinitesimals += spectra::is_infinitesimal(&alg, x)? as usize;
            }
            ok(json!({
                "algebra": alg.to_string(),
                "radical": rad.to_string(),
                "strategy": value(&if exhaustive { Strategy::Exhaustive } else { Strategy::Sampled { count: cfg.samples, seed: cfg.seed } }),
                "points_checked": points.len(),
                "infinitesimals_found": infinitesimals,
            }))
        }
        "quotient" => {
            a.exactly(2)?;
            let alg = algebra(env, a.get(0)?, cfg)?;
            let ideal = env.ideal(&alg, &parse_ideal(a.get(1)?)?)?;
            let q = spectra::quotient(&alg, ideal, cfg)?;
            let is_prime = spectra::ideal_predicates(&alg, q.ideal.clone(), cfg)?.is_prime;
            let axioms = check_axioms(&q.target, axioms_strategy(&q.target, cfg)?, cfg.cap)?;
            let verified = axioms.all_passed();
            Ok(Outcome {
                result: json!({
                    "source": q.source.to_string(),
                    "ideal": q.ideal.to_string(),
                    "target": q.target.to_string(),
                    "ideal_is_prime": is_prime,
                    "target_is_chain": spectra::classify(&q.target, cfg)?.is_chain,
                    "axioms": value(&axioms),
                }),
                verified,
                surrogate: None,
            })
        }
        "ord" => {
            a.exactly(2)?;
            let alg = algebra(env, a.get(0)?, cfg)?;
            let x = element(env, &alg, a.get(1)?)?;
            let report = spectra::ord(&alg, &x)?;
            let mut result = value(&report);
            result["in_radical"] = json!(spectra::in_radical(&alg, &x)?);
            ok(result)
        }
        "eval" => {
            if args.len() < 2 {
                return Err(a.usage());
            }
            let alg = algebra(env, a.get(0)?, cfg)?;
            let t = term(env, a.get(1)?)?;
            let mut bindings = crate::mvcore::Env::new();
            for b in &args[2..] {
                let (var, lit) =
                    b.split_once('=').ok_or_else(|| CliError::Usage(format!("binding `{b}` is not of the form var=element")))?;
                bindings.insert(var.trim().to_string(), element(env, &alg, lit.trim())?);
            }
            let result = eval_term(&alg, &t, &bindings)?;
            ok(json!({
                "algebra": alg.to_string(),
                "term": t.to_string(),
                "bindings": bindings.iter().map(|(k, v)| (k.clone(), Value::String(v.to_string()))).collect::<serde_json::Map<_, _>>(),
                "value": result.to_string(),
            }))
        }
        "axioms" => {
            a.exactly(1)?;
            let alg = algebra(env, a.get(0)?, cfg)?;
            let report = check_axioms(&alg, axioms_strategy(&alg, cfg)?, cfg.cap)?;
            Ok(Outcome { verified: report.all_passed(), result: value(&report), surrogate: None })
        }
        "embed-chang" => {
            a.exactly(1)?;
            let alg = algebra(env, a.get(0)?, cfg)?;
            embedding(represent::chang_embedding(&alg, cfg)?, cfg)
        }
        "dfunctor" => {
            a.exactly(1)?;
            let alg = algebra(env, a.get(0)?, cfg)?;
            let d = represent::d_functor(&alg, cfg)?;
            let verified = d.checks.iter().all(|c| c.passed);
            Ok(Outcome { result: value(&d), verified, surrogate: None })
        }
        "gfunctor" => {
            a.exactly(1)?;
            let g = group(env, a.get(0)?)?;
            let alg = represent::g_functor(&g, cfg)?;
            let c = spectra::classify(&alg, cfg)?;
            ok(json!({ "group": g.to_string(), "algebra": alg.to_string(), "is_perfect": c.is_perfect, "is_local": c.is_local }))
        }
        "roundtrip" => {
            a.exactly(1)?;
            let text = a.get(0)?;
            let input = match group(env, text) {
                Ok(g) => RoundtripInput::Group(g),
                Err(_) => RoundtripInput::Algebra(algebra(env, text, cfg)?),
            };
            let report = represent::roundtrip_check(&input, cfg)?;
            Ok(Outcome { verified: report.passed(), result: value(&report), surrogate: None })
        }
        "qc-member" => {
            a.exactly(2)?;
            let alg = algebra(env, a.get(0)?, cfg)?;
            let base = match &alg {
                Algebra::QuasiConstant { base, .. } | Algebra::FunctionAlgebra { base, .. } => (**base).clone(),
                other => other.clone(),
            };
            let f = match env.deref(&parse_lit(a.get(1)?)?)? {
                Lit::List(xs) => MvElem::Function(xs.iter().map(|x| env.elem(&base, x)).collect::<Result<_, _>>()?),
                other => return Err(CliError::Mv(MvError::not_in(other, format!("functions into {base}")))),
            };
            let w = represent::is_quasi_constant(&base, &f, cfg)?;
            let mut result = value(&w);
            result["base"] = json!(base.to_string());
            result["function"] = json!(f.to_string());
            Ok(Outcome { verified: w.member, result, surrogate: None })
        }
        "separate" => {
            a.exactly(2)?;
            let (x, y) = (rational(env, a.get(0)?)?, rational(env, a.get(1)?)?);
            let s = represent::separating_term(&x, &y)?;
            let mut result = value(&s);
            result["evaluations"] = json!(format!("φ({})={}, φ({})={}", s.x, s.at_x, s.y, s.at_y));
            ok(result)
        }
        "local-rep" => {
            a.exactly(1)?;
            let alg = algebra(env, a.get(0)?, cfg)?;
            embedding(represent::local_representation(&alg, cfg)?, cfg)
        }
        "perfect-rep" => {
            a.exactly(1)?;
            let alg = algebra(env, a.get(0)?, cfg)?;
            embedding(represent::perfect_representation(&alg, cfg)?, cfg)
        }
        "group-rep" => {
            a.exactly(2)?;
            let g = group(env, a.get(0)?)?;
            let u: GroupElem = env.group_elem(&g, &parse_lit(a.get(1)?)?)?;
            embedding(represent::group_qc_representation(&g, &u, cfg)?, cfg)
        }
        "prop-spec" => {
            a.exactly(1)?;
            let alg = algebra(env, a.get(0)?, cfg)?;
            let report = represent::verify_prop_spec(&alg, cfg)?;
            let verified = report.holds || report.counterexample.is_some();
            Ok(Outcome { result: value(&report), verified, surrogate: None })
        }
        other => Err(CliError::Usage(format!(
            "unknown command `{other}`; expected one of {}",
            COMMANDS.iter().map(|(c, _)| *c).collect::<Vec<_>>().join(", ")
        ))),
    }
}
