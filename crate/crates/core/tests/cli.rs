use std::process::Command;

use proptest::prelude::*;
use serde_json::Value;

use mvkit::cli::syntax::{parse_spec, parse_term, same_ast};
use mvkit::cli::{run, Invocation};
use mvkit::represent::separating_term;
use mvkit::{Algebra, Config, Group, GroupElem, Rat};

fn invoke(spec: &str, command: &str, args: &[&str]) -> (Value, i32) {
    let report = run(&Invocation {
        command: command.into(),
        args: args.iter().map(|s| s.to_string()).collect(),
        spec: Some(spec.into()),
        config: Config { samples: 100, ..Config::default() },
    });
    (serde_json::from_str(&report.to_json()).unwrap(), report.exit_code())
}

#[test]
fn classify_chang() {
    let (r, code) = invoke("algebra A = chang", "classify", &["A"]);
    assert_eq!(code, 0);
    let flags = &r["result"];
    for (flag, want) in [("is_chain", true), ("is_local", true), ("is_perfect", true), ("is_simple", false), ("is_semisimple", false)] {
        assert_eq!(flags[flag], want, "{flag}");
    }
}

#[test]
fn separate_thirds() {
    let (r, code) = invoke("", "separate", &["1/3", "2/3"]);
    assert_eq!(code, 0);
    assert_eq!(r["result"]["evaluations"], "φ(1/3)=0, φ(2/3)=1");
    let printed = r["result"]["term"].as_str().unwrap();
    let expected = separating_term(&Rat::new(1, 3), &Rat::new(2, 3)).unwrap().term;
    assert_eq!(parse_term(printed).unwrap(), expected);
}

#[test]
fn ideals_of_two_by_three() {
    let (r, _) = invoke("algebra B = product(chain(2), chain(3))", "ideals", &["B"]);
    assert_eq!(r["result"]["count"], 4);
    assert_eq!(r["result"]["maximal"], 2);
}

#[test]
fn parsing_examples() {
    let one = parse_spec("algebra A = chain(3)").unwrap();
    assert_eq!(one.decls.len(), 1);
    let env =
        mvkit::cli::Env::load(&parse_spec("group G = lex(Z, Q)\nalgebra P = gamma(G, (1, 0/1))").unwrap(), &Config::default()).unwrap();
    let want = Algebra::gamma(Group::lex([Group::Integers, Group::Rationals]), GroupElem::tuple([GroupElem::int(1), GroupElem::rat(0, 1)]))
        .unwrap();
    assert_eq!(env.algebras["P"], want);
    let phi = parse_spec("term phi = ((x*x)+(x*x)) + ((x*x)+(x*x))").unwrap();
    let sep = separating_term(&Rat::new(1, 3), &Rat::new(2, 3)).unwrap().term.to_string().replace('t', "x");
    assert!(same_ast(&phi, &parse_spec(&format!("term phi = {sep}")).unwrap()));
}

#[test]
fn exit_codes() {
    assert_eq!(invoke("algebra A = chang", "classify", &["A"]).1, 0);
    assert_eq!(invoke("algebra K = quasiconst(chang, 2)", "qc-member", &["K", "[(0, 1), (1, 0)]"]).1, 1);
    assert_eq!(invoke("algebra A = chang", "classify", &[]).1, 2);
    assert_eq!(invoke("algebra A = chang(", "classify", &["A"]).1, 2);
    assert_eq!(invoke("", "nonsense", &[]).1, 2);
    assert_eq!(invoke("algebra B = chain(3)", "dfunctor", &["B"]).1, 2);
}

#[test]
fn errors_name_their_kind() {
    let (r, _) = invoke("algebra A = product(B)", "classify", &["A"]);
    assert_eq!(r["error"]["kind"], "UnknownName");
    let (r, _) = invoke("algebra A = chain(2)\nalgebra A = chain(3)", "classify", &["A"]);
    assert_eq!(r["error"]["kind"], "DuplicateName");
    let (r, _) = invoke("algebra A = chain(2, 3)", "classify", &["A"]);
    assert_eq!(r["error"]["kind"], "ArityError");
    let (r, _) = invoke("", "separate", &["1/2", "1/2"]);
    assert_eq!(r["error"]["kind"], "NotStrictlyOrdered");
}

#[test]
fn surrogate_is_disclosed() {
    let (r, _) = invoke("algebra A = chang", "local-rep", &["A"]);
    assert!(r["surrogate"].as_str().unwrap().contains("lex(Q, Q)"));
    let (r, _) = invoke("algebra A = chang", "embed-chang", &["A"]);
    assert!(r.get("surrogate").is_none());
}

#[test]
fn binary_reads_files_and_flags() {
    let dir = std::env::temp_dir().join(format!("mvkit-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let file = dir.join("a.mv");
    std::fs::write(&file, "algebra B = product(chain(2), chain(3))\n").unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_mvkit")).args(["spec", "B", "--seed", "7", "--file"]).arg(&file).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let r: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(r["config"]["seed"], 7);
    assert_eq!(r["result"]["count"], 2);
    let out = Command::new(env!("CARGO_BIN_EXE_mvkit")).args(["spec", "B", "--pretty", "--file"]).arg(&file).output().unwrap();
    assert!(String::from_utf8(out.stdout).unwrap().lines().any(|l| l.starts_with("result.count") && l.ends_with(" 2")));
    let out = Command::new(env!("CARGO_BIN_EXE_mvkit")).args(["spec", "B", "--file"]).arg(dir.join("missing.mv")).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    std::fs::remove_dir_all(&dir).unwrap();
}

fn group_src() -> impl Strategy<Value = String> {
    let leaf = prop_oneof![Just("Z".to_string()), Just("Q".to_string())];
    leaf.prop_recursive(3, 12, 3, |inner| {
        (prop::bool::ANY, prop::collection::vec(inner, 1..=3))
            .prop_map(|(lex, cs)| format!("{}({})", if lex { "lex" } else { "direct" }, cs.join(", ")))
    })
}

fn lit_src() -> impl Strategy<Value = String> {
    let leaf = (-9i64..=9, 1i64..=9).prop_map(|(n, d)| if d == 1 { n.to_string() } else { format!("{n}/{d}") });
    leaf.prop_recursive(2, 8, 3, |inner| {
        (prop::bool::ANY, prop::collection::vec(inner, 1..=3)).prop_map(|(tuple, xs)| {
            if tuple {
                format!("({})", xs.join(", "))
            } else {
                format!("[{}]", xs.join(", "))
            }
        })
    })
}

fn algebra_src() -> impl Strategy<Value = String> {
    let leaf = prop_oneof![
        (2u64..9).prop_map(|n| format!("chain({n})")),
        Just("unitQ".to_string()),
        Just("chang".to_string()),
        (2u64..6).prop_map(|n| format!("komori({n})")),
        Just("gamma(lex(Z, Q), (1, 0))".to_string()),
    ];
    leaf.prop_recursive(2, 8, 3, |inner| {
        prop_oneof![
            prop::collection::vec(inner.clone(), 1..=3).prop_map(|xs| format!("product({})", xs.join(", "))),
            (inner.clone(), 1usize..4).prop_map(|(a, k)| format!("quasiconst({a}, {k})")),
            (inner, prop_oneof![Just("zero"), Just("radical"), Just("whole"), Just("kernel(0, 1)")])
                .prop_map(|(a, i)| format!("quotient({a}, {i})")),
        ]
    })
}

fn term_src() -> impl Strategy<Value = String> {
    let leaf = prop_oneof![Just("x".to_string()), Just("y".to_string()), Just("0".to_string()), Just("1".to_string())];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|t| format!("~{t}")),
            (inner.clone(), inner, prop_oneof![Just("+"), Just("*"), Just("\\/"), Just("/\\")])
                .prop_map(|(a, b, op)| format!("({a} {op} {b})")),
        ]
    })
}

fn decl_src() -> impl Strategy<Value = String> {
    prop_oneof![
        group_src().prop_map(|g| format!("group {{}} = {g}")),
        algebra_src().prop_map(|a| format!("algebra {{}} = {a}")),
        term_src().prop_map(|t| format!("term {{}} = {t}")),
        lit_src().prop_map(|l| format!("element {{}} = {l}")),
    ]
}

proptest! {
    #[test]
    fn printed_spec_files_parse_to_the_same_ast(decls in prop::collection::vec(decl_src(), 1..6)) {
        let text: String = decls.iter().enumerate().map(|(i, d)| d.replace("{}", &format!("n{i}")) + "\n").collect();
        let parsed = parse_spec(&text).unwrap();
        let printed = parsed.to_string();
        let again = parse_spec(&printed).unwrap();
        prop_assert!(same_ast(&parsed, &again), "{} vs {}", text, printed);
        prop_assert_eq!(again.to_string(), printed);
    }
}
