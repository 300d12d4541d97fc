//! Tokens, parser and printer of the specification language.
//!
//! ```text
//! group G = lex(Z, Q)
//! algebra P = gamma(G, (1, 0/1))
//! algebra B = product(chain(2), chain(3))
//! term phi = (x * x + x * x) + (x * x + x * x)
//! element e = (0, 1/2)
//! ```
//!
//! Declarations end at a newline or `;`, and `#` starts a comment.

use std::fmt;

use crate::cli::CliError;
use crate::lgroup::group::write_seq;
use crate::mvcore::Term;
use crate::rat::Rat;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Num(String),
    Sym(&'static str),
    Newline,
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) | Tok::Num(s) => write!(f, "`{s}`"),
            Tok::Sym(s) => write!(f, "`{s}`"),
            Tok::Newline => f.write_str("end of line"),
            Tok::End => f.write_str("end of input"),
        }
    }
}

const SYMBOLS: [&str; 16] = ["\\/", "/\\", "(", ")", "[", "]", "{", "}", ",", "=", "+", "*", "~", "/", "-", ";"];

fn lex(text: &str) -> Result<Vec<(Tok, Pos)>, CliError> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let chars: Vec<char> = line.chars().collect();
        let mut j = 0;
        while j < chars.len() {
            let c = chars[j];
            let pos = Pos { line: i + 1, col: j + 1 };
            if c == '#' {
                break;
            } else if c.is_whitespace() {
                j += 1;
            } else if c.is_ascii_alphabetic() || c == '_' {
                let start = j;
                while j < chars.len() && (chars[j].is_ascii_alphanumeric() || chars[j] == '_' || chars[j] == '\'') {
                    j += 1;
                }
                out.push((Tok::Ident(chars[start..j].iter().collect()), pos));
            } else if c.is_ascii_digit() {
                let start = j;
                while j < chars.len() && chars[j].is_ascii_digit() {
                    j += 1;
                }
                out.push((Tok::Num(chars[start..j].iter().collect()), pos));
            } else {
                let rest: String = chars[j..].iter().take(2).collect();
                let sym =
                    SYMBOLS.iter().find(|s| rest.starts_with(*s)).ok_or_else(|| CliError::syntax(pos, "a token", format!("`{c}`")))?;
                out.push((if *sym == ";" { Tok::Newline } else { Tok::Sym(sym) }, pos));
                j += sym.chars().count();
            }
        }
        out.push((Tok::Newline, Pos { line: i + 1, col: chars.len() + 1 }));
    }
    let end = Pos { line: text.lines().count().max(1), col: text.lines().last().map_or(1, |l| l.chars().count() + 1) };
    out.push((Tok::End, end));
    Ok(out)
}

/// Untyped argument tree: calls, bare names, numbers and bracketed lists.
#[derive(Clone, Debug, PartialEq, Eq)]
enum Node {
    Name(String, Pos),
    Call(String, Vec<Node>, Pos),
    Num(Rat, Pos),
    Tuple(Vec<Node>, Pos),
    List(Vec<Node>, Pos),
    Set(Vec<Node>, Pos),
}

impl Node {
    fn pos(&self) -> Pos {
        match self {
            Node::Name(_, p) | Node::Call(_, _, p) | Node::Num(_, p) | Node::Tuple(_, p) | Node::List(_, p) | Node::Set(_, p) => *p,
        }
    }

    fn describe(&self) -> String {
        match self {
            Node::Name(n, _) => format!("`{n}`"),
            Node::Call(n, _, _) => format!("`{n}(…)`"),
            Node::Num(q, _) => format!("`{q}`"),
            Node::Tuple(..) => "a tuple".into(),
            Node::List(..) => "a function literal".into(),
            Node::Set(..) => "a set literal".into(),
        }
    }
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
}

impl Parser {
    fn new(text: &str) -> Result<Parser, CliError> {
        Ok(Parser { toks: lex(text)?, at: 0 })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> (Tok, Pos) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn eat(&mut self, sym: &str) -> bool {
        if matches!(self.peek(), Tok::Sym(s) if *s == sym) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, sym: &'static str) -> Result<Pos, CliError> {
        if *self.peek() == Tok::Sym(sym) {
            Ok(self.bump().1)
        } else {
            Err(self.unexpected(format!("`{sym}`")))
        }
    }

    fn unexpected(&self, expected: impl Into<String>) -> CliError {
        CliError::syntax(self.pos(), expected, self.peek().to_string())
    }

    fn ident(&mut self) -> Result<(String, Pos), CliError> {
        match self.bump() {
            (Tok::Ident(s), p) => Ok((s, p)),
            (t, p) => Err(CliError::syntax(p, "a name", t.to_string())),
        }
    }

    fn skip_newlines(&mut self) {
        while *self.peek() == Tok::Newline {
            self.bump();
        }
    }

    fn end_of_item(&mut self) -> Result<(), CliError> {
        match self.peek() {
            Tok::Newline | Tok::End => Ok(()),
            _ => Err(self.unexpected("end of line")),
        }
    }

    fn integer(&mut self) -> Result<num_bigint::BigInt, CliError> {
        match self.bump() {
            (Tok::Num(s), _) => Ok(s.parse().expect("digits")),
            (t, p) => Err(CliError::syntax(p, "a number", t.to_string())),
        }
    }

    fn number(&mut self) -> Result<Rat, CliError> {
        let negative = self.eat("-");
        let n = self.integer()?;
        let n = if negative { -n } else { n };
        if self.eat("/") {
            let pos = self.pos();
            let d = self.integer()?;
            if d == 0.into() {
                return Err(CliError::syntax(pos, "a nonzero denominator", "`0`"));
            }
            Ok(Rat::new(n, d))
        } else {
            Ok(Rat::from_int(n))
        }
    }

    fn nodes(&mut self, close: &'static str) -> Result<Vec<Node>, CliError> {
        let mut out = Vec::new();
        if self.eat(close) {
            return Ok(out);
        }
        loop {
            out.push(self.node()?);
            if self.eat(close) {
                return Ok(out);
            }
            self.expect(",")?;
        }
    }

    fn node(&mut self) -> Result<Node, CliError> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::Ident(name) => {
                self.bump();
                if self.eat("(") {
                    Ok(Node::Call(name, self.nodes(")")?, pos))
                } else {
                    Ok(Node::Name(name, pos))
                }
            }
            Tok::Num(_) | Tok::Sym("-") => Ok(Node::Num(self.number()?, pos)),
            Tok::Sym("(") => {
                self.bump();
                Ok(Node::Tuple(self.nodes(")")?, pos))
            }
            Tok::Sym("[") => {
                self.bump();
                Ok(Node::List(self.nodes("]")?, pos))
            }
            Tok::Sym("{") => {
                self.bump();
                Ok(Node::Set(self.nodes("}")?, pos))
            }
            _ => Err(self.unexpected("an expression")),
        }
    }

    /// `sum := product (('+' | '\/') product)*`
    fn term_sum(&mut self) -> Result<Term, CliError> {
        let mut t = self.term_product()?;
        loop {
            if self.eat("+") {
                t = Term::plus(t, self.term_product()?);
            } else if self.eat("\\/") {
                t = Term::join(t, self.term_product()?);
            } else {
                return Ok(t);
            }
        }
    }

    /// `product := unary (('*' | '/\') unary)*`
    fn term_product(&mut self) -> Result<Term, CliError> {
        let mut t = self.term_unary()?;
        loop {
            if self.eat("*") {
                t = Term::times(t, self.term_unary()?);
            } else if self.eat("/\\") {
                t = Term::meet(t, self.term_unary()?);
            } else {
                return Ok(t);
            }
        }
    }

    fn term_unary(&mut self) -> Result<Term, CliError> {
        if self.eat("~") {
            return Ok(Term::neg(self.term_unary()?));
        }
        if self.eat("(") {
            let t = self.term_sum()?;
            self.expect(")")?;
            return Ok(t);
        }
        match self.bump() {
            (Tok::Ident(v), _) => Ok(Term::Var(v)),
            (Tok::Num(n), _) if n == "0" => Ok(Term::Zero),
            (Tok::Num(n), _) if n == "1" => Ok(Term::one()),
            (t, p) => Err(CliError::syntax(p, "a variable, `0`, `1`, `~` or `(`", t.to_string())),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupExpr {
    Z,
    Q,
    Lex(Vec<GroupExpr>),
    Direct(Vec<GroupExpr>),
    Name(String, Pos),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Lit {
    Num(Rat),
    Tuple(Vec<Lit>),
    List(Vec<Lit>),
    Name(String, Pos),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IdealExpr {
    Zero,
    Radical,
    Whole,
    Kernel(Vec<usize>),
    Tail(usize),
    Site(usize, Box<IdealExpr>),
    Explicit(Vec<Lit>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AlgExpr {
    Chain(u64),
    Product(Vec<AlgExpr>),
    UnitQ,
    Gamma(GroupExpr, Lit),
    Komori(u64),
    Chang,
    QuasiConst(Box<AlgExpr>, usize),
    Functions(Box<AlgExpr>, usize),
    Quotient(Box<AlgExpr>, IdealExpr),
    Name(String, Pos),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Decl {
    Group(String, GroupExpr),
    Algebra(String, AlgExpr),
    Term(String, Term),
    Element(String, Lit),
}

impl Decl {
    pub fn name(&self) -> &str {
        match self {
            Decl::Group(n, _) | Decl::Algebra(n, _) | Decl::Term(n, _) | Decl::Element(n, _) => n,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct SpecFile {
    pub decls: Vec<(Decl, Pos)>,
}

fn arity(name: &str, args: &[Node], n: usize, pos: Pos) -> Result<(), CliError> {
    if args.len() == n {
        Ok(())
    } else {
        Err(CliError::Arity { name: name.to_string(), expected: n, found: args.len(), line: pos.line, col: pos.col })
    }
}

fn wrong(node: &Node, expected: &str) -> CliError {
    CliError::syntax(node.pos(), expected, node.describe())
}

fn small(node: &Node) -> Result<u64, CliError> {
    match node {
        Node::Num(q, _) => q.to_integer().and_then(|n| u64::try_from(n).ok()).ok_or_else(|| wrong(node, "a natural number")),
        _ => Err(wrong(node, "a natural number")),
    }
}

fn group_expr(node: &Node) -> Result<GroupExpr, CliError> {
    match node {
        Node::Name(n, _) if n == "Z" => Ok(GroupExpr::Z),
        Node::Name(n, _) if n == "Q" => Ok(GroupExpr::Q),
        Node::Name(n, _) if n == "trivial" => Ok(GroupExpr::Direct(Vec::new())),
        Node::Name(n, p) => Ok(GroupExpr::Name(n.clone(), *p)),
        Node::Call(n, args, _) if n == "lex" => Ok(GroupExpr::Lex(args.iter().map(group_expr).collect::<Result<_, _>>()?)),
        Node::Call(n, args, _) if n == "direct" => Ok(GroupExpr::Direct(args.iter().map(group_expr).collect::<Result<_, _>>()?)),
        _ => Err(wrong(node, "a group: Z, Q, trivial, lex(…), direct(…) or a name")),
    }
}

fn lit(node: &Node) -> Result<Lit, CliError> {
    match node {
        Node::Num(q, _) => Ok(Lit::Num(q.clone())),
        Node::Tuple(xs, _) => Ok(Lit::Tuple(xs.iter().map(lit).collect::<Result<_, _>>()?)),
        Node::List(xs, _) => Ok(Lit::List(xs.iter().map(lit).collect::<Result<_, _>>()?)),
        Node::Name(n, p) => Ok(Lit::Name(n.clone(), *p)),
        _ => Err(wrong(node, "an element literal")),
    }
}

fn ideal_expr(node: &Node) -> Result<IdealExpr, CliError> {
    match node {
        Node::Name(n, _) if n == "zero" => Ok(IdealExpr::Zero),
        Node::Name(n, _) if n == "radical" => Ok(IdealExpr::Radical),
        Node::Name(n, _) if n == "whole" => Ok(IdealExpr::Whole),
        Node::Call(n, args, _) if n == "kernel" => {
            Ok(IdealExpr::Kernel(args.iter().map(|a| small(a).map(|k| k as usize)).collect::<Result<_, _>>()?))
        }
        Node::Call(n, args, p) if n == "tail" => {
            arity(n, args, 1, *p)?;
            Ok(IdealExpr::Tail(small(&args[0])? as usize))
        }
        Node::Call(n, args, p) if n == "site" => {
            arity(n, args, 2, *p)?;
            Ok(IdealExpr::Site(small(&args[0])? as usize, Box::new(ideal_expr(&args[1])?)))
        }
        Node::Set(xs, _) => Ok(IdealExpr::Explicit(xs.iter().map(lit).collect::<Result<_, _>>()?)),
        _ => Err(wrong(node, "an ideal: zero, radical, whole, kernel(…), tail(k), site(i, …) or {…}")),
    }
}

fn alg_expr(node: &Node) -> Result<AlgExpr, CliError> {
    match node {
        Node::Name(n, _) if n == "unitQ" => Ok(AlgExpr::UnitQ),
        Node::Name(n, _) if n == "chang" => Ok(AlgExpr::Chang),
        Node::Name(n, p) => Ok(AlgExpr::Name(n.clone(), *p)),
        Node::Call(n, args, p) => {
            let p = *p;
            match n.as_str() {
                "chain" | "komori" => {
                    arity(n, args, 1, p)?;
                    let k = small(&args[0])?;
                    Ok(if n == "chain" { AlgExpr::Chain(k) } else { AlgExpr::Komori(k) })
                }
                "product" => Ok(AlgExpr::Product(args.iter().map(alg_expr).collect::<Result<_, _>>()?)),
                "gamma" => {
                    arity(n, args, 2, p)?;
                    Ok(AlgExpr::Gamma(group_expr(&args[0])?, lit(&args[1])?))
                }
                "quasiconst" | "functions" => {
                    arity(n, args, 2, p)?;
                    let base = Box::new(alg_expr(&args[0])?);
                    let k = small(&args[1])? as usize;
                    Ok(if n == "quasiconst" { AlgExpr::QuasiConst(base, k) } else { AlgExpr::Functions(base, k) })
                }
                "quotient" => {
                    arity(n, args, 2, p)?;
                    Ok(AlgExpr::Quotient(Box::new(alg_expr(&args[0])?), ideal_expr(&args[1])?))
                }
                _ => Err(wrong(node, "an algebra constructor")),
            }
        }
        _ => Err(wrong(node, "an algebra")),
    }
}

fn parse_whole<T>(text: &str, f: impl FnOnce(&mut Parser) -> Result<T, CliError>) -> Result<T, CliError> {
    let mut p = Parser::new(text)?;
    p.skip_newlines();
    let out = f(&mut p)?;
    p.skip_newlines();
    match p.peek() {
        Tok::End => Ok(out),
        _ => Err(p.unexpected("end of input")),
    }
}

pub fn parse_spec(text: &str) -> Result<SpecFile, CliError> {
    let mut p = Parser::new(text)?;
    let mut decls = Vec::new();
    loop {
        p.skip_newlines();
        if *p.peek() == Tok::End {
            return Ok(SpecFile { decls });
        }
        let (kw, pos) = p.ident()?;
        let (name, _) = p.ident()?;
        p.expect("=")?;
        let decl = match kw.as_str() {
            "group" => Decl::Group(name, group_expr(&p.node()?)?),
            "algebra" => Decl::Algebra(name, alg_expr(&p.node()?)?),
            "term" => Decl::Term(name, p.term_sum()?),
            "element" => Decl::Element(name, lit(&p.node()?)?),
            _ => return Err(CliError::syntax(pos, "`group`, `algebra`, `term` or `element`", format!("`{kw}`"))),
        };
        p.end_of_item()?;
        decls.push((decl, pos));
    }
}

pub fn parse_group(text: &str) -> Result<GroupExpr, CliError> {
    parse_whole(text, |p| group_expr(&p.node()?))
}

pub fn parse_algebra(text: &str) -> Result<AlgExpr, CliError> {
    parse_whole(text, |p| alg_expr(&p.node()?))
}

pub fn parse_lit(text: &str) -> Result<Lit, CliError> {
    parse_whole(text, |p| lit(&p.node()?))
}

pub fn parse_ideal(text: &str) -> Result<IdealExpr, CliError> {
    parse_whole(text, |p| ideal_expr(&p.node()?))
}

pub fn parse_term(text: &str) -> Result<Term, CliError> {
    parse_whole(text, Parser::term_sum)
}

impl fmt::Display for GroupExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupExpr::Z => f.write_str("Z"),
            GroupExpr::Q => f.write_str("Q"),
            GroupExpr::Direct(cs) if cs.is_empty() => f.write_str("trivial"),
            GroupExpr::Lex(cs) => write_seq(f, "lex(", ")", cs),
            GroupExpr::Direct(cs) => write_seq(f, "direct(", ")", cs),
            GroupExpr::Name(n, _) => f.write_str(n),
        }
    }
}

impl fmt::Display for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Lit::Num(q) => write!(f, "{q}"),
            Lit::Tuple(xs) => write_seq(f, "(", ")", xs),
            Lit::List(xs) => write_seq(f, "[", "]", xs),
            Lit::Name(n, _) => f.write_str(n),
        }
    }
}

impl fmt::Display for IdealExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IdealExpr::Zero => f.write_str("zero"),
            IdealExpr::Radical => f.write_str("radical"),
            IdealExpr::Whole => f.write_str("whole"),
            IdealExpr::Kernel(ks) => write_seq(f, "kernel(", ")", ks),
            IdealExpr::Tail(k) => write!(f, "tail({k})"),
            IdealExpr::Site(i, inner) => write!(f, "site({i}, {inner})"),
            IdealExpr::Explicit(xs) => write_seq(f, "{", "}", xs),
        }
    }
}

impl fmt::Display for AlgExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlgExpr::Chain(n) => write!(f, "chain({n})"),
            AlgExpr::Product(fs) => write_seq(f, "product(", ")", fs),
            AlgExpr::UnitQ => f.write_str("unitQ"),
            AlgExpr::Gamma(g, u) => write!(f, "gamma({g}, {u})"),
            AlgExpr::Komori(n) => write!(f, "komori({n})"),
            AlgExpr::Chang => f.write_str("chang"),
            AlgExpr::QuasiConst(b, k) => write!(f, "quasiconst({b}, {k})"),
            AlgExpr::Functions(b, k) => write!(f, "functions({b}, {k})"),
            AlgExpr::Quotient(b, i) => write!(f, "quotient({b}, {i})"),
            AlgExpr::Name(n, _) => f.write_str(n),
        }
    }
}

impl fmt::Display for Decl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Decl::Group(n, g) => write!(f, "group {n} = {g}"),
            Decl::Algebra(n, a) => write!(f, "algebra {n} = {a}"),
            Decl::Term(n, t) => write!(f, "term {n} = {t}"),
            Decl::Element(n, x) => write!(f, "element {n} = {x}"),
        }
    }
}

impl fmt::Display for SpecFile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (d, _) in &self.decls {
            writeln!(f, "{d}")?;
        }
        Ok(())
    }
}

/// AST equality up to source positions.
pub fn same_ast(a: &SpecFile, b: &SpecFile) -> bool {
    a.decls.len() == b.decls.len() && a.decls.iter().zip(&b.decls).all(|((x, _), (y, _))| strip(x) == strip(y))
}

fn strip(d: &Decl) -> Decl {
    fn g(e: &GroupExpr) -> GroupExpr {
        match e {
            GroupExpr::Lex(cs) => GroupExpr::Lex(cs.iter().map(g).collect()),
            GroupExpr::Direct(cs) => GroupExpr::Direct(cs.iter().map(g).collect()),
            GroupExpr::Name(n, _) => GroupExpr::Name(n.clone(), Pos { line: 0, col: 0 }),
            other => other.clone(),
        }
    }
    fn l(e: &Lit) -> Lit {
        match e {
            Lit::Tuple(xs) => Lit::Tuple(xs.iter().map(l).collect()),
            Lit::List(xs) => Lit::List(xs.iter().map(l).collect()),
            Lit::Name(n, _) => Lit::Name(n.clone(), Pos { line: 0, col: 0 }),
            other => other.clone(),
        }
    }
    fn i(e: &IdealExpr) -> IdealExpr {
        match e {
            IdealExpr::Site(k, inner) => IdealExpr::Site(*k, Box::new(i(inner))),
            IdealExpr::Explicit(xs) => IdealExpr::Explicit(xs.iter().map(l).collect()),
            other => other.clone(),
        }
    }
    fn a(e: &AlgExpr) -> AlgExpr {
        match e {
            AlgExpr::Product(fs) => AlgExpr::Product(fs.iter().map(a).collect()),
            AlgExpr::Gamma(gr, u) => AlgExpr::Gamma(g(gr), l(u)),
            AlgExpr::QuasiConst(b, k) => AlgExpr::QuasiConst(Box::new(a(b)), *k),
            AlgExpr::Functions(b, k) => AlgExpr::Functions(Box::new(a(b)), *k),
            AlgExpr::Quotient(b, id) => AlgExpr::Quotient(Box::new(a(b)), i(id)),
            AlgExpr::Name(n, _) => AlgExpr::Name(n.clone(), Pos { line: 0, col: 0 }),
            other => other.clone(),
        }
    }
    match d {
        Decl::Group(n, e) => Decl::Group(n.clone(), g(e)),
        Decl::Algebra(n, e) => Decl::Algebra(n.clone(), a(e)),
        Decl::Term(n, t) => Decl::Term(n.clone(), t.clone()),
        Decl::Element(n, x) => Decl::Element(n.clone(), l(x)),
    }
}
