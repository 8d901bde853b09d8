//! Text formats for terms, specifications and process graphs.
//!
//! Specification files are line oriented:
//!
//! ```text
//! tss ex1
//! actions: a, b, c, tau;
//! sig: 0/0, f/1, id/1, prefix_a/1;
//! options: unfold, guess 2;
//! forall al in {a, b, c}: x -al-> y |- f(x) -al-> f(y)
//! |- a.x -a-> x
//! x -/*-> , y -b-> z |- seq(x, y) -b-> z
//! ```
//!
//! Graph files hold one or more blocks
//! `graph g { states: s0, s1; root: s0; edges: s0 -tau-> s1; }`.
//! Everything after `#` on a line is a comment.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::graph::ProcessGraph;
use crate::term::{RecSpec, Signature, Term, ONE, PREFIX, ZERO};
use crate::tss::{ActionSchema, Literal, TransitionRule, Tss, ANY_ACTION};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    fn new(line: usize, column: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            column,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Number(String),
    Quoted(String),
    Punct(&'static str),
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) | Tok::Number(s) => write!(f, "`{s}`"),
            Tok::Quoted(s) => write!(f, "{s:?}"),
            Tok::Punct(p) => write!(f, "`{p}`"),
        }
    }
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

const PUNCT: [&str; 14] = ["|-", "->", "(", ")", ",", ".", ";", "{", "}", "=", ":", "/", "-", "*"];

fn lex(text: &str, first_line: usize) -> Result<Vec<Spanned>, ParseError> {
    let mut out = Vec::new();
    for (offset, raw) in text.lines().enumerate() {
        let line = first_line + offset;
        let chars: Vec<char> = raw.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let column = i + 1;
            if c == '#' {
                break;
            }
            if c.is_whitespace() {
                i += 1;
                continue;
            }
            if c.is_ascii_alphabetic() {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                out.push(Spanned {
                    tok: Tok::Ident(chars[start..i].iter().collect()),
                    line,
                    column,
                });
                continue;
            }
            if c.is_ascii_digit() {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                out.push(Spanned {
                    tok: Tok::Number(chars[start..i].iter().collect()),
                    line,
                    column,
                });
                continue;
            }
            if c == '"' {
                let mut s = String::new();
                i += 1;
                loop {
                    match chars.get(i) {
                        None => return Err(ParseError::new(line, column, "unterminated string")),
                        Some('"') => {
                            i += 1;
                            break;
                        }
                        Some('\\') => {
                            match chars.get(i + 1) {
                                Some(e @ ('"' | '\\')) => s.push(*e),
                                Some('n') => s.push('\n'),
                                _ => return Err(ParseError::new(line, i + 1, "bad escape in string")),
                            }
                            i += 2;
                        }
                        Some(ch) => {
                            s.push(*ch);
                            i += 1;
                        }
                    }
                }
                out.push(Spanned {
                    tok: Tok::Quoted(s),
                    line,
                    column,
                });
                continue;
            }
            let rest: String = chars[i..chars.len().min(i + 2)].iter().collect();
            match PUNCT.iter().find(|p| rest.starts_with(**p)) {
                Some(p) => {
                    out.push(Spanned {
                        tok: Tok::Punct(p),
                        line,
                        column,
                    });
                    i += p.len();
                }
                None => return Err(ParseError::new(line, column, format!("unexpected character `{c}`"))),
            }
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Spanned>,
    pos: usize,
    sig: &'a Signature,
    end_line: usize,
}

impl<'a> Parser<'a> {
    fn new(toks: Vec<Spanned>, sig: &'a Signature, end_line: usize) -> Self {
        Parser {
            toks,
            pos: 0,
            sig,
            end_line,
        }
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|s| &s.tok)
    }

    fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    fn err(&self, message: impl Into<String>) -> ParseError {
        match self.toks.get(self.pos) {
            Some(s) => ParseError::new(s.line, s.column, message),
            None => {
                let (line, column) = self
                    .toks
                    .last()
                    .map(|s| (s.line, s.column + 1))
                    .unwrap_or((self.end_line, 1));
                ParseError::new(line, column, message)
            }
        }
    }

    fn found(&self) -> String {
        match self.peek() {
            Some(t) => format!("found {t}"),
            None => "found end of input".to_string(),
        }
    }

    fn eat(&mut self, p: &str) -> bool {
        if matches!(self.peek(), Some(Tok::Punct(q)) if *q == p) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, p: &str) -> Result<(), ParseError> {
        if self.eat(p) {
            Ok(())
        } else {
            Err(self.err(format!("expected `{p}`, {}", self.found())))
        }
    }

    fn eat_keyword(&mut self, kw: &str) -> bool {
        if matches!(self.peek(), Some(Tok::Ident(s)) if s == kw) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn ident(&mut self, what: &str) -> Result<String, ParseError> {
        match self.peek().cloned() {
            Some(Tok::Ident(s)) => {
                self.pos += 1;
                Ok(s)
            }
            _ => Err(self.err(format!("expected {what}, {}", self.found()))),
        }
    }

    /// Identifier, number or quoted string.
    fn name(&mut self, what: &str) -> Result<String, ParseError> {
        match self.peek().cloned() {
            Some(Tok::Ident(s)) | Some(Tok::Number(s)) | Some(Tok::Quoted(s)) => {
                self.pos += 1;
                Ok(s)
            }
            _ => Err(self.err(format!("expected {what}, {}", self.found()))),
        }
    }

    fn number(&mut self) -> Result<usize, ParseError> {
        match self.peek().cloned() {
            Some(Tok::Number(s)) => {
                self.pos += 1;
                s.parse().map_err(|_| self.err("number out of range"))
            }
            _ => Err(self.err(format!("expected a number, {}", self.found()))),
        }
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        match self.peek().cloned() {
            Some(Tok::Number(n)) => {
                let sym = match n.as_str() {
                    "0" => ZERO,
                    "1" => ONE,
                    _ => return Err(self.err(format!("only `0` and `1` are numeric constants, found `{n}`"))),
                };
                self.pos += 1;
                Ok(Term::constant(sym))
            }
            Some(Tok::Punct("(")) => {
                self.pos += 1;
                let t = self.term()?;
                self.expect(")")?;
                Ok(t)
            }
            Some(Tok::Ident(kw)) if kw == "rec" => {
                self.pos += 1;
                let head = self.ident("a recursion variable")?;
                self.expect("{")?;
                let mut spec = RecSpec::new();
                loop {
                    if self.eat("}") {
                        break;
                    }
                    let var = self.ident("a recursion variable")?;
                    if self.sig.contains(&var) {
                        return Err(self.err(format!("`{var}` is a function symbol, not a variable")));
                    }
                    if spec.binds(&var) {
                        return Err(self.err(format!("`{var}` is defined twice")));
                    }
                    self.expect("=")?;
                    let body = self.term()?;
                    spec.insert(var, body);
                    if !self.eat(";") {
                        self.expect("}")?;
                        break;
                    }
                }
                if spec.is_empty() {
                    return Err(self.err("empty recursive specification"));
                }
                if !spec.binds(&head) {
                    return Err(self.err(format!("`{head}` is not defined by the specification")));
                }
                Ok(Term::rec(&head, spec))
            }
            Some(Tok::Ident(id)) => {
                self.pos += 1;
                if self.eat(".") {
                    let body = self.term()?;
                    return Ok(Term::prefix(&id, body));
                }
                if self.eat("(") {
                    if !self.sig.contains(&id) {
                        return Err(self.err(format!("undeclared function symbol `{id}`")));
                    }
                    let mut args = Vec::new();
                    if !self.eat(")") {
                        loop {
                            args.push(self.term()?);
                            if self.eat(")") {
                                break;
                            }
                            self.expect(",")?;
                        }
                    }
                    return Ok(Term::app(&id, args));
                }
                if self.sig.contains(&id) {
                    Ok(Term::constant(&id))
                } else {
                    Ok(Term::var(&id))
                }
            }
            _ => Err(self.err(format!("expected a term, {}", self.found()))),
        }
    }

    /// `t -a-> u`, `t -/a->` or `t -/*->`.
    fn literal(&mut self) -> Result<Literal, ParseError> {
        let source = self.term()?;
        self.expect("-")?;
        let negative = self.eat("/");
        let label = if negative && self.eat("*") {
            ANY_ACTION.to_string()
        } else {
            self.ident("an action label")?
        };
        self.expect("->")?;
        if negative {
            Ok(Literal::negative(source, &label))
        } else {
            let target = self.term()?;
            Ok(Literal::positive(source, &label, target))
        }
    }

    fn finish(&self) -> Result<(), ParseError> {
        if self.at_end() {
            Ok(())
        } else {
            Err(self.err(format!("unexpected trailing input, {}", self.found())))
        }
    }
}

fn symbol_name(decl: &str) -> &str {
    match decl {
        "0" => ZERO,
        "1" => ONE,
        other => other,
    }
}

fn symbol_display(sym: &str) -> &str {
    match sym {
        ZERO => "0",
        ONE => "1",
        other => other,
    }
}

/// Parses a term; identifiers declared in `sig` are function symbols and
/// all others are variables.
pub fn parse_term(text: &str, sig: &Signature) -> Result<Term, ParseError> {
    let toks = lex(text, 1)?;
    let mut p = Parser::new(toks, sig, 1);
    let t = p.term()?;
    p.finish()?;
    Ok(t)
}

/// Parses a term and checks it against the signature.
pub fn parse_term_checked(text: &str, sig: &Signature) -> Result<Term, crate::error::Error> {
    let t = parse_term(text, sig)?;
    sig.check(&t)?;
    Ok(t)
}

/// Parses a specification file.
pub fn parse_tss(text: &str) -> Result<Tss, crate::error::Error> {
    let mut name: Option<String> = None;
    let mut actions: BTreeSet<String> = BTreeSet::new();
    let mut sig = Signature::new();
    let mut unfold = false;
    let mut guess = None;
    let mut rule_lines: Vec<(usize, Vec<Spanned>)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let toks = lex(raw, line)?;
        if toks.is_empty() {
            continue;
        }
        let directive = match (&toks[0].tok, toks.get(1).map(|t| &t.tok)) {
            (Tok::Ident(kw), Some(Tok::Punct(":"))) if ["actions", "sig", "options"].contains(&kw.as_str()) => {
                Some(kw.clone())
            }
            (Tok::Ident(kw), _) if kw == "tss" && rule_lines.is_empty() && name.is_none() => Some(kw.clone()),
            _ => None,
        };
        let empty = Signature::new();
        let mut p = Parser::new(toks, &empty, line);
        match directive.as_deref() {
            Some("tss") => {
                p.pos = 1;
                name = Some(p.name("a specification name")?);
                p.finish()?;
            }
            Some(kw) => {
                p.pos = 2;
                if !p.eat(";") {
                    loop {
                        match kw {
                            "actions" => {
                                let a = p.ident("an action")?;
                                if !actions.insert(a.clone()) {
                                    return Err(p.err(format!("action `{a}` declared twice")).into());
                                }
                            }
                            "sig" => {
                                let sym = p.name("a function symbol")?;
                                p.expect("/")?;
                                let arity = p.number()?;
                                let at = p.err("");
                                sig.declare(symbol_name(&sym), arity)
                                    .map_err(|e| ParseError::new(at.line, at.column, e.to_string()))?;
                            }
                            _ => {
                                let opt = p.ident("an option")?;
                                match opt.as_str() {
                                    "unfold" => unfold = true,
                                    "guess" => guess = Some(p.number()?),
                                    other => return Err(p.err(format!("unknown option `{other}`")).into()),
                                }
                            }
                        }
                        if p.eat(";") {
                            break;
                        }
                        p.expect(",")?;
                    }
                }
                p.finish()?;
            }
            None => rule_lines.push((line, p.toks)),
        }
    }
    let name = name.ok_or_else(|| ParseError::new(1, 1, "missing `tss <name>` header"))?;
    let mut tss = Tss::new(&name, sig, &[]);
    tss.actions = actions;
    tss.recursion_unfolding = unfold;
    tss.guess_depth = guess;
    for (line, toks) in rule_lines {
        let mut p = Parser::new(toks, &tss.signature, line);
        let rule = parse_rule(&mut p)?;
        tss.rules.push(rule);
    }
    tss.validate()?;
    Ok(tss)
}

fn parse_rule(p: &mut Parser<'_>) -> Result<TransitionRule, ParseError> {
    let mut schema = None;
    if p.eat_keyword("forall") {
        let var = p.ident("a schema variable")?;
        if !p.eat_keyword("in") {
            return Err(p.err(format!("expected `in`, {}", p.found())));
        }
        p.expect("{")?;
        let mut acts = BTreeSet::new();
        loop {
            acts.insert(p.ident("an action")?);
            if p.eat("}") {
                break;
            }
            p.expect(",")?;
        }
        p.expect(":")?;
        schema = Some(ActionSchema { var, actions: acts });
    }
    let mut premises = Vec::new();
    if !p.eat("|-") {
        loop {
            premises.push(p.literal()?);
            if p.eat("|-") {
                break;
            }
            if !p.eat(",") {
                return Err(p.err(format!("expected `,` or `|-`, {}", p.found())));
            }
        }
    }
    if p.at_end() {
        return Err(p.err("rule has no conclusion"));
    }
    let conclusion = p.literal()?;
    if !conclusion.is_positive() {
        return Err(p.err("conclusion must be a positive literal"));
    }
    p.finish()?;
    Ok(TransitionRule {
        schema,
        premises,
        conclusion,
    })
}

/// Canonical text of a specification: declarations and rules sorted.
pub fn serialize_tss(tss: &Tss) -> String {
    let mut out = format!("tss {}\n", tss.name);
    let acts: Vec<&str> = tss.actions.iter().map(String::as_str).collect();
    out.push_str(&format!("actions: {};\n", acts.join(", ")));
    let mut decls: Vec<String> = tss
        .signature
        .iter()
        .map(|(s, n)| format!("{}/{}", symbol_display(s), n))
        .collect();
    decls.sort();
    out.push_str(&format!("sig: {};\n", decls.join(", ")));
    let mut opts = Vec::new();
    if tss.recursion_unfolding {
        opts.push("unfold".to_string());
    }
    if let Some(n) = tss.guess_depth {
        opts.push(format!("guess {n}"));
    }
    if !opts.is_empty() {
        out.push_str(&format!("options: {};\n", opts.join(", ")));
    }
    let mut rules: Vec<String> = tss.rules.iter().map(TransitionRule::to_string).collect();
    rules.sort();
    rules.dedup();
    for r in rules {
        out.push_str(&r);
        out.push('\n');
    }
    out
}

/// The specification with its rules in canonical order, as produced by
/// parsing its serialization.
pub fn canonical_tss(tss: &Tss) -> Tss {
    let mut out = tss.clone();
    out.rules.sort_by_key(|r| r.to_string());
    out.rules.dedup();
    out
}

/// Parses every `graph` block of a file, in order.
pub fn parse_graphs(text: &str) -> Result<Vec<(String, ProcessGraph)>, crate::error::Error> {
    let toks = lex(text, 1)?;
    let empty = Signature::new();
    let end_line = text.lines().count().max(1);
    let mut p = Parser::new(toks, &empty, end_line);
    let mut out = Vec::new();
    while !p.at_end() {
        if !p.eat_keyword("graph") {
            return Err(p.err(format!("expected `graph`, {}", p.found())).into());
        }
        let name = p.name("a graph name")?;
        let at = p.err("");
        p.expect("{")?;
        let mut states: Vec<String> = Vec::new();
        let mut actions: Option<BTreeSet<String>> = None;
        let mut root: Option<String> = None;
        let mut edges: Vec<(String, String, String)> = Vec::new();
        while !p.eat("}") {
            let field = p.ident("`states`, `actions`, `root` or `edges`")?;
            p.expect(":")?;
            match field.as_str() {
                "states" => {
                    if !p.eat(";") {
                        loop {
                            states.push(p.name("a state")?);
                            if p.eat(";") {
                                break;
                            }
                            p.expect(",")?;
                        }
                    }
                }
                "actions" => {
                    let mut acts = BTreeSet::new();
                    if !p.eat(";") {
                        loop {
                            acts.insert(p.ident("an action")?);
                            if p.eat(";") {
                                break;
                            }
                            p.expect(",")?;
                        }
                    }
                    actions = Some(acts);
                }
                "root" => {
                    root = Some(p.name("a state")?);
                    p.expect(";")?;
                }
                "edges" => {
                    if !p.eat(";") {
                        loop {
                            let s = p.name("a state")?;
                            p.expect("-")?;
                            let a = p.ident("an action label")?;
                            p.expect("->")?;
                            let t = p.name("a state")?;
                            edges.push((s, a, t));
                            if p.eat(";") {
                                break;
                            }
                            p.expect(",")?;
                        }
                    }
                }
                other => return Err(p.err(format!("unknown graph field `{other}`")).into()),
            }
        }
        let root = root.ok_or_else(|| ParseError::new(at.line, at.column, format!("graph `{name}` has no root")))?;
        let g = ProcessGraph::from_parts(states, actions, edges, &root)
            .map_err(|e| ParseError::new(at.line, at.column, format!("graph `{name}`: {e}")))?;
        out.push((name, g));
    }
    Ok(out)
}

/// Parses a file holding exactly one graph.
pub fn parse_graph(text: &str) -> Result<ProcessGraph, crate::error::Error> {
    let mut all = parse_graphs(text)?;
    if all.len() != 1 {
        return Err(ParseError::new(1, 1, format!("expected exactly one graph, found {}", all.len())).into());
    }
    Ok(all.remove(0).1)
}

fn quote_state(s: &str) -> String {
    let plain = s.chars().next().is_some_and(|c| c.is_ascii_alphanumeric())
        && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
        && (s.chars().next().is_some_and(|c| c.is_ascii_alphabetic()) || s.chars().all(|c| c.is_ascii_digit()));
    if plain {
        s.to_string()
    } else {
        format!("{s:?}")
    }
}

/// Canonical text of a named graph.
pub fn serialize_graph(name: &str, g: &ProcessGraph) -> String {
    let states: Vec<String> = g.states.iter().map(|s| quote_state(s)).collect();
    let acts: Vec<&str> = g.actions.iter().map(String::as_str).collect();
    let edges: Vec<String> = g
        .edges
        .iter()
        .map(|(s, a, t)| format!("{} -{}-> {}", quote_state(s), a, quote_state(t)))
        .collect();
    let mut out = format!("graph {} {{\n", quote_state(name));
    out.push_str(&format!("  states: {};\n", states.join(", ")));
    out.push_str(&format!("  actions: {};\n", acts.join(", ")));
    out.push_str(&format!("  root: {};\n", quote_state(&g.root)));
    out.push_str(&format!("  edges: {};\n", edges.join(", ")));
    out.push_str("}\n");
    out
}

/// Renders a prefix symbol `prefix_a` as written in rules, `a._`.
pub fn display_symbol(sym: &str) -> String {
    match sym.strip_prefix(PREFIX) {
        Some(a) => format!("{a}._"),
        None => symbol_display(sym).to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig() -> Signature {
        Signature::new()
            .with("zero", 0)
            .with("f", 1)
            .with("g", 2)
            .with("prefix_a", 1)
    }

    #[test]
    fn prefix_sugar_desugars() {
        let t = parse_term("a.0", &sig()).unwrap();
        assert_eq!(t, Term::app("prefix_a", vec![Term::app("zero", vec![])]));
    }

    #[test]
    fn identifiers_split_into_symbols_and_variables() {
        let t = parse_term("g(x, f(zero))", &sig()).unwrap();
        assert_eq!(
            t,
            Term::app(
                "g",
                vec![Term::var("x"), Term::app("f", vec![Term::constant("zero")])]
            )
        );
    }

    #[test]
    fn recursion_round_trips_through_display() {
        let t = parse_term("rec X { X = a.Y; Y = g(X, y) }", &sig()).unwrap();
        assert_eq!(parse_term(&t.to_string(), &sig()).unwrap(), t);
        assert!(parse_term("rec X { Y = a.Y }", &sig()).is_err());
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse_term("g(x,", &sig()).unwrap_err();
        assert_eq!(e.line, 1);
        let e = parse_term("h(x)", &sig()).unwrap_err();
        assert!(e.message.contains("undeclared"));
    }

    #[test]
    fn rule_without_conclusion_names_its_line() {
        let text = "tss t\nactions: a;\nsig: 0/0, f/1;\n\nx -a-> y |-\n";
        match parse_tss(text) {
            Err(crate::error::Error::Parse(e)) => assert_eq!(e.line, 5),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn tss_round_trip() {
        let text = "tss demo\nactions: b, a;\nsig: f/1, 0/0, prefix_a/1;\noptions: unfold;\n\
                    # comment\nforall al in {a, b}: x -al-> y |- f(x) -al-> f(y)\n|- a.x -a-> x\n\
                    x -/*-> |- f(x) -b-> 0\n";
        let tss = parse_tss(text).unwrap();
        assert!(tss.recursion_unfolding);
        let out = serialize_tss(&tss);
        let back = parse_tss(&out).unwrap();
        assert_eq!(back, canonical_tss(&tss));
        assert_eq!(serialize_tss(&back), out);
    }

    #[test]
    fn graph_round_trip() {
        let text = "graph g { states: s0; root: s0; edges: s0 -tau-> s1, s1 -c-> \"odd state\"; }";
        let gs = parse_graphs(text).unwrap();
        assert_eq!(gs.len(), 1);
        let (name, g) = &gs[0];
        assert_eq!(g.states.len(), 3);
        let back = parse_graph(&serialize_graph(name, g)).unwrap();
        assert_eq!(&back, g);
    }
}
