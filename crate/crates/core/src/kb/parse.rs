//! Hand-written lexer and recursive-descent parser for the `.lsc` format.
//!
//! ```text
//! const Roger, Pongo.
//! principle p1 "The safety of citizens' lives must be protected."
//! order p2 < p3 < p1.
//! fact Dog(Pongo).
//! norm n1 [p1]: Citizen(Roger), Life(Roger) => O(Protect(Roger)).
//! strict s1: Driver(Roger) -> Person(Roger).
//! rule forall x: Dog(x) ~> Life(x) [p3].
//! incompatible Protect(Roger), Protect(Pongo).
//! pref Protect(Roger) > Protect(Pongo).
//! ```
//!
//! The terminating `.` of a statement is optional. Inside rule bodies a
//! material implication must be parenthesised, `(a -> b)`, so that it does
//! not clash with the rule arrow.

use std::collections::{BTreeSet, HashSet};

use crate::error::Error;
use crate::formula::{Formula, IncompatibilityDecl, Term};

use super::{KnowledgeBase, Principle, Quantifier, Rule, RuleKind, RuleOrigin, TypeRule};

const KEYWORDS: &[&str] = &[
    "const",
    "principle",
    "order",
    "fact",
    "norm",
    "strict",
    "rule",
    "incompatible",
    "pref",
];

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Str(String),
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Dot,
    Colon,
    Tilde,
    Amp,
    Bar,
    Arrow,
    DoubleArrow,
    TildeArrow,
    Iff,
    Less,
    Greater,
    Falsum,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(src: &str) -> Result<Vec<Token>, Error> {
    let mut out = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    while i < chars.len() {
        let c = chars[i];
        let start = (line, col);
        let push = |out: &mut Vec<Token>, tok: Tok| {
            out.push(Token {
                tok,
                line: start.0,
                col: start.1,
            })
        };
        let peek = chars.get(i + 1).copied();
        match c {
            '\n' => {
                i += 1;
                line += 1;
                col = 1;
                continue;
            }
            c if c.is_whitespace() => {}
            '#' => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
                continue;
            }
            '(' => push(&mut out, Tok::LParen),
            ')' => push(&mut out, Tok::RParen),
            '[' => push(&mut out, Tok::LBracket),
            ']' => push(&mut out, Tok::RBracket),
            ',' => push(&mut out, Tok::Comma),
            '.' => push(&mut out, Tok::Dot),
            ':' => push(&mut out, Tok::Colon),
            '&' => push(&mut out, Tok::Amp),
            '|' => push(&mut out, Tok::Bar),
            '>' => push(&mut out, Tok::Greater),
            '⊥' => push(&mut out, Tok::Falsum),
            '~' if peek == Some('>') => {
                push(&mut out, Tok::TildeArrow);
                i += 2;
                col += 2;
                continue;
            }
            '~' => push(&mut out, Tok::Tilde),
            '-' if peek == Some('>') => {
                push(&mut out, Tok::Arrow);
                i += 2;
                col += 2;
                continue;
            }
            '=' if peek == Some('>') => {
                push(&mut out, Tok::DoubleArrow);
                i += 2;
                col += 2;
                continue;
            }
            '<' if peek == Some('-') && chars.get(i + 2) == Some(&'>') => {
                push(&mut out, Tok::Iff);
                i += 3;
                col += 3;
                continue;
            }
            '<' => push(&mut out, Tok::Less),
            '"' => {
                let mut s = String::new();
                i += 1;
                col += 1;
                loop {
                    match chars.get(i) {
                        None | Some('\n') => {
                            return Err(Error::syntax(
                                start.0,
                                start.1,
                                "unterminated string literal",
                            ));
                        }
                        Some('"') => break,
                        Some(&ch) => {
                            s.push(ch);
                            i += 1;
                            col += 1;
                        }
                    }
                }
                push(&mut out, Tok::Str(s));
            }
            c if c.is_alphanumeric() || c == '_' => {
                let mut s = String::new();
                while let Some(&ch) = chars.get(i) {
                    if ch.is_alphanumeric() || ch == '_' || ch == '\'' {
                        s.push(ch);
                        i += 1;
                        col += 1;
                    } else {
                        break;
                    }
                }
                push(&mut out, Tok::Ident(s));
                continue;
            }
            other => {
                return Err(Error::syntax(
                    line,
                    col,
                    format!("unexpected character `{other}`"),
                ));
            }
        }
        i += 1;
        col += 1;
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    /// Variable names in scope (type-rule binders).
    bound: Vec<String>,
    /// Unbound lowercase terms are variables (type rules only).
    free_vars_allowed: bool,
}

impl Parser {
    fn new(toks: Vec<Token>) -> Self {
        Parser {
            toks,
            pos: 0,
            bound: Vec::new(),
            free_vars_allowed: false,
        }
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn peek_at(&self, offset: usize) -> Option<&Tok> {
        self.toks.get(self.pos + offset).map(|t| &t.tok)
    }

    fn here(&self) -> (usize, usize) {
        match self.toks.get(self.pos).or_else(|| self.toks.last()) {
            Some(t) => (t.line, t.col),
            None => (1, 1),
        }
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, Error> {
        let (l, c) = self.here();
        Err(Error::syntax(l, c, message))
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|t| t.tok.clone());
        self.pos += 1;
        t
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: &Tok, what: &str) -> Result<(), Error> {
        if self.eat(tok) {
            Ok(())
        } else {
            self.err(format!("expected {what}"))
        }
    }

    fn ident(&mut self, what: &str) -> Result<String, Error> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => self.err(format!("expected {what}")),
        }
    }

    fn at_keyword(&self) -> bool {
        matches!(self.peek(), Some(Tok::Ident(s)) if KEYWORDS.contains(&s.as_str()))
    }

    /// Full formula: implications and biconditionals allowed at top level.
    fn formula(&mut self) -> Result<Formula, Error> {
        let lhs = self.disjunction()?;
        if self.eat(&Tok::Arrow) {
            let rhs = self.formula()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        if self.eat(&Tok::Iff) {
            let rhs = self.formula()?;
            return Ok(Formula::and(
                Formula::implies(lhs.clone(), rhs.clone()),
                Formula::implies(rhs, lhs),
            ));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula, Error> {
        let mut lhs = self.conjunction()?;
        while self.eat(&Tok::Bar) {
            let rhs = self.conjunction()?;
            lhs = Formula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<Formula, Error> {
        let mut lhs = self.unary()?;
        while self.eat(&Tok::Amp) {
            let rhs = self.unary()?;
            lhs = Formula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, Error> {
        if self.eat(&Tok::Tilde) {
            return Ok(Formula::not(self.unary()?));
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<Formula, Error> {
        match self.peek().cloned() {
            Some(Tok::LParen) => {
                self.pos += 1;
                let f = self.formula()?;
                self.expect(&Tok::RParen, "`)`")?;
                Ok(f)
            }
            Some(Tok::Falsum) => {
                self.pos += 1;
                Ok(Formula::Falsum)
            }
            Some(Tok::Ident(name)) => {
                if name == "forall" || name == "exists" {
                    return self.err("quantifiers are only supported in `rule` headers");
                }
                if name == "false" {
                    self.pos += 1;
                    return Ok(Formula::Falsum);
                }
                self.pos += 1;
                let is_call = self.peek() == Some(&Tok::LParen);
                match (name.as_str(), is_call) {
                    ("O", true) | ("P", true) => {
                        self.pos += 1;
                        let inner = self.formula()?;
                        self.expect(&Tok::RParen, "`)`")?;
                        Ok(if name == "O" {
                            Formula::obl(inner)
                        } else {
                            Formula::perm(inner)
                        })
                    }
                    ("Pref", true) => {
                        self.pos += 1;
                        let a = self.formula()?;
                        self.expect(&Tok::Comma, "`,` in Pref")?;
                        let b = self.formula()?;
                        self.expect(&Tok::RParen, "`)`")?;
                        Ok(Formula::pref(a, b))
                    }
                    ("O", false) | ("P", false) | ("Pref", false) => {
                        self.err(format!("operator `{name}` needs a parenthesised argument"))
                    }
                    (_, true) => {
                        self.pos += 1;
                        let mut args = Vec::new();
                        loop {
                            let t = self.ident("term")?;
                            args.push(self.term(t));
                            if self.eat(&Tok::Comma) {
                                continue;
                            }
                            self.expect(&Tok::RParen, "`,` or `)` in argument list")?;
                            break;
                        }
                        Ok(Formula::Atom { pred: name, args })
                    }
                    (_, false) => Ok(Formula::Atom {
                        pred: name,
                        args: Vec::new(),
                    }),
                }
            }
            _ => self.err("expected formula"),
        }
    }

    fn term(&self, name: String) -> Term {
        let lowercase = name.chars().next().is_some_and(|c| c.is_lowercase());
        if self.bound.contains(&name) || (self.free_vars_allowed && lowercase) {
            Term::Var(name)
        } else {
            Term::Const(name)
        }
    }

    /// Comma separated list of rule-level formulas (no bare `->`).
    fn body_list(&mut self) -> Result<Vec<Formula>, Error> {
        let mut out = vec![self.disjunction()?];
        while self.eat(&Tok::Comma) {
            out.push(self.disjunction()?);
        }
        Ok(out)
    }

    fn principle_tag(&mut self) -> Result<Option<String>, Error> {
        if self.eat(&Tok::LBracket) {
            let p = self.ident("principle id")?;
            self.expect(&Tok::RBracket, "`]`")?;
            Ok(Some(p))
        } else {
            Ok(None)
        }
    }

    fn rule_arrow(&mut self) -> Result<RuleKind, Error> {
        match self.bump() {
            Some(Tok::Arrow) => Ok(RuleKind::Strict),
            Some(Tok::DoubleArrow) | Some(Tok::TildeArrow) => Ok(RuleKind::Defeasible),
            _ => {
                self.pos -= 1;
                self.err("expected `->`, `=>` or `~>`")
            }
        }
    }

    fn end_statement(&mut self) -> Result<(), Error> {
        if self.eat(&Tok::Dot) || self.peek().is_none() || self.at_keyword() {
            Ok(())
        } else {
            self.err("expected `.` or a new statement")
        }
    }
}

struct Builder {
    kb: KnowledgeBase,
    ids: HashSet<String>,
    auto: usize,
}

impl Builder {
    fn claim_id(&mut self, id: &str, line: usize) -> Result<(), Error> {
        if !self.ids.insert(id.to_string()) {
            return Err(Error::DuplicateId {
                id: id.to_string(),
                line,
            });
        }
        Ok(())
    }
}

/// Parse `.lsc` source. Quantified type rules are kept un-grounded.
pub fn parse_kb(source: &str) -> Result<KnowledgeBase, Error> {
    let mut p = Parser::new(lex(source)?);
    let mut b = Builder {
        kb: KnowledgeBase::default(),
        ids: HashSet::new(),
        auto: 0,
    };
    let mut order_decls: Vec<(String, String, bool)> = Vec::new();

    while p.peek().is_some() {
        let (line, _) = p.here();
        let kw = p.ident("statement keyword")?;
        match kw.as_str() {
            "const" => loop {
                let c = p.ident("constant name")?;
                b.kb.constants.insert(c);
                if !p.eat(&Tok::Comma) {
                    break;
                }
            },
            "principle" => {
                let id = p.ident("principle id")?;
                let text = match p.peek() {
                    Some(Tok::Str(s)) => {
                        let s = s.clone();
                        p.pos += 1;
                        Some(s)
                    }
                    _ => None,
                };
                b.kb.principles.insert(id.clone(), Principle { id, text });
            }
            "order" => {
                let mut prev = p.ident("principle id")?;
                loop {
                    let rel = match p.peek() {
                        Some(Tok::Less) => 0,
                        Some(Tok::Greater) => 1,
                        Some(Tok::Tilde) => 2,
                        _ => break,
                    };
                    p.pos += 1;
                    let next = p.ident("principle id")?;
                    match rel {
                        0 => order_decls.push((prev.clone(), next.clone(), true)),
                        1 => order_decls.push((next.clone(), prev.clone(), true)),
                        _ => order_decls.push((prev.clone(), next.clone(), false)),
                    }
                    prev = next;
                }
            }
            "fact" => loop {
                let f = p.formula()?;
                b.kb.add_fact(f);
                if !p.eat(&Tok::Comma) {
                    break;
                }
            },
            "pref" => {
                let better = p.disjunction()?;
                p.expect(&Tok::Greater, "`>` in pref statement")?;
                let worse = p.disjunction()?;
                b.kb.add_fact(Formula::pref(better, worse));
            }
            "incompatible" => {
                let a = p.disjunction()?;
                p.expect(&Tok::Comma, "`,` between incompatible actions")?;
                let c = p.disjunction()?;
                b.kb.incompatibilities
                    .insert(IncompatibilityDecl::new(a, c));
            }
            "norm" | "strict" => {
                let id = p.ident("rule id")?;
                b.claim_id(&id, line)?;
                let mut principle = p.principle_tag()?;
                p.expect(&Tok::Colon, "`:` after rule id")?;
                let antecedents = p.body_list()?;
                let kind = p.rule_arrow()?;
                let consequent = p.disjunction()?;
                if principle.is_none() {
                    principle = p.principle_tag()?;
                }
                let expected = if kw == "norm" {
                    RuleKind::Defeasible
                } else {
                    RuleKind::Strict
                };
                if kind != expected {
                    return p.err(format!("`{kw}` statement uses the wrong rule arrow"));
                }
                push_rule(&mut b.kb, id, antecedents, consequent, kind, principle);
            }
            "rule" => {
                // rule [id] (forall|exists) x, y: body arrow head [p]
                let mut id = None;
                if let Some(Tok::Ident(s)) = p.peek() {
                    if s != "forall" && s != "exists" {
                        id = Some(p.ident("rule id")?);
                    }
                }
                let mut binders = Vec::new();
                while let Some(Tok::Ident(q)) = p.peek().cloned() {
                    let quant = match q.as_str() {
                        "forall" => Quantifier::ForAll,
                        "exists" => Quantifier::Exists,
                        _ => break,
                    };
                    p.pos += 1;
                    loop {
                        let v = p.ident("variable")?;
                        binders.push((quant, v));
                        if !(p.peek() == Some(&Tok::Comma)
                            && matches!(p.peek_at(1), Some(Tok::Ident(_)))
                            && !matches!(p.peek_at(2), Some(Tok::LParen)))
                        {
                            break;
                        }
                        p.pos += 1;
                    }
                    p.eat(&Tok::Dot);
                }
                let id = match id {
                    Some(id) => id,
                    None => {
                        b.auto += 1;
                        format!("t{}", b.auto)
                    }
                };
                b.claim_id(&id, line)?;
                let mut principle = p.principle_tag()?;
                p.expect(&Tok::Colon, "`:` in rule header")?;
                p.bound = binders.iter().map(|(_, v)| v.clone()).collect();
                p.free_vars_allowed = true;
                let antecedents = p.body_list();
                let kind = p.rule_arrow();
                let consequent = p.disjunction();
                p.bound.clear();
                p.free_vars_allowed = false;
                let (antecedents, kind, consequent) = (antecedents?, kind?, consequent?);
                if principle.is_none() {
                    principle = p.principle_tag()?;
                }
                if binders
                    .iter()
                    .filter(|(q, _)| *q == Quantifier::Exists)
                    .count()
                    > 1
                {
                    return p.err("at most one existential variable is supported");
                }
                if binders.is_empty()
                    && antecedents
                        .iter()
                        .chain([&consequent])
                        .all(Formula::is_ground)
                {
                    push_rule(&mut b.kb, id, antecedents, consequent, kind, principle);
                } else {
                    b.kb.type_rules.push(TypeRule {
                        id,
                        binders,
                        antecedents,
                        consequent,
                        kind,
                        principle,
                        line,
                    });
                }
            }
            other => {
                p.pos -= 1;
                return p.err(format!("unknown statement `{other}`"));
            }
        }
        p.end_statement()?;
    }

    for (a, c, strict) in order_decls {
        if strict {
            b.kb.principle_order.declare_less(&a, &c);
        } else {
            b.kb.principle_order.declare_equiv(&a, &c);
        }
    }
    let carrier: BTreeSet<String> = b.kb.principles.keys().cloned().collect();
    b.kb.principle_order.close(carrier.iter());

    check_principles(&b.kb)?;
    Ok(b.kb)
}

fn push_rule(
    kb: &mut KnowledgeBase,
    id: String,
    antecedents: Vec<Formula>,
    consequent: Formula,
    kind: RuleKind,
    principle: Option<String>,
) {
    let rule = Rule {
        id,
        antecedents,
        consequent,
        kind,
        principle: if kind == RuleKind::Defeasible {
            principle
        } else {
            None
        },
        origin: RuleOrigin::Declared,
    };
    for f in rule.formulas() {
        kb.constants.extend(f.constants());
    }
    match kind {
        RuleKind::Strict => kb.strict_rules.push(rule),
        RuleKind::Defeasible => kb.norms.push(rule),
    }
}

fn check_principles(kb: &KnowledgeBase) -> Result<(), Error> {
    let tagged = kb.norms.iter().map(|n| (&n.id, &n.principle)).chain(
        kb.type_rules
            .iter()
            .filter(|t| t.kind == RuleKind::Defeasible)
            .map(|t| (&t.id, &t.principle)),
    );
    for (id, principle) in tagged {
        match principle {
            None => return Err(Error::MissingPrinciple { norm: id.clone() }),
            Some(p) if !kb.principles.contains_key(p) => {
                return Err(Error::UnknownPrinciple {
                    norm: id.clone(),
                    principle: p.clone(),
                })
            }
            Some(_) => {}
        }
    }
    Ok(())
}

/// Parse a single ground formula, e.g. a command-line query target.
pub fn parse_formula(text: &str) -> Result<Formula, Error> {
    let mut p = Parser::new(lex(text)?);
    let f = p.formula()?;
    if p.peek().is_some() {
        return p.err("trailing input after formula");
    }
    Ok(f)
}
