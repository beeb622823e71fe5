//! Prenex first-order sentences over a relational signature: parsing,
//! brute-force evaluation, axiom-shape classification, and empirical
//! closure checks under the pinch and disjoint-union constructions.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::bounds::Bounds;
use crate::constructions::{self, ConstructError};
use crate::relational::{RelStructure, Signature};

#[derive(Debug, Error, PartialEq, Eq)]
#[error("{line}:{col}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LogicError {
    #[error("{0}")]
    Parse(#[from] ParseError),
    #[error("evaluation needs {needed} assignments, budget is {budget}")]
    EvalBudget { needed: u128, budget: u64 },
    #[error("sentence and structure use different signatures")]
    SignatureMismatch,
    #[error("sample {sample} violates axiom {axiom} before any construction")]
    SampleViolatesAxiom { sample: String, axiom: usize },
    #[error("bad sentence: {0}")]
    BadSentence(String),
    #[error(transparent)]
    Construct(#[from] ConstructError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantifier {
    Forall,
    Exists,
}

/// Formula tree; variables are indices into the sentence prefix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Formula {
    Atom { rel: usize, args: Vec<usize> },
    Equal(usize, usize),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
}

/// A prenex sentence bound to a signature.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sentence {
    sig: Arc<Signature>,
    prefix: Vec<(Quantifier, String)>,
    matrix: Formula,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AxiomClass {
    Reflexivity,
    AntiIdentity,
    PinchSafeImplication,
    Other,
}

impl fmt::Display for AxiomClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            AxiomClass::Reflexivity => "REFLEXIVITY",
            AxiomClass::AntiIdentity => "ANTI_IDENTITY",
            AxiomClass::PinchSafeImplication => "PINCH_SAFE_IMPLICATION",
            AxiomClass::Other => "OTHER",
        };
        f.write_str(s)
    }
}

impl Sentence {
    /// Build a sentence from parts, checking variable bounds and
    /// atom arities.
    pub fn new(
        sig: Arc<Signature>,
        prefix: Vec<(Quantifier, String)>,
        matrix: Formula,
    ) -> Result<Sentence, LogicError> {
        let mut names = BTreeSet::new();
        for (_, name) in &prefix {
            if !names.insert(name.clone()) {
                return Err(LogicError::BadSentence(format!(
                    "variable {name} quantified twice"
                )));
            }
        }
        check_formula(&sig, prefix.len(), &matrix)?;
        Ok(Sentence {
            sig,
            prefix,
            matrix,
        })
    }

    pub fn signature(&self) -> &Arc<Signature> {
        &self.sig
    }

    pub fn prefix(&self) -> &[(Quantifier, String)] {
        &self.prefix
    }

    pub fn matrix(&self) -> &Formula {
        &self.matrix
    }

    pub fn quantifier_count(&self) -> usize {
        self.prefix.len()
    }
}

fn check_formula(sig: &Signature, vars: usize, f: &Formula) -> Result<(), LogicError> {
    match f {
        Formula::Atom { rel, args } => {
            let (_, arity) = sig
                .relations()
                .get(*rel)
                .ok_or_else(|| LogicError::BadSentence(format!("no relation index {rel}")))?;
            if args.len() != *arity {
                return Err(LogicError::BadSentence(format!(
                    "arity mismatch: expected {arity}, got {}",
                    args.len()
                )));
            }
            for &v in args {
                if v >= vars {
                    return Err(LogicError::BadSentence(format!("unbound variable #{v}")));
                }
            }
            Ok(())
        }
        Formula::Equal(x, y) => {
            if *x >= vars || *y >= vars {
                return Err(LogicError::BadSentence("unbound variable in equality".into()));
            }
            Ok(())
        }
        Formula::Not(a) => check_formula(sig, vars, a),
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
            check_formula(sig, vars, a)?;
            check_formula(sig, vars, b)
        }
    }
}

// ---------------------------------------------------------------- lexer

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Forall,
    Exists,
    Ident(String),
    Dot,
    Comma,
    LParen,
    RParen,
    Tilde,
    Amp,
    Pipe,
    Arrow,
    Eq,
    End,
}

struct Lexer {
    toks: Vec<(Tok, usize, usize)>,
    pos: usize,
}

struct Cursor {
    chars: Vec<char>,
    i: usize,
    line: usize,
    col: usize,
}

impl Cursor {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.i).copied()
    }

    fn bump(&mut self) -> char {
        let c = self.chars[self.i];
        self.i += 1;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        c
    }
}

fn lex(text: &str) -> Result<Lexer, ParseError> {
    let mut cur = Cursor {
        chars: text.chars().collect(),
        i: 0,
        line: 1,
        col: 1,
    };
    let mut toks = Vec::new();
    while let Some(c) = cur.peek() {
        let (tl, tc) = (cur.line, cur.col);
        if c.is_whitespace() {
            cur.bump();
            continue;
        }
        if c == '#' {
            while cur.peek().is_some_and(|c| c != '\n') {
                cur.bump();
            }
            continue;
        }
        if c.is_alphanumeric() || c == '_' {
            let mut word = String::new();
            while cur.peek().is_some_and(|c| c.is_alphanumeric() || c == '_') {
                word.push(cur.bump());
            }
            let tok = match word.as_str() {
                "forall" => Tok::Forall,
                "exists" => Tok::Exists,
                _ => Tok::Ident(word),
            };
            toks.push((tok, tl, tc));
            continue;
        }
        let tok = match cur.bump() {
            '.' => Tok::Dot,
            ',' => Tok::Comma,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '~' => Tok::Tilde,
            '&' => Tok::Amp,
            '|' => Tok::Pipe,
            '=' => Tok::Eq,
            '-' => {
                if cur.peek() == Some('>') {
                    cur.bump();
                    Tok::Arrow
                } else {
                    return Err(ParseError {
                        line: tl,
                        col: tc,
                        msg: "expected '>' after '-'".into(),
                    });
                }
            }
            other => {
                return Err(ParseError {
                    line: tl,
                    col: tc,
                    msg: format!("unexpected character '{other}'"),
                })
            }
        };
        toks.push((tok, tl, tc));
    }
    toks.push((Tok::End, cur.line, cur.col));
    Ok(Lexer { toks, pos: 0 })
}

impl Lexer {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn here(&self) -> (usize, usize) {
        let (_, l, c) = self.toks[self.pos];
        (l, c)
    }

    fn next(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<(), ParseError> {
        if *self.peek() == want {
            self.next();
            Ok(())
        } else {
            let (line, col) = self.here();
            Err(ParseError {
                line,
                col,
                msg: format!("expected {what}"),
            })
        }
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        let (line, col) = self.here();
        Err(ParseError {
            line,
            col,
            msg: msg.into(),
        })
    }
}

// --------------------------------------------------------------- parser

struct Parser<'a> {
    lx: Lexer,
    sig: &'a Arc<Signature>,
    vars: Vec<String>,
}

impl<'a> Parser<'a> {
    fn var(&self, name: &str) -> Result<usize, ParseError> {
        match self.vars.iter().position(|v| v == name) {
            Some(i) => Ok(i),
            None => self.lx.err(format!("unbound variable '{name}'")),
        }
    }

    fn sentence(&mut self) -> Result<Sentence, ParseError> {
        let mut prefix = Vec::new();
        loop {
            let q = match self.lx.peek() {
                Tok::Forall => Quantifier::Forall,
                Tok::Exists => Quantifier::Exists,
                _ => break,
            };
            self.lx.next();
            let mut got = false;
            while let Tok::Ident(name) = self.lx.peek() {
                let name = name.clone();
                if self.vars.contains(&name) {
                    return self.lx.err(format!("variable '{name}' quantified twice"));
                }
                self.lx.next();
                self.vars.push(name.clone());
                prefix.push((q, name));
                got = true;
            }
            if !got {
                return self.lx.err("expected variable name after quantifier");
            }
        }
        self.lx.expect(Tok::Dot, "'.' after quantifier prefix")?;
        let matrix = self.implication()?;
        if *self.lx.peek() != Tok::End {
            return self.lx.err("trailing input after sentence");
        }
        Sentence::new(Arc::clone(self.sig), prefix, matrix)
            .map_err(|e| ParseError {
                line: 0,
                col: 0,
                msg: e.to_string(),
            })
    }

    fn implication(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.disjunction()?;
        if *self.lx.peek() == Tok::Arrow {
            self.lx.next();
            let rhs = self.implication()?;
            Ok(Formula::Implies(Box::new(lhs), Box::new(rhs)))
        } else {
            Ok(lhs)
        }
    }

    fn disjunction(&mut self) -> Result<Formula, ParseError> {
        let mut f = self.conjunction()?;
        while *self.lx.peek() == Tok::Pipe {
            self.lx.next();
            let rhs = self.conjunction()?;
            f = Formula::Or(Box::new(f), Box::new(rhs));
        }
        Ok(f)
    }

    fn conjunction(&mut self) -> Result<Formula, ParseError> {
        let mut f = self.literal()?;
        while *self.lx.peek() == Tok::Amp {
            self.lx.next();
            let rhs = self.literal()?;
            f = Formula::And(Box::new(f), Box::new(rhs));
        }
        Ok(f)
    }

    fn literal(&mut self) -> Result<Formula, ParseError> {
        match self.lx.peek().clone() {
            Tok::Tilde => {
                self.lx.next();
                Ok(Formula::Not(Box::new(self.literal()?)))
            }
            Tok::LParen => {
                self.lx.next();
                let body = self.implication()?;
                self.lx.expect(Tok::RParen, "')'")?;
                Ok(body)
            }
            Tok::Ident(name) => {
                self.lx.next();
                match self.lx.peek() {
                    Tok::LParen => self.relation_atom(&name),
                    Tok::Eq => {
                        self.lx.next();
                        let x = self.var(&name)?;
                        match self.lx.peek().clone() {
                            Tok::Ident(rhs) => {
                                self.lx.next();
                                let y = self.var(&rhs)?;
                                Ok(Formula::Equal(x, y))
                            }
                            _ => self.lx.err("expected variable after '='"),
                        }
                    }
                    _ => self.lx.err(format!(
                        "expected '(' or '=' after '{name}'"
                    )),
                }
            }
            _ => self.lx.err("expected a literal"),
        }
    }

    fn relation_atom(&mut self, name: &str) -> Result<Formula, ParseError> {
        let rel = match self.sig.index_of(name) {
            Some(r) => r,
            None => return self.lx.err(format!("unknown relation '{name}'")),
        };
        self.lx.expect(Tok::LParen, "'('")?;
        let mut args = Vec::new();
        loop {
            match self.lx.peek().clone() {
                Tok::Ident(v) => {
                    self.lx.next();
                    args.push(self.var(&v)?);
                }
                _ => return self.lx.err("expected variable in atom"),
            }
            match self.lx.peek() {
                Tok::Comma => {
                    self.lx.next();
                }
                Tok::RParen => break,
                _ => return self.lx.err("expected ',' or ')' in atom"),
            }
        }
        self.lx.next(); // the ')'
        let arity = self.sig.arity(rel);
        if args.len() != arity {
            return self
                .lx
                .err(format!("relation '{name}' wants {arity} arguments, got {}", args.len()));
        }
        Ok(Formula::Atom { rel, args })
    }
}

/// Parse one prenex sentence against a signature.
pub fn parse_sentence(text: &str, sig: &Arc<Signature>) -> Result<Sentence, ParseError> {
    let lx = lex(text)?;
    Parser {
        lx,
        sig,
        vars: Vec::new(),
    }
    .sentence()
}

// ------------------------------------------------------------ rendering

impl fmt::Display for Sentence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut last: Option<Quantifier> = None;
        for (q, name) in &self.prefix {
            if last != Some(*q) {
                if last.is_some() {
                    write!(f, " ")?;
                }
                match q {
                    Quantifier::Forall => write!(f, "forall")?,
                    Quantifier::Exists => write!(f, "exists")?,
                }
                last = Some(*q);
            }
            write!(f, " {name}")?;
        }
        if self.prefix.is_empty() {
            write!(f, ".")?;
        } else {
            write!(f, " .")?;
        }
        write!(f, " ")?;
        self.print_formula(&self.matrix, 0, f)
    }
}

impl Sentence {
    // Precedence levels: -> is 1, | is 2, & is 3, ~ is 4, atoms 5.
    fn print_formula(
        &self,
        g: &Formula,
        min_prec: u8,
        f: &mut fmt::Formatter<'_>,
    ) -> fmt::Result {
        let prec = match g {
            Formula::Implies(..) => 1,
            Formula::Or(..) => 2,
            Formula::And(..) => 3,
            Formula::Not(..) => 4,
            Formula::Atom { .. } | Formula::Equal(..) => 5,
        };
        let parens = prec < min_prec;
        if parens {
            write!(f, "(")?;
        }
        match g {
            Formula::Atom { rel, args } => {
                write!(f, "{}(", self.sig.relation_name(*rel))?;
                for (i, &v) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{}", self.prefix[v].1)?;
                }
                write!(f, ")")?;
            }
            Formula::Equal(x, y) => {
                write!(f, "{} = {}", self.prefix[*x].1, self.prefix[*y].1)?;
            }
            Formula::Not(a) => {
                write!(f, "~")?;
                // "~x = y" reparses correctly but reads wrong; keep
                // the grouping visible.
                if matches!(**a, Formula::Equal(..)) {
                    write!(f, "(")?;
                    self.print_formula(a, 0, f)?;
                    write!(f, ")")?;
                } else {
                    self.print_formula(a, 4, f)?;
                }
            }
            Formula::And(a, b) => {
                self.print_formula(a, 3, f)?;
                write!(f, " & ")?;
                self.print_formula(b, 4, f)?;
            }
            Formula::Or(a, b) => {
                self.print_formula(a, 2, f)?;
                write!(f, " | ")?;
                self.print_formula(b, 3, f)?;
            }
            Formula::Implies(a, b) => {
                self.print_formula(a, 2, f)?;
                write!(f, " -> ")?;
                self.print_formula(b, 1, f)?;
            }
        }
        if parens {
            write!(f, ")")?;
        }
        Ok(())
    }
}

// ----------------------------------------------------------- evaluation

/// Tarskian truth by exhaustive assignment enumeration. Guarded by
/// `|universe|^quantifiers <= eval_budget`.
pub fn models(structure: &RelStructure, s: &Sentence, bounds: &Bounds) -> Result<bool, LogicError> {
    if !structure.signature().same_shape(&s.sig) {
        return Err(LogicError::SignatureMismatch);
    }
    let needed = (structure.size() as u128)
        .checked_pow(s.prefix.len() as u32)
        .unwrap_or(u128::MAX);
    if needed > bounds.eval_budget as u128 {
        return Err(LogicError::EvalBudget {
            needed,
            budget: bounds.eval_budget as u64,
        });
    }
    let mut env = vec![0usize; s.prefix.len()];
    Ok(eval_prefix(structure, s, 0, &mut env))
}

fn eval_prefix(st: &RelStructure, s: &Sentence, pos: usize, env: &mut Vec<usize>) -> bool {
    if pos == s.prefix.len() {
        return eval_formula(st, &s.matrix, env);
    }
    match s.prefix[pos].0 {
        Quantifier::Forall => {
            for v in 0..st.size() {
                env[pos] = v;
                if !eval_prefix(st, s, pos + 1, env) {
                    return false;
                }
            }
            true
        }
        Quantifier::Exists => {
            for v in 0..st.size() {
                env[pos] = v;
                if eval_prefix(st, s, pos + 1, env) {
                    return true;
                }
            }
            false
        }
    }
}

fn eval_formula(st: &RelStructure, f: &Formula, env: &[usize]) -> bool {
    match f {
        Formula::Atom { rel, args } => {
            let tuple: Vec<usize> = args.iter().map(|&v| env[v]).collect();
            st.has_tuple(*rel, &tuple)
        }
        Formula::Equal(x, y) => env[*x] == env[*y],
        Formula::Not(a) => !eval_formula(st, a, env),
        Formula::And(a, b) => eval_formula(st, a, env) && eval_formula(st, b, env),
        Formula::Or(a, b) => eval_formula(st, a, env) || eval_formula(st, b, env),
        Formula::Implies(a, b) => !eval_formula(st, a, env) || eval_formula(st, b, env),
    }
}

// ------------------------------------------------------- classification

fn negated_atom(f: &Formula) -> bool {
    matches!(f, Formula::Not(inner)
        if matches!(**inner, Formula::Atom { .. } | Formula::Equal(..)))
}

fn anti_identity_matrix(f: &Formula) -> bool {
    match f {
        Formula::Or(a, b) => anti_identity_matrix(a) && anti_identity_matrix(b),
        other => negated_atom(other),
    }
}

/// Syntactic shape of an axiom. Negated equality atoms inside a
/// disjunction still count as an anti-identity.
pub fn classify_axiom(s: &Sentence) -> AxiomClass {
    let all_forall = s
        .prefix
        .iter()
        .all(|(q, _)| *q == Quantifier::Forall);
    if !all_forall {
        return AxiomClass::Other;
    }
    if s.prefix.len() == 1 {
        if let Formula::Atom { args, .. } = &s.matrix {
            if args.iter().all(|&v| v == 0) {
                return AxiomClass::Reflexivity;
            }
        }
    }
    if !s.prefix.is_empty() && anti_identity_matrix(&s.matrix) {
        return AxiomClass::AntiIdentity;
    }
    if let Formula::Implies(p, c) = &s.matrix {
        if let (Formula::Atom { args: pa, .. }, Formula::Atom { args: ca, .. }) = (&**p, &**c) {
            let pvars: BTreeSet<usize> = pa.iter().copied().collect();
            let distinct = pvars.len() == pa.len();
            let covers = pvars.len() == s.prefix.len();
            let inside = ca.iter().all(|v| pvars.contains(v));
            if distinct && covers && inside {
                return AxiomClass::PinchSafeImplication;
            }
        }
    }
    AxiomClass::Other
}

// ---------------------------------------------------------- closure lab

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosureEntry {
    pub axiom: usize,
    pub construction: String,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosureReport {
    pub entries: Vec<ClosureEntry>,
    pub failures: usize,
    /// Axioms classified OTHER: their closure status is empirical
    /// only, with no syntactic guarantee behind it.
    pub empirical_only: Vec<usize>,
}

/// Evaluate every axiom on the pinches, side substructures, and
/// pairwise disjoint unions of the samples. Every sample must satisfy
/// every axiom up front.
pub fn check_closure(
    axioms: &[Sentence],
    samples: &[(String, RelStructure)],
    max_n: usize,
    bounds: &Bounds,
) -> Result<ClosureReport, LogicError> {
    for (name, sample) in samples {
        for (i, axiom) in axioms.iter().enumerate() {
            if !models(sample, axiom, bounds)? {
                return Err(LogicError::SampleViolatesAxiom {
                    sample: name.clone(),
                    axiom: i,
                });
            }
        }
    }
    let mut targets: Vec<(String, RelStructure)> = Vec::new();
    for (name, sample) in samples {
        for n in 1..=max_n {
            let pinch = constructions::n_pinch(sample, n, bounds)?;
            targets.push((format!("pinch({name},n={n})"), pinch.structure().clone()));
            let (right, _) = constructions::b_right(&pinch)?;
            targets.push((format!("b_right(pinch({name},n={n}))"), right));
            let (left, _) = constructions::b_left(&pinch)?;
            targets.push((format!("b_left(pinch({name},n={n}))"), left));
        }
    }
    for (i, (ni, si)) in samples.iter().enumerate() {
        for (nj, sj) in samples.iter().skip(i) {
            let sig = Arc::clone(si.signature());
            let (u, _) = constructions::disjoint_union(&sig, &[si.clone(), sj.clone()])?;
            targets.push((format!("union({ni},{nj})"), u));
        }
    }
    let mut entries = Vec::new();
    let mut failures = 0;
    for (i, axiom) in axioms.iter().enumerate() {
        for (label, target) in &targets {
            let holds = models(target, axiom, bounds)?;
            if !holds {
                failures += 1;
            }
            entries.push(ClosureEntry {
                axiom: i,
                construction: label.clone(),
                holds,
            });
        }
    }
    let empirical_only = axioms
        .iter()
        .enumerate()
        .filter(|(_, a)| classify_axiom(a) == AxiomClass::Other)
        .map(|(i, _)| i)
        .collect();
    Ok(ClosureReport {
        entries,
        failures,
        empirical_only,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn graph_sig() -> Arc<Signature> {
        catalog::graph_signature()
    }

    fn parse(text: &str) -> Sentence {
        parse_sentence(text, &graph_sig()).unwrap()
    }

    #[test]
    fn parses_simple_shapes() {
        let s = parse("forall x . ~E(x,x)");
        assert_eq!(s.quantifier_count(), 1);
        assert_eq!(
            *s.matrix(),
            Formula::Not(Box::new(Formula::Atom {
                rel: 0,
                args: vec![0, 0]
            }))
        );
        let s = parse("forall x y . E(x,y) -> E(y,x)");
        assert!(matches!(s.matrix(), Formula::Implies(..)));
    }

    #[test]
    fn precedence_and_associativity() {
        let s = parse("forall x y . ~E(x,x) & E(x,y) | E(y,x) -> E(x,x)");
        // ((~E(x,x) & E(x,y)) | E(y,x)) -> E(x,x)
        match s.matrix() {
            Formula::Implies(lhs, _) => match &**lhs {
                Formula::Or(l, _) => assert!(matches!(&**l, Formula::And(..))),
                other => panic!("expected Or, got {other:?}"),
            },
            other => panic!("expected Implies, got {other:?}"),
        }
        let s = parse("forall x y z . E(x,y) -> E(y,z) -> E(x,z)");
        match s.matrix() {
            Formula::Implies(_, rhs) => assert!(matches!(&**rhs, Formula::Implies(..))),
            other => panic!("expected Implies, got {other:?}"),
        }
    }

    #[test]
    fn parse_errors_carry_positions() {
        let e = parse_sentence("forall x . E(x y)", &graph_sig()).unwrap_err();
        assert_eq!((e.line, e.col), (1, 16));
        assert!(parse_sentence("forall x . Q(x)", &graph_sig()).is_err());
        assert!(parse_sentence("forall x . E(x)", &graph_sig()).is_err());
        assert!(parse_sentence("forall x . E(x,y)", &graph_sig()).is_err());
        assert!(parse_sentence("forall x x . E(x,x)", &graph_sig()).is_err());
        assert!(parse_sentence("forall x . E(x,x) extra", &graph_sig()).is_err());
    }

    #[test]
    fn evaluates_standard_examples() {
        let b = Bounds::default();
        let no_loops = parse("forall x . ~E(x,x)");
        assert!(models(&catalog::k(2), &no_loops, &b).unwrap());
        assert!(!models(&catalog::loop_point(), &no_loops, &b).unwrap());
        let symmetric = parse("forall x y . E(x,y) -> E(y,x)");
        assert!(models(&catalog::k(2), &symmetric, &b).unwrap());
        assert!(!models(&catalog::directed_cycle(3), &symmetric, &b).unwrap());
        let has_loop = parse("exists x . E(x,x)");
        assert!(models(&catalog::loop_point(), &has_loop, &b).unwrap());
        assert!(!models(&catalog::k(3), &has_loop, &b).unwrap());
    }

    #[test]
    fn empty_universe_and_equality() {
        let b = Bounds::default();
        let empty = RelStructure::empty(graph_sig(), 0);
        assert!(models(&empty, &parse("forall x . E(x,x)"), &b).unwrap());
        assert!(!models(&empty, &parse("exists x . x = x"), &b).unwrap());
        let one = catalog::point();
        assert!(models(&one, &parse("forall x y . x = y"), &b).unwrap());
        assert!(!models(&catalog::k(2), &parse("forall x y . x = y"), &b).unwrap());
    }

    #[test]
    fn eval_budget_guard() {
        let tight = Bounds {
            eval_budget: 7,
            ..Bounds::default()
        };
        let s = parse("forall x y z . E(x,y) | E(y,z) | E(z,x) | x = y");
        let err = models(&catalog::k(2), &s, &tight).unwrap_err();
        assert_eq!(
            err,
            LogicError::EvalBudget {
                needed: 8,
                budget: 7
            }
        );
    }

    #[test]
    fn classification_examples() {
        assert_eq!(classify_axiom(&parse("forall x . E(x,x)")), AxiomClass::Reflexivity);
        assert_eq!(
            classify_axiom(&parse("forall x y . ~E(x,x) | ~E(y,y)")),
            AxiomClass::AntiIdentity
        );
        assert_eq!(
            classify_axiom(&parse("forall x . ~E(x,x)")),
            AxiomClass::AntiIdentity
        );
        assert_eq!(
            classify_axiom(&parse("forall x y . ~E(x,y) | ~(x = y)")),
            AxiomClass::AntiIdentity
        );
        assert_eq!(
            classify_axiom(&parse("forall x y . E(x,y) -> E(y,x)")),
            AxiomClass::PinchSafeImplication
        );
        assert_eq!(
            classify_axiom(&parse("forall x . E(x,x) -> E(x,x)")),
            AxiomClass::Other
        );
        assert_eq!(classify_axiom(&parse("exists x . E(x,x)")), AxiomClass::Other);
        assert_eq!(
            classify_axiom(&parse("forall x y . E(x,y) -> E(x,x)")),
            AxiomClass::PinchSafeImplication
        );
        assert_eq!(
            classify_axiom(&parse("forall x y z . E(x,y) -> E(y,x)")),
            AxiomClass::Other
        );
    }

    #[test]
    fn rendering_round_trips() {
        for text in [
            "forall x . ~E(x,x)",
            "forall x y . E(x,y) -> E(y,x)",
            "forall x y . ~E(x,x) | ~E(y,y)",
            "forall x exists y . E(x,y)",
            "forall x y . (E(x,y) -> E(y,x)) -> E(x,x)",
            "forall x y z . E(x,y) & (E(y,z) | E(z,x)) -> x = y",
            "forall x . ~(E(x,x) & E(x,x))",
        ] {
            let s = parse(text);
            let printed = s.to_string();
            let again = parse(&printed);
            assert_eq!(s, again, "round trip failed for {text} -> {printed}");
        }
    }

    #[test]
    fn closure_on_simple_graphs() {
        let b = Bounds::default();
        let axioms = vec![
            parse("forall x . ~E(x,x)"),
            parse("forall x y . E(x,y) -> E(y,x)"),
        ];
        let samples = vec![
            ("k2".to_string(), catalog::k(2)),
            ("k3".to_string(), catalog::k(3)),
        ];
        let report = check_closure(&axioms, &samples, 2, &b).unwrap();
        assert_eq!(report.failures, 0);
        assert!(report.empirical_only.is_empty());
        // 2 axioms x (2 samples x 2 n x 3 constructions + 3 unions).
        assert_eq!(report.entries.len(), 2 * (2 * 2 * 3 + 3));
    }

    #[test]
    fn closure_flags_empirical_axioms_and_bad_samples() {
        let b = Bounds::default();
        let axioms = vec![parse("exists x . E(x,x)")];
        let samples = vec![("loop".to_string(), catalog::loop_point())];
        let report = check_closure(&axioms, &samples, 2, &b).unwrap();
        assert_eq!(report.empirical_only, vec![0]);
        assert_eq!(report.failures, 0);
        let err = check_closure(&axioms, &[("k2".into(), catalog::k(2))], 1, &b).unwrap_err();
        assert!(matches!(err, LogicError::SampleViolatesAxiom { .. }));
    }

    #[test]
    fn reflexivity_closure_on_loop() {
        let b = Bounds::default();
        let axioms = vec![parse("forall x . E(x,x)")];
        let samples = vec![("loop".to_string(), catalog::loop_point())];
        let report = check_closure(&axioms, &samples, 3, &b).unwrap();
        assert_eq!(report.failures, 0);
    }
}
