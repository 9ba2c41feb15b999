//! LTL over gene atoms: parsing, binding, exact evaluation on lasso runs and
//! three-valued evaluation on finite prefixes.
//!
//! The grammar: `!` not, `&` and, `|` or, `->` implies, `U` until, `F`
//! eventually, `G` globally, `X` next, parentheses, `true`/`false` literals,
//! gene identifiers as atoms. Precedence (tightest first): unary operators,
//! `U` (right-associative), `&`, `|`, `->` (right-associative).
//!
//! `X` is accepted by default even though several published property sets
//! avoid it; [`Ltl::uses_next`] lets front ends warn about it.

use crate::model::{GrnSpace, GrnState, LassoRun};
use std::fmt;
use thiserror::Error;

/// An LTL formula over atoms of type `A`. Parsing produces `Ltl<String>`
/// (gene names); binding to a space yields `Ltl<usize>` (gene indices).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Ltl<A> {
    True,
    False,
    Atom(A),
    Not(Box<Ltl<A>>),
    And(Box<Ltl<A>>, Box<Ltl<A>>),
    Or(Box<Ltl<A>>, Box<Ltl<A>>),
    Implies(Box<Ltl<A>>, Box<Ltl<A>>),
    Next(Box<Ltl<A>>),
    Eventually(Box<Ltl<A>>),
    Globally(Box<Ltl<A>>),
    Until(Box<Ltl<A>>, Box<Ltl<A>>),
}

/// Parser output: atoms are gene names.
pub type LtlFormula = Ltl<String>;
/// Evaluation input: atoms are gene indices of a particular space.
pub type BoundLtl = Ltl<usize>;

/// Three-valued verdict of a formula on a finite prefix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    True,
    False,
    /// The prefix is too short to decide the formula.
    Undefined,
}

impl Verdict {
    pub fn negate(self) -> Verdict {
        match self {
            Verdict::True => Verdict::False,
            Verdict::False => Verdict::True,
            Verdict::Undefined => Verdict::Undefined,
        }
    }

    fn and(self, other: Verdict) -> Verdict {
        match (self, other) {
            (Verdict::False, _) | (_, Verdict::False) => Verdict::False,
            (Verdict::True, Verdict::True) => Verdict::True,
            _ => Verdict::Undefined,
        }
    }

    fn or(self, other: Verdict) -> Verdict {
        match (self, other) {
            (Verdict::True, _) | (_, Verdict::True) => Verdict::True,
            (Verdict::False, Verdict::False) => Verdict::False,
            _ => Verdict::Undefined,
        }
    }

    /// Definite verdicts convert to booleans.
    pub fn as_bool(self) -> Option<bool> {
        match self {
            Verdict::True => Some(true),
            Verdict::False => Some(false),
            Verdict::Undefined => None,
        }
    }
}

impl From<bool> for Verdict {
    fn from(b: bool) -> Verdict {
        if b {
            Verdict::True
        } else {
            Verdict::False
        }
    }
}

/// Syntax error with a byte offset into the input.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
#[error("LTL syntax error at offset {position}: {message}")]
pub struct LtlParseError {
    pub position: usize,
    pub message: String,
}

/// An atom does not name a gene of the target space.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
#[error("unknown gene {name:?} in LTL formula")]
pub struct LtlBindError {
    pub name: String,
}

impl<A> Ltl<A> {
    /// Whether the formula contains the next operator anywhere.
    pub fn uses_next(&self) -> bool {
        match self {
            Ltl::True | Ltl::False | Ltl::Atom(_) => false,
            Ltl::Next(_) => true,
            Ltl::Not(a) | Ltl::Eventually(a) | Ltl::Globally(a) => a.uses_next(),
            Ltl::And(a, b) | Ltl::Or(a, b) | Ltl::Implies(a, b) | Ltl::Until(a, b) => {
                a.uses_next() || b.uses_next()
            }
        }
    }

    /// Rewrites atoms, preserving structure.
    pub fn map_atoms<B>(&self, f: &mut impl FnMut(&A) -> B) -> Ltl<B> {
        match self {
            Ltl::True => Ltl::True,
            Ltl::False => Ltl::False,
            Ltl::Atom(a) => Ltl::Atom(f(a)),
            Ltl::Not(x) => Ltl::Not(Box::new(x.map_atoms(f))),
            Ltl::And(x, y) => Ltl::And(Box::new(x.map_atoms(f)), Box::new(y.map_atoms(f))),
            Ltl::Or(x, y) => Ltl::Or(Box::new(x.map_atoms(f)), Box::new(y.map_atoms(f))),
            Ltl::Implies(x, y) => {
                Ltl::Implies(Box::new(x.map_atoms(f)), Box::new(y.map_atoms(f)))
            }
            Ltl::Next(x) => Ltl::Next(Box::new(x.map_atoms(f))),
            Ltl::Eventually(x) => Ltl::Eventually(Box::new(x.map_atoms(f))),
            Ltl::Globally(x) => Ltl::Globally(Box::new(x.map_atoms(f))),
            Ltl::Until(x, y) => Ltl::Until(Box::new(x.map_atoms(f)), Box::new(y.map_atoms(f))),
        }
    }
}

impl LtlFormula {
    /// Resolves atom names against a space's genes.
    pub fn bind(&self, space: &GrnSpace) -> Result<BoundLtl, LtlBindError> {
        let mut missing = None;
        let bound = self.map_atoms(&mut |name: &String| match space.gene_index(name) {
            Some(i) => i,
            None => {
                if missing.is_none() {
                    missing = Some(name.clone());
                }
                usize::MAX
            }
        });
        match missing {
            Some(name) => Err(LtlBindError { name }),
            None => Ok(bound),
        }
    }
}

impl fmt::Display for LtlFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // Fully parenthesized except atoms; good enough for diagnostics.
        match self {
            Ltl::True => write!(f, "true"),
            Ltl::False => write!(f, "false"),
            Ltl::Atom(a) => write!(f, "{a}"),
            Ltl::Not(x) => write!(f, "!{x}"),
            Ltl::And(x, y) => write!(f, "({x} & {y})"),
            Ltl::Or(x, y) => write!(f, "({x} | {y})"),
            Ltl::Implies(x, y) => write!(f, "({x} -> {y})"),
            Ltl::Next(x) => write!(f, "X {x}"),
            Ltl::Eventually(x) => write!(f, "F {x}"),
            Ltl::Globally(x) => write!(f, "G {x}"),
            Ltl::Until(x, y) => write!(f, "({x} U {y})"),
        }
    }
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Ident(String),
    True,
    False,
    Not,
    And,
    Or,
    Implies,
    Next,
    Eventually,
    Globally,
    Until,
    LParen,
    RParen,
}

struct Lexer<'a> {
    text: &'a str,
    tokens: Vec<(Token, usize)>,
}

impl<'a> Lexer<'a> {
    fn run(text: &'a str) -> Result<Vec<(Token, usize)>, LtlParseError> {
        let mut lx = Lexer {
            text,
            tokens: Vec::new(),
        };
        lx.scan()?;
        Ok(lx.tokens)
    }

    fn scan(&mut self) -> Result<(), LtlParseError> {
        let bytes = self.text.as_bytes();
        let mut i = 0;
        while i < bytes.len() {
            let c = bytes[i] as char;
            match c {
                ' ' | '\t' | '\n' | '\r' => i += 1,
                '(' => {
                    self.tokens.push((Token::LParen, i));
                    i += 1;
                }
                ')' => {
                    self.tokens.push((Token::RParen, i));
                    i += 1;
                }
                '!' => {
                    self.tokens.push((Token::Not, i));
                    i += 1;
                }
                '&' => {
                    self.tokens.push((Token::And, i));
                    i += 1;
                }
                '|' => {
                    self.tokens.push((Token::Or, i));
                    i += 1;
                }
                '-' => {
                    if bytes.get(i + 1) == Some(&b'>') {
                        self.tokens.push((Token::Implies, i));
                        i += 2;
                    } else {
                        return Err(LtlParseError {
                            position: i,
                            message: "expected '->'".into(),
                        });
                    }
                }
                c if c.is_ascii_alphabetic() || c == '_' => {
                    let start = i;
                    while i < bytes.len()
                        && ((bytes[i] as char).is_ascii_alphanumeric() || bytes[i] == b'_')
                    {
                        i += 1;
                    }
                    let word = &self.text[start..i];
                    let tok = match word {
                        "true" => Token::True,
                        "false" => Token::False,
                        "U" => Token::Until,
                        "F" => Token::Eventually,
                        "G" => Token::Globally,
                        "X" => Token::Next,
                        _ => Token::Ident(word.to_string()),
                    };
                    self.tokens.push((tok, start));
                }
                _ => {
                    return Err(LtlParseError {
                        position: i,
                        message: format!("unexpected character {c:?}"),
                    })
                }
            }
        }
        Ok(())
    }
}

struct Parser {
    tokens: Vec<(Token, usize)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(t, _)| t)
    }

    fn here(&self) -> usize {
        self.tokens
            .get(self.pos)
            .map(|&(_, p)| p)
            .unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).map(|(t, _)| t.clone());
        self.pos += 1;
        t
    }

    fn err(&self, message: impl Into<String>) -> LtlParseError {
        LtlParseError {
            position: self.here(),
            message: message.into(),
        }
    }

    // implies := or ('->' implies)?
    fn implies(&mut self) -> Result<LtlFormula, LtlParseError> {
        let lhs = self.or()?;
        if self.peek() == Some(&Token::Implies) {
            self.bump();
            let rhs = self.implies()?;
            return Ok(Ltl::Implies(Box::new(lhs), Box::new(rhs)));
        }
        Ok(lhs)
    }

    // or := and ('|' and)*
    fn or(&mut self) -> Result<LtlFormula, LtlParseError> {
        let mut lhs = self.and()?;
        while self.peek() == Some(&Token::Or) {
            self.bump();
            let rhs = self.and()?;
            lhs = Ltl::Or(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    // and := until ('&' until)*
    fn and(&mut self) -> Result<LtlFormula, LtlParseError> {
        let mut lhs = self.until()?;
        while self.peek() == Some(&Token::And) {
            self.bump();
            let rhs = self.until()?;
            lhs = Ltl::And(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    // until := unary ('U' until)?   (right-associative)
    fn until(&mut self) -> Result<LtlFormula, LtlParseError> {
        let lhs = self.unary()?;
        if self.peek() == Some(&Token::Until) {
            self.bump();
            let rhs = self.until()?;
            return Ok(Ltl::Until(Box::new(lhs), Box::new(rhs)));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<LtlFormula, LtlParseError> {
        match self.peek() {
            Some(Token::Not) => {
                self.bump();
                Ok(Ltl::Not(Box::new(self.unary()?)))
            }
            Some(Token::Next) => {
                self.bump();
                Ok(Ltl::Next(Box::new(self.unary()?)))
            }
            Some(Token::Eventually) => {
                self.bump();
                Ok(Ltl::Eventually(Box::new(self.unary()?)))
            }
            Some(Token::Globally) => {
                self.bump();
                Ok(Ltl::Globally(Box::new(self.unary()?)))
            }
            _ => self.primary(),
        }
    }

    fn primary(&mut self) -> Result<LtlFormula, LtlParseError> {
        match self.bump() {
            Some(Token::True) => Ok(Ltl::True),
            Some(Token::False) => Ok(Ltl::False),
            Some(Token::Ident(name)) => Ok(Ltl::Atom(name)),
            Some(Token::LParen) => {
                let inner = self.implies()?;
                match self.bump() {
                    Some(Token::RParen) => Ok(inner),
                    _ => {
                        self.pos -= 1;
                        Err(self.err("expected ')'"))
                    }
                }
            }
            Some(tok) => {
                self.pos -= 1;
                Err(self.err(format!("unexpected token {tok:?}")))
            }
            None => Err(self.err("unexpected end of formula")),
        }
    }
}

/// Parses an LTL formula; atoms stay as gene names until bound to a space.
pub fn parse_ltl(text: &str) -> Result<LtlFormula, LtlParseError> {
    let tokens = Lexer::run(text)?;
    let mut p = Parser {
        tokens,
        pos: 0,
        end: text.len(),
    };
    let formula = p.implies()?;
    if p.pos != p.tokens.len() {
        return Err(p.err("trailing input after formula"));
    }
    Ok(formula)
}

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

/// Exact truth of `phi` on the infinite unrolling of a lasso run, decided at
/// position 0. Subformulas are evaluated at every stored position; `Until`
/// takes its least fixpoint on the loop.
pub fn eval_lasso(phi: &BoundLtl, run: &LassoRun) -> bool {
    assert!(!run.states.is_empty(), "lasso run must be nonempty");
    eval_lasso_positions(phi, run)[0]
}

fn eval_lasso_positions(phi: &BoundLtl, run: &LassoRun) -> Vec<bool> {
    let n = run.states.len();
    let loop_start = run.loop_start;
    match phi {
        Ltl::True => vec![true; n],
        Ltl::False => vec![false; n],
        Ltl::Atom(g) => run.states.iter().map(|s| s.is_active(*g)).collect(),
        Ltl::Not(a) => {
            let mut v = eval_lasso_positions(a, run);
            v.iter_mut().for_each(|b| *b = !*b);
            v
        }
        Ltl::And(a, b) => {
            let va = eval_lasso_positions(a, run);
            let vb = eval_lasso_positions(b, run);
            va.iter().zip(&vb).map(|(&x, &y)| x && y).collect()
        }
        Ltl::Or(a, b) => {
            let va = eval_lasso_positions(a, run);
            let vb = eval_lasso_positions(b, run);
            va.iter().zip(&vb).map(|(&x, &y)| x || y).collect()
        }
        Ltl::Implies(a, b) => {
            let va = eval_lasso_positions(a, run);
            let vb = eval_lasso_positions(b, run);
            va.iter().zip(&vb).map(|(&x, &y)| !x || y).collect()
        }
        Ltl::Next(a) => {
            let va = eval_lasso_positions(a, run);
            (0..n).map(|i| va[run.succ(i)]).collect()
        }
        Ltl::Eventually(a) => {
            let va = eval_lasso_positions(a, run);
            // From inside the loop every loop position lies in the future.
            let in_loop = va[loop_start..].iter().any(|&b| b);
            let mut v = vec![false; n];
            for i in (0..n).rev() {
                v[i] = if i >= loop_start {
                    in_loop
                } else {
                    va[i] || v[i + 1]
                };
            }
            v
        }
        Ltl::Globally(a) => {
            let va = eval_lasso_positions(a, run);
            let in_loop = va[loop_start..].iter().all(|&b| b);
            let mut v = vec![false; n];
            for i in (0..n).rev() {
                v[i] = if i >= loop_start {
                    in_loop
                } else {
                    va[i] && v[i + 1]
                };
            }
            v
        }
        Ltl::Until(a, b) => {
            let va = eval_lasso_positions(a, run);
            let vb = eval_lasso_positions(b, run);
            let mut v = vec![false; n];
            // Least fixpoint of v = b | (a & v after succ) on the loop: start
            // from all-false and iterate backward passes until stable. Each
            // pass extends witnesses one loop traversal further, so loop_len
            // passes suffice.
            let loop_len = n - loop_start;
            for _ in 0..=loop_len {
                let mut changed = false;
                for i in (loop_start..n).rev() {
                    let next = v[run.succ(i)];
                    let nv = vb[i] || (va[i] && next);
                    if nv != v[i] {
                        v[i] = nv;
                        changed = true;
                    }
                }
                if !changed {
                    break;
                }
            }
            for i in (0..loop_start).rev() {
                v[i] = vb[i] || (va[i] && v[i + 1]);
            }
            v
        }
    }
}

/// Conservative three-valued verdict of `phi` on a finite prefix: `True` or
/// `False` only when every infinite extension of the prefix agrees, else
/// `Undefined`.
pub fn eval_prefix(phi: &BoundLtl, states: &[GrnState]) -> Verdict {
    assert!(!states.is_empty(), "prefix must be nonempty");
    eval_prefix_positions(phi, states)[0]
}

fn eval_prefix_positions(phi: &BoundLtl, states: &[GrnState]) -> Vec<Verdict> {
    let n = states.len();
    match phi {
        Ltl::True => vec![Verdict::True; n],
        Ltl::False => vec![Verdict::False; n],
        Ltl::Atom(g) => states.iter().map(|s| s.is_active(*g).into()).collect(),
        Ltl::Not(a) => eval_prefix_positions(a, states)
            .into_iter()
            .map(Verdict::negate)
            .collect(),
        Ltl::And(a, b) => {
            let va = eval_prefix_positions(a, states);
            let vb = eval_prefix_positions(b, states);
            va.into_iter().zip(vb).map(|(x, y)| x.and(y)).collect()
        }
        Ltl::Or(a, b) => {
            let va = eval_prefix_positions(a, states);
            let vb = eval_prefix_positions(b, states);
            va.into_iter().zip(vb).map(|(x, y)| x.or(y)).collect()
        }
        Ltl::Implies(a, b) => {
            let va = eval_prefix_positions(a, states);
            let vb = eval_prefix_positions(b, states);
            va.into_iter()
                .zip(vb)
                .map(|(x, y)| x.negate().or(y))
                .collect()
        }
        Ltl::Next(a) => {
            let va = eval_prefix_positions(a, states);
            (0..n)
                .map(|i| {
                    if i + 1 < n {
                        va[i + 1]
                    } else {
                        Verdict::Undefined
                    }
                })
                .collect()
        }
        Ltl::Eventually(a) => {
            let va = eval_prefix_positions(a, states);
            let mut acc = Verdict::Undefined; // unknown future beyond the end
            let mut v = vec![Verdict::Undefined; n];
            for i in (0..n).rev() {
                acc = va[i].or(acc);
                v[i] = acc;
            }
            v
        }
        Ltl::Globally(a) => {
            let va = eval_prefix_positions(a, states);
            let mut acc = Verdict::Undefined;
            let mut v = vec![Verdict::Undefined; n];
            for i in (0..n).rev() {
                acc = va[i].and(acc);
                v[i] = acc;
            }
            v
        }
        Ltl::Until(a, b) => {
            let va = eval_prefix_positions(a, states);
            let vb = eval_prefix_positions(b, states);
            let mut acc = Verdict::Undefined;
            let mut v = vec![Verdict::Undefined; n];
            for i in (0..n).rev() {
                acc = vb[i].or(va[i].and(acc));
                v[i] = acc;
            }
            v
        }
    }
}
