//! Definition formulas over a single bound individual `v`.

use std::borrow::Cow;
use std::cmp::Ordering;
use std::fmt;

use thiserror::Error;

use super::object::DigitalObject;
use super::value::Val;
use crate::syntax::{Diagnostic, Parser, Tok};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CmpOp {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

impl CmpOp {
    pub const ALL: [CmpOp; 6] = [CmpOp::Eq, CmpOp::Ne, CmpOp::Lt, CmpOp::Le, CmpOp::Gt, CmpOp::Ge];

    pub fn symbol(self) -> &'static str {
        match self {
            CmpOp::Eq => "=",
            CmpOp::Ne => "!=",
            CmpOp::Lt => "<",
            CmpOp::Le => "<=",
            CmpOp::Gt => ">",
            CmpOp::Ge => ">=",
        }
    }

    pub fn holds(self, ord: Ordering) -> bool {
        match self {
            CmpOp::Eq => ord == Ordering::Equal,
            CmpOp::Ne => ord != Ordering::Equal,
            CmpOp::Lt => ord == Ordering::Less,
            CmpOp::Le => ord != Ordering::Greater,
            CmpOp::Gt => ord == Ordering::Greater,
            CmpOp::Ge => ord != Ordering::Less,
        }
    }

    pub(crate) fn from_tok(tok: &Tok) -> Option<CmpOp> {
        Some(match tok {
            Tok::Eq => CmpOp::Eq,
            Tok::Ne => CmpOp::Ne,
            Tok::Lt => CmpOp::Lt,
            Tok::Le => CmpOp::Le,
            Tok::Gt => CmpOp::Gt,
            Tok::Ge => CmpOp::Ge,
            _ => return None,
        })
    }
}

impl fmt::Display for CmpOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Operand {
    /// The bare individual `v`.
    Itself,
    /// `v.<slot>`
    Slot(String),
    /// `v.count`: cardinality of a collection individual.
    Count,
    Lit(Val),
}

impl fmt::Display for Operand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Operand::Itself => f.write_str("v"),
            Operand::Slot(s) => write!(f, "v.{s}"),
            Operand::Count => f.write_str("v.count"),
            Operand::Lit(v) => write!(f, "{v}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Predicate {
    Const(bool),
    Cmp(Operand, CmpOp, Operand),
    Not(Box<Predicate>),
    And(Box<Predicate>, Box<Predicate>),
    Or(Box<Predicate>, Box<Predicate>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PredicateError {
    #[error("unknown slot `{0}`")]
    UnknownSlot(String),
    #[error("slot `{0}` is unbound")]
    UnboundReference(String),
    #[error("cannot compare {left} with {right}")]
    Incomparable { left: Val, right: Val },
    #[error("the individual has no plain value; reference one of its slots")]
    NotAValue,
}

/// Something a predicate can be evaluated against.
pub trait Individual {
    fn itself(&self) -> Result<Cow<'_, Val>, PredicateError>;
    fn slot(&self, name: &str) -> Result<Cow<'_, Val>, PredicateError>;
    fn count(&self) -> Result<usize, PredicateError>;
}

impl Individual for Val {
    fn itself(&self) -> Result<Cow<'_, Val>, PredicateError> {
        Ok(Cow::Borrowed(self))
    }

    fn slot(&self, name: &str) -> Result<Cow<'_, Val>, PredicateError> {
        Err(PredicateError::UnknownSlot(name.to_string()))
    }

    fn count(&self) -> Result<usize, PredicateError> {
        match self {
            Val::Seq(items) => Ok(items.len()),
            _ => Err(PredicateError::UnknownSlot("count".into())),
        }
    }
}

impl Individual for DigitalObject {
    fn itself(&self) -> Result<Cow<'_, Val>, PredicateError> {
        Err(PredicateError::NotAValue)
    }

    fn slot(&self, name: &str) -> Result<Cow<'_, Val>, PredicateError> {
        match self.get(name) {
            None => Err(PredicateError::UnknownSlot(name.to_string())),
            Some(None) => Err(PredicateError::UnboundReference(name.to_string())),
            Some(Some(v)) => Ok(Cow::Borrowed(v)),
        }
    }

    fn count(&self) -> Result<usize, PredicateError> {
        Err(PredicateError::UnknownSlot("count".into()))
    }
}

impl Predicate {
    pub fn cmp(left: Operand, op: CmpOp, right: Operand) -> Predicate {
        Predicate::Cmp(left, op, right)
    }

    pub fn and(self, other: Predicate) -> Predicate {
        Predicate::And(Box::new(self), Box::new(other))
    }

    pub fn or(self, other: Predicate) -> Predicate {
        Predicate::Or(Box::new(self), Box::new(other))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(self) -> Predicate {
        Predicate::Not(Box::new(self))
    }

    /// Strict evaluation: both sides of a connective are always evaluated,
    /// so any failing reference is reported even when the other side would
    /// decide the result. Errors surface left to right.
    pub fn eval<I: Individual + ?Sized>(&self, v: &I) -> Result<bool, PredicateError> {
        match self {
            Predicate::Const(b) => Ok(*b),
            Predicate::Cmp(l, op, r) => {
                let lv = resolve(l, v)?;
                let rv = resolve(r, v)?;
                match lv.compare(&rv) {
                    Some(ord) => Ok(op.holds(ord)),
                    None => Err(PredicateError::Incomparable {
                        left: lv.into_owned(),
                        right: rv.into_owned(),
                    }),
                }
            }
            Predicate::Not(p) => Ok(!p.eval(v)?),
            Predicate::And(a, b) => {
                let a = a.eval(v)?;
                let b = b.eval(v)?;
                Ok(a && b)
            }
            Predicate::Or(a, b) => {
                let a = a.eval(v)?;
                let b = b.eval(v)?;
                Ok(a || b)
            }
        }
    }

    /// Connective depth: atoms have depth 0.
    pub fn depth(&self) -> usize {
        match self {
            Predicate::Const(_) | Predicate::Cmp(..) => 0,
            Predicate::Not(p) => 1 + p.depth(),
            Predicate::And(a, b) | Predicate::Or(a, b) => 1 + a.depth().max(b.depth()),
        }
    }

    /// Slot names referenced by `v.<slot>` operands, in first-occurrence order.
    pub fn referenced_slots(&self) -> Vec<&str> {
        fn walk<'a>(p: &'a Predicate, out: &mut Vec<&'a str>) {
            match p {
                Predicate::Const(_) => {}
                Predicate::Cmp(l, _, r) => {
                    for o in [l, r] {
                        if let Operand::Slot(s) = o {
                            if !out.contains(&s.as_str()) {
                                out.push(s);
                            }
                        }
                    }
                }
                Predicate::Not(p) => walk(p, out),
                Predicate::And(a, b) | Predicate::Or(a, b) => {
                    walk(a, out);
                    walk(b, out);
                }
            }
        }
        let mut out = Vec::new();
        walk(self, &mut out);
        out
    }
}

fn resolve<'a, I: Individual + ?Sized>(
    o: &'a Operand,
    v: &'a I,
) -> Result<Cow<'a, Val>, PredicateError> {
    match o {
        Operand::Itself => v.itself(),
        Operand::Slot(s) => v.slot(s),
        Operand::Count => Ok(Cow::Owned(Val::Int(v.count()? as i64))),
        Operand::Lit(l) => Ok(Cow::Borrowed(l)),
    }
}

fn is_atom(p: &Predicate) -> bool {
    matches!(p, Predicate::Const(_) | Predicate::Cmp(..))
}

impl fmt::Display for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Predicate::Const(b) => write!(f, "{b}"),
            Predicate::Cmp(l, op, r) => write!(f, "{l} {op} {r}"),
            Predicate::Not(p) if is_atom(p) => write!(f, "not {p}"),
            Predicate::Not(p) => write!(f, "not ({p})"),
            Predicate::And(a, b) | Predicate::Or(a, b) => {
                let word = if matches!(self, Predicate::And(..)) {
                    "and"
                } else {
                    "or"
                };
                // connectives associate to the left at equal precedence
                write!(f, "{a} {word} ")?;
                if matches!(**b, Predicate::And(..) | Predicate::Or(..)) {
                    write!(f, "({b})")
                } else {
                    write!(f, "{b}")
                }
            }
        }
    }
}

/// Formulas built from atoms with the shared connectives.
pub(crate) trait Connectives: Sized {
    fn constant(b: bool) -> Self;
    fn negate(self) -> Self;
    fn conj(self, other: Self) -> Self;
    fn disj(self, other: Self) -> Self;
}

impl Connectives for Predicate {
    fn constant(b: bool) -> Self {
        Predicate::Const(b)
    }

    fn negate(self) -> Self {
        self.not()
    }

    fn conj(self, other: Self) -> Self {
        self.and(other)
    }

    fn disj(self, other: Self) -> Self {
        self.or(other)
    }
}

/// Parses a predicate occupying the whole input.
pub fn parse_predicate(src: &str) -> Result<Predicate, Diagnostic> {
    let mut p = Parser::new(src)?;
    let pred = predicate(&mut p)?;
    p.skip_newlines();
    if !p.at_eof() {
        return Err(p.unexpected("`and`, `or` or end of predicate"));
    }
    Ok(pred)
}

/// Predicate grammar, shared with the model file parser. Newlines are
/// insignificant inside a predicate.
pub(crate) fn predicate(p: &mut Parser) -> Result<Predicate, Diagnostic> {
    generic_expr(p, &mut |p| comparison(p))
}

/// `expr := term (('and'|'or') term)*`, `term := ['not'] (atom | 'true' |
/// 'false' | '(' expr ')')`. The atom parser is supplied by the caller so
/// the context guards of personalization rules can reuse this shape.
pub(crate) fn generic_expr<T, F>(p: &mut Parser, atom: &mut F) -> Result<T, Diagnostic>
where
    T: Connectives,
    F: FnMut(&mut Parser) -> Result<T, Diagnostic>,
{
    let mut lhs = term(p, atom)?;
    loop {
        p.skip_newlines();
        if p.eat_keyword("and") {
            lhs = lhs.conj(term(p, atom)?);
        } else if p.eat_keyword("or") {
            lhs = lhs.disj(term(p, atom)?);
        } else {
            return Ok(lhs);
        }
    }
}

fn term<T, F>(p: &mut Parser, atom: &mut F) -> Result<T, Diagnostic>
where
    T: Connectives,
    F: FnMut(&mut Parser) -> Result<T, Diagnostic>,
{
    p.skip_newlines();
    let negate = p.eat_keyword("not");
    p.skip_newlines();
    let inner = if (p.at_keyword("true") || p.at_keyword("false"))
        && CmpOp::from_tok(p.peek_nth(1)).is_none()
    {
        T::constant(p.bump().tok == Tok::Ident("true".into()))
    } else if *p.peek() == Tok::LParen {
        // either a parenthesised formula or a comparison whose left operand
        // is a tuple literal
        let mark = p.mark();
        match atom(p) {
            Ok(cmp) => cmp,
            Err(_) => {
                p.reset(mark);
                p.bump();
                let inner = generic_expr(p, atom)?;
                p.expect_sig(&Tok::RParen)?;
                inner
            }
        }
    } else {
        atom(p)?
    };
    Ok(if negate { inner.negate() } else { inner })
}

fn comparison(p: &mut Parser) -> Result<Predicate, Diagnostic> {
    let left = operand(p)?;
    p.skip_newlines();
    let op = CmpOp::from_tok(p.peek()).ok_or_else(|| p.unexpected("a comparison operator"))?;
    p.bump();
    let right = operand(p)?;
    Ok(Predicate::Cmp(left, op, right))
}

fn operand(p: &mut Parser) -> Result<Operand, Diagnostic> {
    p.skip_newlines();
    if p.at_keyword("v") && *p.peek_nth(1) != Tok::PathSep {
        p.bump();
        if p.eat(&Tok::Dot) {
            let (name, _) = p.ident()?;
            return Ok(if name == "count" {
                Operand::Count
            } else {
                Operand::Slot(name)
            });
        }
        return Ok(Operand::Itself);
    }
    if p.at_literal() {
        return Ok(Operand::Lit(p.literal()?));
    }
    Err(p.unexpected("`v`, `v.<slot>` or a literal"))
}
