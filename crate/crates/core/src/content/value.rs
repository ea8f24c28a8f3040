use std::cmp::Ordering;
use std::fmt;

use chrono::NaiveDate;

use super::types::{AtomicKind, TypeExpr};
use crate::syntax::write_string_literal;

/// A first-order content value. Function types exist only in schemas, so
/// there is no runtime function value.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Val {
    Text(String),
    Markup(String),
    Int(i64),
    Bool(bool),
    Date(NaiveDate),
    Uri(String),
    Finite { domain: String, literal: String },
    Tuple(Vec<Val>),
    Seq(Vec<Val>),
    Inj { tag: String, value: Box<Val> },
}

/// The coarse type of a value: enough to decide whether two values may be
/// compared, or whether a rebinding keeps an identifier's type. Sequence
/// element types and injection tags are erased, so the relation is an
/// equivalence even for empty sequences.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Shape {
    Atomic(AtomicKind),
    Finite(String),
    Tuple(Vec<Shape>),
    Seq,
    Inj,
}

impl Val {
    pub fn text(s: impl Into<String>) -> Val {
        Val::Text(s.into())
    }

    pub fn markup(s: impl Into<String>) -> Val {
        Val::Markup(s.into())
    }

    pub fn uri(s: impl Into<String>) -> Val {
        Val::Uri(s.into())
    }

    pub fn finite(domain: impl Into<String>, literal: impl Into<String>) -> Val {
        Val::Finite {
            domain: domain.into(),
            literal: literal.into(),
        }
    }

    pub fn inj(tag: impl Into<String>, value: Val) -> Val {
        Val::Inj {
            tag: tag.into(),
            value: Box::new(value),
        }
    }

    pub fn date(y: i32, m: u32, d: u32) -> Option<Val> {
        NaiveDate::from_ymd_opt(y, m, d).map(Val::Date)
    }

    pub fn shape(&self) -> Shape {
        match self {
            Val::Text(_) => Shape::Atomic(AtomicKind::Text),
            Val::Markup(_) => Shape::Atomic(AtomicKind::Markup),
            Val::Int(_) => Shape::Atomic(AtomicKind::Int),
            Val::Bool(_) => Shape::Atomic(AtomicKind::Bool),
            Val::Date(_) => Shape::Atomic(AtomicKind::Date),
            Val::Uri(_) => Shape::Atomic(AtomicKind::Uri),
            Val::Finite { domain, .. } => Shape::Finite(domain.clone()),
            Val::Tuple(items) => Shape::Tuple(items.iter().map(Val::shape).collect()),
            Val::Seq(_) => Shape::Seq,
            Val::Inj { .. } => Shape::Inj,
        }
    }

    pub fn is_atomic(&self) -> bool {
        matches!(self.shape(), Shape::Atomic(_) | Shape::Finite(_))
    }

    /// Total order between values of the same shape; `None` across shapes.
    ///
    /// Dates follow the calendar, strings compare byte-wise on their UTF-8
    /// encoding, `false < true`, composites compare lexicographically.
    pub fn compare(&self, other: &Val) -> Option<Ordering> {
        match (self, other) {
            (Val::Text(a), Val::Text(b))
            | (Val::Markup(a), Val::Markup(b))
            | (Val::Uri(a), Val::Uri(b)) => Some(a.as_bytes().cmp(b.as_bytes())),
            (Val::Int(a), Val::Int(b)) => Some(a.cmp(b)),
            (Val::Bool(a), Val::Bool(b)) => Some(a.cmp(b)),
            (Val::Date(a), Val::Date(b)) => Some(a.cmp(b)),
            (
                Val::Finite {
                    domain: da,
                    literal: la,
                },
                Val::Finite {
                    domain: db,
                    literal: lb,
                },
            ) if da == db => Some(la.as_bytes().cmp(lb.as_bytes())),
            (Val::Tuple(xs), Val::Tuple(ys)) if xs.len() == ys.len() => {
                for (x, y) in xs.iter().zip(ys) {
                    match x.compare(y)? {
                        Ordering::Equal => continue,
                        ord => return Some(ord),
                    }
                }
                Some(Ordering::Equal)
            }
            (Val::Seq(xs), Val::Seq(ys)) => {
                for (x, y) in xs.iter().zip(ys) {
                    match x.compare(y)? {
                        Ordering::Equal => continue,
                        ord => return Some(ord),
                    }
                }
                Some(xs.len().cmp(&ys.len()))
            }
            (Val::Inj { tag: ta, value: va }, Val::Inj { tag: tb, value: vb }) => {
                match ta.as_bytes().cmp(tb.as_bytes()) {
                    Ordering::Equal => va.compare(vb),
                    ord => Some(ord),
                }
            }
            _ => None,
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Val::Tuple(items) | Val::Seq(items) => {
                1 + items.iter().map(Val::depth).max().unwrap_or(0)
            }
            Val::Inj { value, .. } => 1 + value.depth(),
            _ => 1,
        }
    }
}

/// Structural typing judgement `v : t`. Total: never errors, never panics.
pub fn typecheck(v: &Val, t: &TypeExpr) -> bool {
    match (v, t) {
        (Val::Text(_), TypeExpr::Atomic(AtomicKind::Text))
        | (Val::Markup(_), TypeExpr::Atomic(AtomicKind::Markup))
        | (Val::Int(_), TypeExpr::Atomic(AtomicKind::Int))
        | (Val::Bool(_), TypeExpr::Atomic(AtomicKind::Bool))
        | (Val::Date(_), TypeExpr::Atomic(AtomicKind::Date))
        | (Val::Uri(_), TypeExpr::Atomic(AtomicKind::Uri)) => true,
        (Val::Finite { domain, literal }, TypeExpr::Finite { name, literals }) => {
            domain == name && literals.contains(literal)
        }
        (Val::Tuple(items), TypeExpr::Product(components)) => {
            items.len() == components.len()
                && items.iter().zip(components).all(|(v, t)| typecheck(v, t))
        }
        (Val::Seq(items), TypeExpr::Seq(elem)) => items.iter().all(|v| typecheck(v, elem)),
        (Val::Inj { tag, value }, TypeExpr::Sum(variants)) => variants
            .iter()
            .find(|(t, _)| t == tag)
            .is_some_and(|(_, ty)| typecheck(value, ty)),
        _ => false,
    }
}

/// Canonical literal syntax, accepted back by the literal parser.
impl fmt::Display for Val {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Val::Text(s) => write_string_literal(f, s),
            Val::Markup(s) => {
                f.write_str("markup")?;
                write_string_literal(f, s)
            }
            Val::Int(n) => write!(f, "{n}"),
            Val::Bool(b) => write!(f, "{b}"),
            Val::Date(d) => write!(f, "{}", d.format("%Y-%m-%d")),
            Val::Uri(s) => {
                f.write_str("uri")?;
                write_string_literal(f, s)
            }
            Val::Finite { domain, literal } => write!(f, "{domain}::{literal}"),
            Val::Tuple(items) => {
                f.write_str("(")?;
                write_vals(f, items)?;
                f.write_str(")")
            }
            Val::Seq(items) => {
                f.write_str("[")?;
                write_vals(f, items)?;
                f.write_str("]")
            }
            Val::Inj { tag, value } => write!(f, "inj {tag}({value})"),
        }
    }
}

fn write_vals(f: &mut fmt::Formatter<'_>, items: &[Val]) -> fmt::Result {
    for (i, v) in items.iter().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        write!(f, "{v}")?;
    }
    Ok(())
}
