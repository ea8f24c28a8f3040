use std::fmt;

use thiserror::Error;

use crate::syntax::{is_identifier, write_ident_list};

/// The standard (atomic) content domains.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AtomicKind {
    Text,
    Markup,
    Int,
    Bool,
    Date,
    Uri,
}

impl AtomicKind {
    pub const ALL: [AtomicKind; 6] = [
        AtomicKind::Text,
        AtomicKind::Markup,
        AtomicKind::Int,
        AtomicKind::Bool,
        AtomicKind::Date,
        AtomicKind::Uri,
    ];

    pub fn name(self) -> &'static str {
        match self {
            AtomicKind::Text => "Text",
            AtomicKind::Markup => "Markup",
            AtomicKind::Int => "Int",
            AtomicKind::Bool => "Bool",
            AtomicKind::Date => "Date",
            AtomicKind::Uri => "Uri",
        }
    }

    pub fn from_name(name: &str) -> Option<AtomicKind> {
        AtomicKind::ALL.into_iter().find(|k| k.name() == name)
    }
}

impl fmt::Display for AtomicKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TypeError {
    #[error("finite domain `{0}` must list at least one literal")]
    EmptyFinite(String),
    #[error("finite domain `{domain}` repeats literal `{literal}`")]
    DuplicateLiteral { domain: String, literal: String },
    #[error("product types need at least two components, got {0}")]
    ProductArity(usize),
    #[error("sum types need at least two variants, got {0}")]
    SumArity(usize),
    #[error("sum type repeats tag `{0}`")]
    DuplicateTag(String),
    #[error("`{0}` is not a valid identifier")]
    BadIdentifier(String),
}

/// A content type: a standard domain or one built with a domain constructor.
///
/// Equality is structural. Use the checked constructors ([`TypeExpr::finite`],
/// [`TypeExpr::product`], [`TypeExpr::sum`]) to uphold the arity and
/// distinctness invariants.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum TypeExpr {
    Atomic(AtomicKind),
    Finite { name: String, literals: Vec<String> },
    Fn(Box<TypeExpr>, Box<TypeExpr>),
    Product(Vec<TypeExpr>),
    Seq(Box<TypeExpr>),
    Sum(Vec<(String, TypeExpr)>),
}

impl TypeExpr {
    pub const TEXT: TypeExpr = TypeExpr::Atomic(AtomicKind::Text);
    pub const MARKUP: TypeExpr = TypeExpr::Atomic(AtomicKind::Markup);
    pub const INT: TypeExpr = TypeExpr::Atomic(AtomicKind::Int);
    pub const BOOL: TypeExpr = TypeExpr::Atomic(AtomicKind::Bool);
    pub const DATE: TypeExpr = TypeExpr::Atomic(AtomicKind::Date);
    pub const URI: TypeExpr = TypeExpr::Atomic(AtomicKind::Uri);

    pub fn finite<S: Into<String>>(
        name: impl Into<String>,
        literals: impl IntoIterator<Item = S>,
    ) -> Result<TypeExpr, TypeError> {
        let name = name.into();
        if !is_identifier(&name) {
            return Err(TypeError::BadIdentifier(name));
        }
        let literals: Vec<String> = literals.into_iter().map(Into::into).collect();
        if literals.is_empty() {
            return Err(TypeError::EmptyFinite(name));
        }
        for (i, lit) in literals.iter().enumerate() {
            if !is_identifier(lit) {
                return Err(TypeError::BadIdentifier(lit.clone()));
            }
            if literals[..i].contains(lit) {
                return Err(TypeError::DuplicateLiteral {
                    domain: name,
                    literal: lit.clone(),
                });
            }
        }
        Ok(TypeExpr::Finite { name, literals })
    }

    pub fn product(components: Vec<TypeExpr>) -> Result<TypeExpr, TypeError> {
        if components.len() < 2 {
            return Err(TypeError::ProductArity(components.len()));
        }
        Ok(TypeExpr::Product(components))
    }

    pub fn sum(variants: Vec<(String, TypeExpr)>) -> Result<TypeExpr, TypeError> {
        if variants.len() < 2 {
            return Err(TypeError::SumArity(variants.len()));
        }
        for (i, (tag, _)) in variants.iter().enumerate() {
            if !is_identifier(tag) {
                return Err(TypeError::BadIdentifier(tag.clone()));
            }
            if variants[..i].iter().any(|(t, _)| t == tag) {
                return Err(TypeError::DuplicateTag(tag.clone()));
            }
        }
        Ok(TypeExpr::Sum(variants))
    }

    pub fn seq(elem: TypeExpr) -> TypeExpr {
        TypeExpr::Seq(Box::new(elem))
    }

    pub fn func(dom: TypeExpr, cod: TypeExpr) -> TypeExpr {
        TypeExpr::Fn(Box::new(dom), Box::new(cod))
    }

    /// Re-checks the constructor invariants over the whole tree.
    pub fn validate(&self) -> Result<(), TypeError> {
        match self {
            TypeExpr::Atomic(_) => Ok(()),
            TypeExpr::Finite { name, literals } => {
                TypeExpr::finite(name.clone(), literals.iter().cloned()).map(|_| ())
            }
            TypeExpr::Fn(dom, cod) => {
                dom.validate()?;
                cod.validate()
            }
            TypeExpr::Product(components) => {
                if components.len() < 2 {
                    return Err(TypeError::ProductArity(components.len()));
                }
                components.iter().try_for_each(TypeExpr::validate)
            }
            TypeExpr::Seq(elem) => elem.validate(),
            TypeExpr::Sum(variants) => {
                TypeExpr::sum(variants.clone())?;
                variants.iter().try_for_each(|(_, t)| t.validate())
            }
        }
    }

    /// True if a function space occurs anywhere in the type.
    pub fn mentions_fn(&self) -> bool {
        match self {
            TypeExpr::Atomic(_) | TypeExpr::Finite { .. } => false,
            TypeExpr::Fn(..) => true,
            TypeExpr::Product(cs) => cs.iter().any(TypeExpr::mentions_fn),
            TypeExpr::Seq(elem) => elem.mentions_fn(),
            TypeExpr::Sum(vs) => vs.iter().any(|(_, t)| t.mentions_fn()),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            TypeExpr::Atomic(_) | TypeExpr::Finite { .. } => 1,
            TypeExpr::Fn(d, c) => 1 + d.depth().max(c.depth()),
            TypeExpr::Product(cs) => 1 + cs.iter().map(TypeExpr::depth).max().unwrap_or(0),
            TypeExpr::Seq(e) => 1 + e.depth(),
            TypeExpr::Sum(vs) => 1 + vs.iter().map(|(_, t)| t.depth()).max().unwrap_or(0),
        }
    }
}

/// Canonical concrete syntax, accepted back by the type parser.
impl fmt::Display for TypeExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TypeExpr::Atomic(kind) => write!(f, "{kind}"),
            TypeExpr::Finite { name, literals } => {
                write!(f, "enum {name} {{ ")?;
                write_ident_list(f, literals)?;
                f.write_str(" }")
            }
            TypeExpr::Fn(dom, cod) => write!(f, "Fn<{dom}, {cod}>"),
            TypeExpr::Product(components) => {
                f.write_str("(")?;
                for (i, c) in components.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{c}")?;
                }
                f.write_str(")")
            }
            TypeExpr::Seq(elem) => write!(f, "Seq<{elem}>"),
            TypeExpr::Sum(variants) => {
                f.write_str("Sum<")?;
                for (i, (tag, ty)) in variants.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{tag}: {ty}")?;
                }
                f.write_str(">")
            }
        }
    }
}
