use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use super::compress::Member;
use super::types::TypeExpr;
use super::value::typecheck;

/// What the members of a variable domain are: typed values, or digital
/// objects of one class.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ElemType {
    Value(TypeExpr),
    Object(String),
}

impl fmt::Display for ElemType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ElemType::Value(t) => write!(f, "{t}"),
            ElemType::Object(class) => write!(f, "class {class}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DomainError {
    #[error("domain `{domain}` has no extent for assignment `{key}`")]
    UnknownAssignment { domain: String, key: String },
    #[error("member #{index} of extent `{key}` in domain `{domain}` is not of type {elem}")]
    IllTyped {
        domain: String,
        key: String,
        index: usize,
        elem: ElemType,
    },
}

/// An assignment-dependent collection: for every named context snapshot,
/// the extent of the domain under that assignment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VariableDomain {
    name: String,
    elem: ElemType,
    extents: BTreeMap<String, Vec<Member>>,
}

impl VariableDomain {
    pub fn new(
        name: impl Into<String>,
        elem: ElemType,
        extents: impl IntoIterator<Item = (String, Vec<Member>)>,
    ) -> Result<VariableDomain, DomainError> {
        let name = name.into();
        let extents: BTreeMap<_, _> = extents.into_iter().collect();
        for (key, members) in &extents {
            for (index, m) in members.iter().enumerate() {
                let ok = match (&elem, m) {
                    (ElemType::Value(t), Member::Value(v)) => typecheck(v, t),
                    (ElemType::Object(class), Member::Object(d)) => d.class_name() == class,
                    _ => false,
                };
                if !ok {
                    return Err(DomainError::IllTyped {
                        domain: name,
                        key: key.clone(),
                        index: index + 1,
                        elem: elem.clone(),
                    });
                }
            }
        }
        Ok(VariableDomain {
            name,
            elem,
            extents,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn elem(&self) -> &ElemType {
        &self.elem
    }

    pub fn extents(&self) -> &BTreeMap<String, Vec<Member>> {
        &self.extents
    }

    pub fn assignment_keys(&self) -> impl Iterator<Item = &str> {
        self.extents.keys().map(String::as_str)
    }
}

/// The extent of `vd` under the given assignment.
pub fn domain_members<'a>(
    vd: &'a VariableDomain,
    assignment_key: &str,
) -> Result<&'a [Member], DomainError> {
    vd.extents
        .get(assignment_key)
        .map(Vec::as_slice)
        .ok_or_else(|| DomainError::UnknownAssignment {
            domain: vd.name.clone(),
            key: assignment_key.to_string(),
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::content::{DigitalObject, Val};

    fn ints(xs: &[i64]) -> Vec<Member> {
        xs.iter().map(|&n| Member::Value(Val::Int(n))).collect()
    }

    #[test]
    fn lookup_by_assignment() {
        let vd = VariableDomain::new(
            "Years",
            ElemType::Value(TypeExpr::INT),
            [("ctxA".to_string(), ints(&[1, 2])), ("ctxB".to_string(), ints(&[3]))],
        )
        .unwrap();
        assert_eq!(domain_members(&vd, "ctxA").unwrap(), ints(&[1, 2]).as_slice());
        assert_eq!(domain_members(&vd, "ctxB").unwrap(), ints(&[3]).as_slice());
        assert!(matches!(
            domain_members(&vd, "ctxC"),
            Err(DomainError::UnknownAssignment { .. })
        ));
    }

    #[test]
    fn members_must_match_element_type() {
        let bad = VariableDomain::new(
            "Years",
            ElemType::Value(TypeExpr::INT),
            [("a".to_string(), vec![Member::Value(Val::text("x"))])],
        );
        assert!(matches!(bad, Err(DomainError::IllTyped { index: 1, .. })));

        let d = DigitalObject::unbound("News", &[]).unwrap();
        let ok = VariableDomain::new(
            "Latest",
            ElemType::Object("News".into()),
            [("a".to_string(), vec![Member::Object(d.clone())])],
        );
        assert!(ok.is_ok());
        let bad = VariableDomain::new(
            "Latest",
            ElemType::Object("Page".into()),
            [("a".to_string(), vec![Member::Object(d)])],
        );
        assert!(bad.is_err());
    }
}
