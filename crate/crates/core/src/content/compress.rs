//! Comprehension over finite domains: compression, definite description and
//! the metalevel lifting of compression.

use std::borrow::Cow;

use thiserror::Error;

use super::object::DigitalObject;
use super::predicate::{Individual, Predicate, PredicateError};
use super::value::Val;

/// Highest metalevel a collection may reach.
pub const MAX_META_LEVEL: u8 = 3;

/// `{v : D | Δ}` over an ordered domain. Order and multiplicity of the
/// input are preserved.
pub fn compress<T>(domain: &[T], delta: &Predicate) -> Result<Vec<T>, PredicateError>
where
    T: Individual + Clone,
{
    let mut out = Vec::new();
    for v in domain {
        if delta.eval(v)? {
            out.push(v.clone());
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IndividualizeError {
    #[error(transparent)]
    Predicate(#[from] PredicateError),
    #[error("no individual satisfies the description")]
    NoWitness,
    #[error("the description is satisfied by {0} individuals")]
    NotUnique(usize),
}

/// The definite description `ιv Δ(v)`: defined only when exactly one
/// member of the domain satisfies `Δ`.
pub fn individualize<T>(domain: &[T], delta: &Predicate) -> Result<T, IndividualizeError>
where
    T: Individual + Clone,
{
    let mut witness = None;
    let mut count = 0;
    for v in domain {
        if delta.eval(v)? {
            count += 1;
            if witness.is_none() {
                witness = Some(v);
            }
        }
    }
    match (count, witness) {
        (1, Some(w)) => Ok(w.clone()),
        (0, _) => Err(IndividualizeError::NoWitness),
        (n, _) => Err(IndividualizeError::NotUnique(n)),
    }
}

/// A level-0 member: a plain value or a digital object.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Member {
    Value(Val),
    Object(DigitalObject),
}

impl From<Val> for Member {
    fn from(v: Val) -> Self {
        Member::Value(v)
    }
}

impl From<DigitalObject> for Member {
    fn from(d: DigitalObject) -> Self {
        Member::Object(d)
    }
}

impl Individual for Member {
    fn itself(&self) -> Result<Cow<'_, Val>, PredicateError> {
        match self {
            Member::Value(v) => v.itself(),
            Member::Object(d) => d.itself(),
        }
    }

    fn slot(&self, name: &str) -> Result<Cow<'_, Val>, PredicateError> {
        match self {
            Member::Value(v) => v.slot(name),
            Member::Object(d) => d.slot(name),
        }
    }

    fn count(&self) -> Result<usize, PredicateError> {
        match self {
            Member::Value(v) => v.count(),
            Member::Object(d) => d.count(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MetaError {
    #[error(transparent)]
    Predicate(#[from] PredicateError),
    #[error("metalevel {0} exceeds the maximum of {MAX_META_LEVEL}")]
    LevelTooDeep(u8),
    #[error("element at level {found} inside a collection of level-{expected} elements")]
    MixedLevels { expected: u8, found: u8 },
}

/// A collection at metalevel `j`: members at level 0, otherwise
/// collections of level `j - 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum MetaCollection {
    Base(Vec<Member>),
    Nested {
        level: u8,
        elements: Vec<MetaCollection>,
    },
}

impl MetaCollection {
    pub fn base(members: impl IntoIterator<Item = impl Into<Member>>) -> MetaCollection {
        MetaCollection::Base(members.into_iter().map(Into::into).collect())
    }

    /// Builds a level-`level` collection, checking every element sits one
    /// level below.
    pub fn nested(level: u8, elements: Vec<MetaCollection>) -> Result<MetaCollection, MetaError> {
        if level == 0 || level > MAX_META_LEVEL {
            return Err(MetaError::LevelTooDeep(level));
        }
        if let Some(bad) = elements.iter().find(|e| e.level() + 1 != level) {
            return Err(MetaError::MixedLevels {
                expected: level - 1,
                found: bad.level(),
            });
        }
        Ok(MetaCollection::Nested { level, elements })
    }

    pub fn level(&self) -> u8 {
        match self {
            MetaCollection::Base(_) => 0,
            MetaCollection::Nested { level, .. } => *level,
        }
    }

    pub fn len(&self) -> usize {
        match self {
            MetaCollection::Base(m) => m.len(),
            MetaCollection::Nested { elements, .. } => elements.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

impl Individual for MetaCollection {
    fn itself(&self) -> Result<Cow<'_, Val>, PredicateError> {
        Err(PredicateError::NotAValue)
    }

    fn slot(&self, name: &str) -> Result<Cow<'_, Val>, PredicateError> {
        Err(PredicateError::UnknownSlot(name.to_string()))
    }

    fn count(&self) -> Result<usize, PredicateError> {
        Ok(self.len())
    }
}

/// Lifts compression one metalevel: the level-`j` collection is filtered by
/// `Δ` and the result becomes the sole element of a level-`j+1` collection.
pub fn meta_compress(
    coll: &MetaCollection,
    delta: &Predicate,
) -> Result<MetaCollection, MetaError> {
    let level = coll.level();
    if level >= MAX_META_LEVEL {
        return Err(MetaError::LevelTooDeep(level + 1));
    }
    let filtered = match coll {
        MetaCollection::Base(members) => MetaCollection::Base(compress(members, delta)?),
        MetaCollection::Nested { level, elements } => MetaCollection::Nested {
            level: *level,
            elements: compress(elements, delta)?,
        },
    };
    MetaCollection::nested(level + 1, vec![filtered])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::content::parse_predicate;

    fn ints(xs: &[i64]) -> Vec<Val> {
        xs.iter().map(|&n| Val::Int(n)).collect()
    }

    #[test]
    fn compress_examples() {
        let d = ints(&[1, 2, 3, 4, 5]);
        assert_eq!(compress(&d, &parse_predicate("v > 3").unwrap()).unwrap(), ints(&[4, 5]));
        assert_eq!(compress(&d, &Predicate::Const(true)).unwrap(), d);
        assert!(compress(&d, &Predicate::Const(false)).unwrap().is_empty());
    }

    #[test]
    fn compress_keeps_multiplicity() {
        let d = ints(&[3, 1, 3]);
        assert_eq!(compress(&d, &parse_predicate("v = 3").unwrap()).unwrap(), ints(&[3, 3]));
    }

    #[test]
    fn individualize_examples() {
        let d = ints(&[1, 2, 3]);
        assert_eq!(individualize(&d, &parse_predicate("v = 2").unwrap()), Ok(Val::Int(2)));
        assert_eq!(
            individualize(&d, &parse_predicate("v > 1").unwrap()),
            Err(IndividualizeError::NotUnique(2))
        );
        assert_eq!(
            individualize(&d, &parse_predicate("v > 5").unwrap()),
            Err(IndividualizeError::NoWitness)
        );
    }

    #[test]
    fn meta_compress_level_zero() {
        let c = MetaCollection::base(ints(&[1, 2, 3]));
        let lifted = meta_compress(&c, &parse_predicate("v >= 2").unwrap()).unwrap();
        assert_eq!(
            lifted,
            MetaCollection::nested(1, vec![MetaCollection::base(ints(&[2, 3]))]).unwrap()
        );
        let empty = MetaCollection::base(Vec::<Val>::new());
        let lifted = meta_compress(&empty, &parse_predicate("v = 1").unwrap()).unwrap();
        assert_eq!(lifted.level(), 1);
        assert_eq!(lifted.len(), 1);
    }

    #[test]
    fn meta_compress_level_one_by_cardinality() {
        let c = MetaCollection::nested(
            1,
            vec![
                MetaCollection::base(ints(&[1])),
                MetaCollection::base(ints(&[1, 2])),
                MetaCollection::base(ints(&[1, 2, 3])),
            ],
        )
        .unwrap();
        let lifted = meta_compress(&c, &parse_predicate("v.count > 1").unwrap()).unwrap();
        let expected = MetaCollection::nested(
            2,
            vec![MetaCollection::nested(
                1,
                vec![
                    MetaCollection::base(ints(&[1, 2])),
                    MetaCollection::base(ints(&[1, 2, 3])),
                ],
            )
            .unwrap()],
        )
        .unwrap();
        assert_eq!(lifted, expected);
    }

    #[test]
    fn level_cap_and_mixing() {
        let l1 = MetaCollection::nested(1, vec![]).unwrap();
        let l2 = MetaCollection::nested(2, vec![l1.clone()]).unwrap();
        let l3 = MetaCollection::nested(3, vec![l2]).unwrap();
        assert_eq!(
            meta_compress(&l3, &Predicate::Const(true)),
            Err(MetaError::LevelTooDeep(4))
        );
        assert!(matches!(
            MetaCollection::nested(2, vec![MetaCollection::base(ints(&[1]))]),
            Err(MetaError::MixedLevels { .. })
        ));
    }
}
