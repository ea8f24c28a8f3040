//! The object calculus: typed values, digital objects and their lifecycle,
//! definition formulas, comprehension and variable domains.

mod compress;
mod domain;
mod object;
mod predicate;
mod types;
mod value;

pub use compress::{
    compress, individualize, meta_compress, IndividualizeError, Member, MetaCollection,
    MetaError, MAX_META_LEVEL,
};
pub use domain::{domain_members, DomainError, ElemType, VariableDomain};
pub use object::{stage_of, DigitalObject, ObjectError, Slot, SlotBinding, Stage};
pub use predicate::{parse_predicate, CmpOp, Individual, Operand, Predicate, PredicateError};
pub(crate) use predicate::{generic_expr, Connectives};
pub use types::{AtomicKind, TypeError, TypeExpr};
pub use value::{typecheck, Shape, Val};
