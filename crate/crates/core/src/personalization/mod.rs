//! The personalization functional: contexts `(v, e, s, p)`, guarded rules
//! that specialize digital objects, and status-based access control.

mod context;
mod rules;
mod status;

pub use context::{parse_context, Group, PersonalizationContext};
pub use rules::{
    access_allowed, apply_functional, parse_guard, Guard, GuardOperand, PersonalizationRule,
    RuleAction, RuleError,
};
pub(crate) use rules::rule;
pub use status::RegistrationStatus;
