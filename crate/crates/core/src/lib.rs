//! Typed content binding on an abstract machine.
//!
//! Content models declare classes with typed slots and markup skeletons.
//! Content documents are compiled into machine programs whose run binds the
//! slots, producing digital objects that move through the class, object and
//! value stages. Fully evaluated objects are personalized by a rule-driven
//! functional and rendered into pages; models also compile into relational
//! schemas.

pub mod content;
pub mod machine;
pub mod personalization;
pub mod schema;
pub mod syntax;
pub mod template;

pub use content::{DigitalObject, Predicate, Slot, Stage, TypeExpr, Val};
pub use machine::{MachineError, MachineState, Program};
pub use syntax::{Diagnostic, Diagnostics};
