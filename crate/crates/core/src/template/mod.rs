//! Content models, content documents, binding through the machine, and
//! rendering of fully evaluated objects into pages.

mod bind;
mod model;
mod parse;
mod render;
mod skeleton;

pub use bind::{bind, compile_binding_program, BindError, CompileError};
pub use model::{ClassDef, ContentDocument, ModelFile, Page};
pub use parse::{parse_document, parse_model};
pub use render::{list_unbound, render, render_value, RenderError};
pub use skeleton::{MarkupTemplate, Segment, SkeletonError};
