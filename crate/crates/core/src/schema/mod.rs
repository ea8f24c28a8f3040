//! Compilation of content models into relational schemas and metalevel
//! tables, emitted as DDL.

mod compile;
mod relation;

pub use compile::{
    compile_meta, compile_schema, synthesize_rows, Row, RowIds, SchemaError, META_CLASS,
    META_SLOT,
};
pub use relation::{emit_ddl, Column, DdlType, ForeignKey, Relation, SqlValue, VARCHAR_WIDTH};
