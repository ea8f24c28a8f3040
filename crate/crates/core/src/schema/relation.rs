use std::fmt::{self, Write as _};

use chrono::NaiveDate;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DdlType {
    Varchar,
    Text,
    Integer,
    Boolean,
    Date,
}

/// Width of every generated VARCHAR column.
pub const VARCHAR_WIDTH: usize = 1024;

impl fmt::Display for DdlType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DdlType::Varchar => write!(f, "VARCHAR({VARCHAR_WIDTH})"),
            DdlType::Text => f.write_str("TEXT"),
            DdlType::Integer => f.write_str("INTEGER"),
            DdlType::Boolean => f.write_str("BOOLEAN"),
            DdlType::Date => f.write_str("DATE"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Column {
    pub name: String,
    pub ddl_type: DdlType,
    pub nullable: bool,
}

impl Column {
    pub fn new(name: impl Into<String>, ddl_type: DdlType, nullable: bool) -> Column {
        Column {
            name: name.into(),
            ddl_type,
            nullable,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ForeignKey {
    pub column: String,
    pub target: String,
    pub target_column: String,
}

/// A cell of a table row.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum SqlValue {
    Null,
    Text(String),
    Int(i64),
    Bool(bool),
    Date(NaiveDate),
}

impl SqlValue {
    pub fn is_null(&self) -> bool {
        matches!(self, SqlValue::Null)
    }
}

impl fmt::Display for SqlValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SqlValue::Null => f.write_str("NULL"),
            SqlValue::Text(s) => write!(f, "'{}'", s.replace('\'', "''")),
            SqlValue::Int(n) => write!(f, "{n}"),
            SqlValue::Bool(b) => f.write_str(if *b { "TRUE" } else { "FALSE" }),
            SqlValue::Date(d) => write!(f, "DATE '{}'", d.format("%Y-%m-%d")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Relation {
    pub name: String,
    pub columns: Vec<Column>,
    pub primary_key: Vec<String>,
    pub foreign_keys: Vec<ForeignKey>,
    /// Rows emitted as INSERT statements after the table definition.
    pub rows: Vec<Vec<SqlValue>>,
}

impl Relation {
    pub fn new(name: impl Into<String>) -> Relation {
        Relation {
            name: name.into(),
            columns: Vec::new(),
            primary_key: Vec::new(),
            foreign_keys: Vec::new(),
            rows: Vec::new(),
        }
    }

    pub fn column(&self, name: &str) -> Option<&Column> {
        self.columns.iter().find(|c| c.name == name)
    }

    pub fn column_names(&self) -> impl Iterator<Item = &str> {
        self.columns.iter().map(|c| c.name.as_str())
    }
}

/// Renders relations as DDL: one `CREATE TABLE` per relation followed by
/// its `INSERT` rows, relations separated by a blank line.
pub fn emit_ddl(relations: &[Relation]) -> String {
    let mut out = String::new();
    for (i, r) in relations.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        let mut lines: Vec<String> = r
            .columns
            .iter()
            .map(|c| {
                let null = if c.nullable { "NULL" } else { "NOT NULL" };
                format!("  {} {} {null}", c.name, c.ddl_type)
            })
            .collect();
        if !r.primary_key.is_empty() {
            lines.push(format!("  PRIMARY KEY ({})", r.primary_key.join(", ")));
        }
        for fk in &r.foreign_keys {
            lines.push(format!(
                "  FOREIGN KEY ({}) REFERENCES {} ({})",
                fk.column, fk.target, fk.target_column
            ));
        }
        let _ = writeln!(out, "CREATE TABLE {} (\n{}\n);", r.name, lines.join(",\n"));
        let cols = r.column_names().collect::<Vec<_>>().join(", ");
        for row in &r.rows {
            let vals = row.iter().map(ToString::to_string).collect::<Vec<_>>();
            let _ = writeln!(
                out,
                "INSERT INTO {} ({cols}) VALUES ({});",
                r.name,
                vals.join(", ")
            );
        }
    }
    out
}
