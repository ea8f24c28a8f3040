use std::collections::{BTreeMap, HashSet};

use thiserror::Error;

use super::relation::{Column, DdlType, ForeignKey, Relation, SqlValue};
use crate::content::{AtomicKind, DigitalObject, TypeExpr, Val};
use crate::template::ModelFile;

pub const META_CLASS: &str = "meta_class";
pub const META_SLOT: &str = "meta_slot";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SchemaError {
    #[error("slot `{class}.{slot}` has a function type and cannot be stored")]
    NotRepresentable { class: String, slot: String },
    #[error("generated name `{name}` clashes in {scope}")]
    NameCollision { scope: String, name: String },
    #[error("unknown class `{0}`")]
    UnknownClass(String),
}

fn ddl_type(k: AtomicKind) -> DdlType {
    match k {
        AtomicKind::Text | AtomicKind::Uri => DdlType::Varchar,
        AtomicKind::Markup => DdlType::Text,
        AtomicKind::Int => DdlType::Integer,
        AtomicKind::Bool => DdlType::Boolean,
        AtomicKind::Date => DdlType::Date,
    }
}

fn child_name(parent: &str, prefix: &str) -> String {
    format!("{parent}_{prefix}")
}

fn child_relation(name: String, parent: &str) -> Relation {
    let mut r = Relation::new(name);
    r.columns.push(Column::new("id", DdlType::Integer, false));
    r.columns.push(Column::new("parent_id", DdlType::Integer, false));
    r.columns.push(Column::new("position", DdlType::Integer, false));
    r.primary_key.push("id".into());
    r.foreign_keys.push(ForeignKey {
        column: "parent_id".into(),
        target: parent.to_string(),
        target_column: "id".into(),
    });
    r
}

/// Adds the columns for a value of type `ty` stored under `prefix`; Seq
/// types add child relations (parents before their children).
fn layout(rel: &mut Relation, prefix: &str, ty: &TypeExpr, children: &mut Vec<Relation>) {
    match ty {
        TypeExpr::Atomic(k) => rel.columns.push(Column::new(prefix, ddl_type(*k), true)),
        TypeExpr::Finite { .. } => rel.columns.push(Column::new(prefix, DdlType::Varchar, true)),
        TypeExpr::Product(items) => {
            for (k, t) in items.iter().enumerate() {
                layout(rel, &format!("{prefix}_{}", k + 1), t, children);
            }
        }
        TypeExpr::Sum(variants) => {
            rel.columns
                .push(Column::new(format!("{prefix}_tag"), DdlType::Varchar, true));
            for (tag, t) in variants {
                layout(rel, &format!("{prefix}_{tag}"), t, children);
            }
        }
        TypeExpr::Seq(elem) => {
            let mut child = child_relation(child_name(&rel.name, prefix), &rel.name);
            let mut grand = Vec::new();
            layout(&mut child, "value", elem, &mut grand);
            children.push(child);
            children.append(&mut grand);
        }
        TypeExpr::Fn(..) => unreachable!("function types are rejected before layout"),
    }
}

fn check_distinct<'a>(
    scope: &str,
    names: impl IntoIterator<Item = &'a str>,
) -> Result<(), SchemaError> {
    let mut seen = HashSet::new();
    for name in names {
        if !seen.insert(name.to_ascii_lowercase()) {
            return Err(SchemaError::NameCollision {
                scope: scope.to_string(),
                name: name.to_string(),
            });
        }
    }
    Ok(())
}

/// Data relations for a model: one per class, keyed by a synthetic `id`,
/// plus one child relation per sequence-typed slot.
pub fn compile_schema(model: &ModelFile) -> Result<Vec<Relation>, SchemaError> {
    let mut out = Vec::new();
    for class in &model.classes {
        let mut rel = Relation::new(&class.name);
        rel.columns.push(Column::new("id", DdlType::Integer, false));
        rel.primary_key.push("id".into());
        let mut children = Vec::new();
        for slot in &class.slots {
            if slot.ty.mentions_fn() {
                return Err(SchemaError::NotRepresentable {
                    class: class.name.clone(),
                    slot: slot.name.clone(),
                });
            }
            layout(&mut rel, &slot.name, &slot.ty, &mut children);
        }
        out.push(rel);
        out.append(&mut children);
    }
    for r in &out {
        check_distinct(&format!("relation `{}`", r.name), r.column_names())?;
    }
    check_distinct(
        "the schema",
        out.iter()
            .map(|r| r.name.as_str())
            .chain([META_CLASS, META_SLOT]),
    )?;
    Ok(out)
}

/// The level-1 description of the data: `meta_class` and `meta_slot`
/// relations whose rows list the model's classes and slots.
pub fn compile_meta(model: &ModelFile) -> Vec<Relation> {
    let mut classes = Relation::new(META_CLASS);
    classes.columns = vec![
        Column::new("name", DdlType::Varchar, false),
        Column::new("min_status", DdlType::Varchar, false),
    ];
    classes.primary_key.push("name".into());

    let mut slots = Relation::new(META_SLOT);
    slots.columns = vec![
        Column::new("class_name", DdlType::Varchar, false),
        Column::new("slot_name", DdlType::Varchar, false),
        Column::new("type_text", DdlType::Text, false),
        Column::new("position", DdlType::Integer, false),
    ];
    slots.primary_key = vec!["class_name".into(), "slot_name".into()];
    slots.foreign_keys.push(ForeignKey {
        column: "class_name".into(),
        target: META_CLASS.into(),
        target_column: "name".into(),
    });

    for class in &model.classes {
        classes.rows.push(vec![
            SqlValue::Text(class.name.clone()),
            SqlValue::Text(class.min_status.name().into()),
        ]);
        for (i, slot) in class.slots.iter().enumerate() {
            slots.rows.push(vec![
                SqlValue::Text(class.name.clone()),
                SqlValue::Text(slot.name.clone()),
                SqlValue::Text(slot.ty.to_string()),
                SqlValue::Int(i as i64 + 1),
            ]);
        }
    }
    vec![classes, slots]
}

/// A synthesized table row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Row {
    pub relation: String,
    pub cells: Vec<(String, SqlValue)>,
}

impl Row {
    pub fn get(&self, column: &str) -> Option<&SqlValue> {
        self.cells.iter().find(|(c, _)| c == column).map(|(_, v)| v)
    }
}

/// Per-relation id counters for child rows.
#[derive(Debug, Clone, Default)]
pub struct RowIds(BTreeMap<String, i64>);

impl RowIds {
    pub fn next(&mut self, relation: &str) -> i64 {
        let n = self.0.entry(relation.to_string()).or_insert(0);
        *n += 1;
        *n
    }
}

fn atomic_cell(v: &Val) -> SqlValue {
    match v {
        Val::Text(s) | Val::Markup(s) | Val::Uri(s) => SqlValue::Text(s.clone()),
        Val::Int(n) => SqlValue::Int(*n),
        Val::Bool(b) => SqlValue::Bool(*b),
        Val::Date(d) => SqlValue::Date(*d),
        Val::Finite { literal, .. } => SqlValue::Text(literal.clone()),
        _ => SqlValue::Null,
    }
}

struct Fill<'a> {
    ids: &'a mut RowIds,
    rows: Vec<Row>,
}

impl Fill<'_> {
    fn value(
        &mut self,
        rel: &str,
        prefix: &str,
        ty: &TypeExpr,
        val: Option<&Val>,
        cells: &mut Vec<(String, SqlValue)>,
        row_id: i64,
    ) {
        match ty {
            TypeExpr::Atomic(_) | TypeExpr::Finite { .. } => {
                cells.push((prefix.to_string(), val.map_or(SqlValue::Null, atomic_cell)));
            }
            TypeExpr::Product(items) => {
                let parts = match val {
                    Some(Val::Tuple(parts)) => Some(parts),
                    _ => None,
                };
                for (k, t) in items.iter().enumerate() {
                    let part = parts.and_then(|p| p.get(k));
                    self.value(rel, &format!("{prefix}_{}", k + 1), t, part, cells, row_id);
                }
            }
            TypeExpr::Sum(variants) => {
                let (tag, payload) = match val {
                    Some(Val::Inj { tag, value }) => (Some(tag.as_str()), Some(&**value)),
                    _ => (None, None),
                };
                cells.push((
                    format!("{prefix}_tag"),
                    tag.map_or(SqlValue::Null, |t| SqlValue::Text(t.to_string())),
                ));
                for (t, vt) in variants {
                    let v = if tag == Some(t.as_str()) { payload } else { None };
                    self.value(rel, &format!("{prefix}_{t}"), vt, v, cells, row_id);
                }
            }
            TypeExpr::Seq(elem) => {
                let Some(Val::Seq(items)) = val else { return };
                let child = child_name(rel, prefix);
                for (pos, item) in items.iter().enumerate() {
                    let id = self.ids.next(&child);
                    let mut child_cells = vec![
                        ("id".to_string(), SqlValue::Int(id)),
                        ("parent_id".to_string(), SqlValue::Int(row_id)),
                        ("position".to_string(), SqlValue::Int(pos as i64 + 1)),
                    ];
                    let at = self.rows.len();
                    self.rows.push(Row {
                        relation: child.clone(),
                        cells: Vec::new(),
                    });
                    self.value(&child, "value", elem, Some(item), &mut child_cells, id);
                    self.rows[at].cells = child_cells;
                }
            }
            TypeExpr::Fn(..) => {}
        }
    }
}

/// Converts a digital object into the rows it would occupy: its class row
/// (with the given `id`) followed by child rows for sequence slots.
/// Unbound slots become NULL cells.
pub fn synthesize_rows(
    d: &DigitalObject,
    model: &ModelFile,
    id: i64,
    ids: &mut RowIds,
) -> Result<Vec<Row>, SchemaError> {
    let class = model
        .class(d.class_name())
        .ok_or_else(|| SchemaError::UnknownClass(d.class_name().to_string()))?;
    let mut cells = vec![("id".to_string(), SqlValue::Int(id))];
    let mut fill = Fill {
        ids,
        rows: Vec::new(),
    };
    for slot in &class.slots {
        if slot.ty.mentions_fn() {
            return Err(SchemaError::NotRepresentable {
                class: class.name.clone(),
                slot: slot.name.clone(),
            });
        }
        let val = d.get(&slot.name).flatten();
        fill.value(&class.name, &slot.name, &slot.ty, val, &mut cells, id);
    }
    let mut rows = vec![Row {
        relation: class.name.clone(),
        cells,
    }];
    rows.append(&mut fill.rows);
    Ok(rows)
}
