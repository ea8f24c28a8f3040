use thiserror::Error;

use super::model::{ModelFile, Page};
use crate::content::{DigitalObject, Val};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RenderError {
    #[error("object is not fully evaluated; unbound slots: {}", .0.join(", "))]
    UnboundSlots(Vec<String>),
    #[error("object is suppressed")]
    Suppressed,
    #[error("unknown class `{0}`")]
    UnknownClass(String),
}

fn escape(s: &str, out: &mut String) {
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            c => out.push(c),
        }
    }
}

/// Markup for one value. Text and URIs are escaped, markup is inserted
/// verbatim.
pub fn render_value(v: &Val, out: &mut String) {
    match v {
        Val::Text(s) | Val::Uri(s) => escape(s, out),
        Val::Markup(s) => out.push_str(s),
        Val::Int(n) => out.push_str(&n.to_string()),
        Val::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Val::Date(d) => out.push_str(&d.format("%Y-%m-%d").to_string()),
        Val::Finite { literal, .. } => out.push_str(literal),
        Val::Tuple(items) | Val::Seq(items) => {
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                render_value(item, out);
            }
        }
        Val::Inj { value, .. } => render_value(value, out),
    }
}

/// Slots of `d` that are still unbound, in declaration order.
pub fn list_unbound(d: &DigitalObject) -> Vec<String> {
    d.unbound_slots()
}

/// Expands the class skeleton of a fully evaluated, unsuppressed object.
pub fn render(d: &DigitalObject, model: &ModelFile, name: &str) -> Result<Page, RenderError> {
    let class = model
        .class(d.class_name())
        .ok_or_else(|| RenderError::UnknownClass(d.class_name().to_string()))?;
    let unbound = list_unbound(d);
    if !unbound.is_empty() {
        return Err(RenderError::UnboundSlots(unbound));
    }
    if d.is_suppressed() {
        return Err(RenderError::Suppressed);
    }
    let markup = class.skeleton.expand(|slot| {
        let mut s = String::new();
        if let Some(Some(v)) = d.get(slot) {
            render_value(v, &mut s);
        }
        Ok::<_, RenderError>(s)
    })?;
    Ok(Page {
        name: name.to_string(),
        markup,
    })
}
