use std::fmt;

use thiserror::Error;

use super::types::TypeExpr;
use super::value::{typecheck, Val};
use crate::syntax::is_identifier;

/// A named, typed hole in a class template.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Slot {
    pub name: String,
    pub ty: TypeExpr,
}

impl Slot {
    pub fn new(name: impl Into<String>, ty: TypeExpr) -> Result<Slot, ObjectError> {
        let name = name.into();
        if !is_identifier(&name) {
            return Err(ObjectError::BadSlotName(name));
        }
        Ok(Slot { name, ty })
    }
}

/// Lifecycle stage of a digital object, ordered `Class < Object < Value`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Stage {
    /// Template only: nothing bound.
    Class,
    /// Partially evaluated.
    Object,
    /// Fully evaluated, ready to render.
    Value,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Stage::Class => "class",
            Stage::Object => "object",
            Stage::Value => "value",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ObjectError {
    #[error("`{0}` is not a valid slot name")]
    BadSlotName(String),
    #[error("duplicate slot `{0}`")]
    DuplicateSlot(String),
    #[error("class `{class}` has no slot `{slot}`")]
    UnknownSlot { class: String, slot: String },
    #[error("value {value} does not inhabit type {ty} of slot `{slot}`")]
    TypeMismatch {
        slot: String,
        ty: TypeExpr,
        value: Val,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SlotBinding {
    pub slot: Slot,
    pub value: Option<Val>,
}

/// A digital object: a class reference plus one binding per class slot,
/// each possibly unbound. Bindings keep the class's slot order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DigitalObject {
    class_name: String,
    bindings: Vec<SlotBinding>,
    suppressed: bool,
}

impl DigitalObject {
    /// A class-stage object: every slot unbound.
    pub fn unbound(class_name: impl Into<String>, slots: &[Slot]) -> Result<Self, ObjectError> {
        let mut bindings: Vec<SlotBinding> = Vec::with_capacity(slots.len());
        for slot in slots {
            if bindings.iter().any(|b| b.slot.name == slot.name) {
                return Err(ObjectError::DuplicateSlot(slot.name.clone()));
            }
            bindings.push(SlotBinding {
                slot: slot.clone(),
                value: None,
            });
        }
        Ok(DigitalObject {
            class_name: class_name.into(),
            bindings,
            suppressed: false,
        })
    }

    pub fn class_name(&self) -> &str {
        &self.class_name
    }

    pub fn bindings(&self) -> &[SlotBinding] {
        &self.bindings
    }

    pub fn slot_names(&self) -> impl Iterator<Item = &str> {
        self.bindings.iter().map(|b| b.slot.name.as_str())
    }

    pub fn has_slot(&self, name: &str) -> bool {
        self.bindings.iter().any(|b| b.slot.name == name)
    }

    /// `None` if the slot does not exist, `Some(None)` if it is unbound.
    pub fn get(&self, name: &str) -> Option<Option<&Val>> {
        self.bindings
            .iter()
            .find(|b| b.slot.name == name)
            .map(|b| b.value.as_ref())
    }

    pub fn bind(&mut self, name: &str, value: Val) -> Result<(), ObjectError> {
        let class = &self.class_name;
        let binding = self
            .bindings
            .iter_mut()
            .find(|b| b.slot.name == name)
            .ok_or_else(|| ObjectError::UnknownSlot {
                class: class.clone(),
                slot: name.to_string(),
            })?;
        if !typecheck(&value, &binding.slot.ty) {
            return Err(ObjectError::TypeMismatch {
                slot: name.to_string(),
                ty: binding.slot.ty.clone(),
                value,
            });
        }
        binding.value = Some(value);
        Ok(())
    }

    pub fn with(mut self, name: &str, value: Val) -> Result<Self, ObjectError> {
        self.bind(name, value)?;
        Ok(self)
    }

    /// Derived from the bindings. A slotless class is trivially fully
    /// evaluated, so it reports `Value`.
    pub fn stage(&self) -> Stage {
        let bound = self.bindings.iter().filter(|b| b.value.is_some()).count();
        if bound == self.bindings.len() {
            Stage::Value
        } else if bound == 0 {
            Stage::Class
        } else {
            Stage::Object
        }
    }

    /// Unbound slot names in class slot order.
    pub fn unbound_slots(&self) -> Vec<String> {
        self.bindings
            .iter()
            .filter(|b| b.value.is_none())
            .map(|b| b.slot.name.clone())
            .collect()
    }

    pub fn is_suppressed(&self) -> bool {
        self.suppressed
    }

    pub fn set_suppressed(&mut self, suppressed: bool) {
        self.suppressed = suppressed;
    }
}

pub fn stage_of(d: &DigitalObject) -> Stage {
    d.stage()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn three_slots() -> Vec<Slot> {
        vec![
            Slot::new("title", TypeExpr::TEXT).unwrap(),
            Slot::new("date", TypeExpr::DATE).unwrap(),
            Slot::new("priority", TypeExpr::INT).unwrap(),
        ]
    }

    #[test]
    fn stages_follow_coverage() {
        let d = DigitalObject::unbound("News", &three_slots()).unwrap();
        assert_eq!(stage_of(&d), Stage::Class);
        let d = d.with("title", Val::text("Launch")).unwrap();
        assert_eq!(stage_of(&d), Stage::Object);
        let d = d
            .with("date", Val::date(2004, 5, 1).unwrap())
            .unwrap()
            .with("priority", Val::Int(2))
            .unwrap();
        assert_eq!(stage_of(&d), Stage::Value);
    }

    #[test]
    fn slotless_class_is_value_stage() {
        let d = DigitalObject::unbound("Empty", &[]).unwrap();
        assert_eq!(d.stage(), Stage::Value);
        assert!(d.unbound_slots().is_empty());
    }

    #[test]
    fn bind_rejects_bad_slot_and_type() {
        let mut d = DigitalObject::unbound("News", &three_slots()).unwrap();
        assert!(matches!(
            d.bind("nope", Val::Int(1)),
            Err(ObjectError::UnknownSlot { .. })
        ));
        assert!(matches!(
            d.bind("priority", Val::text("high")),
            Err(ObjectError::TypeMismatch { .. })
        ));
        assert_eq!(d.stage(), Stage::Class);
    }

    #[test]
    fn unbound_slots_keep_class_order() {
        let d = DigitalObject::unbound("News", &three_slots())
            .unwrap()
            .with("date", Val::date(2001, 1, 1).unwrap())
            .unwrap();
        assert_eq!(d.unbound_slots(), vec!["title", "priority"]);
    }

    #[test]
    fn duplicate_slots_rejected() {
        let slots = vec![
            Slot::new("a", TypeExpr::INT).unwrap(),
            Slot::new("a", TypeExpr::TEXT).unwrap(),
        ];
        assert_eq!(
            DigitalObject::unbound("X", &slots),
            Err(ObjectError::DuplicateSlot("a".into()))
        );
    }
}
