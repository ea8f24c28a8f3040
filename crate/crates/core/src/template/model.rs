use std::fmt;

use super::skeleton::MarkupTemplate;
use crate::content::{Member, Slot, Val, VariableDomain};
use crate::personalization::{PersonalizationRule, RegistrationStatus};
use crate::syntax::write_string_literal;

/// A content class: typed slots, a markup skeleton, and the lowest
/// registration status allowed to view its pages.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassDef {
    pub name: String,
    pub slots: Vec<Slot>,
    pub skeleton: MarkupTemplate,
    pub min_status: RegistrationStatus,
}

impl ClassDef {
    pub fn slot(&self, name: &str) -> Option<&Slot> {
        self.slots.iter().find(|s| s.name == name)
    }
}

/// A parsed content model: classes, personalization rules and variable
/// domains, in declaration order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ModelFile {
    pub classes: Vec<ClassDef>,
    pub rules: Vec<PersonalizationRule>,
    pub domains: Vec<VariableDomain>,
}

impl ModelFile {
    pub fn class(&self, name: &str) -> Option<&ClassDef> {
        self.classes.iter().find(|c| c.name == name)
    }

    pub fn slot_count(&self) -> usize {
        self.classes.iter().map(|c| c.slots.len()).sum()
    }
}

/// Canonical model text. Parsing it yields the same model.
impl fmt::Display for ModelFile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        let mut gap = |f: &mut fmt::Formatter<'_>| {
            if !std::mem::replace(&mut first, false) {
                f.write_str("\n")
            } else {
                Ok(())
            }
        };
        for class in &self.classes {
            gap(f)?;
            writeln!(f, "class {} {{", class.name)?;
            if class.min_status != RegistrationStatus::Anonymous {
                writeln!(f, "  requires {}", class.min_status)?;
            }
            for slot in &class.slots {
                writeln!(f, "  slot {}: {}", slot.name, slot.ty)?;
            }
            f.write_str("  skeleton ")?;
            write_string_literal(f, class.skeleton.raw())?;
            f.write_str("\n}\n")?;
        }
        for rule in &self.rules {
            gap(f)?;
            writeln!(f, "{rule}")?;
        }
        for domain in &self.domains {
            gap(f)?;
            writeln!(f, "domain {}: {} {{", domain.name(), domain.elem())?;
            for (key, members) in domain.extents() {
                write!(f, "  {key} = [")?;
                for (i, m) in members.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    match m {
                        Member::Value(v) => write!(f, "{v}")?,
                        // only value domains have a textual form
                        Member::Object(d) => write!(f, "{}", d.class_name())?,
                    }
                }
                f.write_str("]\n")?;
            }
            f.write_str("}\n")?;
        }
        Ok(())
    }
}

/// Content for one object of a class: literal values for some or all of
/// its slots.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContentDocument {
    pub object_name: String,
    pub class_name: String,
    pub assignments: Vec<(String, Val)>,
}

impl fmt::Display for ContentDocument {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "object {} : {} {{", self.object_name, self.class_name)?;
        for (slot, v) in &self.assignments {
            writeln!(f, "  {slot} = {v}")?;
        }
        f.write_str("}\n")
    }
}

/// A rendered page.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Page {
    pub name: String,
    pub markup: String,
}
