use thiserror::Error;

use super::model::{ContentDocument, ModelFile};
use crate::content::DigitalObject;
use crate::machine::{run, Command, Declarations, Expression, MachineError, Program};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CompileError {
    #[error("unknown class `{0}`")]
    UnknownClass(String),
    #[error("class `{class}` has no slot `{slot}`")]
    UnknownSlot { class: String, slot: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BindError {
    #[error(transparent)]
    Compile(#[from] CompileError),
    #[error("{0}")]
    Machine(MachineError),
}

/// Translates a document into a machine program: one declaration per class
/// slot, one assignment per document entry, in document order.
pub fn compile_binding_program(
    doc: &ContentDocument,
    model: &ModelFile,
) -> Result<Program, CompileError> {
    let class = model
        .class(&doc.class_name)
        .ok_or_else(|| CompileError::UnknownClass(doc.class_name.clone()))?;
    let declarations: Declarations = class
        .slots
        .iter()
        .map(|s| (s.name.clone(), s.ty.clone()))
        .collect();
    let mut commands = Vec::with_capacity(doc.assignments.len());
    for (slot, value) in &doc.assignments {
        if class.slot(slot).is_none() {
            return Err(CompileError::UnknownSlot {
                class: class.name.clone(),
                slot: slot.clone(),
            });
        }
        commands.push(Command::Assign(slot.clone(), Expression::Lit(value.clone())));
    }
    Ok(Program::new(declarations, commands))
}

/// Binds a document to its class by running the compiled program on empty
/// input and reading the final memory back as a digital object.
pub fn bind(doc: &ContentDocument, model: &ModelFile) -> Result<DigitalObject, BindError> {
    let program = compile_binding_program(doc, model)?;
    let result = run(&program, []).map_err(|fault| BindError::Machine(fault.error))?;
    let class = model.class(&doc.class_name).expect("class checked by compile");
    let mut d = DigitalObject::unbound(&class.name, &class.slots)
        .expect("model validation guarantees distinct slots");
    for (name, value) in result.mem {
        if let Some(v) = value {
            d.bind(&name, v).expect("machine typechecked every binding");
        }
    }
    Ok(d)
}
