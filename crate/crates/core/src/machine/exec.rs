use std::collections::BTreeMap;
use std::fmt;

use super::program::{Command, Declarations, Expression, Program};
use super::state::MachineState;
use crate::content::{typecheck, Val};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ErrorKind {
    UnboundIdentifier,
    TypeMismatch,
    InputExhausted,
    BadProjection,
    CompareTypeMismatch,
}

impl fmt::Display for ErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// An expression-level failure, before it is tied to a step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExprError {
    pub kind: ErrorKind,
    pub detail: String,
}

impl ExprError {
    fn new(kind: ErrorKind, detail: impl Into<String>) -> ExprError {
        ExprError {
            kind,
            detail: detail.into(),
        }
    }

    pub fn at(self, step: usize) -> MachineError {
        MachineError {
            kind: self.kind,
            detail: self.detail,
            step,
        }
    }
}

impl fmt::Display for ExprError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.kind, self.detail)
    }
}

impl std::error::Error for ExprError {}

/// A terminal machine error. `step` is the 1-based index, in execution
/// order, of the command that failed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MachineError {
    pub kind: ErrorKind,
    pub detail: String,
    pub step: usize,
}

impl fmt::Display for MachineError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({}) at step {}", self.kind, self.detail, self.step)
    }
}

impl std::error::Error for MachineError {}

/// An aborted run: the error plus the state as of the last fully
/// completed command.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fault {
    pub error: MachineError,
    pub state: MachineState,
}

impl fmt::Display for Fault {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.error, f)
    }
}

impl std::error::Error for Fault {}

/// Evaluates an expression. Expressions never change the state; the state
/// is handed back untouched alongside the value.
pub fn eval_expr(e: &Expression, st: MachineState) -> Result<(Val, MachineState), ExprError> {
    let v = eval(e, &st)?;
    Ok((v, st))
}

pub(crate) fn eval(e: &Expression, st: &MachineState) -> Result<Val, ExprError> {
    match e {
        Expression::Lit(v) => Ok(v.clone()),
        Expression::Ident(name) => st
            .lookup(name)
            .cloned()
            .ok_or_else(|| ExprError::new(ErrorKind::UnboundIdentifier, name.as_str())),
        Expression::Tuple(items) => items
            .iter()
            .map(|item| eval(item, st))
            .collect::<Result<Vec<_>, _>>()
            .map(Val::Tuple),
        Expression::Proj(inner, k) => match eval(inner, st)? {
            Val::Tuple(mut items) if *k >= 1 && *k <= items.len() => {
                Ok(items.swap_remove(*k - 1))
            }
            _ => Err(ExprError::new(ErrorKind::BadProjection, e.to_string())),
        },
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceEntry {
    pub step: usize,
    pub command_text: String,
    pub state_after: MachineState,
}

impl fmt::Display for TraceEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "step {}: {} | {}",
            self.step, self.command_text, self.state_after
        )
    }
}

/// Executes commands against a fixed set of declarations, numbering steps
/// across successive calls so that a program may be run command by command.
pub struct Machine<'p> {
    decls: &'p Declarations,
    step: usize,
    trace: Option<Vec<TraceEntry>>,
}

impl<'p> Machine<'p> {
    pub fn new(decls: &'p Declarations) -> Machine<'p> {
        Machine {
            decls,
            step: 0,
            trace: None,
        }
    }

    pub fn recording(decls: &'p Declarations) -> Machine<'p> {
        Machine {
            decls,
            step: 0,
            trace: Some(Vec::new()),
        }
    }

    /// Initial state for a run: every declared identifier unbound.
    pub fn initial_state(&self, input: impl IntoIterator<Item = Val>) -> MachineState {
        let mut st = MachineState::new(input);
        st.mem = self.decls.keys().map(|k| (k.clone(), None)).collect::<BTreeMap<_, _>>();
        st
    }

    pub fn steps_taken(&self) -> usize {
        self.step
    }

    pub fn take_trace(&mut self) -> Vec<TraceEntry> {
        self.trace.take().unwrap_or_default()
    }

    pub fn exec(&mut self, cmd: &Command, mut st: MachineState) -> Result<MachineState, Fault> {
        match self.step_in_place(cmd, &mut st) {
            Ok(()) => Ok(st),
            Err(error) => Err(Fault { error, state: st }),
        }
    }

    pub fn exec_all(&mut self, cmds: &[Command], st: MachineState) -> Result<MachineState, Fault> {
        cmds.iter().try_fold(st, |st, c| self.exec(c, st))
    }

    // Every check happens before `st` is touched, so on error `st` is the
    // state after the last completed command.
    fn step_in_place(&mut self, cmd: &Command, st: &mut MachineState) -> Result<(), MachineError> {
        self.step += 1;
        let step = self.step;
        match cmd {
            Command::Assign(target, e) => {
                let v = eval(e, st).map_err(|err| err.at(step))?;
                self.check_binding(target, &v, st).map_err(|err| err.at(step))?;
                st.mem.insert(target.clone(), Some(v));
                self.record(cmd, st);
            }
            Command::Read(target) => {
                let Some(v) = st.input.front() else {
                    return Err(ExprError::new(ErrorKind::InputExhausted, target.as_str()).at(step));
                };
                self.check_binding(target, v, st).map_err(|err| err.at(step))?;
                let v = st.input.pop_front().expect("front checked above");
                st.mem.insert(target.clone(), Some(v));
                self.record(cmd, st);
            }
            Command::Emit(e) => {
                let v = eval(e, st).map_err(|err| err.at(step))?;
                st.output.push(v);
                self.record(cmd, st);
            }
            Command::Cmp {
                left,
                right,
                then_block,
                else_block,
            } => {
                let l = eval(left, st).map_err(|err| err.at(step))?;
                let r = eval(right, st).map_err(|err| err.at(step))?;
                if l.shape() != r.shape() {
                    return Err(ExprError::new(
                        ErrorKind::CompareTypeMismatch,
                        format!("{left} {right}"),
                    )
                    .at(step));
                }
                self.record(cmd, st);
                let block = if l == r { then_block } else { else_block };
                for inner in block {
                    self.step_in_place(inner, st)?;
                }
            }
        }
        Ok(())
    }

    /// A declaration fixes an identifier's type; without one, the first
    /// bound value fixes its shape.
    fn check_binding(&self, target: &str, v: &Val, st: &MachineState) -> Result<(), ExprError> {
        let ok = match self.decls.get(target) {
            Some(ty) => typecheck(v, ty),
            None => st.lookup(target).is_none_or(|old| old.shape() == v.shape()),
        };
        if ok {
            Ok(())
        } else {
            Err(ExprError::new(ErrorKind::TypeMismatch, target))
        }
    }

    fn record(&mut self, cmd: &Command, st: &MachineState) {
        if let Some(trace) = &mut self.trace {
            trace.push(TraceEntry {
                step: self.step,
                command_text: cmd.to_string(),
                state_after: st.clone(),
            });
        }
    }
}

/// Executes one command from `st`, numbering from step 1.
pub fn exec_command(
    cmd: &Command,
    st: MachineState,
    decls: &Declarations,
) -> Result<MachineState, Fault> {
    Machine::new(decls).exec(cmd, st)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunResult {
    pub output: Vec<Val>,
    pub mem: BTreeMap<String, Option<Val>>,
}

pub fn run(p: &Program, input: impl IntoIterator<Item = Val>) -> Result<RunResult, Fault> {
    let mut m = Machine::new(&p.declarations);
    let st = m.initial_state(input);
    let st = m.exec_all(&p.commands, st)?;
    Ok(RunResult {
        output: st.output,
        mem: st.mem,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trace {
    pub entries: Vec<TraceEntry>,
    pub error: Option<MachineError>,
}

impl Trace {
    /// State after the last completed command, if any command completed.
    pub fn last_state(&self) -> Option<&MachineState> {
        self.entries.last().map(|e| &e.state_after)
    }
}

/// One line per entry, then the error line if the run aborted.
impl fmt::Display for Trace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.entries {
            writeln!(f, "{e}")?;
        }
        if let Some(err) = &self.error {
            writeln!(f, "{err}")?;
        }
        Ok(())
    }
}

pub fn trace(p: &Program, input: impl IntoIterator<Item = Val>) -> Trace {
    let mut m = Machine::recording(&p.declarations);
    let st = m.initial_state(input);
    let error = m.exec_all(&p.commands, st).err().map(|f| f.error);
    Trace {
        entries: m.take_trace(),
        error,
    }
}
