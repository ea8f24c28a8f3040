//! The content-binding abstract machine: state `Mem × In × Out`, pure
//! expressions, commands that bind, branch, read and emit, and traced runs.

mod exec;
mod parse;
mod program;
mod state;

pub use exec::{
    eval_expr, exec_command, run, trace, ErrorKind, ExprError, Fault, Machine, MachineError,
    RunResult, Trace, TraceEntry,
};
pub use parse::{parse_command, parse_expression, parse_program};
pub use program::{
    is_reserved, render_command, Command, Declarations, Expression, Program, RESERVED,
};
pub use state::MachineState;
