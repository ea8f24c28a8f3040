use std::fmt;

use indexmap::IndexMap;

use crate::content::{TypeExpr, Val};

/// Words that cannot be used as identifiers in machine programs.
pub const RESERVED: [&str; 10] = [
    "var", "read", "emit", "cmp", "true", "false", "inj", "markup", "uri", "const",
];

pub fn is_reserved(word: &str) -> bool {
    RESERVED.contains(&word)
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Expression {
    Lit(Val),
    Ident(String),
    Tuple(Vec<Expression>),
    /// 1-based component selection.
    Proj(Box<Expression>, usize),
}

impl Expression {
    pub fn ident(name: impl Into<String>) -> Expression {
        Expression::Ident(name.into())
    }

    pub fn proj(e: Expression, index: usize) -> Expression {
        Expression::Proj(Box::new(e), index)
    }
}

impl fmt::Display for Expression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            // a tuple literal would read back as a tuple expression
            Expression::Lit(v @ Val::Tuple(_)) => write!(f, "const {v}"),
            Expression::Lit(v) => write!(f, "{v}"),
            Expression::Ident(name) => f.write_str(name),
            Expression::Tuple(items) => {
                f.write_str("(")?;
                for (i, e) in items.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{e}")?;
                }
                f.write_str(")")
            }
            Expression::Proj(e, k) => write!(f, "{e}.{k}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Command {
    Assign(String, Expression),
    /// Branch on structural equality of the two values.
    Cmp {
        left: Expression,
        right: Expression,
        then_block: Vec<Command>,
        else_block: Vec<Command>,
    },
    Read(String),
    Emit(Expression),
}

impl Command {
    pub fn assign(target: impl Into<String>, value: Expression) -> Command {
        Command::Assign(target.into(), value)
    }

    /// Number of commands including those nested in blocks.
    pub fn size(&self) -> usize {
        match self {
            Command::Cmp {
                then_block,
                else_block,
                ..
            } => 1 + block_size(then_block) + block_size(else_block),
            _ => 1,
        }
    }
}

pub(crate) fn block_size(cmds: &[Command]) -> usize {
    cmds.iter().map(Command::size).sum()
}

fn write_block(f: &mut fmt::Formatter<'_>, cmds: &[Command]) -> fmt::Result {
    if cmds.is_empty() {
        return f.write_str("{ }");
    }
    f.write_str("{ ")?;
    for (i, c) in cmds.iter().enumerate() {
        if i > 0 {
            f.write_str("; ")?;
        }
        write!(f, "{c}")?;
    }
    f.write_str(" }")
}

/// Canonical single-line rendering, used in traces and error messages.
impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Command::Assign(target, e) => write!(f, "{target} = {e}"),
            Command::Cmp {
                left,
                right,
                then_block,
                else_block,
            } => {
                write!(f, "cmp {left} {right} ")?;
                write_block(f, then_block)?;
                f.write_str(" ")?;
                write_block(f, else_block)
            }
            Command::Read(target) => write!(f, "read {target}"),
            Command::Emit(e) => write!(f, "emit {e}"),
        }
    }
}

pub fn render_command(c: &Command) -> String {
    c.to_string()
}

/// Declared identifier types, in declaration order.
pub type Declarations = IndexMap<String, TypeExpr>;

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Program {
    pub declarations: Declarations,
    pub commands: Vec<Command>,
}

impl Program {
    pub fn new(declarations: Declarations, commands: Vec<Command>) -> Program {
        Program {
            declarations,
            commands,
        }
    }

    /// Total number of steps a run that takes every branch could execute
    /// at most.
    pub fn size(&self) -> usize {
        block_size(&self.commands)
    }
}

/// Canonical `.amc` text: declarations first, then one command per line.
impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (name, ty) in &self.declarations {
            writeln!(f, "var {name}: {ty}")?;
        }
        for c in &self.commands {
            writeln!(f, "{c}")?;
        }
        Ok(())
    }
}
