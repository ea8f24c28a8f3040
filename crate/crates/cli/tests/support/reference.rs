//! An independent big-step evaluator for machine programs. It shares only
//! the syntax tree with the engine.

use std::collections::{BTreeMap, VecDeque};
use std::mem::discriminant;

use ecm_core::content::{AtomicKind, TypeExpr, Val};
use ecm_core::machine::{Command, Declarations, ErrorKind, Expression};

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub error: Option<(ErrorKind, usize)>,
    pub output: Vec<Val>,
    pub mem: BTreeMap<String, Option<Val>>,
}

#[derive(Clone)]
struct State {
    mem: BTreeMap<String, Option<Val>>,
    input: VecDeque<Val>,
    output: Vec<Val>,
}

fn fits(v: &Val, t: &TypeExpr) -> bool {
    match t {
        TypeExpr::Atomic(AtomicKind::Int) => matches!(v, Val::Int(_)),
        TypeExpr::Atomic(AtomicKind::Text) => matches!(v, Val::Text(_)),
        TypeExpr::Atomic(AtomicKind::Bool) => matches!(v, Val::Bool(_)),
        TypeExpr::Atomic(AtomicKind::Markup) => matches!(v, Val::Markup(_)),
        TypeExpr::Atomic(AtomicKind::Date) => matches!(v, Val::Date(_)),
        TypeExpr::Atomic(AtomicKind::Uri) => matches!(v, Val::Uri(_)),
        TypeExpr::Finite { name, literals } => match v {
            Val::Finite { domain, literal } => domain == name && literals.contains(literal),
            _ => false,
        },
        TypeExpr::Product(ts) => match v {
            Val::Tuple(vs) => vs.len() == ts.len() && vs.iter().zip(ts).all(|(v, t)| fits(v, t)),
            _ => false,
        },
        TypeExpr::Seq(t) => match v {
            Val::Seq(vs) => vs.iter().all(|v| fits(v, t)),
            _ => false,
        },
        TypeExpr::Sum(vs) => match v {
            Val::Inj { tag, value } => vs.iter().any(|(t, ty)| t == tag && fits(value, ty)),
            _ => false,
        },
        TypeExpr::Fn(..) => false,
    }
}

fn same_shape(a: &Val, b: &Val) -> bool {
    match (a, b) {
        (Val::Tuple(x), Val::Tuple(y)) => {
            x.len() == y.len() && x.iter().zip(y).all(|(a, b)| same_shape(a, b))
        }
        (Val::Finite { domain: x, .. }, Val::Finite { domain: y, .. }) => x == y,
        _ => discriminant(a) == discriminant(b),
    }
}

fn eval(e: &Expression, s: &State) -> Result<Val, ErrorKind> {
    match e {
        Expression::Lit(v) => Ok(v.clone()),
        Expression::Ident(x) => match s.mem.get(x) {
            Some(Some(v)) => Ok(v.clone()),
            _ => Err(ErrorKind::UnboundIdentifier),
        },
        Expression::Tuple(es) => {
            let mut vs = Vec::new();
            for e in es {
                vs.push(eval(e, s)?);
            }
            Ok(Val::Tuple(vs))
        }
        Expression::Proj(e, k) => match eval(e, s)? {
            Val::Tuple(vs) if *k >= 1 && *k <= vs.len() => Ok(vs[*k - 1].clone()),
            _ => Err(ErrorKind::BadProjection),
        },
    }
}

fn admissible(decls: &Declarations, s: &State, x: &str, v: &Val) -> bool {
    match decls.get(x) {
        Some(t) => fits(v, t),
        None => match s.mem.get(x) {
            Some(Some(old)) => same_shape(old, v),
            _ => true,
        },
    }
}

/// `C[c] s`: the state after `c`, or the error with its step number.
fn command(
    decls: &Declarations,
    c: &Command,
    s: State,
    step: &mut usize,
) -> Result<State, (ErrorKind, usize, State)> {
    *step += 1;
    let n = *step;
    match c {
        Command::Assign(x, e) => {
            let v = match eval(e, &s) {
                Ok(v) => v,
                Err(k) => return Err((k, n, s)),
            };
            if !admissible(decls, &s, x, &v) {
                return Err((ErrorKind::TypeMismatch, n, s));
            }
            let mut t = s;
            t.mem.insert(x.clone(), Some(v));
            Ok(t)
        }
        Command::Read(x) => {
            let Some(v) = s.input.front().cloned() else {
                return Err((ErrorKind::InputExhausted, n, s));
            };
            if !admissible(decls, &s, x, &v) {
                return Err((ErrorKind::TypeMismatch, n, s));
            }
            let mut t = s;
            t.input.pop_front();
            t.mem.insert(x.clone(), Some(v));
            Ok(t)
        }
        Command::Emit(e) => match eval(e, &s) {
            Ok(v) => {
                let mut t = s;
                t.output.push(v);
                Ok(t)
            }
            Err(k) => Err((k, n, s)),
        },
        Command::Cmp {
            left,
            right,
            then_block,
            else_block,
        } => {
            let l = match eval(left, &s) {
                Ok(v) => v,
                Err(k) => return Err((k, n, s)),
            };
            let r = match eval(right, &s) {
                Ok(v) => v,
                Err(k) => return Err((k, n, s)),
            };
            if !same_shape(&l, &r) {
                return Err((ErrorKind::CompareTypeMismatch, n, s));
            }
            block(decls, if l == r { then_block } else { else_block }, s, step)
        }
    }
}

fn block(
    decls: &Declarations,
    cs: &[Command],
    s: State,
    step: &mut usize,
) -> Result<State, (ErrorKind, usize, State)> {
    let mut s = s;
    for c in cs {
        s = command(decls, c, s, step)?;
    }
    Ok(s)
}

pub fn run(decls: &Declarations, cs: &[Command], input: &[Val]) -> Outcome {
    let s = State {
        mem: decls.keys().map(|k| (k.clone(), None)).collect(),
        input: input.iter().cloned().collect(),
        output: Vec::new(),
    };
    let mut step = 0;
    match block(decls, cs, s, &mut step) {
        Ok(s) => Outcome {
            error: None,
            output: s.output,
            mem: s.mem,
        },
        Err((k, n, s)) => Outcome {
            error: Some((k, n)),
            output: s.output,
            mem: s.mem,
        },
    }
}
