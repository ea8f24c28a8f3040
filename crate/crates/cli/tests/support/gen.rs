//! Random generators for programs, domains and predicates.

use chrono::NaiveDate;
use ecm_core::content::{CmpOp, Operand, Predicate, TypeExpr, Val};
use ecm_core::machine::{Command, Declarations, Expression, Program};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub const IDENTS: [&str; 5] = ["a", "b", "c", "d", "e"];
pub const MAX_COMMANDS: usize = 20;

pub fn value(rng: &mut ChaCha8Rng) -> Val {
    match rng.gen_range(0..100) {
        0..=34 => Val::Int(rng.gen_range(-2..=2)),
        35..=54 => Val::text(["", "x", "y"].choose(rng).unwrap().to_string()),
        55..=64 => Val::Bool(rng.gen()),
        65..=79 => Val::Tuple(vec![Val::Int(rng.gen_range(0..=1)), Val::text("x")]),
        80..=89 => Val::Seq((0..rng.gen_range(0..=2)).map(Val::Int).collect()),
        _ => Val::Tuple(vec![
            Val::Int(rng.gen_range(0..=1)),
            Val::Tuple(vec![Val::Int(1), Val::text("y")]),
        ]),
    }
}

pub fn type_expr(rng: &mut ChaCha8Rng) -> TypeExpr {
    match rng.gen_range(0..5) {
        0 => TypeExpr::INT,
        1 => TypeExpr::TEXT,
        2 => TypeExpr::BOOL,
        3 => TypeExpr::product(vec![TypeExpr::INT, TypeExpr::TEXT]).unwrap(),
        _ => TypeExpr::seq(TypeExpr::INT),
    }
}

fn ident(rng: &mut ChaCha8Rng) -> String {
    IDENTS.choose(rng).unwrap().to_string()
}

pub fn expression(rng: &mut ChaCha8Rng, depth: usize) -> Expression {
    let pick = if depth == 0 {
        rng.gen_range(0..60)
    } else {
        rng.gen_range(0..100)
    };
    match pick {
        0..=24 => Expression::Lit(value(rng)),
        25..=59 => Expression::Ident(ident(rng)),
        60..=79 => Expression::Tuple(
            (0..rng.gen_range(2..=3))
                .map(|_| expression(rng, depth - 1))
                .collect(),
        ),
        _ => Expression::Proj(Box::new(expression(rng, depth - 1)), rng.gen_range(1..=3)),
    }
}

fn commands(rng: &mut ChaCha8Rng, budget: &mut usize, depth: usize) -> Vec<Command> {
    let len = rng.gen_range(0..=6.min(*budget));
    let mut out = Vec::new();
    for _ in 0..len {
        if *budget == 0 {
            break;
        }
        *budget -= 1;
        let c = match rng.gen_range(0..100) {
            0..=34 => Command::Assign(ident(rng), expression(rng, 2)),
            35..=49 => Command::Read(ident(rng)),
            50..=79 => Command::Emit(expression(rng, 2)),
            _ if depth < 2 => Command::Cmp {
                left: expression(rng, 1),
                right: expression(rng, 1),
                then_block: commands(rng, budget, depth + 1),
                else_block: commands(rng, budget, depth + 1),
            },
            _ => Command::Emit(expression(rng, 1)),
        };
        out.push(c);
    }
    out
}

/// A program of at most 20 commands (nested ones included) over at most
/// five identifiers, about half of them declared.
pub fn program(rng: &mut ChaCha8Rng) -> Program {
    let mut declarations = Declarations::new();
    for x in IDENTS {
        if rng.gen_bool(0.5) {
            declarations.insert(x.to_string(), type_expr(rng));
        }
    }
    let mut budget = rng.gen_range(1..=MAX_COMMANDS);
    let commands = commands(rng, &mut budget, 0);
    Program::new(declarations, commands)
}

pub fn input(rng: &mut ChaCha8Rng) -> Vec<Val> {
    (0..rng.gen_range(0..=4)).map(|_| value(rng)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Int,
    Text,
    Date,
}

pub fn scalar(rng: &mut ChaCha8Rng, kind: Kind) -> Val {
    match kind {
        Kind::Int => Val::Int(rng.gen_range(-20..=20)),
        Kind::Text => {
            let len = rng.gen_range(0..=3);
            Val::text((0..len).map(|_| *['a', 'b', 'c', 'A', 'é'].choose(rng).unwrap()).collect::<String>())
        }
        Kind::Date => Val::Date(
            NaiveDate::from_ymd_opt(2003, 12, 20).unwrap()
                + chrono::Days::new(rng.gen_range(0..60)),
        ),
    }
}

pub fn domain(rng: &mut ChaCha8Rng, kind: Kind) -> Vec<Val> {
    (0..rng.gen_range(0..=64)).map(|_| scalar(rng, kind)).collect()
}

/// A predicate over `v` of nesting depth at most `depth`. Literals are of
/// `kind`, except for an occasional foreign one.
pub fn predicate(rng: &mut ChaCha8Rng, kind: Kind, depth: usize) -> Predicate {
    let leaf = depth == 0 || rng.gen_bool(0.3);
    if leaf {
        if rng.gen_bool(0.05) {
            return Predicate::Const(rng.gen());
        }
        let lit_kind = if rng.gen_bool(0.03) {
            *[Kind::Int, Kind::Text, Kind::Date].choose(rng).unwrap()
        } else {
            kind
        };
        let lit = Operand::Lit(scalar(rng, lit_kind));
        let op = *CmpOp::ALL.choose(rng).unwrap();
        return if rng.gen_bool(0.5) {
            Predicate::cmp(Operand::Itself, op, lit)
        } else {
            Predicate::cmp(lit, op, Operand::Itself)
        };
    }
    match rng.gen_range(0..3) {
        0 => predicate(rng, kind, depth - 1).not(),
        1 => predicate(rng, kind, depth - 1).and(predicate(rng, kind, depth - 1)),
        _ => predicate(rng, kind, depth - 1).or(predicate(rng, kind, depth - 1)),
    }
}
