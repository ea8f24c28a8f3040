use super::program::{is_reserved, Command, Declarations, Expression, Program};
use crate::syntax::{Diagnostic, Diagnostics, Parser, Tok};

/// Parses `.amc` program text.
pub fn parse_program(src: &str) -> Result<Program, Diagnostics> {
    let mut p = Parser::new(src)?;
    let mut declarations = Declarations::new();
    let mut commands = Vec::new();
    loop {
        p.skip_separators();
        if p.at_eof() {
            break;
        }
        if p.at_keyword("var") {
            let pos = p.pos();
            if !commands.is_empty() {
                return Err(Diagnostic::new(pos, "declarations must precede commands").into());
            }
            p.bump();
            let (name, name_pos) = target(&mut p)?;
            p.expect(&Tok::Colon)?;
            let ty = p.type_expr()?;
            if declarations.contains_key(&name) {
                return Err(Diagnostic::new(name_pos, format!("`{name}` declared twice")).into());
            }
            declarations.insert(name, ty);
        } else {
            commands.push(command(&mut p)?);
        }
        if !p.at_eof() {
            match p.peek() {
                Tok::Newline | Tok::Semi => {}
                _ => return Err(p.unexpected("end of statement").into()),
            }
        }
    }
    Ok(Program::new(declarations, commands))
}

/// Parses one command occupying the whole input.
pub fn parse_command(src: &str) -> Result<Command, Diagnostic> {
    let mut p = Parser::new(src)?;
    let c = command(&mut p)?;
    p.skip_separators();
    if !p.at_eof() {
        return Err(p.unexpected("end of input"));
    }
    Ok(c)
}

pub fn parse_expression(src: &str) -> Result<Expression, Diagnostic> {
    let mut p = Parser::new(src)?;
    let e = expression(&mut p)?;
    p.skip_newlines();
    if !p.at_eof() {
        return Err(p.unexpected("end of input"));
    }
    Ok(e)
}

fn target(p: &mut Parser) -> Result<(String, crate::syntax::Pos), Diagnostic> {
    let (name, pos) = p.ident()?;
    if is_reserved(&name) {
        return Err(Diagnostic::new(pos, format!("`{name}` is a reserved word")));
    }
    Ok((name, pos))
}

fn command(p: &mut Parser) -> Result<Command, Diagnostic> {
    if p.eat_keyword("read") {
        return Ok(Command::Read(target(p)?.0));
    }
    if p.eat_keyword("emit") {
        return Ok(Command::Emit(expression(p)?));
    }
    if p.eat_keyword("cmp") {
        let left = expression(p)?;
        let right = expression(p)?;
        let then_block = block(p)?;
        let else_block = block(p)?;
        return Ok(Command::Cmp {
            left,
            right,
            then_block,
            else_block,
        });
    }
    let (name, _) = target(p)?;
    p.expect(&Tok::Eq)?;
    Ok(Command::Assign(name, expression(p)?))
}

fn block(p: &mut Parser) -> Result<Vec<Command>, Diagnostic> {
    p.expect_sig(&Tok::LBrace)?;
    let mut cmds = Vec::new();
    loop {
        p.skip_separators();
        if p.eat(&Tok::RBrace) {
            return Ok(cmds);
        }
        cmds.push(command(p)?);
        match p.peek() {
            Tok::Newline | Tok::Semi | Tok::RBrace => {}
            _ => return Err(p.unexpected("`;` or `}`")),
        }
    }
}

fn expression(p: &mut Parser) -> Result<Expression, Diagnostic> {
    let mut e = primary(p)?;
    while *p.peek() == Tok::Dot {
        p.bump();
        let pos = p.pos();
        match p.peek().clone() {
            Tok::Int(k) if k >= 1 => {
                p.bump();
                e = Expression::proj(e, k as usize);
            }
            _ => return Err(Diagnostic::new(pos, "projection index must be a positive integer")),
        }
    }
    Ok(e)
}

fn primary(p: &mut Parser) -> Result<Expression, Diagnostic> {
    if *p.peek() == Tok::LParen {
        let pos = p.bump().pos;
        let mut items = vec![expression(p)?];
        while p.eat_sig(&Tok::Comma) {
            items.push(expression(p)?);
        }
        p.expect_sig(&Tok::RParen)?;
        if items.len() == 1 {
            return Err(Diagnostic::new(pos, "tuples need at least two components"));
        }
        return Ok(Expression::Tuple(items));
    }
    if p.eat_keyword("const") {
        return Ok(Expression::Lit(p.literal()?));
    }
    if p.at_literal() {
        return Ok(Expression::Lit(p.literal()?));
    }
    match p.peek().clone() {
        Tok::Ident(name) if !is_reserved(&name) => {
            p.bump();
            Ok(Expression::Ident(name))
        }
        _ => Err(p.unexpected("an expression")),
    }
}
