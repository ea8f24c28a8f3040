//! Shared lexical layer for every textual format: programs, models,
//! documents, contexts and predicates.

use std::fmt;

use chrono::NaiveDate;

use crate::content::{TypeExpr, Val};

/// A positioned parse or validation message. Lines and columns are 1-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl Diagnostic {
    pub fn new(pos: Pos, message: impl Into<String>) -> Diagnostic {
        Diagnostic {
            line: pos.line,
            col: pos.col,
            message: message.into(),
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.col, self.message)
    }
}

impl std::error::Error for Diagnostic {}

/// Non-empty list of diagnostics, returned by the file parsers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostics(pub Vec<Diagnostic>);

impl Diagnostics {
    pub fn iter(&self) -> impl Iterator<Item = &Diagnostic> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl From<Diagnostic> for Diagnostics {
    fn from(d: Diagnostic) -> Self {
        Diagnostics(vec![d])
    }
}

impl fmt::Display for Diagnostics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, d) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("\n")?;
            }
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

impl std::error::Error for Diagnostics {}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Int(i64),
    Str(String),
    Date(NaiveDate),
    LBrace,
    RBrace,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Semi,
    Colon,
    PathSep,
    Dot,
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    Newline,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Int(n) => write!(f, "integer {n}"),
            Tok::Str(_) => f.write_str("string literal"),
            Tok::Date(d) => write!(f, "date {}", d.format("%Y-%m-%d")),
            Tok::LBrace => f.write_str("`{`"),
            Tok::RBrace => f.write_str("`}`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::LBracket => f.write_str("`[`"),
            Tok::RBracket => f.write_str("`]`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::Semi => f.write_str("`;`"),
            Tok::Colon => f.write_str("`:`"),
            Tok::PathSep => f.write_str("`::`"),
            Tok::Dot => f.write_str("`.`"),
            Tok::Eq => f.write_str("`=`"),
            Tok::Ne => f.write_str("`!=`"),
            Tok::Lt => f.write_str("`<`"),
            Tok::Le => f.write_str("`<=`"),
            Tok::Gt => f.write_str("`>`"),
            Tok::Ge => f.write_str("`>=`"),
            Tok::Newline => f.write_str("end of line"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub tok: Tok,
    pub pos: Pos,
}

pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

pub(crate) fn write_ident_list(f: &mut fmt::Formatter<'_>, items: &[String]) -> fmt::Result {
    for (i, item) in items.iter().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        f.write_str(item)?;
    }
    Ok(())
}

pub(crate) fn write_string_literal(f: &mut fmt::Formatter<'_>, s: &str) -> fmt::Result {
    f.write_str("\"")?;
    for c in s.chars() {
        match c {
            '"' => f.write_str("\\\"")?,
            '\\' => f.write_str("\\\\")?,
            '\n' => f.write_str("\\n")?,
            '\t' => f.write_str("\\t")?,
            '\r' => f.write_str("\\r")?,
            c if c.is_control() => write!(f, "\\u{{{:x}}}", c as u32)?,
            c => write!(f, "{c}")?,
        }
    }
    f.write_str("\"")
}

pub fn lex(src: &str) -> Result<Vec<Token>, Diagnostic> {
    Lexer::new(src).run()
}

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    rest: &'a str,
    line: usize,
    col: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer {
            chars: src.chars().peekable(),
            rest: src,
            line: 1,
            col: 1,
        }
    }

    fn pos(&self) -> Pos {
        Pos {
            line: self.line,
            col: self.col,
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.chars.peek().copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        self.rest = &self.rest[c.len_utf8()..];
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn run(mut self) -> Result<Vec<Token>, Diagnostic> {
        let mut out = Vec::new();
        loop {
            let pos = self.pos();
            let Some(c) = self.peek() else {
                out.push(Token { tok: Tok::Eof, pos });
                return Ok(out);
            };
            let tok = match c {
                ' ' | '\t' | '\r' => {
                    self.bump();
                    continue;
                }
                '#' => {
                    while self.peek().is_some_and(|c| c != '\n') {
                        self.bump();
                    }
                    continue;
                }
                '\n' => {
                    self.bump();
                    Tok::Newline
                }
                '"' => Tok::Str(self.string(pos)?),
                c if c.is_ascii_digit() => self.number(pos, false)?,
                '-' => {
                    self.bump();
                    if !self.peek().is_some_and(|c| c.is_ascii_digit()) {
                        return Err(Diagnostic::new(pos, "expected digits after `-`"));
                    }
                    self.number(pos, true)?
                }
                c if c.is_ascii_alphabetic() => {
                    let mut s = String::new();
                    while let Some(c) = self.peek() {
                        if c.is_ascii_alphanumeric() || c == '_' {
                            s.push(c);
                            self.bump();
                        } else {
                            break;
                        }
                    }
                    Tok::Ident(s)
                }
                _ => {
                    self.bump();
                    match c {
                        '{' => Tok::LBrace,
                        '}' => Tok::RBrace,
                        '(' => Tok::LParen,
                        ')' => Tok::RParen,
                        '[' => Tok::LBracket,
                        ']' => Tok::RBracket,
                        ',' => Tok::Comma,
                        ';' => Tok::Semi,
                        '.' => Tok::Dot,
                        '=' => Tok::Eq,
                        ':' if self.peek() == Some(':') => {
                            self.bump();
                            Tok::PathSep
                        }
                        ':' => Tok::Colon,
                        '!' if self.peek() == Some('=') => {
                            self.bump();
                            Tok::Ne
                        }
                        '<' if self.peek() == Some('=') => {
                            self.bump();
                            Tok::Le
                        }
                        '<' => Tok::Lt,
                        '>' if self.peek() == Some('=') => {
                            self.bump();
                            Tok::Ge
                        }
                        '>' => Tok::Gt,
                        other => {
                            return Err(Diagnostic::new(
                                pos,
                                format!("unexpected character `{other}`"),
                            ))
                        }
                    }
                }
            };
            out.push(Token { tok, pos });
        }
    }

    fn number(&mut self, pos: Pos, negative: bool) -> Result<Tok, Diagnostic> {
        // YYYY-MM-DD is a date, anything else numeric is an integer
        if !negative {
            let bytes = self.rest.as_bytes();
            let is_date = bytes.len() >= 10
                && bytes[..4].iter().all(u8::is_ascii_digit)
                && bytes[4] == b'-'
                && bytes[5..7].iter().all(u8::is_ascii_digit)
                && bytes[7] == b'-'
                && bytes[8..10].iter().all(u8::is_ascii_digit)
                && !bytes.get(10).is_some_and(|b| b.is_ascii_alphanumeric());
            if is_date {
                let text = &self.rest[..10];
                let date = NaiveDate::parse_from_str(text, "%Y-%m-%d")
                    .map_err(|_| Diagnostic::new(pos, format!("invalid date `{text}`")))?;
                for _ in 0..10 {
                    self.bump();
                }
                return Ok(Tok::Date(date));
            }
        }
        let mut digits = String::new();
        if negative {
            digits.push('-');
        }
        while let Some(c) = self.peek() {
            if c.is_ascii_digit() {
                digits.push(c);
                self.bump();
            } else {
                break;
            }
        }
        if self.peek().is_some_and(|c| c.is_ascii_alphabetic() || c == '_') {
            return Err(Diagnostic::new(pos, "malformed number"));
        }
        digits
            .parse::<i64>()
            .map(Tok::Int)
            .map_err(|_| Diagnostic::new(pos, format!("integer `{digits}` out of range")))
    }

    fn string(&mut self, pos: Pos) -> Result<String, Diagnostic> {
        self.bump();
        let mut s = String::new();
        loop {
            let Some(c) = self.bump() else {
                return Err(Diagnostic::new(pos, "unterminated string literal"));
            };
            match c {
                '"' => return Ok(s),
                '\n' => return Err(Diagnostic::new(pos, "unterminated string literal")),
                '\\' => {
                    let esc_pos = self.pos();
                    match self.bump() {
                        Some('"') => s.push('"'),
                        Some('\\') => s.push('\\'),
                        Some('n') => s.push('\n'),
                        Some('t') => s.push('\t'),
                        Some('r') => s.push('\r'),
                        Some('u') => s.push(self.unicode_escape(esc_pos)?),
                        _ => return Err(Diagnostic::new(esc_pos, "unknown escape sequence")),
                    }
                }
                c => s.push(c),
            }
        }
    }

    fn unicode_escape(&mut self, pos: Pos) -> Result<char, Diagnostic> {
        let bad = || Diagnostic::new(pos, "malformed unicode escape");
        if self.bump() != Some('{') {
            return Err(bad());
        }
        let mut hex = String::new();
        loop {
            match self.bump() {
                Some('}') => break,
                Some(c) if c.is_ascii_hexdigit() && hex.len() < 6 => hex.push(c),
                _ => return Err(bad()),
            }
        }
        u32::from_str_radix(&hex, 16)
            .ok()
            .and_then(char::from_u32)
            .ok_or_else(bad)
    }
}

/// Cursor over a token vector. Newlines are significant only where the
/// caller asks for them; the `*_sig` helpers skip over them.
pub struct Parser {
    toks: Vec<Token>,
    at: usize,
}

impl Parser {
    pub fn new(src: &str) -> Result<Parser, Diagnostic> {
        Ok(Parser {
            toks: lex(src)?,
            at: 0,
        })
    }

    pub fn peek(&self) -> &Tok {
        &self.toks[self.at].tok
    }

    pub fn pos(&self) -> Pos {
        self.toks[self.at].pos
    }

    pub fn peek_nth(&self, n: usize) -> &Tok {
        let i = (self.at + n).min(self.toks.len() - 1);
        &self.toks[i].tok
    }

    pub fn bump(&mut self) -> Token {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    pub fn mark(&self) -> usize {
        self.at
    }

    pub fn reset(&mut self, mark: usize) {
        self.at = mark;
    }

    pub fn skip_newlines(&mut self) {
        while *self.peek() == Tok::Newline {
            self.bump();
        }
    }

    /// Skips newlines and `;` separators.
    pub fn skip_separators(&mut self) {
        while matches!(self.peek(), Tok::Newline | Tok::Semi) {
            self.bump();
        }
    }

    pub fn at_eof(&self) -> bool {
        *self.peek() == Tok::Eof
    }

    pub fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == tok {
            self.bump();
            true
        } else {
            false
        }
    }

    pub fn eat_sig(&mut self, tok: &Tok) -> bool {
        self.skip_newlines();
        self.eat(tok)
    }

    pub fn at_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    pub fn eat_keyword(&mut self, kw: &str) -> bool {
        if self.at_keyword(kw) {
            self.bump();
            true
        } else {
            false
        }
    }

    pub fn error_here(&self, message: impl Into<String>) -> Diagnostic {
        Diagnostic::new(self.pos(), message)
    }

    pub fn unexpected(&self, what: &str) -> Diagnostic {
        self.error_here(format!("expected {what}, found {}", self.peek()))
    }

    pub fn expect(&mut self, tok: &Tok) -> Result<Pos, Diagnostic> {
        if self.peek() == tok {
            Ok(self.bump().pos)
        } else {
            Err(self.unexpected(&tok.to_string()))
        }
    }

    pub fn expect_sig(&mut self, tok: &Tok) -> Result<Pos, Diagnostic> {
        self.skip_newlines();
        self.expect(tok)
    }

    pub fn expect_keyword(&mut self, kw: &str) -> Result<Pos, Diagnostic> {
        if self.at_keyword(kw) {
            Ok(self.bump().pos)
        } else {
            Err(self.unexpected(&format!("`{kw}`")))
        }
    }

    pub fn ident(&mut self) -> Result<(String, Pos), Diagnostic> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                let pos = self.bump().pos;
                Ok((s, pos))
            }
            _ => Err(self.unexpected("identifier")),
        }
    }

    /// Any token sequence that ends a statement: newline, `;`, `}` or EOF.
    /// Consumes a newline or `;` if present.
    pub fn end_of_statement(&mut self) -> Result<(), Diagnostic> {
        match self.peek() {
            Tok::Newline | Tok::Semi => {
                self.bump();
                Ok(())
            }
            Tok::RBrace | Tok::Eof => Ok(()),
            _ => Err(self.unexpected("end of statement")),
        }
    }

    /// True if the cursor sits on the first token of a value literal.
    pub fn at_literal(&self) -> bool {
        match self.peek() {
            Tok::Int(_) | Tok::Str(_) | Tok::Date(_) | Tok::LParen | Tok::LBracket => true,
            Tok::Ident(s) => match s.as_str() {
                "true" | "false" => true,
                "markup" | "uri" => matches!(self.peek_nth(1), Tok::Str(_)),
                "inj" => matches!(self.peek_nth(1), Tok::Ident(_)),
                _ => matches!(self.peek_nth(1), Tok::PathSep),
            },
            _ => false,
        }
    }

    /// Parses one value literal in canonical literal syntax.
    pub fn literal(&mut self) -> Result<Val, Diagnostic> {
        self.skip_newlines();
        let pos = self.pos();
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                Ok(Val::Int(n))
            }
            Tok::Str(s) => {
                self.bump();
                Ok(Val::Text(s))
            }
            Tok::Date(d) => {
                self.bump();
                Ok(Val::Date(d))
            }
            Tok::LParen => {
                self.bump();
                let items = self.literal_list(&Tok::RParen)?;
                if items.len() < 2 {
                    return Err(Diagnostic::new(pos, "tuples need at least two components"));
                }
                Ok(Val::Tuple(items))
            }
            Tok::LBracket => {
                self.bump();
                Ok(Val::Seq(self.literal_list(&Tok::RBracket)?))
            }
            Tok::Ident(word) => {
                self.bump();
                match word.as_str() {
                    "true" => Ok(Val::Bool(true)),
                    "false" => Ok(Val::Bool(false)),
                    "markup" | "uri" => match self.peek().clone() {
                        Tok::Str(s) => {
                            self.bump();
                            Ok(if word == "markup" {
                                Val::Markup(s)
                            } else {
                                Val::Uri(s)
                            })
                        }
                        _ => Err(self.unexpected("string literal")),
                    },
                    "inj" => {
                        let (tag, _) = self.ident()?;
                        self.expect(&Tok::LParen)?;
                        let value = self.literal()?;
                        self.expect_sig(&Tok::RParen)?;
                        Ok(Val::inj(tag, value))
                    }
                    _ if *self.peek() == Tok::PathSep => {
                        self.bump();
                        let (literal, _) = self.ident()?;
                        Ok(Val::finite(word, literal))
                    }
                    _ => Err(Diagnostic::new(
                        pos,
                        format!("expected a literal, found `{word}`"),
                    )),
                }
            }
            _ => Err(self.unexpected("a literal")),
        }
    }

    fn literal_list(&mut self, close: &Tok) -> Result<Vec<Val>, Diagnostic> {
        let mut items = Vec::new();
        if self.eat_sig(close) {
            return Ok(items);
        }
        loop {
            items.push(self.literal()?);
            if self.eat_sig(close) {
                return Ok(items);
            }
            self.expect_sig(&Tok::Comma)?;
        }
    }

    /// Parses a type in canonical type syntax.
    pub fn type_expr(&mut self) -> Result<TypeExpr, Diagnostic> {
        self.skip_newlines();
        let pos = self.pos();
        let wrap = |r: Result<TypeExpr, crate::content::TypeError>| {
            r.map_err(|e| Diagnostic::new(pos, e.to_string()))
        };
        match self.peek().clone() {
            Tok::LParen => {
                self.bump();
                let mut components = vec![self.type_expr()?];
                while self.eat_sig(&Tok::Comma) {
                    components.push(self.type_expr()?);
                }
                self.expect_sig(&Tok::RParen)?;
                wrap(TypeExpr::product(components))
            }
            Tok::Ident(word) => {
                self.bump();
                if let Some(kind) = crate::content::AtomicKind::from_name(&word) {
                    return Ok(TypeExpr::Atomic(kind));
                }
                match word.as_str() {
                    "enum" => {
                        let (name, _) = self.ident()?;
                        self.expect_sig(&Tok::LBrace)?;
                        let mut literals = Vec::new();
                        loop {
                            self.skip_newlines();
                            literals.push(self.ident()?.0);
                            if self.eat_sig(&Tok::RBrace) {
                                break;
                            }
                            self.expect_sig(&Tok::Comma)?;
                        }
                        wrap(TypeExpr::finite(name, literals))
                    }
                    "Seq" => {
                        self.expect(&Tok::Lt)?;
                        let elem = self.type_expr()?;
                        self.expect_sig(&Tok::Gt)?;
                        Ok(TypeExpr::seq(elem))
                    }
                    "Fn" => {
                        self.expect(&Tok::Lt)?;
                        let dom = self.type_expr()?;
                        self.expect_sig(&Tok::Comma)?;
                        let cod = self.type_expr()?;
                        self.expect_sig(&Tok::Gt)?;
                        Ok(TypeExpr::func(dom, cod))
                    }
                    "Sum" => {
                        self.expect(&Tok::Lt)?;
                        let mut variants = Vec::new();
                        loop {
                            self.skip_newlines();
                            let (tag, _) = self.ident()?;
                            self.expect_sig(&Tok::Colon)?;
                            variants.push((tag, self.type_expr()?));
                            if self.eat_sig(&Tok::Gt) {
                                break;
                            }
                            self.expect_sig(&Tok::Comma)?;
                        }
                        wrap(TypeExpr::sum(variants))
                    }
                    _ => Err(Diagnostic::new(pos, format!("unknown type name `{word}`"))),
                }
            }
            _ => Err(self.unexpected("a type")),
        }
    }
}

/// Parses a single literal occupying the whole input.
pub fn parse_literal(src: &str) -> Result<Val, Diagnostic> {
    let mut p = Parser::new(src)?;
    let v = p.literal()?;
    p.skip_newlines();
    if !p.at_eof() {
        return Err(p.unexpected("end of input"));
    }
    Ok(v)
}

/// Parses a single type occupying the whole input.
pub fn parse_type(src: &str) -> Result<TypeExpr, Diagnostic> {
    let mut p = Parser::new(src)?;
    let t = p.type_expr()?;
    p.skip_newlines();
    if !p.at_eof() {
        return Err(p.unexpected("end of input"));
    }
    Ok(t)
}

/// Parses a file of literals, one per line, for machine input.
pub fn parse_value_lines(src: &str) -> Result<Vec<Val>, Diagnostic> {
    let mut p = Parser::new(src)?;
    let mut out = Vec::new();
    loop {
        p.skip_newlines();
        if p.at_eof() {
            return Ok(out);
        }
        out.push(p.literal()?);
        match p.peek() {
            Tok::Newline | Tok::Eof => {}
            _ => return Err(p.unexpected("end of line")),
        }
    }
}
