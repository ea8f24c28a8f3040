use std::collections::BTreeMap;
use std::fmt;

use super::status::RegistrationStatus;
use crate::content::Val;
use crate::syntax::{Diagnostic, Diagnostics, Parser, Tok};

/// The parameter groups of the personalization functional, in the order
/// they are applied.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Group {
    /// Client interface parameters.
    V,
    /// Data access device parameters.
    E,
    /// Personal preferences.
    S,
    /// Registration status.
    P,
}

impl Group {
    pub const ALL: [Group; 4] = [Group::V, Group::E, Group::S, Group::P];

    pub fn prefix(self) -> &'static str {
        match self {
            Group::V => "v",
            Group::E => "e",
            Group::S => "s",
            Group::P => "p",
        }
    }

    pub(crate) fn keyed(prefix: &str) -> Option<Group> {
        match prefix {
            "v" => Some(Group::V),
            "e" => Some(Group::E),
            "s" => Some(Group::S),
            _ => None,
        }
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.prefix())
    }
}

/// One assignment of the functional's parameters: `(v, e, s, p)`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PersonalizationContext {
    pub v: BTreeMap<String, Val>,
    pub e: BTreeMap<String, Val>,
    pub s: BTreeMap<String, Val>,
    pub p: RegistrationStatus,
}

impl PersonalizationContext {
    pub fn with_status(p: RegistrationStatus) -> Self {
        PersonalizationContext {
            p,
            ..Default::default()
        }
    }

    /// The key map of a keyed group; `None` for `P`.
    pub fn group(&self, g: Group) -> Option<&BTreeMap<String, Val>> {
        match g {
            Group::V => Some(&self.v),
            Group::E => Some(&self.e),
            Group::S => Some(&self.s),
            Group::P => None,
        }
    }

    fn group_mut(&mut self, g: Group) -> Option<&mut BTreeMap<String, Val>> {
        match g {
            Group::V => Some(&mut self.v),
            Group::E => Some(&mut self.e),
            Group::S => Some(&mut self.s),
            Group::P => None,
        }
    }
}

impl fmt::Display for PersonalizationContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for g in [Group::V, Group::E, Group::S] {
            for (k, v) in self.group(g).into_iter().flatten() {
                writeln!(f, "{g}.{k} = {v}")?;
            }
        }
        writeln!(f, "p = {}", self.p)
    }
}

/// Parses a `.ctx` file. Missing groups stay empty; `p` defaults to
/// `anonymous`.
pub fn parse_context(src: &str) -> Result<PersonalizationContext, Diagnostics> {
    let mut p = Parser::new(src)?;
    let mut ctx = PersonalizationContext::default();
    let mut status_seen = false;
    loop {
        p.skip_separators();
        if p.at_eof() {
            return Ok(ctx);
        }
        let (head, pos) = p.ident()?;
        if head == "p" {
            if status_seen {
                return Err(Diagnostic::new(pos, "`p` assigned twice").into());
            }
            p.expect(&Tok::Eq)?;
            let (name, name_pos) = p.ident()?;
            ctx.p = RegistrationStatus::from_name(&name).ok_or_else(|| {
                Diagnostic::new(name_pos, format!("unknown registration status `{name}`"))
            })?;
            status_seen = true;
        } else {
            let group = Group::keyed(&head).ok_or_else(|| {
                Diagnostic::new(pos, format!("expected `v.`, `e.`, `s.` or `p`, found `{head}`"))
            })?;
            p.expect(&Tok::Dot)?;
            let (key, key_pos) = p.ident()?;
            p.expect(&Tok::Eq)?;
            let value_pos = p.pos();
            let value = p.literal()?;
            if !value.is_atomic() {
                return Err(Diagnostic::new(value_pos, "context values must be atomic").into());
            }
            let map = ctx.group_mut(group).expect("keyed group");
            if map.insert(key.clone(), value).is_some() {
                return Err(
                    Diagnostic::new(key_pos, format!("`{group}.{key}` assigned twice")).into(),
                );
            }
        }
        p.end_of_statement()?;
    }
}
