use std::cmp::Ordering;
use std::fmt;

use thiserror::Error;

use super::context::{Group, PersonalizationContext};
use super::status::RegistrationStatus;
use crate::content::{generic_expr, typecheck, CmpOp, Connectives, DigitalObject, Slot, TypeExpr, Val};
use crate::syntax::{Diagnostic, Parser, Pos, Tok};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum GuardOperand {
    /// `v.<key>`, `e.<key>` or `s.<key>`.
    Key(Group, String),
    /// `p`
    Status,
    StatusLit(RegistrationStatus),
    Lit(Val),
}

impl fmt::Display for GuardOperand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GuardOperand::Key(g, k) => write!(f, "{g}.{k}"),
            GuardOperand::Status => f.write_str("p"),
            GuardOperand::StatusLit(s) => write!(f, "{s}"),
            GuardOperand::Lit(v) => write!(f, "{v}"),
        }
    }
}

/// A condition over one parameter group of a personalization context.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Guard {
    Const(bool),
    Cmp(GuardOperand, CmpOp, GuardOperand),
    Not(Box<Guard>),
    And(Box<Guard>, Box<Guard>),
    Or(Box<Guard>, Box<Guard>),
}

impl Connectives for Guard {
    fn constant(b: bool) -> Self {
        Guard::Const(b)
    }

    fn negate(self) -> Self {
        Guard::Not(Box::new(self))
    }

    fn conj(self, other: Self) -> Self {
        Guard::And(Box::new(self), Box::new(other))
    }

    fn disj(self, other: Self) -> Self {
        Guard::Or(Box::new(self), Box::new(other))
    }
}

enum Resolved<'a> {
    Val(&'a Val),
    Status(RegistrationStatus),
    Missing,
}

impl Guard {
    pub fn cmp(left: GuardOperand, op: CmpOp, right: GuardOperand) -> Guard {
        Guard::Cmp(left, op, right)
    }

    /// Guards are total. A comparison that mentions a key absent from the
    /// context, or compares values of different shapes, does not hold.
    pub fn holds(&self, ctx: &PersonalizationContext) -> bool {
        match self {
            Guard::Const(b) => *b,
            Guard::Cmp(l, op, r) => {
                let ord = match (resolve(l, ctx), resolve(r, ctx)) {
                    (Resolved::Val(a), Resolved::Val(b)) => a.compare(b),
                    (Resolved::Status(a), Resolved::Status(b)) => Some(a.cmp(&b)),
                    _ => None,
                };
                ord.is_some_and(|o: Ordering| op.holds(o))
            }
            Guard::Not(g) => !g.holds(ctx),
            Guard::And(a, b) => a.holds(ctx) && b.holds(ctx),
            Guard::Or(a, b) => a.holds(ctx) || b.holds(ctx),
        }
    }

    /// The distinct groups read by the guard, in first-occurrence order.
    pub fn groups(&self) -> Vec<Group> {
        fn walk(g: &Guard, out: &mut Vec<Group>) {
            match g {
                Guard::Const(_) => {}
                Guard::Cmp(l, _, r) => {
                    for o in [l, r] {
                        let group = match o {
                            GuardOperand::Key(g, _) => Some(*g),
                            GuardOperand::Status => Some(Group::P),
                            _ => None,
                        };
                        if let Some(g) = group {
                            if !out.contains(&g) {
                                out.push(g);
                            }
                        }
                    }
                }
                Guard::Not(g) => walk(g, out),
                Guard::And(a, b) | Guard::Or(a, b) => {
                    walk(a, out);
                    walk(b, out);
                }
            }
        }
        let mut out = Vec::new();
        walk(self, &mut out);
        out
    }
}

fn resolve<'a>(o: &'a GuardOperand, ctx: &'a PersonalizationContext) -> Resolved<'a> {
    match o {
        GuardOperand::Key(g, k) => ctx
            .group(*g)
            .and_then(|m| m.get(k))
            .map_or(Resolved::Missing, Resolved::Val),
        GuardOperand::Status => Resolved::Status(ctx.p),
        GuardOperand::StatusLit(s) => Resolved::Status(*s),
        GuardOperand::Lit(v) => Resolved::Val(v),
    }
}

impl fmt::Display for Guard {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let atomic = |g: &Guard| matches!(g, Guard::Const(_) | Guard::Cmp(..));
        match self {
            Guard::Const(b) => write!(f, "{b}"),
            Guard::Cmp(l, op, r) => write!(f, "{l} {op} {r}"),
            Guard::Not(g) if atomic(g) => write!(f, "not {g}"),
            Guard::Not(g) => write!(f, "not ({g})"),
            Guard::And(a, b) | Guard::Or(a, b) => {
                let word = if matches!(self, Guard::And(..)) { "and" } else { "or" };
                write!(f, "{a} {word} ")?;
                if atomic(b) || matches!(**b, Guard::Not(_)) {
                    write!(f, "{b}")
                } else {
                    write!(f, "({b})")
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum RuleAction {
    /// Rebind the listed slots.
    Override(Vec<(String, Val)>),
    /// Withhold the page entirely.
    Suppress,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RuleError {
    #[error("guard must read exactly one of the groups v, e, s, p; it reads {0}")]
    GroupCount(String),
    #[error("rule for `{class}` overrides unknown slot `{slot}`")]
    UnknownSlot { class: String, slot: String },
    #[error("rule for `{class}` sets slot `{slot}` of type {ty} to {value}")]
    TypeMismatch {
        class: String,
        slot: String,
        ty: Box<TypeExpr>,
        value: Box<Val>,
    },
    #[error("rule for `{class}` overrides slot `{slot}` twice")]
    DuplicateOverride { class: String, slot: String },
}

/// A guarded specialization of one class's objects.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PersonalizationRule {
    pub class_name: String,
    pub group: Group,
    pub guard: Guard,
    pub action: RuleAction,
}

impl PersonalizationRule {
    /// Infers the rule's group from the guard, which must read exactly one.
    pub fn new(
        class_name: impl Into<String>,
        guard: Guard,
        action: RuleAction,
    ) -> Result<PersonalizationRule, RuleError> {
        let groups = guard.groups();
        if groups.len() != 1 {
            let read = if groups.is_empty() {
                "none".to_string()
            } else {
                groups.iter().map(|g| g.prefix()).collect::<Vec<_>>().join(", ")
            };
            return Err(RuleError::GroupCount(read));
        }
        Ok(PersonalizationRule {
            class_name: class_name.into(),
            group: groups[0],
            guard,
            action,
        })
    }

    /// Checks the overrides against the class's slots.
    pub fn validate(&self, slots: &[Slot]) -> Result<(), RuleError> {
        let RuleAction::Override(overrides) = &self.action else {
            return Ok(());
        };
        for (i, (name, value)) in overrides.iter().enumerate() {
            if overrides[..i].iter().any(|(n, _)| n == name) {
                return Err(RuleError::DuplicateOverride {
                    class: self.class_name.clone(),
                    slot: name.clone(),
                });
            }
            let slot = slots.iter().find(|s| &s.name == name).ok_or_else(|| {
                RuleError::UnknownSlot {
                    class: self.class_name.clone(),
                    slot: name.clone(),
                }
            })?;
            if !typecheck(value, &slot.ty) {
                return Err(RuleError::TypeMismatch {
                    class: self.class_name.clone(),
                    slot: name.clone(),
                    ty: Box::new(slot.ty.clone()),
                    value: Box::new(value.clone()),
                });
            }
        }
        Ok(())
    }
}

impl fmt::Display for PersonalizationRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "rule for {} when {} {{ ", self.class_name, self.guard)?;
        match &self.action {
            RuleAction::Suppress => f.write_str("suppress")?,
            RuleAction::Override(overrides) => {
                for (i, (slot, v)) in overrides.iter().enumerate() {
                    if i > 0 {
                        f.write_str("; ")?;
                    }
                    write!(f, "{slot} = {v}")?;
                }
            }
        }
        f.write_str(" }")
    }
}

/// Evaluates the functional `F((v),(e))(s)(p)` on a digital object.
///
/// Rules for the object's class whose guard holds are applied group by
/// group in the order v, e, s, p, and by declaration order within a group;
/// later applications overwrite earlier ones. A satisfied suppress rule
/// marks the result suppressed.
pub fn apply_functional(
    d: &DigitalObject,
    rules: &[PersonalizationRule],
    ctx: &PersonalizationContext,
) -> Result<DigitalObject, RuleError> {
    let slots: Vec<Slot> = d.bindings().iter().map(|b| b.slot.clone()).collect();
    let mut applicable: Vec<&PersonalizationRule> = rules
        .iter()
        .filter(|r| r.class_name == d.class_name())
        .collect();
    for r in &applicable {
        r.validate(&slots)?;
    }
    // stable: declaration order survives within a group
    applicable.sort_by_key(|r| r.group);

    let mut out = d.clone();
    for rule in applicable {
        if !rule.guard.holds(ctx) {
            continue;
        }
        match &rule.action {
            RuleAction::Suppress => out.set_suppressed(true),
            RuleAction::Override(overrides) => {
                for (slot, value) in overrides {
                    out.bind(slot, value.clone())
                        .expect("overrides validated against the class");
                }
            }
        }
    }
    Ok(out)
}

pub fn access_allowed(ctx: &PersonalizationContext, required: RegistrationStatus) -> bool {
    ctx.p >= required
}

pub fn parse_guard(src: &str) -> Result<Guard, Diagnostic> {
    let mut p = Parser::new(src)?;
    let g = guard(&mut p)?;
    p.skip_newlines();
    if !p.at_eof() {
        return Err(p.unexpected("`and`, `or` or end of guard"));
    }
    Ok(g)
}

pub(crate) fn guard(p: &mut Parser) -> Result<Guard, Diagnostic> {
    generic_expr(p, &mut |p| guard_comparison(p))
}

fn guard_comparison(p: &mut Parser) -> Result<Guard, Diagnostic> {
    let (left, lpos) = guard_operand(p)?;
    p.skip_newlines();
    let op = CmpOp::from_tok(p.peek()).ok_or_else(|| p.unexpected("a comparison operator"))?;
    p.bump();
    let (right, rpos) = guard_operand(p)?;
    let is_status = |o: &GuardOperand| matches!(o, GuardOperand::Status | GuardOperand::StatusLit(_));
    if is_status(&left) != is_status(&right) {
        let pos = if is_status(&left) { rpos } else { lpos };
        return Err(Diagnostic::new(
            pos,
            "registration status can only be compared with a status",
        ));
    }
    Ok(Guard::Cmp(left, op, right))
}

fn guard_operand(p: &mut Parser) -> Result<(GuardOperand, Pos), Diagnostic> {
    p.skip_newlines();
    let pos = p.pos();
    if let Tok::Ident(word) = p.peek().clone() {
        if *p.peek_nth(1) != Tok::PathSep {
            if let Some(g) = Group::keyed(&word) {
                if *p.peek_nth(1) == Tok::Dot {
                    p.bump();
                    p.bump();
                    let (key, _) = p.ident()?;
                    return Ok((GuardOperand::Key(g, key), pos));
                }
            }
            if word == "p" {
                p.bump();
                return Ok((GuardOperand::Status, pos));
            }
            if let Some(s) = RegistrationStatus::from_name(&word) {
                p.bump();
                return Ok((GuardOperand::StatusLit(s), pos));
            }
        }
    }
    if p.at_literal() {
        return Ok((GuardOperand::Lit(p.literal()?), pos));
    }
    Err(p.unexpected("`v.<key>`, `e.<key>`, `s.<key>`, `p`, a status or a literal"))
}

/// `rule for <Class> when <guard> { <slot> = <literal>; … | suppress }`
pub(crate) fn rule(p: &mut Parser) -> Result<(PersonalizationRule, Pos), Diagnostic> {
    let start = p.expect_keyword("rule")?;
    p.skip_newlines();
    p.expect_keyword("for")?;
    p.skip_newlines();
    let (class_name, _) = p.ident()?;
    p.skip_newlines();
    p.expect_keyword("when")?;
    let guard_pos = p.pos();
    let g = guard(p)?;
    p.expect_sig(&Tok::LBrace)?;
    p.skip_separators();
    let action = if p.eat_keyword("suppress") {
        p.skip_separators();
        p.expect(&Tok::RBrace)?;
        RuleAction::Suppress
    } else {
        let mut overrides = Vec::new();
        loop {
            p.skip_separators();
            if p.eat(&Tok::RBrace) {
                break;
            }
            let (slot, _) = p.ident()?;
            p.expect(&Tok::Eq)?;
            overrides.push((slot, p.literal()?));
            p.end_of_statement()?;
        }
        RuleAction::Override(overrides)
    };
    let rule = PersonalizationRule::new(class_name, g, action)
        .map_err(|e| Diagnostic::new(guard_pos, e.to_string()))?;
    Ok((rule, start))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::content::Stage;

    fn news() -> DigitalObject {
        DigitalObject::unbound(
            "News",
            &[
                Slot::new("title", TypeExpr::TEXT).unwrap(),
                Slot::new("body", TypeExpr::TEXT).unwrap(),
            ],
        )
        .unwrap()
        .with("title", Val::text("Launch"))
        .unwrap()
        .with("body", Val::text("Full story"))
        .unwrap()
    }

    fn override_rule(guard: &str, slot: &str, value: Val) -> PersonalizationRule {
        PersonalizationRule::new(
            "News",
            parse_guard(guard).unwrap(),
            RuleAction::Override(vec![(slot.to_string(), value)]),
        )
        .unwrap()
    }

    #[test]
    fn empty_rules_are_identity() {
        let d = news();
        let ctx = PersonalizationContext::default();
        assert_eq!(apply_functional(&d, &[], &ctx).unwrap(), d);
    }

    #[test]
    fn anonymous_override() {
        let rule = override_rule("p = anonymous", "body", Val::text("Login to read"));
        let out = apply_functional(&news(), &[rule], &PersonalizationContext::default()).unwrap();
        assert_eq!(out.get("body"), Some(Some(&Val::text("Login to read"))));
        let reader = PersonalizationContext::with_status(RegistrationStatus::Reader);
        let rule = override_rule("p = anonymous", "body", Val::text("Login to read"));
        let out = apply_functional(&news(), &[rule], &reader).unwrap();
        assert_eq!(out.get("body"), Some(Some(&Val::text("Full story"))));
    }

    #[test]
    fn later_group_wins() {
        let mut ctx = PersonalizationContext::default();
        ctx.v.insert("theme".into(), Val::text("dark"));
        let p_rule = override_rule("p = anonymous", "title", Val::text("from p"));
        let v_rule = override_rule("v.theme = \"dark\"", "title", Val::text("from v"));
        for rules in [vec![p_rule.clone(), v_rule.clone()], vec![v_rule, p_rule]] {
            let out = apply_functional(&news(), &rules, &ctx).unwrap();
            assert_eq!(out.get("title"), Some(Some(&Val::text("from p"))));
        }
    }

    #[test]
    fn suppression_marks_object() {
        let rule = PersonalizationRule::new(
            "News",
            parse_guard("p < reader").unwrap(),
            RuleAction::Suppress,
        )
        .unwrap();
        let out = apply_functional(&news(), &[rule], &PersonalizationContext::default()).unwrap();
        assert!(out.is_suppressed());
        assert_eq!(out.stage(), Stage::Value);
    }

    #[test]
    fn ill_typed_override_is_rejected() {
        let rule = override_rule("p = anonymous", "body", Val::Int(3));
        assert!(matches!(
            apply_functional(&news(), &[rule], &PersonalizationContext::default()),
            Err(RuleError::TypeMismatch { .. })
        ));
        let rule = override_rule("p = anonymous", "nope", Val::Int(3));
        assert!(matches!(
            apply_functional(&news(), &[rule], &PersonalizationContext::default()),
            Err(RuleError::UnknownSlot { .. })
        ));
    }

    #[test]
    fn guards_need_one_group() {
        assert!(matches!(
            PersonalizationRule::new("News", Guard::Const(true), RuleAction::Suppress),
            Err(RuleError::GroupCount(_))
        ));
        let mixed = parse_guard("p = reader and v.x = 1").unwrap();
        assert!(PersonalizationRule::new("News", mixed, RuleAction::Suppress).is_err());
        assert!(parse_guard("p = 3").is_err());
    }

    #[test]
    fn missing_keys_do_not_hold() {
        let ctx = PersonalizationContext::default();
        assert!(!parse_guard("e.device = \"mobile\"").unwrap().holds(&ctx));
        assert!(!parse_guard("e.device != \"mobile\"").unwrap().holds(&ctx));
        assert!(parse_guard("not e.device = \"mobile\"").unwrap().holds(&ctx));
    }

    #[test]
    fn guard_rendering_reparses() {
        for src in [
            "p >= editor",
            "v.lang = \"ru\" and (v.theme = \"dark\" or not v.wide = true)",
            "not (s.digest = true and s.n > 3)",
        ] {
            let g = parse_guard(src).unwrap();
            assert_eq!(g.to_string(), src);
        }
    }

    #[test]
    fn access_is_monotone() {
        for required in RegistrationStatus::ALL {
            let mut allowed = false;
            for p in RegistrationStatus::ALL {
                let now = access_allowed(&PersonalizationContext::with_status(p), required);
                assert!(!allowed || now);
                allowed = now;
            }
        }
        let ctx = |p| PersonalizationContext::with_status(p);
        assert!(access_allowed(&ctx(RegistrationStatus::Administrator), RegistrationStatus::Reader));
        assert!(!access_allowed(&ctx(RegistrationStatus::Anonymous), RegistrationStatus::Reader));
        assert!(access_allowed(&ctx(RegistrationStatus::Reader), RegistrationStatus::Reader));
    }
}
