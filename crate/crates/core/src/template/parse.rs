use super::model::{ClassDef, ContentDocument, ModelFile};
use super::skeleton::MarkupTemplate;
use crate::content::{ElemType, Member, Slot, VariableDomain};
use crate::machine::is_reserved;
use crate::personalization::{rule, RegistrationStatus};
use crate::syntax::{Diagnostic, Diagnostics, Parser, Pos, Tok};

/// Slot names that would collide with predicate or program syntax.
fn reserved_slot_name(name: &str) -> bool {
    is_reserved(name) || name == "count"
}

/// Parses and validates an `.ecm` content model.
///
/// Syntax errors stop at the first problem; semantic problems (duplicates,
/// unknown placeholders, rules or domains that do not fit their class) are
/// all reported together.
pub fn parse_model(src: &str) -> Result<ModelFile, Diagnostics> {
    let mut p = Parser::new(src)?;
    let mut model = ModelFile::default();
    let mut problems = Vec::new();
    let mut class_pos: Vec<Pos> = Vec::new();
    let mut rule_pos: Vec<Pos> = Vec::new();
    let mut domain_pos: Vec<Pos> = Vec::new();

    loop {
        p.skip_separators();
        if p.at_eof() {
            break;
        }
        if p.at_keyword("class") {
            let (class, pos, mut issues) = class_def(&mut p)?;
            if let Some(prev) = model.classes.iter().position(|c| c.name == class.name) {
                issues.push(Diagnostic::new(
                    pos,
                    format!(
                        "duplicate class `{}` (first declared at line {})",
                        class.name, class_pos[prev].line
                    ),
                ));
            }
            problems.append(&mut issues);
            model.classes.push(class);
            class_pos.push(pos);
        } else if p.at_keyword("rule") {
            let (r, pos) = rule(&mut p)?;
            model.rules.push(r);
            rule_pos.push(pos);
        } else if p.at_keyword("domain") {
            let (d, pos) = domain(&mut p)?;
            if model.domains.iter().any(|o| o.name() == d.name()) {
                problems.push(Diagnostic::new(pos, format!("duplicate domain `{}`", d.name())));
            }
            model.domains.push(d);
            domain_pos.push(pos);
        } else {
            return Err(p.unexpected("`class`, `rule` or `domain`").into());
        }
    }

    for (r, pos) in model.rules.iter().zip(&rule_pos) {
        match model.class(&r.class_name) {
            None => problems.push(Diagnostic::new(
                *pos,
                format!("rule refers to unknown class `{}`", r.class_name),
            )),
            Some(class) => {
                if let Err(e) = r.validate(&class.slots) {
                    problems.push(Diagnostic::new(*pos, e.to_string()));
                }
            }
        }
    }

    if problems.is_empty() {
        Ok(model)
    } else {
        problems.sort_by_key(|d| (d.line, d.col));
        Err(Diagnostics(problems))
    }
}

type ClassResult = (ClassDef, Pos, Vec<Diagnostic>);

fn class_def(p: &mut Parser) -> Result<ClassResult, Diagnostic> {
    let start = p.expect_keyword("class")?;
    let (name, _) = p.ident()?;
    p.expect_sig(&Tok::LBrace)?;
    let mut issues = Vec::new();
    let mut slots: Vec<Slot> = Vec::new();
    let mut skeleton: Option<(MarkupTemplate, Pos)> = None;
    let mut min_status = None;
    loop {
        p.skip_separators();
        if p.eat(&Tok::RBrace) {
            break;
        }
        let item_pos = p.pos();
        if p.eat_keyword("slot") {
            let (slot_name, slot_pos) = p.ident()?;
            p.expect(&Tok::Colon)?;
            let ty = p.type_expr()?;
            if reserved_slot_name(&slot_name) {
                issues.push(Diagnostic::new(
                    slot_pos,
                    format!("`{slot_name}` is reserved and cannot name a slot"),
                ));
            } else if slots.iter().any(|s| s.name == slot_name) {
                issues.push(Diagnostic::new(
                    slot_pos,
                    format!("duplicate slot `{slot_name}` in class `{name}`"),
                ));
            } else {
                slots.push(Slot { name: slot_name, ty });
            }
        } else if p.eat_keyword("skeleton") {
            let raw = string_concat(p)?;
            let template = MarkupTemplate::parse(raw)
                .map_err(|e| Diagnostic::new(item_pos, format!("bad skeleton: {e}")))?;
            if skeleton.is_some() {
                issues.push(Diagnostic::new(item_pos, "class has more than one skeleton"));
            }
            skeleton = Some((template, item_pos));
        } else if p.eat_keyword("requires") {
            let (status, pos) = p.ident()?;
            let status = RegistrationStatus::from_name(&status).ok_or_else(|| {
                Diagnostic::new(pos, format!("unknown registration status `{status}`"))
            })?;
            if min_status.replace(status).is_some() {
                issues.push(Diagnostic::new(item_pos, "class has more than one `requires`"));
            }
        } else {
            return Err(p.unexpected("`slot`, `skeleton`, `requires` or `}`"));
        }
    }
    let skeleton = match skeleton {
        Some((template, pos)) => {
            for ph in template.placeholders() {
                if !slots.iter().any(|s| s.name == ph) {
                    issues.push(Diagnostic::new(
                        pos,
                        format!("unknown placeholder `{{{ph}}}` in skeleton of `{name}`"),
                    ));
                }
            }
            template
        }
        None => {
            issues.push(Diagnostic::new(start, format!("class `{name}` has no skeleton")));
            MarkupTemplate::parse("").expect("empty template")
        }
    };
    Ok((
        ClassDef {
            name,
            slots,
            skeleton,
            min_status: min_status.unwrap_or_default(),
        },
        start,
        issues,
    ))
}

/// One or more adjacent string literals, concatenated.
fn string_concat(p: &mut Parser) -> Result<String, Diagnostic> {
    p.skip_newlines();
    let mut out = match p.peek().clone() {
        Tok::Str(s) => {
            p.bump();
            s
        }
        _ => return Err(p.unexpected("string literal")),
    };
    loop {
        let mark = p.mark();
        p.skip_newlines();
        match p.peek().clone() {
            Tok::Str(s) => {
                p.bump();
                out.push_str(&s);
            }
            _ => {
                p.reset(mark);
                return Ok(out);
            }
        }
    }
}

/// `domain <Name>: <type> { <key> = [<literal>, …] … }`
fn domain(p: &mut Parser) -> Result<(VariableDomain, Pos), Diagnostic> {
    let start = p.expect_keyword("domain")?;
    let (name, _) = p.ident()?;
    p.expect(&Tok::Colon)?;
    let ty = p.type_expr()?;
    p.expect_sig(&Tok::LBrace)?;
    let mut extents: Vec<(String, Vec<Member>)> = Vec::new();
    loop {
        p.skip_separators();
        if p.eat(&Tok::RBrace) {
            break;
        }
        let (key, key_pos) = p.ident()?;
        if extents.iter().any(|(k, _)| *k == key) {
            return Err(Diagnostic::new(key_pos, format!("duplicate assignment key `{key}`")));
        }
        p.expect(&Tok::Eq)?;
        let list_pos = p.pos();
        let members = match p.literal()? {
            crate::content::Val::Seq(items) => items.into_iter().map(Member::Value).collect(),
            _ => return Err(Diagnostic::new(list_pos, "expected a `[...]` list of members")),
        };
        extents.push((key, members));
        p.end_of_statement()?;
    }
    let vd = VariableDomain::new(name, ElemType::Value(ty), extents)
        .map_err(|e| Diagnostic::new(start, e.to_string()))?;
    Ok((vd, start))
}

/// Parses an `.ecd` content document:
/// `object <name> : <Class> { <slot> = <literal> … }`.
pub fn parse_document(src: &str) -> Result<ContentDocument, Diagnostics> {
    let mut p = Parser::new(src)?;
    p.skip_separators();
    p.expect_keyword("object")?;
    let (object_name, _) = p.ident()?;
    p.expect(&Tok::Colon)?;
    let (class_name, _) = p.ident()?;
    p.expect_sig(&Tok::LBrace)?;
    let mut assignments: Vec<(String, crate::content::Val)> = Vec::new();
    loop {
        p.skip_separators();
        if p.eat(&Tok::RBrace) {
            break;
        }
        let (slot, pos) = p.ident()?;
        if assignments.iter().any(|(s, _)| *s == slot) {
            return Err(Diagnostic::new(pos, format!("slot `{slot}` assigned twice")).into());
        }
        p.expect(&Tok::Eq)?;
        assignments.push((slot, p.literal()?));
        p.end_of_statement()?;
    }
    p.skip_separators();
    if !p.at_eof() {
        return Err(p.unexpected("end of document").into());
    }
    Ok(ContentDocument {
        object_name,
        class_name,
        assignments,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::content::{TypeExpr, Val};

    #[test]
    fn minimal_model() {
        let m = parse_model("class A { slot t: Text skeleton \"{t}\" }").unwrap();
        assert_eq!(m.classes.len(), 1);
        assert_eq!(m.classes[0].slots.len(), 1);
        assert_eq!(m.classes[0].min_status, RegistrationStatus::Anonymous);
    }

    #[test]
    fn unknown_placeholder() {
        let err = parse_model("class A { slot t: Text skeleton \"{missing}\" }").unwrap_err();
        assert!(err.0[0].message.contains("unknown placeholder"));
        assert_eq!((err.0[0].line, err.0[0].col), (1, 24));
    }

    #[test]
    fn semantic_problems_are_collected() {
        let src = "class A {\n  slot t: Text\n  slot t: Int\n  slot count: Int\n  skeleton \"{t}\"\n}\nclass A { skeleton \"\" }\nrule for B when p = reader { suppress }\n";
        let err = parse_model(src).unwrap_err();
        let lines: Vec<usize> = err.iter().map(|d| d.line).collect();
        assert_eq!(lines, vec![3, 4, 7, 8]);
    }

    #[test]
    fn unknown_type_and_syntax_errors() {
        let err = parse_model("class A { slot t: Txt skeleton \"\" }").unwrap_err();
        assert!(err.0[0].message.contains("unknown type name"));
        assert!(parse_model("klass A {}").is_err());
        assert!(parse_model("class A { slot t: Text }").is_err());
    }

    #[test]
    fn rules_are_checked_against_classes() {
        let base = "class N { slot body: Text skeleton \"{body}\" }\n";
        assert!(parse_model(&format!("{base}rule for N when p = anonymous {{ body = \"x\" }}")).is_ok());
        let err = parse_model(&format!("{base}rule for N when p = anonymous {{ body = 3 }}"))
            .unwrap_err();
        assert!(err.0[0].message.contains("of type Text"));
        assert!(parse_model(&format!("{base}rule for N when p = anonymous {{ nope = 3 }}")).is_err());
    }

    #[test]
    fn domains() {
        let m = parse_model("domain Years: Int { ctxA = [1, 2]; ctxB = [3] }").unwrap();
        assert_eq!(m.domains[0].extents().len(), 2);
        assert!(parse_model("domain Years: Int { ctxA = [\"x\"] }").is_err());
        assert!(parse_model("domain Y: Int { a = [1]\n a = [2] }").is_err());
    }

    #[test]
    fn canonical_print_is_a_fixpoint() {
        let src = "# comment\nclass B {\n slot tags: Seq<Text>\n requires editor\n slot when: Date skeleton \"<p>{when}</p>\"\n \"{{raw}}\" }\n\
                   rule for B when e.device = \"mobile\" and not e.wide = true { tags = [\"m\"] }\n\
                   domain D: (Int, Text) { b = [(1, \"x\")]\n a = [] }\n";
        let once = parse_model(src).unwrap();
        let printed = once.to_string();
        let twice = parse_model(&printed).unwrap();
        assert_eq!(once, twice);
        assert_eq!(printed, twice.to_string());
        assert_eq!(once.classes[0].slots[0].ty, TypeExpr::seq(TypeExpr::TEXT));
        assert_eq!(once.classes[0].skeleton.raw(), "<p>{when}</p>{{raw}}");
    }

    #[test]
    fn documents() {
        let d = parse_document("object n1 : NewsItem { title = \"Launch\" }").unwrap();
        assert_eq!(d.assignments, vec![("title".to_string(), Val::text("Launch"))]);
        let err = parse_document("object n1 : NewsItem { title = \"a\"; title = \"b\" }").unwrap_err();
        assert!(err.0[0].message.contains("assigned twice"));
        let d = parse_document("object n1 : NewsItem {\n}\n").unwrap();
        assert!(d.assignments.is_empty());
        assert_eq!(parse_document(&d.to_string()).unwrap(), d);
        assert!(parse_document("object a : B { } object c : D { }").is_err());
    }
}
