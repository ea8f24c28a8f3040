use std::collections::BTreeSet;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use ecm_core::machine::{parse_program, trace as run_trace};
use ecm_core::personalization::{access_allowed, apply_functional, parse_context};
use ecm_core::schema::{compile_meta, compile_schema, emit_ddl};
use ecm_core::syntax::parse_value_lines;
use ecm_core::template::{bind, parse_document, parse_model, render as render_page, ModelFile};
use ecm_core::Diagnostics;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok = 0,
    Failed = 1,
    Usage = 2,
}

type Outcome<T> = Result<T, Status>;

fn read(path: &Path) -> Outcome<String> {
    fs::read_to_string(path).map_err(|e| {
        eprintln!("{}: cannot read: {e}", path.display());
        Status::Usage
    })
}

fn report(path: &Path, diags: &Diagnostics) -> Status {
    for d in diags.iter() {
        eprintln!("{}:{d}", path.display());
    }
    Status::Failed
}

fn load_model(path: &Path) -> Outcome<ModelFile> {
    let src = read(path)?;
    parse_model(&src).map_err(|d| report(path, &d))
}

fn plural(n: usize, one: &str, many: &str) -> String {
    format!("{n} {}", if n == 1 { one } else { many })
}

pub fn validate(model: &Path) -> Status {
    match load_model(model) {
        Ok(m) => {
            println!(
                "{}, {}, {}, {}",
                plural(m.classes.len(), "class", "classes"),
                plural(m.slot_count(), "slot", "slots"),
                plural(m.rules.len(), "rule", "rules"),
                plural(m.domains.len(), "domain", "domains"),
            );
            Status::Ok
        }
        Err(s) => s,
    }
}

fn content_files(dir: &Path) -> Outcome<Vec<PathBuf>> {
    let entries = fs::read_dir(dir).map_err(|e| {
        eprintln!("{}: cannot read directory: {e}", dir.display());
        Status::Usage
    })?;
    let mut files: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && p.extension().is_some_and(|x| x == "ecd"))
        .collect();
    files.sort_by(|a, b| a.file_name().cmp(&b.file_name()));
    Ok(files)
}

pub fn render(model: &Path, content: &Path, out: &Path, context: Option<&Path>) -> Status {
    let run = || -> Outcome<Status> {
        let files = content_files(content)?;
        let ctx = match context {
            Some(path) => {
                let src = read(path)?;
                Some(parse_context(&src).map_err(|d| report(path, &d))?)
            }
            None => None,
        };
        let model = load_model(model)?;
        fs::create_dir_all(out).map_err(|e| {
            eprintln!("{}: cannot create directory: {e}", out.display());
            Status::Usage
        })?;

        let mut status = Status::Ok;
        let mut written = BTreeSet::new();
        for file in files {
            let shown = file.display();
            let src = match fs::read_to_string(&file) {
                Ok(s) => s,
                Err(e) => {
                    eprintln!("{shown}: cannot read: {e}");
                    status = Status::Failed;
                    continue;
                }
            };
            let doc = match parse_document(&src) {
                Ok(d) => d,
                Err(d) => {
                    status = report(&file, &d);
                    continue;
                }
            };
            let mut object = match bind(&doc, &model) {
                Ok(o) => o,
                Err(e) => {
                    eprintln!("{shown}: cannot bind `{}`: {e}", doc.object_name);
                    status = Status::Failed;
                    continue;
                }
            };
            if let Some(ctx) = &ctx {
                object = match apply_functional(&object, &model.rules, ctx) {
                    Ok(o) => o,
                    Err(e) => {
                        eprintln!("{shown}: cannot personalize `{}`: {e}", doc.object_name);
                        status = Status::Failed;
                        continue;
                    }
                };
                let required = model
                    .class(&doc.class_name)
                    .map(|c| c.min_status)
                    .unwrap_or_default();
                if !access_allowed(ctx, required) {
                    eprintln!(
                        "{shown}: skipped `{}`: class {} requires {required}",
                        doc.object_name, doc.class_name
                    );
                    continue;
                }
                if object.is_suppressed() {
                    eprintln!("{shown}: skipped `{}`: suppressed", doc.object_name);
                    continue;
                }
            }
            let page = match render_page(&object, &model, &doc.object_name) {
                Ok(p) => p,
                Err(e) => {
                    eprintln!("{shown}: cannot render `{}`: {e}", doc.object_name);
                    status = Status::Failed;
                    continue;
                }
            };
            if !written.insert(page.name.clone()) {
                eprintln!("{shown}: object `{}` already rendered", page.name);
                status = Status::Failed;
                continue;
            }
            let target = out.join(format!("{}.html", page.name));
            if let Err(e) = fs::write(&target, format!("{}\n", page.markup)) {
                eprintln!("{}: cannot write: {e}", target.display());
                return Err(Status::Usage);
            }
        }
        Ok(status)
    };
    run().unwrap_or_else(|s| s)
}

pub fn trace(program: &Path, input: Option<&Path>) -> Status {
    let run = || -> Outcome<Status> {
        let src = read(program)?;
        let input = match input {
            Some(path) => {
                let src = read(path)?;
                parse_value_lines(&src).map_err(|d| report(path, &d.into()))?
            }
            None => Vec::new(),
        };
        let program = parse_program(&src).map_err(|d| report(program, &d))?;
        let t = run_trace(&program, input);
        let mut stdout = io::stdout().lock();
        let _ = write!(stdout, "{t}");
        Ok(if t.error.is_some() {
            Status::Failed
        } else {
            Status::Ok
        })
    };
    run().unwrap_or_else(|s| s)
}

pub fn schema(model: &Path, out: &Path) -> Status {
    let run = || -> Outcome<Status> {
        let m = load_model(model)?;
        let mut relations = compile_schema(&m).map_err(|e| {
            eprintln!("{}: {e}", model.display());
            Status::Failed
        })?;
        relations.extend(compile_meta(&m));
        fs::write(out, emit_ddl(&relations)).map_err(|e| {
            eprintln!("{}: cannot write: {e}", out.display());
            Status::Usage
        })?;
        Ok(Status::Ok)
    };
    run().unwrap_or_else(|s| s)
}
