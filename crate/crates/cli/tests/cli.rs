use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn ecmctl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ecmctl"))
        .current_dir(root())
        .args(args)
        .output()
        .unwrap()
}

fn text(b: &[u8]) -> String {
    String::from_utf8_lossy(b).into_owned()
}

#[test]
fn validate_demo() {
    let o = ecmctl(&["validate", "demo/portal.ecm"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(text(&o.stdout), "6 classes, 31 slots, 5 rules, 1 domain\n");
    assert!(o.stderr.is_empty());
}

#[test]
fn validate_reports_diagnostics() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.ecm");
    fs::write(&bad, "class A {\n  slot t: Text\n  skeleton \"{nope}\"\n}\n").unwrap();
    let o = ecmctl(&["validate", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(o.stdout.is_empty());
    let err = text(&o.stderr);
    assert!(err.starts_with(&format!("{}:3:3: unknown placeholder", bad.display())), "{err}");
}

#[test]
fn usage_errors() {
    assert_eq!(ecmctl(&["validate", "missing.ecm"]).status.code(), Some(2));
    assert_eq!(ecmctl(&["validate"]).status.code(), Some(2));
    assert_eq!(ecmctl(&["frobnicate"]).status.code(), Some(2));
    let o = ecmctl(&["schema", "--model", "demo/portal.ecm", "--out", "/nonexistent/dir/x.sql"]);
    assert_eq!(o.status.code(), Some(2));
    let o = ecmctl(&["render", "--model", "demo/portal.ecm", "--content", "no/such/dir", "--out", "x"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn trace_examples() {
    let dir = tempfile::tempdir().unwrap();
    let write = |name: &str, src: &str| {
        let p = dir.path().join(name);
        fs::write(&p, src).unwrap();
        p.to_str().unwrap().to_string()
    };
    let ok = write("ok.amc", "x = 5; emit x\n");
    let o = ecmctl(&["trace", "--program", &ok]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        text(&o.stdout),
        "step 1: x = 5 | mem={x=5} in=[] out=[]\nstep 2: emit x | mem={x=5} in=[] out=[5]\n"
    );

    let unbound = write("unbound.amc", "emit y\n");
    let o = ecmctl(&["trace", "--program", &unbound]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(text(&o.stdout), "UnboundIdentifier(y) at step 1\n");

    let empty = write("empty.amc", "");
    let o = ecmctl(&["trace", "--program", &empty]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());

    let syntax = write("syntax.amc", "emit (\n");
    let o = ecmctl(&["trace", "--program", &syntax]);
    assert_eq!(o.status.code(), Some(1));
    assert!(text(&o.stderr).starts_with(&format!("{syntax}:1:")));
}

#[test]
fn schema_rejects_function_slots() {
    let dir = tempfile::tempdir().unwrap();
    let model = dir.path().join("f.ecm");
    fs::write(&model, "class Calc {\n  slot f: Fn<Int, Int>\n  skeleton \"\"\n}\n").unwrap();
    let out = dir.path().join("f.sql");
    let o = ecmctl(&["schema", "--model", model.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(text(&o.stderr).contains("Calc.f"));
    assert!(!out.exists());
}

#[test]
fn render_continues_past_bad_documents() {
    let dir = tempfile::tempdir().unwrap();
    let content = dir.path().join("content");
    fs::create_dir(&content).unwrap();
    for f in ["01_menu_home.ecd", "09_news_pipeline.ecd"] {
        fs::copy(root().join("demo/content").join(f), content.join(f)).unwrap();
    }
    fs::write(
        content.join("05_bad.ecd"),
        "object broken : MenuItem {\n  label = \"x\"\n  sort_key = \"first\"\n}\n",
    )
    .unwrap();
    fs::write(content.join("06_partial.ecd"), "object partial : MenuItem {\n  label = \"x\"\n}\n").unwrap();
    fs::write(content.join("notes.txt"), "ignored").unwrap();
    let out = dir.path().join("out");
    let o = ecmctl(&[
        "render",
        "--model",
        "demo/portal.ecm",
        "--content",
        content.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(1));
    let err = text(&o.stderr);
    let lines: Vec<&str> = err.lines().collect();
    assert_eq!(lines.len(), 2, "{err}");
    assert!(lines[0].contains("05_bad.ecd") && lines[0].contains("TypeMismatch(sort_key) at step 2"));
    assert!(lines[1].contains("06_partial.ecd") && lines[1].contains("target, sort_key, visible"));
    let mut written: Vec<String> = fs::read_dir(&out)
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .collect();
    written.sort();
    assert_eq!(written, ["menu_home.html", "news_pipeline_launch.html"]);
}
