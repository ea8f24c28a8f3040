//! Fixtures shared by the benchmarks.

use std::fs;
use std::path::{Path, PathBuf};

use ecm_core::content::Val;
use ecm_core::template::{parse_document, parse_model, ContentDocument, ModelFile};

pub fn demo_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../demo")
}

pub fn demo_model() -> ModelFile {
    parse_model(&fs::read_to_string(demo_dir().join("portal.ecm")).unwrap()).unwrap()
}

pub fn demo_documents() -> Vec<ContentDocument> {
    let mut paths: Vec<PathBuf> = fs::read_dir(demo_dir().join("content"))
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "ecd"))
        .collect();
    paths.sort();
    paths
        .iter()
        .map(|p| parse_document(&fs::read_to_string(p).unwrap()).unwrap())
        .collect()
}

/// Source of a straight-line program with `n` assignments and emits.
pub fn counting_program(n: usize) -> String {
    let mut src = String::from("var acc: Int\nacc = 0\n");
    for i in 0..n {
        src.push_str(&format!("acc = {i}\nemit acc\n"));
    }
    src
}

pub fn int_domain(n: i64) -> Vec<Val> {
    (0..n).map(Val::Int).collect()
}
