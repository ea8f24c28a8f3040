pub mod gen;
pub mod reference;

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

pub fn workspace_root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../..")
        .canonicalize()
        .expect("workspace root")
}

/// Runs `ecmctl` from the workspace root.
pub fn ecmctl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ecmctl"))
        .current_dir(workspace_root())
        .args(args)
        .output()
        .expect("spawn ecmctl")
}

/// File name to contents for every file directly inside `dir`.
pub fn read_dir_files(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<(String, Vec<u8>)> = std::fs::read_dir(dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| e.unwrap().path())
        .filter(|p| p.is_file())
        .map(|p| {
            let name = p.file_name().unwrap().to_string_lossy().into_owned();
            (name, std::fs::read(&p).unwrap())
        })
        .collect();
    files.sort();
    files
}
