//! Reading and checking source files.

use std::path::{Path, PathBuf};

use solvent_core::diag::{Diagnostic, Severity};
use solvent_core::parser::parse_file;
use solvent_core::wellformed::{check_invariants, check_wellformed};
use solvent_core::ast::SourceUnit;

/// A source file that was read, with its diagnostics. `unit` is `None` when
/// the file could not be read, did not parse, or has well-formedness errors.
#[derive(Debug, Clone)]
pub struct Loaded {
    pub path: PathBuf,
    /// File name without extension, used in reports and dump paths.
    pub stem: String,
    pub unit: Option<SourceUnit>,
    pub diagnostics: Vec<String>,
}

impl Loaded {
    pub fn has_errors(&self) -> bool {
        self.unit.is_none()
    }
}

pub fn stem_of(path: &Path) -> String {
    path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| path.display().to_string())
}

pub fn load_source(path: &Path, src: &str) -> Loaded {
    let shown = path.display().to_string();
    let render = |ds: &[Diagnostic]| ds.iter().map(|d| d.render(&shown)).collect::<Vec<_>>();
    let stem = stem_of(path);
    match parse_file(src) {
        Err(ds) => Loaded { path: path.into(), stem, unit: None, diagnostics: render(&ds) },
        Ok(unit) => {
            let mut ds = check_wellformed(&unit.contract, &unit.properties);
            ds.extend(check_invariants(&unit.contract, &unit.invariants));
            let fatal = ds.iter().any(|d| d.severity == Severity::Error);
            Loaded { path: path.into(), stem, unit: (!fatal).then_some(unit), diagnostics: render(&ds) }
        }
    }
}

pub fn load_file(path: &Path) -> Loaded {
    match std::fs::read_to_string(path) {
        Ok(src) => load_source(path, &src),
        Err(e) => Loaded {
            path: path.into(),
            stem: stem_of(path),
            unit: None,
            diagnostics: vec![format!("{}: cannot read: {e}", path.display())],
        },
    }
}

/// The `.sol` files directly inside `dir`, sorted by name.
pub fn sol_files(dir: &Path) -> std::io::Result<Vec<PathBuf>> {
    let mut out = Vec::new();
    for entry in std::fs::read_dir(dir)? {
        let p = entry?.path();
        if p.is_file() && p.extension().is_some_and(|e| e == "sol") {
            out.push(p);
        }
    }
    out.sort();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_errors_are_rendered_with_the_path() {
        let l = load_source(Path::new("dir/broken.sol"), "contract C {");
        assert!(l.has_errors());
        assert_eq!(l.stem, "broken");
        assert!(l.diagnostics[0].starts_with("dir/broken.sol:"), "{:?}", l.diagnostics);
    }

    #[test]
    fn missing_file() {
        let l = load_file(Path::new("/nonexistent/x.sol"));
        assert!(l.has_errors());
        assert!(l.diagnostics[0].contains("cannot read"));
    }
}
