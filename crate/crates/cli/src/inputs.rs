//! Config resolution and input loading. Structures come from the
//! builtin catalog by name or from document files; `file#name` picks
//! one block out of a multi-structure file.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use homlab_core::bounds::Bounds;
use homlab_core::catalog;
use homlab_core::lattice::BoundedLattice;
use homlab_core::logic::Sentence;
use homlab_core::relational::RelStructure;
use homlab_core::text;

use crate::report::RunReport;

pub struct Failure {
    pub message: String,
}

impl Failure {
    pub fn new(message: impl Into<String>) -> Failure {
        Failure {
            message: message.into(),
        }
    }
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Failure {
        Failure {
            message: e.to_string(),
        }
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    max_pinch_n: Option<usize>,
    node_budget: Option<u64>,
    size_bound: Option<usize>,
    enumeration_cap: Option<usize>,
    eval_budget: Option<u64>,
    game_budget: Option<u64>,
    enum_budget: Option<u64>,
}

/// Defaults, overlaid by the config file (flag, then HOMLAB_CONFIG,
/// then ./homlab.toml), overlaid by individual flag overrides.
pub fn resolve_bounds(
    config_flag: Option<&Path>,
    node_budget: Option<u64>,
    size_bound: Option<usize>,
) -> Result<Bounds, Failure> {
    let mut bounds = Bounds::default();
    let path: Option<PathBuf> = match config_flag {
        Some(p) => Some(p.to_path_buf()),
        None => match std::env::var_os("HOMLAB_CONFIG") {
            Some(p) => Some(PathBuf::from(p)),
            None => {
                let local = PathBuf::from("homlab.toml");
                local.exists().then_some(local)
            }
        },
    };
    if let Some(path) = path {
        let raw = fs::read_to_string(&path)
            .map_err(|e| Failure::new(format!("config {}: {e}", path.display())))?;
        let file: FileConfig = toml::from_str(&raw)
            .map_err(|e| Failure::new(format!("config {}: {e}", path.display())))?;
        if let Some(v) = file.max_pinch_n {
            bounds.max_pinch_n = v;
        }
        if let Some(v) = file.node_budget {
            bounds.node_budget = v;
        }
        if let Some(v) = file.size_bound {
            bounds.size_bound = v;
        }
        if let Some(v) = file.enumeration_cap {
            bounds.enumeration_cap = v;
        }
        if let Some(v) = file.eval_budget {
            bounds.eval_budget = v;
        }
        if let Some(v) = file.game_budget {
            bounds.game_budget = v;
        }
        if let Some(v) = file.enum_budget {
            bounds.enum_budget = v;
        }
    }
    if let Some(v) = node_budget {
        bounds.node_budget = v;
    }
    if let Some(v) = size_bound {
        bounds.size_bound = v;
    }
    Ok(bounds)
}

/// Builtin name, a document file path, or `path#name`.
pub fn load_structure(arg: &str, report: &mut RunReport) -> Result<RelStructure, Failure> {
    if let Some(s) = catalog::by_name(arg) {
        report.input(arg, text::serialize_structure(arg, &s).as_bytes());
        return Ok(s);
    }
    let (path, pick) = match arg.split_once('#') {
        Some((p, n)) => (p, Some(n)),
        None => (arg, None),
    };
    let raw = fs::read(path).map_err(|e| Failure::new(format!("{path}: {e}")))?;
    report.input(path, &raw);
    let doc = text::parse_document(std::str::from_utf8(&raw)?)
        .map_err(|e| Failure::new(format!("{path}: {e}")))?;
    match pick {
        Some(name) => doc
            .structure(name)
            .cloned()
            .ok_or_else(|| Failure::new(format!("{path}: no structure named '{name}'"))),
        None => match doc.structures.as_slice() {
            [] => Err(Failure::new(format!("{path}: no structures"))),
            [(_, s)] => Ok(s.clone()),
            many => Err(Failure::new(format!(
                "{path}: several structures ({}); pick one with {path}#name",
                many.iter()
                    .map(|(n, _)| n.as_str())
                    .collect::<Vec<_>>()
                    .join(", ")
            ))),
        },
    }
}

/// All sentences of a document file, with their names.
pub fn load_sentences(path: &Path, report: &mut RunReport) -> Result<Vec<(String, Sentence)>, Failure> {
    let raw = fs::read(path).map_err(|e| Failure::new(format!("{}: {e}", path.display())))?;
    report.input(&path.display().to_string(), &raw);
    let doc = text::parse_document(std::str::from_utf8(&raw)?)
        .map_err(|e| Failure::new(format!("{}: {e}", path.display())))?;
    if doc.sentences.is_empty() {
        return Err(Failure::new(format!("{}: no sentences", path.display())));
    }
    Ok(doc.sentences)
}

/// Sample structures: a directory of document files (read in name
/// order), a single file, or a comma-separated list of builtin names.
pub fn load_samples(
    arg: &str,
    report: &mut RunReport,
) -> Result<Vec<(String, RelStructure)>, Failure> {
    let path = Path::new(arg);
    if path.is_dir() {
        let mut files: Vec<PathBuf> = fs::read_dir(path)
            .map_err(|e| Failure::new(format!("{arg}: {e}")))?
            .filter_map(|entry| entry.ok().map(|e| e.path()))
            .filter(|p| p.is_file())
            .collect();
        files.sort();
        let mut out = Vec::new();
        for file in &files {
            let raw = fs::read(file)?;
            report.input(&file.display().to_string(), &raw);
            let doc = text::parse_document(std::str::from_utf8(&raw)?)
                .map_err(|e| Failure::new(format!("{}: {e}", file.display())))?;
            out.extend(doc.structures);
        }
        if out.is_empty() {
            return Err(Failure::new(format!("{arg}: no structures found")));
        }
        return Ok(out);
    }
    if path.is_file() {
        let raw = fs::read(path)?;
        report.input(arg, &raw);
        let doc = text::parse_document(std::str::from_utf8(&raw)?)
            .map_err(|e| Failure::new(format!("{arg}: {e}")))?;
        if doc.structures.is_empty() {
            return Err(Failure::new(format!("{arg}: no structures")));
        }
        return Ok(doc.structures);
    }
    let mut out = Vec::new();
    for name in arg.split(',').filter(|s| !s.is_empty()) {
        let s = catalog::by_name(name)
            .ok_or_else(|| Failure::new(format!("'{name}' is neither a path nor a builtin")))?;
        report.input(name, text::serialize_structure(name, &s).as_bytes());
        out.push((name.to_string(), s));
    }
    if out.is_empty() {
        return Err(Failure::new("empty sample list"));
    }
    Ok(out)
}

/// First lattice of a document file, or the 2-element lattice when
/// no file is given.
pub fn load_lattice(
    path: Option<&Path>,
    report: &mut RunReport,
) -> Result<BoundedLattice, Failure> {
    match path {
        None => {
            let two = homlab_core::lattice::two();
            report.input("two", text::serialize_lattice("two", &two).as_bytes());
            Ok(two)
        }
        Some(path) => {
            let raw =
                fs::read(path).map_err(|e| Failure::new(format!("{}: {e}", path.display())))?;
            report.input(&path.display().to_string(), &raw);
            let doc = text::parse_document(std::str::from_utf8(&raw)?)
                .map_err(|e| Failure::new(format!("{}: {e}", path.display())))?;
            doc.lattices
                .into_iter()
                .next()
                .map(|(_, l)| l)
                .ok_or_else(|| Failure::new(format!("{}: no lattices", path.display())))
        }
    }
}

/// Signature + structure in one parseable file.
pub fn structure_file(name: &str, s: &RelStructure) -> String {
    format!(
        "{}\n{}",
        text::serialize_signature(s.signature()),
        text::serialize_structure(name, s)
    )
}
