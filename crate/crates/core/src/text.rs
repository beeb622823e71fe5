//! Line-oriented text format for signatures, structures, sentences,
//! and lattices, with canonical serialization for byte-stable output.
//!
//! '#' starts a comment; keywords are case-sensitive. Blocks close
//! with `end`. A structure or sentence refers to a signature declared
//! earlier in the same document.

use std::fmt::Write as _;
use std::sync::Arc;

use thiserror::Error;

use crate::lattice::{BoundedLattice, LatticeError};
use crate::logic::{self, Sentence};
use crate::relational::{RelStructure, Signature, SignatureError, StructureError};

#[derive(Debug, Error, PartialEq, Eq)]
#[error("line {line}: {msg}")]
pub struct TextError {
    pub line: usize,
    pub msg: String,
}

fn t_err<T>(line: usize, msg: impl Into<String>) -> Result<T, TextError> {
    Err(TextError {
        line,
        msg: msg.into(),
    })
}

/// Everything a document can declare, in declaration order.
#[derive(Debug, Clone, Default)]
pub struct Document {
    pub signatures: Vec<Arc<Signature>>,
    pub structures: Vec<(String, RelStructure)>,
    pub sentences: Vec<(String, Sentence)>,
    pub lattices: Vec<(String, BoundedLattice)>,
    /// Non-fatal notes, e.g. collapsed duplicate tuples.
    pub warnings: Vec<String>,
}

impl Document {
    pub fn signature(&self, name: &str) -> Option<&Arc<Signature>> {
        self.signatures.iter().find(|s| s.name() == name)
    }

    pub fn structure(&self, name: &str) -> Option<&RelStructure> {
        self.structures
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, s)| s)
    }

    pub fn sentence(&self, name: &str) -> Option<&Sentence> {
        self.sentences
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, s)| s)
    }

    pub fn lattice(&self, name: &str) -> Option<&BoundedLattice> {
        self.lattices
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, l)| l)
    }
}

struct Lines<'a> {
    // (1-based line number, significant tokens)
    rows: Vec<(usize, Vec<&'a str>)>,
    pos: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Lines<'a> {
        let rows = text
            .lines()
            .enumerate()
            .filter_map(|(i, raw)| {
                let code = raw.split('#').next().unwrap_or("");
                let toks: Vec<&str> = code.split_whitespace().collect();
                if toks.is_empty() {
                    None
                } else {
                    Some((i + 1, toks))
                }
            })
            .collect();
        Lines { rows, pos: 0 }
    }

    fn next(&mut self) -> Option<&(usize, Vec<&'a str>)> {
        let row = self.rows.get(self.pos);
        if row.is_some() {
            self.pos += 1;
        }
        row
    }

    fn last_line(&self) -> usize {
        self.rows.last().map_or(0, |(l, _)| *l)
    }
}

fn parse_num(line: usize, tok: &str, what: &str) -> Result<usize, TextError> {
    tok.parse()
        .map_err(|_| TextError {
            line,
            msg: format!("expected {what}, got '{tok}'"),
        })
}

/// Parse a whole document.
pub fn parse_document(text: &str) -> Result<Document, TextError> {
    let mut doc = Document::default();
    let mut lines = Lines::new(text);
    while let Some((line, toks)) = lines.next().cloned() {
        match toks[0] {
            "signature" => parse_signature_block(line, &toks, &mut lines, &mut doc)?,
            "structure" => parse_structure_block(line, &toks, &mut lines, &mut doc)?,
            "sentence" => parse_sentence_block(line, &toks, &mut lines, &mut doc)?,
            "lattice" => parse_lattice_block(line, &toks, &mut lines, &mut doc)?,
            other => return t_err(line, format!("expected a block keyword, got '{other}'")),
        }
    }
    Ok(doc)
}

fn parse_signature_block(
    line: usize,
    header: &[&str],
    lines: &mut Lines,
    doc: &mut Document,
) -> Result<(), TextError> {
    if header.len() != 2 {
        return t_err(line, "usage: signature <name>");
    }
    let name = header[1].to_string();
    if doc.signature(&name).is_some() {
        return t_err(line, format!("duplicate signature '{name}'"));
    }
    let mut relations = Vec::new();
    loop {
        let (line, toks) = match lines.next() {
            Some(row) => row.clone(),
            None => return t_err(lines.last_line(), "unterminated signature block"),
        };
        match toks[0] {
            "end" => break,
            "rel" => {
                if toks.len() != 3 {
                    return t_err(line, "usage: rel <name> <arity>");
                }
                let arity = parse_num(line, toks[2], "an arity")?;
                relations.push((toks[1].to_string(), arity));
            }
            other => return t_err(line, format!("expected 'rel' or 'end', got '{other}'")),
        }
    }
    let sig = Signature::new(name, relations).map_err(|e: SignatureError| TextError {
        line,
        msg: e.to_string(),
    })?;
    doc.signatures.push(Arc::new(sig));
    Ok(())
}

fn parse_structure_block(
    line: usize,
    header: &[&str],
    lines: &mut Lines,
    doc: &mut Document,
) -> Result<(), TextError> {
    if header.len() != 4 || header[2] != "over" {
        return t_err(line, "usage: structure <name> over <signature>");
    }
    let name = header[1].to_string();
    if doc.structure(&name).is_some() {
        return t_err(line, format!("duplicate structure '{name}'"));
    }
    let sig = match doc.signature(header[3]) {
        Some(sig) => Arc::clone(sig),
        None => return t_err(line, format!("unknown signature '{}'", header[3])),
    };
    let mut structure: Option<RelStructure> = None;
    loop {
        let (line, toks) = match lines.next() {
            Some(row) => row.clone(),
            None => return t_err(lines.last_line(), "unterminated structure block"),
        };
        match toks[0] {
            "end" => break,
            "size" => {
                if toks.len() != 2 {
                    return t_err(line, "usage: size <n>");
                }
                if structure.is_some() {
                    return t_err(line, "size declared twice");
                }
                let size = parse_num(line, toks[1], "a size")?;
                structure = Some(RelStructure::empty(Arc::clone(&sig), size));
            }
            rel => {
                let st = match structure.as_mut() {
                    Some(st) => st,
                    None => return t_err(line, "size must precede tuples"),
                };
                let idx = match sig.index_of(rel) {
                    Some(idx) => idx,
                    None => return t_err(line, format!("unknown relation '{rel}'")),
                };
                let tuple = toks[1..]
                    .iter()
                    .map(|t| parse_num(line, t, "an element"))
                    .collect::<Result<Vec<usize>, _>>()?;
                if st.has_tuple(idx, &tuple) {
                    doc.warnings.push(format!(
                        "line {line}: duplicate tuple {rel} {tuple:?} in '{name}' collapsed"
                    ));
                } else {
                    st.insert_tuple(idx, tuple)
                        .map_err(|e: StructureError| TextError {
                            line,
                            msg: e.to_string(),
                        })?;
                }
            }
        }
    }
    match structure {
        Some(st) => {
            doc.structures.push((name, st));
            Ok(())
        }
        None => t_err(line, format!("structure '{name}' has no size line")),
    }
}

fn parse_sentence_block(
    line: usize,
    header: &[&str],
    lines: &mut Lines,
    doc: &mut Document,
) -> Result<(), TextError> {
    if header.len() != 4 || header[2] != "over" {
        return t_err(line, "usage: sentence <name> over <signature>");
    }
    let name = header[1].to_string();
    if doc.sentence(&name).is_some() {
        return t_err(line, format!("duplicate sentence '{name}'"));
    }
    let sig = match doc.signature(header[3]) {
        Some(sig) => Arc::clone(sig),
        None => return t_err(line, format!("unknown signature '{}'", header[3])),
    };
    let mut body = String::new();
    let mut body_line = line;
    loop {
        let (line, toks) = match lines.next() {
            Some(row) => row.clone(),
            None => return t_err(lines.last_line(), "unterminated sentence block"),
        };
        if toks == ["end"] {
            break;
        }
        if body.is_empty() {
            body_line = line;
        } else {
            body.push(' ');
        }
        body.push_str(&toks.join(" "));
    }
    let sentence = logic::parse_sentence(&body, &sig).map_err(|e| TextError {
        line: body_line,
        msg: format!("in sentence '{name}': {e}"),
    })?;
    doc.sentences.push((name, sentence));
    Ok(())
}

fn parse_lattice_block(
    line: usize,
    header: &[&str],
    lines: &mut Lines,
    doc: &mut Document,
) -> Result<(), TextError> {
    if header.len() != 2 {
        return t_err(line, "usage: lattice <name>");
    }
    let name = header[1].to_string();
    if doc.lattice(&name).is_some() {
        return t_err(line, format!("duplicate lattice '{name}'"));
    }
    let mut size: Option<usize> = None;
    let mut bottom: Option<usize> = None;
    let mut top: Option<usize> = None;
    let mut join: Vec<Vec<Option<usize>>> = Vec::new();
    let mut meet: Vec<Vec<Option<usize>>> = Vec::new();
    let end_line;
    loop {
        let (line, toks) = match lines.next() {
            Some(row) => row.clone(),
            None => return t_err(lines.last_line(), "unterminated lattice block"),
        };
        let need_size = |size: &Option<usize>| -> Result<usize, TextError> {
            size.ok_or(TextError {
                line,
                msg: "size must precede table entries".into(),
            })
        };
        match toks[0] {
            "end" => {
                end_line = line;
                break;
            }
            key @ ("size" | "bottom" | "top") => {
                if toks.len() != 2 {
                    return t_err(line, format!("usage: {key} <n>"));
                }
                let v = parse_num(line, toks[1], "a number")?;
                match key {
                    "size" => {
                        if size.is_some() {
                            return t_err(line, "size declared twice");
                        }
                        size = Some(v);
                        join = vec![vec![None; v]; v];
                        meet = vec![vec![None; v]; v];
                    }
                    "bottom" => bottom = Some(v),
                    _ => top = Some(v),
                }
            }
            op @ ("join" | "meet") => {
                if toks.len() != 4 {
                    return t_err(line, format!("usage: {op} <row> <col> <value>"));
                }
                let n = need_size(&size)?;
                let r = parse_num(line, toks[1], "a row")?;
                let c = parse_num(line, toks[2], "a column")?;
                let v = parse_num(line, toks[3], "a value")?;
                if r >= n || c >= n {
                    return t_err(line, format!("cell ({r},{c}) outside a {n}x{n} table"));
                }
                let table = if op == "join" { &mut join } else { &mut meet };
                if table[r][c].is_some() {
                    return t_err(line, format!("{op} cell ({r},{c}) set twice"));
                }
                table[r][c] = Some(v);
            }
            op @ ("joinrow" | "meetrow") => {
                let n = need_size(&size)?;
                if toks.len() != n + 2 {
                    return t_err(line, format!("usage: {op} <row> <{n} values>"));
                }
                let r = parse_num(line, toks[1], "a row")?;
                if r >= n {
                    return t_err(line, format!("row {r} outside a {n}-row table"));
                }
                let table = if op == "joinrow" { &mut join } else { &mut meet };
                for (c, tok) in toks[2..].iter().enumerate() {
                    let v = parse_num(line, tok, "a value")?;
                    if table[r][c].is_some() {
                        return t_err(line, format!("{op} cell ({r},{c}) set twice"));
                    }
                    table[r][c] = Some(v);
                }
            }
            other => return t_err(line, format!("unexpected '{other}' in lattice block")),
        }
    }
    let n = match size {
        Some(n) => n,
        None => return t_err(end_line, format!("lattice '{name}' has no size line")),
    };
    let unwrap_table = |table: Vec<Vec<Option<usize>>>, op: &str| {
        table
            .into_iter()
            .enumerate()
            .map(|(r, row)| {
                row.into_iter()
                    .enumerate()
                    .map(|(c, cell)| {
                        cell.ok_or(TextError {
                            line: end_line,
                            msg: format!("{op} cell ({r},{c}) unspecified"),
                        })
                    })
                    .collect::<Result<Vec<usize>, _>>()
            })
            .collect::<Result<Vec<Vec<usize>>, _>>()
    };
    let join = unwrap_table(join, "join")?;
    let meet = unwrap_table(meet, "meet")?;
    let (bottom, top) = match (bottom, top) {
        (Some(b), Some(t)) => (b, t),
        _ => return t_err(end_line, format!("lattice '{name}' needs bottom and top")),
    };
    if n == 0 {
        return t_err(end_line, "lattice size must be positive");
    }
    let lat = BoundedLattice::new(join, meet, bottom, top).map_err(|e: LatticeError| TextError {
        line: end_line,
        msg: e.to_string(),
    })?;
    doc.lattices.push((name, lat));
    Ok(())
}

// -------------------------------------------------------- serialization

pub fn serialize_signature(sig: &Signature) -> String {
    let mut out = String::new();
    writeln!(out, "signature {}", sig.name()).unwrap();
    for (name, arity) in sig.relations() {
        writeln!(out, "  rel {name} {arity}").unwrap();
    }
    out.push_str("end\n");
    out
}

pub fn serialize_structure(name: &str, structure: &RelStructure) -> String {
    let mut out = String::new();
    writeln!(
        out,
        "structure {name} over {}",
        structure.signature().name()
    )
    .unwrap();
    writeln!(out, "  size {}", structure.size()).unwrap();
    for (idx, table) in structure.tables().iter().enumerate() {
        let rel = structure.signature().relation_name(idx);
        for tuple in table {
            let entries: Vec<String> = tuple.iter().map(|v| v.to_string()).collect();
            writeln!(out, "  {rel} {}", entries.join(" ")).unwrap();
        }
    }
    out.push_str("end\n");
    out
}

pub fn serialize_sentence(name: &str, sentence: &Sentence) -> String {
    format!(
        "sentence {name} over {}\n  {sentence}\nend\n",
        sentence.signature().name()
    )
}

pub fn serialize_lattice(name: &str, lat: &BoundedLattice) -> String {
    let mut out = String::new();
    writeln!(out, "lattice {name}").unwrap();
    writeln!(out, "  size {}", lat.size()).unwrap();
    writeln!(out, "  bottom {}", lat.bottom()).unwrap();
    writeln!(out, "  top {}", lat.top()).unwrap();
    for (op, table) in [("joinrow", lat.join_table()), ("meetrow", lat.meet_table())] {
        for (r, row) in table.iter().enumerate() {
            let entries: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            writeln!(out, "  {op} {r} {}", entries.join(" ")).unwrap();
        }
    }
    out.push_str("end\n");
    out
}

/// Canonical rendering: signatures, then structures, sentences, and
/// lattices, in declaration order, blank-line separated.
pub fn serialize_document(doc: &Document) -> String {
    let mut blocks = Vec::new();
    for sig in &doc.signatures {
        blocks.push(serialize_signature(sig));
    }
    for (name, st) in &doc.structures {
        blocks.push(serialize_structure(name, st));
    }
    for (name, s) in &doc.sentences {
        blocks.push(serialize_sentence(name, s));
    }
    for (name, l) in &doc.lattices {
        blocks.push(serialize_lattice(name, l));
    }
    blocks.join("\n")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::lattice;

    const SAMPLE: &str = "
# a small worked example
signature graph
  rel E 2
end

structure k2 over graph
  size 2
  E 0 1
  E 1 0
end

sentence loopfree over graph
  forall x . ~E(x,x)
end
";

    #[test]
    fn parses_the_worked_example() {
        let doc = parse_document(SAMPLE).unwrap();
        assert_eq!(doc.signatures.len(), 1);
        assert_eq!(doc.structure("k2").unwrap(), &catalog::k(2));
        assert!(doc.sentence("loopfree").is_some());
        assert!(doc.warnings.is_empty());
    }

    #[test]
    fn duplicate_tuples_warn_but_parse() {
        let text = "signature g\n  rel E 2\nend\nstructure s over g\n  size 2\n  E 0 1\n  E 0 1\nend\n";
        let doc = parse_document(text).unwrap();
        assert_eq!(doc.structure("s").unwrap().tuple_count(), 1);
        assert_eq!(doc.warnings.len(), 1);
        assert!(doc.warnings[0].contains("line 7"));
    }

    #[test]
    fn errors_carry_line_numbers() {
        let cases: &[(&str, usize, &str)] = &[
            ("signature g\n  rel E 2\nbogus\n", 3, "expected 'rel' or 'end'"),
            ("structure s over g\nend\n", 1, "unknown signature"),
            (
                "signature g\n  rel E 2\nend\nstructure s over g\n  E 0 1\nend\n",
                5,
                "size must precede",
            ),
            (
                "signature g\n  rel E 2\nend\nstructure s over g\n  size 2\n  E 0 5\nend\n",
                6,
                "outside universe",
            ),
            (
                "signature g\n  rel E 2\nend\nsentence s over g\n  forall x , E(x,x)\nend\n",
                5,
                "in sentence 's'",
            ),
        ];
        for (text, line, needle) in cases {
            let err = parse_document(text).unwrap_err();
            assert_eq!(err.line, *line, "wrong line for {text:?}: {err}");
            assert!(
                err.msg.contains(needle),
                "missing '{needle}' in '{}'",
                err.msg
            );
        }
    }

    #[test]
    fn lattice_blocks_parse_in_both_table_styles() {
        let rows = "lattice two\n  size 2\n  bottom 0\n  top 1\n  joinrow 0 0 1\n  joinrow 1 1 1\n  meetrow 0 0 0\n  meetrow 1 0 1\nend\n";
        let doc = parse_document(rows).unwrap();
        assert_eq!(doc.lattice("two").unwrap(), &lattice::two());
        let cells = "lattice two\n  size 2\n  bottom 0\n  top 1\n  join 0 0 0\n  join 0 1 1\n  join 1 0 1\n  join 1 1 1\n  meet 0 0 0\n  meet 0 1 0\n  meet 1 0 0\n  meet 1 1 1\nend\n";
        let doc = parse_document(cells).unwrap();
        assert_eq!(doc.lattice("two").unwrap(), &lattice::two());
    }

    #[test]
    fn lattice_blocks_reject_gaps_and_conflicts() {
        let missing = "lattice l\n  size 2\n  bottom 0\n  top 1\n  joinrow 0 0 1\n  meetrow 0 0 0\n  meetrow 1 0 1\nend\n";
        let err = parse_document(missing).unwrap_err();
        assert!(err.msg.contains("join cell (1,0) unspecified"));
        let twice = "lattice l\n  size 2\n  bottom 0\n  top 1\n  join 0 0 0\n  join 0 0 0\n";
        let err = parse_document(twice).unwrap_err();
        assert!(err.msg.contains("set twice"));
    }

    #[test]
    fn canonical_round_trip() {
        let doc = parse_document(SAMPLE).unwrap();
        let printed = serialize_document(&doc);
        let again = parse_document(&printed).unwrap();
        assert_eq!(serialize_document(&again), printed);
        assert_eq!(again.structure("k2"), doc.structure("k2"));
        assert_eq!(again.sentence("loopfree"), doc.sentence("loopfree"));
    }

    #[test]
    fn lattice_round_trip() {
        let lat = lattice::stack(&lattice::m_k(3), &lattice::m_k(2));
        let printed = serialize_lattice("s", &lat);
        let doc = parse_document(&printed).unwrap();
        assert_eq!(doc.lattice("s").unwrap(), &lat);
    }

    #[test]
    fn multiline_sentences_join() {
        let text = "signature g\n  rel E 2\nend\nsentence s over g\n  forall x y .\n    E(x,y)\n    -> E(y,x)\nend\n";
        let doc = parse_document(text).unwrap();
        assert_eq!(doc.sentence("s").unwrap().to_string(), "forall x y . E(x,y) -> E(y,x)");
    }
}
