//! Text files for objects: one header line naming the kind and shape,
//! then one body line per cell, tuple, or table row.  Parsing dispatches
//! on the header keyword, validates everything the constructors validate,
//! and reports errors with the file name and line number.  Serialization
//! is the canonical rendering, so `serialize(parse(file))` reproduces a
//! canonical file byte for byte and `parse(serialize(x))` returns `x`.
//!
//! Files describe objects before any removals; the deeper shapes that
//! appear inside the engine recursion (placeholder entries, boundary
//! label letters) have no file form.

use std::path::Path;

use itertools::Itertools;

use crate::decorated::{BoundaryGraph, OrientedGraph};
use crate::error::{Error, Result};
use crate::experiments::ClassObject;
use crate::graphs::IGraph;
use crate::relations::{GroupTable, NaryRelation};

/// Any object a file can describe.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParsedObject {
    Plain(IGraph),
    Oriented(OrientedGraph),
    Boundary(BoundaryGraph),
    Relation(NaryRelation),
    Group(GroupTable),
}

impl ParsedObject {
    /// Canonical text form, identical to what `parse` accepts.
    pub fn serialize(&self) -> String {
        match self {
            ParsedObject::Plain(g) => g.render(),
            ParsedObject::Oriented(g) => g.render(),
            ParsedObject::Boundary(g) => g.render(),
            ParsedObject::Relation(relation) => relation.render(),
            ParsedObject::Group(table) => table.render(),
        }
    }

    /// The experiment-facing view; groups become their ternary relation.
    pub fn into_class_object(self) -> ClassObject {
        match self {
            ParsedObject::Plain(g) => ClassObject::Plain(g),
            ParsedObject::Oriented(g) => ClassObject::Oriented(g),
            ParsedObject::Boundary(g) => ClassObject::Boundary(g),
            ParsedObject::Relation(relation) => ClassObject::Relation {
                tag: "relation".to_string(),
                relation,
            },
            ParsedObject::Group(table) => ClassObject::Relation {
                tag: "group".to_string(),
                relation: table.relation(),
            },
        }
    }
}

/// Reads and parses one object file.
pub fn parse_object(path: &Path) -> Result<ParsedObject> {
    let name = path.display().to_string();
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::input(format!("cannot read {name}: {e}")))?;
    parse_object_text(&name, &text)
}

/// Parses object text; `name` appears in error messages.
pub fn parse_object_text(name: &str, text: &str) -> Result<ParsedObject> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(idx, line)| (idx + 1, line.trim()))
        .filter(|(_, line)| !line.is_empty());
    let (header_line, header) = lines
        .next()
        .ok_or_else(|| Error::input(format!("{name} is empty")))?;
    let mut tokens = header.split_whitespace();
    let keyword = tokens.next().expect("a non-empty line has a first token");
    let fields: Vec<&str> = tokens.collect();
    match keyword {
        "igraph" => {
            let [i, r] = shape(name, header_line, &fields, ["i", "r"])?;
            let mut g = IGraph::empty(i, r);
            for (line_no, line) in lines {
                let body = expect_keyword(name, line_no, line, "cell")?;
                g = g
                    .with_cell(numbers(name, line_no, body)?)
                    .map_err(|e| at(name, line_no, e))?;
            }
            Ok(ParsedObject::Plain(g))
        }
        "origraph" => {
            let [i, r] = shape(name, header_line, &fields, ["i", "r"])?;
            let mut cells: Vec<(Vec<usize>, i8)> = Vec::new();
            for (line_no, line) in lines {
                let body = expect_keyword(name, line_no, line, "cell")?;
                let (sign_text, rest) = body.split_once(' ').unwrap_or((body, ""));
                let sign = match sign_text {
                    "+" => 1,
                    "-" => -1,
                    other => {
                        return Err(Error::input_at(
                            name,
                            line_no,
                            &format!("expected a sign + or -, found {other:?}"),
                        ))
                    }
                };
                cells.push((numbers(name, line_no, rest)?, sign));
                OrientedGraph::new(i, r, cells.clone()).map_err(|e| at(name, line_no, e))?;
            }
            Ok(ParsedObject::Oriented(
                OrientedGraph::new(i, r, cells).expect("every line was validated"),
            ))
        }
        "bgraph" => {
            let [i, r] = shape(name, header_line, &fields, ["i", "r"])?;
            let mut cells: Vec<(Vec<usize>, Vec<usize>)> = Vec::new();
            for (line_no, line) in lines {
                let body = expect_keyword(name, line_no, line, "cell")?;
                let (support_text, boundary_text) =
                    body.split_once(" ; boundary").ok_or_else(|| {
                        Error::input_at(
                            name,
                            line_no,
                            "expected `cell <vertices> ; boundary <vertices>`",
                        )
                    })?;
                cells.push((
                    numbers(name, line_no, support_text)?,
                    numbers(name, line_no, boundary_text)?,
                ));
                BoundaryGraph::at_depth_zero(i, r, cells.clone())
                    .map_err(|e| at(name, line_no, e))?;
            }
            Ok(ParsedObject::Boundary(
                BoundaryGraph::at_depth_zero(i, r, cells).expect("every line was validated"),
            ))
        }
        "relation" => {
            let [n, m] = shape(name, header_line, &fields, ["n", "r"])?;
            let mut tuples: Vec<Vec<usize>> = Vec::new();
            for (line_no, line) in lines {
                let body = expect_keyword(name, line_no, line, "tuple")?;
                if body.contains('*') {
                    return Err(Error::input_at(
                        name,
                        line_no,
                        "placeholder entries are not allowed in input files",
                    ));
                }
                let tuple = numbers(name, line_no, body)?;
                if tuples.contains(&tuple) {
                    return Err(Error::input_at(
                        name,
                        line_no,
                        &format!("duplicate tuple ({})", tuple.iter().join(" ")),
                    ));
                }
                tuples.push(tuple);
                NaryRelation::depth_zero(n, m, tuples.clone())
                    .map_err(|e| at(name, line_no, e))?;
            }
            Ok(ParsedObject::Relation(
                NaryRelation::depth_zero(n, m, tuples).expect("every line was validated"),
            ))
        }
        "group" => {
            let [m] = shape(name, header_line, &fields, ["r"])?;
            let mut rows: Vec<Vec<usize>> = Vec::new();
            for (line_no, line) in lines {
                let body = expect_keyword(name, line_no, line, "row")?;
                let row = numbers(name, line_no, body)?;
                if row.len() != m {
                    return Err(Error::input_at(
                        name,
                        line_no,
                        &format!("row has {} entries, expected {m}", row.len()),
                    ));
                }
                rows.push(row);
            }
            if rows.len() != m {
                return Err(Error::input(format!(
                    "{name}: found {} rows, expected {m}",
                    rows.len()
                )));
            }
            let table =
                GroupTable::new(rows).map_err(|e| Error::input(format!("{name}: {e}")))?;
            Ok(ParsedObject::Group(table))
        }
        other => Err(Error::input_at(
            name,
            header_line,
            &format!(
                "unknown object kind {other:?}; expected igraph, origraph, bgraph, relation, or group"
            ),
        )),
    }
}

/// Parses the `key=<number>` header fields, in order, rejecting extras.
fn shape<const K: usize>(
    name: &str,
    line_no: usize,
    fields: &[&str],
    keys: [&str; K],
) -> Result<[usize; K]> {
    if fields.len() != K {
        return Err(Error::input_at(
            name,
            line_no,
            &format!(
                "expected the fields {}, found {} of them",
                keys.iter().map(|k| format!("{k}=<number>")).join(" "),
                fields.len()
            ),
        ));
    }
    let mut out = [0usize; K];
    for (slot, (field, key)) in out.iter_mut().zip(fields.iter().zip(keys)) {
        let value = field
            .strip_prefix(key)
            .and_then(|rest| rest.strip_prefix('='))
            .and_then(|v| v.parse::<usize>().ok())
            .ok_or_else(|| {
                Error::input_at(name, line_no, &format!("expected {key}=<number>, found {field:?}"))
            })?;
        *slot = value;
    }
    Ok(out)
}

fn expect_keyword<'a>(
    name: &str,
    line_no: usize,
    line: &'a str,
    keyword: &str,
) -> Result<&'a str> {
    if line == keyword {
        return Ok("");
    }
    line.strip_prefix(keyword)
        .and_then(|rest| rest.strip_prefix(' '))
        .ok_or_else(|| {
            Error::input_at(name, line_no, &format!("expected a `{keyword} ...` line, found {line:?}"))
        })
}

fn numbers(name: &str, line_no: usize, text: &str) -> Result<Vec<usize>> {
    text.split_whitespace()
        .map(|token| {
            token.parse::<usize>().map_err(|_| {
                Error::input_at(name, line_no, &format!("expected a number, found {token:?}"))
            })
        })
        .collect()
}

fn at(name: &str, line_no: usize, e: Error) -> Error {
    match e {
        Error::Input(msg) => Error::input_at(name, line_no, &msg),
        other => other,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<ParsedObject> {
        parse_object_text("test.txt", text)
    }

    #[test]
    fn graph_files_round_trip() {
        let parsed = parse("igraph i=2 r=3\ncell 0 1\ncell 0 2\ncell 1 2\n").unwrap();
        let ParsedObject::Plain(ref g) = parsed else {
            panic!("wrong kind")
        };
        assert_eq!(g.cell_count(), 3);
        assert_eq!(parsed.serialize(), "igraph i=2 r=3\ncell 0 1\ncell 0 2\ncell 1 2\n");
        assert_eq!(parse(&parsed.serialize()).unwrap(), parsed);
    }

    #[test]
    fn duplicate_cells_report_their_line() {
        let err = parse("igraph i=2 r=3\ncell 0 1\ncell 1 0\n").unwrap_err();
        assert_eq!(
            err.to_string(),
            "input error: test.txt:3: duplicate cell {0 1}"
        );
    }

    #[test]
    fn oriented_files_normalize_the_listed_order() {
        let parsed = parse("origraph i=2 r=2\ncell + 1 0\n").unwrap();
        assert_eq!(parsed.serialize(), "origraph i=2 r=2\ncell - 0 1\n");
        let bad = parse("origraph i=2 r=2\ncell 0 1\n").unwrap_err();
        assert!(bad.to_string().contains("expected a sign"));
    }

    #[test]
    fn boundary_files_round_trip() {
        let text = "bgraph i=2 r=3\ncell 0 1 ; boundary 1\ncell 0 2 ; boundary\n";
        let parsed = parse(text).unwrap();
        assert_eq!(parsed.serialize(), text);
        assert_eq!(parse(&parsed.serialize()).unwrap(), parsed);
        let bad = parse("bgraph i=2 r=3\ncell 0 1 ; boundary 2\n").unwrap_err();
        assert!(bad.to_string().contains("test.txt:2"));
        assert!(bad.to_string().contains("not in the cell support"));
    }

    #[test]
    fn relation_files_reject_placeholders() {
        let parsed = parse("relation n=2 r=2\ntuple 0 1\ntuple 1 0\n").unwrap();
        assert_eq!(parsed.serialize(), "relation n=2 r=2\ntuple 0 1\ntuple 1 0\n");
        let err = parse("relation n=2 r=2\ntuple 0 *1\n").unwrap_err();
        assert!(err.to_string().contains("placeholder"));
        let twice = parse("relation n=2 r=2\ntuple 0 1\ntuple 0 1\n").unwrap_err();
        assert_eq!(
            twice.to_string(),
            "input error: test.txt:3: duplicate tuple (0 1)"
        );
    }

    #[test]
    fn group_files_validate_the_table() {
        let parsed = parse("group r=2\nrow 0 1\nrow 1 0\n").unwrap();
        let ParsedObject::Group(ref table) = parsed else {
            panic!("wrong kind")
        };
        assert_eq!(table.order(), 2);
        assert_eq!(table.op(1, 1), 0);
        assert_eq!(parsed.serialize(), "group r=2\nrow 0 1\nrow 1 0\n");
        let bad = parse("group r=2\nrow 0 1\nrow 0 1\n").unwrap_err();
        assert!(bad.to_string().contains("column 0 repeats element 0"));
        let short = parse("group r=3\nrow 0 1 2\n").unwrap_err();
        assert!(short.to_string().contains("found 1 rows, expected 3"));
    }

    #[test]
    fn headers_are_validated() {
        assert!(parse("").unwrap_err().to_string().contains("empty"));
        let unknown = parse("widget i=1 r=2\n").unwrap_err();
        assert!(unknown.to_string().contains("unknown object kind"));
        let missing = parse("igraph i=1\n").unwrap_err();
        assert!(missing.to_string().contains("expected the fields"));
        let renamed = parse("igraph j=1 r=2\n").unwrap_err();
        assert!(renamed.to_string().contains("expected i=<number>"));
    }

    #[test]
    fn parsed_objects_feed_experiments() {
        let group = parse("group r=2\nrow 0 1\nrow 1 0\n").unwrap().into_class_object();
        assert!(group.describe().starts_with("group; relation n=3 r=2"));
        let graph = parse("igraph i=1 r=2\ncell 0\n").unwrap().into_class_object();
        assert_eq!(graph.describe(), "igraph i=1 r=2; cell 0");
    }
}
