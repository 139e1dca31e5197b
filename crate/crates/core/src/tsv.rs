//! Tab-separated input shared by the terminology and anchor loaders.
//!
//! Files start with a fixed header row; `#` lines are comments and blank
//! lines are skipped. Fields are taken verbatim (no quoting).

use std::fs::File;
use std::io::{BufRead, BufReader, Read};
use std::path::Path;

use crate::error::{Error, Result};

/// One data row: 1-based line number plus its fields.
pub(crate) struct Row {
    pub line: u64,
    pub fields: Vec<String>,
}

pub(crate) fn read_file(path: &Path, header: &[&str]) -> Result<Vec<Row>> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read(file, &path.display().to_string(), header)
}

pub(crate) fn read<R: Read>(input: R, name: &str, header: &[&str]) -> Result<Vec<Row>> {
    let mut rows = Vec::new();
    let mut saw_header = false;
    for (idx, line) in BufReader::new(input).lines().enumerate() {
        let line_no = idx as u64 + 1;
        let line = line.map_err(|e| Error::parse(name, line_no, e.to_string()))?;
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<String> = line.split('\t').map(str::to_string).collect();
        if !saw_header {
            if fields != header {
                return Err(Error::parse(
                    name,
                    line_no,
                    format!(
                        "expected header '{}', found '{}'",
                        header.join("\\t"),
                        fields.join("\\t")
                    ),
                ));
            }
            saw_header = true;
            continue;
        }
        if fields.len() != header.len() {
            return Err(Error::parse(
                name,
                line_no,
                format!("expected {} columns, found {}", header.len(), fields.len()),
            ));
        }
        rows.push(Row {
            line: line_no,
            fields,
        });
    }
    if !saw_header {
        return Err(Error::parse(name, 1, "missing header row"));
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn skips_comments_and_blank_lines() {
        let text = "# leading comment\na\tb\n\n# mid\n1\tx y\n2\tz\n";
        let rows = read(text.as_bytes(), "t.tsv", &["a", "b"]).unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[0].line, 5);
        assert_eq!(rows[0].fields, vec!["1", "x y"]);
        assert_eq!(rows[1].line, 6);
    }

    #[test]
    fn wrong_column_count_reports_line() {
        let text = "a\tb\n1\tx\n2\n";
        let err = read(text.as_bytes(), "t.tsv", &["a", "b"]).err().unwrap();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 3),
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn header_mismatch() {
        let err = read("x\ty\n".as_bytes(), "t.tsv", &["a", "b"]).err().unwrap();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
    }

    #[test]
    fn quotes_are_literal() {
        let rows = read("a\tb\n1\t\"quoted\" term\n".as_bytes(), "t.tsv", &["a", "b"]).unwrap();
        assert_eq!(rows[0].fields[1], "\"quoted\" term");
    }
}
