//! Line-delimited transition logs.
//!
//! One JSON object per line:
//!
//! ```text
//! {"t":0,"s":[..],"a":[..],"s_next":[..],"r":-1.0,"done":false,"s_true":[..],"s_next_true":[..]}
//! ```
//!
//! `r`, `s_true` and `s_next_true` are optional. `t` must be strictly
//! increasing and every vector must have the configured dimensionality with
//! finite components. Blank lines are ignored.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransitionRecord {
    pub t: u64,
    pub s: Vec<f64>,
    pub a: Vec<f64>,
    pub s_next: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<f64>,
    pub done: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s_true: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s_next_true: Option<Vec<f64>>,
}

/// Which state vectors the analyzer symbolizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StateStream {
    /// What the agent's sensors reported (possibly corrupted).
    #[default]
    Observed,
    /// Pre-noise ground truth, falling back to observed when absent.
    True,
}

impl TransitionRecord {
    pub fn state(&self, stream: StateStream) -> &[f64] {
        match (stream, &self.s_true) {
            (StateStream::True, Some(v)) => v,
            _ => &self.s,
        }
    }

    pub fn next_state(&self, stream: StateStream) -> &[f64] {
        match (stream, &self.s_next_true) {
            (StateStream::True, Some(v)) => v,
            _ => &self.s_next,
        }
    }

    pub fn to_line(&self) -> String {
        serde_json::to_string(self).expect("records always serialize")
    }
}

fn field_err(line: usize, field: &str, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        field: field.to_string(),
        msg: msg.into(),
    }
}

fn vector(obj: &Map<String, Value>, key: &str, dims: usize, line: usize) -> Result<Option<Vec<f64>>> {
    let Some(v) = obj.get(key) else {
        return Ok(None);
    };
    if v.is_null() {
        return Ok(None);
    }
    let arr = v
        .as_array()
        .ok_or_else(|| field_err(line, key, "expected an array of numbers"))?;
    if arr.len() != dims {
        return Err(field_err(
            line,
            key,
            format!("expected {dims} components, found {}", arr.len()),
        ));
    }
    arr.iter()
        .enumerate()
        .map(|(i, x)| match x.as_f64() {
            Some(f) if f.is_finite() => Ok(f),
            _ => Err(field_err(line, key, format!("component {i} is not a finite number"))),
        })
        .collect::<Result<Vec<_>>>()
        .map(Some)
}

/// Parses and validates one line (1-based `line` for messages).
pub fn parse_record(text: &str, dims: usize, line: usize) -> Result<TransitionRecord> {
    let value: Value = serde_json::from_str(text).map_err(|e| field_err(line, "<record>", e.to_string()))?;
    let obj = value
        .as_object()
        .ok_or_else(|| field_err(line, "<record>", "expected a JSON object"))?;
    let t = obj
        .get("t")
        .ok_or_else(|| field_err(line, "t", "missing"))?
        .as_u64()
        .ok_or_else(|| field_err(line, "t", "expected a non-negative integer"))?;
    let required = |key: &str| vector(obj, key, dims, line)?.ok_or_else(|| field_err(line, key, "missing"));
    let s = required("s")?;
    let a = required("a")?;
    let s_next = required("s_next")?;
    let r = match obj.get("r") {
        None | Some(Value::Null) => None,
        Some(v) => match v.as_f64() {
            Some(f) if f.is_finite() => Some(f),
            _ => return Err(field_err(line, "r", "expected a finite number")),
        },
    };
    let done = obj
        .get("done")
        .ok_or_else(|| field_err(line, "done", "missing"))?
        .as_bool()
        .ok_or_else(|| field_err(line, "done", "expected true or false"))?;
    Ok(TransitionRecord {
        t,
        s,
        a,
        s_next,
        r,
        done,
        s_true: vector(obj, "s_true", dims, line)?,
        s_next_true: vector(obj, "s_next_true", dims, line)?,
    })
}

/// Lazily parsed log; yields records in file order and stops after the
/// first error.
pub struct LogReader<R> {
    lines: std::io::Lines<R>,
    dims: usize,
    line: usize,
    prev_t: Option<u64>,
    path: PathBuf,
    failed: bool,
}

impl<R: BufRead> LogReader<R> {
    pub fn new(reader: R, dims: usize) -> Self {
        Self {
            lines: reader.lines(),
            dims,
            line: 0,
            prev_t: None,
            path: PathBuf::from("<stream>"),
            failed: false,
        }
    }
}

impl<R: BufRead> Iterator for LogReader<R> {
    type Item = Result<TransitionRecord>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.failed {
            return None;
        }
        loop {
            let text = match self.lines.next()? {
                Ok(text) => text,
                Err(e) => {
                    self.failed = true;
                    return Some(Err(Error::io(&self.path, e)));
                }
            };
            self.line += 1;
            if text.trim().is_empty() {
                continue;
            }
            let rec = parse_record(&text, self.dims, self.line).and_then(|rec| {
                match self.prev_t {
                    Some(prev) if rec.t <= prev => Err(Error::Sequencing {
                        line: self.line,
                        prev,
                        t: rec.t,
                    }),
                    _ => Ok(rec),
                }
            });
            match &rec {
                Ok(r) => self.prev_t = Some(r.t),
                Err(_) => self.failed = true,
            }
            return Some(rec);
        }
    }
}

pub fn parse_log(path: impl AsRef<Path>, dims: usize) -> Result<LogReader<BufReader<File>>> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut reader = LogReader::new(BufReader::new(file), dims);
    reader.path = path.to_path_buf();
    Ok(reader)
}

/// Reads and validates a whole log into memory.
pub fn read_log(path: impl AsRef<Path>, dims: usize) -> Result<Vec<TransitionRecord>> {
    parse_log(path, dims)?.collect()
}

pub fn write_log<'a>(
    records: impl IntoIterator<Item = &'a TransitionRecord>,
    path: impl AsRef<Path>,
) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    for rec in records {
        writeln!(w, "{}", rec.to_line()).map_err(|e| Error::io(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Cursor;

    fn read(text: &str) -> Vec<Result<TransitionRecord>> {
        LogReader::new(Cursor::new(text.to_string()), 3).collect()
    }

    const LINE0: &str = r#"{"t":0,"s":[0.1,0.2,0.3],"a":[1,0,-1],"s_next":[0.0,0.2,0.3],"r":-1,"done":false}"#;
    const LINE1: &str = r#"{"t":1,"s":[0.0,0.2,0.3],"a":[0,0,0],"s_next":[0.0,0.2,0.3],"done":false}"#;
    const LINE2: &str = r#"{"t":5,"s":[0.0,0.2,0.3],"a":[0,0,0],"s_next":[0.0,0.0,0.0],"done":true,"s_true":[0,0,0],"s_next_true":[0,0,0]}"#;

    #[test]
    fn empty_input_gives_no_records() {
        assert!(read("").is_empty());
        assert!(read("\n\n").is_empty());
    }

    #[test]
    fn well_formed_lines_parse_in_order() {
        let recs: Vec<_> = read(&format!("{LINE0}\n{LINE1}\n{LINE2}\n"))
            .into_iter()
            .collect::<Result<_>>()
            .unwrap();
        assert_eq!(recs.iter().map(|r| r.t).collect::<Vec<_>>(), vec![0, 1, 5]);
        assert_eq!(recs[0].r, Some(-1.0));
        assert_eq!(recs[1].r, None);
        assert!(recs[2].done);
        assert_eq!(recs[2].state(StateStream::True), &[0.0, 0.0, 0.0]);
        assert_eq!(recs[1].state(StateStream::True), &[0.0, 0.2, 0.3]);
    }

    #[test]
    fn short_vector_is_rejected_at_its_line() {
        let bad = r#"{"t":1,"s":[0.0,0.2],"a":[0,0,0],"s_next":[0,0,0],"done":false}"#;
        let out = read(&format!("{LINE0}\n{bad}\n{LINE2}\n"));
        assert_eq!(out.len(), 2);
        match &out[1] {
            Err(Error::Parse { line, field, .. }) => {
                assert_eq!(*line, 2);
                assert_eq!(field, "s");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn non_monotone_t_is_a_sequencing_error() {
        let out = read(&format!("{LINE1}\n{LINE0}\n"));
        assert!(matches!(out[1], Err(Error::Sequencing { line: 2, prev: 1, t: 0 })));
    }

    #[test]
    fn missing_and_bad_fields_are_named() {
        let cases = [
            (r#"{"s":[0,0,0],"a":[0,0,0],"s_next":[0,0,0],"done":false}"#, "t"),
            (r#"{"t":0,"s":[0,0,0],"a":[0,0,0],"s_next":[0,0,0]}"#, "done"),
            (r#"{"t":0,"s":[0,0,0],"a":[0,"x",0],"s_next":[0,0,0],"done":false}"#, "a"),
            (r#"{"t":0,"s":[0,0,0],"a":[0,0,0],"s_next":[0,0,0],"r":"bad","done":false}"#, "r"),
            (r#"not json"#, "<record>"),
        ];
        for (text, want) in cases {
            match parse_record(text, 3, 7) {
                Err(Error::Parse { line: 7, field, .. }) => assert_eq!(field, want),
                other => panic!("{text}: {other:?}"),
            }
        }
    }

    #[test]
    fn written_lines_parse_back() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("log.jsonl");
        let recs: Vec<_> = read(&format!("{LINE0}\n{LINE2}\n")).into_iter().map(|r| r.unwrap()).collect();
        write_log(&recs, &path).unwrap();
        assert_eq!(read_log(&path, 3).unwrap(), recs);
    }

    #[test]
    fn missing_file_is_io_error() {
        assert!(matches!(parse_log("/nonexistent/x.jsonl", 3), Err(Error::Io { .. })));
    }
}
