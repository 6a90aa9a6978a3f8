//! Plain-text instance format.
//!
//! ```text
//! n m
//! i j w        (m lines)
//! h            (optional marker, followed by field lines)
//! i h_i
//! ```
//!
//! Tokens are whitespace separated; blank lines and `#` comments are ignored.
//! Field lines may follow the edges with or without the `h` marker.

use std::io::Write;
use std::path::Path;

use super::IsingInstance;
use crate::error::{Error, Result};

pub fn parse_instance(text: &str) -> Result<IsingInstance> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(no, l)| (no + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());

    let (hline, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        message: "missing header".into(),
    })?;
    let head: Vec<&str> = header.split_whitespace().collect();
    if head.len() != 2 {
        return Err(parse_err(hline, "header must be `n m`"));
    }
    let n: usize = parse_tok(head[0], hline)?;
    let m: usize = parse_tok(head[1], hline)?;

    let mut edges = Vec::with_capacity(m);
    for _ in 0..m {
        let (no, line) = lines
            .next()
            .ok_or_else(|| parse_err(hline, &format!("expected {m} edge lines")))?;
        let tok: Vec<&str> = line.split_whitespace().collect();
        if tok.len() != 3 {
            return Err(parse_err(no, "edge line must be `i j w`"));
        }
        edges.push((parse_tok(tok[0], no)?, parse_tok(tok[1], no)?, parse_tok(tok[2], no)?));
    }

    let mut fields = vec![0.0; n];
    for (no, line) in lines {
        let tok: Vec<&str> = line.split_whitespace().collect();
        match tok.as_slice() {
            ["h"] => continue,
            [i, h] => {
                let i: usize = parse_tok(i, no)?;
                if i >= n {
                    return Err(parse_err(no, &format!("field index {i} out of range")));
                }
                fields[i] = parse_tok(h, no)?;
            }
            _ => return Err(parse_err(no, "field line must be `i h_i`")),
        }
    }
    IsingInstance::new(n, edges)?.with_fields(fields)
}

pub fn read_instance(path: impl AsRef<Path>) -> Result<IsingInstance> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    let inst = parse_instance(&text)?;
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("file");
    Ok(inst.with_label(stem))
}

/// Writes the instance; the field block is emitted only when a field is nonzero.
pub fn write_instance(inst: &IsingInstance, mut out: impl Write) -> Result<()> {
    writeln!(out, "{} {}", inst.n(), inst.num_edges())?;
    for e in inst.edges() {
        writeln!(out, "{} {} {}", e.i, e.j, e.w)?;
    }
    if !inst.is_maxcut() {
        writeln!(out, "h")?;
        for (i, h) in inst.fields().iter().enumerate().filter(|(_, &h)| h != 0.0) {
            writeln!(out, "{i} {h}")?;
        }
    }
    Ok(())
}

fn parse_tok<T: std::str::FromStr>(tok: &str, line: usize) -> Result<T> {
    tok.parse()
        .map_err(|_| parse_err(line, &format!("cannot parse {tok:?}")))
}

fn parse_err(line: usize, message: &str) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}
