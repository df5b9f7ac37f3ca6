//! The colored-graph text format.
//!
//! Header line `n k c`, then one line per edge: `v1 ... vk color` with
//! 1-based, strictly increasing vertices and a 1-based color. This format is
//! shared by every CLI subcommand.

use crate::graph::ColoredHypergraph;
use std::io::{BufRead, Write};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("line {line}: {msg}")]
    Malformed { line: usize, msg: String },
    #[error("read error: {0}")]
    Io(#[from] std::io::Error),
}

fn bad(line: usize, msg: impl Into<String>) -> FormatError {
    FormatError::Malformed {
        line,
        msg: msg.into(),
    }
}

pub fn read_colored_graph<R: BufRead>(reader: R) -> Result<ColoredHypergraph, FormatError> {
    let mut lines = reader.lines().enumerate();
    let (idx, header) = loop {
        match lines.next() {
            Some((i, l)) => {
                let l = l?;
                if !l.trim().is_empty() {
                    break (i + 1, l);
                }
            }
            None => return Err(bad(1, "missing header line `n k c`")),
        }
    };
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.len() != 3 {
        return Err(bad(idx, "header must be `n k c`"));
    }
    let n: usize = fields[0]
        .parse()
        .map_err(|_| bad(idx, "bad vertex count in header"))?;
    let k: usize = fields[1]
        .parse()
        .map_err(|_| bad(idx, "bad uniformity in header"))?;
    let c: u32 = fields[2]
        .parse()
        .map_err(|_| bad(idx, "bad palette size in header"))?;
    let mut edges = Vec::new();
    for (i, line) in lines {
        let line = line?;
        let lineno = i + 1;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != k + 1 {
            return Err(bad(
                lineno,
                format!("expected {} vertices and a color, got {} fields", k, fields.len()),
            ));
        }
        let mut vs = Vec::with_capacity(k);
        for f in &fields[..k] {
            let v: u64 = f.parse().map_err(|_| bad(lineno, "bad vertex id"))?;
            if v < 1 || v > n as u64 {
                return Err(bad(lineno, format!("vertex {} out of range 1..={}", v, n)));
            }
            vs.push((v - 1) as u32);
        }
        if !vs.windows(2).all(|w| w[0] < w[1]) {
            return Err(bad(lineno, "vertices must be strictly increasing"));
        }
        let col: u64 = fields[k].parse().map_err(|_| bad(lineno, "bad color id"))?;
        if col < 1 || col > c as u64 {
            return Err(bad(lineno, format!("color {} out of range 1..={}", col, c)));
        }
        edges.push((vs, (col - 1) as u32));
    }
    ColoredHypergraph::new(n, k, c, edges).map_err(|e| bad(0, e.to_string()))
}

pub fn write_colored_graph<W: Write>(w: &mut W, g: &ColoredHypergraph) -> std::io::Result<()> {
    writeln!(w, "{} {} {}", g.n(), g.k(), g.c())?;
    for (vs, color) in g.edges() {
        for v in vs {
            write!(w, "{} ", v + 1)?;
        }
        writeln!(w, "{}", color + 1)?;
    }
    Ok(())
}

pub fn graph_to_string(g: &ColoredHypergraph) -> String {
    let mut buf = Vec::new();
    write_colored_graph(&mut buf, g).expect("writing to memory cannot fail");
    String::from_utf8(buf).expect("format is ASCII")
}
