//! Line-oriented text formats for functions, matroids and graphs.
//!
//! Every file starts with a magic line (`boolfn v1`, `matroid v1`, `graph v1`).
//! Blank lines and lines starting with `#` are ignored, and `;` separates
//! records on one physical line. Truth tables are hex, byte `i` holding
//! points `8i..8i+7` with the lowest point in the least significant bit.

use matfree::{BinaryMatroid, BooleanFunction, GfVec, Graph};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("line {line}: malformed header: {detail}")]
    MalformedHeader { line: usize, detail: String },
    #[error("line {line}: length mismatch: expected {expected}, found {found}")]
    LengthMismatch {
        line: usize,
        expected: usize,
        found: usize,
    },
    #[error("line {line}: graph is not simple: {detail}")]
    NonSimpleGraph { line: usize, detail: String },
    #[error("line {line}: invalid value: {detail}")]
    InvalidValue { line: usize, detail: String },
}

impl FormatError {
    pub fn line(&self) -> usize {
        match self {
            FormatError::MalformedHeader { line, .. }
            | FormatError::LengthMismatch { line, .. }
            | FormatError::NonSimpleGraph { line, .. }
            | FormatError::InvalidValue { line, .. } => *line,
        }
    }
}

/// Meaningful records with their 1-based physical line numbers.
fn records(text: &str) -> Vec<(usize, &str)> {
    text.lines()
        .enumerate()
        .flat_map(|(i, line)| line.split(';').map(move |r| (i + 1, r.trim())))
        .filter(|(_, r)| !r.is_empty() && !r.starts_with('#'))
        .collect()
}

fn expect_magic<'a>(recs: &mut impl Iterator<Item = (usize, &'a str)>, magic: &str) -> Result<usize, FormatError> {
    match recs.next() {
        Some((line, r)) if r == magic => Ok(line),
        Some((line, r)) => Err(FormatError::MalformedHeader {
            line,
            detail: format!("expected {magic:?}, found {r:?}"),
        }),
        None => Err(FormatError::MalformedHeader {
            line: 1,
            detail: format!("empty file, expected {magic:?}"),
        }),
    }
}

fn header_value(line: usize, record: Option<&str>, key: &str) -> Result<usize, FormatError> {
    let malformed = || FormatError::MalformedHeader {
        line,
        detail: format!("expected `{key} <integer>`"),
    };
    let raw = record.ok_or_else(malformed)?;
    raw.parse().map_err(|_| malformed())
}

pub fn parse_function(text: &str) -> Result<BooleanFunction, FormatError> {
    let recs = records(text);
    let mut it = recs.iter().copied();
    let magic_line = expect_magic(&mut it, "boolfn v1")?;
    let (line, header) = it.next().ok_or(FormatError::MalformedHeader {
        line: magic_line + 1,
        detail: "missing `n <integer>` line".into(),
    })?;
    let mut parts = header.split_whitespace();
    if parts.next() != Some("n") {
        return Err(FormatError::MalformedHeader {
            line,
            detail: format!("expected `n <integer>`, found {header:?}"),
        });
    }
    let n = header_value(line, parts.next(), "n")?;
    if parts.next().is_some() || n > matfree::boolfn::MAX_VARS {
        return Err(FormatError::MalformedHeader {
            line,
            detail: format!("expected `n <integer>` with n <= {}", matfree::boolfn::MAX_VARS),
        });
    }
    let mut hex = String::new();
    let mut last_line = line;
    for (l, r) in it {
        if let Some(c) = r.chars().find(|c| !c.is_ascii_hexdigit()) {
            return Err(FormatError::InvalidValue {
                line: l,
                detail: format!("non-hex character {c:?} in truth table"),
            });
        }
        hex.push_str(r);
        last_line = l;
    }
    let expected = 2 * (1usize << n).div_ceil(8);
    if hex.len() != expected {
        return Err(FormatError::LengthMismatch {
            line: last_line,
            expected,
            found: hex.len(),
        });
    }
    let bytes: Vec<u8> = (0..hex.len())
        .step_by(2)
        .map(|i| u8::from_str_radix(&hex[i..i + 2], 16).expect("validated hex"))
        .collect();
    BooleanFunction::from_bytes(n, &bytes).map_err(|e| FormatError::InvalidValue {
        line: last_line,
        detail: e.to_string(),
    })
}

pub fn serialize_function(f: &BooleanFunction) -> String {
    let hex: String = f.to_bytes().iter().map(|b| format!("{b:02x}")).collect();
    let mut out = format!("boolfn v1\nn {}\n", f.n());
    for chunk in hex.as_bytes().chunks(64) {
        out.push_str(std::str::from_utf8(chunk).expect("ascii"));
        out.push('\n');
    }
    out
}

pub fn parse_matroid(text: &str) -> Result<BinaryMatroid, FormatError> {
    let recs = records(text);
    let mut it = recs.iter().copied().peekable();
    let magic_line = expect_magic(&mut it, "matroid v1")?;
    let (line, header) = it.next().ok_or(FormatError::MalformedHeader {
        line: magic_line + 1,
        detail: "missing `m <integer> k <integer>` line".into(),
    })?;
    let parts: Vec<&str> = header.split_whitespace().collect();
    if parts.len() != 4 || parts[0] != "m" || parts[2] != "k" {
        return Err(FormatError::MalformedHeader {
            line,
            detail: format!("expected `m <integer> k <integer>`, found {header:?}"),
        });
    }
    let m = header_value(line, Some(parts[1]), "m")?;
    let k = header_value(line, Some(parts[3]), "k")?;
    if !(1..=64).contains(&m) || !(1..=64).contains(&k) {
        return Err(FormatError::MalformedHeader {
            line,
            detail: "m and k must lie in 1..=64".into(),
        });
    }
    let mut label = None;
    if let Some(&(_, r)) = it.peek() {
        if let Some(rest) = r.strip_prefix("label ") {
            label = Some(rest.trim().to_string());
            it.next();
        }
    }
    let mut vectors = Vec::with_capacity(k);
    let mut last_line = line;
    for (l, r) in it {
        if r.len() != m {
            return Err(FormatError::LengthMismatch {
                line: l,
                expected: m,
                found: r.len(),
            });
        }
        let v = GfVec::parse(r).map_err(|e| FormatError::InvalidValue {
            line: l,
            detail: e.to_string(),
        })?;
        vectors.push(v);
        last_line = l;
    }
    if vectors.len() != k {
        return Err(FormatError::LengthMismatch {
            line: last_line,
            expected: k,
            found: vectors.len(),
        });
    }
    BinaryMatroid::new(m, vectors, label).map_err(|e| FormatError::InvalidValue {
        line: last_line,
        detail: e.to_string(),
    })
}

pub fn serialize_matroid(m: &BinaryMatroid) -> String {
    let mut out = format!("matroid v1\nm {} k {}\n", m.m(), m.k());
    if let Some(label) = m.label() {
        out.push_str(&format!("label {label}\n"));
    }
    for v in m.vectors() {
        out.push_str(&format!("{v}\n"));
    }
    out
}

pub fn parse_graph(text: &str) -> Result<Graph, FormatError> {
    let recs = records(text);
    let mut it = recs.iter().copied();
    let magic_line = expect_magic(&mut it, "graph v1")?;
    let (line, header) = it.next().ok_or(FormatError::MalformedHeader {
        line: magic_line + 1,
        detail: "missing `V=<integer>` line".into(),
    })?;
    let v = header
        .strip_prefix("V=")
        .and_then(|s| s.trim().parse::<usize>().ok())
        .ok_or_else(|| FormatError::MalformedHeader {
            line,
            detail: format!("expected `V=<integer>`, found {header:?}"),
        })?;
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for (l, r) in it {
        let parts: Vec<&str> = r.split_whitespace().collect();
        let parsed = match parts.as_slice() {
            ["e", a, b] => a.parse::<usize>().ok().zip(b.parse::<usize>().ok()),
            _ => None,
        };
        let (a, b) = parsed.ok_or_else(|| FormatError::InvalidValue {
            line: l,
            detail: format!("expected `e <vertex> <vertex>`, found {r:?}"),
        })?;
        if a >= v || b >= v {
            return Err(FormatError::InvalidValue {
                line: l,
                detail: format!("vertex out of range 0..{v} in edge {a} {b}"),
            });
        }
        if a == b {
            return Err(FormatError::NonSimpleGraph {
                line: l,
                detail: format!("self-loop at vertex {a}"),
            });
        }
        let e = (a.min(b), a.max(b));
        if edges.contains(&e) {
            return Err(FormatError::NonSimpleGraph {
                line: l,
                detail: format!("repeated edge {} {}", e.0, e.1),
            });
        }
        edges.push(e);
    }
    Graph::new(v, edges).map_err(|e| FormatError::InvalidValue {
        line,
        detail: e.to_string(),
    })
}

pub fn serialize_graph(g: &Graph) -> String {
    let mut out = format!("graph v1\nV={}\n", g.vertices());
    for &(a, b) in g.edges() {
        out.push_str(&format!("e {a} {b}\n"));
    }
    out
}
