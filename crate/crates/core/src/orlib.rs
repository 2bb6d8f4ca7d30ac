//! OR-Library `scp` text files and upper-bound sidecar tables.
//!
//! The instance layout is a flat stream of whitespace-separated numbers:
//! `m n`, then `n` column costs, then for every row a count `k` followed by
//! `k` 1-based column indices. Line breaks carry no meaning.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::instance::ScpInstance;

struct Tokens<'a> {
    inner: std::str::SplitAsciiWhitespace<'a>,
}

impl<'a> Tokens<'a> {
    fn new(text: &'a str) -> Self {
        Tokens {
            inner: text.split_ascii_whitespace(),
        }
    }

    fn next_raw(&mut self, what: &'static str) -> Result<&'a str> {
        self.inner.next().ok_or(Error::Truncated { what })
    }

    fn next_usize(&mut self, what: &'static str) -> Result<usize> {
        let tok = self.next_raw(what)?;
        tok.parse().map_err(|_| Error::InvalidToken {
            token: tok.to_string(),
            what,
        })
    }

    /// Costs are read as integers when they look like integers and as
    /// decimals otherwise.
    fn next_cost(&mut self) -> Result<f64> {
        let tok = self.next_raw("column cost")?;
        if let Ok(v) = tok.parse::<i64>() {
            return Ok(v as f64);
        }
        tok.parse::<f64>().map_err(|_| Error::InvalidToken {
            token: tok.to_string(),
            what: "column cost",
        })
    }
}

pub fn parse_orlib(text: &str) -> Result<ScpInstance> {
    let mut toks = Tokens::new(text);
    let m = toks.next_usize("row count")?;
    let n = toks.next_usize("column count")?;
    let costs = (0..n).map(|_| toks.next_cost()).collect::<Result<Vec<_>>>()?;
    let mut rows = Vec::with_capacity(m);
    for _ in 0..m {
        let k = toks.next_usize("row length")?;
        let mut row = Vec::with_capacity(k);
        for _ in 0..k {
            let j = toks.next_usize("column index")?;
            if j == 0 || j > n {
                return Err(Error::IndexOutOfRange { index: j, limit: n });
            }
            row.push(j - 1);
        }
        rows.push(row);
    }
    if let Some(tok) = toks.inner.next() {
        return Err(Error::TrailingGarbage {
            token: tok.to_string(),
        });
    }
    ScpInstance::new(costs, rows)
}

pub fn read_orlib(path: impl AsRef<Path>) -> Result<ScpInstance> {
    parse_orlib(&std::fs::read_to_string(path)?)
}

const PER_LINE: usize = 12;

fn push_wrapped<I: IntoIterator<Item = String>>(out: &mut String, items: I) {
    for (k, item) in items.into_iter().enumerate() {
        if k > 0 {
            out.push(if k % PER_LINE == 0 { '\n' } else { ' ' });
        }
        out.push_str(&item);
    }
    out.push('\n');
}

fn format_cost(c: f64, integral: bool) -> String {
    if integral {
        format!("{}", c as i64)
    } else {
        // shortest representation that parses back to the same f64
        format!("{c}")
    }
}

/// Serializes an instance in OR-Library layout, twelve numbers per line.
pub fn write_orlib(inst: &ScpInstance) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{} {}", inst.n_rows(), inst.n_cols());
    let integral = inst.has_integral_costs();
    if inst.n_cols() > 0 {
        push_wrapped(&mut out, inst.costs().iter().map(|&c| format_cost(c, integral)));
    }
    for row in inst.rows() {
        let _ = writeln!(out, "{}", row.len());
        push_wrapped(&mut out, row.iter().map(|j| (j + 1).to_string()));
    }
    out
}

/// Upper bounds keyed by instance name, read from a sidecar file.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct UbTable {
    entries: BTreeMap<String, f64>,
}

impl UbTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.entries.get(name).copied()
    }

    pub fn insert(&mut self, name: impl Into<String>, ub: f64) -> Result<()> {
        let name = name.into();
        if !(ub > 0.0) {
            return Err(Error::NonPositiveUb { name, value: ub });
        }
        if self.entries.contains_key(&name) {
            return Err(Error::DuplicateName(name));
        }
        self.entries.insert(name, ub);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.entries.iter().map(|(k, &v)| (k.as_str(), v))
    }
}

/// Parses `name value` lines. Blank lines and `#` comments are skipped.
pub fn parse_ub_table(text: &str) -> Result<UbTable> {
    let mut table = UbTable::new();
    for (lineno, line) in text.lines().enumerate() {
        let content = line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let malformed = || Error::MalformedLine {
            line: lineno + 1,
            text: line.to_string(),
        };
        let mut parts = content.split_whitespace();
        let (Some(name), Some(value), None) = (parts.next(), parts.next(), parts.next()) else {
            return Err(malformed());
        };
        let value: f64 = value.parse().map_err(|_| malformed())?;
        table.insert(name, value)?;
    }
    Ok(table)
}

pub fn read_ub_table(path: impl AsRef<Path>) -> Result<UbTable> {
    parse_ub_table(&std::fs::read_to_string(path)?)
}
