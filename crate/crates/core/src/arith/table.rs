//! Coefficient tables and their tab-separated text format.
//!
//! ```text
//! #kind=tau N=3
//! 1	1
//! 2	-24
//! 3	252
//! ```
//! Pair-indexed tables use `m<TAB>n<TAB>value` records.

use crate::error::{Error, Result};
use std::io::{BufRead, Write};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TableKind {
    DivisorD,
    SumsOfSquaresR2,
    RamanujanTau,
    NormalizedGl2,
    SymSquareA,
    SymSquareAbelian,
}

impl TableKind {
    pub const ALL: [TableKind; 6] = [
        TableKind::DivisorD,
        TableKind::SumsOfSquaresR2,
        TableKind::RamanujanTau,
        TableKind::NormalizedGl2,
        TableKind::SymSquareA,
        TableKind::SymSquareAbelian,
    ];

    /// Name used in file headers, cache file names and on the command line.
    pub fn name(self) -> &'static str {
        match self {
            TableKind::DivisorD => "d",
            TableKind::SumsOfSquaresR2 => "r2",
            TableKind::RamanujanTau => "tau",
            TableKind::NormalizedGl2 => "gl2",
            TableKind::SymSquareA => "sym2",
            TableKind::SymSquareAbelian => "sym2-abelian",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name() == name)
    }

    pub fn is_integer(self) -> bool {
        matches!(self, TableKind::DivisorD | TableKind::SumsOfSquaresR2 | TableKind::RamanujanTau)
    }

    pub fn is_pair(self) -> bool {
        self == TableKind::SymSquareAbelian
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum TableValues {
    /// Exact integers, index n at position n - 1.
    Integer(Vec<i128>),
    /// Reals, index n at position n - 1.
    Real(Vec<f64>),
    /// Row-major N×N reals, (m, n) at position (m-1)·N + (n-1).
    Pair(Vec<f64>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct CoefficientTable {
    kind: TableKind,
    max_index: usize,
    values: TableValues,
}

impl CoefficientTable {
    pub fn new(kind: TableKind, values: TableValues) -> Result<Self> {
        let (max_index, ok) = match (&values, kind.is_integer(), kind.is_pair()) {
            (TableValues::Integer(v), true, false) => (v.len(), true),
            (TableValues::Real(v), false, false) => (v.len(), true),
            (TableValues::Pair(v), false, true) => {
                let n = (v.len() as f64).sqrt().round() as usize;
                (n, n * n == v.len())
            }
            _ => (0, false),
        };
        if !ok {
            return Err(Error::Table(format!("value layout does not fit kind {}", kind.name())));
        }
        if max_index == 0 {
            return Err(Error::Table("empty coefficient table".into()));
        }
        Ok(CoefficientTable { kind, max_index, values })
    }

    pub fn from_integers(kind: TableKind, v: Vec<i128>) -> Result<Self> {
        Self::new(kind, TableValues::Integer(v))
    }

    pub fn from_reals(kind: TableKind, v: Vec<f64>) -> Result<Self> {
        Self::new(kind, TableValues::Real(v))
    }

    pub fn kind(&self) -> TableKind {
        self.kind
    }

    pub fn max_index(&self) -> usize {
        self.max_index
    }

    pub fn values(&self) -> &TableValues {
        &self.values
    }

    /// Value at index n (1-based) as a real number.
    pub fn get(&self, n: usize) -> Option<f64> {
        if n == 0 || n > self.max_index {
            return None;
        }
        match &self.values {
            TableValues::Integer(v) => Some(v[n - 1] as f64),
            TableValues::Real(v) => Some(v[n - 1]),
            TableValues::Pair(_) => None,
        }
    }

    /// Exact value for integer kinds.
    pub fn int(&self, n: usize) -> Option<i128> {
        match &self.values {
            TableValues::Integer(v) if n >= 1 && n <= v.len() => Some(v[n - 1]),
            _ => None,
        }
    }

    /// Value at (m, n) for pair-indexed kinds.
    pub fn pair(&self, m: usize, n: usize) -> Option<f64> {
        match &self.values {
            TableValues::Pair(v) if (1..=self.max_index).contains(&m) && (1..=self.max_index).contains(&n) => {
                Some(v[(m - 1) * self.max_index + (n - 1)])
            }
            _ => None,
        }
    }

    /// Checked accessor with a descriptive error.
    pub fn at(&self, n: usize) -> Result<f64> {
        self.get(n).ok_or_else(|| {
            Error::Table(format!(
                "index {n} outside {} table with N = {}",
                self.kind.name(),
                self.max_index
            ))
        })
    }

    pub fn require_kind(&self, kind: TableKind) -> Result<()> {
        if self.kind != kind {
            return Err(Error::Table(format!(
                "expected a {} table, got {}",
                kind.name(),
                self.kind.name()
            )));
        }
        Ok(())
    }

    /// Leading part of the table up to index n.
    pub fn truncated(&self, n: usize) -> Result<Self> {
        if n == 0 || n > self.max_index {
            return Err(Error::Table(format!("cannot truncate N = {} table to {n}", self.max_index)));
        }
        let values = match &self.values {
            TableValues::Integer(v) => TableValues::Integer(v[..n].to_vec()),
            TableValues::Real(v) => TableValues::Real(v[..n].to_vec()),
            TableValues::Pair(v) => {
                let m = self.max_index;
                TableValues::Pair((0..n).flat_map(|r| v[r * m..r * m + n].iter().copied()).collect())
            }
        };
        Self::new(self.kind, values)
    }

    pub fn header(&self) -> String {
        format!("#kind={} N={}", self.kind.name(), self.max_index)
    }

    /// Writes the full table.
    pub fn write_to(&self, w: &mut impl Write) -> Result<()> {
        self.write_range(w, 1, self.max_index)
    }

    /// Writes a header and the records with index in [lo, hi]. For pair
    /// tables both indices range over [lo, hi].
    pub fn write_range(&self, w: &mut impl Write, lo: usize, hi: usize) -> Result<()> {
        if lo == 0 || hi > self.max_index || lo > hi {
            return Err(Error::Table(format!(
                "range {lo}:{hi} outside 1:{} of the {} table",
                self.max_index,
                self.kind.name()
            )));
        }
        writeln!(w, "#kind={} N={}", self.kind.name(), hi)?;
        match &self.values {
            TableValues::Integer(v) => {
                for n in lo..=hi {
                    writeln!(w, "{n}\t{}", v[n - 1])?;
                }
            }
            TableValues::Real(v) => {
                for n in lo..=hi {
                    writeln!(w, "{n}\t{:?}", v[n - 1])?;
                }
            }
            TableValues::Pair(_) => {
                for m in lo..=hi {
                    for n in lo..=hi {
                        writeln!(w, "{m}\t{n}\t{:?}", self.pair(m, n).expect("in range"))?;
                    }
                }
            }
        }
        Ok(())
    }

    /// Parses the text format. Every index in 1..=N must appear exactly once.
    pub fn read_from(r: impl BufRead) -> Result<Self> {
        let mut lines = r.lines().enumerate();
        let (kind, n) = loop {
            let Some((i, line)) = lines.next() else {
                return Err(Error::Parse { line: 1, msg: "missing header".into() });
            };
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            break parse_header(&line).map_err(|msg| Error::Parse { line: i + 1, msg })?;
        };
        let mut seen = vec![false; if kind.is_pair() { n * n } else { n }];
        let mut ints = vec![0i128; if kind.is_integer() { n } else { 0 }];
        let mut reals = vec![0f64; if kind.is_integer() { 0 } else { seen.len() }];
        for (i, line) in lines {
            let line = line?;
            let line_no = i + 1;
            let text = line.trim();
            if text.is_empty() || text.starts_with('#') {
                continue;
            }
            let err = |msg: String| Error::Parse { line: line_no, msg };
            let fields: Vec<&str> = text.split('\t').collect();
            let expected = if kind.is_pair() { 3 } else { 2 };
            if fields.len() != expected {
                return Err(err(format!("expected {expected} tab-separated fields, found {}", fields.len())));
            }
            let parse_index = |s: &str| -> Result<usize> {
                let v: usize = s.parse().map_err(|_| err(format!("invalid index '{s}'")))?;
                if v == 0 || v > n {
                    return Err(err(format!("index {v} outside 1..={n}")));
                }
                Ok(v)
            };
            let slot = if kind.is_pair() {
                (parse_index(fields[0])? - 1) * n + parse_index(fields[1])? - 1
            } else {
                parse_index(fields[0])? - 1
            };
            if seen[slot] {
                return Err(err("duplicate index".into()));
            }
            seen[slot] = true;
            let value = fields[expected - 1];
            if kind.is_integer() {
                ints[slot] = value.parse().map_err(|_| err(format!("invalid integer '{value}'")))?;
            } else {
                let v: f64 = value.parse().map_err(|_| err(format!("invalid number '{value}'")))?;
                if !v.is_finite() {
                    return Err(err(format!("non-finite value '{value}'")));
                }
                reals[slot] = v;
            }
        }
        if let Some(missing) = seen.iter().position(|s| !s) {
            return Err(Error::Parse {
                line: 0,
                msg: format!("table declares N={n} but record {} is missing", missing + 1),
            });
        }
        let values = if kind.is_integer() {
            TableValues::Integer(ints)
        } else if kind.is_pair() {
            TableValues::Pair(reals)
        } else {
            TableValues::Real(reals)
        };
        Self::new(kind, values)
    }
}

fn parse_header(line: &str) -> std::result::Result<(TableKind, usize), String> {
    let rest = line
        .trim()
        .strip_prefix('#')
        .ok_or_else(|| format!("expected header '#kind=<kind> N=<max_index>', found '{line}'"))?;
    let mut kind = None;
    let mut n = None;
    for field in rest.split_whitespace() {
        if let Some(v) = field.strip_prefix("kind=") {
            kind = Some(TableKind::from_name(v).ok_or_else(|| format!("unknown table kind '{v}'"))?);
        } else if let Some(v) = field.strip_prefix("N=") {
            n = Some(v.parse::<usize>().map_err(|_| format!("invalid N '{v}'"))?);
        } else {
            return Err(format!("unexpected header field '{field}'"));
        }
    }
    match (kind, n) {
        (Some(k), Some(n)) if n > 0 => Ok((k, n)),
        _ => Err("header must contain kind=<kind> and N=<positive integer>".into()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integer_round_trip() {
        let t = CoefficientTable::from_integers(TableKind::RamanujanTau, vec![1, -24, 252]).unwrap();
        let mut buf = Vec::new();
        t.write_to(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf.clone()).unwrap(), "#kind=tau N=3\n1\t1\n2\t-24\n3\t252\n");
        assert_eq!(CoefficientTable::read_from(&buf[..]).unwrap(), t);
    }

    #[test]
    fn real_and_pair_round_trip() {
        let t = CoefficientTable::from_reals(TableKind::NormalizedGl2, vec![1.0, -0.530_330_085_889_910_6, 0.1]).unwrap();
        let mut buf = Vec::new();
        t.write_to(&mut buf).unwrap();
        assert_eq!(CoefficientTable::read_from(&buf[..]).unwrap(), t);
        let p = CoefficientTable::new(TableKind::SymSquareAbelian, TableValues::Pair(vec![1.0, 2.0, 2.0, 3.5])).unwrap();
        assert_eq!(p.pair(2, 1), Some(2.0));
        let mut buf = Vec::new();
        p.write_to(&mut buf).unwrap();
        assert_eq!(CoefficientTable::read_from(&buf[..]).unwrap(), p);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let bad = "#kind=tau N=2\n1\t1\n2\tx\n";
        match CoefficientTable::read_from(bad.as_bytes()) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        assert!(CoefficientTable::read_from("#kind=tau N=2\n1\t1\n".as_bytes()).is_err());
        assert!(CoefficientTable::read_from("#kind=foo N=2\n".as_bytes()).is_err());
        assert!(CoefficientTable::read_from("1\t1\n".as_bytes()).is_err());
    }

    #[test]
    fn layout_and_kind_checks() {
        assert!(CoefficientTable::from_reals(TableKind::RamanujanTau, vec![1.0]).is_err());
        let t = CoefficientTable::from_integers(TableKind::DivisorD, vec![1, 2, 2]).unwrap();
        assert!(t.require_kind(TableKind::RamanujanTau).is_err());
        assert!(t.at(4).is_err());
        assert_eq!(t.truncated(2).unwrap().max_index(), 2);
    }
}
