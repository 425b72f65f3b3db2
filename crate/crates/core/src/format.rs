//! Plain-text file formats.
//!
//! Algebra files:
//!
//! ```text
//! p 2
//! d 2
//! # a^2 = b
//! sc 1 1 2 1
//! ```
//!
//! Each `sc i j k c` line says that `e_k` has coefficient `c` in `e_i e_j`
//! (1-based). A coefficient listed for `(i, j)` but not `(j, i)` holds for
//! both; otherwise omitted coefficients are zero. [`emit_algebra`] writes only
//! `i <= j` and nonzero `c`, sorted, so parse-then-emit is the identity on its
//! own output.
//!
//! Affine-element files hold a `p`/`d` header and then, for every element, a
//! line `elem`, `d` matrix rows and a line `shift b_1 ... b_d`.

use std::fmt::Write as _;

use crate::affine::AffineElement;
use crate::algebra::Algebra;
use crate::error::{Error, Result};
use crate::field::{Fp, Matrix, RowVector};

/// A structure-constant table as read from a file, before commutativity and
/// associativity are established.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraTable {
    p: Fp,
    d: usize,
    /// `full[(i * d + j) * d + k]`, 0-based.
    full: Vec<u32>,
}

impl AlgebraTable {
    pub fn modulus(&self) -> Fp {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    fn at(&self, i: usize, j: usize, k: usize) -> u32 {
        self.full[(i * self.d + j) * self.d + k]
    }

    /// First basis pair `(i, j)` (1-based) with `e_i e_j != e_j e_i`.
    pub fn commutativity_violation(&self) -> Option<(usize, usize)> {
        let d = self.d;
        (0..d)
            .flat_map(|i| (i + 1..d).map(move |j| (i, j)))
            .find(|&(i, j)| (0..d).any(|k| self.at(i, j, k) != self.at(j, i, k)))
            .map(|(i, j)| (i + 1, j + 1))
    }

    /// The commutative table, without an associativity check.
    pub fn to_algebra_unchecked(&self) -> Result<Algebra> {
        if let Some((i, j)) = self.commutativity_violation() {
            return Err(Error::NotCommutative { i, j });
        }
        let mut b = Algebra::builder(self.p, self.d)?;
        for i in 0..self.d {
            for j in i..self.d {
                for k in 0..self.d {
                    let c = self.at(i, j, k);
                    if c != 0 {
                        b = b.coefficient(i, j, k, c as i64);
                    }
                }
            }
        }
        Ok(b.build_unchecked())
    }

    pub fn to_algebra(&self) -> Result<Algebra> {
        let a = self.to_algebra_unchecked()?;
        a.check_associative()?;
        Ok(a)
    }
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

/// Non-empty lines with comments stripped, paired with 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(n, l)| {
        let l = l.split('#').next().unwrap_or("");
        let toks: Vec<&str> = l.split_whitespace().collect();
        (!toks.is_empty()).then_some((n + 1, toks))
    })
}

fn parse_int<T: std::str::FromStr>(line: usize, tok: &str) -> Result<T> {
    tok.parse()
        .map_err(|_| parse_err(line, format!("expected an integer, found `{tok}`")))
}

struct Header {
    p: Fp,
    d: usize,
}

fn parse_header<'a, I>(lines: &mut std::iter::Peekable<I>) -> Result<Header>
where
    I: Iterator<Item = (usize, Vec<&'a str>)>,
{
    let mut p = None;
    let mut d = None;
    while p.is_none() || d.is_none() {
        let Some((n, toks)) = lines.next() else {
            return Err(parse_err(0, "missing `p` or `d` header"));
        };
        match toks.as_slice() {
            ["p", v] if p.is_none() => {
                let v: u64 = parse_int(n, v)?;
                p = Some(Fp::new(v).map_err(|e| parse_err(n, e.to_string()))?);
            }
            ["d", v] if d.is_none() => {
                let v: usize = parse_int(n, v)?;
                if v == 0 {
                    return Err(parse_err(n, "dimension must be positive"));
                }
                d = Some(v);
            }
            _ => return Err(parse_err(n, "expected `p <prime>` and `d <dim>` header")),
        }
    }
    Ok(Header {
        p: p.unwrap(),
        d: d.unwrap(),
    })
}

pub fn parse_algebra_table(text: &str) -> Result<AlgebraTable> {
    let mut lines = content_lines(text).peekable();
    let Header { p, d } = parse_header(&mut lines)?;
    let mut full = vec![0u32; d * d * d];
    let mut seen = vec![false; d * d * d];
    for (n, toks) in lines {
        let ["sc", i, j, k, c] = toks.as_slice() else {
            return Err(parse_err(n, "expected `sc <i> <j> <k> <value>`"));
        };
        let idx: [usize; 3] = [parse_int(n, i)?, parse_int(n, j)?, parse_int(n, k)?];
        if idx.iter().any(|&x| x == 0 || x > d) {
            return Err(parse_err(n, format!("index out of range 1..={d}")));
        }
        let c: i64 = parse_int(n, c)?;
        let pos = ((idx[0] - 1) * d + idx[1] - 1) * d + idx[2] - 1;
        if std::mem::replace(&mut seen[pos], true) {
            return Err(parse_err(n, "duplicate coefficient"));
        }
        full[pos] = p.reduce_signed(c);
    }
    // A coefficient given in only one orientation stands for both.
    for i in 0..d {
        for j in 0..d {
            for k in 0..d {
                let (here, there) = ((i * d + j) * d + k, (j * d + i) * d + k);
                if seen[here] && !seen[there] {
                    full[there] = full[here];
                }
            }
        }
    }
    Ok(AlgebraTable { p, d, full })
}

/// Parses and validates an algebra file.
pub fn parse_algebra(text: &str) -> Result<Algebra> {
    parse_algebra_table(text)?.to_algebra()
}

pub fn emit_algebra(a: &Algebra) -> String {
    let d = a.dim();
    let mut s = format!("p {}\nd {}\n", a.modulus(), d);
    for i in 0..d {
        for j in i..d {
            for k in 0..d {
                let c = a.coefficient(i, j, k);
                if c != 0 {
                    writeln!(s, "sc {} {} {} {}", i + 1, j + 1, k + 1, c).unwrap();
                }
            }
        }
    }
    s
}

/// An affine-element file: the header and the listed elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineFile {
    pub p: Fp,
    pub d: usize,
    pub elements: Vec<AffineElement>,
}

/// Parses an affine-element file. A singular linear part is reported with the
/// 1-based position of its element.
pub fn parse_affine(text: &str) -> Result<AffineFile> {
    let mut lines = content_lines(text).peekable();
    let Header { p, d } = parse_header(&mut lines)?;
    let row = |n: usize, toks: &[&str]| -> Result<Vec<i64>> {
        if toks.len() != d {
            return Err(parse_err(n, format!("expected {d} entries")));
        }
        toks.iter().map(|t| parse_int(n, t)).collect()
    };
    let mut elements = Vec::new();
    while let Some((n, toks)) = lines.next() {
        if toks != ["elem"] {
            return Err(parse_err(n, "expected `elem`"));
        }
        let mut rows = Vec::with_capacity(d);
        for _ in 0..d {
            let (n, toks) = lines
                .next()
                .ok_or_else(|| parse_err(n, "truncated element"))?;
            rows.push(row(n, &toks)?);
        }
        let (n, toks) = lines
            .next()
            .ok_or_else(|| parse_err(n, "missing `shift` row"))?;
        if toks.first() != Some(&"shift") {
            return Err(parse_err(n, "expected `shift`"));
        }
        let shift = RowVector::from_entries(p, row(n, &toks[1..])?);
        let linear = Matrix::from_rows(p, &rows)?;
        let index = elements.len() + 1;
        let g = AffineElement::new(linear, shift).map_err(|e| match e {
            Error::Singular => Error::SingularElement { index },
            other => other,
        })?;
        elements.push(g);
    }
    Ok(AffineFile { p, d, elements })
}

pub fn emit_affine<'a, I>(p: Fp, d: usize, elements: I) -> String
where
    I: IntoIterator<Item = &'a AffineElement>,
{
    let join = |v: &[u32]| {
        v.iter()
            .map(u32::to_string)
            .collect::<Vec<_>>()
            .join(" ")
    };
    let mut s = format!("p {p}\nd {d}\n");
    for g in elements {
        s.push_str("elem\n");
        for i in 0..d {
            writeln!(s, "{}", join(g.linear().row(i))).unwrap();
        }
        writeln!(s, "shift {}", join(g.shift().entries())).unwrap();
    }
    s
}
