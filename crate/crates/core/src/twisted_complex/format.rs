//! Line-oriented text format for twisted complexes.
//!
//! ```text
//! # circle twisted by g ↦ −1
//! cells 1 1
//! generators g
//! coboundary 0          # terms: row col coeff word
//! 0 0 1 g
//! 0 0 -1 1
//! end
//! rep 1
//! image g               # rank lines of re im pairs
//! -1e0 0e0
//! end
//! relator g.g^-1        # optional
//! gram 0                # optional, default identity
//! ...
//! end
//! star 0                # optional dual pairing, one block per degree
//! ...
//! end
//! ```
//!
//! Floats are written with the shortest round-trip representation, so
//! `write(read(write(x))) == write(x)` and every matrix entry survives bit for bit.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use super::{build_twisted_complex, CellComplex, ComplexError, DualPairing, IncidenceTerm, TwistedComplex, UnitaryRep, Word};
use crate::linalg::{c, CMat};

fn parse_err(line: usize, message: impl Into<String>) -> ComplexError {
    ComplexError::Parse { line, message: message.into() }
}

struct Lines<'a> {
    inner: Vec<(usize, Vec<&'a str>)>,
    pos: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        let inner = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").split_whitespace().collect::<Vec<_>>()))
            .filter(|(_, t)| !t.is_empty())
            .collect();
        Lines { inner, pos: 0 }
    }

    fn next(&mut self) -> Option<(usize, Vec<&'a str>)> {
        let item = self.inner.get(self.pos).cloned();
        self.pos += 1;
        item
    }

    fn last_line(&self) -> usize {
        self.inner.last().map_or(0, |(l, _)| *l)
    }
}

fn parse_usize(line: usize, s: &str) -> Result<usize, ComplexError> {
    s.parse().map_err(|_| parse_err(line, format!("expected a non-negative integer, found `{s}`")))
}

fn read_matrix(lines: &mut Lines, rows: usize, cols: usize) -> Result<CMat, ComplexError> {
    let mut m = CMat::zeros(rows, cols);
    for i in 0..rows {
        let (ln, toks) = lines.next().ok_or_else(|| parse_err(lines.last_line(), "matrix ended early"))?;
        if toks.len() != 2 * cols {
            return Err(parse_err(ln, format!("expected {} numbers, found {}", 2 * cols, toks.len())));
        }
        for j in 0..cols {
            let re: f64 = toks[2 * j].parse().map_err(|_| parse_err(ln, format!("bad number `{}`", toks[2 * j])))?;
            let im: f64 =
                toks[2 * j + 1].parse().map_err(|_| parse_err(ln, format!("bad number `{}`", toks[2 * j + 1])))?;
            m[(i, j)] = c(re, im);
        }
    }
    expect_end(lines)?;
    Ok(m)
}

fn expect_end(lines: &mut Lines) -> Result<(), ComplexError> {
    match lines.next() {
        Some((_, t)) if t == ["end"] => Ok(()),
        Some((ln, _)) => Err(parse_err(ln, "expected `end`")),
        None => Err(parse_err(lines.last_line(), "missing `end`")),
    }
}

/// Parses a complex; the representation is validated and the complex assembled.
pub fn read_complex(text: &str) -> Result<TwistedComplex, ComplexError> {
    let mut lines = Lines::new(text);
    let mut cells: Option<Vec<usize>> = None;
    let mut generators: Option<Vec<String>> = None;
    let mut coboundary: BTreeMap<usize, Vec<IncidenceTerm>> = BTreeMap::new();
    let mut rank: Option<usize> = None;
    let mut images = BTreeMap::new();
    let mut relators = Vec::new();
    let mut grams: BTreeMap<usize, CMat> = BTreeMap::new();
    let mut stars: BTreeMap<usize, CMat> = BTreeMap::new();

    let dims_needed = |cells: &Option<Vec<usize>>, rank: &Option<usize>, ln: usize| -> Result<Vec<usize>, ComplexError> {
        match (cells, rank) {
            (Some(cl), Some(r)) => Ok(cl.iter().map(|n| n * r).collect()),
            _ => Err(parse_err(ln, "`cells` and `rep` must precede this block")),
        }
    };

    while let Some((ln, toks)) = lines.next() {
        match toks[0] {
            "cells" => cells = Some(toks[1..].iter().map(|s| parse_usize(ln, s)).collect::<Result<_, _>>()?),
            "generators" => generators = Some(toks[1..].iter().map(|s| s.to_string()).collect()),
            "coboundary" => {
                let k = parse_usize(ln, toks.get(1).ok_or_else(|| parse_err(ln, "missing degree"))?)?;
                let mut terms = Vec::new();
                loop {
                    let (ln2, t) = lines.next().ok_or_else(|| parse_err(ln, "missing `end`"))?;
                    if t == ["end"] {
                        break;
                    }
                    if t.len() != 4 {
                        return Err(parse_err(ln2, "term needs `row col coeff word`"));
                    }
                    let coeff: i64 = t[2].parse().map_err(|_| parse_err(ln2, format!("bad coefficient `{}`", t[2])))?;
                    let word = Word::parse(t[3]).map_err(|m| parse_err(ln2, m))?;
                    terms.push(IncidenceTerm::new(parse_usize(ln2, t[0])?, parse_usize(ln2, t[1])?, coeff, word));
                }
                if coboundary.insert(k, terms).is_some() {
                    return Err(parse_err(ln, format!("duplicate coboundary {k}")));
                }
            }
            "rep" => {
                let r = parse_usize(ln, toks.get(1).ok_or_else(|| parse_err(ln, "missing rank"))?)?;
                rank = Some(r);
                loop {
                    let (ln2, t) = lines.next().ok_or_else(|| parse_err(ln, "missing `end`"))?;
                    if t == ["end"] {
                        break;
                    }
                    if t.len() != 2 || t[0] != "image" {
                        return Err(parse_err(ln2, "expected `image <generator>`"));
                    }
                    let mut rows = Vec::new();
                    for _ in 0..r {
                        let (ln3, row) = lines.next().ok_or_else(|| parse_err(ln2, "image ended early"))?;
                        rows.push((ln3, row));
                    }
                    let mut m = CMat::zeros(r, r);
                    for (i, (ln3, row)) in rows.iter().enumerate() {
                        if row.len() != 2 * r {
                            return Err(parse_err(*ln3, format!("expected {} numbers", 2 * r)));
                        }
                        for j in 0..r {
                            let re: f64 = row[2 * j].parse().map_err(|_| parse_err(*ln3, "bad number"))?;
                            let im: f64 = row[2 * j + 1].parse().map_err(|_| parse_err(*ln3, "bad number"))?;
                            m[(i, j)] = c(re, im);
                        }
                    }
                    images.insert(t[1].to_string(), m);
                }
            }
            "relator" => {
                let w = toks.get(1).ok_or_else(|| parse_err(ln, "missing word"))?;
                relators.push(Word::parse(w).map_err(|m| parse_err(ln, m))?);
            }
            "gram" => {
                let k = parse_usize(ln, toks.get(1).ok_or_else(|| parse_err(ln, "missing degree"))?)?;
                let dims = dims_needed(&cells, &rank, ln)?;
                let n = *dims.get(k).ok_or_else(|| parse_err(ln, format!("no degree {k}")))?;
                grams.insert(k, read_matrix(&mut lines, n, n)?);
            }
            "star" => {
                let k = parse_usize(ln, toks.get(1).ok_or_else(|| parse_err(ln, "missing degree"))?)?;
                let dims = dims_needed(&cells, &rank, ln)?;
                let top = dims.len() - 1;
                if k > top {
                    return Err(parse_err(ln, format!("no degree {k}")));
                }
                stars.insert(k, read_matrix(&mut lines, dims[top - k], dims[k])?);
            }
            other => return Err(parse_err(ln, format!("unknown keyword `{other}`"))),
        }
    }

    let end = lines.last_line();
    let cells = cells.ok_or_else(|| parse_err(end, "missing `cells`"))?;
    let generators = generators.unwrap_or_default();
    let rank = rank.ok_or_else(|| parse_err(end, "missing `rep`"))?;
    let n = cells.len();
    let mut coboundary_map = coboundary;
    let coboundary: Vec<Vec<IncidenceTerm>> = (0..n.saturating_sub(1))
        .map(|k| coboundary_map.remove(&k).unwrap_or_default())
        .collect();
    if let Some(k) = coboundary_map.keys().next() {
        return Err(parse_err(end, format!("coboundary {k} out of range")));
    }
    let cc = CellComplex::new(cells, coboundary, generators)?;
    let rep = UnitaryRep::new(rank, images, relators)?;
    let mut tc = build_twisted_complex(&cc, &rep)?;
    if !grams.is_empty() {
        let dims = tc.dims();
        let all = (0..dims.len())
            .map(|k| grams.remove(&k).unwrap_or_else(|| CMat::identity(dims[k], dims[k])))
            .collect();
        tc = tc.with_gram(all)?;
    }
    if !stars.is_empty() {
        let top = tc.top_degree();
        if stars.len() != top + 1 {
            return Err(parse_err(end, "a dual pairing needs a star block for every degree"));
        }
        tc = tc.with_dual(DualPairing { stars: stars.into_values().collect() })?;
    }
    Ok(tc)
}

fn write_matrix(out: &mut String, m: &CMat) {
    for i in 0..m.nrows() {
        let row: Vec<String> = (0..m.ncols()).map(|j| format!("{:e} {:e}", m[(i, j)].re, m[(i, j)].im)).collect();
        let _ = writeln!(out, "{}", row.join(" "));
    }
}

/// Canonical text of a complex built from cells; fails for complexes without a cell description.
pub fn write_complex(tc: &TwistedComplex) -> Result<String, ComplexError> {
    let (cc, rep) = tc
        .source()
        .ok_or_else(|| ComplexError::InvalidInput("complex has no cell description to write".into()))?;
    let mut out = String::new();
    let counts: Vec<String> = cc.cell_counts.iter().map(|n| n.to_string()).collect();
    let _ = writeln!(out, "cells {}", counts.join(" "));
    let _ = writeln!(out, "generators {}", cc.generators.join(" ").trim_end());
    for (k, terms) in cc.coboundary.iter().enumerate() {
        let _ = writeln!(out, "coboundary {k}");
        for t in terms {
            let _ = writeln!(out, "{} {} {} {}", t.row, t.col, t.coeff, t.word);
        }
        let _ = writeln!(out, "end");
    }
    let _ = writeln!(out, "rep {}", rep.rank);
    for (g, m) in &rep.images {
        let _ = writeln!(out, "image {g}");
        write_matrix(&mut out, m);
    }
    let _ = writeln!(out, "end");
    for w in &rep.relators {
        let _ = writeln!(out, "relator {w}");
    }
    for (k, g) in tc.grams().iter().enumerate() {
        if *g != CMat::identity(g.nrows(), g.ncols()) {
            let _ = writeln!(out, "gram {k}");
            write_matrix(&mut out, g);
            let _ = writeln!(out, "end");
        }
    }
    if let Some(dual) = tc.dual() {
        for (k, s) in dual.stars.iter().enumerate() {
            let _ = writeln!(out, "star {k}");
            write_matrix(&mut out, s);
            let _ = writeln!(out, "end");
        }
    }
    Ok(out)
}

pub fn load_complex(path: &Path) -> Result<TwistedComplex, ComplexError> {
    let text = std::fs::read_to_string(path).map_err(|e| ComplexError::Io(format!("{}: {e}", path.display())))?;
    read_complex(&text)
}

pub fn save_complex(tc: &TwistedComplex, path: &Path) -> Result<(), ComplexError> {
    std::fs::write(path, write_complex(tc)?).map_err(|e| ComplexError::Io(format!("{}: {e}", path.display())))
}
