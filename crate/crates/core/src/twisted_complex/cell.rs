use std::fmt;

use super::ComplexError;

/// A word in the generators: a product of `(name, exponent)` letters read left to right.
/// The empty word is the identity and is written `1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(pub Vec<(String, i32)>);

impl Word {
    pub fn identity() -> Self {
        Word(Vec::new())
    }

    pub fn generator(name: &str) -> Self {
        Word(vec![(name.to_string(), 1)])
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().all(|(_, e)| *e == 0)
    }

    pub fn letters(&self) -> impl Iterator<Item = &str> {
        self.0.iter().map(|(g, _)| g.as_str())
    }

    /// Parses `1`, `g`, `a.b^-1.a`, ...
    pub fn parse(s: &str) -> Result<Self, String> {
        if s == "1" {
            return Ok(Word::identity());
        }
        let mut letters = Vec::new();
        for part in s.split('.') {
            let (name, exp) = match part.split_once('^') {
                Some((n, e)) => (n, e.parse::<i32>().map_err(|_| format!("bad exponent in `{part}`"))?),
                None => (part, 1),
            };
            if name.is_empty() || !name.chars().all(|ch| ch.is_ascii_alphanumeric() || ch == '_') {
                return Err(format!("bad generator name `{name}`"));
            }
            if name == "1" {
                return Err("`1` is not a generator name".into());
            }
            letters.push((name.to_string(), exp));
        }
        Ok(Word(letters))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (i, (g, e)) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ".")?;
            }
            if *e == 1 {
                write!(f, "{g}")?;
            } else {
                write!(f, "{g}^{e}")?;
            }
        }
        Ok(())
    }
}

/// One entry `coeff · ρ(word)` of the block at `(row, col)` of a coboundary.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IncidenceTerm {
    pub row: usize,
    pub col: usize,
    pub coeff: i64,
    pub word: Word,
}

impl IncidenceTerm {
    pub fn new(row: usize, col: usize, coeff: i64, word: Word) -> Self {
        IncidenceTerm { row, col, coeff, word }
    }
}

/// Finite cochain-level cell complex. `coboundary[k]` lists the terms of
/// `d_k : C^k → C^{k+1}`; rows index `(k+1)`-cells and columns index `k`-cells.
/// Several terms may share a position when it carries several group words.
#[derive(Debug, Clone, PartialEq)]
pub struct CellComplex {
    pub cell_counts: Vec<usize>,
    pub coboundary: Vec<Vec<IncidenceTerm>>,
    pub generators: Vec<String>,
}

impl CellComplex {
    pub fn new(
        cell_counts: Vec<usize>,
        coboundary: Vec<Vec<IncidenceTerm>>,
        generators: Vec<String>,
    ) -> Result<Self, ComplexError> {
        if cell_counts.is_empty() {
            return Err(ComplexError::InvalidInput("complex has no degrees".into()));
        }
        if coboundary.len() + 1 != cell_counts.len() {
            return Err(ComplexError::InvalidInput(format!(
                "{} degrees need {} coboundary blocks, found {}",
                cell_counts.len(),
                cell_counts.len() - 1,
                coboundary.len()
            )));
        }
        for (k, terms) in coboundary.iter().enumerate() {
            for t in terms {
                if t.row >= cell_counts[k + 1] || t.col >= cell_counts[k] {
                    return Err(ComplexError::InvalidInput(format!(
                        "term ({}, {}) out of range in coboundary {k}",
                        t.row, t.col
                    )));
                }
                if let Some(g) = t.word.letters().find(|g| !generators.iter().any(|h| h == g)) {
                    return Err(ComplexError::MissingGenerator(g.to_string()));
                }
            }
        }
        let cc = CellComplex { cell_counts, coboundary, generators };
        for k in 0..cc.coboundary.len().saturating_sub(1) {
            let prod = mat_mul_int(&cc.incidence(k + 1), &cc.incidence(k));
            if prod.iter().flatten().any(|&x| x != 0) {
                return Err(ComplexError::NotAComplex { degree: k, residual: f64::INFINITY });
            }
        }
        Ok(cc)
    }

    pub fn top_degree(&self) -> usize {
        self.cell_counts.len() - 1
    }

    /// Integer incidence matrix of `d_k` with every word sent to 1.
    pub fn incidence(&self, k: usize) -> Vec<Vec<i64>> {
        let mut m = vec![vec![0i64; self.cell_counts[k]]; self.cell_counts[k + 1]];
        for t in &self.coboundary[k] {
            m[t.row][t.col] += t.coeff;
        }
        m
    }
}

fn mat_mul_int(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let inner = b.len();
    let cols = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| (0..cols).map(|j| (0..inner).map(|l| row[l] * b[l][j]).sum()).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn words_round_trip_through_text() {
        for s in ["1", "g", "a.b^-1.a", "t^3"] {
            assert_eq!(Word::parse(s).unwrap().to_string(), s);
        }
        assert!(Word::parse("a..b").is_err());
        assert!(Word::parse("a^x").is_err());
    }

    #[test]
    fn integer_square_must_vanish() {
        let bad = CellComplex::new(
            vec![1, 1, 1],
            vec![
                vec![IncidenceTerm::new(0, 0, 1, Word::identity())],
                vec![IncidenceTerm::new(0, 0, 1, Word::identity())],
            ],
            vec![],
        );
        assert!(matches!(bad, Err(ComplexError::NotAComplex { degree: 0, .. })));
    }

    #[test]
    fn unknown_generator_is_reported() {
        let r = CellComplex::new(
            vec![1, 1],
            vec![vec![IncidenceTerm::new(0, 0, 1, Word::generator("q"))]],
            vec!["g".into()],
        );
        assert_eq!(r.unwrap_err(), ComplexError::MissingGenerator("q".into()));
    }
}
