//! Words (unordered sets of equal-length strings) and substitution patterns.

use std::collections::BTreeSet;
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::bits::BitString;
use crate::error::{Error, Result};

/// A set of distinct binary strings of one common length.
///
/// Rows are kept in ascending lexicographic order, which is also the
/// canonical row order used to address substitution patterns.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Word {
    rows: Vec<BitString>,
}

impl Word {
    /// Builds a word from strings in any order; duplicates collapse.
    pub fn new(strings: impl IntoIterator<Item = BitString>) -> Result<Self> {
        let mut rows: Vec<BitString> = strings.into_iter().collect();
        if rows.is_empty() {
            return Err(Error::Malformed("a word needs at least one string".into()));
        }
        let len = rows[0].len();
        if len == 0 {
            return Err(Error::Malformed("strings must be nonempty".into()));
        }
        if let Some(bad) = rows.iter().find(|r| r.len() != len) {
            return Err(Error::LengthMismatch {
                expected: len,
                found: bad.len(),
            });
        }
        rows.sort_unstable();
        rows.dedup();
        Ok(Word { rows })
    }

    /// Like [`Word::new`] but rejects duplicate strings instead of merging them.
    pub fn from_distinct(strings: impl IntoIterator<Item = BitString>) -> Result<Self> {
        let strings: Vec<BitString> = strings.into_iter().collect();
        let n = strings.len();
        let w = Word::new(strings)?;
        if w.size() != n {
            return Err(Error::Malformed("duplicate strings in word".into()));
        }
        Ok(w)
    }

    pub fn parse_rows(rows: &[&str]) -> Result<Self> {
        Word::new(
            rows.iter()
                .map(|r| r.parse())
                .collect::<Result<Vec<BitString>>>()?,
        )
    }

    /// Number of strings.
    pub fn size(&self) -> usize {
        self.rows.len()
    }

    /// Common string length.
    pub fn string_len(&self) -> usize {
        self.rows[0].len()
    }

    /// Rows in canonical (ascending) order.
    pub fn rows(&self) -> &[BitString] {
        &self.rows
    }

    pub fn into_rows(self) -> Vec<BitString> {
        self.rows
    }

    pub fn contains(&self, s: &BitString) -> bool {
        self.rows.binary_search(s).is_ok()
    }

    /// Smallest pairwise Hamming distance, `None` for a single string.
    pub fn min_distance(&self) -> Option<usize> {
        let mut best = None;
        for (i, a) in self.rows.iter().enumerate() {
            for b in &self.rows[i + 1..] {
                let d = a.hamming_distance(b);
                best = Some(best.map_or(d, |x: usize| x.min(d)));
            }
        }
        best
    }

    /// Writes one string per line in canonical order.
    pub fn write_to<W: Write>(&self, mut out: W) -> Result<()> {
        for r in &self.rows {
            writeln!(out, "{r}")?;
        }
        Ok(())
    }

    /// Reads one string per line; blank lines are skipped, order is free.
    pub fn read_from<R: BufRead>(input: R) -> Result<Self> {
        let mut strings = Vec::new();
        for (n, line) in input.lines().enumerate() {
            let line = line?;
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let s: BitString = line
                .parse()
                .map_err(|e| Error::Malformed(format!("line {}: {e}", n + 1)))?;
            strings.push(s);
        }
        Word::new(strings)
    }
}

/// Sorted copy of the strings of `w`. Words already store this order.
pub fn canonical_rows(w: &Word) -> Vec<BitString> {
    w.rows.clone()
}

/// A set of bit positions `(row, col)` to flip, both 0-based, with rows
/// addressed in the canonical order of the word being corrupted.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SubstitutionPattern {
    flips: Vec<(usize, usize)>,
}

impl SubstitutionPattern {
    pub fn new(flips: impl IntoIterator<Item = (usize, usize)>, budget: usize) -> Result<Self> {
        let set: BTreeSet<(usize, usize)> = flips.into_iter().collect();
        let flips: Vec<_> = set.into_iter().collect();
        if flips.len() > budget {
            return Err(Error::PatternWeight {
                weight: flips.len(),
                budget,
            });
        }
        Ok(SubstitutionPattern { flips })
    }

    /// Rejects repeated positions instead of merging them.
    pub fn from_distinct(flips: Vec<(usize, usize)>, budget: usize) -> Result<Self> {
        let n = flips.len();
        let p = SubstitutionPattern::new(flips, usize::MAX)?;
        if p.weight() != n {
            return Err(Error::Malformed("repeated flip position".into()));
        }
        if n > budget {
            return Err(Error::PatternWeight { weight: n, budget });
        }
        Ok(p)
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn single(row: usize, col: usize) -> Self {
        SubstitutionPattern {
            flips: vec![(row, col)],
        }
    }

    pub fn weight(&self) -> usize {
        self.flips.len()
    }

    pub fn flips(&self) -> &[(usize, usize)] {
        &self.flips
    }
}

/// Flips the pattern's positions in the canonical rows of `w`.
pub fn apply_pattern(w: &Word, p: &SubstitutionPattern) -> Result<Word> {
    let (rows, cols) = (w.size(), w.string_len());
    if let Some(&(row, col)) = p.flips.iter().find(|&&(r, c)| r >= rows || c >= cols) {
        return Err(Error::PositionOutOfRange {
            row,
            col,
            rows,
            cols,
        });
    }
    let mut out = w.rows.clone();
    for &(r, c) in &p.flips {
        out[r].flip(c);
    }
    Word::new(out)
}

/// Row-major matrix view with positions addressed like patterns.
pub fn flip_rows(rows: &mut [BitString], p: &SubstitutionPattern) {
    for &(r, c) in &p.flips {
        rows[r].flip(c);
    }
}
