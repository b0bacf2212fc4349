//! The part structure shared by the majority-vote codecs.
//!
//! Each string is cut into `P` equal parts. The first `w - 1` bits of part `j`
//! hold an identifier and the last bit is the part's reserved column. Across
//! a codeword the identifiers of one part are distinct, so sorting the rows
//! by part `j` gives a well-defined matrix whose reserved column `j` is read
//! top to bottom.
//!
//! Rows are numbered by the order of their part-0 identifiers. Row `i`
//! carries, in part `j`, the `perms[j][i]`-th smallest identifier of that
//! part (`perms[0]` is the identity).

use std::cmp::Ordering;

use num_bigint::BigUint;
use num_traits::One;

use crate::bits::BitString;
use crate::combinatorics::{rank_perm, rank_sorted_subset, unrank_perm, unrank_subset};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PartGeometry {
    pub m: usize,
    pub l: usize,
    pub parts: usize,
    /// Part width `L / P`.
    pub width: usize,
    /// Identifier length `w - 1`.
    pub ident: usize,
}

impl PartGeometry {
    pub fn new(m: usize, l: usize, parts: usize) -> Result<Self> {
        if parts == 0 || !l.is_multiple_of(parts) {
            return Err(Error::InvalidParams(format!("{parts} must divide L = {l}")));
        }
        let width = l / parts;
        if width < 2 {
            return Err(Error::InvalidParams(
                "parts must be at least 2 bits wide".into(),
            ));
        }
        let ident = width - 1;
        if ident < 64 && (m as u128) > (1u128 << ident) {
            return Err(Error::InvalidParams(format!(
                "M = {m} exceeds the 2^{ident} identifiers of one part"
            )));
        }
        Ok(PartGeometry {
            m,
            l,
            parts,
            width,
            ident,
        })
    }

    #[inline]
    pub fn ident_start(&self, j: usize) -> usize {
        j * self.width
    }

    #[inline]
    pub fn reserved_col(&self, j: usize) -> usize {
        j * self.width + self.ident
    }

    /// Length of every part-major vectorization.
    pub fn s_len(&self) -> usize {
        self.parts * self.m * self.ident
    }

    /// Identifier universe size `2^(w-1)`.
    pub fn universe(&self) -> BigUint {
        BigUint::one() << self.ident
    }

    /// Row indices ordered by their part-`j` identifier, ties broken by the
    /// whole string.
    pub fn order_by_part(&self, rows: &[BitString], j: usize) -> Vec<usize> {
        let start = self.ident_start(j);
        let mut idx: Vec<usize> = (0..rows.len()).collect();
        idx.sort_by(|&a, &b| {
            rows[a]
                .cmp_range(start, &rows[b], start, self.ident)
                .then_with(|| rows[a].cmp(&rows[b]))
        });
        idx
    }

    /// Part-major vectorization of the identifiers of `rows` taken in `order`.
    pub fn vectorize(&self, rows: &[BitString], order: &[usize]) -> BitString {
        let mut s = BitString::with_capacity(self.s_len());
        for p in 0..self.parts {
            let start = self.ident_start(p);
            for &i in order {
                s.extend_from_range(&rows[i], start, self.ident);
            }
        }
        s
    }

    /// Reserved column `j` of `rows` taken in `order`.
    pub fn column(&self, rows: &[BitString], order: &[usize], j: usize) -> BitString {
        let c = self.reserved_col(j);
        BitString::from_bits(order.iter().map(|&i| rows[i].get(c)))
    }
}

/// Identifier sets and the row association of a codeword.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PartTable {
    /// `values[j]` is the ascending identifier list of part `j`.
    pub values: Vec<Vec<BitString>>,
    /// `perms[j][i]` indexes into `values[j]` for row `i`.
    pub perms: Vec<Vec<usize>>,
}

impl PartTable {
    pub fn validate(&self, g: &PartGeometry) -> Result<()> {
        if self.values.len() != g.parts || self.perms.len() != g.parts {
            return Err(Error::Malformed("part count mismatch".into()));
        }
        for (vals, perm) in self.values.iter().zip(&self.perms) {
            if vals.len() != g.m || perm.len() != g.m {
                return Err(Error::Malformed("part size mismatch".into()));
            }
            if vals.iter().any(|v| v.len() != g.ident) {
                return Err(Error::Malformed("identifier length mismatch".into()));
            }
            if vals.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::Malformed(
                    "identifiers not strictly ascending".into(),
                ));
            }
            let mut seen = vec![false; g.m];
            for &x in perm {
                if x >= g.m || std::mem::replace(&mut seen[x], true) {
                    return Err(Error::Malformed(
                        "row association is not a permutation".into(),
                    ));
                }
            }
        }
        if self.perms[0].iter().enumerate().any(|(i, &x)| i != x) {
            return Err(Error::Malformed(
                "part 0 association must be the identity".into(),
            ));
        }
        Ok(())
    }

    #[inline]
    pub fn row_value(&self, j: usize, i: usize) -> &BitString {
        &self.values[j][self.perms[j][i]]
    }

    /// Rows in the order of their part-`j` identifiers.
    pub fn sorted_order(&self, j: usize) -> Vec<usize> {
        let mut order = vec![0; self.perms[j].len()];
        for (i, &r) in self.perms[j].iter().enumerate() {
            order[r] = i;
        }
        order
    }

    /// The vectorization `s_j`: identifiers of every part, rows taken in
    /// part-`j` order.
    pub fn s_vector(&self, g: &PartGeometry, j: usize) -> BitString {
        let order = self.sorted_order(j);
        let mut s = BitString::with_capacity(g.s_len());
        for p in 0..g.parts {
            for &i in &order {
                s.extend_from(self.row_value(p, i));
            }
        }
        s
    }

    /// Parses an `s_j` vector. Fails unless part `j` is strictly ascending
    /// and every part holds distinct identifiers.
    pub fn from_s_vector(g: &PartGeometry, j: usize, s: &BitString) -> Result<PartTable> {
        if s.len() != g.s_len() {
            return Err(Error::LengthMismatch {
                expected: g.s_len(),
                found: s.len(),
            });
        }
        let (m, n) = (g.m, g.ident);
        let at = |p: usize, r: usize| (p * m + r) * n;
        for r in 1..m {
            if s.cmp_range(at(j, r - 1), s, at(j, r), n) != Ordering::Less {
                return Err(Error::Inconsistent("sorting part out of order"));
            }
        }
        // Row r of the s_j matrix has index idx[p][r] within part p.
        let mut values = Vec::with_capacity(g.parts);
        let mut idx = Vec::with_capacity(g.parts);
        for p in 0..g.parts {
            let mut order: Vec<usize> = (0..m).collect();
            order.sort_by(|&a, &b| s.cmp_range(at(p, a), s, at(p, b), n));
            if order
                .windows(2)
                .any(|w| s.cmp_range(at(p, w[0]), s, at(p, w[1]), n) == Ordering::Equal)
            {
                return Err(Error::Inconsistent("repeated identifier in a part"));
            }
            let mut rank = vec![0; m];
            for (k, &r) in order.iter().enumerate() {
                rank[r] = k;
            }
            values.push(order.iter().map(|&r| s.slice(at(p, r), n)).collect());
            idx.push(rank);
        }
        // Renumber rows by part-0 rank.
        let mut row_of = vec![0; m];
        for (r, &k) in idx[0].iter().enumerate() {
            row_of[k] = r;
        }
        let perms = idx
            .iter()
            .map(|rank| row_of.iter().map(|&r| rank[r]).collect())
            .collect();
        Ok(PartTable { values, perms })
    }

    /// Ascending identifiers of part `j` as integers.
    pub fn part_integers(&self, j: usize) -> Vec<BigUint> {
        self.values[j].iter().map(BitString::to_uint).collect()
    }

    /// Rank of the identifier set of part `j`.
    pub fn subset_rank(&self, g: &PartGeometry, j: usize) -> BigUint {
        let ints = self.part_integers(j);
        let refs: Vec<&BigUint> = ints.iter().collect();
        rank_sorted_subset(&g.universe(), &refs)
    }

    pub fn perm_rank(&self, j: usize) -> BigUint {
        rank_perm(&self.perms[j]).expect("validated permutation")
    }

    /// Builds part `j`'s identifiers from a subset rank.
    pub fn identifiers_from_rank(g: &PartGeometry, rank: &BigUint) -> Result<Vec<BitString>> {
        unrank_subset(&g.universe(), g.m, rank)?
            .iter()
            .map(|v| BitString::from_uint(v, g.ident))
            .collect()
    }

    pub fn perm_from_rank(g: &PartGeometry, rank: &BigUint) -> Result<Vec<usize>> {
        unrank_perm(g.m, rank)
    }
}

/// Lays out rows from a table and the reserved columns, each given top to
/// bottom in the order of its own part.
pub fn assemble_rows(g: &PartGeometry, table: &PartTable, columns: &[BitString]) -> Vec<BitString> {
    debug_assert_eq!(columns.len(), g.parts);
    (0..g.m)
        .map(|i| {
            let mut row = BitString::with_capacity(g.l);
            for (p, col) in columns.iter().enumerate() {
                row.extend_from(table.row_value(p, i));
                row.push(col.get(table.perms[p][i]));
            }
            row
        })
        .collect()
}

/// For each true row of `table`, the received row agreeing with it in at
/// least `threshold` parts. Fails unless this is a bijection.
pub fn match_rows(
    g: &PartGeometry,
    table: &PartTable,
    rows: &[BitString],
    threshold: usize,
) -> Result<Vec<usize>> {
    // inverse[j][k]: true row carrying the k-th identifier of part j.
    let inverse: Vec<Vec<usize>> = (0..g.parts).map(|j| table.sorted_order(j)).collect();
    let mut owner = vec![usize::MAX; g.m];
    let mut votes = vec![0usize; g.m];
    for (r, row) in rows.iter().enumerate() {
        votes.iter_mut().for_each(|v| *v = 0);
        let mut best = None;
        #[allow(clippy::needless_range_loop)]
        for j in 0..g.parts {
            let start = g.ident_start(j);
            let found = table.values[j].binary_search_by(|v| v.cmp_range(0, row, start, g.ident));
            if let Ok(k) = found {
                let i = inverse[j][k];
                votes[i] += 1;
                if votes[i] >= threshold {
                    best = Some(i);
                }
            }
        }
        let i = best.ok_or(Error::RowMatch)?;
        if owner[i] != usize::MAX {
            return Err(Error::RowMatch);
        }
        owner[i] = r;
    }
    if owner.contains(&usize::MAX) {
        return Err(Error::RowMatch);
    }
    Ok(owner)
}

/// For each true row, the received row carrying its part-`j` identifier.
pub fn match_rows_by_part(
    g: &PartGeometry,
    table: &PartTable,
    rows: &[BitString],
    j: usize,
) -> Result<Vec<usize>> {
    let inverse = table.sorted_order(j);
    let start = g.ident_start(j);
    let mut owner = vec![usize::MAX; g.m];
    for (r, row) in rows.iter().enumerate() {
        let k = table.values[j]
            .binary_search_by(|v| v.cmp_range(0, row, start, g.ident))
            .map_err(|_| Error::RowMatch)?;
        if owner[inverse[k]] != usize::MAX {
            return Err(Error::RowMatch);
        }
        owner[inverse[k]] = r;
    }
    Ok(owner)
}

/// Reserved column `j` in the true part-`j` order, read from the matched
/// received rows.
pub fn true_column(
    g: &PartGeometry,
    table: &PartTable,
    rows: &[BitString],
    owner: &[usize],
    j: usize,
) -> BitString {
    let order = table.sorted_order(j);
    let c = g.reserved_col(j);
    BitString::from_bits(order.iter().map(|&i| rows[owner[i]].get(c)))
}

/// Index of the value voted for by at least `threshold` of `candidates`.
pub fn majority<T: PartialEq>(candidates: &[Option<T>], threshold: usize) -> Option<usize> {
    (0..candidates.len()).find(|&a| {
        candidates[a].as_ref().is_some_and(|x| {
            candidates.iter().filter(|c| c.as_ref() == Some(x)).count() >= threshold
        })
    })
}
