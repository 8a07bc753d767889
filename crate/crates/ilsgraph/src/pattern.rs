//! Forbidden-pattern detection.
//!
//! A forbidden pattern is an ordered row list and an equally long ordered
//! column list forming a sign cycle: each listed column is nonzero exactly at
//! two cyclically consecutive listed rows, with opposite signs. Its presence
//! defeats universal connectedness of the solution graph.

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::matrix::CoeffMatrix;

/// Exhaustive pattern search is limited to matrices up to this many rows and
/// columns.
pub const PATTERN_DIM_LIMIT: usize = 12;

/// Certificate of a forbidden pattern: ordered rows `(i_1, ..., i_k)` and
/// columns `(j_1, ..., j_k)` such that column `j_l` is nonzero exactly at
/// rows `i_l` and `i_{l+1}` (cyclically) with a negative product.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ForbiddenPattern {
    row_order: Vec<usize>,
    col_order: Vec<usize>,
}

impl ForbiddenPattern {
    pub fn new(row_order: Vec<usize>, col_order: Vec<usize>) -> Result<Self> {
        if row_order.len() != col_order.len() {
            return Err(Error::input("pattern row and column lists differ in size"));
        }
        if row_order.len() < 2 {
            return Err(Error::input("a forbidden pattern needs at least two rows"));
        }
        if has_duplicates(&row_order) || has_duplicates(&col_order) {
            return Err(Error::input("pattern indices must be distinct"));
        }
        Ok(ForbiddenPattern {
            row_order,
            col_order,
        })
    }

    pub fn lambda(&self) -> usize {
        self.row_order.len()
    }

    pub fn row_order(&self) -> &[usize] {
        &self.row_order
    }

    pub fn col_order(&self) -> &[usize] {
        &self.col_order
    }
}

impl Serialize for ForbiddenPattern {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut state = serializer.serialize_struct("ForbiddenPattern", 3)?;
        let rows: Vec<usize> = self.row_order.iter().map(|&i| i + 1).collect();
        let cols: Vec<usize> = self.col_order.iter().map(|&j| j + 1).collect();
        state.serialize_field("rowOrder", &rows)?;
        state.serialize_field("colOrder", &cols)?;
        state.serialize_field("lambda", &self.lambda())?;
        state.end()
    }
}

fn has_duplicates(indices: &[usize]) -> bool {
    let mut sorted = indices.to_vec();
    sorted.sort_unstable();
    sorted.windows(2).any(|w| w[0] == w[1])
}

/// Check the two cycle conditions for the given orderings: every listed
/// column has a negative sign product at its two consecutive rows and is zero
/// at every other listed row.
pub fn verify_pattern(a: &CoeffMatrix, fp: &ForbiddenPattern) -> Result<bool> {
    if fp.row_order.iter().any(|&i| i >= a.rows()) || fp.col_order.iter().any(|&j| j >= a.cols()) {
        return Err(Error::input("pattern indices out of range"));
    }
    let lambda = fp.lambda();
    for l in 0..lambda {
        let row_here = fp.row_order[l];
        let row_next = fp.row_order[(l + 1) % lambda];
        let col = fp.col_order[l];
        if a.get(row_here, col).sgn() * a.get(row_next, col).sgn() != -1 {
            return Ok(false);
        }
        for (pos, &other) in fp.row_order.iter().enumerate() {
            if pos != l && pos != (l + 1) % lambda && !a.get(other, col).is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Search for a forbidden pattern with the minimum number of rows.
///
/// Sizes are tried in increasing order; within a size the lexicographically
/// smallest normalized certificate is returned. Certificates are normalized
/// by rotating the cycle so the first row index is minimal and, between a
/// cycle and its reversal, keeping the lexicographically smaller column
/// order.
pub fn find_minimal_pattern(a: &CoeffMatrix) -> Result<Option<ForbiddenPattern>> {
    if a.rows() > PATTERN_DIM_LIMIT || a.cols() > PATTERN_DIM_LIMIT {
        return Err(Error::capability(format!(
            "pattern search is limited to {PATTERN_DIM_LIMIT}x{PATTERN_DIM_LIMIT} matrices, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    let signs: Vec<Vec<i8>> = (0..a.rows())
        .map(|i| (0..a.cols()).map(|j| a.get(i, j).sgn()).collect())
        .collect();
    let max_lambda = a.rows().min(a.cols());
    for lambda in 2..=max_lambda {
        let mut best: Option<(Vec<usize>, Vec<usize>)> = None;
        let mut search = CycleSearch {
            signs: &signs,
            lambda,
            rows: Vec::with_capacity(lambda),
            cols: Vec::with_capacity(lambda),
            row_used: vec![false; a.rows()],
            col_used: vec![false; a.cols()],
            best: &mut best,
        };
        for first_row in 0..a.rows() {
            search.rows.push(first_row);
            search.row_used[first_row] = true;
            search.extend();
            search.row_used[first_row] = false;
            search.rows.pop();
        }
        if let Some((rows, cols)) = best {
            return Ok(Some(ForbiddenPattern::new(rows, cols)?));
        }
    }
    Ok(None)
}

struct CycleSearch<'a> {
    signs: &'a [Vec<i8>],
    lambda: usize,
    rows: Vec<usize>,
    cols: Vec<usize>,
    row_used: Vec<bool>,
    col_used: Vec<bool>,
    best: &'a mut Option<(Vec<usize>, Vec<usize>)>,
}

impl CycleSearch<'_> {
    /// Extend the partial cycle by one column and, unless it closes the
    /// cycle, one more row. Invariant: `rows` has one more element than
    /// `cols`, the first row is the smallest used row, and all zero
    /// conditions among already chosen indices hold.
    fn extend(&mut self) {
        let n = self.signs[0].len();
        let here = *self.rows.last().unwrap();
        let first = self.rows[0];
        if self.rows.len() == self.lambda {
            // Closing column: pairs the last row with the first, zero at all
            // interior rows.
            for col in 0..n {
                if self.col_used[col] {
                    continue;
                }
                if self.signs[here][col] * self.signs[first][col] != -1 {
                    continue;
                }
                if self.rows[1..self.lambda - 1]
                    .iter()
                    .any(|&r| self.signs[r][col] != 0)
                {
                    continue;
                }
                self.cols.push(col);
                self.record();
                self.cols.pop();
            }
            return;
        }
        for col in 0..n {
            if self.col_used[col] || self.signs[here][col] == 0 {
                continue;
            }
            // All rows chosen before `here` must be zero in this column.
            if self.rows[..self.rows.len() - 1]
                .iter()
                .any(|&r| self.signs[r][col] != 0)
            {
                continue;
            }
            for next in first + 1..self.signs.len() {
                if self.row_used[next] {
                    continue;
                }
                if self.signs[here][col] * self.signs[next][col] != -1 {
                    continue;
                }
                // The new row must be zero at every earlier column except
                // the connecting one.
                if self.cols.iter().any(|&c| self.signs[next][c] != 0) {
                    continue;
                }
                self.cols.push(col);
                self.rows.push(next);
                self.row_used[next] = true;
                self.col_used[col] = true;
                self.extend();
                self.col_used[col] = false;
                self.row_used[next] = false;
                self.rows.pop();
                self.cols.pop();
            }
        }
    }

    fn record(&mut self) {
        let candidate = normalize_certificate(&self.rows, &self.cols);
        match self.best {
            Some(current) if *current <= candidate => {}
            _ => *self.best = Some(candidate),
        }
    }
}

/// The cycle and its reversal describe the same pattern; keep whichever has
/// the lexicographically smaller column order. The first row is already the
/// smallest by construction.
fn normalize_certificate(rows: &[usize], cols: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let lambda = rows.len();
    let mut rev_rows = Vec::with_capacity(lambda);
    rev_rows.push(rows[0]);
    rev_rows.extend(rows[1..].iter().rev());
    let rev_cols: Vec<usize> = cols.iter().rev().copied().collect();
    if rev_cols < cols.to_vec() {
        (rev_rows, rev_cols)
    } else {
        (rows.to_vec(), cols.to_vec())
    }
}

/// True when every column outside the pattern is sign-coherent on the
/// pattern rows: no two entries of opposite sign.
pub fn complement_is_clean(a: &CoeffMatrix, fp: &ForbiddenPattern) -> Result<bool> {
    if !verify_pattern(a, fp)? {
        return Err(Error::input("pattern is not valid for this matrix"));
    }
    let in_pattern: Vec<bool> = {
        let mut mark = vec![false; a.cols()];
        for &j in fp.col_order() {
            mark[j] = true;
        }
        mark
    };
    for (col, &inside) in in_pattern.iter().enumerate() {
        if inside {
            continue;
        }
        let mut has_positive = false;
        let mut has_negative = false;
        for &row in fp.row_order() {
            match a.get(row, col).sgn() {
                1 => has_positive = true,
                -1 => has_negative = true,
                _ => {}
            }
        }
        if has_positive && has_negative {
            return Ok(false);
        }
    }
    Ok(true)
}

/// For a two-column matrix, the smallest row pair whose signs are strictly
/// opposite and nonzero in both columns.
pub fn opposite_row_pair(a: &CoeffMatrix) -> Result<Option<(usize, usize)>> {
    if a.cols() != 2 {
        return Err(Error::input(format!(
            "opposite row pair is defined for two-column matrices, got {} columns",
            a.cols()
        )));
    }
    for i1 in 0..a.rows() {
        for i2 in i1 + 1..a.rows() {
            let opposite = (0..2).all(|j| {
                let s1 = a.get(i1, j).sgn();
                let s2 = a.get(i2, j).sgn();
                s1 != 0 && s1 == -s2
            });
            if opposite {
                return Ok(Some((i1, i2)));
            }
        }
    }
    Ok(None)
}
