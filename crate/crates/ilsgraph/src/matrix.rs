use std::fmt;

use serde::de;
use serde::ser::SerializeStruct;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// A lattice point, one value in `{0, ..., d}` per variable.
pub type Point = Vec<u32>;

/// The inclusive upper bound `d` of the variable domain `{0, ..., d}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DomainBound(u32);

impl DomainBound {
    pub fn new(d: u32) -> Result<Self> {
        if d == 0 {
            return Err(Error::input("domain bound d must be at least 1"));
        }
        Ok(DomainBound(d))
    }

    pub fn value(self) -> u32 {
        self.0
    }
}

/// Dense matrix of exact rational coefficients.
///
/// Rows are always nonempty; a column count of zero is allowed so that
/// eliminating every column yields a representable residual matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoeffMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

impl CoeffMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Rational>) -> Result<Self> {
        if rows == 0 {
            return Err(Error::input("matrix must have at least one row"));
        }
        if entries.len() != rows * cols {
            return Err(Error::input(format!(
                "matrix entries length {} does not match {rows}x{cols}",
                entries.len()
            )));
        }
        Ok(CoeffMatrix {
            rows,
            cols,
            entries,
        })
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::input("matrix must have at least one row"));
        }
        let row_count = rows.len();
        let cols = rows[0].len();
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::input("matrix rows have unequal lengths"));
        }
        let entries = rows.into_iter().flatten().collect();
        CoeffMatrix::new(row_count, cols, entries)
    }

    /// Convenience constructor for integer matrices, mostly used in tests and
    /// generators.
    pub fn from_integer_rows(rows: &[&[i64]]) -> Result<Self> {
        let converted = rows
            .iter()
            .map(|r| r.iter().map(|&v| Rational::integer(v)).collect())
            .collect();
        CoeffMatrix::from_rows(converted)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, row: usize, col: usize) -> &Rational {
        &self.entries[row * self.cols + col]
    }

    pub fn row(&self, row: usize) -> &[Rational] {
        &self.entries[row * self.cols..(row + 1) * self.cols]
    }

    /// Entrywise sign of the matrix.
    pub fn sign_pattern(&self) -> SignPattern {
        SignPattern {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(Rational::sgn).collect(),
        }
    }

    /// Submatrix with rows and columns copied in the given orders.
    pub fn submatrix(&self, row_sel: &[usize], col_sel: &[usize]) -> Result<CoeffMatrix> {
        check_selection(row_sel, self.rows, "row")?;
        check_selection(col_sel, self.cols, "column")?;
        if row_sel.is_empty() {
            return Err(Error::input("submatrix must keep at least one row"));
        }
        let mut entries = Vec::with_capacity(row_sel.len() * col_sel.len());
        for &i in row_sel {
            for &j in col_sel {
                entries.push(self.get(i, j).clone());
            }
        }
        CoeffMatrix::new(row_sel.len(), col_sel.len(), entries)
    }

    /// Reindexed copy: entry `(i, j)` of the output is entry
    /// `(row_perm[i], col_perm[j])` of the input.
    pub fn permute(&self, row_perm: &[usize], col_perm: &[usize]) -> Result<CoeffMatrix> {
        check_permutation(row_perm, self.rows, "row")?;
        check_permutation(col_perm, self.cols, "column")?;
        let mut entries = Vec::with_capacity(self.entries.len());
        for &i in row_perm {
            for &j in col_perm {
                entries.push(self.get(i, j).clone());
            }
        }
        CoeffMatrix::new(self.rows, self.cols, entries)
    }
}

/// Matrix over {-1, 0, +1}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignPattern {
    rows: usize,
    cols: usize,
    entries: Vec<i8>,
}

impl SignPattern {
    pub fn new(rows: usize, cols: usize, entries: Vec<i8>) -> Result<Self> {
        if rows == 0 {
            return Err(Error::input("sign pattern must have at least one row"));
        }
        if entries.len() != rows * cols {
            return Err(Error::input("sign pattern entries do not match its shape"));
        }
        if entries.iter().any(|&s| !(-1..=1).contains(&s)) {
            return Err(Error::input("sign pattern entries must be -1, 0, or 1"));
        }
        Ok(SignPattern {
            rows,
            cols,
            entries,
        })
    }

    pub fn from_rows(rows: &[&[i8]]) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::input("sign pattern must have at least one row"));
        }
        let cols = rows[0].len();
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::input("sign pattern rows have unequal lengths"));
        }
        SignPattern::new(
            rows.len(),
            cols,
            rows.iter().flat_map(|r| r.iter().copied()).collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, row: usize, col: usize) -> i8 {
        self.entries[row * self.cols + col]
    }

    pub fn permute(&self, row_perm: &[usize], col_perm: &[usize]) -> Result<SignPattern> {
        check_permutation(row_perm, self.rows, "row")?;
        check_permutation(col_perm, self.cols, "column")?;
        let mut entries = Vec::with_capacity(self.entries.len());
        for &i in row_perm {
            for &j in col_perm {
                entries.push(self.get(i, j));
            }
        }
        SignPattern::new(self.rows, self.cols, entries)
    }
}

impl Serialize for SignPattern {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<&[i8]> = (0..self.rows)
            .map(|i| &self.entries[i * self.cols..(i + 1) * self.cols])
            .collect();
        rows.serialize(serializer)
    }
}

/// Right-hand side vector of an integer linear system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RhsVector {
    entries: Vec<Rational>,
}

impl RhsVector {
    pub fn new(entries: Vec<Rational>) -> Self {
        RhsVector { entries }
    }

    pub fn from_integers(values: &[i64]) -> Self {
        RhsVector::new(values.iter().map(|&v| Rational::integer(v)).collect())
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, i: usize) -> &Rational {
        &self.entries[i]
    }

    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }
}

/// Result of negating a set of columns: the transformed system together with
/// the coordinate map that carries feasible points across.
///
/// The map sends `x_j` to `d - x_j` on flipped columns and leaves the other
/// coordinates alone; it is a bijection between the two feasible sets that
/// preserves Hamming distance.
#[derive(Debug, Clone)]
pub struct FlippedSystem {
    pub matrix: CoeffMatrix,
    pub rhs: RhsVector,
    flipped: Vec<bool>,
    bound: DomainBound,
}

impl FlippedSystem {
    pub fn map_point(&self, point: &Point) -> Point {
        point
            .iter()
            .zip(&self.flipped)
            .map(|(&x, &f)| if f { self.bound.value() - x } else { x })
            .collect()
    }

    pub fn flipped_columns(&self) -> Vec<usize> {
        self.flipped
            .iter()
            .enumerate()
            .filter_map(|(j, &f)| f.then_some(j))
            .collect()
    }
}

/// Negate the columns in `flip` and compensate the right-hand side so the
/// feasible set is carried over by the coordinate map `x_j -> d - x_j`.
///
/// The new right-hand side is `b_i - d * sum_{j in flip} a_ij`.
pub fn flip_columns(
    a: &CoeffMatrix,
    b: &RhsVector,
    flip: &[usize],
    d: DomainBound,
) -> Result<FlippedSystem> {
    if b.len() != a.rows() {
        return Err(Error::input(format!(
            "rhs length {} does not match {} rows",
            b.len(),
            a.rows()
        )));
    }
    check_selection(flip, a.cols(), "column")?;
    let mut flipped = vec![false; a.cols()];
    for &j in flip {
        flipped[j] = true;
    }
    let mut entries = Vec::with_capacity(a.rows() * a.cols());
    let mut rhs = Vec::with_capacity(a.rows());
    for i in 0..a.rows() {
        let mut shift = Rational::zero();
        for (j, &flip_here) in flipped.iter().enumerate() {
            if flip_here {
                shift = &shift + a.get(i, j);
                entries.push(-a.get(i, j));
            } else {
                entries.push(a.get(i, j).clone());
            }
        }
        rhs.push(b.get(i) - &shift.scaled(d.value()));
    }
    Ok(FlippedSystem {
        matrix: CoeffMatrix::new(a.rows(), a.cols(), entries)?,
        rhs: RhsVector::new(rhs),
        flipped,
        bound: d,
    })
}

fn check_selection(sel: &[usize], limit: usize, what: &str) -> Result<()> {
    let mut seen = vec![false; limit];
    for &idx in sel {
        if idx >= limit {
            return Err(Error::input(format!(
                "{what} index {} out of range (limit {limit})",
                idx + 1
            )));
        }
        if seen[idx] {
            return Err(Error::input(format!("duplicate {what} index {}", idx + 1)));
        }
        seen[idx] = true;
    }
    Ok(())
}

pub(crate) fn check_permutation(perm: &[usize], n: usize, what: &str) -> Result<()> {
    if perm.len() != n {
        return Err(Error::input(format!(
            "{what} permutation has length {}, expected {n}",
            perm.len()
        )));
    }
    check_selection(perm, n, what)
}

impl fmt::Display for CoeffMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|r| r.to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl Serialize for CoeffMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut state = serializer.serialize_struct("CoeffMatrix", 3)?;
        state.serialize_field("rows", &self.rows)?;
        state.serialize_field("cols", &self.cols)?;
        let rows: Vec<&[Rational]> = (0..self.rows).map(|i| self.row(i)).collect();
        state.serialize_field("entries", &rows)?;
        state.end()
    }
}

#[derive(Deserialize)]
struct MatrixWire {
    rows: usize,
    cols: usize,
    entries: Vec<Vec<Rational>>,
}

impl<'de> Deserialize<'de> for CoeffMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let wire = MatrixWire::deserialize(deserializer)?;
        if wire.rows == 0 || wire.cols == 0 {
            return Err(de::Error::custom("matrix must have positive dimensions"));
        }
        if wire.entries.len() != wire.rows || wire.entries.iter().any(|r| r.len() != wire.cols) {
            return Err(de::Error::custom(
                "matrix entries do not match the declared shape",
            ));
        }
        CoeffMatrix::new(
            wire.rows,
            wire.cols,
            wire.entries.into_iter().flatten().collect(),
        )
        .map_err(|e| de::Error::custom(e.to_string()))
    }
}

impl Serialize for RhsVector {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut state = serializer.serialize_struct("RhsVector", 1)?;
        state.serialize_field("entries", &self.entries)?;
        state.end()
    }
}

#[derive(Deserialize)]
struct VectorWire {
    entries: Vec<Rational>,
}

impl<'de> Deserialize<'de> for RhsVector {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let wire = VectorWire::deserialize(deserializer)?;
        if wire.entries.is_empty() {
            return Err(de::Error::custom("vector must have at least one entry"));
        }
        Ok(RhsVector::new(wire.entries))
    }
}
