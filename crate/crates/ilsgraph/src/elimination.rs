//! Column elimination and elimination orderings.
//!
//! A matrix can be eliminated at a column when every row carrying a positive
//! entry there (or, symmetrically, every row carrying a negative entry) is
//! zero in all other columns. Repeating this greedily yields the residual
//! column set `delta`; an empty residual certifies an elimination ordering,
//! which in turn certifies universal connectedness of the solution graph.

use itertools::Itertools;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::matrix::CoeffMatrix;

/// Columns beyond this count make the factorial ordering oracle intractable.
pub const ORACLE_MAX_COLS: usize = 8;

/// A sequence of all columns, each eliminable once its predecessors are gone.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EliminationOrdering(pub Vec<usize>);

impl EliminationOrdering {
    pub fn columns(&self) -> &[usize] {
        &self.0
    }
}

impl Serialize for EliminationOrdering {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let one_based: Vec<usize> = self.0.iter().map(|&j| j + 1).collect();
        one_based.serialize(serializer)
    }
}

/// Outcome of the greedy reduction: the order in which columns were
/// eliminated and the residual set on which no further elimination applies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionResult {
    pub eliminated_order: Vec<usize>,
    pub delta: Vec<usize>,
}

impl Serialize for ReductionResult {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut state = serializer.serialize_struct("ReductionResult", 2)?;
        let order: Vec<usize> = self.eliminated_order.iter().map(|&j| j + 1).collect();
        let delta: Vec<usize> = self.delta.iter().map(|&j| j + 1).collect();
        state.serialize_field("eliminatedOrder", &order)?;
        state.serialize_field("delta", &delta)?;
        state.end()
    }
}

/// True when the matrix can be eliminated at `col`: every row with a positive
/// entry in `col` is zero elsewhere, or every row with a negative entry in
/// `col` is zero elsewhere. Either condition holds vacuously when no row
/// triggers it, so a zero column is always eliminable.
pub fn can_eliminate(a: &CoeffMatrix, col: usize) -> Result<bool> {
    if col >= a.cols() {
        return Err(Error::input(format!(
            "column index {} out of range (matrix has {} columns)",
            col + 1,
            a.cols()
        )));
    }
    let active = vec![true; a.cols()];
    Ok(can_eliminate_active(a, col, &active))
}

/// Elimination test restricted to the columns marked in `active`; `col` must
/// itself be active. Other rows/columns are treated as deleted.
pub(crate) fn can_eliminate_active(a: &CoeffMatrix, col: usize, active: &[bool]) -> bool {
    let zero_elsewhere =
        |row: usize| (0..a.cols()).all(|j| j == col || !active[j] || a.get(row, j).is_zero());
    let condition = |wanted_sign: i8| {
        (0..a.rows()).all(|i| a.get(i, col).sgn() != wanted_sign || zero_elsewhere(i))
    };
    condition(1) || condition(-1)
}

/// The residual matrix after deleting the columns in `cols`, original column
/// order preserved.
pub fn eliminate(a: &CoeffMatrix, cols: &[usize]) -> Result<CoeffMatrix> {
    let mut remove = vec![false; a.cols()];
    for &j in cols {
        if j >= a.cols() {
            return Err(Error::input(format!(
                "column index {} out of range (matrix has {} columns)",
                j + 1,
                a.cols()
            )));
        }
        remove[j] = true;
    }
    let keep: Vec<usize> = (0..a.cols()).filter(|&j| !remove[j]).collect();
    let rows: Vec<usize> = (0..a.rows()).collect();
    a.submatrix(&rows, &keep)
}

/// Greedily eliminate the smallest-index eliminable column until none
/// remains. Deterministic by construction; the tie-break is checked against
/// the exhaustive oracle in the campaigns.
pub fn greedy_reduce(a: &CoeffMatrix) -> ReductionResult {
    let mut active = vec![true; a.cols()];
    let mut order = Vec::new();
    loop {
        let next = (0..a.cols()).find(|&j| active[j] && can_eliminate_active(a, j, &active));
        match next {
            Some(j) => {
                active[j] = false;
                order.push(j);
            }
            None => break,
        }
    }
    let delta = (0..a.cols()).filter(|&j| active[j]).collect();
    ReductionResult {
        eliminated_order: order,
        delta,
    }
}

/// Elimination ordering found by the greedy reduction, if the residual is
/// empty. Completeness of the greedy choice is not assumed: the campaigns
/// cross-check every answer against [`exhaustive_ordering_oracle`].
pub fn find_elimination_ordering(a: &CoeffMatrix) -> Option<EliminationOrdering> {
    let reduction = greedy_reduce(a);
    if reduction.delta.is_empty() {
        Some(EliminationOrdering(reduction.eliminated_order))
    } else {
        None
    }
}

/// Definition check: every column of `order` must be eliminable in the residual
/// matrix left by its predecessors.
pub fn is_elimination_ordering(a: &CoeffMatrix, order: &[usize]) -> bool {
    if crate::matrix::check_permutation(order, a.cols(), "column").is_err() {
        return false;
    }
    let mut active = vec![true; a.cols()];
    for &j in order {
        if !can_eliminate_active(a, j, &active) {
            return false;
        }
        active[j] = false;
    }
    true
}

/// Independent oracle: try all `n!` column orderings against the definition
/// and return the lexicographically first valid one.
pub fn exhaustive_ordering_oracle(a: &CoeffMatrix) -> Result<Option<EliminationOrdering>> {
    if a.cols() > ORACLE_MAX_COLS {
        return Err(Error::capability(format!(
            "ordering oracle is limited to {ORACLE_MAX_COLS} columns, got {}",
            a.cols()
        )));
    }
    for order in (0..a.cols()).permutations(a.cols()) {
        if is_elimination_ordering(a, &order) {
            return Ok(Some(EliminationOrdering(order)));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: &[&[i64]]) -> CoeffMatrix {
        CoeffMatrix::from_integer_rows(rows).unwrap()
    }

    /// The four-column cycle whose sign pattern defeats every elimination.
    pub(crate) fn four_cycle() -> CoeffMatrix {
        mat(&[
            &[1, 0, 0, -1],
            &[-1, 1, 0, 0],
            &[0, -1, 1, 0],
            &[0, 0, -1, 1],
        ])
    }

    #[test]
    fn can_eliminate_examples() {
        assert!(can_eliminate(&mat(&[&[1, 0], &[0, 1]]), 0).unwrap());
        assert!(!can_eliminate(&mat(&[&[1, 1], &[-1, -1]]), 0).unwrap());
        // No positive entry in column 1, so the positive-side condition holds
        // vacuously.
        assert!(can_eliminate(&mat(&[&[-1, 2], &[0, 1]]), 0).unwrap());
        assert!(can_eliminate(&mat(&[&[1, 1], &[-1, -1]]), 2).is_err());
    }

    #[test]
    fn zero_column_is_eliminable() {
        assert!(can_eliminate(&mat(&[&[0, 1], &[0, -1]]), 0).unwrap());
    }

    #[test]
    fn eliminate_examples() {
        let a = mat(&[&[1, 2, 3]]);
        assert_eq!(eliminate(&a, &[]).unwrap(), a);
        assert_eq!(eliminate(&a, &[1]).unwrap(), mat(&[&[1, 3]]));
        let empty = eliminate(&a, &[0, 1, 2]).unwrap();
        assert_eq!(empty.cols(), 0);
        assert_eq!(empty.rows(), 1);
    }

    #[test]
    fn greedy_reduce_examples() {
        let identity = mat(&[&[1, 0], &[0, 1]]);
        let reduced = greedy_reduce(&identity);
        assert_eq!(reduced.eliminated_order, vec![0, 1]);
        assert!(reduced.delta.is_empty());

        let stuck = greedy_reduce(&mat(&[&[1, 1], &[-1, -1]]));
        assert!(stuck.eliminated_order.is_empty());
        assert_eq!(stuck.delta, vec![0, 1]);
    }

    #[test]
    fn greedy_reduce_four_cycle_keeps_all_columns() {
        let a = four_cycle();
        // Derivation of the expected residual: every column must fail the
        // elimination test on the untouched matrix.
        for j in 0..4 {
            assert!(!can_eliminate(&a, j).unwrap());
        }
        let reduced = greedy_reduce(&a);
        assert!(reduced.eliminated_order.is_empty());
        assert_eq!(reduced.delta, vec![0, 1, 2, 3]);
    }

    #[test]
    fn find_ordering_examples() {
        let identity = mat(&[&[1, 0], &[0, 1]]);
        assert_eq!(
            find_elimination_ordering(&identity),
            Some(EliminationOrdering(vec![0, 1]))
        );
        assert_eq!(find_elimination_ordering(&mat(&[&[1, 1], &[-1, -1]])), None);

        let a = mat(&[&[-1, 2], &[0, 1]]);
        let greedy = find_elimination_ordering(&a).unwrap();
        assert_eq!(greedy, EliminationOrdering(vec![0, 1]));
        let oracle = exhaustive_ordering_oracle(&a).unwrap();
        assert!(oracle.is_some());
        assert!(is_elimination_ordering(&a, oracle.unwrap().columns()));
    }

    #[test]
    fn oracle_examples() {
        let identity = mat(&[&[1, 0], &[0, 1]]);
        let found = exhaustive_ordering_oracle(&identity).unwrap().unwrap();
        assert!(is_elimination_ordering(&identity, found.columns()));

        // Both orderings fail the definition check.
        let blocked = mat(&[&[1, 1], &[-1, -1]]);
        assert!(!is_elimination_ordering(&blocked, &[0, 1]));
        assert!(!is_elimination_ordering(&blocked, &[1, 0]));
        assert_eq!(exhaustive_ordering_oracle(&blocked).unwrap(), None);
    }

    #[test]
    fn oracle_guards_large_matrices() {
        let wide = CoeffMatrix::new(
            1,
            9,
            (0..9)
                .map(|_| crate::rational::Rational::integer(1))
                .collect(),
        )
        .unwrap();
        assert!(exhaustive_ordering_oracle(&wide).is_err());
    }

    #[test]
    fn greedy_output_is_prefix_valid() {
        let a = mat(&[&[1, 0, -1], &[-1, 1, 0], &[0, 0, 1]]);
        let reduced = greedy_reduce(&a);
        let mut active = vec![true; a.cols()];
        for &j in &reduced.eliminated_order {
            assert!(can_eliminate_active(&a, j, &active));
            active[j] = false;
        }
        for &j in &reduced.delta {
            assert!(!can_eliminate_active(&a, j, &active));
        }
    }

    #[test]
    fn greedy_agrees_with_oracle_on_all_2x2_sign_matrices() {
        let values = [-1i64, 0, 1];
        for a in values {
            for b in values {
                for c in values {
                    for e in values {
                        let m = mat(&[&[a, b], &[c, e]]);
                        let greedy = find_elimination_ordering(&m);
                        let oracle = exhaustive_ordering_oracle(&m).unwrap();
                        assert_eq!(greedy.is_some(), oracle.is_some(), "matrix {m}");
                    }
                }
            }
        }
    }
}
