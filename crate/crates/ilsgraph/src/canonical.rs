//! The 4x3 canonical structure: matrices that are nowhere eliminable yet
//! pattern-free all share one sign pattern up to reordering, and instances
//! with that pattern admit an explicit three-hop connecting path.

use itertools::Itertools;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::elimination::can_eliminate;
use crate::error::{Error, Result};
use crate::graph::is_feasible;
use crate::matrix::{CoeffMatrix, DomainBound, Point, RhsVector, SignPattern};

/// The target sign pattern of the 4x3 case: rows `(+,+,0)`, `(+,-,0)`,
/// `(-,0,+)`, `(-,0,-)`.
pub fn canonical_sign_pattern() -> SignPattern {
    SignPattern::from_rows(&[&[1, 1, 0], &[1, -1, 0], &[-1, 0, 1], &[-1, 0, -1]])
        .expect("static pattern is well formed")
}

/// Row and column permutations carrying a sign pattern onto
/// [`canonical_sign_pattern`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonicalMatch {
    pub row_perm: Vec<usize>,
    pub col_perm: Vec<usize>,
}

impl Serialize for CanonicalMatch {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut state = serializer.serialize_struct("CanonicalMatch", 2)?;
        let rows: Vec<usize> = self.row_perm.iter().map(|&i| i + 1).collect();
        let cols: Vec<usize> = self.col_perm.iter().map(|&j| j + 1).collect();
        state.serialize_field("rowPerm", &rows)?;
        state.serialize_field("colPerm", &cols)?;
        state.end()
    }
}

/// True when no column of the matrix can be eliminated.
pub fn not_eliminable_anywhere(a: &CoeffMatrix) -> bool {
    (0..a.cols()).all(|j| !can_eliminate(a, j).expect("column index in range"))
}

/// Search all 144 permutation pairs for one mapping the pattern onto the
/// canonical target; returns the lexicographically smallest match.
pub fn match_canonical(pattern: &SignPattern) -> Result<Option<CanonicalMatch>> {
    if pattern.rows() != 4 || pattern.cols() != 3 {
        return Err(Error::input(format!(
            "canonical matching needs a 4x3 sign pattern, got {}x{}",
            pattern.rows(),
            pattern.cols()
        )));
    }
    let target = canonical_sign_pattern();
    for row_perm in (0..4usize).permutations(4) {
        for col_perm in (0..3usize).permutations(3) {
            if pattern.permute(&row_perm, &col_perm)? == target {
                return Ok(Some(CanonicalMatch { row_perm, col_perm }));
            }
        }
    }
    Ok(None)
}

/// A four-point walk between two feasible points; consecutive distinct
/// points differ in exactly one coordinate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CanonicalPath {
    pub points: Vec<Point>,
}

/// The explicit path for instances whose sign pattern equals the canonical
/// target exactly: from the endpoint with the larger first coordinate,
/// rewrite coordinate 2, then coordinate 1, then coordinate 3.
///
/// When `start` has the smaller first coordinate the endpoints swap roles
/// first, so the returned path may run from `goal` to `start`; the graph is
/// undirected, so either direction certifies connectivity.
pub fn canonical_path(
    a: &CoeffMatrix,
    b: &RhsVector,
    d: DomainBound,
    start: &Point,
    goal: &Point,
) -> Result<CanonicalPath> {
    if a.sign_pattern() != canonical_sign_pattern() {
        return Err(Error::input(
            "matrix sign pattern must equal the canonical 4x3 pattern exactly",
        ));
    }
    if !is_feasible(a, b, d, start)? {
        return Err(Error::input("start point is not feasible"));
    }
    if !is_feasible(a, b, d, goal)? {
        return Err(Error::input("goal point is not feasible"));
    }
    let (s, t) = if start[0] >= goal[0] {
        (start.clone(), goal.clone())
    } else {
        (goal.clone(), start.clone())
    };
    let u1 = vec![s[0], t[1], s[2]];
    let u2 = vec![t[0], t[1], s[2]];
    for (name, point) in [("first", &u1), ("second", &u2)] {
        if !is_feasible(a, b, d, point)? {
            return Err(Error::defect(format!(
                "{name} interior path point is infeasible; the canonical path argument is violated"
            )));
        }
    }
    Ok(CanonicalPath {
        points: vec![s, u1, u2, t],
    })
}
