//! JSON interfaces: instance files, point parsing, and the aggregated
//! structure report behind the `analyze` command. All indices in external
//! JSON are 1-based.

use std::path::Path;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::elimination::{
    find_elimination_ordering, greedy_reduce, EliminationOrdering, ReductionResult,
};
use crate::error::{Error, Result};
use crate::matrix::{CoeffMatrix, Point, RhsVector, SignPattern};
use crate::pattern::{complement_is_clean, find_minimal_pattern, ForbiddenPattern};

pub fn matrix_from_json(text: &str) -> Result<CoeffMatrix> {
    serde_json::from_str(text).map_err(|e| Error::input(format!("matrix JSON: {e}")))
}

pub fn rhs_from_json(text: &str) -> Result<RhsVector> {
    serde_json::from_str(text).map_err(|e| Error::input(format!("vector JSON: {e}")))
}

pub fn load_matrix(path: &Path) -> Result<CoeffMatrix> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::input(format!("cannot read {}: {e}", path.display())))?;
    matrix_from_json(&text)
}

pub fn load_rhs(path: &Path) -> Result<RhsVector> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::input(format!("cannot read {}: {e}", path.display())))?;
    rhs_from_json(&text)
}

/// Parse a point given as comma-separated values, e.g. `"1,0,2"`.
pub fn parse_point(text: &str) -> Result<Point> {
    text.split(',')
        .map(|part| {
            part.trim()
                .parse::<u32>()
                .map_err(|_| Error::input(format!("malformed point coordinate {part:?}")))
        })
        .collect()
}

/// Combined sign-structure report: sign pattern, greedy reduction, the
/// elimination ordering when one exists, and the minimal forbidden pattern
/// when one exists.
#[derive(Debug, Clone)]
pub struct StructureReport {
    pub rows: usize,
    pub cols: usize,
    pub sign_pattern: SignPattern,
    pub reduction: ReductionResult,
    pub elimination_ordering: Option<EliminationOrdering>,
    pub forbidden_pattern: Option<(ForbiddenPattern, bool)>,
}

impl Serialize for StructureReport {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        struct PatternWithComplement<'a>(&'a ForbiddenPattern, bool);
        impl Serialize for PatternWithComplement<'_> {
            fn serialize<S: Serializer>(
                &self,
                serializer: S,
            ) -> std::result::Result<S::Ok, S::Error> {
                let mut state = serializer.serialize_struct("ForbiddenPattern", 4)?;
                let rows: Vec<usize> = self.0.row_order().iter().map(|&i| i + 1).collect();
                let cols: Vec<usize> = self.0.col_order().iter().map(|&j| j + 1).collect();
                state.serialize_field("rowOrder", &rows)?;
                state.serialize_field("colOrder", &cols)?;
                state.serialize_field("lambda", &self.0.lambda())?;
                state.serialize_field("complementClean", &self.1)?;
                state.end()
            }
        }

        let mut state = serializer.serialize_struct("StructureReport", 6)?;
        state.serialize_field("rows", &self.rows)?;
        state.serialize_field("cols", &self.cols)?;
        state.serialize_field("signPattern", &self.sign_pattern)?;
        state.serialize_field("reduction", &self.reduction)?;
        state.serialize_field("eliminationOrdering", &self.elimination_ordering)?;
        state.serialize_field(
            "forbiddenPattern",
            &self
                .forbidden_pattern
                .as_ref()
                .map(|(fp, clean)| PatternWithComplement(fp, *clean)),
        )?;
        state.end()
    }
}

/// Run the sign-structure analyses behind the `analyze` command.
pub fn analyze(a: &CoeffMatrix) -> Result<StructureReport> {
    let reduction = greedy_reduce(a);
    let elimination_ordering = find_elimination_ordering(a);
    let forbidden_pattern = match find_minimal_pattern(a)? {
        Some(fp) => {
            let clean = complement_is_clean(a, &fp)?;
            Some((fp, clean))
        }
        None => None,
    };
    Ok(StructureReport {
        rows: a.rows(),
        cols: a.cols(),
        sign_pattern: a.sign_pattern(),
        reduction,
        elimination_ordering,
        forbidden_pattern,
    })
}
