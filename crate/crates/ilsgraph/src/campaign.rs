//! Verification campaigns: seeded or exhaustive matrix generation plus a
//! registry of named properties, each tying one of the connectivity claims
//! to an executable check with counterexample reporting.

use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::canonical::canonical_path;
use crate::canonical::{canonical_sign_pattern, match_canonical, not_eliminable_anywhere};
use crate::elimination::{
    exhaustive_ordering_oracle, find_elimination_ordering, is_elimination_ordering,
};
use crate::error::{Error, Result};
use crate::graph::{self, enumerate_feasible_guarded, is_feasible, DEFAULT_ENUMERATION_GUARD};
use crate::matrix::{CoeffMatrix, DomainBound, Point, RhsVector};
use crate::pattern::{complement_is_clean, find_minimal_pattern};
use crate::rational::Rational;
use crate::witness::{
    analytic_witness_guarded, build_bf, build_pq, cycle_submatrix, search_witness_detailed,
    validate_witness_guarded, DEFAULT_SEARCH_GUARD,
};

/// Default ceiling on the number of matrices an exhaustive campaign may
/// enumerate.
pub const DEFAULT_EXHAUSTIVE_GUARD: u64 = 1_000_000;

const CHUNK: usize = 2_048;

/// The registered campaign properties.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Property {
    /// A planted sign cycle always admits a disconnecting right-hand side,
    /// and the analytic construction succeeds whenever the complement is
    /// clean.
    WitnessFromPattern,
    /// Pattern-free matrices of the covered shapes survive the complete
    /// right-hand-side scan.
    ConnectedWithoutPattern,
    /// A forbidden pattern rules out an elimination ordering.
    PatternForbidsOrdering,
    /// On small shapes, no elimination ordering exists exactly when a
    /// forbidden pattern does.
    OrderingPatternEquivalence,
    /// The greedy reduction finds an ordering exactly when the factorial
    /// oracle does.
    GreedyMatchesOracle,
    /// Every 4x3 matrix that is pattern-free and nowhere eliminable matches
    /// the canonical sign pattern, and is universally connected.
    CanonicalFormMatch,
    /// The explicit three-hop path between feasible points of a canonical
    /// 4x3 instance stays feasible.
    CanonicalPathFeasible,
    /// The slack identities of the cycle construction and the strict
    /// infeasibility of the isolated point's neighbors.
    CycleSlackIdentities,
}

impl Property {
    pub const ALL: [Property; 8] = [
        Property::WitnessFromPattern,
        Property::ConnectedWithoutPattern,
        Property::PatternForbidsOrdering,
        Property::OrderingPatternEquivalence,
        Property::GreedyMatchesOracle,
        Property::CanonicalFormMatch,
        Property::CanonicalPathFeasible,
        Property::CycleSlackIdentities,
    ];

    pub fn token(self) -> &'static str {
        match self {
            Property::WitnessFromPattern => "thm1-witness",
            Property::ConnectedWithoutPattern => "thm2-connected",
            Property::PatternForbidsOrdering => "lemma-fp-no-eo",
            Property::OrderingPatternEquivalence => "lemma-shape-equiv",
            Property::GreedyMatchesOracle => "greedy-oracle",
            Property::CanonicalFormMatch => "lemma5-canonical",
            Property::CanonicalPathFeasible => "lemma6-path",
            Property::CycleSlackIdentities => "pq-slack",
        }
    }

    pub fn from_token(token: &str) -> Result<Property> {
        Property::ALL
            .into_iter()
            .find(|p| p.token() == token)
            .ok_or_else(|| {
                let known: Vec<&str> = Property::ALL.iter().map(|p| p.token()).collect();
                Error::input(format!(
                    "unknown property {token:?}; expected one of {}",
                    known.join(", ")
                ))
            })
    }
}

impl Serialize for Property {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(self.token())
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Guards {
    pub enumeration: u64,
    pub search: u64,
    pub exhaustive: u64,
}

impl Default for Guards {
    fn default() -> Self {
        Guards {
            enumeration: DEFAULT_ENUMERATION_GUARD,
            search: DEFAULT_SEARCH_GUARD,
            exhaustive: DEFAULT_EXHAUSTIVE_GUARD,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum GenerationMode {
    /// Enumerate every matrix over the entry range, optionally reduced to
    /// column-sign representatives (first nonzero entry of each column
    /// positive).
    Exhaustive { column_normalized: bool },
    /// Seeded uniform sampling.
    Sampled { trials: u64 },
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CampaignConfig {
    /// Matrix shape; `None` lets shape-flexible generators pick one per
    /// trial.
    pub shape: Option<(usize, usize)>,
    pub entry_range: (i64, i64),
    pub d_list: Vec<u32>,
    pub mode: GenerationMode,
    pub seed: u64,
    pub guards: Guards,
    pub keep_going: bool,
}

impl Default for CampaignConfig {
    fn default() -> Self {
        CampaignConfig {
            shape: None,
            entry_range: (-1, 1),
            d_list: vec![1],
            mode: GenerationMode::Sampled { trials: 500 },
            seed: 42,
            guards: Guards::default(),
            keep_going: false,
        }
    }
}

impl CampaignConfig {
    pub fn exhaustive(shape: (usize, usize)) -> Self {
        CampaignConfig {
            shape: Some(shape),
            mode: GenerationMode::Exhaustive {
                column_normalized: false,
            },
            ..CampaignConfig::default()
        }
    }

    pub fn sampled(shape: Option<(usize, usize)>, trials: u64, seed: u64) -> Self {
        CampaignConfig {
            shape,
            mode: GenerationMode::Sampled { trials },
            seed,
            ..CampaignConfig::default()
        }
    }

    pub fn with_entry_range(mut self, lo: i64, hi: i64) -> Self {
        self.entry_range = (lo, hi);
        self
    }

    pub fn with_d_list(mut self, d_list: &[u32]) -> Self {
        self.d_list = d_list.to_vec();
        self
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Counterexample {
    pub matrix: CoeffMatrix,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b: Option<RhsVector>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<u32>,
    pub detail: String,
}

impl Counterexample {
    fn plain(matrix: &CoeffMatrix, detail: impl Into<String>) -> Self {
        Counterexample {
            matrix: matrix.clone(),
            b: None,
            d: None,
            detail: detail.into(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CampaignReport {
    pub property: Property,
    pub config: CampaignConfig,
    pub checked: u64,
    pub pass_count: u64,
    pub fail_count: u64,
    pub first_counterexample: Option<Counterexample>,
    /// Wall-clock time; excluded from reproducibility comparisons.
    pub runtime_millis: u128,
}

impl CampaignReport {
    pub fn passed(&self) -> bool {
        self.fail_count == 0
    }
}

/// Base matrix stream: exhaustive enumeration over the entry range, or
/// seeded uniform sampling. Deterministic given the configuration.
pub fn generate_matrices(
    cfg: &CampaignConfig,
) -> Result<Box<dyn Iterator<Item = CoeffMatrix> + Send>> {
    let (rows, cols) = cfg
        .shape
        .ok_or_else(|| Error::input("matrix generation requires a shape"))?;
    if rows == 0 || cols == 0 {
        return Err(Error::input("matrix shape must be positive"));
    }
    let (lo, hi) = cfg.entry_range;
    if lo > hi {
        return Err(Error::input("entry range is empty"));
    }
    match cfg.mode {
        GenerationMode::Exhaustive { column_normalized } => {
            if column_normalized {
                exhaustive_column_normalized(rows, cols, (lo, hi), cfg.guards.exhaustive)
            } else {
                exhaustive_plain(rows, cols, (lo, hi), cfg.guards.exhaustive)
            }
        }
        GenerationMode::Sampled { trials } => {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            let range = (lo, hi);
            Ok(Box::new(
                (0..trials).map(move |_| sample_matrix(&mut rng, rows, cols, range)),
            ))
        }
    }
}

fn exhaustive_plain(
    rows: usize,
    cols: usize,
    (lo, hi): (i64, i64),
    guard: u64,
) -> Result<Box<dyn Iterator<Item = CoeffMatrix> + Send>> {
    let values: Vec<i64> = (lo..=hi).collect();
    let cells = rows * cols;
    let total = checked_power(values.len() as u128, cells, guard)?;
    Ok(Box::new((0..total).map(move |index| {
        let mut remaining = index;
        let mut entries = Vec::with_capacity(cells);
        for _ in 0..cells {
            entries.push(Rational::integer(
                values[(remaining % values.len() as u64) as usize],
            ));
            remaining /= values.len() as u64;
        }
        CoeffMatrix::new(rows, cols, entries).expect("generated shape is valid")
    })))
}

/// One representative per column-sign-flip orbit: enumerate only columns
/// whose first nonzero entry is positive (or which are entirely zero).
fn exhaustive_column_normalized(
    rows: usize,
    cols: usize,
    (lo, hi): (i64, i64),
    guard: u64,
) -> Result<Box<dyn Iterator<Item = CoeffMatrix> + Send>> {
    let values: Vec<i64> = (lo..=hi).collect();
    let mut columns: Vec<Vec<i64>> = Vec::new();
    let per_column = checked_power(values.len() as u128, rows, guard)?;
    for index in 0..per_column {
        let mut remaining = index;
        let mut column = Vec::with_capacity(rows);
        for _ in 0..rows {
            column.push(values[(remaining % values.len() as u64) as usize]);
            remaining /= values.len() as u64;
        }
        let first_nonzero = column.iter().find(|&&v| v != 0);
        if first_nonzero.is_none_or(|&v| v > 0) {
            columns.push(column);
        }
    }
    let total = checked_power(columns.len() as u128, cols, guard)?;
    Ok(Box::new((0..total).map(move |index| {
        let mut remaining = index;
        let mut chosen = Vec::with_capacity(cols);
        for _ in 0..cols {
            chosen.push(&columns[(remaining % columns.len() as u64) as usize]);
            remaining /= columns.len() as u64;
        }
        let mut entries = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for column in &chosen {
                entries.push(Rational::integer(column[r]));
            }
        }
        CoeffMatrix::new(rows, cols, entries).expect("generated shape is valid")
    })))
}

fn checked_power(base: u128, exponent: usize, guard: u64) -> Result<u64> {
    let mut total: u128 = 1;
    for _ in 0..exponent {
        total = total.saturating_mul(base);
        if total > u128::from(guard) {
            return Err(Error::capability(format!(
                "exhaustive enumeration would exceed the guard of {guard} matrices"
            )));
        }
    }
    Ok(total as u64)
}

fn sample_matrix(
    rng: &mut ChaCha8Rng,
    rows: usize,
    cols: usize,
    (lo, hi): (i64, i64),
) -> CoeffMatrix {
    let entries = (0..rows * cols)
        .map(|_| Rational::integer(rng.random_range(lo..=hi)))
        .collect();
    CoeffMatrix::new(rows, cols, entries).expect("sampled shape is valid")
}

/// Sample a matrix containing a planted sign cycle: the cycle block is
/// written explicitly (zeros off the cycle inside the block), everything
/// outside the block is uniform.
fn sample_planted(
    rng: &mut ChaCha8Rng,
    shape: Option<(usize, usize)>,
    (lo, hi): (i64, i64),
) -> CoeffMatrix {
    let (rows, cols) =
        shape.unwrap_or_else(|| (rng.random_range(2..=4usize), rng.random_range(2..=4usize)));
    let max_magnitude = lo.unsigned_abs().max(hi.unsigned_abs()).max(1) as i64;
    let lambda_cap = rows.min(cols).min(4);
    let lambda = rng.random_range(2..=lambda_cap.max(2));

    let mut row_pool: Vec<usize> = (0..rows).collect();
    row_pool.shuffle(rng);
    let cycle_rows = &row_pool[..lambda];
    let mut col_pool: Vec<usize> = (0..cols).collect();
    col_pool.shuffle(rng);
    let cycle_cols = &col_pool[..lambda];

    let mut grid: Vec<Vec<i64>> = (0..rows)
        .map(|_| (0..cols).map(|_| rng.random_range(lo..=hi)).collect())
        .collect();
    for &i in cycle_rows {
        for &j in cycle_cols {
            grid[i][j] = 0;
        }
    }
    for l in 0..lambda {
        let sign = if rng.random_bool(0.5) { 1 } else { -1 };
        let here = cycle_rows[l];
        let next = cycle_rows[(l + 1) % lambda];
        let col = cycle_cols[l];
        grid[here][col] = sign * rng.random_range(1..=max_magnitude);
        grid[next][col] = -sign * rng.random_range(1..=max_magnitude);
    }
    let rows_ref: Vec<&[i64]> = grid.iter().map(|r| r.as_slice()).collect();
    CoeffMatrix::from_integer_rows(&rows_ref).expect("planted shape is valid")
}

/// Canonical 4x3 instance with random magnitudes, a right-hand side drawn
/// from the attainable row values, and two random feasible points.
struct PathInstance {
    matrix: CoeffMatrix,
    rhs: RhsVector,
    d: u32,
    start: Point,
    goal: Point,
}

fn sample_path_instance(
    rng: &mut ChaCha8Rng,
    (lo, hi): (i64, i64),
    d_list: &[u32],
    guards: &Guards,
) -> Result<PathInstance> {
    let pattern = canonical_sign_pattern();
    let max_magnitude = lo.unsigned_abs().max(hi.unsigned_abs()).max(1) as i64;
    for _ in 0..10_000 {
        let d_value = d_list[rng.random_range(0..d_list.len())];
        let d = DomainBound::new(d_value)?;
        let mut grid = Vec::with_capacity(4);
        for i in 0..4 {
            let mut row = Vec::with_capacity(3);
            for j in 0..3 {
                let magnitude = rng.random_range(1..=max_magnitude);
                row.push(i64::from(pattern.get(i, j)) * magnitude);
            }
            grid.push(row);
        }
        let rows_ref: Vec<&[i64]> = grid.iter().map(|r| r.as_slice()).collect();
        let matrix = CoeffMatrix::from_integer_rows(&rows_ref)?;

        let all_points = enumerate_feasible_guarded(
            &matrix,
            &RhsVector::new(vec![Rational::integer(i64::MIN / 4); 4]),
            d,
            guards.enumeration,
        )?;
        let rhs = RhsVector::new(
            (0..4)
                .map(|i| {
                    let mut values: Vec<Rational> = all_points
                        .points()
                        .iter()
                        .map(|x| graph::row_value(&matrix, i, x))
                        .collect();
                    values.sort();
                    values.dedup();
                    values[rng.random_range(0..values.len())].clone()
                })
                .collect(),
        );
        let feasible = enumerate_feasible_guarded(&matrix, &rhs, d, guards.enumeration)?;
        if feasible.len() < 2 {
            continue;
        }
        let start = feasible.points()[rng.random_range(0..feasible.len())].clone();
        let goal = feasible.points()[rng.random_range(0..feasible.len())].clone();
        return Ok(PathInstance {
            matrix,
            rhs,
            d: d_value,
            start,
            goal,
        });
    }
    Err(Error::capability(
        "could not sample a canonical path instance with two feasible points",
    ))
}

/// Run a registered property over generated instances and report pass/fail
/// counts with the first counterexample, if any.
pub fn run_campaign(property: Property, cfg: &CampaignConfig) -> Result<CampaignReport> {
    let started = Instant::now();
    if cfg.d_list.is_empty() || cfg.d_list.contains(&0) {
        return Err(Error::input("d list must contain positive bounds"));
    }
    let (checked, fail_count, first_counterexample) = match property {
        Property::PatternForbidsOrdering => run_matrix_stream(cfg, |a| {
            Ok(check_pattern_forbids_ordering(a)?.map(|d| Counterexample::plain(a, d)))
        })?,
        Property::OrderingPatternEquivalence => run_matrix_stream(cfg, |a| {
            Ok(check_ordering_pattern_equivalence(a)?.map(|d| Counterexample::plain(a, d)))
        })?,
        Property::GreedyMatchesOracle => run_matrix_stream(cfg, |a| {
            Ok(check_greedy_matches_oracle(a)?.map(|d| Counterexample::plain(a, d)))
        })?,
        Property::ConnectedWithoutPattern => {
            let (rows, cols) = require_shape(cfg)?;
            match cfg.mode {
                GenerationMode::Sampled { trials } => {
                    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
                    let items = collect_filtered(
                        trials,
                        || sample_matrix(&mut rng, rows, cols, cfg.entry_range),
                        |a| Ok(find_minimal_pattern(a)?.is_none()),
                    )?;
                    check_items(&items, cfg.keep_going, |a| {
                        check_connected_without_pattern(a, cfg)
                    })?
                }
                GenerationMode::Exhaustive { .. } => {
                    let stream = generate_matrices(cfg)?;
                    run_stream_filtered(
                        stream,
                        cfg.keep_going,
                        |a| Ok(find_minimal_pattern(a)?.is_none()),
                        |a| check_connected_without_pattern(a, cfg),
                    )?
                }
            }
        }
        Property::WitnessFromPattern => {
            let trials = sampled_trials(cfg)?;
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            let items: Vec<CoeffMatrix> = (0..trials)
                .map(|_| sample_planted(&mut rng, cfg.shape, cfg.entry_range))
                .collect();
            check_items(&items, cfg.keep_going, |a| {
                check_witness_from_pattern(a, cfg)
            })?
        }
        Property::CycleSlackIdentities => {
            let trials = sampled_trials(cfg)?;
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            let items: Vec<CoeffMatrix> = (0..trials)
                .map(|_| sample_planted(&mut rng, cfg.shape, cfg.entry_range))
                .collect();
            check_items(&items, cfg.keep_going, |a| check_cycle_slack(a, cfg))?
        }
        Property::CanonicalFormMatch => {
            if let Some(shape) = cfg.shape {
                if shape != (4, 3) {
                    return Err(Error::input(
                        "the canonical-form property is about 4x3 matrices",
                    ));
                }
            }
            match cfg.mode {
                GenerationMode::Exhaustive { .. } => {
                    let mut stream_cfg = cfg.clone();
                    stream_cfg.shape = Some((4, 3));
                    let stream = generate_matrices(&stream_cfg)?;
                    run_stream_filtered(stream, cfg.keep_going, is_canonical_candidate, |a| {
                        check_canonical_form(a, cfg)
                    })?
                }
                GenerationMode::Sampled { trials } => {
                    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
                    let items = collect_filtered(
                        trials,
                        || sample_matrix(&mut rng, 4, 3, cfg.entry_range),
                        is_canonical_candidate,
                    )?;
                    check_items(&items, cfg.keep_going, |a| check_canonical_form(a, cfg))?
                }
            }
        }
        Property::CanonicalPathFeasible => {
            let trials = sampled_trials(cfg)?;
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            let items: Vec<PathInstance> = (0..trials)
                .map(|_| sample_path_instance(&mut rng, cfg.entry_range, &cfg.d_list, &cfg.guards))
                .collect::<Result<_>>()?;
            check_items(&items, cfg.keep_going, check_canonical_path)?
        }
    };
    Ok(CampaignReport {
        property,
        config: cfg.clone(),
        checked,
        pass_count: checked - fail_count,
        fail_count,
        first_counterexample,
        runtime_millis: started.elapsed().as_millis(),
    })
}

fn require_shape(cfg: &CampaignConfig) -> Result<(usize, usize)> {
    cfg.shape
        .ok_or_else(|| Error::input("this property requires an explicit shape"))
}

fn sampled_trials(cfg: &CampaignConfig) -> Result<u64> {
    match cfg.mode {
        GenerationMode::Sampled { trials } => Ok(trials),
        GenerationMode::Exhaustive { .. } => Err(Error::input(
            "this property generates its instances and supports sampled mode only",
        )),
    }
}

/// Rejection-sample until `count` matrices pass the property's filter.
fn collect_filtered(
    count: u64,
    mut sample: impl FnMut() -> CoeffMatrix,
    filter: impl Fn(&CoeffMatrix) -> Result<bool>,
) -> Result<Vec<CoeffMatrix>> {
    let mut items = Vec::with_capacity(count as usize);
    let budget = count.saturating_mul(100_000).max(1_000_000);
    let mut attempts = 0u64;
    while (items.len() as u64) < count {
        attempts += 1;
        if attempts > budget {
            return Err(Error::capability(format!(
                "rejection sampling exhausted {budget} attempts before finding {count} instances"
            )));
        }
        let candidate = sample();
        if filter(&candidate)? {
            items.push(candidate);
        }
    }
    Ok(items)
}

fn is_canonical_candidate(a: &CoeffMatrix) -> Result<bool> {
    Ok(find_minimal_pattern(a)?.is_none() && not_eliminable_anywhere(a))
}

enum Outcome {
    Skipped,
    Passed,
    Failed(Counterexample),
}

/// Parallel check over a materialized batch; the reported counterexample is
/// the one with the smallest generation index regardless of thread timing.
fn check_items<T: Sync>(
    items: &[T],
    keep_going: bool,
    check: impl Fn(&T) -> Result<Option<Counterexample>> + Sync,
) -> Result<(u64, u64, Option<Counterexample>)> {
    let mut checked = 0u64;
    let mut fails = 0u64;
    let mut first: Option<(usize, Counterexample)> = None;
    for (chunk_index, chunk) in items.chunks(CHUNK).enumerate() {
        let results: Vec<Option<Counterexample>> =
            chunk.par_iter().map(&check).collect::<Result<_>>()?;
        checked += chunk.len() as u64;
        for (offset, outcome) in results.into_iter().enumerate() {
            if let Some(cex) = outcome {
                fails += 1;
                let index = chunk_index * CHUNK + offset;
                if first.as_ref().is_none_or(|(best, _)| index < *best) {
                    first = Some((index, cex));
                }
            }
        }
        if fails > 0 && !keep_going {
            break;
        }
    }
    Ok((checked, fails, first.map(|(_, cex)| cex)))
}

/// Streaming variant for exhaustive generation: instances failing the
/// filter are skipped and not counted.
fn run_stream_filtered(
    mut stream: Box<dyn Iterator<Item = CoeffMatrix> + Send>,
    keep_going: bool,
    filter: impl Fn(&CoeffMatrix) -> Result<bool> + Sync,
    check: impl Fn(&CoeffMatrix) -> Result<Option<Counterexample>> + Sync,
) -> Result<(u64, u64, Option<Counterexample>)> {
    let mut checked = 0u64;
    let mut fails = 0u64;
    let mut first: Option<Counterexample> = None;
    loop {
        let chunk: Vec<CoeffMatrix> = stream.by_ref().take(CHUNK).collect();
        if chunk.is_empty() {
            break;
        }
        let results: Vec<Outcome> = chunk
            .par_iter()
            .map(|a| {
                if !filter(a)? {
                    return Ok(Outcome::Skipped);
                }
                Ok(match check(a)? {
                    None => Outcome::Passed,
                    Some(cex) => Outcome::Failed(cex),
                })
            })
            .collect::<Result<_>>()?;
        for outcome in results {
            match outcome {
                Outcome::Skipped => {}
                Outcome::Passed => checked += 1,
                Outcome::Failed(cex) => {
                    checked += 1;
                    fails += 1;
                    if first.is_none() {
                        first = Some(cex);
                    }
                }
            }
        }
        if fails > 0 && !keep_going {
            break;
        }
    }
    Ok((checked, fails, first))
}

fn run_matrix_stream(
    cfg: &CampaignConfig,
    check: impl Fn(&CoeffMatrix) -> Result<Option<Counterexample>> + Sync,
) -> Result<(u64, u64, Option<Counterexample>)> {
    require_shape(cfg)?;
    let stream = generate_matrices(cfg)?;
    run_stream_filtered(stream, cfg.keep_going, |_| Ok(true), check)
}

fn check_pattern_forbids_ordering(a: &CoeffMatrix) -> Result<Option<String>> {
    if find_minimal_pattern(a)?.is_some() && find_elimination_ordering(a).is_some() {
        return Ok(Some(
            "matrix has both a forbidden pattern and an elimination ordering".to_string(),
        ));
    }
    Ok(None)
}

fn check_ordering_pattern_equivalence(a: &CoeffMatrix) -> Result<Option<String>> {
    let has_pattern = find_minimal_pattern(a)?.is_some();
    let has_ordering = find_elimination_ordering(a).is_some();
    if has_pattern == has_ordering {
        return Ok(Some(format!(
            "equivalence fails: pattern={has_pattern}, ordering={has_ordering}"
        )));
    }
    Ok(None)
}

fn check_greedy_matches_oracle(a: &CoeffMatrix) -> Result<Option<String>> {
    let greedy = find_elimination_ordering(a);
    let oracle = exhaustive_ordering_oracle(a)?;
    if greedy.is_some() != oracle.is_some() {
        return Ok(Some(format!(
            "greedy found {} but oracle found {}",
            greedy.is_some(),
            oracle.is_some()
        )));
    }
    if let Some(ordering) = greedy {
        if !is_elimination_ordering(a, ordering.columns()) {
            return Ok(Some(
                "greedy ordering fails the definition check".to_string(),
            ));
        }
    }
    Ok(None)
}

fn check_connected_without_pattern(
    a: &CoeffMatrix,
    cfg: &CampaignConfig,
) -> Result<Option<Counterexample>> {
    for &d_value in &cfg.d_list {
        let d = DomainBound::new(d_value)?;
        let (witness, _grid) =
            search_witness_detailed(a, d, cfg.guards.enumeration, cfg.guards.search)?;
        if let Some(witness) = witness {
            return Ok(Some(Counterexample {
                matrix: a.clone(),
                b: Some(witness.b),
                d: Some(d_value),
                detail: "pattern-free matrix has a disconnecting right-hand side".to_string(),
            }));
        }
    }
    Ok(None)
}

fn check_witness_from_pattern(
    a: &CoeffMatrix,
    cfg: &CampaignConfig,
) -> Result<Option<Counterexample>> {
    let Some(fp) = find_minimal_pattern(a)? else {
        return Ok(Some(Counterexample::plain(
            a,
            "generator failed to plant a forbidden pattern",
        )));
    };
    let clean = complement_is_clean(a, &fp)?;
    for &d_value in &cfg.d_list {
        let d = DomainBound::new(d_value)?;
        let (found, _grid) =
            search_witness_detailed(a, d, cfg.guards.enumeration, cfg.guards.search)?;
        let Some(found) = found else {
            return Ok(Some(Counterexample {
                matrix: a.clone(),
                b: None,
                d: Some(d_value),
                detail: "grid search found no disconnecting right-hand side".to_string(),
            }));
        };
        if !validate_witness_guarded(a, d, &found, cfg.guards.enumeration)? {
            return Ok(Some(Counterexample {
                matrix: a.clone(),
                b: Some(found.b),
                d: Some(d_value),
                detail: "search witness failed enumeration validation".to_string(),
            }));
        }
        if clean {
            match analytic_witness_guarded(a, d, cfg.guards.enumeration) {
                Ok(Some(_)) => {}
                Ok(None) => {
                    return Ok(Some(Counterexample {
                        matrix: a.clone(),
                        b: None,
                        d: Some(d_value),
                        detail: "analytic route declined a clean-complement pattern".to_string(),
                    }))
                }
                Err(Error::Defect(msg)) => {
                    return Ok(Some(Counterexample {
                        matrix: a.clone(),
                        b: None,
                        d: Some(d_value),
                        detail: msg,
                    }))
                }
                Err(other) => return Err(other),
            }
        }
    }
    Ok(None)
}

fn check_cycle_slack(a: &CoeffMatrix, cfg: &CampaignConfig) -> Result<Option<Counterexample>> {
    let Some(fp) = find_minimal_pattern(a)? else {
        return Ok(Some(Counterexample::plain(
            a,
            "generator failed to plant a forbidden pattern",
        )));
    };
    // Minimal patterns with three or more rows always have a sign-coherent
    // complement; only size-two patterns may be dirty.
    if fp.lambda() >= 3 && !complement_is_clean(a, &fp)? {
        return Ok(Some(Counterexample::plain(
            a,
            "minimal pattern of size >= 3 has a sign-incoherent complement",
        )));
    }
    let af = cycle_submatrix(a, &fp)?;
    let lambda = fp.lambda();
    for &d_value in &cfg.d_list {
        let d = DomainBound::new(d_value)?;
        let bf = build_bf(&af, d)?;
        let (p, q) = build_pq(&af, d)?;
        for s in 0..lambda {
            let prev = (s + lambda - 1) % lambda;
            let diag = af.get(s, s).abs();
            let off = af.get(s, prev).abs();
            let slack_p = &graph::row_value(&af, s, &p) - bf.get(s);
            let slack_q = &graph::row_value(&af, s, &q) - bf.get(s);
            let (expected_p, expected_q) = if diag >= off {
                (&diag - &off, Rational::zero())
            } else {
                (Rational::zero(), &off - &diag)
            };
            if slack_p != expected_p || slack_q != expected_q {
                return Ok(Some(Counterexample {
                    matrix: a.clone(),
                    b: Some(bf),
                    d: Some(d_value),
                    detail: format!(
                        "slack mismatch at cycle row {}: got ({slack_p}, {slack_q}), expected ({expected_p}, {expected_q})",
                        s + 1
                    ),
                }));
            }
            if slack_p.sgn() < 0 || slack_q.sgn() < 0 {
                return Ok(Some(Counterexample {
                    matrix: a.clone(),
                    b: Some(bf),
                    d: Some(d_value),
                    detail: format!("negative slack at cycle row {}", s + 1),
                }));
            }
        }
        for z in 0..lambda {
            for value in 0..=d.value() {
                if value == p[z] {
                    continue;
                }
                let mut y = p.clone();
                y[z] = value;
                if graph::row_value(&af, z, &y) >= *bf.get(z) {
                    return Ok(Some(Counterexample {
                        matrix: a.clone(),
                        b: Some(bf),
                        d: Some(d_value),
                        detail: format!(
                            "neighbor of the isolated point is not strictly infeasible at row {}",
                            z + 1
                        ),
                    }));
                }
            }
        }
    }
    Ok(None)
}

fn check_canonical_form(a: &CoeffMatrix, cfg: &CampaignConfig) -> Result<Option<Counterexample>> {
    let matched = match_canonical(&a.sign_pattern())?;
    let Some(matched) = matched else {
        return Ok(Some(Counterexample::plain(
            a,
            "pattern-free, nowhere-eliminable 4x3 matrix does not match the canonical pattern",
        )));
    };
    let mapped = a
        .sign_pattern()
        .permute(&matched.row_perm, &matched.col_perm)?;
    if mapped != canonical_sign_pattern() {
        return Ok(Some(Counterexample::plain(
            a,
            "reported permutations do not map onto the canonical pattern",
        )));
    }
    for &d_value in &cfg.d_list {
        let d = DomainBound::new(d_value)?;
        let verdict = crate::witness::decide_universal_guarded(
            a,
            d,
            cfg.guards.enumeration,
            cfg.guards.search,
        )?;
        if verdict.verdict != crate::witness::Universality::UniversallyConnected {
            return Ok(Some(Counterexample {
                matrix: a.clone(),
                b: verdict.witness.map(|w| w.b),
                d: Some(d_value),
                detail: "canonical matrix is not universally connected".to_string(),
            }));
        }
    }
    Ok(None)
}

fn check_canonical_path(instance: &PathInstance) -> Result<Option<Counterexample>> {
    let d = DomainBound::new(instance.d)?;
    let path = match canonical_path(
        &instance.matrix,
        &instance.rhs,
        d,
        &instance.start,
        &instance.goal,
    ) {
        Ok(path) => path,
        Err(Error::Defect(msg)) => {
            return Ok(Some(Counterexample {
                matrix: instance.matrix.clone(),
                b: Some(instance.rhs.clone()),
                d: Some(instance.d),
                detail: msg,
            }))
        }
        Err(other) => return Err(other),
    };
    for point in &path.points {
        if !is_feasible(&instance.matrix, &instance.rhs, d, point)? {
            return Ok(Some(Counterexample {
                matrix: instance.matrix.clone(),
                b: Some(instance.rhs.clone()),
                d: Some(instance.d),
                detail: format!("path point {point:?} is infeasible"),
            }));
        }
    }
    for window in path.points.windows(2) {
        let differing = window[0]
            .iter()
            .zip(&window[1])
            .filter(|(x, y)| x != y)
            .count();
        if differing > 1 {
            return Ok(Some(Counterexample {
                matrix: instance.matrix.clone(),
                b: Some(instance.rhs.clone()),
                d: Some(instance.d),
                detail: "consecutive path points differ in more than one coordinate".to_string(),
            }));
        }
    }
    Ok(None)
}
