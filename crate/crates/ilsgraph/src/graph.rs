//! Feasible-set enumeration and solution-graph connectivity.
//!
//! The solution graph has the feasible points as vertices and an edge between
//! every two points at Hamming distance exactly one, i.e. points differing in
//! a single coordinate by any amount.

use std::collections::HashMap;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::matrix::{CoeffMatrix, DomainBound, Point, RhsVector};
use crate::rational::Rational;

/// Default ceiling on the number of lattice points enumerated per instance.
pub const DEFAULT_ENUMERATION_GUARD: u64 = 10_000_000;

/// Lexicographically sorted duplicate-free set of points.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FeasibleSet {
    points: Vec<Point>,
}

impl FeasibleSet {
    /// Build from arbitrary points; sorts and removes duplicates.
    pub fn from_points(mut points: Vec<Point>) -> Self {
        points.sort();
        points.dedup();
        FeasibleSet { points }
    }

    pub(crate) fn from_sorted(points: Vec<Point>) -> Self {
        debug_assert!(points.windows(2).all(|w| w[0] < w[1]));
        FeasibleSet { points }
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

impl Serialize for FeasibleSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.points.serialize(serializer)
    }
}

/// Connectivity verdict. The empty graph counts as connected; `Empty` only
/// refines the report for callers that care about feasibility itself.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Connected,
    Disconnected,
    Empty,
}

impl Verdict {
    /// Everything except an explicit disconnection counts as connected.
    pub fn counts_as_connected(self) -> bool {
        !matches!(self, Verdict::Disconnected)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Connected => "connected",
            Verdict::Disconnected => "disconnected",
            Verdict::Empty => "empty",
        }
    }
}

impl Serialize for Verdict {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(self.as_str())
    }
}

/// Full connectivity report: the feasible points, a component label per
/// point, and a certificate pair when the graph is disconnected.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConnectivityReport {
    pub feasible: FeasibleSet,
    pub component_labels: Vec<usize>,
    pub component_count: usize,
    pub verdict: Verdict,
    pub certificate: Option<(Point, Point)>,
}

impl ConnectivityReport {
    pub fn feasible_count(&self) -> usize {
        self.feasible.len()
    }

    /// Component label of a given point, when present.
    pub fn label_of(&self, point: &Point) -> Option<usize> {
        self.feasible
            .points()
            .binary_search(point)
            .ok()
            .map(|idx| self.component_labels[idx])
    }
}

impl Serialize for ConnectivityReport {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut state = serializer.serialize_struct("ConnectivityReport", 6)?;
        state.serialize_field("feasibleCount", &self.feasible_count())?;
        state.serialize_field("componentCount", &self.component_count)?;
        state.serialize_field("verdict", &self.verdict)?;
        state.serialize_field("certificate", &self.certificate)?;
        state.serialize_field("points", &self.feasible)?;
        state.serialize_field("componentLabels", &self.component_labels)?;
        state.end()
    }
}

fn check_instance(a: &CoeffMatrix, b: &RhsVector) -> Result<()> {
    if b.len() != a.rows() {
        return Err(Error::input(format!(
            "rhs length {} does not match {} rows",
            b.len(),
            a.rows()
        )));
    }
    Ok(())
}

/// Exact feasibility test `Ax >= b` for a point of `{0, ..., d}^n`.
pub fn is_feasible(a: &CoeffMatrix, b: &RhsVector, d: DomainBound, x: &Point) -> Result<bool> {
    check_instance(a, b)?;
    if x.len() != a.cols() {
        return Err(Error::input(format!(
            "point length {} does not match {} columns",
            x.len(),
            a.cols()
        )));
    }
    if x.iter().any(|&v| v > d.value()) {
        return Err(Error::input("point coordinate exceeds the domain bound"));
    }
    for i in 0..a.rows() {
        if row_value(a, i, x) < *b.get(i) {
            return Ok(false);
        }
    }
    Ok(true)
}

pub(crate) fn row_value(a: &CoeffMatrix, row: usize, x: &Point) -> Rational {
    let mut acc = Rational::zero();
    for (j, &v) in x.iter().enumerate() {
        if v != 0 && !a.get(row, j).is_zero() {
            acc = &acc + &a.get(row, j).scaled(v);
        }
    }
    acc
}

pub(crate) fn domain_size(n: usize, d: DomainBound) -> u128 {
    let base = u128::from(d.value()) + 1;
    let mut size: u128 = 1;
    for _ in 0..n {
        size = size.saturating_mul(base);
    }
    size
}

/// All feasible points in lexicographic order, subject to the default
/// enumeration guard.
pub fn enumerate_feasible(a: &CoeffMatrix, b: &RhsVector, d: DomainBound) -> Result<FeasibleSet> {
    enumerate_feasible_guarded(a, b, d, DEFAULT_ENUMERATION_GUARD)
}

pub fn enumerate_feasible_guarded(
    a: &CoeffMatrix,
    b: &RhsVector,
    d: DomainBound,
    guard: u64,
) -> Result<FeasibleSet> {
    check_instance(a, b)?;
    let total = domain_size(a.cols(), d);
    if total > u128::from(guard) {
        return Err(Error::capability(format!(
            "domain has {total} points, enumeration guard is {guard}"
        )));
    }
    // Depth-first sweep in lexicographic order, carrying one partial row sum
    // per inequality.
    let mut feasible = Vec::new();
    let mut point = vec![0u32; a.cols()];
    let partials: Vec<Rational> = (0..a.rows()).map(|_| Rational::zero()).collect();
    descend(a, b, d, 0, &mut point, &partials, &mut feasible);
    Ok(FeasibleSet::from_sorted(feasible))
}

fn descend(
    a: &CoeffMatrix,
    b: &RhsVector,
    d: DomainBound,
    depth: usize,
    point: &mut Point,
    partials: &[Rational],
    out: &mut Vec<Point>,
) {
    if depth == a.cols() {
        if (0..a.rows()).all(|i| partials[i] >= *b.get(i)) {
            out.push(point.clone());
        }
        return;
    }
    for v in 0..=d.value() {
        point[depth] = v;
        let next: Vec<Rational> = (0..a.rows())
            .map(|i| {
                if v == 0 || a.get(i, depth).is_zero() {
                    partials[i].clone()
                } else {
                    &partials[i] + &a.get(i, depth).scaled(v)
                }
            })
            .collect();
        descend(a, b, d, depth + 1, point, &next, out);
    }
    point[depth] = 0;
}

/// Partition a point set into the connected components of its solution
/// graph.
///
/// For each point and each coordinate, every smaller value on the same
/// coordinate line is probed against a hash of the set, so each Hamming-1
/// edge is unioned exactly once. Cost O(|S| * n * d).
pub fn components(set: &FeasibleSet) -> ConnectivityReport {
    let points = set.points();
    if points.is_empty() {
        return ConnectivityReport {
            feasible: set.clone(),
            component_labels: Vec::new(),
            component_count: 0,
            verdict: Verdict::Empty,
            certificate: None,
        };
    }
    let index: HashMap<&[u32], usize> = points
        .iter()
        .enumerate()
        .map(|(idx, p)| (p.as_slice(), idx))
        .collect();
    let mut uf = UnionFind::new(points.len());
    let mut probe = Vec::new();
    for (idx, p) in points.iter().enumerate() {
        for j in 0..p.len() {
            probe.clear();
            probe.extend_from_slice(p);
            for v in 0..p[j] {
                probe[j] = v;
                if let Some(&other) = index.get(probe.as_slice()) {
                    uf.union(idx, other);
                }
            }
        }
    }
    let mut labels = vec![usize::MAX; points.len()];
    let mut component_count = 0;
    for idx in 0..points.len() {
        let root = uf.find(idx);
        if labels[root] == usize::MAX {
            labels[root] = component_count;
            component_count += 1;
        }
        labels[idx] = labels[root];
    }
    let certificate = if component_count > 1 {
        let first_label = labels[0];
        let other = labels
            .iter()
            .position(|&l| l != first_label)
            .expect("a second component exists");
        Some((points[0].clone(), points[other].clone()))
    } else {
        None
    };
    let verdict = if component_count > 1 {
        Verdict::Disconnected
    } else {
        Verdict::Connected
    };
    ConnectivityReport {
        feasible: set.clone(),
        component_labels: labels,
        component_count,
        verdict,
        certificate,
    }
}

/// Enumerate the feasible set and report its connectivity.
pub fn is_connected(a: &CoeffMatrix, b: &RhsVector, d: DomainBound) -> Result<ConnectivityReport> {
    is_connected_guarded(a, b, d, DEFAULT_ENUMERATION_GUARD)
}

pub fn is_connected_guarded(
    a: &CoeffMatrix,
    b: &RhsVector,
    d: DomainBound,
    guard: u64,
) -> Result<ConnectivityReport> {
    let feasible = enumerate_feasible_guarded(a, b, d, guard)?;
    Ok(components(&feasible))
}

struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    fn find(&mut self, x: usize) -> usize {
        if self.parent[x] != x {
            let root = self.find(self.parent[x]);
            self.parent[x] = root;
        }
        self.parent[x]
    }

    fn union(&mut self, a: usize, b: usize) {
        let mut ra = self.find(a);
        let mut rb = self.find(b);
        if ra == rb {
            return;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
    }
}
