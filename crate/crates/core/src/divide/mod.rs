//! Divides: systems of piecewise-linear immersed branches in the unit disk.
//!
//! Coordinates are exact rationals. The disk boundary is modelled as the
//! annulus `0.98 <= r <= 1`: open branches end there, every other vertex
//! stays strictly inside radius `0.98`.

mod generic;
mod perturb;

use std::collections::BTreeMap;

use thiserror::Error;

use crate::geometry::{ratio, segment_contact, Point2, Rational, SegmentContact};

pub use generic::{genericity_check, GenericityReport, Violation, ViolationCode, ViolationElement};
pub use perturb::{normalize_endpoints, perturb_branches, perturb_to_generic, PERTURB_ATTEMPTS};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DivideError {
    #[error("divide has no branches")]
    EmptyDivide,
    #[error("immersion violation: {0}")]
    ImmersionViolation(String),
    #[error("boundary violation: {0}")]
    BoundaryViolation(String),
    #[error("triple point or tangential intersection: {0}")]
    TripleOrTangentIntersection(String),
    #[error("intersection at a polyline vertex: {0}")]
    VertexIntersection(String),
    #[error("vertical segment: branch {branch}, segment {segment}")]
    VerticalSegment { branch: usize, segment: usize },
    #[error("perturbation failed after {attempts} attempts: {reason}")]
    PerturbationFailed { attempts: usize, reason: String },
    #[error("endpoint normalization failed: {0}")]
    NormalizationFailed(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BranchKind {
    Open,
    Closed,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Branch {
    pub kind: BranchKind,
    pub vertices: Vec<Point2>,
}

impl Branch {
    pub fn open(vertices: Vec<Point2>) -> Self {
        Branch { kind: BranchKind::Open, vertices }
    }

    pub fn closed(vertices: Vec<Point2>) -> Self {
        Branch { kind: BranchKind::Closed, vertices }
    }

    pub fn is_closed(&self) -> bool {
        self.kind == BranchKind::Closed
    }

    pub fn segment_count(&self) -> usize {
        match self.kind {
            BranchKind::Open => self.vertices.len().saturating_sub(1),
            BranchKind::Closed => self.vertices.len(),
        }
    }

    pub fn segment(&self, i: usize) -> (&Point2, &Point2) {
        let n = self.vertices.len();
        (&self.vertices[i], &self.vertices[(i + 1) % n])
    }

    /// Neighbouring vertex indices of vertex `i`, if it is not an open end.
    pub fn neighbours(&self, i: usize) -> Option<(usize, usize)> {
        let n = self.vertices.len();
        match self.kind {
            BranchKind::Open if i == 0 || i + 1 >= n => None,
            BranchKind::Open => Some((i - 1, i + 1)),
            BranchKind::Closed => Some(((i + n - 1) % n, (i + 1) % n)),
        }
    }

    /// Whether segments `a` and `b` share a polyline vertex.
    fn adjacent(&self, a: usize, b: usize) -> bool {
        let m = self.segment_count();
        let (a, b) = (a.min(b), a.max(b));
        b == a + 1 || (self.is_closed() && a == 0 && b + 1 == m)
    }

    pub fn endpoints(&self) -> Option<(&Point2, &Point2)> {
        match self.kind {
            BranchKind::Open => Some((&self.vertices[0], self.vertices.last()?)),
            BranchKind::Closed => None,
        }
    }
}

/// One branch passing through a double point.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Incidence {
    pub branch: usize,
    pub segment: usize,
    /// Position along the segment, strictly inside `(0, 1)`.
    pub param: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DoublePoint {
    pub position: Point2,
    pub incidences: [Incidence; 2],
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TangencyKind {
    /// Leftmost point of a local cap opening to the right.
    XMin,
    /// Rightmost point of a local cap opening to the left.
    XMax,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Tangency {
    pub branch: usize,
    pub vertex: usize,
    pub kind: TangencyKind,
}

/// A validated divide together with its derived double points and tangencies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Divide {
    branches: Vec<Branch>,
    double_points: Vec<DoublePoint>,
    tangencies: Vec<Tangency>,
}

impl Divide {
    pub fn branches(&self) -> &[Branch] {
        &self.branches
    }

    pub fn double_points(&self) -> &[DoublePoint] {
        &self.double_points
    }

    pub fn tangencies(&self) -> &[Tangency] {
        &self.tangencies
    }

    pub fn into_branches(self) -> Vec<Branch> {
        self.branches
    }

    pub fn tangency_point(&self, t: &Tangency) -> &Point2 {
        &self.branches[t.branch].vertices[t.vertex]
    }

    pub fn open_branch_count(&self) -> usize {
        self.branches.iter().filter(|b| !b.is_closed()).count()
    }

    pub fn segment_count(&self) -> usize {
        self.branches.iter().map(Branch::segment_count).sum()
    }

    /// Every segment as `(branch, segment, start, end)`.
    pub fn segments(&self) -> impl Iterator<Item = (usize, usize, &Point2, &Point2)> {
        self.branches.iter().enumerate().flat_map(|(b, br)| {
            (0..br.segment_count()).map(move |s| {
                let (p, q) = br.segment(s);
                (b, s, p, q)
            })
        })
    }
}

pub(crate) fn inner_radius_sq() -> Rational {
    ratio(98, 100) * ratio(98, 100)
}

/// Checks everything a divide needs and derives its double points and tangencies.
pub fn validate(branches: Vec<Branch>) -> Result<Divide, DivideError> {
    if branches.is_empty() {
        return Err(DivideError::EmptyDivide);
    }
    for (i, b) in branches.iter().enumerate() {
        check_immersion(i, b)?;
        check_boundary(i, b)?;
    }
    let scan = scan_intersections(&branches);
    if let Some(issue) = scan.issues.into_iter().next() {
        return Err(issue.into_error());
    }
    let tangencies = tangencies_lenient(&branches);
    Ok(Divide { branches, double_points: scan.double_points, tangencies })
}

fn check_immersion(idx: usize, b: &Branch) -> Result<(), DivideError> {
    let n = b.vertices.len();
    let min = if b.is_closed() { 3 } else { 2 };
    if n < min {
        return Err(DivideError::ImmersionViolation(format!(
            "branch {idx} has {n} vertices, needs at least {min}"
        )));
    }
    for s in 0..b.segment_count() {
        let (p, q) = b.segment(s);
        if p == q {
            return Err(DivideError::ImmersionViolation(format!(
                "branch {idx} repeats vertex {p:?} at segment {s}"
            )));
        }
    }
    for i in 0..n {
        let Some((a, c)) = b.neighbours(i) else { continue };
        let v = &b.vertices[i];
        let din = v.sub(&b.vertices[a]);
        let dout = b.vertices[c].sub(v);
        let cr = crate::geometry::cross(&din, &dout);
        let dot = &din.x * &dout.x + &din.y * &dout.y;
        if num_traits::Zero::is_zero(&cr) && num_traits::Signed::is_negative(&dot) {
            return Err(DivideError::ImmersionViolation(format!(
                "branch {idx} folds back at vertex {i}"
            )));
        }
    }
    Ok(())
}

fn check_boundary(idx: usize, b: &Branch) -> Result<(), DivideError> {
    let inner = inner_radius_sq();
    let n = b.vertices.len();
    for (i, v) in b.vertices.iter().enumerate() {
        let r2 = v.norm_sq();
        let end = !b.is_closed() && (i == 0 || i + 1 == n);
        if end {
            if r2 < inner || r2 > crate::geometry::one() {
                return Err(DivideError::BoundaryViolation(format!(
                    "branch {idx} endpoint {v:?} is not in the boundary annulus"
                )));
            }
        } else if r2 >= inner {
            return Err(DivideError::BoundaryViolation(format!(
                "branch {idx} vertex {i} {v:?} is not strictly inside radius 0.98"
            )));
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum IntersectionIssue {
    Overlap { a: (usize, usize), b: (usize, usize) },
    Touch { a: (usize, usize), b: (usize, usize), at: Point2 },
    Concurrent { at: Point2 },
}

impl IntersectionIssue {
    fn into_error(self) -> DivideError {
        match self {
            IntersectionIssue::Overlap { a, b } => DivideError::TripleOrTangentIntersection(
                format!("segments {a:?} and {b:?} overlap"),
            ),
            IntersectionIssue::Touch { a, b, at } => DivideError::VertexIntersection(format!(
                "segments {a:?} and {b:?} meet at {at:?}"
            )),
            IntersectionIssue::Concurrent { at } => DivideError::TripleOrTangentIntersection(
                format!("three or more segments meet at {at:?}"),
            ),
        }
    }
}

pub(crate) struct IntersectionScan {
    pub double_points: Vec<DoublePoint>,
    pub issues: Vec<IntersectionIssue>,
}

/// All-pairs segment intersection with exact predicates.
pub(crate) fn scan_intersections(branches: &[Branch]) -> IntersectionScan {
    let segs: Vec<(usize, usize, &Point2, &Point2)> = branches
        .iter()
        .enumerate()
        .flat_map(|(b, br)| {
            (0..br.segment_count()).map(move |s| {
                let (p, q) = br.segment(s);
                (b, s, p, q)
            })
        })
        .collect();

    let mut found: BTreeMap<Point2, Vec<DoublePoint>> = BTreeMap::new();
    let mut issues = Vec::new();
    for i in 0..segs.len() {
        let (bi, si, p0, p1) = segs[i];
        for &(bj, sj, q0, q1) in &segs[i + 1..] {
            let adjacent = bi == bj && branches[bi].adjacent(si, sj);
            match segment_contact(p0, p1, q0, q1) {
                SegmentContact::Disjoint => {}
                SegmentContact::Touch(at) => {
                    if !adjacent {
                        issues.push(IntersectionIssue::Touch { a: (bi, si), b: (bj, sj), at });
                    }
                }
                SegmentContact::Overlap => {
                    issues.push(IntersectionIssue::Overlap { a: (bi, si), b: (bj, sj) })
                }
                SegmentContact::Proper { s, t, point } => {
                    let dp = DoublePoint {
                        position: point.clone(),
                        incidences: [
                            Incidence { branch: bi, segment: si, param: s },
                            Incidence { branch: bj, segment: sj, param: t },
                        ],
                    };
                    found.entry(point).or_default().push(dp);
                }
            }
        }
    }
    let mut double_points = Vec::with_capacity(found.len());
    for (at, mut dps) in found {
        if dps.len() > 1 {
            issues.push(IntersectionIssue::Concurrent { at });
        } else {
            double_points.push(dps.pop().unwrap());
        }
    }
    IntersectionScan { double_points, issues }
}

/// Double points of a validated divide, ordered by position.
pub fn compute_double_points(divide: &Divide) -> Result<Vec<DoublePoint>, DivideError> {
    let scan = scan_intersections(&divide.branches);
    match scan.issues.into_iter().next() {
        Some(issue) => Err(issue.into_error()),
        None => Ok(scan.double_points),
    }
}

/// x-reversal vertices, ordered by x. Fails on exactly vertical segments.
pub fn compute_tangencies(divide: &Divide) -> Result<Vec<Tangency>, DivideError> {
    if let Some((branch, segment)) = first_vertical_segment(&divide.branches) {
        return Err(DivideError::VerticalSegment { branch, segment });
    }
    Ok(tangencies_lenient(&divide.branches))
}

pub(crate) fn first_vertical_segment(branches: &[Branch]) -> Option<(usize, usize)> {
    branches.iter().enumerate().find_map(|(b, br)| {
        (0..br.segment_count()).find_map(|s| {
            let (p, q) = br.segment(s);
            (p.x == q.x).then_some((b, s))
        })
    })
}

/// Tangencies with vertical runs collapsed onto their first vertex.
fn tangencies_lenient(branches: &[Branch]) -> Vec<Tangency> {
    use std::cmp::Ordering::*;
    let mut out = Vec::new();
    for (bi, b) in branches.iter().enumerate() {
        let n = b.vertices.len();
        // direction of each segment in x
        let dirs: Vec<std::cmp::Ordering> =
            (0..b.segment_count()).map(|s| {
                let (p, q) = b.segment(s);
                q.x.cmp(&p.x)
            }).collect();
        if dirs.iter().all(|d| *d == Equal) {
            continue;
        }
        let m = dirs.len();
        let range: Box<dyn Iterator<Item = usize>> = if b.is_closed() {
            Box::new(0..n)
        } else {
            Box::new(1..n.saturating_sub(1))
        };
        for v in range {
            // segment leaving v is index v, entering is v-1
            if dirs[v % m] == Equal {
                continue;
            }
            let mut k = (v + m - 1) % m;
            let mut steps = 0;
            while dirs[k] == Equal && steps < m {
                if !b.is_closed() && k == 0 {
                    break;
                }
                k = (k + m - 1) % m;
                steps += 1;
            }
            let incoming = dirs[k];
            if incoming == Equal {
                continue;
            }
            let kind = match (incoming, dirs[v % m]) {
                (Less, Greater) => TangencyKind::XMin,
                (Greater, Less) => TangencyKind::XMax,
                _ => continue,
            };
            // a vertical run is attributed to its first vertex
            let vertex = (k + 1) % n;
            out.push(Tangency { branch: bi, vertex, kind });
        }
    }
    out.sort_by(|a, b| {
        let pa = &branches[a.branch].vertices[a.vertex];
        let pb = &branches[b.branch].vertices[b.vertex];
        pa.x.cmp(&pb.x).then(pa.y.cmp(&pb.y)).then(a.branch.cmp(&b.branch))
    });
    out.dedup();
    out
}
