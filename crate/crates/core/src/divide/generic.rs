use std::collections::BTreeMap;
use std::fmt;

use crate::geometry::{y_at, Point2, Rational};

use super::{
    check_boundary, check_immersion, first_vertical_segment, scan_intersections,
    tangencies_lenient, Branch, Divide, IntersectionIssue,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ViolationCode {
    SharedX,
    TangencyAtDouble,
    TangencyAtBoundary,
    VerticalSegment,
    TriplePoint,
    EndpointRayBlocked,
    NonTransverse,
}

impl ViolationCode {
    pub fn as_str(&self) -> &'static str {
        match self {
            ViolationCode::SharedX => "SHARED_X",
            ViolationCode::TangencyAtDouble => "TANGENCY_AT_DOUBLE",
            ViolationCode::TangencyAtBoundary => "TANGENCY_AT_BOUNDARY",
            ViolationCode::VerticalSegment => "VERTICAL_SEGMENT",
            ViolationCode::TriplePoint => "TRIPLE_POINT",
            ViolationCode::EndpointRayBlocked => "ENDPOINT_RAY_BLOCKED",
            ViolationCode::NonTransverse => "NON_TRANSVERSE",
        }
    }

    /// Violations that a small vertex jitter can remove.
    pub fn is_perturbable(&self) -> bool {
        matches!(
            self,
            ViolationCode::SharedX
                | ViolationCode::VerticalSegment
                | ViolationCode::TriplePoint
                | ViolationCode::EndpointRayBlocked
                | ViolationCode::TangencyAtDouble
        )
    }
}

impl fmt::Display for ViolationCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ViolationElement {
    Tangency(usize),
    DoublePoint(usize),
    Endpoint { branch: usize, last: bool },
    Segment { branch: usize, segment: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub code: ViolationCode,
    pub description: String,
    pub elements: Vec<ViolationElement>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenericityReport {
    pub generic: bool,
    pub violations: Vec<Violation>,
}

impl GenericityReport {
    fn from_violations(violations: Vec<Violation>) -> Self {
        GenericityReport { generic: violations.is_empty(), violations }
    }

    pub fn has(&self, code: ViolationCode) -> bool {
        self.violations.iter().any(|v| v.code == code)
    }

    pub fn count(&self, code: ViolationCode) -> usize {
        self.violations.iter().filter(|v| v.code == code).count()
    }
}

/// Diagnoses the genericity conditions on a validated divide.
///
/// Critical x-values (tangencies, double points, open endpoints) must be
/// pairwise distinct, no segment may be vertical, and the downward vertical
/// ray from every open endpoint must miss the rest of the divide.
pub fn genericity_check(divide: &Divide) -> GenericityReport {
    GenericityReport::from_violations(divide_violations(divide))
}

fn divide_violations(divide: &Divide) -> Vec<Violation> {
    let branches = divide.branches();
    let mut out = Vec::new();

    if first_vertical_segment(branches).is_some() {
        for (b, br) in branches.iter().enumerate() {
            for s in 0..br.segment_count() {
                let (p, q) = br.segment(s);
                if p.x == q.x {
                    out.push(Violation {
                        code: ViolationCode::VerticalSegment,
                        description: format!("branch {b} segment {s} is vertical"),
                        elements: vec![ViolationElement::Segment { branch: b, segment: s }],
                    });
                }
            }
        }
    }

    // critical abscissae
    let mut critical: BTreeMap<Rational, Vec<ViolationElement>> = BTreeMap::new();
    for (i, t) in divide.tangencies().iter().enumerate() {
        let p = divide.tangency_point(t);
        critical.entry(p.x.clone()).or_default().push(ViolationElement::Tangency(i));
        if divide.double_points().iter().any(|d| &d.position == p) {
            out.push(Violation {
                code: ViolationCode::TangencyAtDouble,
                description: format!("tangency {i} sits on a double point"),
                elements: vec![ViolationElement::Tangency(i)],
            });
        }
        if branches[t.branch].endpoints().is_some_and(|(a, b)| a == p || b == p) {
            out.push(Violation {
                code: ViolationCode::TangencyAtBoundary,
                description: format!("tangency {i} sits on a boundary point"),
                elements: vec![ViolationElement::Tangency(i)],
            });
        }
    }
    for (i, d) in divide.double_points().iter().enumerate() {
        critical.entry(d.position.x.clone()).or_default().push(ViolationElement::DoublePoint(i));
    }
    for (b, br) in branches.iter().enumerate() {
        if let Some((first, last)) = br.endpoints() {
            critical
                .entry(first.x.clone())
                .or_default()
                .push(ViolationElement::Endpoint { branch: b, last: false });
            critical
                .entry(last.x.clone())
                .or_default()
                .push(ViolationElement::Endpoint { branch: b, last: true });
        }
    }
    for (x, elements) in critical {
        if elements.len() > 1 {
            out.push(Violation {
                code: ViolationCode::SharedX,
                description: format!("{} critical points share x = {x}", elements.len()),
                elements,
            });
        }
    }

    for (b, br) in branches.iter().enumerate() {
        if let Some((first, last)) = br.endpoints() {
            for (p, is_last) in [(first, false), (last, true)] {
                if let Some(hit) = ray_obstruction(branches, p) {
                    out.push(Violation {
                        code: ViolationCode::EndpointRayBlocked,
                        description: format!(
                            "downward ray from endpoint {p:?} of branch {b} meets branch {} segment {}",
                            hit.0, hit.1
                        ),
                        elements: vec![
                            ViolationElement::Endpoint { branch: b, last: is_last },
                            ViolationElement::Segment { branch: hit.0, segment: hit.1 },
                        ],
                    });
                }
            }
        }
    }
    out
}

/// First segment met by the open downward ray from `p`, ignoring contact at `p` itself.
pub(crate) fn ray_obstruction(branches: &[Branch], p: &Point2) -> Option<(usize, usize)> {
    for (b, br) in branches.iter().enumerate() {
        for s in 0..br.segment_count() {
            let (a, c) = br.segment(s);
            let (lo, hi) = if a.x <= c.x { (a, c) } else { (c, a) };
            if p.x < lo.x || p.x > hi.x {
                continue;
            }
            let blocked = if a.x == c.x {
                // vertical: any part strictly below p
                a.y < p.y || c.y < p.y
            } else {
                y_at(a, c, &p.x) < p.y
            };
            if blocked {
                return Some((b, s));
            }
        }
    }
    None
}

/// Genericity diagnosis for raw branches that may not pass validation.
///
/// Hard validation failures other than intersections are reported as
/// `NON_TRANSVERSE`; concurrent crossings become `TRIPLE_POINT`.
pub(crate) fn raw_report(branches: &[Branch]) -> GenericityReport {
    let mut violations = Vec::new();
    for (i, b) in branches.iter().enumerate() {
        if let Err(e) = check_immersion(i, b).and_then(|_| check_boundary(i, b)) {
            violations.push(Violation {
                code: ViolationCode::NonTransverse,
                description: e.to_string(),
                elements: vec![],
            });
        }
    }
    if !violations.is_empty() || branches.is_empty() {
        return GenericityReport { generic: false, violations };
    }
    let scan = scan_intersections(branches);
    for issue in &scan.issues {
        let (code, description) = match issue {
            IntersectionIssue::Concurrent { at } => {
                (ViolationCode::TriplePoint, format!("concurrent crossings at {at:?}"))
            }
            IntersectionIssue::Overlap { a, b } => {
                (ViolationCode::NonTransverse, format!("segments {a:?} and {b:?} overlap"))
            }
            IntersectionIssue::Touch { a, b, at } => (
                ViolationCode::TriplePoint,
                format!("segments {a:?} and {b:?} meet at vertex {at:?}"),
            ),
        };
        violations.push(Violation { code, description, elements: vec![] });
    }
    if violations.is_empty() {
        let divide = Divide {
            branches: branches.to_vec(),
            double_points: scan.double_points,
            tangencies: tangencies_lenient(branches),
        };
        violations = divide_violations(&divide);
    }
    GenericityReport::from_violations(violations)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::divide::validate;
    use crate::geometry::from_f64_grid;

    fn pt(x: f64, y: f64) -> Point2 {
        Point2::new(from_f64_grid(x, 20), from_f64_grid(y, 20))
    }

    #[test]
    fn monotone_chord_is_generic() {
        let d = validate(vec![Branch::open(vec![pt(-0.99, 0.05), pt(0.99, -0.03)])]).unwrap();
        let r = genericity_check(&d);
        assert!(r.generic, "{r:?}");
    }

    #[test]
    fn two_tangencies_at_equal_x() {
        // closed curve with two leftmost vertices at the same x
        let c = Branch::closed(vec![
            pt(0.0, 0.5),
            pt(-0.5, 0.3),
            pt(-0.2, 0.0),
            pt(-0.5, -0.3),
            pt(0.0, -0.5),
            pt(0.4, 0.0),
        ]);
        let d = validate(vec![c]).unwrap();
        let r = genericity_check(&d);
        assert!(!r.generic);
        assert_eq!(r.count(ViolationCode::SharedX), 1);
        assert_eq!(r.violations.len(), 1);
    }

    #[test]
    fn endpoint_at_top_is_blocked() {
        let b = Branch::open(vec![pt(0.0, 0.99), pt(0.1, 0.5), pt(-0.4, -0.2), pt(0.985, -0.12)]);
        let d = validate(vec![b]).unwrap();
        let r = genericity_check(&d);
        assert!(r.has(ViolationCode::EndpointRayBlocked), "{r:?}");
    }

    #[test]
    fn vertical_segment_reported() {
        let b = Branch::open(vec![pt(-0.99, 0.0), pt(0.2, 0.0), pt(0.2, 0.4), pt(0.985, 0.1)]);
        let d = validate(vec![b]).unwrap();
        assert!(genericity_check(&d).has(ViolationCode::VerticalSegment));
    }

    #[test]
    fn raw_triple_point() {
        let chords = vec![
            Branch::open(vec![pt(-0.99, 0.0), pt(0.99, 0.0)]),
            Branch::open(vec![pt(-0.7, -0.7), pt(0.7, 0.7)]),
            Branch::open(vec![pt(-0.7, 0.7), pt(0.7, -0.7)]),
        ];
        let r = raw_report(&chords);
        assert!(r.has(ViolationCode::TriplePoint), "{r:?}");
    }
}
