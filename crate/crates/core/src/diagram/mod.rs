//! Link diagrams of generic divides.
//!
//! The divide is reflected across a horizontal line below the disk, double
//! points of both copies become crossings, boundary points are joined to
//! their mirror images by vertical strings, and every vertical tangency is
//! replaced by a pair of vertical strings meeting in a half-twist on the
//! mirror line.

mod build;
mod codes;
mod symmetry;

use std::collections::BTreeSet;
use std::fmt;

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::divide::GenericityReport;
use crate::geometry::{cross, Point2, Rational};

pub use build::{build_diagram, build_diagram_with, Convention, DiagramConfig, SlopeRule, TwistRule};
pub use codes::{gauss_code, pd_code, GaussCode, GaussEntry, PdCode, PdTuple};
pub use symmetry::{involution_check, orient_and_sign};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiagramError {
    #[error("divide is not generic: {}", summary(.0))]
    NotGeneric(GenericityReport),
    #[error("no collision-free string spacing near tangency at x = {0}")]
    EpsilonCollision(String),
    #[error("mirror gap must be positive")]
    InvalidGap,
}

fn summary(report: &GenericityReport) -> String {
    let codes: BTreeSet<&str> = report.violations.iter().map(|v| v.code.as_str()).collect();
    codes.into_iter().collect::<Vec<_>>().join(", ")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CrossingRole {
    /// Double point of the divide itself.
    DoubleUpper,
    /// Double point of the mirror copy.
    DoubleLower,
    /// Crossing of the two tangency strings on the mirror line.
    HalfTwist,
    /// A tangency string meeting the divide.
    StringCurveUpper,
    /// A tangency string meeting the mirror copy.
    StringCurveLower,
}

impl CrossingRole {
    pub fn as_str(&self) -> &'static str {
        match self {
            CrossingRole::DoubleUpper => "double-upper",
            CrossingRole::DoubleLower => "double-lower",
            CrossingRole::HalfTwist => "half-twist",
            CrossingRole::StringCurveUpper => "string-curve-upper",
            CrossingRole::StringCurveLower => "string-curve-lower",
        }
    }

    /// Role of the image under reflection in the mirror line.
    pub fn mirrored(&self) -> CrossingRole {
        match self {
            CrossingRole::DoubleUpper => CrossingRole::DoubleLower,
            CrossingRole::DoubleLower => CrossingRole::DoubleUpper,
            CrossingRole::HalfTwist => CrossingRole::HalfTwist,
            CrossingRole::StringCurveUpper => CrossingRole::StringCurveLower,
            CrossingRole::StringCurveLower => CrossingRole::StringCurveUpper,
        }
    }
}

impl fmt::Display for CrossingRole {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Crossing {
    pub id: usize,
    pub position: Point2,
    pub role: CrossingRole,
    /// +1 for a right-handed crossing, -1 otherwise.
    pub sign: i32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Passage {
    pub crossing: usize,
    pub over: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RouteVertex {
    pub position: Point2,
    pub passage: Option<Passage>,
}

/// A closed oriented polygon of the diagram.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Component {
    /// Cyclic; the last vertex connects back to the first.
    pub route: Vec<RouteVertex>,
    /// Branches of the divide this component runs along.
    pub branches: Vec<usize>,
}

impl Component {
    pub fn passages(&self) -> Vec<Passage> {
        self.route.iter().filter_map(|v| v.passage).collect()
    }
}

/// Arc of a component between two consecutive crossing passages.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Edge {
    pub component: usize,
    pub tail: Passage,
    pub head: Passage,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinkDiagram {
    crossings: Vec<Crossing>,
    components: Vec<Component>,
    mirror_y: Rational,
}

impl LinkDiagram {
    pub(crate) fn from_parts(crossings: Vec<Crossing>, components: Vec<Component>, mirror_y: Rational) -> Self {
        let mut d = LinkDiagram { crossings, components, mirror_y };
        d.recompute_signs();
        d
    }

    pub fn crossings(&self) -> &[Crossing] {
        &self.crossings
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn mirror_y(&self) -> &Rational {
        &self.mirror_y
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    pub fn component_count(&self) -> usize {
        self.components.len()
    }

    pub fn writhe(&self) -> i64 {
        self.crossings.iter().map(|c| c.sign as i64).sum()
    }

    pub fn count_role(&self, role: CrossingRole) -> usize {
        self.crossings.iter().filter(|c| c.role == role).count()
    }

    pub fn edges(&self) -> Vec<Edge> {
        let mut out = Vec::new();
        for (i, c) in self.components.iter().enumerate() {
            let ps = c.passages();
            for k in 0..ps.len() {
                out.push(Edge { component: i, tail: ps[k], head: ps[(k + 1) % ps.len()] });
            }
        }
        out
    }

    /// Swaps over and under at one crossing.
    pub fn toggle_crossing(&mut self, id: usize) {
        for c in &mut self.components {
            for v in &mut c.route {
                if let Some(p) = &mut v.passage {
                    if p.crossing == id {
                        p.over = !p.over;
                    }
                }
            }
        }
        self.recompute_signs();
    }

    /// Reverses the orientation of one component.
    pub fn reverse_component(&mut self, component: usize) {
        self.components[component].route.reverse();
        self.recompute_signs();
    }

    /// Direction of travel through the route vertex `i` of component `c`.
    fn direction(&self, c: usize, i: usize) -> Point2 {
        let route = &self.components[c].route;
        let n = route.len();
        let prev = &route[(i + n - 1) % n].position;
        let next = &route[(i + 1) % n].position;
        next.sub(prev)
    }

    pub(crate) fn recompute_signs(&mut self) {
        let mut over = vec![None; self.crossings.len()];
        let mut under = vec![None; self.crossings.len()];
        for (c, comp) in self.components.iter().enumerate() {
            for (i, v) in comp.route.iter().enumerate() {
                if let Some(p) = v.passage {
                    let slot = if p.over { &mut over } else { &mut under };
                    slot[p.crossing] = Some((c, i));
                }
            }
        }
        for k in 0..self.crossings.len() {
            let (Some(o), Some(u)) = (over[k], under[k]) else { continue };
            let z = cross(&self.direction(o.0, o.1), &self.direction(u.0, u.1));
            self.crossings[k].sign = if z.is_positive() { 1 } else { -1 };
        }
    }

    /// Structural self-check: ids are positional indices, every crossing is
    /// passed exactly once over and once under, and the passing strands are
    /// transverse at the crossing position.
    pub fn check_consistency(&self) -> Result<(), String> {
        let n = self.crossings.len();
        let mut seen = vec![(0usize, 0usize); n];
        for (k, c) in self.crossings.iter().enumerate() {
            if c.id != k {
                return Err(format!("crossing at index {k} has id {}", c.id));
            }
            let above = c.position.y > self.mirror_y;
            let on = c.position.y == self.mirror_y;
            let ok = match c.role {
                CrossingRole::HalfTwist => on,
                CrossingRole::DoubleUpper | CrossingRole::StringCurveUpper => above,
                CrossingRole::DoubleLower | CrossingRole::StringCurveLower => !above && !on,
            };
            if !ok {
                return Err(format!("crossing {k} ({}) is on the wrong side of the mirror line", c.role));
            }
        }
        for (ci, comp) in self.components.iter().enumerate() {
            if comp.route.len() < 3 {
                return Err(format!("component {ci} has a degenerate route"));
            }
            for (i, v) in comp.route.iter().enumerate() {
                let Some(p) = v.passage else { continue };
                if p.crossing >= n {
                    return Err(format!("component {ci} passes unknown crossing {}", p.crossing));
                }
                if v.position != self.crossings[p.crossing].position {
                    return Err(format!("passage of crossing {} is off position", p.crossing));
                }
                let slot = &mut seen[p.crossing];
                if p.over {
                    slot.0 += 1;
                } else {
                    slot.1 += 1;
                }
                let d = self.direction(ci, i);
                if d.x.is_zero() && d.y.is_zero() {
                    return Err(format!("zero direction at crossing {}", p.crossing));
                }
            }
        }
        if let Some(k) = seen.iter().position(|s| *s != (1, 1)) {
            return Err(format!("crossing {k} is passed {:?} times (over, under)", seen[k]));
        }
        Ok(())
    }
}
