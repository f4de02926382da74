use std::collections::BTreeMap;

use num_traits::Signed;

use crate::divide::{genericity_check, Branch, BranchKind, Divide, TangencyKind};
use crate::geometry::{int, ratio, segment_contact, to_f64, y_at, Point2, Rational, SegmentContact};

use super::{Component, Crossing, CrossingRole, DiagramError, LinkDiagram, Passage, RouteVertex};

/// Which strand passes over at a double point of either copy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SlopeRule {
    SmallerSlopeOver,
    LargerSlopeOver,
}

/// Which diagonal of a half-twist passes over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TwistRule {
    /// The diagonal of positive slope.
    RisingOver,
    /// The diagonal of negative slope.
    FallingOver,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Convention {
    pub slope: SlopeRule,
    pub twist: TwistRule,
}

impl Convention {
    /// The only combination giving the positive Hopf link for two crossing
    /// chords and the right-handed trefoil for the cusp divide.
    pub const CALIBRATED: Convention =
        Convention { slope: SlopeRule::SmallerSlopeOver, twist: TwistRule::RisingOver };

    pub const ALL: [Convention; 4] = [
        Convention { slope: SlopeRule::SmallerSlopeOver, twist: TwistRule::RisingOver },
        Convention { slope: SlopeRule::SmallerSlopeOver, twist: TwistRule::FallingOver },
        Convention { slope: SlopeRule::LargerSlopeOver, twist: TwistRule::RisingOver },
        Convention { slope: SlopeRule::LargerSlopeOver, twist: TwistRule::FallingOver },
    ];
}

impl Default for Convention {
    fn default() -> Self {
        Convention::CALIBRATED
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagramConfig {
    /// Distance between the bottom of the unit disk and the mirror line.
    pub mirror_gap: Rational,
    pub convention: Convention,
}

impl Default for DiagramConfig {
    fn default() -> Self {
        DiagramConfig { mirror_gap: ratio(1, 2), convention: Convention::CALIBRATED }
    }
}

pub fn build_diagram(divide: &Divide) -> Result<LinkDiagram, DiagramError> {
    build_diagram_with(divide, &DiagramConfig::default())
}

const SHRINK_ATTEMPTS: usize = 24;

pub fn build_diagram_with(divide: &Divide, config: &DiagramConfig) -> Result<LinkDiagram, DiagramError> {
    let report = genericity_check(divide);
    if !report.generic {
        return Err(DiagramError::NotGeneric(report));
    }
    if !config.mirror_gap.is_positive() {
        return Err(DiagramError::InvalidGap);
    }
    let mirror = -(int(1) + &config.mirror_gap);
    let mut eps = initial_epsilon(divide);
    let mut last = String::new();
    for _ in 0..SHRINK_ATTEMPTS {
        match Builder::new(divide, eps.clone(), mirror.clone(), config.convention).run() {
            Ok(d) => return Ok(d),
            Err(x) => last = x,
        }
        eps /= int(2);
    }
    Err(DiagramError::EpsilonCollision(last))
}

/// A quarter of the smallest gap between critical abscissae, and less than
/// half the horizontal reach of every segment ending at a tangency.
fn initial_epsilon(divide: &Divide) -> Rational {
    let mut xs: Vec<Rational> = divide.tangencies().iter().map(|t| divide.tangency_point(t).x.clone()).collect();
    xs.extend(divide.double_points().iter().map(|d| d.position.x.clone()));
    for b in divide.branches() {
        if let Some((p, q)) = b.endpoints() {
            xs.push(p.x.clone());
            xs.push(q.x.clone());
        }
    }
    xs.sort();
    let mut eps = ratio(1, 8);
    for w in xs.windows(2) {
        let g = (&w[1] - &w[0]) / int(4);
        if g < eps {
            eps = g;
        }
    }
    for t in divide.tangencies() {
        let b = &divide.branches()[t.branch];
        let (i, j) = b.neighbours(t.vertex).expect("tangency at an interior vertex");
        let x0 = &b.vertices[t.vertex].x;
        for n in [i, j] {
            let reach = (&b.vertices[n].x - x0).abs() / int(2);
            if reach < eps {
                eps = reach;
            }
        }
    }
    eps
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Tag {
    Curve,
    /// Horizontal continuation of the upper arm of a tangency to its string.
    Stub,
    /// Vertical part of a tangency string; `right` when at `x0 + ε`.
    String { right: bool },
    Twist,
    Boundary,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum End {
    Boundary,
    /// Arm of a tangency; `upper` is the arm lying above the other near it.
    Tangency { index: usize, upper: bool },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Side {
    Left,
    Right,
}

#[derive(Debug, Clone)]
struct Piece {
    branch: usize,
    /// x-monotone, left to right.
    points: Vec<Point2>,
    tags: Vec<Tag>,
    left: End,
    right: End,
}

impl Piece {
    fn end(&self, side: Side) -> End {
        match side {
            Side::Left => self.left,
            Side::Right => self.right,
        }
    }
}

struct TangencyGeom {
    kind: TangencyKind,
    /// Port of the upper arm at `x0 ± ε` (outside the cap), level with the tangency.
    upper_port: Point2,
    /// Port of the lower arm at `x0 ∓ ε` (inside the cap), on the arm itself.
    lower_port: Point2,
    /// Whether the upper arm is the one through the previous vertex.
    upper_is_prev: bool,
}

struct Connector {
    upper: (usize, Side),
    lower: (usize, Side),
    /// From the upper end down to the lower end.
    points: Vec<Point2>,
    tags: Vec<Tag>,
}

struct Builder<'a> {
    divide: &'a Divide,
    eps: Rational,
    mirror: Rational,
    convention: Convention,
    twist_half_height: Rational,
}

type Route = Vec<(Point2, Tag)>;

impl<'a> Builder<'a> {
    fn new(divide: &'a Divide, eps: Rational, mirror: Rational, convention: Convention) -> Self {
        let gap = -(&mirror) - int(1);
        let h = eps.clone().min(gap / int(4));
        Builder { divide, eps, mirror, convention, twist_half_height: h }
    }

    fn reflect(&self, p: &Point2) -> Point2 {
        p.reflect_y(&self.mirror)
    }

    fn run(&self) -> Result<LinkDiagram, String> {
        let geoms = self.tangency_geometry()?;
        let pieces = self.pieces(&geoms);
        let connectors = self.connectors(&geoms, &pieces);
        let routes = self.trace(&pieces, &connectors);
        self.assemble(routes)
    }

    fn tangency_geometry(&self) -> Result<Vec<TangencyGeom>, String> {
        let mut out = Vec::new();
        for t in self.divide.tangencies() {
            let b = &self.divide.branches()[t.branch];
            let p = &b.vertices[t.vertex];
            let (i, j) = b.neighbours(t.vertex).expect("tangency at an interior vertex");
            let outward = if t.kind == TangencyKind::XMax { int(1) } else { int(-1) };
            let inner_x = &p.x - &outward * &self.eps;
            let outer_x = &p.x + &outward * &self.eps;
            for v in self.divide.branches().iter().flat_map(|b| &b.vertices) {
                if v.x == inner_x || v.x == outer_x {
                    return Err(p.x.to_string());
                }
            }
            let y_prev = y_at(&b.vertices[i], p, &inner_x);
            let y_next = y_at(p, &b.vertices[j], &inner_x);
            let upper_is_prev = y_prev > y_next;
            let lower_y = if upper_is_prev { y_next } else { y_prev };
            out.push(TangencyGeom {
                kind: t.kind,
                upper_port: Point2::new(outer_x, p.y.clone()),
                lower_port: Point2::new(inner_x, lower_y),
                upper_is_prev,
            });
        }
        Ok(out)
    }

    /// Splits every branch at its tangencies into x-monotone pieces.
    fn pieces(&self, geoms: &[TangencyGeom]) -> Vec<Piece> {
        let mut at_vertex: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        for (k, t) in self.divide.tangencies().iter().enumerate() {
            at_vertex.insert((t.branch, t.vertex), k);
        }
        let mut out = Vec::new();
        for (bi, b) in self.divide.branches().iter().enumerate() {
            let n = b.vertices.len();
            let cuts: Vec<usize> = (0..n).filter(|v| at_vertex.contains_key(&(bi, *v))).collect();
            let spans: Vec<(usize, usize)> = match b.kind {
                BranchKind::Open => {
                    let mut stops = vec![0];
                    stops.extend(&cuts);
                    stops.push(n - 1);
                    stops.windows(2).map(|w| (w[0], w[1])).collect()
                }
                BranchKind::Closed => (0..cuts.len())
                    .map(|k| (cuts[k], cuts[(k + 1) % cuts.len()]))
                    .collect(),
            };
            for (a, c) in spans {
                let len = if c > a { c - a } else { c + n - a };
                let idx: Vec<usize> = (0..=len).map(|k| (a + k) % n).collect();
                out.push(self.piece(bi, b, &idx, &at_vertex, geoms));
            }
        }
        out
    }

    fn piece(
        &self,
        bi: usize,
        b: &Branch,
        idx: &[usize],
        at_vertex: &BTreeMap<(usize, usize), usize>,
        geoms: &[TangencyGeom],
    ) -> Piece {
        let mut points: Vec<Point2> = idx.iter().map(|&v| b.vertices[v].clone()).collect();
        let mut tags = vec![Tag::Curve; points.len() - 1];
        let mut ends = [End::Boundary, End::Boundary];
        for (slot, at_start) in [(0usize, true), (1, false)] {
            let v = if at_start { idx[0] } else { idx[idx.len() - 1] };
            let Some(&k) = at_vertex.get(&(bi, v)) else { continue };
            let g = &geoms[k];
            // the arm of this piece leaves the tangency towards `next` when at the start
            let via_prev = !at_start;
            let upper = via_prev == g.upper_is_prev;
            ends[slot] = End::Tangency { index: k, upper };
            if upper {
                if at_start {
                    points.insert(0, g.upper_port.clone());
                    tags.insert(0, Tag::Stub);
                } else {
                    points.push(g.upper_port.clone());
                    tags.push(Tag::Stub);
                }
            } else if at_start {
                points[0] = g.lower_port.clone();
            } else {
                let l = points.len() - 1;
                points[l] = g.lower_port.clone();
            }
        }
        let mut piece = Piece { branch: bi, points, tags, left: ends[0], right: ends[1] };
        if piece.points[0].x > piece.points[piece.points.len() - 1].x {
            piece.points.reverse();
            piece.tags.reverse();
            std::mem::swap(&mut piece.left, &mut piece.right);
        }
        piece
    }

    fn connectors(&self, geoms: &[TangencyGeom], pieces: &[Piece]) -> Vec<Connector> {
        let mut out = Vec::new();
        let mut arms: BTreeMap<(usize, bool), (usize, Side)> = BTreeMap::new();
        for (pi, piece) in pieces.iter().enumerate() {
            for side in [Side::Left, Side::Right] {
                match piece.end(side) {
                    End::Boundary => {
                        let p = match side {
                            Side::Left => &piece.points[0],
                            Side::Right => &piece.points[piece.points.len() - 1],
                        };
                        out.push(Connector {
                            upper: (pi, side),
                            lower: (pi, side),
                            points: vec![p.clone(), self.reflect(p)],
                            tags: vec![Tag::Boundary],
                        });
                    }
                    End::Tangency { index, upper } => {
                        arms.insert((index, upper), (pi, side));
                    }
                }
            }
        }
        let h = &self.twist_half_height;
        for (k, g) in geoms.iter().enumerate() {
            let up = arms[&(k, true)];
            let low = arms[&(k, false)];
            let outer_x = &g.upper_port.x;
            let inner_x = &g.lower_port.x;
            let right_is_outer = g.kind == TangencyKind::XMax;
            for (from, to, start, x_top, x_bottom, finish) in [
                (up, low, &g.upper_port, outer_x, inner_x, &g.lower_port),
                (low, up, &g.lower_port, inner_x, outer_x, &g.upper_port),
            ] {
                let top_right = (x_top == outer_x) == right_is_outer;
                out.push(Connector {
                    upper: from,
                    lower: to,
                    points: vec![
                        start.clone(),
                        Point2::new(x_top.clone(), &self.mirror + h),
                        Point2::new(x_bottom.clone(), &self.mirror - h),
                        self.reflect(finish),
                    ],
                    tags: vec![
                        Tag::String { right: top_right },
                        Tag::Twist,
                        Tag::String { right: !top_right },
                    ],
                });
            }
        }
        out
    }

    /// Closes pieces and connectors into oriented cycles: the upper copy is
    /// traversed rightwards, the mirror copy leftwards.
    fn trace(&self, pieces: &[Piece], connectors: &[Connector]) -> Vec<(Route, Vec<usize>)> {
        let by_upper: BTreeMap<(usize, Side), usize> =
            connectors.iter().enumerate().map(|(i, c)| (c.upper, i)).collect();
        let by_lower: BTreeMap<(usize, Side), usize> =
            connectors.iter().enumerate().map(|(i, c)| (c.lower, i)).collect();
        let mut visited = vec![false; pieces.len()];
        let mut out = Vec::new();
        for start in 0..pieces.len() {
            if visited[start] {
                continue;
            }
            let mut route: Route = Vec::new();
            let mut branches = Vec::new();
            let mut cur = start;
            loop {
                visited[cur] = true;
                let piece = &pieces[cur];
                branches.push(piece.branch);
                for (p, t) in piece.points.iter().zip(&piece.tags) {
                    route.push((p.clone(), *t));
                }
                let down = &connectors[by_upper[&(cur, Side::Right)]];
                for (p, t) in down.points.iter().zip(&down.tags) {
                    route.push((p.clone(), *t));
                }
                let (low, side) = down.lower;
                debug_assert_eq!(side, Side::Right);
                let mirrored = &pieces[low];
                let n = mirrored.points.len();
                for k in (1..n).rev() {
                    route.push((self.reflect(&mirrored.points[k]), mirrored.tags[k - 1]));
                }
                let up = &connectors[by_lower[&(low, Side::Left)]];
                let m = up.points.len();
                for k in (1..m).rev() {
                    route.push((up.points[k].clone(), up.tags[k - 1]));
                }
                let (next, side) = up.upper;
                debug_assert_eq!(side, Side::Left);
                if next == start {
                    break;
                }
                cur = next;
            }
            branches.sort();
            branches.dedup();
            out.push((route, branches));
        }
        out
    }

    fn assemble(&self, routes: Vec<(Route, Vec<usize>)>) -> Result<LinkDiagram, String> {
        struct Seg<'r> {
            comp: usize,
            index: usize,
            a: &'r Point2,
            b: &'r Point2,
            tag: Tag,
            bbox: [f64; 4],
        }
        let mut segs = Vec::new();
        for (c, (route, _)) in routes.iter().enumerate() {
            for i in 0..route.len() {
                let a = &route[i].0;
                let b = &route[(i + 1) % route.len()].0;
                let (ax, ay) = a.to_f64();
                let (bx, by) = b.to_f64();
                segs.push(Seg {
                    comp: c,
                    index: i,
                    a,
                    b,
                    tag: route[i].1,
                    bbox: [ax.min(bx), ax.max(bx), ay.min(by), ay.max(by)],
                });
            }
        }

        struct Hit {
            position: Point2,
            role: CrossingRole,
            over: (usize, usize, Rational),
            under: (usize, usize, Rational),
        }
        let mut hits = Vec::new();
        let slack = 1e-9;
        for i in 0..segs.len() {
            for j in i + 1..segs.len() {
                let (s, t) = (&segs[i], &segs[j]);
                if s.bbox[1] + slack < t.bbox[0]
                    || t.bbox[1] + slack < s.bbox[0]
                    || s.bbox[3] + slack < t.bbox[2]
                    || t.bbox[3] + slack < s.bbox[2]
                {
                    continue;
                }
                if s.comp == t.comp {
                    let n = routes[s.comp].0.len();
                    if (s.index + 1) % n == t.index || (t.index + 1) % n == s.index {
                        continue;
                    }
                }
                match segment_contact(s.a, s.b, t.a, t.b) {
                    SegmentContact::Disjoint => {}
                    SegmentContact::Touch(p) => return Err(format!("{}", to_f64(&p.x))),
                    SegmentContact::Overlap => return Err(format!("{}", to_f64(&s.a.x))),
                    SegmentContact::Proper { s: ps, t: pt, point } => {
                        let (role, s_over) = self.classify(s.a, s.b, s.tag, t.a, t.b, t.tag, &point)?;
                        let sa = (s.comp, s.index, ps);
                        let ta = (t.comp, t.index, pt);
                        let (over, under) = if s_over { (sa, ta) } else { (ta, sa) };
                        hits.push(Hit { position: point, role, over, under });
                    }
                }
            }
        }

        hits.sort_by(|a, b| a.position.cmp(&b.position));
        let mut inserts: BTreeMap<(usize, usize), Vec<(Rational, Passage)>> = BTreeMap::new();
        let mut crossings = Vec::new();
        for (id, h) in hits.iter().enumerate() {
            crossings.push(Crossing { id, position: h.position.clone(), role: h.role, sign: 0 });
            for (who, over) in [(&h.over, true), (&h.under, false)] {
                inserts
                    .entry((who.0, who.1))
                    .or_default()
                    .push((who.2.clone(), Passage { crossing: id, over }));
            }
        }
        let mut components = Vec::new();
        for (c, (route, branches)) in routes.into_iter().enumerate() {
            let mut out = Vec::new();
            for (i, (p, _)) in route.iter().enumerate() {
                out.push(RouteVertex { position: p.clone(), passage: None });
                if let Some(list) = inserts.get_mut(&(c, i)) {
                    list.sort_by(|a, b| a.0.cmp(&b.0));
                    for (_, passage) in list.iter() {
                        let position = crossings[passage.crossing].position.clone();
                        out.push(RouteVertex { position, passage: Some(*passage) });
                    }
                }
            }
            components.push(Component { route: out, branches });
        }
        Ok(LinkDiagram::from_parts(crossings, components, self.mirror.clone()))
    }

    /// Role of a crossing and whether the first strand passes over.
    #[allow(clippy::too_many_arguments)]
    fn classify(
        &self,
        a0: &Point2,
        a1: &Point2,
        ta: Tag,
        b0: &Point2,
        b1: &Point2,
        tb: Tag,
        at: &Point2,
    ) -> Result<(CrossingRole, bool), String> {
        let upper = at.y > self.mirror;
        let slope = |p: &Point2, q: &Point2| (&q.y - &p.y) / (&q.x - &p.x);
        match (ta, tb) {
            (Tag::Curve, Tag::Curve) => {
                let smaller = slope(a0, a1) < slope(b0, b1);
                let a_over = match self.convention.slope {
                    SlopeRule::SmallerSlopeOver => smaller,
                    SlopeRule::LargerSlopeOver => !smaller,
                };
                let role = if upper { CrossingRole::DoubleUpper } else { CrossingRole::DoubleLower };
                Ok((role, a_over))
            }
            (Tag::String { right }, Tag::Curve) | (Tag::Curve, Tag::String { right }) => {
                // upper half: right string over, left string under; mirrored below
                let string_over = right == upper;
                let a_is_string = matches!(ta, Tag::String { .. });
                let role = if upper { CrossingRole::StringCurveUpper } else { CrossingRole::StringCurveLower };
                Ok((role, string_over == a_is_string))
            }
            (Tag::Twist, Tag::Twist) => {
                let rising = slope(a0, a1).is_positive();
                let a_over = match self.convention.twist {
                    TwistRule::RisingOver => rising,
                    TwistRule::FallingOver => !rising,
                };
                Ok((CrossingRole::HalfTwist, a_over))
            }
            _ => Err(to_f64(&at.x).to_string()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{canned, torus_divide, TorusParams};

    fn census(divide: &Divide, d: &LinkDiagram) {
        d.check_consistency().unwrap();
        let dp = divide.double_points().len();
        let tg = divide.tangencies().len();
        assert_eq!(d.count_role(CrossingRole::DoubleUpper), dp);
        assert_eq!(d.count_role(CrossingRole::DoubleLower), dp);
        assert_eq!(d.count_role(CrossingRole::HalfTwist), tg);
        assert_eq!(
            d.count_role(CrossingRole::StringCurveUpper),
            d.count_role(CrossingRole::StringCurveLower)
        );
        assert_eq!(d.writhe(), (2 * dp + tg) as i64);
    }

    #[test]
    fn monotone_arc_is_unknot() {
        let divide = canned("monotone").unwrap();
        let d = build_diagram(&divide).unwrap();
        assert_eq!((d.crossing_count(), d.component_count()), (0, 1));
        census(&divide, &d);
    }

    #[test]
    fn c_arc_has_one_kink() {
        let divide = canned("c-arc").unwrap();
        let d = build_diagram(&divide).unwrap();
        assert_eq!((d.crossing_count(), d.component_count()), (1, 1));
        assert_eq!(d.crossings()[0].role, CrossingRole::HalfTwist);
        census(&divide, &d);
    }

    #[test]
    fn folded_arcs_are_unknots() {
        use crate::invariants::conway_skein;
        let z = [(-99, 5), (50, 30), (-50, 0), (50, -30), (99, -5)];
        let s = [(-90, -40), (50, -60), (-50, -40), (50, -20), (99, -10)];
        for pts in [z, s] {
            let b = Branch::open(pts.iter().map(|&(x, y)| Point2::from_ratios((x, 100), (y, 100))).collect());
            let divide = crate::divide::validate(vec![b]).unwrap();
            let d = build_diagram(&divide).unwrap();
            census(&divide, &d);
            assert!(d.count_role(CrossingRole::StringCurveUpper) > 0);
            assert!(conway_skein(&d).unwrap().is_one());
        }
    }

    #[test]
    fn cross_is_hopf() {
        let divide = canned("cross").unwrap();
        let d = build_diagram(&divide).unwrap();
        assert_eq!((d.crossing_count(), d.component_count()), (2, 2));
        assert!(d.crossings().iter().all(|c| c.sign == 1));
        census(&divide, &d);
    }

    #[test]
    fn larger_slope_rule_gives_negative_hopf() {
        let divide = canned("cross").unwrap();
        let config = DiagramConfig {
            convention: Convention { slope: SlopeRule::LargerSlopeOver, twist: TwistRule::RisingOver },
            ..DiagramConfig::default()
        };
        let d = build_diagram_with(&divide, &config).unwrap();
        assert!(d.crossings().iter().all(|c| c.sign == -1));
    }

    #[test]
    fn torus_components_and_census() {
        for (p, q, comps) in [(2, 3, 1), (3, 4, 1), (2, 4, 2), (2, 5, 1)] {
            let divide = torus_divide(TorusParams::new(p, q), 0).unwrap();
            let d = build_diagram(&divide).unwrap();
            assert_eq!(d.component_count(), comps, "({p},{q})");
            census(&divide, &d);
        }
    }

    #[test]
    fn crossing_ids_follow_position() {
        let divide = canned("e6").unwrap();
        let d = build_diagram(&divide).unwrap();
        census(&divide, &d);
        for w in d.crossings().windows(2) {
            assert!(w[0].position < w[1].position);
        }
    }

    #[test]
    fn mirror_gap_must_be_positive() {
        let divide = canned("monotone").unwrap();
        let config = DiagramConfig { mirror_gap: int(0), ..DiagramConfig::default() };
        assert_eq!(build_diagram_with(&divide, &config), Err(DiagramError::InvalidGap));
    }

    #[test]
    fn non_generic_input_is_rejected() {
        let b = Branch::open(vec![
            Point2::from_ratios((0, 1), (99, 100)),
            Point2::from_ratios((1, 10), (1, 2)),
            Point2::from_ratios((-2, 5), (-1, 5)),
            Point2::from_ratios((197, 200), (-3, 25)),
        ]);
        let divide = crate::divide::validate(vec![b]).unwrap();
        assert!(matches!(build_diagram(&divide), Err(DiagramError::NotGeneric(_))));
    }
}
