use std::f64::consts::{PI, TAU};

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::geometry::{from_f64_grid, one, Point2, Rational};

use super::generic::{ray_obstruction, raw_report};
use super::{genericity_check, inner_radius_sq, validate, Branch, BranchKind, Divide, DivideError};

pub const PERTURB_ATTEMPTS: usize = 64;

const JITTER_STEPS: i64 = 1 << 16;

/// Seeded jitter of every vertex by at most `epsilon` per coordinate until
/// the divide is generic. An already generic divide is returned unchanged.
pub fn perturb_to_generic(divide: &Divide, epsilon: &Rational, seed: u64) -> Result<Divide, DivideError> {
    if genericity_check(divide).generic {
        return Ok(divide.clone());
    }
    perturb_branches(divide.branches(), epsilon, seed)
}

/// Like [`perturb_to_generic`] but accepts branches that fail validation
/// because of perturbable defects (triple points, vertex crossings).
pub fn perturb_branches(branches: &[Branch], epsilon: &Rational, seed: u64) -> Result<Divide, DivideError> {
    let report = raw_report(branches);
    if report.generic {
        return validate(branches.to_vec());
    }
    if let Some(v) = report.violations.iter().find(|v| !v.code.is_perturbable()) {
        return Err(DivideError::PerturbationFailed {
            attempts: 0,
            reason: format!("{}: {}", v.code, v.description),
        });
    }
    let expected_double_points = validate(branches.to_vec()).ok().map(|d| d.double_points().len());

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut stubborn = report.violations[0].description.clone();
    for _ in 0..PERTURB_ATTEMPTS {
        let candidate = jitter(branches, epsilon, &mut rng);
        let r = raw_report(&candidate);
        if !r.generic {
            stubborn = format!("{}: {}", r.violations[0].code, r.violations[0].description);
            continue;
        }
        let divide = validate(candidate)?;
        match expected_double_points {
            Some(n) if n != divide.double_points().len() => {
                stubborn = format!(
                    "jitter changed the double point count from {n} to {}",
                    divide.double_points().len()
                );
            }
            _ => return Ok(divide),
        }
    }
    Err(DivideError::PerturbationFailed { attempts: PERTURB_ATTEMPTS, reason: stubborn })
}

fn jitter(branches: &[Branch], epsilon: &Rational, rng: &mut ChaCha8Rng) -> Vec<Branch> {
    let inner = inner_radius_sq();
    let offset = |rng: &mut ChaCha8Rng| {
        let k = rng.gen_range(-JITTER_STEPS..=JITTER_STEPS);
        epsilon * Rational::new(BigInt::from(k), BigInt::from(JITTER_STEPS))
    };
    branches
        .iter()
        .map(|b| {
            let n = b.vertices.len();
            let vertices = b
                .vertices
                .iter()
                .enumerate()
                .map(|(i, v)| {
                    let moved = Point2::new(&v.x + offset(rng), &v.y + offset(rng));
                    let r2 = moved.norm_sq();
                    let end = b.kind == BranchKind::Open && (i == 0 || i + 1 == n);
                    let ok = if end { r2 >= inner && r2 <= one() } else { r2 < inner };
                    if ok {
                        moved
                    } else {
                        v.clone()
                    }
                })
                .collect();
            Branch { kind: b.kind, vertices }
        })
        .collect()
}

const ROUTE_RADIUS: f64 = 0.975;
const END_RADIUS: f64 = 0.99;
const ARC_STEP: f64 = 0.12;
const NEIGHBOUR_MARGIN: f64 = 0.03;

/// Reroutes open-branch ends whose downward ray is blocked.
///
/// Each offending end is continued along an arc just inside the boundary
/// annulus towards the bottom of the disk, without passing any other
/// endpoint. The double point count is kept; new tangencies may appear.
pub fn normalize_endpoints(divide: &Divide) -> Result<Divide, DivideError> {
    let mut current = divide.clone();
    let budget = 2 * current.branches().len() + 2;
    for _ in 0..budget {
        let Some((branch, last)) = first_blocked_end(&current) else {
            return Ok(current);
        };
        current = reroute(&current, branch, last)?;
    }
    match first_blocked_end(&current) {
        None => Ok(current),
        Some((b, _)) => Err(DivideError::NormalizationFailed(format!(
            "branch {b} still has a blocked endpoint"
        ))),
    }
}

fn first_blocked_end(divide: &Divide) -> Option<(usize, bool)> {
    divide.branches().iter().enumerate().find_map(|(b, br)| {
        let (first, last) = br.endpoints()?;
        if ray_obstruction(divide.branches(), first).is_some() {
            Some((b, false))
        } else if ray_obstruction(divide.branches(), last).is_some() {
            Some((b, true))
        } else {
            None
        }
    })
}

fn angle(p: &Point2) -> f64 {
    let (x, y) = p.to_f64();
    y.atan2(x).rem_euclid(TAU)
}

fn reroute(divide: &Divide, branch: usize, last: bool) -> Result<Divide, DivideError> {
    let br = &divide.branches()[branch];
    let end = if last { br.vertices.last().unwrap() } else { &br.vertices[0] };
    let theta = angle(end);
    let others: Vec<f64> = divide
        .branches()
        .iter()
        .filter_map(Branch::endpoints)
        .flat_map(|(a, b)| [a, b])
        .filter(|p| *p != end)
        .map(angle)
        .collect();
    let bottom = 1.5 * PI;

    let mut dirs = [1.0f64, -1.0];
    let to_bottom = |d: f64| ((bottom - theta) * d).rem_euclid(TAU);
    if to_bottom(-1.0) < to_bottom(1.0) {
        dirs.swap(0, 1);
    }
    let want = divide.double_points().len();
    for dir in dirs {
        let room = others
            .iter()
            .map(|a| ((a - theta) * dir).rem_euclid(TAU))
            .fold(TAU, f64::min)
            - NEIGHBOUR_MARGIN;
        if room <= 0.0 {
            continue;
        }
        let target = to_bottom(dir);
        let mut sweeps = Vec::new();
        if target < room {
            sweeps.push(target + 0.01);
        }
        sweeps.extend([1.0, 0.75, 0.5, 0.25].iter().map(|f| room * f));
        for sweep in sweeps {
            let candidate = extended_branch(br, last, theta, dir, sweep.min(room));
            let mut branches = divide.branches().to_vec();
            branches[branch] = candidate;
            let Ok(next) = validate(branches) else { continue };
            if next.double_points().len() != want {
                continue;
            }
            let nb = &next.branches()[branch];
            let new_end = if last { nb.vertices.last().unwrap() } else { &nb.vertices[0] };
            if ray_obstruction(next.branches(), new_end).is_none() {
                return Ok(next);
            }
        }
    }
    Err(DivideError::NormalizationFailed(format!(
        "no unobstructed reroute for the {} end of branch {branch}",
        if last { "last" } else { "first" }
    )))
}

fn polar(r: f64, a: f64) -> Point2 {
    Point2::new(from_f64_grid(r * a.cos(), 24), from_f64_grid(r * a.sin(), 24))
}

fn extended_branch(br: &Branch, last: bool, theta: f64, dir: f64, sweep: f64) -> Branch {
    let steps = (sweep / ARC_STEP).ceil().max(1.0) as usize;
    let mut tail: Vec<Point2> = (0..=steps)
        .map(|k| polar(ROUTE_RADIUS, theta + dir * sweep * k as f64 / steps as f64))
        .collect();
    tail.push(polar(END_RADIUS, theta + dir * sweep));
    let mut vertices = br.vertices.clone();
    if last {
        vertices.pop();
        vertices.extend(tail);
    } else {
        vertices.remove(0);
        tail.reverse();
        tail.extend(vertices);
        vertices = tail;
    }
    Branch { kind: br.kind, vertices }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::divide::ViolationCode;
    use crate::geometry::ratio;

    fn pt(x: f64, y: f64) -> Point2 {
        Point2::new(from_f64_grid(x, 20), from_f64_grid(y, 20))
    }

    fn eps() -> Rational {
        ratio(1, 1000)
    }

    #[test]
    fn generic_input_is_unchanged() {
        let d = validate(vec![Branch::open(vec![pt(-0.99, 0.05), pt(0.99, -0.03)])]).unwrap();
        assert_eq!(perturb_to_generic(&d, &eps(), 7).unwrap(), d);
    }

    #[test]
    fn shared_x_is_split_deterministically() {
        let c = Branch::closed(vec![
            pt(0.0, 0.5),
            pt(-0.5, 0.3),
            pt(-0.2, 0.0),
            pt(-0.5, -0.3),
            pt(0.0, -0.5),
            pt(0.4, 0.0),
        ]);
        let d = validate(vec![c]).unwrap();
        let a = perturb_to_generic(&d, &eps(), 3).unwrap();
        let b = perturb_to_generic(&d, &eps(), 3).unwrap();
        assert_eq!(a, b);
        assert!(genericity_check(&a).generic);
        for (u, v) in d.branches()[0].vertices.iter().zip(&a.branches()[0].vertices) {
            let dx = &u.x - &v.x;
            let dy = &u.y - &v.y;
            assert!(num_traits::Signed::abs(&dx) <= eps());
            assert!(num_traits::Signed::abs(&dy) <= eps());
        }
    }

    /// Chord through `c` with direction angle `deg`, ends on the lower arc near radius 0.99.
    fn chord_through(c: (f64, f64), deg: f64) -> Branch {
        let (dx, dy) = (deg.to_radians().cos(), deg.to_radians().sin());
        let (cx, cy) = (from_f64_grid(c.0, 10), from_f64_grid(c.1, 10));
        let (qx, qy) = (from_f64_grid(dx, 10), from_f64_grid(dy, 10));
        let b = c.0 * dx + c.1 * dy;
        let k = c.0 * c.0 + c.1 * c.1 - 0.99 * 0.99;
        let ends: Vec<Point2> = [-b - (b * b - k).sqrt(), -b + (b * b - k).sqrt()]
            .iter()
            .map(|t| {
                let t = from_f64_grid(*t, 10);
                Point2::new(&cx + &qx * &t, &cy + &qy * &t)
            })
            .collect();
        Branch::open(ends)
    }

    #[test]
    fn triple_point_is_resolved() {
        let chords: Vec<Branch> =
            [0.0, 15.0, -15.0].iter().map(|a| chord_through((0.0, -0.5), *a)).collect();
        assert!(matches!(validate(chords.clone()), Err(DivideError::TripleOrTangentIntersection(_))));
        let r = raw_report(&chords);
        assert!(r.has(ViolationCode::TriplePoint), "{r:?}");
        let d = perturb_branches(&chords, &eps(), 0).unwrap();
        assert_eq!(d.double_points().len(), 3);
        assert!(genericity_check(&d).generic);
    }

    #[test]
    fn blocked_endpoint_is_rerouted() {
        let b = Branch::open(vec![pt(0.0, 0.99), pt(0.1, 0.5), pt(-0.4, -0.2), pt(0.985, -0.12)]);
        let d = validate(vec![b]).unwrap();
        assert!(genericity_check(&d).has(ViolationCode::EndpointRayBlocked));
        let n = normalize_endpoints(&d).unwrap();
        assert!(!genericity_check(&n).has(ViolationCode::EndpointRayBlocked));
        assert_eq!(n.double_points().len(), d.double_points().len());
        let first = &n.branches()[0].vertices[0];
        assert!(first.y < crate::geometry::int(0));
    }

    #[test]
    fn unblocked_divide_is_unchanged_by_normalization() {
        let d = validate(vec![Branch::open(vec![pt(-0.99, 0.05), pt(0.99, -0.03)])]).unwrap();
        assert_eq!(normalize_endpoints(&d).unwrap(), d);
    }
}
