//! Programmatic divides: Chebyshev (torus-type) curves, the bundled corpus,
//! and seeded random chord systems.

use std::f64::consts::PI;

use num_integer::Integer;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::divide::{
    genericity_check, normalize_endpoints, perturb_to_generic, validate, Branch, Divide,
    DivideError, ViolationCode,
};
use crate::dsl::{parse, ParseError};
use crate::geometry::{from_f64_grid, ratio, Point2};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeneratorError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("unknown example {0:?}")]
    UnknownName(String),
    #[error("generation failed: {0}")]
    GenerationFailed(String),
    #[error(transparent)]
    Divide(#[from] DivideError),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TorusParams {
    pub p: u32,
    pub q: u32,
    pub samples: u32,
}

impl TorusParams {
    pub fn new(p: u32, q: u32) -> Self {
        TorusParams { p, q, samples: 8 * p * q }
    }

    pub fn with_samples(self, samples: u32) -> Self {
        TorusParams { samples, ..self }
    }

    fn check(&self) -> Result<(), GeneratorError> {
        if self.p == 0 || self.q == 0 {
            return Err(GeneratorError::InvalidParams("p and q must be positive".into()));
        }
        if self.samples < 8 * self.p * self.q {
            return Err(GeneratorError::InvalidParams(format!(
                "samples = {} is below 8pq = {}",
                self.samples,
                8 * self.p * self.q
            )));
        }
        Ok(())
    }
}

/// Half-width of the square holding the Chebyshev curve; its corners sit at radius 0.97.
const BOX: f64 = 0.97 / std::f64::consts::SQRT_2;
const SHEAR: f64 = 1.0 / 64.0;
const GRID_BITS: u32 = 24;

fn perturb_epsilon() -> crate::geometry::Rational {
    ratio(1, 1 << 14)
}

/// Divide of the singularity `x^p + y^q`: the real Chebyshev curve
/// `T_q(x) = T_p(y)` in a square inside the disk.
///
/// With `d = gcd(p, q)` the curve splits into `x = cos(p'πt + 2πj/q)`,
/// `y = cos(q'πt)` for `j = 0..=d/2`; `j = 0` (and `j = d/2` for even `d`)
/// are arcs between corners of the square, the others closed curves.
pub fn torus_divide(params: TorusParams, seed: u64) -> Result<Divide, GeneratorError> {
    params.check()?;
    let (p, q) = (params.p as u64, params.q as u64);
    let d = p.gcd(&q);
    let (pp, qq) = (p / d, q / d);
    let n = params.samples as usize;

    let mut branches = Vec::new();
    for j in 0..=d / 2 {
        let phase = 2.0 * PI * j as f64 / q as f64;
        let curve = |t: f64| ((pp as f64 * PI * t + phase).cos(), (qq as f64 * PI * t).cos());
        if j == 0 || 2 * j == d {
            let t0 = if j == 0 {
                0.0
            } else {
                // start at a corner: p' m = -1 (mod q')
                let m = (0..qq).find(|m| (pp * m + 1) % qq == 0).unwrap_or(0);
                m as f64 / qq as f64
            };
            let mut ts = vec![t0];
            ts.extend((0..n).map(|k| t0 + (k as f64 + 0.5) / n as f64));
            ts.push(t0 + 1.0);
            let mut pts: Vec<(f64, f64)> = ts.iter().map(|t| curve(*t)).collect();
            // the end samples are exact corners
            let first = pts[0];
            let last = pts[pts.len() - 1];
            pts[0] = (first.0.round(), first.1.round());
            let l = pts.len() - 1;
            pts[l] = (last.0.round(), last.1.round());
            let mut vertices: Vec<Point2> = pts.iter().map(|&(x, y)| place(x, y)).collect();
            vertices.insert(0, boundary_end(pts[0]));
            vertices.push(boundary_end(pts[l]));
            branches.push(Branch::open(vertices));
        } else {
            let m = 2 * n;
            let vertices = (0..m)
                .map(|k| {
                    let (x, y) = curve(2.0 * (k as f64 + 0.5) / m as f64);
                    place(x, y)
                })
                .collect();
            branches.push(Branch::closed(vertices));
        }
    }

    let divide = validate(branches)?;
    let divide = if genericity_check(&divide).has(ViolationCode::EndpointRayBlocked) {
        normalize_endpoints(&divide)?
    } else {
        divide
    };
    Ok(perturb_to_generic(&divide, &perturb_epsilon(), seed)?)
}

/// Maps a point of the unit square into the disk and applies the fixed shear.
fn place(x: f64, y: f64) -> Point2 {
    let (x, y) = (BOX * x, BOX * y);
    Point2::new(from_f64_grid(x + SHEAR * y, GRID_BITS), from_f64_grid(y, GRID_BITS))
}

/// Horizontal continuation of a corner out to the boundary annulus.
/// Upper corners reach a slightly larger radius so endpoint abscissae differ.
fn boundary_end(corner: (f64, f64)) -> Point2 {
    let y = BOX * corner.1;
    let r: f64 = if corner.1 > 0.0 { 0.995 } else { 0.985 };
    let x = corner.0.signum() * (r * r - y * y).sqrt();
    Point2::new(from_f64_grid(x, GRID_BITS), from_f64_grid(y, GRID_BITS))
}

pub const CANNED_NAMES: [&str; 7] =
    ["e6", "e6-alt1", "e6-alt2", "ac-10-145", "cross", "c-arc", "monotone"];

/// Source text of a bundled corpus divide.
pub fn canned_source(name: &str) -> Option<&'static str> {
    Some(match name {
        "e6" => include_str!("../corpus/e6.divide"),
        "e6-alt1" => include_str!("../corpus/e6-alt1.divide"),
        "e6-alt2" => include_str!("../corpus/e6-alt2.divide"),
        "ac-10-145" => include_str!("../corpus/ac-10-145.divide"),
        "cross" => include_str!("../corpus/cross.divide"),
        "c-arc" => include_str!("../corpus/c-arc.divide"),
        "monotone" => include_str!("../corpus/monotone.divide"),
        _ => return None,
    })
}

pub fn canned(name: &str) -> Result<Divide, GeneratorError> {
    let src = canned_source(name).ok_or_else(|| GeneratorError::UnknownName(name.to_string()))?;
    Ok(parse(src)?.to_divide()?)
}

const RANDOM_ATTEMPTS: usize = 200;

/// Seeded open branches whose endpoints all lie on the lower boundary arc.
pub fn random_divide(n_branches: usize, max_vertices: usize, seed: u64) -> Result<Divide, GeneratorError> {
    if n_branches == 0 || n_branches > 8 {
        return Err(GeneratorError::InvalidParams("n_branches must be in 1..=8".into()));
    }
    if !(2..=40).contains(&max_vertices) {
        return Err(GeneratorError::InvalidParams("max_vertices must be in 2..=40".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let grid = |v: f64| from_f64_grid(v, 16);
    for _ in 0..RANDOM_ATTEMPTS {
        let mut angles: Vec<f64> =
            (0..2 * n_branches).map(|_| rng.gen_range(PI + 0.2..2.0 * PI - 0.2)).collect();
        angles.shuffle(&mut rng);
        let branches: Vec<Branch> = angles
            .chunks(2)
            .map(|pair| {
                let end = |a: f64| Point2::new(grid(0.99 * a.cos()), grid(0.99 * a.sin()));
                let interior = rng.gen_range(0..=max_vertices - 2);
                let mut vertices = vec![end(pair[0])];
                while vertices.len() < interior + 1 {
                    let (x, y): (f64, f64) = (rng.gen_range(-0.9..0.9), rng.gen_range(-0.9..0.9));
                    if x * x + y * y < 0.81 {
                        vertices.push(Point2::new(grid(x), grid(y)));
                    }
                }
                vertices.push(end(pair[1]));
                Branch::open(vertices)
            })
            .collect();
        let Ok(divide) = validate(branches) else { continue };
        let seed = rng.gen();
        if let Ok(d) = perturb_to_generic(&divide, &ratio(1, 1 << 12), seed) {
            return Ok(d);
        }
    }
    Err(GeneratorError::GenerationFailed(format!(
        "no generic divide after {RANDOM_ATTEMPTS} attempts"
    )))
}
