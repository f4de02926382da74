//! Exact planar primitives over big rationals.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rational = BigRational;

/// `n/d` as a big rational. Panics when `d == 0`.
pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Rounds `v` onto the dyadic grid with `2^bits` steps per unit.
pub fn from_f64_grid(v: f64, bits: u32) -> Rational {
    let scale = (1u64 << bits) as f64;
    let n = (v * scale).round() as i64;
    Rational::new(BigInt::from(n), BigInt::from(1u64 << bits))
}

pub fn to_f64(v: &Rational) -> f64 {
    v.to_f64().unwrap_or(f64::NAN)
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point2 {
    pub x: Rational,
    pub y: Rational,
}

impl Point2 {
    pub fn new(x: Rational, y: Rational) -> Self {
        Point2 { x, y }
    }

    pub fn from_ratios(x: (i64, i64), y: (i64, i64)) -> Self {
        Point2::new(ratio(x.0, x.1), ratio(y.0, y.1))
    }

    pub fn norm_sq(&self) -> Rational {
        &self.x * &self.x + &self.y * &self.y
    }

    pub fn sub(&self, o: &Point2) -> Point2 {
        Point2::new(&self.x - &o.x, &self.y - &o.y)
    }

    pub fn add(&self, o: &Point2) -> Point2 {
        Point2::new(&self.x + &o.x, &self.y + &o.y)
    }

    pub fn scale(&self, k: &Rational) -> Point2 {
        Point2::new(&self.x * k, &self.y * k)
    }

    /// Point at parameter `s` on the segment `self -> o`.
    pub fn lerp(&self, o: &Point2, s: &Rational) -> Point2 {
        self.add(&o.sub(self).scale(s))
    }

    /// Reflection across the horizontal line `y = axis`.
    pub fn reflect_y(&self, axis: &Rational) -> Point2 {
        Point2::new(self.x.clone(), int(2) * axis - &self.y)
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (to_f64(&self.x), to_f64(&self.y))
    }
}

impl fmt::Debug for Point2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

pub fn cross(a: &Point2, b: &Point2) -> Rational {
    &a.x * &b.y - &a.y * &b.x
}

/// Twice the signed area of the triangle `a b c`.
pub fn orient(a: &Point2, b: &Point2, c: &Point2) -> Rational {
    cross(&b.sub(a), &c.sub(a))
}

fn sign(v: &Rational) -> i8 {
    if v.is_positive() {
        1
    } else if v.is_negative() {
        -1
    } else {
        0
    }
}

/// Is `p` on the closed segment `a b`?
pub fn on_segment(a: &Point2, b: &Point2, p: &Point2) -> bool {
    if !orient(a, b, p).is_zero() {
        return false;
    }
    let (lx, hx) = minmax(&a.x, &b.x);
    let (ly, hy) = minmax(&a.y, &b.y);
    lx <= &p.x && &p.x <= hx && ly <= &p.y && &p.y <= hy
}

fn minmax<'a>(a: &'a Rational, b: &'a Rational) -> (&'a Rational, &'a Rational) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// How two closed segments meet.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SegmentContact {
    Disjoint,
    /// Interiors cross transversally at parameters `s` (first) and `t` (second), both in (0,1).
    Proper { s: Rational, t: Rational, point: Point2 },
    /// They touch at a point that is an endpoint of at least one of them.
    Touch(Point2),
    /// Collinear with a shared piece of positive length.
    Overlap,
}

pub fn segment_contact(a0: &Point2, a1: &Point2, b0: &Point2, b1: &Point2) -> SegmentContact {
    // bounding boxes first; cheap rejection
    let (alx, ahx) = minmax(&a0.x, &a1.x);
    let (blx, bhx) = minmax(&b0.x, &b1.x);
    if ahx < blx || bhx < alx {
        return SegmentContact::Disjoint;
    }
    let (aly, ahy) = minmax(&a0.y, &a1.y);
    let (bly, bhy) = minmax(&b0.y, &b1.y);
    if ahy < bly || bhy < aly {
        return SegmentContact::Disjoint;
    }

    let o1 = orient(a0, a1, b0);
    let o2 = orient(a0, a1, b1);
    let o3 = orient(b0, b1, a0);
    let o4 = orient(b0, b1, a1);
    let (s1, s2, s3, s4) = (sign(&o1), sign(&o2), sign(&o3), sign(&o4));

    if s1 * s2 < 0 && s3 * s4 < 0 {
        let s = &o3 / (&o3 - &o4);
        let t = &o1 / (&o1 - &o2);
        let point = a0.lerp(a1, &s);
        return SegmentContact::Proper { s, t, point };
    }
    if s1 == 0 && s2 == 0 {
        // collinear: compare projections on the dominant axis
        let key = |p: &Point2| if a0.x != a1.x { p.x.clone() } else { p.y.clone() };
        let (ka0, ka1) = (key(a0), key(a1));
        let (kb0, kb1) = (key(b0), key(b1));
        let (al, ah) = minmax(&ka0, &ka1);
        let (bl, bh) = minmax(&kb0, &kb1);
        let lo = if al > bl { al } else { bl };
        let hi = if ah < bh { ah } else { bh };
        return match lo.cmp(hi) {
            Ordering::Less => SegmentContact::Overlap,
            Ordering::Equal => {
                let p = [a0, a1].into_iter().find(|p| &key(p) == lo).unwrap();
                SegmentContact::Touch(p.clone())
            }
            Ordering::Greater => SegmentContact::Disjoint,
        };
    }
    for (p, a, b) in [(b0, a0, a1), (b1, a0, a1), (a0, b0, b1), (a1, b0, b1)] {
        if on_segment(a, b, p) {
            return SegmentContact::Touch(p.clone());
        }
    }
    SegmentContact::Disjoint
}

/// y-coordinate of the non-vertical segment `a b` at abscissa `x`.
pub fn y_at(a: &Point2, b: &Point2, x: &Rational) -> Rational {
    let s = (x - &a.x) / (&b.x - &a.x);
    &a.y + (&b.y - &a.y) * s
}

/// Does the open segment `a b` strictly straddle the vertical line at `x`?
pub fn straddles(a: &Point2, b: &Point2, x: &Rational) -> bool {
    (&a.x < x && x < &b.x) || (&b.x < x && x < &a.x)
}

pub fn one() -> Rational {
    Rational::one()
}

pub fn zero() -> Rational {
    Rational::zero()
}
