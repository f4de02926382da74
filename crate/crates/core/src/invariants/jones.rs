use std::collections::BTreeMap;

use num_bigint::BigInt;

use crate::diagram::{pd_code, LinkDiagram};

use super::poly::{LaurentPolynomial, Variable};
use super::InvariantError;

pub const DEFAULT_JONES_CAP: usize = 20;

/// Jones polynomial `V = (-A^3)^{-w} <D>` at `t = A^{-4}`, from the
/// Kauffman bracket summed over all smoothings. The result uses
/// [`Variable::SqrtT`], so half-integer powers are exact.
pub fn jones_kauffman(diagram: &LinkDiagram, cap: usize) -> Result<LaurentPolynomial, InvariantError> {
    let n = diagram.crossing_count();
    if n > cap {
        return Err(InvariantError::ResourceLimit { crossings: n, cap });
    }
    let pd = pd_code(diagram);
    let edges = pd.edge_count();

    // (exponent of A, loop count) -> number of states
    let mut tally: BTreeMap<(i64, usize), u64> = BTreeMap::new();
    let mut parent = vec![0usize; edges + 1];
    for state in 0u64..(1u64 << n) {
        for (i, p) in parent.iter_mut().enumerate() {
            *p = i;
        }
        let mut a_minus_b = 0i64;
        for (k, t) in pd.tuples.iter().enumerate() {
            let [i, j, kk, l] = t.0;
            if state >> k & 1 == 0 {
                a_minus_b += 1;
                union(&mut parent, i, j);
                union(&mut parent, kk, l);
            } else {
                a_minus_b -= 1;
                union(&mut parent, i, l);
                union(&mut parent, j, kk);
            }
        }
        let loops = (1..=edges).filter(|&e| find(&mut parent, e) == e).count() + pd.free_loops;
        *tally.entry((a_minus_b, loops)).or_default() += 1;
    }

    // d = -A^2 - A^-2
    let d = LaurentPolynomial::from_terms(Variable::A, [(2, -1), (-2, -1)]);
    let mut powers = vec![LaurentPolynomial::one(Variable::A)];
    let mut bracket = LaurentPolynomial::zero(Variable::A);
    for ((e, loops), count) in tally {
        while powers.len() < loops {
            let next = powers.last().unwrap() * &d;
            powers.push(next);
        }
        let term = powers[loops - 1].shift(e).scale(&BigInt::from(count));
        bracket = &bracket + &term;
    }

    let w = diagram.writhe();
    let sign = if w % 2 == 0 { 1 } else { -1 };
    let normalized = bracket.shift(-3 * w).scale(&BigInt::from(sign));
    if normalized.terms().any(|(e, _)| e % 2 != 0) {
        return Err(InvariantError::DegenerateDiagram("odd power of A in the bracket".into()));
    }
    Ok(normalized.map_exponents(|e| -e / 2).with_var(Variable::SqrtT))
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

fn union(parent: &mut [usize], a: usize, b: usize) {
    let (ra, rb) = (find(parent, a), find(parent, b));
    if ra != rb {
        parent[ra] = rb;
    }
}
