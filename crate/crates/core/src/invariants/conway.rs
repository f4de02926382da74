use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;

use crate::diagram::{gauss_code, LinkDiagram};

use super::alexander::normalize_alexander;
use super::poly::{LaurentPolynomial, Variable};
use super::InvariantError;

pub const DEFAULT_CONWAY_CAP: usize = 24;

pub fn conway_skein(diagram: &LinkDiagram) -> Result<LaurentPolynomial, InvariantError> {
    conway_skein_capped(diagram, DEFAULT_CONWAY_CAP)
}

/// Conway polynomial by the skein relation `∇(L+) - ∇(L-) = z ∇(L0)`,
/// switching crossings until the diagram is descending.
pub fn conway_skein_capped(diagram: &LinkDiagram, cap: usize) -> Result<LaurentPolynomial, InvariantError> {
    let n = diagram.crossing_count();
    if n > cap {
        return Err(InvariantError::ResourceLimit { crossings: n, cap });
    }
    let code = gauss_code(diagram);
    let state = State {
        comps: code.components.iter().map(|c| c.iter().map(|e| (e.crossing, e.over)).collect()).collect(),
        signs: diagram.crossings().iter().map(|c| c.sign as i8).collect(),
    };
    let mut memo = HashMap::new();
    Ok(nabla(state, &mut memo))
}

/// Gauss sequences with crossing signs indexed by crossing label.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct State {
    comps: Vec<Vec<(usize, bool)>>,
    signs: Vec<i8>,
}

impl State {
    /// Removes kinks (a crossing passed twice in a row) and relabels
    /// crossings by first appearance.
    fn canonical(mut self) -> State {
        loop {
            let mut kink = None;
            'find: for seq in &self.comps {
                let m = seq.len();
                for k in 0..m {
                    if m >= 2 && seq[k].0 == seq[(k + 1) % m].0 {
                        kink = Some(seq[k].0);
                        break 'find;
                    }
                }
            }
            match kink {
                Some(c) => {
                    for seq in &mut self.comps {
                        seq.retain(|p| p.0 != c);
                    }
                }
                None => break,
            }
        }
        let mut relabel = vec![usize::MAX; self.signs.len()];
        let mut signs = Vec::new();
        for seq in &mut self.comps {
            for p in seq.iter_mut() {
                if relabel[p.0] == usize::MAX {
                    relabel[p.0] = signs.len();
                    signs.push(self.signs[p.0]);
                }
                p.0 = relabel[p.0];
            }
        }
        State { comps: self.comps, signs }
    }

    fn locate(&self, c: usize, over: bool) -> (usize, usize) {
        for (i, seq) in self.comps.iter().enumerate() {
            if let Some(k) = seq.iter().position(|p| *p == (c, over)) {
                return (i, k);
            }
        }
        unreachable!("crossing {c} is passed both ways")
    }

    fn switched(&self, c: usize) -> State {
        let mut s = self.clone();
        for seq in &mut s.comps {
            for p in seq.iter_mut() {
                if p.0 == c {
                    p.1 = !p.1;
                }
            }
        }
        s.signs[c] = -s.signs[c];
        s
    }

    /// Oriented resolution of crossing `c`, whose under passage comes first.
    /// Every component keeps its base point, so the descending prefix survives.
    fn smoothed(&self, c: usize) -> State {
        let (cu, ku) = self.locate(c, false);
        let (co, ko) = self.locate(c, true);
        let mut comps = self.comps.clone();
        if cu == co {
            let seq = &self.comps[cu];
            let mut outer = seq[..ku].to_vec();
            outer.extend_from_slice(&seq[ko + 1..]);
            comps[cu] = outer;
            comps.insert(cu + 1, seq[ku + 1..ko].to_vec());
        } else {
            let (under, over) = (&self.comps[cu], &self.comps[co]);
            let mut merged = under[..ku].to_vec();
            merged.extend_from_slice(&over[ko + 1..]);
            merged.extend_from_slice(&over[..ko]);
            merged.extend_from_slice(&under[ku + 1..]);
            comps[cu] = merged;
            comps.remove(co);
        }
        State { comps, signs: self.signs.clone() }
    }
}

fn nabla(state: State, memo: &mut HashMap<State, LaurentPolynomial>) -> LaurentPolynomial {
    let state = state.canonical();
    if let Some(v) = memo.get(&state) {
        return v.clone();
    }
    if state.comps.len() > 1 && state.comps.iter().any(Vec::is_empty) {
        return LaurentPolynomial::zero(Variable::Z);
    }
    let mut seen = vec![false; state.signs.len()];
    let mut first_bad = None;
    'scan: for seq in &state.comps {
        for &(c, over) in seq {
            if !seen[c] {
                seen[c] = true;
                if !over {
                    first_bad = Some(c);
                    break 'scan;
                }
            }
        }
    }
    let value = match first_bad {
        None => {
            // descending: split union of unknots
            if state.comps.len() == 1 {
                LaurentPolynomial::one(Variable::Z)
            } else {
                LaurentPolynomial::zero(Variable::Z)
            }
        }
        Some(c) => {
            let sign = state.signs[c] as i64;
            let rest = nabla(state.switched(c), memo);
            let zero_part = nabla(state.smoothed(c), memo);
            &rest + &zero_part.shift(1).scale(&BigInt::from(sign))
        }
    };
    memo.insert(state, value.clone());
    value
}

/// Substitutes `z = t^{1/2} - t^{-1/2}` and normalizes. A polynomial with
/// only odd powers of `z` is first multiplied by `t^{1/2}`.
pub fn alexander_from_conway(nabla: &LaurentPolynomial) -> Result<LaurentPolynomial, InvariantError> {
    if nabla.is_zero() {
        return Ok(LaurentPolynomial::zero(Variable::T));
    }
    let odd = nabla.terms().next().is_some_and(|(e, _)| e.is_odd());
    if nabla.terms().any(|(e, _)| e.is_odd() != odd) {
        return Err(InvariantError::MixedParity);
    }
    // expand in s = t^{1/2}
    let mut s_poly = LaurentPolynomial::zero(Variable::T);
    for (k, c) in nabla.terms() {
        let mut binom = BigInt::from(1);
        for j in 0..=k {
            let sign = if j % 2 == 0 { BigInt::from(1) } else { BigInt::from(-1) };
            let term = LaurentPolynomial::monomial(Variable::T, k - 2 * j, c * &binom * sign);
            s_poly = &s_poly + &term;
            binom = binom * (k - j) / (j + 1);
        }
    }
    let s_poly = if odd { s_poly.shift(1) } else { s_poly };
    normalize_alexander(&s_poly.map_exponents(|e| e / 2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::build_diagram;
    use crate::generators::{canned, torus_divide, TorusParams};

    fn z(c: &[i64]) -> LaurentPolynomial {
        LaurentPolynomial::from_coeffs(Variable::Z, 0, c)
    }

    fn t(c: &[i64]) -> LaurentPolynomial {
        LaurentPolynomial::from_coeffs(Variable::T, 0, c)
    }

    #[test]
    fn small_links() {
        let nab = |name: &str| conway_skein(&build_diagram(&canned(name).unwrap()).unwrap()).unwrap();
        assert_eq!(nab("monotone"), z(&[1]));
        assert_eq!(nab("c-arc"), z(&[1]));
        assert_eq!(nab("cross"), z(&[0, 1]));
        let trefoil = build_diagram(&torus_divide(TorusParams::new(2, 3), 0).unwrap()).unwrap();
        assert_eq!(conway_skein(&trefoil).unwrap(), z(&[1, 0, 1]));
    }

    #[test]
    fn torus_links() {
        let d = build_diagram(&torus_divide(TorusParams::new(2, 4), 0).unwrap()).unwrap();
        // T(2,4): z^3 + 2z
        assert_eq!(conway_skein(&d).unwrap(), z(&[0, 2, 0, 1]));
        let d = build_diagram(&torus_divide(TorusParams::new(3, 4), 0).unwrap()).unwrap();
        assert_eq!(conway_skein(&d).unwrap(), z(&[1, 0, 5, 0, 5, 0, 1]));
    }

    #[test]
    fn cap_is_enforced() {
        let d = build_diagram(&torus_divide(TorusParams::new(3, 4), 0).unwrap()).unwrap();
        assert_eq!(
            conway_skein_capped(&d, 4),
            Err(InvariantError::ResourceLimit { crossings: d.crossing_count(), cap: 4 })
        );
    }

    #[test]
    fn substitution() {
        assert!(alexander_from_conway(&z(&[1])).unwrap().is_one());
        assert_eq!(alexander_from_conway(&z(&[1, 0, 1])).unwrap(), t(&[1, -1, 1]));
        assert_eq!(alexander_from_conway(&z(&[0, 1])).unwrap(), t(&[1, -1]));
        assert_eq!(alexander_from_conway(&z(&[1, 1])), Err(InvariantError::MixedParity));
    }
}
