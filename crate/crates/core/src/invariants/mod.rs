//! Link invariants of oriented diagrams with exact integer arithmetic.

mod alexander;
mod conway;
mod jones;
mod poly;

use thiserror::Error;

use crate::diagram::{gauss_code, GaussCode, LinkDiagram};

pub use alexander::{alexander_fox, normalize_alexander};
pub use conway::{alexander_from_conway, conway_skein, conway_skein_capped, DEFAULT_CONWAY_CAP};
pub use jones::{jones_kauffman, DEFAULT_JONES_CAP};
pub use poly::{LaurentPolynomial, Variable};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InvariantError {
    #[error("diagram has {0} components; this invariant needs a knot")]
    MultiComponent(usize),
    #[error("degenerate diagram: {0}")]
    DegenerateDiagram(String),
    #[error("{crossings} crossings exceed the cap of {cap}")]
    ResourceLimit { crossings: usize, cap: usize },
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("polynomial mixes odd and even powers of z")]
    MixedParity,
}

pub fn component_count(diagram: &LinkDiagram) -> usize {
    diagram.component_count()
}

/// Symmetric matrix of pairwise linking numbers; the diagonal is zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinkingMatrix {
    entries: Vec<Vec<i64>>,
}

impl LinkingMatrix {
    pub fn size(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.entries[i][j]
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.entries
    }
}

pub fn writhe_and_linking(diagram: &LinkDiagram) -> (i64, LinkingMatrix) {
    let code = gauss_code(diagram);
    let n = code.components.len();
    let mut owner = vec![Vec::new(); diagram.crossing_count()];
    for (c, seq) in code.components.iter().enumerate() {
        for e in seq {
            owner[e.crossing].push(c);
        }
    }
    let mut twice = vec![vec![0i64; n]; n];
    for (x, comps) in owner.iter().enumerate() {
        if let [a, b] = comps[..] {
            if a != b {
                let s = diagram.crossings()[x].sign as i64;
                twice[a][b] += s;
                twice[b][a] += s;
            }
        }
    }
    let entries = twice.into_iter().map(|row| row.into_iter().map(|v| v / 2).collect()).collect();
    (diagram.writhe(), LinkingMatrix { entries })
}

/// Crossing `k` of a [`Strands`] value, by edge indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
struct Xing {
    under_in: usize,
    under_out: usize,
    over_in: usize,
    over_out: usize,
    sign: i32,
}

/// Edge-labelled view of a Gauss code: edge `e` leaves the passage at
/// position `e - base` of its component.
#[derive(Debug, Clone)]
struct Strands {
    xings: Vec<Xing>,
    edges: usize,
}

impl Strands {
    fn from_gauss(code: &GaussCode) -> Self {
        let n = code.components.iter().map(Vec::len).sum::<usize>() / 2;
        let mut xings = vec![Xing { under_in: 0, under_out: 0, over_in: 0, over_out: 0, sign: 0 }; n];
        let mut base = 0;
        for seq in &code.components {
            let m = seq.len();
            for (k, e) in seq.iter().enumerate() {
                let incoming = base + (k + m - 1) % m;
                let outgoing = base + k;
                let x = &mut xings[e.crossing];
                if e.over {
                    x.over_in = incoming;
                    x.over_out = outgoing;
                } else {
                    x.under_in = incoming;
                    x.under_out = outgoing;
                }
                x.sign = e.sign;
            }
            base += m;
        }
        Strands { xings, edges: base }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::build_diagram;
    use crate::divide::{validate, Branch};
    use crate::generators::{canned, torus_divide, TorusParams};
    use crate::geometry::Point2;

    #[test]
    fn linking_numbers() {
        let d = build_diagram(&canned("monotone").unwrap()).unwrap();
        let (w, l) = writhe_and_linking(&d);
        assert_eq!((w, l.size()), (0, 1));

        let d = build_diagram(&canned("cross").unwrap()).unwrap();
        let (_, l) = writhe_and_linking(&d);
        assert_eq!((l.get(0, 1), l.get(1, 0)), (1, 1));

        let far = validate(vec![
            Branch::open(vec![Point2::from_ratios((-99, 100), (1, 20)), Point2::from_ratios((-1, 10), (-49, 50))]),
            Branch::open(vec![Point2::from_ratios((3, 20), (-49, 50)), Point2::from_ratios((197, 200), (1, 10))]),
        ])
        .unwrap();
        let d = build_diagram(&far).unwrap();
        assert_eq!(writhe_and_linking(&d).1.get(0, 1), 0);

        let d = build_diagram(&torus_divide(TorusParams::new(2, 4), 0).unwrap()).unwrap();
        assert_eq!(component_count(&d), 2);
        assert_eq!(writhe_and_linking(&d).1.get(0, 1), 2);
    }
}
