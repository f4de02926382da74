use std::fmt;

use super::{LinkDiagram, Passage};

/// Planar diagram code. A diagram without crossings is stored with no
/// tuples and read as the unknot or an unlink.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PdCode {
    pub tuples: Vec<PdTuple>,
    /// Total number of link components.
    pub components: usize,
    /// Components that meet no crossing.
    pub free_loops: usize,
}

/// `X[i, j, k, l]`, counterclockwise from the incoming under-edge `i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PdTuple(pub [usize; 4]);

impl PdCode {
    pub fn is_crossingless(&self) -> bool {
        self.tuples.is_empty()
    }

    pub fn edge_count(&self) -> usize {
        2 * self.tuples.len()
    }
}

impl fmt::Display for PdTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [i, j, k, l] = self.0;
        write!(f, "X[{i},{j},{k},{l}]")
    }
}

impl fmt::Display for PdCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.tuples.is_empty() {
            return match self.components {
                1 => write!(f, "PD[unknot]"),
                n => write!(f, "PD[unlink {n}]"),
            };
        }
        let body: Vec<String> = self.tuples.iter().map(|t| t.to_string()).collect();
        write!(f, "PD[{}]", body.join(", "))?;
        if self.free_loops > 0 {
            write!(f, " + {} free loop{}", self.free_loops, if self.free_loops == 1 { "" } else { "s" })?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GaussEntry {
    pub crossing: usize,
    pub over: bool,
    pub sign: i32,
}

impl fmt::Display for GaussEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ou = if self.over { 'O' } else { 'U' };
        let s = if self.sign > 0 { '+' } else { '-' };
        write!(f, "{ou}{}{s}", self.crossing + 1)
    }
}

/// Signed passage sequences, one per component.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaussCode {
    pub components: Vec<Vec<GaussEntry>>,
}

impl GaussCode {
    /// Rebuilds the planar diagram code from the passage sequences alone.
    pub fn to_pd(&self) -> PdCode {
        let n = self.components.iter().map(Vec::len).sum::<usize>() / 2;
        let mut ends = vec![[0usize; 4]; n];
        let mut signs = vec![0; n];
        let mut base = 0;
        for seq in &self.components {
            let m = seq.len();
            for (k, e) in seq.iter().enumerate() {
                let incoming = base + (k + m - 1) % m + 1;
                let outgoing = base + k + 1;
                let slot = &mut ends[e.crossing];
                if e.over {
                    slot[2] = incoming;
                    slot[3] = outgoing;
                } else {
                    slot[0] = incoming;
                    slot[1] = outgoing;
                }
                signs[e.crossing] = e.sign;
            }
            base += m;
        }
        let tuples = ends
            .iter()
            .zip(&signs)
            .map(|(&[ui, uo, oi, oo], &s)| pd_tuple(ui, uo, oi, oo, s))
            .collect();
        PdCode {
            tuples,
            components: self.components.len(),
            free_loops: self.components.iter().filter(|c| c.is_empty()).count(),
        }
    }
}

impl fmt::Display for GaussCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .components
            .iter()
            .map(|c| {
                if c.is_empty() {
                    "()".to_string()
                } else {
                    c.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(" ")
                }
            })
            .collect();
        f.write_str(&parts.join(" / "))
    }
}

fn pd_tuple(under_in: usize, under_out: usize, over_in: usize, over_out: usize, sign: i32) -> PdTuple {
    if sign > 0 {
        PdTuple([under_in, over_out, under_out, over_in])
    } else {
        PdTuple([under_in, over_in, under_out, over_out])
    }
}

/// Passages of a component rotated to start at its lowest crossing id,
/// under-passage first.
fn based_passages(diagram: &LinkDiagram, component: usize) -> Vec<Passage> {
    let mut ps = diagram.components()[component].passages();
    if let Some(start) = (0..ps.len()).min_by_key(|&k| (ps[k].crossing, ps[k].over)) {
        ps.rotate_left(start);
    }
    ps
}

pub fn gauss_code(diagram: &LinkDiagram) -> GaussCode {
    let components = (0..diagram.component_count())
        .map(|c| {
            based_passages(diagram, c)
                .into_iter()
                .map(|p| GaussEntry {
                    crossing: p.crossing,
                    over: p.over,
                    sign: diagram.crossings()[p.crossing].sign,
                })
                .collect()
        })
        .collect();
    GaussCode { components }
}

/// Edges are numbered along each component from its basepoint; the edge
/// leaving the `k`-th passage gets the next label.
pub fn pd_code(diagram: &LinkDiagram) -> PdCode {
    let n = diagram.crossing_count();
    let mut under: Vec<Option<(usize, usize)>> = vec![None; n];
    let mut over: Vec<Option<(usize, usize)>> = vec![None; n];
    let mut base = 0;
    let mut free_loops = 0;
    for c in 0..diagram.component_count() {
        let ps = based_passages(diagram, c);
        let m = ps.len();
        if m == 0 {
            free_loops += 1;
        }
        for (k, p) in ps.iter().enumerate() {
            let labels = (base + (k + m - 1) % m + 1, base + k + 1);
            if p.over {
                over[p.crossing] = Some(labels);
            } else {
                under[p.crossing] = Some(labels);
            }
        }
        base += m;
    }
    let tuples = diagram
        .crossings()
        .iter()
        .map(|x| {
            let (ui, uo) = under[x.id].expect("every crossing has an under-passage");
            let (oi, oo) = over[x.id].expect("every crossing has an over-passage");
            pd_tuple(ui, uo, oi, oo, x.sign)
        })
        .collect();
    PdCode { tuples, components: diagram.component_count(), free_loops }
}
