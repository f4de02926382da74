use std::collections::HashMap;

use num_traits::Zero;

use super::{LinkDiagram, Passage, RouteVertex};

/// Checks that reflecting in the mirror line, swapping every crossing, and
/// reversing every component maps the diagram onto itself.
pub fn involution_check(diagram: &LinkDiagram) -> bool {
    let m = diagram.mirror_y();
    let by_position: HashMap<_, usize> =
        diagram.crossings().iter().map(|c| (c.position.clone(), c.id)).collect();
    let mut sigma = Vec::with_capacity(diagram.crossing_count());
    for c in diagram.crossings() {
        let Some(&image) = by_position.get(&c.position.reflect_y(m)) else { return false };
        let target = &diagram.crossings()[image];
        if target.role != c.role.mirrored() || target.sign != c.sign {
            return false;
        }
        sigma.push(image);
    }
    if sigma.iter().enumerate().any(|(k, &s)| sigma[s] != k) {
        return false;
    }

    let mut used = vec![false; diagram.component_count()];
    for comp in diagram.components() {
        let image: Vec<RouteVertex> = comp
            .route
            .iter()
            .rev()
            .map(|v| RouteVertex {
                position: v.position.reflect_y(m),
                passage: v.passage.map(|p| Passage { crossing: sigma[p.crossing], over: !p.over }),
            })
            .collect();
        let found = diagram
            .components()
            .iter()
            .enumerate()
            .find(|(j, other)| !used[*j] && cyclic_eq(&other.route, &image));
        match found {
            Some((j, _)) => used[j] = true,
            None => return false,
        }
    }
    true
}

fn cyclic_eq(a: &[RouteVertex], b: &[RouteVertex]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    if a.is_empty() {
        return true;
    }
    (0..a.len()).any(|shift| a[shift] == b[0] && (0..a.len()).all(|k| a[(shift + k) % a.len()] == b[k]))
}

/// Orients every component so that it runs rightwards along the divide and
/// leftwards along the mirror copy, and recomputes crossing signs.
///
/// Branch orientation flags are accepted for every branch but cannot change
/// the result: reversing a branch of the divide yields the same oriented link.
pub fn orient_and_sign(diagram: &LinkDiagram, _branch_orientations: Option<&[bool]>) -> LinkDiagram {
    let mut out = diagram.clone();
    let m = diagram.mirror_y().clone();
    for c in 0..out.component_count() {
        let route = &out.components()[c].route;
        let n = route.len();
        let rightward = (0..n).find_map(|i| {
            let a = &route[i].position;
            let b = &route[(i + 1) % n].position;
            let dx = &b.x - &a.x;
            (a.y > m && b.y > m && !dx.is_zero()).then(|| dx > Zero::zero())
        });
        if rightward == Some(false) {
            out.components[c].route.reverse();
        }
    }
    out.recompute_signs();
    out
}
