//! Built-in finite models of the interval, circles and spheres, and the
//! maps between them. Opens are up-sets, so minimal points are closed cells.

use super::{Cover, MonotoneMap, PosetSite};
use crate::gcoh::FiniteGroup;

fn site(names: &[&str], pairs: &[(usize, usize)]) -> PosetSite {
    PosetSite::new(names.iter().map(|s| s.to_string()).collect(), pairs).expect("built-in model is a poset")
}

/// Endpoints `P`, `Q` below the open arc `I`.
pub fn interval() -> PosetSite {
    site(&["P", "Q", "I"], &[(0, 2), (1, 2)])
}

/// `p0..p{m-1}`, `e0..e{m-1}` with `p_i < e_i` and `p_{i+1} < e_i`; needs `m >= 2`.
pub fn circle(m: usize) -> PosetSite {
    assert!(m >= 2, "a circle model needs at least two arcs");
    let mut names: Vec<String> = (0..m).map(|i| format!("p{i}")).collect();
    names.extend((0..m).map(|i| format!("e{i}")));
    let mut pairs = Vec::new();
    for i in 0..m {
        pairs.push((i, m + i));
        pairs.push(((i + 1) % m, m + i));
    }
    PosetSite::new(names, &pairs).expect("circle model is a poset")
}

/// Two closed points `p0`, `p1` and two open arcs `e0`, `e1`.
pub fn circle4() -> PosetSite {
    circle(2)
}

pub fn circle8() -> PosetSite {
    circle(4)
}

/// Adds poles `N` and `S` below every point.
pub fn suspension(base: &PosetSite) -> PosetSite {
    let n = base.len();
    let mut names: Vec<String> = base.names().to_vec();
    names.push("N".into());
    names.push("S".into());
    let mut pairs = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if base.lt(a, b) {
                pairs.push((a, b));
            }
        }
        pairs.push((n, a));
        pairs.push((n + 1, a));
    }
    PosetSite::new(names, &pairs).expect("suspension is a poset")
}

pub fn sphere8() -> PosetSite {
    suspension(&circle4())
}

pub fn sphere12() -> PosetSite {
    suspension(&circle8())
}

/// Disjoint union of two copies; points of copy `k` get the suffix `'`
/// repeated `k` times.
pub fn two_copies(base: &PosetSite) -> PosetSite {
    let n = base.len();
    let mut names: Vec<String> = base.names().to_vec();
    names.extend(base.names().iter().map(|s| format!("{s}'")));
    let mut pairs = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if base.lt(a, b) {
                pairs.push((a, b));
                pairs.push((n + a, n + b));
            }
        }
    }
    PosetSite::new(names, &pairs).expect("disjoint union is a poset")
}

/// The 4-point circle folded onto the interval: arcs to `I`, `p0 -> P`,
/// `p1 -> Q`; the generator swaps the arcs.
pub fn branched_interval_cover() -> Cover {
    let map = MonotoneMap::new(&circle4(), &interval(), vec![0, 1, 2, 2]).unwrap();
    Cover::new(map, &FiniteGroup::cyclic(2), vec![vec![0, 1, 2, 3], vec![0, 1, 3, 2]]).unwrap()
}

fn rotation(m: usize, shift: usize) -> Vec<usize> {
    (0..2 * m).map(|z| if z < m { (z + shift) % m } else { m + (z - m + shift) % m }).collect()
}

fn rotation8(shift: usize) -> Vec<usize> {
    rotation(4, shift)
}

/// The connected double cover of the 4-point circle by the 8-point circle;
/// the deck generator rotates by two.
pub fn circle_double_cover() -> Cover {
    let map = MonotoneMap::new(&circle8(), &circle4(), vec![0, 1, 0, 1, 2, 3, 2, 3]).unwrap();
    Cover::new(map, &FiniteGroup::cyclic(2), vec![rotation8(0), rotation8(2)]).unwrap()
}

/// Suspension of the circle double cover, poles fixed: a branched double
/// cover of the 8-point sphere by the 12-point sphere.
pub fn branched_sphere_cover() -> Cover {
    let mut map = vec![0, 1, 0, 1, 2, 3, 2, 3];
    map.extend([4, 5]);
    let map = MonotoneMap::new(&sphere12(), &sphere8(), map).unwrap();
    let deck = [rotation8(0), rotation8(2)]
        .into_iter()
        .map(|mut r| {
            r.extend([8, 9]);
            r
        })
        .collect();
    Cover::new(map, &FiniteGroup::cyclic(2), deck).unwrap()
}

/// The trivial double cover `X ⊔ X -> X` with the swap.
pub fn trivial_double_cover(base: &PosetSite) -> Cover {
    let n = base.len();
    let total = two_copies(base);
    let map = MonotoneMap::new(&total, base, (0..2 * n).map(|z| z % n).collect()).unwrap();
    let swap = (0..2 * n).map(|z| (z + n) % (2 * n)).collect();
    Cover::new(map, &FiniteGroup::cyclic(2), vec![(0..2 * n).collect(), swap]).unwrap()
}

/// The connected `k`-fold cover of the 4-point circle by the `4k`-point
/// circle; the deck generator of `Z/k` rotates by two.
pub fn cyclic_circle_cover(k: usize) -> Cover {
    let m = 2 * k;
    let map = (0..2 * m).map(|z| if z < m { z % 2 } else { 2 + (z - m) % 2 }).collect();
    let map = MonotoneMap::new(&circle(m), &circle4(), map).unwrap();
    let deck = (0..k).map(|g| rotation(m, 2 * g)).collect();
    Cover::new(map, &FiniteGroup::cyclic(k), deck).unwrap()
}
