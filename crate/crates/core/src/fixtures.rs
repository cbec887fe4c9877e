//! Ready-made sheaves for the worked examples and the unbranched-cover
//! positive cases.

use crate::abgroup::{FgAbelianGroup, Int};
use crate::gcoh::FiniteGroup;
use crate::possite::{internal_hom_torsor, models, pushforward, Cover, EquivariantSheaf, GTorsorCocycle, PosetSite, SiteComplex};

/// A named equivariant sheaf together with how it was built.
#[derive(Clone, Debug)]
pub struct Fixture {
    pub name: String,
    pub base: PosetSite,
    pub group: FiniteGroup,
    /// Set when the sheaf is a pushforward along a cover.
    pub cover: Option<Cover>,
    /// Set when the sheaf is `E[M]`.
    pub gtorsor: Option<GTorsorCocycle>,
    /// The plain coefficient sheaf `E` (pushed forward or twisted).
    pub coefficients: EquivariantSheaf,
    pub sheaf: EquivariantSheaf,
}

pub const EXAMPLE_NAMES: [&str; 4] = ["interval-branched", "sphere-branched", "circle-cover", "sphere-cover"];

fn pushed(name: &str, cover: Cover, value: &FgAbelianGroup) -> Fixture {
    let e = EquivariantSheaf::constant(&cover.map.source, &FiniteGroup::trivial(), value);
    let sheaf = pushforward(&cover, &e).expect("constant sheaves are deck invariant");
    Fixture {
        name: name.into(),
        base: cover.map.target.clone(),
        group: cover.group.clone(),
        cover: Some(cover),
        gtorsor: None,
        coefficients: e,
        sheaf,
    }
}

/// Constant `Z/2` on the 4-point circle pushed to the interval along the
/// fold that swaps the two arcs.
pub fn interval_branched() -> Fixture {
    pushed("interval-branched", models::branched_interval_cover(), &FgAbelianGroup::cyclic(2))
}

/// Constant `Z` on the 12-point sphere pushed to the 8-point sphere along
/// the suspended squaring map.
pub fn sphere_branched() -> Fixture {
    pushed("sphere-branched", models::branched_sphere_cover(), &FgAbelianGroup::free(1))
}

fn twisted(name: &str, cover: Cover, lift: &[usize], value: &FgAbelianGroup) -> Fixture {
    let m = GTorsorCocycle::from_cover(&cover, lift).expect("unbranched cover");
    let base = cover.map.target.clone();
    let e = EquivariantSheaf::constant(&base, &FiniteGroup::trivial(), value);
    let sheaf = internal_hom_torsor(&e, &m).expect("same site");
    Fixture { name: name.into(), base, group: cover.group.clone(), cover: Some(cover), gtorsor: Some(m), coefficients: e, sheaf }
}

/// `E[M]` on the 4-point circle for the connected double cover `M`.
pub fn circle_cover(value: &FgAbelianGroup) -> Fixture {
    let cover = models::circle_double_cover();
    twisted("circle-cover", cover, &[0, 1, 4, 5], value)
}

/// `E[M]` on the 4-point circle for the connected `Z/k` cover.
pub fn cyclic_circle_cover(k: usize, value: &FgAbelianGroup) -> Fixture {
    let m = 2 * k;
    twisted("cyclic-circle-cover", models::cyclic_circle_cover(k), &[0, 1, m, m + 1], value)
}

/// `E[M]` on the 12-point sphere for the trivial double cover, trivialized
/// with lifts in both sheets so that some transitions are nontrivial.
pub fn sphere_cover(value: &FgAbelianGroup) -> Fixture {
    let base = models::sphere12();
    let n = base.len();
    let cover = models::trivial_double_cover(&base);
    let second: Vec<usize> = ["e1", "e3", "S"].iter().map(|s| base.index_of(s).unwrap()).collect();
    let lift: Vec<usize> = (0..n).map(|x| if second.contains(&x) { x + n } else { x }).collect();
    twisted("sphere-cover", cover, &lift, value)
}

/// The built-in fixture by name; cover fixtures use constant `Z`.
pub fn by_name(name: &str) -> Option<Fixture> {
    match name {
        "interval-branched" => Some(interval_branched()),
        "sphere-branched" => Some(sphere_branched()),
        "circle-cover" => Some(circle_cover(&FgAbelianGroup::free(1))),
        "sphere-cover" => Some(sphere_cover(&FgAbelianGroup::free(1))),
        _ => None,
    }
}

/// A cocycle representing the first generator of `H^n(X, A)`.
pub fn generator_cocycle(cx: &SiteComplex, n: usize) -> crate::possite::SiteCochain {
    let h = cx.cohomology(n);
    let mut v = vec![Int::ZERO; h.group().ngens()];
    v[0] = Int::ONE;
    cx.rep_of(n, &v)
}
