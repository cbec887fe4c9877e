mod common;

use common::{order_complex_cohomology, rp2_face_poset};
use eqdescent::abgroup::{FgAbelianGroup, Int, IntMatrix};
use eqdescent::fixtures;
use eqdescent::gcoh::{group_cohomology, FiniteGroup};
use eqdescent::possite::*;
use proptest::prelude::*;

const COEFFS: [(usize, &[i64]); 4] = [(1, &[]), (0, &[2]), (0, &[6]), (1, &[4])];

fn coeff_group(free: usize, tors: &[i64]) -> FgAbelianGroup {
    let mut o = vec![0; free];
    o.extend_from_slice(tors);
    common::group_from_orders(&o)
}

fn all_sites() -> Vec<(&'static str, PosetSite)> {
    let mut v = vec![
        ("interval", models::interval()),
        ("circle4", models::circle4()),
        ("circle6", models::circle(3)),
        ("circle8", models::circle8()),
        ("sphere8", models::sphere8()),
        ("sphere12", models::sphere12()),
        ("two circles", models::two_copies(&models::circle4())),
        ("rp2", rp2_face_poset()),
    ];
    for f in fixtures::EXAMPLE_NAMES {
        let fx = fixtures::by_name(f).unwrap();
        if let Some(c) = fx.cover {
            v.push(("cover source", c.map.source.clone()));
        }
    }
    v
}

#[test]
fn constant_sheaves_match_the_order_complex() {
    let t = FiniteGroup::trivial();
    for (name, site) in all_sites() {
        for (free, tors) in COEFFS {
            let a = EquivariantSheaf::constant(&site, &t, &coeff_group(free, tors));
            let cx = site_complex(&a);
            for n in 0..=cx.top().min(3) {
                let got = cx.cohomology(n);
                let want = order_complex_cohomology(&site, free, tors, n);
                assert!(got.group().isomorphic(&want), "{name} {free}:{tors:?} H^{n}: {} vs {}", got.render(), want.render());
            }
        }
    }
}

#[test]
fn oracle_sees_the_projective_plane() {
    let s = rp2_face_poset();
    assert!(order_complex_cohomology(&s, 1, &[], 1).is_trivial());
    assert!(order_complex_cohomology(&s, 1, &[], 2).has_invariants(0, &[2]));
    assert!(order_complex_cohomology(&s, 0, &[2], 1).has_invariants(0, &[2]));
}

#[test]
fn small_models_have_the_expected_cohomology() {
    let t = FiniteGroup::trivial();
    let cx = site_complex(&EquivariantSheaf::constant(&models::circle4(), &t, &FgAbelianGroup::cyclic(2)));
    assert!(cx.cohomology(0).group().has_invariants(0, &[2]));
    assert!(cx.cohomology(1).group().has_invariants(0, &[2]));
    let cx = site_complex(&EquivariantSheaf::constant(&models::sphere8(), &t, &FgAbelianGroup::free(1)));
    assert!(cx.cohomology(0).group().has_invariants(1, &[]));
    assert!(cx.cohomology(1).group().is_trivial());
    assert!(cx.cohomology(2).group().has_invariants(1, &[]));
}

fn check_unnormalized(a: &EquivariantSheaf) {
    let top = a.site().max_chain_degree().min(2) + 1;
    let u = unnormalized_site_complex(a, top);
    let cx = site_complex(a);
    for n in 0..top {
        assert!(
            u.cohomology(n).group().isomorphic(cx.cohomology(n).group()),
            "degree {n}: {} vs {}",
            u.cohomology(n).render(),
            cx.cohomology(n).render()
        );
    }
}

#[test]
fn weak_chains_agree_with_strict_chains_on_the_small_fixtures() {
    let t = FiniteGroup::trivial();
    for site in [models::interval(), models::circle4(), models::circle8(), models::sphere8()] {
        check_unnormalized(&EquivariantSheaf::constant(&site, &t, &FgAbelianGroup::free(1)));
        check_unnormalized(&EquivariantSheaf::constant(&site, &t, &FgAbelianGroup::cyclic(2)));
    }
    check_unnormalized(&fixtures::interval_branched().sheaf);
    check_unnormalized(&fixtures::sphere_branched().sheaf);
    check_unnormalized(&fixtures::circle_cover(&FgAbelianGroup::free(1)).sheaf);
    check_unnormalized(&fixtures::circle_cover(&FgAbelianGroup::cyclic(2)).sheaf);
}

fn poset_strategy() -> impl Strategy<Value = PosetSite> {
    (2usize..=8)
        .prop_flat_map(|n| (Just(n), prop::collection::vec(prop::bool::weighted(0.35), n * (n - 1) / 2)))
        .prop_map(|(n, bits)| {
            let mut pairs = Vec::new();
            let mut k = 0;
            for i in 0..n {
                for j in i + 1..n {
                    if bits[k] {
                        pairs.push((i, j));
                    }
                    k += 1;
                }
            }
            PosetSite::new((0..n).map(|i| format!("x{i}")).collect(), &pairs).unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn random_posets_match_oracles(site in poset_strategy(), which in 0usize..4) {
        let (free, tors) = COEFFS[which];
        let a = EquivariantSheaf::constant(&site, &FiniteGroup::trivial(), &coeff_group(free, tors));
        let cx = site_complex(&a);
        for n in 0..=cx.top().min(3) {
            prop_assert!(cx.cohomology(n).group().isomorphic(&order_complex_cohomology(&site, free, tors, n)));
        }
        check_unnormalized(&a);
    }

    #[test]
    fn site_differential_squares_to_zero(site in poset_strategy(), vals in prop::collection::vec(-4i64..5, 1..10)) {
        let a = EquivariantSheaf::constant(&site, &FiniteGroup::trivial(), &FgAbelianGroup::free(1));
        let cx = site_complex(&a);
        for q in 0..cx.top().saturating_sub(1) {
            let mut z = cx.zero(q);
            for (i, v) in z.values.iter_mut().enumerate() {
                *v = Int::from(vals[i % vals.len()] * (i as i64 % 3 - 1));
            }
            prop_assert!(cx.is_zero(&cx.d(&cx.d(&z))));
        }
    }
}

#[test]
fn interval_pushforward_stalks() {
    let fx = fixtures::interval_branched();
    let a = &fx.sheaf;
    let site = a.site();
    let (p, q, i) = (site.point("P").unwrap(), site.point("Q").unwrap(), site.point("I").unwrap());
    for x in [p, q] {
        assert!(a.stalk(x).has_invariants(0, &[2]));
        assert!(a.action(1, x).equals(&eqdescent::abgroup::GroupHom::identity(a.stalk(x))));
    }
    assert!(a.stalk(i).has_invariants(0, &[2, 2]));
    assert_eq!(a.action(1, i).matrix(), &IntMatrix::from_rows(&[vec![0, 1], vec![1, 0]], 2));
    // global sections over the whole interval
    assert!(a.global_sections().group.has_invariants(0, &[2]));
}

#[test]
fn sphere_pushforward_pole_stalk_is_trivial_z() {
    let a = fixtures::sphere_branched().sheaf;
    for pole in ["N", "S"] {
        let x = a.site().point(pole).unwrap();
        assert!(a.stalk(x).has_invariants(1, &[]));
        assert!(a.stalk_module(x).is_trivial_action().is_ok());
    }
}

#[test]
fn invariants_of_the_examples_are_constant() {
    let t = FiniteGroup::trivial();
    for (fx, value) in [(fixtures::interval_branched(), FgAbelianGroup::cyclic(2)), (fixtures::sphere_branched(), FgAbelianGroup::free(1))] {
        let (ag, incl) = invariants_sheaf(&fx.sheaf);
        assert!(incl.is_pointwise_injective());
        let constant = EquivariantSheaf::constant(&fx.base, &t, &value);
        for x in 0..fx.base.len() {
            assert!(ag.stalk(x).isomorphic(&value));
        }
        let (a, b) = (site_complex(&ag), site_complex(&constant));
        for n in 0..=2.min(a.top()) {
            assert!(a.cohomology(n).group().isomorphic(b.cohomology(n).group()), "{} H^{n}", fx.name);
        }
    }
}

#[test]
fn internal_hom_of_the_trivial_torsor_is_the_permutation_product() {
    let g = FiniteGroup::cyclic(3);
    let site = models::circle4();
    let e = EquivariantSheaf::constant(&site, &FiniteGroup::trivial(), &FgAbelianGroup::cyclic(2));
    let m = GTorsorCocycle::trivial(&site, &g);
    let em = internal_hom_torsor(&e, &m).unwrap();
    for x in 0..site.len() {
        assert!(em.stalk(x).has_invariants(0, &[2, 2, 2]));
        for y in 0..site.len() {
            if site.leq(x, y) {
                assert_eq!(em.restriction(x, y).matrix(), &IntMatrix::identity(3));
            }
        }
    }
    // invariants of E[M] look like E
    let (inv, _) = invariants_sheaf(&em);
    let (a, b) = (site_complex(&inv), site_complex(&e));
    for n in 0..2 {
        assert!(a.cohomology(n).group().isomorphic(b.cohomology(n).group()));
    }
    // and locally every positive degree vanishes
    for j in 1..=3 {
        assert!(stalkwise_local_vanishing(&em, j).overall);
    }
}

#[test]
fn twisting_along_the_double_cover_matches_the_pushforward() {
    let fx = fixtures::circle_cover(&FgAbelianGroup::cyclic(2));
    let cover = fx.cover.clone().unwrap();
    let up = EquivariantSheaf::constant(&cover.map.source, &FiniteGroup::trivial(), &FgAbelianGroup::cyclic(2));
    let pf = pushforward(&cover, &up).unwrap();
    let em = &fx.sheaf;
    for x in 0..fx.base.len() {
        assert!(pf.stalk(x).isomorphic(em.stalk(x)));
        for j in 0..3 {
            assert!(group_cohomology(pf.stalk_module(x), j).group().isomorphic(group_cohomology(em.stalk_module(x), j).group()));
        }
    }
    let (a, b) = (site_complex(&pf), site_complex(em));
    for n in 0..2 {
        assert!(a.cohomology(n).group().isomorphic(b.cohomology(n).group()));
        // both compute the cohomology of the 8-point circle
        assert!(a.cohomology(n).group().has_invariants(0, &[2]));
    }
}

#[test]
fn contracted_product_with_the_trivial_torsor_is_the_identity() {
    let fx = fixtures::circle_cover(&FgAbelianGroup::free(1));
    let m = GTorsorCocycle::trivial(&fx.base, &fx.group);
    let cp = contracted_product(&fx.sheaf, &m).unwrap();
    for x in 0..fx.base.len() {
        for y in 0..fx.base.len() {
            if fx.base.leq(x, y) {
                assert_eq!(cp.restriction(x, y).matrix(), fx.sheaf.restriction(x, y).matrix());
            }
        }
    }
}

#[test]
fn evaluation_is_among_the_enumerated_morphisms() {
    let fx = fixtures::circle_cover(&FgAbelianGroup::cyclic(2));
    let m = fx.gtorsor.clone().unwrap();
    let ev = evaluation_morphism(&fx.coefficients, &m).unwrap();
    assert!(ev.maps.iter().all(|h| h.is_surjective()));
    let cp = contracted_product(&fx.sheaf, &m).unwrap();
    let e = fx.coefficients.underlying();
    // every pointwise family (Z/2)^2 -> Z/2, four choices per point
    let n = fx.base.len();
    let rows = [[0, 0], [1, 0], [0, 1], [1, 1]];
    let mut morphisms = Vec::new();
    for code in 0..4usize.pow(n as u32) {
        let mats: Vec<IntMatrix> = (0..n).map(|x| IntMatrix::from_rows(&[rows[(code >> (2 * x)) & 3].to_vec()], 2)).collect();
        if let Ok(f) = SheafMorphism::new(&cp, &e, mats) {
            morphisms.push(f);
        }
    }
    // zero, the two projections and their sum
    assert_eq!(morphisms.len(), 4);
    assert!(morphisms.iter().any(|f| f.maps.iter().zip(&ev.maps).all(|(a, b)| a.equals(b))));
}

#[test]
fn local_vanishing_on_the_examples() {
    let a = fixtures::interval_branched().sheaf;
    let r = stalkwise_local_vanishing(&a, 1);
    assert_eq!(r.failing_points(), vec!["P", "Q"]);
    let b = fixtures::sphere_branched().sheaf;
    assert!(stalkwise_local_vanishing(&b, 1).overall);
    assert_eq!(stalkwise_local_vanishing(&b, 2).failing_points(), vec!["N", "S"]);
    for fx in [fixtures::circle_cover(&FgAbelianGroup::free(1)), fixtures::sphere_cover(&FgAbelianGroup::cyclic(2))] {
        for j in 1..=3 {
            assert!(stalkwise_local_vanishing(&fx.sheaf, j).overall, "{} j={j}", fx.name);
        }
    }
}

#[test]
fn invalid_inputs_are_rejected() {
    assert!(PosetSite::new(vec!["a".into(), "b".into()], &[(0, 1), (1, 0)]).is_err());
    let site = models::interval();
    let z = FgAbelianGroup::free(1);
    // restriction P<=I of the wrong shape
    let bad = EquivariantSheaf::new(
        &site,
        &FiniteGroup::trivial(),
        vec![z.clone(), z.clone(), z.clone()],
        vec![((0, 2), IntMatrix::from_rows(&[vec![1, 1]], 2)), ((1, 2), IntMatrix::identity(1))],
        None,
    );
    assert!(bad.is_err());
    // an action that does not commute with restriction
    let g = FiniteGroup::cyclic(2);
    let neg = IntMatrix::from_rows(&[vec![-1]], 1);
    let id = IntMatrix::identity(1);
    let bad = EquivariantSheaf::new(
        &site,
        &g,
        vec![z.clone(), z.clone(), z.clone()],
        vec![((0, 2), id.clone()), ((1, 2), id.clone())],
        Some(vec![vec![id.clone(), id.clone(), id.clone()], vec![neg.clone(), id.clone(), id.clone()]]),
    );
    assert!(bad.is_err());
    // sections over a non-open set
    let a = EquivariantSheaf::constant(&site, &FiniteGroup::trivial(), &z);
    assert!(a.sections(&[0]).is_err());
    assert!(a.sections(&[2]).is_ok());
}
