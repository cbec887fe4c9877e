mod common;

use common::{circle_with_action, perturb_gerbe, perturb_torsor, random_stable, retrivialize_torsor};
use eqdescent::abgroup::{FgAbelianGroup, Int, IntMatrix};
use eqdescent::descent::*;
use eqdescent::fixtures::{self, generator_cocycle, Fixture};
use eqdescent::gcoh::FiniteGroup;
use eqdescent::possite::{models, pushforward, EquivariantSheaf, SheafMorphism};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn point(ctx: &DescentContext, name: &str) -> usize {
    ctx.sheaf().site().point(name).unwrap()
}

#[test]
fn interval_branched_torsor() {
    let fx = fixtures::interval_branched();
    let ctx = DescentContext::new(&fx.sheaf);
    let cx = ctx.complex();
    assert!(cx.cohomology(1).group().has_invariants(0, &[2]));
    assert!(ctx.invariants().cx.cohomology(1).group().is_trivial());
    for p in ["P", "Q"] {
        assert!(ctx.local_bar(point(&ctx, p), 2).cohomology(1).group().has_invariants(0, &[2]));
    }
    let t = generator_cocycle(cx, 1);
    let lift = find_torsor_lift(&ctx, &t).unwrap();
    lift.validate(&ctx).unwrap();
    let chi = torsor_obstruction(&ctx, &lift).unwrap();
    assert!(chi.is_zero());
    assert!(is_induced_torsor(&ctx, &t).unwrap().is_err());
    match fixed_point_torsor(&ctx, &lift).unwrap() {
        Err(FixedPointFailure::Local { points }) => assert_eq!(points, vec!["P", "Q"]),
        other => panic!("expected a local failure, got {other:?}"),
    }
}

#[test]
fn moved_classes_are_not_stable() {
    // sign action on Z: the generator of H^1 = Z goes to its negative
    let sign = circle_with_action(1, &IntMatrix::from_rows(&[vec![-1]], 1));
    let ctx = DescentContext::new(&sign);
    let t = generator_cocycle(ctx.complex(), 1);
    assert_eq!(find_torsor_lift(&ctx, &t).unwrap_err(), DescentError::NotStable { g: 1 });
    // swapped summands: (1, 0) goes to (0, 1)
    let swap = circle_with_action(2, &IntMatrix::from_rows(&[vec![0, 1], vec![1, 0]], 2));
    let ctx = DescentContext::new(&swap);
    let t = generator_cocycle(ctx.complex(), 1);
    assert!(matches!(find_torsor_lift(&ctx, &t), Err(DescentError::NotStable { .. })));
    // their sum is stable
    let h = ctx.complex().cohomology(1);
    assert!(h.group().has_invariants(2, &[]));
    let both = ctx.complex().add(&t, &ctx.twist(1, &t));
    assert!(find_torsor_lift(&ctx, &both).is_ok());
}

#[test]
fn sphere_branched_gerbe() {
    let fx = fixtures::sphere_branched();
    let ctx = DescentContext::new(&fx.sheaf);
    let cx = ctx.complex();
    assert!(cx.cohomology(2).group().has_invariants(1, &[]));
    assert!(ctx.invariants().cx.cohomology(2).group().has_invariants(1, &[]));
    let map = ctx.invariants_map(2);
    assert_eq!(map.matrix().get(0, 0).abs(), Int::from(2));
    for p in ["N", "S"] {
        let x = point(&ctx, p);
        assert!(ctx.local_bar(x, 3).cohomology(1).group().is_trivial());
        assert!(ctx.local_bar(x, 3).cohomology(2).group().has_invariants(0, &[2]));
    }
    assert!(ctx.global_bar(4).cohomology(3).group().is_trivial());
    let m = generator_cocycle(cx, 2);
    // the class is fixed by the twist
    let moved = ctx.twist(1, &m);
    assert_eq!(cx.class_of(&moved).unwrap(), cx.class_of(&m).unwrap());
    let lift = find_gerbe_lift(&ctx, &m).unwrap();
    lift.validate(&ctx).unwrap();
    assert!(gerbe_obstruction(&ctx, &lift).unwrap().is_zero());
    assert!(is_induced_gerbe(&ctx, &m).unwrap().is_err());
}

#[test]
fn gerbe_with_trivial_action_has_zero_obstruction() {
    let sheaf = EquivariantSheaf::constant(&models::sphere8(), &FiniteGroup::cyclic(2), &FgAbelianGroup::free(1));
    let ctx = DescentContext::new(&sheaf);
    let cx = ctx.complex();
    let m = generator_cocycle(cx, 2);
    // the evident lift: everything zero
    let lift = GerbeLift { gerbe: m.clone(), e: vec![cx.zero(1); 2], f: vec![cx.zero(0); 4] };
    let k = gerbe_obstruction(&ctx, &lift).unwrap();
    assert!(k.is_zero());
    assert!(k.cocycle.values.iter().all(|v| v.is_zero()));
    assert!(gerbe_obstruction(&ctx, &find_gerbe_lift(&ctx, &m).unwrap()).unwrap().is_zero());
}

#[test]
fn circle_cover_has_a_torsor_with_nonzero_obstruction() {
    let fx = fixtures::circle_cover(&FgAbelianGroup::cyclic(2));
    let ctx = DescentContext::new(&fx.sheaf);
    let h2 = ctx.global_bar(3).cohomology(2);
    assert!(h2.group().has_invariants(0, &[2]));
    let h1 = ctx.complex().cohomology(1);
    let classes = h1.group().elements().unwrap();
    let nonzero = classes.iter().any(|c| {
        let t = ctx.complex().rep_of(1, c);
        match find_torsor_lift(&ctx, &t) {
            Ok(l) => !torsor_obstruction(&ctx, &l).unwrap().is_zero(),
            Err(_) => false,
        }
    });
    assert!(nonzero);
}

fn cover_fixtures() -> Vec<Fixture> {
    vec![
        fixtures::circle_cover(&FgAbelianGroup::free(1)),
        fixtures::circle_cover(&FgAbelianGroup::cyclic(2)),
        fixtures::sphere_cover(&FgAbelianGroup::free(1)),
        fixtures::sphere_cover(&FgAbelianGroup::cyclic(2)),
        fixtures::cyclic_circle_cover(3, &FgAbelianGroup::free(1)),
        fixtures::cyclic_circle_cover(3, &FgAbelianGroup::cyclic(3)),
    ]
}

/// Small coordinate vectors of a fixed subgroup: all of it when finite.
fn sample_fixed(group: &FgAbelianGroup) -> Vec<Vec<Int>> {
    if let Some(all) = group.elements() {
        return all;
    }
    let k = group.ngens();
    let mut out = vec![vec![Int::ZERO; k]];
    for i in 0..k {
        for s in [-2i64, -1, 1, 2] {
            let mut v = vec![Int::ZERO; k];
            v[i] = Int::from(s);
            out.push(v);
        }
    }
    out
}

#[test]
fn vanishing_obstruction_matches_induced_under_local_vanishing() {
    for fx in cover_fixtures() {
        let ctx = DescentContext::new(&fx.sheaf);
        let cx = ctx.complex();
        for n in [1usize, 2] {
            let (fixed, incl) = ctx.cohomology_module(n).invariants();
            for coords in sample_fixed(&fixed) {
                let z = cx.rep_of(n, &incl.apply(&coords));
                let induced = is_induced(&ctx, &z).unwrap();
                if let Ok(w) = &induced {
                    let diff = cx.sub(&ctx.include(&w.invariant_cocycle), &z);
                    assert!(cx.equal(&cx.d(&w.difference), &diff), "{} witness", fx.name);
                }
                let zero = if n == 1 {
                    let lift = find_torsor_lift(&ctx, &z).unwrap();
                    let chi = torsor_obstruction(&ctx, &lift).unwrap();
                    if chi.is_zero() {
                        let fp = fixed_point_torsor(&ctx, &lift).unwrap().expect("fixed-point torsor");
                        let back = cx.sub(&ctx.include(&fp.torsor), &cx.add(&z, &cx.d(&fp.gauge)));
                        assert!(cx.is_zero(&back), "{}", fx.name);
                        assert!(fp.adjusted_b.iter().all(|b| cx.is_zero(b)), "{}", fx.name);
                    }
                    chi.is_zero()
                } else {
                    let lift = find_gerbe_lift(&ctx, &z).unwrap();
                    gerbe_obstruction(&ctx, &lift).unwrap().is_zero()
                };
                assert_eq!(zero, induced.is_ok(), "{} n={n} class {:?}", fx.name, coords);
            }
        }
    }
}

#[test]
fn obstructions_are_cocycles_and_ignore_the_lift() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let fixtures = [fixtures::interval_branched(), fixtures::sphere_branched(), fixtures::circle_cover(&FgAbelianGroup::cyclic(2)), fixtures::sphere_cover(&FgAbelianGroup::free(1))];
    for fx in &fixtures {
        let ctx = DescentContext::new(&fx.sheaf);
        for _ in 0..6 {
            let t = random_stable(&mut rng, &ctx, 1);
            let l = find_torsor_lift(&ctx, &t).unwrap();
            let chi = torsor_obstruction(&ctx, &l).unwrap();
            assert!(ctx.global_bar(3).is_cocycle(&chi.cocycle));
            for l2 in [perturb_torsor(&mut rng, &ctx, &l), retrivialize_torsor(&mut rng, &ctx, &l)] {
                let chi2 = torsor_obstruction(&ctx, &l2).unwrap();
                assert!(chi.group.equal_vecs(&chi.class, &chi2.class), "{}", fx.name);
            }
            let m = random_stable(&mut rng, &ctx, 2);
            let g = find_gerbe_lift(&ctx, &m).unwrap();
            let kappa = gerbe_obstruction(&ctx, &g).unwrap();
            assert!(ctx.global_bar(4).is_cocycle(&kappa.cocycle));
            let kappa2 = gerbe_obstruction(&ctx, &perturb_gerbe(&mut rng, &ctx, &g)).unwrap();
            assert!(kappa.group.equal_vecs(&kappa.class, &kappa2.class), "{}", fx.name);
        }
    }
}

fn reduction_mod_two(src: &EquivariantSheaf, dst: &EquivariantSheaf) -> SheafMorphism {
    let mats = (0..src.site().len()).map(|x| IntMatrix::identity(src.stalk(x).ngens())).collect();
    SheafMorphism::new(src, dst, mats).unwrap()
}

#[test]
fn obstructions_are_natural_in_the_coefficients() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let pairs = vec![
        (fixtures::circle_cover(&FgAbelianGroup::free(1)).sheaf, fixtures::circle_cover(&FgAbelianGroup::cyclic(2)).sheaf),
        (fixtures::sphere_cover(&FgAbelianGroup::free(1)).sheaf, fixtures::sphere_cover(&FgAbelianGroup::cyclic(2)).sheaf),
        {
            let cover = models::branched_sphere_cover();
            let up = |v: &FgAbelianGroup| EquivariantSheaf::constant(&cover.map.source, &FiniteGroup::trivial(), v);
            (fixtures::sphere_branched().sheaf, pushforward(&cover, &up(&FgAbelianGroup::cyclic(2))).unwrap())
        },
    ];
    for (a, b) in &pairs {
        let f = reduction_mod_two(a, b);
        let (sa, sb) = (DescentContext::new(a), DescentContext::new(b));
        for _ in 0..4 {
            let t = random_stable(&mut rng, &sa, 1);
            let l = find_torsor_lift(&sa, &t).unwrap();
            let pushed = push_torsor_lift(&f, &sa, &sb, &l);
            pushed.validate(&sb).unwrap();
            let chi_b = torsor_obstruction(&sb, &pushed).unwrap();
            let chi_a = torsor_obstruction(&sa, &l).unwrap();
            let expect = push_table(&f, &sa, &sb, &chi_a.table);
            for (x, y) in chi_b.table.iter().zip(&expect) {
                assert!(sb.complex().equal(x, y));
            }
            let m = random_stable(&mut rng, &sa, 2);
            let gl = find_gerbe_lift(&sa, &m).unwrap();
            let pushed = push_gerbe_lift(&f, &sa, &sb, &gl);
            pushed.validate(&sb).unwrap();
            let k_b = gerbe_obstruction(&sb, &pushed).unwrap();
            let expect = push_table(&f, &sa, &sb, &gerbe_obstruction(&sa, &gl).unwrap().table);
            for (x, y) in k_b.table.iter().zip(&expect) {
                assert!(sb.complex().equal(x, y));
            }
        }
    }
}

#[test]
fn bad_inputs_are_reported() {
    let fx = fixtures::sphere_branched();
    let ctx = DescentContext::new(&fx.sheaf);
    let cx = ctx.complex();
    // a 1-cochain with nonzero coboundary
    let mut z = cx.zero(1);
    z.values[0] = Int::ONE;
    if !cx.is_cocycle(&z) {
        assert_eq!(find_torsor_lift(&ctx, &z).unwrap_err(), DescentError::NotCocycle { degree: 1 });
        assert!(is_induced(&ctx, &z).is_err());
    }
    let m = generator_cocycle(cx, 2);
    let mut lift = find_gerbe_lift(&ctx, &m).unwrap();
    lift.f[1].values[0] = &lift.f[1].values[0] + &Int::ONE;
    assert!(matches!(gerbe_obstruction(&ctx, &lift), Err(DescentError::CorruptLift { .. })));
}
