//! Test-side oracles, written without the bar complex or the site complex.
#![allow(dead_code)]

use eqdescent::abgroup::{hom_cokernel, hom_kernel, smith_normal_form, FgAbelianGroup, GroupHom, Int, IntMatrix};
use eqdescent::gcoh::{FiniteGroup, GroupModule};
use eqdescent::possite::PosetSite;

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Cyclic orders, 0 meaning Z.
pub fn group_from_orders(orders: &[i64]) -> FgAbelianGroup {
    let m: Vec<Int> = orders.iter().map(|&o| Int::from(o)).collect();
    FgAbelianGroup::from_moduli(&m)
}

/// `H^j(Z/n, M)` for trivial `M = Z^free ⊕ ⊕ Z/t`, read off the periodic
/// resolution: `M`, then `M[n]` in odd and `M/nM` in even positive degrees.
pub fn cyclic_trivial(n: i64, free: usize, torsion: &[i64], j: usize) -> FgAbelianGroup {
    let mut orders = Vec::new();
    if j == 0 {
        orders.extend(std::iter::repeat(0).take(free));
        orders.extend_from_slice(torsion);
    } else if j % 2 == 1 {
        orders.extend(torsion.iter().map(|&t| gcd(n, t)));
    } else {
        orders.extend(std::iter::repeat(n).take(free));
        orders.extend(torsion.iter().map(|&t| gcd(n, t)));
    }
    group_from_orders(&orders)
}

/// `ker f / im g` for `g, f : M -> M` with `f g = 0`.
fn subquotient(f: &GroupHom, g: &GroupHom) -> FgAbelianGroup {
    let (k, incl) = hom_kernel(f);
    let cols: Vec<Vec<Int>> = g.matrix().columns().iter().map(|c| incl.preimage(c).expect("f g = 0")).collect();
    let lifted = GroupHom::new(g.source(), &k, IntMatrix::from_columns(k.ngens(), &cols)).unwrap();
    hom_cokernel(&lifted).0
}

/// `H^j(Z/n, M)` via `T - 1` and the norm, `T` the action of `gen`.
pub fn cyclic_periodic(m: &GroupModule, gen: usize, j: usize) -> FgAbelianGroup {
    let g = m.group();
    let n = g.order();
    let a = m.underlying();
    let t = m.action(gen).matrix().clone();
    let k = a.ngens();
    let tm1 = GroupHom::new(a, a, t.sub(&IntMatrix::identity(k))).unwrap();
    let mut norm = IntMatrix::zeros(k, k);
    let mut p = IntMatrix::identity(k);
    for _ in 0..n {
        norm = norm.add(&p);
        p = p.mul(&t);
    }
    let norm = GroupHom::new(a, a, norm).unwrap();
    match j {
        0 => hom_kernel(&tm1).0,
        j if j % 2 == 1 => subquotient(&norm, &tm1),
        _ => subquotient(&tm1, &norm),
    }
}

/// `|H^1(G, M)|` for finite `M` by listing every function `G -> M`.
pub fn brute_h1_order(m: &GroupModule) -> usize {
    let g = m.group();
    let a = m.underlying();
    let elems = a.elements().expect("finite module");
    let ord = g.order();
    let count = elems.len().pow(ord as u32);
    let mut cocycles = 0usize;
    let mut pick = vec![0usize; ord];
    for idx in 0..count {
        let mut r = idx;
        for p in pick.iter_mut() {
            *p = r % elems.len();
            r /= elems.len();
        }
        let f = |x: usize| &elems[pick[x]];
        let ok = (0..ord).all(|x| {
            (0..ord).all(|y| {
                let lhs = f(g.mul(x, y));
                let rhs: Vec<Int> = m.act(x, f(y)).iter().zip(f(x)).map(|(u, v)| u + v).collect();
                a.equal_vecs(lhs, &rhs)
            })
        });
        if ok {
            cocycles += 1;
        }
    }
    // coboundaries are x -> ρ_x a - a, one per class of a modulo invariants
    let mut bounds: Vec<Vec<Vec<Int>>> = Vec::new();
    for e in &elems {
        let f: Vec<Vec<Int>> = (0..ord)
            .map(|x| a.reduce(&m.act(x, e).iter().zip(e).map(|(u, v)| u - v).collect::<Vec<_>>()))
            .collect();
        if !bounds.contains(&f) {
            bounds.push(f);
        }
    }
    cocycles / bounds.len()
}

/// Simplicial cohomology of the order complex of `site` with coefficients
/// `Z^free ⊕ ⊕ Z/t`, from integral homology and the universal coefficient
/// theorem.  Simplices are strictly increasing chains, enumerated here.
pub fn order_complex_cohomology(site: &PosetSite, free: usize, torsion: &[i64], n: usize) -> FgAbelianGroup {
    let pts = site.len();
    let mut simplices: Vec<Vec<Vec<usize>>> = vec![(0..pts).map(|x| vec![x]).collect()];
    loop {
        let last = simplices.last().unwrap();
        let next: Vec<Vec<usize>> = last
            .iter()
            .flat_map(|s| {
                let top = *s.last().unwrap();
                (0..pts).filter(move |&y| site.lt(top, y)).map(move |y| {
                    let mut t = s.clone();
                    t.push(y);
                    t
                })
            })
            .collect();
        if next.is_empty() {
            break;
        }
        simplices.push(next);
    }
    let count = |k: usize| simplices.get(k).map_or(0, |s| s.len());
    // boundary C_k -> C_{k-1}, for k >= 1
    let boundary = |k: usize| -> IntMatrix {
        let rows = count(k - 1);
        let cols = count(k);
        let mut m = IntMatrix::zeros(rows, cols);
        if cols == 0 || rows == 0 {
            return m;
        }
        for (j, s) in simplices[k].iter().enumerate() {
            for i in 0..s.len() {
                let mut face = s.clone();
                face.remove(i);
                let r = simplices[k - 1].iter().position(|f| *f == face).unwrap();
                let sign = if i % 2 == 0 { 1 } else { -1 };
                m.set(r, j, Int::from(sign));
            }
        }
        m
    };
    let rank_and_torsion = |k: usize| -> (usize, Vec<i64>) {
        if k == 0 || count(k) == 0 || count(k - 1) == 0 {
            return (0, vec![]);
        }
        let d = smith_normal_form(&boundary(k)).diagonal();
        let rank = d.iter().filter(|x| !x.is_zero()).count();
        let tors = d.iter().filter(|x| !x.is_zero() && !x.is_one()).map(|x| x.to_i64().unwrap()).collect();
        (rank, tors)
    };
    // H_k = (free rank, torsion)
    let homology = |k: usize| -> (usize, Vec<i64>) {
        let (r_out, _) = rank_and_torsion(k);
        let (r_in, tors) = rank_and_torsion(k + 1);
        (count(k) - r_out - r_in, tors)
    };
    let mut orders = Vec::new();
    // Hom(H_n, A)
    let (hf, ht) = homology(n);
    for _ in 0..hf {
        orders.extend(std::iter::repeat(0).take(free));
        orders.extend_from_slice(torsion);
    }
    for &s in &ht {
        orders.extend(torsion.iter().map(|&t| gcd(s, t)));
    }
    // Ext(H_{n-1}, A)
    if n > 0 {
        let (_, pt) = homology(n - 1);
        for &s in &pt {
            orders.extend(std::iter::repeat(s).take(free));
            orders.extend(torsion.iter().map(|&t| gcd(s, t)));
        }
    }
    group_from_orders(&orders)
}

/// Trivial `G`-module structure on a group given by cyclic orders.
pub fn trivial_module(g: &FiniteGroup, free: usize, torsion: &[i64]) -> GroupModule {
    let mut orders = vec![0; free];
    orders.extend_from_slice(torsion);
    GroupModule::trivial(g, &group_from_orders(&orders))
}

/// Face poset of the six-vertex real projective plane.
pub fn rp2_face_poset() -> PosetSite {
    let tri: [[usize; 3]; 10] =
        [[1, 2, 3], [1, 3, 4], [1, 4, 5], [1, 5, 6], [1, 6, 2], [2, 3, 5], [3, 4, 6], [4, 5, 2], [5, 6, 3], [6, 2, 4]];
    let mut faces: Vec<Vec<usize>> = (1..=6).map(|v| vec![v]).collect();
    for t in &tri {
        for (a, b) in [(t[0], t[1]), (t[1], t[2]), (t[0], t[2])] {
            let e = vec![a.min(b), a.max(b)];
            if !faces.contains(&e) {
                faces.push(e);
            }
        }
    }
    for t in &tri {
        let mut s = t.to_vec();
        s.sort();
        faces.push(s);
    }
    let names = faces.iter().map(|f| f.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("")).collect();
    let mut pairs = Vec::new();
    for (i, a) in faces.iter().enumerate() {
        for (j, b) in faces.iter().enumerate() {
            if i != j && a.iter().all(|v| b.contains(v)) {
                pairs.push((i, j));
            }
        }
    }
    PosetSite::new(names, &pairs).unwrap()
}

// ---- random data for the descent properties ----

use eqdescent::descent::{DescentContext, GerbeLift, TorsorLift};
use eqdescent::possite::{SiteCochain, SiteComplex};
use rand::Rng;

pub fn random_cochain<R: Rng>(rng: &mut R, cx: &SiteComplex, q: usize, spread: i64) -> SiteCochain {
    let mut z = cx.zero(q);
    for v in z.values.iter_mut() {
        *v = Int::from(rng.gen_range(-spread..=spread));
    }
    z
}

/// A representative of a random class of `H^n(X, A)^G`, moved by a random coboundary.
pub fn random_stable<R: Rng>(rng: &mut R, ctx: &DescentContext, n: usize) -> SiteCochain {
    let cx = ctx.complex();
    let (fixed, incl) = ctx.cohomology_module(n).invariants();
    let coords: Vec<Int> = (0..fixed.ngens()).map(|_| Int::from(rng.gen_range(-3..=3))).collect();
    let rep = cx.rep_of(n, &incl.apply(&coords));
    if n == 0 {
        return rep;
    }
    cx.add(&rep, &cx.d(&random_cochain(rng, cx, n - 1, 3)))
}

/// Changes the gauge of a torsor lift: `b_g += h_g` with `h_g` global sections.
pub fn perturb_torsor<R: Rng>(rng: &mut R, ctx: &DescentContext, l: &TorsorLift) -> TorsorLift {
    let cx = ctx.complex();
    let k = cx.cohomology(0).group().ngens();
    let b = l
        .b
        .iter()
        .map(|bg| {
            let h: Vec<Int> = (0..k).map(|_| Int::from(rng.gen_range(-4..=4))).collect();
            cx.add(bg, &cx.rep_of(0, &h))
        })
        .collect();
    TorsorLift { torsor: l.torsor.clone(), b }
}

/// Replaces `t` by `t + d s` and adjusts `b_g` by `ρ_g s - s`.
pub fn retrivialize_torsor<R: Rng>(rng: &mut R, ctx: &DescentContext, l: &TorsorLift) -> TorsorLift {
    let cx = ctx.complex();
    let s = random_cochain(rng, cx, 0, 4);
    let b = l.b.iter().enumerate().map(|(g, bg)| cx.add(bg, &cx.sub(&ctx.twist(g, &s), &s))).collect();
    TorsorLift { torsor: cx.add(&l.torsor, &cx.d(&s)), b }
}

/// `e_g += d s_g`, `f_{g,h} += ρ_g s_h - s_{gh} + s_g`, plus global sections on `f`.
pub fn perturb_gerbe<R: Rng>(rng: &mut R, ctx: &DescentContext, l: &GerbeLift) -> GerbeLift {
    let cx = ctx.complex();
    let g = ctx.group();
    let ord = g.order();
    let s: Vec<SiteCochain> = (0..ord).map(|_| random_cochain(rng, cx, 0, 3)).collect();
    let e = l.e.iter().zip(&s).map(|(eg, sg)| cx.add(eg, &cx.d(sg))).collect();
    let k = cx.cohomology(0).group().ngens();
    let mut f = l.f.clone();
    for a in 0..ord {
        for b in 0..ord {
            let adj = cx.add(&cx.sub(&ctx.twist(a, &s[b]), &s[g.mul(a, b)]), &s[a]);
            let c: Vec<Int> = (0..k).map(|_| Int::from(rng.gen_range(-2..=2))).collect();
            f[a * ord + b] = cx.add(&cx.add(&f[a * ord + b], &adj), &cx.rep_of(0, &c));
        }
    }
    GerbeLift { gerbe: l.gerbe.clone(), e, f }
}

/// Constant `Z^k` on the 4-point circle with `G = Z/2` acting by `sign`
/// (a `k x k` matrix squaring to the identity) at every point.
pub fn circle_with_action(k: usize, sign: &IntMatrix) -> eqdescent::possite::EquivariantSheaf {
    use eqdescent::possite::{models, EquivariantSheaf};
    let site = models::circle4();
    let g = FiniteGroup::cyclic(2);
    let z = FgAbelianGroup::free(k);
    let restr = site.covering_pairs().iter().map(|&p| (p, IntMatrix::identity(k))).collect();
    let action = vec![vec![IntMatrix::identity(k); site.len()], vec![sign.clone(); site.len()]];
    EquivariantSheaf::new(&site, &g, vec![z; site.len()], restr, Some(action)).unwrap()
}
