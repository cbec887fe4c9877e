//! Lifts of a group action to torsor and gerbe cocycles, their obstruction
//! classes, and the decision whether a class comes from the invariants.

use crate::abgroup::{FgAbelianGroup, GroupHom, Int, IntMatrix, NotInImage};
use crate::chaincx::ChainError;
use crate::gcoh::{BarComplex, FiniteGroup, GcohError, GroupCochain, GroupModule};
use crate::possite::{
    induced_on_cohomology, invariants_sheaf, push_cochain, EquivariantSheaf, SheafMorphism, SiteCochain, SiteComplex,
    SiteError,
};
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DescentError {
    #[error("site cochain of degree {degree} is not a cocycle")]
    NotCocycle { degree: usize },
    #[error("the class is moved by group element {g}")]
    NotStable { g: usize },
    #[error("no connecting data: the defect class {defect:?} in C^2(G, H^1(X, A)) is not a coboundary")]
    NoConnecting { defect: Vec<Int> },
    #[error("lift data fails its cobounding identity at {what}")]
    CorruptLift { what: String },
    #[error("obstruction class is nonzero: {class:?}")]
    ObstructionNonzero { class: Vec<Int> },
    #[error(transparent)]
    Chain(#[from] ChainError),
    #[error(transparent)]
    Gcoh(#[from] GcohError),
    #[error(transparent)]
    Site(#[from] SiteError),
}

/// The invariants sheaf with its inclusion and cochain complex.
pub struct Invariants {
    pub sheaf: EquivariantSheaf,
    pub incl: SheafMorphism,
    pub cx: SiteComplex,
}

/// Shared, lazily computed data for one equivariant sheaf `A`.
pub struct DescentContext {
    sheaf: EquivariantSheaf,
    cx: SiteComplex,
    invariants: OnceLock<Invariants>,
    global: OnceLock<GroupModule>,
    bars: Mutex<HashMap<(String, usize), Arc<BarComplex>>>,
    h_modules: Mutex<HashMap<usize, GroupModule>>,
}

impl DescentContext {
    pub fn new(sheaf: &EquivariantSheaf) -> DescentContext {
        DescentContext {
            sheaf: sheaf.clone(),
            cx: SiteComplex::new(sheaf),
            invariants: OnceLock::new(),
            global: OnceLock::new(),
            bars: Mutex::new(HashMap::new()),
            h_modules: Mutex::new(HashMap::new()),
        }
    }

    pub fn sheaf(&self) -> &EquivariantSheaf {
        &self.sheaf
    }

    pub fn group(&self) -> &FiniteGroup {
        self.sheaf.group()
    }

    pub fn complex(&self) -> &SiteComplex {
        &self.cx
    }

    pub fn invariants(&self) -> &Invariants {
        self.invariants.get_or_init(|| {
            let (sheaf, incl) = invariants_sheaf(&self.sheaf);
            let cx = SiteComplex::new(&sheaf);
            Invariants { sheaf, incl, cx }
        })
    }

    /// `A(X)` as a `G`-module.
    pub fn global_module(&self) -> &GroupModule {
        self.global.get_or_init(|| self.cx.cohomology_module(0))
    }

    /// `H^n(X, A)` as a `G`-module via twisting.
    pub fn cohomology_module(&self, n: usize) -> GroupModule {
        self.h_modules.lock().unwrap().entry(n).or_insert_with(|| self.cx.cohomology_module(n)).clone()
    }

    fn bar(&self, key: &str, module: impl FnOnce() -> GroupModule, top: usize) -> Arc<BarComplex> {
        let k = (key.to_string(), top);
        if let Some(b) = self.bars.lock().unwrap().get(&k) {
            return b.clone();
        }
        let b = Arc::new(BarComplex::new(&module(), top));
        self.bars.lock().unwrap().insert(k, b.clone());
        b
    }

    /// Bar complex of `A(X)` up to degree `top`.
    pub fn global_bar(&self, top: usize) -> Arc<BarComplex> {
        self.bar("global", || self.global_module().clone(), top)
    }

    /// Bar complex of the stalk `F(x)`.
    pub fn local_bar(&self, x: usize, top: usize) -> Arc<BarComplex> {
        self.bar(&format!("point{x}"), || self.sheaf.stalk_module(x).clone(), top)
    }

    /// Bar complex of `H^n(X, A)` with the twist action.
    pub fn cohomology_bar(&self, n: usize, top: usize) -> Arc<BarComplex> {
        self.bar(&format!("H{n}"), || self.cohomology_module(n), top)
    }

    /// Global section coordinates to the 0-cochain they define.
    pub fn section_to_cochain(&self, v: &[Int]) -> SiteCochain {
        self.cx.rep_of(0, v)
    }

    /// A 0-cocycle to its global section coordinates.
    pub fn cochain_to_section(&self, c: &SiteCochain) -> Result<Vec<Int>, ChainError> {
        self.cx.class_of(c)
    }

    /// `ρ_g` on site cochains.
    pub fn twist(&self, g: usize, z: &SiteCochain) -> SiteCochain {
        self.cx.twist(g, z)
    }

    /// Converts a group cochain of site 0-cochains that are all global
    /// sections into one valued in `A(X)` coordinates.
    pub fn to_global_cochain(&self, degree: usize, table: &[SiteCochain], what: &str) -> Result<GroupCochain, DescentError> {
        let m = self.global_module();
        let mut out = GroupCochain::zero(m, degree);
        let k = m.underlying().ngens();
        for (i, c) in table.iter().enumerate() {
            if !self.cx.is_cocycle(c) {
                return Err(DescentError::CorruptLift { what: format!("{what}: value {i} is not a global section") });
            }
            let v = self.cochain_to_section(c)?;
            out.values[i * k..(i + 1) * k].clone_from_slice(&v);
        }
        Ok(out)
    }

    /// `H^n(X, A^G) -> H^n(X, A)`.
    pub fn invariants_map(&self, n: usize) -> GroupHom {
        let inv = self.invariants();
        induced_on_cohomology(&inv.incl, &inv.cx, &self.cx, n)
    }

    /// `i` on cochains.
    pub fn include(&self, z: &SiteCochain) -> SiteCochain {
        let inv = self.invariants();
        push_cochain(&inv.incl, &inv.cx, &self.cx, z)
    }

    /// Pulls an `A`-cochain whose values are all invariant back to `A^G`.
    pub fn restrict_to_invariants(&self, z: &SiteCochain) -> Option<SiteCochain> {
        let inv = self.invariants();
        let site = self.sheaf.site();
        let mut out = inv.cx.zero(z.degree);
        for (i, c) in site.chains(z.degree).iter().enumerate() {
            let x = *c.last().unwrap();
            let v = inv.incl.maps[x].preimage(&z.values[self.cx.slot(z.degree, i)]).ok()?;
            out.values[inv.cx.slot(z.degree, i)].clone_from_slice(&v);
        }
        Some(out)
    }
}

/// A class in `H^n(G, A(X))` with its cochain-level data.
#[derive(Clone, Debug)]
pub struct ObstructionClass {
    pub degree: usize,
    /// Cocycle valued in `A(X)` coordinates.
    pub cocycle: GroupCochain,
    /// The same cocycle as explicit site 0-cochains, one per tuple.
    pub table: Vec<SiteCochain>,
    pub group: FgAbelianGroup,
    pub class: Vec<Int>,
}

impl ObstructionClass {
    pub fn is_zero(&self) -> bool {
        self.group.is_zero_vec(&self.class)
    }
}

pub fn obstruction_from_table(ctx: &DescentContext, degree: usize, table: Vec<SiteCochain>, what: &str) -> Result<ObstructionClass, DescentError> {
    let cocycle = ctx.to_global_cochain(degree, &table, what)?;
    let bar = ctx.global_bar(degree + 1);
    if !bar.is_cocycle(&cocycle) {
        return Err(DescentError::CorruptLift { what: format!("{what} is not a bar cocycle") });
    }
    let class = bar.class_of(&cocycle)?;
    let group = bar.cohomology(degree).group().clone();
    Ok(ObstructionClass { degree, cocycle, table, group, class })
}

/// A 1-cocycle `t` with 0-cochains `b_g`, `d b_g = ρ_g t - t`.
#[derive(Clone, Debug)]
pub struct TorsorLift {
    pub torsor: SiteCochain,
    pub b: Vec<SiteCochain>,
}

impl TorsorLift {
    pub fn validate(&self, ctx: &DescentContext) -> Result<(), DescentError> {
        let cx = ctx.complex();
        if !cx.is_cocycle(&self.torsor) {
            return Err(DescentError::NotCocycle { degree: 1 });
        }
        for (g, bg) in self.b.iter().enumerate() {
            let want = cx.sub(&ctx.twist(g, &self.torsor), &self.torsor);
            if !cx.equal(&cx.d(bg), &want) {
                return Err(DescentError::CorruptLift { what: format!("b_{g}") });
            }
        }
        Ok(())
    }
}

fn check_cocycle(ctx: &DescentContext, z: &SiteCochain) -> Result<(), DescentError> {
    if z.values.len() != ctx.complex().dim(z.degree) || !ctx.complex().is_cocycle(z) {
        return Err(DescentError::NotCocycle { degree: z.degree });
    }
    Ok(())
}

pub fn find_torsor_lift(ctx: &DescentContext, t: &SiteCochain) -> Result<TorsorLift, DescentError> {
    check_cocycle(ctx, t)?;
    let cx = ctx.complex();
    if ctx.group().order() == 1 {
        return Ok(TorsorLift { torsor: t.clone(), b: vec![cx.zero(0)] });
    }
    let mut b = Vec::with_capacity(ctx.group().order());
    for g in 0..ctx.group().order() {
        let diff = cx.sub(&ctx.twist(g, t), t);
        match cx.is_coboundary(&diff)? {
            Some(w) => b.push(w),
            None => return Err(DescentError::NotStable { g }),
        }
    }
    Ok(TorsorLift { torsor: t.clone(), b })
}

/// `χ(g,h) = b_g + ρ_g(b_h) - b_{gh}` as a class in `H^2(G, A(X))`.
pub fn torsor_obstruction(ctx: &DescentContext, lift: &TorsorLift) -> Result<ObstructionClass, DescentError> {
    lift.validate(ctx)?;
    let g = ctx.group();
    let cx = ctx.complex();
    let mut table = Vec::with_capacity(g.order() * g.order());
    for a in 0..g.order() {
        for h in 0..g.order() {
            let v = cx.sub(&cx.add(&lift.b[a], &ctx.twist(a, &lift.b[h])), &lift.b[g.mul(a, h)]);
            table.push(v);
        }
    }
    obstruction_from_table(ctx, 2, table, "chi")
}

/// A 1-cocycle over `A^G` whose image is cohomologous to the torsor.
#[derive(Clone, Debug)]
pub struct FixedPointTorsor {
    pub torsor: SiteCochain,
    /// `s` with `i(t̄) = t + d s`.
    pub gauge: SiteCochain,
    /// Adjusted lift with `b_g + ρ_g s - s = 0`.
    pub adjusted_b: Vec<SiteCochain>,
}

/// Why no fixed-point torsor could be assembled.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FixedPointFailure {
    Obstruction { class: Vec<Int> },
    /// Points whose local `H^1(G, F(x))` carries part of the unsolvable class.
    Local { points: Vec<String> },
}

/// The per-point classes of a `G`-cocycle of 0-cochains in `⊕_x H^1(G, F(x))`,
/// and the map `H^1(G, A(X)) -> ⊕_x H^1(G, F(x))`.
struct LocalH1 {
    parts: Vec<FgAbelianGroup>,
    offsets: Vec<usize>,
    map: GroupHom,
}

fn local_h1(ctx: &DescentContext) -> LocalH1 {
    let n = ctx.sheaf().site().len();
    let hs: Vec<_> = (0..n).map(|x| ctx.local_bar(x, 2).cohomology(1)).collect();
    let parts: Vec<&FgAbelianGroup> = hs.iter().map(|h| h.group()).collect();
    let target = FgAbelianGroup::direct_sum(&parts);
    let mut offsets = Vec::with_capacity(n + 1);
    let mut o = 0;
    for h in &hs {
        offsets.push(o);
        o += h.group().ngens();
    }
    offsets.push(o);
    let gbar = ctx.global_bar(2);
    let h1 = gbar.cohomology(1);
    let cols: Vec<Vec<Int>> = h1
        .generator_reps()
        .into_iter()
        .map(|rep| {
            let w = GroupCochain { degree: 1, values: rep };
            let pts = pointwise_from_global(ctx, &w);
            local_classes(ctx, &pts)
        })
        .collect();
    let map = GroupHom::new(h1.group(), &target, IntMatrix::from_columns(target.ngens(), &cols)).expect("restriction on classes");
    let parts = hs.iter().map(|h| h.group().clone()).collect();
    LocalH1 { parts, offsets, map }
}

/// Evaluates a degree-1 `A(X)`-valued group cochain at every point.
fn pointwise_from_global(ctx: &DescentContext, w: &GroupCochain) -> Vec<SiteCochain> {
    let m = ctx.global_module();
    let k = m.underlying().ngens();
    (0..ctx.group().order()).map(|g| ctx.section_to_cochain(&w.values[g * k..(g + 1) * k])).collect()
}

/// Classes in `⊕_x H^1(G, F(x))` of a family `g ↦ c_g` of 0-cochains that is
/// a group 1-cocycle at every point.
fn local_classes(ctx: &DescentContext, c: &[SiteCochain]) -> Vec<Int> {
    let cx = ctx.complex();
    let mut out = Vec::new();
    for x in 0..ctx.sheaf().site().len() {
        let bar = ctx.local_bar(x, 2);
        let k = ctx.sheaf().stalk(x).ngens();
        let mut values = Vec::with_capacity(c.len() * k);
        for cg in c {
            values.extend_from_slice(&cg.values[cx.slot(0, x)]);
        }
        out.extend(bar.class_of(&GroupCochain { degree: 1, values }).expect("pointwise group cocycle"));
    }
    out
}

pub fn fixed_point_torsor(ctx: &DescentContext, lift: &TorsorLift) -> Result<Result<FixedPointTorsor, FixedPointFailure>, DescentError> {
    let chi = torsor_obstruction(ctx, lift)?;
    if !chi.is_zero() {
        return Ok(Err(FixedPointFailure::Obstruction { class: chi.class }));
    }
    let cx = ctx.complex();
    let g = ctx.group();
    let gbar = ctx.global_bar(3);
    let z = gbar.is_coboundary(&chi.cocycle)?.expect("zero class is a coboundary");
    let zc = pointwise_from_global(ctx, &z);
    let b1: Vec<SiteCochain> = lift.b.iter().zip(&zc).map(|(b, z)| cx.sub(b, z)).collect();
    // b1 is now a group 1-cocycle at each point; fix it up by a global
    // 1-cocycle so that every local class vanishes.
    let loc = local_h1(ctx);
    let v = local_classes(ctx, &b1);
    let w = match loc.map.preimage(&v) {
        Ok(w) => w,
        Err(_) => {
            // Report x where the solution coset, projected to H^1(G, F(x)),
            // is not just {0}.
            let site = ctx.sheaf().site();
            let points = (0..site.len())
                .filter(|&x| {
                    let r = loc.offsets[x]..loc.offsets[x + 1];
                    let part = &loc.parts[x];
                    let vx = &v[r.clone()];
                    let map_x = loc.map.matrix().submatrix(r, 0..loc.map.source().ngens());
                    !part.is_zero_vec(vx) || (0..map_x.cols()).any(|j| !part.is_zero_vec(&map_x.column(j)))
                })
                .map(|x| site.name(x).to_string())
                .collect();
            return Ok(Err(FixedPointFailure::Local { points }));
        }
    };
    let h1 = ctx.global_bar(2).cohomology(1);
    let wc = pointwise_from_global(ctx, &GroupCochain { degree: 1, values: h1.rep_of(&w) });
    let b2: Vec<SiteCochain> = b1.iter().zip(&wc).map(|(b, w)| cx.sub(b, w)).collect();
    // Solve ρ_g s_x - s_x = -b2_g(x) pointwise.
    let mut s = cx.zero(0);
    for x in 0..ctx.sheaf().site().len() {
        let bar = ctx.local_bar(x, 2);
        let k = ctx.sheaf().stalk(x).ngens();
        let mut values = Vec::with_capacity(g.order() * k);
        for bg in &b2 {
            values.extend(bg.values[cx.slot(0, x)].iter().map(|a| -a));
        }
        let sx = bar
            .is_coboundary(&GroupCochain { degree: 1, values })?
            .expect("local class vanishes after adjustment");
        s.values[cx.slot(0, x)].clone_from_slice(&sx.values);
    }
    let tbar = cx.add(&lift.torsor, &cx.d(&s));
    let adjusted_b: Vec<SiteCochain> =
        (0..g.order()).map(|h| cx.add(&b2[h], &cx.sub(&ctx.twist(h, &s), &s))).collect();
    let torsor = ctx
        .restrict_to_invariants(&tbar)
        .ok_or_else(|| DescentError::CorruptLift { what: "adjusted torsor is not invariant".into() })?;
    Ok(Ok(FixedPointTorsor { torsor, gauge: s, adjusted_b }))
}

/// Witness that a class comes from the invariants: `i(z̄) - z = d w`.
#[derive(Clone, Debug)]
pub struct InducedWitness {
    pub invariant_cocycle: SiteCochain,
    pub difference: SiteCochain,
}

/// Decides whether `z` is cohomologous to the image of an `A^G`-cocycle.
pub fn is_induced(ctx: &DescentContext, z: &SiteCochain) -> Result<Result<InducedWitness, NotInImage>, DescentError> {
    check_cocycle(ctx, z)?;
    let n = z.degree;
    let cls = ctx.complex().class_of(z)?;
    let map = ctx.invariants_map(n);
    match map.preimage(&cls) {
        Ok(pre) => {
            let zbar = ctx.invariants().cx.rep_of(n, &pre);
            let diff = ctx.complex().sub(&ctx.include(&zbar), z);
            let w = ctx.complex().is_coboundary(&diff)?.expect("same class");
            Ok(Ok(InducedWitness { invariant_cocycle: zbar, difference: w }))
        }
        Err(e) => Ok(Err(e)),
    }
}

pub fn is_induced_torsor(ctx: &DescentContext, t: &SiteCochain) -> Result<Result<InducedWitness, NotInImage>, DescentError> {
    is_induced(ctx, t)
}

pub fn is_induced_gerbe(ctx: &DescentContext, m: &SiteCochain) -> Result<Result<InducedWitness, NotInImage>, DescentError> {
    is_induced(ctx, m)
}

/// A 2-cocycle `m` with `d e_g = ρ_g m - m` and `d f_{g,h} = ρ_g e_h - e_{gh} + e_g`.
#[derive(Clone, Debug)]
pub struct GerbeLift {
    pub gerbe: SiteCochain,
    pub e: Vec<SiteCochain>,
    /// Indexed by `g * |G| + h`.
    pub f: Vec<SiteCochain>,
}

fn connecting_defect(ctx: &DescentContext, e: &[SiteCochain], a: usize, h: usize) -> SiteCochain {
    let cx = ctx.complex();
    let g = ctx.group();
    cx.add(&cx.sub(&ctx.twist(a, &e[h]), &e[g.mul(a, h)]), &e[a])
}

impl GerbeLift {
    pub fn validate(&self, ctx: &DescentContext) -> Result<(), DescentError> {
        let cx = ctx.complex();
        let g = ctx.group();
        if !cx.is_cocycle(&self.gerbe) {
            return Err(DescentError::NotCocycle { degree: 2 });
        }
        for (a, ea) in self.e.iter().enumerate() {
            let want = cx.sub(&ctx.twist(a, &self.gerbe), &self.gerbe);
            if !cx.equal(&cx.d(ea), &want) {
                return Err(DescentError::CorruptLift { what: format!("e_{a}") });
            }
        }
        for a in 0..g.order() {
            for h in 0..g.order() {
                let want = connecting_defect(ctx, &self.e, a, h);
                if !cx.equal(&cx.d(&self.f[a * g.order() + h]), &want) {
                    return Err(DescentError::CorruptLift { what: format!("f_({a},{h})") });
                }
            }
        }
        Ok(())
    }
}

pub fn find_gerbe_lift(ctx: &DescentContext, m: &SiteCochain) -> Result<GerbeLift, DescentError> {
    check_cocycle(ctx, m)?;
    let cx = ctx.complex();
    let g = ctx.group();
    let ord = g.order();
    if ord == 1 {
        return Ok(GerbeLift { gerbe: m.clone(), e: vec![cx.zero(1)], f: vec![cx.zero(0)] });
    }
    let mut e = Vec::with_capacity(ord);
    for a in 0..ord {
        let diff = cx.sub(&ctx.twist(a, m), m);
        match cx.is_coboundary(&diff)? {
            Some(w) => e.push(w),
            None => return Err(DescentError::NotStable { g: a }),
        }
    }
    // Classes of the defects W_{g,h} in H^1(X, A); adjust e_g by 1-cocycles
    // z_g with δ[z] = -[W].
    let h1 = cx.cohomology(1);
    let hbar = ctx.cohomology_bar(1, 3);
    let kh = h1.group().ngens();
    let mut defect = Vec::with_capacity(ord * ord * kh);
    for a in 0..ord {
        for h in 0..ord {
            defect.extend(h1.class_of(&connecting_defect(ctx, &e, a, h).values)?);
        }
    }
    let neg: Vec<Int> = defect.iter().map(|v| -v).collect();
    let z = match hbar.complex().differential(1).preimage(&neg) {
        Ok(z) => z,
        Err(_) => return Err(DescentError::NoConnecting { defect }),
    };
    for a in 0..ord {
        let rep = cx.rep_of(1, &z[a * kh..(a + 1) * kh]);
        e[a] = cx.add(&e[a], &rep);
    }
    let mut f = Vec::with_capacity(ord * ord);
    for a in 0..ord {
        for h in 0..ord {
            let w = connecting_defect(ctx, &e, a, h);
            let fa = cx
                .is_coboundary(&w)?
                .ok_or_else(|| DescentError::CorruptLift { what: format!("defect ({a},{h}) after adjustment") })?;
            f.push(fa);
        }
    }
    Ok(GerbeLift { gerbe: m.clone(), e, f })
}

/// `κ(g1,g2,g3) = f_{g1,g2g3} + ρ_{g1}(f_{g2,g3}) - f_{g1g2,g3} - f_{g1,g2}` in `H^3(G, A(X))`.
pub fn gerbe_obstruction(ctx: &DescentContext, lift: &GerbeLift) -> Result<ObstructionClass, DescentError> {
    lift.validate(ctx)?;
    let cx = ctx.complex();
    let g = ctx.group();
    let ord = g.order();
    let f = |a: usize, b: usize| &lift.f[a * ord + b];
    let mut table = Vec::with_capacity(ord * ord * ord);
    for g1 in 0..ord {
        for g2 in 0..ord {
            for g3 in 0..ord {
                let v = cx.add(f(g1, g.mul(g2, g3)), &ctx.twist(g1, f(g2, g3)));
                let v = cx.sub(&cx.sub(&v, f(g.mul(g1, g2), g3)), f(g1, g2));
                table.push(v);
            }
        }
    }
    obstruction_from_table(ctx, 3, table, "kappa")
}

/// Transports a torsor lift along an equivariant sheaf morphism.
pub fn push_torsor_lift(f: &SheafMorphism, src: &DescentContext, dst: &DescentContext, l: &TorsorLift) -> TorsorLift {
    let p = |z: &SiteCochain| push_cochain(f, src.complex(), dst.complex(), z);
    TorsorLift { torsor: p(&l.torsor), b: l.b.iter().map(p).collect() }
}

/// Transports a gerbe lift along an equivariant sheaf morphism.
pub fn push_gerbe_lift(f: &SheafMorphism, src: &DescentContext, dst: &DescentContext, l: &GerbeLift) -> GerbeLift {
    let p = |z: &SiteCochain| push_cochain(f, src.complex(), dst.complex(), z);
    GerbeLift { gerbe: p(&l.gerbe), e: l.e.iter().map(p).collect(), f: l.f.iter().map(p).collect() }
}

/// Applies a sheaf morphism to an obstruction table, giving a table for the target.
pub fn push_table(f: &SheafMorphism, src: &DescentContext, dst: &DescentContext, table: &[SiteCochain]) -> Vec<SiteCochain> {
    table.iter().map(|z| push_cochain(f, src.complex(), dst.complex(), z)).collect()
}
