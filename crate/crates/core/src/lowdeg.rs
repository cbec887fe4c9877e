//! The double complex `K^{p,q} = C^p(G, C^q(X, A))`, the six maps of the
//! low-degree exact sequence as cochain chases, and exactness checks.

use crate::abgroup::{hom_image, hom_kernel, FgAbelianGroup, GroupHom, Int, IntMatrix};
use crate::chaincx::{ChainError, CochainComplex, DoubleComplex};
use crate::descent::{
    find_gerbe_lift, find_torsor_lift, gerbe_obstruction, obstruction_from_table, torsor_obstruction, DescentContext,
    DescentError, GerbeLift, ObstructionClass,
};
use crate::gcoh::{BarComplex, GroupCochain, GroupModule};
use crate::possite::{
    internal_hom_torsor, stalkwise_local_vanishing, EquivariantSheaf, GTorsorCocycle, LocalVanishingReport, SiteCochain,
    SiteComplex, SiteError,
};
use std::fmt::Write as _;
use std::sync::OnceLock;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LowDegError {
    #[error("group cochain is not a cocycle (first failure at tuple {tuple:?})")]
    NotCocycle { tuple: Vec<usize> },
    #[error("local solve failed at {points:?}")]
    LocalFailure { points: Vec<String> },
    #[error("zig-zag failed on the chain {chain}")]
    ZigZag { chain: String },
    #[error("the image in H^2(X, A) is not zero")]
    NotInKernel,
    #[error("the chased cochain is not invariant")]
    NotInvariant,
    #[error(transparent)]
    Descent(#[from] DescentError),
    #[error(transparent)]
    Chain(#[from] ChainError),
    #[error(transparent)]
    Site(#[from] SiteError),
}

/// Values of a family of 0-cochains (indexed by group tuples) at point `x`,
/// as a group cochain over `F(x)`.
fn at_point(cx: &SiteComplex, table: &[SiteCochain], x: usize, degree: usize) -> GroupCochain {
    let mut values = Vec::new();
    for c in table {
        values.extend_from_slice(&c.values[cx.slot(0, x)]);
    }
    GroupCochain { degree, values }
}

/// Site 0-cochains of an `A(X)`-valued group cochain, one per tuple.
fn global_table(ctx: &DescentContext, c: &GroupCochain) -> Vec<SiteCochain> {
    let k = ctx.global_module().underlying().ngens();
    let count = ctx.group().tuple_count(c.degree);
    (0..count).map(|i| ctx.section_to_cochain(&c.values[i * k..(i + 1) * k])).collect()
}

fn first_nonzero_tuple(module: &GroupModule, c: &GroupCochain) -> Option<Vec<usize>> {
    let k = module.underlying().ngens();
    let g = module.group();
    (0..g.tuple_count(c.degree))
        .find(|&i| !module.underlying().is_zero_vec(&c.values[i * k..(i + 1) * k]))
        .map(|i| g.tuple(c.degree, i))
}

fn check_bar_cocycle(bar: &BarComplex, c: &GroupCochain) -> Result<(), LowDegError> {
    if bar.is_cocycle(c) {
        return Ok(());
    }
    let d = crate::gcoh::bar_differential(bar.module(), c);
    let tuple = first_nonzero_tuple(bar.module(), &d).unwrap_or_default();
    Err(LowDegError::NotCocycle { tuple })
}

/// Output of the first map: an `A^G`-cocycle `t̄ = d s` with its gauge `s`.
#[derive(Clone, Debug)]
pub struct Theta1 {
    pub cocycle: SiteCochain,
    pub gauge: SiteCochain,
    pub class: Vec<Int>,
}

/// `a ∈ Z^1(G, A(X))` to `H^1(X, A^G)`: solve `ρ_g s_x - s_x = -a_g|x` at every
/// point and take `t̄ = d s`.
pub fn theta1(ctx: &DescentContext, a: &GroupCochain) -> Result<Theta1, LowDegError> {
    check_bar_cocycle(&ctx.global_bar(2), a)?;
    let cx = ctx.complex();
    let table = global_table(ctx, a);
    let mut s = cx.zero(0);
    let mut bad = Vec::new();
    for x in 0..ctx.sheaf().site().len() {
        let mut ax = at_point(cx, &table, x, 1);
        ax.values.iter_mut().for_each(|v| *v = -&*v);
        match ctx.local_bar(x, 2).is_coboundary(&ax).map_err(DescentError::from)? {
            Some(sx) => s.values[cx.slot(0, x)].clone_from_slice(&sx.values),
            None => bad.push(ctx.sheaf().site().name(x).to_string()),
        }
    }
    if !bad.is_empty() {
        return Err(LowDegError::LocalFailure { points: bad });
    }
    let t = cx.d(&s);
    let cocycle = ctx.restrict_to_invariants(&t).ok_or(LowDegError::NotInvariant)?;
    let class = ctx.invariants().cx.class_of(&cocycle)?;
    Ok(Theta1 { cocycle, gauge: s, class })
}

/// The third map through the descent route: the torsor obstruction.
pub fn theta3(ctx: &DescentContext, t: &SiteCochain) -> Result<ObstructionClass, LowDegError> {
    let lift = find_torsor_lift(ctx, t)?;
    Ok(torsor_obstruction(ctx, &lift)?)
}

/// Output of the fourth map with its zig-zag witnesses.
#[derive(Clone, Debug)]
pub struct Theta4 {
    pub cocycle: SiteCochain,
    pub class: Vec<Int>,
    /// `β_x` with `δ β_x = α|x`.
    pub beta: Vec<GroupCochain>,
    /// `γ` on strict pairs with `δ γ_{x<y} = β_y - r β_x`.
    pub gamma: SiteCochain,
}

/// `α ∈ Z^2(G, A(X))` to `H^2(X, A^G)` by the zig-zag
/// `α|x = δβ_x`, `β_y - rβ_x = δγ_{x<y}`, `m̄ = dγ`.
pub fn theta4(ctx: &DescentContext, alpha: &GroupCochain) -> Result<Theta4, LowDegError> {
    check_bar_cocycle(&ctx.global_bar(3), alpha)?;
    let cx = ctx.complex();
    let site = ctx.sheaf().site();
    let g = ctx.group();
    let table = global_table(ctx, alpha);
    let mut beta = Vec::with_capacity(site.len());
    let mut bad = Vec::new();
    for x in 0..site.len() {
        let ax = at_point(cx, &table, x, 2);
        match ctx.local_bar(x, 3).is_coboundary(&ax).map_err(DescentError::from)? {
            Some(b) => beta.push(b),
            None => {
                bad.push(site.name(x).to_string());
                beta.push(GroupCochain { degree: 1, values: vec![] });
            }
        }
    }
    if !bad.is_empty() {
        return Err(LowDegError::LocalFailure { points: bad });
    }
    let mut gamma = cx.zero(1);
    for (i, c) in site.chains(1).iter().enumerate() {
        let (x, y) = (c[0], c[1]);
        let r = ctx.sheaf().restriction(x, y);
        let (kx, ky) = (ctx.sheaf().stalk(x).ngens(), ctx.sheaf().stalk(y).ngens());
        let mut values = Vec::with_capacity(g.order() * ky);
        for h in 0..g.order() {
            let rb = r.apply(&beta[x].values[h * kx..(h + 1) * kx]);
            values.extend(beta[y].values[h * ky..(h + 1) * ky].iter().zip(&rb).map(|(a, b)| a - b));
        }
        let w = ctx
            .local_bar(y, 2)
            .is_coboundary(&GroupCochain { degree: 1, values })
            .map_err(DescentError::from)?
            .ok_or_else(|| LowDegError::ZigZag { chain: site.chain_label(c) })?;
        gamma.values[cx.slot(1, i)].clone_from_slice(&w.values);
    }
    let m = cx.d(&gamma);
    let cocycle = ctx.restrict_to_invariants(&m).ok_or(LowDegError::NotInvariant)?;
    let class = ctx.invariants().cx.class_of(&cocycle)?;
    Ok(Theta4 { cocycle, class, beta, gamma })
}

/// Output of the fifth map: `y_g = [ρ_g n - n]` with the witness `n`.
#[derive(Clone, Debug)]
pub struct Theta5 {
    pub witness: SiteCochain,
    pub cocycle: GroupCochain,
    pub class: Vec<Int>,
}

/// `m̄` with `i(m̄) = d n` to the class of `g ↦ [ρ_g n - n]` in `H^1(G, H^1(X, A))`.
pub fn theta5(ctx: &DescentContext, mbar: &SiteCochain) -> Result<Theta5, LowDegError> {
    let inv = ctx.invariants();
    if !inv.cx.is_cocycle(mbar) {
        return Err(DescentError::NotCocycle { degree: mbar.degree }.into());
    }
    let cx = ctx.complex();
    let im = ctx.include(mbar);
    let n = cx.is_coboundary(&im)?.ok_or(LowDegError::NotInKernel)?;
    let h1 = cx.cohomology(1);
    let mut values = Vec::new();
    for g in 0..ctx.group().order() {
        let y = cx.sub(&ctx.twist(g, &n), &n);
        values.extend(h1.class_of(&y.values)?);
    }
    let cocycle = GroupCochain { degree: 1, values };
    let bar = ctx.cohomology_bar(1, 2);
    let class = bar.class_of(&cocycle).map_err(|e| match e {
        crate::gcoh::GcohError::Chain(c) => LowDegError::Chain(c),
        other => LowDegError::Descent(DescentError::Gcoh(other)),
    })?;
    Ok(Theta5 { witness: n, cocycle, class })
}

/// Representatives `n_g` and the solved `u_{g,h}` behind the sixth map.
#[derive(Clone, Debug)]
pub struct Theta6 {
    pub reps: Vec<SiteCochain>,
    pub u: Vec<SiteCochain>,
    pub obstruction: ObstructionClass,
}

fn theta6_reps(ctx: &DescentContext, y: &GroupCochain, perturb: Option<&[SiteCochain]>) -> Result<Vec<SiteCochain>, LowDegError> {
    let bar = ctx.cohomology_bar(1, 2);
    check_bar_cocycle(&bar, y)?;
    let cx = ctx.complex();
    let kh = cx.cohomology(1).group().ngens();
    Ok((0..ctx.group().order())
        .map(|g| {
            let rep = cx.rep_of(1, &y.values[g * kh..(g + 1) * kh]);
            match perturb {
                Some(p) => cx.add(&rep, &p[g]),
                None => rep,
            }
        })
        .collect())
}

fn theta6_defect(ctx: &DescentContext, n: &[SiteCochain], a: usize, h: usize) -> SiteCochain {
    let cx = ctx.complex();
    let g = ctx.group();
    cx.add(&cx.sub(&ctx.twist(a, &n[h]), &n[g.mul(a, h)]), &n[a])
}

/// `y ∈ Z^1(G, H^1(X, A))` to `H^3(G, A(X))`: choose cocycles `n_g`, solve
/// `d u_{g,h} = ρ_g n_h - n_{gh} + n_g`, then
/// `κ = ρ_{g1} u_{g2,g3} - u_{g1g2,g3} + u_{g1,g2g3} - u_{g1,g2}`.
pub fn theta6(ctx: &DescentContext, y: &GroupCochain) -> Result<Theta6, LowDegError> {
    let reps = theta6_reps(ctx, y, None)?;
    let cx = ctx.complex();
    let g = ctx.group();
    let ord = g.order();
    let mut u = Vec::with_capacity(ord * ord);
    for a in 0..ord {
        for h in 0..ord {
            let w = theta6_defect(ctx, &reps, a, h);
            let sol = cx.is_coboundary(&w)?.ok_or_else(|| LowDegError::NotCocycle { tuple: vec![a, h] })?;
            u.push(sol);
        }
    }
    let uu = |a: usize, b: usize| &u[a * ord + b];
    let mut table = Vec::with_capacity(ord * ord * ord);
    for g1 in 0..ord {
        for g2 in 0..ord {
            for g3 in 0..ord {
                let v = cx.sub(&ctx.twist(g1, uu(g2, g3)), uu(g.mul(g1, g2), g3));
                let v = cx.sub(&cx.add(&v, uu(g1, g.mul(g2, g3))), uu(g1, g2));
                table.push(v);
            }
        }
    }
    let obstruction = obstruction_from_table(ctx, 3, table, "theta6")?;
    Ok(Theta6 { reps, u, obstruction })
}

/// The sixth map through the gerbe route: the trivial gerbe with
/// `e_g = n_g` (optionally perturbed) and freshly solved connecting data.
pub fn theta6_via_gerbe(ctx: &DescentContext, y: &GroupCochain, perturb: Option<&[SiteCochain]>) -> Result<ObstructionClass, LowDegError> {
    let e = theta6_reps(ctx, y, perturb)?;
    let cx = ctx.complex();
    let ord = ctx.group().order();
    let mut f = Vec::with_capacity(ord * ord);
    for a in 0..ord {
        for h in 0..ord {
            let w = theta6_defect(ctx, &e, a, h);
            f.push(cx.is_coboundary(&w)?.ok_or_else(|| LowDegError::NotCocycle { tuple: vec![a, h] })?);
        }
    }
    let lift = GerbeLift { gerbe: cx.zero(2), e, f };
    Ok(gerbe_obstruction(ctx, &lift)?)
}

/// `K^{p,q}` for `p <= P` and every site degree, with its total complex.
pub struct LowDegreeComplex {
    sheaf: EquivariantSheaf,
    cx: SiteComplex,
    double: DoubleComplex,
    total: OnceLock<CochainComplex>,
}

impl LowDegreeComplex {
    pub fn new(sheaf: &EquivariantSheaf, p_max: usize) -> LowDegreeComplex {
        let cx = SiteComplex::new(sheaf);
        let g = sheaf.group();
        let q_max = cx.top();
        let bars: Vec<BarComplex> = (0..=q_max).map(|q| BarComplex::new(cx.cochain_module(q), p_max)).collect();
        let groups: Vec<Vec<FgAbelianGroup>> =
            (0..=p_max).map(|p| (0..=q_max).map(|q| bars[q].complex().group(p)).collect()).collect();
        let dh: Vec<Vec<GroupHom>> =
            (0..p_max).map(|p| (0..=q_max).map(|q| bars[q].complex().differential(p)).collect()).collect();
        let dv: Vec<Vec<GroupHom>> = (0..=p_max)
            .map(|p| {
                (0..q_max)
                    .map(|q| {
                        let d = cx.complex().differential(q);
                        let copies = vec![d.matrix(); g.tuple_count(p)];
                        GroupHom::new(&groups[p][q], &groups[p][q + 1], IntMatrix::block_diag(&copies))
                            .expect("site differential respects relations")
                    })
                    .collect()
            })
            .collect();
        let double = DoubleComplex::new(groups, dh, dv).expect("group and site differentials commute");
        LowDegreeComplex { sheaf: sheaf.clone(), cx, double, total: OnceLock::new() }
    }

    pub fn sheaf(&self) -> &EquivariantSheaf {
        &self.sheaf
    }

    pub fn site_complex(&self) -> &SiteComplex {
        &self.cx
    }

    pub fn double(&self) -> &DoubleComplex {
        &self.double
    }

    pub fn total(&self) -> &CochainComplex {
        self.total.get_or_init(|| self.double.total_complex())
    }

    /// `H^n` of the total complex; reliable for `n < P`.
    pub fn total_cohomology(&self, n: usize) -> FgAbelianGroup {
        self.total().cohomology(n).group().clone()
    }

    /// The transgression `d_2` of a stable 1-cocycle `t`: solve
    /// `d_v b = d_h t` in column 1 and return `d_h b` in `K^{2,0}`.
    pub fn theta3_double(&self, ctx: &DescentContext, t: &SiteCochain) -> Result<Vec<Int>, LowDegError> {
        let dht = self.double.dh(0, 1).apply(&t.values);
        let b = self.double.dv(1, 0).preimage(&dht).map_err(|_| DescentError::NotStable { g: 0 })?;
        let chi = self.double.dh(1, 0).apply(&b);
        let cx = &self.cx;
        let ord = ctx.group().order();
        let d0 = cx.dim(0);
        let table: Vec<SiteCochain> = (0..ord * ord)
            .map(|i| SiteCochain { degree: 0, values: chi[i * d0..(i + 1) * d0].to_vec() })
            .collect();
        Ok(obstruction_from_table(ctx, 2, table, "d2")?.class)
    }
}

/// One node of the exact sequence.
#[derive(Clone, Debug)]
pub struct NodeReport {
    pub name: String,
    pub image: FgAbelianGroup,
    pub kernel: FgAbelianGroup,
    pub exact: bool,
    pub certificate: Option<String>,
}

impl NodeReport {
    pub fn line(&self) -> String {
        format!(
            "node {}: image={} kernel={} exact={}",
            self.name,
            self.image.render(),
            self.kernel.render(),
            if self.exact { "yes" } else { "no" }
        )
    }
}

/// Compares two subgroups of one node group, given by their inclusions.
fn compare(name: &str, image: &GroupHom, kernel: &GroupHom) -> NodeReport {
    let mut cert = None;
    for j in 0..image.source().ngens() {
        let v = image.matrix().column(j);
        if kernel.preimage(&v).is_err() {
            cert = Some(format!("image element {} is not in the kernel", render_vec(&image.target().reduce(&v))));
            break;
        }
    }
    if cert.is_none() {
        for j in 0..kernel.source().ngens() {
            let v = kernel.matrix().column(j);
            if image.preimage(&v).is_err() {
                cert = Some(format!("kernel element {} is not in the image", render_vec(&kernel.target().reduce(&v))));
                break;
            }
        }
    }
    NodeReport {
        name: name.into(),
        image: image.source().clone(),
        kernel: kernel.source().clone(),
        exact: cert.is_none(),
        certificate: cert,
    }
}

fn render_vec(v: &[Int]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(","))
}

/// Kernel of `h` restricted to a subgroup `d ⊂ N` (given by `incl`), as a
/// subgroup of `N`.
fn kernel_in(h: &GroupHom, incl: &GroupHom) -> GroupHom {
    let (_, k) = hom_kernel(h);
    incl.compose(&k)
}

fn image_in(h: &GroupHom, target_incl: Option<&GroupHom>) -> GroupHom {
    let (_, i) = hom_image(h);
    match target_incl {
        None => i,
        Some(t) => lift_through(&i, t),
    }
}

/// Factors `h : S -> N` through the subgroup inclusion `incl : D -> N`.
fn lift_through(h: &GroupHom, incl: &GroupHom) -> GroupHom {
    let cols: Vec<Vec<Int>> = (0..h.source().ngens())
        .map(|j| incl.preimage(&h.matrix().column(j)).expect("lands in the subgroup"))
        .collect();
    GroupHom::new(h.source(), incl.source(), IntMatrix::from_columns(incl.source().ngens(), &cols))
        .expect("factorization through a subgroup")
}

fn zero_incl(n: &FgAbelianGroup) -> GroupHom {
    GroupHom::zero(&FgAbelianGroup::zero(), n)
}

/// Builds a hom on the generators of `source` by evaluating `f` on the
/// representative of each generator.
fn hom_on_generators(
    source: &FgAbelianGroup,
    target: &FgAbelianGroup,
    mut f: impl FnMut(&[Int]) -> Result<Vec<Int>, LowDegError>,
) -> Result<GroupHom, LowDegError> {
    let mut cols = Vec::with_capacity(source.ngens());
    for i in 0..source.ngens() {
        let mut v = vec![Int::ZERO; source.ngens()];
        v[i] = Int::ONE;
        cols.push(target.reduce(&f(&v)?));
    }
    Ok(GroupHom::new(source, target, IntMatrix::from_columns(target.ngens(), &cols)).expect("chase is additive on classes"))
}

/// The explicit maps of the sequence, as homomorphisms between the node groups.
pub struct SequenceMaps {
    /// Domain of the first map inside `H^1(G, A(X))`.
    pub d1: GroupHom,
    pub theta1: GroupHom,
    pub theta2: GroupHom,
    /// `H^1(X, A)^G` inside `H^1(X, A)`.
    pub fixed1: GroupHom,
    pub theta3: GroupHom,
    /// Domain of the fourth map inside `H^2(G, A(X))`.
    pub d4: GroupHom,
    pub theta4: Result<GroupHom, LowDegError>,
    /// `ker(H^2(X, A^G) -> H^2(X, A))` inside `H^2(X, A^G)`.
    pub k5: GroupHom,
    pub theta5: GroupHom,
    pub theta6: GroupHom,
    /// `H^2(X, A)^G` inside `H^2(X, A)`.
    pub fixed2: GroupHom,
    pub invariants2: GroupHom,
    pub kappa: Result<GroupHom, LowDegError>,
}

fn local_restriction(ctx: &DescentContext, n: usize) -> GroupHom {
    let site = ctx.sheaf().site();
    let gbar = ctx.global_bar(n + 1);
    let hg = gbar.cohomology(n);
    let locals: Vec<_> = (0..site.len()).map(|x| ctx.local_bar(x, n + 1).cohomology(n)).collect();
    let parts: Vec<&FgAbelianGroup> = locals.iter().map(|h| h.group()).collect();
    let target = FgAbelianGroup::direct_sum(&parts);
    let cx = ctx.complex();
    let cols: Vec<Vec<Int>> = hg
        .generator_reps()
        .into_iter()
        .map(|rep| {
            let table = global_table(ctx, &GroupCochain { degree: n, values: rep });
            let mut out = Vec::new();
            for (x, h) in locals.iter().enumerate() {
                out.extend(h.class_of(&at_point(cx, &table, x, n).values).expect("restriction of a cocycle"));
            }
            out
        })
        .collect();
    GroupHom::new(hg.group(), &target, IntMatrix::from_columns(target.ngens(), &cols)).expect("restriction on classes")
}

pub fn sequence_maps(ctx: &DescentContext) -> Result<SequenceMaps, LowDegError> {
    let cx = ctx.complex();
    let inv = ctx.invariants();
    let gbar2 = ctx.global_bar(2);
    let gbar3 = ctx.global_bar(3);
    let h1g = gbar2.cohomology(1);
    let h2g = gbar3.cohomology(2);
    let h1inv = inv.cx.cohomology(1);

    let (_, d1) = hom_kernel(&local_restriction(ctx, 1));
    let theta1 = hom_on_generators(d1.source(), h1inv.group(), |v| {
        let a = GroupCochain { degree: 1, values: h1g.rep_of(&d1.apply(v)) };
        Ok(theta1(ctx, &a)?.class)
    })?;

    let theta2 = ctx.invariants_map(1);
    let (_, fixed1) = ctx.cohomology_module(1).invariants();
    let theta3 = hom_on_generators(fixed1.source(), h2g.group(), |v| {
        let t = cx.rep_of(1, &fixed1.apply(v));
        Ok(theta3(ctx, &t)?.class)
    })?;

    let (_, d4) = hom_kernel(&local_restriction(ctx, 2));
    let (_, k5) = hom_kernel(&ctx.invariants_map(2));
    let h2inv = inv.cx.cohomology(2);
    let theta4 = hom_on_generators(d4.source(), k5.source(), |v| {
        let alpha = GroupCochain { degree: 2, values: h2g.rep_of(&d4.apply(v)) };
        let out = theta4(ctx, &alpha)?;
        Ok(k5.preimage(&out.class).map_err(|_| LowDegError::NotInKernel)?)
    });

    let hbar = ctx.cohomology_bar(1, 2);
    let h1h1 = hbar.cohomology(1);
    let theta5 = hom_on_generators(k5.source(), h1h1.group(), |v| {
        let mbar = inv.cx.rep_of(2, &k5.apply(v));
        Ok(theta5(ctx, &mbar)?.class)
    })?;

    let h3g = ctx.global_bar(4).cohomology(3);
    let theta6 = hom_on_generators(h1h1.group(), h3g.group(), |v| {
        let y = GroupCochain { degree: 1, values: h1h1.rep_of(v) };
        Ok(theta6(ctx, &y)?.obstruction.class)
    })?;

    let invariants2 = ctx.invariants_map(2);
    let (_, fixed2) = ctx.cohomology_module(2).invariants();
    let kappa = hom_on_generators(fixed2.source(), h3g.group(), |v| {
        let m = cx.rep_of(2, &fixed2.apply(v));
        let lift = find_gerbe_lift(ctx, &m)?;
        Ok(gerbe_obstruction(ctx, &lift)?.class)
    });
    let _ = h2inv;
    Ok(SequenceMaps { d1, theta1, theta2, fixed1, theta3, d4, theta4, k5, theta5, theta6, fixed2, invariants2, kappa })
}

/// Verdicts at the six nodes plus the gerbe node `H^2(X, A)^G`.
#[derive(Clone, Debug)]
pub struct ExactnessReport {
    pub nodes: Vec<NodeReport>,
    pub gerbe_node: NodeReport,
    pub local_vanishing: Vec<LocalVanishingReport>,
}

impl ExactnessReport {
    pub fn all_exact(&self) -> bool {
        self.nodes.iter().all(|n| n.exact)
    }

    pub fn node(&self, name: &str) -> Option<&NodeReport> {
        self.nodes.iter().chain(std::iter::once(&self.gerbe_node)).find(|n| n.name == name)
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        for n in self.nodes.iter().chain(std::iter::once(&self.gerbe_node)) {
            let _ = writeln!(s, "{}", n.line());
            if let Some(c) = &n.certificate {
                let _ = writeln!(s, "  certificate: {c}");
            }
        }
        for r in &self.local_vanishing {
            let fails = r.failing_points();
            let _ = writeln!(
                s,
                "local vanishing j={}: {}",
                r.degree,
                if fails.is_empty() { "all points".to_string() } else { format!("fails at {}", fails.join(",")) }
            );
        }
        s
    }
}

fn failed_node(name: &str, n: &FgAbelianGroup, err: &LowDegError) -> NodeReport {
    NodeReport {
        name: name.into(),
        image: FgAbelianGroup::zero(),
        kernel: n.clone(),
        exact: false,
        certificate: Some(format!("map undefined: {err}")),
    }
}

pub const NODE_NAMES: [&str; 6] = [
    "H1(G,A(X))",
    "H1(X,A^G)",
    "H1(X,A)^G",
    "H2(G,A(X))",
    "ker(H2(X,A^G)->H2(X,A))",
    "H1(G,H1(X,A))",
];

pub const GERBE_NODE: &str = "H2(X,A)^G";

pub fn exactness_report(ctx: &DescentContext) -> Result<ExactnessReport, LowDegError> {
    let m = sequence_maps(ctx)?;
    let mut nodes = Vec::with_capacity(6);
    // 1: injectivity of θ1 on its domain
    let n1 = m.d1.target().clone();
    nodes.push(compare(NODE_NAMES[0], &zero_incl(&n1), &kernel_in(&m.theta1, &m.d1)));
    // 2
    nodes.push(compare(NODE_NAMES[1], &image_in(&m.theta1, None), &hom_kernel(&m.theta2).1));
    // 3: θ2 lands in H^1(X, A)^G
    let theta2_fixed = lift_through(&m.theta2, &m.fixed1);
    nodes.push(compare(NODE_NAMES[2], &image_in(&theta2_fixed, None), &hom_kernel(&m.theta3).1));
    // 4
    let n4 = m.d4.target().clone();
    match &m.theta4 {
        Ok(t4) => nodes.push(compare(NODE_NAMES[3], &image_in(&m.theta3, None), &kernel_in(t4, &m.d4))),
        Err(e) => nodes.push(failed_node(NODE_NAMES[3], &n4, e)),
    }
    // 5
    match &m.theta4 {
        Ok(t4) => nodes.push(compare(NODE_NAMES[4], &image_in(t4, None), &hom_kernel(&m.theta5).1)),
        Err(e) => nodes.push(failed_node(NODE_NAMES[4], m.k5.source(), e)),
    }
    // 6
    nodes.push(compare(NODE_NAMES[5], &image_in(&m.theta5, None), &hom_kernel(&m.theta6).1));
    let inv2_fixed = lift_through(&m.invariants2, &m.fixed2);
    let gerbe_node = match &m.kappa {
        Ok(k) => compare(GERBE_NODE, &image_in(&inv2_fixed, None), &hom_kernel(k).1),
        Err(e) => failed_node(GERBE_NODE, m.fixed2.source(), e),
    };
    let local_vanishing = (1..=3).map(|j| stalkwise_local_vanishing(ctx.sheaf(), j)).collect();
    Ok(ExactnessReport { nodes, gerbe_node, local_vanishing })
}

/// Total cohomology of `K` for `A = E[M]` against `H^n(X, E)`.
#[derive(Clone, Debug)]
pub struct HsComparison {
    /// `(n, total, direct, equal)` for `n = 0..=3`.
    pub degrees: Vec<(usize, FgAbelianGroup, FgAbelianGroup, bool)>,
    /// `(p, q, H^p(G, H^q(X, A)))` for `p + q <= 3`.
    pub e2: Vec<(usize, usize, FgAbelianGroup)>,
}

impl HsComparison {
    pub fn all_match(&self) -> bool {
        self.degrees.iter().all(|d| d.3)
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        for (n, t, d, eq) in &self.degrees {
            let _ = writeln!(s, "degree {n}: total={} direct={} match={}", t.render(), d.render(), if *eq { "yes" } else { "no" });
        }
        for (p, q, g) in &self.e2 {
            let _ = writeln!(s, "E2[{p},{q}]={}", g.render());
        }
        s
    }
}

pub fn hs_low_degree_compare(e: &EquivariantSheaf, m: &GTorsorCocycle) -> Result<HsComparison, LowDegError> {
    let a = internal_hom_torsor(e, m)?;
    let ldc = LowDegreeComplex::new(&a, 4);
    let direct = SiteComplex::new(&e.underlying());
    let degrees = (0..=3)
        .map(|n| {
            let t = ldc.total_cohomology(n);
            let d = direct.cohomology(n).group().clone();
            let eq = t.isomorphic(&d);
            (n, t, d, eq)
        })
        .collect();
    let ctx = DescentContext::new(&a);
    let mut e2 = Vec::new();
    for q in 0..=3usize {
        for p in 0..=(3 - q) {
            let h = ctx.cohomology_bar(q, p + 1).cohomology(p).group().clone();
            e2.push((p, q, h));
        }
    }
    Ok(HsComparison { degrees, e2 })
}

/// Every homomorphism `φ: G -> H^1(X, A^G)` with the class of `θ6(i_* ∘ φ)`.
/// The kernel of the trivial-action bar differential is `Hom(G, H^1(X, A^G))`,
/// which is finite because `G` is.
pub fn theta6_on_induced_homs(ctx: &DescentContext) -> Result<Vec<(GroupCochain, ObstructionClass)>, LowDegError> {
    let inv = ctx.invariants();
    let h1inv = inv.cx.cohomology(1);
    let trivial = GroupModule::trivial(ctx.group(), h1inv.group());
    let bar = BarComplex::new(&trivial, 2);
    let (homs, incl) = hom_kernel(&bar.complex().differential(1));
    let elems = homs.elements().expect("homomorphisms out of a finite group form a finite set");
    let i1 = ctx.invariants_map(1);
    let k_in = h1inv.group().ngens();
    let k_out = i1.target().ngens();
    let mut out = Vec::with_capacity(elems.len());
    for e in elems {
        let phi = incl.apply(&e);
        let mut values = Vec::with_capacity(ctx.group().order() * k_out);
        for g in 0..ctx.group().order() {
            values.extend(i1.apply(&phi[g * k_in..(g + 1) * k_in]));
        }
        let y = GroupCochain { degree: 1, values };
        let class = theta6(ctx, &y)?.obstruction;
        out.push((GroupCochain { degree: 1, values: phi }, class));
    }
    Ok(out)
}
