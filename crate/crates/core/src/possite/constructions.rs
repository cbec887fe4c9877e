use super::{EquivariantSheaf, GTorsorCocycle, MonotoneMap, SheafMorphism, SiteError};
use crate::abgroup::{FgAbelianGroup, GroupHom, Int, IntMatrix};
use crate::gcoh::{group_cohomology, FiniteGroup, GroupModule};

/// A monotone map with a group acting on the source by order automorphisms
/// over the target.
#[derive(Clone, Debug)]
pub struct Cover {
    pub map: MonotoneMap,
    pub group: FiniteGroup,
    /// `deck[g][z]` is the image of `z` under `g`.
    pub deck: Vec<Vec<usize>>,
}

impl Cover {
    pub fn new(map: MonotoneMap, group: &FiniteGroup, deck: Vec<Vec<usize>>) -> Result<Cover, SiteError> {
        let total = &map.source;
        let n = total.len();
        if deck.len() != group.order() {
            return Err(SiteError::ActionShape);
        }
        for (g, t) in deck.iter().enumerate() {
            let mut seen = vec![false; n];
            if t.len() != n || t.iter().any(|&z| z >= n || std::mem::replace(&mut seen[z], true)) {
                return Err(SiteError::DeckNotAutomorphism { g });
            }
            for a in 0..n {
                if map.map[t[a]] != map.map[a] {
                    return Err(SiteError::DeckNotOverMap { g, point: total.name(a).into() });
                }
                for b in 0..n {
                    if total.leq(a, b) != total.leq(t[a], t[b]) {
                        return Err(SiteError::DeckNotAutomorphism { g });
                    }
                }
            }
        }
        for g in 0..group.order() {
            for h in 0..group.order() {
                let gh = group.mul(g, h);
                if (0..n).any(|z| deck[g][deck[h][z]] != deck[gh][z]) {
                    return Err(SiteError::DeckNotAction { g, h });
                }
            }
        }
        if (0..n).any(|z| deck[0][z] != z) {
            return Err(SiteError::DeckNotAction { g: 0, h: 0 });
        }
        Ok(Cover { map, group: group.clone(), deck })
    }
}

/// `(π_* F)(x) = Γ(π^{-1}(U_x), F)` with the deck action. `F` must be a
/// plain sheaf invariant under the deck transformations.
pub fn pushforward(cover: &Cover, f: &EquivariantSheaf) -> Result<EquivariantSheaf, SiteError> {
    let total = &cover.map.source;
    if f.site() != total {
        return Err(SiteError::SiteMismatch);
    }
    if f.group().order() != 1 {
        return Err(SiteError::GroupMismatch);
    }
    for (g, t) in cover.deck.iter().enumerate() {
        for a in 0..total.len() {
            if f.stalk(a).ngens() != f.stalk(t[a]).ngens() || f.stalk(a).relations() != f.stalk(t[a]).relations() {
                return Err(SiteError::NotDeckInvariant { g, point: total.name(a).into() });
            }
            for b in 0..total.len() {
                if total.leq(a, b) && !f.restriction(a, b).matrix().eq(f.restriction(t[a], t[b]).matrix()) {
                    return Err(SiteError::NotDeckInvariant { g, point: total.name(a).into() });
                }
            }
        }
    }
    let base = &cover.map.target;
    let group = &cover.group;
    let n = base.len();
    let secs: Vec<_> = (0..n).map(|x| f.sections(&cover.map.preimage_of_open(x)).unwrap()).collect();
    let stalks: Vec<FgAbelianGroup> = secs.iter().map(|s| s.group.clone()).collect();
    let mut restr: Vec<Vec<Option<GroupHom>>> = vec![vec![None; n]; n];
    for x in 0..n {
        for y in 0..n {
            if !base.leq(x, y) {
                continue;
            }
            let (sx, sy) = (&secs[x], &secs[y]);
            let cols: Vec<Vec<Int>> = (0..sx.group.ngens())
                .map(|j| {
                    let full = sx.incl.matrix().column(j);
                    let mut sub = Vec::with_capacity(sy.ambient.ngens());
                    for &z in &sy.points {
                        let i = sx.points.iter().position(|&p| p == z).unwrap();
                        let k = f.stalk(z).ngens();
                        sub.extend_from_slice(&full[sx.offsets[i]..sx.offsets[i] + k]);
                    }
                    sy.incl.preimage(&sub).expect("restricted section is a section")
                })
                .collect();
            restr[x][y] = Some(GroupHom::new_unchecked(&sx.group, &sy.group, IntMatrix::from_columns(sy.group.ngens(), &cols)));
        }
    }
    let mut modules = Vec::with_capacity(n);
    for x in 0..n {
        let s = &secs[x];
        let acts = (0..group.order())
            .map(|g| {
                // (ρ_g s)_z = s_{τ_g^{-1} z}
                let ginv = group.inv(g);
                let cols: Vec<Vec<Int>> = (0..s.group.ngens())
                    .map(|j| {
                        let full = s.incl.matrix().column(j);
                        let mut out = Vec::with_capacity(full.len());
                        for &z in &s.points {
                            let src = cover.deck[ginv][z];
                            let i = s.points.iter().position(|&p| p == src).unwrap();
                            let k = f.stalk(src).ngens();
                            out.extend_from_slice(&full[s.offsets[i]..s.offsets[i] + k]);
                        }
                        s.incl.preimage(&out).expect("deck action preserves sections")
                    })
                    .collect();
                GroupHom::new_unchecked(&s.group, &s.group, IntMatrix::from_columns(s.group.ngens(), &cols))
            })
            .collect();
        modules.push(GroupModule::new_unchecked(group, &s.group, acts));
    }
    Ok(EquivariantSheaf::from_parts_unchecked(base, group, stalks, restr, modules))
}

/// `A^G` with trivial action, and the inclusion `A^G -> A`.
pub fn invariants_sheaf(a: &EquivariantSheaf) -> (EquivariantSheaf, SheafMorphism) {
    let site = a.site();
    let n = site.len();
    let fixed: Vec<(FgAbelianGroup, GroupHom)> = (0..n).map(|x| a.stalk_module(x).invariants()).collect();
    let stalks: Vec<FgAbelianGroup> = fixed.iter().map(|(g, _)| g.clone()).collect();
    let mut restr: Vec<Vec<Option<GroupHom>>> = vec![vec![None; n]; n];
    for x in 0..n {
        for y in 0..n {
            if site.leq(x, y) {
                let r = a.restriction(x, y);
                let cols: Vec<Vec<Int>> = (0..stalks[x].ngens())
                    .map(|j| {
                        let img = r.apply(&fixed[x].1.matrix().column(j));
                        fixed[y].1.preimage(&img).expect("restriction of an invariant is invariant")
                    })
                    .collect();
                restr[x][y] = Some(GroupHom::new_unchecked(&stalks[x], &stalks[y], IntMatrix::from_columns(stalks[y].ngens(), &cols)));
            }
        }
    }
    let modules = stalks.iter().map(|s| GroupModule::trivial(a.group(), s)).collect();
    let ag = EquivariantSheaf::from_parts_unchecked(site, a.group(), stalks, restr, modules);
    let incl = SheafMorphism::new_unchecked(&ag, a, fixed.into_iter().map(|(_, i)| i).collect());
    (ag, incl)
}

/// `E[M](x) = ∏_{g∈G} E(x)`, restriction `(rφ)_k = r_E(φ_{k c_{x<=y}})`,
/// action `(ρ_g φ)_h = φ_{g^{-1} h}`.
pub fn internal_hom_torsor(e: &EquivariantSheaf, m: &GTorsorCocycle) -> Result<EquivariantSheaf, SiteError> {
    let site = e.site();
    if site != m.site() {
        return Err(SiteError::SiteMismatch);
    }
    if !e.has_trivial_action() {
        return Err(SiteError::NontrivialCoefficients);
    }
    let g = m.group();
    let ord = g.order();
    let n = site.len();
    let stalks: Vec<FgAbelianGroup> = (0..n).map(|x| e.stalk(x).power(ord)).collect();
    let mut restr: Vec<Vec<Option<GroupHom>>> = vec![vec![None; n]; n];
    for x in 0..n {
        for y in 0..n {
            if !site.leq(x, y) {
                continue;
            }
            let c = m.transition(x, y);
            let r = e.restriction(x, y).matrix();
            let (kx, ky) = (e.stalk(x).ngens(), e.stalk(y).ngens());
            let mut mat = IntMatrix::zeros(ord * ky, ord * kx);
            for k in 0..ord {
                mat.set_block(k * ky, g.mul(k, c) * kx, r);
            }
            restr[x][y] = Some(GroupHom::new_unchecked(&stalks[x], &stalks[y], mat));
        }
    }
    let modules = (0..n).map(|x| GroupModule::permutation(g, e.stalk(x))).collect();
    Ok(EquivariantSheaf::from_parts_unchecked(site, g, stalks, restr, modules))
}

/// `(B ×_G M)(x) = B(x)` with restriction `r_B ∘ ρ_{c_{x<=y}}` and trivial action.
pub fn contracted_product(b: &EquivariantSheaf, m: &GTorsorCocycle) -> Result<EquivariantSheaf, SiteError> {
    let site = b.site();
    if site != m.site() {
        return Err(SiteError::SiteMismatch);
    }
    if b.group() != m.group() {
        return Err(SiteError::GroupMismatch);
    }
    let n = site.len();
    let mut restr: Vec<Vec<Option<GroupHom>>> = vec![vec![None; n]; n];
    for x in 0..n {
        for y in 0..n {
            if site.leq(x, y) {
                restr[x][y] = Some(b.restriction(x, y).compose(b.action(m.transition(x, y), x)));
            }
        }
    }
    let trivial = FiniteGroup::trivial();
    let modules = b.stalks().iter().map(|s| GroupModule::trivial(&trivial, s)).collect();
    Ok(EquivariantSheaf::from_parts_unchecked(site, &trivial, b.stalks().to_vec(), restr, modules))
}

/// Adjunction counit-style evaluation `E[M] ×_G M -> E`, `φ ↦ φ_e`.
pub fn evaluation_morphism(e: &EquivariantSheaf, m: &GTorsorCocycle) -> Result<SheafMorphism, SiteError> {
    let em = internal_hom_torsor(e, m)?;
    let cp = contracted_product(&em, m)?;
    let mats = (0..e.site().len())
        .map(|x| {
            let k = e.stalk(x).ngens();
            let mut mat = IntMatrix::zeros(k, k * m.group().order());
            mat.set_block(0, 0, &IntMatrix::identity(k));
            mat
        })
        .collect();
    SheafMorphism::new(&cp, &e.underlying(), mats)
}

/// Per-point verdict of `H^j(G, F(x)) = 0`.
#[derive(Clone, Debug)]
pub struct LocalVanishingReport {
    pub degree: usize,
    pub points: Vec<(String, FgAbelianGroup, bool)>,
    pub overall: bool,
}

impl LocalVanishingReport {
    pub fn failing_points(&self) -> Vec<String> {
        self.points.iter().filter(|(_, _, ok)| !ok).map(|(n, _, _)| n.clone()).collect()
    }
}

pub fn stalkwise_local_vanishing(a: &EquivariantSheaf, j: usize) -> LocalVanishingReport {
    let site = a.site();
    let points: Vec<(String, FgAbelianGroup, bool)> = (0..site.len())
        .map(|x| {
            let h = group_cohomology(a.stalk_module(x), j).group().clone();
            let ok = h.is_trivial();
            (site.name(x).to_string(), h, ok)
        })
        .collect();
    let overall = points.iter().all(|p| p.2);
    LocalVanishingReport { degree: j, points, overall }
}
