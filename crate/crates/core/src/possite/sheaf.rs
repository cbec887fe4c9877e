use super::{PosetSite, SiteError};
use crate::abgroup::{hom_kernel, FgAbelianGroup, GroupHom, Int, IntMatrix};
use crate::gcoh::{FiniteGroup, GroupModule};
use std::sync::Arc;

struct SheafInner {
    site: PosetSite,
    group: FiniteGroup,
    stalks: Vec<FgAbelianGroup>,
    // restr[x][y] is set exactly when x <= y
    restr: Vec<Vec<Option<GroupHom>>>,
    // modules[x] carries the action on F(x)
    modules: Vec<GroupModule>,
}

/// A functor from the poset to abelian groups, with a compatible pointwise
/// action of a finite group. `F(x)` plays the role of sections over `U_x`.
#[derive(Clone)]
pub struct EquivariantSheaf(Arc<SheafInner>);

impl std::fmt::Debug for EquivariantSheaf {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let st: Vec<String> = self.0.stalks.iter().map(|s| s.render()).collect();
        write!(f, "EquivariantSheaf(stalks {st:?}, |G| = {})", self.0.group.order())
    }
}

/// Equality of the presented data: site, group, stalk presentations,
/// restriction matrices and action matrices.
impl PartialEq for EquivariantSheaf {
    fn eq(&self, other: &Self) -> bool {
        if Arc::ptr_eq(&self.0, &other.0) {
            return true;
        }
        let (a, b) = (&*self.0, &*other.0);
        let n = a.stalks.len();
        a.site == b.site
            && a.group == b.group
            && a.stalks.iter().zip(&b.stalks).all(|(x, y)| x.same_presentation(y))
            && (0..n).all(|x| {
                (0..n).all(|y| match (&a.restr[x][y], &b.restr[x][y]) {
                    (Some(r), Some(t)) => r.matrix() == t.matrix(),
                    (None, None) => true,
                    _ => false,
                })
            })
            && (0..n).all(|x| (0..a.group.order()).all(|g| a.modules[x].action(g).matrix() == b.modules[x].action(g).matrix()))
    }
}

impl Eq for EquivariantSheaf {}

impl EquivariantSheaf {
    /// `restrictions` must cover every covering pair; other pairs are
    /// filled by composition and any given ones are checked. `action[g][x]`
    /// defaults to the trivial action when `None`.
    pub fn new(
        site: &PosetSite,
        group: &FiniteGroup,
        stalks: Vec<FgAbelianGroup>,
        restrictions: Vec<((usize, usize), IntMatrix)>,
        action: Option<Vec<Vec<IntMatrix>>>,
    ) -> Result<EquivariantSheaf, SiteError> {
        let n = site.len();
        if stalks.len() != n {
            return Err(SiteError::StalkCount { expected: n, found: stalks.len() });
        }
        let mut given: Vec<Vec<Option<GroupHom>>> = vec![vec![None; n]; n];
        for ((x, y), m) in restrictions {
            if x >= n || y >= n {
                return Err(SiteError::PointIndex { index: x.max(y) });
            }
            if !site.lt(x, y) {
                return Err(SiteError::NotComparable { a: site.name(x).into(), b: site.name(y).into() });
            }
            let h = GroupHom::new(&stalks[x], &stalks[y], m).map_err(|source| SiteError::Restriction {
                a: site.name(x).into(),
                b: site.name(y).into(),
                source,
            })?;
            given[x][y] = Some(h);
        }
        let mut restr: Vec<Vec<Option<GroupHom>>> = vec![vec![None; n]; n];
        for x in site.top_down_order() {
            restr[x][x] = Some(GroupHom::identity(&stalks[x]));
            for z in 0..n {
                if !site.lt(x, z) {
                    continue;
                }
                let h = if site.covering_pairs().contains(&(x, z)) {
                    given[x][z]
                        .clone()
                        .ok_or_else(|| SiteError::RestrictionMissing { a: site.name(x).into(), b: site.name(z).into() })?
                } else {
                    let y = site
                        .covering_pairs()
                        .iter()
                        .find(|&&(a, b)| a == x && site.leq(b, z))
                        .map(|&(_, b)| b)
                        .expect("a non-covering pair factors through a cover");
                    let first = given[x][y]
                        .clone()
                        .ok_or_else(|| SiteError::RestrictionMissing { a: site.name(x).into(), b: site.name(y).into() })?;
                    restr[y][z].as_ref().unwrap().compose(&first)
                };
                restr[x][z] = Some(h);
            }
        }
        for x in 0..n {
            for z in 0..n {
                if let (Some(g), Some(r)) = (&given[x][z], &restr[x][z]) {
                    if !g.equals(r) {
                        return Err(SiteError::Functoriality {
                            a: site.name(x).into(),
                            b: site.name(x).into(),
                            c: site.name(z).into(),
                        });
                    }
                }
            }
        }
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    if site.lt(x, y) && site.lt(y, z) {
                        let comp = restr[y][z].as_ref().unwrap().compose(restr[x][y].as_ref().unwrap());
                        if !comp.equals(restr[x][z].as_ref().unwrap()) {
                            return Err(SiteError::Functoriality {
                                a: site.name(x).into(),
                                b: site.name(y).into(),
                                c: site.name(z).into(),
                            });
                        }
                    }
                }
            }
        }
        let modules = match action {
            None => stalks.iter().map(|s| GroupModule::trivial(group, s)).collect(),
            Some(act) => {
                if act.len() != group.order() || act.iter().any(|a| a.len() != n) {
                    return Err(SiteError::ActionShape);
                }
                let mut mods = Vec::with_capacity(n);
                for x in 0..n {
                    let mats = (0..group.order()).map(|g| act[g][x].clone()).collect();
                    let m = GroupModule::new(group, &stalks[x], mats)
                        .map_err(|source| SiteError::Action { point: site.name(x).into(), source })?;
                    mods.push(m);
                }
                mods
            }
        };
        let sheaf = EquivariantSheaf(Arc::new(SheafInner { site: site.clone(), group: group.clone(), stalks, restr, modules }));
        sheaf.check_equivariance()?;
        Ok(sheaf)
    }

    pub(crate) fn from_parts_unchecked(
        site: &PosetSite,
        group: &FiniteGroup,
        stalks: Vec<FgAbelianGroup>,
        restr: Vec<Vec<Option<GroupHom>>>,
        modules: Vec<GroupModule>,
    ) -> EquivariantSheaf {
        EquivariantSheaf(Arc::new(SheafInner { site: site.clone(), group: group.clone(), stalks, restr, modules }))
    }

    fn check_equivariance(&self) -> Result<(), SiteError> {
        let site = &self.0.site;
        for &(x, y) in site.covering_pairs() {
            let r = self.restriction(x, y);
            for g in 0..self.0.group.order() {
                let a = self.0.modules[y].action(g).compose(r);
                let b = r.compose(self.0.modules[x].action(g));
                if !a.equals(&b) {
                    return Err(SiteError::Equivariance { a: site.name(x).into(), b: site.name(y).into(), g });
                }
            }
        }
        Ok(())
    }

    /// Constant sheaf with identity restrictions and trivial action.
    pub fn constant(site: &PosetSite, group: &FiniteGroup, value: &FgAbelianGroup) -> EquivariantSheaf {
        let n = site.len();
        let stalks = vec![value.clone(); n];
        let restr = (0..n)
            .map(|x| (0..n).map(|y| site.leq(x, y).then(|| GroupHom::identity(value))).collect())
            .collect();
        let modules = (0..n).map(|_| GroupModule::trivial(group, value)).collect();
        EquivariantSheaf::from_parts_unchecked(site, group, stalks, restr, modules)
    }

    pub fn site(&self) -> &PosetSite {
        &self.0.site
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.0.group
    }

    pub fn stalk(&self, x: usize) -> &FgAbelianGroup {
        &self.0.stalks[x]
    }

    pub fn stalks(&self) -> &[FgAbelianGroup] {
        &self.0.stalks
    }

    /// `r_{x<=y}`; panics unless `x <= y`.
    pub fn restriction(&self, x: usize, y: usize) -> &GroupHom {
        self.0.restr[x][y].as_ref().expect("restriction along a non-comparable pair")
    }

    pub fn stalk_module(&self, x: usize) -> &GroupModule {
        &self.0.modules[x]
    }

    pub fn modules(&self) -> &[GroupModule] {
        &self.0.modules
    }

    pub fn action(&self, g: usize, x: usize) -> &GroupHom {
        self.0.modules[x].action(g)
    }

    pub fn has_trivial_action(&self) -> bool {
        self.0.modules.iter().all(|m| m.is_trivial_action().is_ok())
    }

    /// The same functor with the action forgotten (trivial group).
    pub fn underlying(&self) -> EquivariantSheaf {
        self.with_group_trivial_action(&FiniteGroup::trivial())
    }

    /// The same functor with `group` acting trivially.
    pub fn with_group_trivial_action(&self, group: &FiniteGroup) -> EquivariantSheaf {
        let modules = self.0.stalks.iter().map(|s| GroupModule::trivial(group, s)).collect();
        EquivariantSheaf::from_parts_unchecked(&self.0.site, group, self.0.stalks.clone(), self.0.restr.clone(), modules)
    }

    /// Sections over an up-closed set `u`, with the inclusion into `⊕_{x∈u} F(x)`.
    pub fn sections(&self, u: &[usize]) -> Result<Sections, SiteError> {
        let site = &self.0.site;
        if let Some((x, y)) = site.up_closure_violation(u) {
            return Err(SiteError::NotUpClosed { a: site.name(x).into(), b: site.name(y).into() });
        }
        let mut points = u.to_vec();
        points.sort_unstable();
        points.dedup();
        let parts: Vec<&FgAbelianGroup> = points.iter().map(|&x| &self.0.stalks[x]).collect();
        let ambient = FgAbelianGroup::direct_sum(&parts);
        let mut offsets = Vec::with_capacity(points.len());
        let mut off = 0;
        for &x in &points {
            offsets.push(off);
            off += self.0.stalks[x].ngens();
        }
        let pairs: Vec<(usize, usize)> =
            site.covering_pairs().iter().copied().filter(|(a, _)| points.contains(a)).collect();
        let tparts: Vec<&FgAbelianGroup> = pairs.iter().map(|&(_, b)| &self.0.stalks[b]).collect();
        let target = FgAbelianGroup::direct_sum(&tparts);
        let mut m = IntMatrix::zeros(target.ngens(), ambient.ngens());
        let mut r0 = 0;
        for &(a, b) in &pairs {
            let ia = points.iter().position(|&p| p == a).unwrap();
            let ib = points.iter().position(|&p| p == b).unwrap();
            m.add_block(r0, offsets[ia], self.restriction(a, b).matrix());
            m.add_scaled_block(r0, offsets[ib], &IntMatrix::identity(self.0.stalks[b].ngens()), &Int::from(-1));
            r0 += self.0.stalks[b].ngens();
        }
        let (group, incl) = hom_kernel(&GroupHom::new_unchecked(&ambient, &target, m));
        Ok(Sections { points, offsets, ambient, group, incl })
    }

    pub fn global_sections(&self) -> Sections {
        self.sections(&self.0.site.all_points()).expect("the whole site is open")
    }
}

/// `Γ(U, F)` as a subgroup of `⊕_{x∈U} F(x)`.
#[derive(Clone, Debug)]
pub struct Sections {
    pub points: Vec<usize>,
    pub offsets: Vec<usize>,
    pub ambient: FgAbelianGroup,
    pub group: FgAbelianGroup,
    pub incl: GroupHom,
}

impl Sections {
    /// Value at point `x` of the section with coordinates `s`.
    pub fn value_at(&self, sheaf: &EquivariantSheaf, s: &[Int], x: usize) -> Vec<Int> {
        let i = self.points.iter().position(|&p| p == x).expect("point inside the open");
        let full = self.incl.apply(s);
        let k = sheaf.stalk(x).ngens();
        sheaf.stalk(x).reduce(&full[self.offsets[i]..self.offsets[i] + k])
    }

    /// Projection `Γ(U) -> F(x)`.
    pub fn projection(&self, sheaf: &EquivariantSheaf, x: usize) -> GroupHom {
        let i = self.points.iter().position(|&p| p == x).expect("point inside the open");
        let k = sheaf.stalk(x).ngens();
        let sel = self.incl.matrix().submatrix(self.offsets[i]..self.offsets[i] + k, 0..self.group.ngens());
        GroupHom::new_unchecked(&self.group, sheaf.stalk(x), sel)
    }

    /// The induced action of `g` on sections.
    pub fn action(&self, sheaf: &EquivariantSheaf, g: usize) -> GroupHom {
        let mats: Vec<&IntMatrix> = self.points.iter().map(|&x| sheaf.action(g, x).matrix()).collect();
        let big = IntMatrix::block_diag(&mats);
        let cols: Vec<Vec<Int>> = (0..self.group.ngens())
            .map(|j| {
                let img = big.mul_vec(&self.incl.matrix().column(j));
                self.incl.preimage(&img).expect("sections are stable under the action")
            })
            .collect();
        GroupHom::new_unchecked(&self.group, &self.group, IntMatrix::from_columns(self.group.ngens(), &cols))
    }

    pub fn module(&self, sheaf: &EquivariantSheaf) -> GroupModule {
        let acts = (0..sheaf.group().order()).map(|g| self.action(sheaf, g)).collect();
        GroupModule::new_unchecked(sheaf.group(), &self.group, acts)
    }
}

/// A pointwise family of homomorphisms commuting with restrictions and actions.
#[derive(Clone, Debug)]
pub struct SheafMorphism {
    pub source: EquivariantSheaf,
    pub target: EquivariantSheaf,
    pub maps: Vec<GroupHom>,
}

impl SheafMorphism {
    pub fn new(source: &EquivariantSheaf, target: &EquivariantSheaf, mats: Vec<IntMatrix>) -> Result<SheafMorphism, SiteError> {
        let site = source.site();
        if site != target.site() {
            return Err(SiteError::SiteMismatch);
        }
        if source.group() != target.group() {
            return Err(SiteError::GroupMismatch);
        }
        if mats.len() != site.len() {
            return Err(SiteError::StalkCount { expected: site.len(), found: mats.len() });
        }
        let mut maps = Vec::with_capacity(mats.len());
        for (x, m) in mats.into_iter().enumerate() {
            maps.push(GroupHom::new(source.stalk(x), target.stalk(x), m).map_err(|e| SiteError::Restriction {
                a: site.name(x).into(),
                b: site.name(x).into(),
                source: e,
            })?);
        }
        let f = SheafMorphism { source: source.clone(), target: target.clone(), maps };
        f.check()?;
        Ok(f)
    }

    pub(crate) fn new_unchecked(source: &EquivariantSheaf, target: &EquivariantSheaf, maps: Vec<GroupHom>) -> SheafMorphism {
        SheafMorphism { source: source.clone(), target: target.clone(), maps }
    }

    fn check(&self) -> Result<(), SiteError> {
        let site = self.source.site();
        for &(x, y) in site.covering_pairs() {
            let a = self.maps[y].compose(self.source.restriction(x, y));
            let b = self.target.restriction(x, y).compose(&self.maps[x]);
            if !a.equals(&b) {
                return Err(SiteError::MorphismRestriction { a: site.name(x).into(), b: site.name(y).into() });
            }
        }
        for x in 0..site.len() {
            for g in 0..self.source.group().order() {
                let a = self.maps[x].compose(self.source.action(g, x));
                let b = self.target.action(g, x).compose(&self.maps[x]);
                if !a.equals(&b) {
                    return Err(SiteError::MorphismAction { point: site.name(x).into(), g });
                }
            }
        }
        Ok(())
    }

    pub fn is_pointwise_injective(&self) -> bool {
        self.maps.iter().all(|m| m.is_injective())
    }

    /// Composite `self ∘ first`.
    pub fn compose(&self, first: &SheafMorphism) -> SheafMorphism {
        let maps = self.maps.iter().zip(&first.maps).map(|(a, b)| a.compose(b)).collect();
        SheafMorphism::new_unchecked(&first.source, &self.target, maps)
    }
}

/// A `G`-torsor on the site given by transitions `c_{x<=y}` with
/// `c_{x<=z} = c_{y<=z} c_{x<=y}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GTorsorCocycle {
    site: PosetSite,
    group: FiniteGroup,
    // trans[x][y] meaningful when x <= y
    trans: Vec<Vec<usize>>,
}

impl GTorsorCocycle {
    /// `transitions` must cover the covering pairs; the rest are composed
    /// and any extra given pairs are checked.
    pub fn new(site: &PosetSite, group: &FiniteGroup, transitions: &[((usize, usize), usize)]) -> Result<GTorsorCocycle, SiteError> {
        let n = site.len();
        let mut given = vec![vec![None; n]; n];
        for &((x, y), g) in transitions {
            if x >= n || y >= n || g >= group.order() {
                return Err(SiteError::PointIndex { index: x.max(y) });
            }
            if !site.leq(x, y) {
                return Err(SiteError::NotComparable { a: site.name(x).into(), b: site.name(y).into() });
            }
            given[x][y] = Some(g);
        }
        let mut trans = vec![vec![0; n]; n];
        for x in site.top_down_order() {
            for z in 0..n {
                if !site.lt(x, z) {
                    continue;
                }
                trans[x][z] = if site.covering_pairs().contains(&(x, z)) {
                    given[x][z].ok_or_else(|| SiteError::RestrictionMissing { a: site.name(x).into(), b: site.name(z).into() })?
                } else {
                    let y = site.covering_pairs().iter().find(|&&(a, b)| a == x && site.leq(b, z)).unwrap().1;
                    let first = given[x][y]
                        .ok_or_else(|| SiteError::RestrictionMissing { a: site.name(x).into(), b: site.name(y).into() })?;
                    group.mul(trans[y][z], first)
                };
            }
        }
        for x in 0..n {
            if let Some(g) = given[x][x] {
                if g != 0 {
                    return Err(SiteError::TorsorCocycle { a: site.name(x).into(), b: site.name(x).into(), c: site.name(x).into() });
                }
            }
            for y in 0..n {
                if let Some(g) = given[x][y] {
                    if x != y && g != trans[x][y] {
                        return Err(SiteError::TorsorCocycle { a: site.name(x).into(), b: site.name(y).into(), c: site.name(y).into() });
                    }
                }
                for z in 0..n {
                    if site.lt(x, y) && site.lt(y, z) && trans[x][z] != group.mul(trans[y][z], trans[x][y]) {
                        return Err(SiteError::TorsorCocycle { a: site.name(x).into(), b: site.name(y).into(), c: site.name(z).into() });
                    }
                }
            }
        }
        Ok(GTorsorCocycle { site: site.clone(), group: group.clone(), trans })
    }

    pub fn trivial(site: &PosetSite, group: &FiniteGroup) -> GTorsorCocycle {
        let n = site.len();
        GTorsorCocycle { site: site.clone(), group: group.clone(), trans: vec![vec![0; n]; n] }
    }

    /// The torsor of a covering `pi` with deck group acting by `deck[g]`,
    /// trivialized by the chosen lifts `lift[x]` of each base point.
    pub fn from_cover(cover: &super::Cover, lift: &[usize]) -> Result<GTorsorCocycle, SiteError> {
        let base = &cover.map.target;
        let total = &cover.map.source;
        let g = &cover.group;
        let n = base.len();
        if lift.len() != n || lift.iter().enumerate().any(|(x, &l)| l >= total.len() || cover.map.map[l] != x) {
            return Err(SiteError::BadLift);
        }
        let mut pairs = Vec::new();
        for &(x, y) in base.covering_pairs() {
            let above: Vec<usize> = (0..total.len()).filter(|&z| cover.map.map[z] == y && total.leq(lift[x], z)).collect();
            if above.len() != 1 {
                return Err(SiteError::NotACovering { a: base.name(x).into(), b: base.name(y).into() });
            }
            let d = (0..g.order()).find(|&h| cover.deck[h][lift[y]] == above[0]).ok_or(SiteError::NotACovering {
                a: base.name(x).into(),
                b: base.name(y).into(),
            })?;
            pairs.push(((x, y), g.inv(d)));
        }
        GTorsorCocycle::new(base, g, &pairs)
    }

    pub fn site(&self) -> &PosetSite {
        &self.site
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    /// `c_{x<=y}`.
    pub fn transition(&self, x: usize, y: usize) -> usize {
        self.trans[x][y]
    }

    pub fn transitions(&self) -> Vec<((usize, usize), usize)> {
        self.site.covering_pairs().iter().map(|&(x, y)| ((x, y), self.trans[x][y])).collect()
    }
}
