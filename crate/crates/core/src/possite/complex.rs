use super::{EquivariantSheaf, SheafMorphism, SiteError};
use crate::abgroup::{FgAbelianGroup, GroupHom, Int, IntMatrix};
use crate::chaincx::{ChainError, CochainComplex, CohomologyGroup};
use crate::gcoh::GroupModule;
use std::sync::{Arc, OnceLock};

/// A cochain on strict chains: value at `x_0 < ... < x_q` lies in `F(x_q)`.
/// Coordinates are concatenated in chain order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SiteCochain {
    pub degree: usize,
    pub values: Vec<Int>,
}

/// The ordered-chain complex of a sheaf, with per-degree layout and the
/// pointwise group action on cochains.
pub struct SiteComplex {
    sheaf: EquivariantSheaf,
    offsets: Vec<Vec<usize>>,
    complex: CochainComplex,
    modules: Vec<OnceLock<GroupModule>>,
}

impl std::fmt::Debug for SiteComplex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "SiteComplex({:?})", self.complex)
    }
}

fn chain_groups(sheaf: &EquivariantSheaf, chains: &[Vec<Vec<usize>>]) -> (Vec<FgAbelianGroup>, Vec<Vec<usize>>) {
    let mut groups = Vec::new();
    let mut offsets = Vec::new();
    for cs in chains {
        let mut off = Vec::with_capacity(cs.len() + 1);
        let mut o = 0;
        for c in cs {
            off.push(o);
            o += sheaf.stalk(*c.last().unwrap()).ngens();
        }
        off.push(o);
        let parts: Vec<&FgAbelianGroup> = cs.iter().map(|c| sheaf.stalk(*c.last().unwrap())).collect();
        groups.push(FgAbelianGroup::direct_sum(&parts));
        offsets.push(off);
    }
    (groups, offsets)
}

/// Matrix of `d^q` for the given chain lists (strict or weak).
fn differential_matrix(
    sheaf: &EquivariantSheaf,
    upper: &[Vec<usize>],
    lower_off: &[usize],
    upper_off: &[usize],
    index: impl Fn(&[usize]) -> usize,
) -> IntMatrix {
    let mut m = IntMatrix::zeros(*upper_off.last().unwrap(), *lower_off.last().unwrap());
    let minus = Int::from(-1);
    let mut face = Vec::new();
    for (ui, c) in upper.iter().enumerate() {
        let q1 = c.len() - 1;
        let r0 = upper_off[ui];
        let last = c[q1];
        let k = sheaf.stalk(last).ngens();
        for i in 0..q1 {
            face.clear();
            face.extend(c.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &x)| x));
            let c0 = lower_off[index(&face)];
            let s = if i % 2 == 0 { Int::ONE } else { minus.clone() };
            for j in 0..k {
                *m.get_mut(r0 + j, c0 + j) += &s;
            }
        }
        let c0 = lower_off[index(&c[..q1])];
        let s = if q1 % 2 == 0 { Int::ONE } else { minus.clone() };
        m.add_scaled_block(r0, c0, sheaf.restriction(c[q1 - 1], last).matrix(), &s);
    }
    m
}

const EMPTY_DEGREES: usize = 4;

impl SiteComplex {
    pub fn new(sheaf: &EquivariantSheaf) -> SiteComplex {
        let site = sheaf.site();
        let chains: Vec<Vec<Vec<usize>>> = (0..=site.max_chain_degree()).map(|q| site.chains(q).to_vec()).collect();
        let (groups, offsets) = chain_groups(sheaf, &chains);
        let mut diffs = Vec::new();
        for q in 0..chains.len() - 1 {
            let m = differential_matrix(sheaf, &chains[q + 1], &offsets[q], &offsets[q + 1], |c| {
                site.chain_index(c).expect("faces of strict chains are strict")
            });
            diffs.push(GroupHom::new_unchecked(&groups[q], &groups[q + 1], m));
        }
        let complex = CochainComplex::new(groups, diffs).expect("chain complex squares to zero");
        // degrees past the longest chain hold zero cochains; keep a few so
        // callers can ask about H^{top+1} and friends uniformly
        let mut offsets = offsets;
        offsets.extend((0..EMPTY_DEGREES).map(|_| vec![0]));
        let modules = (0..chains.len() + EMPTY_DEGREES).map(|_| OnceLock::new()).collect();
        SiteComplex { sheaf: sheaf.clone(), offsets, complex, modules }
    }

    pub fn sheaf(&self) -> &EquivariantSheaf {
        &self.sheaf
    }

    pub fn complex(&self) -> &CochainComplex {
        &self.complex
    }

    pub fn top(&self) -> usize {
        self.complex.top()
    }

    pub fn cochain_group(&self, q: usize) -> FgAbelianGroup {
        self.complex.group(q)
    }

    pub fn dim(&self, q: usize) -> usize {
        self.complex.group(q).ngens()
    }

    pub fn zero(&self, q: usize) -> SiteCochain {
        SiteCochain { degree: q, values: vec![Int::ZERO; self.dim(q)] }
    }

    /// Coordinate range of the value on the `i`-th chain of degree `q`.
    pub fn slot(&self, q: usize, i: usize) -> std::ops::Range<usize> {
        self.offsets[q][i]..self.offsets[q][i + 1]
    }

    pub fn value<'a>(&self, z: &'a SiteCochain, chain: &[usize]) -> &'a [Int] {
        let i = self.sheaf.site().chain_index(chain).expect("strict chain");
        &z.values[self.slot(z.degree, i)]
    }

    pub fn set_value(&self, z: &mut SiteCochain, chain: &[usize], v: &[Int]) {
        let i = self.sheaf.site().chain_index(chain).expect("strict chain");
        let r = self.slot(z.degree, i);
        z.values[r].clone_from_slice(v);
    }

    /// Builds a cochain from sparse `(chain, value)` entries; missing chains are zero.
    pub fn cochain_from_entries(&self, q: usize, entries: &[(Vec<usize>, Vec<Int>)]) -> Result<SiteCochain, SiteError> {
        let site = self.sheaf.site();
        let mut z = self.zero(q);
        for (c, v) in entries {
            if c.len() != q + 1 {
                return Err(SiteError::NotAChain { label: site.chain_label(c) });
            }
            let i = site.chain_index(c).ok_or_else(|| SiteError::NotAChain { label: site.chain_label(c) })?;
            let r = self.slot(q, i);
            if v.len() != r.len() {
                return Err(SiteError::ValueLength { label: site.chain_label(c), expected: r.len(), found: v.len() });
            }
            z.values[r].clone_from_slice(v);
        }
        Ok(z)
    }

    /// Nonzero entries of a cochain, keyed by chain.
    pub fn entries(&self, z: &SiteCochain) -> Vec<(Vec<usize>, Vec<Int>)> {
        let site = self.sheaf.site();
        site.chains(z.degree)
            .iter()
            .enumerate()
            .filter_map(|(i, c)| {
                let v = self.sheaf.stalk(*c.last().unwrap()).reduce(&z.values[self.slot(z.degree, i)]);
                (!v.iter().all(|a| a.is_zero())).then(|| (c.clone(), v))
            })
            .collect()
    }

    pub fn d(&self, z: &SiteCochain) -> SiteCochain {
        let values = self.complex.apply_d(z.degree, &z.values);
        let values = self.cochain_group(z.degree + 1).reduce(&values);
        SiteCochain { degree: z.degree + 1, values }
    }

    pub fn is_cocycle(&self, z: &SiteCochain) -> bool {
        self.cochain_group(z.degree + 1).is_zero_vec(&self.complex.apply_d(z.degree, &z.values))
    }

    pub fn is_zero(&self, z: &SiteCochain) -> bool {
        self.cochain_group(z.degree).is_zero_vec(&z.values)
    }

    pub fn equal(&self, a: &SiteCochain, b: &SiteCochain) -> bool {
        a.degree == b.degree && self.cochain_group(a.degree).equal_vecs(&a.values, &b.values)
    }

    pub fn add(&self, a: &SiteCochain, b: &SiteCochain) -> SiteCochain {
        let v: Vec<Int> = a.values.iter().zip(&b.values).map(|(x, y)| x + y).collect();
        SiteCochain { degree: a.degree, values: self.cochain_group(a.degree).reduce(&v) }
    }

    pub fn sub(&self, a: &SiteCochain, b: &SiteCochain) -> SiteCochain {
        let v: Vec<Int> = a.values.iter().zip(&b.values).map(|(x, y)| x - y).collect();
        SiteCochain { degree: a.degree, values: self.cochain_group(a.degree).reduce(&v) }
    }

    pub fn neg(&self, a: &SiteCochain) -> SiteCochain {
        let v: Vec<Int> = a.values.iter().map(|x| -x).collect();
        SiteCochain { degree: a.degree, values: self.cochain_group(a.degree).reduce(&v) }
    }

    pub fn cohomology(&self, n: usize) -> Arc<CohomologyGroup> {
        self.complex.cohomology(n)
    }

    pub fn class_of(&self, z: &SiteCochain) -> Result<Vec<Int>, ChainError> {
        self.complex.cohomology(z.degree).class_of(&z.values)
    }

    pub fn rep_of(&self, n: usize, v: &[Int]) -> SiteCochain {
        SiteCochain { degree: n, values: self.complex.cohomology(n).rep_of(v) }
    }

    /// A cochain `w` with `d w = z`, or `None`.
    pub fn is_coboundary(&self, z: &SiteCochain) -> Result<Option<SiteCochain>, ChainError> {
        if z.degree == 0 {
            return Ok(self.cochain_group(0).is_zero_vec(&z.values).then(|| SiteCochain { degree: 0, values: vec![] }));
        }
        let w = self.complex.is_coboundary(z.degree, &z.values)?;
        Ok(w.map(|values| SiteCochain { degree: z.degree - 1, values }))
    }

    /// `C^q` as a module over the sheaf's group, acting pointwise.
    pub fn cochain_module(&self, q: usize) -> &GroupModule {
        self.modules[q].get_or_init(|| {
            let site = self.sheaf.site();
            let group = self.sheaf.group();
            let g0 = self.cochain_group(q);
            let acts = (0..group.order())
                .map(|g| {
                    let mats: Vec<&IntMatrix> =
                        site.chains(q).iter().map(|c| self.sheaf.action(g, *c.last().unwrap()).matrix()).collect();
                    GroupHom::new_unchecked(&g0, &g0, IntMatrix::block_diag(&mats))
                })
                .collect();
            GroupModule::new_unchecked(group, &g0, acts)
        })
    }

    /// `ρ_g` applied pointwise.
    pub fn twist(&self, g: usize, z: &SiteCochain) -> SiteCochain {
        let m = self.cochain_module(z.degree);
        SiteCochain { degree: z.degree, values: self.cochain_group(z.degree).reduce(&m.act(g, &z.values)) }
    }

    /// The action of `g` on `H^n`.
    pub fn twist_on_cohomology(&self, g: usize, n: usize) -> GroupHom {
        let h = self.cohomology(n);
        let cols: Vec<Vec<Int>> = h
            .generator_reps()
            .into_iter()
            .map(|rep| {
                let t = self.twist(g, &SiteCochain { degree: n, values: rep });
                h.class_of(&t.values).expect("twist preserves cocycles")
            })
            .collect();
        GroupHom::new(h.group(), h.group(), IntMatrix::from_columns(h.group().ngens(), &cols)).expect("twist descends to classes")
    }

    /// `H^n` as a module over the group via twisting.
    pub fn cohomology_module(&self, n: usize) -> GroupModule {
        let group = self.sheaf.group();
        let acts = (0..group.order()).map(|g| self.twist_on_cohomology(g, n)).collect();
        GroupModule::new_unchecked(group, self.cohomology(n).group(), acts)
    }

    /// Global sections in degree 0 are the sections of the sheaf; this reads a
    /// 0-cocycle at point `x`.
    pub fn value_at_point<'a>(&self, z: &'a SiteCochain, x: usize) -> &'a [Int] {
        &z.values[self.slot(0, x)]
    }
}

/// The cochain map `C(X, A) -> C(X, B)` induced by a sheaf morphism.
pub fn push_cochain(f: &SheafMorphism, src: &SiteComplex, dst: &SiteComplex, z: &SiteCochain) -> SiteCochain {
    let site = src.sheaf().site();
    let mut out = dst.zero(z.degree);
    for (i, c) in site.chains(z.degree).iter().enumerate() {
        let x = *c.last().unwrap();
        let v = f.maps[x].apply(&z.values[src.slot(z.degree, i)]);
        let r = dst.slot(z.degree, i);
        out.values[r].clone_from_slice(&dst.sheaf().stalk(x).reduce(&v));
    }
    out
}

/// The induced map `H^n(X, A) -> H^n(X, B)`.
pub fn induced_on_cohomology(f: &SheafMorphism, src: &SiteComplex, dst: &SiteComplex, n: usize) -> GroupHom {
    let hs = src.cohomology(n);
    let ht = dst.cohomology(n);
    let cols: Vec<Vec<Int>> = hs
        .generator_reps()
        .into_iter()
        .map(|rep| {
            let img = push_cochain(f, src, dst, &SiteCochain { degree: n, values: rep });
            ht.class_of(&img.values).expect("sheaf morphisms preserve cocycles")
        })
        .collect();
    GroupHom::new(hs.group(), ht.group(), IntMatrix::from_columns(ht.group().ngens(), &cols)).expect("induced map on classes")
}

/// The same complex over weakly increasing chains, up to degree `top`.
pub fn unnormalized_site_complex(sheaf: &EquivariantSheaf, top: usize) -> CochainComplex {
    let site = sheaf.site();
    let chains: Vec<Vec<Vec<usize>>> = (0..=top).map(|q| site.weak_chains(q)).collect();
    let (groups, offsets) = chain_groups(sheaf, &chains);
    let mut diffs = Vec::new();
    for q in 0..top {
        let idx: std::collections::HashMap<&[usize], usize> =
            chains[q].iter().enumerate().map(|(i, c)| (c.as_slice(), i)).collect();
        let m = differential_matrix(sheaf, &chains[q + 1], &offsets[q], &offsets[q + 1], |c| idx[c]);
        diffs.push(GroupHom::new_unchecked(&groups[q], &groups[q + 1], m));
    }
    CochainComplex::new(groups, diffs).expect("weak chain complex squares to zero")
}

pub fn site_complex(sheaf: &EquivariantSheaf) -> SiteComplex {
    SiteComplex::new(sheaf)
}
