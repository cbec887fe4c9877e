//! Cohomology of finite groups via the unnormalized bar complex.

use crate::abgroup::{hom_kernel, AbGroupError, FgAbelianGroup, GroupHom, Int, IntMatrix};
use crate::chaincx::{ChainError, CochainComplex, CohomologyGroup};
use std::collections::HashMap;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GcohError {
    #[error("multiplication table must be {n}x{n} with entries below {n}")]
    TableShape { n: usize },
    #[error("element 0 is not a two-sided identity")]
    IdentityNotFirst,
    #[error("associativity fails for ({a}, {b}, {c})")]
    NotAssociative { a: usize, b: usize, c: usize },
    #[error("element {a} has no inverse")]
    NoInverse { a: usize },
    #[error("action matrix for element {g}: {source}")]
    ActionMatrix { g: usize, source: AbGroupError },
    #[error("identity does not act as the identity")]
    IdentityAction,
    #[error("action is not multiplicative at ({g}, {h})")]
    NotMultiplicative { g: usize, h: usize },
    #[error("{elements:?} is not a subgroup")]
    NotSubgroup { elements: Vec<usize> },
    #[error("subgroup is not normal: {g} * {n} * {g}^-1 leaves it")]
    NotNormal { g: usize, n: usize },
    #[error("module action is nontrivial at element {g}")]
    NontrivialAction { g: usize },
    #[error("cochain has {found} coordinates, expected {expected}")]
    CochainLength { expected: usize, found: usize },
    #[error(transparent)]
    Chain(#[from] ChainError),
}

/// A finite group given by its multiplication table; element 0 is the identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    names: Vec<String>,
    table: Vec<Vec<usize>>,
    inv: Vec<usize>,
}

impl FiniteGroup {
    pub fn new(names: Vec<String>, table: Vec<Vec<usize>>) -> Result<FiniteGroup, GcohError> {
        let n = names.len();
        if n == 0 || table.len() != n || table.iter().any(|r| r.len() != n || r.iter().any(|&x| x >= n)) {
            return Err(GcohError::TableShape { n });
        }
        for a in 0..n {
            if table[0][a] != a || table[a][0] != a {
                return Err(GcohError::IdentityNotFirst);
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(GcohError::NotAssociative { a, b, c });
                    }
                }
            }
        }
        let mut inv = vec![0; n];
        for a in 0..n {
            match (0..n).find(|&b| table[a][b] == 0 && table[b][a] == 0) {
                Some(b) => inv[a] = b,
                None => return Err(GcohError::NoInverse { a }),
            }
        }
        Ok(FiniteGroup { names, table, inv })
    }

    pub fn trivial() -> FiniteGroup {
        FiniteGroup::cyclic(1)
    }

    /// `Z/n` with elements `0..n` named by their residues.
    pub fn cyclic(n: usize) -> FiniteGroup {
        let names = (0..n).map(|i| i.to_string()).collect();
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        FiniteGroup::new(names, table).expect("cyclic table is a group")
    }

    pub fn product(a: &FiniteGroup, b: &FiniteGroup) -> FiniteGroup {
        let (na, nb) = (a.order(), b.order());
        let names = (0..na * nb).map(|k| format!("({},{})", a.names[k / nb], b.names[k % nb])).collect();
        let table = (0..na * nb)
            .map(|x| (0..na * nb).map(|y| a.mul(x / nb, y / nb) * nb + b.mul(x % nb, y % nb)).collect())
            .collect();
        FiniteGroup::new(names, table).expect("product of groups")
    }

    /// Symmetric group on three letters.
    pub fn s3() -> FiniteGroup {
        let perms: Vec<[usize; 3]> = vec![[0, 1, 2], [1, 2, 0], [2, 0, 1], [1, 0, 2], [0, 2, 1], [2, 1, 0]];
        let idx = |p: [usize; 3]| perms.iter().position(|q| *q == p).unwrap();
        let table = perms
            .iter()
            .map(|a| perms.iter().map(|b| idx([a[b[0]], a[b[1]], a[b[2]]])).collect())
            .collect();
        let names = perms.iter().map(|p| format!("{}{}{}", p[0], p[1], p[2])).collect();
        FiniteGroup::new(names, table).unwrap()
    }

    pub fn order(&self) -> usize {
        self.names.len()
    }

    pub fn identity(&self) -> usize {
        0
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    pub fn name(&self, a: usize) -> &str {
        &self.names[a]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order()).all(|a| (0..self.order()).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// Checks that `sub` is a normal subgroup, returning a conjugation
    /// witness `(g, n)` with `g n g^-1` outside `sub` otherwise.
    pub fn check_normal(&self, sub: &[usize]) -> Result<(), GcohError> {
        let inside = |x: usize| sub.contains(&x);
        if !inside(0) || sub.iter().any(|&a| sub.iter().any(|&b| !inside(self.mul(a, b)))) {
            return Err(GcohError::NotSubgroup { elements: sub.to_vec() });
        }
        for g in 0..self.order() {
            for &n in sub {
                if !inside(self.mul(self.mul(g, n), self.inv(g))) {
                    return Err(GcohError::NotNormal { g, n });
                }
            }
        }
        Ok(())
    }

    /// `G / N` with the projection `G -> G/N`; cosets are ordered by their
    /// smallest element.
    pub fn quotient(&self, normal: &[usize]) -> Result<(FiniteGroup, Vec<usize>), GcohError> {
        self.check_normal(normal)?;
        let mut proj = vec![usize::MAX; self.order()];
        let mut reps = Vec::new();
        for g in 0..self.order() {
            if proj[g] != usize::MAX {
                continue;
            }
            let k = reps.len();
            reps.push(g);
            for &n in normal {
                proj[self.mul(g, n)] = k;
            }
        }
        let names = reps.iter().map(|&r| format!("{}N", self.names[r])).collect();
        let table = reps.iter().map(|&a| reps.iter().map(|&b| proj[self.mul(a, b)]).collect()).collect();
        Ok((FiniteGroup::new(names, table)?, proj))
    }

    /// Number of `n`-tuples, `|G|^n`.
    pub fn tuple_count(&self, n: usize) -> usize {
        self.order().pow(n as u32)
    }

    /// Decodes a tuple index (first entry most significant).
    pub fn tuple(&self, n: usize, mut idx: usize) -> Vec<usize> {
        let k = self.order();
        let mut t = vec![0; n];
        for i in (0..n).rev() {
            t[i] = idx % k;
            idx /= k;
        }
        t
    }

    pub fn tuple_index(&self, t: &[usize]) -> usize {
        t.iter().fold(0, |acc, &g| acc * self.order() + g)
    }
}

/// A finitely generated abelian group with a left action `ρ_g ρ_h = ρ_{gh}`.
#[derive(Clone, Debug)]
pub struct GroupModule {
    group: FiniteGroup,
    underlying: FgAbelianGroup,
    action: Vec<GroupHom>,
}

impl GroupModule {
    pub fn new(group: &FiniteGroup, underlying: &FgAbelianGroup, matrices: Vec<IntMatrix>) -> Result<GroupModule, GcohError> {
        if matrices.len() != group.order() {
            return Err(GcohError::TableShape { n: group.order() });
        }
        let mut action = Vec::with_capacity(matrices.len());
        for (g, m) in matrices.into_iter().enumerate() {
            action.push(GroupHom::new(underlying, underlying, m).map_err(|source| GcohError::ActionMatrix { g, source })?);
        }
        if !action[0].equals(&GroupHom::identity(underlying)) {
            return Err(GcohError::IdentityAction);
        }
        for g in 0..group.order() {
            for h in 0..group.order() {
                if !action[g].compose(&action[h]).equals(&action[group.mul(g, h)]) {
                    return Err(GcohError::NotMultiplicative { g, h });
                }
            }
        }
        Ok(GroupModule { group: group.clone(), underlying: underlying.clone(), action })
    }

    pub(crate) fn new_unchecked(group: &FiniteGroup, underlying: &FgAbelianGroup, action: Vec<GroupHom>) -> GroupModule {
        GroupModule { group: group.clone(), underlying: underlying.clone(), action }
    }

    pub fn trivial(group: &FiniteGroup, underlying: &FgAbelianGroup) -> GroupModule {
        let action = (0..group.order()).map(|_| GroupHom::identity(underlying)).collect();
        GroupModule::new_unchecked(group, underlying, action)
    }

    /// `∏_{h ∈ G} M0` with `(ρ_g φ)_h = φ_{g^{-1} h}`.
    pub fn permutation(group: &FiniteGroup, m0: &FgAbelianGroup) -> GroupModule {
        let n = group.order();
        let k = m0.ngens();
        let underlying = m0.power(n);
        let action = (0..n)
            .map(|g| {
                let mut m = IntMatrix::zeros(n * k, n * k);
                for h in 0..n {
                    let src = group.mul(group.inv(g), h);
                    for i in 0..k {
                        m.set(h * k + i, src * k + i, Int::ONE);
                    }
                }
                GroupHom::new_unchecked(&underlying, &underlying, m)
            })
            .collect();
        GroupModule::new_unchecked(group, &underlying, action)
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn underlying(&self) -> &FgAbelianGroup {
        &self.underlying
    }

    pub fn action(&self, g: usize) -> &GroupHom {
        &self.action[g]
    }

    pub fn act(&self, g: usize, x: &[Int]) -> Vec<Int> {
        self.action[g].apply(x)
    }

    pub fn is_trivial_action(&self) -> Result<(), GcohError> {
        let id = GroupHom::identity(&self.underlying);
        for g in 0..self.group.order() {
            if !self.action[g].equals(&id) {
                return Err(GcohError::NontrivialAction { g });
            }
        }
        Ok(())
    }

    /// Fixed subgroup for the elements in `sub`, with its inclusion.
    pub fn fixed_subgroup(&self, sub: &[usize]) -> (FgAbelianGroup, GroupHom) {
        let m = &self.underlying;
        let k = m.ngens();
        let target = m.power(sub.len());
        let mut mat = IntMatrix::zeros(k * sub.len(), k);
        for (i, &g) in sub.iter().enumerate() {
            let a = self.action[g].matrix().sub(&IntMatrix::identity(k));
            mat.set_block(i * k, 0, &a);
        }
        hom_kernel(&GroupHom::new_unchecked(m, &target, mat))
    }

    pub fn invariants(&self) -> (FgAbelianGroup, GroupHom) {
        let all: Vec<usize> = (0..self.group.order()).collect();
        self.fixed_subgroup(&all)
    }

    /// Restricts an action that preserves the image of `incl` to the subgroup.
    pub fn restrict_to(&self, group: &FiniteGroup, elems: &[usize], incl: &GroupHom) -> GroupModule {
        let sub = incl.source();
        let action = elems
            .iter()
            .map(|&g| {
                let cols: Vec<Vec<Int>> = (0..sub.ngens())
                    .map(|j| {
                        let img = self.action[g].matrix().mul_vec(&incl.matrix().column(j));
                        incl.preimage(&img).expect("subgroup is stable under the action")
                    })
                    .collect();
                GroupHom::new_unchecked(sub, sub, IntMatrix::from_columns(sub.ngens(), &cols))
            })
            .collect();
        GroupModule::new_unchecked(group, sub, action)
    }

    /// The direct sum of modules over the same group.
    pub fn direct_sum(parts: &[&GroupModule]) -> GroupModule {
        let group = parts[0].group.clone();
        let gs: Vec<&FgAbelianGroup> = parts.iter().map(|p| &p.underlying).collect();
        let underlying = FgAbelianGroup::direct_sum(&gs);
        let action = (0..group.order())
            .map(|g| {
                let ms: Vec<&IntMatrix> = parts.iter().map(|p| p.action[g].matrix()).collect();
                GroupHom::new_unchecked(&underlying, &underlying, IntMatrix::block_diag(&ms))
            })
            .collect();
        GroupModule::new_unchecked(&group, &underlying, action)
    }
}

/// A group cochain: a total table over `G^n` of module elements, stored as
/// the concatenation of coordinate blocks in tuple order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupCochain {
    pub degree: usize,
    pub values: Vec<Int>,
}

impl GroupCochain {
    pub fn zero(module: &GroupModule, degree: usize) -> GroupCochain {
        let len = module.group.tuple_count(degree) * module.underlying.ngens();
        GroupCochain { degree, values: vec![Int::ZERO; len] }
    }

    pub fn value(&self, module: &GroupModule, tuple: &[usize]) -> &[Int] {
        let k = module.underlying.ngens();
        let i = module.group.tuple_index(tuple);
        &self.values[i * k..(i + 1) * k]
    }

    pub fn set(&mut self, module: &GroupModule, tuple: &[usize], v: &[Int]) {
        let k = module.underlying.ngens();
        let i = module.group.tuple_index(tuple);
        self.values[i * k..(i + 1) * k].clone_from_slice(v);
    }

    pub fn is_zero(&self, module: &GroupModule) -> bool {
        let k = module.underlying.ngens();
        self.values.chunks(k.max(1)).all(|c| k == 0 || module.underlying.is_zero_vec(c))
    }
}

/// `(dc)(g1..g_{n+1}) = g1·c(g2..) + Σ_{i=1}^{n} (-1)^i c(..g_i g_{i+1}..) + (-1)^{n+1} c(g1..g_n)`.
pub fn bar_differential(module: &GroupModule, c: &GroupCochain) -> GroupCochain {
    let g = &module.group;
    let n = c.degree;
    let k = module.underlying.ngens();
    let mut out = GroupCochain::zero(module, n + 1);
    for o in 0..g.tuple_count(n + 1) {
        let t = g.tuple(n + 1, o);
        let mut acc = module.action[t[0]].matrix().mul_vec(c.value(module, &t[1..]));
        for i in 1..=n {
            let mut s: Vec<usize> = Vec::with_capacity(n);
            s.extend_from_slice(&t[..i - 1]);
            s.push(g.mul(t[i - 1], t[i]));
            s.extend_from_slice(&t[i + 1..]);
            let v = c.value(module, &s);
            for (a, b) in acc.iter_mut().zip(v) {
                if i % 2 == 1 {
                    *a -= b;
                } else {
                    *a += b;
                }
            }
        }
        let v = c.value(module, &t[..n]);
        for (a, b) in acc.iter_mut().zip(v) {
            if (n + 1) % 2 == 1 {
                *a -= b;
            } else {
                *a += b;
            }
        }
        let reduced = module.underlying.reduce(&acc);
        out.values[o * k..(o + 1) * k].clone_from_slice(&reduced);
    }
    out
}

fn bar_matrix(module: &GroupModule, n: usize) -> IntMatrix {
    let g = &module.group;
    let k = module.underlying.ngens();
    let mut m = IntMatrix::zeros(g.tuple_count(n + 1) * k, g.tuple_count(n) * k);
    let one = Int::ONE;
    let minus = Int::from(-1);
    for o in 0..g.tuple_count(n + 1) {
        let t = g.tuple(n + 1, o);
        let r0 = o * k;
        m.add_block(r0, g.tuple_index(&t[1..]) * k, module.action[t[0]].matrix());
        let mut s = Vec::with_capacity(n);
        for i in 1..=n {
            s.clear();
            s.extend_from_slice(&t[..i - 1]);
            s.push(g.mul(t[i - 1], t[i]));
            s.extend_from_slice(&t[i + 1..]);
            let c0 = g.tuple_index(&s) * k;
            let sign = if i % 2 == 1 { &minus } else { &one };
            for j in 0..k {
                *m.get_mut(r0 + j, c0 + j) += sign;
            }
        }
        let c0 = g.tuple_index(&t[..n]) * k;
        let sign = if (n + 1) % 2 == 1 { &minus } else { &one };
        for j in 0..k {
            *m.get_mut(r0 + j, c0 + j) += sign;
        }
    }
    m
}

/// The bar cochain complex `C^0(G, M) -> ... -> C^top(G, M)`.
pub struct BarComplex {
    module: GroupModule,
    complex: CochainComplex,
}

impl BarComplex {
    pub fn new(module: &GroupModule, top: usize) -> BarComplex {
        let g = &module.group;
        let groups: Vec<FgAbelianGroup> = (0..=top).map(|n| module.underlying.power(g.tuple_count(n))).collect();
        let diffs = (0..top)
            .map(|n| GroupHom::new_unchecked(&groups[n], &groups[n + 1], bar_matrix(module, n)))
            .collect();
        let complex = CochainComplex::new(groups, diffs).expect("bar complex squares to zero");
        BarComplex { module: module.clone(), complex }
    }

    pub fn module(&self) -> &GroupModule {
        &self.module
    }

    pub fn complex(&self) -> &CochainComplex {
        &self.complex
    }

    /// `H^n(G, M)`; needs `n < top` to see the outgoing differential.
    pub fn cohomology(&self, n: usize) -> Arc<CohomologyGroup> {
        assert!(n < self.complex.top(), "bar complex built too short for degree {n}");
        self.complex.cohomology(n)
    }

    pub fn class_of(&self, c: &GroupCochain) -> Result<Vec<Int>, GcohError> {
        Ok(self.cohomology(c.degree).class_of(&c.values)?)
    }

    pub fn rep_of(&self, n: usize, v: &[Int]) -> GroupCochain {
        GroupCochain { degree: n, values: self.cohomology(n).rep_of(v) }
    }

    pub fn is_coboundary(&self, c: &GroupCochain) -> Result<Option<GroupCochain>, GcohError> {
        let w = self.complex.is_coboundary(c.degree, &c.values)?;
        Ok(w.map(|values| GroupCochain { degree: c.degree.saturating_sub(1), values }))
    }

    pub fn is_cocycle(&self, c: &GroupCochain) -> bool {
        self.complex.apply_d(c.degree, &c.values).iter().all(|v| v.is_zero())
    }
}

pub fn group_cohomology(module: &GroupModule, n: usize) -> Arc<CohomologyGroup> {
    BarComplex::new(module, n + 1).cohomology(n)
}

/// Inflation `H^n(G/N, M^N) -> H^n(G, M)` as a group homomorphism.
pub struct Inflation {
    pub quotient: FiniteGroup,
    pub projection: Vec<usize>,
    pub fixed: GroupModule,
    pub fixed_incl: GroupHom,
    pub source: BarComplex,
    pub target: BarComplex,
    pub degree: usize,
    pub map: GroupHom,
}

impl Inflation {
    /// Pulls a `G/N`-cochain with values in `M^N` back to a `G`-cochain in `M`.
    pub fn pullback(&self, c: &GroupCochain) -> GroupCochain {
        let g = &self.target.module.group;
        let m = &self.target.module;
        let mut out = GroupCochain::zero(m, c.degree);
        for i in 0..g.tuple_count(c.degree) {
            let t = g.tuple(c.degree, i);
            let q: Vec<usize> = t.iter().map(|&x| self.projection[x]).collect();
            let v = self.fixed_incl.apply(c.value(&self.fixed, &q));
            out.set(m, &t, &v);
        }
        out
    }

    pub fn inflate(&self, class: &[Int]) -> Vec<Int> {
        self.map.apply(class)
    }
}

pub fn inflation(module: &GroupModule, normal: &[usize], n: usize) -> Result<Inflation, GcohError> {
    let g = &module.group;
    let (quotient, projection) = g.quotient(normal)?;
    let (_, fixed_incl) = module.fixed_subgroup(normal);
    let reps: Vec<usize> = (0..quotient.order()).map(|k| projection.iter().position(|&p| p == k).unwrap()).collect();
    let fixed = module.restrict_to(&quotient, &reps, &fixed_incl);
    let source = BarComplex::new(&fixed, n + 1);
    let target = BarComplex::new(module, n + 1);
    let hs = source.cohomology(n);
    let mut inf = Inflation {
        quotient,
        projection,
        fixed,
        fixed_incl,
        source,
        target,
        degree: n,
        map: GroupHom::zero(&FgAbelianGroup::zero(), &FgAbelianGroup::zero()),
    };
    let ht = inf.target.cohomology(n);
    let mut cols = Vec::new();
    for i in 0..hs.group().ngens() {
        let mut v = vec![Int::ZERO; hs.group().ngens()];
        v[i] = Int::ONE;
        let rep = GroupCochain { degree: n, values: hs.rep_of(&v) };
        let pulled = inf.pullback(&rep);
        cols.push(ht.class_of(&pulled.values)?);
    }
    inf.map = GroupHom::new(hs.group(), ht.group(), IntMatrix::from_columns(ht.group().ngens(), &cols))
        .expect("inflation is well defined on classes");
    Ok(inf)
}

/// `H^j(Z/n, M)` for a trivial action, from the periodic resolution
/// `M -(g-1)-> M -(N)-> M -(g-1)-> ...`.
pub fn cyclic_cohomology_oracle(n_order: usize, module: &GroupModule, j: usize) -> Result<FgAbelianGroup, GcohError> {
    module.is_trivial_action()?;
    let m = module.underlying();
    let k = m.ngens();
    let groups: Vec<FgAbelianGroup> = (0..=j + 1).map(|_| m.clone()).collect();
    let diffs = (0..=j)
        .map(|d| {
            let mat = if d % 2 == 0 { IntMatrix::zeros(k, k) } else { IntMatrix::scalar(k, &Int::from(n_order)) };
            GroupHom::new_unchecked(m, m, mat)
        })
        .collect();
    let cx = CochainComplex::new(groups, diffs)?;
    Ok(cx.cohomology(j).group().clone())
}

/// Memo of bar complexes keyed by an opaque name, for repeated use.
#[derive(Default)]
pub struct BarCache {
    map: HashMap<String, Arc<BarComplex>>,
}

impl BarCache {
    pub fn get_or_build(&mut self, key: &str, module: &GroupModule, top: usize) -> Arc<BarComplex> {
        self.map
            .entry(format!("{key}@{top}"))
            .or_insert_with(|| Arc::new(BarComplex::new(module, top)))
            .clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z() -> FgAbelianGroup {
        FgAbelianGroup::free(1)
    }

    #[test]
    fn degree_one_differential_matches_direct_evaluation() {
        let g = FiniteGroup::cyclic(2);
        let m = GroupModule::trivial(&g, &z());
        let a = GroupCochain { degree: 1, values: vec![Int::ZERO, Int::ONE] };
        let da = bar_differential(&m, &a);
        assert_eq!(da.value(&m, &[1, 1]), &[Int::from(2)]);
        let c = GroupCochain { degree: 1, values: vec![Int::from(5), Int::from(5)] };
        let dc = bar_differential(&m, &c);
        assert!(dc.values.iter().all(|v| *v == Int::from(5)));
    }

    #[test]
    fn small_cohomology() {
        let g = FiniteGroup::cyclic(2);
        let m = GroupModule::trivial(&g, &z());
        assert_eq!(group_cohomology(&m, 2).render(), "Z/2");
        assert_eq!(group_cohomology(&m, 1).render(), "0");
        let swap = GroupModule::permutation(&g, &z());
        assert_eq!(group_cohomology(&swap, 1).render(), "0");
        let t = FiniteGroup::trivial();
        let m = GroupModule::trivial(&t, &FgAbelianGroup::from_invariants(1, &[3]));
        assert_eq!(group_cohomology(&m, 0).render(), "Z + Z/3");
        assert_eq!(group_cohomology(&m, 1).render(), "0");
    }

    #[test]
    fn oracle_examples() {
        let g = FiniteGroup::cyclic(2);
        assert_eq!(cyclic_cohomology_oracle(2, &GroupModule::trivial(&g, &z()), 3).unwrap().render(), "0");
        assert_eq!(cyclic_cohomology_oracle(2, &GroupModule::trivial(&g, &z()), 2).unwrap().render(), "Z/2");
        let g3 = FiniteGroup::cyclic(3);
        let m = GroupModule::trivial(&g3, &FgAbelianGroup::cyclic(6));
        assert_eq!(cyclic_cohomology_oracle(3, &m, 1).unwrap().render(), "Z/3");
        let swap = GroupModule::permutation(&g, &z());
        assert!(matches!(cyclic_cohomology_oracle(2, &swap, 1), Err(GcohError::NontrivialAction { .. })));
    }

    #[test]
    fn normality_witness() {
        let s3 = FiniteGroup::s3();
        match s3.check_normal(&[0, 3]) {
            Err(GcohError::NotNormal { g, n }) => {
                let c = s3.mul(s3.mul(g, n), s3.inv(g));
                assert!(c != 0 && c != 3);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(s3.check_normal(&[0, 1, 2]).is_ok());
    }
}
