//! Bounded cochain complexes of finitely generated abelian groups, their
//! cohomology with explicit class/representative maps, and double complexes.

use crate::abgroup::{
    hom_cokernel_with_section, hom_kernel, FgAbelianGroup, GroupHom, Int, IntMatrix,
};
use std::sync::{Arc, OnceLock};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChainError {
    #[error("d∘d is nonzero starting in degree {degree}")]
    NotComplex { degree: usize },
    #[error("differential in degree {degree} does not match the adjacent groups")]
    Shape { degree: usize },
    #[error("cochain in degree {degree} is not a cocycle; its coboundary is {image:?}")]
    NotCocycle { degree: usize, image: Vec<Int> },
    #[error("horizontal and vertical differentials do not commute at ({p},{q})")]
    NotCommuting { p: usize, q: usize },
    #[error("vector of length {found} given in degree {degree}, expected {expected}")]
    Length { degree: usize, expected: usize, found: usize },
}

/// `C^0 -> C^1 -> ... -> C^N`, with `C^{-1} = C^{N+1} = 0`.
pub struct CochainComplex {
    groups: Vec<FgAbelianGroup>,
    diffs: Vec<GroupHom>,
    cache: Vec<OnceLock<Arc<CohomologyGroup>>>,
}

impl std::fmt::Debug for CochainComplex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let dims: Vec<usize> = self.groups.iter().map(|g| g.ngens()).collect();
        write!(f, "CochainComplex(dims {dims:?})")
    }
}

impl CochainComplex {
    /// `diffs[n]` is `d^n : C^n -> C^{n+1}`; exactly `groups.len() - 1` of them.
    pub fn new(groups: Vec<FgAbelianGroup>, diffs: Vec<GroupHom>) -> Result<CochainComplex, ChainError> {
        assert!(!groups.is_empty(), "a complex needs at least C^0");
        if diffs.len() + 1 != groups.len() {
            return Err(ChainError::Shape { degree: diffs.len() });
        }
        for (n, d) in diffs.iter().enumerate() {
            if d.source().ngens() != groups[n].ngens() || d.target().ngens() != groups[n + 1].ngens() {
                return Err(ChainError::Shape { degree: n });
            }
        }
        for n in 0..diffs.len().saturating_sub(1) {
            if !diffs[n + 1].compose(&diffs[n]).is_zero() {
                return Err(ChainError::NotComplex { degree: n });
            }
        }
        let cache = (0..groups.len()).map(|_| OnceLock::new()).collect();
        Ok(CochainComplex { groups, diffs, cache })
    }

    /// Top degree `N`.
    pub fn top(&self) -> usize {
        self.groups.len() - 1
    }

    pub fn group(&self, n: usize) -> FgAbelianGroup {
        self.groups.get(n).cloned().unwrap_or_else(FgAbelianGroup::zero)
    }

    pub fn groups(&self) -> &[FgAbelianGroup] {
        &self.groups
    }

    /// `d^n`, including the zero maps at the ends.
    pub fn differential(&self, n: usize) -> GroupHom {
        if n < self.diffs.len() {
            self.diffs[n].clone()
        } else {
            GroupHom::zero(&self.group(n), &self.group(n + 1))
        }
    }

    fn incoming(&self, n: usize) -> GroupHom {
        if n == 0 {
            GroupHom::zero(&FgAbelianGroup::zero(), &self.group(0))
        } else {
            self.differential(n - 1)
        }
    }

    pub fn apply_d(&self, n: usize, x: &[Int]) -> Vec<Int> {
        self.differential(n).apply(x)
    }

    pub fn cohomology(&self, n: usize) -> Arc<CohomologyGroup> {
        if n >= self.cache.len() {
            return Arc::new(CohomologyGroup::compute(n, &self.incoming(n), &self.differential(n)));
        }
        self.cache[n]
            .get_or_init(|| Arc::new(CohomologyGroup::compute(n, &self.incoming(n), &self.differential(n))))
            .clone()
    }

    /// Some `w` with `d^{n-1} w = z`, or `None` when `z` is not a coboundary.
    pub fn is_coboundary(&self, n: usize, z: &[Int]) -> Result<Option<Vec<Int>>, ChainError> {
        self.check_len(n, z)?;
        let dz = self.differential(n).apply(z);
        if !dz.iter().all(|v| v.is_zero()) {
            return Err(ChainError::NotCocycle { degree: n, image: dz });
        }
        Ok(self.incoming(n).preimage(z).ok())
    }

    fn check_len(&self, n: usize, z: &[Int]) -> Result<(), ChainError> {
        let expected = self.group(n).ngens();
        if z.len() != expected {
            return Err(ChainError::Length { degree: n, expected, found: z.len() });
        }
        Ok(())
    }
}

/// `H^n = ker d^n / im d^{n-1}` with coordinate maps in both directions.
pub struct CohomologyGroup {
    degree: usize,
    group: FgAbelianGroup,
    cochains: FgAbelianGroup,
    diff: GroupHom,
    incl: GroupHom,
    proj: GroupHom,
    section: IntMatrix,
}

impl std::fmt::Debug for CohomologyGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "H^{} = {}", self.degree, self.group.render())
    }
}

impl CohomologyGroup {
    fn compute(n: usize, incoming: &GroupHom, diff: &GroupHom) -> CohomologyGroup {
        let (k, incl) = hom_kernel(diff);
        let prev = incoming.matrix();
        let mut cols = Vec::with_capacity(prev.cols());
        for j in 0..prev.cols() {
            let c = incl.preimage(&prev.column(j)).expect("coboundaries are cocycles");
            cols.push(c);
        }
        let phi = GroupHom::new(incoming.source(), &k, IntMatrix::from_columns(k.ngens(), &cols))
            .expect("incoming differential lands in the cocycles");
        let (group, proj, section) = hom_cokernel_with_section(&phi);
        CohomologyGroup { degree: n, group, cochains: diff.source().clone(), diff: diff.clone(), incl, proj, section }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn group(&self) -> &FgAbelianGroup {
        &self.group
    }

    pub fn render(&self) -> String {
        self.group.render()
    }

    /// Inclusion of the cocycle group into the cochains.
    pub fn cocycles(&self) -> &GroupHom {
        &self.incl
    }

    pub fn is_cocycle(&self, z: &[Int]) -> bool {
        z.len() == self.cochains.ngens() && self.diff.apply(z).iter().all(|v| v.is_zero())
    }

    /// Coordinates of the class of the cocycle `z`.
    pub fn class_of(&self, z: &[Int]) -> Result<Vec<Int>, ChainError> {
        if z.len() != self.cochains.ngens() {
            return Err(ChainError::Length { degree: self.degree, expected: self.cochains.ngens(), found: z.len() });
        }
        let dz = self.diff.apply(z);
        if !dz.iter().all(|v| v.is_zero()) {
            return Err(ChainError::NotCocycle { degree: self.degree, image: dz });
        }
        let c = self.incl.preimage(z).expect("cocycle lies in the kernel");
        Ok(self.proj.apply(&c))
    }

    /// A cocycle representing the class with coordinates `v`.
    pub fn rep_of(&self, v: &[Int]) -> Vec<Int> {
        assert_eq!(v.len(), self.group.ngens(), "class coordinate length");
        let k = self.section.mul_vec(v);
        self.cochains.reduce(&self.incl.matrix().mul_vec(&k))
    }

    pub fn is_zero_class(&self, v: &[Int]) -> bool {
        self.group.is_zero_vec(v)
    }

    pub fn generator_reps(&self) -> Vec<Vec<Int>> {
        (0..self.group.ngens())
            .map(|i| {
                let mut v = vec![Int::ZERO; self.group.ngens()];
                v[i] = Int::ONE;
                self.rep_of(&v)
            })
            .collect()
    }
}

/// Commuting first-quadrant double complex `K^{p,q}`, `0 <= p <= P`, `0 <= q <= Q`.
pub struct DoubleComplex {
    groups: Vec<Vec<FgAbelianGroup>>,
    dh: Vec<Vec<GroupHom>>,
    dv: Vec<Vec<GroupHom>>,
}

impl DoubleComplex {
    /// `dh[p][q] : K^{p,q} -> K^{p+1,q}` for `p < P`; `dv[p][q] : K^{p,q} -> K^{p,q+1}` for `q < Q`.
    pub fn new(
        groups: Vec<Vec<FgAbelianGroup>>,
        dh: Vec<Vec<GroupHom>>,
        dv: Vec<Vec<GroupHom>>,
    ) -> Result<DoubleComplex, ChainError> {
        let pmax = groups.len() - 1;
        let qmax = groups[0].len() - 1;
        for p in 0..=pmax {
            for q in 0..=qmax {
                if p < pmax {
                    let h = &dh[p][q];
                    if h.source().ngens() != groups[p][q].ngens() || h.target().ngens() != groups[p + 1][q].ngens() {
                        return Err(ChainError::Shape { degree: p + q });
                    }
                    if p + 1 < pmax && !dh[p + 1][q].compose(h).is_zero() {
                        return Err(ChainError::NotComplex { degree: p });
                    }
                }
                if q < qmax {
                    let v = &dv[p][q];
                    if v.source().ngens() != groups[p][q].ngens() || v.target().ngens() != groups[p][q + 1].ngens() {
                        return Err(ChainError::Shape { degree: p + q });
                    }
                    if q + 1 < qmax && !dv[p][q + 1].compose(v).is_zero() {
                        return Err(ChainError::NotComplex { degree: q });
                    }
                }
                if p < pmax && q < qmax {
                    let a = dv[p + 1][q].compose(&dh[p][q]);
                    let b = dh[p][q + 1].compose(&dv[p][q]);
                    if !a.equals(&b) {
                        return Err(ChainError::NotCommuting { p, q });
                    }
                }
            }
        }
        Ok(DoubleComplex { groups, dh, dv })
    }

    pub fn p_max(&self) -> usize {
        self.groups.len() - 1
    }

    pub fn q_max(&self) -> usize {
        self.groups[0].len() - 1
    }

    pub fn group(&self, p: usize, q: usize) -> &FgAbelianGroup {
        &self.groups[p][q]
    }

    pub fn dh(&self, p: usize, q: usize) -> &GroupHom {
        &self.dh[p][q]
    }

    pub fn dv(&self, p: usize, q: usize) -> &GroupHom {
        &self.dv[p][q]
    }

    /// Blocks `(p, q)` of total degree `n`, in increasing `p`.
    pub fn blocks(&self, n: usize) -> Vec<(usize, usize)> {
        (0..=self.p_max()).filter(|&p| p <= n && n - p <= self.q_max()).map(|p| (p, n - p)).collect()
    }

    /// Offset of block `(p, q)` inside the total cochain group of degree `p + q`.
    pub fn block_offset(&self, p: usize, q: usize) -> usize {
        self.blocks(p + q).iter().take_while(|&&(pp, _)| pp < p).map(|&(pp, qq)| self.groups[pp][qq].ngens()).sum()
    }

    /// Vertical complex in column `p`.
    pub fn column(&self, p: usize) -> CochainComplex {
        let groups = self.groups[p].clone();
        let diffs = self.dv[p].clone();
        CochainComplex::new(groups, diffs).expect("column of a valid double complex")
    }

    /// Horizontal complex in row `q`.
    pub fn row(&self, q: usize) -> CochainComplex {
        let groups = (0..=self.p_max()).map(|p| self.groups[p][q].clone()).collect();
        let diffs = (0..self.p_max()).map(|p| self.dh[p][q].clone()).collect();
        CochainComplex::new(groups, diffs).expect("row of a valid double complex")
    }

    /// Total complex with differential `d_h + (-1)^p d_v` on block `(p, q)`.
    pub fn total_complex(&self) -> CochainComplex {
        let top = self.p_max() + self.q_max();
        let mut groups = Vec::with_capacity(top + 1);
        for n in 0..=top {
            let parts: Vec<&FgAbelianGroup> = self.blocks(n).iter().map(|&(p, q)| &self.groups[p][q]).collect();
            groups.push(FgAbelianGroup::direct_sum(&parts));
        }
        let mut diffs = Vec::with_capacity(top);
        for n in 0..top {
            let mut m = IntMatrix::zeros(groups[n + 1].ngens(), groups[n].ngens());
            for (p, q) in self.blocks(n) {
                let c0 = self.block_offset(p, q);
                if p < self.p_max() {
                    let r0 = self.block_offset(p + 1, q);
                    m.add_block(r0, c0, self.dh[p][q].matrix());
                }
                if q < self.q_max() {
                    let r0 = self.block_offset(p, q + 1);
                    let sign = if p % 2 == 0 { Int::ONE } else { Int::from(-1) };
                    m.add_scaled_block(r0, c0, self.dv[p][q].matrix(), &sign);
                }
            }
            diffs.push(GroupHom::new(&groups[n], &groups[n + 1], m).expect("total differential respects relations"));
        }
        CochainComplex::new(groups, diffs).expect("total complex of a commuting double complex")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z() -> FgAbelianGroup {
        FgAbelianGroup::free(1)
    }

    fn mul(k: i64) -> GroupHom {
        GroupHom::new(&z(), &z(), IntMatrix::from_rows(&[vec![k]], 1)).unwrap()
    }

    #[test]
    fn times_two_complex() {
        let cx = CochainComplex::new(vec![z(), z()], vec![mul(2)]).unwrap();
        assert_eq!(cx.cohomology(0).render(), "0");
        assert_eq!(cx.cohomology(1).render(), "Z/2");
        let h1 = cx.cohomology(1);
        let g = h1.rep_of(&[Int::ONE]);
        assert!(cx.is_coboundary(1, &g).unwrap().is_none());
        assert_eq!(h1.class_of(&h1.rep_of(&[Int::ONE])).unwrap(), vec![Int::ONE]);
    }

    #[test]
    fn zero_and_acyclic() {
        let cx = CochainComplex::new(vec![z(), z()], vec![mul(0)]).unwrap();
        assert_eq!(cx.cohomology(0).render(), "Z");
        assert_eq!(cx.cohomology(1).render(), "Z");
        let cx = CochainComplex::new(vec![z(), z()], vec![mul(1)]).unwrap();
        assert!(cx.cohomology(0).group().is_trivial());
        assert!(cx.cohomology(1).group().is_trivial());
        assert!(cx.cohomology(5).group().is_trivial());
    }

    #[test]
    fn rejects_non_complex() {
        let err = CochainComplex::new(vec![z(), z(), z()], vec![mul(1), mul(1)]).unwrap_err();
        assert_eq!(err, ChainError::NotComplex { degree: 0 });
    }

    #[test]
    fn non_cocycle_rejected() {
        let cx = CochainComplex::new(vec![z(), z()], vec![mul(2)]).unwrap();
        match cx.is_coboundary(0, &[Int::ONE]) {
            Err(ChainError::NotCocycle { degree: 0, image }) => assert_eq!(image, vec![Int::from(2)]),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn two_by_two_identity_double_complex() {
        let id = || GroupHom::identity(&z());
        let dc = DoubleComplex::new(vec![vec![z(), z()], vec![z(), z()]], vec![vec![id(), id()]], vec![vec![id()], vec![id()]])
            .unwrap();
        let t = dc.total_complex();
        for n in 0..=2 {
            assert!(t.cohomology(n).group().is_trivial(), "degree {n}");
        }
    }
}
