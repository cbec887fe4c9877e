use super::int::Int;
use super::matrix::IntMatrix;
use super::smith::{congruence_kernel, Smith, Track};
use std::fmt;
use std::sync::{Arc, OnceLock};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AbGroupError {
    #[error("relations matrix has {found} rows but the group has {expected} generators")]
    RelationShape { expected: usize, found: usize },
    #[error("hom matrix is {rows}x{cols}, expected {expected_rows}x{expected_cols}")]
    HomShape { rows: usize, cols: usize, expected_rows: usize, expected_cols: usize },
    #[error("hom does not respect relations: relation {relation} is sent to a nonzero element")]
    IllDefinedHom { relation: usize },
    #[error("vector of length {found} given for a group with {expected} generators")]
    CoordinateLength { expected: usize, found: usize },
}

/// The target element is not in the image; `certificate` lists the nonzero
/// coordinates `(index, value)` of its class in the cokernel.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("element not in image (cokernel coordinates {certificate:?})")]
pub struct NotInImage {
    pub certificate: Vec<(usize, Int)>,
}

#[derive(Debug)]
enum Basis {
    /// Relations only constrain single generators: generator `i` has order
    /// `moduli[i]` (0 = free, 1 = trivial).
    Diagonal(Vec<Int>),
    /// `u * relations * v` is diagonal with entries `moduli`.
    Changed { u: IntMatrix, u_inv: IntMatrix, moduli: Vec<Int> },
}

#[derive(Debug)]
struct GroupInner {
    ngens: usize,
    relations: IntMatrix,
    basis: Basis,
    free_rank: usize,
    torsion: Vec<Int>,
}

/// A finitely generated abelian group `Z^n / <columns of relations>`.
/// Cloning is cheap; the value is immutable.
#[derive(Clone)]
pub struct FgAbelianGroup(Arc<GroupInner>);

impl fmt::Debug for FgAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FgAbelianGroup({} gens, {})", self.0.ngens, self.render())
    }
}

impl fmt::Display for FgAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// Turns a list of cyclic orders into the invariant-factor chain (units dropped).
pub fn invariant_chain(values: &[Int]) -> Vec<Int> {
    let mut v: Vec<Int> = values.iter().map(|x| x.abs()).filter(|x| !x.is_one() && !x.is_zero()).collect();
    v.sort();
    let chained = v.windows(2).all(|w| w[0].divides(&w[1]));
    if !chained {
        for i in 0..v.len() {
            for j in i + 1..v.len() {
                if v[i].divides(&v[j]) {
                    continue;
                }
                let g = v[i].gcd(&v[j]);
                let l = v[i].lcm(&v[j]);
                v[i] = g;
                v[j] = l;
            }
        }
        v.retain(|x| !x.is_one());
    }
    v
}

fn diagonal_moduli(ngens: usize, rel: &IntMatrix) -> Option<Vec<Int>> {
    let mut moduli = vec![Int::ZERO; ngens];
    for j in 0..rel.cols() {
        let mut hit = None;
        for i in 0..ngens {
            if !rel.get(i, j).is_zero() {
                if hit.is_some() {
                    return None;
                }
                hit = Some(i);
            }
        }
        if let Some(i) = hit {
            moduli[i] = moduli[i].gcd(rel.get(i, j));
        }
    }
    Some(moduli)
}

impl FgAbelianGroup {
    pub fn new(ngens: usize, relations: IntMatrix) -> Result<FgAbelianGroup, AbGroupError> {
        if relations.rows() != ngens {
            return Err(AbGroupError::RelationShape { expected: ngens, found: relations.rows() });
        }
        let basis = match diagonal_moduli(ngens, &relations) {
            Some(m) => Basis::Diagonal(m),
            None => {
                let s = Smith::run(&relations, Track { u: true, u_inv: true, v: false });
                let mut moduli = s.diag.clone();
                moduli.resize(ngens, Int::ZERO);
                Basis::Changed { u: s.u.unwrap(), u_inv: s.u_inv.unwrap(), moduli }
            }
        };
        let moduli = match &basis {
            Basis::Diagonal(m) => m,
            Basis::Changed { moduli, .. } => moduli,
        };
        let free_rank = moduli.iter().filter(|m| m.is_zero()).count();
        let torsion = invariant_chain(moduli);
        Ok(FgAbelianGroup(Arc::new(GroupInner { ngens, relations, basis, free_rank, torsion })))
    }

    /// Group with generator `i` of order `moduli[i]` (0 = infinite order).
    pub fn from_moduli(moduli: &[Int]) -> FgAbelianGroup {
        let n = moduli.len();
        let rel = IntMatrix::diagonal(n, n, moduli);
        FgAbelianGroup::new(n, rel).expect("square diagonal relations")
    }

    pub fn free(rank: usize) -> FgAbelianGroup {
        FgAbelianGroup::new(rank, IntMatrix::zeros(rank, 0)).unwrap()
    }

    pub fn zero() -> FgAbelianGroup {
        FgAbelianGroup::free(0)
    }

    pub fn cyclic(order: i64) -> FgAbelianGroup {
        FgAbelianGroup::from_moduli(&[Int::from(order)])
    }

    /// `Z^free + Z/t1 + ...`, torsion generators first.
    pub fn from_invariants(free: usize, torsion: &[i64]) -> FgAbelianGroup {
        let mut m: Vec<Int> = torsion.iter().map(|t| Int::from(*t)).collect();
        m.extend(std::iter::repeat(Int::ZERO).take(free));
        FgAbelianGroup::from_moduli(&m)
    }

    pub fn direct_sum(parts: &[&FgAbelianGroup]) -> FgAbelianGroup {
        if parts.iter().all(|p| matches!(p.0.basis, Basis::Diagonal(_))) {
            let mut moduli = Vec::new();
            for p in parts {
                if let Basis::Diagonal(m) = &p.0.basis {
                    moduli.extend(m.iter().cloned());
                }
            }
            return FgAbelianGroup::from_moduli(&moduli);
        }
        let rels: Vec<&IntMatrix> = parts.iter().map(|p| &p.0.relations).collect();
        let n = parts.iter().map(|p| p.ngens()).sum();
        FgAbelianGroup::new(n, IntMatrix::block_diag(&rels)).unwrap()
    }

    /// `self^k`
    pub fn power(&self, k: usize) -> FgAbelianGroup {
        let parts: Vec<&FgAbelianGroup> = (0..k).map(|_| self).collect();
        FgAbelianGroup::direct_sum(&parts)
    }

    /// Per-generator orders when the relations only constrain single generators.
    pub fn diagonal_orders(&self) -> Option<&[Int]> {
        match &self.0.basis {
            Basis::Diagonal(m) => Some(m),
            Basis::Changed { .. } => None,
        }
    }

    /// Same generators and the same relation lattice written the same way.
    pub fn same_presentation(&self, other: &FgAbelianGroup) -> bool {
        if self.ngens() != other.ngens() {
            return false;
        }
        match (self.diagonal_orders(), other.diagonal_orders()) {
            (Some(a), Some(b)) => a.iter().zip(b).all(|(x, y)| x.abs() == y.abs()),
            _ => self.relations() == other.relations(),
        }
    }

    pub fn ngens(&self) -> usize {
        self.0.ngens
    }

    pub fn relations(&self) -> &IntMatrix {
        &self.0.relations
    }

    pub fn free_rank(&self) -> usize {
        self.0.free_rank
    }

    /// Invariant factors `d1 | d2 | ...`, all greater than one.
    pub fn torsion(&self) -> &[Int] {
        &self.0.torsion
    }

    pub fn is_trivial(&self) -> bool {
        self.0.free_rank == 0 && self.0.torsion.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.0.free_rank == 0
    }

    pub fn order(&self) -> Option<Int> {
        if !self.is_finite() {
            return None;
        }
        Some(self.0.torsion.iter().fold(Int::ONE, |a, b| &a * b))
    }

    /// Same isomorphism type.
    pub fn isomorphic(&self, other: &FgAbelianGroup) -> bool {
        self.0.free_rank == other.0.free_rank && self.0.torsion == other.0.torsion
    }

    pub fn has_invariants(&self, free: usize, torsion: &[i64]) -> bool {
        let t: Vec<Int> = torsion.iter().map(|x| Int::from(*x)).collect();
        self.0.free_rank == free && self.0.torsion == t
    }

    /// `Z^r + Z/d1 + ... + Z/dk`, with `Z` for rank one and `0` for the trivial group.
    pub fn render(&self) -> String {
        let mut parts = Vec::new();
        match self.0.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        for d in &self.0.torsion {
            parts.push(format!("Z/{d}"));
        }
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join(" + ")
        }
    }

    /// Orders of the coordinates in which relations are diagonal, with the
    /// change of basis into those coordinates (`None` = identity).
    pub(crate) fn constraint(&self) -> (Option<&IntMatrix>, &[Int]) {
        match &self.0.basis {
            Basis::Diagonal(m) => (None, m),
            Basis::Changed { u, moduli, .. } => (Some(u), moduli),
        }
    }

    pub fn is_diagonal(&self) -> bool {
        matches!(self.0.basis, Basis::Diagonal(_))
    }

    fn check_len(&self, x: &[Int]) {
        assert_eq!(x.len(), self.0.ngens, "coordinate vector length does not match generator count");
    }

    /// Canonical representative of the class of `x`.
    pub fn reduce(&self, x: &[Int]) -> Vec<Int> {
        self.check_len(x);
        match &self.0.basis {
            Basis::Diagonal(m) => x
                .iter()
                .zip(m)
                .map(|(v, d)| if d.is_zero() { v.clone() } else { v.mod_floor(&d.abs()) })
                .collect(),
            Basis::Changed { u, u_inv, moduli } => {
                let y: Vec<Int> = u
                    .mul_vec(x)
                    .into_iter()
                    .zip(moduli)
                    .map(|(v, d)| if d.is_zero() { v } else { v.mod_floor(d) })
                    .collect();
                u_inv.mul_vec(&y)
            }
        }
    }

    pub fn is_zero_vec(&self, x: &[Int]) -> bool {
        self.check_len(x);
        match &self.0.basis {
            Basis::Diagonal(m) => x.iter().zip(m).all(|(v, d)| d.divides(v) || (d.is_zero() && v.is_zero())),
            Basis::Changed { u, moduli, .. } => {
                u.mul_vec(x).iter().zip(moduli).all(|(v, d)| d.divides(v) || (d.is_zero() && v.is_zero()))
            }
        }
    }

    pub fn equal_vecs(&self, x: &[Int], y: &[Int]) -> bool {
        let d: Vec<Int> = x.iter().zip(y).map(|(a, b)| a - b).collect();
        self.is_zero_vec(&d)
    }

    pub fn element(&self, coords: Vec<Int>) -> Result<GroupElement, AbGroupError> {
        if coords.len() != self.0.ngens {
            return Err(AbGroupError::CoordinateLength { expected: self.0.ngens, found: coords.len() });
        }
        let coords = self.reduce(&coords);
        Ok(GroupElement { group: self.clone(), coords })
    }

    pub fn zero_element(&self) -> GroupElement {
        GroupElement { group: self.clone(), coords: vec![Int::ZERO; self.0.ngens] }
    }

    pub fn generator(&self, i: usize) -> GroupElement {
        let mut c = vec![Int::ZERO; self.0.ngens];
        c[i] = Int::ONE;
        self.element(c).unwrap()
    }

    /// All elements of a finite group, in a deterministic order.
    pub fn elements(&self) -> Option<Vec<Vec<Int>>> {
        if !self.is_finite() {
            return None;
        }
        let (u_inv, moduli): (Option<&IntMatrix>, &[Int]) = match &self.0.basis {
            Basis::Diagonal(m) => (None, m),
            Basis::Changed { u_inv, moduli, .. } => (Some(u_inv), moduli),
        };
        let ranges: Vec<i64> = moduli.iter().map(|m| m.abs().to_i64().expect("small finite group")).collect();
        let mut out = Vec::new();
        let mut cur = vec![0i64; ranges.len()];
        loop {
            let y: Vec<Int> = cur.iter().map(|v| Int::from(*v)).collect();
            out.push(match u_inv {
                Some(ui) => ui.mul_vec(&y),
                None => y,
            });
            let mut k = 0;
            loop {
                if k == cur.len() {
                    return Some(out);
                }
                cur[k] += 1;
                if cur[k] < ranges[k] {
                    break;
                }
                cur[k] = 0;
                k += 1;
            }
        }
    }
}

/// An element in canonical reduced coordinates.
#[derive(Clone, Debug)]
pub struct GroupElement {
    group: FgAbelianGroup,
    coords: Vec<Int>,
}

impl GroupElement {
    pub fn group(&self) -> &FgAbelianGroup {
        &self.group
    }

    pub fn coords(&self) -> &[Int] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<Int> {
        self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, other: &GroupElement) -> GroupElement {
        let c: Vec<Int> = self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect();
        self.group.element(c).unwrap()
    }

    pub fn neg(&self) -> GroupElement {
        let c: Vec<Int> = self.coords.iter().map(|a| -a).collect();
        self.group.element(c).unwrap()
    }
}

impl PartialEq for GroupElement {
    fn eq(&self, other: &Self) -> bool {
        self.group.ngens() == other.group.ngens() && self.coords == other.coords
    }
}

impl Eq for GroupElement {}

/// Cached factorization of `[matrix | target relations]`, used for image
/// membership and for the cokernel.
#[derive(Debug)]
struct HomSolve {
    u: IntMatrix,
    u_inv: IntMatrix,
    v: IntMatrix,
    diag: Vec<Int>,
    rank: usize,
    kept: Vec<usize>,
    coker: FgAbelianGroup,
}

/// A homomorphism given by the images of the source generators (columns).
#[derive(Clone)]
pub struct GroupHom {
    source: FgAbelianGroup,
    target: FgAbelianGroup,
    matrix: IntMatrix,
    solve: Arc<OnceLock<HomSolve>>,
}

impl fmt::Debug for GroupHom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GroupHom({} -> {}, {:?})", self.source, self.target, self.matrix)
    }
}

/// Sparse product `m * column j of r`.
fn apply_column(m: &IntMatrix, r: &IntMatrix, j: usize) -> Vec<Int> {
    let mut out = vec![Int::ZERO; m.rows()];
    for k in 0..r.rows() {
        let c = r.get(k, j);
        if c.is_zero() {
            continue;
        }
        for (i, o) in out.iter_mut().enumerate() {
            let a = m.get(i, k);
            if !a.is_zero() {
                super::int::add_mul(o, a, c);
            }
        }
    }
    out
}

impl GroupHom {
    pub fn new(source: &FgAbelianGroup, target: &FgAbelianGroup, matrix: IntMatrix) -> Result<GroupHom, AbGroupError> {
        if matrix.rows() != target.ngens() || matrix.cols() != source.ngens() {
            return Err(AbGroupError::HomShape {
                rows: matrix.rows(),
                cols: matrix.cols(),
                expected_rows: target.ngens(),
                expected_cols: source.ngens(),
            });
        }
        let rel = source.relations();
        for j in 0..rel.cols() {
            let img = apply_column(&matrix, rel, j);
            if !target.is_zero_vec(&img) {
                return Err(AbGroupError::IllDefinedHom { relation: j });
            }
        }
        Ok(GroupHom::new_unchecked(source, target, matrix))
    }

    pub(crate) fn new_unchecked(source: &FgAbelianGroup, target: &FgAbelianGroup, matrix: IntMatrix) -> GroupHom {
        GroupHom { source: source.clone(), target: target.clone(), matrix, solve: Arc::new(OnceLock::new()) }
    }

    pub fn identity(g: &FgAbelianGroup) -> GroupHom {
        GroupHom::new_unchecked(g, g, IntMatrix::identity(g.ngens()))
    }

    pub fn zero(source: &FgAbelianGroup, target: &FgAbelianGroup) -> GroupHom {
        GroupHom::new_unchecked(source, target, IntMatrix::zeros(target.ngens(), source.ngens()))
    }

    pub fn source(&self) -> &FgAbelianGroup {
        &self.source
    }

    pub fn target(&self) -> &FgAbelianGroup {
        &self.target
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    /// Image of a coordinate vector, reduced in the target.
    pub fn apply(&self, x: &[Int]) -> Vec<Int> {
        self.target.reduce(&self.matrix.mul_vec(x))
    }

    pub fn apply_element(&self, x: &GroupElement) -> GroupElement {
        self.target.element(self.matrix.mul_vec(x.coords())).unwrap()
    }

    /// `self ∘ first`
    pub fn compose(&self, first: &GroupHom) -> GroupHom {
        assert_eq!(first.target.ngens(), self.source.ngens(), "composition mismatch");
        GroupHom::new_unchecked(&first.source, &self.target, self.matrix.mul(&first.matrix))
    }

    pub fn is_zero(&self) -> bool {
        (0..self.matrix.cols()).all(|j| self.target.is_zero_vec(&self.matrix.column(j)))
    }

    pub fn equals(&self, other: &GroupHom) -> bool {
        let d = self.matrix.sub(&other.matrix);
        (0..d.cols()).all(|j| self.target.is_zero_vec(&d.column(j)))
    }

    pub fn is_injective(&self) -> bool {
        hom_kernel(self).0.is_trivial()
    }

    pub fn is_surjective(&self) -> bool {
        hom_cokernel(self).0.is_trivial()
    }

    fn solver(&self) -> &HomSolve {
        self.solve.get_or_init(|| {
            let big = self.matrix.hstack(self.target.relations());
            let s = Smith::run(&big, Track { u: true, u_inv: true, v: true });
            let n = self.target.ngens();
            let mut kept = Vec::new();
            let mut moduli = Vec::new();
            for i in 0..n {
                let d = if i < s.diag.len() { s.diag[i].clone() } else { Int::ZERO };
                if !d.is_one() {
                    kept.push(i);
                    moduli.push(d);
                }
            }
            let coker = FgAbelianGroup::from_moduli(&moduli);
            HomSolve {
                u: s.u.unwrap(),
                u_inv: s.u_inv.unwrap(),
                v: s.v.unwrap(),
                diag: s.diag,
                rank: s.rank,
                kept,
                coker,
            }
        })
    }

    /// Preimage of `y`, or the cokernel certificate when none exists.
    pub fn preimage(&self, y: &[Int]) -> Result<Vec<Int>, NotInImage> {
        let s = self.solver();
        let z = s.u.mul_vec(y);
        let mut ok = true;
        let mut w = vec![Int::ZERO; s.v.rows()];
        for (i, zi) in z.iter().enumerate() {
            if i < s.rank {
                if !s.diag[i].divides(zi) {
                    ok = false;
                    break;
                }
                w[i] = zi.div_exact(&s.diag[i]);
            } else if !zi.is_zero() {
                ok = false;
                break;
            }
        }
        if ok {
            let x = s.v.mul_vec(&w);
            return Ok(self.source.reduce(&x[..self.source.ngens()]));
        }
        let cls = s.coker.reduce(&s.kept.iter().map(|&i| z[i].clone()).collect::<Vec<_>>());
        let certificate = cls.into_iter().enumerate().filter(|(_, v)| !v.is_zero()).collect();
        Err(NotInImage { certificate })
    }

    pub(crate) fn cokernel_parts(&self) -> (FgAbelianGroup, IntMatrix, IntMatrix) {
        let s = self.solver();
        let proj = s.u.select_rows(&s.kept);
        let section = s.u_inv.select_columns(&s.kept);
        (s.coker.clone(), proj, section)
    }
}

/// Kernel of `h` as a group with its inclusion into the source.
pub fn hom_kernel(h: &GroupHom) -> (FgAbelianGroup, GroupHom) {
    let (ub, mb) = h.target.constraint();
    let t = match ub {
        Some(u) => u.mul(&h.matrix),
        None => h.matrix.clone(),
    };
    let kb = congruence_kernel(&t, mb);
    subgroup_from_basis(&h.source, &kb)
}

/// The subgroup of `g` generated by the columns of `gens`, presented with
/// diagonal relations, together with its inclusion.
pub fn subgroup_generated(g: &FgAbelianGroup, gens: &IntMatrix) -> (FgAbelianGroup, GroupHom) {
    subgroup_from_basis(g, gens)
}

fn subgroup_from_basis(g: &FgAbelianGroup, kb: &IntMatrix) -> (FgAbelianGroup, GroupHom) {
    // Generators only matter modulo the relations of `g`; reducing keeps entries small.
    let reduced: Vec<Vec<Int>> =
        (0..kb.cols()).map(|j| g.reduce(&kb.column(j))).filter(|v| v.iter().any(|x| !x.is_zero())).collect();
    let kb = &IntMatrix::from_columns(g.ngens(), &reduced);
    let (ua, ma) = g.constraint();
    let t = match ua {
        Some(u) => u.mul(kb),
        None => kb.clone(),
    };
    let rk = congruence_kernel(&t, ma);
    let s = Smith::run(&rk, Track { u: false, u_inv: true, v: false });
    let k = kb.cols();
    let u_inv = s.u_inv.unwrap();
    let mut kept = Vec::new();
    let mut moduli = Vec::new();
    for i in 0..k {
        let d = if i < s.diag.len() { s.diag[i].clone() } else { Int::ZERO };
        if !d.is_one() {
            kept.push(i);
            moduli.push(d);
        }
    }
    let sub = FgAbelianGroup::from_moduli(&moduli);
    let incl = kb.mul(&u_inv.select_columns(&kept));
    let cols: Vec<Vec<Int>> = (0..incl.cols()).map(|j| g.reduce(&incl.column(j))).collect();
    let incl = GroupHom::new_unchecked(&sub, g, IntMatrix::from_columns(g.ngens(), &cols));
    (sub, incl)
}

/// Cokernel of `h` with the projection from the target.
pub fn hom_cokernel(h: &GroupHom) -> (FgAbelianGroup, GroupHom) {
    let (c, proj, _) = h.cokernel_parts();
    let p = GroupHom::new_unchecked(&h.target, &c, proj);
    (c, p)
}

/// Cokernel together with a linear lift from cokernel coordinates to the target.
pub fn hom_cokernel_with_section(h: &GroupHom) -> (FgAbelianGroup, GroupHom, IntMatrix) {
    let (c, proj, section) = h.cokernel_parts();
    let p = GroupHom::new_unchecked(&h.target, &c, proj);
    (c, p, section)
}

/// `x` with `h(x) = y`, or the cokernel certificate.
pub fn solve_image_membership(h: &GroupHom, y: &GroupElement) -> Result<GroupElement, NotInImage> {
    let x = h.preimage(y.coords())?;
    Ok(h.source.element(x).unwrap())
}

/// Image of `h` as a subgroup of the target.
pub fn hom_image(h: &GroupHom) -> (FgAbelianGroup, GroupHom) {
    subgroup_from_basis(&h.target, &h.matrix)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn i(v: i64) -> Int {
        Int::from(v)
    }

    #[test]
    fn rendering() {
        assert_eq!(FgAbelianGroup::zero().render(), "0");
        assert_eq!(FgAbelianGroup::free(1).render(), "Z");
        assert_eq!(FgAbelianGroup::free(3).render(), "Z^3");
        assert_eq!(FgAbelianGroup::from_invariants(1, &[2]).render(), "Z + Z/2");
        assert_eq!(FgAbelianGroup::from_invariants(0, &[2, 3]).render(), "Z/6");
        assert_eq!(FgAbelianGroup::cyclic(1).render(), "0");
    }

    #[test]
    fn kernel_examples() {
        let z2 = FgAbelianGroup::free(2);
        let (k, _) = hom_kernel(&GroupHom::zero(&z2, &z2));
        assert_eq!(k.render(), "Z^2");
        let z = FgAbelianGroup::free(1);
        let two = GroupHom::new(&z, &z, IntMatrix::from_rows(&[vec![2]], 1)).unwrap();
        assert!(hom_kernel(&two).0.is_trivial());
        let z4 = FgAbelianGroup::cyclic(4);
        let two4 = GroupHom::new(&z4, &z4, IntMatrix::from_rows(&[vec![2]], 1)).unwrap();
        let (k, incl) = hom_kernel(&two4);
        assert_eq!(k.render(), "Z/2");
        assert!(two4.compose(&incl).is_zero());
    }

    #[test]
    fn cokernel_examples() {
        let z = FgAbelianGroup::free(1);
        let two = GroupHom::new(&z, &z, IntMatrix::from_rows(&[vec![2]], 1)).unwrap();
        assert_eq!(hom_cokernel(&two).0.render(), "Z/2");
        assert!(hom_cokernel(&GroupHom::identity(&z)).0.is_trivial());
        let z3 = FgAbelianGroup::cyclic(3);
        assert_eq!(hom_cokernel(&GroupHom::zero(&z, &z3)).0.render(), "Z/3");
    }

    #[test]
    fn membership() {
        let z = FgAbelianGroup::free(1);
        let two = GroupHom::new(&z, &z, IntMatrix::from_rows(&[vec![2]], 1)).unwrap();
        let y = z.element(vec![i(4)]).unwrap();
        assert_eq!(solve_image_membership(&two, &y).unwrap().coords(), &[i(2)]);
        let y = z.element(vec![i(3)]).unwrap();
        assert!(solve_image_membership(&two, &y).is_err());
        let z2 = FgAbelianGroup::free(2);
        let diag = GroupHom::new(&z, &z2, IntMatrix::from_rows(&[vec![1], vec![1]], 1)).unwrap();
        let y = z2.element(vec![i(1), i(2)]).unwrap();
        let err = solve_image_membership(&diag, &y).unwrap_err();
        assert!(!err.certificate.is_empty());
    }

    #[test]
    fn ill_defined_hom_is_rejected() {
        let z2 = FgAbelianGroup::cyclic(2);
        let z3 = FgAbelianGroup::cyclic(3);
        let err = GroupHom::new(&z2, &z3, IntMatrix::from_rows(&[vec![1]], 1)).unwrap_err();
        assert_eq!(err, AbGroupError::IllDefinedHom { relation: 0 });
    }

    #[test]
    fn non_diagonal_presentation() {
        // Z^2 / <(2,4),(6,8)> ≅ Z/2 + Z/4
        let g = FgAbelianGroup::new(2, IntMatrix::from_rows(&[vec![2, 6], vec![4, 8]], 2)).unwrap();
        assert_eq!(g.render(), "Z/2 + Z/4");
        let x = vec![i(7), i(-3)];
        let r = g.reduce(&x);
        assert_eq!(g.reduce(&r), r);
        assert!(g.equal_vecs(&x, &r));
        assert_eq!(g.elements().unwrap().len(), 8);
    }

    #[test]
    fn empty_group_everywhere() {
        let e = FgAbelianGroup::zero();
        let h = GroupHom::identity(&e);
        assert!(hom_kernel(&h).0.is_trivial());
        assert!(hom_cokernel(&h).0.is_trivial());
        assert!(solve_image_membership(&h, &e.zero_element()).is_ok());
        assert_eq!(e.elements().unwrap().len(), 1);
    }
}
