//! Smith normal form with optional transform tracking, an integer linear
//! solver built on it, and a kernel routine for congruence systems.

use super::int::{add_mul, Int};
use super::matrix::IntMatrix;

/// Result of [`smith_normal_form`]: `u * m * v = d`.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl SmithForm {
    /// Diagonal entries of `d` (length `min(rows, cols)`).
    pub fn diagonal(&self) -> Vec<Int> {
        (0..self.d.rows().min(self.d.cols())).map(|i| self.d.get(i, i).clone()).collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|x| !x.is_zero()).count()
    }
}

/// Computes `(U, D, V)` with `U * m * V = D`, `U`, `V` unimodular and the
/// diagonal of `D` a divisibility chain of non-negative integers.
pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    let w = Smith::run(m, Track { u: true, u_inv: false, v: true });
    let d = IntMatrix::diagonal(m.rows(), m.cols(), &w.diag);
    SmithForm { u: w.u.unwrap(), d, v: w.v.unwrap() }
}

#[derive(Clone, Copy)]
pub(crate) struct Track {
    pub u: bool,
    pub u_inv: bool,
    pub v: bool,
}

pub(crate) struct Smith {
    pub u: Option<IntMatrix>,
    pub u_inv: Option<IntMatrix>,
    pub v: Option<IntMatrix>,
    pub diag: Vec<Int>,
    pub rank: usize,
}

// `a` is row-major; `uit` and `vt` hold columns of U^{-1} and V as rows so
// every tracked update is a row operation.
struct Work {
    a: Vec<Vec<Int>>,
    u: Option<Vec<Vec<Int>>>,
    uit: Option<Vec<Vec<Int>>>,
    vt: Option<Vec<Vec<Int>>>,
    t: usize,
    m: usize,
    n: usize,
}

fn ident_rows(n: usize) -> Vec<Vec<Int>> {
    (0..n)
        .map(|i| {
            let mut r = vec![Int::ZERO; n];
            r[i] = Int::ONE;
            r
        })
        .collect()
}

fn row_axpy(dst: &mut [Int], src: &[Int], q: &Int, from: usize) {
    for k in from..dst.len() {
        if !src[k].is_zero() {
            add_mul(&mut dst[k], &src[k], q);
        }
    }
}

fn rows_2x2(rows: &mut [Vec<Int>], i: usize, j: usize, c: &[Int; 4], from: usize) {
    let (ri, rj) = if i < j {
        let (lo, hi) = rows.split_at_mut(j);
        (&mut lo[i], &mut hi[0])
    } else {
        let (lo, hi) = rows.split_at_mut(i);
        (&mut hi[0], &mut lo[j])
    };
    for k in from..ri.len() {
        let x = ri[k].clone();
        let y = rj[k].clone();
        if x.is_zero() && y.is_zero() {
            continue;
        }
        ri[k] = &(&c[0] * &x) + &(&c[1] * &y);
        rj[k] = &(&c[2] * &x) + &(&c[3] * &y);
    }
}

fn two_rows(rows: &mut [Vec<Int>], i: usize, j: usize) -> (&mut Vec<Int>, &Vec<Int>) {
    if i < j {
        let (lo, hi) = rows.split_at_mut(j);
        (&mut lo[i], &hi[0])
    } else {
        let (lo, hi) = rows.split_at_mut(i);
        (&mut hi[0], &lo[j])
    }
}

impl Work {
    // row_i += q * row_j
    fn row_add(&mut self, i: usize, j: usize, q: &Int) {
        let t = self.t;
        let (di, sj) = two_rows(&mut self.a, i, j);
        row_axpy(di, sj, q, t);
        if let Some(u) = self.u.as_mut() {
            let (di, sj) = two_rows(u, i, j);
            row_axpy(di, sj, q, 0);
        }
        if let Some(uit) = self.uit.as_mut() {
            let nq = -q;
            let (dj, si) = two_rows(uit, j, i);
            row_axpy(dj, si, &nq, 0);
        }
    }

    fn row_swap(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        self.a.swap(i, j);
        if let Some(u) = self.u.as_mut() {
            u.swap(i, j);
        }
        if let Some(uit) = self.uit.as_mut() {
            uit.swap(i, j);
        }
    }

    // (row_i, row_j) <- (c0 row_i + c1 row_j, c2 row_i + c3 row_j), det 1
    fn row_2x2(&mut self, i: usize, j: usize, c: [Int; 4]) {
        let t = self.t;
        rows_2x2(&mut self.a, i, j, &c, t);
        if let Some(u) = self.u.as_mut() {
            rows_2x2(u, i, j, &c, 0);
        }
        if let Some(uit) = self.uit.as_mut() {
            let inv = [c[3].clone(), -&c[2], -&c[1], c[0].clone()];
            rows_2x2(uit, i, j, &inv, 0);
        }
    }

    fn row_neg(&mut self, i: usize) {
        for x in self.a[i].iter_mut() {
            *x = -&*x;
        }
        if let Some(u) = self.u.as_mut() {
            for x in u[i].iter_mut() {
                *x = -&*x;
            }
        }
        if let Some(uit) = self.uit.as_mut() {
            for x in uit[i].iter_mut() {
                *x = -&*x;
            }
        }
    }

    // col_i += q * col_j
    fn col_add(&mut self, i: usize, j: usize, q: &Int) {
        for r in self.t..self.m {
            let row = &mut self.a[r];
            if !row[j].is_zero() {
                let v = row[j].clone();
                add_mul(&mut row[i], &v, q);
            }
        }
        if let Some(vt) = self.vt.as_mut() {
            let (di, sj) = two_rows(vt, i, j);
            row_axpy(di, sj, q, 0);
        }
    }

    fn col_swap(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for r in 0..self.m {
            self.a[r].swap(i, j);
        }
        if let Some(vt) = self.vt.as_mut() {
            vt.swap(i, j);
        }
    }

    fn col_2x2(&mut self, i: usize, j: usize, c: [Int; 4]) {
        for r in self.t..self.m {
            let row = &mut self.a[r];
            let x = row[i].clone();
            let y = row[j].clone();
            if x.is_zero() && y.is_zero() {
                continue;
            }
            row[i] = &(&c[0] * &x) + &(&c[1] * &y);
            row[j] = &(&c[2] * &x) + &(&c[3] * &y);
        }
        if let Some(vt) = self.vt.as_mut() {
            rows_2x2(vt, i, j, &c, 0);
        }
    }

    fn find_pivot(&self) -> Option<(usize, usize)> {
        let t = self.t;
        let mut best: Option<(usize, usize)> = None;
        let mut best_abs = Int::ZERO;
        for i in t..self.m {
            for j in t..self.n {
                let v = &self.a[i][j];
                if v.is_zero() {
                    continue;
                }
                if v.is_unit() {
                    return Some((i, j));
                }
                let av = v.abs();
                if best.is_none() || av < best_abs {
                    best = Some((i, j));
                    best_abs = av;
                }
            }
        }
        best
    }

    fn eliminate_pivot(&mut self) {
        let t = self.t;
        loop {
            for i in t + 1..self.m {
                if self.a[i][t].is_zero() {
                    continue;
                }
                let p = self.a[t][t].clone();
                let x = self.a[i][t].clone();
                if p.divides(&x) {
                    let q = -x.div_exact(&p);
                    self.row_add(i, t, &q);
                } else {
                    let (g, s, tt) = Int::ext_gcd(&p, &x);
                    let c = [s, tt, -x.div_exact(&g), p.div_exact(&g)];
                    self.row_2x2(t, i, c);
                }
            }
            let mut col_dirty = false;
            for j in t + 1..self.n {
                if self.a[t][j].is_zero() {
                    continue;
                }
                let p = self.a[t][t].clone();
                let x = self.a[t][j].clone();
                if p.divides(&x) {
                    let q = -x.div_exact(&p);
                    self.col_add(j, t, &q);
                } else {
                    let (g, s, tt) = Int::ext_gcd(&p, &x);
                    let c = [s, tt, -x.div_exact(&g), p.div_exact(&g)];
                    self.col_2x2(t, j, c);
                    col_dirty = true;
                }
            }
            if col_dirty && (t + 1..self.m).any(|i| !self.a[i][t].is_zero()) {
                continue;
            }
            let p = self.a[t][t].clone();
            if p.is_unit() {
                break;
            }
            let mut bad = None;
            'scan: for i in t + 1..self.m {
                for j in t + 1..self.n {
                    if !p.divides(&self.a[i][j]) {
                        bad = Some(i);
                        break 'scan;
                    }
                }
            }
            match bad {
                Some(i) => self.row_add(t, i, &Int::ONE),
                None => break,
            }
        }
        if self.a[t][t].is_negative() {
            self.row_neg(t);
        }
    }
}

fn rows_to_matrix(rows: Vec<Vec<Int>>, n: usize) -> IntMatrix {
    let r = rows.len();
    IntMatrix::from_data(r, n, rows.into_iter().flatten().collect())
}

impl Smith {
    pub(crate) fn run(m: &IntMatrix, track: Track) -> Smith {
        let (rows, cols) = (m.rows(), m.cols());
        let a: Vec<Vec<Int>> = (0..rows).map(|i| m.row(i).to_vec()).collect();
        let mut w = Work {
            a,
            u: track.u.then(|| ident_rows(rows)),
            uit: track.u_inv.then(|| ident_rows(rows)),
            vt: track.v.then(|| ident_rows(cols)),
            t: 0,
            m: rows,
            n: cols,
        };
        let mut rank = 0;
        while w.t < rows.min(cols) {
            let Some((pi, pj)) = w.find_pivot() else { break };
            let t = w.t;
            w.row_swap(t, pi);
            w.col_swap(t, pj);
            w.eliminate_pivot();
            rank += 1;
            w.t += 1;
        }
        let diag: Vec<Int> = (0..rows.min(cols)).map(|i| w.a[i][i].clone()).collect();
        let u = w.u.map(|u| rows_to_matrix(u, rows));
        let u_inv = w.uit.map(|x| rows_to_matrix(x, rows).transpose());
        let v = w.vt.map(|x| rows_to_matrix(x, cols).transpose());
        Smith { u, u_inv, v, diag, rank }
    }
}

/// Solves `A x = b` over the integers for many right-hand sides.
#[derive(Clone, Debug)]
pub struct LinearSolver {
    u: IntMatrix,
    v: IntMatrix,
    diag: Vec<Int>,
    rank: usize,
}

impl LinearSolver {
    pub fn new(a: &IntMatrix) -> LinearSolver {
        let s = Smith::run(a, Track { u: true, u_inv: false, v: true });
        LinearSolver { u: s.u.unwrap(), v: s.v.unwrap(), diag: s.diag, rank: s.rank }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Some integer solution, or `None` when `b` is not in the column lattice.
    pub fn solve(&self, b: &[Int]) -> Option<Vec<Int>> {
        let z = self.u.mul_vec(b);
        let mut w = vec![Int::ZERO; self.v.rows()];
        for (i, zi) in z.iter().enumerate() {
            if i < self.rank {
                let d = &self.diag[i];
                if !d.divides(zi) {
                    return None;
                }
                w[i] = zi.div_exact(d);
            } else if !zi.is_zero() {
                return None;
            }
        }
        Some(self.v.mul_vec(&w))
    }
}

/// Generators (as matrix columns) of the lattice
/// `{x in Z^n : (m x)_i ≡ 0 mod moduli_i for every row i}`; a zero modulus
/// means the row must vanish exactly.
///
/// When every modulus is nonzero the lattice contains `E Z^n` for `E` their
/// lcm; working modulo `E` then keeps entries bounded, and the columns
/// `E e_j` are appended to the output.
pub fn congruence_kernel(m: &IntMatrix, moduli: &[Int]) -> IntMatrix {
    assert_eq!(m.rows(), moduli.len(), "one modulus per row");
    let (rows, n) = (m.rows(), m.cols());
    let bound = if moduli.iter().all(|e| !e.is_zero()) {
        let e = moduli.iter().fold(Int::ONE, |acc, e| acc.lcm(e)).abs();
        (!e.is_one()).then_some(e)
    } else {
        None
    };
    let mut cols: Vec<Vec<Int>> = m.columns();
    let mut basis: Vec<Vec<Int>> = ident_rows(n);
    let mut active: Vec<usize> = (0..n).collect();
    for i in 0..rows {
        let e = moduli[i].abs();
        if e.is_one() {
            continue;
        }
        let reduce = |cols: &mut Vec<Vec<Int>>, active: &[usize]| {
            if !e.is_zero() {
                // centered residues, so a Euclidean step never grows the entry
                for &c in active {
                    let r = cols[c][i].mod_floor(&e);
                    cols[c][i] = if &(&r + &r) > &e { &r - &e } else { r };
                }
            }
        };
        reduce(&mut cols, &active);
        let mut nz: Vec<usize> = active.iter().copied().filter(|&c| !cols[c][i].is_zero()).collect();
        while nz.len() > 1 {
            let p = *nz.iter().min_by(|&&x, &&y| cols[x][i].abs().cmp(&cols[y][i].abs())).unwrap();
            let pv = cols[p][i].clone();
            for &o in &nz {
                if o == p {
                    continue;
                }
                let q = -cols[o][i].div_round(&pv);
                if q.is_zero() {
                    continue;
                }
                let (dst, src) = two_rows(&mut cols, o, p);
                row_axpy(dst, src, &q, i);
                let (dst, src) = two_rows(&mut basis, o, p);
                row_axpy(dst, src, &q, 0);
            }
            reduce(&mut cols, &nz);
            nz.retain(|&c| !cols[c][i].is_zero());
        }
        if let Some(&p) = nz.first() {
            if e.is_zero() {
                active.retain(|&c| c != p);
            } else {
                let c = e.div_exact(&cols[p][i].gcd(&e));
                for x in cols[p][i..].iter_mut() {
                    *x = &*x * &c;
                }
                for x in basis[p].iter_mut() {
                    *x = &*x * &c;
                }
            }
        }
        if let Some(big) = &bound {
            for &c in &active {
                for x in basis[c].iter_mut() {
                    *x = x.mod_floor(big);
                }
            }
        }
    }
    let mut chosen: Vec<Vec<Int>> = active.iter().map(|&c| std::mem::take(&mut basis[c])).collect();
    if let Some(big) = bound {
        chosen.retain(|v| v.iter().any(|x| !x.is_zero()));
        for j in 0..n {
            let mut v = vec![Int::ZERO; n];
            v[j] = big.clone();
            chosen.push(v);
        }
    }
    IntMatrix::from_columns(n, &chosen)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(m: &IntMatrix) {
        let s = smith_normal_form(m);
        assert_eq!(s.u.mul(m).mul(&s.v), s.d);
        assert!(s.u.is_unimodular());
        assert!(s.v.is_unimodular());
        let d = s.diagonal();
        for k in 1..d.len() {
            assert!(d[k - 1].divides(&d[k]), "chain broken in {:?}", d);
        }
        for i in 0..s.d.rows() {
            for j in 0..s.d.cols() {
                if i != j {
                    assert!(s.d.get(i, j).is_zero());
                }
            }
        }
    }

    #[test]
    fn frozen_two_by_two() {
        let m = IntMatrix::from_rows(&[vec![2, 4], vec![6, 8]], 2);
        let s = smith_normal_form(&m);
        assert_eq!(s.diagonal(), vec![Int::from(2), Int::from(4)]);
        check(&m);
    }

    #[test]
    fn identity_and_zero() {
        let s = smith_normal_form(&IntMatrix::identity(2));
        assert_eq!(s.d, IntMatrix::identity(2));
        assert_eq!(s.u, IntMatrix::identity(2));
        assert_eq!(s.v, IntMatrix::identity(2));
        let z = IntMatrix::zeros(2, 2);
        assert!(smith_normal_form(&z).d.is_zero());
        let e = IntMatrix::zeros(0, 3);
        let s = smith_normal_form(&e);
        assert_eq!((s.u.rows(), s.v.rows(), s.d.cols()), (0, 3, 3));
    }

    #[test]
    fn rectangular_and_divisibility() {
        check(&IntMatrix::from_rows(&[vec![2, 0], vec![0, 3]], 2));
        check(&IntMatrix::from_rows(&[vec![4, 6, 10], vec![6, 9, 15]], 3));
        check(&IntMatrix::from_rows(&[vec![0, 0], vec![0, 5], vec![3, 0]], 2));
    }

    #[test]
    fn uinv_tracking() {
        let m = IntMatrix::from_rows(&[vec![3, 5, 7], vec![2, 4, 6], vec![1, 1, 9]], 3);
        let s = Smith::run(&m, Track { u: true, u_inv: true, v: true });
        assert_eq!(s.u.unwrap().mul(&s.u_inv.unwrap()), IntMatrix::identity(3));
    }

    #[test]
    fn solver() {
        let a = IntMatrix::from_rows(&[vec![2], vec![2]], 1);
        let s = LinearSolver::new(&a);
        assert_eq!(s.solve(&[Int::from(4), Int::from(4)]), Some(vec![Int::from(2)]));
        assert_eq!(s.solve(&[Int::from(1), Int::from(2)]), None);
    }

    #[test]
    fn congruence_kernel_mod() {
        // 2x ≡ 0 mod 4  ->  x ∈ 2Z
        let m = IntMatrix::from_rows(&[vec![2]], 1);
        let k = congruence_kernel(&m, &[Int::from(4)]);
        let s = LinearSolver::new(&k);
        assert!(s.solve(&[Int::from(2)]).is_some());
        assert!(s.solve(&[Int::from(1)]).is_none());
        // x + y = 0 exactly
        let m = IntMatrix::from_rows(&[vec![1, 1]], 2);
        let k = congruence_kernel(&m, &[Int::ZERO]);
        assert_eq!(k.cols(), 1);
        assert!(m.mul(&k).is_zero());
    }

    #[test]
    fn congruence_kernel_terminates_on_wraparound() {
        // 3x + 5y ≡ 0 mod 6; floor residues would cycle 5 -> -1 -> 5
        let m = IntMatrix::from_rows(&[vec![3, 5]], 2);
        let k = congruence_kernel(&m, &[Int::from(6)]);
        let s = LinearSolver::new(&k);
        for (x, y) in [(1, 3), (2, 0), (0, 6), (5, 3)] {
            assert!(s.solve(&[Int::from(x), Int::from(y)]).is_some(), "({x},{y})");
        }
        assert!(s.solve(&[Int::from(1), Int::from(0)]).is_none());
        assert!(s.solve(&[Int::from(0), Int::from(3)]).is_none());
    }
}
