use super::SiteError;
use std::collections::HashMap;
use std::sync::Arc;

struct SiteInner {
    names: Vec<String>,
    leq: Vec<Vec<bool>>,
    covers: Vec<(usize, usize)>,
    chains: Vec<Vec<Vec<usize>>>,
    chain_index: Vec<HashMap<Vec<usize>, usize>>,
}

/// A finite poset with the up-set topology. Cheap to clone.
#[derive(Clone)]
pub struct PosetSite(Arc<SiteInner>);

impl std::fmt::Debug for PosetSite {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "PosetSite({:?})", self.0.names)
    }
}

impl PartialEq for PosetSite {
    fn eq(&self, other: &PosetSite) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.0.names == other.0.names && self.0.leq == other.0.leq)
    }
}

impl Eq for PosetSite {}

impl PosetSite {
    /// Builds the order generated by `pairs` (reflexive-transitive closure)
    /// and rejects cycles.
    pub fn new(names: Vec<String>, pairs: &[(usize, usize)]) -> Result<PosetSite, SiteError> {
        let n = names.len();
        let mut leq = vec![vec![false; n]; n];
        for (i, row) in leq.iter_mut().enumerate() {
            row[i] = true;
        }
        for &(a, b) in pairs {
            if a >= n || b >= n {
                return Err(SiteError::PointIndex { index: a.max(b) });
            }
            leq[a][b] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if leq[i][k] {
                    for j in 0..n {
                        if leq[k][j] {
                            leq[i][j] = true;
                        }
                    }
                }
            }
        }
        PosetSite::from_leq(names, leq)
    }

    /// Takes the full relation and checks the order axioms as given.
    pub fn from_leq(names: Vec<String>, leq: Vec<Vec<bool>>) -> Result<PosetSite, SiteError> {
        let n = names.len();
        if leq.len() != n || leq.iter().any(|r| r.len() != n) {
            return Err(SiteError::PointIndex { index: n });
        }
        for i in 0..n {
            if names[..i].contains(&names[i]) {
                return Err(SiteError::DuplicatePoint { name: names[i].clone() });
            }
            if !leq[i][i] {
                return Err(SiteError::NotReflexive { point: names[i].clone() });
            }
        }
        for i in 0..n {
            for j in 0..n {
                if i != j && leq[i][j] && leq[j][i] {
                    return Err(SiteError::NotAntisymmetric { a: names[i].clone(), b: names[j].clone() });
                }
                for k in 0..n {
                    if leq[i][j] && leq[j][k] && !leq[i][k] {
                        return Err(SiteError::NotTransitive {
                            a: names[i].clone(),
                            b: names[j].clone(),
                            c: names[k].clone(),
                        });
                    }
                }
            }
        }
        let lt = |a: usize, b: usize| a != b && leq[a][b];
        let mut covers = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if lt(a, b) && !(0..n).any(|c| lt(a, c) && lt(c, b)) {
                    covers.push((a, b));
                }
            }
        }
        let mut chains: Vec<Vec<Vec<usize>>> = vec![(0..n).map(|x| vec![x]).collect()];
        loop {
            let next: Vec<Vec<usize>> = chains
                .last()
                .unwrap()
                .iter()
                .flat_map(|c| {
                    let last = *c.last().unwrap();
                    (0..n).filter(move |&y| lt(last, y)).map(move |y| {
                        let mut d = c.clone();
                        d.push(y);
                        d
                    })
                })
                .collect();
            if next.is_empty() {
                break;
            }
            chains.push(next);
        }
        let chain_index = chains
            .iter()
            .map(|cs| cs.iter().enumerate().map(|(i, c)| (c.clone(), i)).collect())
            .collect();
        Ok(PosetSite(Arc::new(SiteInner { names, leq, covers, chains, chain_index })))
    }

    pub fn len(&self) -> usize {
        self.0.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.0.names
    }

    pub fn name(&self, x: usize) -> &str {
        &self.0.names[x]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.0.names.iter().position(|n| n == name)
    }

    pub fn point(&self, name: &str) -> Result<usize, SiteError> {
        self.index_of(name).ok_or_else(|| SiteError::UnknownPoint { name: name.to_string() })
    }

    #[inline]
    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.0.leq[a][b]
    }

    #[inline]
    pub fn lt(&self, a: usize, b: usize) -> bool {
        a != b && self.0.leq[a][b]
    }

    /// Pairs `a < b` with nothing strictly between.
    pub fn covering_pairs(&self) -> &[(usize, usize)] {
        &self.0.covers
    }

    /// `U_x = {y : y >= x}`.
    pub fn minimal_open(&self, x: usize) -> Vec<usize> {
        (0..self.len()).filter(|&y| self.leq(x, y)).collect()
    }

    pub fn all_points(&self) -> Vec<usize> {
        (0..self.len()).collect()
    }

    /// The first pair `(x, y)` with `x` in `u`, `x <= y` and `y` outside.
    pub fn up_closure_violation(&self, u: &[usize]) -> Option<(usize, usize)> {
        for &x in u {
            for y in 0..self.len() {
                if self.leq(x, y) && !u.contains(&y) {
                    return Some((x, y));
                }
            }
        }
        None
    }

    /// Largest `q` with a strict chain `x_0 < ... < x_q`.
    pub fn max_chain_degree(&self) -> usize {
        self.0.chains.len() - 1
    }

    /// Strict chains of degree `q` (that is, `q + 1` points), lexicographically.
    pub fn chains(&self, q: usize) -> &[Vec<usize>] {
        self.0.chains.get(q).map(|c| c.as_slice()).unwrap_or(&[])
    }

    pub fn chain_index(&self, chain: &[usize]) -> Option<usize> {
        self.0.chain_index.get(chain.len().checked_sub(1)?)?.get(chain).copied()
    }

    /// Weakly increasing chains `x_0 <= ... <= x_q`.
    pub fn weak_chains(&self, q: usize) -> Vec<Vec<usize>> {
        let n = self.len();
        let mut out: Vec<Vec<usize>> = (0..n).map(|x| vec![x]).collect();
        for _ in 0..q {
            out = out
                .into_iter()
                .flat_map(|c| {
                    let last = *c.last().unwrap();
                    (0..n).filter(move |&y| self.leq(last, y)).map(move |y| {
                        let mut d = c.clone();
                        d.push(y);
                        d
                    })
                })
                .collect();
        }
        out
    }

    /// Points ordered so that every point comes after all points above it.
    pub(crate) fn top_down_order(&self) -> Vec<usize> {
        let mut pts: Vec<usize> = (0..self.len()).collect();
        pts.sort_by_key(|&x| (0..self.len()).filter(|&y| self.leq(x, y)).count());
        pts
    }

    pub fn chain_label(&self, chain: &[usize]) -> String {
        chain.iter().map(|&x| self.name(x)).collect::<Vec<_>>().join("<")
    }

    /// Parses `"a<b<c"` into a strict chain.
    pub fn parse_chain(&self, label: &str) -> Result<Vec<usize>, SiteError> {
        let pts: Vec<usize> = label.split('<').map(|s| self.point(s.trim())).collect::<Result<_, _>>()?;
        if pts.windows(2).any(|w| !self.lt(w[0], w[1])) {
            return Err(SiteError::NotAChain { label: label.to_string() });
        }
        Ok(pts)
    }
}

/// A monotone map between finite posets.
#[derive(Clone, Debug)]
pub struct MonotoneMap {
    pub source: PosetSite,
    pub target: PosetSite,
    pub map: Vec<usize>,
}

impl MonotoneMap {
    pub fn new(source: &PosetSite, target: &PosetSite, map: Vec<usize>) -> Result<MonotoneMap, SiteError> {
        if map.len() != source.len() || map.iter().any(|&y| y >= target.len()) {
            return Err(SiteError::PointIndex { index: map.len() });
        }
        for a in 0..source.len() {
            for b in 0..source.len() {
                if source.leq(a, b) && !target.leq(map[a], map[b]) {
                    return Err(SiteError::NotMonotone { a: source.name(a).into(), b: source.name(b).into() });
                }
            }
        }
        Ok(MonotoneMap { source: source.clone(), target: target.clone(), map })
    }

    pub fn identity(site: &PosetSite) -> MonotoneMap {
        MonotoneMap { source: site.clone(), target: site.clone(), map: site.all_points() }
    }

    /// `pi^{-1}(U_x)`.
    pub fn preimage_of_open(&self, x: usize) -> Vec<usize> {
        (0..self.source.len()).filter(|&z| self.target.leq(x, self.map[z])).collect()
    }
}
