//! R-disjointness, W-discreteness and the R-lattice partition.

use crate::cover::{meets, star_set, union_sorted, Cover};
use crate::par;
use crate::space::FiniteMetricSpace;

/// Minimum over distinct member pairs of the set-to-set distance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapReport {
    /// ∞ for families with fewer than two members.
    pub min_gap: f64,
    /// Lowest (i, j) pair attaining `min_gap`.
    pub witness: Option<(usize, usize)>,
}

impl GapReport {
    /// R-disjoint in the non-strict sense `dist ≥ R`.
    pub fn is_disjoint_at(&self, r: f64) -> bool {
        self.min_gap >= r
    }
}

/// `min { d(a,b) : a ∈ A, b ∈ B }`, ∞ if either is empty.
pub fn set_distance(x: &FiniteMetricSpace, a: &[usize], b: &[usize]) -> f64 {
    let mut best = f64::INFINITY;
    for &p in a {
        for &q in b {
            let d = x.dist(p, q);
            if d < best {
                best = d;
            }
        }
    }
    best
}

pub fn min_gap(x: &FiniteMetricSpace, f: &Cover) -> GapReport {
    let m = f.members();
    let rows = par::map_range(m.len(), |i| {
        let mut best: Option<(f64, usize, usize)> = None;
        for j in (i + 1)..m.len() {
            let d = set_distance(x, &m[i], &m[j]);
            if best.is_none_or(|(b, _, _)| d < b) {
                best = Some((d, i, j));
            }
        }
        best
    });
    // Rows arrive in index order, so a strict `<` keeps the lowest pair.
    let mut best: Option<(f64, usize, usize)> = None;
    for (d, i, j) in rows.into_iter().flatten() {
        if best.is_none_or(|(b, _, _)| d < b) {
            best = Some((d, i, j));
        }
    }
    match best {
        Some((d, i, j)) => GapReport { min_gap: d, witness: Some((i, j)) },
        None => GapReport { min_gap: f64::INFINITY, witness: None },
    }
}

/// `st(V, W) ∪ V` member-wise, as a list aligned with `v.members()`.
pub fn member_stars(v: &Cover, w: &Cover) -> Vec<Vec<usize>> {
    par::map_slice(v.members(), |m| union_sorted(&star_set(m, w), m))
}

/// First pair of members of `v` whose stars against `w` meet.
pub fn discreteness_collision(v: &Cover, w: &Cover) -> Option<(usize, usize)> {
    let stars = member_stars(v, w);
    let rows = par::map_range(stars.len(), |i| {
        ((i + 1)..stars.len()).find(|&j| meets(&stars[i], &stars[j])).map(|j| (i, j))
    });
    rows.into_iter().flatten().next()
}

/// `v` is `w`-discrete: the stars `st(V, w) ∪ V` are pairwise disjoint.
pub fn is_discrete(v: &Cover, w: &Cover) -> bool {
    discreteness_collision(v, w).is_none()
}

/// Partition of a family's members into blocks. Block order is by lowest
/// member index; member indices inside a block are ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticePartition {
    pub blocks: Vec<Vec<usize>>,
}

impl LatticePartition {
    /// Each block's members unioned into one set, in block order.
    pub fn merged_sets(&self, f: &Cover) -> Vec<Vec<usize>> {
        self.blocks
            .iter()
            .map(|b| b.iter().fold(Vec::new(), |acc, &k| union_sorted(&acc, &f.members()[k])))
            .collect()
    }

    pub fn merged(&self, f: &Cover) -> Cover {
        Cover::canonical(self.merged_sets(f))
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, mut a: usize) -> usize {
        while self.0[a] != a {
            self.0[a] = self.0[self.0[a]];
            a = self.0[a];
        }
        a
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = (ra.min(rb), ra.max(rb));
            self.0[hi] = lo;
        }
    }

    fn blocks(mut self) -> Vec<Vec<usize>> {
        let n = self.0.len();
        let mut by_root: Vec<Vec<usize>> = vec![Vec::new(); n];
        for i in 0..n {
            let r = self.find(i);
            by_root[r].push(i);
        }
        by_root.into_iter().filter(|b| !b.is_empty()).collect()
    }
}

fn components(len: usize, edges: Vec<(usize, usize)>) -> LatticePartition {
    let mut uf = UnionFind::new(len);
    for (a, b) in edges {
        uf.union(a, b);
    }
    LatticePartition { blocks: uf.blocks() }
}

/// Connected components of the graph on members with an edge whenever the
/// set distance is `≤ r`. Distinct blocks are more than `r` apart.
pub fn lattice_partition(x: &FiniteMetricSpace, f: &Cover, r: f64) -> LatticePartition {
    let m = f.members();
    let edges = par::map_range(m.len(), |i| {
        ((i + 1)..m.len())
            .filter(|&j| set_distance(x, &m[i], &m[j]) <= r)
            .map(|j| (i, j))
            .collect::<Vec<_>>()
    });
    components(m.len(), edges.concat())
}

/// Components of the "stars against `w` meet" relation. Merging each
/// component yields a `w`-discrete family.
pub fn discrete_partition(f: &Cover, w: &Cover) -> LatticePartition {
    let stars = member_stars(f, w);
    let edges = par::map_range(stars.len(), |i| {
        ((i + 1)..stars.len())
            .filter(|&j| meets(&stars[i], &stars[j]))
            .map(|j| (i, j))
            .collect::<Vec<_>>()
    });
    components(stars.len(), edges.concat())
}

/// Closed neighborhood `{z : d(z, A) ≤ r}`.
pub fn neighborhood(x: &FiniteMetricSpace, a: &[usize], r: f64) -> Vec<usize> {
    (0..x.len()).filter(|&z| x.dist_to_set(z, a) <= r).collect()
}

/// For every pair `x, y` at finite distance there is `z` with
/// `|d(x,z) − d(x,y)/2| ≤ tol` and `|d(y,z) − d(x,y)/2| ≤ tol`.
pub fn has_midpoint_property(x: &FiniteMetricSpace, tol: f64) -> bool {
    let n = x.len();
    par::map_range(n, |i| {
        ((i + 1)..n).all(|j| {
            let d = x.dist(i, j);
            if !d.is_finite() {
                return true;
            }
            let half = d / 2.0;
            (0..n).any(|z| (x.dist(i, z) - half).abs() <= tol && (x.dist(j, z) - half).abs() <= tol)
        })
    })
    .into_iter()
    .all(|ok| ok)
}
