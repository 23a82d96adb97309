//! Finite metric spaces with possibly infinite distances.

use crate::error::{Error, Result};
use crate::par;

#[derive(Debug, Clone, PartialEq)]
enum Metric {
    /// Full row-major n×n table.
    Dense(Vec<f64>),
    /// ℓ¹ metric on the integer box `[0,d1) × … × [0,dk)`, row-major indexing
    /// with the last coordinate varying fastest.
    Grid(Vec<usize>),
}

/// An indexed point set `0..n` with a symmetric distance table.
///
/// `f64::INFINITY` is a legal distance (points in different components of an
/// ∞-metric). The triangle inequality is checked on construction whenever both
/// right-hand terms are finite.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteMetricSpace {
    n: usize,
    metric: Metric,
    label: Option<String>,
}

impl FiniteMetricSpace {
    /// Build from a full row-major `n × n` table, validating the metric axioms.
    pub fn from_matrix(n: usize, dist: Vec<f64>) -> Result<Self> {
        if dist.len() != n * n {
            return Err(Error::malformed(format!(
                "distance table has {} entries, expected {}",
                dist.len(),
                n * n
            )));
        }
        let space = FiniteMetricSpace { n, metric: Metric::Dense(dist), label: None };
        space.validate()?;
        Ok(space)
    }

    /// Build from the strict upper triangle in row-major order.
    pub fn from_upper_triangle(n: usize, upper: &[f64]) -> Result<Self> {
        let expected = n * n.saturating_sub(1) / 2;
        if upper.len() != expected {
            return Err(Error::malformed(format!(
                "upper triangle has {} entries, expected {expected}",
                upper.len()
            )));
        }
        let mut dist = vec![0.0; n * n];
        let mut k = 0;
        for i in 0..n {
            for j in (i + 1)..n {
                dist[i * n + j] = upper[k];
                dist[j * n + i] = upper[k];
                k += 1;
            }
        }
        Self::from_matrix(n, dist)
    }

    /// Shortest-path metric of a weighted undirected graph. Unreachable pairs
    /// are at distance ∞.
    pub fn from_graph(n: usize, edges: &[(usize, usize, f64)]) -> Result<Self> {
        let mut weights = vec![f64::INFINITY; n * n];
        for i in 0..n {
            weights[i * n + i] = 0.0;
        }
        for &(a, b, w) in edges {
            if a >= n || b >= n {
                return Err(Error::malformed(format!("edge ({a},{b}) out of range for n={n}")));
            }
            if !(w >= 0.0) {
                return Err(Error::malformed(format!("edge ({a},{b}) has invalid weight {w}")));
            }
            if a != b && w < weights[a * n + b] {
                weights[a * n + b] = w;
                weights[b * n + a] = w;
            }
        }
        Self::from_matrix(n, shortest_paths(n, &weights))
    }

    /// The ℓ¹ integer grid with the given side lengths.
    pub fn grid(dims: &[usize]) -> Result<Self> {
        if dims.is_empty() || dims.contains(&0) {
            return Err(Error::malformed("grid dimensions must be nonempty and positive"));
        }
        let n = dims
            .iter()
            .try_fold(1usize, |acc, &d| acc.checked_mul(d))
            .ok_or_else(|| Error::malformed("grid too large"))?;
        Ok(FiniteMetricSpace { n, metric: Metric::Grid(dims.to_vec()), label: None })
    }

    /// The unit-step path `{0, …, n-1}`.
    pub fn path(n: usize) -> Result<Self> {
        Self::grid(&[n])
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Grid side lengths, if this space is an ℓ¹ grid.
    pub fn grid_dims(&self) -> Option<&[usize]> {
        match &self.metric {
            Metric::Grid(d) => Some(d),
            Metric::Dense(_) => None,
        }
    }

    /// Coordinates of a grid point.
    pub fn grid_coords(&self, mut i: usize) -> Option<Vec<usize>> {
        let dims = self.grid_dims()?;
        let mut c = vec![0; dims.len()];
        for (slot, &d) in c.iter_mut().zip(dims).rev() {
            *slot = i % d;
            i /= d;
        }
        Some(c)
    }

    #[inline]
    pub fn dist(&self, i: usize, j: usize) -> f64 {
        match &self.metric {
            Metric::Dense(d) => d[i * self.n + j],
            Metric::Grid(dims) => {
                let (mut a, mut b) = (i, j);
                let mut total = 0usize;
                for &d in dims.iter().rev() {
                    total += (a % d).abs_diff(b % d);
                    a /= d;
                    b /= d;
                }
                total as f64
            }
        }
    }

    pub fn check_index(&self, i: usize) -> Result<()> {
        if i < self.n {
            Ok(())
        } else {
            Err(Error::malformed(format!("point {i} out of range for a {}-point space", self.n)))
        }
    }

    /// Closed ball `{y : d(x,y) ≤ r}`, sorted.
    pub fn ball(&self, x: usize, r: f64) -> Vec<usize> {
        (0..self.n).filter(|&y| self.dist(x, y) <= r).collect()
    }

    /// Largest pairwise distance within `set` (0 for sets of size ≤ 1).
    pub fn diameter_of(&self, set: &[usize]) -> f64 {
        let mut best = 0.0f64;
        for (k, &a) in set.iter().enumerate() {
            for &b in &set[k + 1..] {
                best = best.max(self.dist(a, b));
            }
        }
        best
    }

    /// Diameter of the whole space.
    pub fn diameter(&self) -> f64 {
        if let Metric::Grid(dims) = &self.metric {
            return dims.iter().map(|d| (d - 1) as f64).sum();
        }
        par::max_range(self.n, |i| (0..self.n).map(|j| self.dist(i, j)).fold(0.0, f64::max)).max(0.0)
    }

    /// Largest finite distance (0 for a one-point space).
    pub fn max_finite_distance(&self) -> f64 {
        if let Metric::Grid(_) = &self.metric {
            return self.diameter();
        }
        par::max_range(self.n, |i| {
            (0..self.n).map(|j| self.dist(i, j)).filter(|d| d.is_finite()).fold(0.0, f64::max)
        })
        .max(0.0)
    }

    /// The largest realized pairwise distance strictly below `bound`.
    ///
    /// Zero is always realized, so any positive bound yields a value.
    pub fn largest_realized_below(&self, bound: f64) -> Option<f64> {
        if bound <= 0.0 {
            return None;
        }
        if let Metric::Grid(_) = &self.metric {
            let diam = self.diameter();
            let below = if bound.is_infinite() || bound > diam {
                diam
            } else {
                bound.ceil() - 1.0
            };
            return Some(below.max(0.0));
        }
        Some(
            par::max_range(self.n, |i| {
                (0..self.n).map(|j| self.dist(i, j)).filter(|&d| d < bound).fold(0.0, f64::max)
            })
            .max(0.0),
        )
    }

    /// Sorted distinct finite distances, including 0.
    pub fn realized_distances(&self) -> Vec<f64> {
        let mut all: Vec<f64> = if let Metric::Grid(_) = &self.metric {
            (0..=self.diameter() as usize).map(|d| d as f64).collect()
        } else {
            let mut v = Vec::new();
            for i in 0..self.n {
                for j in i..self.n {
                    let d = self.dist(i, j);
                    if d.is_finite() {
                        v.push(d);
                    }
                }
            }
            v
        };
        all.sort_by(f64::total_cmp);
        all.dedup();
        all
    }

    /// Minimum distance from `x` to a point of `set`; ∞ for an empty set.
    pub fn dist_to_set(&self, x: usize, set: &[usize]) -> f64 {
        set.iter().map(|&y| self.dist(x, y)).fold(f64::INFINITY, f64::min)
    }

    /// Distance from `x` to the complement of the sorted set `set`.
    pub fn dist_to_complement(&self, x: usize, set: &[usize]) -> f64 {
        let mut best = f64::INFINITY;
        let mut k = 0;
        for y in 0..self.n {
            while k < set.len() && set[k] < y {
                k += 1;
            }
            if k < set.len() && set[k] == y {
                continue;
            }
            best = best.min(self.dist(x, y));
        }
        best
    }

    /// Row-major full distance table.
    pub fn to_matrix(&self) -> Vec<f64> {
        let rows = par::map_range(self.n, |i| (0..self.n).map(|j| self.dist(i, j)).collect::<Vec<_>>());
        rows.concat()
    }

    /// The metric axioms: zero diagonal, positivity, symmetry, triangle
    /// inequality whenever both right-hand terms are finite.
    pub fn validate(&self) -> Result<()> {
        if let Metric::Grid(_) = &self.metric {
            return Ok(());
        }
        let n = self.n;
        for i in 0..n {
            if self.dist(i, i) != 0.0 {
                return Err(Error::malformed(format!("d({i},{i}) must be 0")));
            }
            for j in 0..n {
                let d = self.dist(i, j);
                if d.is_nan() || d < 0.0 {
                    return Err(Error::malformed(format!("d({i},{j}) = {d} is not a distance")));
                }
                if d != self.dist(j, i) {
                    return Err(Error::malformed(format!("d({i},{j}) != d({j},{i})")));
                }
            }
        }
        let violations = par::map_range(n, |i| {
            for j in 0..n {
                let dij = self.dist(i, j);
                if !dij.is_finite() {
                    continue;
                }
                for k in 0..n {
                    let djk = self.dist(j, k);
                    if djk.is_finite() && self.dist(i, k) > dij + djk {
                        return Some((i, j, k));
                    }
                }
            }
            None
        });
        if let Some((i, j, k)) = violations.into_iter().flatten().next() {
            return Err(Error::malformed(format!(
                "triangle inequality fails: d({i},{k}) > d({i},{j}) + d({j},{k})"
            )));
        }
        Ok(())
    }

    /// Subspace on the given sorted point list, reindexed `0..len`.
    pub fn subspace(&self, points: &[usize]) -> Result<Self> {
        for &p in points {
            self.check_index(p)?;
        }
        let m = points.len();
        let mut dist = vec![0.0; m * m];
        for (a, &p) in points.iter().enumerate() {
            for (b, &q) in points.iter().enumerate() {
                dist[a * m + b] = self.dist(p, q);
            }
        }
        Ok(FiniteMetricSpace { n: m, metric: Metric::Dense(dist), label: None })
    }
}

/// All-pairs shortest paths over a dense nonnegative weight table
/// (`INFINITY` = no edge). Dijkstra from every source, rows in parallel.
pub fn shortest_paths(n: usize, weights: &[f64]) -> Vec<f64> {
    let rows = par::map_range(n, |src| {
        let mut dist = vec![f64::INFINITY; n];
        let mut done = vec![false; n];
        dist[src] = 0.0;
        for _ in 0..n {
            let mut u = usize::MAX;
            let mut best = f64::INFINITY;
            for v in 0..n {
                if !done[v] && dist[v] < best {
                    best = dist[v];
                    u = v;
                }
            }
            if u == usize::MAX {
                break;
            }
            done[u] = true;
            for v in 0..n {
                let w = weights[u * n + v];
                if !done[v] && w.is_finite() && best + w < dist[v] {
                    dist[v] = best + w;
                }
            }
        }
        dist
    });
    rows.concat()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_distances_are_l1() {
        let g = FiniteMetricSpace::grid(&[3, 4]).unwrap();
        assert_eq!(g.len(), 12);
        // (0,0) -> (2,3)
        assert_eq!(g.dist(0, 11), 5.0);
        assert_eq!(g.grid_coords(7), Some(vec![1, 3]));
        assert_eq!(g.diameter(), 5.0);
    }

    #[test]
    fn graph_metric_uses_shortest_paths() {
        let s = FiniteMetricSpace::from_graph(4, &[(0, 1, 1.0), (1, 2, 2.0), (0, 2, 5.0)]).unwrap();
        assert_eq!(s.dist(0, 2), 3.0);
        assert_eq!(s.dist(0, 3), f64::INFINITY);
        assert_eq!(s.max_finite_distance(), 3.0);
    }

    #[test]
    fn triangle_violation_is_rejected() {
        let err = FiniteMetricSpace::from_upper_triangle(3, &[1.0, 5.0, 1.0]).unwrap_err();
        assert!(matches!(err, Error::Malformed(_)));
    }

    #[test]
    fn infinite_sides_skip_triangle_check() {
        // d(0,2) is unconstrained because d(1,2) = ∞.
        let s = FiniteMetricSpace::from_upper_triangle(3, &[1.0, f64::INFINITY, f64::INFINITY]).unwrap();
        assert_eq!(s.dist(0, 2), f64::INFINITY);
    }

    #[test]
    fn largest_realized_below_on_grid_and_dense() {
        let p = FiniteMetricSpace::path(11).unwrap();
        assert_eq!(p.largest_realized_below(3.0), Some(2.0));
        assert_eq!(p.largest_realized_below(2.5), Some(2.0));
        assert_eq!(p.largest_realized_below(f64::INFINITY), Some(10.0));
        let dense = p.subspace(&(0..11).collect::<Vec<_>>()).unwrap();
        assert_eq!(dense.largest_realized_below(3.0), Some(2.0));
        assert_eq!(dense.largest_realized_below(0.0), None);
    }

    #[test]
    fn complement_distance() {
        let p = FiniteMetricSpace::path(10).unwrap();
        assert_eq!(p.dist_to_complement(2, &[0, 1, 2, 3, 4]), 3.0);
        assert_eq!(p.dist_to_complement(2, &(0..10).collect::<Vec<_>>()), f64::INFINITY);
    }
}
