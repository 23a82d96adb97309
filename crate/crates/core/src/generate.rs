//! Deterministic space generators.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::space::FiniteMetricSpace;

/// Attempts before a connected random graph is declared infeasible.
const MAX_RESAMPLES: usize = 10_000;

#[derive(Debug, Clone, PartialEq)]
pub struct RandomGraphParams {
    pub n: usize,
    pub edge_probability: f64,
    pub min_weight: u32,
    pub max_weight: u32,
}

impl RandomGraphParams {
    pub fn new(n: usize) -> Self {
        RandomGraphParams { n, edge_probability: 0.3, min_weight: 1, max_weight: 5 }
    }

    fn check(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::malformed("random graph needs at least one point"));
        }
        if !(0.0..=1.0).contains(&self.edge_probability) || (self.n > 1 && self.edge_probability == 0.0) {
            return Err(Error::malformed(format!("edge probability {} cannot give a connected graph", self.edge_probability)));
        }
        if self.min_weight == 0 || self.min_weight > self.max_weight {
            return Err(Error::malformed(format!("weight range [{}, {}] is empty or contains 0", self.min_weight, self.max_weight)));
        }
        Ok(())
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn path(n: usize) -> Result<FiniteMetricSpace> {
    Ok(FiniteMetricSpace::path(n)?.with_label(format!("path-{n}")))
}

pub fn grid(dims: &[usize]) -> Result<FiniteMetricSpace> {
    let name: Vec<String> = dims.iter().map(usize::to_string).collect();
    Ok(FiniteMetricSpace::grid(dims)?.with_label(format!("grid-{}", name.join("x"))))
}

/// Edge list of a connected Erdős–Rényi graph with integer weights, drawn by
/// rejection from `rng`.
pub fn random_edges(p: &RandomGraphParams, rng: &mut impl Rng) -> Result<Vec<(usize, usize, f64)>> {
    p.check()?;
    for _ in 0..MAX_RESAMPLES {
        let mut edges = Vec::new();
        for i in 0..p.n {
            for j in (i + 1)..p.n {
                if rng.gen_bool(p.edge_probability) {
                    edges.push((i, j, f64::from(rng.gen_range(p.min_weight..=p.max_weight))));
                }
            }
        }
        if connected(p.n, &edges) {
            return Ok(edges);
        }
    }
    Err(Error::Infeasible(format!("no connected graph after {MAX_RESAMPLES} draws")))
}

pub fn random_graph(p: &RandomGraphParams, seed: u64) -> Result<FiniteMetricSpace> {
    let edges = random_edges(p, &mut rng(seed))?;
    Ok(FiniteMetricSpace::from_graph(p.n, &edges)?.with_label(format!("random-graph-{}-seed-{seed}", p.n)))
}

fn connected(n: usize, edges: &[(usize, usize, f64)]) -> bool {
    let mut adj = vec![Vec::new(); n];
    for &(a, b, _) in edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(v) = stack.pop() {
        for &w in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generators() {
        assert_eq!(path(100).unwrap().len(), 100);
        assert_eq!(grid(&[60, 60]).unwrap().len(), 3600);
        assert!(path(0).is_err());
        assert!(random_graph(&RandomGraphParams::new(0), 1).is_err());
    }

    #[test]
    fn random_graph_is_seeded_and_connected() {
        let p = RandomGraphParams::new(12);
        let a = random_graph(&p, 7).unwrap();
        let b = random_graph(&p, 7).unwrap();
        assert_eq!(a.to_matrix(), b.to_matrix());
        assert!(a.to_matrix().iter().all(|d| d.is_finite()));
        assert_ne!(a.to_matrix(), random_graph(&p, 8).unwrap().to_matrix());
    }
}
