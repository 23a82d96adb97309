//! Star-closure of cover lists and chain metrics.
//!
//! A basis chain `U_0, …, U_k` is realized as the shortest-path metric with
//! edge weight `2^j` between points that first share a member at level `j`.
//! The report records, per level, how the chain levels and the metric balls
//! refine each other.

use crate::chain::BasisChain;
use crate::cover::{ball_cover, is_subset, mesh, refines, star_cover, Cover};
use crate::error::{Error, Result};
use crate::space::{shortest_paths, FiniteMetricSpace};

/// Highest level whose weight `2^k` and sums of such weights stay exact.
pub const MAX_LEVEL: usize = 52;

#[derive(Debug, Clone, PartialEq)]
pub struct LevelBound {
    pub level: usize,
    /// Largest chain-metric diameter of a member of `U_k`; `U_k` refines the
    /// ball cover of this radius.
    pub diameter: f64,
    /// `2^k`.
    pub radius: f64,
    /// Smallest `c` with the `2^k`-ball cover refining `U_{k+c}`, if the chain
    /// is long enough to contain one.
    pub offset: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChainMetricReport {
    pub metric: FiniteMetricSpace,
    pub levels: Vec<LevelBound>,
}

impl ChainMetricReport {
    /// Re-check both refinement facts at the reported constants.
    pub fn verify(&self, chain: &BasisChain) -> Result<()> {
        for b in &self.levels {
            let u = &chain.levels()[b.level];
            if !refines(u, &ball_cover(&self.metric, b.diameter)?) {
                return Err(Error::invariant(format!("U_{} does not refine {}-balls", b.level, b.diameter)));
            }
            if let Some(c) = b.offset {
                let target = &chain.levels()[b.level + c];
                if !refines(&ball_cover(&self.metric, b.radius)?, target) {
                    return Err(Error::invariant(format!(
                        "{}-balls do not refine U_{}",
                        b.radius,
                        b.level + c
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Close a list of covers of `0..n` into a basis chain.
///
/// Level 0 is the first family plus singletons for points it misses. Level
/// `k` is `F_k` together with every member of `U_{k-1} ∪ st(U_{k-1}, U_{k-1})`
/// not already inside a member of `F_k`. Since stars are monotone, one pass
/// gives star closure, and an already valid chain comes back unchanged.
pub fn close_under_stars(n: usize, families: &[Cover]) -> Result<BasisChain> {
    let Some(first) = families.first() else {
        return Err(Error::malformed("close_under_stars needs at least one family"));
    };
    for f in families {
        if f.extent() > n {
            return Err(Error::malformed(format!("family mentions point {} outside 0..{n}", f.extent() - 1)));
        }
    }
    let mut support = vec![false; n];
    for &p in first.support().iter() {
        support[p] = true;
    }
    let missing: Vec<Vec<usize>> = (0..n).filter(|&p| !support[p]).map(|p| vec![p]).collect();
    let mut levels = vec![first.union(&Cover::canonical(missing))];
    for f in &families[1..] {
        let prev = levels.last().expect("nonempty");
        let candidates = prev.union(&star_cover(prev, prev));
        let mut members = f.members().to_vec();
        for m in candidates.members() {
            if !f.members().iter().any(|o| is_subset(m, o)) {
                members.push(m.clone());
            }
        }
        levels.push(Cover::canonical(members));
    }
    let chain = BasisChain::unchecked(n, levels);
    chain.validate()?;
    Ok(chain)
}

/// Chain metric of a valid basis chain, with its sandwich report.
pub fn chain_metric(chain: &BasisChain) -> Result<ChainMetricReport> {
    chain.validate()?;
    if chain.len() > MAX_LEVEL + 1 {
        return Err(Error::precondition(format!(
            "chain has {} levels; weights are exact only up to level {MAX_LEVEL}",
            chain.len()
        )));
    }
    let n = chain.n_points();
    let mut weights = vec![f64::INFINITY; n * n];
    for i in 0..n {
        weights[i * n + i] = 0.0;
    }
    for (k, level) in chain.levels().iter().enumerate() {
        let w = (k as f64).exp2();
        for m in level.members() {
            for (a, &p) in m.iter().enumerate() {
                for &q in &m[a + 1..] {
                    if weights[p * n + q] > w {
                        weights[p * n + q] = w;
                        weights[q * n + p] = w;
                    }
                }
            }
        }
    }
    let metric = FiniteMetricSpace::from_matrix(n, shortest_paths(n, &weights))?;
    basis_equivalence_report(chain, metric)
}

/// For each level, the two refinement facts relating `U_k` to metric balls.
pub fn basis_equivalence_report(chain: &BasisChain, metric: FiniteMetricSpace) -> Result<ChainMetricReport> {
    if metric.len() != chain.n_points() {
        return Err(Error::malformed("metric and chain have different point counts"));
    }
    let k_max = chain.len();
    let mut levels = Vec::with_capacity(k_max);
    for (k, u) in chain.levels().iter().enumerate() {
        let diameter = mesh(&metric, u);
        let radius = (k as f64).exp2();
        let balls = ball_cover(&metric, radius)?;
        let offset = (k..k_max).find(|&t| refines(&balls, &chain.levels()[t])).map(|t| t - k);
        levels.push(LevelBound { level: k, diameter, radius, offset });
    }
    let report = ChainMetricReport { metric, levels };
    report.verify(chain)?;
    Ok(report)
}
