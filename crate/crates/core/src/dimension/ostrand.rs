use super::{check_oracle_output, kolmogorov_split, CoarsenOracle, ColoredFamilies, Separation};
use crate::chain::BasisChain;
use crate::cover::{fitting_radius, mesh, multiplicity, refines, star_cover, Cover};
use crate::disjointness::discreteness_collision;
use crate::error::{Error, Result};
use crate::metrization::{chain_metric, ChainMetricReport, MAX_LEVEL};
use crate::space::FiniteMetricSpace;

/// Colored families to a multiplicity-bounded coarsening.
///
/// Requires every family to be discrete against `st(U, U)` and the families
/// to cover. Returns `W = st(⋃V, U)`, re-verified to coarsen `U` with
/// multiplicity at most the number of families.
pub fn ostrand_forward(x: &FiniteMetricSpace, u: &Cover, v: &ColoredFamilies) -> Result<Cover> {
    u.check_in(x)?;
    u.check_covers(x.len()).map_err(|e| Error::precondition(format!("U: {e}")))?;
    let flat = v.flatten();
    flat.check_in(x)?;
    flat.check_covers(x.len()).map_err(|e| Error::precondition(format!("colored families: {e}")))?;
    let uu = star_cover(u, u);
    for (i, fam) in v.families.iter().enumerate() {
        if let Some((a, b)) = discreteness_collision(fam, &uu) {
            return Err(Error::precondition(format!(
                "family {i} is not st(U,U)-discrete: members {a} and {b} collide"
            )));
        }
    }
    let w = star_cover(&flat, u);
    let k = multiplicity(&w);
    if k > v.families.len() {
        return Err(Error::invariant(format!(
            "ostrand_forward produced multiplicity {k} > {} families",
            v.families.len()
        )));
    }
    if !refines(u, &w) {
        return Err(Error::invariant("ostrand_forward result does not coarsen U"));
    }
    Ok(w)
}

/// Tower of covers `U_0 = U`, `U_k = coarsen(st(U_{k-1}, U_{k-1}))` for
/// `1 ≤ k ≤ depth`. Every level past the first has multiplicity ≤ n+1, and
/// `U_k` coarsens `st(U_{k-1}, U_{k-2})`.
pub fn basis_tower(
    x: &FiniteMetricSpace,
    u: &Cover,
    oracle: &dyn CoarsenOracle,
    depth: usize,
    n: usize,
) -> Result<BasisChain> {
    if depth < 2 {
        return Err(Error::precondition(format!("tower depth {depth} < 2")));
    }
    u.check_in(x)?;
    u.check_covers(x.len())?;
    let mut levels = vec![u.clone()];
    for level in 1..=depth {
        let prev = &levels[level - 1];
        let input = star_cover(prev, prev);
        let out = oracle.coarsen(x, &input)?;
        check_oracle_output(x, &input, &out, n, level)?;
        levels.push(out);
    }
    let chain = BasisChain::unchecked(x.len(), levels);
    chain.validate()?;
    Ok(chain)
}

/// Output of the multiplicity-to-coloring direction, with the intermediate
/// objects kept for inspection.
#[derive(Debug, Clone)]
pub struct BackwardResult {
    pub families: ColoredFamilies,
    pub chain: BasisChain,
    pub metric: ChainMetricReport,
    /// Chain level that was split.
    pub level: usize,
    /// Separation used in the chain metric.
    pub chain_scale: f64,
    pub constant: f64,
}

/// Separation in the chain metric. Members of `U_0` have chain diameter ≤ 1,
/// so families more than 2 apart are `U`-discrete back in `X`.
const CHAIN_SCALE: f64 = 3.0;

/// Multiplicity oracle to `U`-discrete colored families.
///
/// Builds the tower until it reaches `{X}` or stops changing, metrizes it,
/// splits the first coarsened level with enough chain-metric Lebesgue number,
/// and verifies the result against `U` in the original space.
pub fn ostrand_backward(
    x: &FiniteMetricSpace,
    u: &Cover,
    oracle: &dyn CoarsenOracle,
    n: usize,
) -> Result<BackwardResult> {
    u.check_in(x)?;
    u.check_covers(x.len())?;
    let whole = Cover::whole(x.len());
    let mut depth = 2;
    let chain = loop {
        let chain = basis_tower(x, u, oracle, depth, n)?;
        let lv = chain.levels();
        let stable = lv[depth] == lv[depth - 1] && lv[depth - 1] == lv[depth - 2];
        if lv[depth] == whole || stable || depth >= MAX_LEVEL.min(24) {
            break chain;
        }
        depth += 1;
    };
    let metric = chain_metric(&chain)?;
    let needed = super::kolmogorov_constants(n)[0] * CHAIN_SCALE;
    let mut chosen = None;
    for level in 1..chain.len() {
        let leb = fitting_radius(&metric.metric, &chain.levels()[level])?;
        if leb >= needed {
            chosen = Some(level);
            break;
        }
    }
    let level = chosen.ok_or_else(|| {
        Error::precondition(format!(
            "no tower level reaches chain-metric Lebesgue number {needed} within {} levels",
            chain.len()
        ))
    })?;
    let split = kolmogorov_split(&metric.metric, &chain.levels()[level], CHAIN_SCALE, n)?;
    let families = ColoredFamilies {
        families: split.families.families,
        separation: Separation::Discrete(u.clone()),
        mesh_bound: mesh(x, &chain.levels()[level]),
    };
    families
        .verify(x)
        .map_err(|e| Error::invariant(format!("ostrand_backward output failed verification: {e}")))?;
    Ok(BackwardResult { families, chain, metric, level, chain_scale: CHAIN_SCALE, constant: split.constant })
}
