//! Multiplicity-bounded cover with a large Lebesgue number to `n+1`
//! `r`-disjoint families.
//!
//! For each member `M` let `f_M(x) = min(d(x, X∖M), cap)` where `cap` is the
//! smallest over points of the deepest membership. Sort the depths at `x`
//! decreasingly, `d_1 ≥ … ≥ d_{n+1} ≥ d_{n+2} = 0`. The gaps
//! `g_k = d_k − d_{k+1}` sum to `cap`, so some gap is at least
//! `cap / (n+1)`. A point goes to family `k` under its top-`k` member set for
//! the smallest `k` whose gap reaches the threshold `τ`. Each `f_M` is
//! 1-Lipschitz, so two points closer than `r` with gap ≥ `2r` at the same
//! `k` have the same top-`k` set. Hence `τ = 2r` separates, which needs
//! `cap ≥ 2(n+1)·r`, i.e. `c(n) = 2(n+1)`.

use super::{ColoredFamilies, Separation};
use crate::cover::{fitting_radius, intersect_sorted, mesh, min_depth, multiplicity, Cover};
use crate::error::{Error, Result};
use crate::par;
use crate::space::FiniteMetricSpace;
use std::collections::BTreeMap;

/// Separation constants tried in order. The first is the proved one; later
/// rungs only widen the gap threshold.
pub fn kolmogorov_constants(n: usize) -> [f64; 3] {
    let k = n as f64;
    [2.0 * (k + 1.0), 2.0 * (k + 2.0), 4.0 * (k + 2.0)]
}

#[derive(Debug, Clone, PartialEq)]
pub struct KolmogorovSplit {
    pub families: ColoredFamilies,
    /// The constant `c` with which the result verified.
    pub constant: f64,
}

pub fn kolmogorov_split(x: &FiniteMetricSpace, u: &Cover, r: f64, n: usize) -> Result<KolmogorovSplit> {
    if !(r >= 0.0) || r.is_infinite() {
        return Err(Error::malformed(format!("scale {r} must be finite and non-negative")));
    }
    u.check_in(x)?;
    u.check_covers(x.len())?;
    let mult = multiplicity(u);
    if mult > n + 1 {
        return Err(Error::precondition(format!("multiplicity {mult} exceeds n+1 = {}", n + 1)));
    }
    let leb = fitting_radius(x, u)?;
    let constants = kolmogorov_constants(n);
    if leb < constants[0] * r {
        return Err(Error::precondition(format!(
            "Lebesgue number {leb} is below c(n)·r = {}·{r}",
            constants[0]
        )));
    }
    let mesh_u = mesh(x, u);
    let mut last_err = None;
    for &c in constants.iter().filter(|&&c| leb >= c * r) {
        let families = split_with_threshold(x, u, n, c, r);
        let colored = ColoredFamilies { families, separation: Separation::Metric(r), mesh_bound: mesh_u };
        match colored.verify(x) {
            Ok(()) => return Ok(KolmogorovSplit { families: colored, constant: c }),
            Err(e) => last_err = Some(e),
        }
    }
    Err(Error::invariant(format!(
        "kolmogorov_split failed verification at every admissible constant: {}",
        last_err.map_or_else(|| "no admissible constant".into(), |e| e.to_string())
    )))
}

fn split_with_threshold(x: &FiniteMetricSpace, u: &Cover, n: usize, c: f64, r: f64) -> Vec<Cover> {
    let depth = min_depth(x, u);
    let cap = if depth.is_finite() { depth } else { (c * r).max(1.0) };
    let tau = c * r / (n as f64 + 1.0);
    let inc = u.incidence(x.len());
    // (k, top-k member indices) for every point.
    let keys = par::map_range(x.len(), |p| {
        let mut depths: Vec<(f64, usize)> = inc[p]
            .iter()
            .map(|&m| (x.dist_to_complement(p, &u.members()[m]).min(cap), m))
            .collect();
        depths.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
        for k in 1..=depths.len() {
            let next = depths.get(k).map_or(0.0, |d| d.0);
            let gap = depths[k - 1].0 - next;
            if gap > 0.0 && gap >= tau {
                let mut top: Vec<usize> = depths[..k].iter().map(|d| d.1).collect();
                top.sort_unstable();
                return Some((k, top));
            }
        }
        None
    });
    let mut pieces: BTreeMap<(usize, Vec<usize>), Vec<usize>> = BTreeMap::new();
    for (p, key) in keys.into_iter().enumerate() {
        // Unassigned points cannot occur when cap ≥ (n+1)·τ; verification
        // reports them as uncovered if they do.
        if let Some(key) = key {
            pieces.entry(key).or_default().push(p);
        }
    }
    let mut families = vec![Vec::new(); n + 1];
    for ((k, top), pts) in pieces {
        // The piece lies in every member of its top set.
        debug_assert!(top.iter().all(|&m| intersect_sorted(&pts, &u.members()[m]).len() == pts.len()));
        families[k - 1].push(pts);
    }
    families.into_iter().map(Cover::canonical).collect()
}
