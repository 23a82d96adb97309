//! Maps between finite spaces, coarsely n-to-1 certificates and the
//! pushforward constructions that consume them.

mod basis;
mod certificate;
mod push;
mod star_condition;

pub use basis::pushforward_basis;
pub use certificate::{
    certify_n_to_1, discrete_refinement, net_subspace, BallDecomposition, NTo1Certificate, NetSubspace,
};
pub use push::{
    bounded_geometry_push, pullback_asdim, pushforward_asdim, pushforward_weak_paracompact, BoundedGeometryPush,
    PullbackAsdim, PushforwardAsdim, WeakParacompactPush,
};
pub use star_condition::{star_condition_check, StarConditionMode, StarConditionReport};

use crate::error::{Error, Result};
use crate::par;
use crate::space::FiniteMetricSpace;

/// A total function between two finite spaces, as a lookup table.
#[derive(Debug, Clone, PartialEq)]
pub struct CoarseMap {
    source: FiniteMetricSpace,
    target: FiniteMetricSpace,
    table: Vec<usize>,
    preimages: Vec<Vec<usize>>,
}

impl CoarseMap {
    pub fn new(source: FiniteMetricSpace, target: FiniteMetricSpace, table: Vec<usize>) -> Result<Self> {
        if table.len() != source.len() {
            return Err(Error::malformed(format!(
                "map table has {} entries for a {}-point source",
                table.len(),
                source.len()
            )));
        }
        if let Some((i, &y)) = table.iter().enumerate().find(|(_, &y)| y >= target.len()) {
            return Err(Error::malformed(format!("map sends {i} to {y}, outside the {}-point target", target.len())));
        }
        let mut preimages = vec![Vec::new(); target.len()];
        for (x, &y) in table.iter().enumerate() {
            preimages[y].push(x);
        }
        Ok(CoarseMap { source, target, table, preimages })
    }

    pub fn identity(space: FiniteMetricSpace) -> Self {
        let table = (0..space.len()).collect();
        Self::new(space.clone(), space, table).expect("identity table is valid")
    }

    pub fn source(&self) -> &FiniteMetricSpace {
        &self.source
    }

    pub fn target(&self) -> &FiniteMetricSpace {
        &self.target
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.table[x]
    }

    /// `f⁻¹(B)`, sorted.
    pub fn preimage(&self, set: &[usize]) -> Vec<usize> {
        let mut out: Vec<usize> = set.iter().flat_map(|&y| self.preimages[y].iter().copied()).collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// `f(A)`, sorted.
    pub fn image(&self, set: &[usize]) -> Vec<usize> {
        let mut out: Vec<usize> = set.iter().map(|&x| self.table[x]).collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn is_surjective(&self) -> bool {
        self.preimages.iter().all(|p| !p.is_empty())
    }
}

/// Upper (and optionally lower) control functions of a map at given scales.
#[derive(Debug, Clone, PartialEq)]
pub struct DilationProfile {
    /// `(r, ρ(r))` with `ρ(r) = max { d_Y(f x, f y) : d_X(x,y) ≤ r }`.
    pub samples: Vec<(f64, f64)>,
    /// `(r, ρ₋(r))` with `ρ₋(r) = min { d_Y(f x, f y) : d_X(x,y) ≥ r }`
    /// (∞ when no pair is that far apart).
    pub lower: Option<Vec<(f64, f64)>>,
}

pub fn dilation_profile(f: &CoarseMap, scales: &[f64], with_lower: bool) -> DilationProfile {
    let x = f.source();
    let y = f.target();
    let n = x.len();
    let pairs = |r: f64, upper: bool| -> f64 {
        let rows = par::map_range(n, |i| {
            let mut acc = if upper { 0.0f64 } else { f64::INFINITY };
            for j in 0..n {
                let d = x.dist(i, j);
                let e = y.dist(f.apply(i), f.apply(j));
                if upper && d <= r {
                    acc = acc.max(e);
                } else if !upper && d >= r {
                    acc = acc.min(e);
                }
            }
            acc
        });
        if upper {
            rows.into_iter().fold(0.0, f64::max)
        } else {
            rows.into_iter().fold(f64::INFINITY, f64::min)
        }
    };
    let samples = scales.iter().map(|&r| (r, pairs(r, true))).collect();
    let lower = with_lower.then(|| scales.iter().map(|&r| (r, pairs(r, false))).collect());
    DilationProfile { samples, lower }
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;

    /// `x ↦ |x|` from `{-m..m}` onto `{0..m}`.
    pub fn abs_map(m: usize) -> CoarseMap {
        let source = FiniteMetricSpace::path(2 * m + 1).unwrap();
        let target = FiniteMetricSpace::path(m + 1).unwrap();
        let table = (0..=2 * m).map(|i| i.abs_diff(m)).collect();
        CoarseMap::new(source, target, table).unwrap()
    }

    pub fn constant_map(n: usize, target_len: usize, value: usize) -> CoarseMap {
        let source = FiniteMetricSpace::path(n).unwrap();
        let target = FiniteMetricSpace::path(target_len).unwrap();
        CoarseMap::new(source, target, vec![value; n]).unwrap()
    }
}
