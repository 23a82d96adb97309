//! Asymptotic-dimension certificates and both directions of the Ostrand
//! characterization.

mod brick;
mod finitistic;
mod kolmogorov;
mod ostrand;

pub use brick::{brick_cover, brick_lebesgue_bound, BrickOracle};
pub use finitistic::{finitistic_profile, FinitisticProfile};
pub use kolmogorov::{kolmogorov_constants, kolmogorov_split, KolmogorovSplit};
pub use ostrand::{basis_tower, ostrand_backward, ostrand_forward, BackwardResult};

use crate::cover::{is_subset, mesh, multiplicity, refines, Cover};
use crate::disjointness::{discreteness_collision, min_gap};
use crate::error::{Error, Result};
use crate::space::FiniteMetricSpace;

/// How the families of a coloring are separated.
#[derive(Debug, Clone, PartialEq)]
pub enum Separation {
    /// Each family is `r`-disjoint: `min_gap ≥ r`.
    Metric(f64),
    /// Each family is discrete against this reference cover.
    Discrete(Cover),
}

/// `n+1` families whose union covers the space, each separated.
#[derive(Debug, Clone, PartialEq)]
pub struct ColoredFamilies {
    pub families: Vec<Cover>,
    pub separation: Separation,
    pub mesh_bound: f64,
}

impl ColoredFamilies {
    /// All members of all families as one canonical family.
    pub fn flatten(&self) -> Cover {
        self.families.iter().fold(Cover::empty(), |acc, f| acc.union(f))
    }

    /// Re-run every invariant from the definitions.
    pub fn verify(&self, x: &FiniteMetricSpace) -> Result<()> {
        let all = self.flatten();
        all.check_in(x)?;
        all.check_covers(x.len())?;
        for (i, fam) in self.families.iter().enumerate() {
            match &self.separation {
                Separation::Metric(r) => {
                    let gap = min_gap(x, fam);
                    if gap.min_gap < *r {
                        return Err(Error::invariant(format!(
                            "family {i} has gap {} < {r} at members {:?}",
                            gap.min_gap, gap.witness
                        )));
                    }
                }
                Separation::Discrete(w) => {
                    if let Some((a, b)) = discreteness_collision(fam, w) {
                        return Err(Error::invariant(format!(
                            "family {i} is not discrete: stars of members {a} and {b} meet"
                        )));
                    }
                }
            }
        }
        let m = mesh(x, &all);
        if m > self.mesh_bound {
            return Err(Error::invariant(format!("mesh {m} exceeds bound {}", self.mesh_bound)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Witness {
    MultCover(Cover),
    Colored(ColoredFamilies),
}

/// A claim "this cover admits a bounded coarsening of multiplicity ≤ n+1",
/// or its Ostrand counterpart, checked from the definitions on demand.
#[derive(Debug, Clone, PartialEq)]
pub struct AsdimCertificate {
    pub base_cover: Cover,
    pub n: usize,
    pub mesh_bound: f64,
    pub witness: Witness,
}

impl AsdimCertificate {
    pub fn verify(&self, x: &FiniteMetricSpace) -> Result<()> {
        match &self.witness {
            Witness::MultCover(w) => {
                w.check_in(x)?;
                w.check_covers(x.len())?;
                let k = multiplicity(w);
                if k > self.n + 1 {
                    return Err(Error::invariant(format!("multiplicity {k} exceeds {}", self.n + 1)));
                }
                if !refines(&self.base_cover, w) {
                    return Err(Error::invariant("witness does not coarsen the base cover"));
                }
                let m = mesh(x, w);
                if m > self.mesh_bound {
                    return Err(Error::invariant(format!("mesh {m} exceeds bound {}", self.mesh_bound)));
                }
                Ok(())
            }
            Witness::Colored(c) => {
                if c.families.len() > self.n + 1 {
                    return Err(Error::invariant(format!(
                        "{} families exceed n+1 = {}",
                        c.families.len(),
                        self.n + 1
                    )));
                }
                if c.mesh_bound > self.mesh_bound {
                    return Err(Error::invariant("coloring mesh bound exceeds certificate bound"));
                }
                c.verify(x)
            }
        }
    }
}

/// Supplies, for any cover, a coarsening of bounded multiplicity.
pub trait CoarsenOracle {
    fn coarsen(&self, x: &FiniteMetricSpace, cover: &Cover) -> Result<Cover>;
}

impl<F> CoarsenOracle for F
where
    F: Fn(&FiniteMetricSpace, &Cover) -> Result<Cover>,
{
    fn coarsen(&self, x: &FiniteMetricSpace, cover: &Cover) -> Result<Cover> {
        self(x, cover)
    }
}

/// Always answers `{X}`.
#[derive(Debug, Clone, Copy, Default)]
pub struct WholeSpaceOracle;

impl CoarsenOracle for WholeSpaceOracle {
    fn coarsen(&self, x: &FiniteMetricSpace, _cover: &Cover) -> Result<Cover> {
        Ok(Cover::whole(x.len()))
    }
}

/// Returns its input unchanged; valid only on covers that already have
/// small multiplicity.
#[derive(Debug, Clone, Copy, Default)]
pub struct IdentityOracle;

impl CoarsenOracle for IdentityOracle {
    fn coarsen(&self, _x: &FiniteMetricSpace, cover: &Cover) -> Result<Cover> {
        Ok(cover.clone())
    }
}

/// Oracle contract: `out` covers, coarsens `input`, multiplicity ≤ n+1.
pub(crate) fn check_oracle_output(
    x: &FiniteMetricSpace,
    input: &Cover,
    out: &Cover,
    n: usize,
    level: usize,
) -> Result<()> {
    let fail = |reason: String| Error::OracleContract { level, reason };
    if out.extent() > x.len() || !out.covers(x.len()) {
        return Err(fail("output is not a cover of the space".into()));
    }
    let k = multiplicity(out);
    if k > n + 1 {
        return Err(fail(format!("output multiplicity {k} exceeds {}", n + 1)));
    }
    if let Some(pos) = input.members().iter().position(|m| !out.members().iter().any(|o| is_subset(m, o))) {
        return Err(fail(format!("input member {pos} is not inside any output member")));
    }
    Ok(())
}
