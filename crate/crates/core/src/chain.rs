//! Nested, star-closed sequences of covers.

use crate::cover::{refines, star_cover, Cover};
use crate::error::{Error, Result};

/// A finite large-scale basis: covers `U_0, …, U_k` of one `n`-point space
/// with `U_i` refining `U_{i+1}` and `st(U_i, U_j)` refining `U_{max(i,j)+1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisChain {
    n: usize,
    levels: Vec<Cover>,
}

/// The first way a candidate chain fails to be a basis chain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ChainDefect {
    Empty,
    NotACover { level: usize, point: usize },
    NotNested { level: usize },
    NotStarClosed { i: usize, j: usize },
}

impl std::fmt::Display for ChainDefect {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ChainDefect::Empty => write!(f, "chain has no levels"),
            ChainDefect::NotACover { level, point } => write!(f, "level {level} misses point {point}"),
            ChainDefect::NotNested { level } => write!(f, "level {level} does not refine level {}", level + 1),
            ChainDefect::NotStarClosed { i, j } => {
                write!(f, "st(U_{i}, U_{j}) does not refine U_{}", (*i).max(*j) + 1)
            }
        }
    }
}

impl BasisChain {
    /// Validated constructor.
    pub fn new(n: usize, levels: Vec<Cover>) -> Result<Self> {
        let chain = BasisChain { n, levels };
        if let Some(defect) = chain.defect() {
            return Err(Error::precondition(format!("invalid basis chain: {defect}")));
        }
        Ok(chain)
    }

    pub(crate) fn unchecked(n: usize, levels: Vec<Cover>) -> Self {
        BasisChain { n, levels }
    }

    pub fn n_points(&self) -> usize {
        self.n
    }

    pub fn levels(&self) -> &[Cover] {
        &self.levels
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    /// First defect found, scanning coverage, nestedness, then star closure.
    pub fn defect(&self) -> Option<ChainDefect> {
        if self.levels.is_empty() {
            return Some(ChainDefect::Empty);
        }
        for (level, u) in self.levels.iter().enumerate() {
            if let Err(Error::NotACover { point }) = u.check_covers(self.n) {
                return Some(ChainDefect::NotACover { level, point });
            }
            if u.extent() > self.n {
                return Some(ChainDefect::NotACover { level, point: u.extent() - 1 });
            }
        }
        for level in 0..self.levels.len() - 1 {
            if !refines(&self.levels[level], &self.levels[level + 1]) {
                return Some(ChainDefect::NotNested { level });
            }
        }
        let k = self.levels.len();
        for i in 0..k {
            for j in 0..k {
                let top = i.max(j) + 1;
                if top < k && !refines(&star_cover(&self.levels[i], &self.levels[j]), &self.levels[top]) {
                    return Some(ChainDefect::NotStarClosed { i, j });
                }
            }
        }
        None
    }

    pub fn validate(&self) -> Result<()> {
        match self.defect() {
            None => Ok(()),
            Some(d) => Err(Error::invariant(format!("basis chain check failed: {d}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn singleton_chain_is_valid() {
        let c = BasisChain::new(4, vec![Cover::singletons(4), Cover::singletons(4)]).unwrap();
        assert_eq!(c.len(), 2);
    }

    #[test]
    fn defects_are_named() {
        let a = Cover::new(vec![vec![0, 1], vec![2]]).unwrap();
        let chain = BasisChain::unchecked(3, vec![a.clone(), Cover::singletons(3)]);
        assert_eq!(chain.defect(), Some(ChainDefect::NotNested { level: 0 }));
        let u = Cover::new(vec![vec![0, 1], vec![1, 2]]).unwrap();
        let chain = BasisChain::unchecked(3, vec![u.clone(), u]);
        assert_eq!(chain.defect(), Some(ChainDefect::NotStarClosed { i: 0, j: 0 }));
        let chain = BasisChain::unchecked(3, vec![Cover::new(vec![vec![0]]).unwrap()]);
        assert_eq!(chain.defect(), Some(ChainDefect::NotACover { level: 0, point: 1 }));
    }
}
