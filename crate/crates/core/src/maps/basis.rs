use super::CoarseMap;
use crate::chain::BasisChain;
use crate::cover::Cover;
use crate::error::Result;
use crate::metrization::close_under_stars;

/// Image chain `f(𝒰_k)`, closed under one star step per level so the result
/// is again a valid basis chain on the target.
pub fn pushforward_basis(f: &CoarseMap, chain: &BasisChain) -> Result<BasisChain> {
    let images: Vec<Cover> = chain.levels().iter().map(|l| l.image(f.table())).collect();
    close_under_stars(f.target().len(), &images)
}
