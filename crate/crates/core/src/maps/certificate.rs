use super::CoarseMap;
use crate::cover::{union_sorted, Cover};
use crate::disjointness::{discrete_partition, discreteness_collision, lattice_partition, set_distance};
use crate::error::{Error, Result};
use crate::par;

/// The decomposition of `f⁻¹(B(center, S))` into gap-separated blocks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BallDecomposition {
    pub center: usize,
    /// Sorted blocks, ordered by lowest point.
    pub blocks: Vec<Vec<usize>>,
}

/// Witness that a map is n-to-1 at scale pair `(S, R)`: every closed
/// `S`-ball of the target pulls back to at most `n` blocks, pairwise more
/// than `R` apart, whose union is exactly the preimage.
#[derive(Debug, Clone, PartialEq)]
pub struct NTo1Certificate {
    pub scale_s: f64,
    pub gap_r: f64,
    pub n: usize,
    /// One entry per target point, in index order.
    pub balls: Vec<BallDecomposition>,
    /// Largest block diameter.
    pub source_mesh: f64,
    /// When set, every ball's blocks are also discrete against this cover.
    pub discrete_against: Option<Cover>,
}

impl NTo1Certificate {
    /// Every block of every ball, as one family.
    pub fn block_cover(&self) -> Cover {
        Cover::canonical(self.balls.iter().flat_map(|b| b.blocks.iter().cloned()).collect())
    }

    pub fn max_block_size(&self) -> usize {
        self.balls.iter().flat_map(|b| b.blocks.iter().map(Vec::len)).max().unwrap_or(0)
    }

    /// Lowest center whose `S`-ball contains `set`.
    pub fn containing_ball(&self, f: &CoarseMap, set: &[usize]) -> Option<usize> {
        (0..f.target().len()).find(|&y| set.iter().all(|&p| f.target().dist(y, p) <= self.scale_s))
    }

    /// Re-check every invariant against the map.
    pub fn verify(&self, f: &CoarseMap) -> Result<()> {
        let target = f.target();
        let source = f.source();
        if self.balls.len() != target.len() {
            return Err(Error::invariant(format!(
                "certificate covers {} balls, target has {} points",
                self.balls.len(),
                target.len()
            )));
        }
        let checks = par::map_slice(&self.balls, |ball| -> Result<()> {
            let pre = f.preimage(&target.ball(ball.center, self.scale_s));
            let mut union = Vec::new();
            let mut total = 0;
            for b in &ball.blocks {
                if b.is_empty() {
                    return Err(Error::invariant(format!("ball {} has an empty block", ball.center)));
                }
                union = union_sorted(&union, b);
                total += b.len();
            }
            if union != pre || total != pre.len() {
                return Err(Error::invariant(format!(
                    "blocks of ball {} do not partition its preimage",
                    ball.center
                )));
            }
            if ball.blocks.len() > self.n {
                return Err(Error::invariant(format!(
                    "ball {} has {} blocks > n = {}",
                    ball.center,
                    ball.blocks.len(),
                    self.n
                )));
            }
            for (i, a) in ball.blocks.iter().enumerate() {
                if source.diameter_of(a) > self.source_mesh {
                    return Err(Error::invariant(format!("block of ball {} exceeds mesh", ball.center)));
                }
                for b in &ball.blocks[i + 1..] {
                    if set_distance(source, a, b) <= self.gap_r {
                        return Err(Error::invariant(format!(
                            "blocks of ball {} are within gap {}",
                            ball.center, self.gap_r
                        )));
                    }
                }
            }
            if let Some(w) = &self.discrete_against {
                let fam = Cover::canonical(ball.blocks.clone());
                if discreteness_collision(&fam, w).is_some() {
                    return Err(Error::invariant(format!("blocks of ball {} are not discrete", ball.center)));
                }
            }
            Ok(())
        });
        checks.into_iter().collect()
    }
}

/// Decompose every closed `S`-ball preimage into its `R`-lattice blocks.
pub fn certify_n_to_1(f: &CoarseMap, s: f64, r: f64) -> Result<NTo1Certificate> {
    if !(s >= 0.0) || !(r >= 0.0) {
        return Err(Error::malformed(format!("scales must be non-negative (S={s}, R={r})")));
    }
    let source = f.source();
    let balls = par::map_range(f.target().len(), |y| {
        let pre = f.preimage(&f.target().ball(y, s));
        let points = Cover::canonical(pre.iter().map(|&p| vec![p]).collect());
        let part = lattice_partition(source, &points, r);
        BallDecomposition { center: y, blocks: part.merged_sets(&points) }
    });
    finish(f, s, r, balls, None)
}

fn finish(
    f: &CoarseMap,
    s: f64,
    r: f64,
    balls: Vec<BallDecomposition>,
    discrete_against: Option<Cover>,
) -> Result<NTo1Certificate> {
    let n = balls.iter().map(|b| b.blocks.len()).max().unwrap_or(0);
    let source_mesh = balls
        .iter()
        .flat_map(|b| b.blocks.iter().map(|blk| f.source().diameter_of(blk)))
        .fold(0.0, f64::max);
    let cert = NTo1Certificate { scale_s: s, gap_r: r, n, balls, source_mesh, discrete_against };
    cert.verify(f)?;
    Ok(cert)
}

/// Merge blocks whose stars against `w` meet, so each ball's blocks become
/// `w`-discrete. Block counts can only drop; the mesh may grow.
pub fn discrete_refinement(cert: &NTo1Certificate, f: &CoarseMap, w: &Cover) -> Result<NTo1Certificate> {
    cert.verify(f)?;
    let balls = par::map_slice(&cert.balls, |ball| {
        let fam = Cover::canonical(ball.blocks.clone());
        let part = discrete_partition(&fam, w);
        let mut blocks = part.merged_sets(&fam);
        blocks.sort();
        BallDecomposition { center: ball.center, blocks }
    });
    let mut out = finish(f, cert.scale_s, cert.gap_r, balls, Some(w.clone()))?;
    if out.n > cert.n {
        return Err(Error::invariant("discrete refinement increased the block count"));
    }
    out.n = cert.n;
    Ok(out)
}

/// One representative per block, and the radius at which it is a net.
#[derive(Debug, Clone, PartialEq)]
pub struct NetSubspace {
    pub points: Vec<usize>,
    /// Smallest `t` such that every closed `t`-ball of the source meets the net.
    pub net_radius: f64,
    pub certificate: NTo1Certificate,
}

impl NetSubspace {
    pub fn verify(&self, f: &CoarseMap) -> Result<()> {
        self.certificate.verify(f)?;
        let x = f.source();
        for ball in &self.certificate.balls {
            for b in &ball.blocks {
                if !b.iter().any(|p| self.points.binary_search(p).is_ok()) {
                    return Err(Error::invariant("net misses a block"));
                }
            }
        }
        for p in 0..x.len() {
            if !x.ball(p, self.net_radius).iter().any(|q| self.points.binary_search(q).is_ok()) {
                return Err(Error::invariant(format!("ball around {p} misses the net")));
            }
        }
        Ok(())
    }
}

/// Pick the lowest point of every block of every `S`-ball preimage.
pub fn net_subspace(f: &CoarseMap, s: f64, gap: f64) -> Result<NetSubspace> {
    let certificate = certify_n_to_1(f, s, gap)?;
    let mut points: Vec<usize> = certificate.balls.iter().flat_map(|b| b.blocks.iter().map(|blk| blk[0])).collect();
    points.sort_unstable();
    points.dedup();
    let x = f.source();
    let net_radius = par::map_range(x.len(), |p| x.dist_to_set(p, &points)).into_iter().fold(0.0, f64::max);
    let net = NetSubspace { points, net_radius, certificate };
    net.verify(f)?;
    Ok(net)
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::*;
    use crate::cover::ball_cover;
    use crate::space::FiniteMetricSpace;

    /// Definition-level oracle: components of the "within R" relation on the
    /// preimage, found by flood fill over explicit point pairs.
    fn oracle_block_count(f: &CoarseMap, y: usize, s: f64, r: f64) -> usize {
        let pre: Vec<usize> = (0..f.source().len())
            .filter(|&x| f.target().dist(f.apply(x), y) <= s)
            .collect();
        let mut seen = vec![false; pre.len()];
        let mut count = 0;
        for start in 0..pre.len() {
            if seen[start] {
                continue;
            }
            count += 1;
            let mut stack = vec![start];
            seen[start] = true;
            while let Some(i) = stack.pop() {
                for j in 0..pre.len() {
                    if !seen[j] && f.source().dist(pre[i], pre[j]) <= r {
                        seen[j] = true;
                        stack.push(j);
                    }
                }
            }
        }
        count
    }

    #[test]
    fn abs_map_is_two_to_one() {
        let f = abs_map(200);
        let cert = certify_n_to_1(&f, 5.0, 11.0).unwrap();
        let oracle_n = (0..=200).map(|y| oracle_block_count(&f, y, 5.0, 11.0)).max().unwrap();
        assert_eq!(oracle_n, 2);
        assert_eq!(cert.n, 2);
        // Preimages split only once the two arms are more than 11 apart.
        assert_eq!(cert.balls[10].blocks.len(), 1);
        assert_eq!(cert.balls[11].blocks.len(), 2);
    }

    #[test]
    fn identity_is_one_to_one() {
        let f = CoarseMap::identity(FiniteMetricSpace::path(30).unwrap());
        assert_eq!(certify_n_to_1(&f, 0.0, 0.0).unwrap().n, 1);
        for s in [1.0, 2.0, 7.0] {
            assert_eq!(certify_n_to_1(&f, s, 1.0).unwrap().n, 1);
        }
        // At gap 0 every point of a path ball is its own block.
        assert_eq!(certify_n_to_1(&f, 2.0, 0.0).unwrap().n, 5);
    }

    #[test]
    fn constant_map_single_block() {
        let f = constant_map(15, 4, 2);
        let cert = certify_n_to_1(&f, 0.0, 20.0).unwrap();
        assert_eq!(cert.n, 1);
        assert_eq!(cert.balls[2].blocks, vec![(0..15).collect::<Vec<_>>()]);
        assert!(cert.balls[0].blocks.is_empty());
    }

    #[test]
    fn tampered_certificate_fails() {
        let f = abs_map(20);
        let mut cert = certify_n_to_1(&f, 2.0, 5.0).unwrap();
        cert.balls[15].blocks.pop();
        assert!(cert.verify(&f).is_err());
    }

    #[test]
    fn discrete_refinement_examples() {
        let f = abs_map(200);
        let cert = certify_n_to_1(&f, 5.0, 11.0).unwrap();
        let same = discrete_refinement(&cert, &f, &Cover::singletons(401)).unwrap();
        assert_eq!((same.balls.clone(), same.n, same.source_mesh), (cert.balls.clone(), cert.n, cert.source_mesh));

        let w = ball_cover(f.source(), 2.0).unwrap();
        let refined = discrete_refinement(&cert, &f, &w).unwrap();
        assert_eq!(refined.n, 2);
        for ball in &refined.balls {
            if let [a, b] = &ball.blocks[..] {
                assert!(set_distance(f.source(), a, b) > 4.0);
            }
        }

        let c = constant_map(10, 3, 0);
        let cert = certify_n_to_1(&c, 0.0, 20.0).unwrap();
        let refined = discrete_refinement(&cert, &c, &ball_cover(c.source(), 3.0).unwrap()).unwrap();
        assert_eq!(refined.balls[0].blocks.len(), 1);
    }

    #[test]
    fn net_subspace_examples() {
        let id = CoarseMap::identity(FiniteMetricSpace::path(12).unwrap());
        let net = net_subspace(&id, 0.0, 0.0).unwrap();
        assert_eq!((net.points.len(), net.net_radius), (12, 0.0));

        // |x| at S = 0: preimages {-y, y} stay apart at gap 0, so the net keeps
        // every point.
        let a = abs_map(20);
        let net = net_subspace(&a, 0.0, 0.0).unwrap();
        assert_eq!((net.points.len(), net.net_radius), (41, 0.0));
        // At gap 2 the arms merge for y ≤ 1 only; the net drops point 21 (x = 1).
        let net = net_subspace(&a, 0.0, 2.0).unwrap();
        assert_eq!((net.points.len(), net.net_radius), (40, 1.0));

        let c = constant_map(9, 2, 1);
        let net = net_subspace(&c, 0.0, 20.0).unwrap();
        assert_eq!(net.points, vec![0]);
        assert_eq!(net.net_radius, 8.0);
    }
}
