use super::{CoarseMap, NTo1Certificate};
use crate::cover::{intersect_sorted, meets, multiplicity, star_cover, star_set, Cover};
use crate::dimension::ColoredFamilies;
use crate::disjointness::discreteness_collision;
use crate::error::{Error, Result};
use crate::par;

/// `st(f(⋃𝒱), 𝒰)` with its multiplicity bound `n·m`.
#[derive(Debug, Clone, PartialEq)]
pub struct PushforwardAsdim {
    pub cover: Cover,
    pub bound: usize,
    pub multiplicity: usize,
}

/// Push colored families on the source forward along an n-to-1 map.
///
/// Requires each family to be discrete against the certificate's blocks, and
/// every `star_set({y}, 𝒰)` to lie in the certificate's `S`-ball at `y`.
pub fn pushforward_asdim(
    cert: &NTo1Certificate,
    f: &CoarseMap,
    v: &ColoredFamilies,
    u: &Cover,
) -> Result<PushforwardAsdim> {
    cert.verify(f)?;
    u.check_in(f.target())?;
    u.check_covers(f.target().len())?;
    let blocks = cert.block_cover();
    for (i, fam) in v.families.iter().enumerate() {
        fam.check_in(f.source())?;
        if let Some((a, b)) = discreteness_collision(fam, &blocks) {
            return Err(Error::precondition(format!(
                "family {i}: members {a} and {b} meet a common certificate block"
            )));
        }
    }
    let target = f.target();
    let too_wide = par::map_range(target.len(), |y| {
        let st = star_set(&[y], u);
        st.iter().all(|&z| target.dist(y, z) <= cert.scale_s)
    });
    if let Some(y) = too_wide.iter().position(|ok| !ok) {
        return Err(Error::precondition(format!("star of {y} in U leaves its {}-ball", cert.scale_s)));
    }

    let image = v.flatten().image(f.table());
    let cover = star_cover(&image, u);
    let bound = cert.n * v.families.len();
    let mult = multiplicity(&cover);
    if mult > bound {
        return Err(Error::invariant(format!("pushforward multiplicity {mult} exceeds n·m = {bound}")));
    }
    Ok(PushforwardAsdim { cover, bound, multiplicity: mult })
}

/// `st(𝒲, 𝒰)` where `𝒲` cuts each preimage `f⁻¹(B)` along certificate blocks.
#[derive(Debug, Clone, PartialEq)]
pub struct PullbackAsdim {
    pub pieces: Cover,
    pub cover: Cover,
    pub bound: usize,
    pub multiplicity: usize,
}

/// Pull colored families on the target back along an n-to-1 map.
///
/// Requires each family to be discrete against `f(𝒰)` and each member to
/// sit inside some `S`-ball of the target.
pub fn pullback_asdim(cert: &NTo1Certificate, f: &CoarseMap, vy: &ColoredFamilies, u: &Cover) -> Result<PullbackAsdim> {
    cert.verify(f)?;
    u.check_in(f.source())?;
    u.check_covers(f.source().len())?;
    let fu = u.image(f.table());
    let mut pieces = Vec::new();
    for (i, fam) in vy.families.iter().enumerate() {
        fam.check_in(f.target())?;
        if let Some((a, b)) = discreteness_collision(fam, &fu) {
            return Err(Error::precondition(format!("family {i}: members {a} and {b} are not f(U)-discrete")));
        }
        for (k, b) in fam.members().iter().enumerate() {
            let y = cert.containing_ball(f, b).ok_or_else(|| {
                Error::precondition(format!("family {i} member {k} fits in no {}-ball", cert.scale_s))
            })?;
            let pre = f.preimage(b);
            for blk in &cert.balls[y].blocks {
                let piece = intersect_sorted(&pre, blk);
                if !piece.is_empty() {
                    pieces.push(piece);
                }
            }
        }
    }
    let pieces = Cover::canonical(pieces);
    let cover = star_cover(&pieces, u);
    let bound = cert.n * vy.families.len();
    let mult = multiplicity(&cover);
    if mult > bound {
        return Err(Error::invariant(format!("pullback multiplicity {mult} exceeds m·n = {bound}")));
    }
    Ok(PullbackAsdim { pieces, cover, bound, multiplicity: mult })
}

/// How many members of `f(𝒲)` each member of `𝒰` can meet.
#[derive(Debug, Clone, PartialEq)]
pub struct WeakParacompactPush {
    pub image: Cover,
    /// Most members of `𝒲` meeting a single certificate block.
    pub m: usize,
    pub bound: usize,
    /// Observed maximum over members of `𝒰`.
    pub max_meets: usize,
}

pub fn pushforward_weak_paracompact(
    cert: &NTo1Certificate,
    f: &CoarseMap,
    u: &Cover,
    w: &Cover,
) -> Result<WeakParacompactPush> {
    cert.verify(f)?;
    u.check_in(f.target())?;
    w.check_in(f.source())?;
    let blocks = cert.block_cover();
    let m = par::map_slice(blocks.members(), |b| w.members().iter().filter(|wm| meets(wm, b)).count())
        .into_iter()
        .max()
        .unwrap_or(0);
    let image = w.image(f.table());
    let counts = par::map_slice(u.members(), |a| -> Result<usize> {
        cert.containing_ball(f, a)
            .ok_or_else(|| Error::precondition(format!("a member of U fits in no {}-ball", cert.scale_s)))?;
        Ok(image.members().iter().filter(|im| meets(im, a)).count())
    });
    let max_meets = counts.into_iter().collect::<Result<Vec<_>>>()?.into_iter().max().unwrap_or(0);
    let bound = cert.n * m;
    if max_meets > bound {
        return Err(Error::invariant(format!("a member of U meets {max_meets} > n·m = {bound} images")));
    }
    Ok(WeakParacompactPush { image, m, bound, max_meets })
}

/// Counting bound on how much of `f(X)` one bounded set can hold.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundedGeometryPush {
    /// `n · (largest block size)`.
    pub bound: usize,
    /// Observed maximum of `|A ∩ f(X)|` over members `A` of `𝒰`.
    pub max_count: usize,
}

pub fn bounded_geometry_push(cert: &NTo1Certificate, f: &CoarseMap, u: &Cover) -> Result<BoundedGeometryPush> {
    cert.verify(f)?;
    u.check_in(f.target())?;
    let fx = f.image(&(0..f.source().len()).collect::<Vec<_>>());
    let mut max_count = 0;
    for a in u.members() {
        if cert.containing_ball(f, a).is_none() {
            return Err(Error::precondition(format!("a member of U fits in no {}-ball", cert.scale_s)));
        }
        max_count = max_count.max(intersect_sorted(a, &fx).len());
    }
    let bound = cert.n * cert.max_block_size();
    if max_count > bound {
        return Err(Error::invariant(format!("|A ∩ f(X)| = {max_count} exceeds {bound}")));
    }
    Ok(BoundedGeometryPush { bound, max_count })
}

#[cfg(test)]
mod tests {
    use super::super::certify_n_to_1;
    use super::super::fixtures::*;
    use super::*;
    use crate::cover::ball_cover;
    use crate::dimension::{brick_cover, kolmogorov_split, Separation};
    use crate::space::FiniteMetricSpace;

    fn intervals(n: usize, len: usize, step: usize) -> Cover {
        Cover::canonical((0..n).step_by(step).map(|a| (a..(a + len).min(n)).collect()).collect())
    }

    #[test]
    fn identity_push_keeps_multiplicity() {
        let f = CoarseMap::identity(FiniteMetricSpace::path(80).unwrap());
        let cert = certify_n_to_1(&f, 2.0, 1.0).unwrap();
        assert_eq!(cert.n, 1);
        // Two families of length-12 intervals, 12 apart inside each family.
        let fam = |off: usize| {
            Cover::canonical((off..80).step_by(24).map(|a| (a..(a + 12).min(80)).collect()).collect())
        };
        let v = ColoredFamilies { families: vec![fam(0), fam(12)], separation: Separation::Metric(12.0), mesh_bound: 11.0 };
        let u = ball_cover(f.target(), 1.0).unwrap();
        let out = pushforward_asdim(&cert, &f, &v, &u).unwrap();
        assert_eq!(out.bound, 2);
        assert!(out.multiplicity <= 2);
        assert!(out.cover.covers(80));
    }

    #[test]
    fn abs_push_doubles_at_most() {
        let f = abs_map(60);
        let cert = certify_n_to_1(&f, 1.0, 3.0).unwrap();
        assert_eq!(cert.n, 2);
        let src = f.source();
        let base = intervals(121, 24, 12);
        assert_eq!(multiplicity(&base), 2);
        let split = kolmogorov_split(src, &base, 1.0, 1).unwrap();
        // Blocks are wider than the split's separation; merge each family
        // until it is discrete against them.
        let blocks = cert.block_cover();
        let families: Vec<Cover> = split
            .families
            .families
            .iter()
            .map(|fam| crate::disjointness::discrete_partition(fam, &blocks).merged(fam))
            .collect();
        let v = ColoredFamilies { families, separation: Separation::Discrete(blocks), mesh_bound: f64::INFINITY };
        let u = ball_cover(f.target(), 0.0).unwrap();
        let out = pushforward_asdim(&cert, &f, &v, &u).unwrap();
        assert!(out.multiplicity <= out.bound);
    }

    #[test]
    fn push_rejects_non_discrete_families() {
        let f = CoarseMap::identity(FiniteMetricSpace::path(10).unwrap());
        let cert = certify_n_to_1(&f, 0.0, 0.0).unwrap();
        let fam = Cover::new(vec![vec![0, 1, 2], vec![2, 3]]).unwrap();
        let v = ColoredFamilies { families: vec![fam], separation: Separation::Metric(0.0), mesh_bound: 2.0 };
        let err = pushforward_asdim(&cert, &f, &v, &Cover::singletons(10)).unwrap_err();
        assert!(matches!(err, Error::Precondition(_)));
    }

    #[test]
    fn pullback_through_abs() {
        let f = abs_map(60);
        let cert = certify_n_to_1(&f, 6.0, 2.0).unwrap();
        let fam = |off: usize| Cover::canonical((off..61).step_by(10).map(|a| (a..(a + 5).min(61)).collect()).collect());
        let vy = ColoredFamilies { families: vec![fam(0), fam(5)], separation: Separation::Metric(5.0), mesh_bound: 4.0 };
        let u = Cover::singletons(121);
        let out = pullback_asdim(&cert, &f, &vy, &u).unwrap();
        assert_eq!(out.bound, 4);
        assert!(out.multiplicity <= 4);
        assert!(out.cover.covers(121));
    }

    #[test]
    fn weak_paracompact_bound() {
        let f = abs_map(40);
        let cert = certify_n_to_1(&f, 2.0, 1.0).unwrap();
        let w = intervals(81, 4, 3);
        let u = ball_cover(f.target(), 2.0).unwrap();
        let out = pushforward_weak_paracompact(&cert, &f, &u, &w).unwrap();
        assert!(out.max_meets <= out.bound);
        assert!(out.m >= 1);
    }

    #[test]
    fn bounded_geometry_constant_map() {
        let f = constant_map(17, 1, 0);
        let cert = certify_n_to_1(&f, 0.0, 100.0).unwrap();
        let out = bounded_geometry_push(&cert, &f, &Cover::singletons(1)).unwrap();
        assert_eq!(out.bound, 17);
        assert_eq!(out.max_count, 1);
    }

    #[test]
    fn bricks_push_along_projection() {
        // Projection of a 12×12 grid onto its first axis.
        let src = FiniteMetricSpace::grid(&[12, 12]).unwrap();
        let tgt = FiniteMetricSpace::path(12).unwrap();
        let table = (0..144).map(|i| i / 12).collect();
        let f = CoarseMap::new(src, tgt, table).unwrap();
        let cert = certify_n_to_1(&f, 1.0, 1.0).unwrap();
        assert_eq!(cert.n, 1);
        let w = brick_cover(&[12, 12], 6).unwrap();
        let u = ball_cover(f.target(), 1.0).unwrap();
        let out = pushforward_weak_paracompact(&cert, &f, &u, &w).unwrap();
        assert!(out.max_meets <= out.bound);
    }
}
