//! Shifted-brick covers of ℓ¹ grids.
//!
//! Family `i ∈ 0..=k` tiles every axis with intervals of `P − 1` points and a
//! one-point gap, shifted by `⌊i·P/(k+1)⌋`. The gap positions of different
//! families never coincide, so at most `k` families lose a given point and
//! every point stays covered; each family is disjoint, so the multiplicity
//! is at most `k+1`.

use super::CoarsenOracle;
use crate::cover::{lebesgue_number, mesh, multiplicity, refines, Cover};
use crate::error::{Error, Result};
use crate::space::FiniteMetricSpace;

/// Guaranteed Lebesgue number of `brick_cover(dims, s)` for `k` axes: the
/// radius at which the widened gap zones of different families stay apart.
pub fn brick_lebesgue_bound(k: usize, s: usize) -> usize {
    let period = s.max(k + 1);
    (period / (k + 1)).saturating_sub(1) / 2
}

pub fn brick_cover(dims: &[usize], s: usize) -> Result<Cover> {
    if s == 0 {
        return Err(Error::malformed("brick side must be at least 1"));
    }
    let space = FiniteMetricSpace::grid(dims)?;
    let k = dims.len();
    if dims.iter().all(|&d| s >= d) {
        return Ok(Cover::whole(space.len()));
    }
    let period = s.max(k + 1);
    let mut members = Vec::new();
    for family in 0..=k {
        let offset = family * period / (k + 1);
        let axes: Vec<Vec<(usize, usize)>> = dims.iter().map(|&d| axis_intervals(d, period, offset)).collect();
        let mut idx = vec![0usize; k];
        'boxes: loop {
            let ranges: Vec<(usize, usize)> = idx.iter().zip(&axes).map(|(&i, a)| a[i]).collect();
            members.push(box_points(dims, &ranges));
            for axis in (0..k).rev() {
                idx[axis] += 1;
                if idx[axis] < axes[axis].len() {
                    continue 'boxes;
                }
                idx[axis] = 0;
            }
            break;
        }
    }
    let cover = Cover::canonical(members);
    let mult = multiplicity(&cover);
    if mult > k + 1 {
        return Err(Error::invariant(format!("brick cover multiplicity {mult} exceeds {}", k + 1)));
    }
    let leb = lebesgue_number(&space, &cover)?;
    let bound = brick_lebesgue_bound(k, s) as f64;
    if leb < bound {
        return Err(Error::invariant(format!("brick cover Lebesgue number {leb} below {bound}")));
    }
    Ok(cover)
}

/// Inclusive coordinate ranges `[start, start + period − 2]` clipped to `0..d`.
fn axis_intervals(d: usize, period: usize, offset: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let mut start = offset as isize - period as isize;
    while start < d as isize {
        let lo = start.max(0) as usize;
        let hi = (start + period as isize - 2).min(d as isize - 1);
        if hi >= lo as isize {
            out.push((lo, hi as usize));
        }
        start += period as isize;
    }
    out
}

fn box_points(dims: &[usize], ranges: &[(usize, usize)]) -> Vec<usize> {
    let mut pts = vec![0usize];
    for (&d, &(lo, hi)) in dims.iter().zip(ranges) {
        pts = pts.iter().flat_map(|&base| (lo..=hi).map(move |c| base * d + c)).collect();
    }
    pts
}

/// Coarsens covers of a grid with a brick cover whose guaranteed Lebesgue
/// number is at least the input mesh.
#[derive(Debug, Clone, Copy, Default)]
pub struct BrickOracle;

impl CoarsenOracle for BrickOracle {
    fn coarsen(&self, x: &FiniteMetricSpace, cover: &Cover) -> Result<Cover> {
        let dims = x
            .grid_dims()
            .ok_or_else(|| Error::precondition("brick oracle needs a grid space"))?
            .to_vec();
        let k = dims.len();
        let m = mesh(x, cover) as usize;
        let out = brick_cover(&dims, (k + 1) * (2 * m + 1))?;
        if !refines(cover, &out) {
            return Err(Error::invariant("brick oracle output does not coarsen its input"));
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_bricks_have_multiplicity_two() {
        let cover = brick_cover(&[100], 10).unwrap();
        assert!(multiplicity(&cover) <= 2);
        assert!(cover.covers(100));
    }

    #[test]
    fn square_bricks_have_multiplicity_three() {
        let cover = brick_cover(&[60, 60], 12).unwrap();
        assert_eq!(multiplicity(&cover), 3);
    }

    #[test]
    fn oversized_brick_is_the_grid() {
        assert_eq!(brick_cover(&[60, 60], 200).unwrap(), Cover::whole(3600));
    }

    #[test]
    fn axis_intervals_leave_one_gap_per_period() {
        assert_eq!(axis_intervals(10, 4, 2), vec![(0, 0), (2, 4), (6, 8)]);
        assert_eq!(axis_intervals(10, 4, 0), vec![(0, 2), (4, 6), (8, 9)]);
    }

    #[test]
    fn zero_side_rejected() {
        assert!(brick_cover(&[10], 0).is_err());
    }
}
