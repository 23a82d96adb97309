//! Mesh-budgeted search for low-multiplicity coarsenings.

use crate::cover::{mesh, meets, multiplicity, refines, union_sorted, Cover};
use crate::error::{Error, Result};
use crate::par;
use crate::space::FiniteMetricSpace;

#[derive(Debug, Clone, PartialEq)]
pub struct FinitisticProfile {
    /// Lowest multiplicity found; not guaranteed optimal.
    pub multiplicity: usize,
    /// Coarsens the input, mesh within budget.
    pub witness: Cover,
}

/// Greedy pairwise merging: repeatedly merge the two overlapping members
/// whose union stays within `mesh_budget` and most lowers
/// (multiplicity, number of points at that multiplicity). Ties go to the
/// lowest member pair.
pub fn finitistic_profile(x: &FiniteMetricSpace, u: &Cover, mesh_budget: f64) -> Result<FinitisticProfile> {
    u.check_in(x)?;
    let base_mesh = mesh(x, u);
    if base_mesh > mesh_budget {
        return Err(Error::Infeasible(format!(
            "mesh budget {mesh_budget} is below the cover's own mesh {base_mesh}"
        )));
    }
    let support = u.support();
    let mut w = if x.diameter_of(&support) <= mesh_budget && !support.is_empty() {
        Cover::canonical(vec![support])
    } else {
        u.maximal()
    };
    let mut score = score_of(&w);
    loop {
        if score.0 <= 1 {
            break;
        }
        let peak = peak_points(&w, score.0);
        let members = w.members();
        let candidates = par::map_range(members.len(), |a| {
            let mut best: Option<((usize, usize), usize, Cover)> = None;
            for b in (a + 1)..members.len() {
                if !meets(&members[a], &members[b]) {
                    continue;
                }
                if !peak.iter().any(|p| members[a].binary_search(p).is_ok() || members[b].binary_search(p).is_ok()) {
                    continue;
                }
                let merged = union_sorted(&members[a], &members[b]);
                if x.diameter_of(&merged) > mesh_budget {
                    continue;
                }
                let mut next: Vec<Vec<usize>> = members
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| *i != a && *i != b)
                    .map(|(_, m)| m.clone())
                    .collect();
                next.push(merged);
                let next = Cover::canonical(next).maximal();
                let s = score_of(&next);
                if best.as_ref().is_none_or(|(bs, _, _)| s < *bs) {
                    best = Some((s, b, next));
                }
            }
            best
        });
        let mut best: Option<((usize, usize), Cover)> = None;
        for (s, _, next) in candidates.into_iter().flatten() {
            if best.as_ref().is_none_or(|(bs, _)| s < *bs) {
                best = Some((s, next));
            }
        }
        match best {
            Some((s, next)) if s < score => {
                score = s;
                w = next;
            }
            _ => break,
        }
    }
    if !refines(u, &w) || mesh(x, &w) > mesh_budget {
        return Err(Error::invariant("finitistic witness failed verification"));
    }
    Ok(FinitisticProfile { multiplicity: multiplicity(&w), witness: w })
}

fn score_of(w: &Cover) -> (usize, usize) {
    let mult = multiplicity(w);
    (mult, peak_points(w, mult).len())
}

fn peak_points(w: &Cover, mult: usize) -> Vec<usize> {
    let mut count = vec![0usize; w.extent()];
    for m in w.members() {
        for &p in m {
            count[p] += 1;
        }
    }
    count.iter().enumerate().filter(|(_, &c)| c == mult && mult > 0).map(|(p, _)| p).collect()
}
