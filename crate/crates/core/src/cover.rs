//! Covers, families, and the star / mesh / multiplicity / Lebesgue calculus.

use crate::error::{Error, Result};
use crate::par;
use crate::space::FiniteMetricSpace;

/// A finite family of nonempty point subsets in canonical form: each member
/// sorted and deduplicated, members sorted lexicographically and deduplicated.
///
/// Whether a `Cover` must cover the whole space depends on the operation;
/// operations that need a genuine cover say so and check.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Cover {
    members: Vec<Vec<usize>>,
}

impl Cover {
    pub fn new(members: Vec<Vec<usize>>) -> Result<Self> {
        if let Some(pos) = members.iter().position(|m| m.is_empty()) {
            return Err(Error::malformed(format!("member {pos} is empty")));
        }
        Ok(Self::canonical(members))
    }

    /// Canonicalize, silently dropping empty members.
    pub(crate) fn canonical(mut members: Vec<Vec<usize>>) -> Self {
        members.retain(|m| !m.is_empty());
        for m in &mut members {
            m.sort_unstable();
            m.dedup();
        }
        members.sort();
        members.dedup();
        Cover { members }
    }

    pub fn empty() -> Self {
        Cover { members: Vec::new() }
    }

    pub fn singletons(n: usize) -> Self {
        Cover { members: (0..n).map(|i| vec![i]).collect() }
    }

    pub fn whole(n: usize) -> Self {
        if n == 0 {
            return Self::empty();
        }
        Cover { members: vec![(0..n).collect()] }
    }

    pub fn members(&self) -> &[Vec<usize>] {
        &self.members
    }

    pub fn into_members(self) -> Vec<Vec<usize>> {
        self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Union of all members, sorted.
    pub fn support(&self) -> Vec<usize> {
        let mut s: Vec<usize> = self.members.iter().flatten().copied().collect();
        s.sort_unstable();
        s.dedup();
        s
    }

    /// Largest point index mentioned plus one.
    pub fn extent(&self) -> usize {
        self.members.iter().filter_map(|m| m.last()).max().map_or(0, |&m| m + 1)
    }

    pub fn check_in(&self, space: &FiniteMetricSpace) -> Result<()> {
        if self.extent() > space.len() {
            return Err(Error::malformed(format!(
                "cover mentions point {} but the space has {} points",
                self.extent() - 1,
                space.len()
            )));
        }
        Ok(())
    }

    /// `Ok` iff every point of `0..n` lies in some member.
    pub fn check_covers(&self, n: usize) -> Result<()> {
        let mut hit = vec![false; n];
        for m in &self.members {
            for &p in m {
                if p < n {
                    hit[p] = true;
                }
            }
        }
        match hit.iter().position(|h| !h) {
            Some(point) => Err(Error::NotACover { point }),
            None if n == 0 => Err(Error::NotACover { point: 0 }),
            None => Ok(()),
        }
    }

    pub fn covers(&self, n: usize) -> bool {
        self.check_covers(n).is_ok()
    }

    /// Family union `self ∪ other`.
    pub fn union(&self, other: &Cover) -> Cover {
        let mut all = self.members.clone();
        all.extend(other.members.iter().cloned());
        Self::canonical(all)
    }

    /// Image family `{f(M)}` under a point map.
    pub fn image(&self, table: &[usize]) -> Cover {
        Self::canonical(self.members.iter().map(|m| m.iter().map(|&p| table[p]).collect()).collect())
    }

    /// Members not strictly contained in another member. Refinement-equivalent
    /// to `self` and has the same stars.
    pub fn maximal(&self) -> Cover {
        let keep: Vec<Vec<usize>> = self
            .members
            .iter()
            .enumerate()
            .filter(|(i, m)| {
                !self.members.iter().enumerate().any(|(j, o)| j != *i && o.len() > m.len() && is_subset(m, o))
            })
            .map(|(_, m)| m.clone())
            .collect();
        Cover { members: keep }
    }

    /// Indices of members containing each point of `0..n`.
    pub fn incidence(&self, n: usize) -> Vec<Vec<usize>> {
        let mut inc = vec![Vec::new(); n];
        for (k, m) in self.members.iter().enumerate() {
            for &p in m {
                if p < n {
                    inc[p].push(k);
                }
            }
        }
        inc
    }
}

/// Two sorted slices share a point.
pub fn meets(a: &[usize], b: &[usize]) -> bool {
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => return true,
        }
    }
    false
}

/// `a ⊆ b` for sorted slices.
pub fn is_subset(a: &[usize], b: &[usize]) -> bool {
    let mut j = 0;
    for &x in a {
        while j < b.len() && b[j] < x {
            j += 1;
        }
        if j == b.len() || b[j] != x {
            return false;
        }
        j += 1;
    }
    true
}

/// Sorted union of two sorted slices.
pub fn union_sorted(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i] < b[j]) {
            out.push(a[i]);
            i += 1;
        } else if i == a.len() || b[j] < a[i] {
            out.push(b[j]);
            j += 1;
        } else {
            out.push(a[i]);
            i += 1;
            j += 1;
        }
    }
    out
}

/// Sorted intersection of two sorted slices.
pub fn intersect_sorted(a: &[usize], b: &[usize]) -> Vec<usize> {
    a.iter().copied().filter(|x| b.binary_search(x).is_ok()).collect()
}

/// `st(A, U)`: the union of the members of `U` that meet `A`.
///
/// This is the literal definition, so the result need not contain `A`.
pub fn star_set(a: &[usize], u: &Cover) -> Vec<usize> {
    let mut a_sorted = a.to_vec();
    a_sorted.sort_unstable();
    a_sorted.dedup();
    let mut out: Vec<usize> = Vec::new();
    for m in u.members() {
        if meets(&a_sorted, m) {
            out = union_sorted(&out, m);
        }
    }
    out
}

/// `st(V, W)` member-wise, with each member of `V` unioned into its own star
/// so the result always coarsens `V`.
pub fn star_cover(v: &Cover, w: &Cover) -> Cover {
    let members = par::map_slice(v.members(), |m| union_sorted(&star_set(m, w), m));
    Cover::canonical(members)
}

/// `stⁿ(U)` with `st¹(U) = st(U,U)` and `stⁿ(U) = st(stⁿ⁻¹(U), U)`.
/// `n = 0` returns `U` unchanged.
pub fn iterated_star(u: &Cover, n: usize) -> Cover {
    let mut cur = u.clone();
    for _ in 0..n {
        cur = star_cover(&cur, u);
    }
    cur
}

/// n-fold star of a single set: `st(…st(A, W)…, W)`.
pub fn iterated_star_set(a: &[usize], w: &Cover, n: usize) -> Vec<usize> {
    let mut cur = a.to_vec();
    cur.sort_unstable();
    cur.dedup();
    for _ in 0..n {
        cur = star_set(&cur, w);
    }
    cur
}

/// Maximum number of members sharing a point; 0 for the empty family.
pub fn multiplicity(u: &Cover) -> usize {
    let n = u.extent();
    let mut count = vec![0usize; n];
    for m in u.members() {
        for &p in m {
            count[p] += 1;
        }
    }
    count.into_iter().max().unwrap_or(0)
}

/// Largest member diameter; 0 for singletons and for the empty family.
pub fn mesh(x: &FiniteMetricSpace, u: &Cover) -> f64 {
    par::map_slice(u.members(), |m| x.diameter_of(m)).into_iter().fold(0.0, f64::max)
}

/// Lebesgue number with closed balls: the largest realized `R` such that every
/// closed `R`-ball lies inside some member; ∞ when some member is the whole
/// space.
pub fn lebesgue_number(x: &FiniteMetricSpace, u: &Cover) -> Result<f64> {
    u.check_in(x)?;
    u.check_covers(x.len())?;
    if u.members().iter().any(|m| m.len() == x.len()) {
        return Ok(f64::INFINITY);
    }
    Ok(x.largest_realized_below(min_depth(x, u)).unwrap_or(0.0))
}

/// Like [`lebesgue_number`] but ∞ whenever closed balls of every finite
/// radius fit, which on disconnected spaces happens without a whole-space
/// member. Scale admission uses this.
pub fn fitting_radius(x: &FiniteMetricSpace, u: &Cover) -> Result<f64> {
    u.check_in(x)?;
    u.check_covers(x.len())?;
    let depth = min_depth(x, u);
    if depth.is_infinite() {
        return Ok(f64::INFINITY);
    }
    Ok(x.largest_realized_below(depth).unwrap_or(0.0))
}

/// `min_x max_{M ∋ x} d(x, X ∖ M)`: a closed `R`-ball around every point fits
/// in a member iff `R` is strictly below this value.
pub(crate) fn min_depth(x: &FiniteMetricSpace, u: &Cover) -> f64 {
    let inc = u.incidence(x.len());
    par::map_range(x.len(), |p| {
        inc[p]
            .iter()
            .map(|&k| x.dist_to_complement(p, &u.members()[k]))
            .fold(0.0, f64::max)
    })
    .into_iter()
    .fold(f64::INFINITY, f64::min)
}

/// If every member of `v` lies in some member of `u`, returns the witness
/// table (member of `v` → lowest-index containing member of `u`).
pub fn refinement_witness(v: &Cover, u: &Cover) -> Option<Vec<usize>> {
    par::map_slice(v.members(), |m| u.members().iter().position(|o| is_subset(m, o)))
        .into_iter()
        .collect()
}

/// `v` refines `u` (equivalently `u` coarsens `v`).
pub fn refines(v: &Cover, u: &Cover) -> bool {
    refinement_witness(v, u).is_some()
}

/// `{B(x, r) : x ∈ X}` with closed balls.
pub fn ball_cover(x: &FiniteMetricSpace, r: f64) -> Result<Cover> {
    if !(r >= 0.0) {
        return Err(Error::malformed(format!("ball radius {r} must be non-negative")));
    }
    Ok(Cover::canonical(par::map_range(x.len(), |p| x.ball(p, r))))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(m: &[&[usize]]) -> Cover {
        Cover::new(m.iter().map(|s| s.to_vec()).collect()).unwrap()
    }

    #[test]
    fn star_set_examples() {
        let u = c(&[&[0, 1], &[1, 2], &[3, 4]]);
        assert_eq!(star_set(&[0, 1], &u), vec![0, 1, 2]);
        assert_eq!(star_set(&[3], &c(&[&[0, 1]])), Vec::<usize>::new());
        assert_eq!(star_set(&[1], &c(&[&[0, 1], &[1, 2]])), vec![0, 1, 2]);
    }

    #[test]
    fn star_cover_examples() {
        assert_eq!(star_cover(&c(&[&[0]]), &c(&[&[0, 1], &[2]])), c(&[&[0, 1]]));
        let u = c(&[&[0, 1], &[1, 2]]);
        assert_eq!(star_cover(&u, &u), c(&[&[0, 1, 2]]));
        assert_eq!(star_cover(&c(&[&[4]]), &c(&[&[0, 1]])), c(&[&[4]]));
    }

    #[test]
    fn iterated_star_examples() {
        let u = c(&[&[0, 1], &[1, 2], &[2, 3]]);
        assert_eq!(iterated_star(&u, 1), c(&[&[0, 1, 2], &[0, 1, 2, 3], &[1, 2, 3]]));
        assert_eq!(iterated_star(&u, 0), u);
        let s = Cover::singletons(5);
        assert_eq!(iterated_star(&s, 3), s);
        // Unfolded by hand: st({0,1,2}, U) = {0,1,2,3}, and likewise for the others.
        assert!(iterated_star(&u, 2).members().contains(&vec![0, 1, 2, 3]));
    }

    #[test]
    fn multiplicity_examples() {
        assert_eq!(multiplicity(&c(&[&[0, 1], &[1, 2], &[3]])), 2);
        assert_eq!(multiplicity(&c(&[&[0], &[1], &[5, 6]])), 1);
        assert_eq!(multiplicity(&c(&[&[0], &[0], &[0]])), 1);
        assert_eq!(multiplicity(&Cover::empty()), 0);
    }

    #[test]
    fn mesh_examples() {
        let p = FiniteMetricSpace::path(11).unwrap();
        assert_eq!(mesh(&p, &Cover::singletons(11)), 0.0);
        assert_eq!(mesh(&p, &c(&[&[0, 1]])), 1.0);
        assert_eq!(mesh(&p, &c(&[&[0, 5], &[2, 3]])), 5.0);
        assert_eq!(mesh(&p, &Cover::empty()), 0.0);
    }

    #[test]
    fn lebesgue_on_components() {
        let x = FiniteMetricSpace::from_graph(4, &[(0, 1, 1.0), (2, 3, 2.0)]).unwrap();
        let u = Cover::new(vec![vec![0, 1], vec![2, 3]]).unwrap();
        assert_eq!(lebesgue_number(&x, &u).unwrap(), 2.0);
    }

    #[test]
    fn lebesgue_examples() {
        let p = FiniteMetricSpace::path(11).unwrap();
        let u = c(&[&[0, 1, 2, 3, 4, 5], &[4, 5, 6, 7, 8, 9, 10]]);
        assert_eq!(lebesgue_number(&p, &u).unwrap(), 1.0);
        assert_eq!(lebesgue_number(&p, &Cover::whole(11)).unwrap(), f64::INFINITY);
        assert_eq!(lebesgue_number(&p, &Cover::singletons(11)).unwrap(), 0.0);
        let err = lebesgue_number(&p, &c(&[&[0, 1]])).unwrap_err();
        assert!(matches!(err, Error::NotACover { point: 2 }));
    }

    #[test]
    fn refines_examples() {
        let u = c(&[&[0, 1], &[1, 2]]);
        assert!(refines(&Cover::singletons(3), &u));
        assert!(!refines(&c(&[&[0, 1, 2]]), &u));
        assert!(refines(&u, &u));
        assert_eq!(refinement_witness(&c(&[&[1]]), &u), Some(vec![0]));
    }

    #[test]
    fn ball_cover_examples() {
        let p = FiniteMetricSpace::path(4).unwrap();
        assert_eq!(ball_cover(&p, 0.0).unwrap(), Cover::singletons(4));
        assert_eq!(ball_cover(&p, 1.0).unwrap(), c(&[&[0, 1], &[0, 1, 2], &[1, 2, 3], &[2, 3]]));
        assert_eq!(ball_cover(&p, 3.0).unwrap(), Cover::whole(4));
        assert!(ball_cover(&p, -1.0).is_err());
    }

    #[test]
    fn empty_member_rejected() {
        assert!(Cover::new(vec![vec![0], vec![]]).is_err());
    }

    #[test]
    fn maximal_keeps_stars() {
        let u = c(&[&[0], &[0, 1], &[2]]);
        assert_eq!(u.maximal(), c(&[&[0, 1], &[2]]));
        assert_eq!(star_set(&[1], &u), star_set(&[1], &u.maximal()));
    }
}
