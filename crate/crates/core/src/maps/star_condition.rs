use super::CoarseMap;
use crate::cover::{is_subset, iterated_star_set, meets, Cover};
use crate::error::Result;

/// Which containment the `(*)` check tests.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StarConditionMode {
    /// Each `U ∈ 𝒰` lies in `st^n(U', f(𝒱))` for some `U' ∈ 𝒰`.
    TargetContainment,
    /// For each `U ∈ 𝒰` and each `V ∈ 𝒱` with `f(V)` meeting `U`, some
    /// `U' ∈ 𝒰` has `f(V) ⊆ st^n(U', f(𝒱))`.
    SourceContainment,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StarConditionReport {
    pub holds: bool,
    /// Per checked item, up to `n.max(1)` witnessing member indices of `𝒰`.
    pub witnesses: Vec<Vec<usize>>,
    /// Index of the first member (of `𝒰` or `𝒱`, depending on mode) without a witness.
    pub failure: Option<usize>,
}

pub fn star_condition_check(
    f: &CoarseMap,
    u: &Cover,
    v: &Cover,
    n: usize,
    mode: StarConditionMode,
) -> Result<StarConditionReport> {
    u.check_in(f.target())?;
    v.check_in(f.source())?;
    let fv = v.image(f.table());
    let stars: Vec<Vec<usize>> = crate::par::map_slice(u.members(), |m| iterated_star_set(m, &fv, n));
    let keep = n.max(1);
    let find = |want: &[usize]| -> Vec<usize> {
        stars.iter().enumerate().filter(|(_, st)| is_subset(want, st)).map(|(j, _)| j).take(keep).collect()
    };
    let mut witnesses = Vec::new();
    let mut failure = None;
    match mode {
        StarConditionMode::TargetContainment => {
            for (i, a) in u.members().iter().enumerate() {
                let w = find(a);
                if w.is_empty() {
                    failure = Some(i);
                    break;
                }
                witnesses.push(w);
            }
        }
        StarConditionMode::SourceContainment => {
            let images: Vec<Vec<usize>> = v.members().iter().map(|m| f.image(m)).collect();
            'outer: for (k, img) in images.iter().enumerate() {
                if !u.members().iter().any(|a| meets(a, img)) {
                    continue;
                }
                let w = find(img);
                if w.is_empty() {
                    failure = Some(k);
                    break 'outer;
                }
                witnesses.push(w);
            }
        }
    }
    Ok(StarConditionReport { holds: failure.is_none(), witnesses, failure })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::FiniteMetricSpace;
    use StarConditionMode::*;

    #[test]
    fn identity_with_singletons_holds() {
        let f = CoarseMap::identity(FiniteMetricSpace::path(9).unwrap());
        let s = Cover::singletons(9);
        for mode in [TargetContainment, SourceContainment] {
            for n in [0, 1, 3] {
                assert!(star_condition_check(&f, &s, &s, n, mode).unwrap().holds);
            }
        }
    }

    #[test]
    fn uncovered_member_fails() {
        let f = CoarseMap::identity(FiniteMetricSpace::path(9).unwrap());
        let u = Cover::new(vec![vec![0, 1, 2], vec![3, 4, 5], vec![6, 7, 8]]).unwrap();
        // f(V) = {2, 3} straddles two members of U and no star of size n = 0
        // contains it.
        let v = Cover::new(vec![vec![2, 3]]).unwrap();
        let r = star_condition_check(&f, &u, &v, 0, SourceContainment).unwrap();
        assert!(!r.holds);
        assert_eq!(r.failure, Some(0));
        // One star step absorbs it.
        assert!(star_condition_check(&f, &u, &v, 1, SourceContainment).unwrap().holds);
    }

    #[test]
    fn target_containment_needs_growth() {
        let f = CoarseMap::identity(FiniteMetricSpace::path(6).unwrap());
        let u = Cover::new(vec![vec![0, 1, 2, 3, 4, 5], vec![0]]).unwrap();
        let v = Cover::singletons(6);
        let r = star_condition_check(&f, &u, &v, 0, TargetContainment).unwrap();
        assert!(r.holds);
        assert_eq!(r.witnesses, vec![vec![0], vec![1]]);
        // With one star step through f(𝒱) = {X}, X witnesses {0}.
        let whole = Cover::whole(6);
        let r = star_condition_check(&f, &u, &whole, 1, TargetContainment).unwrap();
        assert!(r.witnesses.iter().all(|w| w.len() == 1));
    }
}
