//! Seeded random instances that satisfy each construction's preconditions,
//! and a suite that runs every construction's verifier over them.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::cover::{ball_cover, meets, star_cover, star_set, Cover};
use crate::dimension::{ColoredFamilies, Separation};
use crate::error::Result;
use crate::generate::{self, RandomGraphParams};
use crate::maps::{certify_n_to_1, CoarseMap, NTo1Certificate};
use crate::space::FiniteMetricSpace;

/// A path, a grid or a connected weighted graph with at most `max_n` points.
pub fn random_space(rng: &mut impl Rng, max_n: usize) -> FiniteMetricSpace {
    let max_n = max_n.max(2);
    match rng.gen_range(0..3) {
        0 => FiniteMetricSpace::path(rng.gen_range(2..=max_n)).expect("nonempty path"),
        1 => {
            let a = rng.gen_range(2..=(max_n / 2).max(2));
            let b = rng.gen_range(1..=(max_n / a).max(1));
            FiniteMetricSpace::grid(&[a, b]).expect("nonempty grid")
        }
        _ => {
            let mut p = RandomGraphParams::new(rng.gen_range(2..=max_n));
            p.edge_probability = rng.gen_range(0.15..0.5);
            let edges = generate::random_edges(&p, rng).expect("dense enough to connect");
            FiniteMetricSpace::from_graph(p.n, &edges).expect("valid graph")
        }
    }
}

/// A realized distance, biased toward the small end.
pub fn random_scale(rng: &mut impl Rng, x: &FiniteMetricSpace, cap: f64) -> f64 {
    let ds: Vec<f64> = x.realized_distances().into_iter().filter(|&d| d <= cap).collect();
    let k = ds.len();
    ds[rng.gen_range(0..k).min(rng.gen_range(0..k))]
}

/// Balls of random radius (at most `max_r`) around a random subset of points,
/// completed by singletons so the result covers `x`.
pub fn random_ball_members(rng: &mut impl Rng, x: &FiniteMetricSpace, max_r: f64) -> Vec<Vec<usize>> {
    let mut members = Vec::new();
    let mut covered = vec![false; x.len()];
    let mut order: Vec<usize> = (0..x.len()).collect();
    order.shuffle(rng);
    for p in order {
        if covered[p] {
            continue;
        }
        let ball = x.ball(p, random_scale(rng, x, max_r));
        for &q in &ball {
            covered[q] = true;
        }
        members.push(ball);
    }
    members
}

/// First-fit coloring: each member joins the first family where its star
/// against `w` misses every star already there. The families are `w`-discrete.
pub fn greedy_discrete_families(members: &[Vec<usize>], w: &Cover) -> Vec<Cover> {
    let mut stars: Vec<Vec<Vec<usize>>> = Vec::new();
    let mut families: Vec<Vec<Vec<usize>>> = Vec::new();
    let mut sorted = members.to_vec();
    sorted.sort();
    sorted.dedup();
    for m in sorted {
        let st = crate::cover::union_sorted(&m, &star_set(&m, w));
        match stars.iter().position(|fs| fs.iter().all(|s| !meets(s, &st))) {
            Some(i) => {
                stars[i].push(st);
                families[i].push(m);
            }
            None => {
                stars.push(vec![st]);
                families.push(vec![m]);
            }
        }
    }
    families.into_iter().map(Cover::canonical).collect()
}

#[derive(Debug, Clone)]
pub struct OstrandInstance {
    pub space: FiniteMetricSpace,
    pub u: Cover,
    pub v: ColoredFamilies,
}

/// `U` a ball cover; `V` families discrete against `st(U,U)` whose union covers.
pub fn ostrand_instance(rng: &mut impl Rng, max_n: usize) -> OstrandInstance {
    let space = random_space(rng, max_n);
    let r = random_scale(rng, &space, 2.0);
    let u = ball_cover(&space, r).expect("non-negative radius");
    let suu = star_cover(&u, &u);
    let members = random_ball_members(rng, &space, 3.0);
    let families = greedy_discrete_families(&members, &suu);
    let mesh_bound = crate::cover::mesh(&space, &Cover::canonical(members));
    let v = ColoredFamilies { families, separation: Separation::Discrete(suu), mesh_bound };
    OstrandInstance { space, u, v }
}

#[derive(Debug, Clone)]
pub struct MapInstance {
    pub map: CoarseMap,
    pub cert: NTo1Certificate,
}

/// A surjective map, built as a projection-like quotient, a folding or a
/// random surjection, with its certificate at random `(S, R)`.
pub fn map_instance(rng: &mut impl Rng, max_n: usize) -> MapInstance {
    let source = random_space(rng, max_n);
    let n = source.len();
    let (target, table) = match rng.gen_range(0..3) {
        0 => {
            let m = rng.gen_range(1..=n);
            let target = FiniteMetricSpace::path(m).expect("nonempty");
            let mut table: Vec<usize> = (0..n).map(|i| i * m / n).collect();
            if rng.gen_bool(0.5) {
                table.reverse();
            }
            (target, table)
        }
        1 => {
            let half = n.div_ceil(2);
            let target = FiniteMetricSpace::path(half).expect("nonempty");
            let table = (0..n).map(|i| i.min(n - 1 - i).min(half - 1)).collect();
            (target, table)
        }
        _ => {
            let target = random_space(rng, n);
            let m = target.len();
            let mut table: Vec<usize> = (0..n).map(|i| if i < m { i } else { rng.gen_range(0..m) }).collect();
            table.shuffle(rng);
            (target, table)
        }
    };
    let map = CoarseMap::new(source, target, table).expect("table in range");
    let s = random_scale(rng, map.target(), 4.0);
    let r = random_scale(rng, map.source(), 4.0);
    let cert = certify_n_to_1(&map, s, r).expect("certificate verifies");
    MapInstance { map, cert }
}

/// Ball cover of the target whose point stars stay inside the certificate's
/// `S`-balls: radius at most `S/2`.
pub fn target_cover_for(inst: &MapInstance) -> Cover {
    let y = inst.map.target();
    let half = inst.cert.scale_s / 2.0;
    let r = y.realized_distances().into_iter().filter(|&d| d <= half).fold(0.0, f64::max);
    ball_cover(y, r).expect("non-negative radius")
}

/// Random chains input for `close_under_stars`: ball covers at random
/// increasing radii, optionally mixed with random merges.
pub fn chain_families(rng: &mut impl Rng, x: &FiniteMetricSpace) -> Vec<Cover> {
    let ds = x.realized_distances();
    let depth = rng.gen_range(1..=5);
    let mut radii: Vec<f64> = (0..depth).map(|_| ds[rng.gen_range(0..ds.len())]).collect();
    radii.sort_by(f64::total_cmp);
    radii
        .into_iter()
        .map(|r| {
            if rng.gen_bool(0.3) {
                Cover::canonical(random_ball_members(rng, x, r))
            } else {
                ball_cover(x, r).expect("non-negative radius")
            }
        })
        .collect()
}

/// Pass/fail tallies of one suite run.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct SuiteTally {
    pub name: String,
    pub passed: usize,
    pub failed: usize,
    pub first_failure: Option<String>,
}

impl SuiteTally {
    fn new(name: &str) -> Self {
        SuiteTally { name: name.to_owned(), passed: 0, failed: 0, first_failure: None }
    }

    fn record(&mut self, seed: u64, outcome: Result<()>) {
        match outcome {
            Ok(()) => self.passed += 1,
            Err(e) => {
                self.failed += 1;
                self.first_failure.get_or_insert_with(|| format!("seed {seed}: {e}"));
            }
        }
    }
}

/// Run every theorem's constructor-plus-verifier over `count` instances,
/// instance `i` seeded with `seed + i`.
pub fn run_suite(seed: u64, count: usize, max_n: usize) -> Vec<SuiteTally> {
    use crate::dimension::ostrand_forward;
    use crate::maps::{bounded_geometry_push, pullback_asdim, pushforward_asdim, pushforward_weak_paracompact};
    use crate::metrization::{basis_equivalence_report, chain_metric, close_under_stars};

    let seeds: Vec<u64> = (0..count as u64).map(|i| seed.wrapping_add(i)).collect();
    let outcomes = crate::par::map_slice(&seeds, |&s| {
        let mut rng = generate::rng(s);
        let ost = ostrand_instance(&mut rng, max_n);
        let o = ostrand_forward(&ost.space, &ost.u, &ost.v).map(|_| ());

        let inst = map_instance(&mut rng, max_n);
        let f = &inst.map;
        let blocks = inst.cert.block_cover();
        let members = random_ball_members(&mut rng, f.source(), 2.0);
        let families = greedy_discrete_families(&members, &blocks);
        let v = ColoredFamilies { families, separation: Separation::Discrete(blocks), mesh_bound: f64::INFINITY };
        let uy = target_cover_for(&inst);
        let push = pushforward_asdim(&inst.cert, f, &v, &uy).map(|_| ());

        let ux = ball_cover(f.source(), random_scale(&mut rng, f.source(), 1.0)).expect("radius");
        let fu = ux.image(f.table());
        let ymembers: Vec<Vec<usize>> = random_ball_members(&mut rng, f.target(), inst.cert.scale_s);
        let vy = ColoredFamilies {
            families: greedy_discrete_families(&ymembers, &fu),
            separation: Separation::Discrete(fu),
            mesh_bound: f64::INFINITY,
        };
        let pull = pullback_asdim(&inst.cert, f, &vy, &ux).map(|_| ());

        let w = Cover::canonical(random_ball_members(&mut rng, f.source(), 3.0));
        let weak = pushforward_weak_paracompact(&inst.cert, f, &uy, &w).map(|_| ());
        let bg = bounded_geometry_push(&inst.cert, f, &uy).map(|_| ());

        let x = random_space(&mut rng, max_n.min(40));
        let fams = chain_families(&mut rng, &x);
        let metr = close_under_stars(x.len(), &fams)
            .and_then(|c| chain_metric(&c).and_then(|r| basis_equivalence_report(&c, r.metric)).map(|_| ()));
        [o, push, pull, weak, bg, metr]
    });
    let mut tallies: Vec<SuiteTally> =
        ["ostrand-forward", "pushforward-asdim", "pullback-asdim", "weak-paracompact", "bounded-geometry", "metrization"]
            .iter()
            .map(|n| SuiteTally::new(n))
            .collect();
    for (s, row) in seeds.iter().zip(outcomes) {
        for (t, o) in tallies.iter_mut().zip(row) {
            t.record(*s, o);
        }
    }
    tallies
}
