use std::path::Path;

use serde::Serialize;

use super::{Command, GenKind, GapRule, Method, Report, Scales};
use crate::cover::{ball_cover, lebesgue_number, mesh, multiplicity, Cover};
use crate::dimension::{brick_cover, kolmogorov_split, ostrand_backward, AsdimCertificate, BrickOracle, ColoredFamilies, Separation, Witness};
use crate::error::{Error, Result};
use crate::fuzz::{greedy_discrete_families, run_suite, SuiteTally};
use crate::generate::{self, RandomGraphParams};
use crate::io::{self, CertificateFile, ChainFile, CoverFile, Dist, SpaceFile};
use crate::maps::{certify_n_to_1, pushforward_asdim, CoarseMap};
use crate::metrization::{basis_equivalence_report, chain_metric};
use crate::par;
use crate::space::FiniteMetricSpace;

pub(super) fn dispatch(cmd: &Command) -> Result<Report> {
    match cmd {
        Command::Analyze { space, cover, scales } => analyze(space, cover.as_deref(), scales),
        Command::CertifyAsdim { space, cover, n, method, scales } => certify_asdim(space, cover.as_deref(), *n, *method, scales),
        Command::CheckMap { map, scales, gap_rule, expect_n, certificates } => {
            check_map(map, scales, gap_rule, *expect_n, *certificates)
        }
        Command::Push { map, cover, scale, gap_rule } => push(map, cover, *scale, gap_rule),
        Command::Metrize { space, chain } => metrize(space, chain),
        Command::Fuzz { seed, count, max_n } => fuzz(*seed, *count, *max_n),
        Command::Generate { kind, n, dims, seed, edge_probability, min_weight, max_weight, size, space, radius } => {
            generate(GenArgs {
                kind: *kind,
                n: *n,
                dims: dims.as_deref(),
                seed: *seed,
                edge_probability: *edge_probability,
                min_weight: *min_weight,
                max_weight: *max_weight,
                size: *size,
                space: space.as_deref(),
                radius: *radius,
            })
        }
        Command::Verify { certificate, space, map } => verify(certificate, space.as_deref(), map.as_deref()),
    }
}

fn render<T: Serialize>(value: &T, passed: bool) -> Result<Report> {
    let mut body = io::to_json(value)?;
    body.push('\n');
    Ok(Report { body, passed })
}

/// Construction failures become report rows; input errors abort the run.
fn soft<T>(r: Result<T>) -> Result<std::result::Result<T, String>> {
    match r {
        Ok(v) => Ok(Ok(v)),
        Err(e) if e.is_input_error() => Err(e),
        Err(e) => Ok(Err(e.to_string())),
    }
}

#[derive(Serialize)]
struct SpaceSummary {
    n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    label: Option<String>,
}

impl SpaceSummary {
    fn of(x: &FiniteMetricSpace) -> Self {
        SpaceSummary { n: x.len(), label: x.label().map(str::to_owned) }
    }
}

#[derive(Serialize)]
struct CoverStats {
    #[serde(skip_serializing_if = "Option::is_none")]
    scale: Option<Dist>,
    members: usize,
    multiplicity: usize,
    mesh: Dist,
    covers: bool,
    lebesgue: Option<Dist>,
}

fn cover_stats(x: &FiniteMetricSpace, c: &Cover, scale: Option<f64>) -> CoverStats {
    let covers = c.covers(x.len());
    CoverStats {
        scale: scale.map(Dist),
        members: c.len(),
        multiplicity: multiplicity(c),
        mesh: Dist(mesh(x, c)),
        covers,
        lebesgue: covers.then(|| lebesgue_number(x, c).map(Dist).ok()).flatten(),
    }
}

fn analyze(space: &Path, cover: Option<&Path>, scales: &Scales) -> Result<Report> {
    #[derive(Serialize)]
    struct Out {
        command: &'static str,
        space: SpaceSummary,
        cover: Option<CoverStats>,
        ball_covers: Vec<CoverStats>,
    }
    let x = io::load_space(space)?;
    let cover = cover.map(|p| io::load_cover(p, &x)).transpose()?;
    let ball_covers = par::map_slice(&scales.values(), |&r| -> Result<CoverStats> {
        Ok(cover_stats(&x, &ball_cover(&x, r)?, Some(r)))
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let out = Out {
        command: "analyze",
        space: SpaceSummary::of(&x),
        cover: cover.as_ref().map(|c| cover_stats(&x, c, None)),
        ball_covers,
    };
    render(&out, true)
}

#[derive(Serialize)]
struct CertRow {
    scale: Dist,
    #[serde(skip_serializing_if = "Option::is_none")]
    certificate: Option<CertificateFile>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

fn certify_asdim(space: &Path, cover: Option<&Path>, n: usize, method: Method, scales: &Scales) -> Result<Report> {
    #[derive(Serialize)]
    struct Out {
        command: &'static str,
        space: SpaceSummary,
        method: &'static str,
        n: usize,
        certificates: Vec<CertRow>,
    }
    let x = io::load_space(space)?;
    let scales = scales.required()?;
    let cover = cover.map(|p| io::load_cover(p, &x)).transpose()?;
    let need_cover = || cover.clone().ok_or_else(|| Error::malformed("--cover is required for this method"));
    let build = |r: f64| -> Result<AsdimCertificate> {
        let cert = match method {
            Method::MultCover => {
                let w = need_cover()?;
                AsdimCertificate { base_cover: ball_cover(&x, r)?, n, mesh_bound: mesh(&x, &w), witness: Witness::MultCover(w) }
            }
            Method::Kolmogorov => {
                let u = need_cover()?;
                let split = kolmogorov_split(&x, &u, r, n)?;
                let mesh_bound = split.families.mesh_bound;
                AsdimCertificate { base_cover: u, n, mesh_bound, witness: Witness::Colored(split.families) }
            }
            Method::Backward => {
                let u = ball_cover(&x, r)?;
                let res = ostrand_backward(&x, &u, &BrickOracle, n)?;
                let mesh_bound = res.families.mesh_bound;
                AsdimCertificate { base_cover: u, n, mesh_bound, witness: Witness::Colored(res.families) }
            }
        };
        cert.verify(&x)?;
        Ok(cert)
    };
    let rows = par::map_slice(&scales, |&r| -> Result<CertRow> {
        Ok(match soft(build(r))? {
            Ok(c) => CertRow { scale: Dist(r), certificate: Some(CertificateFile::from_asdim(&c, true)), error: None },
            Err(e) => CertRow { scale: Dist(r), certificate: None, error: Some(e) },
        })
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let passed = rows.iter().all(|r| r.error.is_none());
    let method = match method {
        Method::MultCover => "mult-cover",
        Method::Kolmogorov => "kolmogorov",
        Method::Backward => "backward",
    };
    render(&Out { command: "certify-asdim", space: SpaceSummary::of(&x), method, n, certificates: rows }, passed)
}

fn check_map(map: &Path, scales: &Scales, rule: &GapRule, expect_n: Option<usize>, embed: bool) -> Result<Report> {
    #[derive(Serialize)]
    struct Row {
        #[serde(rename = "S")]
        s: Dist,
        #[serde(rename = "R")]
        r: Dist,
        n: Option<usize>,
        source_mesh: Option<Dist>,
        max_block: Option<usize>,
        verified: bool,
        #[serde(skip_serializing_if = "Option::is_none")]
        error: Option<String>,
        #[serde(skip_serializing_if = "Option::is_none")]
        certificate: Option<CertificateFile>,
    }
    #[derive(Serialize)]
    struct Out {
        command: &'static str,
        source: SpaceSummary,
        target: SpaceSummary,
        gap_rule: String,
        #[serde(skip_serializing_if = "Option::is_none")]
        expect_n: Option<usize>,
        rows: Vec<Row>,
    }
    let f = io::load_map(map)?;
    let scales = scales.required()?;
    let rows = par::map_slice(&scales, |&s| -> Result<Row> {
        let r = rule.eval(s);
        let made = soft(certify_n_to_1(&f, s, r).and_then(|c| c.verify(&f).map(|()| c)))?;
        Ok(match made {
            Ok(c) => Row {
                s: Dist(s),
                r: Dist(r),
                n: Some(c.n),
                source_mesh: Some(Dist(c.source_mesh)),
                max_block: Some(c.max_block_size()),
                verified: true,
                error: None,
                certificate: embed.then(|| CertificateFile::from_n_to_1(&c, true)),
            },
            Err(e) => Row { s: Dist(s), r: Dist(r), n: None, source_mesh: None, max_block: None, verified: false, error: Some(e), certificate: None },
        })
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let passed = rows.iter().all(|row| row.verified && expect_n.is_none_or(|k| row.n == Some(k)));
    let out = Out {
        command: "check-map",
        source: SpaceSummary::of(f.source()),
        target: SpaceSummary::of(f.target()),
        gap_rule: rule.to_string(),
        expect_n,
        rows,
    };
    render(&out, passed)
}

fn push(map: &Path, cover: &Path, s: f64, rule: &GapRule) -> Result<Report> {
    #[derive(Serialize)]
    struct Out {
        command: &'static str,
        multiplicity: Option<usize>,
        covers_target: Option<bool>,
        #[serde(skip_serializing_if = "Option::is_none")]
        certificate: Option<CertificateFile>,
        #[serde(skip_serializing_if = "Option::is_none")]
        error: Option<String>,
    }
    if !(s >= 0.0) || s.is_infinite() {
        return Err(Error::malformed(format!("scale {s} is not a finite non-negative number")));
    }
    let f = io::load_map(map)?;
    let v = io::load_cover(cover, f.source())?;
    let r = rule.eval(s);
    let result = soft((|| {
        let cert = certify_n_to_1(&f, s, r)?;
        let blocks = cert.block_cover();
        let families = greedy_discrete_families(v.members(), &blocks);
        let m = families.len();
        let colored = ColoredFamilies { families, separation: Separation::Discrete(blocks), mesh_bound: f64::INFINITY };
        let y = f.target();
        let radius = y.realized_distances().into_iter().filter(|&d| d <= s / 2.0).fold(0.0, f64::max);
        let out = pushforward_asdim(&cert, &f, &colored, &ball_cover(y, radius)?)?;
        let file = CertificateFile::Pushforward {
            n: cert.n,
            s: Dist(s),
            r: Dist(r),
            families: m,
            bound: out.bound,
            witness: CoverFile::from_cover(&out.cover),
            verified: true,
        };
        Ok((out.multiplicity, out.cover.covers(y.len()), file))
    })())?;
    let (out, passed) = match result {
        Ok((mult, covers, file)) => (
            Out { command: "push", multiplicity: Some(mult), covers_target: Some(covers), certificate: Some(file), error: None },
            true,
        ),
        Err(e) => (Out { command: "push", multiplicity: None, covers_target: None, certificate: None, error: Some(e) }, false),
    };
    render(&out, passed)
}

fn metrize(space: &Path, chain: &Path) -> Result<Report> {
    #[derive(Serialize)]
    struct Level {
        level: usize,
        diameter: Dist,
        radius: Dist,
        offset: Option<usize>,
    }
    #[derive(Serialize)]
    struct Out {
        command: &'static str,
        metric: SpaceFile,
        levels: Vec<Level>,
        verified: bool,
    }
    let x = io::load_space(space)?;
    let chain = io::read_json::<ChainFile>(chain)?.into_chain(x.len())?;
    let report = chain_metric(&chain).and_then(|r| basis_equivalence_report(&chain, r.metric))?;
    let levels = report
        .levels
        .iter()
        .map(|b| Level { level: b.level, diameter: Dist(b.diameter), radius: Dist(b.radius), offset: b.offset })
        .collect();
    render(&Out { command: "metrize", metric: SpaceFile::from_space(&report.metric), levels, verified: true }, true)
}

fn fuzz(seed: u64, count: usize, max_n: usize) -> Result<Report> {
    #[derive(Serialize)]
    struct Out {
        command: &'static str,
        seed: u64,
        count: usize,
        max_n: usize,
        suites: Vec<SuiteTally>,
    }
    if max_n < 2 {
        return Err(Error::malformed("--max-n must be at least 2"));
    }
    let suites = run_suite(seed, count, max_n);
    let passed = suites.iter().all(|t| t.failed == 0);
    render(&Out { command: "fuzz", seed, count, max_n, suites }, passed)
}

struct GenArgs<'a> {
    kind: GenKind,
    n: Option<usize>,
    dims: Option<&'a [usize]>,
    seed: u64,
    edge_probability: f64,
    min_weight: u32,
    max_weight: u32,
    size: Option<usize>,
    space: Option<&'a Path>,
    radius: Option<f64>,
}

fn generate(a: GenArgs<'_>) -> Result<Report> {
    let need_n = || a.n.ok_or_else(|| Error::malformed("--n is required"));
    let need_dims = || a.dims.ok_or_else(|| Error::malformed("--dims is required"));
    match a.kind {
        GenKind::Path => render(&SpaceFile::from_space(&generate::path(need_n()?)?), true),
        GenKind::Grid => render(&SpaceFile::from_space(&generate::grid(need_dims()?)?), true),
        GenKind::RandomGraph => {
            let p = RandomGraphParams {
                n: need_n()?,
                edge_probability: a.edge_probability,
                min_weight: a.min_weight,
                max_weight: a.max_weight,
            };
            let edges = generate::random_edges(&p, &mut generate::rng(a.seed))?;
            let file = SpaceFile {
                n: p.n,
                metric: io::MetricSpec::Graph { edges },
                label: Some(format!("random-graph-{}-seed-{}", p.n, a.seed)),
            };
            render(&file, true)
        }
        GenKind::BrickCover => {
            let size = a.size.ok_or_else(|| Error::malformed("--size is required"))?;
            render(&CoverFile::from_cover(&brick_cover(need_dims()?, size)?), true)
        }
        GenKind::BallCover => {
            let x = io::load_space(a.space.ok_or_else(|| Error::malformed("--space is required"))?)?;
            let r = a.radius.ok_or_else(|| Error::malformed("--radius is required"))?;
            render(&CoverFile::from_cover(&ball_cover(&x, r)?), true)
        }
    }
}

fn verify(certificate: &Path, space: Option<&Path>, map: Option<&Path>) -> Result<Report> {
    #[derive(Serialize)]
    struct Row {
        kind: &'static str,
        ok: bool,
        #[serde(skip_serializing_if = "Option::is_none")]
        error: Option<String>,
    }
    #[derive(Serialize)]
    struct Out {
        command: &'static str,
        results: Vec<Row>,
    }
    let value: serde_json::Value = io::read_json(certificate)?;
    let files: Vec<CertificateFile> = if value.get("kind").is_some() {
        vec![io::from_json(&value.to_string(), "certificate")?]
    } else {
        let rows = value
            .get("certificates")
            .or_else(|| value.get("rows"))
            .and_then(|v| v.as_array())
            .ok_or_else(|| Error::malformed("neither a certificate nor a report listing certificates"))?;
        rows.iter()
            .filter_map(|r| r.get("certificate"))
            .map(|c| io::from_json(&c.to_string(), "certificate"))
            .collect::<Result<_>>()?
    };
    let space = space.map(io::load_space).transpose()?;
    let map = map.map(io::load_map).transpose()?;
    let mut results = Vec::new();
    for file in files {
        let (kind, outcome) = check_certificate(file, space.as_ref(), map.as_ref())?;
        results.push(Row { kind, ok: outcome.is_ok(), error: outcome.err() });
    }
    let passed = !results.is_empty() && results.iter().all(|r| r.ok);
    render(&Out { command: "verify", results }, passed)
}

fn check_certificate(
    file: CertificateFile,
    space: Option<&FiniteMetricSpace>,
    map: Option<&CoarseMap>,
) -> Result<(&'static str, std::result::Result<(), String>)> {
    let need_space = || space.ok_or_else(|| Error::malformed("--space is required for this certificate"));
    let need_map = || map.ok_or_else(|| Error::malformed("--map is required for this certificate"));
    match file {
        CertificateFile::MultCover { .. } | CertificateFile::Colored { .. } => {
            let kind = if matches!(file, CertificateFile::MultCover { .. }) { "mult-cover" } else { "colored" };
            let x = need_space()?;
            let cert = file.into_asdim()?;
            Ok((kind, soft(cert.verify(x))?))
        }
        CertificateFile::NTo1 { .. } => {
            let f = need_map()?;
            let cert = file.into_n_to_1()?;
            Ok(("n-to-1", soft(cert.verify(f))?))
        }
        CertificateFile::Pushforward { n, families, bound, witness, .. } => {
            let f = need_map()?;
            let w = witness.into_cover()?;
            w.check_in(f.target())?;
            let outcome = if bound != n * families {
                Err(format!("bound {bound} is not n·m = {}", n * families))
            } else if multiplicity(&w) > bound {
                Err(format!("multiplicity {} exceeds {bound}", multiplicity(&w)))
            } else {
                Ok(())
            };
            Ok(("pushforward", outcome))
        }
    }
}
