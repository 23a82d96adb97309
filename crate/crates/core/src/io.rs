//! JSON file formats. Distances serialize as numbers, with `"inf"` for ∞.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::Path;

use serde::de::{self, DeserializeOwned, Deserializer, Visitor};
use serde::ser::{SerializeMap, Serializer};
use serde::{Deserialize, Serialize};

use crate::chain::BasisChain;
use crate::cover::Cover;
use crate::dimension::{AsdimCertificate, ColoredFamilies, Separation, Witness};
use crate::disjointness::GapReport;
use crate::error::{Error, Result};
use crate::maps::{BallDecomposition, CoarseMap, NTo1Certificate};
use crate::space::FiniteMetricSpace;

/// An extended non-negative real.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dist(pub f64);

impl Serialize for Dist {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if self.0.is_finite() {
            s.serialize_f64(self.0)
        } else if self.0 == f64::INFINITY {
            s.serialize_str("inf")
        } else {
            Err(serde::ser::Error::custom(format!("unrepresentable distance {}", self.0)))
        }
    }
}

impl<'de> Deserialize<'de> for Dist {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = Dist;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a number or \"inf\"")
            }
            fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<Dist, E> {
                Ok(Dist(v))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Dist, E> {
                Ok(Dist(v as f64))
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Dist, E> {
                Ok(Dist(v as f64))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Dist, E> {
                match v {
                    "inf" => Ok(Dist(f64::INFINITY)),
                    _ => Err(E::invalid_value(de::Unexpected::Str(v), &self)),
                }
            }
        }
        d.deserialize_any(V)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum MetricSpec {
    /// Row-major strict upper triangle.
    Matrix { upper: Vec<Dist> },
    /// Weighted edges; distances are shortest paths.
    Graph { edges: Vec<(usize, usize, f64)> },
    /// ℓ¹ integer grid.
    Grid { dims: Vec<usize> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpaceFile {
    pub n: usize,
    pub metric: MetricSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

impl SpaceFile {
    pub fn from_space(x: &FiniteMetricSpace) -> Self {
        let metric = match x.grid_dims() {
            Some(dims) => MetricSpec::Grid { dims: dims.to_vec() },
            None => {
                let n = x.len();
                let upper = (0..n).flat_map(|i| ((i + 1)..n).map(move |j| (i, j))).map(|(i, j)| Dist(x.dist(i, j))).collect();
                MetricSpec::Matrix { upper }
            }
        };
        SpaceFile { n: x.len(), metric, label: x.label().map(str::to_owned) }
    }

    pub fn into_space(self) -> Result<FiniteMetricSpace> {
        let x = match self.metric {
            MetricSpec::Matrix { upper } => {
                let upper: Vec<f64> = upper.into_iter().map(|d| d.0).collect();
                FiniteMetricSpace::from_upper_triangle(self.n, &upper)?
            }
            MetricSpec::Graph { edges } => FiniteMetricSpace::from_graph(self.n, &edges)?,
            MetricSpec::Grid { dims } => {
                let x = FiniteMetricSpace::grid(&dims)?;
                if x.len() != self.n {
                    return Err(Error::malformed(format!("grid {dims:?} has {} points, file says n = {}", x.len(), self.n)));
                }
                x
            }
        };
        Ok(match self.label {
            Some(l) => x.with_label(l),
            None => x,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoverFile {
    pub members: Vec<Vec<usize>>,
}

impl CoverFile {
    pub fn from_cover(c: &Cover) -> Self {
        CoverFile { members: c.members().to_vec() }
    }

    pub fn into_cover(self) -> Result<Cover> {
        Cover::new(self.members)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainFile {
    pub levels: Vec<CoverFile>,
}

impl ChainFile {
    pub fn from_chain(c: &BasisChain) -> Self {
        ChainFile { levels: c.levels().iter().map(CoverFile::from_cover).collect() }
    }

    pub fn into_chain(self, n: usize) -> Result<BasisChain> {
        let levels = self.levels.into_iter().map(CoverFile::into_cover).collect::<Result<Vec<_>>>()?;
        BasisChain::new(n, levels)
    }
}

/// Space paths are relative to the map file's directory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapFile {
    pub source: String,
    pub target: String,
    pub table: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapReportFile {
    pub min_gap: Dist,
    pub witness: Option<(usize, usize)>,
}

impl From<&GapReport> for GapReportFile {
    fn from(g: &GapReport) -> Self {
        GapReportFile { min_gap: Dist(g.min_gap), witness: g.witness }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum SeparationFile {
    Metric(Dist),
    Discrete(CoverFile),
}

/// Per-ball blocks, serialized as an object keyed by ball center.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockTable(pub Vec<BallDecomposition>);

impl Serialize for BlockTable {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(self.0.len()))?;
        for b in &self.0 {
            m.serialize_entry(&b.center.to_string(), &b.blocks)?;
        }
        m.end()
    }
}

impl<'de> Deserialize<'de> for BlockTable {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = BTreeMap::<String, Vec<Vec<usize>>>::deserialize(d)?;
        let mut balls = raw
            .into_iter()
            .map(|(k, blocks)| {
                k.parse::<usize>()
                    .map(|center| BallDecomposition { center, blocks })
                    .map_err(|_| de::Error::custom(format!("block key {k:?} is not a point index")))
            })
            .collect::<std::result::Result<Vec<_>, D::Error>>()?;
        balls.sort_by_key(|b| b.center);
        Ok(BlockTable(balls))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum CertificateFile {
    #[serde(rename = "mult-cover")]
    MultCover { n: usize, scale: Dist, base: CoverFile, witness: CoverFile, verified: bool },
    #[serde(rename = "colored")]
    Colored {
        n: usize,
        scale: Dist,
        base: CoverFile,
        separation: SeparationFile,
        witness: Vec<CoverFile>,
        verified: bool,
    },
    #[serde(rename = "n-to-1")]
    NTo1 {
        #[serde(rename = "S")]
        s: Dist,
        #[serde(rename = "R")]
        r: Dist,
        n: usize,
        source_mesh: Dist,
        blocks: BlockTable,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        discrete_against: Option<CoverFile>,
        verified: bool,
    },
    /// A target cover with a multiplicity bound carried over a map.
    #[serde(rename = "pushforward")]
    Pushforward {
        n: usize,
        #[serde(rename = "S")]
        s: Dist,
        #[serde(rename = "R")]
        r: Dist,
        families: usize,
        bound: usize,
        witness: CoverFile,
        verified: bool,
    },
}

impl CertificateFile {
    pub fn from_asdim(c: &AsdimCertificate, verified: bool) -> Self {
        let base = CoverFile::from_cover(&c.base_cover);
        match &c.witness {
            Witness::MultCover(w) => CertificateFile::MultCover {
                n: c.n,
                scale: Dist(c.mesh_bound),
                base,
                witness: CoverFile::from_cover(w),
                verified,
            },
            Witness::Colored(cf) => CertificateFile::Colored {
                n: c.n,
                scale: Dist(c.mesh_bound),
                base,
                separation: match &cf.separation {
                    Separation::Metric(r) => SeparationFile::Metric(Dist(*r)),
                    Separation::Discrete(w) => SeparationFile::Discrete(CoverFile::from_cover(w)),
                },
                witness: cf.families.iter().map(CoverFile::from_cover).collect(),
                verified,
            },
        }
    }

    pub fn from_n_to_1(c: &NTo1Certificate, verified: bool) -> Self {
        CertificateFile::NTo1 {
            s: Dist(c.scale_s),
            r: Dist(c.gap_r),
            n: c.n,
            source_mesh: Dist(c.source_mesh),
            blocks: BlockTable(c.balls.clone()),
            discrete_against: c.discrete_against.as_ref().map(CoverFile::from_cover),
            verified,
        }
    }

    pub fn into_asdim(self) -> Result<AsdimCertificate> {
        match self {
            CertificateFile::MultCover { n, scale, base, witness, .. } => Ok(AsdimCertificate {
                base_cover: base.into_cover()?,
                n,
                mesh_bound: scale.0,
                witness: Witness::MultCover(witness.into_cover()?),
            }),
            CertificateFile::Colored { n, scale, base, separation, witness, .. } => {
                let families = witness.into_iter().map(CoverFile::into_cover).collect::<Result<Vec<_>>>()?;
                let separation = match separation {
                    SeparationFile::Metric(r) => Separation::Metric(r.0),
                    SeparationFile::Discrete(w) => Separation::Discrete(w.into_cover()?),
                };
                Ok(AsdimCertificate {
                    base_cover: base.into_cover()?,
                    n,
                    mesh_bound: scale.0,
                    witness: Witness::Colored(ColoredFamilies { families, separation, mesh_bound: scale.0 }),
                })
            }
            _ => Err(Error::malformed("not an asymptotic-dimension certificate")),
        }
    }

    pub fn into_n_to_1(self) -> Result<NTo1Certificate> {
        match self {
            CertificateFile::NTo1 { s, r, n, source_mesh, blocks, discrete_against, .. } => Ok(NTo1Certificate {
                scale_s: s.0,
                gap_r: r.0,
                n,
                balls: blocks.0,
                source_mesh: source_mesh.0,
                discrete_against: discrete_against.map(CoverFile::into_cover).transpose()?,
            }),
            _ => Err(Error::malformed("not an n-to-1 certificate")),
        }
    }
}

/// Indented JSON; arrays of scalars stay on one line.
pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let v = serde_json::to_value(value).map_err(|source| Error::Json { context: "serialize".into(), source })?;
    let mut out = String::new();
    write_value(&v, 0, &mut out);
    Ok(out)
}

fn write_value(v: &serde_json::Value, depth: usize, out: &mut String) {
    use serde_json::Value;
    let pad = |d: usize, out: &mut String| out.extend(std::iter::repeat_n("  ", d));
    match v {
        Value::Array(items) if items.iter().all(|i| !i.is_array() && !i.is_object()) => {
            out.push('[');
            for (k, i) in items.iter().enumerate() {
                if k > 0 {
                    out.push_str(", ");
                }
                out.push_str(&i.to_string());
            }
            out.push(']');
        }
        Value::Array(items) => {
            out.push_str("[\n");
            for (k, i) in items.iter().enumerate() {
                pad(depth + 1, out);
                write_value(i, depth + 1, out);
                out.push_str(if k + 1 < items.len() { ",\n" } else { "\n" });
            }
            pad(depth, out);
            out.push(']');
        }
        Value::Object(map) if map.is_empty() => out.push_str("{}"),
        Value::Object(map) => {
            out.push_str("{\n");
            for (k, (key, i)) in map.iter().enumerate() {
                pad(depth + 1, out);
                out.push_str(&Value::String(key.clone()).to_string());
                out.push_str(": ");
                write_value(i, depth + 1, out);
                out.push_str(if k + 1 < map.len() { ",\n" } else { "\n" });
            }
            pad(depth, out);
            out.push('}');
        }
        scalar => out.push_str(&scalar.to_string()),
    }
}

pub fn from_json<T: DeserializeOwned>(text: &str, context: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|source| Error::Json { context: context.into(), source })
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|source| Error::Io { path: path.display().to_string(), source })?;
    from_json(&text, &path.display().to_string())
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = to_json(value)?;
    text.push('\n');
    fs::write(path, text).map_err(|source| Error::Io { path: path.display().to_string(), source })
}

pub fn load_space(path: &Path) -> Result<FiniteMetricSpace> {
    read_json::<SpaceFile>(path)?.into_space()
}

pub fn save_space(path: &Path, x: &FiniteMetricSpace) -> Result<()> {
    write_json(path, &SpaceFile::from_space(x))
}

pub fn load_cover(path: &Path, x: &FiniteMetricSpace) -> Result<Cover> {
    let c = read_json::<CoverFile>(path)?.into_cover()?;
    c.check_in(x)?;
    Ok(c)
}

pub fn load_chain(path: &Path, x: &FiniteMetricSpace) -> Result<BasisChain> {
    read_json::<ChainFile>(path)?.into_chain(x.len())
}

pub fn load_map(path: &Path) -> Result<CoarseMap> {
    let file: MapFile = read_json(path)?;
    let dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
    let source = load_space(&dir.join(&file.source))?;
    let target = load_space(&dir.join(&file.target))?;
    CoarseMap::new(source, target, file.table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cover::ball_cover;
    use crate::disjointness::min_gap;

    #[test]
    fn space_round_trip() {
        let x = FiniteMetricSpace::from_graph(4, &[(0, 1, 0.1), (1, 2, 1.0 / 3.0)]).unwrap().with_label("g");
        let text = to_json(&SpaceFile::from_space(&x)).unwrap();
        assert!(text.contains("\"inf\""));
        let back = from_json::<SpaceFile>(&text, "t").unwrap().into_space().unwrap();
        assert_eq!(back.to_matrix(), x.to_matrix());
        assert_eq!(back.label(), Some("g"));
        assert_eq!(to_json(&SpaceFile::from_space(&back)).unwrap(), text);

        let g = FiniteMetricSpace::grid(&[3, 4]).unwrap();
        let back = from_json::<SpaceFile>(&to_json(&SpaceFile::from_space(&g)).unwrap(), "t").unwrap();
        assert_eq!(back.metric, MetricSpec::Grid { dims: vec![3, 4] });
    }

    #[test]
    fn graph_and_bad_files() {
        let s: SpaceFile = from_json(r#"{"n":3,"metric":{"kind":"graph","edges":[[0,1,2],[1,2,3]]}}"#, "t").unwrap();
        assert_eq!(s.into_space().unwrap().dist(0, 2), 5.0);
        let bad = from_json::<SpaceFile>(r#"{"n":3,"metric":{"kind":"blob"}}"#, "t").unwrap_err();
        assert!(bad.is_input_error());
        let tri: SpaceFile = from_json(r#"{"n":3,"metric":{"kind":"matrix","upper":[1,1,5]}}"#, "t").unwrap();
        assert!(tri.into_space().is_err());
    }

    #[test]
    fn scalar_arrays_inline() {
        let text = to_json(&CoverFile { members: vec![vec![0, 1], vec![2]] }).unwrap();
        assert_eq!(text, "{\n  \"members\": [\n    [0, 1],\n    [2]\n  ]\n}");
        assert_eq!(from_json::<CoverFile>(&text, "t").unwrap().members, vec![vec![0, 1], vec![2]]);
    }

    #[test]
    fn cover_round_trip() {
        let x = FiniteMetricSpace::path(9).unwrap();
        let c = ball_cover(&x, 1.5).unwrap();
        let text = to_json(&CoverFile::from_cover(&c)).unwrap();
        let back = from_json::<CoverFile>(&text, "t").unwrap().into_cover().unwrap();
        assert_eq!(back, c);
        assert_eq!(to_json(&CoverFile::from_cover(&back)).unwrap(), text);
    }

    #[test]
    fn gap_report_json() {
        let x = FiniteMetricSpace::path(10).unwrap();
        let f = Cover::new(vec![vec![0, 1], vec![5], vec![9]]).unwrap();
        let v = serde_json::to_value(GapReportFile::from(&min_gap(&x, &f))).unwrap();
        assert_eq!(v, serde_json::json!({"min_gap": 4.0, "witness": [0, 1]}));
        let x = FiniteMetricSpace::from_graph(2, &[]).unwrap();
        let f = Cover::singletons(2);
        let v = serde_json::to_value(GapReportFile::from(&min_gap(&x, &f))).unwrap();
        assert_eq!(v["min_gap"], "inf");
    }

    #[test]
    fn n_to_1_certificate_round_trip() {
        let x = FiniteMetricSpace::path(21).unwrap();
        let y = FiniteMetricSpace::path(11).unwrap();
        let f = CoarseMap::new(x, y, (0..21).map(|i: usize| i.abs_diff(10)).collect()).unwrap();
        let cert = crate::maps::certify_n_to_1(&f, 1.0, 3.0).unwrap();
        let text = to_json(&CertificateFile::from_n_to_1(&cert, true)).unwrap();
        let back = from_json::<CertificateFile>(&text, "t").unwrap().into_n_to_1().unwrap();
        assert_eq!(back, cert);
        back.verify(&f).unwrap();
    }
}
