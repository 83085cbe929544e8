//! The plain-text model file: a TOML document describing points, topology,
//! optional metric and compactness ideal, the proximity, named subsets and
//! (for search witnesses) a replay script.
//!
//! ```toml
//! points = ["a", "b", "c"]
//!
//! [topology]
//! kind = "opens"            # discrete | indiscrete | opens | metric
//! opens = [[], ["a"], ["a", "b"], ["a", "b", "c"]]
//!
//! [proximity]
//! kind = "overlap"          # overlap | gap | alexandroff | table | point_relation
//!
//! [subsets]
//! A = ["a"]
//! ```

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::proximity::{
    alexandroff_proximity, gap_proximity, overlap_proximity, point_generated_proximity, table_proximity,
    CompactnessIdeal, PointRelation, ProximityKind, ProximityRelation,
};
use crate::space::{Caps, GroundSpace, Metric, MetricKind, OpenFamily, PointSet, Rational, Subset, TopologyReport};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
enum PointsField {
    Count(usize),
    Names(Vec<String>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
enum PointRef {
    Index(usize),
    Name(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
enum RationalField {
    Int(i64),
    Text(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
enum TopologyKindField {
    Discrete,
    Indiscrete,
    Opens,
    Metric,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TopologyField {
    kind: TopologyKindField,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    opens: Option<Vec<Vec<PointRef>>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MetricField {
    #[serde(default = "default_metric_kind")]
    kind: MetricKind,
    rows: Vec<Vec<RationalField>>,
}

fn default_metric_kind() -> MetricKind {
    MetricKind::Metric
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
enum ProximityKindField {
    Overlap,
    Gap,
    Alexandroff,
    Table,
    PointRelation,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProximityField {
    kind: ProximityKindField,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    epsilon: Option<RationalField>,
    /// Table relations: near pairs of subsets.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    near: Option<Vec<(Vec<PointRef>, Vec<PointRef>)>>,
    /// Point relations: related point pairs besides equality.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pairs: Option<Vec<(PointRef, PointRef)>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct IdealField {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    members: Option<Vec<Vec<PointRef>>>,
    /// Largest member; the ideal is every closed subset of it.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    generator: Option<Vec<PointRef>>,
}

/// One recorded operation call and its expected result.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReplayStep {
    pub op: String,
    #[serde(default)]
    pub args: Vec<String>,
    pub expect: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelDocument {
    points: PointsField,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    topology: Option<TopologyField>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    metric: Option<MetricField>,
    proximity: ProximityField,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    ideal: Option<IdealField>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    subsets: BTreeMap<String, Vec<PointRef>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    replay: Vec<ReplayStep>,
}

/// Proximity as described by the file, before it is bound to a space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProximitySpec {
    Overlap,
    Gap { epsilon: Rational },
    Alexandroff,
    Table { near: Vec<(Subset, Subset)> },
    PointRelation { pairs: Vec<(usize, usize)> },
}

/// How the ideal was written; both forms describe the same family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IdealSpec {
    Members(Vec<Subset>),
    Generator(Subset),
}

/// A parsed model. The open family is kept even when it fails the topology
/// axioms so that the failure can be reported.
#[derive(Debug, Clone)]
pub struct Model {
    pub points: PointSet,
    pub family: OpenFamily,
    pub topology_report: TopologyReport,
    space: Option<GroundSpace>,
    pub metric: Option<Metric>,
    pub ideal: Option<IdealSpec>,
    pub proximity: ProximitySpec,
    /// Named subsets in name order.
    pub subsets: Vec<(String, Subset)>,
    pub replay: Vec<ReplayStep>,
}

fn field_err(field: &str, msg: impl std::fmt::Display) -> Error {
    Error::Parse(format!("field `{field}`: {msg}"))
}

pub fn parse_rational(text: &str) -> Option<Rational> {
    let text = text.trim();
    if let Some((num, den)) = text.split_once('/') {
        let (num, den): (i64, i64) = (num.trim().parse().ok()?, den.trim().parse().ok()?);
        if den == 0 {
            return None;
        }
        return Some(Rational::new(num, den));
    }
    if let Some((int, frac)) = text.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) || frac.len() > 12 {
            return None;
        }
        let negative = int.starts_with('-');
        let whole: i64 = if int.is_empty() || int == "-" { 0 } else { int.parse().ok()? };
        let scale = 10i64.pow(frac.len() as u32);
        let part: i64 = frac.parse().ok()?;
        let value = whole.checked_mul(scale)?.checked_add(if negative { -part } else { part })?;
        return Some(Rational::new(value, scale));
    }
    text.parse().ok().map(Rational::from_integer)
}

fn rational_field(field: &str, r: &RationalField) -> Result<Rational> {
    match r {
        RationalField::Int(v) => Ok(Rational::from_integer(*v)),
        RationalField::Text(t) => parse_rational(t).ok_or_else(|| field_err(field, format!("{t:?} is not an exact rational"))),
    }
}

fn rational_text(r: Rational) -> RationalField {
    if r.is_integer() {
        RationalField::Int(*r.numer())
    } else {
        RationalField::Text(r.to_string())
    }
}

impl Model {
    pub fn parse(text: &str) -> Result<Self> {
        Self::parse_with_caps(text, Caps::default())
    }

    pub fn parse_with_caps(text: &str, caps: Caps) -> Result<Self> {
        let doc: ModelDocument = toml::from_str(text).map_err(|e| Error::Parse(e.to_string().trim_end().to_string()))?;
        Self::from_document(doc, caps)
    }

    fn from_document(doc: ModelDocument, caps: Caps) -> Result<Self> {
        let points = match &doc.points {
            PointsField::Count(n) => PointSet::new(*n),
            PointsField::Names(names) => PointSet::labelled(names.clone()),
        }
        .map_err(|e| field_err("points", e))?;
        caps.check("ground set", points.len(), caps.max_points)?;
        let n = points.len();

        let point = |field: &str, r: &PointRef| -> Result<usize> {
            match r {
                PointRef::Index(i) if *i < n => Ok(*i),
                PointRef::Index(i) => Err(field_err(field, format!("point index {i} out of range"))),
                PointRef::Name(name) => points.index_of(name).ok_or_else(|| field_err(field, format!("unknown point {name:?}"))),
            }
        };
        let subset = |field: &str, refs: &[PointRef]| -> Result<Subset> {
            refs.iter().map(|r| point(field, r)).collect::<Result<Vec<_>>>().map(Subset::from_points)
        };

        let metric = doc
            .metric
            .as_ref()
            .map(|m| {
                let rows = m
                    .rows
                    .iter()
                    .map(|row| row.iter().map(|r| rational_field("metric.rows", r)).collect::<Result<Vec<_>>>())
                    .collect::<Result<Vec<_>>>()?;
                let metric = Metric::new(rows, m.kind).map_err(|e| field_err("metric", e))?;
                if metric.len() != n {
                    return Err(field_err("metric.rows", format!("expected {n} rows, found {}", metric.len())));
                }
                Ok(metric)
            })
            .transpose()?;

        let topology_kind = match &doc.topology {
            Some(t) => t.kind,
            None if metric.is_some() => TopologyKindField::Metric,
            None => return Err(field_err("topology", "missing (required unless a metric is given)")),
        };
        let opens: Vec<Subset> = match topology_kind {
            TopologyKindField::Discrete | TopologyKindField::Metric => Subset::all(n).collect(),
            TopologyKindField::Indiscrete => vec![Subset::EMPTY, points.full()],
            TopologyKindField::Opens => {
                let listed = doc.topology.as_ref().and_then(|t| t.opens.as_ref());
                let listed = listed.ok_or_else(|| field_err("topology.opens", "required when kind = \"opens\""))?;
                listed.iter().map(|o| subset("topology.opens", o)).collect::<Result<_>>()?
            }
        };
        if topology_kind == TopologyKindField::Metric && metric.is_none() {
            return Err(field_err("topology.kind", "\"metric\" needs a [metric] section"));
        }
        let family = OpenFamily::new(&points, opens)?;
        let topology_report = family.validate();
        let space = if topology_report.passed() {
            Some(GroundSpace::with_caps(points.clone(), family.clone(), caps)?)
        } else {
            None
        };

        let p = &doc.proximity;
        let proximity = match p.kind {
            ProximityKindField::Overlap => ProximitySpec::Overlap,
            ProximityKindField::Gap => {
                let eps = p.epsilon.as_ref().ok_or_else(|| field_err("proximity.epsilon", "required for gap proximity"))?;
                let epsilon = rational_field("proximity.epsilon", eps)?;
                if epsilon < Rational::zero() {
                    return Err(field_err("proximity.epsilon", "must be non-negative"));
                }
                if metric.is_none() {
                    return Err(field_err("metric", "gap proximity needs a [metric] section"));
                }
                ProximitySpec::Gap { epsilon }
            }
            ProximityKindField::Alexandroff => {
                if doc.ideal.is_none() {
                    return Err(field_err("ideal", "alexandroff proximity needs an [ideal] section"));
                }
                ProximitySpec::Alexandroff
            }
            ProximityKindField::Table => {
                let near = p.near.as_ref().ok_or_else(|| field_err("proximity.near", "required for table proximity"))?;
                let near = near
                    .iter()
                    .map(|(a, b)| Ok((subset("proximity.near", a)?, subset("proximity.near", b)?)))
                    .collect::<Result<_>>()?;
                ProximitySpec::Table { near }
            }
            ProximityKindField::PointRelation => {
                let pairs = p.pairs.as_ref().ok_or_else(|| field_err("proximity.pairs", "required for point_relation"))?;
                let pairs = pairs
                    .iter()
                    .map(|(a, b)| Ok((point("proximity.pairs", a)?, point("proximity.pairs", b)?)))
                    .collect::<Result<_>>()?;
                ProximitySpec::PointRelation { pairs }
            }
        };

        let ideal = match &doc.ideal {
            None => None,
            Some(IdealField { members: Some(m), generator: None }) => {
                Some(IdealSpec::Members(m.iter().map(|s| subset("ideal.members", s)).collect::<Result<_>>()?))
            }
            Some(IdealField { members: None, generator: Some(g) }) => Some(IdealSpec::Generator(subset("ideal.generator", g)?)),
            Some(_) => return Err(field_err("ideal", "give exactly one of `members` or `generator`")),
        };

        let subsets = doc
            .subsets
            .iter()
            .map(|(name, refs)| Ok((name.clone(), subset(&format!("subsets.{name}"), refs)?)))
            .collect::<Result<_>>()?;

        let model = Model {
            points,
            family,
            topology_report,
            space,
            metric,
            ideal,
            proximity,
            subsets,
            replay: doc.replay,
        };
        if model.space.is_some() {
            // surface ideal / relation errors at load time
            model.compactness_ideal().map_err(|e| field_err("ideal", e))?;
            model.proximity_relation().map_err(|e| field_err("proximity", e))?;
        }
        Ok(model)
    }

    /// Describes a validated space and a proximity built by one of the
    /// serialisable constructors.
    pub fn from_relation(prox: &ProximityRelation, subsets: Vec<(String, Subset)>) -> Result<Self> {
        let space = prox.space().clone();
        let (proximity, metric, ideal) = match prox.kind() {
            ProximityKind::Overlap => (ProximitySpec::Overlap, None, None),
            ProximityKind::Gap { metric, epsilon } => (ProximitySpec::Gap { epsilon: *epsilon }, Some(metric.clone()), None),
            ProximityKind::Alexandroff { ideal } => {
                (ProximitySpec::Alexandroff, None, Some(IdealSpec::Members(ideal.members().to_vec())))
            }
            ProximityKind::Table { near } => (ProximitySpec::Table { near: near.iter().copied().collect() }, None, None),
            ProximityKind::PointGenerated { relation } => (ProximitySpec::PointRelation { pairs: relation.pairs() }, None, None),
            ProximityKind::DerivedFromStronglyFar { .. } => {
                return Err(Error::InvalidRelation("derived relations are not serialisable; tabulate them first".into()))
            }
        };
        let family = OpenFamily::new(space.points(), space.opens().iter().copied())?;
        Ok(Model {
            points: space.points().clone(),
            topology_report: family.validate(),
            family,
            space: Some(space),
            metric,
            ideal,
            proximity,
            subsets,
            replay: Vec::new(),
        })
    }

    /// The validated space, or the topology failure.
    pub fn space(&self) -> Result<&GroundSpace> {
        self.space.as_ref().ok_or_else(|| {
            Error::InvalidTopology(format!("{:?}", self.topology_report))
        })
    }

    pub fn compactness_ideal(&self) -> Result<Option<CompactnessIdeal>> {
        let space = self.space()?;
        self.ideal
            .as_ref()
            .map(|spec| match spec {
                IdealSpec::Members(m) => CompactnessIdeal::new(space, m.iter().copied()),
                IdealSpec::Generator(g) => CompactnessIdeal::principal(space, *g),
            })
            .transpose()
    }

    pub fn proximity_relation(&self) -> Result<ProximityRelation> {
        let space = self.space()?;
        match &self.proximity {
            ProximitySpec::Overlap => Ok(overlap_proximity(space)),
            ProximitySpec::Gap { epsilon } => {
                let metric = self.metric.as_ref().ok_or_else(|| Error::InvalidMetric("no metric given".into()))?;
                gap_proximity(space, metric, *epsilon)
            }
            ProximitySpec::Alexandroff => {
                let ideal = self.compactness_ideal()?.ok_or_else(|| Error::InvalidIdeal("no ideal given".into()))?;
                Ok(alexandroff_proximity(space, &ideal))
            }
            ProximitySpec::Table { near } => table_proximity(space, near.iter().copied()),
            ProximitySpec::PointRelation { pairs } => {
                for &(a, b) in pairs {
                    if a >= space.len() || b >= space.len() {
                        return Err(Error::InvalidRelation(format!("pair ({a},{b}) out of range")));
                    }
                }
                point_generated_proximity(space, &PointRelation::from_pairs(space.len(), pairs.iter().copied()))
            }
        }
    }

    pub fn subset(&self, name: &str) -> Option<Subset> {
        self.subsets.iter().find(|(n, _)| n == name).map(|(_, s)| *s)
    }

    /// Parses a subset reference: a named subset, or `{p,q,...}` with point
    /// labels or indices (`{}` is the empty set).
    pub fn resolve_subset(&self, text: &str) -> Result<Subset> {
        let text = text.trim();
        if let Some(inner) = text.strip_prefix('{').and_then(|t| t.strip_suffix('}')) {
            let mut s = Subset::EMPTY;
            for item in inner.split(',').map(str::trim).filter(|t| !t.is_empty()) {
                let p = self
                    .points
                    .index_of(item)
                    .or_else(|| item.parse::<usize>().ok().filter(|&i| i < self.points.len()))
                    .ok_or_else(|| Error::Parse(format!("unknown point {item:?} in {text}")))?;
                s = s.union(Subset::singleton(p));
            }
            return Ok(s);
        }
        self.subset(text).ok_or_else(|| Error::Parse(format!("unknown named subset {text:?}")))
    }

    fn refs(&self, s: Subset) -> Vec<PointRef> {
        match self.points.labels() {
            Some(labels) => s.points().map(|p| PointRef::Name(labels[p].clone())).collect(),
            None => s.points().map(PointRef::Index).collect(),
        }
    }

    fn document(&self) -> ModelDocument {
        let n = self.points.len();
        let opens = self.family.opens();
        let topology = if opens.len() == 1 << n {
            TopologyField { kind: TopologyKindField::Discrete, opens: None }
        } else if opens == [Subset::EMPTY, self.points.full()] {
            TopologyField { kind: TopologyKindField::Indiscrete, opens: None }
        } else {
            TopologyField { kind: TopologyKindField::Opens, opens: Some(opens.iter().map(|&o| self.refs(o)).collect()) }
        };
        let metric = self.metric.as_ref().map(|m| MetricField {
            kind: m.kind(),
            rows: m.rows().into_iter().map(|r| r.into_iter().map(rational_text).collect()).collect(),
        });
        let mut proximity = ProximityField { kind: ProximityKindField::Overlap, epsilon: None, near: None, pairs: None };
        match &self.proximity {
            ProximitySpec::Overlap => {}
            ProximitySpec::Gap { epsilon } => {
                proximity.kind = ProximityKindField::Gap;
                proximity.epsilon = Some(rational_text(*epsilon));
            }
            ProximitySpec::Alexandroff => proximity.kind = ProximityKindField::Alexandroff,
            ProximitySpec::Table { near } => {
                proximity.kind = ProximityKindField::Table;
                proximity.near = Some(near.iter().map(|&(a, b)| (self.refs(a), self.refs(b))).collect());
            }
            ProximitySpec::PointRelation { pairs } => {
                proximity.kind = ProximityKindField::PointRelation;
                let r = |p: usize| match self.points.labels() {
                    Some(l) => PointRef::Name(l[p].clone()),
                    None => PointRef::Index(p),
                };
                proximity.pairs = Some(pairs.iter().map(|&(a, b)| (r(a), r(b))).collect());
            }
        }
        let ideal = self.ideal.as_ref().map(|spec| match spec {
            IdealSpec::Members(m) => IdealField { members: Some(m.iter().map(|&s| self.refs(s)).collect()), generator: None },
            IdealSpec::Generator(g) => IdealField { members: None, generator: Some(self.refs(*g)) },
        });
        ModelDocument {
            points: match self.points.labels() {
                Some(l) => PointsField::Names(l.to_vec()),
                None => PointsField::Count(n),
            },
            topology: Some(topology),
            metric,
            proximity,
            ideal,
            subsets: self.subsets.iter().map(|(k, v)| (k.clone(), self.refs(*v))).collect(),
            replay: self.replay.clone(),
        }
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(&self.document()).expect("model documents always serialise")
    }

    /// SHA-256 of the canonical serialisation, hex encoded.
    pub fn digest(&self) -> String {
        hex::encode(Sha256::digest(self.to_toml().as_bytes()))
    }
}
