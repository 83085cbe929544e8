//! Finite topological spaces over bitmask-encoded subsets.
//!
//! A [`GroundSpace`] is only constructed from an open family that passes
//! [`OpenFamily::validate`]. Closure and interior are answered from the minimal
//! open neighbourhood of each point, which exists in every finite topology.

use std::fmt;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exact rational used for distances and gap thresholds.
pub type Rational = Ratio<i64>;

/// Largest ground set a [`Subset`] mask can address.
pub const HARD_MAX_POINTS: usize = 30;

/// Size limits for the exhaustive routines.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Caps {
    /// Points in a ground space.
    pub max_points: usize,
    /// Points for routines that scan pairs (or triples) of subsets, cost ~4^n.
    pub pair_points: usize,
    /// Points for per-pair witness searches, cost ~2^n per pair.
    pub witness_points: usize,
    /// Hyperpoints in an enumerated CL(X).
    pub hyper_points: usize,
    /// Distinct members of a generated hyperspace base.
    pub base_members: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            max_points: 16,
            pair_points: 10,
            witness_points: 16,
            hyper_points: 1 << 12,
            base_members: 1 << 16,
        }
    }
}

impl Caps {
    pub(crate) fn check(&self, what: &'static str, n: usize, cap: usize) -> Result<()> {
        if n > cap {
            Err(Error::CapExceeded { what, n, cap })
        } else {
            Ok(())
        }
    }
}

/// A subset of the ground set, one bit per point.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Subset(u32);

impl Subset {
    pub const EMPTY: Subset = Subset(0);

    pub const fn from_mask(mask: u32) -> Self {
        Subset(mask)
    }

    pub const fn mask(self) -> u32 {
        self.0
    }

    pub fn singleton(point: usize) -> Self {
        Subset(1 << point)
    }

    pub fn full(n: usize) -> Self {
        Subset(full_mask(n))
    }

    pub fn from_points<I: IntoIterator<Item = usize>>(points: I) -> Self {
        Subset(points.into_iter().fold(0, |m, p| m | (1 << p)))
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn contains(self, point: usize) -> bool {
        self.0 >> point & 1 == 1
    }

    pub fn union(self, other: Subset) -> Subset {
        Subset(self.0 | other.0)
    }

    pub fn intersection(self, other: Subset) -> Subset {
        Subset(self.0 & other.0)
    }

    pub fn difference(self, other: Subset) -> Subset {
        Subset(self.0 & !other.0)
    }

    pub fn complement(self, n: usize) -> Subset {
        Subset(!self.0 & full_mask(n))
    }

    pub fn is_subset_of(self, other: Subset) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn intersects(self, other: Subset) -> bool {
        self.0 & other.0 != 0
    }

    /// Point indices in ascending order.
    pub fn points(self) -> impl Iterator<Item = usize> {
        let mut rest = self.0;
        std::iter::from_fn(move || {
            if rest == 0 {
                None
            } else {
                let p = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(p)
            }
        })
    }

    /// Every subset of an `n`-point set, ascending by mask.
    pub fn all(n: usize) -> impl Iterator<Item = Subset> {
        (0..=full_mask(n)).map(Subset)
    }

    /// Every subset of `self`, ascending by mask.
    pub fn subsets(self) -> impl Iterator<Item = Subset> {
        let top = self.0;
        let mut next = Some(0u32);
        std::iter::from_fn(move || {
            let cur = next?;
            next = if cur == top { None } else { Some((cur.wrapping_sub(top)) & top) };
            Some(Subset(cur))
        })
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, p) in self.points().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{p}")?;
        }
        f.write_str("}")
    }
}

pub(crate) fn full_mask(n: usize) -> u32 {
    if n >= 32 {
        u32::MAX
    } else {
        (1u32 << n) - 1
    }
}

/// The ground set: a point count with optional distinct labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointSet {
    n: usize,
    labels: Option<Vec<String>>,
}

impl PointSet {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidPointSet("a ground set needs at least one point".into()));
        }
        if n > HARD_MAX_POINTS {
            return Err(Error::CapExceeded { what: "ground set", n, cap: HARD_MAX_POINTS });
        }
        Ok(PointSet { n, labels: None })
    }

    pub fn labelled(labels: Vec<String>) -> Result<Self> {
        let mut set = PointSet::new(labels.len())?;
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(Error::InvalidPointSet(format!("duplicate point label {l:?}")));
            }
        }
        set.labels = Some(labels);
        Ok(set)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn label(&self, point: usize) -> String {
        match &self.labels {
            Some(l) => l[point].clone(),
            None => point.to_string(),
        }
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        match &self.labels {
            Some(l) => l.iter().position(|x| x == label),
            None => label.parse().ok().filter(|&i: &usize| i < self.n),
        }
    }

    /// Renders a subset with point labels, e.g. `{a,b}`.
    pub fn render(&self, s: Subset) -> String {
        let names: Vec<String> = s.points().map(|p| self.label(p)).collect();
        format!("{{{}}}", names.join(","))
    }

    pub fn full(&self) -> Subset {
        Subset::full(self.n)
    }

    pub fn check(&self, s: Subset) -> Result<Subset> {
        if s.is_subset_of(self.full()) {
            Ok(s)
        } else {
            Err(Error::MaskOutOfRange { mask: s.mask(), n: self.n })
        }
    }
}

/// Pass/fail with the counterexample that caused the failure.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", content = "witness", rename_all = "lowercase")]
pub enum Verdict<W> {
    Pass,
    Fail(W),
}

impl<W> Verdict<W> {
    pub fn passed(&self) -> bool {
        matches!(self, Verdict::Pass)
    }

    pub fn witness(&self) -> Option<&W> {
        match self {
            Verdict::Pass => None,
            Verdict::Fail(w) => Some(w),
        }
    }
}

/// Result of checking the topology axioms on an open family.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TopologyReport {
    /// Fails with the missing bound(s) among ∅ and X.
    pub contains_bounds: Verdict<Vec<Subset>>,
    pub union_closed: Verdict<(Subset, Subset)>,
    pub intersection_closed: Verdict<(Subset, Subset)>,
}

impl TopologyReport {
    pub fn passed(&self) -> bool {
        self.contains_bounds.passed() && self.union_closed.passed() && self.intersection_closed.passed()
    }

    fn describe_failure(&self) -> String {
        let mut parts = Vec::new();
        if let Verdict::Fail(missing) = &self.contains_bounds {
            let m: Vec<String> = missing.iter().map(|s| s.to_string()).collect();
            parts.push(format!("missing {}", m.join(" and ")));
        }
        if let Verdict::Fail((a, b)) = &self.union_closed {
            parts.push(format!("union of {a} and {b} is not open"));
        }
        if let Verdict::Fail((a, b)) = &self.intersection_closed {
            parts.push(format!("intersection of {a} and {b} is not open"));
        }
        parts.join("; ")
    }
}

/// An open family that has not yet been checked against the topology axioms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OpenFamily {
    n: usize,
    opens: Vec<Subset>,
}

impl OpenFamily {
    /// Sorts and deduplicates `opens`; rejects masks outside the ground set.
    pub fn new(points: &PointSet, opens: impl IntoIterator<Item = Subset>) -> Result<Self> {
        let mut opens = opens.into_iter().map(|s| points.check(s)).collect::<Result<Vec<_>>>()?;
        opens.sort_unstable();
        opens.dedup();
        Ok(OpenFamily { n: points.len(), opens })
    }

    pub fn opens(&self) -> &[Subset] {
        &self.opens
    }

    fn contains(&self, s: Subset) -> bool {
        self.opens.binary_search(&s).is_ok()
    }

    /// Checks ∅, X membership and pairwise union/intersection closure.
    /// Witness pairs are the first failures in ascending mask order.
    pub fn validate(&self) -> TopologyReport {
        let missing: Vec<Subset> = [Subset::EMPTY, Subset::full(self.n)]
            .into_iter()
            .filter(|s| !self.contains(*s))
            .collect();
        let first_pair = |op: fn(Subset, Subset) -> Subset| {
            for (i, &a) in self.opens.iter().enumerate() {
                for &b in &self.opens[i + 1..] {
                    if !self.contains(op(a, b)) {
                        return Verdict::Fail((a, b));
                    }
                }
            }
            Verdict::Pass
        };
        TopologyReport {
            contains_bounds: if missing.is_empty() { Verdict::Pass } else { Verdict::Fail(missing) },
            union_closed: first_pair(Subset::union),
            intersection_closed: first_pair(Subset::intersection),
        }
    }
}

/// A validated finite topological space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroundSpace {
    points: PointSet,
    opens: Vec<Subset>,
    /// Smallest open set containing each point.
    neighbourhood: Vec<Subset>,
    /// Closure of each singleton.
    point_closure: Vec<Subset>,
    caps: Caps,
}

impl GroundSpace {
    pub fn new(points: PointSet, family: OpenFamily) -> Result<Self> {
        Self::with_caps(points, family, Caps::default())
    }

    pub fn with_caps(points: PointSet, family: OpenFamily, caps: Caps) -> Result<Self> {
        caps.check("ground set", points.len(), caps.max_points)?;
        if family.n != points.len() {
            return Err(Error::InvalidTopology("open family built for a different point set".into()));
        }
        let report = family.validate();
        if !report.passed() {
            return Err(Error::InvalidTopology(report.describe_failure()));
        }
        let n = points.len();
        let neighbourhood: Vec<Subset> = (0..n)
            .map(|p| {
                family
                    .opens
                    .iter()
                    .filter(|u| u.contains(p))
                    .fold(Subset::full(n), |acc, &u| acc.intersection(u))
            })
            .collect();
        let point_closure = (0..n)
            .map(|p| Subset::from_points((0..n).filter(|&q| neighbourhood[q].contains(p))))
            .collect();
        Ok(GroundSpace { points, opens: family.opens, neighbourhood, point_closure, caps })
    }

    pub fn discrete(n: usize) -> Result<Self> {
        let points = PointSet::new(n)?;
        let family = OpenFamily::new(&points, Subset::all(n))?;
        Self::new(points, family)
    }

    pub fn indiscrete(n: usize) -> Result<Self> {
        let points = PointSet::new(n)?;
        let family = OpenFamily::new(&points, [Subset::EMPTY, Subset::full(n)])?;
        Self::new(points, family)
    }

    /// Convenience constructor from raw masks.
    pub fn from_open_masks(n: usize, masks: &[u32]) -> Result<Self> {
        let points = PointSet::new(n)?;
        let family = OpenFamily::new(&points, masks.iter().copied().map(Subset::from_mask))?;
        Self::new(points, family)
    }

    pub fn set_caps(&mut self, caps: Caps) -> Result<()> {
        caps.check("ground set", self.len(), caps.max_points)?;
        self.caps = caps;
        Ok(())
    }

    pub fn caps(&self) -> &Caps {
        &self.caps
    }

    pub fn points(&self) -> &PointSet {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn full(&self) -> Subset {
        self.points.full()
    }

    pub fn complement(&self, s: Subset) -> Subset {
        s.complement(self.len())
    }

    pub fn opens(&self) -> &[Subset] {
        &self.opens
    }

    pub fn is_open(&self, s: Subset) -> bool {
        self.opens.binary_search(&s).is_ok()
    }

    pub fn is_closed(&self, s: Subset) -> bool {
        self.is_open(self.complement(s))
    }

    pub fn is_discrete(&self) -> bool {
        self.neighbourhood.iter().enumerate().all(|(p, u)| *u == Subset::singleton(p))
    }

    /// Smallest open set containing `point`.
    pub fn neighbourhood(&self, point: usize) -> Subset {
        self.neighbourhood[point]
    }

    /// Smallest closed superset of `s`.
    pub fn closure(&self, s: Subset) -> Subset {
        s.points().fold(Subset::EMPTY, |acc, p| acc.union(self.point_closure[p]))
    }

    /// Largest open subset of `s`.
    pub fn interior(&self, s: Subset) -> Subset {
        Subset::from_points((0..self.len()).filter(|&p| self.neighbourhood[p].is_subset_of(s)))
    }

    /// Every singleton is closed.
    pub fn is_t1(&self) -> bool {
        (0..self.len()).all(|p| self.point_closure[p] == Subset::singleton(p))
    }

    /// All closed sets, ∅ included, ascending by mask.
    pub fn closed_sets(&self) -> Vec<Subset> {
        let mut closed: Vec<Subset> = self.opens.iter().map(|&u| self.complement(u)).collect();
        closed.sort_unstable();
        closed
    }
}

/// Whether the triangle inequality is enforced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MetricKind {
    Metric,
    Semimetric,
}

/// Symmetric distance matrix with exact rational entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Metric {
    n: usize,
    kind: MetricKind,
    d: Vec<Rational>,
}

impl Metric {
    #[allow(clippy::needless_range_loop)]
    pub fn new(rows: Vec<Vec<Rational>>, kind: MetricKind) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidMetric(format!("matrix must be {n}x{n}")));
        }
        let zero = Rational::from_integer(0);
        for i in 0..n {
            if rows[i][i] != zero {
                return Err(Error::InvalidMetric(format!("d({i},{i}) must be 0")));
            }
            for j in 0..n {
                if rows[i][j] != rows[j][i] {
                    return Err(Error::InvalidMetric(format!("d({i},{j}) != d({j},{i})")));
                }
                if i != j && rows[i][j] <= zero {
                    return Err(Error::InvalidMetric(format!("d({i},{j}) must be positive")));
                }
            }
        }
        if kind == MetricKind::Metric {
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        if rows[i][k] > rows[i][j] + rows[j][k] {
                            return Err(Error::InvalidMetric(format!(
                                "triangle inequality fails: d({i},{k}) > d({i},{j}) + d({j},{k})"
                            )));
                        }
                    }
                }
            }
        }
        Ok(Metric { n, kind, d: rows.into_iter().flatten().collect() })
    }

    /// Points `0..n` on a line with `d(i,j) = |i - j|`.
    pub fn line(n: usize) -> Self {
        let rows = (0..n)
            .map(|i| (0..n).map(|j| Rational::from_integer((i as i64 - j as i64).abs())).collect())
            .collect();
        Metric::new(rows, MetricKind::Metric).expect("line metric is valid")
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn kind(&self) -> MetricKind {
        self.kind
    }

    pub fn distance(&self, i: usize, j: usize) -> Rational {
        self.d[i * self.n + j]
    }

    /// Distinct off-diagonal distances, ascending.
    pub fn distances(&self) -> Vec<Rational> {
        let mut out: Vec<Rational> =
            (0..self.n).flat_map(|i| (i + 1..self.n).map(move |j| (i, j))).map(|(i, j)| self.distance(i, j)).collect();
        out.sort();
        out.dedup();
        out
    }

    pub fn rows(&self) -> Vec<Vec<Rational>> {
        self.d.chunks(self.n.max(1)).map(|r| r.to_vec()).collect()
    }
}
