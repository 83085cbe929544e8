//! Exhaustive and randomised search over small finite models for witnesses
//! to implications and non-implications between the relations.
//!
//! Exhaustive mode walks, for each `n` in range, every topology on `n`
//! points (ascending by open family) and for each topology the candidate
//! proximities in a fixed order: overlap, every point relation, Alexandroff
//! for every principal ideal, gap proximities on the line metric (discrete
//! topology only), and raw symmetric tables (`n ≤ 2` only). The first
//! candidate that satisfies the constraints and exhibits the target is the
//! witness.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hyperspace::{build_topology, check_lemma37, compare, Hyperspace, TopologySpec};
use crate::model::{Model, ReplayStep};
use crate::proximity::{
    alexandroff_proximity, check_axioms, gap_proximity, is_compatible, overlap_proximity, point_generated_proximity,
    table_proximity, CompactnessIdeal, PointRelation, ProximityAxiomReport, ProximityRelation,
};
use crate::space::{GroundSpace, Metric, Rational, Subset, Verdict};
use crate::strong::{check_far_vs_sf, check_sf_implies_hat_unchecked, hat_strongly_far, strongly_far, WitnessResult};

/// Largest `n` for exhaustive topology enumeration.
pub const EXHAUSTIVE_MAX_N: usize = 4;
/// Largest `n` for raw-table candidates.
pub const TABLE_MAX_N: usize = 2;
/// Largest `n` for randomised search.
pub const RANDOM_MAX_N: usize = 6;
/// Largest `n` for [`enumerate_point_relations`].
pub const POINT_RELATION_MAX_N: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TargetName {
    LodatoNotEf,
    FarNotStronglyFar,
    SfNotHat,
    Lemma37Violation,
    IncomparableTopologies,
    BasicNotLodato,
}

impl TargetName {
    pub const ALL: [TargetName; 6] = [
        TargetName::LodatoNotEf,
        TargetName::FarNotStronglyFar,
        TargetName::SfNotHat,
        TargetName::Lemma37Violation,
        TargetName::IncomparableTopologies,
        TargetName::BasicNotLodato,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            TargetName::LodatoNotEf => "lodato-not-ef",
            TargetName::FarNotStronglyFar => "far-not-strongly-far",
            TargetName::SfNotHat => "sf-not-hat",
            TargetName::Lemma37Violation => "lemma37-violation",
            TargetName::IncomparableTopologies => "incomparable-topologies",
            TargetName::BasicNotLodato => "basic-not-lodato",
        }
    }
}

impl fmt::Display for TargetName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TargetName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        TargetName::ALL
            .into_iter()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| Error::InvalidTarget(format!("unknown target {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CandidateKind {
    Overlap,
    PointRelation,
    Alexandroff,
    Gap,
    Table,
}

impl CandidateKind {
    pub const ALL: [CandidateKind; 5] =
        [CandidateKind::Overlap, CandidateKind::PointRelation, CandidateKind::Alexandroff, CandidateKind::Gap, CandidateKind::Table];
}

impl FromStr for CandidateKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "overlap" => Ok(CandidateKind::Overlap),
            "point_relation" => Ok(CandidateKind::PointRelation),
            "alexandroff" => Ok(CandidateKind::Alexandroff),
            "gap" => Ok(CandidateKind::Gap),
            "table" => Ok(CandidateKind::Table),
            _ => Err(Error::InvalidTarget(format!("unknown proximity kind {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exhaustive,
    Randomized,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SearchTarget {
    pub name: TargetName,
    pub mode: Mode,
    pub min_n: usize,
    pub max_n: usize,
    pub require_basic: bool,
    pub require_compatible: bool,
    pub require_t1: bool,
    pub require_lodato: bool,
    pub kinds: Vec<CandidateKind>,
}

impl SearchTarget {
    /// Defaults follow the hypotheses of the statement each target probes:
    /// every witness must be a basic proximity, `sf-not-hat` only over
    /// compatible Lodato models, `lemma37-violation` additionally over T1
    /// spaces.
    pub fn new(name: TargetName) -> Self {
        let (require_compatible, require_t1, require_lodato) = match name {
            TargetName::SfNotHat => (true, false, true),
            TargetName::Lemma37Violation => (true, true, true),
            _ => (false, false, false),
        };
        SearchTarget {
            name,
            mode: Mode::Exhaustive,
            min_n: 1,
            max_n: 3,
            require_basic: true,
            require_compatible,
            require_t1,
            require_lodato,
            kinds: CandidateKind::ALL.to_vec(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.min_n == 0 || self.min_n > self.max_n {
            return Err(Error::InvalidTarget(format!("empty n range {}..={}", self.min_n, self.max_n)));
        }
        let cap = match self.mode {
            Mode::Exhaustive => EXHAUSTIVE_MAX_N,
            Mode::Randomized => RANDOM_MAX_N,
        };
        if self.max_n > cap {
            return Err(Error::CapExceeded { what: "model search", n: self.max_n, cap });
        }
        if self.kinds.is_empty() {
            return Err(Error::InvalidTarget("no proximity kinds to draw from".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchStatus {
    WitnessFound,
    ExhaustedNoWitness,
    BudgetExhausted,
}

impl SearchStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            SearchStatus::WitnessFound => "witness-found",
            SearchStatus::ExhaustedNoWitness => "exhausted-no-witness",
            SearchStatus::BudgetExhausted => "budget-exhausted",
        }
    }
}

#[derive(Debug, Clone)]
pub struct SearchOutcome {
    pub target: SearchTarget,
    pub status: SearchStatus,
    /// Serialisable model with named subsets and a replay script.
    pub witness: Option<Model>,
    /// Candidates that were fully evaluated.
    pub candidates: u64,
    /// Candidates rejected by the constraints.
    pub filtered: u64,
    /// Relation evaluations spent.
    pub evaluations: u64,
}

/// All topologies on `n ≤ 4` points, ordered by open count then open family.
pub fn enumerate_topologies(n: usize) -> Result<Vec<GroundSpace>> {
    if n == 0 || n > EXHAUSTIVE_MAX_N {
        return Err(Error::CapExceeded { what: "topology enumeration", n, cap: EXHAUSTIVE_MAX_N });
    }
    let full = Subset::full(n).mask();
    let middle: Vec<u32> = (1..full).collect();
    let mut families: Vec<Vec<u32>> = Vec::new();
    for bits in 0u64..1 << middle.len() {
        let mut opens = vec![0, full];
        opens.extend(middle.iter().enumerate().filter(|(i, _)| bits >> i & 1 == 1).map(|(_, &m)| m));
        let closed = opens.iter().all(|&a| opens.iter().all(|&b| opens.contains(&(a | b)) && opens.contains(&(a & b))));
        if closed {
            opens.sort_unstable();
            families.push(opens);
        }
    }
    families.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    families.iter().map(|f| GroundSpace::from_open_masks(n, f)).collect()
}

/// The topology generated by a subbase: finite intersections, then unions.
pub fn topology_from_subbase(n: usize, subbase: &[Subset]) -> Result<GroundSpace> {
    let full = Subset::full(n);
    let mut base: BTreeSet<Subset> = BTreeSet::from([full]);
    for &s in subbase {
        let fresh: Vec<Subset> = base.iter().map(|b| b.intersection(s)).collect();
        base.extend(fresh);
    }
    let mut opens: BTreeSet<Subset> = BTreeSet::from([Subset::EMPTY]);
    for b in base {
        let fresh: Vec<Subset> = opens.iter().map(|o| o.union(b)).collect();
        opens.extend(fresh);
    }
    let masks: Vec<u32> = opens.into_iter().map(Subset::mask).collect();
    GroundSpace::from_open_masks(n, &masks)
}

fn point_pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect()
}

fn relation_from_bits(n: usize, pairs: &[(usize, usize)], bits: u64) -> PointRelation {
    PointRelation::from_pairs(n, pairs.iter().enumerate().filter(|(i, _)| bits >> i & 1 == 1).map(|(_, p)| *p))
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for perm in permutations(n - 1) {
        for slot in 0..n {
            let mut p = perm.clone();
            p.insert(slot, n - 1);
            out.push(p);
        }
    }
    out
}

/// Every symmetric reflexive relation on `n` points, in order of the bit
/// pattern over point pairs `(0,1), (0,2), …`. With `up_to_isomorphism`
/// only the first member of each orbit under point permutations is kept.
pub fn enumerate_point_relations(n: usize, up_to_isomorphism: bool) -> Result<Vec<PointRelation>> {
    if n == 0 || n > POINT_RELATION_MAX_N {
        return Err(Error::CapExceeded { what: "point relation enumeration", n, cap: POINT_RELATION_MAX_N });
    }
    let pairs = point_pairs(n);
    let all: Vec<PointRelation> = (0u64..1 << pairs.len()).map(|bits| relation_from_bits(n, &pairs, bits)).collect();
    if !up_to_isomorphism {
        return Ok(all);
    }
    let perms = permutations(n);
    let mut seen: BTreeSet<Vec<(usize, usize)>> = BTreeSet::new();
    let mut out = Vec::new();
    for r in all {
        let edges = r.pairs();
        if seen.contains(&edges) {
            continue;
        }
        for perm in &perms {
            let mut image: Vec<(usize, usize)> =
                edges.iter().map(|&(a, b)| (perm[a].min(perm[b]), perm[a].max(perm[b]))).collect();
            image.sort_unstable();
            seen.insert(image);
        }
        out.push(r);
    }
    Ok(out)
}

/// All symmetric tables over pairs of nonempty subsets (`n ≤ 2`).
fn raw_tables(space: &GroundSpace) -> Result<Vec<ProximityRelation>> {
    let n = space.len();
    let nonempty: Vec<Subset> = Subset::all(n).skip(1).collect();
    let slots: Vec<(Subset, Subset)> =
        nonempty.iter().enumerate().flat_map(|(i, &a)| nonempty[i..].iter().map(move |&b| (a, b))).collect();
    (0u64..1 << slots.len())
        .map(|bits| table_proximity(space, slots.iter().enumerate().filter(|(i, _)| bits >> i & 1 == 1).map(|(_, p)| *p)))
        .collect()
}

/// Candidate proximities on one space, in canonical order.
pub fn candidates(space: &GroundSpace, kinds: &[CandidateKind]) -> Result<Vec<ProximityRelation>> {
    let n = space.len();
    let mut out = Vec::new();
    for kind in CandidateKind::ALL.into_iter().filter(|k| kinds.contains(k)) {
        match kind {
            CandidateKind::Overlap => out.push(overlap_proximity(space)),
            CandidateKind::PointRelation => {
                for r in enumerate_point_relations(n, false)? {
                    out.push(point_generated_proximity(space, &r)?);
                }
            }
            CandidateKind::Alexandroff => {
                for top in space.closed_sets() {
                    out.push(alexandroff_proximity(space, &CompactnessIdeal::principal(space, top)?));
                }
            }
            CandidateKind::Gap if space.is_discrete() => {
                let metric = Metric::line(n);
                let mut thresholds = vec![Rational::from_integer(0)];
                thresholds.extend(metric.distances());
                for eps in thresholds {
                    out.push(gap_proximity(space, &metric, eps)?);
                }
            }
            CandidateKind::Gap => {}
            CandidateKind::Table if n <= TABLE_MAX_N => out.extend(raw_tables(space)?),
            CandidateKind::Table => {}
        }
    }
    Ok(out)
}

/// A found property: named subsets and the replay steps exhibiting it.
struct Finding {
    subsets: Vec<(String, Subset)>,
    steps: Vec<ReplayStep>,
}

fn step(op: &str, args: &[&str], expect: &str) -> ReplayStep {
    ReplayStep { op: op.into(), args: args.iter().map(|s| s.to_string()).collect(), expect: expect.into() }
}

fn pass_fail(v: bool) -> &'static str {
    if v {
        "pass"
    } else {
        "fail"
    }
}

/// Constraint gate; the steps record what was established.
fn admissible(target: &SearchTarget, prox: &ProximityRelation, axioms: &mut Option<ProximityAxiomReport>) -> Result<Option<Vec<ReplayStep>>> {
    let mut steps = Vec::new();
    if target.require_t1 {
        if !prox.space().is_t1() {
            return Ok(None);
        }
        steps.push(step("t1", &[], "true"));
    }
    if target.require_basic || target.require_lodato {
        let report = axioms_of(prox, axioms)?;
        let wanted: &[&str] = if target.require_lodato { &["P0", "P1", "P2", "P3", "P4"] } else { &["P0", "P1", "P2", "P3"] };
        if !report.is_basic() || (target.require_lodato && !report.is_lodato()) {
            return Ok(None);
        }
        for ax in wanted {
            steps.push(step("axiom", &[ax], "pass"));
        }
    }
    if target.require_compatible {
        if !is_compatible(prox).passed() {
            return Ok(None);
        }
        steps.push(step("compatible", &[], "pass"));
    }
    Ok(Some(steps))
}

fn axioms_of<'a>(prox: &ProximityRelation, cache: &'a mut Option<ProximityAxiomReport>) -> Result<&'a ProximityAxiomReport> {
    if cache.is_none() {
        *cache = Some(check_axioms(prox)?);
    }
    Ok(cache.as_ref().expect("just filled"))
}

fn probe(target: &SearchTarget, prox: &ProximityRelation) -> Result<Option<Finding>> {
    let mut axioms = None;
    let Some(mut steps) = admissible(target, prox, &mut axioms)? else { return Ok(None) };
    let space = prox.space();
    let finding = match target.name {
        TargetName::BasicNotLodato => {
            let r = axioms_of(prox, &mut axioms)?;
            if !(r.is_basic() && !r.p4.passed()) {
                return Ok(None);
            }
            let (a, b, c) = *r.p4.witness().expect("failed verdict has a witness");
            steps.push(step("axiom", &["P4"], "fail"));
            Finding { subsets: vec![("A".into(), a), ("B".into(), b), ("C".into(), c)], steps }
        }
        TargetName::LodatoNotEf => {
            let r = axioms_of(prox, &mut axioms)?;
            if !(r.is_lodato() && !r.ef.passed()) {
                return Ok(None);
            }
            let (a, b) = *r.ef.witness().expect("failed verdict has a witness");
            steps.push(step("axiom", &["P4"], "pass"));
            steps.push(step("axiom", &["EF"], "fail"));
            steps.push(step("near", &["A", "B"], "false"));
            steps.push(step("strongly_far", &["A", "B"], "does-not-hold"));
            Finding { subsets: vec![("A".into(), a), ("B".into(), b)], steps }
        }
        TargetName::FarNotStronglyFar => {
            let split = check_far_vs_sf(prox, 1)?;
            let Some(&(a, b)) = split.far_not_strongly_far_examples.first() else { return Ok(None) };
            steps.push(step("near", &["A", "B"], "false"));
            steps.push(step("strongly_far", &["A", "B"], "does-not-hold"));
            Finding { subsets: vec![("A".into(), a), ("B".into(), b)], steps }
        }
        TargetName::SfNotHat => {
            let report = check_sf_implies_hat_unchecked(prox)?;
            let Some(&(a, b)) = report.violations().first() else { return Ok(None) };
            steps.push(step("strongly_far", &["A", "B"], "holds"));
            steps.push(step("hat_strongly_far", &["A", "B"], "does-not-hold"));
            Finding { subsets: vec![("A".into(), a), ("B".into(), b)], steps }
        }
        TargetName::Lemma37Violation => {
            let hs = Hyperspace::new(space)?;
            let report = check_lemma37(&hs, prox)?;
            let Some(&(b, c)) = report.violations.first() else { return Ok(None) };
            steps.push(step("lemma37", &["B", "C"], "violated"));
            Finding { subsets: vec![("B".into(), b), ("C".into(), c)], steps }
        }
        TargetName::IncomparableTopologies => {
            let hs = Hyperspace::new(space)?;
            let left = build_topology(&hs, &TopologySpec::far_miss_only(prox))?;
            let right = build_topology(&hs, &TopologySpec::sf_miss_only(prox))?;
            if compare(&left, &right)?.verdict() != "incomparable" {
                return Ok(None);
            }
            steps.push(step("compare", &["far_miss_only", "sf_miss_only"], "incomparable"));
            Finding { subsets: Vec::new(), steps }
        }
    };
    Ok(Some(finding))
}

struct Tally {
    candidates: u64,
    filtered: u64,
    evaluations: u64,
}

/// Runs one candidate; `Some` on a witness.
fn visit(target: &SearchTarget, prox: &ProximityRelation, tally: &mut Tally) -> Result<Option<Model>> {
    prox.reset_evaluations();
    let found = probe(target, prox)?;
    tally.evaluations += prox.evaluations();
    tally.candidates += 1;
    match found {
        Some(f) => {
            let mut model = Model::from_relation(prox, f.subsets)?;
            model.replay = f.steps;
            Ok(Some(model))
        }
        None => Ok(None),
    }
}

/// Deterministic in `(target, budget, seed)`; exhaustive mode ignores `seed`.
/// The budget counts relation evaluations and is checked between candidates.
pub fn search(target: &SearchTarget, budget: u64, seed: u64) -> Result<SearchOutcome> {
    target.validate()?;
    let mut tally = Tally { candidates: 0, filtered: 0, evaluations: 0 };
    let finish = |status, witness, tally: Tally| SearchOutcome {
        target: target.clone(),
        status,
        witness,
        candidates: tally.candidates,
        filtered: tally.filtered,
        evaluations: tally.evaluations,
    };
    match target.mode {
        Mode::Exhaustive => {
            for n in target.min_n..=target.max_n {
                for space in enumerate_topologies(n)? {
                    if target.require_t1 && !space.is_t1() {
                        tally.filtered += 1;
                        continue;
                    }
                    for prox in candidates(&space, &target.kinds)? {
                        if tally.evaluations >= budget {
                            return Ok(finish(SearchStatus::BudgetExhausted, None, tally));
                        }
                        if let Some(model) = visit(target, &prox, &mut tally)? {
                            return Ok(finish(SearchStatus::WitnessFound, Some(model), tally));
                        }
                    }
                }
            }
            Ok(finish(SearchStatus::ExhaustedNoWitness, None, tally))
        }
        Mode::Randomized => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            while tally.evaluations < budget {
                let prox = random_candidate(target, &mut rng)?;
                if let Some(model) = visit(target, &prox, &mut tally)? {
                    return Ok(finish(SearchStatus::WitnessFound, Some(model), tally));
                }
            }
            Ok(finish(SearchStatus::BudgetExhausted, None, tally))
        }
    }
}

/// One random model: a topology generated by a random subbase and a
/// proximity of a random permitted kind.
pub fn random_candidate(target: &SearchTarget, rng: &mut ChaCha8Rng) -> Result<ProximityRelation> {
    loop {
        let n = rng.gen_range(target.min_n..=target.max_n);
        let full = Subset::full(n).mask();
        let space = if rng.gen_bool(0.25) {
            GroundSpace::discrete(n)?
        } else {
            let k = rng.gen_range(0..=n + 1);
            let subbase: Vec<Subset> = (0..k).map(|_| Subset::from_mask(rng.gen_range(0..=full))).collect();
            topology_from_subbase(n, &subbase)?
        };
        if target.require_t1 && !space.is_t1() {
            continue;
        }
        let kind = target.kinds[rng.gen_range(0..target.kinds.len())];
        let prox = match kind {
            CandidateKind::Overlap => overlap_proximity(&space),
            CandidateKind::PointRelation => {
                let pairs = point_pairs(n);
                let bits = pairs.iter().enumerate().fold(0u64, |acc, (i, _)| if rng.gen_bool(0.35) { acc | 1 << i } else { acc });
                point_generated_proximity(&space, &relation_from_bits(n, &pairs, bits))?
            }
            CandidateKind::Alexandroff => {
                let closed = space.closed_sets();
                let top = closed[rng.gen_range(0..closed.len())];
                alexandroff_proximity(&space, &CompactnessIdeal::principal(&space, top)?)
            }
            CandidateKind::Gap => {
                let space = GroundSpace::discrete(n)?;
                let metric = random_line_metric(n, rng);
                let mut thresholds = vec![Rational::from_integer(0)];
                thresholds.extend(metric.distances());
                let eps = thresholds[rng.gen_range(0..thresholds.len())];
                gap_proximity(&space, &metric, eps)?
            }
            CandidateKind::Table => {
                if n > TABLE_MAX_N {
                    continue;
                }
                let tables = raw_tables(&space)?;
                tables[rng.gen_range(0..tables.len())].clone()
            }
        };
        return Ok(prox);
    }
}

/// Distinct random integer positions on a line.
fn random_line_metric(n: usize, rng: &mut ChaCha8Rng) -> Metric {
    let mut positions: Vec<i64> = Vec::new();
    while positions.len() < n {
        let p = rng.gen_range(0..4 * n as i64 + 4);
        if !positions.contains(&p) {
            positions.push(p);
        }
    }
    let rows = positions
        .iter()
        .map(|a| positions.iter().map(|b| Rational::from_integer((a - b).abs())).collect())
        .collect();
    Metric::new(rows, crate::space::MetricKind::Metric).expect("distinct line positions form a metric")
}

fn sf_word<W>(r: &WitnessResult<W>) -> &'static str {
    match r {
        WitnessResult::Holds(_) => "holds",
        WitnessResult::DoesNotHold => "does-not-hold",
        WitnessResult::Degenerate => "degenerate",
    }
}

fn axiom_verdict(report: &ProximityAxiomReport, name: &str) -> Result<bool> {
    Ok(match name {
        "P0" => report.p0.passed(),
        "P1" => report.p1.passed(),
        "P2" => report.p2.passed(),
        "P3" => report.p3.passed(),
        "P4" => report.p4.passed(),
        "P5" => report.p5.passed(),
        "EF" => report.ef.passed(),
        "EF-betweenness" => report.ef_betweenness.passed(),
        other => return Err(Error::MalformedWitness(format!("unknown axiom {other:?}"))),
    })
}

fn topology_spec<'a>(name: &str, prox: &'a ProximityRelation) -> Result<TopologySpec<'a>> {
    Ok(match name {
        "vietoris" => TopologySpec::vietoris(),
        "far_miss" => TopologySpec::far_miss(prox),
        "sf_miss" => TopologySpec::sf_miss(prox),
        "far_miss_only" => TopologySpec::far_miss_only(prox),
        "sf_miss_only" => TopologySpec::sf_miss_only(prox),
        "trivial" => TopologySpec::trivial(),
        other => return Err(Error::MalformedWitness(format!("unknown topology {other:?}"))),
    })
}

/// Re-runs one recorded step; returns the observed result.
fn observe(model: &Model, prox: &ProximityRelation, s: &ReplayStep) -> Result<String> {
    let arg = |i: usize| -> Result<Subset> {
        let text = s.args.get(i).ok_or_else(|| Error::MalformedWitness(format!("`{}` needs argument {}", s.op, i + 1)))?;
        model.resolve_subset(text).map_err(|e| Error::MalformedWitness(e.to_string()))
    };
    let space = prox.space();
    Ok(match s.op.as_str() {
        "axiom" => {
            let name = s.args.first().ok_or_else(|| Error::MalformedWitness("`axiom` needs a name".into()))?;
            pass_fail(axiom_verdict(&check_axioms(prox)?, name)?).into()
        }
        "classify" => check_axioms(prox)?.classification.as_str().into(),
        "compatible" => pass_fail(is_compatible(prox).passed()).into(),
        "t1" => space.is_t1().to_string(),
        "near" => prox.near(arg(0)?, arg(1)?).to_string(),
        "strongly_far" => sf_word(&strongly_far(prox, arg(0)?, arg(1)?)?).into(),
        "hat_strongly_far" => sf_word(&hat_strongly_far(space, arg(0)?, arg(1)?)?).into(),
        "lemma37" => {
            let (b, c) = (arg(0)?, arg(1)?);
            let hs = Hyperspace::new(space)?;
            if !space.is_closed(b) || !space.is_closed(c) || b.is_empty() || c.is_empty() {
                return Err(Error::MalformedWitness("lemma37 arguments must be nonempty closed sets".into()));
            }
            let far = crate::hyperspace::far_miss_set(&hs, prox, space.complement(b))?.set;
            let sf = crate::hyperspace::sf_miss_set(&hs, prox, space.complement(c))?.set;
            if far.is_subset_of(&sf) && !c.is_subset_of(b) { "violated" } else { "holds" }.into()
        }
        "compare" => {
            let names = (s.args.first(), s.args.get(1));
            let (Some(l), Some(r)) = names else {
                return Err(Error::MalformedWitness("`compare` needs two topology names".into()));
            };
            let hs = Hyperspace::new(space)?;
            let left = build_topology(&hs, &topology_spec(l, prox)?)?;
            let right = build_topology(&hs, &topology_spec(r, prox)?)?;
            compare(&left, &right)?.verdict().into()
        }
        other => return Err(Error::MalformedWitness(format!("unknown operation {other:?}"))),
    })
}

/// Replays a witness model's script. `Ok(true)` iff every step reproduces
/// its recorded result.
pub fn replay(model: &Model) -> Result<bool> {
    if model.replay.is_empty() {
        return Err(Error::MalformedWitness("no replay steps".into()));
    }
    let prox = model.proximity_relation().map_err(|e| Error::MalformedWitness(e.to_string()))?;
    for s in &model.replay {
        if observe(model, &prox, s)? != s.expect {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Replays a witness after a round trip through the model file format.
pub fn replay_outcome(outcome: &SearchOutcome) -> Result<bool> {
    let model = outcome.witness.as_ref().ok_or_else(|| Error::MalformedWitness("outcome has no witness".into()))?;
    replay(&Model::parse(&model.to_toml())?)
}

/// Checks each replay step, reporting per-step results.
pub fn replay_steps(model: &Model) -> Result<Vec<(ReplayStep, String)>> {
    let prox = model.proximity_relation()?;
    model.replay.iter().map(|s| Ok((s.clone(), observe(model, &prox, s)?))).collect()
}

/// `Pass` when `v` holds; used by report code.
pub fn verdict_word<W>(v: &Verdict<W>) -> &'static str {
    pass_fail(v.passed())
}
