//! Command implementations behind the `hyperprox` binary. Each command is a
//! pure function of the model text and options; the binary only does I/O.

use crate::error::{Error, Result};
use crate::hyperspace::{build_topology, compare, Comparison, HyperTopologyBase, Hyperspace, Provenance, RefinementWitness, TopologySpec};
use crate::model::Model;
use crate::proximity::{check_axioms, is_compatible, CompactnessIdeal, ProximityRelation};
use crate::report::{Fields, Node, Report};
use crate::search::{replay_outcome, replay_steps, search, SearchOutcome, SearchTarget};
use crate::space::{Caps, PointSet, Subset, Verdict};
use crate::strong::{strongly_far, strongly_included, RegularOpens, WitnessResult};

/// Largest `n` for `relations --pairs all`.
pub const ALL_PAIRS_MAX_N: usize = 6;

#[derive(Debug, Clone, Default)]
pub struct Options {
    pub caps: Caps,
    pub timestamp: bool,
}

impl Options {
    /// Applies `--cap-n` / `--cap-hyper` overrides.
    pub fn with_caps(cap_n: Option<usize>, cap_hyper: Option<usize>) -> Self {
        let mut caps = Caps::default();
        if let Some(n) = cap_n {
            caps.max_points = n;
            caps.pair_points = caps.pair_points.min(n);
            caps.witness_points = caps.witness_points.min(n);
        }
        if let Some(h) = cap_hyper {
            caps.hyper_points = h;
        }
        Options { caps, timestamp: false }
    }

    fn report(&self, command: &str) -> Report {
        let mut r = Report::new(command);
        if self.timestamp {
            r.stamp_now();
        }
        r
    }
}

/// Process exit status for an error: 1 usage, 2 parse, 3 cap exceeded.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::CapExceeded { .. } => 3,
        Error::InvalidSpec(_) | Error::InvalidTarget(_) => 1,
        _ => 2,
    }
}

fn usage(msg: impl Into<String>) -> Error {
    Error::InvalidSpec(msg.into())
}

fn verdict_node<W>(v: &Verdict<W>, witness: impl Fn(&W) -> Node) -> Node {
    match v {
        Verdict::Pass => Node::str("pass"),
        Verdict::Fail(w) => Fields::new().with("verdict", Node::str("fail")).with("witness", witness(w)).node(),
    }
}

fn subsets_node(points: &PointSet, sets: &[Subset]) -> Node {
    Node::strs(sets.iter().map(|&s| points.render(s)))
}

fn provenance_text(points: &PointSet, p: &Provenance) -> String {
    match p {
        Provenance::Hit(v) => format!("hit {}", points.render(*v)),
        Provenance::Miss(w) => format!("miss {}", points.render(*w)),
        Provenance::FarMiss(a) => format!("far-miss {}", points.render(*a)),
        Provenance::SfMiss(a) => format!("sf-miss {}", points.render(*a)),
        Provenance::Full => "whole hyperspace".into(),
    }
}

fn parse_model(text: &str, opts: &Options) -> Result<Model> {
    Model::parse_with_caps(text, opts.caps)
}

/// Topology axioms, T1, proximity classification with witnesses,
/// compatibility and relation statistics. Axiom failures are findings.
pub fn cmd_validate(text: &str, opts: &Options) -> Result<Report> {
    let model = parse_model(text, opts)?;
    let points = &model.points;
    let mut report = opts.report("validate");
    report.push("digest", Node::str(model.digest()));
    report.push("points", Node::strs((0..points.len()).map(|p| points.label(p))));

    let tr = &model.topology_report;
    let pair = |&(a, b): &(Subset, Subset)| subsets_node(points, &[a, b]);
    let mut topo = Fields::new()
        .with("opens", Node::int(model.family.opens().len()))
        .with("contains_empty_and_full", verdict_node(&tr.contains_bounds, |m| subsets_node(points, m)))
        .with("union_closed", verdict_node(&tr.union_closed, pair))
        .with("intersection_closed", verdict_node(&tr.intersection_closed, pair));
    let Ok(space) = model.space() else {
        topo.push("t1", Node::Null);
        report.push("topology", topo.node());
        report.push("proximity", Fields::new().with("skipped", Node::str("the open family is not a topology")).node());
        return Ok(report);
    };
    topo.push("t1", Node::Bool(space.is_t1()));
    report.push("topology", topo.node());

    let prox = model.proximity_relation()?;
    let axioms = check_axioms(&prox)?;
    let triple = |&(a, b, c): &(Subset, Subset, Subset)| subsets_node(points, &[a, b, c]);
    let ax = Fields::new()
        .with("P0", verdict_node(&axioms.p0, pair))
        .with("P1", verdict_node(&axioms.p1, pair))
        .with("P2", verdict_node(&axioms.p2, pair))
        .with("P3", verdict_node(&axioms.p3, triple))
        .with("P4", verdict_node(&axioms.p4, triple))
        .with("P5", verdict_node(&axioms.p5, pair))
        .with("EF", verdict_node(&axioms.ef, pair))
        .with("EF-betweenness", verdict_node(&axioms.ef_betweenness, pair));
    let (near, far) = Subset::all(space.len())
        .flat_map(|a| Subset::all(space.len()).map(move |b| (a, b)))
        .fold((0usize, 0usize), |(n, f), (a, b)| if prox.near(a, b) { (n + 1, f) } else { (n, f + 1) });
    report.push(
        "proximity",
        Fields::new()
            .with("kind", Node::str(prox.kind().name()))
            .with("classification", Node::str(axioms.classification.as_str()))
            .with("exhaustive", Node::Bool(axioms.exhaustive))
            .with("axioms", ax.node())
            .with("compatible", verdict_node(&is_compatible(&prox), |&s| Node::str(points.render(s))))
            .with("near_pairs", Node::int(near))
            .with("far_pairs", Node::int(far))
            .node(),
    );

    if !model.replay.is_empty() {
        let rows = replay_steps(&model)?
            .into_iter()
            .map(|(step, observed)| {
                Fields::new()
                    .with("op", Node::str(&step.op))
                    .with("args", Node::strs(step.args.iter().cloned()))
                    .with("expect", Node::str(&step.expect))
                    .with("observed", Node::str(&observed))
                    .with("ok", Node::Bool(observed == step.expect))
                    .node()
            })
            .collect();
        report.push("replay", Node::List(rows));
    }
    Ok(report)
}

/// Which subset pairs `relations` tabulates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PairSelection {
    /// Every ordered pair of named subsets.
    Named,
    /// Every ordered pair of subsets (`n ≤ 6`).
    All,
    /// Explicit `A:B` references.
    List(Vec<String>),
}

fn resolve(model: &Model, text: &str) -> Result<Subset> {
    model.resolve_subset(text).map_err(|e| usage(e.to_string()))
}

/// Per-pair nearness, strong farness and strong inclusion, with witnesses.
pub fn cmd_relations(text: &str, pairs: &PairSelection, opts: &Options) -> Result<Report> {
    let model = parse_model(text, opts)?;
    let space = model.space()?;
    let points = &model.points;
    let n = space.len();
    let prox = model.proximity_relation()?;
    let selected: Vec<(Subset, Subset)> = match pairs {
        PairSelection::All => {
            if n > ALL_PAIRS_MAX_N {
                return Err(Error::CapExceeded { what: "relations over all pairs", n, cap: ALL_PAIRS_MAX_N });
            }
            Subset::all(n).flat_map(|a| Subset::all(n).map(move |b| (a, b))).collect()
        }
        PairSelection::Named => {
            if model.subsets.is_empty() {
                return Err(usage("model has no named subsets; pass --pairs A:B or --pairs all"));
            }
            model.subsets.iter().flat_map(|&(_, a)| model.subsets.iter().map(move |&(_, b)| (a, b))).collect()
        }
        PairSelection::List(list) => list
            .iter()
            .map(|spec| {
                let (a, b) = spec.split_once(':').ok_or_else(|| usage(format!("pair {spec:?} is not of the form A:B")))?;
                Ok((resolve(&model, a)?, resolve(&model, b)?))
            })
            .collect::<Result<_>>()?,
    };
    let regular = RegularOpens::new(space)?;
    let mut rows = Vec::with_capacity(selected.len());
    for (a, b) in selected {
        let sf = match strongly_far(&prox, a, b)? {
            WitnessResult::Holds(w) => Fields::new()
                .with("verdict", Node::str("holds"))
                .with("c", Node::str(points.render(w.c)))
                .with("c_trivial", Node::Bool(w.degenerate))
                .node(),
            WitnessResult::DoesNotHold => Node::str("does-not-hold"),
            WitnessResult::Degenerate => Node::str("degenerate"),
        };
        let hat = match regular.separate(a, b) {
            WitnessResult::Holds(w) => Fields::new()
                .with("verdict", Node::str("holds"))
                .with("e", Node::str(points.render(w.e)))
                .with("c", Node::str(points.render(w.c)))
                .with("int_cl_e", Node::str(points.render(w.e_regular)))
                .with("int_cl_c", Node::str(points.render(w.c_regular)))
                .node(),
            WitnessResult::DoesNotHold => Node::str("does-not-hold"),
            WitnessResult::Degenerate => Node::str("degenerate"),
        };
        rows.push(
            Fields::new()
                .with("a", Node::str(points.render(a)))
                .with("b", Node::str(points.render(b)))
                .with("near", Node::Bool(prox.near(a, b)))
                .with("far", Node::Bool(prox.far(a, b)))
                .with("strongly_far", sf)
                .with("hat_strongly_far", hat)
                .with("a_strongly_within_b", Node::Bool(strongly_included(&prox, a, b)))
                .with("b_strongly_within_a", Node::Bool(strongly_included(&prox, b, a)))
                .node(),
        );
    }
    let mut report = opts.report("relations");
    report.push("digest", Node::str(model.digest()));
    report.push("proximity", Node::str(prox.kind().name()));
    report.push("pairs", Node::List(rows));
    Ok(report)
}

/// Owned ingredients a [`TopologySpec`] may borrow.
enum SpecSource {
    Vietoris,
    Fell(CompactnessIdeal),
    HitMiss(Vec<Subset>),
    FarMiss,
    SfMiss,
    FarMissOnly,
    SfMissOnly,
    Trivial,
}

impl SpecSource {
    fn parse(model: &Model, text: &str) -> Result<SpecSource> {
        let space = model.space()?;
        Ok(match text {
            "vietoris" => SpecSource::Vietoris,
            "fell" => SpecSource::Fell(
                model.compactness_ideal()?.ok_or_else(|| usage("`fell` needs an [ideal] in the model; use fell:all for all closed sets"))?,
            ),
            "fell:all" => SpecSource::Fell(CompactnessIdeal::all_closed(space)),
            "far_miss" => SpecSource::FarMiss,
            "sf_miss" => SpecSource::SfMiss,
            "far_miss_only" => SpecSource::FarMissOnly,
            "sf_miss_only" => SpecSource::SfMissOnly,
            "trivial" => SpecSource::Trivial,
            other => match other.strip_prefix("hitmiss:") {
                Some(list) => SpecSource::HitMiss(
                    list.split('+').filter(|t| !t.trim().is_empty()).map(|t| resolve(model, t)).collect::<Result<_>>()?,
                ),
                None => return Err(usage(format!("unknown topology spec {other:?}"))),
            },
        })
    }

    fn spec<'a>(&'a self, prox: &'a ProximityRelation) -> TopologySpec<'a> {
        match self {
            SpecSource::Vietoris => TopologySpec::vietoris(),
            SpecSource::Fell(ideal) => TopologySpec::fell(ideal),
            SpecSource::HitMiss(family) => TopologySpec::hit_and_miss(family.clone()),
            SpecSource::FarMiss => TopologySpec::far_miss(prox),
            SpecSource::SfMiss => TopologySpec::sf_miss(prox),
            SpecSource::FarMissOnly => TopologySpec::far_miss_only(prox),
            SpecSource::SfMissOnly => TopologySpec::sf_miss_only(prox),
            SpecSource::Trivial => TopologySpec::trivial(),
        }
    }
}

fn side_node(points: &PointSet, spec: &str, base: &HyperTopologyBase) -> Node {
    let base_size = match base.base() {
        Ok(b) => Node::int(b.len()),
        Err(_) => Node::str("over cap"),
    };
    Fields::new()
        .with("spec", Node::str(spec))
        .with("label", Node::str(base.label()))
        .with("subbase_members", Node::int(base.subbase().len()))
        .with("base_members", base_size)
        .with(
            "generators",
            Node::strs(base.subbase().iter().flat_map(|f| f.provenance.iter().map(|p| provenance_text(points, p)))),
        )
        .node()
}

fn witness_node(hs: &Hyperspace, w: &RefinementWitness) -> Node {
    let points = hs.space().points();
    Fields::new()
        .with("open_set", Node::strs(hs.render(&w.member)))
        .with("generated_by", Node::strs(w.provenance.iter().map(|p| provenance_text(points, p))))
        .with("hyperpoint", Node::str(points.render(hs.points()[w.point])))
        .node()
}

/// Compares two hypertopologies on CL(X) of the model's space.
pub fn cmd_compare(text: &str, left: &str, right: &str, opts: &Options) -> Result<Report> {
    let model = parse_model(text, opts)?;
    let space = model.space()?;
    let prox = model.proximity_relation()?;
    let (ls, rs) = (SpecSource::parse(&model, left)?, SpecSource::parse(&model, right)?);
    let hs = Hyperspace::new(space)?;
    let lt = build_topology(&hs, &ls.spec(&prox))?;
    let rt = build_topology(&hs, &rs.spec(&prox))?;
    let cmp = compare(&lt, &rt)?;
    let mut report = opts.report("compare");
    report.push("digest", Node::str(model.digest()));
    report.push("hyperpoints", Node::int(hs.len()));
    report.push("left", side_node(&model.points, left, &lt));
    report.push("right", side_node(&model.points, right, &rt));
    report.push("verdict", Node::str(cmp.verdict()));
    let witnesses = match &cmp {
        Comparison::Equal => Node::Null,
        Comparison::LeftStrictlyFiner { witness } => {
            Fields::new().with("left_not_in_right", witness_node(&hs, witness)).node()
        }
        Comparison::RightStrictlyFiner { witness } => {
            Fields::new().with("right_not_in_left", witness_node(&hs, witness)).node()
        }
        Comparison::Incomparable { right_not_in_left, left_not_in_right } => Fields::new()
            .with("right_not_in_left", witness_node(&hs, right_not_in_left))
            .with("left_not_in_right", witness_node(&hs, left_not_in_right))
            .node(),
    };
    report.push("witnesses", witnesses);
    Ok(report)
}

/// Runs a search. Returns the report and, on success, the witness file text.
/// With `out = None` the witness text is embedded in the report.
pub fn cmd_search(target: &SearchTarget, budget: u64, seed: u64, out: Option<&str>, opts: &Options) -> Result<(Report, Option<String>)> {
    let outcome: SearchOutcome = search(target, budget, seed)?;
    let mut report = opts.report("search");
    let t = &outcome.target;
    report.push(
        "target",
        Fields::new()
            .with("name", Node::str(t.name.as_str()))
            .with("mode", Node::str(match t.mode {
                crate::search::Mode::Exhaustive => "exhaustive",
                crate::search::Mode::Randomized => "randomized",
            }))
            .with("n_range", Node::List(vec![Node::int(t.min_n), Node::int(t.max_n)]))
            .with("require_basic", Node::Bool(t.require_basic))
            .with("require_lodato", Node::Bool(t.require_lodato))
            .with("require_compatible", Node::Bool(t.require_compatible))
            .with("require_t1", Node::Bool(t.require_t1))
            .with("budget", Node::int(budget))
            .with("seed", Node::int(seed))
            .node(),
    );
    report.push("status", Node::str(outcome.status.as_str()));
    report.push("candidates", Node::int(outcome.candidates));
    report.push("filtered_topologies", Node::int(outcome.filtered));
    report.push("evaluations", Node::int(outcome.evaluations));
    let witness_text = outcome.witness.as_ref().map(Model::to_toml);
    if let Some(model) = &outcome.witness {
        let mut w = Fields::new()
            .with("points", Node::int(model.points.len()))
            .with("digest", Node::str(model.digest()))
            .with("replays", Node::Bool(replay_outcome(&outcome)?));
        match out {
            Some(path) => w.push("file", Node::str(path)),
            None => w.push("model", Node::str(witness_text.clone().unwrap_or_default())),
        }
        report.push("witness", w.node());
    }
    Ok((report, witness_text))
}
