//! Proximity relations on the power set of a finite space, their axiom
//! checkers, and the concrete constructors (overlap, gap, Alexandroff,
//! point-generated, explicit table).

use std::collections::BTreeSet;
use std::sync::atomic::{AtomicU64, AtomicU8, Ordering};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::space::{GroundSpace, Metric, Rational, Subset, Verdict};
use crate::strong;

/// Downward-closed, union-closed family of closed sets standing in for the
/// compact closed sets of a finite model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompactnessIdeal {
    members: Vec<Subset>,
}

impl CompactnessIdeal {
    pub fn new(space: &GroundSpace, members: impl IntoIterator<Item = Subset>) -> Result<Self> {
        let mut members: Vec<Subset> = members.into_iter().collect();
        members.sort_unstable();
        members.dedup();
        for &m in &members {
            space.points().check(m)?;
            if !space.is_closed(m) {
                return Err(Error::InvalidIdeal(format!("member {m} is not closed")));
            }
        }
        let ideal = CompactnessIdeal { members };
        if !ideal.contains(Subset::EMPTY) {
            return Err(Error::InvalidIdeal("the empty set must be a member".into()));
        }
        for &k in &ideal.members {
            for k2 in space.closed_sets() {
                if k2.is_subset_of(k) && !ideal.contains(k2) {
                    return Err(Error::InvalidIdeal(format!("closed {k2} lies inside member {k} but is missing")));
                }
            }
            for &k2 in &ideal.members {
                if !ideal.contains(k.union(k2)) {
                    return Err(Error::InvalidIdeal(format!("union of {k} and {k2} is missing")));
                }
            }
        }
        Ok(ideal)
    }

    /// All closed subsets of the closed set `top`.
    pub fn principal(space: &GroundSpace, top: Subset) -> Result<Self> {
        if !space.is_closed(top) {
            return Err(Error::InvalidIdeal(format!("generator {top} is not closed")));
        }
        Ok(CompactnessIdeal { members: space.closed_sets().into_iter().filter(|k| k.is_subset_of(top)).collect() })
    }

    pub fn all_closed(space: &GroundSpace) -> Self {
        CompactnessIdeal { members: space.closed_sets() }
    }

    pub fn members(&self) -> &[Subset] {
        &self.members
    }

    pub fn contains(&self, s: Subset) -> bool {
        self.members.binary_search(&s).is_ok()
    }

    /// Largest member.
    pub fn top(&self) -> Subset {
        self.members.iter().fold(Subset::EMPTY, |a, &m| a.union(m))
    }
}

/// Symmetric reflexive relation on points, stored as one row per point.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PointRelation {
    rows: Vec<Subset>,
}

impl PointRelation {
    pub fn new(rows: Vec<Subset>) -> Result<Self> {
        let n = rows.len();
        for (p, row) in rows.iter().enumerate() {
            if !row.contains(p) {
                return Err(Error::InvalidRelation(format!("point relation is not reflexive at {p}")));
            }
            if !row.is_subset_of(Subset::full(n)) {
                return Err(Error::MaskOutOfRange { mask: row.mask(), n });
            }
            for q in row.points() {
                if !rows[q].contains(p) {
                    return Err(Error::InvalidRelation(format!("point relation is not symmetric at ({p},{q})")));
                }
            }
        }
        Ok(PointRelation { rows })
    }

    /// Equality plus the given pairs, symmetrised.
    pub fn from_pairs(n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut rows: Vec<Subset> = (0..n).map(Subset::singleton).collect();
        for (a, b) in pairs {
            rows[a] = rows[a].union(Subset::singleton(b));
            rows[b] = rows[b].union(Subset::singleton(a));
        }
        PointRelation { rows }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_pairs(n, [])
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn related(&self, a: usize, b: usize) -> bool {
        self.rows[a].contains(b)
    }

    pub fn row(&self, p: usize) -> Subset {
        self.rows[p]
    }

    /// Off-diagonal pairs `(a, b)` with `a < b`.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        (0..self.len()).flat_map(|a| self.rows[a].points().filter(move |&b| b > a).map(move |b| (a, b))).collect()
    }

    pub fn is_transitive(&self) -> bool {
        (0..self.len()).all(|a| self.rows[a].points().all(|b| self.rows[b].is_subset_of(self.rows[a])))
    }
}

#[derive(Debug, Clone)]
pub enum ProximityKind {
    /// `A δ B ⟺ cl A ∩ cl B ≠ ∅`.
    Overlap,
    /// `A δ B ⟺ min d(a, b) ≤ ε`.
    Gap { metric: Metric, epsilon: Rational },
    /// Overlapping closures, or both closures outside the ideal.
    Alexandroff { ideal: CompactnessIdeal },
    /// Explicit near pairs, stored with the smaller mask first.
    Table { near: BTreeSet<(Subset, Subset)> },
    PointGenerated { relation: PointRelation },
    /// Near unless strongly far under the base relation.
    DerivedFromStronglyFar { base: Box<ProximityRelation> },
}

impl ProximityKind {
    pub fn name(&self) -> &'static str {
        match self {
            ProximityKind::Overlap => "overlap",
            ProximityKind::Gap { .. } => "gap",
            ProximityKind::Alexandroff { .. } => "alexandroff",
            ProximityKind::Table { .. } => "table",
            ProximityKind::PointGenerated { .. } => "point_relation",
            ProximityKind::DerivedFromStronglyFar { .. } => "derived_from_strongly_far",
        }
    }
}

const MEMO_UNKNOWN: u8 = 0;
const MEMO_FAR: u8 = 1;
const MEMO_NEAR: u8 = 2;

/// A symmetric nearness relation over all pairs of subsets of a space.
#[derive(Debug)]
pub struct ProximityRelation {
    space: GroundSpace,
    kind: ProximityKind,
    /// Per-point reach for gap and point-generated relations.
    reach: Vec<Subset>,
    memo: Option<Vec<AtomicU8>>,
    evaluations: AtomicU64,
}

impl Clone for ProximityRelation {
    fn clone(&self) -> Self {
        Self::build(self.space.clone(), self.kind.clone())
    }
}

impl ProximityRelation {
    fn build(space: GroundSpace, kind: ProximityKind) -> Self {
        let n = space.len();
        let reach = match &kind {
            ProximityKind::Gap { metric, epsilon } => (0..n)
                .map(|a| Subset::from_points((0..n).filter(|&b| metric.distance(a, b) <= *epsilon)))
                .collect(),
            ProximityKind::PointGenerated { relation } => (0..n).map(|p| relation.row(p)).collect(),
            _ => Vec::new(),
        };
        let memo = match &kind {
            ProximityKind::DerivedFromStronglyFar { .. } if n <= space.caps().pair_points => {
                Some((0..1usize << (2 * n)).map(|_| AtomicU8::new(MEMO_UNKNOWN)).collect())
            }
            _ => None,
        };
        ProximityRelation { space, kind, reach, memo, evaluations: AtomicU64::new(0) }
    }

    pub fn space(&self) -> &GroundSpace {
        &self.space
    }

    pub fn kind(&self) -> &ProximityKind {
        &self.kind
    }

    /// Relation evaluations since construction (or the last reset).
    pub fn evaluations(&self) -> u64 {
        self.evaluations.load(Ordering::Relaxed)
    }

    pub fn reset_evaluations(&self) {
        self.evaluations.store(0, Ordering::Relaxed);
    }

    pub fn near(&self, a: Subset, b: Subset) -> bool {
        self.evaluations.fetch_add(1, Ordering::Relaxed);
        match &self.memo {
            Some(memo) => {
                let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
                let slot = &memo[((lo.mask() as usize) << self.space.len()) | hi.mask() as usize];
                match slot.load(Ordering::Relaxed) {
                    MEMO_NEAR => true,
                    MEMO_FAR => false,
                    _ => {
                        let v = self.evaluate(lo, hi);
                        slot.store(if v { MEMO_NEAR } else { MEMO_FAR }, Ordering::Relaxed);
                        v
                    }
                }
            }
            None => self.evaluate(a, b),
        }
    }

    pub fn far(&self, a: Subset, b: Subset) -> bool {
        !self.near(a, b)
    }

    fn evaluate(&self, a: Subset, b: Subset) -> bool {
        let space = &self.space;
        match &self.kind {
            ProximityKind::Overlap => space.closure(a).intersects(space.closure(b)),
            ProximityKind::Gap { .. } | ProximityKind::PointGenerated { .. } => {
                a.points().fold(Subset::EMPTY, |acc, p| acc.union(self.reach[p])).intersects(b)
            }
            ProximityKind::Alexandroff { ideal } => {
                if a.is_empty() || b.is_empty() {
                    return false;
                }
                let (ca, cb) = (space.closure(a), space.closure(b));
                ca.intersects(cb) || (!ideal.contains(ca) && !ideal.contains(cb))
            }
            ProximityKind::Table { near } => {
                let key = if a <= b { (a, b) } else { (b, a) };
                near.contains(&key)
            }
            ProximityKind::DerivedFromStronglyFar { base } => {
                if a.is_empty() || b.is_empty() {
                    return false;
                }
                !strong::strongly_far_holds(base, a, b)
            }
        }
    }
}

/// `A δ B ⟺ cl A ∩ cl B ≠ ∅`.
pub fn overlap_proximity(space: &GroundSpace) -> ProximityRelation {
    ProximityRelation::build(space.clone(), ProximityKind::Overlap)
}

/// `A δ B ⟺ A, B ≠ ∅ and min{d(a,b)} ≤ ε`, compared exactly.
pub fn gap_proximity(space: &GroundSpace, metric: &Metric, epsilon: Rational) -> Result<ProximityRelation> {
    if metric.len() != space.len() {
        return Err(Error::InvalidMetric(format!(
            "metric has {} points but the space has {}",
            metric.len(),
            space.len()
        )));
    }
    if epsilon < Rational::from_integer(0) {
        return Err(Error::InvalidRelation("gap threshold must be non-negative".into()));
    }
    Ok(ProximityRelation::build(space.clone(), ProximityKind::Gap { metric: metric.clone(), epsilon }))
}

/// Overlapping closures, or both closures outside the compactness ideal.
pub fn alexandroff_proximity(space: &GroundSpace, ideal: &CompactnessIdeal) -> ProximityRelation {
    ProximityRelation::build(space.clone(), ProximityKind::Alexandroff { ideal: ideal.clone() })
}

/// `A δ B ⟺ ∃ a ∈ A, b ∈ B` with `r(a, b)`.
pub fn point_generated_proximity(space: &GroundSpace, relation: &PointRelation) -> Result<ProximityRelation> {
    if relation.len() != space.len() {
        return Err(Error::InvalidRelation(format!(
            "point relation has {} points but the space has {}",
            relation.len(),
            space.len()
        )));
    }
    Ok(ProximityRelation::build(space.clone(), ProximityKind::PointGenerated { relation: relation.clone() }))
}

/// Explicit relation: listed pairs are near (in either order), all others far.
pub fn table_proximity(space: &GroundSpace, near: impl IntoIterator<Item = (Subset, Subset)>) -> Result<ProximityRelation> {
    let mut set = BTreeSet::new();
    for (a, b) in near {
        space.points().check(a)?;
        space.points().check(b)?;
        set.insert(if a <= b { (a, b) } else { (b, a) });
    }
    Ok(ProximityRelation::build(space.clone(), ProximityKind::Table { near: set }))
}

/// Near unless strongly far under `base`; empty sets are far.
pub fn derived_near_from_sf(base: &ProximityRelation) -> Result<ProximityRelation> {
    let space = base.space();
    space.caps().check("strongly-far witness search", space.len(), space.caps().witness_points)?;
    Ok(ProximityRelation::build(
        space.clone(),
        ProximityKind::DerivedFromStronglyFar { base: Box::new(base.clone()) },
    ))
}

/// `{ x : {x} δ A }`.
pub fn induced_closure(prox: &ProximityRelation, a: Subset) -> Subset {
    Subset::from_points((0..prox.space().len()).filter(|&x| prox.near(Subset::singleton(x), a)))
}

/// Induced closure agrees with topological closure on every subset; fails
/// with the first disagreeing subset in mask order.
pub fn is_compatible(prox: &ProximityRelation) -> Verdict<Subset> {
    let space = prox.space();
    Subset::all(space.len())
        .find(|&a| induced_closure(prox, a) != space.closure(a))
        .map_or(Verdict::Pass, Verdict::Fail)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Classification {
    NotBasic,
    Basic,
    Lodato,
    Ef,
}

impl Classification {
    pub fn as_str(self) -> &'static str {
        match self {
            Classification::NotBasic => "not-basic",
            Classification::Basic => "basic",
            Classification::Lodato => "lodato",
            Classification::Ef => "ef",
        }
    }
}

pub type Pair = (Subset, Subset);
pub type Triple = (Subset, Subset, Subset);

/// Per-axiom verdicts, each failure carrying its first witness in mask order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProximityAxiomReport {
    /// False when produced by [`check_axioms_sampled`].
    pub exhaustive: bool,
    pub p0: Verdict<Pair>,
    pub p1: Verdict<Pair>,
    pub p2: Verdict<Pair>,
    pub p3: Verdict<Triple>,
    pub p4: Verdict<Triple>,
    pub p5: Verdict<Pair>,
    pub ef: Verdict<Pair>,
    pub ef_betweenness: Verdict<Pair>,
    pub classification: Classification,
}

impl ProximityAxiomReport {
    fn new(
        exhaustive: bool,
        [p0, p1, p2]: [Verdict<Pair>; 3],
        [p3, p4]: [Verdict<Triple>; 2],
        [p5, ef, ef_betweenness]: [Verdict<Pair>; 3],
    ) -> Self {
        let basic = p0.passed() && p1.passed() && p2.passed() && p3.passed();
        let classification = if !basic {
            Classification::NotBasic
        } else if ef.passed() {
            Classification::Ef
        } else if p4.passed() {
            Classification::Lodato
        } else {
            Classification::Basic
        };
        ProximityAxiomReport { exhaustive, p0, p1, p2, p3, p4, p5, ef, ef_betweenness, classification }
    }

    /// P0–P3.
    pub fn is_basic(&self) -> bool {
        self.classification != Classification::NotBasic
    }

    /// P0–P4.
    pub fn is_lodato(&self) -> bool {
        self.is_basic() && self.p4.passed()
    }

    /// P0–P3 plus EF.
    pub fn is_ef(&self) -> bool {
        self.classification == Classification::Ef
    }

    pub fn is_separated(&self) -> bool {
        self.p5.passed()
    }
}

/// Dense bit table of the relation over all ordered subset pairs.
struct NearTable {
    n: usize,
    words: usize,
    bits: Vec<u64>,
}

impl NearTable {
    fn build(prox: &ProximityRelation) -> Self {
        let n = prox.space().len();
        let size = 1usize << n;
        let words = size.div_ceil(64);
        let mut bits = vec![0u64; size * words];
        for a in 0..size {
            for b in 0..size {
                if prox.near(Subset::from_mask(a as u32), Subset::from_mask(b as u32)) {
                    bits[a * words + b / 64] |= 1 << (b % 64);
                }
            }
        }
        NearTable { n, words, bits }
    }

    fn size(&self) -> usize {
        1 << self.n
    }

    fn near(&self, a: usize, b: usize) -> bool {
        self.bits[a * self.words + b / 64] >> (b % 64) & 1 == 1
    }

    fn full(&self) -> usize {
        self.size() - 1
    }
}

fn s(mask: usize) -> Subset {
    Subset::from_mask(mask as u32)
}

fn first_pair(size: usize, mut bad: impl FnMut(usize, usize) -> bool) -> Verdict<Pair> {
    for a in 0..size {
        for b in 0..size {
            if bad(a, b) {
                return Verdict::Fail((s(a), s(b)));
            }
        }
    }
    Verdict::Pass
}

fn check_p3(t: &NearTable) -> Verdict<Triple> {
    let size = t.size();
    let violates = |a: usize| {
        let singles: usize = (0..t.n).filter(|&x| t.near(a, 1 << x)).fold(0, |m, x| m | 1 << x);
        if t.near(a, 0) && (0..size).any(|c| !t.near(a, c)) {
            return true;
        }
        (1..size).any(|b| t.near(a, b) != (b & singles != 0))
    };
    let Some(a) = (0..size).find(|&a| violates(a)) else { return Verdict::Pass };
    for b in 0..size {
        for c in 0..size {
            if t.near(a, b | c) != (t.near(a, b) || t.near(a, c)) {
                return Verdict::Fail((s(a), s(b), s(c)));
            }
        }
    }
    unreachable!("row {a} reported a P3 violation but no triple reproduces it")
}

fn check_p4(t: &NearTable) -> Verdict<Triple> {
    let size = t.size();
    // induced[c] = { x : {x} δ C }
    let induced: Vec<usize> =
        (0..size).map(|c| (0..t.n).filter(|&x| t.near(1 << x, c)).fold(0, |m, x| m | 1 << x)).collect();
    let mut below = vec![false; size];
    let violates = |a: usize, below: &mut Vec<bool>| {
        // below[T] = some B ⊆ T with A δ B
        for (b, slot) in below.iter_mut().enumerate() {
            *slot = t.near(a, b);
        }
        for bit in 0..t.n {
            for m in 0..size {
                if m >> bit & 1 == 1 && below[m ^ 1 << bit] {
                    below[m] = true;
                }
            }
        }
        (0..size).any(|c| !t.near(a, c) && below[induced[c]])
    };
    let Some(a) = (0..size).find(|&a| violates(a, &mut below)) else { return Verdict::Pass };
    for b in (0..size).filter(|&b| t.near(a, b)) {
        if let Some(c) = (0..size).find(|&c| b & !induced[c] == 0 && !t.near(a, c)) {
            return Verdict::Fail((s(a), s(b), s(c)));
        }
    }
    unreachable!("row {a} reported a P4 violation but no triple reproduces it")
}

fn check_ef(t: &NearTable) -> Verdict<Pair> {
    let size = t.size();
    let full = t.full();
    // far_from[A] = { E : A ∄ E };  comp_far[B] = { E : X∖E ∄ B }
    let far_from: Vec<Vec<bool>> = (0..size).map(|a| (0..size).map(|e| !t.near(a, e)).collect()).collect();
    let comp_far: Vec<Vec<bool>> = (0..size).map(|b| (0..size).map(|e| !t.near(full ^ e, b)).collect()).collect();
    first_pair(size, |a, b| {
        !t.near(a, b) && !(0..size).any(|e| far_from[a][e] && comp_far[b][e])
    })
}

fn check_ef_betweenness(t: &NearTable) -> Verdict<Pair> {
    let size = t.size();
    let full = t.full();
    let strongly_in = |a: usize, b: usize| !t.near(a, full ^ b);
    first_pair(size, |a, b| strongly_in(a, b) && !(0..size).any(|c| strongly_in(a, c) && strongly_in(c, b)))
}

/// Exhaustive verification of P0–P5, EF and the betweenness form of EF.
/// Witnesses are the first violations in ascending `(A, B, C)` mask order.
pub fn check_axioms(prox: &ProximityRelation) -> Result<ProximityAxiomReport> {
    let space = prox.space();
    space.caps().check("exhaustive axiom check", space.len(), space.caps().pair_points)?;
    let t = NearTable::build(prox);
    let size = t.size();
    let p0 = first_pair(size, |a, b| t.near(a, b) != t.near(b, a));
    let p1 = first_pair(size, |a, b| (a == 0 || b == 0) && t.near(a, b));
    let p2 = first_pair(size, |a, b| a & b != 0 && !t.near(a, b));
    let p5 = {
        let n = t.n;
        let hit = (0..n).flat_map(|x| (x + 1..n).map(move |y| (x, y))).find(|&(x, y)| t.near(1 << x, 1 << y));
        hit.map_or(Verdict::Pass, |(x, y)| Verdict::Fail((Subset::singleton(x), Subset::singleton(y))))
    };
    Ok(ProximityAxiomReport::new(
        true,
        [p0, p1, p2],
        [check_p3(&t), check_p4(&t)],
        [p5, check_ef(&t), check_ef_betweenness(&t)],
    ))
}

/// Randomised check for spaces beyond the exhaustive cap. Verdicts only
/// cover the sampled tuples; the report is marked non-exhaustive.
pub fn check_axioms_sampled(prox: &ProximityRelation, samples: usize, seed: u64) -> ProximityAxiomReport {
    let space = prox.space();
    let n = space.len();
    let full = space.full();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draw = |rng: &mut ChaCha8Rng| Subset::from_mask(rng.gen::<u32>() & full.mask());
    let first = |v: &mut Verdict<Pair>, w: Pair| {
        if v.passed() {
            *v = Verdict::Fail(w);
        }
    };
    let (mut p0, mut p1, mut p2, mut p5, mut ef, mut between) =
        (Verdict::Pass, Verdict::Pass, Verdict::Pass, Verdict::Pass, Verdict::Pass, Verdict::Pass);
    let (mut p3, mut p4) = (Verdict::Pass, Verdict::Pass);
    let witness_search = n <= space.caps().witness_points;
    for _ in 0..samples {
        let (a, b, c) = (draw(&mut rng), draw(&mut rng), draw(&mut rng));
        let ab = prox.near(a, b);
        if ab != prox.near(b, a) {
            first(&mut p0, (a, b));
        }
        if (a.is_empty() || b.is_empty()) && ab {
            first(&mut p1, (a, b));
        }
        if a.intersects(b) && !ab {
            first(&mut p2, (a, b));
        }
        if prox.near(a, b.union(c)) != (ab || prox.near(a, c)) && p3.passed() {
            p3 = Verdict::Fail((a, b, c));
        }
        if ab && b.points().all(|p| prox.near(Subset::singleton(p), c)) && !prox.near(a, c) && p4.passed() {
            p4 = Verdict::Fail((a, b, c));
        }
        let (x, y) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if x != y && prox.near(Subset::singleton(x), Subset::singleton(y)) {
            let (x, y) = (x.min(y), x.max(y));
            first(&mut p5, (Subset::singleton(x), Subset::singleton(y)));
        }
        if witness_search {
            if !ab && !Subset::all(n).any(|e| prox.far(a, e) && prox.far(space.complement(e), b)) {
                first(&mut ef, (a, b));
            }
            let inc = |x: Subset, y: Subset| prox.far(x, space.complement(y));
            if inc(a, b) && !Subset::all(n).any(|m| inc(a, m) && inc(m, b)) {
                first(&mut between, (a, b));
            }
        }
    }
    ProximityAxiomReport::new(false, [p0, p1, p2], [p3, p4], [p5, ef, between])
}
