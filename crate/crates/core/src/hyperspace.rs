//! The hyperspace CL(X) of nonempty closed sets, hit / miss / far-miss /
//! strongly-far-miss subbases, and refinement between the generated
//! topologies.
//!
//! A topology is carried by its subbase. For each hyperpoint `p` the
//! intersection of the subbase members containing `p` is the smallest open
//! set around `p`; it is itself a base element, so "G is open" reduces to
//! "every `p ∈ G` has its smallest neighbourhood inside `G`". The base (all
//! finite intersections) is only materialised on request.

use std::cmp::Ordering;
use std::collections::HashSet;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::proximity::{CompactnessIdeal, ProximityRelation};
use crate::space::{GroundSpace, Subset, Verdict};
use crate::strong::strongly_far_raw;

/// CL(X): the nonempty closed sets of a space in ascending mask order.
#[derive(Debug, Clone)]
pub struct Hyperspace {
    space: GroundSpace,
    points: Vec<Subset>,
}

impl Hyperspace {
    pub fn new(space: &GroundSpace) -> Result<Self> {
        let points = enumerate_cl(space)?;
        Ok(Hyperspace { space: space.clone(), points })
    }

    pub fn space(&self) -> &GroundSpace {
        &self.space
    }

    pub fn points(&self) -> &[Subset] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn index_of(&self, s: Subset) -> Option<usize> {
        self.points.binary_search(&s).ok()
    }

    fn family(&self, pred: impl Fn(Subset) -> bool) -> HyperSet {
        let mut set = HyperSet::empty(self.len());
        for (i, &e) in self.points.iter().enumerate() {
            if pred(e) {
                set.insert(i);
            }
        }
        set
    }

    fn require_open(&self, s: Subset) -> Result<()> {
        self.space.points().check(s)?;
        if self.space.is_open(s) {
            Ok(())
        } else {
            Err(Error::NotOpen(s))
        }
    }

    fn require_same_space(&self, prox: &ProximityRelation) -> Result<()> {
        if prox.space() == &self.space {
            Ok(())
        } else {
            Err(Error::MismatchedHyperspace)
        }
    }

    /// Renders a family as a list of hyperpoints with point labels.
    pub fn render(&self, set: &HyperSet) -> Vec<String> {
        set.iter().map(|i| self.space.points().render(self.points[i])).collect()
    }
}

/// All nonempty closed sets, ascending by mask.
pub fn enumerate_cl(space: &GroundSpace) -> Result<Vec<Subset>> {
    let closed: Vec<Subset> = space.closed_sets().into_iter().filter(|c| !c.is_empty()).collect();
    if closed.len() > space.caps().hyper_points {
        return Err(Error::CapExceeded { what: "hyperspace", n: closed.len(), cap: space.caps().hyper_points });
    }
    Ok(closed)
}

/// A set of hyperpoints, one bit per index into [`Hyperspace::points`].
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct HyperSet {
    len: usize,
    words: Vec<u64>,
}

impl HyperSet {
    pub fn empty(len: usize) -> Self {
        HyperSet { len, words: vec![0; len.div_ceil(64)] }
    }

    pub fn full(len: usize) -> Self {
        let mut set = Self::empty(len);
        for i in 0..len {
            set.insert(i);
        }
        set
    }

    pub fn insert(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub fn contains(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn intersection(&self, other: &HyperSet) -> HyperSet {
        HyperSet { len: self.len, words: self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect() }
    }

    pub fn is_subset_of(&self, other: &HyperSet) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|w| *w == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(|&i| self.contains(i))
    }
}

impl Ord for HyperSet {
    /// Compared as a binary number, hyperpoint 0 least significant.
    fn cmp(&self, other: &Self) -> Ordering {
        self.words.iter().rev().cmp(other.words.iter().rev()).then(self.len.cmp(&other.len))
    }
}

impl PartialOrd for HyperSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for HyperSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// Which generator produced a subbase member.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "set", rename_all = "kebab-case")]
pub enum Provenance {
    /// `V⁻ = { E : E ∩ V ≠ ∅ }`.
    Hit(Subset),
    /// `W⁺ = { E : E ⊆ W }`.
    Miss(Subset),
    /// `A⁺⁺ = { E : E ∄ X∖A }`.
    FarMiss(Subset),
    /// `A_⋁ = { E : E strongly far from X∖A }`.
    SfMiss(Subset),
    /// The whole hyperspace (the empty intersection).
    Full,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::Hit(v) => write!(f, "{v}-"),
            Provenance::Miss(w) => write!(f, "{w}+"),
            Provenance::FarMiss(a) => write!(f, "{a}++"),
            Provenance::SfMiss(a) => write!(f, "{a}_sf"),
            Provenance::Full => f.write_str("CL(X)"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HyperFamily {
    pub set: HyperSet,
    /// Every generator that produced this family, in generation order.
    pub provenance: Vec<Provenance>,
}

impl HyperFamily {
    fn new(set: HyperSet, provenance: Provenance) -> Self {
        HyperFamily { set, provenance: vec![provenance] }
    }
}

/// `V⁻ = { E ∈ CL(X) : E ∩ V ≠ ∅ }`.
pub fn hit_set(hs: &Hyperspace, v: Subset) -> Result<HyperFamily> {
    hs.require_open(v)?;
    Ok(HyperFamily::new(hs.family(|e| e.intersects(v)), Provenance::Hit(v)))
}

/// `W⁺ = { E ∈ CL(X) : E ⊆ W }`.
pub fn miss_set(hs: &Hyperspace, w: Subset) -> Result<HyperFamily> {
    hs.require_open(w)?;
    Ok(HyperFamily::new(hs.family(|e| e.is_subset_of(w)), Provenance::Miss(w)))
}

/// `A⁺⁺ = { E ∈ CL(X) : E ∄ X∖A }`.
pub fn far_miss_set(hs: &Hyperspace, prox: &ProximityRelation, a: Subset) -> Result<HyperFamily> {
    hs.require_open(a)?;
    hs.require_same_space(prox)?;
    let outside = hs.space.complement(a);
    Ok(HyperFamily::new(hs.family(|e| prox.far(e, outside)), Provenance::FarMiss(a)))
}

/// `A_⋁ = { E ∈ CL(X) : E strongly far from X∖A }`, read literally; when
/// the relation satisfies P1, `X_⋁` is all of CL(X).
pub fn sf_miss_set(hs: &Hyperspace, prox: &ProximityRelation, a: Subset) -> Result<HyperFamily> {
    hs.require_open(a)?;
    hs.require_same_space(prox)?;
    let space = &hs.space;
    space.caps().check("strongly-far witness search", space.len(), space.caps().witness_points)?;
    let outside = space.complement(a);
    Ok(HyperFamily::new(hs.family(|e| strongly_far_raw(prox, e, outside)), Provenance::SfMiss(a)))
}

/// The miss half of a hit-and-miss style topology.
#[derive(Debug, Clone)]
pub enum MissHalf<'a> {
    None,
    /// `W⁺` for every open `W`.
    Vietoris,
    /// `W⁺` for open `W` whose complement is in the ideal.
    Fell(&'a CompactnessIdeal),
    /// `W⁺` for open `W` whose complement is in the given family of closed sets.
    HitAndMiss(Vec<Subset>),
    /// `A⁺⁺` for every open `A`.
    FarMiss(&'a ProximityRelation),
    /// `A_⋁` for every open `A`.
    SfMiss(&'a ProximityRelation),
}

#[derive(Debug, Clone)]
pub struct TopologySpec<'a> {
    /// Include `V⁻` for every open `V`.
    pub hit: bool,
    pub miss: MissHalf<'a>,
    pub label: String,
}

impl<'a> TopologySpec<'a> {
    pub fn vietoris() -> Self {
        TopologySpec { hit: true, miss: MissHalf::Vietoris, label: "vietoris".into() }
    }

    pub fn fell(ideal: &'a CompactnessIdeal) -> Self {
        TopologySpec { hit: true, miss: MissHalf::Fell(ideal), label: "fell".into() }
    }

    pub fn hit_and_miss(family: Vec<Subset>) -> Self {
        TopologySpec { hit: true, miss: MissHalf::HitAndMiss(family), label: "hitmiss".into() }
    }

    pub fn far_miss(prox: &'a ProximityRelation) -> Self {
        TopologySpec { hit: true, miss: MissHalf::FarMiss(prox), label: "far_miss".into() }
    }

    pub fn sf_miss(prox: &'a ProximityRelation) -> Self {
        TopologySpec { hit: true, miss: MissHalf::SfMiss(prox), label: "sf_miss".into() }
    }

    /// `A⁺⁺` subbase alone.
    pub fn far_miss_only(prox: &'a ProximityRelation) -> Self {
        TopologySpec { hit: false, miss: MissHalf::FarMiss(prox), label: "far_miss_only".into() }
    }

    /// `A_⋁` subbase alone.
    pub fn sf_miss_only(prox: &'a ProximityRelation) -> Self {
        TopologySpec { hit: false, miss: MissHalf::SfMiss(prox), label: "sf_miss_only".into() }
    }

    /// Only CL(X) and ∅ are open.
    pub fn trivial() -> Self {
        TopologySpec { hit: false, miss: MissHalf::None, label: "trivial".into() }
    }
}

/// A hyperspace topology given by its subbase.
#[derive(Debug, Clone)]
pub struct HyperTopologyBase {
    label: String,
    hyperspace: Vec<Subset>,
    subbase: Vec<HyperFamily>,
    /// Smallest open set around each hyperpoint.
    neighbourhoods: Vec<HyperSet>,
    base_cap: usize,
}

pub fn build_topology(hs: &Hyperspace, spec: &TopologySpec<'_>) -> Result<HyperTopologyBase> {
    let space = &hs.space;
    let opens = space.opens();
    let mut generated = Vec::new();
    if spec.hit {
        for &v in opens {
            generated.push(hit_set(hs, v)?);
        }
    }
    match &spec.miss {
        MissHalf::None => {}
        MissHalf::Vietoris => {
            for &w in opens {
                generated.push(miss_set(hs, w)?);
            }
        }
        MissHalf::Fell(ideal) => {
            for &m in ideal.members() {
                if !space.is_closed(m) {
                    return Err(Error::InvalidSpec(format!("ideal member {m} is not closed")));
                }
            }
            for &w in opens.iter().filter(|w| ideal.contains(space.complement(**w))) {
                generated.push(miss_set(hs, w)?);
            }
        }
        MissHalf::HitAndMiss(family) => {
            for &b in family {
                space.points().check(b)?;
                if !space.is_closed(b) {
                    return Err(Error::InvalidSpec(format!("miss family member {b} is not closed")));
                }
            }
            for &w in opens.iter().filter(|w| family.contains(&space.complement(**w))) {
                generated.push(miss_set(hs, w)?);
            }
        }
        MissHalf::FarMiss(prox) => {
            for &a in opens {
                generated.push(far_miss_set(hs, prox, a)?);
            }
        }
        MissHalf::SfMiss(prox) => {
            for &a in opens {
                generated.push(sf_miss_set(hs, prox, a)?);
            }
        }
    }

    let mut subbase: Vec<HyperFamily> = Vec::new();
    for fam in generated {
        match subbase.iter_mut().find(|f| f.set == fam.set) {
            Some(existing) => existing.provenance.extend(fam.provenance),
            None => subbase.push(fam),
        }
    }

    let neighbourhoods = (0..hs.len())
        .map(|p| {
            subbase
                .iter()
                .filter(|f| f.set.contains(p))
                .fold(HyperSet::full(hs.len()), |acc, f| acc.intersection(&f.set))
        })
        .collect();
    Ok(HyperTopologyBase {
        label: spec.label.clone(),
        hyperspace: hs.points.clone(),
        subbase,
        neighbourhoods,
        base_cap: space.caps().base_members,
    })
}

impl HyperTopologyBase {
    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn subbase(&self) -> &[HyperFamily] {
        &self.subbase
    }

    pub fn hyperspace(&self) -> &[Subset] {
        &self.hyperspace
    }

    /// Smallest open set containing hyperpoint `p`.
    pub fn neighbourhood(&self, p: usize) -> &HyperSet {
        &self.neighbourhoods[p]
    }

    /// `G` is open: it contains the smallest neighbourhood of each member.
    /// Fails with the first member whose neighbourhood escapes `G`.
    pub fn open_check(&self, g: &HyperSet) -> Verdict<usize> {
        g.iter().find(|&p| !self.neighbourhoods[p].is_subset_of(g)).map_or(Verdict::Pass, Verdict::Fail)
    }

    /// All finite intersections of subbase members (CL(X) included),
    /// deduplicated and sorted.
    pub fn base(&self) -> Result<Vec<HyperSet>> {
        let full = HyperSet::full(self.hyperspace.len());
        let mut seen: HashSet<HyperSet> = HashSet::from([full.clone()]);
        let mut members = vec![full];
        for fam in &self.subbase {
            let fresh: Vec<HyperSet> = members.iter().map(|b| b.intersection(&fam.set)).collect();
            for b in fresh {
                if seen.insert(b.clone()) {
                    members.push(b);
                    if members.len() > self.base_cap {
                        return Err(Error::CapExceeded {
                            what: "hyperspace base",
                            n: members.len(),
                            cap: self.base_cap,
                        });
                    }
                }
            }
        }
        members.sort();
        Ok(members)
    }
}

/// A member of the coarser candidate that is not open in the finer one:
/// `point` lies in `member` but no base element of the finer topology fits
/// between them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RefinementWitness {
    pub member: HyperSet,
    pub provenance: Vec<Provenance>,
    pub point: usize,
}

/// `left` refines `right`: every open set of `right` is open in `left`.
pub fn refines(left: &HyperTopologyBase, right: &HyperTopologyBase) -> Result<Verdict<RefinementWitness>> {
    if left.hyperspace != right.hyperspace {
        return Err(Error::MismatchedHyperspace);
    }
    for fam in &right.subbase {
        if let Verdict::Fail(point) = left.open_check(&fam.set) {
            return Ok(Verdict::Fail(RefinementWitness {
                member: fam.set.clone(),
                provenance: fam.provenance.clone(),
                point,
            }));
        }
    }
    Ok(Verdict::Pass)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Comparison {
    Equal,
    /// Witness: a left subbase member that is not open on the right.
    LeftStrictlyFiner { witness: RefinementWitness },
    /// Witness: a right subbase member that is not open on the left.
    RightStrictlyFiner { witness: RefinementWitness },
    Incomparable {
        /// A right open set not open in left.
        right_not_in_left: RefinementWitness,
        /// A left open set not open in right.
        left_not_in_right: RefinementWitness,
    },
}

impl Comparison {
    pub fn verdict(&self) -> &'static str {
        match self {
            Comparison::Equal => "equal",
            Comparison::LeftStrictlyFiner { .. } => "left-strictly-finer",
            Comparison::RightStrictlyFiner { .. } => "right-strictly-finer",
            Comparison::Incomparable { .. } => "incomparable",
        }
    }
}

pub fn compare(left: &HyperTopologyBase, right: &HyperTopologyBase) -> Result<Comparison> {
    let l_fine = refines(left, right)?;
    let r_fine = refines(right, left)?;
    Ok(match (l_fine, r_fine) {
        (Verdict::Pass, Verdict::Pass) => Comparison::Equal,
        (Verdict::Pass, Verdict::Fail(witness)) => Comparison::LeftStrictlyFiner { witness },
        (Verdict::Fail(witness), Verdict::Pass) => Comparison::RightStrictlyFiner { witness },
        (Verdict::Fail(right_not_in_left), Verdict::Fail(left_not_in_right)) => {
            Comparison::Incomparable { right_not_in_left, left_not_in_right }
        }
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LemmaReport {
    pub pairs: usize,
    /// Offending `(first, second)` pairs in mask order.
    pub violations: Vec<(Subset, Subset)>,
}

impl LemmaReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

/// For closed nonempty `B, C`: `(X∖B)⁺⁺ ⊆ (X∖C)_⋁` implies `C ⊆ B`.
pub fn check_lemma37(hs: &Hyperspace, prox: &ProximityRelation) -> Result<LemmaReport> {
    let space = hs.space();
    let far: Vec<HyperSet> =
        hs.points().iter().map(|&b| far_miss_set(hs, prox, space.complement(b)).map(|f| f.set)).collect::<Result<_>>()?;
    let sf: Vec<HyperSet> =
        hs.points().iter().map(|&c| sf_miss_set(hs, prox, space.complement(c)).map(|f| f.set)).collect::<Result<_>>()?;
    let mut report = LemmaReport { pairs: 0, violations: Vec::new() };
    for (i, &b) in hs.points().iter().enumerate() {
        for (j, &c) in hs.points().iter().enumerate() {
            report.pairs += 1;
            if far[i].is_subset_of(&sf[j]) && !c.is_subset_of(b) {
                report.violations.push((b, c));
            }
        }
    }
    Ok(report)
}

/// For open `H, E`: `H_⋁ ⊆ E⁺⁺ ⟺ H ⊆ E`. Violations are pairs where the
/// two sides disagree.
pub fn check_lemma38(hs: &Hyperspace, prox: &ProximityRelation) -> Result<LemmaReport> {
    let opens = hs.space().opens();
    let sf: Vec<HyperSet> = opens.iter().map(|&h| sf_miss_set(hs, prox, h).map(|f| f.set)).collect::<Result<_>>()?;
    let far: Vec<HyperSet> = opens.iter().map(|&e| far_miss_set(hs, prox, e).map(|f| f.set)).collect::<Result<_>>()?;
    let mut report = LemmaReport { pairs: 0, violations: Vec::new() };
    for (i, &h) in opens.iter().enumerate() {
        for (j, &e) in opens.iter().enumerate() {
            report.pairs += 1;
            if sf[i].is_subset_of(&far[j]) != h.is_subset_of(e) {
                report.violations.push((h, e));
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::proximity::{alexandroff_proximity, gap_proximity, overlap_proximity};
    use crate::space::{Metric, Rational};

    fn sub(points: &[usize]) -> Subset {
        Subset::from_points(points.iter().copied())
    }

    fn members(hs: &Hyperspace, fam: &HyperFamily) -> Vec<Subset> {
        fam.set.iter().map(|i| hs.points()[i]).collect()
    }

    #[test]
    fn enumerate_cl_examples() {
        assert_eq!(enumerate_cl(&GroundSpace::discrete(2).unwrap()).unwrap(), vec![sub(&[0]), sub(&[1]), sub(&[0, 1])]);
        assert_eq!(enumerate_cl(&GroundSpace::discrete(4).unwrap()).unwrap().len(), 15);
        assert_eq!(enumerate_cl(&GroundSpace::indiscrete(2).unwrap()).unwrap(), vec![sub(&[0, 1])]);
    }

    #[test]
    fn hit_and_miss_examples() {
        let d2 = Hyperspace::new(&GroundSpace::discrete(2).unwrap()).unwrap();
        assert_eq!(members(&d2, &hit_set(&d2, sub(&[0])).unwrap()), vec![sub(&[0]), sub(&[0, 1])]);
        assert!(hit_set(&d2, Subset::EMPTY).unwrap().set.is_empty());
        assert_eq!(hit_set(&d2, sub(&[0, 1])).unwrap().set.count(), 3);
        assert_eq!(members(&d2, &miss_set(&d2, sub(&[0])).unwrap()), vec![sub(&[0])]);
        assert_eq!(miss_set(&d2, sub(&[0, 1])).unwrap().set.count(), 3);
        let ind = Hyperspace::new(&GroundSpace::indiscrete(2).unwrap()).unwrap();
        assert!(miss_set(&ind, Subset::EMPTY).unwrap().set.is_empty());
        assert_eq!(miss_set(&ind, sub(&[0])).unwrap_err(), Error::NotOpen(sub(&[0])));
    }

    #[test]
    fn far_miss_examples() {
        let d3 = GroundSpace::discrete(3).unwrap();
        let hs = Hyperspace::new(&d3).unwrap();
        let ov = overlap_proximity(&d3);
        assert_eq!(members(&hs, &far_miss_set(&hs, &ov, sub(&[0, 1])).unwrap()), vec![sub(&[0]), sub(&[1]), sub(&[0, 1])]);
        assert_eq!(far_miss_set(&hs, &ov, d3.full()).unwrap().set.count(), 7);
        let gap = gap_proximity(&d3, &Metric::line(3), Rational::from_integer(1)).unwrap();
        assert_eq!(members(&hs, &far_miss_set(&hs, &gap, sub(&[0, 1])).unwrap()), vec![sub(&[0])]);
    }

    #[test]
    fn sf_miss_examples() {
        let d3 = GroundSpace::discrete(3).unwrap();
        let hs = Hyperspace::new(&d3).unwrap();
        let ov = overlap_proximity(&d3);
        for a in Subset::all(3) {
            assert_eq!(sf_miss_set(&hs, &ov, a).unwrap().set, far_miss_set(&hs, &ov, a).unwrap().set);
        }
        assert_eq!(sf_miss_set(&hs, &ov, d3.full()).unwrap().set.count(), 7);
    }

    #[test]
    fn build_topology_examples() {
        let d2 = GroundSpace::discrete(2).unwrap();
        let hs = Hyperspace::new(&d2).unwrap();
        let v = build_topology(&hs, &TopologySpec::vietoris()).unwrap();
        for p in 0..3 {
            assert_eq!(v.neighbourhood(p).iter().collect::<Vec<_>>(), vec![p]);
        }
        let base = v.base().unwrap();
        assert!(base.contains(&HyperSet::full(3)));
        for fam in v.subbase() {
            assert!(base.contains(&fam.set));
        }

        let all = CompactnessIdeal::all_closed(&d2);
        let fell = build_topology(&hs, &TopologySpec::fell(&all)).unwrap();
        assert_eq!(fell.base().unwrap(), base);

        let ov = overlap_proximity(&d2);
        let fm = build_topology(&hs, &TopologySpec::far_miss(&ov)).unwrap();
        assert_eq!(fm.base().unwrap(), base);
    }

    #[test]
    fn refines_and_compare_examples() {
        let d3 = GroundSpace::discrete(3).unwrap();
        let hs = Hyperspace::new(&d3).unwrap();
        let v = build_topology(&hs, &TopologySpec::vietoris()).unwrap();
        assert!(refines(&v, &v).unwrap().passed());
        let all = CompactnessIdeal::all_closed(&d3);
        let fell = build_topology(&hs, &TopologySpec::fell(&all)).unwrap();
        assert_eq!(compare(&v, &fell).unwrap(), Comparison::Equal);

        let trivial = build_topology(&hs, &TopologySpec::trivial()).unwrap();
        assert!(refines(&v, &trivial).unwrap().passed());
        let Verdict::Fail(w) = refines(&trivial, &v).unwrap() else { panic!("trivial cannot refine vietoris") };
        assert!(w.member.contains(w.point));
        assert_eq!(compare(&v, &trivial).unwrap().verdict(), "left-strictly-finer");
        assert_eq!(compare(&trivial, &v).unwrap().verdict(), "right-strictly-finer");

        let ov = overlap_proximity(&d3);
        let fm = build_topology(&hs, &TopologySpec::far_miss(&ov)).unwrap();
        assert_eq!(compare(&fm, &v).unwrap(), Comparison::Equal);
    }

    #[test]
    fn mismatched_hyperspaces_are_rejected() {
        let a = Hyperspace::new(&GroundSpace::discrete(2).unwrap()).unwrap();
        let b = Hyperspace::new(&GroundSpace::discrete(3).unwrap()).unwrap();
        let ta = build_topology(&a, &TopologySpec::vietoris()).unwrap();
        let tb = build_topology(&b, &TopologySpec::vietoris()).unwrap();
        assert_eq!(compare(&ta, &tb).unwrap_err(), Error::MismatchedHyperspace);
        let ov = overlap_proximity(&GroundSpace::discrete(3).unwrap());
        assert_eq!(far_miss_set(&a, &ov, sub(&[0])).unwrap_err(), Error::MismatchedHyperspace);
    }

    #[test]
    fn subbase_deduplicates_with_provenance() {
        let d2 = GroundSpace::discrete(2).unwrap();
        let hs = Hyperspace::new(&d2).unwrap();
        let v = build_topology(&hs, &TopologySpec::vietoris()).unwrap();
        // X⁻ and X⁺ are both CL(X)
        let full = v.subbase().iter().find(|f| f.set == HyperSet::full(3)).unwrap();
        assert_eq!(full.provenance, vec![Provenance::Hit(sub(&[0, 1])), Provenance::Miss(sub(&[0, 1]))]);
    }

    #[test]
    fn lemma37_holds_on_discrete_overlap_and_fails_for_alexandroff_surrogate() {
        let d4 = GroundSpace::discrete(4).unwrap();
        let hs = Hyperspace::new(&d4).unwrap();
        assert!(check_lemma37(&hs, &overlap_proximity(&d4)).unwrap().holds());
        let ideal = CompactnessIdeal::principal(&d4, sub(&[0, 1])).unwrap();
        let report = check_lemma37(&hs, &alexandroff_proximity(&d4, &ideal)).unwrap();
        assert!(report.violations.contains(&(sub(&[2]), sub(&[2, 3]))));
    }

    #[test]
    fn lemma38_on_discrete_overlap() {
        let d3 = GroundSpace::discrete(3).unwrap();
        let hs = Hyperspace::new(&d3).unwrap();
        let report = check_lemma38(&hs, &overlap_proximity(&d3)).unwrap();
        assert_eq!(report.pairs, 64);
        assert!(report.holds(), "{:?}", report.violations);
    }

    #[test]
    fn families_are_monotone_in_their_open_set() {
        let d3 = GroundSpace::discrete(3).unwrap();
        let hs = Hyperspace::new(&d3).unwrap();
        let gap = gap_proximity(&d3, &Metric::line(3), Rational::from_integer(1)).unwrap();
        for u in Subset::all(3) {
            for w in Subset::all(3).filter(|w| u.is_subset_of(*w)) {
                assert!(hit_set(&hs, u).unwrap().set.is_subset_of(&hit_set(&hs, w).unwrap().set));
                assert!(miss_set(&hs, u).unwrap().set.is_subset_of(&miss_set(&hs, w).unwrap().set));
                assert!(far_miss_set(&hs, &gap, u).unwrap().set.is_subset_of(&far_miss_set(&hs, &gap, w).unwrap().set));
                assert!(sf_miss_set(&hs, &gap, u).unwrap().set.is_subset_of(&sf_miss_set(&hs, &gap, w).unwrap().set));
            }
            assert!(sf_miss_set(&hs, &gap, u).unwrap().set.is_subset_of(&far_miss_set(&hs, &gap, u).unwrap().set));
        }
    }
}
