//! Strong inclusion, strongly-far and hat-strongly-far relations, and the
//! exhaustive checks relating them.

use serde::Serialize;

use crate::error::Result;
use crate::proximity::{check_axioms, is_compatible, Pair, ProximityRelation};
use crate::space::{GroundSpace, Subset};

/// Outcome of an existential search, with the witness when it holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", content = "witness", rename_all = "kebab-case")]
pub enum WitnessResult<W> {
    Holds(W),
    /// The whole candidate space was searched without success.
    DoesNotHold,
    /// An input set was empty; these relations are only meaningful on nonempty sets.
    Degenerate,
}

impl<W> WitnessResult<W> {
    pub fn holds(&self) -> bool {
        matches!(self, WitnessResult::Holds(_))
    }

    pub fn witness(&self) -> Option<&W> {
        match self {
            WitnessResult::Holds(w) => Some(w),
            _ => None,
        }
    }

    pub fn is_degenerate(&self) -> bool {
        matches!(self, WitnessResult::Degenerate)
    }
}

/// The separating set `C` with `A ∄ X∖C` and `C ∄ B`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SeparatingSet {
    pub c: Subset,
    /// `C` is `∅` or `X`.
    pub degenerate: bool,
}

/// `A ⊆ int cl E`, `B ⊆ int cl C`, and the two regular opens are disjoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RegularOpenPair {
    pub e: Subset,
    pub c: Subset,
    pub e_regular: Subset,
    pub c_regular: Subset,
}

/// `A ≪ B ⟺ A ∄ X∖B`.
pub fn strongly_included(prox: &ProximityRelation, a: Subset, b: Subset) -> bool {
    prox.far(a, prox.space().complement(b))
}

/// Every `C` with `A ∄ X∖C`, ascending.
fn inner_sets(prox: &ProximityRelation, a: Subset) -> Vec<Subset> {
    let space = prox.space();
    Subset::all(space.len()).filter(|&c| prox.far(a, space.complement(c))).collect()
}

fn separating_set(prox: &ProximityRelation, a: Subset, b: Subset) -> Option<Subset> {
    if prox.near(a, b) {
        return None;
    }
    let space = prox.space();
    Subset::all(space.len()).find(|&c| prox.far(a, space.complement(c)) && prox.far(c, b))
}

/// Uncapped strongly-far test straight from the definition, with no
/// convention for empty inputs.
pub(crate) fn strongly_far_raw(prox: &ProximityRelation, a: Subset, b: Subset) -> bool {
    separating_set(prox, a, b).is_some()
}

/// Uncapped strongly-far test used by derived relations; empty inputs hold.
pub(crate) fn strongly_far_holds(prox: &ProximityRelation, a: Subset, b: Subset) -> bool {
    a.is_empty() || b.is_empty() || separating_set(prox, a, b).is_some()
}

/// `A ∄ B` and some `C ⊆ X` has `A ∄ X∖C` and `C ∄ B`. The witness is the
/// smallest such `C` by mask; all `2^n` subsets are candidates.
pub fn strongly_far(prox: &ProximityRelation, a: Subset, b: Subset) -> Result<WitnessResult<SeparatingSet>> {
    let space = prox.space();
    space.caps().check("strongly-far witness search", space.len(), space.caps().witness_points)?;
    if a.is_empty() || b.is_empty() {
        return Ok(WitnessResult::Degenerate);
    }
    Ok(match separating_set(prox, a, b) {
        Some(c) => WitnessResult::Holds(SeparatingSet { c, degenerate: c.is_empty() || c == space.full() }),
        None => WitnessResult::DoesNotHold,
    })
}

/// The distinct regular open sets of a space, each with the smallest `E`
/// (by mask) whose `int cl E` produces it.
#[derive(Debug, Clone)]
pub struct RegularOpens {
    entries: Vec<(Subset, Subset)>,
}

impl RegularOpens {
    pub fn new(space: &GroundSpace) -> Result<Self> {
        space.caps().check("regular-open enumeration", space.len(), space.caps().witness_points)?;
        let mut entries: Vec<(Subset, Subset)> = Vec::new();
        let mut seen = std::collections::HashSet::new();
        for e in Subset::all(space.len()) {
            let r = space.interior(space.closure(e));
            if seen.insert(r) {
                entries.push((r, e));
            }
        }
        // ascending preimage, which is the order of first appearance
        Ok(RegularOpens { entries })
    }

    /// `(regular open, smallest preimage)` ordered by preimage mask.
    pub fn entries(&self) -> &[(Subset, Subset)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Hat-strongly-far test against this enumeration.
    pub fn separate(&self, a: Subset, b: Subset) -> WitnessResult<RegularOpenPair> {
        if a.is_empty() || b.is_empty() {
            return WitnessResult::Degenerate;
        }
        for &(er, e) in &self.entries {
            if !a.is_subset_of(er) {
                continue;
            }
            if let Some(&(cr, c)) = self.entries.iter().find(|(cr, _)| b.is_subset_of(*cr) && !cr.intersects(er)) {
                return WitnessResult::Holds(RegularOpenPair { e, c, e_regular: er, c_regular: cr });
            }
        }
        WitnessResult::DoesNotHold
    }
}

/// Some `E, C` have `A ⊆ int cl E`, `B ⊆ int cl C` and
/// `int cl E ∩ int cl C = ∅`. The witness is the first `(E, C)` in
/// lexicographic mask order.
pub fn hat_strongly_far(space: &GroundSpace, a: Subset, b: Subset) -> Result<WitnessResult<RegularOpenPair>> {
    Ok(RegularOpens::new(space)?.separate(a, b))
}

/// Ordered pairs of nonempty subsets, ascending.
fn nonempty_pairs(n: usize) -> impl Iterator<Item = Pair> {
    Subset::all(n).skip(1).flat_map(move |a| Subset::all(n).skip(1).map(move |b| (a, b)))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum ImplicationReport {
    Checked {
        pairs: usize,
        /// Pairs where the premise holds.
        premises: usize,
        violations: Vec<Pair>,
    },
    PreconditionViolated { reason: String },
}

impl ImplicationReport {
    pub fn violations(&self) -> &[Pair] {
        match self {
            ImplicationReport::Checked { violations, .. } => violations,
            ImplicationReport::PreconditionViolated { .. } => &[],
        }
    }

    pub fn was_checked(&self) -> bool {
        matches!(self, ImplicationReport::Checked { .. })
    }
}

/// Strongly far implies hat-strongly-far, over every pair of nonempty
/// subsets. Requires a compatible Lodato proximity; otherwise the check is
/// skipped and the reason reported.
pub fn check_sf_implies_hat(prox: &ProximityRelation) -> Result<ImplicationReport> {
    let axioms = check_axioms(prox)?;
    if !axioms.is_lodato() {
        return Ok(ImplicationReport::PreconditionViolated {
            reason: format!("proximity is {}, not Lodato", axioms.classification.as_str()),
        });
    }
    if let Some(a) = is_compatible(prox).witness() {
        return Ok(ImplicationReport::PreconditionViolated {
            reason: format!("proximity is not compatible with the topology (first at {a})"),
        });
    }
    check_sf_implies_hat_unchecked(prox)
}

/// The implication check without the Lodato/compatibility precondition.
pub fn check_sf_implies_hat_unchecked(prox: &ProximityRelation) -> Result<ImplicationReport> {
    let space = prox.space();
    space.caps().check("pairwise witness search", space.len(), space.caps().pair_points)?;
    let regular = RegularOpens::new(space)?;
    let n = space.len();
    let mut pairs = 0;
    let mut premises = 0;
    let mut violations = Vec::new();
    let mut inner = Vec::new();
    let mut current = None;
    for (a, b) in nonempty_pairs(n) {
        pairs += 1;
        if current != Some(a) {
            inner = inner_sets(prox, a);
            current = Some(a);
        }
        let sf = prox.far(a, b) && inner.iter().any(|&c| prox.far(c, b));
        if sf {
            premises += 1;
            if !regular.separate(a, b).holds() {
                violations.push((a, b));
            }
        }
    }
    Ok(ImplicationReport::Checked { pairs, premises, violations })
}

/// Far pairs split by whether they are also strongly far.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FarSplit {
    pub far_pairs: usize,
    pub strongly_far: usize,
    pub far_not_strongly_far: usize,
    pub strongly_far_examples: Vec<Pair>,
    pub far_not_strongly_far_examples: Vec<Pair>,
}

/// Partitions the far pairs of nonempty subsets; keeps up to `examples`
/// pairs of each class in mask order.
pub fn check_far_vs_sf(prox: &ProximityRelation, examples: usize) -> Result<FarSplit> {
    let space = prox.space();
    space.caps().check("pairwise witness search", space.len(), space.caps().pair_points)?;
    let mut split = FarSplit {
        far_pairs: 0,
        strongly_far: 0,
        far_not_strongly_far: 0,
        strongly_far_examples: Vec::new(),
        far_not_strongly_far_examples: Vec::new(),
    };
    let mut inner = Vec::new();
    let mut current = None;
    for (a, b) in nonempty_pairs(space.len()) {
        if prox.near(a, b) {
            continue;
        }
        if current != Some(a) {
            inner = inner_sets(prox, a);
            current = Some(a);
        }
        split.far_pairs += 1;
        if inner.iter().any(|&c| prox.far(c, b)) {
            split.strongly_far += 1;
            if split.strongly_far_examples.len() < examples {
                split.strongly_far_examples.push((a, b));
            }
        } else {
            split.far_not_strongly_far += 1;
            if split.far_not_strongly_far_examples.len() < examples {
                split.far_not_strongly_far_examples.push((a, b));
            }
        }
    }
    Ok(split)
}
