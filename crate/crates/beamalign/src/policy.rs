//! Feedback decoding: uncertainty regions and transmission-beam widths.
//!
//! Four policies map a positivity set (the acknowledged beam indices) to a
//! transmission-beam region. SD covers every interval that may hold a
//! resolvable path; BF covers at least one path with minimal width; the
//! path-count-aware 2-SD and 2-BF exploit knowing there are exactly two
//! paths. Regions are assembled from component beams, whose pairwise
//! disjointness makes widths additive.

use crate::error::{Error, Result};
use crate::geometry::{ArcSet, BeamDesign, ComponentBeam};
use crate::index_set::IndexSet;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

/// Cap on the pair-family size for exhaustive 2-BF selection.
pub const PAIR_FAMILY_CAP: usize = 24;

/// Decoding policy. The path-aware variants are defined for exactly two
/// paths.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Policy {
    #[serde(rename = "sd")]
    Sd,
    #[serde(rename = "bf")]
    Bf,
    #[serde(rename = "2sd")]
    TwoSd,
    #[serde(rename = "2bf")]
    TwoBf,
}

impl Policy {
    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "sd" => Ok(Self::Sd),
            "bf" => Ok(Self::Bf),
            "2sd" => Ok(Self::TwoSd),
            "2bf" => Ok(Self::TwoBf),
            other => Err(Error::InvalidConfig {
                field: "policy".into(),
                reason: format!("unknown policy `{other}` (expected sd, bf, 2sd, or 2bf)"),
            }),
        }
    }

    /// Whether this policy assumes knowledge of exactly two paths.
    pub fn is_path_aware(self) -> bool {
        matches!(self, Self::TwoSd | Self::TwoBf)
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Sd => "sd",
            Self::Bf => "bf",
            Self::TwoSd => "2sd",
            Self::TwoBf => "2bf",
        }
    }
}

impl std::fmt::Display for Policy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// The set of scanning-beam indices acknowledged by a user.
#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct PositivitySet(IndexSet);

impl PositivitySet {
    pub fn new(set: IndexSet) -> Self {
        Self(set)
    }

    pub fn from_indices(indices: &[usize]) -> Self {
        Self(IndexSet::from_indices(indices))
    }

    pub fn set(self) -> IndexSet {
        self.0
    }

    /// The complementary negativity set for a design of `b` beams.
    pub fn negativity(self, b: usize) -> IndexSet {
        self.0.complement(b)
    }

    pub fn indices(self) -> Vec<usize> {
        self.0.indices()
    }

    pub fn len(self) -> usize {
        self.0.len()
    }

    pub fn is_empty(self) -> bool {
        self.0.is_empty()
    }
}

impl From<IndexSet> for PositivitySet {
    fn from(set: IndexSet) -> Self {
        Self(set)
    }
}

/// Unordered pairs `{C, C'}` of component-beam indices whose index sets
/// union to a target positivity set. `C = C'` is allowed: a single
/// component beam can host both paths.
#[derive(Clone, Debug, PartialEq)]
pub struct PairFamily {
    pairs: Vec<(usize, usize)>,
}

impl PairFamily {
    /// Pairs as indices into the component-beam slice, each with `i <= j`.
    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Distinct component-beam indices appearing in any pair.
    pub fn members(&self) -> Vec<usize> {
        let mut set = BTreeSet::new();
        for &(i, j) in &self.pairs {
            set.insert(i);
            set.insert(j);
        }
        set.into_iter().collect()
    }
}

/// Computes the positivity set of a user whose paths depart at `aods`.
///
/// A beam is acknowledged when at least one path lies inside it. On a
/// covering design the result is never empty.
pub fn feedback(design: &BeamDesign, aods: &[f64]) -> Result<PositivitySet> {
    let mut set = IndexSet::EMPTY;
    for &aod in aods {
        if !aod.is_finite() {
            return Err(Error::InvalidAngle(aod));
        }
        set = set.union(design.covering_set(aod));
    }
    if set.is_empty() {
        return Err(Error::InternalConsistency(format!(
            "no beam acknowledged for AoDs {aods:?} despite claimed coverage"
        )));
    }
    Ok(PositivitySet(set))
}

/// Positivity sets reachable with at most `p` paths: every union of
/// between 1 and `p` component-beam index sets. This is exactly the
/// support of the feedback distribution.
pub fn achievable_sets(cbs: &[ComponentBeam], p: usize) -> Vec<PositivitySet> {
    let masks: Vec<IndexSet> = cbs.iter().map(|c| c.index_set).collect();
    let mut family: BTreeSet<IndexSet> = masks.iter().copied().collect();
    let mut frontier: BTreeSet<IndexSet> = family.clone();
    for _ in 2..=p.max(1) {
        let mut next = BTreeSet::new();
        for &a in &frontier {
            for &m in &masks {
                let u = a.union(m);
                if !family.contains(&u) {
                    next.insert(u);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        family.extend(next.iter().copied());
        frontier = next;
    }
    family.into_iter().map(PositivitySet).collect()
}

/// Enumerates the pair family `{ {C, C'} : C union C' = A }` over existing
/// component beams.
pub fn enumerate_pairs(cbs: &[ComponentBeam], a: PositivitySet) -> PairFamily {
    let target = a.set();
    let mut pairs = Vec::new();
    for i in 0..cbs.len() {
        if !cbs[i].index_set.is_subset_of(target) {
            continue;
        }
        for j in i..cbs.len() {
            if cbs[i].index_set.union(cbs[j].index_set) == target {
                pairs.push((i, j));
            }
        }
    }
    PairFamily { pairs }
}

/// The uncertainty region decoded from positivity set `a` under `policy`.
pub fn uncertainty_region(
    policy: Policy,
    cbs: &[ComponentBeam],
    a: PositivitySet,
) -> Result<ArcSet> {
    let chosen = select_components(policy, cbs, a)?;
    let arcs: Vec<ArcSet> = chosen.iter().map(|&i| cbs[i].region.clone()).collect();
    let mut region = ArcSet::empty();
    for r in &arcs {
        region = region.union(r);
    }
    Ok(region)
}

/// The transmission-beam width for positivity set `a`: the summed widths
/// of the selected component beams, which equals the measure of
/// [`uncertainty_region`] because component-beam regions are disjoint.
pub fn tb_width(policy: Policy, cbs: &[ComponentBeam], a: PositivitySet) -> Result<f64> {
    let chosen = select_components(policy, cbs, a)?;
    Ok(chosen.iter().map(|&i| cbs[i].width()).sum())
}

/// Indices of the component beams forming the uncertainty region.
fn select_components(policy: Policy, cbs: &[ComponentBeam], a: PositivitySet) -> Result<Vec<usize>> {
    let target = a.set();
    match policy {
        Policy::Sd => {
            let chosen: Vec<usize> = (0..cbs.len())
                .filter(|&i| cbs[i].index_set.is_subset_of(target))
                .collect();
            if chosen.is_empty() {
                return Err(Error::NoCandidate { positivity: a.indices() });
            }
            Ok(chosen)
        }
        Policy::Bf => {
            let mut best: Option<(f64, usize, Vec<usize>)> = None;
            for beam in target.iter() {
                let chosen: Vec<usize> = (0..cbs.len())
                    .filter(|&i| {
                        cbs[i].index_set.contains(beam) && cbs[i].index_set.is_subset_of(target)
                    })
                    .collect();
                if chosen.is_empty() {
                    return Err(Error::NoCandidate { positivity: a.indices() });
                }
                let width: f64 = chosen.iter().map(|&i| cbs[i].width()).sum();
                // Ties break toward the smallest beam index for determinism.
                if best.as_ref().is_none_or(|(w, _, _)| width < *w) {
                    best = Some((width, beam, chosen));
                }
            }
            best.map(|(_, _, chosen)| chosen)
                .ok_or(Error::NoCandidate { positivity: a.indices() })
        }
        Policy::TwoSd => {
            let family = enumerate_pairs(cbs, a);
            if family.is_empty() {
                return Err(Error::NoCandidate { positivity: a.indices() });
            }
            Ok(family.members())
        }
        Policy::TwoBf => {
            let family = enumerate_pairs(cbs, a);
            if family.is_empty() {
                return Err(Error::NoCandidate { positivity: a.indices() });
            }
            if family.len() > PAIR_FAMILY_CAP {
                return Err(Error::CombinatorialLimit {
                    pairs: family.len(),
                    cap: PAIR_FAMILY_CAP,
                });
            }
            Ok(min_width_transversal(cbs, &family))
        }
    }
}

/// Picks one member from every pair so the union of the chosen component
/// beams has minimal total width, by exhaustive branch and bound.
///
/// Disjointness makes the union width the sum over distinct chosen
/// members, so partial sums prune the search.
fn min_width_transversal(cbs: &[ComponentBeam], family: &PairFamily) -> Vec<usize> {
    debug_assert!(cbs.len() <= 128);
    struct Search<'s> {
        widths: &'s [f64],
        pairs: &'s [(usize, usize)],
        best_width: f64,
        best_chosen: u128,
    }

    impl Search<'_> {
        fn explore(&mut self, depth: usize, chosen: u128, width: f64) {
            if width >= self.best_width {
                return;
            }
            let Some(&(i, j)) = self.pairs.get(depth) else {
                self.best_width = width;
                self.best_chosen = chosen;
                return;
            };
            for pick in [i, j] {
                let bit = 1u128 << pick;
                let extra = if chosen & bit == 0 { self.widths[pick] } else { 0.0 };
                self.explore(depth + 1, chosen | bit, width + extra);
                if i == j {
                    break;
                }
            }
        }
    }

    let widths: Vec<f64> = cbs.iter().map(|c| c.width()).collect();
    let mut search = Search {
        widths: &widths,
        pairs: family.pairs(),
        best_width: f64::INFINITY,
        best_chosen: 0,
    };
    search.explore(0, 0, 0.0);
    (0..cbs.len()).filter(|&i| search.best_chosen >> i & 1 == 1).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{component_beams, Arc};
    use approx::assert_abs_diff_eq;
    use std::f64::consts::TAU;

    fn design(arcs: &[(f64, f64)]) -> BeamDesign {
        BeamDesign::new(
            arcs.iter()
                .map(|&(s, e)| Arc::normalize(s, e).unwrap())
                .collect(),
        )
        .unwrap()
    }

    fn es(b: usize) -> BeamDesign {
        let gamma = TAU / b as f64;
        design(
            &(0..b)
                .map(|i| (i as f64 * gamma, ((i + 1) % b) as f64 * gamma))
                .collect::<Vec<_>>(),
        )
    }

    #[test]
    fn feedback_on_es_center() {
        let d = es(5);
        let gamma = TAU / 5.0;
        let a = feedback(&d, &[2.5 * gamma]).unwrap();
        assert_eq!(a, PositivitySet::from_indices(&[2]));
    }

    #[test]
    fn feedback_in_overlap_acknowledges_both() {
        let d = design(&[(0.0, 2.0), (1.5, 3.5), (3.0, 0.5)]);
        let a = feedback(&d, &[1.7]).unwrap();
        assert_eq!(a, PositivitySet::from_indices(&[0, 1]));
    }

    #[test]
    fn feedback_two_paths_unions_singletons() {
        let d = es(5);
        let gamma = TAU / 5.0;
        let a = feedback(&d, &[0.5 * gamma, 3.5 * gamma]).unwrap();
        assert_eq!(a, PositivitySet::from_indices(&[0, 3]));
    }

    #[test]
    fn sd_region_on_disjoint_beams_is_their_union() {
        let d = es(5);
        let cbs = component_beams(&d);
        let a = PositivitySet::from_indices(&[1, 3]);
        let r = uncertainty_region(Policy::Sd, &cbs, a).unwrap();
        let expected = ArcSet::from_arc(d.beams()[1]).union(&ArcSet::from_arc(d.beams()[3]));
        assert_abs_diff_eq!(r.measure(), expected.measure(), epsilon = 1e-12);
        assert_abs_diff_eq!(
            tb_width(Policy::Sd, &cbs, a).unwrap(),
            2.0 * TAU / 5.0,
            epsilon = 1e-12
        );
    }

    #[test]
    fn bf_picks_narrower_disjoint_beam() {
        // GES arcs of widths 1.36, 1.93, 2.99 tiling the circle.
        let d = design(&[(0.0, 1.36), (1.36, 3.29), (3.29, 0.0)]);
        let cbs = component_beams(&d);
        let a = PositivitySet::from_indices(&[0, 1]);
        assert_abs_diff_eq!(tb_width(Policy::Bf, &cbs, a).unwrap(), 1.36, epsilon = 1e-12);
        let r = uncertainty_region(Policy::Bf, &cbs, a).unwrap();
        assert_abs_diff_eq!(r.measure(), 1.36, epsilon = 1e-12);
    }

    #[test]
    fn achievable_sets_on_es_p2() {
        let cbs = component_beams(&es(5));
        let sets = achievable_sets(&cbs, 2);
        assert_eq!(sets.len(), 15); // 5 singletons + 10 pairs
        assert_eq!(sets.iter().filter(|a| a.len() == 1).count(), 5);
        assert_eq!(sets.iter().filter(|a| a.len() == 2).count(), 10);
    }

    #[test]
    fn empty_set_never_achievable() {
        let cbs = component_beams(&es(4));
        for p in 1..=3 {
            assert!(achievable_sets(&cbs, p).iter().all(|a| !a.is_empty()));
        }
    }

    #[test]
    fn pair_family_allows_equal_members() {
        let d = design(&[(0.0, 2.0), (1.0, 3.0), (3.0, 0.0)]);
        let cbs = component_beams(&d);
        let a = PositivitySet::from_indices(&[0, 1]);
        let family = enumerate_pairs(&cbs, a);
        // {w01,w01}, {w01,w0}, {w01,w1}, {w0,w1}
        assert_eq!(family.len(), 4);
        let overlap = cbs
            .iter()
            .position(|c| c.index_set == IndexSet::from_indices(&[0, 1]))
            .unwrap();
        assert!(family.pairs().contains(&(overlap, overlap)));
    }

    #[test]
    fn two_bf_takes_overlap_plus_narrower_exclusive_part() {
        let d = design(&[(0.0, 2.0), (1.5, 3.0), (3.0, 0.0)]);
        let cbs = component_beams(&d);
        let a = PositivitySet::from_indices(&[0, 1]);
        // The pair {w01, w01} forces the overlap [1.5, 2.0); the pair
        // {w0, w1} forces one exclusive part, and w1 = [2.0, 3.0) is the
        // narrower of the two.
        assert_abs_diff_eq!(tb_width(Policy::TwoBf, &cbs, a).unwrap(), 1.5, epsilon = 1e-12);
    }

    #[test]
    fn path_aware_policies_error_on_unachievable_set() {
        let cbs = component_beams(&es(4));
        let a = PositivitySet::from_indices(&[0, 1, 2]);
        // Achievable only with three paths; no pair of component beams unions to it.
        assert!(matches!(
            uncertainty_region(Policy::TwoSd, &cbs, a),
            Err(Error::NoCandidate { .. })
        ));
        assert!(matches!(
            tb_width(Policy::TwoBf, &cbs, a),
            Err(Error::NoCandidate { .. })
        ));
    }

    #[test]
    fn widths_match_region_measures_across_policies() {
        let d = design(&[(0.0, 2.2), (1.9, 4.1), (3.9, 0.2)]);
        let cbs = component_beams(&d);
        for policy in [Policy::Sd, Policy::Bf, Policy::TwoSd, Policy::TwoBf] {
            for a in achievable_sets(&cbs, 2) {
                let (Ok(w), Ok(r)) = (tb_width(policy, &cbs, a), uncertainty_region(policy, &cbs, a))
                else {
                    continue;
                };
                assert_abs_diff_eq!(w, r.measure(), epsilon = 1e-9);
            }
        }
    }

    #[test]
    fn policy_names_roundtrip() {
        for (name, policy) in [
            ("sd", Policy::Sd),
            ("bf", Policy::Bf),
            ("2sd", Policy::TwoSd),
            ("2bf", Policy::TwoBf),
        ] {
            assert_eq!(Policy::parse(name).unwrap(), policy);
            assert_eq!(policy.name(), name);
        }
        assert!(Policy::parse("3bf").is_err());
    }
}
