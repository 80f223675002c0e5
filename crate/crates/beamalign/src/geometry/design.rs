//! Scanning-beam designs and component-beam extraction.

use super::arc::{reduce, Arc, EPS_GEO};
use super::arcset::ArcSet;
use crate::error::{Error, Result};
use crate::index_set::IndexSet;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::f64::consts::TAU;

/// Tolerance below which a coverage gap counts as zero measure.
pub const EPS_COVERAGE: f64 = 1e-9;

/// An ordered set of contiguous scanning beams over the circle.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BeamDesign {
    beams: Vec<Arc>,
}

impl BeamDesign {
    /// Requires at least two beams, each of nonzero measure.
    pub fn new(beams: Vec<Arc>) -> Result<Self> {
        if beams.len() < 2 {
            return Err(Error::InvalidDesign(format!(
                "need at least 2 beams, got {}",
                beams.len()
            )));
        }
        if beams.len() > 64 {
            return Err(Error::InvalidDesign(format!(
                "at most 64 beams supported, got {}",
                beams.len()
            )));
        }
        if let Some(i) = beams.iter().position(|b| b.is_empty()) {
            return Err(Error::InvalidDesign(format!("beam {i} has zero measure")));
        }
        Ok(Self { beams })
    }

    pub fn beams(&self) -> &[Arc] {
        &self.beams
    }

    pub fn beam_count(&self) -> usize {
        self.beams.len()
    }

    /// Indices of beams containing the given angle.
    pub fn covering_set(&self, angle: f64) -> IndexSet {
        let mut s = IndexSet::EMPTY;
        for (i, b) in self.beams.iter().enumerate() {
            if b.contains(angle) {
                s.insert(i);
            }
        }
        s
    }

    /// Union of all beams as an arc set.
    pub fn union(&self) -> ArcSet {
        ArcSet::from_arcs(&self.beams)
    }
}

/// The region covered by exactly the beams indexed by `index_set`.
///
/// Component-beam regions of distinct index sets are disjoint, and the
/// union of regions whose index set contains `i` reconstructs beam `i`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComponentBeam {
    pub index_set: IndexSet,
    pub region: ArcSet,
}

impl ComponentBeam {
    pub fn width(&self) -> f64 {
        self.region.measure()
    }
}

/// Extracts every nonempty component beam of a design.
///
/// Sorts all beam boundaries and classifies each elementary arc between
/// consecutive boundaries by the exact set of beams covering its midpoint,
/// then groups elementary arcs by covering set. A design of `b` contiguous
/// beams yields at most `2b` component beams.
pub fn component_beams(design: &BeamDesign) -> Vec<ComponentBeam> {
    let mut bounds: Vec<f64> = Vec::with_capacity(2 * design.beam_count());
    for beam in design.beams() {
        match *beam {
            Arc::Span { start, end } => {
                bounds.push(start);
                bounds.push(end);
            }
            Arc::Full => bounds.push(0.0),
            Arc::Empty => unreachable!("BeamDesign forbids empty beams"),
        }
    }
    bounds.sort_by(f64::total_cmp);
    bounds.dedup_by(|a, b| (*a - *b).abs() <= EPS_GEO);
    // First and last boundary may coincide across the 0 / 2*pi cut.
    if bounds.len() > 1 && bounds[0] + TAU - bounds.last().unwrap() <= EPS_GEO {
        bounds.pop();
    }

    let mut groups: BTreeMap<IndexSet, Vec<Arc>> = BTreeMap::new();
    let n = bounds.len();
    for k in 0..n {
        let lo = bounds[k];
        let hi = if k + 1 < n { bounds[k + 1] } else { bounds[0] + TAU };
        if hi - lo <= EPS_GEO && n > 1 {
            continue;
        }
        let arc = if n == 1 {
            Arc::Full
        } else {
            match Arc::normalize(lo, hi) {
                Ok(a) if !a.is_empty() => a,
                _ => continue,
            }
        };
        let midpoint = reduce(lo + (hi - lo) / 2.0);
        let covering = design.covering_set(midpoint);
        if covering.is_empty() {
            continue;
        }
        groups.entry(covering).or_default().push(arc);
    }

    groups
        .into_iter()
        .map(|(index_set, arcs)| ComponentBeam {
            index_set,
            region: ArcSet::from_arcs(&arcs),
        })
        .collect()
}

/// True iff the beams cover the whole circle up to a gap below
/// [`EPS_COVERAGE`].
pub fn coverage_check(design: &BeamDesign) -> bool {
    TAU - design.union().measure() <= EPS_COVERAGE
}

/// Measure of the uncovered region.
pub fn coverage_gap(design: &BeamDesign) -> f64 {
    (TAU - design.union().measure()).max(0.0)
}
