//! Finite unions of disjoint arcs with set arithmetic on the circle.

use super::arc::{Arc, EPS_GEO};
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

/// A normalized union of pairwise-disjoint, non-adjacent arcs sorted by
/// start angle. At most one member wraps past `2*pi`.
///
/// Set operations run on a cut-at-zero segment representation and
/// re-normalize afterwards, merging endpoints that coincide within
/// [`EPS_GEO`] and dropping slivers below that tolerance.
#[derive(Clone, Debug, PartialEq, Default, Serialize, Deserialize)]
pub struct ArcSet {
    arcs: Vec<Arc>,
}

impl ArcSet {
    pub fn empty() -> Self {
        Self { arcs: vec![] }
    }

    pub fn full() -> Self {
        Self { arcs: vec![Arc::Full] }
    }

    /// Union of arbitrary arcs, normalized.
    pub fn from_arcs(arcs: &[Arc]) -> Self {
        let segs: Vec<(f64, f64)> = arcs.iter().flat_map(|a| a.segments()).collect();
        Self::from_segments(segs)
    }

    pub fn from_arc(arc: Arc) -> Self {
        Self::from_arcs(std::slice::from_ref(&arc))
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn is_empty(&self) -> bool {
        self.arcs.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.arcs.len() == 1 && self.arcs[0].is_full()
    }

    /// Total angular measure; additive over the disjoint members.
    pub fn measure(&self) -> f64 {
        self.arcs.iter().map(|a| a.measure()).sum()
    }

    /// Exact half-open membership test.
    pub fn contains(&self, angle: f64) -> bool {
        self.arcs.iter().any(|a| a.contains(angle))
    }

    pub fn union(&self, other: &Self) -> Self {
        let mut segs = self.segments();
        segs.extend(other.segments());
        Self::from_segments(segs)
    }

    pub fn intersect(&self, other: &Self) -> Self {
        let a = self.segments();
        let b = other.segments();
        let mut out = Vec::new();
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            let lo = a[i].0.max(b[j].0);
            let hi = a[i].1.min(b[j].1);
            if hi > lo {
                out.push((lo, hi));
            }
            if a[i].1 <= b[j].1 {
                i += 1;
            } else {
                j += 1;
            }
        }
        Self::from_segments(out)
    }

    /// Complement relative to the full circle.
    pub fn complement(&self) -> Self {
        let segs = self.segments();
        let mut out = Vec::new();
        let mut cursor = 0.0;
        for &(s, e) in &segs {
            if s > cursor {
                out.push((cursor, s));
            }
            cursor = cursor.max(e);
        }
        if cursor < TAU {
            out.push((cursor, TAU));
        }
        Self::from_segments(out)
    }

    pub fn difference(&self, other: &Self) -> Self {
        self.intersect(&other.complement())
    }

    /// Cut-at-zero segments, sorted and disjoint.
    fn segments(&self) -> Vec<(f64, f64)> {
        let mut segs: Vec<(f64, f64)> = self.arcs.iter().flat_map(|a| a.segments()).collect();
        segs.sort_by(|x, y| x.0.total_cmp(&y.0));
        segs
    }

    fn from_segments(mut segs: Vec<(f64, f64)>) -> Self {
        segs.retain(|&(s, e)| e - s > EPS_GEO);
        if segs.is_empty() {
            return Self::empty();
        }
        segs.sort_by(|x, y| x.0.total_cmp(&y.0));
        let mut merged: Vec<(f64, f64)> = Vec::with_capacity(segs.len());
        for (s, e) in segs {
            match merged.last_mut() {
                Some(last) if s <= last.1 + EPS_GEO => last.1 = last.1.max(e),
                _ => merged.push((s, e)),
            }
        }
        if merged.len() == 1 && merged[0].0 <= EPS_GEO && merged[0].1 >= TAU - EPS_GEO {
            return Self::full();
        }
        // Glue the two pieces that meet across the 0 / 2*pi cut.
        let wrap = merged.len() >= 2
            && merged[0].0 <= EPS_GEO
            && merged.last().unwrap().1 >= TAU - EPS_GEO;
        let mut arcs = Vec::with_capacity(merged.len());
        if wrap {
            let first = merged.remove(0);
            let last = merged.pop().unwrap();
            for (s, e) in merged {
                arcs.push(Arc::Span { start: s, end: e });
            }
            arcs.push(Arc::Span { start: last.0, end: first.1 });
        } else {
            for (s, e) in merged {
                let end = if e >= TAU - EPS_GEO { 0.0 } else { e };
                arcs.push(Arc::Span { start: s, end });
            }
        }
        Self { arcs }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    fn arc(s: f64, e: f64) -> ArcSet {
        ArcSet::from_arc(Arc::normalize(s, e).unwrap())
    }

    #[test]
    fn complement_of_half_circle() {
        let c = arc(0.0, PI).complement();
        assert_eq!(c.arcs().len(), 1);
        assert_abs_diff_eq!(c.arcs()[0].start(), PI);
        assert_abs_diff_eq!(c.measure(), PI);
        assert!(c.contains(PI));
        assert!(!c.contains(0.5));
    }

    #[test]
    fn intersect_adjacent_intervals() {
        let r = arc(0.0, 2.0).intersect(&arc(1.0, 3.0));
        assert_eq!(r.arcs().len(), 1);
        assert_abs_diff_eq!(r.measure(), 1.0, epsilon = 1e-12);
        assert!(r.contains(1.5));
        assert!(!r.contains(0.5));
    }

    #[test]
    fn union_merges_overlap() {
        let u = arc(0.0, 1.0).union(&arc(0.5, 2.0));
        assert_abs_diff_eq!(u.measure(), 2.0, epsilon = 1e-12);
        assert_eq!(u.arcs().len(), 1);
    }

    #[test]
    fn union_glues_across_wrap() {
        let u = arc(5.5, 6.0).union(&arc(6.0, 0.5));
        assert_eq!(u.arcs().len(), 1);
        assert!(u.arcs()[0].wraps());
        assert_abs_diff_eq!(u.measure(), TAU - 5.5 + 0.5, epsilon = 1e-12);
    }

    #[test]
    fn complement_of_wrapping_arc() {
        let c = arc(5.5, 0.5).complement();
        assert_eq!(c.arcs().len(), 1);
        assert_abs_diff_eq!(c.measure(), 5.0, epsilon = 1e-12);
        assert!(c.contains(3.0));
        assert!(!c.contains(0.2));
    }

    #[test]
    fn full_and_empty_roundtrip() {
        assert!(ArcSet::full().complement().is_empty());
        assert!(ArcSet::empty().complement().is_full());
        assert_abs_diff_eq!(ArcSet::full().measure(), TAU);
    }

    #[test]
    fn difference_splits_interval() {
        let d = arc(0.0, 3.0).difference(&arc(1.0, 2.0));
        assert_eq!(d.arcs().len(), 2);
        assert_abs_diff_eq!(d.measure(), 2.0, epsilon = 1e-12);
    }

    #[test]
    fn measure_additive_over_disjoint_union() {
        let a = arc(0.0, 1.0);
        let b = arc(2.0, 3.5);
        let u = a.union(&b);
        assert_abs_diff_eq!(u.measure(), a.measure() + b.measure(), epsilon = 1e-12);
        assert_eq!(u.arcs().len(), 2);
    }
}
