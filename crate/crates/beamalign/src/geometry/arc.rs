//! Half-open arcs on the circle `[0, 2*pi)`.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

/// Absolute tolerance for endpoint coincidence in arc-set arithmetic.
pub const EPS_GEO: f64 = 1e-12;

/// A half-open angular interval `[start, end)` on the circle.
///
/// The interval wraps past `2*pi` when `end <= start`. `Empty` and `Full`
/// are distinguished values: both would have coincident endpoints, so they
/// carry their own variants instead of a sentinel encoding.
#[derive(Copy, Clone, Debug, PartialEq)]
pub enum Arc {
    Empty,
    Full,
    /// Invariant: `start, end` in `[0, 2*pi)` and `start != end`.
    Span { start: f64, end: f64 },
}

impl Arc {
    /// Builds an arc from raw endpoints, reducing both modulo `2*pi`.
    ///
    /// Spans of `2*pi` or more collapse to `Full`; zero-length (or
    /// whole-multiple-of-`2*pi`) spans collapse to `Empty`. Non-finite
    /// inputs are rejected.
    pub fn normalize(start: f64, end: f64) -> Result<Self> {
        if !start.is_finite() {
            return Err(Error::InvalidAngle(start));
        }
        if !end.is_finite() {
            return Err(Error::InvalidAngle(end));
        }
        if end - start >= TAU {
            return Ok(Self::Full);
        }
        let s = reduce(start);
        let e = reduce(end);
        if s == e {
            Ok(Self::Empty)
        } else {
            Ok(Self::Span { start: s, end: e })
        }
    }

    /// Builds a non-wrapping arc `[start, start + width)`.
    pub fn from_width(start: f64, width: f64) -> Result<Self> {
        if !width.is_finite() || width < 0.0 {
            return Err(Error::InvalidAngle(width));
        }
        Self::normalize(start, start + width)
    }

    pub fn is_empty(self) -> bool {
        matches!(self, Self::Empty)
    }

    pub fn is_full(self) -> bool {
        matches!(self, Self::Full)
    }

    /// Angular measure in `[0, 2*pi]`.
    pub fn measure(self) -> f64 {
        match self {
            Self::Empty => 0.0,
            Self::Full => TAU,
            Self::Span { start, end } => {
                if end > start {
                    end - start
                } else {
                    TAU - start + end
                }
            }
        }
    }

    /// Whether the arc wraps past `2*pi`.
    pub fn wraps(self) -> bool {
        matches!(self, Self::Span { start, end } if end < start)
    }

    /// Half-open membership test; a point on a shared boundary belongs to
    /// exactly one of two abutting arcs.
    pub fn contains(self, angle: f64) -> bool {
        let a = reduce(angle);
        match self {
            Self::Empty => false,
            Self::Full => true,
            Self::Span { start, end } => {
                if end > start {
                    start <= a && a < end
                } else {
                    a >= start || a < end
                }
            }
        }
    }

    /// Start endpoint; `Empty` and `Full` report 0.
    pub fn start(self) -> f64 {
        match self {
            Self::Span { start, .. } => start,
            _ => 0.0,
        }
    }

    /// Non-wrapping segments `(s, e)` with `0 <= s < e <= 2*pi` covering the arc.
    pub(crate) fn segments(self) -> Vec<(f64, f64)> {
        match self {
            Self::Empty => vec![],
            Self::Full => vec![(0.0, TAU)],
            Self::Span { start, end } => {
                if end > start {
                    vec![(start, end)]
                } else if end == 0.0 {
                    vec![(start, TAU)]
                } else {
                    vec![(0.0, end), (start, TAU)]
                }
            }
        }
    }
}

/// Serialized form: `{"start": f, "end": f}` in radians. `Full` is encoded
/// with `end = 2*pi`; coincident endpoints decode as `Empty`.
#[derive(Serialize, Deserialize)]
struct ArcRepr {
    start: f64,
    end: f64,
}

impl Serialize for Arc {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let repr = match *self {
            Self::Empty => ArcRepr { start: 0.0, end: 0.0 },
            Self::Full => ArcRepr { start: 0.0, end: TAU },
            Self::Span { start, end } => ArcRepr {
                start,
                end: if end > start { end } else { end + TAU },
            },
        };
        repr.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Arc {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = ArcRepr::deserialize(deserializer)?;
        Arc::normalize(repr.start, repr.end).map_err(serde::de::Error::custom)
    }
}

/// Reduces an angle into `[0, 2*pi)`.
pub fn reduce(angle: f64) -> f64 {
    let r = angle.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn normalize_identity_case() {
        let a = Arc::normalize(0.0, std::f64::consts::PI).unwrap();
        assert_abs_diff_eq!(a.measure(), std::f64::consts::PI);
        assert!(!a.wraps());
    }

    #[test]
    fn normalize_wrapping_case() {
        let a = Arc::normalize(5.5, 0.5).unwrap();
        assert!(a.wraps());
        assert_abs_diff_eq!(a.measure(), TAU - 5.5 + 0.5, epsilon = 1e-12);
        assert!(a.contains(6.0));
        assert!(a.contains(0.2));
        assert!(!a.contains(3.0));
    }

    #[test]
    fn normalize_full_circle() {
        assert_eq!(Arc::normalize(0.0, TAU).unwrap(), Arc::Full);
        assert_eq!(Arc::normalize(1.0, 1.0 + TAU).unwrap(), Arc::Full);
        assert_abs_diff_eq!(Arc::Full.measure(), TAU);
    }

    #[test]
    fn coincident_endpoints_are_empty() {
        assert_eq!(Arc::normalize(1.0, 1.0).unwrap(), Arc::Empty);
        assert_eq!(Arc::normalize(0.0, 0.0).unwrap(), Arc::Empty);
        assert_eq!(Arc::Empty.measure(), 0.0);
    }

    #[test]
    fn non_finite_rejected() {
        assert!(matches!(Arc::normalize(f64::NAN, 1.0), Err(Error::InvalidAngle(_))));
        assert!(matches!(Arc::normalize(0.0, f64::INFINITY), Err(Error::InvalidAngle(_))));
    }

    #[test]
    fn half_open_membership() {
        let a = Arc::normalize(1.0, 2.0).unwrap();
        assert!(a.contains(1.0));
        assert!(!a.contains(2.0));
    }

    #[test]
    fn serde_full_and_span() {
        let full: Arc = serde_json::from_str(&serde_json::to_string(&Arc::Full).unwrap()).unwrap();
        assert_eq!(full, Arc::Full);
        let a = Arc::normalize(5.5, 0.5).unwrap();
        let back: Arc = serde_json::from_str(&serde_json::to_string(&a).unwrap()).unwrap();
        assert_eq!(back, a);
    }

    #[test]
    fn reduce_handles_tiny_negative() {
        let r = reduce(-1e-18);
        assert!((0.0..TAU).contains(&r));
    }
}
