//! The tulip parametrization: contiguous scanning beams where only
//! circularly adjacent beams may intersect.
//!
//! A tulip design of `b` beams is captured by `2b` circularly ordered
//! boundary points. Consecutive boundaries alternate between overlap and
//! exclusive (primary) component beams, so the component-beam set has
//! exactly `2b` slots, some possibly of zero width. Exhaustive-search
//! designs are the zero-overlap corner of this family.

use crate::error::{Error, Result};
use crate::geometry::{
    component_beams, reduce, Arc, ArcSet, BeamDesign, EPS_GEO,
};
use crate::policy::achievable_sets;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

/// Width tolerance for classifying overlaps as zero and primaries as equal.
pub const EPS_CLASS: f64 = 1e-9;

/// A tulip design: beam `i` spans `[x[i], y[i])` with `y` unrolled past
/// `2*pi` where the beam wraps. Starts are anchored so `x` is
/// nondecreasing.
#[derive(Clone, Debug, PartialEq)]
pub struct TulipDesign {
    x: Vec<f64>,
    y: Vec<f64>,
    design: BeamDesign,
}

/// Classification of a design by its overlap structure.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DesignClass {
    /// Equal-width disjoint beams.
    Es,
    /// Disjoint beams of arbitrary widths.
    Ges,
    /// At least one nonzero overlap.
    Tulip,
}

impl std::fmt::Display for DesignClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Es => "es",
            Self::Ges => "ges",
            Self::Tulip => "tulip",
        })
    }
}

/// One violated tulip constraint, reported by beam index.
#[derive(Clone, Debug, PartialEq)]
pub enum TulipViolation {
    /// `x[i] > x[i+1]` in the anchored frame.
    StartOrder { i: usize },
    /// `y[i] > y[i+1]`.
    EndOrder { i: usize },
    /// `y[i]` outside `[x[i+1], x[i+2]]` (indices unrolled past the wrap).
    EndInterleave { i: usize, lo: f64, hi: f64, y: f64 },
    /// Beam `i` has zero width.
    ZeroWidthBeam { i: usize },
    /// The beams leave part of the circle uncovered.
    Coverage { gap: f64 },
}

impl std::fmt::Display for TulipViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::StartOrder { i } => write!(f, "start order: x[{i}] > x[{}]", i + 1),
            Self::EndOrder { i } => write!(f, "end order: y[{i}] > y[{}]", i + 1),
            Self::EndInterleave { i, lo, hi, y } => {
                write!(f, "end interleave: y[{i}] = {y} outside [{lo}, {hi}]")
            }
            Self::ZeroWidthBeam { i } => write!(f, "beam {i} has zero width"),
            Self::Coverage { gap } => write!(f, "coverage gap of measure {gap}"),
        }
    }
}

impl TulipDesign {
    /// Builds a design from per-beam start and end angles.
    ///
    /// Starts are reduced into `[0, 2*pi)`; ends are unrolled to
    /// `(x[i], x[i] + 2*pi]`. Tulip constraint checking is left to
    /// [`TulipDesign::validate`].
    pub fn try_new(x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        if x.len() != y.len() {
            return Err(Error::InvalidDesign(format!(
                "got {} starts but {} ends",
                x.len(),
                y.len()
            )));
        }
        let mut xs = Vec::with_capacity(x.len());
        let mut ys = Vec::with_capacity(x.len());
        let mut beams = Vec::with_capacity(x.len());
        for (i, (&s, &e)) in x.iter().zip(&y).enumerate() {
            if !s.is_finite() {
                return Err(Error::InvalidAngle(s));
            }
            if !e.is_finite() {
                return Err(Error::InvalidAngle(e));
            }
            let start = reduce(s);
            let width = (e - s).rem_euclid(TAU);
            if width == 0.0 {
                return Err(Error::InvalidDesign(format!("beam {i} has zero measure")));
            }
            xs.push(start);
            ys.push(start + width);
            beams.push(Arc::normalize(start, start + width)?);
        }
        let design = BeamDesign::new(beams)?;
        Ok(Self { x: xs, y: ys, design })
    }

    /// Builds a design from `2b` circularly nondecreasing boundary points.
    ///
    /// Boundary `2i` opens the overlap flowing into beam `i`; boundary
    /// `2i + 1` opens its exclusive part; beam `i` spans boundaries `2i`
    /// through `2i + 3`. Equal consecutive values encode zero-width
    /// overlaps. The beam labels are rotated so starts come out sorted.
    pub fn from_boundaries(z: &[f64]) -> Result<Self> {
        if z.len() < 4 || z.len() % 2 != 0 {
            return Err(Error::InvalidBoundaries(format!(
                "need an even number of boundaries, at least 4, got {}",
                z.len()
            )));
        }
        let n = z.len();
        let b = n / 2;
        let mut widths = Vec::with_capacity(n);
        let mut total = 0.0;
        for j in 0..n {
            let raw = z[(j + 1) % n] - z[j];
            let d = if raw < 0.0 && raw > -1e-9 { 0.0 } else { raw.rem_euclid(TAU) };
            widths.push(d);
            total += d;
        }
        if (total - TAU).abs() > 1e-9 {
            return Err(Error::InvalidBoundaries(format!(
                "boundaries are not circularly nondecreasing (slot widths sum to {total}, expected {TAU})"
            )));
        }
        // Rotate beam labels (an even slot rotation) so starts are sorted.
        let starts: Vec<f64> = (0..b).map(|i| reduce(z[2 * i])).collect();
        let mut rot = 0;
        for i in 0..b {
            if starts[(i + 1) % b] < starts[i] {
                rot = (i + 1) % b;
                break;
            }
        }
        let mut x = Vec::with_capacity(b);
        let mut y = Vec::with_capacity(b);
        let mut beams = Vec::with_capacity(b);
        for i in 0..b {
            let s = 2 * ((rot + i) % b);
            let start = reduce(z[s]);
            let width: f64 = (0..3).map(|k| widths[(s + k) % n]).sum();
            if width <= 0.0 {
                return Err(Error::InvalidDesign(format!("beam {i} has zero measure")));
            }
            x.push(start);
            y.push(start + width);
            beams.push(Arc::normalize(start, start + width)?);
        }
        let design = BeamDesign::new(beams)?;
        Ok(Self { x, y, design })
    }

    /// The symmetric tulip: all overlaps of width `overlap`, all exclusive
    /// parts of width `2*pi / b - overlap`. `overlap = 0` yields the
    /// equal-width disjoint tiling.
    pub fn symmetric(b: usize, overlap: f64) -> Result<Self> {
        let gamma = TAU / b as f64;
        if !(0.0..gamma).contains(&overlap) {
            return Err(Error::InvalidDesign(format!(
                "symmetric overlap must lie in [0, {gamma}), got {overlap}"
            )));
        }
        let mut z = Vec::with_capacity(2 * b);
        for i in 0..b {
            z.push(i as f64 * gamma);
            z.push(i as f64 * gamma + overlap);
        }
        Self::from_boundaries(&z)
    }

    pub fn b(&self) -> usize {
        self.x.len()
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    /// Unrolled end angles; `y[i] > 2*pi` means beam `i` wraps.
    pub fn y(&self) -> &[f64] {
        &self.y
    }

    pub fn beam_design(&self) -> &BeamDesign {
        &self.design
    }

    pub fn into_beam_design(self) -> BeamDesign {
        self.design
    }

    pub fn beam_widths(&self) -> Vec<f64> {
        self.x.iter().zip(&self.y).map(|(s, e)| e - s).collect()
    }

    /// Checks the tulip validity constraints, reporting each violation.
    ///
    /// In the anchored frame with `x[b] = x[0] + 2*pi` and
    /// `x[b+1] = x[1] + 2*pi`, a valid design has nondecreasing starts and
    /// every end interleaved as `x[i+1] <= y[i] <= x[i+2]`; the final
    /// interleave doubles as the wrap-around coverage condition.
    pub fn validate(&self) -> Vec<TulipViolation> {
        let b = self.b();
        let mut violations = Vec::new();
        let ux = |i: usize| -> f64 {
            if i < b {
                self.x[i]
            } else {
                self.x[i - b] + TAU
            }
        };
        for i in 0..b - 1 {
            if self.x[i] > self.x[i + 1] + EPS_GEO {
                violations.push(TulipViolation::StartOrder { i });
            }
        }
        for i in 0..b - 1 {
            if self.y[i] > self.y[i + 1] + EPS_GEO {
                violations.push(TulipViolation::EndOrder { i });
            }
        }
        for i in 0..b {
            let (lo, hi) = (ux(i + 1), ux(i + 2));
            if self.y[i] < lo - EPS_GEO || self.y[i] > hi + EPS_GEO {
                violations.push(TulipViolation::EndInterleave { i, lo, hi, y: self.y[i] });
            }
        }
        for i in 0..b {
            if self.y[i] - self.x[i] <= EPS_GEO {
                violations.push(TulipViolation::ZeroWidthBeam { i });
            }
        }
        let gap = crate::geometry::coverage_gap(&self.design);
        if gap > crate::geometry::EPS_COVERAGE {
            violations.push(TulipViolation::Coverage { gap });
        }
        violations
    }

    /// The `2b`-slot component-beam structure of this design.
    pub fn to_cbset(&self) -> EffCbSet {
        let b = self.b();
        let mut boundaries = Vec::with_capacity(2 * b);
        for i in 0..b {
            boundaries.push(self.x[i]);
            boundaries.push(reduce(self.y[(i + b - 1) % b]));
        }
        EffCbSet { b, boundaries }
    }

    /// Classifies the design by overlap structure and width equality.
    pub fn classify(&self) -> DesignClass {
        let cbs = self.to_cbset();
        let ges = (0..self.b()).all(|i| cbs.overlap_width(i) <= EPS_CLASS);
        if !ges {
            return DesignClass::Tulip;
        }
        let primaries: Vec<f64> = (0..self.b()).map(|i| cbs.primary_width(i)).collect();
        let spread = primaries.iter().fold(f64::MIN, |m, &w| m.max(w))
            - primaries.iter().fold(f64::MAX, |m, &w| m.min(w));
        if spread <= EPS_CLASS {
            DesignClass::Es
        } else {
            DesignClass::Ges
        }
    }
}

/// The component-beam slots of a tulip design: `2b` boundaries whose
/// consecutive gaps alternate overlap and primary widths.
#[derive(Clone, Debug, PartialEq)]
pub struct EffCbSet {
    b: usize,
    /// Boundary `2i` opens the overlap into beam `i`; `2i + 1` its
    /// exclusive part.
    boundaries: Vec<f64>,
}

impl EffCbSet {
    pub fn b(&self) -> usize {
        self.b
    }

    pub fn boundaries(&self) -> &[f64] {
        &self.boundaries
    }

    fn slot_width(&self, j: usize) -> f64 {
        let n = 2 * self.b;
        let d = self.boundaries[(j + 1) % n] - self.boundaries[j];
        if d.abs() <= EPS_GEO {
            0.0
        } else {
            d.rem_euclid(TAU)
        }
    }

    /// Width of the overlap shared by beams `i - 1` and `i`.
    pub fn overlap_width(&self, i: usize) -> f64 {
        self.slot_width(2 * i)
    }

    /// Width of the exclusive part of beam `i`.
    pub fn primary_width(&self, i: usize) -> f64 {
        self.slot_width(2 * i + 1)
    }

    /// Overlap arc into beam `i`, `Empty` when the overlap has zero width.
    pub fn overlap_arc(&self, i: usize) -> Arc {
        self.slot_arc(2 * i)
    }

    /// Exclusive arc of beam `i`, `Empty` when squeezed to zero width.
    pub fn primary_arc(&self, i: usize) -> Arc {
        self.slot_arc(2 * i + 1)
    }

    fn slot_arc(&self, j: usize) -> Arc {
        let w = self.slot_width(j);
        if w == 0.0 {
            Arc::Empty
        } else {
            Arc::from_width(self.boundaries[j], w).expect("boundaries are finite")
        }
    }

    /// All `2b` slot widths in slot order; they sum to `2*pi`.
    pub fn widths(&self) -> Vec<f64> {
        (0..2 * self.b).map(|j| self.slot_width(j)).collect()
    }
}

/// Number of distinct feedback sequences achievable with at most `p`
/// paths on the given design.
pub fn count_feedback_sequences(design: &BeamDesign, p: usize) -> usize {
    achievable_sets(&component_beams(design), p).len()
}

/// Serialized design file: `{format_version, b, x, y, class, beams}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DesignFile {
    pub format_version: u32,
    pub b: usize,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub class: DesignClass,
    pub beams: Vec<Arc>,
}

impl DesignFile {
    pub fn from_design(design: &TulipDesign) -> Self {
        Self {
            format_version: 1,
            b: design.b(),
            x: design.x().to_vec(),
            y: design.y().to_vec(),
            class: design.classify(),
            beams: design.beam_design().beams().to_vec(),
        }
    }

    pub fn into_design(self) -> Result<TulipDesign> {
        if self.format_version != 1 {
            return Err(Error::InvalidConfig {
                field: "format_version".into(),
                reason: format!("unsupported version {}", self.format_version),
            });
        }
        if self.b != self.x.len() {
            return Err(Error::InvalidDesign(format!(
                "b = {} but {} starts given",
                self.b,
                self.x.len()
            )));
        }
        TulipDesign::try_new(self.x, self.y)
    }
}

/// Convenience: union of all beam arcs, for coverage diagnostics.
pub fn design_union(design: &TulipDesign) -> ArcSet {
    design.beam_design().union()
}
