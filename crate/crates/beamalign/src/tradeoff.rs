//! The scanning-beam vs transmission-beam width trade-off for channels
//! with a single dominant path.
//!
//! With one path, the feedback pins the angle of departure to exactly one
//! component beam, so transmission-beam widths are component-beam widths.
//! Narrower scanning beams force fewer, wider component beams; wider
//! scanning beams buy overlap structure that splits the circle into up to
//! `2b` component beams of width down to `pi / b`.

use crate::error::{Error, Result};
use crate::tulip::TulipDesign;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

/// Summary measure over a set of beamwidths.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Measure {
    Max,
    Mean,
}

impl Measure {
    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "max" => Ok(Self::Max),
            "mean" => Ok(Self::Mean),
            other => Err(Error::InvalidConfig {
                field: "measure".into(),
                reason: format!("unknown measure `{other}` (expected max or mean)"),
            }),
        }
    }

    pub fn apply(self, values: &[f64]) -> Result<f64> {
        match self {
            Self::Max => measure_max(values),
            Self::Mean => measure_mean(values),
        }
    }
}

/// Maximum of a nonempty value list.
pub fn measure_max(values: &[f64]) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::EmptyInput("measure over empty beamwidth list"));
    }
    Ok(values.iter().fold(f64::MIN, |m, &v| m.max(v)))
}

/// Arithmetic mean of a nonempty value list.
pub fn measure_mean(values: &[f64]) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::EmptyInput("measure over empty beamwidth list"));
    }
    Ok(values.iter().sum::<f64>() / values.len() as f64)
}

/// One point of the trade-off: a scanning-beam measure and the matching
/// transmission-beam measure.
#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TradeoffPoint {
    pub phi_measure: f64,
    pub lambda_measure: f64,
}

/// Whether a traced curve value is exact or only an upper bound.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundType {
    Optimal,
    UpperBound,
}

/// A traced curve row.
#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TradeoffCurvePoint {
    pub phi_measure: f64,
    pub lambda_measure: f64,
    pub bound_type: BoundType,
}

/// The exact endpoints of the max-measure trade-off curve:
/// `(gamma, gamma)` for the equal disjoint tiling and
/// `(3*gamma/2, gamma/2)` for the fully symmetric overlap design, with
/// `gamma = 2*pi / b`.
pub fn tradeoff_endpoints(b: usize) -> Result<(TradeoffPoint, TradeoffPoint)> {
    if b < 2 {
        return Err(Error::Infeasible(format!("need at least 2 beams, got {b}")));
    }
    let gamma = TAU / b as f64;
    Ok((
        TradeoffPoint { phi_measure: gamma, lambda_measure: gamma },
        TradeoffPoint { phi_measure: 1.5 * gamma, lambda_measure: 0.5 * gamma },
    ))
}

/// The minimal transmission-beam measure achievable by a covering tulip
/// whose scanning-beam measure does not exceed `phi_max`, realized by the
/// symmetric family with per-beam overlap `v = phi_max - gamma`.
///
/// For the max measure the symmetric family is optimal: with all beams at
/// width `gamma + v`, the total overlap budget is `b*v`, so some exclusive
/// part has width at least `gamma - v`.
pub fn curve_point(b: usize, measure: Measure, phi_max: f64) -> Result<TradeoffPoint> {
    if b < 2 {
        return Err(Error::Infeasible(format!("need at least 2 beams, got {b}")));
    }
    let gamma = TAU / b as f64;
    if phi_max < gamma - 1e-12 {
        return Err(Error::Infeasible(format!(
            "{b} beams of width at most {phi_max} cannot cover the circle (need {gamma})"
        )));
    }
    let v = (phi_max - gamma).clamp(0.0, 0.5 * gamma);
    let lambda_measure = match measure {
        Measure::Max => gamma - v,
        Measure::Mean => {
            if v > 0.0 {
                0.5 * gamma
            } else {
                gamma
            }
        }
    };
    Ok(TradeoffPoint { phi_measure: gamma + v, lambda_measure })
}

/// Traces the trade-off curve on `samples` evenly spaced scanning-beam
/// targets between `gamma` and `3*gamma/2`.
///
/// Endpoint rows are exact; interior rows are marked optimal only where
/// the brute-force cross-check applies (small `b`), and as upper bounds
/// otherwise.
pub fn tradeoff_curve(b: usize, measure: Measure, samples: usize) -> Result<Vec<TradeoffCurvePoint>> {
    if samples < 2 {
        return Err(Error::InvalidConfig {
            field: "samples".into(),
            reason: format!("need at least 2 samples, got {samples}"),
        });
    }
    let gamma = TAU / b as f64;
    let mut points = Vec::with_capacity(samples);
    for k in 0..samples {
        let t = k as f64 / (samples - 1) as f64;
        let phi_max = gamma * (1.0 + 0.5 * t);
        let point = curve_point(b, measure, phi_max)?;
        let exact_endpoint = k == 0 || k == samples - 1;
        let bound_type = if exact_endpoint || b <= 4 {
            BoundType::Optimal
        } else {
            BoundType::UpperBound
        };
        points.push(TradeoffCurvePoint {
            phi_measure: point.phi_measure,
            lambda_measure: point.lambda_measure,
            bound_type,
        });
    }
    Ok(points)
}

/// Brute-force oracle for the max-measure curve: enumerates every
/// composition of `grid_n` grid units into `2b` slot widths and returns,
/// for each cap `c`, the minimal max component-beam width over covering
/// tulips whose widest beam spans at most `c` grid units.
///
/// Entry `c` of the result is in radians; `f64::INFINITY` marks caps
/// admitting no valid design.
pub fn brute_force_max_curve(b: usize, grid_n: usize) -> Vec<f64> {
    let slots = 2 * b;
    let mut best = vec![u32::MAX; grid_n + 1];

    fn recurse(
        widths: &mut Vec<u32>,
        remaining: u32,
        slots: usize,
        b: usize,
        best: &mut [u32],
    ) {
        if widths.len() == slots - 1 {
            widths.push(remaining);
            score(widths, b, best);
            widths.pop();
            return;
        }
        for w in 0..=remaining {
            widths.push(w);
            recurse(widths, remaining - w, slots, b, best);
            widths.pop();
        }
    }

    fn score(widths: &[u32], b: usize, best: &mut [u32]) {
        let slots = widths.len();
        let mut phi_max = 0u32;
        for i in 0..b {
            let beam: u32 = (0..3).map(|k| widths[(2 * i + k) % slots]).sum();
            if beam == 0 {
                return;
            }
            phi_max = phi_max.max(beam);
        }
        let lambda_max = widths.iter().copied().max().expect("nonempty");
        if lambda_max < best[phi_max as usize] {
            best[phi_max as usize] = lambda_max;
        }
    }

    let mut widths = Vec::with_capacity(slots);
    recurse(&mut widths, grid_n as u32, slots, b, &mut best);
    // Prefix-minimize so entry c covers all designs with max beam <= c.
    let step = TAU / grid_n as f64;
    let mut out = Vec::with_capacity(grid_n + 1);
    let mut running = u32::MAX;
    for cap in 0..=grid_n {
        running = running.min(best[cap]);
        out.push(if running == u32::MAX {
            f64::INFINITY
        } else {
            running as f64 * step
        });
    }
    out
}

/// The (max SB width, max TB width) point realized by a tulip design
/// under single-path decoding.
pub fn design_point(design: &TulipDesign) -> Result<TradeoffPoint> {
    let phi = measure_max(&design.beam_widths())?;
    let widths: Vec<f64> = design
        .to_cbset()
        .widths()
        .into_iter()
        .filter(|&w| w > 0.0)
        .collect();
    let lambda = measure_max(&widths)?;
    Ok(TradeoffPoint { phi_measure: phi, lambda_measure: lambda })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    #[test]
    fn measures_on_small_list() {
        let values = [1.0, 2.0, 3.0];
        assert_abs_diff_eq!(measure_max(&values).unwrap(), 3.0);
        assert_abs_diff_eq!(measure_mean(&values).unwrap(), 2.0);
        assert!(matches!(measure_max(&[]), Err(Error::EmptyInput(_))));
    }

    #[test]
    fn equal_values_collapse_measures() {
        let values = [0.7; 5];
        assert_abs_diff_eq!(measure_max(&values).unwrap(), measure_mean(&values).unwrap());
    }

    #[test]
    fn endpoints_for_four_beams() {
        let (lo, hi) = tradeoff_endpoints(4).unwrap();
        assert_abs_diff_eq!(lo.phi_measure, PI / 2.0);
        assert_abs_diff_eq!(lo.lambda_measure, PI / 2.0);
        assert_abs_diff_eq!(hi.phi_measure, 3.0 * PI / 4.0);
        assert_abs_diff_eq!(hi.lambda_measure, PI / 4.0);
    }

    #[test]
    fn endpoints_for_two_beams() {
        let (lo, hi) = tradeoff_endpoints(2).unwrap();
        assert_abs_diff_eq!(lo.phi_measure, PI);
        assert_abs_diff_eq!(hi.phi_measure, 1.5 * PI);
        assert_abs_diff_eq!(hi.lambda_measure, 0.5 * PI);
    }

    #[test]
    fn interior_point_follows_symmetric_family() {
        let gamma = TAU / 5.0;
        let p = curve_point(5, Measure::Max, 1.25 * gamma).unwrap();
        assert_abs_diff_eq!(p.lambda_measure, 0.75 * gamma, epsilon = 1e-12);
    }

    #[test]
    fn infeasible_below_gamma() {
        assert!(matches!(
            curve_point(5, Measure::Max, 0.9 * TAU / 5.0),
            Err(Error::Infeasible(_))
        ));
    }

    #[test]
    fn curve_is_monotone_and_hits_endpoints() {
        for b in [2usize, 3, 8] {
            let gamma = TAU / b as f64;
            let curve = tradeoff_curve(b, Measure::Max, 11).unwrap();
            assert_eq!(curve.len(), 11);
            assert_abs_diff_eq!(curve[0].phi_measure, gamma, epsilon = 1e-12);
            assert_abs_diff_eq!(curve[0].lambda_measure, gamma, epsilon = 1e-12);
            assert_abs_diff_eq!(curve[10].phi_measure, 1.5 * gamma, epsilon = 1e-12);
            assert_abs_diff_eq!(curve[10].lambda_measure, 0.5 * gamma, epsilon = 1e-12);
            assert!(curve.windows(2).all(|w| w[1].lambda_measure <= w[0].lambda_measure + 1e-12));
        }
    }

    #[test]
    fn endpoint_designs_realize_lemma_values() {
        for b in [3usize, 5] {
            let gamma = TAU / b as f64;
            let es = TulipDesign::symmetric(b, 0.0).unwrap();
            let p = design_point(&es).unwrap();
            assert_abs_diff_eq!(p.phi_measure, gamma, epsilon = 1e-9);
            assert_abs_diff_eq!(p.lambda_measure, gamma, epsilon = 1e-9);
            let full = TulipDesign::symmetric(b, gamma / 2.0).unwrap();
            let p = design_point(&full).unwrap();
            assert_abs_diff_eq!(p.phi_measure, 1.5 * gamma, epsilon = 1e-9);
            assert_abs_diff_eq!(p.lambda_measure, 0.5 * gamma, epsilon = 1e-9);
        }
    }

    #[test]
    fn brute_curve_matches_symmetric_family_at_small_scale() {
        let b = 3;
        let grid_n = 24; // gamma is exactly 8 grid units
        let table = brute_force_max_curve(b, grid_n);
        let gamma = TAU / b as f64;
        let step = TAU / grid_n as f64;
        for extra in 0..=4 {
            let cap_units = 8 + extra;
            let brute = table[cap_units as usize];
            let analytic = curve_point(b, Measure::Max, cap_units as f64 * step)
                .unwrap()
                .lambda_measure;
            assert!(
                (brute - analytic).abs() <= step + 1e-9,
                "cap {cap_units}: brute {brute} vs analytic {analytic}"
            );
        }
        assert_abs_diff_eq!(table[8], gamma, epsilon = 1e-9);
        assert_abs_diff_eq!(table[12], gamma / 2.0, epsilon = 1e-9);
    }
}
