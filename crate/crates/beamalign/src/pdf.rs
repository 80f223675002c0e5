//! Probability models for the angle of departure.
//!
//! A pdf lives on the circle `[0, 2*pi)`. Multi-user priors reduce to a
//! single weighted mixture, so one pdf value always suffices downstream.

use crate::error::{Error, Result};
use crate::geometry::ArcSet;
use rand::Rng;
use rand_distr::Distribution;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};
use std::f64::consts::TAU;

/// Tolerance for probability normalization checks.
pub const EPS_PROB: f64 = 1e-9;

#[derive(Clone, Debug)]
enum Kind {
    Uniform,
    TruncatedNormal {
        mu: f64,
        sigma: f64,
        /// Mass of the untruncated normal inside `(0, 2*pi)`.
        norm: f64,
    },
    PiecewiseConstant {
        breakpoints: Vec<f64>,
        densities: Vec<f64>,
        /// Cumulative cell masses; `cum[k]` is the mass of `[0, breakpoints[k])`.
        cum: Vec<f64>,
    },
    Mixture {
        weights: Vec<f64>,
        components: Vec<AoDPdf>,
    },
}

/// A validated angle-of-departure distribution over `[0, 2*pi)`.
#[derive(Clone, Debug)]
pub struct AoDPdf {
    kind: Kind,
}

impl AoDPdf {
    /// The no-prior-knowledge model: constant density `1 / (2*pi)`.
    pub fn uniform() -> Self {
        Self { kind: Kind::Uniform }
    }

    /// Normal density truncated to `(0, 2*pi)` and renormalized.
    pub fn truncated_normal(mu: f64, sigma: f64) -> Result<Self> {
        if !mu.is_finite() || !sigma.is_finite() || sigma <= 0.0 {
            return Err(Error::InvalidPdf(format!(
                "truncated normal needs finite mu and sigma > 0, got mu={mu}, sigma={sigma}"
            )));
        }
        let base = Normal::new(mu, sigma).expect("validated parameters");
        let norm = base.cdf(TAU) - base.cdf(0.0);
        if norm < 1e-12 {
            return Err(Error::InvalidPdf(format!(
                "truncation window carries negligible mass ({norm:.3e}) for mu={mu}, sigma={sigma}"
            )));
        }
        Ok(Self {
            kind: Kind::TruncatedNormal { mu, sigma, norm },
        })
    }

    /// Step density over cells `[breakpoints[k], breakpoints[k+1])`.
    ///
    /// Breakpoints must run from 0 to `2*pi` nondecreasing; densities are
    /// nonnegative and must integrate to 1 within [`EPS_PROB`].
    pub fn piecewise_constant(breakpoints: Vec<f64>, densities: Vec<f64>) -> Result<Self> {
        if breakpoints.len() < 2 || densities.len() + 1 != breakpoints.len() {
            return Err(Error::InvalidPdf(format!(
                "need k+1 breakpoints for k >= 1 densities, got {} and {}",
                breakpoints.len(),
                densities.len()
            )));
        }
        if breakpoints[0].abs() > 1e-12 || (breakpoints[breakpoints.len() - 1] - TAU).abs() > 1e-12 {
            return Err(Error::InvalidPdf(
                "breakpoints must start at 0 and end at 2*pi".into(),
            ));
        }
        if breakpoints.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::InvalidPdf("breakpoints must be nondecreasing".into()));
        }
        if densities.iter().any(|&d| !d.is_finite() || d < 0.0) {
            return Err(Error::InvalidPdf("densities must be finite and nonnegative".into()));
        }
        let mut cum = Vec::with_capacity(breakpoints.len());
        cum.push(0.0);
        let mut acc = 0.0;
        for (k, d) in densities.iter().enumerate() {
            acc += d * (breakpoints[k + 1] - breakpoints[k]);
            cum.push(acc);
        }
        if (acc - 1.0).abs() > EPS_PROB {
            return Err(Error::InvalidPdf(format!(
                "total mass is {acc}, must be 1 within {EPS_PROB}"
            )));
        }
        Ok(Self {
            kind: Kind::PiecewiseConstant { breakpoints, densities, cum },
        })
    }

    /// Weighted mixture of component pdfs; the multi-user reduction.
    ///
    /// For every region `R`, `mass(mixture, R)` equals the weighted sum of
    /// component masses on `R`.
    pub fn mixture_of(components: Vec<AoDPdf>, weights: Vec<f64>) -> Result<Self> {
        if components.is_empty() || components.len() != weights.len() {
            return Err(Error::InvalidPdf(format!(
                "mixture needs equally many components and weights, got {} and {}",
                components.len(),
                weights.len()
            )));
        }
        let sum: f64 = weights.iter().sum();
        if weights.iter().any(|&w| !w.is_finite() || w < 0.0) || (sum - 1.0).abs() > EPS_PROB {
            return Err(Error::InvalidWeights { sum });
        }
        Ok(Self {
            kind: Kind::Mixture { weights, components },
        })
    }

    /// Probability mass of an arc set.
    pub fn mass(&self, region: &ArcSet) -> f64 {
        region
            .arcs()
            .iter()
            .flat_map(|a| a.segments())
            .map(|(lo, hi)| self.mass_interval(lo, hi))
            .sum()
    }

    /// Mass of the non-wrapping interval `[lo, hi]` with `0 <= lo <= hi <= 2*pi`.
    pub fn mass_interval(&self, lo: f64, hi: f64) -> f64 {
        debug_assert!((0.0..=TAU + 1e-9).contains(&lo) && lo <= hi + 1e-12 && hi <= TAU + 1e-9);
        match &self.kind {
            Kind::Uniform => (hi - lo) / TAU,
            Kind::TruncatedNormal { mu, sigma, norm } => {
                let base = Normal::new(*mu, *sigma).expect("validated parameters");
                (base.cdf(hi) - base.cdf(lo)) / norm
            }
            Kind::PiecewiseConstant { breakpoints, densities, cum } => {
                let at = |x: f64| -> f64 {
                    // Index of the cell containing x, then linear within it.
                    let k = match breakpoints.binary_search_by(|b| b.total_cmp(&x)) {
                        Ok(k) => k,
                        Err(k) => k.saturating_sub(1),
                    }
                    .min(densities.len().saturating_sub(1));
                    cum[k] + densities[k] * (x - breakpoints[k]).max(0.0)
                };
                at(hi) - at(lo)
            }
            Kind::Mixture { weights, components } => weights
                .iter()
                .zip(components)
                .map(|(w, c)| w * c.mass_interval(lo, hi))
                .sum(),
        }
    }

    /// Draws one angle in `[0, 2*pi)`.
    ///
    /// The truncated normal rejects against the untruncated normal; the
    /// mixture picks a component by weight; piecewise inverts the cdf.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match &self.kind {
            Kind::Uniform => rng.random::<f64>() * TAU,
            Kind::TruncatedNormal { mu, sigma, .. } => {
                let base = rand_distr::Normal::new(*mu, *sigma).expect("validated parameters");
                loop {
                    let x = base.sample(rng);
                    if (0.0..TAU).contains(&x) {
                        return x;
                    }
                }
            }
            Kind::PiecewiseConstant { breakpoints, densities, cum } => {
                let total = *cum.last().expect("nonempty");
                let u = rng.random::<f64>() * total;
                let k = match cum.binary_search_by(|c| c.total_cmp(&u)) {
                    Ok(k) => k,
                    Err(k) => k.saturating_sub(1),
                }
                .min(densities.len() - 1);
                let within = if densities[k] > 0.0 {
                    (u - cum[k]) / densities[k]
                } else {
                    0.0
                };
                crate::geometry::reduce(breakpoints[k] + within)
            }
            Kind::Mixture { weights, components } => {
                let u = rng.random::<f64>();
                let mut acc = 0.0;
                for (w, c) in weights.iter().zip(components) {
                    acc += w;
                    if u < acc {
                        return c.sample(rng);
                    }
                }
                components.last().expect("nonempty").sample(rng)
            }
        }
    }

    /// Piecewise-constant approximation on `n` equal cells whose cell
    /// masses match this pdf exactly.
    pub fn discretize(&self, n: usize) -> Result<AoDPdf> {
        if n < 2 {
            return Err(Error::InvalidResolution(n));
        }
        let step = TAU / n as f64;
        let mut breakpoints: Vec<f64> = (0..=n).map(|k| k as f64 * step).collect();
        breakpoints[n] = TAU;
        let densities: Vec<f64> = (0..n)
            .map(|k| self.mass_interval(breakpoints[k], breakpoints[k + 1]) / (breakpoints[k + 1] - breakpoints[k]))
            .collect();
        Self::piecewise_constant(breakpoints, densities)
    }
}

/// Serializable pdf specification mirroring the config schema.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PdfSpec {
    Uniform,
    TruncatedNormal { mu: f64, sigma: f64 },
    Piecewise {
        breakpoints: Vec<f64>,
        densities: Vec<f64>,
    },
    Mixture {
        weights: Vec<f64>,
        components: Vec<PdfSpec>,
    },
}

impl PdfSpec {
    pub fn build(&self) -> Result<AoDPdf> {
        match self {
            Self::Uniform => Ok(AoDPdf::uniform()),
            Self::TruncatedNormal { mu, sigma } => AoDPdf::truncated_normal(*mu, *sigma),
            Self::Piecewise { breakpoints, densities } => {
                AoDPdf::piecewise_constant(breakpoints.clone(), densities.clone())
            }
            Self::Mixture { weights, components } => {
                let built: Result<Vec<_>> = components.iter().map(|c| c.build()).collect();
                AoDPdf::mixture_of(built?, weights.clone())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Arc;
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn region(s: f64, e: f64) -> ArcSet {
        ArcSet::from_arc(Arc::normalize(s, e).unwrap())
    }

    #[test]
    fn uniform_quarter_circle() {
        assert_abs_diff_eq!(AoDPdf::uniform().mass(&region(0.0, PI / 2.0)), 0.25, epsilon = 1e-15);
    }

    #[test]
    fn truncated_normal_normalizes_to_one() {
        let pdf = AoDPdf::truncated_normal(PI, 1.0).unwrap();
        assert_abs_diff_eq!(pdf.mass(&ArcSet::full()), 1.0, epsilon = EPS_PROB);
    }

    #[test]
    fn mixture_of_identical_uniforms_is_uniform() {
        let m = AoDPdf::mixture_of(vec![AoDPdf::uniform(), AoDPdf::uniform()], vec![0.3, 0.7]).unwrap();
        for (s, e) in [(0.0, 1.0), (3.0, 5.5), (5.5, 0.5)] {
            let r = region(s, e);
            assert_abs_diff_eq!(m.mass(&r), AoDPdf::uniform().mass(&r), epsilon = 1e-12);
        }
    }

    #[test]
    fn mixture_rejects_bad_weights() {
        let err = AoDPdf::mixture_of(vec![AoDPdf::uniform()], vec![0.9]);
        assert!(matches!(err, Err(Error::InvalidWeights { .. })));
    }

    #[test]
    fn mixture_is_linear_in_masses() {
        let tn = AoDPdf::truncated_normal(PI, 1.0).unwrap();
        let m = AoDPdf::mixture_of(vec![AoDPdf::uniform(), tn.clone()], vec![0.5, 0.5]).unwrap();
        let r = region(PI - 1.0, PI + 1.0);
        assert_abs_diff_eq!(
            m.mass(&r),
            0.5 * AoDPdf::uniform().mass(&r) + 0.5 * tn.mass(&r),
            epsilon = 1e-12
        );
    }

    #[test]
    fn discretize_uniform_four_cells() {
        let d = AoDPdf::uniform().discretize(4).unwrap();
        for k in 0..4 {
            let cell = region(k as f64 * PI / 2.0, (k + 1) as f64 * PI / 2.0);
            assert_abs_diff_eq!(d.mass(&cell), 0.25, epsilon = 1e-12);
        }
    }

    #[test]
    fn discretize_truncated_normal_total_mass() {
        let d = AoDPdf::truncated_normal(PI, 1.0).unwrap().discretize(1000).unwrap();
        assert_abs_diff_eq!(d.mass(&ArcSet::full()), 1.0, epsilon = EPS_PROB);
    }

    #[test]
    fn discretize_rejects_tiny_resolution() {
        assert!(matches!(AoDPdf::uniform().discretize(1), Err(Error::InvalidResolution(1))));
    }

    #[test]
    fn discretized_mass_error_bounded_by_max_cell_mass() {
        let pdf = AoDPdf::truncated_normal(PI, 1.0).unwrap();
        let n = 64;
        let d = pdf.discretize(n).unwrap();
        let max_cell = (0..n)
            .map(|k| pdf.mass_interval(k as f64 * TAU / n as f64, (k + 1) as f64 * TAU / n as f64))
            .fold(0.0_f64, f64::max);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let s = rng.random::<f64>() * TAU;
            let e = rng.random::<f64>() * TAU;
            let r = region(s, e);
            assert!((d.mass(&r) - pdf.mass(&r)).abs() <= max_cell + 1e-12);
        }
    }

    #[test]
    fn truncated_normal_samples_stay_in_domain() {
        let pdf = AoDPdf::truncated_normal(PI, 1.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..10_000 {
            let x = pdf.sample(&mut rng);
            assert!((0.0..TAU).contains(&x));
        }
    }

    #[test]
    fn degenerate_mixture_weight_selects_single_component() {
        let tn = AoDPdf::truncated_normal(1.0, 0.1).unwrap();
        let m = AoDPdf::mixture_of(vec![tn, AoDPdf::uniform()], vec![1.0, 0.0]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..2000 {
            let x = m.sample(&mut rng);
            assert!((0.5..1.5).contains(&x), "sample {x} outside first component's range");
        }
    }

    #[test]
    fn uniform_sampling_frequencies_match_mass() {
        let pdf = AoDPdf::uniform();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let r = region(1.0, 2.5);
        let g = pdf.mass(&r);
        let n = 1_000_000;
        let hits = (0..n).filter(|_| r.contains(pdf.sample(&mut rng))).count();
        let freq = hits as f64 / n as f64;
        let bound = 4.0 * (g * (1.0 - g) / n as f64).sqrt();
        assert!((freq - g).abs() <= bound, "freq {freq} vs mass {g} (bound {bound})");
    }

    #[test]
    fn pdf_spec_roundtrip() {
        let spec = PdfSpec::Mixture {
            weights: vec![0.5, 0.5],
            components: vec![PdfSpec::Uniform, PdfSpec::TruncatedNormal { mu: PI, sigma: 1.0 }],
        };
        let json = serde_json::to_string(&spec).unwrap();
        let back: PdfSpec = serde_json::from_str(&json).unwrap();
        assert_eq!(back, spec);
        back.build().unwrap();
    }
}
