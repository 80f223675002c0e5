//! Exact evaluation of feedback probabilities and the expected
//! transmission beamwidth.
//!
//! Paths are treated as i.i.d. draws from the (single-user-reduced) AoD
//! pdf. The probability that the feedback equals a positivity set `A`
//! follows from inclusion-exclusion over the subset lattice: with
//! `G(B)` the total mass of component beams whose index set lies within
//! `B`, the chance that all `p` paths report within `B` is `G(B)^p`, and
//! alternating sums sharpen "within" to "exactly".

use crate::error::{Error, Result};
use crate::geometry::{component_beams, coverage_check, coverage_gap, BeamDesign, ComponentBeam};
use crate::index_set::IndexSet;
use crate::pdf::{AoDPdf, EPS_PROB};
use crate::policy::{achievable_sets, tb_width, Policy, PositivitySet};
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

/// Precomputed state for evaluating one (design, pdf, p, policy) tuple.
#[derive(Clone, Debug)]
pub struct ObjectiveContext {
    cbs: Vec<ComponentBeam>,
    masses: Vec<f64>,
    p: usize,
    policy: Policy,
    achievable: Vec<PositivitySet>,
}

impl ObjectiveContext {
    /// Builds a context for a covering design. Refuses designs that leave
    /// part of the circle unprobed, and path-aware policies with `p != 2`.
    pub fn for_design(
        design: &BeamDesign,
        pdf: &AoDPdf,
        p: usize,
        policy: Policy,
    ) -> Result<Self> {
        if !coverage_check(design) {
            return Err(Error::NotCovering { gap: coverage_gap(design) });
        }
        Self::from_components(component_beams(design), pdf, p, policy)
    }

    /// Builds a context from component beams that must tile the circle.
    pub fn from_components(
        cbs: Vec<ComponentBeam>,
        pdf: &AoDPdf,
        p: usize,
        policy: Policy,
    ) -> Result<Self> {
        if p < 1 {
            return Err(Error::InvalidConfig {
                field: "p".into(),
                reason: "path count must be at least 1".into(),
            });
        }
        if policy.is_path_aware() && p != 2 {
            return Err(Error::InvalidConfig {
                field: "p".into(),
                reason: format!("policy {policy} assumes exactly 2 paths, got p = {p}"),
            });
        }
        let covered: f64 = cbs.iter().map(|c| c.width()).sum();
        if TAU - covered > crate::geometry::EPS_COVERAGE {
            return Err(Error::NotCovering { gap: TAU - covered });
        }
        let masses: Vec<f64> = cbs.iter().map(|c| pdf.mass(&c.region)).collect();
        let achievable = achievable_sets(&cbs, p);
        Ok(Self { cbs, masses, p, policy, achievable })
    }

    pub fn components(&self) -> &[ComponentBeam] {
        &self.cbs
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    pub fn policy(&self) -> Policy {
        self.policy
    }

    pub fn path_count(&self) -> usize {
        self.p
    }

    /// Positivity sets with nonzero probability, in deterministic order.
    pub fn achievable(&self) -> &[PositivitySet] {
        &self.achievable
    }

    /// Total mass of component beams whose index set lies within `b`.
    fn mass_within(&self, b: IndexSet) -> f64 {
        self.cbs
            .iter()
            .zip(&self.masses)
            .filter(|(cb, _)| cb.index_set.is_subset_of(b))
            .map(|(_, g)| g)
            .sum()
    }

    /// Probability that the feedback's positivity set is exactly `a`.
    pub fn p_of_a(&self, a: PositivitySet) -> Result<f64> {
        let target = a.set();
        let mut total = 0.0;
        for b in target.nonempty_subsets() {
            let sign = if (target.len() - b.len()) % 2 == 0 { 1.0 } else { -1.0 };
            total += sign * self.mass_within(b).powi(self.p as i32);
        }
        if total < -EPS_PROB {
            return Err(Error::NumericalInstability { value: total });
        }
        Ok(total.max(0.0))
    }

    /// Transmission-beam width decoded for `a` under this context's policy.
    pub fn tb_width(&self, a: PositivitySet) -> Result<f64> {
        tb_width(self.policy, &self.cbs, a)
    }

    /// The expected average transmission beamwidth: the probability-
    /// weighted width over all achievable positivity sets.
    pub fn lambda_bar(&self) -> Result<f64> {
        let mut total = 0.0;
        for &a in &self.achievable {
            let p_a = self.p_of_a(a)?;
            if p_a == 0.0 {
                continue;
            }
            total += p_a * self.tb_width(a)?;
        }
        Ok(total)
    }

    /// Full evaluation report with one row per achievable positivity set.
    pub fn report(&self) -> Result<EvaluationReport> {
        let mut per_a = Vec::with_capacity(self.achievable.len());
        let mut lambda_bar = 0.0;
        for &a in &self.achievable {
            let p_a = self.p_of_a(a)?;
            let width = self.tb_width(a)?;
            lambda_bar += p_a * width;
            per_a.push(PerAEntry { a: a.set(), p_a, width });
        }
        Ok(EvaluationReport { format_version: 1, lambda_bar, per_a })
    }
}

/// Serializable evaluation report.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EvaluationReport {
    pub format_version: u32,
    pub lambda_bar: f64,
    #[serde(rename = "per_A")]
    pub per_a: Vec<PerAEntry>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PerAEntry {
    #[serde(rename = "A")]
    pub a: IndexSet,
    #[serde(rename = "P_A")]
    pub p_a: f64,
    pub width: f64,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Arc;
    use approx::assert_abs_diff_eq;

    fn es(b: usize) -> BeamDesign {
        let gamma = TAU / b as f64;
        BeamDesign::new(
            (0..b)
                .map(|i| {
                    Arc::normalize(i as f64 * gamma, ((i + 1) % b) as f64 * gamma).unwrap()
                })
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn es_singleton_probability() {
        let ctx = ObjectiveContext::for_design(&es(5), &AoDPdf::uniform(), 2, Policy::Sd).unwrap();
        let p = ctx.p_of_a(PositivitySet::from_indices(&[2])).unwrap();
        assert_abs_diff_eq!(p, 0.04, epsilon = 1e-12);
    }

    #[test]
    fn es_pair_probability_by_inclusion_exclusion() {
        let ctx = ObjectiveContext::for_design(&es(5), &AoDPdf::uniform(), 2, Policy::Sd).unwrap();
        let p = ctx.p_of_a(PositivitySet::from_indices(&[1, 3])).unwrap();
        assert_abs_diff_eq!(p, 0.08, epsilon = 1e-12);
    }

    #[test]
    fn probabilities_sum_to_one_on_es() {
        for p in 1..=3 {
            let ctx = ObjectiveContext::for_design(&es(5), &AoDPdf::uniform(), p, Policy::Sd).unwrap();
            let total: f64 = ctx
                .achievable()
                .iter()
                .map(|&a| ctx.p_of_a(a).unwrap())
                .sum();
            assert_abs_diff_eq!(total, 1.0, epsilon = EPS_PROB);
        }
    }

    #[test]
    fn sd_es_five_beams_two_paths() {
        let ctx = ObjectiveContext::for_design(&es(5), &AoDPdf::uniform(), 2, Policy::Sd).unwrap();
        // (2*pi/5) * (2 - 1/5)
        assert_abs_diff_eq!(ctx.lambda_bar().unwrap(), TAU / 5.0 * 1.8, epsilon = 1e-9);
    }

    #[test]
    fn bf_on_reported_three_beam_arcs() {
        let d = BeamDesign::new(vec![
            Arc::normalize(0.0, 1.36).unwrap(),
            Arc::normalize(1.36, 3.29).unwrap(),
            Arc::normalize(3.29, 0.0).unwrap(),
        ])
        .unwrap();
        let ctx = ObjectiveContext::for_design(&d, &AoDPdf::uniform(), 2, Policy::Bf).unwrap();
        let lb = ctx.lambda_bar().unwrap();
        assert!((lb - 1.94).abs() < 0.015, "lambda_bar = {lb}");
    }

    #[test]
    fn single_path_objective_on_ges_is_mass_weighted_width() {
        let d = BeamDesign::new(vec![
            Arc::normalize(0.0, 1.1).unwrap(),
            Arc::normalize(1.1, 2.9).unwrap(),
            Arc::normalize(2.9, 4.4).unwrap(),
            Arc::normalize(4.4, 0.0).unwrap(),
        ])
        .unwrap();
        let pdf = AoDPdf::truncated_normal(std::f64::consts::PI, 1.0).unwrap();
        let ctx = ObjectiveContext::for_design(&d, &pdf, 1, Policy::Sd).unwrap();
        let direct: f64 = ctx
            .components()
            .iter()
            .zip(ctx.masses())
            .map(|(cb, g)| g * cb.width())
            .sum();
        assert_abs_diff_eq!(ctx.lambda_bar().unwrap(), direct, epsilon = 1e-12);
    }

    #[test]
    fn refuses_non_covering_design() {
        let d = BeamDesign::new(vec![
            Arc::normalize(0.0, 1.0).unwrap(),
            Arc::normalize(2.0, 3.0).unwrap(),
        ])
        .unwrap();
        assert!(matches!(
            ObjectiveContext::for_design(&d, &AoDPdf::uniform(), 2, Policy::Sd),
            Err(Error::NotCovering { .. })
        ));
    }

    #[test]
    fn path_aware_policy_requires_two_paths() {
        assert!(matches!(
            ObjectiveContext::for_design(&es(5), &AoDPdf::uniform(), 3, Policy::TwoSd),
            Err(Error::InvalidConfig { .. })
        ));
    }
}
