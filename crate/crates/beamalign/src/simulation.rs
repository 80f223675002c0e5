//! Monte Carlo validation of the analytic objective.
//!
//! Draws channels, generates feedback, decodes with the configured policy,
//! and aggregates transmission-beam widths and per-feedback frequencies
//! for comparison against the closed-form probabilities. Containment of
//! the sampled paths in the decoded region is checked on every trial; a
//! violation signals a decoding bug, not sampling noise.

use crate::error::{Error, Result};
use crate::geometry::{component_beams, coverage_check, coverage_gap, reduce, Arc, ArcSet, BeamDesign};
use crate::index_set::IndexSet;
use crate::pdf::AoDPdf;
use crate::policy::{feedback, tb_width, uncertainty_region, Policy, PositivitySet};
use crate::tulip::TulipDesign;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::f64::consts::TAU;

/// Trials per worker chunk; chunks get independent seed streams so the
/// merged report is identical regardless of scheduling.
const CHUNK: u64 = 1 << 16;

/// Aggregated simulation results.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SimReport {
    pub format_version: u32,
    pub trials: u64,
    pub empirical_lambda_bar: f64,
    pub std_error: f64,
    #[serde(rename = "per_A")]
    pub per_a: Vec<FrequencyEntry>,
    /// Trials where the decoded region failed its containment promise.
    pub containment_violations: u64,
    pub seed: u64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FrequencyEntry {
    #[serde(rename = "A")]
    pub a: IndexSet,
    pub count: u64,
    pub frequency: f64,
}

impl SimReport {
    pub fn frequency_of(&self, a: IndexSet) -> f64 {
        self.per_a
            .iter()
            .find(|e| e.a == a)
            .map_or(0.0, |e| e.frequency)
    }
}

#[derive(Default)]
struct Tally {
    width_sum: f64,
    width_sq_sum: f64,
    violations: u64,
    counts: HashMap<u64, u64>,
}

/// Runs `trials` independent channel draws of `p` i.i.d. paths each and
/// decodes them under `policy`. Deterministic for a fixed seed.
pub fn simulate(
    design: &BeamDesign,
    policy: Policy,
    pdf: &AoDPdf,
    p: usize,
    trials: u64,
    seed: u64,
) -> Result<SimReport> {
    if trials < 1 {
        return Err(Error::InvalidConfig {
            field: "trials".into(),
            reason: "need at least one trial".into(),
        });
    }
    if policy.is_path_aware() && p != 2 {
        return Err(Error::InvalidConfig {
            field: "p".into(),
            reason: format!("policy {policy} assumes exactly 2 paths, got p = {p}"),
        });
    }
    if !coverage_check(design) {
        return Err(Error::NotCovering { gap: coverage_gap(design) });
    }
    let cbs = component_beams(design);

    let chunks = trials.div_ceil(CHUNK);
    let tallies: Result<Vec<Tally>> = (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let n = CHUNK.min(trials - chunk * CHUNK);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(chunk + 1);
            let mut tally = Tally::default();
            // Decode once per distinct feedback set.
            let mut cache: HashMap<u64, (ArcSet, f64)> = HashMap::new();
            let mut aods = vec![0.0f64; p];
            for _ in 0..n {
                for a in aods.iter_mut() {
                    *a = pdf.sample(&mut rng);
                }
                let positivity = feedback(design, &aods)?;
                let key = positivity.set().bits();
                if !cache.contains_key(&key) {
                    let region = uncertainty_region(policy, &cbs, positivity)?;
                    let width = tb_width(policy, &cbs, positivity)?;
                    cache.insert(key, (region, width));
                }
                let (region, width) = &cache[&key];
                let contained = aods.iter().filter(|&&a| region.contains(a)).count();
                let promise_met = match policy {
                    Policy::Sd | Policy::TwoSd => contained == p,
                    Policy::Bf | Policy::TwoBf => contained >= 1,
                };
                if !promise_met {
                    tally.violations += 1;
                }
                tally.width_sum += width;
                tally.width_sq_sum += width * width;
                *tally.counts.entry(key).or_insert(0) += 1;
            }
            Ok(tally)
        })
        .collect();

    let mut width_sum = 0.0;
    let mut width_sq_sum = 0.0;
    let mut violations = 0;
    let mut counts: Vec<(u64, u64)> = Vec::new();
    for tally in tallies? {
        width_sum += tally.width_sum;
        width_sq_sum += tally.width_sq_sum;
        violations += tally.violations;
        for (key, count) in tally.counts {
            match counts.iter_mut().find(|(k, _)| *k == key) {
                Some((_, c)) => *c += count,
                None => counts.push((key, count)),
            }
        }
    }
    counts.sort_unstable_by_key(|&(key, _)| key);

    let n = trials as f64;
    let mean = width_sum / n;
    let variance = ((width_sq_sum - n * mean * mean) / (n - 1.0).max(1.0)).max(0.0);
    let std_error = (variance / n).sqrt();
    let per_a = counts
        .into_iter()
        .map(|(key, count)| FrequencyEntry {
            a: IndexSet::from_bits(key),
            count,
            frequency: count as f64 / n,
        })
        .collect();
    Ok(SimReport {
        format_version: 1,
        trials,
        empirical_lambda_bar: mean,
        std_error,
        per_a,
        containment_violations: violations,
        seed,
    })
}

/// Relative gain of a transmission beam under the sectored model: the
/// full circle over the beamwidth. Interpretation aid only.
pub fn gain_proxy(width: f64) -> Result<f64> {
    if !width.is_finite() || width <= 0.0 {
        return Err(Error::ZeroWidth);
    }
    Ok(TAU / width)
}

/// A random covering design of contiguous beams: sorted random starts,
/// each beam reaching at least the next start and at most `reach` of the
/// way to the start after that. `reach` above 1 produces designs that
/// overlap beyond adjacent beams (not tulips).
pub fn random_covering_design<R: Rng + ?Sized>(
    b: usize,
    reach: f64,
    rng: &mut R,
) -> Result<BeamDesign> {
    assert!(b >= 2, "need at least 2 beams");
    assert!((0.0..=2.0).contains(&reach), "reach must lie in [0, 2]");
    loop {
        let mut starts: Vec<f64> = (0..b).map(|_| rng.random::<f64>() * TAU).collect();
        starts.sort_by(f64::total_cmp);
        let min_gap = (0..b)
            .map(|i| (starts[(i + 1) % b] - starts[i]).rem_euclid(TAU))
            .fold(f64::MAX, f64::min);
        if min_gap < 1e-6 {
            continue;
        }
        let beams: Result<Vec<Arc>> = (0..b)
            .map(|i| {
                let next = starts[(i + 1) % b];
                let after = starts[(i + 2) % b];
                let slack = (after - next).rem_euclid(TAU);
                let end = next + rng.random::<f64>() * reach * slack;
                Arc::normalize(starts[i], end)
            })
            .collect();
        let design = BeamDesign::new(beams?)?;
        if coverage_check(&design) {
            return Ok(design);
        }
    }
}

/// A random valid tulip design drawn from sorted grid boundaries.
pub fn random_tulip<R: Rng + ?Sized>(b: usize, grid_n: usize, rng: &mut R) -> TulipDesign {
    assert!(grid_n >= 4 * b, "grid too coarse");
    loop {
        let mut z: Vec<f64> = (0..2 * b)
            .map(|_| (rng.random_range(0..grid_n) as f64) * TAU / grid_n as f64)
            .collect();
        z.sort_by(f64::total_cmp);
        if let Ok(design) = TulipDesign::from_boundaries(&z) {
            return design;
        }
    }
}
