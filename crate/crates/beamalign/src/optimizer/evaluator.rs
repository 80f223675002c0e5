//! Allocation-free objective evaluation for grid solutions.
//!
//! The probability of each positivity set is accumulated by expanding the
//! i.i.d. path draws over component-beam multisets, which is algebraically
//! identical to the inclusion-exclusion closed form but costs
//! `O(#CB^p)` in total instead of per set. Component-beam widths are
//! additive because the regions are disjoint, so every policy width
//! reduces to sums over chosen component beams.

use super::GroundSet;
use crate::error::{Error, Result};
use crate::policy::{Policy, PAIR_FAMILY_CAP};

/// Reusable scratch state for evaluating boundary sequences against one
/// (pdf, p, policy) configuration.
#[derive(Clone, Debug)]
pub struct Evaluator<'g> {
    ground: &'g GroundSet,
    policy: Policy,
    p: usize,
    // Component beams of the solution under evaluation (merged by mask).
    cb_mask: Vec<u64>,
    cb_width: Vec<f64>,
    cb_mass: Vec<f64>,
    // Positivity-set accumulator, sorted by mask after `collect`.
    family: Vec<(u64, f64)>,
    // Pair list scratch for the path-aware policies.
    pairs: Vec<(u8, u8)>,
}

impl<'g> Evaluator<'g> {
    pub fn new(ground: &'g GroundSet, policy: Policy, p: usize) -> Result<Self> {
        if !(1..=3).contains(&p) {
            return Err(Error::InvalidConfig {
                field: "p".into(),
                reason: format!("evaluator supports p in 1..=3, got {p}"),
            });
        }
        if policy.is_path_aware() && p != 2 {
            return Err(Error::InvalidConfig {
                field: "p".into(),
                reason: format!("policy {policy} assumes exactly 2 paths, got p = {p}"),
            });
        }
        Ok(Self {
            ground,
            policy,
            p,
            cb_mask: Vec::new(),
            cb_width: Vec::new(),
            cb_mass: Vec::new(),
            family: Vec::new(),
            pairs: Vec::new(),
        })
    }

    pub fn ground(&self) -> &'g GroundSet {
        self.ground
    }

    /// Validates a boundary sequence and evaluates it; `None` when the
    /// sequence is not circularly ordered or collapses a beam.
    pub fn eval_boundaries(&mut self, z: &[u32]) -> Option<f64> {
        super::slot_widths(z, self.ground.len()).map(|widths| self.eval(z, &widths))
    }

    /// Expected transmission beamwidth of the design encoded by the
    /// circularly ordered boundary sequence `z` with slot widths `widths`
    /// (as produced by `slot_widths`).
    pub(crate) fn eval(&mut self, z: &[u32], widths: &[u32]) -> f64 {
        self.load_components(z, widths);
        self.accumulate_family();
        let mut lambda_bar = 0.0;
        for idx in 0..self.family.len() {
            let (mask, p_a) = self.family[idx];
            if p_a <= 0.0 {
                continue;
            }
            lambda_bar += p_a * self.width_for(mask);
        }
        lambda_bar
    }

    /// Builds the merged component-beam arrays from slot widths.
    ///
    /// Slot `2i` is covered by beams `{i-1, i}`, slot `2i+1` by `{i}`
    /// alone; zero-width slots vanish, and slots sharing a covering set
    /// merge (the two overlaps of a two-beam design coincide in mask).
    fn load_components(&mut self, z: &[u32], widths: &[u32]) {
        let b = z.len() / 2;
        let step = self.ground.step();
        self.cb_mask.clear();
        self.cb_width.clear();
        self.cb_mass.clear();
        for (j, &w) in widths.iter().enumerate() {
            if w == 0 {
                continue;
            }
            let i = j / 2;
            let mask = if j % 2 == 0 {
                1u64 << i | 1u64 << ((i + b - 1) % b)
            } else {
                1u64 << i
            };
            let width = w as f64 * step;
            let mass = self.ground.mass_between(z[j], w);
            match self.cb_mask.iter().position(|&m| m == mask) {
                Some(k) => {
                    self.cb_width[k] += width;
                    self.cb_mass[k] += mass;
                }
                None => {
                    self.cb_mask.push(mask);
                    self.cb_width.push(width);
                    self.cb_mass.push(mass);
                }
            }
        }
    }

    /// Accumulates `P(feedback = A)` for every reachable `A` by expanding
    /// the i.i.d. draws over ordered component-beam multisets.
    fn accumulate_family(&mut self) {
        self.family.clear();
        let k = self.cb_mask.len();
        match self.p {
            1 => {
                for i in 0..k {
                    self.family.push((self.cb_mask[i], self.cb_mass[i]));
                }
            }
            2 => {
                for i in 0..k {
                    for j in i..k {
                        let mask = self.cb_mask[i] | self.cb_mask[j];
                        let w = if i == j {
                            self.cb_mass[i] * self.cb_mass[i]
                        } else {
                            2.0 * self.cb_mass[i] * self.cb_mass[j]
                        };
                        self.family.push((mask, w));
                    }
                }
            }
            3 => {
                for i in 0..k {
                    for j in i..k {
                        let mij = self.cb_mask[i] | self.cb_mask[j];
                        let gij = self.cb_mass[i] * self.cb_mass[j];
                        for l in j..k {
                            let mask = mij | self.cb_mask[l];
                            let mult = if i == j && j == l {
                                1.0
                            } else if i == j || j == l {
                                3.0
                            } else {
                                6.0
                            };
                            self.family.push((mask, mult * gij * self.cb_mass[l]));
                        }
                    }
                }
            }
            _ => unreachable!("validated in Evaluator::new"),
        }
        self.family.sort_unstable_by_key(|&(mask, _)| mask);
        self.family.dedup_by(|next, kept| {
            if next.0 == kept.0 {
                kept.1 += next.1;
                true
            } else {
                false
            }
        });
    }

    /// Transmission-beam width decoded for positivity set `mask`.
    fn width_for(&mut self, mask: u64) -> f64 {
        let k = self.cb_mask.len();
        match self.policy {
            Policy::Sd => (0..k)
                .filter(|&i| self.cb_mask[i] & !mask == 0)
                .map(|i| self.cb_width[i])
                .sum(),
            Policy::Bf => {
                let mut best = f64::INFINITY;
                let mut beams = mask;
                while beams != 0 {
                    let beam_bit = beams & beams.wrapping_neg();
                    beams &= beams - 1;
                    let total: f64 = (0..k)
                        .filter(|&i| {
                            self.cb_mask[i] & beam_bit != 0 && self.cb_mask[i] & !mask == 0
                        })
                        .map(|i| self.cb_width[i])
                        .sum();
                    if total < best {
                        best = total;
                    }
                }
                best
            }
            Policy::TwoSd => {
                let mut members = 0u128;
                for i in 0..k {
                    if self.cb_mask[i] & !mask != 0 {
                        continue;
                    }
                    for j in i..k {
                        if self.cb_mask[i] | self.cb_mask[j] == mask {
                            members |= 1 << i | 1 << j;
                        }
                    }
                }
                (0..k)
                    .filter(|&i| members >> i & 1 == 1)
                    .map(|i| self.cb_width[i])
                    .sum()
            }
            Policy::TwoBf => {
                self.pairs.clear();
                for i in 0..k {
                    if self.cb_mask[i] & !mask != 0 {
                        continue;
                    }
                    for j in i..k {
                        if self.cb_mask[i] | self.cb_mask[j] == mask {
                            self.pairs.push((i as u8, j as u8));
                        }
                    }
                }
                debug_assert!(self.pairs.len() <= PAIR_FAMILY_CAP);
                min_transversal_width(&self.pairs, &self.cb_width)
            }
        }
    }
}

/// Minimum total width of a set of component beams hitting every pair,
/// by branch and bound; widths are additive because regions are disjoint.
fn min_transversal_width(pairs: &[(u8, u8)], widths: &[f64]) -> f64 {
    fn explore(
        pairs: &[(u8, u8)],
        widths: &[f64],
        depth: usize,
        chosen: u128,
        acc: f64,
        best: &mut f64,
    ) {
        if acc >= *best {
            return;
        }
        let Some(&(i, j)) = pairs.get(depth) else {
            *best = acc;
            return;
        };
        for pick in [i as usize, j as usize] {
            let bit = 1u128 << pick;
            let extra = if chosen & bit == 0 { widths[pick] } else { 0.0 };
            explore(pairs, widths, depth + 1, chosen | bit, acc + extra, best);
            if i == j {
                break;
            }
        }
    }

    let mut best = f64::INFINITY;
    explore(pairs, widths, 0, 0, 0.0, &mut best);
    best
}
