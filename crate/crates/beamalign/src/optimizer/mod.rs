//! Greedy window-sliding optimization of tulip designs on a boundary grid.
//!
//! The angular domain is discretized into `N` grid points; a candidate
//! solution is a circularly ordered multiset of `2b` grid indices whose
//! consecutive gaps are the component-beam slot widths. Search proceeds by
//! sliding contiguous windows of boundary points one grid step at a time,
//! keeping strict improvements of the expected transmission beamwidth.

mod brute;
mod evaluator;
mod greedy;

pub use brute::{brute_force, BruteForceOutcome, ENUMERATION_BUDGET};
pub use evaluator::Evaluator;
pub use greedy::{greedy_sa, improving_move_exists, modify_sol, GreedyOutcome, RestartOutcome};

use crate::error::{Error, Result};
use crate::pdf::AoDPdf;
use crate::policy::Policy;
use std::f64::consts::TAU;

/// The discretized angular domain: `n` equally spaced grid angles plus a
/// cumulative-mass table aligned with the grid.
#[derive(Clone, Debug)]
pub struct GroundSet {
    n: usize,
    /// `cum[j]` is the pdf mass of `[0, angle(j))`; `cum[n]` is 1 up to
    /// normalization error.
    cum: Vec<f64>,
}

impl GroundSet {
    pub fn new(n: usize, pdf: &AoDPdf) -> Result<Self> {
        if n < 8 {
            return Err(Error::InvalidConfig {
                field: "grid_n".into(),
                reason: format!("grid must have at least 8 points, got {n}"),
            });
        }
        let step = TAU / n as f64;
        let mut cum = Vec::with_capacity(n + 1);
        cum.push(0.0);
        let mut acc = 0.0;
        for j in 0..n {
            let lo = j as f64 * step;
            let hi = if j + 1 == n { TAU } else { (j + 1) as f64 * step };
            acc += pdf.mass_interval(lo, hi);
            cum.push(acc);
        }
        Ok(Self { n, cum })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Grid spacing in radians.
    pub fn step(&self) -> f64 {
        TAU / self.n as f64
    }

    pub fn angle(&self, idx: u32) -> f64 {
        idx as f64 * self.step()
    }

    /// Mass of the arc starting at grid index `a` spanning `len` grid steps.
    pub fn mass_between(&self, a: u32, len: u32) -> f64 {
        let (a, len) = (a as usize, len as usize);
        debug_assert!(a < self.n && len <= self.n);
        let end = a + len;
        if end <= self.n {
            self.cum[end] - self.cum[a]
        } else {
            (self.cum[self.n] - self.cum[a]) + self.cum[end - self.n]
        }
    }
}

/// Parameters of a greedy optimization run. Identical configurations
/// produce identical outputs.
#[derive(Clone, Debug)]
pub struct OptimizerConfig {
    pub grid_n: usize,
    pub restarts: usize,
    pub seed: u64,
    /// Cap on accepted improvements per restart.
    pub max_iterations: u64,
    pub policy: Policy,
    pub p: usize,
    pub pdf: AoDPdf,
}

impl OptimizerConfig {
    pub fn new(policy: Policy, p: usize, pdf: AoDPdf, seed: u64) -> Self {
        Self {
            grid_n: 1000,
            restarts: 20,
            seed,
            max_iterations: 200_000,
            policy,
            p,
            pdf,
        }
    }

    pub fn with_grid(mut self, grid_n: usize) -> Self {
        self.grid_n = grid_n;
        self
    }

    pub fn with_restarts(mut self, restarts: usize) -> Self {
        self.restarts = restarts;
        self
    }

    pub fn with_max_iterations(mut self, max_iterations: u64) -> Self {
        self.max_iterations = max_iterations;
        self
    }

    fn validate(&self, b: usize) -> Result<()> {
        if b < 2 {
            return Err(Error::InvalidConfig {
                field: "b".into(),
                reason: format!("need at least 2 beams, got {b}"),
            });
        }
        if self.grid_n < 4 * b {
            return Err(Error::InvalidConfig {
                field: "grid_n".into(),
                reason: format!("grid of {} too coarse for {b} beams (need >= {})", self.grid_n, 4 * b),
            });
        }
        if self.restarts < 1 {
            return Err(Error::InvalidConfig {
                field: "restarts".into(),
                reason: "need at least one restart".into(),
            });
        }
        if !(1..=3).contains(&self.p) {
            return Err(Error::InvalidConfig {
                field: "p".into(),
                reason: format!("path count must lie in 1..=3, got {}", self.p),
            });
        }
        if self.policy.is_path_aware() && self.p != 2 {
            return Err(Error::InvalidConfig {
                field: "p".into(),
                reason: format!("policy {} assumes exactly 2 paths, got p = {}", self.policy, self.p),
            });
        }
        Ok(())
    }
}

/// A candidate design: `2b` circularly ordered grid indices plus the
/// cached objective value.
#[derive(Clone, Debug, PartialEq)]
pub struct Solution {
    z: Vec<u32>,
    lambda_bar: f64,
}

impl Solution {
    pub fn new(z: Vec<u32>, lambda_bar: f64) -> Self {
        Self { z, lambda_bar }
    }

    pub fn boundaries(&self) -> &[u32] {
        &self.z
    }

    pub fn lambda_bar(&self) -> f64 {
        self.lambda_bar
    }

    /// Boundary angles in radians.
    pub fn angles(&self, ground: &GroundSet) -> Vec<f64> {
        self.z.iter().map(|&i| ground.angle(i)).collect()
    }
}

/// Computes slot widths of a boundary sequence in grid units into `out`.
///
/// Returns `false` when the sequence is not circularly ordered (widths
/// fail to sum to `n`) or some beam collapses to zero width.
pub(crate) fn slot_widths_into(z: &[u32], n: usize, out: &mut Vec<u32>) -> bool {
    let m = z.len();
    let n32 = n as u32;
    out.clear();
    let mut total: u64 = 0;
    for j in 0..m {
        let d = (z[(j + 1) % m] + n32 - z[j]) % n32;
        out.push(d);
        total += d as u64;
    }
    if total != n as u64 {
        return false;
    }
    let b = m / 2;
    for i in 0..b {
        let beam: u64 = (0..3).map(|k| out[(2 * i + k) % m] as u64).sum();
        if beam == 0 {
            return false;
        }
    }
    true
}

/// Slot widths of a valid boundary sequence, or `None` if invalid.
pub(crate) fn slot_widths(z: &[u32], n: usize) -> Option<Vec<u32>> {
    let mut out = Vec::with_capacity(z.len());
    if slot_widths_into(z, n, &mut out) {
        Some(out)
    } else {
        None
    }
}

