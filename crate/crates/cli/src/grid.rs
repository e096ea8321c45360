//! Parameter axes: `LO:HI:STEP` real ranges and `A..B` dimension ranges.

use std::fmt;
use std::str::FromStr;

use anyhow::{bail, Context};

/// Default step for scans with one real parameter.
pub const STEP_1D: f64 = 0.005;
/// Default step for scans with two real parameters.
pub const STEP_2D: f64 = 0.02;

/// Inclusive real range `lo, lo + step, ..., <= hi`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RealAxis {
    pub lo: f64,
    pub hi: f64,
    pub step: f64,
}

impl RealAxis {
    pub fn new(lo: f64, hi: f64, step: f64) -> anyhow::Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && step.is_finite()) {
            bail!("axis bounds must be finite");
        }
        if step <= 0.0 {
            bail!("axis step must be positive, got {step}");
        }
        if hi < lo {
            bail!("axis upper bound {hi} is below lower bound {lo}");
        }
        Ok(Self { lo, hi, step })
    }

    /// `[0, 1]` with the given step.
    pub fn unit(step: f64) -> Self {
        Self { lo: 0.0, hi: 1.0, step }
    }

    /// Grid values. Each is rounded to 12 decimals so that accumulated
    /// floating-point drift never leaks into the output.
    pub fn values(&self) -> Vec<f64> {
        let n = ((self.hi - self.lo) / self.step + 1e-9).floor() as usize + 1;
        (0..n)
            .map(|k| {
                let x = self.lo + k as f64 * self.step;
                ((x * 1e12).round() / 1e12).min(self.hi)
            })
            .collect()
    }
}

impl FromStr for RealAxis {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> anyhow::Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let [lo, hi, step] = parts.as_slice() else {
            bail!("expected LO:HI:STEP, got {s:?}");
        };
        let num = |t: &str| t.trim().parse::<f64>().with_context(|| format!("bad number {t:?} in {s:?}"));
        Self::new(num(lo)?, num(hi)?, num(step)?)
    }
}

impl fmt::Display for RealAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.lo, self.hi, self.step)
    }
}

/// Inclusive dimension range `A..B` (or a single `A`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DimRange {
    pub lo: usize,
    pub hi: usize,
}

impl DimRange {
    pub fn new(lo: usize, hi: usize) -> anyhow::Result<Self> {
        if lo < 2 {
            bail!("dimension must be at least 2, got {lo}");
        }
        if hi < lo {
            bail!("dimension range {lo}..{hi} is empty");
        }
        Ok(Self { lo, hi })
    }

    pub fn values(&self) -> Vec<usize> {
        (self.lo..=self.hi).collect()
    }
}

impl FromStr for DimRange {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> anyhow::Result<Self> {
        let num = |t: &str| t.trim().parse::<usize>().with_context(|| format!("bad dimension {t:?} in {s:?}"));
        match s.split_once("..") {
            Some((a, b)) => Self::new(num(a)?, num(b.trim_start_matches('='))?),
            None => {
                let d = num(s)?;
                Self::new(d, d)
            }
        }
    }
}

impl fmt::Display for DimRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.lo, self.hi)
    }
}
