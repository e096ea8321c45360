//! Data bundles for the Werner/isotropic region plots and the two 3x3
//! detection intervals.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::{bail, Context};
use qsep_core::{criteria, families};
use rayon::prelude::*;

use crate::grid::{DimRange, RealAxis, STEP_1D, STEP_2D};
use crate::scan::{bisect, witness_detects, Family, Scan, ScanConfig, WITNESS_RESOLUTION};
use crate::table::{flag, num, Table};

/// Dimensions covered by the region masks.
pub const MASK_DIMS: DimRange = DimRange { lo: 2, hi: 20 };
/// Largest dimension of the threshold tables.
pub const THRESHOLD_MAX_D: usize = 200;
/// Resolution of the tiles-mixture boundary bisection.
pub const UPB_RESOLUTION: f64 = 1e-4;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Target {
    Fig1a,
    Fig1b,
    Ex3,
    Ex4,
}

impl Target {
    pub const ALL: [Target; 4] = [Self::Fig1a, Self::Fig1b, Self::Ex3, Self::Ex4];

    pub fn name(self) -> &'static str {
        match self {
            Self::Fig1a => "fig1a",
            Self::Fig1b => "fig1b",
            Self::Ex3 => "ex3",
            Self::Ex4 => "ex4",
        }
    }
}

impl FromStr for Target {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> anyhow::Result<Self> {
        Ok(match s {
            "fig1a" => Self::Fig1a,
            "fig1b" => Self::Fig1b,
            "ex3" => Self::Ex3,
            "ex4" => Self::Ex4,
            _ => bail!("unknown target {s:?} (expected fig1a, fig1b, ex3 or ex4)"),
        })
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Detection threshold of the closed-form witness at dimension `d`, as a
/// bisection bracket `(lo, hi)` with `lo` undetected and `hi` detected.
pub fn witness_threshold(family: Family, d: usize) -> (f64, f64) {
    assert!(witness_detects(family, d, 1.0), "{family} is detected at parameter 1");
    bisect(0.0, 1.0, WITNESS_RESOLUTION, |x| witness_detects(family, d, x))
}

/// Threshold table for `d = 2..=max_d`: `(d, lo, hi)`.
pub fn threshold_table(family: Family, max_d: usize) -> Vec<(usize, f64, f64)> {
    (2..=max_d)
        .into_par_iter()
        .map(|d| {
            let (lo, hi) = witness_threshold(family, d);
            (d, lo, hi)
        })
        .collect()
}

fn threshold_csv(family: Family, max_d: usize) -> String {
    let param = family.axis_names()[1];
    let mut t = Table::new(&["d", "threshold", "lower", "upper", "resolution"]);
    t.comment(format!("qsep reproduce: {family} witness threshold in {param} for d = 2..{max_d}"));
    t.comment(format!("bisection on the closed-form witness (no matrix), resolution {}", num(WITNESS_RESOLUTION)));
    for (d, lo, hi) in threshold_table(family, max_d) {
        t.push(vec![d.to_string(), num(0.5 * (lo + hi)), num(lo), num(hi), num(hi - lo)]);
    }
    t.render()
}

/// The tiles-mixture inequality verdict at mixing weight `p`.
pub fn upb_violated(p: f64) -> bool {
    let rho = families::upb_mixture(p).expect("p in [0, 1]");
    criteria::cond_inequality(&rho).expect("square dims").violated
}

/// Bisection bracket of the smallest detected `p` for the tiles mixture.
pub fn upb_boundary(resolution: f64) -> (f64, f64) {
    assert!(!upb_violated(0.0) && upb_violated(1.0));
    bisect(0.0, 1.0, resolution, upb_violated)
}

/// Per-`a` summary of a Horodecki-mixture mask.
#[derive(Clone, Debug, PartialEq)]
pub struct Ex3Row {
    pub a: f64,
    pub min_detected_p: Option<f64>,
    /// Grid points with `p > 0` where the inequality is not violated.
    pub undetected: usize,
    pub points: usize,
}

fn write(dir: &Path, name: &str, contents: &str, written: &mut Vec<PathBuf>) -> anyhow::Result<()> {
    let path = dir.join(name);
    fs::write(&path, contents).with_context(|| format!("writing {}", path.display()))?;
    written.push(path);
    Ok(())
}

/// Writes the CSV bundle for `target` into `dir` and returns the written paths.
pub fn reproduce(target: Target, dir: &Path, config: &ScanConfig) -> anyhow::Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let mut written = Vec::new();
    match target {
        Target::Fig1a | Target::Fig1b => {
            let family = if target == Target::Fig1a {
                Family::Werner
            } else {
                Family::Isotropic
            };
            let result = Scan::new(family, Some(MASK_DIMS), None, Some(RealAxis::unit(STEP_1D)))?.run(config)?;
            write(dir, &format!("{target}_mask.csv"), &result.to_csv(), &mut written)?;
            write(dir, &format!("{target}_boundaries.csv"), &result.boundaries_csv(), &mut written)?;
            write(dir, &format!("{target}_thresholds.csv"), &threshold_csv(family, THRESHOLD_MAX_D), &mut written)?;
        }
        Target::Ex3 => {
            let scan = Scan::new(
                Family::Horodecki,
                None,
                Some(RealAxis::unit(STEP_2D)),
                Some(RealAxis::unit(STEP_2D)),
            )?;
            let result = scan.run(config)?;
            write(dir, "ex3_mask.csv", &result.to_csv(), &mut written)?;
            let rows = ex3_summary(&result);
            let mut t = Table::new(&["a", "min_detected_p", "undetected_p_gt_0", "points_p_gt_0", "all_detected"]);
            t.comment("qsep reproduce: horodecki mixture detection per a");
            t.comment(format!("grid {}", scan.grid_description()));
            for r in rows {
                t.push(vec![
                    num(r.a),
                    r.min_detected_p.map(num).unwrap_or_default(),
                    r.undetected.to_string(),
                    r.points.to_string(),
                    flag(r.undetected == 0).into(),
                ]);
            }
            write(dir, "ex3_summary.csv", &t.render(), &mut written)?;
        }
        Target::Ex4 => {
            let result = Scan::new(Family::Upb, None, None, Some(RealAxis::unit(STEP_1D)))?.run(config)?;
            write(dir, "ex4_scan.csv", &result.to_csv(), &mut written)?;
            let (lo, hi) = upb_boundary(UPB_RESOLUTION);
            let mut t = Table::new(&["lower", "upper", "estimate", "resolution", "method"]);
            t.comment("qsep reproduce: tiles mixture, smallest p violating the inequality");
            t.comment(format!("bisection on the matrix-path verdict to {}", num(UPB_RESOLUTION)));
            t.push(vec![num(lo), num(hi), num(0.5 * (lo + hi)), num(hi - lo), "bisection".into()]);
            write(dir, "ex4_boundary.csv", &t.render(), &mut written)?;
        }
    }
    Ok(written)
}

/// Summarises a Horodecki-mixture scan per value of `a`.
pub fn ex3_summary(result: &crate::scan::ScanResult) -> Vec<Ex3Row> {
    let inner = result.scan.x.values().len();
    result
        .records
        .chunks(inner)
        .map(|chunk| {
            let positive: Vec<_> = chunk.iter().filter(|r| r.params[1] > 0.0).collect();
            Ex3Row {
                a: chunk[0].params[0],
                min_detected_p: chunk.iter().find(|r| r.cond.violated).map(|r| r.params[1]),
                undetected: positive.iter().filter(|r| !r.cond.violated).count(),
                points: positive.len(),
            }
        })
        .collect()
}
