//! Parameter-grid scans over the state families.
//!
//! Every grid point is evaluated independently (in parallel) and gathered
//! in grid order, so the output does not depend on scheduling.

use std::fmt;
use std::str::FromStr;

use anyhow::{bail, Context};
use qsep_core::criteria::{self, CondOutcome};
use qsep_core::families;
use rayon::prelude::*;

use crate::grid::{DimRange, RealAxis, STEP_1D, STEP_2D};
use crate::table::{flag, num, opt_flag, opt_num, Table};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    Werner,
    Isotropic,
    Horodecki,
    Upb,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Self::Werner => "werner",
            Self::Isotropic => "isotropic",
            Self::Horodecki => "horodecki",
            Self::Upb => "upb",
        }
    }

    /// Axis names in row-major (lexicographic) order.
    pub fn axis_names(self) -> &'static [&'static str] {
        match self {
            Self::Werner => &["d", "eta"],
            Self::Isotropic => &["d", "alpha"],
            Self::Horodecki => &["a", "p"],
            Self::Upb => &["p"],
        }
    }

    /// Whether the family has a closed-form scalar witness (`p` or `q`).
    pub fn has_witness(self) -> bool {
        matches!(self, Self::Werner | Self::Isotropic)
    }
}

impl FromStr for Family {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> anyhow::Result<Self> {
        Ok(match s {
            "werner" => Self::Werner,
            "isotropic" => Self::Isotropic,
            "horodecki" => Self::Horodecki,
            "upb" => Self::Upb,
            _ => bail!("unknown family {s:?} (expected werner, isotropic, horodecki or upb)"),
        })
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// How each grid point is evaluated.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScanConfig {
    /// Largest `d` for which the inequality is evaluated on the constructed
    /// `d^2 x d^2` matrix; above it the closed-form sides are used.
    pub matrix_max_d: usize,
    /// Largest `d` for which the partial-transpose spectrum is computed;
    /// above it the `ppt_npt` column is blank.
    pub ppt_max_d: usize,
    pub tol: f64,
}

impl Default for ScanConfig {
    fn default() -> Self {
        Self {
            matrix_max_d: 20,
            ppt_max_d: 8,
            tol: qsep_core::DEFAULT_TOL,
        }
    }
}

/// A family together with its grid.
#[derive(Clone, Debug, PartialEq)]
pub struct Scan {
    pub family: Family,
    /// Dimension range (Werner, isotropic).
    pub d: Option<DimRange>,
    /// The `a` axis (Horodecki mixture).
    pub a: Option<RealAxis>,
    /// The last axis: `eta`, `alpha` or `p`.
    pub x: RealAxis,
}

impl Scan {
    /// Fills in default axes and checks that the supplied ones fit the family.
    pub fn new(family: Family, d: Option<DimRange>, a: Option<RealAxis>, x: Option<RealAxis>) -> anyhow::Result<Self> {
        match family {
            Family::Werner | Family::Isotropic => {
                if a.is_some() {
                    bail!("--a does not apply to {family}");
                }
                Ok(Self {
                    family,
                    d: Some(d.context(format!("{family} scans need --d A..B"))?),
                    a: None,
                    x: x.unwrap_or(RealAxis::unit(STEP_1D)),
                })
            }
            Family::Horodecki => {
                if d.is_some() {
                    bail!("horodecki scans are fixed at 3x3; drop --d");
                }
                Ok(Self {
                    family,
                    d: None,
                    a: Some(a.unwrap_or(RealAxis::unit(STEP_2D))),
                    x: x.unwrap_or(RealAxis::unit(STEP_2D)),
                })
            }
            Family::Upb => {
                if d.is_some() || a.is_some() {
                    bail!("upb scans take only --p");
                }
                Ok(Self {
                    family,
                    d: None,
                    a: None,
                    x: x.unwrap_or(RealAxis::unit(STEP_1D)),
                })
            }
        }
    }

    /// Axis names and values, outermost first.
    pub fn axes(&self) -> Vec<(&'static str, Vec<f64>)> {
        let names = self.family.axis_names();
        let mut out = Vec::new();
        if let Some(d) = self.d {
            out.push((names[0], d.values().into_iter().map(|d| d as f64).collect()));
        }
        if let Some(a) = self.a {
            out.push((names[0], a.values()));
        }
        out.push((*names.last().expect("non-empty"), self.x.values()));
        out
    }

    /// `name=grid` descriptions for the output header.
    pub fn grid_description(&self) -> String {
        let names = self.family.axis_names();
        let mut parts = Vec::new();
        if let Some(d) = self.d {
            parts.push(format!("d={d}"));
        }
        if let Some(a) = self.a {
            parts.push(format!("a={a}"));
        }
        parts.push(format!("{}={}", names.last().expect("non-empty"), self.x));
        parts.join(" ")
    }

    /// All grid points in lexicographic order over the axes.
    pub fn points(&self) -> Vec<Vec<f64>> {
        self.axes().iter().fold(vec![Vec::new()], |acc, (_, values)| {
            acc.iter()
                .flat_map(|prefix| {
                    values.iter().map(move |&v| {
                        let mut p = prefix.clone();
                        p.push(v);
                        p
                    })
                })
                .collect()
        })
    }

    pub fn run(&self, config: &ScanConfig) -> anyhow::Result<ScanResult> {
        let points = self.points();
        let records = points
            .par_iter()
            .map(|p| evaluate(self.family, p, config))
            .collect::<anyhow::Result<Vec<_>>>()?;
        let boundaries = boundaries(self.family, &self.axes(), &records, self.x.step);
        Ok(ScanResult {
            scan: self.clone(),
            config: *config,
            records,
            boundaries,
        })
    }
}

/// Outcome at a single grid point.
#[derive(Clone, Debug, PartialEq)]
pub struct ScanRecord {
    pub params: Vec<f64>,
    /// `p` (Werner) or `q` (isotropic).
    pub witness: Option<f64>,
    pub cond: CondOutcome,
    pub ppt_npt: Option<bool>,
}

/// Evaluates one grid point. `params` follows [`Family::axis_names`].
pub fn evaluate(family: Family, params: &[f64], config: &ScanConfig) -> anyhow::Result<ScanRecord> {
    let tol = config.tol;
    let (witness, cond, ppt_npt) = match family {
        Family::Werner | Family::Isotropic => {
            let d = params[0] as usize;
            let x = params[1];
            let (witness, closed) = if family == Family::Werner {
                (criteria::werner_p(d, x)?, criteria::werner_terms(d, x)?)
            } else {
                (criteria::isotropic_q(d, x)?, criteria::isotropic_terms(d, x)?)
            };
            let rho = if d <= config.matrix_max_d.max(config.ppt_max_d) {
                Some(if family == Family::Werner {
                    families::werner(d, x)?
                } else {
                    families::isotropic(d, x)?
                })
            } else {
                None
            };
            let cond = match &rho {
                Some(rho) if d <= config.matrix_max_d => criteria::cond_inequality_with_tol(rho, tol)?,
                _ => CondOutcome {
                    violated: closed.lhs > closed.rhs + tol,
                    ..closed
                },
            };
            let ppt = rho
                .as_ref()
                .filter(|_| d <= config.ppt_max_d)
                .map(|rho| criteria::ppt_test(rho, tol).npt);
            (Some(witness), cond, ppt)
        }
        Family::Horodecki => {
            let rho = families::horodecki_mixture(params[0], params[1])?;
            (None, criteria::cond_inequality_with_tol(&rho, tol)?, Some(criteria::ppt_test(&rho, tol).npt))
        }
        Family::Upb => {
            let rho = families::upb_mixture(params[0])?;
            (None, criteria::cond_inequality_with_tol(&rho, tol)?, Some(criteria::ppt_test(&rho, tol).npt))
        }
    };
    Ok(ScanRecord {
        params: params.to_vec(),
        witness,
        cond,
        ppt_npt,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundaryMethod {
    /// Bisection on the closed-form witness inside the grid bracket.
    Bisection,
    /// The smallest detected grid value; resolution is the grid step.
    Grid,
}

impl BoundaryMethod {
    pub fn name(self) -> &'static str {
        match self {
            Self::Bisection => "bisection",
            Self::Grid => "grid",
        }
    }
}

/// Onset of detection along the last axis for one setting of the outer axes.
#[derive(Clone, Debug, PartialEq)]
pub struct Boundary {
    /// Values of the outer axes (empty for one-parameter scans).
    pub group: Vec<f64>,
    /// Largest grid value below the onset (not detected).
    pub lower: f64,
    /// Adjacent grid value (detected).
    pub upper: f64,
    pub estimate: f64,
    pub resolution: f64,
    pub method: BoundaryMethod,
}

/// Shrinks `[lo, hi]` around the switch of `detects` from false (at `lo`)
/// to true (at `hi`) until it is at most `resolution` wide.
pub fn bisect(mut lo: f64, mut hi: f64, resolution: f64, detects: impl Fn(f64) -> bool) -> (f64, f64) {
    while hi - lo > resolution {
        let mid = 0.5 * (lo + hi);
        if detects(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    (lo, hi)
}

/// Resolution of witness bisections.
pub const WITNESS_RESOLUTION: f64 = 1e-12;

/// Witness-based detection for Werner/isotropic at dimension `d`.
pub fn witness_detects(family: Family, d: usize, x: f64) -> bool {
    let value = match family {
        Family::Werner => criteria::werner_p(d, x),
        Family::Isotropic => criteria::isotropic_q(d, x),
        _ => panic!("{family} has no closed-form witness"),
    };
    criteria::witness_detects(value.expect("parameters in domain"))
}

fn boundaries(family: Family, axes: &[(&str, Vec<f64>)], records: &[ScanRecord], step: f64) -> Vec<Boundary> {
    let inner = axes.last().expect("non-empty").1.len();
    records
        .chunks(inner)
        .filter_map(|chunk| {
            let k = (1..chunk.len()).find(|&k| !chunk[k - 1].cond.violated && chunk[k].cond.violated)?;
            let group = chunk[k].params[..chunk[k].params.len() - 1].to_vec();
            let (lower, upper) = (chunk[k - 1].params[group.len()], chunk[k].params[group.len()]);
            Some(if family.has_witness() {
                let d = group[0] as usize;
                let (lo, hi) = bisect(lower, upper, WITNESS_RESOLUTION, |x| witness_detects(family, d, x));
                Boundary {
                    group,
                    lower,
                    upper,
                    estimate: 0.5 * (lo + hi),
                    resolution: hi - lo,
                    method: BoundaryMethod::Bisection,
                }
            } else {
                Boundary {
                    group,
                    lower,
                    upper,
                    estimate: upper,
                    resolution: step,
                    method: BoundaryMethod::Grid,
                }
            })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScanResult {
    pub scan: Scan,
    pub config: ScanConfig,
    pub records: Vec<ScanRecord>,
    pub boundaries: Vec<Boundary>,
}

impl ScanResult {
    fn provenance(&self, table: &mut Table) {
        table.comment(format!("qsep scan family={}", self.scan.family));
        table.comment(format!("grid {}", self.scan.grid_description()));
        if self.scan.family.has_witness() {
            table.comment(format!(
                "inequality on the constructed matrix for d <= {}, closed form above; ppt_npt for d <= {}, blank above",
                self.config.matrix_max_d, self.config.ppt_max_d
            ));
        }
        table.comment(format!("violated: lhs > rhs + {}", num(self.config.tol)));
    }

    /// Per-point CSV: parameters, witness, cond_lhs, cond_rhs, violated, ppt_npt.
    pub fn to_csv(&self) -> String {
        let mut header: Vec<&str> = self.scan.family.axis_names().to_vec();
        header.extend(["witness", "cond_lhs", "cond_rhs", "violated", "ppt_npt"]);
        let mut table = Table::new(&header);
        self.provenance(&mut table);
        for r in &self.records {
            let mut row: Vec<String> = r.params.iter().map(|&x| num(x)).collect();
            row.push(opt_num(r.witness));
            row.push(num(r.cond.lhs));
            row.push(num(r.cond.rhs));
            row.push(flag(r.cond.violated).into());
            row.push(opt_flag(r.ppt_npt));
            table.push(row);
        }
        table.render()
    }

    /// Detection onsets: outer parameters, bracket, estimate, resolution, method.
    pub fn boundaries_csv(&self) -> String {
        let names = self.scan.family.axis_names();
        let mut header: Vec<&str> = names[..names.len() - 1].to_vec();
        header.extend(["lower", "upper", "estimate", "resolution", "method"]);
        let mut table = Table::new(&header);
        self.provenance(&mut table);
        table.comment(format!("onset of detection along {}", names[names.len() - 1]));
        for b in &self.boundaries {
            let mut row: Vec<String> = b.group.iter().map(|&x| num(x)).collect();
            row.extend([num(b.lower), num(b.upper), num(b.estimate), num(b.resolution), b.method.name().into()]);
            table.push(row);
        }
        table.render()
    }

    /// Smallest detected value along the last axis, per outer setting.
    pub fn min_detected(&self) -> Vec<(Vec<f64>, Option<f64>)> {
        let inner = self.scan.x.values().len();
        self.records
            .chunks(inner)
            .map(|chunk| {
                let last = chunk[0].params.len() - 1;
                let group = chunk[0].params[..last].to_vec();
                (group, chunk.iter().find(|r| r.cond.violated).map(|r| r.params[last]))
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn werner_scan(d: &str) -> Scan {
        Scan::new(Family::Werner, Some(d.parse().unwrap()), None, None).unwrap()
    }

    #[test]
    fn record_count_is_product_of_axes() {
        let s = werner_scan("2..4");
        let r = s.run(&ScanConfig::default()).unwrap();
        assert_eq!(r.records.len(), 3 * 201);
        let s = Scan::new(Family::Horodecki, None, Some("0:1:0.25".parse().unwrap()), Some("0:1:0.5".parse().unwrap())).unwrap();
        assert_eq!(s.points().len(), 15);
        assert_eq!(s.points()[3], vec![0.25, 0.0]);
    }

    #[test]
    fn werner_boundaries_bracket_the_threshold() {
        let r = werner_scan("2..6").run(&ScanConfig::default()).unwrap();
        assert_eq!(r.boundaries.len(), 5);
        for b in &r.boundaries {
            let d = b.group[0];
            let exact = 2.0 * (d - 1.0) / (3.0 * d - 2.0);
            assert!(b.lower <= exact && exact <= b.upper, "d={d}: {b:?}");
            assert!((b.upper - b.lower - STEP_1D).abs() < 1e-12);
            assert!((b.estimate - exact).abs() < 1e-9);
            assert!(!witness_detects(Family::Werner, d as usize, b.lower));
            assert!(witness_detects(Family::Werner, d as usize, b.upper));
        }
    }

    #[test]
    fn isotropic_d3_boundary_is_two_fifths() {
        let s = Scan::new(Family::Isotropic, Some("3".parse().unwrap()), None, None).unwrap();
        let r = s.run(&ScanConfig::default()).unwrap();
        assert!((r.boundaries[0].estimate - 0.4).abs() < 1e-9);
        assert_eq!(r.boundaries[0].lower, 0.4);
    }

    #[test]
    fn closed_form_path_matches_matrix_path() {
        let s = werner_scan("3");
        let matrix = s.run(&ScanConfig::default()).unwrap();
        let closed = s
            .run(&ScanConfig {
                matrix_max_d: 2,
                ppt_max_d: 2,
                ..ScanConfig::default()
            })
            .unwrap();
        for (m, c) in matrix.records.iter().zip(&closed.records) {
            assert_eq!(m.cond.violated, c.cond.violated);
            assert!((m.cond.lhs - c.cond.lhs).abs() < 1e-12);
            assert!(c.ppt_npt.is_none());
        }
    }

    #[test]
    fn csv_layout() {
        let s = Scan::new(Family::Upb, None, None, Some("0:1:0.5".parse().unwrap())).unwrap();
        let csv = s.run(&ScanConfig::default()).unwrap().to_csv();
        let lines: Vec<&str> = csv.lines().filter(|l| !l.starts_with('#')).collect();
        assert_eq!(lines[0], "p,witness,cond_lhs,cond_rhs,violated,ppt_npt");
        assert_eq!(lines.len(), 4);
        assert!(lines[1].starts_with("0,,"));
        assert!(csv.contains("# grid p=0:1:0.5"));
    }

    #[test]
    fn bad_axes_are_rejected() {
        assert!(Scan::new(Family::Werner, None, None, None).is_err());
        assert!(Scan::new(Family::Upb, Some("2".parse().unwrap()), None, None).is_err());
        let s = Scan::new(Family::Upb, None, None, Some("0:1.5:0.5".parse().unwrap())).unwrap();
        assert!(s.run(&ScanConfig::default()).is_err());
    }
}
