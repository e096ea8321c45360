//! JSON state-file container.
//!
//! ```json
//! {
//!   "dims": [2, 2],
//!   "family": {"kind": "werner", "d": 2, "eta": 0.5},
//!   "matrix": [[[0.25, 0.0], ...], ...],
//!   "labels": [["A1^1 A1^1† A2^1 A2^1†", ...], ...],
//!   "report": {...}
//! }
//! ```
//!
//! Only `dims` and `matrix` are required. `matrix` is row-major, one inner
//! list per row, each entry `[re, im]`. `labels` accompanies an exported
//! expectation-value matrix. Matrix entries are written with 17 significant
//! digits so that reading a file back reproduces every entry bit for bit.

use std::fmt::Write as _;

use num_complex::Complex64;
use serde::Deserialize;

use crate::criteria::CriterionReport;
use crate::error::{Error, Result};
use crate::evm::ExpectationValueMatrix;
use crate::families::FamilySpec;
use crate::linalg::ComplexMatrix;
use crate::states::{BipartiteDims, DensityMatrix};

#[derive(Clone, Debug, PartialEq)]
pub struct StateFile {
    pub dims: BipartiteDims,
    pub matrix: ComplexMatrix,
    pub family: Option<FamilySpec>,
    pub labels: Option<Vec<Vec<String>>>,
    pub report: Option<CriterionReport>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawStateFile {
    dims: [usize; 2],
    matrix: Vec<Vec<[f64; 2]>>,
    #[serde(default)]
    family: Option<FamilySpec>,
    #[serde(default)]
    labels: Option<Vec<Vec<String>>>,
    #[serde(default)]
    report: Option<CriterionReport>,
}

impl StateFile {
    pub fn from_state(rho: &DensityMatrix) -> Self {
        Self {
            dims: rho.dims(),
            matrix: rho.matrix().clone(),
            family: None,
            labels: None,
            report: None,
        }
    }

    pub fn from_evm(evm: &ExpectationValueMatrix) -> Self {
        Self {
            dims: evm.dims(),
            matrix: evm.entries().clone(),
            family: None,
            labels: Some(evm.labels()),
            report: None,
        }
    }

    pub fn with_family(mut self, family: FamilySpec) -> Self {
        self.family = Some(family);
        self
    }

    pub fn with_report(mut self, report: CriterionReport) -> Self {
        self.report = Some(report);
        self
    }

    pub fn parse(text: &str) -> Result<Self> {
        let raw: RawStateFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let dims = BipartiteDims::new(raw.dims[0], raw.dims[1])?;
        let n = dims.total();
        if raw.matrix.len() != n || raw.matrix.iter().any(|row| row.len() != n) {
            return Err(Error::DimMismatch(format!(
                "matrix must be {n}x{n} for dims [{}, {}]",
                raw.dims[0], raw.dims[1]
            )));
        }
        let data: Vec<Complex64> = raw
            .matrix
            .iter()
            .flatten()
            .map(|&[re, im]| Complex64::new(re, im))
            .collect();
        let matrix = ComplexMatrix::from_vec(n, n, data)?;
        if let Some(labels) = &raw.labels {
            if labels.len() != n || labels.iter().any(|row| row.len() != n) {
                return Err(Error::DimMismatch(format!("labels must be {n}x{n}")));
            }
        }
        Ok(Self {
            dims,
            matrix,
            family: raw.family,
            labels: raw.labels,
            report: raw.report,
        })
    }

    /// Validates the matrix as a density matrix.
    pub fn to_density(&self, tol: f64) -> Result<DensityMatrix> {
        DensityMatrix::validate(self.matrix.clone(), self.dims, tol)
    }

    pub fn to_json(&self) -> String {
        let mut out = String::from("{\n");
        let _ = writeln!(out, "  \"dims\": [{}, {}],", self.dims.d1(), self.dims.d2());
        if let Some(family) = &self.family {
            let _ = writeln!(out, "  \"family\": {},", serde_json::to_string(family).expect("serialisable"));
        }
        out.push_str("  \"matrix\": [\n");
        let rows = self.matrix.rows();
        for i in 0..rows {
            out.push_str("    [");
            for (j, z) in self.matrix.row(i).iter().enumerate() {
                if j > 0 {
                    out.push_str(", ");
                }
                let _ = write!(out, "[{}, {}]", format_sig17(z.re), format_sig17(z.im));
            }
            out.push(']');
            if i + 1 < rows {
                out.push(',');
            }
            out.push('\n');
        }
        out.push_str("  ]");
        if let Some(labels) = &self.labels {
            out.push_str(",\n  \"labels\": [\n");
            for (i, row) in labels.iter().enumerate() {
                let _ = write!(out, "    {}", serde_json::to_string(row).expect("serialisable"));
                if i + 1 < labels.len() {
                    out.push(',');
                }
                out.push('\n');
            }
            out.push_str("  ]");
        }
        if let Some(report) = &self.report {
            let _ = write!(out, ",\n  \"report\": {}", serde_json::to_string(report).expect("serialisable"));
        }
        out.push_str("\n}\n");
        out
    }
}

/// 17 significant digits in scientific notation; `0` stays `0.0`.
fn format_sig17(x: f64) -> String {
    assert!(x.is_finite(), "state files hold finite numbers only");
    if x == 0.0 {
        return "0.0".into();
    }
    format!("{x:.16e}")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::criteria::{analyze, Tolerances};
    use crate::{families, random};
    use proptest::prelude::*;
    use rand::{rngs::StdRng, SeedableRng};

    #[test]
    fn writes_and_reads_a_family_state() {
        let rho = families::werner(2, 0.5).unwrap();
        let file = StateFile::from_state(&rho).with_family(families::FamilySpec::Werner { d: 2, eta: 0.5 });
        let text = file.to_json();
        assert!(text.contains("\"family\": {\"kind\":\"werner\",\"d\":2,\"eta\":0.5}"));
        assert!(text.contains("[1.2500000000000000e-1, 0.0]"));
        let back = StateFile::parse(&text).unwrap();
        assert_eq!(back, file);
        assert_eq!(back.to_density(1e-9).unwrap(), rho);
    }

    #[test]
    fn evm_export_carries_labels() {
        let rho = families::bell(Complex64::new(0.6, 0.0), Complex64::new(0.8, 0.0)).unwrap();
        let evm = ExpectationValueMatrix::build(&rho);
        let text = StateFile::from_evm(&evm).to_json();
        let back = StateFile::parse(&text).unwrap();
        assert_eq!(back.labels.as_ref().unwrap()[0][3], "A1^1† A2^1†");
        assert_eq!(back.matrix, *evm.entries());
    }

    #[test]
    fn report_object_round_trips() {
        let rho = families::isotropic(3, 0.5).unwrap();
        let report = analyze(&rho, Tolerances::default());
        let text = StateFile::from_state(&rho).with_report(report.clone()).to_json();
        assert_eq!(StateFile::parse(&text).unwrap().report, Some(report));
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(StateFile::parse("{"), Err(Error::Parse(_))));
        let wrong = r#"{"dims": [2, 2], "matrix": [[[1, 0]]]}"#;
        assert!(matches!(StateFile::parse(wrong), Err(Error::DimMismatch(_))));
        let trivial = r#"{"dims": [1, 2], "matrix": [[[1, 0], [0, 0]], [[0, 0], [0, 0]]]}"#;
        assert!(matches!(StateFile::parse(trivial), Err(Error::DimMismatch(_))));
        let extra = r#"{"dims": [2, 2], "matrix": [], "colour": 1}"#;
        assert!(matches!(StateFile::parse(extra), Err(Error::Parse(_))));
    }

    #[test]
    fn bad_trace_is_reported_on_validation() {
        let m = ComplexMatrix::from_diag(&[0.3, 0.3, 0.3, 0.0]);
        let text = StateFile {
            dims: BipartiteDims::new(2, 2).unwrap(),
            matrix: m,
            family: None,
            labels: None,
            report: None,
        }
        .to_json();
        let file = StateFile::parse(&text).unwrap();
        assert!(matches!(file.to_density(1e-9), Err(Error::TraceNotOne { .. })));
    }

    proptest! {
        #[test]
        fn round_trip_is_bit_exact(seed in any::<u64>(), d1 in 2usize..4, d2 in 2usize..4) {
            let mut rng = StdRng::seed_from_u64(seed);
            let rho = random::density(&mut rng, BipartiteDims::new(d1, d2).unwrap());
            let back = StateFile::parse(&StateFile::from_state(&rho).to_json()).unwrap();
            prop_assert_eq!(&back.matrix, rho.matrix());
        }
    }
}
