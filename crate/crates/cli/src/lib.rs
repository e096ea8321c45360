//! Library half of the `qsep` command-line tool: state-file analysis,
//! parameter-grid scans, and the figure/interval data bundles.

pub mod analyze;
pub mod grid;
pub mod reproduce;
pub mod scan;
pub mod table;

pub use analyze::{analyze_text, exit_code, EXIT_ENTANGLED, EXIT_INPUT_ERROR, EXIT_SEPARABLE_OR_INCONCLUSIVE};
pub use grid::{DimRange, RealAxis, STEP_1D, STEP_2D};
pub use reproduce::{reproduce, Target};
pub use scan::{Boundary, Family, Scan, ScanConfig, ScanRecord, ScanResult};
