use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand};
use qsep_cli::analyze::{self, EXIT_INPUT_ERROR};
use qsep_cli::{reproduce, DimRange, Family, RealAxis, Scan, ScanConfig, Target};
use qsep_core::evm::ExpectationValueMatrix;
use qsep_core::families::FamilySpec;
use qsep_core::io::StateFile;

/// Entanglement detection for bipartite density matrices.
#[derive(Parser)]
#[command(name = "qsep", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every criterion on a state file. Exit code: 0 separable or
    /// inconclusive, 2 entanglement detected, 1 input error.
    Analyze {
        #[arg(long)]
        state: PathBuf,
        #[arg(long, default_value_t = qsep_core::DEFAULT_TOL)]
        tol: f64,
        /// Print the state file with a `report` object instead of text.
        #[arg(long)]
        json: bool,
        /// Also write the state file with its report here.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Evaluate a family over a parameter grid and write CSV.
    Scan {
        /// werner, isotropic, horodecki or upb.
        family: Family,
        /// Dimension range A..B (werner, isotropic).
        #[arg(long)]
        d: Option<DimRange>,
        /// LO:HI:STEP (werner).
        #[arg(long)]
        eta: Option<RealAxis>,
        /// LO:HI:STEP (isotropic).
        #[arg(long)]
        alpha: Option<RealAxis>,
        /// LO:HI:STEP (horodecki).
        #[arg(long)]
        a: Option<RealAxis>,
        /// LO:HI:STEP (horodecki, upb).
        #[arg(long)]
        p: Option<RealAxis>,
        #[arg(long)]
        out: PathBuf,
        /// Also write the detection onsets here.
        #[arg(long)]
        boundaries: Option<PathBuf>,
        #[command(flatten)]
        config: ConfigArgs,
    },
    /// Write the CSV bundle behind a figure or detection interval.
    Reproduce {
        /// fig1a, fig1b, ex3, ex4 or all.
        target: String,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        config: ConfigArgs,
    },
    /// Write a family member as a state file.
    Generate {
        /// werner, isotropic, horodecki, upb or bell.
        family: String,
        #[arg(long)]
        d: Option<usize>,
        #[arg(long)]
        eta: Option<f64>,
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        a: Option<f64>,
        #[arg(long)]
        p: Option<f64>,
        /// Bell amplitudes as RE_A,IM_A,RE_B,IM_B for a|00> + b|11>.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        bell: Option<Vec<f64>>,
        /// Write the expectation-value matrix with operator labels instead.
        #[arg(long)]
        evm: bool,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(clap::Args)]
struct ConfigArgs {
    /// Largest d evaluated on the constructed matrix (closed form above).
    #[arg(long, default_value_t = ScanConfig::default().matrix_max_d)]
    matrix_max_d: usize,
    /// Largest d with a partial-transpose column (blank above).
    #[arg(long, default_value_t = ScanConfig::default().ppt_max_d)]
    ppt_max_d: usize,
    #[arg(long, default_value_t = qsep_core::DEFAULT_TOL)]
    tol: f64,
}

impl ConfigArgs {
    fn config(&self) -> ScanConfig {
        ScanConfig {
            matrix_max_d: self.matrix_max_d,
            ppt_max_d: self.ppt_max_d,
            tol: self.tol,
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_INPUT_ERROR as u8 } else { 0 });
        }
    };
    match run(cli.command) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_INPUT_ERROR as u8)
        }
    }
}

fn run(command: Command) -> anyhow::Result<i32> {
    match command {
        Command::Analyze {
            state,
            tol,
            json,
            report,
        } => {
            let text = fs::read_to_string(&state).with_context(|| format!("reading {}", state.display()))?;
            let (file, rep) = analyze::analyze_text(&text, tol).with_context(|| format!("invalid state {}", state.display()))?;
            if json {
                print!("{}", analyze::render_json(&file, &rep));
            } else {
                print!("{}", analyze::render(&file, &rep));
            }
            if let Some(path) = report {
                fs::write(&path, analyze::render_json(&file, &rep)).with_context(|| format!("writing {}", path.display()))?;
            }
            Ok(analyze::exit_code(&rep))
        }
        Command::Scan {
            family,
            d,
            eta,
            alpha,
            a,
            p,
            out,
            boundaries,
            config,
        } => {
            let x = match family {
                Family::Werner if alpha.is_none() && p.is_none() => eta,
                Family::Isotropic if eta.is_none() && p.is_none() => alpha,
                Family::Horodecki | Family::Upb if eta.is_none() && alpha.is_none() => p,
                _ => bail!("{family} scans take {}", family.axis_names().join(", ")),
            };
            let result = Scan::new(family, d, a, x)?.run(&config.config())?;
            fs::write(&out, result.to_csv()).with_context(|| format!("writing {}", out.display()))?;
            if let Some(path) = boundaries {
                fs::write(&path, result.boundaries_csv()).with_context(|| format!("writing {}", path.display()))?;
            }
            for b in &result.boundaries {
                let group: Vec<String> = b.group.iter().map(|&g| qsep_cli::table::num(g)).collect();
                let prefix = if group.is_empty() {
                    String::new()
                } else {
                    format!("{}={} ", family.axis_names()[0], group.join(","))
                };
                println!(
                    "{prefix}onset in ({}, {}] estimate {} ({}, resolution {})",
                    b.lower,
                    b.upper,
                    qsep_cli::table::num(b.estimate),
                    b.method.name(),
                    qsep_cli::table::num(b.resolution)
                );
            }
            Ok(0)
        }
        Command::Reproduce { target, out, config } => {
            let targets = if target == "all" {
                Target::ALL.to_vec()
            } else {
                vec![target.parse()?]
            };
            for t in targets {
                for path in reproduce(t, &out, &config.config())? {
                    println!("{}", path.display());
                }
            }
            Ok(0)
        }
        Command::Generate {
            family,
            d,
            eta,
            alpha,
            a,
            p,
            bell,
            evm,
            out,
        } => {
            let need = |v: Option<f64>, name: &str| v.with_context(|| format!("{family} needs --{name}"));
            let spec = match family.as_str() {
                "werner" => FamilySpec::Werner {
                    d: d.context("werner needs --d")?,
                    eta: need(eta, "eta")?,
                },
                "isotropic" => FamilySpec::Isotropic {
                    d: d.context("isotropic needs --d")?,
                    alpha: need(alpha, "alpha")?,
                },
                "horodecki" => FamilySpec::HorodeckiMixture {
                    a: need(a, "a")?,
                    p: need(p, "p")?,
                },
                "upb" => FamilySpec::UpbMixture { p: need(p, "p")? },
                "bell" => {
                    let v = bell.context("bell needs --bell RE_A,IM_A,RE_B,IM_B")?;
                    if v.len() != 4 {
                        bail!("--bell takes exactly four numbers, got {}", v.len());
                    }
                    FamilySpec::Bell {
                        a: [v[0], v[1]],
                        b: [v[2], v[3]],
                    }
                }
                other => bail!("unknown family {other:?} (expected werner, isotropic, horodecki, upb or bell)"),
            };
            let rho = spec.build()?;
            let file = if evm {
                StateFile::from_evm(&ExpectationValueMatrix::build(&rho))
            } else {
                StateFile::from_state(&rho)
            };
            fs::write(&out, file.with_family(spec).to_json()).with_context(|| format!("writing {}", out.display()))?;
            Ok(0)
        }
    }
}
