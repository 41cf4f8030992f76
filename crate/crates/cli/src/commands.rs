use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use combstab::kernel::{kernel_polarization, kernel_report, validate_pair, GeneratedPairData};
use combstab::model::{total_euler, validate_polarization, Polarization};
use combstab::oracle::InstanceBounds;
use combstab::polarization::{feasible_region, necessary_check, synthesize_polarization};
use combstab::restriction::classify;
use combstab::selftest::{run_selftest_with, Execution, FastPaths, SelftestConfig, Suite};
use serde::Serialize;

use crate::document::{parse_weights, InstanceDocument, PolarizationDoc};
use crate::report::{self, Classification};
use crate::{CliError, Output, EXIT_OK};

#[derive(Debug, Parser)]
#[command(name = "combstab", version, about = "Exact stability criteria for vector bundles on comb curves")]
pub struct Cli {
    /// Machine-readable JSON output.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tooth inequalities with witnesses, then restriction classification.
    Analyze {
        file: PathBuf,
        /// Weights as "p/q,p/q,..."; overrides the document.
        #[arg(long)]
        polarization: Option<String>,
    },
    /// Per-component intervals of admissible weights.
    Region {
        file: PathBuf,
        /// Strict inequalities (open intervals).
        #[arg(long)]
        strict: bool,
    },
    /// A polarization satisfying the strict inequalities.
    Polarize { file: PathBuf },
    /// Kernel bundle report for a generated pair.
    Kernel { file: PathBuf },
    /// Checks every part of a document.
    Validate {
        file: PathBuf,
        #[arg(long)]
        polarization: Option<String>,
    },
    /// Random sweep comparing every fast path against its oracle.
    Selftest(SelftestArgs),
}

#[derive(Debug, Args)]
pub struct SelftestArgs {
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value_t = 10_000)]
    pub count: u64,
    #[arg(long, default_value_t = 6)]
    pub max_components: usize,
    #[arg(long, default_value_t = 5)]
    pub max_genus: u32,
    #[arg(long, default_value_t = 4)]
    pub max_rank: u32,
    #[arg(long, default_value_t = -20, allow_hyphen_values = true)]
    pub min_degree: i64,
    #[arg(long, default_value_t = 20, allow_hyphen_values = true)]
    pub max_degree: i64,
    #[arg(long, default_value_t = 64)]
    pub max_denominator: i64,
    /// Run on one thread.
    #[arg(long)]
    pub sequential: bool,
    /// Break one fast path on purpose to exercise the harness.
    #[arg(long, hide = true)]
    pub inject_fault: Option<String>,
}

fn read(path: &PathBuf) -> Result<InstanceDocument, CliError> {
    let text = if path.as_os_str() == "-" {
        std::io::read_to_string(std::io::stdin())
    } else {
        std::fs::read_to_string(path)
    }
    .map_err(|e| CliError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    InstanceDocument::parse(&text)
}

fn json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("reports always serialize") + "\n"
}

/// Runs one command. `Err` means unusable input (exit 2).
pub fn execute(command: &Command, as_json: bool) -> Result<Output, CliError> {
    match command {
        Command::Analyze { file, polarization } => analyze(&read(file)?, polarization.as_deref(), as_json),
        Command::Region { file, strict } => region(&read(file)?, *strict, as_json),
        Command::Polarize { file } => polarize(&read(file)?, as_json),
        Command::Kernel { file } => kernel(&read(file)?, as_json),
        Command::Validate { file, polarization } => validate(&read(file)?, polarization.as_deref(), as_json),
        Command::Selftest(args) => selftest(args, as_json),
    }
}

pub fn analyze(doc: &InstanceDocument, flag: Option<&str>, as_json: bool) -> Result<Output, CliError> {
    let curve = doc.curve()?;
    let bundle = doc.bundle(&curve)?;
    let w = doc.polarization(&curve, flag)?;
    let verdict = necessary_check(&curve, &bundle, &w)?;
    let classes: Vec<(usize, Classification)> = (1..=curve.teeth())
        .map(|j| (j, classify(&curve, &bundle, &w, j).map_err(|e| e.to_string())))
        .collect();
    let stdout = if as_json {
        json(&report::analyze_json(&verdict, &classes))
    } else {
        report::analyze_text(&verdict, &classes)
    };
    Ok(Output::verdict(stdout, verdict.overall_pass))
}

pub fn region(doc: &InstanceDocument, strict: bool, as_json: bool) -> Result<Output, CliError> {
    let curve = doc.curve()?;
    let bundle = doc.bundle(&curve)?;
    let region = feasible_region(&curve, &bundle, strict)?;
    let stdout = if as_json {
        json(&report::region_json(&region))
    } else {
        report::region_text(&region)
    };
    Ok(Output::verdict(stdout, region.feasible))
}

/// Uses the pair's kernel bundle when the document has a pair, otherwise
/// the bundle itself.
pub fn polarize(doc: &InstanceDocument, as_json: bool) -> Result<Output, CliError> {
    let curve = doc.curve()?;
    let w: Option<Polarization> = if doc.pair.is_some() {
        kernel_polarization(&curve, &doc.pair(&curve)?)?
    } else {
        synthesize_polarization(&curve, &doc.bundle(&curve)?)?
    };
    let stdout = match (&w, as_json) {
        (Some(w), true) => serde_json::to_string(&PolarizationDoc::from(w)).expect("serializable") + "\n",
        (Some(w), false) => format!("w = {w}\n"),
        (None, true) => "null\n".to_string(),
        (None, false) => "no polarization satisfies the strict inequalities\n".to_string(),
    };
    Ok(Output::verdict(stdout, w.is_some()))
}

pub fn kernel(doc: &InstanceDocument, as_json: bool) -> Result<Output, CliError> {
    let curve = doc.curve()?;
    let pair: GeneratedPairData = doc.pair(&curve)?;
    let report = kernel_report(&curve, &pair)?;
    let sequence_euler = i64::from(pair.sections) * curve.structure_euler() - total_euler(&curve, &pair.bundle()?)?;
    let stdout = if as_json {
        json(&report::KernelJson {
            report: &report,
            sequence_euler,
        })
    } else {
        report::kernel_text(&report, sequence_euler, &pair.kernel_teeth().collect::<Vec<_>>())
    };
    Ok(Output::verdict(stdout, !report::kernel_is_negative(&report)))
}

#[derive(Serialize)]
struct ValidationJson {
    valid: bool,
    problems: Vec<String>,
}

/// Collects every problem in the document rather than stopping at the
/// first; a document with problems is a negative verdict (exit 1).
pub fn validate(doc: &InstanceDocument, flag: Option<&str>, as_json: bool) -> Result<Output, CliError> {
    let mut problems = Vec::new();
    match doc.curve() {
        Err(e) => problems.push(format!("curve: {e}")),
        Ok(curve) => {
            if doc.bundle.is_some() {
                if let Err(e) = doc.bundle(&curve) {
                    problems.push(format!("bundle: {e}"));
                }
            }
            if let Some(p) = &doc.pair {
                let pair = GeneratedPairData {
                    rank: p.rank,
                    sections: p.sections,
                    multidegree: p.multidegree.clone(),
                    kernel_dims: p.kernel_dims.clone(),
                    assumptions: p.assumptions,
                };
                if let Err(vs) = validate_pair(&curve, &pair) {
                    problems.extend(vs.iter().map(|v| format!("pair: {v}")));
                }
            }
            let w = match (flag, &doc.polarization) {
                (Some(text), _) => Some(parse_weights(text)?),
                (None, Some(d)) => Some(Polarization::new(d.weights.clone())),
                (None, None) => None,
            };
            if let Some(w) = w {
                if let Err(vs) = validate_polarization(&w) {
                    problems.extend(vs.iter().map(|v| format!("polarization: {v}")));
                }
                if w.len() != curve.components() {
                    problems.push(format!(
                        "polarization: {} weights for {} components",
                        w.len(),
                        curve.components()
                    ));
                }
            }
        }
    }
    let valid = problems.is_empty();
    let stdout = if as_json {
        json(&ValidationJson { valid, problems })
    } else if valid {
        "valid\n".to_string()
    } else {
        problems.iter().map(|p| format!("{p}\n")).collect()
    };
    Ok(Output::verdict(stdout, valid))
}

pub fn selftest(args: &SelftestArgs, as_json: bool) -> Result<Output, CliError> {
    let config = SelftestConfig {
        seed: args.seed,
        count: args.count,
        bounds: InstanceBounds {
            max_components: args.max_components,
            max_genus: args.max_genus,
            max_rank: args.max_rank,
            min_degree: args.min_degree,
            max_degree: args.max_degree,
            max_weight_denominator: args.max_denominator,
            seed: args.seed,
        },
    };
    let paths = match &args.inject_fault {
        None => FastPaths::default(),
        Some(name) => FastPaths::with_fault(
            Suite::from_name(name).ok_or_else(|| CliError::Input(format!("unknown suite {name:?}")))?,
        ),
    };
    let execution = if args.sequential {
        Execution::Sequential
    } else {
        Execution::default()
    };
    let report = run_selftest_with(&paths, &config, execution)?;
    let stdout = if as_json { json(&report) } else { report.to_string() };
    Ok(Output {
        code: if report.passed() { EXIT_OK } else { crate::EXIT_NEGATIVE },
        stdout,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{EXIT_INPUT, EXIT_NEGATIVE};

    fn doc(text: &str) -> InstanceDocument {
        InstanceDocument::parse(text).unwrap()
    }

    const I1: &str = r#"{"curve": {"genera": [2, 2]}, "bundle": {"rank": 2, "multidegree": [1, 1]},
        "polarization": {"weights": ["1/3", "2/3"]}}"#;
    const I1_FAIL: &str = r#"{"curve": {"genera": [2, 2]}, "bundle": {"rank": 2, "multidegree": [5, 1]},
        "polarization": {"weights": ["1/2", "1/2"]}}"#;

    fn exit_of(r: Result<Output, CliError>) -> i32 {
        r.map(|o| o.code).unwrap_or(EXIT_INPUT)
    }

    #[test]
    fn analyze_reports_forced_destabilizer() {
        let out = analyze(&doc(I1), None, false).unwrap();
        assert_eq!(out.code, EXIT_OK);
        assert!(out.stdout.starts_with("necessary check: pass"));
        assert!(out.stdout.contains("j=1: PossiblyUnstable, forced {(1, 0)}"), "{}", out.stdout);
    }

    #[test]
    fn analyze_failure_names_witness() {
        let out = analyze(&doc(I1_FAIL), None, false).unwrap();
        assert_eq!(out.code, EXIT_NEGATIVE);
        assert!(out.stdout.contains("upper bound fails, witness E_1(-p_1)"), "{}", out.stdout);
    }

    #[test]
    fn analyze_without_polarization_is_input_error() {
        let d = doc(r#"{"curve": {"genera": [2, 2]}, "bundle": {"rank": 2, "multidegree": [1, 1]}}"#);
        assert_eq!(exit_of(analyze(&d, None, false)), EXIT_INPUT);
        assert_eq!(exit_of(analyze(&d, Some("1/3,2/3"), false)), EXIT_OK);
        assert_eq!(exit_of(analyze(&d, Some("1/3,1/3"), false)), EXIT_INPUT);
    }

    #[test]
    fn region_lines() {
        assert_eq!(region(&doc(I1), false, false).unwrap().stdout, "w_1 ∈ [1/4, 3/4]; feasible\n");
        assert_eq!(region(&doc(I1), true, false).unwrap().stdout, "w_1 ∈ (1/4, 3/4); feasible\n");
        let out = region(&doc(I1_FAIL), false, false).unwrap();
        assert_eq!(out.stdout, "empty at j=1; infeasible\n");
        assert_eq!(out.code, EXIT_NEGATIVE);
    }

    #[test]
    fn polarize_outputs() {
        let kernel_doc = doc(r#"{"curve": {"genera": [2, 2, 2]},
            "pair": {"rank": 1, "sections": 3, "multidegree": [3, 3, 3], "kernel_dims": [0, 0, 0]}}"#);
        let out = polarize(&kernel_doc, true).unwrap();
        assert_eq!(out.stdout, "{\"weights\":[\"1/3\",\"1/3\",\"1/3\"]}\n");
        assert_eq!(polarize(&doc(I1), true).unwrap().stdout, "{\"weights\":[\"1/2\",\"1/2\"]}\n");
        let out = polarize(&doc(I1_FAIL), false).unwrap();
        assert_eq!(out.code, EXIT_NEGATIVE);
    }

    #[test]
    fn kernel_verdicts() {
        let d = doc(r#"{"curve": {"genera": [2, 3]},
            "pair": {"rank": 1, "sections": 4, "multidegree": [4, 5], "kernel_dims": [1, 0]}}"#);
        let out = kernel(&d, false).unwrap();
        assert_eq!(out.code, EXIT_NEGATIVE);
        assert!(out.stdout.contains("characterization: StronglyUnstable (d_1 != m - r_1), j=1"), "{}", out.stdout);

        let d = doc(r#"{"curve": {"genera": [2, 3]},
            "pair": {"rank": 1, "sections": 4, "multidegree": [2, 5], "kernel_dims": [1, 0]}}"#);
        let out = kernel(&d, false).unwrap();
        assert_eq!(out.code, EXIT_OK);
        assert!(out.stdout.contains("NotDetermined (gap case d_1 = m - r_1)"), "{}", out.stdout);

        let d = doc(r#"{"curve": {"genera": [2, 2, 2]},
            "pair": {"rank": 1, "sections": 3, "multidegree": [3, 3, 3], "kernel_dims": [0, 0, 0],
                     "assumptions": {"general_linear_series": true, "components_general_in_moduli": true}}}"#);
        let out = kernel(&d, false).unwrap();
        assert_eq!(out.code, EXIT_OK);
        assert!(out.stdout.contains("ExistsSemistablePolarization w=(1/3, 1/3, 1/3)"), "{}", out.stdout);
        assert!(out.stdout.contains("chi = -19"));
        assert!(out.stdout.contains("l chi(O_C) - chi(E) = -19"));
    }

    #[test]
    fn validate_collects_problems() {
        assert_eq!(validate(&doc(I1), None, false).unwrap(), Output::verdict("valid\n".into(), true));
        let bad = doc(r#"{"curve": {"genera": [1, 2]},
            "pair": {"rank": 2, "sections": 2, "multidegree": [-1, 0], "kernel_dims": [0, 0]},
            "polarization": {"weights": ["0", "1"]}}"#);
        let out = validate(&bad, None, false).unwrap();
        assert_eq!(out.code, EXIT_NEGATIVE);
        assert!(out.stdout.lines().count() >= 4, "{}", out.stdout);
    }

    #[test]
    fn selftest_zero_count_is_vacuous() {
        let cli = Cli::parse_from(["combstab", "selftest", "--count", "0"]);
        let out = execute(&cli.command, cli.json).unwrap();
        assert_eq!(out.code, EXIT_OK);
        assert!(out.stdout.contains("0/0 oracle agreements"));
    }

    #[test]
    fn selftest_rejects_bad_bounds() {
        let cli = Cli::parse_from(["combstab", "selftest", "--count", "5", "--max-denominator", "3"]);
        assert!(execute(&cli.command, cli.json).is_err());
        let cli = Cli::parse_from(["combstab", "selftest", "--inject-fault", "bogus"]);
        assert!(execute(&cli.command, cli.json).is_err());
    }
}
