//! Text and JSON renderings of verdicts.

use std::fmt::Write;

use combstab::interval::Endpoint;
use combstab::kernel::{Branch, Characterization, KernelReport, RestrictionInstability, StrongUnstability};
use combstab::polarization::{FeasibleRegion, NecessaryVerdict};
use combstab::restriction::{Destabilizer, RestrictionVerdict};
use combstab::{IntervalQ, Rational};
use serde::Serialize;

fn destabilizers(list: &[Destabilizer]) -> String {
    let items: Vec<String> = list.iter().map(|d| format!("({}, {})", d.rank, d.euler)).collect();
    format!("{{{}}}", items.join(", "))
}

/// Per-tooth classification, or why there is none.
pub type Classification = Result<RestrictionVerdict, String>;

pub fn analyze_text(verdict: &NecessaryVerdict, classes: &[(usize, Classification)]) -> String {
    let mut out = String::new();
    let status = if verdict.overall_pass { "pass" } else { "fail" };
    writeln!(out, "necessary check: {status} (chi/n = {})", verdict.bundle_slope).unwrap();
    for c in &verdict.components {
        match (&c.witness, &c.witness_slope) {
            (Some(w), Some(s)) => {
                let side = if c.lower_ok { "upper" } else { "lower" };
                writeln!(
                    out,
                    "  j={}: {side} bound fails, witness {} with slope {s} > {}",
                    c.j, w.label, verdict.bundle_slope
                )
                .unwrap();
            }
            _ => writeln!(out, "  j={}: ok", c.j).unwrap(),
        }
    }
    writeln!(out, "restriction classification:").unwrap();
    for (j, class) in classes {
        match class {
            Ok(v) if v.forced_destabilizers.is_empty() => {
                writeln!(out, "  j={j}: {:?} ({})", v.case, v.notes).unwrap()
            }
            Ok(v) => writeln!(
                out,
                "  j={j}: {:?}, forced {} ({})",
                v.case,
                destabilizers(&v.forced_destabilizers),
                v.notes
            )
            .unwrap(),
            Err(why) => writeln!(out, "  j={j}: not classified: {why}").unwrap(),
        }
    }
    out
}

#[derive(Serialize)]
pub struct AnalyzeJson<'a> {
    pub necessary: &'a NecessaryVerdict,
    pub restriction: Vec<ClassJson<'a>>,
}

#[derive(Serialize)]
pub struct ClassJson<'a> {
    pub j: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict: Option<&'a RestrictionVerdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub unclassified: Option<&'a str>,
}

pub fn analyze_json<'a>(verdict: &'a NecessaryVerdict, classes: &'a [(usize, Classification)]) -> AnalyzeJson<'a> {
    AnalyzeJson {
        necessary: verdict,
        restriction: classes
            .iter()
            .map(|(j, c)| ClassJson {
                j: *j,
                verdict: c.as_ref().ok(),
                unclassified: c.as_ref().err().map(String::as_str),
            })
            .collect(),
    }
}

pub fn region_text(region: &FeasibleRegion) -> String {
    let mut parts: Vec<String> = region
        .intervals
        .iter()
        .enumerate()
        .map(|(i, interval)| {
            if interval.is_empty() {
                format!("empty at j={}", i + 1)
            } else {
                format!("w_{} ∈ {interval}", i + 1)
            }
        })
        .collect();
    parts.push(if region.feasible { "feasible" } else { "infeasible" }.to_string());
    parts.join("; ") + "\n"
}

#[derive(Serialize)]
pub struct IntervalJson {
    pub j: usize,
    pub empty: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lower: Option<Rational>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub upper: Option<Rational>,
    pub lower_open: bool,
    pub upper_open: bool,
    pub text: String,
}

#[derive(Serialize)]
pub struct RegionJson {
    pub strict: bool,
    pub feasible: bool,
    pub intervals: Vec<IntervalJson>,
}

fn interval_json(j: usize, interval: &IntervalQ) -> IntervalJson {
    let empty = interval.is_empty();
    let end = |e: &Endpoint| if empty { None } else { e.value().cloned() };
    IntervalJson {
        j,
        empty,
        lower: end(&interval.lo),
        upper: end(&interval.hi),
        lower_open: interval.lo.is_open(),
        upper_open: interval.hi.is_open(),
        text: interval.to_string(),
    }
}

pub fn region_json(region: &FeasibleRegion) -> RegionJson {
    RegionJson {
        strict: region.strict,
        feasible: region.feasible,
        intervals: region
            .intervals
            .iter()
            .enumerate()
            .map(|(i, interval)| interval_json(i + 1, interval))
            .collect(),
    }
}

fn branch_text(branch: Branch, j: Option<usize>) -> String {
    let j = j.map_or_else(|| "j".to_string(), |j| j.to_string());
    match branch {
        Branch::RankTwo => "kernel rank 2".into(),
        Branch::DegreeAvoidsGap => format!("d_{j} != m - r_{j}"),
        Branch::DivisibleEuler => format!("m divides chi_{j}"),
        Branch::DegreeGap => format!("gap case d_{j} = m - r_{j}"),
        Branch::RankOne => "kernel rank 1".into(),
        Branch::NoKernel => "no restriction kernel".into(),
    }
}

fn list(values: &[i64]) -> String {
    let items: Vec<String> = values.iter().map(ToString::to_string).collect();
    format!("({})", items.join(", "))
}

/// `kernel_teeth` are the teeth with a nonzero restriction kernel; in the
/// gap case they are exactly the teeth that block a verdict.
pub fn kernel_text(report: &KernelReport, sequence_euler: i64, kernel_teeth: &[usize]) -> String {
    let mut out = String::new();
    let m = &report.kernel;
    writeln!(
        out,
        "kernel bundle: rank {}, multidegree {}, chi_j = {}, chi = {}",
        m.rank,
        list(&m.multidegree),
        list(&report.kernel_eulers),
        report.kernel_euler
    )
    .unwrap();
    writeln!(out, "  from the sequence: l chi(O_C) - chi(E) = {sequence_euler}").unwrap();
    writeln!(out, "restrictions:").unwrap();
    for (i, r) in report.instabilities.iter().enumerate() {
        let j = i + 1;
        match r {
            RestrictionInstability::Unstable {
                witness,
                witness_slope,
                restriction_slope,
            } => writeln!(
                out,
                "  j={j}: unstable, witness {} (rank {}) with slope {witness_slope} > {restriction_slope}",
                witness.label, witness.multirank[i]
            )
            .unwrap(),
            RestrictionInstability::NoKernel => writeln!(out, "  j={j}: no kernel").unwrap(),
            RestrictionInstability::SlopeTie => writeln!(out, "  j={j}: kernel present but d_{j} = 0, slopes tie").unwrap(),
        }
    }
    let s = &report.strong;
    let at = s.triggering_j.map(|j| format!(", j={j}")).unwrap_or_default();
    let subject = match (s.triggering_j, kernel_teeth) {
        (Some(j), _) => Some(j),
        (None, &[j]) => Some(j),
        _ => None,
    };
    writeln!(
        out,
        "strong unstability: {:?} ({}){at}: {}",
        s.verdict,
        branch_text(s.branch, subject),
        s.reason
    )
    .unwrap();
    for note in &s.notes {
        writeln!(out, "  note: {note}").unwrap();
    }
    let line = match &report.characterization {
        Characterization::ExistsSemistablePolarization { polarization } => {
            format!("ExistsSemistablePolarization w={polarization}")
        }
        Characterization::StronglyUnstable { j, branch, reason } => {
            format!("StronglyUnstable ({}), j={j}: {reason}", branch_text(*branch, Some(*j)))
        }
        Characterization::DivisibilityContradiction { reason } => format!("DivisibilityContradiction: {reason}"),
        Characterization::NotDetermined { reason } if report.strong.verdict == StrongUnstability::NotDetermined => {
            format!("NotDetermined ({}): {reason}", branch_text(report.strong.branch, subject))
        }
        Characterization::NotDetermined { reason } => format!("NotDetermined: {reason}"),
        Characterization::Conditional { unmet, candidate } => match candidate {
            Some(w) => format!("Conditional on {unmet}; candidate w={w}"),
            None => format!("Conditional on {unmet}"),
        },
    };
    writeln!(out, "characterization: {line}").unwrap();
    out
}

/// Negative verdicts of the kernel command.
pub fn kernel_is_negative(report: &KernelReport) -> bool {
    report.strong.verdict == StrongUnstability::StronglyUnstable
        || matches!(
            report.characterization,
            Characterization::StronglyUnstable { .. } | Characterization::DivisibilityContradiction { .. }
        )
}

#[derive(Serialize)]
pub struct KernelJson<'a> {
    #[serde(flatten)]
    pub report: &'a KernelReport,
    pub sequence_euler: i64,
}
