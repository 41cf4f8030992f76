//! Seeded oracle sweep: every fast path against its brute-force oracle.
//!
//! Instance `i` of a run with base seed `s` is built from `mix_seed(s, i)`,
//! so a stream can be split across workers without changing any instance.
//! Outcomes are folded in index order, which keeps the report identical
//! between sequential and parallel execution.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::interval::{pick_simplest_rational, IntervalQ};
use crate::kernel::{kernel_data, kernel_polarization, GeneratedPairData};
use crate::model::{total_euler, validate_polarization, BundleData, CombCurve, Polarization};
use crate::oracle::{
    mix_seed, necessary_pattern_matches, oracle_destabilizer_enumeration, oracle_simplest_rational,
    random_instance, random_pair, random_restriction_instance, random_unit_subinterval, InstanceBounds,
};
use crate::polarization::{necessary_check, strictly_satisfies, NecessaryVerdict};
use crate::rational::Rational;
use crate::restriction::{classify, filtered_destabilizers, Destabilizer, RestrictionVerdict};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    NecessaryEquivalence,
    DestabilizerEnumeration,
    SimplestRational,
    KernelPolarization,
    KernelEulerIdentity,
}

impl Suite {
    pub const ALL: [Suite; 5] = [
        Suite::NecessaryEquivalence,
        Suite::DestabilizerEnumeration,
        Suite::SimplestRational,
        Suite::KernelPolarization,
        Suite::KernelEulerIdentity,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::NecessaryEquivalence => "necessary-equivalence",
            Suite::DestabilizerEnumeration => "destabilizer-enumeration",
            Suite::SimplestRational => "simplest-rational",
            Suite::KernelPolarization => "kernel-polarization",
            Suite::KernelEulerIdentity => "kernel-euler-identity",
        }
    }

    pub fn from_name(name: &str) -> Option<Suite> {
        Suite::ALL.into_iter().find(|s| s.name() == name)
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

type NecessaryFn = fn(&CombCurve, &BundleData, &Polarization) -> Result<NecessaryVerdict>;
type DestabilizerFn = fn(&CombCurve, &BundleData, &Polarization, usize) -> Result<Vec<Destabilizer>>;
type ClassifyFn = fn(&CombCurve, &BundleData, &Polarization, usize) -> Result<RestrictionVerdict>;
type SimplestFn = fn(&IntervalQ) -> Result<Rational>;
type KernelPolarizationFn = fn(&CombCurve, &GeneratedPairData) -> Result<Option<Polarization>>;
type KernelDataFn = fn(&CombCurve, &GeneratedPairData) -> Result<BundleData>;

/// The routines under test. Swapping one out is how the harness itself is
/// tested.
#[derive(Clone, Copy)]
pub struct FastPaths {
    pub necessary: NecessaryFn,
    pub destabilizers: DestabilizerFn,
    pub classify: ClassifyFn,
    pub simplest: SimplestFn,
    pub kernel_polarization: KernelPolarizationFn,
    pub kernel_data: KernelDataFn,
}

impl Default for FastPaths {
    fn default() -> Self {
        FastPaths {
            necessary: necessary_check,
            destabilizers: filtered_destabilizers,
            classify,
            simplest: pick_simplest_rational,
            kernel_polarization,
            kernel_data,
        }
    }
}

impl FastPaths {
    /// Library routines with one deliberately broken.
    pub fn with_fault(suite: Suite) -> Self {
        let mut paths = FastPaths::default();
        match suite {
            Suite::NecessaryEquivalence => {
                paths.necessary = |c, b, w| {
                    let mut v = necessary_check(c, b, w)?;
                    if b.total_degree().rem_euclid(7) == 0 {
                        v.components[0].upper_ok = !v.components[0].upper_ok;
                    }
                    Ok(v)
                }
            }
            Suite::DestabilizerEnumeration => {
                paths.destabilizers = |c, b, w, j| {
                    let mut v = filtered_destabilizers(c, b, w, j)?;
                    v.pop();
                    Ok(v)
                }
            }
            Suite::SimplestRational => {
                paths.simplest = |i| {
                    let (lo, hi) = (i.lo.value().cloned(), i.hi.value().cloned());
                    match (lo, hi) {
                        (Some(lo), Some(hi)) => Ok((lo + hi) / Rational::from(2)),
                        _ => pick_simplest_rational(i),
                    }
                }
            }
            Suite::KernelPolarization => {
                paths.kernel_polarization = |c, _| {
                    let n = c.components() as i64;
                    Ok(Some(Polarization::new(vec![Rational::new(1, n); c.components()])))
                }
            }
            Suite::KernelEulerIdentity => {
                paths.kernel_data = |c, p| {
                    let mut m = kernel_data(c, p)?;
                    m.multidegree[0] += 1;
                    Ok(m)
                }
            }
        }
        paths
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Execution {
    Sequential,
    Parallel,
}

impl Default for Execution {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Execution::Parallel
        } else {
            Execution::Sequential
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SelftestConfig {
    pub seed: u64,
    pub count: u64,
    /// `bounds.seed` is ignored; per-instance seeds derive from `seed`.
    pub bounds: InstanceBounds,
}

impl Default for SelftestConfig {
    fn default() -> Self {
        SelftestConfig {
            seed: 1,
            count: 10_000,
            bounds: InstanceBounds::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteTally {
    pub suite: Suite,
    pub agreements: u64,
    pub checked: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub suite: Suite,
    pub index: u64,
    pub instance_seed: u64,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SelftestReport {
    pub seed: u64,
    pub count: u64,
    pub suites: Vec<SuiteTally>,
    /// Instances on which every suite agreed.
    pub agreements: u64,
    pub first_counterexample: Option<Counterexample>,
}

impl SelftestReport {
    pub fn passed(&self) -> bool {
        self.agreements == self.count
    }
}

impl fmt::Display for SelftestReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "selftest seed={} count={}", self.seed, self.count)?;
        for t in &self.suites {
            writeln!(f, "  {}: {}/{}", t.suite, t.agreements, t.checked)?;
        }
        writeln!(f, "{}/{} oracle agreements", self.agreements, self.count)?;
        if let Some(cx) = &self.first_counterexample {
            writeln!(
                f,
                "first counterexample: {} at index {} (instance seed {:#018x})",
                cx.suite, cx.index, cx.instance_seed
            )?;
            writeln!(f, "  {}", cx.detail)?;
            writeln!(f, "replay: selftest --seed {} --count {}", self.seed, cx.index + 1)?;
        }
        Ok(())
    }
}

fn describe(curve: &CombCurve, bundle: &BundleData, w: &Polarization) -> String {
    format!(
        "g={:?} n={} d={:?} w={}",
        curve.genera(),
        bundle.rank,
        bundle.multidegree,
        w
    )
}

fn describe_pair(curve: &CombCurve, p: &GeneratedPairData) -> String {
    format!(
        "g={:?} n={} l={} d={:?} k={:?}",
        curve.genera(),
        p.rank,
        p.sections,
        p.multidegree,
        p.kernel_dims
    )
}

fn check_necessary(paths: &FastPaths, bounds: &InstanceBounds) -> std::result::Result<(), String> {
    let inst = random_instance(bounds);
    let (c, b, w) = (&inst.curve, &inst.bundle, &inst.polarization);
    let verdict = (paths.necessary)(c, b, w).map_err(|e| format!("{}: {e}", describe(c, b, w)))?;
    if necessary_pattern_matches(&verdict, c, b, w) {
        Ok(())
    } else {
        Err(format!("{}: failure pattern differs from slope recomputation", describe(c, b, w)))
    }
}

fn check_destabilizers(paths: &FastPaths, bounds: &InstanceBounds) -> std::result::Result<(), String> {
    let (inst, j) = random_restriction_instance(bounds);
    let (c, b, w) = (&inst.curve, &inst.bundle, &inst.polarization);
    let ctx = || format!("{} j={j}", describe(c, b, w));
    let mut fast = (paths.destabilizers)(c, b, w, j).map_err(|e| format!("{}: {e}", ctx()))?;
    let mut brute = oracle_destabilizer_enumeration(c, b, w, j).map_err(|e| format!("{}: {e}", ctx()))?;
    fast.sort_unstable();
    brute.sort_unstable();
    if fast != brute {
        return Err(format!("{}: fast {fast:?} vs oracle {brute:?}", ctx()));
    }
    let verdict = (paths.classify)(c, b, w, j).map_err(|e| format!("{}: {e}", ctx()))?;
    if verdict.case.is_semistable() && !fast.is_empty() {
        return Err(format!("{}: {:?} with candidates {fast:?}", ctx(), verdict.case));
    }
    Ok(())
}

fn check_simplest(paths: &FastPaths, bounds: &InstanceBounds) -> std::result::Result<(), String> {
    let interval = random_unit_subinterval(bounds.seed, bounds.max_weight_denominator);
    let fast = (paths.simplest)(&interval).map_err(|e| format!("{interval}: {e}"))?;
    let den = i64::try_from(fast.denom().clone()).map_err(|_| format!("{interval}: denominator overflow"))?;
    let brute = oracle_simplest_rational(&interval, den);
    if brute.as_ref() == Some(&fast) {
        Ok(())
    } else {
        Err(format!("{interval}: fast {fast} vs oracle {brute:?}"))
    }
}

fn check_kernel_polarization(paths: &FastPaths, bounds: &InstanceBounds) -> std::result::Result<(), String> {
    let (c, p) = random_pair(bounds);
    let ctx = describe_pair(&c, &p);
    let w = (paths.kernel_polarization)(&c, &p)
        .map_err(|e| format!("{ctx}: {e}"))?
        .ok_or_else(|| format!("{ctx}: no polarization"))?;
    if let Err(v) = validate_polarization(&w) {
        return Err(format!("{ctx}: w={w} invalid: {v:?}"));
    }
    // kernel bundle straight from the sequence: rank l - n, multidegree -d
    let m = BundleData::new(p.sections - p.rank, p.multidegree.iter().map(|d| -d).collect())
        .map_err(|e| format!("{ctx}: {e}"))?;
    match strictly_satisfies(&c, &m, &w) {
        Ok(true) => Ok(()),
        Ok(false) => Err(format!("{ctx}: w={w} misses a strict inequality")),
        Err(e) => Err(format!("{ctx}: {e}")),
    }
}

fn check_kernel_identity(paths: &FastPaths, bounds: &InstanceBounds) -> std::result::Result<(), String> {
    let (c, p) = random_pair(bounds);
    let ctx = describe_pair(&c, &p);
    let m = (paths.kernel_data)(&c, &p).map_err(|e| format!("{ctx}: {e}"))?;
    let direct = total_euler(&c, &m).map_err(|e| format!("{ctx}: {e}"))?;
    let e = p.bundle().map_err(|e| format!("{ctx}: {e}"))?;
    let e_chi = total_euler(&c, &e).map_err(|e| format!("{ctx}: {e}"))?;
    let via_sequence = i64::from(p.sections) * c.structure_euler() - e_chi;
    if direct == via_sequence {
        Ok(())
    } else {
        Err(format!("{ctx}: chi(M)={direct} vs l chi(O_C) - chi(E)={via_sequence}"))
    }
}

type Outcome = [std::result::Result<(), String>; 5];

/// Checks instance `index` of the stream seeded by `config.seed`.
pub fn check_instance(paths: &FastPaths, config: &SelftestConfig, index: u64) -> Outcome {
    let bounds = config.bounds.with_seed(mix_seed(config.seed, index));
    [
        check_necessary(paths, &bounds),
        check_destabilizers(paths, &bounds),
        check_simplest(paths, &bounds),
        check_kernel_polarization(paths, &bounds),
        check_kernel_identity(paths, &bounds),
    ]
}

fn outcomes(paths: &FastPaths, config: &SelftestConfig, execution: Execution) -> Vec<Outcome> {
    #[cfg(feature = "parallel")]
    if execution == Execution::Parallel {
        use rayon::prelude::*;
        return (0..config.count)
            .into_par_iter()
            .map(|i| check_instance(paths, config, i))
            .collect();
    }
    let _ = execution;
    (0..config.count).map(|i| check_instance(paths, config, i)).collect()
}

pub fn run_selftest(config: &SelftestConfig, execution: Execution) -> Result<SelftestReport> {
    run_selftest_with(&FastPaths::default(), config, execution)
}

pub fn run_selftest_with(paths: &FastPaths, config: &SelftestConfig, execution: Execution) -> Result<SelftestReport> {
    config.bounds.validate()?;
    let mut suites: Vec<SuiteTally> = Suite::ALL
        .iter()
        .map(|&suite| SuiteTally {
            suite,
            agreements: 0,
            checked: 0,
        })
        .collect();
    let mut agreements = 0;
    let mut first_counterexample = None;
    for (index, outcome) in (0u64..).zip(outcomes(paths, config, execution)) {
        let mut all = true;
        for (tally, result) in suites.iter_mut().zip(outcome) {
            tally.checked += 1;
            match result {
                Ok(()) => tally.agreements += 1,
                Err(detail) => {
                    all = false;
                    if first_counterexample.is_none() {
                        first_counterexample = Some(Counterexample {
                            suite: tally.suite,
                            index,
                            instance_seed: mix_seed(config.seed, index),
                            detail,
                        });
                    }
                }
            }
        }
        agreements += u64::from(all);
    }
    Ok(SelftestReport {
        seed: config.seed,
        count: config.count,
        suites,
        agreements,
        first_counterexample,
    })
}
