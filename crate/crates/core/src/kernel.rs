//! Kernel bundles of generated pairs on a comb.
//!
//! A generated pair `(E, V)` has kernel bundle `M` of rank `m = l - n` and
//! multidegree `(-d_1, .., -d_N)`. The dimension `k_j` of the kernel of the
//! restriction map `V -> H^0(E_j)` cannot be read off the numerical data, so
//! it is supplied by the caller together with the assumption flags that
//! gate the conditional statements.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{component_euler, eulers, total_euler, BundleData, CombCurve, Polarization, SubsheafProfile};
use crate::polarization::{strictly_satisfies, synthesize_polarization};
use crate::rational::Rational;
use crate::restriction::euclidean_remainder;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Assumptions {
    #[serde(default)]
    pub general_linear_series: bool,
    #[serde(default)]
    pub butler_conjecture: bool,
    #[serde(default)]
    pub components_general_in_moduli: bool,
}

/// Numerical shadow of a generated pair `(E, V)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratedPairData {
    pub rank: u32,
    pub sections: u32,
    pub multidegree: Vec<i64>,
    pub kernel_dims: Vec<u32>,
    pub assumptions: Assumptions,
}

impl GeneratedPairData {
    /// `m = l - n`, the rank of the kernel bundle.
    pub fn kernel_rank(&self) -> i64 {
        i64::from(self.sections) - i64::from(self.rank)
    }

    pub fn bundle(&self) -> Result<BundleData> {
        BundleData::new(self.rank, self.multidegree.clone())
    }

    /// Teeth `j < N` with a nonzero restriction kernel.
    pub fn kernel_teeth(&self) -> impl Iterator<Item = usize> + '_ {
        let teeth = self.kernel_dims.len().saturating_sub(1);
        self.kernel_dims[..teeth]
            .iter()
            .enumerate()
            .filter(|(_, &k)| k > 0)
            .map(|(i, _)| i + 1)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum PairViolation {
    LengthMismatch { what: String, expected: usize, found: usize },
    TooFewSections { sections: u32, rank: u32 },
    GenusBelowTwo { j: usize, genus: u32 },
    NegativeDegree { j: usize, degree: i64 },
    /// `0 < d_j < (l - k_j) - n`: a globally generated bundle cannot carry
    /// that many independent sections.
    DegreeBound { j: usize, degree: i64, bound: i64 },
    /// A globally generated bundle of degree 1 forces a rational component.
    DegreeOne { j: usize },
    /// `V_j` must have dimension at least `n` to generate `E_j`.
    KernelTooLarge { j: usize, kernel: u32, max: i64 },
}

impl fmt::Display for PairViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::LengthMismatch { what, expected, found } => {
                write!(f, "{what} has {found} entries, expected {expected}")
            }
            Self::TooFewSections { sections, rank } => {
                write!(f, "section space dimension l = {sections} must exceed the rank n = {rank}")
            }
            Self::GenusBelowTwo { j, genus } => write!(f, "g_{j} = {genus} < 2"),
            Self::NegativeDegree { j, degree } => write!(f, "d_{j} = {degree} < 0"),
            Self::DegreeBound { j, degree, bound } => write!(
                f,
                "d_{j} = {degree} is below the degree bound {bound} for a globally generated bundle with that many sections"
            ),
            Self::DegreeOne { j } => write!(
                f,
                "d_{j} = 1 is impossible for a globally generated bundle on a curve of genus >= 2"
            ),
            Self::KernelTooLarge { j, kernel, max } => {
                write!(f, "k_{j} = {kernel} exceeds l - n = {max}")
            }
        }
    }
}

/// Reports every numerical inconsistency of the pair.
pub fn validate_pair(curve: &CombCurve, pair: &GeneratedPairData) -> std::result::Result<(), Vec<PairViolation>> {
    let mut violations = Vec::new();
    let expected = curve.components();
    for (what, found) in [
        ("multidegree", pair.multidegree.len()),
        ("kernel_dims", pair.kernel_dims.len()),
    ] {
        if found != expected {
            violations.push(PairViolation::LengthMismatch {
                what: what.to_string(),
                expected,
                found,
            });
        }
    }
    if !violations.is_empty() {
        return Err(violations);
    }
    let n = i64::from(pair.rank);
    let l = i64::from(pair.sections);
    if pair.sections <= pair.rank {
        violations.push(PairViolation::TooFewSections {
            sections: pair.sections,
            rank: pair.rank,
        });
    }
    for j in 1..=expected {
        let g = curve.genus(j);
        let d = pair.multidegree[j - 1];
        let k = pair.kernel_dims[j - 1];
        if g < 2 {
            violations.push(PairViolation::GenusBelowTwo { j, genus: g });
        }
        if d < 0 {
            violations.push(PairViolation::NegativeDegree { j, degree: d });
        }
        if pair.sections > pair.rank && i64::from(k) > l - n {
            violations.push(PairViolation::KernelTooLarge {
                j,
                kernel: k,
                max: l - n,
            });
        }
        let bound = (l - i64::from(k)) - n;
        if d > 0 && d < bound {
            violations.push(PairViolation::DegreeBound { j, degree: d, bound });
        }
        if d == 1 && g >= 2 && pair.rank >= 1 {
            violations.push(PairViolation::DegreeOne { j });
        }
    }
    if violations.is_empty() {
        Ok(())
    } else {
        Err(violations)
    }
}

fn require_valid(curve: &CombCurve, pair: &GeneratedPairData) -> Result<()> {
    validate_pair(curve, pair).map_err(Error::InvalidPair)
}

/// `chi(M)` through the defining sequence `0 -> M -> V ⊗ O_C -> E -> 0`:
/// `chi(M) = l chi(O_C) - chi(E)`.
pub fn kernel_euler_from_sequence(curve: &CombCurve, pair: &GeneratedPairData) -> Result<i64> {
    let e = pair.bundle()?;
    Ok(i64::from(pair.sections) * curve.structure_euler() - total_euler(curve, &e)?)
}

/// Rank `l - n` and multidegree `-d` of the kernel bundle.
pub fn kernel_data(curve: &CombCurve, pair: &GeneratedPairData) -> Result<BundleData> {
    require_valid(curve, pair)?;
    let m = u32::try_from(pair.kernel_rank()).expect("validated l > n");
    let kernel = BundleData::new(m, pair.multidegree.iter().map(|d| -d).collect())?;
    let via_components = total_euler(curve, &kernel)?;
    let via_sequence = kernel_euler_from_sequence(curve, pair)?;
    if via_components != via_sequence {
        return Err(Error::Domain(format!(
            "kernel Euler characteristic mismatch: {via_components} vs {via_sequence}"
        )));
    }
    Ok(kernel)
}

/// Why a restriction `M ⊗ O_{C_j}` is or is not shown unstable.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum RestrictionInstability {
    /// The trivial subbundle `ker ⊗ O_{C_j}` (slope 0) beats `-d_j / m`.
    Unstable {
        witness: SubsheafProfile,
        witness_slope: Rational,
        restriction_slope: Rational,
    },
    NoKernel,
    /// `d_j = 0`: both slopes are 0 and the comparison is not strict.
    SlopeTie,
}

impl RestrictionInstability {
    pub fn witness(&self) -> Option<&SubsheafProfile> {
        match self {
            Self::Unstable { witness, .. } => Some(witness),
            _ => None,
        }
    }
}

pub fn restriction_unstable(curve: &CombCurve, pair: &GeneratedPairData, j: usize) -> Result<RestrictionInstability> {
    require_valid(curve, pair)?;
    if j == 0 || j > curve.components() {
        return Err(Error::IndexOutOfRange {
            j,
            max: curve.components(),
        });
    }
    let k = pair.kernel_dims[j - 1];
    let d = pair.multidegree[j - 1];
    if k == 0 {
        return Ok(RestrictionInstability::NoKernel);
    }
    if d == 0 {
        return Ok(RestrictionInstability::SlopeTie);
    }
    let mut multirank = vec![0; curve.components()];
    multirank[j - 1] = k;
    Ok(RestrictionInstability::Unstable {
        witness: SubsheafProfile {
            multirank,
            euler: component_euler(curve.genus(j), k, 0),
            label: format!("trivial-kernel-part_{j}"),
        },
        witness_slope: Rational::zero(),
        restriction_slope: Rational::new(-d, pair.kernel_rank()),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum StrongUnstability {
    StronglyUnstable,
    NotDetermined,
    NoKernelObstruction,
}

/// Which argument produced a strong-unstability verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Branch {
    /// `m = 2`: the forced line subbundle would need `d_j = 1`.
    RankTwo,
    /// `m > 2` and `d_j != m - r_j`.
    DegreeAvoidsGap,
    /// `m | chi_j`: no kernel is compatible with w-semistability.
    DivisibleEuler,
    /// `m > 2` and `d_j = m - r_j` with `r_j > 0`.
    DegreeGap,
    /// `m = 1` is not covered by the criteria.
    RankOne,
    NoKernel,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrongUnstabilityVerdict {
    pub verdict: StrongUnstability,
    pub branch: Branch,
    pub triggering_j: Option<usize>,
    pub reason: String,
    pub notes: Vec<String>,
}

/// Per-tooth data `(chi_j(M), r_j)` with `r_j` the Euclidean remainder mod `m`.
fn kernel_tooth(curve: &CombCurve, pair: &GeneratedPairData, j: usize) -> (i64, i64) {
    let m = pair.kernel_rank();
    let chi_j = -pair.multidegree[j - 1] + m * (1 - i64::from(curve.genus(j)));
    (chi_j, euclidean_remainder(chi_j, m))
}

/// Decides strong unstability from the restriction kernels.
pub fn strong_unstability(curve: &CombCurve, pair: &GeneratedPairData) -> Result<StrongUnstabilityVerdict> {
    require_valid(curve, pair)?;
    let m = pair.kernel_rank();
    if pair.kernel_dims.iter().all(|&k| k == 0) {
        return Ok(StrongUnstabilityVerdict {
            verdict: StrongUnstability::NoKernelObstruction,
            branch: Branch::NoKernel,
            triggering_j: None,
            reason: "every restriction map is injective on V".into(),
            notes: Vec::new(),
        });
    }
    let teeth: Vec<usize> = pair.kernel_teeth().collect();
    if teeth.is_empty() {
        // a kernel on the spine forces one on some tooth
        return Err(Error::InconsistentKernelDims);
    }
    let mut notes = Vec::new();
    if m == 1 {
        return Ok(StrongUnstabilityVerdict {
            verdict: StrongUnstability::NotDetermined,
            branch: Branch::RankOne,
            triggering_j: None,
            reason: "the kernel bundle has rank 1; the restriction criteria need rank >= 2".into(),
            notes,
        });
    }
    if m == 2 {
        let j = teeth[0];
        return Ok(StrongUnstabilityVerdict {
            verdict: StrongUnstability::StronglyUnstable,
            branch: Branch::RankTwo,
            triggering_j: Some(j),
            reason: format!(
                "rank-2 kernel with k_{j} > 0: the only admissible destabilizing line subbundle would force d_{j} = 1"
            ),
            notes,
        });
    }
    let mut first_trigger: Option<(usize, Branch, String)> = None;
    for &j in &teeth {
        let (chi_j, r) = kernel_tooth(curve, pair, j);
        let d = pair.multidegree[j - 1];
        let branch = if r == 0 {
            if d == m {
                notes.push(format!(
                    "j={j}: r_{j} = 0 and d_{j} = m = {m}; read without the r_j > 0 requirement this is the gap case, \
                     but m | chi_{j} already rules out a kernel under w-semistability"
                ));
            } else {
                notes.push(format!("j={j}: r_{j} = 0, so the divisibility argument applies"));
            }
            Some((
                Branch::DivisibleEuler,
                format!("m = {m} divides chi_{j} = {chi_j} while k_{j} > 0, which no w-semistable kernel allows"),
            ))
        } else if d != m - r {
            Some((
                Branch::DegreeAvoidsGap,
                format!(
                    "m = {m}, k_{j} > 0, chi_{j} = {chi_j} has r_{j} = {r} and d_{j} = {d} != m - r_{j} = {}",
                    m - r
                ),
            ))
        } else {
            notes.push(format!("j={j}: d_{j} = m - r_{j} = {d} (gap case)"));
            None
        };
        if first_trigger.is_none() {
            if let Some((b, reason)) = branch {
                first_trigger = Some((j, b, reason));
            }
        }
    }
    Ok(match first_trigger {
        Some((j, branch, reason)) => StrongUnstabilityVerdict {
            verdict: StrongUnstability::StronglyUnstable,
            branch,
            triggering_j: Some(j),
            reason,
            notes,
        },
        None => StrongUnstabilityVerdict {
            verdict: StrongUnstability::NotDetermined,
            branch: Branch::DegreeGap,
            triggering_j: None,
            reason: format!("every tooth with a kernel has d_j = m - r_j (m = {m})"),
            notes,
        },
    })
}

/// A polarization making the kernel bundle satisfy the strict tooth
/// inequalities. Always present for valid pairs, since all `chi_j(M) < 0`.
pub fn kernel_polarization(curve: &CombCurve, pair: &GeneratedPairData) -> Result<Option<Polarization>> {
    let kernel = kernel_data(curve, pair)?;
    let w = synthesize_polarization(curve, &kernel)?;
    if let Some(w) = &w {
        debug_assert!(strictly_satisfies(curve, &kernel, w)?);
    }
    Ok(w)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Characterization {
    /// All restriction kernels vanish and the assumptions make every
    /// restriction semistable, so `M` is w-semistable for the attached `w`.
    ExistsSemistablePolarization { polarization: Polarization },
    StronglyUnstable { j: usize, branch: Branch, reason: String },
    /// `m | d_j` for every component, which is incompatible with a nonzero
    /// restriction kernel on a w-semistable `M`.
    DivisibilityContradiction { reason: String },
    NotDetermined { reason: String },
    /// The verdict depends on an assumption that was not granted.
    Conditional {
        unmet: String,
        candidate: Option<Polarization>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KernelReport {
    pub kernel: BundleData,
    pub kernel_eulers: Vec<i64>,
    pub kernel_euler: i64,
    pub instabilities: Vec<RestrictionInstability>,
    pub strong: StrongUnstabilityVerdict,
    pub characterization: Characterization,
}

/// Combines the kernel results into an iff-style verdict, gated by the
/// assumption flags.
pub fn characterize(curve: &CombCurve, pair: &GeneratedPairData) -> Result<Characterization> {
    require_valid(curve, pair)?;
    let m = pair.kernel_rank();
    let a = pair.assumptions;
    if pair.kernel_dims.iter().all(|&k| k == 0) {
        let candidate = kernel_polarization(curve, pair)?;
        let mut unmet = Vec::new();
        if !a.components_general_in_moduli {
            unmet.push("components general in their moduli spaces");
        }
        if pair.rank == 1 && !a.general_linear_series {
            unmet.push("general linear series on every component (rank-1 sufficiency)");
        }
        if pair.rank >= 2 && !a.butler_conjecture {
            unmet.push("Butler's conjecture required for rank >= 2 sufficiency");
        }
        return Ok(match (unmet.is_empty(), candidate) {
            (true, Some(polarization)) => Characterization::ExistsSemistablePolarization { polarization },
            (true, None) => Characterization::NotDetermined {
                reason: "no polarization satisfies the strict tooth inequalities".into(),
            },
            (false, candidate) => Characterization::Conditional {
                unmet: unmet.join("; "),
                candidate,
            },
        });
    }
    if m > 2 && pair.multidegree.iter().all(|d| d % m == 0) {
        return Ok(Characterization::DivisibilityContradiction {
            reason: format!(
                "m = {m} divides every d_j and every m(1 - g_j), hence every chi_j; a nonzero restriction kernel is then impossible for a w-semistable kernel bundle"
            ),
        });
    }
    let strong = strong_unstability(curve, pair)?;
    Ok(match strong.verdict {
        StrongUnstability::StronglyUnstable => Characterization::StronglyUnstable {
            j: strong.triggering_j.expect("triggering tooth"),
            branch: strong.branch,
            reason: strong.reason,
        },
        _ => Characterization::NotDetermined {
            reason: strong.reason,
        },
    })
}

/// Everything known about the kernel bundle of `pair`.
pub fn kernel_report(curve: &CombCurve, pair: &GeneratedPairData) -> Result<KernelReport> {
    let kernel = kernel_data(curve, pair)?;
    let (kernel_eulers, kernel_euler) = eulers(curve, &kernel)?;
    let instabilities = (1..=curve.components())
        .map(|j| restriction_unstable(curve, pair, j))
        .collect::<Result<Vec<_>>>()?;
    Ok(KernelReport {
        kernel,
        kernel_eulers,
        kernel_euler,
        instabilities,
        strong: strong_unstability(curve, pair)?,
        characterization: characterize(curve, pair)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(p: i64, d: i64) -> Rational {
        Rational::new(p, d)
    }

    fn curve(g: &[u32]) -> CombCurve {
        CombCurve::new(g.to_vec()).unwrap()
    }

    fn pair(n: u32, l: u32, d: &[i64], k: &[u32]) -> GeneratedPairData {
        GeneratedPairData {
            rank: n,
            sections: l,
            multidegree: d.to_vec(),
            kernel_dims: k.to_vec(),
            assumptions: Assumptions::default(),
        }
    }

    fn all_flags(mut p: GeneratedPairData) -> GeneratedPairData {
        p.assumptions = Assumptions {
            general_linear_series: true,
            butler_conjecture: true,
            components_general_in_moduli: true,
        };
        p
    }

    #[test]
    fn validate_examples() {
        assert!(validate_pair(&curve(&[2, 2]), &pair(1, 3, &[3, 3], &[0, 0])).is_ok());
        let v = validate_pair(&curve(&[2, 2]), &pair(1, 3, &[1, 3], &[0, 0])).unwrap_err();
        assert!(v.contains(&PairViolation::DegreeOne { j: 1 }));
        assert!(validate_pair(&curve(&[2, 2]), &pair(2, 5, &[2, 4], &[1, 0])).is_ok());
    }

    #[test]
    fn validate_flags_every_problem() {
        let v = validate_pair(&curve(&[1, 2]), &pair(2, 2, &[-1, 0], &[0, 0])).unwrap_err();
        assert!(v.contains(&PairViolation::TooFewSections { sections: 2, rank: 2 }));
        assert!(v.contains(&PairViolation::GenusBelowTwo { j: 1, genus: 1 }));
        assert!(v.contains(&PairViolation::NegativeDegree { j: 1, degree: -1 }));

        // n = 1, l = 5: d_1 = 2 < 5 - 1 = 4
        let v = validate_pair(&curve(&[2, 2]), &pair(1, 5, &[2, 4], &[0, 0])).unwrap_err();
        assert_eq!(v, vec![PairViolation::DegreeBound { j: 1, degree: 2, bound: 4 }]);

        let v = validate_pair(&curve(&[2, 2]), &pair(1, 3, &[3], &[0, 0])).unwrap_err();
        assert!(matches!(v[0], PairViolation::LengthMismatch { .. }));

        let v = validate_pair(&curve(&[2, 2]), &pair(1, 3, &[3, 3], &[3, 0])).unwrap_err();
        assert!(v.contains(&PairViolation::KernelTooLarge { j: 1, kernel: 3, max: 2 }));
    }

    #[test]
    fn kernel_data_examples() {
        let c = curve(&[2, 2, 2]);
        let p = pair(1, 3, &[3, 3, 3], &[0, 0, 0]);
        let m = kernel_data(&c, &p).unwrap();
        assert_eq!(m.rank, 2);
        assert_eq!(m.multidegree, vec![-3, -3, -3]);
        assert_eq!(eulers(&c, &m).unwrap(), (vec![-5, -5, -5], -19));
        // 3 * chi(O_C) - chi(E) = 3 * (-5) - 4
        assert_eq!(kernel_euler_from_sequence(&c, &p).unwrap(), -19);

        let c = curve(&[2, 3]);
        let m = kernel_data(&c, &pair(1, 4, &[4, 5], &[0, 0])).unwrap();
        assert_eq!(m.rank, 3);
        assert_eq!(eulers(&c, &m).unwrap(), (vec![-7, -11], -21));

        let c = curve(&[2, 4]);
        let m = kernel_data(&c, &pair(2, 4, &[0, 0], &[2, 2])).unwrap();
        assert_eq!(m.component_eulers(&c).unwrap(), vec![-2, -6]);
    }

    #[test]
    fn restriction_instability_examples() {
        let c = curve(&[2, 2]);
        let p = pair(1, 3, &[3, 3], &[1, 0]);
        match restriction_unstable(&c, &p, 1).unwrap() {
            RestrictionInstability::Unstable {
                witness,
                witness_slope,
                restriction_slope,
            } => {
                assert_eq!(witness.multirank, vec![1, 0]);
                assert_eq!(witness.euler, -1);
                assert_eq!(witness_slope, Rational::zero());
                assert_eq!(restriction_slope, q(-3, 2));
            }
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(restriction_unstable(&c, &p, 2).unwrap(), RestrictionInstability::NoKernel);

        let c = curve(&[2, 4]);
        let p = pair(2, 4, &[0, 0], &[2, 2]);
        assert_eq!(restriction_unstable(&c, &p, 1).unwrap(), RestrictionInstability::SlopeTie);
    }

    #[test]
    fn strong_unstability_rank_two() {
        let c = curve(&[2, 2, 2]);
        let v = strong_unstability(&c, &pair(1, 3, &[3, 3, 3], &[1, 0, 0])).unwrap();
        assert_eq!(v.verdict, StrongUnstability::StronglyUnstable);
        assert_eq!(v.branch, Branch::RankTwo);
        assert_eq!(v.triggering_j, Some(1));
    }

    #[test]
    fn strong_unstability_rank_three() {
        let c = curve(&[2, 3]);
        let v = strong_unstability(&c, &pair(1, 4, &[4, 5], &[1, 0])).unwrap();
        assert_eq!(v.verdict, StrongUnstability::StronglyUnstable);
        assert_eq!(v.branch, Branch::DegreeAvoidsGap);
        assert!(v.reason.contains("r_1 = 2"));

        let v = strong_unstability(&c, &pair(1, 4, &[2, 5], &[1, 0])).unwrap();
        assert_eq!(v.verdict, StrongUnstability::NotDetermined);
        assert_eq!(v.branch, Branch::DegreeGap);
    }

    #[test]
    fn strong_unstability_divisible_euler() {
        // m = 3, d_1 = 3: chi_1 = -3 - 3 = -6, r_1 = 0
        let c = curve(&[2, 2]);
        let v = strong_unstability(&c, &pair(1, 4, &[3, 6], &[1, 0])).unwrap();
        assert_eq!(v.verdict, StrongUnstability::StronglyUnstable);
        assert_eq!(v.branch, Branch::DivisibleEuler);
        assert!(v.notes.iter().any(|n| n.contains("gap case")));
    }

    #[test]
    fn strong_unstability_without_kernels_and_inconsistent_input() {
        let c = curve(&[2, 2]);
        let v = strong_unstability(&c, &pair(1, 4, &[4, 5], &[0, 0])).unwrap();
        assert_eq!(v.verdict, StrongUnstability::NoKernelObstruction);
        assert_eq!(
            strong_unstability(&c, &pair(1, 4, &[4, 5], &[0, 1])),
            Err(Error::InconsistentKernelDims)
        );
    }

    #[test]
    fn kernel_polarization_examples() {
        let c = curve(&[2, 2, 2]);
        let w = kernel_polarization(&c, &pair(1, 3, &[3, 3, 3], &[0, 0, 0])).unwrap().unwrap();
        assert_eq!(w.weights, vec![q(1, 3), q(1, 3), q(1, 3)]);
        // -19/3 < -5 < -13/3
        let m = kernel_data(&c, &pair(1, 3, &[3, 3, 3], &[0, 0, 0])).unwrap();
        assert!(strictly_satisfies(&c, &m, &w).unwrap());

        let c = curve(&[2, 2]);
        let w = kernel_polarization(&c, &pair(1, 3, &[3, 3], &[0, 0])).unwrap().unwrap();
        assert_eq!(w.weights, vec![q(1, 2), q(1, 2)]);
    }

    #[test]
    fn characterize_examples() {
        let c = curve(&[2, 2]);
        let p = all_flags(pair(1, 3, &[3, 3], &[0, 0]));
        assert_eq!(
            characterize(&c, &p).unwrap(),
            Characterization::ExistsSemistablePolarization {
                polarization: Polarization::new(vec![q(1, 2), q(1, 2)])
            }
        );

        let c = curve(&[2, 3]);
        let p = pair(1, 4, &[4, 5], &[1, 0]);
        assert!(matches!(
            characterize(&c, &p).unwrap(),
            Characterization::StronglyUnstable { j: 1, branch: Branch::DegreeAvoidsGap, .. }
        ));

        let c = curve(&[2, 2]);
        let mut p = pair(2, 5, &[3, 3], &[0, 0]);
        p.assumptions.components_general_in_moduli = true;
        match characterize(&c, &p).unwrap() {
            Characterization::Conditional { unmet, candidate } => {
                assert_eq!(unmet, "Butler's conjecture required for rank >= 2 sufficiency");
                assert!(candidate.is_some());
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn characterize_divisibility_contradiction() {
        // m = 3 divides d = (3, 6)
        let c = curve(&[2, 2]);
        let p = pair(1, 4, &[3, 6], &[1, 0]);
        assert!(matches!(
            characterize(&c, &p).unwrap(),
            Characterization::DivisibilityContradiction { .. }
        ));
    }

    #[test]
    fn characterize_rank_two_converse() {
        let c = curve(&[2, 2, 2]);
        let p = all_flags(pair(1, 3, &[3, 3, 3], &[0, 1, 0]));
        assert!(matches!(
            characterize(&c, &p).unwrap(),
            Characterization::StronglyUnstable { j: 2, branch: Branch::RankTwo, .. }
        ));
    }
}
