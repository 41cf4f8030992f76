//! Necessary inequalities for w-semistability on a comb, their witnesses,
//! the region of admissible polarizations and a constructive picker.
//!
//! For a tooth `C_j` (`j < N`) a w-semistable bundle satisfies
//! `w_j chi <= chi_j <= w_j chi + n`. Each side comes with a subsheaf that
//! breaks semistability when the side fails:
//!
//! * `E_j(-p_j)`: rank `n` on `C_j` only, Euler characteristic `chi_j - n`;
//!   its slope exceeds `chi / n` exactly when the upper bound fails.
//! * `tilde-E_j`: rank `n` away from `C_j`, Euler characteristic
//!   `chi - chi_j`; its slope exceeds `chi / n` exactly when the lower bound
//!   fails.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interval::{pick_simplest_rational, Endpoint, IntervalQ};
use crate::model::{eulers, slope, BundleData, CombCurve, Polarization, SubsheafProfile};
use crate::rational::Rational;

/// The two subsheaves attached to tooth `j`: `(E_j(-p_j), tilde-E_j)`.
pub fn canonical_witnesses(
    curve: &CombCurve,
    bundle: &BundleData,
    j: usize,
) -> Result<(SubsheafProfile, SubsheafProfile)> {
    curve.check_tooth(j)?;
    let (parts, chi) = eulers(curve, bundle)?;
    let n = bundle.rank;
    let chi_j = parts[j - 1];
    let mut twisted = vec![0; curve.components()];
    twisted[j - 1] = n;
    let mut complement = vec![n; curve.components()];
    complement[j - 1] = 0;
    Ok((
        SubsheafProfile {
            multirank: twisted,
            euler: chi_j - i64::from(n),
            label: format!("E_{j}(-p_{j})"),
        },
        SubsheafProfile {
            multirank: complement,
            euler: chi - chi_j,
            label: format!("tilde-E_{j}"),
        },
    ))
}

/// Outcome of the two inequalities at one tooth.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ToothCheck {
    pub j: usize,
    pub lower_ok: bool,
    pub upper_ok: bool,
    pub witness: Option<SubsheafProfile>,
    pub witness_slope: Option<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NecessaryVerdict {
    pub components: Vec<ToothCheck>,
    pub overall_pass: bool,
    /// `chi / n`, the slope every witness is compared against.
    pub bundle_slope: Rational,
}

impl NecessaryVerdict {
    pub fn failures(&self) -> impl Iterator<Item = &ToothCheck> {
        self.components
            .iter()
            .filter(|c| !(c.lower_ok && c.upper_ok))
    }
}

/// Tests `w_j chi <= chi_j <= w_j chi + n` for every tooth and attaches a
/// destabilizing witness to each failure.
pub fn necessary_check(
    curve: &CombCurve,
    bundle: &BundleData,
    w: &Polarization,
) -> Result<NecessaryVerdict> {
    w.check_for(curve)?;
    let (parts, chi) = eulers(curve, bundle)?;
    let n = i64::from(bundle.rank);
    let mut components = Vec::with_capacity(curve.teeth());
    for j in 1..=curve.teeth() {
        let w_chi = w.weight(j) * chi;
        let chi_j = parts[j - 1];
        let lower_ok = w_chi.cmp_int(chi_j).is_le();
        let upper_ok = (&w_chi + n).cmp_int(chi_j).is_ge();
        let (twisted, complement) = canonical_witnesses(curve, bundle, j)?;
        let witness = match (lower_ok, upper_ok) {
            (true, true) => None,
            (false, _) => Some(complement),
            (_, false) => Some(twisted),
        };
        let witness_slope = witness.as_ref().map(|p| slope(p, w)).transpose()?;
        components.push(ToothCheck {
            j,
            lower_ok,
            upper_ok,
            witness,
            witness_slope,
        });
    }
    let overall_pass = components.iter().all(|c| c.lower_ok && c.upper_ok);
    Ok(NecessaryVerdict {
        components,
        overall_pass,
        bundle_slope: Rational::new(chi, n),
    })
}

/// Per-tooth sets of admissible `w_j`, and whether they can be completed to
/// a polarization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeasibleRegion {
    pub intervals: Vec<IntervalQ>,
    pub feasible: bool,
    pub strict: bool,
}

/// Solves the tooth inequalities for `w_j`, closed (`strict = false`) or
/// strict, intersected with `(0, 1)`.
///
/// The region is feasible iff every interval is non-empty and the lower
/// ends sum to less than 1: choosing each `w_j` close enough to its lower
/// end then leaves `w_N = 1 - sum w_j` in `(0, 1)`.
pub fn feasible_region(curve: &CombCurve, bundle: &BundleData, strict: bool) -> Result<FeasibleRegion> {
    let (parts, chi) = eulers(curve, bundle)?;
    let n = i64::from(bundle.rank);
    let unit = IntervalQ::unit_open();
    let intervals: Vec<IntervalQ> = parts[..curve.teeth()]
        .iter()
        .map(|&chi_j| {
            if chi == 0 {
                // w_j chi vanishes: the test no longer involves w_j
                let ok = if strict {
                    0 < chi_j && chi_j < n
                } else {
                    0 <= chi_j && chi_j <= n
                };
                return if ok { unit.clone() } else { IntervalQ::empty() };
            }
            let at_chi_j = Rational::new(chi_j, chi);
            let at_shifted = Rational::new(chi_j - n, chi);
            let raw = if chi < 0 {
                IntervalQ::between(at_chi_j, at_shifted, strict)
            } else {
                IntervalQ::between(at_shifted, at_chi_j, strict)
            };
            let clipped = raw.intersect(&unit);
            if clipped.is_empty() {
                IntervalQ::empty()
            } else {
                clipped
            }
        })
        .collect();
    let feasible = intervals.iter().all(|i| !i.is_empty()) && {
        let lows: Rational = intervals
            .iter()
            .map(|i| i.lo.value().cloned().unwrap_or_else(Rational::zero))
            .sum();
        lows.cmp_int(1).is_lt()
    };
    Ok(FeasibleRegion {
        intervals,
        feasible,
        strict,
    })
}

/// Strict version of the tooth inequalities: `w_j chi < chi_j < w_j chi + n`.
pub fn strictly_satisfies(curve: &CombCurve, bundle: &BundleData, w: &Polarization) -> Result<bool> {
    w.check_for(curve)?;
    let (parts, chi) = eulers(curve, bundle)?;
    let n = i64::from(bundle.rank);
    Ok((1..=curve.teeth()).all(|j| {
        let w_chi = w.weight(j) * chi;
        w_chi.cmp_int(parts[j - 1]).is_lt() && (&w_chi + n).cmp_int(parts[j - 1]).is_gt()
    }))
}

/// Builds a polarization satisfying the strict inequalities, if one exists.
///
/// Each `w_j` is the simplest rational of its strict interval. When those
/// choices leave no room for `w_N`, the coordinate with the widest working
/// interval has that interval halved toward its lower end and is re-picked;
/// this repeats until `sum w_j < 1`, which must happen because the lower
/// ends sum to less than 1.
pub fn synthesize_polarization(curve: &CombCurve, bundle: &BundleData) -> Result<Option<Polarization>> {
    let region = feasible_region(curve, bundle, true)?;
    if !region.feasible {
        return Ok(None);
    }
    let mut working = region.intervals.clone();
    let mut picks = working
        .iter()
        .map(pick_simplest_rational)
        .collect::<Result<Vec<_>>>()?;
    loop {
        let sum: Rational = picks.iter().sum();
        if sum.cmp_int(1).is_lt() {
            let mut weights = picks;
            weights.push(Rational::one() - sum);
            let w = Polarization::new(weights);
            debug_assert!(strictly_satisfies(curve, bundle, &w).unwrap_or(false));
            return Ok(Some(w));
        }
        let widest = working
            .iter()
            .enumerate()
            .max_by(|(ia, a), (ib, b)| a.width().cmp(&b.width()).then(ib.cmp(ia)))
            .map(|(i, _)| i)
            .expect("at least one tooth");
        let lo = working[widest].lo.value().cloned().expect("bounded");
        let hi = working[widest].hi.value().cloned().expect("bounded");
        let mid = (&lo + &hi) / 2;
        working[widest] = IntervalQ {
            lo: working[widest].lo.clone(),
            hi: Endpoint::Open(mid),
        };
        picks[widest] = pick_simplest_rational(&working[widest])?;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sufficiency {
    WSemistable,
    Unknown,
}

/// Sufficient test for w-semistability: all restrictions semistable and the
/// tooth inequalities hold. Never concludes instability.
pub fn sufficiency_verdict(
    curve: &CombCurve,
    bundle: &BundleData,
    w: &Polarization,
    components_semistable: &[bool],
) -> Result<Sufficiency> {
    curve.check_len("semistability flags", components_semistable.len())?;
    let verdict = necessary_check(curve, bundle, w)?;
    if verdict.overall_pass && components_semistable.iter().all(|&s| s) {
        Ok(Sufficiency::WSemistable)
    } else {
        Ok(Sufficiency::Unknown)
    }
}

/// Lower and upper test results at a single tooth.
pub fn tooth_inequalities(
    curve: &CombCurve,
    bundle: &BundleData,
    w: &Polarization,
    j: usize,
) -> Result<(bool, bool)> {
    curve.check_tooth(j)?;
    let v = necessary_check(curve, bundle, w)?;
    let c = &v.components[j - 1];
    Ok((c.lower_ok, c.upper_ok))
}

pub(crate) fn require_tooth_inequalities(
    curve: &CombCurve,
    bundle: &BundleData,
    w: &Polarization,
    j: usize,
) -> Result<()> {
    match tooth_inequalities(curve, bundle, w, j)? {
        (true, true) => Ok(()),
        _ => Err(Error::HypothesisRefuted { j }),
    }
}
