//! Semistability of the restrictions `E_j` of a w-semistable bundle.
//!
//! Every verdict here is conditional on `E` being w-semistable; nothing in
//! this module certifies that. What it does is turn the inequality
//! `(chi(L) - k) / (k w_j) <= chi / n`, satisfied by `L(-p_j) ⊂ E` for each
//! rank-`k` subbundle `L ⊂ E_j`, into the finite list of `(k, chi(L))`
//! values that could still destabilize `E_j`.
//!
//! When `w_j chi` is an integer no conclusion is drawn.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{eulers, BundleData, CombCurve, Polarization};
use crate::polarization::require_tooth_inequalities;
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RestrictionCase {
    /// `chi_j` sits in the top unit window below `w_j chi + n`.
    SemistableByWindow,
    /// Rank 2 with `chi_j` even.
    SemistableByParity,
    /// `n | chi_j` and the divisibility filters remove every candidate.
    SemistableByDivisibility,
    /// `n` does not divide `chi_j`, yet no candidate survives the ceiling.
    SemistableByEnumeration,
    PossiblyUnstable,
    InconclusiveIntegralWChi,
}

impl RestrictionCase {
    pub fn is_semistable(self) -> bool {
        matches!(
            self,
            Self::SemistableByWindow
                | Self::SemistableByParity
                | Self::SemistableByDivisibility
                | Self::SemistableByEnumeration
        )
    }
}

/// Numerical admissibility of a destabilizing subbundle of `E_j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Destabilizer {
    pub rank: u32,
    pub euler: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RestrictionVerdict {
    pub j: usize,
    pub case: RestrictionCase,
    pub forced_destabilizers: Vec<Destabilizer>,
    pub notes: String,
}

/// Euclidean remainder of `value` modulo `modulus`, always in `0..modulus`.
pub fn euclidean_remainder(value: i64, modulus: i64) -> i64 {
    value.rem_euclid(modulus)
}

/// `true` when a rank-`k` subbundle with Euler characteristic `chi_l` can
/// never destabilize: `n | chi_j` and `k | chi_l` force `chi_l / k <= chi_j / n`.
pub fn divisibility_exclusion(n: u32, chi_j: i64, k: u32, chi_l: i64) -> bool {
    chi_j % i64::from(n) == 0 && chi_l % i64::from(k) == 0
}

struct Tooth {
    n: i64,
    chi_j: i64,
    w_chi: Rational,
}

fn tooth(curve: &CombCurve, bundle: &BundleData, w: &Polarization, j: usize) -> Result<Tooth> {
    curve.check_tooth(j)?;
    w.check_for(curve)?;
    let (parts, chi) = eulers(curve, bundle)?;
    Ok(Tooth {
        n: i64::from(bundle.rank),
        chi_j: parts[j - 1],
        w_chi: w.weight(j) * chi,
    })
}

/// All integers `chi_l` with `chi_l / k > chi_j / n` and
/// `chi_l <= k w_j chi / n + k`, in increasing order.
pub fn destabilizer_candidates(
    curve: &CombCurve,
    bundle: &BundleData,
    w: &Polarization,
    j: usize,
    k: u32,
) -> Result<Vec<i64>> {
    if k == 0 || k >= bundle.rank {
        return Err(Error::Domain(format!(
            "subbundle rank {k} must lie in 1..={}",
            bundle.rank.saturating_sub(1)
        )));
    }
    let t = tooth(curve, bundle, w, j)?;
    let k = i64::from(k);
    let first = Rational::new(k * t.chi_j, t.n).floor() + 1;
    let ceiling = (&t.w_chi * k) / t.n + k;
    let last = ceiling.floor();
    let (first, last) = (to_i64(first)?, to_i64(last)?);
    Ok(if first > last {
        Vec::new()
    } else {
        (first..=last).collect()
    })
}

fn to_i64(x: num_bigint::BigInt) -> Result<i64> {
    i64::try_from(x).map_err(|_| Error::Domain("Euler characteristic overflows i64".into()))
}

/// The filters the rank-`n` classification applies to raw candidates.
///
/// * if `n | chi_j`, only `chi_l = k chi_j / n + a` with `1 <= a <= k - 1`
///   survive, and nothing with `k | chi_l` does;
/// * otherwise a candidate with `k | chi_l` must have
///   `chi_l / k = chi_j / n + (n - r_j) / n`, `r_j` the Euclidean remainder.
pub fn passes_rank_n_filters(n: u32, chi_j: i64, k: u32, chi_l: i64) -> bool {
    let (n, k) = (i64::from(n), i64::from(k));
    if chi_j % n == 0 {
        let a = chi_l - k * chi_j / n;
        if !(1..k).contains(&a) {
            return false;
        }
        if divisibility_exclusion(n as u32, chi_j, k as u32, chi_l) {
            return false;
        }
        true
    } else if chi_l % k == 0 {
        let r = euclidean_remainder(chi_j, n);
        // chi_l / k == (chi_j + n - r) / n
        chi_l * n == k * (chi_j + n - r)
    } else {
        true
    }
}

/// Candidates of every rank `1..n` after the rank-`n` filters.
pub fn filtered_destabilizers(
    curve: &CombCurve,
    bundle: &BundleData,
    w: &Polarization,
    j: usize,
) -> Result<Vec<Destabilizer>> {
    let (parts, _) = eulers(curve, bundle)?;
    curve.check_tooth(j)?;
    let chi_j = parts[j - 1];
    let mut out = Vec::new();
    for k in 1..bundle.rank {
        for chi_l in destabilizer_candidates(curve, bundle, w, j, k)? {
            if passes_rank_n_filters(bundle.rank, chi_j, k, chi_l) {
                out.push(Destabilizer {
                    rank: k,
                    euler: chi_l,
                });
            }
        }
    }
    Ok(out)
}

/// Rank-2 classification of `E_j`.
///
/// Fails with [`Error::HypothesisRefuted`] when the tooth inequalities do
/// not hold at `j`, since then `E` is not w-semistable and nothing follows.
pub fn classify_rank2(
    curve: &CombCurve,
    bundle: &BundleData,
    w: &Polarization,
    j: usize,
) -> Result<RestrictionVerdict> {
    if bundle.rank != 2 {
        return Err(Error::Domain(format!(
            "rank-2 classification called on a rank-{} bundle",
            bundle.rank
        )));
    }
    let t = tooth(curve, bundle, w, j)?;
    if t.w_chi.is_integer() {
        return Ok(inconclusive(j, &t.w_chi));
    }
    require_tooth_inequalities(curve, bundle, w, j)?;
    let in_window = (&t.w_chi + 1i64).cmp_int(t.chi_j).is_lt()
        && (&t.w_chi + 2i64).cmp_int(t.chi_j).is_gt();
    let verdict = if in_window {
        RestrictionVerdict {
            j,
            case: RestrictionCase::SemistableByWindow,
            forced_destabilizers: Vec::new(),
            notes: format!("w_{j} chi + 1 < chi_{j} < w_{j} chi + 2"),
        }
    } else if t.chi_j % 2 == 0 {
        RestrictionVerdict {
            j,
            case: RestrictionCase::SemistableByParity,
            forced_destabilizers: Vec::new(),
            notes: format!("chi_{j} = {} is even", t.chi_j),
        }
    } else {
        let euler = (t.chi_j + 1) / 2;
        RestrictionVerdict {
            j,
            case: RestrictionCase::PossiblyUnstable,
            forced_destabilizers: vec![Destabilizer { rank: 1, euler }],
            notes: format!(
                "chi_{j} = {} is odd; a destabilizing line subbundle must have chi = chi_{j}/2 + 1/2 = {euler}",
                t.chi_j
            ),
        }
    };
    Ok(verdict)
}

/// Rank-`n` classification of `E_j`, `n >= 2`.
pub fn classify_rankn(
    curve: &CombCurve,
    bundle: &BundleData,
    w: &Polarization,
    j: usize,
) -> Result<RestrictionVerdict> {
    if bundle.rank < 2 {
        return Err(Error::Domain("restriction classification needs rank >= 2".into()));
    }
    let t = tooth(curve, bundle, w, j)?;
    if t.w_chi.is_integer() {
        return Ok(inconclusive(j, &t.w_chi));
    }
    require_tooth_inequalities(curve, bundle, w, j)?;
    let n = t.n;
    let divides = t.chi_j % n == 0;
    let in_window = (&t.w_chi + (n - 1)).cmp_int(t.chi_j).is_lt()
        && (&t.w_chi + n).cmp_int(t.chi_j).is_gt();
    if divides && in_window {
        return Ok(RestrictionVerdict {
            j,
            case: RestrictionCase::SemistableByWindow,
            forced_destabilizers: Vec::new(),
            notes: format!("n | chi_{j} and w_{j} chi + (n-1) < chi_{j} < w_{j} chi + n"),
        });
    }
    let forced = filtered_destabilizers(curve, bundle, w, j)?;
    let r = euclidean_remainder(t.chi_j, n);
    let (case, notes) = match (forced.is_empty(), divides) {
        (false, true) => (
            RestrictionCase::PossiblyUnstable,
            format!(
                "n | chi_{j}: a destabilizing rank-k subbundle has chi = k chi_{j}/n + a with 1 <= a <= k-1"
            ),
        ),
        (false, false) => (
            RestrictionCase::PossiblyUnstable,
            format!(
                "chi_{j} = {} has remainder r_{j} = {r} mod {n}; destabilizers with k | chi(L) satisfy chi(L)/k = chi_{j}/n + (n - r_{j})/n",
                t.chi_j
            ),
        ),
        (true, true) => (
            RestrictionCase::SemistableByDivisibility,
            format!("n | chi_{j} and no candidate survives the divisibility filters"),
        ),
        (true, false) => (
            RestrictionCase::SemistableByEnumeration,
            format!("no (k, chi(L)) lies strictly above chi_{j}/n and under the ceiling"),
        ),
    };
    Ok(RestrictionVerdict {
        j,
        case,
        forced_destabilizers: forced,
        notes,
    })
}

/// Dispatches to the rank-2 or rank-`n` classifier.
pub fn classify(
    curve: &CombCurve,
    bundle: &BundleData,
    w: &Polarization,
    j: usize,
) -> Result<RestrictionVerdict> {
    if bundle.rank == 2 {
        classify_rank2(curve, bundle, w, j)
    } else {
        classify_rankn(curve, bundle, w, j)
    }
}

fn inconclusive(j: usize, w_chi: &Rational) -> RestrictionVerdict {
    RestrictionVerdict {
        j,
        case: RestrictionCase::InconclusiveIntegralWChi,
        forced_destabilizers: Vec::new(),
        notes: format!("w_{j} chi = {w_chi} is an integer; no conclusion"),
    }
}
