//! Numerical data of a comb-like curve and of bundles living on it.
//!
//! Components are numbered `1..=N` as in the mathematics: `C_N` is the spine
//! and every tooth `C_j`, `j < N`, meets the spine at a single node `p_j`.
//! All public functions taking a component index `j` use this 1-based
//! numbering.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// Euler characteristic of a rank-`rank` bundle of degree `degree` on a
/// smooth curve of genus `genus` (Riemann–Roch).
pub fn component_euler(genus: u32, rank: u32, degree: i64) -> i64 {
    degree + i64::from(rank) * (1 - i64::from(genus))
}

/// The numerical shape of a comb-like curve: one genus per component, spine last.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CombCurve {
    genera: Vec<u32>,
}

impl CombCurve {
    pub fn new(genera: Vec<u32>) -> Result<Self> {
        if genera.len() < 2 {
            return Err(Error::TooFewComponents(genera.len()));
        }
        Ok(CombCurve { genera })
    }

    pub fn genera(&self) -> &[u32] {
        &self.genera
    }

    /// Genus of component `j` (1-based).
    pub fn genus(&self, j: usize) -> u32 {
        self.genera[j - 1]
    }

    pub fn components(&self) -> usize {
        self.genera.len()
    }

    /// Number of teeth, `N - 1`; these are the components carrying constraints.
    pub fn teeth(&self) -> usize {
        self.genera.len() - 1
    }

    /// `p_a(C) = sum g_j`.
    pub fn arithmetic_genus(&self) -> i64 {
        self.genera.iter().map(|&g| i64::from(g)).sum()
    }

    /// `chi(O_C) = 1 - p_a(C)`.
    pub fn structure_euler(&self) -> i64 {
        1 - self.arithmetic_genus()
    }

    pub(crate) fn check_len(&self, what: &'static str, found: usize) -> Result<()> {
        if found != self.components() {
            return Err(Error::LengthMismatch {
                what,
                expected: self.components(),
                found,
            });
        }
        Ok(())
    }

    pub(crate) fn check_tooth(&self, j: usize) -> Result<()> {
        if j == 0 || j > self.teeth() {
            return Err(Error::IndexOutOfRange {
                j,
                max: self.teeth(),
            });
        }
        Ok(())
    }
}

/// Rank and multidegree of a vector bundle on the comb.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BundleData {
    pub rank: u32,
    pub multidegree: Vec<i64>,
}

impl BundleData {
    pub fn new(rank: u32, multidegree: Vec<i64>) -> Result<Self> {
        if rank == 0 {
            return Err(Error::ZeroRank);
        }
        Ok(BundleData { rank, multidegree })
    }

    /// Recovers degrees from per-component Euler characteristics.
    pub fn from_eulers(curve: &CombCurve, rank: u32, eulers: &[i64]) -> Result<Self> {
        curve.check_len("euler list", eulers.len())?;
        let multidegree = curve
            .genera()
            .iter()
            .zip(eulers)
            .map(|(&g, &chi)| chi - component_euler(g, rank, 0))
            .collect();
        BundleData::new(rank, multidegree)
    }

    fn check(&self, curve: &CombCurve) -> Result<()> {
        if self.rank == 0 {
            return Err(Error::ZeroRank);
        }
        curve.check_len("multidegree", self.multidegree.len())
    }

    /// `chi_j = d_j + n(1 - g_j)` for every component.
    pub fn component_eulers(&self, curve: &CombCurve) -> Result<Vec<i64>> {
        self.check(curve)?;
        Ok(curve
            .genera()
            .iter()
            .zip(&self.multidegree)
            .map(|(&g, &d)| component_euler(g, self.rank, d))
            .collect())
    }

    pub fn total_degree(&self) -> i64 {
        self.multidegree.iter().sum()
    }
}

/// `chi(E) = sum chi(E_j) - n(N - 1)`.
pub fn total_euler(curve: &CombCurve, bundle: &BundleData) -> Result<i64> {
    let eulers = bundle.component_eulers(curve)?;
    let n = i64::from(bundle.rank);
    let nodes = curve.teeth() as i64;
    Ok(eulers.iter().sum::<i64>() - n * nodes)
}

/// Both Euler characteristics at once: `(chi_j for all j, chi)`.
pub fn eulers(curve: &CombCurve, bundle: &BundleData) -> Result<(Vec<i64>, i64)> {
    let parts = bundle.component_eulers(curve)?;
    let total = parts.iter().sum::<i64>() - i64::from(bundle.rank) * curve.teeth() as i64;
    Ok((parts, total))
}

/// Component weights `w_1..w_N`. May hold invalid data; see [`validate_polarization`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Polarization {
    pub weights: Vec<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PolarizationViolation {
    TooFewWeights(usize),
    NotPositive { j: usize, value: Rational },
    NotBelowOne { j: usize, value: Rational },
    SumNotOne { sum: Rational },
}

impl fmt::Display for PolarizationViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::TooFewWeights(n) => write!(f, "need at least 2 weights, got {n}"),
            Self::NotPositive { j, value } => write!(f, "w_{j} = {value} is not > 0"),
            Self::NotBelowOne { j, value } => write!(f, "w_{j} = {value} is not < 1"),
            Self::SumNotOne { sum } => write!(f, "weights sum to {sum}, not 1"),
        }
    }
}

impl Polarization {
    pub fn new(weights: Vec<Rational>) -> Self {
        Polarization { weights }
    }

    /// Builds and validates in one step.
    pub fn checked(weights: Vec<Rational>) -> Result<Self> {
        let w = Polarization { weights };
        validate_polarization(&w).map_err(Error::InvalidPolarization)?;
        Ok(w)
    }

    /// Weight of component `j` (1-based).
    pub fn weight(&self, j: usize) -> &Rational {
        &self.weights[j - 1]
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub(crate) fn check_for(&self, curve: &CombCurve) -> Result<()> {
        curve.check_len("polarization", self.weights.len())?;
        validate_polarization(self).map_err(Error::InvalidPolarization)
    }
}

impl fmt::Display for Polarization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, w) in self.weights.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{w}")?;
        }
        write!(f, ")")
    }
}

/// Reports every violated polarization constraint.
pub fn validate_polarization(
    w: &Polarization,
) -> std::result::Result<(), Vec<PolarizationViolation>> {
    let mut violations = Vec::new();
    if w.weights.len() < 2 {
        violations.push(PolarizationViolation::TooFewWeights(w.weights.len()));
    }
    for (i, value) in w.weights.iter().enumerate() {
        let j = i + 1;
        if !value.is_positive() {
            violations.push(PolarizationViolation::NotPositive {
                j,
                value: value.clone(),
            });
        }
        if value.cmp_int(1).is_ge() {
            violations.push(PolarizationViolation::NotBelowOne {
                j,
                value: value.clone(),
            });
        }
    }
    let sum: Rational = w.weights.iter().sum();
    if sum != Rational::one() {
        violations.push(PolarizationViolation::SumNotOne { sum });
    }
    if violations.is_empty() {
        Ok(())
    } else {
        Err(violations)
    }
}

/// Multirank and Euler characteristic of a (candidate) subsheaf.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubsheafProfile {
    pub multirank: Vec<u32>,
    pub euler: i64,
    pub label: String,
}

impl SubsheafProfile {
    /// The whole bundle viewed as a profile of itself.
    pub fn full(curve: &CombCurve, bundle: &BundleData) -> Result<Self> {
        Ok(SubsheafProfile {
            multirank: vec![bundle.rank; curve.components()],
            euler: total_euler(curve, bundle)?,
            label: "E".to_string(),
        })
    }

    /// Checks the profile fits inside a rank-`rank` bundle on `curve`.
    pub fn check_within(&self, curve: &CombCurve, rank: u32) -> Result<()> {
        curve.check_len("multirank", self.multirank.len())?;
        if self.multirank.iter().all(|&r| r == 0) {
            return Err(Error::Domain("multirank is identically zero".into()));
        }
        if let Some(j) = self.multirank.iter().position(|&r| r > rank) {
            return Err(Error::Domain(format!(
                "multirank entry r_{} = {} exceeds the bundle rank {rank}",
                j + 1,
                self.multirank[j]
            )));
        }
        Ok(())
    }
}

/// Polarized slope `chi(F) / sum w_j r_j`.
pub fn slope(profile: &SubsheafProfile, w: &Polarization) -> Result<Rational> {
    if profile.multirank.len() != w.weights.len() {
        return Err(Error::LengthMismatch {
            what: "multirank",
            expected: w.weights.len(),
            found: profile.multirank.len(),
        });
    }
    let denom: Rational = profile
        .multirank
        .iter()
        .zip(&w.weights)
        .map(|(&r, wj)| wj * i64::from(r))
        .sum();
    if profile.multirank.iter().all(|&r| r == 0) {
        return Err(Error::Domain("slope of a profile with zero multirank".into()));
    }
    if !denom.is_positive() {
        return Err(Error::Domain(format!(
            "non-positive slope denominator {denom}"
        )));
    }
    Ok(Rational::from(profile.euler) / denom)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(p: i64, d: i64) -> Rational {
        Rational::new(p, d)
    }

    fn curve(g: &[u32]) -> CombCurve {
        CombCurve::new(g.to_vec()).unwrap()
    }

    #[test]
    fn component_euler_examples() {
        assert_eq!(component_euler(2, 2, 1), -1);
        assert_eq!(component_euler(0, 1, 0), 1);
        assert_eq!(component_euler(1, 3, 0), 0);
    }

    #[test]
    fn total_euler_examples() {
        let c = curve(&[2, 2]);
        let e = BundleData::new(2, vec![1, 1]).unwrap();
        assert_eq!(e.component_eulers(&c).unwrap(), vec![-1, -1]);
        assert_eq!(total_euler(&c, &e).unwrap(), -4);

        let e = BundleData::new(2, vec![5, 1]).unwrap();
        assert_eq!(e.component_eulers(&c).unwrap(), vec![3, -1]);
        assert_eq!(total_euler(&c, &e).unwrap(), 0);
    }

    #[test]
    fn telescoping_when_every_component_has_euler_n() {
        let c = curve(&[0, 3, 1, 2]);
        let n = 3;
        let eulers = vec![3; 4];
        let e = BundleData::from_eulers(&c, n, &eulers).unwrap();
        assert_eq!(total_euler(&c, &e).unwrap(), 3);
    }

    #[test]
    fn length_mismatch_is_reported() {
        let c = curve(&[2, 2, 2]);
        let e = BundleData::new(2, vec![1, 1]).unwrap();
        assert!(matches!(
            total_euler(&c, &e),
            Err(Error::LengthMismatch { expected: 3, found: 2, .. })
        ));
    }

    #[test]
    fn curve_needs_two_components() {
        assert_eq!(CombCurve::new(vec![3]), Err(Error::TooFewComponents(1)));
        assert_eq!(curve(&[2, 3, 4]).arithmetic_genus(), 9);
        assert_eq!(curve(&[2, 3, 4]).structure_euler(), -8);
    }

    #[test]
    fn slope_examples() {
        let w = Polarization::new(vec![q(1, 2), q(1, 2)]);
        let p = SubsheafProfile {
            multirank: vec![2, 2],
            euler: -4,
            label: "E".into(),
        };
        assert_eq!(slope(&p, &w).unwrap(), q(-2, 1));

        let p0 = SubsheafProfile {
            multirank: vec![1, 0],
            euler: 0,
            label: "x".into(),
        };
        assert_eq!(slope(&p0, &w).unwrap(), Rational::zero());

        let bad = SubsheafProfile {
            multirank: vec![0, 0],
            euler: 3,
            label: "zero".into(),
        };
        assert!(matches!(slope(&bad, &w), Err(Error::Domain(_))));
    }

    #[test]
    fn validate_polarization_examples() {
        assert!(validate_polarization(&Polarization::new(vec![q(1, 2), q(1, 2)])).is_ok());

        let v = validate_polarization(&Polarization::new(vec![q(1, 2), q(1, 3)])).unwrap_err();
        assert_eq!(v, vec![PolarizationViolation::SumNotOne { sum: q(5, 6) }]);

        let v = validate_polarization(&Polarization::new(vec![q(1, 1), q(0, 1)])).unwrap_err();
        assert_eq!(
            v,
            vec![
                PolarizationViolation::NotBelowOne { j: 1, value: q(1, 1) },
                PolarizationViolation::NotPositive { j: 2, value: q(0, 1) },
            ]
        );
    }

    #[test]
    fn profile_bounds_are_checked() {
        let c = curve(&[1, 1]);
        let p = SubsheafProfile {
            multirank: vec![3, 0],
            euler: 0,
            label: "big".into(),
        };
        assert!(p.check_within(&c, 2).is_err());
        assert!(p.check_within(&c, 3).is_ok());
    }

    fn instance() -> impl Strategy<Value = (Vec<u32>, u32, Vec<i64>, Vec<u64>)> {
        (2usize..7).prop_flat_map(|n_comp| {
            (
                prop::collection::vec(0u32..6, n_comp),
                1u32..5,
                prop::collection::vec(-20i64..=20, n_comp),
                prop::collection::vec(1u64..20, n_comp),
            )
        })
    }

    proptest! {
        #[test]
        fn total_euler_matches_independent_summation((g, n, d, _) in instance()) {
            let c = curve(&g);
            let e = BundleData::new(n, d.clone()).unwrap();
            // chi = deg E + n * chi(O_C), computed without the per-component route
            let expected = d.iter().sum::<i64>() + i64::from(n) * c.structure_euler();
            prop_assert_eq!(total_euler(&c, &e).unwrap(), expected);
        }

        #[test]
        fn full_profile_slope_is_euler_over_rank((g, n, d, raw) in instance()) {
            let c = curve(&g);
            let e = BundleData::new(n, d).unwrap();
            let total: u64 = raw.iter().sum();
            let w = Polarization::checked(
                raw.iter().map(|&a| Rational::new(a as i64, total as i64)).collect(),
            );
            prop_assume!(w.is_ok());
            let w = w.unwrap();
            let full = SubsheafProfile::full(&c, &e).unwrap();
            prop_assert_eq!(
                slope(&full, &w).unwrap(),
                Rational::new(total_euler(&c, &e).unwrap(), i64::from(n))
            );
        }
    }
}
