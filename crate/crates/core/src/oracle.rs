//! Seeded instance generators and brute-force oracles.
//!
//! The oracles recompute each fast-path answer from first principles
//! (slopes straight from their definition, exhaustive integer and fraction
//! scans) and share no arithmetic shortcuts with the code they check.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interval::IntervalQ;
use crate::kernel::{Assumptions, GeneratedPairData};
use crate::model::{component_euler, BundleData, CombCurve, Polarization};
use crate::polarization::{necessary_check, NecessaryVerdict};
use crate::rational::Rational;
use crate::restriction::{passes_rank_n_filters, Destabilizer};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceBounds {
    pub max_components: usize,
    pub max_genus: u32,
    pub max_rank: u32,
    pub min_degree: i64,
    pub max_degree: i64,
    pub max_weight_denominator: i64,
    pub seed: u64,
}

impl Default for InstanceBounds {
    fn default() -> Self {
        InstanceBounds {
            max_components: 6,
            max_genus: 5,
            max_rank: 4,
            min_degree: -20,
            max_degree: 20,
            max_weight_denominator: 64,
            seed: 1,
        }
    }
}

impl InstanceBounds {
    pub fn validate(&self) -> Result<()> {
        let problem = if self.max_components < 2 {
            Some("max_components must be at least 2")
        } else if self.max_rank < 1 {
            Some("max_rank must be at least 1")
        } else if self.min_degree > self.max_degree {
            Some("degree range is empty")
        } else if self.max_weight_denominator < self.max_components as i64 {
            Some("max_weight_denominator must be at least max_components")
        } else {
            None
        };
        match problem {
            Some(p) => Err(Error::Domain(p.into())),
            None => Ok(()),
        }
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        InstanceBounds { seed, ..*self }
    }
}

/// One random `(curve, bundle, polarization)` triple.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Instance {
    pub curve: CombCurve,
    pub bundle: BundleData,
    pub polarization: Polarization,
}

/// SplitMix64 finalizer; decorrelates per-instance seeds.
pub fn mix_seed(base: u64, index: u64) -> u64 {
    let mut z = base
        .wrapping_add(index.wrapping_mul(0x9E37_79B9_7F4A_7C15))
        .wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Weights `a_j / q` with `a_j > 0`, `sum a_j = q`, `q <= max_den`.
fn random_polarization(rng: &mut impl Rng, parts: usize, max_den: i64) -> Polarization {
    let q = rng.gen_range(parts as i64..=max_den);
    let mut cuts: Vec<i64> = sample(rng, (q - 1) as usize, parts - 1)
        .into_iter()
        .map(|c| c as i64 + 1)
        .collect();
    cuts.sort_unstable();
    let mut weights = Vec::with_capacity(parts);
    let mut prev = 0;
    for c in cuts.into_iter().chain(std::iter::once(q)) {
        weights.push(Rational::new(c - prev, q));
        prev = c;
    }
    Polarization::new(weights)
}

fn random_curve(rng: &mut impl Rng, bounds: &InstanceBounds, min_genus: u32) -> CombCurve {
    let n_comp = rng.gen_range(2..=bounds.max_components);
    let genera = (0..n_comp)
        .map(|_| rng.gen_range(min_genus..=bounds.max_genus.max(min_genus)))
        .collect();
    CombCurve::new(genera).expect("at least two components")
}

/// Deterministic in `bounds.seed`.
pub fn random_instance(bounds: &InstanceBounds) -> Instance {
    let mut rng = rng_for(bounds.seed, 0);
    let curve = random_curve(&mut rng, bounds, 0);
    let rank = rng.gen_range(1..=bounds.max_rank);
    let multidegree = (0..curve.components())
        .map(|_| rng.gen_range(bounds.min_degree..=bounds.max_degree))
        .collect();
    let polarization = random_polarization(&mut rng, curve.components(), bounds.max_weight_denominator);
    Instance {
        curve,
        bundle: BundleData::new(rank, multidegree).expect("rank >= 1"),
        polarization,
    }
}

/// An instance of rank `>= 2` together with a tooth `j` where `w_j chi` is
/// not an integer and `w_j chi <= chi_j <= w_j chi + n` holds, i.e. the
/// setting in which the restriction classifiers draw conclusions.
///
/// Degrees away from `j` come from the bounds; `chi_j` is then drawn from
/// the interval that the tooth inequalities leave open, so `d_j` may fall
/// outside the degree range.
pub fn random_restriction_instance(bounds: &InstanceBounds) -> (Instance, usize) {
    let mut rng = rng_for(bounds.seed, 1);
    let max_rank = bounds.max_rank.max(2);
    loop {
        let curve = random_curve(&mut rng, bounds, 0);
        let n = rng.gen_range(2..=max_rank);
        let n_i = i64::from(n);
        let w = random_polarization(&mut rng, curve.components(), bounds.max_weight_denominator);
        let j = rng.gen_range(1..=curve.teeth());
        let mut multidegree: Vec<i64> = (0..curve.components())
            .map(|_| rng.gen_range(bounds.min_degree..=bounds.max_degree))
            .collect();
        let rest: i64 = (1..=curve.components())
            .filter(|&i| i != j)
            .map(|i| component_euler(curve.genus(i), n, multidegree[i - 1]))
            .sum::<i64>()
            - n_i * curve.teeth() as i64;
        // w_j (chi_j + rest) <= chi_j <= w_j (chi_j + rest) + n
        let wj = w.weight(j);
        let one_minus = Rational::one() - wj;
        let lo = (wj * rest) / &one_minus;
        let hi = ((wj * rest) + n_i) / &one_minus;
        let (lo, hi) = (lo.ceil(), hi.floor());
        let (Ok(lo), Ok(hi)) = (i64::try_from(lo), i64::try_from(hi)) else {
            continue;
        };
        if lo > hi {
            continue;
        }
        let chi_j = rng.gen_range(lo..=hi);
        let chi = chi_j + rest;
        if (wj * chi).is_integer() {
            continue;
        }
        multidegree[j - 1] = chi_j - component_euler(curve.genus(j), n, 0);
        let bundle = BundleData::new(n, multidegree).expect("rank >= 2");
        return (
            Instance {
                curve,
                bundle,
                polarization: w,
            },
            j,
        );
    }
}

/// A numerically valid generated pair on a curve with all genera `>= 2`.
pub fn random_pair(bounds: &InstanceBounds) -> (CombCurve, GeneratedPairData) {
    let mut rng = rng_for(bounds.seed, 2);
    let curve = random_curve(&mut rng, bounds, 2);
    let n = rng.gen_range(1..=bounds.max_rank);
    let m = rng.gen_range(1..=4u32);
    let l = n + m;
    let comps = curve.components();
    let mut kernel_dims: Vec<u32> = (0..comps)
        .map(|_| if rng.gen_bool(0.7) { 0 } else { rng.gen_range(1..=m) })
        .collect();
    if kernel_dims[comps - 1] > 0 && kernel_dims[..comps - 1].iter().all(|&k| k == 0) {
        kernel_dims[comps - 1] = 0;
    }
    let span = bounds.max_degree.max(2);
    let multidegree = kernel_dims
        .iter()
        .map(|&k| {
            let floor = (i64::from(l) - i64::from(k) - i64::from(n)).max(0);
            let d = if floor == 0 && rng.gen_bool(0.1) {
                0
            } else {
                rng.gen_range(floor.max(2)..=floor.max(2) + span)
            };
            debug_assert!(d != 1);
            d
        })
        .collect();
    let pair = GeneratedPairData {
        rank: n,
        sections: l,
        multidegree,
        kernel_dims,
        assumptions: Assumptions::default(),
    };
    (curve, pair)
}

/// A random interval with ends in `[0, 1]` and denominators up to `max_den`.
pub fn random_unit_subinterval(seed: u64, max_den: i64) -> IntervalQ {
    let mut rng = rng_for(seed, 3);
    loop {
        let d1 = rng.gen_range(1..=max_den);
        let d2 = rng.gen_range(1..=max_den);
        let a = Rational::new(rng.gen_range(0..=d1), d1);
        let b = Rational::new(rng.gen_range(0..=d2), d2);
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let interval = IntervalQ::open(lo, hi);
        if !interval.is_empty() {
            return interval;
        }
    }
}

/// Slope straight from its definition, `chi / sum w_j r_j`.
fn definitional_slope(multirank: &[u32], euler: i64, w: &Polarization) -> Rational {
    let denom: Rational = multirank
        .iter()
        .zip(&w.weights)
        .map(|(&r, wj)| wj * i64::from(r))
        .sum();
    Rational::from(euler) / denom
}

/// Recomputes which tooth inequalities fail from slopes of the two canonical
/// subsheaves and checks that [`necessary_check`] reports the same pattern.
pub fn oracle_necessary_equivalence(curve: &CombCurve, bundle: &BundleData, w: &Polarization) -> Result<bool> {
    let verdict = necessary_check(curve, bundle, w)?;
    Ok(necessary_pattern_matches(&verdict, curve, bundle, w))
}

/// The comparison behind [`oracle_necessary_equivalence`], for any verdict.
pub fn necessary_pattern_matches(
    verdict: &NecessaryVerdict,
    curve: &CombCurve,
    bundle: &BundleData,
    w: &Polarization,
) -> bool {
    let n = bundle.rank;
    let comps = curve.components();
    let chis: Vec<i64> = (1..=comps)
        .map(|i| bundle.multidegree[i - 1] + i64::from(n) * (1 - i64::from(curve.genus(i))))
        .collect();
    // chi(E) = deg E + n chi(O_C)
    let chi = bundle.total_degree() + i64::from(n) * curve.structure_euler();
    let mu = Rational::new(chi, i64::from(n));
    for (idx, check) in verdict.components.iter().enumerate() {
        let j = idx + 1;
        let mut twisted = vec![0; comps];
        twisted[idx] = n;
        let mut complement = vec![n; comps];
        complement[idx] = 0;
        let twisted_breaks = definitional_slope(&twisted, chis[idx] - i64::from(n), w) > mu;
        let complement_breaks = definitional_slope(&complement, chi - chis[idx], w) > mu;
        if check.j != j
            || check.upper_ok == twisted_breaks
            || check.lower_ok == complement_breaks
            || check.witness.is_some() != (twisted_breaks || complement_breaks)
        {
            return false;
        }
        if let (Some(witness), Some(s)) = (&check.witness, &check.witness_slope) {
            if *s <= mu || definitional_slope(&witness.multirank, witness.euler, w) != *s {
                return false;
            }
        }
    }
    verdict.components.len() == curve.teeth()
        && verdict.overall_pass == verdict.components.iter().all(|c| c.witness.is_none())
}

/// Brute-force list of `(k, chi_l)` admissible as destabilizers of `E_j`,
/// with the rank-`n` divisibility filters replayed.
///
/// Scans `chi_l` over `[k chi_j / n - n k - 1, k chi_j / n + n k + 1]` and
/// keeps values with `chi_l / k > chi_j / n` and
/// `(chi_l - k) / (k w_j) <= chi / n`.
pub fn oracle_destabilizer_enumeration(
    curve: &CombCurve,
    bundle: &BundleData,
    w: &Polarization,
    j: usize,
) -> Result<Vec<Destabilizer>> {
    if j == 0 || j >= curve.components() {
        return Err(Error::IndexOutOfRange { j, max: curve.teeth() });
    }
    let n = i64::from(bundle.rank);
    let g = i64::from(curve.genus(j));
    let chi_j = bundle.multidegree[j - 1] + n * (1 - g);
    let chi = bundle.total_degree() + n * curve.structure_euler();
    let wj = w.weight(j);
    let mu = Rational::new(chi, n);
    let mut out = Vec::new();
    for k in 1..n {
        let centre = Rational::new(k * chi_j, n);
        let lo = i64::try_from(centre.floor()).map_err(|_| Error::Domain("overflow".into()))? - n * k - 1;
        let hi = i64::try_from(centre.ceil()).map_err(|_| Error::Domain("overflow".into()))? + n * k + 1;
        for chi_l in lo..=hi {
            let destabilizes = Rational::new(chi_l, k) > Rational::new(chi_j, n);
            let fits = Rational::from(chi_l - k) / (wj * k) <= mu;
            if destabilizes && fits && passes_rank_n_filters(bundle.rank, chi_j, k as u32, chi_l) {
                out.push(Destabilizer {
                    rank: k as u32,
                    euler: chi_l,
                });
            }
        }
    }
    Ok(out)
}

/// First fraction `p/q` in `interval`, scanning `q = 1..=max_denominator`
/// and every `p` with `0 <= p <= q`.
pub fn oracle_simplest_rational(interval: &IntervalQ, max_denominator: i64) -> Option<Rational> {
    (1..=max_denominator).find_map(|q| {
        (0..=q)
            .map(|p| Rational::new(p, q))
            .find(|x| interval.contains(x))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::validate_polarization;
    use crate::restriction::filtered_destabilizers;

    fn q(p: i64, d: i64) -> Rational {
        Rational::new(p, d)
    }

    #[test]
    fn generator_is_deterministic() {
        let b = InstanceBounds::default();
        assert_eq!(random_instance(&b), random_instance(&b));
        assert_ne!(random_instance(&b), random_instance(&b.with_seed(2)));
        assert_eq!(random_restriction_instance(&b), random_restriction_instance(&b));
        assert_eq!(random_pair(&b), random_pair(&b));
    }

    #[test]
    fn generator_contract() {
        let b = InstanceBounds::default();
        for i in 0..500 {
            let inst = random_instance(&b.with_seed(mix_seed(7, i)));
            assert!(validate_polarization(&inst.polarization).is_ok());
            assert!(inst.curve.components() >= 2 && inst.curve.components() <= 6);
            assert!(inst.polarization.weights.iter().all(|w| *w.denom() <= 64.into()));
            assert!(inst.bundle.multidegree.iter().all(|d| (-20..=20).contains(d)));
        }
    }

    #[test]
    fn two_component_bound_gives_chains() {
        let b = InstanceBounds {
            max_components: 2,
            ..Default::default()
        };
        for i in 0..50 {
            assert_eq!(random_instance(&b.with_seed(i)).curve.components(), 2);
        }
    }

    #[test]
    fn restriction_generator_meets_hypotheses() {
        let b = InstanceBounds::default();
        for i in 0..300 {
            let (inst, j) = random_restriction_instance(&b.with_seed(mix_seed(3, i)));
            let v = necessary_check(&inst.curve, &inst.bundle, &inst.polarization).unwrap();
            assert!(v.components[j - 1].lower_ok && v.components[j - 1].upper_ok);
            let chi = crate::model::total_euler(&inst.curve, &inst.bundle).unwrap();
            assert!(!(inst.polarization.weight(j) * chi).is_integer());
        }
    }

    #[test]
    fn pair_generator_produces_valid_pairs() {
        let b = InstanceBounds::default();
        for i in 0..500 {
            let (c, p) = random_pair(&b.with_seed(mix_seed(5, i)));
            assert_eq!(crate::kernel::validate_pair(&c, &p), Ok(()), "{c:?} {p:?}");
        }
    }

    #[test]
    fn necessary_oracle_examples() {
        let c = CombCurve::new(vec![2, 2]).unwrap();
        let half = Polarization::new(vec![q(1, 2), q(1, 2)]);
        let e = BundleData::new(2, vec![1, 1]).unwrap();
        assert!(oracle_necessary_equivalence(&c, &e, &half).unwrap());
        let e = BundleData::new(2, vec![5, 1]).unwrap();
        assert!(oracle_necessary_equivalence(&c, &e, &half).unwrap());
    }

    #[test]
    fn destabilizer_oracle_examples() {
        let c = CombCurve::new(vec![2, 2]).unwrap();
        let e = BundleData::new(2, vec![1, 1]).unwrap();
        let w = Polarization::new(vec![q(1, 3), q(2, 3)]);
        assert_eq!(
            oracle_destabilizer_enumeration(&c, &e, &w, 1).unwrap(),
            vec![Destabilizer { rank: 1, euler: 0 }]
        );

        let e = BundleData::from_eulers(&c, 3, &[-6, -8]).unwrap();
        let w = Polarization::new(vec![q(2, 5), q(3, 5)]);
        assert_eq!(
            oracle_destabilizer_enumeration(&c, &e, &w, 1).unwrap(),
            vec![Destabilizer { rank: 2, euler: -3 }]
        );
        assert_eq!(
            oracle_destabilizer_enumeration(&c, &e, &w, 1).unwrap(),
            filtered_destabilizers(&c, &e, &w, 1).unwrap()
        );

        // window case of rank 3: nothing survives
        let w = Polarization::new(vec![q(1, 2), q(1, 2)]);
        assert!(oracle_destabilizer_enumeration(&c, &e, &w, 1).unwrap().is_empty());
    }

    #[test]
    fn simplest_oracle_examples() {
        assert_eq!(oracle_simplest_rational(&IntervalQ::open(q(5, 12), q(7, 12)), 12), Some(q(1, 2)));
        assert_eq!(oracle_simplest_rational(&IntervalQ::open(q(1, 3), q(1, 2)), 10), Some(q(2, 5)));
        assert_eq!(oracle_simplest_rational(&IntervalQ::empty(), 100), None);
        // 2/5 needs denominator 5
        assert_eq!(oracle_simplest_rational(&IntervalQ::open(q(1, 3), q(1, 2)), 4), None);
    }
}
