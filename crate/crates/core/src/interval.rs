//! Rational intervals with open, closed or unbounded ends, and the
//! simplest-rational picker.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Endpoint {
    Unbounded,
    Closed(Rational),
    Open(Rational),
}

impl Endpoint {
    pub fn value(&self) -> Option<&Rational> {
        match self {
            Endpoint::Unbounded => None,
            Endpoint::Closed(v) | Endpoint::Open(v) => Some(v),
        }
    }

    pub fn is_open(&self) -> bool {
        !matches!(self, Endpoint::Closed(_))
    }

    fn new(value: Rational, open: bool) -> Self {
        if open {
            Endpoint::Open(value)
        } else {
            Endpoint::Closed(value)
        }
    }
}

/// A (possibly empty) interval of rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntervalQ {
    pub lo: Endpoint,
    pub hi: Endpoint,
}

impl IntervalQ {
    pub fn closed(lo: Rational, hi: Rational) -> Self {
        IntervalQ {
            lo: Endpoint::Closed(lo),
            hi: Endpoint::Closed(hi),
        }
    }

    pub fn open(lo: Rational, hi: Rational) -> Self {
        IntervalQ {
            lo: Endpoint::Open(lo),
            hi: Endpoint::Open(hi),
        }
    }

    /// Closed or open on both ends depending on `strict`.
    pub fn between(lo: Rational, hi: Rational, strict: bool) -> Self {
        IntervalQ {
            lo: Endpoint::new(lo, strict),
            hi: Endpoint::new(hi, strict),
        }
    }

    pub fn unit_open() -> Self {
        IntervalQ::open(Rational::zero(), Rational::one())
    }

    /// Canonical empty interval, `(0, 0)`.
    pub fn empty() -> Self {
        IntervalQ::open(Rational::zero(), Rational::zero())
    }

    pub fn is_empty(&self) -> bool {
        match (&self.lo, &self.hi) {
            (Endpoint::Unbounded, _) | (_, Endpoint::Unbounded) => false,
            (Endpoint::Closed(a), Endpoint::Closed(b)) => a > b,
            (lo, hi) => lo.value() >= hi.value(),
        }
    }

    pub fn contains(&self, x: &Rational) -> bool {
        let above = match &self.lo {
            Endpoint::Unbounded => true,
            Endpoint::Closed(a) => x >= a,
            Endpoint::Open(a) => x > a,
        };
        let below = match &self.hi {
            Endpoint::Unbounded => true,
            Endpoint::Closed(b) => x <= b,
            Endpoint::Open(b) => x < b,
        };
        above && below
    }

    /// Set intersection. The result may be empty.
    pub fn intersect(&self, other: &IntervalQ) -> IntervalQ {
        IntervalQ {
            lo: tighter(&self.lo, &other.lo, Ordering::Greater),
            hi: tighter(&self.hi, &other.hi, Ordering::Less),
        }
    }

    /// `hi - lo` for a bounded interval.
    pub fn width(&self) -> Option<Rational> {
        Some(self.hi.value()? - self.lo.value()?)
    }

    /// `true` if every point of `self` lies in `other`.
    pub fn is_subset_of(&self, other: &IntervalQ) -> bool {
        if self.is_empty() {
            return true;
        }
        self.intersect(other) == *self
    }
}

/// Picks the more restrictive of two endpoints; `toward` is `Greater` for
/// lower ends and `Less` for upper ends.
fn tighter(a: &Endpoint, b: &Endpoint, toward: Ordering) -> Endpoint {
    match (a.value(), b.value()) {
        (None, _) => b.clone(),
        (_, None) => a.clone(),
        (Some(x), Some(y)) => match x.cmp(y) {
            Ordering::Equal => Endpoint::new(x.clone(), a.is_open() || b.is_open()),
            ord if ord == toward => a.clone(),
            _ => b.clone(),
        },
    }
}

impl fmt::Display for IntervalQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "empty");
        }
        match &self.lo {
            Endpoint::Unbounded => write!(f, "(-inf")?,
            Endpoint::Closed(v) => write!(f, "[{v}")?,
            Endpoint::Open(v) => write!(f, "({v}")?,
        }
        write!(f, ", ")?;
        match &self.hi {
            Endpoint::Unbounded => write!(f, "+inf)"),
            Endpoint::Closed(v) => write!(f, "{v}]"),
            Endpoint::Open(v) => write!(f, "{v})"),
        }
    }
}

/// The rational of smallest denominator inside `interval`, ties broken by
/// smallest numerator.
///
/// The interval must be non-empty with finite ends in `[0, 1]`. The search is
/// a continued-fraction descent of the Stern–Brocot tree: strip the integer
/// part, invert, repeat.
pub fn pick_simplest_rational(interval: &IntervalQ) -> Result<Rational> {
    if interval.is_empty() {
        return Err(Error::EmptyInterval);
    }
    let (lo, hi) = match (&interval.lo, &interval.hi) {
        (Endpoint::Unbounded, _) | (_, Endpoint::Unbounded) => {
            return Err(Error::Domain("interval bounds must be finite".into()))
        }
        (lo, hi) => (lo.value().unwrap(), hi.value().unwrap()),
    };
    if lo.is_negative() || hi.cmp_int(1).is_gt() {
        return Err(Error::Domain(format!(
            "interval {interval} is not inside [0, 1]"
        )));
    }
    Ok(simplest_nonneg(
        lo.clone(),
        !interval.lo.is_open(),
        Some(hi.clone()),
        !interval.hi.is_open(),
    ))
}

/// Simplest rational in a non-empty interval with `0 <= lo`; `hi = None`
/// means `+inf` (open).
fn simplest_nonneg(lo: Rational, lo_closed: bool, hi: Option<Rational>, hi_closed: bool) -> Rational {
    // smallest integer admitted by the lower end
    let first: BigInt = if lo.is_integer() && lo_closed {
        lo.floor()
    } else {
        lo.floor() + BigInt::one()
    };
    let first_q = Rational::from(first.clone());
    let fits = match &hi {
        None => true,
        Some(h) => first_q < *h || (hi_closed && first_q == *h),
    };
    if fits {
        return first_q;
    }
    // no integer inside, so the interval sits in [a, a + 1]
    let a = lo.floor();
    let a_q = Rational::from(a);
    let hi = hi.expect("bounded when no integer fits");
    let lo_frac = &lo - &a_q;
    let hi_frac = &hi - &a_q;
    // x in (lo_frac, hi_frac)  <=>  1/x in (1/hi_frac, 1/lo_frac)
    let inv_lo = hi_frac.recip();
    let inv_hi = if lo_frac.is_zero() {
        None
    } else {
        Some(lo_frac.recip())
    };
    let y = simplest_nonneg(inv_lo, hi_closed, inv_hi, lo_closed);
    a_q + y.recip()
}
