//! Closed intervals with rational endpoints and outward-rounded arithmetic.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::rational::{self as rq, Rational};

#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RationalInterval {
    #[serde(with = "rq::serde_str")]
    pub lo: Rational,
    #[serde(with = "rq::serde_str")]
    pub hi: Rational,
}

impl fmt::Debug for RationalInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", rq::fmt(&self.lo), rq::fmt(&self.hi))
    }
}

/// Short rationals print exactly; long dyadic endpoints print as decimals.
impl fmt::Display for RationalInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let short = |q: &Rational| q.numer().bits() <= 32 && q.denom().bits() <= 32;
        if short(&self.lo) && short(&self.hi) {
            write!(f, "[{}, {}]", rq::fmt(&self.lo), rq::fmt(&self.hi))
        } else {
            write!(f, "[{:.15e}, {:.15e}]", self.lo_f64(), self.hi_f64())
        }
    }
}

impl RationalInterval {
    pub fn new(lo: Rational, hi: Rational) -> Self {
        assert!(rq::le(&lo, &hi), "interval endpoints out of order");
        RationalInterval { lo, hi }
    }

    pub fn point(q: Rational) -> Self {
        RationalInterval { lo: q.clone(), hi: q }
    }

    /// `[c - r, c + r]`.
    pub fn ball(c: &Rational, r: &Rational) -> Self {
        RationalInterval::new(c - r, c + r)
    }

    pub fn zero() -> Self {
        Self::point(Rational::zero())
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn mid(&self) -> Rational {
        (&self.lo + &self.hi) / rq::int(2)
    }

    pub fn radius(&self) -> Rational {
        self.width() / rq::int(2)
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, q: &Rational) -> bool {
        rq::le(&self.lo, q) && rq::le(q, &self.hi)
    }

    pub fn contains_interval(&self, o: &RationalInterval) -> bool {
        rq::le(&self.lo, &o.lo) && rq::le(&o.hi, &self.hi)
    }

    pub fn overlaps(&self, o: &RationalInterval) -> bool {
        rq::le(&self.lo, &o.hi) && rq::le(&o.lo, &self.hi)
    }

    pub fn intersect(&self, o: &RationalInterval) -> Option<RationalInterval> {
        let lo = rq::max(&self.lo, &o.lo);
        let hi = rq::min(&self.hi, &o.hi);
        rq::le(&lo, &hi).then_some(RationalInterval { lo, hi })
    }

    pub fn hull(&self, o: &RationalInterval) -> RationalInterval {
        RationalInterval {
            lo: rq::min(&self.lo, &o.lo),
            hi: rq::max(&self.hi, &o.hi),
        }
    }

    /// Largest absolute value attained on the interval.
    pub fn mag(&self) -> Rational {
        rq::max(&self.lo.abs(), &self.hi.abs())
    }

    /// Smallest absolute value attained on the interval.
    pub fn mig(&self) -> Rational {
        if self.lo.is_positive() {
            self.lo.clone()
        } else if self.hi.is_negative() {
            -self.hi.clone()
        } else {
            Rational::zero()
        }
    }

    pub fn abs(&self) -> RationalInterval {
        RationalInterval { lo: self.mig(), hi: self.mag() }
    }

    pub fn widen(&self, r: &Rational) -> RationalInterval {
        RationalInterval { lo: &self.lo - r, hi: &self.hi + r }
    }

    pub fn scale(&self, q: &Rational) -> RationalInterval {
        let a = &self.lo * q;
        let b = &self.hi * q;
        if q.is_negative() {
            RationalInterval { lo: b, hi: a }
        } else {
            RationalInterval { lo: a, hi: b }
        }
    }

    pub fn square(&self) -> RationalInterval {
        let m = self.mag();
        let lo = self.mig();
        RationalInterval { lo: &lo * &lo, hi: &m * &m }
    }

    pub fn powi(&self, k: u32) -> RationalInterval {
        if k == 0 {
            return Self::point(rq::int(1));
        }
        if k.is_multiple_of(2) {
            let a = self.abs();
            RationalInterval { lo: num_traits::pow(a.lo, k as usize), hi: num_traits::pow(a.hi, k as usize) }
        } else {
            RationalInterval {
                lo: num_traits::pow(self.lo.clone(), k as usize),
                hi: num_traits::pow(self.hi.clone(), k as usize),
            }
        }
    }

    /// Division by an interval that excludes zero.
    pub fn div(&self, o: &RationalInterval) -> Option<RationalInterval> {
        if o.lo.is_zero() || o.hi.is_zero() || (o.lo.is_negative() && o.hi.is_positive()) {
            return None;
        }
        let inv = RationalInterval::new(o.hi.recip(), o.lo.recip());
        Some(self * &inv)
    }

    /// Rounds endpoints outward to multiples of `2^-bits`; exact points stay exact.
    pub fn round_out(&self, bits: u32) -> RationalInterval {
        if self.is_point() && self.lo.denom().bits() <= bits as u64 + 1 {
            return self.clone();
        }
        RationalInterval {
            lo: rq::floor_dyadic(&self.lo, bits),
            hi: rq::ceil_dyadic(&self.hi, bits),
        }
    }

    pub fn lo_f64(&self) -> f64 {
        rq::to_f64(&self.lo)
    }

    pub fn hi_f64(&self) -> f64 {
        rq::to_f64(&self.hi)
    }

    pub fn mid_f64(&self) -> f64 {
        rq::to_f64(&self.mid())
    }
}

impl Add for &RationalInterval {
    type Output = RationalInterval;
    fn add(self, o: &RationalInterval) -> RationalInterval {
        RationalInterval { lo: &self.lo + &o.lo, hi: &self.hi + &o.hi }
    }
}

impl Sub for &RationalInterval {
    type Output = RationalInterval;
    fn sub(self, o: &RationalInterval) -> RationalInterval {
        RationalInterval { lo: &self.lo - &o.hi, hi: &self.hi - &o.lo }
    }
}

impl Neg for &RationalInterval {
    type Output = RationalInterval;
    fn neg(self) -> RationalInterval {
        RationalInterval { lo: -self.hi.clone(), hi: -self.lo.clone() }
    }
}

impl Mul for &RationalInterval {
    type Output = RationalInterval;
    fn mul(self, o: &RationalInterval) -> RationalInterval {
        if self.is_point() {
            return o.scale(&self.lo);
        }
        if o.is_point() {
            return self.scale(&o.lo);
        }
        let c = [&self.lo * &o.lo, &self.lo * &o.hi, &self.hi * &o.lo, &self.hi * &o.hi];
        let mut lo = c[0].clone();
        let mut hi = c[0].clone();
        for v in &c[1..] {
            if rq::lt(v, &lo) {
                lo = v.clone();
            }
            if rq::lt(&hi, v) {
                hi = v.clone();
            }
        }
        RationalInterval { lo, hi }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for RationalInterval {
            type Output = RationalInterval;
            fn $m(self, o: RationalInterval) -> RationalInterval {
                (&self).$m(&o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
