//! Real numbers as nested streams of rational intervals.
//!
//! A [`CReal`] answers `approx(n)` with an interval of width `< 2^-n`; the
//! intervals are nested in `n`. Order queries take an explicit precision
//! budget and may answer [`OrderVerdict::Undecided`].

use std::fmt;
use std::sync::{Arc, Mutex};

use num_traits::Signed;

use crate::elementary;
use crate::error::{Error, Result};
use crate::interval::RationalInterval;
use crate::rational::{self as rq, Rational};

type RawFn = dyn Fn(u32) -> RationalInterval + Send + Sync;

enum Kind {
    Exact(Rational),
    Stream { raw: Box<RawFn>, memo: Mutex<Vec<RationalInterval>> },
}

#[derive(Clone)]
pub struct CReal(Arc<Kind>);

impl fmt::Debug for CReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &*self.0 {
            Kind::Exact(q) => write!(f, "CReal({})", rq::fmt(q)),
            Kind::Stream { .. } => write!(f, "CReal(~{})", self.to_f64()),
        }
    }
}

/// Outcome of a budgeted order query.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OrderVerdict {
    /// `approx_x(n).hi < approx_y(n).lo` at the witnessing index.
    Less(u32),
    Greater(u32),
    /// No witness up to the budget; not a claim of equality.
    Undecided(u32),
}

/// Result of a co-transitive split of `x < z` against a third number `y`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Split {
    /// `x < y`: `x <= bound < bound + gap <= y`.
    LeftGap { bound: Rational, gap: Rational, index: u32 },
    /// `y < z`: `y <= bound - gap < bound <= z`.
    RightGap { bound: Rational, gap: Rational, index: u32 },
}

impl Split {
    pub fn gap(&self) -> &Rational {
        match self {
            Split::LeftGap { gap, .. } | Split::RightGap { gap, .. } => gap,
        }
    }
}

impl CReal {
    pub fn from_rational(q: Rational) -> CReal {
        CReal(Arc::new(Kind::Exact(q)))
    }

    pub fn from_int(n: i64) -> CReal {
        Self::from_rational(rq::int(n))
    }

    /// Builds a real from enclosures `raw(n)` of width `< 2^-n`. The raw
    /// intervals need not be nested; the stream exposes their running
    /// intersection.
    pub fn from_fn<F>(raw: F) -> CReal
    where
        F: Fn(u32) -> RationalInterval + Send + Sync + 'static,
    {
        CReal(Arc::new(Kind::Stream { raw: Box::new(raw), memo: Mutex::new(Vec::new()) }))
    }

    pub fn pi() -> CReal {
        Self::from_fn(|n| elementary::pi_interval(n + 2))
    }

    pub fn exact(&self) -> Option<&Rational> {
        match &*self.0 {
            Kind::Exact(q) => Some(q),
            _ => None,
        }
    }

    /// The `n`-th nested enclosure; width `< 2^-n`.
    pub fn approx(&self, n: u32) -> RationalInterval {
        match &*self.0 {
            Kind::Exact(q) => RationalInterval::point(q.clone()),
            Kind::Stream { raw, memo } => {
                if let Some(v) = memo.lock().unwrap().get(n as usize) {
                    return v.clone();
                }
                // Compute outside the lock: raw may recurse into other reals.
                let start = memo.lock().unwrap().len() as u32;
                let mut fresh = Vec::new();
                let mut prev = if start == 0 { None } else { Some(memo.lock().unwrap()[start as usize - 1].clone()) };
                for k in start..=n {
                    let r = raw(k);
                    let cur = match &prev {
                        None => r,
                        Some(p) => p.intersect(&r).expect("raw enclosures of a real must overlap"),
                    };
                    fresh.push(cur.clone());
                    prev = Some(cur);
                }
                let mut m = memo.lock().unwrap();
                if m.len() as u32 == start {
                    m.extend(fresh);
                }
                m[n as usize].clone()
            }
        }
    }

    /// Index at which the width guarantee `< 2^-m` holds.
    pub fn width_bound(&self, m: u32) -> u32 {
        m
    }

    pub fn to_f64(&self) -> f64 {
        self.approx(60).mid_f64()
    }

    pub fn neg(&self) -> CReal {
        if let Some(q) = self.exact() {
            return Self::from_rational(-q.clone());
        }
        let x = self.clone();
        Self::from_fn(move |n| -&x.approx(n))
    }

    pub fn add(&self, y: &CReal) -> CReal {
        if let (Some(a), Some(b)) = (self.exact(), y.exact()) {
            return Self::from_rational(a + b);
        }
        let (x, y) = (self.clone(), y.clone());
        Self::from_fn(move |n| (&x.approx(n + 2) + &y.approx(n + 2)).round_out(n + 3))
    }

    pub fn sub(&self, y: &CReal) -> CReal {
        self.add(&y.neg())
    }

    pub fn mul(&self, y: &CReal) -> CReal {
        if let (Some(a), Some(b)) = (self.exact(), y.exact()) {
            return Self::from_rational(a * b);
        }
        let (x, y) = (self.clone(), y.clone());
        let bound = x.approx(0).mag() + y.approx(0).mag() + rq::int(1);
        let k = rq::bits_above(&bound);
        Self::from_fn(move |n| {
            let j = n + 2 + k;
            (&x.approx(j) * &y.approx(j)).round_out(n + 3)
        })
    }

    pub fn scale(&self, q: &Rational) -> CReal {
        if let Some(a) = self.exact() {
            return Self::from_rational(a * q);
        }
        let x = self.clone();
        let q = q.clone();
        let k = rq::bits_above(&q);
        Self::from_fn(move |n| x.approx(n + 1 + k).scale(&q).round_out(n + 2))
    }

    /// Componentwise maximum of the approximation streams.
    pub fn sup(&self, y: &CReal) -> CReal {
        if let (Some(a), Some(b)) = (self.exact(), y.exact()) {
            return Self::from_rational(rq::max(a, b));
        }
        let (x, y) = (self.clone(), y.clone());
        Self::from_fn(move |n| {
            let (a, b) = (x.approx(n), y.approx(n));
            RationalInterval::new(rq::max(&a.lo, &b.lo), rq::max(&a.hi, &b.hi))
        })
    }

    /// Componentwise minimum of the approximation streams.
    pub fn inf(&self, y: &CReal) -> CReal {
        if let (Some(a), Some(b)) = (self.exact(), y.exact()) {
            return Self::from_rational(rq::min(a, b));
        }
        let (x, y) = (self.clone(), y.clone());
        Self::from_fn(move |n| {
            let (a, b) = (x.approx(n), y.approx(n));
            RationalInterval::new(rq::min(&a.lo, &b.lo), rq::min(&a.hi, &b.hi))
        })
    }
}

pub fn from_rational(q: Rational) -> CReal {
    CReal::from_rational(q)
}

pub fn pi_enclosure() -> CReal {
    CReal::pi()
}

/// Enclosure of `x` with width `< 2^-m`.
pub fn approx_at(x: &CReal, m: u32) -> RationalInterval {
    x.approx(x.width_bound(m))
}

/// Refines both streams up to `budget` and reports the first index that
/// separates them.
pub fn compare(x: &CReal, y: &CReal, budget: u32) -> OrderVerdict {
    for n in 0..=budget {
        let (a, b) = (x.approx(n), y.approx(n));
        if a.hi < b.lo {
            return OrderVerdict::Less(n);
        }
        if a.lo > b.hi {
            return OrderVerdict::Greater(n);
        }
    }
    OrderVerdict::Undecided(budget)
}

/// Given `x''(n) < z'(n)`, decides `x < y` or `y < z` from a single
/// refinement of `y` to width below a third of the gap.
pub fn cotransitive_split(x: &CReal, z: &CReal, witness: u32, y: &CReal) -> Result<Split> {
    let xh = x.approx(witness).hi;
    let zl = z.approx(witness).lo;
    if xh >= zl {
        return Err(Error::InvalidWitness(format!(
            "x''({witness}) = {} is not below z'({witness}) = {}",
            rq::fmt(&xh),
            rq::fmt(&zl)
        )));
    }
    let g = &zl - &xh;
    let m = rq::bits_below(&(&g / rq::int(3)));
    let ym = y.approx(m);
    if ym.lo > xh {
        Ok(Split::LeftGap { gap: &ym.lo - &xh, bound: xh, index: m.max(witness) })
    } else {
        debug_assert!(ym.hi < zl);
        Ok(Split::RightGap { gap: &zl - &ym.hi, bound: zl, index: m.max(witness) })
    }
}

/// Whether `x` is certified positive within the budget.
pub fn is_positive(x: &CReal, budget: u32) -> bool {
    (0..=budget).any(|n| x.approx(n).lo.is_positive())
}
