//! Rigorous enclosures of π and of sin(πt), cos(πt).
//!
//! Everything is computed in binary fixed point with explicit error counts
//! (in units of the last place) and only then converted to rational
//! intervals, so the hot loops never touch a gcd.

use std::sync::Mutex;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::interval::RationalInterval;
use crate::rational::{self as rq, Rational};

/// Fixed-point enclosure `[lo, hi] / 2^bits`.
#[derive(Clone, Debug)]
pub struct Fixed {
    pub lo: BigInt,
    pub hi: BigInt,
    pub bits: u32,
}

impl Fixed {
    pub fn to_interval(&self) -> RationalInterval {
        RationalInterval::new(rq::dyadic(self.lo.clone(), self.bits), rq::dyadic(self.hi.clone(), self.bits))
    }
}

fn floor_shift(x: &BigInt, k: u32) -> BigInt {
    // Arithmetic right shift floors for negative values as well.
    x >> (k as usize)
}

fn ceil_shift(x: &BigInt, k: u32) -> BigInt {
    -((-x) >> (k as usize))
}

/// atan(1/k) * 2^w with an error bound in ulps.
fn atan_inv(k: u64, w: u32) -> (BigInt, BigInt) {
    let k = BigInt::from(k);
    let k2 = &k * &k;
    let mut p = (BigInt::one() << (w as usize)) / &k;
    let mut sum = BigInt::zero();
    let mut j: u64 = 0;
    while !p.is_zero() {
        let term = &p / BigInt::from(2 * j + 1);
        if j.is_multiple_of(2) {
            sum += term;
        } else {
            sum -= term;
        }
        p = &p / &k2;
        j += 1;
    }
    (sum, BigInt::from(3 * j + 2))
}

static PI_CACHE: Mutex<Option<Fixed>> = Mutex::new(None);

/// π enclosed in fixed point with `bits` fractional bits; width at most 2 ulps.
pub fn pi_fixed(bits: u32) -> Fixed {
    {
        let cache = PI_CACHE.lock().unwrap();
        if let Some(c) = cache.as_ref() {
            if c.bits >= bits {
                let s = c.bits - bits;
                return Fixed { lo: floor_shift(&c.lo, s), hi: ceil_shift(&c.hi, s), bits };
            }
        }
    }
    let target = bits.max(256).next_multiple_of(256);
    let guard = 24 + 32 - target.leading_zeros();
    let w = target + guard;
    let (a5, e5) = atan_inv(5, w);
    let (a239, e239) = atan_inv(239, w);
    let val = a5 * 16 - a239 * 4;
    let err = e5 * 16 + e239 * 4 + 1;
    let lo = floor_shift(&(&val - &err), guard);
    let hi = ceil_shift(&(&val + &err), guard);
    let full = Fixed { lo, hi, bits: target };
    let s = target - bits;
    let out = Fixed { lo: floor_shift(&full.lo, s), hi: ceil_shift(&full.hi, s), bits };
    *PI_CACHE.lock().unwrap() = Some(full);
    out
}

/// π as a rational interval of width at most `2^(1-bits)`.
pub fn pi_interval(bits: u32) -> RationalInterval {
    pi_fixed(bits).to_interval()
}

/// Taylor sums of sin and cos at the fixed-point argument `x / 2^w`,
/// `0 <= x/2^w < 1`. Returns (sin, cos, error bound in ulps).
fn taylor_sin_cos(x: &BigInt, w: u32) -> (BigInt, BigInt, BigInt) {
    let one = BigInt::one() << (w as usize);
    let mut sin = x.clone();
    let mut cos = one.clone();
    let mut term = x.clone();
    let mut k: u64 = 1;
    while !term.is_zero() {
        term = ((&term * x) >> (w as usize)) / (k + 1);
        k += 1;
        match k % 4 {
            0 => cos += &term,
            1 => sin += &term,
            2 => cos -= &term,
            _ => sin -= &term,
        }
    }
    (sin, cos, BigInt::from(2 * k + 8))
}

/// Enclosures of sin(πt) and cos(πt) for an exact rational `t`,
/// each of width below `2^-bits`.
pub fn sin_cos_pi_point(t: &Rational, bits: u32) -> (RationalInterval, RationalInterval) {
    // Exact reduction modulo 2 into [-1, 1], in integers over the common
    // denominator d: t ≡ r/d with 0 <= r < 2d.
    let (n, d) = (t.numer(), t.denom());
    let mut r = n.mod_floor(&(d * 2u32));
    let neg_sin = r > *d;
    if neg_sin {
        r = d * 2u32 - r;
    }
    // r/d in [0, 1]: fold (1/2, 1] onto [0, 1/2).
    let neg_cos = &r * 2u32 > *d;
    if neg_cos {
        r = d - r;
    }
    // r/d in [0, 1/2]: fold (1/4, 1/2] onto [0, 1/4) by swapping sin and cos.
    let swap = &r * 4u32 > *d;
    let a = if swap { Rational::new(d - &r * 2u32, d * 2u32) } else { Rational::new(r, d.clone()) };
    let (s, c) = sin_cos_pi_small(&a, bits + 2);
    let (mut s, mut c) = if swap { (c, s) } else { (s, c) };
    if neg_sin {
        s = -&s;
    }
    if neg_cos {
        c = -&c;
    }
    (s, c)
}

/// sin(πb), cos(πb) for rational b in [0, 1/4].
fn sin_cos_pi_small(b: &Rational, bits: u32) -> (RationalInterval, RationalInterval) {
    if b.is_zero() {
        return (RationalInterval::zero(), RationalInterval::point(rq::int(1)));
    }
    let w = bits + 12 + (32 - bits.leading_zeros());
    let pi = pi_fixed(w);
    let (num, den) = (b.numer(), b.denom());
    let th_lo = (&pi.lo * num).div_floor(den);
    let th_hi = (&pi.hi * num).div_ceil(den);
    let spread = &th_hi - &th_lo;
    let (s, c, e) = taylor_sin_cos(&th_lo, w);
    // sin is increasing and cos decreasing on [0, π/4]; both are 1-Lipschitz.
    let s_lo = &s - &e;
    let s_hi = &s + &e + &spread;
    let c_lo = &c - &e - &spread;
    let c_hi = &c + &e;
    let one = BigInt::one() << (w as usize);
    let clamp = |v: BigInt| if v > one { one.clone() } else { v };
    let fs = Fixed { lo: s_lo.max(BigInt::zero()), hi: clamp(s_hi), bits: w };
    let fc = Fixed { lo: c_lo, hi: clamp(c_hi), bits: w };
    (fs.to_interval(), fc.to_interval())
}

/// Fixed-point ball `c ± e` in units of `2^-bits`.
#[derive(Clone, Debug)]
pub struct Ball {
    pub c: BigInt,
    pub e: BigInt,
}

impl Ball {
    pub fn from_interval(x: &RationalInterval, bits: u32) -> Ball {
        let lo = (x.lo.numer() << (bits as usize)).div_floor(x.lo.denom());
        let hi = (x.hi.numer() << (bits as usize)).div_ceil(x.hi.denom());
        Ball::from_bounds(lo, hi)
    }

    /// Ball covering the integer range `[lo, hi]`.
    pub fn from_bounds(lo: BigInt, hi: BigInt) -> Ball {
        let c: BigInt = (&lo + &hi) >> 1usize;
        let e = hi - &c;
        Ball { c, e }
    }

    pub fn to_interval(&self, bits: u32) -> RationalInterval {
        RationalInterval::new(rq::dyadic(&self.c - &self.e, bits), rq::dyadic(&self.c + &self.e, bits))
    }

    pub fn neg(&self) -> Ball {
        Ball { c: -&self.c, e: self.e.clone() }
    }

    pub fn zero() -> Ball {
        Ball { c: BigInt::zero(), e: BigInt::zero() }
    }

    pub fn add(&self, o: &Ball) -> Ball {
        Ball { c: &self.c + &o.c, e: &self.e + &o.e }
    }

    /// Product of two balls at the same scale `2^-bits`.
    pub fn mul(&self, o: &Ball, bits: u32) -> Ball {
        // |xy - ab| <= |x - a| |b| + |a| |y - b| + |x - a| |y - b|.
        let spread = &self.e * o.c.abs() + &o.e * self.c.abs() + &self.e * &o.e;
        let c = (&self.c * &o.c) >> (bits as usize);
        let e = -((-spread) >> (bits as usize)) + 1u32;
        Ball { c, e }
    }

    /// `self * q` for an exact rational `q`.
    pub fn scale(&self, q: &Rational) -> Ball {
        let (n, d) = (q.numer(), q.denom());
        Ball { c: (&self.c * n).div_floor(d), e: (&self.e * n.abs()).div_ceil(d) + 1 }
    }
}

/// Restart distance of the angle-addition recurrence; bounds its error
/// growth to `2^RESTART` ulps.
const RESTART: usize = 8;

/// Balls for `sin(kπs)`, `cos(kπs)`, `k = 0..=n`, valid for every `s` in the
/// interval, each of radius below `2^-bits` (units `2^-w`, `w` returned).
///
/// One Taylor evaluation per `RESTART` multiples; the rest follow from
/// `sin((k+1)t) = sin kt cos t + cos kt sin t` and its cosine partner.
pub fn sin_cos_pi_multiples(s: &RationalInterval, n: usize, bits: u32) -> (u32, Vec<(Ball, Ball)>) {
    let w = bits + RESTART as u32 + 8 + (64 - (n as u64 + 1).leading_zeros());
    let m = if s.is_point() { s.lo.clone() } else { rq::floor_dyadic(&s.mid(), w + 4) };
    let r = rq::max(&(&s.hi - &m), &(&m - &s.lo));
    let one = BigInt::one() << (w as usize);
    let direct = |k: usize| {
        let (sk, ck) = sin_cos_pi_point(&(&m * rq::int(k as i64)), w + 2);
        (Ball::from_interval(&sk, w), Ball::from_interval(&ck, w))
    };
    let mut out = Vec::with_capacity(n + 1);
    out.push((Ball { c: BigInt::zero(), e: BigInt::zero() }, Ball { c: one, e: BigInt::zero() }));
    if n >= 1 {
        out.push(direct(1));
    }
    for k in 2..=n {
        if k % RESTART == 0 {
            out.push(direct(k));
            continue;
        }
        let (s1, c1) = &out[1];
        let (sp, cp) = &out[k - 1];
        // |x y - X Y| <= |x - X| |y| + |X| |y - Y| with |X|, |Y| <= 1.
        let e_prev = sp.e.clone().max(cp.e.clone());
        let e1 = s1.e.clone().max(c1.e.clone());
        let prod_err = &e_prev + &e1 + ((&e_prev * &e1) >> (w as usize)) + 1;
        let e: BigInt = &prod_err * 2u32;
        let sk = (&sp.c * &c1.c + &cp.c * &s1.c) >> (w as usize);
        let ck = (&cp.c * &c1.c - &sp.c * &s1.c) >> (w as usize);
        out.push((Ball { c: sk, e: e.clone() }, Ball { c: ck, e }));
    }
    if r.is_positive() {
        // |d/ds sin(kπs)| <= kπ < 22k/7.
        let unit = &r * rq::rat(22, 7) * rq::pow2(w as i64);
        for (k, (sb, cb)) in out.iter_mut().enumerate().skip(1) {
            let spread = (&unit * rq::int(k as i64)).ceil().to_integer();
            sb.e += &spread;
            cb.e += &spread;
        }
    }
    (w, out)
}

/// Enclosures of sin(πs), cos(πs) valid for every s in the interval.
pub fn sin_cos_pi(s: &RationalInterval, bits: u32) -> (RationalInterval, RationalInterval) {
    if s.is_point() {
        return sin_cos_pi_point(&s.lo, bits);
    }
    let w = bits + 4;
    let m = rq::floor_dyadic(&s.mid(), w);
    let r = rq::max(&(&s.hi - &m), &(&m - &s.lo));
    let (si, ci) = sin_cos_pi_point(&m, bits + 1);
    // |d/ds sin(πs)| <= π < 22/7.
    let spread = r * rq::rat(22, 7);
    let unit = RationalInterval::new(rq::int(-1), rq::int(1));
    let si = si.widen(&spread).intersect(&unit).unwrap_or(unit.clone());
    let ci = ci.widen(&spread).intersect(&unit).unwrap_or(unit);
    (si.round_out(w), ci.round_out(w))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    const PI_50: &str = "3.14159265358979323846264338327950288419716939937510";

    #[test]
    fn pi_brackets_reference_digits() {
        let reference = rq::parse(PI_50).unwrap();
        for bits in [3u32, 20, 64, 160] {
            let p = pi_interval(bits);
            assert!(p.width() <= rq::pow2(1 - bits as i64));
            assert!(p.lo <= &reference + rq::pow2(-160) && reference.clone() - rq::pow2(-160) <= p.hi);
        }
    }

    #[test]
    fn special_angles_are_enclosed() {
        let (s, c) = sin_cos_pi_point(&rat(1, 2), 40);
        assert!(s.contains(&rq::int(1)) && c.contains(&rq::int(0)));
        let (s, c) = sin_cos_pi_point(&rat(1, 1), 40);
        assert!(s.contains(&rq::int(0)) && c.contains(&rq::int(-1)));
        let (s, c) = sin_cos_pi_point(&rat(1, 3), 40);
        assert!(c.contains(&rat(1, 2)));
        assert!(s.width() < rq::pow2(-40) && c.width() < rq::pow2(-40));
        let (s, _) = sin_cos_pi_point(&rat(-7, 6), 40);
        assert!(s.contains(&rat(1, 2)));
        let (s, c) = sin_cos_pi_point(&rat(13, 4), 40);
        assert!(s.lo < rq::int(0) && c.lo < rq::int(0));
    }

    #[test]
    fn matches_f64_on_a_sweep() {
        for i in -40..=40 {
            let t = rat(i, 17);
            let (s, c) = sin_cos_pi_point(&t, 50);
            let x = std::f64::consts::PI * (i as f64) / 17.0;
            assert!((s.mid_f64() - x.sin()).abs() < 1e-12);
            assert!((c.mid_f64() - x.cos()).abs() < 1e-12);
        }
    }

    #[test]
    fn interval_argument_contains_endpoint_values() {
        let s = RationalInterval::new(rat(1, 5), rat(1, 5) + rq::pow2(-30));
        let (si, ci) = sin_cos_pi(&s, 50);
        for t in [s.lo.clone(), s.hi.clone()] {
            let (a, b) = sin_cos_pi_point(&t, 60);
            assert!(si.contains_interval(&a) && ci.contains_interval(&b));
        }
        assert!(si.width() < rq::pow2(-27));
    }

    #[test]
    fn multiples_agree_with_direct_evaluation() {
        let u = RationalInterval::new(rat(-7, 10), rat(-7, 10) + rq::pow2(-40));
        let (w, table) = sin_cos_pi_multiples(&u, 20, 50);
        for (k, (sb, cb)) in table.iter().enumerate() {
            let (si, ci) = (sb.to_interval(w), cb.to_interval(w));
            assert!(si.width() < rq::pow2(-30) && ci.width() < rq::pow2(-30));
            for t in [u.lo.clone(), u.hi.clone()] {
                let (a, b) = sin_cos_pi_point(&(&t * rq::int(k as i64)), 60);
                assert!(si.contains_interval(&a) && ci.contains_interval(&b), "k = {k}");
            }
        }
        let (w, table) = sin_cos_pi_multiples(&RationalInterval::point(rat(1, 3)), 12, 40);
        for (k, (sb, _)) in table.iter().enumerate() {
            let x = std::f64::consts::PI * k as f64 / 3.0;
            assert!((sb.to_interval(w).mid_f64() - x.sin()).abs() < 1e-11);
            assert!(sb.to_interval(w).width() < rq::pow2(-40));
        }
    }

    #[test]
    fn ball_products_enclose() {
        let x = RationalInterval::new(rat(-1, 3), rat(1, 7));
        let y = RationalInterval::new(rat(2, 5), rat(3, 4));
        let (bx, by) = (Ball::from_interval(&x, 30), Ball::from_interval(&y, 30));
        assert!(bx.mul(&by, 30).to_interval(30).contains_interval(&(&x * &y)));
        assert!(bx.scale(&rat(-5, 3)).to_interval(30).contains_interval(&x.scale(&rat(-5, 3))));
    }
}
