//! Arbitrary-precision rationals and the dyadic rounding helpers used to keep
//! denominators bounded.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// `2^k` for any signed `k`.
pub fn pow2(k: i64) -> Rational {
    if k >= 0 {
        Rational::from_integer(BigInt::one() << (k as usize))
    } else {
        Rational::new(BigInt::one(), BigInt::one() << ((-k) as usize))
    }
}

/// `n / 2^bits` in lowest terms, reduced by shifting instead of a gcd.
pub fn dyadic(n: BigInt, bits: u32) -> Rational {
    let tz = n.trailing_zeros().map_or(bits as u64, |t| t.min(bits as u64));
    Rational::new_raw(n >> (tz as usize), BigInt::one() << ((bits as u64 - tz) as usize))
}

/// Largest multiple of `2^-bits` that is `<= q`.
pub fn floor_dyadic(q: &Rational, bits: u32) -> Rational {
    let scaled = q.numer() << (bits as usize);
    let (fl, _) = scaled.div_mod_floor(q.denom());
    dyadic(fl, bits)
}

/// Smallest multiple of `2^-bits` that is `>= q`.
pub fn ceil_dyadic(q: &Rational, bits: u32) -> Rational {
    let scaled = q.numer() << (bits as usize);
    let (fl, rem) = scaled.div_mod_floor(q.denom());
    let c = if rem.is_zero() { fl } else { fl + 1 };
    dyadic(c, bits)
}

/// `floor(log2 |q|)` for nonzero `q`; `None` for zero.
pub fn ilog2_abs(q: &Rational) -> Option<i64> {
    if q.is_zero() {
        return None;
    }
    let n = q.numer().abs();
    let d = q.denom();
    let mut e = n.bits() as i64 - d.bits() as i64;
    // 2^e <= |q| < 2^(e+1) after at most one correction.
    let lhs = |e: i64| -> bool {
        if e >= 0 {
            n >= (d << (e as usize))
        } else {
            (&n << ((-e) as usize)) >= *d
        }
    };
    if !lhs(e) {
        e -= 1;
    }
    Some(e)
}

/// Smallest `k >= 0` with `2^-k <= q` (q > 0).
pub fn bits_below(q: &Rational) -> u32 {
    assert!(q.is_positive(), "bits_below needs a positive rational");
    let e = ilog2_abs(q).unwrap();
    if e >= 0 {
        0
    } else {
        (-e) as u32
    }
}

/// Number of bits needed so that `2^bits >= |q|`.
pub fn bits_above(q: &Rational) -> u32 {
    match ilog2_abs(q) {
        None => 0,
        Some(e) if e < 0 => 0,
        Some(e) => e as u32 + 1,
    }
}

pub fn to_f64(q: &Rational) -> f64 {
    if let Some(f) = q.to_f64() {
        if f.is_finite() {
            return f;
        }
    }
    // Fall back to a scaled conversion for huge numerators/denominators.
    let e = ilog2_abs(q).unwrap_or(0);
    let scaled = q / pow2(e);
    scaled.to_f64().unwrap_or(0.0) * 2f64.powi(e as i32)
}

/// Canonical `p/q` text; integers print without a denominator.
pub fn fmt(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parses `p/q`, a plain integer, or a finite decimal such as `-0.125` or `1e-6`.
pub fn parse(s: &str) -> Result<Rational> {
    let s = s.trim();
    if s.is_empty() {
        return Err(Error::Parse("empty rational".into()));
    }
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| Error::Parse(format!("bad numerator in {s:?}")))?;
        let q: BigInt = q.trim().parse().map_err(|_| Error::Parse(format!("bad denominator in {s:?}")))?;
        if q.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        return Ok(Rational::new(p, q));
    }
    if let Ok(n) = s.parse::<BigInt>() {
        return Ok(Rational::from_integer(n));
    }
    parse_decimal(s).ok_or_else(|| Error::Parse(format!("not a rational: {s:?}")))
}

fn parse_decimal(s: &str) -> Option<Rational> {
    let (mant, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i64>().ok()?),
        None => (s, 0),
    };
    let (neg, mant) = match mant.strip_prefix('-') {
        Some(m) => (true, m),
        None => (false, mant.strip_prefix('+').unwrap_or(mant)),
    };
    let (ip, fp) = mant.split_once('.').unwrap_or((mant, ""));
    if ip.is_empty() && fp.is_empty() {
        return None;
    }
    if !ip.chars().chain(fp.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits: BigInt = format!("{ip}{fp}").parse().ok()?;
    let e10 = exp - fp.len() as i64;
    let ten = BigInt::from(10);
    let mut q = Rational::from_integer(digits);
    if e10 >= 0 {
        q *= Rational::from_integer(num_traits::pow(ten, e10 as usize));
    } else {
        q /= Rational::from_integer(num_traits::pow(ten, (-e10) as usize));
    }
    Some(if neg { -q } else { q })
}

/// Total order by cross-multiplication. `BigRational`'s own `Ord` walks a
/// continued fraction, which is far slower on nearby dyadic endpoints.
pub fn cmp(a: &Rational, b: &Rational) -> std::cmp::Ordering {
    match (a.numer().sign(), b.numer().sign()) {
        (sa, sb) if sa != sb => sa.cmp(&sb),
        _ => (a.numer() * b.denom()).cmp(&(b.numer() * a.denom())),
    }
}

pub fn le(a: &Rational, b: &Rational) -> bool {
    cmp(a, b).is_le()
}

pub fn lt(a: &Rational, b: &Rational) -> bool {
    cmp(a, b).is_lt()
}

pub fn min(a: &Rational, b: &Rational) -> Rational {
    if le(a, b) {
        a.clone()
    } else {
        b.clone()
    }
}

pub fn max(a: &Rational, b: &Rational) -> Rational {
    if le(b, a) {
        a.clone()
    } else {
        b.clone()
    }
}

pub fn sign(q: &Rational) -> Sign {
    q.numer().sign()
}

/// Serde adapter: rationals travel as `"p/q"` strings.
pub mod serde_str {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&fmt(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse(&s).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dyadic_rounding_brackets_value() {
        let q = rat(1, 3);
        let lo = floor_dyadic(&q, 10);
        let hi = ceil_dyadic(&q, 10);
        assert!(lo < q && q < hi);
        assert_eq!(&hi - &lo, pow2(-10));
        assert_eq!(floor_dyadic(&rat(-1, 3), 2), rat(-1, 2));
        assert_eq!(ceil_dyadic(&rat(1, 4), 2), rat(1, 4));
    }

    #[test]
    fn log2_matches_powers() {
        assert_eq!(ilog2_abs(&rat(1, 1)), Some(0));
        assert_eq!(ilog2_abs(&rat(3, 1)), Some(1));
        assert_eq!(ilog2_abs(&rat(1, 3)), Some(-2));
        assert_eq!(ilog2_abs(&rat(-1, 4)), Some(-2));
        assert_eq!(bits_below(&rat(1, 1000)), 10);
        assert_eq!(bits_above(&rat(5, 1)), 3);
    }

    #[test]
    fn parse_and_format_round_trip() {
        for s in ["0", "-7/2", "1/3", "12"] {
            assert_eq!(fmt(&parse(s).unwrap()), s);
        }
        assert_eq!(parse("4/-8").unwrap(), rat(-1, 2));
        assert_eq!(parse("1e-3").unwrap(), rat(1, 1000));
        assert_eq!(parse("-0.125").unwrap(), rat(-1, 8));
        assert!(parse("1/0").is_err());
        assert!(parse("abc").is_err());
    }
}
