//! Trigonometric series, Riemann's smoothed function `G`, symmetric
//! difference quotients and Fourier-coefficient recovery.
//!
//! Abscissae are π-scaled: the point `x = πu` of `[-π, π]` is stored as the
//! rational `u`, so every `sin nx`, `cos nx` reduces exactly.

use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::creals::CReal;
use crate::elementary::{self, sin_cos_pi_point, Ball};
use crate::error::{Error, Result};
use crate::func::RealFn;
use crate::interval::RationalInterval;
use crate::rational::{self as rq, Rational};

/// The point `πu` of `[-π, π]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PiScaled {
    #[serde(with = "rq::serde_str")]
    pub u: Rational,
}

impl PiScaled {
    pub fn new(u: Rational) -> Result<Self> {
        if u.abs() > rq::int(1) {
            return Err(Error::DomainExceeded(format!("π-scaled abscissa {} outside [-1, 1]", rq::fmt(&u))));
        }
        Ok(PiScaled { u })
    }

    /// Real-coordinate enclosure of `πu`.
    pub fn real(&self, bits: u32) -> RationalInterval {
        if self.u.is_zero() {
            return RationalInterval::zero();
        }
        elementary::pi_interval(bits + 2).scale(&self.u)
    }
}

/// `b0/2 + Σ_{n=1..N} a_n sin nx + b_n cos nx`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "SeriesJson", into = "SeriesJson")]
pub struct TrigSeries {
    pub b0: Rational,
    /// `terms[n-1] = (a_n, b_n)`.
    pub terms: Vec<(Rational, Rational)>,
}

#[derive(Serialize, Deserialize)]
struct SeriesJson {
    b0: String,
    terms: Vec<[String; 2]>,
}

impl TryFrom<SeriesJson> for TrigSeries {
    type Error = Error;
    fn try_from(j: SeriesJson) -> Result<Self> {
        let terms = j.terms.iter().map(|[a, b]| Ok((rq::parse(a)?, rq::parse(b)?))).collect::<Result<_>>()?;
        Ok(TrigSeries { b0: rq::parse(&j.b0)?, terms })
    }
}

impl From<TrigSeries> for SeriesJson {
    fn from(s: TrigSeries) -> Self {
        SeriesJson { b0: rq::fmt(&s.b0), terms: s.terms.iter().map(|(a, b)| [rq::fmt(a), rq::fmt(b)]).collect() }
    }
}

impl TrigSeries {
    pub fn zero() -> Self {
        TrigSeries { b0: rq::int(0), terms: Vec::new() }
    }

    pub fn constant(b0: Rational) -> Self {
        TrigSeries { b0, terms: Vec::new() }
    }

    /// Series with a single frequency `n`.
    pub fn single(n: usize, a: Rational, b: Rational) -> Self {
        let mut terms = vec![(rq::int(0), rq::int(0)); n];
        terms[n - 1] = (a, b);
        TrigSeries { b0: rq::int(0), terms }
    }

    pub fn degree(&self) -> usize {
        self.terms.len()
    }

    pub fn a(&self, n: usize) -> Rational {
        self.terms.get(n.wrapping_sub(1)).map(|t| t.0.clone()).unwrap_or_else(|| rq::int(0))
    }

    pub fn b(&self, n: usize) -> Rational {
        if n == 0 {
            return self.b0.clone();
        }
        self.terms.get(n - 1).map(|t| t.1.clone()).unwrap_or_else(|| rq::int(0))
    }

    /// `Σ |a_n| + |b_n|` over the listed terms.
    pub fn term_mass(&self) -> Rational {
        self.terms.iter().fold(rq::int(0), |acc, (a, b)| acc + a.abs() + b.abs())
    }

    pub fn max_abs_coefficient(&self) -> Rational {
        self.terms.iter().fold(self.b0.abs(), |m, (a, b)| rq::max(&rq::max(&m, &a.abs()), &b.abs()))
    }

    fn truncated(&self, len: usize) -> TrigSeries {
        TrigSeries { b0: self.b0.clone(), terms: self.terms.iter().take(len).cloned().collect() }
    }
}

/// Enclosures of `sin nx`, `cos nx` at `x = πu`, each of width `< 2^-m`.
pub fn trig_enclosure(n: u64, x: &PiScaled, m: u32) -> (RationalInterval, RationalInterval) {
    sin_cos_pi_point(&(&x.u * rq::int(n as i64)), m)
}

/// Weighted sum `Σ w_k (a_k D^order sin + b_k D^order cos)(k·πu)` over a
/// π-scaled interval `u`, with `D^order` the `order`-th derivative of the
/// unit-frequency function and `w_k` supplied by the caller.
fn trig_sum(
    s: &TrigSeries,
    u: &RationalInterval,
    order: u32,
    weight: impl Fn(usize) -> Rational,
    bits: u32,
) -> RationalInterval {
    let (w, acc) = trig_sum_ball(s, u, order, weight, bits);
    acc.to_interval(w)
}

/// [`trig_sum`] as a fixed-point ball; returns the scale `w` with it.
fn trig_sum_ball(
    s: &TrigSeries,
    u: &RationalInterval,
    order: u32,
    weight: impl Fn(usize) -> Rational,
    bits: u32,
) -> (u32, Ball) {
    let weights: Vec<Rational> = (1..=s.degree()).map(&weight).collect();
    let mass = s
        .terms
        .iter()
        .zip(&weights)
        .fold(rq::int(0), |acc, ((a, b), w)| acc + (a.abs() + b.abs()) * w.abs());
    if mass.is_zero() {
        return (bits + 8, Ball::zero());
    }
    let tb = bits + 3 + rq::bits_above(&mass);
    let (w, table) = elementary::sin_cos_pi_multiples(u, s.degree(), tb + 4);
    let mut acc = Ball::zero();
    for (k, ((a, b), wt)) in s.terms.iter().zip(&weights).enumerate() {
        if a.is_zero() && b.is_zero() {
            continue;
        }
        let (sn, cs) = &table[k + 1];
        // d/dx sin = cos, d/dx cos = -sin.
        let (ds, dc) = match order % 4 {
            0 => (sn.clone(), cs.clone()),
            1 => (cs.clone(), sn.neg()),
            2 => (sn.neg(), cs.neg()),
            _ => (cs.neg(), sn.clone()),
        };
        acc = acc.add(&ds.scale(&(a * wt))).add(&dc.scale(&(b * wt)));
    }
    (w, acc)
}

fn real_to_u(x: &RationalInterval, bits: u32) -> RationalInterval {
    if x.is_point() && x.lo.is_zero() {
        return RationalInterval::zero();
    }
    // Fixed point at w bits: u = X / P with directed rounding, P > 0.
    let w = bits + 8;
    let pi = elementary::pi_fixed(w);
    let xl = (x.lo.numer() << (w as usize)).div_floor(x.lo.denom());
    let xh = (x.hi.numer() << (w as usize)).div_ceil(x.hi.denom());
    let lo_den = if xl.is_negative() { &pi.lo } else { &pi.hi };
    let hi_den = if xh.is_negative() { &pi.hi } else { &pi.lo };
    let lo = (xl << (w as usize)).div_floor(lo_den);
    let hi = (xh << (w as usize)).div_ceil(hi_den);
    RationalInterval::new(rq::dyadic(lo, w), rq::dyadic(hi, w))
}

fn pow_weight(k: usize, e: i64) -> Rational {
    let k = rq::int(k as i64);
    if e >= 0 {
        num_traits::pow(k, e as usize)
    } else {
        num_traits::pow(k, (-e) as usize).recip()
    }
}

/// The partial sum `F_N` as a real function.
#[derive(Clone, Debug)]
pub struct SeriesFn(pub TrigSeries);

impl RealFn for SeriesFn {
    fn eval(&self, x: &RationalInterval, bits: u32) -> RationalInterval {
        self.derivative(0, x, bits).unwrap()
    }

    fn eval_pi(&self, u: &Rational, bits: u32) -> RationalInterval {
        let c = RationalInterval::point(&self.0.b0 / rq::int(2));
        &c + &trig_sum(&self.0, &RationalInterval::point(u.clone()), 0, |_| rq::int(1), bits + 1)
    }

    fn derivative(&self, order: u32, x: &RationalInterval, bits: u32) -> Option<RationalInterval> {
        let u = real_to_u(x, bits + 8);
        let sum = trig_sum(&self.0, &u, order, |k| pow_weight(k, order as i64), bits + 1);
        if order == 0 {
            Some(&RationalInterval::point(&self.0.b0 / rq::int(2)) + &sum)
        } else {
            Some(sum)
        }
    }
}

/// Riemann's smoothed function
/// `G(x) = b0 x^2 / 4 - Σ (a_n/n^2) sin nx + (b_n/n^2) cos nx`.
#[derive(Clone, Debug)]
pub struct SmoothedFn(pub TrigSeries);

impl SmoothedFn {
    /// `D^order (b0 x^2 / 4)` as a ball at scale `2^-w`.
    fn quadratic(&self, order: u32, x: &RationalInterval, w: u32) -> Ball {
        let b0 = &self.0.b0;
        match order {
            0 => {
                let xb = Ball::from_interval(x, w);
                xb.mul(&xb, w).scale(&(b0 / rq::int(4)))
            }
            1 => Ball::from_interval(x, w).scale(&(b0 / rq::int(2))),
            2 => Ball::from_interval(&RationalInterval::point(b0 / rq::int(2)), w),
            _ => Ball::zero(),
        }
    }
}

impl RealFn for SmoothedFn {
    fn eval(&self, x: &RationalInterval, bits: u32) -> RationalInterval {
        self.derivative(0, x, bits).unwrap()
    }

    fn eval_pi(&self, u: &Rational, bits: u32) -> RationalInterval {
        let (w, sum) = trig_sum_ball(&self.0, &RationalInterval::point(u.clone()), 0, |k| -pow_weight(k, -2), bits + 1);
        if self.0.b0.is_zero() || u.is_zero() {
            return sum.to_interval(w);
        }
        let c = &self.0.b0 * u * u / rq::int(4);
        // Rescale so that multiplying by c keeps the error below 2^-bits.
        let delta = (rq::bits_above(&c) + 4) as usize;
        let w2 = w + delta as u32;
        let sum = Ball { c: sum.c << delta, e: sum.e << delta };
        let pi = Ball::from_bounds(elementary::pi_fixed(w2).lo, elementary::pi_fixed(w2).hi);
        let quad = pi.mul(&pi, w2).scale(&c);
        sum.add(&quad).to_interval(w2).round_out(bits + 3)
    }

    fn derivative(&self, order: u32, x: &RationalInterval, bits: u32) -> Option<RationalInterval> {
        let u = real_to_u(x, bits + 8);
        let (w, sum) = trig_sum_ball(&self.0, &u, order, |k| -pow_weight(k, order as i64 - 2), bits + 1);
        let total = sum.add(&self.quadratic(order, x, w));
        Some(total.to_interval(w).round_out(bits + 3))
    }
}

/// Enclosure of `F_N(πu)` with width `< 2^-m`.
pub fn eval_partial(s: &TrigSeries, x: &PiScaled, m: u32) -> RationalInterval {
    SeriesFn(s.clone()).eval_pi(&x.u, m + 1)
}

/// Enclosure of `G(πu)` with width `< 2^-m` for a finite series.
pub fn smooth_eval(s: &TrigSeries, x: &PiScaled, m: u32) -> RationalInterval {
    SmoothedFn(s.clone()).eval_pi(&x.u, m + 1)
}

/// Tail mode: sums the frequencies `n < truncation` and adds `±B/(M-1)`, where
/// `B` bounds `|a_n sin nx + b_n cos nx|` for every `n >= M`.
pub fn smooth_eval_tail(
    s: &TrigSeries,
    x: &PiScaled,
    m: u32,
    truncation: usize,
    bound: &Rational,
) -> Result<RationalInterval> {
    if truncation < 2 {
        return Err(Error::Precondition("tail mode needs a truncation frequency M >= 2".into()));
    }
    let head = smooth_eval(&s.truncated(truncation - 1), x, m + 1);
    Ok(head.widen(&tail_bound(truncation, bound)))
}

/// `B/(M-1)`, which dominates `B Σ_{n>=M} 1/n^2`.
pub fn tail_bound(truncation: usize, bound: &Rational) -> Rational {
    bound / rq::int(truncation as i64 - 1)
}

fn check_step(x: &PiScaled, h: &Rational) -> Result<()> {
    if !h.is_positive() {
        return Err(Error::Precondition("step h must be positive".into()));
    }
    // x ± h inside [-π, π]  <=>  h <= π(1 - |u|).
    let room = rq::int(1) - x.u.abs();
    let pi_lo = elementary::pi_interval(64).lo;
    if *h > pi_lo * room {
        return Err(Error::DomainExceeded(format!(
            "πu ± h leaves [-π, π] for u = {}, h = {}",
            rq::fmt(&x.u),
            rq::fmt(h)
        )));
    }
    Ok(())
}

/// Enclosure of `(H(x+h) + H(x-h) - 2H(x)) / h^order` at `x = πu`, with
/// width `< 2^-m`. The step `h` is in real coordinates.
pub fn symmetric_quotient(
    hfn: &dyn RealFn,
    x: &PiScaled,
    h: &Rational,
    order: u32,
    m: u32,
) -> Result<RationalInterval> {
    if order != 1 && order != 2 {
        return Err(Error::Precondition(format!("quotient order must be 1 or 2, got {order}")));
    }
    check_step(x, h)?;
    let hpow = num_traits::pow(h.clone(), order as usize);
    let target = rq::pow2(-(m as i64));
    let base = m + order * rq::bits_above(&h.recip()) + 6;
    for extra in (0..=12).map(|i| i * 24) {
        let bits = base + extra;
        let xr = x.real(bits + 4);
        let hi = RationalInterval::point(h.clone());
        let c = if x.u.is_zero() { hfn.eval_pi(&x.u, bits) } else { hfn.eval(&xr, bits) };
        let p = hfn.eval(&(&xr + &hi), bits);
        let q = hfn.eval(&(&xr - &hi), bits);
        let num = &(&p + &q) - &c.scale(&rq::int(2));
        let quot = num.scale(&hpow.recip());
        if quot.width() < target {
            return Ok(quot);
        }
    }
    Err(Error::ToleranceNotMet(format!("symmetric quotient did not reach width 2^-{m}")))
}

/// Outcome of a symmetric-derivative probe along `h = 2^-j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct D2ProbeReport {
    #[serde(with = "rational_vec")]
    pub h_schedule: Vec<Rational>,
    /// Raw quotient enclosures, one per step.
    pub estimates: Vec<RationalInterval>,
    pub converged: bool,
    /// Intersection of the last two estimates after widening each by the
    /// rigorous distance between the quotient and its limit.
    pub limit_enclosure: RationalInterval,
}

impl D2ProbeReport {
    /// CSV with columns `h, lo, hi`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("h,lo,hi\n");
        for (h, e) in self.h_schedule.iter().zip(&self.estimates) {
            out += &format!("{},{},{}\n", rq::fmt(h), rq::fmt(&e.lo), rq::fmt(&e.hi));
        }
        out
    }
}

mod rational_vec {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(rq::fmt))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Rational>, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        v.iter().map(|s| rq::parse(s).map_err(serde::de::Error::custom)).collect()
    }
}

/// First dyadic step exponent of every probe schedule.
pub const PROBE_J0: u32 = 3;

/// Order-2 probe: the quotients of `G` converge to `F(x)`.
pub fn d2_probe(s: &TrigSeries, x: &PiScaled, tol: &Rational, k: usize) -> Result<D2ProbeReport> {
    probe(s, x, tol, k, 2)
}

/// Order-1 probe: the quotients of `G` converge to `0`.
pub fn d1_probe(s: &TrigSeries, x: &PiScaled, tol: &Rational, k: usize) -> Result<D2ProbeReport> {
    probe(s, x, tol, k, 1)
}

fn probe(s: &TrigSeries, x: &PiScaled, tol: &Rational, k: usize, order: u32) -> Result<D2ProbeReport> {
    if !tol.is_positive() || k < 2 {
        return Err(Error::Precondition("probe needs tol > 0 and a schedule of length >= 2".into()));
    }
    let g = SmoothedFn(s.clone());
    let m = rq::bits_below(tol) + 6;
    let mut h_schedule = Vec::with_capacity(k);
    let mut estimates = Vec::with_capacity(k);
    let mut widened = Vec::with_capacity(k);
    for j in PROBE_J0..PROBE_J0 + k as u32 {
        let h = rq::pow2(-(j as i64));
        let q = symmetric_quotient(&g, x, &h, order, m)?;
        // Each frequency contributes A_n (sin(nh/2)/(nh/2))^2 to the order-2
        // quotient, which differs from A_n by at most |A_n| (nh)^2 / 12.
        let slack = if order == 2 {
            s.terms.iter().enumerate().fold(rq::int(0), |acc, (i, (a, b))| {
                let nh = &h * rq::int(i as i64 + 1);
                acc + (a.abs() + b.abs()) * &nh * &nh / rq::int(12)
            })
        } else {
            (s.b0.abs() / rq::int(2) + s.term_mass()) * &h
        };
        widened.push(q.widen(&slack));
        estimates.push(q);
        h_schedule.push(h);
    }
    let (p, l) = (&widened[k - 2], &widened[k - 1]);
    let hull = p.hull(l);
    let limit = p.intersect(l).unwrap_or(hull.clone());
    Ok(D2ProbeReport { h_schedule, estimates, converged: hull.width() <= *tol, limit_enclosure: limit })
}

/// Which trigonometric weight a Fourier coefficient uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TrigKind {
    Sin,
    Cos,
}

/// Largest quadrature refinement: `2^MAX_CELLS_LOG2` cells on `[-1, 1]`.
const MAX_CELLS_LOG2: u32 = 20;

fn binom4(j: usize) -> i64 {
    [1, 4, 6, 4, 1][j]
}

/// `sup |f^(4)|` for `f(u) = H(πu) trig(nπu)` from the derivative sups of `H`.
fn fourth_derivative_bound(dsup: &[Rational], n: u64, pi_hi: &Rational) -> Rational {
    let npi = pi_hi * rq::int(n as i64);
    (0..=4).fold(rq::int(0), |acc, j| {
        acc + rq::int(binom4(j))
            * num_traits::pow(pi_hi.clone(), j)
            * &dsup[j]
            * num_traits::pow(npi.clone(), 4 - j)
    })
}

/// Per-sample values in fixed point at a returned scale `2^-w`: `H(πu)` and
/// the weight table `(sin kπu, cos kπu)`.
type Sampler<'a> = dyn Fn(&Rational, u32) -> (u32, Ball, Vec<(Ball, Ball)>) + 'a;

/// Error model of the quadrature: Euler–Maclaurin corrected midpoint (needs
/// four derivative sups and endpoint slopes) or plain midpoint with a
/// Lipschitz constant.
enum Modulus {
    Smooth { dsup: Vec<Rational>, slope_lo: RationalInterval, slope_hi: RationalInterval },
    Lipschitz { lip: Rational, sup: Rational },
}

fn modulus_of(hfn: &dyn RealFn, bits: u32) -> Result<Modulus> {
    let pi = elementary::pi_interval(40);
    let whole = RationalInterval::new(-pi.hi.clone(), pi.hi.clone());
    let dsup: Option<Vec<Rational>> = (0..=4).map(|j| hfn.derivative(j, &whole, 16).map(|d| d.mag())).collect();
    if let Some(dsup) = dsup {
        let at = |u: i64| {
            let x = elementary::pi_interval(bits + 8).scale(&rq::int(u));
            hfn.derivative(1, &x, bits + 4)
        };
        if let (Some(slope_lo), Some(slope_hi)) = (at(-1), at(1)) {
            return Ok(Modulus::Smooth { dsup, slope_lo, slope_hi });
        }
    }
    match hfn.lipschitz(&-pi.hi.clone(), &pi.hi) {
        Some(lip) => Ok(Modulus::Lipschitz { lip, sup: hfn.eval(&whole, 16).mag() }),
        None => Err(Error::NoModulus),
    }
}

/// `(1/π) ∫_{-π}^{π} H(x) trig(nx) dx = ∫_{-1}^{1} H(πu) trig(nπu) du` for a
/// batch of requests sharing one set of samples. Each result has width
/// `< 2^-m`.
fn quadrature(
    requests: &[(u64, TrigKind)],
    sampler: &Sampler<'_>,
    modulus: &Modulus,
    h_at_ends: (RationalInterval, RationalInterval),
    m: u32,
) -> Result<Vec<RationalInterval>> {
    let pi_hi = elementary::pi_interval(40).hi;
    let target = rq::pow2(-(m as i64));
    let nmax = requests.iter().map(|r| r.0).max().unwrap_or(0);
    // Remainder bound as a function of the cell width w, for each request.
    let remainder = |n: u64, w: &Rational| -> Rational {
        match modulus {
            Modulus::Smooth { dsup, .. } => {
                let w4 = num_traits::pow(w.clone(), 4);
                rq::rat(7, 5760) * rq::int(2) * w4 * fourth_derivative_bound(dsup, n, &pi_hi)
            }
            Modulus::Lipschitz { lip, sup } => {
                let lf = &pi_hi * lip + sup * &pi_hi * rq::int(n as i64);
                lf * w / rq::int(2)
            }
        }
    };
    let mut cells_log2 = 1;
    while cells_log2 < MAX_CELLS_LOG2 {
        let w = rq::pow2(1 - cells_log2 as i64);
        if remainder(nmax, &w) < &target / rq::int(4) {
            break;
        }
        cells_log2 += 1;
    }
    let sup_h = match modulus {
        Modulus::Smooth { dsup, .. } => dsup[0].clone(),
        Modulus::Lipschitz { sup, .. } => sup.clone(),
    };
    for attempt in 0..3u32 {
        let cells = 1u64 << cells_log2;
        let w = rq::pow2(1 - cells_log2 as i64);
        let bits = m + 4 + rq::bits_above(&(&sup_h + rq::int(1))) + 8 * attempt;
        let mut sums = vec![Ball::zero(); requests.len()];
        let mut scale = None;
        for i in 0..cells {
            let u = rq::int(-1) + &w * (rq::int(i as i64) + rq::rat(1, 2));
            let (sw, hv, table) = sampler(&u, bits);
            debug_assert!(scale.is_none_or(|s| s == sw), "sampler scale must not vary across cells");
            scale = Some(sw);
            for (acc, (n, kind)) in sums.iter_mut().zip(requests) {
                let (sn, cs) = &table[*n as usize];
                let t = if *kind == TrigKind::Sin { sn } else { cs };
                *acc = acc.add(&hv.mul(t, sw));
            }
        }
        let sw = scale.expect("at least one cell");
        let mut out = Vec::with_capacity(requests.len());
        let mut ok = true;
        for (acc, (n, kind)) in sums.into_iter().zip(requests) {
            let mut v = acc.to_interval(sw).scale(&w);
            if let Modulus::Smooth { slope_lo, slope_hi, .. } = modulus {
                // f'(±1) with sin(±nπ) = 0 and cos(±nπ) = (-1)^n.
                let sgn = if n % 2 == 0 { rq::int(1) } else { rq::int(-1) };
                let pi = elementary::pi_interval(bits + 8);
                let (d_lo, d_hi) = match kind {
                    TrigKind::Cos => (slope_lo.scale(&sgn), slope_hi.scale(&sgn)),
                    TrigKind::Sin => {
                        let f = |hv: &RationalInterval| hv.scale(&(&sgn * rq::int(*n as i64)));
                        (f(&h_at_ends.0), f(&h_at_ends.1))
                    }
                };
                let fprime_diff = &pi * &(&d_hi - &d_lo);
                v = &v + &fprime_diff.scale(&(&w * &w / rq::int(24)));
            }
            let v = v.widen(&remainder(*n, &w)).round_out(m + 4);
            ok &= v.width() < target;
            out.push(v);
        }
        if ok {
            return Ok(out);
        }
        if cells_log2 < MAX_CELLS_LOG2 {
            cells_log2 += 1;
        }
    }
    Err(Error::ToleranceNotMet(format!("quadrature did not reach width 2^-{m} within 2^{MAX_CELLS_LOG2} cells")))
}


/// `(1/π) ∫_{-π}^{π} H(x) trig(nx) dx`, enclosed with width `< 2^-m`.
pub fn fourier_coefficient(hfn: &dyn RealFn, n: u64, kind: TrigKind, m: u32) -> Result<RationalInterval> {
    fourier_coefficients(hfn, &[(n, kind)], m).map(|mut v| v.remove(0))
}

/// Batched form of [`fourier_coefficient`] over shared samples.
pub fn fourier_coefficients(hfn: &dyn RealFn, requests: &[(u64, TrigKind)], m: u32) -> Result<Vec<RationalInterval>> {
    if requests.iter().any(|&(n, k)| n == 0 && k == TrigKind::Sin) {
        return Err(Error::Precondition("sine coefficients start at n = 1".into()));
    }
    let modulus = modulus_of(hfn, m + 8)?;
    let nmax = requests.iter().map(|r| r.0).max().unwrap_or(0);
    let sampler = |u: &Rational, bits: u32| {
        let (w, table) = elementary::sin_cos_pi_multiples(&RationalInterval::point(u.clone()), nmax as usize, bits + 2);
        (w, Ball::from_interval(&hfn.eval_pi(u, bits), w), table)
    };
    let ends = (hfn.eval_pi(&rq::int(-1), m + 8), hfn.eval_pi(&rq::int(1), m + 8));
    quadrature(requests, &sampler, &modulus, ends, m)
}

/// Reconstructed coefficients with their enclosures.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecoveredSeries {
    pub b0: RationalInterval,
    /// `terms[n-1] = (a_n, b_n)`.
    pub terms: Vec<(RationalInterval, RationalInterval)>,
}

impl RecoveredSeries {
    pub fn midpoints(&self) -> TrigSeries {
        TrigSeries { b0: self.b0.mid(), terms: self.terms.iter().map(|(a, b)| (a.mid(), b.mid())).collect() }
    }

    /// Largest `|c|` over all coefficient enclosures.
    pub fn max_magnitude(&self) -> Rational {
        self.terms.iter().fold(self.b0.mag(), |m, (a, b)| rq::max(&rq::max(&m, &a.mag()), &b.mag()))
    }

    /// Whether every enclosure lies within `tol` of the matching coefficient.
    pub fn within(&self, s: &TrigSeries, tol: &Rational) -> bool {
        let near = |e: &RationalInterval, c: &Rational| &e.hi - c <= *tol && c - &e.lo <= *tol;
        near(&self.b0, &s.b0) && (1..=self.terms.len()).all(|n| near(&self.terms[n - 1].0, &s.a(n)) && near(&self.terms[n - 1].1, &s.b(n)))
    }
}

/// Recovers the coefficients of `S` from the Fourier coefficients of its
/// smoothed function `G` alone, using
/// `(1/π)∫ x^2 cos nx = (-1)^n 4/n^2` and `(1/π)∫ x^2 = 2π^2/3`.
pub fn recover_coefficients(s: &TrigSeries, tol: &Rational) -> Result<RecoveredSeries> {
    let g = SmoothedFn(s.clone());
    recover_from_smoothed(&g, s.degree(), tol)
}

/// Recovery from an arbitrary smoothed function up to frequency `nmax`.
pub fn recover_from_smoothed(g: &SmoothedFn, nmax: usize, tol: &Rational) -> Result<RecoveredSeries> {
    if !tol.is_positive() {
        return Err(Error::Precondition("tol must be positive".into()));
    }
    let nmax64 = nmax as u64;
    let scale = rq::int((nmax.max(1) * nmax.max(1)) as i64);
    let m = rq::bits_below(&(tol / (scale * rq::int(4)))) + 2;
    let mut requests = vec![(0, TrigKind::Cos)];
    for n in 1..=nmax64 {
        requests.push((n, TrigKind::Sin));
        requests.push((n, TrigKind::Cos));
    }
    let modulus = modulus_of(g, m + 8)?;
    let series = &g.0;
    // The sample table doubles as the weight table: both need sin kπu, cos kπu.
    let tmax = nmax64.max(series.degree() as u64);
    let guard = rq::bits_above(&(series.term_mass() + series.b0.abs() + rq::int(1)));
    let weights: Vec<Rational> = (1..=series.degree()).map(|k| pow_weight(k, -2)).collect();
    let sampler = |u: &Rational, bits: u32| {
        let (w, table) = elementary::sin_cos_pi_multiples(&RationalInterval::point(u.clone()), tmax as usize, bits + 3 + guard);
        let mut acc = Ball::zero();
        for (k, ((a, b), wt)) in series.terms.iter().zip(&weights).enumerate() {
            let (sn, cs) = &table[k + 1];
            acc = acc.add(&sn.scale(&-(a * wt))).add(&cs.scale(&-(b * wt)));
        }
        if !series.b0.is_zero() {
            let c = &series.b0 * u * u / rq::int(4);
            let pi = elementary::pi_fixed(w);
            let pi = Ball::from_bounds(pi.lo, pi.hi);
            acc = acc.add(&pi.mul(&pi, w).scale(&c));
        }
        (w, acc, table)
    };
    let ends = (g.eval_pi(&rq::int(-1), m + 8), g.eval_pi(&rq::int(1), m + 8));
    let coeffs = quadrature(&requests, &sampler, &modulus, ends, m)?;
    let pi2 = elementary::pi_interval(m + 16).square();
    let b0 = coeffs[0].scale(&rq::int(6)).div(&pi2).unwrap().round_out(m + 8);
    let mut terms = Vec::with_capacity(nmax);
    for n in 1..=nmax {
        let n2 = rq::int((n * n) as i64);
        let (cs, cc) = (&coeffs[2 * n - 1], &coeffs[2 * n]);
        let a = cs.scale(&-n2.clone());
        let sgn = if n % 2 == 0 { rq::int(1) } else { rq::int(-1) };
        let b = &b0.scale(&sgn) - &cc.scale(&n2);
        terms.push((a, b));
    }
    let out = RecoveredSeries { b0, terms };
    let too_wide = std::iter::once(&out.b0)
        .chain(out.terms.iter().flat_map(|(a, b)| [a, b]))
        .any(|e| e.width() > *tol);
    if too_wide {
        return Err(Error::ToleranceNotMet("recovered enclosures wider than tol".into()));
    }
    Ok(out)
}

/// Cosine series of `K(t) = F(x+t) + F(x-t) = b0 + Σ c_n cos nt` with
/// `c_n = 2(a_n sin nx + b_n cos nx)`; every sine coefficient vanishes.
#[derive(Clone, Debug)]
pub struct KroneckerSeries {
    pub constant: Rational,
    pub cos_coeffs: Vec<CReal>,
}

impl KroneckerSeries {
    /// Enclosure of `K(πt)`, width `< 2^-m`.
    pub fn eval(&self, t: &PiScaled, m: u32) -> RationalInterval {
        let mass = rq::int(self.cos_coeffs.len() as i64 + 1);
        let bits = m + 3 + rq::bits_above(&mass);
        let mut acc = RationalInterval::point(self.constant.clone());
        for (i, c) in self.cos_coeffs.iter().enumerate() {
            let cv = c.approx(bits + 3);
            let (_, cs) = trig_enclosure(i as u64 + 1, t, bits + 3 + rq::bits_above(&(cv.mag() + rq::int(1))));
            acc = (&acc + &(&cv * &cs)).round_out(bits + 2);
        }
        acc
    }
}

pub fn kronecker_fold(s: &TrigSeries, x: &PiScaled) -> KroneckerSeries {
    let cos_coeffs = s
        .terms
        .iter()
        .enumerate()
        .map(|(i, (a, b))| {
            let (a, b, x) = (a.clone(), b.clone(), x.clone());
            let n = i as u64 + 1;
            let mass = rq::bits_above(&((a.abs() + b.abs()) * rq::int(2) + rq::int(1)));
            CReal::from_fn(move |k| {
                let (sn, cs) = trig_enclosure(n, &x, k + 2 + mass);
                (&sn.scale(&(&a * rq::int(2))) + &cs.scale(&(&b * rq::int(2)))).round_out(k + 2)
            })
        })
        .collect();
    KroneckerSeries { constant: s.b0.clone(), cos_coeffs }
}

/// Coefficient enclosures of the folded series at width `< 2^-m`.
pub fn kronecker_fold_at(s: &TrigSeries, x: &PiScaled, m: u32) -> (Rational, Vec<RationalInterval>) {
    let k = kronecker_fold(s, x);
    let c = k.cos_coeffs.iter().map(|c| c.approx(m)).collect();
    (k.constant, c)
}

/// Result of the nested-interval construction for `|cos(mx + y_m)| >= 1/2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClWitness {
    pub x: PiScaled,
    pub selected_index: usize,
    /// Lower bound for `|cos(m x + y_m)|`.
    #[serde(with = "rq::serde_str")]
    pub amplitude: Rational,
    /// The sparse subsequence of `zeta` that was used.
    pub eta: Vec<usize>,
}

/// Builds `x` by nested intervals so that `|cos(k x + y_k)| >= 1/2` for every
/// selected frequency `k`; each selected index exceeds three times the
/// previous one, which makes a full window fit inside the last one.
///
/// `family[n] = (r_n, v_n)` with phase `y_n = π v_n`. At most `budget`
/// indices are selected. Reports `HypothesisFailed(m)` when `r_m >= 2^-p` at
/// the selected index `m`.
pub fn cantor_lebesgue_witness(
    family: &[(Rational, Rational)],
    zeta: &[usize],
    p: u32,
    budget: usize,
) -> Result<ClWitness> {
    if zeta.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Precondition("zeta must be strictly increasing".into()));
    }
    if let Some(&z) = zeta.iter().find(|&&z| z >= family.len()) {
        return Err(Error::Precondition(format!("family has no entry for index {z}")));
    }
    // π-scaled window [lo, hi]; starts as the whole of [-π, π].
    let (mut lo, mut hi) = (rq::int(-1), rq::int(1));
    let mut eta = Vec::new();
    let mut prev = 1usize;
    for &k in zeta {
        if eta.len() >= budget {
            break;
        }
        let needed = if eta.is_empty() { k > 1 } else { k > 3 * prev };
        if !needed {
            continue;
        }
        let kq = rq::int(k as i64);
        let v = &family[k].1;
        let third = rq::rat(1, 3);
        // Smallest integer j whose window (j - 1/3 - v)/k starts at or after lo.
        let j = (&kq * &lo + v + &third).ceil();
        let wlo = (&j - &third - v) / &kq;
        let whi = (&j + &third - v) / &kq;
        debug_assert!(wlo >= lo && whi <= hi, "window must nest");
        lo = wlo;
        hi = whi;
        eta.push(k);
        prev = k;
    }
    let m = *eta.last().ok_or_else(|| Error::Precondition("zeta has no index above 1".into()))?;
    let x = PiScaled::new((&lo + &hi) / rq::int(2))?;
    let arg = &x.u * rq::int(m as i64) + &family[m].1;
    let (_, c) = sin_cos_pi_point(&arg, 64);
    let amplitude = c.mig();
    if family[m].0.abs() >= rq::pow2(-(p as i64)) {
        return Err(Error::HypothesisFailed(m));
    }
    Ok(ClWitness { x, selected_index: m, amplitude, eta })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::func::Polynomial;
    use crate::rational::rat;

    fn pt(n: i64, d: i64) -> PiScaled {
        PiScaled::new(rat(n, d)).unwrap()
    }

    #[test]
    fn trig_enclosure_examples() {
        let (s, _) = trig_enclosure(1, &pt(1, 2), 20);
        assert!(s.contains(&rq::int(1)) && s.width() < rq::pow2(-20));
        let (s, c) = trig_enclosure(2, &pt(1, 2), 10);
        assert!(s.contains(&rq::int(0)) && c.contains(&rq::int(-1)));
        let (s, _) = trig_enclosure(3, &pt(1, 6), 20);
        assert!(s.contains(&rq::int(1)));
    }

    #[test]
    fn partial_sum_examples() {
        let e = eval_partial(&TrigSeries::single(1, rq::int(1), rq::int(0)), &pt(1, 2), 30);
        assert!(e.contains(&rq::int(1)) && e.width() < rq::pow2(-30));
        let e = eval_partial(&TrigSeries::constant(rq::int(2)), &pt(1, 7), 30);
        assert_eq!(e, RationalInterval::point(rq::int(1)));
        let e = eval_partial(&TrigSeries::single(1, rq::int(0), rq::int(1)), &pt(1, 3), 30);
        assert!(e.contains(&rat(1, 2)));
    }

    #[test]
    fn smoothed_examples() {
        let e = smooth_eval(&TrigSeries::constant(rq::int(2)), &pt(1, 1), 30);
        let half_pi2 = rq::parse("4.934802200544679").unwrap();
        assert!((e.mid() - half_pi2).abs() < rq::pow2(-30));
        assert!(e.width() < rq::pow2(-30));
        let e = smooth_eval(&TrigSeries::single(1, rq::int(1), rq::int(0)), &pt(1, 2), 30);
        assert!(e.contains(&rq::int(-1)));
        let s = TrigSeries::single(1, rq::int(1), rq::int(0));
        let t = smooth_eval_tail(&s, &pt(1, 2), 30, 11, &rq::int(1)).unwrap();
        assert!(t.width() >= rat(2, 10) && t.width() < rat(2, 10) + rq::pow2(-29));
        assert_eq!(tail_bound(11, &rq::int(1)), rat(1, 10));
    }

    #[test]
    fn quotient_examples() {
        let sq = Polynomial::square();
        let q = symmetric_quotient(&sq, &pt(0, 1), &rat(1, 4), 2, 20).unwrap();
        assert_eq!(q, RationalInterval::point(rq::int(2)));
        let q = symmetric_quotient(&sq, &pt(0, 1), &rat(1, 4), 1, 20).unwrap();
        assert_eq!(q, RationalInterval::point(rat(1, 2)));
        // sin x (sin(h/2)/(h/2))^2 at x = π/2, h = 1/8.
        let g = SmoothedFn(TrigSeries::single(1, rq::int(1), rq::int(0)));
        let q = symmetric_quotient(&g, &pt(1, 2), &rat(1, 8), 2, 30).unwrap();
        let expected = rq::parse("0.998698594645881").unwrap();
        assert!((q.mid() - expected).abs() < rq::pow2(-29));
        assert!(matches!(symmetric_quotient(&sq, &pt(1, 1), &rat(1, 8), 2, 10), Err(Error::DomainExceeded(_))));
    }

    #[test]
    fn probes_recover_f_and_zero() {
        let s = TrigSeries::single(1, rq::int(1), rq::int(0));
        let tol = rat(1, 1_000_000);
        let r = d2_probe(&s, &pt(1, 2), &tol, 14).unwrap();
        assert!(r.converged && r.limit_enclosure.contains(&rq::int(1)));
        assert_eq!(r.estimates.len(), r.h_schedule.len());
        let r = d1_probe(&TrigSeries::constant(rq::int(2)), &pt(1, 2), &tol, 24).unwrap();
        assert!(r.converged && r.limit_enclosure.contains(&rq::int(0)));
        assert!(r.to_csv().starts_with("h,lo,hi\n1/8,"));
    }

    #[test]
    fn fourier_identities_for_x_squared() {
        let sq = Polynomial::square();
        let c = fourier_coefficient(&sq, 1, TrigKind::Cos, 30).unwrap();
        assert!(c.contains(&rq::int(-4)) && c.width() < rq::pow2(-30));
        let c = fourier_coefficient(&sq, 2, TrigKind::Cos, 30).unwrap();
        assert!(c.contains(&rq::int(1)));
        let c = fourier_coefficient(&sq, 3, TrigKind::Sin, 30).unwrap();
        assert!(c.contains(&rq::int(0)));
        let no_mod = crate::func::ClosureFn::new(|x, _| x.clone(), None);
        assert_eq!(fourier_coefficient(&no_mod, 1, TrigKind::Cos, 10), Err(Error::NoModulus));
    }

    #[test]
    fn recovery_examples() {
        let tol = rat(1, 1_000_000);
        let z = recover_coefficients(&TrigSeries { b0: rq::int(0), terms: vec![(rq::int(0), rq::int(0)); 2] }, &tol).unwrap();
        assert!(z.max_magnitude() < tol);
        let s = TrigSeries::single(1, rq::int(1), rq::int(0));
        assert!(recover_coefficients(&s, &tol).unwrap().within(&s, &tol));
        let s = TrigSeries { b0: rq::int(2), terms: vec![(rq::int(0), rq::int(0)); 3] };
        assert!(recover_coefficients(&s, &tol).unwrap().within(&s, &tol));
    }

    #[test]
    fn kronecker_examples() {
        let (c0, c) = kronecker_fold_at(&TrigSeries::single(1, rq::int(1), rq::int(0)), &pt(1, 2), 20);
        assert_eq!(c0, rq::int(0));
        assert!(c[0].contains(&rq::int(2)));
        let (c0, c) = kronecker_fold_at(&TrigSeries::constant(rq::int(4)), &pt(1, 5), 20);
        assert_eq!((c0, c.len()), (rq::int(4), 0));
        let (_, c) = kronecker_fold_at(&TrigSeries::single(1, rq::int(0), rq::int(1)), &pt(1, 3), 20);
        assert!(c[0].contains(&rq::int(1)));
    }

    #[test]
    fn cantor_lebesgue_examples() {
        let zeta: Vec<usize> = (0..64).collect();
        let zero: Vec<_> = (0..64).map(|_| (rq::int(0), rq::int(0))).collect();
        let w = cantor_lebesgue_witness(&zero, &zeta, 3, 64).unwrap();
        assert_eq!(w.eta, vec![2, 7, 22]);
        assert!(w.amplitude >= rat(1, 2));
        let decay: Vec<_> = (0..64).map(|n| (rq::pow2(-(n as i64)), rq::int(0))).collect();
        let w = cantor_lebesgue_witness(&decay, &zeta, 3, 64).unwrap();
        assert!(w.selected_index >= 4 && w.amplitude >= rat(1, 2));
        let flat: Vec<_> = (0..64).map(|_| (rq::int(1), rq::int(0))).collect();
        assert_eq!(cantor_lebesgue_witness(&flat, &zeta, 3, 64), Err(Error::HypothesisFailed(22)));
    }

    #[test]
    fn series_json_round_trip() {
        let s = TrigSeries { b0: rat(1, 2), terms: vec![(rat(-1, 3), rq::int(2))] };
        let j = serde_json::to_string(&s).unwrap();
        assert_eq!(j, r#"{"b0":"1/2","terms":[["-1/3","2"]]}"#);
        assert_eq!(serde_json::from_str::<TrigSeries>(&j).unwrap(), s);
        assert_eq!(serde_json::to_string(&pt(1, 2)).unwrap(), r#"{"u":"1/2"}"#);
    }
}
