//! Pointwise-evaluable real functions on real-coordinate intervals.

use std::sync::Arc;

use crate::elementary;
use crate::interval::RationalInterval;
use crate::rational::{self as rq, Rational};

/// A real function that can be enclosed over rational intervals.
///
/// `eval(x, bits)` must contain `H(t)` for every `t` in `x`; the extra width
/// caused by rounding is below `2^-bits`. Derivative enclosures and a
/// Lipschitz bound are optional and act as moduli of continuity.
pub trait RealFn: Send + Sync {
    fn eval(&self, x: &RationalInterval, bits: u32) -> RationalInterval;

    /// `H(πu)` for an exact rational `u`.
    fn eval_pi(&self, u: &Rational, bits: u32) -> RationalInterval {
        let k = rq::bits_above(&(u * rq::int(4))) + 4;
        let x = elementary::pi_interval(bits + k).scale(u);
        self.eval(&x, bits + 2)
    }

    /// Enclosure of the `order`-th derivative over `x`, if known.
    fn derivative(&self, _order: u32, _x: &RationalInterval, _bits: u32) -> Option<RationalInterval> {
        None
    }

    /// A bound on `|H(s) - H(t)| / |s - t|` for `s, t` in `[lo, hi]`.
    fn lipschitz(&self, lo: &Rational, hi: &Rational) -> Option<Rational> {
        self.derivative(1, &RationalInterval::new(lo.clone(), hi.clone()), 24).map(|d| d.mag())
    }
}

pub type FnHandle = Arc<dyn RealFn>;

/// Dense polynomial `c0 + c1 x + ... + cd x^d`.
#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial {
    pub coeffs: Vec<Rational>,
}

impl Polynomial {
    pub fn new(coeffs: Vec<Rational>) -> Self {
        Polynomial { coeffs }
    }

    /// `x^2`.
    pub fn square() -> Self {
        Polynomial::new(vec![rq::int(0), rq::int(0), rq::int(1)])
    }

    pub fn derive(&self) -> Polynomial {
        let c = self.coeffs.iter().enumerate().skip(1).map(|(i, c)| c * rq::int(i as i64)).collect();
        Polynomial::new(c)
    }

    pub fn value(&self, x: &Rational) -> Rational {
        let mut acc = rq::int(0);
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    fn horner(&self, x: &RationalInterval, bits: u32) -> RationalInterval {
        if x.is_point() {
            return RationalInterval::point(self.value(&x.lo));
        }
        let mut acc = RationalInterval::zero();
        for c in self.coeffs.iter().rev() {
            acc = (&(&acc * x) + &RationalInterval::point(c.clone())).round_out(bits + 8);
        }
        acc
    }
}

impl RealFn for Polynomial {
    fn eval(&self, x: &RationalInterval, bits: u32) -> RationalInterval {
        self.horner(x, bits)
    }

    fn derivative(&self, order: u32, x: &RationalInterval, bits: u32) -> Option<RationalInterval> {
        let mut p = self.clone();
        for _ in 0..order {
            p = p.derive();
        }
        Some(p.horner(x, bits))
    }
}

/// Pointwise sum of handles.
#[derive(Clone)]
pub struct SumFn(pub Vec<FnHandle>);

impl RealFn for SumFn {
    fn eval(&self, x: &RationalInterval, bits: u32) -> RationalInterval {
        let k = 2 + (self.0.len() as u32).next_power_of_two().trailing_zeros();
        self.0.iter().fold(RationalInterval::zero(), |acc, f| &acc + &f.eval(x, bits + k))
    }

    fn eval_pi(&self, u: &Rational, bits: u32) -> RationalInterval {
        let k = 2 + (self.0.len() as u32).next_power_of_two().trailing_zeros();
        self.0.iter().fold(RationalInterval::zero(), |acc, f| &acc + &f.eval_pi(u, bits + k))
    }

    fn derivative(&self, order: u32, x: &RationalInterval, bits: u32) -> Option<RationalInterval> {
        let k = 2 + (self.0.len() as u32).next_power_of_two().trailing_zeros();
        let mut acc = RationalInterval::zero();
        for f in &self.0 {
            acc = &acc + &f.derivative(order, x, bits + k)?;
        }
        Some(acc)
    }

    fn lipschitz(&self, lo: &Rational, hi: &Rational) -> Option<Rational> {
        let mut acc = rq::int(0);
        for f in &self.0 {
            acc += f.lipschitz(lo, hi)?;
        }
        Some(acc)
    }
}

type EvalClosure = dyn Fn(&RationalInterval, u32) -> RationalInterval + Send + Sync;

/// A function given by an enclosure closure and an optional global
/// Lipschitz constant.
#[derive(Clone)]
pub struct ClosureFn {
    f: Arc<EvalClosure>,
    lip: Option<Rational>,
}

impl ClosureFn {
    pub fn new<F>(f: F, lipschitz: Option<Rational>) -> Self
    where
        F: Fn(&RationalInterval, u32) -> RationalInterval + Send + Sync + 'static,
    {
        ClosureFn { f: Arc::new(f), lip: lipschitz }
    }
}

impl RealFn for ClosureFn {
    fn eval(&self, x: &RationalInterval, bits: u32) -> RationalInterval {
        (self.f)(x, bits)
    }

    fn lipschitz(&self, _lo: &Rational, _hi: &Rational) -> Option<Rational> {
        self.lip.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn polynomial_values_and_derivatives() {
        let p = Polynomial::new(vec![rat(0, 1), rat(1, 1), rat(-1, 1)]);
        assert_eq!(p.value(&rat(1, 2)), rat(1, 4));
        let d = p.derivative(1, &RationalInterval::point(rat(1, 4)), 10).unwrap();
        assert_eq!(d, RationalInterval::point(rat(1, 2)));
        assert_eq!(p.derivative(2, &RationalInterval::point(rat(3, 1)), 10).unwrap().lo, rat(-2, 1));
        assert_eq!(p.derivative(3, &RationalInterval::point(rat(3, 1)), 10).unwrap().lo, rat(0, 1));
        let j = RationalInterval::new(rat(0, 1), rat(1, 1));
        let e = p.eval(&j, 20);
        assert!(e.contains(&rat(0, 1)) && e.contains(&rat(1, 4)));
        assert_eq!(p.lipschitz(&rat(0, 1), &rat(1, 1)), Some(rat(1, 1)));
    }

    #[test]
    fn eval_pi_uses_a_pi_enclosure() {
        let sq = Polynomial::square();
        let v = sq.eval_pi(&rat(1, 1), 30);
        assert!(v.contains(&rq::parse("9.869604401089358").unwrap()));
        assert!(v.width() < rq::pow2(-28));
    }

    #[test]
    fn sums_and_closures() {
        let s = SumFn(vec![Arc::new(Polynomial::square()), Arc::new(Polynomial::new(vec![rat(1, 1)]))]);
        assert_eq!(s.eval(&RationalInterval::point(rat(2, 1)), 10), RationalInterval::point(rat(5, 1)));
        assert_eq!(s.lipschitz(&rat(0, 1), &rat(1, 1)), Some(rat(2, 1)));
        let c = ClosureFn::new(|x, _| x.clone(), None);
        assert!(c.lipschitz(&rat(0, 1), &rat(1, 1)).is_none());
    }
}
