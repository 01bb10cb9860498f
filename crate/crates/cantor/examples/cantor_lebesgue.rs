//! Nested intervals that keep |cos(m x + y_m)| >= 1/2 along a sparse set of
//! frequencies, so coefficients that shrink can be isolated.

use cantor::elementary;
use cantor::rational::{self as rq, int, rat};
use cantor::trigseries;

fn main() {
    let family: Vec<_> = (0..40).map(|n| (rq::pow2(-(n as i64)), rat((n * 37 % 101) as i64, 101))).collect();
    let zeta: Vec<usize> = (0..40).collect();
    let w = trigseries::cantor_lebesgue_witness(&family, &zeta, 8, 3).unwrap();
    let m = w.selected_index;
    let (_, c) = elementary::sin_cos_pi_point(&(&w.x.u * int(m as i64) + &family[m].1), 64);
    println!("x = {}·π, frequencies used {:?}", rq::fmt(&w.x.u), w.eta);
    println!("selected m = {m}: |cos| ∈ [{:.6}, ...], amplitude bound {}", rq::to_f64(&c.mig()), rq::fmt(&w.amplitude));
    println!("r_m = 2^-{m} < 2^-8: {}", family[m].0 < rq::pow2(-8));
}
