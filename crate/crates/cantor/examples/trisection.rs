//! Locating a point where a function rises above its chord by a margin,
//! then certifying the second symmetric derivative there.

use std::sync::Arc;

use cantor::func::{FnHandle, Polynomial};
use cantor::interval::RationalInterval;
use cantor::rational::{self as rq, int, rat};
use cantor::schwarz;

fn main() {
    // G(x) = x(1 - x) on [0, 1], ε = 1/4.
    let g: FnHandle = Arc::new(Polynomial::new(vec![int(0), int(1), int(-1)]));
    let eps = rat(1, 4);
    let cert = schwarz::rho_z_search(&g, &int(0), &int(1), &rat(1, 2), &RationalInterval::point(eps.clone()), 20).unwrap();
    let rho = cert.rho_point();
    println!("ρ ≈ {:.9}, z ≈ {:.9}", rq::to_f64(&rho), rq::to_f64(&cert.z_point));
    println!("closed form 1/2 + 2ρ/3 = {:.9}", rq::to_f64(&(rat(1, 2) + &rho * rat(2, 3))));
    println!("margins verify: {}", schwarz::verify_margins(&cert, &g).unwrap());
    println!("{}", cert.to_csv().lines().take(4).collect::<Vec<_>>().join("\n"));

    let z = RationalInterval::point(cert.z_point.clone());
    let rep = schwarz::d2_bound_certificate(&*g, &z, &eps, &RationalInterval::point(int(1)), &rq::parse("1e-6").unwrap()).unwrap();
    println!("D²G(z) ∈ {} ≤ {}: {}", rep.quotient, rep.bound, rep.holds);
}
