//! Fourier coefficients by rigorous quadrature, and recovery of a series
//! from its smoothed function alone.

use cantor::func::Polynomial;
use cantor::rational::{self as rq, rat};
use cantor::trigseries::{self, TrigKind, TrigSeries};

fn main() {
    let sq = Polynomial::square();
    for n in 1..=4 {
        let c = trigseries::fourier_coefficient(&sq, n, TrigKind::Cos, 30).unwrap();
        println!("(1/π)∫ x² cos {n}x dx ∈ {c}");
    }

    let s = TrigSeries { b0: rat(1, 4), terms: vec![(rat(1, 2), rat(0, 1)), (rat(-1, 3), rat(2, 3))] };
    let rec = trigseries::recover_coefficients(&s, &rq::parse("1e-6").unwrap()).unwrap();
    println!("b0 ∈ {}", rec.b0);
    for (n, (a, b)) in rec.terms.iter().enumerate() {
        println!("a{} ∈ {a}\nb{} ∈ {b}", n + 1, n + 1);
    }
    println!("within 1e-6: {}", rec.within(&s, &rq::parse("1e-6").unwrap()));
}
