//! Closed sets built from converging endpoint sequences: enumeration,
//! distance, and the fullness rank of the complement.

use cantor::cbsets;
use cantor::creals::CReal;
use cantor::opensets::{self, Rank};
use cantor::rational::{self as rq, rat};

fn main() {
    for depth in 1..=3 {
        let t = cbsets::cb_uniform(depth, opensets::unit_ambient(), &rat(1, 2)).unwrap();
        let first: Vec<String> = (0..8).map(|n| rq::fmt(&cbsets::cb_index(&t, n))).collect();
        let rank = match cbsets::cb_fullness(&t, 6, 12).rank {
            Rank::Full(k) => k.to_string(),
            Rank::NotFullWithin(k) => format!("> {k}"),
        };
        let d = cbsets::cb_distance(&t, &CReal::from_rational(rat(3, 10)), 30);
        println!("depth {depth}: first points [{}]", first.join(", "));
        println!("  fullness rank {rank}, d(3/10, F) ≈ {:.9}", d.mid_f64());
    }
}
