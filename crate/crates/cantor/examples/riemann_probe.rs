//! Symmetric difference quotients of the smoothed function `G` recover the
//! series value (order 2) and vanish (order 1).

use cantor::rational::{self as rq, rat};
use cantor::trigseries::{self, PiScaled, TrigSeries};

fn main() {
    let s = TrigSeries { b0: rat(1, 2), terms: vec![(rat(1, 3), rat(-1, 4)), (rat(0, 1), rat(1, 5))] };
    let tol = rq::parse("1e-6").unwrap();
    for u in [rat(0, 1), rat(1, 3), rat(-5, 7)] {
        let x = PiScaled::new(u.clone()).unwrap();
        let f = trigseries::eval_partial(&s, &x, 40);
        let d2 = trigseries::d2_probe(&s, &x, &tol, 12).unwrap();
        let d1 = trigseries::d1_probe(&s, &x, &tol, 20).unwrap();
        println!("x = {}·π", rq::fmt(&u));
        println!("  F(x)        {:.12}", f.mid_f64());
        println!("  D2 limit    {:.12} (width {:.1e})", d2.limit_enclosure.mid_f64(), rq::to_f64(&d2.limit_enclosure.width()));
        println!("  D1 limit    {} contains 0: {}", d1.limit_enclosure, d1.limit_enclosure.contains(&rq::int(0)));
    }
}
