//! A series that vanishes off a small exceptional set has zero coefficients:
//! vanishing check, local linearity, then coefficient recovery.

use cantor::cbsets;
use cantor::cli::{uniqueness_demo, Exceptional};
use cantor::rational::{self as rq, int, rat};
use cantor::trigseries::TrigSeries;

fn main() {
    let tol = rq::parse("1e-6").unwrap();
    let tree = cbsets::cb_uniform(1, (rat(-1, 2), rat(1, 2)), &rat(1, 2)).unwrap();
    let cases = [
        ("zero series, finite set", TrigSeries::zero(), Exceptional::Finite { points: vec!["0".into(), "1/3".into()] }),
        ("zero series, CB set", TrigSeries::zero(), Exceptional::Cbset { tree }),
        ("cos x, no exceptions", TrigSeries::single(1, int(0), int(1)), Exceptional::None),
    ];
    for (name, s, x) in cases {
        let rep = uniqueness_demo(&s, &x, 33, 40, &tol, 6, 40).unwrap();
        println!("{name}: pass = {}, failed stage = {:?}", rep.pass, rep.failed_stage);
        for st in &rep.stages {
            println!("  {st:?}");
        }
    }
}
