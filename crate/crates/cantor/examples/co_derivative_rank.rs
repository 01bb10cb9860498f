//! The co-derivative absorbs isolated missing points; iterating it measures
//! how far an open set is from its ambient interval.

use cantor::opensets::{self, Rank};
use cantor::rational::{int, rat};

fn main() {
    let amb = (int(0), int(1));
    // (0,1) minus {1/4, 1/2, 3/4}: one step fills it.
    let g = opensets::normalize(&[(int(0), rat(1, 4)), (rat(1, 4), rat(1, 2)), (rat(1, 2), rat(3, 4)), (rat(3, 4), int(1))], &amb).unwrap();
    report("three holes", &g);

    // A closed gap never fills: every point of [2/5, 3/5] stays excluded.
    let h = opensets::normalize(&[(int(0), rat(2, 5)), (rat(3, 5), int(1))], &amb).unwrap();
    report("closed gap", &h);
}

fn report(name: &str, g: &opensets::OpenSet) {
    let r = opensets::fullness_rank(g, 10);
    match r.rank {
        Rank::Full(k) => println!("{name}: full after {k} step(s)"),
        Rank::NotFullWithin(k) => println!("{name}: not full within {k}"),
    }
    for (k, s) in r.stages.iter().enumerate() {
        println!("  stage {k}: {} component(s)", s.components().len());
    }
}
