//! Given any list of reals, descend a tree of separated intervals to build
//! a point apart from every entry.

use std::sync::Arc;

use cantor::creals::CReal;
use cantor::rational::{self as rq, int, rat};
use cantor::schwarz::{self, SeparatedTree, ThirdsTree};

fn main() {
    let tree: Arc<dyn SeparatedTree> = Arc::new(ThirdsTree { lo: int(0), hi: int(1) });
    let f: Vec<CReal> = (0..16).map(|n| CReal::from_rational(rat(n, 15))).chain([CReal::pi().scale(&rat(1, 4))]).collect();
    let av = schwarz::diagonal_avoid(tree, &f).unwrap();
    println!("x ≈ {:.15}", av.x.to_f64());
    for w in av.witnesses.iter().take(5) {
        println!("  |x - f({})| > {}", w.index, rq::fmt(&w.w));
    }
    println!("all witnesses verified: {}", schwarz::check_avoidance(&av, &f, 80));
}
