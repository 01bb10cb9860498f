//! Finite subcovers by searching the binary tree of thirds until every
//! branch meets a covering interval; located sets get the same treatment.

use cantor::cbsets;
use cantor::covering::{self, uniform_radius};
use cantor::rational::{int, rat};

fn main() {
    let amb = (int(0), int(1));
    for r in [rat(1, 4), rat(1, 16), rat(1, 64)] {
        let cert = covering::heine_borel_subcover(&amb, &uniform_radius(r.clone()), 20).unwrap();
        let gap = cert.grid_sweep(&amb.0, &amb.1, 10_000);
        println!("radius {r}: {} pieces, sweep hole: {gap:?}", cert.pieces.len());
    }

    let t = cbsets::cb_uniform(2, amb.clone(), &rat(1, 2)).unwrap();
    let cert = covering::located_subcover(&t, &amb, &uniform_radius(rat(1, 16)), 24).unwrap();
    let covered = (0..=200).all(|n| cert.covers(&cbsets::cb_index(&t, n)));
    println!("depth-2 set: {} pieces, first 201 points covered: {covered}", cert.pieces.len());

    match covering::heine_borel_subcover(&amb, &uniform_radius(rat(1, 1 << 20)), 4) {
        Err(e) => println!("tiny radius with depth cap 4: {e}"),
        Ok(c) => println!("unexpected cover with {} pieces", c.pieces.len()),
    }
}
