//! Constructive reals: enclosures, comparison with a budget, and the
//! co-transitive split that decides which side of `x < z` a third real lies.

use cantor::creals::{self, CReal, Split};
use cantor::rational::{int, rat};

fn main() {
    let pi = CReal::pi();
    for n in [10, 40, 100] {
        println!("pi to 2^-{n}: {}", pi.approx(n));
    }

    let third = CReal::from_rational(rat(22, 7));
    println!("compare(pi, 22/7) = {:?}", creals::compare(&pi, &third, 60));

    // 3 < 4, so pi is either above 3 or below 4 with a certified gap.
    let (x, z) = (CReal::from_int(3), CReal::from_int(4));
    match creals::cotransitive_split(&x, &z, 0, &pi).unwrap() {
        Split::LeftGap { bound, gap, .. } => println!("pi >= {bound} + {gap}"),
        Split::RightGap { bound, gap, .. } => println!("pi <= {bound} - {gap}"),
    }

    let y = pi.mul(&pi).sub(&CReal::from_rational(int(10)));
    println!("pi^2 - 10 ~ {:.12}", y.to_f64());
}
