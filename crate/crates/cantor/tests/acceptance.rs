//! Acceptance criteria, one PASS/FAIL line each. Runs without the libtest
//! harness so the lines always reach the output; exits non-zero on failure.

use std::collections::HashMap;
use std::sync::Arc;
use std::time::{Duration, Instant};

use cantor::cbsets::{self, CbTree};
use cantor::cli::{uniqueness_demo, Exceptional};
use cantor::covering::{self, uniform_radius};
use cantor::creals::{self, CReal, OrderVerdict, Split};
use cantor::elementary;
use cantor::func::{FnHandle, Polynomial};
use cantor::interval::RationalInterval;
use cantor::opensets::{self, OpenSet};
use cantor::rational::{self as rq, int, rat, Rational};
use cantor::schwarz::{self, SeparatedTree, ThirdsTree};
use cantor::trigseries::{self, PiScaled, TrigKind, TrigSeries};
use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = std::result::Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Rational in [-1, 1] with denominator 64.
fn coef(r: &mut ChaCha8Rng) -> Rational {
    rat(r.gen_range(-64..=64), 64)
}

fn random_series(r: &mut ChaCha8Rng) -> TrigSeries {
    let n = r.gen_range(1..=8);
    TrigSeries { b0: coef(r), terms: (0..n).map(|_| (coef(r), coef(r))).collect() }
}

/// 50 equispaced π-scaled points of [-9/10, 9/10], inside the probe domain.
fn probe_grid() -> Vec<PiScaled> {
    (0..50).map(|i| PiScaled::new(rat(-9, 10) + rat(18, 10) * rat(i, 49)).unwrap()).collect()
}

const SERIES_SEED: u64 = 20;
const WIDTH: f64 = 1e-6;

fn c1_second_symmetric_derivative() -> Check {
    let start = Instant::now();
    let mut r = rng(SERIES_SEED);
    let tol = rq::parse("4e-7").unwrap();
    let width = rq::parse("1e-6").unwrap();
    let mut worst = int(0);
    for s in 0..20 {
        let series = random_series(&mut r);
        for x in probe_grid() {
            let p = trigseries::d2_probe(&series, &x, &tol, 12).map_err(|e| e.to_string())?;
            let f = trigseries::eval_partial(&series, &x, 40);
            let combined = p.limit_enclosure.width() + f.width();
            if !p.limit_enclosure.overlaps(&f) || combined >= width {
                return Err(format!("series {s} at u = {}: limit {:?} vs F {:?}", rq::fmt(&x.u), p.limit_enclosure, f));
            }
            worst = rq::max(&worst, &combined);
        }
    }
    let t = start.elapsed();
    if t > Duration::from_secs(60) {
        return Err(format!("runtime {t:.1?} exceeds 60 s"));
    }
    Ok(format!("1000 probes, worst combined width {:.2e}, {t:.1?}", rq::to_f64(&worst)))
}

fn c2_first_symmetric_derivative() -> Check {
    let start = Instant::now();
    let mut r = rng(SERIES_SEED);
    let tol = rq::parse("4e-7").unwrap();
    let mut worst = int(0);
    for s in 0..20 {
        let series = random_series(&mut r);
        for x in probe_grid() {
            let p = trigseries::d1_probe(&series, &x, &tol, 23).map_err(|e| e.to_string())?;
            let l = &p.limit_enclosure;
            if !l.contains(&int(0)) || rq::to_f64(&l.width()) >= WIDTH {
                return Err(format!("series {s} at u = {}: limit {l:?}", rq::fmt(&x.u)));
            }
            worst = rq::max(&worst, &l.width());
        }
    }
    Ok(format!("1000 probes contain 0, worst width {:.2e}, {:.1?}", rq::to_f64(&worst), start.elapsed()))
}

fn c3_square_cosine_integrals() -> Check {
    let sq = Polynomial::square();
    let tol = rq::parse("1e-8").unwrap();
    let mut req = Vec::new();
    for n in 1..=8u64 {
        req.push((n, TrigKind::Cos));
        req.push((n, TrigKind::Sin));
    }
    let vals = trigseries::fourier_coefficients(&sq, &req, 30).map_err(|e| e.to_string())?;
    for (i, (n, kind)) in req.iter().enumerate() {
        let sign = if n % 2 == 0 { 1 } else { -1 };
        let expect = match kind {
            TrigKind::Cos => rat(4 * sign, (n * n) as i64),
            TrigKind::Sin => int(0),
        };
        let e = &vals[i];
        if !e.contains(&expect) || e.width() > tol {
            return Err(format!("n = {n} {kind:?}: {e:?} vs {}", rq::fmt(&expect)));
        }
    }
    // Same identity through the single-coefficient entry point.
    let one = trigseries::fourier_coefficient(&sq, 3, TrigKind::Cos, 30).map_err(|e| e.to_string())?;
    if !one.contains(&rat(-4, 9)) {
        return Err(format!("single call n = 3: {one:?}"));
    }
    Ok("cos integrals enclose (-1)^n 4/n^2 and sin integrals enclose 0 for n = 1..8 at width <= 1e-8".into())
}

fn c4_coefficient_recovery() -> Check {
    let start = Instant::now();
    let mut r = rng(SERIES_SEED + 4);
    let tol = rq::parse("1e-6").unwrap();
    for s in 0..20 {
        let series = random_series(&mut r);
        let rec = trigseries::recover_coefficients(&series, &tol).map_err(|e| format!("series {s}: {e}"))?;
        if !rec.within(&series, &tol) {
            return Err(format!("series {s}: recovered {rec:?}"));
        }
    }
    Ok(format!("20 series recovered within 1e-6 per coefficient, {:.1?}", start.elapsed()))
}

fn random_open(r: &mut ChaCha8Rng) -> OpenSet {
    let amb = opensets::unit_ambient();
    let n = r.gen_range(0..=6);
    let raw: Vec<_> = (0..n)
        .map(|_| {
            let a = r.gen_range(-16..16);
            let b = r.gen_range(a + 1..=16);
            (rat(a, 16), rat(b, 16))
        })
        .collect();
    opensets::normalize(&raw, &amb).unwrap()
}

fn grid_subset(g: &OpenSet, h: &OpenSet) -> bool {
    (-128..=128).map(|i| rat(i, 128)).all(|x| !g.contains_point(&x) || h.contains_point(&x))
}

fn c5_co_derivative_laws() -> Check {
    let mut r = rng(5);
    let amb = opensets::unit_ambient();
    for i in 0..500 {
        let g = random_open(&mut r);
        let extra = random_open(&mut r);
        let h = opensets::union_of(&[g.clone(), extra], &amb).unwrap();
        let g1 = random_open(&mut r);
        let gp = opensets::co_derivative(&g);
        if !g.is_subset(&gp) {
            return Err(format!("inflation fails for {g:?}"));
        }
        if !gp.is_subset(&opensets::co_derivative(&h)) {
            return Err(format!("monotonicity fails for {g:?} ⊆ {h:?}"));
        }
        let lhs = opensets::intersect(&gp, &g1).unwrap();
        let rhs = opensets::co_derivative(&opensets::intersect(&g, &g1).unwrap());
        if !lhs.is_subset(&rhs) || !grid_subset(&lhs, &rhs) {
            return Err(format!("G0⁺ ∩ G1 ⊆ (G0 ∩ G1)⁺ fails for {g:?}, {g1:?}"));
        }
        let v = rat(r.gen_range(-15..=15), 16);
        let a = opensets::translate_wrap(&gp, &v).unwrap();
        let b = opensets::co_derivative(&opensets::translate_wrap(&g, &v).unwrap());
        if a != b {
            return Err(format!("case {i}: translation by {} does not commute for {g:?}: {a:?} vs {b:?}", rq::fmt(&v)));
        }
    }
    Ok("inflation, monotonicity, intersection inclusion and translation hold on 500 random sets".into())
}

/// Points of a uniform tree with every sequence index `<= t`, generated
/// directly from the geometry.
fn tree_points(a: &Rational, b: &Rational, depth: usize, r: &Rational, t: usize, out: &mut Vec<Rational>) {
    out.push(a.clone());
    out.push(b.clone());
    if depth == 0 {
        return;
    }
    let c = (a + b) / int(2);
    out.push(c.clone());
    let mut rk = int(1);
    for _ in 0..=t {
        let rk1 = &rk * r;
        let (l0, l1) = (&c - (&c - a) * &rk, &c - (&c - a) * &rk1);
        let (r0, r1) = (&c + (b - &c) * &rk1, &c + (b - &c) * &rk);
        tree_points(&l0, &l1, depth - 1, r, t, out);
        tree_points(&r0, &r1, depth - 1, r, t, out);
        rk = rk1;
    }
}

/// Derived-set iteration on truncations: `p` survives at step `k` when its
/// nearest surviving neighbour moves closer as the truncation deepens.
struct BruteRank {
    depth: usize,
    memo: HashMap<(usize, usize), Vec<Rational>>,
}

impl BruteRank {
    fn level(&mut self, k: usize, t: usize) -> Vec<Rational> {
        if let Some(v) = self.memo.get(&(k, t)) {
            return v.clone();
        }
        let v = if k == 0 {
            let mut v = Vec::new();
            tree_points(&int(-1), &int(1), self.depth, &rat(1, 2), t, &mut v);
            v.sort();
            v.dedup();
            v
        } else {
            let base = self.level(k - 1, t);
            let s1 = self.level(k - 1, t + 1);
            let s2 = self.level(k - 1, t + 2);
            base.into_iter().filter(|p| closer(nn(p, &s2), nn(p, &s1))).collect()
        };
        self.memo.insert((k, t), v.clone());
        v
    }
}

fn nn(p: &Rational, s: &[Rational]) -> Option<Rational> {
    let i = s.partition_point(|q| q < p);
    let mut best: Option<Rational> = None;
    for j in [i.wrapping_sub(1), i, i + 1] {
        if let Some(q) = s.get(j) {
            if q != p {
                let d = (q - p).abs();
                if best.as_ref().is_none_or(|b| d < *b) {
                    best = Some(d);
                }
            }
        }
    }
    best
}

/// `a < b` with `None` as +∞.
fn closer(a: Option<Rational>, b: Option<Rational>) -> bool {
    match (a, b) {
        (Some(a), Some(b)) => a < b,
        (Some(_), None) => true,
        _ => false,
    }
}

fn c6_fullness_ranks() -> Check {
    let mut lines = Vec::new();
    for d in 1..=3 {
        let t = cbsets::cb_uniform(d, opensets::unit_ambient(), &rat(1, 2)).unwrap();
        let report = cbsets::cb_fullness(&t, 6, 12);
        let rank = match report.rank {
            opensets::Rank::Full(k) => k,
            opensets::Rank::NotFullWithin(k) => return Err(format!("depth {d}: not full within {k}")),
        };
        let mut brute = BruteRank { depth: d, memo: HashMap::new() };
        let ends = [int(-1), int(1)];
        let brute_rank = (0..=2 * d + 2)
            .find(|&k| brute.level(k, 6).iter().all(|p| ends.contains(p)))
            .ok_or_else(|| format!("depth {d}: brute force did not terminate"))?;
        if rank != brute_rank {
            return Err(format!("depth {d}: library rank {rank}, brute force {brute_rank}"));
        }
        lines.push(format!("d={d}: {rank} (2d = {})", 2 * d));
    }
    Ok(format!("library and brute force agree: {}", lines.join(", ")))
}

fn c7_heine_borel() -> Check {
    let amb = (int(0), int(1));
    let mut sizes = Vec::new();
    for r in [rat(1, 4), rat(1, 16), rat(1, 64)] {
        let cert = covering::heine_borel_subcover(&amb, &uniform_radius(r.clone()), 20).map_err(|e| e.to_string())?;
        if let Some(x) = cert.grid_sweep(&amb.0, &amb.1, 10_000) {
            return Err(format!("r = {}: {} uncovered", rq::fmt(&r), rq::fmt(&x)));
        }
        sizes.push(cert.pieces.len());
    }
    for d in 0..=2 {
        let t: CbTree = cbsets::cb_uniform(d, amb.clone(), &rat(1, 2)).unwrap();
        let cert = covering::located_subcover(&t, &amb, &uniform_radius(rat(1, 16)), 24).map_err(|e| e.to_string())?;
        if let Some(n) = (0..=200).find(|&n| !cert.covers(&cbsets::cb_index(&t, n))) {
            return Err(format!("depth {d}: enumerated point {n} uncovered"));
        }
    }
    Ok(format!("uniform-radius certificates of {sizes:?} pieces pass 10^4-point sweeps; located covers hold indices 0..=200 for d <= 2"))
}

fn c8_trisection() -> Check {
    let g: FnHandle = Arc::new(Polynomial::new(vec![int(0), int(1), int(-1)]));
    let eps = rat(1, 4);
    let cert = schwarz::rho_z_search(&g, &int(0), &int(1), &rat(1, 2), &RationalInterval::point(eps.clone()), 20)
        .map_err(|e| e.to_string())?;
    let rho = cert.rho_point();
    let residual = (&cert.z_point - (rat(1, 2) + &rho * rat(2, 3))).abs();
    if residual >= rq::parse("1e-4").unwrap() {
        return Err(format!("|z - (1/2 + 2ρ/3)| = {:.3e}", rq::to_f64(&residual)));
    }
    if !schwarz::verify_margins(&cert, &g).map_err(|e| e.to_string())? {
        return Err("margin schedule does not verify".into());
    }
    let rep = schwarz::d2_bound_certificate(
        &*g,
        &RationalInterval::point(cert.z_point.clone()),
        &eps,
        &RationalInterval::point(int(1)),
        &rq::parse("1e-6").unwrap(),
    )
    .map_err(|e| e.to_string())?;
    if !rep.holds || !rep.quotient.contains(&int(-2)) {
        return Err(format!("second-derivative bound: {rep:?}"));
    }
    Ok(format!(
        "ρ ≈ {:.6}, z ≈ {:.6}, residual {:.1e}, margins verified, quotient -2 <= {}",
        rq::to_f64(&rho),
        rq::to_f64(&cert.z_point),
        rq::to_f64(&residual),
        rq::fmt(&rep.bound.lo)
    ))
}

fn c9_diagonal_avoidance() -> Check {
    let mut r = rng(9);
    let tree: Arc<dyn SeparatedTree> = Arc::new(ThirdsTree { lo: int(0), hi: int(1) });
    let mut min_w: Option<Rational> = None;
    for trial in 0..100 {
        let f: Vec<CReal> = (0..64)
            .map(|_| {
                // Mix generic rationals with tree endpoints, the hardest values.
                if r.gen_bool(0.25) {
                    let k = r.gen_range(1..12u32);
                    let j = r.gen_range(0..=3i64.pow(k));
                    CReal::from_rational(rat(j, 3i64.pow(k)))
                } else {
                    CReal::from_rational(rat(r.gen_range(0..=1_000_000), 1_000_000))
                }
            })
            .collect();
        let av = schwarz::diagonal_avoid(tree.clone(), &f).map_err(|e| format!("trial {trial}: {e}"))?;
        let x = av.x.approx(80);
        for w in &av.witnesses {
            let y = f[w.index].approx(80);
            let far = &x.lo - &y.hi > w.w || &y.lo - &x.hi > w.w;
            if !w.w.is_positive() || !far {
                return Err(format!("trial {trial}, index {}: w = {}", w.index, rq::fmt(&w.w)));
            }
            if min_w.as_ref().is_none_or(|m| w.w < *m) {
                min_w = Some(w.w.clone());
            }
        }
    }
    Ok(format!("6400 witnesses verified at 2^-80; smallest w = {:.3e}", rq::to_f64(&min_w.unwrap())))
}

fn c10_cantor_lebesgue() -> Check {
    let mut r = rng(10);
    let p = 10;
    for trial in 0..20 {
        let family: Vec<(Rational, Rational)> =
            (0..64).map(|n| (rq::pow2(-(n as i64)), rat(r.gen_range(-1000..=1000), 1000))).collect();
        let zeta: Vec<usize> = (0..64).collect();
        let w = trigseries::cantor_lebesgue_witness(&family, &zeta, p, 3).map_err(|e| format!("trial {trial}: {e}"))?;
        let m = w.selected_index;
        let arg = &w.x.u * int(m as i64) + &family[m].1;
        let (_, c) = elementary::sin_cos_pi_point(&arg, 64);
        if c.mig() < rat(1, 2) {
            return Err(format!("trial {trial}: |cos| enclosure {c:?} at m = {m}"));
        }
        if family[m].0 >= rq::pow2(-(p as i64)) {
            return Err(format!("trial {trial}: r_m not below 2^-{p}"));
        }
    }
    Ok("20 random-phase families: |cos(m x + y_m)| >= 1/2 and r_m < 2^-10 at the selected index".into())
}

fn c11_uniqueness_demo() -> Check {
    let tol = rq::parse("1e-6").unwrap();
    let zero = TrigSeries::zero();
    let mut r = rng(11);
    let enumeration: Vec<String> = (0..32).map(|_| rq::fmt(&rat(r.gen_range(-999..=999), 1000))).collect();
    let tree = cbsets::cb_uniform(1, (rat(-1, 2), rat(1, 2)), &rat(1, 2)).unwrap();
    let cases = [
        ("finite", Exceptional::Finite { points: vec!["0".into(), "1/3".into(), "-1/2".into()] }),
        ("cb depth 1", Exceptional::Cbset { tree }),
        ("32-point enumeration", Exceptional::Enumeration { points: enumeration }),
    ];
    for (name, x) in &cases {
        let rep = uniqueness_demo(&zero, x, 33, 40, &tol, 6, 40).map_err(|e| format!("{name}: {e}"))?;
        if !rep.pass {
            return Err(format!("{name}: failed at {:?}", rep.failed_stage));
        }
    }
    let control = TrigSeries::single(1, int(1), int(0));
    let rep = uniqueness_demo(&control, &Exceptional::None, 33, 40, &tol, 6, 40).map_err(|e| e.to_string())?;
    if rep.pass || rep.failed_stage.as_deref() != Some("vanishing") {
        return Err(format!("negative control: {rep:?}"));
    }
    Ok("zero series passes for finite, CB and enumerated sets; {a1 = 1} fails at vanishing".into())
}

fn random_creal(r: &mut ChaCha8Rng) -> (CReal, f64) {
    let q = rat(r.gen_range(-1000..=1000), r.gen_range(1..=97));
    let s = rat(r.gen_range(-50..=50), 7);
    match r.gen_range(0..4) {
        0 => (CReal::from_rational(q.clone()), rq::to_f64(&q)),
        1 => (CReal::pi().scale(&s).add(&CReal::from_rational(q.clone())), std::f64::consts::PI * rq::to_f64(&s) + rq::to_f64(&q)),
        2 => (CReal::pi().mul(&CReal::from_rational(q.clone())), std::f64::consts::PI * rq::to_f64(&q)),
        _ => {
            let a = CReal::pi().scale(&s);
            let b = CReal::from_rational(q.clone());
            let v = (std::f64::consts::PI * rq::to_f64(&s)).max(rq::to_f64(&q));
            (a.sup(&b), v)
        }
    }
}

fn c12_creal_kernel() -> Check {
    let mut r = rng(12);
    let mut checks = 0usize;
    while checks < 10_000 {
        let (x, xv) = random_creal(&mut r);
        let n = r.gen_range(0..60u32);
        let (a, b) = (x.approx(n), x.approx(n + 1));
        if !a.contains_interval(&b) {
            return Err(format!("nesting fails at {n}: {a:?} ⊉ {b:?}"));
        }
        if a.width() >= rq::pow2(-(n as i64)) {
            return Err(format!("width at {n}: {a:?}"));
        }
        let slack = 1e-9 * xv.abs().max(1.0);
        if a.lo_f64() > xv + slack || a.hi_f64() < xv - slack {
            return Err(format!("enclosure {a:?} misses {xv}"));
        }
        let (y, _) = random_creal(&mut r);
        if let OrderVerdict::Less(k) = creals::compare(&x, &y, 40) {
            if (k..k + 8).any(|j| x.approx(j).hi >= y.approx(j).lo) {
                return Err("separation not permanent".into());
            }
        }
        let lo = rat(r.gen_range(-100..100), 8);
        let hi = &lo + rat(r.gen_range(1..50), 64);
        let (xs, zs) = (CReal::from_rational(lo.clone()), CReal::from_rational(hi.clone()));
        match creals::cotransitive_split(&xs, &zs, 0, &y).map_err(|e| e.to_string())? {
            Split::LeftGap { bound, gap, .. } => {
                if !gap.is_positive() || bound < lo || y.approx(100).lo < &bound + &gap {
                    return Err("left gap not certified".into());
                }
            }
            Split::RightGap { bound, gap, .. } => {
                if !gap.is_positive() || bound > hi || y.approx(100).hi > &bound - &gap {
                    return Err("right gap not certified".into());
                }
            }
        }
        checks += 4;
    }
    Ok(format!("{checks} nesting/width/enclosure/permanence checks and {} certified splits", checks / 4))
}

fn main() {
    let criteria: [Criterion; 12] = [
        ("second symmetric derivative recovers F", c1_second_symmetric_derivative),
        ("first symmetric derivative vanishes", c2_first_symmetric_derivative),
        ("x^2 cosine integrals", c3_square_cosine_integrals),
        ("coefficient recovery", c4_coefficient_recovery),
        ("co-derivative laws", c5_co_derivative_laws),
        ("fullness ranks", c6_fullness_ranks),
        ("Heine-Borel certificates", c7_heine_borel),
        ("trisection", c8_trisection),
        ("diagonal avoidance", c9_diagonal_avoidance),
        ("Cantor-Lebesgue witness", c10_cantor_lebesgue),
        ("uniqueness demo", c11_uniqueness_demo),
        ("CReal kernel", c12_creal_kernel),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let id = format!("{}", i + 1);
        if !filter.is_empty() && !filter.contains(&id) {
            continue;
        }
        match f() {
            Ok(msg) => println!("criterion {id:>2} PASS  {name}: {msg}"),
            Err(msg) => {
                failed += 1;
                println!("criterion {id:>2} FAIL  {name}: {msg}");
            }
        }
    }
    if failed > 0 {
        println!("{failed} criterion(s) failed");
        std::process::exit(1);
    }
}
