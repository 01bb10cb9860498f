//! Nested searches standing in for maxima, cycles and diagonal arguments.
//!
//! The trisection replaces "take a point where `H` is maximal" by nested
//! intervals `[a_n, b_n]` for the point and `[c_n, d_n]` for a slope `ρ`,
//! chosen so that every point outside `[a_{n+1}, b_{n+1}]` stays `δ_n` below
//! the supremum of `H_ρ(y) = G(y) - ε(b-y)(y-a)/(b-a)² + ρ(y-a)/(b-a)`.

use std::sync::Arc;

use num_traits::Signed;

use crate::covering::{sup_branch_bound, SupBound};
use crate::creals::{cotransitive_split, CReal, Split};
use crate::error::{Error, Result};
use crate::func::{FnHandle, Polynomial, RealFn, SumFn};
use crate::interval::RationalInterval;
use crate::rational::{self as rq, Rational};

/// One row of the trisection trace.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrisectionState {
    pub step: usize,
    pub a: Rational,
    pub b: Rational,
    pub c: Rational,
    pub d: Rational,
    /// `(b - a)(d - c) / 81`.
    pub delta: Rational,
}

/// Points in `excluded` satisfy `H_ρ(y) + δ <= sup H_ρ` for `ρ` in the
/// final slope interval.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Margin {
    pub excluded: Vec<(Rational, Rational)>,
    pub delta: Rational,
}

#[derive(Clone, Debug)]
pub struct MaxCertificate {
    pub a: Rational,
    pub b: Rational,
    pub epsilon: Rational,
    pub trace: Vec<TrisectionState>,
    pub rho: RationalInterval,
    /// Final spatial interval `[a_k, b_k]`.
    pub z: RationalInterval,
    /// A point of `[a_k, b_k]` where `H_ρ` is within the last margin of its
    /// supremum, for `ρ` the midpoint of the slope interval.
    pub z_point: Rational,
    pub margins: Vec<Margin>,
}

impl MaxCertificate {
    pub fn rho_point(&self) -> Rational {
        self.rho.mid()
    }

    /// `step,aN,bN,cN,dN,deltaN` rows.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("step,aN,bN,cN,dN,deltaN\n");
        for t in &self.trace {
            s += &format!(
                "{},{},{},{},{},{}\n",
                t.step,
                rq::fmt(&t.a),
                rq::fmt(&t.b),
                rq::fmt(&t.c),
                rq::fmt(&t.d),
                rq::fmt(&t.delta)
            );
        }
        s
    }
}

/// `H_ρ` as a function handle.
pub fn h_rho(g: &FnHandle, a: &Rational, b: &Rational, eps: &Rational, rho: &Rational) -> SumFn {
    let w = b - a;
    let e = eps / (&w * &w);
    let k = rho / &w;
    let poly = Polynomial::new(vec![&e * a * b - &k * a, -(&e * (a + b)) + &k, e]);
    SumFn(vec![g.clone(), Arc::new(poly)])
}

/// Cells a single supremum may split before the search is declared stuck.
pub const SUP_CELLS: usize = 200_000;

fn sup_of(h: &dyn RealFn, lo: &Rational, hi: &Rational, tol: &Rational, step: usize) -> Result<SupBound> {
    sup_branch_bound(h, lo, hi, tol, SUP_CELLS).map_err(|_| Error::ComparisonStuck(step))
}

/// Runs `steps` rounds of the nested trisection for `G` on `[a, b]` with
/// `G(a) = G(b) = 0`, given a point `x` where `G(x) >= ε`.
///
/// Each round compares suprema over the outer thirds at tolerance `δ/4`,
/// which is enough to decide one of the two `3δ` disjuncts.
pub fn rho_z_search(
    g: &FnHandle,
    a: &Rational,
    b: &Rational,
    x: &Rational,
    epsilon: &RationalInterval,
    steps: usize,
) -> Result<MaxCertificate> {
    if a >= b {
        return Err(Error::BadAmbient);
    }
    if steps == 0 {
        return Err(Error::Precondition("at least one trisection step is required".into()));
    }
    if !epsilon.lo.is_positive() {
        return Err(Error::Precondition("ε is not certified positive".into()));
    }
    if x < a || x > b {
        return Err(Error::Precondition("x lies outside [a, b]".into()));
    }
    let eps = epsilon.lo.clone();
    let xp = RationalInterval::point(x.clone());
    if g.eval(&xp, 64).lo < eps {
        return Err(Error::Precondition(format!("G({}) >= {} is not certified", rq::fmt(x), rq::fmt(&eps))));
    }
    let three_quarter = &eps * rq::rat(3, 4);
    for rho in [rq::int(0), &eps / rq::int(2)] {
        if h_rho(g, a, b, &eps, &rho).eval(&xp, 64).lo < three_quarter {
            return Err(Error::Precondition("H_ρ(x) >= 3ε/4 fails".into()));
        }
    }

    let width = b - a;
    let (mut an, mut bn, mut cn, mut dn) = (a.clone(), b.clone(), rq::int(0), &eps / rq::int(2));
    let mut trace = Vec::new();
    let mut margins = Vec::new();
    let mut last_eff = rq::int(1);
    for n in 0..steps {
        let delta = (&bn - &an) * (&dn - &cn) / rq::int(81);
        trace.push(TrisectionState { step: n, a: an.clone(), b: bn.clone(), c: cn.clone(), d: dn.clone(), delta: delta.clone() });
        // The slope term is normalized by (b - a), so is the margin.
        let de = &delta / &width;
        let tol = &de / rq::int(4);
        let three = &de * rq::int(3);
        let z0 = (&an * rq::int(2) + &bn) / rq::int(3);
        let z1 = (&an + &bn * rq::int(2)) / rq::int(3);
        let r0 = (&cn * rq::int(2) + &dn) / rq::int(3);
        let r1 = (&cn + &dn * rq::int(2)) / rq::int(3);

        let h1 = h_rho(g, a, b, &eps, &r1);
        let right = sup_of(&h1, &z1, &bn, &tol, n)?;
        let left = sup_of(&h1, &an, &z0, &tol, n)?;
        if &right.lo - &left.hi > three {
            an = z0;
            cn = rq::max(&r0, &(&r1 - &de));
            dn = rq::min(&dn, &(&r1 + &de));
        } else {
            let h0 = h_rho(g, a, b, &eps, &r0);
            let right = sup_of(&h0, &z1, &bn, &tol, n)?;
            let left = sup_of(&h0, &an, &z0, &tol, n)?;
            if &left.lo - &right.hi > three {
                bn = z1;
                cn = rq::max(&cn, &(&r0 - &de));
                dn = rq::min(&r1, &(&r0 + &de));
            } else {
                return Err(Error::ComparisonStuck(n));
            }
        }
        let mut excluded = Vec::new();
        if *a < an {
            excluded.push((a.clone(), an.clone()));
        }
        if bn < *b {
            excluded.push((bn.clone(), b.clone()));
        }
        margins.push(Margin { excluded, delta: de.clone() });
        last_eff = de;
    }
    let delta = (&bn - &an) * (&dn - &cn) / rq::int(81);
    trace.push(TrisectionState { step: steps, a: an.clone(), b: bn.clone(), c: cn.clone(), d: dn.clone(), delta });

    let rho = RationalInterval::new(cn, dn);
    let hs = h_rho(g, a, b, &eps, &rho.mid());
    let best = sup_of(&hs, &an, &bn, &(&last_eff / rq::int(8)), steps)?;
    Ok(MaxCertificate {
        a: a.clone(),
        b: b.clone(),
        epsilon: eps,
        trace,
        rho,
        z: RationalInterval::new(an, bn),
        z_point: best.at,
        margins,
    })
}

/// Re-checks every margin entry at `ρ` = the slope midpoint: the supremum
/// over each excluded region is at most `H_ρ(z_point).hi - δ_n/2`.
pub fn verify_margins(cert: &MaxCertificate, g: &FnHandle) -> Result<bool> {
    let h = h_rho(g, &cert.a, &cert.b, &cert.epsilon, &cert.rho_point());
    let last = cert.margins.last().map(|m| m.delta.clone()).unwrap_or_else(|| rq::int(1));
    let bits = rq::bits_below(&last) + 16;
    let hz = h.eval(&RationalInterval::point(cert.z_point.clone()), bits);
    for (n, m) in cert.margins.iter().enumerate() {
        let limit = &hz.hi - &m.delta / rq::int(2);
        for (lo, hi) in &m.excluded {
            let s = sup_of(&h, lo, hi, &(&m.delta / rq::int(4)), n)?;
            if s.hi > limit {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `(H(x+h) + H(x-h) - 2H(x)) / h^order` in real coordinates.
pub fn real_quotient(h: &dyn RealFn, x: &Rational, step: &Rational, order: u32, bits: u32) -> RationalInterval {
    let p = |t: Rational| h.eval(&RationalInterval::point(t), bits);
    let num = &(&p(x + step) + &p(x - step)) - &p(x.clone()).scale(&rq::int(2));
    num.scale(&num_traits::pow(step.clone(), order as usize).recip())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct D2BoundReport {
    /// Hull of the last two quotient enclosures.
    pub quotient: RationalInterval,
    pub bound: RationalInterval,
    pub holds: bool,
}

/// Checks `D²G(z) <= -2ε/width² + tol` by probing the second symmetric
/// quotient at the midpoint of `z` along `h = 2^-j` until two consecutive
/// values agree within `tol`.
pub fn d2_bound_certificate(
    g: &dyn RealFn,
    z: &RationalInterval,
    epsilon: &Rational,
    ambient_width: &RationalInterval,
    tol: &Rational,
) -> Result<D2BoundReport> {
    let w2 = ambient_width.square();
    let bound = RationalInterval::point(epsilon * rq::int(-2))
        .div(&w2)
        .ok_or_else(|| Error::Precondition("ambient width must be nonzero".into()))?;
    let x = z.mid();
    let mut prev: Option<RationalInterval> = None;
    for j in 3..48u32 {
        let bits = rq::bits_below(tol) + 2 * j + 8;
        let q = real_quotient(g, &x, &rq::pow2(-(j as i64)), 2, bits);
        if let Some(p) = prev {
            let hull = p.hull(&q);
            if hull.width() <= *tol {
                let holds = hull.hi <= &bound.lo + tol;
                return Ok(D2BoundReport { quotient: hull, bound, holds });
            }
        }
        prev = Some(q);
    }
    Err(Error::NonConvergence("second symmetric quotient did not settle".into()))
}

/// Follows `i ↦ succ[i]` from 0 until a node repeats and returns the cycle,
/// first node repeated at the end.
pub fn successor_cycle(succ: &[usize]) -> Result<Vec<usize>> {
    if succ.is_empty() {
        return Err(Error::Precondition("successor map is empty".into()));
    }
    if let Some(&bad) = succ.iter().find(|&&j| j >= succ.len()) {
        return Err(Error::Precondition(format!("successor {bad} is out of range")));
    }
    let mut seen = vec![usize::MAX; succ.len()];
    let mut walk = Vec::new();
    let mut i = 0;
    while seen[i] == usize::MAX {
        seen[i] = walk.len();
        walk.push(i);
        i = succ[i];
    }
    let mut cycle = walk.split_off(seen[i]);
    cycle.push(i);
    Ok(cycle)
}

/// `H` agrees with `t ↦ slope·t + intercept` on `(x - radius, x + radius)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalPiece {
    pub radius: Rational,
    pub slope: Rational,
    pub intercept: Rational,
}

impl LocalPiece {
    fn same_line(&self, o: &LocalPiece) -> bool {
        self.slope == o.slope && self.intercept == o.intercept
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Reconciled {
    Linear { slope: Rational, intercept: Rational },
    MismatchAt(RationalInterval),
}

/// Decides whether locally affine `H` is affine on `[x0, x1]`.
///
/// Agreeing end pieces are confirmed by walking overlapping neighbourhoods
/// from `x0`; disagreeing ones start a bisection that keeps pieces with
/// different lines at the two ends, localizing the break.
pub fn piecewise_linear_reconcile(
    h: &dyn RealFn,
    oracle: &dyn Fn(&Rational) -> LocalPiece,
    span: (&Rational, &Rational),
    depth_cap: usize,
) -> Result<Reconciled> {
    let (x0, x1) = span;
    if x0 >= x1 {
        return Err(Error::BadAmbient);
    }
    let query = |t: &Rational| -> Result<LocalPiece> {
        let p = oracle(t);
        let v = h.eval(&RationalInterval::point(t.clone()), 64);
        if !v.widen(&rq::pow2(-60)).contains(&(&p.slope * t + &p.intercept)) {
            return Err(Error::Precondition(format!("local piece at {} disagrees with H", rq::fmt(t))));
        }
        Ok(p)
    };
    let linear = |p: &LocalPiece| Reconciled::Linear { slope: p.slope.clone(), intercept: p.intercept.clone() };
    let p0 = query(x0)?;
    if x1 - x0 < p0.radius {
        return Ok(linear(&p0));
    }
    let p1 = query(x1)?;
    if x1 - x0 < p1.radius {
        return Ok(linear(&p1));
    }
    if p0.same_line(&p1) {
        // Neighbourhoods overlap along the walk, so their lines coincide.
        let mut t = x0.clone();
        let mut cur = p0.clone();
        for _ in 0..depth_cap.saturating_mul(64) {
            if !cur.radius.is_positive() {
                break;
            }
            let next = rq::min(&(&t + &cur.radius / rq::int(2)), x1);
            let q = query(&next)?;
            if !q.same_line(&cur) {
                return bisect(&query, (t, cur), (next, q), depth_cap);
            }
            if next == *x1 {
                return Ok(linear(&p0));
            }
            t = next;
            cur = q;
        }
        return Ok(Reconciled::MismatchAt(RationalInterval::new(t, x1.clone())));
    }
    bisect(&query, (x0.clone(), p0), (x1.clone(), p1), depth_cap)
}

fn bisect(
    query: &dyn Fn(&Rational) -> Result<LocalPiece>,
    left: (Rational, LocalPiece),
    right: (Rational, LocalPiece),
    depth_cap: usize,
) -> Result<Reconciled> {
    let ((mut a, mut pa), (mut b, mut pb)) = (left, right);
    for _ in 0..depth_cap {
        let w = &b - &a;
        if w < pa.radius || w < pb.radius {
            // One neighbourhood spans both ends, so the two lines must agree.
            return Err(Error::Precondition("local pieces with overlapping neighbourhoods disagree".into()));
        }
        let mid = (&a + &b) / rq::int(2);
        let pm = query(&mid)?;
        if pm.same_line(&pa) {
            a = mid;
            pa = pm;
        } else {
            b = mid;
            pb = pm;
        }
    }
    Ok(Reconciled::MismatchAt(RationalInterval::new(a, b)))
}

/// A binary tree of closed intervals whose two children at every node are
/// separated by a positive gap.
pub trait SeparatedTree: Send + Sync {
    fn root(&self) -> (Rational, Rational);
    fn children(&self, node: &(Rational, Rational)) -> [(Rational, Rational); 2];
}

/// First and last closed thirds at every node.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThirdsTree {
    pub lo: Rational,
    pub hi: Rational,
}

impl SeparatedTree for ThirdsTree {
    fn root(&self) -> (Rational, Rational) {
        (self.lo.clone(), self.hi.clone())
    }

    fn children(&self, (l, h): &(Rational, Rational)) -> [(Rational, Rational); 2] {
        let t = (h - l) / rq::int(3);
        [(l.clone(), l + &t), (h - &t, h.clone())]
    }
}

/// `x` avoids `f(n)`: every point of the chosen child lies at least `2w`
/// away from `f(n)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AvoidWitness {
    pub index: usize,
    pub side: u8,
    pub w: Rational,
}

#[derive(Clone, Debug)]
pub struct Avoidance {
    pub x: CReal,
    pub path: Vec<u8>,
    pub node: (Rational, Rational),
    pub witnesses: Vec<AvoidWitness>,
}

/// Descends `f.len()` levels, at level `n` choosing a child apart from
/// `f(n)` by a co-transitive split across the gap; then continues leftmost.
pub fn diagonal_avoid(tree: Arc<dyn SeparatedTree>, f: &[CReal]) -> Result<Avoidance> {
    let mut node = tree.root();
    let mut path = Vec::new();
    let mut witnesses = Vec::new();
    for (n, y) in f.iter().enumerate() {
        let [l, r] = tree.children(&node);
        if l.1 >= r.0 {
            return Err(Error::GapTooSmall(n));
        }
        let split = cotransitive_split(&CReal::from_rational(l.1.clone()), &CReal::from_rational(r.0.clone()), 0, y)
            .map_err(|_| Error::GapTooSmall(n))?;
        let (side, next) = match split {
            // f(n) lies beyond the left child.
            Split::LeftGap { .. } => (0, l),
            Split::RightGap { .. } => (1, r),
        };
        witnesses.push(AvoidWitness { index: n, side, w: split.gap() / rq::int(2) });
        path.push(side);
        node = next;
    }
    let start = node.clone();
    let t = tree.clone();
    let x = CReal::from_fn(move |k| {
        let eps = rq::pow2(-(k as i64));
        let mut cur = start.clone();
        while &cur.1 - &cur.0 >= eps {
            cur = t.children(&cur)[0].clone();
        }
        RationalInterval::new(cur.0, cur.1)
    });
    Ok(Avoidance { x, path, node, witnesses })
}

/// Whether `x` at precision `2^-m` is disjoint from `[f(n) - w_n, f(n) + w_n]`
/// for every witness.
pub fn check_avoidance(av: &Avoidance, f: &[CReal], m: u32) -> bool {
    let xe = av.x.approx(m);
    av.witnesses.iter().all(|w| {
        let ye = f[w.index].approx(m).widen(&w.w);
        w.w.is_positive() && (xe.hi < ye.lo || ye.hi < xe.lo)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};
    use crate::trigseries::{SeriesFn, TrigSeries};

    fn cap() -> FnHandle {
        Arc::new(Polynomial::new(vec![int(0), int(1), int(-1)]))
    }

    #[test]
    fn trisection_on_the_parabola() {
        let g = cap();
        let cert = rho_z_search(&g, &int(0), &int(1), &rat(1, 2), &RationalInterval::point(rat(1, 4)), 20).unwrap();
        for w in cert.trace.windows(2) {
            let (s, t) = (&w[0], &w[1]);
            assert_eq!(&t.b - &t.a, (&s.b - &s.a) * rat(2, 3));
            assert!(s.c <= t.c && t.d <= s.d && t.c < t.d);
            assert_eq!(s.delta, (&s.b - &s.a) * (&s.d - &s.c) / int(81));
        }
        let rho = cert.rho_point();
        let argmax = rat(1, 2) + &rho * rat(2, 3);
        assert!((&cert.z_point - &argmax).abs() < rq::pow2(-30));
        assert!(cert.z.contains(&argmax));
        assert!(verify_margins(&cert, &g).unwrap());
        assert!(cert.to_csv().lines().count() == 22);
    }

    #[test]
    fn trisection_rejects_uncertified_epsilon() {
        let g = cap();
        let straddle = RationalInterval::new(rat(-1, 8), rat(1, 8));
        assert!(matches!(rho_z_search(&g, &int(0), &int(1), &rat(1, 2), &straddle, 3), Err(Error::Precondition(_))));
        let too_big = RationalInterval::point(rat(1, 2));
        assert!(matches!(rho_z_search(&g, &int(0), &int(1), &rat(1, 2), &too_big, 3), Err(Error::Precondition(_))));
    }

    #[test]
    fn second_derivative_bounds() {
        let g = cap();
        let z = RationalInterval::point(rat(1, 2));
        let r = d2_bound_certificate(&*g, &z, &rat(1, 4), &RationalInterval::point(int(1)), &rat(1, 1_000_000)).unwrap();
        assert!(r.quotient.contains(&int(-2)) && r.holds);
        assert_eq!(r.bound, RationalInterval::point(rat(-1, 2)));

        let sine = SeriesFn(TrigSeries::single(1, int(1), int(0)));
        let pi = crate::elementary::pi_interval(80);
        let z = RationalInterval::point(rat(355, 226));
        let r = d2_bound_certificate(&sine, &z, &int(1), &pi, &rat(1, 1_000_000)).unwrap();
        assert!(r.holds && (r.quotient.mid_f64() + 1.0).abs() < 1e-5);
        assert!((r.bound.mid_f64() + 0.2026).abs() < 1e-4);

        let convex = Polynomial::new(vec![int(0), int(0), int(1)]);
        let r = d2_bound_certificate(&convex, &z, &int(1), &RationalInterval::point(int(1)), &rat(1, 1000)).unwrap();
        assert!(!r.holds);
    }

    #[test]
    fn cycles() {
        assert_eq!(successor_cycle(&[1, 2, 0]).unwrap(), vec![0, 1, 2, 0]);
        assert_eq!(successor_cycle(&[0, 1]).unwrap(), vec![0, 0]);
        assert_eq!(successor_cycle(&[1, 2, 1]).unwrap(), vec![1, 2, 1]);
        assert!(successor_cycle(&[3]).is_err());
    }

    fn ramp_oracle(x: &Rational) -> LocalPiece {
        let half = rat(1, 2);
        let radius = rq::min(&rat(1, 4), &(x - &half).abs());
        if *x < half {
            LocalPiece { radius, slope: int(1), intercept: int(0) }
        } else {
            LocalPiece { radius, slope: int(2), intercept: rat(-1, 2) }
        }
    }

    #[test]
    fn reconcile_examples() {
        let id = Polynomial::new(vec![int(0), int(1)]);
        let flat = |_: &Rational| LocalPiece { radius: rat(1, 4), slope: int(1), intercept: int(0) };
        assert_eq!(
            piecewise_linear_reconcile(&id, &flat, (&int(0), &int(1)), 30).unwrap(),
            Reconciled::Linear { slope: int(1), intercept: int(0) }
        );
        let short = piecewise_linear_reconcile(&id, &flat, (&rat(1, 10), &rat(2, 10)), 30).unwrap();
        assert!(matches!(short, Reconciled::Linear { .. }));

        let kink = crate::func::ClosureFn::new(
            |x, _| {
                let f = |t: &Rational| if *t < rat(1, 2) { t.clone() } else { t * int(2) - rat(1, 2) };
                RationalInterval::new(f(&x.lo), f(&x.hi))
            },
            Some(int(2)),
        );
        match piecewise_linear_reconcile(&kink, &ramp_oracle, (&int(0), &int(1)), 40).unwrap() {
            Reconciled::MismatchAt(e) => assert!(e.contains(&rat(1, 2)) && e.width() < rq::pow2(-30)),
            other => panic!("expected a mismatch, got {other:?}"),
        }
    }

    #[test]
    fn avoidance_examples() {
        let tree: Arc<dyn SeparatedTree> = Arc::new(ThirdsTree { lo: int(0), hi: int(1) });
        let f = vec![CReal::from_rational(rat(1, 2))];
        let av = diagonal_avoid(tree.clone(), &f).unwrap();
        assert!(av.witnesses[0].w >= rat(1, 12));
        assert!(check_avoidance(&av, &f, 80));
        let x = av.x.approx(40);
        assert!(x.hi <= rat(1, 3) || x.lo >= rat(2, 3));

        let empty = diagonal_avoid(tree.clone(), &[]).unwrap();
        assert!(empty.x.approx(60).contains(&int(0)));

        let f: Vec<CReal> = [int(0), rat(1, 2), int(1)].into_iter().map(CReal::from_rational).collect();
        let av = diagonal_avoid(tree, &f).unwrap();
        assert!(av.witnesses.iter().all(|w| w.w.is_positive()));
        assert!(check_avoidance(&av, &f, 80));
    }
}
