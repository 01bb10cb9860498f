//! Finite subcovers from neighbourhood oracles and suprema from moduli.
//!
//! The overlapping-thirds tree splits `(r, u)` into its left and right two
//! thirds; a depth-first search closes a node once the oracle interval at
//! its midpoint strictly contains it. For a located closed set the tree of
//! extended halves follows only the halves that meet the set.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::cbsets::{self, CbTree};
use crate::error::{Error, Result};
use crate::func::RealFn;
use crate::interval::RationalInterval;
use crate::rational::{self as rq, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThirdsNode {
    pub path: Vec<u8>,
    pub lo: Rational,
    pub hi: Rational,
}

impl ThirdsNode {
    pub fn root(lo: Rational, hi: Rational) -> Self {
        ThirdsNode { path: Vec::new(), lo, hi }
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn mid(&self) -> Rational {
        (&self.lo + &self.hi) / rq::int(2)
    }
}

/// Left two thirds (`bit = 0`) or right two thirds (`bit = 1`).
pub fn thirds_child(node: &ThirdsNode, bit: u8) -> ThirdsNode {
    let third = node.width() / rq::int(3);
    let mut path = node.path.clone();
    path.push(bit);
    if bit == 0 {
        ThirdsNode { path, lo: node.lo.clone(), hi: &node.hi - third }
    } else {
        ThirdsNode { path, lo: &node.lo + third, hi: node.hi.clone() }
    }
}

/// The node reached by following `path` from the root.
pub fn thirds_path(root: &ThirdsNode, path: &[u8]) -> ThirdsNode {
    path.iter().fold(root.clone(), |n, &b| thirds_child(&n, b))
}

/// Why a piece entered the certificate: the node it closed and the oracle
/// query that produced it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverWitness {
    pub path: Vec<u8>,
    #[serde(with = "rq::serde_str")]
    pub query: Rational,
    #[serde(with = "rq::serde_str")]
    pub node_lo: Rational,
    #[serde(with = "rq::serde_str")]
    pub node_hi: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverPiece {
    #[serde(with = "rq::serde_str")]
    pub c: Rational,
    #[serde(with = "rq::serde_str")]
    pub d: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverCertificate {
    pub pieces: Vec<CoverPiece>,
    pub witnesses: Vec<CoverWitness>,
    pub target: String,
}

impl CoverCertificate {
    fn push(&mut self, c: Rational, d: Rational, w: CoverWitness) {
        if !self.pieces.iter().any(|p| p.c == c && p.d == d) {
            self.pieces.push(CoverPiece { c, d });
            self.witnesses.push(w);
        }
    }

    /// Whether `x` lies strictly inside some piece.
    pub fn covers(&self, x: &Rational) -> bool {
        self.pieces.iter().any(|p| p.c < *x && *x < p.d)
    }

    /// First of `count` equispaced points of `[lo, hi]` not covered.
    pub fn grid_sweep(&self, lo: &Rational, hi: &Rational, count: usize) -> Option<Rational> {
        let step = (hi - lo) / rq::int(count.max(2) as i64 - 1);
        (0..count).map(|i| lo + &step * rq::int(i as i64)).find(|x| !self.covers(x))
    }
}

/// Query precision handed to the oracle at a node of the given depth.
fn query_bits(depth: usize) -> u32 {
    depth as u32 + 16
}

/// Depth-first bar search on the thirds tree of `[a, b]`.
pub fn heine_borel_subcover(
    ambient: &(Rational, Rational),
    oracle: &dyn Fn(&Rational, u32) -> (Rational, Rational),
    depth_cap: usize,
) -> Result<CoverCertificate> {
    if ambient.0 >= ambient.1 {
        return Err(Error::BadAmbient);
    }
    let mut cert = CoverCertificate {
        pieces: Vec::new(),
        witnesses: Vec::new(),
        target: format!("[{}, {}]", rq::fmt(&ambient.0), rq::fmt(&ambient.1)),
    };
    let mut stack = vec![ThirdsNode::root(ambient.0.clone(), ambient.1.clone())];
    while let Some(node) = stack.pop() {
        let q = node.mid();
        let (c, d) = oracle(&q, query_bits(node.path.len()));
        if c < node.lo && node.hi < d {
            let w = CoverWitness { path: node.path.clone(), query: q, node_lo: node.lo.clone(), node_hi: node.hi.clone() };
            cert.push(c, d, w);
            continue;
        }
        if node.path.len() >= depth_cap {
            return Err(Error::DepthCapExceeded(node.path));
        }
        stack.push(thirds_child(&node, 1));
        stack.push(thirds_child(&node, 0));
    }
    Ok(cert)
}

/// A closed set with a computable distance function.
pub trait LocatedSet {
    /// Enclosure of `d(q, F)` of width `< 2^-m`.
    fn distance(&self, q: &Rational, m: u32) -> RationalInterval;
    /// A rational point of `F` within `d(q, F) + 2^-m` of `q`.
    fn near_point(&self, q: &Rational, m: u32) -> Rational;
}

impl LocatedSet for CbTree {
    fn distance(&self, q: &Rational, m: u32) -> RationalInterval {
        cbsets::distance_to(self, q, &rq::pow2(-(m as i64)))
    }

    fn near_point(&self, q: &Rational, m: u32) -> Rational {
        cbsets::nearest_point(self, q, &rq::pow2(-(m as i64)))
    }
}

/// A finite set of rational points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinitePoints(pub Vec<Rational>);

impl FinitePoints {
    fn nearest(&self, q: &Rational) -> Option<&Rational> {
        self.0.iter().min_by(|x, y| (*x - q).abs().cmp(&(*y - q).abs()))
    }
}

impl LocatedSet for FinitePoints {
    fn distance(&self, q: &Rational, _m: u32) -> RationalInterval {
        RationalInterval::point(self.nearest(q).map(|p| (p - q).abs()).expect("nonempty point set"))
    }

    fn near_point(&self, q: &Rational, _m: u32) -> Rational {
        self.nearest(q).expect("nonempty point set").clone()
    }
}

/// Largest extra precision spent deciding a threshold test.
const THRESHOLD_BITS: u32 = 256;

/// Decides `d(p, F) < w/3` (`true`) or `d(p, F) > w/4` (`false`).
fn near(f: &dyn LocatedSet, p: &Rational, w: &Rational) -> Result<bool> {
    let (third, quarter) = (w / rq::int(3), w / rq::int(4));
    let base = rq::bits_below(&(w / rq::int(24)));
    for extra in (0..=THRESHOLD_BITS).step_by(16) {
        let d = f.distance(p, base + extra);
        if d.hi < third {
            return Ok(true);
        }
        if d.lo > quarter {
            return Ok(false);
        }
    }
    Err(Error::NonConvergence(format!("distance at {} did not clear either threshold", rq::fmt(p))))
}

/// Finite subcover of a located closed set `F` with `a, b ∈ F`, using the
/// tree of extended halves. The oracle is only queried at points of `F`.
pub fn located_subcover(
    f: &dyn LocatedSet,
    ambient: &(Rational, Rational),
    oracle: &dyn Fn(&Rational, u32) -> (Rational, Rational),
    depth_cap: usize,
) -> Result<CoverCertificate> {
    let (a, b) = ambient;
    if a >= b {
        return Err(Error::BadAmbient);
    }
    for e in [a, b] {
        if !f.distance(e, 64).contains(&rq::int(0)) {
            return Err(Error::Precondition(format!("ambient endpoint {} is not in the set", rq::fmt(e))));
        }
    }
    let mut cert = CoverCertificate {
        pieces: Vec::new(),
        witnesses: Vec::new(),
        target: format!("located set in [{}, {}]", rq::fmt(a), rq::fmt(b)),
    };
    let mut stack = vec![ThirdsNode::root(a.clone(), b.clone())];
    while let Some(node) = stack.pop() {
        let w = node.width();
        let mid = node.mid();
        let bits = rq::bits_below(&(&w / rq::int(16)));
        if f.distance(&mid, bits + 4).lo > &w / rq::int(2) {
            return Err(Error::EmptyIntervalInvariantBroken(format!(
                "node [{}, {}]",
                rq::fmt(&node.lo),
                rq::fmt(&node.hi)
            )));
        }
        let p = f.near_point(&mid, bits + 4);
        let (c, d) = oracle(&p, query_bits(node.path.len()));
        if c < node.lo && node.hi < d && c < p && p < d {
            let wit = CoverWitness { path: node.path.clone(), query: p, node_lo: node.lo.clone(), node_hi: node.hi.clone() };
            cert.push(c, d, wit);
            continue;
        }
        if node.path.len() >= depth_cap {
            return Err(Error::DepthCapExceeded(node.path));
        }
        let (r, u) = (&node.lo, &node.hi);
        let left_pt = (r * rq::int(3) + u) / rq::int(4);
        let right_pt = (r + u * rq::int(3)) / rq::int(4);
        let pad = &w / rq::int(12);
        let lplus = |path: Vec<u8>| ThirdsNode { path, lo: r - &pad, hi: &mid + &pad };
        let rplus = |path: Vec<u8>| ThirdsNode { path, lo: &mid - &pad, hi: u + &pad };
        let child_path = |bit: u8| {
            let mut p = node.path.clone();
            p.push(bit);
            p
        };
        match (near(f, &left_pt, &w)?, near(f, &right_pt, &w)?) {
            (true, true) => {
                stack.push(rplus(child_path(1)));
                stack.push(lplus(child_path(0)));
            }
            // Both children coincide; one visit suffices.
            (true, false) => stack.push(lplus(child_path(0))),
            (false, true) => stack.push(rplus(child_path(1))),
            (false, false) => {
                return Err(Error::EmptyIntervalInvariantBroken(format!(
                    "both quarter points of [{}, {}] are far from the set",
                    rq::fmt(r),
                    rq::fmt(u)
                )))
            }
        }
    }
    Ok(cert)
}

/// Neighbourhood oracles accepted by the command line.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum OracleSpec {
    UniformRadius {
        #[serde(with = "rq::serde_str")]
        r: Rational,
    },
    /// Cover a Cantor–Bendixson set with balls of radius `r` (default 1/16).
    Cbset {
        tree: CbTree,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        r: Option<String>,
    },
}

/// `x ↦ (x - r, x + r)`.
pub fn uniform_radius(r: Rational) -> impl Fn(&Rational, u32) -> (Rational, Rational) {
    move |x, _| (x - &r, x + &r)
}

/// Enclosure `[lo, hi]` of `sup_{[a,b]} H` with `hi - lo <= tol`; `at` is a
/// point where `H(at) >= lo`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupBound {
    pub lo: Rational,
    pub hi: Rational,
    pub at: Rational,
}

/// Points in a single grid sweep before giving up.
pub const GRID_CAP: u64 = 1 << 22;

/// Grid supremum using the Lipschitz bound of `h` as modulus:
/// `ω(m) = 2^-m / L`, `2^-m <= tol/2`.
pub fn sup_on_interval(h: &dyn RealFn, a: &Rational, b: &Rational, tol: &Rational) -> Result<SupBound> {
    if a > b {
        return Err(Error::BadAmbient);
    }
    if !tol.is_positive() {
        return Err(Error::Precondition("tolerance must be positive".into()));
    }
    let lip = h.lipschitz(a, b).ok_or(Error::NoModulus)?;
    let m = rq::bits_below(&(tol / rq::int(2)));
    let eps = rq::pow2(-(m as i64));
    let span = b - a;
    let cells = if lip.is_zero() || span.is_zero() {
        1
    } else {
        let omega = &eps / &lip;
        let n = (&span / omega).ceil().to_integer();
        u64::try_from(n).ok().filter(|&n| n < GRID_CAP).ok_or_else(|| {
            Error::ResourceCap(format!("grid for tolerance {} exceeds {GRID_CAP} points", rq::fmt(tol)))
        })?
    };
    let step = &span / rq::int(cells as i64);
    let mut best: Option<(RationalInterval, Rational)> = None;
    for i in 0..=cells {
        let g = a + &step * rq::int(i as i64);
        let v = h.eval(&RationalInterval::point(g.clone()), m + 2);
        if best.as_ref().is_none_or(|(bv, _)| v.hi > bv.hi) {
            best = Some((v, g));
        }
    }
    let (v, at) = best.unwrap();
    Ok(SupBound { lo: v.lo, hi: v.hi + eps, at })
}

struct Cell {
    upper: Rational,
    lo: Rational,
    hi: Rational,
}

impl PartialEq for Cell {
    fn eq(&self, o: &Self) -> bool {
        self.upper == o.upper
    }
}
impl Eq for Cell {}
impl PartialOrd for Cell {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Cell {
    fn cmp(&self, o: &Self) -> Ordering {
        self.upper.cmp(&o.upper)
    }
}

/// Upper bound of `h` over `[lo, hi]` from the best available Taylor form.
fn cell_upper(h: &dyn RealFn, lo: &Rational, hi: &Rational, bits: u32) -> (Rational, RationalInterval) {
    let c = (lo + hi) / rq::int(2);
    let r = (hi - lo) / rq::int(2);
    let cp = RationalInterval::point(c.clone());
    let fc = h.eval(&cp, bits);
    let boxi = RationalInterval::new(lo.clone(), hi.clone());
    let plain = h.eval(&boxi, bits).hi;
    let taylor = match (h.derivative(1, &cp, bits), h.derivative(2, &boxi, bits)) {
        (Some(d1), Some(d2)) => {
            // f(c+t) <= f(c) + f'(c) t + M t^2 / 2 with M = sup f''.
            let half_m = d2.hi / rq::int(2);
            let mut cands = vec![-&r, r.clone()];
            if half_m.is_negative() {
                for d in [&d1.lo, &d1.hi] {
                    let t = -d / (&half_m * rq::int(2));
                    if t.abs() <= r {
                        cands.push(t);
                    }
                }
            }
            let g = |t: &Rational| rq::max(&(&d1.lo * t), &(&d1.hi * t)) + &half_m * t * t;
            cands.iter().map(g).max().map(|v| &fc.hi + v)
        }
        (Some(_), None) | (None, None) | (None, Some(_)) => {
            h.derivative(1, &boxi, bits).map(|d| &fc.hi + d.mag() * &r)
        }
    };
    let upper = match taylor {
        Some(t) => rq::min(&t, &plain),
        None => plain,
    };
    (upper, fc)
}

/// Branch-and-bound supremum from interval and Taylor enclosures; splits
/// the cell with the largest upper bound until the gap is below `tol`.
pub fn sup_branch_bound(
    h: &dyn RealFn,
    a: &Rational,
    b: &Rational,
    tol: &Rational,
    max_cells: usize,
) -> Result<SupBound> {
    if a > b {
        return Err(Error::BadAmbient);
    }
    let bits = rq::bits_below(tol) + 8;
    let ends = [a, b].map(|e| h.eval(&RationalInterval::point(e.clone()), bits));
    let (mut best_lo, mut at) =
        if ends[0].lo >= ends[1].lo { (ends[0].lo.clone(), a.clone()) } else { (ends[1].lo.clone(), b.clone()) };
    let mut heap = BinaryHeap::new();
    let (u, fc) = cell_upper(h, a, b, bits);
    if fc.lo > best_lo {
        best_lo = fc.lo;
        at = (a + b) / rq::int(2);
    }
    heap.push(Cell { upper: u, lo: a.clone(), hi: b.clone() });
    let mut splits = 0;
    loop {
        let top = heap.pop().unwrap();
        let upper = rq::max(&top.upper, &ends.iter().map(|e| e.hi.clone()).max().unwrap());
        if &upper - &best_lo <= *tol {
            return Ok(SupBound { lo: best_lo, hi: upper, at });
        }
        if splits >= max_cells || top.lo == top.hi {
            return Err(Error::ResourceCap(format!("supremum not resolved to {} within {max_cells} cells", rq::fmt(tol))));
        }
        splits += 1;
        let mid = (&top.lo + &top.hi) / rq::int(2);
        for (l, r) in [(top.lo.clone(), mid.clone()), (mid, top.hi)] {
            let (u, fc) = cell_upper(h, &l, &r, bits);
            if fc.lo > best_lo {
                best_lo = fc.lo.clone();
                at = (&l + &r) / rq::int(2);
            }
            if u > best_lo {
                heap.push(Cell { upper: u, lo: l, hi: r });
            }
        }
        if heap.is_empty() {
            let upper = ends.iter().map(|e| e.hi.clone()).fold(best_lo.clone(), |x, y| rq::max(&x, &y));
            return Ok(SupBound { lo: best_lo, hi: upper, at });
        }
    }
}
