//! Finite-rank Cantor–Bendixson enumeration trees.
//!
//! A tree on `(a, b)` is either a leaf, enumerating `{a, b}`, or a node with
//! a centre `c` and geometric sequences `a_k = c - (c-a) r^k ↑ c`,
//! `b_k = c + (b-c) r^k ↓ c`. Each gap `(a_k, a_{k+1})` and `(b_{k+1}, b_k)`
//! carries a child tree. The closed set `F` is everything enumerated; its
//! complement in `(a, b)` is the open set `G`.

use std::sync::Arc;

use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::creals::CReal;
use crate::error::{Error, Result};
use crate::interval::RationalInterval;
use crate::opensets::{self, FullnessReport, OpenSet, Rank};
use crate::rational::{self as rq, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Shape {
    Leaf,
    Node {
        /// Position of `c` as a fraction of the interval.
        split: Rational,
        contraction: Rational,
        left: ChildSeq,
        right: ChildSeq,
    },
}

/// Child shapes along one sequence: an explicit prefix, then `rest` forever.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChildSeq {
    pub prefix: Vec<Arc<Shape>>,
    pub rest: Arc<Shape>,
}

impl ChildSeq {
    pub fn repeat(s: Arc<Shape>) -> Self {
        ChildSeq { prefix: Vec::new(), rest: s }
    }

    pub fn get(&self, k: usize) -> &Arc<Shape> {
        self.prefix.get(k).unwrap_or(&self.rest)
    }

    fn all(&self) -> impl Iterator<Item = &Arc<Shape>> {
        self.prefix.iter().chain(std::iter::once(&self.rest))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CbTree {
    pub a: Rational,
    pub b: Rational,
    pub shape: Arc<Shape>,
}

/// Which side of the centre a child sits on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

impl Shape {
    pub fn uniform(depth: usize, contraction: &Rational) -> Arc<Shape> {
        let mut s = Arc::new(Shape::Leaf);
        for _ in 0..depth {
            s = Arc::new(Shape::Node {
                split: rq::rat(1, 2),
                contraction: contraction.clone(),
                left: ChildSeq::repeat(s.clone()),
                right: ChildSeq::repeat(s),
            });
        }
        s
    }

    pub fn depth(&self) -> usize {
        match self {
            Shape::Leaf => 0,
            Shape::Node { left, right, .. } => 1 + left.all().chain(right.all()).map(|c| c.depth()).max().unwrap(),
        }
    }

    /// Largest Cantor–Bendixson rank of a point strictly inside the
    /// interval (`0` for a leaf: its only points are the endpoints).
    fn max_inner_rank(&self) -> usize {
        match self {
            Shape::Leaf => 0,
            Shape::Node { left, right, .. } => {
                let kids = left.all().chain(right.all()).map(|c| c.max_inner_rank()).max().unwrap();
                kids.max(self.centre_rank())
            }
        }
    }

    /// Rank of `c`: one more than the ranks accumulating at it, which come
    /// from the eventually repeating children and the rank-0 points `a_k`.
    fn centre_rank(&self) -> usize {
        match self {
            Shape::Leaf => 0,
            Shape::Node { left, right, .. } => 1 + left.rest.max_inner_rank().max(right.rest.max_inner_rank()),
        }
    }
}

impl CbTree {
    pub fn leaf(a: Rational, b: Rational) -> Result<CbTree> {
        Self::with_shape(a, b, Arc::new(Shape::Leaf))
    }

    pub fn with_shape(a: Rational, b: Rational, shape: Arc<Shape>) -> Result<CbTree> {
        if a >= b {
            return Err(Error::BadAmbient);
        }
        check_shape(&shape)?;
        Ok(CbTree { a, b, shape })
    }

    pub fn depth(&self) -> usize {
        self.shape.depth()
    }

    /// The centre `c`, for a node.
    pub fn centre(&self) -> Option<Rational> {
        match &*self.shape {
            Shape::Leaf => None,
            Shape::Node { split, .. } => Some(&self.a + (&self.b - &self.a) * split),
        }
    }

    /// `a_k` (left) or `b_k` (right) of a node.
    pub fn seq_point(&self, side: Side, k: usize) -> Option<Rational> {
        let Shape::Node { contraction, .. } = &*self.shape else { return None };
        let c = self.centre()?;
        let rk = num_traits::pow(contraction.clone(), k);
        Some(match side {
            Side::Left => &c - (&c - &self.a) * rk,
            Side::Right => &c + (&self.b - &c) * rk,
        })
    }

    /// Child `k` on `side`: `(a_k, a_{k+1})` or `(b_{k+1}, b_k)`.
    pub fn child(&self, side: Side, k: usize) -> Option<CbTree> {
        let Shape::Node { left, right, .. } = &*self.shape else { return None };
        let (p, q) = (self.seq_point(side, k)?, self.seq_point(side, k + 1)?);
        Some(match side {
            Side::Left => CbTree { a: p, b: q, shape: left.get(k).clone() },
            Side::Right => CbTree { a: q, b: p, shape: right.get(k).clone() },
        })
    }

    pub fn ambient(&self) -> (Rational, Rational) {
        (self.a.clone(), self.b.clone())
    }
}

fn check_shape(s: &Shape) -> Result<()> {
    if let Shape::Node { split, contraction, left, right } = s {
        let open01 = |q: &Rational| q.is_positive() && *q < rq::int(1);
        if !open01(split) || !open01(contraction) {
            return Err(Error::Precondition("split and contraction must lie in (0, 1)".into()));
        }
        for c in left.all().chain(right.all()) {
            check_shape(c)?;
        }
    }
    Ok(())
}

/// Uniform tree of depth `d`: centres at midpoints, every child of depth `d-1`.
pub fn cb_uniform(depth: usize, interval: (Rational, Rational), contraction: &Rational) -> Result<CbTree> {
    CbTree::with_shape(interval.0, interval.1, Shape::uniform(depth, contraction))
}

/// The enumerated value `f(n)`: `f(0) = a`, `f(1) = b`, `f(2) = c`, and
/// `f(2^j(2m+1) + 2) = f_j(m)` with `f_{2k}` the enumeration of the left
/// child `k` and `f_{2k+1}` that of the right child `k`. A leaf repeats `b`.
pub fn cb_index(t: &CbTree, n: u64) -> Rational {
    match n {
        0 => return t.a.clone(),
        1 => return t.b.clone(),
        _ => {}
    }
    let Some(c) = t.centre() else { return t.b.clone() };
    if n == 2 {
        return c;
    }
    let (j, m) = split_index(n - 2);
    let side = if j % 2 == 0 { Side::Left } else { Side::Right };
    cb_index(&t.child(side, (j / 2) as usize).unwrap(), m)
}

/// `x = 2^j (2m + 1)` for `x >= 1`.
pub fn split_index(x: u64) -> (u32, u64) {
    let j = x.trailing_zeros();
    (j, (x >> j) >> 1)
}

/// Inverse of [`cb_index`]'s decoding: the index coding child `j`'s entry `m`.
pub fn join_index(j: u32, m: u64) -> Option<u64> {
    (2 * m + 1).checked_shl(j).filter(|v| v >> j == 2 * m + 1)?.checked_add(2)
}

/// The complement `G` truncated to sequence indices `k <= s` at every node.
pub fn cb_complement_stage(t: &CbTree, s: usize) -> OpenSet {
    let mut raw = Vec::new();
    collect_gaps(t, s, &mut raw);
    opensets::normalize(&raw, &t.ambient()).expect("tree intervals are nonempty")
}

fn collect_gaps(t: &CbTree, s: usize, out: &mut Vec<(Rational, Rational)>) {
    match &*t.shape {
        Shape::Leaf => out.push(t.ambient()),
        Shape::Node { .. } => {
            for k in 0..=s {
                for side in [Side::Left, Side::Right] {
                    collect_gaps(&t.child(side, k).unwrap(), s, out);
                }
            }
        }
    }
}

/// Enclosure of `d(x, F)` with width `< 2^-m`.
///
/// Refines `x`, then descends through the unique gap containing the centre
/// of the enclosure: the endpoints of every gap lie in `F`, so the distance
/// is attained inside it. Near `c` the descent stops once `c - a_k` drops
/// below the tolerance and answers `[0, |c - q|]`.
pub fn cb_distance(t: &CbTree, x: &CReal, m: u32) -> RationalInterval {
    let e = x.approx(m + 2);
    let q = e.mid();
    let tol = rq::pow2(-(m as i64) - 2);
    let d = distance_to(t, &q, &tol);
    let lo = rq::max(&(&d.lo - e.radius()), &rq::int(0));
    RationalInterval::new(lo, &d.hi + e.radius())
}

/// Distance from a rational point to `F`, width `< tol`.
pub fn distance_to(t: &CbTree, q: &Rational, tol: &Rational) -> RationalInterval {
    if *q <= t.a {
        return RationalInterval::point(&t.a - q);
    }
    if *q >= t.b {
        return RationalInterval::point(q - &t.b);
    }
    let Some(c) = t.centre() else {
        return RationalInterval::point(rq::min(&(q - &t.a), &(&t.b - q)));
    };
    if *q == c {
        return RationalInterval::zero();
    }
    let side = if *q < c { Side::Left } else { Side::Right };
    let mut k = 0;
    loop {
        let next = t.seq_point(side, k + 1).unwrap();
        let inside = match side {
            Side::Left => *q < next,
            Side::Right => *q > next,
        };
        if inside {
            return distance_to(&t.child(side, k).unwrap(), q, tol);
        }
        if (&c - &next).abs() < *tol {
            return RationalInterval::new(rq::int(0), (&c - q).abs());
        }
        k += 1;
    }
}

/// A point of `F` within `d(q, F) + tol` of `q`.
pub fn nearest_point(t: &CbTree, q: &Rational, tol: &Rational) -> Rational {
    if *q <= t.a {
        return t.a.clone();
    }
    if *q >= t.b {
        return t.b.clone();
    }
    let Some(c) = t.centre() else {
        return if q - &t.a <= &t.b - q { t.a.clone() } else { t.b.clone() };
    };
    if *q == c {
        return c;
    }
    let side = if *q < c { Side::Left } else { Side::Right };
    let mut k = 0;
    loop {
        let next = t.seq_point(side, k + 1).unwrap();
        let inside = match side {
            Side::Left => *q < next,
            Side::Right => *q > next,
        };
        if inside {
            return nearest_point(&t.child(side, k).unwrap(), q, tol);
        }
        if (&c - &next).abs() < *tol {
            return c;
        }
        k += 1;
    }
}

/// Outcome of a closure search for one probe.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClosureStatus {
    Found(u64),
    /// No index within the budget; not a claim that none exists.
    Inconclusive,
    /// The probe is certified to be outside `F`.
    NotInF,
}

/// For each probe in `F`, the first `i < budget` with `|f(i) - x| < 2^-k`.
pub fn cb_closure_check(t: &CbTree, probes: &[Rational], k: u32, budget: u64) -> Vec<ClosureStatus> {
    let eps = rq::pow2(-(k as i64));
    probes
        .iter()
        .map(|x| {
            if distance_to(t, x, &rq::pow2(-(k as i64) - 4)).lo.is_positive() {
                return ClosureStatus::NotInF;
            }
            (0..budget)
                .find(|&i| (cb_index(t, i) - x).abs() < eps)
                .map_or(ClosureStatus::Inconclusive, ClosureStatus::Found)
        })
        .collect()
}

/// Position of an index in the interleaved enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Slot {
    Anchor(usize),
    /// Entry `k` of `f_{i,m}` (`second = false`) or `g_{i,m}` (`second = true`).
    Family { i: usize, m: u64, second: bool, k: u64 },
}

type Family = dyn Fn(usize, u64, bool, u64) -> Rational + Send + Sync;

/// One enumeration built from anchors `y_0..y_{n-1}` and two families of
/// enumerations: `f(i) = y_i`, `f(n + 2^(2mn + 2i)(2k+1)) = f_{i,m}(k)` and
/// `f(n + 2^(2mn + 2i + 1)(2k+1)) = g_{i,m}(k)`.
#[derive(Clone)]
pub struct Interleaved {
    pub anchors: Vec<Rational>,
    family: Arc<Family>,
}

impl Interleaved {
    pub fn value(&self, idx: u64) -> Rational {
        match self.decode(idx) {
            Slot::Anchor(i) => self.anchors[i].clone(),
            Slot::Family { i, m, second, k } => (self.family)(i, m, second, k),
        }
    }

    pub fn decode(&self, idx: u64) -> Slot {
        let n = self.anchors.len() as u64;
        if idx < n {
            return Slot::Anchor(idx as usize);
        }
        let (e, k) = split_index(idx - n);
        let e = e as u64;
        let (m, r) = (e / (2 * n), e % (2 * n));
        Slot::Family { i: (r / 2) as usize, m, second: r % 2 == 1, k }
    }

    pub fn encode(&self, slot: Slot) -> Option<u64> {
        let n = self.anchors.len() as u64;
        match slot {
            Slot::Anchor(i) => ((i as u64) < n).then_some(i as u64),
            Slot::Family { i, m, second, k } => {
                if i as u64 >= n {
                    return None;
                }
                let e = m.checked_mul(2 * n)?.checked_add(2 * i as u64 + second as u64)?;
                let e = u32::try_from(e).ok().filter(|&e| e < 64)?;
                let odd = k.checked_mul(2)?.checked_add(1)?;
                let v = odd.checked_shl(e).filter(|v| v >> e == odd)?;
                v.checked_add(n)
            }
        }
    }
}

pub fn ae_interleave<F>(anchors: Vec<Rational>, family: F) -> Result<Interleaved>
where
    F: Fn(usize, u64, bool, u64) -> Rational + Send + Sync + 'static,
{
    if anchors.is_empty() {
        return Err(Error::Precondition("interleaving needs at least one anchor".into()));
    }
    Ok(Interleaved { anchors, family: Arc::new(family) })
}

/// `γ(n)`: an explicit prefix, then a default rule.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Gauge {
    pub prefix: Vec<u32>,
    pub default: GaugeRule,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GaugeRule {
    Constant(u32),
    /// `base + slope·n`.
    Linear { base: u32, slope: u32 },
}

impl Gauge {
    pub fn constant(v: u32) -> Self {
        Gauge { prefix: Vec::new(), default: GaugeRule::Constant(v) }
    }

    pub fn at(&self, n: u64) -> u32 {
        if let Some(&v) = self.prefix.get(n as usize) {
            return v;
        }
        match self.default {
            GaugeRule::Constant(v) => v,
            GaugeRule::Linear { base, slope } => base.saturating_add(slope.saturating_mul(n.min(u32::MAX as u64) as u32)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AeStatus {
    Witness(u64),
    Exhausted,
    NotInF,
}

/// For each probe, the first `n < budget` with `|f(n) - x| < 2^-γ(n)`.
/// Probes certified outside `F` (when a tree is given) are reported as such.
pub fn ae_check(
    f: &dyn Fn(u64) -> Rational,
    tree: Option<&CbTree>,
    probes: &[Rational],
    gamma: &Gauge,
    budget: u64,
) -> Vec<AeStatus> {
    probes
        .iter()
        .map(|x| {
            if let Some(t) = tree {
                if distance_to(t, x, &rq::pow2(-40)).lo.is_positive() {
                    return AeStatus::NotInF;
                }
            }
            (0..budget)
                .find(|&n| (f(n) - x).abs() < rq::pow2(-(gamma.at(n) as i64)))
                .map_or(AeStatus::Exhausted, AeStatus::Witness)
        })
        .collect()
}

/// A relatively open piece of a closed ambient interval.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Piece {
    #[serde(with = "rq::serde_str")]
    pub lo: Rational,
    #[serde(with = "rq::serde_str")]
    pub hi: Rational,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

impl Piece {
    pub fn contains(&self, x: &Rational) -> bool {
        let above = if self.lo_closed { *x >= self.lo } else { *x > self.lo };
        let below = if self.hi_closed { *x <= self.hi } else { *x < self.hi };
        above && below
    }
}

/// `[lo, hi]` minus the closed balls `B(f(n), 2^-c(n))` for `n < len(c)`.
pub fn residual_set(f: &[Rational], c: &[u32], ambient: &(Rational, Rational)) -> Result<Vec<Piece>> {
    if ambient.0 >= ambient.1 {
        return Err(Error::BadAmbient);
    }
    if c.len() > f.len() {
        return Err(Error::Precondition("exponent list longer than the enumeration prefix".into()));
    }
    let mut balls: Vec<(Rational, Rational)> = f
        .iter()
        .zip(c)
        .map(|(y, &e)| {
            let r = rq::pow2(-(e as i64));
            (y - &r, y + r)
        })
        .collect();
    balls.sort();
    let mut merged: Vec<(Rational, Rational)> = Vec::new();
    for (l, r) in balls {
        match merged.last_mut() {
            Some(last) if l <= last.1 => last.1 = rq::max(&last.1, &r),
            _ => merged.push((l, r)),
        }
    }
    let mut out = Vec::new();
    let (mut cur, mut cur_closed) = (ambient.0.clone(), true);
    for (l, r) in merged {
        if l > ambient.1 {
            break;
        }
        if l > cur {
            out.push(Piece { lo: cur.clone(), hi: l, lo_closed: cur_closed, hi_closed: false });
        }
        if r >= cur {
            cur = r;
            cur_closed = false;
        }
        if cur >= ambient.1 {
            return Ok(out);
        }
    }
    if cur < ambient.1 {
        out.push(Piece { lo: cur, hi: ambient.1.clone(), lo_closed: cur_closed, hi_closed: true });
    }
    Ok(out)
}

/// Rank of the true complement `G` under the co-derivative, with finite
/// snapshots of each stage `X_k` expanded to sequence index `s`.
///
/// A point of `F` of Cantor–Bendixson rank `r` joins `X_{r+1}`; so a subtree
/// is filled at step `k` once every interior point has rank `< k`, and the
/// whole interval is reached at one more than the largest interior rank.
pub fn cb_fullness(t: &CbTree, s: usize, max_rank: usize) -> FullnessReport {
    let rank = match &*t.shape {
        Shape::Leaf => 0,
        sh => sh.max_inner_rank() + 1,
    };
    let last = rank.min(max_rank);
    let stages = (0..=last).map(|k| snapshot(t, s, k)).collect();
    let rank = if rank <= max_rank { Rank::Full(rank) } else { Rank::NotFullWithin(max_rank) };
    FullnessReport { rank, stages }
}

/// Finite inner approximation of `X_k` using sequence indices `<= s`.
pub fn snapshot(t: &CbTree, s: usize, k: usize) -> OpenSet {
    let mut raw = Vec::new();
    snapshot_into(t, s, k, &mut raw);
    let g = opensets::normalize(&raw, &t.ambient()).unwrap();
    if k >= 1 {
        opensets::co_derivative(&g)
    } else {
        g
    }
}

fn snapshot_into(t: &CbTree, s: usize, k: usize, out: &mut Vec<(Rational, Rational)>) {
    match &*t.shape {
        Shape::Leaf => out.push(t.ambient()),
        sh => {
            if sh.max_inner_rank() < k {
                out.push(t.ambient());
                return;
            }
            let mut raw = Vec::new();
            for j in 0..=s {
                for side in [Side::Left, Side::Right] {
                    snapshot_into(&t.child(side, j).unwrap(), s, k, &mut raw);
                }
            }
            if sh.centre_rank() < k {
                raw.push((t.seq_point(Side::Left, s + 1).unwrap(), t.seq_point(Side::Right, s + 1).unwrap()));
            }
            let g = opensets::normalize(&raw, &t.ambient()).unwrap();
            // Shared sequence points have rank 0 and are present from step 1.
            let g = if k >= 1 { opensets::co_derivative(&g) } else { g };
            out.extend(g.components().iter().cloned());
        }
    }
}

/// JSON form: uniform trees as `{"interval", "c", "contraction", "depth"}`,
/// general trees as `{"interval", "shape"}` with nested shape descriptors.
#[derive(Serialize, Deserialize)]
struct CbTreeJson {
    interval: [String; 2],
    #[serde(skip_serializing_if = "Option::is_none", default)]
    c: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    contraction: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    depth: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    shape: Option<ShapeJson>,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum ShapeJson {
    Leaf(String),
    Node { split: String, contraction: String, left: SeqJson, right: SeqJson },
}

#[derive(Serialize, Deserialize)]
struct SeqJson {
    #[serde(default)]
    prefix: Vec<ShapeJson>,
    rest: Box<ShapeJson>,
}

fn shape_to_json(s: &Shape) -> ShapeJson {
    match s {
        Shape::Leaf => ShapeJson::Leaf("leaf".into()),
        Shape::Node { split, contraction, left, right } => {
            let seq = |q: &ChildSeq| SeqJson {
                prefix: q.prefix.iter().map(|p| shape_to_json(p)).collect(),
                rest: Box::new(shape_to_json(&q.rest)),
            };
            ShapeJson::Node { split: rq::fmt(split), contraction: rq::fmt(contraction), left: seq(left), right: seq(right) }
        }
    }
}

fn shape_from_json(j: &ShapeJson) -> Result<Arc<Shape>> {
    Ok(Arc::new(match j {
        ShapeJson::Leaf(s) if s == "leaf" => Shape::Leaf,
        ShapeJson::Leaf(s) => return Err(Error::Parse(format!("unknown shape {s:?}"))),
        ShapeJson::Node { split, contraction, left, right } => {
            let seq = |q: &SeqJson| -> Result<ChildSeq> {
                Ok(ChildSeq {
                    prefix: q.prefix.iter().map(shape_from_json).collect::<Result<_>>()?,
                    rest: shape_from_json(&q.rest)?,
                })
            };
            Shape::Node { split: rq::parse(split)?, contraction: rq::parse(contraction)?, left: seq(left)?, right: seq(right)? }
        }
    }))
}

/// `(depth, split, contraction)` when every node shares them and all
/// children of a node are identical uniform trees.
fn uniform_params(s: &Shape) -> Option<(usize, Rational, Rational)> {
    match s {
        Shape::Leaf => Some((0, rq::rat(1, 2), rq::rat(1, 2))),
        Shape::Node { split, contraction, left, right } => {
            if !left.prefix.is_empty() || !right.prefix.is_empty() || left.rest != right.rest {
                return None;
            }
            let (d, sp, ct) = uniform_params(&left.rest)?;
            (d == 0 || (sp == *split && ct == *contraction)).then(|| (d + 1, split.clone(), contraction.clone()))
        }
    }
}

impl Serialize for CbTree {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        let interval = [rq::fmt(&self.a), rq::fmt(&self.b)];
        let j = match uniform_params(&self.shape) {
            Some((d, split, contraction)) if d > 0 => CbTreeJson {
                interval,
                c: Some(rq::fmt(&(&self.a + (&self.b - &self.a) * split))),
                contraction: Some(rq::fmt(&contraction)),
                depth: Some(d),
                shape: None,
            },
            Some((0, ..)) => CbTreeJson { interval, c: None, contraction: None, depth: Some(0), shape: None },
            _ => CbTreeJson { interval, c: None, contraction: None, depth: None, shape: Some(shape_to_json(&self.shape)) },
        };
        j.serialize(ser)
    }
}

impl<'de> Deserialize<'de> for CbTree {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let j = CbTreeJson::deserialize(de)?;
        let conv = |r: Result<CbTree>| r.map_err(D::Error::custom);
        let a = rq::parse(&j.interval[0]).map_err(D::Error::custom)?;
        let b = rq::parse(&j.interval[1]).map_err(D::Error::custom)?;
        if let Some(shape) = &j.shape {
            return conv(shape_from_json(shape).and_then(|s| CbTree::with_shape(a, b, s)));
        }
        let depth = j.depth.ok_or_else(|| D::Error::custom("tree needs either depth or shape"))?;
        if depth == 0 {
            return conv(CbTree::leaf(a, b));
        }
        let contraction = rq::parse(j.contraction.as_deref().unwrap_or("1/2")).map_err(D::Error::custom)?;
        let split = match &j.c {
            Some(c) => {
                let c = rq::parse(c).map_err(D::Error::custom)?;
                if b <= a {
                    return Err(D::Error::custom("empty tree interval"));
                }
                (c - &a) / (&b - &a)
            }
            None => rq::rat(1, 2),
        };
        let mut s = Arc::new(Shape::Leaf);
        for _ in 0..depth {
            s = Arc::new(Shape::Node {
                split: split.clone(),
                contraction: contraction.clone(),
                left: ChildSeq::repeat(s.clone()),
                right: ChildSeq::repeat(s),
            });
        }
        conv(CbTree::with_shape(a, b, s))
    }
}
