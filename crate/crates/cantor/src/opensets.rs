//! Open subsets of an ambient interval as normalized finite unions of open
//! intervals with π-scaled rational endpoints, and the co-derivative.
//!
//! Touching components `(p, y), (y, q)` are kept apart: the shared endpoint
//! is genuinely missing, and merging across it is exactly what the
//! co-derivative does.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::creals::CReal;
use crate::elementary;
use crate::error::{Error, Result};
use crate::interval::RationalInterval;
use crate::rational::{self as rq, Rational};

/// A normalized finite union of open intervals inside `(ambient.0, ambient.1)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "OpenSetJson", into = "OpenSetJson")]
pub struct OpenSet {
    ambient: (Rational, Rational),
    components: Vec<(Rational, Rational)>,
}

#[derive(Serialize, Deserialize)]
struct OpenSetJson {
    ambient: [String; 2],
    components: Vec<[String; 2]>,
}

impl TryFrom<OpenSetJson> for OpenSet {
    type Error = Error;
    fn try_from(j: OpenSetJson) -> Result<Self> {
        let ambient = (rq::parse(&j.ambient[0])?, rq::parse(&j.ambient[1])?);
        let raw = j.components.iter().map(|[l, r]| Ok((rq::parse(l)?, rq::parse(r)?))).collect::<Result<Vec<_>>>()?;
        normalize(&raw, &ambient)
    }
}

impl From<OpenSet> for OpenSetJson {
    fn from(g: OpenSet) -> Self {
        OpenSetJson {
            ambient: [rq::fmt(&g.ambient.0), rq::fmt(&g.ambient.1)],
            components: g.components.iter().map(|(l, r)| [rq::fmt(l), rq::fmt(r)]).collect(),
        }
    }
}

/// The standard ambient `(-1, 1)`, i.e. `(-π, π)` in π-scaled units.
pub fn unit_ambient() -> (Rational, Rational) {
    (rq::int(-1), rq::int(1))
}

impl OpenSet {
    pub fn empty(ambient: &(Rational, Rational)) -> Result<OpenSet> {
        normalize(&[], ambient)
    }

    /// The ambient interval as a set.
    pub fn full(ambient: &(Rational, Rational)) -> Result<OpenSet> {
        normalize(std::slice::from_ref(ambient), ambient)
    }

    pub fn ambient(&self) -> &(Rational, Rational) {
        &self.ambient
    }

    pub fn components(&self) -> &[(Rational, Rational)] {
        &self.components
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    /// Whether the set is the whole ambient interval.
    pub fn is_full(&self) -> bool {
        self.components.len() == 1 && self.components[0] == self.ambient
    }

    /// Exact membership of a rational point.
    pub fn contains_point(&self, q: &Rational) -> bool {
        self.components.iter().any(|(l, r)| l < q && q < r)
    }

    /// Inclusion by component containment; exact because components are the
    /// connected components of the set.
    pub fn is_subset(&self, other: &OpenSet) -> bool {
        self.components.iter().all(|(l, r)| other.components.iter().any(|(a, b)| a <= l && r <= b))
    }

    /// Ambient points not covered: the complement as closed pieces
    /// `[x, y]` (degenerate for isolated missing points).
    pub fn complement(&self) -> Vec<(Rational, Rational)> {
        let mut out = Vec::new();
        let mut cur = self.ambient.0.clone();
        for (l, r) in &self.components {
            out.push((cur.clone(), l.clone()));
            cur = r.clone();
        }
        out.push((cur, self.ambient.1.clone()));
        out
    }
}

/// Clips to the ambient, drops empty intervals, sorts, and merges strictly
/// overlapping intervals; touching pairs are preserved.
pub fn normalize(raw: &[(Rational, Rational)], ambient: &(Rational, Rational)) -> Result<OpenSet> {
    if ambient.0 >= ambient.1 {
        return Err(Error::BadAmbient);
    }
    let mut v: Vec<(Rational, Rational)> = raw
        .iter()
        .map(|(l, r)| (rq::max(l, &ambient.0), rq::min(r, &ambient.1)))
        .filter(|(l, r)| l < r)
        .collect();
    v.sort();
    let mut out: Vec<(Rational, Rational)> = Vec::with_capacity(v.len());
    for (l, r) in v {
        match out.last_mut() {
            Some(last) if l < last.1 => {
                if r > last.1 {
                    last.1 = r;
                }
            }
            _ => out.push((l, r)),
        }
    }
    Ok(OpenSet { ambient: ambient.clone(), components: out })
}

/// Joins every chain of touching components: a point belongs to `G⁺` when
/// some neighbourhood of it lies in `G` up to one excepted point, and for a
/// finite union the only new such points are shared endpoints.
pub fn co_derivative(g: &OpenSet) -> OpenSet {
    let mut out: Vec<(Rational, Rational)> = Vec::with_capacity(g.components.len());
    for (l, r) in &g.components {
        match out.last_mut() {
            Some(last) if last.1 == *l => last.1 = r.clone(),
            _ => out.push((l.clone(), r.clone())),
        }
    }
    OpenSet { ambient: g.ambient.clone(), components: out }
}

/// Rank reached by the co-derivative iteration.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Rank {
    Full(usize),
    NotFullWithin(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FullnessReport {
    pub rank: Rank,
    /// `stages[k]` is the set after `k` co-derivative steps.
    pub stages: Vec<OpenSet>,
}

/// Iterates the co-derivative at most `max_rank` times, stopping at the
/// ambient or at a fixed point.
pub fn fullness_rank(g: &OpenSet, max_rank: usize) -> FullnessReport {
    let mut stages = vec![g.clone()];
    for k in 0..=max_rank {
        let cur = &stages[k];
        if cur.is_full() {
            return FullnessReport { rank: Rank::Full(k), stages };
        }
        if k == max_rank {
            break;
        }
        let next = co_derivative(cur);
        if next == *cur {
            break;
        }
        stages.push(next);
    }
    FullnessReport { rank: Rank::NotFullWithin(max_rank), stages }
}

/// Normalized union of sets sharing `ambient`; the empty list gives `∅`.
pub fn union_of(sets: &[OpenSet], ambient: &(Rational, Rational)) -> Result<OpenSet> {
    if sets.iter().any(|s| s.ambient != *ambient) {
        return Err(Error::AmbientMismatch);
    }
    let raw: Vec<_> = sets.iter().flat_map(|s| s.components.iter().cloned()).collect();
    normalize(&raw, ambient)
}

pub fn intersect(g0: &OpenSet, g1: &OpenSet) -> Result<OpenSet> {
    if g0.ambient != g1.ambient {
        return Err(Error::AmbientMismatch);
    }
    let mut raw = Vec::new();
    for (a, b) in &g0.components {
        for (c, d) in &g1.components {
            let (l, r) = (rq::max(a, c), rq::min(b, d));
            if l < r {
                raw.push((l, r));
            }
        }
    }
    normalize(&raw, &g0.ambient)
}

/// `x +_π G`: the points `t` of `(-1, 1)` with `t - v`, `t - v + 2` or
/// `t - v - 2` in `G`, where `x = πv`.
///
/// Read on the circle `[-π, π]/(-π ~ π)`: when `G` contains neighbourhoods of
/// both ends, the seam `±1` is an interior point of the rotated set, so the
/// two image pieces meeting at `v ∓ 1` are joined. This keeps the full set
/// invariant and makes translation commute with the co-derivative.
pub fn translate_wrap(g: &OpenSet, v: &Rational) -> Result<OpenSet> {
    let amb = unit_ambient();
    if g.ambient != amb {
        return Err(Error::AmbientMismatch);
    }
    if v.is_zero() {
        return Ok(g.clone());
    }
    let mut raw = Vec::new();
    for shift in [v.clone(), v - rq::int(2), v + rq::int(2)] {
        for (l, r) in &g.components {
            raw.push((l + &shift, r + &shift));
        }
    }
    let mut out = normalize(&raw, &amb)?;
    let wraps = g.components.first().is_some_and(|c| c.0 == amb.0) && g.components.last().is_some_and(|c| c.1 == amb.1);
    if wraps {
        let seam = if *v > rq::int(0) { v - rq::int(1) } else { v + rq::int(1) };
        let comps = &mut out.components;
        if let Some(i) = comps.iter().position(|c| c.1 == seam) {
            if i + 1 < comps.len() && comps[i + 1].0 == seam {
                let right = comps.remove(i + 1);
                comps[i].1 = right.1;
            }
        }
    }
    Ok(out)
}

/// Outcome of a budgeted membership query.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Membership {
    /// Index of a component strictly containing an enclosure of `x`.
    Inside(usize),
    Undecided,
}

/// Membership of a π-scaled real: `Inside` once some component strictly
/// contains `x.approx(n)` for `n <= budget`. Never a false `Inside`.
pub fn member(g: &OpenSet, x: &CReal, budget: u32) -> Membership {
    for n in 0..=budget {
        let e = x.approx(n);
        if let Some(i) = g.components.iter().position(|(l, r)| *l < e.lo && e.hi < *r) {
            return Membership::Inside(i);
        }
    }
    Membership::Undecided
}

/// Membership of a real given in real coordinates (the set is π-scaled).
pub fn member_real(g: &OpenSet, x: &CReal, budget: u32) -> Membership {
    for n in 0..=budget {
        let e = x.approx(n);
        let pi = elementary::pi_interval(n + 4);
        let hit = g.components.iter().position(|(l, r)| {
            let lo = RationalInterval::point(l.clone()) * pi.clone();
            let hi = RationalInterval::point(r.clone()) * pi.clone();
            lo.hi < e.lo && e.hi < hi.lo
        });
        if let Some(i) = hit {
            return Membership::Inside(i);
        }
    }
    Membership::Undecided
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn set(pairs: &[(i64, i64, i64, i64)]) -> OpenSet {
        let raw: Vec<_> = pairs.iter().map(|&(a, b, c, d)| (rat(a, b), rat(c, d))).collect();
        normalize(&raw, &unit_ambient()).unwrap()
    }

    #[test]
    fn normalize_examples() {
        assert_eq!(set(&[(-1, 1, 0, 1), (-1, 2, 1, 2)]), set(&[(-1, 1, 1, 2)]));
        assert_eq!(set(&[(-1, 1, 0, 1), (0, 1, 1, 1)]).components().len(), 2);
        assert!(set(&[(2, 1, 3, 1)]).is_empty());
        assert_eq!(normalize(&[], &(rq::int(1), rq::int(1))), Err(Error::BadAmbient));
    }

    #[test]
    fn co_derivative_examples() {
        assert!(co_derivative(&set(&[(-1, 1, 0, 1), (0, 1, 1, 1)])).is_full());
        let g = set(&[(-1, 1, 0, 1), (1, 2, 1, 1)]);
        assert_eq!(co_derivative(&g), g);
        assert!(co_derivative(&set(&[(-1, 1, -1, 2), (-1, 2, 0, 1), (0, 1, 1, 1)])).is_full());
    }

    #[test]
    fn rank_examples() {
        let amb = OpenSet::full(&unit_ambient()).unwrap();
        assert_eq!(fullness_rank(&amb, 5).rank, Rank::Full(0));
        let r = fullness_rank(&set(&[(-1, 1, 0, 1), (0, 1, 1, 1)]), 5);
        assert_eq!(r.rank, Rank::Full(1));
        assert_eq!(r.stages.len(), 2);
        assert_eq!(fullness_rank(&set(&[(-1, 1, 0, 1)]), 5).rank, Rank::NotFullWithin(5));
    }

    #[test]
    fn union_and_intersection_examples() {
        let amb = unit_ambient();
        let u = union_of(&[set(&[(-1, 1, 0, 1)]), set(&[(0, 1, 1, 1)])], &amb).unwrap();
        assert_eq!(u.components().len(), 2);
        assert_eq!(intersect(&set(&[(-1, 1, 1, 2)]), &set(&[(0, 1, 1, 1)])).unwrap(), set(&[(0, 1, 1, 2)]));
        assert!(union_of(&[], &amb).unwrap().is_empty());
        let other = normalize(&[], &(rq::int(0), rq::int(1))).unwrap();
        assert_eq!(intersect(&other, &u), Err(Error::AmbientMismatch));
    }

    #[test]
    fn translate_examples() {
        let t = translate_wrap(&set(&[(0, 1, 1, 1)]), &rat(1, 2)).unwrap();
        assert_eq!(t, set(&[(-1, 1, -1, 2), (1, 2, 1, 1)]));
        let amb = OpenSet::full(&unit_ambient()).unwrap();
        assert!(translate_wrap(&amb, &rat(1, 3)).unwrap().is_full());
        assert!(translate_wrap(&set(&[]), &rat(1, 3)).unwrap().is_empty());
        let g = set(&[(-1, 1, 0, 1), (0, 1, 1, 1)]);
        let lhs = translate_wrap(&co_derivative(&g), &rat(1, 2)).unwrap();
        let rhs = co_derivative(&translate_wrap(&g, &rat(1, 2)).unwrap());
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn membership_examples() {
        let g = normalize(&[(rq::int(0), rq::int(1))], &unit_ambient()).unwrap();
        assert_eq!(member(&g, &CReal::from_rational(rat(1, 2)), 4), Membership::Inside(0));
        assert_eq!(member(&g, &CReal::from_int(0), 30), Membership::Undecided);
        let quarter_pi = CReal::pi().scale(&rat(1, 4));
        assert_eq!(member_real(&g, &quarter_pi, 10), Membership::Inside(0));
    }

    #[test]
    fn json_shape() {
        let g = set(&[(-1, 2, 0, 1)]);
        let j = serde_json::to_string(&g).unwrap();
        assert_eq!(j, r#"{"ambient":["-1","1"],"components":[["-1/2","0"]]}"#);
        assert_eq!(serde_json::from_str::<OpenSet>(&j).unwrap(), g);
    }
}
