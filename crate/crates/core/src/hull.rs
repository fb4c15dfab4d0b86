//! Balls, admissible hulls and radii.
//!
//! Two hull operators are provided. [`HullMode::PaperCov`] intersects only
//! balls centred inside the set that contain it; [`HullMode::ArbitraryCenter`]
//! intersects every ball containing the set and is a closure operator.

use std::collections::HashSet;
use std::fmt;

use serde::Serialize;

use crate::dyadic::DyadicValue;
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::grade::Grade;
use crate::pointset::PointSet;
use crate::system::{expand_level, RelationalSystem};

/// Default bound on the number of distinct sets produced by enumeration.
pub const DEFAULT_ENUMERATION_CAP: usize = 2_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum HullMode {
    #[serde(rename = "paper-cov")]
    PaperCov,
    #[serde(rename = "arbitrary-center")]
    ArbitraryCenter,
}

impl fmt::Display for HullMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            HullMode::PaperCov => "paper-cov",
            HullMode::ArbitraryCenter => "arbitrary-center",
        })
    }
}

/// `B(center, R_level)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct BallRef {
    pub center: usize,
    pub level: i64,
}

/// `{y : μ(x, y) ≥ n}`.
pub fn ball(sys: &RelationalSystem, x: usize, n: i64) -> PointSet {
    PointSet::from_indices(sys.len(), sys.points().filter(|&y| sys.grade(x, y).reaches(n)))
}

/// A set together with balls whose intersection is exactly that set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AdmissibleSet {
    pub points: PointSet,
    pub witness_balls: Vec<BallRef>,
    pub mode: HullMode,
}

impl AdmissibleSet {
    /// Recompute the intersection of the witness balls.
    pub fn verify(&self, sys: &RelationalSystem) -> bool {
        let mut acc = PointSet::full(sys.len());
        for b in &self.witness_balls {
            acc.intersect_with(&ball(sys, b.center, b.level));
        }
        acc == self.points
    }
}

/// Largest level at which the ball around `x` still contains `a`, capped at
/// `hi + 1` (the singleton ball).
fn containing_level(sys: &RelationalSystem, x: usize, a: &PointSet) -> i64 {
    let cap = sys.window().hi + 1;
    a.iter()
        .map(|y| sys.grade(x, y))
        .min()
        .and_then(Grade::level)
        .map_or(cap, |g| g.min(cap))
}

pub fn hull(sys: &RelationalSystem, a: &PointSet, mode: HullMode) -> Result<AdmissibleSet> {
    if a.is_empty() {
        return Err(Error::EmptySet);
    }
    let centers: Vec<usize> = match mode {
        HullMode::PaperCov => a.to_vec(),
        HullMode::ArbitraryCenter => sys.points().collect(),
    };
    let mut points = PointSet::full(sys.len());
    let mut witness_balls = Vec::with_capacity(centers.len());
    for x in centers {
        let level = containing_level(sys, x, a);
        points.intersect_with(&ball(sys, x, level));
        witness_balls.push(BallRef { center: x, level });
    }
    Ok(AdmissibleSet {
        points,
        witness_balls,
        mode,
    })
}

/// Every distinct ball `B(x, R_n)` for `n` in `[lo - 1, hi + 1]`, first
/// occurrence kept.
pub fn distinct_balls(sys: &RelationalSystem) -> Vec<(BallRef, PointSet)> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for x in sys.points() {
        for n in sys.window().extended_levels() {
            let b = ball(sys, x, n);
            if seen.insert(b.clone()) {
                out.push((BallRef { center: x, level: n }, b));
            }
        }
    }
    out
}

pub fn enumerate_admissible(sys: &RelationalSystem, mode: HullMode) -> Result<Vec<AdmissibleSet>> {
    enumerate_admissible_with(sys, mode, DEFAULT_ENUMERATION_CAP, Execution::default())
}

/// All nonempty fixed points of the hull operator, in canonical set order.
///
/// The ball family is closed under intersection breadth-first; each round's
/// frontier is expanded independently and merged in canonical order, so the
/// result does not depend on `exec`.
pub fn enumerate_admissible_with(
    sys: &RelationalSystem,
    mode: HullMode,
    cap: usize,
    exec: Execution,
) -> Result<Vec<AdmissibleSet>> {
    let closure = intersection_closure(
        sys.len(),
        distinct_balls(sys).into_iter().map(|(_, b)| b).collect(),
        cap,
        exec,
    )?;
    let hulls = exec.map_slice(&closure, |s| hull(sys, s, mode).expect("nonempty"));
    Ok(hulls
        .into_iter()
        .zip(&closure)
        .filter(|(h, s)| h.points == **s)
        .map(|(h, _)| h)
        .collect())
}

/// Close a generating family of sets under pairwise intersection, dropping
/// empty sets. The full set is always included (empty intersection).
pub(crate) fn intersection_closure(
    universe: usize,
    generators: Vec<PointSet>,
    cap: usize,
    exec: Execution,
) -> Result<Vec<PointSet>> {
    let mut seen: HashSet<PointSet> = HashSet::new();
    let mut frontier: Vec<PointSet> = Vec::new();
    let full = PointSet::full(universe);
    for s in std::iter::once(full).chain(generators.iter().cloned()) {
        if !s.is_empty() && seen.insert(s.clone()) {
            frontier.push(s);
        }
    }
    if seen.len() > cap {
        return Err(Error::CapExceeded { cap });
    }
    frontier.sort();
    while !frontier.is_empty() {
        let produced = exec.map_slice(&frontier, |s| {
            generators
                .iter()
                .map(|g| s.intersection(g))
                .filter(|i| !i.is_empty())
                .collect::<Vec<_>>()
        });
        let mut next = Vec::new();
        for i in produced.into_iter().flatten() {
            if !seen.contains(&i) {
                seen.insert(i.clone());
                next.push(i);
                if seen.len() > cap {
                    return Err(Error::CapExceeded { cap });
                }
            }
        }
        next.sort();
        frontier = next;
    }
    let mut all: Vec<PointSet> = seen.into_iter().collect();
    all.sort();
    Ok(all)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PointRadius {
    pub point: usize,
    pub radius: DyadicValue,
}

/// Chebyshev radius and diameter of a set in distance and grade form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RadiiReport {
    /// `r_x(A) = max_{y ∈ A} δ(x, y)`.
    pub per_point: Vec<PointRadius>,
    pub cheb_radius: DyadicValue,
    pub diameter: DyadicValue,
    /// `g_r`: `max_x min_{y ≠ x} μ(x, y)`; `Top` for singletons.
    pub cheb_grade: Grade,
    /// `g_δ`: smallest pairwise grade; `Top` for singletons.
    pub diam_grade: Grade,
    pub cheb_center: usize,
    /// Largest `n` with `A ⊆ B(x, R_n)` for some `x ∈ A`, found by scanning levels.
    pub relational_radius_level: Grade,
    /// Largest `n` with `A × A ⊆ R_n`, found by scanning levels.
    pub relational_diameter_level: Grade,
}

/// Three independent readings of "radius strictly below diameter".
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct NormalityCriteria {
    pub by_grades: bool,
    pub by_distances: bool,
    pub by_relations: bool,
}

impl NormalityCriteria {
    pub fn agree(&self) -> bool {
        self.by_grades == self.by_distances && self.by_distances == self.by_relations
    }
}

impl RadiiReport {
    pub fn normality(&self) -> NormalityCriteria {
        NormalityCriteria {
            by_grades: self.cheb_grade > self.diam_grade,
            by_distances: self.cheb_radius < self.diameter,
            by_relations: self.relational_radius_level > self.relational_diameter_level,
        }
    }
}

pub fn radii(sys: &RelationalSystem, a: &PointSet) -> Result<RadiiReport> {
    if a.is_empty() {
        return Err(Error::EmptySet);
    }
    let members = a.to_vec();
    let dist = |x: usize, y: usize| DyadicValue::from_grade(sys.grade(x, y));

    let per_point: Vec<PointRadius> = members
        .iter()
        .map(|&x| PointRadius {
            point: x,
            radius: members.iter().map(|&y| dist(x, y)).max().expect("nonempty"),
        })
        .collect();
    let cheb_radius = per_point.iter().map(|p| p.radius.clone()).min().expect("nonempty");
    let diameter = per_point.iter().map(|p| p.radius.clone()).max().expect("nonempty");

    let row_min = |x: usize| {
        members
            .iter()
            .filter(|&&y| y != x)
            .map(|&y| sys.grade(x, y))
            .min()
            .unwrap_or(Grade::Top)
    };
    let (cheb_center, cheb_grade) = members
        .iter()
        .map(|&x| (x, row_min(x)))
        .fold(None, |acc: Option<(usize, Grade)>, (x, g)| match acc {
            Some((_, best)) if best >= g => acc,
            _ => Some((x, g)),
        })
        .expect("nonempty");
    let diam_grade = members.iter().map(|&x| row_min(x)).min().expect("nonempty");

    let levels: Vec<i64> = sys.window().extended_levels().collect();
    let top_level = |pred: &dyn Fn(i64) -> bool| -> Grade {
        match levels.iter().rev().find(|&&n| pred(n)) {
            Some(&n) if n == sys.window().hi + 1 => Grade::Top,
            Some(&n) => Grade::Level(n),
            None => Grade::Level(sys.window().floor() - 1),
        }
    };
    let relational_diameter_level = top_level(&|n| {
        let r = expand_level(sys, n);
        members.iter().all(|&x| a.is_subset(r.row(x)))
    });
    let relational_radius_level = top_level(&|n| {
        let r = expand_level(sys, n);
        members.iter().any(|&x| a.is_subset(r.row(x)))
    });

    Ok(RadiiReport {
        per_point,
        cheb_radius,
        diameter,
        cheb_grade,
        diam_grade,
        cheb_center,
        relational_radius_level,
        relational_diameter_level,
    })
}

/// Level `m = 1 + ⌊log₂(1/w)⌋` of the smallest dyadic ball around the
/// midpoint of an interval of width `w` that still covers the interval.
pub fn interval_cover_level(width: &DyadicValue) -> Result<i64> {
    let c = width
        .ceil_log2()
        .ok_or_else(|| Error::UndefinedInput("interval width must be positive".into()))?;
    Ok(1 - c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn set(n: usize, v: &[usize]) -> PointSet {
        PointSet::from_indices(n, v.iter().copied())
    }

    #[test]
    fn ball_examples() {
        let a = fixtures::ex_a();
        assert_eq!(ball(&a, 0, 1), set(5, &[0, 1, 2]));
        let c = fixtures::ex_c();
        assert!(ball(&c, 0, 0).is_full());
        for sys in fixtures::all() {
            for x in sys.points() {
                assert_eq!(ball(&sys, x, sys.window().hi + 1), PointSet::singleton(sys.len(), x));
            }
        }
    }

    #[test]
    fn hull_examples() {
        let a = fixtures::ex_a();
        let h = hull(&a, &set(5, &[0, 1]), HullMode::PaperCov).unwrap();
        assert_eq!(h.points, set(5, &[0, 1]));
        assert!(h.verify(&a));
        let h = hull(&a, &set(5, &[0, 4]), HullMode::PaperCov).unwrap();
        assert!(h.points.is_full());
        for sys in fixtures::all() {
            for mode in [HullMode::PaperCov, HullMode::ArbitraryCenter] {
                assert!(hull(&sys, &sys.all_points(), mode).unwrap().points.is_full());
            }
        }
        assert_eq!(hull(&a, &PointSet::empty(5), HullMode::PaperCov), Err(Error::EmptySet));
    }

    #[test]
    fn modes_differ_on_ex_a() {
        let a = fixtures::ex_a();
        let pair = set(5, &[0, 3]);
        assert!(hull(&a, &pair, HullMode::PaperCov).unwrap().points.is_full());
        assert_eq!(hull(&a, &pair, HullMode::ArbitraryCenter).unwrap().points, set(5, &[0, 1, 2, 3]));
    }

    #[test]
    fn enumerate_ex_c() {
        let c = fixtures::ex_c();
        let fam: Vec<PointSet> = enumerate_admissible(&c, HullMode::PaperCov)
            .unwrap()
            .into_iter()
            .map(|s| s.points)
            .collect();
        let mut expect: Vec<PointSet> = (0..6).map(|x| PointSet::singleton(6, x)).collect();
        for k in 0..5 {
            expect.push(PointSet::from_indices(6, k..6));
        }
        expect.sort();
        assert_eq!(fam, expect);
    }

    #[test]
    fn enumerate_ex_e_and_singleton() {
        let e = fixtures::ex_e();
        for mode in [HullMode::PaperCov, HullMode::ArbitraryCenter] {
            let fam: Vec<Vec<usize>> = enumerate_admissible(&e, mode)
                .unwrap()
                .into_iter()
                .map(|s| s.points.to_vec())
                .collect();
            assert_eq!(fam, vec![vec![0], vec![1], vec![0, 1]]);
        }
        let one = fixtures::singleton();
        let fam = enumerate_admissible(&one, HullMode::PaperCov).unwrap();
        assert_eq!(fam.len(), 1);
    }

    #[test]
    fn enumeration_cap_is_enforced() {
        let a = fixtures::ex_a();
        let err = enumerate_admissible_with(&a, HullMode::ArbitraryCenter, 3, Execution::Sequential)
            .unwrap_err();
        assert_eq!(err, Error::CapExceeded { cap: 3 });
    }

    #[test]
    fn enumeration_is_strategy_independent() {
        for sys in fixtures::all() {
            for mode in [HullMode::PaperCov, HullMode::ArbitraryCenter] {
                let s = enumerate_admissible_with(&sys, mode, DEFAULT_ENUMERATION_CAP, Execution::Sequential);
                let p = enumerate_admissible_with(&sys, mode, DEFAULT_ENUMERATION_CAP, Execution::Parallel);
                assert_eq!(s, p);
            }
        }
    }

    #[test]
    fn radii_examples() {
        let a = fixtures::ex_a();
        let r = radii(&a, &a.all_points()).unwrap();
        assert_eq!(r.diameter, DyadicValue::one());
        assert_eq!(r.diam_grade, Grade::Level(0));
        assert_eq!(r.cheb_radius, DyadicValue::pow2(-1));
        assert_eq!(r.cheb_grade, Grade::Level(1));
        assert_eq!(r.cheb_center, 2);

        let r = radii(&a, &set(5, &[0, 1])).unwrap();
        assert_eq!(r.diameter, DyadicValue::pow2(-2));
        assert_eq!(r.cheb_radius, DyadicValue::pow2(-2));
        assert!(!r.normality().by_grades && r.normality().agree());

        let r = radii(&a, &set(5, &[3])).unwrap();
        assert!(r.diameter.is_zero() && r.cheb_radius.is_zero());
        assert_eq!(r.cheb_grade, Grade::Top);
        assert_eq!(r.relational_diameter_level, Grade::Top);
    }

    #[test]
    fn cover_level_examples() {
        // width 3/8: log2(8/3) ≈ 1.415, m = 2.
        assert_eq!(interval_cover_level(&DyadicValue::new(3u32, 3)).unwrap(), 2);
        assert_eq!(interval_cover_level(&DyadicValue::one()).unwrap(), 1);
        assert!(interval_cover_level(&DyadicValue::zero()).is_err());
    }
}
