//! Brute-force oracles built on exact rationals and raw grades only.
#![allow(dead_code)]

use std::collections::BTreeSet;

use graded_core::harness::{gen_system, Constraint, GenParams, MapKind};
use graded_core::{Grade, RelationalSystem};
use num_bigint::BigInt;
use num_rational::BigRational;

pub fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// `2^-k` as a rational.
pub fn two_pow_neg(k: i64) -> BigRational {
    let one = BigInt::from(1);
    if k >= 0 {
        BigRational::new(one.clone(), one << k as usize)
    } else {
        BigRational::from_integer(one << (-k) as usize)
    }
}

pub fn dist(sys: &RelationalSystem, x: usize, y: usize) -> BigRational {
    match sys.grade(x, y) {
        Grade::Top => q(0, 1),
        Grade::Level(g) => two_pow_neg(g),
    }
}

/// `{y : δ(x, y) ≤ r}` as a sorted index set.
pub fn metric_ball(sys: &RelationalSystem, x: usize, r: &BigRational) -> BTreeSet<usize> {
    sys.points().filter(|&y| dist(sys, x, y) <= *r).collect()
}

/// All nonempty intersections of a family of sets, including the full set.
pub fn closure(n: usize, gens: &[BTreeSet<usize>]) -> BTreeSet<BTreeSet<usize>> {
    let mut out: BTreeSet<BTreeSet<usize>> = BTreeSet::new();
    out.insert((0..n).collect());
    loop {
        let mut added = false;
        let current: Vec<_> = out.iter().cloned().collect();
        for s in &current {
            for g in gens {
                let i: BTreeSet<usize> = s.intersection(g).copied().collect();
                if !i.is_empty() && out.insert(i) {
                    added = true;
                }
            }
        }
        if !added {
            return out;
        }
    }
}

/// Smallest `C` with `δ(x,y) ≤ C·max(δ(x,z), δ(z,y))`, as a rational.
pub fn inframetric_constant(sys: &RelationalSystem) -> BigRational {
    let mut best = q(1, 1);
    for x in sys.points() {
        for y in sys.points() {
            for z in sys.points() {
                if x == y {
                    continue;
                }
                let m = dist(sys, x, z).max(dist(sys, z, y));
                if m > q(0, 1) {
                    let c = dist(sys, x, y) / m;
                    if c > best {
                        best = c;
                    }
                }
            }
        }
    }
    best
}

/// Triple `(x, z, y)` with `δ(x,y) > δ(x,z) + δ(z,y)` maximising the excess.
pub fn worst_triangle(sys: &RelationalSystem) -> Option<(usize, usize, usize, BigRational)> {
    let mut best: Option<(usize, usize, usize, BigRational)> = None;
    for x in sys.points() {
        for z in sys.points() {
            for y in sys.points() {
                let ex = dist(sys, x, y) - dist(sys, x, z) - dist(sys, z, y);
                if ex > q(0, 1) && best.as_ref().is_none_or(|b| ex > b.3) {
                    best = Some((x, z, y, ex));
                }
            }
        }
    }
    best
}

pub fn params(points: (usize, usize), span: (i64, i64), constraint: Constraint) -> GenParams {
    GenParams {
        points,
        span,
        lo: (-2, 2),
        constraint,
        map_kind: MapKind::Any,
    }
}

pub fn systems(count: u64, p: &GenParams) -> impl Iterator<Item = RelationalSystem> + '_ {
    (0..count).map(move |seed| gen_system(seed, p))
}
