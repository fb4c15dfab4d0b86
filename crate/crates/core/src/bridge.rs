//! From grades to distances and back.
//!
//! The induced distance is `δ(x, y) = 2^-μ(x, y)` (zero on the diagonal).
//! Level `n` is recovered as `{(x, y) : δ(x, y) ≤ 2^-n}`. [`classify`] scans
//! every triple in exact arithmetic to find the strongest distance class, and
//! [`ingest_distance_matrix`] grades an arbitrary rational distance matrix.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::axioms::{check_axiom, AxiomId, AxiomReport};
use crate::dyadic::DyadicValue;
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::grade::{Grade, GradeMatrix, Window};
use crate::pointset::PointSet;
use crate::relation::Relation;
use crate::system::{expand_level, RelationalSystem};

pub fn mu(sys: &RelationalSystem, x: usize, y: usize) -> Result<Grade> {
    sys.check_index(x)?;
    sys.check_index(y)?;
    Ok(sys.grade(x, y))
}

pub fn delta(sys: &RelationalSystem, x: usize, y: usize) -> Result<DyadicValue> {
    Ok(DyadicValue::from_grade(mu(sys, x, y)?))
}

#[inline]
fn dist(sys: &RelationalSystem, x: usize, y: usize) -> DyadicValue {
    DyadicValue::from_grade(sys.grade(x, y))
}

/// `{(x, y) : δ(x, y) ≤ 2^-n}`, computed from distances alone.
pub fn reconstruct_level(sys: &RelationalSystem, n: i64) -> Relation {
    let radius = DyadicValue::pow2(-n);
    let len = sys.len();
    let mut r = Relation::empty(len);
    for x in 0..len {
        for y in 0..len {
            if dist(sys, x, y) <= radius {
                r.insert(x, y);
            }
        }
    }
    r
}

pub(crate) fn pow2_ratio(k: i64) -> BigRational {
    if k >= 0 {
        BigRational::from_integer(BigInt::one() << k as usize)
    } else {
        BigRational::new(BigInt::one(), BigInt::one() << (-k) as usize)
    }
}

/// `⌊log₂ r⌋` for a positive rational.
pub(crate) fn floor_log2_ratio(r: &BigRational) -> i64 {
    debug_assert!(r.is_positive());
    let mut k = r.numer().bits() as i64 - r.denom().bits() as i64;
    while *r < pow2_ratio(k) {
        k -= 1;
    }
    while *r >= pow2_ratio(k + 1) {
        k += 1;
    }
    k
}

/// A metric ball next to the relational ball it collapses onto.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BallCollapse {
    pub center: usize,
    /// Coarsest level whose radius `2^-level` fits within `r`, clamped to `[lo-1, hi+1]`.
    pub level: i64,
    pub metric_ball: PointSet,
    pub relational_ball: PointSet,
}

impl BallCollapse {
    pub fn coincide(&self) -> bool {
        self.metric_ball == self.relational_ball
    }
}

/// Compare `{y : δ(x, y) ≤ r}` with the level ball `B(x, R_g)` where `2^-g`
/// is the largest dyadic radius not exceeding `r`.
pub fn metric_ball_collapse(sys: &RelationalSystem, x: usize, r: &BigRational) -> Result<BallCollapse> {
    sys.check_index(x)?;
    if !r.is_positive() {
        return Err(Error::NonPositiveRadius(r.to_string()));
    }
    let w = sys.window();
    let level = (-floor_log2_ratio(r)).clamp(w.floor(), w.hi + 1);
    let metric_ball = PointSet::from_indices(
        sys.len(),
        sys.points().filter(|&y| dist(sys, x, y).to_ratio() <= *r),
    );
    let relational_ball = expand_level(sys, level).row(x).clone();
    Ok(BallCollapse {
        center: x,
        level,
        metric_ball,
        relational_ball,
    })
}

/// Smallest `C ≥ 1` with `δ(x, y) ≤ C · max(δ(x, z), δ(z, y))` everywhere.
pub fn minimal_inframetric_constant(sys: &RelationalSystem) -> Result<DyadicValue> {
    if sys.len() < 2 {
        return Err(Error::UndefinedInput(
            "inframetric constant needs at least two points".into(),
        ));
    }
    let worst = worst_deficit(sys, Execution::default());
    Ok(DyadicValue::pow2(worst.map_or(0, |w| w.deficit.max(0))))
}

/// The triple maximising `min(μ(x,z), μ(z,y)) − μ(x,y)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DeficitWitness {
    pub x: usize,
    pub z: usize,
    pub y: usize,
    pub deficit: i64,
}

fn worst_deficit(sys: &RelationalSystem, exec: Execution) -> Option<DeficitWitness> {
    let n = sys.len();
    let rows = exec.map_range(n, |x| {
        let mut best: Option<DeficitWitness> = None;
        for z in 0..n {
            for y in 0..n {
                if x == y || z == x || z == y {
                    continue;
                }
                let lift = sys.grade(x, z).min(sys.grade(z, y));
                let g = sys.grade(x, y).level().expect("off-diagonal");
                let deficit = lift.level().expect("off-diagonal") - g;
                if best.as_ref().is_none_or(|b| deficit > b.deficit) {
                    best = Some(DeficitWitness { x, z, y, deficit });
                }
            }
        }
        best
    });
    rows.into_iter()
        .flatten()
        .fold(None, |acc: Option<DeficitWitness>, w| match acc {
            Some(a) if a.deficit >= w.deficit => Some(a),
            _ => Some(w),
        })
}

/// A triple `x, z, y` with the two sides of a distance inequality.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TripleWitness {
    pub x: usize,
    pub z: usize,
    pub y: usize,
    /// `δ(x, y)`.
    pub lhs: DyadicValue,
    /// `δ(x, z) + δ(z, y)` or `max(δ(x, z), δ(z, y))`.
    pub rhs: DyadicValue,
}

impl TripleWitness {
    pub fn violates(&self) -> bool {
        self.lhs > self.rhs
    }

    /// Larger excess `lhs − rhs` wins; ties go to the earlier triple.
    fn beats(&self, other: &Self) -> bool {
        let gt = DyadicValue::excess_ge(&self.lhs, &self.rhs, &other.lhs, &other.rhs)
            && !DyadicValue::excess_ge(&other.lhs, &other.rhs, &self.lhs, &self.rhs);
        let eq = !gt && DyadicValue::excess_ge(&self.lhs, &self.rhs, &other.lhs, &other.rhs);
        gt || (eq && (self.x, self.z, self.y) < (other.x, other.z, other.y))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Inequality {
    Triangle,
    Strong,
}

fn worst_triple(sys: &RelationalSystem, kind: Inequality, exec: Execution) -> Option<TripleWitness> {
    let n = sys.len();
    let rows = exec.map_range(n, |x| {
        let mut best: Option<TripleWitness> = None;
        for z in 0..n {
            for y in 0..n {
                if x == y || z == x || z == y {
                    continue;
                }
                let (a, b) = (dist(sys, x, z), dist(sys, z, y));
                let rhs = match kind {
                    Inequality::Triangle => &a + &b,
                    Inequality::Strong => a.max(b),
                };
                let cand = TripleWitness {
                    x,
                    z,
                    y,
                    lhs: dist(sys, x, y),
                    rhs,
                };
                if best.as_ref().is_none_or(|b| cand.beats(b)) {
                    best = Some(cand);
                }
            }
        }
        best
    });
    rows.into_iter().flatten().fold(None, |acc, w| match acc {
        Some(a) if !w.beats(&a) => Some(a),
        _ => Some(w),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ClassLabel {
    #[serde(rename = "ultrametric")]
    Ultrametric,
    #[serde(rename = "metric")]
    Metric,
    #[serde(rename = "C-inframetric")]
    Inframetric,
    #[serde(rename = "semimetric-only")]
    SemimetricOnly,
}

impl fmt::Display for ClassLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ClassLabel::Ultrametric => "ultrametric",
            ClassLabel::Metric => "metric",
            ClassLabel::Inframetric => "C-inframetric",
            ClassLabel::SemimetricOnly => "semimetric-only",
        })
    }
}

/// Failure of an identity (d1) or symmetry (d2) condition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SemimetricWitness {
    pub condition: &'static str,
    pub x: usize,
    pub y: usize,
}

/// A relation-level condition that holds while the distance-level
/// conclusion it is supposed to guarantee fails.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ImplicationFailure {
    pub hypothesis: AxiomId,
    pub conclusion: &'static str,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassificationReport {
    pub is_semimetric: bool,
    pub semimetric_witness: Option<SemimetricWitness>,
    pub minimal_inframetric_c: DyadicValue,
    pub inframetric_witness: Option<DeficitWitness>,
    pub triangle_holds: bool,
    pub triangle_witness: Option<TripleWitness>,
    pub strong_triangle_holds: bool,
    pub strong_triangle_witness: Option<TripleWitness>,
    pub class_label: ClassLabel,
    /// r9, r10 and per-level transitivity, checked on relations.
    pub relational: Vec<AxiomReport>,
    pub implication_failures: Vec<ImplicationFailure>,
}

pub fn classify(sys: &RelationalSystem) -> ClassificationReport {
    classify_with(sys, Execution::default())
}

pub fn classify_with(sys: &RelationalSystem, exec: Execution) -> ClassificationReport {
    let semimetric_witness = semimetric_violation(sys);
    let deficit = worst_deficit(sys, exec);
    let c = DyadicValue::pow2(deficit.as_ref().map_or(0, |w| w.deficit.max(0)));
    let tri = worst_triple(sys, Inequality::Triangle, exec);
    let strong = worst_triple(sys, Inequality::Strong, exec);
    let triangle_holds = tri.as_ref().is_none_or(|w| !w.violates());
    let strong_triangle_holds = strong.as_ref().is_none_or(|w| !w.violates());
    let is_semimetric = semimetric_witness.is_none();
    let class_label = if !is_semimetric {
        ClassLabel::SemimetricOnly
    } else if strong_triangle_holds {
        ClassLabel::Ultrametric
    } else if triangle_holds {
        ClassLabel::Metric
    } else {
        ClassLabel::Inframetric
    };
    let relational: Vec<AxiomReport> = [AxiomId::R9, AxiomId::R10, AxiomId::Transitive]
        .into_iter()
        .map(|a| check_axiom(sys, a))
        .collect();
    let holds = |a: AxiomId| relational.iter().any(|r| r.axiom == a && r.holds);
    let mut implication_failures = Vec::new();
    if holds(AxiomId::R9) && c > DyadicValue::pow2(1) {
        implication_failures.push(ImplicationFailure {
            hypothesis: AxiomId::R9,
            conclusion: "2-inframetric",
        });
    }
    if holds(AxiomId::R10) && !triangle_holds {
        implication_failures.push(ImplicationFailure {
            hypothesis: AxiomId::R10,
            conclusion: "metric",
        });
    }
    if holds(AxiomId::Transitive) && !strong_triangle_holds {
        implication_failures.push(ImplicationFailure {
            hypothesis: AxiomId::Transitive,
            conclusion: "ultrametric",
        });
    }
    ClassificationReport {
        is_semimetric,
        semimetric_witness,
        minimal_inframetric_c: c,
        inframetric_witness: deficit,
        triangle_holds,
        triangle_witness: tri,
        strong_triangle_holds,
        strong_triangle_witness: strong,
        class_label,
        relational,
        implication_failures,
    }
}

fn semimetric_violation(sys: &RelationalSystem) -> Option<SemimetricWitness> {
    for x in sys.points() {
        for y in sys.points() {
            let d = dist(sys, x, y);
            if (x == y) != d.is_zero() {
                return Some(SemimetricWitness {
                    condition: "d1",
                    x,
                    y,
                });
            }
            if d != dist(sys, y, x) {
                return Some(SemimetricWitness {
                    condition: "d2",
                    x,
                    y,
                });
            }
        }
    }
    None
}

/// Grade a symmetric rational distance matrix: `μ(x, y)` is the largest `n`
/// in the window with `d(x, y) ≤ 2^-n`, or `lo − 1` when there is none.
pub fn ingest_distance_matrix(d: &[Vec<BigRational>], window: Window) -> Result<RelationalSystem> {
    let n = d.len();
    for (x, row) in d.iter().enumerate() {
        if row.len() != n {
            return Err(Error::Rejected(format!(
                "row {x} has {} entries, expected {n}",
                row.len()
            )));
        }
    }
    let mut grades = GradeMatrix::constant(n, window.floor());
    for x in 0..n {
        for y in 0..n {
            let v = &d[x][y];
            if v.is_negative() {
                return Err(Error::Rejected(format!("negative entry at ({x},{y})")));
            }
            if x == y {
                if !v.is_zero() {
                    return Err(Error::Rejected(format!("nonzero diagonal at ({x},{x})")));
                }
                continue;
            }
            if v.is_zero() {
                return Err(Error::Rejected(format!("zero off-diagonal entry at ({x},{y})")));
            }
            if *v != d[y][x] {
                return Err(Error::Rejected(format!(
                    "asymmetric entries at ({x},{y}) and ({y},{x})"
                )));
            }
            if x < y {
                grades.set_pair(x, y, grade_distance(v, window));
            }
        }
    }
    RelationalSystem::unlabelled(window, grades)
}

/// Exact grading by comparison against `2^-n`, highest level first.
fn grade_distance(v: &BigRational, window: Window) -> i64 {
    window
        .levels()
        .rev()
        .find(|&n| *v <= pow2_ratio(-n))
        .unwrap_or(window.floor())
}

/// Distances of a system as a rational matrix (zero diagonal).
pub fn distance_matrix(sys: &RelationalSystem) -> Vec<Vec<BigRational>> {
    sys.points()
        .map(|x| sys.points().map(|y| dist(sys, x, y).to_ratio()).collect())
        .collect()
}
