use serde::Serialize;

use super::{fixed_points, is_homomorphism, regularity_report, SelfMap};
use crate::axioms::{check_axiom, AxiomId};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::grade::Grade;
use crate::hull::{ball, distinct_balls, enumerate_admissible, AdmissibleSet, BallRef, HullMode};
use crate::pointset::PointSet;
use crate::system::RelationalSystem;

pub const SPHERICAL_NOTE: &str = "spherical completeness holds automatically on a finite ground set";

fn require_homomorphism(sys: &RelationalSystem, t: &SelfMap) -> Result<()> {
    let check = is_homomorphism(sys, t)?;
    match check.witness {
        None => Ok(()),
        Some(w) => Err(Error::Precondition(format!(
            "map is not a homomorphism: μ({}, {}) = {} but μ(T{}, T{}) = {}",
            w.x, w.y, w.grade, w.x, w.y, w.image_grade
        ))),
    }
}

/// Inclusion-minimal nonempty admissible sets `A` with `T(A) ⊆ A`.
pub fn minimal_invariant_admissible(
    sys: &RelationalSystem,
    t: &SelfMap,
    mode: HullMode,
) -> Result<Vec<AdmissibleSet>> {
    require_homomorphism(sys, t)?;
    let invariant: Vec<AdmissibleSet> = enumerate_admissible(sys, mode)?
        .into_iter()
        .filter(|a| t.image_of(&a.points).is_subset(&a.points))
        .collect();
    let minimal = invariant
        .iter()
        .filter(|a| {
            !invariant
                .iter()
                .any(|b| b.points != a.points && b.points.is_subset(&a.points))
        })
        .cloned()
        .collect();
    Ok(minimal)
}

/// Balls `B(x, n)` with `n ∈ [lo − 1, hi]`, `T(B) ⊆ B`, and every point of `B`
/// moved by grade exactly `n`.
pub fn minimal_invariant_balls(sys: &RelationalSystem, t: &SelfMap) -> Result<Vec<BallRef>> {
    t.check_against(sys)?;
    let w = sys.window();
    let mut out = Vec::new();
    for x in sys.points() {
        for n in w.floor()..=w.hi {
            let b = ball(sys, x, n);
            let moves_exactly = b.iter().all(|y| sys.grade(y, t.apply(y)) == Grade::Level(n));
            if moves_exactly && t.image_of(&b).is_subset(&b) {
                out.push(BallRef { center: x, level: n });
            }
        }
    }
    Ok(out)
}

/// Distinct balls mapped into themselves.
pub fn invariant_balls(sys: &RelationalSystem, t: &SelfMap) -> Result<Vec<(BallRef, PointSet)>> {
    t.check_against(sys)?;
    Ok(distinct_balls(sys)
        .into_iter()
        .filter(|(_, b)| t.image_of(b).is_subset(b))
        .collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum DichotomyOutcome {
    ContainsFixedPoint { point: usize },
    ContainsMinimalInvariantBall { ball: BallRef, points: PointSet },
    #[serde(rename = "NEITHER")]
    Neither,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DichotomyRow {
    pub point: usize,
    pub ball: BallRef,
    pub ball_points: PointSet,
    pub outcome: DichotomyOutcome,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DichotomyReport {
    pub hypotheses_met: bool,
    pub transitive: bool,
    pub homomorphism: bool,
    pub notes: Vec<String>,
    pub rows: Vec<DichotomyRow>,
    pub neither_count: usize,
}

impl DichotomyReport {
    /// A `NEITHER` row while the hypotheses hold.
    pub fn is_counterexample(&self) -> bool {
        self.hypotheses_met && self.neither_count > 0
    }

    pub fn replay(&self, sys: &RelationalSystem, t: &SelfMap) -> bool {
        let Ok(minimal) = minimal_invariant_balls(sys, t) else {
            return false;
        };
        self.rows.iter().all(|row| {
            let b = ball(sys, row.ball.center, row.ball.level);
            b == row.ball_points
                && match &row.outcome {
                    DichotomyOutcome::ContainsFixedPoint { point } => {
                        b.contains(*point) && t.is_fixed(*point)
                    }
                    DichotomyOutcome::ContainsMinimalInvariantBall { ball: m, points } => {
                        minimal.contains(m)
                            && ball(sys, m.center, m.level) == *points
                            && points.is_subset(&b)
                    }
                    DichotomyOutcome::Neither => {
                        !b.iter().any(|y| t.is_fixed(y))
                            && !minimal
                                .iter()
                                .any(|m| ball(sys, m.center, m.level).is_subset(&b))
                    }
                }
        })
    }
}

pub fn ks_dichotomy(sys: &RelationalSystem, t: &SelfMap) -> Result<DichotomyReport> {
    ks_dichotomy_with(sys, t, Execution::default())
}

/// For every non-fixed `x`, whether `B(x, μ(x, Tx))` holds a fixed point or a
/// minimal invariant ball.
pub fn ks_dichotomy_with(sys: &RelationalSystem, t: &SelfMap, exec: Execution) -> Result<DichotomyReport> {
    let homomorphism = is_homomorphism(sys, t)?.holds;
    let transitive = check_axiom(sys, AxiomId::Transitive).holds;
    let minimal: Vec<(BallRef, PointSet)> = minimal_invariant_balls(sys, t)?
        .into_iter()
        .map(|m| (m, ball(sys, m.center, m.level)))
        .collect();
    let moving: Vec<usize> = sys.points().filter(|&x| !t.is_fixed(x)).collect();
    let rows: Vec<DichotomyRow> = exec.map_slice(&moving, |&x| {
        let level = sys.grade(x, t.apply(x)).level().expect("moved point");
        let b = ball(sys, x, level);
        let outcome = if let Some(point) = b.iter().find(|&y| t.is_fixed(y)) {
            DichotomyOutcome::ContainsFixedPoint { point }
        } else if let Some((m, points)) = minimal.iter().find(|(_, s)| s.is_subset(&b)) {
            DichotomyOutcome::ContainsMinimalInvariantBall {
                ball: *m,
                points: points.clone(),
            }
        } else {
            DichotomyOutcome::Neither
        };
        DichotomyRow {
            point: x,
            ball: BallRef { center: x, level },
            ball_points: b,
            outcome,
        }
    });
    let neither_count = rows
        .iter()
        .filter(|r| r.outcome == DichotomyOutcome::Neither)
        .count();
    let mut notes = vec![SPHERICAL_NOTE.to_string()];
    if !transitive {
        notes.push("hypotheses unmet: some level is not transitive".to_string());
    }
    if !homomorphism {
        notes.push("hypotheses unmet: map is not a homomorphism".to_string());
    }
    Ok(DichotomyReport {
        hypotheses_met: transitive && homomorphism,
        transitive,
        homomorphism,
        notes,
        rows,
        neither_count,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RegularityVariant {
    Regular,
    Asymptotic,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BallFixedPoints {
    pub ball: BallRef,
    pub points: PointSet,
    pub fixed: PointSet,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RegularFixedPointReport {
    pub variant: RegularityVariant,
    pub transitive: bool,
    pub homomorphism: bool,
    pub regularity: bool,
    /// First non-fixed point where the chosen regularity fails.
    pub irregular_point: Option<usize>,
    pub hypotheses_met: bool,
    pub balls: Vec<BallFixedPoints>,
    /// Every invariant ball contains a fixed point.
    pub confirmed: bool,
}

impl RegularFixedPointReport {
    pub fn is_counterexample(&self) -> bool {
        self.hypotheses_met && !self.confirmed
    }
}

pub fn regular_fixed_point(
    sys: &RelationalSystem,
    t: &SelfMap,
    variant: RegularityVariant,
) -> Result<RegularFixedPointReport> {
    let homomorphism = is_homomorphism(sys, t)?.holds;
    let transitive = check_axiom(sys, AxiomId::Transitive).holds;
    let mut irregular_point = None;
    for x in sys.points() {
        let r = regularity_report(sys, t, x)?;
        let ok = match variant {
            RegularityVariant::Regular => r.regular,
            RegularityVariant::Asymptotic => r.asymptotically_regular,
        };
        if !ok {
            irregular_point = Some(x);
            break;
        }
    }
    let fixed = fixed_points(t);
    let balls: Vec<BallFixedPoints> = invariant_balls(sys, t)?
        .into_iter()
        .map(|(b, points)| BallFixedPoints {
            ball: b,
            fixed: points.intersection(&fixed),
            points,
        })
        .collect();
    let confirmed = balls.iter().all(|b| !b.fixed.is_empty());
    let regularity = irregular_point.is_none();
    Ok(RegularFixedPointReport {
        variant,
        transitive,
        homomorphism,
        regularity,
        irregular_point,
        hypotheses_met: transitive && homomorphism && regularity,
        balls,
        confirmed,
    })
}
