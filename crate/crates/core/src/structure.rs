//! Structure properties of the admissible family: normal structure,
//! compact structure (finite intersection property) and spherical
//! completeness.
//!
//! On a finite ground set the last two always hold; the checkers still walk
//! their chains and say so in `note`.

use serde::Serialize;

use crate::error::Result;
use crate::exec::Execution;
use crate::hull::{
    distinct_balls, enumerate_admissible_with, hull, radii, AdmissibleSet, BallRef, HullMode,
    RadiiReport, DEFAULT_ENUMERATION_CAP,
};
use crate::pointset::PointSet;
use crate::system::RelationalSystem;

pub const FINITE_FIP_NOTE: &str = "finite ground set: FIP automatic";
pub const FINITE_SPHERICAL_NOTE: &str =
    "finite ground set: every nested ball chain is finite, spherical completeness automatic";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum StructureProperty {
    Compact,
    Normal,
    SphericallyComplete,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum StructureWitness {
    /// An admissible set with at least two points whose radius equals its diameter.
    RadiusEqualsDiameter { set: AdmissibleSet, radii: RadiiReport },
    /// A family of admissible sets with nonempty finite intersections but empty total intersection.
    Family { sets: Vec<PointSet> },
    /// A nested chain of balls with empty intersection.
    BallChain { balls: Vec<BallRef> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StructureReport {
    pub property: StructureProperty,
    pub holds: bool,
    pub witness: Option<StructureWitness>,
    pub note: Option<String>,
    /// Sets or chains examined.
    pub examined: usize,
    /// For normal structure: whether the grade, distance and relational
    /// criteria agreed on every admissible set.
    pub criteria_consistent: bool,
}

impl StructureReport {
    /// Re-check the witness against the system.
    pub fn replay(&self, sys: &RelationalSystem) -> bool {
        match &self.witness {
            None => self.holds,
            Some(StructureWitness::RadiusEqualsDiameter { set, .. }) => {
                let refixed = hull(sys, &set.points, set.mode).map(|h| h.points == set.points);
                let r = radii(sys, &set.points);
                set.points.len() >= 2
                    && set.verify(sys)
                    && refixed.unwrap_or(false)
                    && r.is_ok_and(|r| {
                        r.cheb_grade == r.diam_grade && r.cheb_radius == r.diameter
                    })
            }
            Some(StructureWitness::Family { sets }) => {
                let mut acc = PointSet::full(sys.len());
                sets.iter().for_each(|s| acc.intersect_with(s));
                acc.is_empty()
            }
            Some(StructureWitness::BallChain { balls }) => {
                let mut acc = PointSet::full(sys.len());
                for b in balls {
                    acc.intersect_with(&crate::hull::ball(sys, b.center, b.level));
                }
                acc.is_empty()
            }
        }
    }
}

pub fn check_normal_structure(sys: &RelationalSystem, mode: HullMode) -> Result<StructureReport> {
    check_normal_structure_with(sys, mode, Execution::default())
}

/// Normal structure: every admissible set with two or more points has
/// Chebyshev radius strictly below its diameter. The witness is the first
/// failing set in canonical order.
pub fn check_normal_structure_with(
    sys: &RelationalSystem,
    mode: HullMode,
    exec: Execution,
) -> Result<StructureReport> {
    let family = enumerate_admissible_with(sys, mode, DEFAULT_ENUMERATION_CAP, exec)?;
    let mut examined = 0;
    let mut consistent = true;
    let mut witness = None;
    for set in family.into_iter().filter(|s| s.points.len() >= 2) {
        examined += 1;
        let r = radii(sys, &set.points)?;
        let c = r.normality();
        consistent &= c.agree();
        if !c.by_grades && witness.is_none() {
            witness = Some(StructureWitness::RadiusEqualsDiameter { set, radii: r });
        }
    }
    Ok(StructureReport {
        property: StructureProperty::Normal,
        holds: witness.is_none(),
        witness,
        note: (examined == 0).then(|| "vacuous: no admissible set has two points".to_string()),
        examined,
        criteria_consistent: consistent,
    })
}

pub fn check_compact_structure(sys: &RelationalSystem, mode: HullMode) -> Result<StructureReport> {
    let family = enumerate_admissible_with(sys, mode, DEFAULT_ENUMERATION_CAP, Execution::default())?;
    let sets: Vec<&PointSet> = family.iter().map(|s| &s.points).collect();
    let mut witness = None;
    // From each seed, absorb every later-compatible set while the running
    // intersection stays nonempty; the absorbed family is maximal centered
    // and its total intersection is recomputed from scratch.
    for seed in 0..sets.len() {
        let mut running = sets[seed].clone();
        let mut members = vec![sets[seed].clone()];
        for s in sets.iter().skip(seed + 1).chain(sets.iter().take(seed)) {
            let next = running.intersection(s);
            if !next.is_empty() {
                running = next;
                members.push((*s).clone());
            }
        }
        let mut total = PointSet::full(sys.len());
        members.iter().for_each(|m| total.intersect_with(m));
        if total.is_empty() {
            witness = Some(StructureWitness::Family { sets: members });
            break;
        }
    }
    Ok(StructureReport {
        property: StructureProperty::Compact,
        holds: witness.is_none(),
        witness,
        note: Some(FINITE_FIP_NOTE.to_string()),
        examined: sets.len(),
        criteria_consistent: true,
    })
}

/// Every chain of balls `B(x_{k+1}, r_{k+1}) ⊆ B(x_k, r_k)` with nonincreasing
/// radii has nonempty intersection. Maximal chains are built greedily from
/// every distinct ball.
pub fn check_spherical_completeness(sys: &RelationalSystem) -> StructureReport {
    let balls = distinct_balls(sys);
    let mut witness = None;
    for start in 0..balls.len() {
        let mut chain = vec![start];
        loop {
            let (cur_ref, cur_set) = &balls[*chain.last().expect("nonempty")];
            let next = balls.iter().position(|(r, s)| {
                r.level >= cur_ref.level && s != cur_set && s.is_subset(cur_set)
            });
            match next {
                Some(i) => chain.push(i),
                None => break,
            }
        }
        let mut total = PointSet::full(sys.len());
        chain.iter().for_each(|&i| total.intersect_with(&balls[i].1));
        if total.is_empty() {
            witness = Some(StructureWitness::BallChain {
                balls: chain.iter().map(|&i| balls[i].0).collect(),
            });
            break;
        }
    }
    StructureReport {
        property: StructureProperty::SphericallyComplete,
        holds: witness.is_none(),
        witness,
        note: Some(FINITE_SPHERICAL_NOTE.to_string()),
        examined: balls.len(),
        criteria_consistent: true,
    }
}

/// A maximal set of points pairwise at the largest finite grade, grown
/// greedily from the first such pair. `None` below two points.
pub fn min_distance_clique(sys: &RelationalSystem) -> Option<PointSet> {
    let top = sys.max_finite_grade()?;
    let (x, y, _) = sys.grades().pairs().find(|&(_, _, g)| g == top)?;
    let mut clique = PointSet::from_indices(sys.len(), [x, y]);
    for z in sys.points() {
        if !clique.contains(z)
            && clique.iter().all(|k| sys.grade(z, k).level() == Some(top))
        {
            clique.insert(z);
        }
    }
    Some(clique)
}
