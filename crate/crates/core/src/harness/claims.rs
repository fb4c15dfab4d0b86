use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use super::{Constraint, GenParams, MapKind};
use crate::axioms::{check_axiom, AxiomId};
use crate::bridge::{classify, metric_ball_collapse, minimal_inframetric_constant, pow2_ratio, reconstruct_level};
use crate::dyadic::DyadicValue;
use crate::dynamics::{
    is_homomorphism, is_nonexpansive, ks_dichotomy, regular_fixed_point, RegularityVariant, SelfMap,
};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::hull::{enumerate_admissible, intersection_closure, radii, HullMode, DEFAULT_ENUMERATION_CAP};
use crate::pointset::PointSet;
use crate::structure::check_normal_structure;
use crate::system::{expand_level, RelationalSystem};

use num_rational::BigRational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum ClaimId {
    #[serde(rename = "eq1-roundtrip")]
    LevelRoundtrip,
    #[serde(rename = "thm-homo-iff-nonexp")]
    HomoIffNonexp,
    #[serde(rename = "prop-r9-2-inframetric")]
    R9Inframetric,
    #[serde(rename = "prop-r10-metric")]
    R10Metric,
    #[serde(rename = "transitive-ultrametric")]
    TransitiveUltrametric,
    #[serde(rename = "thm-ks-dichotomy")]
    KsDichotomy,
    #[serde(rename = "thm-regular-fp")]
    RegularFixedPoint,
    #[serde(rename = "thm-asymptotic-fp")]
    AsymptoticFixedPoint,
    #[serde(rename = "finite-normal-structure-exists")]
    FiniteNormalStructure,
    #[serde(rename = "hull-equivalence")]
    HullEquivalence,
    #[serde(rename = "radii-translation")]
    RadiiTranslation,
}

impl ClaimId {
    pub const ALL: [ClaimId; 11] = [
        ClaimId::LevelRoundtrip,
        ClaimId::HomoIffNonexp,
        ClaimId::R9Inframetric,
        ClaimId::R10Metric,
        ClaimId::TransitiveUltrametric,
        ClaimId::KsDichotomy,
        ClaimId::RegularFixedPoint,
        ClaimId::AsymptoticFixedPoint,
        ClaimId::FiniteNormalStructure,
        ClaimId::HullEquivalence,
        ClaimId::RadiiTranslation,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ClaimId::LevelRoundtrip => "eq1-roundtrip",
            ClaimId::HomoIffNonexp => "thm-homo-iff-nonexp",
            ClaimId::R9Inframetric => "prop-r9-2-inframetric",
            ClaimId::R10Metric => "prop-r10-metric",
            ClaimId::TransitiveUltrametric => "transitive-ultrametric",
            ClaimId::KsDichotomy => "thm-ks-dichotomy",
            ClaimId::RegularFixedPoint => "thm-regular-fp",
            ClaimId::AsymptoticFixedPoint => "thm-asymptotic-fp",
            ClaimId::FiniteNormalStructure => "finite-normal-structure-exists",
            ClaimId::HullEquivalence => "hull-equivalence",
            ClaimId::RadiiTranslation => "radii-translation",
        }
    }

    pub fn statement(self) -> &'static str {
        match self {
            ClaimId::LevelRoundtrip => "R_n = {(x,y) : δ(x,y) ≤ 2^-n} at every level",
            ClaimId::HomoIffNonexp => "T preserves every R_n iff T is nonexpansive for δ",
            ClaimId::R9Inframetric => "R_n² ⊆ R_{n-1} makes δ a 2-inframetric",
            ClaimId::R10Metric => "R_n³ ⊆ R_{n-1} makes δ a metric",
            ClaimId::TransitiveUltrametric => "transitive levels make δ an ultrametric",
            ClaimId::KsDichotomy => {
                "transitive levels and a homomorphism: every B(x, μ(x,Tx)) holds a fixed point or a minimal invariant ball"
            }
            ClaimId::RegularFixedPoint => {
                "transitive levels and a regular homomorphism: every invariant ball holds a fixed point"
            }
            ClaimId::AsymptoticFixedPoint => {
                "transitive levels and an asymptotically regular homomorphism: every invariant ball holds a fixed point"
            }
            ClaimId::FiniteNormalStructure => "no finite system with two or more points has normal structure",
            ClaimId::HullEquivalence => "metric balls and relational balls generate the same admissible family",
            ClaimId::RadiiTranslation => "grade, distance and relational radii agree on every admissible set",
        }
    }

    /// Generation settings matched to the claim's hypotheses.
    pub fn params(self) -> GenParams {
        let p = GenParams::default();
        match self {
            ClaimId::LevelRoundtrip | ClaimId::HullEquivalence | ClaimId::RadiiTranslation => p,
            ClaimId::FiniteNormalStructure => p,
            ClaimId::HomoIffNonexp => p.with_map_kind(MapKind::Mixed),
            ClaimId::R9Inframetric => p.with_constraint(Constraint::R9),
            ClaimId::R10Metric => p.with_constraint(Constraint::R10),
            ClaimId::TransitiveUltrametric => p.with_constraint(Constraint::Transitive),
            ClaimId::KsDichotomy | ClaimId::RegularFixedPoint | ClaimId::AsymptoticFixedPoint => p
                .with_constraint(Constraint::Transitive)
                .with_map_kind(MapKind::Homomorphism),
        }
    }

    /// Whether the checker reads the map.
    pub fn uses_map(self) -> bool {
        matches!(
            self,
            ClaimId::HomoIffNonexp
                | ClaimId::KsDichotomy
                | ClaimId::RegularFixedPoint
                | ClaimId::AsymptoticFixedPoint
        )
    }
}

impl fmt::Display for ClaimId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ClaimId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ClaimId::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| Error::UnknownClaim(s.to_string()))
    }
}

/// Named results of the theory and the claim that exercises each.
pub const COVERAGE: &[(&str, ClaimId)] = &[
    ("levels recovered from the dyadic semimetric", ClaimId::LevelRoundtrip),
    ("homomorphisms are exactly the nonexpansive maps", ClaimId::HomoIffNonexp),
    ("square condition gives a 2-inframetric", ClaimId::R9Inframetric),
    ("cube condition gives a metric", ClaimId::R10Metric),
    ("transitive levels give an ultrametric", ClaimId::TransitiveUltrametric),
    ("fixed point or minimal invariant ball dichotomy", ClaimId::KsDichotomy),
    ("fixed point for regular homomorphisms", ClaimId::RegularFixedPoint),
    ("fixed point for asymptotically regular homomorphisms", ClaimId::AsymptoticFixedPoint),
    ("relational fixed point under normal and compact structure", ClaimId::FiniteNormalStructure),
    ("nonexpansive fixed point under normal and compact structure", ClaimId::FiniteNormalStructure),
    ("homomorphism fixed point on admissible families", ClaimId::FiniteNormalStructure),
    ("inframetric fixed point under normal structure", ClaimId::FiniteNormalStructure),
    ("admissible families of metric and relational balls coincide", ClaimId::HullEquivalence),
    ("radius and diameter translation between grades and distances", ClaimId::RadiiTranslation),
];

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", content = "detail", rename_all = "kebab-case")]
pub enum Outcome {
    Holds,
    /// The claim's hypotheses do not hold on this instance.
    Vacuous(String),
    Fails(String),
}

impl Outcome {
    pub fn is_failure(&self) -> bool {
        matches!(self, Outcome::Fails(_))
    }

    fn from_check(ok: bool, locus: impl FnOnce() -> String) -> Self {
        if ok {
            Outcome::Holds
        } else {
            Outcome::Fails(locus())
        }
    }
}

fn hypothesis(sys: &RelationalSystem, axiom: AxiomId) -> Option<Outcome> {
    (!check_axiom(sys, axiom).holds).then(|| Outcome::Vacuous(format!("{axiom} fails")))
}

/// Evaluate one claim on one instance. Errors only on mismatched sizes.
pub fn check_claim(claim: ClaimId, sys: &RelationalSystem, t: &SelfMap) -> Result<Outcome> {
    if claim.uses_map() {
        t.check_against(sys)?;
    }
    Ok(match claim {
        ClaimId::LevelRoundtrip => {
            let bad = sys
                .window()
                .extended_levels()
                .find(|&n| reconstruct_level(sys, n) != expand_level(sys, n));
            Outcome::from_check(bad.is_none(), || format!("level {} differs", bad.unwrap()))
        }
        ClaimId::HomoIffNonexp => {
            let h = is_homomorphism(sys, t)?;
            let d = is_nonexpansive(sys, t)?;
            let hw = h.witness.as_ref().map(|w| (w.x, w.y));
            let dw = d.witness.as_ref().map(|w| (w.x, w.y));
            Outcome::from_check(h.holds == d.holds && hw == dw, || {
                format!("homomorphism witness {hw:?}, nonexpansive witness {dw:?}")
            })
        }
        ClaimId::R9Inframetric => {
            if let Some(v) = hypothesis(sys, AxiomId::R9) {
                v
            } else if sys.len() < 2 {
                Outcome::Vacuous("fewer than two points".into())
            } else {
                let c = minimal_inframetric_constant(sys)?;
                Outcome::from_check(c <= DyadicValue::pow2(1), || format!("C = {c}"))
            }
        }
        ClaimId::R10Metric => match hypothesis(sys, AxiomId::R10) {
            Some(v) => v,
            None => {
                let rep = classify(sys);
                Outcome::from_check(rep.triangle_holds, || {
                    let w = rep.triangle_witness.expect("failing triangle has a witness");
                    format!(
                        "triangle ({}, {}, {}): {} > {}",
                        w.x, w.z, w.y, w.lhs, w.rhs
                    )
                })
            }
        },
        ClaimId::TransitiveUltrametric => match hypothesis(sys, AxiomId::Transitive) {
            Some(v) => v,
            None => {
                let rep = classify(sys);
                Outcome::from_check(rep.strong_triangle_holds, || {
                    let w = rep.strong_triangle_witness.expect("witness");
                    format!("strong triangle ({}, {}, {})", w.x, w.z, w.y)
                })
            }
        },
        ClaimId::KsDichotomy => {
            let rep = ks_dichotomy(sys, t)?;
            if !rep.hypotheses_met {
                Outcome::Vacuous(rep.notes[1..].join("; "))
            } else {
                Outcome::from_check(rep.neither_count == 0, || {
                    let row = rep
                        .rows
                        .iter()
                        .find(|r| r.outcome == crate::dynamics::DichotomyOutcome::Neither)
                        .expect("neither row");
                    format!("ball around {} at level {} has neither", row.point, row.ball.level)
                })
            }
        }
        ClaimId::RegularFixedPoint | ClaimId::AsymptoticFixedPoint => {
            let variant = if claim == ClaimId::RegularFixedPoint {
                RegularityVariant::Regular
            } else {
                RegularityVariant::Asymptotic
            };
            let rep = regular_fixed_point(sys, t, variant)?;
            if !rep.hypotheses_met {
                Outcome::Vacuous("hypotheses unmet".into())
            } else {
                Outcome::from_check(rep.confirmed, || {
                    let b = rep.balls.iter().find(|b| b.fixed.is_empty()).expect("empty ball");
                    format!("invariant ball {:?} around {} at level {}", b.points, b.ball.center, b.ball.level)
                })
            }
        }
        ClaimId::FiniteNormalStructure => {
            if sys.len() < 2 {
                Outcome::Vacuous("fewer than two points".into())
            } else {
                let mut normal_in = None;
                for mode in [HullMode::PaperCov, HullMode::ArbitraryCenter] {
                    if check_normal_structure(sys, mode)?.holds {
                        normal_in = Some(mode);
                        break;
                    }
                }
                Outcome::from_check(normal_in.is_none(), || {
                    format!("normal structure holds ({})", normal_in.unwrap())
                })
            }
        }
        ClaimId::HullEquivalence => hull_equivalence(sys)?,
        ClaimId::RadiiTranslation => {
            let mut bad = None;
            for set in enumerate_admissible(sys, HullMode::PaperCov)? {
                let r = radii(sys, &set.points)?;
                let ok = r.normality().agree()
                    && r.cheb_radius == DyadicValue::from_grade(r.cheb_grade)
                    && r.diameter == DyadicValue::from_grade(r.diam_grade)
                    && r.cheb_grade >= r.diam_grade
                    && r.relational_radius_level == r.cheb_grade
                    && r.relational_diameter_level == r.diam_grade;
                if !ok {
                    bad = Some(set.points);
                    break;
                }
            }
            Outcome::from_check(bad.is_none(), || format!("radii disagree on {:?}", bad.unwrap()))
        }
    })
}

/// Radii probing every breakpoint `2^-g` and a point strictly between
/// consecutive breakpoints, plus one radius beyond each end.
pub(crate) fn probe_radii(sys: &RelationalSystem) -> Vec<BigRational> {
    let w = sys.window();
    let mut out = vec![pow2_ratio(-(w.hi + 3)), pow2_ratio(2 - w.lo)];
    for g in w.extended_levels() {
        out.push(pow2_ratio(-g));
        out.push(pow2_ratio(-g) * BigRational::new(3.into(), 4.into()));
    }
    out
}

fn hull_equivalence(sys: &RelationalSystem) -> Result<Outcome> {
    let mut metric_balls: Vec<PointSet> = Vec::new();
    for x in sys.points() {
        for r in probe_radii(sys) {
            let c = metric_ball_collapse(sys, x, &r)?;
            if !c.coincide() {
                return Ok(Outcome::Fails(format!(
                    "metric ball around {x} of radius {r} is {:?}, level {} ball is {:?}",
                    c.metric_ball, c.level, c.relational_ball
                )));
            }
            metric_balls.push(c.metric_ball);
        }
    }
    let metric_family =
        intersection_closure(sys.len(), metric_balls, DEFAULT_ENUMERATION_CAP, Execution::Sequential)?;
    let relational: Vec<PointSet> = enumerate_admissible(sys, HullMode::ArbitraryCenter)?
        .into_iter()
        .map(|a| a.points)
        .collect();
    Ok(Outcome::from_check(metric_family == relational, || {
        format!(
            "{} sets from metric balls, {} admissible sets",
            metric_family.len(),
            relational.len()
        )
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn names_round_trip() {
        for c in ClaimId::ALL {
            assert_eq!(c.as_str().parse::<ClaimId>().unwrap(), c);
            assert_eq!(serde_json::to_value(c).unwrap(), c.as_str());
        }
        assert!(matches!("nope".parse::<ClaimId>(), Err(Error::UnknownClaim(_))));
    }

    #[test]
    fn coverage_maps_each_result_to_one_claim() {
        for c in ClaimId::ALL {
            assert!(COVERAGE.iter().any(|(_, k)| *k == c), "{c} uncovered");
        }
        for (i, (name, _)) in COVERAGE.iter().enumerate() {
            assert!(COVERAGE[..i].iter().all(|(n, _)| n != name), "{name} listed twice");
        }
    }

    #[test]
    fn ex_b_falsifies_the_cube_claim() {
        let b = fixtures::ex_b();
        let id = SelfMap::identity(3);
        let out = check_claim(ClaimId::R10Metric, &b, &id).unwrap();
        assert!(out.is_failure(), "{out:?}");
        assert_eq!(check_claim(ClaimId::R9Inframetric, &b, &id).unwrap(), Outcome::Holds);
    }

    #[test]
    fn fixtures_satisfy_the_true_claims() {
        let trues = [
            ClaimId::LevelRoundtrip,
            ClaimId::HomoIffNonexp,
            ClaimId::R9Inframetric,
            ClaimId::TransitiveUltrametric,
            ClaimId::FiniteNormalStructure,
            ClaimId::HullEquivalence,
            ClaimId::RadiiTranslation,
        ];
        for sys in fixtures::all() {
            let id = SelfMap::identity(sys.len());
            for c in trues {
                assert!(!check_claim(c, &sys, &id).unwrap().is_failure(), "{c} on {:?}", sys.labels());
            }
        }
    }

    #[test]
    fn dynamics_claims_on_closing_example() {
        let c = fixtures::ex_c();
        let t = fixtures::successor();
        assert_eq!(check_claim(ClaimId::KsDichotomy, &c, &t).unwrap(), Outcome::Holds);
        assert_eq!(check_claim(ClaimId::AsymptoticFixedPoint, &c, &t).unwrap(), Outcome::Holds);
        assert_eq!(check_claim(ClaimId::RegularFixedPoint, &c, &t).unwrap(), Outcome::Holds);
        let e = fixtures::ex_e();
        assert!(matches!(
            check_claim(ClaimId::AsymptoticFixedPoint, &e, &fixtures::swap()).unwrap(),
            Outcome::Vacuous(_)
        ));
    }
}
