//! Seeded generation of systems and maps, the claim catalog, and
//! counterexample search with shrinking.

mod claims;
mod falsify;

pub use claims::{check_claim, ClaimId, Outcome, COVERAGE};
pub use falsify::{falsify, falsify_with, shrink, Instance, Manifest, Verdict, VerdictOutcome};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::axioms::{check_axiom, AxiomId};
use crate::dynamics::{is_homomorphism, SelfMap};
use crate::error::{Error, Result};
use crate::grade::{GradeMatrix, Window};
use crate::system::RelationalSystem;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Constraint {
    None,
    R9,
    R10,
    Transitive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MapKind {
    Any,
    Homomorphism,
    /// Even trials draw arbitrary maps, odd trials homomorphisms.
    Mixed,
}

/// Inclusive ranges for the generated shape.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GenParams {
    pub points: (usize, usize),
    pub span: (i64, i64),
    pub lo: (i64, i64),
    pub constraint: Constraint,
    pub map_kind: MapKind,
}

impl Default for GenParams {
    fn default() -> Self {
        Self {
            points: (2, 6),
            span: (1, 4),
            lo: (0, 2),
            constraint: Constraint::None,
            map_kind: MapKind::Any,
        }
    }
}

impl GenParams {
    pub fn with_constraint(mut self, constraint: Constraint) -> Self {
        self.constraint = constraint;
        self
    }

    pub fn with_map_kind(mut self, map_kind: MapKind) -> Self {
        self.map_kind = map_kind;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let ok = self.points.0 >= 1
            && self.points.0 <= self.points.1
            && self.span.0 >= 1
            && self.span.0 <= self.span.1
            && self.lo.0 <= self.lo.1;
        if ok {
            Ok(())
        } else {
            Err(Error::Usage(format!("invalid generation parameters {self:?}")))
        }
    }
}

/// Independent stream for one trial of one seed.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

pub fn gen_system(seed: u64, params: &GenParams) -> RelationalSystem {
    gen_system_from(&mut trial_rng(seed, 0), params)
}

pub fn gen_system_from(rng: &mut impl Rng, params: &GenParams) -> RelationalSystem {
    let n = rng.gen_range(params.points.0..=params.points.1);
    let span = rng.gen_range(params.span.0..=params.span.1);
    let lo = rng.gen_range(params.lo.0..=params.lo.1);
    let window = Window::new(lo, lo + span - 1).expect("span ≥ 1");
    let mut g = vec![vec![i64::MAX; n]; n];
    for x in 0..n {
        for y in x + 1..n {
            let v = rng.gen_range(window.floor()..=window.hi);
            g[x][y] = v;
            g[y][x] = v;
        }
    }
    repair(&mut g, window, params.constraint);
    let mut grades = GradeMatrix::constant(n, window.floor());
    for x in 0..n {
        for y in x + 1..n {
            grades.set_pair(x, y, g[x][y]);
        }
    }
    let sys = RelationalSystem::unlabelled(window, grades).expect("generated grades in range");
    if let Some(axiom) = constraint_axiom(params.constraint) {
        assert!(check_axiom(&sys, axiom).holds, "repair postcondition for {axiom}");
    }
    sys
}

pub(crate) fn constraint_axiom(c: Constraint) -> Option<AxiomId> {
    match c {
        Constraint::None => None,
        Constraint::R9 => Some(AxiomId::R9),
        Constraint::R10 => Some(AxiomId::R10),
        Constraint::Transitive => Some(AxiomId::Transitive),
    }
}

/// Raise grades until the constraint's composition inequality holds
/// everywhere. Diagonal entries are `i64::MAX`.
fn repair(g: &mut [Vec<i64>], window: Window, constraint: Constraint) {
    let n = g.len();
    let drop = match constraint {
        Constraint::None => return,
        Constraint::Transitive => 0,
        Constraint::R9 | Constraint::R10 => 1,
    };
    loop {
        let mut changed = false;
        for x in 0..n {
            for y in x + 1..n {
                let mut need = i64::MIN;
                for a in 0..n {
                    let two = g[x][a].min(g[a][y]);
                    need = need.max(two);
                    if constraint == Constraint::R10 {
                        for b in 0..n {
                            need = need.max(g[x][a].min(g[a][b]).min(g[b][y]));
                        }
                    }
                }
                let need = need.saturating_sub(drop).min(window.hi);
                if need > g[x][y] {
                    g[x][y] = need;
                    g[y][x] = need;
                    changed = true;
                }
            }
        }
        if !changed {
            return;
        }
    }
}

const MAP_RESTARTS: usize = 32;

pub fn gen_self_map(seed: u64, sys: &RelationalSystem, kind: MapKind) -> SelfMap {
    gen_self_map_from(&mut trial_rng(seed, 0), sys, kind)
}

pub fn gen_self_map_from(rng: &mut impl Rng, sys: &RelationalSystem, kind: MapKind) -> SelfMap {
    let n = sys.len();
    match kind {
        MapKind::Any => SelfMap::new((0..n).map(|_| rng.gen_range(0..n)).collect()),
        MapKind::Homomorphism | MapKind::Mixed => {
            for _ in 0..MAP_RESTARTS {
                if let Some(t) = try_homomorphism(rng, sys) {
                    debug_assert!(is_homomorphism(sys, &t).is_ok_and(|c| c.holds));
                    return t;
                }
            }
            SelfMap::identity(n)
        }
    }
}

fn try_homomorphism(rng: &mut impl Rng, sys: &RelationalSystem) -> Option<SelfMap> {
    let n = sys.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut image = vec![usize::MAX; n];
    for (k, &p) in order.iter().enumerate() {
        let candidates: Vec<usize> = (0..n)
            .filter(|&i| {
                order[..k]
                    .iter()
                    .all(|&q| sys.grade(i, image[q]) >= sys.grade(p, q))
            })
            .collect();
        image[p] = *candidates.choose(rng)?;
    }
    let t = SelfMap::new(image);
    is_homomorphism(sys, &t).ok()?.holds.then_some(t)
}

/// Map kind actually drawn for a trial.
pub(crate) fn kind_for_trial(kind: MapKind, trial: u64) -> MapKind {
    match kind {
        MapKind::Mixed if trial.is_multiple_of(2) => MapKind::Any,
        MapKind::Mixed => MapKind::Homomorphism,
        k => k,
    }
}
