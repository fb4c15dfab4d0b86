use serde::Serialize;

use super::{gen_self_map_from, gen_system_from, kind_for_trial, trial_rng, ClaimId, GenParams, Outcome};
use crate::dynamics::SelfMap;
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::format::{parse_map, parse_system, write_map, write_system, MAP_HEADER};
use crate::grade::Window;
use crate::harness::check_claim;
use crate::system::RelationalSystem;

/// A system, a map and the place where the claim broke.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Instance {
    pub system: RelationalSystem,
    pub map: SelfMap,
    pub locus: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Manifest {
    pub claim: ClaimId,
    pub seed: u64,
    pub trial: u64,
}

impl Manifest {
    pub fn to_line(&self) -> String {
        format!("# counterexample claim={} seed={} trial={}", self.claim, self.seed, self.trial)
    }

    pub fn parse_line(line: &str) -> Result<Self> {
        let bad = || Error::Usage(format!("malformed manifest line `{line}`"));
        let rest = line.strip_prefix("# counterexample ").ok_or_else(bad)?;
        let (mut claim, mut seed, mut trial) = (None, None, None);
        for kv in rest.split_whitespace() {
            match kv.split_once('=').ok_or_else(bad)? {
                ("claim", v) => claim = Some(v.parse()?),
                ("seed", v) => seed = Some(v.parse().map_err(|_| bad())?),
                ("trial", v) => trial = Some(v.parse().map_err(|_| bad())?),
                _ => return Err(bad()),
            }
        }
        Ok(Self {
            claim: claim.ok_or_else(bad)?,
            seed: seed.ok_or_else(bad)?,
            trial: trial.ok_or_else(bad)?,
        })
    }
}

impl Instance {
    /// Manifest line, system file and map file, concatenated.
    pub fn to_text(&self, manifest: &Manifest) -> String {
        format!("{}\n{}{}", manifest.to_line(), write_system(&self.system), write_map(&self.map))
    }

    pub fn from_text(text: &str) -> Result<(Manifest, Instance)> {
        let first = text.lines().next().unwrap_or_default();
        let manifest = Manifest::parse_line(first)?;
        let split = text
            .find(&format!("\n{MAP_HEADER}"))
            .ok_or_else(|| Error::Usage("counterexample file has no map section".into()))?;
        let system = parse_system(&text[..split + 1])?;
        let map = parse_map(&text[split + 1..])?;
        let locus = match check_claim(manifest.claim, &system, &map)? {
            Outcome::Fails(l) => l,
            _ => String::new(),
        };
        Ok((manifest, Instance { system, map, locus }))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum VerdictOutcome {
    NoCounterexample,
    Counterexample,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub claim: ClaimId,
    pub trials: u64,
    pub seed: u64,
    pub outcome: VerdictOutcome,
    /// Trials where the hypotheses held and the claim did too.
    pub holds: u64,
    /// Trials where the hypotheses did not hold.
    pub vacuous: u64,
    pub trial_index: Option<u64>,
    /// Point count before shrinking.
    pub original_points: Option<usize>,
    pub instance: Option<Instance>,
    pub note: Option<String>,
}

impl Verdict {
    pub fn manifest(&self) -> Option<Manifest> {
        self.trial_index.map(|trial| Manifest {
            claim: self.claim,
            seed: self.seed,
            trial,
        })
    }

    /// Serialized counterexample, if any.
    pub fn instance_text(&self) -> Option<String> {
        Some(self.instance.as_ref()?.to_text(&self.manifest()?))
    }

    /// The counterexample still fails after a text round trip.
    pub fn replay(&self) -> bool {
        match self.instance_text() {
            None => self.outcome == VerdictOutcome::NoCounterexample,
            Some(text) => Instance::from_text(&text).is_ok_and(|(m, inst)| {
                m.claim == self.claim
                    && check_claim(m.claim, &inst.system, &inst.map).is_ok_and(|o| o.is_failure())
            }),
        }
    }
}

const NORMAL_STRUCTURE_NOTE: &str = "fixed-point theorems that assume normal structure are vacuous on finite systems";

fn trial_instance(seed: u64, trial: u64, params: &GenParams) -> (RelationalSystem, SelfMap) {
    let mut rng = trial_rng(seed, trial);
    let sys = gen_system_from(&mut rng, params);
    let map = gen_self_map_from(&mut rng, &sys, kind_for_trial(params.map_kind, trial));
    (sys, map)
}

pub fn falsify(claim: ClaimId, trials: u64, seed: u64) -> Result<Verdict> {
    falsify_with(claim, trials, seed, &claim.params(), Execution::default())
}

/// Run `trials` independent instances; the failure with the smallest trial
/// index is shrunk and reported.
pub fn falsify_with(
    claim: ClaimId,
    trials: u64,
    seed: u64,
    params: &GenParams,
    exec: Execution,
) -> Result<Verdict> {
    params.validate()?;
    let outcomes: Vec<Result<Outcome>> = exec.map_range(trials as usize, |i| {
        let (sys, map) = trial_instance(seed, i as u64, params);
        check_claim(claim, &sys, &map)
    });
    let mut holds = 0;
    let mut vacuous = 0;
    let mut first_failure = None;
    for (i, o) in outcomes.into_iter().enumerate() {
        match o? {
            Outcome::Holds => holds += 1,
            Outcome::Vacuous(_) => vacuous += 1,
            Outcome::Fails(_) => {
                if first_failure.is_none() {
                    first_failure = Some(i as u64);
                }
            }
        }
    }
    let note = (claim == ClaimId::FiniteNormalStructure && first_failure.is_none())
        .then(|| NORMAL_STRUCTURE_NOTE.to_string());
    let Some(trial) = first_failure else {
        return Ok(Verdict {
            claim,
            trials,
            seed,
            outcome: VerdictOutcome::NoCounterexample,
            holds,
            vacuous,
            trial_index: None,
            original_points: None,
            instance: None,
            note,
        });
    };
    let (sys, mut map) = trial_instance(seed, trial, params);
    if !claim.uses_map() {
        map = SelfMap::identity(sys.len());
    }
    let original_points = sys.len();
    let (system, map) = shrink(&sys, &map, |s, t| {
        check_claim(claim, s, t).is_ok_and(|o| o.is_failure())
    });
    let locus = match check_claim(claim, &system, &map)? {
        Outcome::Fails(l) => l,
        _ => unreachable!("shrinking preserves failure"),
    };
    Ok(Verdict {
        claim,
        trials,
        seed,
        outcome: VerdictOutcome::Counterexample,
        holds,
        vacuous,
        trial_index: Some(trial),
        original_points: Some(original_points),
        instance: Some(Instance { system, map, locus }),
        note,
    })
}

/// Greedy local minimization: drop points, then narrow the window, then
/// lower grades, accepting any step on which `fails` still holds.
pub fn shrink<F>(sys: &RelationalSystem, t: &SelfMap, fails: F) -> (RelationalSystem, SelfMap)
where
    F: Fn(&RelationalSystem, &SelfMap) -> bool,
{
    let mut cur = (sys.clone(), t.clone());
    while let Some(next) = shrink_step(&cur.0, &cur.1, &fails) {
        cur = next;
    }
    cur
}

fn shrink_step<F>(sys: &RelationalSystem, t: &SelfMap, fails: &F) -> Option<(RelationalSystem, SelfMap)>
where
    F: Fn(&RelationalSystem, &SelfMap) -> bool,
{
    let n = sys.len();
    if n > 1 {
        for drop in 0..n {
            let keep: Vec<usize> = (0..n).filter(|&k| k != drop).collect();
            let cand = (sys.restrict(&keep), t.restrict(&keep));
            if fails(&cand.0, &cand.1) {
                return Some(cand);
            }
        }
    }
    let w = sys.window();
    if w.lo < w.hi {
        for narrowed in [Window::new(w.lo + 1, w.hi), Window::new(w.lo, w.hi - 1)] {
            let cand = sys.rewindow(narrowed.expect("lo < hi"));
            if fails(&cand, t) {
                return Some((cand, t.clone()));
            }
        }
    }
    for (x, y, g) in sys.grades().pairs() {
        if g > w.floor() {
            let cand = sys.with_grade(x, y, g - 1).expect("lowered grade in range");
            if fails(&cand, t) {
                return Some((cand, t.clone()));
            }
        }
    }
    None
}
