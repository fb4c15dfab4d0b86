use serde::Serialize;

use super::SelfMap;
use crate::error::Result;
use crate::grade::Grade;
use crate::system::RelationalSystem;

/// The eventually periodic orbit `x, Tx, T²x, …` split into a tail and a cycle.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Orbit {
    pub start: usize,
    pub tail: Vec<usize>,
    pub cycle: Vec<usize>,
    /// `μ(T^k x, T^{k+1} x)` for each listed iterate.
    pub grade_trace: Vec<Grade>,
}

impl Orbit {
    /// Grade of step `n` for any `n`, unrolling the cycle.
    pub fn step_grade(&self, n: usize) -> Grade {
        let l = self.tail.len();
        if n < l {
            self.grade_trace[n]
        } else {
            self.grade_trace[l + (n - l) % self.cycle.len()]
        }
    }

    pub fn cycle_min_grade(&self) -> Grade {
        self.grade_trace[self.tail.len()..]
            .iter()
            .copied()
            .min()
            .expect("cycle nonempty")
    }

    pub fn ends_in_fixed_point(&self) -> bool {
        self.cycle.len() == 1
    }
}

pub fn orbit(sys: &RelationalSystem, t: &SelfMap, x: usize) -> Result<Orbit> {
    t.check_against(sys)?;
    sys.check_index(x)?;
    let mut first_seen = vec![usize::MAX; sys.len()];
    let mut path = Vec::new();
    let mut cur = x;
    while first_seen[cur] == usize::MAX {
        first_seen[cur] = path.len();
        path.push(cur);
        cur = t.apply(cur);
    }
    let split = first_seen[cur];
    let grade_trace = path.iter().map(|&p| sys.grade(p, t.apply(p))).collect();
    let cycle = path.split_off(split);
    Ok(Orbit {
        start: x,
        tail: path,
        cycle,
        grade_trace,
    })
}

/// Regularity flags at one point.
///
/// `regular_n0` is the smallest `n₀ ≥ 1` with `μ(Tⁿx, Tⁿ⁺¹x) ≥ μ(x,Tx) + n₀`
/// for all `n ≥ n₀`; `asymptotic_n0` is the smallest `n₀ ≥ 0` with
/// `μ(Tⁿx, Tⁿ⁺¹x) ≥ μ(x,Tx) + n` for all `n ≥ n₀`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RegularityReport {
    pub point: usize,
    pub is_fixed: bool,
    pub base_grade: Grade,
    pub regular: bool,
    pub regular_n0: Option<usize>,
    pub asymptotically_regular: bool,
    pub asymptotic_n0: Option<usize>,
    pub weak_regular: bool,
    pub classical_asymptotic: bool,
}

pub fn regularity_report(sys: &RelationalSystem, t: &SelfMap, x: usize) -> Result<RegularityReport> {
    let orb = orbit(sys, t, x)?;
    let base = sys.grade(x, t.apply(x));
    if t.is_fixed(x) {
        return Ok(RegularityReport {
            point: x,
            is_fixed: true,
            base_grade: base,
            regular: true,
            regular_n0: None,
            asymptotically_regular: true,
            asymptotic_n0: None,
            weak_regular: true,
            classical_asymptotic: true,
        });
    }
    let m = base.level().expect("non-fixed point has a finite grade");
    let tail_len = orb.tail.len();
    let cycle_min = orb.cycle_min_grade();

    // Beyond the tail the left side is the constant cycle minimum while the
    // bound keeps growing, so n₀ ≤ max(tail, 1) suffices.
    let regular_n0 = (1..=tail_len.max(1)).find(|&n0| {
        let tail_min = (n0..tail_len).map(|n| orb.step_grade(n)).min().unwrap_or(Grade::Top);
        tail_min.min(cycle_min) >= Grade::Level(m + n0 as i64)
    });

    // Unbounded growth on the cycle forces it to be a fixed point.
    let asymptotic_n0 = if cycle_min.is_top() {
        (0..=tail_len).find(|&n0| (n0..tail_len).all(|n| orb.step_grade(n) >= Grade::Level(m + n as i64)))
    } else {
        None
    };

    Ok(RegularityReport {
        point: x,
        is_fixed: false,
        base_grade: base,
        regular: regular_n0.is_some(),
        regular_n0,
        asymptotically_regular: asymptotic_n0.is_some(),
        asymptotic_n0,
        weak_regular: cycle_min > base,
        classical_asymptotic: orb.ends_in_fixed_point(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn successor_orbit_on_ex_c() {
        let c = fixtures::ex_c();
        let o = orbit(&c, &fixtures::successor(), 0).unwrap();
        assert_eq!(o.tail, vec![0, 1, 2, 3, 4]);
        assert_eq!(o.cycle, vec![5]);
        let l = Grade::Level;
        assert_eq!(o.grade_trace, vec![l(0), l(1), l(2), l(3), l(4), Grade::Top]);
    }

    #[test]
    fn reflection_orbit_is_two_cycle() {
        let a = fixtures::ex_a();
        let o = orbit(&a, &fixtures::reflection(), 0).unwrap();
        assert!(o.tail.is_empty());
        assert_eq!(o.cycle, vec![0, 4]);
    }

    #[test]
    fn identity_orbit() {
        let a = fixtures::ex_a();
        let o = orbit(&a, &SelfMap::identity(5), 3).unwrap();
        assert_eq!(o.cycle, vec![3]);
        assert!(o.tail.is_empty());
    }

    #[test]
    fn successor_is_asymptotically_regular_from_zero() {
        let c = fixtures::ex_c();
        for x in 0..5 {
            let r = regularity_report(&c, &fixtures::successor(), x).unwrap();
            assert!(r.asymptotically_regular && r.regular && r.weak_regular);
            assert_eq!(r.asymptotic_n0, Some(0));
            assert!(r.classical_asymptotic);
        }
    }

    #[test]
    fn reflection_is_not_weak_regular() {
        let a = fixtures::ex_a();
        let r = regularity_report(&a, &fixtures::reflection(), 0).unwrap();
        assert!(!r.weak_regular && !r.regular && !r.asymptotically_regular);
        assert!(!r.classical_asymptotic);
    }

    #[test]
    fn swap_fails_asymptotic_regularity() {
        let e = fixtures::ex_e();
        let r = regularity_report(&e, &fixtures::swap(), 0).unwrap();
        assert!(!r.asymptotically_regular);
        assert!(!r.regular);
    }

    #[test]
    fn fixed_point_is_vacuously_regular() {
        let c = fixtures::ex_c();
        let r = regularity_report(&c, &fixtures::successor(), 5).unwrap();
        assert!(r.is_fixed && r.regular && r.asymptotically_regular && r.weak_regular);
    }
}
