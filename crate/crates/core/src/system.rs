//! The graded relational system and its two presentations.
//!
//! A [`RelationalSystem`] stores the grade matrix; a [`LevelList`] stores one
//! explicit relation per level of the window. [`compact_to_grades`] and
//! [`expand_level`] convert between the two.

use serde::Serialize;

use crate::axioms::{AxiomId, AxiomReport, Witness};
use crate::error::{Error, Result};
use crate::grade::{Grade, GradeMatrix, Window};
use crate::pointset::PointSet;
use crate::relation::Relation;

/// Ground-set labels, a level window and the grade matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RelationalSystem {
    labels: Vec<String>,
    window: Window,
    grades: GradeMatrix,
}

impl RelationalSystem {
    pub fn new(labels: Vec<String>, window: Window, grades: GradeMatrix) -> Result<Self> {
        if labels.len() != grades.len() {
            return Err(Error::Structural(format!(
                "{} labels for {} points",
                labels.len(),
                grades.len()
            )));
        }
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(Error::Structural(format!("duplicate label `{l}`")));
            }
        }
        grades.check(window)?;
        Ok(Self {
            labels,
            window,
            grades,
        })
    }

    /// Points labelled by their indices.
    pub fn unlabelled(window: Window, grades: GradeMatrix) -> Result<Self> {
        let labels = default_labels(grades.len());
        Self::new(labels, window, grades)
    }

    pub fn from_rows(labels: &[&str], window: Window, rows: &[Vec<Grade>]) -> Result<Self> {
        let grades = GradeMatrix::from_rows(rows, window)?;
        Self::new(labels.iter().map(|s| s.to_string()).collect(), window, grades)
    }

    pub fn len(&self) -> usize {
        self.grades.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grades.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, x: usize) -> &str {
        &self.labels[x]
    }

    pub fn has_default_labels(&self) -> bool {
        self.labels.iter().enumerate().all(|(i, l)| *l == i.to_string())
    }

    pub fn window(&self) -> Window {
        self.window
    }

    pub fn grades(&self) -> &GradeMatrix {
        &self.grades
    }

    #[inline]
    pub fn grade(&self, x: usize, y: usize) -> Grade {
        self.grades.get(x, y)
    }

    pub fn points(&self) -> std::ops::Range<usize> {
        0..self.len()
    }

    pub fn all_points(&self) -> PointSet {
        PointSet::full(self.len())
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub(crate) fn check_index(&self, x: usize) -> Result<()> {
        if x >= self.len() {
            return Err(Error::IndexOutOfRange {
                index: x,
                len: self.len(),
            });
        }
        Ok(())
    }

    /// Largest finite off-diagonal grade, if there are at least two points.
    pub fn max_finite_grade(&self) -> Option<i64> {
        self.grades.pairs().map(|(_, _, g)| g).max()
    }

    pub fn min_finite_grade(&self) -> Option<i64> {
        self.grades.pairs().map(|(_, _, g)| g).min()
    }

    /// Sub-system on `keep` (in that order), same window.
    pub fn restrict(&self, keep: &[usize]) -> Self {
        Self {
            labels: keep.iter().map(|&x| self.labels[x].clone()).collect(),
            window: self.window,
            grades: self.grades.restrict(keep),
        }
    }

    /// Same points, new window, grades clamped into it.
    pub fn rewindow(&self, window: Window) -> Self {
        let mut grades = self.grades.clone();
        for (x, y, g) in self.grades.pairs() {
            grades.set_pair(x, y, window.clamp(g));
        }
        Self {
            labels: self.labels.clone(),
            window,
            grades,
        }
    }

    /// Copy with one pair regraded. The level must lie in `[lo - 1, hi]`.
    pub fn with_grade(&self, x: usize, y: usize, level: i64) -> Result<Self> {
        self.check_index(x)?;
        self.check_index(y)?;
        if x == y {
            return Err(Error::Structural("cannot regrade a diagonal entry".into()));
        }
        if level < self.window.floor() || level > self.window.hi {
            return Err(Error::Structural(format!("grade {level} outside window")));
        }
        let mut s = self.clone();
        s.grades.set_pair(x, y, level);
        Ok(s)
    }

    /// Every stored level as an explicit relation.
    pub fn to_level_list(&self) -> LevelList {
        LevelList {
            window: self.window,
            levels: self.window.levels().map(|n| expand_level(self, n)).collect(),
        }
    }
}

impl Serialize for RelationalSystem {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("RelationalSystem", 3)?;
        st.serialize_field("labels", &self.labels)?;
        st.serialize_field("window", &self.window)?;
        st.serialize_field("grades", &self.grades.rows())?;
        st.end()
    }
}

pub(crate) fn default_labels(n: usize) -> Vec<String> {
    (0..n).map(|i| i.to_string()).collect()
}

/// One explicit relation per level in `[lo, hi]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LevelList {
    window: Window,
    levels: Vec<Relation>,
}

impl LevelList {
    pub fn new(window: Window, levels: Vec<Relation>) -> Result<Self> {
        if levels.is_empty() {
            return Err(Error::Structural("level list is empty".into()));
        }
        if levels.len() as i64 != window.span() {
            return Err(Error::Structural(format!(
                "{} relations for window [{}, {}]",
                levels.len(),
                window.lo,
                window.hi
            )));
        }
        let n = levels[0].len();
        if let Some(bad) = levels.iter().position(|r| r.len() != n) {
            return Err(Error::Structural(format!(
                "level {} has {} points, expected {n}",
                window.lo + bad as i64,
                levels[bad].len()
            )));
        }
        Ok(Self { window, levels })
    }

    pub fn window(&self) -> Window {
        self.window
    }

    pub fn point_count(&self) -> usize {
        self.levels[0].len()
    }

    /// Relation at level `n`, applying the below/above-window conventions.
    pub fn level(&self, n: i64) -> Relation {
        if n < self.window.lo {
            Relation::full(self.point_count())
        } else if n > self.window.hi {
            Relation::diagonal(self.point_count())
        } else {
            self.levels[(n - self.window.lo) as usize].clone()
        }
    }

    pub fn stored(&self) -> impl DoubleEndedIterator<Item = (i64, &Relation)> {
        let lo = self.window.lo;
        self.levels.iter().enumerate().map(move |(i, r)| (lo + i as i64, r))
    }
}

/// Check symmetry (r1), nestedness (r2) and that every stored level is
/// reflexive so the family, closed off by the diagonal above the window,
/// intersects to exactly the diagonal.
pub fn validate_level_list(levels: &LevelList) -> Vec<AxiomReport> {
    let r1 = levels
        .stored()
        .find_map(|(n, r)| r.asymmetric_pair().map(|(x, y)| Witness::Pair { level: n, x, y }));
    let r2 = levels
        .stored()
        .skip(1)
        .find_map(|(n, r)| {
            r.first_excess(&levels.level(n - 1))
                .map(|(x, y)| Witness::Pair { level: n, x, y })
        });
    let r4 = levels
        .stored()
        .find_map(|(n, r)| r.missing_diagonal().map(|x| Witness::Point { level: n, x }));
    vec![
        AxiomReport::from_witness(AxiomId::R1, r1),
        AxiomReport::from_witness(AxiomId::R2, r2),
        AxiomReport::from_witness(AxiomId::R4Window, r4),
    ]
}

/// Collapse a validated level list to grades: each pair gets the largest
/// stored level containing it, or `lo - 1` when none does.
pub fn compact_to_grades(levels: &LevelList) -> Result<RelationalSystem> {
    if let Some(bad) = validate_level_list(levels).into_iter().find(|r| !r.holds) {
        return Err(Error::Rejected(format!(
            "level list fails {}: {}",
            bad.axiom,
            bad.witness.map(|w| w.to_string()).unwrap_or_default()
        )));
    }
    let n = levels.point_count();
    let w = levels.window();
    let mut grades = GradeMatrix::constant(n, w.floor());
    for x in 0..n {
        for y in x + 1..n {
            let top = levels
                .stored()
                .rev()
                .find(|(_, r)| r.contains(x, y))
                .map(|(lvl, _)| lvl)
                .unwrap_or(w.floor());
            grades.set_pair(x, y, top);
        }
    }
    RelationalSystem::unlabelled(w, grades)
}

/// `R_n = {(x, y) : μ(x, y) ≥ n}`; full below the window, diagonal above it.
pub fn expand_level(sys: &RelationalSystem, n: i64) -> Relation {
    let len = sys.len();
    let mut r = Relation::empty(len);
    for x in 0..len {
        for y in 0..len {
            if sys.grade(x, y).reaches(n) {
                r.insert(x, y);
            }
        }
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn expand_below_and_above_window() {
        let a = fixtures::ex_a();
        let w = a.window();
        assert_eq!(expand_level(&a, w.lo - 5), Relation::full(5));
        assert_eq!(expand_level(&a, w.hi + 1), Relation::diagonal(5));
        let c = fixtures::ex_c();
        assert_eq!(expand_level(&c, 5), Relation::diagonal(6));
    }

    #[test]
    fn ex_a_level_two_is_grid_neighbours() {
        let a = fixtures::ex_a();
        let mut expect = Relation::diagonal(5);
        for i in 0..4 {
            expect.insert(i, i + 1);
            expect.insert(i + 1, i);
        }
        assert_eq!(expand_level(&a, 2), expect);
    }

    #[test]
    fn level_list_round_trip_on_fixtures() {
        for sys in fixtures::all() {
            let levels = sys.to_level_list();
            assert!(validate_level_list(&levels).iter().all(|r| r.holds));
            let back = compact_to_grades(&levels).unwrap();
            assert_eq!(back.grades(), sys.grades());
            assert_eq!(back.window(), sys.window());
        }
    }

    #[test]
    fn nestedness_violation_is_witnessed() {
        let w = Window::new(1, 2).unwrap();
        let r1 = Relation::diagonal(2);
        let mut r2 = Relation::diagonal(2);
        r2.insert(0, 1);
        r2.insert(1, 0);
        let list = LevelList::new(w, vec![r1, r2]).unwrap();
        let reports = validate_level_list(&list);
        let r2_report = reports.iter().find(|r| r.axiom == AxiomId::R2).unwrap();
        assert!(!r2_report.holds);
        assert_eq!(r2_report.witness, Some(Witness::Pair { level: 2, x: 0, y: 1 }));
        assert!(reports.iter().filter(|r| r.axiom != AxiomId::R2).all(|r| r.holds));
        assert!(matches!(compact_to_grades(&list), Err(Error::Rejected(_))));
    }

    #[test]
    fn diagonal_only_family_validates() {
        let w = Window::new(0, 0).unwrap();
        let list = LevelList::new(w, vec![Relation::diagonal(3)]).unwrap();
        assert!(validate_level_list(&list).iter().all(|r| r.holds));
        let sys = compact_to_grades(&list).unwrap();
        assert!(sys.grades().pairs().all(|(_, _, g)| g == -1));
    }

    #[test]
    fn constant_full_family_compacts_to_lo() {
        let w = Window::new(0, 0).unwrap();
        let list = LevelList::new(w, vec![Relation::full(3)]).unwrap();
        let sys = compact_to_grades(&list).unwrap();
        assert!(sys.grades().pairs().all(|(_, _, g)| g == 0));
    }

    #[test]
    fn asymmetric_and_irreflexive_levels_fail() {
        let w = Window::new(0, 0).unwrap();
        let list = LevelList::new(w, vec![Relation::from_pairs(2, [(0, 0), (1, 1), (0, 1)])]).unwrap();
        let reps = validate_level_list(&list);
        assert!(!reps[0].holds);
        let list = LevelList::new(w, vec![Relation::from_pairs(2, [(0, 0)])]).unwrap();
        let reps = validate_level_list(&list);
        assert_eq!(reps[2].witness, Some(Witness::Point { level: 0, x: 1 }));
    }

    #[test]
    fn dimension_mismatch_is_structural() {
        let w = Window::new(0, 1).unwrap();
        let err = LevelList::new(w, vec![Relation::full(2), Relation::full(3)]).unwrap_err();
        assert!(matches!(err, Error::Structural(_)));
        assert!(LevelList::new(w, vec![Relation::full(2)]).is_err());
    }
}
