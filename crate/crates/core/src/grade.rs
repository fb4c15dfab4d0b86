//! Grades, index windows and the symmetric grade matrix.
//!
//! A grade `μ(x, y)` is the largest level `n` with `(x, y) ∈ R_n`. Only a
//! finite window `[lo, hi]` of levels is stored; below the window every
//! relation is `M × M` and above it every relation is the diagonal, so an
//! off-diagonal grade always lies in `[lo - 1, hi]` and the diagonal carries
//! [`Grade::Top`].

use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// A level index or the sentinel `Top` (`+∞`). `Top` is greater than every level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Grade {
    Level(i64),
    Top,
}

impl Grade {
    pub fn level(self) -> Option<i64> {
        match self {
            Grade::Level(n) => Some(n),
            Grade::Top => None,
        }
    }

    pub fn is_top(self) -> bool {
        matches!(self, Grade::Top)
    }

    /// `true` when the pair lies in `R_n`.
    pub fn reaches(self, n: i64) -> bool {
        match self {
            Grade::Level(g) => g >= n,
            Grade::Top => true,
        }
    }

    /// Shift by a signed offset; `Top` absorbs.
    pub fn offset(self, by: i64) -> Grade {
        match self {
            Grade::Level(g) => Grade::Level(g + by),
            Grade::Top => Grade::Top,
        }
    }
}

impl fmt::Display for Grade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Grade::Level(n) => write!(f, "{n}"),
            Grade::Top => f.write_str("TOP"),
        }
    }
}

impl Serialize for Grade {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Grade::Level(n) => s.serialize_i64(*n),
            Grade::Top => s.serialize_str("TOP"),
        }
    }
}

/// The explicitly stored level range `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Window {
    pub lo: i64,
    pub hi: i64,
}

impl Window {
    pub fn new(lo: i64, hi: i64) -> Result<Self> {
        if lo > hi {
            return Err(Error::Structural(format!("window lo {lo} exceeds hi {hi}")));
        }
        Ok(Self { lo, hi })
    }

    /// Smallest grade an off-diagonal pair may carry.
    pub fn floor(&self) -> i64 {
        self.lo - 1
    }

    pub fn levels(&self) -> std::ops::RangeInclusive<i64> {
        self.lo..=self.hi
    }

    /// Levels `[lo - 1, hi + 1]`: every distinct relation of the family appears here.
    pub fn extended_levels(&self) -> std::ops::RangeInclusive<i64> {
        self.lo - 1..=self.hi + 1
    }

    pub fn span(&self) -> i64 {
        self.hi - self.lo + 1
    }

    /// Clamp an arbitrary level into the grade range `[lo - 1, hi]`.
    pub fn clamp(&self, n: i64) -> i64 {
        n.clamp(self.lo - 1, self.hi)
    }
}

/// Symmetric `n × n` matrix of grades with `Top` on the diagonal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GradeMatrix {
    n: usize,
    entries: Vec<Grade>,
}

impl GradeMatrix {
    /// A matrix whose off-diagonal entries are all `fill`.
    pub fn constant(n: usize, fill: i64) -> Self {
        let mut entries = vec![Grade::Level(fill); n * n];
        for x in 0..n {
            entries[x * n + x] = Grade::Top;
        }
        Self { n, entries }
    }

    /// Build from rows, checking shape, diagonal, symmetry and the window range.
    pub fn from_rows(rows: &[Vec<Grade>], window: Window) -> Result<Self> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for (x, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Structural(format!(
                    "row {x} has {} entries, expected {n}",
                    row.len()
                )));
            }
            entries.extend_from_slice(row);
        }
        let m = Self { n, entries };
        m.check(window)?;
        Ok(m)
    }

    pub(crate) fn check(&self, window: Window) -> Result<()> {
        for x in 0..self.n {
            if !self.get(x, x).is_top() {
                return Err(Error::Structural(format!("diagonal entry ({x},{x}) is not TOP")));
            }
            for y in 0..self.n {
                if x == y {
                    continue;
                }
                let g = self.get(x, y);
                if g != self.get(y, x) {
                    return Err(Error::Structural(format!(
                        "entries ({x},{y}) and ({y},{x}) differ"
                    )));
                }
                match g {
                    Grade::Top => {
                        return Err(Error::Structural(format!(
                            "off-diagonal entry ({x},{y}) is TOP"
                        )))
                    }
                    Grade::Level(v) if v < window.floor() || v > window.hi => {
                        return Err(Error::Structural(format!(
                            "entry ({x},{y}) = {v} outside [{}, {}]",
                            window.floor(),
                            window.hi
                        )))
                    }
                    _ => {}
                }
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> Grade {
        self.entries[x * self.n + y]
    }

    /// Set an off-diagonal pair symmetrically.
    pub(crate) fn set_pair(&mut self, x: usize, y: usize, level: i64) {
        debug_assert_ne!(x, y);
        self.entries[x * self.n + y] = Grade::Level(level);
        self.entries[y * self.n + x] = Grade::Level(level);
    }

    pub fn row(&self, x: usize) -> &[Grade] {
        &self.entries[x * self.n..(x + 1) * self.n]
    }

    pub fn rows(&self) -> Vec<Vec<Grade>> {
        (0..self.n).map(|x| self.row(x).to_vec()).collect()
    }

    /// Off-diagonal grades of unordered pairs `x < y`.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize, i64)> + '_ {
        (0..self.n).flat_map(move |x| {
            (x + 1..self.n).map(move |y| (x, y, self.get(x, y).level().expect("off-diagonal")))
        })
    }

    /// Restrict to the given points, in the given order.
    pub(crate) fn restrict(&self, keep: &[usize]) -> Self {
        let n = keep.len();
        let mut entries = Vec::with_capacity(n * n);
        for &x in keep {
            for &y in keep {
                entries.push(self.get(x, y));
            }
        }
        Self { n, entries }
    }
}
