use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::pointset::PointSet;

/// A binary relation on `{0, …, n-1}`, stored as one bitset row per point.
#[derive(Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Relation {
    rows: Vec<PointSet>,
}

impl Relation {
    pub fn empty(n: usize) -> Self {
        Self {
            rows: vec![PointSet::empty(n); n],
        }
    }

    pub fn diagonal(n: usize) -> Self {
        Self {
            rows: (0..n).map(|x| PointSet::singleton(n, x)).collect(),
        }
    }

    pub fn full(n: usize) -> Self {
        Self {
            rows: vec![PointSet::full(n); n],
        }
    }

    pub fn from_pairs(n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut r = Self::empty(n);
        for (x, y) in pairs {
            r.insert(x, y);
        }
        r
    }

    /// Build from a boolean adjacency matrix; rows must be square.
    pub fn from_matrix(adjacency: &[Vec<bool>]) -> Result<Self> {
        let n = adjacency.len();
        let mut r = Self::empty(n);
        for (x, row) in adjacency.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Structural(format!(
                    "adjacency row {x} has {} entries, expected {n}",
                    row.len()
                )));
            }
            for (y, &b) in row.iter().enumerate() {
                if b {
                    r.insert(x, y);
                }
            }
        }
        Ok(r)
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn insert(&mut self, x: usize, y: usize) {
        self.rows[x].insert(y);
    }

    #[inline]
    pub fn contains(&self, x: usize, y: usize) -> bool {
        self.rows[x].contains(y)
    }

    pub fn row(&self, x: usize) -> &PointSet {
        &self.rows[x]
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(x, row)| row.iter().map(move |y| (x, y)))
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.rows.iter().zip(&other.rows).all(|(a, b)| a.is_subset(b))
    }

    pub fn intersection(&self, other: &Self) -> Self {
        Self {
            rows: self
                .rows
                .iter()
                .zip(&other.rows)
                .map(|(a, b)| a.intersection(b))
                .collect(),
        }
    }

    /// First pair `(x, y)` with `(x, y)` present but `(y, x)` absent.
    pub fn asymmetric_pair(&self) -> Option<(usize, usize)> {
        self.pairs().find(|&(x, y)| !self.contains(y, x))
    }

    /// First point missing its diagonal pair.
    pub fn missing_diagonal(&self) -> Option<usize> {
        (0..self.len()).find(|&x| !self.contains(x, x))
    }

    /// First pair of `self` not in `other`.
    pub fn first_excess(&self, other: &Self) -> Option<(usize, usize)> {
        self.pairs().find(|&(x, y)| !other.contains(x, y))
    }

    /// First chain `(x, z, y)` with `(x, z), (z, y)` present and `(x, y)` absent.
    pub fn transitivity_violation(&self) -> Option<(usize, usize, usize)> {
        for x in 0..self.len() {
            for z in self.rows[x].iter() {
                for y in self.rows[z].iter() {
                    if !self.contains(x, y) {
                        return Some((x, z, y));
                    }
                }
            }
        }
        None
    }
}

/// Relational composition: `(x, y)` is in the result iff some `z` has
/// `(x, z) ∈ r` and `(z, y) ∈ s`.
pub fn compose(r: &Relation, s: &Relation) -> Result<Relation> {
    if r.len() != s.len() {
        return Err(Error::Structural(format!(
            "cannot compose relations on {} and {} points",
            r.len(),
            s.len()
        )));
    }
    let n = r.len();
    let rows = r
        .rows
        .iter()
        .map(|row| {
            let mut out = PointSet::empty(n);
            for z in row.iter() {
                out.union_with(&s.rows[z]);
            }
            out
        })
        .collect();
    Ok(Relation { rows })
}

impl fmt::Debug for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.rows {
            for y in 0..self.len() {
                f.write_str(if row.contains(y) { "1" } else { "." })?;
            }
            f.write_str("\n")?;
        }
        Ok(())
    }
}
