//! Self-maps of the ground set and their fixed-point behaviour.

mod invariant;
mod orbit;

pub use invariant::{
    invariant_balls, ks_dichotomy, minimal_invariant_admissible, minimal_invariant_balls,
    regular_fixed_point, BallFixedPoints, DichotomyOutcome, DichotomyReport, DichotomyRow,
    RegularFixedPointReport, RegularityVariant,
};
pub use orbit::{orbit, regularity_report, Orbit, RegularityReport};

use serde::Serialize;

use crate::dyadic::DyadicValue;
use crate::error::{Error, Result};
use crate::grade::Grade;
use crate::pointset::PointSet;
use crate::system::RelationalSystem;

/// A total self-map given by the image of every point.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct SelfMap {
    image: Vec<usize>,
}

impl SelfMap {
    /// # Panics
    /// If an image index is out of range.
    pub fn new(image: Vec<usize>) -> Self {
        Self::try_new(image).expect("valid self-map")
    }

    pub fn try_new(image: Vec<usize>) -> Result<Self> {
        let n = image.len();
        if let Some(&bad) = image.iter().find(|&&i| i >= n) {
            return Err(Error::IndexOutOfRange { index: bad, len: n });
        }
        Ok(Self { image })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            image: (0..n).collect(),
        }
    }

    pub fn constant(n: usize, to: usize) -> Self {
        Self::new(vec![to; n])
    }

    pub fn len(&self) -> usize {
        self.image.len()
    }

    pub fn is_empty(&self) -> bool {
        self.image.is_empty()
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.image[x]
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }

    pub fn image_of(&self, a: &PointSet) -> PointSet {
        PointSet::from_indices(a.universe(), a.iter().map(|x| self.apply(x)))
    }

    pub fn is_fixed(&self, x: usize) -> bool {
        self.image[x] == x
    }

    /// Restrict to `keep` (in that order); points mapped outside `keep` are
    /// sent to themselves.
    pub fn restrict(&self, keep: &[usize]) -> Self {
        let image = keep
            .iter()
            .enumerate()
            .map(|(i, &x)| keep.iter().position(|&k| k == self.apply(x)).unwrap_or(i))
            .collect();
        Self { image }
    }

    pub(crate) fn check_against(&self, sys: &RelationalSystem) -> Result<()> {
        if self.len() != sys.len() {
            return Err(Error::Structural(format!(
                "map on {} points, system has {}",
                self.len(),
                sys.len()
            )));
        }
        Ok(())
    }
}

/// A pair whose image is further apart than the pair itself.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HomomorphismWitness {
    pub x: usize,
    pub y: usize,
    pub grade: Grade,
    pub image_grade: Grade,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NonexpansiveWitness {
    pub x: usize,
    pub y: usize,
    pub distance: DyadicValue,
    pub image_distance: DyadicValue,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MapCheck<W> {
    pub holds: bool,
    pub witness: Option<W>,
}

fn pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |x| (x + 1..n).map(move |y| (x, y)))
}

/// `μ(Tx, Ty) ≥ μ(x, y)` for every pair, i.e. every level is preserved.
pub fn is_homomorphism(sys: &RelationalSystem, t: &SelfMap) -> Result<MapCheck<HomomorphismWitness>> {
    t.check_against(sys)?;
    let witness = pairs(sys.len()).find_map(|(x, y)| {
        let grade = sys.grade(x, y);
        let image_grade = sys.grade(t.apply(x), t.apply(y));
        (image_grade < grade).then_some(HomomorphismWitness {
            x,
            y,
            grade,
            image_grade,
        })
    });
    Ok(MapCheck {
        holds: witness.is_none(),
        witness,
    })
}

/// `δ(Tx, Ty) ≤ δ(x, y)` for every pair, in exact dyadic arithmetic.
pub fn is_nonexpansive(sys: &RelationalSystem, t: &SelfMap) -> Result<MapCheck<NonexpansiveWitness>> {
    t.check_against(sys)?;
    let d = |a: usize, b: usize| DyadicValue::from_grade(sys.grade(a, b));
    let witness = pairs(sys.len()).find_map(|(x, y)| {
        let distance = d(x, y);
        let image_distance = d(t.apply(x), t.apply(y));
        (image_distance > distance).then_some(NonexpansiveWitness {
            x,
            y,
            distance,
            image_distance,
        })
    });
    Ok(MapCheck {
        holds: witness.is_none(),
        witness,
    })
}

pub fn fixed_points(t: &SelfMap) -> PointSet {
    PointSet::from_indices(t.len(), (0..t.len()).filter(|&x| t.is_fixed(x)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn homomorphism_examples() {
        let a = fixtures::ex_a();
        assert!(is_homomorphism(&a, &fixtures::reflection()).unwrap().holds);
        assert!(is_nonexpansive(&a, &fixtures::reflection()).unwrap().holds);
        let c = fixtures::ex_c();
        assert!(is_homomorphism(&c, &fixtures::successor()).unwrap().holds);
        for sys in fixtures::all() {
            let id = SelfMap::identity(sys.len());
            assert!(is_homomorphism(&sys, &id).unwrap().holds);
            let k = SelfMap::constant(sys.len(), 0);
            assert!(is_nonexpansive(&sys, &k).unwrap().holds);
        }
    }

    #[test]
    fn expanding_map_is_caught_by_both_checks() {
        let a = fixtures::ex_a();
        let t = SelfMap::new(vec![0, 0, 0, 0, 4]);
        let h = is_homomorphism(&a, &t).unwrap();
        let n = is_nonexpansive(&a, &t).unwrap();
        assert!(!h.holds && !n.holds);
        let hw = h.witness.unwrap();
        let nw = n.witness.unwrap();
        assert_eq!((hw.x, hw.y), (2, 4));
        assert_eq!((nw.x, nw.y), (2, 4));
        assert_eq!(nw.distance, DyadicValue::pow2(-1));
        assert_eq!(nw.image_distance, DyadicValue::one());
    }

    #[test]
    fn fixed_point_examples() {
        assert_eq!(fixed_points(&fixtures::reflection()).to_vec(), vec![2]);
        assert_eq!(fixed_points(&fixtures::successor()).to_vec(), vec![5]);
        assert!(fixed_points(&SelfMap::identity(4)).is_full());
    }

    #[test]
    fn size_mismatch_and_bad_images() {
        let a = fixtures::ex_a();
        assert!(matches!(
            is_homomorphism(&a, &SelfMap::identity(3)),
            Err(Error::Structural(_))
        ));
        assert!(SelfMap::try_new(vec![0, 2]).is_err());
    }

    #[test]
    fn restriction_redirects_lost_images() {
        let t = fixtures::successor();
        let r = t.restrict(&[0, 2, 5]);
        assert_eq!(r.image(), &[0, 1, 2]);
    }
}
