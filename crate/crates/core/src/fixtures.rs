//! Small reference systems and maps used by tests, benches and the CLI docs.

use crate::dynamics::SelfMap;
use crate::grade::{Grade, GradeMatrix, Window};
use crate::system::RelationalSystem;

fn build(labels: &[&str], lo: i64, hi: i64, grade: impl Fn(usize, usize) -> i64) -> RelationalSystem {
    let window = Window::new(lo, hi).expect("fixture window");
    let n = labels.len();
    let rows: Vec<Vec<Grade>> = (0..n)
        .map(|x| {
            (0..n)
                .map(|y| if x == y { Grade::Top } else { Grade::Level(grade(x, y)) })
                .collect()
        })
        .collect();
    let grades = GradeMatrix::from_rows(&rows, window).expect("fixture grades");
    RelationalSystem::new(labels.iter().map(|s| s.to_string()).collect(), window, grades)
        .expect("fixture system")
}

/// Five grid points `0, 1/4, 1/2, 3/4, 1` graded by `|x − y| ≤ 2^-n`, window `[0, 3]`.
pub fn ex_a() -> RelationalSystem {
    const ROWS: [[i64; 5]; 5] = [
        [0, 2, 1, 0, 0],
        [2, 0, 2, 1, 0],
        [1, 2, 0, 2, 1],
        [0, 1, 2, 0, 2],
        [0, 0, 1, 2, 0],
    ];
    build(&["0", "1/4", "1/2", "3/4", "1"], 0, 3, |x, y| ROWS[x][y])
}

/// Three points where the cube condition holds but the induced distance
/// breaks the triangle inequality: `μ(p,q) = 1`, `μ(q,r) = 5`, `μ(p,r) = 0`.
pub fn ex_b() -> RelationalSystem {
    const ROWS: [[i64; 3]; 3] = [[0, 1, 0], [1, 0, 5], [0, 5, 0]];
    build(&["p", "q", "r"], 0, 6, |x, y| ROWS[x][y])
}

/// `{0, 1, 2, 3, 4, ∞}` with `μ(a, b) = min(a, b)`, window `[0, 5]`.
pub fn ex_c() -> RelationalSystem {
    build(&["0", "1", "2", "3", "4", "∞"], 0, 5, |x, y| x.min(y) as i64)
}

/// Two points `a, b` at grade 3 in window `[3, 4]`.
pub fn ex_e() -> RelationalSystem {
    build(&["a", "b"], 3, 4, |_, _| 3)
}

/// A one-point system.
pub fn singleton() -> RelationalSystem {
    build(&["x"], 0, 0, |_, _| 0)
}

pub fn all() -> Vec<RelationalSystem> {
    vec![ex_a(), ex_b(), ex_c(), ex_e(), singleton()]
}

/// Index reversal on EX-A (`x ↦ 1 − x`).
pub fn reflection() -> SelfMap {
    SelfMap::new(vec![4, 3, 2, 1, 0])
}

/// Successor on EX-C: `0 → 1 → … → 4 → ∞ → ∞`.
pub fn successor() -> SelfMap {
    SelfMap::new(vec![1, 2, 3, 4, 5, 5])
}

/// The swap `a ↔ b` on EX-E.
pub fn swap() -> SelfMap {
    SelfMap::new(vec![1, 0])
}
