//! Line-oriented text formats for systems, self-maps and distance matrices.
//!
//! ```text
//! gradedsystem v1        selfmap v1            distmatrix v1
//! points: 3              points: 3             points: 2
//! labels: p q r          map: 1 2 2            0 1/2
//! window: 0 6                                  0.5 0
//! grades:
//! - 1 0
//! 1 - 5
//! 0 5 -
//! ```
//!
//! Blank lines and lines starting with `#` are ignored. Serialization is
//! canonical: single spaces, no comments, trailing newline, `labels:` only
//! when they differ from the point indices.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::dynamics::SelfMap;
use crate::error::{Diagnostic, DiagnosticCode, Result};
use crate::grade::{Grade, GradeMatrix, Window};
use crate::system::RelationalSystem;

pub const SYSTEM_HEADER: &str = "gradedsystem v1";
pub const MAP_HEADER: &str = "selfmap v1";
pub const MATRIX_HEADER: &str = "distmatrix v1";

type Parsed<T> = std::result::Result<T, Diagnostic>;

#[derive(Debug, Clone, Copy)]
struct Token<'a> {
    col: usize,
    text: &'a str,
}

fn tokenize(line: &str, offset: usize) -> Vec<Token<'_>> {
    let mut out = Vec::new();
    let mut start = None;
    for (col, (i, c)) in line.char_indices().enumerate() {
        if c.is_whitespace() {
            if let Some((s, scol)) = start.take() {
                out.push(Token {
                    col: scol + offset,
                    text: &line[s..i],
                });
            }
        } else if start.is_none() {
            start = Some((i, col + 1));
        }
    }
    if let Some((s, scol)) = start {
        out.push(Token {
            col: scol + offset,
            text: &line[s..],
        });
    }
    out
}

struct Lines<'a> {
    inner: std::iter::Peekable<Box<dyn Iterator<Item = (usize, &'a str)> + 'a>>,
    last: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        let it: Box<dyn Iterator<Item = (usize, &'a str)> + 'a> = Box::new(
            text.lines()
                .enumerate()
                .map(|(i, l)| (i + 1, l))
                .filter(|(_, l)| {
                    let t = l.trim();
                    !t.is_empty() && !t.starts_with('#')
                }),
        );
        Self {
            inner: it.peekable(),
            last: 0,
        }
    }

    fn next(&mut self, what: &str) -> Parsed<(usize, &'a str)> {
        match self.inner.next() {
            Some((n, l)) => {
                self.last = n;
                Ok((n, l))
            }
            None => Err(Diagnostic::new(
                DiagnosticCode::Syntax,
                self.last + 1,
                1,
                format!("unexpected end of file, expected {what}"),
            )),
        }
    }

    fn peek_key(&mut self, key: &str) -> bool {
        self.inner
            .peek()
            .is_some_and(|(_, l)| l.trim_start().starts_with(&format!("{key}:")))
    }

    fn header(&mut self, expected: &str) -> Parsed<()> {
        let (n, l) = self.next(expected)?;
        if l.trim() != expected {
            return Err(Diagnostic::new(
                DiagnosticCode::Header,
                n,
                1,
                format!("expected header `{expected}`"),
            ));
        }
        Ok(())
    }

    /// A `key: tokens…` line.
    fn keyed(&mut self, key: &str) -> Parsed<(usize, Vec<Token<'a>>)> {
        let (n, l) = self.next(&format!("`{key}:`"))?;
        let lead = l.len() - l.trim_start().len();
        let rest = &l[lead..];
        let Some(after) = rest.strip_prefix(key).and_then(|r| r.strip_prefix(':')) else {
            return Err(Diagnostic::new(
                DiagnosticCode::Syntax,
                n,
                lead + 1,
                format!("expected `{key}:`"),
            ));
        };
        let offset = l[..lead].chars().count() + key.chars().count() + 1;
        Ok((n, tokenize(after, offset)))
    }

    fn finish(&mut self) -> Parsed<()> {
        match self.inner.next() {
            None => Ok(()),
            Some((n, _)) => Err(Diagnostic::new(
                DiagnosticCode::Dimension,
                n,
                1,
                "unexpected trailing content",
            )),
        }
    }
}

fn parse_int<T: std::str::FromStr>(line: usize, tok: Token<'_>, what: &str) -> Parsed<T> {
    tok.text.parse().map_err(|_| {
        Diagnostic::new(
            DiagnosticCode::Syntax,
            line,
            tok.col,
            format!("expected {what}, found `{}`", tok.text),
        )
    })
}

fn exactly<'a>(line: usize, toks: &[Token<'a>], count: usize, what: &str) -> Parsed<()> {
    if toks.len() != count {
        let col = toks.get(count).or(toks.last()).map_or(1, |t| t.col);
        return Err(Diagnostic::new(
            DiagnosticCode::Dimension,
            line,
            col,
            format!("expected {count} {what}, found {}", toks.len()),
        ));
    }
    Ok(())
}

fn points_line(lines: &mut Lines<'_>) -> Parsed<usize> {
    let (n, toks) = lines.keyed("points")?;
    exactly(n, &toks, 1, "value")?;
    parse_int(n, toks[0], "a point count")
}

pub fn parse_system(text: &str) -> Result<RelationalSystem> {
    Ok(parse_system_diag(text)?)
}

fn parse_system_diag(text: &str) -> Parsed<RelationalSystem> {
    let mut lines = Lines::new(text);
    lines.header(SYSTEM_HEADER)?;
    let n = points_line(&mut lines)?;

    let labels = if lines.peek_key("labels") {
        let (ln, toks) = lines.keyed("labels")?;
        exactly(ln, &toks, n, "labels").map_err(|d| Diagnostic { code: DiagnosticCode::Labels, ..d })?;
        for (i, t) in toks.iter().enumerate() {
            if toks[..i].iter().any(|o| o.text == t.text) {
                return Err(Diagnostic::new(
                    DiagnosticCode::Labels,
                    ln,
                    t.col,
                    format!("duplicate label `{}`", t.text),
                ));
            }
        }
        toks.iter().map(|t| t.text.to_string()).collect()
    } else {
        crate::system::default_labels(n)
    };

    let (wn, toks) = lines.keyed("window")?;
    exactly(wn, &toks, 2, "window bounds")?;
    let lo: i64 = parse_int(wn, toks[0], "an integer")?;
    let hi: i64 = parse_int(wn, toks[1], "an integer")?;
    let window = Window::new(lo, hi).map_err(|_| {
        Diagnostic::new(DiagnosticCode::Range, wn, toks[0].col, format!("window [{lo}, {hi}] is empty"))
    })?;

    let (gn, toks) = lines.keyed("grades")?;
    exactly(gn, &toks, 0, "values after `grades:`")?;

    let mut rows: Vec<Vec<Grade>> = Vec::with_capacity(n);
    let mut cells: Vec<Vec<(usize, usize)>> = Vec::with_capacity(n);
    for x in 0..n {
        let (ln, l) = lines.next(&format!("grade row {}", x + 1))?;
        let toks = tokenize(l, 0);
        exactly(ln, &toks, n, "entries")?;
        let mut row = Vec::with_capacity(n);
        for (y, t) in toks.iter().enumerate() {
            let g = if t.text == "-" {
                if x != y {
                    return Err(Diagnostic::new(
                        DiagnosticCode::Diagonal,
                        ln,
                        t.col,
                        format!("`-` is only allowed on the diagonal, found at ({x},{y})"),
                    ));
                }
                Grade::Top
            } else {
                let v: i64 = parse_int(ln, *t, "an integer or `-`")?;
                if x == y {
                    return Err(Diagnostic::new(
                        DiagnosticCode::Diagonal,
                        ln,
                        t.col,
                        format!("diagonal entry ({x},{x}) must be `-`"),
                    ));
                }
                if v < window.floor() || v > window.hi {
                    return Err(Diagnostic::new(
                        DiagnosticCode::Range,
                        ln,
                        t.col,
                        format!("grade {v} at ({x},{y}) outside [{}, {}]", window.floor(), window.hi),
                    ));
                }
                Grade::Level(v)
            };
            row.push(g);
        }
        rows.push(row);
        cells.push(toks.iter().map(|t| (ln, t.col)).collect());
    }
    for x in 0..n {
        for y in 0..x {
            if rows[x][y] != rows[y][x] {
                let (ln, col) = cells[x][y];
                return Err(Diagnostic::new(
                    DiagnosticCode::Symmetry,
                    ln,
                    col,
                    format!(
                        "({x},{y}) = {} but ({y},{x}) = {}",
                        rows[x][y], rows[y][x]
                    ),
                ));
            }
        }
    }
    lines.finish()?;

    let grades = GradeMatrix::from_rows(&rows, window)
        .map_err(|e| Diagnostic::new(DiagnosticCode::Syntax, gn, 1, e.to_string()))?;
    RelationalSystem::new(labels, window, grades)
        .map_err(|e| Diagnostic::new(DiagnosticCode::Labels, 1, 1, e.to_string()))
}

pub fn write_system(sys: &RelationalSystem) -> String {
    let mut s = String::new();
    let w = sys.window();
    writeln!(s, "{SYSTEM_HEADER}").unwrap();
    writeln!(s, "points: {}", sys.len()).unwrap();
    if !sys.has_default_labels() {
        writeln!(s, "labels: {}", sys.labels().join(" ")).unwrap();
    }
    writeln!(s, "window: {} {}", w.lo, w.hi).unwrap();
    writeln!(s, "grades:").unwrap();
    for x in sys.points() {
        let row: Vec<String> = sys
            .points()
            .map(|y| match sys.grade(x, y) {
                Grade::Top => "-".to_string(),
                Grade::Level(g) => g.to_string(),
            })
            .collect();
        writeln!(s, "{}", row.join(" ")).unwrap();
    }
    s
}

pub fn parse_map(text: &str) -> Result<SelfMap> {
    Ok(parse_map_diag(text)?)
}

fn parse_map_diag(text: &str) -> Parsed<SelfMap> {
    let mut lines = Lines::new(text);
    lines.header(MAP_HEADER)?;
    let n = points_line(&mut lines)?;
    let (ln, toks) = lines.keyed("map")?;
    exactly(ln, &toks, n, "images")?;
    let mut image = Vec::with_capacity(n);
    for t in &toks {
        let i: usize = parse_int(ln, *t, "a zero-based index")?;
        if i >= n {
            return Err(Diagnostic::new(
                DiagnosticCode::Range,
                ln,
                t.col,
                format!("image {i} out of range for {n} points"),
            ));
        }
        image.push(i);
    }
    lines.finish()?;
    Ok(SelfMap::new(image))
}

pub fn write_map(t: &SelfMap) -> String {
    let image: Vec<String> = t.image().iter().map(usize::to_string).collect();
    format!("{MAP_HEADER}\npoints: {}\nmap: {}\n", t.len(), image.join(" "))
}

/// Exact nonnegative rational from `p`, `p/q` or a decimal literal.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let value = if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.parse().ok()?;
        let q: BigInt = q.parse().ok()?;
        if q.is_zero() {
            return None;
        }
        BigRational::new(p, q)
    } else if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        if int.is_empty() || !int.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let digits: BigInt = format!("{int}{frac}").parse().ok()?;
        BigRational::new(digits, BigInt::from(10u32).pow(frac.len() as u32))
    } else {
        BigRational::from_integer(s.parse().ok()?)
    };
    (!value.is_negative()).then_some(value)
}

pub fn parse_matrix(text: &str) -> Result<Vec<Vec<BigRational>>> {
    Ok(parse_matrix_diag(text)?)
}

fn parse_matrix_diag(text: &str) -> Parsed<Vec<Vec<BigRational>>> {
    let mut lines = Lines::new(text);
    lines.header(MATRIX_HEADER)?;
    let n = points_line(&mut lines)?;
    let mut rows = Vec::with_capacity(n);
    let mut cells = Vec::with_capacity(n);
    for x in 0..n {
        let (ln, l) = lines.next(&format!("matrix row {}", x + 1))?;
        let toks = tokenize(l, 0);
        exactly(ln, &toks, n, "entries")?;
        let mut row = Vec::with_capacity(n);
        for (y, t) in toks.iter().enumerate() {
            let v = parse_rational(t.text).ok_or_else(|| {
                Diagnostic::new(
                    DiagnosticCode::Syntax,
                    ln,
                    t.col,
                    format!("expected a nonnegative rational, found `{}`", t.text),
                )
            })?;
            if x == y && !v.is_zero() {
                return Err(Diagnostic::new(
                    DiagnosticCode::Diagonal,
                    ln,
                    t.col,
                    format!("diagonal entry ({x},{x}) must be 0"),
                ));
            }
            row.push(v);
        }
        rows.push(row);
        cells.push(toks.iter().map(|t| (ln, t.col)).collect::<Vec<_>>());
    }
    for x in 0..n {
        for y in 0..x {
            if rows[x][y] != rows[y][x] {
                let (ln, col) = cells[x][y];
                return Err(Diagnostic::new(
                    DiagnosticCode::Symmetry,
                    ln,
                    col,
                    format!("({x},{y}) = {} but ({y},{x}) = {}", rows[x][y], rows[y][x]),
                ));
            }
        }
    }
    lines.finish()?;
    Ok(rows)
}

fn write_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn write_matrix(d: &[Vec<BigRational>]) -> String {
    let mut s = format!("{MATRIX_HEADER}\npoints: {}\n", d.len());
    for row in d {
        let cells: Vec<String> = row.iter().map(write_rational).collect();
        writeln!(s, "{}", cells.join(" ")).unwrap();
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::fixtures;

    fn diag(r: Result<impl std::fmt::Debug>) -> Diagnostic {
        match r {
            Err(Error::Parse(d)) => d,
            other => panic!("expected diagnostic, got {other:?}"),
        }
    }

    #[test]
    fn fixtures_round_trip() {
        for sys in fixtures::all() {
            let text = write_system(&sys);
            let back = parse_system(&text).unwrap();
            assert_eq!(back, sys);
            assert_eq!(write_system(&back), text);
        }
        for t in [fixtures::reflection(), fixtures::successor(), fixtures::swap()] {
            let text = write_map(&t);
            assert_eq!(parse_map(&text).unwrap(), t);
        }
    }

    #[test]
    fn ex_b_text() {
        let text = write_system(&fixtures::ex_b());
        assert_eq!(
            text,
            "gradedsystem v1\npoints: 3\nlabels: p q r\nwindow: 0 6\ngrades:\n- 1 0\n1 - 5\n0 5 -\n"
        );
    }

    #[test]
    fn comments_and_spacing_are_tolerated() {
        let text = "# comment\ngradedsystem v1\n\npoints:  2\nwindow: 3   4\ngrades:\n-   3\n3 -\n";
        let sys = parse_system(text).unwrap();
        assert_eq!(sys.grade(0, 1), Grade::Level(3));
        assert_eq!(write_system(&sys), "gradedsystem v1\npoints: 2\nwindow: 3 4\ngrades:\n- 3\n3 -\n");
    }

    #[test]
    fn range_diagnostic_points_at_entry() {
        let text = "gradedsystem v1\npoints: 2\nwindow: 0 3\ngrades:\n- 7\n7 -\n";
        let d = diag(parse_system(text));
        assert_eq!(d.code, DiagnosticCode::Range);
        assert_eq!((d.line, d.column), (5, 3));
    }

    #[test]
    fn symmetry_diagnostic_names_both_cells() {
        let text = "gradedsystem v1\npoints: 2\nwindow: 0 3\ngrades:\n- 1\n2 -\n";
        let d = diag(parse_system(text));
        assert_eq!(d.code, DiagnosticCode::Symmetry);
        assert_eq!(d.line, 6);
        assert!(d.message.contains("(1,0)") && d.message.contains("(0,1)"));
    }

    #[test]
    fn other_diagnostics() {
        let cases = [
            ("graded v2\n", DiagnosticCode::Header),
            ("gradedsystem v1\npoints: x\n", DiagnosticCode::Syntax),
            ("gradedsystem v1\npoints: 2\nwindow: 0 3\ngrades:\n- 1\n", DiagnosticCode::Syntax),
            ("gradedsystem v1\npoints: 2\nwindow: 0 3\ngrades:\n- 1 1\n1 -\n", DiagnosticCode::Dimension),
            ("gradedsystem v1\npoints: 2\nwindow: 0 3\ngrades:\n0 1\n1 -\n", DiagnosticCode::Diagonal),
            ("gradedsystem v1\npoints: 2\nlabels: a a\nwindow: 0 3\ngrades:\n- 1\n1 -\n", DiagnosticCode::Labels),
            ("gradedsystem v1\npoints: 2\nlabels: a\nwindow: 0 3\ngrades:\n- 1\n1 -\n", DiagnosticCode::Labels),
            ("gradedsystem v1\npoints: 2\nwindow: 3 0\ngrades:\n- 1\n1 -\n", DiagnosticCode::Range),
        ];
        for (text, code) in cases {
            assert_eq!(diag(parse_system(text)).code, code, "{text}");
        }
        assert_eq!(diag(parse_map("selfmap v1\npoints: 2\nmap: 0 2\n")).code, DiagnosticCode::Range);
        assert_eq!(diag(parse_map("selfmap v1\npoints: 2\nmap: 0\n")).code, DiagnosticCode::Dimension);
    }

    #[test]
    fn rationals_are_exact() {
        let half = BigRational::new(1.into(), 2.into());
        assert_eq!(parse_rational("0.5"), Some(half.clone()));
        assert_eq!(parse_rational("2/4"), Some(half));
        assert_eq!(parse_rational("0.1"), Some(BigRational::new(1.into(), 10.into())));
        assert_eq!(parse_rational("3"), Some(BigRational::from_integer(3.into())));
        assert_eq!(parse_rational("-1"), None);
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational(".5"), None);
        assert_eq!(parse_rational("1e3"), None);
    }

    #[test]
    fn matrix_round_trip_and_checks() {
        let text = "distmatrix v1\npoints: 3\n0 1 1/2\n1 0 17/32\n1/2 17/32 0\n";
        let m = parse_matrix(text).unwrap();
        assert_eq!(write_matrix(&m), text);
        let asym = "distmatrix v1\npoints: 2\n0 1\n0.5 0\n";
        assert_eq!(diag(parse_matrix(asym)).code, DiagnosticCode::Symmetry);
        let diag_bad = "distmatrix v1\npoints: 2\n1 1\n1 0\n";
        assert_eq!(diag(parse_matrix(diag_bad)).code, DiagnosticCode::Diagonal);
    }
}
