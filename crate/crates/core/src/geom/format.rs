//! Point-set text format.
//!
//! ```text
//! # optional comments
//! d n
//! x_1 ... x_d
//! ...
//! ```
//!
//! Blank lines and lines starting with `#` are ignored. Writing emits the
//! header and the points in canonical order, one per line, single spaces,
//! trailing newline; a canonical file survives a read/write cycle
//! byte-for-byte. One-dimensional sets may also be given as bare integers,
//! one per line.

use std::fmt::Write as _;

use super::point::{Coord, LatticePoint, PointSet};
use crate::error::{Error, Result};

/// A parsed file and any non-fatal observations about it.
#[derive(Debug, Clone)]
pub struct Parsed<T = i64> {
    pub set: PointSet<T>,
    pub warnings: Vec<String>,
}

fn data_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let t = l.trim();
        (!t.is_empty() && !t.starts_with('#')).then_some((i + 1, t))
    })
}

fn parse_num<V: std::str::FromStr>(tok: &str, line: usize, what: &str) -> Result<V> {
    tok.parse().map_err(|_| Error::Parse {
        line,
        msg: format!("invalid {what} {tok:?}"),
    })
}

/// Reads the shared point-set format.
pub fn parse_point_set<T: Coord>(text: &str) -> Result<Parsed<T>> {
    let mut lines = data_lines(text);
    let (hline, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        msg: "missing \"d n\" header".into(),
    })?;
    let toks: Vec<&str> = header.split_whitespace().collect();
    if toks.len() != 2 {
        return Err(Error::Parse {
            line: hline,
            msg: format!("header must be \"d n\", found {header:?}"),
        });
    }
    let dim: usize = parse_num(toks[0], hline, "dimension")?;
    let side: u64 = parse_num(toks[1], hline, "side length")?;
    if dim == 0 || side == 0 {
        return Err(Error::Parse {
            line: hline,
            msg: "d and n must be positive".into(),
        });
    }
    let hi = T::from(side).ok_or(Error::ArithmeticOverflow)?;
    let mut points = Vec::new();
    let mut lines_of = Vec::new();
    for (line, l) in lines {
        let coords = l
            .split_whitespace()
            .map(|t| parse_num::<T>(t, line, "coordinate"))
            .collect::<Result<Vec<T>>>()?;
        if coords.len() != dim {
            return Err(Error::Parse {
                line,
                msg: format!("expected {dim} coordinates, found {}", coords.len()),
            });
        }
        if let Some((pos, c)) = coords
            .iter()
            .enumerate()
            .find(|(_, &c)| c < T::one() || c > hi)
        {
            return Err(Error::Parse {
                line,
                msg: format!("coordinate {} = {c} outside [1, {side}]", pos + 1),
            });
        }
        points.push(LatticePoint::new(coords));
        lines_of.push(line);
    }
    finish(dim, side, points, lines_of)
}

fn finish<T: Coord>(
    dim: usize,
    side: u64,
    points: Vec<LatticePoint<T>>,
    lines_of: Vec<usize>,
) -> Result<Parsed<T>> {
    let mut warnings = Vec::new();
    if points.windows(2).any(|w| w[0] >= w[1]) {
        let mut order: Vec<usize> = (0..points.len()).collect();
        order.sort_by(|&a, &b| points[a].cmp(&points[b]));
        if let Some(w) = order.windows(2).find(|w| points[w[0]] == points[w[1]]) {
            return Err(Error::Parse {
                line: lines_of[w[0].max(w[1])],
                msg: format!("duplicate point {}", points[w[0]]),
            });
        }
        warnings.push("points were not in canonical order; sorted lexicographically".into());
    }
    Ok(Parsed {
        set: PointSet::new(dim, side, points)?,
        warnings,
    })
}

/// Reads bare integers, one per line, as a subset of `[max]^1`.
pub fn parse_integer_list<T: Coord>(text: &str) -> Result<Parsed<T>> {
    let mut points = Vec::new();
    let mut lines_of = Vec::new();
    for (line, l) in data_lines(text) {
        let v: T = parse_num(l, line, "integer")?;
        if v < T::one() {
            return Err(Error::Parse {
                line,
                msg: format!("value {v} outside [1, n]"),
            });
        }
        points.push(LatticePoint::new(vec![v]));
        lines_of.push(line);
    }
    let side = points
        .iter()
        .map(|p| p.coords()[0])
        .max()
        .and_then(|m| m.to_u64())
        .unwrap_or(1);
    finish(1, side, points, lines_of)
}

/// Accepts either format: a two-token first line selects the point-set
/// format, a one-token first line the integer list.
pub fn parse_any<T: Coord>(text: &str) -> Result<Parsed<T>> {
    match data_lines(text).next() {
        Some((_, l)) if l.split_whitespace().count() == 1 => parse_integer_list(text),
        _ => parse_point_set(text),
    }
}

/// Canonical text for a point set.
pub fn write_point_set<T: Coord>(set: &PointSet<T>) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{} {}", set.dim(), set.side());
    for p in set {
        let mut first = true;
        for c in p.coords() {
            if !first {
                out.push(' ');
            }
            first = false;
            let _ = write!(out, "{c}");
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_file_round_trips_bytewise() {
        let text = "2 3\n1 1\n1 3\n2 2\n";
        let parsed = parse_point_set::<i64>(text).unwrap();
        assert!(parsed.warnings.is_empty());
        assert_eq!(write_point_set(&parsed.set), text);
    }

    #[test]
    fn comments_are_dropped() {
        let text = "# three points\n2 3\n\n1 1\n# middle\n2 2\n";
        let parsed = parse_point_set::<i64>(text).unwrap();
        assert_eq!(write_point_set(&parsed.set), "2 3\n1 1\n2 2\n");
    }

    #[test]
    fn unsorted_input_is_canonicalized_with_warning() {
        let parsed = parse_point_set::<i64>("2 3\n2 2\n1 1\n").unwrap();
        assert_eq!(parsed.warnings.len(), 1);
        assert_eq!(write_point_set(&parsed.set), "2 3\n1 1\n2 2\n");
    }

    #[test]
    fn out_of_range_reports_position() {
        let err = parse_point_set::<i64>("2 3\n1 1\n1 4\n").unwrap_err();
        match err {
            Error::Parse { line, msg } => {
                assert_eq!(line, 3);
                assert!(msg.contains("coordinate 2"), "{msg}");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn malformed_lines() {
        assert!(matches!(
            parse_point_set::<i64>("2 3\n1 x\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_point_set::<i64>("2 3\n1 1 1\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_point_set::<i64>("2 3\n1 1\n2 2\n1 1\n"),
            Err(Error::Parse { line: 4, .. })
        ));
        assert!(parse_point_set::<i64>("").is_err());
    }

    #[test]
    fn integer_lists() {
        let parsed = parse_any::<i64>("1\n2\n5\n11\n").unwrap();
        assert_eq!(parsed.set.dim(), 1);
        assert_eq!(parsed.set.side(), 11);
        assert_eq!(parsed.set.len(), 4);
        let parsed = parse_any::<i64>("1 11\n1\n2\n").unwrap();
        assert_eq!(parsed.set.side(), 11);
    }
}
