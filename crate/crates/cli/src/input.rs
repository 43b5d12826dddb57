use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::Args;
use gridpos_core::geom::format::parse_any;
use gridpos_core::{Point, Points};
use serde::Serialize;

use crate::UsageError;

/// Where a point set comes from: a file, an inline list, or a full grid.
#[derive(Args, Clone, Debug, Serialize)]
pub struct SetSource {
    /// Point-set file (`d n` header) or integers one per line
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Inline points, e.g. "1,2,5,11" or "1 1;2 3"
    #[arg(long)]
    pub set: Option<String>,
    /// Grid dimension (full grid when no set is given)
    #[arg(long)]
    pub d: Option<usize>,
    /// Grid side
    #[arg(long)]
    pub n: Option<u64>,
}

impl SetSource {
    pub fn load(&self) -> Result<Points> {
        if let Some(path) = &self.input {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            let parsed = parse_any::<i64>(&text)?;
            for w in &parsed.warnings {
                log::warn!("{}: {w}", path.display());
            }
            return Ok(parsed.set);
        }
        if let Some(s) = &self.set {
            let pts = parse_vectors(s)?;
            let dim = pts.first().map_or(1, Point::dim);
            let side = pts
                .iter()
                .flat_map(|p| p.coords().iter().copied())
                .max()
                .unwrap_or(1)
                .max(1) as u64;
            let side = self.n.unwrap_or(side);
            return Ok(Points::new(dim, side, pts)?);
        }
        match (self.d, self.n) {
            (Some(d), Some(n)) => Ok(Points::full_grid(d, n)?),
            _ => Err(UsageError("give --input, --set, or both --d and --n".into()).into()),
        }
    }

    pub fn path(&self) -> Option<String> {
        self.input.as_ref().map(|p| p.display().to_string())
    }
}

/// Vectors separated by `;` or `,`, coordinates by whitespace.
pub fn parse_vectors(s: &str) -> Result<Vec<Point>> {
    s.split([';', ','])
        .map(str::trim)
        .filter(|v| !v.is_empty())
        .map(|v| {
            let coords = v
                .split_whitespace()
                .map(|c| c.parse::<i64>().map_err(|_| UsageError(format!("bad coordinate {c:?} in {v:?}"))))
                .collect::<std::result::Result<Vec<_>, _>>()?;
            Ok(Point::new(coords))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vector_lists() {
        let v = parse_vectors("1,2, 5 ,11").unwrap();
        assert_eq!(v.len(), 4);
        assert_eq!(v[2], Point::from([5]));
        let w = parse_vectors("0 1; -2 3").unwrap();
        assert_eq!(w, vec![Point::from([0, 1]), Point::from([-2, 3])]);
        assert!(parse_vectors("1 x").is_err());
    }
}
