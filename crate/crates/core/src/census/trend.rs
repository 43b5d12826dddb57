use serde::Serialize;

use super::count_nondegenerate;
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::Points;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrendRow {
    pub n: u64,
    pub count: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrendTable {
    pub k: usize,
    pub d: usize,
    pub rows: Vec<TrendRow>,
    /// Least-squares slope of `ln count` against `ln n` over rows with a
    /// positive count; `None` with fewer than two such rows.
    pub slope: Option<f64>,
    /// `(k+1) d`, the growth exponent of the supersaturation lower bound on
    /// the full grid.
    pub reference_exponent: usize,
}

/// Exhaustive non-degenerate tuple counts on full grids `[n]^d`.
pub fn supersaturation_trend(k: usize, d: usize, n_list: &[u64], budget: &Budget) -> Result<TrendTable> {
    if k == 0 || k % 2 == 1 {
        return Err(Error::InvalidConfig(format!("trend needs even positive k, got {k}")));
    }
    let rows = n_list
        .iter()
        .map(|&n| {
            let v = Points::full_grid(d, n)?;
            Ok(TrendRow {
                n,
                count: count_nondegenerate(&v, k, budget)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(TrendTable {
        k,
        d,
        slope: log_log_slope(&rows),
        rows,
        reference_exponent: (k + 1) * d,
    })
}

pub fn log_log_slope(rows: &[TrendRow]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.count > 0 && r.n > 0)
        .map(|r| ((r.n as f64).ln(), (r.count as f64).ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let m = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_increase_with_n() {
        let t = supersaturation_trend(2, 2, &[2, 3, 4], &Budget::unlimited()).unwrap();
        let c: Vec<u64> = t.rows.iter().map(|r| r.count).collect();
        assert!(c.windows(2).all(|w| w[0] < w[1]), "{c:?}");
        assert_eq!(t.reference_exponent, 6);
    }

    #[test]
    fn empty_list() {
        let t = supersaturation_trend(2, 2, &[], &Budget::unlimited()).unwrap();
        assert!(t.rows.is_empty());
        assert_eq!(t.slope, None);
    }

    #[test]
    fn slope_of_exact_power() {
        let rows: Vec<TrendRow> = (1..6u64).map(|n| TrendRow { n, count: n.pow(3) }).collect();
        assert!((log_log_slope(&rows).unwrap() - 3.0).abs() < 1e-12);
    }
}
