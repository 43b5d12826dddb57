//! Reference implementations used as test oracles. Each one is written
//! from the definitions, without touching the library's elimination or
//! enumeration code.

#![allow(dead_code)]

use gridpos_core::Point;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// All `r`-subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, r: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, r: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < r - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, r, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if r <= n {
        go(0, n, r, &mut Vec::new(), &mut out);
    }
    out
}

fn differences(points: &[Point]) -> Vec<Vec<i128>> {
    let base = points[0].coords();
    points[1..]
        .iter()
        .map(|p| p.coords().iter().zip(base).map(|(&a, &b)| a as i128 - b as i128).collect())
        .collect()
}

fn det(m: &[Vec<i128>]) -> i128 {
    match m.len() {
        0 => 1,
        1 => m[0][0],
        2 => m[0][0] * m[1][1] - m[0][1] * m[1][0],
        3 => {
            m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
                + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
        }
        s => (0..s)
            .map(|c| {
                let minor: Vec<Vec<i128>> = m[1..]
                    .iter()
                    .map(|row| row.iter().enumerate().filter(|&(j, _)| j != c).map(|(_, &x)| x).collect())
                    .collect();
                let sign = if c % 2 == 0 { 1 } else { -1 };
                sign * m[0][c] * det(&minor)
            })
            .sum(),
    }
}

/// Affine rank as the size of the largest nonzero minor of the difference
/// matrix.
pub fn minor_rank(points: &[Point]) -> usize {
    if points.len() <= 1 {
        return 0;
    }
    let rows = differences(points);
    let dim = rows[0].len();
    for s in (1..=rows.len().min(dim)).rev() {
        for rs in subsets(rows.len(), s) {
            for cs in subsets(dim, s) {
                let m: Vec<Vec<i128>> = rs.iter().map(|&i| cs.iter().map(|&j| rows[i][j]).collect()).collect();
                if det(&m) != 0 {
                    return s;
                }
            }
        }
    }
    0
}

/// Affine rank by Gaussian elimination over the rationals.
pub fn rational_rank(points: &[Point]) -> usize {
    if points.len() <= 1 {
        return 0;
    }
    let mut rows: Vec<Vec<BigRational>> = differences(points)
        .into_iter()
        .map(|r| r.into_iter().map(|x| BigRational::from_integer(BigInt::from(x))).collect())
        .collect();
    let dim = rows[0].len();
    let mut rank = 0;
    for col in 0..dim {
        let Some(piv) = (rank..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, piv);
        let p = rows[rank][col].clone();
        for i in 0..rows.len() {
            if i != rank && !rows[i][col].is_zero() {
                let f = &rows[i][col] / &p;
                for c in col..dim {
                    let sub = &f * &rows[rank][c];
                    rows[i][c] -= sub;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Non-degenerate by the definition: the tuple lies on a `k`-flat and no
/// `j`-subset with `3 <= j <= k+1` lies on a `(j-2)`-flat.
pub fn naive_nondegenerate(tuple: &[Point], k: usize, rank: fn(&[Point]) -> usize) -> bool {
    if rank(tuple) > k {
        return false;
    }
    for j in 3..=k + 1 {
        for s in subsets(tuple.len(), j) {
            let sub: Vec<Point> = s.iter().map(|&i| tuple[i].clone()).collect();
            if rank(&sub) <= j - 2 {
                return false;
            }
        }
    }
    true
}

/// Non-degenerate `(k+2)`-subsets of `points`, counted one subset at a time.
pub fn naive_census(points: &[Point], k: usize) -> u64 {
    let mut count = 0;
    let mut cur = Vec::with_capacity(k + 2);
    fn go(points: &[Point], k: usize, start: usize, cur: &mut Vec<Point>, count: &mut u64) {
        if cur.len() == k + 2 {
            if naive_nondegenerate(cur, k, minor_rank) {
                *count += 1;
            }
            return;
        }
        for i in start..points.len() {
            cur.push(points[i].clone());
            go(points, k, i + 1, cur, count);
            cur.pop();
        }
    }
    go(points, k, 0, &mut cur, &mut count);
    count
}

/// Every point of `[n]^d` in lexicographic order.
pub fn grid(d: usize, n: u64) -> Vec<Point> {
    let mut out = vec![Vec::new()];
    for _ in 0..d {
        out = out
            .into_iter()
            .flat_map(|p: Vec<i64>| {
                (1..=n as i64).map(move |c| {
                    let mut q = p.clone();
                    q.push(c);
                    q
                })
            })
            .collect();
    }
    out.into_iter().map(Point::new).collect()
}

/// Whether `values` solve `sum c_i x_i = 0` with a partition of the
/// positions into classes of equal values whose coefficients sum to zero,
/// found by trying every set partition.
pub fn trivial_by_partition_search(values: &[Point], coeffs: &[i64]) -> bool {
    fn go(i: usize, values: &[Point], coeffs: &[i64], classes: &mut Vec<Vec<usize>>) -> bool {
        if i == values.len() {
            return classes.iter().all(|c| {
                let same = c.iter().all(|&a| values[a] == values[c[0]]);
                let distinct = classes
                    .iter()
                    .filter(|o| o[0] != c[0])
                    .all(|o| values[o[0]] != values[c[0]]);
                same && distinct && c.iter().map(|&a| coeffs[a]).sum::<i64>() == 0
            });
        }
        for ci in 0..classes.len() {
            classes[ci].push(i);
            if go(i + 1, values, coeffs, classes) {
                return true;
            }
            classes[ci].pop();
        }
        classes.push(vec![i]);
        let found = go(i + 1, values, coeffs, classes);
        classes.pop();
        found
    }
    go(0, values, coeffs, &mut Vec::new())
}

/// Whether `sum c_i x_i = 0`.
pub fn is_solution(values: &[Point], coeffs: &[i64]) -> bool {
    let d = values[0].dim();
    (0..d).all(|j| values.iter().zip(coeffs).map(|(v, &c)| c * v.coords()[j]).sum::<i64>() == 0)
}

/// Looks for a nontrivial solution by trying every assignment of `v` to the
/// positions.
pub fn naive_has_nontrivial(v: &[Point], coeffs: &[i64]) -> bool {
    let g = coeffs.len();
    let mut idx = vec![0usize; g];
    loop {
        let values: Vec<Point> = idx.iter().map(|&i| v[i].clone()).collect();
        if is_solution(&values, coeffs) && !trivial_by_partition_search(&values, coeffs) {
            return true;
        }
        let mut pos = g;
        loop {
            if pos == 0 {
                return false;
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < v.len() {
                break;
            }
            idx[pos] = 0;
        }
    }
}

pub fn one() -> BigRational {
    BigRational::one()
}
