//! Small combinatorial helpers.

use std::ops::ControlFlow;

/// Calls `f` on every `r`-subset of `0..n` as an increasing index slice, in
/// lexicographic order.
pub fn for_each_combination<F>(n: usize, r: usize, mut f: F) -> ControlFlow<()>
where
    F: FnMut(&[usize]) -> ControlFlow<()>,
{
    if r > n {
        return ControlFlow::Continue(());
    }
    let mut idx: Vec<usize> = (0..r).collect();
    loop {
        f(&idx)?;
        let mut pos = r;
        loop {
            if pos == 0 {
                return ControlFlow::Continue(());
            }
            pos -= 1;
            if idx[pos] < n - r + pos {
                idx[pos] += 1;
                for q in pos + 1..r {
                    idx[q] = idx[q - 1] + 1;
                }
                break;
            }
        }
    }
}

/// All `r`-subsets of `0..n`.
pub fn combinations(n: usize, r: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let _ = for_each_combination(n, r, |c| {
        out.push(c.to_vec());
        ControlFlow::Continue(())
    });
    out
}

/// Size of the intersection of two increasing slices.
pub fn sorted_intersection_len<T: Ord>(a: &[T], b: &[T]) -> usize {
    let (mut i, mut j, mut n) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                n += 1;
                i += 1;
                j += 1;
            }
        }
    }
    n
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn combination_counts() {
        assert_eq!(combinations(5, 2).len(), 10);
        assert_eq!(combinations(4, 0), vec![Vec::<usize>::new()]);
        assert!(combinations(2, 3).is_empty());
        assert_eq!(combinations(3, 2), vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
    }

    #[test]
    fn intersections() {
        assert_eq!(sorted_intersection_len(&[1, 3, 5], &[2, 3, 5, 7]), 2);
        assert_eq!(sorted_intersection_len::<u8>(&[], &[1]), 0);
    }
}
