//! Exact branch-and-bound search for large subsets avoiding `r` points on a
//! `k`-flat, and the greedy general-position procedure.

use std::collections::HashMap;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::time::Instant;

use num_integer::Integer;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::budget::{binomial, Budget, DEFAULT_BUDGET};
use crate::combin::combinations;
use crate::error::{Error, Result};
use crate::geom::enumerate::first_flat_subset;
use crate::geom::FlatBasis;
use crate::{Point, Points};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchConfig {
    pub d: usize,
    pub k: usize,
    pub r: usize,
    pub n: u64,
    pub node_budget: u64,
    pub use_symmetry: bool,
    pub seed: u64,
}

impl SearchConfig {
    pub fn new(d: usize, k: usize, r: usize, n: u64) -> Self {
        SearchConfig {
            d,
            k,
            r,
            n,
            node_budget: DEFAULT_BUDGET,
            use_symmetry: true,
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.d == 0 || self.k == 0 || self.n == 0 || self.node_budget == 0 {
            return Err(Error::InvalidConfig("d, k, n and the node budget must be positive".into()));
        }
        if self.k >= self.d {
            return Err(Error::VacuousConstraint { k: self.k, d: self.d });
        }
        if self.r < self.k + 2 {
            return Err(Error::InvalidConfig(format!(
                "r = {} is below k + 2 = {}; any r points lie on a k-flat",
                self.r,
                self.k + 2
            )));
        }
        Ok(())
    }

    /// `(r-1) n^(d-k)`.
    pub fn trivial_bound(&self) -> u128 {
        (self.r as u128 - 1).saturating_mul((self.n as u128).saturating_pow((self.d - self.k) as u32))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchResult {
    pub best_set: Points,
    /// The search tree was exhausted within the node budget.
    pub optimal: bool,
    pub nodes: u64,
    pub elapsed_ms: u64,
}

impl SearchResult {
    pub fn size(&self) -> usize {
        self.best_set.len()
    }
}

/// Largest subset of `[n]^d` with no `r` points on a `k`-flat.
pub fn max_grid_set(cfg: &SearchConfig) -> Result<SearchResult> {
    cfg.validate()?;
    let grid = Points::full_grid(cfg.d, cfg.n)?;
    let res = run(&grid, cfg.k, cfg.r, cfg.node_budget, cfg.use_symmetry, cfg.seed)?;
    assert!(
        res.size() as u128 <= cfg.trivial_bound(),
        "search result of size {} beats the covering bound {}",
        res.size(),
        cfg.trivial_bound()
    );
    Ok(res)
}

/// Largest subset of `v` with no `d+1` points on a hyperplane.
pub fn max_general_position_subset(v: &Points, node_budget: u64) -> Result<SearchResult> {
    let d = v.dim();
    run(v, d - 1, d + 1, node_budget, false, 0)
}

fn run(v: &Points, k: usize, r: usize, node_budget: u64, symmetry: bool, seed: u64) -> Result<SearchResult> {
    let start = Instant::now();
    let mut order: Vec<usize> = (0..v.len()).collect();
    if seed != 0 {
        order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    }
    let orbit_of: Vec<Vec<i64>> = if symmetry {
        v.iter().map(|p| orbit_key(p, v.side())).collect()
    } else {
        (0..v.len() as i64).map(|i| vec![i]).collect()
    };
    let nodes = Budget::new(node_budget);
    let problem = Problem::new(v.points(), k, r, &nodes);

    // branch i takes the i-th orbit representative and drops every point of
    // the earlier orbits; together with the empty set this covers all
    // solutions up to symmetry
    let mut seen: HashMap<&[i64], usize> = HashMap::new();
    let mut branches: Vec<(usize, usize)> = Vec::new();
    for &i in &order {
        let next = seen.len();
        let o = *seen.entry(orbit_of[i].as_slice()).or_insert(next);
        if o == next {
            branches.push((i, o));
        }
    }
    let orbit_rank: Vec<usize> = (0..v.len()).map(|i| seen[orbit_of[i].as_slice()]).collect();
    let branch = |&(rep, o): &(usize, usize)| -> (Option<Vec<usize>>, Result<()>) {
        let rest: Vec<usize> = order
            .iter()
            .copied()
            .filter(|&i| i != rep && orbit_rank[i] >= o)
            .collect();
        let mut chosen = vec![rep];
        let mut local = None;
        let res = problem
            .filter(&chosen[..0], rep, &rest)
            .and_then(|cand| problem.explore(&mut chosen, &cand, &mut local));
        (local, res)
    };
    let outcomes: Vec<(Option<Vec<usize>>, Result<()>)> = if rayon::current_num_threads() > 1 {
        branches.par_iter().map(branch).collect()
    } else {
        branches.iter().map(branch).collect()
    };

    let mut optimal = true;
    let mut best: Vec<usize> = Vec::new();
    for (local, res) in outcomes {
        match res {
            Ok(()) => {}
            Err(Error::BudgetExceeded { .. }) => optimal = false,
            Err(e) => return Err(e),
        }
        if let Some(s) = local.filter(|s| s.len() > best.len()) {
            best = s;
        }
    }
    if !optimal {
        log::warn!("search stopped after {} nodes; result is not certified optimal", nodes.used());
    }
    let best_set = v.select(&best);
    assert!(
        first_flat_subset(best_set.points(), r, k, &Budget::unlimited())?.is_none(),
        "search returned a set with {r} points on a {k}-flat"
    );
    Ok(SearchResult {
        best_set,
        optimal,
        nodes: nodes.used(),
        elapsed_ms: start.elapsed().as_millis() as u64,
    })
}

/// Orbit of a grid point under coordinate permutations and reflections.
fn orbit_key(p: &Point, side: u64) -> Vec<i64> {
    let mut key: Vec<i64> = p
        .coords()
        .iter()
        .map(|&c| c.min(side as i64 + 1 - c))
        .collect();
    key.sort_unstable();
    key
}

struct Problem<'a> {
    pts: &'a [Point],
    k: usize,
    r: usize,
    /// For each family of axis-parallel `k`-flats, the flat of every point.
    flat_of: Vec<Vec<usize>>,
    num_flats: Vec<usize>,
    nodes: &'a Budget,
    best: AtomicUsize,
}

impl<'a> Problem<'a> {
    fn new(pts: &'a [Point], k: usize, r: usize, nodes: &'a Budget) -> Self {
        let d = pts.first().map_or(0, |p| p.dim());
        let mut flat_of = Vec::new();
        let mut num_flats = Vec::new();
        if k < d {
            for free in combinations(d, k) {
                let mut ids: HashMap<Vec<i64>, usize> = HashMap::new();
                let of: Vec<usize> = pts
                    .iter()
                    .map(|p| {
                        let key: Vec<i64> = (0..d)
                            .filter(|a| !free.contains(a))
                            .map(|a| p.coords()[a])
                            .collect();
                        let next = ids.len();
                        *ids.entry(key).or_insert(next)
                    })
                    .collect();
                num_flats.push(ids.len());
                flat_of.push(of);
            }
        }
        Problem {
            pts,
            k,
            r,
            flat_of,
            num_flats,
            nodes,
            best: AtomicUsize::new(0),
        }
    }

    fn explore(&self, chosen: &mut Vec<usize>, cand: &[usize], local: &mut Option<Vec<usize>>) -> Result<()> {
        self.nodes.charge(1)?;
        if chosen.len() > local.as_ref().map_or(0, Vec::len) && chosen.len() > self.best.load(Ordering::Relaxed) {
            self.best.fetch_max(chosen.len(), Ordering::Relaxed);
            *local = Some(chosen.clone());
        }
        if cand.is_empty() {
            return Ok(());
        }
        let (bound, pick) = self.bound_and_pick(chosen, cand);
        if bound <= self.best.load(Ordering::Relaxed) {
            return Ok(());
        }
        let c = cand[pick];
        let rest: Vec<usize> = cand.iter().copied().filter(|&x| x != c).collect();
        let with_c = self.filter(chosen, c, &rest)?;
        chosen.push(c);
        let res = self.explore(chosen, &with_c, local);
        chosen.pop();
        res?;
        self.explore(chosen, &rest, local)
    }

    /// Upper bound on the best completion, and the position in `cand` of the
    /// branching point: the first candidate on the least populated flat of
    /// the family giving the bound.
    fn bound_and_pick(&self, chosen: &[usize], cand: &[usize]) -> (usize, usize) {
        let cap = self.r - 1;
        let mut best = (chosen.len() + cand.len(), 0);
        let mut best_family: Option<(usize, usize, Vec<usize>)> = None;
        for (f, of) in self.flat_of.iter().enumerate() {
            let mut load = vec![0usize; self.num_flats[f]];
            let mut free = vec![0usize; self.num_flats[f]];
            for &i in chosen {
                load[of[i]] += 1;
            }
            for &i in cand {
                free[of[i]] += 1;
            }
            let b: usize = load.iter().zip(&free).map(|(l, c)| (l + c).min(cap)).sum();
            if best_family.as_ref().map_or(true, |fam| b < fam.1) {
                best_family = Some((f, b, free));
            }
        }
        if let Some((f, b, free)) = best_family {
            best.0 = best.0.min(b);
            let target = (0..free.len())
                .filter(|&t| free[t] > 0)
                .min_by_key(|&t| (free[t], t))
                .expect("candidates lie on some flat");
            best.1 = cand
                .iter()
                .position(|&i| self.flat_of[f][i] == target)
                .expect("target flat has a candidate");
        }
        best
    }

    /// Candidates that stay admissible once `c` joins `chosen`.
    fn filter(&self, chosen: &[usize], c: usize, rest: &[usize]) -> Result<Vec<usize>> {
        let need = self.r - 2;
        if chosen.len() < need {
            return Ok(rest.to_vec());
        }
        if self.k == 1 {
            let mut on_line: HashMap<Vec<i64>, usize> = HashMap::new();
            for &s in chosen {
                *on_line.entry(direction(&self.pts[c], &self.pts[s])).or_insert(0) += 1;
            }
            return Ok(rest
                .iter()
                .copied()
                .filter(|&x| {
                    on_line
                        .get(&direction(&self.pts[c], &self.pts[x]))
                        .map_or(true, |&m| m < need)
                })
                .collect());
        }
        let mut out = Vec::with_capacity(rest.len());
        for &x in rest {
            let mut basis = FlatBasis::new(&self.pts[c])?;
            basis.push(&self.pts[x])?;
            if basis.rank() > self.k || !closes_flat(self.pts, chosen, &mut basis, 0, need, self.k)? {
                out.push(x);
            }
        }
        Ok(out)
    }
}

/// Primitive direction from `a` to `b`, with the first nonzero entry positive.
fn direction(a: &Point, b: &Point) -> Vec<i64> {
    let mut v: Vec<i64> = a.coords().iter().zip(b.coords()).map(|(x, y)| y - x).collect();
    let g = v.iter().fold(0i64, |g, &x| g.gcd(&x));
    let sign = v.iter().find(|&&x| x != 0).map_or(1, |x| x.signum());
    for x in &mut v {
        *x /= g * sign;
    }
    v
}

/// Whether `need` more points of `chosen[start..]` keep `basis` within rank `k`.
fn closes_flat(
    pts: &[Point],
    chosen: &[usize],
    basis: &mut FlatBasis,
    start: usize,
    need: usize,
    k: usize,
) -> Result<bool> {
    if need == 0 {
        return Ok(true);
    }
    if chosen.len() < start + need {
        return Ok(false);
    }
    for i in start..=chosen.len() - need {
        let grew = basis.push(&pts[chosen[i]])?;
        let hit = basis.rank() <= k && closes_flat(pts, chosen, basis, i + 1, need - 1, k)?;
        if grew {
            basis.pop();
        }
        if hit {
            return Ok(true);
        }
    }
    Ok(false)
}

/// The counting inequality `s C(|V'|, d) + |V'| >= N` for a maximal
/// general-position subset `V'` of `N` points with no `d+s` on a hyperplane.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GreedyCertificate {
    pub d: usize,
    pub s: usize,
    pub subset_size: usize,
    pub total: usize,
    pub lhs: u128,
    pub holds: bool,
}

/// Greedy maximal general-position subset in canonical point order.
pub fn greedy_general_position(
    v: &Points,
    d: usize,
    s: usize,
    budget: &Budget,
) -> Result<(Points, GreedyCertificate)> {
    if d == 0 || s == 0 {
        return Err(Error::InvalidConfig("d and s must be positive".into()));
    }
    if v.dim() != d {
        return Err(Error::DimensionMismatch(d, v.dim()));
    }
    if let Some(w) = first_flat_subset(v.points(), d + s, d - 1, budget)? {
        let pts: Vec<String> = w.iter().map(|&i| v.points()[i].to_string()).collect();
        return Err(Error::HypothesisViolated(format!(
            "{} points on a hyperplane: {}",
            d + s,
            pts.join(" ")
        )));
    }
    let pts = v.points();
    let mut chosen: Vec<usize> = Vec::new();
    for p in 0..pts.len() {
        budget.charge(1)?;
        let mut basis = FlatBasis::new(&pts[p])?;
        if !closes_flat(pts, &chosen, &mut basis, 0, d, d - 1)? {
            chosen.push(p);
        }
    }
    let m = chosen.len();
    let lhs = (s as u128) * binomial(m as u64, d as u64) + m as u128;
    let cert = GreedyCertificate {
        d,
        s,
        subset_size: m,
        total: v.len(),
        lhs,
        holds: lhs >= v.len() as u128,
    };
    assert!(cert.holds, "greedy certificate fails: {lhs} < {}", v.len());
    Ok((v.select(&chosen), cert))
}
