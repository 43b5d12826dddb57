use std::path::{Path, PathBuf};

use anyhow::Result;
use clap::{Args, Subcommand, ValueEnum};
use gridpos_core::additive::{
    bg_check, check_cs, dissect, multifold_bound, multifold_bound_for_k, phi, stratify, sum_profile, verify_eq5,
    PhiTable,
};
use gridpos_core::census::{census, container_params, degree_profile, supersaturation_trend, CensusMode};
use gridpos_core::constructions::{deletion_construct, moment_curve, C6Mode, DeletionConfig, Probability};
use gridpos_core::exact::{parse_ratio, ratio, ratio_string};
use gridpos_core::geom::enumerate::first_flat_subset;
use gridpos_core::geom::format::write_point_set;
use gridpos_core::search::{greedy_general_position, max_general_position_subset, max_grid_set, SearchConfig};
use gridpos_core::{Budget, Point};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::input::{parse_vectors, SetSource};
use crate::report::{Output, Status};
use crate::UsageError;

#[derive(Subcommand, Clone, Debug, Serialize)]
#[serde(untagged)]
pub enum Command {
    /// Count equal-sum pairs and non-degenerate (k+2)-tuples on k-flats
    Census(CensusArgs),
    /// Maximum degrees of the non-degenerate tuple hypergraph
    Degree(DegreeArgs),
    /// Container functional Delta(H, tau) and its hypotheses
    Delta(DeltaArgs),
    /// Largest subset of [n]^d with no r points on a k-flat
    Search(SearchArgs),
    /// Largest general-position subset of a point set
    GpSubset(GpArgs),
    /// Greedy maximal general-position subset with its counting certificate
    GreedyGp(GreedyArgs),
    /// Modular moment curve in [p]^d
    MomentCurve(MomentArgs),
    /// Random sampling followed by deletion of flat tuples
    Deletion(DeletionArgs),
    /// m-fold B_g check
    BgVerify(BgArgs),
    /// Two-coefficient family check behind the multifold bound
    Eq5Verify(Eq5Args),
    /// Difference counts, or stratified counts over a residue dissection
    Phi(PhiArgs),
    /// Sumset lemma check on given or random sets
    CsCheck(CsArgs),
    /// Exhaustive non-degenerate counts on growing grids
    Trend(TrendArgs),
    /// Exponents of the multifold and covering bounds
    Bounds(BoundsArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeArg {
    Pair,
    Exhaustive,
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Toggle {
    On,
    Off,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum C6Arg {
    Exact,
    Estimate,
}

#[derive(Args, Clone, Debug, Serialize)]
pub struct CensusArgs {
    #[command(flatten)]
    pub src: SetSource,
    #[arg(long)]
    pub k: usize,
    /// Defaults to both for even k and exhaustive for odd k
    #[arg(long, value_enum)]
    pub mode: Option<ModeArg>,
    /// Also compute the degree profile
    #[arg(long)]
    pub profile: bool,
}

#[derive(Args, Clone, Debug, Serialize)]
pub struct DegreeArgs {
    #[command(flatten)]
    pub src: SetSource,
    #[arg(long)]
    pub k: usize,
}

#[derive(Args, Clone, Debug, Serialize)]
pub struct DeltaArgs {
    #[command(flatten)]
    pub src: SetSource,
    #[arg(long)]
    pub k: usize,
    /// Rational in (0, 1/2), e.g. 1/1000
    #[arg(long)]
    pub tau: String,
    #[arg(long, default_value = "1/4")]
    pub epsilon: String,
}

#[derive(Args, Clone, Debug, Serialize)]
pub struct SearchArgs {
    #[arg(long)]
    pub d: usize,
    #[arg(long)]
    pub n: u64,
    #[arg(long)]
    pub k: usize,
    /// Forbidden number of points on a k-flat (default k + 2)
    #[arg(long)]
    pub r: Option<usize>,
    #[arg(long, value_enum, default_value_t = Toggle::On)]
    pub symmetry: Toggle,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Also write the best set in point-set format here
    #[arg(long)]
    pub points_out: Option<PathBuf>,
}

#[derive(Args, Clone, Debug, Serialize)]
pub struct GpArgs {
    #[command(flatten)]
    pub src: SetSource,
    #[arg(long)]
    pub points_out: Option<PathBuf>,
}

#[derive(Args, Clone, Debug, Serialize)]
pub struct GreedyArgs {
    #[command(flatten)]
    pub src: SetSource,
    /// The input has no d + s points on a hyperplane
    #[arg(long)]
    pub s: usize,
    #[arg(long)]
    pub points_out: Option<PathBuf>,
}

#[derive(Args, Clone, Debug, Serialize)]
pub struct MomentArgs {
    #[arg(long)]
    pub d: usize,
    #[arg(long)]
    pub p: u64,
    /// Skip the exhaustive hyperplane check
    #[arg(long)]
    pub no_verify: bool,
    #[arg(long)]
    pub points_out: Option<PathBuf>,
}

#[derive(Args, Clone, Debug, Serialize)]
pub struct DeletionArgs {
    #[arg(long)]
    pub d: usize,
    #[arg(long)]
    pub r: usize,
    #[arg(long)]
    pub s: usize,
    #[arg(long)]
    pub n: u64,
    /// Sampling probability as a rational, or "auto"
    #[arg(long, default_value = "auto")]
    pub p: String,
    #[arg(long, value_enum, default_value_t = C6Arg::Exact)]
    pub c6: C6Arg,
    /// Grid side for the tuple count in estimate mode
    #[arg(long)]
    pub estimate_side: Option<u64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1)]
    pub trials: usize,
    /// Also write the first trial's output set here
    #[arg(long)]
    pub points_out: Option<PathBuf>,
}

#[derive(Args, Clone, Debug, Serialize)]
pub struct BgArgs {
    #[command(flatten)]
    pub src: SetSource,
    #[arg(long, default_value_t = 2)]
    pub g: usize,
    #[arg(long, default_value_t = 1)]
    pub m: u64,
}

#[derive(Args, Clone, Debug, Serialize)]
pub struct Eq5Args {
    #[command(flatten)]
    pub src: SetSource,
    #[arg(long, default_value_t = 1)]
    pub r: usize,
    /// Override the coefficient bound floor(n^(d/(2rd+1)))
    #[arg(long)]
    pub m: Option<u64>,
}

#[derive(Args, Clone, Debug, Serialize)]
pub struct PhiArgs {
    /// Vectors of U, e.g. "0,1" or "0 0;1 2"
    #[arg(long)]
    pub u: Option<String>,
    /// Vectors of T (defaults to U)
    #[arg(long)]
    pub t: Option<String>,
    #[command(flatten)]
    pub src: SetSource,
    /// Subset size for the sums S_r (stratified mode)
    #[arg(long)]
    pub r: Option<usize>,
    /// Modulus of the dissection (stratified mode)
    #[arg(long, default_value_t = 1)]
    pub j: u64,
}

#[derive(Args, Clone, Debug, Serialize)]
pub struct CsArgs {
    #[arg(long)]
    pub u: Option<String>,
    #[arg(long)]
    pub t: Option<String>,
    /// Random instances when no sets are given
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 30)]
    pub max_size: usize,
    #[arg(long, default_value_t = 1)]
    pub dim: usize,
    /// Coordinates drawn from [-range, range]
    #[arg(long, default_value_t = 20)]
    pub range: i64,
}

#[derive(Args, Clone, Debug, Serialize)]
pub struct TrendArgs {
    #[arg(long)]
    pub k: usize,
    #[arg(long)]
    pub d: usize,
    /// Grid sides, e.g. "2,3,4,5"
    #[arg(long, value_delimiter = ',')]
    pub n_list: Vec<u64>,
}

#[derive(Args, Clone, Debug, Serialize)]
pub struct BoundsArgs {
    #[arg(long)]
    pub d: usize,
    /// Flat dimension; r = floor((k+2)/4)
    #[arg(long)]
    pub k: Option<usize>,
    /// Use this r directly instead of deriving it from k
    #[arg(long)]
    pub r: Option<usize>,
    #[arg(long)]
    pub n: Option<u64>,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Census(_) => "census",
            Command::Degree(_) => "degree",
            Command::Delta(_) => "delta",
            Command::Search(_) => "search",
            Command::GpSubset(_) => "gp-subset",
            Command::GreedyGp(_) => "greedy-gp",
            Command::MomentCurve(_) => "moment-curve",
            Command::Deletion(_) => "deletion",
            Command::BgVerify(_) => "bg-verify",
            Command::Eq5Verify(_) => "eq5-verify",
            Command::Phi(_) => "phi",
            Command::CsCheck(_) => "cs-check",
            Command::Trend(_) => "trend",
            Command::Bounds(_) => "bounds",
        }
    }

    pub fn params(&self) -> Value {
        serde_json::to_value(self).unwrap_or(Value::Null)
    }

    pub fn seed(&self) -> Option<u64> {
        match self {
            Command::Search(a) => Some(a.seed),
            Command::Deletion(a) => Some(a.seed),
            Command::CsCheck(a) => Some(a.seed),
            _ => None,
        }
    }

    pub fn input_path(&self) -> Option<String> {
        match self {
            Command::Census(a) => a.src.path(),
            Command::Degree(a) => a.src.path(),
            Command::Delta(a) => a.src.path(),
            Command::GpSubset(a) => a.src.path(),
            Command::GreedyGp(a) => a.src.path(),
            Command::BgVerify(a) => a.src.path(),
            Command::Eq5Verify(a) => a.src.path(),
            Command::Phi(a) => a.src.path(),
            _ => None,
        }
    }

    pub fn points_out(&self) -> Option<&Path> {
        match self {
            Command::Search(a) => a.points_out.as_deref(),
            Command::GpSubset(a) => a.points_out.as_deref(),
            Command::GreedyGp(a) => a.points_out.as_deref(),
            Command::MomentCurve(a) => a.points_out.as_deref(),
            Command::Deletion(a) => a.points_out.as_deref(),
            _ => None,
        }
    }
}

fn s<T: ToString>(x: T) -> String {
    x.to_string()
}

fn opt<T: ToString>(x: Option<T>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

fn point_text(p: &Point) -> String {
    p.coords().iter().map(i64::to_string).collect::<Vec<_>>().join(" ")
}

fn verdict(ok: bool) -> Status {
    if ok {
        Status::Ok
    } else {
        Status::VerificationFailed
    }
}

pub fn run(cmd: &Command, budget: &Budget) -> Result<Output> {
    match cmd {
        Command::Census(a) => run_census(a, budget),
        Command::Degree(a) => {
            let v = a.src.load()?;
            let p = degree_profile(&v, a.k, budget)?;
            let rows = p
                .bounds
                .iter()
                .map(|b| vec![s(b.ell), s(b.delta), s(&b.bound), s(b.holds)])
                .collect();
            Ok(Output::new(serde_json::to_value(&p)?, vec!["ell", "delta", "bound", "holds"], rows))
        }
        Command::Delta(a) => {
            let v = a.src.load()?;
            let tau = parse_ratio(&a.tau)?;
            let eps = parse_ratio(&a.epsilon)?;
            let p = degree_profile(&v, a.k, budget)?;
            let c = container_params(&p, &v, &tau, &eps)?;
            let row = vec![
                s(c.k),
                s(v.len()),
                s(p.num_edges),
                ratio_string(&c.tau),
                ratio_string(&c.delta_h_tau),
                ratio_string(&c.threshold),
                s(c.delta_condition_met),
                s(c.tau_condition_met),
            ];
            Ok(Output::new(
                json!({ "profile": p, "container": c }),
                vec![
                    "k",
                    "num_points",
                    "num_edges",
                    "tau",
                    "delta_h_tau",
                    "threshold",
                    "delta_condition_met",
                    "tau_condition_met",
                ],
                vec![row],
            ))
        }
        Command::Search(a) => {
            let r = a.r.unwrap_or(a.k + 2);
            let cfg = SearchConfig {
                d: a.d,
                k: a.k,
                r,
                n: a.n,
                node_budget: budget.limit(),
                use_symmetry: a.symmetry == Toggle::On,
                seed: a.seed,
            };
            let res = max_grid_set(&cfg)?;
            let text = write_point_set(&res.best_set);
            let row = vec![
                s(a.d),
                s(a.k),
                s(r),
                s(a.n),
                s(res.size()),
                s(res.optimal),
                s(res.nodes),
                s(cfg.trivial_bound()),
            ];
            let result = json!({
                "d": a.d, "k": a.k, "r": r, "n": a.n,
                "best_size": res.size(),
                "optimal": res.optimal,
                "nodes": res.nodes,
                "trivial_bound": cfg.trivial_bound().to_string(),
                "points": text,
            });
            let status = if res.optimal { Status::Ok } else { Status::BudgetExhausted };
            Ok(Output::new(
                result,
                vec!["d", "k", "r", "n", "best_size", "optimal", "nodes", "trivial_bound"],
                vec![row],
            )
            .status(status)
            .points(text))
        }
        Command::GpSubset(a) => {
            let v = a.src.load()?;
            let res = max_general_position_subset(&v, budget.limit())?;
            let text = write_point_set(&res.best_set);
            let row = vec![s(v.dim()), s(v.len()), s(res.size()), s(res.optimal), s(res.nodes)];
            let result = json!({
                "d": v.dim(),
                "num_points": v.len(),
                "best_size": res.size(),
                "optimal": res.optimal,
                "nodes": res.nodes,
                "points": text,
            });
            let status = if res.optimal { Status::Ok } else { Status::BudgetExhausted };
            Ok(Output::new(result, vec!["d", "num_points", "best_size", "optimal", "nodes"], vec![row])
                .status(status)
                .points(text))
        }
        Command::GreedyGp(a) => {
            let v = a.src.load()?;
            let (sub, cert) = greedy_general_position(&v, v.dim(), a.s, budget)?;
            let text = write_point_set(&sub);
            let row = vec![s(cert.d), s(cert.s), s(cert.subset_size), s(cert.total), s(cert.lhs), s(cert.holds)];
            let result = json!({
                "certificate": {
                    "d": cert.d, "s": cert.s, "subset_size": cert.subset_size,
                    "total": cert.total, "lhs": cert.lhs.to_string(), "holds": cert.holds,
                },
                "points": text,
            });
            Ok(Output::new(result, vec!["d", "s", "subset_size", "total", "lhs", "holds"], vec![row])
                .status(verdict(cert.holds))
                .points(text))
        }
        Command::MomentCurve(a) => {
            let c = moment_curve(a.d, a.p)?;
            let verified = if a.no_verify {
                None
            } else {
                Some(first_flat_subset(c.points(), a.d + 1, a.d - 1, budget)?.is_none())
            };
            let text = write_point_set(&c);
            let row = vec![s(a.d), s(a.p), s(c.len()), opt(verified)];
            let result = json!({
                "d": a.d, "p": a.p, "size": c.len(),
                "general_position": verified,
                "points": text,
            });
            Ok(Output::new(result, vec!["d", "p", "size", "general_position"], vec![row])
                .status(verdict(verified != Some(false)))
                .points(text))
        }
        Command::Deletion(a) => run_deletion(a, budget),
        Command::BgVerify(a) => {
            let v = a.src.load()?;
            let rep = bg_check(&v, a.g, a.m, budget)?;
            let w = rep.witness.as_ref();
            let row = vec![
                s(a.g),
                s(a.m),
                s(rep.holds),
                w.map(|w| w.coeffs.iter().map(i64::to_string).collect::<Vec<_>>().join(" "))
                    .unwrap_or_default(),
                w.map(|w| w.left.iter().map(point_text).collect::<Vec<_>>().join(";"))
                    .unwrap_or_default(),
                w.map(|w| w.right.iter().map(point_text).collect::<Vec<_>>().join(";"))
                    .unwrap_or_default(),
            ];
            Ok(Output::new(
                serde_json::to_value(&rep)?,
                vec!["g", "m", "holds", "coeffs", "left", "right"],
                vec![row],
            )
            .status(verdict(rep.holds)))
        }
        Command::Eq5Verify(a) => {
            let v = a.src.load()?;
            let rep = verify_eq5(&v, a.r, a.m, budget)?;
            let w = rep.witness.as_ref();
            let row = vec![
                s(a.r),
                s(rep.m),
                s(rep.holds),
                opt(w.map(|w| w.c1)),
                opt(w.map(|w| w.c2)),
                w.map(|w| w.solution.values.iter().map(point_text).collect::<Vec<_>>().join(";"))
                    .unwrap_or_default(),
            ];
            Ok(Output::new(
                serde_json::to_value(&rep)?,
                vec!["r", "m", "holds", "c1", "c2", "solution"],
                vec![row],
            )
            .status(verdict(rep.holds)))
        }
        Command::Phi(a) => run_phi(a, budget),
        Command::CsCheck(a) => run_cs(a),
        Command::Trend(a) => {
            let t = supersaturation_trend(a.k, a.d, &a.n_list, budget)?;
            let rows = t.rows.iter().map(|r| vec![s(r.n), s(r.count)]).collect();
            let result = json!({
                "k": t.k, "d": t.d,
                "rows": t.rows,
                "reference_exponent": t.reference_exponent,
                "slope": t.slope.map(|x| format!("{x:.6}")),
            });
            Ok(Output::new(result, vec!["n", "count"], rows))
        }
        Command::Bounds(a) => run_bounds(a),
    }
}

fn run_census(a: &CensusArgs, budget: &Budget) -> Result<Output> {
    let v = a.src.load()?;
    let default = if a.k % 2 == 0 { ModeArg::Both } else { ModeArg::Exhaustive };
    let mode = match a.mode.unwrap_or(default) {
        ModeArg::Pair => CensusMode::PairBased,
        ModeArg::Exhaustive => CensusMode::Exhaustive,
        ModeArg::Both => CensusMode::Both,
    };
    let rep = census(&v, a.k, mode, budget)?;
    let profile = if a.profile {
        Some(degree_profile(&v, a.k, budget)?)
    } else {
        None
    };
    let row = vec![
        s(rep.n),
        s(rep.d),
        s(rep.k),
        opt(rep.r),
        s(rep.num_points),
        opt(rep.colliding_pairs),
        opt(rep.good_pairs),
        opt(rep.bad_pairs),
        opt(rep.pairwise_lower_bound),
        opt(rep.nondegenerate_tuples),
    ];
    let result = json!({
        "n": rep.n,
        "d": rep.d,
        "k": rep.k,
        "r": rep.r,
        "num_points": rep.num_points,
        "colliding_pairs": rep.colliding_pairs,
        "good": rep.good_pairs,
        "bad": rep.bad_pairs,
        "pairwise_lower_bound": rep.pairwise_lower_bound,
        "nondegenerate": rep.nondegenerate_tuples,
        "jensen_bound_holds": rep.jensen_bound_holds,
        "delta_profile": profile.map(|p| p.delta),
    });
    Ok(Output::new(
        result,
        vec![
            "n",
            "d",
            "k",
            "r",
            "num_points",
            "colliding_pairs",
            "good",
            "bad",
            "pairwise_lower_bound",
            "nondegenerate",
        ],
        vec![row],
    ))
}

fn run_deletion(a: &DeletionArgs, budget: &Budget) -> Result<Output> {
    let p = if a.p.eq_ignore_ascii_case("auto") {
        Probability::Auto
    } else {
        Probability::Fixed(parse_ratio(&a.p)?)
    };
    let cfg = DeletionConfig {
        d: a.d,
        r: a.r,
        s: a.s,
        n: a.n,
        p,
        c6_mode: match a.c6 {
            C6Arg::Exact => C6Mode::Exact,
            C6Arg::Estimate => C6Mode::Estimate,
        },
        seed: a.seed,
        trials: a.trials,
        estimate_side: a.estimate_side,
    };
    let run = deletion_construct(&cfg, budget)?;
    let text = write_point_set(&run.trials[0].output);
    let rows = run
        .trials
        .iter()
        .map(|t| {
            vec![
                s(t.trial),
                s(t.sampled_size),
                s(t.violations_found),
                s(t.deleted),
                s(t.final_size),
                ratio_string(&t.expected_size_bound),
            ]
        })
        .collect();
    let trials: Vec<Value> = run
        .trials
        .iter()
        .map(|t| {
            json!({
                "trial": t.trial,
                "sampled_size": t.sampled_size,
                "violations_found": t.violations_found,
                "deleted": t.deleted,
                "final_size": t.final_size,
                "points": write_point_set(&t.output),
            })
        })
        .collect();
    let result = json!({
        "d": run.d, "r": run.r, "s": run.s, "n": run.n, "seed": run.seed,
        "c6_mode": run.c6_mode,
        "p": ratio_string(&run.p),
        "p_clamped": run.p_clamped,
        "tuple_count": run.tuple_count,
        "count_side": run.count_side,
        "c6": ratio_string(&run.c6),
        "expected_size_bound": ratio_string(&run.trials[0].expected_size_bound),
        "mean_final_size": ratio_string(&run.mean_final_size),
        "final_size_variance": ratio_string(&run.final_size_variance),
        "trials": trials,
    });
    Ok(Output::new(
        result,
        vec!["trial", "sampled_size", "violations_found", "deleted", "final_size", "expected_size_bound"],
        rows,
    )
    .points(text))
}

fn phi_rows(table: &PhiTable, prefix: &[String]) -> Vec<Vec<String>> {
    table
        .counts
        .iter()
        .map(|(x, c)| {
            let mut row = prefix.to_vec();
            row.push(point_text(x));
            row.push(s(c));
            row
        })
        .collect()
}

fn run_phi(a: &PhiArgs, budget: &Budget) -> Result<Output> {
    if let Some(u) = &a.u {
        let u = parse_vectors(u)?;
        let t = match &a.t {
            Some(t) => parse_vectors(t)?,
            None => u.clone(),
        };
        let table = phi(&u, &t)?;
        let result = json!({ "size_u": u.len(), "size_t": t.len(), "total": table.total(), "counts": table });
        return Ok(Output::new(result, vec!["x", "count"], phi_rows(&table, &[])));
    }
    let Some(r) = a.r else {
        return Err(UsageError("phi needs --u, or a point set with --r".into()).into());
    };
    let v = a.src.load()?;
    let sigma = sum_profile(&v, r, budget)?;
    let dis = dissect(&sigma.sums(), a.j)?;
    let mut parts = Vec::new();
    let mut rows = Vec::new();
    for w in dis.parts.keys() {
        let strata = stratify(&dis, w, &sigma)?;
        let wt = w.iter().map(i64::to_string).collect::<Vec<_>>().join(" ");
        for (i, t) in strata.iter().enumerate() {
            rows.extend(phi_rows(t, &[wt.clone(), s(i)]));
        }
        parts.push(json!({ "w": w, "size": dis.part(w).len(), "strata": strata }));
    }
    let result = json!({ "r": r, "j": a.j, "num_sums": sigma.num_sums(), "parts": parts });
    Ok(Output::new(result, vec!["w", "i", "x", "count"], rows))
}

fn run_cs(a: &CsArgs) -> Result<Output> {
    let mut pairs: Vec<(Vec<Point>, Vec<Point>)> = Vec::new();
    if let Some(u) = &a.u {
        let u = parse_vectors(u)?;
        let t = match &a.t {
            Some(t) => parse_vectors(t)?,
            None => u.clone(),
        };
        pairs.push((u, t));
    } else {
        if a.max_size == 0 || a.dim == 0 || a.range < 0 {
            return Err(UsageError("need --max-size >= 1, --dim >= 1 and --range >= 0".into()).into());
        }
        let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
        for _ in 0..a.trials {
            let mut gen = || -> Vec<Point> {
                let m = rng.gen_range(1..=a.max_size);
                (0..m)
                    .map(|_| Point::new((0..a.dim).map(|_| rng.gen_range(-a.range..=a.range)).collect()))
                    .collect()
            };
            let u = gen();
            let t = gen();
            pairs.push((u, t));
        }
    }
    let mut rows = Vec::new();
    let mut results = Vec::new();
    let mut violations = 0;
    for (i, (u, t)) in pairs.iter().enumerate() {
        let rep = check_cs(u, t)?;
        violations += usize::from(!rep.holds);
        rows.push(vec![
            s(i),
            s(rep.size_u),
            s(rep.size_t),
            s(rep.sumset_size),
            ratio_string(&rep.lhs),
            s(&rep.rhs),
            s(rep.holds),
        ]);
        results.push(rep);
    }
    let result = json!({ "instances": results.len(), "violations": violations, "checks": results });
    Ok(Output::new(
        result,
        vec!["instance", "size_u", "size_t", "sumset_size", "lhs", "rhs", "holds"],
        rows,
    )
    .status(verdict(violations == 0)))
}

fn run_bounds(a: &BoundsArgs) -> Result<Output> {
    let m = match (a.r, a.k) {
        (Some(r), _) => multifold_bound(a.d, r, a.n)?,
        (None, Some(k)) => multifold_bound_for_k(a.d, k, a.n)?,
        (None, None) => return Err(UsageError("bounds needs --k or --r".into()).into()),
    };
    let trivial = a.k.filter(|&k| k < a.d).map(|k| a.d - k);
    let lefmann = a.k.map(|k| ratio_string(&ratio(a.d as i64, ((k + 2) / 2) as i64)));
    let row = vec![
        s(a.d),
        opt(a.k),
        s(m.r),
        ratio_string(&m.exponent),
        ratio_string(&m.m_exponent),
        ratio_string(&m.ell_exponent),
        opt(trivial),
        opt(lefmann.clone()),
        opt(a.n),
        opt(m.bound_floor),
    ];
    let result = json!({
        "d": a.d,
        "k": a.k,
        "r": m.r,
        "shape": format!("a(d,k,n) <= O(n^({}))", ratio_string(&m.exponent)),
        "exponent": ratio_string(&m.exponent),
        "m_exponent": ratio_string(&m.m_exponent),
        "ell_exponent": ratio_string(&m.ell_exponent),
        "trivial_exponent": trivial,
        "lefmann_exponent": lefmann,
        "n": a.n,
        "bound_floor": m.bound_floor,
        "m": m.m,
        "ell": m.ell,
    });
    Ok(Output::new(
        result,
        vec![
            "d",
            "k",
            "r",
            "exponent",
            "m_exponent",
            "ell_exponent",
            "trivial_exponent",
            "lefmann_exponent",
            "n",
            "bound_floor",
        ],
        vec![row],
    ))
}
