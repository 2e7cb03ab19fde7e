use std::fs;

use num::{BigInt, BigRational, One, Signed, Zero};
use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use super::spec::{parse_fn, parse_group, parse_points, FnSpec, SpecContext};
use super::{
    experiment, CliError, Cli, Command, CostArgs, DegreeArgs, DtreeArgs, FnOp, GlobalOpts, GroupOp, HardArgs, HardKind,
    ReduceCommon, ReduceOp, SideArg, SimMode, SimulateArgs,
};
use crate::boolfn::{distinguishing_fn, format_word, is_symmetric_under, parse_word, Word};
use crate::oracles::{
    approx_degree_with, cost_lower_proxy, degree_lp, det_query_complexity, distinguishing_symmetry,
    distributional_rand_complexity, hard_distribution_dp, hard_distribution_poly, min_error_at_depth, parse_rational,
    rational_string, CostBound, DegreeOptions, LpSymmetry,
};
use crate::oracles::simplex::SolveMode;
use crate::perm::GroupAction;
use crate::shuffle::{
    power_word, product_word, quotient_word, restrict_word, shuffle_simulate, FiniteDistribution, FunctionEvaluator,
    MembershipTester, MergeReduction, PowerReduction, ProductReduction, QueryAlgorithm, QueryOracle, QuotientReduction,
    RestrictReduction, ScriptedDistinguisher, ShuffleMode, Side, SimError,
};
use crate::transforms::{
    merge_actions, power_action, product_action, quotient_action, restrict_to_orbits, set_blocks,
    unordered_pair_blocks,
};

/// Stated in every polynomial-method report.
pub const RELAXATION_NOTE: &str = "bounded-error polynomial degree in the indicator basis; LP duality over \
     polynomials stands in for the minimax over quantum algorithms, and half the degree lower-bounds quantum \
     query complexity";

pub type Outcome = (String, Value, Option<CliError>);

pub fn execute(cli: &Cli, ctx: &mut SpecContext) -> Result<Outcome, CliError> {
    let g = &cli.global;
    let done = |name: &str, v: Value| Ok((name.to_string(), v, None));
    match &cli.command {
        Command::Group { op } => group(op, ctx),
        Command::Func { op } => func(op, ctx),
        Command::Simulate(a) => done("simulate", simulate(a, g, ctx)?),
        Command::Reduce { op } => reduce(op, g, ctx),
        Command::Degree(a) => done("degree", degree(a, g, ctx)?),
        Command::Dtree(a) => done("dtree", dtree(a, ctx)?),
        Command::Costproxy(a) => done("costproxy", costproxy(a, g, ctx)?),
        Command::Harddist(a) => done("harddist", harddist(a, g, ctx)?),
        Command::Experiment(a) => experiment::run(a, g, ctx),
    }
}

pub fn degree_options(g: &GlobalOpts, promise_only: bool) -> DegreeOptions {
    let mut o = DegreeOptions {
        bounded: !promise_only,
        ..Default::default()
    };
    o.lp.mode = if g.exact {
        SolveMode::Exact
    } else if g.float {
        SolveMode::Float
    } else {
        SolveMode::Auto
    };
    if let Some(cap) = g.cap {
        o.monomial_cap = cap;
        o.cube_cap = cap;
    }
    o
}

fn rational(s: &str) -> Result<BigRational, CliError> {
    parse_rational(s).ok_or_else(|| CliError::Usage(format!("expected a rational like 1/3, found {s:?}")))
}

fn one_indexed(points: &[usize]) -> Vec<usize> {
    points.iter().map(|p| p + 1).collect()
}

fn falling(n: usize, k: usize) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, i| acc * BigInt::from(n - i))
}

fn group(op: &GroupOp, ctx: &mut SpecContext) -> Result<Outcome, CliError> {
    let (name, v) = match op {
        GroupOp::Build(a) => {
            let g = parse_group(&a.group, ctx)?;
            let v = json!({
                "group": g.to_json(),
                "degree": g.degree(),
                "order": g.action.order().to_string(),
            });
            ("group build", v)
        }
        GroupOp::Inspect(a) => {
            let g = parse_group(&a.group, ctx)?.action;
            let orbits: Vec<Vec<usize>> = g.orbits().iter().map(|o| one_indexed(o)).collect();
            let v = json!({
                "degree": g.degree(),
                "order": g.order().to_string(),
                "generators": g.generators().len(),
                "orbits": orbits,
                "transitive": g.is_transitive(),
                "base": one_indexed(&g.chain().base()),
                "basic_orbit_sizes": g.chain().orbit_sizes(),
            });
            ("group inspect", v)
        }
        GroupOp::Order(a) => {
            let g = parse_group(&a.group, ctx)?.action;
            ("group order", json!({ "order": g.order().to_string() }))
        }
        GroupOp::Orbits(a) => {
            let g = parse_group(&a.group, ctx)?.action;
            let orbits: Vec<Vec<usize>> = g.orbits().iter().map(|o| one_indexed(o)).collect();
            ("group orbits", json!({ "count": orbits.len(), "orbits": orbits }))
        }
        GroupOp::Transitivity { group, k } => {
            let g = parse_group(group, ctx)?.action;
            ("group transitivity", json!({ "k": k, "k_transitive": g.is_k_transitive(*k) }))
        }
        GroupOp::Tupleprob { group, from, to } => {
            let g = parse_group(group, ctx)?.action;
            let (from, to) = (parse_points(from)?, parse_points(to)?);
            let p = g.tuple_map_prob(&from, &to)?;
            // uniform over S_n: 1/(n)_k
            let baseline = BigRational::new(BigInt::one(), falling(g.degree(), from.len()));
            let v = json!({
                "from": one_indexed(&from),
                "to": one_indexed(&to),
                "probability": rational_string(&p),
                "symmetric_baseline": rational_string(&baseline),
                "difference": rational_string(&(&p - &baseline)),
                "abs_difference": rational_string(&(&p - &baseline).abs()),
            });
            ("group tupleprob", v)
        }
    };
    Ok((name.into(), v, None))
}

fn func(op: &FnOp, ctx: &mut SpecContext) -> Result<Outcome, CliError> {
    let (name, v) = match op {
        FnOp::Zoo { func } => {
            let fs = parse_fn(func, ctx)?;
            let entries = fs.f.entries_capped(ctx.cap)?;
            let ones = entries.iter().filter(|(_, v)| *v).count();
            let rows: Vec<Value> = entries
                .iter()
                .map(|(x, v)| json!([format_word(x), u8::from(*v)]))
                .collect();
            let v = json!({
                "name": fs.f.name(),
                "n": fs.f.n(),
                "m": fs.f.m(),
                "domain_size": entries.len(),
                "ones": ones,
                "zeros": entries.len() - ones,
                "claimed_group_order": fs.group.order().to_string(),
                "table": { "columns": ["input", "value"], "rows": rows },
            });
            ("fn zoo", v)
        }
        FnOp::Eval { func, input } => {
            let fs = parse_fn(func, ctx)?;
            let x = parse_word(input, fs.f.m())?;
            if x.len() != fs.f.n() {
                return Err(SimError::ShapeMismatch(format!("input length {} vs n = {}", x.len(), fs.f.n())).into());
            }
            let value = fs.f.eval(&x);
            let v = json!({
                "input": format_word(&x),
                "in_promise": value.is_some(),
                "value": value.map(u8::from),
            });
            ("fn eval", v)
        }
        FnOp::Symcheck { func, group } => {
            let fs = parse_fn(func, ctx)?;
            let g = match group {
                Some(s) => parse_group(s, ctx)?.action,
                None => fs.group.clone(),
            };
            let mut v = is_symmetric_under(&fs.f, &g)?.to_json();
            v["group_order"] = json!(g.order().to_string());
            ("fn symcheck", v)
        }
    };
    Ok((name.into(), v, None))
}

/// The small-range half of the degree-`budget` dual for distinguishing `G`
/// from `D_{n,r}`, renormalized.
fn lp_dual_distribution(
    g: &GroupAction,
    r: usize,
    budget: usize,
    opts: &DegreeOptions,
) -> Result<FiniteDistribution, CliError> {
    let dg = distinguishing_fn(g, r)?;
    let lp = hard_distribution_poly(&dg, budget, opts, &distinguishing_symmetry(g))?;
    let zeros: Vec<(Word, BigRational)> = lp
        .dual
        .iter()
        .filter(|(x, _)| dg.eval(x) == Some(false))
        .map(|(x, w)| (x.clone(), w.clone()))
        .collect();
    let total: BigRational = zeros.iter().map(|(_, w)| w.clone()).sum();
    if total.is_zero() {
        return Err(SimError::NotDistribution("LP dual puts no mass on small-range maps".into()).into());
    }
    Ok(FiniteDistribution::new(zeros.into_iter().map(|(x, w)| (x, w / &total)))?)
}

fn simulate(a: &SimulateArgs, g: &GlobalOpts, ctx: &mut SpecContext) -> Result<Value, CliError> {
    let fs = parse_fn(&a.func, ctx)?;
    let group = match &a.group {
        Some(s) => parse_group(s, ctx)?.action,
        None => fs.group.clone(),
    };
    let dual;
    let mode = match a.mode {
        SimMode::UniformBalanced => ShuffleMode::UniformBalanced,
        SimMode::Bijection => ShuffleMode::Bijection,
        SimMode::LpDual => {
            dual = lp_dual_distribution(&group, a.range, a.budget, &degree_options(g, false))?;
            ShuffleMode::LpDual(&dual)
        }
    };
    let fixed = match &a.input {
        Some(s) => Some(parse_word(s, fs.f.m())?),
        None => None,
    };
    let domain = if fixed.is_none() { fs.f.domain()? } else { Vec::new() };
    if fixed.is_none() && domain.is_empty() {
        return Err(CliError::Domain {
            name: "EmptyPromise",
            message: "no promise inputs to sample".into(),
        });
    }
    let eval = FunctionEvaluator { f: fs.f.clone() };
    let mut rng = ChaCha8Rng::seed_from_u64(g.seed);
    let mut rows = Vec::new();
    let (mut completed, mut violations, mut agree, mut max_q, mut total_q) = (0usize, 0usize, 0usize, 0usize, 0usize);
    let mut last_transcript = None;
    for t in 0..a.trials {
        let x = match &fixed {
            Some(x) => x.clone(),
            None => domain[rng.gen_range(0..domain.len())].clone(),
        };
        let mut oracle = QueryOracle::new(x.clone());
        let expected = fs.f.eval(&x);
        match shuffle_simulate(&eval, &group, a.range, mode, &mut oracle, &mut rng) {
            Ok(out) => {
                completed += 1;
                max_q = max_q.max(out.queries_used);
                total_q += out.queries_used;
                let same = expected == Some(out.value);
                agree += usize::from(same);
                rows.push(json!([
                    t + 1,
                    format_word(&x),
                    format_word(out.alpha.images()),
                    out.queries_used,
                    u8::from(out.value),
                    expected.map(u8::from),
                    same,
                    ""
                ]));
                last_transcript = Some(oracle.transcript(Some(out.value)));
            }
            Err(SimError::PromiseViolated(s)) => {
                violations += 1;
                rows.push(json!([t + 1, format_word(&x), "", oracle.count(), null, expected.map(u8::from), false, s]));
            }
            Err(e) => return Err(e.into()),
        }
    }
    if let (Some(path), Some(tr)) = (&a.transcript, &last_transcript) {
        fs::write(path, tr.to_jsonl()).map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))?;
    }
    let mean = if completed == 0 {
        Value::Null
    } else {
        json!(rational_string(&BigRational::new(total_q.into(), completed.into())))
    };
    Ok(json!({
        "function": fs.f.name(),
        "group_order": group.order().to_string(),
        "n": group.degree(),
        "range": a.range,
        "mode": mode.label(),
        "trials": a.trials,
        "completed": completed,
        "promise_violations": violations,
        "agree_with_f": agree,
        "max_queries": max_q,
        "mean_queries": mean,
        "table": {
            "columns": ["trial", "input", "alpha", "queries", "value", "f_input", "agrees", "violation"],
            "rows": rows,
        },
    }))
}

/// A transformed action, the word map to its domain, and the reduction
/// wrapped around an inner algorithm.
struct ReduceSetup {
    kind: &'static str,
    inner_action: GroupAction,
    transform: Box<dyn Fn(&[usize]) -> Result<Word, CliError>>,
    wrap: Box<dyn Fn(Box<dyn QueryAlgorithm>) -> Result<Box<dyn QueryAlgorithm>, CliError>>,
    /// Raw queries per inner query.
    factor: usize,
}

fn random_member(g: &GroupAction, rng: &mut ChaCha8Rng) -> Word {
    g.uniform_sample(rng).images().to_vec()
}

fn reduce(op: &ReduceOp, glob: &GlobalOpts, ctx: &mut SpecContext) -> Result<Outcome, CliError> {
    let cap = ctx.cap;
    let mut rng = ChaCha8Rng::seed_from_u64(glob.seed);
    let (g, common, setup) = match op {
        ReduceOp::Power { group, ell, common } => {
            let g = parse_group(group, ctx)?.action;
            let (n, ell) = (g.degree(), *ell);
            let inner_action = power_action(&g, ell, cap)?.action;
            let setup = ReduceSetup {
                kind: "power",
                inner_action,
                transform: Box::new(move |x| Ok(power_word(x, ell))),
                wrap: Box::new(move |inner| Ok(Box::new(PowerReduction { inner, n, ell }))),
                factor: ell,
            };
            (g, common, setup)
        }
        ReduceOp::Quotient { group, blocks, common } => {
            let enc = parse_group(group, ctx)?;
            let blocks = match blocks.as_str() {
                "pairs" => unordered_pair_blocks(&enc.encoding)?,
                "sets" => set_blocks(&enc.encoding)?,
                s => s.split('|').map(parse_points).collect::<Result<_, _>>()?,
            };
            let g = enc.action;
            let n = g.degree();
            let inner_action = quotient_action(&g, &blocks)?.action;
            let b2 = blocks.clone();
            let setup = ReduceSetup {
                kind: "quotient",
                inner_action,
                transform: Box::new(move |x| Ok(quotient_word(x, &b2)?)),
                wrap: Box::new(move |inner| Ok(Box::new(QuotientReduction::new(inner, n, blocks.clone())?))),
                factor: 1,
            };
            (g, common, setup)
        }
        ReduceOp::Restrict { group, set, common } => {
            let g = parse_group(group, ctx)?.action;
            let set = parse_points(set)?;
            let n = g.degree();
            let inner_action = restrict_to_orbits(&g, &set)?.action;
            let s2 = set.clone();
            let setup = ReduceSetup {
                kind: "restrict",
                inner_action,
                transform: Box::new(move |x| Ok(restrict_word(x, &s2))),
                wrap: Box::new(move |inner| Ok(Box::new(RestrictReduction::new(inner, n, &set)?))),
                factor: 1,
            };
            (g, common, setup)
        }
        ReduceOp::Product {
            group,
            other,
            side,
            fixed,
            common,
        } => {
            let g = parse_group(group, ctx)?.action;
            let h = parse_group(other, ctx)?.action;
            let fixed = match fixed {
                Some(s) => parse_word(s, h.degree())?,
                None => random_member(&h, &mut rng),
            };
            let side = match side {
                SideArg::First => Side::First,
                SideArg::Second => Side::Second,
            };
            let (first, second) = match side {
                Side::First => (g.clone(), h.clone()),
                Side::Second => (h.clone(), g.clone()),
            };
            let (n1, n2) = (first.degree(), second.degree());
            let inner_action = product_action(&first, &second, cap)?.action;
            let f2 = fixed.clone();
            let setup = ReduceSetup {
                kind: "product",
                inner_action,
                transform: Box::new(move |x| {
                    Ok(match side {
                        Side::First => product_word(x, &f2),
                        Side::Second => product_word(&f2, x),
                    })
                }),
                wrap: Box::new(move |inner| Ok(Box::new(ProductReduction::new(inner, n1, n2, side, fixed.clone())?))),
                factor: 1,
            };
            (g, common, setup)
        }
        ReduceOp::Merge { group, with, common } => {
            let g = parse_group(group, ctx)?.action;
            let h = parse_group(with, ctx)?.action;
            let inner_action = merge_actions(&g, &h)?;
            let setup = ReduceSetup {
                kind: "merge",
                inner_action,
                transform: Box::new(|x| Ok(x.to_vec())),
                wrap: Box::new(|inner| Ok(Box::new(MergeReduction { inner }))),
                factor: 1,
            };
            (g, common, setup)
        }
    };
    let v = run_reduction(&g, common, &setup, cap, &mut rng)?;
    Ok((format!("reduce {}", setup.kind), v, None))
}

fn run_reduction(
    g: &GroupAction,
    common: &ReduceCommon,
    setup: &ReduceSetup,
    cap: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Value, CliError> {
    let n = g.degree();
    let inner_len = setup.inner_action.degree();
    let x = match &common.input {
        Some(s) => parse_word(s, n)?,
        None => random_member(g, rng),
    };
    if x.len() != n {
        return Err(SimError::ShapeMismatch(format!("input length {} vs degree {n}", x.len())).into());
    }
    let q = common.queries.min(inner_len);
    let mut positions = index::sample(rng, inner_len, q).into_vec();
    positions.sort_unstable();
    let scripted = ScriptedDistinguisher {
        len: inner_len,
        positions: positions.clone(),
    };

    let mut direct_oracle = QueryOracle::new((setup.transform)(&x)?);
    let direct = scripted.run(&mut direct_oracle)?;
    let reduced = (setup.wrap)(Box::new(scripted))?;
    let mut raw = QueryOracle::new(x.clone());
    let out = reduced.run(&mut raw)?;

    let mut v = json!({
        "kind": setup.kind,
        "outer_degree": n,
        "inner_degree": inner_len,
        "input": format_word(&x),
        "inner_positions": one_indexed(&positions),
        "inner_queries": direct_oracle.count(),
        "raw_queries": raw.count(),
        "raw_per_inner_bound": setup.factor,
        "within_bound": raw.count() <= setup.factor * direct_oracle.count(),
        "output": out,
        "direct_output": direct,
        "consistent": out == direct,
    });
    if common.check_membership {
        let tester = MembershipTester::for_group(&setup.inner_action, cap)?;
        let reduced = (setup.wrap)(Box::new(tester))?;
        let members = g.closure_elements(cap)?;
        let mut accepted = 0usize;
        let mut max_raw = 0usize;
        for p in &members {
            let mut o = QueryOracle::new(p.images().to_vec());
            accepted += usize::from(reduced.run(&mut o)?);
            max_raw = max_raw.max(o.count());
        }
        v["membership"] = json!({
            "members": members.len(),
            "accepted": accepted,
            "max_raw_queries": max_raw,
            "raw_bound": setup.factor * inner_len,
        });
    }
    Ok(v)
}

fn fn_symmetry(fs: &FnSpec, no_sym: bool) -> LpSymmetry {
    if no_sym {
        LpSymmetry::trivial(fs.f.n(), fs.f.m())
    } else {
        fs.symmetry.clone()
    }
}

fn symmetry_json(sym: &LpSymmetry) -> Value {
    json!({
        "positions_order": sym.positions.order().to_string(),
        "symbols_order": sym.symbols.order().to_string(),
    })
}

fn degree(a: &DegreeArgs, g: &GlobalOpts, ctx: &mut SpecContext) -> Result<Value, CliError> {
    let fs = parse_fn(&a.func, ctx)?;
    let opts = degree_options(g, a.promise_only);
    let sym = fn_symmetry(&fs, a.no_sym);
    if let Some(d) = a.at {
        let lp = degree_lp(&fs.f, d, &opts, &sym)?;
        return Ok(json!({
            "function": fs.f.name(),
            "bounded": opts.bounded,
            "symmetry": symmetry_json(&sym),
            "relaxation": RELAXATION_NOTE,
            "certificate": lp.to_json(),
            "error": rational_string(&lp.error),
        }));
    }
    let eps = rational(&a.eps)?;
    let cert = approx_degree_with(&fs.f, &eps, &opts, &sym)?;
    let rows: Vec<Value> = cert
        .errors_by_degree
        .iter()
        .enumerate()
        .map(|(d, e)| json!([d, rational_string(e)]))
        .collect();
    Ok(json!({
        "function": fs.f.name(),
        "degree": cert.degree,
        "epsilon": rational_string(&eps),
        "bounded": opts.bounded,
        "symmetry": symmetry_json(&sym),
        "relaxation": RELAXATION_NOTE,
        "certificate": cert.to_json(),
        "table": { "columns": ["degree", "error"], "rows": rows },
    }))
}

fn load_distribution(spec: &str, fs: &FnSpec, ctx: &mut SpecContext) -> Result<FiniteDistribution, CliError> {
    if spec == "uniform" {
        return Ok(FiniteDistribution::uniform(fs.f.domain()?)?);
    }
    let Some(path) = spec.strip_prefix("file:") else {
        return Err(CliError::Usage(format!("--dist must be `uniform` or `file:PATH`, found {spec:?}")));
    };
    let bytes = fs::read(path).map_err(|e| CliError::Usage(format!("cannot read {path}: {e}")))?;
    ctx.files.push((path.to_string(), bytes.clone()));
    let v: Value = serde_json::from_slice(&bytes).map_err(|e| CliError::Usage(format!("{path}: {e}")))?;
    Ok(FiniteDistribution::from_json(&v, fs.f.m())?)
}

fn dtree(a: &DtreeArgs, ctx: &mut SpecContext) -> Result<Value, CliError> {
    let fs = parse_fn(&a.func, ctx)?;
    let (det, tree) = det_query_complexity(&fs.f)?;
    let mut v = json!({
        "function": fs.f.name(),
        "det": det,
        "tree": tree.to_json(),
    });
    if a.eps.is_some() || a.depth.is_some() {
        let mu = load_distribution(&a.dist, &fs, ctx)?;
        v["distribution"] = json!(a.dist);
        if let Some(e) = &a.eps {
            let eps = rational(e)?;
            v["epsilon"] = json!(rational_string(&eps));
            v["distributional"] = json!(distributional_rand_complexity(&fs.f, &mu, &eps)?);
        }
        if let Some(k) = a.depth {
            let (err, t) = min_error_at_depth(&fs.f, &mu, k)?;
            v["depth"] = json!(k);
            v["min_error"] = json!(rational_string(&err));
            v["best_tree"] = t.to_json();
        }
    }
    Ok(v)
}

fn cost_row(r: usize, c: &CostBound) -> (Value, Value) {
    match c {
        CostBound::Infinite => (
            json!({ "r": r, "cost": "inf", "degree": null }),
            json!([r, "inf", null]),
        ),
        CostBound::Finite { certificate, .. } => (
            json!({
                "r": r,
                "cost": c.value_string(),
                "degree": certificate.degree,
                "certificate": certificate.to_json(),
            }),
            json!([r, c.value_string(), certificate.degree]),
        ),
    }
}

fn costproxy(a: &CostArgs, g: &GlobalOpts, ctx: &mut SpecContext) -> Result<Value, CliError> {
    let group = parse_group(&a.group, ctx)?.action;
    let eps = rational(&a.eps)?;
    let opts = degree_options(g, a.promise_only);
    let r_max = a.r_max.unwrap_or(a.r);
    if r_max < a.r || a.r == 0 {
        return Err(CliError::Usage("need 1 <= r <= r-max".into()));
    }
    let mut entries = Vec::new();
    let mut rows = Vec::new();
    for r in a.r..=r_max {
        let c = cost_lower_proxy(&group, r, &eps, &opts)?;
        let (e, row) = cost_row(r, &c);
        entries.push(e);
        rows.push(row);
    }
    let table = json!({ "columns": ["r", "cost", "degree"], "rows": rows });
    let mut v = if entries.len() == 1 {
        entries.pop().expect("one entry")
    } else {
        json!({ "sweep": entries })
    };
    v["n"] = json!(group.degree());
    v["group_order"] = json!(group.order().to_string());
    v["epsilon"] = json!(rational_string(&eps));
    v["relaxation"] = json!(RELAXATION_NOTE);
    v["table"] = table;
    Ok(v)
}

fn harddist(a: &HardArgs, g: &GlobalOpts, ctx: &mut SpecContext) -> Result<Value, CliError> {
    let fs = parse_fn(&a.func, ctx)?;
    let mut v = match a.kind {
        HardKind::Poly => {
            let opts = degree_options(g, a.promise_only);
            let lp = hard_distribution_poly(&fs.f, a.budget, &opts, &fn_symmetry(&fs, a.no_sym))?;
            json!({
                "kind": "poly",
                "budget": a.budget,
                "error": rational_string(&lp.error),
                "distribution": lp.dual.to_json(),
                "relaxation": RELAXATION_NOTE,
                "certificate": lp.to_json(),
            })
        }
        HardKind::Dp => hard_distribution_dp(&fs.f, a.budget, a.iterations)?.to_json(),
    };
    v["function"] = json!(fs.f.name());
    Ok(v)
}
