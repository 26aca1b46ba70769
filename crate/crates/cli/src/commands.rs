use std::fmt::{self, Write};

use dquint::bounds;
use dquint::congruence_sieve::{self, residue_pattern, SieveContext, Sign};
use dquint::expr::parse_surd;
use dquint::intersect::{self, PipelineOptions, PipelineReport};
use dquint::linear_forms::{bw_constant, solve_m_logm, HeightNormalization, LinearFormSpec};
use dquint::pell::{class_x_bound, fundamental_classes, fundamental_unit, solve_below, PellProblem, SolutionSeq};
use dquint::reduction::{bd_iterate_at, ReductionProblem};
use dquint::sequences::SeqFamily;
use dquint::{parse_surd_expr, verify_tuple, Expr};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde_json::{json, Value};

use crate::json;
use crate::RunConfig;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CliError {
    /// Malformed arguments or expressions.
    Usage(String),
    /// Well-formed input outside a command's domain, or a failed run.
    Domain(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Domain(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Domain(m) => write!(f, "error: {m}"),
        }
    }
}

fn domain(e: impl fmt::Display) -> CliError {
    CliError::Domain(e.to_string())
}

fn usage(e: impl fmt::Display) -> CliError {
    CliError::Usage(e.to_string())
}

/// A command's result in both output formats.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub text: String,
    pub json: Value,
}

/// Largest class search range `pell` accepts.
const MAX_CLASS_SCAN: u64 = 100_000_000;
/// `pell --zmax` cross-checks against brute force up to this value.
const BRUTE_FORCE_ZMAX: u64 = 10_000_000;

pub fn verify(d: &BigInt, elements: &[BigInt]) -> Result<Outcome, CliError> {
    let r = verify_tuple(elements, d).map_err(domain)?;
    let root = |p: &dquint::quad_ring::PairResult| {
        p.witness.as_ref().map(|w| {
            if w.v.is_zero() {
                w.u.to_string()
            } else {
                format!("{}*sqrt({})", w.v, d)
            }
        })
    };
    let mut text = String::new();
    let elems: Vec<_> = elements.iter().map(|e| e.to_string()).collect();
    let _ = writeln!(
        text,
        "{{{}}} in Z[sqrt({d})]: {}",
        elems.join(", "),
        if r.valid { "valid" } else { "not valid" }
    );
    for p in &r.pairs {
        let _ = writeln!(
            text,
            "  {}*{} + 1 = {} = {}",
            elements[p.i],
            elements[p.j],
            p.value,
            root(p).map(|s| format!("({s})^2")).unwrap_or_else(|| "no square".into())
        );
    }
    for reason in &r.reasons {
        let _ = writeln!(text, "  {reason}");
    }
    let json = json!({
        "command": "verify",
        "d": json::int(d),
        "elements": json::ints(elements),
        "valid": r.valid,
        "pairs": r.pairs.iter().map(|p| json!({
            "i": p.i,
            "j": p.j,
            "value": json::int(&p.value),
            "root": root(p),
        })).collect::<Vec<_>>(),
        "reasons": r.reasons,
    });
    Ok(Outcome { text, json })
}

pub fn seq(family: SeqFamily, count: usize) -> Result<Outcome, CliError> {
    let values = family.values(count);
    let mut text = String::new();
    for (i, v) in values.iter().enumerate() {
        let _ = writeln!(text, "{i} {v}");
    }
    let json = json!({
        "command": "seq",
        "family": family.name(),
        "count": count,
        "values": values.iter().enumerate()
            .map(|(i, v)| json!({ "index": i, "value": json::int(v) }))
            .collect::<Vec<_>>(),
    });
    Ok(Outcome { text, json })
}

/// Nonnegative solutions `z ≤ zmax` from the forward orbits of every class
/// and of its conjugate.
fn orbit_solutions(p: &PellProblem, zmax: &BigInt) -> Vec<(BigInt, BigInt)> {
    let mut out = Vec::new();
    for c in fundamental_classes(p) {
        let conj = dquint::pell::PellClass {
            z0: c.z0.clone(),
            x0: -&c.x0,
            problem: c.problem.clone(),
        };
        for cl in [c, conj] {
            for (m, (z, x)) in SolutionSeq::new(cl).iter().enumerate() {
                let (z, x) = (z.abs(), x.abs());
                if &z > zmax {
                    if m >= 2 {
                        break;
                    }
                    continue;
                }
                out.push((z, x));
            }
        }
    }
    out.retain(|(z, _)| z.is_positive());
    out.sort();
    out.dedup();
    out
}

pub fn pell(d: &BigInt, n: &BigInt, zmax: Option<&BigInt>, classes_only: bool) -> Result<Outcome, CliError> {
    let p = PellProblem::new(d.clone(), n.clone()).map_err(domain)?;
    let unit = fundamental_unit(&p.d).map_err(domain)?;
    let scan = class_x_bound(&p, &unit);
    if scan > BigInt::from(MAX_CLASS_SCAN) {
        return Err(CliError::Domain(format!(
            "class search would scan {scan} values, above the limit {MAX_CLASS_SCAN}"
        )));
    }
    let classes = fundamental_classes(&p);
    let mut text = String::new();
    let _ = writeln!(text, "z^2 - {d}*x^2 = {n}");
    let _ = writeln!(text, "unit: {} + {}*sqrt({d})", unit.u, unit.v);
    if classes.is_empty() {
        let _ = writeln!(text, "classes: none");
    }
    for c in &classes {
        let _ = writeln!(text, "class: ({}, {})", c.z0, c.x0);
    }
    let mut json = json!({
        "command": "pell",
        "D": json::int(d),
        "N": json::int(n),
        "unit": { "u": json::int(&unit.u), "v": json::int(&unit.v) },
        "classes": classes.iter()
            .map(|c| json!({ "z0": json::int(&c.z0), "x0": json::int(&c.x0) }))
            .collect::<Vec<_>>(),
    });
    if let (Some(zmax), false) = (zmax, classes_only) {
        let sols = orbit_solutions(&p, zmax);
        let brute = (zmax <= &BigInt::from(BRUTE_FORCE_ZMAX)).then(|| solve_below(&p, zmax) == sols);
        let _ = writeln!(text, "solutions with 0 < z <= {zmax}: {}", sols.len());
        for (z, x) in &sols {
            let _ = writeln!(text, "  ({z}, {x})");
        }
        if let Some(agree) = brute {
            let _ = writeln!(text, "brute force agrees: {agree}");
            if !agree {
                return Err(CliError::Domain("orbit and brute-force solution lists differ".into()));
            }
        }
        json["zmax"] = json::int(zmax);
        json["solutions"] = sols
            .iter()
            .map(|(z, x)| json!({ "z": json::int(z), "x": json::int(x) }))
            .collect();
        json["bruteForceAgrees"] = json!(brute);
    }
    Ok(Outcome { text, json })
}

pub fn sieve(k: i64, terms: usize) -> Result<Outcome, CliError> {
    let ctx = SieveContext::new(k).map_err(domain)?;
    let mut text = String::new();
    let _ = writeln!(text, "k = {k}, d_k = {}", ctx.d);
    let mut patterns = Vec::new();
    for (name, build) in [
        ("nu", SieveContext::nu as fn(&SieveContext, Sign) -> SolutionSeq),
        ("omega", SieveContext::omega),
    ] {
        for sign in Sign::BOTH {
            let seq = build(&ctx, sign);
            for modulus in [&ctx.mod_small, &ctx.mod_large] {
                let res = residue_pattern(&seq, modulus, terms).map_err(domain)?;
                let shown: Vec<_> = res.iter().map(|r| r.to_string()).collect();
                let _ = writeln!(text, "{name}{} mod {modulus}: {}", sign.symbol(), shown.join(" "));
                patterns.push(json!({
                    "sequence": name,
                    "sign": sign.symbol(),
                    "modulus": json::int(modulus),
                    "residues": json::ints(&res),
                }));
            }
        }
    }
    let summary = congruence_sieve::eliminate_all(&ctx);
    let _ = writeln!(
        text,
        "small-index cases: {}, eliminated: {} ({} by the size argument), survivors: {}",
        summary.cases,
        summary.eliminated,
        summary.by_proof_route,
        summary.survivors.len()
    );
    for e in &summary.survivors {
        let _ = writeln!(text, "  survivor (m, n) = ({}, {}), signs {}{}", e.m, e.n, e.signs.0.symbol(), e.signs.1.symbol());
    }
    let json = json!({
        "command": "sieve",
        "k": k,
        "d": json::int(&ctx.d),
        "z0": json::int(&ctx.z0),
        "moduli": { "small": json::int(&ctx.mod_small), "large": json::int(&ctx.mod_large) },
        "patterns": patterns,
        "elimination": json::sieve_summary(&summary),
    });
    Ok(Outcome { text, json })
}

pub fn bounds(k: i64, cfg: &RunConfig) -> Result<Outcome, CliError> {
    let c = bounds::chain(k, cfg.precision).map_err(domain)?;
    let mut text = String::new();
    let _ = writeln!(text, "k = {k}, d_k = {}", c.d_probe);
    let _ = writeln!(text, "gamma = {}", c.gamma);
    let _ = writeln!(text, "lambda = {} (below 2: {})", c.lambda.certified_decimal(12), c.lambda_below_two);
    let _ = writeln!(text, "coefficient = {} (exact {})", c.coefficient, c.coefficient_exact);
    let _ = writeln!(text, "ratio = {} (exact {})", c.ratio, c.ratio_exact);
    let _ = writeln!(text, "quartic root bound = {}", c.quartic_root_bound.certified_decimal(6));
    let _ = writeln!(text, "-d_k bound = {}", c.dk_bound);
    for st in &c.steps {
        let _ = writeln!(text, "[{}] {}: {}", if st.holds { "ok" } else { "--" }, st.label, st.detail);
    }
    let _ = writeln!(text, "kMax = {}", c.k_max);
    let mut json = json::chain(&c);
    json["command"] = json!("bounds");
    Ok(Outcome { text, json })
}

pub fn bw(alphas: &str, degree: u32, normalization: HeightNormalization, cfg: &RunConfig) -> Result<Outcome, CliError> {
    let alphas = alphas
        .split(',')
        .map(|a| parse_surd(a.trim()))
        .collect::<Result<Vec<_>, _>>()
        .map_err(usage)?;
    let spec = LinearFormSpec { alphas, field_degree: degree, normalization };
    let c = bw_constant(&spec, cfg.precision).map_err(domain)?;
    let m = solve_m_logm(&c.c).map_err(domain)?;
    let mut text = String::new();
    for (a, (h, hp)) in spec.alphas.iter().zip(c.heights.iter().zip(&c.modified_heights)) {
        let _ = writeln!(text, "{a}: h = {}, h' = {}", h.certified_decimal(10), hp.certified_decimal(10));
    }
    let _ = writeln!(text, "C = {}", c.c.certified_decimal(3));
    let _ = writeln!(text, "m > C log m for m >= {} (rounded {})", m.m0, m.rounded);
    let mut json = json!({
        "command": "bw",
        "alphas": spec.alphas.iter().map(json::surd).collect::<Vec<_>>(),
        "degree": degree,
        "normalization": normalization.name(),
    });
    for (k, v) in [("bakerWustholz", json::bw(&c)), ("indexBound", json::index_bound(&m))] {
        json[k] = v;
    }
    Ok(Outcome { text, json })
}

pub struct ReduceArgs<'a> {
    pub theta: &'a str,
    pub beta: &'a str,
    pub alpha: &'a str,
    pub base: &'a str,
    pub bound: &'a BigInt,
    pub floor: &'a BigInt,
    pub precision: Option<u32>,
}

pub fn reduce(a: &ReduceArgs) -> Result<Outcome, CliError> {
    let parse = |name: &str, s: &str| -> Result<Expr, CliError> {
        parse_surd_expr(s).map_err(|e| CliError::Usage(format!("--{name}: {e}")))
    };
    let prob = ReductionProblem {
        theta: parse("theta", a.theta)?,
        beta: parse("beta", a.beta)?,
        alpha: parse("alpha", a.alpha)?,
        base: parse("base", a.base)?,
        bound: a.bound.clone(),
    };
    let it = bd_iterate_at(&prob, a.floor, a.precision).map_err(domain)?;
    let mut text = String::new();
    for o in &it.outcomes {
        let _ = writeln!(
            text,
            "M = {}: q = {}, epsilon = {}, new bound {} ({} bits)",
            o.bound,
            o.q,
            o.epsilon.certified_decimal(8),
            o.new_bound,
            o.precision
        );
    }
    let traj: Vec<_> = it.trajectory.iter().map(|b| b.to_string()).collect();
    let _ = writeln!(text, "trajectory: {}", traj.join(" -> "));
    let mut json = json!({
        "command": "reduce",
        "theta": prob.theta.to_string(),
        "beta": prob.beta.to_string(),
        "alpha": prob.alpha.to_string(),
        "base": prob.base.to_string(),
        "M": json::int(a.bound),
    });
    json["reduction"] = json::iteration(&it);
    Ok(Outcome { text, json })
}

pub fn case(k: i64, cfg: &RunConfig) -> Result<Outcome, CliError> {
    let r = intersect::case_report(k, cfg.index_bound, cfg.precision).map_err(domain)?;
    let res = &r.result;
    let mut text = String::new();
    let _ = writeln!(text, "k = {k}, d_k = {}, form {}", res.d, res.form.letter());
    for h in &res.hits {
        let _ = writeln!(text, "  {}", h.label());
    }
    let ext: Vec<_> = res.extensions.iter().map(|d| d.to_string()).collect();
    let _ = writeln!(text, "extensions: {}", ext.join(", "));
    for c in &r.certificates {
        let traj: Vec<_> = c.reduction.trajectory.iter().map(|b| b.to_string()).collect();
        let _ = writeln!(
            text,
            "class ({}, {}): C = {}, M0 = {}, reduction {}",
            c.class.z0,
            c.class.x0,
            c.bw.c.certified_decimal(0),
            c.index_bound.m0,
            traj.join(" -> ")
        );
    }
    let _ = writeln!(text, "certified: {}", r.certified());
    let mut json = json::case(&r);
    json["command"] = json!("case");
    if !r.certified() {
        return Err(CliError::Domain(format!("case k = {k} is not certified")));
    }
    Ok(Outcome { text, json })
}

pub fn reproduce(cfg: &RunConfig) -> Result<(PipelineReport, Outcome), CliError> {
    let opts = PipelineOptions {
        index_bound: cfg.index_bound,
        precision: cfg.precision,
        ..PipelineOptions::default()
    };
    let r = intersect::theorem_pipeline(opts).map_err(domain)?;
    if !r.complete {
        return Err(CliError::Domain(format!("pipeline incomplete: {}", r.conclusion)));
    }
    let text = crate::report::markdown(&r);
    let mut json = json::pipeline(&r);
    json["command"] = json!("reproduce");
    Ok((r, Outcome { text, json }))
}
