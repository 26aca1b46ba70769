use dquint::bounds::{ChainResult, ChainStep};
use dquint::congruence_sieve::{Elimination, EliminationSummary};
use dquint::intersect::{
    CaseHit, CaseReport, ClassCertificate, ClassInfo, PipelineReport, TextInstance,
    UniversalIntersection,
};
use dquint::linear_forms::{AlgebraicSurd, BwConstant, IndexBound};
use dquint::reduction::{Iteration, ReductionOutcome};
use dquint::Interval;
use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Value};

/// Digits requested from every enclosure.
pub const REAL_DIGITS: u32 = 24;

pub fn int(n: &BigInt) -> Value {
    Value::String(n.to_string())
}

pub fn ints(v: &[BigInt]) -> Value {
    Value::Array(v.iter().map(int).collect())
}

pub fn rat(r: &BigRational) -> Value {
    Value::String(r.to_string())
}

pub fn real(x: &Interval) -> Value {
    let d = x.certified_decimal(REAL_DIGITS);
    json!({ "value": d.text, "certified_digits": d.digits })
}

pub fn surd(s: &AlgebraicSurd) -> Value {
    Value::String(s.to_string())
}

pub fn index_bound(b: &IndexBound) -> Value {
    json!({ "M0": int(&b.m0), "rounded": int(&b.rounded) })
}

pub fn bw(c: &BwConstant) -> Value {
    json!({
        "heights": c.heights.iter().map(real).collect::<Vec<_>>(),
        "modifiedHeights": c.modified_heights.iter().map(real).collect::<Vec<_>>(),
        "C": real(&c.c),
    })
}

pub fn outcome(o: &ReductionOutcome) -> Value {
    json!({
        "bound": int(&o.bound),
        "q": int(&o.q),
        "p": int(&o.p),
        "epsilon": real(&o.epsilon),
        "threshold": real(&o.threshold),
        "newBound": int(&o.new_bound),
        "certified": o.certified,
        "rejected": ints(&o.rejected),
        "precision": o.precision,
    })
}

pub fn iteration(it: &Iteration) -> Value {
    json!({
        "trajectory": ints(&it.trajectory),
        "rounds": it.outcomes.iter().map(outcome).collect::<Vec<_>>(),
    })
}

fn step(s: &ChainStep) -> Value {
    json!({ "label": s.label, "detail": s.detail, "holds": s.holds })
}

pub fn chain(c: &ChainResult) -> Value {
    json!({
        "kProbe": c.k_probe,
        "precision": c.precision,
        "dProbe": int(&c.d_probe),
        "gamma": rat(&c.gamma),
        "lambda": real(&c.lambda),
        "lambdaBelowTwo": c.lambda_below_two,
        "coefficientExact": rat(&c.coefficient_exact),
        "coefficient": rat(&c.coefficient),
        "squareFactor": rat(&c.square_factor),
        "ratioExact": rat(&c.ratio_exact),
        "ratio": rat(&c.ratio),
        "growth": rat(&c.growth),
        "quarticRootBound": real(&c.quartic_root_bound),
        "quarticRootBoundExact": real(&c.quartic_root_bound_exact),
        "dkBound": int(&c.dk_bound),
        "dkBoundExact": int(&c.dk_bound_exact),
        "kMax": c.k_max,
        "rhsDecreasing": c.rhs_decreasing,
        "contradiction": c.contradiction,
        "steps": c.steps.iter().map(step).collect::<Vec<_>>(),
    })
}

pub fn elimination(e: &Elimination) -> Value {
    json!({
        "m": e.m,
        "n": e.n,
        "signs": [e.signs.0.symbol(), e.signs.1.symbol()],
        "L": int(&e.l),
        "R": int(&e.r),
        "direct": e.direct,
        "proofRoute": {
            "sizeBounds": e.route.size_bounds,
            "eliminated": e.route.eliminated,
            "reason": e.route.reason,
        },
        "eliminated": e.eliminated,
    })
}

pub fn sieve_summary(s: &EliminationSummary) -> Value {
    json!({
        "k": s.k,
        "cases": s.cases,
        "eliminated": s.eliminated,
        "byProofRoute": s.by_proof_route,
        "survivors": s.survivors.iter().map(elimination).collect::<Vec<_>>(),
    })
}

fn class(c: &ClassInfo) -> Value {
    json!({
        "z0": int(&c.z0),
        "x0": int(&c.x0),
        "sign": c.sign.map(|s| s.symbol()),
    })
}

fn hit(h: &CaseHit) -> Value {
    json!({
        "label": h.label(),
        "m": h.m,
        "n": h.n,
        "value": int(&h.value),
        "sign": h.sign.map(|s| s.symbol()),
        "form": h.form.letter(),
    })
}

pub fn certificate(c: &ClassCertificate) -> Value {
    json!({
        "class": class(&c.class),
        "alpha1": surd(&c.alpha1),
        "epsilon": surd(&c.epsilon),
        "alpha3Squared": surd(&c.alpha3_sq),
        "fieldDegree": c.field_degree,
        "a": rat(&c.a),
        "b": rat(&c.b),
        "K": rat(&c.kappa),
        "bakerWustholz": bw(&c.bw),
        "indexBound": index_bound(&c.index_bound),
        "nLeMFrom": int(&c.n_le_m_from),
        "reduction": iteration(&c.reduction),
        "finalBound": int(&c.final_bound),
    })
}

pub fn case(r: &CaseReport) -> Value {
    let c = &r.result;
    let eq = &c.equation;
    json!({
        "k": c.k,
        "d": int(&c.d),
        "form": c.form.letter(),
        "equation": { "D": int(&eq.d), "N": int(&eq.n), "weight": int(&eq.weight) },
        "unit": { "u": int(&c.unit.u), "v": int(&c.unit.v) },
        "classes": c.classes.iter().map(class).collect::<Vec<_>>(),
        "indexBound": c.index_bound,
        "hits": c.hits.iter().map(hit).collect::<Vec<_>>(),
        "extensions": ints(&c.extensions),
        "expected": ints(&c.expected),
        "matches": c.matches,
        "tuplesValid": c.tuples_valid,
        "certificates": r.certificates.iter().map(certificate).collect::<Vec<_>>(),
        "certified": r.certified(),
    })
}

fn universal(u: &UniversalIntersection) -> Value {
    json!({
        "k": u.k,
        "z0": int(&u.z0),
        "dPrev": int(&u.d_prev),
        "prevIndex": u.prev_index,
        "z1": int(&u.z1),
        "dNext": int(&u.d_next),
        "nextIndex": u.next_index,
        "ok": u.ok(),
    })
}

pub fn text_instance(t: &TextInstance) -> Value {
    json!({
        "bakerWustholz": bw(&t.bw),
        "indexBound": index_bound(&t.index_bound),
        "reduction": iteration(&t.reduction),
    })
}

pub fn pipeline(r: &PipelineReport) -> Value {
    json!({
        "options": {
            "maxSmallK": r.options.max_small_k,
            "indexBound": r.options.index_bound,
            "precision": r.options.precision,
        },
        "kMax": r.k_max,
        "chain": chain(&r.chain),
        "sieve": r.sieve.iter().map(sieve_summary).collect::<Vec<_>>(),
        "cases": r.cases.iter().map(case).collect::<Vec<_>>(),
        "universal": r.universal.iter().map(universal).collect::<Vec<_>>(),
        "textInstance": text_instance(&r.text_instance),
        "complete": r.complete,
        "conclusion": r.conclusion,
    })
}
