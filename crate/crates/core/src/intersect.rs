//! Intersections of increasing integer sequences, the cases `k = 0..5`,
//! the brute-force extension scan and the full proof pipeline.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::bounds::{self, ChainResult};
use crate::congruence_sieve::{self, EliminationSummary, SieveContext, Sign};
use crate::expr::Expr;
use crate::interval::Interval;
use crate::linear_forms::{
    bw_constant, solve_linear_log, solve_m_logm, AlgebraicSurd, BwConstant, HeightNormalization,
    IndexBound, LinearFormSpec,
};
use crate::pell::{fundamental_classes, fundamental_unit, Form, PellClass, PellProblem, PellUnit, SolutionSeq};
use crate::quad_ring::{is_square_in_ring_i64, squarefree_decompose, verify_tuple};
use crate::reduction::{bd_iterate, Iteration, ReductionProblem};
use crate::sequences::{self, SeqFamily};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IntersectError {
    #[error("sequence {sequence} is not strictly increasing at index {index}")]
    NotIncreasing { sequence: char, index: u64 },
    #[error("k = {0} is outside 0..=5")]
    BadCase(i64),
    #[error("index bound {0} is below 10")]
    IndexBound(u64),
    #[error("{stage}: {message}")]
    Stage { stage: &'static str, message: String },
}

fn stage(stage: &'static str) -> impl Fn(String) -> IntersectError {
    move |message| IntersectError::Stage { stage, message }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hit {
    pub m: u64,
    pub n: u64,
    pub value: BigInt,
}

/// Common values `≤ bound` of two strictly increasing sequences.
pub fn merge_intersect<A, B>(a: A, b: B, bound: &BigInt) -> Result<Vec<Hit>, IntersectError>
where
    A: IntoIterator<Item = BigInt>,
    B: IntoIterator<Item = BigInt>,
{
    struct Cursor<I> {
        it: I,
        name: char,
        index: u64,
        cur: Option<BigInt>,
    }
    impl<I: Iterator<Item = BigInt>> Cursor<I> {
        fn advance(&mut self) -> Result<(), IntersectError> {
            let next = self.it.next();
            if let (Some(prev), Some(v)) = (&self.cur, &next) {
                if v <= prev {
                    return Err(IntersectError::NotIncreasing {
                        sequence: self.name,
                        index: self.index + 1,
                    });
                }
            }
            self.index += 1;
            self.cur = next;
            Ok(())
        }
    }
    let mut a = Cursor { it: a.into_iter(), name: 'A', index: 0, cur: None };
    let mut b = Cursor { it: b.into_iter(), name: 'B', index: 0, cur: None };
    a.cur = a.it.next();
    b.cur = b.it.next();
    let mut hits = Vec::new();
    while let (Some(x), Some(y)) = (&a.cur, &b.cur) {
        if x > bound || y > bound {
            break;
        }
        match x.cmp(y) {
            std::cmp::Ordering::Less => a.advance()?,
            std::cmp::Ordering::Greater => b.advance()?,
            std::cmp::Ordering::Equal => {
                hits.push(Hit { m: a.index, n: b.index, value: x.clone() });
                a.advance()?;
                b.advance()?;
            }
        }
    }
    Ok(hits)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassInfo {
    pub z0: BigInt,
    pub x0: BigInt,
    /// `None` when the equation has a single class
    pub sign: Option<Sign>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CaseHit {
    /// index in `x′`/`y′`
    pub m: u64,
    /// index in the class orbit
    pub n: u64,
    pub value: BigInt,
    pub sign: Option<Sign>,
    pub form: Form,
}

impl CaseHit {
    /// e.g. `y_1^- = y'_3 = 26`
    pub fn label(&self) -> String {
        let l = self.form.letter();
        let sign = self.sign.map(|s| format!("^{}", s.symbol())).unwrap_or_default();
        format!("{l}_{}{sign} = {l}'_{} = {}", self.n, self.m, self.value)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CaseResult {
    pub k: i64,
    pub d: BigInt,
    pub form: Form,
    pub equation: PellProblem,
    pub unit: PellUnit,
    pub classes: Vec<ClassInfo>,
    pub index_bound: u64,
    pub hits: Vec<CaseHit>,
    /// `d` recovered from each hit, sorted
    pub extensions: Vec<BigInt>,
    /// `{d_{k−1}, d_{k+1}}`, sorted
    pub expected: Vec<BigInt>,
    pub matches: bool,
    /// `{1, 3, d_k, d}` verified in `Z[√−2]` for every recovered `d`
    pub tuples_valid: bool,
}

/// `x` for `k ∈ {0, 1, 3}`, `y` for `k ∈ {2, 4, 5}`.
pub fn case_form(k: i64) -> Result<Form, IntersectError> {
    match k {
        0 | 1 | 3 => Ok(Form::X),
        2 | 4 | 5 => Ok(Form::Y),
        _ => Err(IntersectError::BadCase(k)),
    }
}

/// `d` from a common value: `d + 1 = −2x²` and `y² − 3x² = 1`.
pub fn extension_from_hit(form: Form, v: &BigInt) -> Option<BigInt> {
    let t: BigInt = BigInt::from(-2) * v * v - 1;
    match form {
        Form::X => Some(t),
        Form::Y => t.is_multiple_of(&BigInt::from(3)).then(|| t / 3),
    }
}

pub fn case_classes(k: i64) -> Result<(Form, PellProblem, Vec<(ClassInfo, PellClass)>), IntersectError> {
    let form = case_form(k)?;
    let problem = PellProblem::for_form(form, k).map_err(|e| stage("pell")(e.to_string()))?;
    let classes = fundamental_classes(&problem);
    let single = classes.len() == 1;
    let infos = classes
        .into_iter()
        .map(|c| {
            let sign = (!single).then(|| if c.x0.is_negative() { Sign::Minus } else { Sign::Plus });
            (ClassInfo { z0: c.z0.clone(), x0: c.x0.clone(), sign }, c)
        })
        .collect();
    Ok((form, problem, infos))
}

pub fn small_case(k: i64, index_bound: u64) -> Result<CaseResult, IntersectError> {
    if index_bound < 10 {
        return Err(IntersectError::IndexBound(index_bound));
    }
    let (form, equation, classes) = case_classes(k)?;
    let unit = fundamental_unit(&equation.d).map_err(|e| stage("pell")(e.to_string()))?;
    let count = index_bound as usize + 1;
    let family = match form {
        Form::X => SeqFamily::XPrime,
        Form::Y => SeqFamily::YPrime,
    };
    let primes = family.values(count);
    let mut hits = Vec::new();
    for (info, class) in &classes {
        let coords = SolutionSeq::with_unit(class.clone(), unit.clone()).x_terms(count);
        let bound = primes.last().unwrap().min(coords.last().unwrap()).clone();
        for h in merge_intersect(primes.clone(), coords, &bound)? {
            hits.push(CaseHit { m: h.m, n: h.n, value: h.value, sign: info.sign, form });
        }
    }
    hits.sort_by(|a, b| a.value.cmp(&b.value).then(a.n.cmp(&b.n)));
    let mut extensions: Vec<BigInt> = hits
        .iter()
        .filter_map(|h| extension_from_hit(form, &h.value))
        .collect();
    extensions.sort();
    extensions.dedup();
    let mut expected = vec![sequences::d(k - 1), sequences::d(k + 1)];
    expected.sort();
    expected.dedup();
    let d = sequences::d(k);
    let minus_two = BigInt::from(-2);
    let tuples_valid = extensions.iter().all(|e| {
        let t = [BigInt::one(), BigInt::from(3), d.clone(), e.clone()];
        verify_tuple(&t, &minus_two).map(|r| r.valid).unwrap_or(false)
    });
    Ok(CaseResult {
        k,
        matches: extensions == expected && hits.len() == extensions.len(),
        d,
        form,
        equation,
        unit,
        classes: classes.into_iter().map(|(i, _)| i).collect(),
        index_bound,
        hits,
        extensions,
        expected,
        tuples_valid,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtensionScan {
    pub bound: i64,
    pub found: Vec<i64>,
    /// `c_k` and `d_l` with `|·| ≤ bound`
    pub expected: Vec<i64>,
    pub matches: bool,
}

/// Every `c` with `0 < |c| ≤ bound` such that `c + 1` and `3c + 1` are
/// squares in `Z[√−2]`.
pub fn extension_scan(bound: i64) -> ExtensionScan {
    let found: Vec<i64> = (-bound..=bound)
        .filter(|&c| c != 0)
        .filter(|&c| {
            is_square_in_ring_i64(c + 1, -2).unwrap_or(false)
                && is_square_in_ring_i64(3 * c + 1, -2).unwrap_or(false)
        })
        .collect();
    let limit = BigInt::from(bound);
    let mut expected = Vec::new();
    for fam in [SeqFamily::C, SeqFamily::D] {
        for v in fam.rec().iter() {
            if v.abs() > limit {
                break;
            }
            if !v.is_zero() {
                expected.push(v.to_i64().expect("within bound"));
            }
        }
    }
    expected.sort();
    expected.dedup();
    ExtensionScan {
        bound,
        matches: found == expected,
        found,
        expected,
    }
}

/// Linear form data and bounds for one class of one small case.
#[derive(Clone, Debug)]
pub struct ClassCertificate {
    pub k: i64,
    pub class: ClassInfo,
    pub alpha1: AlgebraicSurd,
    pub epsilon: AlgebraicSurd,
    /// `α3²`, with `Λ = −m log α1 + n log ε + log α3`
    pub alpha3_sq: AlgebraicSurd,
    pub field_degree: u32,
    /// `x′_m` or `y′_m` equals `P + a/P`
    pub a: BigRational,
    /// the orbit coordinate equals `Q + b/Q`
    pub b: BigRational,
    /// `|Λ| < K·α1^{−2m}` for `m ≥ 2`
    pub kappa: BigRational,
    pub bw: BwConstant,
    pub index_bound: IndexBound,
    /// `n ≤ m` holds for every solution with `m` at least this
    pub n_le_m_from: BigInt,
    pub reduction: Iteration,
    pub final_bound: BigInt,
}

fn surd_in(p: BigRational, q: BigRational, d: &BigInt) -> Result<AlgebraicSurd, IntersectError> {
    let (f, r) = squarefree_decompose(d).ok_or_else(|| stage("linear form")("radicand".into()))?;
    AlgebraicSurd::new(p, q * BigRational::from_integer(f), r).map_err(|e| stage("linear form")(e.to_string()))
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn certify_class(
    k: i64,
    form: Form,
    info: &ClassInfo,
    problem: &PellProblem,
    prec: u32,
) -> Result<ClassCertificate, IntersectError> {
    let err = stage("linear form");
    let dd = &problem.d;
    let unit = fundamental_unit(dd).map_err(|e| err(e.to_string()))?;
    let alpha1 = AlgebraicSurd::from_ints(2, 1, 3).map_err(|e| err(e.to_string()))?;
    let int = |v: &BigInt| BigRational::from_integer(v.clone());
    let epsilon = surd_in(int(&unit.u), int(&unit.v), dd)?;
    let (a, c_sq, scale) = match form {
        Form::X => (rat(-1, 12), BigInt::from(12), BigInt::from(3)),
        Form::Y => (rat(1, 4), BigInt::from(4), BigInt::one()),
    };
    let z0 = &info.z0 * &problem.weight;
    let x0 = &info.x0;
    let p = int(&(&scale * (&z0 * &z0 + dd * x0 * x0))) / int(dd);
    let q = int(&(BigInt::from(2) * &scale * &z0 * x0)) / int(dd);
    let alpha3_sq = surd_in(p, q, dd)?;
    let b = -int(&problem.n) / int(&(BigInt::from(4) * dd));
    if a == b {
        return Err(err("Λ may vanish: a = b".into()));
    }
    let rho = (BigRational::one() - a.abs() / BigInt::from(4)).recip();
    let kappa = &rho * (a.abs() + &rho * b.abs()) * int(&c_sq);
    let field_degree = if epsilon.r() == alpha1.r() { 2 } else { 4 };
    let spec = LinearFormSpec {
        alphas: vec![alpha1.clone(), epsilon.clone(), alpha3_sq.clone()],
        field_degree,
        normalization: HeightNormalization::BakerWustholz,
    };
    let bw = bw_constant(&spec, prec).map_err(|e| err(e.to_string()))?;
    let ln1 = alpha1.ln(prec).map_err(|e| err(e.to_string()))?;
    let ln_eps = epsilon.ln(prec).map_err(|e| err(e.to_string()))?;
    let ln3 = alpha3_sq
        .ln(prec)
        .map_err(|e| err(e.to_string()))?
        .div_int(&BigInt::from(2))
        .map_err(|e| err(e.to_string()))?;
    // 2Λ = −2m log α1 + 2n log ε + log α3², so B = 2m once n ≤ m
    let two_k = Interval::from_rational(&(&kappa * BigInt::from(2)), prec)
        .ln()
        .map_err(|e| err(e.to_string()))?;
    let index_bound = solve_linear_log(&ln1.mul_int(&BigInt::from(2)), &two_k, &bw.c, 2, prec)
        .map_err(|e| err(e.to_string()))?;
    let gap = &ln_eps - &ln1;
    if !gap.is_positive() {
        return Err(err("unit of the class orbit below 2+√3".into()));
    }
    let n_le_m_from = (&ln3.abs() + &Interval::from_i64(1, prec))
        .checked_div(&gap)
        .map_err(|e| err(e.to_string()))?
        .ceil_lower()
        .max(BigInt::from(2));

    let log_eps = Expr::surd(&epsilon).log();
    let problem = ReductionProblem {
        theta: Expr::surd(&alpha1).log().div(log_eps.clone()),
        beta: Expr::surd(&alpha3_sq)
            .log()
            .div(Expr::int(2))
            .div(log_eps.clone())
            .neg(),
        alpha: Expr::rational(&kappa).div(log_eps),
        base: Expr::surd(&AlgebraicSurd::from_ints(7, 4, 3).map_err(|e| err(e.to_string()))?),
        bound: index_bound.m0.clone().max(n_le_m_from.clone()),
    };
    let reduction = bd_iterate(&problem, &BigInt::one()).map_err(|e| stage("reduction")(e.to_string()))?;
    let final_bound = reduction.trajectory.last().cloned().expect("nonempty");
    Ok(ClassCertificate {
        k,
        class: info.clone(),
        alpha1,
        epsilon,
        alpha3_sq,
        field_degree,
        a,
        b,
        kappa,
        bw,
        index_bound,
        n_le_m_from,
        reduction,
        final_bound,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniversalIntersection {
    pub k: i64,
    /// `ν0^± = ω0^± = 2(s_k s_{k−1} + 1)`
    pub z0: BigInt,
    pub d_prev: BigInt,
    pub prev_index: Option<u64>,
    /// `ν1^− = ω1^−`
    pub z1: BigInt,
    pub d_next: BigInt,
    pub next_index: Option<u64>,
}

impl UniversalIntersection {
    pub fn ok(&self) -> bool {
        self.prev_index == Some(self.k as u64 - 1) && self.next_index == Some(self.k as u64 + 1)
    }
}

pub fn universal_intersection(k: i64) -> Result<UniversalIntersection, IntersectError> {
    let ctx = SieveContext::new(k).map_err(|e| stage("sieve")(e.to_string()))?;
    let err = stage("universal intersections");
    let z0 = ctx.nu(Sign::Plus).term(0).0;
    for s in Sign::BOTH {
        if ctx.nu(s).term(0).0 != z0 || ctx.omega(s).term(0).0 != z0 {
            return Err(err(format!("ν0 and ω0 differ at k = {k}")));
        }
    }
    if z0 != BigInt::from(2) * (&ctx.s * &ctx.s_prev + 1) {
        return Err(err(format!("z0 ≠ 2(s_k s_(k−1) + 1) at k = {k}")));
    }
    let z1 = ctx.nu(Sign::Minus).term(1).0;
    if ctx.omega(Sign::Minus).term(1).0 != z1 {
        return Err(err(format!("ν1^− ≠ ω1^− at k = {k}")));
    }
    let d_of = |z: &BigInt| (z * z - 1i32) / &ctx.d;
    let (d_prev, d_next) = (d_of(&z0), d_of(&z1));
    Ok(UniversalIntersection {
        k,
        prev_index: sequences::index_of_d(&d_prev),
        next_index: sequences::index_of_d(&d_next),
        z0,
        d_prev,
        z1,
        d_next,
    })
}

/// The k = 1 linear form with alpha3 = sqrt(2) and the bound e^{-m}.
#[derive(Clone, Debug)]
pub struct TextInstance {
    pub bw: BwConstant,
    pub index_bound: IndexBound,
    pub reduction: Iteration,
}

pub fn text_instance_problem(bound: BigInt) -> Result<ReductionProblem, IntersectError> {
    let err = stage("linear form");
    let a1 = AlgebraicSurd::from_ints(2, 1, 3).map_err(|e| err(e.to_string()))?;
    let a2 = AlgebraicSurd::from_ints(5, 2, 6).map_err(|e| err(e.to_string()))?;
    let l2 = Expr::surd(&a2).log();
    Ok(ReductionProblem {
        theta: Expr::surd(&a1).log().div(l2.clone()),
        beta: Expr::int(2).sqrt().log().div(l2.clone()),
        alpha: Expr::int(1).div(l2),
        base: Expr::E,
        bound,
    })
}

pub fn text_instance(prec: u32) -> Result<TextInstance, IntersectError> {
    let err = stage("linear form");
    let spec = LinearFormSpec {
        alphas: vec![
            AlgebraicSurd::from_ints(2, 1, 3).map_err(|e| err(e.to_string()))?,
            AlgebraicSurd::from_ints(5, 2, 6).map_err(|e| err(e.to_string()))?,
            AlgebraicSurd::new(BigRational::zero(), BigRational::one(), BigInt::from(2))
                .map_err(|e| err(e.to_string()))?,
        ],
        field_degree: 4,
        normalization: HeightNormalization::Printed,
    };
    let bw = bw_constant(&spec, prec).map_err(|e| err(e.to_string()))?;
    let index_bound = solve_m_logm(&bw.c).map_err(|e| err(e.to_string()))?;
    let reduction = bd_iterate(&text_instance_problem(index_bound.rounded.clone())?, &BigInt::one())
        .map_err(|e| stage("reduction")(e.to_string()))?;
    Ok(TextInstance { bw, index_bound, reduction })
}

#[derive(Clone, Debug)]
pub struct CaseReport {
    pub result: CaseResult,
    pub certificates: Vec<ClassCertificate>,
}

impl CaseReport {
    pub fn certified(&self) -> bool {
        self.result.matches
            && self.result.tuples_valid
            && self
                .certificates
                .iter()
                .all(|c| c.final_bound <= BigInt::from(self.result.index_bound))
    }
}

/// The intersection for one small `k` together with a certificate per class.
pub fn case_report(k: i64, index_bound: u64, prec: u32) -> Result<CaseReport, IntersectError> {
    let result = small_case(k, index_bound)?;
    let (form, problem, classes) = case_classes(k)?;
    let certificates = classes
        .iter()
        .map(|(info, _)| certify_class(k, form, info, &problem, prec))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(CaseReport { result, certificates })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PipelineOptions {
    pub max_small_k: i64,
    pub index_bound: u64,
    pub precision: u32,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        PipelineOptions {
            max_small_k: 5,
            index_bound: 100,
            precision: 256,
        }
    }
}

/// `k` values on which the small-`n` elimination is sampled in the report.
pub const SIEVE_SAMPLE: std::ops::RangeInclusive<i64> = 6..=10;

#[derive(Clone, Debug)]
pub struct PipelineReport {
    pub options: PipelineOptions,
    pub chain: ChainResult,
    pub k_max: i64,
    pub sieve: Vec<EliminationSummary>,
    pub cases: Vec<CaseReport>,
    pub universal: Vec<UniversalIntersection>,
    pub text_instance: TextInstance,
    pub complete: bool,
    pub conclusion: String,
}

pub fn theorem_pipeline(opts: PipelineOptions) -> Result<PipelineReport, IntersectError> {
    let chain = bounds::chain(6, opts.precision).map_err(|e| stage("bennett chain")(e.to_string()))?;
    let k_max = chain.k_max;
    let sieve = SIEVE_SAMPLE
        .map(|k| {
            SieveContext::new(k)
                .map(|ctx| congruence_sieve::eliminate_all(&ctx))
                .map_err(|e| stage("sieve")(e.to_string()))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut cases = Vec::new();
    for k in 0..=opts.max_small_k.min(k_max) {
        cases.push(case_report(k, opts.index_bound, opts.precision)?);
    }
    let universal = (1..=k_max.max(1))
        .map(universal_intersection)
        .collect::<Result<Vec<_>, _>>()?;
    let text_instance = text_instance(opts.precision)?;

    let general = chain.contradiction && sieve.iter().all(|s| s.survivors.is_empty());
    let small = cases.len() as i64 == k_max + 1 && cases.iter().all(CaseReport::certified);
    let complete = general && small && universal.iter().all(UniversalIntersection::ok);
    let conclusion = if complete {
        "for every k ≥ 0, if {1, 3, d_k, d} is a Diophantine quadruple in Z[√−2] then d = d_{k−1} or d = d_{k+1}".to_string()
    } else if !general {
        "incomplete: the large-k argument did not close".to_string()
    } else {
        format!(
            "incomplete: small cases certified for k ≤ {} of {}",
            cases.len() as i64 - 1,
            k_max
        )
    };
    Ok(PipelineReport {
        options: opts,
        chain,
        k_max,
        sieve,
        cases,
        universal,
        text_instance,
        complete,
        conclusion,
    })
}
