//! Certified continued fractions and the one-dimensional Baker–Davenport
//! reduction `|mθ − n + β| < α·a^{−m}`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::expr::Expr;
use crate::interval::{Interval, IntervalError};

/// Working precision ceiling in bits.
pub const PRECISION_CAP: u32 = 1 << 15;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReductionError {
    #[error("precision cap of {cap} bits reached while {what}")]
    PrecisionCap { cap: u32, what: &'static str },
    #[error("{0}")]
    Domain(&'static str),
    #[error("no convergent gave a certified positive epsilon; tried q = {tried:?}")]
    NoEpsilon { tried: Vec<BigInt> },
    #[error(transparent)]
    Interval(IntervalError),
}

impl From<IntervalError> for ReductionError {
    fn from(e: IntervalError) -> Self {
        ReductionError::Interval(e)
    }
}

/// A real number given by a recipe, with its enclosure at some precision.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertifiedReal {
    pub recipe: Expr,
    pub precision: u32,
    pub enclosure: Interval,
}

impl CertifiedReal {
    /// Evaluates `recipe`, doubling the precision until the enclosure is
    /// narrower than `2^{−P/2}`.
    pub fn new(recipe: Expr, prec: u32) -> Result<Self, ReductionError> {
        let mut p = prec.max(16);
        loop {
            match recipe.eval(p) {
                Ok(enclosure) => {
                    let tight = enclosure
                        .accuracy_bits()
                        .is_none_or(|b| b as u32 >= p / 2);
                    if tight {
                        return Ok(CertifiedReal {
                            recipe,
                            precision: p,
                            enclosure,
                        });
                    }
                }
                Err(IntervalError::Undecided) => {}
                Err(e) => return Err(e.into()),
            }
            if p >= PRECISION_CAP {
                return Err(ReductionError::PrecisionCap {
                    cap: PRECISION_CAP,
                    what: "evaluating a recipe",
                });
            }
            p *= 2;
        }
    }

    pub fn at(&self, prec: u32) -> Result<Self, ReductionError> {
        if prec == self.precision {
            return Ok(self.clone());
        }
        CertifiedReal::new(self.recipe.clone(), prec)
    }
}

/// Partial quotients on which both enclosure endpoints agree. The list
/// stops at the first disagreement or where either expansion terminates.
pub fn certified_quotients(x: &Interval, max_terms: usize) -> Vec<BigInt> {
    let (mut lo, mut hi) = (x.lo(), x.hi());
    let mut out = Vec::new();
    while out.len() < max_terms {
        let a = lo.floor();
        if a != hi.floor() {
            break;
        }
        let (fl, fh) = (&lo - &a, &hi - &a);
        if fl.is_zero() || fh.is_zero() {
            break;
        }
        out.push(a.to_integer());
        (lo, hi) = (fh.recip(), fl.recip());
    }
    out
}

/// Convergents `p_j/q_j` of a quotient list.
pub fn convergents(quotients: &[BigInt]) -> Vec<(BigInt, BigInt)> {
    let (mut p0, mut q0) = (BigInt::zero(), BigInt::one());
    let (mut p1, mut q1) = (BigInt::one(), BigInt::zero());
    let mut out = Vec::with_capacity(quotients.len());
    for a in quotients {
        let p = a * &p1 + &p0;
        let q = a * &q1 + &q0;
        (p0, q0) = (p1, q1);
        (p1, q1) = (p.clone(), q.clone());
        out.push((p, q));
    }
    out
}

/// First `count` convergents of `x`, raising the precision until enough
/// partial quotients are certified.
pub fn cf_convergents(
    x: &CertifiedReal,
    count: usize,
) -> Result<Vec<(BigInt, BigInt)>, ReductionError> {
    let mut cur = x.clone();
    loop {
        let qs = certified_quotients(&cur.enclosure, count);
        if qs.len() >= count {
            return Ok(convergents(&qs));
        }
        if cur.precision >= PRECISION_CAP {
            return Err(ReductionError::PrecisionCap {
                cap: PRECISION_CAP,
                what: "certifying partial quotients",
            });
        }
        cur = cur.at(cur.precision * 2)?;
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionProblem {
    pub theta: Expr,
    pub beta: Expr,
    pub alpha: Expr,
    pub base: Expr,
    pub bound: BigInt,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionOutcome {
    pub bound: BigInt,
    pub q: BigInt,
    pub p: BigInt,
    pub epsilon: Interval,
    /// `log(αq/ε)/log a` with `ε` at its lower endpoint
    pub threshold: Interval,
    pub new_bound: BigInt,
    pub certified: bool,
    /// Convergent denominators above `6M` passed over with `ε ≤ 0`
    pub rejected: Vec<BigInt>,
    pub precision: u32,
}

enum Attempt {
    Done(ReductionOutcome),
    Exhausted(Vec<BigInt>),
    Escalate,
}

impl ReductionProblem {
    fn check(&self, prec: u32) -> Result<Option<()>, ReductionError> {
        if self.bound < BigInt::one() {
            return Err(ReductionError::Domain("bound M must be at least 1"));
        }
        let alpha = self.alpha.eval(prec)?;
        let base = self.base.eval(prec)?;
        let one = BigRational::one();
        if alpha.hi() <= BigRational::zero() || base.hi() <= one {
            return Err(ReductionError::Domain("need alpha > 0 and base a > 1"));
        }
        Ok((alpha.is_positive() && base.gt_rational(&one) == Some(true)).then_some(()))
    }

    /// `2·log₂(6M) + 128`
    pub fn initial_precision(&self) -> u32 {
        let six_m: BigInt = &self.bound * 6;
        2 * six_m.bits() as u32 + 128
    }
}

/// Extra convergents past the first with `q > 6M` kept for rejections.
const SPARE_CONVERGENTS: usize = 12;

pub fn bd_reduce(
    prob: &ReductionProblem,
    start_prec: Option<u32>,
) -> Result<ReductionOutcome, ReductionError> {
    let mut prec = start_prec.unwrap_or_else(|| prob.initial_precision());
    loop {
        if prob.check(prec)?.is_some() {
            match attempt(prob, prec)? {
                Attempt::Done(o) => return Ok(o),
                Attempt::Exhausted(tried) => return Err(ReductionError::NoEpsilon { tried }),
                Attempt::Escalate => {}
            }
        }
        if prec >= PRECISION_CAP {
            return Err(ReductionError::PrecisionCap {
                cap: PRECISION_CAP,
                what: "reducing",
            });
        }
        prec *= 2;
    }
}

fn attempt(prob: &ReductionProblem, prec: u32) -> Result<Attempt, ReductionError> {
    let six_m: BigInt = &prob.bound * 6;
    let ev = |e: &Expr| match e.eval(prec) {
        Ok(v) => Ok(Some(v)),
        Err(IntervalError::Undecided) => Ok(None),
        Err(e) => Err(ReductionError::from(e)),
    };
    let (Some(theta), Some(beta), Some(alpha), Some(base)) =
        (ev(&prob.theta)?, ev(&prob.beta)?, ev(&prob.alpha)?, ev(&prob.base)?)
    else {
        return Ok(Attempt::Escalate);
    };
    let quotients = certified_quotients(&theta, usize::MAX);
    let convs = convergents(&quotients);
    let Some(first) = convs.iter().position(|(_, q)| q > &six_m) else {
        return Ok(Attempt::Escalate);
    };
    let ln_base = base.ln()?;
    let mut rejected = Vec::new();
    for (p, q) in convs.iter().skip(first).take(SPARE_CONVERGENTS) {
        let Some((_, dt)) = theta.mul_int(q).nearest_int_distance() else {
            return Ok(Attempt::Escalate);
        };
        let Some((_, db)) = beta.mul_int(q).nearest_int_distance() else {
            return Ok(Attempt::Escalate);
        };
        let epsilon = &db - &dt.mul_int(&prob.bound);
        if epsilon.is_positive() {
            let num = alpha.mul_int(q);
            let ratio = num.checked_div(&epsilon.lower_point())?;
            let threshold = ratio.ln()?.checked_div(&ln_base)?;
            let new_bound = threshold.floor_upper().max(BigInt::zero());
            return Ok(Attempt::Done(ReductionOutcome {
                bound: prob.bound.clone(),
                q: q.clone(),
                p: p.clone(),
                epsilon,
                threshold,
                new_bound,
                certified: true,
                rejected,
                precision: prec,
            }));
        }
        if epsilon.hi() <= BigRational::zero() {
            rejected.push(q.clone());
            continue;
        }
        return Ok(Attempt::Escalate);
    }
    if convs.len() < first + SPARE_CONVERGENTS {
        return Ok(Attempt::Escalate);
    }
    Ok(Attempt::Exhausted(rejected))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Iteration {
    pub trajectory: Vec<BigInt>,
    pub outcomes: Vec<ReductionOutcome>,
}

/// Reduces repeatedly while the bound exceeds `floor` and keeps shrinking.
pub fn bd_iterate(prob: &ReductionProblem, floor: &BigInt) -> Result<Iteration, ReductionError> {
    bd_iterate_at(prob, floor, None)
}

/// [`bd_iterate`] with every round starting from `start_prec` bits.
pub fn bd_iterate_at(
    prob: &ReductionProblem,
    floor: &BigInt,
    start_prec: Option<u32>,
) -> Result<Iteration, ReductionError> {
    if floor < &BigInt::one() {
        return Err(ReductionError::Domain("floor must be at least 1"));
    }
    let mut cur = prob.clone();
    let mut it = Iteration {
        trajectory: vec![cur.bound.clone()],
        outcomes: Vec::new(),
    };
    while &cur.bound > floor {
        let out = bd_reduce(&cur, start_prec)?;
        let next = out.new_bound.clone();
        it.outcomes.push(out);
        if next >= cur.bound {
            break;
        }
        it.trajectory.push(next.clone());
        if next.is_zero() {
            break;
        }
        cur.bound = next;
    }
    Ok(it)
}

/// All `(m, n)` with `0 ≤ m ≤ max_m` and `|mθ − n + β| < α·a^{−m}`. Pairs
/// the enclosures cannot decide are kept.
pub fn scan_inequality(
    prob: &ReductionProblem,
    max_m: u64,
    prec: u32,
) -> Result<Vec<(u64, BigInt)>, ReductionError> {
    let theta = prob.theta.eval(prec)?;
    let beta = prob.beta.eval(prec)?;
    let alpha = prob.alpha.eval(prec)?;
    let base = prob.base.eval(prec)?;
    let mut hits = Vec::new();
    let mut power = Interval::from_i64(1, prec);
    for m in 0..=max_m {
        let v = &theta.mul_int(&BigInt::from(m)) + &beta;
        let rhs = alpha.checked_div(&power)?;
        let centre = v.floor_upper();
        for n in [&centre - 1, centre.clone(), &centre + 1, &centre + 2] {
            let diff = (&v - &Interval::from_int(&n, prec)).abs();
            if diff.lt(&rhs) != Some(false) {
                hits.push((m, n));
            }
        }
        power = &power * &base;
    }
    Ok(hits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linear_forms::AlgebraicSurd;
    use proptest::prelude::*;

    fn big(n: i64) -> BigInt {
        BigInt::from(n)
    }

    fn surd(p: i64, q: i64, r: i64) -> Expr {
        Expr::surd(&AlgebraicSurd::from_ints(p, q, r).unwrap())
    }

    fn golden() -> Expr {
        Expr::int(1).add(Expr::int(5).sqrt()).div(Expr::int(2))
    }

    fn k1_problem(bound: BigInt) -> ReductionProblem {
        let l1 = surd(2, 1, 3).log();
        let l2 = surd(5, 2, 6).log();
        let l3 = Expr::int(2).sqrt().log();
        ReductionProblem {
            theta: l1.div(l2.clone()),
            beta: l3.div(l2.clone()),
            alpha: Expr::int(1).div(l2),
            base: Expr::E,
            bound,
        }
    }

    fn pairs(v: &[(i64, i64)]) -> Vec<(BigInt, BigInt)> {
        v.iter().map(|&(p, q)| (big(p), big(q))).collect()
    }

    #[test]
    fn golden_ratio_convergents() {
        let x = CertifiedReal::new(golden(), 64).unwrap();
        let c = cf_convergents(&x, 8).unwrap();
        assert_eq!(
            c,
            pairs(&[(1, 1), (2, 1), (3, 2), (5, 3), (8, 5), (13, 8), (21, 13), (34, 21)])
        );
    }

    #[test]
    fn sqrt2_convergents() {
        let x = CertifiedReal::new(Expr::int(2).sqrt(), 64).unwrap();
        let c = cf_convergents(&x, 5).unwrap();
        assert_eq!(c, pairs(&[(1, 1), (3, 2), (7, 5), (17, 12), (41, 29)]));
    }

    #[test]
    fn rational_input_hits_the_cap() {
        let x = CertifiedReal::new(Expr::int(3).div(Expr::int(2)), 64).unwrap();
        assert!(matches!(
            cf_convergents(&x, 5),
            Err(ReductionError::PrecisionCap { .. })
        ));
    }

    #[test]
    fn convergent_quality() {
        let prob = k1_problem(big(10).pow(16));
        let x = CertifiedReal::new(prob.theta.clone(), 256).unwrap();
        let c = cf_convergents(&x, 40).unwrap();
        let mut prev = BigInt::zero();
        for (j, (p, q)) in c.iter().enumerate() {
            assert!(q > &prev || (j == 1 && q == &prev));
            prev = q.clone();
            assert!(num_integer::Integer::gcd(p, q).is_one());
            let v = CertifiedReal::new(prob.theta.clone(), 512).unwrap().enclosure;
            let err = (&v - &Interval::from_rational(&BigRational::new(p.clone(), q.clone()), 512)).abs();
            let bound = BigRational::new(BigInt::one(), q * q);
            assert_eq!(err.lt_rational(&bound), Some(true));
        }
        assert!(c.iter().any(|(_, q)| q > &big(6 * 10i64.pow(16))));
    }

    #[test]
    fn k1_reduction_steps() {
        let first = bd_reduce(&k1_problem(big(10).pow(16)), None).unwrap();
        assert!(first.certified && first.q > big(6 * 10i64.pow(16)));
        assert!(first.new_bound <= big(40), "{}", first.new_bound);
        assert_eq!(first.new_bound, big(38));
        let second = bd_reduce(&k1_problem(first.new_bound.clone()), None).unwrap();
        assert_eq!(second.new_bound, big(7));
    }

    #[test]
    fn k1_reduction_stable_across_precision() {
        let prob = k1_problem(big(10).pow(16));
        let runs: Vec<_> = [192, 384, 768]
            .iter()
            .map(|&p| bd_reduce(&prob, Some(p)).unwrap())
            .collect();
        for r in &runs[1..] {
            assert_eq!(r.q, runs[0].q);
            assert_eq!(r.new_bound, runs[0].new_bound);
            assert_eq!(r.rejected, runs[0].rejected);
        }
    }

    #[test]
    fn k1_iteration() {
        let it = bd_iterate(&k1_problem(big(10).pow(16)), &big(7)).unwrap();
        assert_eq!(it.trajectory, vec![big(10).pow(16), big(38), big(7)]);
        let full = bd_iterate(&k1_problem(big(10).pow(16)), &big(1)).unwrap();
        assert!(full.trajectory.starts_with(&it.trajectory));
        assert!(full.trajectory.windows(2).all(|w| w[1] < w[0]));
        let small = bd_iterate(&k1_problem(big(5)), &big(5)).unwrap();
        assert_eq!(small.trajectory, vec![big(5)]);
    }

    #[test]
    fn golden_synthetic_against_scan() {
        let prob = ReductionProblem {
            theta: golden(),
            beta: Expr::int(1).div(Expr::int(2)),
            alpha: Expr::int(1),
            base: Expr::E,
            bound: big(10),
        };
        let out = bd_reduce(&prob, None).unwrap();
        assert!(out.certified);
        let threshold = out.threshold.ceil_lower();
        let hits = scan_inequality(&prob, 10, 256).unwrap();
        for (m, _) in &hits {
            assert!(BigInt::from(*m) < threshold, "m = {m}");
        }
        let it = bd_iterate(&prob, &big(1)).unwrap();
        assert!(it.trajectory.windows(2).all(|w| w[1] < w[0]));
    }

    #[test]
    fn bad_problems() {
        let mut prob = k1_problem(big(0));
        assert!(matches!(bd_reduce(&prob, None), Err(ReductionError::Domain(_))));
        prob.bound = big(10);
        prob.base = Expr::int(1);
        assert!(matches!(bd_reduce(&prob, None), Err(ReductionError::Domain(_))));
        assert!(bd_iterate(&k1_problem(big(10)), &big(0)).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn surd_convergents_approximate(r in 2i64..500) {
            prop_assume!(crate::quad_ring::exact_sqrt(&big(r)).is_none());
            let x = CertifiedReal::new(Expr::int(r).sqrt(), 128).unwrap();
            let c = cf_convergents(&x, 10).unwrap();
            for w in c[1..].windows(2) {
                prop_assert!(w[1].1 > w[0].1);
            }
            for (p, q) in &c {
                let err = (&x.enclosure - &Interval::from_rational(&BigRational::new(p.clone(), q.clone()), x.precision)).abs();
                prop_assert_eq!(err.lt_rational(&BigRational::new(BigInt::one(), q * q)), Some(true));
            }
        }
    }
}
