//! Index growth estimates and the Bennett-type lower bound, chained into an
//! absolute bound on `−d_k`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::interval::{Interval, IntervalError};
use crate::sequences;

/// Ceiling for the automatic precision doubling.
pub const MAX_PREC: u32 = 1 << 14;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoundsError {
    #[error("need a0 < a1 < a2 with one of them zero")]
    Shape,
    #[error("N = {n} does not exceed M⁹ = {m9}")]
    SmallN { n: BigInt, m9: BigInt },
    #[error("log denominator argument {0} is not above 1")]
    Degenerate(BigRational),
    #[error("({x}, {y}, {z}) is not a solution of both equations for k = {k}")]
    NotSolution { k: i64, x: BigInt, y: BigInt, z: BigInt },
    #[error("index k = {0} out of range")]
    BadIndex(i64),
    #[error("chain not applicable at k = {k}: {reason}")]
    NotApplicable { k: i64, reason: String },
    #[error(transparent)]
    Interval(#[from] IntervalError),
}

fn undecided() -> BoundsError {
    BoundsError::Interval(IntervalError::Undecided)
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn int_rat(n: &BigInt) -> BigRational {
    BigRational::from_integer(n.clone())
}

/// Runs `f` at `prec`, doubling while a comparison stays undecided.
pub fn with_retry<T>(
    prec: u32,
    mut f: impl FnMut(u32) -> Result<T, BoundsError>,
) -> Result<T, BoundsError> {
    let mut p = prec.max(32);
    loop {
        match f(p) {
            Err(BoundsError::Interval(IntervalError::Undecided)) if p < MAX_PREC => p *= 2,
            other => return other,
        }
    }
}

pub fn bennett_gamma(a0: &BigInt, a1: &BigInt, a2: &BigInt) -> Result<BigRational, BoundsError> {
    if !(a0 < a1 && a1 < a2) || !(a0.is_zero() || a1.is_zero() || a2.is_zero()) {
        return Err(BoundsError::Shape);
    }
    let sq = |x: BigInt| &x * &x;
    if a2 - a1 >= a1 - a0 {
        Ok(BigRational::new(
            sq(a2 - a0) * sq(a2 - a1),
            BigInt::from(2) * a2 - a0 - a1,
        ))
    } else {
        Ok(BigRational::new(
            sq(a2 - a0) * sq(a1 - a0),
            a1 + a2 - BigInt::from(2) * a0,
        ))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BennettContext {
    pub a: [BigInt; 3],
    pub n: BigInt,
    pub m: BigInt,
    pub gamma: BigRational,
}

impl BennettContext {
    pub fn new(a0: i64, a1: i64, a2: i64, n: BigInt) -> Result<Self, BoundsError> {
        let a = [BigInt::from(a0), BigInt::from(a1), BigInt::from(a2)];
        let gamma = bennett_gamma(&a[0], &a[1], &a[2])?;
        let m = a.iter().map(|x| x.abs()).max().expect("three entries");
        let m9 = m.pow(9);
        if n <= m9 {
            return Err(BoundsError::SmallN { n, m9 });
        }
        Ok(BennettContext { a, n, m, gamma })
    }

    /// `∏_{i<j} (a_i − a_j)²`
    pub fn discriminant(&self) -> BigInt {
        let [a0, a1, a2] = &self.a;
        let p = (a0 - a1) * (a0 - a2) * (a1 - a2);
        &p * &p
    }

    /// `33Nγ`, the numerator argument of `λ − 1`.
    pub fn lambda_numerator(&self) -> BigRational {
        int_rat(&self.n) * &self.gamma * BigInt::from(33)
    }

    /// `1.7N²·∏(a_i − a_j)^{−2}`
    pub fn lambda_denominator(&self) -> BigRational {
        rat(17, 10) * int_rat(&(&self.n * &self.n)) / int_rat(&self.discriminant())
    }

    /// `(130Nγ)^{−1}`
    pub fn lower_coefficient(&self) -> BigRational {
        (int_rat(&self.n) * &self.gamma * BigInt::from(130)).recip()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lambda {
    pub value: Interval,
    /// Exact: `λ < 2` iff `33Nγ < 1.7N²·∏(a_i − a_j)^{−2}`
    pub below_two: bool,
}

pub fn bennett_lambda(ctx: &BennettContext, prec: u32) -> Result<Lambda, BoundsError> {
    let num = ctx.lambda_numerator();
    let den = ctx.lambda_denominator();
    if den <= BigRational::one() {
        return Err(BoundsError::Degenerate(den));
    }
    let below_two = num < den;
    let value = with_retry(prec, |p| {
        let l = Interval::from_rational(&num, p).ln()?;
        let r = Interval::from_rational(&den, p).ln()?;
        let one = Interval::from_i64(1, p);
        Ok(&one + &l.checked_div(&r)?)
    })?;
    Ok(Lambda { value, below_two })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ApproxTargets {
    pub k: i64,
    pub d: BigInt,
    /// `θ1² = 1 + 1/d_k = 4s_k²/(−2d_k)`
    pub theta1_sq: BigRational,
    /// `θ2² = 1 + 1/(3d_k) = 4t_k²/(−6d_k)`
    pub theta2_sq: BigRational,
    pub p1: BigInt,
    pub p2: BigInt,
    pub q: BigInt,
}

impl ApproxTargets {
    pub fn new(k: i64, z: &BigInt, x: &BigInt, y: &BigInt) -> Result<Self, BoundsError> {
        if k < 0 {
            return Err(BoundsError::BadIndex(k));
        }
        let d = sequences::d(k);
        let (s, t) = (sequences::s(k), sequences::t(k));
        let first = z * z + BigInt::from(2) * &d * x * x == BigInt::one() - &d;
        let second =
            BigInt::from(3) * z * z + BigInt::from(2) * &d * y * y == BigInt::from(3) - &d;
        if !z.is_positive() || x.is_negative() || y.is_negative() || !first || !second {
            return Err(BoundsError::NotSolution {
                k,
                x: x.clone(),
                y: y.clone(),
                z: z.clone(),
            });
        }
        let dr = int_rat(&d);
        let theta1_sq = BigRational::one() + dr.recip();
        let theta2_sq = BigRational::one() + (dr.clone() * BigInt::from(3)).recip();
        assert_eq!(theta1_sq, int_rat(&(BigInt::from(4) * &s * &s)) / (dr.clone() * BigInt::from(-2)));
        assert_eq!(theta2_sq, int_rat(&(BigInt::from(4) * &t * &t)) / (dr * BigInt::from(-6)));
        Ok(ApproxTargets {
            k,
            p1: BigInt::from(6) * &s * x,
            p2: BigInt::from(2) * &t * y,
            q: BigInt::from(3) * z,
            d,
            theta1_sq,
            theta2_sq,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ApproxGap {
    pub targets: ApproxTargets,
    pub gap1: Interval,
    pub gap2: Interval,
    /// `(1 − d_k)/z²`
    pub bound: BigRational,
    pub within: bool,
}

pub fn approx_gap(
    k: i64,
    z: &BigInt,
    x: &BigInt,
    y: &BigInt,
    prec: u32,
) -> Result<ApproxGap, BoundsError> {
    let targets = ApproxTargets::new(k, z, x, y)?;
    let bound = int_rat(&(BigInt::one() - &targets.d)) / int_rat(&(z * z));
    with_retry(prec, |p| {
        let gap = |sq: &BigRational, num: &BigInt| -> Result<Interval, BoundsError> {
            let theta = Interval::from_rational(sq, p).sqrt()?;
            let approx = Interval::from_rational(&BigRational::new(num.clone(), targets.q.clone()), p);
            Ok((&theta - &approx).abs())
        };
        let gap1 = gap(&targets.theta1_sq, &targets.p1)?;
        let gap2 = gap(&targets.theta2_sq, &targets.p2)?;
        let within = gap1.lt_rational(&bound).ok_or_else(undecided)?
            && gap2.lt_rational(&bound).ok_or_else(undecided)?;
        Ok(ApproxGap {
            targets: targets.clone(),
            gap1,
            gap2,
            bound: bound.clone(),
            within,
        })
    })
}

/// `log(−6d−1+2t√(−6d)) / log(−2d−1+2s√(−2d))`, the bound on `m/(n+1)`.
pub fn index_ratio_bound(k: i64, prec: u32) -> Result<Interval, BoundsError> {
    if k < 1 {
        return Err(BoundsError::BadIndex(k));
    }
    let d = sequences::d(k);
    let (s, t) = (sequences::s(k), sequences::t(k));
    with_retry(prec, |p| {
        let unit_log = |dd: BigInt, c: &BigInt| -> Result<Interval, BoundsError> {
            let root = Interval::from_int(&dd, p).sqrt()?;
            let u = &Interval::from_int(&(&dd - 1), p) + &root.mul_int(&(BigInt::from(2) * c));
            Ok(u.ln()?)
        };
        let top = unit_log(BigInt::from(-6) * &d, &t)?;
        let bottom = unit_log(BigInt::from(-2) * &d, &s)?;
        Ok(top.checked_div(&bottom)?)
    })
}

/// `r·(n+1) < n√3` for every `n ≥ 2`: the left side grows slower and the
/// inequality holds at `n = 2`.
pub fn ratio_gives_sqrt3(r: &BigRational) -> bool {
    let r2 = r * r;
    r.is_positive() && r2 < rat(3, 1) && r2 * BigInt::from(9) < rat(12, 1)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainStep {
    pub label: String,
    pub detail: String,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainResult {
    pub k_probe: i64,
    pub precision: u32,
    pub d_probe: BigInt,
    pub gamma: BigRational,
    pub lambda: Interval,
    pub lambda_below_two: bool,
    /// Coefficient of `d_k²` bounding `z^{2−λ}`, before and after rounding up
    pub coefficient_exact: BigRational,
    pub coefficient: BigRational,
    /// `1.7N²∏(a_i−a_j)^{−2}` over `d_k²`
    pub square_factor: BigRational,
    /// Factor of `−d_k` in `log(·)` bounding `1/(2−λ)`, before and after rounding down
    pub ratio_exact: BigRational,
    pub ratio: BigRational,
    /// Lower bound constant for `(m − 1)/(−d_k)^{1/4}`
    pub growth: BigRational,
    pub quartic_root_bound: Interval,
    pub quartic_root_bound_exact: Interval,
    pub dk_bound: BigInt,
    pub dk_bound_exact: BigInt,
    pub k_max: i64,
    pub rhs_decreasing: bool,
    pub contradiction: bool,
    pub steps: Vec<ChainStep>,
}

/// Lower bound `n ≥ (2/3)(−d_k)^{1/4}` from the small-`n` elimination.
pub fn approximation_constant() -> BigRational {
    rat(2, 3)
}

/// Number of consecutive `k` on which the monotonicity of the right side is checked.
pub const DECREASE_SAMPLES: i64 = 12;

/// Rounds up to `digits` decimals.
pub fn round_up_decimals(x: &BigRational, digits: u32) -> BigRational {
    let scale = BigInt::from(10).pow(digits);
    let v = x * int_rat(&scale);
    BigRational::new(v.ceil().to_integer(), scale)
}

/// Rounds down to `sig` significant digits; `x > 0`.
pub fn round_down_significant(x: &BigRational, sig: u32) -> BigRational {
    assert!(x.is_positive());
    let ten = BigInt::from(10);
    let mut e: i64 = 0;
    let mut v = x.clone();
    while v >= BigRational::one() {
        v /= int_rat(&ten);
        e += 1;
    }
    while v < rat(1, 10) {
        v *= int_rat(&ten);
        e -= 1;
    }
    let scale = ten.clone().pow(sig);
    let mant = (v * int_rat(&scale)).floor().to_integer();
    let shift = e - sig as i64;
    let p = int_rat(&ten.pow(shift.unsigned_abs() as u32));
    if shift >= 0 {
        int_rat(&mant) * p
    } else {
        int_rat(&mant) / p
    }
}

struct ChainConstants {
    coefficient: BigRational,
    square_factor: BigRational,
    ratio: BigRational,
    growth: BigRational,
}

/// `log(c·d²)·log(b·d²) / (h·log(r·(−d))·log(−4d−3))`
fn rhs(consts: &ChainConstants, d: &BigInt, prec: u32) -> Result<Interval, BoundsError> {
    let d2 = int_rat(&(d * d));
    let nd = int_rat(&-d);
    let ln = |x: BigRational| -> Result<Interval, BoundsError> {
        Ok(Interval::from_rational(&x, prec).ln()?)
    };
    let ratio_arg = &consts.ratio * &nd;
    if ratio_arg <= BigRational::one() {
        return Err(BoundsError::Degenerate(ratio_arg));
    }
    let top = &ln(&consts.coefficient * &d2)? * &ln(&consts.square_factor * &d2)?;
    let bottom = (&ln(ratio_arg)? * &ln(int_rat(&(BigInt::from(-4) * d - 3)))?)
        .mul_rational(&consts.growth);
    Ok(top.checked_div(&bottom)?)
}

fn quartic_root(x: &BigInt, prec: u32) -> Result<Interval, BoundsError> {
    Ok(Interval::from_int(x, prec).sqrt()?.sqrt()?)
}

pub fn chain(k_probe: i64, prec: u32) -> Result<ChainResult, BoundsError> {
    with_retry(prec, |p| chain_at(k_probe, p))
}

fn chain_at(k_probe: i64, prec: u32) -> Result<ChainResult, BoundsError> {
    if k_probe < 1 {
        return Err(BoundsError::BadIndex(k_probe));
    }
    let not_applicable = |reason: String| BoundsError::NotApplicable { k: k_probe, reason };
    let d = sequences::d(k_probe);
    let nd = -&d;
    let mut steps = Vec::new();
    let mut step = |label: &str, detail: String, holds: bool| {
        steps.push(ChainStep {
            label: label.to_string(),
            detail,
            holds,
        })
    };

    // N = −3d_k, q = 3z
    let n_mult = BigInt::from(3);
    let q_mult = BigInt::from(3);
    let ctx = BennettContext::new(-3, -1, 0, &n_mult * &nd).map_err(|e| not_applicable(e.to_string()))?;
    step("N > M^9", format!("N = {}, M = {}", ctx.n, ctx.m), true);

    let lambda = bennett_lambda(&ctx, prec)?;
    step(
        "lambda < 2",
        format!("33Nγ = {} < 1.7N²/∏ = {}", ctx.lambda_numerator(), ctx.lambda_denominator()),
        lambda.below_two,
    );
    if !lambda.below_two {
        return Err(not_applicable("λ ≥ 2".into()));
    }

    // z^{2−λ} < (1 − d)·130Nγ·q_mult^λ < 130·n_mult·γ·q_mult²·(−d)(1 − d)
    let base = int_rat(&(BigInt::from(130) * &n_mult * &q_mult * &q_mult)) * &ctx.gamma;
    let excess = int_rat(&(BigInt::one() + &nd)) / int_rat(&nd);
    let coefficient_exact = &base * &excess;
    let coefficient = round_up_decimals(&coefficient_exact, 2);
    step(
        "-d(1-d) <= excess·d² for k >= k_probe",
        format!("excess = {excess}"),
        true,
    );
    step(
        "z^(2-λ) < coefficient·d²",
        format!("exact {coefficient_exact}, rounded up {coefficient}"),
        coefficient >= coefficient_exact,
    );

    // λ − 1 = log(a_c(−d))/log(b_c d²), so 1/(2 − λ) = log(b_c d²)/log((b_c/a_c)(−d))
    let a_c = int_rat(&(BigInt::from(33) * &n_mult)) * &ctx.gamma;
    let square_factor = rat(17, 10) * int_rat(&(&n_mult * &n_mult)) / int_rat(&ctx.discriminant());
    let ratio_exact = &square_factor / &a_c;
    let ratio = round_down_significant(&ratio_exact, 2);
    step(
        "1/(2-λ) <= log(b·d²)/log(r·(-d))",
        format!("b = {square_factor}, r exact {ratio_exact}, rounded down {ratio}"),
        ratio <= ratio_exact && ratio.is_positive(),
    );

    // z > (−4d−3)^{m−1} and m − 1 > h·(−d)^{1/4}
    let s = sequences::s(k_probe);
    let gap: BigInt = BigInt::from(2) * &nd - 2;
    let lower_ok = BigInt::from(4) * &s * &s * (BigInt::from(2) * &nd) > &gap * &gap
        && BigInt::from(4) * &nd - 3 > BigInt::from(2);
    step(
        "z > (-4d-3)^(m-1)",
        "2s√(−2d) > −2d − 2 and −4d − 3 > 2".into(),
        lower_ok,
    );
    let prop = approximation_constant();
    let growth = rat(1, 2);
    let slack = &prop - &growth;
    let growth_ok = slack.is_positive() && slack.pow(4) * int_rat(&nd) > BigRational::one();
    step(
        "m - 1 > h·(-d)^(1/4)",
        format!("from m ≥ n ≥ {prop}·(−d)^(1/4), h = {growth}"),
        growth_ok,
    );
    if !lower_ok || !growth_ok {
        return Err(not_applicable("lower growth estimate fails".into()));
    }

    let published = ChainConstants {
        coefficient: coefficient.clone(),
        square_factor: square_factor.clone(),
        ratio: ratio.clone(),
        growth: growth.clone(),
    };
    let exact = ChainConstants {
        coefficient: coefficient_exact.clone(),
        square_factor: square_factor.clone(),
        ratio: ratio_exact.clone(),
        growth: growth.clone(),
    };
    let bound = rhs(&published, &d, prec)?;
    let bound_exact = rhs(&exact, &d, prec)?;

    let mut rhs_decreasing = true;
    let mut prev = bound.clone();
    for k in k_probe + 1..=k_probe + DECREASE_SAMPLES {
        let next = rhs(&published, &sequences::d(k), prec)?;
        rhs_decreasing &= next.lt(&prev).ok_or_else(undecided)?;
        prev = next;
    }
    step(
        "right side decreasing in k",
        format!("checked k = {}..{}", k_probe, k_probe + DECREASE_SAMPLES),
        rhs_decreasing,
    );

    let dk_bound = bound.powi(4).floor_upper();
    let dk_bound_exact = bound_exact.powi(4).floor_upper();
    let quartic = quartic_root(&nd, prec)?;
    let contradiction = bound.lt(&quartic).ok_or_else(undecided)? && rhs_decreasing;
    step(
        "(-d)^(1/4) < bound",
        format!(
            "bound {}, (−d_{k_probe})^(1/4) = {}",
            bound.certified_decimal(8),
            quartic.certified_decimal(8)
        ),
        true,
    );
    step(
        "-d < bound^4",
        format!("−d_k ≤ {dk_bound}"),
        true,
    );
    let mut k_max = 0i64;
    while -sequences::d(k_max + 1) <= dk_bound {
        k_max += 1;
    }
    step(
        "k_max",
        format!("k ≤ {k_max}; k_probe = {k_probe} contradicted: {contradiction}"),
        !contradiction || k_max < k_probe,
    );

    Ok(ChainResult {
        k_probe,
        precision: prec,
        d_probe: d,
        gamma: ctx.gamma.clone(),
        lambda: lambda.value,
        lambda_below_two: lambda.below_two,
        coefficient_exact,
        coefficient,
        square_factor,
        ratio_exact,
        ratio,
        growth,
        quartic_root_bound: bound,
        quartic_root_bound_exact: bound_exact,
        dk_bound,
        dk_bound_exact,
        k_max,
        rhs_decreasing,
        contradiction,
        steps,
    })
}

/// `⌊x⌋` of a positive rational, for display.
pub fn rational_floor(x: &BigRational) -> BigInt {
    x.numer().div_floor(x.denom())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pell::{solve_below, PellProblem};
    use proptest::prelude::*;

    fn big(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn gamma_examples() {
        assert_eq!(bennett_gamma(&big(-3), &big(-1), &big(0)).unwrap(), rat(36, 5));
        assert_eq!(bennett_gamma(&big(0), &big(1), &big(2)).unwrap(), rat(4, 3));
        assert_eq!(bennett_gamma(&big(-1), &big(0), &big(1)).unwrap(), rat(4, 3));
        assert_eq!(bennett_gamma(&big(1), &big(2), &big(3)), Err(BoundsError::Shape));
        assert_eq!(bennett_gamma(&big(0), &big(0), &big(3)), Err(BoundsError::Shape));
    }

    #[test]
    fn lambda_at_k6_below_two() {
        let n = big(-3) * sequences::d(6);
        let ctx = BennettContext::new(-3, -1, 0, n).unwrap();
        let l = bennett_lambda(&ctx, 128).unwrap();
        assert!(l.below_two);
        assert_eq!(l.value.lt_rational(&rat(2, 1)), Some(true));
    }

    #[test]
    fn lambda_tends_to_three_halves() {
        let at = |e: u32| {
            let ctx = BennettContext::new(-3, -1, 0, big(10).pow(e)).unwrap();
            bennett_lambda(&ctx, 128).unwrap().value
        };
        let (a, b) = (at(12), at(18));
        assert_eq!(b.lt(&a), Some(true));
        assert_eq!(b.gt_rational(&rat(3, 2)), Some(true));
        let half_gap = |x: &Interval| x.midpoint_f64() - 1.5;
        assert!(half_gap(&b) < half_gap(&a));
    }

    #[test]
    fn lambda_boundary_context() {
        let ctx = BennettContext::new(-3, -1, 0, big(3).pow(10)).unwrap();
        let l = bennett_lambda(&ctx, 128).unwrap();
        assert!(l.value.midpoint_f64().is_finite());
        assert!(matches!(
            BennettContext::new(-3, -1, 0, big(3).pow(9)),
            Err(BoundsError::SmallN { .. })
        ));
    }

    #[test]
    fn gap_examples() {
        let g = approx_gap(1, &big(10), &big(4), &big(7), 128).unwrap();
        assert!(g.within);
        assert!(g.gap1.is_positive() && g.gap2.is_positive());
        assert!(approx_gap(0, &big(2), &big(1), &big(2), 128).unwrap().within);
        assert!(matches!(
            approx_gap(1, &big(2), &big(1), &big(2), 128),
            Err(BoundsError::NotSolution { .. })
        ));
    }

    #[test]
    fn gap_bound_on_all_small_solutions() {
        let zmax = big(1_000_000);
        for k in 1..=5 {
            let xs = solve_below(&PellProblem::x_form(k).unwrap(), &zmax);
            let ys = solve_below(&PellProblem::y_form(k).unwrap(), &zmax);
            let mut seen = 0;
            for (z, x) in &xs {
                for (w, y) in &ys {
                    if z == w {
                        let g = approx_gap(k, z, x, y, 128).unwrap();
                        assert!(g.within, "k = {k}, z = {z}");
                        seen += 1;
                    }
                }
            }
            assert!(seen > 0);
        }
    }

    #[test]
    fn index_ratio_examples() {
        let r6 = index_ratio_bound(6, 128).unwrap();
        assert_eq!(r6.lt_rational(&rat(1072, 1000)), Some(true));
        let mut prev = r6;
        for k in 7..=20 {
            let r = index_ratio_bound(k, 128).unwrap();
            assert_eq!(r.lt(&prev), Some(true), "k = {k}");
            prev = r;
        }
        assert!(ratio_gives_sqrt3(&rat(1072, 1000)));
        assert!(!ratio_gives_sqrt3(&rat(18, 10)));
        for n in 2..10_000i64 {
            assert!(1.072 * (n + 1) as f64 <= n as f64 * 3f64.sqrt());
        }
    }

    #[test]
    fn rounding_helpers() {
        assert_eq!(round_up_decimals(&rat(252720208, 10000), 2), rat(2527203, 100));
        assert_eq!(round_up_decimals(&rat(3, 2), 2), rat(3, 2));
        assert_eq!(round_down_significant(&rat(17, 28512), 2), rat(59, 100000));
        assert_eq!(round_down_significant(&rat(1234, 1), 2), rat(1200, 1));
        assert_eq!(round_down_significant(&rat(1, 1), 2), rat(1, 1));
    }

    #[test]
    fn chain_at_k6() {
        let c = chain(6, 256).unwrap();
        assert_eq!(c.gamma, rat(36, 5));
        assert!(c.lambda_below_two);
        assert_eq!(c.coefficient, rat(2527203, 100));
        assert_eq!(c.ratio, rat(59, 100000));
        assert_eq!(c.square_factor, rat(17, 40));
        let r = c.quartic_root_bound.midpoint_f64();
        assert!((r - 20.477).abs() < 0.01, "{r}");
        assert!(c.dk_bound <= big(175817));
        assert_eq!(c.k_max, 5);
        assert!(c.contradiction && c.rhs_decreasing);
        assert!(c.dk_bound_exact <= c.dk_bound);
        assert!(c.steps.iter().all(|s| s.holds));
        assert!(-sequences::d(5) < c.dk_bound && -sequences::d(6) > c.dk_bound);
    }

    #[test]
    fn chain_stable_across_precision() {
        let runs: Vec<_> = [128, 256, 512].iter().map(|&p| chain(6, p).unwrap()).collect();
        for c in &runs[1..] {
            assert_eq!(c.dk_bound, runs[0].dk_bound);
            assert_eq!(c.dk_bound_exact, runs[0].dk_bound_exact);
            assert_eq!(c.k_max, runs[0].k_max);
            assert_eq!(c.contradiction, runs[0].contradiction);
        }
        let lo = &runs[0].quartic_root_bound;
        let hi = &runs[2].quartic_root_bound;
        assert!(lo.lo() <= hi.lo() && hi.hi() <= lo.hi());
    }

    #[test]
    fn chain_below_probe_regime_has_no_contradiction() {
        let c = chain(5, 256).unwrap();
        assert!(!c.contradiction);
    }

    proptest! {
        #[test]
        fn gamma_branch_is_total(a in -50i64..50, b in 1i64..50, c in 1i64..50, zero in 0usize..3) {
            let mut v = [a, a + b, a + b + c];
            let shift = v[zero];
            for x in v.iter_mut() { *x -= shift; }
            let g = bennett_gamma(&big(v[0]), &big(v[1]), &big(v[2])).unwrap();
            prop_assert!(g.is_positive());
        }
    }
}
