//! Outward-rounded interval arithmetic on dyadic fixed-point numbers.
//!
//! An [`Interval`] at precision `p` encloses a real `x` as
//! `lo / 2^p ≤ x ≤ hi / 2^p` with `lo`, `hi` arbitrary-precision integers.
//! Every operation rounds the lower endpoint down and the upper endpoint up,
//! so an enclosure computed from enclosures stays an enclosure.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Extra bits carried inside transcendental kernels.
const GUARD_BITS: u32 = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IntervalError {
    /// The enclosure is too wide to decide the sign the operation needs.
    #[error("enclosure straddles a singular point; more precision needed")]
    Undecided,
    #[error("{0}")]
    Domain(&'static str),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    lo: BigInt,
    hi: BigInt,
    prec: u32,
}

pub(crate) fn pow2(k: u32) -> BigInt {
    BigInt::one() << k
}

pub(crate) fn div_floor(a: &BigInt, b: &BigInt) -> BigInt {
    a.div_floor(b)
}

pub(crate) fn div_ceil(a: &BigInt, b: &BigInt) -> BigInt {
    -((-a).div_floor(b))
}

fn shr_floor(a: &BigInt, k: u32) -> BigInt {
    div_floor(a, &pow2(k))
}

fn shr_ceil(a: &BigInt, k: u32) -> BigInt {
    div_ceil(a, &pow2(k))
}

/// Integer square root rounded up.
fn isqrt_ceil(n: &BigInt) -> BigInt {
    let r = n.sqrt();
    if &(&r * &r) == n {
        r
    } else {
        r + 1
    }
}

impl Interval {
    fn from_parts(lo: BigInt, hi: BigInt, prec: u32) -> Self {
        debug_assert!(lo <= hi, "inverted interval");
        Interval { lo, hi, prec }
    }

    pub fn from_int(n: &BigInt, prec: u32) -> Self {
        let v = n << prec;
        Interval::from_parts(v.clone(), v, prec)
    }

    pub fn from_i64(n: i64, prec: u32) -> Self {
        Interval::from_int(&BigInt::from(n), prec)
    }

    pub fn from_rational(r: &BigRational, prec: u32) -> Self {
        let num = r.numer() << prec;
        let den = r.denom();
        Interval::from_parts(div_floor(&num, den), div_ceil(&num, den), prec)
    }

    /// Hull of two rationals, `a ≤ b`.
    pub fn from_rational_bounds(a: &BigRational, b: &BigRational, prec: u32) -> Self {
        let lo = Interval::from_rational(a, prec).lo;
        let hi = Interval::from_rational(b, prec).hi;
        Interval::from_parts(lo, hi, prec)
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    /// Lower endpoint as a scaled integer (`lo / 2^prec`).
    pub fn lo_scaled(&self) -> &BigInt {
        &self.lo
    }

    pub fn hi_scaled(&self) -> &BigInt {
        &self.hi
    }

    pub fn lo(&self) -> BigRational {
        BigRational::new(self.lo.clone(), pow2(self.prec))
    }

    pub fn hi(&self) -> BigRational {
        BigRational::new(self.hi.clone(), pow2(self.prec))
    }

    /// Degenerate interval at the lower endpoint.
    pub fn lower_point(&self) -> Interval {
        Interval::from_parts(self.lo.clone(), self.lo.clone(), self.prec)
    }

    pub fn upper_point(&self) -> Interval {
        Interval::from_parts(self.hi.clone(), self.hi.clone(), self.prec)
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    /// Width in units of the last place.
    pub fn width_ulps(&self) -> BigInt {
        &self.hi - &self.lo
    }

    /// `⌊log₂ width⌋` relative to one, i.e. the enclosure is narrower than `2^-k`
    /// when the returned value is `Some(k)`.
    pub fn accuracy_bits(&self) -> Option<u64> {
        let w = self.width_ulps();
        if w.is_zero() {
            return Some(u64::MAX);
        }
        let wb = w.bits();
        (self.prec as u64).checked_sub(wb)
    }

    pub fn midpoint_f64(&self) -> f64 {
        let mid = BigRational::new(&self.lo + &self.hi, pow2(self.prec + 1));
        mid.to_f64().unwrap_or(f64::NAN)
    }

    pub fn is_positive(&self) -> bool {
        self.lo.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.hi.is_negative()
    }

    pub fn contains_zero(&self) -> bool {
        !self.is_positive() && !self.is_negative()
    }

    pub fn contains_rational(&self, r: &BigRational) -> bool {
        &self.lo() <= r && r <= &self.hi()
    }

    /// Re-express at another precision, rounding outward.
    pub fn with_prec(&self, prec: u32) -> Interval {
        match prec.cmp(&self.prec) {
            Ordering::Equal => self.clone(),
            Ordering::Greater => {
                let k = prec - self.prec;
                Interval::from_parts(&self.lo << k, &self.hi << k, prec)
            }
            Ordering::Less => {
                let k = self.prec - prec;
                Interval::from_parts(shr_floor(&self.lo, k), shr_ceil(&self.hi, k), prec)
            }
        }
    }

    fn check_prec(&self, other: &Interval) {
        assert_eq!(self.prec, other.prec, "interval precision mismatch");
    }

    /// Certified `self < other`; `None` when the enclosures overlap.
    pub fn lt(&self, other: &Interval) -> Option<bool> {
        self.check_prec(other);
        if self.hi < other.lo {
            Some(true)
        } else if self.lo >= other.hi {
            Some(false)
        } else {
            None
        }
    }

    pub fn lt_rational(&self, r: &BigRational) -> Option<bool> {
        if self.hi() < *r {
            Some(true)
        } else if self.lo() >= *r {
            Some(false)
        } else {
            None
        }
    }

    pub fn gt_rational(&self, r: &BigRational) -> Option<bool> {
        if self.lo() > *r {
            Some(true)
        } else if self.hi() <= *r {
            Some(false)
        } else {
            None
        }
    }

    pub fn abs(&self) -> Interval {
        if self.is_positive() || self.lo.is_zero() {
            self.clone()
        } else if self.is_negative() || self.hi.is_zero() {
            -self
        } else {
            let hi = std::cmp::max(-&self.lo, self.hi.clone());
            Interval::from_parts(BigInt::zero(), hi, self.prec)
        }
    }

    pub fn max(&self, other: &Interval) -> Interval {
        self.check_prec(other);
        Interval::from_parts(
            std::cmp::max(&self.lo, &other.lo).clone(),
            std::cmp::max(&self.hi, &other.hi).clone(),
            self.prec,
        )
    }

    pub fn min(&self, other: &Interval) -> Interval {
        self.check_prec(other);
        Interval::from_parts(
            std::cmp::min(&self.lo, &other.lo).clone(),
            std::cmp::min(&self.hi, &other.hi).clone(),
            self.prec,
        )
    }

    pub fn mul_int(&self, n: &BigInt) -> Interval {
        let a = &self.lo * n;
        let b = &self.hi * n;
        if n.is_negative() {
            Interval::from_parts(b, a, self.prec)
        } else {
            Interval::from_parts(a, b, self.prec)
        }
    }

    pub fn div_int(&self, n: &BigInt) -> Result<Interval, IntervalError> {
        if n.is_zero() {
            return Err(IntervalError::Domain("division by zero"));
        }
        let (a, b) = if n.is_negative() {
            (-&self.hi, -&self.lo)
        } else {
            (self.lo.clone(), self.hi.clone())
        };
        let m = n.abs();
        Ok(Interval::from_parts(div_floor(&a, &m), div_ceil(&b, &m), self.prec))
    }

    pub fn mul_rational(&self, r: &BigRational) -> Interval {
        let scaled = self.mul_int(r.numer());
        scaled
            .div_int(r.denom())
            .expect("rational denominators are nonzero")
    }

    pub fn recip(&self) -> Result<Interval, IntervalError> {
        Interval::from_i64(1, self.prec).checked_div(self)
    }

    pub fn checked_div(&self, other: &Interval) -> Result<Interval, IntervalError> {
        self.check_prec(other);
        if other.contains_zero() {
            return if other.lo.is_zero() && other.hi.is_zero() {
                Err(IntervalError::Domain("division by zero"))
            } else {
                Err(IntervalError::Undecided)
            };
        }
        let p = self.prec;
        let mut lo: Option<BigInt> = None;
        let mut hi: Option<BigInt> = None;
        for a in [&self.lo, &self.hi] {
            let num = a << p;
            for b in [&other.lo, &other.hi] {
                let f = div_floor(&num, b);
                let c = div_ceil(&num, b);
                lo = Some(match lo {
                    Some(x) if x <= f => x,
                    _ => f,
                });
                hi = Some(match hi {
                    Some(x) if x >= c => x,
                    _ => c,
                });
            }
        }
        Ok(Interval::from_parts(lo.unwrap(), hi.unwrap(), p))
    }

    pub fn powi(&self, n: u32) -> Interval {
        let mut acc = Interval::from_i64(1, self.prec);
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    pub fn sqrt(&self) -> Result<Interval, IntervalError> {
        if self.hi.is_negative() {
            return Err(IntervalError::Domain("square root of a negative number"));
        }
        if self.lo.is_negative() {
            return Err(IntervalError::Undecided);
        }
        let p = self.prec;
        let lo = (&self.lo << p).sqrt();
        let hi = isqrt_ceil(&(&self.hi << p));
        Ok(Interval::from_parts(lo, hi, p))
    }

    /// Natural logarithm; the argument must be certifiably positive.
    pub fn ln(&self) -> Result<Interval, IntervalError> {
        if !self.hi.is_positive() {
            return Err(IntervalError::Domain("logarithm of a non-positive number"));
        }
        if !self.lo.is_positive() {
            return Err(IntervalError::Undecided);
        }
        let lo = ln_enclosure(&self.lo, self.prec).0;
        let hi = ln_enclosure(&self.hi, self.prec).1;
        Ok(Interval::from_parts(lo, hi, self.prec))
    }

    /// Euler's number.
    pub fn e(prec: u32) -> Interval {
        let w = prec + GUARD_BITS;
        let mut term = pow2(w);
        let mut sum = BigInt::zero();
        let mut k: u64 = 0;
        while !term.is_zero() {
            sum += &term;
            k += 1;
            term /= k;
        }
        let err = BigInt::from(k + 4);
        let shift = w - prec;
        Interval::from_parts(shr_floor(&(&sum - &err), shift), shr_ceil(&(&sum + &err), shift), prec)
    }

    pub fn ln2(prec: u32) -> Interval {
        let w = prec + GUARD_BITS;
        let (l, err) = ln2_fixed(w);
        let shift = w - prec;
        Interval::from_parts(shr_floor(&(&l - &err), shift), shr_ceil(&(&l + &err), shift), prec)
    }

    /// The floor of the value when both endpoints agree on it.
    pub fn floor(&self) -> Option<BigInt> {
        let a = shr_floor(&self.lo, self.prec);
        let b = shr_floor(&self.hi, self.prec);
        (a == b).then_some(a)
    }

    /// Floor of the upper endpoint, a certified upper bound for `⌊x⌋`.
    pub fn floor_upper(&self) -> BigInt {
        shr_floor(&self.hi, self.prec)
    }

    pub fn ceil_lower(&self) -> BigInt {
        shr_ceil(&self.lo, self.prec)
    }

    /// Distance to the nearest integer, `‖x‖`, with the nearest integer
    /// certified. `None` when the enclosure meets a half-integer.
    pub fn nearest_int_distance(&self) -> Option<(BigInt, Interval)> {
        let p = self.prec;
        let half = pow2(p) >> 1u32;
        let round = |v: &BigInt| shr_floor(&(v + &half), p);
        let r = round(&self.lo);
        if r != round(&self.hi) {
            return None;
        }
        let centre = Interval::from_int(&r, p);
        let diff = self - &centre;
        Some((r, diff.abs()))
    }

    /// Decimal expansion carrying only digits on which both endpoints agree.
    pub fn certified_decimal(&self, max_digits: u32) -> CertifiedDecimal {
        if self.is_negative() {
            let d = (-self).certified_decimal(max_digits);
            return CertifiedDecimal {
                text: format!("-{}", d.text),
                digits: d.digits,
            };
        }
        let den = pow2(self.prec);
        let mut best = 0u32;
        let mut best_val = div_floor(&self.lo, &den);
        let mut scale = BigInt::one();
        for k in 1..=max_digits {
            scale *= 10;
            let a = div_floor(&(&self.lo * &scale), &den);
            let b = div_floor(&(&self.hi * &scale), &den);
            if a != b {
                break;
            }
            best = k;
            best_val = a;
        }
        CertifiedDecimal {
            text: format_fixed(&best_val, best),
            digits: best,
        }
    }
}

fn format_fixed(v: &BigInt, digits: u32) -> String {
    if digits == 0 {
        return v.to_string();
    }
    let neg = v.is_negative();
    let s = v.abs().to_string();
    let d = digits as usize;
    let s = if s.len() <= d {
        format!("{}{}", "0".repeat(d + 1 - s.len()), s)
    } else {
        s
    };
    let (int, frac) = s.split_at(s.len() - d);
    format!("{}{}.{}", if neg { "-" } else { "" }, int, frac)
}

/// A decimal string together with the number of fractional digits that are
/// certified (the true value lies in `[text, text + 10^-digits)`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertifiedDecimal {
    pub text: String,
    pub digits: u32,
}

impl fmt::Display for CertifiedDecimal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.certified_decimal(30))
    }
}

/// `2·atanh(T / 2^w)` with `0 ≤ T/2^w ≤ 1/3`, returned with an error bound in ulps.
fn two_atanh_fixed(t: &BigInt, w: u32) -> (BigInt, BigInt) {
    let t2 = (t * t) >> w;
    let mut power = t.clone();
    let mut sum = BigInt::zero();
    let mut n: u64 = 0;
    while !power.is_zero() {
        sum += &power / BigInt::from(2 * n + 1);
        power = (&power * &t2) >> w;
        n += 1;
    }
    // each term is off by < 5 ulps, the truncated tail by < 4, doubled
    (sum << 1u32, BigInt::from(10 * n + 16))
}

fn ln2_fixed(w: u32) -> (BigInt, BigInt) {
    // ln 2 = 2·atanh(1/3)
    let t = pow2(w) / 3;
    two_atanh_fixed(&t, w)
}

/// Enclosure `[a, b]` (scaled by `2^p`) of `ln(m / 2^p)` for `m > 0`.
fn ln_enclosure(m: &BigInt, p: u32) -> (BigInt, BigInt) {
    let bits = m.bits() as i64;
    let exp = bits - 1 - p as i64;
    let extra = 64 - (exp.unsigned_abs() + 1).leading_zeros();
    let w = p + GUARD_BITS + extra;
    // y = m / 2^(bits-1) in [1, 2)
    let lead = (bits - 1) as u32;
    let (y, y_err) = if w >= lead {
        (m << (w - lead), 0u32)
    } else {
        (m >> (lead - w), 1u32)
    };
    let one = pow2(w);
    let t = ((&y - &one) << w) / (&y + &one);
    let (ly, ey) = two_atanh_fixed(&t, w);
    let (l2, e2) = ln2_fixed(w);
    let e_big = BigInt::from(exp);
    let value = &ly + &l2 * &e_big;
    let err = ey + e2 * e_big.abs() + BigInt::from(y_err + 2);
    let shift = w - p;
    (shr_floor(&(&value - &err), shift), shr_ceil(&(&value + &err), shift))
}

impl Add for &Interval {
    type Output = Interval;
    fn add(self, rhs: &Interval) -> Interval {
        self.check_prec(rhs);
        Interval::from_parts(&self.lo + &rhs.lo, &self.hi + &rhs.hi, self.prec)
    }
}

impl Sub for &Interval {
    type Output = Interval;
    fn sub(self, rhs: &Interval) -> Interval {
        self.check_prec(rhs);
        Interval::from_parts(&self.lo - &rhs.hi, &self.hi - &rhs.lo, self.prec)
    }
}

impl Mul for &Interval {
    type Output = Interval;
    fn mul(self, rhs: &Interval) -> Interval {
        self.check_prec(rhs);
        let products = [
            &self.lo * &rhs.lo,
            &self.lo * &rhs.hi,
            &self.hi * &rhs.lo,
            &self.hi * &rhs.hi,
        ];
        let lo = products.iter().min().unwrap();
        let hi = products.iter().max().unwrap();
        Interval::from_parts(shr_floor(lo, self.prec), shr_ceil(hi, self.prec), self.prec)
    }
}

impl Neg for &Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        Interval::from_parts(-&self.hi, -&self.lo, self.prec)
    }
}

impl Neg for Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn ln2_digits() {
        let l = Interval::ln2(200);
        assert_eq!(
            l.certified_decimal(40).text,
            "0.6931471805599453094172321214581765680755"
        );
    }

    #[test]
    fn e_digits() {
        let e = Interval::e(200);
        assert!(e.certified_decimal(30).text.starts_with("2.71828182845904523536028747135"));
        let le = e.ln().unwrap();
        assert!(le.contains_rational(&rat(1, 1)));
    }

    #[test]
    fn ln_of_small_and_large() {
        let x = Interval::from_rational(&rat(1, 1000), 128);
        let l = x.ln().unwrap();
        assert!(l.certified_decimal(12).text.starts_with("-6.907755278982"));
        let big = Interval::from_int(&(BigInt::from(10).pow(40u32)), 128);
        let l = big.ln().unwrap();
        assert!(l.certified_decimal(12).text.starts_with("92.103403719761"));
    }

    #[test]
    fn sqrt_of_perfect_square_is_exact() {
        let x = Interval::from_i64(4, 64).sqrt().unwrap();
        assert!(x.is_point());
        assert_eq!(x.floor(), Some(BigInt::from(2)));
    }

    #[test]
    fn division_and_errors() {
        let one = Interval::from_i64(1, 64);
        let three = Interval::from_i64(3, 64);
        let q = one.checked_div(&three).unwrap();
        assert!(q.contains_rational(&rat(1, 3)));
        let zero = Interval::from_i64(0, 64);
        assert!(matches!(one.checked_div(&zero), Err(IntervalError::Domain(_))));
        let straddle = &Interval::from_rational(&rat(1, 3), 2) - &Interval::from_rational(&rat(1, 3), 2);
        assert!(matches!(
            Interval::from_i64(1, 2).checked_div(&straddle),
            Err(IntervalError::Undecided)
        ));
        assert!(matches!(
            Interval::from_i64(-1, 8).ln(),
            Err(IntervalError::Domain(_))
        ));
    }

    #[test]
    fn nearest_integer() {
        let x = Interval::from_rational(&rat(27, 10), 64);
        let (r, d) = x.nearest_int_distance().unwrap();
        assert_eq!(r, BigInt::from(3));
        assert!(d.contains_rational(&rat(3, 10)));
        let half = Interval::from_rational_bounds(&rat(249, 100), &rat(251, 100), 64);
        assert!(half.nearest_int_distance().is_none());
        let tie = Interval::from_rational(&rat(5, 2), 64);
        assert!(tie.nearest_int_distance().unwrap().1.contains_rational(&rat(1, 2)));
        let neg = Interval::from_rational(&rat(-21, 10), 64);
        let (r, d) = neg.nearest_int_distance().unwrap();
        assert_eq!(r, BigInt::from(-2));
        assert!(d.contains_rational(&rat(1, 10)));
    }

    #[test]
    fn decimal_rendering() {
        let x = Interval::from_rational(&rat(-7, 4), 32);
        assert_eq!(x.certified_decimal(5).text, "-1.75000");
        let y = Interval::from_rational(&rat(1, 4), 32);
        assert_eq!(y.certified_decimal(2).text, "0.25");
        // the enclosure of 1/20 straddles 0.05, so only one digit is certain
        let z = Interval::from_rational(&rat(1, 20), 32);
        assert_eq!(z.certified_decimal(2).text, "0.0");
    }

    #[test]
    fn precision_doubling_shrinks() {
        let lo = Interval::from_i64(7, 96).sqrt().unwrap().ln().unwrap();
        let hi = Interval::from_i64(7, 192).sqrt().unwrap().ln().unwrap();
        assert!(hi.lo() >= lo.lo() && hi.hi() <= lo.hi());
        assert!(hi.accuracy_bits().unwrap() > lo.accuracy_bits().unwrap());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn ln_encloses_product_rule(a in 1i64..1_000_000, b in 1i64..1_000_000) {
                let p = 96;
                let la = Interval::from_i64(a, p).ln().unwrap();
                let lb = Interval::from_i64(b, p).ln().unwrap();
                let lab = Interval::from_i64(a * b, p).ln().unwrap();
                let sum = &la + &lb;
                // enclosures of the same real must intersect
                prop_assert!(sum.lo() <= lab.hi() && lab.lo() <= sum.hi());
            }

            #[test]
            fn mul_div_round_trip(n in -10_000i64..10_000, d in 1i64..10_000) {
                let x = Interval::from_rational(&rat(n, d), 80);
                let y = Interval::from_i64(d, 80);
                let back = (&x * &y).checked_div(&y).unwrap();
                prop_assert!(back.contains_rational(&rat(n, d)));
            }
        }
    }
}
