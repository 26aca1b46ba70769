//! Exact arithmetic in `Z[√D]` and square testing for rational integers.

use std::fmt;

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RingError {
    #[error("elements of Z[√{left}] and Z[√{right}] cannot be combined")]
    MismatchedRing { left: BigInt, right: BigInt },
    #[error("square root of negative integer {0}")]
    NegativeRadicand(BigInt),
    #[error("square testing in Z[√{0}] is only supported for D < 0")]
    UnsupportedDiscriminant(BigInt),
    #[error("ring parameter D = {0} must be squarefree and different from 0 and 1")]
    InvalidDiscriminant(BigInt),
}

/// `a + b√D`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadInt {
    pub a: BigInt,
    pub b: BigInt,
    d: BigInt,
}

impl QuadInt {
    /// The caller guarantees `D` is not a perfect square; squarefreeness is not
    /// required for arithmetic (Pell orbits live in `Z[√D]` for any nonsquare `D`).
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>, d: impl Into<BigInt>) -> Self {
        QuadInt {
            a: a.into(),
            b: b.into(),
            d: d.into(),
        }
    }

    pub fn one(d: &BigInt) -> Self {
        QuadInt::new(1, 0, d.clone())
    }

    pub fn d(&self) -> &BigInt {
        &self.d
    }

    fn same_ring(&self, other: &QuadInt) -> Result<(), RingError> {
        if self.d == other.d {
            Ok(())
        } else {
            Err(RingError::MismatchedRing {
                left: self.d.clone(),
                right: other.d.clone(),
            })
        }
    }

    pub fn mul(&self, other: &QuadInt) -> Result<QuadInt, RingError> {
        self.same_ring(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &QuadInt) -> QuadInt {
        QuadInt {
            a: &self.a * &other.a + &self.d * &self.b * &other.b,
            b: &self.a * &other.b + &other.a * &self.b,
            d: self.d.clone(),
        }
    }

    pub fn add(&self, other: &QuadInt) -> Result<QuadInt, RingError> {
        self.same_ring(other)?;
        Ok(QuadInt {
            a: &self.a + &other.a,
            b: &self.b + &other.b,
            d: self.d.clone(),
        })
    }

    pub fn sub(&self, other: &QuadInt) -> Result<QuadInt, RingError> {
        self.same_ring(other)?;
        Ok(QuadInt {
            a: &self.a - &other.a,
            b: &self.b - &other.b,
            d: self.d.clone(),
        })
    }

    pub fn conj(&self) -> QuadInt {
        QuadInt {
            a: self.a.clone(),
            b: -&self.b,
            d: self.d.clone(),
        }
    }

    /// `a² − D·b²`.
    pub fn norm(&self) -> BigInt {
        &self.a * &self.a - &self.d * &self.b * &self.b
    }

    pub fn pow(&self, mut e: u64) -> QuadInt {
        let mut base = self.clone();
        let mut acc = QuadInt::one(&self.d);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_unchecked(&base);
            }
            base = base.mul_unchecked(&base);
            e >>= 1;
        }
        acc
    }
}

impl fmt::Display for QuadInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_negative() {
            write!(f, "{} - {}√{}", self.a, -&self.b, self.d)
        } else {
            write!(f, "{} + {}√{}", self.a, self.b, self.d)
        }
    }
}

/// `⌊√n⌋` for `n ≥ 0`.
pub fn isqrt(n: &BigInt) -> Result<BigInt, RingError> {
    if n.is_negative() {
        return Err(RingError::NegativeRadicand(n.clone()));
    }
    Ok(n.sqrt())
}

/// `√n` when `n` is a perfect square.
pub fn exact_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

const TRIAL_LIMIT: u64 = 1 << 22;

/// Split `n > 0` as `f²·r` with `r` squarefree, by trial division.
///
/// Returns `None` when `n` has a cofactor too large to certify squarefree
/// within the trial-division budget.
pub fn squarefree_decompose(n: &BigInt) -> Option<(BigInt, BigInt)> {
    if !n.is_positive() {
        return None;
    }
    let mut rest = n.clone();
    let mut f = BigInt::one();
    let mut r = BigInt::one();
    let mut p = 2u64;
    loop {
        let pb = BigInt::from(p);
        if &pb * &pb > rest {
            break;
        }
        if p > TRIAL_LIMIT {
            return None;
        }
        let mut e = 0u32;
        while rest.is_multiple_of(&pb) {
            rest /= &pb;
            e += 1;
        }
        if e > 0 {
            f *= pb.pow(e / 2);
            if e % 2 == 1 {
                r *= &pb;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    Some((f, r * rest))
}

pub fn is_squarefree(n: &BigInt) -> bool {
    match squarefree_decompose(&n.abs()) {
        Some((f, _)) => f.is_one(),
        None => false,
    }
}

/// `(u + v√D)² = n` with `u·v = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SquareWitness {
    pub u: BigInt,
    pub v: BigInt,
}

impl SquareWitness {
    pub fn square(&self, d: &BigInt) -> QuadInt {
        let x = QuadInt::new(self.u.clone(), self.v.clone(), d.clone());
        x.mul_unchecked(&x)
    }
}

/// Decide whether the rational integer `n` is a square in `Z[√D]`, `D < 0`.
///
/// `(u + v√D)² = u² + D·v² + 2uv√D` is rational only when `uv = 0`, so the
/// rational squares are exactly `u²` and `D·v²`.
pub fn is_square_in_ring(n: &BigInt, d: &BigInt) -> Result<Option<SquareWitness>, RingError> {
    if !d.is_negative() {
        return Err(RingError::UnsupportedDiscriminant(d.clone()));
    }
    if n.is_zero() {
        return Ok(Some(SquareWitness {
            u: BigInt::zero(),
            v: BigInt::zero(),
        }));
    }
    if n.is_positive() {
        return Ok(exact_sqrt(n).map(|u| SquareWitness { u, v: BigInt::zero() }));
    }
    if !n.is_multiple_of(d) {
        return Ok(None);
    }
    Ok(exact_sqrt(&(n / d)).map(|v| SquareWitness { u: BigInt::zero(), v }))
}

/// Machine-word version of [`is_square_in_ring`] for the brute-force scans.
pub fn is_square_in_ring_i64(n: i64, d: i64) -> Result<bool, RingError> {
    if d >= 0 {
        return Err(RingError::UnsupportedDiscriminant(d.into()));
    }
    let perfect = |m: i64| {
        let r = (m as u64).sqrt();
        r * r == m as u64
    };
    Ok(match n {
        0 => true,
        n if n > 0 => perfect(n),
        n => n % d == 0 && perfect(n / d),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairResult {
    pub i: usize,
    pub j: usize,
    /// `a_i·a_j + 1`
    pub value: BigInt,
    pub witness: Option<SquareWitness>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TupleReport {
    pub elements: Vec<BigInt>,
    pub ring_d: BigInt,
    pub pairs: Vec<PairResult>,
    pub valid: bool,
    pub reasons: Vec<String>,
}

/// Check the Diophantine property of `elements` in `Z[√D]`.
pub fn verify_tuple(elements: &[BigInt], d: &BigInt) -> Result<TupleReport, RingError> {
    let mut reasons = Vec::new();
    if elements.len() < 2 {
        reasons.push("a tuple needs at least two elements".to_string());
    }
    for (i, a) in elements.iter().enumerate() {
        if a.is_zero() {
            reasons.push(format!("element {i} is zero"));
        }
        for (j, b) in elements.iter().enumerate().skip(i + 1) {
            if a == b {
                reasons.push(format!("elements {i} and {j} coincide ({a})"));
            }
        }
    }
    let mut pairs = Vec::new();
    for i in 0..elements.len() {
        for j in i + 1..elements.len() {
            let value = &elements[i] * &elements[j] + BigInt::one();
            let witness = is_square_in_ring(&value, d)?;
            if witness.is_none() {
                reasons.push(format!(
                    "{}·{} + 1 = {} is not a square in Z[√{}]",
                    elements[i], elements[j], value, d
                ));
            }
            pairs.push(PairResult { i, j, value, witness });
        }
    }
    Ok(TupleReport {
        elements: elements.to_vec(),
        ring_d: d.clone(),
        valid: reasons.is_empty(),
        pairs,
        reasons,
    })
}
