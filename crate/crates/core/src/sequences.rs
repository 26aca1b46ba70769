//! The families `c_k`, `d_l`, `s_k`, `t_k` and the unit coordinates
//! `x′_m`, `y′_m` of `y² − 3x² = 1`.
//!
//! Closed forms are evaluated exactly in `Z[√3]`; recurrences are checked
//! against them.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::quad_ring::QuadInt;

/// `a_{n+2} = A·a_{n+1} + B·a_n + C`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinRec2 {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
    pub a0: BigInt,
    pub a1: BigInt,
}

impl LinRec2 {
    pub fn new(a: i64, b: i64, c: i64, a0: i64, a1: i64) -> Self {
        LinRec2 {
            a: a.into(),
            b: b.into(),
            c: c.into(),
            a0: a0.into(),
            a1: a1.into(),
        }
    }

    pub fn iter(&self) -> LinRec2Iter {
        LinRec2Iter {
            rec: self.clone(),
            cur: self.a0.clone(),
            next: self.a1.clone(),
        }
    }

    pub fn term(&self, n: u64) -> BigInt {
        self.iter().nth(n as usize).expect("infinite iterator")
    }

    /// Run the recurrence backwards one step: `a_{−1}` from `a_0, a_1`.
    ///
    /// Needs `B = ±1`.
    pub fn before_start(&self) -> BigInt {
        // a_1 = A·a_0 + B·a_{−1} + C
        let num = &self.a1 - &self.a * &self.a0 - &self.c;
        assert!(num.is_multiple_of(&self.b), "B must divide the backward step");
        num / &self.b
    }
}

pub struct LinRec2Iter {
    rec: LinRec2,
    cur: BigInt,
    next: BigInt,
}

impl Iterator for LinRec2Iter {
    type Item = BigInt;

    fn next(&mut self) -> Option<BigInt> {
        let after = &self.rec.a * &self.next + &self.rec.b * &self.cur + &self.rec.c;
        let out = std::mem::replace(&mut self.cur, std::mem::replace(&mut self.next, after));
        Some(out)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SeqFamily {
    C,
    D,
    S,
    T,
    XPrime,
    YPrime,
}

/// `(m·uⁿ + σ·conj(m·uⁿ) + shift)/divisor`, where the sum is `2a` for
/// `σ = 1` and `2b√3` for `σ = −1` (the `√3` is divided out).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosedForm {
    /// multiplier surd `m = (m.0 + m.1·√3)`
    pub multiplier: (i64, i64),
    /// base surd `u`
    pub base: (i64, i64),
    /// `+1` for the trace (rational part doubled), `−1` for the `√3` part
    pub conjugate_sign: i64,
    pub shift: i64,
    pub divisor: i64,
    pub text: &'static str,
}

impl SeqFamily {
    pub const ALL: [SeqFamily; 6] = [
        SeqFamily::C,
        SeqFamily::D,
        SeqFamily::S,
        SeqFamily::T,
        SeqFamily::XPrime,
        SeqFamily::YPrime,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SeqFamily::C => "c",
            SeqFamily::D => "d",
            SeqFamily::S => "s",
            SeqFamily::T => "t",
            SeqFamily::XPrime => "xprime",
            SeqFamily::YPrime => "yprime",
        }
    }

    pub fn rec(self) -> LinRec2 {
        match self {
            SeqFamily::C => LinRec2::new(14, -1, 8, 0, 8),
            SeqFamily::D => LinRec2::new(14, -1, 8, -1, -3),
            SeqFamily::S | SeqFamily::XPrime => LinRec2::new(4, -1, 0, 0, 1),
            SeqFamily::T | SeqFamily::YPrime => LinRec2::new(4, -1, 0, 1, 2),
        }
    }

    pub fn closed_form(self) -> ClosedForm {
        match self {
            SeqFamily::C => ClosedForm {
                multiplier: (2, 1),
                base: (7, 4),
                conjugate_sign: 1,
                shift: -4,
                divisor: 6,
                text: "((2+√3)(7+4√3)^k + (2−√3)(7−4√3)^k − 4)/6",
            },
            SeqFamily::D => ClosedForm {
                multiplier: (-1, 0),
                base: (7, 4),
                conjugate_sign: 1,
                shift: -4,
                divisor: 6,
                text: "−((7+4√3)^l + (7−4√3)^l + 4)/6",
            },
            SeqFamily::S | SeqFamily::XPrime => ClosedForm {
                multiplier: (1, 0),
                base: (2, 1),
                conjugate_sign: -1,
                shift: 0,
                divisor: 2,
                text: "((2+√3)^k − (2−√3)^k)/(2√3)",
            },
            SeqFamily::T | SeqFamily::YPrime => ClosedForm {
                multiplier: (1, 0),
                base: (2, 1),
                conjugate_sign: 1,
                shift: 0,
                divisor: 2,
                text: "((2+√3)^k + (2−√3)^k)/2",
            },
        }
    }

    /// Exact closed-form value, negative indices via the conjugate base.
    pub fn term(self, n: i64) -> BigInt {
        let cf = self.closed_form();
        let three = BigInt::from(3);
        let base = QuadInt::new(cf.base.0, cf.base.1, three.clone());
        // the bases have norm 1, so u^{−1} = conj(u)
        let power = if n >= 0 {
            base.pow(n as u64)
        } else {
            base.conj().pow(n.unsigned_abs())
        };
        let m = QuadInt::new(cf.multiplier.0, cf.multiplier.1, three);
        let x = m.mul(&power).expect("same ring");
        // x + σ·conj(x) is 2a (σ = 1) or 2b√3 (σ = −1)
        let twice: BigInt = if cf.conjugate_sign == 1 {
            &x.a * 2
        } else {
            &x.b * 2
        };
        let num = twice + BigInt::from(cf.shift);
        let div = BigInt::from(cf.divisor);
        assert!(num.is_multiple_of(&div), "closed form not integral");
        num / div
    }

    /// First `count` terms by the recurrence.
    pub fn values(self, count: usize) -> Vec<BigInt> {
        self.rec().iter().take(count).collect()
    }
}

impl fmt::Display for SeqFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SeqFamily {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        SeqFamily::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| format!("unknown family '{s}' (expected c, d, s, t, xprime or yprime)"))
    }
}

pub fn c(k: i64) -> BigInt {
    SeqFamily::C.term(k)
}

pub fn d(l: i64) -> BigInt {
    SeqFamily::D.term(l)
}

pub fn s(k: i64) -> BigInt {
    SeqFamily::S.term(k)
}

pub fn t(k: i64) -> BigInt {
    SeqFamily::T.term(k)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityFailure {
    pub identity: &'static str,
    pub index: u64,
    pub lhs: BigInt,
    pub rhs: BigInt,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityReport {
    pub max_index: u64,
    pub identities: Vec<&'static str>,
    pub first_failure: Option<IdentityFailure>,
    pub notes: Vec<String>,
}

impl IdentityReport {
    pub fn ok(&self) -> bool {
        self.first_failure.is_none()
    }
}

pub const IDENTITIES: [&str; 9] = [
    "d_l·d_{l+1} + 1 = (c_l + 2)²",
    "d_k + 1 = −2·s_k²",
    "3·d_k + 1 = −2·t_k²",
    "2·s_k·s_{k−1} = c_{k−1}",
    "2·t_k·t_{k−1} = 3·c_{k−1} + 4",
    "3·(s_k·s_{k−1} + 1) = t_k·t_{k−1} + 1",
    "t_k² − 3·s_k² = 1",
    "recurrence = closed form",
    "c increasing, d decreasing",
];

/// Check every identity exactly for indices `0..=max_index`.
pub fn check_identities(max_index: u64) -> IdentityReport {
    let n = max_index as usize + 2;
    let cs = SeqFamily::C.values(n);
    let ds = SeqFamily::D.values(n);
    let ss = SeqFamily::S.values(n);
    let ts = SeqFamily::T.values(n);
    let one = BigInt::one();
    let two = BigInt::from(2);
    let three = BigInt::from(3);

    let mut failure = None;
    let mut check = |identity: &'static str, index: usize, lhs: BigInt, rhs: BigInt| {
        if failure.is_none() && lhs != rhs {
            failure = Some(IdentityFailure {
                identity,
                index: index as u64,
                lhs,
                rhs,
            });
        }
    };
    for k in 0..=max_index as usize {
        let ck2 = &cs[k] + &two;
        check(IDENTITIES[0], k, &ds[k] * &ds[k + 1] + &one, &ck2 * &ck2);
        check(IDENTITIES[1], k, &ds[k] + &one, -(&two * &ss[k] * &ss[k]));
        check(IDENTITIES[2], k, &three * &ds[k] + &one, -(&two * &ts[k] * &ts[k]));
        if k >= 1 {
            check(IDENTITIES[3], k, &two * &ss[k] * &ss[k - 1], cs[k - 1].clone());
            check(
                IDENTITIES[4],
                k,
                &two * &ts[k] * &ts[k - 1],
                &three * &cs[k - 1] + 4,
            );
            check(
                IDENTITIES[5],
                k,
                &three * (&ss[k] * &ss[k - 1] + &one),
                &ts[k] * &ts[k - 1] + &one,
            );
            check(IDENTITIES[8], k, BigInt::from(i32::from(cs[k] > cs[k - 1] && ds[k] < ds[k - 1])), one.clone());
        }
        check(IDENTITIES[6], k, &ts[k] * &ts[k] - &three * &ss[k] * &ss[k], one.clone());
        for (fam, vals) in [
            (SeqFamily::C, &cs),
            (SeqFamily::D, &ds),
            (SeqFamily::S, &ss),
            (SeqFamily::T, &ts),
        ] {
            check(IDENTITIES[7], k, vals[k].clone(), fam.term(k as i64));
        }
    }
    let misprint = LinRec2::new(14, -1, 6, 0, 8).term(2);
    IdentityReport {
        max_index,
        identities: IDENTITIES.to_vec(),
        first_failure: failure,
        notes: vec![format!(
            "c-recurrence constant is +8; the constant +6 would give c_2 = {misprint}, \
             while the closed form gives c_2 = {}",
            cs[2]
        )],
    }
}

/// `true` iff `n` is `d_l` for some `l ≥ 0`; returns that `l`.
pub fn index_of_d(n: &BigInt) -> Option<u64> {
    if !n.is_zero() && n > &BigInt::zero() {
        return None;
    }
    SeqFamily::D
        .rec()
        .iter()
        .take_while(|v| v >= n)
        .position(|v| &v == n)
        .map(|p| p as u64)
}
