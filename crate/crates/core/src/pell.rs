//! Solver for `Z² − D·x² = N`: fundamental unit, fundamental solution
//! classes and the orbits they generate.
//!
//! A problem may carry a weight `w | D`; its solutions are the `(Z, x)` with
//! `w | Z`, reported as `z = Z/w`. This is how `3z² + 2d·y² = 3 − d` is
//! solved when `3 ∤ d` (multiply by 3 and put `Z = 3z`).

use std::fmt;

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::quad_ring::{exact_sqrt, QuadInt};
use crate::sequences;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PellError {
    #[error("D = {0} must be a positive nonsquare integer")]
    BadD(BigInt),
    #[error("N must be nonzero")]
    ZeroN,
    #[error("weight {w} must be positive and divide D = {d}")]
    BadWeight { w: BigInt, d: BigInt },
    #[error("index k = {0} out of range")]
    BadIndex(i64),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PellProblem {
    pub d: BigInt,
    pub n: BigInt,
    pub weight: BigInt,
}

/// Which unknown of the system the second coordinate is.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Form {
    /// `z² + 2d_k·x² = 1 − d_k`
    X,
    /// `3z² + 2d_k·y² = 3 − d_k`
    Y,
}

impl Form {
    pub fn letter(self) -> &'static str {
        match self {
            Form::X => "x",
            Form::Y => "y",
        }
    }
}

impl PellProblem {
    pub fn new(d: impl Into<BigInt>, n: impl Into<BigInt>) -> Result<Self, PellError> {
        PellProblem::weighted(d, n, 1)
    }

    pub fn weighted(
        d: impl Into<BigInt>,
        n: impl Into<BigInt>,
        weight: impl Into<BigInt>,
    ) -> Result<Self, PellError> {
        let (d, n, weight) = (d.into(), n.into(), weight.into());
        if !d.is_positive() || exact_sqrt(&d).is_some() {
            return Err(PellError::BadD(d));
        }
        if n.is_zero() {
            return Err(PellError::ZeroN);
        }
        if !weight.is_positive() || !d.is_multiple_of(&weight) {
            return Err(PellError::BadWeight { w: weight, d });
        }
        Ok(PellProblem { d, n, weight })
    }

    /// `z² − (−2d_k)·x² = 1 − d_k`.
    pub fn x_form(k: i64) -> Result<Self, PellError> {
        if k < 0 {
            return Err(PellError::BadIndex(k));
        }
        let dk = sequences::d(k);
        PellProblem::new(-2 * &dk, 1 - &dk)
    }

    /// `3z² + 2d_k·y² = 3 − d_k`, divided by 3 when `3 | d_k`, otherwise in
    /// weighted form `(3z)² − (−6d_k)·y² = 9 − 3d_k`.
    pub fn y_form(k: i64) -> Result<Self, PellError> {
        if k < 0 {
            return Err(PellError::BadIndex(k));
        }
        let dk = sequences::d(k);
        if dk.is_multiple_of(&BigInt::from(3)) {
            PellProblem::new(-2 * &dk / 3, (3 - &dk) / 3)
        } else {
            PellProblem::y_form_weighted(k)
        }
    }

    /// `(3z)² − (−6d_k)·y² = 9 − 3d_k`, whose unit is `−6d_k − 1 + 2t_k√(−6d_k)`.
    pub fn y_form_weighted(k: i64) -> Result<Self, PellError> {
        if k < 0 {
            return Err(PellError::BadIndex(k));
        }
        let dk = sequences::d(k);
        PellProblem::weighted(-6 * &dk, 9 - 3 * &dk, 3)
    }

    pub fn for_form(form: Form, k: i64) -> Result<Self, PellError> {
        match form {
            Form::X => PellProblem::x_form(k),
            Form::Y => PellProblem::y_form(k),
        }
    }

    pub fn is_solution(&self, z: &BigInt, x: &BigInt) -> bool {
        let big_z = z * &self.weight;
        &big_z * &big_z - &self.d * x * x == self.n
    }
}

impl fmt::Display for PellProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.weight.is_one() {
            write!(f, "z² − {}·x² = {}", self.d, self.n)
        } else {
            write!(f, "({}z)² − {}·x² = {}", self.weight, self.d, self.n)
        }
    }
}

/// `u² − D·v² = 1` with `u, v > 0` minimal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PellUnit {
    pub u: BigInt,
    pub v: BigInt,
}

impl PellUnit {
    pub fn as_quad(&self, d: &BigInt) -> QuadInt {
        QuadInt::new(self.u.clone(), self.v.clone(), d.clone())
    }
}

/// Fundamental unit from the periodic continued fraction of `√D`.
pub fn fundamental_unit(d: &BigInt) -> Result<PellUnit, PellError> {
    if !d.is_positive() || exact_sqrt(d).is_some() {
        return Err(PellError::BadD(d.clone()));
    }
    let a0 = d.sqrt();
    // √D = [a0; a1, a2, ...] with (m, q, a) the usual complete-quotient state
    let (mut m, mut q, mut a) = (BigInt::zero(), BigInt::one(), a0.clone());
    let (mut p_prev, mut p) = (BigInt::one(), a0.clone());
    let (mut q_prev, mut qq) = (BigInt::zero(), BigInt::one());
    loop {
        if &p * &p - d * &qq * &qq == BigInt::one() {
            return Ok(PellUnit { u: p, v: qq });
        }
        m = &a * &q - &m;
        q = (d - &m * &m) / &q;
        a = (&a0 + &m) / &q;
        let p_next = &a * &p + &p_prev;
        let q_next = &a * &qq + &q_prev;
        p_prev = std::mem::replace(&mut p, p_next);
        q_prev = std::mem::replace(&mut qq, q_next);
    }
}

/// A fundamental solution `(z0, x0)`; the sign of `x0` tells conjugate
/// classes apart.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PellClass {
    pub z0: BigInt,
    pub x0: BigInt,
    pub problem: PellProblem,
}

impl PellClass {
    fn big_z(&self) -> BigInt {
        &self.z0 * &self.problem.weight
    }

    pub fn as_quad(&self) -> QuadInt {
        QuadInt::new(self.big_z(), self.x0.clone(), self.problem.d.clone())
    }
}

/// `(Z1 + x1√D)/(Z2 + x2√D)` is integral, i.e. both solutions lie in one orbit.
fn same_class(p: &PellProblem, a: &PellClass, b: &PellClass) -> bool {
    let (z1, z2) = (a.big_z(), b.big_z());
    let n = p.n.abs();
    (&z1 * &z2 - &p.d * &a.x0 * &b.x0).is_multiple_of(&n)
        && (&z1 * &b.x0 - &z2 * &a.x0).is_multiple_of(&n)
}

/// `|x0|` bound for fundamental solutions.
pub fn class_x_bound(p: &PellProblem, unit: &PellUnit) -> BigInt {
    let n = p.n.abs();
    let num: BigInt = if p.n.is_positive() {
        (&unit.u - 1) * &n
    } else {
        (&unit.u + 1) * &n
    };
    Roots::sqrt(&(num / (2 * &p.d)))
}

/// `z0` bound for fundamental solutions (`N > 0`).
pub fn class_z_bound(p: &PellProblem, unit: &PellUnit) -> BigInt {
    let n = p.n.abs();
    let num: BigInt = if p.n.is_positive() {
        (&unit.u + 1) * &n
    } else {
        (&unit.u - 1) * &n
    };
    Roots::sqrt(&(num / 2))
}

/// Points `(Z, x)` with `Z² = N + D·x²`, `0 ≤ x ≤ bound`, `Z ≥ 0`.
fn square_points(p: &PellProblem, bound: &BigInt) -> Vec<(BigInt, BigInt)> {
    let mut out = Vec::new();
    if let (Some(d), Some(n), Some(b)) = (p.d.to_i128(), p.n.to_i128(), bound.to_i128()) {
        if b < (1i128 << 40) && d < (1i128 << 40) && n.abs() < (1i128 << 80) {
            for x in 0..=b {
                let rhs = n + d * x * x;
                if rhs < 0 {
                    continue;
                }
                let r = (rhs as u128).sqrt() as i128;
                if r * r == rhs {
                    out.push((BigInt::from(r), BigInt::from(x)));
                }
            }
            return out;
        }
    }
    let mut x = BigInt::zero();
    while &x <= bound {
        let rhs = &p.n + &p.d * &x * &x;
        if let Some(z) = exact_sqrt(&rhs) {
            out.push((z, x.clone()));
        }
        x += 1;
    }
    out
}

/// Every orbit of solutions under the unit, one representative each, sorted
/// by `(z0, x0)`. Ambiguous orbits keep the representative with `x0 ≥ 0`.
pub fn fundamental_classes(p: &PellProblem) -> Vec<PellClass> {
    let unit = fundamental_unit(&p.d).expect("validated problem");
    let bound = class_x_bound(p, &unit);
    let mut candidates = Vec::new();
    for (big_z, x) in square_points(p, &bound) {
        if !big_z.is_multiple_of(&p.weight) || (big_z.is_zero() && x.is_zero()) {
            continue;
        }
        let z0 = &big_z / &p.weight;
        candidates.push(PellClass {
            z0: z0.clone(),
            x0: x.clone(),
            problem: p.clone(),
        });
        if !x.is_zero() {
            candidates.push(PellClass {
                z0,
                x0: -x,
                problem: p.clone(),
            });
        }
    }
    let mut kept: Vec<PellClass> = Vec::new();
    for c in candidates {
        if !kept.iter().any(|k| same_class(p, k, &c)) {
            kept.push(c);
        }
    }
    kept.sort_by(|a, b| (&a.z0, &a.x0).cmp(&(&b.z0, &b.x0)));
    kept
}

/// The orbit `(z0 + x0√D)·εᵐ`, `m ≥ 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolutionSeq {
    pub class: PellClass,
    pub unit: PellUnit,
}

impl SolutionSeq {
    pub fn new(class: PellClass) -> Self {
        let unit = fundamental_unit(&class.problem.d).expect("validated problem");
        SolutionSeq { class, unit }
    }

    pub fn with_unit(class: PellClass, unit: PellUnit) -> Self {
        SolutionSeq { class, unit }
    }

    /// `(z_m, x_m)`.
    pub fn term(&self, m: u64) -> (BigInt, BigInt) {
        let e = self.unit.as_quad(&self.class.problem.d).pow(m);
        let v = self.class.as_quad().mul(&e).expect("same ring");
        (v.a / &self.class.problem.weight, v.b)
    }

    pub fn iter(&self) -> SolutionIter {
        SolutionIter {
            cur: self.class.as_quad(),
            unit: self.unit.as_quad(&self.class.problem.d),
            weight: self.class.problem.weight.clone(),
        }
    }

    /// First `count` values of `z`.
    pub fn z_terms(&self, count: usize) -> Vec<BigInt> {
        self.iter().take(count).map(|(z, _)| z).collect()
    }

    pub fn x_terms(&self, count: usize) -> Vec<BigInt> {
        self.iter().take(count).map(|(_, x)| x).collect()
    }
}

/// `z`-coordinate of the `m`-th solution of the class.
pub fn seq_term(s: &SolutionSeq, m: u64) -> BigInt {
    s.term(m).0
}

pub struct SolutionIter {
    cur: QuadInt,
    unit: QuadInt,
    weight: BigInt,
}

impl Iterator for SolutionIter {
    type Item = (BigInt, BigInt);

    fn next(&mut self) -> Option<(BigInt, BigInt)> {
        let next = self.cur.mul(&self.unit).expect("same ring");
        let out = std::mem::replace(&mut self.cur, next);
        Some((out.a / &self.weight, out.b))
    }
}

/// All solutions with `1 ≤ z ≤ zmax` and `x ≥ 0`, sorted by `z`, by scanning `x`.
pub fn solve_below(p: &PellProblem, zmax: &BigInt) -> Vec<(BigInt, BigInt)> {
    let zz = zmax * &p.weight;
    if let (Some(d), Some(n), Some(w), Some(zz)) =
        (p.d.to_i128(), p.n.to_i128(), p.weight.to_i128(), zz.to_i128())
    {
        if zz < (1i128 << 40) && d < (1i128 << 40) && n.abs() < (1i128 << 80) {
            return solve_below_small(d, n, w, zz);
        }
    }
    let mut out = Vec::new();
    let mut x = BigInt::zero();
    loop {
        let rhs = &p.n + &p.d * &x * &x;
        if rhs > &zz * &zz {
            break;
        }
        if let Some(big_z) = exact_sqrt(&rhs) {
            if big_z.is_positive() && big_z.is_multiple_of(&p.weight) {
                out.push((big_z / &p.weight, x.clone()));
            }
        }
        x += 1;
    }
    out.sort();
    out
}

fn solve_below_small(d: i128, n: i128, w: i128, zz: i128) -> Vec<(BigInt, BigInt)> {
    let mut out = Vec::new();
    let limit = zz * zz;
    let mut x: i128 = 0;
    loop {
        let rhs = n + d * x * x;
        if rhs > limit {
            break;
        }
        if rhs > 0 {
            let r = (rhs as u128).sqrt() as i128;
            if r * r == rhs && r % w == 0 {
                out.push((BigInt::from(r / w), BigInt::from(x)));
            }
        }
        x += 1;
    }
    out.sort();
    out
}
