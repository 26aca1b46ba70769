//! Residues of the `ν`/`ω` sequences modulo `−2d_k` and `8d_k²`, the
//! compatibility and parity checks, the descent to fundamental solutions
//! and the small-`n` elimination.
//!
//! Moduli are stored positive; residues live in `[0, M)`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::pell::{PellClass, PellProblem, PellUnit, SolutionSeq};
use crate::sequences;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SieveError {
    #[error("index k = {0} must be at least 1")]
    BadIndex(i64),
    #[error("modulus must be at least 2")]
    BadModulus,
    #[error("m = {m} and n = {n} have different parity")]
    Parity { m: u64, n: u64 },
    #[error("n = {n} is outside the small range 2 ≤ n < (2/3)·(−d_k)^(1/4)")]
    NotSmall { n: u64 },
    #[error("m = {m} must satisfy n ≤ m ≤ 2n for n = {n}")]
    MOutOfRange { m: u64, n: u64 },
}

/// Class sign `+` or `−`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub const BOTH: [Sign; 2] = [Sign::Plus, Sign::Minus];

    pub fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SieveContext {
    pub k: i64,
    pub d: BigInt,
    pub s: BigInt,
    pub t: BigInt,
    pub s_prev: BigInt,
    pub t_prev: BigInt,
    /// `c_{k−1} + 2`
    pub z0: BigInt,
    /// `−2d_k`
    pub mod_small: BigInt,
    /// `8d_k²`
    pub mod_large: BigInt,
}

impl SieveContext {
    pub fn new(k: i64) -> Result<Self, SieveError> {
        if k < 1 {
            return Err(SieveError::BadIndex(k));
        }
        let d = sequences::d(k);
        assert!(d.is_odd(), "d_k is odd");
        Ok(SieveContext {
            k,
            s: sequences::s(k),
            t: sequences::t(k),
            s_prev: sequences::s(k - 1),
            t_prev: sequences::t(k - 1),
            z0: sequences::c(k - 1) + 2,
            mod_small: -2 * &d,
            mod_large: 8 * &d * &d,
            d,
        })
    }

    /// `ν^±`: `(z0 ± s_{k−1}√(−2d_k))·(−2d_k − 1 + 2s_k√(−2d_k))^m`.
    pub fn nu(&self, sign: Sign) -> SolutionSeq {
        let problem = PellProblem::x_form(self.k).expect("k ≥ 1");
        let class = PellClass {
            z0: self.z0.clone(),
            x0: &self.s_prev * sign.value(),
            problem,
        };
        let unit = PellUnit {
            u: -2 * &self.d - 1,
            v: 2 * &self.s,
        };
        SolutionSeq::with_unit(class, unit)
    }

    /// `ω^±` in the weighted form `(3z)² − (−6d_k)y² = 9 − 3d_k`.
    pub fn omega(&self, sign: Sign) -> SolutionSeq {
        let problem = PellProblem::y_form_weighted(self.k).expect("k ≥ 1");
        let class = PellClass {
            z0: self.z0.clone(),
            x0: &self.t_prev * sign.value(),
            problem,
        };
        let unit = PellUnit {
            u: -6 * &self.d - 1,
            v: 2 * &self.t,
        };
        SolutionSeq::with_unit(class, unit)
    }

    /// `(−1)^m (z0 + 2d·m²·z0 + 4d·s·m·x0) mod 8d²`.
    pub fn nu_closed_residue(&self, z0: &BigInt, x0: &BigInt, m: u64) -> BigInt {
        let mb = BigInt::from(m);
        let v: BigInt = z0 + 2 * &self.d * &mb * &mb * z0 + 4 * &self.d * &self.s * &mb * x0;
        let v = if m % 2 == 0 { v } else { -v };
        v.mod_floor(&self.mod_large)
    }

    /// `(−1)^n (z1 + 6d·n²·z1 + 4d·t·n·y1) mod 8d²`.
    pub fn omega_closed_residue(&self, z1: &BigInt, y1: &BigInt, n: u64) -> BigInt {
        let nb = BigInt::from(n);
        let v: BigInt = z1 + 6 * &self.d * &nb * &nb * z1 + 4 * &self.d * &self.t * &nb * y1;
        let v = if n % 2 == 0 { v } else { -v };
        v.mod_floor(&self.mod_large)
    }

    /// `(−1)^m z0 mod −2d`.
    pub fn alternating_residue(&self, z0: &BigInt, m: u64) -> BigInt {
        let v = if m % 2 == 0 { z0.clone() } else { -z0 };
        v.mod_floor(&self.mod_small)
    }
}

/// Residues of the first `count` `z`-terms, by the recurrence
/// `z_{m+2} = 2u·z_{m+1} − z_m` carried out modulo `modulus`.
pub fn residue_pattern(
    seq: &SolutionSeq,
    modulus: &BigInt,
    count: usize,
) -> Result<Vec<BigInt>, SieveError> {
    if modulus < &BigInt::from(2) {
        return Err(SieveError::BadModulus);
    }
    let (z0, _) = seq.term(0);
    let (z1, _) = seq.term(1);
    let two_u = (BigInt::from(2) * &seq.unit.u).mod_floor(modulus);
    let mut out = Vec::with_capacity(count);
    let (mut a, mut b) = (z0.mod_floor(modulus), z1.mod_floor(modulus));
    for _ in 0..count {
        out.push(a.clone());
        let c = (&two_u * &b - &a).mod_floor(modulus);
        a = std::mem::replace(&mut b, c);
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Compatibility {
    Equal,
    Complementary,
    Incompatible,
}

impl Compatibility {
    pub fn name(self) -> &'static str {
        match self {
            Compatibility::Equal => "equal",
            Compatibility::Complementary => "complementary",
            Compatibility::Incompatible => "incompatible",
        }
    }
}

/// Either `z0 = z1`, or `z0 + z1 = −2d_k`, or `ν_m = ω_n` is impossible.
pub fn compatible_fundamentals(ctx: &SieveContext, z0: &BigInt, z1: &BigInt) -> Compatibility {
    if z0 == z1 {
        Compatibility::Equal
    } else if &(z0 + z1) == &ctx.mod_small {
        Compatibility::Complementary
    } else {
        Compatibility::Incompatible
    }
}

/// `m ≡ n (mod 2)`.
pub fn parity_filter(m: u64, n: u64) -> bool {
    m % 2 == n % 2
}

/// Both fundamental `z`'s even; needed for the parity argument.
pub fn fundamentals_even(ctx: &SieveContext) -> bool {
    ctx.z0.is_even()
}

/// `l` with `(z0² − 1)/d_k = d_l`, if any.
pub fn descend_fundamental(ctx: &SieveContext, z0: &BigInt) -> Option<u64> {
    let num: BigInt = z0 * z0 - 1;
    if !num.is_multiple_of(&ctx.d) {
        return None;
    }
    sequences::index_of_d(&(num / &ctx.d))
}

/// How the parity argument reaches its contradiction for one `(m, n, σ, τ)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProofRoute {
    /// `L² < −4d` and `R² < −4d`, which turn `L² ≡ R²` into `L = ±R`
    pub size_bounds: bool,
    /// `Some(true)` for `L = −R`, `Some(false)` for `L = R`
    pub relation: Option<bool>,
    /// `3s_k − s_{k−1}` or `s_k − s_{k−1}`
    pub factor: Option<BigInt>,
    /// `|(σm − τn)·factor|`, to be compared with `−2d_k`
    pub product: Option<BigInt>,
    pub eliminated: bool,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Elimination {
    pub m: u64,
    pub n: u64,
    pub signs: (Sign, Sign),
    /// `m² + σm − 3n² − 3τn`
    pub l: BigInt,
    /// `2(σm − τn)`
    pub r: BigInt,
    /// `z0·L ≢ R (mod −4d_k)`
    pub direct: bool,
    pub route: ProofRoute,
    pub eliminated: bool,
}

/// `81n⁴ < −16d_k`, i.e. `n < (2/3)·(−d_k)^{1/4}`.
pub fn is_small_n(ctx: &SieveContext, n: u64) -> bool {
    let nb = BigInt::from(n);
    BigInt::from(81) * nb.pow(4) < -16 * &ctx.d
}

/// The congruence chain for `ν_m^σ = ω_n^τ` with `n` below the bound.
pub fn eliminate_small_n(
    ctx: &SieveContext,
    m: u64,
    n: u64,
    signs: (Sign, Sign),
) -> Result<Elimination, SieveError> {
    if !parity_filter(m, n) {
        return Err(SieveError::Parity { m, n });
    }
    if n < 2 || !is_small_n(ctx, n) {
        return Err(SieveError::NotSmall { n });
    }
    if m < n || m > 2 * n {
        return Err(SieveError::MOutOfRange { m, n });
    }
    let (sigma, tau) = (signs.0.value(), signs.1.value());
    let (mb, nb) = (BigInt::from(m), BigInt::from(n));
    let l = &mb * &mb + sigma * &mb - 3 * &nb * &nb - 3 * tau * &nb;
    let half_r = sigma * &mb - tau * &nb;
    let r = 2 * &half_r;
    let four_d = -4 * &ctx.d;
    let diff: BigInt = &ctx.z0 * &l - &r;
    let direct = !diff.is_multiple_of(&four_d);
    let route = proof_route(ctx, &l, &r, &half_r);
    assert!(
        !route.eliminated || direct,
        "proof route eliminated a pair whose congruence holds"
    );
    Ok(Elimination {
        m,
        n,
        signs,
        l,
        r,
        direct,
        eliminated: direct,
        route,
    })
}

fn proof_route(ctx: &SieveContext, l: &BigInt, r: &BigInt, half_r: &BigInt) -> ProofRoute {
    let four_d = -4 * &ctx.d;
    let two_d = -2 * &ctx.d;
    let size_bounds = l * l < four_d && r * r < four_d;
    let mut route = ProofRoute {
        size_bounds,
        relation: None,
        factor: None,
        product: None,
        eliminated: false,
        reason: String::new(),
    };
    if !size_bounds {
        route.reason = "size bounds fail; L = ±R not forced".into();
        return route;
    }
    let minus = l == &-r;
    if !minus && l != r {
        route.eliminated = true;
        route.reason = "L² ≡ R² with both below −4d forces L = ±R, which fails".into();
        return route;
    }
    route.relation = Some(minus);
    if half_r.is_zero() {
        // R = 0 forces L = 0
        route.eliminated = !l.is_zero();
        route.reason = "R = 0 but L ≠ 0".into();
        return route;
    }
    let factor = if minus {
        3 * &ctx.s - &ctx.s_prev
    } else {
        &ctx.s - &ctx.s_prev
    };
    let product = (half_r * &factor).abs();
    route.eliminated = product.is_positive() && product < two_d;
    route.reason = if route.eliminated {
        "0 < |(σm − τn)·factor| < −2d contradicts divisibility by −2d".into()
    } else {
        "product bound fails".into()
    };
    route.factor = Some(factor);
    route.product = Some(product);
    route
}

/// All `(m, n)` the elimination applies to at this `k`; `n ≤ m ≤ 2n`
/// contains the range `n ≤ m < n√3` left by the growth estimates.
pub fn small_domain(ctx: &SieveContext) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    let mut n = 2u64;
    while is_small_n(ctx, n) {
        let mut m = n;
        while m <= 2 * n {
            out.push((m, n));
            m += 2;
        }
        n += 1;
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EliminationSummary {
    pub k: i64,
    pub cases: usize,
    pub eliminated: usize,
    pub by_proof_route: usize,
    pub survivors: Vec<Elimination>,
}

pub fn eliminate_all(ctx: &SieveContext) -> EliminationSummary {
    let mut summary = EliminationSummary {
        k: ctx.k,
        cases: 0,
        eliminated: 0,
        by_proof_route: 0,
        survivors: Vec::new(),
    };
    for (m, n) in small_domain(ctx) {
        for a in Sign::BOTH {
            for b in Sign::BOTH {
                let e = eliminate_small_n(ctx, m, n, (a, b)).expect("in domain");
                summary.cases += 1;
                if e.route.eliminated {
                    summary.by_proof_route += 1;
                }
                if e.eliminated {
                    summary.eliminated += 1;
                } else {
                    summary.survivors.push(e);
                }
            }
        }
    }
    summary
}

/// Index and sign of every occurrence of `z` among the first terms of the
/// `±` sequences (which are increasing from index 1).
pub fn locate(seqs: &[(Sign, SolutionSeq)], z: &BigInt, max_index: usize) -> Vec<(Sign, u64)> {
    let mut out = Vec::new();
    for (sign, seq) in seqs {
        for (i, (v, _)) in seq.iter().take(max_index).enumerate() {
            if &v == z {
                out.push((*sign, i as u64));
            }
            if &v > z && i > 0 {
                break;
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParityWitness {
    pub z: BigInt,
    pub nu: (Sign, u64),
    pub omega: (Sign, u64),
    pub same_parity: bool,
}

/// Every common value `z ≤ zmax` of both equations, with the parity of its
/// `ν` and `ω` indices.
pub fn parity_witnesses(ctx: &SieveContext, zmax: &BigInt) -> Vec<ParityWitness> {
    let xs = crate::pell::solve_below(&PellProblem::x_form(ctx.k).expect("k ≥ 1"), zmax);
    let ys = crate::pell::solve_below(&PellProblem::y_form(ctx.k).expect("k ≥ 1"), zmax);
    let nus: Vec<_> = Sign::BOTH.iter().map(|&s| (s, ctx.nu(s))).collect();
    let omegas: Vec<_> = Sign::BOTH.iter().map(|&s| (s, ctx.omega(s))).collect();
    let mut zs: Vec<BigInt> = xs
        .iter()
        .filter(|(z, _)| ys.iter().any(|(w, _)| w == z))
        .map(|(z, _)| z.clone())
        .collect();
    zs.dedup();
    let mut out = Vec::new();
    for z in zs {
        for nu in locate(&nus, &z, 64) {
            for om in locate(&omegas, &z, 64) {
                out.push(ParityWitness {
                    z: z.clone(),
                    nu,
                    omega: om,
                    same_parity: parity_filter(nu.1, om.1),
                });
            }
        }
    }
    out
}
