//! Frobenius roots over finite fields.
//!
//! `frobenius_candidate_set(Q)` builds the set of rational units and
//! quadratic Frobenius roots attached to the field with `Q = q^f` elements:
//! the four rational values `±1, ±Q` together with one candidate per
//! admissible Frobenius trace from Waterhouse's classification. A conjugate
//! pair of roots `x^2 - a x + Q` is carried as a single candidate; sign
//! choices are expanded later, inside the norm product.
//!
//! Admissible traces (Waterhouse):
//!  (i)   gcd(a, q) = 1 and a^2 <= 4Q                      (ordinary)
//!  (ii)  f even: a = ±2 q^{f/2}
//!  (iii) f even, q != 1 mod 3: a = ±q^{f/2}
//!  (iv)  f odd, q in {2, 3}: a = ±q^{(f+1)/2}
//!  (v)   f odd, or f even with q != 1 mod 4: a = 0
//!
//! Case (ii) has discriminant zero — the "roots" are the rational numbers
//! ±q^{f/2} — so those candidates are folded into rational values rather
//! than carried as degenerate quadratics.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::ntheory::PrimePower;

/// A Frobenius-root candidate: either a rational unit or a conjugate pair
/// of quadratic roots encoded by (trace, norm).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum WeilCandidate {
    Rational(BigInt),
    Quadratic { trace: i64, norm: PrimePower },
}

impl WeilCandidate {
    /// Discriminant `a^2 - 4Q` of a quadratic candidate.
    pub fn discriminant(&self) -> Option<BigInt> {
        match self {
            WeilCandidate::Rational(_) => None,
            WeilCandidate::Quadratic { trace, norm } => {
                let a = BigInt::from(*trace);
                Some(&a * &a - BigInt::from(4u32) * BigInt::from(norm.value().clone()))
            }
        }
    }
}

/// Exact value `(x + y sqrt(d)) / 2` with integer `x`, `y`, `d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HalfQuadratic {
    pub x: BigInt,
    pub y: BigInt,
    pub d: BigInt,
}

impl HalfQuadratic {
    /// Norm `((x + y sqrt d)/2)((x - y sqrt d)/2) = (x^2 - d y^2)/4`, exact.
    pub fn norm(&self) -> BigInt {
        let num = &self.x * &self.x - &self.d * &self.y * &self.y;
        debug_assert!((&num % 4i32).is_zero());
        num / 4
    }
}

/// The admissible Frobenius traces over the field with `q^f` elements.
pub fn frobenius_traces(q: u64, f: u32) -> Vec<i64> {
    let qf = q.checked_pow(f).expect("q^f overflows u64");
    let four_q = (qf as u128) * 4;
    let amax = crate::ntheory::integer_root_u128(four_q, 2) as i64;
    let mut traces: Vec<i64> = Vec::new();
    for a in -amax..=amax {
        if (a * a) as u128 <= four_q && a.unsigned_abs() % q != 0 {
            traces.push(a); // (i): gcd(a, q) = 1 since q is prime
        }
    }
    if f.is_multiple_of(2) {
        let s = q.pow(f / 2) as i64;
        traces.extend([2 * s, -2 * s]); // (ii)
        if q % 3 != 1 {
            traces.extend([s, -s]); // (iii)
        }
        if q % 4 != 1 {
            traces.push(0); // (v), even-f branch
        }
    } else {
        if q == 2 || q == 3 {
            let s = q.pow(f.div_ceil(2)) as i64;
            traces.extend([s, -s]); // (iv)
        }
        traces.push(0); // (v), odd f
    }
    traces.sort_unstable();
    traces.dedup();
    traces
}

/// The set `S(Q)` of rational units and Frobenius roots for `Q = q^f`.
pub fn frobenius_candidate_set(q_power: &PrimePower) -> Vec<WeilCandidate> {
    let q = q_power.prime();
    let f = q_power.exponent();
    let big_q = BigInt::from(q_power.value().clone());
    let mut out = vec![
        WeilCandidate::Rational(BigInt::one()),
        WeilCandidate::Rational(-BigInt::one()),
        WeilCandidate::Rational(big_q.clone()),
        WeilCandidate::Rational(-big_q),
    ];
    for a in frobenius_traces(q, f) {
        let cand = WeilCandidate::Quadratic {
            trace: a,
            norm: q_power.clone(),
        };
        if cand.discriminant().map(|d| d.is_zero()).unwrap_or(false) {
            // double root a/2 = ±q^{f/2}: a rational Frobenius root
            out.push(WeilCandidate::Rational(BigInt::from(a / 2)));
        } else {
            out.push(cand);
        }
    }
    out
}

/// `beta^n = (x + y sqrt(D))/2` for the root `beta` of `x^2 - a x + Q`,
/// computed by the integer recurrence `c_{k+1} = a c_k - Q c_{k-1}`
/// (`c_0 = 0`, `c_1 = 1`): `x = a c_n - 2 Q c_{n-1}`, `y = c_n`,
/// `D = a^2 - 4Q`.
pub fn half_quadratic_power(trace: i64, norm: &PrimePower, n: u32) -> HalfQuadratic {
    assert!(n >= 1, "exponent must be positive");
    let a = BigInt::from(trace);
    let q = BigInt::from(norm.value().clone());
    let mut c_prev = BigInt::zero();
    let mut c_cur = BigInt::one();
    for _ in 0..n - 1 {
        let next = &a * &c_cur - &q * &c_prev;
        c_prev = std::mem::replace(&mut c_cur, next);
    }
    let x = &a * &c_cur - BigInt::from(2u32) * &q * &c_prev;
    let d = &a * &a - BigInt::from(4u32) * &q;
    HalfQuadratic { x, y: c_cur, d }
}
