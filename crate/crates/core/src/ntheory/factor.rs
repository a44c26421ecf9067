//! Budgeted integer factorization: trial division, then Brent's variant of
//! Pollard rho with deterministic polynomial increments. Values that fit a
//! machine double-word use word arithmetic; anything larger falls back to
//! BigUint. Factors that resist the budget are surfaced as certified
//! composite cofactors, never dropped.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::sync::OnceLock;

use super::primality::{mulmod_u128, primality, Primality};
use crate::error::domain;
use crate::Result;

/// Effort budget for [`factorize`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FactorEffort {
    /// Trial division to 10^6 and a rho budget suited to ~25-digit inputs.
    Fast,
    /// Same trial bound, much larger rho budget (stretch-tier inputs).
    Deep,
}

impl FactorEffort {
    fn rho_iterations(self) -> u64 {
        match self {
            FactorEffort::Fast => 1 << 22,
            FactorEffort::Deep => 1 << 27,
        }
    }

    /// Largest prime factor the effort is guaranteed to find (trial bound).
    pub fn guarantee(self) -> u64 {
        1_000_000
    }
}

/// One certified prime factor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factor {
    pub prime: BigUint,
    pub exponent: u32,
    pub certainty: Primality,
}

/// Factorization of `|n|`; `cofactors` lists certified-composite leftovers
/// when the budget runs out, in which case `complete` is false.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub n: BigInt,
    pub factors: Vec<Factor>,
    pub cofactors: Vec<BigUint>,
    pub complete: bool,
}

impl Factorization {
    /// The distinct primes found, ascending.
    pub fn primes(&self) -> impl Iterator<Item = &BigUint> {
        self.factors.iter().map(|f| &f.prime)
    }

    /// Re-multiplies factors and cofactors; equals `|n|` by construction.
    pub fn product(&self) -> BigUint {
        let mut acc = BigUint::one();
        for f in &self.factors {
            acc *= f.prime.pow(f.exponent);
        }
        for c in &self.cofactors {
            acc *= c;
        }
        acc
    }

    /// True when any reported prime is only a probable prime.
    pub fn has_probable_primes(&self) -> bool {
        self.factors
            .iter()
            .any(|f| f.certainty == Primality::ProbablePrime)
    }
}

fn trial_primes() -> &'static [u64] {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| super::sieve::simple_sieve(1_000_000))
}

/// Brent-rho on a word-sized odd composite. Returns a nontrivial factor or
/// None once the iteration budget is exhausted across polynomial offsets.
fn brent_rho_u128(n: u128, max_iterations: u64) -> Option<u128> {
    debug_assert!(n > 1 && n % 2 == 1); // caller certifies compositeness
    let mut spent = 0u64;
    for c in 1u128..1024 {
        let f = |x: u128| {
            let s = mulmod_u128(x, x, n) + c;
            if s >= n {
                s - n
            } else {
                s
            }
        };
        let mut y = 2u128;
        let mut r = 1u64;
        let mut q = 1u128;
        let mut g = 1u128;
        let mut x = y;
        let mut ys = y;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0u64;
            while k < r && g == 1 {
                ys = y;
                let batch = 128.min(r - k);
                for _ in 0..batch {
                    y = f(y);
                    q = mulmod_u128(q, x.abs_diff(y), n);
                }
                g = gcd_u128(q, n);
                k += batch;
                spent += batch;
                if spent >= max_iterations && g == 1 {
                    return None;
                }
            }
            r *= 2;
        }
        if g == n {
            // replay from the checkpoint one step at a time
            g = loop {
                ys = f(ys);
                let d = gcd_u128(x.abs_diff(ys), n);
                if d > 1 {
                    break d;
                }
            };
        }
        if g > 1 && g < n {
            return Some(g);
        }
        // g == n: the whole cycle collapsed; retry with the next offset
    }
    None
}

fn gcd_u128(a: u128, b: u128) -> u128 {
    let (mut a, mut b) = (a, b);
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Brent-rho over BigUint for inputs beyond 2^127.
fn brent_rho_big(n: &BigUint, max_iterations: u64) -> Option<BigUint> {
    let mut spent = 0u64;
    for c in 1u32..1024 {
        let c = BigUint::from(c);
        let f = |x: &BigUint| (x * x + &c) % n;
        let mut y = BigUint::from(2u32);
        let mut r = 1u64;
        let mut q = BigUint::one();
        let mut g = BigUint::one();
        let mut x = y.clone();
        let mut ys = y.clone();
        while g.is_one() {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0u64;
            while k < r && g.is_one() {
                ys = y.clone();
                let batch = 128.min(r - k);
                for _ in 0..batch {
                    y = f(&y);
                    let diff = if x > y { &x - &y } else { &y - &x };
                    q = q * diff % n;
                }
                g = q.gcd(n);
                k += batch;
                spent += batch;
                if spent >= max_iterations && g.is_one() {
                    return None;
                }
            }
            r *= 2;
        }
        if &g == n {
            g = loop {
                ys = f(&ys);
                let diff = if x > ys { &x - &ys } else { &ys - &x };
                let d = diff.gcd(n);
                if !d.is_one() {
                    break d;
                }
            };
        }
        if !g.is_one() && &g < n {
            return Some(g);
        }
    }
    None
}

fn push_factor(factors: &mut Vec<(BigUint, u32)>, p: BigUint, k: u32) {
    if let Some(entry) = factors.iter_mut().find(|(q, _)| *q == p) {
        entry.1 += k;
    } else {
        factors.push((p, k));
    }
}

/// Complete or budget-limited factorization of `n != 0`.
pub fn factorize(n: &BigInt, effort: FactorEffort) -> Result<Factorization> {
    if n.is_zero() {
        return Err(domain("cannot factor zero"));
    }
    let mut remaining = n.abs().to_biguint().expect("abs");
    let mut factors: Vec<(BigUint, u32)> = Vec::new();
    let mut cofactors: Vec<BigUint> = Vec::new();

    // trial division; word arithmetic once the value fits
    let trial_u128 = |small: &mut u128, factors: &mut Vec<(BigUint, u32)>, from: u64| {
        for &p in trial_primes() {
            if p < from {
                continue;
            }
            let p = p as u128;
            if p * p > *small {
                break;
            }
            let mut k = 0u32;
            while (*small).is_multiple_of(p) {
                *small /= p;
                k += 1;
            }
            if k > 0 {
                push_factor(factors, BigUint::from(p), k);
            }
        }
    };
    if let Some(mut small) = remaining.to_u128() {
        trial_u128(&mut small, &mut factors, 0);
        remaining = BigUint::from(small);
    } else {
        let mut last_p = 0u64;
        for &p in trial_primes() {
            if remaining.is_one() {
                break;
            }
            let pb = BigUint::from(p);
            if &pb * &pb > remaining {
                break;
            }
            let mut k = 0u32;
            loop {
                let (q, r) = remaining.div_rem(&pb);
                if r.is_zero() {
                    remaining = q;
                    k += 1;
                } else {
                    break;
                }
            }
            if k > 0 {
                push_factor(&mut factors, pb, k);
            }
            last_p = p;
            if remaining.to_u128().is_some() {
                break;
            }
        }
        if let Some(mut small) = remaining.to_u128() {
            trial_u128(&mut small, &mut factors, last_p + 1);
            remaining = BigUint::from(small);
        }
    }
    // recursive splitting with rho
    let mut stack = vec![remaining];
    while let Some(m) = stack.pop() {
        if m.is_one() {
            continue;
        }
        match primality(&m) {
            Primality::Prime | Primality::ProbablePrime => {
                push_factor(&mut factors, m, 1);
                continue;
            }
            Primality::Composite => {}
        }
        // perfect powers: rho behaves badly on p^2; peel roots first
        if let Some((root, k)) = perfect_power(&m) {
            for _ in 0..k {
                stack.push(root.clone());
            }
            continue;
        }
        let split = if let Some(w) = m.to_u128() {
            brent_rho_u128(w, effort.rho_iterations()).map(BigUint::from)
        } else {
            brent_rho_big(&m, effort.rho_iterations())
        };
        match split {
            Some(d) => {
                stack.push(&m / &d);
                stack.push(d);
            }
            None => cofactors.push(m),
        }
    }

    factors.sort_by(|a, b| a.0.cmp(&b.0));
    cofactors.sort();
    let complete = cofactors.is_empty();
    let factors = factors
        .into_iter()
        .map(|(prime, exponent)| {
            let certainty = primality(&prime);
            Factor {
                prime,
                exponent,
                certainty,
            }
        })
        .collect();
    Ok(Factorization {
        n: n.clone(),
        factors,
        cofactors,
        complete,
    })
}

/// Detects m = root^k with k >= 2, returning the smallest such root.
fn perfect_power(m: &BigUint) -> Option<(BigUint, u32)> {
    let bits = m.bits();
    for k in (2..=bits.min(80) as u32).rev() {
        let r = super::integer_root(m, k);
        if r <= BigUint::one() {
            continue;
        }
        if r.pow(k) == *m {
            return Some((r, k));
        }
    }
    None
}
