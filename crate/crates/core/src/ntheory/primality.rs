//! Primality testing.
//!
//! Below `3.317e24` the answer is deterministic: a Miller-Rabin round for
//! each of the first 13 primes decides primality for all
//! `n < 3,317,044,064,679,887,385,961,981` (Sorenson & Webster). Above the
//! threshold we run a Baillie-PSW-style test (strong base-2 Miller-Rabin
//! plus a strong Lucas test with Selfridge parameters) and report
//! [`Primality::ProbablePrime`]; no BPSW pseudoprime is known.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::sync::OnceLock;

use super::{integer_root, jacobi};

/// Certainty grade attached to a primality answer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Primality {
    Composite,
    /// Deterministically prime (below the fixed Miller-Rabin threshold).
    Prime,
    /// Baillie-PSW probable prime (above the deterministic threshold).
    ProbablePrime,
}

impl Primality {
    pub fn is_prime(self) -> bool {
        matches!(self, Primality::Prime | Primality::ProbablePrime)
    }

    pub fn is_certain(self) -> bool {
        !matches!(self, Primality::ProbablePrime)
    }
}

/// Decimal form of the deterministic Miller-Rabin threshold.
pub const DETERMINISTIC_LIMIT_DECIMAL: &str = "3317044064679887385961981";

const MR_BASES: [u64; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];

fn deterministic_limit() -> &'static BigUint {
    static LIMIT: OnceLock<BigUint> = OnceLock::new();
    LIMIT.get_or_init(|| DETERMINISTIC_LIMIT_DECIMAL.parse().unwrap())
}

/// `a * b mod m` without overflow for any `m < 2^127`.
///
/// Fast path covers `m < 2^83` (enough for values up to `~9.7e24`) by
/// splitting `a` into 41-bit limbs; larger moduli take a doubling ladder.
pub fn mulmod_u128(a: u128, b: u128, m: u128) -> u128 {
    debug_assert!(m > 0);
    let (a, b) = (a % m, b % m);
    if m <= 1 << 63 {
        // products fit in u128 once both operands are reduced
        if a.leading_zeros() + b.leading_zeros() >= 128 {
            return a.wrapping_mul(b) % m;
        }
    }
    if m < 1 << 83 {
        // a = a1*2^41 + a0 with a1 < 2^42, so a1*b < 2^125
        let a1 = a >> 41;
        let a0 = a & ((1 << 41) - 1);
        let hi = (a1 * b) % m;
        ((hi << 41) % m + (a0 * b) % m) % m
    } else {
        // rare path: shift-and-add
        let mut result = 0u128;
        let mut a = a;
        let mut b = b;
        while b > 0 {
            if b & 1 == 1 {
                result = result.wrapping_add(a);
                if result >= m || result < a {
                    result = result.wrapping_sub(m);
                }
            }
            let doubled = a.wrapping_add(a);
            a = if doubled >= m || doubled < a {
                doubled.wrapping_sub(m)
            } else {
                doubled
            };
            b >>= 1;
        }
        result % m
    }
}

pub fn powmod_u128(mut base: u128, mut exp: u128, m: u128) -> u128 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u128;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulmod_u128(acc, base, m);
        }
        base = mulmod_u128(base, base, m);
        exp >>= 1;
    }
    acc
}

fn miller_rabin_round_u128(n: u128, base: u128) -> bool {
    // true = passes (possibly prime)
    let base = base % n;
    if base == 0 {
        return true;
    }
    let d = n - 1;
    let s = d.trailing_zeros();
    let d = d >> s;
    let mut x = powmod_u128(base, d, n);
    if x == 1 || x == n - 1 {
        return true;
    }
    for _ in 1..s {
        x = mulmod_u128(x, x, n);
        if x == n - 1 {
            return true;
        }
        if x == 1 {
            return false;
        }
    }
    false
}

/// Deterministic primality for `n < 2^83` (covered by the fixed base set).
pub fn is_prime_u128(n: u128) -> bool {
    debug_assert!(n < 1 << 83, "beyond deterministic machine-word range");
    if n < 2 {
        return false;
    }
    for &p in &MR_BASES {
        let p = p as u128;
        if n == p {
            return true;
        }
        if n.is_multiple_of(p) {
            return false;
        }
    }
    MR_BASES
        .iter()
        .all(|&b| miller_rabin_round_u128(n, b as u128))
}

pub fn is_prime_u64(n: u64) -> bool {
    is_prime_u128(n as u128)
}

fn miller_rabin_round_big(n: &BigUint, base: u64) -> bool {
    let n_minus_1 = n - 1u32;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    let base = BigUint::from(base) % n;
    if base.is_zero() {
        return true;
    }
    let mut x = base.modpow(&d, n);
    if x.is_one() || x == n_minus_1 {
        return true;
    }
    for _ in 1..s {
        x = x.modpow(&BigUint::from(2u32), n);
        if x == n_minus_1 {
            return true;
        }
        if x.is_one() {
            return false;
        }
    }
    false
}

/// Strong Lucas probable-prime test with Selfridge parameter selection.
fn strong_lucas_prp(n: &BigUint) -> bool {
    // find D in 5, -7, 9, -11, ... with (D/n) = -1
    let n_int = BigInt::from(n.clone());
    let mut d = BigInt::from(5);
    let mut tries = 0u32;
    let dd = loop {
        let j = jacobi(&d, n).expect("n odd >= 3");
        if j == 0 && d.abs() < n_int {
            return false; // proper factor found
        }
        if j == -1 {
            break d;
        }
        tries += 1;
        if tries == 20 {
            // perfect squares never find D; everything else does quickly
            let r = integer_root(n, 2);
            if &r * &r == *n {
                return false;
            }
        }
        d = if d.is_positive() {
            -(d + 2i32)
        } else {
            -(d - 2i32)
        };
    };
    // P = 1, Q = (1 - D)/4
    let q: BigInt = (BigInt::one() - &dd) / 4;
    let n_plus_1 = n + 1u32;
    let s = n_plus_1.trailing_zeros().unwrap_or(0);
    let t = &n_plus_1 >> s;

    let modn = |v: &BigInt| -> BigInt { v.mod_floor(&n_int) };
    let halve = |v: BigInt| -> BigInt {
        if v.is_even() {
            (v / 2i32).mod_floor(&n_int)
        } else {
            ((v + &n_int) / 2i32).mod_floor(&n_int)
        }
    };

    // compute U_t, V_t, Q^t by binary ladder over the bits of t
    let mut u = BigInt::one();
    let mut v = BigInt::one(); // P = 1
    let mut qk = modn(&q);
    let bits = t.bits();
    for i in (0..bits - 1).rev() {
        // double: (U, V, Q^k) -> (U V, V^2 - 2 Q^k, Q^2k)
        u = modn(&(&u * &v));
        v = modn(&(&v * &v - 2 * &qk));
        qk = modn(&(&qk * &qk));
        if t.bit(i) {
            // increment: U' = (P U + V)/2, V' = (D U + P V)/2, Q^k -> Q^{k+1}
            let u_next = halve(&u + &v);
            let v_next = halve(&dd * &u + &v);
            u = u_next;
            v = v_next;
            qk = modn(&(&qk * &q));
        }
    }

    if u.is_zero() || v.is_zero() {
        return true;
    }
    for _ in 1..s {
        v = modn(&(&v * &v - 2 * &qk));
        if v.is_zero() {
            return true;
        }
        qk = modn(&(&qk * &qk));
    }
    false
}

/// Primality with certainty grading; see the module docs for the ranges.
pub fn primality(n: &BigUint) -> Primality {
    if let Some(small) = n.to_u128() {
        if small < 1 << 83 {
            return if is_prime_u128(small) {
                Primality::Prime
            } else {
                Primality::Composite
            };
        }
    }
    if n.is_even() {
        return Primality::Composite;
    }
    for &p in &MR_BASES {
        if (n % p).is_zero() {
            return Primality::Composite;
        }
    }
    if n < deterministic_limit() {
        if MR_BASES.iter().all(|&b| miller_rabin_round_big(n, b)) {
            Primality::Prime
        } else {
            Primality::Composite
        }
    } else {
        // Baillie-PSW: strong base-2 MR + strong Lucas (Selfridge)
        if miller_rabin_round_big(n, 2) && strong_lucas_prp(n) {
            Primality::ProbablePrime
        } else {
            Primality::Composite
        }
    }
}

pub fn is_prime(n: &BigUint) -> bool {
    primality(n).is_prime()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::str::FromStr;

    #[test]
    fn small_examples() {
        assert!(is_prime(&BigUint::from(2u32)));
        assert!(is_prime(&BigUint::from(253507u32)));
        assert!(is_prime(&BigUint::from(3967u32)));
        assert!(!is_prime(&BigUint::from(1u32)));
        assert!(!is_prime(&BigUint::from(0u32)));
        assert!(!is_prime(&BigUint::from(253507u64 * 3)));
    }

    #[test]
    fn agrees_with_sieve_to_one_million() {
        let primes = super::super::simple_sieve(1_000_000);
        let mut idx = 0;
        for n in 0..=1_000_000u64 {
            let in_sieve = idx < primes.len() && primes[idx] == n;
            if in_sieve {
                idx += 1;
            }
            assert_eq!(is_prime_u64(n), in_sieve, "disagree at {n}");
        }
    }

    #[test]
    fn big_deterministic_and_bpsw() {
        // Mersenne primes 2^89 - 1 and 2^127 - 1 sit above the deterministic
        // limit and exercise the BPSW path.
        let m89 = (BigUint::one() << 89) - 1u32;
        assert_eq!(primality(&m89), Primality::ProbablePrime);
        let m127 = (BigUint::one() << 127) - 1u32;
        assert_eq!(primality(&m127), Primality::ProbablePrime);
        assert_eq!(primality(&(&m89 * &m89)), Primality::Composite);
        assert_eq!(primality(&(&m89 * &m127)), Primality::Composite);
        let limit = BigUint::from_str(DETERMINISTIC_LIMIT_DECIMAL).unwrap();
        assert_eq!(primality(&(&limit - 1u32)), Primality::Composite); // even
    }

    #[test]
    fn mulmod_cross_check() {
        let m = (1u128 << 82) + 11;
        let a = (1u128 << 81) + 12345;
        let b = (1u128 << 81) + 99999;
        let expect = (BigUint::from(a) * BigUint::from(b) % BigUint::from(m))
            .to_u128()
            .unwrap();
        assert_eq!(mulmod_u128(a, b, m), expect);
        // large-modulus ladder path
        let m = (1u128 << 126) - 3;
        let a = (1u128 << 125) + 7;
        let b = (1u128 << 120) + 13;
        let expect = (BigUint::from(a) * BigUint::from(b) % BigUint::from(m))
            .to_u128()
            .unwrap();
        assert_eq!(mulmod_u128(a, b, m), expect);
    }

    #[test]
    fn u128_primality_band() {
        assert!(is_prime_u128(18446744073709551629)); // 2^64 + 13
        assert!(!is_prime_u128(18446744073709551617)); // 2^64 + 1 = 274177 * ...
        // cross-check the u128 fast path against the BigUint Miller-Rabin
        // rounds (independent arithmetic) on a band above 2^82
        for delta in 0..64u128 {
            let n = (1u128 << 82) + 1 + 2 * delta;
            let big = BigUint::from(n);
            let via_big = MR_BASES.iter().all(|&b| !(&big % b).is_zero())
                && MR_BASES.iter().all(|&b| miller_rabin_round_big(&big, b));
            assert_eq!(is_prime_u128(n), via_big, "disagree at {n}");
        }
    }
}
