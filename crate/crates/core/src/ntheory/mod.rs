//! Arbitrary-precision integer primitives: primality with a documented
//! deterministic range, Jacobi symbols, k-th roots, a segmented prime
//! sieve, and budgeted integer factorization.

mod factor;
mod primality;
mod sieve;

pub use factor::{factorize, Factor, FactorEffort, Factorization};
pub use primality::{
    is_prime, is_prime_u128, is_prime_u64, mulmod_u128, powmod_u128, primality, Primality,
    DETERMINISTIC_LIMIT_DECIMAL,
};
pub use sieve::{primes_in, simple_sieve, SegmentedPrimes};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::domain;
use crate::Result;

/// A verified prime power `q^f`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PrimePower {
    q: u64,
    f: u32,
    value: BigUint,
}

impl PrimePower {
    /// Builds `q^f`, verifying that `q` is prime and `f >= 1`.
    pub fn new(q: u64, f: u32) -> Result<Self> {
        if !is_prime_u64(q) {
            return Err(domain(format!("{q} is not prime")));
        }
        if f == 0 {
            return Err(domain("exponent must be >= 1"));
        }
        Ok(PrimePower {
            q,
            f,
            value: BigUint::from(q).pow(f),
        })
    }

    pub fn prime(&self) -> u64 {
        self.q
    }

    pub fn exponent(&self) -> u32 {
        self.f
    }

    pub fn value(&self) -> &BigUint {
        &self.value
    }
}

impl std::fmt::Display for PrimePower {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.f == 1 {
            write!(f, "{}", self.q)
        } else {
            write!(f, "{}^{}", self.q, self.f)
        }
    }
}

/// Jacobi symbol `(a/n)` for odd `n >= 3`.
pub fn jacobi(a: &BigInt, n: &BigUint) -> Result<i8> {
    if n.is_even() || *n < BigUint::from(3u32) {
        return Err(domain("jacobi modulus must be odd and >= 3"));
    }
    let n = BigInt::from(n.clone());
    let mut a = a.mod_floor(&n);
    let mut n = n;
    let mut result = 1i8;
    while !a.is_zero() {
        while a.is_even() {
            a >>= 1;
            let r: BigInt = &n % 8u32;
            let r = r.to_u64_digits().1.first().copied().unwrap_or(0);
            if r == 3 || r == 5 {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if (&a % 4u32) == BigInt::from(3) && (&n % 4u32) == BigInt::from(3) {
            result = -result;
        }
        a = a.mod_floor(&n);
    }
    if n.is_one() {
        Ok(result)
    } else {
        Ok(0)
    }
}

/// Jacobi symbol on machine words, `n` odd and `>= 3`.
pub fn jacobi_u128(mut a: u128, mut n: u128) -> i8 {
    debug_assert!(n >= 3 && n % 2 == 1);
    a %= n;
    let mut result = 1i8;
    while a != 0 {
        while a.is_multiple_of(2) {
            a /= 2;
            let r = n % 8;
            if r == 3 || r == 5 {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            result = -result;
        }
        a %= n;
    }
    if n == 1 {
        result
    } else {
        0
    }
}

/// Floor of the real k-th root of `n`, exact.
pub fn integer_root(n: &BigUint, k: u32) -> BigUint {
    assert!(k >= 1, "root index must be positive");
    if n.is_zero() || n.is_one() || k == 1 {
        return n.clone();
    }
    // Newton iteration seeded from the bit length.
    let bits = n.bits();
    let mut x = BigUint::one() << (bits / k as u64 + 1);
    let k_big = BigUint::from(k);
    let km1 = k - 1;
    loop {
        // x_{next} = ((k-1)x + n / x^{k-1}) / k
        let xk1 = x.pow(km1);
        let next = (&x * km1 + n / &xk1) / &k_big;
        if next >= x {
            break;
        }
        x = next;
    }
    // x is now the floor root or one above; correct downward.
    while x.pow(k) > *n {
        x -= 1u32;
    }
    x
}

/// `integer_root` on machine words.
pub fn integer_root_u128(n: u128, k: u32) -> u128 {
    if n == 0 || k == 1 {
        return n;
    }
    let mut x = 1u128 << (n.ilog2() / k + 1);
    loop {
        let mut pow = 1u128;
        let mut overflow = false;
        for _ in 0..k - 1 {
            match pow.checked_mul(x) {
                Some(p) => pow = p,
                None => {
                    overflow = true;
                    break;
                }
            }
        }
        let next = if overflow {
            (x * (k as u128 - 1)) / k as u128
        } else {
            (x * (k as u128 - 1) + n / pow) / k as u128
        };
        if next >= x {
            break;
        }
        x = next;
    }
    while checked_pow_u128(x, k).is_none_or(|p| p > n) {
        x -= 1;
    }
    x
}

pub(crate) fn checked_pow_u128(base: u128, exp: u32) -> Option<u128> {
    let mut acc = 1u128;
    for _ in 0..exp {
        acc = acc.checked_mul(base)?;
    }
    Some(acc)
}

/// lcm on magnitudes, treating 0 as the identity-free case (lcm(0, b) = b).
pub fn lcm_accumulate(acc: &mut BigUint, value: &BigUint) {
    if value.is_zero() {
        return;
    }
    if acc.is_zero() {
        *acc = value.clone();
        return;
    }
    let g = acc.gcd(value);
    *acc = &*acc / g * value;
}

/// Signed-to-magnitude helper used throughout the bound pipeline.
pub fn abs_to_biguint(v: &BigInt) -> BigUint {
    v.abs().to_biguint().expect("abs is nonnegative")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_power_validates() {
        assert!(PrimePower::new(7, 2).is_ok());
        assert!(PrimePower::new(6, 2).is_err());
        assert!(PrimePower::new(7, 0).is_err());
        let pp = PrimePower::new(2, 10).unwrap();
        assert_eq!(pp.value(), &BigUint::from(1024u32));
    }

    #[test]
    fn jacobi_examples() {
        // (0/7) = 0, shared factor
        assert_eq!(jacobi(&BigInt::from(0), &BigUint::from(7u32)).unwrap(), 0);
        // 6^2 = 36 = 2 mod 17
        assert_eq!(jacobi(&BigInt::from(2), &BigUint::from(17u32)).unwrap(), 1);
        assert!(jacobi(&BigInt::from(3), &BigUint::from(4u32)).is_err());
        assert!(jacobi(&BigInt::from(3), &BigUint::from(1u32)).is_err());
        // negative a
        assert_eq!(jacobi(&BigInt::from(-1), &BigUint::from(3u32)).unwrap(), -1);
    }

    #[test]
    fn jacobi_matches_euler_criterion() {
        // For odd primes p, (a/p) equals a^((p-1)/2) mod p.
        let primes = [3u64, 5, 7, 11, 13, 101, 257, 7919, 104729];
        for (i, &p) in primes.iter().enumerate() {
            for a in 1..50u64 {
                let a = a + i as u64 * 37;
                let euler = powmod_u128(a as u128 % p as u128, (p as u128 - 1) / 2, p as u128);
                let expect = if euler == 1 {
                    1
                } else if euler == p as u128 - 1 {
                    -1
                } else {
                    0
                };
                assert_eq!(
                    jacobi(&BigInt::from(a), &BigUint::from(p)).unwrap(),
                    expect,
                    "a={a} p={p}"
                );
                assert_eq!(jacobi_u128(a as u128, p as u128), expect);
            }
        }
    }

    #[test]
    fn jacobi_multiplicative() {
        use num_traits::ToPrimitive;
        let p = BigUint::from(104729u64);
        for a in 1..40u64 {
            for b in 1..40u64 {
                let ja = jacobi(&BigInt::from(a), &p).unwrap();
                let jb = jacobi(&BigInt::from(b), &p).unwrap();
                let jab = jacobi(&BigInt::from(a * b), &p).unwrap();
                assert_eq!(ja * jb, jab, "a={a} b={b}");
            }
        }
        let _ = p.to_u64();
    }

    #[test]
    fn integer_root_examples() {
        assert_eq!(integer_root(&BigUint::from(8u32), 3), BigUint::from(2u32));
        assert_eq!(integer_root(&BigUint::from(63u32), 3), BigUint::from(3u32));
        assert_eq!(integer_root(&BigUint::from(64u32), 3), BigUint::from(4u32));
        assert_eq!(integer_root(&BigUint::from(0u32), 5), BigUint::from(0u32));
        assert_eq!(integer_root_u128(63, 3), 3);
        assert_eq!(integer_root_u128(64, 3), 4);
        assert_eq!(integer_root_u128(u128::MAX, 2), (1u128 << 64) - 1);
    }

    proptest::proptest! {
        #[test]
        fn integer_root_random_512bit(
            words in proptest::collection::vec(proptest::prelude::any::<u32>(), 1..16),
            k in 2u32..8,
        ) {
            let n = BigUint::new(words);
            let r = integer_root(&n, k);
            proptest::prop_assert!(r.pow(k) <= n);
            proptest::prop_assert!((r + 1u32).pow(k) > n);
        }
    }
}
