//! Exact norm-form products over multiquadratic étale algebras.
//!
//! For a target integer `T` and factors `w_i = (x_i + y_i sqrt(D_i))/2`,
//! [`symmetric_norm_product`] computes
//!
//! ```text
//!     P = prod over sign vectors s in {±1}^r of ( T - prod_i (x_i + s_i y_i sqrt(D_i))/2 )
//! ```
//!
//! which is always a rational integer. This product over the full sign
//! hypercube replaces the norm from the exact compositum: it has the same
//! prime support and the same vanishing behaviour once the candidate sets
//! feeding it are conjugation-closed, and it avoids field construction
//! entirely.
//!
//! The evaluation groups factors by literal discriminant. Factors sharing a
//! `D` are first multiplied out inside `Q(sqrt D)` for each relative sign
//! pattern (2^{k-1} patterns for k factors), and the residual global sign
//! choices become the conjugations of the tensor algebra — so intermediate
//! coefficient vectors stay at length 2^{distinct D}, not 2^r. Denominators
//! of 2 are tracked as a scale exponent and divided out at the end, where
//! integrality is asserted.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::domain;
use crate::ntheory::{factorize, FactorEffort, Primality};
use crate::weil::HalfQuadratic;
use crate::Result;

/// One factor of the conjugate product.
#[derive(Debug, Clone)]
pub enum NormFactor {
    /// Rational value, no sign split (the `y = 0` convention).
    Rational(BigInt),
    Quadratic(HalfQuadratic),
}

/// Input to [`symmetric_norm_product`]: the target `q^{trace eps}` and the
/// factor list `beta_i^{12 e_i}`.
#[derive(Debug, Clone)]
pub struct ConjugateProductInput {
    pub target: BigInt,
    pub factors: Vec<NormFactor>,
}

/// Étale-algebra element: coefficients indexed by subsets of the distinct
/// discriminants (bitmask), all scaled by a common power of two.
struct AlgebraElement {
    coords: Vec<BigInt>,
}

impl AlgebraElement {
    fn scalar(m: usize, v: BigInt) -> Self {
        let mut coords = vec![BigInt::zero(); 1 << m];
        coords[0] = v;
        AlgebraElement { coords }
    }

    fn mul(&self, other: &AlgebraElement, discs: &[BigInt]) -> AlgebraElement {
        let n = self.coords.len();
        let mut out = vec![BigInt::zero(); n];
        for (i, a) in self.coords.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coords.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let mut c = a * b;
                let mut shared = i & j;
                while shared != 0 {
                    let g = shared.trailing_zeros() as usize;
                    c *= &discs[g];
                    shared &= shared - 1;
                }
                out[i ^ j] += c;
            }
        }
        AlgebraElement { coords: out }
    }

    /// Norm to the rationals: eliminate one sqrt at a time via
    /// `(A + B s)(A - B s) = A^2 - D B^2`.
    fn norm(mut self, discs: &[BigInt]) -> BigInt {
        let mut m = discs.len();
        while m > 0 {
            let g = m - 1;
            let half = 1 << g;
            let sub: Vec<BigInt> = discs[..g].to_vec();
            let a = AlgebraElement {
                coords: self.coords[..half].to_vec(),
            };
            let b = AlgebraElement {
                coords: self.coords[half..].to_vec(),
            };
            let a2 = a.mul(&a, &sub);
            let b2 = b.mul(&b, &sub);
            let mut coords = a2.coords;
            for (c, b2c) in coords.iter_mut().zip(b2.coords) {
                *c -= &discs[g] * b2c;
            }
            self = AlgebraElement { coords };
            m = g;
        }
        self.coords.into_iter().next().expect("rational coordinate")
    }
}

/// The exact product over all `2^r` sign vectors; see the module docs.
pub fn symmetric_norm_product(input: &ConjugateProductInput) -> BigInt {
    let refs: Vec<&NormFactor> = input.factors.iter().collect();
    symmetric_norm_product_refs(&input.target, &refs)
}

/// Borrowing form of [`symmetric_norm_product`]; the bound pipeline calls
/// this against cached factor powers.
pub fn symmetric_norm_product_refs(target: &BigInt, factors: &[&NormFactor]) -> BigInt {
    let mut rational = BigInt::one();
    let mut quads: Vec<&HalfQuadratic> = Vec::new();
    for f in factors {
        match f {
            NormFactor::Rational(v) => rational *= v,
            NormFactor::Quadratic(h) => {
                debug_assert!(!h.d.is_zero(), "zero discriminant must be rational");
                quads.push(h);
            }
        }
    }
    if quads.is_empty() {
        return target - rational;
    }

    // group by literal discriminant
    let mut discs: Vec<BigInt> = Vec::new();
    let mut groups: Vec<Vec<&HalfQuadratic>> = Vec::new();
    for h in quads {
        match discs.iter().position(|d| *d == h.d) {
            Some(i) => groups[i].push(h),
            None => {
                discs.push(h.d.clone());
                groups.push(vec![h]);
            }
        }
    }
    let m = discs.len();
    let scale: u32 = groups.iter().map(|g| g.len() as u32).sum();

    // per group: 2^{k-1} relative sign patterns, each an (X, Y) pair with
    // X + Y sqrt(D) = 2^k * prod_i (x_i ± y_i sqrt(D))/2
    let group_patterns: Vec<Vec<(BigInt, BigInt)>> = groups
        .iter()
        .map(|g| {
            let mut acc: Vec<(BigInt, BigInt)> = vec![(g[0].x.clone(), g[0].y.clone())];
            let d = &g[0].d;
            for h in &g[1..] {
                let mut next = Vec::with_capacity(acc.len() * 2);
                for (xx, yy) in &acc {
                    for sign in [1i32, -1] {
                        let hy = if sign == 1 { h.y.clone() } else { -h.y.clone() };
                        let x2 = xx * &h.x + d * (yy * &hy);
                        let y2 = xx * &hy + yy * &h.x;
                        next.push((x2, y2));
                    }
                }
                acc = next;
            }
            acc
        })
        .collect();

    // scaled target: 2^scale * T - prod of scaled group elements
    let scaled_target = target * (BigInt::one() << scale);
    let mut total = BigInt::one();
    let mut indices = vec![0usize; m];
    let denom_exp_per_combo = u64::from(scale) * (1u64 << m);
    loop {
        // build delta = scaled_target - rational * prod_g (X_g + Y_g s_g)
        let mut elem = AlgebraElement::scalar(m, rational.clone());
        for (g, &idx) in indices.iter().enumerate() {
            let (x, y) = &group_patterns[g][idx];
            let mut factor = AlgebraElement::scalar(m, x.clone());
            factor.coords[1 << g] = y.clone();
            elem = elem.mul(&factor, &discs);
        }
        for c in elem.coords.iter_mut() {
            *c = -std::mem::take(c);
        }
        elem.coords[0] += &scaled_target;
        let scaled_norm = elem.norm(&discs);
        // scaled_norm = 2^{scale * 2^m} * combo_norm
        let combo = shift_right_exact(scaled_norm, denom_exp_per_combo);
        if combo.is_zero() {
            return BigInt::zero();
        }
        total *= combo;

        // next combination of relative patterns
        let mut g = 0;
        loop {
            if g == m {
                return total;
            }
            indices[g] += 1;
            if indices[g] < group_patterns[g].len() {
                break;
            }
            indices[g] = 0;
            g += 1;
        }
    }
}

fn shift_right_exact(v: BigInt, bits: u64) -> BigInt {
    debug_assert!(
        v.trailing_zeros().is_none_or(|t| t >= bits) || v.is_zero(),
        "norm product denominator did not clear"
    );
    v >> bits
}

/// Prime support of `n` below `bound`, plus any larger primes when the
/// cofactor fully factors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeSupport {
    /// Primes `< bound` dividing `n`, ascending. Always exact.
    pub below: Vec<u64>,
    /// Primes `>= bound` dividing `n`; populated only when `complete`.
    pub above: Vec<num_bigint::BigUint>,
    /// Whether the part of `n` above `bound` was fully factored.
    pub complete: bool,
    /// True when some reported prime above the deterministic threshold is
    /// only a probable prime.
    pub probable: bool,
}

/// All prime divisors of `n` below `bound`; larger primes surfaced only if
/// the cofactor factors completely within the given effort.
pub fn prime_support(n: &BigInt, bound: u64, effort: FactorEffort) -> Result<PrimeSupport> {
    if n.is_zero() {
        return Err(domain("prime support of zero is undefined"));
    }
    let mut rest = n.abs().to_biguint().expect("abs");
    let mut below = Vec::new();
    for p in crate::ntheory::SegmentedPrimes::new(2, bound.saturating_sub(1)) {
        if rest.is_one() {
            break;
        }
        let pb = num_bigint::BigUint::from(p);
        if (&rest % &pb).is_zero() {
            below.push(p);
            while (&rest % &pb).is_zero() {
                rest /= &pb;
            }
        }
    }
    let mut above = Vec::new();
    let mut complete = true;
    let mut probable = false;
    if !rest.is_one() {
        let fac = factorize(&BigInt::from(rest), effort)?;
        complete = fac.complete;
        if complete {
            for f in &fac.factors {
                probable |= f.certainty == Primality::ProbablePrime;
                above.push(f.prime.clone());
            }
        }
    }
    Ok(PrimeSupport {
        below,
        above,
        complete,
        probable,
    })
}
