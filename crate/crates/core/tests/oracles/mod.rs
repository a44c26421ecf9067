//! Independent oracles for the acceptance suite: brute-force curve
//! enumeration over small finite fields, and a resultant-based norm
//! computed from companion-matrix power sums. Nothing here shares code
//! with the paths it checks.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::One;

use isoprime_core::bounds::splitting_types;
use isoprime_core::multiquad::{symmetric_norm_product, ConjugateProductInput, NormFactor};
use isoprime_core::ntheory::PrimePower;
use isoprime_core::weil::{frobenius_candidate_set, half_quadratic_power, WeilCandidate};

/// Table-driven arithmetic for GF(p^k), k <= 3, q <= 27.
struct SmallField {
    p: u64,
    q: usize,
    add: Vec<u8>,
    mul: Vec<u8>,
}

impl SmallField {
    fn new(p: u64, k: u32) -> SmallField {
        // x^k = reduction[0] + reduction[1] x + ... (all mod p)
        let reduction: Vec<u64> = match (p, k) {
            (_, 1) => vec![],
            (2, 2) => vec![1, 1],    // x^2 + x + 1
            (2, 3) => vec![1, 1, 0], // x^3 + x + 1
            (3, 2) => vec![2, 0],    // x^2 + 1
            (3, 3) => vec![1, 1, 0], // x^3 - x - 1
            (5, 2) => vec![2, 0],    // x^2 - 2
            _ => panic!("no modulus table for GF({p}^{k})"),
        };
        let q = p.pow(k) as usize;
        let digits = |mut e: usize| -> Vec<u64> {
            let mut v = vec![0u64; k as usize];
            for d in v.iter_mut() {
                *d = (e as u64) % p;
                e /= p as usize;
            }
            v
        };
        let index = |v: &[u64]| -> usize {
            v.iter()
                .rev()
                .fold(0usize, |acc, &d| acc * p as usize + d as usize)
        };
        let mut add = vec![0u8; q * q];
        let mut mul = vec![0u8; q * q];
        for a in 0..q {
            for b in 0..q {
                let (da, db) = (digits(a), digits(b));
                let sum: Vec<u64> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                add[a * q + b] = index(&sum) as u8;
                // polynomial product, then reduce x^j for j >= k
                let mut prod = vec![0u64; 2 * k as usize];
                for (i, &x) in da.iter().enumerate() {
                    for (j, &y) in db.iter().enumerate() {
                        prod[i + j] = (prod[i + j] + x * y) % p;
                    }
                }
                for j in (k as usize..prod.len()).rev() {
                    let c = prod[j];
                    if c != 0 {
                        prod[j] = 0;
                        for (i, &r) in reduction.iter().enumerate() {
                            prod[j - k as usize + i] = (prod[j - k as usize + i] + c * r) % p;
                        }
                    }
                }
                mul[a * q + b] = index(&prod[..k as usize]) as u8;
            }
        }
        let field = SmallField { p, q, add, mul };
        // sanity: every nonzero element is invertible (modulus irreducible)
        for a in 1..q {
            assert!(
                (1..q).any(|b| field.mul(a, b) == 1),
                "GF({p}^{k}): {a} has no inverse; bad modulus"
            );
        }
        field
    }

    fn add(&self, a: usize, b: usize) -> usize {
        self.add[a * self.q + b] as usize
    }

    fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.q + b] as usize
    }

    /// Embeds an integer constant through the prime field.
    fn constant(&self, c: i64) -> usize {
        (c.rem_euclid(self.p as i64)) as usize
    }

    fn scale(&self, c: i64, a: usize) -> usize {
        self.mul(self.constant(c), a)
    }
}

/// The set of Frobenius traces realized by elliptic curves over GF(q^f),
/// by exhaustive Weierstrass enumeration and point counting.
pub fn traces_by_point_counting(q: u64, f: u32) -> Vec<i64> {
    let gf = SmallField::new(q, f);
    let n = gf.q;
    let mut traces: BTreeSet<i64> = BTreeSet::new();

    let count_points = |a1: usize, a2: usize, a3: usize, a4: usize, a6: usize| -> i64 {
        let mut count = 1i64; // point at infinity
        for x in 0..n {
            let x2 = gf.mul(x, x);
            let x3 = gf.mul(x2, x);
            let rhs = gf.add(gf.add(x3, gf.mul(a2, x2)), gf.add(gf.mul(a4, x), a6));
            for y in 0..n {
                let lhs = gf.add(
                    gf.mul(y, y),
                    gf.add(gf.mul(a1, gf.mul(x, y)), gf.mul(a3, y)),
                );
                if lhs == rhs {
                    count += 1;
                }
            }
        }
        count
    };
    let discriminant = |a1: usize, a2: usize, a3: usize, a4: usize, a6: usize| -> usize {
        let b2 = gf.add(gf.mul(a1, a1), gf.scale(4, a2));
        let b4 = gf.add(gf.scale(2, a4), gf.mul(a1, a3));
        let b6 = gf.add(gf.mul(a3, a3), gf.scale(4, a6));
        let b8 = {
            let t1 = gf.mul(gf.mul(a1, a1), a6);
            let t2 = gf.scale(4, gf.mul(a2, a6));
            let t3 = gf.scale(-1, gf.mul(a1, gf.mul(a3, a4)));
            let t4 = gf.mul(a2, gf.mul(a3, a3));
            let t5 = gf.scale(-1, gf.mul(a4, a4));
            gf.add(gf.add(gf.add(t1, t2), gf.add(t3, t4)), t5)
        };
        let d1 = gf.scale(-1, gf.mul(gf.mul(b2, b2), b8));
        let d2 = gf.scale(-8, gf.mul(b4, gf.mul(b4, b4)));
        let d3 = gf.scale(-27, gf.mul(b6, b6));
        let d4 = gf.scale(9, gf.mul(b2, gf.mul(b4, b6)));
        gf.add(gf.add(d1, d2), gf.add(d3, d4))
    };

    match q {
        2 => {
            // general Weierstrass form; nothing simplifies in char 2
            for a1 in 0..n {
                for a2 in 0..n {
                    for a3 in 0..n {
                        for a4 in 0..n {
                            for a6 in 0..n {
                                if discriminant(a1, a2, a3, a4, a6) != 0 {
                                    traces.insert(
                                        n as i64 + 1 - count_points(a1, a2, a3, a4, a6),
                                    );
                                }
                            }
                        }
                    }
                }
            }
        }
        3 => {
            // completing the square leaves y^2 = x^3 + a2 x^2 + a4 x + a6
            for a2 in 0..n {
                for a4 in 0..n {
                    for a6 in 0..n {
                        if discriminant(0, a2, 0, a4, a6) != 0 {
                            traces.insert(n as i64 + 1 - count_points(0, a2, 0, a4, a6));
                        }
                    }
                }
            }
        }
        _ => {
            // short Weierstrass y^2 = x^3 + a x + b
            for a4 in 0..n {
                for a6 in 0..n {
                    if discriminant(0, 0, 0, a4, a6) != 0 {
                        traces.insert(n as i64 + 1 - count_points(0, 0, 0, a4, a6));
                    }
                }
            }
        }
    }
    traces.into_iter().collect()
}

/// Trace and determinant of the n-th power of the companion matrix of
/// `x^2 - a x + Q`; an independent route to the power sums of the roots.
fn companion_power(a: i64, q_value: u64, n: u32) -> (BigInt, BigInt) {
    type M = [[BigInt; 2]; 2];
    let mul = |x: &M, y: &M| -> M {
        let mut out: M = Default::default();
        for i in 0..2 {
            for j in 0..2 {
                out[i][j] = &x[i][0] * &y[0][j] + &x[i][1] * &y[1][j];
            }
        }
        out
    };
    let mut result: M = Default::default();
    result[0][0] = BigInt::one();
    result[1][1] = BigInt::one();
    let mut base: M = Default::default();
    base[0][1] = BigInt::from(-(q_value as i64));
    base[1][0] = BigInt::one();
    base[1][1] = BigInt::from(a);
    let mut e = n;
    while e > 0 {
        if e & 1 == 1 {
            result = mul(&result, &base);
        }
        base = mul(&base, &base);
        e >>= 1;
    }
    let trace = &result[0][0] + &result[1][1];
    let det = &result[0][0] * &result[1][1] - &result[0][1] * &result[1][0];
    (trace, det)
}

/// `prod g(roots of x^2 - s x + p)` for `g = c2 x^2 + c1 x + c0`,
/// expanded in the symmetric functions:
/// `c2^2 p^2 + c2 c1 p s + c2 c0 (s^2 - 2p) + c1^2 p + c1 c0 s + c0^2`.
fn quadratic_resultant(s: &BigInt, p: &BigInt, c2: &BigInt, c1: &BigInt, c0: &BigInt) -> BigInt {
    c2 * c2 * p * p
        + c2 * c1 * p * s
        + c2 * c0 * (s * s - 2 * p)
        + c1 * c1 * p
        + c1 * c0 * s
        + c0 * c0
}

/// Exhaustive comparison of the sign-hypercube norm against the
/// resultant oracle for r <= 2 (degrees 1 and 2, q <= 5). Returns
/// (number of tuples checked, all-equal flag).
pub fn norms_match_resultants() -> (u32, bool) {
    let mut checked = 0u32;
    let mut all_ok = true;
    for q in [2u64, 3, 5] {
        for d in [1u32, 2] {
            for stype in splitting_types(d) {
                let slots = stype.pairs();
                let candidate_sets: Vec<Vec<WeilCandidate>> = slots
                    .iter()
                    .map(|&(_, f)| frobenius_candidate_set(&PrimePower::new(q, f).unwrap()))
                    .collect();
                let mut idx = vec![0usize; slots.len()];
                loop {
                    for trace_eps in [0u32, 4, 6, 10, 12, 18, 12 * d] {
                        if trace_eps > 12 * d {
                            continue;
                        }
                        let target = BigInt::from(q).pow(trace_eps);
                        // build both the production input and the oracle slots
                        let mut factors = Vec::new();
                        let mut rational = BigInt::one();
                        let mut quads: Vec<(BigInt, BigInt)> = Vec::new();
                        for ((&i, &(e, _f)), cands) in
                            idx.iter().zip(slots).zip(&candidate_sets)
                        {
                            let n = 12 * e;
                            match &cands[i] {
                                WeilCandidate::Rational(v) => {
                                    factors.push(NormFactor::Rational(v.pow(n)));
                                    rational *= v.pow(n);
                                }
                                WeilCandidate::Quadratic { trace, norm } => {
                                    factors.push(NormFactor::Quadratic(half_quadratic_power(
                                        *trace, norm, n,
                                    )));
                                    let q_small = num_traits::ToPrimitive::to_u64(
                                        norm.value(),
                                    )
                                    .unwrap();
                                    quads.push(companion_power(*trace, q_small, n));
                                }
                            }
                        }
                        let fast = symmetric_norm_product(&ConjugateProductInput {
                            target: target.clone(),
                            factors,
                        });
                        let oracle = match quads.len() {
                            0 => &target - &rational,
                            1 => {
                                let (s, p) = &quads[0];
                                // (T - R b)(T - R conj(b)) = T^2 - R s T + R^2 p
                                &target * &target - &rational * s * &target
                                    + &rational * &rational * p
                            }
                            2 => {
                                let (s1, p1) = &quads[0];
                                let (s2, p2) = &quads[1];
                                // prod over roots u of slot 1 of
                                //   (T^2 - T R s2 u + R^2 p2 u^2)
                                let c2 = &rational * &rational * p2;
                                let c1 = -(&target * &rational * s2);
                                let c0 = &target * &target;
                                quadratic_resultant(s1, p1, &c2, &c1, &c0)
                            }
                            _ => unreachable!("d <= 2"),
                        };
                        checked += 1;
                        if fast != oracle {
                            all_ok = false;
                            println!(
                                "  norm mismatch q={q} d={d} trace={trace_eps}: {fast} vs {oracle}"
                            );
                        }
                    }
                    // odometer over candidate choices
                    let mut k = 0;
                    loop {
                        if k == idx.len() {
                            break;
                        }
                        idx[k] += 1;
                        if idx[k] < candidate_sets[k].len() {
                            break;
                        }
                        idx[k] = 0;
                        k += 1;
                    }
                    if k == idx.len() {
                        break;
                    }
                }
            }
        }
    }
    (checked, all_ok)
}
