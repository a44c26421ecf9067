//! The multiplicative bound integers and their accumulation into
//! per-signature-class rows.
//!
//! For a signature of trace `t` over a degree-`d` field and an auxiliary
//! prime `q`, every splitting type `{(e_i, f_i)}` of `q` and every choice
//! of Frobenius-root candidates `beta_i` over the residue fields yields the
//! integer
//!
//! ```text
//!     Nm( q^t - prod_i beta_i^{12 e_i} )
//! ```
//!
//! evaluated as a sign-hypercube product in [`crate::multiquad`]. The lcm
//! of the nonzero values is `B*`; a vanishing value sets the zero flag.
//! Rows accumulate `gcd` across auxiliary primes incrementally — after the
//! first prime everything is reduced against the surviving integer, which
//! keeps magnitudes at a few hundred digits instead of the raw lcm's
//! thousands of bits.

use std::collections::HashMap;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::domain;
use crate::multiquad::{symmetric_norm_product_refs, NormFactor};
use crate::ntheory::{
    factorize, is_prime_u64, primes_in, FactorEffort, Primality, PrimePower,
};
use crate::numeric::{bisect_largest_root, lambert_w_m1, ln_add};
use crate::signatures::{Signature, SignatureClass};
use crate::weil::{frobenius_candidate_set, half_quadratic_power, WeilCandidate};
use crate::Result;

/// A multiset of (ramification index, residue degree) pairs with
/// `sum e*f = d`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SplittingType {
    pairs: Vec<(u32, u32)>, // sorted
}

impl SplittingType {
    pub fn pairs(&self) -> &[(u32, u32)] {
        &self.pairs
    }

    pub fn degree(&self) -> u32 {
        self.pairs.iter().map(|&(e, f)| e * f).sum()
    }
}

/// All splitting types of a rational prime in a degree-`d` field.
pub fn splitting_types(d: u32) -> Vec<SplittingType> {
    assert!(d >= 1);
    let pairs: Vec<(u32, u32)> = (1..=d)
        .flat_map(|e| (1..=d).map(move |f| (e, f)))
        .filter(|&(e, f)| e * f <= d)
        .collect();
    let mut out = Vec::new();
    let mut chosen = Vec::new();
    fn rec(
        remaining: u32,
        start: usize,
        pairs: &[(u32, u32)],
        chosen: &mut Vec<(u32, u32)>,
        out: &mut Vec<SplittingType>,
    ) {
        if remaining == 0 {
            out.push(SplittingType {
                pairs: chosen.clone(),
            });
            return;
        }
        for idx in start..pairs.len() {
            let (e, f) = pairs[idx];
            if e * f <= remaining {
                chosen.push((e, f));
                rec(remaining - e * f, idx, pairs, chosen, out);
                chosen.pop();
            }
        }
    }
    rec(d, 0, &pairs, &mut chosen, &mut out);
    out.sort_by(|a, b| a.pairs.cmp(&b.pairs));
    out
}

/// Output of the per-(signature, q) computation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BIntegers {
    /// Zero when any norm vanished, otherwise equal to `b_star`.
    pub b: BigUint,
    /// lcm of the nonzero norms.
    pub b_star: BigUint,
    pub zero_seen: bool,
}

/// Candidate sets, their 12e-th powers, and the flattened tuple list for
/// one `(d, q)` pair. Built once, then shared across traces.
struct TupleSpace {
    /// tuples[i] = list of (power index into `powers`)
    tuples: Vec<Vec<u32>>,
    powers: Vec<NormFactor>,
}

impl TupleSpace {
    fn build(d: u32, q: u64) -> Result<TupleSpace> {
        let mut cand_cache: HashMap<u32, Vec<WeilCandidate>> = HashMap::new();
        let mut powers: Vec<NormFactor> = Vec::new();
        let mut power_index: HashMap<(u32, usize, u32), u32> = HashMap::new();
        let mut tuples = Vec::new();

        for stype in splitting_types(d) {
            // group identical (e, f) slots for multiset enumeration
            let mut groups: Vec<((u32, u32), u32)> = Vec::new();
            for &(e, f) in stype.pairs() {
                match groups.last_mut() {
                    Some((pair, k)) if *pair == (e, f) => *k += 1,
                    _ => groups.push(((e, f), 1)),
                }
            }
            // candidate power indices per group
            let mut group_choices: Vec<(Vec<u32>, u32)> = Vec::new();
            for &((e, f), k) in &groups {
                let cands = match cand_cache.get(&f) {
                    Some(c) => c.clone(),
                    None => {
                        let qp = PrimePower::new(q, f)?;
                        let c = frobenius_candidate_set(&qp);
                        cand_cache.insert(f, c.clone());
                        c
                    }
                };
                let mut indices = Vec::with_capacity(cands.len());
                for (ci, cand) in cands.iter().enumerate() {
                    let key = (f, ci, e);
                    let idx = *power_index.entry(key).or_insert_with(|| {
                        let n = 12 * e;
                        let factor = match cand {
                            WeilCandidate::Rational(v) => NormFactor::Rational(v.pow(n)),
                            WeilCandidate::Quadratic { trace, norm } => {
                                NormFactor::Quadratic(half_quadratic_power(*trace, norm, n))
                            }
                        };
                        powers.push(factor);
                        (powers.len() - 1) as u32
                    });
                    indices.push(idx);
                }
                group_choices.push((indices, k));
            }
            // cartesian product over groups of multiset choices
            let mut partial: Vec<Vec<u32>> = vec![Vec::new()];
            for (indices, k) in group_choices {
                let combos = multisets(&indices, k);
                let mut next = Vec::with_capacity(partial.len() * combos.len());
                for base in &partial {
                    for combo in &combos {
                        let mut t = base.clone();
                        t.extend_from_slice(combo);
                        next.push(t);
                    }
                }
                partial = next;
            }
            tuples.extend(partial);
        }
        Ok(TupleSpace { tuples, powers })
    }
}

/// Multisets of size `k` from `items`.
fn multisets(items: &[u32], k: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(k as usize);
    fn rec(items: &[u32], k: u32, start: usize, current: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if k == 0 {
            out.push(current.clone());
            return;
        }
        for i in start..items.len() {
            current.push(items[i]);
            rec(items, k - 1, i, current, out);
            current.pop();
        }
    }
    rec(items, k, 0, &mut current, &mut out);
    out
}

/// `B` and `B*` for a signature and auxiliary prime; only the trace enters.
pub fn b_integers(eps: &Signature, q: u64) -> Result<BIntegers> {
    b_integers_by_trace(eps.trace(), eps.degree(), q)
}

/// Trace-keyed form of [`b_integers`].
pub fn b_integers_by_trace(trace: u32, d: u32, q: u64) -> Result<BIntegers> {
    if !is_prime_u64(q) {
        return Err(domain(format!("auxiliary {q} is not prime")));
    }
    let space = TupleSpace::build(d, q)?;
    let target = BigInt::from(q).pow(trace);
    let (b_star, zero_seen) = space
        .tuples
        .par_iter()
        .fold(
            || (BigUint::one(), false),
            |(mut acc, mut zero), tuple| {
                let factors: Vec<&NormFactor> =
                    tuple.iter().map(|&i| &space.powers[i as usize]).collect();
                let p = symmetric_norm_product_refs(&target, &factors);
                if p.is_zero() {
                    zero = true;
                } else {
                    crate::ntheory::lcm_accumulate(&mut acc, p.magnitude());
                }
                (acc, zero)
            },
        )
        .reduce(
            || (BigUint::one(), false),
            |(mut a, za), (b, zb)| {
                crate::ntheory::lcm_accumulate(&mut a, &b);
                (a, za || zb)
            },
        );
    let b = if zero_seen {
        BigUint::zero()
    } else {
        b_star.clone()
    };
    Ok(BIntegers { b, b_star, zero_seen })
}

/// One incremental gcd step: `lcm` over tuples of `gcd(row, |norm|)`,
/// everything bounded by `row`.
fn row_step(row: &BigUint, trace: u32, d: u32, q: u64) -> Result<(BigUint, bool)> {
    let space = TupleSpace::build(d, q)?;
    let target = BigInt::from(q).pow(trace);
    let row_int = BigInt::from(row.clone());
    let (acc, zero_seen) = space
        .tuples
        .par_iter()
        .fold(
            || (BigUint::one(), false),
            |(mut acc, mut zero), tuple| {
                let factors: Vec<&NormFactor> =
                    tuple.iter().map(|&i| &space.powers[i as usize]).collect();
                let p = symmetric_norm_product_refs(&target, &factors);
                if p.is_zero() {
                    zero = true;
                } else {
                    let g = p.gcd(&row_int).magnitude().clone();
                    crate::ntheory::lcm_accumulate(&mut acc, &g);
                }
                (acc, zero)
            },
        )
        .reduce(
            || (BigUint::one(), false),
            |(mut a, za), (b, zb)| {
                crate::ntheory::lcm_accumulate(&mut a, &b);
                (a, za || zb)
            },
        );
    Ok((acc.gcd(row), zero_seen))
}

/// Externally supplied Type-1 helper integers; never computed here.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct Type1Inputs {
    /// The degree-wide formal-immersion integer, decimal.
    pub bad_formal_immersion: Option<String>,
    /// Per-auxiliary-prime integers, keyed by `q` (decimal values).
    #[serde(default)]
    pub agfi: HashMap<u64, String>,
}

impl Type1Inputs {
    fn bfi(&self) -> Result<Option<BigUint>> {
        self.bad_formal_immersion
            .as_deref()
            .map(|s| {
                s.parse::<BigUint>()
                    .map_err(|e| domain(format!("bad_formal_immersion: {e}")))
            })
            .transpose()
    }

    fn agfi_for(&self, q: u64) -> Result<Option<BigUint>> {
        self.agfi
            .get(&q)
            .map(|s| {
                s.parse::<BigUint>()
                    .map_err(|e| domain(format!("agfi[{q}]: {e}")))
            })
            .transpose()
    }
}

/// How a row was resolved.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RowStatus {
    /// Nonzero multiplicative bound for every auxiliary prime.
    Multiplicative,
    /// Type 1: multiplicative with the `prod (q^f - 1)` augmentation.
    Type1,
    /// Trace 6 mod 12: all norms vanish for q >= 5; GRH additive bound.
    AdditiveGrh,
    /// Trace 0 mod 12 (non-Type-1): outside every case of the bound
    /// theorems; no bound is known.
    Unresolved,
}

/// Accumulated result for one signature class.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BoundRow {
    pub degree: u32,
    pub class: String,
    pub trace: u32,
    pub status: RowStatus,
    /// Primes >= 13 dividing the surviving integer (decimal strings).
    pub primes_ge_13: Vec<String>,
    pub zero_seen: bool,
    /// log10 of the additive fallback bound; absent only for unresolved rows.
    pub additive_log10: Option<f64>,
    pub q_used: Vec<u64>,
    /// The surviving gcd integer (decimal), for multiplicative rows.
    pub b_star_gcd: Option<String>,
    pub type1_extras_applied: bool,
    /// True when any reported prime relied on a probable-primality answer.
    pub probable_primality: bool,
}

/// Options controlling [`accumulate_row`].
#[derive(Debug, Clone)]
pub struct RowOptions {
    pub q_max: u64,
    pub effort: FactorEffort,
    /// Stop after the surviving prime support is unchanged for this many
    /// consecutive auxiliary primes. `None` scans all `q <= q_max`.
    pub stabilization_window: Option<u32>,
    pub type1_inputs: Option<Type1Inputs>,
}

impl Default for RowOptions {
    fn default() -> Self {
        RowOptions {
            q_max: 50,
            effort: FactorEffort::Fast,
            stabilization_window: None,
            type1_inputs: None,
        }
    }
}

/// Per-auxiliary-prime gcd accumulation for one signature class.
pub fn accumulate_row(class: &SignatureClass, opts: &RowOptions) -> Result<BoundRow> {
    if opts.q_max < 2 {
        return Err(domain("q_max must be >= 2"));
    }
    let sig = &class.representative;
    let d = sig.degree();
    let trace = sig.trace();
    let mut row = BoundRow {
        degree: d,
        class: sig.to_string(),
        trace,
        status: RowStatus::Unresolved,
        primes_ge_13: Vec::new(),
        zero_seen: false,
        additive_log10: None,
        q_used: Vec::new(),
        b_star_gcd: None,
        type1_extras_applied: false,
        probable_primality: false,
    };

    if sig.is_type1() {
        row.status = RowStatus::Type1;
    } else if trace % 12 == 6 {
        row.status = RowStatus::AdditiveGrh;
        row.zero_seen = true; // the roots with beta^2 = -q^f vanish the norm
        row.additive_log10 = Some(grh_trace6_bound(d, trace)?);
        return Ok(row);
    } else if !trace.is_multiple_of(6) {
        row.status = RowStatus::Multiplicative;
    } else {
        // trace 0 mod 12, not Type 1: a vanishing all-rational tuple exists
        // for every q and no fallback applies
        row.zero_seen = true;
        return Ok(row);
    }

    let type1 = row.status == RowStatus::Type1;
    let q_start = if type1 { 3 } else { 2 };
    let mut surviving = BigUint::zero(); // zero = not yet initialized
    let mut last_support: Option<Vec<BigUint>> = None;
    let mut stable_count = 0u32;

    for q in primes_in(q_start, opts.q_max) {
        let (mut bound_q, zero_seen) = if surviving.is_zero() {
            let b = b_integers_by_trace(trace, d, q)?;
            (b.b_star, b.zero_seen)
        } else {
            row_step(&surviving, trace, d, q)?
        };
        if type1 {
            // prod_{f=1}^d (q^f - 1), plus any supplied external integers
            let mut extra = BigUint::one();
            for f in 1..=d {
                extra *= BigUint::from(q).pow(f) - 1u32;
            }
            if let Some(inputs) = &opts.type1_inputs {
                if let Some(bfi) = inputs.bfi()? {
                    extra = extra.lcm(&bfi);
                }
                if let Some(agfi) = inputs.agfi_for(q)? {
                    extra = extra.lcm(&agfi);
                }
                row.type1_extras_applied = true;
            }
            if surviving.is_zero() {
                crate::ntheory::lcm_accumulate(&mut bound_q, &extra);
            } else {
                let g = extra.gcd(&surviving);
                crate::ntheory::lcm_accumulate(&mut bound_q, &g);
            }
        }
        row.zero_seen |= zero_seen;
        row.q_used.push(q);
        surviving = if surviving.is_zero() {
            bound_q
        } else {
            surviving.gcd(&bound_q)
        };

        if let Some(window) = opts.stabilization_window {
            let support = support_of(&surviving, opts.effort)?.0;
            if last_support.as_ref() == Some(&support) {
                stable_count += 1;
                if stable_count >= window {
                    break;
                }
            } else {
                stable_count = 0;
                last_support = Some(support);
            }
        }
    }

    let (support, probable) = support_of(&surviving, opts.effort)?;
    row.probable_primality = probable;
    row.primes_ge_13 = support
        .iter()
        .filter(|p| **p >= BigUint::from(13u32))
        .map(|p| p.to_string())
        .collect();
    row.b_star_gcd = Some(surviving.to_string());
    row.additive_log10 = Some(if type1 {
        type1_additive_bound_log10(d)
    } else {
        additive_bound_log10(trace, d, 2)
    });
    Ok(row)
}

/// Sorted distinct primes of `n` (complete factorization expected: the
/// surviving integers are small and smooth).
fn support_of(n: &BigUint, effort: FactorEffort) -> Result<(Vec<BigUint>, bool)> {
    if n.is_zero() || n.is_one() {
        return Ok((Vec::new(), false));
    }
    let fac = factorize(&BigInt::from(n.clone()), effort)?;
    if !fac.complete {
        return Err(crate::Error::Domain(format!(
            "surviving integer resisted factorization ({} unsplit cofactors)",
            fac.cofactors.len()
        )));
    }
    let probable = fac
        .factors
        .iter()
        .any(|f| f.certainty == Primality::ProbablePrime);
    Ok((fac.primes().cloned().collect(), probable))
}

/// log10 of `(q^trace + q^{12 d})^{2^d}`, with an exact-integer crosscheck
/// whenever the value fits in 4096 bits.
pub fn additive_bound_log10(trace_eps: u32, d: u32, q: u64) -> f64 {
    let lq = (q as f64).log10();
    let inner = {
        let a = trace_eps as f64 * lq;
        let b = 12.0 * d as f64 * lq;
        let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
        hi + ((lo - hi) * std::f64::consts::LN_10).exp().ln_1p() / std::f64::consts::LN_10
    };
    let result = 2f64.powi(d as i32) * inner;
    let bits_estimate = result * std::f64::consts::LOG2_10;
    if bits_estimate <= 4096.0 {
        let exact = (BigUint::from(q).pow(trace_eps) + BigUint::from(q).pow(12 * d))
            .pow(1u32 << d);
        let exact_log10 = biguint_log10(&exact);
        debug_assert!(
            (exact_log10 - result).abs() <= 1e-9 * result.max(1.0),
            "log-space drifted from exact: {exact_log10} vs {result}"
        );
        return exact_log10;
    }
    result
}

pub(crate) fn biguint_log10_pub(n: &BigUint) -> f64 {
    biguint_log10(n)
}

fn biguint_log10(n: &BigUint) -> f64 {
    // log10 via the top 128 bits
    let bits = n.bits();
    if bits <= 110 {
        return n.to_f64().unwrap_or(f64::MAX).log10();
    }
    let shift = bits - 110;
    let top: BigUint = n >> shift;
    top.to_f64().unwrap().log10() + shift as f64 * 2f64.log10()
}

/// log10 of `max(65 (2d)^6, (3^{12d} + 1)^{2^d})`.
pub fn type1_additive_bound_log10(d: u32) -> f64 {
    let first = 65.0f64.log10() + 6.0 * (2.0 * d as f64).log10();
    let ln3 = 3f64.ln();
    let second = 2f64.powi(d as i32)
        * ln_add(12.0 * d as f64 * ln3, 0.0)
        / std::f64::consts::LN_10;
    first.max(second)
}

/// GRH additive bound for traces 6 mod 12: log10 of
/// `max((10^{9 trace} + 10^{108 d})^{2^d}, R_d)` where `R_d` is the largest
/// real root of `x - (g(x)^{2 trace} + g(x)^{24 d})^{2^d}` with
/// `g(x) = log(6x) + 9 + (5/2) (log log 6x)^2`.
pub fn grh_trace6_bound(d: u32, trace_eps: u32) -> Result<f64> {
    if trace_eps % 12 != 6 {
        return Err(domain(format!(
            "GRH trace-6 bound needs trace = 6 mod 12, got {trace_eps}"
        )));
    }
    let two_d = 2f64.powi(d as i32);
    // explicit branch, in log10
    let explicit = two_d * ln_add(
        9.0 * trace_eps as f64 * std::f64::consts::LN_10,
        108.0 * d as f64 * std::f64::consts::LN_10,
    ) / std::f64::consts::LN_10;

    // root branch, solved in u = ln x
    let ln6 = 6f64.ln();
    let g_ln = move |u: f64| {
        let l6x = u + ln6;
        (l6x + 9.0 + 2.5 * l6x.ln() * l6x.ln()).ln()
    };
    let t = trace_eps as f64;
    let dd = d as f64;
    let ln_f = move |u: f64| {
        let lg = g_ln(u);
        two_d * ln_add(24.0 * dd * lg, 2.0 * t * lg)
    };
    // envelope: g(x) <= 2 ln x once ln x is large; largest root of
    // x = (2 ln x)^{24 d 2^d} brackets R_d from above
    let dexp = 24.0 * dd * two_d;
    let hi = -dexp * lambert_w_m1(-1.0 / (2.0 * dexp))?;
    let root_u = bisect_largest_root(ln_f, 20.0, hi, 1e-12)?;
    let root_log10 = root_u / std::f64::consts::LN_10;
    Ok(explicit.max(root_log10))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signatures::{orbit_representatives, GaloisModel};

    #[test]
    fn splitting_type_counts() {
        assert_eq!(splitting_types(1).len(), 1);
        assert_eq!(splitting_types(2).len(), 3);
        // brute-force oracle: ordered tuples of (e, f) with sum e*f = d,
        // deduplicated as multisets
        for d in 1..=6u32 {
            let mut ordered = std::collections::HashSet::new();
            fn rec(
                remaining: u32,
                d: u32,
                acc: &mut Vec<(u32, u32)>,
                out: &mut std::collections::HashSet<Vec<(u32, u32)>>,
            ) {
                if remaining == 0 {
                    let mut key = acc.clone();
                    key.sort();
                    out.insert(key);
                    return;
                }
                for e in 1..=d {
                    for f in 1..=d {
                        if e * f <= remaining {
                            acc.push((e, f));
                            rec(remaining - e * f, d, acc, out);
                            acc.pop();
                        }
                    }
                }
            }
            rec(d, d, &mut Vec::new(), &mut ordered);
            assert_eq!(splitting_types(d).len(), ordered.len(), "d={d}");
        }
        assert_eq!(splitting_types(3).len(), 5);
    }

    #[test]
    fn zero_seen_matches_theory() {
        // (6,6), q = 5: the supersingular construction vanishes
        let eps = Signature::new(vec![6, 6]).unwrap();
        let b = b_integers(&eps, 5).unwrap();
        assert!(b.zero_seen);
        assert!(b.b.is_zero());
        assert!(!b.b_star.is_zero());
        // trace not 0 mod 6 never vanishes (small sweep)
        for (entries, q) in [(vec![0u8, 4], 2u64), (vec![0, 4], 13), (vec![4, 6], 7)] {
            let eps = Signature::new(entries).unwrap();
            let b = b_integers(&eps, q).unwrap();
            assert!(!b.zero_seen, "q={q}");
            assert_eq!(b.b, b.b_star);
        }
        // (0,4), q = 2: 17 survives into the final table row
        let eps = Signature::new(vec![0, 4]).unwrap();
        let b = b_integers(&eps, 2).unwrap();
        assert!((&b.b % BigUint::from(17u32)).is_zero());
    }

    #[test]
    fn additive_bound_examples() {
        // (0, 1, 2): log10((1 + 2^12)^2) = log10(16785409)
        let v = additive_bound_log10(0, 1, 2);
        assert!((v - 16785409f64.log10()).abs() < 1e-12);
        // monotone in q
        let mut prev = 0.0;
        for q in [2u64, 3, 5, 7, 11] {
            let v = additive_bound_log10(6, 2, q);
            assert!(v > prev);
            prev = v;
        }
    }

    #[test]
    fn type1_additive_examples() {
        // d = 1: max(65 * 64, (3^12 + 1)^2); the second term dominates
        let expect = ((3f64.powi(12) + 1.0).powi(2)).log10();
        assert!((type1_additive_bound_log10(1) - expect).abs() < 1e-9);
        // increasing in d
        let mut prev = 0.0;
        for d in 1..=7 {
            let v = type1_additive_bound_log10(d);
            assert!(v > prev);
            prev = v;
        }
    }

    #[test]
    fn grh_bound_values() {
        // d=2 trace 6: 864-ish; d=3 traces {6,18,30}: 2592-ish
        let v = grh_trace6_bound(2, 6).unwrap();
        assert!((864.0..864.01).contains(&v), "{v}");
        for t in [6, 18, 30] {
            let v = grh_trace6_bound(3, t).unwrap();
            assert!((2592.0..2592.01).contains(&v), "trace {t}: {v}");
        }
        assert!(grh_trace6_bound(2, 12).is_err());
    }

    #[test]
    fn grh_root_branch_subdominant() {
        // R_d stays below the explicit term for d = 2, 3 (evaluated in
        // log space on both branches)
        for (d, t) in [(2u32, 6u32), (3, 6), (3, 18), (3, 30)] {
            let total = grh_trace6_bound(d, t).unwrap();
            let explicit = 2f64.powi(d as i32)
                * ln_add(
                    9.0 * t as f64 * std::f64::consts::LN_10,
                    108.0 * d as f64 * std::f64::consts::LN_10,
                )
                / std::f64::consts::LN_10;
            assert!((total - explicit).abs() < 1e-9, "d={d} t={t}");
        }
    }

    #[test]
    fn unresolved_and_grh_rows() {
        let classes = orbit_representatives(2, GaloisModel::Cyclic).unwrap();
        let opts = RowOptions {
            q_max: 5,
            ..Default::default()
        };
        for class in &classes {
            let row = accumulate_row(class, &opts).unwrap();
            match class.representative.to_string().as_str() {
                "(0,6)" => {
                    assert_eq!(row.status, RowStatus::AdditiveGrh);
                    assert!(row.zero_seen);
                    assert!(row.additive_log10.is_some());
                }
                "(0,12)" | "(4,8)" | "(6,6)" => {
                    assert_eq!(row.status, RowStatus::Unresolved);
                    assert!(row.zero_seen);
                    assert!(row.additive_log10.is_none());
                }
                "(0,0)" => {
                    assert_eq!(row.status, RowStatus::Type1);
                    assert!(row.zero_seen);
                    assert_eq!(row.q_used.first(), Some(&3));
                }
                _ => {
                    assert_eq!(row.status, RowStatus::Multiplicative);
                    assert!(!row.zero_seen);
                    assert_eq!(row.q_used.first(), Some(&2));
                }
            }
        }
    }

    #[test]
    fn dual_classes_same_prime_sets() {
        // duality: rows for trace t and 12d - t carry identical prime sets
        let opts = RowOptions {
            q_max: 20,
            ..Default::default()
        };
        for (a, b) in [(vec![0u8, 4], vec![12u8, 8]), (vec![4, 6], vec![8, 6])] {
            let ca = SignatureClass {
                representative: Signature::new(a).unwrap(),
                orbit_size: 1,
                galois_model: GaloisModel::Cyclic,
            };
            let cb = SignatureClass {
                representative: Signature::new(b).unwrap(),
                orbit_size: 1,
                galois_model: GaloisModel::Cyclic,
            };
            let ra = accumulate_row(&ca, &opts).unwrap();
            let rb = accumulate_row(&cb, &opts).unwrap();
            assert_eq!(ra.primes_ge_13, rb.primes_ge_13);
        }
    }
}
