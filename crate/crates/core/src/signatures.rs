//! The signature space and its orbit classes.
//!
//! A signature is a length-`d` tuple over `{0, 4, 6, 8, 12}`. Signatures
//! are identified with their duals (entrywise `12 - entry`) and, depending
//! on the Galois model, with rotations (cyclic) or arbitrary permutations
//! (symmetric) of their entries. Representatives are the lexicographically
//! minimal members of their orbits.

use serde::{Deserialize, Serialize};

use crate::error::domain;
use crate::Result;

const ALLOWED: [u8; 5] = [0, 4, 6, 8, 12];

/// Length-`d` sequence over `{0, 4, 6, 8, 12}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Signature(Vec<u8>);

impl Signature {
    pub fn new(entries: Vec<u8>) -> Result<Self> {
        if entries.is_empty() {
            return Err(domain("signature must have length >= 1"));
        }
        if let Some(bad) = entries.iter().find(|e| !ALLOWED.contains(e)) {
            return Err(domain(format!("entry {bad} not in {{0,4,6,8,12}}")));
        }
        Ok(Signature(entries))
    }

    pub fn entries(&self) -> &[u8] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.len() as u32
    }

    /// Sum of the entries; `0 <= trace <= 12d`.
    pub fn trace(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    /// Entrywise `12 - entry`; an involution.
    pub fn dual(&self) -> Signature {
        Signature(self.0.iter().map(|&e| 12 - e).collect())
    }

    /// Type 1 signatures are `(0, ..., 0)` and `(12, ..., 12)`.
    pub fn is_type1(&self) -> bool {
        self.0.iter().all(|&e| e == 0) || self.0.iter().all(|&e| e == 12)
    }

    /// The Momose Type 2 shape `(6, ..., 6)`.
    pub fn is_type2_shape(&self) -> bool {
        self.0.iter().all(|&e| e == 6)
    }
}

impl std::fmt::Display for Signature {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

/// Group acting on signature entries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GaloisModel {
    /// Rotations of the tuple (Galois field with cyclic group).
    Cyclic,
    /// All permutations of the tuple (ordered signatures suffice).
    Symmetric,
}

/// An orbit under the chosen group action combined with dualization.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignatureClass {
    pub representative: Signature,
    pub orbit_size: u64,
    pub galois_model: GaloisModel,
}

/// `(5^d + 1)/2`: the number of signatures up to dualization alone.
pub fn class_count(d: u32) -> num_bigint::BigUint {
    let five = num_bigint::BigUint::from(5u32);
    (five.pow(d) + 1u32) / 2u32
}

fn orbit_of(sig: &Signature, model: GaloisModel) -> Vec<Signature> {
    let mut members = Vec::new();
    let base: Vec<Vec<u8>> = match model {
        GaloisModel::Cyclic => {
            let n = sig.0.len();
            (0..n)
                .map(|r| {
                    let mut v = sig.0.clone();
                    v.rotate_left(r);
                    v
                })
                .collect()
        }
        GaloisModel::Symmetric => permutations(&sig.0),
    };
    for v in base {
        let s = Signature(v);
        let d = s.dual();
        members.push(s);
        members.push(d);
    }
    members.sort();
    members.dedup();
    members
}

fn permutations(v: &[u8]) -> Vec<Vec<u8>> {
    // distinct permutations of a short multiset
    let mut sorted = v.to_vec();
    sorted.sort_unstable();
    let mut out = Vec::new();
    loop {
        out.push(sorted.clone());
        // next_permutation
        let n = sorted.len();
        let mut i = n.wrapping_sub(1);
        while i > 0 && sorted[i - 1] >= sorted[i] {
            i -= 1;
        }
        if i == 0 {
            break;
        }
        let mut j = n - 1;
        while sorted[j] <= sorted[i - 1] {
            j -= 1;
        }
        sorted.swap(i - 1, j);
        sorted[i..].reverse();
    }
    out
}

/// The class of one signature: canonical representative and orbit size.
pub fn class_of(sig: &Signature, model: GaloisModel) -> SignatureClass {
    let orbit = orbit_of(sig, model);
    SignatureClass {
        representative: orbit[0].clone(),
        orbit_size: orbit.len() as u64,
        galois_model: model,
    }
}

/// Minimal representatives of the signature classes of degree `d` under
/// the chosen model combined with dualization, lexicographically ordered.
pub fn orbit_representatives(d: u32, model: GaloisModel) -> Result<Vec<SignatureClass>> {
    if d == 0 {
        return Err(domain("degree must be >= 1"));
    }
    if d > 10 {
        return Err(domain("orbit enumeration over 5^d signatures capped at d = 10"));
    }
    let mut classes = Vec::new();
    match model {
        GaloisModel::Cyclic => {
            // walk all 5^d tuples in lexicographic order; the first tuple
            // seen in each orbit is its minimal representative
            let mut seen = std::collections::HashSet::new();
            let total = 5u64.pow(d);
            let mut tuple = vec![0u8; d as usize];
            for idx in 0..total {
                let mut rem = idx;
                for slot in tuple.iter_mut().rev() {
                    *slot = ALLOWED[(rem % 5) as usize];
                    rem /= 5;
                }
                let sig = Signature(tuple.clone());
                if seen.contains(&sig) {
                    continue;
                }
                let orbit = orbit_of(&sig, model);
                debug_assert_eq!(&orbit[0], &sig, "lex-first tuple is minimal");
                for m in &orbit {
                    seen.insert(m.clone());
                }
                classes.push(SignatureClass {
                    representative: sig,
                    orbit_size: orbit.len() as u64,
                    galois_model: model,
                });
            }
        }
        GaloisModel::Symmetric => {
            // non-decreasing tuples enumerate the permutation classes
            let mut seen = std::collections::HashSet::new();
            let mut current: Vec<u8> = Vec::with_capacity(d as usize);
            fn rec(
                d: usize,
                start: usize,
                current: &mut Vec<u8>,
                seen: &mut std::collections::HashSet<Signature>,
                classes: &mut Vec<SignatureClass>,
            ) {
                if current.len() == d {
                    let sig = Signature(current.clone());
                    if !seen.contains(&sig) {
                        let orbit = orbit_of(&sig, GaloisModel::Symmetric);
                        for m in &orbit {
                            seen.insert(m.clone());
                        }
                        classes.push(SignatureClass {
                            representative: sig,
                            orbit_size: orbit.len() as u64,
                            galois_model: GaloisModel::Symmetric,
                        });
                    }
                    return;
                }
                for i in start..ALLOWED.len() {
                    current.push(ALLOWED[i]);
                    rec(d, i, current, seen, classes);
                    current.pop();
                }
            }
            rec(d as usize, 0, &mut current, &mut seen, &mut classes);
            classes.sort_by(|a, b| a.representative.cmp(&b.representative));
        }
    }
    Ok(classes)
}
