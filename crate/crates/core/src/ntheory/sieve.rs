//! Segmented sieve of Eratosthenes. Memory is bounded by the segment size,
//! never by the range, so the Type-2 scanner can walk multi-trillion
//! windows with a fixed footprint.

/// Default numbers per segment (bits over odds only, so ~64 KiB each).
const SEGMENT_SPAN: u64 = 1 << 20;

/// All primes `<= limit` by a simple odds-only sieve.
pub fn simple_sieve(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n_odds = ((limit - 1) / 2) as usize; // odds 3, 5, ..., <= limit
    let mut composite = vec![false; n_odds + 1];
    let mut primes = vec![2u64];
    let mut i = 0usize;
    while {
        let p = 2 * i as u64 + 3;
        p * p <= limit
    } {
        if !composite[i] {
            let p = 2 * i as u64 + 3;
            let mut j = (p * p - 3) / 2;
            while (j as usize) < composite.len() {
                composite[j as usize] = true;
                j += p;
            }
        }
        i += 1;
    }
    for (i, &c) in composite.iter().enumerate() {
        let p = 2 * i as u64 + 3;
        if !c && p <= limit {
            primes.push(p);
        }
    }
    primes
}

/// Streaming iterator over the primes in `[lo, hi]`.
pub struct SegmentedPrimes {
    base: Vec<u64>,
    next_start: u64,
    hi: u64,
    span: u64,
    buffer: Vec<u64>,
    buffer_pos: usize,
}

impl SegmentedPrimes {
    pub fn new(lo: u64, hi: u64) -> Self {
        Self::with_span(lo, hi, SEGMENT_SPAN)
    }

    pub fn with_span(lo: u64, hi: u64, span: u64) -> Self {
        let root = if hi >= 4 { (hi as f64).sqrt() as u64 + 2 } else { 2 };
        SegmentedPrimes {
            base: if lo <= hi { simple_sieve(root) } else { Vec::new() },
            next_start: lo,
            hi,
            span: span.max(64),
            buffer: Vec::new(),
            buffer_pos: 0,
        }
    }

    fn fill(&mut self) {
        self.buffer.clear();
        self.buffer_pos = 0;
        while self.buffer.is_empty() && self.next_start <= self.hi {
            let lo = self.next_start;
            let hi = self.hi.min(lo.saturating_add(self.span - 1));
            self.next_start = hi + 1;
            sieve_segment(&self.base, lo, hi, &mut self.buffer);
            if hi == u64::MAX {
                self.next_start = self.hi; // guard overflow; loop exits below
                break;
            }
        }
    }
}

impl Iterator for SegmentedPrimes {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        if self.buffer_pos >= self.buffer.len() {
            self.fill();
            if self.buffer.is_empty() {
                return None;
            }
        }
        let p = self.buffer[self.buffer_pos];
        self.buffer_pos += 1;
        Some(p)
    }
}

fn sieve_segment(base: &[u64], lo: u64, hi: u64, out: &mut Vec<u64>) {
    if lo > hi {
        return;
    }
    if lo <= 2 && 2 <= hi {
        out.push(2);
    }
    // odd numbers in [max(lo,3), hi]
    let first = lo.max(3) | 1;
    if first > hi {
        return;
    }
    let count = ((hi - first) / 2 + 1) as usize;
    let mut composite = vec![false; count];
    for &p in base.iter().skip(1) {
        // first odd multiple of p in [first, hi], at least p*p
        if p * p > hi {
            break;
        }
        let mut start = p * p;
        if start < first {
            start = first.div_ceil(p) * p;
            if start % 2 == 0 {
                start += p;
            }
        }
        let mut j = start;
        while j <= hi {
            composite[((j - first) / 2) as usize] = true;
            j += 2 * p;
        }
    }
    for (i, &c) in composite.iter().enumerate() {
        if !c {
            let n = first + 2 * i as u64;
            if n >= 3 {
                out.push(n);
            }
        }
    }
    // 1 is not prime; `first >= 3` guarantees it never appears
}

/// The primes in `[lo, hi]`, collected.
pub fn primes_in(lo: u64, hi: u64) -> Vec<u64> {
    SegmentedPrimes::new(lo, hi).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_primes() {
        assert_eq!(primes_in(0, 10), vec![2, 3, 5, 7]);
        assert_eq!(primes_in(0, 1), Vec::<u64>::new());
        assert_eq!(primes_in(2, 2), vec![2]);
        assert_eq!(primes_in(14, 16), Vec::<u64>::new());
    }

    #[test]
    fn prime_counts() {
        assert_eq!(primes_in(0, 10_000).len(), 1229);
        // count below 12,814 (i.e. primes <= 12,813); used by the d=3
        // auxiliary-prime ceiling
        assert_eq!(primes_in(0, 12_813).len(), 1527);
        assert_eq!(primes_in(0, 12_800).len(), 1526);
    }

    #[test]
    fn contains_253507() {
        let window = primes_in(253_500, 253_510);
        assert_eq!(window, vec![253_501, 253_507]);
    }

    #[test]
    fn segment_boundaries_lose_nothing() {
        let whole = primes_in(0, 40_000);
        for cut in [1u64, 97, 1024, 12345, 39999] {
            let mut parts = primes_in(0, cut);
            parts.extend(primes_in(cut + 1, 40_000));
            assert_eq!(parts, whole, "cut at {cut}");
        }
        // tiny spans force many segments
        let tiny: Vec<u64> = SegmentedPrimes::with_span(10_000, 20_000, 64).collect();
        assert_eq!(tiny, primes_in(10_000, 20_000));
    }

    #[test]
    fn matches_simple_sieve() {
        assert_eq!(primes_in(0, 100_000), simple_sieve(100_000));
    }

    #[test]
    fn agrees_with_primality_near_ten_million() {
        use super::super::is_prime_u64;
        let lo = 9_990_000u64;
        let hi = 10_000_050u64;
        let from_sieve = primes_in(lo, hi);
        let from_tests: Vec<u64> = (lo..=hi).filter(|&n| is_prime_u64(n)).collect();
        assert_eq!(from_sieve, from_tests);
    }
}
