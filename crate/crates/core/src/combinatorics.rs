//! Exact multinomials and composition enumeration.

use num_bigint::BigUint;
use num_traits::{One, Zero};

/// Largest `n` whose factorial fits in a `u128`.
const U128_FACTORIAL_LIMIT: usize = 34;

/// Multinomial evaluator for a fixed total `n`.
///
/// For `n <= 34` every multinomial fits in a `u128` and is computed as a
/// product of native binomials; larger `n` divides precomputed `BigUint`
/// factorials.
#[derive(Debug, Clone)]
pub struct Multinomials {
    n: usize,
    big: Vec<BigUint>,
}

impl Multinomials {
    pub fn new(n: usize) -> Self {
        let mut big = Vec::new();
        if n > U128_FACTORIAL_LIMIT {
            let mut acc = BigUint::one();
            big.push(acc.clone());
            for k in 1..=n {
                acc *= k as u64;
                big.push(acc.clone());
            }
        }
        Multinomials { n, big }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `n! / prod(parts[i]!)`; zero unless the parts sum to `n`.
    pub fn count(&self, parts: &[usize]) -> BigUint {
        if parts.iter().sum::<usize>() != self.n {
            return BigUint::zero();
        }
        if self.big.is_empty() {
            return BigUint::from(self.count_small(parts));
        }
        let mut den = BigUint::one();
        for &k in parts {
            if k > 1 {
                den *= &self.big[k];
            }
        }
        &self.big[self.n] / den
    }

    /// Native-integer path; every partial product is itself a multinomial
    /// bounded by `n!`.
    pub fn count_small(&self, parts: &[usize]) -> u128 {
        debug_assert!(self.n <= U128_FACTORIAL_LIMIT);
        let mut remaining = self.n;
        let mut acc: u128 = 1;
        for &k in parts {
            acc *= binomial_u128(remaining, k);
            remaining -= k;
        }
        acc
    }

    /// Whether [`count_small`](Self::count_small) is usable.
    pub fn fits_u128(&self) -> bool {
        self.big.is_empty()
    }
}

fn binomial_u128(n: usize, k: usize) -> u128 {
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// Exact multinomial coefficient `(sum parts)! / prod(parts[i]!)`.
pub fn multinomial(parts: &[usize]) -> BigUint {
    let mut remaining: usize = parts.iter().sum();
    let mut acc = BigUint::one();
    for &k in parts {
        acc *= binomial(remaining, k);
        remaining -= k;
    }
    acc
}

/// Exact binomial coefficient; zero when `k > n`.
pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= (n - i) as u64;
        acc /= (i + 1) as u64;
    }
    acc
}

/// Number of compositions of `n` into `parts` nonnegative parts.
pub fn composition_count(n: usize, parts: usize) -> BigUint {
    if parts == 0 {
        return if n == 0 { BigUint::one() } else { BigUint::zero() };
    }
    binomial(n + parts - 1, parts - 1)
}

/// Iterator over compositions of `n` into `parts` nonnegative parts, in
/// reverse-lexicographic order starting from `(n, 0, ..., 0)`.
#[derive(Debug, Clone)]
pub struct Compositions {
    current: Vec<usize>,
    done: bool,
}

impl Compositions {
    pub fn new(n: usize, parts: usize) -> Self {
        if parts == 0 {
            return Compositions { current: Vec::new(), done: n != 0 };
        }
        let mut current = vec![0; parts];
        current[0] = n;
        Compositions { current, done: false }
    }

    /// Steps to the next composition in place; false once exhausted.
    fn advance(&mut self) -> bool {
        let len = self.current.len();
        if len <= 1 {
            return false;
        }
        // Rightmost nonzero entry strictly before the last slot.
        let last = self.current[len - 1];
        self.current[len - 1] = 0;
        let Some(i) = (0..len - 1).rev().find(|&i| self.current[i] > 0) else {
            self.current[len - 1] = last;
            return false;
        };
        self.current[i] -= 1;
        self.current[i + 1] = last + 1;
        true
    }

    /// Visits every remaining composition without allocating.
    pub fn for_each_slice(mut self, mut f: impl FnMut(&[usize])) {
        if self.done {
            return;
        }
        loop {
            f(&self.current);
            if !self.advance() {
                break;
            }
        }
    }
}

impl Iterator for Compositions {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.current.clone();
        if !self.advance() {
            self.done = true;
        }
        Some(out)
    }
}

/// Trial-division primality test; inputs here are tiny.
pub fn is_prime(p: usize) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}
