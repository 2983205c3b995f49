//! Weight tuples, shift conventions and symmetric sets.
//!
//! The canonical representation of a weight tuple is the full unshifted count
//! vector `(w_0, ..., w_{q-1})`, nonnegative and summing to `n`. Shifted
//! tuples are views produced by a [`ShiftConvention`].

use std::borrow::Borrow;
use std::collections::BTreeSet;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::combinatorics::{is_prime, multinomial, Compositions, Multinomials};
use crate::error::{input, Error, Result};

/// Alphabet size and dimension of the ambient space `Z_q^n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SpaceParams {
    q: usize,
    n: usize,
    prime_required: bool,
}

impl SpaceParams {
    pub fn new(q: usize, n: usize) -> Result<Self> {
        if q < 3 {
            return input(format!("alphabet size q={q} must be at least 3"));
        }
        if n < 1 {
            return input("dimension n must be at least 1");
        }
        // Symbols are stored as u8 by the enumerators.
        if q > 255 {
            return input(format!("alphabet size q={q} is too large"));
        }
        Ok(SpaceParams { q, n, prime_required: false })
    }

    /// Parameters for modules that need `q = p` prime.
    pub fn prime(p: usize, n: usize) -> Result<Self> {
        let mut params = SpaceParams::new(p, n)?;
        if !is_prime(p) {
            return input(format!("p={p} is not prime"));
        }
        params.prime_required = true;
        Ok(params)
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn prime_required(&self) -> bool {
        self.prime_required
    }

    /// `q^n`, the size of the ambient space.
    pub fn space_size(&self) -> BigUint {
        BigUint::from(self.q).pow(self.n as u32)
    }

    /// All valid weight tuples in reverse-lexicographic order.
    pub fn all_tuples(&self) -> impl Iterator<Item = WeightTuple> {
        Compositions::new(self.n, self.q).map(WeightTuple)
    }
}

/// Symbol counts `(w_0, ..., w_{q-1})` of an element of `Z_q^n`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct WeightTuple(Vec<usize>);

impl WeightTuple {
    /// Validates `counts` against `params`: length `q`, sum `n`.
    pub fn new(counts: Vec<usize>, params: &SpaceParams) -> Result<Self> {
        if counts.len() != params.q {
            return input(format!("weight tuple {counts:?} has length {}, expected q={}", counts.len(), params.q));
        }
        let total: usize = counts.iter().sum();
        if total != params.n {
            return input(format!("weight tuple {counts:?} sums to {total}, expected n={}", params.n));
        }
        Ok(WeightTuple(counts))
    }

    /// Builds a tuple from signed counts, failing on negative entries or a wrong sum.
    pub fn from_signed(counts: &[i64], params: &SpaceParams) -> Result<Self> {
        let mut out = Vec::with_capacity(counts.len());
        for &c in counts {
            if c < 0 {
                return Err(Error::Range(format!("negative count in {counts:?}")));
            }
            out.push(c as usize);
        }
        WeightTuple::new(out, params).map_err(|_| Error::Range(format!("{counts:?} is not a weight tuple for q={}, n={}", params.q, params.n)))
    }

    pub fn counts(&self) -> &[usize] {
        &self.0
    }

    pub fn q(&self) -> usize {
        self.0.len()
    }

    pub fn n(&self) -> usize {
        self.0.iter().sum()
    }

    /// Number of elements of `Z_q^n` with this weight tuple.
    pub fn multinomial_count(&self) -> BigUint {
        multinomial(&self.0)
    }

    pub fn shift(&self, convention: &ShiftConvention) -> ShiftedWeightTuple {
        let values = convention
            .kept_indices
            .iter()
            .map(|&a| self.0[a] as i64 - convention.shift as i64)
            .collect();
        ShiftedWeightTuple { values, convention: convention.clone(), q: self.q(), n: self.n() }
    }
}

impl Borrow<[usize]> for WeightTuple {
    fn borrow(&self) -> &[usize] {
        &self.0
    }
}

/// Weight tuple of a vector of symbols.
pub fn weights_of(x: &[usize], params: &SpaceParams) -> Result<WeightTuple> {
    if x.len() != params.n {
        return input(format!("vector has length {}, expected n={}", x.len(), params.n));
    }
    let mut counts = vec![0; params.q];
    for &s in x {
        if s >= params.q {
            return input(format!("symbol {s} outside Z_{}", params.q));
        }
        counts[s] += 1;
    }
    Ok(WeightTuple(counts))
}

/// Which `q - 1` coordinates a shifted tuple keeps, and by how much they are shifted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ShiftConvention {
    kept_indices: Vec<usize>,
    shift: usize,
}

impl ShiftConvention {
    pub fn new(kept_indices: Vec<usize>, shift: usize, q: usize) -> Result<Self> {
        let distinct: BTreeSet<_> = kept_indices.iter().copied().collect();
        if kept_indices.len() + 1 != q || distinct.len() != kept_indices.len() || distinct.iter().any(|&a| a >= q) {
            return input(format!("kept indices {kept_indices:?} must be q-1 distinct symbols of Z_{q}"));
        }
        Ok(ShiftConvention { kept_indices, shift })
    }

    /// Length-three convention: keep `(w_0, w_1)`, shift by `n/3`.
    pub fn triangle(n: usize) -> Self {
        ShiftConvention { kept_indices: vec![0, 1], shift: n / 3 }
    }

    /// Restricted-progression convention: keep `(w_1, ..., w_{q-1})`, shift by `2*floor(n/2q)`.
    pub fn restricted(q: usize, n: usize) -> Self {
        ShiftConvention { kept_indices: (1..q).collect(), shift: 2 * (n / (2 * q)) }
    }

    /// Full-progression convention: keep `(w_0, ..., w_{p-2})`, shift by `p*floor(n/p^2)`.
    pub fn full(p: usize, n: usize) -> Self {
        ShiftConvention { kept_indices: (0..p - 1).collect(), shift: p * (n / (p * p)) }
    }

    pub fn kept_indices(&self) -> &[usize] {
        &self.kept_indices
    }

    pub fn shift(&self) -> usize {
        self.shift
    }

    fn dropped_index(&self, q: usize) -> usize {
        (0..q).find(|a| !self.kept_indices.contains(a)).expect("q-1 kept indices")
    }
}

/// `q - 1` shifted weights under a [`ShiftConvention`]; entries may be negative.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ShiftedWeightTuple {
    values: Vec<i64>,
    convention: ShiftConvention,
    q: usize,
    n: usize,
}

impl ShiftedWeightTuple {
    pub fn new(values: Vec<i64>, convention: ShiftConvention, params: &SpaceParams) -> Result<Self> {
        if values.len() + 1 != params.q || convention.kept_indices.len() != values.len() {
            return input(format!("shifted tuple {values:?} does not match q={}", params.q));
        }
        Ok(ShiftedWeightTuple { values, convention, q: params.q, n: params.n })
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    pub fn convention(&self) -> &ShiftConvention {
        &self.convention
    }

    /// Recovers the full tuple, reconstructing the dropped coordinate from `sum = n`.
    pub fn unshift(&self) -> Result<WeightTuple> {
        let mut full = vec![0i64; self.q];
        for (&a, &v) in self.convention.kept_indices.iter().zip(&self.values) {
            full[a] = v + self.convention.shift as i64;
        }
        let kept: i64 = full.iter().sum();
        full[self.convention.dropped_index(self.q)] = self.n as i64 - kept;
        let params = SpaceParams { q: self.q, n: self.n, prime_required: false };
        WeightTuple::from_signed(&full, &params)
    }
}

/// Subset of `Z_q^n` whose membership depends only on the weight tuple.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymmetricSet {
    params: SpaceParams,
    tuples: BTreeSet<WeightTuple>,
}

impl SymmetricSet {
    pub fn new(params: SpaceParams, tuples: impl IntoIterator<Item = WeightTuple>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for t in tuples {
            WeightTuple::new(t.0.clone(), &params)?;
            set.insert(t);
        }
        Ok(SymmetricSet { params, tuples: set })
    }

    pub fn empty(params: SpaceParams) -> Self {
        SymmetricSet { params, tuples: BTreeSet::new() }
    }

    /// The whole space `Z_q^n`.
    pub fn full(params: SpaceParams) -> Self {
        SymmetricSet { params, tuples: params.all_tuples().collect() }
    }

    pub fn params(&self) -> &SpaceParams {
        &self.params
    }

    pub fn tuples(&self) -> &BTreeSet<WeightTuple> {
        &self.tuples
    }

    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    pub fn contains(&self, counts: &[usize]) -> bool {
        self.tuples.contains(counts)
    }

    /// Number of points of `Z_q^n` in the set.
    pub fn cardinality(&self) -> BigUint {
        let table = Multinomials::new(self.params.n);
        self.tuples.iter().fold(BigUint::zero(), |acc, t| acc + table.count(&t.0))
    }

    /// Exact point density `|S| / q^n`.
    pub fn density(&self) -> BigRational {
        BigRational::new(BigInt::from(self.cardinality()), BigInt::from(self.params.space_size()))
    }

    pub fn filter(&self, mut keep: impl FnMut(&WeightTuple) -> bool) -> SymmetricSet {
        SymmetricSet { params: self.params, tuples: self.tuples.iter().filter(|t| keep(t)).cloned().collect() }
    }
}

/// The `q` weight tuples of a progression's elements, in order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct WeightArrangement(Vec<WeightTuple>);

impl WeightArrangement {
    pub fn new(tuples: Vec<WeightTuple>, params: &SpaceParams) -> Result<Self> {
        if tuples.len() != params.q {
            return input(format!("arrangement has {} tuples, expected q={}", tuples.len(), params.q));
        }
        for t in &tuples {
            WeightTuple::new(t.0.clone(), params)?;
        }
        Ok(WeightArrangement(tuples))
    }

    /// Parses nested count vectors, validating each row against `params`.
    pub fn from_rows(rows: Vec<Vec<usize>>, params: &SpaceParams) -> Result<Self> {
        let tuples = rows.into_iter().map(|r| WeightTuple::new(r, params)).collect::<Result<Vec<_>>>()?;
        WeightArrangement::new(tuples, params)
    }

    pub fn tuples(&self) -> &[WeightTuple] {
        &self.0
    }

    pub fn q(&self) -> usize {
        self.0.len()
    }

    pub fn n(&self) -> usize {
        self.0.first().map_or(0, WeightTuple::n)
    }

    pub fn params(&self) -> Result<SpaceParams> {
        SpaceParams::new(self.q(), self.n())
    }

    /// Concatenated counts, row by row.
    pub fn flatten(&self) -> Vec<usize> {
        self.0.iter().flat_map(|t| t.0.iter().copied()).collect()
    }

    pub fn shift(&self, convention: &ShiftConvention) -> Vec<ShiftedWeightTuple> {
        self.0.iter().map(|t| t.shift(convention)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p36() -> SpaceParams {
        SpaceParams::new(3, 6).unwrap()
    }

    #[test]
    fn weights_of_examples() {
        let p = SpaceParams::new(3, 3).unwrap();
        assert_eq!(weights_of(&[0, 0, 0], &p).unwrap().counts(), &[3, 0, 0]);
        assert_eq!(weights_of(&[0, 1, 2], &p).unwrap().counts(), &[1, 1, 1]);
        let p4 = SpaceParams::new(3, 4).unwrap();
        assert_eq!(weights_of(&[0, 1, 2, 0], &p4).unwrap().counts(), &[2, 1, 1]);
        assert!(matches!(weights_of(&[0, 3, 1], &p), Err(Error::Input(_))));
    }

    #[test]
    fn params_validation() {
        assert!(SpaceParams::new(2, 3).is_err());
        assert!(SpaceParams::new(3, 0).is_err());
        assert!(SpaceParams::prime(4, 2).is_err());
        assert!(SpaceParams::prime(5, 2).unwrap().prime_required());
    }

    #[test]
    fn multinomial_examples() {
        let p = p36();
        for (w, expect) in [(vec![2, 2, 2], 90u32), (vec![6, 0, 0], 1), (vec![3, 2, 1], 60)] {
            assert_eq!(WeightTuple::new(w, &p).unwrap().multinomial_count(), BigUint::from(expect));
        }
    }

    #[test]
    fn restricted_shift_examples() {
        let p = p36();
        let c = ShiftConvention::restricted(3, 6);
        assert_eq!(c.shift(), 2);
        let centered = WeightTuple::new(vec![2, 2, 2], &p).unwrap().shift(&c);
        assert_eq!(centered.values(), &[0, 0]);
        let w = WeightTuple::new(vec![1, 3, 2], &p).unwrap();
        assert_eq!(w.shift(&c).values(), &[1, 0]);
        let sw = ShiftedWeightTuple::new(vec![1, 0], c, &p).unwrap();
        assert_eq!(sw.unshift().unwrap(), w);
    }

    #[test]
    fn unshift_out_of_range() {
        let p = p36();
        let sw = ShiftedWeightTuple::new(vec![5, 5], ShiftConvention::restricted(3, 6), &p).unwrap();
        assert!(matches!(sw.unshift(), Err(Error::Range(_))));
        let sw = ShiftedWeightTuple::new(vec![-3, 0], ShiftConvention::restricted(3, 6), &p).unwrap();
        assert!(matches!(sw.unshift(), Err(Error::Range(_))));
    }

    #[test]
    fn multinomials_over_all_tuples_sum_to_space() {
        for n in 1..=12 {
            let p = SpaceParams::new(3, n).unwrap();
            let total = p.all_tuples().fold(BigUint::zero(), |acc, t| acc + t.multinomial_count());
            assert_eq!(total, p.space_size());
            assert_eq!(SymmetricSet::full(p).density(), BigRational::from_integer(1.into()));
        }
    }

    #[test]
    fn symmetric_set_rejects_bad_tuple() {
        let p = p36();
        let bad = WeightTuple(vec![1, 1, 1]);
        assert!(SymmetricSet::new(p, [bad]).is_err());
    }

    proptest! {
        #[test]
        fn weights_sum_to_n(x in proptest::collection::vec(0usize..5, 1..20)) {
            let p = SpaceParams::new(5, x.len()).unwrap();
            let w = weights_of(&x, &p).unwrap();
            prop_assert_eq!(w.n(), x.len());
        }

        #[test]
        fn shift_round_trips_all_conventions(q in 3usize..7, n in 1usize..30, seed in any::<u64>()) {
            let p = SpaceParams::new(q, n).unwrap();
            let tuples: Vec<_> = p.all_tuples().collect();
            let w = &tuples[(seed % tuples.len() as u64) as usize];
            for c in [ShiftConvention::restricted(q, n), ShiftConvention::full(q, n),
                      ShiftConvention::new((0..q - 1).rev().collect(), n / q, q).unwrap()] {
                prop_assert_eq!(&w.shift(&c).unshift().unwrap(), w);
            }
            if q == 3 {
                let c = ShiftConvention::triangle(n);
                prop_assert_eq!(&w.shift(&c).unshift().unwrap(), w);
            }
        }
    }
}
