//! Brute-force enumeration of progressions in `Z_q^n`.
//!
//! Ground truth for every exact counting routine in the crate. Progressions
//! are identified with their `(x, d)` pairs and visited in lexicographic order
//! of `(x, d)`.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::budget::Budget;
use crate::error::{input, Result};
use crate::weights::{SpaceParams, SymmetricSet, WeightArrangement, WeightTuple};

/// Which differences a progression may use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum ProgressionKind {
    /// `d in {0,1}^n`, any `q >= 3`.
    Restricted,
    /// `d in F_p^n`, `q = p` prime.
    Full,
}

impl ProgressionKind {
    fn diff_radix(self, q: usize) -> usize {
        match self {
            ProgressionKind::Restricted => 2,
            ProgressionKind::Full => q,
        }
    }

    /// Number of `(x, d)` pairs: `(2q)^n` or `p^{2n}`.
    pub fn total(self, params: &SpaceParams) -> BigUint {
        BigUint::from(params.q() * self.diff_radix(params.q())).pow(params.n() as u32)
    }

    fn validate(self, params: &SpaceParams) -> Result<()> {
        if self == ProgressionKind::Full && !crate::combinatorics::is_prime(params.q()) {
            return input(format!("full progressions need prime q, got {}", params.q()));
        }
        Ok(())
    }
}

/// A progression `x, x+d, ..., x+(q-1)d` given by its start and difference.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Progression {
    q: usize,
    start: Vec<u8>,
    diff: Vec<u8>,
}

/// Progression with difference in `{0,1}^n`.
pub type RestrictedProgression = Progression;
/// Progression with unrestricted difference over `F_p`.
pub type FullProgression = Progression;

impl Progression {
    pub fn start(&self) -> &[u8] {
        &self.start
    }

    pub fn diff(&self) -> &[u8] {
        &self.diff
    }

    /// Element `x + j*d` for `j = 0..q`.
    pub fn element(&self, j: usize) -> Vec<usize> {
        self.start
            .iter()
            .zip(&self.diff)
            .map(|(&x, &d)| (x as usize + j * d as usize) % self.q)
            .collect()
    }

    pub fn elements(&self) -> Vec<Vec<usize>> {
        (0..self.q).map(|j| self.element(j)).collect()
    }

    /// Weight tuples of all elements.
    pub fn arrangement(&self) -> WeightArrangement {
        let n = self.start.len();
        let params = SpaceParams::new(self.q, n).expect("valid progression parameters");
        let tuples = (0..self.q)
            .map(|j| crate::weights::weights_of(&self.element(j), &params).expect("symbols in range"))
            .collect();
        WeightArrangement::new(tuples, &params).expect("q tuples")
    }
}

/// Lexicographic stream of `(x, d)` pairs.
#[derive(Debug, Clone)]
pub struct Progressions {
    q: usize,
    diff_radix: usize,
    start: Vec<u8>,
    diff: Vec<u8>,
    done: bool,
}

impl Progressions {
    fn new(params: &SpaceParams, kind: ProgressionKind) -> Self {
        Progressions {
            q: params.q(),
            diff_radix: kind.diff_radix(params.q()),
            start: vec![0; params.n()],
            diff: vec![0; params.n()],
            done: false,
        }
    }

    fn advance(&mut self) {
        if bump(&mut self.diff, self.diff_radix) {
            return;
        }
        if !bump(&mut self.start, self.q) {
            self.done = true;
        }
    }
}

/// Odometer increment, last digit fastest. False on wrap-around.
fn bump(digits: &mut [u8], radix: usize) -> bool {
    for digit in digits.iter_mut().rev() {
        if (*digit as usize) + 1 < radix {
            *digit += 1;
            return true;
        }
        *digit = 0;
    }
    false
}

impl Iterator for Progressions {
    type Item = Progression;

    fn next(&mut self) -> Option<Progression> {
        if self.done {
            return None;
        }
        let out = Progression { q: self.q, start: self.start.clone(), diff: self.diff.clone() };
        self.advance();
        Some(out)
    }
}

/// All restricted progressions of `Z_q^n`; `(2q)^n` of them.
pub fn enumerate_restricted(params: &SpaceParams, budget: &Budget) -> Result<Progressions> {
    budget.check(&ProgressionKind::Restricted.total(params))?;
    Ok(Progressions::new(params, ProgressionKind::Restricted))
}

/// All progressions of `F_p^n`; `p^{2n}` of them.
pub fn enumerate_full(params: &SpaceParams, budget: &Budget) -> Result<Progressions> {
    ProgressionKind::Full.validate(params)?;
    budget.check(&ProgressionKind::Full.total(params))?;
    Ok(Progressions::new(params, ProgressionKind::Full))
}

/// Brute-force count of progressions landing in a product of symmetric sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleCount {
    pub count: BigUint,
    /// Hits keyed by weight arrangement.
    pub histogram: BTreeMap<WeightArrangement, u64>,
}

/// Checks that `sets` are `q` symmetric sets over one parameter set.
pub(crate) fn shared_params(sets: &[SymmetricSet]) -> Result<SpaceParams> {
    let Some(first) = sets.first() else {
        return input("no sets given");
    };
    let params = *first.params();
    if sets.iter().any(|s| s.params().q() != params.q() || s.params().n() != params.n()) {
        return input("sets do not share (q, n)");
    }
    if sets.len() != params.q() {
        return input(format!("expected q={} sets, got {}", params.q(), sets.len()));
    }
    Ok(params)
}

/// Counts progressions `(x^(1), ..., x^(q))` with `x^(j) in S^(j)` by enumerating every `(x, d)`.
pub fn oracle_count(sets: &[SymmetricSet], kind: ProgressionKind, budget: &Budget) -> Result<OracleCount> {
    let params = shared_params(sets)?;
    kind.validate(&params)?;
    budget.check(&kind.total(&params))?;

    let (q, n) = (params.q(), params.n());
    let mut hits: HashMap<Vec<usize>, u64> = HashMap::new();
    if sets.iter().all(|s| !s.is_empty()) {
        let mut walk = Progressions::new(&params, kind);
        let mut weights = vec![0usize; q * q];
        while !walk.done {
            weights.iter_mut().for_each(|w| *w = 0);
            for (&x, &d) in walk.start.iter().zip(&walk.diff) {
                let (x, d) = (x as usize, d as usize);
                for j in 0..q {
                    weights[j * q + (x + j * d) % q] += 1;
                }
            }
            if (0..q).all(|j| sets[j].contains(&weights[j * q..(j + 1) * q])) {
                *hits.entry(weights.clone()).or_insert(0) += 1;
            }
            walk.advance();
        }
    }

    let mut histogram = BTreeMap::new();
    let mut count = BigUint::default();
    for (flat, c) in hits {
        count += c;
        let tuples = flat.chunks(q).map(|row| WeightTuple::new(row.to_vec(), &params)).collect::<Result<Vec<_>>>()?;
        debug_assert_eq!(tuples.iter().map(WeightTuple::n).max(), Some(n));
        histogram.insert(WeightArrangement::new(tuples, &params)?, c);
    }
    Ok(OracleCount { count, histogram })
}

/// Histogram of every progression by weight arrangement.
pub fn oracle_histogram(params: &SpaceParams, kind: ProgressionKind, budget: &Budget) -> Result<OracleCount> {
    let sets: Vec<_> = (0..params.q()).map(|_| SymmetricSet::full(*params)).collect();
    oracle_count(&sets, kind, budget)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    fn params(q: usize, n: usize) -> SpaceParams {
        SpaceParams::new(q, n).unwrap()
    }

    fn singleton(p: SpaceParams, w: &[usize]) -> SymmetricSet {
        SymmetricSet::new(p, [WeightTuple::new(w.to_vec(), &p).unwrap()]).unwrap()
    }

    #[test]
    fn restricted_totals() {
        let b = Budget::default();
        assert_eq!(enumerate_restricted(&params(3, 2), &b).unwrap().count(), 36);
        assert_eq!(enumerate_restricted(&params(4, 2), &b).unwrap().count(), 64);
        let one: Vec<_> = enumerate_restricted(&params(3, 1), &b).unwrap().collect();
        assert_eq!(one.len(), 6);
        assert_eq!(one.iter().filter(|p| p.diff() == [0]).count(), 3);
        assert_eq!(one.iter().filter(|p| p.diff() == [1]).count(), 3);
    }

    #[test]
    fn full_totals() {
        let b = Budget::default();
        assert_eq!(enumerate_full(&SpaceParams::prime(3, 2).unwrap(), &b).unwrap().count(), 81);
        assert_eq!(enumerate_full(&SpaceParams::prime(3, 1).unwrap(), &b).unwrap().count(), 9);
        assert_eq!(enumerate_full(&SpaceParams::prime(5, 1).unwrap(), &b).unwrap().count(), 25);
        assert!(matches!(enumerate_full(&params(4, 1), &b), Err(Error::Input(_))));
    }

    #[test]
    fn lexicographic_order() {
        let all: Vec<_> = enumerate_restricted(&params(3, 2), &Budget::default()).unwrap().collect();
        let keys: Vec<_> = all.iter().map(|p| (p.start().to_vec(), p.diff().to_vec())).collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
        sorted.dedup();
        assert_eq!(sorted.len(), 36);
    }

    #[test]
    fn budget_refusal() {
        let b = Budget::new(35).unwrap();
        assert!(matches!(enumerate_restricted(&params(3, 2), &b), Err(Error::Budget { .. })));
        let p = params(3, 2);
        let sets = vec![SymmetricSet::full(p); 3];
        assert!(matches!(oracle_count(&sets, ProgressionKind::Restricted, &b), Err(Error::Budget { .. })));
    }

    #[test]
    fn oracle_examples() {
        let b = Budget::default();
        let p = params(3, 6);
        let sets = vec![singleton(p, &[2, 2, 2]); 3];
        let out = oracle_count(&sets, ProgressionKind::Restricted, &b).unwrap();
        assert_eq!(out.count, BigUint::from(900u32));
        assert_eq!(out.histogram.len(), 1);

        let mut with_empty = sets.clone();
        with_empty[0] = SymmetricSet::empty(p);
        assert_eq!(oracle_count(&with_empty, ProgressionKind::Restricted, &b).unwrap().count, BigUint::default());

        let p = SpaceParams::prime(3, 2).unwrap();
        let sets = vec![singleton(p, &[1, 1, 0]); 3];
        let out = oracle_count(&sets, ProgressionKind::Full, &b).unwrap();
        assert_eq!(out.count, BigUint::from(2u32));
    }

    #[test]
    fn histogram_matches_arrangement_of_each_progression() {
        let p = params(3, 3);
        let b = Budget::default();
        let hist = oracle_histogram(&p, ProgressionKind::Restricted, &b).unwrap();
        let mut manual: BTreeMap<WeightArrangement, u64> = BTreeMap::new();
        for prog in enumerate_restricted(&p, &b).unwrap() {
            *manual.entry(prog.arrangement()).or_default() += 1;
        }
        assert_eq!(hist.histogram, manual);
        assert_eq!(hist.count, BigUint::from(216u32));
    }

    #[test]
    fn coordinate_sums_follow_progression() {
        // s_j = s_1 + (j-1) * t (mod p), t = sum of d
        let p = SpaceParams::prime(5, 2).unwrap();
        for prog in enumerate_full(&p, &Budget::default()).unwrap() {
            let t: usize = prog.diff().iter().map(|&d| d as usize).sum();
            let s0: usize = prog.element(0).iter().sum();
            for j in 0..5 {
                let sj: usize = prog.element(j).iter().sum();
                assert_eq!(sj % 5, (s0 + j * t) % 5);
            }
        }
    }
}
