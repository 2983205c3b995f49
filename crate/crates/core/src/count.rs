//! Exact progression counts per weight arrangement, via pattern counts.
//!
//! A progression is summarized coordinatewise by its pattern histogram. For
//! restricted progressions the `2q` patterns are `same(a) = (a, a, ..., a)` and
//! `cycle(a) = (a, a+1, ..., a+q-1)`; for full progressions over `F_p` they are
//! the `p^2` pairs `(a, d)`. Each pattern histogram `m` is realized by exactly
//! `multinomial(n; m)` progressions, so the number of progressions with a
//! given weight arrangement is the multinomial sum over the histograms mapping
//! to it. All counts here are unshifted.

use num_bigint::BigUint;
use num_traits::Zero;

use crate::budget::Budget;
use crate::combinatorics::{composition_count, Multinomials};
use crate::error::{input, Result};
use crate::feasible::complete_arrangement;
use crate::modp::{for_each_box_point, pattern_index, patterns, LinearStructure};
use crate::oracle::{shared_params, ProgressionKind};
use crate::weights::{SpaceParams, SymmetricSet, WeightArrangement, WeightTuple};

/// Histogram of restricted coordinate patterns.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RestrictedPatternCounts {
    same: Vec<usize>,
    cycle: Vec<usize>,
}

impl RestrictedPatternCounts {
    pub fn new(same: Vec<usize>, cycle: Vec<usize>, params: &SpaceParams) -> Result<Self> {
        if same.len() != params.q() || cycle.len() != params.q() {
            return input(format!("pattern counts need {} entries each", params.q()));
        }
        let total: usize = same.iter().chain(&cycle).sum();
        if total != params.n() {
            return input(format!("pattern counts sum to {total}, expected n={}", params.n()));
        }
        Ok(RestrictedPatternCounts { same, cycle })
    }

    pub fn same(&self) -> &[usize] {
        &self.same
    }

    pub fn cycle(&self) -> &[usize] {
        &self.cycle
    }

    /// Element `j` has `w_b = same[b] + cycle[b - j]`.
    pub fn to_arrangement(&self) -> WeightArrangement {
        let q = self.same.len();
        let n = self.same.iter().chain(&self.cycle).sum();
        let params = SpaceParams::new(q, n).expect("validated on construction");
        let tuples = restricted_rows(&self.same.iter().map(|&v| v as i64).collect::<Vec<_>>(), &self.cycle.iter().map(|&v| v as i64).collect::<Vec<_>>())
            .into_iter()
            .map(|row| WeightTuple::from_signed(&row, &params).expect("nonnegative"))
            .collect();
        WeightArrangement::new(tuples, &params).expect("q tuples")
    }

    /// Number of progressions with this pattern histogram.
    pub fn multiplicity(&self) -> BigUint {
        crate::combinatorics::multinomial(&[self.same.as_slice(), self.cycle.as_slice()].concat())
    }
}

/// Weight rows of a restricted pattern histogram, in signed arithmetic.
fn restricted_rows(same: &[i64], cycle: &[i64]) -> Vec<Vec<i64>> {
    let q = same.len();
    (0..q)
        .map(|j| (0..q).map(|b| same[b] + cycle[(b + q - j) % q]).collect())
        .collect()
}

/// Histogram of full-progression coordinate patterns `(a, d)`, stored at `a*p + d`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FullPatternCounts {
    p: usize,
    m: Vec<usize>,
}

impl FullPatternCounts {
    pub fn new(p: usize, m: Vec<usize>, params: &SpaceParams) -> Result<Self> {
        if params.q() != p || m.len() != p * p {
            return input(format!("full pattern counts need p^2={} entries", p * p));
        }
        if m.iter().sum::<usize>() != params.n() {
            return input("full pattern counts must sum to n");
        }
        Ok(FullPatternCounts { p, m })
    }

    pub fn get(&self, a: usize, d: usize) -> usize {
        self.m[a * self.p + d]
    }

    pub fn counts(&self) -> &[usize] {
        &self.m
    }

    /// Element `j` has `w_b = sum over a + j*d = b of m[a][d]`.
    pub fn to_arrangement(&self) -> WeightArrangement {
        let p = self.p;
        let n = self.m.iter().sum();
        let params = SpaceParams::new(p, n).expect("validated on construction");
        let mut flat = vec![0usize; p * p];
        full_weights(p, &self.m, &mut flat);
        let tuples = flat.chunks(p).map(|r| WeightTuple::new(r.to_vec(), &params).expect("sums to n")).collect();
        WeightArrangement::new(tuples, &params).expect("p tuples")
    }
}

/// Fills `out[j*p + b]` with the weights of element `j`.
fn full_weights(p: usize, m: &[usize], out: &mut [usize]) {
    out.iter_mut().for_each(|v| *v = 0);
    for (idx, (a, d)) in patterns(p).enumerate() {
        let c = m[idx];
        if c == 0 {
            continue;
        }
        for j in 0..p {
            out[j * p + (a + j * d) % p] += c;
        }
    }
}

/// Affine family `base + sum_i v_i * directions[i]` over an integer parameter box;
/// only members with every entry in `[0, n]` are solutions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolutionFamily {
    pub base: Vec<i64>,
    pub directions: Vec<Vec<i64>>,
    /// Inclusive parameter ranges; empty family when any range is inverted.
    pub valid_range: Vec<(i64, i64)>,
    n: i64,
}

impl SolutionFamily {
    fn empty(len: usize, dims: usize, n: usize) -> Self {
        SolutionFamily { base: vec![0; len], directions: vec![vec![0; len]; dims], valid_range: vec![(1, 0); dims], n: n as i64 }
    }

    pub fn point(&self, params: &[i64]) -> Vec<i64> {
        let mut out = self.base.clone();
        for (dir, &v) in self.directions.iter().zip(params) {
            for (o, d) in out.iter_mut().zip(dir) {
                *o += v * d;
            }
        }
        out
    }

    /// Visits every member with all entries in `[0, n]`.
    pub fn for_each_solution(&self, mut f: impl FnMut(&[i64], &[usize])) {
        let n = self.n;
        let mut counts = vec![0usize; self.base.len()];
        for_each_box_point(&self.valid_range, |v| {
            let m = self.point(v);
            if m.iter().all(|&x| (0..=n).contains(&x)) {
                for (c, &x) in counts.iter_mut().zip(&m) {
                    *c = x as usize;
                }
                f(v, &counts);
            }
        });
    }

    pub fn solutions(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        self.for_each_solution(|_, m| out.push(m.to_vec()));
        out
    }

    pub fn is_empty(&self) -> bool {
        self.solutions().is_empty()
    }
}

/// Pattern histograms `(same, cycle)` realizing `arr`, parameterized by `k = cycle[0]`.
///
/// `cycle[0] = k`, then `same[a] = w_a^(2) - cycle[a-1]` and `cycle[a] = w_a^(1) - same[a]`
/// for `a = 1..q`, and `same[0]` closes the sum to `n`. The family is empty
/// when the remaining tuples disagree with this forced histogram.
pub fn solve_restricted_patterns(arr: &WeightArrangement) -> SolutionFamily {
    let q = arr.q();
    let n = arr.n();
    let w1: Vec<i64> = arr.tuples()[0].counts().iter().map(|&v| v as i64).collect();
    let w2: Vec<i64> = arr.tuples()[1].counts().iter().map(|&v| v as i64).collect();
    let solve = |k: i64| {
        let mut same = vec![0i64; q];
        let mut cycle = vec![0i64; q];
        cycle[0] = k;
        for a in 1..q {
            same[a] = w2[a] - cycle[a - 1];
            cycle[a] = w1[a] - same[a];
        }
        same[0] = n as i64 - same[1..].iter().sum::<i64>() - cycle.iter().sum::<i64>();
        (same, cycle)
    };
    let (same0, cycle0) = solve(0);
    let rows = restricted_rows(&same0, &cycle0);
    let consistent = rows
        .iter()
        .zip(arr.tuples())
        .all(|(row, t)| row.iter().zip(t.counts()).all(|(&a, &b)| a == b as i64));
    if !consistent {
        return SolutionFamily::empty(2 * q, 1, n);
    }
    let (same1, cycle1) = solve(1);
    let base: Vec<i64> = same0.iter().chain(&cycle0).copied().collect();
    let end: Vec<i64> = same1.iter().chain(&cycle1).copied().collect();
    let direction: Vec<i64> = end.iter().zip(&base).map(|(a, b)| a - b).collect();

    // Every entry is base + k*dir with dir in {-1, 0, 1}; intersect the [0, n] windows.
    let (mut lo, mut hi) = (i64::MIN, i64::MAX);
    for (&b, &d) in base.iter().zip(&direction) {
        match d.signum() {
            0 if !(0..=n as i64).contains(&b) => return SolutionFamily::empty(2 * q, 1, n),
            0 => {}
            _ => {
                let (a, c) = ((0 - b) / d, (n as i64 - b) / d);
                lo = lo.max(a.min(c));
                hi = hi.min(a.max(c));
            }
        }
    }
    SolutionFamily { base, directions: vec![direction], valid_range: vec![(lo, hi)], n: n as i64 }
}

/// Number of restricted progressions with weight arrangement `arr`.
pub fn count_arrangement_restricted(arr: &WeightArrangement) -> BigUint {
    let table = Multinomials::new(arr.n());
    count_restricted_with(&table, arr)
}

fn count_restricted_with(table: &Multinomials, arr: &WeightArrangement) -> BigUint {
    let mut total = BigUint::zero();
    solve_restricted_patterns(arr).for_each_solution(|_, m| total += table.count(m));
    total
}

/// Counts for full progressions over `F_p`, reusing the linear structure.
#[derive(Debug, Clone)]
pub struct FullCounter {
    structure: LinearStructure,
}

impl FullCounter {
    pub fn new(p: usize) -> Result<Self> {
        Ok(FullCounter { structure: LinearStructure::new(p)? })
    }

    pub fn structure(&self) -> &LinearStructure {
        &self.structure
    }

    /// Pattern histograms realizing `arr`, as `m = B w / p + K v` over all `p^2`
    /// patterns (the omitted `(p-1, 0)` entry closes the sum to `n`),
    /// parameterized by `v in [0, n]^{p-1}` since `m(0, d) = v_d`.
    pub fn solve_full_patterns(&self, arr: &WeightArrangement) -> Result<SolutionFamily> {
        let p = self.structure.p();
        if arr.q() != p {
            return input(format!("arrangement has {} tuples, expected p={p}", arr.q()));
        }
        let n = arr.n();
        let w: Vec<i64> = arr
            .tuples()
            .iter()
            .flat_map(|t| t.counts()[..p - 1].iter().map(|&v| v as i64))
            .collect();
        let Some(m0) = self.structure.particular_solution(&w)? else {
            return Ok(SolutionFamily::empty(p * p, p - 1, n));
        };
        let omitted = (p - 1) * p;
        let expand = |reduced: &[i64], closing: i64| {
            let mut full = vec![0i64; p * p];
            for (idx, (a, d)) in patterns(p).enumerate() {
                full[idx] = match pattern_index(p, a, d) {
                    Some(col) => reduced[col],
                    None => closing,
                };
            }
            full
        };
        let base = expand(&m0, n as i64 - m0.iter().sum::<i64>());
        let directions = (1..p)
            .map(|dk| {
                let mut unit = vec![0i64; p - 1];
                unit[dk - 1] = 1;
                let col = self.structure.lattice_point(&vec![0; p * p - 1], &unit);
                let shift: i64 = col.iter().sum();
                expand(&col, -shift)
            })
            .collect();
        debug_assert_eq!(base[omitted], n as i64 - m0.iter().sum::<i64>());
        Ok(SolutionFamily { base, directions, valid_range: vec![(0, n as i64); p - 1], n: n as i64 })
    }

    /// Number of full progressions with weight arrangement `arr`.
    pub fn count_arrangement(&self, arr: &WeightArrangement) -> Result<BigUint> {
        let table = Multinomials::new(arr.n());
        let family = self.solve_full_patterns(arr)?;
        let mut total = BigUint::zero();
        family.for_each_solution(|_, m| total += table.count(m));
        Ok(total)
    }
}

/// Number of full progressions over `F_p` with weight arrangement `arr`.
pub fn count_arrangement_full(arr: &WeightArrangement, p: usize) -> Result<BigUint> {
    FullCounter::new(p)?.count_arrangement(arr)
}

/// Number of progressions of `kind` with `x^(j) in S^(j)` for every `j`.
///
/// Restricted: ranges over `R^(1) x R^(2)`, completes each pair to its unique
/// feasible arrangement, and sums the per-arrangement counts. Full: ranges
/// over all pattern histograms (compositions of `n` into `p^2` parts), since
/// an arrangement does not determine its histogram.
pub fn count_product_hits(sets: &[SymmetricSet], kind: ProgressionKind, budget: &Budget) -> Result<BigUint> {
    let params = shared_params(sets)?;
    if sets.iter().any(SymmetricSet::is_empty) {
        return Ok(BigUint::zero());
    }
    match kind {
        ProgressionKind::Restricted => count_restricted_product(sets, &params, budget),
        ProgressionKind::Full => count_full_product(sets, &params, budget),
    }
}

fn count_restricted_product(sets: &[SymmetricSet], params: &SpaceParams, budget: &Budget) -> Result<BigUint> {
    budget.check_u128(sets[0].len() as u128 * sets[1].len() as u128)?;
    let table = Multinomials::new(params.n());
    let mut total = BigUint::zero();
    for w1 in sets[0].tuples() {
        for w2 in sets[1].tuples() {
            let Some(arr) = complete_arrangement(w1, w2)? else { continue };
            if arr.tuples().iter().zip(sets).skip(2).all(|(t, s)| s.contains(t.counts())) {
                total += count_restricted_with(&table, &arr);
            }
        }
    }
    Ok(total)
}

fn count_full_product(sets: &[SymmetricSet], params: &SpaceParams, budget: &Budget) -> Result<BigUint> {
    let p = params.q();
    if !crate::combinatorics::is_prime(p) {
        return input(format!("full progressions need prime q, got {p}"));
    }
    budget.check(&composition_count(params.n(), p * p))?;
    let table = Multinomials::new(params.n());
    let mut weights = vec![0usize; p * p];
    let mut small: u128 = 0;
    let mut total = BigUint::zero();
    crate::combinatorics::Compositions::new(params.n(), p * p).for_each_slice(|m| {
        full_weights(p, m, &mut weights);
        if (0..p).all(|j| sets[j].contains(&weights[j * p..(j + 1) * p])) {
            if table.fits_u128() {
                let term = table.count_small(m);
                match small.checked_add(term) {
                    Some(s) => small = s,
                    None => {
                        total += small;
                        small = term;
                    }
                }
            } else {
                total += table.count(m);
            }
        }
    });
    Ok(total + small)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::oracle_histogram;

    fn arr(q: usize, n: usize, rows: &[&[usize]]) -> WeightArrangement {
        WeightArrangement::from_rows(rows.iter().map(|r| r.to_vec()).collect(), &SpaceParams::new(q, n).unwrap()).unwrap()
    }

    #[test]
    fn restricted_pattern_examples() {
        let p = SpaceParams::new(3, 6).unwrap();
        let pc = RestrictedPatternCounts::new(vec![1, 1, 1], vec![1, 1, 1], &p).unwrap();
        assert_eq!(pc.to_arrangement(), arr(3, 6, &[&[2, 2, 2], &[2, 2, 2], &[2, 2, 2]]));
        let p = SpaceParams::new(3, 3).unwrap();
        let pc = RestrictedPatternCounts::new(vec![3, 0, 0], vec![0, 0, 0], &p).unwrap();
        assert_eq!(pc.to_arrangement(), arr(3, 3, &[&[3, 0, 0], &[3, 0, 0], &[3, 0, 0]]));
        assert!(RestrictedPatternCounts::new(vec![3, 0, 0], vec![0, 1, 0], &p).is_err());
    }

    #[test]
    fn full_pattern_example() {
        let p = SpaceParams::prime(3, 2).unwrap();
        let mut m = vec![0; 9];
        m[1] = 2; // (a, d) = (0, 1)
        let pc = FullPatternCounts::new(3, m, &p).unwrap();
        assert_eq!(pc.to_arrangement(), arr(3, 2, &[&[2, 0, 0], &[0, 2, 0], &[0, 0, 2]]));
    }

    #[test]
    fn solve_restricted_examples() {
        let a = arr(3, 6, &[&[2, 2, 2], &[2, 2, 2], &[2, 2, 2]]);
        let fam = solve_restricted_patterns(&a);
        assert_eq!(fam.valid_range, vec![(0, 2)]);
        let sols = fam.solutions();
        assert_eq!(sols, vec![vec![2, 2, 2, 0, 0, 0], vec![1, 1, 1, 1, 1, 1], vec![0, 0, 0, 2, 2, 2]]);
        assert_eq!(count_arrangement_restricted(&a), BigUint::from(900u32));

        let row: &[usize] = &[5, 0, 0, 0];
        let constant = arr(4, 5, &[row; 4]);
        assert_eq!(solve_restricted_patterns(&constant).solutions(), vec![vec![5, 0, 0, 0, 0, 0, 0, 0]]);

        let bad = arr(3, 6, &[&[2, 2, 2], &[2, 2, 2], &[1, 3, 2]]);
        assert!(solve_restricted_patterns(&bad).is_empty());
        assert_eq!(count_arrangement_restricted(&bad), BigUint::zero());
    }

    #[test]
    fn solutions_map_back_to_arrangement() {
        let params = SpaceParams::new(4, 5).unwrap();
        let hist = oracle_histogram(&params, ProgressionKind::Restricted, &Budget::default()).unwrap();
        for a in hist.histogram.keys() {
            for m in solve_restricted_patterns(a).solutions() {
                let pc = RestrictedPatternCounts::new(m[..4].to_vec(), m[4..].to_vec(), &params).unwrap();
                assert_eq!(&pc.to_arrangement(), a);
            }
        }
    }

    #[test]
    fn full_count_examples() {
        let counter = FullCounter::new(3).unwrap();
        let a = arr(3, 2, &[&[2, 0, 0], &[0, 2, 0], &[0, 0, 2]]);
        assert_eq!(counter.count_arrangement(&a).unwrap(), BigUint::from(1u32));
        let a = arr(3, 2, &[&[1, 1, 0], &[1, 1, 0], &[1, 1, 0]]);
        assert_eq!(counter.count_arrangement(&a).unwrap(), BigUint::from(2u32));
        assert!(counter.count_arrangement(&arr(4, 2, &[&[2usize, 0, 0, 0] as &[usize]; 4])).is_err());
    }

    #[test]
    fn full_arrangement_counts_sum_to_total() {
        let counter = FullCounter::new(3).unwrap();
        for n in 1..=4 {
            let params = SpaceParams::new(3, n).unwrap();
            let tuples: Vec<_> = params.all_tuples().collect();
            let mut total = BigUint::zero();
            for a in &tuples {
                for b in &tuples {
                    for c in &tuples {
                        let arr = WeightArrangement::new(vec![a.clone(), b.clone(), c.clone()], &params).unwrap();
                        total += counter.count_arrangement(&arr).unwrap();
                    }
                }
            }
            assert_eq!(total, BigUint::from(9u32).pow(n as u32));
        }
    }

    #[test]
    fn product_examples() {
        let b = Budget::default();
        let p = SpaceParams::new(3, 6).unwrap();
        let single = SymmetricSet::new(p, [WeightTuple::new(vec![2, 2, 2], &p).unwrap()]).unwrap();
        let sets = vec![single.clone(); 3];
        assert_eq!(count_product_hits(&sets, ProgressionKind::Restricted, &b).unwrap(), BigUint::from(900u32));
        let with_empty = vec![single.clone(), SymmetricSet::empty(p), single];
        assert_eq!(count_product_hits(&with_empty, ProgressionKind::Restricted, &b).unwrap(), BigUint::zero());
        let p4 = SpaceParams::new(3, 4).unwrap();
        let full = vec![SymmetricSet::full(p4); 3];
        assert_eq!(count_product_hits(&full, ProgressionKind::Restricted, &b).unwrap(), BigUint::from(1296u32));
        assert_eq!(count_product_hits(&full, ProgressionKind::Full, &b).unwrap(), BigUint::from(6561u32));
    }

    #[test]
    fn full_product_budget_refusal() {
        let p = SpaceParams::prime(3, 20).unwrap();
        let sets = vec![SymmetricSet::full(p); 3];
        let err = count_product_hits(&sets, ProgressionKind::Full, &Budget::new(1000).unwrap());
        assert!(matches!(err, Err(crate::error::Error::Budget { .. })));
    }

    #[test]
    fn full_composition_total_is_power() {
        // p = 3, n = 20 stays on the u128 path and totals 9^20
        let p = SpaceParams::prime(3, 20).unwrap();
        let sets = vec![SymmetricSet::full(p); 3];
        let total = count_product_hits(&sets, ProgressionKind::Full, &Budget::default()).unwrap();
        assert_eq!(total, BigUint::from(9u32).pow(20));
    }
}
