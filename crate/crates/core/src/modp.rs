//! The linear system `W = A M` relating pattern counts of full progressions
//! over `F_p` to the weight arrangement of their elements, its integer
//! solvability, and the mod-p constructions built on it.
//!
//! Index flattening (also used by the JSON emitted from the CLI):
//! * patterns `(a, d)` in lexicographic order with `(p-1, 0)` omitted,
//!   giving `p^2 - 1` columns of `A`;
//! * weights `(j, b)` with `j = 0..p` the element index and `b = 0..p-1`,
//!   giving `p(p-1)` rows of `A`. Row `(j, b)` sits at `j*(p-1) + b`.
//!
//! Element `j` (0-based) of a progression with coordinate pattern `(a, d)`
//! holds the symbol `a + j*d`.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::combinatorics::{is_prime, Multinomials};
use crate::error::{input, Error, Result};
use crate::matrix::ExactMatrix;
use crate::weights::{ShiftConvention, SymmetricSet, WeightTuple};

fn check_prime(p: usize) -> Result<()> {
    if p < 3 || !is_prime(p) {
        return input(format!("p={p} must be a prime >= 3"));
    }
    Ok(())
}

/// Column of pattern `(a, d)`; `None` for the omitted `(p-1, 0)`.
pub fn pattern_index(p: usize, a: usize, d: usize) -> Option<usize> {
    match (a, d) {
        (a, 0) if a == p - 1 => None,
        (a, d) if a < p - 1 => Some(a * p + d),
        (_, d) => Some((p - 1) * p + d - 1),
    }
}

/// Row of weight `(j, b)`; `None` for the omitted symbol `b = p-1`.
pub fn weight_index(p: usize, j: usize, b: usize) -> Option<usize> {
    (b < p - 1).then(|| j * (p - 1) + b)
}

/// All `p^2` patterns in lexicographic order.
pub fn patterns(p: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..p).flat_map(move |a| (0..p).map(move |d| (a, d)))
}

/// The 0/1 matrix `A` of size `p(p-1) x (p^2-1)`.
pub fn build_a(p: usize) -> Result<ExactMatrix> {
    check_prime(p)?;
    let mut a = ExactMatrix::zeros(p * (p - 1), p * p - 1);
    for j in 0..p {
        for (s, d) in patterns(p) {
            let b = (s + j * d) % p;
            if let (Some(row), Some(col)) = (weight_index(p, j, b), pattern_index(p, s, d)) {
                a.set(row, col, BigRational::one());
            }
        }
    }
    Ok(a)
}

/// Kernel basis `K` of size `(p^2-1) x (p-1)`: column `d'-1` is `-1` on every
/// `(b, 0)` and `+1` on every `(b, d')`.
pub fn build_k(p: usize) -> Result<ExactMatrix> {
    check_prime(p)?;
    let mut k = ExactMatrix::zeros(p * p - 1, p - 1);
    for dk in 1..p {
        for b in 0..p {
            if let Some(row) = pattern_index(p, b, 0) {
                k.set(row, dk - 1, -BigRational::one());
            }
            k.set(pattern_index(p, b, dk).expect("d != 0"), dk - 1, BigRational::one());
        }
    }
    Ok(k)
}

/// `p` times the explicit right inverse column for weight `(j, a)`, evaluated at pattern `(b, d)`.
fn scaled_inverse_entry(p: usize, j: usize, a: usize, b: usize, d: usize) -> i64 {
    let p = p as i64;
    if d == 0 {
        return if b == a { -(p - 2) } else { -(p - 1) };
    }
    let hit = (b + j * d) % p as usize;
    if hit == a {
        2
    } else if hit == p as usize - 1 {
        0
    } else {
        1
    }
}

/// `(B', B)`, both integer `(p^2-1) x p(p-1)` with `A B' = A B = p I`.
///
/// `B'` is the direct explicit right inverse scaled by `p`. `B` is obtained
/// from it by subtracting `K alpha` from each column so that rows `(0, d)`,
/// `d != 0`, vanish.
pub fn build_b(p: usize) -> Result<(ExactMatrix, ExactMatrix)> {
    check_prime(p)?;
    let rows = p * p - 1;
    let cols = p * (p - 1);
    let mut b_prime = vec![0i64; rows * cols];
    for j in 0..p {
        for a in 0..p - 1 {
            let col = weight_index(p, j, a).expect("a < p-1");
            for (b, d) in patterns(p) {
                if let Some(row) = pattern_index(p, b, d) {
                    b_prime[row * cols + col] = scaled_inverse_entry(p, j, a, b, d);
                }
            }
        }
    }
    let k = build_k(p)?.to_i64_rows().expect("integer kernel");
    let mut b = b_prime.clone();
    for col in 0..cols {
        for dk in 1..p {
            let alpha = b_prime[pattern_index(p, 0, dk).expect("d != 0") * cols + col];
            for row in 0..rows {
                b[row * cols + col] -= k[row][dk - 1] * alpha;
            }
        }
    }
    Ok((ExactMatrix::from_integers(rows, cols, &b_prime)?, ExactMatrix::from_integers(rows, cols, &b)?))
}

/// The matrices of the system together with integer copies for fast evaluation.
#[derive(Debug, Clone)]
pub struct LinearStructure {
    p: usize,
    a: ExactMatrix,
    k: ExactMatrix,
    b_prime: ExactMatrix,
    b: ExactMatrix,
    a_int: Vec<Vec<i64>>,
    b_int: Vec<Vec<i64>>,
    b_prime_int: Vec<Vec<i64>>,
    k_int: Vec<Vec<i64>>,
}

impl LinearStructure {
    pub fn new(p: usize) -> Result<Self> {
        let a = build_a(p)?;
        let k = build_k(p)?;
        let (b_prime, b) = build_b(p)?;
        let ints = |m: &ExactMatrix| m.to_i64_rows().expect("integer matrix");
        Ok(LinearStructure {
            p,
            a_int: ints(&a),
            b_int: ints(&b),
            b_prime_int: ints(&b_prime),
            k_int: ints(&k),
            a,
            k,
            b_prime,
            b,
        })
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn a(&self) -> &ExactMatrix {
        &self.a
    }

    pub fn k(&self) -> &ExactMatrix {
        &self.k
    }

    pub fn b_prime(&self) -> &ExactMatrix {
        &self.b_prime
    }

    pub fn b(&self) -> &ExactMatrix {
        &self.b
    }

    pub fn weight_len(&self) -> usize {
        self.p * (self.p - 1)
    }

    pub fn pattern_len(&self) -> usize {
        self.p * self.p - 1
    }

    fn check_weight_len(&self, w: &[i64]) -> Result<()> {
        if w.len() != self.weight_len() {
            return input(format!("weight vector has length {}, expected p(p-1)={}", w.len(), self.weight_len()));
        }
        Ok(())
    }

    /// `A m` in integers.
    pub fn apply_a(&self, m: &[i64]) -> Vec<i64> {
        mat_vec(&self.a_int, m)
    }

    /// `B w`, exact integers.
    pub fn apply_b(&self, w: &[i64]) -> Vec<i64> {
        mat_vec(&self.b_int, w)
    }

    /// Whether `A m = w` has an integer solution: every entry of `B w` divisible by `p`.
    pub fn has_integer_solution(&self, w: &[i64]) -> Result<bool> {
        self.check_weight_len(w)?;
        let p = self.p as i64;
        Ok(self.apply_b(w).iter().all(|v| v.rem_euclid(p) == 0))
    }

    /// `B w / p` when integral; its `(0, d)` coordinates are zero.
    pub fn particular_solution(&self, w: &[i64]) -> Result<Option<Vec<i64>>> {
        self.check_weight_len(w)?;
        let p = self.p as i64;
        let bw = self.apply_b(w);
        if bw.iter().any(|v| v.rem_euclid(p) != 0) {
            return Ok(None);
        }
        Ok(Some(bw.into_iter().map(|v| v / p).collect()))
    }

    /// `m0 + K v`.
    pub fn lattice_point(&self, m0: &[i64], v: &[i64]) -> Vec<i64> {
        let kv = mat_vec(&self.k_int, v);
        m0.iter().zip(kv).map(|(a, b)| a + b).collect()
    }

    /// Every integer solution `m = B w / p + K v` with `max |m_i| <= bound`.
    pub fn solve_lattice(&self, w: &[i64], bound: i64) -> Result<Vec<Vec<i64>>> {
        let Some(m0) = self.particular_solution(w)? else {
            return Err(Error::Contract(format!("A m = {w:?} has no integer solution")));
        };
        // m(0, d) = v_d, so |v_d| <= bound covers every candidate.
        let mut out = Vec::new();
        for_each_box_point(&vec![(-bound, bound); self.p - 1], |v| {
            let m = self.lattice_point(&m0, v);
            if m.iter().all(|x| x.abs() <= bound) {
                out.push(m);
            }
        });
        Ok(out)
    }

    /// Brute-force solvability check that bypasses `B`: scans the real
    /// solution family `B' w / p + K v` over `v in (1/p) Z^{p-1}`,
    /// `|v_d| <= radius`, for an integer point, and verifies `A m = w` on it.
    pub fn search_integer_solution(&self, w: &[i64], radius: i64) -> Result<Option<Vec<i64>>> {
        self.check_weight_len(w)?;
        let p = self.p as i64;
        let scaled = mat_vec(&self.b_prime_int, w);
        let mut found = None;
        // u = p v ranges over integers.
        for_each_box_point(&vec![(-p * radius, p * radius); self.p - 1], |u| {
            if found.is_some() {
                return;
            }
            let pm: Vec<i64> = scaled.iter().zip(mat_vec(&self.k_int, u)).map(|(a, b)| a + b).collect();
            if pm.iter().all(|v| v.rem_euclid(p) == 0) {
                let m: Vec<i64> = pm.iter().map(|v| v / p).collect();
                if self.apply_a(&m) == w {
                    found = Some(m);
                }
            }
        });
        Ok(found)
    }
}

pub(crate) fn mat_vec(m: &[Vec<i64>], v: &[i64]) -> Vec<i64> {
    m.iter().map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
}

/// Visits every integer point of a box given by inclusive per-axis ranges.
pub(crate) fn for_each_box_point(ranges: &[(i64, i64)], mut f: impl FnMut(&[i64])) {
    if ranges.iter().any(|(lo, hi)| lo > hi) {
        return;
    }
    let mut point: Vec<i64> = ranges.iter().map(|r| r.0).collect();
    loop {
        f(&point);
        let mut axis = ranges.len();
        loop {
            if axis == 0 {
                return;
            }
            axis -= 1;
            if point[axis] < ranges[axis].1 {
                point[axis] += 1;
                break;
            }
            point[axis] = ranges[axis].0;
        }
    }
}

/// Residues mod `p` of a shifted weight tuple.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CongruenceClass(Vec<u64>);

impl CongruenceClass {
    pub fn new(residues: Vec<u64>, p: usize) -> Result<Self> {
        if residues.len() + 1 != p || residues.iter().any(|&r| r >= p as u64) {
            return input(format!("congruence class {residues:?} is not in F_{p}^{}", p - 1));
        }
        Ok(CongruenceClass(residues))
    }

    pub fn residues(&self) -> &[u64] {
        &self.0
    }
}

/// Class of `w`: `(w_a - p*floor(n/p^2)) mod p` for `a = 0..p-2`.
pub fn congruence_class(w: &WeightTuple, p: usize) -> Result<CongruenceClass> {
    check_prime(p)?;
    if w.q() != p {
        return input(format!("tuple has {} symbols, expected p={p}", w.q()));
    }
    let shifted = w.shift(&ShiftConvention::full(p, w.n()));
    Ok(CongruenceClass(shifted.values().iter().map(|v| v.rem_euclid(p as i64) as u64).collect()))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RemovedClass {
    pub class: CongruenceClass,
    /// `|S_v| / p^n`, exact.
    #[serde(serialize_with = "crate::json::ser_rational")]
    pub density: BigRational,
}

#[derive(Debug, Clone)]
pub struct RemovalReport {
    /// Density threshold `mu / (2 p^{p-1})`.
    pub threshold: BigRational,
    pub pruned: Vec<SymmetricSet>,
    pub removed: Vec<Vec<RemovedClass>>,
    /// Total removed density per set.
    pub removed_density: Vec<BigRational>,
}

/// Drops every congruence class of every set whose point density is at most `mu / (2 p^{p-1})`.
pub fn removal_procedure(sets: &[SymmetricSet], mu: &BigRational) -> Result<RemovalReport> {
    let params = crate::oracle::shared_params(sets)?;
    let p = params.q();
    check_prime(p)?;
    if *mu <= BigRational::zero() || *mu > BigRational::one() {
        return input(format!("mu={mu} must lie in (0, 1]"));
    }
    let space = BigInt::from(params.space_size());
    let classes_total = BigInt::from(p).pow(p as u32 - 1);
    let threshold = mu / BigRational::from_integer(BigInt::from(2) * &classes_total);
    let table = Multinomials::new(params.n());

    let mut report = RemovalReport { threshold: threshold.clone(), pruned: Vec::new(), removed: Vec::new(), removed_density: Vec::new() };
    for set in sets {
        let mut sizes: BTreeMap<CongruenceClass, BigUint> = BTreeMap::new();
        for t in set.tuples() {
            *sizes.entry(congruence_class(t, p)?).or_default() += table.count(t.counts());
        }
        let mut removed = Vec::new();
        let mut total = BigRational::zero();
        for (class, size) in sizes {
            let density = BigRational::new(BigInt::from(size), space.clone());
            if density <= threshold {
                total += &density;
                removed.push(RemovedClass { class, density });
            }
        }
        let gone: Vec<&CongruenceClass> = removed.iter().map(|r| &r.class).collect();
        report.pruned.push(set.filter(|t| !gone.contains(&&congruence_class(t, p).expect("checked above"))));
        report.removed.push(removed);
        report.removed_density.push(total);
    }
    Ok(report)
}

/// Keeps points with coordinate sum `0 (mod p)` in the first `p-1` sets and `1 (mod p)` in the last.
/// The sum is `sum_a a * w_a`, so the filter is symmetric.
pub fn trivial_split(sets: &[SymmetricSet]) -> Result<Vec<SymmetricSet>> {
    let params = crate::oracle::shared_params(sets)?;
    let p = params.q();
    check_prime(p)?;
    let coordinate_sum = |t: &WeightTuple| t.counts().iter().enumerate().map(|(a, &w)| a * w).sum::<usize>() % p;
    Ok(sets
        .iter()
        .enumerate()
        .map(|(j, s)| {
            let target = usize::from(j == p - 1);
            s.filter(|t| coordinate_sum(t) == target)
        })
        .collect())
}
