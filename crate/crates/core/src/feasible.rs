//! Feasible weight arrangements: the linear conditions every restricted
//! progression's arrangement satisfies.
//!
//! Arrangements are handled in the restricted shifted convention: tuple `j`
//! is `(w_1^(j), ..., w_{q-1}^(j))`, stored with `w_a` at index `a - 1`.
//! Tuples 3..q of a feasible arrangement are determined by the first two:
//!
//! ```text
//! w_1^(j) = sum_{a>=1} w_a^(j-2) - sum_{a>=2} w_a^(j-1)
//! w_a^(j) = -w_{a-1}^(j-2) + w_{a-1}^(j-1) + w_a^(j-1)      (a >= 2)
//! ```

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::budget::Budget;
use crate::error::{input, Result};
use crate::weights::{ShiftConvention, ShiftedWeightTuple, SpaceParams, WeightArrangement, WeightTuple};

/// Next tuple of a feasible arrangement from the two before it.
fn next_tuple(before: &[i64], last: &[i64]) -> Vec<i64> {
    let len = last.len();
    let mut out = Vec::with_capacity(len);
    out.push(before.iter().sum::<i64>() - last[1..].iter().sum::<i64>());
    for a in 1..len {
        out.push(-before[a - 1] + last[a - 1] + last[a]);
    }
    out
}

/// Completes `(w^(1), w^(2))` to the unique feasible arrangement over the integers.
pub fn derive_tail_shifted(w1: &[i64], w2: &[i64]) -> Result<Vec<Vec<i64>>> {
    if w1.len() != w2.len() || w1.len() < 2 {
        return input("tuples must share length q-1 >= 2");
    }
    let q = w1.len() + 1;
    let mut rows = vec![w1.to_vec(), w2.to_vec()];
    for j in 2..q {
        let next = next_tuple(&rows[j - 2], &rows[j - 1]);
        rows.push(next);
    }
    Ok(rows)
}

/// Feasibility of shifted rows (any common shift; the conditions are shift-invariant).
pub fn is_feasible_rows(rows: &[Vec<i64>]) -> bool {
    let q = rows.len();
    if q < 3 || rows.iter().any(|r| r.len() + 1 != q) {
        return false;
    }
    (2..q).all(|j| next_tuple(&rows[j - 2], &rows[j - 1]) == rows[j])
}

/// Feasibility of an arrangement of unshifted tuples, checked in the restricted shifted convention.
pub fn is_feasible(arr: &WeightArrangement) -> bool {
    let convention = ShiftConvention::restricted(arr.q(), arr.n());
    let rows: Vec<Vec<i64>> = arr.shift(&convention).iter().map(|t| t.values().to_vec()).collect();
    is_feasible_rows(&rows)
}

/// Feasibility of shifted tuples; they must share one convention.
pub fn is_feasible_shifted(tuples: &[ShiftedWeightTuple]) -> Result<bool> {
    let Some(first) = tuples.first() else {
        return input("empty arrangement");
    };
    if tuples.iter().any(|t| t.convention() != first.convention()) {
        return input("tuples use different shift conventions");
    }
    if first.convention().kept_indices().iter().copied().eq(1..tuples.len()) {
        let rows: Vec<Vec<i64>> = tuples.iter().map(|t| t.values().to_vec()).collect();
        return Ok(is_feasible_rows(&rows));
    }
    // Other conventions go through the full tuples.
    let full = tuples.iter().map(ShiftedWeightTuple::unshift).collect::<Result<Vec<_>>>()?;
    let params = SpaceParams::new(tuples.len(), full[0].n())?;
    Ok(is_feasible(&WeightArrangement::new(full, &params)?))
}

/// Completes two unshifted tuples to a feasible arrangement; `None` if a
/// derived tuple has a negative count.
pub fn complete_arrangement(w1: &WeightTuple, w2: &WeightTuple) -> Result<Option<WeightArrangement>> {
    let params = SpaceParams::new(w1.q(), w1.n())?;
    if w2.q() != params.q() || w2.n() != params.n() {
        return input("tuples do not share (q, n)");
    }
    let convention = ShiftConvention::restricted(params.q(), params.n());
    let s1 = w1.shift(&convention);
    let s2 = w2.shift(&convention);
    let rows = derive_tail_shifted(s1.values(), s2.values())?;
    let mut tuples = Vec::with_capacity(params.q());
    for row in rows {
        match ShiftedWeightTuple::new(row, convention.clone(), &params)?.unshift() {
            Ok(t) => tuples.push(t),
            Err(_) => return Ok(None),
        }
    }
    Ok(Some(WeightArrangement::new(tuples, &params)?))
}

/// `(q=3)` identity `(z0, z1) = (x0 + x1 - y1, y0 + y1 - x0)` on tuples shifted by `n/3`.
pub fn feasible_q3_check(x0: i64, x1: i64, y0: i64, y1: i64, z0: i64, z1: i64) -> bool {
    z0 == x0 + x1 - y1 && z1 == y0 + y1 - x0
}

/// Weight arrangement over `Z_N`, values canonical in `[0, N)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ModArrangement {
    q: usize,
    modulus: u64,
    values: Vec<u64>,
}

impl ModArrangement {
    pub fn new(q: usize, modulus: u64, values: Vec<u64>) -> Result<Self> {
        if q < 3 || modulus == 0 {
            return input(format!("need q >= 3 and N >= 1 (q={q}, N={modulus})"));
        }
        if values.len() != q * (q - 1) {
            return input(format!("mod arrangement needs q(q-1)={} values, got {}", q * (q - 1), values.len()));
        }
        if values.iter().any(|&v| v >= modulus) {
            return input(format!("residues must lie in [0, {modulus})"));
        }
        Ok(ModArrangement { q, modulus, values })
    }

    /// Reduces arbitrary integer rows modulo `N`.
    pub fn from_rows(rows: &[Vec<i64>], modulus: u64) -> Result<Self> {
        let q = rows.len();
        let values = rows.iter().flatten().map(|&v| v.rem_euclid(modulus as i64) as u64).collect();
        ModArrangement::new(q, modulus, values)
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    /// Tuple `j` (0-based), as residues.
    pub fn tuple(&self, j: usize) -> &[u64] {
        &self.values[j * (self.q - 1)..(j + 1) * (self.q - 1)]
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        self.values.chunks(self.q - 1).map(|c| c.iter().map(|&v| v as i64).collect()).collect()
    }

    pub fn is_feasible(&self) -> bool {
        let rows = self.rows();
        let derived = derive_tail_shifted(&rows[0], &rows[1]).expect("q >= 3");
        ModArrangement::from_rows(&derived, self.modulus).expect("same shape") == *self
    }

    /// Componentwise sum modulo `N`.
    pub fn add(&self, other: &ModArrangement) -> Result<ModArrangement> {
        if self.q != other.q || self.modulus != other.modulus {
            return input("arrangements have different shape or modulus");
        }
        let values = self.values.iter().zip(&other.values).map(|(a, b)| (a + b) % self.modulus).collect();
        ModArrangement::new(self.q, self.modulus, values)
    }
}

/// Completes two residue tuples to the unique feasible arrangement over `Z_N`.
pub fn derive_tail_mod(w1: &[u64], w2: &[u64], modulus: u64) -> Result<ModArrangement> {
    let r1: Vec<i64> = w1.iter().map(|&v| v as i64).collect();
    let r2: Vec<i64> = w2.iter().map(|&v| v as i64).collect();
    ModArrangement::from_rows(&derive_tail_shifted(&r1, &r2)?, modulus)
}

/// Stream over the feasible arrangements of `Z_N^{q(q-1)}`, one per choice of the first two tuples.
#[derive(Debug, Clone)]
pub struct FeasibleArrangements {
    q: usize,
    modulus: u64,
    head: Vec<u64>,
    done: bool,
}

impl Iterator for FeasibleArrangements {
    type Item = ModArrangement;

    fn next(&mut self) -> Option<ModArrangement> {
        if self.done {
            return None;
        }
        let k = self.q - 1;
        let out = derive_tail_mod(&self.head[..k], &self.head[k..], self.modulus).expect("valid shape");
        self.done = !bump(&mut self.head, self.modulus);
        Some(out)
    }
}

fn bump(digits: &mut [u64], radix: u64) -> bool {
    for d in digits.iter_mut().rev() {
        if *d + 1 < radix {
            *d += 1;
            return true;
        }
        *d = 0;
    }
    false
}

/// Number of feasible arrangements over `Z_N`: `N^{2(q-1)}`.
pub fn feasible_count(q: usize, modulus: u64) -> BigUint {
    BigUint::from(modulus).pow(2 * (q as u32 - 1))
}

pub fn enumerate_feasible(q: usize, modulus: u64, budget: &Budget) -> Result<FeasibleArrangements> {
    if q < 3 || modulus == 0 {
        return input(format!("need q >= 3 and N >= 1 (q={q}, N={modulus})"));
    }
    budget.check(&feasible_count(q, modulus))?;
    Ok(FeasibleArrangements { q, modulus, head: vec![0; 2 * (q - 1)], done: false })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use proptest::prelude::*;
    use std::collections::BTreeSet;

    fn arr(q: usize, n: usize, rows: &[&[usize]]) -> WeightArrangement {
        let p = SpaceParams::new(q, n).unwrap();
        WeightArrangement::from_rows(rows.iter().map(|r| r.to_vec()).collect(), &p).unwrap()
    }

    #[test]
    fn derive_tail_examples() {
        assert_eq!(derive_tail_shifted(&[1, 0], &[0, 1]).unwrap()[2], vec![0, 0]);
        assert_eq!(derive_tail_shifted(&[0, 0], &[0, 0]).unwrap()[2], vec![0, 0]);
        let rows = derive_tail_shifted(&[0, 0, 0], &[0, 0, 0]).unwrap();
        assert_eq!(rows[2], vec![0, 0, 0]);
        assert_eq!(rows[3], vec![0, 0, 0]);
        assert!(derive_tail_shifted(&[0], &[0, 1]).is_err());
    }

    #[test]
    fn is_feasible_examples() {
        assert!(is_feasible(&arr(3, 6, &[&[2, 2, 2], &[2, 2, 2], &[2, 2, 2]])));
        assert!(!is_feasible(&arr(3, 6, &[&[2, 2, 2], &[2, 2, 2], &[1, 3, 2]])));
        for q in 3..7 {
            assert!(is_feasible_rows(&vec![vec![0; q - 1]; q]));
        }
    }

    #[test]
    fn mixed_conventions_rejected() {
        let p = SpaceParams::new(3, 6).unwrap();
        let a = ShiftedWeightTuple::new(vec![0, 0], ShiftConvention::restricted(3, 6), &p).unwrap();
        let b = ShiftedWeightTuple::new(vec![0, 0], ShiftConvention::triangle(6), &p).unwrap();
        assert!(matches!(is_feasible_shifted(&[a.clone(), b, a.clone()]), Err(Error::Input(_))));
        assert!(is_feasible_shifted(&[a.clone(), a.clone(), a]).unwrap());
        // triangle convention goes through unshifting
        let t = |v: Vec<i64>| ShiftedWeightTuple::new(v, ShiftConvention::triangle(6), &p).unwrap();
        assert!(is_feasible_shifted(&[t(vec![0, 0]), t(vec![0, 0]), t(vec![0, 0])]).unwrap());
        assert!(!is_feasible_shifted(&[t(vec![0, 0]), t(vec![0, 0]), t(vec![-1, 1])]).unwrap());
    }

    #[test]
    fn q3_check_examples() {
        assert!(feasible_q3_check(0, 0, 0, 0, 0, 0));
        assert!(!feasible_q3_check(1, 2, 0, 1, 2, -1));
        assert!(feasible_q3_check(1, 0, 0, 1, 0, 0));
    }

    #[test]
    fn enumerate_counts() {
        let b = Budget::default();
        assert_eq!(enumerate_feasible(3, 5, &b).unwrap().count(), 625);
        assert_eq!(enumerate_feasible(4, 2, &b).unwrap().count(), 64);
        assert_eq!(enumerate_feasible(3, 1, &b).unwrap().count(), 1);
        assert!(matches!(enumerate_feasible(4, 10, &Budget::new(1000).unwrap()), Err(Error::Budget { .. })));
    }

    #[test]
    fn enumerated_are_distinct_and_feasible() {
        let all: Vec<_> = enumerate_feasible(3, 3, &Budget::default()).unwrap().collect();
        assert!(all.iter().all(ModArrangement::is_feasible));
        let distinct: BTreeSet<_> = all.iter().cloned().collect();
        assert_eq!(distinct.len(), 81);
        // brute force over all of Z_3^6: exactly these are feasible
        let mut brute = 0;
        let mut digits = vec![0u64; 6];
        loop {
            if ModArrangement::new(3, 3, digits.clone()).unwrap().is_feasible() {
                brute += 1;
            }
            if !bump(&mut digits, 3) {
                break;
            }
        }
        assert_eq!(brute, 81);
    }

    #[test]
    fn complete_arrangement_range() {
        let p = SpaceParams::new(3, 6).unwrap();
        let t = |v: Vec<usize>| WeightTuple::new(v, &p).unwrap();
        let a = complete_arrangement(&t(vec![2, 2, 2]), &t(vec![2, 2, 2])).unwrap().unwrap();
        assert_eq!(a.tuples()[2], t(vec![2, 2, 2]));
        // x0 + x1 - y1 with x = (0,0,6), y = (0,6,0) is negative
        assert!(complete_arrangement(&t(vec![0, 0, 6]), &t(vec![0, 6, 0])).unwrap().is_none());
    }

    proptest! {
        #[test]
        fn feasible_set_closed_under_addition(q in 3usize..6, modulus in 1u64..7,
                                              heads in proptest::collection::vec(0u64..1000, 16)) {
            let pick = |h: &[u64]| {
                let k = q - 1;
                let h: Vec<u64> = h.iter().map(|v| v % modulus).collect();
                derive_tail_mod(&h[..k], &h[k..2 * k], modulus).unwrap()
            };
            let (a, b) = (pick(&heads[..2 * (q - 1)]), pick(&heads[2 * (q - 1)..4 * (q - 1)]));
            prop_assert!(a.is_feasible() && b.is_feasible());
            prop_assert!(a.add(&b).unwrap().is_feasible());
        }

        #[test]
        fn feasible_is_its_own_completion(q in 3usize..6, rows in proptest::collection::vec(-20i64..20, 10)) {
            let w1 = rows[..q - 1].to_vec();
            let w2 = rows[5..5 + q - 1].to_vec();
            let full = derive_tail_shifted(&w1, &w2).unwrap();
            prop_assert!(is_feasible_rows(&full));
            // perturbing any tail entry breaks feasibility
            let mut broken = full.clone();
            broken[q - 1][0] += 1;
            prop_assert!(!is_feasible_rows(&broken));
        }

        #[test]
        fn q3_check_agrees_with_general_check(k in 1usize..4, seed in any::<[u64; 3]>()) {
            let n = 6 * k;
            let p = SpaceParams::new(3, n).unwrap();
            let tuples: Vec<_> = p.all_tuples().collect();
            let pick = |s: u64| tuples[(s % tuples.len() as u64) as usize].clone();
            let (x, y) = (pick(seed[0]), pick(seed[1]));
            // z either the forced completion or a random tuple
            let z = if seed[2] % 2 == 0 {
                match complete_arrangement(&x, &y).unwrap() {
                    Some(a) => a.tuples()[2].clone(),
                    None => pick(seed[2]),
                }
            } else {
                pick(seed[2])
            };
            let a = WeightArrangement::new(vec![x, y, z], &p).unwrap();
            let tri = ShiftConvention::triangle(n);
            let s: Vec<_> = a.shift(&tri).iter().map(|t| t.values().to_vec()).collect();
            prop_assert_eq!(
                feasible_q3_check(s[0][0], s[0][1], s[1][0], s[1][1], s[2][0], s[2][1]),
                is_feasible(&a)
            );
        }
    }
}
