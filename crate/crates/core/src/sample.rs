//! Seeded random inputs. Every generator draws from a `ChaCha8Rng`, so a seed
//! fixes the output on every platform.

use std::collections::BTreeSet;

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::encode::PointSet;
use crate::error::{input, Result};
use crate::weights::{SpaceParams, SymmetricSet};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn check_density(density: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&density) {
        return input(format!("density {density} must lie in [0, 1]"));
    }
    Ok(())
}

/// Symmetric set keeping each weight tuple independently with probability `density`.
pub fn random_set<R: Rng>(params: SpaceParams, density: f64, rng: &mut R) -> Result<SymmetricSet> {
    check_density(density)?;
    let tuples: Vec<_> = params.all_tuples().filter(|_| rng.gen_bool(density)).collect();
    SymmetricSet::new(params, tuples)
}

/// [`random_set`] from a seed, with its exact point density.
pub fn generate_random_set(params: SpaceParams, density: f64, seed: u64) -> Result<(SymmetricSet, BigRational)> {
    let set = random_set(params, density, &mut rng(seed))?;
    let achieved = set.density();
    Ok((set, achieved))
}

/// `q` random sets with independent densities drawn from `[lo, hi]`.
pub fn random_set_tuple<R: Rng>(params: SpaceParams, lo: f64, hi: f64, rng: &mut R) -> Result<Vec<SymmetricSet>> {
    (0..params.q())
        .map(|_| {
            let density = rng.gen_range(lo..=hi);
            random_set(params, density, rng)
        })
        .collect()
}

/// Random subset of `Z_N^{q-1}` keeping each vector with probability `density`.
pub fn random_label_set<R: Rng>(q: usize, modulus: u64, density: f64, rng: &mut R) -> Result<BTreeSet<Vec<u64>>> {
    check_density(density)?;
    let mut out = BTreeSet::new();
    let mut v = vec![0u64; q - 1];
    loop {
        if rng.gen_bool(density) {
            out.insert(v.clone());
        }
        let mut axis = v.len();
        loop {
            if axis == 0 {
                return Ok(out);
            }
            axis -= 1;
            if v[axis] + 1 < modulus {
                v[axis] += 1;
                break;
            }
            v[axis] = 0;
        }
    }
}

/// Random point set in `[-N, N]^2` with at least `min_density` of the box.
pub fn random_point_set<R: Rng>(radius: i64, min_density: f64, rng: &mut R) -> Result<PointSet> {
    check_density(min_density)?;
    let all: Vec<(i64, i64)> = (-radius..=radius).flat_map(|x| (-radius..=radius).map(move |y| (x, y))).collect();
    let need = (min_density * all.len() as f64).ceil() as usize;
    let density = rng.gen_range(min_density..=1.0);
    let mut chosen: BTreeSet<(i64, i64)> = all.iter().copied().filter(|_| rng.gen_bool(density)).collect();
    // top up from the remaining points in random order
    let mut rest: Vec<_> = all.iter().copied().filter(|p| !chosen.contains(p)).collect();
    while chosen.len() < need {
        let idx = rng.gen_range(0..rest.len());
        chosen.insert(rest.swap_remove(idx));
    }
    PointSet::new(radius, chosen)
}
