//! The acceptance suite: each check compares a fast construction against an
//! independent computation and reports the first disagreement.
//!
//! The quick tier runs the standard grid; the full tier widens it.

use std::collections::BTreeMap;
use std::fmt;
use std::time::Instant;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::Zero;
use rand::Rng;
use serde::Serialize;

use crate::budget::Budget;
use crate::clt::{central_constant, error_scan, scaled_center_sequence};
use crate::count::{count_arrangement_restricted, count_product_hits, FullCounter};
use crate::encode::{build_hypergraph, build_tripartite, simplices_by_arrangement, simplices_edge_disjoint, triangles_by_triple, triangles_edge_disjoint};
use crate::error::Result;
use crate::feasible::{enumerate_feasible, feasible_count, ModArrangement};
use crate::matrix::ExactMatrix;
use crate::modp::{build_b, pattern_index, removal_procedure, trivial_split, LinearStructure};
use crate::oracle::{oracle_count, oracle_histogram, ProgressionKind};
use crate::sample::{random_label_set, random_point_set, random_set, random_set_tuple, rng};
use crate::weights::{SpaceParams, SymmetricSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Tier {
    Quick,
    Full,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    /// Summary on success, first counterexample on failure.
    pub detail: String,
    pub millis: u128,
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "[{status}] {:>2}. {} ({} ms): {}", self.id, self.name, self.millis, self.detail)
    }
}

/// Outcome of one check body: `Ok(summary)` or `Err(counterexample)`.
type Outcome = std::result::Result<String, String>;

fn fail<T>(msg: impl Into<String>) -> std::result::Result<T, String> {
    Err(msg.into())
}

fn lift<T>(r: Result<T>) -> std::result::Result<T, String> {
    r.map_err(|e| e.to_string())
}

pub struct Check {
    pub id: u8,
    pub name: &'static str,
    run: fn(Tier) -> Outcome,
}

impl Check {
    pub fn run(&self, tier: Tier) -> CheckReport {
        let start = Instant::now();
        let outcome = (self.run)(tier);
        let millis = start.elapsed().as_millis();
        let (passed, detail) = match outcome {
            Ok(d) => (true, d),
            Err(d) => (false, d),
        };
        CheckReport { id: self.id, name: self.name, passed, detail, millis }
    }
}

pub fn checks() -> Vec<Check> {
    vec![
        Check { id: 1, name: "restricted counts match oracle", run: restricted_oracle },
        Check { id: 2, name: "full counts match oracle", run: full_oracle },
        Check { id: 3, name: "restricted progressions total (2q)^n", run: restricted_total },
        Check { id: 4, name: "feasible arrangements number N^(2(q-1))", run: feasible_total },
        Check { id: 5, name: "linear system matrix identities", run: matrix_suite },
        Check { id: 6, name: "solvability predicate matches lattice search", run: solvability },
        Check { id: 7, name: "hypergraph simplices match feasible arrangements", run: hypergraph },
        Check { id: 8, name: "triangle witnesses", run: triangles },
        Check { id: 9, name: "local limit convergence at the center", run: clt_convergence },
        Check { id: 10, name: "progression-free constructions", run: constructions },
    ]
}

pub fn run_all(tier: Tier) -> Vec<CheckReport> {
    checks().iter().map(|c| c.run(tier)).collect()
}

fn seed(id: u64, a: u64, b: u64) -> u64 {
    (id << 48) ^ (a << 32) ^ (b << 16)
}

/// Per `(q, n)`: every arrangement's count against the unrestricted oracle
/// histogram, then 20 random set tuples against the oracle hit count.
fn restricted_oracle(tier: Tier) -> Outcome {
    let budget = Budget::default();
    let (n3, n4) = match tier {
        Tier::Quick => (8, 5),
        Tier::Full => (9, 6),
    };
    let grid: Vec<(usize, usize)> = (2..=n3).map(|n| (3, n)).chain((2..=n4).map(|n| (4, n))).collect();
    let mut instances = 0;
    for &(q, n) in &grid {
        let params = lift(SpaceParams::new(q, n))?;
        let all = lift(oracle_histogram(&params, ProgressionKind::Restricted, &budget))?;
        for (arr, &c) in &all.histogram {
            let fast = count_arrangement_restricted(arr);
            if fast != BigUint::from(c) {
                return fail(format!("q={q} n={n}: arrangement {:?} counted {fast}, oracle {c}", arr.flatten()));
            }
        }
        let mut r = rng(seed(1, q as u64, n as u64));
        for inst in 0..20 {
            let sets = lift(random_set_tuple(params, 0.2, 0.9, &mut r))?;
            let oracle = lift(oracle_count(&sets, ProgressionKind::Restricted, &budget))?;
            let fast = lift(count_product_hits(&sets, ProgressionKind::Restricted, &budget))?;
            if fast != oracle.count {
                return fail(format!("q={q} n={n} instance {inst}: product count {fast}, oracle {}", oracle.count));
            }
            for (arr, &c) in &oracle.histogram {
                if count_arrangement_restricted(arr) != BigUint::from(c) {
                    return fail(format!("q={q} n={n} instance {inst}: arrangement {:?} disagrees", arr.flatten()));
                }
            }
            instances += 1;
        }
    }
    Ok(format!("{} (q, n) cells, {instances} random instances, zero tolerance", grid.len()))
}

fn full_oracle(tier: Tier) -> Outcome {
    let budget = Budget::default();
    let top = match tier {
        Tier::Quick => 6,
        Tier::Full => 7,
    };
    let counter = lift(FullCounter::new(3))?;
    let mut instances = 0;
    for n in 2..=top {
        let params = lift(SpaceParams::prime(3, n))?;
        let all = lift(oracle_histogram(&params, ProgressionKind::Full, &budget))?;
        for (arr, &c) in &all.histogram {
            let fast = lift(counter.count_arrangement(arr))?;
            if fast != BigUint::from(c) {
                return fail(format!("n={n}: arrangement {:?} counted {fast}, oracle {c}", arr.flatten()));
            }
        }
        let mut r = rng(seed(2, 3, n as u64));
        for inst in 0..20 {
            let sets = lift(random_set_tuple(params, 0.2, 0.9, &mut r))?;
            let oracle = lift(oracle_count(&sets, ProgressionKind::Full, &budget))?;
            let fast = lift(count_product_hits(&sets, ProgressionKind::Full, &budget))?;
            if fast != oracle.count {
                return fail(format!("n={n} instance {inst}: product count {fast}, oracle {}", oracle.count));
            }
            for (arr, &c) in &oracle.histogram {
                if lift(counter.count_arrangement(arr))? != BigUint::from(c) {
                    return fail(format!("n={n} instance {inst}: arrangement {:?} disagrees", arr.flatten()));
                }
            }
            instances += 1;
        }
    }
    Ok(format!("p=3, n=2..={top}, {instances} random instances, zero tolerance"))
}

fn restricted_total(tier: Tier) -> Outcome {
    let top = match tier {
        Tier::Quick => 6,
        Tier::Full => 9,
    };
    let budget = Budget::default();
    for q in [3usize, 4] {
        for n in 1..=top {
            let params = lift(SpaceParams::new(q, n))?;
            let sets = vec![SymmetricSet::full(params); q];
            let total = lift(count_product_hits(&sets, ProgressionKind::Restricted, &budget))?;
            let expected = BigUint::from(2 * q).pow(n as u32);
            if total != expected {
                return fail(format!("q={q} n={n}: arrangement counts sum to {total}, expected {expected}"));
            }
        }
    }
    Ok(format!("q in {{3, 4}}, n = 1..={top}"))
}

fn feasible_total(tier: Tier) -> Outcome {
    let budget = Budget::default();
    let mut grid = vec![(3usize, 2u64), (3, 3), (3, 5), (4, 2), (4, 3), (4, 5)];
    if tier == Tier::Full {
        grid.extend([(3, 7), (5, 2), (5, 3)]);
    }
    for &(q, modulus) in &grid {
        let all: Vec<ModArrangement> = lift(enumerate_feasible(q, modulus, &budget))?.collect();
        let expected = feasible_count(q, modulus);
        if BigUint::from(all.len()) != expected {
            return fail(format!("q={q} N={modulus}: enumerated {}, expected {expected}", all.len()));
        }
        if let Some(bad) = all.iter().find(|a| !a.is_feasible()) {
            return fail(format!("q={q} N={modulus}: enumerated {:?} is not feasible", bad.values()));
        }
        let distinct: std::collections::BTreeSet<_> = all.iter().collect();
        if distinct.len() != all.len() {
            return fail(format!("q={q} N={modulus}: duplicates in enumeration"));
        }
        // exhaustive membership count where the ambient space is small
        let space = (modulus as u128).pow((q * (q - 1)) as u32);
        if space <= 1_000_000 {
            let mut digits = vec![0u64; q * (q - 1)];
            let mut hits = 0u64;
            loop {
                if lift(ModArrangement::new(q, modulus, digits.clone()))?.is_feasible() {
                    hits += 1;
                }
                if !bump(&mut digits, modulus) {
                    break;
                }
            }
            if BigUint::from(hits) != expected {
                return fail(format!("q={q} N={modulus}: {hits} feasible points in the full space, expected {expected}"));
            }
        }
    }
    Ok(format!("{} (q, N) cells", grid.len()))
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

fn matrix_suite(tier: Tier) -> Outcome {
    let primes: &[usize] = match tier {
        Tier::Quick => &[3, 5, 7],
        Tier::Full => &[3, 5, 7, 11],
    };
    for &p in primes {
        let s = lift(LinearStructure::new(p))?;
        let pi = BigRational::from_integer((p as i64).into());
        let pid = ExactMatrix::identity(p * (p - 1)).scale(&pi);
        if s.a() * s.b() != pid {
            return fail(format!("p={p}: A B != p I"));
        }
        if s.a() * s.b_prime() != pid {
            return fail(format!("p={p}: A B' != p I"));
        }
        if !(s.a() * s.k()).is_zero() {
            return fail(format!("p={p}: A K != 0"));
        }
        let rank = s.a().rank();
        if rank != p * (p - 1) {
            return fail(format!("p={p}: rank(A) = {rank}, expected {}", p * (p - 1)));
        }
        let (bp, b) = lift(build_b(p))?;
        let bp = bp.to_i64_rows().ok_or("B' is not integral")?;
        let pi = p as i64;
        let census = [(-(pi - 2), 1), (-(pi - 1), p - 2), (2, p - 1), (1, (p - 1) * (p - 2)), (0, p - 1)];
        for c in 0..p * (p - 1) {
            for &(value, count) in &census {
                let got = bp.iter().filter(|row| row[c] == value).count();
                if got != count {
                    return fail(format!("p={p}: column {c} of B' has {got} entries equal to {value}, expected {count}"));
                }
            }
        }
        let b = b.to_i64_rows().ok_or("B is not integral")?;
        for d in 1..p {
            if b[pattern_index(p, 0, d).expect("d != 0")].iter().any(|&v| v != 0) {
                return fail(format!("p={p}: row (0, {d}) of B is nonzero"));
            }
        }
    }
    Ok(format!("p in {primes:?}, exact rationals"))
}

fn solvability(tier: Tier) -> Outcome {
    let s = lift(LinearStructure::new(3))?;
    let reach = match tier {
        Tier::Quick => 2,
        Tier::Full => 3,
    };
    let mut w = vec![-reach; 6];
    let mut solvable = 0;
    let mut total = 0;
    loop {
        let predicate = lift(s.has_integer_solution(&w))?;
        let found = lift(s.search_integer_solution(&w, 6))?;
        if predicate != found.is_some() {
            return fail(format!("w={w:?}: predicate says {predicate}, lattice search found {found:?}"));
        }
        solvable += usize::from(predicate);
        total += 1;
        let mut axis = 6;
        let more = loop {
            if axis == 0 {
                break false;
            }
            axis -= 1;
            if w[axis] < reach {
                w[axis] += 1;
                break true;
            }
            w[axis] = -reach;
        };
        if !more {
            break;
        }
    }
    let mut r = rng(seed(6, 0, 0));
    for _ in 0..10_000 {
        let w: Vec<i64> = (0..6).map(|_| r.gen_range(-50..=50)).collect();
        let shifted: Vec<i64> = w.iter().map(|v| v + 3 * r.gen_range(-20..=20)).collect();
        if lift(s.has_integer_solution(&w))? != lift(s.has_integer_solution(&shifted))? {
            return fail(format!("{w:?} and {shifted:?} are congruent mod 3 but disagree"));
        }
    }
    Ok(format!("{total} vectors ({solvable} solvable), 10000 congruent pairs"))
}

fn hypergraph(tier: Tier) -> Outcome {
    let budget = Budget::default();
    let mut grid = vec![(3usize, 3u64), (3, 5), (4, 2), (4, 3)];
    if tier == Tier::Full {
        grid.extend([(3, 7), (5, 2)]);
    }
    let mut simplices_seen = 0usize;
    for &(q, modulus) in &grid {
        let per = (modulus as usize).pow(((q - 1) * (q - 2)) as u32);
        let mut r = rng(seed(7, q as u64, modulus));
        for inst in 0..10 {
            let sets = (0..q)
                .map(|_| {
                    let density = r.gen_range(0.3..=0.9);
                    random_label_set(q, modulus, density, &mut r)
                })
                .collect::<Result<Vec<_>>>();
            let h = lift(build_hypergraph(lift(sets)?, q, modulus))?;
            let tag = format!("q={q} N={modulus} instance {inst}");
            let mut scanned = lift(h.enumerate_simplices_scan(&budget))?;
            for s in &scanned {
                if !s.labels.is_feasible() {
                    return fail(format!("{tag}: simplex {:?} has infeasible labels", s.vertices));
                }
                if (0..q).any(|j| !h.sets()[j].contains(s.labels.tuple(j))) {
                    return fail(format!("{tag}: simplex {:?} labels leave the product", s.vertices));
                }
            }
            let families = simplices_by_arrangement(&scanned);
            let targets = lift(h.feasible_in_product(&budget))?;
            if families.len() != targets.len() {
                return fail(format!("{tag}: {} arrangements carry simplices, {} feasible in product", families.len(), targets.len()));
            }
            for (arr, family) in &families {
                if family.len() != per {
                    return fail(format!("{tag}: arrangement {:?} has {} simplices, expected {per}", arr.values(), family.len()));
                }
                if !simplices_edge_disjoint(family) {
                    return fail(format!("{tag}: simplices of {:?} share an edge", arr.values()));
                }
            }
            let mut extended = lift(h.enumerate_simplices(&budget))?;
            scanned.sort();
            extended.sort();
            if scanned != extended {
                return fail(format!("{tag}: extension and scan disagree"));
            }
            simplices_seen += scanned.len();
        }
    }
    Ok(format!("{} (q, N) cells x 10 instances, {simplices_seen} simplices", grid.len()))
}

fn triangles(tier: Tier) -> Outcome {
    let budget = Budget::default();
    let radii: &[i64] = match tier {
        Tier::Quick => &[2],
        Tier::Full => &[2, 3],
    };
    let mut total = 0usize;
    for &radius in radii {
        let per_point = ((2 * radius + 1) * (2 * radius + 1)) as u64;
        let mut r = rng(seed(8, radius as u64, 0));
        for inst in 0..10 {
            let set = lift(random_point_set(radius, 0.5, &mut r))?;
            let tag = format!("N={radius} instance {inst}");
            let g = build_tripartite(set.clone());
            let witnesses = g.witness_triangles();
            let mut by_point: BTreeMap<(i64, i64), u64> = BTreeMap::new();
            for t in &witnesses {
                if !g.is_triangle(t) {
                    return fail(format!("{tag}: witness {t:?} is not a triangle"));
                }
                *by_point.entry(t.points[0]).or_default() += 1;
            }
            if by_point.len() != set.len() || by_point.values().any(|&c| c != per_point) {
                return fail(format!("{tag}: witnesses per point {by_point:?}, expected {per_point} each"));
            }
            if !triangles_edge_disjoint(&witnesses) {
                return fail(format!("{tag}: witness triangles share an edge"));
            }
            let all = lift(g.triangles(&budget))?;
            for t in &all {
                if !t.is_feasible() || t.points.iter().any(|&p| !set.contains(p)) {
                    return fail(format!("{tag}: triangle {t:?} maps outside the feasible triples of R"));
                }
            }
            let side = (2 * g.box_radius() + 1) as u64;
            if let Some((triple, c)) = triangles_by_triple(&all).into_iter().find(|&(_, c)| c > side * side) {
                return fail(format!("{tag}: triple {triple:?} has {c} triangles"));
            }
            let lookup: std::collections::HashSet<_> = all.iter().collect();
            if let Some(w) = witnesses.iter().find(|w| !lookup.contains(w)) {
                return fail(format!("{tag}: witness {w:?} missing from enumeration"));
            }
            total += all.len();
        }
    }
    Ok(format!("{} point sets, {total} triangles enumerated", 10 * radii.len()))
}

fn clt_convergence(tier: Tier) -> Outcome {
    let mut ns = vec![300, 3000, 30000];
    if tier == Tier::Full {
        ns.push(300_000);
    }
    let limit = central_constant(2);
    let seq = lift(scaled_center_sequence(2, &ns))?;
    if !seq.windows(2).all(|w| w[0] < w[1]) {
        return fail(format!("n P(center) = {seq:?} is not strictly increasing"));
    }
    if seq.iter().any(|&v| v >= limit) {
        return fail(format!("n P(center) = {seq:?} overshoots {limit}"));
    }
    let gap = (limit - seq[seq.len() - 1]) / limit;
    if gap >= 0.01 {
        return fail(format!("final relative gap {gap} is not below 1%"));
    }
    let scan = lift(error_scan(2, &ns, 0.0))?;
    let errs: Vec<f64> = scan.rows.iter().map(|r| r.max_rel_err).collect();
    if !errs.windows(2).all(|w| w[1] < w[0]) {
        return fail(format!("relative errors {errs:?} do not decrease"));
    }
    let shown: Vec<String> = seq.iter().map(|v| format!("{v:.6}")).collect();
    Ok(format!("n P(center) = [{}] -> {limit:.6}, final gap {gap:.2e}", shown.join(", ")))
}

fn constructions(tier: Tier) -> Outcome {
    let budget = Budget::default();
    let split_grid: Vec<(usize, usize)> = match tier {
        Tier::Quick => vec![(3, 2), (5, 2)],
        Tier::Full => vec![(3, 2), (5, 2), (3, 3), (3, 4)],
    };
    for &(p, n) in &split_grid {
        let params = lift(SpaceParams::prime(p, n))?;
        let mut r = rng(seed(10, p as u64, n as u64));
        let mut inputs = vec![vec![SymmetricSet::full(params); p]];
        for _ in 0..5 {
            inputs.push(lift(random_set_tuple(params, 0.3, 1.0, &mut r))?);
        }
        for sets in inputs {
            let split = lift(trivial_split(&sets))?;
            let hits = lift(oracle_count(&split, ProgressionKind::Full, &budget))?;
            if !hits.count.is_zero() {
                return fail(format!("p={p} n={n}: split sets still contain {} progressions", hits.count));
            }
        }
    }
    let mut r = rng(seed(10, 0, 1));
    let mus = ["1/10", "1/4", "1/2", "1"];
    let mut removed_any = 0;
    for inst in 0..20 {
        let n = 3 + inst % 6;
        let params = lift(SpaceParams::prime(3, n))?;
        let mu = lift(crate::json::parse_rational(mus[inst % mus.len()]))?;
        let sets = (0..3)
            .map(|_| {
                let density = r.gen_range(0.05..=0.6);
                random_set(params, density, &mut r)
            })
            .collect::<Result<Vec<_>>>();
        let report = lift(removal_procedure(&lift(sets)?, &mu))?;
        let half = &mu / BigRational::from_integer(2.into());
        for (j, d) in report.removed_density.iter().enumerate() {
            if *d > half {
                return fail(format!("instance {inst} set {j}: removed density {d} exceeds mu/2 = {half}"));
            }
        }
        removed_any += report.removed.iter().filter(|r| !r.is_empty()).count();
    }
    Ok(format!("split on {} (p, n) cells, removal on 20 instances ({removed_any} sets pruned)", split_grid.len()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cheap_checks_pass() {
        for c in checks().iter().filter(|c| [4, 5, 9].contains(&c.id)) {
            let report = c.run(Tier::Quick);
            assert!(report.passed, "{report}");
        }
    }
}
