//! Graph encodings of progressions.
//!
//! * A tripartite graph on three copies of `[-M, M]^2`, `M = 3N`, whose
//!   triangles correspond to feasible `q = 3` point triples in `R^3` for a
//!   point set `R` in `[-N, N]^2`.
//! * A `q`-partite `(q-1)`-uniform hypergraph on `q` copies of `Z_N^{q-1}`
//!   whose edges carry weight labels; its simplices correspond to feasible
//!   label arrangements in `R^(1) x ... x R^(q)`.
//!
//! Parts are 0-based throughout.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use num_bigint::BigUint;

use crate::budget::Budget;
use crate::error::{input, Error, Result};
use crate::feasible::{derive_tail_mod, feasible_q3_check, ModArrangement};
use crate::json::{LabelSetsJson, PointSetJson};

pub type Point = (i64, i64);

/// Point set `R` inside `[-N, N]^2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointSet {
    radius: i64,
    points: BTreeSet<Point>,
}

impl PointSet {
    pub fn new(radius: i64, points: impl IntoIterator<Item = Point>) -> Result<Self> {
        if radius < 0 {
            return input(format!("box radius N={radius} must be nonnegative"));
        }
        let points: BTreeSet<Point> = points.into_iter().collect();
        if let Some(p) = points.iter().find(|p| p.0.abs() > radius || p.1.abs() > radius) {
            return input(format!("point {p:?} lies outside [-{radius}, {radius}]^2"));
        }
        Ok(PointSet { radius, points })
    }

    pub fn from_json(raw: PointSetJson) -> Result<Self> {
        PointSet::new(raw.radius, raw.points.into_iter().map(|[x, y]| (x, y)))
    }

    pub fn radius(&self) -> i64 {
        self.radius
    }

    pub fn points(&self) -> &BTreeSet<Point> {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, p: Point) -> bool {
        self.points.contains(&p)
    }
}

/// Tripartite graph with parts `V1, V2, V3`, each `[-M, M]^2`; adjacency is implicit.
#[derive(Debug, Clone)]
pub struct TripartiteGraph {
    set: PointSet,
    lookup: HashSet<Point>,
}

/// A triangle and the points of `R` labeling its three edges.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Triangle {
    pub i: Point,
    pub j: Point,
    pub k: Point,
    /// Labels of the `V1V2`, `V2V3`, `V1V3` edges.
    pub points: [Point; 3],
}

impl Triangle {
    /// The triple satisfies the `q = 3` feasibility identity.
    pub fn is_feasible(&self) -> bool {
        let [(x1, y1), (x2, y2), (x3, y3)] = self.points;
        feasible_q3_check(x1, y1, x2, y2, x3, y3)
    }
}

pub fn build_tripartite(set: PointSet) -> TripartiteGraph {
    let lookup = set.points.iter().copied().collect();
    TripartiteGraph { set, lookup }
}

pub fn label_12(i: Point, j: Point) -> Point {
    (i.1 - j.1, j.0 - i.0 + j.1 - i.1)
}

pub fn label_23(j: Point, k: Point) -> Point {
    (k.0 - j.0 + k.1 - j.1, j.0 - k.0)
}

pub fn label_13(i: Point, k: Point) -> Point {
    (k.0 - i.0, k.1 - i.1)
}

impl TripartiteGraph {
    pub fn point_set(&self) -> &PointSet {
        &self.set
    }

    /// `N`.
    pub fn radius(&self) -> i64 {
        self.set.radius
    }

    /// `M = 3N`.
    pub fn box_radius(&self) -> i64 {
        3 * self.set.radius
    }

    pub fn vertex_count(&self) -> u64 {
        let side = (2 * self.box_radius() + 1) as u64;
        3 * side * side
    }

    pub fn in_box(&self, v: Point) -> bool {
        let m = self.box_radius();
        v.0.abs() <= m && v.1.abs() <= m
    }

    pub fn adjacent_12(&self, i: Point, j: Point) -> bool {
        self.in_box(i) && self.in_box(j) && self.lookup.contains(&label_12(i, j))
    }

    pub fn adjacent_23(&self, j: Point, k: Point) -> bool {
        self.in_box(j) && self.in_box(k) && self.lookup.contains(&label_23(j, k))
    }

    pub fn adjacent_13(&self, i: Point, k: Point) -> bool {
        self.in_box(i) && self.in_box(k) && self.lookup.contains(&label_13(i, k))
    }

    fn box_points(&self) -> impl Iterator<Item = Point> {
        let m = self.box_radius();
        (-m..=m).flat_map(move |x| (-m..=m).map(move |y| (x, y)))
    }

    /// Every triangle. For each `i` and each pair of labels on the `V1V2` and
    /// `V1V3` edges the other two vertices are forced, so the work is
    /// `(2M+1)^2 |R|^2`.
    pub fn triangles(&self, budget: &Budget) -> Result<Vec<Triangle>> {
        let side = (2 * self.box_radius() + 1) as u128;
        let r = self.set.len() as u128;
        budget.check_u128(side * side * r * r)?;
        let mut out = Vec::new();
        for i in self.box_points() {
            for &p1 in &self.set.points {
                let j = (i.0 + p1.0 + p1.1, i.1 - p1.0);
                if !self.in_box(j) {
                    continue;
                }
                for &p3 in &self.set.points {
                    let k = (i.0 + p3.0, i.1 + p3.1);
                    if !self.in_box(k) {
                        continue;
                    }
                    let p2 = label_23(j, k);
                    if self.lookup.contains(&p2) {
                        out.push(Triangle { i, j, k, points: [p1, p2, p3] });
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn count_triangles(&self, budget: &Budget) -> Result<BigUint> {
        Ok(BigUint::from(self.triangles(budget)?.len()))
    }

    /// For each `(x, y)` in `R` and `i` in `[-N, N]^2`, the triangle
    /// `i, (i_x+x+y, i_y-x), (i_x+x, i_y+y)`, all of whose edges are labeled `(x, y)`.
    pub fn witness_triangles(&self) -> Vec<Triangle> {
        let n = self.set.radius;
        let mut out = Vec::new();
        for &(x, y) in &self.set.points {
            for ix in -n..=n {
                for iy in -n..=n {
                    out.push(Triangle {
                        i: (ix, iy),
                        j: (ix + x + y, iy - x),
                        k: (ix + x, iy + y),
                        points: [(x, y); 3],
                    });
                }
            }
        }
        out
    }

    pub fn is_triangle(&self, t: &Triangle) -> bool {
        self.adjacent_12(t.i, t.j)
            && self.adjacent_23(t.j, t.k)
            && self.adjacent_13(t.i, t.k)
            && t.points == [label_12(t.i, t.j), label_23(t.j, t.k), label_13(t.i, t.k)]
    }
}

/// Whether no two triangles share an edge.
pub fn triangles_edge_disjoint(triangles: &[Triangle]) -> bool {
    let mut seen = HashSet::new();
    triangles
        .iter()
        .all(|t| seen.insert((0u8, t.i, t.j)) && seen.insert((1, t.j, t.k)) && seen.insert((2, t.i, t.k)))
}

/// Triangle count per associated point triple.
pub fn triangles_by_triple(triangles: &[Triangle]) -> BTreeMap<[Point; 3], u64> {
    let mut out = BTreeMap::new();
    for t in triangles {
        *out.entry(t.points).or_insert(0) += 1;
    }
    out
}

/// Label `w^(j)` of the edge of part `j`: for `a = 1..q`,
/// `w_a = sum_{t=1}^{q-1} sum_{b=a-t+1}^{a} x_b^(j-t)` with part and symbol
/// indices taken mod `q` and `x_0 = -(x_1 + ... + x_{q-1})`.
///
/// `parts` holds all `q` vertices (each in `Z_N^{q-1}`); `parts[j]` is not read.
pub fn edge_label(parts: &[Vec<u64>], j: usize, modulus: u64) -> Result<Vec<u64>> {
    let q = parts.len();
    if q < 3 || j >= q || modulus == 0 {
        return input(format!("need q >= 3, j < q and N >= 1 (q={q}, j={j}, N={modulus})"));
    }
    if parts.iter().any(|x| x.len() + 1 != q || x.iter().any(|&v| v >= modulus)) {
        return input(format!("vertices must lie in Z_{modulus}^{}", q - 1));
    }
    let full = with_zeroth(parts, modulus);
    Ok(label_of(&full, j, modulus))
}

/// Prepends `x_0 = -sum x_a` to each vertex.
fn with_zeroth(parts: &[Vec<u64>], modulus: u64) -> Vec<Vec<u64>> {
    parts
        .iter()
        .map(|x| {
            let s = x.iter().sum::<u64>() % modulus;
            std::iter::once((modulus - s) % modulus).chain(x.iter().copied()).collect()
        })
        .collect()
}

fn label_of(full: &[Vec<u64>], j: usize, modulus: u64) -> Vec<u64> {
    let q = full.len();
    (1..q)
        .map(|a| {
            let mut sum = 0u64;
            for t in 1..q {
                let part = &full[(j + q - t) % q];
                for s in 0..t {
                    sum += part[(a + q - s) % q];
                }
            }
            sum % modulus
        })
        .collect()
}

/// Labels of all `q` edges of the vertex tuple, as an arrangement over `Z_N`.
pub fn labels(parts: &[Vec<u64>], modulus: u64) -> Result<ModArrangement> {
    let q = parts.len();
    edge_label(parts, 0, modulus)?;
    let full = with_zeroth(parts, modulus);
    let values = (0..q).flat_map(|j| label_of(&full, j, modulus)).collect();
    ModArrangement::new(q, modulus, values)
}

/// A simplex: one vertex per part; its edges carry the labels `labels`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Simplex {
    pub vertices: Vec<Vec<u64>>,
    pub labels: ModArrangement,
}

/// Hypergraph with edge `E^(j)` present iff its label lies in `R^(j)`; edges are tested on demand.
#[derive(Debug, Clone)]
pub struct LabeledHypergraph {
    q: usize,
    modulus: u64,
    sets: Vec<BTreeSet<Vec<u64>>>,
}

pub fn build_hypergraph(sets: Vec<BTreeSet<Vec<u64>>>, q: usize, modulus: u64) -> Result<LabeledHypergraph> {
    if q < 3 || modulus == 0 {
        return input(format!("need q >= 3 and N >= 1 (q={q}, N={modulus})"));
    }
    if sets.len() != q {
        return input(format!("{} label sets given, expected q={q}", sets.len()));
    }
    for s in &sets {
        if let Some(bad) = s.iter().find(|w| w.len() + 1 != q || w.iter().any(|&v| v >= modulus)) {
            return input(format!("label {bad:?} is not in Z_{modulus}^{}", q - 1));
        }
    }
    Ok(LabeledHypergraph { q, modulus, sets })
}

impl LabeledHypergraph {
    pub fn from_json(raw: LabelSetsJson) -> Result<Self> {
        let sets = raw.sets.into_iter().map(|s| s.into_iter().collect()).collect();
        build_hypergraph(sets, raw.q, raw.modulus)
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn sets(&self) -> &[BTreeSet<Vec<u64>>] {
        &self.sets
    }

    pub fn vertex_count(&self) -> BigUint {
        BigUint::from(self.q) * BigUint::from(self.modulus).pow(self.q as u32 - 1)
    }

    fn in_product(&self, arr: &ModArrangement) -> bool {
        (0..self.q).all(|j| self.sets[j].contains(arr.tuple(j)))
    }

    /// Whether the vertex tuple spans a simplex.
    pub fn is_simplex(&self, parts: &[Vec<u64>]) -> Result<bool> {
        Ok(self.in_product(&labels(parts, self.modulus)?))
    }

    /// Feasible arrangements in `R^(1) x ... x R^(q)`.
    pub fn feasible_in_product(&self, budget: &Budget) -> Result<Vec<ModArrangement>> {
        budget.check_u128(self.sets[0].len() as u128 * self.sets[1].len() as u128)?;
        let mut out = Vec::new();
        for w1 in &self.sets[0] {
            for w2 in &self.sets[1] {
                let arr = derive_tail_mod(w1, w2, self.modulus)?;
                if self.in_product(&arr) {
                    out.push(arr);
                }
            }
        }
        Ok(out)
    }

    /// Simplices by scanning all `N^{q(q-1)}` vertex tuples.
    pub fn enumerate_simplices_scan(&self, budget: &Budget) -> Result<Vec<Simplex>> {
        let q = self.q;
        budget.check(&BigUint::from(self.modulus).pow((q * (q - 1)) as u32))?;
        let mut out = Vec::new();
        let mut digits = vec![0u64; q * (q - 1)];
        loop {
            let parts: Vec<Vec<u64>> = digits.chunks(q - 1).map(<[u64]>::to_vec).collect();
            let arr = labels(&parts, self.modulus)?;
            if self.in_product(&arr) {
                out.push(Simplex { vertices: parts, labels: arr });
            }
            if !bump(&mut digits, self.modulus) {
                break;
            }
        }
        Ok(out)
    }

    /// Simplices by extending every choice of free vertices for each feasible
    /// arrangement in the product.
    pub fn enumerate_simplices(&self, budget: &Budget) -> Result<Vec<Simplex>> {
        let q = self.q;
        let targets = self.feasible_in_product(budget)?;
        let per = BigUint::from(self.modulus).pow(((q - 1) * (q - 2)) as u32);
        budget.check(&(per * BigUint::from(targets.len())))?;
        let mut out = Vec::new();
        for target in targets {
            let mut digits = vec![0u64; (q - 1) * (q - 2)];
            loop {
                let free: Vec<Vec<u64>> = digits.chunks(q - 1).map(<[u64]>::to_vec).collect();
                out.push(Simplex { vertices: simplex_extension(&free, &target)?, labels: target.clone() });
                if !bump(&mut digits, self.modulus) {
                    break;
                }
            }
        }
        Ok(out)
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

/// Completes free vertices of parts `1..q-1` to the simplex with label arrangement `target`.
///
/// Part `q-1` enters the label of part 0 only through `x_a^(q-1)` (the
/// `t = 1` term), so it is `w^(0)` minus the label computed with it zeroed;
/// part 0 then follows the same way from `w^(1)`. The remaining labels are
/// checked against the target.
pub fn simplex_extension(free: &[Vec<u64>], target: &ModArrangement) -> Result<Vec<Vec<u64>>> {
    let q = target.q();
    let modulus = target.modulus();
    if free.len() + 2 != q {
        return input(format!("{} free vertices given, expected q-2={}", free.len(), q - 2));
    }
    if !target.is_feasible() {
        return Err(Error::Contract("target arrangement is not feasible".into()));
    }
    let mut parts = Vec::with_capacity(q);
    parts.push(vec![0u64; q - 1]);
    parts.extend(free.iter().cloned());
    parts.push(vec![0u64; q - 1]);
    let solve = |parts: &[Vec<u64>], label: usize| -> Result<Vec<u64>> {
        let partial = edge_label(parts, label, modulus)?;
        Ok(target.tuple(label).iter().zip(partial).map(|(w, v)| (w + modulus - v) % modulus).collect())
    };
    parts[q - 1] = solve(&parts, 0)?;
    parts[0] = solve(&parts, 1)?;
    if labels(&parts, modulus)? != *target {
        return Err(Error::Contract("extension does not reproduce the target labels".into()));
    }
    Ok(parts)
}

/// Whether no two simplices share an edge (the vertices of all parts but one).
pub fn simplices_edge_disjoint(simplices: &[Simplex]) -> bool {
    let mut seen = HashSet::new();
    simplices.iter().all(|s| {
        (0..s.vertices.len()).all(|j| {
            let mut edge = s.vertices.clone();
            edge.remove(j);
            seen.insert((j, edge))
        })
    })
}

/// Simplices grouped by their label arrangement.
pub fn simplices_by_arrangement(simplices: &[Simplex]) -> BTreeMap<ModArrangement, Vec<Simplex>> {
    let mut out: BTreeMap<ModArrangement, Vec<Simplex>> = BTreeMap::new();
    for s in simplices {
        out.entry(s.labels.clone()).or_default().push(s.clone());
    }
    out
}
