//! Local central limit theorem for sums of `n` independent steps uniform on
//! `{0, e_1, ..., e_ell}` in `Z^ell`: exact point probabilities against the
//! Gaussian main term.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::combinatorics::multinomial;
use crate::error::{input, Result};

/// Query point `w` for the sum of `n` steps in dimension `ell`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CltQuery {
    pub ell: usize,
    pub n: usize,
    pub w: Vec<i64>,
}

impl CltQuery {
    pub fn new(ell: usize, n: usize, w: Vec<i64>) -> Result<Self> {
        if ell == 0 || n == 0 {
            return input(format!("need ell >= 1 and n >= 1 (ell={ell}, n={n})"));
        }
        if w.len() != ell {
            return input(format!("w has {} coordinates, expected ell={ell}", w.len()));
        }
        Ok(CltQuery { ell, n, w })
    }

    /// The lattice point `floor(n/(ell+1)) * (1, ..., 1)`.
    pub fn center(ell: usize, n: usize) -> Result<Self> {
        CltQuery::new(ell, n, vec![(n / (ell + 1)) as i64; ell])
    }

    /// `d = w - n/(ell+1) * (1, ..., 1)`, exact.
    pub fn d(&self) -> Vec<BigRational> {
        let mean = BigRational::new(BigInt::from(self.n), BigInt::from(self.ell + 1));
        self.w.iter().map(|&v| BigRational::from_integer(v.into()) - &mean).collect()
    }

    fn in_simplex(&self) -> bool {
        self.w.iter().all(|&v| v >= 0) && self.w.iter().sum::<i64>() <= self.n as i64
    }

    /// Counts `(n - sum w, w_1, ..., w_ell)`, if `w` is reachable.
    fn parts(&self) -> Option<Vec<usize>> {
        self.in_simplex().then(|| {
            let rest = self.n - self.w.iter().sum::<i64>() as usize;
            std::iter::once(rest).chain(self.w.iter().map(|&v| v as usize)).collect()
        })
    }
}

/// `Pr[sum = w] = n! / ((n - sum w)! prod w_j!) / (ell+1)^n`, exact; zero off the simplex.
pub fn exact_prob(qr: &CltQuery) -> BigRational {
    let Some(parts) = qr.parts() else {
        return BigRational::zero();
    };
    let num = BigInt::from(multinomial(&parts));
    let den = BigInt::from(BigUint::from(qr.ell + 1).pow(qr.n as u32));
    BigRational::new(num, den)
}

/// Natural log of the Gaussian main term.
pub fn ln_leading_term(qr: &CltQuery) -> f64 {
    let l = qr.ell as f64;
    let n = qr.n as f64;
    let d = qr.d();
    let norm2 = d.iter().map(|x| x * x).fold(BigRational::zero(), |a, b| a + b);
    let sum = d.iter().fold(BigRational::zero(), |a, b| a + b);
    let quad = rational_to_f64(&(norm2 + &sum * &sum));
    (l + 1.0) / 2.0 * (l + 1.0).ln() - l / 2.0 * (2.0 * std::f64::consts::PI).ln() - l / 2.0 * n.ln()
        - (l + 1.0) / (2.0 * n) * quad
}

/// `(ell+1)^{(ell+1)/2} / (2 pi)^{ell/2} / n^{ell/2} * exp(-(ell+1)/(2n) (|d|^2 + (sum d)^2))`.
pub fn leading_term(qr: &CltQuery) -> f64 {
    ln_leading_term(qr).exp()
}

/// `(ell+1)^{(ell+1)/2} / (2 pi)^{ell/2}`, the limit of `n^{ell/2}` times the central probability.
pub fn central_constant(ell: usize) -> f64 {
    let l = ell as f64;
    ((l + 1.0) / 2.0 * (l + 1.0).ln() - l / 2.0 * (2.0 * std::f64::consts::PI).ln()).exp()
}

/// `ln x` for a positive big integer, from its top 64 bits.
pub fn ln_biguint(x: &BigUint) -> f64 {
    let bits = x.bits();
    let shift = bits.saturating_sub(64);
    let top = (x >> shift).to_f64().expect("at most 64 bits");
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// `f64` value of a rational of any size; falls back to logs when the direct conversion fails.
pub fn rational_to_f64(x: &BigRational) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    if let Some(v) = x.to_f64().filter(|v| v.is_finite() && *v != 0.0) {
        return v;
    }
    let ln = ln_biguint(x.numer().magnitude()) - ln_biguint(x.denom().magnitude());
    let v = ln.exp();
    if x.is_negative() {
        -v
    } else {
        v
    }
}

/// `ln exact_prob`, or `-inf` off the simplex.
pub fn ln_exact_prob(qr: &CltQuery) -> f64 {
    let p = exact_prob(qr);
    if p.is_zero() {
        return f64::NEG_INFINITY;
    }
    ln_biguint(p.numer().magnitude()) - ln_biguint(p.denom().magnitude())
}

/// `sum_{k=a+1}^{b} ln k` (negated when `b < a`), i.e. `ln b! - ln a!`.
fn ln_factorial_ratio(b: usize, a: usize) -> f64 {
    if b >= a {
        (a + 1..=b).map(|k| (k as f64).ln()).sum()
    } else {
        -ln_factorial_ratio(a, b)
    }
}

/// One row of an error scan.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanRow {
    pub n: usize,
    /// Lattice points in the window.
    pub points: usize,
    /// Point attaining `max_rel_err`.
    pub worst: Vec<i64>,
    pub exact: f64,
    pub leading: f64,
    /// `max |exact - leading| / exact` over the window.
    pub max_rel_err: f64,
    /// `n^{ell/2}` times the exact central probability.
    pub scaled_center: f64,
}

/// Empirical sandwich constant over a scan.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Sandwich {
    /// Smallest `C` with `exact <= C / n^{ell/2}` on the grid.
    pub upper: f64,
    /// Smallest `C >= 1` with `exact >= n^{-ell/2} exp(-C |d|^2 / n) / C` on the grid.
    pub lower: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanReport {
    pub ell: usize,
    pub radius: f64,
    pub rows: Vec<ScanRow>,
    pub sandwich: Sandwich,
}

/// Relative error of the main term over the window `|d|_inf <= radius sqrt(n)`
/// (plus the center point), per `n`.
///
/// The central probability is computed exactly; other window points are
/// reached from it through sums of logs of the factorial ratios, which keeps
/// `n = 30000` cheap while staying within a few ulps of the exact value.
pub fn error_scan(ell: usize, ns: &[usize], radius: f64) -> Result<ScanReport> {
    if !(radius >= 0.0 && radius.is_finite()) {
        return input(format!("radius {radius} must be a nonnegative number"));
    }
    let mut rows = Vec::new();
    let mut grid: Vec<(usize, f64, f64)> = Vec::new(); // (n, |d|^2, exact)
    for &n in ns {
        let center = CltQuery::center(ell, n)?;
        let center_parts = center.parts().expect("center is reachable");
        let ln_center = ln_exact_prob(&center);
        let mean = n as f64 / (ell + 1) as f64;
        let half = radius * (n as f64).sqrt();
        // the center itself is always scanned
        let c = center.w[0];
        let lo = (((mean - half).ceil().max(0.0)) as i64).min(c);
        let hi = (((mean + half).floor().min(n as f64)) as i64).max(c);
        let mut row = ScanRow {
            n,
            points: 0,
            worst: center.w.clone(),
            exact: 0.0,
            leading: 0.0,
            max_rel_err: -1.0,
            scaled_center: (ln_center + ell as f64 / 2.0 * (n as f64).ln()).exp(),
        };
        crate::modp::for_each_box_point(&vec![(lo, hi); ell], |w| {
            let qr = CltQuery { ell, n, w: w.to_vec() };
            let Some(parts) = qr.parts() else { return };
            let ln_p = ln_center
                + parts.iter().zip(&center_parts).map(|(&m, &c)| ln_factorial_ratio(c, m)).sum::<f64>();
            let exact = ln_p.exp();
            let leading = leading_term(&qr);
            let err = (exact - leading).abs() / exact;
            let d2: f64 = w.iter().map(|&v| (v as f64 - mean).powi(2)).sum();
            grid.push((n, d2, exact));
            row.points += 1;
            if err > row.max_rel_err {
                row.max_rel_err = err;
                row.worst = w.to_vec();
                row.exact = exact;
                row.leading = leading;
            }
        });
        rows.push(row);
    }
    let sandwich = fit_sandwich(ell, &grid);
    Ok(ScanReport { ell, radius, rows, sandwich })
}

fn fit_sandwich(ell: usize, grid: &[(usize, f64, f64)]) -> Sandwich {
    let scale = |n: usize| (n as f64).powf(ell as f64 / 2.0);
    let upper = grid.iter().map(|&(n, _, p)| p * scale(n)).fold(0.0, f64::max);
    let holds = |c: f64| grid.iter().all(|&(n, d2, p)| p * scale(n) * c >= (-c * d2 / n as f64).exp());
    let (mut lo, mut hi) = (1.0f64, 2.0f64);
    if holds(lo) {
        return Sandwich { upper, lower: 1.0 };
    }
    while !holds(hi) {
        lo = hi;
        hi *= 2.0;
    }
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if holds(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Sandwich { upper, lower: hi }
}

/// `n^{ell/2}` times the exact central probability, for each `n`.
pub fn scaled_center_sequence(ell: usize, ns: &[usize]) -> Result<Vec<f64>> {
    ns.iter()
        .map(|&n| {
            let c = CltQuery::center(ell, n)?;
            Ok((ln_exact_prob(&c) + ell as f64 / 2.0 * (n as f64).ln()).exp())
        })
        .collect()
}
