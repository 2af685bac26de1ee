//! Identity verification, asymptotic remainder scans, main-term constant
//! fitting, and remainder-exponent estimation.

use crate::arith::mobius_sieve;
use crate::characters::DirichletCharacter;
use crate::divisor_sums::{sum_beta, sum_sigma_squares, DivisorSumSpec};
use crate::error::{Error, Result};
use crate::lfunctions::{bkt_constant, skt_constant, HalfInteger};
use crate::theta::{best_source, sphere_prefix, theta_prefix};
use serde::Serialize;

/// One row of an asymptotic scan.
#[derive(Debug, Clone, Serialize)]
pub struct ScanRecord {
    pub n: u32,
    #[serde(rename = "T")]
    pub t: u64,
    /// Exact N(S^n; T).
    pub count: u64,
    /// c * T^n for the supplied or fitted constant.
    pub main_term: f64,
    /// count - main_term.
    pub remainder: f64,
    /// remainder / T^(n-1).
    pub normalized: f64,
}

/// Outcome of a main-term fit N(T) ~ c T^n + b T^(n-1) log^alpha T.
#[derive(Debug, Clone)]
pub struct FitResult {
    /// Fitted leading constant c.
    pub constant: f64,
    /// Fitted lower-order coefficient b.
    pub secondary: f64,
    /// Root-mean-square residual of the fit.
    pub residual_norm: f64,
    pub grid_size: usize,
}

/// Slope of the remainder in log-log coordinates, or the marker that every
/// remainder was exactly zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RemainderSlope {
    Exact,
    Slope(f64),
}

/// Logarithm exponent alpha_n of the remainder bound T^(n-1) log^alpha T.
pub fn alpha_exponent(n: u32) -> u32 {
    match n {
        2 => 3,
        3 => 1,
        _ if n % 2 == 0 => 1,
        _ => 0,
    }
}

/// Both directions of the exact counting identity linking theta-coefficient
/// sums and sphere counts:
///
///   residual_1 = N_theta(T) - sum_{d <= T} N(S^n; T/d)
///   residual_2 = N(S^n; T) - sum_{d <= T} mu(d) N_theta(T/d)
///
/// Both are exactly zero for every n and T.
pub fn verify_lemma31(n: u32, t: f64) -> Result<(i128, i128)> {
    if !(t >= 1.0) {
        return Err(Error::InvalidParameter(format!("T = {t} must be at least 1")));
    }
    let q_max = t.floor() as u64;
    let src = best_source(n, q_max)?;
    let sphere = sphere_prefix(src.as_ref(), q_max)?;
    let theta = theta_prefix(src.as_ref(), q_max)?;
    let mu = mobius_sieve(q_max)?;
    let mut res1 = theta[q_max as usize] as i128;
    let mut res2 = sphere[q_max as usize] as i128;
    for d in 1..=q_max {
        res1 -= sphere[(q_max / d) as usize] as i128;
        res2 -= mu[d as usize] as i128 * theta[(q_max / d) as usize] as i128;
    }
    Ok((res1, res2))
}

/// Exact counts N(S^n; T) for every grid point, via one shared prefix table
/// on the fastest valid path for n.
pub fn sphere_counts_on_grid(n: u32, grid: &[u64]) -> Result<Vec<u64>> {
    validate_grid(grid)?;
    let q_max = *grid.last().unwrap();
    let src = best_source(n, q_max)?;
    let prefix = sphere_prefix(src.as_ref(), q_max)?;
    Ok(grid.iter().map(|&t| prefix[t as usize]).collect())
}

fn validate_grid(grid: &[u64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::DegenerateGrid("empty grid".into()));
    }
    if grid[0] == 0 {
        return Err(Error::DegenerateGrid("grid points must be positive".into()));
    }
    if grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::DegenerateGrid("grid must be strictly increasing".into()));
    }
    Ok(())
}

/// Geometric grid from `start` to `stop` with the given ratio (default
/// choice for log-log fits: uniform leverage).
pub fn geometric_grid(start: u64, stop: u64, ratio: f64) -> Result<Vec<u64>> {
    if start == 0 || stop < start {
        return Err(Error::DegenerateGrid(format!(
            "invalid geometric grid [{start}, {stop}]"
        )));
    }
    if !(ratio > 1.0) {
        return Err(Error::DegenerateGrid(format!("ratio {ratio} must exceed 1")));
    }
    let mut grid = Vec::new();
    let mut t = start;
    while t <= stop {
        grid.push(t);
        let next = ((t as f64) * ratio).round() as u64;
        t = next.max(t + 1);
    }
    Ok(grid)
}

/// Asymptotic scan: one record per grid point. The main-term constant is
/// either supplied (closed form available for n = 2) or fitted on the grid.
pub fn scan_remainder(n: u32, grid: &[u64], constant: Option<f64>) -> Result<Vec<ScanRecord>> {
    validate_grid(grid)?;
    let counts = sphere_counts_on_grid(n, grid)?;
    let c = match constant {
        Some(c) => c,
        None => {
            let pairs: Vec<(u64, f64)> = grid
                .iter()
                .zip(&counts)
                .map(|(&t, &v)| (t, v as f64))
                .collect();
            fit_main_constant_from(n, &pairs)?.constant
        }
    };
    Ok(grid
        .iter()
        .zip(&counts)
        .map(|(&t, &count)| {
            let tf = t as f64;
            let main_term = c * tf.powi(n as i32);
            let remainder = count as f64 - main_term;
            ScanRecord {
                n,
                t,
                count,
                main_term,
                remainder,
                normalized: remainder / tf.powi(n as i32 - 1),
            }
        })
        .collect())
}

/// Least-squares fit of N(T) = c T^n + b T^(n-1) log^alpha T over exact
/// counts computed on the grid.
pub fn fit_main_constant(n: u32, grid: &[u64]) -> Result<FitResult> {
    let counts = sphere_counts_on_grid(n, grid)?;
    let pairs: Vec<(u64, f64)> = grid
        .iter()
        .zip(&counts)
        .map(|(&t, &v)| (t, v as f64))
        .collect();
    fit_main_constant_from(n, &pairs)
}

/// Same fit over externally supplied (T, count) pairs.
pub fn fit_main_constant_from(n: u32, pairs: &[(u64, f64)]) -> Result<FitResult> {
    if pairs.len() < 4 {
        return Err(Error::DegenerateGrid(format!(
            "main-term fit needs at least 4 grid points, got {}",
            pairs.len()
        )));
    }
    let t_min = pairs.iter().map(|p| p.0).min().unwrap();
    let t_max = pairs.iter().map(|p| p.0).max().unwrap();
    if t_max < 10 * t_min {
        return Err(Error::DegenerateGrid(format!(
            "largest grid point {t_max} must be at least 10x the smallest {t_min}"
        )));
    }
    let alpha = alpha_exponent(n) as i32;
    let cols: Vec<(f64, f64)> = pairs
        .iter()
        .map(|&(t, _)| {
            let tf = t as f64;
            (tf.powi(n as i32), tf.powi(n as i32 - 1) * tf.ln().powi(alpha))
        })
        .collect();
    // scale columns for conditioning
    let s1 = cols.iter().map(|c| c.0.abs()).fold(0.0, f64::max).max(1.0);
    let s2 = cols.iter().map(|c| c.1.abs()).fold(0.0, f64::max).max(1.0);
    let (mut a11, mut a12, mut a22, mut b1, mut b2) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for (&(_, y), &(x1, x2)) in pairs.iter().zip(&cols) {
        let (u, v) = (x1 / s1, x2 / s2);
        a11 += u * u;
        a12 += u * v;
        a22 += v * v;
        b1 += u * y;
        b2 += v * y;
    }
    let det = a11 * a22 - a12 * a12;
    if det.abs() < 1e-12 * a11 * a22 {
        return Err(Error::DegenerateGrid(
            "normal equations are singular; grid has no leverage on the log term".into(),
        ));
    }
    let c = (b1 * a22 - b2 * a12) / det / s1;
    let b = (a11 * b2 - a12 * b1) / det / s2;
    let mut rss = 0.0;
    for (&(_, y), &(x1, x2)) in pairs.iter().zip(&cols) {
        let r = y - c * x1 - b * x2;
        rss += r * r;
    }
    Ok(FitResult {
        constant: c,
        secondary: b,
        residual_norm: (rss / pairs.len() as f64).sqrt(),
        grid_size: pairs.len(),
    })
}

/// Slope of log |remainder| against log T by least squares.
///
/// Remainders of counting problems oscillate, so on dense grids (>= 12
/// nonzero points) the slope is taken over the envelope: the grid is split
/// into geometric bins and only the largest |remainder| per bin enters the
/// regression. Sparse grids fall back to a plain fit over all points.
pub fn fit_remainder_exponent(records: &[ScanRecord]) -> Result<RemainderSlope> {
    if records.iter().all(|r| r.remainder == 0.0) {
        return Ok(RemainderSlope::Exact);
    }
    let mut nz: Vec<&ScanRecord> = records.iter().filter(|r| r.remainder != 0.0).collect();
    nz.sort_by_key(|r| r.t);
    if nz.len() < 4 {
        return Err(Error::DegenerateGrid(format!(
            "remainder-exponent fit needs at least 4 nonzero remainders, got {}",
            nz.len()
        )));
    }
    let pts: Vec<(f64, f64)> = if nz.len() >= 12 {
        let bins = (nz.len() / 3).clamp(4, 6);
        let lo = (nz[0].t as f64).ln();
        let span = (nz[nz.len() - 1].t as f64).ln() - lo;
        let mut best: Vec<Option<(f64, f64)>> = vec![None; bins];
        for r in &nz {
            let x = (r.t as f64).ln();
            let b = (((x - lo) / span) * bins as f64) as usize;
            let b = b.min(bins - 1);
            let y = r.remainder.abs();
            if best[b].is_none_or(|(_, v)| y > v) {
                best[b] = Some((x, y));
            }
        }
        best.into_iter().flatten().map(|(x, y)| (x, y.ln())).collect()
    } else {
        nz.iter()
            .map(|r| ((r.t as f64).ln(), r.remainder.abs().ln()))
            .collect()
    };
    let m = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return Err(Error::DegenerateGrid("no spread in log T".into()));
    }
    Ok(RemainderSlope::Slope(sxy / sxx))
}

/// Relative error of S_k(T)/T^(2k+1) against its closed-form constant,
/// using the fast summation path. Requires chi1 real (guaranteed here).
pub fn verify_skt(
    chi1: &DirichletCharacter,
    chi2: &DirichletCharacter,
    k: u32,
    t: u64,
) -> Result<f64> {
    let spec = DivisorSumSpec {
        chi1: chi1.clone(),
        chi2: chi2.clone(),
        s: k,
    };
    let sum = sum_sigma_squares(&spec, t)?;
    let constant = skt_constant(chi1, chi2, k)?;
    let normalized = sum / (t as f64).powi(2 * k as i32 + 1);
    Ok((normalized - constant).abs() / constant)
}

/// Relative error of B_k(T)/T^(2k-1) against its closed-form constant.
pub fn verify_bkt(k: HalfInteger, t: u64) -> Result<f64> {
    let sum = sum_beta(k, t)?;
    let constant = bkt_constant(k)?;
    let normalized = sum / (t as f64).powi(k.twice() as i32 - 1);
    Ok((normalized - constant).abs() / constant)
}

/// Decimal formatting with 12 significant digits, for stable CSV output.
pub fn format_sig12(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let exp = x.abs().log10().floor() as i32;
    let prec = (11 - exp).max(0) as usize;
    format!("{x:.prec$}")
}

/// CSV encoding of scan records, header "n,T,count,main_term,remainder,normalized".
pub fn records_to_csv(records: &[ScanRecord]) -> String {
    let mut out = String::from("n,T,count,main_term,remainder,normalized\n");
    for r in records {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.n,
            r.t,
            r.count,
            format_sig12(r.main_term),
            format_sig12(r.remainder),
            format_sig12(r.normalized),
        ));
    }
    out
}

/// JSON encoding: an array of flat objects with the same keys as the CSV.
pub fn records_to_json(records: &[ScanRecord]) -> String {
    serde_json::to_string_pretty(records).expect("scan records serialize")
}
