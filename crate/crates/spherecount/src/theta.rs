//! Exact sum-of-squares counts r_n(m), primitive-point counts on spheres,
//! theta-coefficient sums, and the closed-form fast paths for the 2- and
//! 3-dimensional spheres.

use crate::arith::{factorize, Factorization, SpfSieve};
use crate::error::{Error, Result};
use rayon::prelude::*;
use std::io::Write;

/// Operation budget for table construction, measured as n * M^(3/2).
const R_TABLE_BUDGET: u64 = 30_000_000_000;

/// Budget for the brute-force enumeration oracle (single value).
const BRUTE_DIM_LIMIT: u32 = 6;
const BRUTE_M_LIMIT: u64 = 10_000;

/// Upper bound on T for the factorization-based fast counting paths.
const FAST_PATH_T_LIMIT: u64 = 1_000_000;

/// Dense table of r_n(m) for 0 <= m <= limit, exact integers.
#[derive(Debug, Clone)]
pub struct CoefficientTable {
    dim: u32,
    counts: Vec<u64>,
}

impl CoefficientTable {
    pub fn dim(&self) -> u32 {
        self.dim
    }

    pub fn limit(&self) -> u64 {
        (self.counts.len() - 1) as u64
    }

    pub fn r(&self, m: u64) -> u64 {
        self.counts[m as usize]
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// Plain CSV dump with header "m,count", one row per coefficient.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "m,count")?;
        for (m, c) in self.counts.iter().enumerate() {
            writeln!(w, "{m},{c}")?;
        }
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("write to Vec cannot fail");
        String::from_utf8(buf).expect("csv is ascii")
    }
}

/// Exact r_n(0..=limit) by iterated convolution with the one-dimensional
/// theta coefficients (1 at 0, 2 at positive squares). Cost O(n * limit^(3/2)),
/// parallel over disjoint output ranges.
pub fn r_table(n: u32, limit: u64) -> Result<CoefficientTable> {
    if n == 0 {
        return Err(Error::ZeroArgument);
    }
    let cost = (n as u64).saturating_mul(limit.isqrt().saturating_mul(limit.max(1)));
    if cost > R_TABLE_BUDGET {
        return Err(Error::BudgetExceeded {
            what: "r_table cost n * limit^(3/2)",
            value: cost,
            limit: R_TABLE_BUDGET,
        });
    }
    let len = limit as usize + 1;
    // r_1 layer
    let mut prev = vec![0u64; len];
    prev[0] = 1;
    let mut s = 1u64;
    while s * s <= limit {
        prev[(s * s) as usize] = 2;
        s += 1;
    }
    for _ in 1..n {
        let next: Vec<u64> = (0..len)
            .into_par_iter()
            .with_min_len(4096)
            .map(|m| {
                let mut acc = prev[m];
                let mut s = 1usize;
                while s * s <= m {
                    acc += 2 * prev[m - s * s];
                    s += 1;
                }
                acc
            })
            .collect();
        prev = next;
    }
    Ok(CoefficientTable {
        dim: n,
        counts: prev,
    })
}

/// Independent oracle: r_n(m) by nested enumeration of lattice vectors.
pub fn r_bruteforce(n: u32, m: u64) -> Result<u64> {
    if n == 0 || n > BRUTE_DIM_LIMIT {
        return Err(Error::BudgetExceeded {
            what: "r_bruteforce dimension",
            value: n as u64,
            limit: BRUTE_DIM_LIMIT as u64,
        });
    }
    if m > BRUTE_M_LIMIT {
        return Err(Error::BudgetExceeded {
            what: "r_bruteforce norm",
            value: m,
            limit: BRUTE_M_LIMIT,
        });
    }
    fn count(dims: u32, m: i64) -> u64 {
        if dims == 0 {
            return (m == 0) as u64;
        }
        let mut total = 0;
        let mut x = -((m as f64).sqrt() as i64) - 1;
        while x * x > m {
            x += 1;
        }
        while x * x <= m {
            total += count(dims - 1, m - x * x);
            x += 1;
        }
        total
    }
    Ok(count(n, m as i64))
}

/// Batch oracle: the whole table r_n(0..=limit) by a single enumeration of
/// the lattice ball of squared radius `limit`.
pub fn r_bruteforce_table(n: u32, limit: u64) -> Result<Vec<u64>> {
    if n == 0 {
        return Err(Error::ZeroArgument);
    }
    // ball volume guard, ~ (2 sqrt(limit))^n
    let radius = limit.isqrt() + 1;
    let mut cost = 1u64;
    for _ in 0..n {
        cost = cost.saturating_mul(2 * radius + 1);
    }
    if cost > 2_000_000_000 {
        return Err(Error::BudgetExceeded {
            what: "r_bruteforce_table ball volume",
            value: cost,
            limit: 2_000_000_000,
        });
    }
    let mut counts = vec![0u64; limit as usize + 1];
    // enumerate x >= 0 per coordinate; +-x collapse into a power of 2
    fn walk(dims: u32, norm: u64, limit: u64, mult: u64, counts: &mut [u64]) {
        if dims == 0 {
            counts[norm as usize] += mult;
            return;
        }
        walk(dims - 1, norm, limit, mult, counts);
        let mut x = 1u64;
        while norm + x * x <= limit {
            walk(dims - 1, norm + x * x, limit, mult * 2, counts);
            x += 1;
        }
    }
    walk(n, 0, limit, 1, &mut counts);
    Ok(counts)
}

/// Abstract source of the values r_{n+1}(q^2) for a sphere of dimension n.
pub trait RSquareSource: Sync {
    /// Sphere dimension n (points live in Z^{n+1}).
    fn sphere_dim(&self) -> u32;

    /// Exact r_{n+1}(q^2).
    fn r_square(&self, q: u64) -> Result<u64>;
}

/// Table-backed source, valid for q^2 up to the table limit.
pub struct TableSource {
    table: CoefficientTable,
}

impl TableSource {
    /// Builds a table of r_{n+1} up to q_max^2 for the n-sphere.
    pub fn build(n: u32, q_max: u64) -> Result<Self> {
        let table = r_table(n + 1, q_max * q_max)?;
        Ok(TableSource { table })
    }

    pub fn from_table(table: CoefficientTable) -> Self {
        TableSource { table }
    }

    pub fn table(&self) -> &CoefficientTable {
        &self.table
    }
}

impl RSquareSource for TableSource {
    fn sphere_dim(&self) -> u32 {
        self.table.dim - 1
    }

    fn r_square(&self, q: u64) -> Result<u64> {
        let m = q * q;
        if m > self.table.limit() {
            return Err(Error::BudgetExceeded {
                what: "table source argument q^2",
                value: m,
                limit: self.table.limit(),
            });
        }
        Ok(self.table.r(m))
    }
}

/// r_3(q^2) from the factorization of q, no lattice enumeration:
/// the divisor-sum formula 6 sum_{abc=q} mu(c) omega_{-1}(c) chi_0(b) b,
/// evaluated multiplicatively prime by prime.
pub fn hurwitz_r3sq_from(fact: &Factorization) -> u64 {
    let mut out = 6u64;
    for &(p, e) in &fact.factors {
        if p == 2 {
            // only c = 1 survives (omega_{-1}(2) = 0) and even b vanish
            continue;
        }
        // sigma of odd divisors of p^e minus omega_{-1}(p) * sigma of p^(e-1)
        let mut sigma_e = 0u64;
        let mut sigma_e1 = 0u64;
        let mut pw = 1u64;
        for i in 0..=e {
            sigma_e += pw;
            if i < e {
                sigma_e1 += pw;
            }
            pw *= p;
        }
        let w = if p % 4 == 1 { 1i64 } else { -1 };
        let local = sigma_e as i64 - w * sigma_e1 as i64;
        out *= local as u64;
    }
    out
}

/// r_3(q^2) for q >= 1, needing only the factorization of q.
pub fn hurwitz_r3sq(q: u64) -> Result<u64> {
    Ok(hurwitz_r3sq_from(&factorize(q)?))
}

/// Four-square count r_4(m) = 8 * sum of divisors of m not divisible by 4.
pub fn jacobi_r4(m: u64) -> Result<u64> {
    Ok(jacobi_r4_from(&factorize(m)?))
}

pub fn jacobi_r4_from(fact: &Factorization) -> u64 {
    let mut out = 8u64;
    for &(p, e) in &fact.factors {
        if p == 2 {
            out *= 3; // divisors 1 and 2 only
        } else {
            let mut sigma = 0u64;
            let mut pw = 1u64;
            for _ in 0..=e {
                sigma += pw;
                pw *= p;
            }
            out *= sigma;
        }
    }
    out
}

/// Closed-form source for S^2: r_3(q^2) via the divisor-sum formula.
pub struct HurwitzSource {
    spf: SpfSieve,
}

impl HurwitzSource {
    pub fn build(q_max: u64) -> Result<Self> {
        Ok(HurwitzSource {
            spf: SpfSieve::new(q_max.max(1))?,
        })
    }
}

impl RSquareSource for HurwitzSource {
    fn sphere_dim(&self) -> u32 {
        2
    }

    fn r_square(&self, q: u64) -> Result<u64> {
        Ok(hurwitz_r3sq_from(&self.spf.factorize(q)))
    }
}

/// Closed-form source for S^3: r_4(q^2) via the four-square formula, with the
/// exponents of q doubled.
pub struct JacobiSource {
    spf: SpfSieve,
}

impl JacobiSource {
    pub fn build(q_max: u64) -> Result<Self> {
        Ok(JacobiSource {
            spf: SpfSieve::new(q_max.max(1))?,
        })
    }
}

impl RSquareSource for JacobiSource {
    fn sphere_dim(&self) -> u32 {
        3
    }

    fn r_square(&self, q: u64) -> Result<u64> {
        let mut fact = self.spf.factorize(q);
        for f in &mut fact.factors {
            f.1 *= 2;
        }
        Ok(jacobi_r4_from(&fact))
    }
}

/// Number of primitive points p in Z^{n+1} with |p|^2 = q^2 and gcd(p, q) = 1,
/// by Möbius inversion over the gcd layers: sum_{d | q} mu(d) r_{n+1}((q/d)^2).
pub fn primitive_count(q: u64, src: &dyn RSquareSource) -> Result<u64> {
    if q == 0 {
        return Err(Error::ZeroArgument);
    }
    let fact = factorize(q)?;
    let mut acc: i128 = 0;
    for d in fact.divisors() {
        let mu = factorize(d)?.mobius();
        if mu != 0 {
            acc += mu as i128 * src.r_square(q / d)? as i128;
        }
    }
    debug_assert!(acc >= 0);
    Ok(acc as u64)
}

/// An exact count of lowest-terms rational points on S^n with denominator
/// at most `bound`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphereCount {
    pub dim: u32,
    pub bound: f64,
    pub value: u64,
}

fn check_sphere_dim(n: u32) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!(
            "sphere dimension must be at least 2, got {n}"
        )));
    }
    Ok(())
}

/// Prefix table of primitive counts: entry q holds N(S^n; q) for 0 <= q <= q_max.
/// Sums stay below 10^18 at every supported scale, within u64 range.
pub(crate) fn sphere_prefix(src: &dyn RSquareSource, q_max: u64) -> Result<Vec<u64>> {
    let spf = SpfSieve::new(q_max.max(1))?;
    let mut out = Vec::with_capacity(q_max as usize + 1);
    out.push(0u64);
    let mut acc = 0u64;
    for q in 1..=q_max {
        let fact = spf.factorize(q);
        let mut p: i128 = 0;
        for d in fact.divisors() {
            let mu = spf.factorize(d).mobius();
            if mu != 0 {
                p += mu as i128 * src.r_square(q / d)? as i128;
            }
        }
        acc += p as u64;
        out.push(acc);
    }
    Ok(out)
}

/// Prefix table of theta sums: entry q holds sum_{j<=q} r_{n+1}(j^2).
pub(crate) fn theta_prefix(src: &dyn RSquareSource, q_max: u64) -> Result<Vec<u64>> {
    let mut out = Vec::with_capacity(q_max as usize + 1);
    out.push(0u64);
    let mut acc = 0u64;
    for q in 1..=q_max {
        acc += src.r_square(q)?;
        out.push(acc);
    }
    Ok(out)
}

/// Best available r-source for the n-sphere with denominators up to q_max.
pub fn best_source(n: u32, q_max: u64) -> Result<Box<dyn RSquareSource>> {
    check_sphere_dim(n)?;
    match n {
        2 if q_max <= FAST_PATH_T_LIMIT => Ok(Box::new(HurwitzSource::build(q_max)?)),
        3 if q_max <= FAST_PATH_T_LIMIT => Ok(Box::new(JacobiSource::build(q_max)?)),
        _ => Ok(Box::new(TableSource::build(n, q_max)?)),
    }
}

/// Exact N(S^n; T) via the coefficient-table path. Non-integral bounds use
/// floor semantics.
pub fn count_sphere(n: u32, t: f64) -> Result<SphereCount> {
    check_sphere_dim(n)?;
    if !(t >= 0.0) {
        return Err(Error::InvalidParameter(format!("bound T = {t} must be nonnegative")));
    }
    let q_max = t.floor() as u64;
    let value = if q_max == 0 {
        0
    } else {
        let src = TableSource::build(n, q_max)?;
        *sphere_prefix(&src, q_max)?.last().unwrap()
    };
    Ok(SphereCount {
        dim: n,
        bound: t,
        value,
    })
}

/// Exact N(S^n; T) for n in {2, 3} via the factorization-based closed forms.
pub fn count_sphere_fast(n: u32, t: f64) -> Result<SphereCount> {
    check_sphere_dim(n)?;
    if !(t >= 0.0) {
        return Err(Error::InvalidParameter(format!("bound T = {t} must be nonnegative")));
    }
    let q_max = t.floor() as u64;
    if q_max > FAST_PATH_T_LIMIT {
        return Err(Error::BudgetExceeded {
            what: "count_sphere_fast bound",
            value: q_max,
            limit: FAST_PATH_T_LIMIT,
        });
    }
    let value = if q_max == 0 {
        0
    } else {
        let src: Box<dyn RSquareSource> = match n {
            2 => Box::new(HurwitzSource::build(q_max)?),
            3 => Box::new(JacobiSource::build(q_max)?),
            _ => {
                return Err(Error::InvalidParameter(format!(
                    "count_sphere_fast supports n in {{2, 3}}, got {n}"
                )))
            }
        };
        *sphere_prefix(src.as_ref(), q_max)?.last().unwrap()
    };
    Ok(SphereCount {
        dim: n,
        bound: t,
        value,
    })
}

/// Exact theta-coefficient sum sum_{q <= T} r_{n+1}(q^2).
pub fn count_theta(n: u32, t: f64) -> Result<u64> {
    check_sphere_dim(n)?;
    if !(t >= 0.0) {
        return Err(Error::InvalidParameter(format!("bound T = {t} must be nonnegative")));
    }
    let q_max = t.floor() as u64;
    if q_max == 0 {
        return Ok(0);
    }
    let src = best_source(n, q_max)?;
    Ok(*theta_prefix(src.as_ref(), q_max)?.last().unwrap())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn r_table_small_values() {
        let t2 = r_table(2, 5).unwrap();
        assert_eq!(t2.counts(), &[1, 4, 4, 0, 4, 8]);
        let t3 = r_table(3, 9).unwrap();
        assert_eq!(t3.r(1), 6);
        assert_eq!(t3.r(2), 12);
        assert_eq!(t3.r(3), 8);
        assert_eq!(t3.r(9), 30);
        let t4 = r_table(4, 1).unwrap();
        assert_eq!(t4.r(1), 8);
    }

    #[test]
    fn r_bruteforce_examples() {
        assert_eq!(r_bruteforce(3, 9).unwrap(), 30);
        for n in 1..=5 {
            assert_eq!(r_bruteforce(n, 0).unwrap(), 1);
        }
        assert_eq!(r_bruteforce(2, 3).unwrap(), 0);
        assert!(r_bruteforce(7, 1).is_err());
        assert!(r_bruteforce(2, 100_000).is_err());
    }

    #[test]
    fn r_table_matches_bruteforce() {
        for n in 1..=6u32 {
            let table = r_table(n, 200).unwrap();
            let brute = r_bruteforce_table(n, 200).unwrap();
            assert_eq!(table.counts(), &brute[..], "n = {n}");
        }
    }

    #[test]
    fn bruteforce_table_matches_pointwise() {
        for n in 1..=4u32 {
            let table = r_bruteforce_table(n, 50).unwrap();
            for m in 0..=50u64 {
                assert_eq!(table[m as usize], r_bruteforce(n, m).unwrap(), "n={n} m={m}");
            }
        }
    }

    #[test]
    fn primitive_count_examples() {
        let src = TableSource::build(2, 3).unwrap();
        assert_eq!(primitive_count(2, &src).unwrap(), 0);
        assert_eq!(primitive_count(3, &src).unwrap(), 24);
        assert_eq!(primitive_count(1, &src).unwrap(), 6);
    }

    #[test]
    fn count_sphere_examples() {
        assert_eq!(count_sphere(2, 1.0).unwrap().value, 6);
        assert_eq!(count_sphere(2, 3.0).unwrap().value, 30);
        assert_eq!(count_sphere(2, 2.5).unwrap().value, 6);
        assert!(count_sphere(1, 3.0).is_err());
    }

    #[test]
    fn count_theta_examples() {
        assert_eq!(count_theta(2, 3.0).unwrap(), 42);
        assert_eq!(count_theta(3, 0.0).unwrap(), 0);
        assert_eq!(count_theta(3, 2.0).unwrap(), 32);
    }

    #[test]
    fn hurwitz_examples() {
        assert_eq!(hurwitz_r3sq(1).unwrap(), 6);
        assert_eq!(hurwitz_r3sq(2).unwrap(), 6);
        assert_eq!(hurwitz_r3sq(3).unwrap(), 30);
        for q in 1..=60u64 {
            assert_eq!(
                hurwitz_r3sq(q).unwrap(),
                r_bruteforce(3, q * q).unwrap(),
                "q = {q}"
            );
        }
    }

    #[test]
    fn jacobi_examples() {
        assert_eq!(jacobi_r4(1).unwrap(), 8);
        assert_eq!(jacobi_r4(2).unwrap(), 24);
        assert_eq!(jacobi_r4(4).unwrap(), 24);
        for m in 1..=200u64 {
            assert_eq!(jacobi_r4(m).unwrap(), r_bruteforce(4, m).unwrap(), "m = {m}");
        }
    }

    #[test]
    fn fast_and_table_paths_agree() {
        for t in [3.0, 10.0, 100.0, 1000.0] {
            assert_eq!(
                count_sphere_fast(2, t).unwrap().value,
                count_sphere(2, t).unwrap().value,
                "n=2 T={t}"
            );
        }
        for t in [2.0, 10.0, 100.0] {
            assert_eq!(
                count_sphere_fast(3, t).unwrap().value,
                count_sphere(3, t).unwrap().value,
                "n=3 T={t}"
            );
        }
    }

    #[test]
    fn gcd_layer_identity() {
        // r_{n+1}(q^2) = sum_{d | q} primitive_count(n, q/d)
        for n in [2u32, 3, 4] {
            let src = TableSource::build(n, 300).unwrap();
            for q in 1..=300u64 {
                let total: u64 = crate::arith::divisors(q)
                    .unwrap()
                    .iter()
                    .map(|&d| primitive_count(q / d, &src).unwrap())
                    .sum();
                assert_eq!(total, src.r_square(q).unwrap(), "n={n} q={q}");
            }
        }
    }

    #[test]
    fn count_sphere_monotone_and_floor() {
        let mut last = 0;
        for q in 1..=20u64 {
            let v = count_sphere(2, q as f64).unwrap().value;
            assert!(v >= last);
            assert_eq!(v, count_sphere(2, q as f64 + 0.99).unwrap().value);
            last = v;
        }
    }

    #[test]
    fn csv_dump_format() {
        let t = r_table(2, 2).unwrap();
        assert_eq!(t.to_csv(), "m,count\n0,1\n1,4\n2,4\n");
    }
}
