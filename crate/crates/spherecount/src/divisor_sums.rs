//! Twisted divisor sums, modified divisor sums for half-integral weight,
//! their partial sums over square arguments, the square-argument convolution
//! identity, and Dirichlet hyperbola summation.

use crate::arith::{factorize, mobius_sieve, SpfSieve};
use crate::characters::{kronecker_shimura, DirichletCharacter};
use crate::error::{Error, Result};
use crate::lfunctions::{HalfInteger, Kahan};
use std::collections::HashMap;
use std::sync::Arc;

/// Budget for the direct partial sums (divisor work per summand).
const DIRECT_SUM_LIMIT: u64 = 1_000_000;

/// A completely multiplicative function as an evaluation handle.
///
/// Construction spot-checks f(1) = 1 and multiplicativity on a few pairs;
/// complete multiplicativity beyond that is the caller's promise.
#[derive(Clone)]
pub struct CmFunction {
    f: Arc<dyn Fn(u64) -> f64 + Send + Sync>,
}

impl CmFunction {
    pub fn new(f: impl Fn(u64) -> f64 + Send + Sync + 'static) -> Result<Self> {
        if f(1) != 1.0 {
            return Err(Error::InvalidParameter(
                "completely multiplicative function must have f(1) = 1".into(),
            ));
        }
        for (a, b) in [(2u64, 3u64), (2, 2), (3, 5), (4, 9), (6, 35)] {
            let lhs = f(a * b);
            let rhs = f(a) * f(b);
            let scale = 1.0f64.max(lhs.abs()).max(rhs.abs());
            if (lhs - rhs).abs() > 1e-9 * scale {
                return Err(Error::InvalidParameter(format!(
                    "multiplicativity spot-check failed at ({a}, {b})"
                )));
            }
        }
        Ok(CmFunction { f: Arc::new(f) })
    }

    pub fn eval(&self, n: u64) -> f64 {
        (self.f)(n)
    }

    /// The constant function 1.
    pub fn one() -> Self {
        CmFunction {
            f: Arc::new(|_| 1.0),
        }
    }

    /// n -> n^k.
    pub fn power(k: u32) -> Self {
        CmFunction {
            f: Arc::new(move |n| (n as f64).powi(k as i32)),
        }
    }

    /// n -> chi(n).
    pub fn character(chi: &DirichletCharacter) -> Self {
        let chi = chi.clone();
        CmFunction {
            f: Arc::new(move |n| chi.eval(n as i64) as f64),
        }
    }

    /// n -> chi(n) n^k.
    pub fn twisted_power(chi: &DirichletCharacter, k: u32) -> Self {
        let chi = chi.clone();
        CmFunction {
            f: Arc::new(move |n| chi.eval(n as i64) as f64 * (n as f64).powi(k as i32)),
        }
    }

    /// Extend prescribed prime values multiplicatively; primes absent from the
    /// map take `default`.
    pub fn from_prime_values(values: HashMap<u64, f64>, default: f64) -> Self {
        CmFunction {
            f: Arc::new(move |n| {
                let mut out = 1.0;
                for &(p, e) in &factorize(n).expect("n >= 1").factors {
                    out *= values.get(&p).copied().unwrap_or(default).powi(e as i32);
                }
                out
            }),
        }
    }
}

/// Parameters of the twisted divisor sum sigma_s(chi1, chi2, n).
#[derive(Debug, Clone)]
pub struct DivisorSumSpec {
    pub chi1: DirichletCharacter,
    pub chi2: DirichletCharacter,
    /// The power on the chi1-side divisor.
    pub s: u32,
}

/// sigma_s(chi1, chi2, n) = sum_{d | n} chi1(d) chi2(n/d) d^s.
pub fn sigma_twisted(spec: &DivisorSumSpec, n: u64) -> Result<f64> {
    if n == 0 {
        return Err(Error::ZeroArgument);
    }
    let mut acc = Kahan::default();
    for d in factorize(n)?.divisors() {
        let v = spec.chi1.eval(d as i64) * spec.chi2.eval((n / d) as i64);
        if v != 0 {
            acc.add(v as f64 * (d as f64).powi(spec.s as i32));
        }
    }
    Ok(acc.value())
}

fn sigma_twisted_from(spec: &DivisorSumSpec, fact: &crate::arith::Factorization) -> f64 {
    let n = fact.value;
    let mut acc = Kahan::default();
    for d in fact.divisors() {
        let v = spec.chi1.eval(d as i64) * spec.chi2.eval((n / d) as i64);
        if v != 0 {
            acc.add(v as f64 * (d as f64).powi(spec.s as i32));
        }
    }
    acc.value()
}

/// Reference implementation of sum_{q <= T} sigma_s(chi1, chi2, q^2) by
/// direct divisor enumeration.
pub fn sum_sigma_squares_direct(spec: &DivisorSumSpec, t: u64) -> Result<f64> {
    if t == 0 {
        return Err(Error::ZeroArgument);
    }
    if t > DIRECT_SUM_LIMIT {
        return Err(Error::BudgetExceeded {
            what: "sum_sigma_squares_direct bound",
            value: t,
            limit: DIRECT_SUM_LIMIT,
        });
    }
    let spf = SpfSieve::new(t)?;
    let mut acc = Kahan::default();
    for q in 1..=t {
        let mut fact = spf.factorize(q);
        for f in &mut fact.factors {
            f.1 *= 2;
        }
        fact.value = q * q;
        acc.add(sigma_twisted_from(spec, &fact));
    }
    Ok(acc.value())
}

/// Dirichlet hyperbola method: sum_{b c <= X} f(b) g(c) from pointwise values
/// and exact partial-sum oracles, in O(sqrt(X)) oracle calls.
pub fn hyperbola_sum<T, F, FP, G, GP>(f: F, f_partial: FP, g: G, g_partial: GP, x: f64) -> T
where
    T: Copy
        + Default
        + std::ops::AddAssign
        + std::ops::SubAssign
        + std::ops::Mul<Output = T>,
    F: Fn(u64) -> T,
    FP: Fn(u64) -> T,
    G: Fn(u64) -> T,
    GP: Fn(u64) -> T,
{
    let x = if x < 0.0 { 0 } else { x.floor() as u64 };
    let mut acc = T::default();
    if x == 0 {
        return acc;
    }
    let s = x.isqrt();
    for b in 1..=s {
        acc += f(b) * g_partial(x / b);
    }
    for c in 1..=s {
        acc += g(c) * f_partial(x / c);
    }
    acc -= f_partial(s) * g_partial(s);
    acc
}

/// The square-argument convolution identity: with h = f * g (Dirichlet
/// convolution of completely multiplicative f, g),
///
///   sum_{q <= T} h(q^2) = sum_{a <= T} |mu(a)| f(a) g(a) sum_{bc <= T/a} f^2(b) g^2(c),
///
/// with the inner sum evaluated by the hyperbola method over prefix tables.
pub fn convolution_sum_squares(f: &CmFunction, g: &CmFunction, t: u64) -> Result<f64> {
    if t == 0 {
        return Err(Error::ZeroArgument);
    }
    let n = t as usize;
    let mu = mobius_sieve(t)?;
    let mut fv = vec![0.0f64; n + 1];
    let mut gv = vec![0.0f64; n + 1];
    let mut pf2 = vec![0.0f64; n + 1];
    let mut pg2 = vec![0.0f64; n + 1];
    for i in 1..=n {
        fv[i] = f.eval(i as u64);
        gv[i] = g.eval(i as u64);
        pf2[i] = pf2[i - 1] + fv[i] * fv[i];
        pg2[i] = pg2[i - 1] + gv[i] * gv[i];
    }
    let mut acc = Kahan::default();
    for a in 1..=n {
        if mu[a] == 0 {
            continue;
        }
        let w = fv[a] * gv[a];
        if w == 0.0 {
            continue;
        }
        let inner: f64 = hyperbola_sum(
            |b| fv[b as usize] * fv[b as usize],
            |y| pf2[y as usize],
            |c| gv[c as usize] * gv[c as usize],
            |y| pg2[y as usize],
            (t / a as u64) as f64,
        );
        acc.add(w * inner);
    }
    Ok(acc.value())
}

/// Fast path for sum_{q <= T} sigma_k(chi1, chi2, q^2): the convolution
/// identity with exact integer partial-sum oracles for the character-twisted
/// power sums, O(T) total hyperbola work.
pub fn sum_sigma_squares(spec: &DivisorSumSpec, t: u64) -> Result<f64> {
    if t == 0 {
        return Err(Error::ZeroArgument);
    }
    let k = spec.s;
    // i128 headroom for the prefix sums sum b^{2k} <= T^{2k+1}
    let bits = (2 * k as u64 + 1) * (64 - t.leading_zeros() as u64);
    if bits > 120 {
        return Err(Error::BudgetExceeded {
            what: "sum_sigma_squares exponent bits (2k+1) log2 T",
            value: bits,
            limit: 120,
        });
    }
    let n = t as usize;
    let mu = mobius_sieve(t)?;
    // chi^2 of a real character is the coprimality indicator
    let ind1: Vec<i128> = (0..=n)
        .map(|i| (spec.chi1.eval(i as i64) != 0) as i128)
        .collect();
    let ind2: Vec<i128> = (0..=n)
        .map(|i| (spec.chi2.eval(i as i64) != 0) as i128)
        .collect();
    let mut p1 = vec![0i128; n + 1];
    let mut p2 = vec![0i128; n + 1];
    for i in 1..=n {
        p1[i] = p1[i - 1] + ind1[i] * (i as i128).pow(2 * k);
        p2[i] = p2[i - 1] + ind2[i];
    }
    let mut acc = Kahan::default();
    for a in 1..=n {
        if mu[a] == 0 {
            continue;
        }
        let v = spec.chi1.eval(a as i64) * spec.chi2.eval(a as i64);
        if v == 0 {
            continue;
        }
        let inner: i128 = hyperbola_sum(
            |b| ind1[b as usize] * (b as i128).pow(2 * k),
            |y| p1[y as usize],
            |c| ind2[c as usize],
            |y| p2[y as usize],
            (t / a as u64) as f64,
        );
        acc.add(v as f64 * (a as f64).powi(k as i32) * inner as f64);
    }
    Ok(acc.value())
}

/// Modified divisor sum for half-integral weight k:
///
///   beta_k(m) = m^(2k-2) sum_{ab | m} mu(a) (s_k/a) a^(1/2-k) b^(2-2k),  m odd.
pub fn beta(k: HalfInteger, m: u64) -> Result<f64> {
    if m == 0 {
        return Err(Error::ZeroArgument);
    }
    if m % 2 == 0 {
        return Err(Error::EvenArgument {
            what: "argument of the modified divisor sum",
            value: m as i64,
        });
    }
    if k.twice() < 5 {
        return Err(Error::InvalidParameter(format!(
            "beta requires k >= 5/2, got {k}"
        )));
    }
    let fact = factorize(m)?;
    Ok(beta_from(k, &fact))
}

fn beta_from(k: HalfInteger, fact: &crate::arith::Factorization) -> f64 {
    let twice = k.twice() as i32;
    let sk = k.sign();
    let m = fact.value;
    let mut acc = Kahan::default();
    for a in fact.divisors() {
        let fa = factorize(a).expect("divisor of valid m");
        let mu = fa.mobius();
        if mu == 0 {
            continue;
        }
        let symbol = kronecker_shimura(sk, a as i64).expect("a odd");
        if symbol == 0 {
            continue;
        }
        // a^(1/2 - k) = sqrt(a)^(1 - 2k)
        let coef = (mu * symbol as i64) as f64 * (a as f64).sqrt().powi(1 - twice);
        for b in factorize(m / a).expect("divisor").divisors() {
            acc.add(coef * (b as f64).powi(2 - twice));
        }
    }
    (m as f64).powi(twice - 2) * acc.value()
}

/// Partial sums of the modified divisor sum over odd arguments:
/// B_k(T) = sum over odd m <= T of beta_k(m), compensated accumulation.
pub fn sum_beta(k: HalfInteger, t: u64) -> Result<f64> {
    if t == 0 {
        return Err(Error::ZeroArgument);
    }
    if t > DIRECT_SUM_LIMIT {
        return Err(Error::BudgetExceeded {
            what: "sum_beta bound",
            value: t,
            limit: DIRECT_SUM_LIMIT,
        });
    }
    if k.twice() < 5 {
        return Err(Error::InvalidParameter(format!(
            "sum_beta requires k >= 5/2, got {k}"
        )));
    }
    let spf = SpfSieve::new(t)?;
    let twice = k.twice() as i32;
    let sk = k.sign();
    let mut acc = Kahan::default();
    let mut m = 1u64;
    while m <= t {
        let fact = spf.factorize(m);
        let mut inner = Kahan::default();
        for a in fact.divisors() {
            let fa = spf.factorize(a);
            let mu = fa.mobius();
            if mu == 0 {
                continue;
            }
            let symbol = kronecker_shimura(sk, a as i64).expect("a odd");
            if symbol == 0 {
                continue;
            }
            let coef = (mu * symbol as i64) as f64 * (a as f64).sqrt().powi(1 - twice);
            for b in spf.factorize(m / a).divisors() {
                inner.add(coef * (b as f64).powi(2 - twice));
            }
        }
        acc.add((m as f64).powi(twice - 2) * inner.value());
        m += 2;
    }
    Ok(acc.value())
}
