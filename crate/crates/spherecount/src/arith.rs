//! Exact integer arithmetic: factorization, divisors, Möbius, totient, sieves.
//!
//! Everything here is deterministic and pure. Counts and accumulators in the
//! rest of the crate reach magnitudes up to 10^18, which still fits `u64`;
//! signed intermediate sums (Möbius-weighted) use `i128`.

use crate::error::{Error, Result};
use std::sync::OnceLock;

/// Trial division uses primes up to this bound. Inputs whose second-largest
/// prime factor exceeds it fall back to a deterministic Miller-Rabin check of
/// the remaining cofactor.
pub const TRIAL_PRIME_LIMIT: u64 = 10_000_000;

/// Memory guard for [`mobius_sieve`] and [`SpfSieve::new`].
pub const SIEVE_LIMIT: u64 = 1 << 31;

static SMALL_PRIMES: OnceLock<Vec<u32>> = OnceLock::new();

fn small_primes() -> &'static [u32] {
    SMALL_PRIMES.get_or_init(|| {
        let limit = TRIAL_PRIME_LIMIT as usize;
        let mut composite = vec![false; limit + 1];
        let mut primes = Vec::new();
        for p in 2..=limit {
            if !composite[p] {
                primes.push(p as u32);
                let mut q = p * p;
                while q <= limit {
                    composite[q] = true;
                    q += p;
                }
            }
        }
        primes
    })
}

/// Prime-power decomposition of a positive integer.
///
/// Invariants: `value` equals the product of `prime^exponent`, primes are
/// strictly increasing, every exponent is at least 1. `factorize(1)` has an
/// empty factor list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub value: u64,
    pub factors: Vec<(u64, u32)>,
}

impl Factorization {
    /// All divisors of `value`, ascending.
    pub fn divisors(&self) -> Vec<u64> {
        let mut divs = vec![1u64];
        for &(p, e) in &self.factors {
            let len = divs.len();
            let mut pe = 1u64;
            for _ in 0..e {
                pe *= p;
                for i in 0..len {
                    divs.push(divs[i] * pe);
                }
            }
        }
        divs.sort_unstable();
        divs
    }

    /// Number of divisors sigma_0(value).
    pub fn divisor_count(&self) -> u64 {
        self.factors.iter().map(|&(_, e)| e as u64 + 1).product()
    }

    pub fn mobius(&self) -> i64 {
        if self.factors.iter().any(|&(_, e)| e >= 2) {
            0
        } else if self.factors.len() % 2 == 0 {
            1
        } else {
            -1
        }
    }

    pub fn totient(&self) -> u64 {
        let mut t = self.value;
        for &(p, _) in &self.factors {
            t = t / p * (p - 1);
        }
        t
    }

    /// Product of the primes dividing `value` to an odd power.
    pub fn squarefree_part(&self) -> u64 {
        self.factors
            .iter()
            .filter(|&&(_, e)| e % 2 == 1)
            .map(|&(p, _)| p)
            .product()
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|&(_, e)| e == 1)
    }
}

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn powmod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1u64 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, b, m);
        }
        b = mulmod(b, b, m);
        e >>= 1;
    }
    r
}

/// Deterministic Miller-Rabin for `u64` (the listed witness set is complete
/// below 3.3 * 10^24).
fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Factor a positive integer by trial division over the precomputed prime
/// sieve, certifying any oversized cofactor with a deterministic primality
/// check.
pub fn factorize(n: u64) -> Result<Factorization> {
    if n == 0 {
        return Err(Error::ZeroArgument);
    }
    let value = n;
    let mut n = n;
    let mut factors = Vec::new();
    for &p in small_primes() {
        let p = p as u64;
        if p * p > n {
            break;
        }
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            factors.push((p, e));
        }
    }
    if n > 1 {
        // Remaining cofactor has no prime factor <= min(TRIAL_PRIME_LIMIT, sqrt(n)).
        if is_prime_u64(n) {
            factors.push((n, 1));
        } else {
            let r = n.isqrt();
            if r * r == n && is_prime_u64(r) {
                factors.push((r, 2));
            } else {
                return Err(Error::FactorizationOutOfRange(value));
            }
        }
    }
    Ok(Factorization { value, factors })
}

/// Sorted divisors of `n`.
pub fn divisors(n: u64) -> Result<Vec<u64>> {
    Ok(factorize(n)?.divisors())
}

pub fn mobius(n: u64) -> Result<i64> {
    Ok(factorize(n)?.mobius())
}

pub fn totient(n: u64) -> Result<u64> {
    Ok(factorize(n)?.totient())
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

/// Table of mu(1..=limit) by a linear sieve. Index 0 is unused (set to 0).
pub fn mobius_sieve(limit: u64) -> Result<Vec<i8>> {
    if limit == 0 {
        return Err(Error::ZeroArgument);
    }
    if limit > SIEVE_LIMIT {
        return Err(Error::BudgetExceeded {
            what: "mobius_sieve limit",
            value: limit,
            limit: SIEVE_LIMIT,
        });
    }
    let n = limit as usize;
    let mut mu = vec![0i8; n + 1];
    let mut primes: Vec<usize> = Vec::new();
    let mut composite = vec![false; n + 1];
    if n >= 1 {
        mu[1] = 1;
    }
    for i in 2..=n {
        if !composite[i] {
            primes.push(i);
            mu[i] = -1;
        }
        for &p in &primes {
            let ip = i * p;
            if ip > n {
                break;
            }
            composite[ip] = true;
            if i % p == 0 {
                mu[ip] = 0;
                break;
            }
            mu[ip] = -mu[i];
        }
    }
    Ok(mu)
}

/// Smallest-prime-factor sieve, for bulk factorization of ranges.
pub struct SpfSieve {
    spf: Vec<u32>,
}

impl SpfSieve {
    pub fn new(limit: u64) -> Result<Self> {
        if limit > SIEVE_LIMIT {
            return Err(Error::BudgetExceeded {
                what: "spf sieve limit",
                value: limit,
                limit: SIEVE_LIMIT,
            });
        }
        let n = limit as usize;
        let mut spf = vec![0u32; n + 1];
        for i in 2..=n {
            if spf[i] == 0 {
                let mut j = i;
                while j <= n {
                    if spf[j] == 0 {
                        spf[j] = i as u32;
                    }
                    j += i;
                }
            }
        }
        Ok(SpfSieve { spf })
    }

    pub fn limit(&self) -> u64 {
        (self.spf.len() - 1) as u64
    }

    pub fn factorize(&self, n: u64) -> Factorization {
        assert!(n >= 1 && n <= self.limit(), "spf sieve: {n} out of range");
        let value = n;
        let mut n = n as usize;
        let mut factors = Vec::new();
        while n > 1 {
            let p = self.spf[n] as u64;
            let mut e = 0;
            while n as u64 % p == 0 {
                n /= p as usize;
                e += 1;
            }
            factors.push((p, e));
        }
        Factorization { value, factors }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Independent oracle: factor by plain trial division over all integers.
    fn factorize_oracle(mut n: u64) -> Vec<(u64, u32)> {
        let mut out = Vec::new();
        let mut d = 2u64;
        while d * d <= n {
            if n % d == 0 {
                let mut e = 0;
                while n % d == 0 {
                    n /= d;
                    e += 1;
                }
                out.push((d, e));
            }
            d += 1;
        }
        if n > 1 {
            out.push((n, 1));
        }
        out
    }

    #[test]
    fn factorize_examples() {
        assert!(factorize(1).unwrap().factors.is_empty());
        assert_eq!(factorize(12).unwrap().factors, vec![(2, 2), (3, 1)]);
        assert_eq!(factorize(9_999_991).unwrap().factors, factorize_oracle(9_999_991));
        assert!(matches!(factorize(0), Err(Error::ZeroArgument)));
    }

    #[test]
    fn factorize_large_cofactors() {
        // prime above the trial bound
        let p = 10_000_019u64;
        assert_eq!(factorize(p).unwrap().factors, vec![(p, 1)]);
        assert_eq!(factorize(p * p).unwrap().factors, vec![(p, 2)]);
        assert_eq!(factorize(2 * p).unwrap().factors, vec![(2, 1), (p, 1)]);
        // product of two distinct primes above the bound is out of range
        assert!(matches!(
            factorize(10_000_019u64 * 10_000_079),
            Err(Error::FactorizationOutOfRange(_))
        ));
    }

    #[test]
    fn divisors_examples() {
        assert_eq!(divisors(1).unwrap(), vec![1]);
        assert_eq!(divisors(12).unwrap(), vec![1, 2, 3, 4, 6, 12]);
        let n = 362880u64; // 9!
        let oracle: Vec<u64> = (1..=n).filter(|d| n % d == 0).collect();
        assert_eq!(divisors(n).unwrap(), oracle);
    }

    #[test]
    fn mobius_examples() {
        assert_eq!(mobius(1).unwrap(), 1);
        assert_eq!(mobius(4).unwrap(), 0);
        assert_eq!(mobius(30).unwrap(), -1);
    }

    #[test]
    fn totient_examples() {
        assert_eq!(totient(1).unwrap(), 1);
        assert_eq!(totient(4).unwrap(), 2);
        let n = 360u64;
        let oracle = (1..=n).filter(|&b| gcd(b, n) == 1).count() as u64;
        assert_eq!(totient(n).unwrap(), oracle);
    }

    #[test]
    fn mobius_sieve_matches_pointwise() {
        assert_eq!(mobius_sieve(1).unwrap()[1..], [1]);
        assert_eq!(mobius_sieve(6).unwrap()[1..], [1, -1, -1, 0, -1, 1]);
        let mu = mobius_sieve(1_000_000).unwrap();
        // deterministic spread of indices
        let mut i = 1u64;
        for step in 0..1000u64 {
            i = (i * 48271 + step) % 1_000_000 + 1;
            assert_eq!(mu[i as usize] as i64, mobius(i).unwrap(), "mu({i})");
        }
    }

    #[test]
    fn spf_sieve_matches_factorize() {
        let sieve = SpfSieve::new(10_000).unwrap();
        for n in 1..=10_000u64 {
            assert_eq!(sieve.factorize(n), factorize(n).unwrap());
        }
    }

    #[test]
    fn mobius_divisor_sum_is_indicator() {
        for n in 1..=100_000u64 {
            let f = factorize(n).unwrap();
            let s: i64 = f.divisors().iter().map(|&d| mobius(d).unwrap()).sum();
            assert_eq!(s, if n == 1 { 1 } else { 0 }, "n = {n}");
        }
    }

    proptest! {
        #[test]
        fn totient_multiplicative(m in 1u64..10_000, n in 1u64..10_000) {
            prop_assume!(gcd(m, n) == 1);
            prop_assert_eq!(totient(m * n).unwrap(), totient(m).unwrap() * totient(n).unwrap());
        }

        #[test]
        fn divisor_count_matches_sigma0(n in 1u64..100_000) {
            let f = factorize(n).unwrap();
            prop_assert_eq!(f.divisors().len() as u64, f.divisor_count());
        }

        #[test]
        fn sigma0_multiplicative(m in 1u64..1000, n in 1u64..1000) {
            prop_assume!(gcd(m, n) == 1);
            let c = |x: u64| factorize(x).unwrap().divisor_count();
            prop_assert_eq!(c(m * n), c(m) * c(n));
        }
    }
}
