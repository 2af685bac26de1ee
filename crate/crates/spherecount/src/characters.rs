//! Real Dirichlet characters, the extended Jacobi symbol, and the primitive
//! quadratic character attached to an integer.
//!
//! Characters are stored as dense period-length value tables with entries in
//! {-1, 0, +1}. Every character this crate needs has a small modulus, so the
//! tables stay tiny and evaluation is a single lookup.

use crate::arith::{factorize, gcd, lcm};
use crate::error::{Error, Result};

/// Jacobi symbol (a/n) for odd n > 0, with the numerator extended to all of Z
/// via (-1/n) = (-1)^((n-1)/2).
fn jacobi(mut a: i64, mut n: u64) -> i32 {
    debug_assert!(n % 2 == 1);
    let mut sign = 1i32;
    if a < 0 {
        a = -a;
        if n % 4 == 3 {
            sign = -sign;
        }
    }
    let mut a = (a as u64) % n;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if n % 8 == 3 || n % 8 == 5 {
                sign = -sign;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            sign = -sign;
        }
        a %= n;
    }
    if n == 1 {
        sign
    } else {
        0
    }
}

/// Extended Jacobi symbol (c/d) for odd d, positive or negative.
///
/// For d > 0 this is the classical Jacobi symbol; for d < 0 and c != 0 it is
/// sign(c) * (c/(-d)). (0/d) is 0 unless d = +-1, where it is 1.
pub fn kronecker_shimura(c: i64, d: i64) -> Result<i32> {
    if d % 2 == 0 {
        return Err(Error::EvenArgument {
            what: "lower entry of the extended Jacobi symbol",
            value: d,
        });
    }
    if c == 0 {
        return Ok(if d == 1 || d == -1 { 1 } else { 0 });
    }
    if d > 0 {
        Ok(jacobi(c, d as u64))
    } else {
        let s = if c > 0 { 1 } else { -1 };
        Ok(s * jacobi(c, (-d) as u64))
    }
}

/// A real Dirichlet character modulo N as a dense value table.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DirichletCharacter {
    modulus: u64,
    values: Vec<i8>,
    is_principal: bool,
    conductor: u64,
}

impl DirichletCharacter {
    /// Validate a value table and compute the principal flag and conductor.
    pub fn from_values(modulus: u64, values: Vec<i8>) -> Result<Self> {
        if modulus == 0 || values.len() != modulus as usize {
            return Err(Error::InvalidCharacter(format!(
                "table length {} does not match modulus {}",
                values.len(),
                modulus
            )));
        }
        for (i, &v) in values.iter().enumerate() {
            let coprime = gcd(i as u64, modulus) == 1;
            if coprime && v == 0 || !coprime && v != 0 {
                return Err(Error::InvalidCharacter(format!(
                    "chi({i}) = {v} violates the support condition mod {modulus}"
                )));
            }
            if !(-1..=1).contains(&v) {
                return Err(Error::InvalidCharacter(format!("chi({i}) = {v} out of range")));
            }
        }
        if modulus > 1 && values[1 % modulus as usize] != 1 {
            return Err(Error::InvalidCharacter("chi(1) != 1".into()));
        }
        // complete multiplicativity on the table
        let m = modulus as usize;
        for a in 0..m {
            for b in a..m {
                if values[a * b % m] as i32 != values[a] as i32 * values[b] as i32 {
                    return Err(Error::InvalidCharacter(format!(
                        "chi({a})chi({b}) != chi({})",
                        a * b % m
                    )));
                }
            }
        }
        let is_principal = values.iter().all(|&v| v >= 0);
        let conductor = conductor_of_table(modulus, &values);
        Ok(DirichletCharacter {
            modulus,
            values,
            is_principal,
            conductor,
        })
    }

    /// The principal character modulo `modulus`.
    pub fn principal(modulus: u64) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::ZeroArgument);
        }
        let values: Vec<i8> = (0..modulus)
            .map(|i| if gcd(i, modulus) == 1 { 1 } else { 0 })
            .collect();
        Ok(DirichletCharacter {
            modulus,
            values,
            is_principal: true,
            conductor: 1,
        })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn is_principal(&self) -> bool {
        self.is_principal
    }

    pub fn is_primitive(&self) -> bool {
        self.conductor == self.modulus
    }

    pub fn values(&self) -> &[i8] {
        &self.values
    }

    /// chi(n), with negative n reduced into [0, N).
    pub fn eval(&self, n: i64) -> i32 {
        let m = self.modulus as i64;
        let r = n.rem_euclid(m) as usize;
        self.values[r] as i32
    }

    /// Pointwise product character modulo lcm of the two moduli.
    pub fn product(&self, other: &DirichletCharacter) -> DirichletCharacter {
        let modulus = lcm(self.modulus, other.modulus);
        let values: Vec<i8> = (0..modulus)
            .map(|i| (self.eval(i as i64) * other.eval(i as i64)) as i8)
            .collect();
        let is_principal = values.iter().all(|&v| v >= 0);
        let conductor = conductor_of_table(modulus, &values);
        DirichletCharacter {
            modulus,
            values,
            is_principal,
            conductor,
        }
    }

    /// The square of the character (principal on the same modulus when the
    /// character is real, which is all this crate supports).
    pub fn square(&self) -> DirichletCharacter {
        self.product(self)
    }
}

/// Smallest f | N such that the table is f-periodic on residues coprime to N.
pub fn conductor_of_table(modulus: u64, values: &[i8]) -> u64 {
    let divs = factorize(modulus)
        .expect("modulus >= 1")
        .divisors();
    'f: for f in divs {
        for r in 0..f {
            let mut class_value: Option<i8> = None;
            let mut a = r;
            while a < modulus {
                if gcd(a, modulus) == 1 {
                    match class_value {
                        None => class_value = Some(values[a as usize]),
                        Some(v) if v != values[a as usize] => continue 'f,
                        _ => {}
                    }
                }
                a += f;
            }
        }
        return f;
    }
    modulus
}

/// Conductor of a validated character.
pub fn conductor_of(chi: &DirichletCharacter) -> u64 {
    conductor_of_table(chi.modulus, &chi.values)
}

/// The primitive quadratic character attached to a nonzero integer m: the
/// unique primitive character agreeing with the extended Jacobi symbol
/// (m/d) on every d coprime to 4m. Depends only on the squarefree part of m.
pub fn omega(m: i64) -> Result<DirichletCharacter> {
    if m == 0 {
        return Err(Error::ZeroArgument);
    }
    let fact = factorize(m.unsigned_abs())?;
    let sf = fact.squarefree_part();
    let m_star = if m > 0 { sf as i64 } else { -(sf as i64) };
    let period = 4 * sf;
    let full = 4 * m.unsigned_abs();

    // Tabulate (m/d) on residues mod 4*|squarefree part|, picking in each
    // coprime class a representative d coprime to 4|m|.
    let mut values = vec![0i8; period as usize];
    for i in 0..period {
        if gcd(i, period) != 1 {
            continue;
        }
        let mut d = i;
        while gcd(d, full) != 1 {
            d += period;
        }
        values[i as usize] = kronecker_shimura(m_star, d as i64)? as i8;
    }

    // Re-tabulate at the conductor so the result is primitive.
    let f = conductor_of_table(period, &values);
    let mut reduced = vec![0i8; f as usize];
    for j in 0..f {
        if gcd(j, f) != 1 {
            continue;
        }
        let mut a = j;
        while gcd(a, period) != 1 {
            a += f;
        }
        reduced[j as usize] = values[(a % period) as usize];
    }
    DirichletCharacter::from_values(f, reduced)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Quadratic-residue brute force: Legendre symbol mod an odd prime p.
    fn legendre_oracle(c: i64, p: u64) -> i32 {
        let r = c.rem_euclid(p as i64) as u64;
        if r == 0 {
            return 0;
        }
        for x in 1..p {
            if x * x % p == r {
                return 1;
            }
        }
        -1
    }

    #[test]
    fn kronecker_shimura_edge_cases() {
        assert_eq!(kronecker_shimura(0, 1).unwrap(), 1);
        assert_eq!(kronecker_shimura(0, -1).unwrap(), 1);
        assert_eq!(kronecker_shimura(0, 5).unwrap(), 0);
        for d in [-9i64, -7, -5, -3, -1, 1, 3, 5, 7, 9] {
            assert_eq!(kronecker_shimura(1, d).unwrap(), 1, "d = {d}");
        }
        assert!(kronecker_shimura(3, 4).is_err());
    }

    #[test]
    fn kronecker_shimura_negative_denominator() {
        // sign rule applied to the classical symbol (-2/5)
        let classical = legendre_oracle(-2, 5);
        assert_eq!(kronecker_shimura(-2, -5).unwrap(), -classical);
        // spot-check against residue enumeration over odd primes
        for p in [3u64, 5, 7, 11, 13] {
            for c in -20i64..=20 {
                assert_eq!(
                    kronecker_shimura(c, p as i64).unwrap(),
                    legendre_oracle(c, p),
                    "({c}/{p})"
                );
            }
        }
    }

    #[test]
    fn omega_small_cases() {
        let w1 = omega(1).unwrap();
        assert!(w1.is_principal());
        assert_eq!(w1.modulus(), 1);
        assert_eq!(w1.conductor(), 1);

        let wm1 = omega(-1).unwrap();
        assert_eq!(wm1.modulus(), 4);
        assert_eq!(wm1.eval(1), 1);
        assert_eq!(wm1.eval(3), -1);
        assert_eq!(legendre_oracle(-1, 3), -1); // 3 = 3 mod 4

        assert_eq!(omega(-4).unwrap(), wm1);

        let w2 = omega(2).unwrap();
        assert_eq!(w2.conductor(), 8);
        assert_eq!(w2.modulus(), 8);
    }

    #[test]
    fn char_eval_examples() {
        let wm1 = omega(-1).unwrap();
        assert_eq!(wm1.eval(7), -1);
        assert_eq!(wm1.eval(-1), -1);
        let one = DirichletCharacter::principal(1).unwrap();
        for n in -5..=5 {
            assert_eq!(one.eval(n), 1);
        }
    }

    #[test]
    fn char_product_examples() {
        let wm1 = omega(-1).unwrap();
        let sq = wm1.product(&wm1);
        assert!(sq.is_principal());
        assert_eq!(sq.modulus(), 4);

        let one = DirichletCharacter::principal(1).unwrap();
        assert_eq!(wm1.product(&one), wm1);

        let p2 = DirichletCharacter::principal(2).unwrap();
        let prod = wm1.product(&p2);
        assert_eq!(prod.modulus(), 4);
        assert_eq!(prod.eval(2), 0);
        assert_eq!(prod.eval(3), -1);
    }

    #[test]
    fn conductor_examples() {
        let p4 = DirichletCharacter::principal(4).unwrap();
        assert_eq!(conductor_of(&p4), 1);
        assert_eq!(conductor_of(&omega(-1).unwrap()), 4);
        assert_eq!(conductor_of(&omega(2).unwrap()), 8);
    }

    #[test]
    fn omega_agrees_with_symbol() {
        for m in -10i64..=10 {
            if m == 0 {
                continue;
            }
            let chi = omega(m).unwrap();
            for d in 1..=1000i64 {
                if gcd(d as u64, 4 * m.unsigned_abs()) != 1 {
                    continue;
                }
                assert_eq!(
                    chi.eval(d),
                    kronecker_shimura(m, d).unwrap(),
                    "m = {m}, d = {d}"
                );
            }
        }
    }

    #[test]
    fn omega_depends_only_on_squarefree_part() {
        for m in -10i64..=10 {
            if m == 0 {
                continue;
            }
            for s in 1i64..=5 {
                assert_eq!(omega(m).unwrap(), omega(m * s * s).unwrap(), "m = {m}, s = {s}");
            }
        }
    }

    #[test]
    fn char_product_commutative_associative() {
        let pool = [
            DirichletCharacter::principal(1).unwrap(),
            DirichletCharacter::principal(2).unwrap(),
            DirichletCharacter::principal(4).unwrap(),
            omega(-1).unwrap(),
            omega(2).unwrap(),
            omega(3).unwrap(),
        ];
        for a in &pool {
            for b in &pool {
                assert_eq!(a.product(b), b.product(a));
                for c in &pool {
                    assert_eq!(a.product(b).product(c), a.product(&b.product(c)));
                }
            }
        }
    }

    proptest! {
        #[test]
        fn kronecker_multiplicative_in_numerator(
            a in 1i64..10_000,
            b in 1i64..10_000,
            d_idx in 0usize..5,
        ) {
            let d = [3i64, 5, 7, 9, 15][d_idx];
            let lhs = kronecker_shimura(a * b, d).unwrap();
            let rhs = kronecker_shimura(a, d).unwrap() * kronecker_shimura(b, d).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
