//! Numerical Dirichlet L-values at real s > 1, restricted L-functions, and
//! the closed-form main-term constants used by the asymptotic checks.
//!
//! Principal characters reduce to the zeta function (Euler-Maclaurin with an
//! explicit remainder); non-principal characters are summed in complete
//! periods, which gives a certified O(N * M^-s) tail bound. Everything is
//! evaluated to a certified absolute tolerance, 1e-12 by default, and cached
//! per process.

use crate::characters::DirichletCharacter;
use crate::error::{Error, Result};
use std::collections::HashMap;
use std::sync::Mutex;
use std::sync::OnceLock;

/// Default certified absolute tolerance for every L-value in the crate.
pub const DEFAULT_TOL: f64 = 1e-12;

/// A half-integral weight k, stored as the odd integer 2k.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct HalfInteger {
    twice: u32,
}

impl HalfInteger {
    /// `twice` is 2k and must be odd with k >= 3/2.
    pub fn from_twice(twice: u32) -> Result<Self> {
        if twice % 2 == 0 {
            return Err(Error::EvenArgument {
                what: "doubled half-integral weight",
                value: twice as i64,
            });
        }
        if twice < 3 {
            return Err(Error::InvalidParameter(format!(
                "half-integral weight {twice}/2 must be at least 3/2"
            )));
        }
        Ok(HalfInteger { twice })
    }

    pub fn twice(&self) -> u32 {
        self.twice
    }

    pub fn value(&self) -> f64 {
        self.twice as f64 / 2.0
    }

    /// s_k = (-1)^(k - 1/2).
    pub fn sign(&self) -> i64 {
        if (self.twice - 1) / 2 % 2 == 0 {
            1
        } else {
            -1
        }
    }
}

impl std::fmt::Display for HalfInteger {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}/2", self.twice)
    }
}

/// An L-value evaluation request.
#[derive(Debug, Clone)]
pub struct LRequest {
    pub character: DirichletCharacter,
    pub s: f64,
    pub abs_tol: f64,
}

impl LRequest {
    pub fn new(character: DirichletCharacter, s: f64) -> Self {
        LRequest {
            character,
            s,
            abs_tol: DEFAULT_TOL,
        }
    }
}

/// Kahan-compensated accumulator; summation order stays fixed so results are
/// reproducible across thread counts.
#[derive(Default, Clone, Copy)]
pub(crate) struct Kahan {
    sum: f64,
    c: f64,
}

impl Kahan {
    pub fn add(&mut self, x: f64) {
        let y = x - self.c;
        let t = self.sum + y;
        self.c = (t - self.sum) - y;
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum
    }
}

// B_2, B_4, ..., B_16
const BERNOULLI: [f64; 8] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
];

/// Riemann zeta at real s > 1 by Euler-Maclaurin with an explicit remainder
/// bound (the first omitted correction term dominates the error for real s).
pub fn zeta(s: f64, abs_tol: f64) -> Result<f64> {
    if !(s > 1.0) {
        return Err(Error::InvalidParameter(format!("zeta requires s > 1, got {s}")));
    }
    let mut n = 32usize.max(s as usize + 8);
    loop {
        let mut sum = Kahan::default();
        for j in 1..n {
            sum.add((j as f64).powf(-s));
        }
        let nf = n as f64;
        sum.add(nf.powf(1.0 - s) / (s - 1.0));
        sum.add(0.5 * nf.powf(-s));
        let mut rising = s; // s (s+1) ... (s + 2j - 2)
        let mut fact = 2.0f64; // (2j)!
        let mut certified = false;
        for (j, b) in BERNOULLI.iter().enumerate() {
            let term = b / fact * rising * nf.powf(-s - 2.0 * j as f64 - 1.0);
            if term.abs() < abs_tol * 0.01 {
                certified = true;
                sum.add(term);
                break;
            }
            sum.add(term);
            let k = 2.0 * (j as f64 + 1.0);
            rising *= (s + k - 1.0) * (s + k);
            fact *= (k + 1.0) * (k + 2.0);
        }
        if certified {
            return Ok(sum.value());
        }
        n *= 4;
        if n > 1 << 22 {
            return Err(Error::TailBoundNotCertified { s, tol: abs_tol });
        }
    }
}

fn l_value_uncached(req: &LRequest) -> Result<f64> {
    let chi = &req.character;
    let s = req.s;
    let tol = req.abs_tol;
    if !(s > 1.0) {
        return Err(Error::InvalidParameter(format!(
            "L(chi,s) requires s > 1, got {s}"
        )));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter("abs_tol must be positive".into()));
    }
    if chi.is_principal() {
        // L(chi_0 mod N, s) = zeta(s) * prod_{p | N} (1 - p^-s)
        let mut v = zeta(s, tol * 0.5)?;
        for &(p, _) in &crate::arith::factorize(chi.modulus())?.factors {
            v *= 1.0 - (p as f64).powf(-s);
        }
        return Ok(v);
    }
    // Non-principal: partial sums of chi are bounded by N, so by Abel
    // summation the tail past M is at most 2N * M^-s.
    let n = chi.modulus();
    let m_needed = (2.0 * n as f64 / tol).powf(1.0 / s).ceil() as u64 + 1;
    let m = m_needed.div_ceil(n) * n;
    if m > 500_000_000 {
        return Err(Error::TailBoundNotCertified { s, tol });
    }
    let mut sum = Kahan::default();
    for i in 1..=m {
        let v = chi.eval(i as i64);
        if v != 0 {
            sum.add(v as f64 * (i as f64).powf(-s));
        }
    }
    Ok(sum.value())
}

#[derive(PartialEq, Eq, Hash)]
enum CacheKey {
    L(DirichletCharacter, u64),
    Restricted(DirichletCharacter, u64, u64),
}

static CACHE: OnceLock<Mutex<HashMap<CacheKey, f64>>> = OnceLock::new();

fn cache() -> &'static Mutex<HashMap<CacheKey, f64>> {
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn cached(key: CacheKey, compute: impl FnOnce() -> Result<f64>) -> Result<f64> {
    if let Some(&v) = cache().lock().unwrap().get(&key) {
        return Ok(v);
    }
    let v = compute()?;
    cache().lock().unwrap().insert(key, v);
    Ok(v)
}

/// L(chi, s) to within `req.abs_tol` absolute error. Values at the default
/// tolerance are cached per process.
pub fn l_value(req: &LRequest) -> Result<f64> {
    if req.abs_tol == DEFAULT_TOL {
        cached(CacheKey::L(req.character.clone(), req.s.to_bits()), || {
            l_value_uncached(req)
        })
    } else {
        l_value_uncached(req)
    }
}

/// Restricted L-function: the defining series with all n sharing a factor
/// with M removed, i.e. L(chi,s) * prod_{p | M, p not | N} (1 - chi(p) p^-s).
pub fn l_value_restricted(
    chi: &DirichletCharacter,
    s: f64,
    m: u64,
    abs_tol: f64,
) -> Result<f64> {
    if m == 0 {
        return Err(Error::ZeroArgument);
    }
    let compute = || -> Result<f64> {
        let base = l_value(&LRequest {
            character: chi.clone(),
            s,
            abs_tol,
        })?;
        let mut v = base;
        for &(p, _) in &crate::arith::factorize(m)?.factors {
            if chi.modulus() % p != 0 {
                v *= 1.0 - chi.eval(p as i64) as f64 * (p as f64).powf(-s);
            }
        }
        Ok(v)
    };
    if abs_tol == DEFAULT_TOL {
        cached(
            CacheKey::Restricted(chi.clone(), s.to_bits(), m),
            compute,
        )
    } else {
        compute()
    }
}

/// zeta with the Euler factor at 2 removed: zeta_2(s) = zeta(s)(1 - 2^-s).
pub fn zeta_odd(s: f64, abs_tol: f64) -> Result<f64> {
    Ok(zeta(s, abs_tol)? * (1.0 - 2f64.powf(-s)))
}

/// Main-term constant for the partial sums of sigma_k(chi1, chi2, q^2):
///
///   phi(N1)/((2k+1) N1) * L(chi2^2, 2k+1) L(chi1 chi2, k+1) / L(chi1^2 chi2^2, 2k+2)
///
/// valid when chi1 is real (all characters here are).
pub fn skt_constant(chi1: &DirichletCharacter, chi2: &DirichletCharacter, k: u32) -> Result<f64> {
    if k < 1 {
        return Err(Error::InvalidParameter("skt_constant requires k >= 1".into()));
    }
    let n1 = chi1.modulus();
    let phi_n1 = crate::arith::totient(n1)?;
    let chi2_sq = chi2.square();
    let chi12 = chi1.product(chi2);
    let chi12_sq = chi12.square();
    let a = l_value(&LRequest::new(chi2_sq, (2 * k + 1) as f64))?;
    let b = l_value(&LRequest::new(chi12, (k + 1) as f64))?;
    let c = l_value(&LRequest::new(chi12_sq, (2 * k + 2) as f64))?;
    Ok(phi_n1 as f64 / ((2 * k + 1) as f64 * n1 as f64) * a * b / c)
}

/// Main-term constant for the partial sums of the modified divisor sums:
///
///   zeta_2(2k-1) / ((4k-2) L_2(omega_{s_k}, k + 1/2))
pub fn bkt_constant(k: HalfInteger) -> Result<f64> {
    if k.twice() < 5 {
        return Err(Error::InvalidParameter(format!(
            "bkt_constant requires k >= 5/2, got {k}"
        )));
    }
    let kv = k.value();
    let omega_sk = crate::characters::omega(k.sign())?;
    let num = zeta_odd(2.0 * kv - 1.0, DEFAULT_TOL)?;
    let den = l_value_restricted(&omega_sk, kv + 0.5, 2, DEFAULT_TOL)?;
    Ok(num / ((4.0 * kv - 2.0) * den))
}

/// The n = 2 main-term constants: the theta-side constant and the sphere-side
/// constant obtained from it by dividing out zeta(2).
#[derive(Debug, Clone, Copy)]
pub struct C2Constants {
    /// 3 zeta(2) / (2 L(omega_{-1}, 2))
    pub c2_star: f64,
    /// 3 / (2 L(omega_{-1}, 2))
    pub c2: f64,
}

pub fn c2_constant() -> Result<C2Constants> {
    let wm1 = crate::characters::omega(-1)?;
    let l = l_value(&LRequest::new(wm1, 2.0))?;
    let c2 = 3.0 / (2.0 * l);
    let z2 = zeta(2.0, DEFAULT_TOL)?;
    Ok(C2Constants {
        c2_star: c2 * z2,
        c2,
    })
}
