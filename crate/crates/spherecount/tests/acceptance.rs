//! Acceptance suite: one pass/fail line per criterion. Criteria 1-8 are the
//! mathematical and numerical guarantees of the crate; criterion 9 reruns the
//! whole suite on a single-threaded pool and requires bit-identical output.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spherecount::analysis::{
    fit_main_constant, fit_remainder_exponent, geometric_grid, scan_remainder, verify_bkt,
    verify_lemma31, verify_skt, RemainderSlope,
};
use spherecount::characters::{omega, DirichletCharacter};
use spherecount::divisor_sums::{convolution_sum_squares, CmFunction};
use spherecount::lfunctions::{c2_constant, HalfInteger};
use spherecount::theta::{
    count_sphere_fast, hurwitz_r3sq, jacobi_r4, r_bruteforce_table, r_table,
};
use std::collections::HashMap;

type Outcome = Result<String, String>;

fn criterion_1_exact_identity() -> Outcome {
    for n in [2u32, 3, 4, 5] {
        for t in [10.0, 37.0, 100.0, 200.0] {
            let (r1, r2) = verify_lemma31(n, t).map_err(|e| e.to_string())?;
            if (r1, r2) != (0, 0) {
                return Err(format!("residuals ({r1}, {r2}) at n = {n}, T = {t}"));
            }
        }
    }
    Ok("both inversion residuals exactly 0 on {2,3,4,5} x {10,37,100,200}".into())
}

fn criterion_2_oracle_equivalence() -> Outcome {
    for n in 1..=6u32 {
        let table = r_table(n, 200).map_err(|e| e.to_string())?;
        let brute = r_bruteforce_table(n, 200).map_err(|e| e.to_string())?;
        if table.counts() != &brute[..] {
            return Err(format!("r_table disagrees with enumeration at n = {n}"));
        }
    }
    let r3 = r_bruteforce_table(3, 500 * 500).map_err(|e| e.to_string())?;
    for q in 1..=500u64 {
        let closed = hurwitz_r3sq(q).map_err(|e| e.to_string())?;
        if closed != r3[(q * q) as usize] {
            return Err(format!("hurwitz_r3sq({q}) = {closed} != {}", r3[(q * q) as usize]));
        }
    }
    let r4 = r_bruteforce_table(4, 2000).map_err(|e| e.to_string())?;
    for m in 1..=2000u64 {
        let closed = jacobi_r4(m).map_err(|e| e.to_string())?;
        if closed != r4[m as usize] {
            return Err(format!("jacobi_r4({m}) = {closed} != {}", r4[m as usize]));
        }
    }
    Ok("r_table (n <= 6, m <= 200), hurwitz (q <= 500), jacobi (m <= 2000) all exact".into())
}

fn small_primes(limit: u64) -> Vec<u64> {
    let mut is_p = vec![true; limit as usize + 1];
    let mut out = Vec::new();
    for p in 2..=limit {
        if is_p[p as usize] {
            out.push(p);
            let mut j = p * p;
            while j <= limit {
                is_p[j as usize] = false;
                j += p;
            }
        }
    }
    out
}

/// Direct oracle for sum_{q <= T} (f * g)(q^2) by divisor enumeration.
fn conv_squares_oracle(f: &CmFunction, g: &CmFunction, t: u64) -> f64 {
    let mut total = 0.0;
    for q in 1..=t {
        for d in spherecount::arith::divisors(q * q).unwrap() {
            total += f.eval(d) * g.eval(q * q / d);
        }
    }
    total
}

fn criterion_3_convolution_identity() -> Outcome {
    let primes = small_primes(500);
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_cafe);
    let mut worst_real: f64 = 0.0;
    for trial in 0..50 {
        let integer_valued = trial < 25;
        let mut draw = || -> (HashMap<u64, f64>, f64) {
            let mut map = HashMap::new();
            for &p in &primes {
                let v = if integer_valued {
                    [-1.0, 0.0, 1.0, 1.0, -1.0, 2.0][rng.gen_range(0..6)]
                } else {
                    rng.gen_range(-1.5..1.5)
                };
                map.insert(p, v);
            }
            (map, 1.0)
        };
        let (fm, fd) = draw();
        let (gm, gd) = draw();
        let f = CmFunction::from_prime_values(fm, fd);
        let g = CmFunction::from_prime_values(gm, gd);
        let t = [100u64, 250, 500][trial % 3];
        let fast = convolution_sum_squares(&f, &g, t).map_err(|e| e.to_string())?;
        let direct = conv_squares_oracle(&f, &g, t);
        if integer_valued {
            if fast != direct {
                return Err(format!(
                    "trial {trial} (integer, T = {t}): {fast} != {direct}"
                ));
            }
        } else {
            let rel = (fast - direct).abs() / (1.0 + direct.abs());
            worst_real = worst_real.max(rel);
            if rel > 1e-9 {
                return Err(format!(
                    "trial {trial} (real, T = {t}): relative error {rel:.3e}"
                ));
            }
        }
    }
    Ok(format!(
        "25 integer pairs exact, 25 real pairs within 1e-9 (worst {worst_real:.3e})"
    ))
}

/// All real Dirichlet characters of modulus at most 4.
fn real_characters_mod_le_4() -> Vec<(DirichletCharacter, &'static str)> {
    vec![
        (DirichletCharacter::principal(1).unwrap(), "1 mod 1"),
        (DirichletCharacter::principal(2).unwrap(), "1 mod 2"),
        (DirichletCharacter::principal(3).unwrap(), "1 mod 3"),
        (omega(-3).unwrap(), "(./3)"),
        (DirichletCharacter::principal(4).unwrap(), "1 mod 4"),
        (omega(-1).unwrap(), "(-1/.)"),
    ]
}

#[derive(Clone, Copy, Debug, Default)]
struct Complex {
    re: f64,
    im: f64,
}

impl Complex {
    fn abs(self) -> f64 {
        self.re.hypot(self.im)
    }
}

impl std::ops::Add for Complex {
    type Output = Complex;
    fn add(self, o: Complex) -> Complex {
        Complex {
            re: self.re + o.re,
            im: self.im + o.im,
        }
    }
}

fn criterion_4_integral_weight_constants() -> Outcome {
    let chars = real_characters_mod_le_4();
    let mut worst: f64 = 0.0;
    let mut worst_label = String::new();
    for (chi1, l1) in &chars {
        for (chi2, l2) in &chars {
            for k in [1u32, 2, 3] {
                let rel = verify_skt(chi1, chi2, k, 100_000).map_err(|e| e.to_string())?;
                if rel > worst {
                    worst = rel;
                    worst_label = format!("({l1}, {l2}), k = {k}");
                }
                if rel > 0.02 {
                    return Err(format!(
                        "relative error {rel:.3e} > 2% for ({l1}, {l2}), k = {k}"
                    ));
                }
            }
        }
    }

    // A character whose square is non-principal must be complex; the crate's
    // character type is real by design, so the order-4 character mod 5 with
    // chi(2) = i is tabulated here. Without a pole from L(chi^2, .) the sum
    // S_1(T) loses a full power of T against the principal case.
    let chi = |d: u64| -> Complex {
        match d % 5 {
            1 => Complex { re: 1.0, im: 0.0 },
            2 => Complex { re: 0.0, im: 1.0 },
            3 => Complex { re: 0.0, im: -1.0 },
            4 => Complex { re: -1.0, im: 0.0 },
            _ => Complex::default(),
        }
    };
    let spf = spherecount::arith::SpfSieve::new(100_000).map_err(|e| e.to_string())?;
    let mut sum = Complex::default();
    let mut checkpoints: Vec<(u64, f64)> = Vec::new();
    for q in 1..=100_000u64 {
        let mut fact = spf.factorize(q);
        for f in &mut fact.factors {
            f.1 *= 2;
        }
        let mut sigma = Complex::default();
        for d in fact.divisors() {
            let c = chi(d);
            sigma = sigma
                + Complex {
                    re: c.re * d as f64,
                    im: c.im * d as f64,
                };
        }
        sum = sum + sigma;
        if q == 1_000 || q == 10_000 || q == 100_000 {
            checkpoints.push((q, sum.abs()));
        }
    }
    // bounded by T^2 up to a log factor: the log-normalized ratio must not
    // inflate along the grid, and the main-term normalization must collapse
    let logn: Vec<f64> = checkpoints
        .iter()
        .map(|&(t, s)| s / ((t * t) as f64 * (t as f64).ln()))
        .collect();
    if logn[1] > 2.0 * logn[0] || logn[2] > 2.0 * logn[0] {
        return Err(format!("|S_1(T)|/(T^2 log T) inflates: {logn:?}"));
    }
    let collapse = (checkpoints[2].1 / (checkpoints[2].0 as f64).powi(3))
        / (checkpoints[0].1 / (checkpoints[0].0 as f64).powi(3));
    if collapse > 0.2 {
        return Err(format!(
            "main-term normalization only shrank by {collapse:.3e} for the order-4 character"
        ));
    }
    Ok(format!(
        "36 real pairs x k in {{1,2,3}} within 2% (worst {worst:.3e} at {worst_label}); \
         order-4 character bounded: |S|/(T^2 log T) = {:.4e}, {:.4e}, {:.4e}",
        logn[0], logn[1], logn[2]
    ))
}

fn criterion_5_half_integral_constants() -> Outcome {
    let mut parts = Vec::new();
    for twice in [5u32, 7] {
        let k = HalfInteger::from_twice(twice).unwrap();
        let rel = verify_bkt(k, 100_000).map_err(|e| e.to_string())?;
        if rel > 0.02 {
            return Err(format!("relative error {rel:.3e} > 2% at k = {twice}/2"));
        }
        parts.push(format!("k = {twice}/2: {rel:.3e}"));
    }
    Ok(format!("B_k(T)/T^(2k-1) within 2% at T = 1e5 ({})", parts.join(", ")))
}

fn criterion_6_circle_remainder() -> Outcome {
    let c2 = c2_constant().map_err(|e| e.to_string())?.c2;
    let mut normalized = Vec::new();
    for t in [1_000u64, 10_000, 100_000] {
        let count = count_sphere_fast(2, t as f64).map_err(|e| e.to_string())?.value;
        let tf = t as f64;
        let rem = (count as f64 - c2 * tf * tf).abs();
        normalized.push(rem / (tf * tf.ln().powi(3)));
    }
    let (first, last) = (normalized[0], normalized[2]);
    if !normalized.iter().all(|v| v.is_finite()) || last > 1.10 * first {
        return Err(format!(
            "|N - c2 T^2|/(T log^3 T) inflates: {normalized:?}"
        ));
    }
    Ok(format!(
        "|N - c2 T^2|/(T log^3 T) = {:.4e}, {:.4e}, {:.4e} (no growth > 10%)",
        normalized[0], normalized[1], normalized[2]
    ))
}

fn criterion_7_cubic_constant_and_exponent() -> Outcome {
    let grid_a = geometric_grid(100, 5_000, 1.08).map_err(|e| e.to_string())?;
    let grid_b = geometric_grid(100, 10_000, 1.08).map_err(|e| e.to_string())?;
    let ca = fit_main_constant(3, &grid_a).map_err(|e| e.to_string())?.constant;
    let cb = fit_main_constant(3, &grid_b).map_err(|e| e.to_string())?.constant;
    let drift = (ca - cb).abs() / cb;
    if drift > 0.01 {
        return Err(format!("constant drift {drift:.3e} > 1% ({ca} vs {cb})"));
    }
    let records = scan_remainder(3, &grid_b, Some(cb)).map_err(|e| e.to_string())?;
    match fit_remainder_exponent(&records).map_err(|e| e.to_string())? {
        RemainderSlope::Slope(s) if (1.8..=2.2).contains(&s) => Ok(format!(
            "constant {cb:.6} stable to {drift:.2e}, remainder exponent {s:.3}"
        )),
        RemainderSlope::Slope(s) => Err(format!("remainder exponent {s:.3} outside [1.8, 2.2]")),
        RemainderSlope::Exact => Err("remainder unexpectedly exact".into()),
    }
}

fn criterion_8_higher_dimensions() -> Outcome {
    let mut parts = Vec::new();
    for (n, lo, hi, ratio) in [(4u32, 50u64, 1_000u64, 1.08), (5, 20, 400, 1.12)] {
        let grid = geometric_grid(lo, hi, ratio).map_err(|e| e.to_string())?;
        let fit = fit_main_constant(n, &grid).map_err(|e| e.to_string())?;
        let records = scan_remainder(n, &grid, Some(fit.constant)).map_err(|e| e.to_string())?;
        let target = (n - 1) as f64;
        match fit_remainder_exponent(&records).map_err(|e| e.to_string())? {
            RemainderSlope::Slope(s) if (s - target).abs() <= 0.25 => {
                parts.push(format!("n = {n}: exponent {s:.3}"));
            }
            RemainderSlope::Slope(s) => {
                return Err(format!(
                    "n = {n}: exponent {s:.3} outside {target} +- 0.25"
                ))
            }
            RemainderSlope::Exact => return Err(format!("n = {n}: remainder unexpectedly exact")),
        }
    }
    Ok(parts.join(", "))
}

fn run_criteria_1_to_8() -> Vec<(&'static str, Outcome)> {
    vec![
        ("exact inversion identity", criterion_1_exact_identity()),
        ("coefficient oracles", criterion_2_oracle_equivalence()),
        ("square-argument convolution", criterion_3_convolution_identity()),
        ("integral-weight constants", criterion_4_integral_weight_constants()),
        ("half-integral constants", criterion_5_half_integral_constants()),
        ("circle remainder", criterion_6_circle_remainder()),
        ("cubic constant and exponent", criterion_7_cubic_constant_and_exponent()),
        ("higher-dimensional exponents", criterion_8_higher_dimensions()),
    ]
}

#[test]
fn acceptance() {
    let single = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap();
    // at least 4 workers even on small machines, so parallel scheduling is
    // genuinely exercised against the single-threaded reference
    let workers = std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1)
        .max(4);
    let full = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .unwrap();

    let results_full = full.install(run_criteria_1_to_8);
    let results_single = single.install(run_criteria_1_to_8);

    let mut all_pass = true;
    for (i, (name, outcome)) in results_full.iter().enumerate() {
        match outcome {
            Ok(msg) => println!("criterion {}: PASS ({name}) — {msg}", i + 1),
            Err(msg) => {
                all_pass = false;
                println!("criterion {}: FAIL ({name}) — {msg}", i + 1);
            }
        }
    }

    let deterministic = results_full
        .iter()
        .zip(&results_single)
        .all(|(a, b)| a == b);
    if deterministic {
        println!("criterion 9: PASS (determinism) — identical output on 1 thread and {} threads",
                 full.current_num_threads());
    } else {
        all_pass = false;
        for ((name, a), (_, b)) in results_full.iter().zip(&results_single) {
            if a != b {
                println!("criterion 9: FAIL (determinism) — {name} differs:\n  full:   {a:?}\n  single: {b:?}");
            }
        }
    }

    assert!(all_pass, "one or more acceptance criteria failed");
}
