//! Partial sums of twisted and modified divisor sums converging to their
//! closed-form main-term constants:
//!
//!   S_k(T) = sum_{q <= T} sigma_k(chi1, chi2, q^2)  ~  constant * T^(2k+1)
//!   B_k(T) = sum over odd m <= T of beta_k(m)       ~  constant * T^(2k-1)

use spherecount::analysis::{geometric_grid, verify_bkt, verify_skt};
use spherecount::characters::{omega, DirichletCharacter};
use spherecount::lfunctions::HalfInteger;

fn main() -> spherecount::Result<()> {
    let one = DirichletCharacter::principal(1)?;
    let wm1 = omega(-1)?;
    let grid = geometric_grid(100, 100_000, 10.0)?;

    println!("integral weight, relative error of S_k(T)/T^(2k+1) vs constant:");
    for (chi1, chi2, label) in [
        (&one, &one, "trivial, trivial"),
        (&wm1, &one, "omega_-1, trivial"),
    ] {
        for k in [1u32, 2] {
            for &t in &grid {
                println!("  ({label}), k = {k}, T = {t:>6}: {:.3e}", verify_skt(chi1, chi2, k, t)?);
            }
        }
    }

    println!("half-integral weight, relative error of B_k(T)/T^(2k-1) vs constant:");
    for twice in [5u32, 7] {
        let k = HalfInteger::from_twice(twice)?;
        for &t in &grid {
            println!("  k = {k}, T = {t:>6}: {:.3e}", verify_bkt(k, t)?);
        }
    }
    Ok(())
}
