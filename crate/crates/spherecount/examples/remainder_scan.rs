//! Asymptotic remainder scans: N(S^n; T) = c T^n + R(T) with R(T) of order
//! T^(n-1) up to logarithms. For n = 2 the constant is the closed form
//! 3 / (2 L(omega_-1, 2)); for n = 3 it is fitted on the grid, and the
//! remainder exponent is estimated by a log-log slope.

use spherecount::analysis::{
    fit_main_constant, fit_remainder_exponent, geometric_grid, records_to_csv, scan_remainder,
    RemainderSlope,
};
use spherecount::lfunctions::c2_constant;

fn main() -> spherecount::Result<()> {
    let c2 = c2_constant()?.c2;
    let grid = geometric_grid(100, 100_000, 2.0)?;
    let records = scan_remainder(2, &grid, Some(c2))?;
    println!("n = 2, closed-form constant c2 = {c2:.12}:");
    print!("{}", records_to_csv(&records));

    // dense grid: the exponent estimate works on the oscillation envelope
    let grid = geometric_grid(100, 10_000, 1.08)?;
    let fit = fit_main_constant(3, &grid)?;
    println!(
        "n = 3 fit: c = {:.6}, secondary = {:.4}, rms residual = {:.3}",
        fit.constant, fit.secondary, fit.residual_norm
    );
    let records = scan_remainder(3, &grid, Some(fit.constant))?;
    match fit_remainder_exponent(&records)? {
        RemainderSlope::Slope(s) => println!("n = 3 remainder exponent ~ {s:.3} (expect ~2)"),
        RemainderSlope::Exact => println!("n = 3 remainder identically zero on this grid"),
    }
    Ok(())
}
