//! The exact counting identity linking sphere counts and theta-coefficient
//! sums, in both directions:
//!
//!   N_theta(T)  = sum_{d <= T} N(S^n; T/d)
//!   N(S^n; T)   = sum_{d <= T} mu(d) N_theta(T/d)
//!
//! Both residuals are exactly zero for every dimension and bound; this is
//! integer arithmetic, not an approximation.

use spherecount::analysis::verify_lemma31;
use spherecount::theta::{count_sphere, count_theta};

fn main() -> spherecount::Result<()> {
    for n in 2..=5u32 {
        for t in [10.0, 37.0, 100.0, 250.0] {
            let (r1, r2) = verify_lemma31(n, t)?;
            println!(
                "n = {n}, T = {t:>5}: N_theta = {:>10}, N = {:>10}, residuals = ({r1}, {r2})",
                count_theta(n, t)?,
                count_sphere(n, t)?.value,
            );
            assert_eq!((r1, r2), (0, 0));
        }
    }
    println!("all residuals exactly zero");
    Ok(())
}
