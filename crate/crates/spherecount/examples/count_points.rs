//! Exact counts N(S^n; T) of lowest-terms rational points on the unit sphere
//! with denominator at most T, comparing the factorization-based fast paths
//! (n = 2, 3) with the coefficient-table path.

use spherecount::theta::{count_sphere, count_sphere_fast};

fn main() -> spherecount::Result<()> {
    println!("{:>3} {:>8} {:>14}", "n", "T", "N(S^n;T)");
    for n in [2u32, 3, 4, 5] {
        for t in [1.0, 10.0, 100.0, 1000.0] {
            let c = count_sphere(n, t)?;
            println!("{:>3} {:>8} {:>14}", n, t, c.value);
        }
    }

    // fast paths agree with the table path and scale much further
    for t in [1e4, 1e5] {
        let circle = count_sphere_fast(2, t)?;
        let sphere = count_sphere_fast(3, t)?;
        println!("fast: N(S^2;{t:.0}) = {}, N(S^3;{t:.0}) = {}", circle.value, sphere.value);
    }
    let a = count_sphere(2, 500.0)?.value;
    let b = count_sphere_fast(2, 500.0)?.value;
    assert_eq!(a, b);
    println!("table and fast paths agree at T = 500: {a}");
    Ok(())
}
