//! Sum-of-squares coefficient tables r_n(m) and the closed-form fast paths:
//! the Hurwitz formula for r_3(q^2) and the four-square formula for r_4(m).

use spherecount::theta::{hurwitz_r3sq, jacobi_r4, primitive_count, r_bruteforce, r_table, TableSource};

fn main() -> spherecount::Result<()> {
    let table = r_table(3, 30)?;
    println!("r_3(m) for m <= 30:");
    print!("{}", table.to_csv());

    // closed forms against the convolution table
    for q in [1u64, 2, 3, 5, 10, 100, 12345] {
        println!("r_3({q}^2) = {}", hurwitz_r3sq(q)?);
    }
    for m in [1u64, 2, 4, 25, 10_000] {
        println!("r_4({m}) = {}", jacobi_r4(m)?);
    }

    // brute-force cross-check in a dimension without a closed form
    let t5 = r_table(5, 50)?;
    for m in [7u64, 33, 50] {
        assert_eq!(t5.r(m), r_bruteforce(5, m)?);
    }
    println!("r_5 table matches direct lattice enumeration up to 50");

    // primitive counts: points in lowest terms only
    let src = TableSource::build(3, 12)?;
    for q in 1..=12u64 {
        println!("primitive points with denominator exactly {q}: {}", primitive_count(q, &src)?);
    }
    Ok(())
}
