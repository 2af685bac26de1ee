//! L-function special values and the closed-form main-term constants built
//! from them: the circle constant pair (c2*, c2), the integral-weight
//! divisor-sum constants, and the half-integral-weight constants.

use spherecount::characters::{omega, DirichletCharacter};
use spherecount::lfunctions::{
    bkt_constant, c2_constant, l_value, skt_constant, HalfInteger, LRequest,
};

fn main() -> spherecount::Result<()> {
    let wm1 = omega(-1)?;
    let catalan = l_value(&LRequest::new(wm1.clone(), 2.0))?;
    println!("L(omega_-1, 2) = {catalan:.15}  (Catalan's constant)");

    let zeta2 = l_value(&LRequest::new(DirichletCharacter::principal(1)?, 2.0))?;
    println!("zeta(2)        = {zeta2:.15}  (pi^2/6 = {:.15})", std::f64::consts::PI.powi(2) / 6.0);

    let c = c2_constant()?;
    println!("c2* = {:.12}, c2 = 3 / (2 L(omega_-1, 2)) = {:.12}", c.c2_star, c.c2);

    let one = DirichletCharacter::principal(1)?;
    for k in 1..=3u32 {
        println!("skt constant, trivial characters, k = {k}: {:.12}", skt_constant(&one, &one, k)?);
    }
    println!(
        "skt constant, (omega_-1, trivial), k = 1: {:.12}",
        skt_constant(&wm1, &one, 1)?
    );

    for twice in [5u32, 7, 9] {
        let k = HalfInteger::from_twice(twice)?;
        println!("bkt constant, k = {k}: {:.12}", bkt_constant(k)?);
    }
    Ok(())
}
