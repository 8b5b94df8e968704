//! Normal cdf and Bessel I1 in log space, where the direct values under- or
//! overflow.

use fpt::specfun::{bessel_i1, log_bessel_i1, log_bessel_i1_scaled, log_std_normal_cdf, std_normal_cdf};

fn main() -> fpt::Result<()> {
    for z in [-1.0, -10.0, -40.0, -300.0] {
        println!("Phi({z:6}) = {:.6e}   ln Phi = {:.6}", std_normal_cdf(z), log_std_normal_cdf(z));
    }
    for z in [1.0, 30.0, 700.0, 2500.0] {
        let direct = bessel_i1(z).map_or("overflow".to_string(), |v| format!("{v:.6e}"));
        println!(
            "I1({z:6}) = {direct:>13}   ln I1 = {:.6}   ln(I1 e^-z) = {:.6}",
            log_bessel_i1(z)?,
            log_bessel_i1_scaled(z)?
        );
    }
    Ok(())
}
