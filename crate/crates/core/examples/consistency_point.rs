//! The `q3 = 1`, `theta = pi/4` configuration, where the spin matrix is
//! singular and one spin state is not diffracted at all.
//!
//! Prints the minimiser next to `7 pi / 4` and how the offset scales with
//! the laser momentum.

use std::f64::consts::{FRAC_PI_4, PI};

use kapitza_spin::compton::{elliptic_polarization, spin_matrix};
use kapitza_spin::contrast::minimize_contrast;
use kapitza_spin::kinematics::ScatterConfig;

fn main() -> kapitza_spin::Result<()> {
    let pol = elliptic_polarization(FRAC_PI_4);
    let target = 7.0 * PI / 4.0;
    println!("{:>8} {:>14} {:>14} {:>12} {:>10}", "q_L", "contrast", "alpha", "alpha-7pi/4", "phi");
    for q_l in [0.04, 0.02, 0.01, 0.005, 0.001] {
        let m = spin_matrix(&ScatterConfig::new(q_l, 0.0, 1.0)?, &pol)?;
        let r = minimize_contrast(&m)?;
        println!(
            "{q_l:8} {:14.3e} {:14.9} {:12.3e} {:10.2e}",
            r.value,
            r.alpha,
            r.alpha - target,
            r.phi
        );
    }
    Ok(())
}
