//! Electron at rest up to recoil: the closed-form matrix `-i q_L (1 + sigma_1)`
//! against the full pipeline with `sin(theta) = q_L`.

use std::f64::consts::FRAC_PI_2;

use kapitza_spin::compton::{elliptic_polarization, spin_matrix};
use kapitza_spin::contrast::{contrast_at, minimize_contrast, BlochPair};
use kapitza_spin::kinematics::ScatterConfig;
use kapitza_spin::taylor::low_momentum_matrix;

fn main() -> kapitza_spin::Result<()> {
    let q_l = 0.02;
    let closed = low_momentum_matrix(q_l);
    let at = BlochPair::new(3.0 * FRAC_PI_2, 0.0);
    println!("closed form: C'(3pi/2, 0) = {:e}", contrast_at(&closed, at)?);

    let full = spin_matrix(&ScatterConfig::new(q_l, 0.0, 0.0)?, &elliptic_polarization(q_l.asin()))?;
    println!("|full - closed|_max = {:e}", full.max_abs_diff(&closed));
    let r = minimize_contrast(&full)?;
    println!("full: contrast = {:e}, alpha = {:.6} (3pi/2 = {:.6}), phi = {}", r.value, r.alpha, 3.0 * FRAC_PI_2, r.phi);
    println!("prob_A = {:e}, prob_B = {:e}", r.prob_a, r.prob_b);
    Ok(())
}
