//! Spin-propagation matrix for one momentum configuration and the elliptic
//! polarization family.
//!
//! cargo run --example spin_matrix -- <q3> <theta>

use kapitza_spin::compton::{compton_tensor, elliptic_polarization};
use kapitza_spin::kinematics::ScatterConfig;

fn main() -> kapitza_spin::Result<()> {
    let mut args = std::env::args().skip(1).map(|a| a.parse::<f64>().expect("numeric argument"));
    let q3 = args.next().unwrap_or(1.0);
    let theta = args.next().unwrap_or(std::f64::consts::FRAC_PI_4);

    let tensor = compton_tensor(&ScatterConfig::new(0.02, 0.0, q3)?)?;
    for i in 2..4 {
        for j in 2..4 {
            let b = tensor.block(i, j);
            println!("M^{i}{j} = [[{:.6}, {:.6}], [{:.6}, {:.6}]]", b[(0, 0)], b[(0, 1)], b[(1, 0)], b[(1, 1)]);
        }
    }
    let pol = elliptic_polarization(theta);
    let m = tensor.contract(pol.left(), pol.right());
    println!("theta = {theta}");
    for r in 0..2 {
        println!("  [{:.6e}, {:.6e}]", m[(r, 0)], m[(r, 1)]);
    }
    println!("det M = {:.3e}", m.det());
    Ok(())
}
