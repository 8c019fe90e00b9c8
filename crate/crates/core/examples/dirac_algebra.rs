//! Gamma matrices, free bispinors and their normalisation at a sample
//! kinematic point.
//!
//! cargo run --example dirac_algebra -- 0.3 1.0

use kapitza_spin::dirac::{bispinor_u, dirac_adjoint, gammas, Branch, Spin};
use kapitza_spin::kinematics::{build_kinematics, ScatterConfig};
use kapitza_spin::linalg::DiracMatrix;

fn main() -> kapitza_spin::Result<()> {
    let mut args = std::env::args().skip(1).map(|a| a.parse::<f64>().expect("numeric argument"));
    let q2 = args.next().unwrap_or(0.3);
    let q3 = args.next().unwrap_or(1.0);

    let g = gammas();
    let metric = [1.0, -1.0, -1.0, -1.0];
    let mut worst = 0.0f64;
    for mu in 0..4 {
        for nu in 0..4 {
            let expected = if mu == nu {
                DiracMatrix::identity().scale((2.0 * metric[mu]).into())
            } else {
                DiracMatrix::zero()
            };
            worst = worst.max((g[mu] * g[nu] + g[nu] * g[mu] - expected).max_abs());
        }
    }
    println!("clifford max deviation = {worst:e}");

    let kin = build_kinematics(&ScatterConfig::new(0.02, q2, q3)?);
    println!("p_i = {:?}, p.p = {}", kin.p_i.0, kin.p_i.square());
    println!("p_f = {:?}", kin.p_f.0);
    for s in Spin::BOTH {
        let u = bispinor_u(&kin.p_i, s, Branch::Positive)?;
        let ubar = dirac_adjoint(&u);
        let overlaps: Vec<String> = Spin::BOTH
            .iter()
            .map(|&t| format!("{:.3e}", ubar.dot(&bispinor_u(&kin.p_i, t, Branch::Positive).unwrap())))
            .collect();
        println!("{s:?}: u^dag u = {:.12} (E = {:.12}), ubar u' = [{}]", u.norm_sqr(), kin.p_i.time(), overlaps.join(", "));
    }
    Ok(())
}
