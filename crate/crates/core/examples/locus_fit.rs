//! Minimum-contrast ellipticity along `q3`, its two-branch fit and the
//! diffraction probabilities on the fitted curve.
//!
//! cargo run --release --example locus_fit -- [q3_points]

use kapitza_spin::sweep::{fit_locus, locus_probabilities, locus_q3_samples, minimum_locus, LocusOptions};

fn main() -> kapitza_spin::Result<()> {
    let n = std::env::args().nth(1).map_or(201, |a| a.parse().expect("q3 points"));
    let q3s = locus_q3_samples(n);
    let opts = LocusOptions::default();
    let locus = minimum_locus(&q3s, &opts, None)?;
    for p in locus.iter().step_by((n / 10).max(1)) {
        println!("q3 = {:.4}  1/theta = {:9.4}  alpha = {:.4}  contrast = {:.2e}", p.q3, p.inv_theta, p.alpha, p.contrast);
    }

    let data: Vec<(f64, f64)> = locus.iter().map(|p| (p.q3, p.inv_theta)).collect();
    let (left, right) = fit_locus(&data)?;
    println!("{left}\n{right}");

    let probs = locus_probabilities(&q3s, &left, &right, opts.q_l, None)?;
    let worst = probs.iter().max_by(|a, b| (a.prob_a / a.prob_b).total_cmp(&(b.prob_a / b.prob_b))).unwrap();
    println!("largest prob_A/prob_B on the fitted curve: {:.3e} at q3 = {}", worst.prob_a / worst.prob_b, worst.q3);
    Ok(())
}
