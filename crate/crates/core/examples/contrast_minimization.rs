//! Grid seed and Newton polish of the contrast for an arbitrary matrix,
//! printing every iterate.

use kapitza_spin::contrast::{contrast_derivatives, minimize_contrast_with, NewtonOptions};
use kapitza_spin::linalg::{Complex64, SpinMatrix};

fn main() -> kapitza_spin::Result<()> {
    let c = Complex64::new;
    let m = SpinMatrix([[c(0.8, 0.1), c(-0.3, 0.5)], [c(0.2, -0.4), c(0.6, 0.0)]]);
    let opts = NewtonOptions { record_trace: true, ..NewtonOptions::default() };
    let r = minimize_contrast_with(&m, &opts)?;
    println!("seed (alpha, phi) = ({:.6}, {:.6})", r.seed.alpha, r.seed.phi);
    for (k, s) in r.trace.iter().enumerate() {
        let d = contrast_derivatives(&m, kapitza_spin::contrast::BlochPair::new(s.alpha, s.phi))?;
        println!(
            "{k:2}  alpha={:.12} phi={:.12}  C'={:.15e}  |g|={:.3e}",
            s.alpha,
            s.phi,
            d.value,
            s.gradient[0].hypot(s.gradient[1])
        );
    }
    println!("status = {}, iterations = {}", r.status, r.iterations);
    println!("contrast = {:.15e}", r.value);

    // independent check: ratio of the singular values squared
    let g = m.adjoint() * m;
    let (tr, det) = (g.trace().re, g.det().re);
    let disc = (tr * tr / 4.0 - det).max(0.0).sqrt();
    println!("eigenvalue ratio = {:.15e}", (tr / 2.0 - disc) / (tr / 2.0 + disc));
    Ok(())
}
