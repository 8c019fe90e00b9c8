//! Deviation between the full spin matrix and its second-order expansion
//! along a halving ladder of momenta.
//!
//! cargo run --example taylor_convergence -- <start> <halvings>

use kapitza_spin::compton::elliptic_polarization;
use kapitza_spin::taylor::convergence_ladder;

fn main() -> kapitza_spin::Result<()> {
    let mut args = std::env::args().skip(1);
    let start = args.next().map_or(1e-2, |a| a.parse().expect("start"));
    let halvings = args.next().map_or(4, |a| a.parse().expect("halvings"));

    let report = convergence_ladder(start, halvings, &elliptic_polarization(0.7))?;
    let mut previous = None;
    for r in &report.rungs {
        let ratio = previous.map_or(String::new(), |p: f64| format!("ratio {:.3}", p / r.error));
        let flag = if r.out_of_domain { "  (outside expansion domain)" } else { "" };
        println!("q = {:.6e}  error = {:.6e}  {ratio}{flag}", r.scale, r.error);
        previous = Some(r.error);
    }
    match report.order {
        Some(o) => println!("fitted order = {o:.4}"),
        None => println!("fitted order undefined"),
    }
    Ok(())
}
