//! Edge-mode branch of the transverse 1D operator: the in-gap eigenvalue
//! for each tangential wavenumber, and the bound state at λ = 0.5.
//!
//! cargo run --release --example dispersion [n]

use dirac_edge::mass::TransitionProfile;
use dirac_edge::spectrum::{aligned_distance, dispersion_slope, scan_point, Grid1D};
use num_complex::Complex64;

fn main() -> dirac_edge::Result<()> {
    let n = std::env::args().nth(1).map_or(512, |s| s.parse().expect("grid size"));
    let grid = Grid1D::symmetric(30.0, n);
    let profile = TransitionProfile::tanh(1.0)?;

    let mut rows = Vec::new();
    println!("{:>7} {:>16} {:>10}", "lambda", "omega", "|omega+l|");
    for k in 0..17 {
        let lambda = -0.8 + 0.1 * k as f64;
        let (row, modes) = scan_point(lambda, &profile, grid)?;
        let w = row.gap_omega.expect("edge mode inside the gap");
        println!("{lambda:>7.2} {w:>16.12} {:>10.1e}", (w + lambda).abs());
        if k == 13 {
            let u = grid.nodes();
            let sech: Vec<Complex64> = u
                .iter()
                .map(|x| Complex64::new(1.0 / (x.cosh() * 2f64.sqrt()), 0.0))
                .chain(u.iter().map(|_| Complex64::new(0.0, 0.0)))
                .collect();
            println!("        bound state vs (sech u, 0)/sqrt2: {:.2e}", aligned_distance(&modes[0].vector, &sech, grid.du()));
        }
        rows.push(row);
    }
    let (slope, intercept) = dispersion_slope(&rows).expect("modes found");
    println!("omega = {slope:.10} lambda + {intercept:.2e}");
    Ok(())
}
