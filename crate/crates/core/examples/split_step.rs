//! The propagator on its own, around a smooth mass wall: unitary factors,
//! second-order accuracy in dt, and a reversed plan undoing a forward one.
//!
//! cargo run --release --example split_step

use dirac_edge::fields::{energy, l2_distance, make_grid, SpinorField};
use dirac_edge::propagator::SplitStepPlan;
use num_complex::Complex64;

fn main() -> dirac_edge::Result<()> {
    let grid = make_grid([-16.0, 16.0, -16.0, 16.0], 128, 128)?;
    let mass = grid.sample(|x| x[0].tanh());
    let f0 = SpinorField::from_fn(grid, |x| {
        let g = (-(x[0] - 1.0).powi(2) - x[1].powi(2) / 4.0).exp();
        [Complex64::new(g, 0.0), Complex64::from_polar(0.5 * g, x[1])]
    });
    let t = 2.0;

    let run = |dt: f64| -> dirac_edge::Result<SpinorField> {
        let mut plan = SplitStepPlan::new(grid, mass.clone(), dt)?;
        let mut f = f0.clone();
        plan.advance(&mut f, (t / dt).round() as usize);
        Ok(f)
    };

    let (du, dm) = SplitStepPlan::new(grid, mass.clone(), 0.1)?.unitarity_defect();
    println!("unitarity defect: derivative {du:.1e}, mass {dm:.1e}");

    let reference = run(0.1 / 64.0)?;
    let mut prev = None;
    for k in 0..4 {
        let dt = 0.1 / 2f64.powi(k);
        let f = run(dt)?;
        let e = l2_distance(&f, &reference)?;
        let ratio = prev.map_or(String::new(), |p: f64| format!("ratio {:.3}", p / e));
        println!("dt {dt:<8} error {e:.3e} energy {:.15} {ratio}", energy(&f) / energy(&f0));
        prev = Some(e);
    }

    let mut plan = SplitStepPlan::new(grid, mass, 0.05)?;
    let mut f = f0.clone();
    plan.advance(&mut f, 40);
    plan.reversed().advance(&mut f, 40);
    println!("forward then back: distance {:.2e}", l2_distance(&f, &f0)?);
    Ok(())
}
