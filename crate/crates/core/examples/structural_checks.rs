// Nesting of the normalized polygamma roots, their large-order limits, and
// a finite-order complete monotonicity spot check.

use polybound::verifier::{chain_check, complete_monotonicity_check, expm1_limit_check, limit_check, Grid, SampleGrid};
use polybound::{Engine, PrecisionConfig};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let engine = Engine::new(PrecisionConfig::default())?;
    let grid: Grid = SampleGrid::log(1e-3, 1e3, 200)?.into();

    let chain = chain_check(8, &grid, &engine)?;
    println!("chain n <= 8: {} samples, min margin {:.3e}", chain.samples, chain.min_margin.unwrap());
    assert!(chain.all_certified());

    for k in [16, 32, 64, 128] {
        println!(
            "k = {k:>3}: |x root_k(x) - 1| at x = 1 is {:.4}, relative deviation at t = 1 is {:.4}",
            limit_check(1.0, k, &engine)?,
            expm1_limit_check(1.0, k, &engine)?
        );
    }

    let cm_grid: Grid = SampleGrid::log(0.05, 50.0, 100)?.into();
    let cm = complete_monotonicity_check(6, &cm_grid, &engine)?;
    println!("complete monotonicity k <= 6: {} samples certified", cm.certified_count);
    assert!(cm.all_certified());
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
