// The smallest `n` at which B06 fails on a grid, with a witness point.

use polybound::search::threshold_n;
use polybound::verifier::{Grid, SampleGrid};
use polybound::{Engine, PrecisionConfig};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let engine = Engine::new(PrecisionConfig::default())?;
    let grid: Grid = SampleGrid::log(1e-3, 1.0, 300)?.into();
    let result = threshold_n(&grid, 64, &engine)?;
    let n = result.smallest_failing_n.ok_or("no failure up to the cap")?;
    let w = result.witness.as_ref().unwrap();
    println!("smallest failing n on {}: {n}", result.grid_meta);
    println!("witness x = {:.6e}, margin = {:.3e}", w.x, w.margin);
    if let Some((lo, hi)) = result.crossing {
        println!("sign change in [{lo:.12e}, {hi:.12e}]");
    }
    assert!(n > 2);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
