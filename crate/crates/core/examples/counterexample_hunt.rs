// B06 beyond its proven range: a sweep at large `n` finds certified
// violations, and a sign change is narrowed by bisection.

use polybound::catalog::{BoundCase, BoundId};
use polybound::verifier::{refine_counterexample, sweep, Grid, SampleGrid};
use polybound::{Engine, PrecisionConfig};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let engine = Engine::new(PrecisionConfig::default())?;
    let grid: Grid = SampleGrid::log(1e-3, 1e-1, 200)?.into();
    let case = BoundCase::new(BoundId::B06).n(40).exploratory();

    let report = sweep(&case, &grid, &engine)?;
    println!(
        "{}: {} of {} samples violated (re-certified at doubled precision)",
        report.label, report.violated_count, report.samples
    );
    assert!(report.has_counterexample());

    let bracket = report
        .counterexamples
        .iter()
        .find_map(|c| c.bracket)
        .ok_or("no sign change on this grid")?;
    let refined = refine_counterexample(&case, bracket, &engine)?;
    let (lo, hi) = refined.bracket.unwrap();
    println!("sign change in [{lo:.12e}, {hi:.12e}]");
    println!("deepest refined point x = {:.6e}, margin {:.3e}", refined.x, refined.margin);
    assert!(refined.margin < -refined.err);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
