// The inequality catalog: metadata for every bound and a certified
// evaluation of each case at one point.

use polybound::catalog::{evaluate_bound, list_bounds, BoundCase, Status};
use polybound::{Engine, PrecisionConfig};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let engine = Engine::new(PrecisionConfig::default())?;
    let x = 0.75;
    let mut cases = 0;
    for info in list_bounds() {
        println!("{:<34} {}", info.id.name(), info.statement);
        for case in BoundCase::expand(info.id, 3, 2) {
            let ev = evaluate_bound(&case, x, &engine)?;
            println!("    {:<16} margin {:>12.5e}  {:?}", case.tag(), ev.margin_f64(), ev.status());
            assert_eq!(ev.status(), Status::Certified);
            cases += 1;
        }
    }
    println!("{cases} cases certified at x = {x}");
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
