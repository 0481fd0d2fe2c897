// Critical shifts of the log-mean lower bound and grid estimates of the
// best constants, with the boundary probes at `1e-6` and `1e6`.

use polybound::means::MeanOrder;
use polybound::search::{best_nk_constants, best_shift_constants, critical_shift};
use polybound::verifier::{Grid, SampleGrid};
use polybound::{Engine, PrecisionConfig};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let engine = Engine::new(PrecisionConfig::default())?;
    for x in [0.01, 1.0, 100.0] {
        let q = critical_shift(1, MeanOrder::LOGARITHMIC, x, &engine)?;
        println!("q_crit(n = 1, x = {x}) = {q:.12}");
    }

    let grid: Grid = SampleGrid::log(1e-3, 1e3, 60)?.into();
    let c = best_shift_constants(1, MeanOrder::LOGARITHMIC, &grid, &engine)?;
    for est in [&c.q, &c.p] {
        println!(
            "{} ~ {:.10} in [{:.10}, {:.10}] at x = {:e}{}",
            est.name,
            est.value,
            est.bracket.0,
            est.bracket.1,
            est.argext_x,
            if est.boundary { " (grid boundary)" } else { "" }
        );
    }
    assert!(c.p.value > 0.0 && c.q.value < 1.0);

    let nk = best_nk_constants(2, 1, MeanOrder::LOGARITHMIC, &grid, &engine)?;
    println!("{} ~ {:.10}, {} ~ {:.10}", nk.q.name, nk.q.value, nk.p.name, nk.p.value);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
