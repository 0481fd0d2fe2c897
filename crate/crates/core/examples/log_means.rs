// Logarithmic, identric and generalized logarithmic means, and solving for
// the shift `q` with `L(p; x, x+q)` equal to a target.

use polybound::means::{gen_log_mean, log_mean, solve_shift, MeanOrder};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let (a, b) = (1.0, 2.0);
    let l = log_mean(a, b)?;
    println!("L(1, 2)            = {l}");
    assert!((l - 1.0 / 2f64.ln()).abs() < 1e-15);

    let mut prev = 0.0;
    for p in [-3.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0] {
        let v = gen_log_mean(MeanOrder::new(p)?, a, b)?;
        println!("L({p:>4}; 1, 2)     = {v}");
        assert!(v > prev);
        prev = v;
    }

    let near = gen_log_mean(MeanOrder::new(1e-12)?, a, b)?;
    let identric = gen_log_mean(MeanOrder::IDENTRIC, a, b)?;
    assert!((near - identric).abs() < 1e-11);

    let x = 3.0;
    let target = 1.0 / (1.0f64 / x).ln_1p();
    let q = solve_shift(MeanOrder::LOGARITHMIC, x, target, 4.0)?;
    println!("shift with L(3, 3+q) = 1/ln(4/3): q = {q}");
    assert!((q - 1.0).abs() < 1e-12);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
