// Digamma and polygamma values as certified enclosures, checked against the
// independent Hurwitz-sum oracle, plus the inverse of `ψ`.

use polybound::engine::polygamma_oracle;
use polybound::{Engine, PrecisionConfig};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let engine = Engine::new(PrecisionConfig::default())?;

    let gamma = engine.digamma(1.0)?;
    println!("psi(1)       = {gamma}");
    let zeta2 = engine.polygamma(1, 1.0)?;
    println!("psi'(1)      = {zeta2}");
    assert!((zeta2.to_f64() - std::f64::consts::PI.powi(2) / 6.0).abs() < 1e-15);

    for (n, x) in [(1, 0.001), (3, 2.5), (8, 700.0)] {
        let v = engine.polygamma(n, x)?;
        let oracle = polygamma_oracle(n, x, 2000)?;
        assert!(v.abs().overlaps(&oracle));
        println!("psi^({n})({x}) = {v}");
    }

    let x = engine.digamma_inverse(0.0)?;
    println!("psi^-1(0)    = {x}");
    assert!(engine.digamma_at(&x)?.to_f64().abs() < 1e-30);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
