use super::{run_jobs, Grid, Job, Triple, VerificationReport};
use crate::catalog::{root_norm, root_norm_at, BoundCase, BoundId};
use crate::engine::{Engine, ExpInvPoly};
use crate::error::{Error, Result};

/// `root_norm(n+1, x) < root_norm(n, x)` for `1 <= n < n_max` at every grid point.
pub fn chain_check(n_max: u32, grid: &Grid, engine: &Engine) -> Result<VerificationReport> {
    if n_max < 2 {
        return Err(Error::parameter(format!("chain_check needs n_max >= 2, got {n_max}")));
    }
    let cases: Vec<BoundCase> = (1..n_max).map(|n| BoundCase::new(BoundId::B11).n(n)).collect();
    let reports = super::sweep_many(&cases, grid, engine)?;
    Ok(VerificationReport::merge(format!("chain[n<={n_max}]"), &reports))
}

/// `|x·root_norm(k, x) - 1|`, the distance from the large-`k` limit `1/x`.
pub fn limit_check(x: f64, k: u32, engine: &Engine) -> Result<f64> {
    if k < 2 {
        return Err(Error::parameter(format!("limit_check needs k >= 2, got {k}")));
    }
    let r = root_norm(engine, k, x)?;
    Ok((&r * &engine.num(x) - engine.int(1)).to_f64().abs())
}

/// Relative distance of `root_norm(k, 1/(e^{1/t}-1))` from its limit `e^{1/t} - 1`.
pub fn expm1_limit_check(t: f64, k: u32, engine: &Engine) -> Result<f64> {
    if k < 2 {
        return Err(Error::parameter(format!("expm1_limit_check needs k >= 2, got {k}")));
    }
    if !(t.is_finite() && t > 0.0) {
        return Err(Error::domain(format!("t must be finite and positive, got {t}")));
    }
    let em1 = engine.num(t).recip()?.exp_m1();
    let y = em1.recip()?;
    let r = root_norm_at(engine, k, &y)?;
    Ok((r.checked_div(&em1)? - engine.int(1)).to_f64().abs())
}

/// `(-1)^k h⁽ᵏ⁾(t) > 0` for `h(t) = e^{1/t} - ψ'(t)`, `k = 0..=k_max`.
pub fn complete_monotonicity_check(k_max: u32, grid: &Grid, engine: &Engine) -> Result<VerificationReport> {
    if k_max > 8 {
        return Err(Error::parameter(format!(
            "complete_monotonicity_check needs k_max <= 8, got {k_max}"
        )));
    }
    let jobs: Vec<Job<'_>> = (0..=k_max)
        .map(|k| {
            let poly = ExpInvPoly::new(k);
            Job {
                label: format!("cm[k={k}]"),
                case: None,
                eval: Box::new(move |p| {
                    let e = p.engine();
                    let t = e.num(p.x());
                    let h = &poly.eval_at(&t)? - &e.psi_at(k + 1, &t)?;
                    let signed = if k % 2 == 0 { h } else { -h };
                    Ok(Triple {
                        lhs: e.int(0),
                        rhs: signed.clone(),
                        margin: signed,
                    })
                }),
            }
        })
        .collect();
    let points = Grid::new(grid.parts.clone())?.points();
    let reports = run_jobs(&jobs, &points, engine, None)?;
    Ok(VerificationReport::merge(format!("cm[k<={k_max}]"), &reports))
}
