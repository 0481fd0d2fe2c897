//! Numerical estimates for the open constants: critical shifts of the
//! log-mean bounds and the largest `n` for which B06 holds on a grid.

use rayon::prelude::*;
use rug::Float;
use serde::{Deserialize, Serialize};

use crate::approx::ApproxReal;
use crate::catalog::{root_norm, BoundCase, BoundId};
use crate::engine::Engine;
use crate::error::{Error, Result};
use crate::means::{gen_log_mean_at, solve_shift_at, MeanOrder};
use crate::verifier::{refine_counterexample, sweep_many, Counterexample, Grid, SampleError};

/// Largest shift tried when solving for a critical shift.
pub const Q_MAX: f64 = 4.0;

/// Relative tolerance on the defining equality of a critical shift.
pub const RESIDUAL_TOL: f64 = 1e-9;

/// Abscissae added to every constant search as stand-ins for `x → 0⁺` and `x → ∞`.
pub const PROBES: [f64; 2] = [1e-6, 1e6];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstantEstimate {
    pub name: String,
    pub value: f64,
    /// Grid value and the value moved by the largest neighbouring gap.
    pub bracket: (f64, f64),
    pub argext_x: f64,
    pub grid_meta: String,
    /// The extremum sits at the first or last sampled abscissa.
    pub boundary: bool,
}

impl ConstantEstimate {
    pub fn width(&self) -> f64 {
        self.bracket.1 - self.bracket.0
    }
}

/// Sup and inf of a critical-shift curve.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShiftConstants {
    /// Best shift for the lower bound (sup over the grid).
    pub q: ConstantEstimate,
    /// Best shift for the upper bound (inf over the grid).
    pub p: ConstantEstimate,
    pub failures: Vec<SampleError>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriticalShiftCurve {
    pub n: u32,
    /// `None` for the digamma form, `Some(k)` for the order-`k` form.
    pub k: Option<u32>,
    pub order: MeanOrder,
    pub points: Vec<(f64, f64)>,
    pub failures: Vec<SampleError>,
}

impl CriticalShiftCurve {
    /// Plot-ready CSV `x,q_crit` preceded by `#` comment lines.
    pub fn write_csv(&self, mut out: impl std::io::Write, comments: &[String]) -> Result<()> {
        for c in comments {
            for line in c.lines() {
                writeln!(out, "# {line}")?;
            }
        }
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["x", "q_crit"])?;
        for (x, q) in &self.points {
            w.write_record([format!("{x:e}"), format!("{q:e}")])?;
        }
        w.flush()?;
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThresholdResult {
    pub n_cap: u32,
    /// Smallest `n` with a certified counterexample to B06 on the grid.
    pub smallest_failing_n: Option<u32>,
    /// Deepest certified violation for that `n`.
    pub witness: Option<Counterexample>,
    /// A sign change of the margin narrowed to relative width `1e-10`.
    pub crossing: Option<(f64, f64)>,
    pub grid_meta: String,
}

impl ThresholdResult {
    /// Largest `n` for which B06 held at every grid point.
    pub fn largest_valid_n(&self) -> u32 {
        self.smallest_failing_n.map_or(self.n_cap, |n| n - 1)
    }
}

/// `q >= 0` with `e^{-ψ(L(order; x, x+q))} = root_norm(n, x)`.
pub fn critical_shift(n: u32, order: MeanOrder, x: f64, engine: &Engine) -> Result<f64> {
    critical_shift_general(n, None, order, x, engine)
}

/// `q >= 0` with `|ψ⁽ᵏ⁾(L(order; x, x+q))|/(k-1)! = root_norm(n, x)^k`.
pub fn critical_shift_nk(n: u32, k: u32, order: MeanOrder, x: f64, engine: &Engine) -> Result<f64> {
    if !(1..n).contains(&k) {
        return Err(Error::parameter(format!("need 1 <= k <= n-1, got n={n}, k={k}")));
    }
    critical_shift_general(n, Some(k), order, x, engine)
}

fn critical_shift_general(n: u32, k: Option<u32>, order: MeanOrder, x: f64, engine: &Engine) -> Result<f64> {
    if n < 1 {
        return Err(Error::parameter("critical shift needs n >= 1"));
    }
    let bits = engine.bits();
    let target_root = root_norm(engine, n, x)?;
    // mean value at which the left side equals the root
    let mean = match k {
        None => engine.digamma_inverse_at(&-target_root.ln()?)?,
        Some(k) => {
            let fact = crate::catalog::factorial(k - 1, bits);
            engine.polygamma_abs_inverse(k, &(&target_root.pow_u(k) * &fact))?
        }
    };
    let xf = Float::with_val(bits, x);
    let q = solve_shift_at(order, &xf, mean.value(), Q_MAX, &engine.config().solver_tol())?;
    let l = ApproxReal::exact(gen_log_mean_at(order, &xf, &Float::with_val(bits, &xf + &q), bits)?);
    let left = match k {
        None => (-engine.digamma_at(&l)?).exp(),
        Some(k) => crate::catalog::root_norm_at(engine, k, &l)?,
    };
    let residual = (&left - &target_root).to_f64().abs();
    if residual.is_nan() || residual > RESIDUAL_TOL * target_root.to_f64() {
        return Err(Error::NoConvergence(format!(
            "critical shift at x={x}: residual {residual:e} exceeds tolerance"
        )));
    }
    Ok(q.to_f64())
}

fn curve_over(n: u32, k: Option<u32>, order: MeanOrder, points: &[f64], engine: &Engine) -> CriticalShiftCurve {
    let results: Vec<Result<f64>> = points
        .par_iter()
        .map(|&x| critical_shift_general(n, k, order, x, engine))
        .collect();
    let mut curve = CriticalShiftCurve {
        n,
        k,
        order,
        points: Vec::new(),
        failures: Vec::new(),
    };
    for (&x, r) in points.iter().zip(results) {
        match r {
            Ok(q) => curve.points.push((x, q)),
            Err(e) => curve.failures.push(SampleError {
                x,
                message: e.to_string(),
            }),
        }
    }
    curve
}

/// Critical shifts at every grid point; failed points are recorded, not fatal.
pub fn critical_shift_curve(n: u32, order: MeanOrder, grid: &Grid, engine: &Engine) -> Result<CriticalShiftCurve> {
    if n < 1 {
        return Err(Error::parameter("critical shift needs n >= 1"));
    }
    let points = Grid::new(grid.parts.clone())?.points();
    Ok(curve_over(n, None, order, &points, engine))
}

/// Sup (`q`) and inf (`p`) of the critical shift over the grid plus the probes.
pub fn best_shift_constants(n: u32, order: MeanOrder, grid: &Grid, engine: &Engine) -> Result<ShiftConstants> {
    if n < 1 {
        return Err(Error::parameter("critical shift needs n >= 1"));
    }
    constants(n, None, order, grid, engine)
}

/// [`best_shift_constants`] for the order-`k` form, `1 <= k <= n-1`.
pub fn best_nk_constants(n: u32, k: u32, order: MeanOrder, grid: &Grid, engine: &Engine) -> Result<ShiftConstants> {
    if !(1..n).contains(&k) {
        return Err(Error::parameter(format!("need 1 <= k <= n-1, got n={n}, k={k}")));
    }
    constants(n, Some(k), order, grid, engine)
}

fn constants(n: u32, k: Option<u32>, order: MeanOrder, grid: &Grid, engine: &Engine) -> Result<ShiftConstants> {
    let mut points = Grid::new(grid.parts.clone())?.points();
    points.extend(PROBES);
    points.sort_by(f64::total_cmp);
    points.dedup();
    let curve = curve_over(n, k, order, &points, engine);
    if curve.points.is_empty() {
        return Err(Error::NoConvergence("critical shift failed at every grid point".into()));
    }
    let suffix = match (k, order.value() == -1.0) {
        (None, true) => format!("({n})"),
        (None, false) => format!("({n};order={order})"),
        (Some(k), true) => format!("({n},{k})"),
        (Some(k), false) => format!("({n},{k};order={order})"),
    };
    let meta = format!("{} + probes at {:e}, {:e}", grid.describe(), PROBES[0], PROBES[1]);
    Ok(ShiftConstants {
        q: extremum(&curve.points, true, format!("q{suffix}"), meta.clone()),
        p: extremum(&curve.points, false, format!("p{suffix}"), meta),
        failures: curve.failures,
    })
}

fn extremum(pts: &[(f64, f64)], sup: bool, name: String, grid_meta: String) -> ConstantEstimate {
    let better = |a: f64, b: f64| if sup { a > b } else { a < b };
    let mut i = 0;
    for (j, p) in pts.iter().enumerate() {
        if better(p.1, pts[i].1) {
            i = j;
        }
    }
    let v = pts[i].1;
    let gap = [i.checked_sub(1), Some(i + 1)]
        .into_iter()
        .flatten()
        .filter_map(|j| pts.get(j))
        .map(|p| (p.1 - v).abs())
        .fold(0.0, f64::max);
    ConstantEstimate {
        name,
        value: v,
        bracket: if sup { (v, v + gap) } else { (v - gap, v) },
        argext_x: pts[i].0,
        grid_meta,
        boundary: i == 0 || i + 1 == pts.len(),
    }
}

/// `n` values swept together so they share the per-point `ψ` values.
const THRESHOLD_BATCH: u32 = 4;

/// Smallest `n <= n_cap` for which B06 (exploratory) has a certified
/// counterexample on the grid, with a witness.
pub fn threshold_n(grid: &Grid, n_cap: u32, engine: &Engine) -> Result<ThresholdResult> {
    if n_cap < 3 {
        return Err(Error::parameter(format!("threshold_n needs n_cap >= 3, got {n_cap}")));
    }
    let mut out = ThresholdResult {
        n_cap,
        smallest_failing_n: None,
        witness: None,
        crossing: None,
        grid_meta: grid.describe(),
    };
    let mut start = 1;
    while start <= n_cap {
        let end = (start + THRESHOLD_BATCH - 1).min(n_cap);
        let cases: Vec<BoundCase> = (start..=end)
            .map(|n| BoundCase::new(BoundId::B06).n(n).exploratory())
            .collect();
        let reports = sweep_many(&cases, grid, engine)?;
        for (case, report) in cases.iter().zip(&reports) {
            let Some(worst) = report
                .counterexamples
                .iter()
                .min_by(|a, b| a.margin.total_cmp(&b.margin))
            else {
                continue;
            };
            out.smallest_failing_n = case.n;
            out.witness = Some(worst.clone());
            out.crossing = report
                .counterexamples
                .iter()
                .find_map(|c| c.bracket)
                .and_then(|br| refine_counterexample(case, br, engine).ok())
                .and_then(|c| c.bracket);
            return Ok(out);
        }
        start = end + 1;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::PrecisionConfig;
    use crate::verifier::SampleGrid;

    fn engine() -> Engine {
        Engine::new(PrecisionConfig::default()).unwrap()
    }

    #[test]
    fn critical_shift_at_one_lies_in_unit_interval() {
        let e = engine();
        let q = critical_shift(1, MeanOrder::LOGARITHMIC, 1.0, &e).unwrap();
        assert!(q > 0.0 && q < 1.0, "{q}");
        let q100 = critical_shift(1, MeanOrder::LOGARITHMIC, 100.0, &e).unwrap();
        assert!(q100 > 0.0 && q100 < 1.0, "{q100}");
    }

    #[test]
    fn raising_the_order_lowers_the_shift() {
        let e = engine();
        for &x in &[0.01, 1.0, 30.0] {
            let lo = critical_shift(2, MeanOrder::new(-1.0).unwrap(), x, &e).unwrap();
            let mid = critical_shift(2, MeanOrder::new(0.0).unwrap(), x, &e).unwrap();
            let hi = critical_shift(2, MeanOrder::new(1.0).unwrap(), x, &e).unwrap();
            assert!(lo > mid && mid > hi, "x={x}: {lo} {mid} {hi}");
        }
    }

    #[test]
    fn nk_shift_respects_the_parameter_range() {
        let e = engine();
        assert!(critical_shift_nk(2, 2, MeanOrder::LOGARITHMIC, 1.0, &e).is_err());
        assert!(critical_shift_nk(2, 0, MeanOrder::LOGARITHMIC, 1.0, &e).is_err());
        let q = critical_shift_nk(2, 1, MeanOrder::LOGARITHMIC, 1.0, &e).unwrap();
        assert!(q > 0.0 && q <= 1.0, "{q}");
    }

    #[test]
    fn constants_bracket_their_values() {
        let e = engine();
        let grid: Grid = SampleGrid::log(1e-2, 1e2, 25).unwrap().into();
        let c = best_shift_constants(1, MeanOrder::LOGARITHMIC, &grid, &e).unwrap();
        assert!(c.failures.is_empty());
        assert!(c.q.value <= 1.0 && c.p.value >= 0.0);
        assert!(c.p.value <= c.q.value);
        for est in [&c.q, &c.p] {
            assert!(est.bracket.0 <= est.value && est.value <= est.bracket.1);
        }
        assert_eq!(c.q.name, "q(1)");
        assert_eq!(c.p.name, "p(1)");
    }

    #[test]
    fn threshold_rejects_small_caps() {
        let e = engine();
        assert!(threshold_n(&Grid::default(), 2, &e).is_err());
    }

    #[test]
    fn curve_csv_has_header() {
        let e = engine();
        let grid: Grid = SampleGrid::log(0.5, 2.0, 3).unwrap().into();
        let curve = critical_shift_curve(1, MeanOrder::LOGARITHMIC, &grid, &e).unwrap();
        let mut buf = Vec::new();
        curve.write_csv(&mut buf, &[]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("x,q_crit\n"));
        assert_eq!(text.lines().count(), 4);
    }
}
