//! Logarithmic and generalized logarithmic means, and the inverse problem
//! `L(p; x, x+q) = target` in `q`.
//!
//! With `r = b/a - 1`, `ℓ = ln(1+r)` and `z = (p+1)ℓ` the power branch reads
//! `L = a exp((ln(expm1(z)/z) + ln(ln1p(r)/r)) / p)`, which has no
//! cancellation at `a ≈ b` or at `p ≈ -1`. Only `p ≈ 0` loses bits, and those
//! are bought back with extra internal precision.

use std::cmp::Ordering;

use rug::Float;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Order `p` of the generalized logarithmic mean. `-1` is the logarithmic
/// mean and `0` the identric mean.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MeanOrder(f64);

impl MeanOrder {
    pub const LOGARITHMIC: MeanOrder = MeanOrder(-1.0);
    pub const IDENTRIC: MeanOrder = MeanOrder(0.0);

    pub fn new(p: f64) -> Result<Self> {
        if !p.is_finite() {
            return Err(Error::parameter(format!("mean order must be finite, got {p}")));
        }
        Ok(MeanOrder(p))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl std::fmt::Display for MeanOrder {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

fn check_pair(a: &Float, b: &Float) -> Result<()> {
    let ok = |v: &Float| v.is_finite() && v.cmp0() == Some(Ordering::Greater);
    if !ok(a) || !ok(b) {
        return Err(Error::domain(format!(
            "means need positive finite arguments, got {} and {}",
            a.to_f64(),
            b.to_f64()
        )));
    }
    Ok(())
}

/// `(b-a)/(ln b - ln a)`, or `a` when `a = b`, at precision `prec`.
pub fn log_mean_at(a: &Float, b: &Float, prec: u32) -> Result<Float> {
    check_pair(a, b)?;
    if a == b {
        return Ok(Float::with_val(prec, a));
    }
    let w = prec + 32;
    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
    let r = Float::with_val(w, hi - lo) / lo;
    let l = Float::with_val(w, r.ln_1p_ref());
    Ok(Float::with_val(prec, Float::with_val(w, lo * r) / l))
}

/// `L(p; a, b)` at precision `prec`.
pub fn gen_log_mean_at(p: MeanOrder, a: &Float, b: &Float, prec: u32) -> Result<Float> {
    check_pair(a, b)?;
    if a == b {
        return Ok(Float::with_val(prec, a));
    }
    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
    let p = p.value();
    let base = prec + 32;
    let ell = {
        let r = Float::with_val(base, hi - lo) / lo;
        Float::with_val(base, r.ln_1p_ref())
    };
    if p == 0.0 || p.abs() * ell.to_f64().max(1.0).powi(2) < f64::from(base).exp2().recip() {
        return identric_at(lo, hi, prec);
    }
    // difference quotient in p near the identric branch
    let boost = if p.abs() < 1.0 {
        ((-p.abs().log2()).ceil() as u32).min(4 * prec)
    } else {
        0
    };
    let w = base + boost;
    let r = Float::with_val(w, hi - lo) / lo;
    let ell = Float::with_val(w, r.ln_1p_ref());
    let z = Float::with_val(w, &ell * p) + &ell;
    let g = if z.is_zero() {
        Float::new(w)
    } else {
        let q = Float::with_val(w, z.exp_m1_ref()) / &z;
        q.ln()
    };
    let h = Float::with_val(w, &ell / &r).ln();
    let expo = Float::with_val(w, g + h) / p;
    Ok(Float::with_val(prec, Float::with_val(w, lo * expo.exp())))
}

/// `e^{-1} (b^b/a^a)^{1/(b-a)}`.
fn identric_at(lo: &Float, hi: &Float, prec: u32) -> Result<Float> {
    let w = prec + 32;
    let r = Float::with_val(w, hi - lo) / lo;
    let ell = Float::with_val(w, r.ln_1p_ref());
    // ln L = ln a + ℓ (1+r)/r - 1
    let t = Float::with_val(w, &ell * Float::with_val(w, &r + 1u32)) / &r - 1u32;
    Ok(Float::with_val(prec, Float::with_val(w, lo * t.exp())))
}

/// Logarithmic mean in double precision.
pub fn log_mean(a: f64, b: f64) -> Result<f64> {
    Ok(log_mean_at(&Float::with_val(64, a), &Float::with_val(64, b), 64)?.to_f64())
}

/// Generalized logarithmic mean in double precision.
pub fn gen_log_mean(p: MeanOrder, a: f64, b: f64) -> Result<f64> {
    Ok(gen_log_mean_at(p, &Float::with_val(64, a), &Float::with_val(64, b), 64)?.to_f64())
}

/// `q ∈ [0, q_max]` with `L(p; x, x+q) = target`, by bisection.
///
/// Stops once the bracket is narrower than `tol·max(1, target)`; the mean is
/// 1-Lipschitz in `q`, so the same bound holds for the residual.
pub fn solve_shift_at(p: MeanOrder, x: &Float, target: &Float, q_max: f64, tol: &Float) -> Result<Float> {
    let prec = x.prec().max(target.prec());
    check_pair(x, x)?;
    if !(q_max > 0.0 && q_max.is_finite()) {
        return Err(Error::parameter(format!("q_max must be positive, got {q_max}")));
    }
    match target.partial_cmp(x) {
        Some(Ordering::Less) | None => {
            return Err(Error::bracket(format!(
                "target {} is below x = {}",
                target.to_f64(),
                x.to_f64()
            )))
        }
        Some(Ordering::Equal) => return Ok(Float::new(prec)),
        _ => {}
    }
    let mean = |q: &Float| gen_log_mean_at(p, x, &Float::with_val(prec, x + q), prec);
    let mut hi = Float::with_val(prec, q_max);
    if mean(&hi)? < *target {
        return Err(Error::bracket(format!(
            "L(p; x, x + {q_max}) is below the target {}",
            target.to_f64()
        )));
    }
    let mut lo = Float::new(prec);
    let scale = Float::with_val(prec, target.clone().max(&Float::with_val(prec, 1)));
    let width = Float::with_val(prec, tol * &scale);
    for _ in 0..200 {
        if Float::with_val(prec, &hi - &lo) <= width {
            break;
        }
        let mid = Float::with_val(prec, &lo + &hi) >> 1u32;
        if mean(&mid)? < *target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(Float::with_val(prec, &lo + &hi) >> 1u32)
}

/// [`solve_shift_at`] in double precision with tolerance `1e-14`.
pub fn solve_shift(p: MeanOrder, x: f64, target: f64, q_max: f64) -> Result<f64> {
    let prec = 96;
    let tol = Float::with_val(prec, 1e-14);
    Ok(solve_shift_at(p, &Float::with_val(prec, x), &Float::with_val(prec, target), q_max, &tol)?.to_f64())
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: u32 = 200;

    fn f(v: f64) -> Float {
        Float::with_val(P, v)
    }

    fn glm(p: f64, a: f64, b: f64) -> Float {
        gen_log_mean_at(MeanOrder::new(p).unwrap(), &f(a), &f(b), P).unwrap()
    }

    #[test]
    fn log_mean_values() {
        assert_eq!(log_mean(3.0, 3.0).unwrap(), 3.0);
        assert!((log_mean(1.0, 2.0).unwrap() - 1.0 / 2f64.ln()).abs() < 1e-15);
        assert_eq!(log_mean(1.0, 2.0).unwrap(), log_mean(2.0, 1.0).unwrap());
        assert!(log_mean(0.0, 1.0).is_err());
        assert!(log_mean(-1.0, 1.0).is_err());
    }

    #[test]
    fn three_branches() {
        let lm = glm(-1.0, 1.0, 2.0);
        assert!((lm.to_f64() - std::f64::consts::LOG2_E).abs() < 1e-15);
        assert!((glm(0.0, 1.0, 2.0).to_f64() - 4.0 / std::f64::consts::E).abs() < 1e-15);
        assert!((glm(1.0, 1.0, 2.0).to_f64() - 1.5).abs() < 1e-15);
        // p = 2: sqrt((b³ - a³)/(3(b - a)))
        assert!((glm(2.0, 1.0, 2.0).to_f64() - (7.0f64 / 3.0).sqrt()).abs() < 1e-15);
        // p = -2: geometric mean
        assert!((glm(-2.0, 1.0, 4.0).to_f64() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn log_mean_agrees_with_order_minus_one_at_full_precision() {
        let a = f(0.37);
        let b = f(11.5);
        let d = Float::with_val(P, log_mean_at(&a, &b, P).unwrap() - glm(-1.0, 0.37, 11.5));
        assert!(d.abs() < 1e-55);
    }

    #[test]
    fn close_arguments_do_not_cancel() {
        // L(p; a, a(1+h)) = a (1 + h/2 + (p-1) h²/24 + ...)
        let a = 3.0;
        let b = a * (1.0 + 1e-12);
        let h = Float::with_val(P, f(b) - a) / a;
        for &p in &[-3.0, -1.0, 0.0, 0.5, 2.0] {
            let v = glm(p, a, b);
            let h2 = Float::with_val(P, h.square_ref());
            let want = Float::with_val(P, &h >> 1u32) + h2 * ((p - 1.0) / 24.0) + 1u32;
            let rel = Float::with_val(P, &v / Float::with_val(P, want * a)) - 1u32;
            assert!(rel.abs() < 1e-30, "p={p}");
        }
    }

    #[test]
    fn continuous_across_special_orders() {
        for &(a, b) in &[(1.0, 2.0), (0.01, 5.0), (7.0, 7.5)] {
            for &c in &[-1.0, 0.0] {
                let at = glm(c, a, b);
                for &e in &[1e-7, -1e-7, 1e-30, -1e-30] {
                    let near = glm(c + e, a, b);
                    let rel = (Float::with_val(P, &near / &at) - 1u32).abs();
                    assert!(rel < 1e-5, "a={a} b={b} p={}", c + e);
                }
            }
        }
    }

    #[test]
    fn identric_limit_is_approached_linearly() {
        let i = glm(0.0, 1.0, 2.0);
        let d1 = Float::with_val(P, glm(1e-10, 1.0, 2.0) - &i).abs();
        let d2 = Float::with_val(P, glm(2e-10, 1.0, 2.0) - &i).abs();
        let ratio = Float::with_val(P, &d2 / &d1).to_f64();
        assert!((ratio - 2.0).abs() < 1e-6, "{ratio}");
    }

    #[test]
    fn solve_shift_examples() {
        let lm = MeanOrder::LOGARITHMIC;
        assert_eq!(solve_shift(lm, 5.0, 5.0, 2.0).unwrap(), 0.0);
        assert!((solve_shift(lm, 1.0, 1.0 / 2f64.ln(), 2.0).unwrap() - 1.0).abs() < 1e-12);
        let t = 4.0 / std::f64::consts::E;
        assert!((solve_shift(MeanOrder::IDENTRIC, 1.0, t, 2.0).unwrap() - 1.0).abs() < 1e-12);
        assert!(solve_shift(lm, 1.0, 10.0, 2.0).is_err());
        assert!(solve_shift(lm, 1.0, 0.5, 2.0).is_err());
    }

    #[test]
    fn rejects_bad_order() {
        assert!(MeanOrder::new(f64::NAN).is_err());
    }
}
