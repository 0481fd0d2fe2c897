use std::cmp::Ordering;

use rug::float::Round;
use rug::ops::Pow;
use rug::Float;

use super::Engine;
use crate::approx::{ApproxReal, ERR_PREC};
use crate::error::{Error, Result};

/// Relative neighbourhood on which derivative lower bounds are taken.
const NEIGHBOURHOOD: f64 = 1e-6;

impl Engine {
    /// `x > 0` with `ψ(x) = y`.
    pub fn digamma_inverse(&self, y: f64) -> Result<ApproxReal> {
        if !y.is_finite() {
            return Err(Error::domain(format!("digamma_inverse needs a finite value, got {y}")));
        }
        self.digamma_inverse_at(&self.num(y))
    }

    /// `ψ⁻¹` of an enclosure.
    ///
    /// The root is bracketed with `ln x - 1/x < ψ(x) < ln x - 1/(2x)`,
    /// narrowed by bisection and polished with Newton steps started from the
    /// left end of the bracket (monotone because `ψ` is increasing and concave).
    pub fn digamma_inverse_at(&self, y: &ApproxReal) -> Result<ApproxReal> {
        if !y.is_finite() {
            return Err(Error::domain("digamma_inverse needs a finite value"));
        }
        let yf = y.to_f64();
        let s_lo = solve_log_space(|s| s - 0.5 * (-s).exp(), yf);
        let s_hi = solve_log_space(|s| s - (-s).exp(), yf);
        let target = y.value().clone();
        let eval = |z: &Float| -> Result<(ApproxReal, ApproxReal)> {
            let za = ApproxReal::exact(z.clone());
            Ok((self.psi_at(0, &za)?, self.psi_at(1, &za)?))
        };
        let z = self.invert_increasing(s_lo, s_hi, &target, &eval)?;

        let (v, _) = eval(&z)?;
        let residual = residual_bound(&v, &target, y.err());
        let deriv = trigamma_lower_bound(&z);
        self.finish_inverse(z, residual, deriv)
    }

    /// `z > 0` with `|ψ⁽ᵏ⁾(z)| = target`, for `k >= 1`.
    ///
    /// Works on `-ln|ψ⁽ᵏ⁾|`, which is increasing and concave, bracketed by
    /// `(k-1)!/z^k + k!/(2z^{k+1}) < |ψ⁽ᵏ⁾(z)| < (k-1)!/z^k + k!/z^{k+1}`.
    pub fn polygamma_abs_inverse(&self, k: u32, target: &ApproxReal) -> Result<ApproxReal> {
        if k < 1 {
            return Err(Error::parameter("polygamma_abs_inverse needs k >= 1"));
        }
        if !target.is_positive() {
            return Err(Error::domain("target of polygamma_abs_inverse must be positive"));
        }
        let neg_ln_t = -target.ln()?;
        let ln_fact: f64 = (2..k).map(|i| f64::from(i).ln()).sum();
        let kf = f64::from(k);
        // -ln((k-1)!/z^k (1 + c k/z)) in s = ln z
        let g = move |c: f64| {
            move |s: f64| {
                let a = c * kf;
                let ln1p = if -s > 30.0 {
                    a.ln() - s + (s.exp() / a).ln_1p()
                } else {
                    (a * (-s).exp()).ln_1p()
                };
                -(ln_fact - kf * s + ln1p)
            }
        };
        let tf = neg_ln_t.to_f64();
        let s_lo = solve_log_space(g(0.5), tf);
        let s_hi = solve_log_space(g(1.0), tf);
        let goal = neg_ln_t.value().clone();
        let eval = |z: &Float| -> Result<(ApproxReal, ApproxReal)> {
            let za = ApproxReal::exact(z.clone());
            let pk = self.psi_at(k, &za)?.abs();
            let pk1 = self.psi_at(k + 1, &za)?.abs();
            Ok((-pk.ln()?, pk1.checked_div(&pk)?))
        };
        let z = self.invert_increasing(s_lo, s_hi, &goal, &eval)?;
        let (v, _) = eval(&z)?;
        let residual = residual_bound(&v, &goal, neg_ln_t.err());
        let deriv = log_polygamma_slope_lower_bound(k, &z);
        self.finish_inverse(z, residual, deriv)
    }

    fn finish_inverse(&self, z: Float, residual: Float, deriv_lb: Float) -> Result<ApproxReal> {
        let err = Float::with_val_round(ERR_PREC, &residual / &deriv_lb, Round::Up).0;
        let limit = Float::with_val(ERR_PREC, &z * NEIGHBOURHOOD);
        if err > limit {
            return Err(Error::NoConvergence(format!(
                "inverse residual {} too large at {}",
                err.to_f64(),
                z.to_f64()
            )));
        }
        Ok(ApproxReal::with_err(z, &err))
    }

    /// Root of an increasing concave `f` with `f(z) = target`, where the root
    /// lies in `[e^{s_lo}, e^{s_hi}]` (widened if the seeds are off).
    fn invert_increasing<F>(&self, s_lo: f64, s_hi: f64, target: &Float, f: &F) -> Result<Float>
    where
        F: Fn(&Float) -> Result<(ApproxReal, ApproxReal)>,
    {
        let bits = self.bits();
        let exp_of = |s: f64| Float::with_val(bits, Float::with_val(bits, s).exp_ref());
        let pad = |s: f64| 1e-9 * (1.0 + s.abs());
        let mut s_lo = s_lo - pad(s_lo);
        let mut s_hi = s_hi + pad(s_hi);
        let mut lo = exp_of(s_lo);
        let mut hi = exp_of(s_hi);
        let mut widen = 0;
        loop {
            let below = f(&lo)?.0.value() < target;
            let above = f(&hi)?.0.value() > target;
            if below && above {
                break;
            }
            widen += 1;
            if widen > 60 {
                return Err(Error::bracket("could not bracket the inverse"));
            }
            if !below {
                s_lo -= 1.0 + s_lo.abs();
                lo = exp_of(s_lo);
            }
            if !above {
                s_hi += 1.0 + s_hi.abs();
                hi = exp_of(s_hi);
            }
        }

        // bisection (geometric while the bracket is wide) down to 1e-3 relative
        for _ in 0..400 {
            let width = Float::with_val(bits, &hi - &lo);
            if width <= Float::with_val(bits, &lo * 1e-3) {
                break;
            }
            let mid = if hi > Float::with_val(bits, &lo * 4u32) {
                Float::with_val(bits, &lo * &hi).sqrt()
            } else {
                Float::with_val(bits, &lo + &hi) >> 1u32
            };
            if f(&mid)?.0.value() < target {
                lo = mid;
            } else {
                hi = mid;
            }
        }

        // Newton from the left end: iterates increase monotonically to the root
        let tol = self.config().solver_tol();
        let mut z = lo;
        for _ in 0..100 {
            let (v, d) = f(&z)?;
            let step = Float::with_val(bits, target - v.value()) / d.value();
            if step.cmp0() != Some(Ordering::Greater) {
                break;
            }
            let mut next = Float::with_val(bits, &z + &step);
            if next >= hi {
                next = Float::with_val(bits, &z + &hi) >> 1u32;
            }
            z = next;
            if step <= Float::with_val(bits, &z * &tol) {
                break;
            }
        }
        Ok(z)
    }
}

/// `|v - target| + err(v) + err(target)`, rounded up.
fn residual_bound(v: &ApproxReal, target: &Float, target_err: &Float) -> Float {
    let d = Float::with_val_round(ERR_PREC, v.value() - target, Round::Up).0.abs();
    let s = Float::with_val_round(ERR_PREC, &d + v.err(), Round::Up).0;
    Float::with_val_round(ERR_PREC, &s + target_err, Round::Up).0
}

/// `ψ'(s) > 1/s + 1/(2s²)` at the right end of the neighbourhood of `z`.
fn trigamma_lower_bound(z: &Float) -> Float {
    let s = Float::with_val_round(ERR_PREC, z * (1.0 + NEIGHBOURHOOD), Round::Up).0;
    let a = Float::with_val_round(ERR_PREC, s.recip_ref(), Round::Down).0;
    let s2 = Float::with_val_round(ERR_PREC, s.square_ref(), Round::Up).0 * 2u32;
    let b = Float::with_val_round(ERR_PREC, s2.recip_ref(), Round::Down).0;
    Float::with_val_round(ERR_PREC, &a + &b, Round::Down).0
}

/// Lower bound of `|ψ⁽ᵏ⁺¹⁾| / |ψ⁽ᵏ⁾|` on the neighbourhood of `z`.
fn log_polygamma_slope_lower_bound(k: u32, z: &Float) -> Float {
    let p = ERR_PREC;
    let s = Float::with_val_round(p, z * (1.0 + NEIGHBOURHOOD), Round::Up).0;
    let sp = Float::with_val_round(p, z * (1.0 - NEIGHBOURHOOD), Round::Down).0;
    // numerator: k!/s^{k+1} (1 + (k+1)/(2s)) at the right end
    let num_tail = Float::with_val_round(p, Float::with_val(p, k + 1) / &s, Round::Down).0 >> 1u32;
    let num = Float::with_val_round(p, 1 + &num_tail, Round::Down).0;
    // denominator: (k-1)!/s'^k (1 + k/s') at the left end
    let den_tail = Float::with_val_round(p, Float::with_val(p, k) / &sp, Round::Up).0;
    let den = Float::with_val_round(p, 1 + &den_tail, Round::Up).0;
    // k s'^k / s^{k+1}
    let ratio = Float::with_val_round(p, &sp / &s, Round::Down).0;
    let rk = Float::with_val_round(p, ratio.pow(k), Round::Down).0;
    let lead = Float::with_val_round(p, rk * k, Round::Down).0;
    let lead = Float::with_val_round(p, &lead / &s, Round::Down).0;
    let q = Float::with_val_round(p, &num / &den, Round::Down).0;
    Float::with_val_round(p, &lead * &q, Round::Down).0
}

/// Solves `g(s) = target` for an increasing `g` by bisection in `f64`.
fn solve_log_space<G: Fn(f64) -> f64>(g: G, target: f64) -> f64 {
    let mut lo = -750.0f64;
    let mut hi = target.abs().max(1.0) + 50.0;
    while g(hi) < target {
        hi *= 2.0;
    }
    for _ in 0..300 {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        if g(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::PrecisionConfig;

    fn engine() -> Engine {
        Engine::new(PrecisionConfig::default()).unwrap()
    }

    #[test]
    fn inverse_of_minus_gamma_is_one() {
        let e = engine();
        let y = e.digamma(1.0).unwrap();
        let x = e.digamma_inverse_at(&y).unwrap();
        assert!(x.contains(&Float::with_val(e.bits(), 1)), "{x}");
        assert!(x.err_f64() < 1e-32);
    }

    #[test]
    fn round_trips() {
        let e = engine();
        for &y in &[-5.0, 0.0, 2.0, -40.0, 30.0] {
            let x = e.digamma_inverse(y).unwrap();
            let back = e.digamma_at(&x).unwrap();
            assert!(back.contains(&Float::with_val(e.bits(), y)), "y={y}: {back}");
            assert!(back.err_f64() < 1e-30, "y={y}");
        }
    }

    #[test]
    fn result_respects_log_bracket() {
        let e = engine();
        let y = 10f64.ln() - 1.0 / 20.0;
        let x = e.digamma_inverse(y).unwrap().to_f64();
        assert!(x.ln() - 1.0 / x < y && y < x.ln() - 1.0 / (2.0 * x));
    }

    #[test]
    fn rejects_non_finite() {
        assert!(engine().digamma_inverse(f64::NAN).is_err());
        assert!(engine().digamma_inverse(f64::NEG_INFINITY).is_err());
    }

    #[test]
    fn polygamma_abs_inverse_round_trip() {
        let e = engine();
        for k in 1..=4u32 {
            for &z in &[0.01, 0.7, 5.0, 300.0] {
                let t = e.polygamma(k, z).unwrap().abs();
                let back = e.polygamma_abs_inverse(k, &t).unwrap();
                assert!(back.contains(&Float::with_val(e.bits(), z)), "k={k} z={z}: {back}");
            }
        }
    }
}
