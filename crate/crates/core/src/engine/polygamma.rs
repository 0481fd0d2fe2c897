use std::cmp::Ordering;
use std::f64::consts::LN_10;

use rug::float::Round;
use rug::ops::Pow;
use rug::Float;

use super::Engine;
use crate::approx::{ApproxReal, ERR_PREC};
use crate::error::{Error, Result};

impl Engine {
    /// `ψ(x)`.
    pub fn digamma(&self, x: f64) -> Result<ApproxReal> {
        Self::check_arg(x)?;
        self.psi_exact(0, &Float::with_val(self.bits, x))
    }

    /// `ψ⁽ⁿ⁾(x)` for `n >= 1`, signed: the sign is `(-1)^(n+1)`.
    pub fn polygamma(&self, n: u32, x: f64) -> Result<ApproxReal> {
        if n < 1 {
            return Err(Error::parameter("polygamma order must be >= 1"));
        }
        Self::check_arg(x)?;
        self.psi_exact(n, &Float::with_val(self.bits, x))
    }

    pub fn digamma_at(&self, x: &ApproxReal) -> Result<ApproxReal> {
        self.psi_at(0, x)
    }

    pub fn polygamma_at(&self, n: u32, x: &ApproxReal) -> Result<ApproxReal> {
        if n < 1 {
            return Err(Error::parameter("polygamma order must be >= 1"));
        }
        self.psi_at(n, x)
    }

    /// `|ψ⁽ⁿ⁾(x)|` for `n >= 1`.
    pub fn polygamma_abs_at(&self, n: u32, x: &ApproxReal) -> Result<ApproxReal> {
        Ok(self.polygamma_at(n, x)?.abs())
    }

    /// `ψ^(order)` at an enclosure; `order = 0` is the digamma function.
    ///
    /// The radius of `x` is propagated with the upper bound
    /// `|ψ^(order+1)(s)| < order!/s^(order+1) + (order+1)!/s^(order+2)`
    /// taken at the left end of the enclosure.
    pub fn psi_at(&self, order: u32, x: &ApproxReal) -> Result<ApproxReal> {
        if !x.is_finite() {
            return Err(Error::domain("argument must be finite"));
        }
        let x = if x.prec() == self.bits {
            x.clone()
        } else {
            x.with_prec(self.bits)
        };
        let lo = x.lower();
        if lo.cmp0() != Some(Ordering::Greater) {
            return Err(Error::domain(format!(
                "argument enclosure must be positive, got {}",
                x
            )));
        }
        let mut out = self.psi_exact(order, x.value())?;
        if x.err().is_zero() {
            return Ok(out);
        }
        let lo = Float::with_val_round(ERR_PREC, &lo, Round::Down).0;
        let k = order + 1;
        let fk = Float::with_val_round(ERR_PREC, Float::factorial(k - 1), Round::Up).0;
        let fk1 = Float::with_val_round(ERR_PREC, Float::factorial(k), Round::Up).0;
        let pk = Float::with_val_round(ERR_PREC, (&lo).pow(k), Round::Down).0;
        let pk1 = Float::with_val_round(ERR_PREC, (&lo).pow(k + 1), Round::Down).0;
        let a = Float::with_val_round(ERR_PREC, &fk / &pk, Round::Up).0;
        let b = Float::with_val_round(ERR_PREC, &fk1 / &pk1, Round::Up).0;
        let slope = Float::with_val_round(ERR_PREC, &a + &b, Round::Up).0;
        let extra = Float::with_val_round(ERR_PREC, &slope * x.err(), Round::Up).0;
        out.inflate(&extra);
        Ok(out)
    }

    /// Argument the recurrence shifts to before the asymptotic series is used.
    ///
    /// At least `shift_threshold_base + order`, and large enough that the
    /// first omitted series term is below `10^-(working_digits - 4)` relative
    /// to the leading term.
    pub fn shift_target(&self, order: u32) -> f64 {
        let jj = self.cfg.asymptotic_terms + 1;
        let two_j = 2 * jj;
        let ln_b = self.table.ln_abs(jj);
        let ln_tol = -(f64::from(self.cfg.working_digits) - 4.0) * LN_10;
        let ln_coef = if order == 0 {
            ln_b - (two_j as f64).ln()
        } else {
            let rising: f64 = (0..two_j).map(|i| (f64::from(order) + i as f64).ln()).sum();
            let fact: f64 = (2..=two_j).map(|i| (i as f64).ln()).sum();
            ln_b + rising - fact
        };
        let needed = ((ln_coef - ln_tol) / two_j as f64).exp() * 1.001;
        needed.max(self.cfg.shift_threshold_base + f64::from(order))
    }

    /// Evaluates `ψ^(order)` at an exact positive argument.
    pub(crate) fn psi_exact(&self, order: u32, x: &Float) -> Result<ApproxReal> {
        if !x.is_finite() || x.cmp0() != Some(Ordering::Greater) {
            return Err(Error::domain(format!(
                "argument must be positive and finite, got {}",
                x.to_f64()
            )));
        }
        let bits = self.bits;
        let n = order;
        let terms = self.cfg.asymptotic_terms;
        let target = self.shift_target(n);
        let xf = x.to_f64();
        let shifts: u64 = if xf >= target {
            0
        } else {
            (target - xf).ceil() as u64
        };

        // Σ_{j<shifts} 1/(x+j)^(n+1)
        let mut rec = Float::new(bits);
        for j in 0..shifts {
            let inv = Float::with_val(bits, Float::with_val(bits, x + j).recip_ref());
            if n == 0 {
                rec += &inv;
            } else {
                rec += Float::with_val(bits, (&inv).pow(n + 1));
            }
        }

        let y = Float::with_val(bits, x + shifts);
        let inv_y = Float::with_val(bits, y.recip_ref());
        let inv_y2 = Float::with_val(bits, inv_y.square_ref());

        let (value, abs_sum, trunc) = if n == 0 {
            let ln_y = Float::with_val(bits, y.ln_ref());
            let half = Float::with_val(bits, &inv_y >> 1u32);
            let mut val = Float::with_val(bits, &ln_y - &half);
            let mut abs_sum = Float::with_val(bits, &*ln_y.as_abs() + &half);
            let mut pw = inv_y2.clone();
            for j in 1..=terms {
                let t = Float::with_val(bits, self.table.float(j) * &pw) / (2 * j as u64);
                val -= &t;
                abs_sum += &*t.as_abs();
                pw *= &inv_y2;
            }
            let jj = terms + 1;
            let b_next = Float::with_val(bits, &*self.table.float(jj).as_abs());
            let trunc = b_next * &pw / (2 * jj as u64);
            val -= &rec;
            abs_sum += &rec;
            (val, abs_sum, trunc)
        } else {
            let lead = Float::with_val(bits, Float::factorial(n - 1))
                * Float::with_val(bits, (&inv_y).pow(n));
            let first = Float::with_val(bits, &inv_y * n) >> 1u32;
            let mut s = Float::with_val(bits, 1 + &first);
            let mut s_abs = s.clone();
            let mut r = Float::with_val(bits, 1);
            let nn = u64::from(n);
            for j in 1..=terms {
                let jj = j as u64;
                r *= (nn + 2 * jj - 2) * (nn + 2 * jj - 1);
                r /= (2 * jj - 1) * (2 * jj);
                r *= &inv_y2;
                let t = Float::with_val(bits, self.table.float(j) * &r);
                s += &t;
                s_abs += &*t.as_abs();
            }
            let jj = (terms + 1) as u64;
            r *= (nn + 2 * jj - 2) * (nn + 2 * jj - 1);
            r /= (2 * jj - 1) * (2 * jj);
            r *= &inv_y2;
            let trunc_rel = Float::with_val(bits, &*self.table.float(terms + 1).as_abs()) * &r;
            let fact_n = Float::with_val(bits, Float::factorial(n));
            let tail = fact_n * &rec;
            let mag = Float::with_val(bits, &lead * &s) + &tail;
            let abs_sum = Float::with_val(bits, &lead * &s_abs) + &tail;
            let trunc = lead * trunc_rel;
            let signed = if n % 2 == 1 { mag } else { -mag };
            (signed, abs_sum, trunc)
        };

        // Every term passes through at most `ops` correctly rounded operations.
        let ops = 5 * terms as u64 + 2 * u64::from(n) + 2 * shifts + 40;
        let round = Float::with_val_round(ERR_PREC, &abs_sum * (2 * ops), Round::Up).0 >> (bits - 1);
        let err = Float::with_val_round(ERR_PREC, &trunc + &round, Round::Up).0;
        if !value.is_finite() || !err.is_finite() {
            return Err(Error::domain("polygamma evaluation overflowed"));
        }
        Ok(ApproxReal::with_err(value, &err))
    }
}
