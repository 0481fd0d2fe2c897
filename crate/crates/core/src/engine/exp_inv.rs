use rug::{Float, Integer};

use crate::approx::ApproxReal;
use crate::error::{Error, Result};

/// Exact polynomial `P_k` with `(d/dt)^k e^{1/t} = P_k(1/t) e^{1/t}`.
///
/// Differentiating `P_k(u) e^u` with `du/dt = -u²` gives
/// `P_{k+1}(u) = -u² (P_k(u) + P_k'(u))`, starting from `P_0 = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpInvPoly {
    order: u32,
    /// `coeffs[i]` multiplies `u^i`.
    coeffs: Vec<Integer>,
}

impl ExpInvPoly {
    pub fn new(order: u32) -> Self {
        let mut coeffs = vec![Integer::from(1)];
        for _ in 0..order {
            // q = p + p'
            let mut q: Vec<Integer> = coeffs.clone();
            for (i, c) in coeffs.iter().enumerate().skip(1) {
                q[i - 1] += Integer::from(c * i as u32);
            }
            let mut next = vec![Integer::new(); q.len() + 2];
            for (i, c) in q.into_iter().enumerate() {
                next[i + 2] = -c;
            }
            coeffs = next;
        }
        ExpInvPoly { order, coeffs }
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn coeffs(&self) -> &[Integer] {
        &self.coeffs
    }

    /// `(d/dt)^k e^{1/t}` at an enclosure of `t > 0`.
    pub fn eval_at(&self, t: &ApproxReal) -> Result<ApproxReal> {
        if !t.is_positive() {
            return Err(Error::domain("t must be certainly positive"));
        }
        let prec = t.prec();
        let u = t.recip()?;
        let mut acc = ApproxReal::exact(Float::with_val(prec, 0));
        for c in self.coeffs.iter().rev() {
            acc = &acc * &u;
            if !c.is_zero() {
                acc = &acc + &ApproxReal::rounded(Float::with_val(prec, c));
            }
        }
        Ok(&acc * &u.exp())
    }
}

/// `(d/dt)^k e^{1/t}` in double precision.
pub fn exp_inv_derivative(k: u32, t: f64) -> Result<f64> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::domain(format!("t must be positive and finite, got {t}")));
    }
    let v = ExpInvPoly::new(k).eval_at(&ApproxReal::from_f64(t, 128))?;
    Ok(v.to_f64())
}
