//! High-precision evaluation of the digamma/polygamma family.
//!
//! Values are produced as [`ApproxReal`] enclosures. The main path shifts the
//! argument upward with the recurrence `ψ⁽ⁿ⁾(x+1) = ψ⁽ⁿ⁾(x) + (-1)ⁿ n!/x^{n+1}`
//! and then sums the Bernoulli asymptotic series, whose first omitted term
//! bounds the truncation error. [`polygamma_oracle`] is an independent
//! direct-summation path used for cross-checking.

mod bernoulli;
mod exp_inv;
mod inverse;
mod oracle;
mod polygamma;

use std::sync::Arc;

use rug::Float;
use serde::{Deserialize, Serialize};

pub use bernoulli::BernoulliTable;
pub use exp_inv::{exp_inv_derivative, ExpInvPoly};
pub use oracle::polygamma_oracle;

use crate::approx::ApproxReal;
use crate::error::{Error, Result};

/// Extra bits carried beyond the requested decimal digits.
pub const GUARD_BITS: u32 = 32;

/// Smallest `f64` argument accepted by the `f64` entry points.
pub const MIN_ARGUMENT: f64 = 1e-300;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PrecisionConfig {
    /// Decimal digits of working precision.
    pub working_digits: u32,
    /// The recurrence shifts the argument to at least `shift_threshold_base + n`.
    pub shift_threshold_base: f64,
    /// Number of Bernoulli pairs in the asymptotic series.
    pub asymptotic_terms: usize,
}

impl Default for PrecisionConfig {
    fn default() -> Self {
        PrecisionConfig {
            working_digits: 40,
            shift_threshold_base: 12.0,
            asymptotic_terms: 20,
        }
    }
}

impl PrecisionConfig {
    pub fn with_digits(digits: u32) -> Self {
        PrecisionConfig {
            working_digits: digits,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.working_digits < 20 {
            return Err(Error::Config(format!(
                "working_digits must be >= 20, got {}",
                self.working_digits
            )));
        }
        if self.working_digits > 2000 {
            return Err(Error::Config("working_digits must be <= 2000".into()));
        }
        if self.asymptotic_terms < 4 {
            return Err(Error::Config(format!(
                "asymptotic_terms must be >= 4, got {}",
                self.asymptotic_terms
            )));
        }
        if !(self.shift_threshold_base >= 6.0 && self.shift_threshold_base.is_finite()) {
            return Err(Error::Config(format!(
                "shift_threshold_base must be >= 6, got {}",
                self.shift_threshold_base
            )));
        }
        Ok(())
    }

    /// Binary precision of the working midpoints.
    pub fn bits(&self) -> u32 {
        (f64::from(self.working_digits) * std::f64::consts::LOG2_10).ceil() as u32 + GUARD_BITS
    }

    /// Relative accuracy guaranteed by the evaluation routines,
    /// `10^-(working_digits - 5)`.
    pub fn guaranteed_rel_err(&self) -> f64 {
        10f64.powi(-(self.working_digits as i32 - 5))
    }

    /// Stopping tolerance of the iterative solvers, `10^-(working_digits - 8)`.
    pub fn solver_tol(&self) -> Float {
        use rug::ops::Pow;
        Float::with_val(self.bits(), 10).pow(-(self.working_digits as i32 - 8))
    }

    /// Same configuration at twice the working digits.
    pub fn doubled(&self) -> Self {
        PrecisionConfig {
            working_digits: self.working_digits * 2,
            ..self.clone()
        }
    }
}

/// Evaluation context: a validated precision policy plus its Bernoulli table.
///
/// Cloning is cheap; the table is shared read-only.
#[derive(Clone, Debug)]
pub struct Engine {
    cfg: PrecisionConfig,
    bits: u32,
    table: Arc<BernoulliTable>,
}

impl Engine {
    pub fn new(cfg: PrecisionConfig) -> Result<Self> {
        cfg.validate()?;
        let bits = cfg.bits();
        // one extra entry bounds the first omitted term
        let table = BernoulliTable::new(cfg.asymptotic_terms + 1, bits);
        if !table.self_test() {
            return Err(Error::Config("Bernoulli table failed its self-test".into()));
        }
        Ok(Engine {
            cfg,
            bits,
            table: Arc::new(table),
        })
    }

    pub fn config(&self) -> &PrecisionConfig {
        &self.cfg
    }

    /// Working precision in bits.
    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn table(&self) -> &BernoulliTable {
        &self.table
    }

    /// Exact conversion of an `f64` to a working-precision enclosure.
    pub fn num(&self, x: f64) -> ApproxReal {
        ApproxReal::from_f64(x, self.bits)
    }

    pub fn int(&self, x: u64) -> ApproxReal {
        ApproxReal::from_u64(x, self.bits)
    }

    pub(crate) fn check_arg(x: f64) -> Result<()> {
        if !x.is_finite() {
            return Err(Error::domain(format!("argument must be finite, got {x}")));
        }
        if x <= 0.0 {
            return Err(Error::domain(format!("argument must be positive, got {x}")));
        }
        if x < MIN_ARGUMENT {
            return Err(Error::domain(format!(
                "argument {x:e} is below the supported minimum {MIN_ARGUMENT:e}"
            )));
        }
        Ok(())
    }
}

/// `ψ(x)` with a freshly built engine.
pub fn digamma(x: f64, cfg: &PrecisionConfig) -> Result<ApproxReal> {
    Engine::new(cfg.clone())?.digamma(x)
}

/// `ψ⁽ⁿ⁾(x)` with a freshly built engine.
pub fn polygamma(n: u32, x: f64, cfg: &PrecisionConfig) -> Result<ApproxReal> {
    Engine::new(cfg.clone())?.polygamma(n, x)
}

/// `ψ⁻¹(y)` with a freshly built engine.
pub fn digamma_inverse(y: f64, cfg: &PrecisionConfig) -> Result<ApproxReal> {
    Engine::new(cfg.clone())?.digamma_inverse(y)
}
