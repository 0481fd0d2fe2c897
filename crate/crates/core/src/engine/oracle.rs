use rug::float::Round;
use rug::ops::Pow;
use rug::Float;

use super::Engine;
use crate::approx::{ApproxReal, ERR_PREC};
use crate::error::{Error, Result};

/// Working precision of the oracle, independent of any engine configuration.
pub const ORACLE_PREC: u32 = 192;

/// `|ψ⁽ⁿ⁾(x)| = n! Σ_{j≥0} (x+j)^-(n+1)` by direct summation of `terms` terms.
///
/// The remaining tail lies between `1/(n (x+N)^n)` and `1/(n (x+N-1)^n)`;
/// the midpoint of that interval is added to the sum and its half-width is
/// folded into the error radius. Nothing here touches the asymptotic series.
pub fn polygamma_oracle(n: u32, x: f64, terms: u64) -> Result<ApproxReal> {
    if n < 1 {
        return Err(Error::parameter("oracle order must be >= 1"));
    }
    if terms < 10 {
        return Err(Error::parameter(format!(
            "oracle needs at least 10 terms, got {terms}"
        )));
    }
    Engine::check_arg(x)?;
    let p = ORACLE_PREC;
    let xf = Float::with_val(p, x);
    let mut sum = Float::new(p);
    for j in 0..terms {
        let base = Float::with_val(p, &xf + j);
        sum += Float::with_val(p, base.recip_ref()).pow(n + 1);
    }
    let tail = |shift: u64| {
        let b = Float::with_val(p, &xf + shift);
        Float::with_val(p, b.pow(n).recip()) / n
    };
    let hi = tail(terms - 1);
    let lo = tail(terms);
    let mid = Float::with_val(p, &hi + &lo) >> 1u32;
    let half = Float::with_val_round(ERR_PREC, &hi - &lo, Round::Up).0 >> 1u32;

    let fact = Float::with_val(p, Float::factorial(n));
    let value = Float::with_val(p, &sum + &mid) * &fact;
    let spread = Float::with_val_round(ERR_PREC, &half * &fact, Round::Up).0;
    // recursive summation: each term carries (n + 4) roundings, plus one per addition
    let ops = terms + u64::from(n) + 8;
    let round = Float::with_val_round(ERR_PREC, &value * (2 * ops), Round::Up).0 >> (p - 1);
    let err = Float::with_val_round(ERR_PREC, &spread + &round, Round::Up).0;
    Ok(ApproxReal::with_err(value, &err))
}
