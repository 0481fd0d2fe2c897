use super::point::{factorial, Arg, Point};
use super::{BoundCase, BoundId, Side};
use crate::approx::ApproxReal;
use crate::error::Result;

/// `(lhs, rhs, margin)`; the margin is given only where `rhs - lhs` would cancel.
type Sides = (ApproxReal, ApproxReal, Option<ApproxReal>);

/// `(lhs, rhs)` of `lhs < rhs` for a validated case.
pub(super) fn sides(case: &BoundCase, p: &Point<'_>) -> Result<Sides> {
    let e = p.engine();
    let one = e.int(1);
    let zero = e.int(0);
    let x = p.arg(Arg::X)?;
    let n = case.n.unwrap_or(1);
    let k = case.k.unwrap_or(1);
    let side = case.side;
    use BoundId::*;
    let pair = match case.id {
        B01 => {
            let lhs = &p.psi(1, Arg::X)? * &p.psi(0, Arg::X)?.exp();
            (lhs, one)
        }
        B02 => {
            let d1 = p.psi(1, Arg::X)?;
            (zero, &d1.square() + &p.psi(2, Arg::X)?)
        }
        B03 | B04 => {
            let shifted = if case.id == B03 { Arg::XPlusOne } else { Arg::XPlusHalf };
            let root = p.root(n, Arg::X)?;
            match side {
                Some(Side::R) => (root, p.exp_neg_digamma(Arg::X)?),
                _ => (p.exp_neg_digamma(shifted)?, root),
            }
        }
        B05 => {
            let root = p.root(n, Arg::X)?;
            match side {
                Some(Side::R) => (root, p.root(k, Arg::X)?),
                _ => (p.root(k, Arg::XPlusHalf)?, root),
            }
        }
        B06 => (p.exp_neg_digamma(Arg::UnitLogMean)?, p.root(n, Arg::X)?),
        B07 => (p.root(k, Arg::UnitLogMean)?, p.root(n, Arg::X)?),
        B08 => {
            let ln_x = x.ln()?;
            let inv = x.recip()?;
            let psi = p.psi(0, Arg::X)?;
            match side {
                Some(Side::R) => (psi, &ln_x - &inv.mul_pow2(-1)),
                _ => (&ln_x - &inv, psi),
            }
        }
        B09 => {
            let bits = e.bits();
            let inv = x.recip()?;
            let lead = &factorial(k - 1, bits) * &inv.pow_u(k);
            let next = &factorial(k, bits) * &inv.pow_u(k + 1);
            let mut val = p.psi(k, Arg::X)?;
            if k.is_multiple_of(2) {
                val = -val;
            }
            match side {
                Some(Side::R) => (val, &lead + &next),
                _ => (&lead + &next.mul_pow2(-1), val),
            }
        }
        B10 => (p.psi(1, Arg::X)?, x.recip()?.exp_m1()),
        B11 => (p.root(n + 1, Arg::X)?, p.root(n, Arg::X)?),
        B12 => (x.recip()?, p.exp_neg_digamma(Arg::UnitLogMean)?),
        B13 => {
            // ln(e^u - 1) = u + ln(1 - e^{-u}) stays accurate for large u
            let u = x.recip()?;
            let log_em1 = &u + &(-(-&u).exp_m1()).ln()?;
            (&p.psi(0, Arg::X)? + &log_em1, zero)
        }
        B14 => {
            let d2 = p.psi(2, Arg::X)?;
            let refined = &d2 + &p.psi(1, Arg::UnitLogMean)?.square();
            match side {
                Some(Side::R) => (refined, zero),
                _ => (&d2 + &p.psi(1, Arg::XPlusHalf)?.square(), refined),
            }
        }
        B15 => {
            let em1 = x.recip()?.exp_m1();
            let root = p.root(k, Arg::ExpM1Recip)?;
            let kk = u64::from(k);
            let factor = |scaled: ApproxReal| -> Result<ApproxReal> {
                Ok(&em1 * &(&scaled + &one).root(k)?)
            };
            match side {
                Some(Side::R) => {
                    let upper = factor(em1.mul_u64(kk))?;
                    let margin = expm1_root_upper_margin(p, k, &root, &upper)?;
                    return Ok((root, upper, Some(margin)));
                }
                _ => (factor(em1.mul_u64(kk).mul_pow2(-1))?, root),
            }
        }
        B16 => {
            let d1 = p.psi(1, Arg::X)?;
            match side {
                Some(Side::R) => (d1, p.exp_neg_digamma(Arg::X)?),
                _ => (p.exp_neg_digamma(Arg::UnitLogMean)?, d1),
            }
        }
        B17 => {
            let u = x.recip()?;
            let nn = u64::from(n);
            let lhs = (&u.pow_u(n) * &u.mul_u64(nn).exp()).mul_pow2(1);
            let em1 = u.exp_m1();
            let rhs = &em1.pow_u(n) * &(&em1.mul_u64(nn) + &e.int(2));
            (lhs, rhs)
        }
        B18 => {
            let t1 = &x + &one;
            let t1_3 = t1.pow_u(3);
            let num = &(&x * &t1_3).mul_u64(6) + &one;
            let den = (&x.pow_u(3) * &t1_3).mul_u64(6);
            let middle = num.checked_div(&den)?;
            match side {
                Some(Side::R) => {
                    // e^{1/t} - e^{1/(t+1)} = e^{1/(t+1)} expm1(1/(t(t+1)))
                    let gap = (&x * &t1).recip()?;
                    (middle, &t1.recip()?.exp() * &gap.exp_m1())
                }
                _ => (x.square().recip()?, middle),
            }
        }
        B19 => {
            let lm = p.arg(Arg::UnitLogMean)?;
            match side {
                Some(Side::R) => (lm, &x + &e.num(0.5)),
                _ => (x, lm),
            }
        }
        B20 => {
            let kk = u64::from(k);
            let big_x = x.recip()?.exp_m1().mul_u64(kk).mul_pow2(-1);
            let alpha = e.int(1).checked_div(&e.int(kk))?;
            let beta = &one - &alpha;
            let power = big_x.ln_1p()?.div_u64(kk).exp();
            match side {
                Some(Side::R) => (power, &one + &(&alpha * &big_x)),
                _ => {
                    let frac = (&alpha * &big_x).checked_div(&(&one + &(&beta * &big_x)))?;
                    (&one + &frac, power)
                }
            }
        }
        B21 => {
            let u = x.recip()?;
            let eu = u.exp();
            let em1 = u.exp_m1();
            // e^{2u} - 1 - 2u e^u
            let num = &u.mul_pow2(1).exp_m1() - &(&u * &eu).mul_pow2(1);
            // u e^u - (e^u - 1)
            let tail = &(&u * &eu) - &em1;
            let expr = num.checked_div(&(&em1 * &tail))?;
            match side {
                Some(Side::R) => {
                    let ratio = p.exp_neg_digamma(Arg::X)?.checked_div(&em1)?;
                    let first = (&ratio - &one).recip()?;
                    let second = e.int(2).checked_div(&em1)?;
                    (expr, &first - &second)
                }
                _ => (zero, expr),
            }
        }
    };
    Ok((pair.0, pair.1, None))
}

/// `a - b` for `a = E(kE+1)^{1/k}` and `b = R_k(y)`, `y = 1/E`.
///
/// `a^k - b^k = ((k-1)!/y^k + k!/y^{k+1} - |ψ⁽ᵏ⁾(y)|)/(k-1)!`, and the
/// recurrence turns the numerator into `(k-1)!/y^k - |ψ⁽ᵏ⁾(y+1)|`, which stays
/// accurate when `y` is exponentially small. Then
/// `a - b = (a^k - b^k) / Σ a^i b^{k-1-i}`.
fn expm1_root_upper_margin(p: &Point<'_>, k: u32, b: &ApproxReal, a: &ApproxReal) -> Result<ApproxReal> {
    let bits = p.engine().bits();
    let y = p.arg(Arg::ExpM1Recip)?;
    let lead = y.recip()?.pow_u(k);
    let tail = p.psi(k, Arg::ExpM1RecipPlusOne)?.abs().checked_div(&factorial(k - 1, bits))?;
    let diff = &lead - &tail;
    let mut sum = p.engine().int(0);
    for i in 0..k {
        sum = &sum + &(&a.pow_u(i) * &b.pow_u(k - 1 - i));
    }
    diff.checked_div(&sum)
}