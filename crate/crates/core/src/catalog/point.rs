use std::cell::RefCell;
use std::collections::HashMap;

use rug::{Float, Integer};

use crate::approx::ApproxReal;
use crate::engine::{Engine, MIN_ARGUMENT};
use crate::error::{Error, Result};

/// Arguments at which the catalog evaluates `ψ` and its derivatives.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub(crate) enum Arg {
    X,
    XPlusHalf,
    XPlusOne,
    /// `1/ln(1+1/x) = L(x, x+1)`
    UnitLogMean,
    /// `1/(e^{1/x}-1)`, the point `t ↦ x` maps back to
    ExpM1Recip,
    ExpM1RecipPlusOne,
}

/// One sample abscissa with memoized `ψ` values, shared by every case
/// evaluated there.
pub struct Point<'e> {
    engine: &'e Engine,
    x: f64,
    args: RefCell<HashMap<Arg, ApproxReal>>,
    psi: RefCell<HashMap<(Arg, u32), ApproxReal>>,
    roots: RefCell<HashMap<(Arg, u32), ApproxReal>>,
}

impl<'e> Point<'e> {
    pub fn new(engine: &'e Engine, x: f64) -> Result<Self> {
        if !(x.is_finite() && x >= MIN_ARGUMENT) {
            return Err(Error::domain(format!(
                "sample point must be finite and >= {MIN_ARGUMENT:e}, got {x}"
            )));
        }
        Ok(Point {
            engine,
            x,
            args: RefCell::default(),
            psi: RefCell::default(),
            roots: RefCell::default(),
        })
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn engine(&self) -> &'e Engine {
        self.engine
    }

    pub(crate) fn arg(&self, which: Arg) -> Result<ApproxReal> {
        if let Some(v) = self.args.borrow().get(&which) {
            return Ok(v.clone());
        }
        let x = self.engine.num(self.x);
        let v = match which {
            Arg::X => x,
            Arg::XPlusHalf => &x + &self.engine.num(0.5),
            Arg::XPlusOne => &x + &self.engine.int(1),
            Arg::UnitLogMean => x.recip()?.ln_1p()?.recip()?,
            Arg::ExpM1Recip => x.recip()?.exp_m1().recip()?,
            Arg::ExpM1RecipPlusOne => &self.arg(Arg::ExpM1Recip)? + &self.engine.int(1),
        };
        self.args.borrow_mut().insert(which, v.clone());
        Ok(v)
    }

    /// Signed `ψ^(order)` at an argument.
    pub(crate) fn psi(&self, order: u32, which: Arg) -> Result<ApproxReal> {
        if let Some(v) = self.psi.borrow().get(&(which, order)) {
            return Ok(v.clone());
        }
        let a = self.arg(which)?;
        let v = self.engine.psi_at(order, &a)?;
        self.psi.borrow_mut().insert((which, order), v.clone());
        Ok(v)
    }

    /// `e^{-ψ(arg)}`.
    pub(crate) fn exp_neg_digamma(&self, which: Arg) -> Result<ApproxReal> {
        Ok((-self.psi(0, which)?).exp())
    }

    /// `(|ψ⁽ⁿ⁾(arg)|/(n-1)!)^{1/n}`.
    pub(crate) fn root(&self, n: u32, which: Arg) -> Result<ApproxReal> {
        if let Some(v) = self.roots.borrow().get(&(which, n)) {
            return Ok(v.clone());
        }
        let p = self.psi(n, which)?;
        let v = root_from_polygamma(&p, n, self.engine.bits())?;
        self.roots.borrow_mut().insert((which, n), v.clone());
        Ok(v)
    }
}

/// `ln m!`: exact integer factorial for `m <= 20`, otherwise `Σ ln j`.
pub fn ln_factorial(m: u32, prec: u32) -> ApproxReal {
    if m <= 20 {
        let f = Integer::from(Integer::factorial(m));
        return ApproxReal::exact(Float::with_val(prec, &f))
            .ln()
            .expect("factorial is positive");
    }
    let mut acc = ln_factorial(20, prec);
    for j in 21..=m {
        let lj = ApproxReal::from_u64(u64::from(j), prec).ln().expect("positive");
        acc = &acc + &lj;
    }
    acc
}

/// `m!` as an enclosure.
pub fn factorial(m: u32, prec: u32) -> ApproxReal {
    let f = Integer::from(Integer::factorial(m));
    ApproxReal::rounded(Float::with_val(prec, &f))
}

pub(crate) fn root_from_polygamma(p: &ApproxReal, n: u32, prec: u32) -> Result<ApproxReal> {
    let l = &p.abs().ln()? - &ln_factorial(n - 1, prec);
    Ok(l.div_u64(u64::from(n)).exp())
}
