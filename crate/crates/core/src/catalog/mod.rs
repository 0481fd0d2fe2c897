//! Every inequality of the family as an evaluable case.
//!
//! A case normalizes its inequality to `lhs < rhs`; two-sided inequalities
//! are split into a lower (`L`) and an upper (`R`) part. The margin
//! `rhs - lhs` is certified when its enclosure excludes zero.
//!
//! Cases marked with variable `t` read the sample abscissa as `t` (and
//! B17 as `u = 1/t`), following the substitution `t = 1/ln(1+1/x)`.

mod bounds;
mod point;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::approx::ApproxReal;
use crate::engine::Engine;
use crate::error::{Error, Result};

pub use point::{factorial, ln_factorial, Point};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum BoundId {
    B01,
    B02,
    B03,
    B04,
    B05,
    B06,
    B07,
    B08,
    B09,
    B10,
    B11,
    B12,
    B13,
    B14,
    B15,
    B16,
    B17,
    B18,
    B19,
    B20,
    B21,
}

/// How a case uses an integer parameter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum ParamRule {
    Absent,
    /// Any value `>= min`.
    AtLeast { min: u32 },
    /// A value in `min..=max`.
    Range { min: u32, max: u32 },
    /// `1 <= k <= n-1`.
    BelowN,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Variable {
    X,
    T,
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundInfo {
    pub id: BoundId,
    pub name: &'static str,
    pub statement: &'static str,
    pub variable: Variable,
    pub two_sided: bool,
    pub n: ParamRule,
    pub k: ParamRule,
}

const ALL: [BoundId; 21] = [
    BoundId::B01,
    BoundId::B02,
    BoundId::B03,
    BoundId::B04,
    BoundId::B05,
    BoundId::B06,
    BoundId::B07,
    BoundId::B08,
    BoundId::B09,
    BoundId::B10,
    BoundId::B11,
    BoundId::B12,
    BoundId::B13,
    BoundId::B14,
    BoundId::B15,
    BoundId::B16,
    BoundId::B17,
    BoundId::B18,
    BoundId::B19,
    BoundId::B20,
    BoundId::B21,
];

impl BoundId {
    pub fn all() -> &'static [BoundId] {
        &ALL
    }

    /// Short label such as `B06`.
    pub fn label(self) -> &'static str {
        &self.name()[..3]
    }

    /// Stable descriptive name used in files and on the command line.
    pub fn name(self) -> &'static str {
        use BoundId::*;
        match self {
            B01 => "B01.trigamma-exp-digamma",
            B02 => "B02.trigamma-square-positive",
            B03 => "B03.unit-shift-sandwich",
            B04 => "B04.half-shift-sandwich",
            B05 => "B05.order-k-sandwich",
            B06 => "B06.log-mean-lower",
            B07 => "B07.log-mean-order-k-lower",
            B08 => "B08.digamma-log-sandwich",
            B09 => "B09.polygamma-power-sandwich",
            B10 => "B10.trigamma-below-expm1",
            B11 => "B11.root-nesting",
            B12 => "B12.reciprocal-below-log-mean",
            B13 => "B13.digamma-log-expm1-negative",
            B14 => "B14.second-derivative-chain",
            B15 => "B15.expm1-root-sandwich",
            B16 => "B16.log-mean-trigamma-sandwich",
            B17 => "B17.exponential-polynomial",
            B18 => "B18.exp-reciprocal-difference",
            B19 => "B19.unit-log-mean-ordering",
            B20 => "B20.bernoulli-power",
            B21 => "B21.reciprocal-gap-positive",
        }
    }

    pub fn info(self) -> BoundInfo {
        use BoundId::*;
        use ParamRule::*;
        let (statement, variable, two_sided, n, k) = match self {
            B01 => ("ψ'(x) e^{ψ(x)} < 1", Variable::X, false, Absent, Absent),
            B02 => ("0 < ψ'(x)² + ψ''(x)", Variable::X, false, Absent, Absent),
            B03 => ("e^{-ψ(x+1)} < R_n(x) < e^{-ψ(x)}", Variable::X, true, AtLeast { min: 1 }, Absent),
            B04 => ("e^{-ψ(x+1/2)} < R_n(x) < e^{-ψ(x)}", Variable::X, true, AtLeast { min: 1 }, Absent),
            B05 => ("R_k(x+1/2) < R_n(x) < R_k(x)", Variable::X, true, AtLeast { min: 2 }, BelowN),
            B06 => ("e^{-ψ(1/ln(1+1/x))} < R_n(x)", Variable::X, false, Range { min: 1, max: 2 }, Absent),
            B07 => ("R_k(1/ln(1+1/x)) < R_n(x)", Variable::X, false, AtLeast { min: 2 }, BelowN),
            B08 => ("ln x - 1/x < ψ(x) < ln x - 1/(2x)", Variable::X, true, Absent, Absent),
            B09 => (
                "(k-1)!/x^k + k!/(2x^{k+1}) < (-1)^{k+1} ψ^(k)(x) < (k-1)!/x^k + k!/x^{k+1}",
                Variable::X,
                true,
                Absent,
                AtLeast { min: 1 },
            ),
            B10 => ("ψ'(t) < e^{1/t} - 1", Variable::T, false, Absent, Absent),
            B11 => ("R_{n+1}(x) < R_n(x)", Variable::X, false, AtLeast { min: 1 }, Absent),
            B12 => ("1/x < e^{-ψ(1/ln(1+1/x))}", Variable::X, false, Absent, Absent),
            B13 => ("ψ(t) + ln(e^{1/t} - 1) < 0", Variable::T, false, Absent, Absent),
            B14 => (
                "ψ''(x) + ψ'(x+1/2)² < ψ''(x) + ψ'(1/ln(1+1/x))² < 0",
                Variable::X,
                true,
                Absent,
                Absent,
            ),
            B15 => (
                "E ((k/2)E + 1)^{1/k} < R_k(1/E) < E (kE + 1)^{1/k}, E = e^{1/t} - 1",
                Variable::T,
                true,
                Absent,
                AtLeast { min: 1 },
            ),
            B16 => ("e^{-ψ(L(x,x+1))} < ψ'(x) < e^{-ψ(L(x,x))}", Variable::X, true, Absent, Absent),
            B17 => (
                "2u^n e^{nu} < (e^u - 1)^n [n(e^u - 1) + 2], u = 1/t",
                Variable::T,
                false,
                Range { min: 1, max: 2 },
                Absent,
            ),
            B18 => (
                "1/t² < (6t(t+1)³ + 1)/(6t³(t+1)³) < e^{1/t} - e^{1/(t+1)}",
                Variable::T,
                true,
                Absent,
                Absent,
            ),
            B19 => ("x < 1/ln(1+1/x) < x + 1/2", Variable::X, true, Absent, Absent),
            B20 => (
                "1 + aX/(1 + (1-a)X) < (1+X)^a < 1 + aX, a = 1/k, X = (k/2)(e^{1/t} - 1)",
                Variable::T,
                true,
                Absent,
                AtLeast { min: 2 },
            ),
            B21 => (
                "0 < (e^{2u} - 2ue^u - 1)/((e^u - 1)(ue^u - e^u + 1)) < 1/(e^{-ψ(t)}/E - 1) - 2/E, u = 1/t",
                Variable::T,
                true,
                Absent,
                Absent,
            ),
        };
        BoundInfo {
            id: self,
            name: self.name(),
            statement,
            variable,
            two_sided,
            n,
            k,
        }
    }
}

impl fmt::Display for BoundId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl From<BoundId> for String {
    fn from(id: BoundId) -> String {
        id.name().to_string()
    }
}

impl TryFrom<String> for BoundId {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl FromStr for BoundId {
    type Err = Error;

    /// Accepts `B06`, `b06` or the full name `B06.log-mean-lower`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        ALL.iter()
            .copied()
            .find(|id| id.name().eq_ignore_ascii_case(s) || id.label().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::UnknownBound(s.to_string()))
    }
}

/// All 21 ids with their metadata.
pub fn list_bounds() -> Vec<BoundInfo> {
    ALL.iter().map(|id| id.info()).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Side {
    /// Left inequality of a two-sided statement.
    L,
    /// Right inequality of a two-sided statement.
    R,
}

/// One inequality with its parameters.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BoundCase {
    pub id: BoundId,
    pub side: Option<Side>,
    pub n: Option<u32>,
    pub k: Option<u32>,
    /// Lifts the `n <= 2` restriction of B06.
    pub exploratory: bool,
}

impl BoundCase {
    pub fn new(id: BoundId) -> Self {
        BoundCase {
            id,
            side: None,
            n: None,
            k: None,
            exploratory: false,
        }
    }

    pub fn side(mut self, side: Side) -> Self {
        self.side = Some(side);
        self
    }

    pub fn n(mut self, n: u32) -> Self {
        self.n = Some(n);
        self
    }

    pub fn k(mut self, k: u32) -> Self {
        self.k = Some(k);
        self
    }

    pub fn exploratory(mut self) -> Self {
        self.exploratory = true;
        self
    }

    /// Short tag such as `B05L[n=3,k=2]`.
    pub fn tag(&self) -> String {
        let mut s = self.id.label().to_string();
        if let Some(side) = self.side {
            s.push_str(if side == Side::L { "L" } else { "R" });
        }
        let mut params = Vec::new();
        if let Some(n) = self.n {
            params.push(format!("n={n}"));
        }
        if let Some(k) = self.k {
            params.push(format!("k={k}"));
        }
        if !params.is_empty() {
            s.push_str(&format!("[{}]", params.join(",")));
        }
        if self.exploratory {
            s.push('*');
        }
        s
    }

    /// Checks sides and parameters against the id's metadata.
    pub fn validate(&self) -> Result<()> {
        let info = self.id.info();
        match (info.two_sided, self.side) {
            (true, None) => {
                return Err(Error::parameter(format!("{} needs a side (L or R)", self.id)))
            }
            (false, Some(_)) => {
                return Err(Error::parameter(format!("{} is one-sided", self.id)))
            }
            _ => {}
        }
        let n_rule = if self.exploratory && self.id == BoundId::B06 {
            ParamRule::AtLeast { min: 1 }
        } else {
            info.n
        };
        check_param("n", n_rule, self.n, None, self.id)?;
        check_param("k", info.k, self.k, self.n, self.id)?;
        Ok(())
    }

    /// Every valid case of `id` with `n <= n_max`, `k <= k_max` and both sides.
    pub fn expand(id: BoundId, n_max: u32, k_max: u32) -> Vec<BoundCase> {
        let info = id.info();
        let ns: Vec<Option<u32>> = match info.n {
            ParamRule::Absent => vec![None],
            ParamRule::AtLeast { min } => (min..=n_max).map(Some).collect(),
            ParamRule::Range { min, max } => (min..=max.min(n_max)).map(Some).collect(),
            ParamRule::BelowN => unreachable!("n is never bounded by itself"),
        };
        let sides: Vec<Option<Side>> = if info.two_sided {
            vec![Some(Side::L), Some(Side::R)]
        } else {
            vec![None]
        };
        let mut out = Vec::new();
        for n in &ns {
            let ks: Vec<Option<u32>> = match info.k {
                ParamRule::Absent => vec![None],
                ParamRule::AtLeast { min } => (min..=k_max).map(Some).collect(),
                ParamRule::Range { min, max } => (min..=max.min(k_max)).map(Some).collect(),
                ParamRule::BelowN => (1..n.unwrap_or(1).min(k_max + 1)).map(Some).collect(),
            };
            for k in &ks {
                for side in &sides {
                    out.push(BoundCase {
                        id,
                        side: *side,
                        n: *n,
                        k: *k,
                        exploratory: false,
                    });
                }
            }
        }
        out
    }
}

fn check_param(name: &str, rule: ParamRule, v: Option<u32>, n: Option<u32>, id: BoundId) -> Result<()> {
    let bad = |msg: String| Err(Error::parameter(format!("{id}: {msg}")));
    match (rule, v) {
        (ParamRule::Absent, None) => Ok(()),
        (ParamRule::Absent, Some(_)) => bad(format!("takes no {name}")),
        (_, None) => bad(format!("needs {name}")),
        (ParamRule::AtLeast { min }, Some(v)) if v < min => bad(format!("{name} must be >= {min}")),
        (ParamRule::Range { min, max }, Some(v)) if v < min || v > max => {
            bad(format!("{name} must lie in {min}..={max}"))
        }
        (ParamRule::BelowN, Some(v)) => match n {
            Some(n) if v >= 1 && v < n => Ok(()),
            _ => bad(format!("{name} must satisfy 1 <= {name} <= n-1")),
        },
        _ => Ok(()),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    /// The margin enclosure is strictly positive.
    Certified,
    /// The margin enclosure is strictly negative.
    Violated,
    /// The margin enclosure contains zero.
    Uncertified,
}

#[derive(Clone, Debug)]
pub struct BoundEval {
    pub case: BoundCase,
    pub x: f64,
    pub lhs: ApproxReal,
    pub rhs: ApproxReal,
    /// `rhs - lhs`, including the radii of both sides.
    pub margin: ApproxReal,
}

impl BoundEval {
    fn new(case: BoundCase, x: f64, lhs: ApproxReal, rhs: ApproxReal, margin: Option<ApproxReal>) -> Self {
        let margin = margin.unwrap_or_else(|| &rhs - &lhs);
        BoundEval {
            case,
            x,
            lhs,
            rhs,
            margin,
        }
    }

    pub fn status(&self) -> Status {
        if self.margin.is_positive() {
            Status::Certified
        } else if self.margin.is_negative() {
            Status::Violated
        } else {
            Status::Uncertified
        }
    }

    pub fn certified(&self) -> bool {
        self.status() == Status::Certified
    }

    pub fn margin_f64(&self) -> f64 {
        self.margin.to_f64()
    }

    /// Margin relative to the larger of `|lhs|`, `|rhs|`.
    pub fn relative_margin(&self) -> f64 {
        let scale = self.lhs.to_f64().abs().max(self.rhs.to_f64().abs());
        if scale == 0.0 || !scale.is_finite() {
            self.margin_f64()
        } else {
            self.margin_f64() / scale
        }
    }
}

/// Evaluates one case at `x` with a fresh [`Point`].
pub fn evaluate_bound(case: &BoundCase, x: f64, engine: &Engine) -> Result<BoundEval> {
    let p = Point::new(engine, x)?;
    evaluate_at(case, &p)
}

/// Evaluates one case at a shared [`Point`].
pub fn evaluate_at(case: &BoundCase, point: &Point<'_>) -> Result<BoundEval> {
    case.validate()?;
    let (lhs, rhs, margin) = bounds::sides(case, point)?;
    Ok(BoundEval::new(*case, point.x(), lhs, rhs, margin))
}

/// `(|ψ⁽ⁿ⁾(x)|/(n-1)!)^{1/n}`, evaluated in log space.
pub fn root_norm(engine: &Engine, n: u32, x: f64) -> Result<ApproxReal> {
    if n < 1 {
        return Err(Error::parameter("root_norm needs n >= 1"));
    }
    Point::new(engine, x)?.root(n, point::Arg::X)
}

/// [`root_norm`] at an enclosure.
pub fn root_norm_at(engine: &Engine, n: u32, x: &ApproxReal) -> Result<ApproxReal> {
    if n < 1 {
        return Err(Error::parameter("root_norm needs n >= 1"));
    }
    let p = engine.polygamma_at(n, x)?;
    point::root_from_polygamma(&p, n, engine.bits())
}

/// `(1 + αx/(1+(1-α)x), 1 + αx)`, which enclose `(1+x)^α`.
pub fn bernoulli_power_bounds(alpha: f64, x: f64) -> Result<(f64, f64)> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::domain(format!("alpha must lie in [0, 1], got {alpha}")));
    }
    if !(x > -1.0 && x.is_finite()) {
        return Err(Error::domain(format!("x must be finite and > -1, got {x}")));
    }
    let lower = 1.0 + alpha * x / (1.0 + (1.0 - alpha) * x);
    Ok((lower, 1.0 + alpha * x))
}
