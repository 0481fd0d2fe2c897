//! Grid sweeps with certified margins, counterexample handling and the
//! structural checks (nesting chain, limits, complete monotonicity).

pub mod grid;
mod output;
mod structural;

use std::sync::OnceLock;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::approx::ApproxReal;
use crate::catalog::{evaluate_at, BoundCase, BoundEval, Point, Status};
use crate::engine::Engine;
use crate::error::{Error, Result};

pub use grid::{Grid, SampleGrid, Spacing};
pub use output::{write_report_json, CsvSampleWriter};
pub use structural::{chain_check, complete_monotonicity_check, expm1_limit_check, limit_check};

/// Points evaluated in parallel before their results are folded in order.
const CHUNK: usize = 512;

/// Counterexamples kept in a report; the total is `violated_count`.
pub const MAX_LISTED: usize = 32;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Counterexample {
    pub x: f64,
    pub margin: f64,
    /// Radius of the margin enclosure.
    pub err: f64,
    /// Neighbouring abscissae between which the margin changes sign.
    pub bracket: Option<(f64, f64)>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleError {
    pub x: f64,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub label: String,
    pub case: Option<BoundCase>,
    pub samples: usize,
    pub certified_count: usize,
    pub uncertified_count: usize,
    /// Samples whose negative margin re-certified at doubled precision.
    pub violated_count: usize,
    pub min_margin: Option<f64>,
    pub argmin_x: Option<f64>,
    pub min_relative_margin: Option<f64>,
    /// Largest `|margin|` among uncertified samples (0 when there are none).
    pub max_uncertified_abs_margin: f64,
    pub counterexamples: Vec<Counterexample>,
    pub errors: Vec<SampleError>,
}

impl VerificationReport {
    fn empty(label: String, case: Option<BoundCase>) -> Self {
        VerificationReport {
            label,
            case,
            samples: 0,
            certified_count: 0,
            uncertified_count: 0,
            violated_count: 0,
            min_margin: None,
            argmin_x: None,
            min_relative_margin: None,
            max_uncertified_abs_margin: 0.0,
            counterexamples: Vec::new(),
            errors: Vec::new(),
        }
    }

    /// Every sample certified and no sample errored.
    pub fn all_certified(&self) -> bool {
        self.samples > 0 && self.certified_count == self.samples && self.errors.is_empty()
    }

    pub fn has_counterexample(&self) -> bool {
        !self.counterexamples.is_empty()
    }

    /// Combines reports over disjoint work into one summary.
    pub fn merge(label: impl Into<String>, reports: &[VerificationReport]) -> Self {
        let mut out = VerificationReport::empty(label.into(), None);
        for r in reports {
            out.samples += r.samples;
            out.certified_count += r.certified_count;
            out.uncertified_count += r.uncertified_count;
            out.violated_count += r.violated_count;
            if let (Some(m), Some(x)) = (r.min_margin, r.argmin_x) {
                if out.min_margin.is_none_or(|cur| m < cur) {
                    out.min_margin = Some(m);
                    out.argmin_x = Some(x);
                }
            }
            if let Some(m) = r.min_relative_margin {
                out.min_relative_margin = Some(out.min_relative_margin.map_or(m, |cur| cur.min(m)));
            }
            out.max_uncertified_abs_margin = out.max_uncertified_abs_margin.max(r.max_uncertified_abs_margin);
            out.counterexamples.extend(r.counterexamples.iter().cloned());
            out.errors.extend(r.errors.iter().cloned());
        }
        out.counterexamples.truncate(MAX_LISTED);
        out
    }
}

/// `(lhs, rhs, margin)` of one evaluated inequality `lhs < rhs`.
pub(crate) struct Triple {
    pub lhs: ApproxReal,
    pub rhs: ApproxReal,
    pub margin: ApproxReal,
}

impl From<BoundEval> for Triple {
    fn from(e: BoundEval) -> Self {
        Triple {
            lhs: e.lhs,
            rhs: e.rhs,
            margin: e.margin,
        }
    }
}

pub(crate) fn status_of(margin: &ApproxReal) -> Status {
    if margin.is_positive() {
        Status::Certified
    } else if margin.is_negative() {
        Status::Violated
    } else {
        Status::Uncertified
    }
}

pub(crate) type Evaluator<'a> = Box<dyn Fn(&Point<'_>) -> Result<Triple> + Sync + 'a>;

/// One inequality to sweep: report label, optional catalog case and evaluator.
pub(crate) struct Job<'a> {
    pub label: String,
    pub case: Option<BoundCase>,
    pub eval: Evaluator<'a>,
}

impl<'a> Job<'a> {
    fn for_case(case: BoundCase) -> Self {
        Job {
            label: case.tag(),
            case: Some(case),
            eval: Box::new(move |p| evaluate_at(&case, p).map(Triple::from)),
        }
    }
}

struct Accumulator {
    report: VerificationReport,
    violations: Vec<Counterexample>,
    prev: Option<(f64, Status)>,
}

impl Accumulator {
    fn new(label: String, case: Option<BoundCase>) -> Self {
        Accumulator {
            report: VerificationReport::empty(label, case),
            violations: Vec::new(),
            prev: None,
        }
    }

    fn push_error(&mut self, x: f64, err: &Error) {
        self.report.samples += 1;
        self.report.errors.push(SampleError {
            x,
            message: err.to_string(),
        });
        self.prev = None;
    }

    fn push(&mut self, x: f64, t: &Triple, recheck: impl FnOnce() -> Result<ApproxReal>) {
        let r = &mut self.report;
        r.samples += 1;
        let m = t.margin.to_f64();
        let scale = t.lhs.to_f64().abs().max(t.rhs.to_f64().abs());
        let rel = if scale > 0.0 && scale.is_finite() { m / scale } else { m };
        if r.min_margin.is_none_or(|cur| m < cur) {
            r.min_margin = Some(m);
            r.argmin_x = Some(x);
        }
        if r.min_relative_margin.is_none_or(|cur| rel < cur) {
            r.min_relative_margin = Some(rel);
        }
        let mut status = status_of(&t.margin);
        if status == Status::Violated && !recheck().is_ok_and(|m2| m2.is_negative()) {
            status = Status::Uncertified;
        }
        match status {
            Status::Certified => {
                r.certified_count += 1;
                if let (Some((px, Status::Violated)), Some(last)) = (self.prev, self.violations.last_mut()) {
                    if last.x == px && last.bracket.is_none() {
                        last.bracket = Some((px, x));
                    }
                }
            }
            Status::Uncertified => {
                r.uncertified_count += 1;
                r.max_uncertified_abs_margin = r.max_uncertified_abs_margin.max(m.abs());
            }
            Status::Violated => {
                r.violated_count += 1;
                let bracket = match self.prev {
                    Some((px, Status::Certified)) => Some((px, x)),
                    _ => None,
                };
                self.violations.push(Counterexample {
                    x,
                    margin: m,
                    err: t.margin.err_f64(),
                    bracket,
                });
            }
        }
        self.prev = Some((x, status));
    }

    fn finish(mut self) -> VerificationReport {
        let mut v = std::mem::take(&mut self.violations);
        // sign changes first, then the deepest violations
        v.sort_by(|a, b| {
            b.bracket
                .is_some()
                .cmp(&a.bracket.is_some())
                .then(a.margin.total_cmp(&b.margin))
        });
        v.truncate(MAX_LISTED);
        v.sort_by(|a, b| a.x.total_cmp(&b.x));
        self.report.counterexamples = v;
        self.report
    }
}

/// Runs every job over the sorted points, sharing one [`Point`] per abscissa.
/// `sink` sees each successful evaluation in point order.
pub(crate) type Sink<'s> = &'s mut dyn FnMut(&Job<'_>, f64, &Triple) -> Result<()>;

pub(crate) fn run_jobs(
    jobs: &[Job<'_>],
    points: &[f64],
    engine: &Engine,
    mut sink: Option<Sink<'_>>,
) -> Result<Vec<VerificationReport>> {
    let doubled: OnceLock<Result<Engine>> = OnceLock::new();
    let mut accs: Vec<Accumulator> = jobs
        .iter()
        .map(|j| Accumulator::new(j.label.clone(), j.case))
        .collect();
    for chunk in points.chunks(CHUNK) {
        let evaluated: Vec<Vec<Result<Triple>>> = chunk
            .par_iter()
            .map(|&x| match Point::new(engine, x) {
                Ok(p) => jobs.iter().map(|j| (j.eval)(&p)).collect(),
                Err(e) => jobs.iter().map(|_| Err(Error::domain(e.to_string()))).collect(),
            })
            .collect();
        for (&x, row) in chunk.iter().zip(evaluated) {
            for ((job, acc), res) in jobs.iter().zip(accs.iter_mut()).zip(row) {
                match res {
                    Ok(t) => {
                        if let Some(s) = sink.as_mut() {
                            s(job, x, &t)?;
                        }
                        acc.push(x, &t, || {
                            let e2 = doubled
                                .get_or_init(|| Engine::new(engine.config().doubled()))
                                .as_ref()
                                .map_err(|e| Error::Config(e.to_string()))?;
                            Ok((job.eval)(&Point::new(e2, x)?)?.margin)
                        });
                    }
                    Err(e) => acc.push_error(x, &e),
                }
            }
        }
    }
    Ok(accs.into_iter().map(Accumulator::finish).collect())
}

/// Sweeps one case over a grid.
pub fn sweep(case: &BoundCase, grid: &Grid, engine: &Engine) -> Result<VerificationReport> {
    Ok(sweep_many(std::slice::from_ref(case), grid, engine)?.remove(0))
}

/// Sweeps several cases over one grid, reusing the `ψ` values per point.
pub fn sweep_many(cases: &[BoundCase], grid: &Grid, engine: &Engine) -> Result<Vec<VerificationReport>> {
    sweep_many_with(cases, grid, engine, |_| Ok(()))
}

/// [`sweep_many`] that also hands every per-sample evaluation to `sink`,
/// in grid order.
pub fn sweep_many_with(
    cases: &[BoundCase],
    grid: &Grid,
    engine: &Engine,
    mut sink: impl FnMut(&BoundEval) -> Result<()>,
) -> Result<Vec<VerificationReport>> {
    for c in cases {
        c.validate()?;
    }
    let points = Grid::new(grid.parts.clone())?.points();
    let jobs: Vec<Job<'_>> = cases.iter().map(|c| Job::for_case(*c)).collect();
    let mut forward = |job: &Job<'_>, x: f64, t: &Triple| {
        let case = job.case.expect("catalog job");
        sink(&BoundEval {
            case,
            x,
            lhs: t.lhs.clone(),
            rhs: t.rhs.clone(),
            margin: t.margin.clone(),
        })
    };
    run_jobs(&jobs, &points, engine, Some(&mut forward))
}

/// Localizes a sign change of `margin` between `a` and `b` to relative width
/// `rel_width`. Bisection is geometric on wide positive brackets.
pub fn locate_crossing(
    mut margin: impl FnMut(f64) -> Result<f64>,
    a: f64,
    b: f64,
    rel_width: f64,
) -> Result<(f64, f64)> {
    let (mut lo, mut hi) = if a <= b { (a, b) } else { (b, a) };
    let f_lo = margin(lo)?;
    let f_hi = margin(hi)?;
    if !(f_lo != 0.0 && f_hi != 0.0 && (f_lo < 0.0) != (f_hi < 0.0)) {
        return Err(Error::bracket(format!(
            "margin has no sign change on [{lo}, {hi}] ({f_lo:e}, {f_hi:e})"
        )));
    }
    let lo_negative = f_lo < 0.0;
    while hi - lo > rel_width * lo.abs().max(hi.abs()) {
        let mid = if lo > 0.0 && hi > 4.0 * lo { (lo * hi).sqrt() } else { lo + (hi - lo) / 2.0 };
        if mid <= lo || mid >= hi {
            break;
        }
        let f = margin(mid)?;
        if f == 0.0 {
            return Ok((mid, mid));
        }
        if (f < 0.0) == lo_negative {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((lo, hi))
}

/// Narrows a sign-change bracket of `case` to relative width `1e-10` and
/// returns the most negative certified sample seen, with the final bracket.
pub fn refine_counterexample(case: &BoundCase, bracket: (f64, f64), engine: &Engine) -> Result<Counterexample> {
    case.validate()?;
    let eval = |x: f64| -> Result<BoundEval> { evaluate_at(case, &Point::new(engine, x)?) };
    let (ea, eb) = (eval(bracket.0)?, eval(bracket.1)?);
    let statuses = (ea.status(), eb.status());
    if !matches!(
        statuses,
        (Status::Certified, Status::Violated) | (Status::Violated, Status::Certified)
    ) {
        return Err(Error::bracket(format!(
            "{} needs certified opposite signs at [{}, {}], got {:?}",
            case.tag(),
            bracket.0,
            bracket.1,
            statuses
        )));
    }
    let mut best = if ea.status() == Status::Violated { ea } else { eb };
    let found = locate_crossing(
        |x| {
            let ev = eval(x)?;
            let m = ev.margin_f64();
            if ev.status() == Status::Violated && m < best.margin_f64() {
                best = ev;
            }
            Ok(m)
        },
        bracket.0,
        bracket.1,
        1e-10,
    )?;
    Ok(Counterexample {
        x: best.x,
        margin: best.margin_f64(),
        err: best.margin.err_f64(),
        bracket: Some(found),
    })
}

#[cfg(test)]
mod tests;
