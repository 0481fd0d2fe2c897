use super::*;
use crate::catalog::BoundId;
use crate::engine::PrecisionConfig;

fn engine() -> Engine {
    Engine::new(PrecisionConfig::default()).unwrap()
}

fn small_grid(a: f64, b: f64, n: usize) -> Grid {
    SampleGrid::log(a, b, n).unwrap().into()
}

fn synthetic(label: &str, f: impl Fn(f64) -> Result<f64> + Sync + 'static) -> Job<'static> {
    Job {
        label: label.into(),
        case: None,
        eval: Box::new(move |p| {
            let e = p.engine();
            let v = e.num(f(p.x())?);
            Ok(Triple {
                lhs: e.int(0),
                rhs: v.clone(),
                margin: v,
            })
        }),
    }
}

#[test]
fn crossing_of_linear_margin() {
    let (lo, hi) = locate_crossing(|x| Ok(x - 2.0), 1.0, 3.0, 1e-10).unwrap();
    assert!(lo <= 2.0 && 2.0 <= hi);
    assert!((0.5 * (lo + hi) - 2.0).abs() <= 1e-10);
    assert!(locate_crossing(|x| Ok(x - 2.0), 3.0, 5.0, 1e-10).is_err());
    assert!(matches!(
        locate_crossing(|x| Ok(x + 1.0), 1.0, 3.0, 1e-10),
        Err(Error::Bracket(_))
    ));
}

#[test]
fn refine_rejects_agreeing_signs() {
    let e = engine();
    let case = BoundCase::new(BoundId::B01);
    assert!(matches!(
        refine_counterexample(&case, (0.5, 2.0), &e),
        Err(Error::Bracket(_))
    ));
}

#[test]
fn sweep_is_certified_and_deterministic() {
    let e = engine();
    let grid = small_grid(1e-3, 1e3, 200);
    let case = BoundCase::new(BoundId::B01);
    let a = sweep(&case, &grid, &e).unwrap();
    assert_eq!(a.samples, 200);
    assert!(a.all_certified());
    assert!(a.min_margin.unwrap() > 0.0);
    assert_eq!(a, sweep(&case, &grid, &e).unwrap());
}

#[test]
fn synthetic_violation_is_bracketed() {
    let e = engine();
    let pts = small_grid(1.0, 3.0, 21).points();
    let reports = run_jobs(&[synthetic("x-2", |x| Ok(x - 2.0))], &pts, &e, None).unwrap();
    let r = &reports[0];
    assert!(r.violated_count > 0);
    assert!(r.has_counterexample());
    let bracketed: Vec<_> = r.counterexamples.iter().filter_map(|c| c.bracket).collect();
    assert_eq!(bracketed.len(), 1);
    let (a, b) = bracketed[0];
    assert!(a < 2.0 && 2.0 < b);
    assert!(r.counterexamples.iter().all(|c| c.margin < -c.err));
    assert!((r.argmin_x.unwrap() - 1.0).abs() < 1e-15);
}

#[test]
fn errors_are_recorded_without_aborting() {
    let e = engine();
    let pts = small_grid(1.0, 10.0, 10).points();
    let job = synthetic("partial", |x| {
        if x > 5.0 {
            Err(Error::domain("synthetic failure"))
        } else {
            Ok(1.0)
        }
    });
    let r = &run_jobs(&[job], &pts, &e, None).unwrap()[0];
    assert_eq!(r.samples, 10);
    assert!(!r.errors.is_empty());
    assert_eq!(r.certified_count + r.errors.len(), 10);
    assert!(!r.all_certified());
}

#[test]
fn zero_margin_is_uncertified_not_violated() {
    let e = engine();
    let pts = small_grid(1.0, 2.0, 5).points();
    let job = Job {
        label: "flat".into(),
        case: None,
        eval: Box::new(|p| {
            let e = p.engine();
            let m = ApproxReal::with_err(e.num(0.0).value().clone(), e.num(1e-40).value());
            Ok(Triple {
                lhs: e.int(1),
                rhs: e.int(1),
                margin: m,
            })
        }),
    };
    let r = &run_jobs(&[job], &pts, &e, None).unwrap()[0];
    assert_eq!(r.uncertified_count, 5);
    assert!(!r.has_counterexample());
}

#[test]
fn chain_and_limits() {
    let e = engine();
    let grid = small_grid(1e-3, 1e3, 50);
    let chain = chain_check(8, &grid, &e).unwrap();
    assert_eq!(chain.samples, 50 * 7);
    assert!(chain.all_certified());
    assert!(chain_check(1, &grid, &e).is_err());

    let d64 = limit_check(1.0, 64, &e).unwrap();
    let want = (64f64).powf(1.0 / 64.0) - 1.0;
    assert!((d64 - want).abs() < 1e-15, "{d64} vs {want}");
    assert!(limit_check(1.0, 128, &e).unwrap() < d64);
    assert!(limit_check(2.0, 64, &e).unwrap() < limit_check(1.0, 32, &e).unwrap());
    assert!(limit_check(1.0, 1, &e).is_err());
    // the shifted terms (y/(y+j))^{k+1} are below 1e-14 here
    for t in [0.5f64, 1.0, 2.0] {
        let y = 1.0 / (1.0 / t).exp_m1();
        let want = (64f64 / y).powf(1.0 / 64.0) - 1.0;
        let got = expm1_limit_check(t, 64, &e).unwrap();
        assert!((got - want).abs() < 1e-12, "t={t}: {got} vs {want}");
        assert!(expm1_limit_check(t, 128, &e).unwrap() < got);
    }
}

#[test]
fn complete_monotonicity_spot_check() {
    let e = engine();
    let grid = small_grid(0.05, 50.0, 40);
    let r = complete_monotonicity_check(6, &grid, &e).unwrap();
    assert_eq!(r.samples, 40 * 7);
    assert!(r.all_certified());
    assert!(complete_monotonicity_check(9, &grid, &e).is_err());

    let one = small_grid(1.0, 1.0 + 1e-12, 2);
    let r0 = complete_monotonicity_check(0, &one, &e).unwrap();
    let e_minus_zeta2 = std::f64::consts::E - std::f64::consts::PI.powi(2) / 6.0;
    assert!((r0.min_margin.unwrap() - e_minus_zeta2).abs() < 1e-10);
    let far = small_grid(100.0, 100.0 + 1e-9, 2);
    let h100 = complete_monotonicity_check(0, &far, &e).unwrap().min_margin.unwrap();
    assert!(h100 > 1.0 && h100 < 1.02, "{h100}");
}

#[test]
fn csv_rows_have_fixed_columns() {
    let e = engine();
    let grid = small_grid(0.5, 2.0, 3);
    let mut w = CsvSampleWriter::new(Vec::new(), &["run metadata".to_string()]).unwrap();
    let case = BoundCase::new(BoundId::B05).side(crate::catalog::Side::L).n(3).k(2);
    sweep_many_with(&[case], &grid, &e, |ev| w.write(ev)).unwrap();
    let text = String::from_utf8(w.finish().unwrap()).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "# run metadata");
    assert_eq!(lines[1], "bound_id,n,k,x,lhs,rhs,margin,certified");
    assert_eq!(lines.len(), 5);
    assert!(lines[2].starts_with("B05L,3,2,5e-1,"));
    assert!(lines[2].ends_with(",true"));
}

#[test]
fn merge_keeps_worst_margin() {
    let e = engine();
    let grid = small_grid(0.5, 5.0, 10);
    let a = sweep(&BoundCase::new(BoundId::B01), &grid, &e).unwrap();
    let b = sweep(&BoundCase::new(BoundId::B12), &grid, &e).unwrap();
    let m = VerificationReport::merge("both", &[a.clone(), b.clone()]);
    assert_eq!(m.samples, 20);
    assert_eq!(m.min_margin.unwrap(), a.min_margin.unwrap().min(b.min_margin.unwrap()));
}
