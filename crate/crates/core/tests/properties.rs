use proptest::prelude::*;
use rug::Float;

use polybound::catalog::{evaluate_bound, BoundCase, BoundId, Status};
use polybound::engine::polygamma_oracle;
use polybound::means::{gen_log_mean, solve_shift, MeanOrder};
use polybound::search::critical_shift;
use polybound::verifier::{sweep, Grid, SampleGrid, Spacing};
use polybound::{ApproxReal, Engine, PrecisionConfig};

fn engine() -> &'static Engine {
    static E: std::sync::OnceLock<Engine> = std::sync::OnceLock::new();
    E.get_or_init(|| Engine::new(PrecisionConfig::default()).unwrap())
}

fn log_uniform(lo: f64, hi: f64) -> impl Strategy<Value = f64> {
    (lo.ln()..hi.ln()).prop_map(f64::exp)
}

const WIDE: u32 = 640;

fn wide(x: f64) -> Float {
    Float::with_val(WIDE, x)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn enclosure_arithmetic_contains_exact_results(a in -1e6f64..1e6, b in -1e6f64..1e6, c in 1e-3f64..1e3) {
        let p = 100;
        let (ea, eb, ec) = (ApproxReal::from_f64(a, p), ApproxReal::from_f64(b, p), ApproxReal::from_f64(c, p));
        let combo = &(&ea + &eb) * &ec - &eb;
        let exact = (wide(a) + wide(b)) * wide(c) - wide(b);
        prop_assert!(combo.contains(&exact));
        let q = ea.checked_div(&ec).unwrap();
        prop_assert!(q.contains(&(wide(a) / wide(c))));
        prop_assert!(ec.ln().unwrap().contains(&wide(c).ln()));
        prop_assert!(ec.recip().unwrap().exp().contains(&wide(c).recip().exp()));
        prop_assert!(ec.root(3).unwrap().contains(&wide(c).cbrt()));
    }

    #[test]
    fn polygamma_agrees_with_oracle(n in 1u32..=8, x in log_uniform(1e-3, 1e3)) {
        let v = engine().polygamma(n, x).unwrap();
        let o = polygamma_oracle(n, x, 4000).unwrap();
        prop_assert!(v.abs().overlaps(&o));
        prop_assert_eq!(v.is_positive(), n % 2 == 1);
    }

    #[test]
    fn polygamma_recurrence_holds(n in 0u32..=6, x in log_uniform(1e-2, 1e2)) {
        let e = engine();
        let at = |y: &ApproxReal| e.psi_at(n, y).unwrap();
        let ex = e.num(x);
        let step = &at(&(&ex + &e.int(1))) - &at(&ex);
        let term = &polybound::catalog::factorial(n, e.bits()) * &ex.recip().unwrap().pow_u(n + 1);
        let want = if n % 2 == 0 { term } else { -term };
        prop_assert!(step.overlaps(&want));
    }

    #[test]
    fn digamma_inverse_round_trips(y in -30.0f64..30.0) {
        let e = engine();
        let x = e.digamma_inverse(y).unwrap();
        prop_assert!(x.is_positive());
        let back = e.digamma_at(&x).unwrap();
        prop_assert!(back.overlaps(&e.num(y)) || (back.to_f64() - y).abs() <= 1e-30 * y.abs().max(1.0));
    }

    #[test]
    fn generalized_mean_is_increasing_in_order(p1 in -6.0f64..6.0, dp in 1e-3f64..3.0, a in log_uniform(1e-3, 1e3), r in 1e-3f64..10.0) {
        let b = a * (1.0 + r);
        let l1 = gen_log_mean(MeanOrder::new(p1).unwrap(), a, b).unwrap();
        let l2 = gen_log_mean(MeanOrder::new(p1 + dp).unwrap(), a, b).unwrap();
        prop_assert!(l1 < l2, "p={p1} dp={dp} a={a} b={b}: {l1} {l2}");
        prop_assert!(a < l1 && l2 < b);
        let swapped = gen_log_mean(MeanOrder::new(p1).unwrap(), b, a).unwrap();
        prop_assert!((swapped - l1).abs() <= 1e-14 * l1);
    }

    #[test]
    fn shift_solver_round_trips(p in -3.0f64..3.0, x in log_uniform(1e-2, 1e2), q in 1e-3f64..3.0) {
        let order = MeanOrder::new(p).unwrap();
        let target = gen_log_mean(order, x, x + q).unwrap();
        let back = solve_shift(order, x, target, 4.0).unwrap();
        prop_assert!((back - q).abs() <= 1e-9 * (1.0 + x));
    }

    #[test]
    fn grid_points_are_sorted_in_range_and_reproducible(lo in log_uniform(1e-4, 1.0), span in 1.5f64..1e4, count in 2usize..300, seed in any::<u64>()) {
        let hi = lo * span;
        let grid = Grid::new(vec![
            SampleGrid::new(lo, hi, count, Spacing::Log).unwrap(),
            SampleGrid::new(lo, hi, count, Spacing::Random { seed }).unwrap(),
        ]).unwrap();
        let pts = grid.points();
        prop_assert!(pts.windows(2).all(|w| w[0] < w[1]));
        prop_assert!(pts.iter().all(|&x| lo <= x && x <= hi));
        prop_assert_eq!(pts, grid.points());
    }

    #[test]
    fn certification_follows_the_margin_enclosure(id in 0usize..21, x in log_uniform(1e-3, 1e3)) {
        let id = BoundId::all()[id];
        for case in BoundCase::expand(id, 3, 2) {
            let ev = evaluate_bound(&case, x, engine()).unwrap();
            let lower = ev.margin.lower();
            let upper = ev.margin.upper();
            let want = if lower > 0 { Status::Certified } else if upper < 0 { Status::Violated } else { Status::Uncertified };
            prop_assert_eq!(ev.status(), want);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn raising_the_mean_order_lowers_the_critical_shift(n in 1u32..=4, x in log_uniform(1e-2, 1e2), p1 in -3.0f64..2.0, dp in 0.1f64..2.0) {
        let e = engine();
        let q1 = critical_shift(n, MeanOrder::new(p1).unwrap(), x, e).unwrap();
        let q2 = critical_shift(n, MeanOrder::new(p1 + dp).unwrap(), x, e).unwrap();
        prop_assert!(q1 > q2, "n={n} x={x}: {q1} vs {q2}");
        prop_assert!(q2 >= 0.0);
    }

    #[test]
    fn counterexamples_match_violated_samples(n in 1u32..=48, lo in log_uniform(1e-3, 1e-1)) {
        let grid: Grid = SampleGrid::log(lo, lo * 20.0, 24).unwrap().into();
        let case = BoundCase::new(BoundId::B06).n(n).exploratory();
        let r = sweep(&case, &grid, engine()).unwrap();
        prop_assert_eq!(r.has_counterexample(), r.violated_count > 0);
        prop_assert_eq!(r.samples, r.certified_count + r.uncertified_count + r.violated_count + r.errors.len());
        for c in &r.counterexamples {
            prop_assert!(c.margin < -c.err);
        }
        if n <= 2 {
            prop_assert!(r.all_certified());
        }
        prop_assert_eq!(&r, &sweep(&case, &grid, engine()).unwrap());
    }
}
