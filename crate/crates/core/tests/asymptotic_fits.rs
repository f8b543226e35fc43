use popzeta::asymptotics::{
    cauchy_gaps, default_grid, estimate_a, geometric_grid, lnp_over_p, mertens_fit, mesch_check,
    one_over_p, series_integral_constant, sigexp_check, PowerDecay,
};
use popzeta::population::enumerate_pop;
use popzeta::primes::make_list;
use popzeta::ArithmeticalList;

const MERTENS_B: f64 = 0.261_497_212_847_642_8;

#[test]
fn prime_sums_over_lists() {
    let grid = default_grid();
    let all = ArithmeticalList::full(10_000_000).unwrap();
    let m2 = make_list(1, 2, 10_000_000).unwrap();

    let b = one_over_p(&all, &grid).unwrap();
    assert!((b.constant - MERTENS_B).abs() < 0.01, "{}", b.constant);

    let res = lnp_over_p(&all, &grid).unwrap();
    let (lo, hi) = extent(&res.estimates);
    assert!(hi - lo < 1.0);
    let res = lnp_over_p(&m2, &grid).unwrap();
    let (lo, hi) = extent(&res.estimates);
    assert!(hi - lo < 2.0);

    let fit = mertens_fit(&m2, &grid).unwrap();
    assert!(fit.band_width() < 0.05, "{:?}", fit.band);
    assert!(fit.band.0 <= fit.constant && fit.constant <= fit.band.1);
}

fn extent(v: &[f64]) -> (f64, f64) {
    v.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &x| (a.min(x), b.max(x)))
}

#[test]
fn mertens_bands_do_not_widen_with_a_longer_grid() {
    for (r0, r) in [(1, 1), (1, 2), (1, 3)] {
        let list = make_list(r0, r, 10_000_000).unwrap();
        let short = mertens_fit(&list, &geometric_grid(1e3, 1e6, 10).unwrap()).unwrap();
        let long = mertens_fit(&list, &default_grid()).unwrap();
        assert!(long.band_width() <= short.band_width(), "r={r}");
    }
}

#[test]
fn density_constant_of_half_the_primes() {
    let grid = default_grid();
    let mut m2 = make_list(1, 2, 10_000_000).unwrap();
    let table = enumerate_pop(&mut m2, 10_000_000).unwrap();
    let a = estimate_a(&m2, &grid, &table).unwrap();
    assert!(a.exploratory);
    assert!((a.constant - 0.736).abs() <= 0.1, "{}", a.constant);
    assert!(a.band.0 <= a.constant && a.constant <= a.band.1);

    let ratio = mesch_check(&m2, &table, &a).unwrap();
    assert!((0.75..=1.25).contains(&ratio.constant), "{}", ratio.constant);
    assert!(ratio.trends_toward(1.0));

    let small = [1e-4, 2e-4, 5e-4, 1e-3];
    let lap = sigexp_check(&m2, &small, a.constant, &table).unwrap();
    assert!(lap.identity.iter().all(|r| r.pass));
    assert!((0.7..=1.3).contains(&lap.fit.constant), "{}", lap.fit.constant);

    let harmonic = series_integral_constant(table.label(), table.members(), &PowerDecay(1.0), 1_000_000).unwrap();
    let gaps = cauchy_gaps(&harmonic);
    assert!(*gaps.last().unwrap() < 1e-3);
    let tail = &gaps[gaps.len() - 6..];
    assert!(tail.windows(2).all(|w| w[1] <= w[0]), "{tail:?}");
}

#[test]
fn density_constant_of_a_third_of_the_primes() {
    let mut m3 = make_list(1, 3, 1_000_000).unwrap();
    let table = enumerate_pop(&mut m3, 1_000_000).unwrap();
    let a = estimate_a(&m3, &geometric_grid(1e3, 1e6, 10).unwrap(), &table).unwrap();
    assert!(a.band.0 > 0.0 && a.band.1.is_finite());
}
