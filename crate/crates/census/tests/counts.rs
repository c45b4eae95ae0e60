use conical_census::census::quadric_determinant_count;
use conical_census::predict::{fit_quartic, pipeline_exponents};
use conical_census::{census, census_enumerate, census_sieve, predicted_count, vf_census, CensusTask, Strategy};
use num_bigint::BigInt;

fn count(d: u32, n: u32, q: u32, strategy: Strategy) -> u64 {
    let task = CensusTask::new(d, n, q, strategy);
    match strategy {
        Strategy::Enumerate => census_enumerate(&task),
        Strategy::Sieve => census_sieve(&task),
    }
    .unwrap()
    .count
}

#[test]
fn golden_counts() {
    assert_eq!(count(2, 2, 2, Strategy::Enumerate), 28);
    assert_eq!(count(2, 2, 3, Strategy::Enumerate), 468);
    assert_eq!(count(2, 2, 3, Strategy::Sieve), 468);
    assert_eq!(count(3, 2, 2, Strategy::Enumerate), 336);
    assert_eq!(count(3, 2, 2, Strategy::Sieve), 336);
    assert_eq!(count(3, 2, 3, Strategy::Enumerate), 33696);
    assert_eq!(count(3, 2, 3, Strategy::Sieve), 33696);
}

#[test]
fn smooth_cubic_surfaces_over_f2() {
    assert_eq!(count(3, 3, 2, Strategy::Sieve), 322560);
}

#[test]
fn vector_fields_over_f2() {
    let r = vf_census(2, Strategy::Sieve).unwrap();
    assert_eq!(r.count, 86016);
    assert_eq!(r.matches(), Some(true));
    assert_eq!(r.k_max_used, 4);
    assert!(r.count < 2u64.pow(18) - 2u64.pow(12));
    assert!(vf_census(5, Strategy::Sieve).is_err());
}

#[test]
fn vector_field_strategies_agree() {
    let e = census_enumerate(&CensusTask::vector_fields(2, Strategy::Enumerate)).unwrap();
    assert_eq!(e.count, 86016);
}

#[test]
fn strategies_agree() {
    for (d, n, q) in [(1, 2, 2), (2, 2, 2), (2, 2, 3), (2, 2, 4), (2, 2, 5), (3, 2, 2), (3, 2, 3), (2, 3, 2), (2, 3, 3)] {
        assert_eq!(count(d, n, q, Strategy::Enumerate), count(d, n, q, Strategy::Sieve), "({d},{n},{q})");
    }
}

#[test]
fn k_max_saturates() {
    let counts: Vec<u64> = (1..=6)
        .map(|k| census_sieve(&CensusTask::new(3, 2, 2, Strategy::Sieve).with_k_max(k)).unwrap().count)
        .collect();
    assert!(counts.windows(2).all(|w| w[0] >= w[1]), "{counts:?}");
    assert!(counts[3..].iter().all(|&c| c == 336), "{counts:?}");
    assert!(counts[0] > 336);
}

#[test]
fn thread_count_does_not_change_results() {
    for threads in [1, 2, 3, 8] {
        let t = CensusTask::new(3, 2, 3, Strategy::Sieve).with_threads(threads);
        assert_eq!(census_sieve(&t).unwrap().count, 33696);
        let t = CensusTask::new(3, 2, 2, Strategy::Enumerate).with_threads(threads);
        assert_eq!(census_enumerate(&t).unwrap().count, 336);
    }
}

#[test]
fn counts_are_divisible_by_scalars() {
    for (d, n, q) in [(2, 2, 3), (2, 2, 4), (2, 2, 5), (2, 2, 7), (2, 2, 8), (2, 2, 9), (3, 2, 3), (3, 2, 4), (2, 3, 3)] {
        let c = count(d, n, q, Strategy::Sieve);
        assert_eq!(c % (q as u64 - 1), 0, "({d},{n},{q}) = {c}");
    }
}

#[test]
fn predictions_from_the_pipeline() {
    for (d, n, q) in [(2, 2, 2), (2, 2, 3), (2, 2, 5), (3, 2, 2), (3, 2, 3)] {
        let r = census(&CensusTask::new(d, n, q, Strategy::Sieve)).unwrap();
        assert_eq!(r.matches(), Some(true), "({d},{n},{q}) counted {} predicted {:?}", r.count, r.predicted);
    }
    let (a, dim) = pipeline_exponents("cubic-p3").unwrap().unwrap();
    assert_eq!(predicted_count(&a, dim, 2).unwrap(), BigInt::from(322560));
}

#[test]
fn quadrics_against_determinants() {
    for q in [3, 5, 7, 9] {
        assert_eq!(count(2, 2, q, Strategy::Sieve), quadric_determinant_count(2, q).unwrap(), "q = {q}");
    }
    assert_eq!(count(2, 3, 3, Strategy::Sieve), quadric_determinant_count(3, 3).unwrap());
}

#[test]
fn quartics_are_exploratory() {
    let r = census(&CensusTask::new(4, 2, 2, Strategy::Sieve).with_k_max(9)).unwrap();
    assert!(r.predicted.is_none());
    assert_eq!(r.matches(), None);
    assert_eq!(r.k_max_used, 9);
    let r3 = census_sieve(&CensusTask::new(4, 2, 3, Strategy::Sieve).with_k_max(6)).unwrap();
    let fit = fit_quartic(&[(2, 9, r.count), (3, 6, r3.count)]).unwrap();
    eprintln!("quartic counts: q=2 {} q=3 {}; alpha = {}, beta = {}", r.count, r3.count, fit.alpha, fit.beta);
}
