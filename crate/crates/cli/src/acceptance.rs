//! The acceptance suite: one pass/fail line per criterion.

use std::time::{Duration, Instant};

use conical_census::predict::{case_for, pipeline_prediction};
use conical_census::{census_enumerate, census_sieve, vf_census, CensusTask, Strategy};
use conical_core::algebra::{CoefficientMode, GradedModule, PoincarePolynomial, Torsion};
use conical_core::links::{self, self_join_page, LinkExpr};
use conical_core::report::{compute, smale_hirsch_check, CaseReport};
use conical_core::spaces::{grassmann_poincare, homology, Flavor, SpaceExpr, Twist};
use conical_core::spectral::{self, auxiliary_page, ConstraintSet, SSState, SpectralError};
use conical_core::strata::{assemble_e1, builtin_spec, CASE_IDS};

/// Wall-clock limits per criterion.
pub const QUADRIC_LIMIT: Duration = Duration::from_secs(1);
pub const CUBIC_LIMIT: Duration = Duration::from_secs(1);
pub const QUARTIC_LIMIT: Duration = Duration::from_secs(5);
pub const SURFACE_LIMIT: Duration = Duration::from_secs(5);
pub const VECTOR_FIELD_LIMIT: Duration = Duration::from_secs(1);
pub const PLANE_CUBIC_CENSUS_LIMIT: Duration = Duration::from_secs(10);
pub const CUBIC_SURFACE_CENSUS_LIMIT: Duration = Duration::from_secs(300);

#[derive(Clone, Debug)]
pub struct Outcome {
    pub id: u32,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
}

impl std::fmt::Display for Outcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let status = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{status} [{}] {} ({:.3} s)", self.id, self.title, self.elapsed.as_secs_f64())?;
        if !self.detail.is_empty() {
            write!(f, ": {}", self.detail)?;
        }
        Ok(())
    }
}

type Check = Result<(), String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit: Duration) -> Check {
    ensure(elapsed < limit, || format!("took {:.3} s, limit {:.0} s", elapsed.as_secs_f64(), limit.as_secs_f64()))
}

fn cells(list: &[(i64, &[i64])]) -> Vec<((i64, i64), u64)> {
    let mut v: Vec<_> = list.iter().flat_map(|&(p, qs)| qs.iter().map(move |&q| ((p, q), 1))).collect();
    v.sort();
    v
}

fn report(case: &str, mode: CoefficientMode) -> Result<CaseReport, String> {
    let spec = builtin_spec(case).map_err(|e| e.to_string())?;
    compute(&spec, mode).map_err(|e| e.to_string())
}

fn page_matches(r: &CaseReport, expected: &[((i64, i64), u64)]) -> Check {
    let got = r.e1.ranks();
    ensure(got == expected, || format!("{} E1 is {got:?}", r.case_id))?;
    ensure(r.e_infinity == r.e1, || format!("{} does not degenerate at E1", r.case_id))
}

fn quadric() -> Check {
    let r = report("quadric-p2", CoefficientMode::Integral)?;
    let e1 = cells(&[(1, &[5, 7, 9]), (2, &[3, 5, 7]), (3, &[5])]);
    ensure(r.e1.ranks() == e1 && r.e1.cells().all(|(_, e)| e.torsion.is_empty()), || format!("E1 is {:?}", r.e1.ranks()))?;
    let z2 = vec![Torsion { prime: 2, exponent: 1, multiplicity: 1 }];
    let free: Vec<_> = r.e_infinity.ranks().into_iter().map(|(c, _)| c).collect();
    ensure(free == [(1, 5), (1, 9), (2, 3)], || format!("free part of E-infinity is {free:?}"))?;
    for c in [(1, 7), (2, 5)] {
        let e = r.e_infinity.get(c.0, c.1);
        ensure(e.is_some_and(|e| e.free_rank == 0 && e.torsion == z2), || format!("E-infinity at {c:?} is {e:?}"))?;
    }
    ensure(r.e_infinity.cells().count() == 5, || "extra cells in E-infinity".into())?;
    let h = &r.complement_cohomology;
    for i in [0, 1, 5, 6] {
        ensure(h.rank(i) == 1 && h.entry(i).unwrap().torsion.is_empty(), || format!("H^{i} = {:?}", h.entry(i)))?;
    }
    for i in [3, 4] {
        ensure(h.rank(i) == 0 && h.entry(i).is_some_and(|e| e.torsion == z2), || format!("H^{i} = {:?}", h.entry(i)))?;
    }
    ensure(h.entries().count() == 6, || format!("complement cohomology is {h}"))
}

fn cubic_curves() -> Check {
    let r = report("cubic-p2", CoefficientMode::Rational)?;
    page_matches(&r, &cells(&[(1, &[13, 15, 17]), (2, &[9, 11, 13]), (4, &[6])]))?;
    let spec = builtin_spec("cubic-p2").map_err(|e| e.to_string())?;
    let main = assemble_e1(&spec, CoefficientMode::Rational).map_err(|e| e.to_string())?;
    let aux = auxiliary_page(&spec, &main).ranks();
    ensure(aux == cells(&[(1, &[-1, 1, 3]), (2, &[1, 3, 5]), (4, &[4])]), || format!("auxiliary page is {aux:?}"))?;
    let n = r.n_poincare.ok_or("no projectivized polynomial")?;
    ensure(n == PoincarePolynomial::exterior(&[3, 5]), || format!("N-polynomial is {n}"))
}

fn quartic_curves() -> Check {
    let r = report("quartic-p2", CoefficientMode::Rational)?;
    page_matches(
        &r,
        &cells(&[(1, &[23, 25, 27]), (2, &[19, 21, 23]), (4, &[16]), (10, &[5, 8, 10, 13]), (13, &[1, 4, 6, 9])]),
    )?;
    for p in [3, 5, 6, 7, 8, 9, 11, 12] {
        ensure(r.e1.column(p).is_zero(), || format!("column {p} is nonzero"))?;
    }
    let n = r.n_poincare.ok_or("no projectivized polynomial")?;
    ensure(n == PoincarePolynomial::exterior(&[3, 5, 6]), || format!("N-polynomial is {n}"))
}

fn cubic_surfaces() -> Check {
    let r = report("cubic-p3", CoefficientMode::Rational)?;
    let mut expected = cells(&[(1, &[31, 33, 35, 37]), (2, &[25, 27, 31, 33]), (4, &[20, 22, 24, 26]), (7, &[16])]);
    expected.push(((2, 29), 2));
    expected.sort();
    page_matches(&r, &expected)?;
    let n = r.n_poincare.ok_or("no projectivized polynomial")?;
    ensure(n == PoincarePolynomial::exterior(&[3, 5, 7]), || format!("N-polynomial is {n}"))
}

fn vector_fields() -> Check {
    let r = report("vf-222", CoefficientMode::Rational)?;
    page_matches(&r, &cells(&[(1, &[29, 31, 33]), (2, &[25, 27, 29]), (3, &[23])]))?;
    let p = &r.complement_poincare;
    ensure(*p == PoincarePolynomial::exterior(&[1, 3, 5]), || format!("complement polynomial is {p}"))?;
    ensure(smale_hirsch_check().map_err(|e| e.to_string())?, || "gradient map check failed".into())
}

fn configuration_suites() -> Check {
    for n in 0..=3u32 {
        for k in 1..=n + 1 {
            let x = SpaceExpr::config(SpaceExpr::proj(n), k);
            let h = homology(&x, Flavor::BorelMoore, Twist::Sign, CoefficientMode::Rational).map_err(|e| e.to_string())?;
            let g = grassmann_poincare(k, n + 1).map_err(|e| e.to_string())?;
            let shift = (k * (k - 1)) as i64;
            let want = GradedModule::from_ranks(g.coefficients().iter().enumerate().map(|(i, &c)| (i as i64 + shift, c)));
            ensure(h == want, || format!("B(CP^{n},{k}) has {h}, expected {want}"))?;
        }
    }
    for k in 2..=6 {
        let page = self_join_page(k).map_err(|e| e.to_string())?;
        ensure(page.reduced.is_zero(), || format!("self-join {k} has reduced homology {}", page.reduced))?;
        let chi = links::euler_cs(&LinkExpr::self_join(SpaceExpr::proj(1), k)).map_err(|e| e.to_string())?;
        ensure(chi == 1, || format!("self-join {k} has Euler characteristic {chi}"))?;
    }
    Ok(())
}

fn euler_characteristics() -> Check {
    for case in CASE_IDS {
        let r = report(case, CoefficientMode::Rational)?;
        let chi = r.e1.euler_characteristic();
        ensure(chi == 1, || format!("{case}: E1 Euler characteristic {chi}"))?;
        let v = r.complement_poincare.eval(-1);
        ensure(v == 0, || format!("{case}: complement polynomial at -1 is {v}"))?;
    }
    Ok(())
}

fn timed_count(task: &CensusTask) -> Result<(u64, Duration), String> {
    let start = Instant::now();
    let r = match task.strategy {
        Strategy::Enumerate => census_enumerate(task),
        Strategy::Sieve => census_sieve(task),
    }
    .map_err(|e| e.to_string())?;
    Ok((r.count, start.elapsed()))
}

fn agrees_with_pipeline(task: &CensusTask, count: u64, golden: u64) -> Check {
    let what = format!("({},{},{}){}", task.d, task.n, task.q, if task.vf { " vf" } else { "" });
    ensure(count == golden, || format!("{what} counted {count}, expected {golden}"))?;
    let predicted = pipeline_prediction(task).map_err(|e| e.to_string())?;
    let case = case_for(task).unwrap_or("?");
    ensure(predicted.as_ref().is_some_and(|p| *p == count.into()), || {
        format!("{what} counted {count}, {case} predicts {predicted:?}")
    })
}

fn census_oracle() -> Check {
    for (d, n, q, golden) in [(2, 2, 2, 28u64), (2, 2, 3, 468), (3, 2, 2, 336), (3, 2, 3, 33696)] {
        let task = CensusTask::new(d, n, q, Strategy::Enumerate);
        let (count, elapsed) = timed_count(&task)?;
        agrees_with_pipeline(&task, count, golden)?;
        if d == 3 {
            within(elapsed, PLANE_CUBIC_CENSUS_LIMIT)?;
        }
        let (sieved, elapsed) = timed_count(&CensusTask::new(d, n, q, Strategy::Sieve))?;
        ensure(sieved == count, || format!("({d},{n},{q}): sieve {sieved} vs enumeration {count}"))?;
        if d == 3 {
            within(elapsed, PLANE_CUBIC_CENSUS_LIMIT)?;
        }
    }
    let task = CensusTask::new(3, 3, 2, Strategy::Sieve);
    let (count, elapsed) = timed_count(&task)?;
    agrees_with_pipeline(&task, count, 322560)?;
    within(elapsed, CUBIC_SURFACE_CENSUS_LIMIT)?;
    let vf = vf_census(2, Strategy::Sieve).map_err(|e| e.to_string())?;
    agrees_with_pipeline(&CensusTask::vector_fields(2, Strategy::Sieve), vf.count, 86016)?;
    for k in 4..=6 {
        let (c, _) = timed_count(&CensusTask::new(3, 2, 2, Strategy::Sieve).with_k_max(k))?;
        ensure(c == 336, || format!("k_max = {k} gives {c}"))?;
    }
    Ok(())
}

fn negative_controls() -> Check {
    let spec = builtin_spec("cubic-p2").map_err(|e| e.to_string())?;
    let mut constraints = ConstraintSet::from_spec(&spec);
    constraints.one_plus_t = false;
    let page = spectral::complete_e1(&spec, CoefficientMode::Rational).map_err(|e| e.to_string())?;
    match spectral::resolve(SSState::new(page), &constraints) {
        Err(SpectralError::Ambiguous { .. }) => {}
        other => return Err(format!("without divisibility: {other:?}")),
    }
    let mut wrong = spec.clone();
    wrong.strata[3].l_dim = 0;
    match spectral::run(&wrong, CoefficientMode::Rational, &ConstraintSet::from_spec(&wrong)) {
        Err(SpectralError::Inconsistent(_)) => Ok(()),
        other => Err(format!("wrong L_dim: {other:?}")),
    }
}

fn run(id: u32, title: &'static str, limit: Option<Duration>, check: fn() -> Check) -> Outcome {
    let start = Instant::now();
    let mut result = check();
    let elapsed = start.elapsed();
    if let (Ok(()), Some(limit)) = (&result, limit) {
        result = within(elapsed, limit);
    }
    Outcome { id, title, passed: result.is_ok(), detail: result.err().unwrap_or_default(), elapsed }
}

pub const CRITERIA: [(u32, &str); 9] = [
    (1, "quadric curves over the integers"),
    (2, "cubic curves"),
    (3, "quartic curves"),
    (4, "cubic surfaces"),
    (5, "quadratic vector fields"),
    (6, "configuration-space and self-join suites"),
    (7, "Euler characteristic of E1 and the complement"),
    (8, "finite-field census against predictions"),
    (9, "negative controls"),
];

/// Runs one criterion by number.
pub fn run_criterion(id: u32) -> Option<Outcome> {
    let title = CRITERIA.iter().find(|(i, _)| *i == id)?.1;
    Some(match id {
        1 => run(id, title, Some(QUADRIC_LIMIT), quadric),
        2 => run(id, title, Some(CUBIC_LIMIT), cubic_curves),
        3 => run(id, title, Some(QUARTIC_LIMIT), quartic_curves),
        4 => run(id, title, Some(SURFACE_LIMIT), cubic_surfaces),
        5 => run(id, title, Some(VECTOR_FIELD_LIMIT), vector_fields),
        6 => run(id, title, None, configuration_suites),
        7 => run(id, title, None, euler_characteristics),
        8 => run(id, title, None, census_oracle),
        _ => run(id, title, None, negative_controls),
    })
}

pub fn run_all() -> Vec<Outcome> {
    CRITERIA.iter().filter_map(|(id, _)| run_criterion(*id)).collect()
}
