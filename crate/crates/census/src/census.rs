//! Counting nonsingular forms by enumeration or by sieving.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use rayon::prelude::*;

use crate::field::FieldTower;
use crate::forms::{map_orbit_representatives, monomials, Conditions};
use crate::linear::{digits, Kernel, System};
use crate::predict;
use crate::CensusError;

/// Default limits on q^D for each strategy.
pub const ENUMERATE_BUDGET: u64 = 1_000_000;
pub const SIEVE_BUDGET: u64 = 1 << 29;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    Enumerate,
    Sieve,
}

impl std::str::FromStr for Strategy {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "enumerate" => Ok(Self::Enumerate),
            "sieve" => Ok(Self::Sieve),
            _ => Err(format!("unknown strategy {s:?} (expected enumerate or sieve)")),
        }
    }
}

impl std::fmt::Display for Strategy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Enumerate => "enumerate",
            Self::Sieve => "sieve",
        })
    }
}

/// Forms of degree d in n+1 variables over F_q; with `vf`, triples of ternary
/// quadratic forms instead (d and n are then ignored).
#[derive(Clone, Debug)]
pub struct CensusTask {
    pub d: u32,
    pub n: u32,
    pub q: u32,
    pub k_max: Option<u32>,
    pub strategy: Strategy,
    /// 0 means the rayon default.
    pub threads: usize,
    pub vf: bool,
    pub budget: Option<u64>,
}

impl CensusTask {
    pub fn new(d: u32, n: u32, q: u32, strategy: Strategy) -> Self {
        Self { d, n, q, k_max: None, strategy, threads: 0, vf: false, budget: None }
    }

    pub fn vector_fields(q: u32, strategy: Strategy) -> Self {
        Self { d: 2, n: 2, q, k_max: None, strategy, threads: 0, vf: true, budget: None }
    }

    pub fn with_k_max(mut self, k: u32) -> Self {
        self.k_max = Some(k);
        self
    }

    pub fn with_threads(mut self, t: usize) -> Self {
        self.threads = t;
        self
    }

    /// (d−1)ⁿ for hypersurfaces; 4 for triples of conics.
    pub fn default_k_max(&self) -> u32 {
        if self.vf {
            4
        } else {
            self.d.saturating_sub(1).pow(self.n).max(1)
        }
    }

    pub fn k_max_used(&self) -> u32 {
        self.k_max.unwrap_or_else(|| self.default_k_max())
    }

    /// Number of F_q-coefficients of one member.
    pub fn dim(&self) -> usize {
        if self.vf {
            18
        } else {
            monomials(self.d, self.n).len()
        }
    }
}

#[derive(Clone, Debug)]
pub struct CensusResult {
    pub count: u64,
    pub predicted: Option<BigInt>,
    pub elapsed: Duration,
    pub strategy: Strategy,
    pub k_max_used: u32,
}

impl CensusResult {
    pub fn matches(&self) -> Option<bool> {
        self.predicted.as_ref().map(|p| *p == BigInt::from(self.count))
    }
}

fn validate(task: &CensusTask) -> Result<(), CensusError> {
    if task.vf && !matches!(task.q, 2 | 3) {
        return Err(CensusError::InvalidTask(format!("vector-field census supports q = 2, 3, got {}", task.q)));
    }
    if !task.vf && (task.d < 1 || task.n < 1) {
        return Err(CensusError::InvalidTask(format!("need d ≥ 1 and n ≥ 1, got d = {}, n = {}", task.d, task.n)));
    }
    Ok(())
}

fn check_budget(task: &CensusTask, default: u64) -> Result<u64, CensusError> {
    let budget = task.budget.unwrap_or(default);
    let total = (task.q as u64).checked_pow(task.dim() as u32).filter(|&t| t <= budget);
    total.ok_or_else(|| CensusError::BudgetExceeded {
        q: task.q,
        dim: task.dim(),
        budget,
    })
}

fn in_pool<T: Send>(threads: usize, op: impl FnOnce() -> T + Send) -> Result<T, CensusError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CensusError::InvalidTask(e.to_string()))?;
    Ok(pool.install(op))
}

fn conditions(task: &CensusTask, tower: &FieldTower) -> Conditions {
    if task.vf {
        Conditions::vanishing(2, 2)
    } else {
        Conditions::singular_point(task.d, task.n, tower.p())
    }
}

/// Systems at every closed point of degree ≤ k_max.
fn point_systems(task: &CensusTask, tower: &FieldTower) -> Vec<System> {
    let conds = conditions(task, tower);
    let n = if task.vf { 2 } else { task.n };
    (1..=tower.k_max())
        .flat_map(|k| map_orbit_representatives(tower, n, k, |pt| Some(conds.system(tower, k, pt))))
        .collect()
}

/// Nonzero solution spaces at closed points of degree ≤ k_max.
fn point_kernels(task: &CensusTask, tower: &FieldTower) -> Vec<Kernel> {
    let conds = conditions(task, tower);
    let n = if task.vf { 2 } else { task.n };
    (1..=tower.k_max())
        .flat_map(|k| {
            map_orbit_representatives(tower, n, k, |pt| {
                let kernel = conds.system(tower, k, pt).kernel();
                (kernel.dim() > 0).then_some(kernel)
            })
        })
        .collect()
}

/// Counts nonsingular forms by testing every coefficient vector.
pub fn census_enumerate(task: &CensusTask) -> Result<CensusResult, CensusError> {
    validate(task)?;
    let total = check_budget(task, ENUMERATE_BUDGET)?;
    let start = Instant::now();
    let tower = FieldTower::new(task.q, task.k_max_used())?;
    let count = in_pool(task.threads, || {
        let systems = point_systems(task, &tower);
        let p = tower.p();
        let member_cols = conditions(task, &tower).dim() * tower.a() as usize;
        let members = if task.vf { 3 } else { 1 };
        let member_size = (p as u64).pow(member_cols as u32);
        (1..total)
            .into_par_iter()
            .filter(|&index| {
                let parts: Vec<(u64, Vec<u8>)> = (0..members)
                    .map(|i| {
                        let part = index / member_size.pow(i) % member_size;
                        (part, digits(part, p, member_cols))
                    })
                    .collect();
                !systems.iter().any(|s| parts.iter().all(|(part, dg)| s.is_solution(*part, dg)))
            })
            .count() as u64
    })?;
    Ok(CensusResult { count, predicted: None, elapsed: start.elapsed(), strategy: Strategy::Enumerate, k_max_used: tower.k_max() })
}

/// Bit array over all coefficient vectors.
#[derive(Clone)]
struct BitSet(Vec<u64>);

impl BitSet {
    fn new(len: u64) -> Self {
        Self(vec![0; len.div_ceil(64) as usize])
    }

    fn set(&mut self, i: u64) {
        self.0[(i / 64) as usize] |= 1 << (i % 64);
    }

    fn union(mut self, other: &Self) -> Self {
        self.0.iter_mut().zip(&other.0).for_each(|(a, b)| *a |= b);
        self
    }

    fn count(&self) -> u64 {
        self.0.iter().map(|w| w.count_ones() as u64).sum()
    }
}

/// Counts nonsingular forms by marking the solution space of every closed point.
pub fn census_sieve(task: &CensusTask) -> Result<CensusResult, CensusError> {
    validate(task)?;
    let total = check_budget(task, SIEVE_BUDGET)?;
    let start = Instant::now();
    let tower = FieldTower::new(task.q, task.k_max_used())?;
    let marked = in_pool(task.threads, || {
        let kernels = point_kernels(task, &tower);
        let member_size = if task.vf { (task.q as u64).pow(6) } else { total };
        let workers = rayon::current_num_threads().max(1);
        let chunk = kernels.len().div_ceil(workers).max(1);
        let mut zero = BitSet::new(total);
        zero.set(0);
        kernels
            .par_chunks(chunk)
            .map(|group| {
                let mut bits = BitSet::new(total);
                for kernel in group {
                    let members = kernel.indices();
                    if task.vf {
                        for &a in &members {
                            for &b in &members {
                                let ab = a + member_size * b;
                                for &c in &members {
                                    bits.set(ab + member_size * member_size * c);
                                }
                            }
                        }
                    } else {
                        members.iter().for_each(|&i| bits.set(i));
                    }
                }
                bits
            })
            .collect::<Vec<_>>()
            .iter()
            .fold(zero, BitSet::union)
            .count()
    })?;
    Ok(CensusResult {
        count: total - marked,
        predicted: None,
        elapsed: start.elapsed(),
        strategy: Strategy::Sieve,
        k_max_used: tower.k_max(),
    })
}

/// Triples of ternary quadratic forms over F_q with no common projective zero.
pub fn vf_census(q: u32, strategy: Strategy) -> Result<CensusResult, CensusError> {
    census(&CensusTask::vector_fields(q, strategy))
}

/// Runs the task's strategy and attaches the prediction from the spectral-sequence
/// pipeline, when one exists.
pub fn census(task: &CensusTask) -> Result<CensusResult, CensusError> {
    let mut result = match task.strategy {
        Strategy::Enumerate => census_enumerate(task)?,
        Strategy::Sieve => census_sieve(task)?,
    };
    result.predicted = predict::pipeline_prediction(task)?;
    Ok(result)
}

/// Number of nonsingular quadrics in odd characteristic, from the determinant of
/// the symmetric matrix.
pub fn quadric_determinant_count(n: u32, q: u32) -> Result<u64, CensusError> {
    let tower = FieldTower::new(q, 1)?;
    let f = tower.base();
    if f.characteristic() == 2 {
        return Err(CensusError::InvalidTask("determinant check needs odd characteristic".into()));
    }
    let monos = monomials(2, n);
    let total = (q as u64).checked_pow(monos.len() as u32).filter(|&t| t <= ENUMERATE_BUDGET).ok_or(
        CensusError::BudgetExceeded { q, dim: monos.len(), budget: ENUMERATE_BUDGET },
    )?;
    let half = f.inv(2).unwrap();
    let size = n as usize + 1;
    let count = (0..total)
        .into_par_iter()
        .filter(|&index| {
            let mut a = vec![vec![0u32; size]; size];
            let mut rest = index;
            for m in &monos {
                let c = (rest % q as u64) as u32;
                rest /= q as u64;
                let vars: Vec<usize> = (0..size).filter(|&i| m[i] > 0).collect();
                match vars.as_slice() {
                    [i] => a[*i][*i] = c,
                    [i, j] => {
                        a[*i][*j] = f.mul(c, half);
                        a[*j][*i] = a[*i][*j];
                    }
                    _ => unreachable!(),
                }
            }
            nonsingular(&mut a, f)
        })
        .count();
    Ok(count as u64)
}

fn nonsingular(a: &mut [Vec<u32>], f: &crate::field::Gf) -> bool {
    let n = a.len();
    for c in 0..n {
        let Some(r) = (c..n).find(|&r| a[r][c] != 0) else { return false };
        a.swap(c, r);
        let inv = f.inv(a[c][c]).unwrap();
        for r in c + 1..n {
            let factor = f.mul(a[r][c], inv);
            if factor != 0 {
                for k in c..n {
                    let v = f.mul(factor, a[c][k]);
                    a[r][k] = f.sub(a[r][k], v);
                }
            }
        }
    }
    true
}
