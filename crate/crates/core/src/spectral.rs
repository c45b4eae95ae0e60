//! Differentials of the main spectral sequence: the known integral ones, the
//! auxiliary sequence computing the final column, and an exhaustive search for
//! the remaining ones under the Stein and (1+t)-divisibility constraints.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{CoefficientMode, Entry, GradedModule, PoincarePolynomial};
use crate::links::{self, LinkError};
use crate::report::alexander_dual;
use crate::strata::{assemble_e1, E1Page, KnownDifferential, StrataError, StratificationSpec, StratumFiber};

#[derive(Debug, Error)]
pub enum SpectralError {
    #[error("differential {from:?} -> {to:?}: matrix is {rows}x{cols}, cells have ranks {target} and {source_rank}")]
    ShapeMismatch { from: (i64, i64), to: (i64, i64), rows: usize, cols: usize, target: u64, source_rank: u64 },
    #[error("differential {from:?} -> {to:?} acts on a cell with torsion")]
    TorsionSource { from: (i64, i64), to: (i64, i64) },
    #[error("{what}: {} distinct outcomes are consistent with the constraints", candidates.len())]
    Ambiguous { what: String, candidates: Vec<String> },
    #[error("{0}")]
    Inconsistent(String),
    #[error(transparent)]
    Strata(#[from] StrataError),
    #[error(transparent)]
    Link(#[from] LinkError),
}

/// Global constraints on the abutment H̄_*(Σ).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstraintSet {
    /// complex dimension of the (Stein) complement
    pub stein_bound: u32,
    /// the complement carries a free ℂ*-action
    pub one_plus_t: bool,
    /// Σ (−1)^{p+q} rank E¹ = 1
    pub euler: bool,
    pub known: Vec<KnownDifferential>,
}

impl ConstraintSet {
    pub fn from_spec(spec: &StratificationSpec) -> Self {
        Self { stein_bound: spec.dim, one_plus_t: true, euler: true, known: spec.known_differentials.clone() }
    }

    /// H̄_j(Σ) = 0 for j < D − 1.
    fn stein_ok(&self, sigma: &GradedModule) -> bool {
        sigma.min_degree().is_none_or(|j| j >= self.stein_bound as i64 - 1)
    }

    fn divisible_ok(&self, sigma: &GradedModule) -> bool {
        if !self.one_plus_t {
            return true;
        }
        alexander_dual(sigma, self.stein_bound)
            .ok()
            .and_then(|c| PoincarePolynomial::from_module(&c).ok())
            .is_some_and(|p| p.divide_by_one_plus_t().is_ok())
    }

    pub fn admits(&self, sigma: &GradedModule) -> bool {
        self.stein_ok(sigma) && self.divisible_ok(sigma)
    }
}

/// A differential d^r: E_{p,q} → E_{p−r,q+r−1} of the given rank.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DifferentialRecord {
    pub from: (i64, i64),
    pub to: (i64, i64),
    pub r: i64,
    pub rank: u64,
}

#[derive(Clone, Debug)]
pub struct SSState {
    pub page: E1Page,
    pub page_index: u32,
    pub applied: Vec<KnownDifferential>,
    pub resolved: bool,
}

impl SSState {
    pub fn new(page: E1Page) -> Self {
        Self { page, page_index: 1, applied: Vec::new(), resolved: false }
    }
}

/// Replaces source and target of a pinned differential by kernel and cokernel.
pub fn apply_known(mut state: SSState, diff: &KnownDifferential) -> Result<SSState, SpectralError> {
    let (from, to) = (diff.from, diff.to);
    let src = state.page.get(from.0, from.1).cloned().unwrap_or_default();
    let dst = state.page.get(to.0, to.1).cloned().unwrap_or_default();
    let m = &diff.matrix;
    if m.rows() as u64 != dst.free_rank || m.cols() as u64 != src.free_rank {
        return Err(SpectralError::ShapeMismatch {
            from,
            to,
            rows: m.rows(),
            cols: m.cols(),
            target: dst.free_rank,
            source_rank: src.free_rank,
        });
    }
    if !src.torsion.is_empty() || !dst.torsion.is_empty() {
        return Err(SpectralError::TorsionSource { from, to });
    }
    let rank = m.rank() as u64;
    state.page.set(from.0, from.1, Entry::free(src.free_rank - rank));
    let mut coker = Entry::free(dst.free_rank - rank);
    if state.page.mode == CoefficientMode::Integral {
        let inv: Vec<BigInt> = m.smith_normal_form().into_iter().filter(|d| !d.is_one()).collect();
        coker.add_cyclic(&inv).expect("Smith invariants are positive");
    }
    state.page.set(to.0, to.1, coker);
    state.page_index = state.page_index.max((from.0 - to.0) as u32 + 1);
    state.applied.push(diff.clone());
    Ok(state)
}

/// Outcome of an exhaustive search over differential patterns.
#[derive(Clone, Debug)]
struct Search {
    /// distinct surviving pages with one witnessing pattern each
    outcomes: BTreeMap<Vec<((i64, i64), u64)>, Vec<DifferentialRecord>>,
    patterns: usize,
}

/// Every assignment of ranks to the possible differentials (from higher to lower
/// column, total degree dropping by one) such that no cell is used beyond its
/// rank; `accept` filters the surviving pages.
fn search<F: Fn(&BTreeMap<(i64, i64), u64>) -> bool>(cells: &BTreeMap<(i64, i64), u64>, accept: F) -> Search {
    let keys: Vec<(i64, i64)> = cells.keys().copied().collect();
    let mut edges = Vec::new();
    for &(p, q) in &keys {
        for &(p2, q2) in &keys {
            if p2 < p && p2 + q2 == p + q - 1 {
                edges.push(((p, q), (p2, q2)));
            }
        }
    }
    let mut out = Search { outcomes: BTreeMap::new(), patterns: 0 };
    let mut remaining = cells.clone();
    let mut chosen = Vec::new();
    recurse(&edges, 0, &mut remaining, &mut chosen, &accept, &mut out);
    out
}

fn recurse<F: Fn(&BTreeMap<(i64, i64), u64>) -> bool>(
    edges: &[((i64, i64), (i64, i64))],
    i: usize,
    remaining: &mut BTreeMap<(i64, i64), u64>,
    chosen: &mut Vec<DifferentialRecord>,
    accept: &F,
    out: &mut Search,
) {
    if i == edges.len() {
        out.patterns += 1;
        if accept(remaining) {
            let key: Vec<((i64, i64), u64)> = remaining.iter().filter(|(_, &r)| r > 0).map(|(&k, &r)| (k, r)).collect();
            out.outcomes.entry(key).or_insert_with(|| chosen.clone());
        }
        return;
    }
    let (from, to) = edges[i];
    let max = remaining[&from].min(remaining[&to]);
    for m in 0..=max {
        *remaining.get_mut(&from).unwrap() -= m;
        *remaining.get_mut(&to).unwrap() -= m;
        if m > 0 {
            chosen.push(DifferentialRecord { from, to, r: from.0 - to.0, rank: m });
        }
        recurse(edges, i + 1, remaining, chosen, accept, out);
        if m > 0 {
            chosen.pop();
        }
        *remaining.get_mut(&from).unwrap() += m;
        *remaining.get_mut(&to).unwrap() += m;
    }
}

fn by_total_degree(cells: &BTreeMap<(i64, i64), u64>) -> GradedModule {
    GradedModule::from_ranks(cells.iter().map(|(&(p, q), &r)| (p + q, r)))
}

/// Auxiliary page computing H̃_*(Φ) for the union Φ of all non-final terms: each
/// main column moved down by 2·L_dim.
pub fn auxiliary_page(spec: &StratificationSpec, main: &E1Page) -> E1Page {
    let mut aux = E1Page::new(&format!("{}-aux", spec.case_id), spec.dim, CoefficientMode::Rational);
    for s in &spec.strata[..spec.strata.len() - 1] {
        for ((p, q), rank) in main.ranks() {
            if p == s.p as i64 {
                aux.set(p, q - 2 * s.l_dim as i64, Entry::free(rank));
            }
        }
    }
    aux
}

/// Every reduced homology H̃_*(Φ) consistent with the auxiliary page and the Stein
/// bound (a class of H̃_j(Φ) gives H̄_{j+1} of the final term, forbidden when
/// j + 1 < D − 1).
pub fn final_column_candidates(spec: &StratificationSpec, main: &E1Page) -> Vec<GradedModule> {
    let aux = auxiliary_page(spec, main);
    let cells: BTreeMap<(i64, i64), u64> = aux.ranks().into_iter().collect();
    let bound = spec.dim as i64 - 1;
    let reduced = |cells: &BTreeMap<(i64, i64), u64>| by_total_degree(cells).reduce().ok();
    let result = search(&cells, |c| {
        reduced(c).is_some_and(|h| h.min_degree().is_none_or(|j| j + 1 >= bound))
    });
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for key in result.outcomes.keys() {
        let h = reduced(&key.iter().copied().collect()).expect("accepted outcomes are reducible");
        if seen.insert(h.ranks()) {
            out.push(h);
        }
    }
    out
}

/// Final column (graded by total degree) from the auxiliary sequence.
pub fn final_column_aux(spec: &StratificationSpec, main: &E1Page) -> Result<GradedModule, SpectralError> {
    let mut candidates = final_column_candidates(spec, main);
    match candidates.len() {
        0 => Err(SpectralError::Inconsistent(format!(
            "{}: no pattern of the auxiliary sequence satisfies the Stein bound",
            spec.case_id
        ))),
        1 => {
            let h = candidates.pop().unwrap();
            let thom = 2 * spec.final_stratum().l_dim as i64;
            Ok(links::bm_open_cone(&h).shift(thom))
        }
        _ => Err(SpectralError::Ambiguous {
            what: format!("{} final column", spec.case_id),
            candidates: candidates.iter().map(|h| format!("reduced homology of the link {h}")).collect(),
        }),
    }
}

/// Resolved spectral sequence.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SSResult {
    pub case_id: String,
    pub dim: u32,
    pub mode: CoefficientMode,
    pub e1: E1Page,
    pub e_infinity: E1Page,
    pub known: Vec<KnownDifferential>,
    /// differentials beyond the known ones, as ranks
    pub differentials: Vec<DifferentialRecord>,
    pub patterns_considered: usize,
    /// integral answers are the associated graded of the filtration
    pub associated_graded: bool,
}

/// Exhaustive resolution of the remaining differentials.
pub fn resolve(state: SSState, constraints: &ConstraintSet) -> Result<SSResult, SpectralError> {
    resolve_from(state.page.clone(), state, constraints)
}

fn resolve_from(e1: E1Page, mut state: SSState, constraints: &ConstraintSet) -> Result<SSResult, SpectralError> {
    let name = state.page.case_id.clone();
    if constraints.euler && e1.euler_characteristic() != 1 {
        return Err(SpectralError::Inconsistent(format!(
            "{name}: alternating rank sum of E1 is {}, not 1",
            e1.euler_characteristic()
        )));
    }
    for d in &constraints.known {
        if !state.applied.contains(d) {
            state = apply_known(state, d)?;
        }
    }
    let mode = state.page.mode;
    if mode == CoefficientMode::Integral {
        return resolve_integral(e1, state, constraints);
    }
    let cells: BTreeMap<(i64, i64), u64> = state.page.ranks().into_iter().collect();
    let found = search(&cells, |c| constraints.admits(&by_total_degree(c)));
    match found.outcomes.len() {
        0 => Err(SpectralError::Inconsistent(format!(
            "{name}: none of {} differential patterns satisfies the constraints",
            found.patterns
        ))),
        1 => {
            let (key, differentials) = found.outcomes.into_iter().next().unwrap();
            let mut e_inf = E1Page::new(&name, state.page.dim, mode);
            for ((p, q), r) in key {
                e_inf.set(p, q, Entry::free(r));
            }
            Ok(SSResult {
                case_id: name,
                dim: state.page.dim,
                mode,
                e1,
                e_infinity: e_inf,
                known: state.applied,
                differentials,
                patterns_considered: found.patterns,
                associated_graded: false,
            })
        }
        _ => Err(SpectralError::Ambiguous {
            what: name,
            candidates: found
                .outcomes
                .keys()
                .map(|k| {
                    let m = by_total_degree(&k.iter().copied().collect());
                    format!("H(Sigma) = {m}")
                })
                .collect(),
        }),
    }
}

fn hom_nonzero(src: &Entry, dst: &Entry) -> bool {
    let primes = |e: &Entry| e.torsion.iter().map(|t| t.prime).collect::<BTreeSet<_>>();
    (src.free_rank > 0 && !dst.is_zero()) || !primes(src).is_disjoint(&primes(dst))
}

fn resolve_integral(e1: E1Page, state: SSState, constraints: &ConstraintSet) -> Result<SSResult, SpectralError> {
    let name = state.page.case_id.clone();
    let cells: Vec<((i64, i64), &Entry)> = state.page.cells().collect();
    let mut open = Vec::new();
    for &((p, q), src) in &cells {
        for &((p2, q2), dst) in &cells {
            if p2 < p && p2 + q2 == p + q - 1 && hom_nonzero(src, dst) {
                open.push(format!("({p};{q}) -> ({p2};{q2})"));
            }
        }
    }
    if !open.is_empty() {
        return Err(SpectralError::Ambiguous { what: format!("{name} (integral)"), candidates: open });
    }
    let sigma = state.page.total();
    if !constraints.stein_ok(&sigma) || !constraints.divisible_ok(&sigma.clone().with_mode(CoefficientMode::Rational)) {
        return Err(SpectralError::Inconsistent(format!("{name}: integral page violates the constraints")));
    }
    Ok(SSResult {
        case_id: name,
        dim: state.page.dim,
        mode: CoefficientMode::Integral,
        e1,
        e_infinity: state.page.clone(),
        known: state.applied,
        differentials: Vec::new(),
        patterns_considered: 1,
        associated_graded: true,
    })
}

/// H̄_*(Σ) graded by p+q.
pub fn total_homology(result: &SSResult) -> GradedModule {
    result.e_infinity.total()
}

/// E¹ with its final column filled in: from the known link when the spec has one
/// (checked against the auxiliary sequence), otherwise from the auxiliary sequence.
pub fn complete_e1(spec: &StratificationSpec, mode: CoefficientMode) -> Result<E1Page, SpectralError> {
    let mut page = assemble_e1(spec, mode)?;
    let last = spec.final_stratum();
    match &last.fiber {
        StratumFiber::FinalColumn { link: Some(link) } => {
            let known = links::eval_link(link)?;
            let rational = if mode == CoefficientMode::Rational {
                page.clone()
            } else {
                assemble_e1(spec, CoefficientMode::Rational)?
            };
            let candidates = final_column_candidates(spec, &rational);
            if !candidates.iter().any(|c| c.ranks() == known.ranks()) {
                return Err(SpectralError::Inconsistent(format!(
                    "{}: the supplied final link {known} is not allowed by the auxiliary sequence",
                    spec.case_id
                )));
            }
        }
        _ => {
            let column = final_column_aux(spec, &page)?;
            page.set_column(last.p as i64, &column.with_mode(mode));
        }
    }
    Ok(page)
}

/// Full pipeline for one stratification.
pub fn run(
    spec: &StratificationSpec,
    mode: CoefficientMode,
    constraints: &ConstraintSet,
) -> Result<SSResult, SpectralError> {
    let page = complete_e1(spec, mode)?;
    resolve(SSState::new(page), constraints)
}
