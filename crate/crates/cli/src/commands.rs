//! Subcommand implementations. Each returns the text for stdout or a failure
//! carrying the process exit code.

use std::path::Path;

use num_traits::ToPrimitive;
use serde_json::{json, Value};

use conical_census::predict::{case_for, fit_quartic};
use conical_census::{census, census_sieve, CensusError, CensusTask, Strategy};
use conical_core::algebra::CoefficientMode;
use conical_core::links::{eval_link, eval_link_integral, LinkError, LinkExpr};
use conical_core::report::{compute, ReportError, REPORT_VERSION};
use conical_core::spaces::{homology, Flavor, SpaceError, SpaceExpr, Twist};
use conical_core::spectral::SpectralError;
use conical_core::strata::{builtin_spec, load_spec, StrataError};

pub const EXIT_COMPUTATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self { code: EXIT_USAGE, message: message.into() }
    }

    fn computation(message: impl Into<String>) -> Self {
        Self { code: EXIT_COMPUTATION, message: message.into() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Table,
    Json,
}

fn strata_failure(e: StrataError) -> Failure {
    match e {
        StrataError::UnknownCase(_)
        | StrataError::Parse { .. }
        | StrataError::InvalidSpec(_)
        | StrataError::UnsupportedIntegral(_)
        | StrataError::Io(_) => Failure::usage(e.to_string()),
        other => Failure::computation(other.to_string()),
    }
}

fn report_failure(e: ReportError) -> Failure {
    match e {
        ReportError::Spectral(SpectralError::Strata(s)) => strata_failure(s),
        other => Failure::computation(other.to_string()),
    }
}

pub fn compute_case(
    case: Option<&str>,
    spec_file: Option<&Path>,
    mode: CoefficientMode,
    format: Format,
) -> Result<String, Failure> {
    let spec = match (case, spec_file) {
        (_, Some(path)) => load_spec(path).map_err(strata_failure)?,
        (Some(id), None) => builtin_spec(id).map_err(strata_failure)?,
        (None, None) => return Err(Failure::usage("either --case or --spec is required")),
    };
    if let (Some(id), Some(_)) = (case, spec_file) {
        if id != spec.case_id {
            return Err(Failure::usage(format!("--case {id} does not match the spec's case_id {}", spec.case_id)));
        }
    }
    let report = compute(&spec, mode).map_err(report_failure)?;
    Ok(match format {
        Format::Table => report.table(),
        Format::Json => serde_json::to_string_pretty(&report).expect("reports serialize"),
    })
}

fn space_failure(e: SpaceError) -> Failure {
    Failure::computation(e.to_string())
}

fn link_failure(e: LinkError) -> Failure {
    match e {
        LinkError::AmbiguousAssembly(_) => Failure::computation(e.to_string()),
        other => Failure::usage(other.to_string()),
    }
}

/// Evaluates a serialized SpaceExpr (Borel–Moore or ordinary homology) or LinkExpr
/// (reduced homology).
pub fn evaluate_expr(
    text: &str,
    flavor: Flavor,
    twist: Twist,
    mode: CoefficientMode,
    format: Format,
) -> Result<String, Failure> {
    let (kind, shown, h) = match serde_json::from_str::<SpaceExpr>(text) {
        Ok(space) => {
            space.validate().map_err(|e| Failure::usage(e.to_string()))?;
            let h = homology(&space, flavor, twist, mode).map_err(space_failure)?;
            ("space", space.to_string(), h)
        }
        Err(space_err) => {
            let link: LinkExpr = serde_json::from_str(text).map_err(|link_err| {
                Failure::usage(format!("not a space expression ({space_err}) nor a link expression ({link_err})"))
            })?;
            let h = match mode {
                CoefficientMode::Rational => eval_link(&link),
                CoefficientMode::Integral => eval_link_integral(&link),
            }
            .map_err(link_failure)?;
            ("link", format!("{link:?}"), h)
        }
    };
    Ok(match format {
        Format::Table => {
            if kind == "space" {
                let flavor = match flavor {
                    Flavor::BorelMoore => "Borel-Moore",
                    Flavor::Ordinary => "ordinary",
                };
                let twist = match twist {
                    Twist::Trivial => "constant",
                    Twist::Sign => "sign",
                };
                format!("{shown}\n{flavor} homology, {twist} coefficients: {h}\n")
            } else {
                format!("reduced homology of the link: {h}\n")
            }
        }
        Format::Json => serde_json::to_string_pretty(&json!({
            "version": REPORT_VERSION,
            "kind": kind,
            "expr": serde_json::from_str::<Value>(text).unwrap_or(Value::Null),
            "homology": h,
        }))
        .expect("homology serializes"),
    })
}

fn census_failure(e: CensusError) -> Failure {
    match e {
        CensusError::NonIntegerResult(_) | CensusError::Pipeline(_) => Failure::computation(e.to_string()),
        other => Failure::usage(other.to_string()),
    }
}

/// Samples (q, k_max) used for the exploratory quartic fit.
pub const QUARTIC_SAMPLES: [(u32, u32); 2] = [(2, 9), (3, 6)];

pub fn run_census(task: &CensusTask, fit: bool) -> Result<String, Failure> {
    let result = census(task).map_err(census_failure)?;
    let mut out = json!({
        "version": REPORT_VERSION,
        "d": task.d,
        "n": task.n,
        "q": task.q,
        "vf": task.vf,
        "strategy": result.strategy.to_string(),
        "count": result.count,
        "predicted": result.predicted.as_ref().and_then(|p| p.to_u64()),
        "match": result.matches(),
        "elapsed_ms": result.elapsed.as_millis() as u64,
        "kmax_used": result.k_max_used,
    });
    if !task.vf && (task.d, task.n) == (4, 2) {
        out["exploratory"] = json!(true);
        if fit {
            let mut samples = Vec::new();
            for (q, k) in QUARTIC_SAMPLES {
                let c = if (q, k) == (task.q, result.k_max_used) {
                    result.count
                } else {
                    let t = CensusTask::new(4, 2, q, Strategy::Sieve).with_k_max(k).with_threads(task.threads);
                    census_sieve(&t).map_err(census_failure)?.count
                };
                samples.push((q, k, c));
            }
            let f = fit_quartic(&samples).ok_or_else(|| Failure::computation("degenerate quartic fit"))?;
            out["fit"] = json!({
                "model": "q^15 (1 - q^-1)(1 - q^-2)(1 - q^-3)(alpha + beta q^-6)",
                "samples": samples.iter().map(|(q, k, c)| json!({"q": q, "kmax": k, "count": c})).collect::<Vec<_>>(),
                "alpha": f.alpha.to_string(),
                "beta": f.beta.to_string(),
            });
        }
    } else if fit {
        return Err(Failure::usage("--fit applies to d = 4, n = 2 only"));
    }
    if case_for(task).is_none() {
        out["note"] = json!("no stratification case for these parameters; nothing to predict");
    }
    Ok(serde_json::to_string_pretty(&out).expect("json"))
}
