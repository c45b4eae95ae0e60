//! Homology oracle for the catalog of parameter spaces that occur as bases of
//! strata: projective spaces, Grassmannians, configuration spaces (with the sign
//! local system), generic configurations and PGL.
//!
//! All degrees are real degrees.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{CoefficientMode, GradedModule, PoincarePolynomial};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SpaceError {
    #[error("integral coefficients are not supported for {0}")]
    UnsupportedIntegral(String),
    #[error("sign-twisted coefficients are not supported for {0}")]
    UnsupportedTwist(String),
    #[error("{flavor:?} homology is not supported for {space}")]
    UnsupportedFlavor { space: String, flavor: Flavor },
    #[error("generic configurations of {k} points in CP^{n} are not in the catalog")]
    UnsupportedPair { n: u32, k: u32 },
    #[error("PGL_{0} is not in the catalog")]
    UnsupportedRank(u32),
    #[error("Grassmannian G_{k}(C^{m}) needs 0 <= k <= m")]
    BadRange { k: u32, m: u32 },
    #[error("malformed space expression: {0}")]
    Invalid(String),
    #[error("excision for {0} is not determined by the pieces")]
    AmbiguousExcision(String),
}

/// Ordinary or Borel–Moore (closed supports) homology.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Flavor {
    Ordinary,
    BorelMoore,
}

/// Coefficient system: constant, or the sign local system ±ℚ on configuration spaces.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Twist {
    #[default]
    Trivial,
    Sign,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "type", deny_unknown_fields)]
pub enum SpaceExpr {
    Point,
    /// ℂⁿ
    Affine { n: u32 },
    /// ℂPⁿ
    Proj { n: u32 },
    /// k-planes in ℂ^m
    Grassmann { k: u32, m: u32 },
    /// unordered k-point subsets
    Config { space: Box<SpaceExpr>, k: u32 },
    /// k points of ℂPⁿ in general position
    GenericConfig { n: u32, k: u32 },
    /// PGL_m(ℂ)
    Pgl { m: u32 },
    Product { factors: Vec<SpaceExpr> },
    Known {
        name: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        ordinary: Option<GradedModule>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        borel_moore: Option<GradedModule>,
        provenance: String,
    },
}

impl SpaceExpr {
    pub fn affine(n: u32) -> Self {
        Self::Affine { n }
    }

    pub fn proj(n: u32) -> Self {
        Self::Proj { n }
    }

    pub fn grassmann(k: u32, m: u32) -> Self {
        Self::Grassmann { k, m }
    }

    pub fn config(space: SpaceExpr, k: u32) -> Self {
        Self::Config { space: Box::new(space), k }
    }

    pub fn generic_config(n: u32, k: u32) -> Self {
        Self::GenericConfig { n, k }
    }

    pub fn product<I: IntoIterator<Item = SpaceExpr>>(factors: I) -> Self {
        Self::Product { factors: factors.into_iter().collect() }
    }

    /// Checks structural invariants of the tree.
    pub fn validate(&self) -> Result<(), SpaceError> {
        match self {
            Self::Config { space, .. } => match **space {
                Self::Affine { .. } | Self::Proj { .. } => Ok(()),
                _ => Err(SpaceError::Invalid(format!("configuration space over {space}"))),
            },
            Self::GenericConfig { n, k } => {
                if GENERIC_PAIRS.contains(&(*n, *k)) {
                    Ok(())
                } else {
                    Err(SpaceError::UnsupportedPair { n: *n, k: *k })
                }
            }
            Self::Grassmann { k, m } if k > m => Err(SpaceError::BadRange { k: *k, m: *m }),
            Self::Product { factors } => {
                if factors.is_empty() {
                    return Err(SpaceError::Invalid("empty product".into()));
                }
                factors.iter().try_for_each(SpaceExpr::validate)
            }
            Self::Known { provenance, ordinary, borel_moore, .. } => {
                if provenance.trim().is_empty() {
                    Err(SpaceError::Invalid("known space without provenance".into()))
                } else if ordinary.is_none() && borel_moore.is_none() {
                    Err(SpaceError::Invalid("known space without homology".into()))
                } else {
                    Ok(())
                }
            }
            _ => Ok(()),
        }
    }

    pub fn is_configuration(&self) -> bool {
        matches!(self, Self::Config { .. } | Self::GenericConfig { .. })
    }

    /// Real dimension, where it is a manifold in the catalog.
    pub fn real_dimension(&self) -> Option<i64> {
        Some(match self {
            Self::Point => 0,
            Self::Affine { n } | Self::Proj { n } => 2 * *n as i64,
            Self::Grassmann { k, m } => 2 * (*k as i64) * (*m as i64 - *k as i64),
            Self::Config { space, k } => space.real_dimension()? * *k as i64,
            Self::GenericConfig { n, k } => 2 * (*n as i64) * (*k as i64),
            Self::Pgl { m } => 2 * ((*m as i64).pow(2) - 1),
            Self::Product { factors } => factors.iter().map(SpaceExpr::real_dimension).sum::<Option<i64>>()?,
            Self::Known { .. } => return None,
        })
    }
}

impl std::fmt::Display for SpaceExpr {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Point => write!(f, "pt"),
            Self::Affine { n } => write!(f, "C^{n}"),
            Self::Proj { n } => write!(f, "CP^{n}"),
            Self::Grassmann { k, m } => write!(f, "G_{k}(C^{m})"),
            Self::Config { space, k } => write!(f, "B({space},{k})"),
            Self::GenericConfig { n, k } => write!(f, "B~(CP^{n},{k})"),
            Self::Pgl { m } => write!(f, "PGL_{m}(C)"),
            Self::Product { factors } => {
                let parts: Vec<String> = factors.iter().map(|x| x.to_string()).collect();
                write!(f, "{}", parts.join(" x "))
            }
            Self::Known { name, .. } => write!(f, "{name}"),
        }
    }
}

const GENERIC_PAIRS: [(u32, u32); 4] = [(2, 3), (2, 4), (3, 3), (3, 4)];

/// Homology of a catalog space.
pub fn homology(
    x: &SpaceExpr,
    flavor: Flavor,
    twist: Twist,
    mode: CoefficientMode,
) -> Result<GradedModule, SpaceError> {
    x.validate()?;
    if mode == CoefficientMode::Integral {
        if twist == Twist::Sign || !integral_supported(x) {
            return Err(SpaceError::UnsupportedIntegral(x.to_string()));
        }
    }
    eval(x, flavor, twist, mode)
}

fn integral_supported(x: &SpaceExpr) -> bool {
    match x {
        SpaceExpr::Point | SpaceExpr::Affine { .. } | SpaceExpr::Proj { .. } | SpaceExpr::Grassmann { .. } => true,
        SpaceExpr::Product { factors } => factors.iter().all(integral_supported),
        _ => false,
    }
}

fn even_degrees(p: &PoincarePolynomial, mode: CoefficientMode) -> GradedModule {
    GradedModule::free_with_mode(
        p.coefficients().iter().enumerate().map(|(i, &c)| (i as i64, c)),
        mode,
    )
}

fn eval(x: &SpaceExpr, flavor: Flavor, twist: Twist, mode: CoefficientMode) -> Result<GradedModule, SpaceError> {
    let untwisted = || {
        if twist == Twist::Sign {
            Err(SpaceError::UnsupportedTwist(x.to_string()))
        } else {
            Ok(())
        }
    };
    match x {
        SpaceExpr::Point => {
            untwisted()?;
            Ok(GradedModule::point(mode))
        }
        SpaceExpr::Affine { n } => {
            untwisted()?;
            Ok(match flavor {
                Flavor::Ordinary => GradedModule::point(mode),
                Flavor::BorelMoore => GradedModule::free_with_mode([(2 * *n as i64, 1)], mode),
            })
        }
        SpaceExpr::Proj { n } => {
            untwisted()?;
            Ok(GradedModule::free_with_mode((0..=*n as i64).map(|i| (2 * i, 1)), mode))
        }
        SpaceExpr::Grassmann { k, m } => {
            untwisted()?;
            Ok(even_degrees(&grassmann_poincare(*k, *m)?, mode))
        }
        SpaceExpr::Config { space, k } => config_homology(space, *k, flavor, twist),
        SpaceExpr::GenericConfig { n, k } => {
            if twist != Twist::Sign {
                return Err(SpaceError::UnsupportedTwist(format!("{x} with constant coefficients")));
            }
            let bm = generic_config_homology(*n, *k)?;
            Ok(match flavor {
                Flavor::BorelMoore => bm,
                Flavor::Ordinary => bm.reflect(x.real_dimension().unwrap()),
            })
        }
        SpaceExpr::Pgl { m } => {
            untwisted()?;
            pgl_homology(*m, flavor)
        }
        SpaceExpr::Product { factors } => {
            if twist == Twist::Sign && !factors.iter().any(SpaceExpr::is_configuration) {
                return Err(SpaceError::UnsupportedTwist(x.to_string()));
            }
            let mut acc = GradedModule::point(mode);
            for f in factors {
                let t = if f.is_configuration() { twist } else { Twist::Trivial };
                let h = eval(f, flavor, t, mode)?;
                if h.is_zero() {
                    // Künneth with a zero factor; the remaining factors are not needed
                    return Ok(GradedModule::zero(mode));
                }
                acc = acc.tensor(&h);
            }
            Ok(acc)
        }
        SpaceExpr::Known { ordinary, borel_moore, .. } => {
            untwisted()?;
            let m = match flavor {
                Flavor::Ordinary => ordinary,
                Flavor::BorelMoore => borel_moore,
            };
            m.clone()
                .map(|m| m.with_mode(CoefficientMode::Rational))
                .ok_or(SpaceError::UnsupportedFlavor { space: x.to_string(), flavor })
        }
    }
}

fn config_homology(space: &SpaceExpr, k: u32, flavor: Flavor, twist: Twist) -> Result<GradedModule, SpaceError> {
    let whole = SpaceExpr::config(space.clone(), k);
    if k == 0 {
        return Ok(GradedModule::point(CoefficientMode::Rational));
    }
    if k == 1 {
        return eval(space, flavor, Twist::Trivial, CoefficientMode::Rational);
    }
    let dim = whole.real_dimension().unwrap();
    let bm = match (space, twist) {
        // B(ℂⁿ, k), k ≥ 2, is ±ℚ-acyclic
        (SpaceExpr::Affine { .. }, Twist::Sign) => GradedModule::zero(CoefficientMode::Rational),
        // H*(B(ℂⁿ,k); ℚ) is ℚ in degrees 0 and 2n-1
        (SpaceExpr::Affine { n }, Twist::Trivial) => {
            GradedModule::from_ranks([(0, 1), (2 * *n as i64 - 1, 1)]).reflect(dim)
        }
        (SpaceExpr::Proj { n }, Twist::Sign) => {
            GradedModule::from_ranks(schubert_cells(*n, k).into_iter().map(|(_, c)| (2 * c as i64, 1)))
        }
        (SpaceExpr::Proj { n }, Twist::Trivial) if k == 2 => unordered_pairs_bm(*n),
        _ => return Err(SpaceError::UnsupportedTwist(format!("{whole} with constant coefficients"))),
    };
    Ok(match flavor {
        Flavor::BorelMoore => bm,
        Flavor::Ordinary => bm.reflect(dim),
    })
}

/// H̄_*(B(ℂPⁿ,2); ℚ): swap-invariants of H̄_*(ℂPⁿ×ℂPⁿ) modulo the diagonal classes.
fn unordered_pairs_bm(n: u32) -> GradedModule {
    let n = n as i64;
    let mut ranks = Vec::new();
    for s in 0..=2 * n {
        let invariant = (0..=n).filter(|&a| s - a >= a && s - a <= n).count() as u64;
        let diagonal = u64::from(s <= n);
        ranks.push((2 * s, invariant - diagonal));
    }
    GradedModule::from_ranks(ranks)
}

/// Schubert symbols a = (a₀ ≤ … ≤ aₙ = k) with unit steps and a₀ ≤ 1, paired with
/// the complex dimension Σ i·(aᵢ − aᵢ₋₁) of the corresponding cell of B(ℂPⁿ, k).
pub fn schubert_cells(n: u32, k: u32) -> Vec<(Vec<u32>, u32)> {
    let positions = n as usize + 1;
    let mut out = Vec::new();
    if k as usize > positions {
        return out;
    }
    for mask in 0u64..(1u64 << positions) {
        if mask.count_ones() != k {
            continue;
        }
        let mut symbol = Vec::with_capacity(positions);
        let mut running = 0;
        let mut dim = 0;
        for i in 0..positions {
            if mask >> i & 1 == 1 {
                running += 1;
                dim += i as u32;
            }
            symbol.push(running);
        }
        out.push((symbol, dim));
    }
    out.sort_by(|a, b| a.1.cmp(&b.1).then_with(|| b.0.cmp(&a.0)));
    out
}

/// Gaussian binomial [m choose k] in q = t².
pub fn grassmann_poincare(k: u32, m: u32) -> Result<PoincarePolynomial, SpaceError> {
    if k > m {
        return Err(SpaceError::BadRange { k, m });
    }
    // [m,k] = [m-1,k-1] + q^k [m-1,k], coefficients indexed by powers of q
    fn gauss(k: usize, m: usize) -> Vec<u64> {
        if k == 0 || k == m {
            return vec![1];
        }
        let a = gauss(k - 1, m - 1);
        let b = gauss(k, m - 1);
        let mut out = vec![0; (b.len() + k).max(a.len())];
        for (i, c) in a.iter().enumerate() {
            out[i] += c;
        }
        for (i, c) in b.iter().enumerate() {
            out[i + k] += c;
        }
        out
    }
    let q = gauss(k as usize, m as usize);
    let mut t = vec![0; 2 * q.len()];
    for (i, c) in q.into_iter().enumerate() {
        t[2 * i] = c;
    }
    Ok(PoincarePolynomial::new(t))
}

/// The degenerate loci removed from B(ℂPⁿ,k) to get the generic configurations.
pub fn degenerate_pieces(n: u32, k: u32) -> Result<Vec<SpaceExpr>, SpaceError> {
    use SpaceExpr as S;
    let collinear = |m: u32| S::config(S::proj(1), m);
    Ok(match (n, k) {
        // three points on a line: line × B(ℂP¹,3)
        (2, 3) => vec![S::product([S::proj(2), collinear(3)])],
        (2, 4) => vec![
            S::product([S::proj(2), collinear(3), S::affine(2)]),
            S::product([S::proj(2), collinear(4)]),
        ],
        (3, 3) => vec![S::product([S::grassmann(2, 4), collinear(3)])],
        (3, 4) => vec![
            S::product([S::proj(3), S::generic_config(2, 4)]),
            S::product([S::proj(3), S::proj(2), collinear(3), S::affine(2)]),
            S::product([S::grassmann(2, 4), collinear(4)]),
        ],
        _ => return Err(SpaceError::UnsupportedPair { n, k }),
    })
}

/// H̄_*(B̃(ℂPⁿ,k); ±ℚ) by excision of the degenerate configurations from B(ℂPⁿ,k).
pub fn generic_config_homology(n: u32, k: u32) -> Result<GradedModule, SpaceError> {
    let pieces = degenerate_pieces(n, k)?;
    let full = homology(
        &SpaceExpr::config(SpaceExpr::proj(n), k),
        Flavor::BorelMoore,
        Twist::Sign,
        CoefficientMode::Rational,
    )?;
    for piece in &pieces {
        let h = homology(piece, Flavor::BorelMoore, Twist::Sign, CoefficientMode::Rational)?;
        if !h.is_zero() {
            // the exact sequence of the pair would need the connecting map
            return Err(SpaceError::AmbiguousExcision(format!("B~(CP^{n},{k}) minus {piece}")));
        }
    }
    Ok(full)
}

/// H_*(PGL_m(ℂ); ℚ): exterior algebra on generators of degrees 3, 5, …, 2m−1;
/// the Borel–Moore version is its reflection through the real dimension.
pub fn pgl_homology(m: u32, flavor: Flavor) -> Result<GradedModule, SpaceError> {
    if !(3..=4).contains(&m) {
        return Err(SpaceError::UnsupportedRank(m));
    }
    let gens: Vec<usize> = (2..=m as usize).map(|i| 2 * i - 1).collect();
    let ordinary = even_degrees(&PoincarePolynomial::exterior(&gens), CoefficientMode::Rational);
    Ok(match flavor {
        Flavor::Ordinary => ordinary,
        Flavor::BorelMoore => ordinary.reflect(2 * ((m as i64).pow(2) - 1)),
    })
}

/// Generalized binomial coefficient x(x−1)…(x−k+1)/k! for any integer x.
pub fn binomial(x: i64, k: u32) -> i64 {
    let mut num: i128 = 1;
    let mut den: i128 = 1;
    for i in 0..k as i128 {
        num *= x as i128 - i;
        den *= i + 1;
    }
    (num / den) as i64
}

/// Compactly supported Euler characteristic, computed combinatorially
/// (independently of [`homology`]).
pub fn euler_cs(x: &SpaceExpr) -> Result<i64, SpaceError> {
    x.validate()?;
    Ok(match x {
        SpaceExpr::Point | SpaceExpr::Affine { .. } => 1,
        SpaceExpr::Proj { n } => *n as i64 + 1,
        SpaceExpr::Grassmann { k, m } => binomial(*m as i64, *k),
        SpaceExpr::Config { space, k } => binomial(euler_cs(space)?, *k),
        SpaceExpr::GenericConfig { n, k } => {
            let full = binomial(*n as i64 + 1, *k);
            let removed: i64 = degenerate_pieces(*n, *k)?.iter().map(euler_cs).sum::<Result<_, _>>()?;
            full - removed
        }
        SpaceExpr::Pgl { .. } => 0,
        SpaceExpr::Product { factors } => factors.iter().map(euler_cs).product::<Result<_, _>>()?,
        SpaceExpr::Known { ordinary, borel_moore, .. } => {
            borel_moore.as_ref().or(ordinary.as_ref()).map_or(0, GradedModule::euler_characteristic)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bm_sign(x: &SpaceExpr) -> GradedModule {
        homology(x, Flavor::BorelMoore, Twist::Sign, CoefficientMode::Rational).unwrap()
    }

    #[test]
    fn projective_plane() {
        let h = homology(&SpaceExpr::proj(2), Flavor::Ordinary, Twist::Trivial, CoefficientMode::Rational).unwrap();
        assert_eq!(h, GradedModule::from_ranks([(0, 1), (2, 1), (4, 1)]));
    }

    #[test]
    fn twisted_configurations() {
        assert!(bm_sign(&SpaceExpr::config(SpaceExpr::affine(3), 2)).is_zero());
        assert_eq!(bm_sign(&SpaceExpr::config(SpaceExpr::proj(1), 2)), GradedModule::from_ranks([(2, 1)]));
        assert_eq!(
            bm_sign(&SpaceExpr::config(SpaceExpr::proj(3), 2)),
            GradedModule::from_ranks([(2, 1), (4, 1), (6, 2), (8, 1), (10, 1)])
        );
        assert!(bm_sign(&SpaceExpr::config(SpaceExpr::proj(1), 3)).is_zero());
    }

    #[test]
    fn schubert_examples() {
        assert_eq!(schubert_cells(1, 2), vec![(vec![1, 2], 1)]);
        assert_eq!(
            schubert_cells(2, 2),
            vec![(vec![1, 2, 2], 1), (vec![1, 1, 2], 2), (vec![0, 1, 2], 3)]
        );
        assert!(schubert_cells(1, 3).is_empty());
    }

    #[test]
    fn grassmann_examples() {
        assert_eq!(grassmann_poincare(1, 3).unwrap(), PoincarePolynomial::new(vec![1, 0, 1, 0, 1]));
        assert_eq!(grassmann_poincare(2, 2).unwrap(), PoincarePolynomial::one());
        assert_eq!(
            grassmann_poincare(2, 4).unwrap(),
            PoincarePolynomial::new(vec![1, 0, 1, 0, 2, 0, 1, 0, 1])
        );
        assert!(matches!(grassmann_poincare(3, 2), Err(SpaceError::BadRange { .. })));
    }

    #[test]
    fn generic_configurations() {
        assert_eq!(generic_config_homology(2, 3).unwrap(), GradedModule::from_ranks([(6, 1)]));
        assert!(generic_config_homology(2, 4).unwrap().is_zero());
        assert_eq!(
            generic_config_homology(3, 3).unwrap(),
            GradedModule::from_ranks([(6, 1), (8, 1), (10, 1), (12, 1)])
        );
        assert_eq!(generic_config_homology(3, 4).unwrap(), GradedModule::from_ranks([(12, 1)]));
        assert!(matches!(generic_config_homology(2, 5), Err(SpaceError::UnsupportedPair { .. })));
    }

    #[test]
    fn pgl() {
        assert_eq!(
            pgl_homology(3, Flavor::Ordinary).unwrap(),
            GradedModule::from_ranks([(0, 1), (3, 1), (5, 1), (8, 1)])
        );
        assert_eq!(
            pgl_homology(3, Flavor::BorelMoore).unwrap(),
            GradedModule::from_ranks([(16, 1), (13, 1), (11, 1), (8, 1)])
        );
        let p4 = PoincarePolynomial::from_module(&pgl_homology(4, Flavor::Ordinary).unwrap()).unwrap();
        assert_eq!(p4, PoincarePolynomial::exterior(&[3, 5, 7]));
        assert!(matches!(pgl_homology(5, Flavor::Ordinary), Err(SpaceError::UnsupportedRank(5))));
    }

    #[test]
    fn error_paths() {
        let twisted_proj = homology(&SpaceExpr::proj(2), Flavor::BorelMoore, Twist::Sign, CoefficientMode::Rational);
        assert!(matches!(twisted_proj, Err(SpaceError::UnsupportedTwist(_))));
        let integral_config = homology(
            &SpaceExpr::config(SpaceExpr::proj(2), 2),
            Flavor::BorelMoore,
            Twist::Sign,
            CoefficientMode::Integral,
        );
        assert!(matches!(integral_config, Err(SpaceError::UnsupportedIntegral(_))));
        let bad = SpaceExpr::config(SpaceExpr::Pgl { m: 3 }, 2);
        assert!(matches!(bad.validate(), Err(SpaceError::Invalid(_))));
    }

    #[test]
    fn integral_grassmannian_product() {
        let x = SpaceExpr::product([SpaceExpr::proj(1), SpaceExpr::grassmann(2, 4)]);
        let h = homology(&x, Flavor::Ordinary, Twist::Trivial, CoefficientMode::Integral).unwrap();
        assert_eq!(h.mode(), CoefficientMode::Integral);
        assert_eq!(h.total_rank(), 12);
    }

    #[test]
    fn unordered_pairs_euler() {
        for n in 1..5 {
            let h = unordered_pairs_bm(n);
            assert_eq!(h.euler_characteristic(), binomial(n as i64 + 1, 2));
        }
        assert_eq!(unordered_pairs_bm(2), GradedModule::from_ranks([(4, 1), (6, 1), (8, 1)]));
    }
}
