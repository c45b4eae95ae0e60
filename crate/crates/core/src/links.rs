//! Reduced homology of links of order complexes, and Borel–Moore homology of
//! the open cones over them.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{homology_of_complex, AlgebraError, CoefficientMode, GradedModule, IntegerMatrix};
use crate::spaces::{self, Flavor, SpaceError, SpaceExpr, Twist};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinkError {
    #[error("assembly of {0} depends on an undetermined connecting map")]
    AmbiguousAssembly(String),
    #[error("malformed link expression: {0}")]
    Invalid(String),
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", deny_unknown_fields)]
pub enum LinkExpr {
    Space { space: SpaceExpr },
    /// (k−1)-simplex
    Simplex { k: u32 },
    SelfJoin { space: SpaceExpr, k: u32 },
    Join { left: Box<LinkExpr>, right: Box<LinkExpr> },
    Cone { inner: Box<LinkExpr> },
    Susp { inner: Box<LinkExpr> },
    MvUnion { pieces: Vec<LinkExpr>, intersections: Vec<Intersection> },
    StratifiedLink { strata: Vec<LinkStratum> },
    /// reduced homology supplied directly
    KnownLink { homology: GradedModule, provenance: String },
}

/// Intersection of the pieces listed in `indices`; unlisted intersections are empty.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Intersection {
    pub indices: Vec<usize>,
    pub link: LinkExpr,
}

/// One locally closed piece of a compact link: a fibration over `base`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinkStratum {
    pub base: SpaceExpr,
    #[serde(default)]
    pub twist: Twist,
    pub fiber: LinkFiber,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", deny_unknown_fields)]
pub enum LinkFiber {
    /// Borel–Moore homology of the fiber given directly
    Module { bm: GradedModule },
    OpenCone { link: Box<LinkExpr> },
    /// open (k−1)-simplex
    OpenSimplex { k: u32 },
    /// closed `dim`-simplex with `removed` of its facets deleted
    SimplexMinusFaces { dim: u32, removed: u32 },
    /// a compact space; contributes its unreduced homology
    Closed { link: Box<LinkExpr> },
}

impl LinkExpr {
    pub fn space(space: SpaceExpr) -> Self {
        Self::Space { space }
    }

    pub fn self_join(space: SpaceExpr, k: u32) -> Self {
        Self::SelfJoin { space, k }
    }

    pub fn cone(inner: LinkExpr) -> Self {
        Self::Cone { inner: Box::new(inner) }
    }

    pub fn susp(inner: LinkExpr) -> Self {
        Self::Susp { inner: Box::new(inner) }
    }

    pub fn join(left: LinkExpr, right: LinkExpr) -> Self {
        Self::Join { left: Box::new(left), right: Box::new(right) }
    }

    pub fn known(homology: GradedModule, provenance: &str) -> Self {
        Self::KnownLink { homology, provenance: provenance.to_string() }
    }

    pub fn point() -> Self {
        Self::space(SpaceExpr::Point)
    }

    pub fn validate(&self) -> Result<(), LinkError> {
        match self {
            Self::Space { space } => Ok(space.validate()?),
            Self::Simplex { k } if *k == 0 => Err(LinkError::Invalid("empty simplex".into())),
            Self::Simplex { .. } => Ok(()),
            Self::SelfJoin { space, k } => {
                if *space != SpaceExpr::proj(1) {
                    Err(LinkError::Invalid(format!("self-join of {space}")))
                } else if *k == 0 {
                    Err(LinkError::Invalid("empty self-join".into()))
                } else {
                    Ok(())
                }
            }
            Self::Join { left, right } => {
                left.validate()?;
                right.validate()
            }
            Self::Cone { inner } | Self::Susp { inner } => inner.validate(),
            Self::MvUnion { pieces, intersections } => {
                if pieces.len() < 2 {
                    return Err(LinkError::Invalid("union of fewer than two pieces".into()));
                }
                let mut seen = BTreeSet::new();
                for piece in pieces {
                    piece.validate()?;
                }
                for int in intersections {
                    let ok = int.indices.len() >= 2
                        && int.indices.windows(2).all(|w| w[0] < w[1])
                        && int.indices.iter().all(|&i| i < pieces.len());
                    if !ok || !seen.insert(int.indices.clone()) {
                        return Err(LinkError::Invalid(format!("bad intersection index set {:?}", int.indices)));
                    }
                    int.link.validate()?;
                }
                // every face of a listed intersection must be listed too
                for idx in &seen {
                    if idx.len() > 2 {
                        for skip in 0..idx.len() {
                            let mut face = idx.clone();
                            face.remove(skip);
                            if !seen.contains(&face) {
                                return Err(LinkError::Invalid(format!("intersection {face:?} missing")));
                            }
                        }
                    }
                }
                Ok(())
            }
            Self::StratifiedLink { strata } => {
                if strata.is_empty() || strata.len() > 4 {
                    return Err(LinkError::Invalid(format!("stratified link with {} strata", strata.len())));
                }
                for s in strata {
                    s.base.validate()?;
                    match &s.fiber {
                        LinkFiber::OpenCone { link } | LinkFiber::Closed { link } => link.validate()?,
                        LinkFiber::OpenSimplex { k: 0 } => {
                            return Err(LinkError::Invalid("open simplex of dimension -1".into()))
                        }
                        LinkFiber::SimplexMinusFaces { dim, removed } if removed > &(dim + 1) => {
                            return Err(LinkError::Invalid(format!("{removed} facets of a {dim}-simplex")))
                        }
                        _ => {}
                    }
                }
                Ok(())
            }
            Self::KnownLink { provenance, .. } if provenance.trim().is_empty() => {
                Err(LinkError::Invalid("known link without provenance".into()))
            }
            Self::KnownLink { .. } => Ok(()),
        }
    }
}

/// Reduced rational homology of a link.
pub fn eval_link(e: &LinkExpr) -> Result<GradedModule, LinkError> {
    e.validate()?;
    eval(e)
}

fn rational(x: &SpaceExpr, flavor: Flavor, twist: Twist) -> Result<GradedModule, SpaceError> {
    spaces::homology(x, flavor, twist, CoefficientMode::Rational)
}

fn eval(e: &LinkExpr) -> Result<GradedModule, LinkError> {
    match e {
        LinkExpr::Space { space } => Ok(rational(space, Flavor::Ordinary, Twist::Trivial)?.reduce()?),
        LinkExpr::Simplex { .. } | LinkExpr::Cone { .. } => Ok(GradedModule::zero(CoefficientMode::Rational)),
        LinkExpr::SelfJoin { k, .. } => Ok(self_join_page(*k)?.reduced),
        LinkExpr::Join { left, right } => Ok(eval(left)?.tensor(&eval(right)?).shift(1)),
        LinkExpr::Susp { inner } => Ok(eval(inner)?.shift(1)),
        LinkExpr::MvUnion { pieces, intersections } => mv_union(pieces, intersections),
        LinkExpr::StratifiedLink { strata } => stratified_link_homology(strata),
        LinkExpr::KnownLink { homology, .. } => Ok(homology.clone().with_mode(CoefficientMode::Rational)),
    }
}

/// Reduced homology with integer coefficients, for the links that admit it.
pub fn eval_link_integral(e: &LinkExpr) -> Result<GradedModule, LinkError> {
    e.validate()?;
    match e {
        LinkExpr::Space { space } => {
            Ok(spaces::homology(space, Flavor::Ordinary, Twist::Trivial, CoefficientMode::Integral)?.reduce()?)
        }
        LinkExpr::KnownLink { homology, .. } => Ok(homology.clone().with_mode(CoefficientMode::Integral)),
        LinkExpr::Susp { inner } => Ok(eval_link_integral(inner)?.shift(1)),
        LinkExpr::Simplex { .. } | LinkExpr::Cone { .. } => Ok(GradedModule::zero(CoefficientMode::Integral)),
        _ => Err(SpaceError::UnsupportedIntegral(format!("{e:?}")).into()),
    }
}

/// Borel–Moore homology of the open cone over a link: H̄_i = H̃_{i−1}(link).
pub fn bm_open_cone(link_reduced: &GradedModule) -> GradedModule {
    link_reduced.shift(1)
}

/// Filtration page of (ℂP¹)^{*k} by the number of points spanning a simplex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SelfJoinPage {
    /// (p, q) ↦ rank of H̄_{q+1}(B(ℂP¹,p), ±ℚ)
    pub cells: BTreeMap<(i64, i64), u64>,
    /// d¹ maps taken to be isomorphisms
    pub isomorphisms: Vec<((i64, i64), (i64, i64))>,
    pub reduced: GradedModule,
}

/// Self-join of ℂP¹: cells H̄_{q+1}(B(ℂP¹,p), ±ℚ) for p ≤ k; the d¹ from (2,1) to (1,1)
/// is an isomorphism (the boundary of the 2-dimensional Schubert cell).
pub fn self_join_page(k: u32) -> Result<SelfJoinPage, LinkError> {
    if k == 0 {
        return Err(LinkError::Invalid("empty self-join".into()));
    }
    let mut cells = BTreeMap::new();
    for p in 1..=k {
        let h = rational(&SpaceExpr::config(SpaceExpr::proj(1), p), Flavor::BorelMoore, Twist::Sign)?;
        for (deg, rank) in h.ranks() {
            cells.insert((p as i64, deg - 1), rank);
        }
    }
    let mut surviving = cells.clone();
    let mut isomorphisms = Vec::new();
    let (src, dst) = ((2, 1), (1, 1));
    if cells.get(&src) == Some(&1) && cells.get(&dst) == Some(&1) {
        surviving.remove(&src);
        surviving.remove(&dst);
        isomorphisms.push((src, dst));
    }
    let mut unreduced = GradedModule::zero(CoefficientMode::Rational);
    for ((p, q), rank) in surviving {
        unreduced = unreduced.direct_sum(&GradedModule::from_ranks([(p + q, rank)]));
    }
    Ok(SelfJoinPage { cells, isomorphisms, reduced: unreduced.reduce()? })
}

fn is_acyclic(m: &GradedModule) -> bool {
    m.is_zero()
}

fn mv_union(pieces: &[LinkExpr], intersections: &[Intersection]) -> Result<GradedModule, LinkError> {
    let piece_h: Vec<GradedModule> = pieces.iter().map(eval).collect::<Result<_, _>>()?;
    let int_h: Vec<GradedModule> = intersections.iter().map(|i| eval(&i.link)).collect::<Result<_, _>>()?;
    if piece_h.iter().chain(&int_h).all(is_acyclic) {
        // every nonempty intersection is acyclic: the union has the homology of the nerve
        let mut simplices: Vec<Vec<usize>> = (0..pieces.len()).map(|i| vec![i]).collect();
        simplices.extend(intersections.iter().map(|i| i.indices.clone()));
        return Ok(nerve_homology(&simplices)?.reduce()?);
    }
    if pieces.len() == 2 {
        let (a, b) = (&piece_h[0], &piece_h[1]);
        let ab = match int_h.first() {
            Some(h) => h.clone(),
            // disjoint union: H̃(A ⊔ B) = H̃(A) ⊕ H̃(B) ⊕ ℚ in degree 0
            None => return Ok(a.direct_sum(b).direct_sum(&GradedModule::from_ranks([(0, 1)]))),
        };
        if ab.is_zero() {
            return Ok(a.direct_sum(b));
        }
        if a.is_zero() && b.is_zero() {
            return Ok(ab.shift(1));
        }
    }
    Err(LinkError::AmbiguousAssembly(format!("union of {} pieces", pieces.len())))
}

/// Unreduced rational homology of the simplicial complex with the given simplices
/// (closed under faces).
fn nerve_homology(simplices: &[Vec<usize>]) -> Result<GradedModule, AlgebraError> {
    let top = simplices.iter().map(Vec::len).max().unwrap_or(1);
    let by_dim: Vec<Vec<&Vec<usize>>> =
        (1..=top).map(|n| simplices.iter().filter(|s| s.len() == n).collect()).collect();
    let mut boundaries = Vec::new();
    for d in 1..by_dim.len() {
        let (lower, upper) = (&by_dim[d - 1], &by_dim[d]);
        let mut m = IntegerMatrix::zeros(lower.len(), upper.len());
        for (j, s) in upper.iter().enumerate() {
            for skip in 0..s.len() {
                let mut face = (*s).clone();
                face.remove(skip);
                let i = lower.iter().position(|f| **f == face).expect("faces are listed");
                let sign = if skip % 2 == 0 { 1 } else { -1 };
                m.set(i, j, sign.into());
            }
        }
        boundaries.push(m);
    }
    if boundaries.is_empty() {
        return Ok(GradedModule::from_ranks([(0, by_dim[0].len() as u64)]));
    }
    homology_of_complex(&boundaries, CoefficientMode::Rational)
}

fn fiber_bm(fiber: &LinkFiber) -> Result<GradedModule, LinkError> {
    Ok(match fiber {
        LinkFiber::Module { bm } => bm.clone().with_mode(CoefficientMode::Rational),
        LinkFiber::OpenCone { link } => bm_open_cone(&eval(link)?),
        LinkFiber::OpenSimplex { k } => GradedModule::from_ranks([(*k as i64 - 1, 1)]),
        LinkFiber::SimplexMinusFaces { dim, removed } => {
            if *removed == 0 {
                GradedModule::from_ranks([(0, 1)])
            } else if removed <= dim {
                GradedModule::zero(CoefficientMode::Rational)
            } else {
                GradedModule::from_ranks([(*dim as i64, 1)])
            }
        }
        LinkFiber::Closed { link } => eval(link)?.unreduce(),
    })
}

/// Borel–Moore homology of one piece of a stratified link.
pub fn link_stratum_bm(s: &LinkStratum) -> Result<GradedModule, LinkError> {
    let fiber = fiber_bm(&s.fiber)?;
    if fiber.is_zero() {
        return Ok(fiber);
    }
    let base = rational(&s.base, Flavor::BorelMoore, s.twist)?;
    Ok(base.tensor(&fiber))
}

/// Reduced homology of a compact link filtered by closed subsets whose successive
/// differences are the given strata (first stratum closed).
pub fn stratified_link_homology(strata: &[LinkStratum]) -> Result<GradedModule, LinkError> {
    if strata.is_empty() || strata.len() > 4 {
        return Err(LinkError::Invalid(format!("stratified link with {} strata", strata.len())));
    }
    let pieces: Vec<GradedModule> = strata.iter().map(link_stratum_bm).collect::<Result<_, _>>()?;
    let nonzero = pieces.iter().filter(|m| !m.is_zero()).count();
    if nonzero > 1 {
        // a differential runs from a later stratum in degree t to an earlier one in degree t−1
        for (i, hi) in pieces.iter().enumerate() {
            for lo in &pieces[..i] {
                if hi.ranks().iter().any(|&(t, _)| lo.rank(t - 1) > 0) {
                    return Err(LinkError::AmbiguousAssembly(format!("stratified link with {nonzero} nonzero strata")));
                }
            }
        }
    }
    let total = pieces.iter().fold(GradedModule::zero(CoefficientMode::Rational), |acc, m| acc.direct_sum(m));
    total
        .reduce()
        .map_err(|_| LinkError::Invalid("stratified link with no degree-0 homology".into()))
}

/// Compactly supported Euler characteristic, computed stratum-wise without
/// evaluating any homology.
pub fn euler_cs(e: &LinkExpr) -> Result<i64, LinkError> {
    e.validate()?;
    euler(e)
}

fn euler(e: &LinkExpr) -> Result<i64, LinkError> {
    Ok(match e {
        LinkExpr::Space { space } => spaces::euler_cs(space)?,
        LinkExpr::Simplex { .. } | LinkExpr::Cone { .. } => 1,
        LinkExpr::SelfJoin { space, k } => {
            let mut chi = 0;
            for p in 1..=*k {
                let sign = if p % 2 == 1 { 1 } else { -1 };
                chi += sign * spaces::euler_cs(&SpaceExpr::config(space.clone(), p))?;
            }
            chi
        }
        LinkExpr::Join { left, right } => {
            let (a, b) = (euler(left)?, euler(right)?);
            a + b - a * b
        }
        LinkExpr::Susp { inner } => 2 - euler(inner)?,
        LinkExpr::MvUnion { pieces, intersections } => {
            let mut chi: i64 = pieces.iter().map(euler).sum::<Result<_, _>>()?;
            for int in intersections {
                let sign = if int.indices.len() % 2 == 0 { -1 } else { 1 };
                chi += sign * euler(&int.link)?;
            }
            chi
        }
        LinkExpr::StratifiedLink { strata } => {
            let mut chi = 0;
            for s in strata {
                chi += spaces::euler_cs(&s.base)? * fiber_euler(&s.fiber)?;
            }
            chi
        }
        LinkExpr::KnownLink { homology, .. } => 1 + homology.euler_characteristic(),
    })
}

fn fiber_euler(f: &LinkFiber) -> Result<i64, LinkError> {
    Ok(match f {
        LinkFiber::Module { bm } => bm.euler_characteristic(),
        LinkFiber::OpenCone { link } => 1 - euler(link)?,
        LinkFiber::OpenSimplex { k } => {
            if k % 2 == 1 {
                1
            } else {
                -1
            }
        }
        LinkFiber::SimplexMinusFaces { dim, removed } => {
            // χ of the union of r facets: contractible for 1 ≤ r ≤ dim, a (dim−1)-sphere for r = dim+1
            let union = match *removed {
                0 => 0,
                r if r <= *dim => 1,
                _ => 1 + if dim % 2 == 1 { 1 } else { -1 },
            };
            1 - union
        }
        LinkFiber::Closed { link } => euler(link)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p1() -> SpaceExpr {
        SpaceExpr::proj(1)
    }

    fn check_chi(e: &LinkExpr) {
        let h = eval_link(e).unwrap();
        assert_eq!(euler_cs(e).unwrap(), 1 + h.euler_characteristic(), "{e:?}");
    }

    #[test]
    fn cones_and_suspensions() {
        assert!(eval_link(&LinkExpr::cone(LinkExpr::space(SpaceExpr::proj(2)))).unwrap().is_zero());
        assert!(eval_link(&LinkExpr::susp(LinkExpr::self_join(p1(), 3))).unwrap().is_zero());
        let s3 = LinkExpr::susp(LinkExpr::space(p1()));
        assert_eq!(eval_link(&s3).unwrap(), GradedModule::from_ranks([(3, 1)]));
        check_chi(&s3);
    }

    #[test]
    fn self_joins() {
        let page = self_join_page(2).unwrap();
        assert_eq!(page.cells, BTreeMap::from([((1, -1), 1), ((1, 1), 1), ((2, 1), 1)]));
        assert!(page.reduced.is_zero());
        assert_eq!(self_join_page(1).unwrap().reduced, GradedModule::from_ranks([(2, 1)]));
        assert!(self_join_page(5).unwrap().reduced.is_zero());
        for k in 1..7 {
            check_chi(&LinkExpr::self_join(p1(), k));
        }
        assert_eq!(euler_cs(&LinkExpr::self_join(p1(), 4)).unwrap(), 1);
        assert!(eval_link(&LinkExpr::self_join(SpaceExpr::proj(2), 2)).is_err());
    }

    #[test]
    fn open_cones() {
        assert_eq!(bm_open_cone(&GradedModule::from_ranks([(0, 1)])), GradedModule::from_ranks([(1, 1)]));
        assert_eq!(bm_open_cone(&GradedModule::from_ranks([(2, 1)])), GradedModule::from_ranks([(3, 1)]));
        assert_eq!(bm_open_cone(&GradedModule::from_ranks([(7, 1)])), GradedModule::from_ranks([(8, 1)]));
    }

    #[test]
    fn joins() {
        let s2 = LinkExpr::space(p1());
        let j = LinkExpr::join(s2.clone(), s2);
        assert_eq!(eval_link(&j).unwrap(), GradedModule::from_ranks([(5, 1)]));
        check_chi(&j);
    }

    #[test]
    fn unions() {
        // circle as two arcs meeting in two points
        let arc = LinkExpr::Simplex { k: 2 };
        let two_points = LinkExpr::known(GradedModule::from_ranks([(0, 1)]), "two points");
        let circle = LinkExpr::MvUnion {
            pieces: vec![arc.clone(), arc.clone()],
            intersections: vec![Intersection { indices: vec![0, 1], link: two_points }],
        };
        assert_eq!(eval_link(&circle).unwrap(), GradedModule::from_ranks([(1, 1)]));
        check_chi(&circle);
        // boundary of a triangle: three arcs, pairwise meeting in points, no triple point
        let triangle = LinkExpr::MvUnion {
            pieces: vec![arc.clone(), arc.clone(), arc.clone()],
            intersections: [[0, 1], [0, 2], [1, 2]]
                .iter()
                .map(|ix| Intersection { indices: ix.to_vec(), link: LinkExpr::point() })
                .collect(),
        };
        assert_eq!(eval_link(&triangle).unwrap(), GradedModule::from_ranks([(1, 1)]));
        check_chi(&triangle);
        let spheres = LinkExpr::MvUnion {
            pieces: vec![LinkExpr::space(p1()), LinkExpr::space(p1())],
            intersections: vec![Intersection { indices: vec![0, 1], link: LinkExpr::space(p1()) }],
        };
        assert!(matches!(eval_link(&spheres), Err(LinkError::AmbiguousAssembly(_))));
    }

    #[test]
    fn stratified() {
        let cp1 = LinkExpr::StratifiedLink {
            strata: vec![LinkStratum {
                base: p1(),
                twist: Twist::Trivial,
                fiber: LinkFiber::Module { bm: GradedModule::from_ranks([(0, 1)]) },
            }],
        };
        assert_eq!(eval_link(&cp1).unwrap(), GradedModule::from_ranks([(2, 1)]));
        check_chi(&cp1);
        // point ⊔ ℂ
        let sphere = LinkExpr::StratifiedLink {
            strata: vec![
                LinkStratum { base: SpaceExpr::Point, twist: Twist::Trivial, fiber: LinkFiber::SimplexMinusFaces { dim: 0, removed: 0 } },
                LinkStratum { base: SpaceExpr::affine(1), twist: Twist::Trivial, fiber: LinkFiber::SimplexMinusFaces { dim: 0, removed: 0 } },
            ],
        };
        assert_eq!(eval_link(&sphere).unwrap(), GradedModule::from_ranks([(2, 1)]));
        check_chi(&sphere);
        let clash = LinkExpr::StratifiedLink {
            strata: vec![
                LinkStratum { base: SpaceExpr::Point, twist: Twist::Trivial, fiber: LinkFiber::Module { bm: GradedModule::from_ranks([(0, 1), (2, 1)]) } },
                LinkStratum { base: SpaceExpr::Point, twist: Twist::Trivial, fiber: LinkFiber::OpenSimplex { k: 4 } },
            ],
        };
        assert!(matches!(eval_link(&clash), Err(LinkError::AmbiguousAssembly(_))));
    }
}
