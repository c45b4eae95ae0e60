//! Stratification catalogs of the five built-in cases and assembly of the E¹ page
//! of the main spectral sequence.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{CoefficientMode, Entry, GradedModule, IntegerMatrix};
use crate::links::{self, Intersection, LinkError, LinkExpr, LinkFiber, LinkStratum};
use crate::spaces::{self, binomial, Flavor, SpaceError, SpaceExpr, Twist};

pub const SPEC_VERSION: u32 = 1;

pub const CASE_IDS: [&str; 5] = ["quadric-p2", "cubic-p2", "quartic-p2", "cubic-p3", "vf-222"];

#[derive(Debug, Error)]
pub enum StrataError {
    #[error("unknown case `{0}` (known: quadric-p2, cubic-p2, quartic-p2, cubic-p3, vf-222)")]
    UnknownCase(String),
    #[error("{path}: line {line}, column {column}: {message}")]
    Parse { path: String, line: usize, column: usize, message: String },
    #[error("invalid stratification: {0}")]
    InvalidSpec(String),
    #[error("stratum {p}: {source}")]
    Link { p: u32, source: LinkError },
    #[error("stratum {p}: {source}")]
    Space { p: u32, source: SpaceError },
    #[error("integral coefficients are not supported for stratum {0}")]
    UnsupportedIntegral(u32),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", deny_unknown_fields)]
pub enum StratumFiber {
    /// the stratum is a vector bundle over its base
    PointFiber,
    /// bundle of open (k−1)-simplices; sign-twisted together with the base unless orientable
    OpenSimplex {
        k: u32,
        #[serde(default)]
        orientable: bool,
    },
    OpenCone { link: LinkExpr },
    /// the last term; its link is the union of all previous terms
    FinalColumn {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        link: Option<LinkExpr>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Stratum {
    pub p: u32,
    pub name: String,
    pub base: SpaceExpr,
    #[serde(default)]
    pub twist: Twist,
    #[serde(rename = "L_dim")]
    pub l_dim: u32,
    pub fiber: StratumFiber,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KnownDifferential {
    pub from: (i64, i64),
    pub to: (i64, i64),
    pub matrix: IntegerMatrix,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StratificationSpec {
    pub version: u32,
    pub case_id: String,
    pub d: u32,
    pub n: u32,
    /// triples of quadratic forms instead of single forms
    #[serde(default)]
    pub vector_field: bool,
    #[serde(rename = "D")]
    pub dim: u32,
    pub projectivize: bool,
    pub strata: Vec<Stratum>,
    #[serde(default)]
    pub known_differentials: Vec<KnownDifferential>,
}

impl StratificationSpec {
    pub fn final_stratum(&self) -> &Stratum {
        self.strata.last().expect("validated spec has strata")
    }

    pub fn stratum(&self, p: u32) -> Option<&Stratum> {
        self.strata.iter().find(|s| s.p == p)
    }

    /// Complex codimension of stratum `p` in the space of forms.
    pub fn codimension(&self, s: &Stratum) -> i64 {
        self.dim as i64 - s.l_dim as i64
    }

    pub fn validate(&self) -> Result<(), StrataError> {
        let bad = |m: String| Err(StrataError::InvalidSpec(m));
        if self.version != SPEC_VERSION {
            return bad(format!("schema version {} (expected {SPEC_VERSION})", self.version));
        }
        let forms = binomial((self.d + self.n) as i64, self.n) as u32;
        let expected = if self.vector_field { (self.n + 1) * forms } else { forms };
        if self.dim != expected {
            return bad(format!("D = {} but the space of forms has dimension {expected}", self.dim));
        }
        if self.strata.is_empty() {
            return bad("no strata".into());
        }
        for (i, s) in self.strata.iter().enumerate() {
            if s.p as usize != i + 1 {
                return bad(format!("stratum {} listed in position {}", s.p, i + 1));
            }
            let is_final = matches!(s.fiber, StratumFiber::FinalColumn { .. });
            if is_final != (i + 1 == self.strata.len()) {
                return bad(format!("stratum {}: exactly the last stratum must be the final column", s.p));
            }
            if s.l_dim >= self.dim {
                return bad(format!("stratum {}: L_dim {} not below D", s.p, s.l_dim));
            }
            if i > 0 && s.l_dim > self.strata[i - 1].l_dim {
                return bad(format!("stratum {}: codimension decreases", s.p));
            }
            if let StratumFiber::OpenSimplex { k, orientable } = s.fiber {
                if k == 0 {
                    return bad(format!("stratum {}: empty simplex", s.p));
                }
                if orientable && s.twist == Twist::Sign {
                    return bad(format!("stratum {}: orientable simplex bundle with sign twist", s.p));
                }
            }
        }
        if self.final_stratum().l_dim != 0 {
            return bad("the final stratum must have L_dim 0".into());
        }
        for kd in &self.known_differentials {
            let (fp, fq) = kd.from;
            let (tp, tq) = kd.to;
            let r = fp - tp;
            if r < 1 || tq != fq + r - 1 {
                return bad(format!("differential {:?} -> {:?} has wrong bidegree", kd.from, kd.to));
            }
            if fp < 1 || fp as usize > self.strata.len() || tp < 1 {
                return bad(format!("differential {:?} -> {:?} leaves the page", kd.from, kd.to));
            }
        }
        Ok(())
    }
}

/// E¹ (or any later) page: (p, q) ↦ group.
#[derive(Clone, PartialEq, Eq)]
pub struct E1Page {
    pub case_id: String,
    pub dim: u32,
    pub mode: CoefficientMode,
    cells: BTreeMap<(i64, i64), Entry>,
}

#[derive(Serialize, Deserialize)]
struct CellRecord {
    p: i64,
    q: i64,
    rank: u64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    torsion: Vec<crate::algebra::Torsion>,
}

#[derive(Serialize, Deserialize)]
struct PageRepr {
    case_id: String,
    #[serde(rename = "D")]
    dim: u32,
    mode: CoefficientMode,
    cells: Vec<CellRecord>,
}

impl Serialize for E1Page {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        PageRepr {
            case_id: self.case_id.clone(),
            dim: self.dim,
            mode: self.mode,
            cells: self
                .cells
                .iter()
                .map(|(&(p, q), e)| CellRecord { p, q, rank: e.free_rank, torsion: e.torsion.clone() })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for E1Page {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = PageRepr::deserialize(d)?;
        let mut page = E1Page::new(&r.case_id, r.dim, r.mode);
        for c in r.cells {
            page.set(c.p, c.q, Entry { free_rank: c.rank, torsion: c.torsion });
        }
        Ok(page)
    }
}

impl E1Page {
    pub fn new(case_id: &str, dim: u32, mode: CoefficientMode) -> Self {
        Self { case_id: case_id.to_string(), dim, mode, cells: BTreeMap::new() }
    }

    pub fn set(&mut self, p: i64, q: i64, mut entry: Entry) {
        if self.mode == CoefficientMode::Rational {
            entry.torsion.clear();
        }
        if entry.is_zero() {
            self.cells.remove(&(p, q));
        } else {
            self.cells.insert((p, q), entry);
        }
    }

    pub fn get(&self, p: i64, q: i64) -> Option<&Entry> {
        self.cells.get(&(p, q))
    }

    pub fn rank(&self, p: i64, q: i64) -> u64 {
        self.get(p, q).map_or(0, |e| e.free_rank)
    }

    pub fn cells(&self) -> impl Iterator<Item = ((i64, i64), &Entry)> {
        self.cells.iter().map(|(&k, e)| (k, e))
    }

    /// Nonzero cells as ((p, q), rank), torsion ignored.
    pub fn ranks(&self) -> Vec<((i64, i64), u64)> {
        self.cells.iter().filter(|(_, e)| e.free_rank > 0).map(|(&k, e)| (k, e.free_rank)).collect()
    }

    pub fn column(&self, p: i64) -> GradedModule {
        let mut m = GradedModule::zero(self.mode);
        for (&(cp, q), e) in &self.cells {
            if cp == p {
                m.add_entry(q, e);
            }
        }
        m
    }

    /// Places a module graded by total degree p+q into column p.
    pub fn set_column(&mut self, p: i64, by_total_degree: &GradedModule) {
        self.cells.retain(|&(cp, _), _| cp != p);
        for (t, e) in by_total_degree.entries() {
            self.set(p, t - p, e.clone());
        }
    }

    pub fn is_zero(&self) -> bool {
        self.cells.is_empty()
    }

    /// Σ (−1)^{p+q} rank.
    pub fn euler_characteristic(&self) -> i64 {
        self.cells
            .iter()
            .map(|(&(p, q), e)| if (p + q) % 2 == 0 { e.free_rank as i64 } else { -(e.free_rank as i64) })
            .sum()
    }

    /// Direct sum along anti-diagonals, graded by p+q.
    pub fn total(&self) -> GradedModule {
        let mut m = GradedModule::zero(self.mode);
        for (&(p, q), e) in &self.cells {
            m.add_entry(p + q, e);
        }
        m
    }

    pub fn columns(&self) -> Vec<i64> {
        let mut ps: Vec<i64> = self.cells.keys().map(|&(p, _)| p).collect();
        ps.dedup();
        ps
    }

    /// Grid table: rows q (descending), columns p.
    pub fn table(&self, last_column: i64) -> String {
        let mut out = String::new();
        if self.cells.is_empty() {
            out.push_str("(empty page)\n");
            return out;
        }
        let qs: Vec<i64> = {
            let mut v: Vec<i64> = self.cells.keys().map(|&(_, q)| q).collect();
            v.sort_unstable();
            v.dedup();
            v
        };
        let width = self
            .cells
            .values()
            .map(|e| e.label(self.mode).chars().count())
            .max()
            .unwrap_or(1)
            .max(last_column.to_string().len())
            + 1;
        let (qmin, qmax) = (qs[0], *qs.last().unwrap());
        for q in (qmin..=qmax).rev() {
            out.push_str(&format!("{q:>4} |"));
            for p in 1..=last_column {
                let cell = self.get(p, q).map_or(String::from("."), |e| e.label(self.mode));
                out.push_str(&format!("{cell:>width$}"));
            }
            out.push('\n');
        }
        out.push_str(&format!("{:>4} +{}\n", "", "-".repeat(width * last_column as usize)));
        out.push_str(&format!("{:>4}  ", "q/p"));
        for p in 1..=last_column {
            out.push_str(&format!("{p:>width$}"));
        }
        out.push('\n');
        out
    }
}

impl fmt::Debug for E1Page {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<String> = self.cells.iter().map(|(&(p, q), e)| format!("({p};{q}):{e}")).collect();
        write!(f, "E1Page[{}]{{{}}}", self.case_id, cells.join(", "))
    }
}

/// Borel–Moore homology of the term of stratum `s`, graded by total degree.
/// `None` for a final column without a known link.
pub fn stratum_bm(s: &Stratum, mode: CoefficientMode) -> Result<Option<GradedModule>, StrataError> {
    let space_err = |source| StrataError::Space { p: s.p, source };
    let link_err = |source| StrataError::Link { p: s.p, source };
    let base_bm = |twist| spaces::homology(&s.base, Flavor::BorelMoore, twist, mode).map_err(space_err);
    let thom = 2 * s.l_dim as i64;
    let eval = |link: &LinkExpr| match mode {
        CoefficientMode::Rational => links::eval_link(link),
        CoefficientMode::Integral => links::eval_link_integral(link),
    };
    Ok(Some(match &s.fiber {
        StratumFiber::PointFiber => base_bm(s.twist)?.shift(thom),
        StratumFiber::OpenSimplex { k, orientable } => {
            if mode == CoefficientMode::Integral {
                return Err(StrataError::UnsupportedIntegral(s.p));
            }
            let twist = if *orientable { Twist::Trivial } else { s.twist };
            base_bm(twist)?.shift(thom + *k as i64 - 1)
        }
        StratumFiber::OpenCone { link } => {
            let fiber = links::bm_open_cone(&eval(link).map_err(link_err)?);
            if fiber.is_zero() {
                return Ok(Some(GradedModule::zero(mode)));
            }
            base_bm(s.twist)?.tensor(&fiber).shift(thom)
        }
        StratumFiber::FinalColumn { link: Some(link) } => {
            links::bm_open_cone(&eval(link).map_err(link_err)?).shift(thom)
        }
        StratumFiber::FinalColumn { link: None } => return Ok(None),
    }))
}

/// E¹ page from every non-final stratum (and the final one when its link is known).
pub fn assemble_e1(spec: &StratificationSpec, mode: CoefficientMode) -> Result<E1Page, StrataError> {
    spec.validate()?;
    let mut page = E1Page::new(&spec.case_id, spec.dim, mode);
    for s in &spec.strata {
        if let Some(m) = stratum_bm(s, mode)? {
            page.set_column(s.p as i64, &m);
        }
    }
    Ok(page)
}

pub fn load_spec(path: &Path) -> Result<StratificationSpec, StrataError> {
    let text = std::fs::read_to_string(path)?;
    parse_spec(&text, &path.display().to_string())
}

/// Parses a spec document; `origin` names it in diagnostics.
pub fn parse_spec(text: &str, origin: &str) -> Result<StratificationSpec, StrataError> {
    let mut de = serde_json::Deserializer::from_str(text);
    let spec: StratificationSpec = serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let field = e.path().to_string();
        let inner = e.into_inner();
        StrataError::Parse {
            path: origin.to_string(),
            line: inner.line(),
            column: inner.column(),
            message: if field.is_empty() || field == "." { inner.to_string() } else { format!("at `{field}`: {inner}") },
        }
    })?;
    spec.validate()?;
    Ok(spec)
}

pub fn save_spec(spec: &StratificationSpec, path: &Path) -> Result<(), StrataError> {
    let text = serde_json::to_string_pretty(spec).map_err(|e| StrataError::InvalidSpec(e.to_string()))?;
    std::fs::write(path, text + "\n")?;
    Ok(())
}

pub fn builtin_spec(case_id: &str) -> Result<StratificationSpec, StrataError> {
    let spec = match case_id {
        "quadric-p2" => quadric_p2(),
        "cubic-p2" => cubic_p2(),
        "quartic-p2" => quartic_p2(),
        "cubic-p3" => cubic_p3(),
        "vf-222" => vf_222(),
        other => return Err(StrataError::UnknownCase(other.to_string())),
    };
    debug_assert!(spec.validate().is_ok());
    Ok(spec)
}

// ---- building blocks -------------------------------------------------------

use SpaceExpr as S;

fn p1() -> SpaceExpr {
    S::proj(1)
}

fn point_stratum(p: u32, name: &str, base: SpaceExpr, l_dim: u32) -> Stratum {
    Stratum { p, name: name.into(), base, twist: Twist::Trivial, l_dim, fiber: StratumFiber::PointFiber }
}

fn simplex_stratum(p: u32, name: &str, base: SpaceExpr, l_dim: u32, k: u32) -> Stratum {
    Stratum {
        p,
        name: name.into(),
        base,
        twist: Twist::Sign,
        l_dim,
        fiber: StratumFiber::OpenSimplex { k, orientable: false },
    }
}

fn cone_stratum(p: u32, name: &str, base: SpaceExpr, l_dim: u32, link: LinkExpr) -> Stratum {
    Stratum { p, name: name.into(), base, twist: Twist::Trivial, l_dim, fiber: StratumFiber::OpenCone { link } }
}

fn final_stratum(p: u32, link: Option<LinkExpr>) -> Stratum {
    Stratum {
        p,
        name: "entire projective space".into(),
        base: S::Point,
        twist: Twist::Trivial,
        l_dim: 0,
        fiber: StratumFiber::FinalColumn { link },
    }
}

fn spec(case_id: &str, d: u32, n: u32, dim: u32, strata: Vec<Stratum>) -> StratificationSpec {
    StratificationSpec {
        version: SPEC_VERSION,
        case_id: case_id.into(),
        d,
        n,
        vector_field: false,
        dim,
        projectivize: true,
        strata,
        known_differentials: Vec::new(),
    }
}

/// Space of nonsingular conics in ℂP², a homogeneous space of PGL₃ with the
/// rational homology of S⁵.
pub fn smooth_conics() -> SpaceExpr {
    S::Known {
        name: "smooth conics in CP^2".into(),
        ordinary: Some(GradedModule::from_ranks([(0, 1), (5, 1)])),
        borel_moore: Some(GradedModule::from_ranks([(5, 1), (10, 1)])),
        provenance: "PGL_3(C)/PO_3(C); rationally a 5-sphere, open of real dimension 10".into(),
    }
}

/// Generic quadruples of lines in ℂP²: rationally PGL₃(ℂ), as the ordered
/// configurations form a PGL₃-torsor whose homology survives the S₄ quotient.
pub fn generic_line_quadruples() -> SpaceExpr {
    S::Known {
        name: "B~(CP^2v,4)".into(),
        ordinary: Some(spaces::pgl_homology(3, Flavor::Ordinary).expect("PGL_3 in catalog")),
        borel_moore: Some(spaces::pgl_homology(3, Flavor::BorelMoore).expect("PGL_3 in catalog")),
        provenance: "ordered generic quadruples form a PGL_3(C)-torsor; S_4 acts trivially on rational homology".into(),
    }
}

fn stratified(strata: Vec<LinkStratum>) -> LinkExpr {
    LinkExpr::StratifiedLink { strata }
}

fn piece(base: SpaceExpr, fiber: LinkFiber) -> LinkStratum {
    LinkStratum { base, twist: Twist::Trivial, fiber }
}

fn closed(link: LinkExpr) -> LinkStratum {
    piece(S::Point, LinkFiber::Closed { link: Box::new(link) })
}

fn open_cone(link: LinkExpr) -> LinkFiber {
    LinkFiber::OpenCone { link: Box::new(link) }
}

fn union2(a: LinkExpr, b: LinkExpr, ab: LinkExpr) -> LinkExpr {
    LinkExpr::MvUnion { pieces: vec![a, b], intersections: vec![Intersection { indices: vec![0, 1], link: ab }] }
}

/// Link of two crossing lines: the order complexes of the lines, glued at the
/// crossing point, plus triangles (crossing point, a point of each line) with two
/// sides already present.
fn crossing_lines_link(points_per_line: u32) -> LinkExpr {
    let line = LinkExpr::cone(LinkExpr::self_join(p1(), points_per_line));
    stratified(vec![
        closed(union2(line.clone(), line, LinkExpr::point())),
        piece(S::product([S::affine(1), S::affine(1)]), LinkFiber::SimplexMinusFaces { dim: 2, removed: 2 }),
    ])
}

// ---- catalogs --------------------------------------------------------------

fn quadric_p2() -> StratificationSpec {
    let mut s = spec(
        "quadric-p2",
        2,
        2,
        6,
        vec![
            point_stratum(1, "point", S::proj(2), 3),
            cone_stratum(2, "line", S::proj(2), 1, LinkExpr::space(p1())),
            final_stratum(
                3,
                Some(LinkExpr::known(
                    GradedModule::from_ranks([(7, 1)]),
                    "link of the zero quadric: the 7-sphere (the order complex of CP^2 minus the zero form)",
                )),
            ),
        ],
    );
    s.known_differentials = vec![
        KnownDifferential { from: (3, 5), to: (2, 5), matrix: IntegerMatrix::from_rows(&[[2]]) },
        KnownDifferential { from: (2, 7), to: (1, 7), matrix: IntegerMatrix::from_rows(&[[2]]) },
    ];
    s
}

fn cubic_p2() -> StratificationSpec {
    spec(
        "cubic-p2",
        3,
        2,
        10,
        vec![
            point_stratum(1, "point", S::proj(2), 7),
            simplex_stratum(2, "two points", S::config(S::proj(2), 2), 4, 2),
            cone_stratum(3, "line", S::proj(2), 3, LinkExpr::self_join(p1(), 2)),
            simplex_stratum(4, "three generic points", S::generic_config(2, 3), 1, 3),
            final_stratum(5, None),
        ],
    )
}

/// A_i of the two-lines link: the order complex of l_i, then sets (l_i, point of
/// the other line) at the two filtration levels.
fn line_plus_point_piece() -> LinkExpr {
    let sj3 = LinkExpr::self_join(p1(), 3);
    stratified(vec![
        closed(LinkExpr::cone(sj3.clone())),
        piece(S::affine(1), open_cone(sj3.clone())),
        piece(S::affine(1), open_cone(LinkExpr::susp(sj3))),
    ])
}

fn quartic_p2() -> StratificationSpec {
    let sj3 = LinkExpr::self_join(p1(), 3);
    let a_piece = line_plus_point_piece();
    let a_meet = stratified(vec![
        closed(LinkExpr::point()),
        piece(S::affine(1), LinkFiber::SimplexMinusFaces { dim: 1, removed: 1 }),
        piece(S::affine(1), LinkFiber::SimplexMinusFaces { dim: 1, removed: 1 }),
        piece(S::product([S::affine(1), S::affine(1)]), LinkFiber::SimplexMinusFaces { dim: 2, removed: 2 }),
    ]);
    let two_lines = union2(a_piece.clone(), a_piece, a_meet);
    let mut orientable = simplex_stratum(10, "six crossing points of four generic lines", generic_line_quadruples(), 1, 6);
    orientable.twist = Twist::Trivial;
    orientable.fiber = StratumFiber::OpenSimplex { k: 6, orientable: true };
    spec(
        "quartic-p2",
        4,
        2,
        15,
        vec![
            point_stratum(1, "point", S::proj(2), 12),
            simplex_stratum(2, "two points", S::config(S::proj(2), 2), 9, 2),
            simplex_stratum(3, "three collinear points", S::product([S::proj(2), S::config(p1(), 3)]), 7, 3),
            simplex_stratum(4, "three generic points", S::generic_config(2, 3), 6, 3),
            cone_stratum(5, "line", S::proj(2), 6, sj3.clone()),
            simplex_stratum(
                6,
                "three collinear points and a point off the line",
                S::product([S::proj(2), S::config(p1(), 3), S::affine(2)]),
                4,
                4,
            ),
            simplex_stratum(7, "four generic points", S::generic_config(2, 4), 3, 4),
            cone_stratum(8, "line and a point", S::product([S::proj(2), S::affine(2)]), 3, LinkExpr::susp(sj3)),
            simplex_stratum(
                9,
                "four generic points and a crossing of their joining lines",
                S::product([
                    S::config(S::affine(1), 2),
                    S::config(S::affine(1), 2),
                    S::config(S::proj(2), 2),
                ]),
                2,
                5,
            ),
            orientable,
            cone_stratum(11, "smooth conic", smooth_conics(), 1, LinkExpr::self_join(p1(), 4)),
            cone_stratum(12, "two lines", S::config(S::proj(2), 2), 1, two_lines),
            final_stratum(13, None),
        ],
    )
}

/// Link of a plane in ℂP³: the plane-cubic link Φ₄, then generic conics in the
/// plane, then pairs of lines in the plane.
fn plane_link() -> LinkExpr {
    stratified(vec![
        closed(LinkExpr::known(
            GradedModule::zero(CoefficientMode::Rational),
            "union of the first four terms of the plane-cubic resolution; acyclic by the auxiliary spectral sequence of plane cubics",
        )),
        piece(smooth_conics(), open_cone(LinkExpr::self_join(p1(), 3))),
        piece(S::config(S::proj(2), 2), open_cone(crossing_lines_link(2))),
    ])
}

/// Link of three concurrent lines.
fn three_lines_link() -> LinkExpr {
    let pair = LinkExpr::cone(crossing_lines_link(2));
    let line = LinkExpr::cone(LinkExpr::self_join(p1(), 2));
    let pairs = [[0, 1], [0, 2], [1, 2]].iter().map(|ix| Intersection { indices: ix.to_vec(), link: line.clone() });
    let union = LinkExpr::MvUnion {
        pieces: vec![pair.clone(), pair.clone(), pair],
        intersections: pairs
            .chain(std::iter::once(Intersection { indices: vec![0, 1, 2], link: LinkExpr::point() }))
            .collect(),
    };
    stratified(vec![
        closed(union),
        piece(
            S::product([S::affine(1), S::affine(1), S::affine(1)]),
            LinkFiber::SimplexMinusFaces { dim: 3, removed: 3 },
        ),
    ])
}

fn cubic_p3() -> StratificationSpec {
    let sj = |k| LinkExpr::self_join(p1(), k);
    spec(
        "cubic-p3",
        3,
        3,
        20,
        vec![
            point_stratum(1, "point", S::proj(3), 16),
            simplex_stratum(2, "two points", S::config(S::proj(3), 2), 12, 2),
            cone_stratum(3, "line", S::grassmann(2, 4), 10, sj(2)),
            simplex_stratum(4, "three generic points", S::generic_config(3, 3), 8, 3),
            cone_stratum(5, "plane conic", S::product([S::proj(3), smooth_conics()]), 5, sj(3)),
            cone_stratum(
                6,
                "two crossing lines",
                S::product([S::proj(3), S::config(S::proj(2), 2)]),
                5,
                crossing_lines_link(2),
            ),
            simplex_stratum(7, "four generic points", S::generic_config(3, 4), 4, 4),
            cone_stratum(8, "plane", S::proj(3), 4, plane_link()),
            cone_stratum(
                9,
                "three concurrent lines",
                S::product([S::proj(3), S::generic_config(2, 3)]),
                1,
                three_lines_link(),
            ),
            cone_stratum(
                10,
                "plane conic and a point",
                S::product([S::proj(3), smooth_conics(), S::affine(3)]),
                1,
                LinkExpr::susp(sj(3)),
            ),
            final_stratum(11, None),
        ],
    )
}

fn vf_222() -> StratificationSpec {
    let sj = |k| LinkExpr::self_join(p1(), k);
    let mut s = spec(
        "vf-222",
        2,
        2,
        18,
        vec![
            point_stratum(1, "point", S::proj(2), 15),
            simplex_stratum(2, "two points", S::config(S::proj(2), 2), 12, 2),
            simplex_stratum(3, "three generic points", S::generic_config(2, 3), 9, 3),
            cone_stratum(4, "line", S::proj(2), 9, sj(2)),
            simplex_stratum(5, "four generic points", S::generic_config(2, 4), 6, 4),
            cone_stratum(6, "line and a point", S::product([S::proj(2), S::affine(2)]), 6, LinkExpr::susp(sj(2))),
            cone_stratum(7, "smooth conic", smooth_conics(), 3, sj(4)),
            cone_stratum(8, "two lines", S::config(S::proj(2), 2), 3, crossing_lines_link(2)),
            final_stratum(9, None),
        ],
    );
    s.vector_field = true;
    s.projectivize = false;
    s
}
