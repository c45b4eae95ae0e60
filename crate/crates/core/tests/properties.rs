use conical_core::algebra::{
    homology_of_complex, smith_normal_form, CoefficientMode, Entry, GradedModule, IntegerMatrix, PoincarePolynomial,
};
use conical_core::links::{self, eval_link, self_join_page, LinkExpr, LinkFiber};
use conical_core::report::{factor_odd_generators, reduced_dual};
use conical_core::spaces::{self, grassmann_poincare, homology, Flavor, SpaceExpr, Twist};
use conical_core::strata::{builtin_spec, StratumFiber, CASE_IDS};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

/// Rank by plain fraction-free elimination in i128.
fn naive_rank(rows: &[Vec<i64>]) -> usize {
    let mut a: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let cols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..a.len()).find(|&r| a[r][c] != 0) else { continue };
        a.swap(rank, piv);
        for r in 0..a.len() {
            if r != rank && a[r][c] != 0 {
                let (f, g) = (a[r][c], a[rank][c]);
                for k in 0..cols {
                    a[r][k] = a[r][k] * g - a[rank][k] * f;
                }
                let gcd = a[r].iter().fold(0i128, |acc, &x| num_integer::gcd(acc, x));
                if gcd > 1 {
                    a[r].iter_mut().for_each(|x| *x /= gcd);
                }
            }
        }
        rank += 1;
    }
    rank
}

fn small_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..6, 1usize..6).prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-9i64..10, c), r))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn smith_chain_and_rank(rows in small_matrix()) {
        let m = IntegerMatrix::from_rows(&rows);
        let inv = smith_normal_form(&m);
        prop_assert_eq!(inv.len(), naive_rank(&rows));
        prop_assert!(inv.iter().all(|d| d.is_positive()));
        for w in inv.windows(2) {
            prop_assert!((&w[1] % &w[0]).is_zero());
        }
        if rows.len() == rows[0].len() && inv.len() == rows.len() {
            // product of invariants = |det| for nonsingular square matrices
            let prod: BigInt = inv.iter().product();
            prop_assert_eq!(prod, det(&rows).abs());
        }
    }
}

fn det(rows: &[Vec<i64>]) -> BigInt {
    let n = rows.len();
    if n == 1 {
        return BigInt::from(rows[0][0]);
    }
    (0..n)
        .map(|j| {
            let minor: Vec<Vec<i64>> =
                rows[1..].iter().map(|r| r.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, &x)| x).collect()).collect();
            let sign = if j % 2 == 0 { 1 } else { -1 };
            BigInt::from(sign * rows[0][j]) * det(&minor)
        })
        .sum()
}

/// Elementary pieces of a chain complex: a free class in some degree, or ℤ --k--> ℤ
/// from degree i+1 to i.
#[derive(Clone, Debug)]
enum Piece {
    Free(usize),
    Arrow(usize, i64),
}

fn standard_complex(pieces: &[Piece], top: usize) -> (Vec<usize>, Vec<IntegerMatrix>, GradedModule, GradedModule) {
    let mut dims = vec![0usize; top + 1];
    let mut slots = Vec::new();
    for p in pieces {
        match *p {
            Piece::Free(d) => {
                slots.push((d, dims[d]));
                dims[d] += 1;
            }
            Piece::Arrow(d, _) => {
                slots.push((d, dims[d]));
                dims[d] += 1;
                slots.push((d + 1, dims[d + 1]));
                dims[d + 1] += 1;
            }
        }
    }
    let mut bounds: Vec<IntegerMatrix> = (0..top).map(|i| IntegerMatrix::zeros(dims[i], dims[i + 1])).collect();
    let mut integral = GradedModule::zero(CoefficientMode::Integral);
    let mut rational = GradedModule::zero(CoefficientMode::Rational);
    let mut slot = 0;
    for p in pieces {
        match *p {
            Piece::Free(d) => {
                integral.add_entry(d as i64, &Entry::free(1));
                rational.add_entry(d as i64, &Entry::free(1));
                slot += 1;
            }
            Piece::Arrow(d, k) => {
                let (lo, hi) = (slots[slot].1, slots[slot + 1].1);
                bounds[d].set(lo, hi, BigInt::from(k));
                let mut e = Entry::default();
                if k == 0 {
                    e.free_rank = 1;
                    integral.add_entry(d as i64 + 1, &Entry::free(1));
                    rational.add_entry(d as i64 + 1, &Entry::free(1));
                    rational.add_entry(d as i64, &Entry::free(1));
                } else {
                    e.add_cyclic(&[BigInt::from(k.abs())]).unwrap();
                }
                integral.add_entry(d as i64, &e);
                slot += 2;
            }
        }
    }
    (dims, bounds, integral, rational)
}

fn piece_strategy(top: usize) -> impl Strategy<Value = Piece> {
    prop_oneof![
        (0..=top).prop_map(Piece::Free),
        (0..top, prop_oneof![Just(0i64), Just(1), Just(-1), Just(2), Just(3), Just(4), Just(6)])
            .prop_map(|(d, k)| Piece::Arrow(d, k)),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn homology_survives_change_of_basis(
        pieces in prop::collection::vec(piece_strategy(3), 1..7),
        ops in prop::collection::vec((0usize..4, 0usize..8, 0usize..8, -3i64..4), 0..20),
    ) {
        let (dims, mut bounds, integral, rational) = standard_complex(&pieces, 3);
        // unimodular change of basis in C_d, applied to both boundaries touching it
        for (d, a, b, c) in ops {
            if dims[d] < 2 { continue; }
            let (a, b) = (a % dims[d], b % dims[d]);
            if a == b { continue; }
            if d < bounds.len() {
                // rows of ∂_{d+1} index C_d
                let m = &mut bounds[d];
                for j in 0..m.cols() {
                    let v = m.get(a, j) + BigInt::from(c) * m.get(b, j);
                    m.set(a, j, v);
                }
            }
            if d > 0 {
                // columns of ∂_d index C_d: inverse operation
                let m = &mut bounds[d - 1];
                for i in 0..m.rows() {
                    let v = m.get(i, b) - BigInt::from(c) * m.get(i, a);
                    m.set(i, b, v);
                }
            }
        }
        let hz = homology_of_complex(&bounds, CoefficientMode::Integral).unwrap();
        prop_assert_eq!(&hz, &integral);
        let hq = homology_of_complex(&bounds, CoefficientMode::Rational).unwrap();
        prop_assert_eq!(&hq, &rational);
        let chain_chi: i64 = dims.iter().enumerate().map(|(i, &n)| if i % 2 == 0 { n as i64 } else { -(n as i64) }).sum();
        prop_assert_eq!(hq.euler_characteristic(), chain_chi);
    }

    #[test]
    fn division_round_trip(c in prop::collection::vec(0u64..20, 0..12)) {
        let p = PoincarePolynomial::new(c);
        let q = p.mul(&PoincarePolynomial::one_plus_t_pow(1));
        prop_assert_eq!(q.divide_by_one_plus_t().unwrap(), p);
    }

    #[test]
    fn factorization_re_expands(gens in prop::collection::vec(1usize..9, 0..5)) {
        let mut gens = gens;
        gens.sort_unstable();
        let p = PoincarePolynomial::exterior(&gens);
        let f = factor_odd_generators(&p).unwrap();
        prop_assert_eq!(PoincarePolynomial::exterior(&f), p);
    }

    #[test]
    fn duality_is_an_involution(ranks in prop::collection::btree_map(0i64..12, 1u64..4, 0..6)) {
        let m = GradedModule::from_ranks(ranks);
        let back = reduced_dual(&reduced_dual(&m, 6).unwrap(), 6).unwrap();
        prop_assert_eq!(back, m);
    }

    #[test]
    fn open_cone_shift(ranks in prop::collection::btree_map(-2i64..12, 1u64..4, 0..6)) {
        let m = GradedModule::from_ranks(ranks);
        let c = links::bm_open_cone(&m);
        prop_assert_eq!(c.total_rank(), m.total_rank());
        for (d, r) in m.ranks() {
            prop_assert_eq!(c.rank(d + 1), r);
        }
    }
}

fn catalog() -> Vec<(SpaceExpr, Twist)> {
    let mut v = vec![(SpaceExpr::Point, Twist::Trivial)];
    for n in 0..4 {
        v.push((SpaceExpr::affine(n), Twist::Trivial));
        v.push((SpaceExpr::proj(n), Twist::Trivial));
    }
    for (k, m) in [(1, 2), (2, 4), (2, 5), (3, 5)] {
        v.push((SpaceExpr::grassmann(k, m), Twist::Trivial));
    }
    for n in 1..4 {
        for k in 1..=n + 1 {
            v.push((SpaceExpr::config(SpaceExpr::proj(n), k), Twist::Sign));
        }
        v.push((SpaceExpr::config(SpaceExpr::affine(n), 2), Twist::Sign));
        v.push((SpaceExpr::config(SpaceExpr::proj(n), 2), Twist::Trivial));
    }
    for (n, k) in [(2, 3), (2, 4), (3, 3), (3, 4)] {
        v.push((SpaceExpr::generic_config(n, k), Twist::Sign));
    }
    v.push((SpaceExpr::Pgl { m: 3 }, Twist::Trivial));
    v
}

#[test]
fn schubert_cells_match_gaussian_binomials() {
    for n in 0..4u32 {
        for k in 1..=n + 1 {
            let x = SpaceExpr::config(SpaceExpr::proj(n), k);
            let h = homology(&x, Flavor::BorelMoore, Twist::Sign, CoefficientMode::Rational).unwrap();
            let g = grassmann_poincare(k, n + 1).unwrap();
            let shift = (k * (k - 1)) as i64;
            let expected = GradedModule::from_ranks(
                g.coefficients().iter().enumerate().map(|(i, &c)| (i as i64 + shift, c)),
            );
            assert_eq!(h, expected, "B(CP^{n},{k})");
            assert_eq!(spaces::schubert_cells(n, k).len() as u64, h.total_rank());
        }
    }
}

#[test]
fn kunneth_and_euler_over_products() {
    let cat = catalog();
    for (x, tx) in &cat {
        let hx = homology(x, Flavor::BorelMoore, *tx, CoefficientMode::Rational).unwrap();
        assert_eq!(spaces::euler_cs(x).unwrap(), hx.euler_characteristic(), "{x}");
        for (y, ty) in &cat {
            let twist = if *tx == Twist::Sign || *ty == Twist::Sign { Twist::Sign } else { Twist::Trivial };
            // the product twists every configuration factor alike
            if (x.is_configuration() && *tx != twist) || (y.is_configuration() && *ty != twist) {
                continue;
            }
            let hy = homology(y, Flavor::BorelMoore, *ty, CoefficientMode::Rational).unwrap();
            let xy = SpaceExpr::product([x.clone(), y.clone()]);
            let h = homology(&xy, Flavor::BorelMoore, twist, CoefficientMode::Rational).unwrap();
            assert_eq!(h, hx.tensor(&hy), "{xy}");
            assert_eq!(spaces::euler_cs(&xy).unwrap(), spaces::euler_cs(x).unwrap() * spaces::euler_cs(y).unwrap());
        }
    }
}

#[test]
fn affine_space_flavors() {
    for n in 0..5 {
        let a = SpaceExpr::affine(n);
        let bm = homology(&a, Flavor::BorelMoore, Twist::Trivial, CoefficientMode::Rational).unwrap();
        assert_eq!(bm, GradedModule::from_ranks([(2 * n as i64, 1)]));
        let ord = homology(&a, Flavor::Ordinary, Twist::Trivial, CoefficientMode::Rational).unwrap();
        assert_eq!(ord, GradedModule::from_ranks([(0, 1)]));
    }
}

#[test]
fn compact_spaces_have_equal_flavors() {
    for x in [SpaceExpr::proj(3), SpaceExpr::grassmann(2, 4), SpaceExpr::Point] {
        let a = homology(&x, Flavor::BorelMoore, Twist::Trivial, CoefficientMode::Integral).unwrap();
        let b = homology(&x, Flavor::Ordinary, Twist::Trivial, CoefficientMode::Integral).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.euler_characteristic(), spaces::euler_cs(&x).unwrap());
    }
}

#[test]
fn self_joins_are_acyclic() {
    for k in 2..=6 {
        assert!(self_join_page(k).unwrap().reduced.is_zero(), "k = {k}");
        let e = LinkExpr::self_join(SpaceExpr::proj(1), k);
        assert_eq!(links::euler_cs(&e).unwrap(), 1);
    }
    assert_eq!(self_join_page(1).unwrap().reduced.total_rank(), 1);
}

#[test]
fn double_suspension() {
    let inners = [
        LinkExpr::space(SpaceExpr::proj(2)),
        LinkExpr::known(GradedModule::from_ranks([(0, 2), (3, 1)]), "test module"),
        LinkExpr::self_join(SpaceExpr::proj(1), 1),
    ];
    for e in inners {
        let h = eval_link(&e).unwrap();
        let s1 = eval_link(&LinkExpr::susp(e.clone())).unwrap();
        let s2 = eval_link(&LinkExpr::susp(LinkExpr::susp(e))).unwrap();
        assert_eq!(s2, h.shift(2));
        assert_eq!(s1.rank(0), 0);
    }
}

fn collect_links(e: &LinkExpr, out: &mut Vec<LinkExpr>) {
    out.push(e.clone());
    match e {
        LinkExpr::Join { left, right } => {
            collect_links(left, out);
            collect_links(right, out);
        }
        LinkExpr::Cone { inner } | LinkExpr::Susp { inner } => collect_links(inner, out),
        LinkExpr::MvUnion { pieces, intersections } => {
            pieces.iter().for_each(|p| collect_links(p, out));
            intersections.iter().for_each(|i| collect_links(&i.link, out));
        }
        LinkExpr::StratifiedLink { strata } => {
            for s in strata {
                if let LinkFiber::OpenCone { link } | LinkFiber::Closed { link } = &s.fiber {
                    collect_links(link, out);
                }
            }
        }
        _ => {}
    }
}

#[test]
fn euler_characteristic_matches_for_every_catalog_link() {
    let mut all = Vec::new();
    for case in CASE_IDS {
        for s in builtin_spec(case).unwrap().strata {
            match s.fiber {
                StratumFiber::OpenCone { link } | StratumFiber::FinalColumn { link: Some(link) } => {
                    collect_links(&link, &mut all)
                }
                _ => {}
            }
        }
    }
    assert!(all.len() > 40);
    for e in &all {
        let h = eval_link(e).unwrap();
        assert_eq!(links::euler_cs(e).unwrap(), 1 + h.euler_characteristic(), "{e:?}");
    }
}
