//! Independent checks of T-basis arithmetic, the bar involution and the KL
//! basis.

use std::sync::Arc;

use hecke_cells::hecke::{CProducts, HeckeAlgebra, HeckeElt, KLTable};
use hecke_cells::{CoxeterSystem, ElemId, LaurentPoly, WeightFunction};
use proptest::prelude::*;

fn table(m: (u32, u32, u32), l: [u32; 3], radius: usize) -> KLTable {
    let sys = CoxeterSystem::triple(m.0, m.1, m.2, radius).unwrap();
    KLTable::for_system(sys, WeightFunction::new(l.to_vec()).unwrap()).unwrap()
}

const FIXTURES: [((u32, u32, u32), [u32; 3]); 5] = [
    ((2, 4, 5), [5, 1, 1]),
    ((2, 4, 6), [2, 1, 1]),
    ((2, 4, 6), [14, 1, 8]),
    ((2, 7, 3), [1, 1, 1]),
    ((2, 0, 4), [1, 3, 2]),
];

/// KL basis by the classical construction: `C_w = C_s C_{w'} − Σ μ_z C_z`,
/// where the `μ_z` are the bar-invariant parts of the coefficients, peeled
/// from the top. Uses only T-basis multiplication by generators.
fn kl_by_peeling(alg: &HeckeAlgebra, radius: usize) -> Vec<HeckeElt> {
    let sys = alg.system();
    let mut cs: Vec<HeckeElt> = Vec::new();
    for w in sys.ball_ids(radius).unwrap() {
        if w == 0 {
            cs.push(HeckeElt::t(0));
            continue;
        }
        let s = sys.left_descents(w).min().unwrap();
        let w1 = sys.left_mul(w, s).unwrap();
        let prev = &cs[w1 as usize];
        let mut h = alg.mul_gen_left(s, prev).unwrap();
        h.add_scaled(prev, &LaurentPoly::q(-(alg.weights().of(s) as i32)));
        // peel every z < w whose coefficient is not in q^{-1}Z[q^{-1}]
        for z in (0..w).rev() {
            let c = h.coeff(z);
            if c.is_zero() || c.degree() < 0 {
                continue;
            }
            let mut mu = LaurentPoly::zero();
            for (e, k) in c.terms() {
                if *e >= 0 {
                    mu = &mu + &LaurentPoly::monomial(*e, k.clone());
                    if *e > 0 {
                        mu = &mu + &LaurentPoly::monomial(-*e, k.clone());
                    }
                }
            }
            h.add_scaled(&cs[z as usize], &-&mu);
        }
        cs.push(h);
    }
    cs
}

#[test]
fn kl_columns_match_peeling_construction() {
    for (m, l) in FIXTURES {
        let t = table(m, l, 9);
        let oracle = kl_by_peeling(t.algebra(), 9);
        for (w, c) in oracle.iter().enumerate() {
            assert_eq!(&t.c_basis(w as ElemId).unwrap(), c, "{m:?} {l:?} w={}", t.system().element(w as ElemId));
        }
    }
}

#[test]
fn bar_expand_is_the_reversed_product_of_inverses() {
    for (m, l) in FIXTURES {
        let t = table(m, l, 7);
        let alg = t.algebra();
        let sys = alg.system();
        for w in sys.ball_ids(7).unwrap() {
            // bar(T_w) = (T_{s1} − ξ_{s1}) ⋯ (T_{sk} − ξ_{sk}) for w = s1⋯sk
            let mut h = HeckeElt::t(0);
            for s in sys.letters(w) {
                let mut inv = HeckeElt::t(sys.right_mul(0, s).unwrap());
                inv.add_term(0, &-alg.xi(s));
                h = alg.t_mult(&h, &inv).unwrap();
            }
            let b = alg.bar_expand(w).unwrap();
            assert_eq!(b, h);
            assert_eq!(b.coeff(w), LaurentPoly::one());
            assert!(b.support().all(|x| sys.bruhat_leq_id(x, w)));
            // bar(T_w) T_{w^{-1}} = 1
            let unit = alg.t_mult(&b, &HeckeElt::t(sys.inverse_id(w))).unwrap();
            assert_eq!(unit, HeckeElt::t(0));
        }
    }
}

#[test]
fn r_matrix_is_an_involution() {
    let t = table((2, 4, 6), [3, 1, 2], 7);
    let alg = t.algebra();
    let sys = alg.system();
    for z in sys.ball_ids(7).unwrap() {
        // Σ_y r_{x,y} bar(r_{y,z}) = δ_{x,z}
        let row_z = alg.bar_row(z).unwrap();
        let mut total = HeckeElt::zero();
        for (y, r_yz) in row_z.interval.iter().zip(&row_z.r) {
            total.add_scaled(&alg.bar_expand(*y).unwrap(), &r_yz.bar());
        }
        assert_eq!(total, HeckeElt::t(z));
    }
}

#[test]
fn kl_basis_is_bar_invariant_with_negative_degrees() {
    for (m, l) in FIXTURES {
        let t = table(m, l, 8);
        let alg = t.algebra();
        for w in t.system().ball_ids(8).unwrap() {
            let c = t.c_basis(w).unwrap();
            assert_eq!(alg.bar(&c).unwrap(), c, "{m:?} {l:?}");
            for (&y, p) in &c {
                assert!(t.system().bruhat_leq_id(y, w));
                if y != w {
                    assert!(p.degree() < 0);
                }
            }
        }
    }
}

#[test]
fn spot_values() {
    let t = table((2, 4, 5), [1, 1, 1], 4);
    let sys = t.system();
    let id = |w: &str| sys.parse_id(w).unwrap();
    assert_eq!(t.kl_poly(0, id("rsr")).unwrap(), LaurentPoly::q(-3));
    // m_rs = 3 dihedral with equal parameters: every p_{y,w} is q^{L(y)−L(w)}
    let sys = CoxeterSystem::dihedral("rs", hecke_cells::Bond::Finite(3), 3).unwrap();
    let t = KLTable::for_system(sys, WeightFunction::uniform(2)).unwrap();
    for w in t.system().ball_ids(3).unwrap() {
        for y in t.system().ball_ids(3).unwrap() {
            let expected = if t.system().bruhat_leq_id(y, w) {
                LaurentPoly::q(t.system().length_of(y) as i32 - t.system().length_of(w) as i32)
            } else {
                LaurentPoly::zero()
            };
            assert_eq!(t.kl_poly(y, w).unwrap(), expected);
        }
    }
}

#[test]
fn three_factor_product_in_large_rs_system() {
    // T_t T_rs T_ts = ξ_t T_rsts + T_rst when m_st = 3, m_rs ≥ 7
    let t = table((2, 7, 3), [1, 1, 1], 8);
    let alg = t.algebra();
    let sys = alg.system();
    let id = |w: &str| sys.parse_id(w).unwrap();
    let p = alg.t_mult(&alg.t_product(id("t"), id("rs")).unwrap(), &HeckeElt::t(id("ts"))).unwrap();
    let expected = HeckeElt::from_pairs([(id("rsts"), alg.xi(2).clone()), (id("rst"), LaurentPoly::one())]);
    assert_eq!(p, expected);
}

#[test]
fn product_routes_agree() {
    for (m, l) in FIXTURES {
        let t = table(m, l, 10);
        let cp = CProducts::new(&t);
        let end = t.system().ball_ids(4).unwrap().end;
        for y in 0..end {
            let via_c = cp.left_products(y, end).unwrap();
            for x in 0..end {
                let via_t = t.c_product(x, y).unwrap();
                assert_eq!(via_c[x as usize], via_t, "{m:?} {l:?} x={x} y={y}");
            }
        }
    }
}

#[test]
fn structure_constants_are_bar_invariant_and_supported_low() {
    let t = table((2, 4, 6), [2, 1, 1], 10);
    let sys = t.system();
    let cp = CProducts::new(&t);
    let end = sys.ball_ids(5).unwrap().end;
    for y in 0..end {
        for (x, prod) in cp.left_products(y, end).unwrap().iter().enumerate() {
            for (&z, h) in prod {
                assert!(h.is_bar_invariant());
                assert!(sys.length_of(z) <= sys.length_of(x as ElemId) + sys.length_of(y));
            }
        }
    }
}

#[test]
fn warm_cache_needs_no_solves() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("kl.jsonl");
    let t = table((2, 4, 5), [5, 1, 1], 8);
    for w in t.system().ball_ids(8).unwrap() {
        t.column(w).unwrap();
    }
    t.save(&path).unwrap();
    let warm = table((2, 4, 5), [5, 1, 1], 8);
    warm.load(&path).unwrap();
    for w in warm.system().ball_ids(8).unwrap() {
        assert_eq!(warm.column(w).unwrap(), t.column(w).unwrap());
    }
    assert_eq!(warm.solve_count(), 0);
}

fn small_elt(max: ElemId) -> impl Strategy<Value = HeckeElt> {
    prop::collection::vec((0..max, -3i32..=3, -2i64..=2), 1..4).prop_map(|v| {
        HeckeElt::from_pairs(v.into_iter().map(|(w, e, c)| (w, LaurentPoly::monomial(e, c))))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn t_mult_is_associative_with_unit(a in small_elt(40), b in small_elt(40), c in small_elt(40)) {
        let sys = CoxeterSystem::triple(2, 4, 6, 20).unwrap();
        let alg = HeckeAlgebra::new(Arc::new(sys), WeightFunction::new(vec![3, 1, 2]).unwrap()).unwrap();
        let ab_c = alg.t_mult(&alg.t_mult(&a, &b).unwrap(), &c).unwrap();
        let a_bc = alg.t_mult(&a, &alg.t_mult(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(ab_c, a_bc);
        prop_assert_eq!(alg.t_mult(&HeckeElt::t(0), &a).unwrap(), a.clone());
        prop_assert_eq!(alg.t_mult(&a, &HeckeElt::t(0)).unwrap(), a);
    }
}
