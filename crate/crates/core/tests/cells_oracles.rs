//! Distinguished elements, predicted a-values, the decomposition `b·d·y` and
//! cell graphs, checked against brute-force definitions.

use std::collections::BTreeMap;
use std::sync::Arc;

use hecke_cells::cells::{cell_graph, d_set, Cells, DSym, Flavor, Verdict};
use hecke_cells::hecke::{CProducts, KLTable};
use hecke_cells::{CoxeterSystem, ElemId, Error, WeightFunction};

fn cells(m: (u32, u32, u32), l: [u32; 3], radius: usize) -> Cells {
    let sys = CoxeterSystem::triple(m.0, m.1, m.2, radius).unwrap();
    Cells::new(Arc::new(sys), WeightFunction::new(l.to_vec()).unwrap()).unwrap()
}

const FIXTURES: [((u32, u32, u32), [u32; 3]); 5] = [
    ((2, 4, 5), [5, 1, 1]),
    ((2, 4, 6), [2, 1, 1]),
    ((2, 4, 6), [14, 1, 8]),
    ((2, 7, 3), [1, 1, 1]),
    ((2, 0, 4), [1, 3, 2]),
];

fn levels(c: &Cells) -> BTreeMap<u64, Vec<String>> {
    c.d_set()
        .levels()
        .into_iter()
        .map(|(n, ds)| {
            let mut v: Vec<String> = ds.iter().map(|&d| c.system().element(d).to_string()).collect();
            v.sort();
            (n, v)
        })
        .collect()
}

fn expect(pairs: &[(u64, &[&str])]) -> BTreeMap<u64, Vec<String>> {
    pairs
        .iter()
        .map(|(n, ds)| {
            let mut v: Vec<String> = ds.iter().map(|s| s.to_string()).collect();
            v.sort();
            (*n, v)
        })
        .collect()
}

#[test]
fn d_levels_of_fixtures() {
    let c = cells((2, 4, 5), [5, 1, 1], 8);
    assert_eq!(
        levels(&c),
        expect(&[(0, &["e"]), (1, &["s", "t"]), (5, &["r", "ststs"]), (6, &["rt"]), (9, &["rsr"]), (12, &["rsrs"])])
    );
    let c = cells((2, 4, 6), [2, 1, 1], 8);
    assert_eq!(
        levels(&c),
        expect(&[(0, &["e"]), (1, &["s", "t"]), (2, &["r"]), (3, &["rt", "rsr"]), (6, &["rsrs", "ststst"])])
    );
    let c = cells((2, 4, 6), [14, 1, 8], 8);
    assert_eq!(
        levels(&c),
        expect(&[
            (0, &["e"]),
            (1, &["s"]),
            (8, &["t"]),
            (14, &["r"]),
            (22, &["rt", "tstst"]),
            (27, &["rsr", "ststst"]),
            (30, &["rsrs"]),
        ])
    );
    let c = cells((2, 7, 3), [1, 1, 1], 8);
    assert_eq!(
        levels(&c),
        expect(&[(0, &["e"]), (1, &["r", "s", "t"]), (2, &["rt"]), (3, &["sts"]), (7, &["rsrsrsr"])])
    );
}

#[test]
fn finite_rank_three_is_rejected() {
    let sys = CoxeterSystem::triple(2, 3, 4, 12).unwrap();
    assert!(matches!(d_set(&sys, &WeightFunction::new(vec![1, 1, 2]).unwrap()), Err(Error::NotDimensionTwo)));
}

#[test]
fn a_pred_matches_factor_enumeration() {
    for (m, l) in FIXTURES {
        let c = cells(m, l, 10);
        let sys = c.system();
        for w in sys.ball_ids(10).unwrap() {
            let brute = c
                .d_set()
                .entries
                .iter()
                .filter(|e| sys.contains_factor_id(w, e.id))
                .map(|e| e.aprime)
                .max()
                .unwrap();
            assert_eq!(c.a_pred(w).unwrap(), brute);
            assert_eq!(c.a_pred(sys.inverse_id(w)).unwrap(), brute);
        }
        // no distinguished element contains one with larger a′
        for e in &c.d_set().entries {
            assert_eq!(c.a_pred(e.id).unwrap(), e.aprime, "{m:?} {l:?} {}", e.name);
        }
    }
}

#[test]
fn companion_sets_follow_definitions() {
    for (m, l) in FIXTURES {
        let c = cells(m, l, 12);
        let sys = c.system();
        for e in &c.d_set().entries {
            let n = e.aprime;
            let u = c.u_set(e.id, 5).unwrap();
            assert_eq!(u[0], 0);
            for y in sys.ball_ids(5).unwrap() {
                let dy = sys.mul_id(e.id, y).unwrap();
                let reduced = sys.length_of(dy) == sys.length_of(e.id) + sys.length_of(y);
                let expected = reduced && c.a_pred(dy).unwrap() == n;
                assert_eq!(u.binary_search(&y).is_ok(), expected);
            }
            // every b ∈ B_d has b⁻¹ ∈ U_d
            for b in c.b_set(e.id, 5).unwrap() {
                assert!(u.binary_search(&sys.inverse_id(b)).is_ok());
            }
        }
    }
}

#[test]
fn decomposition_is_total_and_unique_on_ball_8() {
    for (m, l) in FIXTURES {
        let c = cells(m, l, 12);
        let sys = c.system();
        for w in sys.ball_ids(8).unwrap() {
            let dec = c.decompose(w).unwrap_or_else(|e| panic!("{m:?} {l:?}: {e}"));
            let lengths = sys.length_of(dec.b) + sys.length_of(dec.d) + sys.length_of(dec.y);
            assert_eq!(lengths, sys.length_of(w));
            assert_eq!(sys.mul_id(sys.mul_id(dec.b, dec.d).unwrap(), dec.y).unwrap(), w);
            assert_eq!(c.aprime(dec.d).unwrap(), c.a_pred(w).unwrap());
        }
    }
}

#[test]
fn lengths_add_for_companions() {
    for (m, l) in FIXTURES {
        let c = cells(m, l, 16);
        let sys = c.system();
        for e in &c.d_set().entries {
            let report = c.length_additivity_check(e.id, 4).unwrap();
            assert!(report.passed(), "{m:?} {l:?} {}: {:?}", e.name, report.failures);
            // for l(d) ≥ 2 the identity holds on all of U_d⁻¹ × U_d
            if sys.length_of(e.id) >= 2 {
                let u = c.u_set(e.id, 4).unwrap();
                for &x in &u {
                    let xd = sys.mul_id(sys.inverse_id(x), e.id).unwrap();
                    for &y in &u {
                        let len = sys.length_of(sys.mul_id(xd, y).unwrap());
                        assert_eq!(len, sys.length_of(x) + sys.length_of(e.id) + sys.length_of(y));
                    }
                }
            }
        }
    }
}

#[test]
fn identity_has_trivial_companions() {
    let c = cells((2, 4, 5), [5, 1, 1], 10);
    assert_eq!(c.u_set(0, 6).unwrap(), vec![0]);
    assert_eq!(c.b_set(0, 6).unwrap(), vec![0]);
    assert_eq!(c.length_additivity_check(0, 3).unwrap().pairs_checked, 1);
}

#[test]
fn classifier_examples() {
    let c = cells((2, 4, 6), [1, 1, 1], 8);
    let id = |w: &str| c.system().parse_id(w).unwrap();
    // w_rs and t need a′ equal: a′(w_rs) = 4 with L ≡ 1 never meets L(t) = 1
    assert!(matches!(c.two_sided_classifier(id("rsrs"), id("t")), Err(Error::UnequalAValues { .. })));
    let c = cells((2, 4, 6), [1, 1, 4], 8);
    let id = |w: &str| c.system().parse_id(w).unwrap();
    assert_eq!(c.symbol(id("rsrs")).unwrap(), DSym::Wrs);
    assert_eq!(c.two_sided_classifier(id("rsrs"), id("t")).unwrap(), Verdict::Different { case: 1, mirrored: false });
    let c = cells((2, 4, 6), [1, 2, 1], 8);
    let id = |w: &str| c.system().parse_id(w).unwrap();
    assert_eq!(c.two_sided_classifier(id("r"), id("t")).unwrap(), Verdict::Different { case: 2, mirrored: false });
    // a′(w_rs) = a′(w_st) = 6; they overlap in s
    let c = cells((2, 4, 6), [2, 1, 1], 12);
    let id = |w: &str| c.system().parse_id(w).unwrap();
    assert_eq!(c.two_sided_classifier(id("rsrs"), id("ststst")).unwrap(), Verdict::Same);
    let w = c.connect_witness(id("rsrs"), id("ststst"), 12).unwrap().unwrap();
    assert_eq!(c.system().element(w).to_string(), "rsrststst");
}

#[test]
fn singleton_cell_in_example_system() {
    let c = cells((2, 4, 5), [5, 1, 1], 12);
    let id = |w: &str| c.system().parse_id(w).unwrap();
    let (wst, r) = (id("ststs"), id("r"));
    assert!(c.b_is_u_inverse(wst, 6).unwrap());
    assert_eq!(c.two_sided_classifier(wst, r).unwrap(), Verdict::Different { case: 1, mirrored: true });
    assert_eq!(c.connect_witness(wst, r, 12).unwrap(), None);
    assert_eq!(c.connect_witness(r, wst, 12).unwrap(), None);
}

#[test]
fn cell_graphs_refine_predictions() {
    let sys = Arc::new(CoxeterSystem::triple(2, 4, 5, 7).unwrap());
    let w = WeightFunction::new(vec![5, 1, 1]).unwrap();
    let table = KLTable::new(Arc::new(hecke_cells::HeckeAlgebra::new(sys.clone(), w.clone()).unwrap()));
    let cp = CProducts::new(&table);
    let c = Cells::new(sys.clone(), w).unwrap();
    let id = |w: &str| sys.parse_id(w).unwrap();
    let right = cell_graph(&cp, 5, Flavor::Right).unwrap();
    assert!(right.same_class(id("s"), id("st")));
    for flavor in [Flavor::Left, Flavor::Right, Flavor::TwoSided] {
        let g = cell_graph(&cp, 5, flavor).unwrap();
        let report = g.compare(&c).unwrap();
        assert!(report.consistent(), "{flavor:?}: {:?}", report.mixed_sccs);
    }
    let two = cell_graph(&cp, 5, Flavor::TwoSided).unwrap();
    let wst = id("ststs");
    let class: Vec<ElemId> = two.sccs[two.scc_of[wst as usize]].clone();
    assert_eq!(class, vec![wst]);
    let zero = cell_graph(&cp, 0, Flavor::TwoSided).unwrap();
    assert_eq!(zero.sccs, vec![vec![0]]);
}
