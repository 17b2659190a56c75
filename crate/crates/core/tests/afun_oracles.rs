//! a-function, Δ and γ against independent computations.

use std::sync::Arc;

use hecke_cells::afun::{a_ball, a_ball_all, delta_n, distinguished_ball, gamma_coeff, ASource, PChecker};
use hecke_cells::cells::Cells;
use hecke_cells::hecke::{CProducts, HeckeAlgebra, KLTable};
use hecke_cells::{Bond, CoxeterSystem, ElemId, Int, WeightFunction};

fn table(m: (u32, u32, u32), l: [u32; 3], radius: usize) -> KLTable {
    let sys = CoxeterSystem::triple(m.0, m.1, m.2, radius).unwrap();
    KLTable::for_system(sys, WeightFunction::new(l.to_vec()).unwrap()).unwrap()
}

/// Permutation of {0,1,2,3} for a word in r = (01), s = (12), t = (23).
fn permutation(word: &[u8]) -> [usize; 4] {
    let mut p = [0, 1, 2, 3];
    for c in word {
        let i = match c {
            b'r' => 0,
            b's' => 1,
            _ => 2,
        };
        p.swap(i, i + 1);
    }
    p
}

/// Shape of the Robinson–Schensted insertion tableau.
fn rs_shape(seq: &[usize]) -> Vec<usize> {
    let mut rows: Vec<Vec<usize>> = Vec::new();
    for &v in seq {
        let mut v = v;
        let mut placed = false;
        for row in rows.iter_mut() {
            match row.iter().position(|&x| x > v) {
                Some(i) => v = std::mem::replace(&mut row[i], v),
                None => {
                    row.push(v);
                    placed = true;
                    break;
                }
            }
        }
        if !placed {
            rows.push(vec![v]);
        }
    }
    rows.iter().map(|r| r.len()).collect()
}

#[test]
fn symmetric_group_a_values_follow_shapes() {
    // equal parameters on S_4: a(w) = Σ (i−1) λ_i for the RS shape λ of w
    let t = table((2, 3, 3), [1, 1, 1], 6);
    let cp = CProducts::new(&t);
    let ASource::Exact(a) = ASource::exact(&cp).unwrap() else { unreachable!() };
    assert_eq!(a.len(), 24);
    for (w, &value) in a.iter().enumerate() {
        let shape = rs_shape(&permutation(t.system().element(w as ElemId).word()));
        let n: usize = shape.iter().enumerate().map(|(i, l)| i * l).sum();
        assert_eq!(value, n as u64, "{}", t.system().element(w as ElemId));
    }
    let mut values = a.clone();
    values.sort_unstable();
    values.dedup();
    assert_eq!(values, vec![0, 1, 2, 3, 6]);
    let w0 = t.system().parse_id("rstrsr").unwrap();
    assert_eq!(a_ball(&cp, w0, 6).unwrap().0, 6);
}

#[test]
fn small_values() {
    let t = table((2, 4, 6), [3, 1, 2], 8);
    let cp = CProducts::new(&t);
    let sys = t.system();
    assert_eq!(a_ball(&cp, 0, 3).unwrap(), (0, (0, 0)));
    for s in 0..3 {
        let g = sys.right_mul(0, s).unwrap();
        assert_eq!(a_ball(&cp, g, 1).unwrap(), (t.algebra().weights().of(s) as u64, (g, g)));
        assert_eq!(delta_n(&t, g).unwrap(), (t.algebra().weights().of(s) as u64, Int::ONE));
        assert_eq!(gamma_coeff(&t, g, g, g, t.algebra().weights().of(s) as u64).unwrap(), Int::ONE);
        assert_eq!(gamma_coeff(&t, g, g, 0, 0).unwrap(), Int::ZERO);
    }
    assert_eq!(delta_n(&t, 0).unwrap(), (0, Int::ONE));
    for y in sys.ball_ids(3).unwrap() {
        for z in sys.ball_ids(3).unwrap() {
            let expected = if z == sys.inverse_id(y) { Int::ONE } else { Int::ZERO };
            assert_eq!(gamma_coeff(&t, 0, y, z, 0).unwrap(), expected);
        }
    }
    let sys3 = CoxeterSystem::dihedral("rs", Bond::Finite(3), 3).unwrap();
    let t3 = KLTable::for_system(sys3, WeightFunction::uniform(2)).unwrap();
    assert_eq!(delta_n(&t3, t3.system().parse_id("rsr").unwrap()).unwrap(), (3, Int::ONE));
}

#[test]
fn a_ball_is_monotone_and_inverse_symmetric() {
    let t = table((2, 4, 6), [2, 1, 1], 10);
    let cp = CProducts::new(&t);
    let sys = t.system();
    let mut prev = a_ball_all(&cp, 1).unwrap();
    for r in 2..=5 {
        let cur = a_ball_all(&cp, r).unwrap();
        for z in sys.ball_ids(2 * r - 2).unwrap() {
            if let Some(p) = prev[z as usize] {
                assert!(cur[z as usize].unwrap().degree >= p.degree);
            }
        }
        for z in sys.ball_ids(r).unwrap() {
            assert_eq!(cur[z as usize].unwrap().degree, cur[sys.inverse_id(z) as usize].unwrap().degree);
        }
        prev = cur;
    }
}

#[test]
fn distinguished_elements_in_example_system() {
    let sys = Arc::new(CoxeterSystem::triple(2, 4, 5, 10).unwrap());
    let w = WeightFunction::new(vec![5, 1, 1]).unwrap();
    let t = KLTable::new(Arc::new(HeckeAlgebra::new(sys.clone(), w.clone()).unwrap()));
    let cells = Cells::new(sys.clone(), w).unwrap();
    let a = ASource::predicted(&cells);
    let ds = distinguished_ball(&t, 5, &a).unwrap();
    for word in ["e", "r", "s", "t", "rt", "rsr", "ststs"] {
        assert!(ds.contains(&sys.parse_id(word).unwrap()), "{word}");
    }
    // Δ ≥ a_pred throughout
    for z in sys.ball_ids(8).unwrap() {
        assert!(delta_n(&t, z).unwrap().0 >= cells.a_pred(z).unwrap());
    }
}

#[test]
fn statements_hold_on_small_ball() {
    let sys = Arc::new(CoxeterSystem::triple(2, 4, 6, 10).unwrap());
    let w = WeightFunction::new(vec![14, 1, 8]).unwrap();
    let t = KLTable::new(Arc::new(HeckeAlgebra::new(sys.clone(), w.clone()).unwrap()));
    let cp = CProducts::new(&t);
    let cells = Cells::new(sys, w).unwrap();
    let checker = PChecker::new(&cp, 4, 8, ASource::predicted(&cells)).unwrap();
    for k in 1..=15 {
        let report = checker.check(k).unwrap();
        assert!(report.passed(), "{report:?}");
    }
}
