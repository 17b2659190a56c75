//! Critical values, hyperplanes and triple points against concrete weight
//! functions: every rational point is scaled to integer weights and checked
//! with the distinguished set, the classifier and connecting elements.

use std::collections::BTreeSet;
use std::sync::Arc;

use hecke_cells::cells::{Cells, DSym, Verdict};
use hecke_cells::params::{
    critical_lines_2d, critical_values_1d, d_levels, export_arrangement, symbolic_levels, triple_points, CriticalLocus,
    ExportFormat, Point, Q,
};
use hecke_cells::{Bond, CoxeterSystem, ElemId, WeightFunction};
use num_integer::Integer;

fn r(n: i64, d: i64) -> Q {
    Q::new(n, d)
}

/// `(x, 1, y)` scaled to coprime integers.
fn weights(x: Q, y: Q) -> [u32; 3] {
    let l = x.denom().lcm(y.denom());
    [(x * Q::from(l)).to_integer() as u32, l as u32, (y * Q::from(l)).to_integer() as u32]
}

fn cells(m_rs: u32, m_st: u32, l: [u32; 3], radius: usize) -> Cells {
    let sys = CoxeterSystem::triple(2, m_rs, m_st, radius).unwrap();
    Cells::new(Arc::new(sys), WeightFunction::new(l.to_vec()).unwrap()).unwrap()
}

fn id_of(c: &Cells, d: DSym) -> ElemId {
    c.d_set().entries.iter().map(|e| e.id).find(|&id| c.symbol(id).unwrap() == d).unwrap()
}

/// Pairs of `D` with equal `a′`, with the classifier's verdict.
fn coincidences(c: &Cells) -> Vec<(ElemId, ElemId, Verdict)> {
    let mut out = Vec::new();
    for ds in c.d_set().levels().values() {
        for (i, &d1) in ds.iter().enumerate() {
            for &d2 in &ds[i + 1..] {
                out.push((d1, d2, c.two_sided_classifier(d1, d2).unwrap()));
            }
        }
    }
    out
}

#[test]
fn one_parameter_examples() {
    assert_eq!(critical_values_1d(2, 5), vec![r(1, 2), r(1, 1), r(3, 2), r(2, 1), r(3, 1), r(4, 1)]);
    assert_eq!(critical_values_1d(4, 3), vec![r(1, 3), r(1, 1), r(4, 3), r(3, 2), r(2, 1)]);
    assert_eq!(critical_values_1d(3, 4), vec![r(1, 3), r(2, 3), r(1, 1), r(3, 2), r(2, 1), r(3, 1)]);
}

#[test]
fn critical_values_match_concrete_weights() {
    for (m, k) in [(2, 5), (4, 3), (3, 4), (2, 6), (3, 5)] {
        let values = critical_values_1d(m, k);
        // candidate values of a/b read off the equations a′(d1) = a′(d2)
        let (mq, kq) = (Q::from(m as i64), Q::from(k as i64));
        let one = Q::from(1);
        let mut candidates = vec![one, (mq - kq) / (mq - one), (mq + kq - one) / mq, (kq - mq) / mq, mq / (mq - one), kq - one];
        if k != 3 {
            candidates.push((mq - one) / mq);
        }
        for v in &values {
            assert!(candidates.contains(v), "({m},{k}) {v}");
        }
        let mut probes: Vec<(Q, bool)> = values.iter().map(|&v| (v, true)).collect();
        let mut edges = vec![Q::from(0)];
        edges.extend(values.iter().copied());
        edges.push(values.last().unwrap() + Q::from(1));
        probes.extend(edges.windows(2).map(|w| ((w[0] + w[1]) / Q::from(2), false)));
        for (x, critical) in probes {
            let l = weights(x, one);
            let c = cells(2 * m, k, [l[0], l[1], l[1]], 20);
            // s and t coincide for every value of a/b
            let moving = |d: ElemId| !matches!(c.symbol(d).unwrap(), DSym::S | DSym::T);
            let same: Vec<_> =
                coincidences(&c).into_iter().filter(|p| p.2.is_same() && (moving(p.0) || moving(p.1))).collect();
            assert_eq!(!same.is_empty(), critical, "({m},{k}) a/b = {x}");
            for (d1, d2, _) in same {
                assert!(c.connect_witness(d1, d2, 20).unwrap().is_some(), "({m},{k}) a/b = {x}");
            }
        }
    }
}

fn find(loci: &[CriticalLocus], d1: DSym, d2: DSym) -> Vec<&CriticalLocus> {
    loci.iter().filter(|l| (l.d1, l.d2) == (d1.min(d2), d1.max(d2))).collect()
}

#[test]
fn hyperplane_examples() {
    let loci = critical_lines_2d(2, 3);
    let rt_wrs = find(&loci, DSym::RT, DSym::Wrs);
    assert!(!rt_wrs.is_empty());
    for l in rt_wrs {
        // c/b = 2 + a/b
        assert_eq!(l.form.normalized(), hecke_cells::params::LinearForm::int(1, 2, -1));
        assert!(l.critical());
    }
    let rt: Vec<_> = find(&loci, DSym::R, DSym::T);
    assert!(rt.iter().any(|l| l.sample.x < Q::from(1) && !l.critical()));
    assert!(rt.iter().any(|l| l.sample.x > Q::from(1) && l.critical()));
    assert!(find(&loci, DSym::T, DSym::Wrs).iter().all(|l| !l.critical()));
}

/// `B_d = U_d⁻¹` for `d1` or `d2`, which puts `B_d·d·U_d` in a two-sided cell
/// of its own.
fn separated(c: &Cells, d1: ElemId, d2: ElemId, r: usize) -> bool {
    [d1, d2].iter().any(|&d| c.b_is_u_inverse(d, r - c.system().length_of(d)).unwrap())
}

fn witness(c: &Cells, d1: ElemId, d2: ElemId, r: usize) -> bool {
    c.connect_witness(d1, d2, r).unwrap().is_some() || c.connect_witness(d2, d1, r).unwrap().is_some()
}

/// Every locus sample is checked at integer weights: equal `a′`, a
/// connecting element for critical loci and none for the others. The loci
/// returned are critical ones where instead `B_d = U_d⁻¹` holds.
fn disagreements(m: u32, n: u32) -> Vec<(DSym, DSym, String)> {
    let mut out = Vec::new();
    for l in critical_lines_2d(m, n) {
        let w = weights(l.sample.x, l.sample.y);
        let c = cells(2 * m, 2 * n, w, 20);
        let (d1, d2) = (id_of(&c, l.d1), id_of(&c, l.d2));
        assert_eq!(c.aprime(d1).unwrap(), c.aprime(d2).unwrap(), "{l:?}");
        assert_eq!(c.two_sided_classifier(d1, d2).unwrap(), l.verdict);
        let found = witness(&c, d1, d2, 20);
        if l.critical() && !found {
            assert!(separated(&c, d1, d2, 20), "({m},{n}) {w:?} {} {}", l.d1, l.d2);
            out.push((l.d1, l.d2, l.chamber.to_string()));
        } else {
            assert_eq!(found, l.critical(), "({m},{n}) {w:?} {} {}", l.d1, l.d2);
        }
    }
    out
}

#[test]
fn hyperplane_samples_agree_with_concrete_weights() {
    let rt_tw = vec![(DSym::RT, DSym::TWst, "a<b c<b".to_string())];
    let rt_rw = vec![(DSym::RT, DSym::RWrs, "a<b c<b".to_string())];
    assert_eq!(disagreements(2, 3), rt_tw);
    assert_eq!(disagreements(2, 4), rt_tw);
    assert_eq!(disagreements(3, 2), rt_rw);
    assert_eq!(disagreements(3, 3), vec![]);
}

/// With `m_rs = 4` and `a < b`, `c < b`, the pair `{rt, tw_st}` is listed as
/// one cell, but below the triple point `(3/5, 4/5)` the element `tw_st`
/// has `U = {e, r}` and forms a cell by itself.
#[test]
fn rt_and_twisted_split_at_the_triple_point() {
    // a + 3c = 3b with b = 10
    for (a, separate) in [(2, true), (3, true), (4, true), (5, true), (7, false), (8, false), (9, false)] {
        let w = [3 * a, 30, 30 - a];
        let c = cells(4, 6, w, 20);
        let (d1, d2) = (id_of(&c, DSym::RT), id_of(&c, DSym::TWst));
        assert_eq!(c.aprime(d1).unwrap(), c.aprime(d2).unwrap());
        assert!(c.two_sided_classifier(d1, d2).unwrap().is_same());
        assert_eq!(separated(&c, d1, d2, 20), separate, "{w:?}");
        assert_eq!(witness(&c, d1, d2, 20), !separate, "{w:?}");
        if separate {
            let u: Vec<String> = c.u_set(d2, 15).unwrap().iter().map(|&y| c.system().element(y).to_string()).collect();
            assert_eq!(u, ["e", "r"]);
        }
    }
}

#[test]
fn triple_point_examples() {
    let pts = triple_points(2, 3);
    let got: Vec<(Point, BTreeSet<DSym>)> = pts.iter().map(|p| (p.point, p.members.iter().copied().collect())).collect();
    let p = |x: Q, y: Q| Point { x, y };
    use DSym::*;
    let expected: Vec<(Point, BTreeSet<DSym>)> = vec![
        (p(r(2, 5), r(6, 5)), [RWrs, RT, SWst].into()),
        (p(r(3, 5), r(4, 5)), [RWrs, RT, TWst].into()),
        (p(r(1, 1), r(1, 1)), [R, S, T].into()),
        (p(r(3, 2), r(1, 2)), [SWrs, RT, TWst].into()),
        (p(r(4, 1), r(3, 1)), [SWrs, RT, SWst].into()),
    ];
    assert_eq!(got, expected);
}

#[test]
fn triple_points_follow_closed_formulas() {
    for (m, n) in [(2, 3), (3, 2), (2, 4), (3, 3), (4, 5)] {
        let (mq, nq) = (Q::from(m as i64), Q::from(n as i64));
        let one = Q::from(1);
        let p = |x: Q, y: Q| Point { x, y };
        let mut expected = vec![
            p(one, one),
            p((mq - one) * (nq - one) / (mq * nq - mq + one), mq * nq / (mq * nq - mq + one)),
            p((mq - one) * nq / (mq * nq - one), mq * (nq - one) / (mq * nq - one)),
            p(mq * (nq - one) / (mq * nq - mq - nq), (mq - one) * nq / (mq * nq - mq - nq)),
            p(mq * nq / (mq * nq - nq + one), (mq - one) * (nq - one) / (mq * nq - nq + one)),
        ];
        expected.sort();
        let got: Vec<Point> = triple_points(m, n).iter().map(|t| t.point).collect();
        assert_eq!(got, expected, "({m},{n})");
        for t in triple_points(m, n) {
            assert_eq!(t.members.len(), 3);
            let w = weights(t.point.x, t.point.y);
            let c = cells(2 * m, 2 * n, w, 2 * (m.max(n) as usize) + 2);
            let level = (t.level * Q::from(w[1] as i64)).to_integer() as u64;
            let syms: BTreeSet<DSym> = c.d_set().level(level).iter().map(|&d| c.symbol(d).unwrap()).collect();
            assert_eq!(syms, t.members.iter().copied().collect(), "({m},{n}) {:?}", t.point);
        }
    }
}

#[test]
fn named_points_of_the_246_picture() {
    let (m_rs, m_st) = (Bond::Finite(4), Bond::Finite(6));
    let widest = |x: i64, y: i64| {
        symbolic_levels(m_rs, m_st, Q::from(x), Q::from(1), Q::from(y)).values().map(|v| v.len()).max().unwrap()
    };
    for t in triple_points(2, 3) {
        let levels = symbolic_levels(m_rs, m_st, t.point.x, Q::from(1), t.point.y);
        assert!(levels.values().any(|v| v.len() >= 3));
    }
    // D(2,1) and F(14,8) carry only pairs
    assert_eq!(widest(2, 1), 2);
    assert_eq!(widest(14, 8), 2);
    let sys = CoxeterSystem::triple(2, 4, 6, 8).unwrap();
    let levels = d_levels(&sys, &WeightFunction::new(vec![2, 1, 1]).unwrap()).unwrap();
    let names: Vec<(u64, Vec<String>)> =
        levels.into_iter().map(|(n, v)| (n, v.iter().map(|e| e.to_string()).collect())).collect();
    let want: Vec<(u64, Vec<String>)> = [
        (0, vec!["e"]),
        (1, vec!["s", "t"]),
        (2, vec!["r"]),
        (3, vec!["rt", "rsr"]),
        (6, vec!["rsrs", "ststst"]),
    ]
    .into_iter()
    .map(|(n, v)| (n, v.into_iter().map(String::from).collect()))
    .collect();
    assert_eq!(names, want);
}

#[test]
fn exports() {
    let dir = tempfile::tempdir().unwrap();
    let loci = critical_lines_2d(2, 3);
    let svg = dir.path().join("empty.svg");
    export_arrangement(&[], ExportFormat::Svg, &svg).unwrap();
    let text = std::fs::read_to_string(&svg).unwrap();
    assert!(text.starts_with("<svg") && text.trim_end().ends_with("</svg>"));
    assert!(!text.contains("<line x1=\"0"));
    let full = dir.path().join("full.svg");
    export_arrangement(&loci, ExportFormat::Svg, &full).unwrap();
    let text = std::fs::read_to_string(&full).unwrap();
    assert!(text.contains("stroke-dasharray"));
    export_arrangement(&loci, ExportFormat::Svg, &svg).unwrap();
    assert_eq!(std::fs::read(&svg).unwrap(), std::fs::read(&full).unwrap());

    let json = dir.path().join("loci.json");
    export_arrangement(&loci, ExportFormat::Json, &json).unwrap();
    let back: Vec<CriticalLocus> = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(back, loci);

    let csv = dir.path().join("loci.csv");
    export_arrangement(&loci, ExportFormat::Csv, &csv).unwrap();
    let golden = include_str!("golden/arrangement_2_3.csv");
    assert_eq!(std::fs::read_to_string(&csv).unwrap(), golden);
}
