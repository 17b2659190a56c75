//! Distinguished elements `D`, the predicted a-function, the sets `U_d`,
//! `B_d` and the decomposition `w = b·d·y` for Coxeter groups of dimension 2.
//!
//! Everything here is combinatorial: `Ω_N` membership is decided by factor
//! containment, never by Hecke algebra products.

mod classify;
mod graph;

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use serde::Serialize;

use crate::coxeter::{Bond, CoxeterSystem, ElemId, Element, GenSet, WeightFunction};
use crate::error::{Error, Result};

pub use classify::{twocells_case, DSym, TwoCellParams, Verdict};
pub use graph::{cell_graph, CellGraph, Flavor, PartitionReport, PredictedClass};

/// Shape of a distinguished element, in terms of generator indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DKind {
    Identity,
    Gen(usize),
    /// `w_{st}` for `s < t` (equal to `st` when `m_st = 2`).
    Longest(usize, usize),
    /// `low·w_{st}` where `L(low) < L(other)`.
    Twisted { low: usize, pair: (usize, usize) },
}

#[derive(Clone, Debug, Serialize)]
pub struct DEntry {
    #[serde(skip)]
    pub id: ElemId,
    #[serde(skip)]
    pub kind: DKind,
    pub element: Element,
    pub name: String,
    pub aprime: u64,
}

/// The set `D` with its predicted a-values `a′`.
#[derive(Clone, Debug, Serialize)]
pub struct DistinguishedSet {
    pub entries: Vec<DEntry>,
}

impl DistinguishedSet {
    pub fn get(&self, d: ElemId) -> Option<&DEntry> {
        self.entries.iter().find(|e| e.id == d)
    }

    pub fn contains(&self, d: ElemId) -> bool {
        self.get(d).is_some()
    }

    /// `N ↦ D_N`, members sorted by id.
    pub fn levels(&self) -> BTreeMap<u64, Vec<ElemId>> {
        let mut out: BTreeMap<u64, Vec<ElemId>> = BTreeMap::new();
        for e in &self.entries {
            out.entry(e.aprime).or_default().push(e.id);
        }
        for v in out.values_mut() {
            v.sort_unstable();
        }
        out
    }

    pub fn level(&self, n: u64) -> Vec<ElemId> {
        self.levels().remove(&n).unwrap_or_default()
    }
}

fn kind_name(sys: &CoxeterSystem, kind: DKind) -> String {
    match kind {
        DKind::Identity => "e".into(),
        DKind::Gen(s) => sys.label(s).to_string(),
        DKind::Longest(s, t) if sys.bond(s, t) == Bond::Finite(2) => format!("{}{}", sys.label(s), sys.label(t)),
        DKind::Longest(s, t) => format!("w_{}{}", sys.label(s), sys.label(t)),
        DKind::Twisted { low, pair } => format!("{}w_{}{}", sys.label(low), sys.label(pair.0), sys.label(pair.1)),
    }
}

/// `D = {w_J : W_J finite} ⊔ {s·w_st : ∞ > m_st ≥ 4, L(t) > L(s)}` with
/// `a′(w_J) = L(w_J)` and `a′(s·w_st) = L(t) + (m_st/2 − 1)(L(t) − L(s))`.
pub fn d_set(sys: &CoxeterSystem, weights: &WeightFunction) -> Result<DistinguishedSet> {
    sys.validate_weights(weights)?;
    let n = sys.rank();
    for mask in 0..(1u8 << n) {
        let j = GenSet(mask);
        if j.len() >= 3 && sys.is_finite_parabolic(j) {
            return Err(Error::NotDimensionTwo);
        }
    }
    let mut kinds: Vec<(DKind, ElemId, u64)> = vec![(DKind::Identity, 0, 0)];
    for s in 0..n {
        let id = sys.right_mul(0, s).ok_or(Error::HorizonExceeded { length: 1, limit: sys.ball_radius_limit() })?;
        kinds.push((DKind::Gen(s), id, weights.of(s) as u64));
    }
    for s in 0..n {
        for t in s + 1..n {
            let Bond::Finite(m) = sys.bond(s, t) else { continue };
            let mut j = GenSet::single(s);
            j.insert(t);
            let w = sys.longest_element_id(j)?;
            kinds.push((DKind::Longest(s, t), w, sys.weight_of_id(weights, w)));
            let (ls, lt) = (weights.of(s) as u64, weights.of(t) as u64);
            if m >= 4 && m % 2 == 0 && ls != lt {
                let low = if ls < lt { s } else { t };
                let (l_low, l_high) = (ls.min(lt), ls.max(lt));
                let d = sys.left_mul(w, low).expect("low is a left descent of w_st");
                let aprime = l_high + (m as u64 / 2 - 1) * (l_high - l_low);
                kinds.push((DKind::Twisted { low, pair: (s, t) }, d, aprime));
            }
        }
    }
    let mut entries: Vec<DEntry> = kinds
        .into_iter()
        .map(|(kind, id, aprime)| DEntry { id, kind, element: sys.element(id).clone(), name: kind_name(sys, kind), aprime })
        .collect();
    entries.sort_by_key(|e| (e.aprime, e.id));
    Ok(DistinguishedSet { entries })
}

/// `w = b·d·y` with `d ∈ D_N`, `b ∈ B_d`, `y ∈ U_d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub b: ElemId,
    pub d: ElemId,
    pub y: ElemId,
}

#[derive(Clone, Debug, Serialize)]
pub struct LengthReport {
    pub d: Element,
    pub radius: usize,
    pub pairs_checked: usize,
    pub failures: Vec<(Element, Element)>,
}

impl LengthReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// One row of the element-to-cell table.
#[derive(Clone, Debug, Serialize)]
pub struct CellRow {
    pub word: Element,
    pub length: usize,
    pub a_pred: u64,
    pub d: Element,
    pub b: Element,
    pub y: Element,
    pub cell_id: usize,
}

/// The combinatorial cell machinery for one system and weight function.
#[derive(Debug)]
pub struct Cells {
    sys: Arc<CoxeterSystem>,
    weights: WeightFunction,
    dset: DistinguishedSet,
    apred: Vec<u64>,
}

impl Cells {
    pub fn new(sys: Arc<CoxeterSystem>, weights: WeightFunction) -> Result<Cells> {
        let dset = d_set(&sys, &weights)?;
        // a factor of w is w itself or a factor of w·s or s·w for a descent s
        let mut apred = vec![0u64; sys.size()];
        for w in 0..sys.size() as ElemId {
            let mut best = dset.get(w).map_or(0, |e| e.aprime);
            for s in sys.right_descents(w).iter() {
                best = best.max(apred[sys.right_mul(w, s).unwrap() as usize]);
            }
            for s in sys.left_descents(w).iter() {
                best = best.max(apred[sys.left_mul(w, s).unwrap() as usize]);
            }
            apred[w as usize] = best;
        }
        Ok(Cells { sys, weights, dset, apred })
    }

    pub fn system(&self) -> &CoxeterSystem {
        &self.sys
    }

    pub fn system_arc(&self) -> &Arc<CoxeterSystem> {
        &self.sys
    }

    pub fn weights(&self) -> &WeightFunction {
        &self.weights
    }

    pub fn d_set(&self) -> &DistinguishedSet {
        &self.dset
    }

    fn check(&self, w: ElemId) -> Result<()> {
        if (w as usize) < self.sys.size() {
            Ok(())
        } else {
            Err(Error::HorizonExceeded { length: self.sys.ball_radius_limit() + 1, limit: self.sys.ball_radius_limit() })
        }
    }

    /// `max a′(d)` over the distinguished elements `d` that occur as reduced
    /// factors of `w`.
    pub fn a_pred(&self, w: ElemId) -> Result<u64> {
        self.check(w)?;
        Ok(self.apred[w as usize])
    }

    pub fn aprime(&self, d: ElemId) -> Result<u64> {
        self.check(d)?;
        self.dset.get(d).map(|e| e.aprime).ok_or_else(|| Error::NotInD(self.sys.element(d).to_string()))
    }

    pub fn name(&self, d: ElemId) -> String {
        self.dset.get(d).map_or_else(|| self.sys.element(d).to_string(), |e| e.name.clone())
    }

    /// `x·y` if the product is reduced.
    fn reduced_mul(&self, x: ElemId, y: ElemId) -> Result<Option<ElemId>> {
        let total = self.sys.length_of(x) + self.sys.length_of(y);
        if total > self.sys.ball_radius_limit() {
            return Err(Error::HorizonExceeded { length: total, limit: self.sys.ball_radius_limit() });
        }
        let z = self.sys.mul_id(x, y)?;
        Ok((self.sys.length_of(z) == total).then_some(z))
    }

    /// `y ∈ U_d`: `d·y` reduced and `a_pred(d·y) = a′(d)`.
    pub fn in_u(&self, d: ElemId, y: ElemId) -> Result<bool> {
        let n = self.aprime(d)?;
        Ok(self.reduced_mul(d, y)?.is_some_and(|dy| self.apred[dy as usize] == n))
    }

    /// `x ∈ B_d`: `x⁻¹ ∈ U_d` and every proper weak prefix of `x·d` has
    /// `a_pred < a′(d)`.
    pub fn in_b(&self, d: ElemId, x: ElemId) -> Result<bool> {
        let n = self.aprime(d)?;
        let Some(xd) = self.reduced_mul(x, d)? else { return Ok(false) };
        if self.apred[xd as usize] != n {
            return Ok(false);
        }
        Ok(self.sys.weak_prefix_ids(xd).into_iter().all(|w| w == xd || self.apred[w as usize] < n))
    }

    fn ball_for(&self, d: ElemId, r: usize) -> Result<std::ops::Range<ElemId>> {
        let need = r + self.sys.length_of(d);
        if need > self.sys.ball_radius_limit() {
            return Err(Error::HorizonExceeded { length: need, limit: self.sys.ball_radius_limit() });
        }
        self.sys.ball_ids(r)
    }

    /// `U_d ∩ ball(r)`, sorted by id.
    pub fn u_set(&self, d: ElemId, r: usize) -> Result<Vec<ElemId>> {
        self.aprime(d)?;
        let mut out = Vec::new();
        for y in self.ball_for(d, r)? {
            if self.in_u(d, y)? {
                out.push(y);
            }
        }
        Ok(out)
    }

    /// `B_d ∩ ball(r)`, sorted by id.
    pub fn b_set(&self, d: ElemId, r: usize) -> Result<Vec<ElemId>> {
        self.aprime(d)?;
        let mut out = Vec::new();
        for x in self.ball_for(d, r)? {
            if self.in_b(d, x)? {
                out.push(x);
            }
        }
        Ok(out)
    }

    /// Whether `B_d = U_d⁻¹` within `ball(r)`.
    pub fn b_is_u_inverse(&self, d: ElemId, r: usize) -> Result<bool> {
        let mut inv: Vec<ElemId> = self.u_set(d, r)?.into_iter().map(|y| self.sys.inverse_id(y)).collect();
        inv.sort_unstable();
        Ok(inv == self.b_set(d, r)?)
    }

    /// `(r, s, t)` generator indices with `m_rt = 2` and
    /// `1/m_rs + 1/m_st < 1/2`, `m_rs, m_st > 2`.
    pub fn roles(&self) -> Result<[usize; 3]> {
        let sys = &*self.sys;
        let refuse = || Error::NotApplicableSystem(sys.describe());
        if sys.rank() != 3 {
            return Err(refuse());
        }
        let two: Vec<(usize, usize)> =
            [(0, 1), (0, 2), (1, 2)].into_iter().filter(|&(i, j)| sys.bond(i, j) == Bond::Finite(2)).collect();
        let [(r, t)] = two[..] else { return Err(refuse()) };
        let s = 3 - r - t;
        // 1/m_rs + 1/m_st < 1/2 with ∞ read as 1/m = 0
        let inv = |b: Bond| b.finite().map_or((0, 1), |m| (1, m as u64));
        let ((p1, q1), (p2, q2)) = (inv(sys.bond(r, s)), inv(sys.bond(s, t)));
        if 2 * (p1 * q2 + p2 * q1) >= q1 * q2 {
            return Err(refuse());
        }
        Ok([r, s, t])
    }

    /// The unique `(b, d, y)` with `w = b·d·y` reduced, `d ∈ D_{a_pred(w)}`,
    /// `b ∈ B_d`, `y ∈ U_d`, found by exhaustive search.
    pub fn decompose(&self, w: ElemId) -> Result<Decomposition> {
        self.roles()?;
        self.check(w)?;
        let n = self.apred[w as usize];
        let mut found = Vec::new();
        let lw = self.sys.length_of(w);
        for b in self.sys.weak_prefix_ids(w) {
            let rest = self.sys.strip_prefix(b, w).unwrap();
            for e in self.dset.entries.iter().filter(|e| e.aprime == n) {
                if self.sys.length_of(b) + self.sys.length_of(e.id) > lw {
                    continue;
                }
                let Some(y) = self.sys.strip_prefix(e.id, rest) else { continue };
                if self.in_b(e.id, b)? && self.in_u(e.id, y)? {
                    found.push(Decomposition { b, d: e.id, y });
                }
            }
        }
        match found[..] {
            [one] => Ok(one),
            _ => Err(Error::NonUniqueDecomposition { w: self.sys.element(w).to_string(), count: found.len() }),
        }
    }

    /// Checks `l(b·d·y) = l(b) + l(d) + l(y)` for `b ∈ B_d`, `y ∈ U_d` in
    /// `ball(r)`.
    pub fn length_additivity_check(&self, d: ElemId, r: usize) -> Result<LengthReport> {
        let bs = self.b_set(d, r)?;
        let us = self.u_set(d, r)?;
        let need = 2 * r + self.sys.length_of(d);
        if need > self.sys.ball_radius_limit() {
            return Err(Error::HorizonExceeded { length: need, limit: self.sys.ball_radius_limit() });
        }
        let mut failures = Vec::new();
        let mut checked = 0;
        for &b in &bs {
            let bd = self.sys.mul_id(b, d)?;
            for &y in &us {
                checked += 1;
                let expected = self.sys.length_of(b) + self.sys.length_of(d) + self.sys.length_of(y);
                if self.sys.length_of(self.sys.mul_id(bd, y)?) != expected {
                    failures.push((self.sys.element(b).clone(), self.sys.element(y).clone()));
                }
            }
        }
        Ok(LengthReport { d: self.sys.element(d).clone(), radius: r, pairs_checked: checked, failures })
    }

    /// The symbolic name of `d` relative to the roles `(r, s, t)`.
    pub fn symbol(&self, d: ElemId) -> Result<DSym> {
        let [r, s, t] = self.roles()?;
        let kind = self.dset.get(d).ok_or_else(|| Error::NotInD(self.sys.element(d).to_string()))?.kind;
        let pair = |a: usize, b: usize| (a.min(b), a.max(b));
        Ok(match kind {
            DKind::Identity => DSym::E,
            DKind::Gen(g) if g == r => DSym::R,
            DKind::Gen(g) if g == s => DSym::S,
            DKind::Gen(_) => DSym::T,
            DKind::Longest(a, b) if (a, b) == pair(r, t) => DSym::RT,
            DKind::Longest(a, b) if (a, b) == pair(r, s) => DSym::Wrs,
            DKind::Longest(..) => DSym::Wst,
            DKind::Twisted { low, pair: p } if p == pair(r, s) => {
                if low == s {
                    DSym::SWrs
                } else {
                    DSym::RWrs
                }
            }
            DKind::Twisted { low, .. } => {
                if low == s {
                    DSym::SWst
                } else {
                    DSym::TWst
                }
            }
        })
    }

    /// Whether `d1, d2` (with equal `a′`) lie in the same two-sided cell,
    /// by the case list for hyperbolic rank-3 groups.
    pub fn two_sided_classifier(&self, d1: ElemId, d2: ElemId) -> Result<Verdict> {
        let [r, s, t] = self.roles()?;
        let (a1, a2) = (self.aprime(d1)?, self.aprime(d2)?);
        if a1 != a2 {
            return Err(Error::UnequalAValues { d1: self.name(d1), a1, d2: self.name(d2), a2 });
        }
        let l = |g: usize| self.weights.of(g) as u64;
        let p = TwoCellParams {
            a: l(r),
            b: l(s),
            c: l(t),
            n: a1,
            m_rs: self.sys.bond(r, s),
            m_st: self.sys.bond(s, t),
        };
        Ok(twocells_case(self.symbol(d1)?, self.symbol(d2)?, &p))
    }

    /// The shortest `w ∈ Ω_N ∩ ball(r)` with `w = d1·x = y·d2` reduced.
    pub fn connect_witness(&self, d1: ElemId, d2: ElemId, r: usize) -> Result<Option<ElemId>> {
        let n = self.aprime(d1)?;
        self.aprime(d2)?;
        for w in self.sys.ball_ids(r)? {
            if self.apred[w as usize] == n && self.sys.is_left_factor(d1, w) && self.sys.strip_suffix(w, d2).is_some() {
                return Ok(Some(w));
            }
        }
        Ok(None)
    }

    /// Decomposition of every element of `ball(r)`, with cells numbered by
    /// first appearance of `(b, d)`.
    pub fn cell_table(&self, r: usize) -> Result<Vec<CellRow>> {
        let mut ids: BTreeMap<(ElemId, ElemId), usize> = BTreeMap::new();
        let mut rows = Vec::new();
        for w in self.sys.ball_ids(r)? {
            let dec = self.decompose(w)?;
            let next = ids.len();
            let cell_id = *ids.entry((dec.b, dec.d)).or_insert(next);
            let el = |x: ElemId| self.sys.element(x).clone();
            rows.push(CellRow {
                word: el(w),
                length: self.sys.length_of(w),
                a_pred: self.apred[w as usize],
                d: el(dec.d),
                b: el(dec.b),
                y: el(dec.y),
                cell_id,
            });
        }
        Ok(rows)
    }

    pub fn write_cell_csv(&self, r: usize, path: &Path) -> Result<()> {
        let rows = self.cell_table(r)?;
        let mut out = csv::Writer::from_path(path).map_err(csv_err)?;
        for row in rows {
            out.serialize(row).map_err(csv_err)?;
        }
        out.flush()?;
        Ok(())
    }
}

fn csv_err(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::Parse(format!("{other:?}")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cells(m: (u32, u32, u32), l: [u32; 3], radius: usize) -> Cells {
        let sys = CoxeterSystem::triple(m.0, m.1, m.2, radius).unwrap();
        Cells::new(Arc::new(sys), WeightFunction::new(l.to_vec()).unwrap()).unwrap()
    }

    fn names(c: &Cells, ids: &[ElemId]) -> Vec<String> {
        ids.iter().map(|&d| c.system().element(d).to_string()).collect()
    }

    #[test]
    fn predicted_values() {
        let c = cells((2, 4, 5), [5, 1, 1], 10);
        let id = |w: &str| c.system().parse_id(w).unwrap();
        assert_eq!(c.a_pred(0).unwrap(), 0);
        assert_eq!(c.a_pred(id("rt")).unwrap(), 6);
        assert_eq!(c.a_pred(id("st")).unwrap(), 1);
        assert_eq!(c.a_pred(id("srt")).unwrap(), 6);
        assert_eq!(c.aprime(id("rsr")).unwrap(), 9);
        assert!(matches!(c.aprime(id("st")), Err(Error::NotInD(_))));
    }

    #[test]
    fn companion_sets() {
        let c = cells((2, 4, 5), [5, 1, 1], 10);
        let id = |w: &str| c.system().parse_id(w).unwrap();
        let wst = id("ststs");
        assert_eq!(c.u_set(wst, 4).unwrap(), vec![0]);
        assert_eq!(c.b_set(wst, 4).unwrap(), vec![0]);
        let u = names(&c, &c.u_set(id("s"), 2).unwrap());
        for w in ["e", "t", "ts"] {
            assert!(u.contains(&w.to_string()));
        }
        assert!(!u.contains(&"r".to_string()));
    }

    #[test]
    fn decompositions() {
        let c = cells((2, 4, 5), [5, 1, 1], 10);
        let id = |w: &str| c.system().parse_id(w).unwrap();
        assert_eq!(c.decompose(0).unwrap(), Decomposition { b: 0, d: 0, y: 0 });
        assert_eq!(c.decompose(id("st")).unwrap(), Decomposition { b: 0, d: id("s"), y: id("t") });
        assert_eq!(c.decompose(id("rsr")).unwrap(), Decomposition { b: 0, d: id("rsr"), y: 0 });
    }

    #[test]
    fn refuses_non_hyperbolic() {
        let c = cells((2, 4, 4), [1, 1, 1], 6);
        assert!(matches!(c.decompose(0), Err(Error::NotApplicableSystem(_))));
        let sys = CoxeterSystem::triple(2, 3, 3, 6).unwrap();
        assert!(matches!(d_set(&sys, &WeightFunction::uniform(3)), Err(Error::NotDimensionTwo)));
    }
}
