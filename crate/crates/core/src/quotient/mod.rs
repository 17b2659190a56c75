//! The truncated algebra `H_{≤N}`: the quotient of `H` by the span of the
//! `C_w` with `w ∈ W_{>N}`, where `W_{>N}` is taken to be `{w : a_pred(w) > N}`.

mod expansion;

use serde::Serialize;

use crate::cells::Cells;
use crate::coxeter::{ElemId, Element};
use crate::error::{Error, Result};
use crate::hecke::{HeckeElt, KLTable};
use crate::laurent::{Degree, LaurentPoly};

pub use expansion::{case_ids, verify_expansion, ExpansionOptions, ExpansionReport, SampleFailure};

/// `H_{≤N}` for a fixed `N`, working in the `ᴺT` basis.
pub struct Truncation<'a> {
    table: &'a KLTable,
    cells: &'a Cells,
    n: u64,
    over: Vec<bool>,
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundFailure {
    pub x: Element,
    pub y: Element,
    pub degree: i32,
    pub reason: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundReport {
    pub n: u64,
    pub radius: usize,
    pub pairs_checked: usize,
    pub max_degree: Option<i32>,
    /// Pairs with `deg(ᴺT_x ᴺT_y) = N`.
    pub attained: usize,
    pub witness: Option<(Element, Element)>,
    pub failures: Vec<BoundFailure>,
}

impl BoundReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct StrictFailure {
    pub x: Element,
    pub w: Element,
    pub y: Element,
    pub degree: Option<i32>,
    pub bound: i32,
    pub strict: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct StrictReport {
    pub d: Element,
    pub n: u64,
    pub radius: usize,
    pub triples_checked: usize,
    pub strict_checked: usize,
    pub failures: Vec<StrictFailure>,
}

impl StrictReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

impl<'a> Truncation<'a> {
    pub fn new(table: &'a KLTable, cells: &'a Cells, n: u64) -> Result<Truncation<'a>> {
        if table.system().size() != cells.system().size() || table.algebra().weights() != cells.weights() {
            return Err(Error::InvalidSystem("KL table and cell data describe different systems".into()));
        }
        let over = (0..table.system().size() as ElemId).map(|w| cells.a_pred(w).unwrap() > n).collect();
        Ok(Truncation { table, cells, n, over })
    }

    pub fn level(&self) -> u64 {
        self.n
    }

    pub fn table(&self) -> &KLTable {
        self.table
    }

    /// `w ∈ W_{>N}`.
    pub fn is_over(&self, w: ElemId) -> bool {
        self.over[w as usize]
    }

    /// Rewrites `h` in the `ᴺT` basis by repeatedly replacing the longest
    /// `T_z` with `z ∈ W_{>N}` by `−Σ_{y<z} p_{y,z} T_y`.
    pub fn nt_reduce(&self, h: &HeckeElt) -> Result<HeckeElt> {
        if h.max_elem().is_some_and(|z| z as usize >= self.over.len()) {
            let limit = self.table.system().radius();
            return Err(Error::HorizonExceeded { length: limit + 1, limit });
        }
        let mut out = h.clone();
        let mut bound = ElemId::MAX;
        loop {
            let Some(z) = out.iter().rev().map(|(&z, _)| z).find(|&z| z < bound && self.over[z as usize]) else {
                return Ok(out);
            };
            let c = out.remove(z).unwrap();
            for (y, p) in &self.table.column(z)?.entries {
                if *y != z {
                    out.add_term(*y, &-(&c * p));
                }
            }
            // everything added lies below z
            bound = z;
        }
    }

    /// `ᴺT_x ᴺT_y`.
    pub fn nt_product(&self, x: ElemId, y: ElemId) -> Result<HeckeElt> {
        self.nt_reduce(&self.table.algebra().t_product(x, y)?)
    }

    /// `ᴺT_x ᴺT_w ᴺT_y`.
    pub fn nt_triple(&self, x: ElemId, w: ElemId, y: ElemId) -> Result<HeckeElt> {
        let alg = self.table.algebra();
        self.nt_reduce(&alg.t_mult(&alg.t_product(x, w)?, &HeckeElt::t(y))?)
    }

    /// `ᴺf_{x,y,z}`.
    pub fn nf_const(&self, x: ElemId, y: ElemId, z: ElemId) -> Result<LaurentPoly> {
        Ok(self.nt_product(x, y)?.coeff(z))
    }

    /// `deg(ᴺT_x ᴺT_y) ≤ N` for `x, y ∈ W_{≤N} ∩ ball(r)`, with equality
    /// only when `x, y ∈ Ω_{≥N}`.
    pub fn check_bound(&self, r: usize) -> Result<BoundReport> {
        let sys = self.table.system();
        let n = self.n as i32;
        let ball: Vec<ElemId> = sys.ball_ids(r)?.filter(|&w| !self.is_over(w)).collect();
        let mut report = BoundReport {
            n: self.n,
            radius: r,
            pairs_checked: 0,
            max_degree: None,
            attained: 0,
            witness: None,
            failures: Vec::new(),
        };
        for &x in &ball {
            for &y in &ball {
                report.pairs_checked += 1;
                let Degree::Finite(deg) = self.nt_product(x, y)?.degree() else { continue };
                report.max_degree = Some(report.max_degree.map_or(deg, |m| m.max(deg)));
                let fail = |reason: &str| BoundFailure {
                    x: sys.element(x).clone(),
                    y: sys.element(y).clone(),
                    degree: deg,
                    reason: reason.into(),
                };
                if deg > n {
                    report.failures.push(fail("degree exceeds N"));
                } else if deg == n {
                    report.attained += 1;
                    report.witness.get_or_insert_with(|| (sys.element(x).clone(), sys.element(y).clone()));
                    if self.cells.a_pred(x)? < self.n || self.cells.a_pred(y)? < self.n {
                        report.failures.push(fail("degree N attained outside Ω_{≥N}"));
                    }
                }
            }
        }
        Ok(report)
    }

    /// For `d ∈ D_N`, `x ∈ U_d⁻¹`, `y ∈ U_d` (within `ball(r)`) and `w ≤ d`:
    /// `deg(ᴺT_x ᴺT_w ᴺT_y) ≤ −deg p_{w,d}`, strictly when `w < d` and one of
    /// `x ∈ B_d`, `y ∈ B_d⁻¹`, `l(w) ≥ 2` holds.
    pub fn check_strict(&self, d: ElemId, r: usize) -> Result<StrictReport> {
        let sys = self.table.system();
        if self.cells.aprime(d)? != self.n {
            return Err(Error::NotInD(format!("{} at level {}", sys.element(d), self.n)));
        }
        let u = self.cells.u_set(d, r)?;
        let b = self.cells.b_set(d, r)?;
        let lower: Vec<ElemId> = sys.ball_ids(sys.length_of(d))?.filter(|&w| sys.bruhat_leq_id(w, d)).collect();
        let mut report = StrictReport {
            d: sys.element(d).clone(),
            n: self.n,
            radius: r,
            triples_checked: 0,
            strict_checked: 0,
            failures: Vec::new(),
        };
        for &w in &lower {
            let bound = -self.table.kl_poly(w, d)?.degree().finite().expect("p_{w,d} is nonzero below d");
            for &ux in &u {
                let x = sys.inverse_id(ux);
                let x_in_b = b.binary_search(&x).is_ok();
                for &y in &u {
                    let strict = w != d && (x_in_b || b.binary_search(&sys.inverse_id(y)).is_ok() || sys.length_of(w) >= 2);
                    report.triples_checked += 1;
                    report.strict_checked += strict as usize;
                    let deg = self.nt_triple(x, w, y)?.degree();
                    let ok = if strict { deg < bound } else { deg <= bound };
                    if !ok {
                        report.failures.push(StrictFailure {
                            x: sys.element(x).clone(),
                            w: sys.element(w).clone(),
                            y: sys.element(y).clone(),
                            degree: deg.finite(),
                            bound,
                            strict,
                        });
                    }
                }
            }
        }
        Ok(report)
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::coxeter::{CoxeterSystem, WeightFunction};
    use crate::hecke::HeckeAlgebra;

    fn setup(m: (u32, u32, u32), l: [u32; 3], radius: usize) -> (KLTable, Cells) {
        let sys = Arc::new(CoxeterSystem::triple(m.0, m.1, m.2, radius).unwrap());
        let w = WeightFunction::new(l.to_vec()).unwrap();
        let t = KLTable::new(Arc::new(HeckeAlgebra::new(sys.clone(), w.clone()).unwrap()));
        (t, Cells::new(sys, w).unwrap())
    }

    #[test]
    fn reduction_kills_c_basis_above_the_cut() {
        let (t, c) = setup((2, 4, 5), [5, 1, 1], 8);
        let q = Truncation::new(&t, &c, 9).unwrap();
        let sys = t.system();
        let wrs = sys.parse_id("rsrs").unwrap();
        let expect: HeckeElt = HeckeElt::from_pairs(
            t.column(wrs).unwrap().entries.iter().filter(|e| e.0 != wrs).map(|(y, p)| (*y, -p.clone())),
        );
        assert_eq!(q.nt_reduce(&HeckeElt::t(wrs)).unwrap(), expect);
        for w in sys.ball_ids(6).unwrap() {
            let red = q.nt_reduce(&t.c_basis(w).unwrap()).unwrap();
            assert_eq!(red.is_zero(), c.a_pred(w).unwrap() > 9, "{}", sys.element(w));
        }
        // nothing is cut above the largest a′
        let top = Truncation::new(&t, &c, 12).unwrap();
        let h = t.algebra().t_product(wrs, wrs).unwrap();
        assert_eq!(top.nt_reduce(&h).unwrap(), h);
    }

    #[test]
    fn structure_constant_examples() {
        let (t, c) = setup((2, 4, 5), [5, 1, 1], 8);
        let q = Truncation::new(&t, &c, 9).unwrap();
        let sys = t.system();
        let rsr = sys.parse_id("rsr").unwrap();
        for y in sys.ball_ids(3).unwrap() {
            assert_eq!(q.nf_const(0, y, y).unwrap(), LaurentPoly::one());
        }
        assert_eq!(q.nt_product(rsr, rsr).unwrap().degree(), 9);
    }
}
