//! The Hecke algebra with unequal parameters over `Z[q, q^{-1}]`, its
//! Kazhdan–Lusztig basis and structure constants.

mod dihedral;
mod element;
mod kl;
mod products;

use std::sync::{Arc, OnceLock};

use crate::coxeter::{CoxeterSystem, ElemId, WeightFunction};
use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;

pub use dihedral::{dihedral_sweep, SignedWeight, SweepReport, LEMMA_IDS};
pub use element::HeckeElt;
pub use kl::{Column, KLTable};
pub use products::CProducts;

/// Coefficients of `bar(T_w) = Σ r_{x,w} T_x`, indexed along the Bruhat
/// interval below `w` (sorted by id). Some `r` may vanish inside the interval.
#[derive(Debug)]
pub struct BarRow {
    pub interval: Vec<ElemId>,
    pub r: Vec<LaurentPoly>,
}

impl BarRow {
    pub fn get(&self, x: ElemId) -> Option<&LaurentPoly> {
        self.interval.binary_search(&x).ok().map(|i| &self.r[i])
    }
}

/// T-basis arithmetic for a fixed system and weight function.
#[derive(Debug)]
pub struct HeckeAlgebra {
    sys: Arc<CoxeterSystem>,
    weights: WeightFunction,
    xi: Vec<LaurentPoly>,
    bars: Vec<OnceLock<Arc<BarRow>>>,
}

impl HeckeAlgebra {
    pub fn new(sys: Arc<CoxeterSystem>, weights: WeightFunction) -> Result<HeckeAlgebra> {
        sys.validate_weights(&weights)?;
        let xi = weights.values().iter().map(|&l| LaurentPoly::xi(l)).collect();
        let bars = (0..sys.size()).map(|_| OnceLock::new()).collect();
        Ok(HeckeAlgebra { sys, weights, xi, bars })
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

    /// `ξ_s = q^{L(s)} − q^{−L(s)}`.
    pub fn xi(&self, s: usize) -> &LaurentPoly {
        &self.xi[s]
    }

    /// `L(w)`.
    pub fn weight(&self, w: ElemId) -> i32 {
        self.sys.weight_of_id(&self.weights, w) as i32
    }

    pub(crate) fn check_id(&self, w: ElemId) -> Result<()> {
        if (w as usize) < self.sys.size() {
            Ok(())
        } else {
            Err(Error::HorizonExceeded { length: self.sys.ball_radius_limit() + 1, limit: self.sys.ball_radius_limit() })
        }
    }

    fn horizon(&self, y: ElemId) -> Error {
        Error::HorizonExceeded { length: self.sys.length_of(y) + 1, limit: self.sys.ball_radius_limit() }
    }

    /// `h·T_s`.
    pub fn mul_gen_right(&self, h: &HeckeElt, s: usize) -> Result<HeckeElt> {
        let mut out = HeckeElt::zero();
        for (&y, c) in h.iter() {
            let ys = self.sys.right_mul(y, s).ok_or_else(|| self.horizon(y))?;
            out.add_term(ys, c);
            if ys < y {
                out.add_term(y, &(c * &self.xi[s]));
            }
        }
        Ok(out)
    }

    /// `T_s·h`.
    pub fn mul_gen_left(&self, s: usize, h: &HeckeElt) -> Result<HeckeElt> {
        let mut out = HeckeElt::zero();
        for (&y, c) in h.iter() {
            let sy = self.sys.left_mul(y, s).ok_or_else(|| self.horizon(y))?;
            out.add_term(sy, c);
            if sy < y {
                out.add_term(y, &(c * &self.xi[s]));
            }
        }
        Ok(out)
    }

    /// `h1·h2` in the T-basis.
    pub fn t_mult(&self, h1: &HeckeElt, h2: &HeckeElt) -> Result<HeckeElt> {
        let mut out = HeckeElt::zero();
        for (&y, c) in h2.iter() {
            let mut cur = h1.clone();
            for s in self.sys.letters(y) {
                cur = self.mul_gen_right(&cur, s)?;
            }
            out.add_scaled(&cur, c);
        }
        Ok(out)
    }

    /// `f_{x,y,z}` for all `z`: the T-coordinates of `T_x T_y`.
    pub fn t_product(&self, x: ElemId, y: ElemId) -> Result<HeckeElt> {
        self.t_mult(&HeckeElt::t(x), &HeckeElt::t(y))
    }

    /// The row of `r_{x,w}`, built from `bar(T_{ws}) = bar(T_w)(T_s − ξ_s)`.
    pub fn bar_row(&self, w: ElemId) -> Result<Arc<BarRow>> {
        self.check_id(w)?;
        Ok(self.bar_row_unchecked(w))
    }

    fn bar_row_unchecked(&self, w: ElemId) -> Arc<BarRow> {
        self.bars[w as usize]
            .get_or_init(|| {
                if w == 0 {
                    return Arc::new(BarRow { interval: vec![0], r: vec![LaurentPoly::one()] });
                }
                let s = self.sys.right_descents(w).min().unwrap();
                let w1 = self.sys.right_mul(w, s).unwrap();
                let prev = self.bar_row_unchecked(w1);
                // every x·s lies in the ball: l(x·s) ≤ l(x) + 1 ≤ l(w)
                let mut interval: Vec<ElemId> = prev.interval.clone();
                interval.extend(prev.interval.iter().map(|&x| self.sys.right_mul(x, s).unwrap()));
                interval.sort_unstable();
                interval.dedup();
                // r_{x,w} = r_{xs,w1} − [xs > x] ξ_s r_{x,w1}
                let r = interval
                    .iter()
                    .map(|&x| {
                        let xs = self.sys.right_mul(x, s).unwrap();
                        let mut v = prev.get(xs).cloned().unwrap_or_default();
                        if xs > x {
                            if let Some(rx) = prev.get(x) {
                                v -= &(rx * &self.xi[s]);
                            }
                        }
                        v
                    })
                    .collect();
                Arc::new(BarRow { interval, r })
            })
            .clone()
    }

    /// T-coordinates of `bar(T_w)`.
    pub fn bar_expand(&self, w: ElemId) -> Result<HeckeElt> {
        let row = self.bar_row(w)?;
        Ok(HeckeElt::from_pairs(row.interval.iter().copied().zip(row.r.iter().cloned())))
    }

    /// The bar involution on an arbitrary element.
    pub fn bar(&self, h: &HeckeElt) -> Result<HeckeElt> {
        let mut out = HeckeElt::zero();
        for (&y, c) in h.iter() {
            let row = self.bar_row(y)?;
            let cb = c.bar();
            for (x, r) in row.interval.iter().zip(&row.r) {
                if !r.is_zero() {
                    out.add_term(*x, &(r * &cb));
                }
            }
        }
        Ok(out)
    }
}
