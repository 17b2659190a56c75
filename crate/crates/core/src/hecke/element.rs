use std::collections::btree_map::{self, BTreeMap};
use std::fmt::Write as _;
use std::ops::{Add, Neg, Sub};

use crate::coxeter::{CoxeterSystem, ElemId};
use crate::laurent::{Degree, LaurentPoly};

/// A finite `Z[q, q^{-1}]`-combination of basis elements indexed by ball
/// elements. Used both for T-coordinates and for C-coordinates; the basis is
/// implied by the producing operation.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HeckeElt {
    coords: BTreeMap<ElemId, LaurentPoly>,
}

impl HeckeElt {
    pub fn zero() -> Self {
        Self::default()
    }

    /// The basis element indexed by `w`.
    pub fn t(w: ElemId) -> Self {
        let mut h = Self::zero();
        h.coords.insert(w, LaurentPoly::one());
        h
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (ElemId, LaurentPoly)>) -> Self {
        let mut h = Self::zero();
        for (w, c) in pairs {
            h.add_term(w, &c);
        }
        h
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn get(&self, w: ElemId) -> Option<&LaurentPoly> {
        self.coords.get(&w)
    }

    pub fn coeff(&self, w: ElemId) -> LaurentPoly {
        self.coords.get(&w).cloned().unwrap_or_default()
    }

    pub fn iter(&self) -> btree_map::Iter<'_, ElemId, LaurentPoly> {
        self.coords.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = ElemId> + '_ {
        self.coords.keys().copied()
    }

    /// Largest degree among the coefficients.
    pub fn degree(&self) -> Degree {
        self.coords.values().map(|c| c.degree()).max().unwrap_or(Degree::NegInf)
    }

    /// The support element with the largest id (hence of maximal length).
    pub fn max_elem(&self) -> Option<ElemId> {
        self.coords.keys().next_back().copied()
    }

    pub fn add_term(&mut self, w: ElemId, c: &LaurentPoly) {
        if c.is_zero() {
            return;
        }
        match self.coords.entry(w) {
            btree_map::Entry::Vacant(e) => {
                e.insert(c.clone());
            }
            btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// `self += c · other`.
    pub fn add_scaled(&mut self, other: &HeckeElt, c: &LaurentPoly) {
        if c.is_zero() {
            return;
        }
        let unit = c.is_one();
        for (&w, d) in &other.coords {
            if unit {
                self.add_term(w, d);
            } else {
                self.add_term(w, &(d * c));
            }
        }
    }

    pub fn scale(&self, c: &LaurentPoly) -> HeckeElt {
        let mut out = HeckeElt::zero();
        out.add_scaled(self, c);
        out
    }

    pub fn remove(&mut self, w: ElemId) -> Option<LaurentPoly> {
        self.coords.remove(&w)
    }

    /// Human-readable form with basis symbol `basis` (e.g. `T` or `C`).
    pub fn display(&self, sys: &CoxeterSystem, basis: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (&w, c)) in self.coords.iter().rev().enumerate() {
            if i > 0 {
                out.push_str(" + ");
            }
            let _ = write!(out, "({c}) {basis}_{}", sys.element(w));
        }
        out
    }
}

impl<'a> IntoIterator for &'a HeckeElt {
    type Item = (&'a ElemId, &'a LaurentPoly);
    type IntoIter = btree_map::Iter<'a, ElemId, LaurentPoly>;
    fn into_iter(self) -> Self::IntoIter {
        self.coords.iter()
    }
}

impl Add<&HeckeElt> for &HeckeElt {
    type Output = HeckeElt;
    fn add(self, rhs: &HeckeElt) -> HeckeElt {
        let mut out = self.clone();
        out.add_scaled(rhs, &LaurentPoly::one());
        out
    }
}

impl Sub<&HeckeElt> for &HeckeElt {
    type Output = HeckeElt;
    fn sub(self, rhs: &HeckeElt) -> HeckeElt {
        let mut out = self.clone();
        out.add_scaled(rhs, &LaurentPoly::constant(-1));
        out
    }
}

impl Neg for &HeckeElt {
    type Output = HeckeElt;
    fn neg(self) -> HeckeElt {
        self.scale(&LaurentPoly::constant(-1))
    }
}
