use std::sync::{Arc, OnceLock};

use super::{HeckeElt, KLTable};
use crate::coxeter::ElemId;
use crate::error::Result;
use crate::laurent::LaurentPoly;

/// Products in the C-basis by recursion on the left factor:
/// `C_s C_{x'} = C_x + Σ_z μ_z C_z` for `x = s·x' > x'`, so
/// `C_x C_y = C_s (C_{x'} C_y) − Σ_z μ_z C_z C_y`. The coefficients of
/// `C_s C_z` are read once per `(s, z)` by converting the T-basis product.
pub struct CProducts<'a> {
    table: &'a KLTable,
    left: Vec<[OnceLock<Arc<HeckeElt>>; 3]>,
}

impl<'a> CProducts<'a> {
    pub fn new(table: &'a KLTable) -> CProducts<'a> {
        let left = (0..table.system().size()).map(|_| Default::default()).collect();
        CProducts { table, left }
    }

    pub fn table(&self) -> &KLTable {
        self.table
    }

    /// C-coordinates of `C_s C_z`.
    pub fn left_gen_row(&self, s: usize, z: ElemId) -> Result<Arc<HeckeElt>> {
        let cell = &self.left[z as usize][s];
        if let Some(v) = cell.get() {
            return Ok(v.clone());
        }
        let alg = self.table.algebra();
        let sys = alg.system();
        let row = if sys.left_descents(z).contains(s) {
            HeckeElt::from_pairs([(z, LaurentPoly::q_plus_inverse(alg.weights().of(s)))])
        } else {
            let cz = self.table.c_basis(z)?;
            let mut prod = alg.mul_gen_left(s, &cz)?;
            prod.add_scaled(&cz, &LaurentPoly::q(-(alg.weights().of(s) as i32)));
            self.table.to_c_coords(&prod)?
        };
        Ok(cell.get_or_init(|| Arc::new(row)).clone())
    }

    /// `C_s · h` for `h` in C-coordinates.
    pub fn mul_gen_left(&self, s: usize, h: &HeckeElt) -> Result<HeckeElt> {
        let mut out = HeckeElt::zero();
        for (&z, c) in h {
            out.add_scaled(&*self.left_gen_row(s, z)?, c);
        }
        Ok(out)
    }

    /// C-coordinates of `C_x C_y` for every `x` with id below `x_end`
    /// (a ball prefix), indexed by `x`.
    pub fn left_products(&self, y: ElemId, x_end: ElemId) -> Result<Vec<HeckeElt>> {
        let sys = self.table.system();
        let mut out: Vec<HeckeElt> = Vec::with_capacity(x_end as usize);
        for x in 0..x_end {
            if x == 0 {
                out.push(HeckeElt::t(y));
                continue;
            }
            let s = sys.left_descents(x).min().unwrap();
            let x1 = sys.left_mul(x, s).unwrap();
            let mut p = self.mul_gen_left(s, &out[x1 as usize])?;
            for (&z, mu) in self.left_gen_row(s, x1)?.iter() {
                if z != x {
                    p.add_scaled(&out[z as usize], &-mu);
                }
            }
            out.push(p);
        }
        Ok(out)
    }
}
