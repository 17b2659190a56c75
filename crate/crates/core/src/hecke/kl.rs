use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use super::{HeckeAlgebra, HeckeElt};
use crate::coxeter::{CoxeterSystem, ElemId, WeightFunction};
use crate::error::{Error, Result};
use crate::laurent::{Accumulator, LaurentPoly};

/// The nonzero `p_{y,w}` for a fixed `w`, sorted by `y`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Column {
    pub w: ElemId,
    pub entries: Vec<(ElemId, LaurentPoly)>,
}

impl Column {
    pub fn get(&self, y: ElemId) -> Option<&LaurentPoly> {
        self.entries.binary_search_by_key(&y, |e| e.0).ok().map(|i| &self.entries[i].1)
    }
}

type Slot = std::result::Result<Arc<Column>, ElemId>;

/// Kazhdan–Lusztig polynomials of one (system, weights) pair, computed
/// column by column on demand. Columns are independent of each other and are
/// filled at most once; concurrent requests for the same column wait for the
/// first.
#[derive(Debug)]
pub struct KLTable {
    alg: Arc<HeckeAlgebra>,
    columns: Vec<OnceLock<Slot>>,
    solves: AtomicUsize,
}

#[derive(Serialize, Deserialize)]
struct Header {
    fingerprint: String,
    labels: String,
    bonds: Vec<Vec<String>>,
    weights: Vec<u32>,
}

#[derive(Serialize)]
struct RecordOut<'a> {
    y: String,
    w: String,
    p: &'a LaurentPoly,
}

#[derive(Deserialize)]
struct RecordIn {
    y: String,
    w: String,
    p: LaurentPoly,
}

impl KLTable {
    pub fn new(alg: Arc<HeckeAlgebra>) -> KLTable {
        let columns = (0..alg.system().size()).map(|_| OnceLock::new()).collect();
        KLTable { alg, columns, solves: AtomicUsize::new(0) }
    }

    pub fn for_system(sys: CoxeterSystem, weights: WeightFunction) -> Result<KLTable> {
        Ok(KLTable::new(Arc::new(HeckeAlgebra::new(Arc::new(sys), weights)?)))
    }

    pub fn algebra(&self) -> &HeckeAlgebra {
        &self.alg
    }

    pub fn algebra_arc(&self) -> &Arc<HeckeAlgebra> {
        &self.alg
    }

    pub fn system(&self) -> &CoxeterSystem {
        self.alg.system()
    }

    /// Number of columns solved (not loaded) so far.
    pub fn solve_count(&self) -> usize {
        self.solves.load(Ordering::Relaxed)
    }

    pub fn computed_columns(&self) -> usize {
        self.columns.iter().filter(|c| matches!(c.get(), Some(Ok(_)))).count()
    }

    pub fn column(&self, w: ElemId) -> Result<Arc<Column>> {
        self.alg.check_id(w)?;
        let slot = self.columns[w as usize].get_or_init(|| {
            self.solves.fetch_add(1, Ordering::Relaxed);
            self.solve(w)
        });
        slot.clone().map_err(|y| {
            let sys = self.system();
            Error::InconsistentBar { y: sys.element(y).to_string(), w: sys.element(w).to_string() }
        })
    }

    /// Descending induction over the interval below `w`:
    /// `p_{y,w} − bar(p_{y,w}) = Σ_{y<z≤w} r_{y,z} bar(p_{z,w})`, whose
    /// negative part is `p_{y,w}`.
    fn solve(&self, w: ElemId) -> Slot {
        let row_w = self.alg.bar_row_unchecked(w);
        let interval = &row_w.interval;
        let mut local = vec![u32::MAX; w as usize + 1];
        for (i, &y) in interval.iter().enumerate() {
            local[y as usize] = i as u32;
        }
        let mut accs: Vec<Accumulator> = vec![Accumulator::new(); interval.len()];
        let mut entries = Vec::new();
        for i in (0..interval.len()).rev() {
            let y = interval[i];
            let p = if y == w {
                LaurentPoly::one()
            } else {
                let rhs = accs[i].to_poly();
                if !rhs.is_bar_anti_invariant() {
                    return Err(y);
                }
                rhs.negative_part()
            };
            accs[i].clear();
            if p.is_zero() {
                continue;
            }
            let row_y = self.alg.bar_row_unchecked(y);
            for (x, r) in row_y.interval.iter().zip(&row_y.r) {
                if *x == y || r.is_zero() {
                    continue;
                }
                let j = local[*x as usize] as usize;
                accs[j].add_product(r, &p, true);
            }
            entries.push((y, p));
        }
        entries.reverse();
        Ok(Arc::new(Column { w, entries }))
    }

    pub fn kl_poly(&self, y: ElemId, w: ElemId) -> Result<LaurentPoly> {
        self.alg.check_id(y)?;
        Ok(self.column(w)?.get(y).cloned().unwrap_or_default())
    }

    /// `C_w = Σ p_{y,w} T_y`.
    pub fn c_basis(&self, w: ElemId) -> Result<HeckeElt> {
        let col = self.column(w)?;
        Ok(HeckeElt::from_pairs(col.entries.iter().cloned()))
    }

    /// Coordinates in the C-basis of an element given in the T-basis.
    pub fn to_c_coords(&self, h: &HeckeElt) -> Result<HeckeElt> {
        let mut rest = h.clone();
        let mut out = HeckeElt::zero();
        while let Some(m) = rest.max_elem() {
            let c = rest.remove(m).unwrap();
            let col = self.column(m)?;
            let neg = -&c;
            for (y, p) in &col.entries {
                if *y != m {
                    rest.add_term(*y, &(p * &neg));
                }
            }
            out.add_term(m, &c);
        }
        Ok(out)
    }

    /// C-coordinates of `C_x C_y`, computed through the T-basis.
    pub fn c_product(&self, x: ElemId, y: ElemId) -> Result<HeckeElt> {
        let prod = self.alg.t_mult(&self.c_basis(x)?, &self.c_basis(y)?)?;
        self.to_c_coords(&prod)
    }

    /// `h_{x,y,z}`.
    pub fn h_const(&self, x: ElemId, y: ElemId, z: ElemId) -> Result<LaurentPoly> {
        Ok(self.c_product(x, y)?.coeff(z))
    }

    pub fn fingerprint(&self) -> String {
        self.header().fingerprint
    }

    fn header(&self) -> Header {
        let sys = self.system();
        let n = sys.rank();
        let bonds = (0..n).map(|i| (0..n).map(|j| sys.bond(i, j).to_string()).collect()).collect();
        let mut h = Header {
            fingerprint: String::new(),
            labels: String::from_utf8_lossy(sys.labels()).into_owned(),
            bonds,
            weights: self.alg.weights().values().to_vec(),
        };
        h.fingerprint = format!(
            "labels={};bonds={};weights={:?}",
            h.labels,
            h.bonds.iter().map(|r| r.join(",")).collect::<Vec<_>>().join("/"),
            h.weights
        );
        h
    }

    /// Writes every solved column as JSON lines after a header record.
    pub fn save(&self, path: &Path) -> Result<()> {
        let tmp = path.with_extension("tmp");
        {
            let mut out = BufWriter::new(File::create(&tmp)?);
            let json = |e: serde_json::Error| Error::Parse(e.to_string());
            writeln!(out, "{}", serde_json::to_string(&self.header()).map_err(json)?)?;
            let sys = self.system();
            for (w, slot) in self.columns.iter().enumerate() {
                let Some(Ok(col)) = slot.get() else { continue };
                let ws = sys.element(w as ElemId).to_string();
                for (y, p) in &col.entries {
                    let rec = RecordOut { y: sys.element(*y).to_string(), w: ws.clone(), p };
                    writeln!(out, "{}", serde_json::to_string(&rec).map_err(json)?)?;
                }
            }
            out.flush()?;
        }
        std::fs::rename(&tmp, path)?;
        Ok(())
    }

    /// Loads columns written by [`KLTable::save`]. Columns outside this
    /// table's ball are skipped. Returns the number of columns installed.
    pub fn load(&self, path: &Path) -> Result<usize> {
        let reader = BufReader::new(File::open(path)?);
        let mut lines = reader.lines();
        let first = lines.next().ok_or_else(|| Error::Parse("empty cache file".into()))??;
        let header: Header = serde_json::from_str(&first).map_err(|e| Error::Parse(e.to_string()))?;
        let expected = self.fingerprint();
        if header.fingerprint != expected {
            return Err(Error::FingerprintMismatch { expected, found: header.fingerprint });
        }
        let sys = self.system();
        let mut cols: BTreeMap<ElemId, Vec<(ElemId, LaurentPoly)>> = BTreeMap::new();
        let mut skipped = std::collections::HashSet::new();
        for line in lines {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let rec: RecordIn = serde_json::from_str(&line).map_err(|e| Error::Parse(e.to_string()))?;
            let (Ok(w), Ok(y)) = (sys.parse_id(&rec.w), sys.parse_id(&rec.y)) else {
                skipped.insert(rec.w);
                continue;
            };
            cols.entry(w).or_default().push((y, rec.p));
        }
        let mut installed = 0;
        for (w, mut entries) in cols {
            if skipped.contains(&sys.element(w).to_string()) {
                continue;
            }
            entries.sort_by_key(|e| e.0);
            if self.columns[w as usize].set(Ok(Arc::new(Column { w, entries }))).is_ok() {
                installed += 1;
            }
        }
        Ok(installed)
    }
}
