//! The a-function restricted to a ball, `Δ`, `n_w`, the coefficients `γ`,
//! and instance checks of P1–P15.
//!
//! On an infinite group the maximum defining `a(w)` runs over all of `W`;
//! [`a_ball`] only sees `x, y` in a ball and so gives a lower bound. Checks
//! take their a-values from an [`ASource`]: exact values for a finite group,
//! or the predicted values `a_pred` for the hyperbolic rank-3 groups.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

use crate::cells::{cell_graph, CellGraph, Cells, Flavor};
use crate::coxeter::{CoxeterSystem, ElemId, Element, GenSet, WeightFunction};
use crate::error::{Error, Result};
use crate::hecke::{CProducts, HeckeElt, KLTable};
use crate::laurent::{Int, LaurentPoly};

/// A maximum of `deg h_{x,y,w}` with one maximizing pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BallMax {
    pub degree: i32,
    pub x: ElemId,
    pub y: ElemId,
}

/// `max deg h_{x,y,z}` over `x, y ∈ ball(r)`, for every `z` that occurs.
/// Among maximizing pairs the witness minimizes `max(l(x), l(y))`, which is
/// then the least radius at which the maximum is reached. Needs the system
/// radius to be at least `2r`.
pub fn a_ball_all(cp: &CProducts, r: usize) -> Result<Vec<Option<BallMax>>> {
    let sys = cp.table().system();
    let need = 2 * r;
    if need > sys.ball_radius_limit() && !sys.is_complete() {
        return Err(Error::HorizonExceeded { length: need, limit: sys.ball_radius_limit() });
    }
    let end = sys.ball_ids(r)?.end;
    let mut best: Vec<Option<BallMax>> = vec![None; sys.size()];
    let reach = |x: ElemId, y: ElemId| sys.length_of(x).max(sys.length_of(y));
    for y in 0..end {
        for (x, prod) in cp.left_products(y, end)?.iter().enumerate() {
            let x = x as ElemId;
            for (&z, h) in prod {
                let Some(d) = h.degree().finite() else { continue };
                let slot = &mut best[z as usize];
                if slot.is_none_or(|b| d > b.degree || (d == b.degree && reach(x, y) < reach(b.x, b.y))) {
                    *slot = Some(BallMax { degree: d, x, y });
                }
            }
        }
    }
    Ok(best)
}

/// `max deg h_{x,y,w}` over `x, y ∈ ball(r)`, with a maximizing pair.
pub fn a_ball(cp: &CProducts, w: ElemId, r: usize) -> Result<(u64, (ElemId, ElemId))> {
    let sys = cp.table().system();
    if sys.length_of(w) > r {
        return Err(Error::HorizonExceeded { length: sys.length_of(w), limit: r });
    }
    // (x, y) = (e, w) gives h = 1, so the maximum is at least 0
    let m = a_ball_all(cp, r)?[w as usize].expect("w occurs in C_e C_w");
    Ok((m.degree as u64, (m.x, m.y)))
}

/// `(Δ(w), n_w)` from `p_{e,w} = n_w q^{−Δ(w)} + lower terms`.
pub fn delta_n(table: &KLTable, w: ElemId) -> Result<(u64, Int)> {
    let p = table.kl_poly(0, w)?;
    let d = p.degree().finite().expect("p_{e,w} is nonzero");
    Ok(((-d) as u64, p.leading_coeff()))
}

/// `γ_{x,y,z}`: the coefficient of `q^{a}` in `h_{x,y,z⁻¹}`, where the caller
/// passes `a = a(z⁻¹)`.
pub fn gamma_coeff(table: &KLTable, x: ElemId, y: ElemId, z: ElemId, a_of_z: u64) -> Result<Int> {
    let zi = table.system().inverse_id(z);
    Ok(table.h_const(x, y, zi)?.coeff(a_of_z as i32))
}

/// Where the a-values used by the checks come from.
#[derive(Clone, Debug)]
pub enum ASource {
    /// Exact values on a finite group (every element present).
    Exact(Vec<u64>),
    /// `a_pred` from the cell machinery.
    Predicted(Vec<u64>),
}

impl ASource {
    pub fn predicted(cells: &Cells) -> ASource {
        let n = cells.system().size() as ElemId;
        ASource::Predicted((0..n).map(|w| cells.a_pred(w).unwrap()).collect())
    }

    /// Exact a-values of a finite group whose whole Cayley graph is present.
    pub fn exact(cp: &CProducts) -> Result<ASource> {
        let sys = cp.table().system();
        if !sys.is_finite_group() || !sys.is_complete() {
            return Err(Error::UnsupportedWithoutPrediction);
        }
        let all = a_ball_all(cp, sys.max_length())?;
        Ok(ASource::Exact(all.into_iter().map(|m| m.expect("every element occurs").degree as u64).collect()))
    }

    pub fn get(&self, w: ElemId) -> u64 {
        match self {
            ASource::Exact(v) | ASource::Predicted(v) => v[w as usize],
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, ASource::Exact(_))
    }
}

/// `{z ∈ ball(r) : a(z) = Δ(z)}`.
pub fn distinguished_ball(table: &KLTable, r: usize, a: &ASource) -> Result<Vec<ElemId>> {
    let mut out = Vec::new();
    for z in table.system().ball_ids(r)? {
        if delta_n(table, z)?.0 == a.get(z) {
            out.push(z);
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct AProfile {
    pub element: Element,
    pub a_ball: u64,
    pub witness: (Element, Element),
    pub a_pred: Option<u64>,
    pub delta: u64,
    pub n_w: Int,
}

pub fn profile(cp: &CProducts, cells: Option<&Cells>, w: ElemId, r: usize) -> Result<AProfile> {
    let sys = cp.table().system();
    let (a, (x, y)) = a_ball(cp, w, r)?;
    let (delta, n_w) = delta_n(cp.table(), w)?;
    Ok(AProfile {
        element: sys.element(w).clone(),
        a_ball: a,
        witness: (sys.element(x).clone(), sys.element(y).clone()),
        a_pred: cells.map(|c| c.a_pred(w)).transpose()?,
        delta,
        n_w,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Pass,
    Fail,
}

/// Result of one statement check.
#[derive(Clone, Debug, Serialize)]
pub struct PReport {
    pub statement: String,
    pub radius: usize,
    pub result: Outcome,
    pub checked: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
    pub caveats: Vec<String>,
}

impl PReport {
    pub fn passed(&self) -> bool {
        self.result == Outcome::Pass
    }
}

/// `A ⊗_Z A`, as coefficients of `q^i ⊗ q^j`.
type Tensor = BTreeMap<(i32, i32), Int>;

fn add_tensor(acc: &mut Tensor, p: &LaurentPoly, q: &LaurentPoly) {
    for (i, a) in p.terms() {
        for (j, b) in q.terms() {
            let e = acc.entry((*i, *j)).or_default();
            *e += &(a * b);
            if e.is_zero() {
                acc.remove(&(*i, *j));
            }
        }
    }
}

/// Everything the P-checks need for one ball: all products `C_x C_y` with
/// `x, y ∈ ball(r)`, the cell graphs on a larger ball and the a-values.
pub struct PChecker<'a> {
    cp: &'a CProducts<'a>,
    radius: usize,
    a: ASource,
    end: ElemId,
    prods: Vec<Vec<HeckeElt>>,
    graphs: [CellGraph; 3],
    delta: Vec<(u64, Int)>,
}

impl<'a> PChecker<'a> {
    /// The preorders are computed on `ball(graph_radius)` (at least `r`);
    /// a larger graph ball certifies more equivalences.
    pub fn new(cp: &'a CProducts<'a>, r: usize, graph_radius: usize, a: ASource) -> Result<PChecker<'a>> {
        let sys = cp.table().system();
        let graph_radius = graph_radius.max(r).min(sys.max_length());
        let end = sys.ball_ids(r)?.end;
        let prods = (0..end).map(|y| cp.left_products(y, end)).collect::<Result<Vec<_>>>()?;
        let graphs = [
            cell_graph(cp, graph_radius, Flavor::Left)?,
            cell_graph(cp, graph_radius, Flavor::Right)?,
            cell_graph(cp, graph_radius, Flavor::TwoSided)?,
        ];
        let gend = sys.ball_ids(graph_radius)?.end;
        let mut delta = Vec::with_capacity(gend as usize);
        for z in 0..gend {
            delta.push(delta_n(cp.table(), z)?);
        }
        Ok(PChecker { cp, radius: r, a, end, prods, graphs, delta })
    }

    fn sys(&self) -> &CoxeterSystem {
        self.cp.table().system()
    }

    fn name(&self, w: ElemId) -> String {
        self.sys().element(w).to_string()
    }

    /// C-coordinates of `C_x C_y`.
    pub fn h(&self, x: ElemId, y: ElemId) -> &HeckeElt {
        &self.prods[y as usize][x as usize]
    }

    fn delta_of(&self, z: ElemId) -> Result<(u64, Int)> {
        match self.delta.get(z as usize) {
            Some(v) => Ok(v.clone()),
            None => delta_n(self.cp.table(), z),
        }
    }

    /// `z ∈ 𝒟`, i.e. `a(z) = Δ(z)`.
    fn in_cal_d(&self, z: ElemId) -> Result<bool> {
        Ok(self.delta_of(z)?.0 == self.a.get(z))
    }

    /// `γ_{x,y,z}` for `x, y` in the ball.
    pub fn gamma(&self, x: ElemId, y: ElemId, z: ElemId) -> Int {
        let zi = self.sys().inverse_id(z);
        self.h(x, y).get(zi).map_or(Int::ZERO, |h| h.coeff(self.a.get(zi) as i32))
    }

    /// Nonzero `γ_{x,y,z}` for fixed `x, y`.
    fn gammas(&self, x: ElemId, y: ElemId) -> Vec<(ElemId, Int)> {
        let sys = self.sys();
        self.h(x, y)
            .iter()
            .filter_map(|(&zi, h)| {
                let g = h.coeff(self.a.get(zi) as i32);
                (!g.is_zero()).then(|| (sys.inverse_id(zi), g))
            })
            .collect()
    }

    fn graph(&self, f: Flavor) -> &CellGraph {
        match f {
            Flavor::Left => &self.graphs[0],
            Flavor::Right => &self.graphs[1],
            Flavor::TwoSided => &self.graphs[2],
        }
    }

    fn report(&self, k: u8, checked: usize, counterexample: Option<String>, mut caveats: Vec<String>) -> PReport {
        if !self.a.is_exact() {
            caveats.push("a-values are the predicted a_pred, not computed".into());
        }
        PReport {
            statement: format!("P{k}"),
            radius: self.radius,
            result: if counterexample.is_some() { Outcome::Fail } else { Outcome::Pass },
            checked,
            counterexample,
            caveats,
        }
    }

    fn truncation(&self) -> Vec<String> {
        if self.sys().is_finite_group() && self.sys().is_complete() && self.radius >= self.sys().max_length() {
            Vec::new()
        } else {
            vec![format!("quantifiers restricted to ball({})", self.radius)]
        }
    }

    fn cell_caveats(&self) -> Vec<String> {
        if self.sys().is_complete() && self.graphs[0].radius >= self.sys().max_length() {
            return Vec::new();
        }
        vec![format!(
            "cell relations certified by reachability inside ball({}); a missing certificate is reported as a counterexample",
            self.graphs[0].radius
        )]
    }

    pub fn check(&self, k: u8) -> Result<PReport> {
        match k {
            1 => self.p1(),
            2 => self.p2(),
            3 => self.p3(),
            4 => self.p4(),
            5 => self.p5(),
            6 => self.p6(),
            7 => self.p7(),
            8 => self.p8(),
            9 => self.p_same_a(9, Flavor::Left),
            10 => self.p_same_a(10, Flavor::Right),
            11 => self.p_same_a(11, Flavor::TwoSided),
            12 => self.p12(),
            13 => self.p13(),
            14 => self.p14(),
            15 => self.p15(),
            _ => Err(Error::Parse(format!("no statement P{k}"))),
        }
    }

    fn p1(&self) -> Result<PReport> {
        for w in 0..self.end {
            let (delta, _) = self.delta_of(w)?;
            if self.a.get(w) > delta {
                let ce = format!("a({}) = {} > Δ = {delta}", self.name(w), self.a.get(w));
                return Ok(self.report(1, w as usize + 1, Some(ce), vec![]));
            }
        }
        Ok(self.report(1, self.end as usize, None, vec![]))
    }

    fn p2(&self) -> Result<PReport> {
        let sys = self.sys();
        let mut checked = 0;
        for x in 0..self.end {
            for y in 0..self.end {
                for (z, _) in self.gammas(x, y) {
                    checked += 1;
                    if self.in_cal_d(z)? && x != sys.inverse_id(y) {
                        let ce = format!("γ_{{{},{},{}}} ≠ 0", self.name(x), self.name(y), self.name(z));
                        return Ok(self.report(2, checked, Some(ce), self.truncation()));
                    }
                }
            }
        }
        Ok(self.report(2, checked, None, self.truncation()))
    }

    /// The `z ∈ 𝒟` with `γ_{y⁻¹,y,z} ≠ 0`, with the coefficients.
    fn p3_set(&self, y: ElemId) -> Result<Vec<(ElemId, Int)>> {
        let yi = self.sys().inverse_id(y);
        let mut out = Vec::new();
        for (z, g) in self.gammas(yi, y) {
            if self.in_cal_d(z)? {
                out.push((z, g));
            }
        }
        Ok(out)
    }

    fn p3(&self) -> Result<PReport> {
        for y in 0..self.end {
            let zs = self.p3_set(y)?;
            if zs.len() != 1 {
                let names: Vec<String> = zs.iter().map(|(z, _)| self.name(*z)).collect();
                let ce = format!("y = {}: distinguished z with γ_{{y⁻¹,y,z}} ≠ 0: {names:?}", self.name(y));
                return Ok(self.report(3, y as usize + 1, Some(ce), vec![]));
            }
        }
        Ok(self.report(3, self.end as usize, None, vec![]))
    }

    fn p4(&self) -> Result<PReport> {
        let g = self.graph(Flavor::TwoSided);
        let mut checked = 0;
        for w in 0..self.end {
            for (w2, &below) in g.below(w).iter().enumerate() {
                if below {
                    checked += 1;
                    if self.a.get(w2 as ElemId) < self.a.get(w) {
                        let ce = format!("{} ≼_LR {} but a drops", self.name(w2 as ElemId), self.name(w));
                        return Ok(self.report(4, checked, Some(ce), self.truncation()));
                    }
                }
            }
        }
        Ok(self.report(4, checked, None, self.truncation()))
    }

    fn p5(&self) -> Result<PReport> {
        let mut checked = 0;
        for y in 0..self.end {
            for (z, g) in self.p3_set(y)? {
                checked += 1;
                let n_z = self.delta_of(z)?.1;
                if g != n_z || !g.abs().is_one() {
                    let ce = format!("γ_{{y⁻¹,y,z}} = {g}, n_z = {n_z} for y = {}, z = {}", self.name(y), self.name(z));
                    return Ok(self.report(5, checked, Some(ce), self.truncation()));
                }
            }
        }
        Ok(self.report(5, checked, None, self.truncation()))
    }

    fn p6(&self) -> Result<PReport> {
        let sys = self.sys();
        let mut checked = 0;
        for z in 0..self.end {
            if self.in_cal_d(z)? {
                checked += 1;
                if sys.inverse_id(z) != z {
                    let ce = format!("{} is distinguished but not an involution", self.name(z));
                    return Ok(self.report(6, checked, Some(ce), self.truncation()));
                }
            }
        }
        Ok(self.report(6, checked, None, self.truncation()))
    }

    fn p7(&self) -> Result<PReport> {
        let mut checked = 0;
        for x in 0..self.end {
            for y in 0..self.end {
                for (z, g) in self.gammas(x, y) {
                    if z >= self.end {
                        continue;
                    }
                    checked += 1;
                    if self.gamma(y, z, x) != g || self.gamma(z, x, y) != g {
                        let ce = format!("γ not cyclic on ({}, {}, {})", self.name(x), self.name(y), self.name(z));
                        return Ok(self.report(7, checked, Some(ce), self.truncation()));
                    }
                }
            }
        }
        Ok(self.report(7, checked, None, self.truncation()))
    }

    fn p8(&self) -> Result<PReport> {
        let sys = self.sys();
        let g = self.graph(Flavor::Left);
        let inv = |w: ElemId| sys.inverse_id(w);
        let mut checked = 0;
        for x in 0..self.end {
            for y in 0..self.end {
                for (z, _) in self.gammas(x, y) {
                    if z >= self.end {
                        continue;
                    }
                    checked += 1;
                    if !(g.same_class(x, inv(y)) && g.same_class(y, inv(z)) && g.same_class(z, inv(x))) {
                        let ce = format!("γ_{{{},{},{}}} ≠ 0 without left-cell certificates", self.name(x), self.name(y), self.name(z));
                        return Ok(self.report(8, checked, Some(ce), self.cell_caveats()));
                    }
                }
            }
        }
        let mut caveats = self.truncation();
        caveats.extend(self.cell_caveats());
        Ok(self.report(8, checked, None, caveats))
    }

    /// P9–P11: `w' ≼ w` with equal a-values implies `w' ∼ w`.
    fn p_same_a(&self, k: u8, f: Flavor) -> Result<PReport> {
        let g = self.graph(f);
        let mut checked = 0;
        for w in 0..self.end {
            let below = g.below(w);
            for w2 in 0..self.end {
                if below[w2 as usize] && self.a.get(w2) == self.a.get(w) {
                    checked += 1;
                    if !g.same_class(w, w2) {
                        let ce = format!("{} ≼ {} with equal a, not certified equivalent", self.name(w2), self.name(w));
                        return Ok(self.report(k, checked, Some(ce), self.cell_caveats()));
                    }
                }
            }
        }
        let mut caveats = self.truncation();
        caveats.extend(self.cell_caveats());
        Ok(self.report(k, checked, None, caveats))
    }

    fn p12(&self) -> Result<PReport> {
        let sys = self.sys();
        let weights = self.cp.table().algebra().weights();
        let mut checked = 0;
        let mut caveats = self.truncation();
        let full = sys.all_gens();
        for mask in 1..full.0 {
            let j = GenSet(mask);
            let sub = Arc::new(sys.parabolic(j)?);
            let wsub = WeightFunction::new(j.iter().map(|s| weights.of(s)).collect())?;
            let local: Vec<u64> = if sub.is_finite_group() {
                let table = KLTable::new(Arc::new(crate::hecke::HeckeAlgebra::new(sub.clone(), wsub)?));
                let cp = CProducts::new(&table);
                match ASource::exact(&cp)? {
                    ASource::Exact(v) => v,
                    ASource::Predicted(_) => unreachable!(),
                }
            } else {
                caveats.push(format!("a-values in the infinite parabolic {} are predicted", sub.describe()));
                let cells = Cells::new(sub.clone(), wsub)?;
                (0..sub.size() as ElemId).map(|w| cells.a_pred(w).unwrap()).collect()
            };
            for y in 0..self.end {
                let el = sys.element(y);
                if !el.word().iter().all(|c| sub.gen_index(*c).is_some()) {
                    continue;
                }
                let Ok(yl) = sub.id(el) else { continue };
                checked += 1;
                if local[yl as usize] != self.a.get(y) {
                    let ce = format!("a({el}) = {} in W but {} in {}", self.a.get(y), local[yl as usize], sub.describe());
                    return Ok(self.report(12, checked, Some(ce), caveats));
                }
            }
        }
        Ok(self.report(12, checked, None, caveats))
    }

    fn p13(&self) -> Result<PReport> {
        let g = self.graph(Flavor::Left);
        let mut checked = 0;
        let mut caveats = self.truncation();
        caveats.extend(self.cell_caveats());
        let mut missing = 0;
        for class in &g.sccs {
            if class[0] >= self.end {
                continue;
            }
            let mut ds = Vec::new();
            for &z in class {
                if self.in_cal_d(z)? {
                    ds.push(z);
                }
            }
            checked += 1;
            match ds[..] {
                [] => missing += 1,
                [z] => {
                    for &y in class.iter().filter(|&&y| y < self.end) {
                        if self.gamma(self.sys().inverse_id(y), y, z).is_zero() {
                            let ce = format!("γ_{{y⁻¹,y,z}} = 0 for y = {}, z = {}", self.name(y), self.name(z));
                            return Ok(self.report(13, checked, Some(ce), caveats));
                        }
                    }
                }
                _ => {
                    let names: Vec<String> = ds.iter().map(|&z| self.name(z)).collect();
                    let ce = format!("left class contains several distinguished elements {names:?}");
                    return Ok(self.report(13, checked, Some(ce), caveats));
                }
            }
        }
        if missing > 0 {
            caveats.push(format!("{missing} left classes meet no distinguished element inside the graph ball"));
        }
        Ok(self.report(13, checked, None, caveats))
    }

    fn p14(&self) -> Result<PReport> {
        let g = self.graph(Flavor::TwoSided);
        for w in 0..self.end {
            if !g.same_class(w, self.sys().inverse_id(w)) {
                let ce = format!("{} and its inverse not certified two-sided equivalent", self.name(w));
                return Ok(self.report(14, w as usize + 1, Some(ce), self.cell_caveats()));
            }
        }
        Ok(self.report(14, self.end as usize, None, self.cell_caveats()))
    }

    /// `Σ_z h_{w,x,z} ⊗ h_{z,w',y} = Σ_z h_{w,z,y} ⊗ h_{x,w',z}` for `a(x) = a(y)`.
    /// On an infinite group only `(w, x, w')` whose products stay in the ball
    /// are used, so both sums are complete.
    fn p15(&self) -> Result<PReport> {
        let sys = self.sys();
        let len = |w: ElemId| sys.length_of(w);
        let complete = self.truncation().is_empty();
        let r = self.radius;
        let mut checked = 0;
        for x in 0..self.end {
            for w in 0..self.end {
                if !complete && len(w) + len(x) > r {
                    continue;
                }
                for w2 in 0..self.end {
                    if !complete && len(x) + len(w2) > r {
                        continue;
                    }
                    let mut lhs: BTreeMap<ElemId, Tensor> = BTreeMap::new();
                    for (&z, hz) in self.h(w, x) {
                        for (&y, hy) in self.h(z, w2) {
                            add_tensor(lhs.entry(y).or_default(), hz, hy);
                        }
                    }
                    let mut rhs: BTreeMap<ElemId, Tensor> = BTreeMap::new();
                    for (&z, hz) in self.h(x, w2) {
                        for (&y, hy) in self.h(w, z) {
                            add_tensor(rhs.entry(y).or_default(), hy, hz);
                        }
                    }
                    let empty = Tensor::new();
                    for y in 0..self.end {
                        if self.a.get(y) != self.a.get(x) {
                            continue;
                        }
                        checked += 1;
                        if lhs.get(&y).unwrap_or(&empty) != rhs.get(&y).unwrap_or(&empty) {
                            let ce = format!(
                                "w = {}, x = {}, w' = {}, y = {}",
                                self.name(w),
                                self.name(x),
                                self.name(w2),
                                self.name(y)
                            );
                            return Ok(self.report(15, checked, Some(ce), self.truncation()));
                        }
                    }
                }
            }
        }
        let mut caveats = self.truncation();
        if !complete {
            caveats.push(format!("only w, x, w' with l(w)+l(x) ≤ {r} and l(x)+l(w') ≤ {r}"));
        }
        Ok(self.report(15, checked, None, caveats))
    }
}
