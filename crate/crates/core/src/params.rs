//! a′ as linear forms in `a = L(r)`, `b = L(s)`, `c = L(t)`, the hyperplanes
//! `a′(d1) = a′(d2)` and their classification, for hyperbolic groups
//! `r - s - t` with `m_rt = 2`.
//!
//! All classification is exact over `Q`; the plane pictures use
//! `(x, y) = (a/b, c/b)`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::fs::File;
use std::io::Write;
use std::ops::{Add, Mul, Neg, Sub};
use std::path::Path;

use num_integer::Integer;
use num_rational::Rational64;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::cells::{d_set, twocells_case, DSym, TwoCellParams, Verdict};
use crate::coxeter::{Bond, CoxeterSystem, Element, WeightFunction};
use crate::error::{Error, Result};

pub type Q = Rational64;

mod qstr {
    use super::Q;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &Q, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(q)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Q, D::Error> {
        String::deserialize(d)?.parse().map_err(|e| D::Error::custom(format!("{e:?}")))
    }
}

fn q(n: i64) -> Q {
    Q::from_integer(n)
}

/// `α·a + β·b + γ·c`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LinearForm {
    #[serde(with = "qstr")]
    pub alpha: Q,
    #[serde(with = "qstr")]
    pub beta: Q,
    #[serde(with = "qstr")]
    pub gamma: Q,
}

impl LinearForm {
    pub fn new(alpha: Q, beta: Q, gamma: Q) -> LinearForm {
        LinearForm { alpha, beta, gamma }
    }

    pub fn int(alpha: i64, beta: i64, gamma: i64) -> LinearForm {
        LinearForm::new(q(alpha), q(beta), q(gamma))
    }

    pub fn zero() -> LinearForm {
        LinearForm::int(0, 0, 0)
    }

    pub fn is_zero(&self) -> bool {
        self.alpha.is_zero() && self.beta.is_zero() && self.gamma.is_zero()
    }

    pub fn eval(&self, a: Q, b: Q, c: Q) -> Q {
        self.alpha * a + self.beta * b + self.gamma * c
    }

    /// Value at `(a, b, c) = (x, 1, y)`.
    pub fn at(&self, p: Point) -> Q {
        self.eval(p.x, Q::one(), p.y)
    }

    /// The positive multiple with coprime integer coefficients and first
    /// nonzero coefficient positive; identifies the hyperplane `form = 0`.
    pub fn normalized(&self) -> LinearForm {
        if self.is_zero() {
            return *self;
        }
        let cs = [self.alpha, self.beta, self.gamma];
        let l = cs.iter().fold(1i64, |acc, c| acc.lcm(c.denom()));
        let ints: Vec<i64> = cs.iter().map(|c| (c * q(l)).to_integer()).collect();
        let g = ints.iter().fold(0i64, |acc, v| acc.gcd(v));
        let sign = if ints.iter().find(|v| **v != 0).unwrap() < &0 { -1 } else { 1 };
        LinearForm::int(sign * ints[0] / g, sign * ints[1] / g, sign * ints[2] / g)
    }
}

impl Add for LinearForm {
    type Output = LinearForm;
    fn add(self, o: LinearForm) -> LinearForm {
        LinearForm::new(self.alpha + o.alpha, self.beta + o.beta, self.gamma + o.gamma)
    }
}

impl Sub for LinearForm {
    type Output = LinearForm;
    fn sub(self, o: LinearForm) -> LinearForm {
        LinearForm::new(self.alpha - o.alpha, self.beta - o.beta, self.gamma - o.gamma)
    }
}

impl Neg for LinearForm {
    type Output = LinearForm;
    fn neg(self) -> LinearForm {
        LinearForm::new(-self.alpha, -self.beta, -self.gamma)
    }
}

impl Mul<LinearForm> for Q {
    type Output = LinearForm;
    fn mul(self, f: LinearForm) -> LinearForm {
        LinearForm::new(self * f.alpha, self * f.beta, self * f.gamma)
    }
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (c, v) in [(self.alpha, "a"), (self.beta, "b"), (self.gamma, "c")] {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else if first { "" } else { "+" };
            let mag = c.abs();
            if mag.is_one() {
                write!(f, "{sign}{v}")?;
            } else if mag.is_integer() {
                write!(f, "{sign}{mag}{v}")?;
            } else {
                write!(f, "{sign}({mag}){v}")?;
            }
            first = false;
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Rel {
    #[serde(rename = "<")]
    Lt,
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = "=")]
    Eq,
    #[serde(rename = ">=")]
    Ge,
    #[serde(rename = ">")]
    Gt,
}

impl Rel {
    fn of(v: Q) -> Rel {
        if v.is_negative() {
            Rel::Lt
        } else if v.is_zero() {
            Rel::Eq
        } else {
            Rel::Gt
        }
    }

    fn holds(self, v: Q) -> bool {
        match self {
            Rel::Lt => v.is_negative(),
            Rel::Le => !v.is_positive(),
            Rel::Eq => v.is_zero(),
            Rel::Ge => !v.is_negative(),
            Rel::Gt => v.is_positive(),
        }
    }

    fn symbol(self) -> &'static str {
        match self {
            Rel::Lt => "<",
            Rel::Le => "<=",
            Rel::Eq => "=",
            Rel::Ge => ">=",
            Rel::Gt => ">",
        }
    }
}

/// Relative position of `a` and `c` with respect to `b`; decides which
/// twisted elements `s·w_rs`, `r·w_rs`, `s·w_st`, `t·w_st` exist.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Chamber {
    pub a_vs_b: Rel,
    pub c_vs_b: Rel,
}

impl Chamber {
    pub fn all() -> Vec<Chamber> {
        let rels = [Rel::Lt, Rel::Eq, Rel::Gt];
        rels.iter().flat_map(|&a_vs_b| rels.iter().map(move |&c_vs_b| Chamber { a_vs_b, c_vs_b })).collect()
    }

    pub fn of(a: Q, b: Q, c: Q) -> Chamber {
        Chamber { a_vs_b: Rel::of(a - b), c_vs_b: Rel::of(c - b) }
    }

    fn constraints(&self) -> [(LinearForm, Rel); 2] {
        [(LinearForm::int(1, -1, 0), self.a_vs_b), (LinearForm::int(0, -1, 1), self.c_vs_b)]
    }
}

impl fmt::Display for Chamber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "a{}b c{}b", self.a_vs_b.symbol(), self.c_vs_b.symbol())
    }
}

/// Weight of the alternating word of length `m` starting with the first
/// letter, whose weight variable is `first`.
fn alternating(m: u32, first: LinearForm, second: LinearForm) -> LinearForm {
    q(m.div_ceil(2) as i64) * first + q((m / 2) as i64) * second
}

fn even_half(m: Bond) -> Option<i64> {
    match m {
        Bond::Finite(m) if m >= 4 && m % 2 == 0 => Some(m as i64 / 2),
        _ => None,
    }
}

/// `a′(d)` as a linear form, valid throughout `chamber`.
pub fn aprime_form(d: DSym, m_rs: Bond, m_st: Bond, chamber: Chamber) -> Result<LinearForm> {
    let (a, b, c) = (LinearForm::int(1, 0, 0), LinearForm::int(0, 1, 0), LinearForm::int(0, 0, 1));
    let undefined = || Error::UndefinedInChamber(format!("{d} (m_rs={m_rs}, m_st={m_st}, {chamber})"));
    // a′(x·w_J) = L(high) + (m/2 − 1)(L(high) − L(low))
    let twisted = |m: Bond, high: LinearForm, low: LinearForm, rel: Rel, want: Rel| {
        let k = even_half(m).ok_or_else(undefined)?;
        if rel != want {
            return Err(undefined());
        }
        Ok(high + q(k - 1) * (high - low))
    };
    match d {
        DSym::E => Ok(LinearForm::zero()),
        DSym::R => Ok(a),
        DSym::S => Ok(b),
        DSym::T => Ok(c),
        DSym::RT => Ok(a + c),
        DSym::Wrs => m_rs.finite().map(|m| alternating(m, a, b)).ok_or_else(undefined),
        DSym::Wst => m_st.finite().map(|m| alternating(m, b, c)).ok_or_else(undefined),
        DSym::SWrs => twisted(m_rs, a, b, chamber.a_vs_b, Rel::Gt),
        DSym::RWrs => twisted(m_rs, b, a, chamber.a_vs_b, Rel::Lt),
        DSym::SWst => twisted(m_st, c, b, chamber.c_vs_b, Rel::Gt),
        DSym::TWst => twisted(m_st, b, c, chamber.c_vs_b, Rel::Lt),
    }
}

/// The elements of `D` present in `chamber`, with their forms.
pub fn chamber_forms(m_rs: Bond, m_st: Bond, chamber: Chamber) -> Vec<(DSym, LinearForm)> {
    DSym::ALL.into_iter().filter_map(|d| aprime_form(d, m_rs, m_st, chamber).ok().map(|f| (d, f))).collect()
}

/// `N ↦ D_N` for rational weights, by symbol.
pub fn symbolic_levels(m_rs: Bond, m_st: Bond, a: Q, b: Q, c: Q) -> BTreeMap<Q, Vec<DSym>> {
    let mut out: BTreeMap<Q, Vec<DSym>> = BTreeMap::new();
    for (d, f) in chamber_forms(m_rs, m_st, Chamber::of(a, b, c)) {
        out.entry(f.eval(a, b, c)).or_default().push(d);
    }
    out
}

/// `N ↦ D_N` for a concrete system and weight function.
pub fn d_levels(sys: &CoxeterSystem, weights: &WeightFunction) -> Result<BTreeMap<u64, Vec<Element>>> {
    let ds = d_set(sys, weights)?;
    let mut out: BTreeMap<u64, Vec<Element>> = BTreeMap::new();
    for e in ds.entries {
        out.entry(e.aprime).or_default().push(e.element);
    }
    Ok(out)
}

fn classify(d1: DSym, d2: DSym, m_rs: Bond, m_st: Bond, a: Q, b: Q, c: Q, n: Q) -> Verdict {
    twocells_case(d1, d2, &TwoCellParams { a, b, c, n, m_rs, m_st })
}

/// Values of `a/b` at which two elements of `D` with equal `a′` lie in the
/// same two-sided cell, for `m_rs = 2m`, `m_st = k` and `b = c`.
pub fn critical_values_1d(m: u32, k: u32) -> Vec<Q> {
    let (m_rs, m_st) = (Bond::Finite(2 * m), Bond::Finite(k));
    let one = Q::one();
    let mut out = BTreeSet::new();
    for a_vs_b in [Rel::Lt, Rel::Eq, Rel::Gt] {
        let chamber = Chamber { a_vs_b, c_vs_b: Rel::Eq };
        let forms = chamber_forms(m_rs, m_st, chamber);
        for (i, &(d1, f1)) in forms.iter().enumerate() {
            for &(d2, f2) in &forms[i + 1..] {
                // (f1 − f2)(x, 1, 1) = slope·x + rest
                let h = f1 - f2;
                let (slope, rest) = (h.alpha, h.beta + h.gamma);
                if slope.is_zero() {
                    continue;
                }
                let x = -rest / slope;
                if !x.is_positive() || !a_vs_b.holds(x - one) {
                    continue;
                }
                if classify(d1, d2, m_rs, m_st, x, one, one, f1.eval(x, one, one)).is_same() {
                    out.insert(x);
                }
            }
        }
    }
    out.into_iter().collect()
}

/// A point `(a/b, c/b)` of the plane.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Point {
    #[serde(with = "qstr")]
    pub x: Q,
    #[serde(with = "qstr")]
    pub y: Q,
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Endpoint {
    pub point: Point,
    pub closed: bool,
}

/// A connected piece of a line; `None` ends are unbounded.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Segment {
    pub from: Option<Endpoint>,
    pub to: Option<Endpoint>,
}

impl fmt::Display for Segment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.from {
            Some(e) => write!(f, "{}{}", if e.closed { "[" } else { "(" }, e.point)?,
            None => f.write_str("(inf")?,
        }
        f.write_str(" .. ")?;
        match self.to {
            Some(e) => write!(f, "{}{}", e.point, if e.closed { "]" } else { ")" }),
            None => f.write_str("inf)"),
        }
    }
}

/// A linear inequality `form rel 0` in `(a, b, c)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Condition {
    pub form: LinearForm,
    pub rel: Rel,
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} 0", self.form, self.rel.symbol())
    }
}

/// One segment of a hyperplane `a′(d1) = a′(d2)` inside a chamber.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriticalLocus {
    pub d1: DSym,
    pub d2: DSym,
    /// `a′(d1) − a′(d2)`, normalized.
    pub form: LinearForm,
    pub chamber: Chamber,
    /// Extra conditions cutting the segment out of the chamber.
    pub conditions: Vec<Condition>,
    pub segment: Segment,
    pub verdict: Verdict,
    /// A rational point inside the segment.
    pub sample: Point,
}

impl CriticalLocus {
    /// Same two-sided cell along the segment.
    pub fn critical(&self) -> bool {
        self.verdict.is_same()
    }
}

/// A line in the `(x, y)` plane with a rational parameter.
#[derive(Clone, Copy)]
struct Line {
    base: Point,
    dir: Point,
}

impl Line {
    fn of(f: LinearForm) -> Option<Line> {
        let zero = Q::zero();
        if !f.gamma.is_zero() {
            Some(Line {
                base: Point { x: zero, y: -f.beta / f.gamma },
                dir: Point { x: Q::one(), y: -f.alpha / f.gamma },
            })
        } else if !f.alpha.is_zero() {
            Some(Line { base: Point { x: -f.beta / f.alpha, y: zero }, dir: Point { x: zero, y: Q::one() } })
        } else {
            None
        }
    }

    fn at(&self, t: Q) -> Point {
        Point { x: self.base.x + t * self.dir.x, y: self.base.y + t * self.dir.y }
    }

    /// `g(at(t)) = p·t + q`.
    fn restrict(&self, g: LinearForm) -> (Q, Q) {
        let q0 = g.at(self.base);
        (g.at(self.at(Q::one())) - q0, q0)
    }
}

/// A convex subset of `Q`: `None` bounds are infinite, flags mark closed ends.
#[derive(Clone, Copy, Debug, PartialEq)]
struct Interval {
    lo: Option<(Q, bool)>,
    hi: Option<(Q, bool)>,
}

impl Interval {
    const ALL: Interval = Interval { lo: None, hi: None };

    fn is_empty(&self) -> bool {
        match (self.lo, self.hi) {
            (Some((l, lc)), Some((h, hc))) => l > h || (l == h && !(lc && hc)),
            _ => false,
        }
    }

    fn raise(&mut self, v: Q, closed: bool) {
        match self.lo {
            Some((l, lc)) if l > v || (l == v && !lc) => {}
            _ => self.lo = Some((v, closed)),
        }
    }

    fn lower(&mut self, v: Q, closed: bool) {
        match self.hi {
            Some((h, hc)) if h < v || (h == v && !hc) => {}
            _ => self.hi = Some((v, closed)),
        }
    }

    /// Intersects with `{t : p·t + q rel 0}`; `false` if the result is empty.
    fn constrain(&mut self, (p, q): (Q, Q), rel: Rel) -> bool {
        if p.is_zero() {
            if !rel.holds(q) {
                self.lo = Some((Q::one(), false));
                self.hi = Some((Q::zero(), false));
            }
            return !self.is_empty();
        }
        let root = -q / p;
        let up = p.is_positive();
        match rel {
            Rel::Eq => {
                self.raise(root, true);
                self.lower(root, true);
            }
            Rel::Gt | Rel::Ge if up => self.raise(root, rel == Rel::Ge),
            Rel::Gt | Rel::Ge => self.lower(root, rel == Rel::Ge),
            Rel::Lt | Rel::Le if up => self.lower(root, rel == Rel::Le),
            Rel::Lt | Rel::Le => self.raise(root, rel == Rel::Le),
        }
        !self.is_empty()
    }

    fn is_point(&self) -> bool {
        matches!((self.lo, self.hi), (Some((l, _)), Some((h, _))) if l == h)
    }

    fn sample(&self) -> Q {
        match (self.lo, self.hi) {
            (Some((l, _)), Some((h, _))) => (l + h) / q(2),
            (Some((l, _)), None) => l + Q::one(),
            (None, Some((h, _))) => h - Q::one(),
            (None, None) => Q::zero(),
        }
    }
}

fn positivity() -> [(LinearForm, Rel); 2] {
    [(LinearForm::int(1, 0, 0), Rel::Gt), (LinearForm::int(0, 0, 1), Rel::Gt)]
}

fn segment_of(line: &Line, iv: &Interval) -> Segment {
    // parameters increase along dir; both parametrizations have dir.x ≥ 0
    let end = |b: Option<(Q, bool)>| b.map(|(t, closed)| Endpoint { point: line.at(t), closed });
    Segment { from: end(iv.lo), to: end(iv.hi) }
}

/// All one-dimensional pieces of `a′(d1) = a′(d2)` in the positive quadrant
/// for `m_rs = 2m`, `m_st = 2n`, classified by the two-sided cell case list.
/// A hyperplane is cut at chamber walls and where `a + c − N` changes sign.
pub fn critical_lines_2d(m: u32, n: u32) -> Vec<CriticalLocus> {
    let (m_rs, m_st) = (Bond::Finite(2 * m), Bond::Finite(2 * n));
    let mut out = Vec::new();
    for chamber in Chamber::all() {
        let forms = chamber_forms(m_rs, m_st, chamber);
        for (i, &(d1, f1)) in forms.iter().enumerate() {
            for &(d2, f2) in &forms[i + 1..] {
                let h = f1 - f2;
                let Some(line) = Line::of(h) else { continue };
                let mut iv = Interval::ALL;
                let ok = chamber.constraints().iter().chain(positivity().iter()).all(|&(g, rel)| iv.constrain(line.restrict(g), rel));
                if !ok || iv.is_point() {
                    continue;
                }
                let split = LinearForm::int(1, 0, 1) - f1;
                let pieces: Vec<(Option<Condition>, Interval)> = if line.restrict(split).0.is_zero() {
                    vec![(None, iv)]
                } else {
                    [Rel::Gt, Rel::Le]
                        .into_iter()
                        .filter_map(|rel| {
                            let mut piece = iv;
                            (piece.constrain(line.restrict(split), rel) && !piece.is_point())
                                .then_some((Some(Condition { form: split, rel }), piece))
                        })
                        .collect()
                };
                let classified: Vec<(Option<Condition>, Interval, Verdict, Point)> = pieces
                    .into_iter()
                    .map(|(cond, piece)| {
                        let p = line.at(piece.sample());
                        let v = classify(d1, d2, m_rs, m_st, p.x, Q::one(), p.y, f1.at(p));
                        (cond, piece, v, p)
                    })
                    .collect();
                let uniform = classified.windows(2).all(|w| w[0].2 == w[1].2);
                let emit = |conditions: Vec<Condition>, piece: &Interval, verdict: Verdict, sample: Point| CriticalLocus {
                    d1,
                    d2,
                    form: h.normalized(),
                    chamber,
                    conditions,
                    segment: segment_of(&line, piece),
                    verdict,
                    sample,
                };
                if uniform {
                    let p = line.at(iv.sample());
                    out.push(emit(Vec::new(), &iv, classified[0].2, p));
                } else {
                    for (cond, piece, v, p) in &classified {
                        out.push(emit(cond.iter().copied().collect(), piece, *v, *p));
                    }
                }
            }
        }
    }
    out.sort_by(|x, y| (x.d1, x.d2, x.chamber).cmp(&(y.d1, y.d2, y.chamber)).then_with(|| x.sample.cmp(&y.sample)));
    out
}

/// A point where at least three elements of `D` share their `a′` value.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TriplePoint {
    pub point: Point,
    /// `N / b`.
    #[serde(with = "qstr")]
    pub level: Q,
    pub members: Vec<DSym>,
}

/// Points of the `(a/b, c/b)` plane with `|D_N| ≥ 3`, for `m_rs = 2m`,
/// `m_st = 2n`, found by solving every triple of forms in every chamber.
pub fn triple_points(m: u32, n: u32) -> Vec<TriplePoint> {
    let (m_rs, m_st) = (Bond::Finite(2 * m), Bond::Finite(2 * n));
    let one = Q::one();
    let mut found: BTreeMap<Point, TriplePoint> = BTreeMap::new();
    for chamber in Chamber::all() {
        let forms = chamber_forms(m_rs, m_st, chamber);
        for (i, &(_, f1)) in forms.iter().enumerate() {
            for (j, &(_, f2)) in forms.iter().enumerate().skip(i + 1) {
                for &(_, f3) in &forms[j + 1..] {
                    // α x + γ y = −β for both differences
                    let (g, h) = (f1 - f2, f1 - f3);
                    let det = g.alpha * h.gamma - g.gamma * h.alpha;
                    if det.is_zero() {
                        continue;
                    }
                    let x = (-g.beta * h.gamma + h.beta * g.gamma) / det;
                    let y = (-h.beta * g.alpha + g.beta * h.alpha) / det;
                    let p = Point { x, y };
                    if !x.is_positive() || !y.is_positive() || Chamber::of(x, one, y) != chamber {
                        continue;
                    }
                    let level = f1.at(p);
                    let members = symbolic_levels(m_rs, m_st, x, one, y).remove(&level).unwrap_or_default();
                    found.insert(p, TriplePoint { point: p, level, members });
                }
            }
        }
    }
    found.into_values().collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExportFormat {
    Svg,
    Csv,
    Json,
}

impl std::str::FromStr for ExportFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<ExportFormat> {
        match s {
            "svg" => Ok(ExportFormat::Svg),
            "csv" => Ok(ExportFormat::Csv),
            "json" => Ok(ExportFormat::Json),
            _ => Err(Error::Parse(format!("unknown export format {s:?}"))),
        }
    }
}

/// Writes the loci as SVG (window `[0,5]²`), CSV or JSON.
pub fn export_arrangement(loci: &[CriticalLocus], format: ExportFormat, path: &Path) -> Result<()> {
    match format {
        ExportFormat::Svg => File::create(path)?.write_all(render_svg(loci, &[], 5).as_bytes())?,
        ExportFormat::Csv => {
            let mut w = csv::Writer::from_path(path).map_err(csv_error)?;
            w.write_record(["d1", "d2", "alpha", "beta", "gamma", "chamber", "critical", "case", "conditions", "segment"])
                .map_err(csv_error)?;
            for l in loci {
                let case = match l.verdict {
                    Verdict::Same => String::new(),
                    Verdict::Different { case, mirrored } => format!("{case}{}", if mirrored { "'" } else { "" }),
                };
                let conditions: Vec<String> = l.conditions.iter().map(|c| c.to_string()).collect();
                w.write_record([
                    l.d1.name().to_string(),
                    l.d2.name().to_string(),
                    l.form.alpha.to_string(),
                    l.form.beta.to_string(),
                    l.form.gamma.to_string(),
                    l.chamber.to_string(),
                    l.critical().to_string(),
                    case,
                    conditions.join("; "),
                    l.segment.to_string(),
                ])
                .map_err(csv_error)?;
            }
            w.flush()?;
        }
        ExportFormat::Json => {
            let mut f = File::create(path)?;
            serde_json::to_writer_pretty(&mut f, loci).map_err(|e| Error::Io(e.into()))?;
            f.write_all(b"\n")?;
        }
    }
    Ok(())
}

fn csv_error(e: csv::Error) -> Error {
    Error::Io(std::io::Error::other(e))
}

fn to_f64(v: Q) -> f64 {
    *v.numer() as f64 / *v.denom() as f64
}

/// Solid lines for critical segments, dashed otherwise, clipped to
/// `[0, extent]²`; `points` are marked and labeled.
pub fn render_svg(loci: &[CriticalLocus], points: &[(String, Point)], extent: u32) -> String {
    const SIZE: f64 = 500.0;
    const PAD: f64 = 40.0;
    let e = q(extent as i64);
    let scale = SIZE / extent as f64;
    let px = |p: Point| (PAD + to_f64(p.x) * scale, PAD + SIZE - to_f64(p.y) * scale);
    let mut s = String::new();
    let total = SIZE + 2.0 * PAD;
    s += &format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{total}\" height=\"{total}\" viewBox=\"0 0 {total} {total}\" font-family=\"sans-serif\" font-size=\"10\">\n"
    );
    s += &format!("<line x1=\"{PAD}\" y1=\"{0}\" x2=\"{0}\" y2=\"{0}\" stroke=\"black\"/>\n", PAD + SIZE);
    s += &format!("<line x1=\"{PAD}\" y1=\"{PAD}\" x2=\"{PAD}\" y2=\"{}\" stroke=\"black\"/>\n", PAD + SIZE);
    s += &format!("<text x=\"{}\" y=\"{}\">a/b</text>\n", PAD + SIZE - 20.0, PAD + SIZE + 28.0);
    s += &format!("<text x=\"4\" y=\"{}\">c/b</text>\n", PAD - 8.0);
    for i in 0..=extent {
        let v = PAD + i as f64 * scale;
        s += &format!("<text x=\"{v}\" y=\"{}\" text-anchor=\"middle\">{i}</text>\n", PAD + SIZE + 14.0);
        s += &format!("<text x=\"{}\" y=\"{}\" text-anchor=\"end\">{i}</text>\n", PAD - 6.0, PAD + SIZE - i as f64 * scale + 3.0);
    }
    for l in loci {
        let Some(line) = Line::of(l.form) else { continue };
        let mut iv = Interval::ALL;
        let mut ok = l.chamber.constraints().iter().chain(positivity().iter()).all(|&(g, rel)| iv.constrain(line.restrict(g), rel));
        for c in &l.conditions {
            ok &= iv.constrain(line.restrict(c.form), c.rel);
        }
        for g in [LinearForm::new(-Q::one(), Q::zero(), Q::zero()), LinearForm::new(Q::zero(), Q::zero(), -Q::one())] {
            ok &= iv.constrain(line.restrict(g + LinearForm::new(Q::zero(), e, Q::zero())), Rel::Ge);
        }
        let (Some((t0, _)), Some((t1, _))) = (iv.lo, iv.hi) else { continue };
        if !ok || t0 == t1 {
            continue;
        }
        let ((x1, y1), (x2, y2)) = (px(line.at(t0)), px(line.at(t1)));
        let dash = if l.critical() { "" } else { " stroke-dasharray=\"4 3\"" };
        s += &format!("<line x1=\"{x1:.2}\" y1=\"{y1:.2}\" x2=\"{x2:.2}\" y2=\"{y2:.2}\" stroke=\"black\"{dash}/>\n");
        s += &format!("<text x=\"{:.2}\" y=\"{:.2}\">{},{}</text>\n", x2 + 2.0, y2 - 2.0, l.d1, l.d2);
    }
    for (name, p) in points {
        let (x, y) = px(*p);
        s += &format!("<circle cx=\"{x:.2}\" cy=\"{y:.2}\" r=\"3\"/>\n");
        s += &format!("<text x=\"{:.2}\" y=\"{:.2}\">{name}</text>\n", x + 4.0, y + 12.0);
    }
    s += "</svg>\n";
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Q {
        Q::new(n, d)
    }

    #[test]
    fn forms() {
        let any = Chamber { a_vs_b: Rel::Gt, c_vs_b: Rel::Eq };
        let f = Bond::Finite;
        assert_eq!(aprime_form(DSym::R, f(4), f(5), any).unwrap(), LinearForm::int(1, 0, 0));
        assert_eq!(aprime_form(DSym::SWrs, f(4), f(5), any).unwrap(), LinearForm::int(2, -1, 0));
        assert_eq!(aprime_form(DSym::SWrs, f(4), f(5), any).unwrap().eval(q(5), q(1), q(1)), q(9));
        assert_eq!(aprime_form(DSym::Wst, f(4), f(6), any).unwrap(), LinearForm::int(0, 3, 3));
        assert_eq!(aprime_form(DSym::Wrs, f(8), f(3), any).unwrap(), LinearForm::int(4, 4, 0));
        assert!(matches!(aprime_form(DSym::RWrs, f(4), f(5), any), Err(Error::UndefinedInChamber(_))));
        assert!(matches!(aprime_form(DSym::SWst, f(4), f(5), any), Err(Error::UndefinedInChamber(_))));
        assert!(matches!(aprime_form(DSym::Wrs, Bond::Infinite, f(5), any), Err(Error::UndefinedInChamber(_))));
    }

    #[test]
    fn normalization() {
        let f = LinearForm::new(r(-1, 2), r(3, 4), Q::zero());
        assert_eq!(f.normalized(), LinearForm::int(2, -3, 0));
        assert_eq!(f.to_string(), "-(1/2)a+(3/4)b");
        assert_eq!(LinearForm::int(2, -1, 1).to_string(), "2a-b+c");
    }

    #[test]
    fn intervals() {
        let mut iv = Interval::ALL;
        assert!(iv.constrain((q(1), q(-1)), Rel::Gt));
        assert!(iv.constrain((q(-2), q(6)), Rel::Ge));
        assert_eq!(iv, Interval { lo: Some((q(1), false)), hi: Some((q(3), true)) });
        assert_eq!(iv.sample(), q(2));
        assert!(!iv.constrain((q(1), q(-5)), Rel::Eq));
    }

    #[test]
    fn critical_value_examples() {
        assert_eq!(critical_values_1d(2, 5), vec![r(1, 2), q(1), r(3, 2), q(2), q(3), q(4)]);
        assert_eq!(critical_values_1d(4, 3), vec![r(1, 3), q(1), r(4, 3), r(3, 2), q(2)]);
    }
}
