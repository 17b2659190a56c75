//! Coxeter systems of rank at most 3: word problem, descents, Bruhat and weak
//! orders, parabolic longest elements.
//!
//! The group is materialized as a ball of the Cayley graph, built level by level.
//! Every element stores its ShortLex-least reduced word, its right and left
//! neighbours and both descent sets. A new element `y = x·s` is identified
//! through its right descent set: `t ≠ s` is a descent of `y` exactly when the
//! maximal `{s,t}`-alternating suffix of `x` has length `m_st − 1` and ends in
//! `t`. The pair `(min R(y), y·min R(y))` is then a unique key for `y`.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Index of an element inside a [`CoxeterSystem`]'s ball. Ids are assigned in
/// (length, ShortLex) order, so `ball_ids(R)` is a contiguous range.
pub type ElemId = u32;

pub(crate) const NONE: u32 = u32::MAX;

/// The order `m_st` of `st`; `Infinite` means no braid relation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Bond {
    Finite(u32),
    Infinite,
}

impl Bond {
    pub fn finite(self) -> Option<u32> {
        match self {
            Bond::Finite(m) => Some(m),
            Bond::Infinite => None,
        }
    }
}

impl FromStr for Bond {
    type Err = Error;
    fn from_str(s: &str) -> Result<Bond> {
        let s = s.trim();
        if matches!(s, "inf" | "∞" | "oo" | "infinity") {
            return Ok(Bond::Infinite);
        }
        match s.parse::<u32>() {
            Ok(m) if m >= 2 => Ok(Bond::Finite(m)),
            _ => Err(Error::Parse(format!("bad bond label {s:?} (expected an integer >= 2 or inf)"))),
        }
    }
}

impl fmt::Display for Bond {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bond::Finite(m) => write!(f, "{m}"),
            Bond::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for Bond {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Bond {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A group element, represented by its canonical (ShortLex-least) reduced word
/// spelled in generator labels. Ordering is (length, ShortLex).
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Element(Box<[u8]>);

impl Element {
    pub fn identity() -> Element {
        Element(Box::new([]))
    }

    /// Wraps a word that is already known to be canonical.
    pub(crate) fn from_canonical(word: Vec<u8>) -> Element {
        Element(word.into_boxed_slice())
    }

    pub fn word(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl Ord for Element {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.0.len(), &self.0).cmp(&(other.0.len(), &other.0))
    }
}

impl PartialOrd for Element {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            f.write_str("e")
        } else {
            f.write_str(std::str::from_utf8(&self.0).unwrap_or("?"))
        }
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Serialize for Element {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// A set of generators, as a bit mask over generator indices.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, Debug)]
pub struct GenSet(pub u8);

impl GenSet {
    pub fn single(s: usize) -> GenSet {
        GenSet(1 << s)
    }

    pub fn contains(self, s: usize) -> bool {
        self.0 & (1 << s) != 0
    }

    pub fn insert(&mut self, s: usize) {
        self.0 |= 1 << s;
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_subset(self, other: GenSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        (0..8).filter(move |s| self.0 & (1 << s) != 0)
    }

    pub fn min(self) -> Option<usize> {
        if self.0 == 0 {
            None
        } else {
            Some(self.0.trailing_zeros() as usize)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// Positive integer weights `L(s)`, indexed like the generators.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WeightFunction {
    values: Vec<u32>,
}

impl WeightFunction {
    pub fn new(values: Vec<u32>) -> Result<WeightFunction> {
        if values.iter().any(|&v| v == 0) {
            return Err(Error::InvalidWeights("weights must be positive".into()));
        }
        Ok(WeightFunction { values })
    }

    pub fn uniform(rank: usize) -> WeightFunction {
        WeightFunction { values: vec![1; rank] }
    }

    pub fn of(&self, s: usize) -> u32 {
        self.values[s]
    }

    pub fn values(&self) -> &[u32] {
        &self.values
    }
}

#[derive(Clone, Debug)]
struct Node {
    word: Element,
    right: [u32; 3],
    left: [u32; 3],
    rdes: GenSet,
    ldes: GenSet,
    inv: u32,
}

/// A Coxeter system of rank ≤ 3 together with its Cayley ball of radius
/// `ball_radius_limit`. Immutable once built.
#[derive(Clone, Debug)]
pub struct CoxeterSystem {
    labels: Vec<u8>,
    bonds: Vec<Vec<Bond>>,
    radius: usize,
    nodes: Vec<Node>,
    index: HashMap<Box<[u8]>, ElemId>,
    level_start: Vec<usize>,
}

pub const DEFAULT_RADIUS: usize = 16;

impl CoxeterSystem {
    /// Builds a system from generator labels (in increasing order) and the
    /// off-diagonal bonds, given as `bonds[i][j]` for `i != j`.
    pub fn new(labels: &str, bonds: Vec<Vec<Bond>>, radius: usize) -> Result<CoxeterSystem> {
        let labels: Vec<u8> = labels.bytes().collect();
        let rank = labels.len();
        if rank == 0 || rank > 3 {
            return Err(Error::InvalidSystem(format!("rank {rank} is not in 1..=3")));
        }
        if labels.windows(2).any(|w| w[0] >= w[1]) || labels.iter().any(|&c| c == b'e' || !c.is_ascii_alphabetic()) {
            return Err(Error::InvalidSystem("labels must be distinct increasing letters other than e".into()));
        }
        if bonds.len() != rank || bonds.iter().any(|row| row.len() != rank) {
            return Err(Error::InvalidSystem("bond matrix has the wrong shape".into()));
        }
        for i in 0..rank {
            for j in 0..rank {
                if i != j && bonds[i][j] != bonds[j][i] {
                    return Err(Error::InvalidSystem("bond matrix is not symmetric".into()));
                }
            }
        }
        if radius > u16::MAX as usize {
            return Err(Error::InvalidSystem("radius too large".into()));
        }
        let mut sys = CoxeterSystem {
            labels,
            bonds,
            radius,
            nodes: Vec::new(),
            index: HashMap::new(),
            level_start: Vec::new(),
        };
        sys.build();
        Ok(sys)
    }

    /// The rank-3 system on `r < s < t` with the given `(m_rt, m_rs, m_st)`.
    pub fn rank3(m_rt: Bond, m_rs: Bond, m_st: Bond, radius: usize) -> Result<CoxeterSystem> {
        let one = Bond::Finite(1);
        let bonds = vec![vec![one, m_rs, m_rt], vec![m_rs, one, m_st], vec![m_rt, m_st, one]];
        CoxeterSystem::new("rst", bonds, radius)
    }

    /// Convenience constructor from finite labels, e.g. `triple(2, 4, 5, 16)`.
    pub fn triple(m_rt: u32, m_rs: u32, m_st: u32, radius: usize) -> Result<CoxeterSystem> {
        let b = |m: u32| if m == 0 { Bond::Infinite } else { Bond::Finite(m) };
        CoxeterSystem::rank3(b(m_rt), b(m_rs), b(m_st), radius)
    }

    /// The dihedral system on two labels (e.g. `"st"`) with bond `m`.
    pub fn dihedral(labels: &str, m: Bond, radius: usize) -> Result<CoxeterSystem> {
        let one = Bond::Finite(1);
        CoxeterSystem::new(labels, vec![vec![one, m], vec![m, one]], radius)
    }

    /// The standard parabolic subsystem on the generators in `j`, with the
    /// same radius.
    pub fn parabolic(&self, j: GenSet) -> Result<CoxeterSystem> {
        let gens: Vec<usize> = j.iter().filter(|&s| s < self.rank()).collect();
        let labels: String = gens.iter().map(|&s| self.labels[s] as char).collect();
        let bonds = gens.iter().map(|&a| gens.iter().map(|&b| self.bonds[a][b]).collect()).collect();
        CoxeterSystem::new(&labels, bonds, self.radius)
    }

    fn build(&mut self) {
        let rank = self.rank();
        self.nodes.push(Node {
            word: Element::identity(),
            right: [NONE; 3],
            left: [NONE; 3],
            rdes: GenSet::default(),
            ldes: GenSet::default(),
            inv: 0,
        });
        self.level_start = vec![0, 1];
        for n in 0..self.radius {
            let (lo, hi) = (self.level_start[n], self.level_start[n + 1]);
            let mut keys: HashMap<(usize, u32), usize> = HashMap::new();
            let mut fresh: Vec<(GenSet, [u32; 3])> = Vec::new();
            let mut ups: Vec<(usize, usize, usize)> = Vec::new();
            for x in lo..hi {
                for s in 0..rank {
                    if self.nodes[x].rdes.contains(s) {
                        continue;
                    }
                    let rd = self.successor_descents(x as u32, s);
                    let t0 = rd.min().unwrap();
                    let below = if t0 == s { x as u32 } else { self.swap_top(x as u32, s, t0) };
                    let k = *keys.entry((t0, below)).or_insert_with(|| {
                        fresh.push((rd, [NONE; 3]));
                        fresh.len() - 1
                    });
                    debug_assert_eq!(fresh[k].0, rd);
                    fresh[k].1[s] = x as u32;
                    ups.push((x, s, k));
                }
            }
            if fresh.is_empty() {
                break;
            }
            let words: Vec<Vec<u8>> = fresh
                .iter()
                .map(|(rd, down)| {
                    rd.iter()
                        .map(|t| {
                            let mut w = self.nodes[down[t] as usize].word.word().to_vec();
                            w.push(self.labels[t]);
                            w
                        })
                        .min()
                        .unwrap()
                })
                .collect();
            let mut order: Vec<usize> = (0..fresh.len()).collect();
            order.sort_by(|&a, &b| words[a].cmp(&words[b]));
            let mut pos = vec![0usize; fresh.len()];
            for (p, &k) in order.iter().enumerate() {
                pos[k] = p;
            }
            for &k in &order {
                self.nodes.push(Node {
                    word: Element::from_canonical(words[k].clone()),
                    right: fresh[k].1,
                    left: [NONE; 3],
                    rdes: fresh[k].0,
                    ldes: GenSet::default(),
                    inv: NONE,
                });
            }
            for (x, s, k) in ups {
                self.nodes[x].right[s] = (hi + pos[k]) as u32;
            }
            self.level_start.push(self.nodes.len());
        }
        for (i, node) in self.nodes.iter().enumerate() {
            self.index.insert(node.word.0.clone(), i as u32);
        }
        for i in 0..self.nodes.len() {
            let mut cur = 0u32;
            for &c in self.nodes[i].word.word().iter().rev() {
                let s = self.gen_index(c).unwrap();
                cur = self.nodes[cur as usize].right[s];
            }
            self.nodes[i].inv = cur;
        }
        for i in 0..self.nodes.len() {
            let inv = self.nodes[i].inv as usize;
            let mut left = [NONE; 3];
            for (s, slot) in left.iter_mut().enumerate().take(rank) {
                let r = self.nodes[inv].right[s];
                if r != NONE {
                    *slot = self.nodes[r as usize].inv;
                }
            }
            self.nodes[i].left = left;
            self.nodes[i].ldes = self.nodes[inv].rdes;
        }
    }

    /// Length of the maximal suffix of `x` alternating in `{t, s}` whose last letter is `t`.
    fn alternating_tail(&self, x: u32, t: usize, s: usize, cap: u32) -> u32 {
        let (mut cur, mut letter, mut k) = (x, t, 0);
        while k < cap && self.nodes[cur as usize].rdes.contains(letter) {
            cur = self.nodes[cur as usize].right[letter];
            letter = if letter == t { s } else { t };
            k += 1;
        }
        k
    }

    /// Right descent set of `x·s`, given `s ∉ R(x)`.
    fn successor_descents(&self, x: u32, s: usize) -> GenSet {
        let mut rd = GenSet::single(s);
        for t in 0..self.rank() {
            if t == s {
                continue;
            }
            if let Bond::Finite(m) = self.bonds[s][t] {
                if self.alternating_tail(x, t, s, m) == m - 1 {
                    rd.insert(t);
                }
            }
        }
        rd
    }

    /// For `y = x·s` with `t ∈ R(y)`, returns the id of `y·t` (which has the
    /// same length as `x`).
    fn swap_top(&self, x: u32, s: usize, t: usize) -> u32 {
        let m = self.bonds[s][t].finite().unwrap() as usize;
        let mut cur = x;
        let mut letter = t;
        for _ in 0..m - 1 {
            cur = self.nodes[cur as usize].right[letter];
            letter = if letter == t { s } else { t };
        }
        for i in 0..m - 1 {
            let letter = if (m - 2 - i) % 2 == 0 { s } else { t };
            debug_assert!(!self.nodes[cur as usize].rdes.contains(letter));
            cur = self.nodes[cur as usize].right[letter];
        }
        cur
    }

    pub fn rank(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[u8] {
        &self.labels
    }

    pub fn label(&self, s: usize) -> char {
        self.labels[s] as char
    }

    pub fn gen_index(&self, c: u8) -> Option<usize> {
        self.labels.iter().position(|&l| l == c)
    }

    pub fn bond(&self, s: usize, t: usize) -> Bond {
        self.bonds[s][t]
    }

    /// `(m_rt, m_rs, m_st)` for a rank-3 system.
    pub fn triple_bonds(&self) -> Option<(Bond, Bond, Bond)> {
        if self.rank() != 3 {
            return None;
        }
        Some((self.bonds[0][2], self.bonds[0][1], self.bonds[1][2]))
    }

    pub fn ball_radius_limit(&self) -> usize {
        self.radius
    }

    /// Largest length present (smaller than the radius only for finite groups).
    pub fn max_length(&self) -> usize {
        self.level_start.len() - 2
    }

    /// Whether the whole group fits in the ball.
    pub fn is_complete(&self) -> bool {
        let top = self.level_start[self.level_start.len() - 2];
        // a top element with every generator as a descent is the longest element
        self.max_length() < self.radius || self.nodes[top..].iter().all(|n| n.rdes == self.all_gens())
    }

    /// Whether the parabolic subgroup `W_J` is finite.
    pub fn is_finite_parabolic(&self, j: GenSet) -> bool {
        let gens: Vec<usize> = j.iter().filter(|&s| s < self.rank()).collect();
        let mut ms = Vec::new();
        for (i, &a) in gens.iter().enumerate() {
            for &b in &gens[i + 1..] {
                match self.bonds[a][b] {
                    Bond::Finite(m) => ms.push(m),
                    Bond::Infinite => return false,
                }
            }
        }
        if gens.len() <= 2 {
            return true;
        }
        // 1/p + 1/q + 1/r > 1
        let (p, q, r) = (ms[0] as u64, ms[1] as u64, ms[2] as u64);
        q * r + p * r + p * q > p * q * r
    }

    pub fn all_gens(&self) -> GenSet {
        GenSet((1u8 << self.rank()) - 1)
    }

    pub fn is_finite_group(&self) -> bool {
        self.is_finite_parabolic(self.all_gens())
    }

    pub fn size(&self) -> usize {
        self.nodes.len()
    }

    /// Length bound of the enumerated ball.
    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn element(&self, id: ElemId) -> &Element {
        &self.nodes[id as usize].word
    }

    pub fn id(&self, x: &Element) -> Result<ElemId> {
        match self.index.get(x.word()) {
            Some(&i) => Ok(i),
            None => {
                let e = self.normal_form(x.word())?;
                Ok(self.index[e.word()])
            }
        }
    }

    pub fn length_of(&self, id: ElemId) -> usize {
        self.nodes[id as usize].word.len()
    }

    /// `x·s`, or `None` beyond the horizon.
    pub fn right_mul(&self, id: ElemId, s: usize) -> Option<ElemId> {
        let r = self.nodes[id as usize].right[s];
        (r != NONE).then_some(r)
    }

    /// `s·x`, or `None` beyond the horizon.
    pub fn left_mul(&self, id: ElemId, s: usize) -> Option<ElemId> {
        let r = self.nodes[id as usize].left[s];
        (r != NONE).then_some(r)
    }

    pub fn right_descents(&self, id: ElemId) -> GenSet {
        self.nodes[id as usize].rdes
    }

    pub fn left_descents(&self, id: ElemId) -> GenSet {
        self.nodes[id as usize].ldes
    }

    pub fn inverse_id(&self, id: ElemId) -> ElemId {
        self.nodes[id as usize].inv
    }

    pub fn gens_of_word(&self, word: &[u8]) -> Result<Vec<usize>> {
        word.iter()
            .map(|&c| self.gen_index(c).ok_or(Error::UnknownGenerator(c as char)))
            .collect()
    }

    /// The generator indices of the canonical word of `id`.
    pub fn letters(&self, id: ElemId) -> Vec<usize> {
        self.nodes[id as usize].word.word().iter().map(|&c| self.gen_index(c).unwrap()).collect()
    }

    fn horizon(&self, length: usize) -> Error {
        Error::HorizonExceeded { length, limit: self.radius }
    }

    /// `x·g1·g2·…`, failing if a partial product leaves the ball.
    pub fn mul_letters(&self, x: ElemId, gens: &[usize]) -> Result<ElemId> {
        let mut cur = x;
        for &s in gens {
            let n = self.nodes[cur as usize].right[s];
            if n == NONE {
                return Err(self.horizon(self.length_of(cur) + 1));
            }
            cur = n;
        }
        Ok(cur)
    }

    fn left_mul_letters(&self, y: ElemId, gens_rev: impl Iterator<Item = usize>) -> Result<ElemId> {
        let mut cur = y;
        for s in gens_rev {
            let n = self.nodes[cur as usize].left[s];
            if n == NONE {
                return Err(self.horizon(self.length_of(cur) + 1));
            }
            cur = n;
        }
        Ok(cur)
    }

    /// Canonical form of the product of a generator word (labels; `e` alone
    /// denotes the empty word).
    pub fn normal_form(&self, word: &[u8]) -> Result<Element> {
        let id = self.normal_form_id(word)?;
        Ok(self.nodes[id as usize].word.clone())
    }

    pub fn normal_form_id(&self, word: &[u8]) -> Result<ElemId> {
        if word == b"e" {
            return Ok(0);
        }
        let gens = self.gens_of_word(word)?;
        self.mul_letters(0, &gens)
    }

    /// Parses a word such as `"rst"` or `"e"`.
    pub fn parse(&self, word: &str) -> Result<Element> {
        self.normal_form(word.trim().as_bytes())
    }

    pub fn parse_id(&self, word: &str) -> Result<ElemId> {
        self.normal_form_id(word.trim().as_bytes())
    }

    /// Product of two ball elements. Tries right-to-left accumulation when the
    /// left-to-right partial products leave the ball.
    pub fn mul_id(&self, x: ElemId, y: ElemId) -> Result<ElemId> {
        let gy = self.letters(y);
        match self.mul_letters(x, &gy) {
            Ok(z) => Ok(z),
            Err(e) => {
                let gx = self.letters(x);
                self.left_mul_letters(y, gx.into_iter().rev()).map_err(|_| e)
            }
        }
    }

    pub fn mult(&self, x: &Element, y: &Element) -> Result<Element> {
        let z = self.mul_id(self.id(x)?, self.id(y)?)?;
        Ok(self.element(z).clone())
    }

    pub fn inverse(&self, x: &Element) -> Result<Element> {
        Ok(self.element(self.inverse_id(self.id(x)?)).clone())
    }

    /// Checks that `l` has one value per generator and is constant on
    /// conjugacy classes (odd bonds force equal weights).
    pub fn validate_weights(&self, l: &WeightFunction) -> Result<()> {
        if l.values().len() != self.rank() {
            return Err(Error::InvalidWeights(format!(
                "{} weights for a rank-{} system",
                l.values().len(),
                self.rank()
            )));
        }
        for s in 0..self.rank() {
            for t in s + 1..self.rank() {
                if let Bond::Finite(m) = self.bonds[s][t] {
                    if m % 2 == 1 && l.of(s) != l.of(t) {
                        return Err(Error::InvalidWeights(format!(
                            "m_{}{} = {m} is odd, so L({}) and L({}) must agree",
                            self.label(s),
                            self.label(t),
                            self.label(s),
                            self.label(t)
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn weight_of(&self, l: &WeightFunction, x: &Element) -> u64 {
        x.word().iter().map(|&c| l.of(self.gen_index(c).unwrap()) as u64).sum()
    }

    pub fn weight_of_id(&self, l: &WeightFunction, id: ElemId) -> u64 {
        self.weight_of(l, self.element(id))
    }

    pub fn descents(&self, x: &Element, side: Side) -> Result<GenSet> {
        let id = self.id(x)?;
        Ok(match side {
            Side::Left => self.left_descents(id),
            Side::Right => self.right_descents(id),
        })
    }

    /// Bruhat order via the lifting property: for `s ∈ R(w)`, `x ≤ w` iff
    /// `min(x, xs) ≤ ws`.
    pub fn bruhat_leq_id(&self, x: ElemId, w: ElemId) -> bool {
        let (mut x, mut w) = (x, w);
        loop {
            if x == w {
                return true;
            }
            let (lx, lw) = (self.length_of(x), self.length_of(w));
            if lx >= lw {
                return false;
            }
            if lx == 0 {
                return true;
            }
            let s = self.right_descents(w).min().unwrap();
            w = self.nodes[w as usize].right[s];
            if self.right_descents(x).contains(s) {
                x = self.nodes[x as usize].right[s];
            }
        }
    }

    pub fn bruhat_leq(&self, x: &Element, w: &Element) -> Result<bool> {
        Ok(self.bruhat_leq_id(self.id(x)?, self.id(w)?))
    }

    /// All `x` with `w = x·v` reduced, sorted by id.
    pub fn weak_prefix_ids(&self, w: ElemId) -> Vec<ElemId> {
        let mut seen: HashSet<ElemId> = HashSet::from([w]);
        let mut queue = VecDeque::from([w]);
        while let Some(x) = queue.pop_front() {
            for s in self.right_descents(x).iter() {
                let y = self.nodes[x as usize].right[s];
                if seen.insert(y) {
                    queue.push_back(y);
                }
            }
        }
        let mut v: Vec<ElemId> = seen.into_iter().collect();
        v.sort_unstable();
        v
    }

    pub fn weak_prefixes(&self, w: &Element) -> Result<Vec<Element>> {
        let ids = self.weak_prefix_ids(self.id(w)?);
        Ok(ids.into_iter().map(|i| self.element(i).clone()).collect())
    }

    /// Whether `d` is a prefix of `v` in the weak order, i.e. `v = d·v'` reduced.
    pub fn is_left_factor(&self, d: ElemId, v: ElemId) -> bool {
        let mut cur = v;
        for c in self.nodes[d as usize].word.word() {
            let s = self.gen_index(*c).unwrap();
            if !self.left_descents(cur).contains(s) {
                return false;
            }
            cur = self.nodes[cur as usize].left[s];
        }
        true
    }

    /// `x⁻¹·w` for a weak prefix `x` of `w`.
    pub fn strip_prefix(&self, x: ElemId, w: ElemId) -> Option<ElemId> {
        let mut cur = w;
        for c in self.nodes[x as usize].word.word() {
            let s = self.gen_index(*c).unwrap();
            if !self.left_descents(cur).contains(s) {
                return None;
            }
            cur = self.nodes[cur as usize].left[s];
        }
        Some(cur)
    }

    /// `w·y⁻¹` for a weak suffix `y` of `w`.
    pub fn strip_suffix(&self, w: ElemId, y: ElemId) -> Option<ElemId> {
        let mut cur = w;
        for c in self.nodes[y as usize].word.word().iter().rev() {
            let s = self.gen_index(*c).unwrap();
            if !self.right_descents(cur).contains(s) {
                return None;
            }
            cur = self.nodes[cur as usize].right[s];
        }
        Some(cur)
    }

    /// Whether `w = x·d·y` reduced for some `x, y`.
    pub fn contains_factor_id(&self, w: ElemId, d: ElemId) -> bool {
        let ld = self.length_of(d);
        let lw = self.length_of(w);
        if ld > lw {
            return false;
        }
        self.weak_prefix_ids(w).into_iter().any(|x| {
            self.length_of(x) + ld <= lw
                && self.strip_prefix(x, w).is_some_and(|v| self.is_left_factor(d, v))
        })
    }

    pub fn contains_factor(&self, w: &Element, d: &Element) -> Result<bool> {
        Ok(self.contains_factor_id(self.id(w)?, self.id(d)?))
    }

    /// Whether the concatenation `x·y` is reduced.
    pub fn is_reduced_product(&self, x: ElemId, y: ElemId) -> Result<bool> {
        let z = self.mul_id(x, y)?;
        Ok(self.length_of(z) == self.length_of(x) + self.length_of(y))
    }

    pub fn longest_element_id(&self, j: GenSet) -> Result<ElemId> {
        if !self.is_finite_parabolic(j) {
            let names: String = j.iter().map(|s| self.label(s)).collect();
            return Err(Error::InfiniteParabolic(names));
        }
        let mut cur = 0u32;
        'up: loop {
            for s in j.iter() {
                if !self.right_descents(cur).contains(s) {
                    let n = self.nodes[cur as usize].right[s];
                    if n == NONE {
                        return Err(self.horizon(self.length_of(cur) + 1));
                    }
                    cur = n;
                    continue 'up;
                }
            }
            return Ok(cur);
        }
    }

    pub fn longest_element(&self, j: &str) -> Result<Element> {
        let mut set = GenSet::default();
        for c in j.bytes() {
            set.insert(self.gen_index(c).ok_or(Error::UnknownGenerator(c as char))?);
        }
        Ok(self.element(self.longest_element_id(set)?).clone())
    }

    /// Ids of all elements of length ≤ `r`.
    pub fn ball_ids(&self, r: usize) -> Result<std::ops::Range<ElemId>> {
        if r > self.radius {
            return Err(self.horizon(r));
        }
        let top = (r + 1).min(self.level_start.len() - 1);
        Ok(0..self.level_start[top] as ElemId)
    }

    /// All elements of length ≤ `r`, sorted by (length, ShortLex).
    pub fn ball(&self, r: usize) -> Result<Vec<Element>> {
        Ok(self.ball_ids(r)?.map(|i| self.element(i).clone()).collect())
    }

    /// Ids of the elements of length exactly `n`.
    pub fn level_ids(&self, n: usize) -> std::ops::Range<ElemId> {
        if n + 1 >= self.level_start.len() {
            return 0..0;
        }
        self.level_start[n] as ElemId..self.level_start[n + 1] as ElemId
    }

    pub fn describe(&self) -> String {
        let mut parts = Vec::new();
        for i in 0..self.rank() {
            for j in i + 1..self.rank() {
                parts.push(format!("m_{}{}={}", self.label(i), self.label(j), self.bonds[i][j]));
            }
        }
        parts.join(", ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sys245() -> CoxeterSystem {
        CoxeterSystem::triple(2, 4, 5, 10).unwrap()
    }

    #[test]
    fn normal_form_examples() {
        let w = CoxeterSystem::triple(2, 3, 3, 10).unwrap();
        assert_eq!(w.parse("rr").unwrap().to_string(), "e");
        assert_eq!(w.parse("tr").unwrap().to_string(), "rt");
        assert_eq!(w.parse("srs").unwrap().to_string(), "rsr");
        assert!(matches!(w.parse("rx"), Err(Error::UnknownGenerator('x'))));
    }

    #[test]
    fn mult_examples() {
        let w = sys245();
        let p = |s: &str| w.parse(s).unwrap();
        assert_eq!(w.mult(&p("e"), &p("st")).unwrap(), p("st"));
        assert_eq!(w.mult(&p("rs"), &p("sr")).unwrap(), p("e"));
        assert_eq!(w.mult(&p("rsr"), &p("r")).unwrap(), p("rs"));
    }

    #[test]
    fn descents_and_prefixes() {
        let w = sys245();
        let rst = w.parse("rst").unwrap();
        assert_eq!(w.descents(&rst, Side::Left).unwrap(), GenSet::single(0));
        assert_eq!(w.descents(&rst, Side::Right).unwrap(), GenSet::single(2));
        let pre: Vec<String> = w.weak_prefixes(&rst).unwrap().iter().map(|e| e.to_string()).collect();
        assert_eq!(pre, ["e", "r", "rs", "rst"]);
        let pre: Vec<String> =
            w.weak_prefixes(&w.parse("rt").unwrap()).unwrap().iter().map(|e| e.to_string()).collect();
        assert_eq!(pre, ["e", "r", "t", "rt"]);
        assert!(!w.contains_factor(&rst, &w.parse("rt").unwrap()).unwrap());
        assert!(w.contains_factor(&w.parse("ststs").unwrap(), &w.parse("sts").unwrap()).unwrap());
    }

    #[test]
    fn bruhat_examples() {
        let w = sys245();
        let p = |s: &str| w.parse(s).unwrap();
        assert!(w.bruhat_leq(&p("rt"), &p("rst")).unwrap());
        assert!(!w.bruhat_leq(&p("sts"), &p("st")).unwrap());
        assert!(w.bruhat_leq(&p("e"), &p("tst")).unwrap());
    }

    #[test]
    fn longest_elements() {
        let w = sys245();
        assert_eq!(w.longest_element("st").unwrap().to_string(), "ststs");
        assert_eq!(w.longest_element("rs").unwrap().to_string(), "rsrs");
        let inf = CoxeterSystem::rank3(Bond::Finite(2), Bond::Infinite, Bond::Finite(3), 6).unwrap();
        assert!(matches!(inf.longest_element("rs"), Err(Error::InfiniteParabolic(_))));
        let a3 = CoxeterSystem::triple(2, 3, 3, 10).unwrap();
        assert_eq!(a3.longest_element("rst").unwrap().len(), 6);
    }

    #[test]
    fn ball_examples() {
        let w = sys245();
        assert_eq!(w.ball(0).unwrap(), vec![Element::identity()]);
        let b1: Vec<String> = w.ball(1).unwrap().iter().map(|e| e.to_string()).collect();
        assert_eq!(b1, ["e", "r", "s", "t"]);
        let b2: Vec<String> = w.ball(2).unwrap().iter().map(|e| e.to_string()).collect();
        assert_eq!(b2, ["e", "r", "s", "t", "rs", "rt", "sr", "st", "ts"]);
        assert!(matches!(w.ball(11), Err(Error::HorizonExceeded { .. })));
    }

    #[test]
    fn finite_group_sizes() {
        assert_eq!(CoxeterSystem::triple(2, 3, 3, 16).unwrap().size(), 24);
        assert_eq!(CoxeterSystem::triple(2, 3, 4, 16).unwrap().size(), 48);
        assert_eq!(CoxeterSystem::triple(2, 3, 5, 20).unwrap().size(), 120);
        assert_eq!(CoxeterSystem::dihedral("st", Bond::Finite(5), 8).unwrap().size(), 10);
    }

    #[test]
    fn weights() {
        let w = sys245();
        let l = WeightFunction::new(vec![5, 1, 1]).unwrap();
        assert_eq!(w.weight_of(&l, &w.parse("rsr").unwrap()), 11);
        assert_eq!(w.weight_of(&l, &Element::identity()), 0);
        assert!(WeightFunction::new(vec![1, 0, 1]).is_err());
    }

    #[test]
    fn horizon_is_enforced() {
        let w = CoxeterSystem::triple(2, 4, 5, 3).unwrap();
        assert!(matches!(w.parse("rsts"), Err(Error::HorizonExceeded { .. })));
        assert_eq!(w.parse("rstt").unwrap().to_string(), "rs");
    }
}
