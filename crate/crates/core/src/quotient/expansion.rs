//! Instance checks of the explicit product expansions `T_x T_w T_y = Σ c T_z`
//! used in the degree estimates for rank-3 groups with `m_rt = 2`.
//!
//! Elements are written as templates: letters `r s t`, `A = w_rs`,
//! `B = w_st`, and the free elements `X`, `Y`. Letters inside a token are
//! multiplied in the group; a `.` between tokens asserts that the product is
//! reduced.

use std::sync::Arc;

use serde::Serialize;

use crate::coxeter::{Bond, CoxeterSystem, ElemId, Element, GenSet, WeightFunction};
use crate::error::{Error, Result};
use crate::hecke::{HeckeAlgebra, HeckeElt};
use crate::laurent::{Degree, LaurentPoly};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Lemma {
    /// `m_rs = ∞ > m_st ≥ 3`.
    Reduced0,
    /// `4 ≤ m_rs, m_st < ∞`, not both 4.
    Reduced,
    /// `m_rs ≥ 7`, `m_st = 3`.
    Reduced2,
}

enum Cond {
    RightIn(&'static str, &'static str),
    LeftIn(&'static str, &'static str),
    RightEq(&'static str, &'static str),
    LeftEq(&'static str, &'static str),
    MstAtLeast(u32),
    AnyOf(Vec<Cond>),
}

enum Claim {
    Terms(Vec<(&'static str, &'static str)>),
    /// `deg T_x T_w T_y ≤ L(word)`.
    DegreeAtMost(&'static str),
}

struct Subcase {
    id: &'static str,
    lemma: Lemma,
    m_rs: Option<u32>,
    m_st: Option<u32>,
    w: &'static str,
    x: &'static str,
    y: &'static str,
    conds: Vec<Cond>,
    claim: Claim,
}

impl Subcase {
    fn new(id: &'static str, lemma: Lemma, w: &'static str, x: &'static str, y: &'static str) -> Subcase {
        Subcase { id, lemma, m_rs: None, m_st: None, w, x, y, conds: Vec::new(), claim: Claim::Terms(Vec::new()) }
    }

    fn m_rs(mut self, m: u32) -> Subcase {
        self.m_rs = Some(m);
        self
    }

    fn m_st(mut self, m: u32) -> Subcase {
        self.m_st = Some(m);
        self
    }

    fn cond(mut self, c: Cond) -> Subcase {
        self.conds.push(c);
        self
    }

    fn terms(mut self, t: &[(&'static str, &'static str)]) -> Subcase {
        self.claim = Claim::Terms(t.to_vec());
        self
    }

    fn degree_at_most(mut self, word: &'static str) -> Subcase {
        self.claim = Claim::DegreeAtMost(word);
        self
    }

    /// Free `X`, `Y` with descent conditions; otherwise the statement is a
    /// base case and samples are its reduced extensions.
    fn has_free(&self) -> bool {
        self.x.contains('X') || self.y.contains('Y')
    }

    fn default_systems(&self) -> Vec<(Bond, Bond)> {
        let f = Bond::Finite;
        let all: Vec<(Bond, Bond)> = match self.lemma {
            Lemma::Reduced0 => vec![(Bond::Infinite, f(3)), (Bond::Infinite, f(4)), (Bond::Infinite, f(5))],
            Lemma::Reduced => vec![(f(4), f(5)), (f(5), f(4)), (f(6), f(4)), (f(5), f(6))],
            Lemma::Reduced2 => vec![(f(7), f(3)), (f(8), f(3))],
        };
        all.into_iter().filter(|&p| self.admits(p)).collect()
    }

    fn admits(&self, (m_rs, m_st): (Bond, Bond)) -> bool {
        self.m_rs.map_or(true, |m| m_rs == Bond::Finite(m)) && self.m_st.map_or(true, |m| m_st == Bond::Finite(m))
    }
}

fn registry() -> Vec<Subcase> {
    use Cond::*;
    use Lemma::*;
    vec![
        Subcase::new("reduced0(1)", Reduced0, "srs", "X.Bs", "sB.Y")
            .cond(RightIn("X", "r"))
            .cond(LeftIn("Y", "r"))
            .terms(&[("t", "X.B.r.tB.Y"), ("", "X.Bt.r.tB.Y")]),
        Subcase::new("reduced0(2)", Reduced0, "rs", "X.t", "sB.Y")
            .cond(RightIn("X", "s"))
            .cond(LeftIn("Y", "r"))
            .terms(&[("t", "X.r.B.Y"), ("", "X.r.tB.Y")]),
        Subcase::new("reduced(1)", Reduced, "srs", "X.Bs", "sB.Y")
            .cond(RightIn("X", "r"))
            .cond(LeftIn("Y", "r"))
            .terms(&[("t", "X.B.r.tB.Y"), ("", "X.Bt.r.tB.Y")]),
        Subcase::new("reduced(2)", Reduced, "rsr", "X.Ar.t", "t.rA.Y")
            .m_st(4)
            .cond(RightIn("X", "t"))
            .cond(LeftIn("Y", "t"))
            .terms(&[("s", "X.A.tst.sA.Y"), ("", "X.As.tst.sA.Y")]),
        Subcase::new("reduced(3)", Reduced, "rt", "X.Ar", "tB.Y")
            .cond(RightIn("X", "t"))
            .cond(LeftIn("Y", "r"))
            .terms(&[("s", "X.A.sB.Y"), ("", "X.As.sB.Y")]),
        Subcase::new("reduced(4.1)", Reduced, "rs", "X.Ar.t", "sB.Y")
            .cond(RightIn("X", "t"))
            .cond(LeftIn("Y", "r"))
            .cond(LeftEq("stB.Y", "t"))
            .terms(&[("ts", "X.As.B.Y"), ("t", "X.As.sB.Y"), ("s", "X.A.stB.Y"), ("", "X.As.stB.Y")]),
        Subcase::new("reduced(4.2)", Reduced, "rs", "X.Ar.t", "sB.sA.Y")
            .m_st(4)
            .cond(RightIn("X", "t"))
            .cond(LeftIn("Y", "t"))
            .terms(&[
                ("ts", "X.As.B.sA.Y"),
                ("t", "X.As.sB.sA.Y"),
                ("sr", "X.Ar.t.A.Y"),
                ("s", "X.Ar.t.rA.Y"),
                ("r", "X.Asr.t.A.Y"),
                ("", "X.Asr.t.rA.Y"),
            ]),
        Subcase::new("reduced(4.3)", Reduced, "rs", "X.t", "sB.Y")
            .cond(RightIn("X", "s"))
            .cond(RightEq("Xr", "r"))
            .cond(LeftIn("Y", "r"))
            .cond(AnyOf(vec![MstAtLeast(5), RightEq("Xrs", "s"), LeftEq("sY", "s")]))
            .terms(&[("t", "X.r.B.Y"), ("", "X.r.tB.Y")]),
        Subcase::new("reduced(4.4)", Reduced, "rs", "X.Asr.t", "sB.sA.Y")
            .m_st(4)
            .cond(RightIn("X", "t"))
            .cond(LeftIn("Y", "t"))
            .terms(&[("t", "X.As.B.sA.Y"), ("r", "X.Ar.t.A.Y"), ("", "X.Ar.t.rA.Y")]),
        Subcase::new("reduced(4.5)", Reduced, "rs", "X.Ar.t", "stB.Y")
            .cond(RightIn("X", "t"))
            .cond(LeftIn("Y", "r"))
            .terms(&[("s", "X.A.sB.Y"), ("", "X.As.sB.Y")]),
        Subcase::new("reduced2(1)", Reduced2, "rsrsr", "Ar.t", "t.rA")
            .terms(&[("t", "A.tsrst.sA"), ("", "As.tsrst.sA")]),
        Subcase::new("reduced2(2)", Reduced2, "rsrs", "Ar.t", "ts").terms(&[("s", "A.tsrst"), ("", "As.tsrst")]),
        Subcase::new("reduced2(3.1)", Reduced2, "srs", "st", "ts").terms(&[("t", "tstrst"), ("", "tsrst")]),
        Subcase::new("reduced2(3.2)", Reduced2, "srs", "As.tsrst", "tsrst.sA").m_rs(8).terms(&[
            ("t", "As.tsrtstrstrst.sA"),
            ("r", "Ar.t.A.t.rA"),
            ("", "Ar.t.rA.t.rA"),
        ]),
        Subcase::new("reduced2(3.3)", Reduced2, "srs", "As.tsrst", "tsrst.sA").m_rs(7).terms(&[
            ("t", "As.tsrtstrstrst.sA"),
            ("rr", "Ar.t.A.t.rA"),
            ("r", "Ar.t.Ar.t.rA"),
            ("r", "Ar.t.rA.t.rA"),
            ("", "Ar.t.rAr.t.rA"),
        ]),
        Subcase::new("reduced2(3.4)", Reduced2, "srs", "As.tsrst", "tsrst").m_rs(7).terms(&[
            ("t", "As.tsrtstrstrst"),
            ("r", "Ar.t.A.ts"),
            ("", "Ar.t.rA.ts"),
        ]),
        Subcase::new("reduced2(4.1)", Reduced2, "rsr", "Asr.t", "t.rsA").terms(&[("r", "A.t.rA"), ("", "Ar.t.rA")]),
        Subcase::new("reduced2(4.2)", Reduced2, "rsr", "Ar.t", "t.rA").terms(&[
            ("ssr", "Ar.t.A"),
            ("ss", "Ar.t.rA"),
            ("sr", "Ar.t.sA"),
            ("s", "Ar.t.rsA"),
            ("sr", "As.t.rA"),
            ("s", "Asr.t.rA"),
            ("r", "Asr.t.sA"),
            ("", "Asr.t.rsA"),
        ]),
        Subcase::new("reduced2(4.3)", Reduced2, "rsr", "Asr.t", "t.rA").terms(&[
            ("sr", "A.t.rA"),
            ("s", "Ar.t.rA"),
            ("r", "Ar.t.sA"),
            ("", "Ar.t.rsA"),
        ]),
        Subcase::new("reduced2(4.4)", Reduced2, "rsr", "t", "t.rA").terms(&[("t", "rst.A"), ("", "rst.sA")]),
        Subcase::new("reduced2(5)", Reduced2, "sts", "As", "sA").terms(&[("r", "A.t.rA"), ("", "Ar.t.rA")]),
        Subcase::new("reduced2(6.1)", Reduced2, "rt", "Ar", "st").terms(&[("s", "A.ts"), ("", "As.ts")]),
        Subcase::new("reduced2(6.2)", Reduced2, "rt", "Ar", "st.sA").terms(&[
            ("sr", "Ar.t.A"),
            ("s", "Ar.t.rA"),
            ("r", "Asr.t.A"),
            ("", "Asr.t.rA"),
        ]),
        Subcase::new("reduced2(6.3)", Reduced2, "rt", "Asr", "st.sA").terms(&[("r", "A.t.rA"), ("", "Ar.t.rA")]),
        Subcase::new("reduced2(7.1)", Reduced2, "st", "Ars", "rst").terms(&[("s", "A.ts"), ("", "As.ts")]),
        Subcase::new("reduced2(7.2)", Reduced2, "st", "Ars", "rst.sA").terms(&[
            ("sr", "Ar.t.A"),
            ("s", "Asr.t.rA"),
            ("r", "Asr.t.A"),
            ("", "Asr.t.rA"),
        ]),
        Subcase::new("reduced2(7.3)", Reduced2, "st", "Asrs", "rst.sA").terms(&[("r", "A.t.rA"), ("", "Ar.t.rA")]),
        Subcase::new("reduced2(7.4)", Reduced2, "st", "As", "r").terms(&[("r", "A.t"), ("", "Ar.t")]),
        Subcase::new("reduced2(7.5)", Reduced2, "st", "As", "rst").terms(&[
            ("rs", "A.ts"),
            ("r", "As.ts"),
            ("s", "Ar.ts"),
            ("", "Ars.ts"),
        ]),
        Subcase::new("reduced2(7.6)", Reduced2, "st", "Ar.t.As", "rst.srA").m_rs(7).terms(&[
            ("rs", "Ar.t.A.t.rA"),
            ("r", "Ar.t.As.t.rA"),
            ("s", "Ar.t.Ar.t.rA"),
            ("s", "As.tsrst.A"),
            ("", "As.tsrst.sA"),
        ]),
        Subcase::new("reduced2(7.7)", Reduced2, "st", "As", "rst.sA").terms(&[
            ("rrs", "Ar.t.A"),
            ("rs", "Ar.t.rA"),
            ("rr", "Asr.t.A"),
            ("r", "Asr.t.rA"),
            ("s", "Ar.t.A"),
            ("r", "Ars.t.rA"),
            ("", "Arsr.t.rA"),
        ]),
        Subcase::new("reduced2(7.8)", Reduced2, "st", "Ar.t.As", "rst.sA").m_rs(7).terms(&[
            ("rrs", "Ar.t.Ar.t.A"),
            ("rs", "Ar.t.Ar.t.rA"),
            ("rr", "Ar.t.Asr.t.A"),
            ("r", "Ar.t.Asr.t.rA"),
            ("s", "Ar.t.Ar.t.A"),
            ("rs", "As.tsrst.A"),
            ("r", "As.tsrst.sA"),
            ("s", "As.tsrst.rA"),
            ("", "As.tsrst.srA"),
        ]),
        Subcase::new("reduced2(8.1)", Reduced2, "rs", "Ar.t", "t").terms(&[("s", "A.ts"), ("", "As.ts")]),
        Subcase::new("reduced2(8.2)", Reduced2, "rs", "t", "ts").terms(&[("t", "rsts"), ("", "rst")]),
        Subcase::new("reduced2(8.3)", Reduced2, "rs", "Arsr.t", "tsrst").terms(&[
            ("t", "Ar.tsrst"),
            ("s", "A.ts"),
            ("", "As.ts"),
        ]),
        Subcase::new("reduced2(8.4)", Reduced2, "rs", "Arsr.t", "tsrst.sA").terms(&[
            ("t", "Ar.tsrst.sA"),
            ("sr", "Ar.t.A"),
            ("s", "Asr.t.rA"),
            ("r", "Asr.t.A"),
            ("", "Asr.t.rA"),
        ]),
        Subcase::new("reduced2(8.5)", Reduced2, "rs", "Asrsr.t", "tsrst.sA").terms(&[
            ("t", "Asr.tsrst.sA"),
            ("r", "A.t.rA"),
            ("", "Ar.t.rA"),
        ]),
        Subcase::new("reduced2(8.6)", Reduced2, "rs", "Asr.t", "tsr").terms(&[
            ("t", "A.tsr"),
            ("r", "A.t"),
            ("", "Ar.t"),
        ]),
        Subcase::new("reduced2(8.7)", Reduced2, "rs", "Asr.t", "tsrst").terms(&[
            ("t", "A.tsrst"),
            ("rs", "A.ts"),
            ("r", "As.ts"),
            ("s", "Ar.ts"),
            ("", "Ars.ts"),
        ]),
        Subcase::new("reduced2(8.8)", Reduced2, "rs", "Ar.t.Asr.t", "tsrst.srA").m_rs(7).terms(&[
            ("t", "Ar.t.A.tsrst.srA"),
            ("rs", "Ar.t.A.t.rA"),
            ("r", "Ar.t.As.t.rA"),
            ("s", "Ar.t.Ar.t.rA"),
            ("s", "As.tsrst.A"),
            ("", "As.tsrst.sA"),
        ]),
        Subcase::new("reduced2(8.9)", Reduced2, "rs", "Asr.t", "tsrst.sA").terms(&[
            ("t", "A.tsrst.sA"),
            ("rrs", "Ar.t.A"),
            ("rs", "Ar.t.rA"),
            ("rr", "Asr.t.A"),
            ("r", "Asr.t.rA"),
            ("s", "Ar.t.A"),
            ("r", "Ars.t.rA"),
            ("", "Arsr.t.rA"),
        ]),
        Subcase::new("reduced2(8.10)", Reduced2, "rs", "Ar.t.Asr.t", "tsrst.sA").m_rs(7).terms(&[
            ("t", "Ar.t.A.tsrst.sA"),
            ("rrs", "Ar.t.Ar.t.A"),
            ("rs", "Ar.t.Ar.t.rA"),
            ("rr", "Ar.t.Asr.t.A"),
            ("r", "Ar.t.Asr.t.rA"),
            ("s", "Ar.t.Ar.t.A"),
            ("rs", "As.tsrst.A"),
            ("r", "As.tsrst.sA"),
            ("s", "As.tsrst.rA"),
            ("", "As.tsrst.srA"),
        ]),
        Subcase::new("reduced2(8.11)", Reduced2, "rs", "Ar.t", "ts").terms(&[
            ("ts", "A.ts"),
            ("t", "As.ts"),
            ("s", "A.t"),
            ("", "As.t"),
        ]),
        Subcase::new("reduced2(8.12)", Reduced2, "rs", "Ar.t", "tsr").terms(&[
            ("ts", "A.tsr"),
            ("t", "As.tsr"),
            ("sr", "A.t"),
            ("s", "Ar.t"),
            ("r", "As.t"),
            ("", "Asr.t"),
        ]),
        Subcase::new("reduced2(8.13)", Reduced2, "rs", "Ar.t", "tsrst").terms(&[
            ("ts", "A.tsrst"),
            ("t", "As.tsrst"),
            ("ssr", "A.ts"),
            ("sr", "As.ts"),
            ("ss", "Ar.ts"),
            ("s", "Ars.ts"),
            ("r", "A.ts"),
            ("s", "Asr.ts"),
            ("", "Asrs.ts"),
        ]),
        Subcase::new("reduced2(8.14)", Reduced2, "rs", "Ar.t.Ar.t", "tsrst.srA").m_rs(8).terms(&[
            ("ts", "Ar.t.A.tsrst.srA"),
            ("t", "Ar.t.As.tsrst.srA"),
            ("ssr", "Ar.t.A.t.rA"),
            ("sr", "Ar.t.As.t.rA"),
            ("ss", "Ar.t.Ar.t.rA"),
            ("s", "Ar.t.Ars.t.rA"),
            ("r", "Ar.t.A.t.rA"),
            ("s", "Ar.t.Asr.t.rA"),
            ("t", "A.tsrst.sA"),
            ("", "As.tsrst.sA"),
        ]),
        Subcase::new("reduced2(8.15)", Reduced2, "rs", "st.Ar.t", "tsrst.srA").m_rs(7).terms(&[
            ("ts", "st.A.tsrst.srA"),
            ("t", "st.As.tsrst.srA"),
            ("ssr", "st.A.t.rA"),
            ("sr", "st.As.t.rA"),
            ("ss", "st.Ar.t.rA"),
            ("s", "st.Ars.t.rA"),
            ("r", "st.A.t.rA"),
            ("s", "st.Asr.t.rA"),
            ("s", "tsrst.A"),
            ("", "tsrst.sA"),
        ]),
        Subcase::new("reduced2(8.16)", Reduced2, "rs", "Ar.t.Ar.t", "tsrst.srA").m_rs(7).terms(&[
            ("ts", "Ar.t.A.tsrst.srA"),
            ("t", "Ar.t.As.tsrst.srA"),
            ("ssr", "Ar.t.A.t.rA"),
            ("sr", "Ar.t.As.t.rA"),
            ("ss", "Ar.t.Ar.t.rA"),
            ("st", "A.tsrst.sA"),
            ("s", "As.tsrst.sA"),
            ("r", "Ar.t.A.t.rA"),
            ("s", "Ar.t.Asr.t.rA"),
            ("s", "Ar.tsrst.sA"),
            ("", "Ars.tsrst.sA"),
        ]),
        Subcase::new("reduced2(8.17)", Reduced2, "rs", "X.Ar.t", "tsrst.sA.Y")
            .cond(RightIn("X", "t"))
            .cond(LeftIn("Y", "t"))
            .degree_at_most("rsrs"),
    ]
}

/// Identifiers of every subcase, in statement order.
pub fn case_ids() -> Vec<&'static str> {
    registry().iter().map(|c| c.id).collect()
}

#[derive(Clone, Debug)]
pub struct ExpansionOptions {
    /// Sample cap per subcase, spread over the variants and systems.
    pub samples: usize,
    /// Length bound for free elements `X`, `Y`.
    pub pool_radius: usize,
    /// Length bound for the `u`, `v` of a reduced extension.
    pub extension_radius: usize,
    /// `(m_rs, m_st)` instantiations replacing the defaults.
    pub systems: Option<Vec<(Bond, Bond)>>,
}

impl Default for ExpansionOptions {
    fn default() -> Self {
        ExpansionOptions { samples: 32, pool_radius: 4, extension_radius: 2, systems: None }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    Plain,
    Transposed,
    Mirrored,
    MirroredTransposed,
}

impl Variant {
    const ALL: [Variant; 4] = [Variant::Plain, Variant::Transposed, Variant::Mirrored, Variant::MirroredTransposed];

    fn mirrored(self) -> bool {
        matches!(self, Variant::Mirrored | Variant::MirroredTransposed)
    }

    fn transposed(self) -> bool {
        matches!(self, Variant::Transposed | Variant::MirroredTransposed)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CaseParams {
    pub systems: Vec<String>,
    pub variants: Vec<Variant>,
    pub pool_radius: usize,
    pub samples_cap: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct SampleFailure {
    pub system: String,
    /// `(L(r), L(s), L(t))` in the roles of the statement.
    pub weights: [u32; 3],
    pub variant: Variant,
    pub x: Element,
    pub w: Element,
    pub y: Element,
    pub reason: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExpansionReport {
    pub case_id: String,
    pub params: CaseParams,
    pub samples_run: usize,
    pub failures: Vec<SampleFailure>,
}

impl ExpansionReport {
    pub fn passed(&self) -> bool {
        self.samples_run > 0 && self.failures.is_empty()
    }
}

const ROLE_WEIGHTS: [[u32; 3]; 9] =
    [[1, 1, 1], [2, 1, 1], [1, 2, 1], [1, 1, 2], [3, 1, 2], [1, 2, 2], [2, 3, 1], [2, 2, 2], [3, 2, 2]];

/// A rank-3 system with `m_rt = 2` and the generator playing each role.
struct Instance {
    sys: Arc<CoxeterSystem>,
    /// Generator index of `r`, `s`, `t`.
    role: [usize; 3],
    m_rs: Bond,
    m_st: Bond,
    mirrored: bool,
    a: Option<ElemId>,
    b: Option<ElemId>,
}

impl Instance {
    fn new(m_rs: Bond, m_st: Bond, mirrored: bool, radius: usize) -> Result<Instance> {
        let (sys, role) = if mirrored {
            (CoxeterSystem::rank3(Bond::Finite(2), m_st, m_rs, radius)?, [2, 1, 0])
        } else {
            (CoxeterSystem::rank3(Bond::Finite(2), m_rs, m_st, radius)?, [0, 1, 2])
        };
        let pair = |i: usize, j: usize| {
            let mut g = GenSet::single(role[i]);
            g.insert(role[j]);
            g
        };
        let a = sys.longest_element_id(pair(0, 1)).ok();
        let b = sys.longest_element_id(pair(1, 2)).ok();
        Ok(Instance { sys: Arc::new(sys), role, m_rs, m_st, mirrored, a, b })
    }

    fn describe(&self) -> String {
        let tag = if self.mirrored { " (r and t exchanged)" } else { "" };
        format!("m_rs={},m_st={}{tag}", self.m_rs, self.m_st)
    }

    fn gen(&self, c: char) -> usize {
        self.role["rst".find(c).unwrap()]
    }

    fn roles(&self, roles: &str) -> GenSet {
        let mut g = GenSet::default();
        for c in roles.chars() {
            g.insert(self.gen(c));
        }
        g
    }

    fn weights(&self, rw: [u32; 3]) -> Option<WeightFunction> {
        let mut v = vec![0; 3];
        for i in 0..3 {
            v[self.role[i]] = rw[i];
        }
        let w = WeightFunction::new(v).ok()?;
        self.sys.validate_weights(&w).ok().map(|_| w)
    }

    /// The element of a template and whether every `.` joins a reduced product.
    fn eval(&self, tpl: &str, x: ElemId, y: ElemId) -> Result<(ElemId, bool)> {
        let sys = &*self.sys;
        let (mut acc, mut reduced) = (0, true);
        for token in tpl.split('.') {
            let mut cur = 0;
            for c in token.chars() {
                let rhs = match c {
                    'r' | 's' | 't' => {
                        cur = sys.mul_letters(cur, &[self.gen(c)])?;
                        continue;
                    }
                    'A' => self.a.expect("w_rs is finite"),
                    'B' => self.b.expect("w_st is finite"),
                    'X' => x,
                    'Y' => y,
                    'e' => 0,
                    _ => panic!("bad template letter {c}"),
                };
                cur = sys.mul_id(cur, rhs)?;
            }
            let next = sys.mul_id(acc, cur)?;
            reduced &= sys.length_of(next) == sys.length_of(acc) + sys.length_of(cur);
            acc = next;
        }
        Ok((acc, reduced))
    }

    fn holds(&self, c: &Cond, x: ElemId, y: ElemId) -> Result<bool> {
        let sys = &*self.sys;
        Ok(match c {
            Cond::RightIn(t, set) => sys.right_descents(self.eval(t, x, y)?.0).is_subset(self.roles(set)),
            Cond::LeftIn(t, set) => sys.left_descents(self.eval(t, x, y)?.0).is_subset(self.roles(set)),
            Cond::RightEq(t, set) => sys.right_descents(self.eval(t, x, y)?.0) == self.roles(set),
            Cond::LeftEq(t, set) => sys.left_descents(self.eval(t, x, y)?.0) == self.roles(set),
            Cond::MstAtLeast(m) => self.m_st.finite().map_or(true, |v| v >= *m),
            Cond::AnyOf(cs) => {
                for c in cs {
                    if self.holds(c, x, y)? {
                        return Ok(true);
                    }
                }
                false
            }
        })
    }
}

/// Upper bound for the length of a template's element.
fn template_len(tpl: &str, m_rs: Bond, m_st: Bond, free: usize) -> usize {
    let m = |b: Bond| b.finite().unwrap_or(0) as usize;
    tpl.chars()
        .map(|c| match c {
            'r' | 's' | 't' => 1,
            'A' => m(m_rs),
            'B' => m(m_st),
            'X' | 'Y' => free,
            _ => 0,
        })
        .sum()
}

fn xi_monomial(alg: &HeckeAlgebra, inst: &Instance, mono: &str) -> LaurentPoly {
    let mut c = LaurentPoly::one();
    for ch in mono.chars() {
        c = c * alg.xi(inst.gen(ch)).clone();
    }
    c
}

fn spread<T: Clone>(v: &[T], cap: usize) -> Vec<T> {
    if v.len() <= cap {
        return v.to_vec();
    }
    (0..cap).map(|i| v[i * v.len() / cap].clone()).collect()
}

/// Runs the subcase `case_id` on conforming instances: both sides of the
/// stated identity are computed in the T-basis and compared exactly (or the
/// degree bound is checked for the degree-only subcase). Each sample is tried
/// as stated, transposed, with `r ↔ t`, and both.
pub fn verify_expansion(case_id: &str, opts: &ExpansionOptions) -> Result<ExpansionReport> {
    let reg = registry();
    let case = reg.iter().find(|c| c.id == case_id).ok_or_else(|| Error::UnsupportedLemma(case_id.to_string()))?;
    let systems: Vec<(Bond, Bond)> =
        opts.systems.clone().unwrap_or_else(|| case.default_systems()).into_iter().filter(|&p| case.admits(p)).collect();
    let free_radius = if case.has_free() { opts.pool_radius } else { opts.extension_radius };
    // templates with the extension elements made explicit
    let wrap = |t: &str, left: bool| if case.has_free() { t.to_string() } else if left { format!("X.{t}") } else { format!("{t}.Y") };
    let (xt, yt) = (wrap(case.x, true), wrap(case.y, false));
    let terms: Vec<(&str, String)> = match &case.claim {
        Claim::Terms(ts) => ts.iter().map(|(m, z)| (*m, if case.has_free() { z.to_string() } else { format!("X.{z}.Y") })).collect(),
        Claim::DegreeAtMost(_) => Vec::new(),
    };
    let per_slot = opts.samples.div_ceil(Variant::ALL.len() * systems.len().max(1)).max(1);
    let mut report = ExpansionReport {
        case_id: case.id.to_string(),
        params: CaseParams {
            systems: Vec::new(),
            variants: Variant::ALL.to_vec(),
            pool_radius: free_radius,
            samples_cap: opts.samples,
        },
        samples_run: 0,
        failures: Vec::new(),
    };
    for &(m_rs, m_st) in &systems {
        let mut radius = template_len(&xt, m_rs, m_st, free_radius)
            + template_len(case.w, m_rs, m_st, 0)
            + template_len(&yt, m_rs, m_st, free_radius);
        for c in &case.conds {
            if let Cond::LeftEq(t, _) | Cond::RightEq(t, _) = c {
                radius = radius.max(template_len(t, m_rs, m_st, free_radius));
            }
        }
        for variant in Variant::ALL {
            let inst = Instance::new(m_rs, m_st, variant.mirrored(), radius)?;
            if variant == Variant::Plain {
                report.params.systems.push(inst.describe());
            }
            let sys = inst.sys.clone();
            let weight_choices: Vec<([u32; 3], WeightFunction)> =
                ROLE_WEIGHTS.iter().filter_map(|&rw| inst.weights(rw).map(|w| (rw, w))).collect();
            let w = inst.eval(case.w, 0, 0)?.0;
            let outside = {
                let mut g = sys.all_gens();
                g.0 &= !inst.roles(case.w).0;
                g
            };
            let pool: Vec<ElemId> = sys.ball_ids(free_radius)?.collect();
            // the base product's support, for the reduced-extension condition
            let base_support: Vec<ElemId> = if case.has_free() {
                Vec::new()
            } else {
                let alg = HeckeAlgebra::new(sys.clone(), weight_choices[0].1.clone())?;
                let (x0, y0) = (inst.eval(case.x, 0, 0)?.0, inst.eval(case.y, 0, 0)?.0);
                alg.t_mult(&alg.t_product(x0, w)?, &HeckeElt::t(y0))?.support().collect()
            };
            let mut candidates: Vec<(ElemId, ElemId, ElemId, ElemId)> = Vec::new();
            for &u in &pool {
                for &v in &pool {
                    let (x, xr) = inst.eval(&xt, u, v)?;
                    let (y, yr) = inst.eval(&yt, u, v)?;
                    if !xr || !yr {
                        continue;
                    }
                    if !sys.right_descents(x).is_subset(outside) || !sys.left_descents(y).is_subset(outside) {
                        continue;
                    }
                    let mut ok = true;
                    for c in &case.conds {
                        ok &= inst.holds(c, u, v)?;
                    }
                    for &z in &base_support {
                        let uzv = sys.mul_id(sys.mul_id(u, z)?, v)?;
                        ok &= sys.length_of(uzv) == sys.length_of(u) + sys.length_of(z) + sys.length_of(v);
                    }
                    if ok {
                        candidates.push((u, v, x, y));
                    }
                }
            }
            candidates.sort_by_key(|&(u, v, _, _)| (sys.length_of(u) + sys.length_of(v), u, v));
            for (k, (u, v, x, y)) in spread(&candidates, per_slot).into_iter().enumerate() {
                let (rw, weights) = &weight_choices[k % weight_choices.len()];
                let alg = HeckeAlgebra::new(sys.clone(), weights.clone())?;
                let tr = |z: ElemId| if variant.transposed() { sys.inverse_id(z) } else { z };
                let (lx, lw, ly) = if variant.transposed() { (tr(y), tr(w), tr(x)) } else { (x, w, y) };
                let lhs = alg.t_mult(&alg.t_product(lx, lw)?, &HeckeElt::t(ly))?;
                let mut reasons = Vec::new();
                match &case.claim {
                    Claim::Terms(_) => {
                        let mut rhs = HeckeElt::zero();
                        for (mono, tpl) in &terms {
                            let (z, reduced) = inst.eval(tpl, u, v)?;
                            if !reduced {
                                reasons.push(format!("{tpl} is not a reduced product"));
                            }
                            rhs.add_term(tr(z), &xi_monomial(&alg, &inst, mono));
                        }
                        if lhs != rhs {
                            reasons.push(format!(
                                "lhs {} differs from rhs {}",
                                lhs.display(&sys, "T"),
                                rhs.display(&sys, "T")
                            ));
                        }
                    }
                    Claim::DegreeAtMost(word) => {
                        let bound = alg.weight(inst.eval(word, 0, 0)?.0);
                        if lhs.degree() > Degree::Finite(bound) {
                            reasons.push(format!("degree {} exceeds {bound}", lhs.degree()));
                        }
                    }
                }
                report.samples_run += 1;
                if !reasons.is_empty() {
                    report.failures.push(SampleFailure {
                        system: inst.describe(),
                        weights: *rw,
                        variant,
                        x: sys.element(lx).clone(),
                        w: sys.element(lw).clone(),
                        y: sys.element(ly).clone(),
                        reason: reasons.join("; "),
                    });
                }
            }
        }
    }
    if report.samples_run == 0 {
        return Err(Error::ConstraintUnsatisfiable(case.id.to_string()));
    }
    Ok(report)
}
