use std::fmt;
use std::ops::Add;

use serde::{Deserialize, Serialize};

use crate::coxeter::Bond;

/// Distinguished elements of a hyperbolic rank-3 group `r - s - t`
/// (`m_rt = 2`), named by their role.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum DSym {
    E,
    R,
    S,
    T,
    RT,
    Wrs,
    Wst,
    /// `s·w_rs`, present when `L(r) > L(s)`.
    SWrs,
    /// `r·w_rs`, present when `L(s) > L(r)`.
    RWrs,
    /// `s·w_st`, present when `L(t) > L(s)`.
    SWst,
    /// `t·w_st`, present when `L(s) > L(t)`.
    TWst,
}

impl DSym {
    pub const ALL: [DSym; 11] =
        [DSym::E, DSym::R, DSym::S, DSym::T, DSym::RT, DSym::Wrs, DSym::Wst, DSym::SWrs, DSym::RWrs, DSym::SWst, DSym::TWst];

    /// The image under exchanging `r` and `t`.
    pub fn mirror(self) -> DSym {
        match self {
            DSym::R => DSym::T,
            DSym::T => DSym::R,
            DSym::Wrs => DSym::Wst,
            DSym::Wst => DSym::Wrs,
            DSym::SWrs => DSym::SWst,
            DSym::SWst => DSym::SWrs,
            DSym::RWrs => DSym::TWst,
            DSym::TWst => DSym::RWrs,
            other => other,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            DSym::E => "e",
            DSym::R => "r",
            DSym::S => "s",
            DSym::T => "t",
            DSym::RT => "rt",
            DSym::Wrs => "w_rs",
            DSym::Wst => "w_st",
            DSym::SWrs => "sw_rs",
            DSym::RWrs => "rw_rs",
            DSym::SWst => "sw_st",
            DSym::TWst => "tw_st",
        }
    }

    pub fn parse(s: &str) -> Option<DSym> {
        DSym::ALL.into_iter().find(|d| d.name() == s)
    }
}

impl From<DSym> for String {
    fn from(d: DSym) -> String {
        d.name().to_string()
    }
}

impl TryFrom<String> for DSym {
    type Error = String;
    fn try_from(s: String) -> Result<DSym, String> {
        DSym::parse(&s).ok_or_else(|| format!("unknown distinguished element {s:?}"))
    }
}

impl fmt::Display for DSym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Weights `a = L(r)`, `b = L(s)`, `c = L(t)`, the common value `N` and the
/// two non-commuting bonds.
#[derive(Clone, Copy, Debug)]
pub struct TwoCellParams<T> {
    pub a: T,
    pub b: T,
    pub c: T,
    pub n: T,
    pub m_rs: Bond,
    pub m_st: Bond,
}

impl<T: Copy> TwoCellParams<T> {
    pub fn mirror(&self) -> TwoCellParams<T> {
        TwoCellParams { a: self.c, b: self.b, c: self.a, n: self.n, m_rs: self.m_st, m_st: self.m_rs }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "lowercase")]
pub enum Verdict {
    Same,
    /// Matched case `case` of the list, possibly after exchanging `r` and `t`.
    Different { case: u8, mirrored: bool },
}

impl Verdict {
    pub fn is_same(self) -> bool {
        self == Verdict::Same
    }
}

fn pair(x: DSym, y: DSym, p: DSym, q: DSym) -> bool {
    (x == p && y == q) || (x == q && y == p)
}

fn direct<T: Copy + PartialOrd + Add<Output = T>>(x: DSym, y: DSym, p: &TwoCellParams<T>) -> Option<u8> {
    use DSym::*;
    let (a, b, c, n) = (p.a, p.b, p.c, p.n);
    if pair(x, y, Wrs, T) {
        Some(1)
    } else if pair(x, y, R, T) && b > a {
        Some(2)
    } else if pair(x, y, SWrs, T) && a > b {
        Some(3)
    } else if pair(x, y, SWrs, TWst) && a > b && b > c && a + c > n {
        Some(4)
    } else if pair(x, y, SWrs, SWst) && a > b && c > b && a + c > n {
        Some(5)
    } else if pair(x, y, RWrs, RT) && a < b && p.m_st == Bond::Finite(3) {
        Some(6)
    } else {
        None
    }
}

/// Two distinguished elements with the same `a′` lie in different two-sided
/// cells exactly in the six listed configurations and their `r ↔ t` mirrors.
pub fn twocells_case<T: Copy + PartialOrd + Add<Output = T>>(d1: DSym, d2: DSym, p: &TwoCellParams<T>) -> Verdict {
    if let Some(case) = direct(d1, d2, p) {
        return Verdict::Different { case, mirrored: false };
    }
    if let Some(case) = direct(d1.mirror(), d2.mirror(), &p.mirror()) {
        return Verdict::Different { case, mirrored: true };
    }
    Verdict::Same
}
