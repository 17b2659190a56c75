//! Sparse Laurent polynomials in one variable `q` with integer coefficients.

mod int;

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub use int::Int;

/// Degree of a Laurent polynomial; the zero polynomial has degree `NegInf`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Degree {
    NegInf,
    Finite(i32),
}

impl Degree {
    pub fn finite(self) -> Option<i32> {
        match self {
            Degree::NegInf => None,
            Degree::Finite(d) => Some(d),
        }
    }

    /// Sum of degrees, i.e. the degree of a product of nonzero factors.
    pub fn plus(self, other: Degree) -> Degree {
        match (self, other) {
            (Degree::Finite(a), Degree::Finite(b)) => Degree::Finite(exp_add(a, b)),
            _ => Degree::NegInf,
        }
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::NegInf => f.write_str("-inf"),
            Degree::Finite(d) => write!(f, "{d}"),
        }
    }
}

impl PartialEq<i32> for Degree {
    fn eq(&self, other: &i32) -> bool {
        *self == Degree::Finite(*other)
    }
}

impl PartialOrd<i32> for Degree {
    fn partial_cmp(&self, other: &i32) -> Option<std::cmp::Ordering> {
        Some(self.cmp(&Degree::Finite(*other)))
    }
}

fn exp_add(a: i32, b: i32) -> i32 {
    a.checked_add(b).expect("Laurent exponent overflow")
}

fn exp_neg(a: i32) -> i32 {
    a.checked_neg().expect("Laurent exponent overflow")
}

/// A Laurent polynomial, stored as terms sorted by strictly increasing exponent
/// with no zero coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct LaurentPoly {
    terms: Vec<(i32, Int)>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::monomial(0, 1)
    }

    /// `q^e`.
    pub fn q(e: i32) -> Self {
        Self::monomial(e, 1)
    }

    pub fn monomial(e: i32, c: impl Into<Int>) -> Self {
        let c = c.into();
        if c.is_zero() {
            Self::zero()
        } else {
            LaurentPoly { terms: vec![(e, c)] }
        }
    }

    pub fn constant(c: impl Into<Int>) -> Self {
        Self::monomial(0, c)
    }

    /// `ξ = q^l − q^{−l}`.
    pub fn xi(l: u32) -> Self {
        let l = l as i32;
        Self::from_terms([(l, Int::ONE), (-l, Int::from(-1))])
    }

    /// `q^l + q^{−l}`.
    pub fn q_plus_inverse(l: u32) -> Self {
        let l = l as i32;
        Self::from_terms([(l, Int::ONE), (-l, Int::ONE)])
    }

    /// Builds a polynomial from arbitrary (exponent, coefficient) pairs,
    /// summing repeated exponents.
    pub fn from_terms<C: Into<Int>>(terms: impl IntoIterator<Item = (i32, C)>) -> Self {
        let mut v: Vec<(i32, Int)> = terms.into_iter().map(|(e, c)| (e, c.into())).collect();
        v.sort_by_key(|t| t.0);
        let mut out: Vec<(i32, Int)> = Vec::with_capacity(v.len());
        for (e, c) in v {
            match out.last_mut() {
                Some(last) if last.0 == e => last.1 += &c,
                _ => out.push((e, c)),
            }
        }
        out.retain(|t| !t.1.is_zero());
        LaurentPoly { terms: out }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0 == 0 && self.terms[0].1.is_one()
    }

    pub fn terms(&self) -> &[(i32, Int)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> Degree {
        match self.terms.last() {
            Some((e, _)) => Degree::Finite(*e),
            None => Degree::NegInf,
        }
    }

    /// Lowest exponent, `None` for zero.
    pub fn low_degree(&self) -> Option<i32> {
        self.terms.first().map(|t| t.0)
    }

    /// Coefficient of the top-degree term (zero for the zero polynomial).
    pub fn leading_coeff(&self) -> Int {
        self.terms.last().map(|t| t.1.clone()).unwrap_or_default()
    }

    pub fn coeff(&self, e: i32) -> Int {
        match self.terms.binary_search_by_key(&e, |t| t.0) {
            Ok(i) => self.terms[i].1.clone(),
            Err(_) => Int::ZERO,
        }
    }

    /// The image under `q ↦ q^{-1}`.
    pub fn bar(&self) -> Self {
        LaurentPoly {
            terms: self.terms.iter().rev().map(|(e, c)| (exp_neg(*e), c.clone())).collect(),
        }
    }

    pub fn is_bar_invariant(&self) -> bool {
        let n = self.terms.len();
        (0..n).all(|i| {
            let (e, c) = &self.terms[i];
            let (f, d) = &self.terms[n - 1 - i];
            *e == -*f && c == d
        })
    }

    pub fn is_bar_anti_invariant(&self) -> bool {
        let n = self.terms.len();
        (0..n).all(|i| {
            let (e, c) = &self.terms[i];
            let (f, d) = &self.terms[n - 1 - i];
            *e == -*f && *c == -d
        })
    }

    /// The part of strictly negative degree.
    pub fn negative_part(&self) -> Self {
        LaurentPoly {
            terms: self.terms.iter().take_while(|t| t.0 < 0).cloned().collect(),
        }
    }

    /// Multiplication by `q^k`.
    pub fn shift(&self, k: i32) -> Self {
        LaurentPoly {
            terms: self.terms.iter().map(|(e, c)| (exp_add(*e, k), c.clone())).collect(),
        }
    }

    pub fn scale(&self, c: &Int) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        LaurentPoly {
            terms: self.terms.iter().map(|(e, d)| (*e, d * c)).collect(),
        }
    }

    /// Value at `q = 1`.
    pub fn eval_at_one(&self) -> Int {
        let mut s = Int::ZERO;
        for (_, c) in &self.terms {
            s += c;
        }
        s
    }

    fn merge(&self, other: &Self, negate_other: bool) -> Self {
        let (a, b) = (&self.terms, &other.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
                out.push(a[i].clone());
                i += 1;
            } else if i == a.len() || b[j].0 < a[i].0 {
                let c = if negate_other { -&b[j].1 } else { b[j].1.clone() };
                out.push((b[j].0, c));
                j += 1;
            } else {
                let c = if negate_other { &a[i].1 - &b[j].1 } else { &a[i].1 + &b[j].1 };
                if !c.is_zero() {
                    out.push((a[i].0, c));
                }
                i += 1;
                j += 1;
            }
        }
        LaurentPoly { terms: out }
    }

    /// `self += c · q^k · other`.
    pub fn add_scaled(&mut self, other: &Self, c: &Int, k: i32) {
        if c.is_zero() || other.is_zero() {
            return;
        }
        let scaled = LaurentPoly {
            terms: other.terms.iter().map(|(e, d)| (exp_add(*e, k), d * c)).collect(),
        };
        *self = self.merge(&scaled, false);
    }

    fn mul_impl(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        if other.terms.len() == 1 {
            let (e, c) = &other.terms[0];
            let mut r = self.scale(c);
            if *e != 0 {
                r = r.shift(*e);
            }
            return r;
        }
        if self.terms.len() == 1 {
            return other.mul_impl(self);
        }
        let lo = exp_add(self.terms[0].0, other.terms[0].0);
        let hi = exp_add(self.terms.last().unwrap().0, other.terms.last().unwrap().0);
        let span = (hi as i64 - lo as i64 + 1) as usize;
        let pairs = self.terms.len() * other.terms.len();
        if span <= 4 * pairs + 64 {
            let mut dense = vec![Int::ZERO; span];
            for (e1, c1) in &self.terms {
                for (e2, c2) in &other.terms {
                    let idx = (*e1 as i64 + *e2 as i64 - lo as i64) as usize;
                    let p = c1 * c2;
                    dense[idx] += &p;
                }
            }
            let terms = dense
                .into_iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| (lo + i as i32, c))
                .collect();
            LaurentPoly { terms }
        } else {
            let mut prods = Vec::with_capacity(pairs);
            for (e1, c1) in &self.terms {
                for (e2, c2) in &other.terms {
                    prods.push((exp_add(*e1, *e2), c1 * c2));
                }
            }
            Self::from_terms(prods)
        }
    }
}

impl Add<&LaurentPoly> for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.merge(rhs, false)
    }
}

impl Sub<&LaurentPoly> for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.merge(rhs, true)
    }
}

impl Mul<&LaurentPoly> for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.mul_impl(rhs)
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

impl Add for LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: LaurentPoly) -> LaurentPoly {
        &self + &rhs
    }
}

impl Sub for LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: LaurentPoly) -> LaurentPoly {
        &self - &rhs
    }
}

impl Mul for LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: LaurentPoly) -> LaurentPoly {
        &self * &rhs
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

impl AddAssign<&LaurentPoly> for LaurentPoly {
    fn add_assign(&mut self, rhs: &LaurentPoly) {
        if rhs.is_zero() {
            return;
        }
        *self = self.merge(rhs, false);
    }
}

impl SubAssign<&LaurentPoly> for LaurentPoly {
    fn sub_assign(&mut self, rhs: &LaurentPoly) {
        if rhs.is_zero() {
            return;
        }
        *self = self.merge(rhs, true);
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            if *e == 0 {
                write!(f, "{abs}")?;
                continue;
            }
            if !abs.is_one() {
                write!(f, "{abs}")?;
            }
            if *e == 1 {
                f.write_str("q")?;
            } else {
                write!(f, "q^{e}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPoly({self})")
    }
}

impl Serialize for LaurentPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.terms.serialize(s)
    }
}

impl<'de> Deserialize<'de> for LaurentPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let terms: Vec<(i32, Int)> = Vec::deserialize(d)?;
        let strictly_sorted = terms.windows(2).all(|w| w[0].0 < w[1].0);
        if !strictly_sorted || terms.iter().any(|t| t.1.is_zero()) {
            return Err(serde::de::Error::custom(
                "terms must be sorted by exponent with nonzero coefficients",
            ));
        }
        Ok(LaurentPoly { terms })
    }
}

/// Dense accumulator for sums of products, grown on demand.
#[derive(Clone, Debug, Default)]
pub struct Accumulator {
    lo: i32,
    coeffs: Vec<Int>,
}

impl Accumulator {
    pub fn new() -> Self {
        Self::default()
    }

    fn slot(&mut self, e: i32) -> &mut Int {
        if self.coeffs.is_empty() {
            self.lo = e;
        }
        if e < self.lo {
            let grow = (self.lo - e) as usize;
            self.coeffs.splice(0..0, std::iter::repeat(Int::ZERO).take(grow));
            self.lo = e;
        }
        let idx = (e - self.lo) as usize;
        if idx >= self.coeffs.len() {
            self.coeffs.resize(idx + 1, Int::ZERO);
        }
        &mut self.coeffs[idx]
    }

    pub fn add(&mut self, p: &LaurentPoly) {
        for (e, c) in &p.terms {
            *self.slot(*e) += c;
        }
    }

    /// `self += a · b`, or `a · bar(b)` when `bar_b` is set.
    pub fn add_product(&mut self, a: &LaurentPoly, b: &LaurentPoly, bar_b: bool) {
        for (e1, c1) in &a.terms {
            for (e2, c2) in &b.terms {
                let e2 = if bar_b { exp_neg(*e2) } else { *e2 };
                let p = c1 * c2;
                *self.slot(exp_add(*e1, e2)) += &p;
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Int::is_zero)
    }

    pub fn to_poly(&self) -> LaurentPoly {
        let terms = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (self.lo + i as i32, c.clone()))
            .collect();
        LaurentPoly { terms }
    }

    pub fn clear(&mut self) {
        self.coeffs.clear();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accumulator_matches_products() {
        let a = p(&[(2, 1), (-1, 3)]);
        let b = p(&[(4, -2), (0, 1), (-3, 5)]);
        let mut acc = Accumulator::new();
        acc.add_product(&a, &b, false);
        acc.add_product(&b, &a, true);
        acc.add(&LaurentPoly::q(-9));
        let expected = &(&(&a * &b) + &(&b * &a.bar())) + &LaurentPoly::q(-9);
        assert_eq!(acc.to_poly(), expected);
    }

    fn p(terms: &[(i32, i64)]) -> LaurentPoly {
        LaurentPoly::from_terms(terms.iter().copied())
    }

    #[test]
    fn degrees() {
        assert_eq!(LaurentPoly::zero().degree(), Degree::NegInf);
        assert_eq!(p(&[(3, 1), (-3, 1)]).degree(), 3);
        assert_eq!(LaurentPoly::xi(2).degree(), 2);
        assert!(Degree::NegInf < Degree::Finite(i32::MIN));
    }

    #[test]
    fn bar_examples() {
        assert_eq!(LaurentPoly::q(1).bar(), LaurentPoly::q(-1));
        assert_eq!(LaurentPoly::xi(2).bar(), -LaurentPoly::xi(2));
        assert!(LaurentPoly::xi(3).is_bar_anti_invariant());
        assert!(LaurentPoly::q_plus_inverse(3).is_bar_invariant());
    }

    #[test]
    fn negative_part_examples() {
        assert_eq!(p(&[(2, 1), (0, 3), (-1, 1)]).negative_part(), LaurentPoly::q(-1));
        assert!(LaurentPoly::zero().negative_part().is_zero());
        let a = p(&[(-1, 2), (-4, -3)]);
        assert_eq!((&a - &a.bar()).negative_part(), a);
    }

    #[test]
    fn sparse_product_path() {
        let a = p(&[(1000, 1), (-1000, 1)]);
        let b = p(&[(1000, 1), (-1000, -1)]);
        assert_eq!(&a * &b, p(&[(2000, 1), (-2000, -1)]));
    }

    #[test]
    fn display() {
        assert_eq!(p(&[(2, 1), (0, -3), (-1, 2)]).to_string(), "q^2 - 3 + 2q^-1");
        assert_eq!(p(&[(1, -1)]).to_string(), "-q");
        assert_eq!(LaurentPoly::zero().to_string(), "0");
    }

    #[test]
    fn serde_round_trip() {
        let a = p(&[(-3, 2), (0, -1), (5, 7)]);
        let s = serde_json::to_string(&a).unwrap();
        assert_eq!(s, "[[-3,2],[0,-1],[5,7]]");
        let b: LaurentPoly = serde_json::from_str(&s).unwrap();
        assert_eq!(a, b);
        assert!(serde_json::from_str::<LaurentPoly>("[[1,2],[0,1]]").is_err());
        assert!(serde_json::from_str::<LaurentPoly>("[[1,0]]").is_err());
    }
}
