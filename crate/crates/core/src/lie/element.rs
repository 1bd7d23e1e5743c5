use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_traits::One;
use thiserror::Error;

use crate::scalar::{parse_rational, Poly, Rational, ScalarError};

/// Label of a basis vector: `L[grade,level]` or the central element `c`.
///
/// The derived order is grade ascending, then level ascending, with `Central`
/// after every graded label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BasisIndex {
    Graded { grade: i64, level: i64 },
    Central,
}

impl BasisIndex {
    pub fn l(grade: i64, level: i64) -> Self {
        BasisIndex::Graded { grade, level }
    }

    /// Grade in the Z-gradation; the central element sits in grade 0.
    pub fn grade(&self) -> i64 {
        match self {
            BasisIndex::Graded { grade, .. } => *grade,
            BasisIndex::Central => 0,
        }
    }

    pub fn level(&self) -> Option<i64> {
        match self {
            BasisIndex::Graded { level, .. } => Some(*level),
            BasisIndex::Central => None,
        }
    }
}

impl fmt::Display for BasisIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasisIndex::Graded { grade, level } => write!(f, "L[{grade},{level}]"),
            BasisIndex::Central => f.write_str("c"),
        }
    }
}

/// Finitely supported linear combination of basis labels.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct Element {
    terms: BTreeMap<BasisIndex, Poly>,
}

impl Element {
    pub fn zero() -> Self {
        Element::default()
    }

    pub fn basis(b: BasisIndex) -> Self {
        Element::term(b, Poly::one())
    }

    pub fn l(grade: i64, level: i64) -> Self {
        Element::basis(BasisIndex::l(grade, level))
    }

    pub fn central() -> Self {
        Element::basis(BasisIndex::Central)
    }

    pub fn term(b: BasisIndex, coeff: Poly) -> Self {
        let mut e = Element::zero();
        e.add_term(b, coeff);
        e
    }

    pub fn from_terms<I: IntoIterator<Item = (BasisIndex, Poly)>>(terms: I) -> Self {
        let mut e = Element::zero();
        for (b, c) in terms {
            e.add_term(b, c);
        }
        e
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, b: &BasisIndex) -> Poly {
        self.terms.get(b).cloned().unwrap_or_else(Poly::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&BasisIndex, &Poly)> {
        self.terms.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &BasisIndex> {
        self.terms.keys()
    }

    pub fn add_term(&mut self, b: BasisIndex, coeff: Poly) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.remove(&b) {
            Some(old) => {
                let sum = old.widening_add(&coeff);
                if !sum.is_zero() {
                    self.terms.insert(b, sum);
                }
            }
            None => {
                self.terms.insert(b, coeff);
            }
        }
    }

    pub fn scale(&self, c: &Poly) -> Element {
        Element::from_terms(self.terms.iter().map(|(b, v)| (*b, v.widening_mul(c))))
    }

    pub fn map_coeffs<F: Fn(&Poly) -> Poly>(&self, f: F) -> Element {
        Element::from_terms(self.terms.iter().map(|(b, v)| (*b, f(v))))
    }

    /// Relabels every basis vector; terms mapped to the same label are summed.
    pub fn relabel<F: Fn(BasisIndex) -> BasisIndex>(&self, f: F) -> Element {
        Element::from_terms(self.terms.iter().map(|(b, v)| (f(*b), v.clone())))
    }

    /// Grade shared by every term, if the element is homogeneous and nonzero.
    pub fn homogeneous_grade(&self) -> Option<i64> {
        let mut grades = self.terms.keys().map(BasisIndex::grade);
        let first = grades.next()?;
        grades.all(|g| g == first).then_some(first)
    }

    /// All coefficients as rationals, or an error naming a symbolic one.
    pub fn to_rational_terms(&self) -> Result<BTreeMap<BasisIndex, Rational>, ScalarError> {
        self.terms
            .iter()
            .map(|(b, c)| Ok((*b, c.to_rational()?)))
            .collect()
    }

    pub fn from_rational_terms(terms: &BTreeMap<BasisIndex, Rational>) -> Element {
        Element::from_terms(terms.iter().map(|(b, c)| (*b, Poly::constant(c.clone()))))
    }

    /// Parses `-2*L[0,0] + 1/2*c`. Coefficients are rationals, optionally
    /// parenthesized; a missing coefficient means 1.
    pub fn parse(input: &str) -> Result<Element, ElementParseError> {
        let mut out = Element::zero();
        let src: String = input.chars().filter(|c| !c.is_whitespace()).collect();
        if src == "0" {
            return Ok(out);
        }
        let bad = |reason: &str| ElementParseError::Syntax {
            input: input.to_string(),
            reason: reason.to_string(),
        };
        let mut rest = src.as_str();
        let mut first = true;
        while !rest.is_empty() {
            let mut sign = Rational::one();
            if let Some(r) = rest.strip_prefix('-') {
                sign = -sign;
                rest = r;
            } else if let Some(r) = rest.strip_prefix('+') {
                rest = r;
            } else if !first {
                return Err(bad("expected `+` or `-` between terms"));
            }
            first = false;
            // Coefficient part ends at `*` preceding `L[` or `c`.
            let (coeff, after) = if rest.starts_with("L[") || rest.starts_with('c') {
                (Rational::one(), rest)
            } else {
                let star = rest.find('*').ok_or_else(|| bad("expected `*` after coefficient"))?;
                let text = rest[..star].trim_start_matches('(').trim_end_matches(')');
                (parse_rational(text)?, &rest[star + 1..])
            };
            let (basis, tail) = if let Some(r) = after.strip_prefix("L[") {
                let close = r.find(']').ok_or_else(|| bad("missing `]`"))?;
                let (g, l) = r[..close]
                    .split_once(',')
                    .ok_or_else(|| bad("expected `L[grade,level]`"))?;
                let grade: i64 = g.parse().map_err(|_| bad("invalid grade"))?;
                let level: i64 = l.parse().map_err(|_| bad("invalid level"))?;
                (BasisIndex::l(grade, level), &r[close + 1..])
            } else if let Some(r) = after.strip_prefix('c') {
                (BasisIndex::Central, r)
            } else {
                return Err(bad("expected `L[..]` or `c`"));
            };
            out.add_term(basis, Poly::constant(sign * coeff));
            rest = tail;
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ElementParseError {
    #[error("cannot parse element `{input}`: {reason}")]
    Syntax { input: String, reason: String },
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Element({self})")
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (b, c)) in self.terms.iter().enumerate() {
            let (negative, body) = match c.negated_single_term() {
                Some(abs) => (true, abs),
                None => (false, c.clone()),
            };
            match (k == 0, negative) {
                (true, true) => f.write_str("-")?,
                (true, false) => {}
                (false, true) => f.write_str(" - ")?,
                (false, false) => f.write_str(" + ")?,
            }
            if body == Poly::one() {
                write!(f, "{b}")?;
            } else if body.is_compound() {
                write!(f, "({body})*{b}")?;
            } else {
                write!(f, "{body}*{b}")?;
            }
        }
        Ok(())
    }
}

impl Add<&Element> for &Element {
    type Output = Element;
    fn add(self, rhs: &Element) -> Element {
        let mut out = self.clone();
        for (b, c) in &rhs.terms {
            out.add_term(*b, c.clone());
        }
        out
    }
}

impl Add for Element {
    type Output = Element;
    fn add(self, rhs: Element) -> Element {
        &self + &rhs
    }
}

impl Sub<&Element> for &Element {
    type Output = Element;
    fn sub(self, rhs: &Element) -> Element {
        let mut out = self.clone();
        for (b, c) in &rhs.terms {
            out.add_term(*b, -c);
        }
        out
    }
}

impl Sub for Element {
    type Output = Element;
    fn sub(self, rhs: Element) -> Element {
        &self - &rhs
    }
}

impl Neg for &Element {
    type Output = Element;
    fn neg(self) -> Element {
        self.map_coeffs(|c| -c)
    }
}

impl Neg for Element {
    type Output = Element;
    fn neg(self) -> Element {
        -&self
    }
}

impl std::iter::Sum for Element {
    fn sum<I: Iterator<Item = Element>>(iter: I) -> Element {
        iter.fold(Element::zero(), |acc, e| acc + e)
    }
}
